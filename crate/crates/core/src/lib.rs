//! Exact tools for amicable orthogonal designs and the orthogonal space-time
//! block codes built from them.
//!
//! Everything algebraic works over `Z[i, √2, 1/2]` ([`ExactScalar`]), so
//! orthogonality, amicability and disjointness checks are exact.

pub mod catalog;
pub mod code;
pub mod construct;
pub mod design;
pub mod document;
pub mod equiv;
pub mod error;
pub mod exact;
pub mod matrix;
pub mod power;
pub mod sim;

pub use catalog::{fixture, fixture_recipe, frozen_pairing, parse_code, parse_entry, FIXTURE_NAMES};
pub use code::{
    assemble, equalize_types, extract_dispersion, rate, search_pairing, LinearForm, Part, SymbolPairing, SymbolicCode,
    Term,
};
pub use construct::{
    catalog_family, catalog_seed, construct1, construct1_with, construct2, construct2_with, seed_catalog,
    verify_mn_seed, CatalogEntry, KronOrder, MnSeed, Target, SEED_CATALOG_NAMES,
};
pub use design::{
    check_amicable, classify, common_gram_scale, gram_types, max_variables_bound, verify_af, verify_aod, verify_ostbc,
    Condition, ConstructionId, DesignClass, DispersionFamily, Provenance, SymbolicDesign, TypeVector, VerifyReport,
    Violation,
};
pub use document::{catalog_names, resolve_name, Document};
pub use equiv::{
    appendix_transform, apply_transform, extract_blocks, match_layout, Block, BlockLayout, BlockPattern, Cell,
    MonomialTransform, PatternId, SignedPermutation, Q2, Q8, SWAPPED_Q2,
};
pub use error::{Error, Result};
pub use exact::{ExactScalar, RealSqrt2};
pub use matrix::ExactMatrix;
pub use power::{
    code_types, guideline_check, power_report, power_report_with_threshold, render_delimited, render_report_delimited,
    render_report_text, render_table, table_constellations, table_report, Constellation, Metric, PowerReport,
    PrintedRow, PrintedValue, TableRow,
};
pub use sim::{equivalent_channel, normalized_codeword_energy, run_ber, BerPoint, BerResult, SimConfig};
