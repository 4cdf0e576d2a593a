//! Recursive AOD/AF constructions and the catalogue of starting objects.
//!
//! Construction 1 lifts an order-`n` family to order `4n` using an order-4
//! `{M, N}` seed; Construction 2 lifts to order `2n` with fixed 2×2 factors.
//! Both add variables (4 and 2 respectively), so starting from a family that
//! meets the `2a + 2` bound keeps meeting it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::design::{
    check_amicable_sets, check_disjoint, gram, Condition, ConstructionId, DispersionFamily, KernelIds, Provenance,
    VerifyReport, Violation,
};
use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::matrix::ExactMatrix;

/// Three `M` and three `N` matrices of order 4 feeding Construction 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MnSeed {
    pub label: String,
    pub m_mats: Vec<ExactMatrix>,
    pub n_mats: Vec<ExactMatrix>,
}

impl MnSeed {
    pub fn new(label: impl Into<String>, m_mats: Vec<ExactMatrix>, n_mats: Vec<ExactMatrix>) -> Result<Self> {
        if m_mats.len() != 3 || n_mats.len() != 3 {
            return Err(Error::Precondition("an {M, N} seed has exactly three M and three N matrices".into()));
        }
        if let Some(bad) = m_mats.iter().chain(&n_mats).find(|m| m.shape() != (4, 4)) {
            return Err(Error::shape("mn seed", (4, 4), bad.shape()));
        }
        Ok(MnSeed { label: label.into(), m_mats, n_mats })
    }

    /// The seed viewed as an order-4 family `{M_1, M_2, M_3; N_1, N_2, N_3}`.
    pub fn as_family(&self) -> DispersionFamily {
        DispersionFamily::new(self.label.clone(), self.m_mats.clone(), self.n_mats.clone()).expect("4x4 seed")
    }

    fn is_complex(&self) -> bool {
        self.m_mats.iter().chain(&self.n_mats).any(ExactMatrix::has_complex_entries)
    }
}

/// Whether a construction is meant to yield an AOD or only an AF.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    Aod,
    Af,
}

/// Checks the seed conditions. For an AF target the disjointness conditions
/// (0) and (iv) are skipped and the seed types may exceed 1.
pub fn verify_mn_seed(seed: &MnSeed, target: Target) -> VerifyReport {
    let named = |p: &str, v: &[ExactMatrix]| -> Vec<(String, ExactMatrix)> {
        v.iter().enumerate().map(|(i, m)| (format!("{p}{}", i + 1), m.clone())).collect()
    };
    let m_own = named("M", &seed.m_mats);
    let n_own = named("N", &seed.n_mats);
    let m: Vec<(String, &ExactMatrix)> = m_own.iter().map(|(n, x)| (n.clone(), x)).collect();
    let n: Vec<(String, &ExactMatrix)> = n_own.iter().map(|(n, x)| (n.clone(), x)).collect();

    let mut v = Vec::new();
    let identity = ExactMatrix::identity(4);
    if target == Target::Aod {
        v.extend(check_disjoint(&m, Condition::SeedDisjoint));
        v.extend(check_disjoint(&n, Condition::SeedDisjoint));
    }
    let ids = KernelIds {
        weighing: Condition::SeedWeighing,
        anti: Condition::SeedAntiCommute,
        amicable: Condition::SeedAmicable,
    };
    v.extend(check_amicable_sets(&m, &n, &ids, false));
    for (name, x) in m.iter().chain(&n) {
        if target == Target::Aod {
            let g = gram(x);
            if g != identity && !v.iter().any(|w| w.condition == Condition::SeedWeighing && w.matrices[0] == *name) {
                v.push(Violation { condition: Condition::SeedWeighing, matrices: vec![name.clone()], product: g });
            }
            let diag = x.hadamard(&identity).expect("4x4");
            if !diag.is_zero() {
                v.push(Violation {
                    condition: Condition::SeedOffDiagonal,
                    matrices: vec![name.clone()],
                    product: diag,
                });
            }
        }
        let skew = &x.hermitian() + *x;
        if !skew.is_zero() {
            v.push(Violation { condition: Condition::SeedSkew, matrices: vec![name.clone()], product: skew });
        }
    }
    VerifyReport::from_violations(v)
}

/// Kronecker factor order used when lifting.
///
/// `SeedOuter` (`M ⊗ B`, `I ⊗ A`) reproduces the printed example codes
/// literally; `SeedInner` (`B ⊗ M`, `A ⊗ I`) is the other arrangement. The two
/// results are related by a perfect-shuffle permutation of rows and columns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum KronOrder {
    #[default]
    SeedOuter,
    SeedInner,
}

impl KronOrder {
    fn lift(self, member: &ExactMatrix, seed: &ExactMatrix) -> ExactMatrix {
        match self {
            KronOrder::SeedOuter => seed.kron(member),
            KronOrder::SeedInner => member.kron(seed),
        }
    }
}

/// Construction 1 with the default factor order.
pub fn construct1(fam: &DispersionFamily, seed: &MnSeed) -> Result<DispersionFamily> {
    construct1_with(fam, seed, KronOrder::default())
}

/// `{B_1·M_1, B_1·M_2, B_1·M_3, A_i·I_4 (i ≥ 2); A_1·N_1, A_1·N_2, A_1·N_3, B_q·I_4 (q ≥ 2)}`
/// where `·` is the Kronecker product in the chosen order.
pub fn construct1_with(fam: &DispersionFamily, seed: &MnSeed, order: KronOrder) -> Result<DispersionFamily> {
    if fam.s() == 0 || fam.t() == 0 {
        return Err(Error::Precondition(format!(
            "construct1 needs s ≥ 1 and t ≥ 1, got s = {}, t = {}",
            fam.s(),
            fam.t()
        )));
    }
    let check = verify_mn_seed(seed, Target::Af);
    if !check.passed {
        return Err(Error::Precondition(format!(
            "seed '{}' violates {}",
            seed.label,
            check.violations.iter().map(|v| v.condition.id()).collect::<Vec<_>>().join(", ")
        )));
    }
    let i4 = ExactMatrix::identity(4);
    let (a1, b1) = (&fam.a_mats[0], &fam.b_mats[0]);
    let a_mats = seed
        .m_mats
        .iter()
        .map(|m| order.lift(b1, m))
        .chain(fam.a_mats[1..].iter().map(|a| order.lift(a, &i4)))
        .collect();
    let b_mats = seed
        .n_mats
        .iter()
        .map(|n| order.lift(a1, n))
        .chain(fam.b_mats[1..].iter().map(|b| order.lift(b, &i4)))
        .collect();
    let mut out = DispersionFamily::with_flag(
        format!("c1({}, {})", fam.label, seed.label),
        a_mats,
        b_mats,
        fam.complex || seed.is_complex(),
    )?;
    out.provenance =
        Some(Provenance { input: fam.label.clone(), seed: Some(seed.label.clone()), construction: ConstructionId::C1 });
    Ok(out)
}

/// The fixed 2×2 factors of Construction 2.
pub fn construction2_factors() -> [ExactMatrix; 3] {
    [
        ExactMatrix::from_rows(&[[0i64, 1], [-1, 0]]),
        ExactMatrix::from_rows(&[[0i64, 1], [1, 0]]),
        ExactMatrix::from_rows(&[[1i64, 0], [0, -1]]),
    ]
}

pub fn construct2(fam: &DispersionFamily) -> Result<DispersionFamily> {
    construct2_with(fam, KronOrder::default())
}

/// `{B_1·N_1, A_i·I_2 (i ≥ 1); B_1·N_2, B_1·N_3, B_q·I_2 (q ≥ 2)}`.
pub fn construct2_with(fam: &DispersionFamily, order: KronOrder) -> Result<DispersionFamily> {
    if fam.t() == 0 {
        return Err(Error::Precondition("construct2 needs t ≥ 1".into()));
    }
    let [n1, n2, n3] = construction2_factors();
    let i2 = ExactMatrix::identity(2);
    let b1 = &fam.b_mats[0];
    let a_mats = std::iter::once(order.lift(b1, &n1)).chain(fam.a_mats.iter().map(|a| order.lift(a, &i2))).collect();
    let b_mats = [order.lift(b1, &n2), order.lift(b1, &n3)]
        .into_iter()
        .chain(fam.b_mats[1..].iter().map(|b| order.lift(b, &i2)))
        .collect();
    let mut out = DispersionFamily::with_flag(format!("c2({})", fam.label), a_mats, b_mats, fam.complex)?;
    out.provenance = Some(Provenance { input: fam.label.clone(), seed: None, construction: ConstructionId::C2 });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogEntry {
    Family(DispersionFamily),
    Seed(MnSeed),
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (label, a, b, an, bn) = match self {
            CatalogEntry::Family(fam) => (&fam.label, &fam.a_mats, &fam.b_mats, "A", "B"),
            CatalogEntry::Seed(s) => (&s.label, &s.m_mats, &s.n_mats, "M", "N"),
        };
        writeln!(f, "{label}")?;
        for (prefix, set) in [(an, a), (bn, b)] {
            for (i, m) in set.iter().enumerate() {
                writeln!(f, "{prefix}{}:", i + 1)?;
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

/// Names accepted by [`seed_catalog`].
pub const SEED_CATALOG_NAMES: [&str; 6] = ["af2-ex1", "af2-ex2-complex", "aod2-ex3", "mn-eq6", "mn-eq16", "aod1-unit"];

fn real(rows: &[[i64; 2]; 2]) -> ExactMatrix {
    ExactMatrix::from_rows(rows)
}

fn real4(rows: &[[i64; 4]; 4]) -> ExactMatrix {
    ExactMatrix::from_rows(rows)
}

// entries given as (re, im) Gaussian integers
fn gauss(rows: &[[(i64, i64); 2]; 2]) -> ExactMatrix {
    let entries = rows.iter().flatten().map(|&(re, im)| ExactScalar::gaussian(re, im)).collect();
    ExactMatrix::from_entries(2, 2, entries).expect("2x2")
}

fn mn_eq6() -> (Vec<ExactMatrix>, Vec<ExactMatrix>) {
    let m = vec![
        real4(&[[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]),
        real4(&[[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]]),
        real4(&[[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]]),
    ];
    let n = vec![
        real4(&[[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]),
        real4(&[[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]),
        real4(&[[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]]),
    ];
    (m, n)
}

fn mn_eq16() -> (Vec<ExactMatrix>, Vec<ExactMatrix>) {
    let m = vec![
        real4(&[[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]),
        real4(&[[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]),
        real4(&[[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]]),
    ];
    let n = vec![
        real4(&[[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]),
        real4(&[[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]]),
        real4(&[[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]]),
    ];
    (m, n)
}

/// Looks up a literal starting object by name.
pub fn seed_catalog(name: &str) -> Result<CatalogEntry> {
    let fam = |a, b| DispersionFamily::new(name, a, b).map(CatalogEntry::Family);
    match name {
        "af2-ex1" => fam(
            vec![real(&[[1, -1], [-1, -1]]), real(&[[1, 1], [1, -1]])],
            vec![real(&[[1, -1], [1, 1]]), real(&[[-1, -1], [1, -1]])],
        ),
        "af2-ex2-complex" => fam(
            vec![gauss(&[[(1, 0), (-1, 0)], [(0, -1), (0, -1)]]), gauss(&[[(1, 0), (1, 0)], [(0, 1), (0, -1)]])],
            vec![gauss(&[[(1, 0), (-1, 0)], [(0, 1), (0, 1)]]), gauss(&[[(-1, 0), (-1, 0)], [(0, 1), (0, -1)]])],
        ),
        "aod2-ex3" => fam(
            vec![real(&[[-1, 1], [1, 1]]), real(&[[1, 1], [1, -1]])],
            vec![real(&[[1, -1], [1, 1]]), real(&[[1, 1], [-1, 1]])],
        ),
        "aod1-unit" => fam(vec![ExactMatrix::identity(1)], vec![ExactMatrix::identity(1)]),
        "mn-eq6" => {
            let (m, n) = mn_eq6();
            MnSeed::new(name, m, n).map(CatalogEntry::Seed)
        }
        "mn-eq16" => {
            let (m, n) = mn_eq16();
            MnSeed::new(name, m, n).map(CatalogEntry::Seed)
        }
        _ => Err(Error::UnknownName { kind: "catalog entry", name: name.to_string() }),
    }
}

pub fn catalog_family(name: &str) -> Result<DispersionFamily> {
    match seed_catalog(name)? {
        CatalogEntry::Family(f) => Ok(f),
        CatalogEntry::Seed(_) => Err(Error::UnknownName { kind: "family", name: name.to_string() }),
    }
}

pub fn catalog_seed(name: &str) -> Result<MnSeed> {
    match seed_catalog(name)? {
        CatalogEntry::Seed(s) => Ok(s),
        CatalogEntry::Family(_) => Err(Error::UnknownName { kind: "mn seed", name: name.to_string() }),
    }
}
