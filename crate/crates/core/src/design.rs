//! Dispersion families and the constraint systems they are checked against.
//!
//! A family `{A_1..A_s; B_1..B_t}` of `n×n` matrices is an *amicable family*
//! (AF) when
//!
//! * (i)   `A_i^H A_i = f_i I` and `B_q^H B_q = g_q I`,
//! * (ii)  `A_i^H A_l + A_l^H A_i = 0` for `i ≠ l` (same for the `B`s),
//! * (iii) `A_i^H B_q = B_q^H A_i` for all `i, q`,
//!
//! and an *amicable orthogonal design* (AOD) when additionally the members of
//! each set have pairwise disjoint support and entries in `{0, ±1}`
//! (`{0, ±1, ±j}` for complex-flagged families).

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::code::SymbolicCode;
use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::matrix::ExactMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructionId {
    C1,
    C2,
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstructionId::C1 => "c1",
            ConstructionId::C2 => "c2",
        })
    }
}

/// Where a constructed family came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<String>,
    pub construction: ConstructionId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawFamily")]
pub struct DispersionFamily {
    pub order: usize,
    pub complex: bool,
    pub label: String,
    pub a_mats: Vec<ExactMatrix>,
    pub b_mats: Vec<ExactMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Deserialize)]
struct RawFamily {
    order: usize,
    complex: bool,
    label: String,
    a_mats: Vec<ExactMatrix>,
    b_mats: Vec<ExactMatrix>,
    #[serde(default)]
    provenance: Option<Provenance>,
}

impl TryFrom<RawFamily> for DispersionFamily {
    type Error = Error;
    fn try_from(raw: RawFamily) -> Result<Self> {
        let mut fam = DispersionFamily::with_flag(raw.label, raw.a_mats, raw.b_mats, raw.complex)?;
        if fam.order != raw.order {
            return Err(Error::Precondition(format!(
                "declared order {} but matrices are {}x{}",
                raw.order, fam.order, fam.order
            )));
        }
        fam.provenance = raw.provenance;
        Ok(fam)
    }
}

impl DispersionFamily {
    /// Creates a family, inferring the complex flag from the entries.
    pub fn new(label: impl Into<String>, a_mats: Vec<ExactMatrix>, b_mats: Vec<ExactMatrix>) -> Result<Self> {
        let complex = a_mats.iter().chain(&b_mats).any(ExactMatrix::has_complex_entries);
        DispersionFamily::with_flag(label, a_mats, b_mats, complex)
    }

    pub fn with_flag(
        label: impl Into<String>,
        a_mats: Vec<ExactMatrix>,
        b_mats: Vec<ExactMatrix>,
        complex: bool,
    ) -> Result<Self> {
        let first = a_mats
            .first()
            .or(b_mats.first())
            .ok_or_else(|| Error::Precondition("a family needs at least one matrix".into()))?;
        let order = first.rows();
        for (i, m) in a_mats.iter().chain(&b_mats).enumerate() {
            if m.shape() != (order, order) {
                return Err(Error::shape("family member", (order, order), m.shape()));
            }
            if !complex && m.has_complex_entries() {
                return Err(Error::Precondition(format!(
                    "member {} has complex entries but the family is flagged real",
                    i + 1
                )));
            }
        }
        Ok(DispersionFamily { order, complex, label: label.into(), a_mats, b_mats, provenance: None })
    }

    pub fn s(&self) -> usize {
        self.a_mats.len()
    }

    pub fn t(&self) -> usize {
        self.b_mats.len()
    }

    /// Total number of variables `s + t`.
    pub fn variables(&self) -> usize {
        self.s() + self.t()
    }

    fn members(&self) -> impl Iterator<Item = (String, &ExactMatrix)> {
        let a = self.a_mats.iter().enumerate().map(|(i, m)| (format!("A{}", i + 1), m));
        let b = self.b_mats.iter().enumerate().map(|(i, m)| (format!("B{}", i + 1), m));
        a.chain(b)
    }

    /// Rescales every member so that its smallest nonzero entry has unit
    /// modulus. This undoes per-symbol power normalization (e.g. TJC's 1/√2)
    /// and recovers the integral "type" of the underlying design.
    pub fn to_weighing_form(&self) -> Result<DispersionFamily> {
        let rescale = |name: String, m: &ExactMatrix| -> Result<ExactMatrix> {
            let min = m
                .entries()
                .iter()
                .filter(|s| !s.is_zero())
                .map(|s| s.norm_sqr().re())
                .min()
                .ok_or_else(|| Error::Precondition(format!("{name} is the zero matrix")))?;
            let r = min
                .as_rational()
                .ok_or_else(|| Error::NotRepresentable(format!("{name}: minimum modulus² {min} is irrational")))?;
            let k = log2_exact_i128(r).ok_or_else(|| {
                Error::NotRepresentable(format!("{name}: minimum modulus² {r} is not a power of two"))
            })?;
            Ok(m.map(|s| s.scale_sqrt2_pow(-k)))
        };
        let mut out = self.clone();
        out.a_mats =
            self.a_mats.iter().enumerate().map(|(i, m)| rescale(format!("A{}", i + 1), m)).collect::<Result<_>>()?;
        out.b_mats =
            self.b_mats.iter().enumerate().map(|(i, m)| rescale(format!("B{}", i + 1), m)).collect::<Result<_>>()?;
        Ok(out)
    }

    /// Largest integer component over all members.
    pub fn max_component(&self) -> i64 {
        self.a_mats.iter().chain(&self.b_mats).map(ExactMatrix::max_component).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub(crate) fn log2_exact(r: Ratio<i64>) -> Option<i32> {
    log2_exact_i128(Ratio::new(i128::from(*r.numer()), i128::from(*r.denom())))
}

fn log2_exact_i128(r: Ratio<i128>) -> Option<i32> {
    let (n, d) = (*r.numer(), *r.denom());
    if n <= 0 || d <= 0 {
        return None;
    }
    match (n.count_ones(), d.count_ones()) {
        (1, 1) => Some(n.trailing_zeros() as i32 - d.trailing_zeros() as i32),
        _ => None,
    }
}

/// The Gram scalars `(f_1..f_s; g_1..g_t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeVector {
    pub f: Vec<Ratio<i64>>,
    pub g: Vec<Ratio<i64>>,
}

impl TypeVector {
    pub fn type_sum(&self) -> Ratio<i64> {
        self.f.iter().chain(&self.g).copied().sum()
    }

    /// All types are the same value.
    pub fn is_constant(&self) -> bool {
        let mut all = self.f.iter().chain(&self.g);
        match all.next() {
            Some(first) => all.all(|x| x == first),
            None => true,
        }
    }

    pub fn min(&self) -> Option<Ratio<i64>> {
        self.f.iter().chain(&self.g).min().copied()
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Ratio<i64>]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        write!(f, "({}; {})", join(&self.f), join(&self.g))
    }
}

/// Constraint identifiers used in violation records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Condition {
    #[serde(rename = "2i")]
    UnitGram,
    #[serde(rename = "2ii")]
    AntiCommute,
    #[serde(rename = "2iii")]
    Amicable,
    #[serde(rename = "4-0")]
    Disjoint,
    #[serde(rename = "4i")]
    Weighing,
    #[serde(rename = "4ii")]
    FamilyAntiCommute,
    #[serde(rename = "4iii")]
    FamilyAmicable,
    /// Entry alphabet restriction for AODs.
    #[serde(rename = "alphabet")]
    Alphabet,
    #[serde(rename = "5-0")]
    SeedDisjoint,
    #[serde(rename = "5i")]
    SeedWeighing,
    #[serde(rename = "5ii")]
    SeedAntiCommute,
    #[serde(rename = "5iii")]
    SeedAmicable,
    #[serde(rename = "5iv")]
    SeedOffDiagonal,
    #[serde(rename = "5v")]
    SeedSkew,
}

impl Condition {
    pub fn id(&self) -> &'static str {
        match self {
            Condition::UnitGram => "2i",
            Condition::AntiCommute => "2ii",
            Condition::Amicable => "2iii",
            Condition::Disjoint => "4-0",
            Condition::Weighing => "4i",
            Condition::FamilyAntiCommute => "4ii",
            Condition::FamilyAmicable => "4iii",
            Condition::Alphabet => "alphabet",
            Condition::SeedDisjoint => "5-0",
            Condition::SeedWeighing => "5i",
            Condition::SeedAntiCommute => "5ii",
            Condition::SeedAmicable => "5iii",
            Condition::SeedOffDiagonal => "5iv",
            Condition::SeedSkew => "5v",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    /// Members involved, e.g. `["A1", "B2"]` (1-based).
    pub matrices: Vec<String>,
    /// The product that should have vanished (or equalled a scaled identity).
    pub product: ExactMatrix,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        VerifyReport { passed: violations.is_empty(), violations }
    }

    pub fn merge(mut self, other: VerifyReport) -> Self {
        self.violations.extend(other.violations);
        self.passed = self.violations.is_empty();
        self
    }

    pub fn fails_on(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return writeln!(f, "PASS");
        }
        writeln!(f, "FAIL ({} violations)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  [{}] {}", v.condition, v.matrices.join(", "))?;
            for line in v.product.to_string().lines() {
                writeln!(f, "      {line}")?;
            }
        }
        Ok(())
    }
}

// x^H y + y^H x, the kernel shared by 2(ii), 4(ii) and 5(ii).
pub(crate) fn anti_commutator(x: &ExactMatrix, y: &ExactMatrix) -> ExactMatrix {
    let xy = x.hermitian().mul(y).expect("square members");
    let yx = y.hermitian().mul(x).expect("square members");
    &xy + &yx
}

// x^H y - y^H x, zero exactly when x and y are amicable.
pub(crate) fn amicable_defect(x: &ExactMatrix, y: &ExactMatrix) -> ExactMatrix {
    let xy = x.hermitian().mul(y).expect("square members");
    let yx = y.hermitian().mul(x).expect("square members");
    &xy - &yx
}

pub(crate) fn gram(x: &ExactMatrix) -> ExactMatrix {
    x.hermitian().mul(x).expect("gram")
}

fn rational_gram(x: &ExactMatrix) -> std::result::Result<Ratio<i64>, ExactMatrix> {
    let g = gram(x);
    match g.scalar_identity_multiple().and_then(|s| s.to_rational()) {
        Some(r) if r > Ratio::from_integer(0) => Ok(r),
        _ => Err(g),
    }
}

pub(crate) struct KernelIds {
    pub weighing: Condition,
    pub anti: Condition,
    pub amicable: Condition,
}

/// Checks (i)–(iii) over two named sets; `common_gram` demands one shared scalar.
pub(crate) fn check_amicable_sets(
    a: &[(String, &ExactMatrix)],
    b: &[(String, &ExactMatrix)],
    ids: &KernelIds,
    common_gram: bool,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut reference: Option<ExactScalar> = None;
    for (name, m) in a.iter().chain(b) {
        let g = gram(m);
        let ok = match g.scalar_identity_multiple() {
            Some(s) if common_gram => match reference {
                None => {
                    reference = Some(s);
                    !s.is_zero() && s.is_real()
                }
                Some(r) => s == r,
            },
            Some(s) => s.to_rational().is_some_and(|r| r > Ratio::from_integer(0)),
            None => false,
        };
        if !ok {
            out.push(Violation { condition: ids.weighing, matrices: vec![name.clone()], product: g });
        }
    }
    for set in [a, b] {
        for i in 0..set.len() {
            for l in (i + 1)..set.len() {
                let p = anti_commutator(set[i].1, set[l].1);
                if !p.is_zero() {
                    out.push(Violation {
                        condition: ids.anti,
                        matrices: vec![set[i].0.clone(), set[l].0.clone()],
                        product: p,
                    });
                }
            }
        }
    }
    for (an, am) in a {
        for (bn, bm) in b {
            let p = amicable_defect(am, bm);
            if !p.is_zero() {
                out.push(Violation { condition: ids.amicable, matrices: vec![an.clone(), bn.clone()], product: p });
            }
        }
    }
    out
}

pub(crate) fn check_disjoint(set: &[(String, &ExactMatrix)], id: Condition) -> Vec<Violation> {
    let mut out = Vec::new();
    for i in 0..set.len() {
        for l in (i + 1)..set.len() {
            let h = set[i].1.hadamard(set[l].1).expect("same order");
            if !h.is_zero() {
                out.push(Violation { condition: id, matrices: vec![set[i].0.clone(), set[l].0.clone()], product: h });
            }
        }
    }
    out
}

const FAMILY_IDS: KernelIds = KernelIds {
    weighing: Condition::Weighing,
    anti: Condition::FamilyAntiCommute,
    amicable: Condition::FamilyAmicable,
};

fn named<'a>(prefix: &str, mats: &'a [ExactMatrix]) -> Vec<(String, &'a ExactMatrix)> {
    mats.iter().enumerate().map(|(i, m)| (format!("{prefix}{}", i + 1), m)).collect()
}

/// Extracts the type vector; every Gram must be a positive rational multiple of `I`.
pub fn gram_types(fam: &DispersionFamily) -> Result<TypeVector> {
    let mut f = Vec::with_capacity(fam.s());
    let mut g = Vec::with_capacity(fam.t());
    for (name, m) in fam.members() {
        let r = rational_gram(m).map_err(|_| Error::NotWeighing(name.clone()))?;
        if name.starts_with('A') {
            f.push(r);
        } else {
            g.push(r);
        }
    }
    Ok(TypeVector { f, g })
}

/// Checks the amicable-family conditions (i), (ii), (iii).
pub fn verify_af(fam: &DispersionFamily) -> VerifyReport {
    let a = named("A", &fam.a_mats);
    let b = named("B", &fam.b_mats);
    VerifyReport::from_violations(check_amicable_sets(&a, &b, &FAMILY_IDS, false))
}

/// Checks the full AOD system: disjointness, entry alphabet and (i)–(iii).
pub fn verify_aod(fam: &DispersionFamily) -> VerifyReport {
    let a = named("A", &fam.a_mats);
    let b = named("B", &fam.b_mats);
    let mut v = check_disjoint(&a, Condition::Disjoint);
    v.extend(check_disjoint(&b, Condition::Disjoint));
    for (name, m) in a.iter().chain(&b) {
        let ok = if fam.complex { m.is_quaternary_unit() } else { m.is_ternary() };
        if !ok {
            v.push(Violation { condition: Condition::Alphabet, matrices: vec![name.clone()], product: (*m).clone() });
        }
    }
    v.extend(check_amicable_sets(&a, &b, &FAMILY_IDS, false));
    VerifyReport::from_violations(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DesignClass {
    #[serde(rename = "AOD")]
    Aod,
    #[serde(rename = "AF")]
    Af,
    #[serde(rename = "invalid")]
    Invalid,
}

impl fmt::Display for DesignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DesignClass::Aod => "AOD",
            DesignClass::Af => "AF",
            DesignClass::Invalid => "invalid",
        })
    }
}

pub fn classify(fam: &DispersionFamily) -> DesignClass {
    if verify_aod(fam).passed {
        DesignClass::Aod
    } else if verify_af(fam).passed {
        DesignClass::Af
    } else {
        DesignClass::Invalid
    }
}

/// Upper bound `2a + 2` on `s + t` for an AOD of order `n = 2^a · b`, `b` odd.
pub fn max_variables_bound(n: usize) -> usize {
    assert!(n >= 1, "order must be positive");
    2 * n.trailing_zeros() as usize + 2
}

/// A formal design `Σ M_i a_i`, held as its coefficient matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicDesign {
    pub order: usize,
    pub coefficients: Vec<ExactMatrix>,
}

impl SymbolicDesign {
    pub fn new(coefficients: Vec<ExactMatrix>) -> Result<Self> {
        let order = coefficients.first().ok_or_else(|| Error::Precondition("design without variables".into()))?.rows();
        if let Some(bad) = coefficients.iter().find(|m| m.shape() != (order, order)) {
            return Err(Error::shape("symbolic design", (order, order), bad.shape()));
        }
        Ok(SymbolicDesign { order, coefficients })
    }
}

/// Whether `𝒜^H ℬ = ℬ^H 𝒜` holds identically in the (disjoint) variables.
pub fn check_amicable(a: &SymbolicDesign, b: &SymbolicDesign) -> Result<bool> {
    if a.order != b.order {
        return Err(Error::shape("check_amicable", (a.order, a.order), (b.order, b.order)));
    }
    Ok(a.coefficients.iter().all(|x| b.coefficients.iter().all(|y| amicable_defect(x, y).is_zero())))
}

/// Checks the O-STBC dispersion constraints on a code.
///
/// Condition (i) is checked as "every `A_i^H A_i` and `B_i^H B_i` equals the
/// same `ρ·I`"; the overall scale `ρ` is a power normalization and is
/// reported by [`common_gram_scale`].
pub fn verify_ostbc(code: &SymbolicCode) -> VerifyReport {
    let fam = code.dispersion();
    let a = named("A", &fam.a_mats);
    let b = named("B", &fam.b_mats);
    let ids = KernelIds { weighing: Condition::UnitGram, anti: Condition::AntiCommute, amicable: Condition::Amicable };
    VerifyReport::from_violations(check_amicable_sets(&a, &b, &ids, true))
}

/// The common Gram scalar `ρ` of a code's dispersion matrices, if one exists.
pub fn common_gram_scale(code: &SymbolicCode) -> Option<ExactScalar> {
    let fam = code.dispersion();
    let mut all = fam.a_mats.iter().chain(&fam.b_mats).map(|m| gram(m).scalar_identity_multiple());
    let first = all.next()??;
    all.all(|g| g == Some(first)).then_some(first)
}
