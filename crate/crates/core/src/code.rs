//! Symbolic codeword templates `G = Σ (x_i^R A_i + j x_i^I B_i)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::design::{gram_types, log2_exact, DispersionFamily};
use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::matrix::ExactMatrix;

/// Which real component of a complex symbol a term multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Part {
    R,
    I,
}

/// One term `coeff · x_symbol^part`. The `j` multiplying imaginary parts is
/// folded into `coeff`, so `x_1` is `{(0, R, 1), (0, I, j)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, Part, ExactScalar)", into = "(usize, Part, ExactScalar)")]
pub struct Term {
    pub symbol: usize,
    pub part: Part,
    pub coeff: ExactScalar,
}

impl From<(usize, Part, ExactScalar)> for Term {
    fn from((symbol, part, coeff): (usize, Part, ExactScalar)) -> Self {
        Term { symbol, part, coeff }
    }
}

impl From<Term> for (usize, Part, ExactScalar) {
    fn from(t: Term) -> Self {
        (t.symbol, t.part, t.coeff)
    }
}

/// A real-linear form in the symbol components; one codeword entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<Term>", into = "Vec<Term>")]
pub struct LinearForm {
    terms: Vec<Term>,
}

impl From<Vec<Term>> for LinearForm {
    fn from(terms: Vec<Term>) -> Self {
        LinearForm::from_terms(terms)
    }
}

impl From<LinearForm> for Vec<Term> {
    fn from(f: LinearForm) -> Self {
        f.terms
    }
}

impl LinearForm {
    pub fn zero() -> Self {
        LinearForm::default()
    }

    /// Merges duplicate `(symbol, part)` pairs and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        let mut acc: BTreeMap<(usize, Part), ExactScalar> = BTreeMap::new();
        for t in terms {
            let slot = acc.entry((t.symbol, t.part)).or_default();
            *slot = *slot + t.coeff;
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((symbol, part), coeff)| Term { symbol, part, coeff })
            .collect();
        LinearForm { terms }
    }

    pub fn term(symbol: usize, part: Part, coeff: ExactScalar) -> Self {
        LinearForm::from_terms([Term { symbol, part, coeff }])
    }

    /// `x_i`.
    pub fn symbol(i: usize) -> Self {
        LinearForm::from_terms([
            Term { symbol: i, part: Part::R, coeff: ExactScalar::ONE },
            Term { symbol: i, part: Part::I, coeff: ExactScalar::J },
        ])
    }

    /// `x_i^*`, i.e. `x_i^R - j·x_i^I`.
    pub fn conj_symbol(i: usize) -> Self {
        LinearForm::symbol(i).conj()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, symbol: usize, part: Part) -> ExactScalar {
        self.terms.iter().find(|t| t.symbol == symbol && t.part == part).map_or(ExactScalar::ZERO, |t| t.coeff)
    }

    pub fn scale(&self, s: ExactScalar) -> Self {
        LinearForm::from_terms(self.terms.iter().map(|t| Term { coeff: t.coeff * s, ..*t }))
    }

    pub fn neg(&self) -> Self {
        self.scale(-ExactScalar::ONE)
    }

    pub fn add(&self, other: &LinearForm) -> Self {
        LinearForm::from_terms(self.terms.iter().chain(&other.terms).copied())
    }

    /// Entry-wise complex conjugate. The symbol components are real, so only
    /// the coefficients are conjugated.
    pub fn conj(&self) -> Self {
        LinearForm::from_terms(self.terms.iter().map(|t| Term { coeff: t.coeff.conj(), ..*t }))
    }

    pub fn max_symbol(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.symbol).max()
    }

    pub fn evaluate_exact(&self, symbols: &[ExactScalar]) -> ExactScalar {
        self.terms.iter().fold(ExactScalar::ZERO, |acc, t| {
            let x = symbols[t.symbol];
            let component = match t.part {
                Part::R => x.re_part(),
                Part::I => x.im_part(),
            };
            acc + t.coeff * component
        })
    }

    pub fn evaluate(&self, symbols: &[Complex64]) -> Complex64 {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, t| {
            let x = symbols[t.symbol];
            let component = match t.part {
                Part::R => x.re,
                Part::I => x.im,
            };
            acc + t.coeff.to_complex() * component
        })
    }
}

fn coeff_prefix(c: ExactScalar) -> String {
    if c == ExactScalar::ONE {
        String::new()
    } else if c == -ExactScalar::ONE {
        "-".into()
    } else if c == ExactScalar::J {
        "j".into()
    } else if c == -ExactScalar::J {
        "-j".into()
    } else {
        format!("{c}·")
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut pieces = Vec::new();
        let mut symbols: Vec<usize> = self.terms.iter().map(|t| t.symbol).collect();
        symbols.dedup();
        for s in symbols {
            let re = self.coeff(s, Part::R);
            let im = self.coeff(s, Part::I);
            let n = s + 1;
            if !re.is_zero() && im == re * ExactScalar::J {
                pieces.push(format!("{}x{n}", coeff_prefix(re)));
            } else if !re.is_zero() && im == -(re * ExactScalar::J) {
                pieces.push(format!("{}x{n}*", coeff_prefix(re)));
            } else {
                if !re.is_zero() {
                    pieces.push(format!("{}x{n}R", coeff_prefix(re)));
                }
                if !im.is_zero() {
                    pieces.push(format!("{}x{n}I", coeff_prefix(im)));
                }
            }
        }
        let joined = pieces.join("+").replace("+-", "-");
        write!(f, "{joined}")
    }
}

/// A `p × n_t` grid of linear forms in `k` complex symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCode", into = "RawCode")]
pub struct SymbolicCode {
    p: usize,
    n_t: usize,
    k: usize,
    pub label: String,
    grid: Vec<LinearForm>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawCode {
    p: usize,
    n_t: usize,
    k: usize,
    label: String,
    grid: Vec<Vec<LinearForm>>,
}

impl TryFrom<RawCode> for SymbolicCode {
    type Error = Error;
    fn try_from(raw: RawCode) -> Result<Self> {
        if raw.grid.len() != raw.p || raw.grid.iter().any(|r| r.len() != raw.n_t) {
            return Err(Error::Precondition(format!("grid does not match declared {}x{} shape", raw.p, raw.n_t)));
        }
        SymbolicCode::new(raw.label, raw.p, raw.n_t, raw.k, raw.grid.into_iter().flatten().collect())
    }
}

impl From<SymbolicCode> for RawCode {
    fn from(c: SymbolicCode) -> Self {
        let grid = c.grid.chunks(c.n_t).map(<[LinearForm]>::to_vec).collect();
        RawCode { p: c.p, n_t: c.n_t, k: c.k, label: c.label, grid }
    }
}

impl SymbolicCode {
    pub fn new(label: impl Into<String>, p: usize, n_t: usize, k: usize, grid: Vec<LinearForm>) -> Result<Self> {
        if p == 0 || n_t == 0 || k == 0 {
            return Err(Error::Precondition("code dimensions must be positive".into()));
        }
        if p != n_t {
            return Err(Error::Precondition(format!("only square codes are supported, got {p}x{n_t}")));
        }
        if grid.len() != p * n_t {
            return Err(Error::Precondition(format!("{} entries for a {p}x{n_t} code", grid.len())));
        }
        if let Some(bad) = grid.iter().filter_map(LinearForm::max_symbol).find(|&s| s >= k) {
            return Err(Error::Precondition(format!("symbol x{} out of range for k = {k}", bad + 1)));
        }
        Ok(SymbolicCode { p, n_t, k, label: label.into(), grid })
    }

    /// Builds `Σ (x_i^R A_i + j x_i^I B_i)` from equal-length dispersion lists.
    pub fn from_dispersion(label: impl Into<String>, a_mats: &[ExactMatrix], b_mats: &[ExactMatrix]) -> Result<Self> {
        if a_mats.len() != b_mats.len() || a_mats.is_empty() {
            return Err(Error::Pairing(format!(
                "{} real vs {} imaginary dispersion matrices",
                a_mats.len(),
                b_mats.len()
            )));
        }
        let (p, n_t) = a_mats[0].shape();
        if let Some(bad) = a_mats.iter().chain(b_mats).find(|m| m.shape() != (p, n_t)) {
            return Err(Error::shape("dispersion matrix", (p, n_t), bad.shape()));
        }
        let mut grid = Vec::with_capacity(p * n_t);
        for t in 0..p {
            for m in 0..n_t {
                let terms = a_mats.iter().zip(b_mats).enumerate().flat_map(|(i, (a, b))| {
                    [
                        Term { symbol: i, part: Part::R, coeff: a[(t, m)] },
                        Term { symbol: i, part: Part::I, coeff: ExactScalar::J * b[(t, m)] },
                    ]
                });
                grid.push(LinearForm::from_terms(terms));
            }
        }
        SymbolicCode::new(label, p, n_t, a_mats.len(), grid)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n_t(&self) -> usize {
        self.n_t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entry(&self, t: usize, m: usize) -> &LinearForm {
        &self.grid[t * self.n_t + m]
    }

    pub fn entries(&self) -> &[LinearForm] {
        &self.grid
    }

    pub fn map_entries(&self, f: impl Fn(&LinearForm) -> LinearForm) -> SymbolicCode {
        SymbolicCode { grid: self.grid.iter().map(f).collect(), ..self.clone() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn structural_zeros(&self) -> usize {
        self.grid.iter().filter(|f| f.is_zero()).count()
    }

    /// Dispersion matrices: `A_i` holds the coefficients of `x_i^R`, `B_i`
    /// those of `x_i^I` with the leading `j` factored out.
    pub fn dispersion(&self) -> DispersionFamily {
        let mut a = vec![ExactMatrix::zeros(self.p, self.n_t); self.k];
        let mut b = vec![ExactMatrix::zeros(self.p, self.n_t); self.k];
        for t in 0..self.p {
            for m in 0..self.n_t {
                for term in self.entry(t, m).terms() {
                    match term.part {
                        Part::R => a[term.symbol][(t, m)] = term.coeff,
                        Part::I => b[term.symbol][(t, m)] = -(ExactScalar::J * term.coeff),
                    }
                }
            }
        }
        DispersionFamily::new(self.label.clone(), a, b).expect("square dispersion family")
    }

    /// Substitutes `x_i → c·x_i` with `c` a fixed complex scalar.
    pub fn rotate_symbol(&self, i: usize, c: ExactScalar) -> SymbolicCode {
        let (c_re, c_im) = (c.re_part(), c.im_part());
        self.map_entries(|form| {
            let alpha = form.coeff(i, Part::R);
            let beta = form.coeff(i, Part::I);
            let kept = form.terms().iter().filter(|t| t.symbol != i).copied();
            let new_alpha = alpha * c_re + beta * c_im;
            let new_beta = beta * c_re - alpha * c_im;
            LinearForm::from_terms(kept.chain([
                Term { symbol: i, part: Part::R, coeff: new_alpha },
                Term { symbol: i, part: Part::I, coeff: new_beta },
            ]))
        })
    }

    pub fn evaluate_exact(&self, symbols: &[ExactScalar]) -> ExactMatrix {
        let entries = self.grid.iter().map(|f| f.evaluate_exact(symbols)).collect();
        ExactMatrix::from_entries(self.p, self.n_t, entries).expect("code shape")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("code serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for SymbolicCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({}x{}, k = {})", self.label, self.p, self.n_t, self.k)?;
        let cells: Vec<String> = self.grid.iter().map(|c| c.to_string()).collect();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
        for row in cells.chunks(self.n_t) {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[{}]", line.join("  "))?;
        }
        Ok(())
    }
}

/// Code rate `k / p`.
pub fn rate(code: &SymbolicCode) -> Ratio<i64> {
    Ratio::new(code.k as i64, code.p as i64)
}

/// Inverse of [`assemble`] over the identity pairing.
pub fn extract_dispersion(code: &SymbolicCode) -> DispersionFamily {
    code.dispersion()
}

/// Assigns family members to complex symbols: symbol `i` takes
/// `a_signs[i]·A[a_slots[i]]` for its real part and `b_signs[i]·B[b_slots[i]]`
/// for its imaginary part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolPairing {
    pub a_slots: Vec<usize>,
    pub a_signs: Vec<i8>,
    pub b_slots: Vec<usize>,
    pub b_signs: Vec<i8>,
}

impl SymbolPairing {
    pub fn identity(k: usize) -> Self {
        SymbolPairing { a_slots: (0..k).collect(), a_signs: vec![1; k], b_slots: (0..k).collect(), b_signs: vec![1; k] }
    }

    /// A pairing with all signs positive.
    pub fn unsigned(a_slots: Vec<usize>, b_slots: Vec<usize>) -> Self {
        let k = a_slots.len();
        SymbolPairing { a_slots, a_signs: vec![1; k], b_slots, b_signs: vec![1; k] }
    }

    pub fn len(&self) -> usize {
        self.a_slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a_slots.is_empty()
    }

    fn validate(&self, k: usize) -> Result<()> {
        let is_perm = |v: &[usize]| {
            let mut seen = vec![false; k];
            v.len() == k && v.iter().all(|&i| i < k && !std::mem::replace(&mut seen[i], true))
        };
        let signs_ok = |v: &[i8]| v.len() == k && v.iter().all(|s| *s == 1 || *s == -1);
        if !is_perm(&self.a_slots) || !is_perm(&self.b_slots) {
            return Err(Error::Pairing(format!("slots are not a bijection on 0..{k}")));
        }
        if !signs_ok(&self.a_signs) || !signs_ok(&self.b_signs) {
            return Err(Error::Pairing("signs must be ±1, one per symbol".into()));
        }
        Ok(())
    }
}

fn sign_scalar(s: i8) -> ExactScalar {
    ExactScalar::from_int(i64::from(s))
}

/// Scales each member by `√(f_min / f_i)` so every dispersion matrix has the
/// Gram of the lightest member. Equal-type families are returned unchanged.
pub fn equalize_types(fam: &DispersionFamily) -> Result<DispersionFamily> {
    let types = gram_types(fam)?;
    let f_min = types.min().expect("nonempty family");
    let factor = |f: Ratio<i64>, name: String| -> Result<ExactScalar> {
        let k = log2_exact(f_min / f)
            .ok_or_else(|| Error::NotRepresentable(format!("{name}: sqrt of type ratio {}", f_min / f)))?;
        Ok(ExactScalar::ONE.scale_sqrt2_pow(k))
    };
    let mut out = fam.clone();
    for (i, (m, f)) in out.a_mats.iter_mut().zip(&types.f).enumerate() {
        *m = m.scale(factor(*f, format!("A{}", i + 1))?);
    }
    for (i, (m, g)) in out.b_mats.iter_mut().zip(&types.g).enumerate() {
        *m = m.scale(factor(*g, format!("B{}", i + 1))?);
    }
    Ok(out)
}

/// Builds the codeword template of a family with `s = t`.
pub fn assemble(fam: &DispersionFamily, pairing: &SymbolPairing) -> Result<SymbolicCode> {
    if fam.s() != fam.t() {
        return Err(Error::Pairing(format!("s = {} but t = {}", fam.s(), fam.t())));
    }
    let k = fam.s();
    pairing.validate(k)?;
    let norm = equalize_types(fam)?;
    let a: Vec<ExactMatrix> =
        (0..k).map(|i| norm.a_mats[pairing.a_slots[i]].scale(sign_scalar(pairing.a_signs[i]))).collect();
    let b: Vec<ExactMatrix> =
        (0..k).map(|i| norm.b_mats[pairing.b_slots[i]].scale(sign_scalar(pairing.b_signs[i]))).collect();
    SymbolicCode::from_dispersion(fam.label.clone(), &a, &b)
}

/// Finds the pairing under which `fam` assembles to `code`.
///
/// Matching decomposes per symbol: the code's `A_i` must equal `±` one
/// normalized family member and likewise for `B_i`, so scanning every
/// (slot, sign) choice per symbol covers the full `k!·2^k` space.
pub fn search_pairing(fam: &DispersionFamily, code: &SymbolicCode) -> Result<SymbolPairing> {
    if fam.s() != fam.t() || fam.s() != code.k() {
        return Err(Error::Pairing(format!("family has {}+{} members, code has k = {}", fam.s(), fam.t(), code.k())));
    }
    let norm = equalize_types(fam)?;
    let target = code.dispersion();
    let find = |want: &ExactMatrix, pool: &[ExactMatrix]| -> Option<(usize, i8)> {
        pool.iter().enumerate().find_map(|(slot, m)| {
            if m == want {
                Some((slot, 1))
            } else if &-m == want {
                Some((slot, -1))
            } else {
                None
            }
        })
    };
    let mut pairing = SymbolPairing { a_slots: vec![], a_signs: vec![], b_slots: vec![], b_signs: vec![] };
    for i in 0..code.k() {
        let (sa, ga) = find(&target.a_mats[i], &norm.a_mats)
            .ok_or_else(|| Error::Pairing(format!("no family member matches the real part of x{}", i + 1)))?;
        let (sb, gb) = find(&target.b_mats[i], &norm.b_mats)
            .ok_or_else(|| Error::Pairing(format!("no family member matches the imaginary part of x{}", i + 1)))?;
        pairing.a_slots.push(sa);
        pairing.a_signs.push(ga);
        pairing.b_slots.push(sb);
        pairing.b_signs.push(gb);
    }
    pairing.validate(code.k())?;
    Ok(pairing)
}
