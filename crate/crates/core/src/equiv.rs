//! Signed-permutation transforms of codes and the 2×2 block layouts of the
//! order-8 codes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::code::{LinearForm, SymbolicCode};
use crate::error::{Error, Result};
use crate::exact::ExactScalar;
use crate::matrix::ExactMatrix;

/// A signed permutation given row by row as `(column, sign)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, i8)>", into = "Vec<(usize, i8)>")]
pub struct SignedPermutation {
    rows: Vec<(usize, i8)>,
}

impl TryFrom<Vec<(usize, i8)>> for SignedPermutation {
    type Error = Error;

    fn try_from(rows: Vec<(usize, i8)>) -> Result<Self> {
        let n = rows.len();
        let mut seen = vec![false; n];
        for (r, &(c, s)) in rows.iter().enumerate() {
            if c >= n || std::mem::replace(&mut seen[c], true) {
                return Err(Error::Precondition(format!("row {r}: column {c} out of range or repeated")));
            }
            if s != 1 && s != -1 {
                return Err(Error::Precondition(format!("row {r}: sign must be ±1, got {s}")));
            }
        }
        Ok(SignedPermutation { rows })
    }
}

impl From<SignedPermutation> for Vec<(usize, i8)> {
    fn from(p: SignedPermutation) -> Self {
        p.rows
    }
}

impl SignedPermutation {
    pub fn new(rows: Vec<(usize, i8)>) -> Result<Self> {
        SignedPermutation::try_from(rows)
    }

    pub fn identity(n: usize) -> Self {
        SignedPermutation { rows: (0..n).map(|i| (i, 1)).collect() }
    }

    pub fn from_matrix(m: &ExactMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Precondition("signed permutation must be square".into()));
        }
        let mut rows = Vec::with_capacity(m.rows());
        for r in 0..m.rows() {
            let nz: Vec<usize> = (0..m.cols()).filter(|&c| !m[(r, c)].is_zero()).collect();
            let sign = match nz.as_slice() {
                [c] if m[(r, *c)] == ExactScalar::ONE => 1,
                [c] if m[(r, *c)] == -ExactScalar::ONE => -1,
                _ => return Err(Error::Precondition(format!("row {r} is not a signed unit vector"))),
            };
            rows.push((nz[0], sign));
        }
        SignedPermutation::new(rows)
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        let n = self.rows.len();
        let mut m = ExactMatrix::zeros(n, n);
        for (r, &(c, s)) in self.rows.iter().enumerate() {
            m[(r, c)] = ExactScalar::from_int(s.into());
        }
        m
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[(usize, i8)] {
        &self.rows
    }

    /// `self ⊗ I_b`: acts on blocks of size `b`.
    pub fn blockwise(&self, b: usize) -> Self {
        let rows = self.rows.iter().flat_map(|&(c, s)| (0..b).map(move |i| (c * b + i, s))).collect();
        SignedPermutation { rows }
    }
}

/// Left and right signed permutations applied as `left · G · right`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialTransform {
    pub left: SignedPermutation,
    pub right: SignedPermutation,
}

impl MonomialTransform {
    pub fn identity(n: usize) -> Self {
        MonomialTransform { left: SignedPermutation::identity(n), right: SignedPermutation::identity(n) }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transform serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// The built-in witness transform: negate the last two block rows and swap the two
/// halves of block columns, each acting on 2×2 blocks.
pub fn appendix_transform() -> MonomialTransform {
    let left = SignedPermutation { rows: vec![(0, 1), (1, 1), (2, -1), (3, -1)] };
    let right = SignedPermutation { rows: vec![(2, 1), (3, 1), (0, 1), (1, 1)] };
    MonomialTransform { left: left.blockwise(2), right: right.blockwise(2) }
}

/// `left · grid · right`, entry-wise on linear forms.
pub fn apply_transform(code: &SymbolicCode, tr: &MonomialTransform) -> Result<SymbolicCode> {
    let (p, n) = (code.p(), code.n_t());
    if tr.left.len() != p || tr.right.len() != n {
        return Err(Error::shape("apply_transform", (tr.left.len(), tr.right.len()), (p, n)));
    }
    // column c of `right` has its nonzero in row src[c]
    let mut src = vec![(0usize, 1i8); n];
    for (b, &(c, s)) in tr.right.rows().iter().enumerate() {
        src[c] = (b, s);
    }
    let mut grid = Vec::with_capacity(p * n);
    for &(a, s) in tr.left.rows() {
        for &(b, t) in &src {
            let e = code.entry(a, b);
            grid.push(if s * t < 0 { e.neg() } else { e.clone() });
        }
    }
    SymbolicCode::new(code.label.clone(), p, n, code.k(), grid)
}

/// A 2×2 block of linear forms, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block(pub [LinearForm; 4]);

impl Block {
    fn neg(&self) -> Block {
        Block(self.0.clone().map(|f| f.neg()))
    }

    fn conj(&self) -> Block {
        Block(self.0.clone().map(|f| f.conj()))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// One cell of a block layout: which of P, Q, R, S (0..4), negated and/or conjugated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub block: usize,
    pub neg: bool,
    pub conj: bool,
}

const fn c(block: usize, neg: bool, conj: bool) -> Cell {
    Cell { block, neg, conj }
}

const P: usize = 0;
const Q: usize = 1;
const R: usize = 2;
const S: usize = 3;

/// A 4×4 arrangement of the blocks P, Q, R, S.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    pub name: &'static str,
    pub cells: [[Cell; 4]; 4],
}

/// `[[P Q R S], [-Q P S* -R*], [-R -S* P Q*], [-S R* -Q* P]]`
pub const Q8: BlockLayout = BlockLayout {
    name: "Q8",
    cells: [
        [c(P, false, false), c(Q, false, false), c(R, false, false), c(S, false, false)],
        [c(Q, true, false), c(P, false, false), c(S, false, true), c(R, true, true)],
        [c(R, true, false), c(S, true, true), c(P, false, false), c(Q, false, true)],
        [c(S, true, false), c(R, false, true), c(Q, true, true), c(P, false, false)],
    ],
};

/// `[[P Q R S], [-Q P -S* R*], [-R S* P -Q*], [-S -R* Q* P]]`
pub const Q2: BlockLayout = BlockLayout {
    name: "Q2",
    cells: [
        [c(P, false, false), c(Q, false, false), c(R, false, false), c(S, false, false)],
        [c(Q, true, false), c(P, false, false), c(S, true, true), c(R, false, true)],
        [c(R, true, false), c(S, false, true), c(P, false, false), c(Q, true, true)],
        [c(S, true, false), c(R, true, true), c(Q, false, true), c(P, false, false)],
    ],
};

/// `[[R S P Q], [-S* R* -Q P], [-P Q* R -S*], [-Q* -P S R*]]`, the form the
/// witness transform takes Q2 to.
pub const SWAPPED_Q2: BlockLayout = BlockLayout {
    name: "swapped-Q2",
    cells: [
        [c(R, false, false), c(S, false, false), c(P, false, false), c(Q, false, false)],
        [c(S, true, true), c(R, false, true), c(Q, true, false), c(P, false, false)],
        [c(P, true, false), c(Q, false, true), c(R, false, false), c(S, true, true)],
        [c(Q, true, true), c(P, true, false), c(S, false, false), c(R, false, true)],
    ],
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternId {
    Q8,
    Q2,
    None,
}

impl fmt::Display for PatternId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternId::Q8 => "Q8",
            PatternId::Q2 => "Q2",
            PatternId::None => "none",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPattern {
    pub pattern: PatternId,
    /// P, Q, R, S when a layout matched.
    pub blocks: Option<[Block; 4]>,
}

impl fmt::Display for BlockPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pattern: {}", self.pattern)?;
        if let Some(b) = &self.blocks {
            for (name, blk) in ["P", "Q", "R", "S"].iter().zip(b) {
                writeln!(f, "{name} = {blk}")?;
            }
        }
        Ok(())
    }
}

fn block_at(code: &SymbolicCode, br: usize, bc: usize) -> Block {
    Block([
        code.entry(2 * br, 2 * bc).clone(),
        code.entry(2 * br, 2 * bc + 1).clone(),
        code.entry(2 * br + 1, 2 * bc).clone(),
        code.entry(2 * br + 1, 2 * bc + 1).clone(),
    ])
}

/// Checks an 8×8 code against a layout by formal block equality and
/// returns P, Q, R, S (read off the first row) on success.
pub fn match_layout(code: &SymbolicCode, layout: &BlockLayout) -> Result<Option<[Block; 4]>> {
    if (code.p(), code.n_t()) != (8, 8) {
        return Err(Error::shape("match_layout", (8, 8), (code.p(), code.n_t())));
    }
    let mut found: [Option<Block>; 4] = Default::default();
    for (bc, cell) in layout.cells[0].iter().enumerate() {
        debug_assert!(!cell.neg && !cell.conj);
        found[cell.block] = Some(block_at(code, 0, bc));
    }
    let blocks = found.map(|b| b.expect("layout's first row names every block"));
    for (br, row) in layout.cells.iter().enumerate() {
        for (bc, cell) in row.iter().enumerate() {
            let mut want = blocks[cell.block].clone();
            if cell.conj {
                want = want.conj();
            }
            if cell.neg {
                want = want.neg();
            }
            if block_at(code, br, bc) != want {
                return Ok(None);
            }
        }
    }
    Ok(Some(blocks))
}

/// Identifies the Q8 or Q2 block structure of an 8×8 code.
pub fn extract_blocks(code: &SymbolicCode) -> Result<BlockPattern> {
    for (id, layout) in [(PatternId::Q8, &Q8), (PatternId::Q2, &Q2)] {
        if let Some(blocks) = match_layout(code, layout)? {
            return Ok(BlockPattern { pattern: id, blocks: Some(blocks) });
        }
    }
    Ok(BlockPattern { pattern: PatternId::None, blocks: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::fixture;
    use crate::code::LinearForm;

    #[test]
    fn signed_permutation_validation() {
        assert!(SignedPermutation::new(vec![(0, 1), (0, 1)]).is_err());
        assert!(SignedPermutation::new(vec![(0, 2)]).is_err());
        assert!(SignedPermutation::new(vec![(1, -1), (0, 1)]).is_ok());
        let m = ExactMatrix::from_rows(&[[0i64, 2], [1, 0]]);
        assert!(SignedPermutation::from_matrix(&m).is_err());
        let p = SignedPermutation::new(vec![(1, -1), (0, 1)]).unwrap();
        assert_eq!(SignedPermutation::from_matrix(&p.to_matrix()).unwrap(), p);
    }

    #[test]
    fn transform_matches_matrix_product() {
        let g8 = fixture("G8").unwrap();
        let tr = appendix_transform();
        let out = apply_transform(&g8, &tr).unwrap();
        let x: Vec<ExactScalar> = (0..4).map(|i| ExactScalar::gaussian(i + 1, 2 * i - 3)).collect();
        let lhs = out.evaluate_exact(&x);
        let rhs = tr.left.to_matrix().mul(&g8.evaluate_exact(&x)).unwrap().mul(&tr.right.to_matrix()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(apply_transform(&g8, &MonomialTransform::identity(8)).unwrap(), g8);
        assert!(apply_transform(&g8, &MonomialTransform::identity(4)).is_err());
    }

    #[test]
    fn g8_blocks() {
        let pat = extract_blocks(&fixture("G8").unwrap()).unwrap();
        assert_eq!(pat.pattern, PatternId::Q8);
        let p = &pat.blocks.unwrap()[0];
        let x1 = LinearForm::symbol(0);
        assert_eq!(*p, Block([x1.conj(), x1.conj(), x1.clone(), x1.neg()]));
        assert_eq!(extract_blocks(&fixture("F8").unwrap()).unwrap().pattern, PatternId::Q2);
        assert_eq!(extract_blocks(&fixture("TH").unwrap()).unwrap().pattern, PatternId::None);
        assert!(extract_blocks(&fixture("G4").unwrap()).is_err());
    }

    #[test]
    fn witness_maps_f8_to_swapped_layout() {
        let f8 = fixture("F8").unwrap();
        let blocks = extract_blocks(&f8).unwrap().blocks.unwrap();
        let out = apply_transform(&f8, &appendix_transform()).unwrap();
        assert_eq!(match_layout(&out, &SWAPPED_Q2).unwrap(), Some(blocks));
    }

    #[test]
    fn transform_json() {
        let tr = appendix_transform();
        let back = MonomialTransform::from_json(&tr.to_json()).unwrap();
        assert_eq!(back, tr);
        assert!(MonomialTransform::from_json(r#"{"left":[[0,1],[0,1]],"right":[[0,1],[1,1]]}"#).is_err());
    }
}
