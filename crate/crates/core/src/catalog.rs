//! The literal example codes, transcribed entry by entry.
//!
//! Entries are written in a small text grammar: `x3`, `-x2*`, `jx1`,
//! `x3R+jx2I` (real/imaginary components), `x4/2`, `x3/r2` (divide by `√2`),
//! and `(x1+x2*)/2` or `-(…)/2` for a scaled group. `0` is a structural zero.

use crate::code::{LinearForm, Part, SymbolPairing, SymbolicCode};
use crate::error::{Error, Result};
use crate::exact::ExactScalar;

/// Fixture names in table order.
pub const FIXTURE_NAMES: [&str; 8] = ["TH", "TS", "G8", "TJC", "GS", "G4", "H8", "F8"];

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { s: text.as_bytes(), pos: 0, text }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} of entry '{}'", self.pos, self.text))
    }

    fn divisor(&mut self) -> Result<ExactScalar> {
        if self.eat(b'2') {
            Ok(ExactScalar::HALF)
        } else if self.eat(b'r') && self.eat(b'2') {
            Ok(ExactScalar::INV_SQRT2)
        } else {
            Err(self.err("expected divisor '2' or 'r2'"))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        match digits.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n - 1),
            _ => Err(self.err("expected 1-based symbol index")),
        }
    }

    fn term(&mut self) -> Result<LinearForm> {
        let j = self.eat(b'j');
        if !self.eat(b'x') {
            return Err(self.err("expected symbol"));
        }
        let i = self.number()?;
        let mut form = if self.eat(b'*') {
            LinearForm::conj_symbol(i)
        } else if self.eat(b'R') {
            LinearForm::term(i, Part::R, ExactScalar::ONE)
        } else if self.eat(b'I') {
            LinearForm::term(i, Part::I, ExactScalar::ONE)
        } else {
            LinearForm::symbol(i)
        };
        if j {
            form = form.scale(ExactScalar::J);
        }
        if self.eat(b'/') {
            form = form.scale(self.divisor()?);
        }
        Ok(form)
    }

    fn sum(&mut self) -> Result<LinearForm> {
        let mut acc = LinearForm::zero();
        let mut sign = if self.eat(b'-') { -1 } else { 1 };
        loop {
            let t = self.term()?;
            acc = acc.add(&if sign < 0 { t.neg() } else { t });
            sign = if self.eat(b'+') {
                1
            } else if self.eat(b'-') {
                -1
            } else {
                return Ok(acc);
            };
        }
    }

    fn entry(&mut self) -> Result<LinearForm> {
        if self.text == "0" {
            self.pos = 1;
            return Ok(LinearForm::zero());
        }
        let save = self.pos;
        let neg = self.eat(b'-');
        if self.eat(b'(') {
            let inner = self.sum()?;
            if !self.eat(b')') || !self.eat(b'/') {
                return Err(self.err("expected ')/' after group"));
            }
            let d = self.divisor()?;
            let g = inner.scale(d);
            return Ok(if neg { g.neg() } else { g });
        }
        self.pos = save;
        self.sum()
    }
}

/// Parses one entry of the fixture grammar.
pub fn parse_entry(text: &str) -> Result<LinearForm> {
    let text = text.trim();
    let mut c = Cursor::new(text);
    let f = c.entry()?;
    if c.pos != text.len() {
        return Err(c.err("trailing input"));
    }
    Ok(f)
}

/// Builds a square code from comma-separated rows.
pub fn parse_code(label: &str, k: usize, rows: &[&str]) -> Result<SymbolicCode> {
    let n = rows.len();
    let mut grid = Vec::with_capacity(n * n);
    for (r, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != n {
            return Err(Error::Parse(format!("{label}: row {} has {} entries, expected {n}", r + 1, cells.len())));
        }
        for cell in cells {
            grid.push(parse_entry(cell)?);
        }
    }
    SymbolicCode::new(label, n, n, k, grid)
}

const G8: [&str; 8] = [
    "x1*,x1*,x2,-x2,x3,-x3,x4,-x4",
    "x1,-x1,x2*,x2*,x3*,x3*,x4*,x4*",
    "-x2,x2,x1*,x1*,x4*,-x4*,-x3*,x3*",
    "-x2*,-x2*,x1,-x1,x4,x4,-x3,-x3",
    "-x3,x3,-x4*,x4*,x1*,x1*,x2*,-x2*",
    "-x3*,-x3*,-x4,-x4,x1,-x1,x2,x2",
    "-x4,x4,x3*,-x3*,-x2*,x2*,x1*,x1*",
    "-x4*,-x4*,x3,x3,-x2,-x2,x1,-x1",
];

const H8: [&str; 8] = [
    "x1*,x1*,x2,-x2,x3,-x3,x4,-x4",
    "jx1,-jx1,jx2*,jx2*,jx3*,jx3*,jx4*,jx4*",
    "-x2,x2,x1*,x1*,x4*,-x4*,-x3*,x3*",
    "-jx2*,-jx2*,jx1,-jx1,jx4,jx4,-jx3,-jx3",
    "-x3,x3,-x4*,x4*,x1*,x1*,x2*,-x2*",
    "-jx3*,-jx3*,-jx4,-jx4,jx1,-jx1,jx2,jx2",
    "-x4,x4,x3*,-x3*,-x2*,x2*,x1*,x1*",
    "-jx4*,-jx4*,jx3,jx3,-jx2,-jx2,jx1,-jx1",
];

const F8: [&str; 8] = [
    "x1*,x1*,x2,-x2,x3,-x3,x4,-x4",
    "x1,-x1,x2*,x2*,x3*,x3*,x4*,x4*",
    "-x2,x2,x1*,x1*,-x4*,x4*,x3*,-x3*",
    "-x2*,-x2*,x1,-x1,-x4,-x4,x3,x3",
    "-x3,x3,x4*,-x4*,x1*,x1*,-x2*,x2*",
    "-x3*,-x3*,x4,x4,x1,-x1,-x2,-x2",
    "-x4,x4,-x3*,x3*,x2*,-x2*,x1*,x1*",
    "-x4*,-x4*,-x3,-x3,x2,x2,x1,-x1",
];

const G4: [&str; 4] =
    ["x1-x2*,x1+x2*,x3,-x3", "x1*+x2,-x1*+x2,x3,x3", "-x3*,x3*,x1-x2,x1+x2", "-x3*,-x3*,x1*+x2*,-x1*+x2*"];

const TH: [&str; 8] = [
    "x1,x2,x3,0,x4,0,0,0",
    "-x2*,x1*,0,-x3,0,-x4,0,0",
    "-x3*,0,x1*,x2,0,0,-x4,0",
    "0,x3*,-x2*,x1,0,0,0,x4",
    "-x4*,0,0,0,x1*,x2,x3,0",
    "0,x4*,0,0,-x2*,x1,0,-x3",
    "0,0,x4*,0,-x3*,0,x1,x2",
    "0,0,0,-x4*,0,x3*,-x2*,x1*",
];

const TS: [&str; 8] = [
    "x1,0,x3R+jx2I,x2R+jx3I,x4/2,x4/2,x4/2,x4/2",
    "0,x1,-x2R+jx3I,x3R-jx2I,x4/2,-x4/2,x4/2,-x4/2",
    "-x3R+jx2I,x2R+jx3I,x1*,0,x4/2,x4/2,-x4/2,-x4/2",
    "-x2R+jx3I,-x3R-jx2I,0,x1*,x4/2,-x4/2,-x4/2,x4/2",
    "-x4*/2,-x4*/2,-x4*/2,-x4*/2,x1R-jx3I,x2*,x3R-jx1I,0",
    "-x4*/2,x4*/2,-x4*/2,x4*/2,-x2,x1R+jx3I,0,x3R-jx1I",
    "-x4*/2,-x4*/2,x4*/2,x4*/2,-x3R-jx1I,0,x1R+jx3I,-x2*",
    "-x4*/2,x4*/2,x4*/2,-x4*/2,0,-x3R-jx1I,x2,x1R-jx3I",
];

const TJC: [&str; 4] = [
    "x1,x2,x3/r2,x3/r2",
    "-x2*,x1*,x3/r2,-x3/r2",
    "x3*/r2,x3*/r2,(-x1-x1*+x2-x2*)/2,(-x2-x2*+x1-x1*)/2",
    "x3*/r2,-x3*/r2,(x2+x2*+x1-x1*)/2,-(x1+x1*+x2-x2*)/2",
];

const GS: [&str; 4] = ["x1,0,x2,-x3", "0,x1,x3*,x2*", "-x2*,-x3,x1*,0", "x3*,-x2,0,x1*"];

/// Returns a fixture code by name (see [`FIXTURE_NAMES`]).
pub fn fixture(name: &str) -> Result<SymbolicCode> {
    let (k, rows): (usize, &[&str]) = match name {
        "G8" => (4, &G8),
        "H8" => (4, &H8),
        "F8" => (4, &F8),
        "G4" => (3, &G4),
        "TH" => (4, &TH),
        "TS" => (4, &TS),
        "TJC" => (3, &TJC),
        "GS" => (3, &GS),
        _ => return Err(Error::UnknownName { kind: "fixture", name: name.to_string() }),
    };
    parse_code(name, k, rows)
}

/// Pairing that turns the constructed family into the printed code, for the
/// four fixtures that come out of the constructions.
pub fn frozen_pairing(name: &str) -> Option<SymbolPairing> {
    match name {
        "G8" | "H8" | "F8" => Some(SymbolPairing::unsigned(vec![3, 0, 1, 2], vec![3, 0, 1, 2])),
        "G4" => Some(SymbolPairing::unsigned(vec![2, 1, 0], vec![2, 1, 0])),
        _ => None,
    }
}

/// The construction chain behind a constructed fixture, as
/// `(input family, seed or None for Construction 2)` catalogue names.
pub fn fixture_recipe(name: &str) -> Option<(&'static str, Option<&'static str>)> {
    match name {
        "G8" => Some(("af2-ex1", Some("mn-eq6"))),
        "H8" => Some(("af2-ex2-complex", Some("mn-eq6"))),
        "F8" => Some(("af2-ex1", Some("mn-eq16"))),
        "G4" => Some(("aod2-ex3", None)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Term;

    #[test]
    fn entry_grammar() {
        assert_eq!(parse_entry("x1").unwrap(), LinearForm::symbol(0));
        assert_eq!(parse_entry("-x2*").unwrap(), LinearForm::conj_symbol(1).neg());
        assert_eq!(parse_entry("jx1").unwrap(), LinearForm::symbol(0).scale(ExactScalar::J));
        assert_eq!(
            parse_entry("x3R+jx2I").unwrap(),
            LinearForm::from_terms([
                Term { symbol: 2, part: Part::R, coeff: ExactScalar::ONE },
                Term { symbol: 1, part: Part::I, coeff: ExactScalar::J },
            ])
        );
        assert_eq!(parse_entry("x3/r2").unwrap(), LinearForm::symbol(2).scale(ExactScalar::INV_SQRT2));
        let g = parse_entry("-(x1+x1*)/2").unwrap();
        assert_eq!(g, LinearForm::term(0, Part::R, -ExactScalar::ONE));
        assert!(parse_entry("0").unwrap().is_zero());
        for bad in ["", "y1", "x0", "x1/3", "(x1", "x1 x2", "x1+"] {
            assert!(matches!(parse_entry(bad), Err(Error::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn fixtures_parse() {
        for name in FIXTURE_NAMES {
            let c = fixture(name).unwrap();
            assert_eq!(c.p(), c.n_t());
        }
        assert!(matches!(fixture("G9"), Err(Error::UnknownName { .. })));
        assert_eq!(fixture("TH").unwrap().structural_zeros(), 32);
        assert_eq!(fixture("TS").unwrap().structural_zeros(), 8);
        assert_eq!(fixture("GS").unwrap().structural_zeros(), 4);
        assert_eq!(fixture("G8").unwrap().structural_zeros(), 0);
    }
}
