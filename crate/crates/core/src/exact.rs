//! Exact scalars over the ring Z[i, √2, 1/2].
//!
//! Every coefficient that appears in the catalogued designs and codes
//! (0, ±1, ±j, ±1/2, ±1/√2) is of the form `(a + b·√2) / 2^e` with Gaussian
//! integers `a`, `b`. Keeping values in this form makes all verification
//! bit-exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A complex number `((a_re + i·a_im) + (b_re + i·b_im)·√2) / 2^e`.
///
/// Values are always kept canonical: either `e == 0` or at least one of the
/// four integer components is odd. Two canonical scalars are equal exactly
/// when their components are equal, so the derived `Eq`/`Hash` are sound.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    a_re: i64,
    a_im: i64,
    b_re: i64,
    b_im: i64,
    e: u32,
}

fn cadd(x: i64, y: i64) -> i64 {
    x.checked_add(y).expect("ExactScalar component overflow")
}

fn cmul(x: i64, y: i64) -> i64 {
    x.checked_mul(y).expect("ExactScalar component overflow")
}

fn shl(x: i64, k: u32) -> i64 {
    if k == 0 {
        return x;
    }
    let factor = 1i64.checked_shl(k).filter(|f| *f > 0).expect("ExactScalar exponent overflow");
    cmul(x, factor)
}

impl ExactScalar {
    pub const ZERO: ExactScalar = ExactScalar { a_re: 0, a_im: 0, b_re: 0, b_im: 0, e: 0 };
    pub const ONE: ExactScalar = ExactScalar { a_re: 1, a_im: 0, b_re: 0, b_im: 0, e: 0 };
    pub const J: ExactScalar = ExactScalar { a_re: 0, a_im: 1, b_re: 0, b_im: 0, e: 0 };
    pub const SQRT2: ExactScalar = ExactScalar { a_re: 0, a_im: 0, b_re: 1, b_im: 0, e: 0 };
    /// 1/√2, stored as √2/2.
    pub const INV_SQRT2: ExactScalar = ExactScalar { a_re: 0, a_im: 0, b_re: 1, b_im: 0, e: 1 };
    pub const HALF: ExactScalar = ExactScalar { a_re: 1, a_im: 0, b_re: 0, b_im: 0, e: 1 };

    /// Builds a scalar from raw components and canonicalizes it.
    pub fn new(a_re: i64, a_im: i64, b_re: i64, b_im: i64, e: u32) -> Self {
        ExactScalar { a_re, a_im, b_re, b_im, e }.canonical()
    }

    pub fn from_int(v: i64) -> Self {
        ExactScalar::new(v, 0, 0, 0, 0)
    }

    /// Gaussian integer `re + i·im`.
    pub fn gaussian(re: i64, im: i64) -> Self {
        ExactScalar::new(re, im, 0, 0, 0)
    }

    /// The five canonical components `[a_re, a_im, b_re, b_im, e]`.
    pub fn components(&self) -> [i64; 5] {
        [self.a_re, self.a_im, self.b_re, self.b_im, i64::from(self.e)]
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    fn canonical(mut self) -> Self {
        if self.a_re == 0 && self.a_im == 0 && self.b_re == 0 && self.b_im == 0 {
            return ExactScalar::ZERO;
        }
        while self.e > 0 && self.a_re % 2 == 0 && self.a_im % 2 == 0 && self.b_re % 2 == 0 && self.b_im % 2 == 0 {
            self.a_re /= 2;
            self.a_im /= 2;
            self.b_re /= 2;
            self.b_im /= 2;
            self.e -= 1;
        }
        self
    }

    fn lifted(&self, e: u32) -> [i64; 4] {
        let k = e - self.e;
        [shl(self.a_re, k), shl(self.a_im, k), shl(self.b_re, k), shl(self.b_im, k)]
    }

    pub fn is_zero(&self) -> bool {
        *self == ExactScalar::ZERO
    }

    /// True when the imaginary parts vanish.
    pub fn is_real(&self) -> bool {
        self.a_im == 0 && self.b_im == 0
    }

    /// True when the value is a dyadic rational (real, no √2 part).
    pub fn is_rational(&self) -> bool {
        self.is_real() && self.b_re == 0
    }

    pub fn conj(&self) -> Self {
        ExactScalar { a_im: -self.a_im, b_im: -self.b_im, ..*self }
    }

    /// `|z|²`, which is real and lies in Q(√2).
    pub fn norm_sqr(&self) -> ExactScalar {
        *self * self.conj()
    }

    /// Multiplies by `(√2)^k` for any integer `k`.
    pub fn scale_sqrt2_pow(&self, k: i32) -> Self {
        let mut out = *self;
        if k >= 0 {
            for _ in 0..k {
                out = out * ExactScalar::SQRT2;
            }
        } else {
            for _ in 0..(-k) {
                out = out * ExactScalar::INV_SQRT2;
            }
        }
        out
    }

    /// The value as a rational, if it is one.
    pub fn to_rational(&self) -> Option<Ratio<i64>> {
        if !self.is_rational() {
            return None;
        }
        Some(Ratio::new(self.a_re, shl(1, self.e)))
    }

    /// Real part, as a (real) scalar.
    pub fn re_part(&self) -> ExactScalar {
        ExactScalar::new(self.a_re, 0, self.b_re, 0, self.e)
    }

    /// Imaginary part, as a (real) scalar.
    pub fn im_part(&self) -> ExactScalar {
        ExactScalar::new(self.a_im, 0, self.b_im, 0, self.e)
    }

    /// Real part as an exact element of Q(√2).
    pub fn re(&self) -> RealSqrt2 {
        let den = i128::from(shl(1, self.e));
        RealSqrt2::new(Ratio::new(i128::from(self.a_re), den), Ratio::new(i128::from(self.b_re), den))
    }

    /// Imaginary part as an exact element of Q(√2).
    pub fn im(&self) -> RealSqrt2 {
        let den = i128::from(shl(1, self.e));
        RealSqrt2::new(Ratio::new(i128::from(self.a_im), den), Ratio::new(i128::from(self.b_im), den))
    }

    pub fn to_complex(&self) -> Complex64 {
        let scale = 0.5f64.powi(self.e as i32);
        let s2 = std::f64::consts::SQRT_2;
        Complex64::new(
            (self.a_re as f64 + self.b_re as f64 * s2) * scale,
            (self.a_im as f64 + self.b_im as f64 * s2) * scale,
        )
    }

    /// Largest absolute integer component; used to check the overflow budget.
    pub fn max_component(&self) -> i64 {
        [self.a_re, self.a_im, self.b_re, self.b_im].iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        if rhs.is_zero() {
            return self;
        }
        if self.is_zero() {
            return rhs;
        }
        let e = self.e.max(rhs.e);
        let x = self.lifted(e);
        let y = rhs.lifted(e);
        ExactScalar::new(cadd(x[0], y[0]), cadd(x[1], y[1]), cadd(x[2], y[2]), cadd(x[3], y[3]), e)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { a_re: -self.a_re, a_im: -self.a_im, b_re: -self.b_re, b_im: -self.b_im, e: self.e }
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        self + (-rhs)
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        if self.is_zero() || rhs.is_zero() {
            return ExactScalar::ZERO;
        }
        // Gaussian products
        let gmul =
            |xr: i64, xi: i64, yr: i64, yi: i64| (cadd(cmul(xr, yr), -cmul(xi, yi)), cadd(cmul(xr, yi), cmul(xi, yr)));
        let (aa_re, aa_im) = gmul(self.a_re, self.a_im, rhs.a_re, rhs.a_im);
        let (bb_re, bb_im) = gmul(self.b_re, self.b_im, rhs.b_re, rhs.b_im);
        let (ab_re, ab_im) = gmul(self.a_re, self.a_im, rhs.b_re, rhs.b_im);
        let (ba_re, ba_im) = gmul(self.b_re, self.b_im, rhs.a_re, rhs.a_im);
        ExactScalar::new(
            cadd(aa_re, cmul(2, bb_re)),
            cadd(aa_im, cmul(2, bb_im)),
            cadd(ab_re, ba_re),
            cadd(ab_im, ba_im),
            self.e.checked_add(rhs.e).expect("ExactScalar exponent overflow"),
        )
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::from_int(v)
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        let gauss = |re: i64, im: i64| match (re, im) {
            (r, 0) => format!("{r}"),
            (0, 1) => "j".to_string(),
            (0, -1) => "-j".to_string(),
            (0, i) => format!("{i}j"),
            (r, i) if i < 0 => format!("({r}-{}j)", -i),
            (r, i) => format!("({r}+{i}j)"),
        };
        if self.a_re != 0 || self.a_im != 0 {
            parts.push(gauss(self.a_re, self.a_im));
        }
        if self.b_re != 0 || self.b_im != 0 {
            let g = gauss(self.b_re, self.b_im);
            parts.push(match g.as_str() {
                "1" => "√2".to_string(),
                "-1" => "-√2".to_string(),
                _ => format!("{g}√2"),
            });
        }
        let body = parts.join("+").replace("+-", "-");
        if self.e == 0 {
            write!(f, "{body}")
        } else if parts.len() > 1 {
            write!(f, "({body})/{}", 1u64 << self.e)
        } else {
            write!(f, "{body}/{}", 1u64 << self.e)
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.components().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [a_re, a_im, b_re, b_im, e] = <[i64; 5]>::deserialize(deserializer)?;
        let e = u32::try_from(e)
            .ok()
            .filter(|e| *e < 62)
            .ok_or_else(|| serde::de::Error::custom(format!("exponent {e} out of range")))?;
        Ok(ExactScalar::new(a_re, a_im, b_re, b_im, e))
    }
}

/// An exact real number `p + q·√2` with rational `p`, `q`.
///
/// Used wherever the power metrics need exact ratios and comparisons of
/// values in Q(√2), e.g. G4's peak/average ratio `(2+√2)/1.5`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RealSqrt2 {
    pub rational: Ratio<i128>,
    pub surd: Ratio<i128>,
}

impl RealSqrt2 {
    pub fn new(rational: Ratio<i128>, surd: Ratio<i128>) -> Self {
        RealSqrt2 { rational, surd }
    }

    pub fn from_ratio(r: Ratio<i128>) -> Self {
        RealSqrt2::new(r, Ratio::from_integer(0))
    }

    pub fn zero() -> Self {
        RealSqrt2::from_ratio(Ratio::from_integer(0))
    }

    pub fn is_zero(&self) -> bool {
        self.rational == Ratio::from_integer(0) && self.surd == Ratio::from_integer(0)
    }

    /// Sign of `p + q√2`, decided without floating point.
    pub fn signum(&self) -> i32 {
        let sp = ratio_sign(&self.rational);
        let sq = ratio_sign(&self.surd);
        if sp >= 0 && sq >= 0 {
            return (sp + sq).signum();
        }
        if sp <= 0 && sq <= 0 {
            return -1;
        }
        let p2 = self.rational * self.rational;
        let q2 = self.surd * self.surd * Ratio::from_integer(2);
        match p2.cmp(&q2) {
            Ordering::Greater => sp,
            Ordering::Less => sq,
            Ordering::Equal => 0,
        }
    }

    /// Exact inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // (p + q√2)^-1 = (p - q√2) / (p² - 2q²); the denominator is nonzero since √2 is irrational
        let den = self.rational * self.rational - self.surd * self.surd * Ratio::from_integer(2);
        Some(RealSqrt2::new(self.rational / den, -self.surd / den))
    }

    pub fn to_f64(&self) -> f64 {
        let f = |r: &Ratio<i128>| *r.numer() as f64 / *r.denom() as f64;
        f(&self.rational) + f(&self.surd) * std::f64::consts::SQRT_2
    }

    /// The value as a plain rational, when the √2 part is zero.
    pub fn as_rational(&self) -> Option<Ratio<i128>> {
        (self.surd == Ratio::from_integer(0)).then_some(self.rational)
    }
}

fn ratio_sign(r: &Ratio<i128>) -> i32 {
    r.numer().signum() as i32 * r.denom().signum() as i32
}

impl Add for RealSqrt2 {
    type Output = RealSqrt2;
    fn add(self, rhs: RealSqrt2) -> RealSqrt2 {
        RealSqrt2::new(self.rational + rhs.rational, self.surd + rhs.surd)
    }
}

impl Sub for RealSqrt2 {
    type Output = RealSqrt2;
    fn sub(self, rhs: RealSqrt2) -> RealSqrt2 {
        RealSqrt2::new(self.rational - rhs.rational, self.surd - rhs.surd)
    }
}

impl Mul for RealSqrt2 {
    type Output = RealSqrt2;
    fn mul(self, rhs: RealSqrt2) -> RealSqrt2 {
        RealSqrt2::new(
            self.rational * rhs.rational + self.surd * rhs.surd * Ratio::from_integer(2),
            self.rational * rhs.surd + self.surd * rhs.rational,
        )
    }
}

impl PartialOrd for RealSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (*self - *other).signum().cmp(&0)
    }
}

impl fmt::Display for RealSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let zero = Ratio::from_integer(0);
        match (self.rational == zero, self.surd == zero) {
            (_, true) => write!(f, "{}", self.rational),
            (true, false) => write!(f, "{}√2", self.surd),
            (false, false) if self.surd < zero => write!(f, "{}-{}√2", self.rational, -self.surd),
            (false, false) => write!(f, "{}+{}√2", self.rational, self.surd),
        }
    }
}
