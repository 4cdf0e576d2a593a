//! Monte Carlo bit-error-rate simulation over quasi-static flat Rayleigh
//! fading with matched-filter detection through the equivalent channel.
//!
//! Every trial draws its channel, symbols and noise from its own ChaCha8
//! stream keyed by `(seed, trial index)`, so results do not depend on how
//! trials are scheduled across threads.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::code::SymbolicCode;
use crate::design::{common_gram_scale, verify_ostbc};
use crate::error::{Error, Result};
use crate::power::Constellation;

/// Relative tolerance on equivalent-channel orthogonality.
pub const ORTHOGONALITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub code: SymbolicCode,
    /// One constellation per complex symbol.
    pub constellations: Vec<Constellation>,
    pub n_r: usize,
    /// SNR per receive antenna in dB.
    pub snr_db: Vec<f64>,
    /// Codewords per SNR point.
    pub trials: u64,
    pub seed: u64,
    /// Drop the noise entirely; every point then measures a noiseless link.
    pub noise_free: bool,
}

impl SimConfig {
    /// QPSK on every symbol, one receive antenna.
    pub fn qpsk(code: SymbolicCode, snr_db: Vec<f64>, trials: u64, seed: u64) -> Self {
        let k = code.k();
        SimConfig {
            code,
            constellations: vec![Constellation::qpsk(); k],
            n_r: 1,
            snr_db,
            trials,
            seed,
            noise_free: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub trials: u64,
    pub bit_errors: u64,
    pub bits: u64,
    pub ber: f64,
    pub std_err: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BerResult {
    pub code: String,
    pub seed: u64,
    pub points: Vec<BerPoint>,
}

pub const CSV_HEADER: &str = "snr_db,trials,bit_errors,ber,std_err,code,seed";

impl BerResult {
    pub fn to_csv(&self) -> String {
        let mut s = format!("{CSV_HEADER}\n");
        for p in &self.points {
            writeln!(
                s,
                "{},{},{},{:e},{:e},{},{}",
                p.snr_db, p.trials, p.bit_errors, p.ber, p.std_err, self.code, self.seed
            )
            .expect("write to string");
        }
        s
    }
}

// dense complex dispersion matrices, scaled so the code has unit Gram
struct FloatCode {
    p: usize,
    n_t: usize,
    k: usize,
    // 2k matrices, p×n_t row-major: A_1, jB_1, A_2, jB_2, ...
    disp: Vec<Vec<Complex64>>,
}

impl FloatCode {
    fn new(code: &SymbolicCode, extra_scale: f64) -> Result<Self> {
        let rho = common_gram_scale(code)
            .ok_or_else(|| Error::Precondition(format!("{} is not an orthogonal code", code.label)))?;
        let scale = extra_scale / rho.to_complex().re.sqrt();
        let fam = code.dispersion();
        let j = Complex64::new(0.0, 1.0);
        let mut disp = Vec::with_capacity(2 * code.k());
        for (a, b) in fam.a_mats.iter().zip(&fam.b_mats) {
            disp.push(a.entries().iter().map(|e| e.to_complex() * scale).collect());
            disp.push(b.entries().iter().map(|e| e.to_complex() * j * scale).collect());
        }
        Ok(FloatCode { p: code.p(), n_t: code.n_t(), k: code.k(), disp })
    }

    // columns of the equivalent channel, each vec(D_c · H) as p×n_r complex
    fn columns(&self, h: &[Complex64], n_r: usize) -> Vec<Vec<Complex64>> {
        self.disp
            .iter()
            .map(|d| {
                let mut out = vec![Complex64::new(0.0, 0.0); self.p * n_r];
                for t in 0..self.p {
                    for m in 0..self.n_t {
                        let c = d[t * self.n_t + m];
                        if c.re == 0.0 && c.im == 0.0 {
                            continue;
                        }
                        for r in 0..n_r {
                            out[t * n_r + r] += c * h[m * n_r + r];
                        }
                    }
                }
                out
            })
            .collect()
    }
}

fn re_inner(x: &[Complex64], y: &[Complex64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a.re * b.re + a.im * b.im).sum()
}

fn check_orthogonal(cols: &[Vec<Complex64>], h_norm: f64) -> Result<()> {
    for (c, x) in cols.iter().enumerate() {
        for (d, y) in cols.iter().enumerate().skip(c) {
            let want = if c == d { h_norm } else { 0.0 };
            let got = re_inner(x, y);
            if (got - want).abs() > ORTHOGONALITY_TOL * h_norm.max(1.0) {
                return Err(Error::Inconsistent(format!(
                    "equivalent channel columns {c}, {d}: inner product {got}, expected {want}"
                )));
            }
        }
    }
    Ok(())
}

/// Real equivalent channel of a code (normalized to unit Gram) for channel
/// `h` given as `n_t` rows of `n_r` gains.
///
/// Row `2(t·n_r + r)` holds real parts and the next row imaginary parts of
/// received sample `(t, r)`; column `2i` belongs to `x_i^R`, `2i+1` to `x_i^I`.
pub fn equivalent_channel(code: &SymbolicCode, h: &[Vec<Complex64>]) -> Result<Vec<Vec<f64>>> {
    if h.len() != code.n_t() || h.iter().any(|row| row.len() != h[0].len()) || h[0].is_empty() {
        return Err(Error::shape("equivalent_channel", (h.len(), h.first().map_or(0, Vec::len)), (code.n_t(), 1)));
    }
    let n_r = h[0].len();
    let fc = FloatCode::new(code, 1.0)?;
    let flat: Vec<Complex64> = h.iter().flatten().copied().collect();
    let cols = fc.columns(&flat, n_r);
    let h_norm: f64 = flat.iter().map(Complex64::norm_sqr).sum();
    check_orthogonal(&cols, h_norm)?;
    let rows = 2 * fc.p * n_r;
    let mut out = vec![vec![0.0; 2 * fc.k]; rows];
    for (c, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            out[2 * i][c] = v.re;
            out[2 * i + 1][c] = v.im;
        }
    }
    Ok(out)
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

struct Prepared {
    fc: FloatCode,
    consts: Vec<Constellation>,
    bits_per_codeword: u64,
}

fn prepare(cfg: &SimConfig) -> Result<Prepared> {
    if cfg.trials == 0 {
        return Err(Error::Precondition("trials must be at least 1".into()));
    }
    if cfg.n_r == 0 {
        return Err(Error::Precondition("n_r must be at least 1".into()));
    }
    if let Some(bad) = cfg.snr_db.iter().find(|s| !s.is_finite()) {
        return Err(Error::Precondition(format!("SNR {bad} dB is not finite")));
    }
    if cfg.constellations.len() != cfg.code.k() {
        return Err(Error::Precondition(format!(
            "{} constellations given for {} symbols",
            cfg.constellations.len(),
            cfg.code.k()
        )));
    }
    let report = verify_ostbc(&cfg.code);
    if !report.passed {
        return Err(Error::Precondition(format!("{} fails the orthogonality check", cfg.code.label)));
    }
    // unit-Gram code carries Σ E|x_i|² / p per antenna and slot; rescale to 1
    let energy: f64 = cfg
        .constellations
        .iter()
        .map(|c| c.points().iter().map(Complex64::norm_sqr).sum::<f64>() / c.len() as f64)
        .sum();
    let ave = energy / cfg.code.p() as f64;
    let fc = FloatCode::new(&cfg.code, 1.0 / ave.sqrt())?;
    let bits_per_codeword = cfg.constellations.iter().map(|c| u64::from(c.bits_per_symbol())).sum();
    Ok(Prepared { fc, consts: cfg.constellations.clone(), bits_per_codeword })
}

fn run_trial(prep: &Prepared, n_r: usize, sigma2: f64, seed: u64, trial: u64, check: bool) -> Result<u64> {
    let fc = &prep.fc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let h: Vec<Complex64> = (0..fc.n_t * n_r).map(|_| complex_normal(&mut rng)).collect();
    let sent: Vec<usize> = prep.consts.iter().map(|c| rng.random_range(0..c.len())).collect();
    let cols = fc.columns(&h, n_r);
    let col_norm = re_inner(&cols[0], &cols[0]);
    if check {
        check_orthogonal(&cols, col_norm)?;
    }
    let mut y = vec![Complex64::new(0.0, 0.0); fc.p * n_r];
    for (i, (&s, c)) in sent.iter().zip(&prep.consts).enumerate() {
        let x = c.points()[s];
        for ((yv, a), b) in y.iter_mut().zip(&cols[2 * i]).zip(&cols[2 * i + 1]) {
            *yv += a * x.re + b * x.im;
        }
    }
    if sigma2 > 0.0 {
        let sd = sigma2.sqrt();
        for yv in &mut y {
            *yv += complex_normal(&mut rng) * sd;
        }
    }
    let mut errors = 0u64;
    for (i, (&s, c)) in sent.iter().zip(&prep.consts).enumerate() {
        let z = Complex64::new(re_inner(&cols[2 * i], &y), re_inner(&cols[2 * i + 1], &y)) / col_norm;
        let (best, _) = c
            .points()
            .iter()
            .enumerate()
            .map(|(idx, p)| (idx, (z - p).norm_sqr()))
            .fold((0, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
        errors += u64::from((c.labels()[best] ^ c.labels()[s]).count_ones());
    }
    Ok(errors)
}

/// Runs the configured simulation. Noise variance per receive sample is
/// `n_t / snr`, since the code is scaled to unit average power per antenna
/// and slot and the channel gains have unit variance.
pub fn run_ber(cfg: &SimConfig) -> Result<BerResult> {
    let prep = prepare(cfg)?;
    let n_t = cfg.code.n_t() as f64;
    let mut points = Vec::with_capacity(cfg.snr_db.len());
    for &snr_db in &cfg.snr_db {
        let sigma2 = if cfg.noise_free { 0.0 } else { n_t / 10f64.powf(snr_db / 10.0) };
        let bit_errors = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let check = cfg!(debug_assertions) || t % 100 == 0;
                run_trial(&prep, cfg.n_r, sigma2, cfg.seed, t, check)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        let bits = cfg.trials * prep.bits_per_codeword;
        let ber = bit_errors as f64 / bits as f64;
        points.push(BerPoint {
            snr_db,
            trials: cfg.trials,
            bit_errors,
            bits,
            ber,
            std_err: (ber * (1.0 - ber) / bits as f64).sqrt(),
        });
    }
    Ok(BerResult { code: cfg.code.label.clone(), seed: cfg.seed, points })
}

/// Average transmitted energy per codeword after the simulator's power
/// normalization, averaged over all symbol tuples.
pub fn normalized_codeword_energy(code: &SymbolicCode, consts: &[Constellation]) -> Result<f64> {
    let cfg = SimConfig {
        code: code.clone(),
        constellations: consts.to_vec(),
        n_r: 1,
        snr_db: vec![],
        trials: 1,
        seed: 0,
        noise_free: true,
    };
    let prep = prepare(&cfg)?;
    let fc = &prep.fc;
    let sizes: Vec<usize> = consts.iter().map(Constellation::len).collect();
    let count: usize = sizes.iter().product();
    let mut total = 0.0;
    for mut n in 0..count {
        let mut g = vec![Complex64::new(0.0, 0.0); fc.p * fc.n_t];
        for (i, c) in consts.iter().enumerate() {
            let x = c.points()[n % sizes[i]];
            n /= sizes[i];
            for ((gv, a), b) in g.iter_mut().zip(&fc.disp[2 * i]).zip(&fc.disp[2 * i + 1]) {
                *gv += a * x.re + b * x.im;
            }
        }
        total += g.iter().map(Complex64::norm_sqr).sum::<f64>();
    }
    Ok(total / count as f64)
}
