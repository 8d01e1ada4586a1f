//! The probability space `J_m x 2J'_m` with the uniform measure: sampling,
//! Monte Carlo estimates, exhaustive census, and the scan for cycle lengths
//! with small `log2(m) / ell_m`.
//!
//! Randomness comes from ChaCha8 keyed by the master seed. Trials are dealt
//! round-robin onto [`LOGICAL_STREAMS`] fixed streams (trial `t` goes to
//! stream `t mod LOGICAL_STREAMS`, stream `w` is ChaCha8 with stream id `w`),
//! so the outcome never depends on how many threads run the streams.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::bounds::{self, AdmissibleDelta};
use crate::codes::AdditiveCyclicCode;
use crate::error::{Error, Result};
use crate::poly2::{self, BinPoly};

pub const LOGICAL_STREAMS: u64 = 64;

pub const RNG_NAME: &str = "chacha8";

/// Default cap on `2(m - 1)`, the pair bits of an exhaustive census (m <= 11).
pub const DEFAULT_CENSUS_PAIR_BITS: usize = 20;

/// The element of `J_m` whose first `m - 1` coefficients are `free` and whose
/// last coefficient makes the weight even. A bijection `{0,1}^{m-1} -> J_m`.
pub fn jm_from_free_bits(free: &BinPoly, m: usize) -> Result<BinPoly> {
    poly2::check_modulus(m)?;
    if free.degree().is_some_and(|d| d + 1 >= m) {
        return Err(Error::OutOfRange(format!(
            "J_{m} has {} free coefficients",
            m - 1
        )));
    }
    let mut p = free.clone();
    p.set_coeff(m - 1, free.eval_at_one());
    Ok(p)
}

/// Uniform element of `J_m`.
pub fn sample_jm<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Result<BinPoly> {
    poly2::check_modulus(m)?;
    if m < 3 {
        return Err(Error::InvalidModulus(m));
    }
    let free_bits = m - 1;
    let mut words: Vec<u64> = (0..free_bits.div_ceil(64)).map(|_| rng.random()).collect();
    if !free_bits.is_multiple_of(64) {
        if let Some(top) = words.last_mut() {
            *top &= (1u64 << (free_bits % 64)) - 1;
        }
    }
    jm_from_free_bits(&BinPoly::from_words(words), m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    Census,
    MonteCarlo,
}

impl ReportKind {
    fn as_str(&self) -> &'static str {
        match self {
            ReportKind::Census => "census",
            ReportKind::MonteCarlo => "monte-carlo",
        }
    }
}

/// What `estimate` measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    /// `Pr(dim C_{a,b} = m - 1)` over all pairs.
    FullDim,
    /// `Pr(Delta(C_{a,b}) > delta)` over pairs giving a nonzero code.
    Distance,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub kind: ReportKind,
    pub statistic: Statistic,
    pub m: usize,
    #[serde(serialize_with = "ser_opt_g12")]
    pub delta: Option<f64>,
    /// Pairs drawn (Monte Carlo) or enumerated (census).
    pub trials: u64,
    pub seed: Option<u64>,
    pub rng: Option<&'static str>,
    #[serde(serialize_with = "ser_g12")]
    pub estimate: f64,
    #[serde(serialize_with = "ser_g12")]
    pub stderr: f64,
    /// Exact value of the estimated probability, as a reduced fraction.
    pub exact: Option<String>,
    /// Upper bound on `Pr(Delta <= delta)`.
    #[serde(serialize_with = "ser_opt_g12")]
    pub bound: Option<f64>,
    pub vacuous: Option<bool>,
    /// Samples with `a = b = 0`; excluded from the distance statistic.
    pub zero_codes: u64,
    /// For the distance statistic: `1 - estimate <= min(1, bound) + 4 stderr`.
    pub bound_consistent: Option<bool>,
    pub elapsed_ms: Option<u64>,
}

pub const CSV_HEADER: &str =
    "kind,m,delta,trials,seed,estimate,stderr,exact,bound,vacuous,elapsed_ms";

impl ExperimentReport {
    /// Whether the estimate lies within `k` standard errors of `exact`.
    pub fn within_sigma(&self, k: f64) -> Option<bool> {
        let exact: BigRational = self.exact.as_ref()?.parse().ok()?;
        if exact.is_zero() && self.estimate == 0.0 {
            return Some(true);
        }
        Some((self.estimate - to_f64(&exact)).abs() <= k * self.stderr)
    }

    /// One CSV row under [`CSV_HEADER`]. `elapsed_ms` is left empty unless
    /// `with_timing`, so that repeated runs print identical rows.
    pub fn csv_row(&self, with_timing: bool) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        [
            self.kind.as_str().to_string(),
            self.m.to_string(),
            opt(self.delta.map(format_g12)),
            self.trials.to_string(),
            opt(self.seed.map(|s| s.to_string())),
            format_g12(self.estimate),
            format_g12(self.stderr),
            opt(self.exact.clone()),
            opt(self.bound.map(format_g12)),
            opt(self.vacuous.map(|v| v.to_string())),
            if with_timing {
                opt(self.elapsed_ms.map(|t| t.to_string()))
            } else {
                String::new()
            },
        ]
        .join(",")
    }
}

/// `%.12g`-style formatting: 12 significant digits, trailing zeros dropped.
pub fn format_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (11 - exp) as usize;
    trim_fraction(&format!("{x:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn round_g12(x: f64) -> f64 {
    format_g12(x).parse().unwrap_or(x)
}

fn ser_g12<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(round_g12(*x))
}

fn ser_opt_g12<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&round_g12(*v)),
        None => s.serialize_none(),
    }
}

fn binomial_stderr(successes: u64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = successes as f64 / n as f64;
    (p * (1.0 - p) / n as f64).sqrt()
}

fn fraction(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Number of trials stream `w` runs out of `trials` dealt round-robin.
fn stream_share(trials: u64, w: u64) -> u64 {
    trials / LOGICAL_STREAMS + u64::from(w < trials % LOGICAL_STREAMS)
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    Ok(())
}

fn check_sample_modulus(m: usize) -> Result<()> {
    poly2::check_modulus(m)?;
    if m < 3 {
        return Err(Error::InvalidModulus(m));
    }
    Ok(())
}

/// Whether `gcd(a, b, X^m - 1) = X - 1`, i.e. `dim C_{a,b} = m - 1` for
/// `a, b` in `J_m`.
fn is_full_dim(a: &BinPoly, b: &BinPoly, m: usize) -> bool {
    if let (true, Some(a), Some(b)) = (m < 64, a.to_u64(), b.to_u64()) {
        let xm1 = (1u64 << m) | 1;
        return poly2::gcd_u64(poly2::gcd_u64(a, b), xm1) == 0b11;
    }
    let g = poly2::gcd(&poly2::gcd(a, b), &BinPoly::x_m_minus_1(m));
    g == BinPoly::x_minus_1()
}

/// Monte Carlo estimate of `Pr(dim C_{a,b} = m - 1)`.
pub fn monte_carlo_full_dim(m: usize, trials: u64, seed: u64) -> Result<ExperimentReport> {
    check_sample_modulus(m)?;
    check_trials(trials)?;
    let start = Instant::now();
    let per_stream: Vec<(u64, u64)> = (0..LOGICAL_STREAMS)
        .into_par_iter()
        .map(|w| {
            let mut rng = stream_rng(seed, w);
            let (mut hits, mut zero) = (0u64, 0u64);
            for _ in 0..stream_share(trials, w) {
                let a = sample_jm(&mut rng, m).expect("valid m");
                let b = sample_jm(&mut rng, m).expect("valid m");
                zero += u64::from(a.is_zero() && b.is_zero());
                hits += u64::from(is_full_dim(&a, &b, m));
            }
            (hits, zero)
        })
        .collect();
    let hits: u64 = per_stream.iter().map(|s| s.0).sum();
    let zero_codes: u64 = per_stream.iter().map(|s| s.1).sum();
    Ok(ExperimentReport {
        kind: ReportKind::MonteCarlo,
        statistic: Statistic::FullDim,
        m,
        delta: None,
        trials,
        seed: Some(seed),
        rng: Some(RNG_NAME),
        estimate: hits as f64 / trials as f64,
        stderr: binomial_stderr(hits, trials),
        exact: Some(bounds::exact_pr_full_dim(m)?.to_string()),
        bound: None,
        vacuous: None,
        zero_codes,
        bound_consistent: None,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

/// Monte Carlo estimate of `Pr(Delta(C_{a,b}) > delta)` over nonzero codes,
/// with the exact minimum weight of every sampled code.
pub fn monte_carlo_distance(
    m: usize,
    delta: &AdmissibleDelta,
    trials: u64,
    seed: u64,
    cap: usize,
) -> Result<ExperimentReport> {
    check_sample_modulus(m)?;
    check_trials(trials)?;
    if m - 1 > cap {
        return Err(Error::CapExceeded { needed: m - 1, cap });
    }
    let bound = bounds::pr_delta_bound(m, delta)?;
    let start = Instant::now();
    let per_stream: Vec<(u64, u64)> = (0..LOGICAL_STREAMS)
        .into_par_iter()
        .map(|w| {
            let mut rng = stream_rng(seed, w);
            let (mut good, mut zero) = (0u64, 0u64);
            for _ in 0..stream_share(trials, w) {
                let a = sample_jm(&mut rng, m).expect("valid m");
                let b = sample_jm(&mut rng, m).expect("valid m");
                if a.is_zero() && b.is_zero() {
                    zero += 1;
                    continue;
                }
                let code = AdditiveCyclicCode::new(m, a, b).expect("residues in J_m");
                let w = code
                    .min_weight_with(cap, false)
                    .expect("nonzero code within cap");
                good += u64::from(!delta.admits_weight(w, m));
            }
            (good, zero)
        })
        .collect();
    let good: u64 = per_stream.iter().map(|s| s.0).sum();
    let zero_codes: u64 = per_stream.iter().map(|s| s.1).sum();
    let nonzero = trials - zero_codes;
    if nonzero == 0 {
        return Err(Error::InvalidParameter(
            "every sampled pair gave the zero code".into(),
        ));
    }
    let estimate = good as f64 / nonzero as f64;
    let stderr = binomial_stderr(good, nonzero);
    Ok(ExperimentReport {
        kind: ReportKind::MonteCarlo,
        statistic: Statistic::Distance,
        m,
        delta: Some(delta.value()),
        trials,
        seed: Some(seed),
        rng: Some(RNG_NAME),
        estimate,
        stderr,
        exact: None,
        bound: Some(bound.value),
        vacuous: Some(bound.vacuous),
        zero_codes,
        bound_consistent: Some(1.0 - estimate <= bound.value.min(1.0) + 4.0 * stderr),
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
    })
}

/// Exact statistics of `C_{a,b}` over every pair `(a, b)` in `J_m x J_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub m: usize,
    pub pairs: u64,
    pub zero_codes: u64,
    pub full_dim: u64,
    /// `min_weight_counts[w]`: nonzero codes of minimum weight `w`.
    pub min_weight_counts: Vec<u64>,
    pub elapsed_ms: u64,
}

impl Census {
    /// The exact census values agree with the closed-form full-dimension
    /// probability.
    pub fn matches_product_formula(&self) -> Result<bool> {
        Ok(self.pr_full_dim() == bounds::exact_pr_full_dim(self.m)?)
    }

    pub fn pr_full_dim(&self) -> BigRational {
        fraction(self.full_dim, self.pairs)
    }

    fn low_distance_codes(&self, delta: &AdmissibleDelta) -> u64 {
        self.min_weight_counts
            .iter()
            .enumerate()
            .filter(|(w, _)| delta.admits_weight(*w, self.m))
            .map(|(_, &n)| n)
            .sum()
    }

    /// `Pr(Delta <= delta)` among nonzero codes.
    pub fn pr_distance_at_most(&self, delta: &AdmissibleDelta) -> BigRational {
        fraction(self.low_distance_codes(delta), self.pairs - self.zero_codes)
    }

    /// `Pr(Delta > delta)` among nonzero codes.
    pub fn pr_distance_above(&self, delta: &AdmissibleDelta) -> BigRational {
        let nonzero = self.pairs - self.zero_codes;
        fraction(nonzero - self.low_distance_codes(delta), nonzero)
    }

    /// The full-dimension row, plus a distance row when `delta` is given.
    pub fn reports(&self, delta: Option<&AdmissibleDelta>) -> Result<Vec<ExperimentReport>> {
        let base = ExperimentReport {
            kind: ReportKind::Census,
            statistic: Statistic::FullDim,
            m: self.m,
            delta: None,
            trials: self.pairs,
            seed: None,
            rng: None,
            estimate: to_f64(&self.pr_full_dim()),
            stderr: 0.0,
            exact: Some(self.pr_full_dim().to_string()),
            bound: None,
            vacuous: None,
            zero_codes: self.zero_codes,
            bound_consistent: None,
            elapsed_ms: Some(self.elapsed_ms),
        };
        let mut out = vec![base.clone()];
        if let Some(delta) = delta {
            let bound = bounds::pr_delta_bound(self.m, delta)?;
            let above = self.pr_distance_above(delta);
            let low = to_f64(&self.pr_distance_at_most(delta));
            out.push(ExperimentReport {
                statistic: Statistic::Distance,
                delta: Some(delta.value()),
                estimate: to_f64(&above),
                exact: Some(above.to_string()),
                bound: Some(bound.value),
                vacuous: Some(bound.vacuous),
                bound_consistent: Some(low <= bound.value.min(1.0)),
                ..base
            });
        }
        Ok(out)
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Enumerates all `2^{2(m-1)}` pairs in `J_m x J_m`, recording the dimension
/// and the exact minimum weight of every code. `cap_pair_bits` bounds
/// `2(m - 1)`.
pub fn exhaustive_census(m: usize, cap_pair_bits: usize) -> Result<Census> {
    check_sample_modulus(m)?;
    let pair_bits = 2 * (m - 1);
    if pair_bits > cap_pair_bits {
        return Err(Error::CapExceeded {
            needed: pair_bits,
            cap: cap_pair_bits,
        });
    }
    if m >= 64 {
        return Err(Error::OutOfRange(format!("census needs m < 64, got {m}")));
    }
    let start = Instant::now();
    let side = 1u64 << (m - 1);
    let elements: Vec<u64> = (0..side)
        .map(|free| {
            jm_from_free_bits(&BinPoly::from_u64(free), m)
                .expect("free bits in range")
                .to_u64()
                .expect("single word")
        })
        .collect();
    let xm1 = (1u64 << m) | 1;
    let zero_hist = || (0u64, 0u64, vec![0u64; 3 * m + 1]);
    let (zero_codes, full_dim, min_weight_counts) = elements
        .par_iter()
        .fold(zero_hist, |(mut zero, mut full, mut hist), &a| {
            let mut rows = Vec::with_capacity(m);
            for &b in &elements {
                let g = poly2::gcd_u64(poly2::gcd_u64(a, b), xm1);
                let dim = m - (63 - g.leading_zeros() as usize);
                if dim == 0 {
                    zero += 1;
                    continue;
                }
                full += u64::from(dim == m - 1);
                hist[min_weight_u64(a, b, g, dim, m, &mut rows)] += 1;
            }
            (zero, full, hist)
        })
        .reduce(zero_hist, |x, y| {
            let hist = x.2.iter().zip(&y.2).map(|(p, q)| p + q).collect();
            (x.0 + y.0, x.1 + y.1, hist)
        });
    Ok(Census {
        m,
        pairs: side * side,
        zero_codes,
        full_dim,
        min_weight_counts,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Minimum of `wt(c a) + 2 wt(c b)` over nonzero `c` in `<g>`, single-word.
fn min_weight_u64(
    a: u64,
    b: u64,
    g: u64,
    dim: usize,
    m: usize,
    rows: &mut Vec<(u64, u64)>,
) -> usize {
    rows.clear();
    for k in 0..dim {
        let c = g << k;
        rows.push((poly2::mul_mod_u64(c, a, m), poly2::mul_mod_u64(c, b, m)));
    }
    let (mut u, mut v) = (0u64, 0u64);
    let mut best = u32::MAX;
    for i in 1usize..(1 << dim) {
        let (ru, rv) = rows[i.trailing_zeros() as usize];
        u ^= ru;
        v ^= rv;
        best = best.min(u.count_ones() + 2 * v.count_ones());
    }
    best as usize
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub m: usize,
    pub ell_m: usize,
    #[serde(serialize_with = "ser_g12")]
    pub ratio: f64,
}

pub const SCAN_CSV_HEADER: &str = "m,ell_m,ratio";

impl ScanRow {
    pub fn csv_row(&self) -> String {
        format!("{},{},{}", self.m, self.ell_m, format_g12(self.ratio))
    }
}

/// Odd `m` in `3..=m_max` with `log2(m) / ell_m <= threshold`, ascending.
pub fn scan_lengths(m_max: usize, threshold: f64) -> Result<Vec<ScanRow>> {
    if m_max < 3 {
        return Err(Error::OutOfRange(format!(
            "scan needs m_max >= 3, got {m_max}"
        )));
    }
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    let mut out = Vec::new();
    for m in (3..=m_max).step_by(2) {
        let ell = poly2::ell_m(m)?;
        let ratio = (m as f64).log2() / ell as f64;
        if ratio <= threshold {
            out.push(ScanRow {
                m,
                ell_m: ell,
                ratio,
            });
        }
    }
    Ok(out)
}
