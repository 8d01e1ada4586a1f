//! Closed-form quantities of the random-coding argument: binary entropy,
//! the admissible range of the distance threshold, the counting,
//! expectation and probability bounds, the exact full-dimension
//! probability, and the census of ideals inside `J_m`.
//!
//! Transcendental quantities are `f64`; probabilities that are products of
//! `1 - 2^{-2d}` are exact [`BigRational`]s. Bounds above one are reported
//! with a `vacuous` flag instead of being clamped.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly2::{self, BinPoly};

/// Default cap on `2 d_c`, the number of pair bits scanned by
/// [`low_weight_pair_count`].
pub const DEFAULT_PAIR_BITS_CAP: usize = 26;

/// Binary entropy `H(x) = -x log2 x - (1-x) log2 (1-x)`, with `0 log 0 = 0`.
pub fn entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!(
            "entropy needs 0 <= x <= 1, got {x}"
        )));
    }
    let term = |p: f64| if p == 0.0 { 0.0 } else { -p * p.log2() };
    Ok(term(x) + term(1.0 - x))
}

/// The unique `x` in `[0, 1/2]` with `H(x) = y`, by bisection.
pub fn inverse_entropy(y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::OutOfRange(format!(
            "inverse entropy needs 0 <= y <= 1, got {y}"
        )));
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if entropy(mid)? < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A distance threshold with `0 < delta < 1/3` and `H(3 delta / 2) < 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdmissibleDelta {
    delta: f64,
    entropy_at_3d2: f64,
}

impl AdmissibleDelta {
    pub fn value(&self) -> f64 {
        self.delta
    }

    /// `H(3 delta / 2)`.
    pub fn entropy_at_3d2(&self) -> f64 {
        self.entropy_at_3d2
    }

    /// Weight threshold `3 m delta` for cycle length `m`.
    pub fn weight_threshold(&self, m: usize) -> f64 {
        3.0 * m as f64 * self.delta
    }

    /// Whether an integer weight satisfies `w <= 3 m delta`.
    pub fn admits_weight(&self, w: usize, m: usize) -> bool {
        (w as f64) <= self.weight_threshold(m)
    }
}

pub fn check_admissible(delta: f64) -> Result<AdmissibleDelta> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Inadmissible {
            delta,
            condition: "delta must be strictly positive",
        });
    }
    if delta >= 1.0 / 3.0 {
        return Err(Error::Inadmissible {
            delta,
            condition: "delta must be below 1/3",
        });
    }
    let h = entropy(1.5 * delta)?;
    if h.is_nan() || h >= 0.5 {
        return Err(Error::Inadmissible {
            delta,
            condition: "H(3 delta/2) must be below 1/2",
        });
    }
    Ok(AdmissibleDelta {
        delta,
        entropy_at_3d2: h,
    })
}

/// Result of the exhaustive low-weight pair count over `I_c x I_c`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowWeightPairs {
    /// `d_c = dim I_c`.
    pub dim: usize,
    /// Pairs `(f, g)` with `wt_H(f) + wt_H(g) <= 3 m delta`, zero pair included.
    pub count: u128,
    /// `2^{2 d_c H(3 delta / 2)}`.
    pub bound: f64,
}

impl LowWeightPairs {
    pub fn satisfied(&self) -> bool {
        (self.count as f64) <= self.bound
    }
}

/// Exhaustive count of low-weight pairs in `I_c x I_c` with `I_c = <c>`.
///
/// The pairs are counted through the weight distribution of `I_c`, which
/// gives the same number as scanning all `2^{2 d_c}` pairs.
pub fn low_weight_pair_count(
    c: &BinPoly,
    m: usize,
    delta: &AdmissibleDelta,
    cap_pair_bits: usize,
) -> Result<LowWeightPairs> {
    poly2::check_modulus(m)?;
    poly2::check_residue(c, m)?;
    if !poly2::in_augmentation_ideal(c) {
        return Err(Error::NotInAugmentationIdeal(format!("c={c}")));
    }
    let g = poly2::gcd(c, &BinPoly::x_m_minus_1(m));
    let dim = m - g.degree().expect("nonzero gcd");
    if 2 * dim > cap_pair_bits {
        return Err(Error::CapExceeded {
            needed: 2 * dim,
            cap: cap_pair_bits,
        });
    }
    let dist = ideal_weight_distribution(&g, dim);
    let mut count = 0u128;
    for (w1, &n1) in dist.iter().enumerate() {
        for (w2, &n2) in dist.iter().enumerate() {
            if delta.admits_weight(w1 + w2, m) {
                count += n1 * n2;
            }
        }
    }
    Ok(LowWeightPairs {
        dim,
        count,
        bound: (2.0 * dim as f64 * delta.entropy_at_3d2).exp2(),
    })
}

/// Hamming weight distribution of the ideal `<g>` of dimension `dim`
/// (`g` a divisor of `X^m - 1`, so the basis `g X^i` never wraps).
fn ideal_weight_distribution(g: &BinPoly, dim: usize) -> Vec<u128> {
    let basis: Vec<BinPoly> = (0..dim).map(|i| g.mul(&BinPoly::monomial(i))).collect();
    let max_weight = g.degree().unwrap_or(0) + dim + 1;
    let mut dist = vec![0u128; max_weight];
    let mut cur = BinPoly::zero();
    dist[0] += 1;
    for i in 1usize..(1 << dim) {
        cur += &basis[i.trailing_zeros() as usize];
        dist[cur.weight()] += 1;
    }
    dist
}

/// `2^{-2 d_c + 2 d_c H(3 delta / 2)}`.
pub fn expectation_bound(d_c: usize, delta: &AdmissibleDelta) -> f64 {
    let d = d_c as f64;
    (-2.0 * d + 2.0 * d * delta.entropy_at_3d2).exp2()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaBound {
    pub m: usize,
    pub delta: f64,
    pub ell_m: usize,
    /// `1/2 - H(3 delta / 2) - log2(m) / ell_m`; the bound is below one
    /// only when this is positive.
    pub exponent: f64,
    /// `sum_{j = ell_m}^{m-1} 2^{-2 j exponent}`.
    pub value: f64,
    pub vacuous: bool,
}

/// Upper bound on `Pr(Delta(C_{a,b}) <= delta)` over `J_m x 2J'_m`.
pub fn pr_delta_bound(m: usize, delta: &AdmissibleDelta) -> Result<DeltaBound> {
    poly2::check_modulus(m)?;
    let ell = poly2::ell_m(m)?;
    let exponent = 0.5 - delta.entropy_at_3d2 - (m as f64).log2() / ell as f64;
    let value: f64 = (ell..m).map(|j| (-2.0 * j as f64 * exponent).exp2()).sum();
    Ok(DeltaBound {
        m,
        delta: delta.delta,
        ell_m: ell,
        exponent,
        value,
        vacuous: value > 1.0,
    })
}

/// Degrees of the irreducible factors of `(X^m - 1) / (X - 1)`, read off
/// the nonzero cyclotomic cosets.
fn nontrivial_factor_degrees(m: usize) -> Result<Vec<usize>> {
    Ok(poly2::cyclotomic_cosets(m)?
        .into_iter()
        .filter(|c| c[0] != 0)
        .map(|c| c.len())
        .collect())
}

/// `Pr(dim C_{a,b} = m - 1) = prod_j (1 - 2^{-2 d_j})` exactly.
pub fn exact_pr_full_dim(m: usize) -> Result<BigRational> {
    poly2::check_modulus(m)?;
    if m < 3 {
        return Err(Error::OutOfRange(format!("needs m >= 3, got {m}")));
    }
    let one = BigRational::one();
    Ok(nontrivial_factor_degrees(m)?
        .into_iter()
        .fold(one.clone(), |acc, d| {
            let denom = BigInt::one() << (2 * d);
            acc * (&one - BigRational::new(BigInt::one(), denom))
        }))
}

/// Number of ideals of `R_m` inside `J_m` for each dimension `0..m`.
///
/// Ideals in `J_m` correspond to subsets `S` of the irreducible factors of
/// `(X^m - 1)/(X - 1)`, the ideal generated by `(X - 1) prod_{j not in S} p_j`
/// having dimension `sum_{j in S} d_j`.
pub fn ideal_dimension_counts(m: usize) -> Result<Vec<u128>> {
    poly2::check_modulus(m)?;
    let mut counts = vec![0u128; m];
    counts[0] = 1;
    for d in nontrivial_factor_degrees(m)? {
        for s in (d..m).rev() {
            counts[s] = counts[s]
                .checked_add(counts[s - d])
                .ok_or_else(|| Error::OutOfRange(format!("ideal count overflows at m={m}")))?;
        }
    }
    Ok(counts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdealCount {
    pub m: usize,
    pub d: usize,
    pub count: u128,
    /// `m^{d / ell_m}`.
    pub bound: f64,
}

impl IdealCount {
    pub fn satisfied(&self) -> bool {
        (self.count as f64) <= self.bound
    }
}

/// Number of `d`-dimensional ideals inside `J_m`, for `ell_m <= d < m`.
pub fn count_ideals_of_dim(m: usize, d: usize) -> Result<IdealCount> {
    poly2::check_modulus(m)?;
    let ell = poly2::ell_m(m)?;
    if d < ell || d >= m {
        return Err(Error::OutOfRange(format!(
            "ideal dimension must satisfy {ell} <= d < {m}, got {d}"
        )));
    }
    let counts = ideal_dimension_counts(m)?;
    Ok(IdealCount {
        m,
        d,
        count: counts[d],
        bound: (m as f64).powf(d as f64 / ell as f64),
    })
}
