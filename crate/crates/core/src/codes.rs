//! The one-generator additive cyclic codes
//! `C_{a,b} = { (f a, 2 f b) : f in R_m } ⊆ Z2^m x Z4^m`.
//!
//! A code is fixed by `(m, a, b)`. The gcd `g = gcd(a, b, X^m - 1)` and its
//! cofactor `h` are computed at construction, and `dim = deg h`. The map
//! `c -> (c a, 2 c b)` is a bijection from the ideal `<g>` onto the code, so
//! every enumeration in this module walks the ideal `<g>` through its basis
//! `{ g X^i : 0 <= i < dim }` in Gray-code order.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::Z2Z4Word;
use crate::error::{Error, Result};
use crate::poly2::{self, BinPoly};

/// Default cap on `dim` for anything that walks all `2^dim` codewords.
pub const DEFAULT_ENUMERATION_CAP: usize = 28;

/// Gray-code blocks handed to one worker in the parallel minimum-weight scan.
const SCAN_BLOCK_BITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveCyclicCode {
    m: usize,
    a: BinPoly,
    b: BinPoly,
    g: BinPoly,
    h: BinPoly,
    dim: usize,
}

/// JSON descriptor of a code.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CodeDescriptor {
    pub m: usize,
    pub a: String,
    pub b: String,
    pub g: String,
    pub h: String,
    pub dim: usize,
    pub n: usize,
    pub rate: String,
}

/// Generator matrix: the first `dim` rows of `Â` (or, failing a rank check,
/// `dim` independent rows of it).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    pub rows: Vec<Z2Z4Word>,
    /// Which rows of `Â` were taken.
    pub row_indices: Vec<usize>,
    /// True if the first `dim` rows were dependent and elimination picked others.
    pub fallback_used: bool,
}

impl AdditiveCyclicCode {
    pub fn new(m: usize, a: BinPoly, b: BinPoly) -> Result<Self> {
        let (g, h) = poly2::gab(&a, &b, m)?;
        let dim = h.degree().expect("cofactor is nonzero");
        Ok(AdditiveCyclicCode { m, a, b, g, h, dim })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &BinPoly {
        &self.a
    }

    pub fn b(&self) -> &BinPoly {
        &self.b
    }

    pub fn g(&self) -> &BinPoly {
        &self.g
    }

    pub fn h(&self) -> &BinPoly {
        &self.h
    }

    /// Dimension over Z2; the code has `2^dim` codewords.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Gray-image length `n = m + 2m`.
    pub fn length(&self) -> usize {
        3 * self.m
    }

    pub fn is_zero_code(&self) -> bool {
        self.dim == 0
    }

    /// The codeword `(c a, 2 c b)` for a residue `c`.
    pub fn codeword(&self, c: &BinPoly) -> Result<Z2Z4Word> {
        let u = poly2::mul_mod(c, &self.a, self.m)?;
        let v = poly2::mul_mod(c, &self.b, self.m)?;
        Ok(word_from_polys(&u, &v, self.m))
    }

    /// `{ g X^i : 0 <= i < dim }`, a Z2-basis of the ideal `<g>`.
    pub fn ideal_basis(&self) -> Vec<BinPoly> {
        (0..self.dim)
            .map(|i| self.g.mul(&BinPoly::monomial(i)))
            .collect()
    }

    /// `Â = (A | 2B)` with `A`, `B` the circulants of `a` and `b`.
    pub fn matrix_hat(&self) -> Vec<Z2Z4Word> {
        let ca = circulant(&self.a, self.m);
        let cb = circulant(&self.b, self.m);
        ca.into_iter()
            .zip(cb)
            .map(|(ra, rb)| {
                let beta = rb.into_iter().map(|x| 2 * x).collect();
                Z2Z4Word::new(ra, beta).expect("symbols in range")
            })
            .collect()
    }

    pub fn generator_matrix(&self) -> Result<GeneratorMatrix> {
        if self.is_zero_code() {
            return Err(Error::ZeroCode("generator matrix"));
        }
        let hat = self.matrix_hat();
        let bits: Vec<BinPoly> = hat.iter().map(|w| halved_bits(w, self.m)).collect();
        let leading: Vec<usize> = (0..self.dim).collect();
        let (row_indices, fallback_used) = if independent_rows(&bits[..self.dim]).len() == self.dim
        {
            (leading, false)
        } else {
            let mut picked = independent_rows(&bits);
            picked.truncate(self.dim);
            (picked, true)
        };
        let rows = row_indices.iter().map(|&i| hat[i].clone()).collect();
        Ok(GeneratorMatrix {
            rows,
            row_indices,
            fallback_used,
        })
    }

    fn check_cap(&self, cap: usize) -> Result<()> {
        if self.dim > cap {
            return Err(Error::CapExceeded {
                needed: self.dim,
                cap,
            });
        }
        Ok(())
    }

    /// All `2^dim` codewords, sorted lexicographically by their digit string.
    pub fn enumerate_codewords(&self, cap: usize) -> Result<Vec<Z2Z4Word>> {
        self.check_cap(cap)?;
        let scanner = WeightScanner::new(self);
        let mut out = Vec::with_capacity(1 << self.dim);
        scanner.for_each(0, 1 << self.dim, |cur| {
            out.push(scanner.to_word(cur));
        });
        out.sort();
        Ok(out)
    }

    /// Minimum weight over nonzero codewords, computed as
    /// `min wt_H(c a) + 2 wt_H(c b)` over nonzero `c` in `<g>`.
    pub fn min_weight(&self, cap: usize) -> Result<usize> {
        self.min_weight_with(cap, self.dim >= 2 * SCAN_BLOCK_BITS)
    }

    /// As [`min_weight`](Self::min_weight), choosing explicitly whether to
    /// split the scan across the rayon pool. The result does not depend on it.
    pub fn min_weight_with(&self, cap: usize, parallel: bool) -> Result<usize> {
        if self.is_zero_code() {
            return Err(Error::ZeroCode("minimum weight"));
        }
        self.check_cap(cap)?;
        let scanner = WeightScanner::new(self);
        let total = 1usize << self.dim;
        let block = 1usize << SCAN_BLOCK_BITS;
        let best = if parallel && total > block {
            (0..total.div_ceil(block))
                .into_par_iter()
                .map(|k| scanner.min_in(k * block, ((k + 1) * block).min(total)))
                .min()
                .expect("at least one block")
        } else {
            scanner.min_in(0, total)
        };
        Ok(best)
    }

    /// `wt(C) / 3m`, reduced.
    pub fn relative_distance(&self, cap: usize) -> Result<Ratio<u64>> {
        let w = self.min_weight(cap)?;
        Ok(Ratio::new(w as u64, self.length() as u64))
    }

    /// `dim / 3m`, reduced. Every codeword has order at most two, so the
    /// code has type `2^dim 4^0`.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.dim as u64, self.length() as u64)
    }

    /// For `a, b` in `J_m`: whether `dim = m - 1`. Otherwise returns an
    /// irreducible factor of `(X^m - 1)/(X - 1)` dividing both `a` and `b`.
    pub fn dim_is_max(&self) -> Result<(bool, Option<BinPoly>)> {
        for (name, p) in [("a", &self.a), ("b", &self.b)] {
            if !poly2::in_augmentation_ideal(p) {
                return Err(Error::NotInAugmentationIdeal(format!("{name}={p}")));
            }
        }
        if self.g == BinPoly::x_minus_1() {
            return Ok((true, None));
        }
        let witness = poly2::factor_xm1(self.m)?
            .nontrivial()
            .find(|f| f.poly.divides(&self.g))
            .map(|f| f.poly.clone())
            .expect("g has a factor besides X - 1");
        Ok((false, Some(witness)))
    }

    pub fn descriptor(&self) -> CodeDescriptor {
        CodeDescriptor {
            m: self.m,
            a: self.a.to_padded_bits(self.m),
            b: self.b.to_padded_bits(self.m),
            g: self.g.to_bit_string(),
            h: self.h.to_bit_string(),
            dim: self.dim,
            n: self.length(),
            rate: self.rate().to_string(),
        }
    }
}

/// `m x m` circulant: row `i` holds the coefficients of `X^i p mod X^m - 1`.
pub fn circulant(p: &BinPoly, m: usize) -> Vec<Vec<u8>> {
    let p = p.reduce_cyclic(m);
    (0..m)
        .map(|i| (0..m).map(|j| p.coeff((j + m - i) % m) as u8).collect())
        .collect()
}

fn word_from_polys(u: &BinPoly, v: &BinPoly, m: usize) -> Z2Z4Word {
    let alpha = (0..m).map(|i| u.coeff(i) as u8).collect();
    let beta = (0..m).map(|i| 2 * v.coeff(i) as u8).collect();
    Z2Z4Word::new(alpha, beta).expect("symbols in range")
}

/// A row of `Â` as a `2m`-bit vector over Z2, halving the `{0, 2}` entries.
fn halved_bits(w: &Z2Z4Word, m: usize) -> BinPoly {
    let exps: Vec<usize> = w
        .alpha()
        .iter()
        .enumerate()
        .filter(|(_, &s)| s != 0)
        .map(|(i, _)| i)
        .chain(
            w.beta()
                .iter()
                .enumerate()
                .filter(|(_, &s)| s != 0)
                .map(|(i, _)| m + i),
        )
        .collect();
    BinPoly::from_exponents(&exps)
}

/// Greedy Gaussian elimination: indices of rows independent of all earlier ones.
fn independent_rows(rows: &[BinPoly]) -> Vec<usize> {
    // Reduced rows keyed by leading degree.
    let mut pivots: Vec<BinPoly> = Vec::new();
    let mut picked = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        while let Some(d) = r.degree() {
            match pivots.iter().find(|p| p.degree() == Some(d)) {
                Some(p) => r += p,
                None => break,
            }
        }
        if !r.is_zero() {
            pivots.push(r);
            picked.push(i);
        }
    }
    picked
}

/// Bit-packed basis rows `(c_k a, c_k b)` for Gray-code walks over `<g>`.
struct WeightScanner {
    m: usize,
    /// Words per part.
    width: usize,
    /// `dim` rows of `2 * width` words: binary part, then halved Z4 part.
    rows: Vec<u64>,
}

impl WeightScanner {
    fn new(code: &AdditiveCyclicCode) -> Self {
        let m = code.m;
        let width = m.div_ceil(64);
        let mut rows = Vec::with_capacity(code.dim * 2 * width);
        for c in code.ideal_basis() {
            let u = c.mul(&code.a).reduce_cyclic(m);
            let v = c.mul(&code.b).reduce_cyclic(m);
            for part in [&u, &v] {
                let w = part.words();
                rows.extend((0..width).map(|i| w.get(i).copied().unwrap_or(0)));
            }
        }
        WeightScanner { m, width, rows }
    }

    fn row(&self, k: usize) -> &[u64] {
        let stride = 2 * self.width;
        &self.rows[k * stride..(k + 1) * stride]
    }

    #[inline]
    fn weight(&self, cur: &[u64]) -> usize {
        let (u, v) = cur.split_at(self.width);
        let wu: u32 = u.iter().map(|x| x.count_ones()).sum();
        let wv: u32 = v.iter().map(|x| x.count_ones()).sum();
        (wu + 2 * wv) as usize
    }

    /// Calls `f` with the packed codeword for each index in `lo..hi`, in
    /// Gray-code order (index `i` selects the basis rows in `i ^ (i >> 1)`).
    fn for_each(&self, lo: usize, hi: usize, mut f: impl FnMut(&[u64])) {
        if lo >= hi {
            return;
        }
        let mut cur = vec![0u64; 2 * self.width];
        let gray = lo ^ (lo >> 1);
        let mut bits = gray;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            xor_into(&mut cur, self.row(k));
        }
        f(&cur);
        for i in lo + 1..hi {
            xor_into(&mut cur, self.row(i.trailing_zeros() as usize));
            f(&cur);
        }
    }

    fn min_in(&self, lo: usize, hi: usize) -> usize {
        let mut best = usize::MAX;
        self.for_each(lo, hi, |cur| {
            let w = self.weight(cur);
            if w != 0 && w < best {
                best = w;
            }
        });
        best
    }

    fn to_word(&self, cur: &[u64]) -> Z2Z4Word {
        let (u, v) = cur.split_at(self.width);
        let bit = |words: &[u64], i: usize| ((words[i / 64] >> (i % 64)) & 1) as u8;
        let alpha = (0..self.m).map(|i| bit(u, i)).collect();
        let beta = (0..self.m).map(|i| 2 * bit(v, i)).collect();
        Z2Z4Word::new(alpha, beta).expect("symbols in range")
    }
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}
