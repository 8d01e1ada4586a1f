//! Polynomials over Z2 and the cyclic quotient ring `R_m = Z2[X]/<X^m - 1>`.
//!
//! Coefficients are bit-packed into `u64` words, bit `i` holding the
//! coefficient of `X^i`. A [`BinPoly`] is always trimmed (no zero words above
//! the leading one), so equality and hashing are canonical. A residue
//! representative of `R_m` is simply a `BinPoly` of degree `< m`.
//!
//! Text form is an LSB-first bit string: `"101"` is `1 + X^2`. The parser also
//! accepts symbolic input such as `"1+x^2"`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BinPoly {
    words: Vec<u64>,
}

impl BinPoly {
    pub fn zero() -> Self {
        BinPoly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn from_u64(bits: u64) -> Self {
        Self::from_words(vec![bits])
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = BinPoly { words };
        p.trim();
        p
    }

    /// Polynomial with a coefficient of one at each listed exponent
    /// (repeated exponents cancel).
    pub fn from_exponents(exponents: &[usize]) -> Self {
        let mut p = BinPoly::zero();
        for &e in exponents {
            p.flip(e);
        }
        p
    }

    pub fn monomial(k: usize) -> Self {
        Self::from_exponents(&[k])
    }

    /// `X^m - 1`, which over Z2 is `X^m + 1`.
    pub fn x_m_minus_1(m: usize) -> Self {
        Self::from_exponents(&[0, m])
    }

    /// `X - 1 = X + 1`, the generator of the augmentation ideal.
    pub fn x_minus_1() -> Self {
        Self::from_u64(0b11)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words.len() == 1 && self.words[0] == 1
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn set_coeff(&mut self, i: usize, value: bool) {
        if self.coeff(i) != value {
            self.flip(i);
        }
    }

    fn flip(&mut self, i: usize) {
        let w = i / 64;
        if self.words.len() <= w {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << (i % 64);
        self.trim();
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Value at `X = 1`, i.e. the parity of the weight.
    pub fn eval_at_one(&self) -> bool {
        self.weight() % 2 == 1
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Exponents with a nonzero coefficient, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + b)
            })
        })
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    /// `self ^= other * X^shift` without trimming.
    fn xor_shifted_raw(&mut self, other: &BinPoly, shift: usize) {
        if other.is_zero() {
            return;
        }
        let ws = shift / 64;
        let bs = shift % 64;
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs > 0 {
                self.words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
    }

    /// Carry-less product in Z2[X].
    pub fn mul(&self, other: &BinPoly) -> BinPoly {
        let (small, large) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = BinPoly::zero();
        for i in small.ones() {
            out.xor_shifted_raw(large, i);
        }
        out.trim();
        out
    }

    pub fn square(&self) -> BinPoly {
        // Squaring over Z2 spreads bit i to bit 2i.
        let mut out = vec![0u64; self.words.len() * 2];
        for (wi, &w) in self.words.iter().enumerate() {
            out[2 * wi] = spread_bits(w as u32);
            out[2 * wi + 1] = spread_bits((w >> 32) as u32);
        }
        BinPoly::from_words(out)
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &BinPoly) -> (BinPoly, BinPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = BinPoly::zero();
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let s = dr - dd;
            rem.xor_shifted_raw(divisor, s);
            rem.trim();
            quot.flip(s);
        }
        (quot, rem)
    }

    pub fn rem(&self, divisor: &BinPoly) -> BinPoly {
        self.div_rem(divisor).1
    }

    /// Whether `self` divides `other` in Z2[X]. Only zero is divisible by zero.
    pub fn divides(&self, other: &BinPoly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).is_zero()
    }

    /// Residue modulo `X^m - 1`: exponents are folded mod `m`.
    pub fn reduce_cyclic(&self, m: usize) -> BinPoly {
        match self.degree() {
            Some(d) if d >= m => {
                let mut out = BinPoly::zero();
                out.words.resize(m.div_ceil(64), 0);
                for e in self.ones() {
                    let r = e % m;
                    out.words[r / 64] ^= 1 << (r % 64);
                }
                out.trim();
                out
            }
            _ => self.clone(),
        }
    }

    /// Trimmed LSB-first bit string; `"0"` for the zero polynomial.
    pub fn to_bit_string(&self) -> String {
        match self.degree() {
            None => "0".to_string(),
            Some(d) => (0..=d)
                .map(|i| if self.coeff(i) { '1' } else { '0' })
                .collect(),
        }
    }

    /// LSB-first bit string padded with zeros to at least `len` digits.
    pub fn to_padded_bits(&self, len: usize) -> String {
        let width = self.degree().map_or(0, |d| d + 1).max(len);
        (0..width)
            .map(|i| if self.coeff(i) { '1' } else { '0' })
            .collect()
    }
}

fn spread_bits(x: u32) -> u64 {
    let mut x = x as u64;
    x = (x | (x << 16)) & 0x0000_FFFF_0000_FFFF;
    x = (x | (x << 8)) & 0x00FF_00FF_00FF_00FF;
    x = (x | (x << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    x = (x | (x << 1)) & 0x5555_5555_5555_5555;
    x
}

impl Add<&BinPoly> for &BinPoly {
    type Output = BinPoly;

    fn add(self, rhs: &BinPoly) -> BinPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for BinPoly {
    type Output = BinPoly;

    fn add(mut self, rhs: BinPoly) -> BinPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&BinPoly> for BinPoly {
    fn add_assign(&mut self, rhs: &BinPoly) {
        self.xor_shifted_raw(rhs, 0);
        self.trim();
    }
}

/// Numeric order of the coefficient bits, which sorts by degree first.
impl Ord for BinPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.words
            .len()
            .cmp(&other.words.len())
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BinPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl fmt::Debug for BinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinPoly({})", self.to_bit_string())
    }
}

impl FromStr for BinPoly {
    type Err = Error;

    /// Accepts an LSB-first bit string (`"101"`) or a sum of monomials
    /// (`"1+x^2"`, case-insensitive).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if s.chars().all(|c| c == '0' || c == '1') {
            let mut p = BinPoly::zero();
            for (i, c) in s.chars().enumerate() {
                if c == '1' {
                    p.flip(i);
                }
            }
            return Ok(p);
        }
        let mut p = BinPoly::zero();
        for term in s.split('+') {
            let term: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            let term = term.to_ascii_lowercase();
            let exponent = match term.as_str() {
                "0" => continue,
                "1" => 0,
                "x" => 1,
                t => t
                    .strip_prefix("x^")
                    .and_then(|e| e.parse::<usize>().ok())
                    .ok_or_else(|| Error::Parse(format!("bad monomial {t:?} in {s:?}")))?,
            };
            p.flip(exponent);
        }
        Ok(p)
    }
}

/// Validates a cycle length: odd and at least one.
pub fn check_modulus(m: usize) -> Result<()> {
    if m == 0 || m.is_multiple_of(2) {
        return Err(Error::InvalidModulus(m));
    }
    Ok(())
}

pub fn check_residue(p: &BinPoly, m: usize) -> Result<()> {
    match p.degree() {
        Some(degree) if degree >= m => Err(Error::NotResidue { degree, m }),
        _ => Ok(()),
    }
}

/// Product of two residues in `R_m`.
pub fn mul_mod(p: &BinPoly, q: &BinPoly, m: usize) -> Result<BinPoly> {
    check_modulus(m)?;
    check_residue(p, m)?;
    check_residue(q, m)?;
    Ok(p.mul(q).reduce_cyclic(m))
}

/// Greatest common divisor in Z2[X]; `gcd(0, 0) = 0`.
pub fn gcd(p: &BinPoly, q: &BinPoly) -> BinPoly {
    let mut a = p.clone();
    let mut b = q.clone();
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    a
}

/// `g = gcd(a, b, X^m - 1)` and its cofactor `h = (X^m - 1) / g`.
pub fn gab(a: &BinPoly, b: &BinPoly, m: usize) -> Result<(BinPoly, BinPoly)> {
    check_modulus(m)?;
    check_residue(a, m)?;
    check_residue(b, m)?;
    let modulus = BinPoly::x_m_minus_1(m);
    let g = gcd(&gcd(a, b), &modulus);
    let (h, r) = modulus.div_rem(&g);
    debug_assert!(r.is_zero());
    Ok((g, h))
}

/// Membership in `J_m = <X - 1>`: true iff `p(1) = 0`.
pub fn in_augmentation_ideal(p: &BinPoly) -> bool {
    !p.eval_at_one()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub poly: BinPoly,
    pub degree: usize,
}

/// The irreducible factors of `X^m - 1` over Z2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSet {
    pub m: usize,
    /// Sorted by degree, then by coefficient bits read as an integer.
    pub factors: Vec<Factor>,
    /// Minimum degree of the factors other than `X - 1`; `None` when `m = 1`.
    pub ell: Option<usize>,
    /// Number of irreducible factors of `(X^m - 1) / (X - 1)`.
    pub h: usize,
}

impl FactorSet {
    /// Factors of `(X^m - 1) / (X - 1)`.
    pub fn nontrivial(&self) -> impl Iterator<Item = &Factor> {
        self.factors
            .iter()
            .filter(|f| f.poly != BinPoly::x_minus_1())
    }

    pub fn product(&self) -> BinPoly {
        self.factors
            .iter()
            .fold(BinPoly::one(), |acc, f| acc.mul(&f.poly))
    }
}

/// Complete factorization of `X^m - 1` into distinct irreducibles.
///
/// Distinct-degree factorization followed by trace-based equal-degree
/// splitting. The splitting draws from a fixed-seed generator, and the output
/// is sorted, so the result is deterministic.
pub fn factor_xm1(m: usize) -> Result<FactorSet> {
    check_modulus(m)?;
    let mut polys = factor_squarefree(BinPoly::x_m_minus_1(m));
    polys.sort();
    let factors: Vec<Factor> = polys
        .into_iter()
        .map(|poly| Factor {
            degree: poly.degree().expect("factor is nonzero"),
            poly,
        })
        .collect();
    let x1 = BinPoly::x_minus_1();
    let ell = factors
        .iter()
        .filter(|f| f.poly != x1)
        .map(|f| f.degree)
        .min();
    let h = factors.len() - 1;
    Ok(FactorSet { m, factors, ell, h })
}

fn factor_squarefree(f: BinPoly) -> Vec<BinPoly> {
    let x = BinPoly::monomial(1);
    let mut out = Vec::new();
    let mut rng = SplitMix64(0x5eed_f00d);
    let mut rest = f;
    // w = X^(2^d) mod rest
    let mut w = x.clone();
    let mut d = 0;
    while let Some(deg) = rest.degree() {
        if deg < 2 * (d + 1) {
            if deg > 0 {
                out.push(rest);
            }
            break;
        }
        d += 1;
        w = w.square().rem(&rest);
        let g = gcd(&rest, &(&w + &x));
        if !g.is_one() {
            rest = rest.div_rem(&g).0;
            w = w.rem(&rest);
            split_equal_degree(g, d, &mut rng, &mut out);
        }
    }
    out
}

/// Splits a product of distinct irreducibles, all of degree `d`.
fn split_equal_degree(g: BinPoly, d: usize, rng: &mut SplitMix64, out: &mut Vec<BinPoly>) {
    let n = g.degree().expect("nonzero");
    if n == d {
        out.push(g);
        return;
    }
    loop {
        let r = rng.poly_below(n);
        // Absolute trace r + r^2 + ... + r^(2^(d-1)) mod g.
        let mut t = r.clone();
        let mut s = r;
        for _ in 1..d {
            s = s.square().rem(&g);
            t += &s;
        }
        let u = gcd(&g, &t);
        let du = u.degree().unwrap_or(0);
        if du > 0 && du < n {
            let v = g.div_rem(&u).0;
            split_equal_degree(u, d, rng, out);
            split_equal_degree(v, d, rng, out);
            return;
        }
    }
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform polynomial of degree `< n`.
    fn poly_below(&mut self, n: usize) -> BinPoly {
        let mut words: Vec<u64> = (0..n.div_ceil(64)).map(|_| self.next()).collect();
        if !n.is_multiple_of(64) {
            if let Some(top) = words.last_mut() {
                *top &= (1u64 << (n % 64)) - 1;
            }
        }
        BinPoly::from_words(words)
    }
}

/// The 2-cyclotomic cosets modulo `m`, each listed in orbit order
/// `s, 2s, 4s, ...` from its smallest element; cosets sorted by size, then
/// by smallest element.
pub fn cyclotomic_cosets(m: usize) -> Result<Vec<Vec<usize>>> {
    check_modulus(m)?;
    let mut seen = vec![false; m];
    let mut cosets = Vec::new();
    for s in 0..m {
        if seen[s] {
            continue;
        }
        let mut coset = Vec::new();
        let mut e = s;
        while !seen[e] {
            seen[e] = true;
            coset.push(e);
            e = (2 * e) % m;
        }
        cosets.push(coset);
    }
    cosets.sort_by_key(|c| (c.len(), c[0]));
    Ok(cosets)
}

/// Minimal degree of the irreducible factors of `(X^m - 1)/(X - 1)`,
/// read off as the smallest nonzero cyclotomic coset.
pub fn ell_m(m: usize) -> Result<usize> {
    cyclotomic_cosets(m)?
        .iter()
        .filter(|c| c[0] != 0)
        .map(Vec::len)
        .min()
        .ok_or_else(|| Error::OutOfRange(format!("ell_m needs m >= 3, got {m}")))
}

// Single-word fast paths for the enumeration loops (m <= 63).

#[inline]
pub(crate) fn rotl_u64(x: u64, k: usize, m: usize) -> u64 {
    if k == 0 {
        return x;
    }
    let mask = (1u64 << m) - 1;
    ((x << k) | (x >> (m - k))) & mask
}

/// Product in `R_m` of two single-word residues.
#[inline]
pub(crate) fn mul_mod_u64(p: u64, q: u64, m: usize) -> u64 {
    debug_assert!(m < 64);
    let mut out = 0;
    let mut rest = p;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out ^= rotl_u64(q, i, m);
    }
    out
}

#[inline]
fn rem_u64(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

#[inline]
pub(crate) fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = rem_u64(a, b);
        a = b;
        b = r;
    }
    a
}
