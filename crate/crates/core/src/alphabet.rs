//! Words over the mixed alphabet `Z2^alpha x Z4^beta`.

use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Lee weight of a Z4 symbol. Equal to the Hamming weight of its Gray image.
pub const LEE_WEIGHT: [usize; 4] = [0, 1, 2, 1];

/// Gray map `Z4 -> Z2^2`: 0->00, 1->01, 2->11, 3->10.
pub const GRAY: [[u8; 2]; 4] = [[0, 0], [0, 1], [1, 1], [1, 0]];

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Z2Z4Word {
    alpha: Vec<u8>,
    beta: Vec<u8>,
}

impl Z2Z4Word {
    pub fn new(alpha: Vec<u8>, beta: Vec<u8>) -> Result<Self> {
        if let Some(s) = alpha.iter().find(|&&s| s > 1) {
            return Err(Error::Parse(format!("binary symbol out of range: {s}")));
        }
        if let Some(s) = beta.iter().find(|&&s| s > 3) {
            return Err(Error::Parse(format!("quaternary symbol out of range: {s}")));
        }
        Ok(Z2Z4Word { alpha, beta })
    }

    pub fn zero(alpha_len: usize, beta_len: usize) -> Self {
        Z2Z4Word {
            alpha: vec![0; alpha_len],
            beta: vec![0; beta_len],
        }
    }

    /// The word `(u, 2v)` built from two bit masks of `m` coordinates each.
    pub fn from_masks(u: u64, v: u64, m: usize) -> Self {
        Z2Z4Word {
            alpha: (0..m).map(|i| ((u >> i) & 1) as u8).collect(),
            beta: (0..m).map(|i| 2 * ((v >> i) & 1) as u8).collect(),
        }
    }

    pub fn alpha(&self) -> &[u8] {
        &self.alpha
    }

    pub fn beta(&self) -> &[u8] {
        &self.beta
    }

    /// Length `n = alpha + 2 beta` of the Gray image.
    pub fn binary_length(&self) -> usize {
        self.alpha.len() + 2 * self.beta.len()
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().chain(&self.beta).all(|&s| s == 0)
    }

    /// Hamming weight of the binary part plus Lee weight of the Z4 part.
    pub fn weight(&self) -> usize {
        let wh = self.alpha.iter().filter(|&&s| s != 0).count();
        let wl: usize = self.beta.iter().map(|&s| LEE_WEIGHT[s as usize]).sum();
        wh + wl
    }

    pub fn gray_map(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.binary_length());
        out.extend_from_slice(&self.alpha);
        for &s in &self.beta {
            out.extend_from_slice(&GRAY[s as usize]);
        }
        out
    }

    /// Simultaneous right rotation of both parts by one position.
    pub fn cyclic_shift(&self) -> Self {
        let mut alpha = self.alpha.clone();
        let mut beta = self.beta.clone();
        if !alpha.is_empty() {
            alpha.rotate_right(1);
        }
        if !beta.is_empty() {
            beta.rotate_right(1);
        }
        Z2Z4Word { alpha, beta }
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.alpha.len() != other.alpha.len() || self.beta.len() != other.beta.len() {
            return Err(Error::DimensionMismatch(format!(
                "({}, {}) vs ({}, {})",
                self.alpha.len(),
                self.beta.len(),
                other.alpha.len(),
                other.beta.len()
            )));
        }
        Ok(())
    }

    /// `2 * sum(u_i v_i) + sum(u'_i v'_i)` in Z4.
    pub fn inner_product(&self, other: &Self) -> Result<u8> {
        self.check_shape(other)?;
        let binary: u32 = self
            .alpha
            .iter()
            .zip(&other.alpha)
            .map(|(&x, &y)| (x & y) as u32)
            .sum();
        let quaternary: u32 = self
            .beta
            .iter()
            .zip(&other.beta)
            .map(|(&x, &y)| x as u32 * y as u32)
            .sum();
        Ok(((2 * binary + quaternary) % 4) as u8)
    }

    /// Componentwise sum: mod 2 on the binary part, mod 4 on the Z4 part.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Z2Z4Word {
            alpha: self
                .alpha
                .iter()
                .zip(&other.alpha)
                .map(|(x, y)| x ^ y)
                .collect(),
            beta: self
                .beta
                .iter()
                .zip(&other.beta)
                .map(|(x, y)| (x + y) % 4)
                .collect(),
        })
    }

    pub fn alpha_string(&self) -> String {
        digits(&self.alpha)
    }

    pub fn beta_string(&self) -> String {
        digits(&self.beta)
    }
}

fn digits(s: &[u8]) -> String {
    s.iter().map(|&d| char::from(b'0' + d)).collect()
}

fn parse_digits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| {
            c.to_digit(10)
                .map(|d| d as u8)
                .ok_or_else(|| Error::Parse(format!("bad symbol {c:?} in word")))
        })
        .collect()
}

/// Prints alpha digits then beta digits with no separator, e.g. `110022`.
impl fmt::Display for Z2Z4Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.alpha_string(), self.beta_string())
    }
}

impl FromStr for Z2Z4Word {
    type Err = Error;

    /// `"110|022"`; without a separator the digits are split in half.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (a, b) = match s.split_once('|') {
            Some(parts) => parts,
            None if s.len().is_multiple_of(2) => s.split_at(s.len() / 2),
            None => {
                return Err(Error::Parse(format!(
                    "cannot split {s:?} into equal halves; use alpha|beta"
                )))
            }
        };
        Z2Z4Word::new(parse_digits(a)?, parse_digits(b)?)
    }
}

impl Serialize for Z2Z4Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Z2Z4Word", 2)?;
        st.serialize_field("alpha", &self.alpha_string())?;
        st.serialize_field("beta", &self.beta_string())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Z2Z4Word {
        s.parse().unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(w("110|022").weight(), 6);
        assert_eq!(w("000|000").weight(), 0);
        assert_eq!(w("111|000").weight(), 3);
        assert_eq!(w("|13").weight(), 2);
    }

    #[test]
    fn gray_image() {
        assert_eq!(w("|2").gray_map(), vec![1, 1]);
        assert_eq!(w("110|022").gray_map(), vec![1, 1, 0, 0, 0, 1, 1, 1, 1]);
        assert_eq!(Z2Z4Word::zero(3, 3).gray_map(), vec![0; 9]);
    }

    #[test]
    fn gray_is_an_isometry_per_symbol() {
        for s in 0..4u8 {
            let word = Z2Z4Word::new(vec![], vec![s]).unwrap();
            let image_weight = word.gray_map().iter().filter(|&&b| b == 1).count();
            assert_eq!(word.weight(), image_weight, "symbol {s}");
        }
    }

    #[test]
    fn shifts() {
        assert_eq!(w("110|022").cyclic_shift(), w("011|202"));
        assert_eq!(Z2Z4Word::zero(3, 3).cyclic_shift(), Z2Z4Word::zero(3, 3));
        let mut x = w("10010|02230");
        for _ in 0..5 {
            x = x.cyclic_shift();
        }
        assert_eq!(x, w("10010|02230"));
        assert_eq!(w("|").cyclic_shift(), w("|"));
    }

    #[test]
    fn inner_products() {
        assert_eq!(w("110|022").inner_product(&w("101|220")).unwrap(), 2);
        assert_eq!(
            w("110|022").inner_product(&Z2Z4Word::zero(3, 3)).unwrap(),
            0
        );
        assert_eq!(w("110|022").inner_product(&w("110|022")).unwrap(), 0);
        assert!(matches!(
            w("110|022").inner_product(&w("11|02")),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn addition() {
        assert_eq!(w("110|022").add(&w("101|220")).unwrap(), w("011|202"));
        assert_eq!(
            w("110|022").add(&Z2Z4Word::zero(3, 3)).unwrap(),
            w("110|022")
        );
        assert_eq!(w("101|123").add(&w("101|123")).unwrap(), w("000|202"));
        assert!(w("110|022").add(&w("110|02")).is_err());
    }

    #[test]
    fn text_forms() {
        assert_eq!(w("110022"), w("110|022"));
        assert_eq!(w("110|022").to_string(), "110022");
        assert!("11002".parse::<Z2Z4Word>().is_err());
        assert!("210|000".parse::<Z2Z4Word>().is_err());
        assert!("110|024".parse::<Z2Z4Word>().is_err());
        let json = serde_json::to_string(&w("110|022")).unwrap();
        assert_eq!(json, r#"{"alpha":"110","beta":"022"}"#);
    }

    #[test]
    fn from_masks_doubles_the_second_part() {
        assert_eq!(Z2Z4Word::from_masks(0b011, 0b110, 3), w("110|022"));
    }
}
