//! Z2Z4-additive cyclic codes of the form
//! `C_{a,b} = { (f a, 2 f b) : f in Z2[X]/<X^m - 1> }`.
//!
//! The crate builds these codes from a pair of binary polynomials, analyses
//! them exactly (dimension, generator matrix, codewords, minimum weight,
//! relative distance, rate) and studies them as random codes over
//! `J_m x 2J'_m`: closed-form bounds, exhaustive censuses at small `m`, and
//! reproducible Monte Carlo estimates.
//!
//! ```
//! use z2z4::{AdditiveCyclicCode, BinPoly};
//!
//! let a: BinPoly = "1+x^2".parse().unwrap();
//! let b: BinPoly = "1+x".parse().unwrap();
//! let code = AdditiveCyclicCode::new(3, a, b).unwrap();
//! assert_eq!(code.dim(), 2);
//! assert_eq!(code.min_weight(28).unwrap(), 6);
//! ```

pub mod alphabet;
pub mod bounds;
pub mod cli;
pub mod codes;
pub mod error;
pub mod experiments;
pub mod poly2;

pub use alphabet::Z2Z4Word;
pub use bounds::{check_admissible, entropy, AdmissibleDelta};
pub use codes::{AdditiveCyclicCode, GeneratorMatrix, DEFAULT_ENUMERATION_CAP};
pub use error::{Error, Result};
pub use experiments::{Census, ExperimentReport};
pub use poly2::{BinPoly, FactorSet};
