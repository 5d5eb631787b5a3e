//! Complex class functions and the character pairing.
//!
//! Sums run over fixed-size chunks whose partial sums are then added in chunk
//! order, so results do not depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const CHUNK: usize = 4096;

pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct ClassFunction {
    pub values: Vec<Complex64>,
}

impl ClassFunction {
    pub fn new(values: Vec<Complex64>) -> ClassFunction {
        ClassFunction { values }
    }

    pub fn constant(n: usize, c: f64) -> ClassFunction {
        ClassFunction { values: vec![Complex64::new(c, 0.0); n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn at(&self, i: usize) -> Complex64 {
        self.values[i]
    }

    /// Largest |x(g) − y(g)|.
    pub fn max_deviation(&self, other: &ClassFunction) -> f64 {
        self.values
            .par_chunks(CHUNK)
            .zip(other.values.par_chunks(CHUNK))
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
            .collect::<Vec<f64>>()
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// (1/|G|) Σ x(g) conj(y(g)).
pub fn inner_product_raw(x: &ClassFunction, y: &ClassFunction) -> Complex64 {
    assert_eq!(x.len(), y.len(), "class functions on different groups");
    let partial: Vec<Complex64> = x
        .values
        .par_chunks(CHUNK)
        .zip(y.values.par_chunks(CHUNK))
        .map(|(a, b)| a.iter().zip(b).fold(Complex64::new(0.0, 0.0), |s, (u, v)| s + u * v.conj()))
        .collect();
    partial.into_iter().fold(Complex64::new(0.0, 0.0), |s, c| s + c) / x.len() as f64
}

/// Rounds a complex number that must be an integer.
pub fn round_integer(z: Complex64, tol: f64, what: &str) -> Result<i64> {
    let n = z.re.round();
    if (z - Complex64::new(n, 0.0)).norm() >= tol {
        return Err(Error::Numerical(format!("{what} = {z} is not within {tol} of an integer")));
    }
    Ok(n as i64)
}

/// The pairing, rounded to the nearest integer.
pub fn inner_product(x: &ClassFunction, y: &ClassFunction, tol: f64) -> Result<i64> {
    round_integer(inner_product_raw(x, y), tol, "inner product")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_of_cyclic_characters() {
        let n = 6;
        let chi = |k: usize| {
            ClassFunction::new((0..n).map(|g| crate::phase::Phase::new((k * g) as i64, n as u64).to_complex()).collect())
        };
        for a in 0..n {
            for b in 0..n {
                let ip = inner_product(&chi(a), &chi(b), DEFAULT_TOL).unwrap();
                assert_eq!(ip, (a == b) as i64);
            }
        }
        let half = ClassFunction::constant(n, 0.5);
        assert!(matches!(inner_product(&half, &chi(0), DEFAULT_TOL), Err(Error::Numerical(_))));
    }
}
