//! The residue field F_q, q = p^k with p odd, realized by lookup tables.
//!
//! An element is identified with its canonical index `Σ c_i p^i`, where
//! `c_0 + c_1 t + ... + c_{k-1} t^{k-1}` is its reduced representative modulo
//! the defining polynomial. Index 0 is zero and index 1 is one.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::phase::Phase;

/// Largest field order for which tables are built.
pub const MAX_FIELD_ORDER: usize = 2048;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    /// Monic modulus, coefficients from the constant term up; ignored when `k == 1`.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> FieldSpec {
        FieldSpec { p, k: 1, modulus: vec![0, 1] }
    }

    pub fn new(p: u32, k: u32, modulus: Vec<u32>) -> FieldSpec {
        FieldSpec { p, k, modulus }
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fq(pub(crate) u16);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
pub struct Field {
    spec: FieldSpec,
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
    trace: Vec<u16>,
    square: Vec<bool>,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl Field {
    pub fn new(spec: FieldSpec) -> Result<Field> {
        let p = spec.p;
        if p % 2 == 0 {
            return domain("odd characteristic required");
        }
        if !is_prime(p) {
            return domain(format!("{p} is not prime"));
        }
        if spec.k == 0 {
            return domain("extension degree must be positive");
        }
        let k = spec.k as usize;
        let q = (p as usize)
            .checked_pow(spec.k)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or_else(|| Error::Domain(format!("field order {p}^{k} exceeds {MAX_FIELD_ORDER}")))?;
        let modulus: Vec<u32> = if k == 1 {
            vec![0, 1]
        } else {
            if spec.modulus.len() != k + 1 || spec.modulus[k] != 1 {
                return domain(format!("modulus must be monic of degree {k}"));
            }
            if spec.modulus.iter().any(|&c| c >= p) {
                return domain(format!("modulus coefficients must lie in [0, {p})"));
            }
            spec.modulus.clone()
        };

        let p_us = p as usize;
        let digits = |mut a: usize| -> Vec<u32> {
            let mut v = vec![0u32; k];
            for d in v.iter_mut() {
                *d = (a % p_us) as u32;
                a /= p_us;
            }
            v
        };
        let index = |c: &[u32]| -> u16 { c.iter().rev().fold(0usize, |acc, &d| acc * p_us + d as usize) as u16 };

        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        let all: Vec<Vec<u32>> = (0..q).map(digits).collect();
        for a in 0..q {
            let ca = &all[a];
            neg[a] = index(&ca.iter().map(|&x| (p - x) % p).collect::<Vec<_>>());
            for b in 0..q {
                let cb = &all[b];
                let s: Vec<u32> = ca.iter().zip(cb).map(|(&x, &y)| (x + y) % p).collect();
                add[a * q + b] = index(&s);
                // schoolbook product, then reduce by the monic modulus from the top
                let mut prod = vec![0u64; 2 * k - 1];
                for (i, &x) in ca.iter().enumerate() {
                    for (j, &y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
                    }
                }
                for d in (k..prod.len()).rev() {
                    let c = prod[d];
                    if c == 0 {
                        continue;
                    }
                    for (j, &mj) in modulus.iter().enumerate().take(k) {
                        let t = &mut prod[d - k + j];
                        *t = (*t + (p as u64 - c) * mj as u64) % p as u64;
                    }
                    prod[d] = 0;
                }
                let red: Vec<u32> = prod[..k].iter().map(|&x| x as u32).collect();
                mul[a * q + b] = index(&red);
            }
        }

        let mut inv = vec![0u16; q];
        for a in 1..q {
            match (1..q).find(|&b| mul[a * q + b] == 1) {
                Some(b) => inv[a] = b as u16,
                None => return domain("modulus is reducible: the quotient has zero divisors"),
            }
        }

        let pow = |a: usize, e: usize| -> usize { (0..e).fold(1usize, |acc, _| mul[acc * q + a] as usize) };
        let mut trace = vec![0u16; q];
        for (a, t) in trace.iter_mut().enumerate() {
            let mut s = 0usize;
            let mut conj = a;
            for _ in 0..k {
                s = add[s * q + conj] as usize;
                conj = pow(conj, p_us);
            }
            debug_assert!(s < p_us, "trace must land in the prime field");
            *t = s as u16;
        }

        let mut square = vec![false; q];
        for a in 0..q {
            square[mul[a * q + a] as usize] = true;
        }

        Ok(Field { spec: FieldSpec { p, k: spec.k, modulus }, q, add, mul, neg, inv, trace, square })
    }

    pub fn prime(p: u32) -> Result<Field> {
        Field::new(FieldSpec::prime(p))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn k(&self) -> u32 {
        self.spec.k
    }

    pub fn elem(&self, index: usize) -> Fq {
        assert!(index < self.q);
        Fq(index as u16)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q as u16).map(Fq)
    }

    /// Image of an integer under Z → F_p ⊂ F_q.
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.spec.p as i64) as u16)
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Fq> {
        if c.len() > self.spec.k as usize || c.iter().any(|&x| x >= self.spec.p) {
            return domain(format!("{c:?} is not a reduced element of F_{}", self.q));
        }
        let p = self.spec.p as usize;
        Ok(Fq(c.iter().rev().fold(0usize, |acc, &d| acc * p + d as usize) as u16))
    }

    pub fn coeffs(&self, a: Fq) -> Vec<u32> {
        let p = self.spec.p as usize;
        let mut x = a.index();
        (0..self.spec.k)
            .map(|_| {
                let d = (x % p) as u32;
                x /= p;
                d
            })
            .collect()
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.add[a.index() * self.q + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        Fq(self.mul[a.index() * self.q + b.index()])
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a.is_zero() {
            return domain("division by zero in F_q");
        }
        Ok(Fq(self.inv[a.index()]))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Absolute trace to F_p, as an integer in `[0, p)`.
    pub fn trace(&self, a: Fq) -> u32 {
        self.trace[a.index()] as u32
    }

    /// Zero counts as a square.
    pub fn is_square(&self, a: Fq) -> bool {
        self.square[a.index()]
    }

    /// First non-square in index order.
    pub fn nonsquare_unit(&self) -> Fq {
        self.elements().find(|&a| !self.is_square(a)).expect("odd q has non-squares")
    }

    /// ψ(a) = exp(2πi·Tr(a)/p).
    pub fn psi(&self, a: Fq) -> Phase {
        Phase::new(self.trace(a) as i64, self.spec.p as u64)
    }

    pub fn psi_complex(&self, a: Fq) -> Complex64 {
        self.psi(a).to_complex()
    }
}
