//! Exact roots of unity, stored as rationals modulo 1.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_integer::Integer;

/// The root of unity `exp(2πi·num/den)`, with `num/den` reduced into `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ONE: Phase = Phase { num: 0, den: 1 };

    pub fn new(num: i64, den: u64) -> Phase {
        assert!(den > 0, "phase denominator must be positive");
        let r = num.rem_euclid(den as i64) as u64;
        let g = r.gcd(&den);
        Phase { num: r / g, den: den / g }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_one(self) -> bool {
        self.num == 0
    }

    /// The `k`-th of the `n` roots of `self`, counted from the one of smallest argument.
    pub fn root(self, n: u64, k: u64) -> Phase {
        assert!(n > 0);
        let num = self.num as u128 + (k % n) as u128 * self.den as u128;
        let den = self.den as u128 * n as u128;
        let g = num.gcd(&den);
        Phase { num: (num / g) as u64, den: (den / g) as u64 }
    }

    pub fn to_complex(self) -> Complex64 {
        if self.num == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let (s, c) = (std::f64::consts::TAU * self.num as f64 / self.den as f64).sin_cos();
        Complex64::new(c, s)
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ONE
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        let den = self.den.lcm(&o.den);
        let num = (self.num as u128 * (den / self.den) as u128 + o.num as u128 * (den / o.den) as u128)
            % den as u128;
        Phase::new(num as i64, den)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, o: Phase) {
        *self = *self + o;
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-(self.num as i64), self.den)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, o: Phase) -> Phase {
        self + (-o)
    }
}

impl Mul<i64> for Phase {
    type Output = Phase;
    fn mul(self, k: i64) -> Phase {
        let num = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Phase::new(num as i64, self.den)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}
