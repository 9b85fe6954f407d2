//! Field abstraction used by the generic linear algebra.
//!
//! Elements do not carry their field; every operation goes through a
//! context value implementing [`Field`]. This lets the same kernels run over
//! `Q`, prime fields and number fields without global state.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;
use std::hash::Hash;

pub type Int = BigInt;
pub type Rat = BigRational;

pub trait Field: Clone + Debug {
    type El: Clone + PartialEq + Eq + Hash + Debug;

    fn zero(&self) -> Self::El;
    fn one(&self) -> Self::El;
    fn is_zero(&self, a: &Self::El) -> bool;
    fn add(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn sub(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn mul(&self, a: &Self::El, b: &Self::El) -> Self::El;
    fn neg(&self, a: &Self::El) -> Self::El;
    /// Panics on zero.
    fn inv(&self, a: &Self::El) -> Self::El;
    fn from_i64(&self, n: i64) -> Self::El;

    fn div(&self, a: &Self::El, b: &Self::El) -> Self::El {
        self.mul(a, &self.inv(b))
    }
    fn is_one(&self, a: &Self::El) -> bool {
        *a == self.one()
    }
    fn pow(&self, a: &Self::El, mut e: u64) -> Self::El {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type El = Rat;
    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn inv(&self, a: &Rat) -> Rat {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_i64(&self, n: i64) -> Rat {
        Rat::from_integer(Int::from(n))
    }
}

/// Prime field `Z/pZ` with `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    pub p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2 && p < (1 << 31));
        PrimeField { p }
    }
    pub fn reduce_int(&self, n: &Int) -> u64 {
        let m = n % Int::from(self.p);
        let m = if m.is_negative() { m + Int::from(self.p) } else { m };
        u64::try_from(m).unwrap()
    }
    /// Reduces a rational with denominator prime to `p`.
    pub fn reduce_rat(&self, r: &Rat) -> Option<u64> {
        let d = self.reduce_int(r.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(&self.reduce_int(r.numer()), &self.inv(&d)))
    }
}

impl Field for PrimeField {
    type El = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero mod {}", self.p);
        self.pow(a, self.p - 2)
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rint(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> Int {
    let mut d = Int::one();
    for x in xs {
        d = num_integer::Integer::lcm(&d, x.denom());
    }
    d
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            // scale down huge numerators and denominators together
            let nb = r.numer().bits() as i64;
            let db = r.denom().bits() as i64;
            let shift = (nb.max(db) - 900).max(0) as usize;
            let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                f64::INFINITY * n.signum()
            } else {
                n / d
            }
        }
    }
}
