//! Fractional ideals of the ring of integers, stored as canonical HNF
//! lattices in integral-basis coordinates.

use super::{FieldElement, NumberField};
use crate::arith::lattice::Lattice;
use crate::arith::ring::{Field, Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FracIdeal {
    pub lattice: Lattice,
}

impl FracIdeal {
    pub fn unit(f: &NumberField) -> FracIdeal {
        FracIdeal { lattice: Lattice::standard(f.degree) }
    }

    /// Ideal generated over the ring of integers by the given elements.
    pub fn from_generators(f: &NumberField, gens: &[FieldElement]) -> Option<FracIdeal> {
        let mut z = Vec::new();
        for g in gens {
            if f.is_zero(g) {
                continue;
            }
            for j in 0..f.degree {
                z.push(f.mul(g, &f.basis_element(j)).0);
            }
        }
        Lattice::from_generators(f.degree, &z).map(|lattice| FracIdeal { lattice })
    }

    pub fn principal(f: &NumberField, a: &FieldElement) -> FracIdeal {
        Self::from_generators(f, std::slice::from_ref(a)).expect("principal ideal of zero")
    }

    pub fn from_int(f: &NumberField, n: &Int) -> FracIdeal {
        Self::principal(f, &f.from_int(n))
    }

    pub fn basis(&self) -> Vec<FieldElement> {
        self.lattice.basis_rat().into_iter().map(FieldElement).collect()
    }

    pub fn contains(&self, a: &FieldElement) -> bool {
        self.lattice.contains(&a.0)
    }

    pub fn contains_ideal(&self, other: &FracIdeal) -> bool {
        self.lattice.contains_lattice(&other.lattice)
    }

    pub fn is_integral(&self) -> bool {
        self.lattice.is_integral()
    }

    pub fn is_unit(&self) -> bool {
        self.lattice.denom.is_one() && self.lattice.basis.iter().enumerate().all(|(i, r)| r[i].is_one())
    }

    /// Absolute norm.
    pub fn norm(&self) -> Rat {
        self.lattice.covolume()
    }

    pub fn mul(&self, f: &NumberField, other: &FracIdeal) -> FracIdeal {
        let a = self.basis();
        let b = other.basis();
        let mut gens = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                gens.push(f.mul(x, y).0);
            }
        }
        FracIdeal { lattice: Lattice::from_generators(f.degree, &gens).unwrap() }
    }

    pub fn mul_element(&self, f: &NumberField, a: &FieldElement) -> FracIdeal {
        let gens: Vec<Vec<Rat>> = self.basis().iter().map(|x| f.mul(x, a).0).collect();
        FracIdeal { lattice: Lattice::from_generators(f.degree, &gens).expect("scaling by zero") }
    }

    pub fn add(&self, other: &FracIdeal) -> FracIdeal {
        FracIdeal { lattice: self.lattice.sum(&other.lattice) }
    }

    pub fn intersect(&self, other: &FracIdeal) -> FracIdeal {
        FracIdeal { lattice: self.lattice.intersection(&other.lattice) }
    }

    pub fn inverse(&self, f: &NumberField) -> FracIdeal {
        let mut rows = Vec::new();
        for g in self.basis() {
            let m = f.mult_matrix(&g);
            rows.extend(m.to_rows());
        }
        FracIdeal { lattice: Lattice::preimage_of_integers(f.degree, &rows).unwrap() }
    }

    pub fn pow(&self, f: &NumberField, e: i64) -> FracIdeal {
        let base = if e < 0 { self.inverse(f) } else { self.clone() };
        let mut result = FracIdeal::unit(f);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(f, &b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(f, &b);
            }
        }
        result
    }

    /// `self * other^{-1}`.
    pub fn div(&self, f: &NumberField, other: &FracIdeal) -> FracIdeal {
        self.mul(f, &other.inverse(f))
    }

    pub fn is_coprime(&self, other: &FracIdeal) -> bool {
        self.add(other).is_unit()
    }

    /// Smallest positive integer in an integral ideal.
    pub fn min_integer(&self) -> Int {
        assert!(self.is_integral());
        let mut one = vec![Rat::zero(); self.lattice.dim];
        one[0] = Rat::one();
        let c = rational_coordinates(&self.lattice, &one);
        let mut d = Int::one();
        for x in &c {
            d = d.lcm(x.denom());
        }
        d
    }

    /// Positive integer `d` with `d * self` integral (the lattice denominator).
    pub fn denominator(&self) -> Int {
        self.lattice.denom.clone()
    }

    /// Two-element presentation `(a, b)` of an integral ideal with `a` the
    /// smallest positive integer in it.
    pub fn two_element(&self, f: &NumberField) -> (Int, FieldElement) {
        assert!(self.is_integral());
        let a = self.min_integer();
        let basis = self.basis();
        if self.is_unit() {
            return (a, f.one());
        }
        let norm = self.norm().to_integer();
        // try basis elements, then small combinations
        let mut cand: Vec<FieldElement> = basis.clone();
        let n = basis.len();
        for bound in 1i64..=4 {
            for coeffs in small_vectors(n, bound) {
                let mut x = f.zero();
                for (c, b) in coeffs.iter().zip(&basis) {
                    if *c != 0 {
                        x = f.add(&x, &f.mul(&f.from_i64(*c), b));
                    }
                }
                cand.push(x);
            }
        }
        for b in cand {
            if f.is_zero(&b) {
                continue;
            }
            let nb = f.norm(&b).to_integer().abs();
            // gcd(N(b)/N(I), a) = 1 is sufficient for (a, b) = I
            if (&nb / &norm).gcd(&a).is_one() || FracIdeal::from_generators(f, &[f.from_int(&a), b.clone()]).as_ref() == Some(self) {
                return (a, b);
            }
        }
        unreachable!("two-element form search failed")
    }

    /// Element `a` of `self` with `a - 1` in `other`, for coprime integral ideals.
    pub fn idempotent(&self, f: &NumberField, other: &FracIdeal) -> Option<FieldElement> {
        assert!(self.is_integral() && other.is_integral());
        let mut gens: Vec<Vec<Int>> = self.lattice.basis.clone();
        gens.extend(other.lattice.basis.iter().cloned());
        let mut target = vec![Int::zero(); f.degree];
        target[0] = Int::one();
        let c = crate::arith::lattice::solve_integer(&gens, &target)?;
        let n = self.lattice.basis.len();
        let mut a = vec![Int::zero(); f.degree];
        for (ci, row) in c[..n].iter().zip(&self.lattice.basis) {
            for (x, y) in a.iter_mut().zip(row) {
                *x += ci * y;
            }
        }
        // shorten modulo self * other
        let prod = self.mul(f, other);
        let a = prod.lattice.reduce_vector(&a);
        Some(FieldElement(a.into_iter().map(Rat::from_integer).collect()))
    }

    pub fn format(&self, f: &NumberField, var: &str) -> String {
        if !self.is_integral() {
            let d = self.denominator();
            let num = FracIdeal { lattice: Lattice { denom: Int::one(), ..self.lattice.clone() } };
            return format!("{}/{}", num.format(f, var), d);
        }
        let (a, b) = self.two_element(f);
        if self.is_unit() {
            return "(1)".to_string();
        }
        format!("({}, {})", a, f.format_element(&b, var))
    }
}

fn small_vectors(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-bound; n];
    loop {
        if v.iter().any(|x| x.abs() == bound) {
            out.push(v.clone());
        }
        let mut k = 0;
        while k < n {
            v[k] += 1;
            if v[k] <= bound {
                break;
            }
            v[k] = -bound;
            k += 1;
        }
        if k == n {
            break;
        }
    }
    out
}

/// Rational coordinates of `v` with respect to the lattice basis.
pub(crate) fn rational_coordinates(l: &Lattice, v: &[Rat]) -> Vec<Rat> {
    let dr = Rat::from_integer(l.denom.clone());
    let mut w: Vec<Rat> = v.iter().map(|x| x * &dr).collect();
    let mut c = vec![Rat::zero(); l.dim];
    for i in 0..l.dim {
        let q = &w[i] / Rat::from_integer(l.basis[i][i].clone());
        if !q.is_zero() {
            for j in i..l.dim {
                w[j] -= &q * Rat::from_integer(l.basis[i][j].clone());
            }
        }
        c[i] = q;
    }
    c
}

impl fmt::Display for FracIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .lattice
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]/{}", rows.join(";"), self.lattice.denom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ideal_arithmetic_cubic() {
        let f = NumberField::new(&[-11, -11, 0, 1]).unwrap();
        let b = FracIdeal::principal(&f, &f.parse_element("w^2-2w-6", "w").unwrap());
        assert_eq!(b.norm(), Rat::from_integer(Int::from(7)));
        assert_eq!(b.min_integer(), Int::from(7));
        let bi = b.inverse(&f);
        assert!(b.mul(&f, &bi).is_unit());
        assert_eq!(bi.norm(), Rat::new(Int::one(), Int::from(7)));
        let p3 = FracIdeal::principal(&f, &f.parse_element("w+2", "w").unwrap());
        assert_eq!(p3.norm(), Rat::from_integer(Int::from(3)));
        let (a, g) = p3.two_element(&f);
        assert_eq!(FracIdeal::from_generators(&f, &[f.from_int(&a), g]).unwrap(), p3);
        assert_eq!(b.mul(&f, &p3).norm(), Rat::from_integer(Int::from(21)));
        assert!(b.is_coprime(&p3));
        let e = b.idempotent(&f, &p3).unwrap();
        assert!(b.contains(&e));
        assert!(p3.contains(&f.sub(&e, &f.one())));
        assert_eq!(p3.pow(&f, -2).mul(&f, &p3.pow(&f, 2)), FracIdeal::unit(&f));
    }
}
