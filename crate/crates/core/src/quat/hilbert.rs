//! Local Hilbert symbols `(a, b)_v` and the ramification set of `(a, b | F)`.

use super::QuatAlgebra;
use crate::arith::ring::{Field, Int, Rat};
use crate::error::{Error, Result};
use crate::field::primes::factor_ideal;
use crate::field::units::pow_elt;
use crate::field::{factor_rational_prime, FieldElement, FracIdeal, NumberField, PrimeIdeal};

const EVEN_SEARCH_LIMIT: usize = 4_000_000;

/// `(a, b)_v` at a real place.
pub fn hilbert_symbol_real(fld: &NumberField, a: &FieldElement, b: &FieldElement, place: usize) -> Result<i32> {
    if fld.sign_at(a, place)? < 0 && fld.sign_at(b, place)? < 0 {
        Ok(-1)
    } else {
        Ok(1)
    }
}

/// `(a, b)_p` at a finite prime. Odd primes use the tame symbol; primes
/// above 2 use a Hensel-bounded search for a primitive zero of
/// `a x^2 + b y^2 - z^2`.
pub fn hilbert_symbol(fld: &NumberField, a: &FieldElement, b: &FieldElement, p: &PrimeIdeal) -> Result<i32> {
    if p.p == 2 {
        return even_symbol(fld, a, b, p);
    }
    let alpha = p.valuation(fld, a);
    let beta = p.valuation(fld, b);
    let mut u = fld.mul(&pow_elt(fld, a, beta), &pow_elt(fld, b, -alpha));
    if (alpha * beta) % 2 != 0 {
        u = fld.neg(&u);
    }
    let r = p.reduce(fld, &u)?;
    Ok(p.residue_field.quadratic_character(&r))
}

fn int_coords(x: &FieldElement) -> Vec<Int> {
    x.0.iter().map(|c| c.to_integer()).collect()
}

fn rat_vec(x: &[Int]) -> Vec<Rat> {
    x.iter().map(|c| Rat::from_integer(c.clone())).collect()
}

/// Divides out even powers of `p` using an element of `p^-1` outside `Z_F`.
fn square_reduce(fld: &NumberField, a: &FieldElement, p: &PrimeIdeal, tau: &FieldElement) -> FieldElement {
    let v = p.valuation(fld, a);
    fld.mul(a, &pow_elt(fld, tau, 2 * (v / 2)))
}

fn even_symbol(fld: &NumberField, a: &FieldElement, b: &FieldElement, p: &PrimeIdeal) -> Result<i32> {
    let inv = p.ideal.inverse(fld);
    let tau = inv
        .basis()
        .into_iter()
        .find(|x| !x.is_integral())
        .ok_or_else(|| Error::EvenPrimeBound("prime inverse is integral".into()))?;
    let a = int_coords(&square_reduce(fld, a, p, &tau));
    let b = int_coords(&square_reduce(fld, b, p, &tau));
    let k = 2 * p.e as usize + 3;
    let mut powers = vec![FracIdeal::unit(fld)];
    for j in 1..=k {
        powers.push(powers[j - 1].mul(fld, &p.ideal));
    }
    let mut steps = Vec::with_capacity(k);
    for j in 1..=k {
        let reps = powers[j - 1]
            .lattice
            .coset_representatives(&powers[j].lattice, 1 << 20)
            .ok_or_else(|| Error::EvenPrimeBound("residue ring too large".into()))?;
        steps.push(reps.into_iter().map(|v| v.iter().map(|c| c.to_integer()).collect::<Vec<Int>>()).collect::<Vec<_>>());
    }
    let q = |x: &[Int], y: &[Int], z: &[Int]| -> Vec<Int> {
        let mut r = fld.mul_int(&a, &fld.mul_int(x, x));
        for (o, t) in r.iter_mut().zip(fld.mul_int(&b, &fld.mul_int(y, y))) {
            *o += t;
        }
        for (o, t) in r.iter_mut().zip(fld.mul_int(z, z)) {
            *o -= t;
        }
        r
    };
    let add = |x: &[Int], y: &[Int]| -> Vec<Int> { x.iter().zip(y).map(|(s, t)| s + t).collect() };
    let zero = vec![Int::from(0); fld.degree];
    let mut budget = EVEN_SEARCH_LIMIT;
    // depth-first lifting of primitive solutions modulo p^j
    let mut stack: Vec<(usize, [Vec<Int>; 3])> = vec![(0, [zero.clone(), zero.clone(), zero.clone()])];
    while let Some((j, v)) = stack.pop() {
        if j == k {
            return Ok(1);
        }
        let reps = &steps[j];
        for r0 in reps {
            for r1 in reps {
                for r2 in reps {
                    if budget == 0 {
                        return Err(Error::EvenPrimeBound(format!("search at the prime of norm {} exceeded its budget", p.norm())));
                    }
                    budget -= 1;
                    if j == 0 && [r0, r1, r2].iter().all(|r| powers[1].contains(&FieldElement(rat_vec(r)))) {
                        continue;
                    }
                    let w = [add(&v[0], r0), add(&v[1], r1), add(&v[2], r2)];
                    let val = q(&w[0], &w[1], &w[2]);
                    if powers[j + 1].contains(&FieldElement(rat_vec(&val))) {
                        stack.push((j + 1, w));
                    }
                }
            }
        }
    }
    Ok(-1)
}

/// Finite primes where `(a, b | F)` ramifies, sorted by norm.
pub fn ramified_primes(alg: &QuatAlgebra) -> Result<Vec<PrimeIdeal>> {
    let fld = &alg.field;
    let mut candidates: Vec<PrimeIdeal> = Vec::new();
    for x in [&alg.a, &alg.b] {
        for (p, _) in factor_ideal(fld, &FracIdeal::principal(fld, x))? {
            if p.p != 2 && !candidates.contains(&p) {
                candidates.push(p);
            }
        }
    }
    let mut even = factor_rational_prime(fld, 2)?;
    even.sort_by_key(|p| p.norm());
    let last_even = even.pop();
    let mut parity = alg.ramified_real.len();
    let mut out = Vec::new();
    for p in candidates.into_iter().chain(even) {
        if hilbert_symbol(fld, &alg.a, &alg.b, &p)? < 0 {
            parity += 1;
            out.push(p);
        }
    }
    if let Some(p) = last_even {
        // product formula
        if parity % 2 == 1 {
            out.push(p);
        }
    }
    out.sort_by(|x, y| x.norm().cmp(&y.norm()).then_with(|| x.ideal.lattice.basis.cmp(&y.ideal.lattice.basis)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_symbols() {
        // Q(sqrt 5): (-1,-1) ramifies only at the two real places
        let f = NumberField::new(&[-5, 0, 1]).unwrap();
        let m1 = f.from_i64(-1);
        for p in [2u64, 3, 5] {
            for pr in factor_rational_prime(&f, p).unwrap() {
                assert_eq!(hilbert_symbol(&f, &m1, &m1, &pr).unwrap(), 1);
            }
        }
        // Q(sqrt 2): (-1,-1) at the ramified prime above 2 is 1 by parity
        let f2 = NumberField::new(&[-2, 0, 1]).unwrap();
        let m1 = f2.from_i64(-1);
        let p2 = &factor_rational_prime(&f2, 2).unwrap()[0];
        assert_eq!(hilbert_symbol(&f2, &m1, &m1, p2).unwrap(), 1);
        // (3, 5) over Q(sqrt 2): 3 stays inert, 5 stays inert
        let three = f2.from_i64(3);
        let p3 = &factor_rational_prime(&f2, 3).unwrap()[0];
        assert_eq!(hilbert_symbol(&f2, &three, &f2.from_i64(5), p3).unwrap(), 1);
        // (-1, 3) over Q(sqrt 5): ramified at the prime above 3 (inert, norm 9)
        let p3 = &factor_rational_prime(&f, 3).unwrap()[0];
        assert_eq!(hilbert_symbol(&f, &f.from_i64(-1), &f.from_i64(3), p3).unwrap(), 1);
        // Q(sqrt 3): 2 ramifies; (-1, 3) is ramified at 2 and 3-prime? parity check
        let f3 = NumberField::new(&[-3, 0, 1]).unwrap();
        let p2 = &factor_rational_prime(&f3, 2).unwrap()[0];
        let p3 = &factor_rational_prime(&f3, 3).unwrap()[0];
        let (a, b) = (f3.from_i64(-1), f3.from_i64(3));
        let s2 = hilbert_symbol(&f3, &a, &b, p2).unwrap();
        let s3 = hilbert_symbol(&f3, &a, &b, p3).unwrap();
        assert_eq!(s2 * s3, 1);
    }
}
