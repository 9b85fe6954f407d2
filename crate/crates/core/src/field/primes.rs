//! Prime ideals above rational primes (Dedekind-Kummer), residue maps and
//! valuations.

use super::{FieldElement, FracIdeal, NumberField};
use crate::arith::fp::{fp_factor, FiniteField, FpPoly};
use crate::arith::intfactor::factor_int;
use crate::arith::matrix::{inverse, Matrix};
use crate::arith::poly;
use crate::arith::ring::{Field, Int, PrimeField, Rat, Rationals};
use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub p: u64,
    /// Ramification index.
    pub e: u32,
    /// Residue degree.
    pub f: u32,
    pub ideal: FracIdeal,
    pub residue_field: FiniteField,
    basis_images: Vec<Vec<u64>>,
    theta_powers: Vec<Vec<Int>>,
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.ideal == other.ideal
    }
}
impl Eq for PrimeIdeal {}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }

    /// Reduction of a `𝔭`-integral element into the residue field.
    pub fn reduce(&self, fld: &NumberField, a: &FieldElement) -> Result<Vec<u64>> {
        let base = PrimeField::new(self.p);
        let d = a.denominator();
        if !d.is_multiple_of(&Int::from(self.p)) {
            let mut acc = self.residue_field.zero();
            for (c, img) in a.0.iter().zip(&self.basis_images) {
                if c.is_zero() {
                    continue;
                }
                let c = base.reduce_rat(c).unwrap();
                acc = self.residue_field.add(&acc, &img.iter().map(|x| base.mul(x, &c)).collect());
            }
            return Ok(acc);
        }
        let j = FracIdeal::from_generators(fld, &[fld.one(), a.clone()]).unwrap();
        let den = j.inverse(fld);
        if !den.is_coprime(&self.ideal) {
            return Err(Error::NonInvertible(format!("element is not integral at the prime of norm {}", self.norm())));
        }
        let s = den.idempotent(fld, &self.ideal).unwrap();
        self.reduce(fld, &fld.mul(&s, a))
    }

    /// An integral lift of a residue field element.
    pub fn lift(&self, x: &[u64]) -> FieldElement {
        let n = self.theta_powers[0].len();
        let mut out = vec![Int::zero(); n];
        for (c, tp) in x.iter().zip(&self.theta_powers) {
            if *c == 0 {
                continue;
            }
            for (o, t) in out.iter_mut().zip(tp) {
                *o += Int::from(*c) * t;
            }
        }
        FieldElement(out.into_iter().map(Rat::from_integer).collect())
    }

    pub fn power(&self, fld: &NumberField, k: u32) -> FracIdeal {
        self.ideal.pow(fld, k as i64)
    }

    /// Valuation of a nonzero fractional ideal.
    pub fn ideal_valuation(&self, fld: &NumberField, i: &FracIdeal) -> i64 {
        let d = i.denominator();
        let pz = Int::from(self.p);
        let mut vd = 0i64;
        let mut dd = d.clone();
        while dd.is_multiple_of(&pz) {
            dd /= &pz;
            vd += 1;
        }
        let num = i.mul_element(fld, &fld.from_int(&d));
        let nn = num.norm().to_integer();
        let mut bound = 0u32;
        let mut m = nn;
        while m.is_multiple_of(&pz) && !m.is_zero() {
            m /= &pz;
            bound += 1;
        }
        let kmax = bound / self.f;
        let mut k = 0;
        let mut pk = self.ideal.clone();
        while k < kmax && pk.contains_ideal(&num) {
            k += 1;
            pk = pk.mul(fld, &self.ideal);
        }
        k as i64 - vd * self.e as i64
    }

    pub fn valuation(&self, fld: &NumberField, a: &FieldElement) -> i64 {
        assert!(!fld.is_zero(a), "valuation of zero");
        self.ideal_valuation(fld, &FracIdeal::principal(fld, a))
    }

    /// An element of valuation exactly one.
    pub fn uniformizer(&self, fld: &NumberField) -> FieldElement {
        if self.e == 1 {
            return fld.from_int(&Int::from(self.p));
        }
        let sq = self.ideal.mul(fld, &self.ideal);
        let basis = self.ideal.basis();
        for b in &basis {
            if !sq.contains(b) {
                return b.clone();
            }
        }
        unreachable!("prime ideal equals its square")
    }
}

/// Integral basis coordinates of `theta^k`, `k <= n`.
fn powers(fld: &NumberField, theta: &FieldElement) -> Vec<Vec<Int>> {
    let mut out = Vec::with_capacity(fld.degree + 1);
    let mut cur = fld.one();
    for _ in 0..=fld.degree {
        out.push(cur.0.iter().map(|c| c.to_integer()).collect());
        cur = fld.mul(&cur, theta);
    }
    out
}

fn vp(n: &Int, p: u64) -> u32 {
    let pz = Int::from(p);
    let mut m = n.abs();
    let mut k = 0;
    while !m.is_zero() && m.is_multiple_of(&pz) {
        m /= &pz;
        k += 1;
    }
    k
}

/// Generator candidates for Dedekind-Kummer: the defining generator, the
/// integral basis, then pseudo-random small combinations.
fn theta_candidates(fld: &NumberField) -> Vec<FieldElement> {
    let n = fld.degree;
    let mut out = vec![fld.generator()];
    for j in 1..n {
        out.push(fld.basis_element(j));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for round in 0..200 {
        let b = 1 + round / 20;
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-b..=b)).collect();
        out.push(fld.from_coords_i64(&c));
    }
    out
}

/// Factors `p Z_F` into prime ideals, sorted by norm and then by basis.
pub fn factor_rational_prime(fld: &NumberField, p: u64) -> Result<Vec<PrimeIdeal>> {
    let n = fld.degree;
    let base = PrimeField::new(p);
    let vdisc = vp(&fld.disc, p);
    for theta in theta_candidates(fld) {
        if !theta.is_integral() {
            continue;
        }
        let chi = fld.char_poly(&theta);
        let dchi = poly::discriminant(&chi).to_integer();
        if dchi.is_zero() || vp(&dchi, p) != vdisc {
            continue;
        }
        let tp = powers(fld, &theta);
        let m = Matrix::from_fn(n, n, |i, j| Rat::from_integer(tp[i][j].clone()));
        let minv = inverse(&Rationals, &m).expect("theta generates the field");
        // b_j = sum_k minv[j][k] theta^k
        let chi_p: FpPoly = chi.iter().map(|c| base.reduce_rat(c).unwrap()).collect();
        let mut out = Vec::new();
        for (g, e) in fp_factor(&base, &chi_p) {
            let res = FiniteField::new(p, g.clone());
            let basis_images = (0..n)
                .map(|j| {
                    let c: FpPoly = (0..n).map(|k| base.reduce_rat(minv.get(j, k)).unwrap()).collect();
                    res.from_poly(&c)
                })
                .collect();
            let mut gt = fld.zero();
            for (k, c) in g.iter().enumerate() {
                if *c != 0 {
                    let term = FieldElement(tp[k].iter().map(|x| Rat::from_integer(x * Int::from(*c))).collect());
                    gt = fld.add(&gt, &term);
                }
            }
            let ideal = FracIdeal::from_generators(fld, &[fld.from_int(&Int::from(p)), gt]).unwrap();
            let f = (g.len() - 1) as u32;
            out.push(PrimeIdeal {
                p,
                e: e as u32,
                f,
                ideal,
                residue_field: res,
                basis_images,
                theta_powers: tp[..f as usize].to_vec(),
            });
        }
        out.sort_by(|a, b| (a.norm(), &a.ideal.lattice.basis).cmp(&(b.norm(), &b.ideal.lattice.basis)));
        return Ok(out);
    }
    Err(Error::CommonIndexDivisor { p })
}

/// Prime ideal factorization of a nonzero fractional ideal.
pub fn factor_ideal(fld: &NumberField, i: &FracIdeal) -> Result<Vec<(PrimeIdeal, i64)>> {
    let d = i.denominator();
    let num = i.mul_element(fld, &fld.from_int(&d));
    let mut ps: Vec<Int> = Vec::new();
    let nn = num.norm().to_integer();
    for x in [nn, d] {
        if x > Int::one() {
            for (p, _) in factor_int(&x) {
                if !ps.contains(&p) {
                    ps.push(p);
                }
            }
        }
    }
    ps.sort();
    let mut out = Vec::new();
    for p in ps {
        let p = p.to_u64().ok_or_else(|| Error::Unsupported("prime too large".into()))?;
        for q in factor_rational_prime(fld, p)? {
            let v = q.ideal_valuation(fld, i);
            if v != 0 {
                out.push((q, v));
            }
        }
    }
    Ok(out)
}

/// All prime ideals of norm at most `bound`, sorted by norm.
pub fn primes_up_to(fld: &NumberField, bound: u64) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for p in crate::arith::intfactor::primes_up_to(bound) {
        for q in factor_rational_prime(fld, p)? {
            if q.norm() <= bound {
                out.push(q);
            }
        }
    }
    out.sort_by(|a, b| (a.norm(), &a.ideal.lattice.basis).cmp(&(b.norm(), &b.ideal.lattice.basis)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_reconstruction(fld: &NumberField, p: u64) -> Vec<PrimeIdeal> {
        let ps = factor_rational_prime(fld, p).unwrap();
        let total: u32 = ps.iter().map(|q| q.e * q.f).sum();
        assert_eq!(total as usize, fld.degree);
        let mut prod = FracIdeal::unit(fld);
        for q in &ps {
            prod = prod.mul(fld, &q.power(fld, q.e));
            assert_eq!(q.ideal.norm(), Rat::from_integer(Int::from(q.norm())));
        }
        assert_eq!(prod, FracIdeal::from_int(fld, &Int::from(p)));
        ps
    }

    #[test]
    fn cubic_primes() {
        let fld = NumberField::new(&[-11, -11, 0, 1]).unwrap();
        let ps = check_reconstruction(&fld, 3);
        assert_eq!(ps.iter().map(|q| (q.e, q.f)).collect::<Vec<_>>(), vec![(1, 1), (1, 2)]);
        assert_eq!(ps[0].ideal, FracIdeal::principal(&fld, &fld.parse_element("w+2", "w").unwrap()));
        let ps11 = check_reconstruction(&fld, 11);
        assert!(ps11.iter().any(|q| q.e > 1));
        let w = FracIdeal::principal(&fld, &fld.generator());
        assert!(ps11.iter().any(|q| q.ideal == w));
        for p in [2, 5, 7, 13, 17] {
            check_reconstruction(&fld, p);
        }
    }

    #[test]
    fn quadratic_primes_and_residues() {
        let fld = NumberField::new(&[-5, 0, 1]).unwrap();
        let ps = check_reconstruction(&fld, 7);
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].f, 2);
        let f65 = NumberField::new(&[-65, 0, 1]).unwrap();
        for p in [2, 3, 5, 13] {
            check_reconstruction(&f65, p);
        }
        // reduction is a ring homomorphism
        let q = &factor_rational_prime(&f65, 2).unwrap()[0];
        let a = f65.from_coords_i64(&[3, 5]);
        let b = f65.from_coords_i64(&[-1, 7]);
        let ra = q.reduce(&f65, &a).unwrap();
        let rb = q.reduce(&f65, &b).unwrap();
        assert_eq!(q.reduce(&f65, &f65.mul(&a, &b)).unwrap(), q.residue_field.mul(&ra, &rb));
        assert_eq!(q.reduce(&f65, &q.lift(&ra)).unwrap(), ra);
    }

    #[test]
    fn valuations() {
        let fld = NumberField::new(&[-11, -11, 0, 1]).unwrap();
        let ps = factor_rational_prime(&fld, 11).unwrap();
        let w = fld.generator();
        let total: i64 = ps.iter().map(|q| q.valuation(&fld, &w) * q.f as i64).sum();
        assert_eq!(total, 1);
        let i = FracIdeal::principal(&fld, &fld.from_int(&Int::from(99)));
        let fac = factor_ideal(&fld, &i.inverse(&fld)).unwrap();
        let mut prod = FracIdeal::unit(&fld);
        for (q, e) in &fac {
            prod = prod.mul(&fld, &q.ideal.pow(&fld, *e));
        }
        assert_eq!(prod, i.inverse(&fld));
    }
}
