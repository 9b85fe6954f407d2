//! Residue splittings `O / pO ≅ M_2(F_q)` at primes not dividing the
//! discriminant, Eichler orders and integral ideals of prescribed norm.

use super::lattice::QuatLattice;
use super::{QuatAlgebra, QuatElement};
use crate::arith::fp::FiniteField;
use crate::arith::matrix::{determinant, inverse, mat_vec, rank, solve, Matrix};
use crate::arith::ring::Field;
use crate::error::{Error, Result};
use crate::field::primes::factor_ideal;
use crate::field::{FieldElement, FracIdeal, PrimeIdeal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use crate::field::p1::{mat2_det, mat2_mul, Fq, Mat2};

const ZERO_DIVISOR_TRIES: usize = 10_000;

#[derive(Clone, Debug)]
pub struct ResidueSplitting {
    pub prime: PrimeIdeal,
    local_basis: Vec<QuatElement>,
    to_local: Matrix<FieldElement>,
    images: Vec<Mat2>,
    from_matrix: Matrix<Fq>,
}

impl ResidueSplitting {
    pub fn new(alg: &QuatAlgebra, order: &QuatLattice, prime: &PrimeIdeal) -> Result<ResidueSplitting> {
        let fld = &alg.field;
        let k = &prime.residue_field;
        let p_order = order.scale_ideal(alg, &prime.ideal);
        let q4 = crate::arith::ring::Rat::from_integer(num_bigint::BigInt::from(prime.norm()).pow(4));
        if order.index_of(&p_order) != q4 {
            return Err(Error::BadPrime("order is not locally free of rank 4".into()));
        }
        // greedy local basis: four elements spanning O / pO over F_q
        let mut local: Vec<QuatElement> = Vec::new();
        let mut cur = p_order.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let ob = order.basis();
        let mut cands: Vec<QuatElement> = ob.clone();
        for _ in 0..200 {
            let mut x = alg.zero();
            for b in &ob {
                let c: i64 = rng.gen_range(-2..=2);
                if c != 0 {
                    x = alg.add(&x, &alg.scale_int(b, &c.into()));
                }
            }
            cands.push(x);
        }
        for g in cands {
            if local.len() == 4 {
                break;
            }
            let mut trial = local.clone();
            trial.push(g.clone());
            let mut gens = p_order.basis();
            for k in 0..fld.degree {
                let s = alg.scalar(&fld.basis_element(k));
                for t in &trial {
                    gens.push(alg.mul(&s, t));
                }
            }
            let Some(span) = QuatLattice::from_elements(alg, &gens) else {
                continue;
            };
            if span != cur && span.contains_lattice(&cur) {
                cur = span;
                local.push(g);
            }
        }
        if local.len() != 4 || cur != *order {
            return Err(Error::BadPrime("no local basis found".into()));
        }
        let comps: Vec<[FieldElement; 4]> = local.iter().map(|x| alg.components(x)).collect();
        let c = Matrix::from_fn(4, 4, |i, j| comps[j][i].clone());
        let to_local = inverse(fld, &c).ok_or_else(|| Error::BadPrime("local basis is singular".into()))?;
        let mut split = ResidueSplitting {
            prime: prime.clone(),
            local_basis: local,
            to_local,
            images: Vec::new(),
            from_matrix: Matrix::from_fn(0, 0, |_, _| Vec::new()),
        };
        // structure constants of O / pO in the local basis
        let mut table = vec![vec![Vec::new(); 4]; 4];
        for s in 0..4 {
            for t in 0..4 {
                table[s][t] = split.local_coords(alg, &alg.mul(&split.local_basis[s], &split.local_basis[t]))?;
            }
        }
        let mul = |x: &[Fq], y: &[Fq]| -> Vec<Fq> {
            let mut out = vec![k.zero(); 4];
            for s in 0..4 {
                if k.is_zero(&x[s]) {
                    continue;
                }
                for t in 0..4 {
                    if k.is_zero(&y[t]) {
                        continue;
                    }
                    let c = k.mul(&x[s], &y[t]);
                    for (o, v) in out.iter_mut().zip(&table[s][t]) {
                        *o = k.add(o, &k.mul(&c, v));
                    }
                }
            }
            out
        };
        let unit = |l: usize| -> Vec<Fq> { (0..4).map(|m| if m == l { k.one() } else { k.zero() }).collect() };
        let q = k.order();
        let mut z = None;
        for _ in 0..ZERO_DIVISOR_TRIES {
            let cand: Vec<Fq> = (0..4).map(|_| k.element(rng.gen_range(0..q))).collect();
            if cand.iter().all(|c| k.is_zero(c)) {
                continue;
            }
            let lz = Matrix::from_fn(4, 4, |i, j| mul(&cand, &unit(j))[i].clone());
            if k.is_zero(&determinant(k, &lz)) {
                z = Some(cand);
                break;
            }
        }
        let z = z.ok_or_else(|| Error::BadPrime("no zero divisor found; prime may ramify".into()))?;
        // minimal left ideal V = A z with basis v1, v2
        let mut v: Vec<Vec<Fq>> = Vec::new();
        for l in 0..4 {
            let w = mul(&unit(l), &z);
            let mut trial = v.clone();
            trial.push(w.clone());
            let m = Matrix::from_fn(4, trial.len(), |i, j| trial[j][i].clone());
            if rank(k, &m) == trial.len() {
                v = trial;
            }
            if v.len() == 2 {
                break;
            }
        }
        if v.len() != 2 {
            return Err(Error::BadPrime("minimal left ideal has wrong dimension".into()));
        }
        let vm = Matrix::from_fn(4, 2, |i, j| v[j][i].clone());
        let mut images = Vec::with_capacity(4);
        for l in 0..4 {
            let mut cols = Vec::new();
            for vj in &v {
                let w = mul(&unit(l), vj);
                cols.push(solve(k, &vm, &w).ok_or_else(|| Error::BadPrime("left ideal not stable".into()))?);
            }
            images.push([[cols[0][0].clone(), cols[1][0].clone()], [cols[0][1].clone(), cols[1][1].clone()]]);
        }
        let flat = Matrix::from_fn(4, 4, |r, l| images[l][r / 2][r % 2].clone());
        split.from_matrix = inverse(k, &flat).ok_or_else(|| Error::BadPrime("splitting is not surjective".into()))?;
        split.images = images;
        Ok(split)
    }

    pub fn residue_field(&self) -> &FiniteField {
        &self.prime.residue_field
    }

    /// Coordinates modulo `p` in the local basis of a `p`-integral element.
    fn local_coords(&self, alg: &QuatAlgebra, x: &QuatElement) -> Result<Vec<Fq>> {
        let fld = &alg.field;
        let comps = alg.components(x);
        let c = mat_vec(fld, &self.to_local, &comps);
        c.iter().map(|y| self.prime.reduce(fld, y)).collect()
    }

    /// Image in `M_2(F_q)` of an element integral at `p`.
    pub fn image(&self, alg: &QuatAlgebra, x: &QuatElement) -> Result<Mat2> {
        let k = self.residue_field();
        let c = self.local_coords(alg, x)?;
        let mut m: Mat2 = [[k.zero(), k.zero()], [k.zero(), k.zero()]];
        for (cl, img) in c.iter().zip(&self.images) {
            if k.is_zero(cl) {
                continue;
            }
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] = k.add(&m[i][j], &k.mul(cl, &img[i][j]));
                }
            }
        }
        Ok(m)
    }

    /// An element of the order mapping to `m`.
    pub fn preimage(&self, alg: &QuatAlgebra, m: &Mat2) -> QuatElement {
        let k = self.residue_field();
        let flat = vec![m[0][0].clone(), m[0][1].clone(), m[1][0].clone(), m[1][1].clone()];
        let c = mat_vec(k, &self.from_matrix, &flat);
        let mut x = alg.zero();
        for (cl, b) in c.iter().zip(&self.local_basis) {
            if k.is_zero(cl) {
                continue;
            }
            x = alg.add(&x, &alg.mul(&alg.scalar(&self.prime.lift(cl)), b));
        }
        x
    }

    pub fn matrix_unit(&self, i: usize, j: usize, t: &Fq) -> Mat2 {
        let k = self.residue_field();
        let mut m: Mat2 = [[k.zero(), k.zero()], [k.zero(), k.zero()]];
        m[i][j] = t.clone();
        m
    }
}

/// Elements of `F_q` forming an `F_p`-basis.
fn fp_basis(k: &FiniteField) -> Vec<Fq> {
    (0..k.degree()).map(|i| (0..k.degree()).map(|j| u64::from(i == j)).collect()).collect()
}

/// The Eichler order of squarefree level `∏ p` inside `order`: elements whose
/// image at every `p` is upper triangular.
pub fn eichler_order(alg: &QuatAlgebra, order: &QuatLattice, splittings: &[ResidueSplitting]) -> QuatLattice {
    let mut out = order.clone();
    for s in splittings {
        let mut gens = order.scale_ideal(alg, &s.prime.ideal).basis();
        for t in fp_basis(s.residue_field()) {
            for (i, j) in [(0, 0), (0, 1), (1, 1)] {
                gens.push(s.preimage(alg, &s.matrix_unit(i, j, &t)));
            }
        }
        let local = QuatLattice::from_elements(alg, &gens).unwrap();
        out = out.intersect(&local);
    }
    out
}

/// An integral right `order`-ideal of reduced norm `b`; `b` must be coprime to
/// the discriminant.
pub fn right_ideal_with_norm(alg: &QuatAlgebra, order: &QuatLattice, b: &FracIdeal) -> Result<QuatLattice> {
    let fld = &alg.field;
    if b.is_unit() {
        return Ok(order.clone());
    }
    let factors = factor_ideal(fld, b)?;
    let mut x = alg.zero();
    for (idx, (p, e)) in factors.iter().enumerate() {
        let s = ResidueSplitting::new(alg, order, p)?;
        let k = s.residue_field();
        let base = s.preimage(alg, &s.matrix_unit(0, 0, &k.one()));
        let mut xp = alg.one();
        for _ in 0..*e {
            xp = alg.mul(&xp, &base);
        }
        let mut others = FracIdeal::unit(fld);
        for (jdx, (q, f)) in factors.iter().enumerate() {
            if jdx != idx {
                others = others.mul(fld, &q.power(fld, *f as u32));
            }
        }
        let eps = others
            .idempotent(fld, &p.power(fld, *e as u32))
            .ok_or_else(|| Error::NonInvertible("coprime idempotent".into()))?;
        x = alg.add(&x, &alg.mul(&alg.scalar(&eps), &xp));
    }
    let ideal = order.left_mul(alg, &x).sum(&order.scale_ideal(alg, b));
    if ideal.nrd(alg) != *b {
        return Err(Error::OrderMismatch("constructed ideal has the wrong norm".into()));
    }
    Ok(ideal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::factor_rational_prime;
    use crate::quat::lattice::maximal_order;
    use crate::quat::tests::cubic_algebra;

    #[test]
    fn residue_splitting_is_a_homomorphism() {
        let alg = cubic_algebra();
        let o = maximal_order(&alg, None).unwrap();
        for p in [3u64, 7] {
            for pr in factor_rational_prime(&alg.field, p).unwrap() {
                let s = ResidueSplitting::new(&alg, &o, &pr).unwrap();
                let k = s.residue_field();
                let b = o.basis();
                for x in &b {
                    for y in &b[..4] {
                        let lhs = s.image(&alg, &alg.mul(x, y)).unwrap();
                        let rhs = mat2_mul(k, &s.image(&alg, x).unwrap(), &s.image(&alg, y).unwrap());
                        assert_eq!(lhs, rhs);
                    }
                    let d = mat2_det(k, &s.image(&alg, x).unwrap());
                    assert_eq!(d, pr.reduce(&alg.field, &alg.nrd(x)).unwrap());
                }
                let m = s.matrix_unit(0, 1, &k.one());
                assert_eq!(s.image(&alg, &s.preimage(&alg, &m)).unwrap(), m);
            }
        }
    }

    #[test]
    fn eichler_and_norm_ideals() {
        let alg = cubic_algebra();
        let o = maximal_order(&alg, None).unwrap();
        let p3 = factor_rational_prime(&alg.field, 3).unwrap();
        let s = ResidueSplitting::new(&alg, &o, &p3[0]).unwrap();
        let e = eichler_order(&alg, &o, &[s]);
        assert!(e.is_order(&alg));
        assert_eq!(e.discriminant_norm(&alg).unwrap(), num_bigint::BigInt::from(3));
        let b = alg.field.parse_element("w^2-2w-6", "w").unwrap();
        let bi = FracIdeal::principal(&alg.field, &b);
        let j = right_ideal_with_norm(&alg, &o, &bi).unwrap();
        assert_eq!(j.right_order(&alg), o);
        assert_eq!(j.nrd(&alg), bi);
        let b9 = p3[0].power(&alg.field, 2).mul(&alg.field, &p3[1].ideal);
        let j9 = right_ideal_with_norm(&alg, &o, &b9).unwrap();
        assert_eq!(j9.nrd(&alg), b9);
        let l = j9.left_order(&alg);
        assert!(l.is_order(&alg));
        assert_eq!(l.discriminant_norm(&alg).unwrap(), num_bigint::BigInt::from(1));
    }
}
