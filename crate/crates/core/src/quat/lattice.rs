//! Orders and ideals of a quaternion algebra as full-rank Z-lattices in `B`.

use super::{QuatAlgebra, QuatElement};
use crate::arith::lattice::Lattice;
use crate::arith::matrix::{determinant, Matrix};
use crate::arith::ring::{Field, Int, Rat, Rationals};
use crate::error::{Error, Result};
use crate::field::ideal::rational_coordinates;
use crate::field::{FieldElement, FracIdeal, PrimeIdeal};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuatLattice {
    pub lattice: Lattice,
}

const CLOSURE_ROUNDS: usize = 64;

impl QuatLattice {
    /// Z-span of the given elements.
    pub fn from_elements(alg: &QuatAlgebra, gens: &[QuatElement]) -> Option<QuatLattice> {
        let rows: Vec<Vec<Rat>> = gens.iter().map(|g| g.to_rats()).collect();
        Lattice::from_generators(alg.dim(), &rows).map(|lattice| QuatLattice { lattice })
    }

    /// `Z_F`-span of the given elements.
    pub fn zf_span(alg: &QuatAlgebra, gens: &[QuatElement]) -> Option<QuatLattice> {
        let mut all = Vec::with_capacity(gens.len() * alg.n());
        for k in 0..alg.n() {
            let s = alg.scalar(&alg.field.basis_element(k));
            for g in gens {
                all.push(alg.mul(&s, g));
            }
        }
        QuatLattice::from_elements(alg, &all)
    }

    /// The order `Z_F<i, j>`.
    pub fn standard_order(alg: &QuatAlgebra) -> QuatLattice {
        let gens: Vec<QuatElement> = (0..4).map(|l| alg.unit_vector(l)).collect();
        QuatLattice::zf_span(alg, &gens).unwrap()
    }

    pub fn basis(&self) -> Vec<QuatElement> {
        self.lattice.basis_rat().iter().map(|r| QuatElement::from_rats(r)).collect()
    }

    pub fn contains(&self, x: &QuatElement) -> bool {
        self.lattice.contains(&x.to_rats())
    }

    pub fn contains_lattice(&self, other: &QuatLattice) -> bool {
        self.lattice.contains_lattice(&other.lattice)
    }

    pub fn sum(&self, other: &QuatLattice) -> QuatLattice {
        QuatLattice { lattice: self.lattice.sum(&other.lattice) }
    }

    pub fn intersect(&self, other: &QuatLattice) -> QuatLattice {
        QuatLattice { lattice: self.lattice.intersection(&other.lattice) }
    }

    /// Index `[self : sub]` as a rational number.
    pub fn index_of(&self, sub: &QuatLattice) -> Rat {
        self.lattice.index_of(&sub.lattice)
    }

    pub fn mul(&self, alg: &QuatAlgebra, other: &QuatLattice) -> QuatLattice {
        let a = self.basis();
        let b = other.basis();
        let mut prods = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                prods.push(alg.mul(x, y));
            }
        }
        QuatLattice::from_elements(alg, &prods).expect("product of full-rank lattices")
    }

    pub fn left_mul(&self, alg: &QuatAlgebra, x: &QuatElement) -> QuatLattice {
        let b: Vec<QuatElement> = self.basis().iter().map(|y| alg.mul(x, y)).collect();
        QuatLattice::from_elements(alg, &b).expect("multiplication by a zero divisor")
    }

    pub fn right_mul(&self, alg: &QuatAlgebra, x: &QuatElement) -> QuatLattice {
        let b: Vec<QuatElement> = self.basis().iter().map(|y| alg.mul(y, x)).collect();
        QuatLattice::from_elements(alg, &b).expect("multiplication by a zero divisor")
    }

    /// Product with a fractional ideal of `F`.
    pub fn scale_ideal(&self, alg: &QuatAlgebra, a: &FracIdeal) -> QuatLattice {
        let mut gens = Vec::new();
        for c in a.basis() {
            let s = alg.scalar(&c);
            for y in self.basis() {
                gens.push(alg.mul(&s, &y));
            }
        }
        QuatLattice::from_elements(alg, &gens).unwrap()
    }

    pub fn conj(&self, alg: &QuatAlgebra) -> QuatLattice {
        let b: Vec<QuatElement> = self.basis().iter().map(|y| alg.conj(y)).collect();
        QuatLattice::from_elements(alg, &b).unwrap()
    }

    /// Reduced norm: the `Z_F`-ideal generated by all `nrd(x)`.
    pub fn nrd(&self, alg: &QuatAlgebra) -> FracIdeal {
        let b = self.basis();
        let mut gens = Vec::new();
        for (s, x) in b.iter().enumerate() {
            gens.push(alg.nrd(x));
            for y in &b[s + 1..] {
                gens.push(alg.trd_pair(x, y));
            }
        }
        let nonzero: Vec<FieldElement> = gens.into_iter().filter(|g| !alg.field.is_zero(g)).collect();
        FracIdeal::from_generators(&alg.field, &nonzero).expect("nonzero reduced norms")
    }

    /// `conj(I) * nrd(I)^-1`, the inverse of a locally principal ideal.
    pub fn inverse(&self, alg: &QuatAlgebra) -> QuatLattice {
        let n = self.nrd(alg).inverse(&alg.field);
        self.conj(alg).scale_ideal(alg, &n)
    }

    fn stabilizer(&self, alg: &QuatAlgebra, left: bool) -> QuatLattice {
        let d = alg.dim();
        let gens = self.basis();
        let mut rows = vec![vec![Rat::zero(); d]; gens.len() * d];
        for s in 0..d {
            let mut e = vec![Int::zero(); d];
            e[s] = Int::one();
            let es = QuatElement::new(e, Int::one());
            for (t, g) in gens.iter().enumerate() {
                let p = if left { alg.mul(&es, g) } else { alg.mul(g, &es) };
                let c = rational_coordinates(&self.lattice, &p.to_rats());
                for (r, v) in c.into_iter().enumerate() {
                    rows[t * d + r][s] = v;
                }
            }
        }
        QuatLattice { lattice: Lattice::preimage_of_integers(d, &rows).expect("full rank") }
    }

    /// `{x : x I ⊆ I}`.
    pub fn left_order(&self, alg: &QuatAlgebra) -> QuatLattice {
        self.stabilizer(alg, true)
    }

    /// `{x : I x ⊆ I}`.
    pub fn right_order(&self, alg: &QuatAlgebra) -> QuatLattice {
        self.stabilizer(alg, false)
    }

    /// `|det(Tr trd(x_s x_t))|`, equal to `d_F^4 N(disc)^2` for an order.
    pub fn z_discriminant(&self, alg: &QuatAlgebra) -> Rat {
        let b = self.basis();
        let m = Matrix::from_fn(b.len(), b.len(), |s, t| alg.field.trace(&alg.trd(&alg.mul(&b[s], &b[t]))));
        determinant(&Rationals, &m).abs()
    }

    /// Absolute norm of the reduced discriminant of an order.
    pub fn discriminant_norm(&self, alg: &QuatAlgebra) -> Result<Int> {
        let dz = self.z_discriminant(alg);
        let df = Rat::from_integer(alg.field.disc.clone().abs());
        let q = dz / df.pow(4);
        if !q.is_integer() {
            return Err(Error::OrderMismatch("lattice discriminant is not integral".into()));
        }
        let q = q.to_integer();
        let r = q.sqrt();
        if &r * &r != q {
            return Err(Error::OrderMismatch("lattice discriminant is not a square".into()));
        }
        Ok(r)
    }

    pub fn is_order(&self, alg: &QuatAlgebra) -> bool {
        self.contains(&alg.one()) && self.mul(alg, self) == *self
    }
}

/// True if `trd(x)` and `nrd(x)` lie in `Z_F`.
pub fn is_integral(alg: &QuatAlgebra, x: &QuatElement) -> bool {
    alg.trd(x).is_integral() && alg.nrd(x).is_integral()
}

/// The smallest ring containing `base` (a `Z_F`-lattice containing 1) and
/// `extra`, or `None` if it contains non-integral elements.
pub fn ring_closure(alg: &QuatAlgebra, base: &QuatLattice, extra: &[QuatElement]) -> Option<QuatLattice> {
    let mut gens = base.basis();
    gens.extend(extra.iter().cloned());
    gens.push(alg.one());
    let mut cur = QuatLattice::zf_span(alg, &gens)?;
    for _ in 0..CLOSURE_ROUNDS {
        if !cur.basis().iter().all(|x| is_integral(alg, x)) {
            return None;
        }
        let next = cur.sum(&cur.mul(alg, &cur));
        if next == cur {
            return Some(cur);
        }
        cur = next;
    }
    None
}

/// Enlarges `order` at `p` until it is maximal there.
pub fn saturate_at(alg: &QuatAlgebra, mut order: QuatLattice, p: &PrimeIdeal) -> Result<QuatLattice> {
    let pinv = p.ideal.inverse(&alg.field);
    'outer: loop {
        let big = order.scale_ideal(alg, &pinv);
        let reps = big
            .lattice
            .coset_representatives(&order.lattice, 1 << 22)
            .ok_or_else(|| Error::Unsupported(format!("residue space at the prime of norm {} is too large", p.norm())))?;
        for r in reps {
            let x = QuatElement::from_rats(&r);
            if x.is_zero() || !is_integral(alg, &x) {
                continue;
            }
            if let Some(o) = ring_closure(alg, &order, &[x]) {
                order = o;
                continue 'outer;
            }
        }
        return Ok(order);
    }
}

/// A maximal order containing `start` (default: `Z_F<i, j>`).
pub fn maximal_order(alg: &QuatAlgebra, start: Option<&QuatLattice>) -> Result<QuatLattice> {
    let fld = &alg.field;
    let mut order = match start {
        Some(o) => o.clone(),
        None => QuatLattice::standard_order(alg),
    };
    if !order.is_order(alg) || !order.basis().iter().all(|x| is_integral(alg, x)) {
        return Err(Error::OrderMismatch("starting lattice is not an order".into()));
    }
    let target = alg.discriminant()?.norm().to_integer();
    let mut primes: Vec<PrimeIdeal> = Vec::new();
    let two_ab = fld.mul(&fld.from_i64(2), &fld.mul(&alg.a, &alg.b));
    for (p, _) in crate::field::primes::factor_ideal(fld, &FracIdeal::principal(fld, &two_ab))? {
        primes.push(p);
    }
    for p in &primes {
        if order.discriminant_norm(alg)? == target {
            break;
        }
        order = saturate_at(alg, order, p)?;
    }
    let got = order.discriminant_norm(alg)?;
    if got != target {
        return Err(Error::OrderMismatch(format!("maximal order discriminant norm {} differs from {}", got, target)));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::NumberField;
    use crate::quat::tests::cubic_algebra;

    #[test]
    fn rational_discriminants() {
        let f = NumberField::new(&[-2, 1]).unwrap();
        let alg = QuatAlgebra::new(f.clone(), f.from_i64(-1), f.from_i64(3)).unwrap();
        let o = QuatLattice::standard_order(&alg);
        assert_eq!(o.discriminant_norm(&alg).unwrap(), Int::from(12));
        let m = maximal_order(&alg, None).unwrap();
        assert_eq!(m.discriminant_norm(&alg).unwrap(), Int::from(6));
        assert!(m.contains_lattice(&o));
    }

    #[test]
    fn cubic_maximal_order() {
        let alg = cubic_algebra();
        assert!(alg.ramified_primes().unwrap().is_empty());
        let o = maximal_order(&alg, None).unwrap();
        assert_eq!(o.discriminant_norm(&alg).unwrap(), Int::one());
        assert!(o.is_order(&alg));
        let k = alg.parse_element("1/2+(w^2+1)/2*i+1/2*ij", "w").unwrap();
        let given = QuatLattice::zf_span(&alg, &[alg.one(), alg.unit_vector(1), k.clone(), alg.mul(&alg.unit_vector(1), &k)]).unwrap();
        assert!(given.is_order(&alg));
        assert_eq!(given.discriminant_norm(&alg).unwrap(), Int::one());
        // left and right orders of an order are itself
        assert_eq!(o.left_order(&alg), o);
        assert_eq!(o.right_order(&alg), o);
        assert_eq!(o.nrd(&alg), FracIdeal::unit(&alg.field));
    }
}
