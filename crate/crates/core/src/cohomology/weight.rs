//! Coefficient fields and the weight modules `V_k(K)`.

use crate::arith::matrix::{identity, Matrix};
use crate::arith::ring::{Field, Rat};
use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::quat::{QuatAlgebra, QuatElement};
use num_traits::{One, Zero};

/// The field `K` of coefficients: `Q` in parallel weight 2, otherwise
/// `F(√a)`, which splits `B`. Elements are coordinate vectors over `Q`; in
/// the quadratic case `x + y√a` is stored as the coordinates of `x` followed
/// by those of `y`.
#[derive(Clone, Debug)]
pub enum CoeffField {
    Rational,
    Quadratic { base: NumberField, d: FieldElement },
}

impl CoeffField {
    pub fn degree(&self) -> usize {
        match self {
            CoeffField::Rational => 1,
            CoeffField::Quadratic { base, .. } => 2 * base.degree,
        }
    }

    fn split(&self, a: &[Rat]) -> (FieldElement, FieldElement) {
        let n = a.len() / 2;
        (FieldElement(a[..n].to_vec()), FieldElement(a[n..].to_vec()))
    }

    fn join(x: FieldElement, y: FieldElement) -> Vec<Rat> {
        let mut v = x.0;
        v.extend(y.0);
        v
    }

    /// Image of an element of `F`; `None` over `Q` when it is irrational.
    pub fn from_base(&self, x: &FieldElement, fld: &NumberField) -> Option<Vec<Rat>> {
        match self {
            CoeffField::Rational => {
                let c = fld.to_power_coords(x);
                if c.iter().skip(1).all(|r| r.is_zero()) {
                    Some(vec![c.first().cloned().unwrap_or_else(Rat::zero)])
                } else {
                    None
                }
            }
            CoeffField::Quadratic { base, .. } => Some(Self::join(x.clone(), base.zero())),
        }
    }

    /// `√a` in the quadratic case.
    pub fn sqrt_d(&self) -> Option<Vec<Rat>> {
        match self {
            CoeffField::Rational => None,
            CoeffField::Quadratic { base, .. } => Some(Self::join(base.zero(), base.one())),
        }
    }

    /// Matrix over `Q` of multiplication by `a` on the coordinate space.
    pub fn mult_matrix(&self, a: &[Rat]) -> Matrix<Rat> {
        let m = self.degree();
        let mut cols = Vec::with_capacity(m);
        for k in 0..m {
            let mut e = vec![Rat::zero(); m];
            e[k] = Rat::one();
            cols.push(self.mul(&a.to_vec(), &e));
        }
        Matrix::from_fn(m, m, |i, j| cols[j][i].clone())
    }

    pub fn is_rational(&self, a: &[Rat]) -> bool {
        match self {
            CoeffField::Rational => true,
            CoeffField::Quadratic { base, .. } => {
                let (x, y) = self.split(a);
                y.0.iter().all(|c| c.is_zero()) && base.to_power_coords(&x).iter().skip(1).all(|c| c.is_zero())
            }
        }
    }

    pub fn to_rational(&self, a: &[Rat]) -> Option<Rat> {
        if !self.is_rational(a) {
            return None;
        }
        match self {
            CoeffField::Rational => Some(a[0].clone()),
            CoeffField::Quadratic { base, .. } => {
                let (x, _) = self.split(a);
                Some(base.to_power_coords(&x).first().cloned().unwrap_or_else(Rat::zero))
            }
        }
    }

    pub fn format(&self, a: &[Rat]) -> String {
        match self {
            CoeffField::Rational => a[0].to_string(),
            CoeffField::Quadratic { base, .. } => {
                let (x, y) = self.split(a);
                format!("({}) + ({})*s", base.format_element(&x, "w"), base.format_element(&y, "w"))
            }
        }
    }
}

impl Field for CoeffField {
    type El = Vec<Rat>;

    fn zero(&self) -> Vec<Rat> {
        vec![Rat::zero(); self.degree()]
    }
    fn one(&self) -> Vec<Rat> {
        let mut v = self.zero();
        match self {
            CoeffField::Rational => v[0] = Rat::one(),
            CoeffField::Quadratic { base, .. } => {
                let one = base.one();
                v[..base.degree].clone_from_slice(&one.0);
            }
        }
        v
    }
    fn is_zero(&self, a: &Vec<Rat>) -> bool {
        a.iter().all(|c| c.is_zero())
    }
    fn add(&self, a: &Vec<Rat>, b: &Vec<Rat>) -> Vec<Rat> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }
    fn sub(&self, a: &Vec<Rat>, b: &Vec<Rat>) -> Vec<Rat> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
    fn mul(&self, a: &Vec<Rat>, b: &Vec<Rat>) -> Vec<Rat> {
        match self {
            CoeffField::Rational => vec![&a[0] * &b[0]],
            CoeffField::Quadratic { base, d } => {
                if self.is_zero(a) || self.is_zero(b) {
                    return self.zero();
                }
                let (x1, y1) = self.split(a);
                let (x2, y2) = self.split(b);
                let x = base.add(&base.mul(&x1, &x2), &base.mul(d, &base.mul(&y1, &y2)));
                let y = base.add(&base.mul(&x1, &y2), &base.mul(&x2, &y1));
                Self::join(x, y)
            }
        }
    }
    fn neg(&self, a: &Vec<Rat>) -> Vec<Rat> {
        a.iter().map(|x| -x).collect()
    }
    fn inv(&self, a: &Vec<Rat>) -> Vec<Rat> {
        match self {
            CoeffField::Rational => vec![a[0].recip()],
            CoeffField::Quadratic { base, d } => {
                let (x, y) = self.split(a);
                let n = base.sub(&base.mul(&x, &x), &base.mul(d, &base.mul(&y, &y)));
                let ni = base.inv(&n);
                Self::join(base.mul(&x, &ni), base.neg(&base.mul(&y, &ni)))
            }
        }
    }
    fn from_i64(&self, n: i64) -> Vec<Rat> {
        let one = self.one();
        one.iter().map(|c| c * Rat::from_integer(n.into())).collect()
    }
}

/// `V_k(K)`: homogeneous polynomials of degree `w = k_i - 2` in the one
/// variable pair with nontrivial weight.
#[derive(Clone, Debug)]
pub struct WeightModule {
    pub weights: Vec<u32>,
    /// The place carrying nontrivial weight, if any.
    pub place: Option<usize>,
    pub w: u32,
    pub field: CoeffField,
}

impl WeightModule {
    pub fn new(alg: &QuatAlgebra, weights: &[u32]) -> Result<WeightModule> {
        let n = alg.field.degree;
        if weights.len() != n {
            return Err(Error::Config(format!("weight has {} entries, field has degree {n}", weights.len())));
        }
        if weights.iter().any(|&k| k == 0 || k % 2 == 1) {
            return Err(Error::Config("weights must be even and positive".into()));
        }
        let nontrivial: Vec<usize> = (0..n).filter(|&i| weights[i] > 2).collect();
        if nontrivial.len() > 1 {
            return Err(Error::Unsupported("nontrivial weight at more than one place".into()));
        }
        let place = nontrivial.first().copied();
        let (w, field) = match place {
            None => (0, CoeffField::Rational),
            Some(i) => (weights[i] - 2, CoeffField::Quadratic { base: alg.field.clone(), d: alg.a.clone() }),
        };
        Ok(WeightModule { weights: weights.to_vec(), place, w, field })
    }

    pub fn dim(&self) -> usize {
        self.w as usize + 1
    }

    /// `B -> M_2(K)`: `i ↦ diag(s, -s)`, `j ↦ [[0, 1], [b, 0]]` with `s² = a`.
    pub fn embed(&self, alg: &QuatAlgebra, x: &QuatElement) -> [[Vec<Rat>; 2]; 2] {
        let k = &self.field;
        let fld = &alg.field;
        let c = alg.components(x);
        let s = k.sqrt_d().expect("embedding needs a splitting field");
        let e = |y: &FieldElement| k.from_base(y, fld).unwrap();
        let (x0, x1, x2, x3) = (e(&c[0]), e(&c[1]), e(&c[2]), e(&c[3]));
        let b = e(&alg.b);
        let x1s = k.mul(&x1, &s);
        let x3s = k.mul(&x3, &s);
        [[k.add(&x0, &x1s), k.add(&x2, &x3s)], [k.mul(&b, &k.sub(&x2, &x3s)), k.sub(&x0, &x1s)]]
    }

    /// Matrix `W(γ)` with `q^γ = q W(γ)` on coefficient row vectors in the
    /// basis `x^m y^(w-m)`, `m = 0..=w`.
    pub fn action(&self, alg: &QuatAlgebra, g: &QuatElement) -> Matrix<Vec<Rat>> {
        let k = &self.field;
        if self.w == 0 {
            return identity(k, 1);
        }
        let w = self.w as usize;
        let m = self.embed(alg, g);
        let (a, b, c, d) = (&m[0][0], &m[0][1], &m[1][0], &m[1][1]);
        // (x, y) γ̄ = (d x - c y, -b x + a y), as polynomials indexed by the x-degree
        let l1 = vec![k.neg(c), d.clone()];
        let l2 = vec![a.clone(), k.neg(b)];
        let pmul = |p: &[Vec<Rat>], q: &[Vec<Rat>]| {
            let mut out = vec![k.zero(); p.len() + q.len() - 1];
            for (i, x) in p.iter().enumerate() {
                for (j, y) in q.iter().enumerate() {
                    out[i + j] = k.add(&out[i + j], &k.mul(x, y));
                }
            }
            out
        };
        let mut pow1 = vec![vec![k.one()]];
        let mut pow2 = vec![vec![k.one()]];
        for t in 0..w {
            pow1.push(pmul(&pow1[t], &l1));
            pow2.push(pmul(&pow2[t], &l2));
        }
        let nrd = alg.nrd(g);
        let mut scale = k.from_base(&nrd, &alg.field).unwrap();
        scale = k.pow(&k.inv(&scale), (w / 2) as u64);
        Matrix::from_fn(w + 1, w + 1, |i, j| {
            let p = pmul(&pow1[i], &pow2[w - i]);
            k.mul(&scale, &p[j])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::matrix::mat_mul;
    use crate::quat::tests::cubic_algebra;
    use proptest::prelude::*;

    fn random_element(alg: &QuatAlgebra, c: &[i64]) -> QuatElement {
        let n = alg.field.degree;
        let rats: Vec<Rat> = c.iter().take(4 * n).map(|&v| Rat::from_integer(v.into())).collect();
        QuatElement::from_rats(&rats)
    }

    #[test]
    fn parallel_weight_two_is_trivial() {
        let alg = cubic_algebra();
        let v = WeightModule::new(&alg, &[2, 2, 2]).unwrap();
        assert_eq!(v.dim(), 1);
        let g = alg.unit_vector(1);
        assert_eq!(v.action(&alg, &g), identity(&v.field, 1));
    }

    #[test]
    fn embedding_is_multiplicative_with_determinant_nrd() {
        let alg = cubic_algebra();
        let v = WeightModule::new(&alg, &[4, 2, 2]).unwrap();
        let k = &v.field;
        let x = random_element(&alg, &[1, 2, 0, -1, 3, 0, 1, 1, 0, 2, -1, 0]);
        let y = random_element(&alg, &[0, 1, 1, 2, 0, -3, 1, 0, 1, 0, 0, 1]);
        let mx = v.embed(&alg, &x);
        let my = v.embed(&alg, &y);
        let mxy = v.embed(&alg, &alg.mul(&x, &y));
        for i in 0..2 {
            for j in 0..2 {
                let s = k.add(&k.mul(&mx[i][0], &my[0][j]), &k.mul(&mx[i][1], &my[1][j]));
                assert_eq!(s, mxy[i][j]);
            }
        }
        let det = k.sub(&k.mul(&mx[0][0], &mx[1][1]), &k.mul(&mx[0][1], &mx[1][0]));
        assert_eq!(det, k.from_base(&alg.nrd(&x), &alg.field).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn weight_action_is_a_right_action(c in prop::collection::vec(-3i64..=3, 24)) {
            let alg = cubic_algebra();
            let v = WeightModule::new(&alg, &[4, 2, 2]).unwrap();
            let g = random_element(&alg, &c[..12]);
            let h = random_element(&alg, &c[12..]);
            prop_assume!(!alg.nrd(&g).0.iter().all(|x| x.is_zero()));
            prop_assume!(!alg.nrd(&h).0.iter().all(|x| x.is_zero()));
            let lhs = mat_mul(&v.field, &v.action(&alg, &g), &v.action(&alg, &h));
            let rhs = v.action(&alg, &alg.mul(&g, &h));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
