//! The projective line `P^1(Z_F / N)` for squarefree `N`, as a product of
//! `P^1(F_q)` over the primes dividing `N`, with a right action of 2x2
//! matrices on row vectors.

use crate::arith::fp::FiniteField;
use crate::arith::ring::Field;

pub type Fq = Vec<u64>;
pub type Mat2 = [[Fq; 2]; 2];

pub fn mat2_mul(k: &FiniteField, a: &Mat2, b: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| k.add(&k.mul(&a[i][0], &b[0][j]), &k.mul(&a[i][1], &b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat2_det(k: &FiniteField, a: &Mat2) -> Fq {
    k.sub(&k.mul(&a[0][0], &a[1][1]), &k.mul(&a[0][1], &a[1][0]))
}

pub fn mat2_identity(k: &FiniteField) -> Mat2 {
    [[k.one(), k.zero()], [k.zero(), k.one()]]
}

/// Local index: `0` is `(0:1)`, `1 + t` is `(1:t)`.
pub fn local_index(k: &FiniteField, x: &Fq, y: &Fq) -> usize {
    if k.is_zero(x) {
        assert!(!k.is_zero(y), "(0:0) is not a point");
        0
    } else {
        let t = k.mul(y, &k.inv(x));
        1 + k.index_of(&t) as usize
    }
}

pub fn local_point(k: &FiniteField, idx: usize) -> (Fq, Fq) {
    if idx == 0 {
        (k.zero(), k.one())
    } else {
        (k.one(), k.element(idx as u64 - 1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P1 {
    pub fields: Vec<FiniteField>,
    sizes: Vec<usize>,
}

impl P1 {
    pub fn new(fields: Vec<FiniteField>) -> P1 {
        let sizes = fields.iter().map(|k| k.order() as usize + 1).collect();
        P1 { fields, sizes }
    }

    pub fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn components(&self, mut idx: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.sizes.len());
        for s in &self.sizes {
            out.push(idx % s);
            idx /= s;
        }
        out
    }

    pub fn index(&self, comps: &[usize]) -> usize {
        comps.iter().zip(&self.sizes).rev().fold(0, |acc, (c, s)| acc * s + c)
    }

    /// The point `(0:1)` everywhere, fixed by upper triangular matrices.
    pub fn base_point(&self) -> usize {
        0
    }

    /// `idx · m`, with one matrix per prime.
    pub fn act(&self, idx: usize, mats: &[Mat2]) -> usize {
        let comps = self.components(idx);
        let out: Vec<usize> = comps
            .iter()
            .zip(&self.fields)
            .zip(mats)
            .map(|((&c, k), m)| {
                let (x, y) = local_point(k, c);
                let nx = k.add(&k.mul(&x, &m[0][0]), &k.mul(&y, &m[1][0]));
                let ny = k.add(&k.mul(&x, &m[0][1]), &k.mul(&y, &m[1][1]));
                local_index(k, &nx, &ny)
            })
            .collect();
        self.index(&out)
    }

    pub fn label(&self, idx: usize) -> String {
        let parts: Vec<String> = self
            .components(idx)
            .iter()
            .zip(&self.fields)
            .map(|(&c, k)| {
                let (x, y) = local_point(k, c);
                format!("[{}:{}]", k.index_of(&x), k.index_of(&y))
            })
            .collect();
        if parts.is_empty() {
            "[]".into()
        } else {
            parts.join("x")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_action() {
        let p = P1::new(vec![FiniteField::prime(5), FiniteField::new(2, vec![1, 1, 1])]);
        assert_eq!(p.len(), 30);
        for i in 0..p.len() {
            assert_eq!(p.index(&p.components(i)), i);
        }
        let k5 = &p.fields[0];
        let k4 = &p.fields[1];
        let g5: Mat2 = [[k5.from_i64(2), k5.from_i64(1)], [k5.from_i64(3), k5.from_i64(3)]];
        let g4: Mat2 = [[k4.one(), vec![0, 1]], [k4.zero(), k4.one()]];
        // the action is a permutation and respects products
        let mut seen = vec![false; p.len()];
        for i in 0..p.len() {
            let j = p.act(i, &[g5.clone(), g4.clone()]);
            assert!(!seen[j]);
            seen[j] = true;
            let twice = p.act(j, &[g5.clone(), g4.clone()]);
            let prod = [mat2_mul(k5, &g5, &g5), mat2_mul(k4, &g4, &g4)];
            assert_eq!(twice, p.act(i, &prod));
        }
        let upper: Mat2 = [[k5.from_i64(2), k5.from_i64(1)], [k5.zero(), k5.from_i64(3)]];
        let id4 = mat2_identity(k4);
        assert_eq!(p.act(p.base_point(), &[upper, id4]), p.base_point());
        assert_eq!(p.label(0), "[0:1]x[0:1]");
    }
}
