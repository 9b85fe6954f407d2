//! Coinduced modules `K[P¹(Z_F/N)] ⊗ V_k(K)` and exact first cohomology of
//! a finitely presented group, with the cocycle rule `f(gh) = f(g)^h + f(h)`.

pub mod weight;

pub use weight::{CoeffField, WeightModule};

use crate::arith::matrix::{identity, inverse, kernel, mat_mul, rref, Matrix};
use crate::arith::ring::{Field, Rat};
use crate::error::{Error, Result};
use crate::field::p1::{Mat2, P1};
use crate::fuchsian::domain::Word;
use crate::quat::splitting::ResidueSplitting;
use crate::quat::{QuatAlgebra, QuatElement};

pub type El = Vec<Rat>;

/// Right action of one group element: `(e_a ⊗ v)·γ = e_{perm[a]} ⊗ v W`.
#[derive(Clone, Debug, PartialEq)]
pub struct Action {
    pub perm: Vec<usize>,
    pub weight: Matrix<El>,
}

impl Action {
    pub fn identity(k: &CoeffField, labels: usize, wdim: usize) -> Action {
        Action { perm: (0..labels).collect(), weight: identity(k, wdim) }
    }

    /// Action of `self` followed by `other`.
    pub fn then(&self, k: &CoeffField, other: &Action) -> Action {
        Action {
            perm: self.perm.iter().map(|&a| other.perm[a]).collect(),
            weight: mat_mul(k, &self.weight, &other.weight),
        }
    }

    pub fn inverse(&self, k: &CoeffField) -> Action {
        let mut perm = vec![0; self.perm.len()];
        for (a, &b) in self.perm.iter().enumerate() {
            perm[b] = a;
        }
        Action { perm, weight: inverse(k, &self.weight).expect("invertible action") }
    }

    /// `v · R`.
    pub fn apply(&self, k: &CoeffField, v: &[El]) -> Vec<El> {
        let wd = self.weight.rows;
        let mut out = vec![k.zero(); v.len()];
        for (a, &b) in self.perm.iter().enumerate() {
            for m in 0..wd {
                let x = &v[a * wd + m];
                if k.is_zero(x) {
                    continue;
                }
                for t in 0..wd {
                    let y = self.weight.get(m, t);
                    if !k.is_zero(y) {
                        let o = &mut out[b * wd + t];
                        *o = k.add(o, &k.mul(x, y));
                    }
                }
            }
        }
        out
    }

    pub fn to_matrix(&self, k: &CoeffField) -> Matrix<El> {
        let d = self.perm.len() * self.weight.rows;
        let mut rows = Vec::with_capacity(d);
        for i in 0..d {
            let mut e = vec![k.zero(); d];
            e[i] = k.one();
            rows.push(self.apply(k, &e));
        }
        Matrix::from_rows(rows)
    }
}

/// Reductions modulo the primes dividing a squarefree level.
#[derive(Clone, Debug)]
pub struct LevelStructure {
    pub p1: P1,
    pub splittings: Vec<ResidueSplitting>,
}

impl LevelStructure {
    pub fn new(splittings: Vec<ResidueSplitting>) -> LevelStructure {
        let p1 = P1::new(splittings.iter().map(|s| s.residue_field().clone()).collect());
        LevelStructure { p1, splittings }
    }

    pub fn images(&self, alg: &QuatAlgebra, x: &QuatElement) -> Result<Vec<Mat2>> {
        self.splittings.iter().map(|s| s.image(alg, x)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct CoinducedModule {
    pub weight: WeightModule,
    pub level: Option<LevelStructure>,
}

impl CoinducedModule {
    pub fn field(&self) -> &CoeffField {
        &self.weight.field
    }

    pub fn labels(&self) -> usize {
        self.level.as_ref().map_or(1, |l| l.p1.len())
    }

    pub fn dim(&self) -> usize {
        self.labels() * self.weight.dim()
    }

    pub fn label(&self, idx: usize) -> String {
        self.level.as_ref().map_or_else(|| "[0:1]".to_string(), |l| l.p1.label(idx))
    }

    /// Action of an element that is a unit at every prime of the level.
    pub fn action(&self, alg: &QuatAlgebra, x: &QuatElement) -> Result<Action> {
        let perm = match &self.level {
            None => vec![0],
            Some(l) => {
                let mats = l.images(alg, x)?;
                let perm: Vec<usize> = (0..l.p1.len()).map(|a| l.p1.act(a, &mats)).collect();
                let mut seen = vec![false; perm.len()];
                for &b in &perm {
                    if seen[b] {
                        return Err(Error::NonInvertible("element is not a unit at the level".into()));
                    }
                    seen[b] = true;
                }
                perm
            }
        };
        Ok(Action { perm, weight: self.weight.action(alg, x) })
    }
}

/// `Z¹`, `B¹` and a fixed complement basis of `H¹` for a presentation with
/// the given generator actions.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub field: CoeffField,
    pub generators: usize,
    pub module_dim: usize,
    pub actions: Vec<Action>,
    pub inverse_actions: Vec<Action>,
    pub z1_dim: usize,
    pub b1_dim: usize,
    /// Cocycles (values on the generators, concatenated) spanning a complement
    /// of `B¹` in `Z¹`.
    pub basis: Vec<Vec<El>>,
    pivot_columns: Vec<usize>,
    projection: Matrix<El>,
}

impl Cohomology {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `f(w)` for a cocycle given by its generator values.
    pub fn evaluate(&self, f: &[El], w: &[(usize, i32)]) -> Vec<El> {
        let k = &self.field;
        let d = self.module_dim;
        let mut acc = vec![k.zero(); d];
        for &(g, e) in w {
            let val = &f[g * d..(g + 1) * d];
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    acc = self.actions[g].apply(k, &acc);
                    for (a, v) in acc.iter_mut().zip(val) {
                        *a = k.add(a, v);
                    }
                } else {
                    // f(u g^-1) = (f(u) - f(g))^(g^-1)
                    let diff: Vec<El> = acc.iter().zip(val).map(|(a, v)| k.sub(a, v)).collect();
                    acc = self.inverse_actions[g].apply(k, &diff);
                }
            }
        }
        acc
    }

    /// Action of a word on the module.
    pub fn word_action(&self, w: &[(usize, i32)]) -> Action {
        let k = &self.field;
        let mut acc = Action::identity(k, self.actions.first().map_or(1, |a| a.perm.len()), self.actions.first().map_or(1, |a| a.weight.rows));
        for &(g, e) in w {
            let a = if e > 0 { &self.actions[g] } else { &self.inverse_actions[g] };
            for _ in 0..e.unsigned_abs() {
                acc = acc.then(k, a);
            }
        }
        acc
    }

    /// Coordinates in the fixed `H¹` basis of a cocycle.
    pub fn coordinates(&self, f: &[El]) -> Vec<El> {
        let k = &self.field;
        let z = self.pivot_columns.len();
        let mut c = vec![k.zero(); z];
        for (i, &col) in self.pivot_columns.iter().enumerate() {
            let x = &f[col];
            if k.is_zero(x) {
                continue;
            }
            for (j, cj) in c.iter_mut().enumerate() {
                *cj = k.add(cj, &k.mul(x, self.projection.get(i, j)));
            }
        }
        c.truncate(self.basis.len());
        c
    }

    /// The coboundary `g ↦ v^g - v`.
    pub fn coboundary(&self, v: &[El]) -> Vec<El> {
        let k = &self.field;
        let mut out = Vec::with_capacity(self.generators * self.module_dim);
        for a in &self.actions {
            let img = a.apply(k, v);
            out.extend(img.iter().zip(v).map(|(x, y)| k.sub(x, y)));
        }
        out
    }

    pub fn is_cocycle(&self, f: &[El], relations: &[Word]) -> bool {
        let k = &self.field;
        relations.iter().all(|r| self.evaluate(f, r).iter().all(|x| k.is_zero(x)))
    }
}

/// Computes `H¹` from generator actions and relations.
pub fn h1_basis(field: &CoeffField, actions: Vec<Action>, relations: &[Word]) -> Cohomology {
    let k = field;
    let r = actions.len();
    let d = actions.first().map_or(1, |a| a.perm.len() * a.weight.rows);
    let inverse_actions: Vec<Action> = actions.iter().map(|a| a.inverse(k)).collect();
    let act_mats: Vec<Matrix<El>> = actions.iter().map(|a| a.to_matrix(k)).collect();
    let inv_mats: Vec<Matrix<El>> = inverse_actions.iter().map(|a| a.to_matrix(k)).collect();
    let id = identity(k, d);
    // relation map: f ↦ (f(rel))_rel, as an (r d) x (#rel d) matrix acting on row vectors
    let mut rel_cols: Vec<Matrix<El>> = Vec::new();
    for rel in relations {
        let mut blocks: Vec<Option<Matrix<El>>> = vec![None; r];
        for &(g, e) in rel {
            for _ in 0..e.unsigned_abs() {
                let m = if e > 0 { &act_mats[g] } else { &inv_mats[g] };
                for b in blocks.iter_mut().flatten() {
                    *b = mat_mul(k, b, m);
                }
                let add = if e > 0 {
                    id.clone()
                } else {
                    Matrix::from_fn(d, d, |i, j| k.neg(inv_mats[g].get(i, j)))
                };
                blocks[g] = Some(match blocks[g].take() {
                    None => add,
                    Some(b) => Matrix::from_fn(d, d, |i, j| k.add(b.get(i, j), add.get(i, j))),
                });
            }
        }
        let col = Matrix::from_fn(r * d, d, |i, j| {
            let (g, m) = (i / d, i % d);
            blocks[g].as_ref().map_or_else(|| k.zero(), |b| b.get(m, j).clone())
        });
        rel_cols.push(col);
    }
    let total_cols = rel_cols.len() * d;
    let rel = Matrix::from_fn(r * d, total_cols, |i, j| rel_cols[j / d].get(i, j % d).clone());
    let z1 = if total_cols == 0 {
        (0..r * d)
            .map(|i| {
                let mut v = vec![k.zero(); r * d];
                v[i] = k.one();
                v
            })
            .collect()
    } else {
        kernel(k, &rel.transpose())
    };
    let z1_dim = z1.len();
    let mut cob = Vec::new();
    for m in 0..d {
        let mut out = Vec::with_capacity(r * d);
        for a in &actions {
            let mut e = vec![k.zero(); d];
            e[m] = k.one();
            let img = a.apply(k, &e);
            out.extend(img.iter().zip(&e).map(|(x, y)| k.sub(x, y)));
        }
        cob.push(out);
    }
    // independent coboundaries, then extend by cocycles in kernel order
    let mut span: Vec<Vec<El>> = Vec::new();
    let mut rank = 0;
    let mut b1 = Vec::new();
    for c in cob {
        span.push(c.clone());
        let nr = rank_of(k, &span);
        if nr > rank {
            rank = nr;
            b1.push(c);
        } else {
            span.pop();
        }
    }
    let b1_dim = b1.len();
    let mut basis = Vec::new();
    for z in z1 {
        span.push(z.clone());
        let nr = rank_of(k, &span);
        if nr > rank {
            rank = nr;
            basis.push(z);
        } else {
            span.pop();
        }
    }
    let mut all = basis.clone();
    all.extend(b1.iter().cloned());
    let (pivot_columns, projection) = if all.is_empty() {
        (Vec::new(), Matrix::from_rows(Vec::new()))
    } else {
        let m = Matrix::from_rows(all.clone());
        let (_, cols) = rref(k, &m);
        let sub = m.submatrix(&(0..m.rows).collect::<Vec<_>>(), &cols);
        (cols, inverse(k, &sub).expect("independent cocycles"))
    };
    Cohomology {
        field: k.clone(),
        generators: r,
        module_dim: d,
        actions,
        inverse_actions,
        z1_dim,
        b1_dim,
        basis,
        pivot_columns,
        projection,
    }
}

fn rank_of(k: &CoeffField, rows: &[Vec<El>]) -> usize {
    crate::arith::matrix::rank(k, &Matrix::from_rows(rows.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn int_action(k: &CoeffField, perm: Vec<usize>) -> Action {
        Action { perm, weight: identity(k, 1) }
    }

    #[test]
    fn trivial_coefficients_give_twice_the_genus() {
        let k = CoeffField::Rational;
        // genus 2 surface group: [a1,b1][a2,b2]
        let rel = vec![(0, 1), (1, 1), (0, -1), (1, -1), (2, 1), (3, 1), (2, -1), (3, -1)];
        let acts = (0..4).map(|_| int_action(&k, vec![0])).collect();
        let h = h1_basis(&k, acts, &[rel.clone()]);
        assert_eq!(h.dim(), 4);
        assert_eq!(h.b1_dim, 0);
        // (1; 2, 3): generators a, b, c2, c3 with c2^2, c3^3, [a,b] c2 c3
        let acts = (0..4).map(|_| int_action(&k, vec![0])).collect();
        let rels = vec![vec![(2, 2)], vec![(3, 3)], vec![(0, 1), (1, 1), (0, -1), (1, -1), (2, 1), (3, 1)]];
        let h = h1_basis(&k, acts, &rels);
        assert_eq!(h.dim(), 2);
        for b in &h.basis {
            assert!(h.is_cocycle(b, &rels));
            assert!(k.is_zero(&b[2]) && k.is_zero(&b[3]));
        }
    }

    #[test]
    fn permutation_module_cohomology_and_coordinates() {
        let k = CoeffField::Rational;
        // free group on one generator acting by a 3-cycle: H¹ = K^3 / (image of σ - 1), dim 1
        let acts = vec![int_action(&k, vec![1, 2, 0])];
        let h = h1_basis(&k, acts, &[]);
        assert_eq!(h.z1_dim, 3);
        assert_eq!(h.b1_dim, 2);
        assert_eq!(h.dim(), 1);
        let v = vec![vec![Rat::one()], vec![Rat::from_integer(2.into())], vec![Rat::from_integer(5.into())]];
        let cb = h.coboundary(&v);
        assert!(h.coordinates(&cb).iter().all(|c| k.is_zero(c)));
        let c = h.coordinates(&h.basis[0]);
        assert_eq!(c, vec![k.one()]);
        // bracketing independence of the expansion rule
        let f = h.basis[0].clone();
        let w1 = vec![(0, 2), (0, -1), (0, 3)];
        let w2 = vec![(0, 4)];
        assert_eq!(h.evaluate(&f, &w1), h.evaluate(&f, &w2));
    }
}
