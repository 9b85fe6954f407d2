//! Full-rank rational lattices in `Q^n` stored in Hermite normal form.
//!
//! A lattice is `(1/denom) * rowspan_Z(basis)` where `basis` is an upper
//! triangular integer matrix in canonical HNF: positive diagonal, entries
//! right of the diagonal reduced into `[0, diag_j)`. Equality of lattices is
//! structural equality.

use super::matrix::{inverse, Matrix};
use super::ring::{common_denominator, Int, Rat, Rationals};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    pub dim: usize,
    pub basis: Vec<Vec<Int>>,
    pub denom: Int,
}

/// Incremental integer HNF builder for a lattice in `Z^n`.
struct HnfBuilder {
    n: usize,
    rows: Vec<Option<Vec<Int>>>,
    modulus: Option<Int>,
    exact: bool,
}

fn xgcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

impl HnfBuilder {
    fn new(n: usize) -> Self {
        HnfBuilder { n, rows: vec![None; n], modulus: None, exact: false }
    }

    fn insert(&mut self, mut v: Vec<Int>) {
        if let Some(m) = &self.modulus {
            for x in v.iter_mut() {
                *x = x.mod_floor(m);
            }
        }
        for j in 0..self.n {
            if v[j].is_zero() {
                continue;
            }
            match self.rows[j].take() {
                None => {
                    if v[j].is_negative() {
                        for x in v.iter_mut() {
                            *x = -x.clone();
                        }
                    }
                    self.rows[j] = Some(v);
                    self.after_insert();
                    return;
                }
                Some(row) => {
                    let (g, s, t) = xgcd(&row[j], &v[j]);
                    let a = &row[j] / &g;
                    let b = &v[j] / &g;
                    let mut new_row: Vec<Int> = row.iter().zip(&v).map(|(r, x)| &s * r + &t * x).collect();
                    let mut rest: Vec<Int> = row.iter().zip(&v).map(|(r, x)| &a * x - &b * r).collect();
                    if new_row[j].is_negative() {
                        for x in new_row.iter_mut() {
                            *x = -x.clone();
                        }
                    }
                    if let Some(m) = &self.modulus {
                        for x in new_row.iter_mut().skip(j + 1) {
                            *x = x.mod_floor(m);
                        }
                        for x in rest.iter_mut() {
                            *x = x.mod_floor(m);
                        }
                    }
                    self.rows[j] = Some(new_row);
                    v = rest;
                }
            }
        }
        self.after_insert();
    }

    fn after_insert(&mut self) {
        if !self.exact && self.modulus.is_none() && self.rows.iter().all(|r| r.is_some()) {
            let mut d = Int::one();
            for (j, r) in self.rows.iter().enumerate() {
                d *= &r.as_ref().unwrap()[j];
            }
            self.modulus = Some(d);
        }
    }

    fn finish(mut self) -> Option<Vec<Vec<Int>>> {
        let n = self.n;
        if self.rows.iter().any(|r| r.is_none()) {
            return None;
        }
        // the modulus trick needs the multiples m e_j to be in the lattice;
        // they are, so re-insert them to restore exactness
        if let Some(m) = self.modulus.take() {
            self.exact = true;
            for j in 0..n {
                let mut e = vec![Int::zero(); n];
                e[j] = m.clone();
                self.insert(e);
            }
        }
        let mut rows: Vec<Vec<Int>> = self.rows.into_iter().map(|r| r.unwrap()).collect();
        for i in (0..n).rev() {
            for j in i + 1..n {
                let q = rows[i][j].div_floor(&rows[j][j]);
                if !q.is_zero() {
                    let rj = rows[j].clone();
                    for (x, y) in rows[i].iter_mut().zip(rj.iter()) {
                        *x -= &q * y;
                    }
                }
            }
        }
        Some(rows)
    }
}

/// HNF of the integer row span of `gens`; `None` if not of full rank.
pub fn hnf_full_rank(n: usize, gens: impl IntoIterator<Item = Vec<Int>>) -> Option<Vec<Vec<Int>>> {
    let mut b = HnfBuilder::new(n);
    for g in gens {
        assert_eq!(g.len(), n);
        if g.iter().all(|x| x.is_zero()) {
            continue;
        }
        b.insert(g);
    }
    b.finish()
}

/// Integer coefficients `c` with `sum c_i gens_i = target`, if they exist.
pub fn solve_integer(gens: &[Vec<Int>], target: &[Int]) -> Option<Vec<Int>> {
    let m = gens.len();
    let n = target.len();
    // rows: [gen | unit vector], reduce to echelon form on the first n columns
    let mut rows: Vec<(Vec<Int>, Vec<Int>)> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut u = vec![Int::zero(); m];
            u[i] = Int::one();
            (g.clone(), u)
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if !rows[i].0[col].is_zero() && best.map_or(true, |b| rows[i].0[col].abs() < rows[b].0[col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i].0[col].is_zero() {
                    continue;
                }
                let q = rows[i].0[col].div_floor(&rows[r].0[col]);
                let (pv, pu) = rows[r].clone();
                for (x, y) in rows[i].0.iter_mut().zip(&pv) {
                    *x -= &q * y;
                }
                for (x, y) in rows[i].1.iter_mut().zip(&pu) {
                    *x -= &q * y;
                }
                if !rows[i].0[col].is_zero() {
                    done = false;
                }
            }
            if done {
                pivots.push((r, col));
                r += 1;
                break;
            }
        }
    }
    let mut t: Vec<Int> = target.to_vec();
    let mut coeffs = vec![Int::zero(); m];
    for col in 0..n {
        let piv = pivots.iter().find(|(_, c)| *c == col);
        match piv {
            None => {
                if !t[col].is_zero() {
                    return None;
                }
            }
            Some(&(row, _)) => {
                let (q, rem) = t[col].div_rem(&rows[row].0[col]);
                if !rem.is_zero() {
                    return None;
                }
                for (x, y) in t.iter_mut().zip(&rows[row].0) {
                    *x -= &q * y;
                }
                for (x, y) in coeffs.iter_mut().zip(&rows[row].1) {
                    *x += &q * y;
                }
            }
        }
    }
    if t.iter().all(|x| x.is_zero()) {
        Some(coeffs)
    } else {
        None
    }
}

impl Lattice {
    /// Lattice spanned by rational generators; `None` if they do not span `Q^n`.
    pub fn from_generators(dim: usize, gens: &[Vec<Rat>]) -> Option<Lattice> {
        let d = common_denominator(gens.iter().flatten());
        let dr = Rat::from_integer(d.clone());
        let ints = gens.iter().map(|g| g.iter().map(|x| (x * &dr).to_integer()).collect::<Vec<_>>());
        let basis = hnf_full_rank(dim, ints)?;
        Some(Lattice::normalized(dim, basis, d))
    }

    fn normalized(dim: usize, basis: Vec<Vec<Int>>, denom: Int) -> Lattice {
        let mut g = denom.clone();
        for r in &basis {
            for x in r {
                g = g.gcd(x);
                if g.is_one() {
                    break;
                }
            }
        }
        if g.is_one() {
            return Lattice { dim, basis, denom };
        }
        Lattice {
            dim,
            basis: basis.into_iter().map(|r| r.into_iter().map(|x| x / &g).collect()).collect(),
            denom: denom / &g,
        }
    }

    pub fn standard(dim: usize) -> Lattice {
        let basis = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        Lattice { dim, basis, denom: Int::one() }
    }

    pub fn basis_rat(&self) -> Vec<Vec<Rat>> {
        self.basis
            .iter()
            .map(|r| r.iter().map(|x| Rat::new(x.clone(), self.denom.clone())).collect())
            .collect()
    }

    /// Absolute value of the determinant of the basis (covolume).
    pub fn covolume(&self) -> Rat {
        let mut d = Int::one();
        for (i, r) in self.basis.iter().enumerate() {
            d *= &r[i];
        }
        Rat::new(d, self.denom.pow(self.dim as u32))
    }

    /// Integer coordinates of `v` in the HNF basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[Rat]) -> Option<Vec<Int>> {
        // back substitution on an upper triangular system: v = c * B / denom
        let dr = Rat::from_integer(self.denom.clone());
        let mut w: Vec<Rat> = v.iter().map(|x| x * &dr).collect();
        let mut c = vec![Int::zero(); self.dim];
        for i in 0..self.dim {
            let wi = &w[i];
            if !wi.is_integer() {
                return None;
            }
            let (q, r) = wi.to_integer().div_rem(&self.basis[i][i]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for j in i..self.dim {
                    w[j] -= Rat::from_integer(&q * &self.basis[i][j]);
                }
            }
            c[i] = q;
        }
        Some(c)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis_rat().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut gens = self.basis_rat();
        gens.extend(other.basis_rat());
        Lattice::from_generators(self.dim, &gens).unwrap()
    }

    pub fn scale(&self, c: &Rat) -> Lattice {
        assert!(!c.is_zero());
        let gens: Vec<Vec<Rat>> = self.basis_rat().into_iter().map(|r| r.into_iter().map(|x| x * c).collect()).collect();
        Lattice::from_generators(self.dim, &gens).unwrap()
    }

    /// Dual lattice with respect to the standard dot product.
    pub fn dual(&self) -> Lattice {
        let b = Matrix::from_rows(self.basis_rat());
        let inv = inverse(&Rationals, &b).expect("singular lattice basis");
        let gens = inv.transpose().to_rows();
        Lattice::from_generators(self.dim, &gens).unwrap()
    }

    pub fn intersection(&self, other: &Lattice) -> Lattice {
        self.dual().sum(&other.dual()).dual()
    }

    /// Index `[self : sub]` for a sublattice.
    pub fn index_of(&self, sub: &Lattice) -> Rat {
        sub.covolume() / self.covolume()
    }

    /// Lattice `{x : A x in Z^m}` for an `m x n` rational matrix `A` of
    /// rank `n`, i.e. the dual of the lattice spanned by the rows of `A`.
    pub fn preimage_of_integers(dim: usize, rows: &[Vec<Rat>]) -> Option<Lattice> {
        Some(Lattice::from_generators(dim, rows)?.dual())
    }

    /// True if every coordinate of every basis vector is integral.
    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    /// Canonical representative of an integer vector modulo an integral lattice.
    pub fn reduce_vector(&self, v: &[Int]) -> Vec<Int> {
        assert!(self.denom.is_one());
        let mut w = v.to_vec();
        for i in 0..self.dim {
            let q = w[i].div_floor(&self.basis[i][i]);
            if !q.is_zero() {
                for j in i..self.dim {
                    w[j] -= &q * &self.basis[i][j];
                }
            }
        }
        w
    }

    /// Representatives of `self / sub`, or `None` if `sub` is not a
    /// sublattice or the index exceeds `limit`.
    pub fn coset_representatives(&self, sub: &Lattice, limit: usize) -> Option<Vec<Vec<Rat>>> {
        let rows: Vec<Vec<Int>> = sub.basis_rat().iter().map(|v| self.coordinates(v)).collect::<Option<_>>()?;
        let h = hnf_full_rank(self.dim, rows)?;
        let mut count: usize = 1;
        for (i, r) in h.iter().enumerate() {
            count = count.checked_mul(usize::try_from(&r[i]).ok()?)?;
            if count > limit {
                return None;
            }
        }
        let basis = self.basis_rat();
        let mut reps = vec![vec![Rat::zero(); self.dim]];
        for (i, r) in h.iter().enumerate() {
            let d = usize::try_from(&r[i]).unwrap();
            let mut next = Vec::with_capacity(reps.len() * d);
            for v in &reps {
                for c in 0..d {
                    let c = Rat::from_integer(Int::from(c));
                    next.push(v.iter().zip(&basis[i]).map(|(x, b)| x + &c * b).collect());
                }
            }
            reps = next;
        }
        Some(reps)
    }

    pub fn abs_det_int(&self) -> Int {
        let mut d = Int::one();
        for (i, r) in self.basis.iter().enumerate() {
            d *= &r[i];
        }
        d.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::{rat, rint};

    #[test]
    fn integer_solutions() {
        let g = vec![vec![Int::from(4), Int::from(0)], vec![Int::from(6), Int::from(2)]];
        let c = solve_integer(&g, &[Int::from(2), Int::from(2)]).unwrap();
        assert_eq!(&c[0] * 4 + &c[1] * 6, Int::from(2));
        assert_eq!(&c[1] * 2, Int::from(2));
        assert!(solve_integer(&g, &[Int::from(1), Int::from(0)]).is_none());
        let l = Lattice::from_generators(2, &[vec![rint(3), rint(1)], vec![rint(0), rint(5)]]).unwrap();
        let r = l.reduce_vector(&[Int::from(7), Int::from(-9)]);
        assert!(r[0] >= Int::zero() && r[0] < Int::from(3));
        assert!(r[1] >= Int::zero() && r[1] < Int::from(5));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = Lattice::from_generators(2, &[vec![rint(2), rint(4)], vec![rint(0), rint(6)]]).unwrap();
        let b = Lattice::from_generators(2, &[vec![rint(2), rint(-2)], vec![rint(2), rint(4)], vec![rint(4), rint(2)]]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis, vec![vec![Int::from(2), Int::from(4)], vec![Int::from(0), Int::from(6)]]);
        assert_eq!(a.covolume(), rint(12));
    }

    #[test]
    fn rational_lattice_and_dual() {
        let a = Lattice::from_generators(2, &[vec![rat(1, 2), rint(0)], vec![rint(0), rint(3)]]).unwrap();
        assert!(a.contains(&[rat(3, 2), rint(6)]));
        assert!(!a.contains(&[rat(1, 3), rint(0)]));
        let d = a.dual();
        assert_eq!(d.covolume(), rat(2, 3));
        assert_eq!(d.dual(), a);
    }

    #[test]
    fn intersection_of_sublattices() {
        let a = Lattice::from_generators(1, &[vec![rint(4)]]).unwrap();
        let b = Lattice::from_generators(1, &[vec![rint(6)]]).unwrap();
        assert_eq!(a.intersection(&b), Lattice::from_generators(1, &[vec![rint(12)]]).unwrap());
        assert_eq!(a.sum(&b), Lattice::from_generators(1, &[vec![rint(2)]]).unwrap());
    }
}
