//! Arithmetic Fuchsian groups `Γ = O_+^× / Z_F^×` acting on the unit disc:
//! unit enumeration, Dirichlet domains, presentations and the word problem.

pub mod domain;
pub mod svg;
pub mod volume;

use crate::arith::ring::{Field, Int};
use crate::error::{Error, Result};
use crate::field::units::{log_vector, pow_elt, solve_f64};
use crate::field::{FieldElement, NumberField, UnitGroup};
use crate::quat::lattice::QuatLattice;
use crate::quat::principal::EmbeddedBasis;
use crate::quat::{QuatAlgebra, QuatElement};
use num_complex::Complex64;
use num_traits::{Signed, Zero};



pub type C64 = Complex64;
pub type CMat = [[C64; 2]; 2];

/// Default center of the Dirichlet domain in the upper half-plane.
pub const DEFAULT_CENTER: (f64, f64) = (0.1, 1.2);

/// A unit of `O` with totally positive reduced norm, scaled so that its
/// reduced norm is one of the fixed representatives of totally positive
/// units modulo squares, and with first nonzero coordinate positive.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub quat: QuatElement,
    pub matrix: CMat,
}

pub fn cmat_mul(a: &CMat, b: &CMat) -> CMat {
    let e = |i: usize, j: usize| a[i][0] * b[0][j] + a[i][1] * b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn cmat_inv(a: &CMat) -> CMat {
    let d = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

/// Möbius action on a point of the disc.
pub fn mobius(m: &CMat, z: C64) -> C64 {
    (m[0][0] * z + m[0][1]) / (m[1][0] * z + m[1][1])
}

/// Everything needed to work with one group `O_+^× / Z_F^×`.
#[derive(Clone, Debug)]
pub struct GroupContext {
    pub alg: QuatAlgebra,
    pub order: QuatLattice,
    pub units: UnitGroup,
    /// Representatives of totally positive units modulo squares.
    pub nrd_reps: Vec<FieldElement>,
    pub center: C64,
    cayley: CMat,
    cayley_inv: CMat,
}

impl GroupContext {
    pub fn new(alg: &QuatAlgebra, order: &QuatLattice, units: &UnitGroup, center: (f64, f64)) -> Result<GroupContext> {
        let fld = &alg.field;
        let r = units.fundamental_units.len();
        let mut reps = Vec::new();
        for mask in 0..(1u32 << (r + 1)) {
            let mut u = if mask & 1 == 1 { fld.neg(&fld.one()) } else { fld.one() };
            for i in 0..r {
                if mask >> (i + 1) & 1 == 1 {
                    u = fld.mul(&u, &units.fundamental_units[i]);
                }
            }
            if fld.is_totally_positive(&u)? {
                reps.push(u);
            }
        }
        let p = C64::new(center.0, center.1);
        if center.1 <= 0.0 {
            return Err(Error::Config("domain center must lie in the upper half-plane".into()));
        }
        let one = C64::new(1.0, 0.0);
        let cayley = [[one, -p], [one, -p.conj()]];
        Ok(GroupContext {
            alg: alg.clone(),
            order: order.clone(),
            units: units.clone(),
            nrd_reps: reps,
            center: p,
            cayley_inv: cmat_inv(&cayley),
            cayley,
        })
    }

    pub fn field(&self) -> &NumberField {
        &self.alg.field
    }

    /// Exponents `e` with `u = ±prod eps_i^{e_i}` for a unit `u`.
    pub fn unit_exponents(&self, u: &FieldElement) -> Option<Vec<i64>> {
        let fld = self.field();
        let r = self.units.fundamental_units.len();
        if r == 0 {
            return Some(Vec::new());
        }
        let lu = log_vector(fld, u);
        let ls: Vec<Vec<f64>> = self.units.fundamental_units.iter().map(|e| log_vector(fld, e)).collect();
        let m: Vec<Vec<f64>> = (0..r).map(|i| (0..r).map(|j| ls[i].iter().zip(&ls[j]).map(|(a, b)| a * b).sum()).collect()).collect();
        let b: Vec<f64> = (0..r).map(|i| ls[i].iter().zip(&lu).map(|(a, b)| a * b).sum()).collect();
        let e = solve_f64(m, b)?;
        let e: Vec<i64> = e.iter().map(|x| x.round() as i64).collect();
        let mut prod = fld.one();
        for (k, &ek) in e.iter().enumerate() {
            prod = fld.mul(&prod, &pow_elt(fld, &self.units.fundamental_units[k], ek));
        }
        if prod == *u || fld.neg(&prod) == *u {
            Some(e)
        } else {
            None
        }
    }

    /// Scales a unit of `O` with totally positive norm into canonical form;
    /// `None` if `x` is not such a unit.
    pub fn normalize(&self, x: &QuatElement) -> Option<GroupElement> {
        let alg = &self.alg;
        let fld = self.field();
        let nr = alg.nrd(x);
        if fld.norm(&nr).abs() != num_rational::BigRational::from_integer(Int::from(1)) {
            return None;
        }
        if !fld.is_totally_positive(&nr).ok()? {
            return None;
        }
        let e = self.unit_exponents(&nr)?;
        let mut u = fld.one();
        for (k, &ek) in e.iter().enumerate() {
            if ek.div_euclid(2) != 0 {
                u = fld.mul(&u, &pow_elt(fld, &self.units.fundamental_units[k], ek.div_euclid(2)));
            }
        }
        let mut y = alg.scale(&fld.inv(&u), x);
        let first = y.num.iter().find(|c| !c.is_zero())?;
        if first.is_negative() {
            y = alg.neg(&y);
        }
        Some(GroupElement { matrix: self.disc_matrix(&y), quat: y })
    }

    /// Image in `SU(1,1)` acting on the disc, with the domain center at 0.
    pub fn disc_matrix(&self, x: &QuatElement) -> CMat {
        let m = self.alg.real_matrix(x);
        let s = self.field().embed(&self.alg.nrd(x), self.alg.split_place).abs().sqrt();
        let r = |v: f64| C64::new(v / s, 0.0);
        let mr = [[r(m[0][0]), r(m[0][1])], [r(m[1][0]), r(m[1][1])]];
        cmat_mul(&cmat_mul(&self.cayley, &mr), &self.cayley_inv)
    }

    /// Point of the upper half-plane corresponding to a point of the disc.
    pub fn disc_to_upper(&self, z: C64) -> C64 {
        mobius(&self.cayley_inv, z)
    }

    pub fn identity(&self) -> GroupElement {
        self.normalize(&self.alg.one()).expect("identity is a unit")
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.normalize(&self.alg.mul(&a.quat, &b.quat)).expect("product of units")
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        self.normalize(&self.alg.conj(&a.quat)).expect("inverse of a unit")
    }

    /// True if `x` and `y` agree modulo `Z_F^×`.
    pub fn same_element(&self, x: &QuatElement, y: &QuatElement) -> bool {
        match self.alg.proportional(x, y) {
            Some(c) => crate::field::units::is_unit(self.field(), &c),
            None => false,
        }
    }

    pub fn is_identity(&self, x: &QuatElement) -> bool {
        self.alg.is_scalar(x)
    }

    /// Gram matrix on the order's Z-basis of the form
    /// `|g_p^-1 iota(x) g_p|_F^2 + sum_ram v(nrd x)`, which for a unit of norm
    /// `ν` equals `2 v_1(ν) cosh d(p, x p) + sum_ram v(ν)`.
    pub fn centered_basis(&self) -> (EmbeddedBasis, Vec<Vec<f64>>) {
        self.centered_basis_at(self.center)
    }

    /// As [`Self::centered_basis`] with the form centered at a point `p` of
    /// the upper half-plane.
    pub fn centered_basis_at(&self, p: C64) -> (EmbeddedBasis, Vec<Vec<f64>>) {
        self.weighted_basis_at(p, 1.0)
    }

    /// As [`Self::centered_basis_at`] with the ramified places weighted by `t`.
    pub fn weighted_basis_at(&self, p: C64, t: f64) -> (EmbeddedBasis, Vec<Vec<f64>>) {
        let mut emb = EmbeddedBasis::new(&self.alg, &self.order);
        let (x0, y0) = (p.re, p.im);
        let sy = y0.sqrt();
        // g = [[sy, x0/sy],[0, 1/sy]], g^-1 = [[1/sy, -x0/sy],[0, sy]]
        for m in emb.split.iter_mut() {
            let a = [[m[0], m[1]], [m[2], m[3]]];
            let g = [[sy, x0 / sy], [0.0, 1.0 / sy]];
            let gi = [[1.0 / sy, -x0 / sy], [0.0, sy]];
            let mul = |p: [[f64; 2]; 2], q: [[f64; 2]; 2]| {
                [
                    [p[0][0] * q[0][0] + p[0][1] * q[1][0], p[0][0] * q[0][1] + p[0][1] * q[1][1]],
                    [p[1][0] * q[0][0] + p[1][1] * q[1][0], p[1][0] * q[0][1] + p[1][1] * q[1][1]],
                ]
            };
            let c = mul(mul(gi, a), g);
            *m = [c[0][0], c[0][1], c[1][0], c[1][1]];
        }
        let gram = emb.weighted_gram(t);
        (emb, gram)
    }
}
