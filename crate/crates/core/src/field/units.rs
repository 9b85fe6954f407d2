//! Unit group: search by short vectors of the trace form, then saturation
//! by exact l-th root extraction.

use super::{FieldElement, FracIdeal, NumberField, SignVector};
use crate::arith::enumerate::short_vectors;
use crate::arith::intfactor::primes_up_to;
use crate::arith::ring::{Field, Int, Rat};
use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

/// Lower bound for the regulator of any number field.
const REGULATOR_LOWER_BOUND: f64 = 0.2;

#[derive(Clone, Debug)]
pub struct UnitGroup {
    /// Generators of the free part, each positive at `v_1`.
    pub fundamental_units: Vec<FieldElement>,
    pub sign_images: Vec<SignVector>,
    pub regulator: f64,
}

impl UnitGroup {
    /// Sign vectors of all `2^{n}` products `±u^a`, `a` in `{0,1}^{n-1}`.
    pub fn sign_image(&self, fld: &NumberField) -> Vec<SignVector> {
        let n = fld.degree;
        let r = self.fundamental_units.len();
        let mut out = Vec::new();
        for mask in 0..(1u32 << (r + 1)) {
            let mut s = SignVector(vec![1; n]);
            if mask & 1 == 1 {
                s = SignVector(vec![-1; n]);
            }
            for i in 0..r {
                if mask >> (i + 1) & 1 == 1 {
                    s = s.mul(&self.sign_images[i]);
                }
            }
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    /// A unit `±prod u_i^{a_i}` with the given sign vector, if one exists.
    pub fn unit_with_sign(&self, fld: &NumberField, target: &SignVector) -> Option<FieldElement> {
        let r = self.fundamental_units.len();
        for mask in 0..(1u32 << (r + 1)) {
            let mut s = SignVector(vec![1; fld.degree]);
            let mut u = fld.one();
            if mask & 1 == 1 {
                s = SignVector(vec![-1; fld.degree]);
                u = fld.neg(&u);
            }
            for i in 0..r {
                if mask >> (i + 1) & 1 == 1 {
                    s = s.mul(&self.sign_images[i]);
                    u = fld.mul(&u, &self.fundamental_units[i]);
                }
            }
            if &s == target {
                return Some(u);
            }
        }
        None
    }
}

pub(crate) fn log_vector(fld: &NumberField, u: &FieldElement) -> Vec<f64> {
    fld.embeddings(u).iter().map(|x| x.abs().ln()).collect()
}

/// Trace form Gram matrix on the integral basis.
pub(crate) fn trace_gram(fld: &NumberField) -> Vec<Vec<f64>> {
    let n = fld.degree;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| crate::arith::ring::rat_to_f64(&fld.trace(&fld.mul(&fld.basis_element(i), &fld.basis_element(j)))))
                .collect()
        })
        .collect()
}

fn regulator_of(fld: &NumberField, units: &[FieldElement]) -> f64 {
    let r = units.len();
    if r == 0 {
        return 1.0;
    }
    let logs: Vec<Vec<f64>> = units.iter().map(|u| log_vector(fld, u)).collect();
    det_f64((0..r).map(|i| (0..r).map(|j| logs[i][j]).collect()).collect()).abs()
}

pub(crate) fn det_f64(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap()).unwrap();
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

pub(crate) fn solve_f64(mut m: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = m.len();
    for c in 0..n {
        let p = (c..n).max_by(|&a, &q| m[a][c].abs().partial_cmp(&m[q][c].abs()).unwrap())?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(p, c);
        b.swap(p, c);
        for r in 0..n {
            if r != c {
                let f = m[r][c] / m[c][c];
                for k in c..n {
                    m[r][k] -= f * m[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / m[i][i]).collect())
}

pub(crate) fn pow_elt(fld: &NumberField, a: &FieldElement, e: i64) -> FieldElement {
    let base = if e < 0 { fld.inv(a) } else { a.clone() };
    fld.pow(&base, e.unsigned_abs())
}

/// Integral element with the given real embeddings, if rounding recovers one.
fn element_from_embeddings(fld: &NumberField, target: &[f64]) -> Option<FieldElement> {
    let n = fld.degree;
    let m: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| fld.embed(&fld.basis_element(j), i)).collect()).collect();
    let c = solve_f64(m, target.to_vec())?;
    if c.iter().any(|x| !x.is_finite() || x.abs() > 1e15) {
        return None;
    }
    Some(FieldElement(c.iter().map(|x| Rat::from_integer(Int::from(x.round() as i64))).collect()))
}

/// Exact `l`-th root of a unit, if it lies in the field.
fn unit_root(fld: &NumberField, u: &FieldElement, l: u64) -> Option<FieldElement> {
    let emb = fld.embeddings(u);
    let n = fld.degree;
    let mags: Vec<f64> = emb.iter().map(|x| x.abs().powf(1.0 / l as f64)).collect();
    let sign_choices: Vec<Vec<f64>> = if l % 2 == 1 {
        vec![emb.iter().map(|x| x.signum()).collect()]
    } else {
        if emb.iter().any(|x| *x < 0.0) {
            return None;
        }
        (0..(1u32 << n)).map(|m| (0..n).map(|i| if m >> i & 1 == 1 { -1.0 } else { 1.0 }).collect()).collect()
    };
    for s in sign_choices {
        let t: Vec<f64> = mags.iter().zip(&s).map(|(a, b)| a * b).collect();
        if let Some(x) = element_from_embeddings(fld, &t) {
            if fld.pow(&x, l) == *u {
                return Some(x);
            }
        }
    }
    None
}

/// Replaces `units` by a basis of the saturation of the group they generate.
fn saturate(fld: &NumberField, mut units: Vec<FieldElement>) -> Vec<FieldElement> {
    let r = units.len();
    'restart: loop {
        let reg = regulator_of(fld, &units);
        let lmax = (reg / REGULATOR_LOWER_BOUND).floor() as u64;
        for l in primes_up_to(lmax.max(2)) {
            if l > lmax {
                break;
            }
            let total = l.pow(r as u32);
            for idx in 1..total {
                let mut a = vec![0u64; r];
                let mut t = idx;
                for x in a.iter_mut() {
                    *x = t % l;
                    t /= l;
                }
                let mut u = fld.one();
                for (ui, ai) in units.iter().zip(&a) {
                    if *ai != 0 {
                        u = fld.mul(&u, &fld.pow(ui, *ai));
                    }
                }
                for cand in [u.clone(), fld.neg(&u)] {
                    if let Some(x) = unit_root(fld, &cand, l) {
                        let j = a.iter().position(|&ai| ai != 0).unwrap();
                        units[j] = x;
                        continue 'restart;
                    }
                }
            }
        }
        return units;
    }
}

/// Reduces a basis of the log lattice (size reduction and swaps).
fn reduce_basis(fld: &NumberField, mut units: Vec<FieldElement>) -> Vec<FieldElement> {
    let r = units.len();
    let mut changed = true;
    let mut guard = 0;
    while changed && guard < 1000 {
        changed = false;
        guard += 1;
        let logs: Vec<Vec<f64>> = units.iter().map(|u| log_vector(fld, u)).collect();
        let norm2 = |v: &Vec<f64>| v.iter().map(|x| x * x).sum::<f64>();
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                let mu = logs[i].iter().zip(&logs[j]).map(|(a, b)| a * b).sum::<f64>() / norm2(&logs[j]);
                let k = mu.round() as i64;
                if k != 0 {
                    let cand = fld.mul(&units[i], &pow_elt(fld, &units[j], -k));
                    if norm2(&log_vector(fld, &cand)) < norm2(&logs[i]) - 1e-9 {
                        units[i] = cand;
                        changed = true;
                        break;
                    }
                }
            }
            if changed {
                break;
            }
        }
    }
    let mut keyed: Vec<(f64, FieldElement)> =
        units.into_iter().map(|u| (log_vector(fld, &u).iter().map(|x| x * x).sum::<f64>(), u)).collect();
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.1.cmp(&b.1)));
    keyed.into_iter().map(|(_, u)| u).collect()
}

/// Extends an independent list by `u` and returns a basis of the lattice
/// generated by both (in the log embedding).
fn absorb(fld: &NumberField, basis: Vec<FieldElement>, u: FieldElement, rank: usize) -> Vec<FieldElement> {
    let logs: Vec<Vec<f64>> = basis.iter().map(|b| log_vector(fld, b)[..rank].to_vec()).collect();
    let lu = log_vector(fld, &u)[..rank].to_vec();
    if basis.len() < rank {
        let mut cand = basis.clone();
        cand.push(u.clone());
        if regulator_partial(fld, &cand) > 1e-6 {
            return cand;
        }
        return basis;
    }
    let m: Vec<Vec<f64>> = (0..rank).map(|i| (0..rank).map(|j| logs[j][i]).collect()).collect();
    let Some(c) = solve_f64(m, lu) else { return basis };
    let mut u = u;
    for (ci, b) in c.iter().zip(&basis) {
        let k = ci.floor() as i64;
        if k != 0 {
            u = fld.mul(&u, &pow_elt(fld, b, -k));
        }
    }
    let frac: Vec<f64> = c.iter().map(|x| x - x.floor()).collect();
    if frac.iter().all(|x| *x < 1e-6 || *x > 1.0 - 1e-6) {
        return basis;
    }
    // u now has coordinates in [0,1)^r; exchange with the basis element of
    // largest coordinate to shrink the regulator, then saturation cleans up
    let j = (0..rank).max_by(|&a, &b| frac[a].partial_cmp(&frac[b]).unwrap()).unwrap();
    let mut next = basis.clone();
    next[j] = u;
    if regulator_partial(fld, &next) < regulator_partial(fld, &basis) - 1e-9 {
        absorb(fld, next, basis[j].clone(), rank)
    } else {
        basis
    }
}

fn regulator_partial(fld: &NumberField, units: &[FieldElement]) -> f64 {
    let r = units.len();
    let logs: Vec<Vec<f64>> = units.iter().map(|u| log_vector(fld, u)).collect();
    if r == 0 {
        return 1.0;
    }
    // Gram determinant, valid for fewer than full rank
    let g: Vec<Vec<f64>> = (0..r).map(|i| (0..r).map(|j| logs[i][..].iter().zip(&logs[j]).map(|(a, b)| a * b).sum()).collect()).collect();
    det_f64(g).abs().sqrt()
}

/// Computes a fundamental system of units, searching integral elements of
/// trace-form size up to `max_height`.
pub fn unit_group_with_bound(fld: &NumberField, max_height: u64) -> Result<UnitGroup> {
    let n = fld.degree;
    let rank = n - 1;
    let gram = trace_gram(fld);
    let mut basis: Vec<FieldElement> = Vec::new();
    let mut by_ideal: HashMap<FracIdeal, FieldElement> = HashMap::new();
    let mut bound = 4.0 * n as f64;
    let mut rounds_after_full = 0;
    loop {
        let vecs = match short_vectors(&gram, bound, 200_000) {
            Ok(v) => v,
            Err(_) => break,
        };
        for (_, c) in vecs {
            let x = fld.from_coords_i64(&c);
            let approx: f64 = fld.embeddings(&x).iter().product::<f64>().abs();
            if approx > 50.5 {
                continue;
            }
            let nm = fld.norm(&x).to_integer().abs();
            if nm.is_zero() {
                continue;
            }
            if nm.is_one() {
                basis = absorb(fld, basis, x, rank);
            } else if nm <= Int::from(50) {
                let id = FracIdeal::principal(fld, &x);
                match by_ideal.get(&id) {
                    Some(y) => {
                        let q = fld.mul(&x, &fld.inv(y));
                        if q != fld.one() && q != fld.neg(&fld.one()) {
                            basis = absorb(fld, basis, q, rank);
                        }
                    }
                    None => {
                        by_ideal.insert(id, x);
                    }
                }
            }
        }
        if basis.len() == rank {
            rounds_after_full += 1;
            if rounds_after_full >= 2 {
                break;
            }
        }
        if bound > max_height as f64 {
            break;
        }
        bound *= 2.0;
    }
    if basis.len() < rank {
        return Err(Error::UnitSearchExhausted { bound: max_height, found: basis.len(), needed: rank });
    }
    let units = saturate(fld, basis);
    let units = reduce_basis(fld, units);
    let units: Vec<FieldElement> = units
        .into_iter()
        .map(|u| if fld.sign_at(&u, 0).unwrap() < 0 { fld.neg(&u) } else { u })
        .collect();
    let sign_images = units.iter().map(|u| fld.sign_vector(u)).collect::<Result<Vec<_>>>()?;
    let regulator = regulator_of(fld, &units);
    if regulator < 1e-9 && rank > 0 {
        return Err(Error::UnitSearchExhausted { bound: max_height, found: 0, needed: rank });
    }
    Ok(UnitGroup { fundamental_units: units, sign_images, regulator })
}

pub fn unit_group(fld: &NumberField) -> Result<UnitGroup> {
    unit_group_with_bound(fld, 1 << 16)
}

/// Exact check that each unit has norm ±1.
pub fn is_unit(fld: &NumberField, u: &FieldElement) -> bool {
    u.is_integral() && fld.norm(u).abs().is_one()
}

/// Index of the subgroup generated by `units` in the group generated by `ug`
/// (both modulo torsion), computed from regulators.
pub fn relative_index(fld: &NumberField, ug: &UnitGroup, units: &[FieldElement]) -> f64 {
    regulator_of(fld, units) / ug.regulator
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_units() {
        let fld = NumberField::with_options(&[-11, -11, 0, 1].map(Int::from), Some(vec![2, 1, 0]), 128).unwrap();
        let ug = unit_group(&fld).unwrap();
        assert_eq!(ug.fundamental_units.len(), 2);
        for u in &ug.fundamental_units {
            assert!(is_unit(&fld, u));
        }
        let a = fld.parse_element("w+1", "w").unwrap();
        let b = fld.parse_element("-w^2+2w+12", "w").unwrap();
        assert!(is_unit(&fld, &a) && is_unit(&fld, &b));
        assert!(fld.is_totally_positive(&b).unwrap());
        let idx = relative_index(&fld, &ug, &[a, b]);
        assert!((idx - 1.0).abs() < 1e-6, "index {idx}");
        assert_eq!(ug.sign_image(&fld).len(), 4);
    }

    #[test]
    fn quadratic_units() {
        let fld = NumberField::new(&[-5, 0, 1]).unwrap();
        let ug = unit_group(&fld).unwrap();
        let u = &ug.fundamental_units[0];
        let phi = fld.parse_element("1/2+1/2*x", "x").unwrap();
        let phii = fld.inv(&phi);
        assert!([phi.clone(), fld.neg(&phi), phii.clone(), fld.neg(&phii)].contains(u));
        assert_eq!(fld.norm(u), -Rat::one());
        let f65 = NumberField::new(&[-65, 0, 1]).unwrap();
        let ug = unit_group(&f65).unwrap();
        assert_eq!(f65.norm(&ug.fundamental_units[0]), -Rat::one());
        assert!((ug.regulator - (8.0f64 + 65f64.sqrt()).ln()).abs() < 1e-9);
    }
}
