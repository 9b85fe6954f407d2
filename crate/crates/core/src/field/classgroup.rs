//! Principal ideal testing, class group and strict class group.

use super::primes::{primes_up_to, PrimeIdeal};
use super::units::{trace_gram, UnitGroup};
use super::{FieldElement, FracIdeal, NumberField, SignVector};
use crate::arith::enumerate::short_vectors;
use crate::arith::ring::{rat_to_f64, Field, Int, Rat};
use crate::error::{Error, Result};
use num_traits::{Signed, Zero};
use serde::Serialize;

/// Default cap on the number of lattice vectors examined per principal test.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 2_000_000;

/// Finds a generator of a principal fractional ideal, or `None` when the
/// ideal is not principal.
pub fn principal_generator(fld: &NumberField, ug: &UnitGroup, i: &FracIdeal) -> Result<Option<FieldElement>> {
    let n = fld.degree;
    let d = i.denominator();
    let basis: Vec<Vec<Int>> = i.lattice.basis.clone();
    let target = i.norm() * Rat::from_integer(d.pow(n as u32));
    let target = target.to_integer();
    let tg = trace_gram(fld);
    let gram: Vec<Vec<f64>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    let mut s = 0.0;
                    for k in 0..n {
                        for l in 0..n {
                            s += rat_to_f64(&Rat::from_integer(basis[a][k].clone())) * tg[k][l] * rat_to_f64(&Rat::from_integer(basis[b][l].clone()));
                        }
                    }
                    s
                })
                .collect()
        })
        .collect();
    let c: f64 = ug
        .fundamental_units
        .iter()
        .map(|u| super::units::log_vector(fld, u).iter().fold(0.0f64, |m, x| m.max(x.abs())))
        .sum();
    let nf = rat_to_f64(&Rat::from_integer(target.clone()));
    let base = n as f64 * nf.powf(2.0 / n as f64);
    let bmax = base * c.exp() * (1.0 + 1e-6) + 1e-6;
    let mut bound = base * 1.0001;
    loop {
        let b = bound.min(bmax);
        let vecs = short_vectors(&gram, b, DEFAULT_ENUMERATION_LIMIT)
            .map_err(|_| Error::ClassGroupBound(format!("principal test exceeded {} vectors", DEFAULT_ENUMERATION_LIMIT)))?;
        for (_, x) in vecs {
            let mut v = vec![Int::zero(); n];
            for (xi, row) in x.iter().zip(&basis) {
                if *xi != 0 {
                    for (o, r) in v.iter_mut().zip(row) {
                        *o += Int::from(*xi) * r;
                    }
                }
            }
            let cand = FieldElement(v.into_iter().map(|c| Rat::new(c, d.clone())).collect());
            let approx: f64 = fld.embeddings(&cand).iter().product::<f64>().abs();
            let want = rat_to_f64(&i.norm());
            if (approx - want).abs() > 1e-6 * want.max(1.0) {
                continue;
            }
            if fld.norm(&cand).abs() == i.norm() {
                return Ok(Some(cand));
            }
        }
        if b >= bmax {
            return Ok(None);
        }
        bound *= 2.0;
    }
}

/// Totally positive generator of `i`, if `i` is narrowly principal.
pub fn totally_positive_generator(fld: &NumberField, ug: &UnitGroup, i: &FracIdeal) -> Result<Option<FieldElement>> {
    generator_with_sign(fld, ug, i, &SignVector(vec![1; fld.degree]))
}

/// Generator of `i` with the prescribed sign vector, if one exists.
pub fn generator_with_sign(fld: &NumberField, ug: &UnitGroup, i: &FracIdeal, target: &SignVector) -> Result<Option<FieldElement>> {
    let Some(a) = principal_generator(fld, ug, i)? else { return Ok(None) };
    let s = fld.sign_vector(&a)?;
    let need = s.mul(target);
    Ok(ug.unit_with_sign(fld, &need).map(|u| fld.mul(&a, &u)))
}

/// Small integral element with a prescribed sign vector.
pub fn element_with_sign(fld: &NumberField, target: &SignVector) -> Result<FieldElement> {
    let n = fld.degree;
    let gram = trace_gram(fld);
    let mut bound = 2.0 * n as f64;
    for _ in 0..40 {
        if let Ok(vecs) = short_vectors(&gram, bound, DEFAULT_ENUMERATION_LIMIT) {
            for (_, c) in vecs {
                let x = fld.from_coords_i64(&c);
                for y in [x.clone(), fld.neg(&x)] {
                    if &fld.sign_vector(&y)? == target {
                        return Ok(y);
                    }
                }
            }
        }
        bound *= 2.0;
    }
    Err(Error::ClassGroupBound(format!("no element with sign {target}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct StrictClassGroup {
    pub order: usize,
    /// Integral representatives; the first is the unit ideal.
    #[serde(skip)]
    pub representatives: Vec<FracIdeal>,
    /// `table[i][j]` is the index of the class of `rep_i * rep_j`.
    pub table: Vec<Vec<usize>>,
    /// Order of the (wide) class group.
    pub class_number: usize,
    /// Whether equivalence is up to totally positive principal ideals.
    pub narrow: bool,
}

impl StrictClassGroup {
    pub fn discrete_log(&self, fld: &NumberField, ug: &UnitGroup, i: &FracIdeal) -> Result<usize> {
        for (k, r) in self.representatives.iter().enumerate() {
            if equivalent(fld, ug, i, r, self.narrow)? {
                return Ok(k);
            }
        }
        Err(Error::ClassGroupBound("ideal not equivalent to any representative".into()))
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        (0..self.order).find(|&j| self.table[i][j] == 0).unwrap()
    }
}

fn equivalent(fld: &NumberField, ug: &UnitGroup, a: &FracIdeal, b: &FracIdeal, narrow: bool) -> Result<bool> {
    let q = a.div(fld, b);
    if narrow {
        Ok(totally_positive_generator(fld, ug, &q)?.is_some())
    } else {
        Ok(principal_generator(fld, ug, &q)?.is_some())
    }
}

fn minkowski_bound(fld: &NumberField) -> f64 {
    let n = fld.degree as f64;
    let mut fact = 1.0;
    for k in 1..=fld.degree {
        fact *= k as f64;
    }
    fact / n.powf(n) * rat_to_f64(&Rat::from_integer(fld.disc.abs())).sqrt()
}

/// Integral ideals with norm at most `bound` coprime to `avoid`, ordered by
/// norm then by basis.
fn small_ideals(fld: &NumberField, bound: u64, avoid: &FracIdeal) -> Result<Vec<FracIdeal>> {
    let primes: Vec<PrimeIdeal> = primes_up_to(fld, bound)?.into_iter().filter(|p| p.ideal.is_coprime(avoid)).collect();
    let mut out = vec![(1u64, FracIdeal::unit(fld))];
    fn rec(fld: &NumberField, primes: &[PrimeIdeal], start: usize, cur: &FracIdeal, norm: u64, bound: u64, out: &mut Vec<(u64, FracIdeal)>) {
        for k in start..primes.len() {
            let nn = norm * primes[k].norm();
            if nn > bound {
                continue;
            }
            let next = cur.mul(fld, &primes[k].ideal);
            out.push((nn, next.clone()));
            rec(fld, primes, k, &next, nn, bound, out);
        }
    }
    rec(fld, &primes, 0, &FracIdeal::unit(fld), 1, bound, &mut out);
    out.sort_by(|a, b| (a.0, &a.1.lattice.basis).cmp(&(b.0, &b.1.lattice.basis)));
    out.dedup_by(|a, b| a.1 == b.1);
    Ok(out.into_iter().map(|(_, i)| i).collect())
}

/// Class group (`narrow = false`) or strict class group (`narrow = true`)
/// with representatives of smallest norm coprime to `avoid`.
pub fn class_group(fld: &NumberField, ug: &UnitGroup, narrow: bool, avoid: &FracIdeal) -> Result<StrictClassGroup> {
    let n = fld.degree;
    let mk = minkowski_bound(fld).floor() as u64;
    let mut gens: Vec<FracIdeal> = primes_up_to(fld, mk.max(1))?.into_iter().map(|p| p.ideal).collect();
    if narrow {
        for mask in 0..(1u32 << n) {
            let s = SignVector((0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect());
            if ug.unit_with_sign(fld, &s).is_none() {
                let a = element_with_sign(fld, &s)?;
                gens.push(FracIdeal::principal(fld, &a));
            }
        }
    }
    // orbit enumeration of the subgroup generated by `gens`
    let mut reps = vec![FracIdeal::unit(fld)];
    let mut frontier = 0;
    while frontier < reps.len() {
        let r = reps[frontier].clone();
        for g in &gens {
            let p = r.mul(fld, g);
            let mut known = false;
            for q in &reps {
                if equivalent(fld, ug, &p, q, narrow)? {
                    known = true;
                    break;
                }
            }
            if !known {
                if reps.len() > 4096 {
                    return Err(Error::ClassGroupBound("more than 4096 classes".into()));
                }
                reps.push(p);
            }
        }
        frontier += 1;
    }
    let h = reps.len();
    // choose small integral representatives coprime to `avoid`
    let mut chosen: Vec<Option<FracIdeal>> = vec![None; h];
    chosen[0] = Some(FracIdeal::unit(fld));
    let mut bound = 16u64;
    while chosen.iter().any(|c| c.is_none()) {
        for i in small_ideals(fld, bound, avoid)? {
            if chosen.iter().all(|c| c.is_some()) {
                break;
            }
            for (k, r) in reps.iter().enumerate() {
                if equivalent(fld, ug, &i, r, narrow)? {
                    if chosen[k].is_none() {
                        chosen[k] = Some(i.clone());
                    }
                    break;
                }
            }
        }
        bound *= 4;
        if bound > 1 << 20 {
            return Err(Error::ClassGroupBound("no small representative coprime to the avoided ideal".into()));
        }
    }
    let mut representatives: Vec<FracIdeal> = chosen.into_iter().map(|c| c.unwrap()).collect();
    // order classes: identity first, then by norm of representative
    let first = representatives.remove(0);
    representatives.sort_by(|a, b| (a.norm(), &a.lattice.basis).cmp(&(b.norm(), &b.lattice.basis)));
    representatives.insert(0, first);
    let mut cg = StrictClassGroup { order: h, representatives, table: Vec::new(), class_number: 0, narrow };
    let mut table = vec![vec![0; h]; h];
    for a in 0..h {
        for b in 0..h {
            let p = cg.representatives[a].mul(fld, &cg.representatives[b]);
            table[a][b] = cg.discrete_log(fld, ug, &p)?;
        }
    }
    cg.table = table;
    Ok(cg)
}

/// Strict class group; also records the wide class number and checks
/// `#Cl+ = #Cl * 2^n / #sign(units)`.
pub fn strict_class_group(fld: &NumberField, ug: &UnitGroup, avoid: &FracIdeal) -> Result<StrictClassGroup> {
    let wide = class_group(fld, ug, false, avoid)?;
    let mut strict = class_group(fld, ug, true, avoid)?;
    strict.class_number = wide.order;
    let expected = wide.order * (1 << fld.degree) / ug.sign_image(fld).len();
    if expected != strict.order {
        return Err(Error::ClassGroupBound(format!(
            "exact sequence check failed: #Cl+={} but #Cl*2^n/#signs={}",
            strict.order, expected
        )));
    }
    Ok(strict)
}

/// Index of the class generating the kernel of `Cl+ -> Cl^(+)`, where the
/// modulus consists of all real places except `split_place`.
pub fn ray_kernel_class(fld: &NumberField, ug: &UnitGroup, cg: &StrictClassGroup, split_place: usize) -> Result<usize> {
    let s = SignVector((0..fld.degree).map(|i| if i == split_place { -1 } else { 1 }).collect());
    if ug.unit_with_sign(fld, &s).is_some() {
        return Ok(0);
    }
    let a = element_with_sign(fld, &s)?;
    cg.discrete_log(fld, ug, &FracIdeal::principal(fld, &a))
}

/// Element negative at `split_place` and positive elsewhere, preferring a unit.
pub fn ray_kernel_witness(fld: &NumberField, ug: &UnitGroup, split_place: usize) -> Result<FieldElement> {
    let s = SignVector((0..fld.degree).map(|i| if i == split_place { -1 } else { 1 }).collect());
    match ug.unit_with_sign(fld, &s) {
        Some(u) => Ok(u),
        None => element_with_sign(fld, &s),
    }
}

#[cfg(test)]
mod tests {
    use super::super::primes::factor_rational_prime;
    use super::super::units::unit_group;
    use super::*;

    fn cubic() -> NumberField {
        NumberField::with_options(&[-11, -11, 0, 1].map(Int::from), Some(vec![2, 1, 0]), 128).unwrap()
    }

    #[test]
    fn cubic_strict_class_group() {
        let fld = cubic();
        let ug = unit_group(&fld).unwrap();
        let p3 = factor_rational_prime(&fld, 3).unwrap()[0].ideal.clone();
        let cg = strict_class_group(&fld, &ug, &p3).unwrap();
        assert_eq!(cg.order, 2);
        assert_eq!(cg.class_number, 1);
        let b = FracIdeal::principal(&fld, &fld.parse_element("w^2-2w-6", "w").unwrap());
        assert_eq!(cg.representatives[1], b);
        assert_eq!(cg.discrete_log(&fld, &ug, &p3).unwrap(), 1);
        assert_eq!(cg.table, vec![vec![0, 1], vec![1, 0]]);
        // kernel of Cl+ -> Cl^(+) is trivial, witnessed by -(w+1)
        assert_eq!(ray_kernel_class(&fld, &ug, &cg, 0).unwrap(), 0);
        let u = ray_kernel_witness(&fld, &ug, 0).unwrap();
        assert_eq!(fld.sign_vector(&u).unwrap(), SignVector(vec![-1, 1, 1]));
    }

    #[test]
    fn quadratic_class_groups() {
        let f65 = NumberField::new(&[-65, 0, 1]).unwrap();
        let ug = unit_group(&f65).unwrap();
        let cg = strict_class_group(&f65, &ug, &FracIdeal::unit(&f65)).unwrap();
        assert_eq!((cg.class_number, cg.order), (2, 2));
        let f5 = NumberField::new(&[-5, 0, 1]).unwrap();
        let ug5 = unit_group(&f5).unwrap();
        let cg5 = strict_class_group(&f5, &ug5, &FracIdeal::unit(&f5)).unwrap();
        assert_eq!(cg5.order, 1);
        // Q(sqrt 3): units all have norm +1, so Cl+ has order 2 while Cl is trivial
        let f3 = NumberField::new(&[-3, 0, 1]).unwrap();
        let ug3 = unit_group(&f3).unwrap();
        let cg3 = strict_class_group(&f3, &ug3, &FracIdeal::unit(&f3)).unwrap();
        assert_eq!((cg3.class_number, cg3.order), (1, 2));
        assert_eq!(ray_kernel_class(&f3, &ug3, &cg3, 0).unwrap(), 1);
    }
}
