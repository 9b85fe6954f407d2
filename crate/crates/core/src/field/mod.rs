//! Totally real number fields: elements, real places, ideals, primes, units
//! and (strict) class groups.

pub mod classgroup;
pub mod ideal;
pub mod p1;
pub mod primes;
pub mod units;

pub use primes::{factor_rational_prime, PrimeIdeal};
pub use units::{unit_group, UnitGroup};
pub use classgroup::{ray_kernel_class, strict_class_group, StrictClassGroup};

use crate::arith::lattice::Lattice;
use crate::arith::matrix::{char_poly, determinant, inverse, Matrix};
use crate::arith::poly::{self, isolate_real_roots, QPoly};
use crate::arith::ring::{common_denominator, rat_to_f64, Field, Int, Rat, Rationals};
use crate::arith::zfactor::is_irreducible;
use crate::error::{Error, Result};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;


pub use ideal::FracIdeal;



/// Element of a number field, as rational coordinates over the integral basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement(pub Vec<Rat>);

impl FieldElement {
    pub fn coords(&self) -> &[Rat] {
        &self.0
    }
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }
    pub fn denominator(&self) -> Int {
        common_denominator(self.0.iter())
    }
}

/// Entries `+1`/`-1` indexed by the ordered real places.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn mul(&self, other: &SignVector) -> SignVector {
        SignVector(self.0.iter().zip(&other.0).map(|(a, b)| a * b).collect())
    }
    pub fn is_totally_positive(&self) -> bool {
        self.0.iter().all(|&s| s > 0)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const MAX_PRECISION_BITS: u32 = 1024;

#[derive(Clone, Debug)]
pub struct NumberField {
    /// Monic defining polynomial, ascending coefficients.
    pub defining_poly: Vec<Int>,
    pub degree: usize,
    /// Integral basis in power-basis coordinates; the first element is 1.
    pub integral_basis: Vec<QPoly>,
    /// Row `k` holds the integral-basis coordinates of `x^k`.
    power_to_basis: Matrix<Rat>,
    mul_table: Vec<Vec<Vec<Int>>>,
    pub disc: Int,
    /// Isolating intervals of the real roots, ascending.
    root_intervals: Vec<(Rat, Rat)>,
    /// Root approximations, ascending.
    pub real_roots: Vec<f64>,
    /// `places[i]` is the index (in ascending order) of the root defining `v_{i+1}`.
    pub places: Vec<usize>,
    /// `basis_embeddings[i][j]` is `v_{i+1}(b_j)`.
    basis_embeddings: Vec<Vec<f64>>,
    basis_traces: Vec<Int>,
    pub precision_bits: u32,
}

fn mult_matrix_power(f: &[Rat], a: &[Rat]) -> Matrix<Rat> {
    // column k: coordinates of a * x^k reduced mod f
    let n = f.len() - 1;
    let mut cur: QPoly = a.to_vec();
    let mut cols = Vec::with_capacity(n);
    for _ in 0..n {
        let r = poly::rem(&cur, f);
        let mut col = r.clone();
        col.resize(n, Rat::zero());
        cols.push(col);
        let mut s = vec![Rat::zero()];
        s.extend(r);
        cur = s;
    }
    Matrix::from_fn(n, n, |i, j| cols[j][i].clone())
}

fn is_algebraic_integer(f: &[Rat], a: &[Rat]) -> bool {
    let m = mult_matrix_power(f, a);
    let tr: Rat = (0..m.rows).map(|i| m.get(i, i).clone()).sum();
    if !tr.is_integer() {
        return false;
    }
    char_poly(&Rationals, &m).iter().all(|c| c.is_integer())
}

const MAX_SATURATION_CANDIDATES: u64 = 2_000_000;

/// p-maximal overorder of the order spanned (in power coordinates) by `order`.
fn saturate_at(f: &[Rat], mut order: Lattice, p: u64) -> Result<Lattice> {
    let n = f.len() - 1;
    let count = (p as u128).pow(n as u32);
    if count > MAX_SATURATION_CANDIDATES as u128 {
        return Err(Error::Unsupported(format!("maximal order saturation at p={p} in degree {n}")));
    }
    let pr = Rat::from_integer(Int::from(p));
    loop {
        let basis = order.basis_rat();
        let mut found = Vec::new();
        let mut digits = vec![0u64; n];
        loop {
            let mut k = 0;
            while k < n {
                digits[k] += 1;
                if digits[k] < p {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
            let mut x = vec![Rat::zero(); n];
            for (d, b) in digits.iter().zip(&basis) {
                if *d != 0 {
                    for (xi, bi) in x.iter_mut().zip(b) {
                        *xi += bi * Rat::from_integer(Int::from(*d));
                    }
                }
            }
            let x: Vec<Rat> = x.into_iter().map(|c| c / &pr).collect();
            if !order.contains(&x) && is_algebraic_integer(f, &x) {
                found.push(x);
            }
        }
        if found.is_empty() {
            return Ok(order);
        }
        let mut gens = basis.clone();
        gens.extend(found);
        order = Lattice::from_generators(n, &gens).unwrap();
        // ring closure
        loop {
            let b = order.basis_rat();
            let mut gens = b.clone();
            for i in 0..n {
                for j in i..n {
                    let mut prod = poly::rem(&poly::mul(&b[i], &b[j]), f);
                    prod.resize(n, Rat::zero());
                    gens.push(prod);
                }
            }
            let next = Lattice::from_generators(n, &gens).unwrap();
            if next == order {
                break;
            }
            order = next;
        }
    }
}

impl NumberField {
    /// Builds the field `Q[x]/(poly)` with places labeled by ascending roots.
    pub fn new(poly: &[i64]) -> Result<NumberField> {
        Self::with_options(&poly.iter().map(|&c| Int::from(c)).collect::<Vec<_>>(), None, DEFAULT_PRECISION_BITS)
    }

    /// Builds the field with an explicit place labeling: `places[i]` is the
    /// ascending index of the root defining place `v_{i+1}`.
    pub fn with_options(poly: &[Int], places: Option<Vec<usize>>, precision_bits: u32) -> Result<NumberField> {
        let n = poly.len() - 1;
        if n == 0 || !poly[n].is_one() {
            return Err(Error::Unsupported("defining polynomial must be monic of positive degree".into()));
        }
        let f: QPoly = poly::from_bigints(poly);
        if !is_irreducible(&f) {
            return Err(Error::ReduciblePolynomial);
        }
        let width = Rat::new(Int::one(), Int::one() << precision_bits.min(MAX_PRECISION_BITS));
        let roots = isolate_real_roots(&f, &width);
        if roots.len() != n {
            return Err(Error::NotTotallyReal { real: roots.len(), degree: n });
        }
        let places = match places {
            Some(p) => {
                let mut s = p.clone();
                s.sort();
                if s != (0..n).collect::<Vec<_>>() {
                    return Err(Error::Config(format!("place permutation {p:?} is not a permutation of 0..{n}")));
                }
                p
            }
            None => (0..n).collect(),
        };
        // maximal order
        let disc_poly = poly::discriminant(&f).to_integer();
        let mut order = Lattice::standard(n);
        for (p, e) in crate::arith::intfactor::factor_int(&disc_poly) {
            if e >= 2 {
                let p = p.to_u64().ok_or_else(|| Error::Unsupported("huge prime in discriminant".into()))?;
                order = saturate_at(&f, order, p)?;
            }
        }
        let integral_basis = integral_basis_from(&order, n);
        let b2p = Matrix::from_rows(integral_basis.clone());
        let p2b = inverse(&Rationals, &b2p).expect("integral basis is a basis");
        let mut mul_table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut prod = poly::rem(&poly::mul(&integral_basis[i], &integral_basis[j]), &f);
                prod.resize(n, Rat::zero());
                let c = row_times(&prod, &p2b);
                mul_table[i][j] = c.iter().map(|x| {
                    assert!(x.is_integer(), "integral basis not closed under multiplication");
                    x.to_integer()
                }).collect();
            }
        }
        let real_roots: Vec<f64> = roots.iter().map(|(lo, hi)| rat_to_f64(&((lo + hi) / Rat::from_integer(Int::from(2))))).collect();
        let basis_embeddings = places
            .iter()
            .map(|&r| integral_basis.iter().map(|b| poly::eval_f64(b, real_roots[r])).collect())
            .collect();
        let mut nf = NumberField {
            defining_poly: poly.to_vec(),
            degree: n,
            integral_basis,
            power_to_basis: p2b,
            mul_table,
            disc: Int::zero(),
            root_intervals: roots,
            real_roots,
            places,
            basis_embeddings,
            basis_traces: Vec::new(),
            precision_bits,
        };
        nf.basis_traces = (0..n).map(|i| nf.trace(&nf.basis_element(i)).to_integer()).collect();
        let tr = Matrix::from_fn(n, n, |i, j| Rat::from_integer(nf.trace_int_pair(i, j)));
        nf.disc = determinant(&Rationals, &tr).to_integer();
        Ok(nf)
    }

    fn trace_int_pair(&self, i: usize, j: usize) -> Int {
        self.mul_table[i][j].iter().zip(&self.basis_traces).map(|(c, t)| c * t).sum()
    }

    pub fn defining_poly_q(&self) -> QPoly {
        poly::from_bigints(&self.defining_poly)
    }

    pub fn basis_element(&self, i: usize) -> FieldElement {
        let mut c = vec![Rat::zero(); self.degree];
        c[i] = Rat::one();
        FieldElement(c)
    }

    /// The generator `x` of the defining polynomial.
    pub fn generator(&self) -> FieldElement {
        let mut p = vec![Rat::zero(); self.degree];
        if self.degree > 1 {
            p[1] = Rat::one();
        } else {
            p[0] = -Rat::from_integer(self.defining_poly[0].clone());
        }
        self.from_power_coords(&p)
    }

    pub fn from_int(&self, n: &Int) -> FieldElement {
        self.from_rat(&Rat::from_integer(n.clone()))
    }

    pub fn from_rat(&self, r: &Rat) -> FieldElement {
        let mut c = vec![Rat::zero(); self.degree];
        c[0] = r.clone();
        FieldElement(c)
    }

    /// Element given by a polynomial in the generator (ascending coefficients).
    pub fn from_power_coords(&self, p: &[Rat]) -> FieldElement {
        let mut r = poly::rem(p, &self.defining_poly_q());
        r.resize(self.degree, Rat::zero());
        FieldElement(row_times(&r, &self.power_to_basis))
    }

    pub fn from_poly_i64(&self, p: &[i64]) -> FieldElement {
        self.from_power_coords(&poly::from_ints(p))
    }

    pub fn from_coords_i64(&self, c: &[i64]) -> FieldElement {
        FieldElement(c.iter().map(|&x| Rat::from_integer(Int::from(x))).collect())
    }

    pub fn to_power_coords(&self, a: &FieldElement) -> QPoly {
        let mut out = vec![Rat::zero(); self.degree];
        for (c, b) in a.0.iter().zip(&self.integral_basis) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        out
    }

    /// Multiplication matrix of `a` acting on integral-basis coordinates
    /// (column `j` is `a * b_j`).
    pub fn mult_matrix(&self, a: &FieldElement) -> Matrix<Rat> {
        let n = self.degree;
        let cols: Vec<Vec<Rat>> = (0..n).map(|j| self.mul(a, &self.basis_element(j)).0).collect();
        Matrix::from_fn(n, n, |i, j| cols[j][i].clone())
    }

    pub fn trace(&self, a: &FieldElement) -> Rat {
        if self.basis_traces.len() == self.degree {
            return a.0.iter().zip(&self.basis_traces).map(|(c, t)| c * Rat::from_integer(t.clone())).sum();
        }
        let m = self.mult_matrix(a);
        (0..self.degree).map(|i| m.get(i, i).clone()).sum()
    }

    pub fn norm(&self, a: &FieldElement) -> Rat {
        determinant(&Rationals, &self.mult_matrix(a))
    }

    pub fn char_poly(&self, a: &FieldElement) -> QPoly {
        char_poly(&Rationals, &self.mult_matrix(a))
    }

    /// Approximate value of `a` at place `v_{i+1}`.
    pub fn embed(&self, a: &FieldElement, place: usize) -> f64 {
        a.0.iter().zip(&self.basis_embeddings[place]).map(|(c, e)| rat_to_f64(c) * e).sum()
    }

    pub fn embeddings(&self, a: &FieldElement) -> Vec<f64> {
        (0..self.degree).map(|i| self.embed(a, i)).collect()
    }

    /// Certified sign of `a` at place `v_{i+1}`.
    pub fn sign_at(&self, a: &FieldElement, place: usize) -> Result<i8> {
        if self.is_zero(a) {
            return Err(Error::SignUncertain { bits: self.precision_bits });
        }
        let terms: Vec<f64> = a.0.iter().zip(&self.basis_embeddings[place]).map(|(c, e)| rat_to_f64(c) * e).collect();
        let v: f64 = terms.iter().sum();
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        if v.is_finite() && v.abs() > 1e-9 * scale.max(1e-300) {
            return Ok(if v > 0.0 { 1 } else { -1 });
        }
        self.sign_exact(a, place)
    }

    fn sign_exact(&self, a: &FieldElement, place: usize) -> Result<i8> {
        let p = self.to_power_coords(a);
        let f = self.defining_poly_q();
        let mut iv = self.root_intervals[self.places[place]].clone();
        let cap = Rat::new(Int::one(), Int::one() << MAX_PRECISION_BITS);
        loop {
            let (lo, hi) = interval_eval(&p, &iv.0, &iv.1);
            if lo.is_positive() {
                return Ok(1);
            }
            if hi.is_negative() {
                return Ok(-1);
            }
            if &iv.1 - &iv.0 < cap {
                let bits = MAX_PRECISION_BITS;
                return Err(Error::SignUncertain { bits });
            }
            iv = poly::refine_root(&f, &iv);
        }
    }

    pub fn sign_vector(&self, a: &FieldElement) -> Result<SignVector> {
        (0..self.degree).map(|i| self.sign_at(a, i)).collect::<Result<Vec<_>>>().map(SignVector)
    }

    pub fn is_totally_positive(&self, a: &FieldElement) -> Result<bool> {
        Ok(self.sign_vector(a)?.is_totally_positive())
    }

    /// Multiplies integral coordinate vectors.
    pub fn mul_int(&self, a: &[Int], b: &[Int]) -> Vec<Int> {
        let n = self.degree;
        let mut out = vec![Int::zero(); n];
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                let c = &a[i] * &b[j];
                for (o, t) in out.iter_mut().zip(&self.mul_table[i][j]) {
                    if !t.is_zero() {
                        *o += &c * t;
                    }
                }
            }
        }
        out
    }

    pub fn format_element(&self, a: &FieldElement, var: &str) -> String {
        poly::format_poly(&self.to_power_coords(a), var)
    }

    /// Parses a polynomial expression in `var` with integer or rational
    /// coefficients, e.g. `-w^2+2w+12` or `1/2+1/2*w`.
    pub fn parse_element(&self, s: &str, var: &str) -> Result<FieldElement> {
        let p = parse_poly(s, var).ok_or_else(|| Error::Config(format!("cannot parse field element '{s}'")))?;
        Ok(self.from_power_coords(&p))
    }
}

fn row_times(v: &[Rat], m: &Matrix<Rat>) -> Vec<Rat> {
    (0..m.cols)
        .map(|j| v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| x * m.get(i, j)).sum())
        .collect()
}

/// Lower triangular basis (degree `k` for the `k`-th element) of an order given
/// in power coordinates.
fn integral_basis_from(order: &Lattice, n: usize) -> Vec<QPoly> {
    let rev: Vec<Vec<Rat>> = order.basis_rat().into_iter().map(|r| r.into_iter().rev().collect()).collect();
    let l = Lattice::from_generators(n, &rev).unwrap();
    let mut rows: Vec<QPoly> = l.basis_rat().into_iter().map(|r| r.into_iter().rev().collect()).collect();
    rows.reverse();
    rows
}

fn interval_eval(p: &[Rat], lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut a = Rat::zero();
    let mut b = Rat::zero();
    for c in p.iter().rev() {
        let cands = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mn = cands.iter().min().unwrap().clone();
        let mx = cands.iter().max().unwrap().clone();
        a = mn + c;
        b = mx + c;
    }
    (a, b)
}

/// Parses sums of terms `c`, `c*x`, `cx^k`, `x^k` with rational `c`.
pub fn parse_poly(s: &str, var: &str) -> Option<QPoly> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in s.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    let mut out: QPoly = Vec::new();
    for t in terms {
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b.to_string()),
            None => (false, t.trim_start_matches('+').to_string()),
        };
        let (coef, deg) = match body.find(var) {
            None => (parse_rat(&body)?, 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let coef = if c.is_empty() { Rat::one() } else { parse_rat(c)? };
                let rest = &body[pos + var.len()..];
                let deg = if rest.is_empty() { 1 } else { rest.strip_prefix('^')?.parse().ok()? };
                (coef, deg)
            }
        };
        if out.len() <= deg {
            out.resize(deg + 1, Rat::zero());
        }
        out[deg] += if neg { -coef } else { coef };
    }
    Some(poly::trimmed(out))
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        Some((a, b)) => {
            let d: Int = b.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(a.parse().ok()?, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

impl Field for NumberField {
    type El = FieldElement;
    fn zero(&self) -> FieldElement {
        FieldElement(vec![Rat::zero(); self.degree])
    }
    fn one(&self) -> FieldElement {
        self.from_rat(&Rat::one())
    }
    fn is_zero(&self, a: &FieldElement) -> bool {
        a.0.iter().all(|c| c.is_zero())
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let da = a.denominator();
        let db = b.denominator();
        let ia: Vec<Int> = a.0.iter().map(|c| (c * Rat::from_integer(da.clone())).to_integer()).collect();
        let ib: Vec<Int> = b.0.iter().map(|c| (c * Rat::from_integer(db.clone())).to_integer()).collect();
        let prod = self.mul_int(&ia, &ib);
        let d = da * db;
        FieldElement(prod.into_iter().map(|c| Rat::new(c, d.clone())).collect())
    }
    fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().map(|x| -x).collect())
    }
    fn inv(&self, a: &FieldElement) -> FieldElement {
        assert!(!self.is_zero(a), "inverse of zero field element");
        let m = self.mult_matrix(a);
        let mut e = vec![Rat::zero(); self.degree];
        e[0] = Rat::one();
        FieldElement(crate::arith::matrix::solve(&Rationals, &m, &e).expect("nonzero element is invertible"))
    }
    fn from_i64(&self, n: i64) -> FieldElement {
        self.from_int(&Int::from(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_field_basics() {
        let f = NumberField::new(&[-11, -11, 0, 1]).unwrap();
        assert_eq!(f.disc, Int::from(2057));
        let trimmed: Vec<QPoly> = f.integral_basis.iter().map(|b| poly::trimmed(b.clone())).collect();
        assert_eq!(trimmed, vec![poly::from_ints(&[1]), poly::from_ints(&[0, 1]), poly::from_ints(&[0, 0, 1])]);
        let w = f.generator();
        let w1 = f.add(&w, &f.one());
        assert_eq!(f.norm(&w1), Rat::from_integer(Int::from(1)));
        // ascending labeling
        assert_eq!(f.sign_vector(&w1).unwrap(), SignVector(vec![-1, -1, 1]));
        let g = NumberField::with_options(&f.defining_poly, Some(vec![2, 1, 0]), 128).unwrap();
        assert_eq!(g.sign_vector(&g.parse_element("w+1", "w").unwrap()).unwrap(), SignVector(vec![1, -1, -1]));
        assert_eq!(g.sign_vector(&g.parse_element("-w^2+2w+6", "w").unwrap()).unwrap(), SignVector(vec![-1, 1, -1]));
        assert_eq!(g.sign_vector(&g.one()).unwrap(), SignVector(vec![1, 1, 1]));
    }

    #[test]
    fn quadratic_integral_bases() {
        let f = NumberField::new(&[-5, 0, 1]).unwrap();
        assert_eq!(f.disc, Int::from(5));
        assert_eq!(f.integral_basis[1], vec![Rat::new(1.into(), 2.into()), Rat::new(1.into(), 2.into())]);
        let g = NumberField::new(&[-65, 0, 1]).unwrap();
        assert_eq!(g.disc, Int::from(65));
        let h = NumberField::new(&[-2, 0, 1]).unwrap();
        assert_eq!(h.disc, Int::from(8));
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(matches!(NumberField::new(&[-4, 0, 1]), Err(Error::ReduciblePolynomial)));
        assert!(matches!(NumberField::new(&[1, 0, 1]), Err(Error::NotTotallyReal { .. })));
    }

    #[test]
    fn inverse_and_parse() {
        let f = NumberField::new(&[-11, -11, 0, 1]).unwrap();
        let a = f.parse_element("w^2-2w-6", "w").unwrap();
        let ai = f.inv(&a);
        assert_eq!(f.mul(&a, &ai), f.one());
        assert_eq!(f.format_element(&a, "w"), "w^2-2w-6");
        assert_eq!(f.norm(&a), Rat::from_integer(Int::from(-7)));
    }
}
