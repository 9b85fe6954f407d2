//! Quaternion algebras `(a, b | F)` over a totally real field: elements,
//! ramification, orders, ideals, splittings and principalization.

pub mod hilbert;
pub mod lattice;
pub mod principal;
pub mod splitting;

use crate::arith::ring::{common_denominator, rat_to_f64, Field, Int, Rat};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FracIdeal, NumberField, PrimeIdeal};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use lattice::QuatLattice;

/// Element of `B` as integer numerators over a common positive denominator,
/// coordinates indexed `l * n + k` for the component `l` in `1, i, j, ij`
/// and the `k`-th integral basis element of `F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuatElement {
    pub num: Vec<Int>,
    pub den: Int,
}

impl QuatElement {
    pub fn new(mut num: Vec<Int>, mut den: Int) -> QuatElement {
        assert!(!den.is_zero());
        if den.is_negative() {
            den = -den;
            for x in num.iter_mut() {
                *x = -x.clone();
            }
        }
        let mut g = den.clone();
        for x in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(x);
        }
        if !g.is_one() {
            for x in num.iter_mut() {
                *x = &*x / &g;
            }
            den /= &g;
        }
        QuatElement { num, den }
    }

    pub fn from_rats(c: &[Rat]) -> QuatElement {
        let d = common_denominator(c.iter());
        let num = c.iter().map(|x| (x * Rat::from_integer(d.clone())).to_integer()).collect();
        QuatElement::new(num, d)
    }

    pub fn to_rats(&self) -> Vec<Rat> {
        self.num.iter().map(|x| Rat::new(x.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|x| x.is_zero())
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }
}

#[derive(Clone, Debug)]
pub struct QuatAlgebra {
    pub field: NumberField,
    pub a: FieldElement,
    pub b: FieldElement,
    /// Real places (indices into the field's place list) where `B` ramifies.
    pub ramified_real: Vec<usize>,
    pub split_place: usize,
    a_int: Vec<Int>,
    b_int: Vec<Int>,
    ab_int: Vec<Int>,
}

fn to_int_vec(x: &FieldElement) -> Option<Vec<Int>> {
    if x.is_integral() {
        Some(x.0.iter().map(|c| c.to_integer()).collect())
    } else {
        None
    }
}

impl QuatAlgebra {
    /// The algebra `(a, b | F)`; requires integral `a, b` and exactly one split
    /// real place.
    pub fn new(field: NumberField, a: FieldElement, b: FieldElement) -> Result<QuatAlgebra> {
        if field.is_zero(&a) || field.is_zero(&b) {
            return Err(Error::Config("quaternion parameters must be nonzero".into()));
        }
        let (Some(a_int), Some(b_int)) = (to_int_vec(&a), to_int_vec(&b)) else {
            return Err(Error::Config("quaternion parameters must be integral".into()));
        };
        let sa = field.sign_vector(&a)?;
        let sb = field.sign_vector(&b)?;
        let ramified_real: Vec<usize> = (0..field.degree).filter(|&i| sa.0[i] < 0 && sb.0[i] < 0).collect();
        let split: Vec<usize> = (0..field.degree).filter(|i| !ramified_real.contains(i)).collect();
        if split.len() != 1 {
            return Err(Error::Config(format!("algebra must be split at exactly one real place, found {}", split.len())));
        }
        let ab_int = field.mul_int(&a_int, &b_int);
        Ok(QuatAlgebra { split_place: split[0], field, a, b, ramified_real, a_int, b_int, ab_int })
    }

    pub fn n(&self) -> usize {
        self.field.degree
    }

    /// Dimension over Q.
    pub fn dim(&self) -> usize {
        4 * self.field.degree
    }

    pub fn zero(&self) -> QuatElement {
        QuatElement { num: vec![Int::zero(); self.dim()], den: Int::one() }
    }

    pub fn one(&self) -> QuatElement {
        self.scalar(&self.field.one())
    }

    /// Basis element `e_l` (`l` = 0..3 for `1, i, j, ij`).
    pub fn unit_vector(&self, l: usize) -> QuatElement {
        let mut c = vec![self.field.zero(); 4];
        c[l] = self.field.one();
        self.from_components(&c)
    }

    pub fn scalar(&self, x: &FieldElement) -> QuatElement {
        let z = self.field.zero();
        self.from_components(&[x.clone(), z.clone(), z.clone(), z])
    }

    pub fn from_components(&self, c: &[FieldElement]) -> QuatElement {
        assert_eq!(c.len(), 4);
        let mut r = Vec::with_capacity(self.dim());
        for x in c {
            r.extend(x.0.iter().cloned());
        }
        QuatElement::from_rats(&r)
    }

    pub fn components(&self, x: &QuatElement) -> [FieldElement; 4] {
        let n = self.n();
        let r = x.to_rats();
        [0, 1, 2, 3].map(|l| FieldElement(r[l * n..(l + 1) * n].to_vec()))
    }

    fn comp_int<'a>(&self, x: &'a QuatElement, l: usize) -> &'a [Int] {
        let n = self.n();
        &x.num[l * n..(l + 1) * n]
    }

    pub fn add(&self, x: &QuatElement, y: &QuatElement) -> QuatElement {
        let d = &x.den * &y.den;
        let num = x.num.iter().zip(&y.num).map(|(a, b)| a * &y.den + b * &x.den).collect();
        QuatElement::new(num, d)
    }

    pub fn sub(&self, x: &QuatElement, y: &QuatElement) -> QuatElement {
        self.add(x, &self.neg(y))
    }

    pub fn neg(&self, x: &QuatElement) -> QuatElement {
        QuatElement { num: x.num.iter().map(|a| -a).collect(), den: x.den.clone() }
    }

    pub fn scale_int(&self, x: &QuatElement, c: &Int) -> QuatElement {
        QuatElement::new(x.num.iter().map(|a| a * c).collect(), x.den.clone())
    }

    pub fn scale_rat(&self, x: &QuatElement, c: &Rat) -> QuatElement {
        QuatElement::new(x.num.iter().map(|a| a * c.numer()).collect(), &x.den * c.denom())
    }

    /// Left multiplication by a field element.
    pub fn scale(&self, c: &FieldElement, x: &QuatElement) -> QuatElement {
        self.mul(&self.scalar(c), x)
    }

    pub fn mul(&self, x: &QuatElement, y: &QuatElement) -> QuatElement {
        let f = &self.field;
        let n = self.n();
        let xs: Vec<&[Int]> = (0..4).map(|l| self.comp_int(x, l)).collect();
        let ys: Vec<&[Int]> = (0..4).map(|l| self.comp_int(y, l)).collect();
        let m = |p: &[Int], q: &[Int]| f.mul_int(p, q);
        let add = |p: &mut Vec<Int>, q: &[Int], sign: i32| {
            for (a, b) in p.iter_mut().zip(q) {
                if sign > 0 {
                    *a += b;
                } else {
                    *a -= b;
                }
            }
        };
        let mut r0 = m(xs[0], ys[0]);
        add(&mut r0, &m(&self.a_int, &m(xs[1], ys[1])), 1);
        add(&mut r0, &m(&self.b_int, &m(xs[2], ys[2])), 1);
        add(&mut r0, &m(&self.ab_int, &m(xs[3], ys[3])), -1);
        let mut r1 = m(xs[0], ys[1]);
        add(&mut r1, &m(xs[1], ys[0]), 1);
        let t = {
            let mut t = m(xs[3], ys[2]);
            add(&mut t, &m(xs[2], ys[3]), -1);
            t
        };
        add(&mut r1, &m(&self.b_int, &t), 1);
        let mut r2 = m(xs[0], ys[2]);
        add(&mut r2, &m(xs[2], ys[0]), 1);
        let t = {
            let mut t = m(xs[1], ys[3]);
            add(&mut t, &m(xs[3], ys[1]), -1);
            t
        };
        add(&mut r2, &m(&self.a_int, &t), 1);
        let mut r3 = m(xs[0], ys[3]);
        add(&mut r3, &m(xs[3], ys[0]), 1);
        add(&mut r3, &m(xs[1], ys[2]), 1);
        add(&mut r3, &m(xs[2], ys[1]), -1);
        let mut num = Vec::with_capacity(4 * n);
        num.extend(r0);
        num.extend(r1);
        num.extend(r2);
        num.extend(r3);
        QuatElement::new(num, &x.den * &y.den)
    }

    pub fn conj(&self, x: &QuatElement) -> QuatElement {
        let n = self.n();
        let num = x.num.iter().enumerate().map(|(k, c)| if k < n { c.clone() } else { -c }).collect();
        QuatElement { num, den: x.den.clone() }
    }

    pub fn nrd(&self, x: &QuatElement) -> FieldElement {
        let f = &self.field;
        let xs: Vec<&[Int]> = (0..4).map(|l| self.comp_int(x, l)).collect();
        let mut r = f.mul_int(xs[0], xs[0]);
        let sub = |r: &mut Vec<Int>, q: Vec<Int>| {
            for (a, b) in r.iter_mut().zip(q) {
                *a -= b;
            }
        };
        sub(&mut r, f.mul_int(&self.a_int, &f.mul_int(xs[1], xs[1])));
        sub(&mut r, f.mul_int(&self.b_int, &f.mul_int(xs[2], xs[2])));
        let t = f.mul_int(&self.ab_int, &f.mul_int(xs[3], xs[3]));
        for (a, b) in r.iter_mut().zip(t) {
            *a += b;
        }
        let d2 = &x.den * &x.den;
        FieldElement(r.into_iter().map(|c| Rat::new(c, d2.clone())).collect())
    }

    pub fn trd(&self, x: &QuatElement) -> FieldElement {
        let n = self.n();
        FieldElement(x.num[..n].iter().map(|c| Rat::new(c * 2, x.den.clone())).collect())
    }

    pub fn inv(&self, x: &QuatElement) -> QuatElement {
        let nr = self.nrd(x);
        assert!(!self.field.is_zero(&nr), "inverse of zero divisor");
        self.scale(&self.field.inv(&nr), &self.conj(x))
    }

    /// Bilinear form `trd(x * conj(y))`.
    pub fn trd_pair(&self, x: &QuatElement, y: &QuatElement) -> FieldElement {
        self.trd(&self.mul(x, &self.conj(y)))
    }

    /// True if `x` is a scalar (lies in `F`).
    pub fn is_scalar(&self, x: &QuatElement) -> bool {
        x.num[self.n()..].iter().all(|c| c.is_zero())
    }

    /// Scalar `c` with `x = c * y`, if `x` and `y` are proportional over `F`.
    pub fn proportional(&self, x: &QuatElement, y: &QuatElement) -> Option<FieldElement> {
        // x * conj(y) = c * nrd(y) exactly when x = c y
        let p = self.mul(x, &self.conj(y));
        if !self.is_scalar(&p) {
            return None;
        }
        let ny = self.nrd(y);
        let c = self.field.mul(&self.components(&p)[0], &self.field.inv(&ny));
        if self.scale(&c, y) == *x {
            Some(c)
        } else {
            None
        }
    }

    /// Real matrix image of `x` at the split place: for `v(a) > 0`,
    /// `i -> diag(s, -s)` with `s = sqrt(v(a))` and `j -> [[0, 1], [b, 0]]`.
    pub fn real_matrix(&self, x: &QuatElement) -> [[f64; 2]; 2] {
        let c = self.components(x);
        let v = self.split_place;
        let f = &self.field;
        let e: Vec<f64> = c.iter().map(|y| f.embed(y, v)).collect();
        let va = f.embed(&self.a, v);
        let vb = f.embed(&self.b, v);
        if va > 0.0 {
            let s = va.sqrt();
            // x0 + x1 i + x2 j + x3 ij
            [[e[0] + e[1] * s, e[2] + e[3] * s], [e[2] * vb - e[3] * s * vb, e[0] - e[1] * s]]
        } else {
            let s = vb.sqrt();
            // j -> diag(s, -s), i -> [[0,1],[a,0]], ij -> [[0,-s],[a s,0]]
            [[e[0] + e[2] * s, e[1] - e[3] * s], [e[1] * va + e[3] * va * s, e[0] - e[2] * s]]
        }
    }

    /// Values `v_i(nrd x)` and the split-place Frobenius norm, used by the
    /// positive definite form `|iota(x)|^2 + sum_ram v_i(nrd x)`.
    pub fn absolute_form(&self, x: &QuatElement) -> f64 {
        let m = self.real_matrix(x);
        let mut q = m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1];
        let nr = self.nrd(x);
        for &i in &self.ramified_real {
            q += self.field.embed(&nr, i);
        }
        q
    }

    /// Parses `c0 + c1*i + c2*j + c3*ij` style input with field-element
    /// coefficients given in parentheses, e.g. `(w+1)+i+(w^2)*ij`.
    pub fn parse_element(&self, s: &str, var: &str) -> Result<QuatElement> {
        let terms = split_terms(s);
        let f = &self.field;
        let mut comps = vec![f.zero(), f.zero(), f.zero(), f.zero()];
        for (neg, body) in terms {
            let (coef, l) = if let Some(rest) = body.strip_suffix("ij") {
                (rest, 3)
            } else if let Some(rest) = body.strip_suffix('k') {
                (rest, 3)
            } else if let Some(rest) = body.strip_suffix('i') {
                (rest, 1)
            } else if let Some(rest) = body.strip_suffix('j') {
                (rest, 2)
            } else {
                (body.as_str(), 0)
            };
            let c = parse_coefficient(f, coef.trim_end_matches('*'), var)?;
            let c = if neg { f.neg(&c) } else { c };
            comps[l] = f.add(&comps[l], &c);
        }
        Ok(self.from_components(&comps))
    }

    pub fn format_element(&self, x: &QuatElement, var: &str) -> String {
        let c = self.components(x);
        let names = ["", "i", "j", "ij"];
        let mut parts = Vec::new();
        for l in 0..4 {
            if self.field.is_zero(&c[l]) {
                continue;
            }
            let s = self.field.format_element(&c[l], var);
            let term = if l == 0 {
                s
            } else if s == "1" {
                names[l].to_string()
            } else if s == "-1" {
                format!("-{}", names[l])
            } else {
                format!("({}){}", s, names[l])
            };
            parts.push(term);
        }
        if parts.is_empty() {
            return "0".into();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            if p.starts_with('-') {
                out.push_str(p);
            } else {
                out.push('+');
                out.push_str(p);
            }
        }
        out
    }

    /// The finite primes at which `B` ramifies, from the Hilbert symbol.
    pub fn ramified_primes(&self) -> Result<Vec<PrimeIdeal>> {
        hilbert::ramified_primes(self)
    }

    /// Product of the ramified finite primes.
    pub fn discriminant(&self) -> Result<FracIdeal> {
        let mut d = FracIdeal::unit(&self.field);
        for p in self.ramified_primes()? {
            d = d.mul(&self.field, &p.ideal);
        }
        Ok(d)
    }

    pub fn approx(&self, x: &FieldElement, place: usize) -> f64 {
        self.field.embed(x, place)
    }
}

/// Integral elements with coordinates in `[-h, h]` and some coordinate equal
/// to `±h`, in a fixed order.
fn shell(n: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-h; n];
    loop {
        if v.iter().any(|x| x.abs() == h) {
            out.push(v.clone());
        }
        let mut i = 0;
        while i < n && v[i] == h {
            v[i] = -h;
            i += 1;
        }
        if i == n {
            return out;
        }
        v[i] += 1;
    }
}

/// An algebra `(a, b | F)` split exactly at the real place `split_place`
/// and ramified exactly at the given finite primes, found by searching
/// integral `a, b` of increasing height up to `max_height`.
pub fn with_ramification(field: &NumberField, ramified: &[FracIdeal], split_place: usize, max_height: i64) -> Result<QuatAlgebra> {
    let n = field.degree;
    if split_place >= n {
        return Err(Error::Config(format!("split place {split_place} out of range")));
    }
    if (n - 1 + ramified.len()) % 2 == 1 {
        return Err(Error::Config("the number of ramified places must be even".into()));
    }
    let mut target = FracIdeal::unit(field);
    for p in ramified {
        target = target.mul(field, p);
    }
    let negative_off_split = |x: &FieldElement| -> Result<bool> {
        let s = field.sign_vector(x)?;
        Ok((0..n).all(|i| i == split_place || s.0[i] < 0))
    };
    let mut seen: Vec<FieldElement> = Vec::new();
    for h in 1..=max_height {
        let fresh: Vec<FieldElement> = shell(n, h)
            .into_iter()
            .map(|c| field.from_coords_i64(&c))
            .filter(|x| !field.is_zero(x))
            .collect();
        for x in fresh {
            if !negative_off_split(&x)? {
                continue;
            }
            let pos = field.sign_at(&x, split_place)? > 0;
            seen.push(x.clone());
            for y in &seen {
                let y_pos = field.sign_at(y, split_place)? > 0;
                if !pos && !y_pos {
                    continue;
                }
                let (a, b) = if pos { (x.clone(), y.clone()) } else { (y.clone(), x.clone()) };
                let alg = QuatAlgebra::new(field.clone(), a, b)?;
                if alg.discriminant()? == target {
                    return Ok(alg);
                }
            }
        }
    }
    Err(Error::NoGenerator { what: "quaternion algebra with the requested ramification".into(), bound: max_height as u64 })
}

/// Coefficient forms `expr`, `(expr)` and `(expr)/d`.
fn parse_coefficient(f: &NumberField, coef: &str, var: &str) -> Result<FieldElement> {
    if coef.is_empty() {
        return Ok(f.one());
    }
    if let Some(inner) = coef.strip_prefix('(') {
        if let Some(close) = inner.rfind(')') {
            let x = f.parse_element(&inner[..close], var)?;
            let rest = &inner[close + 1..];
            if rest.is_empty() {
                return Ok(x);
            }
            let d = rest
                .strip_prefix('/')
                .and_then(crate::field::parse_rat)
                .ok_or_else(|| Error::Config(format!("cannot parse coefficient '{coef}'")))?;
            return Ok(f.mul(&x, &f.from_rat(&d.recip())));
        }
    }
    f.parse_element(coef, var)
}

/// Splits `s` at top-level `+`/`-` signs (outside parentheses).
fn split_terms(s: &str) -> Vec<(bool, String)> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    let mut neg = false;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 && !cur.ends_with('^') => {
                if !cur.is_empty() {
                    out.push((neg, std::mem::take(&mut cur)));
                }
                neg = ch == '-';
            }
            _ => cur.push(ch),
        }
    }
    if !cur.is_empty() {
        out.push((neg, cur));
    }
    out
}

#[allow(dead_code)]
fn f64_of(r: &Rat) -> f64 {
    rat_to_f64(r)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn cubic_algebra() -> QuatAlgebra {
        let f = NumberField::with_options(&[-11, -11, 0, 1].map(Int::from), Some(vec![2, 1, 0]), 128).unwrap();
        let a = f.parse_element("w+1", "w").unwrap();
        let b = f.from_i64(-1);
        QuatAlgebra::new(f, a, b).unwrap()
    }

    #[test]
    fn arithmetic_identities() {
        let alg = cubic_algebra();
        assert_eq!(alg.ramified_real, vec![1, 2]);
        assert_eq!(alg.split_place, 0);
        let x = alg.parse_element("(w+1)+i+ij", "w").unwrap();
        let y = alg.parse_element("1/2+(w^2+1)/2*i+1/2*ij", "w").unwrap();
        let f = &alg.field;
        assert_eq!(alg.nrd(&alg.mul(&x, &y)), f.mul(&alg.nrd(&x), &alg.nrd(&y)));
        assert_eq!(alg.mul(&x, &alg.inv(&x)), alg.one());
        let i = alg.unit_vector(1);
        let j = alg.unit_vector(2);
        assert_eq!(alg.mul(&i, &i), alg.scalar(&alg.a));
        assert_eq!(alg.mul(&j, &i), alg.neg(&alg.mul(&i, &j)));
        assert_eq!(alg.format_element(&x, "w"), "w+1+i+ij");
        let m = alg.real_matrix(&x);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        assert!((det - f.embed(&alg.nrd(&x), 0)).abs() < 1e-9);
        let mi = alg.real_matrix(&i);
        let mj = alg.real_matrix(&j);
        assert!((mj[0][1] - 1.0).abs() < 1e-12 && (mj[1][0] + 1.0).abs() < 1e-12);
        assert!((mi[0][0] - f.embed(&alg.a, 0).sqrt()).abs() < 1e-12);
        assert_eq!(alg.proportional(&alg.scale_int(&x, &Int::from(3)), &x), Some(f.from_i64(3)));
    }
}
