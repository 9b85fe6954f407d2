//! Polynomials over prime fields and finite extension fields `F_q`.

use super::ring::{Field, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type FpPoly = Vec<u64>;

pub fn fp_trim(a: &mut FpPoly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn trimmed(mut a: FpPoly) -> FpPoly {
    fp_trim(&mut a);
    a
}

pub fn fp_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn fp_add(f: &PrimeField, a: &[u64], b: &[u64]) -> FpPoly {
    let n = a.len().max(b.len());
    trimmed((0..n).map(|i| f.add(a.get(i).unwrap_or(&0), b.get(i).unwrap_or(&0))).collect())
}

pub fn fp_sub(f: &PrimeField, a: &[u64], b: &[u64]) -> FpPoly {
    let n = a.len().max(b.len());
    trimmed((0..n).map(|i| f.sub(a.get(i).unwrap_or(&0), b.get(i).unwrap_or(&0))).collect())
}

pub fn fp_mul(f: &PrimeField, a: &[u64], b: &[u64]) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % f.p;
        }
    }
    trimmed(out)
}

pub fn fp_divrem(f: &PrimeField, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly) {
    let db = fp_deg(b).expect("division by zero polynomial");
    let mut r = trimmed(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    let inv = f.inv(&b[db]);
    while let Some(dr) = fp_deg(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(&r[dr], &inv);
        let shift = dr - db;
        for i in 0..=db {
            r[i + shift] = f.sub(&r[i + shift], &f.mul(&c, &b[i]));
        }
        q[shift] = c;
        fp_trim(&mut r);
    }
    (trimmed(q), r)
}

pub fn fp_rem(f: &PrimeField, a: &[u64], b: &[u64]) -> FpPoly {
    fp_divrem(f, a, b).1
}

pub fn fp_monic(f: &PrimeField, a: &[u64]) -> FpPoly {
    match fp_deg(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = f.inv(&a[d]);
            a[..=d].iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

pub fn fp_gcd(f: &PrimeField, a: &[u64], b: &[u64]) -> FpPoly {
    let mut x = trimmed(a.to_vec());
    let mut y = trimmed(b.to_vec());
    while !y.is_empty() {
        let r = fp_rem(f, &x, &y);
        x = y;
        y = r;
    }
    fp_monic(f, &x)
}

/// Extended gcd: returns `(g, s, t)` with `s a + t b = g`, `g` monic.
pub fn fp_xgcd(f: &PrimeField, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly, FpPoly) {
    let (mut r0, mut r1) = (trimmed(a.to_vec()), trimmed(b.to_vec()));
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(f, &r0, &r1);
        let s2 = fp_sub(f, &s0, &fp_mul(f, &q, &s1));
        let t2 = fp_sub(f, &t0, &fp_mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match fp_deg(&r0) {
        None => (Vec::new(), s0, t0),
        Some(d) => {
            let inv = f.inv(&r0[d]);
            let sc = |v: &[u64]| trimmed(v.iter().map(|c| f.mul(c, &inv)).collect());
            (sc(&r0), sc(&s0), sc(&t0))
        }
    }
}

pub fn fp_powmod(f: &PrimeField, base: &[u64], e: &num_bigint::BigUint, m: &[u64]) -> FpPoly {
    let mut acc: FpPoly = fp_rem(f, &[1], m);
    let b = fp_rem(f, base, m);
    for i in (0..e.bits()).rev() {
        acc = fp_rem(f, &fp_mul(f, &acc, &acc), m);
        if e.bit(i) {
            acc = fp_rem(f, &fp_mul(f, &acc, &b), m);
        }
    }
    acc
}

pub fn fp_derivative(f: &PrimeField, a: &[u64]) -> FpPoly {
    trimmed(a.iter().enumerate().skip(1).map(|(i, c)| f.mul(c, &((i as u64) % f.p))).collect())
}

pub fn fp_eval(f: &PrimeField, a: &[u64], x: u64) -> u64 {
    let mut acc = 0;
    for c in a.iter().rev() {
        acc = f.add(&f.mul(&acc, &x), c);
    }
    acc
}

/// Factorization of a nonzero polynomial into monic irreducibles with
/// multiplicity, sorted by (degree, coefficients).
pub fn fp_factor(f: &PrimeField, a: &[u64]) -> Vec<(FpPoly, usize)> {
    let a = fp_monic(f, a);
    let mut out = Vec::new();
    for (sf, mult) in fp_squarefree(f, &a) {
        for (g, d) in fp_distinct_degree(f, &sf) {
            for h in fp_equal_degree(f, &g, d) {
                out.push((h, mult));
            }
        }
    }
    out.sort_by(|x, y| (x.0.len(), x.0.iter().rev().collect::<Vec<_>>()).cmp(&(y.0.len(), y.0.iter().rev().collect::<Vec<_>>())));
    out
}

fn fp_squarefree(f: &PrimeField, a: &[u64]) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    if fp_deg(a).unwrap_or(0) == 0 {
        return out;
    }
    let d = fp_derivative(f, a);
    if d.is_empty() {
        // a = b(x^p)
        let p = f.p as usize;
        let b: FpPoly = a.iter().step_by(p).copied().collect();
        // p-th root of coefficients is identity in F_p
        for (g, m) in fp_squarefree(f, &b) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = fp_gcd(f, a, &d);
    let mut w = fp_divrem(f, a, &c).0;
    let mut i = 1;
    while fp_deg(&w).unwrap_or(0) > 0 {
        let y = fp_gcd(f, &w, &c);
        let z = fp_divrem(f, &w, &y).0;
        if fp_deg(&z).unwrap_or(0) > 0 {
            out.push((z, i));
        }
        w = y;
        c = fp_divrem(f, &c, &w).0;
        i += 1;
    }
    if fp_deg(&c).unwrap_or(0) > 0 {
        let p = f.p as usize;
        let b: FpPoly = c.iter().step_by(p).copied().collect();
        for (g, m) in fp_squarefree(f, &b) {
            out.push((g, m * p));
        }
    }
    // merge equal factors that can appear through the p-power branch
    let mut merged: Vec<(FpPoly, usize)> = Vec::new();
    for (g, m) in out {
        merged.push((fp_monic(f, &g), m));
    }
    merged
}

fn fp_distinct_degree(f: &PrimeField, a: &[u64]) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut rest = fp_monic(f, a);
    let x: FpPoly = vec![0, 1];
    let mut h = x.clone();
    let p = num_bigint::BigUint::from(f.p);
    let mut d = 0;
    while fp_deg(&rest).unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > fp_deg(&rest).unwrap() {
            let deg = fp_deg(&rest).unwrap();
            out.push((rest.clone(), deg));
            break;
        }
        h = fp_powmod(f, &h, &p, &rest);
        let g = fp_gcd(f, &rest, &fp_sub(f, &h, &x));
        if fp_deg(&g).unwrap_or(0) > 0 {
            out.push((g.clone(), d));
            rest = fp_divrem(f, &rest, &g).0;
            h = fp_rem(f, &h, &rest);
        }
    }
    out
}

fn fp_equal_degree(f: &PrimeField, a: &[u64], d: usize) -> Vec<FpPoly> {
    let n = fp_deg(a).unwrap();
    if n == d {
        return vec![fp_monic(f, a)];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ f.p ^ (n as u64) << 32);
    loop {
        let r: FpPoly = trimmed((0..n).map(|_| rng.gen_range(0..f.p)).collect());
        if fp_deg(&r).unwrap_or(0) == 0 {
            continue;
        }
        let candidate = if f.p == 2 {
            // trace map r + r^2 + ... + r^(2^(d-1)) over F_2
            let mut t = r.clone();
            let mut acc = r.clone();
            let two = num_bigint::BigUint::from(2u32);
            for _ in 1..d {
                t = fp_powmod(f, &t, &two, a);
                acc = fp_add(f, &acc, &t);
            }
            acc
        } else {
            let e = (num_bigint::BigUint::from(f.p).pow(d as u32) - 1u32) / 2u32;
            fp_sub(f, &fp_powmod(f, &r, &e, a), &[1])
        };
        let g = fp_gcd(f, a, &candidate);
        let dg = fp_deg(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = fp_equal_degree(f, &g, d);
            out.extend(fp_equal_degree(f, &fp_divrem(f, a, &g).0, d));
            return out;
        }
    }
}

/// The finite field `F_p[t]/(g)` for a monic irreducible `g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteField {
    pub base: PrimeField,
    pub modulus: FpPoly,
}

impl FiniteField {
    pub fn new(p: u64, modulus: FpPoly) -> Self {
        let base = PrimeField::new(p);
        assert!(fp_deg(&modulus).unwrap_or(0) >= 1);
        FiniteField { base, modulus: fp_monic(&base, &modulus) }
    }
    pub fn prime(p: u64) -> Self {
        FiniteField::new(p, vec![0, 1])
    }
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
    pub fn order(&self) -> u64 {
        self.base.p.pow(self.degree() as u32)
    }
    fn canon(&self, mut v: FpPoly) -> Vec<u64> {
        v.resize(self.degree(), 0);
        v
    }
    pub fn from_poly(&self, a: &[u64]) -> Vec<u64> {
        self.canon(fp_rem(&self.base, a, &self.modulus))
    }
    /// Element with the given index in `0..q` (base-p digits).
    pub fn element(&self, mut idx: u64) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        for c in v.iter_mut() {
            *c = idx % self.base.p;
            idx /= self.base.p;
        }
        v
    }
    pub fn index_of(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0, |acc, &c| acc * self.base.p + c)
    }
    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }
    pub fn is_square(&self, a: &[u64]) -> bool {
        if self.is_zero(&a.to_vec()) {
            return true;
        }
        if self.base.p == 2 {
            return true;
        }
        let e = (self.order() - 1) / 2;
        self.is_one(&self.pow(&a.to_vec(), e))
    }
    /// Quadratic character: 0, 1 or -1.
    pub fn quadratic_character(&self, a: &[u64]) -> i32 {
        if self.is_zero(&a.to_vec()) {
            0
        } else if self.is_square(a) {
            1
        } else {
            -1
        }
    }
    pub fn sqrt(&self, a: &[u64]) -> Option<Vec<u64>> {
        let a = a.to_vec();
        if self.is_zero(&a) {
            return Some(a);
        }
        if self.base.p == 2 {
            // Frobenius is bijective: sqrt(a) = a^(q/2)
            return Some(self.pow(&a, self.order() / 2));
        }
        if !self.is_square(&a) {
            return None;
        }
        // exhaustive for small fields, Tonelli-Shanks otherwise
        if self.order() <= 4096 {
            return self.elements().find(|x| self.mul(x, x) == a);
        }
        let q = self.order();
        let mut s = 0;
        let mut t = q - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = self.elements().find(|x| !self.is_zero(x) && !self.is_square(x)).unwrap();
        let mut m = s;
        let mut c = self.pow(&z, t);
        let mut tt = self.pow(&a, t);
        let mut r = self.pow(&a, (t + 1) / 2);
        while !self.is_one(&tt) {
            let mut i = 0;
            let mut x = tt.clone();
            while !self.is_one(&x) {
                x = self.mul(&x, &x);
                i += 1;
            }
            let b = self.pow(&c, 1 << (m - i - 1));
            m = i;
            c = self.mul(&b, &b);
            tt = self.mul(&tt, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }
}

impl Field for FiniteField {
    type El = Vec<u64>;
    fn zero(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        v[0] = 1;
        v
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        if self.degree() == 1 {
            return vec![self.base.mul(&a[0], &b[0])];
        }
        self.canon(fp_rem(&self.base, &fp_mul(&self.base, a, b), &self.modulus))
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        assert!(!self.is_zero(a), "inverse of zero in F_q");
        if self.degree() == 1 {
            return vec![self.base.inv(&a[0])];
        }
        let (g, s, _) = fp_xgcd(&self.base, a, &self.modulus);
        assert_eq!(g, vec![1]);
        self.canon(fp_rem(&self.base, &s, &self.modulus))
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        let mut v = vec![0; self.degree()];
        v[0] = self.base.from_i64(n);
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_cubic_mod_3() {
        // x^3 - 11x - 11 = x^3 + x + 1 mod 3 = (x - 1)(x^2 + x + 2)
        let f = PrimeField::new(3);
        let fac = fp_factor(&f, &[1, 1, 0, 1]);
        assert_eq!(fac, vec![(vec![2, 1], 1), (vec![2, 1, 1], 1)]);
    }

    #[test]
    fn factor_with_repeated_and_p2() {
        let f = PrimeField::new(2);
        // (x+1)^2 * (x^3+x+1)
        let a = fp_mul(&f, &fp_mul(&f, &[1, 1], &[1, 1]), &[1, 1, 0, 1]);
        let fac = fp_factor(&f, &a);
        assert_eq!(fac, vec![(vec![1, 1], 2), (vec![1, 1, 0, 1], 1)]);
        let f5 = PrimeField::new(5);
        // x^10 - 1 = (x^2-1)^5 over F_5
        let mut a = vec![0u64; 11];
        a[0] = 4;
        a[10] = 1;
        let fac = fp_factor(&f5, &a);
        assert_eq!(fac, vec![(vec![1, 1], 5), (vec![4, 1], 5)]);
    }

    #[test]
    fn extension_field_inverse_and_sqrt() {
        let k = FiniteField::new(3, vec![2, 1, 1]);
        assert_eq!(k.order(), 9);
        for x in k.elements().skip(1) {
            assert_eq!(k.mul(&x, &k.inv(&x)), k.one());
            let sq = k.mul(&x, &x);
            let r = k.sqrt(&sq).unwrap();
            assert_eq!(k.mul(&r, &r), sq);
        }
        let squares = k.elements().filter(|x| k.quadratic_character(x) == 1).count();
        assert_eq!(squares, 4);
    }
}
