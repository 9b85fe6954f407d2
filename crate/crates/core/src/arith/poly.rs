//! Univariate polynomials over `Q`, stored as ascending coefficient vectors.

use super::ring::{common_denominator, Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type QPoly = Vec<Rat>;

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn trimmed(mut p: QPoly) -> QPoly {
    trim(&mut p);
    p
}

/// Degree; `None` for the zero polynomial.
pub fn degree(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn from_ints(c: &[i64]) -> QPoly {
    trimmed(c.iter().map(|&x| Rat::from_integer(Int::from(x))).collect())
}

pub fn from_bigints(c: &[Int]) -> QPoly {
    trimmed(c.iter().map(|x| Rat::from_integer(x.clone())).collect())
}

pub fn add(a: &[Rat], b: &[Rat]) -> QPoly {
    let n = a.len().max(b.len());
    let z = Rat::zero();
    trimmed((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

pub fn sub(a: &[Rat], b: &[Rat]) -> QPoly {
    let n = a.len().max(b.len());
    let z = Rat::zero();
    trimmed((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

pub fn mul(a: &[Rat], b: &[Rat]) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trimmed(out)
}

pub fn scale(a: &[Rat], c: &Rat) -> QPoly {
    trimmed(a.iter().map(|x| x * c).collect())
}

pub fn divrem(a: &[Rat], b: &[Rat]) -> (QPoly, QPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r = trimmed(a.to_vec());
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Rat::zero(); r.len() - db];
    let lead = b[db].clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[i + shift] -= &c * bc;
        }
        q[shift] = c;
        trim(&mut r);
    }
    (trimmed(q), r)
}

pub fn rem(a: &[Rat], b: &[Rat]) -> QPoly {
    divrem(a, b).1
}

pub fn monic(a: &[Rat]) -> QPoly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let l = a[d].clone();
            a[..=d].iter().map(|x| x / &l).collect()
        }
    }
}

pub fn gcd(a: &[Rat], b: &[Rat]) -> QPoly {
    let mut x = trimmed(a.to_vec());
    let mut y = trimmed(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

pub fn derivative(a: &[Rat]) -> QPoly {
    trimmed(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rat::from_integer(Int::from(i as i64)))
            .collect(),
    )
}

pub fn eval(a: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in a.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn eval_f64(a: &[Rat], x: f64) -> f64 {
    let mut acc = 0.0;
    for c in a.iter().rev() {
        acc = acc * x + super::ring::rat_to_f64(c);
    }
    acc
}

pub fn powmod(base: &[Rat], mut e: u64, modulus: &[Rat]) -> QPoly {
    let mut acc: QPoly = vec![Rat::one()];
    let mut b = rem(base, modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b), modulus);
        }
        b = rem(&mul(&b, &b), modulus);
        e >>= 1;
    }
    acc
}

/// Integer polynomial proportional to `a` with positive leading coefficient
/// and content one.
pub fn primitive_part(a: &[Rat]) -> Vec<Int> {
    let a = trimmed(a.to_vec());
    if a.is_empty() {
        return Vec::new();
    }
    let d = common_denominator(a.iter());
    let ints: Vec<Int> = a.iter().map(|c| (c * Rat::from_integer(d.clone())).to_integer()).collect();
    let mut g = Int::zero();
    for c in &ints {
        g = g.gcd(c);
    }
    let sign = if ints.last().unwrap().is_negative() { -Int::one() } else { Int::one() };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

/// Square-free decomposition: list of `(factor, multiplicity)` with monic
/// square-free pairwise coprime factors (Yun's algorithm).
pub fn squarefree_decomposition(a: &[Rat]) -> Vec<(QPoly, usize)> {
    let f = monic(a);
    if degree(&f).unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let fp = derivative(&f);
    let mut g = gcd(&f, &fp);
    let mut w = divrem(&f, &g).0;
    let mut i = 1;
    while degree(&w).unwrap_or(0) > 0 {
        let y = gcd(&w, &g);
        let z = divrem(&w, &y).0;
        if degree(&z).unwrap_or(0) > 0 {
            out.push((monic(&z), i));
        }
        g = divrem(&g, &y).0;
        w = y;
        i += 1;
    }
    out
}

/// Resultant via the Sylvester determinant.
pub fn resultant(a: &[Rat], b: &[Rat]) -> Rat {
    use super::matrix::{determinant, Matrix};
    use super::ring::Rationals;
    let (Some(m), Some(n)) = (degree(a), degree(b)) else {
        return Rat::zero();
    };
    if m == 0 && n == 0 {
        return Rat::one();
    }
    let size = m + n;
    let s = Matrix::from_fn(size, size, |i, j| {
        if i < n {
            // row i: coefficients of a shifted by i, descending
            if j >= i && j - i <= m {
                a[m - (j - i)].clone()
            } else {
                Rat::zero()
            }
        } else {
            let k = i - n;
            if j >= k && j - k <= n {
                b[n - (j - k)].clone()
            } else {
                Rat::zero()
            }
        }
    });
    determinant(&Rationals, &s)
}

pub fn discriminant(a: &[Rat]) -> Rat {
    let d = degree(a).expect("zero polynomial");
    let r = resultant(a, &derivative(a));
    let sign = if (d * (d - 1) / 2) % 2 == 0 { Rat::one() } else { -Rat::one() };
    sign * r / &a[d]
}

/// Sturm sequence of a square-free polynomial.
pub fn sturm_sequence(a: &[Rat]) -> Vec<QPoly> {
    let mut seq = vec![trimmed(a.to_vec()), derivative(a)];
    loop {
        let n = seq.len();
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.iter().map(|c| -c).collect());
    }
    seq
}

fn sign_changes(seq: &[QPoly], x: &Rat) -> usize {
    let mut last = 0i32;
    let mut count = 0;
    for p in seq {
        let v = eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the half-open interval `(lo, hi]`.
pub fn count_roots(seq: &[QPoly], lo: &Rat, hi: &Rat) -> usize {
    sign_changes(seq, lo) - sign_changes(seq, hi)
}

/// Cauchy bound on the absolute value of roots.
pub fn root_bound(a: &[Rat]) -> Rat {
    let d = degree(a).unwrap();
    let lead = a[d].abs();
    let mut m = Rat::zero();
    for c in &a[..d] {
        let v = c.abs() / &lead;
        if v > m {
            m = v;
        }
    }
    m + Rat::one()
}

/// Isolating intervals `(lo, hi]` for the real roots of a square-free
/// polynomial, in ascending order, each of width at most `width`.
pub fn isolate_real_roots(a: &[Rat], width: &Rat) -> Vec<(Rat, Rat)> {
    let seq = sturm_sequence(a);
    let b = root_bound(a);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let c = count_roots(&seq, &lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 && &hi - &lo <= *width {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / Rat::from_integer(Int::from(2));
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort();
    out
}

/// Halves an isolating interval for a root of `a`.
pub fn refine_root(a: &[Rat], iv: &(Rat, Rat)) -> (Rat, Rat) {
    let (lo, hi) = iv;
    let mid = (lo + hi) / Rat::from_integer(Int::from(2));
    let flo = eval(a, lo);
    let fm = eval(a, &mid);
    if fm.is_zero() {
        return (mid.clone(), mid);
    }
    // root lies where the sign changes; an endpoint may itself be a root
    if flo.is_zero() {
        return (lo.clone(), lo.clone());
    }
    if flo.is_positive() != fm.is_positive() {
        (lo.clone(), mid)
    } else {
        (mid, hi.clone())
    }
}

/// Pretty printer, descending powers, e.g. `w^2 - 2*w - 6` rendered as
/// `w^2-2w-6`.
pub fn format_poly(a: &[Rat], var: &str) -> String {
    let a = trimmed(a.to_vec());
    if a.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, c) in a.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push(if neg { '-' } else { '+' });
        }
        let coef = if abs.is_integer() { abs.numer().to_string() } else { format!("({})", abs) };
        if i == 0 {
            s.push_str(&coef);
        } else {
            if !abs.is_one() {
                s.push_str(&coef);
            }
            s.push_str(var);
            if i > 1 {
                s.push('^');
                s.push_str(&i.to_string());
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::{rat, rint};

    #[test]
    fn isolates_cubic_roots() {
        let f = from_ints(&[-11, -11, 0, 1]);
        let roots = isolate_real_roots(&f, &rat(1, 1000));
        assert_eq!(roots.len(), 3);
        let approx: Vec<f64> = roots.iter().map(|(l, _)| crate::arith::ring::rat_to_f64(l)).collect();
        assert!((approx[0] + 2.602).abs() < 0.01);
        assert!((approx[1] + 1.131).abs() < 0.01);
        assert!((approx[2] - 3.73).abs() < 0.01);
    }

    #[test]
    fn discriminant_of_cubic() {
        assert_eq!(discriminant(&from_ints(&[-11, -11, 0, 1])), rint(2057));
        assert_eq!(discriminant(&from_ints(&[-5, 0, 1])), rint(20));
    }

    #[test]
    fn squarefree_parts() {
        // (x-1)^2 (x+2)
        let f = mul(&mul(&from_ints(&[-1, 1]), &from_ints(&[-1, 1])), &from_ints(&[2, 1]));
        let d = squarefree_decomposition(&f);
        assert_eq!(d, vec![(from_ints(&[2, 1]), 1), (from_ints(&[-1, 1]), 2)]);
    }

    #[test]
    fn formatting() {
        assert_eq!(format_poly(&from_ints(&[-6, -2, 1]), "w"), "w^2-2w-6");
        assert_eq!(format_poly(&from_ints(&[0, 1]), "w"), "w");
        assert_eq!(format_poly(&from_ints(&[2]), "w"), "2");
    }
}
