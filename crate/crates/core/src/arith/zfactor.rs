//! Factorization of polynomials over Q (Zassenhaus: factor modulo a prime,
//! Hensel lift, recombine).

use super::fp::{fp_deg, fp_divrem, fp_factor, fp_gcd, fp_derivative, fp_mul, fp_sub, fp_xgcd, FpPoly};
use super::intfactor::primes_up_to;
use super::poly::{self, primitive_part, squarefree_decomposition, QPoly};
use super::ring::{Field, Int, PrimeField, Rat};
use num_integer::Integer;
use num_traits::{Signed, Zero};

type ZPoly = Vec<Int>;

fn ztrim(a: &mut ZPoly) {
    while a.last().map_or(false, |c| c.is_zero()) {
        a.pop();
    }
}

fn zmod(a: &[Int], m: &Int) -> ZPoly {
    let mut r: ZPoly = a.iter().map(|c| c.mod_floor(m)).collect();
    ztrim(&mut r);
    r
}

fn zmul(a: &[Int], b: &[Int], m: &Int) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    zmod(&r, m)
}

fn zsub(a: &[Int], b: &[Int]) -> ZPoly {
    let n = a.len().max(b.len());
    let mut r: ZPoly = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    ztrim(&mut r);
    r
}

fn to_fp(fld: &PrimeField, a: &[Int]) -> FpPoly {
    let mut r: FpPoly = a.iter().map(|c| fld.reduce_int(c)).collect();
    super::fp::fp_trim(&mut r);
    r
}

fn from_fp(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| Int::from(c)).collect()
}

/// Lifts `f ≡ u·v (mod p)` with `u` monic and `gcd(u,v)=1` to a factorization
/// modulo `p^k`.
fn hensel_two(f: &[Int], u: &FpPoly, v: &FpPoly, p: u64, k: u32) -> (ZPoly, ZPoly) {
    let fld = PrimeField::new(p);
    let (g, _, t) = fp_xgcd(&fld, u, v);
    let ginv = fld.inv(&g[0]);
    let t: FpPoly = t.iter().map(|c| fld.mul(c, &ginv)).collect();
    let mut uz = from_fp(u);
    let mut vz = from_fp(v);
    let pb = Int::from(p);
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let diff = zsub(f, &zmul(&uz, &vz, &next));
        let e: ZPoly = diff.iter().map(|c| c / &pj).collect();
        let e = to_fp(&fld, &e);
        let (_, du) = fp_divrem(&fld, &fp_mul(&fld, &e, &t), u);
        let rest = fp_sub(&fld, &e, &fp_mul(&fld, &du, v));
        let (dv, r) = fp_divrem(&fld, &rest, u);
        debug_assert!(fp_deg(&r).is_none());
        let du = from_fp(&du);
        let dv = from_fp(&dv);
        uz = zmod(&poly_add_scaled(&uz, &du, &pj), &next);
        vz = zmod(&poly_add_scaled(&vz, &dv, &pj), &next);
        pj = next;
    }
    (uz, vz)
}

fn poly_add_scaled(a: &[Int], b: &[Int], c: &Int) -> ZPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default() * c)
        .collect()
}

/// Lifts the full list of monic modular factors of `f` (leading coefficient
/// absorbed into the last piece) to monic factors modulo `p^k`.
fn hensel_multi(f: &[Int], factors: &[FpPoly], p: u64, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let m = Int::from(p).pow(k);
        let lc = f.last().unwrap().clone();
        let inv = lc.extended_gcd(&m).x.mod_floor(&m);
        let g: ZPoly = f.iter().map(|c| c * &inv).collect();
        return vec![zmod(&g, &m)];
    }
    let fld = PrimeField::new(p);
    let half = factors.len() / 2;
    let mut u = vec![1u64];
    for a in &factors[..half] {
        u = fp_mul(&fld, &u, a);
    }
    let lc = fld.reduce_int(f.last().unwrap());
    let mut v = vec![lc];
    for b in &factors[half..] {
        v = fp_mul(&fld, &v, b);
    }
    let (uz, vz) = hensel_two(f, &u, &v, p, k);
    let mut out = hensel_multi(&uz, &factors[..half], p, k);
    out.extend(hensel_multi(&vz, &factors[half..], p, k));
    out
}

fn symmetric(a: &[Int], m: &Int) -> ZPoly {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

fn exact_divide(f: &[Int], g: &[Int]) -> Option<ZPoly> {
    let fq: QPoly = poly::from_bigints(f);
    let gq: QPoly = poly::from_bigints(g);
    let (q, r) = poly::divrem(&fq, &gq);
    if !r.is_empty() || q.iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(q.iter().map(|c| c.to_integer()).collect())
}

fn factor_squarefree(f: ZPoly) -> Vec<ZPoly> {
    let deg = f.len() - 1;
    if deg <= 1 {
        return vec![f];
    }
    let lc = f.last().unwrap().clone();
    let mut chosen = None;
    for p in primes_up_to(2000).into_iter().skip(1) {
        let fld = PrimeField::new(p);
        if fld.reduce_int(&lc) == 0 {
            continue;
        }
        let fp = to_fp(&fld, &f);
        let g = fp_gcd(&fld, &fp, &fp_derivative(&fld, &fp));
        if fp_deg(&g) == Some(0) {
            chosen = Some(p);
            break;
        }
    }
    let p = chosen.expect("no suitable prime for factorization");
    let fld = PrimeField::new(p);
    let modular: Vec<FpPoly> = fp_factor(&fld, &to_fp(&fld, &f)).into_iter().map(|(g, _)| g).collect();
    if modular.len() == 1 {
        return vec![f];
    }
    // Mignotte-type bound on coefficients of factors, times the leading coefficient.
    let norm: Int = f.iter().map(|c| c.abs()).max().unwrap();
    let bound = Int::from(2u32).pow(deg as u32) * (norm * Int::from(deg as u64 + 1)) * lc.abs() * 2;
    let mut k = 1u32;
    let pb = Int::from(p);
    while pb.pow(k) <= bound {
        k += 1;
    }
    let m = pb.pow(k);
    let mut lifted = hensel_multi(&f, &modular, p, k);
    let mut result = Vec::new();
    let mut g = f;
    let mut s = 1;
    'outer: while 2 * s <= lifted.len() {
        let idx: Vec<usize> = (0..lifted.len()).collect();
        for subset in combinations(&idx, s) {
            let lcg = g.last().unwrap().clone();
            let mut cand: ZPoly = vec![lcg.clone()];
            for &i in &subset {
                cand = zmul(&cand, &lifted[i], &m);
            }
            let cand = symmetric(&cand, &m);
            let cand = primitive_part(&poly::from_bigints(&cand));
            if let Some(q) = exact_divide(&g, &cand) {
                result.push(cand);
                g = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, h)| h)
                    .collect();
                continue 'outer;
            }
        }
        s += 1;
    }
    let g = primitive_part(&poly::from_bigints(&g));
    result.push(g);
    result
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Factors a nonzero polynomial over Q into primitive integer irreducibles
/// with positive leading coefficients, returned with multiplicities and
/// sorted by degree then coefficients.
pub fn factor_over_q(a: &[Rat]) -> Vec<(Vec<Int>, usize)> {
    let mut out = Vec::new();
    for (g, e) in squarefree_decomposition(a) {
        for h in factor_squarefree(primitive_part(&g)) {
            out.push((h, e));
        }
    }
    out.sort_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)));
    out
}

pub fn is_irreducible(a: &[Rat]) -> bool {
    let f = factor_over_q(a);
    f.len() == 1 && f[0].1 == 1
}

/// Converts a primitive integer polynomial back to a monic rational one.
pub fn to_monic_q(a: &[Int]) -> QPoly {
    poly::monic(&poly::from_bigints(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(c: &[i64]) -> Vec<Int> {
        c.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn swinnerton_dyer_like_and_products() {
        // (x^2-2)(x^2-3)(x+1)^2
        let a = poly::mul(&poly::from_ints(&[-2, 0, 1]), &poly::from_ints(&[-3, 0, 1]));
        let a = poly::mul(&a, &poly::from_ints(&[1, 2, 1]));
        let f = factor_over_q(&a);
        assert_eq!(f, vec![(ints(&[1, 1]), 2), (ints(&[-3, 0, 1]), 1), (ints(&[-2, 0, 1]), 1)]);
        // x^4+1 is irreducible but splits mod every prime
        assert!(is_irreducible(&poly::from_ints(&[1, 0, 0, 0, 1])));
        assert!(is_irreducible(&poly::from_ints(&[-11, -11, 0, 1])));
        // T^6+11T^4+31T^2+9
        assert!(is_irreducible(&poly::from_ints(&[9, 0, 31, 0, 11, 0, 1])));
        // non-monic: (2x+1)(3x^2-5)
        let b = poly::mul(&poly::from_ints(&[1, 2]), &poly::from_ints(&[-5, 0, 3]));
        assert_eq!(factor_over_q(&b), vec![(ints(&[1, 2]), 1), (ints(&[-5, 0, 3]), 1)]);
    }
}
