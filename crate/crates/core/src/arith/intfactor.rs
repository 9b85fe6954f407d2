//! Integer factorization for the moderate sizes that occur in norms and
//! discriminants.

use super::ring::Int;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    if m < (1u128 << 64) {
        return a * b % m;
    }
    let mut r = 0u128;
    let mut a = a % m;
    let mut b = b;
    while b > 0 {
        if b & 1 == 1 {
            r = (r + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    r
}

fn powmod(mut b: u128, mut e: u128, m: u128) -> u128 {
    let mut r = 1u128 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd_u128(b, a % b)
    }
}

fn pollard_rho(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u128(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u128(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime_u128(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_u128(d, out);
    factor_u128(n / d, out);
}

/// Prime factorization of `|n|` as sorted `(prime, exponent)` pairs.
/// Panics for `n = 0` or values beyond 128 bits after trial division.
pub fn factor_int(n: &Int) -> Vec<(Int, u32)> {
    assert!(!n.is_zero(), "factoring zero");
    let mut m = n.abs();
    let mut out: Vec<(Int, u32)> = Vec::new();
    for p in primes_up_to(10_000) {
        let pb = Int::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        while m.is_multiple_of(&pb) {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((pb, e));
        }
    }
    if !m.is_one() {
        let v = m.to_u128().expect("cofactor too large to factor");
        let mut ps = Vec::new();
        factor_u128(v, &mut ps);
        ps.sort();
        for p in ps {
            let pb = Int::from(p);
            match out.last_mut() {
                Some((q, e)) if *q == pb => *e += 1,
                _ => out.push((pb, 1)),
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors() {
        assert_eq!(factor_int(&Int::from(2057)), vec![(Int::from(11), 2), (Int::from(17), 1)]);
        let big = Int::from(1_000_003u64) * Int::from(998_244_353u64);
        assert_eq!(factor_int(&big), vec![(Int::from(1_000_003u64), 1), (Int::from(998_244_353u64), 1)]);
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }
}
