//! Dedekind zeta values and the hyperbolic area of `Γ(1)`.

use crate::arith::fp::{fp_factor, fp_trim};
use crate::arith::intfactor::primes_up_to;
use crate::arith::poly;
use crate::arith::ring::{Int, PrimeField};
use crate::error::Result;
use crate::field::{factor_rational_prime, NumberField};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use std::f64::consts::PI;

/// Prime cut-off for the Euler product.
pub const ZETA_PRIME_BOUND: u64 = 1 << 18;

/// Norms of the primes above `p`.
pub fn prime_norms(fld: &NumberField, p: u64, disc_poly: &Int) -> Result<Vec<u64>> {
    let lc = fld.defining_poly.last().unwrap();
    if disc_poly.is_multiple_of(&Int::from(p)) || lc.is_multiple_of(&Int::from(p)) {
        return Ok(factor_rational_prime(fld, p)?.iter().map(|q| q.norm()).collect());
    }
    let base = PrimeField::new(p);
    let mut f: Vec<u64> = fld.defining_poly.iter().map(|c| base.reduce_int(c)).collect();
    fp_trim(&mut f);
    Ok(fp_factor(&base, &f).iter().map(|(g, _)| p.pow((g.len() - 1) as u32)).collect())
}

/// `ζ_F(2)` by an Euler product with a first-order tail correction.
pub fn dedekind_zeta_2(fld: &NumberField) -> Result<f64> {
    let dp = poly::discriminant(&fld.defining_poly_q());
    let disc_poly = dp.numer().abs();
    let mut log_z = 0.0f64;
    for p in primes_up_to(ZETA_PRIME_BOUND) {
        for q in prime_norms(fld, p, &disc_poly)? {
            let x = (q as f64).powi(-2);
            log_z -= (-x).ln_1p();
        }
    }
    let x = ZETA_PRIME_BOUND as f64;
    log_z += 1.0 / (x * x.ln());
    Ok(log_z.exp())
}

/// Hyperbolic area of `O_+^× / Z_F^×` for a maximal order, from the volume
/// formula `2π · 4 (4π²)^-n d_F^{3/2} ζ_F(2) ∏_{p | D}(Np - 1)` divided by
/// the index `[Z_F^{×,+} : Z_F^{×2}]`.
pub fn group_area(fld: &NumberField, ramified_norms: &[u64], tp_units_mod_squares: usize) -> Result<f64> {
    let n = fld.degree as i32;
    let d = fld.disc.abs().to_f64().unwrap();
    let z = dedekind_zeta_2(fld)?;
    let phi: f64 = ramified_norms.iter().map(|&q| q as f64 - 1.0).product();
    let a1 = 2.0 * PI * 4.0 * (4.0 * PI * PI).powi(-n) * d.powf(1.5) * z * phi;
    Ok(a1 / tp_units_mod_squares as f64)
}

/// Area `2π(2g - 2 + Σ(1 - 1/e))` of a signature.
pub fn signature_area(genus: u32, orders: &[u32]) -> f64 {
    let s: f64 = orders.iter().map(|&e| 1.0 - 1.0 / e as f64).sum();
    2.0 * PI * (2.0 * genus as f64 - 2.0 + s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_zeta_and_modular_area() {
        let q = NumberField::new(&[-2, 1]).unwrap();
        let z = dedekind_zeta_2(&q).unwrap();
        assert!((z - PI * PI / 6.0).abs() < 1e-7);
        // PSL2(Z) has area π/3
        let a = group_area(&q, &[], 1).unwrap();
        assert!((a - PI / 3.0).abs() < 1e-6);
        assert!((signature_area(1, &[2, 2, 2, 2, 2, 3, 3]) - 23.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cubic_area_matches_signature() {
        let f = NumberField::new(&[-11, -11, 0, 1]).unwrap();
        let a = group_area(&f, &[], 2).unwrap();
        let expected = signature_area(1, &[2, 2, 2, 2, 2, 3, 3]);
        assert!(((a - expected) / expected).abs() < 1e-6, "{a} vs {expected}");
    }
}
