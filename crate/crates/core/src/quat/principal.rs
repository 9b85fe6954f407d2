//! Embedding data for lattices in `B` and principalization of left ideals.

use super::lattice::QuatLattice;
use super::{QuatAlgebra, QuatElement};
use crate::arith::enumerate::short_vectors;
use crate::arith::ring::Int;
use crate::error::{Error, Result};
use num_traits::Signed;

const ENUMERATION_CAP: usize = 400_000;
const DOUBLINGS: usize = 24;

/// Sign condition on the reduced norm at the split place (it is always
/// positive at the ramified places).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NrdSign {
    Positive,
    Negative,
}

/// A Z-basis of a lattice in `B` with floating point images at the real
/// places: a 2x2 matrix at the split place and Hamilton coordinates at each
/// ramified place.
#[derive(Clone, Debug)]
pub struct EmbeddedBasis {
    pub basis: Vec<QuatElement>,
    pub split: Vec<[f64; 4]>,
    pub ramified: Vec<Vec<[f64; 4]>>,
    pub ramified_ab: Vec<(f64, f64)>,
}

impl EmbeddedBasis {
    pub fn new(alg: &QuatAlgebra, lat: &QuatLattice) -> EmbeddedBasis {
        let basis = lat.basis();
        let split = basis
            .iter()
            .map(|x| {
                let m = alg.real_matrix(x);
                [m[0][0], m[0][1], m[1][0], m[1][1]]
            })
            .collect();
        let f = &alg.field;
        let ramified = alg
            .ramified_real
            .iter()
            .map(|&v| {
                basis
                    .iter()
                    .map(|x| {
                        let c = alg.components(x);
                        [f.embed(&c[0], v), f.embed(&c[1], v), f.embed(&c[2], v), f.embed(&c[3], v)]
                    })
                    .collect()
            })
            .collect();
        let ramified_ab = alg.ramified_real.iter().map(|&v| (f.embed(&alg.a, v), f.embed(&alg.b, v))).collect();
        EmbeddedBasis { basis, split, ramified, ramified_ab }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn split_matrix(&self, c: &[i64]) -> [f64; 4] {
        let mut m = [0.0; 4];
        for (k, &ck) in c.iter().enumerate() {
            if ck != 0 {
                for (o, v) in m.iter_mut().zip(&self.split[k]) {
                    *o += ck as f64 * v;
                }
            }
        }
        m
    }

    /// `v(nrd x)` at each ramified place.
    pub fn ramified_nrd(&self, c: &[i64]) -> Vec<f64> {
        self.ramified
            .iter()
            .zip(&self.ramified_ab)
            .map(|(imgs, &(a, b))| {
                let mut x = [0.0; 4];
                for (k, &ck) in c.iter().enumerate() {
                    if ck != 0 {
                        for (o, v) in x.iter_mut().zip(&imgs[k]) {
                            *o += ck as f64 * v;
                        }
                    }
                }
                x[0] * x[0] - a * x[1] * x[1] - b * x[2] * x[2] + a * b * x[3] * x[3]
            })
            .collect()
    }

    /// Approximate `N_{F/Q}(nrd x)`.
    pub fn approx_norm(&self, c: &[i64]) -> f64 {
        let m = self.split_matrix(c);
        let mut n = m[0] * m[3] - m[1] * m[2];
        for r in self.ramified_nrd(c) {
            n *= r;
        }
        n
    }

    pub fn element(&self, alg: &QuatAlgebra, c: &[i64]) -> QuatElement {
        let mut x = alg.zero();
        for (k, &ck) in c.iter().enumerate() {
            if ck != 0 {
                x = alg.add(&x, &alg.scale_int(&self.basis[k], &Int::from(ck)));
            }
        }
        x
    }

    /// Gram matrix of `|iota(x)|_F^2 + sum_ram v(nrd x)`.
    pub fn absolute_gram(&self) -> Vec<Vec<f64>> {
        self.weighted_gram(1.0)
    }

    /// Gram matrix of `|iota(x)|_F^2 + t sum_ram v(nrd x)`.
    pub fn weighted_gram(&self, weight: f64) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut g = vec![vec![0.0; n]; n];
        for s in 0..n {
            for t in s..n {
                let mut v: f64 = (0..4).map(|r| self.split[s][r] * self.split[t][r]).sum();
                for (imgs, &(a, b)) in self.ramified.iter().zip(&self.ramified_ab) {
                    let (x, y) = (&imgs[s], &imgs[t]);
                    v += weight * (x[0] * y[0] - a * x[1] * y[1] - b * x[2] * y[2] + a * b * x[3] * y[3]);
                }
                g[s][t] = v;
                g[t][s] = v;
            }
        }
        g
    }
}

/// A generator `π` of the left ideal `I = O π` (with `O` its left order)
/// whose reduced norm has the requested sign at the split place.
pub fn principalize(alg: &QuatAlgebra, ideal: &QuatLattice, sign: NrdSign) -> Result<QuatElement> {
    let f = &alg.field;
    let n_ideal = ideal.nrd(alg).norm();
    let target = crate::arith::ring::rat_to_f64(&n_ideal);
    let emb = EmbeddedBasis::new(alg, ideal);
    let gram = emb.absolute_gram();
    let deg = f.degree as f64;
    let mut bound = deg * 2.0 * target.powf(1.0 / deg);
    for _ in 0..DOUBLINGS {
        let vecs = match short_vectors(&gram, bound, ENUMERATION_CAP) {
            Ok(v) => v,
            Err(_) => return Err(Error::Principalization(format!("more than {} candidates below {:.3}", ENUMERATION_CAP, bound))),
        };
        for (_, c) in &vecs {
            let approx = emb.approx_norm(c).abs();
            if (approx - target).abs() > 1e-6 * target.max(1.0) + 1e-6 {
                continue;
            }
            let x = emb.element(alg, c);
            let nr = alg.nrd(&x);
            if f.norm(&nr).abs() != n_ideal {
                continue;
            }
            let s = f.sign_at(&nr, alg.split_place)?;
            let want = match sign {
                NrdSign::Positive => 1,
                NrdSign::Negative => -1,
            };
            if s == want {
                return Ok(x);
            }
        }
        bound *= 2.0;
    }
    Err(Error::Principalization("no generator found within the search bound".into()))
}

/// True if `O x = I` for the left order `O` of `I`.
pub fn generates(alg: &QuatAlgebra, ideal: &QuatLattice, x: &QuatElement) -> bool {
    ideal.contains(x) && alg.field.norm(&alg.nrd(x)).abs() == ideal.nrd(alg).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{factor_rational_prime, strict_class_group, unit_group, FracIdeal};
    use crate::quat::lattice::maximal_order;
    use crate::arith::ring::Field;
    use crate::quat::splitting::ResidueSplitting;
    use crate::quat::tests::cubic_algebra;

    #[test]
    fn principal_generators_in_the_cubic_algebra() {
        let alg = cubic_algebra();
        let f = &alg.field;
        let ug = unit_group(f).unwrap();
        let cg = strict_class_group(f, &ug, &FracIdeal::unit(f)).unwrap();
        let o = maximal_order(&alg, None).unwrap();
        let mut tested = 0;
        for p in [3u64, 5, 7, 11, 13] {
            for pr in factor_rational_prime(f, p).unwrap() {
                if cg.discrete_log(f, &ug, &pr.ideal).unwrap() != 0 {
                    continue;
                }
                let s = ResidueSplitting::new(&alg, &o, &pr).unwrap();
                let k = s.residue_field();
                let m = s.matrix_unit(0, 0, &k.one());
                let ia = o.right_mul(&alg, &s.preimage(&alg, &m)).sum(&o.scale_ideal(&alg, &pr.ideal));
                assert_eq!(ia.nrd(&alg), pr.ideal);
                for sign in [NrdSign::Positive, NrdSign::Negative] {
                    let x = principalize(&alg, &ia, sign).unwrap();
                    assert!(generates(&alg, &ia, &x));
                    assert_eq!(o.right_mul(&alg, &x), ia);
                }
                tested += 1;
            }
        }
        assert!(tested >= 2);
    }
}
