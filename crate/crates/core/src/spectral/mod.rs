//! Characteristic polynomials, factorization over `Q` and simultaneous
//! decomposition of commuting operators into Hecke-irreducible pieces.

use crate::arith::matrix::{self, kernel, mat_add, mat_mul, mat_scale, solve, Matrix};
use crate::arith::poly::{self, QPoly};
use crate::arith::ring::{Rat, Rationals};
use crate::arith::zfactor::{factor_over_q, to_monic_q};
use crate::cohomology::{CoeffField, El};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::cmp::Ordering;

const RANDOM_TRIES: usize = 3;

/// An operator on a `Q`-vector space acting on row vectors.
#[derive(Clone, Debug)]
pub struct LabeledOperator {
    pub label: String,
    pub norm: u64,
    pub matrix: Matrix<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Eigenvalue {
    Rational(Rat),
    /// Coordinates in the power basis of `E_f`.
    Algebraic(Vec<Rat>),
    /// Only the irreducible polynomial of the eigenvalue is determined.
    Root(QPoly),
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenSystem {
    pub dimension: usize,
    /// Monic irreducible polynomial defining `E_f`.
    pub field_poly: QPoly,
    /// Operator or combination whose eigenvalue generates `E_f`.
    pub generator: String,
    pub eigenvalues: Vec<(String, Eigenvalue)>,
    /// Char polys of the restrictions, in input order.
    pub char_polys: Vec<(String, QPoly)>,
}

#[derive(Clone, Debug)]
pub struct Constituent {
    pub basis: Vec<Vec<Rat>>,
    pub system: EigenSystem,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub constituents: Vec<Constituent>,
}

impl Decomposition {
    pub fn dimensions(&self) -> Vec<usize> {
        self.constituents.iter().map(|c| c.system.dimension).collect()
    }
}

/// Restriction of scalars of a matrix over `K` to `Q`.
pub fn to_rational_matrix(k: &CoeffField, m: &Matrix<El>) -> Matrix<Rat> {
    let d = k.degree();
    if d == 1 {
        return Matrix::from_fn(m.rows, m.cols, |i, j| m.get(i, j)[0].clone());
    }
    let blocks: Vec<Matrix<Rat>> = m.data.iter().map(|x| k.mult_matrix(x).transpose()).collect();
    Matrix::from_fn(m.rows * d, m.cols * d, |i, j| blocks[(i / d) * m.cols + j / d].get(i % d, j % d).clone())
}

/// Characteristic polynomial over `K`; that of the restriction of scalars
/// when some coefficient is irrational.
pub fn char_poly_over(k: &CoeffField, m: &Matrix<El>) -> QPoly {
    if k.degree() > 1 {
        let cp: Option<QPoly> = matrix::char_poly(k, m).iter().map(|c| k.to_rational(c)).collect();
        if let Some(cp) = cp {
            return cp;
        }
    }
    char_poly(&to_rational_matrix(k, m))
}

pub fn char_poly(m: &Matrix<Rat>) -> QPoly {
    matrix::char_poly(&Rationals, m)
}

/// Irreducible monic factors with multiplicity.
pub fn factor_rational(p: &[Rat], max_degree: usize) -> Result<Vec<(QPoly, usize)>> {
    let d = poly::degree(p).unwrap_or(0);
    if d > max_degree {
        return Err(Error::DegreeBound { degree: d, bound: max_degree });
    }
    Ok(factor_over_q(p).into_iter().map(|(f, e)| (to_monic_q(&f), e)).collect())
}

pub fn poly_of_matrix(p: &[Rat], m: &Matrix<Rat>) -> Matrix<Rat> {
    let q = &Rationals;
    let n = m.rows;
    let mut acc = matrix::zeros(q, n, n);
    for c in p.iter().rev() {
        acc = mat_mul(q, &acc, m);
        for i in 0..n {
            let v = acc.get(i, i) + c;
            acc.set(i, i, v);
        }
    }
    acc
}

struct Piece {
    basis: Vec<Vec<Rat>>,
}

impl Piece {
    fn restrict(&self, op: &Matrix<Rat>) -> Matrix<Rat> {
        let q = &Rationals;
        let b = Matrix::from_rows(self.basis.clone());
        let img = mat_mul(q, &b, op);
        // solve c B = img row by row: B^T c^T = img^T
        let bt = b.transpose();
        let rows: Vec<Vec<Rat>> = (0..img.rows).map(|i| solve(q, &bt, img.row(i)).expect("invariant subspace")).collect();
        Matrix::from_rows(rows)
    }

    /// Subspace `{ u B : u p(C)^e = 0 }`.
    fn sub(&self, c: &Matrix<Rat>, p: &[Rat], e: usize) -> Piece {
        let q = &Rationals;
        let pc = poly_of_matrix(p, c);
        let mut pe = matrix::identity(q, c.rows);
        for _ in 0..e {
            pe = mat_mul(q, &pe, &pc);
        }
        let ker = kernel(q, &pe.transpose());
        let b = Matrix::from_rows(self.basis.clone());
        let basis = ker.iter().map(|u| (0..b.cols).map(|j| (0..b.rows).map(|i| &u[i] * b.get(i, j)).sum()).collect()).collect();
        Piece { basis }
    }
}

fn split_piece(piece: Piece, c: &Matrix<Rat>, max_degree: usize) -> Result<Vec<Piece>> {
    let f = factor_rational(&char_poly(c), max_degree)?;
    if f.len() <= 1 {
        return Ok(vec![piece]);
    }
    Ok(f.iter().map(|(p, e)| piece.sub(c, p, *e)).collect())
}

fn commute(a: &Matrix<Rat>, b: &Matrix<Rat>) -> bool {
    mat_mul(&Rationals, a, b) == mat_mul(&Rationals, b, a)
}

fn random_combination(ops: &[Matrix<Rat>], rng: &mut ChaCha8Rng) -> (Vec<i64>, Matrix<Rat>) {
    let q = &Rationals;
    let n = ops[0].rows;
    let mut acc = matrix::zeros(q, n, n);
    let mut coeffs = Vec::new();
    for m in ops {
        let c: i64 = rng.gen_range(-5..=5);
        coeffs.push(c);
        acc = mat_add(q, &acc, &mat_scale(q, &Rat::from_integer(c.into()), m));
    }
    (coeffs, acc)
}

/// Writes `b = q(a)` for a matrix `a` whose char poly is irreducible of
/// degree `n = a.rows`.
fn express_as_polynomial(a: &Matrix<Rat>, b: &Matrix<Rat>) -> Option<Vec<Rat>> {
    let q = &Rationals;
    let n = a.rows;
    let mut powers = vec![matrix::identity(q, n)];
    for i in 1..n {
        powers.push(mat_mul(q, &powers[i - 1], a));
    }
    let sys = Matrix::from_fn(n * n, n, |r, c| powers[c].data[r].clone());
    solve(q, &sys, &b.data)
}

/// Simultaneous decomposition of `Q^dim` under commuting operators, refined
/// in the given order.
pub fn decompose(ops: &[LabeledOperator], dim: usize, max_degree: usize) -> Result<Decomposition> {
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if !commute(&ops[i].matrix, &ops[j].matrix) {
                return Err(Error::NonCommuting);
            }
        }
    }
    let q = &Rationals;
    let full = Piece { basis: matrix::identity(q, dim).to_rows() };
    let mut pieces = if dim == 0 { Vec::new() } else { vec![full] };
    for op in ops {
        let mut next = Vec::new();
        for p in pieces {
            let c = p.restrict(&op.matrix);
            next.extend(split_piece(p, &c, max_degree)?);
        }
        pieces = next;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut constituents = Vec::new();
    let mut queue = pieces;
    while let Some(p) = queue.pop() {
        let d = p.basis.len();
        let restricted: Vec<Matrix<Rat>> = ops.iter().map(|o| p.restrict(&o.matrix)).collect();
        let polys: Vec<QPoly> = restricted.iter().map(char_poly).collect();
        let mut generator: Option<(String, Matrix<Rat>, QPoly)> = None;
        for ((o, c), cp) in ops.iter().zip(&restricted).zip(&polys) {
            let f = factor_rational(cp, max_degree)?;
            if f.len() == 1 && f[0].1 == 1 {
                generator = Some((o.label.clone(), c.clone(), f[0].0.clone()));
                break;
            }
        }
        let mut split = false;
        if generator.is_none() && !restricted.is_empty() {
            for _ in 0..RANDOM_TRIES {
                let (coeffs, m) = random_combination(&restricted, &mut rng);
                let f = factor_rational(&char_poly(&m), max_degree)?;
                if f.len() == 1 && f[0].1 == 1 {
                    let label = ops.iter().zip(&coeffs).filter(|(_, &c)| c != 0).map(|(o, c)| format!("{c}*T[{}]", o.label)).collect::<Vec<_>>().join("+");
                    generator = Some((label, m, f[0].0.clone()));
                    break;
                }
                if f.len() > 1 {
                    queue.extend(split_piece(Piece { basis: p.basis.clone() }, &m, max_degree)?);
                    split = true;
                    break;
                }
            }
        }
        if split {
            continue;
        }
        let char_polys: Vec<(String, QPoly)> = ops.iter().map(|o| o.label.clone()).zip(polys.iter().cloned()).collect();
        let system = match generator {
            Some((label, a, fp)) => {
                let eigenvalues = ops
                    .iter()
                    .zip(&restricted)
                    .map(|(o, b)| {
                        let v = if d == 1 {
                            Eigenvalue::Rational(b.get(0, 0).clone())
                        } else {
                            match express_as_polynomial(&a, b) {
                                Some(c) if c.iter().skip(1).all(|x| x.is_zero()) => Eigenvalue::Rational(c[0].clone()),
                                Some(c) => Eigenvalue::Algebraic(c),
                                None => Eigenvalue::Root(root_poly(b, max_degree)),
                            }
                        };
                        (o.label.clone(), v)
                    })
                    .collect();
                EigenSystem { dimension: d, field_poly: fp, generator: label, eigenvalues, char_polys }
            }
            None => {
                // not a field: only the eigenvalue polynomials are determined
                let eigenvalues = ops
                    .iter()
                    .zip(&restricted)
                    .map(|(o, b)| {
                        let r = root_poly(b, max_degree);
                        let v = if r.len() == 2 { Eigenvalue::Rational(-r[0].clone()) } else { Eigenvalue::Root(r) };
                        (o.label.clone(), v)
                    })
                    .collect();
                let fp = restricted.first().map_or_else(|| vec![Rat::zero(), Rat::one()], |b| root_poly(b, max_degree));
                EigenSystem { dimension: d, field_poly: fp, generator: "none".into(), eigenvalues, char_polys }
            }
        };
        constituents.push(Constituent { basis: p.basis, system });
    }
    constituents.sort_by(|a, b| compare_systems(&a.system, &b.system));
    Ok(Decomposition { constituents })
}

fn root_poly(b: &Matrix<Rat>, max_degree: usize) -> QPoly {
    factor_rational(&char_poly(b), max_degree).ok().and_then(|f| f.first().map(|x| x.0.clone())).unwrap_or_default()
}

/// Dimension, then eigenvalues in operator order with rational values
/// descending.
pub fn compare_systems(a: &EigenSystem, b: &EigenSystem) -> Ordering {
    a.dimension.cmp(&b.dimension).then_with(|| {
        for ((_, x), (_, y)) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            let o = match (x, y) {
                (Eigenvalue::Rational(u), Eigenvalue::Rational(v)) => v.cmp(u),
                _ => {
                    let pa = a.char_polys.iter().map(|c| &c.1).collect::<Vec<_>>();
                    let pb = b.char_polys.iter().map(|c| &c.1).collect::<Vec<_>>();
                    pa.cmp(&pb)
                }
            };
            if o != Ordering::Equal {
                return o;
            }
        }
        a.field_poly.cmp(&b.field_poly)
    })
}

/// Largest modulus of a complex root, by Durand-Kerner iteration.
pub fn max_root_modulus(p: &[Rat]) -> f64 {
    use num_complex::Complex64;
    let p = poly::trimmed(p.to_vec());
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return 0.0;
    }
    let lead = crate::arith::ring::rat_to_f64(&p[n]);
    let c: Vec<f64> = p.iter().map(|x| crate::arith::ring::rat_to_f64(x) / lead).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a);
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut roots: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    for _ in 0..500 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 * radius {
            break;
        }
    }
    roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Checks that an eigenvalue is a root of the restricted char poly.
pub fn eigenvalue_is_root(system: &EigenSystem, label: &str) -> bool {
    let Some((_, cp)) = system.char_polys.iter().find(|(l, _)| l == label) else {
        return false;
    };
    let Some((_, v)) = system.eigenvalues.iter().find(|(l, _)| l == label) else {
        return false;
    };
    match v {
        Eigenvalue::Rational(r) => poly::eval(cp, r).is_zero(),
        Eigenvalue::Algebraic(c) => {
            // evaluate cp(c(θ)) modulo the field polynomial
            let mut acc: QPoly = Vec::new();
            for coeff in cp.iter().rev() {
                acc = poly::rem(&poly::mul(&acc, c), &system.field_poly);
                acc = poly::add(&acc, &[coeff.clone()]);
            }
            poly::trimmed(poly::rem(&acc, &system.field_poly)).is_empty()
        }
        Eigenvalue::Root(p) => poly::rem(cp, p).iter().all(|x| x.is_zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::from_ints;

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect()).collect())
    }

    fn cofactor_det(a: &[Vec<QPoly>]) -> QPoly {
        let n = a.len();
        if n == 1 {
            return a[0][0].clone();
        }
        let mut acc: QPoly = Vec::new();
        for j in 0..n {
            let minor: Vec<Vec<QPoly>> = (1..n).map(|i| (0..n).filter(|&c| c != j).map(|c| a[i][c].clone()).collect()).collect();
            let term = poly::mul(&a[0][j], &cofactor_det(&minor));
            acc = if j % 2 == 0 { poly::add(&acc, &term) } else { poly::sub(&acc, &term) };
        }
        acc
    }

    #[test]
    fn char_poly_matches_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a: Vec<Vec<i64>> = (0..5).map(|_| (0..5).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let mat = Matrix::from_rows(a.iter().map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect()).collect());
        let xi: Vec<Vec<QPoly>> = (0..5)
            .map(|i| (0..5).map(|j| if i == j { from_ints(&[-a[i][j], 1]) } else { from_ints(&[-a[i][j]]) }).collect())
            .collect();
        assert_eq!(poly::trimmed(char_poly(&mat)), poly::trimmed(cofactor_det(&xi)));
        let id = matrix::identity(&Rationals, 3);
        assert_eq!(char_poly(&id), from_ints(&[-1, 3, -3, 1]));
    }

    #[test]
    fn factors_known_products() {
        let f = factor_rational(&from_ints(&[-4, 0, 1]), 12).unwrap();
        assert_eq!(f, vec![(from_ints(&[-2, 1]), 1), (from_ints(&[2, 1]), 1)]);
        let a = from_ints(&[-1, -2, 1]);
        let b = from_ints(&[9, 0, 31, 0, 11, 0, 1]);
        let c = from_ints(&[-1, 2, 1]);
        let f = factor_rational(&poly::mul(&poly::mul(&a, &b), &c), 12).unwrap();
        assert_eq!(f.len(), 3);
        assert!(f.contains(&(b, 1)));
        assert!(factor_rational(&from_ints(&[1; 14]), 12).is_err());
    }

    #[test]
    fn decomposes_commuting_operators() {
        // swap on Q^2 and a diagonal block on Q^2
        let t = m(&[&[0, 2, 0, 0], &[2, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 2, 0]]);
        let ops = vec![LabeledOperator { label: "T".into(), norm: 3, matrix: t }];
        let d = decompose(&ops, 4, 12).unwrap();
        assert_eq!(d.dimensions(), vec![1, 1, 2]);
        assert_eq!(d.constituents[0].system.eigenvalues[0].1, Eigenvalue::Rational(Rat::from_integer(2.into())));
        assert_eq!(d.constituents[1].system.eigenvalues[0].1, Eigenvalue::Rational(Rat::from_integer((-2).into())));
        assert_eq!(d.constituents[2].system.field_poly, from_ints(&[-2, 0, 1]));
        let s = m(&[&[3, 0], &[0, 3]]);
        let d = decompose(&[LabeledOperator { label: "S".into(), norm: 2, matrix: s }], 2, 12).unwrap();
        assert_eq!(d.dimensions(), vec![2]);
        let a = m(&[&[1, 1], &[0, 1]]);
        let b = m(&[&[1, 0], &[1, 1]]);
        let ops = vec![LabeledOperator { label: "A".into(), norm: 2, matrix: a }, LabeledOperator { label: "B".into(), norm: 3, matrix: b }];
        assert!(matches!(decompose(&ops, 2, 12), Err(Error::NonCommuting)));
    }

    #[test]
    fn algebraic_eigenvalues_are_roots() {
        let a = m(&[&[0, 1], &[2, 0]]);
        let b = mat_add(&Rationals, &mat_mul(&Rationals, &a, &a), &a);
        let ops = vec![
            LabeledOperator { label: "A".into(), norm: 2, matrix: a },
            LabeledOperator { label: "B".into(), norm: 3, matrix: b },
        ];
        let d = decompose(&ops, 2, 12).unwrap();
        let s = &d.constituents[0].system;
        assert_eq!(s.eigenvalues[1].1, Eigenvalue::Algebraic(vec![Rat::from_integer(2.into()), Rat::one()]));
        assert!(eigenvalue_is_root(s, "A") && eigenvalue_is_root(s, "B"));
    }
}
