//! LLL reduction and Fincke-Pohst enumeration for positive definite forms
//! given by floating point Gram matrices over an integral basis.

/// Result of LLL: `transform[k]` gives the k-th reduced vector as integer
/// combination of the input basis; `gram` is the reduced Gram matrix.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub transform: Vec<Vec<i64>>,
    pub gram: Vec<Vec<f64>>,
}

fn gram_schmidt(g: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j];
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * b[k];
            }
            mu[i][j] = s / b[j];
        }
        let mut s = g[i][i];
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * b[k];
        }
        b[i] = s;
    }
    (mu, b)
}

pub fn lll(gram: &[Vec<f64>]) -> Reduced {
    let n = gram.len();
    let mut g: Vec<Vec<f64>> = gram.to_vec();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let delta = 0.99;
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 100_000 {
            break;
        }
        // size reduce b_k against b_{k-1}, ..., b_0
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&g);
            let q = mu[k][j].round();
            if q != 0.0 {
                let qi = q as i64;
                for t in 0..n {
                    u[k][t] -= qi * u[j][t];
                }
                for t in 0..n {
                    let v = gram_entry(gram, &u[k], &u[t]);
                    g[k][t] = v;
                    g[t][k] = v;
                }
            }
        }
        let (mu, b) = gram_schmidt(&g);
        if b[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * b[k - 1] {
            u.swap(k, k - 1);
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    // recompute Gram from scratch to avoid drift
    let gram_red: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| gram_entry(gram, &u[i], &u[j])).collect()).collect();
    Reduced { transform: u, gram: gram_red }
}

fn gram_entry(g: &[Vec<f64>], x: &[i64], y: &[i64]) -> f64 {
    let n = g.len();
    let mut s = 0.0;
    for i in 0..n {
        if x[i] == 0 {
            continue;
        }
        for j in 0..n {
            if y[j] != 0 {
                s += (x[i] as f64) * g[i][j] * (y[j] as f64);
            }
        }
    }
    s
}

pub fn form_value(g: &[Vec<f64>], x: &[i64]) -> f64 {
    gram_entry(g, x, x)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TooManyVectors;

/// All nonzero integer vectors `x` (one of each pair `±x`) with
/// `x^T G x <= bound`, in coordinates of the original basis, sorted by form
/// value then lexicographically.
pub fn short_vectors(gram: &[Vec<f64>], bound: f64, max_count: usize) -> Result<Vec<(f64, Vec<i64>)>, TooManyVectors> {
    let n = gram.len();
    let red = lll(gram);
    let g = &red.gram;
    // Cholesky-like decomposition q for Fincke-Pohst
    let mut q = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            q[i][j] = g[i][j];
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    let eps = 1e-9 * bound.max(1.0);
    let mut out: Vec<(f64, Vec<i64>)> = Vec::new();
    let mut x = vec![0i64; n];
    let mut t = vec![0.0f64; n + 1];
    let mut center = vec![0.0f64; n];
    // recursive enumeration from the last coordinate down
    fn rec(
        level: usize,
        n: usize,
        q: &[Vec<f64>],
        bound: f64,
        eps: f64,
        x: &mut Vec<i64>,
        t: &mut Vec<f64>,
        center: &mut Vec<f64>,
        out: &mut Vec<(f64, Vec<i64>)>,
        max_count: usize,
    ) -> Result<(), TooManyVectors> {
        // t[level+1] is the partial sum from coordinates > level
        let mut c = 0.0;
        for j in level + 1..n {
            c -= q[level][j] * x[j] as f64;
        }
        center[level] = c;
        let rem = bound - t[level + 1];
        if rem < -eps {
            return Ok(());
        }
        let r = ((rem.max(0.0) + eps) / q[level][level]).sqrt();
        let lo = (c - r).ceil() as i64;
        let hi = (c + r).floor() as i64;
        for v in lo..=hi {
            x[level] = v;
            let d = v as f64 - c;
            t[level] = t[level + 1] + q[level][level] * d * d;
            if t[level] > bound + eps {
                continue;
            }
            if level == 0 {
                if x.iter().any(|&y| y != 0) {
                    out.push((t[0], x.clone()));
                    if out.len() > max_count {
                        return Err(TooManyVectors);
                    }
                }
            } else {
                rec(level - 1, n, q, bound, eps, x, t, center, out, max_count)?;
            }
        }
        x[level] = 0;
        Ok(())
    }
    if n == 0 {
        return Ok(out);
    }
    t[n] = 0.0;
    rec(n - 1, n, &q, bound, eps, &mut x, &mut t, &mut center, &mut out, 2 * max_count + 2)?;
    // map back to original coordinates; keep one of each sign pair
    let mut result: Vec<(f64, Vec<i64>)> = Vec::new();
    for (_, y) in out {
        let mut orig = vec![0i64; n];
        for (k, &c) in y.iter().enumerate() {
            if c != 0 {
                for j in 0..n {
                    orig[j] += c * red.transform[k][j];
                }
            }
        }
        let first = orig.iter().find(|&&c| c != 0).copied().unwrap_or(0);
        if first < 0 {
            continue;
        }
        let val = form_value(gram, &orig);
        result.push((val, orig));
    }
    if result.len() > max_count {
        return Err(TooManyVectors);
    }
    result.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then_with(|| a.1.cmp(&b.1)));
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_in_z2() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let v = short_vectors(&g, 2.0, 1000).unwrap();
        // (1,0),(0,1),(1,1),(1,-1)
        assert_eq!(v.len(), 4);
        assert_eq!(v[0].1, vec![0, 1]);
    }

    #[test]
    fn skewed_basis_enumeration_matches_brute_force() {
        // basis (1,0), (7,1) of Z^2 under the standard form
        let g = vec![vec![1.0, 7.0], vec![7.0, 50.0]];
        let v = short_vectors(&g, 5.0, 1000).unwrap();
        let mut brute = 0;
        for a in -60i64..=60 {
            for b in -10i64..=10 {
                let val = form_value(&g, &[a, b]);
                if (a, b) != (0, 0) && val <= 5.0 + 1e-9 {
                    brute += 1;
                }
            }
        }
        assert_eq!(v.len() * 2, brute);
    }
}
