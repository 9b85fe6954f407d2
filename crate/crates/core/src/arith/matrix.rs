//! Dense matrices over an arbitrary [`Field`] context.

use super::ring::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<T> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged rows");
        Matrix { rows: r, cols: c, data }
    }
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

pub fn zeros<F: Field>(f: &F, rows: usize, cols: usize) -> Matrix<F::El> {
    Matrix::from_fn(rows, cols, |_, _| f.zero())
}

pub fn identity<F: Field>(f: &F, n: usize) -> Matrix<F::El> {
    Matrix::from_fn(n, n, |i, j| if i == j { f.one() } else { f.zero() })
}

pub fn mat_mul<F: Field>(f: &F, a: &Matrix<F::El>, b: &Matrix<F::El>) -> Matrix<F::El> {
    assert_eq!(a.cols, b.rows, "dimension mismatch in product");
    let mut out = zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.get(k, j);
                if f.is_zero(bkj) {
                    continue;
                }
                let v = f.add(out.get(i, j), &f.mul(aik, bkj));
                out.set(i, j, v);
            }
        }
    }
    out
}

pub fn mat_add<F: Field>(f: &F, a: &Matrix<F::El>, b: &Matrix<F::El>) -> Matrix<F::El> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix::from_fn(a.rows, a.cols, |i, j| f.add(a.get(i, j), b.get(i, j)))
}

pub fn mat_sub<F: Field>(f: &F, a: &Matrix<F::El>, b: &Matrix<F::El>) -> Matrix<F::El> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix::from_fn(a.rows, a.cols, |i, j| f.sub(a.get(i, j), b.get(i, j)))
}

pub fn mat_scale<F: Field>(f: &F, c: &F::El, a: &Matrix<F::El>) -> Matrix<F::El> {
    Matrix::from_fn(a.rows, a.cols, |i, j| f.mul(c, a.get(i, j)))
}

pub fn mat_vec<F: Field>(f: &F, a: &Matrix<F::El>, v: &[F::El]) -> Vec<F::El> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|i| {
            let mut acc = f.zero();
            for (j, x) in v.iter().enumerate() {
                if !f.is_zero(x) {
                    acc = f.add(&acc, &f.mul(a.get(i, j), x));
                }
            }
            acc
        })
        .collect()
}

pub fn is_zero_matrix<F: Field>(f: &F, a: &Matrix<F::El>) -> bool {
    a.data.iter().all(|x| f.is_zero(x))
}

/// Reduced row echelon form; returns the matrix and its pivot columns.
pub fn rref<F: Field>(f: &F, a: &Matrix<F::El>) -> (Matrix<F::El>, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = f.inv(m.get(r, c));
        for j in c..m.cols {
            let v = f.mul(m.get(r, j), &inv);
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c).clone();
            if f.is_zero(&factor) {
                continue;
            }
            for j in c..m.cols {
                let rv = m.get(r, j).clone();
                if f.is_zero(&rv) {
                    continue;
                }
                let v = f.sub(m.get(i, j), &f.mul(&factor, &rv));
                m.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn rank<F: Field>(f: &F, a: &Matrix<F::El>) -> usize {
    rref(f, a).1.len()
}

/// Basis of the right kernel `{x : A x = 0}`, one vector per free column,
/// in increasing order of the free column.
pub fn kernel<F: Field>(f: &F, a: &Matrix<F::El>) -> Vec<Vec<F::El>> {
    let (r, pivots) = rref(f, a);
    let mut out = Vec::new();
    let mut is_pivot = vec![None; a.cols];
    for (row, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(row);
    }
    for free in 0..a.cols {
        if is_pivot[free].is_some() {
            continue;
        }
        let mut v = vec![f.zero(); a.cols];
        v[free] = f.one();
        for (row, &c) in pivots.iter().enumerate() {
            v[c] = f.neg(r.get(row, free));
        }
        out.push(v);
    }
    out
}

/// Solves `A x = b`; `None` if inconsistent. Free variables are set to zero.
pub fn solve<F: Field>(f: &F, a: &Matrix<F::El>, b: &[F::El]) -> Option<Vec<F::El>> {
    assert_eq!(a.rows, b.len());
    let aug = Matrix::from_fn(a.rows, a.cols + 1, |i, j| {
        if j < a.cols {
            a.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let (r, pivots) = rref(f, &aug);
    if pivots.last() == Some(&a.cols) {
        return None;
    }
    let mut x = vec![f.zero(); a.cols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = r.get(row, a.cols).clone();
    }
    Some(x)
}

pub fn inverse<F: Field>(f: &F, a: &Matrix<F::El>) -> Option<Matrix<F::El>> {
    assert!(a.is_square());
    let n = a.rows;
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            a.get(i, j).clone()
        } else if j - n == i {
            f.one()
        } else {
            f.zero()
        }
    });
    let (r, pivots) = rref(f, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
}

pub fn determinant<F: Field>(f: &F, a: &Matrix<F::El>) -> F::El {
    assert!(a.is_square());
    let n = a.rows;
    let mut m = a.clone();
    let mut det = f.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !f.is_zero(m.get(i, c))) else {
            return f.zero();
        };
        if p != c {
            for j in 0..n {
                m.data.swap(p * n + j, c * n + j);
            }
            det = f.neg(&det);
        }
        let piv = m.get(c, c).clone();
        det = f.mul(&det, &piv);
        let inv = f.inv(&piv);
        for i in c + 1..n {
            let factor = f.mul(m.get(i, c), &inv);
            if f.is_zero(&factor) {
                continue;
            }
            for j in c..n {
                let v = f.sub(m.get(i, j), &f.mul(&factor, m.get(c, j)));
                m.set(i, j, v);
            }
        }
    }
    det
}

/// Row space basis (rows of the rref, nonzero part).
pub fn row_space<F: Field>(f: &F, vectors: &[Vec<F::El>], dim: usize) -> Vec<Vec<F::El>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_rows(vectors.to_vec());
    assert_eq!(m.cols, dim);
    let (r, pivots) = rref(f, &m);
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Characteristic polynomial `det(xI - A)` as ascending coefficients,
/// computed through an upper Hessenberg reduction.
pub fn char_poly<F: Field>(f: &F, a: &Matrix<F::El>) -> Vec<F::El> {
    assert!(a.is_square());
    let n = a.rows;
    let mut h = a.clone();
    // Hessenberg reduction by similarity transforms
    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&i| !f.is_zero(h.get(i, c))) else {
            continue;
        };
        if p != c + 1 {
            let q = c + 1;
            for j in 0..n {
                h.data.swap(p * n + j, q * n + j);
            }
            for i in 0..n {
                h.data.swap(i * n + p, i * n + q);
            }
        }
        let inv = f.inv(h.get(c + 1, c));
        for i in c + 2..n {
            let u = f.mul(h.get(i, c), &inv);
            if f.is_zero(&u) {
                continue;
            }
            // row_i -= u * row_{c+1}
            for j in 0..n {
                let v = f.sub(h.get(i, j), &f.mul(&u, h.get(c + 1, j)));
                h.set(i, j, v);
            }
            // col_{c+1} += u * col_i
            for r in 0..n {
                let v = f.add(h.get(r, c + 1), &f.mul(&u, h.get(r, i)));
                h.set(r, c + 1, v);
            }
        }
    }
    // recurrence on leading principal submatrices
    let mut polys: Vec<Vec<F::El>> = vec![vec![f.one()]];
    for m in 1..=n {
        let hm = h.get(m - 1, m - 1).clone();
        // (x - h_mm) * p_{m-1}
        let prev = &polys[m - 1];
        let mut p = vec![f.zero(); m + 1];
        for (k, c) in prev.iter().enumerate() {
            p[k + 1] = f.add(&p[k + 1], c);
            p[k] = f.sub(&p[k], &f.mul(&hm, c));
        }
        let mut prod = f.one();
        for i in 1..m {
            // product of subdiagonal entries h_{m-1,m-2} ... h_{m-i, m-i-1}
            prod = f.mul(&prod, h.get(m - i, m - i - 1));
            if f.is_zero(&prod) {
                break;
            }
            let coeff = f.mul(&prod, h.get(m - i - 1, m - 1));
            let q = &polys[m - i - 1];
            for (k, c) in q.iter().enumerate() {
                p[k] = f.sub(&p[k], &f.mul(&coeff, c));
            }
        }
        polys.push(p);
    }
    polys.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ring::{rint, Rat, Rationals};

    fn qm(rows: Vec<Vec<i64>>) -> Matrix<Rat> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(rint).collect()).collect())
    }

    #[test]
    fn kernel_and_rank() {
        let a = qm(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank(&Rationals, &a), 2);
        let k = kernel(&Rationals, &a);
        assert_eq!(k.len(), 1);
        let z = mat_vec(&Rationals, &a, &k[0]);
        assert!(z.iter().all(|x| *x == rint(0)));
    }

    #[test]
    fn char_poly_of_companion() {
        // companion of x^3 - 2x + 5
        let a = qm(vec![vec![0, 0, -5], vec![1, 0, 2], vec![0, 1, 0]]);
        let p = char_poly(&Rationals, &a);
        assert_eq!(p, vec![rint(5), rint(-2), rint(0), rint(1)]);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = qm(vec![vec![2, 1], vec![7, 4]]);
        let inv = inverse(&Rationals, &a).unwrap();
        assert_eq!(mat_mul(&Rationals, &a, &inv), identity(&Rationals, 2));
        assert_eq!(determinant(&Rationals, &a), rint(1));
    }
}
