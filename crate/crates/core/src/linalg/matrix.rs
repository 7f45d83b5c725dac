use std::fmt;

use super::scalar::{Field, Scalar};

/// Dense matrix over an exact field, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from row-major entries; panics if the length is wrong.
    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn from_ints(field: Field, rows: usize, cols: usize, data: &[i64]) -> Matrix {
        Matrix::from_vec(
            field,
            rows,
            cols,
            data.iter().map(|&v| field.from_i64(v)).collect(),
        )
    }

    /// A single column vector.
    pub fn column(field: Field, entries: Vec<Scalar>) -> Matrix {
        let n = entries.len();
        Matrix::from_vec(field, n, 1, entries)
    }

    pub fn scalar_diag(n: usize, s: &Scalar) -> Matrix {
        let field = s.field();
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let v = self.get(i, j);
                    if i == j {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix::from_vec(self.field, self.cols, self.rows, data)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch {:?} * {:?}",
            self.shape(),
            other.shape()
        );
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let brow = other.row(k);
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o = &*o + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Matrix::from_vec(self.field, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sub");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Matrix::from_vec(self.field, self.rows, self.cols, data)
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix::from_vec(self.field, self.rows, self.cols, data)
    }

    /// `a * self + b * other`, the workhorse for pencil combinations.
    pub fn combine(&self, a: &Scalar, other: &Matrix, b: &Scalar) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in combine");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| {
                let l = if a.is_zero() || x.is_zero() {
                    None
                } else {
                    Some(a * x)
                };
                let r = if b.is_zero() || y.is_zero() {
                    None
                } else {
                    Some(b * y)
                };
                match (l, r) {
                    (None, None) => self.field.zero(),
                    (Some(l), None) => l,
                    (None, Some(r)) => r,
                    (Some(l), Some(r)) => l + r,
                }
            })
            .collect();
        Matrix::from_vec(self.field, self.rows, self.cols, data)
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix::from_vec(self.field, self.rows, self.cols + other.cols, data)
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix::from_vec(self.field, self.rows + other.rows, self.cols, data)
    }

    pub fn block_diag(blocks: &[&Matrix], field: Field) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix::from_vec(self.field, idx.len(), self.cols, data)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix::from_vec(self.field, self.rows, idx.len(), data)
    }

    /// Rows `r0..r1`.
    pub fn row_range(&self, r0: usize, r1: usize) -> Matrix {
        let idx: Vec<usize> = (r0..r1).collect();
        self.select_rows(&idx)
    }

    /// Columns `c0..c1`.
    pub fn col_range(&self, c0: usize, c1: usize) -> Matrix {
        let idx: Vec<usize> = (c0..c1).collect();
        self.select_cols(&idx)
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = eliminate(&mut rows, self.cols, true);
        let data = rows.into_iter().flatten().collect();
        (Matrix::from_vec(self.field, self.rows, self.cols, data), pivots)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the shorter side
        if self.rows <= self.cols {
            let mut rows = self.to_rows();
            eliminate(&mut rows, self.cols, false).len()
        } else {
            let mut rows = self.transpose().to_rows();
            eliminate(&mut rows, self.rows, false).len()
        }
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let mut rows = aug.to_rows();
        let pivots = eliminate(&mut rows, n, true);
        if pivots.len() < n {
            return None;
        }
        let data = rows.into_iter().flat_map(|r| r[n..].to_vec()).collect();
        Some(Matrix::from_vec(self.field, n, n, data))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut rows = self.to_rows();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !rows[r][c].is_zero()) else {
                return self.field.zero();
            };
            if p != c {
                rows.swap(p, c);
                det = -det;
            }
            let piv = rows[c][c].clone();
            det = &det * &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for r in c + 1..n {
                if rows[r][c].is_zero() {
                    continue;
                }
                let f = &rows[r][c] * &inv;
                let (top, bottom) = rows.split_at_mut(r);
                let prow = &top[c];
                for (x, y) in bottom[0][c..].iter_mut().zip(&prow[c..]) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        det
    }

    /// Solves `self * X = rhs` when `self` has full column rank and a solution exists.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "row mismatch in solve");
        let n = self.cols;
        let aug = self.hstack(rhs);
        let mut rows = aug.to_rows();
        let pivots = eliminate(&mut rows, n, true);
        if pivots.len() < n {
            return None;
        }
        // consistency: rows past the rank must vanish on the right-hand side
        if rows[n..].iter().any(|r| r[n..].iter().any(|v| !v.is_zero())) {
            return None;
        }
        let data = rows[..n].iter().flat_map(|r| r[n..].to_vec()).collect();
        Some(Matrix::from_vec(self.field, n, rhs.cols, data))
    }

    /// Some `X` with `self * X = rhs`, free variables set to zero, or `None`
    /// when the system is inconsistent.
    pub fn solve_any(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "row mismatch in solve");
        let n = self.cols;
        let mut rows = self.hstack(rhs).to_rows();
        let pivots = eliminate(&mut rows, n, true);
        let r = pivots.len();
        if rows[r..].iter().any(|row| row[n..].iter().any(|v| !v.is_zero())) {
            return None;
        }
        let mut out = Matrix::zeros(self.field, n, rhs.cols);
        for (row, &c) in rows.iter().zip(&pivots) {
            for (j, v) in row[n..].iter().enumerate() {
                out.set(c, j, v.clone());
            }
        }
        Some(out)
    }
}

/// Gauss-Jordan elimination on the first `ncols` columns of `rows` in place.
/// With `reduce` the result is reduced row-echelon on those columns;
/// otherwise only the forward pass runs. Returns the pivot columns.
pub(crate) fn eliminate(rows: &mut [Vec<Scalar>], ncols: usize, reduce: bool) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // lightest nonzero entry keeps intermediate growth down
        let mut best: Option<(usize, u64)> = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            let v = &row[c];
            if !v.is_zero() {
                let w = v.weight();
                if best.is_none_or(|(_, bw)| w < bw) {
                    best = Some((i, w));
                    if w <= 2 {
                        break;
                    }
                }
            }
        }
        let Some((p, _)) = best else { continue };
        rows.swap(p, r);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for v in rows[r][c..].iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        let prow = rows[r].clone();
        let start = if reduce { 0 } else { r + 1 };
        for (i, row) in rows.iter_mut().enumerate().skip(start) {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&prow[c..]) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn rref_examples() {
        let z = Matrix::zeros(Q, 2, 2);
        assert_eq!(z.rref(), (z.clone(), vec![]));

        let m = Matrix::from_ints(Q, 1, 1, &[2]);
        assert_eq!(m.rref(), (Matrix::from_ints(Q, 1, 1, &[1]), vec![0]));

        let m = Matrix::from_ints(Q, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(m.rref(), (Matrix::from_ints(Q, 2, 2, &[1, 2, 0, 0]), vec![0]));
    }

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_ints(Q, 3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert_eq!(m.det(), Q.from_i64(18));
        let s = Matrix::from_ints(Q, 2, 2, &[1, 2, 2, 4]);
        assert!(s.inverse().is_none());
        assert!(s.det().is_zero());
    }

    #[test]
    fn det_over_prime_field() {
        let f = Field::prime(5).unwrap();
        let m = Matrix::from_ints(f, 2, 2, &[1, 2, 3, 4]);
        // 4 - 6 = -2 = 3 mod 5
        assert_eq!(m.det(), f.from_i64(3));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = Matrix::from_ints(Q, 2, 1, &[1, 1]);
        assert_eq!(
            a.solve(&Matrix::from_ints(Q, 2, 1, &[3, 3])),
            Some(Matrix::from_ints(Q, 1, 1, &[3]))
        );
        assert_eq!(a.solve(&Matrix::from_ints(Q, 2, 1, &[3, 4])), None);
    }

    #[test]
    fn rank_of_empty_shapes() {
        assert_eq!(Matrix::zeros(Q, 0, 3).rank(), 0);
        assert_eq!(Matrix::zeros(Q, 3, 0).rank(), 0);
        assert_eq!(Matrix::zeros(Q, 0, 0).det(), Q.one());
    }
}
