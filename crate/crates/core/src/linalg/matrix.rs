use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;

/// Dense matrix over the rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must share a length; `cols`
    /// is needed to type the zero-row case.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Matrix { rows: r, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect(),
            cols,
        )
    }

    pub fn scalar(x: Rational) -> Self {
        Matrix { rows: 1, cols: 1, data: vec![x] }
    }

    pub fn column(v: Vec<Rational>) -> Self {
        let n = v.len();
        Matrix { rows: n, cols: 1, data: v }
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

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn scale_int(&self, s: i64) -> Matrix {
        match s {
            1 => self.clone(),
            -1 => -self,
            _ => self.scale(&Rational::from_integer(s.into())),
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Matrix) {
        assert!(r + block.rows <= self.rows && c + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r + i) * self.cols + c + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn add_block(&mut self, r: usize, c: usize, block: &Matrix) {
        assert!(r + block.rows <= self.rows && c + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                let b = block.get(i, j);
                if !b.is_zero() {
                    let slot = &mut self.data[(r + i) * self.cols + c + j];
                    *slot = &*slot + b;
                }
            }
        }
    }

    pub fn block(&self, r: usize, c: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = self.get(r + i, c + j).clone();
            }
        }
        m
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.data[a * cols.len() + b] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Matrix::zeros(self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            m.set_block(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        m
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m.data[(i * other.rows + k) * m.cols + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        m
    }

    /// Rank by fraction-free (Bareiss) elimination on the denominator-cleared
    /// integer matrix.
    pub fn rank(&self) -> usize {
        let mut a = self.integer_rows();
        bareiss_rank(&mut a, self.cols)
    }

    /// Determinant of a square matrix, again fraction-free.
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rational::one();
        }
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let row = self.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= &l;
            a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Rational::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Rational::new(sign * &a[n - 1][n - 1], scale)
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(p, r);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &f * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of the null space, as columns of a `cols × k` matrix.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.cols, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k.set(f, idx, Rational::one());
            for (row, &p) in pivots.iter().enumerate() {
                k.set(p, idx, -r.get(row, f).clone());
            }
        }
        k
    }

    /// A basis of the column space drawn from the original columns.
    pub fn column_basis(&self) -> Matrix {
        let (_, pivots) = self.rref();
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, &pivots)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// Some solution `X` of `self · X = rhs`, if one exists.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows, "solve shape mismatch");
        let (r, pivots) = self.hstack(rhs).rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(p, j, r.get(row, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Columns completing the (independent) columns of `self` to a basis of
    /// the ambient space, chosen greedily from the standard basis.
    pub fn complement(&self) -> Matrix {
        let n = self.rows;
        let mut basis = self.column_basis();
        let mut extra = Vec::new();
        let mut rank = basis.cols;
        for i in 0..n {
            if rank == n {
                break;
            }
            let mut e = Matrix::zeros(n, 1);
            e.set(i, 0, Rational::one());
            let candidate = basis.hstack(&e);
            if candidate.rank() > rank {
                basis = candidate;
                rank += 1;
                extra.push(i);
            }
        }
        let mut c = Matrix::zeros(n, extra.len());
        for (j, &i) in extra.iter().enumerate() {
            c.set(i, j, Rational::one());
        }
        c
    }
}

fn bareiss_rank(a: &mut [Vec<BigInt>], cols: usize) -> usize {
    let rows = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, rank);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[i][j] * &a[rank][c] - &a[i][c] * &a[rank][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch {:?} x {:?}", self.shape(), rhs.shape());
        let mut m = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let slot = &mut m.data[i * rhs.cols + j];
                        *slot = &*slot + a * b;
                    }
                }
            }
        }
        m
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape mismatch");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}
