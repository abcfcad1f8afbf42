//! Dense matrices over the exact scalar rings.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalars::{Field, GaussianRational, Ring, TimeDerivative};

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Ring> Mat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| S::from_i64(v)).collect()).collect())
    }

    /// Diagonal matrix.
    pub fn diag(entries: Vec<S>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    /// Matrix unit `E_ij` (zero-based indices).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m.set(i, j, S::one());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<T: Ring>(&self, mut f: impl FnMut(&S) -> T) -> Mat<T> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(&mut f).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, e: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        Self::from_fn(h, w, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// `((a, b), (c, d))` from four blocks of compatible sizes.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert!(a.rows == b.rows && c.rows == d.rows && a.cols == c.cols && b.cols == d.cols);
        Self::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| match (i < a.rows, j < a.cols) {
            (true, true) => a.get(i, j).clone(),
            (true, false) => b.get(i, j - a.cols).clone(),
            (false, true) => c.get(i - a.rows, j).clone(),
            (false, false) => d.get(i - a.rows, j - a.cols).clone(),
        })
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<S>]) -> Self {
        let r = cols.first().map_or(0, Vec::len);
        Self::from_fn(r, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = S::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// Error unless the matrix is square with even size.
    pub fn check_even_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows % 2 != 0 {
            return Err(Error::OddDimension(self.rows));
        }
        Ok(self.rows / 2)
    }
}

impl<S: TimeDerivative> Mat<S> {
    /// Entrywise `d/dt`.
    pub fn derivative(&self) -> Self {
        self.map(TimeDerivative::time_derivative)
    }
}

impl Mat<GaussianRational> {
    pub fn to_complex(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_complex64()).collect()).collect()
    }
}

impl<S: Field> Mat<S> {
    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let pj = m.get(r, j);
                    if pj.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j).clone() - f.clone() * pj.clone();
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

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Self::from_blocks(self, &Self::identity(n), &Self::zeros(0, n), &Self::zeros(0, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    /// Determinant by elimination.
    pub fn det(&self) -> S {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = S::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return S::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            let inv = piv.inv().expect("nonzero pivot");
            det = det * piv;
            for i in c + 1..n {
                let f = m.get(i, c).clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j).clone() - f.clone() * m.get(c, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// Basis of `{v : self·v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    /// Coefficients `c` with `Σ c_k·vectors[k] = target`, if any.
    pub fn solve_combination(vectors: &[Vec<S>], target: &[S]) -> Option<Vec<S>> {
        let mut cols = vectors.to_vec();
        cols.push(target.to_vec());
        let aug = Self::from_columns(&cols);
        let k = vectors.len();
        let (r, pivots) = aug.rref();
        if pivots.contains(&k) {
            return None;
        }
        let mut c = vec![S::zero(); k];
        for (row, &pc) in pivots.iter().enumerate() {
            c[pc] = r.get(row, k).clone();
        }
        Some(c)
    }
}

/// A subspace kept as reduced echelon rows.
#[derive(Clone, Debug)]
pub struct Subspace<S> {
    dim: usize,
    rows: Vec<Vec<S>>,
    pivots: Vec<usize>,
}

impl<S: Field> Subspace<S> {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn spanned_by<'a>(dim: usize, vs: impl IntoIterator<Item = &'a Vec<S>>) -> Self {
        let mut s = Self::new(dim);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.rows
    }

    fn reduce(&self, v: &[S]) -> Vec<S> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = w[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in w.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.reduce(v).iter().all(Ring::is_zero)
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.dim);
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        let w: Vec<S> = w.into_iter().map(|x| x * inv.clone()).collect();
        for row in &mut self.rows {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&w) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, w);
        self.pivots.insert(at, p);
        true
    }

    pub fn contains_all(&self, other: &Self) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.contains_all(other)
    }
}

impl<'a, S: Ring> Add<&'a Mat<S>> for &'a Mat<S> {
    type Output = Mat<S>;
    fn add(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix size mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<'a, S: Ring> Sub<&'a Mat<S>> for &'a Mat<S> {
    type Output = Mat<S>;
    fn sub(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix size mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<'a, S: Ring> Mul<&'a Mat<S>> for &'a Mat<S> {
    type Output = Mat<S>;
    fn mul(self, rhs: &Mat<S>) -> Mat<S> {
        assert_eq!(self.cols, rhs.rows, "matrix size mismatch");
        let mut out = Mat::<S>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }
}

impl<S: Ring> Neg for &Mat<S> {
    type Output = Mat<S>;
    fn neg(self) -> Mat<S> {
        self.map(|v| -v.clone())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl<S: Ring> $tr for Mat<S> {
            type Output = Mat<S>;
            fn $m(self, rhs: Mat<S>) -> Mat<S> { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl<S: Ring> fmt::Display for Mat<S> {
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
