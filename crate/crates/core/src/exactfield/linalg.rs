//! Dense matrices and exact elimination over a field.

use std::fmt;

use super::ring::{Field, Ring};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
    zero: F,
}

/// Particular solution (free variables set to zero) and a kernel basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution<F> {
    pub solution: Vec<F>,
    pub kernel: Vec<Vec<F>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveOutcome<F> {
    Solved(LinearSolution<F>),
    NoSolution,
}

impl<F: Ring> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize, proto: &F) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![proto.zero_like(); rows * cols],
            zero: proto.zero_like(),
        }
    }

    pub fn identity(n: usize, proto: &F) -> Self {
        let mut m = Self::zeros(n, n, proto);
        for i in 0..n {
            m[(i, i)] = proto.one_like();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>, proto: &F) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
            zero: proto.zero_like(),
        }
    }

    pub fn from_columns(cols: &[Vec<F>], nrows: usize, proto: &F) -> Self {
        let mut m = Self::zeros(nrows, cols.len(), proto);
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn proto(&self) -> &F {
        &self.zero
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows, &self.zero);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn map_into<G: Ring>(&self, proto: &G, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            zero: proto.zero_like(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut m = Self::zeros(self.rows, rhs.cols, &self.zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        let p = a.mul_ref(b);
                        m[(i, j)].add_assign_ref(&p);
                    }
                }
            }
        }
        m
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in apply");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.zero.clone();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign_ref(&a.mul_ref(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.add_ref(b))
                .collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.sub_ref(b))
                .collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|x| x.mul_ref(c))
    }

    /// Stacks `self` above `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
            zero: self.zero.clone(),
        }
    }

    pub fn trace(&self) -> F {
        let mut acc = self.zero.clone();
        for i in 0..self.rows.min(self.cols) {
            acc.add_assign_ref(&self[(i, i)]);
        }
        acc
    }
}

impl<F: Field> Matrix<F> {
    /// Reduced row echelon form; pivots are chosen as the first nonzero
    /// entry scanning rows top to bottom. Returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self[(r, c)].inv_ref().expect("nonzero pivot");
            for j in c..self.cols {
                if !self[(r, j)].is_zero() {
                    self[(r, j)] = self[(r, j)].mul_ref(&inv);
                }
            }
            let prow: Vec<F> = self.row(r).to_vec();
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let f = self[(i, c)].clone();
                for j in c..self.cols {
                    if !prow[j].is_zero() {
                        let t = self[(i, j)].sub_ref(&f.mul_ref(&prow[j]));
                        self[(i, j)] = t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix<F>, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (m, pivots) = self.rref();
        let mut kernel = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![self.zero.clone(); self.cols];
            v[free] = self.zero.one_like();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = m[(r, free)].neg_ref();
            }
            kernel.push(v);
        }
        kernel
    }

    /// Solves `self * x = b`.
    pub fn solve(&self, b: &[F]) -> SolveOutcome<F> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, &self.zero);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return SolveOutcome::NoSolution;
        }
        let mut x = vec![self.zero.clone(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        SolveOutcome::Solved(LinearSolution {
            solution: x,
            kernel: self.kernel(),
        })
    }

    pub fn determinant(&self) -> Result<F> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput(
                "determinant of a non-square matrix".into(),
            ));
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.zero.one_like();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(self.zero.clone());
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg_ref();
            }
            let piv = m[(c, c)].clone();
            det = det.mul_ref(&piv);
            let inv = piv.inv_ref().expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].mul_ref(&inv);
                for j in c..n {
                    if !m[(c, j)].is_zero() {
                        let t = m[(i, j)].sub_ref(&f.mul_ref(&m[(c, j)]));
                        m[(i, j)] = t;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix<F>> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n, &self.zero);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.zero.one_like();
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible);
        }
        let mut inv = Matrix::zeros(n, n, &self.zero);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[F]> = (0..self.rows)
            .map(|i| &self.data[i * self.cols..(i + 1) * self.cols])
            .collect();
        f.debug_list().entries(rows).finish()
    }
}
