//! Minimal dense matrices over exact scalars.

use num_traits::{One, Zero};

use crate::num::{Q, Z};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IMat = Mat<i64>;
pub type ZMat = Mat<Z>;
pub type QMat = Mat<Q>;

impl<T: Clone + Zero> Mat<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }
}

impl<T: Clone + Zero + One> Mat<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }
}

impl<T> Mat<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl IMat {
    pub fn to_z(&self) -> ZMat {
        self.map(|&x| Z::from(x))
    }

    pub fn to_q(&self) -> QMat {
        self.map(|&x| Q::from(Z::from(x)))
    }

    pub fn matvec_q(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols, "matvec shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (j, xj) in x.iter().enumerate() {
                    let a = self[(i, j)];
                    if a != 0 {
                        acc += Q::from(Z::from(a)) * xj;
                    }
                }
                acc
            })
            .collect()
    }

    /// y = Aᵀ x over the rationals.
    pub fn tr_matvec_q(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.rows, "matvec shape");
        let mut out = vec![Q::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.numer() == &Z::from(0) {
                continue;
            }
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a != 0 {
                    out[j] += Q::from(Z::from(a)) * xi;
                }
            }
        }
        out
    }
}

impl ZMat {
    pub fn matmul(&self, other: &ZMat) -> ZMat {
        assert_eq!(self.cols, other.rows, "matmul shape");
        if let Some(out) = self.matmul_i128(other) {
            return out;
        }
        let mut out = ZMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    /// Word-size product fast path; falls back to big integers on overflow.
    /// Summands are bounded well inside i128 when entries fit in i64.
    fn matmul_i128(&self, other: &ZMat) -> Option<ZMat> {
        use num_traits::ToPrimitive;
        let to_small = |m: &ZMat| -> Option<Vec<i64>> {
            let mut v = Vec::with_capacity(m.rows * m.cols);
            for x in &m.data {
                v.push(x.to_i64()?);
            }
            Some(v)
        };
        let a = to_small(self)?;
        let b = to_small(other)?;
        let (n, k, m) = (self.rows, self.cols, other.cols);
        if k == 0 {
            return Some(ZMat::zeros(n, m));
        }
        let mut out = vec![0i128; n * m];
        for i in 0..n {
            for kk in 0..k {
                let av = a[i * k + kk] as i128;
                if av == 0 {
                    continue;
                }
                for j in 0..m {
                    let bv = b[kk * m + j] as i128;
                    if bv != 0 {
                        let (prod, of1) = av.overflowing_mul(bv);
                        if of1 {
                            return None;
                        }
                        let (sum, of2) = out[i * m + j].overflowing_add(prod);
                        if of2 {
                            return None;
                        }
                        out[i * m + j] = sum;
                    }
                }
            }
        }
        Some(Mat { rows: n, cols: m, data: out.into_iter().map(Z::from).collect() })
    }

    pub fn matvec(&self, x: &[Z]) -> Vec<Z> {
        assert_eq!(x.len(), self.cols, "matvec shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = Z::zero();
                for (j, xj) in x.iter().enumerate() {
                    if !xj.is_zero() && !self[(i, j)].is_zero() {
                        acc += &self[(i, j)] * xj;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn matvec_q(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols, "matvec shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (j, xj) in x.iter().enumerate() {
                    if !xj.is_zero() && !self[(i, j)].is_zero() {
                        acc += Q::from(self[(i, j)].clone()) * xj;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn to_q(&self) -> QMat {
        self.map(|x| Q::from(x.clone()))
    }
}

impl QMat {
    pub fn matvec(&self, x: &[Q]) -> Vec<Q> {
        assert_eq!(x.len(), self.cols, "matvec shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = Q::zero();
                for (j, xj) in x.iter().enumerate() {
                    if !xj.is_zero() && !self[(i, j)].is_zero() {
                        acc += &self[(i, j)] * xj;
                    }
                }
                acc
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_and_index() {
        let m = IMat::from_rows(vec![vec![1, 2, 3], vec![4, 5, 6]]);
        let t = m.transpose();
        assert_eq!(t.rows(), 3);
        assert_eq!(t[(2, 1)], 6);
    }

    #[test]
    fn zmat_matmul_identity() {
        let a = IMat::from_rows(vec![vec![2, -1], vec![0, 3]]).to_z();
        let id = ZMat::identity(2);
        assert_eq!(a.matmul(&id), a);
    }
}
