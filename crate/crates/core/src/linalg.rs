//! Exact rational linear algebra: dense matrices and an incremental sparse
//! reduced row echelon form.
//!
//! Pivots are always taken at the earliest column, so the echelon form of a
//! subspace depends only on the subspace and the column order.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::Rational;

pub type SparseVec = BTreeMap<usize, Rational>;

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec, n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); n];
    for (&i, c) in v {
        out[i] = c.clone();
    }
    out
}

fn axpy(target: &mut SparseVec, c: &Rational, row: &SparseVec) {
    for (&j, a) in row {
        let prod = c * a;
        let e = target.entry(j).or_insert_with(Rational::zero);
        *e += prod;
        if e.is_zero() {
            target.remove(&j);
        }
    }
}

/// Reduced row echelon basis of a subspace of `Q^ncols`, grown one vector at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ncols
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Remainder of `v` after subtracting its projection along the pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        let hits: Vec<(usize, Rational)> = v
            .iter()
            .filter_map(|(c, a)| self.pivots.get(c).map(|&r| (r, a.clone())))
            .collect();
        for (r, a) in hits {
            axpy(&mut out, &-a, &self.rows[r]);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut r = self.reduce(v);
        let (&p, lead) = match r.iter().next() {
            Some(x) => x,
            None => return false,
        };
        let inv = lead.recip();
        for a in r.values_mut() {
            *a *= &inv;
        }
        for row in &mut self.rows {
            if let Some(a) = row.get(&p).cloned() {
                axpy(row, &-a, &r);
            }
        }
        self.pivots.insert(p, self.rows.len());
        self.rows.push(r);
        true
    }

    pub fn insert_dense(&mut self, v: &[Rational]) -> bool {
        self.insert(&sparse_from_dense(v))
    }

    /// Rows sorted by pivot column.
    pub fn basis(&self) -> Vec<&SparseVec> {
        self.pivots.values().map(|&r| &self.rows[r]).collect()
    }

    /// Coordinates of `v` with respect to `basis()`, if `v` lies in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<Vec<Rational>> {
        if !self.contains(v) {
            return None;
        }
        Some(
            self.pivots
                .keys()
                .map(|c| v.get(c).cloned().unwrap_or_else(Rational::zero))
                .collect(),
        )
    }

    pub fn same_span(&self, other: &Echelon) -> bool {
        self.rank() == other.rank() && other.rows.iter().all(|r| self.contains(r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, a) in col.iter().enumerate() {
                m.set(i, j, a.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = Rational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += a * b;
                    }
                }
                s
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
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
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
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
                    let sub = &f * m.get(r, j);
                    if !sub.is_zero() {
                        let v = m.get(i, j) - sub;
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Rational::zero(); self.cols];
                v[fc] = Rational::one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(i, fc).clone();
                }
                v
            })
            .collect()
    }

    /// Echelon basis of the column space.
    pub fn column_space(&self) -> Echelon {
        let mut e = Echelon::new(self.rows);
        for j in 0..self.cols {
            e.insert_dense(&self.column(j));
        }
        e
    }

    /// A solution of `self * x = b` with every free variable set to zero.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, bi.clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Rational::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn m(rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows[0].len();
        let mut out = Matrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                out.set(i, j, rat(v));
            }
        }
        out
    }

    #[test]
    fn rank_nullity() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let ns = a.nullspace();
        assert_eq!(a.rank() + ns.len(), 3);
        for v in ns {
            assert!(a.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn solve_prefers_zero_free_variables() {
        let a = m(&[&[1, 1]]);
        assert_eq!(a.solve(&[rat(3)]).unwrap(), vec![rat(3), rat(0)]);
        assert!(m(&[&[1, 1], &[1, 1]]).solve(&[rat(1), rat(2)]).is_none());
    }

    #[test]
    fn echelon_is_canonical() {
        let vs = [vec![rat(0), rat(1), rat(1)], vec![rat(1), rat(1), rat(0)], vec![rat(1), rat(2), rat(1)]];
        let mut a = Echelon::new(3);
        let mut b = Echelon::new(3);
        for v in &vs {
            a.insert_dense(v);
        }
        for v in vs.iter().rev() {
            b.insert_dense(v);
        }
        assert_eq!(a.rank(), 2);
        let ra: Vec<_> = a.basis().into_iter().cloned().collect();
        let rb: Vec<_> = b.basis().into_iter().cloned().collect();
        assert_eq!(ra, rb);
        assert!(a.same_span(&b));
    }

    #[test]
    fn coordinates_reconstruct() {
        let mut e = Echelon::new(3);
        e.insert_dense(&[rat(1), rat(2), rat(0)]);
        e.insert_dense(&[rat(0), rat(1), rat(1)]);
        let v = sparse_from_dense(&[rat(2), rat(5), rat(1)]);
        let c = e.coordinates(&v).unwrap();
        let mut back = SparseVec::new();
        for (row, a) in e.basis().into_iter().zip(&c) {
            axpy(&mut back, a, row);
        }
        assert_eq!(back, v);
        assert!(e.coordinates(&sparse_from_dense(&[rat(0), rat(0), rat(1)])).is_none());
    }
}
