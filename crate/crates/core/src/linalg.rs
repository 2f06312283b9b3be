//! Exact dense matrices and sparse row echelon forms over a [`Scalar`] field.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{param, Error, Result};
use crate::scalars::{FieldDescriptor, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: &FieldDescriptor, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &FieldDescriptor, n: usize) -> Self {
        Self::scalar(field, n, &field.one())
    }

    /// `c * I`
    pub fn scalar(field: &FieldDescriptor, n: usize, c: &Scalar) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diagonal(field: &FieldDescriptor, diag: &[Scalar]) -> Self {
        let mut m = Self::zeros(field, diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn from_rows(field: &FieldDescriptor, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return param("ragged matrix rows");
        }
        Ok(Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: &FieldDescriptor, nrows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
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

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return param(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_>>()?;
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.try_sub(b))
            .collect::<Result<_>>()?;
        Ok(Matrix { data, ..self.clone() })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix { data, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return param(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        if self.field != other.field {
            return param("matrix field mismatch");
        }
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return param("vector length does not match matrix");
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    /// Nonnegative integer power of a square matrix.
    pub fn pow(&self, mut e: u32) -> Result<Self> {
        if !self.is_square() {
            return param("power of a non-square matrix");
        }
        let mut acc = Self::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Integer power; negative exponents need an invertible matrix.
    pub fn pow_signed(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            self.pow(e as u32)
        } else {
            self.inverse()?.pow(e.unsigned_abs() as u32)
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(&self.field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    /// `Some(c)` when the matrix equals `c * I`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        let c = if self.rows == 0 {
            self.field.zero()
        } else {
            self.get(0, 0).clone()
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let ok = if i == j { *e == c } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    /// Reduced row echelon form and pivot columns.
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
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let pv = m.get(r, j);
                    if !pv.is_zero() {
                        let v = m.get(i, j) - &(&f * pv);
                        m.set(i, j, v);
                    }
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

    /// Basis of the right null space `{v : self * v = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots, self.cols, &self.field)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return param("inverse of a non-square matrix");
        }
        let n = self.rows;
        let mut aug = Self::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::ZeroDivisor);
        }
        let mut out = Self::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Characteristic polynomial `det(tI - self)`, coefficients ascending and
    /// monic, by the Faddeev–LeVerrier recurrence.
    pub fn charpoly(&self) -> Result<Vec<Scalar>> {
        if !self.is_square() {
            return param("characteristic polynomial of a non-square matrix");
        }
        let n = self.rows;
        let mut coeffs = vec![self.field.zero(); n + 1];
        coeffs[n] = self.field.one();
        let id = Self::identity(&self.field, n);
        let mut m = Self::zeros(&self.field, n, n);
        for k in 1..=n {
            m = self.mul(&m)?.add(&id.scale(&coeffs[n - k + 1]))?;
            let tr = self.mul(&m)?.trace();
            coeffs[n - k] = -(&tr.try_div(&self.field.from_int(k as i64))?);
        }
        Ok(coeffs)
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.mul(other)? == other.mul(self)?)
    }
}

fn kernel_from_rref(r: &Matrix, pivots: &[usize], ncols: usize, field: &FieldDescriptor) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    let is_pivot: Vec<bool> = (0..ncols).map(|c| pivots.contains(&c)).collect();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (row, &pc) in pivots.iter().enumerate() {
            let e = r.get(row, free);
            if !e.is_zero() {
                v[pc] = -e;
            }
        }
        out.push(v);
    }
    out
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A sparse vector: sorted `(index, nonzero value)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn sparse_from_dense(v: &[Scalar]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

/// `a - c * b`
fn sparse_axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally built row echelon basis of a subspace of `field^ncols`.
/// Every stored row has leading coefficient one at a distinct column.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldDescriptor,
    ncols: usize,
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new(field: &FieldDescriptor, ncols: usize) -> Self {
        Echelon {
            field: field.clone(),
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut start = 0;
        loop {
            let Some(pos) = v.iter().position(|(i, _)| *i >= start) else {
                return v;
            };
            let (lead, c) = v[pos].clone();
            match self.rows.get(&lead) {
                Some(row) => v = sparse_axpy(&v, &c, row),
                None => start = lead + 1,
            }
        }
    }

    /// Adds `v` to the span; returns whether it was independent.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut r = self.reduce(v);
        // keep only the leading part normalized; tail entries beyond the first
        // unmatched column are left as they are
        let Some(pos) = r.iter().position(|(i, _)| !self.rows.contains_key(i)) else {
            return false;
        };
        let (lead, c) = r[pos].clone();
        let inv = c.inv().expect("nonzero leading coefficient");
        r = r
            .into_iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, &x * &inv))
            .collect();
        self.rows.insert(lead, r);
        true
    }

    pub fn insert_dense(&mut self, v: &[Scalar]) -> bool {
        self.insert(sparse_from_dense(v))
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn contains_dense(&self, v: &[Scalar]) -> bool {
        self.contains(sparse_from_dense(v))
    }

    /// True when both echelon forms span the same subspace.
    pub fn same_span(&self, other: &Echelon) -> bool {
        self.rank() == other.rank() && other.rows.values().all(|r| self.contains(r.clone()))
    }

    /// Fully reduced rows (pivot columns cleared in every other row).
    fn fully_reduced(&self) -> BTreeMap<usize, SparseVec> {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut r = row.clone();
            loop {
                let hit = r.iter().find(|(i, _)| *i != p && done.contains_key(i)).cloned();
                match hit {
                    Some((i, c)) => r = sparse_axpy(&r, &c, &done[&i]),
                    None => break,
                }
            }
            done.insert(p, r);
        }
        done
    }

    /// Basis of `{v : row · v = 0 for every stored row}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let rows = self.fully_reduced();
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|c| !rows.contains_key(c)) {
            let mut v = vec![self.field.zero(); self.ncols];
            v[free] = self.field.one();
            for (&p, row) in &rows {
                if let Some((_, e)) = row.iter().find(|(i, _)| *i == free) {
                    v[p] = -e;
                }
            }
            out.push(v);
        }
        out
    }

    /// The stored basis as dense vectors.
    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.fully_reduced()
            .values()
            .map(|r| {
                let mut v = vec![self.field.zero(); self.ncols];
                for (i, x) in r {
                    v[*i] = x.clone();
                }
                v
            })
            .collect()
    }
}

/// Dimension of the span of the given dense vectors.
pub fn span_rank(field: &FieldDescriptor, ncols: usize, vectors: &[Vec<Scalar>]) -> usize {
    let mut e = Echelon::new(field, ncols);
    for v in vectors {
        e.insert_dense(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rational()
    }

    fn m(rows: &[&[i64]]) -> Matrix {
        let f = q();
        Matrix::from_rows(
            &f,
            rows.iter()
                .map(|r| r.iter().map(|&x| f.from_int(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rref_and_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ker = a.kernel();
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0]).unwrap().iter().all(Scalar::is_zero));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(&q(), 2));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::ZeroDivisor));
    }

    #[test]
    fn charpoly_of_companion() {
        // t^2 - 3t + 2
        let a = m(&[&[0, -2], &[1, 3]]);
        let f = q();
        assert_eq!(a.charpoly().unwrap(), vec![f.from_int(2), f.from_int(-3), f.one()]);
    }

    #[test]
    fn kron_dimensions_and_mixed_product() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let ab = a.kron(&b);
        assert_eq!((ab.nrows(), ab.ncols()), (4, 4));
        let lhs = ab.mul(&ab).unwrap();
        let rhs = a.mul(&a).unwrap().kron(&b.mul(&b).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn echelon_matches_dense_kernel() {
        let a = m(&[&[1, 2, 0, -1], &[0, 0, 1, 3], &[1, 2, 1, 2]]);
        let mut e = Echelon::new(&q(), 4);
        for i in 0..3 {
            e.insert_dense(a.row(i));
        }
        assert_eq!(e.rank(), 2);
        let ker = e.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(a.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
        assert!(e.contains_dense(a.row(2)));
    }
}
