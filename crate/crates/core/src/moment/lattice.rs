//! Coset representatives of `ℤ^n` modulo the column lattice of an integer
//! matrix, via a column Hermite normal form.

use num_integer::Integer;

/// Column Hermite normal form `H = A·U` of an `n×d` integer matrix `A`.
///
/// Pivots are found scanning rows from the bottom up. Every column of `H`
/// is zero below its pivot row, pivots are positive, and the entries of
/// earlier columns in a pivot row lie in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnHnf {
    n: usize,
    /// columns of `H`
    cols: Vec<Vec<i64>>,
    /// `(row, column)` of each pivot, in column order
    pivots: Vec<(usize, usize)>,
    /// columns of the unimodular `U`
    u: Vec<Vec<i64>>,
}

impl ColumnHnf {
    /// `a` is given by rows.
    pub fn new(a: &[Vec<i64>]) -> Self {
        let n = a.len();
        let d = a.first().map_or(0, Vec::len);
        let mut cols: Vec<Vec<i64>> = (0..d).map(|j| a.iter().map(|r| r[j]).collect()).collect();
        let mut u: Vec<Vec<i64>> = (0..d).map(|j| (0..d).map(|i| i64::from(i == j)).collect()).collect();
        let mut pivots = Vec::new();
        let mut k = 0;
        for row in (0..n).rev() {
            if k == d {
                break;
            }
            // gcd elimination on this row across columns k..d
            loop {
                let nonzero: Vec<usize> = (k..d).filter(|&j| cols[j][row] != 0).collect();
                if nonzero.len() <= 1 {
                    if let Some(&j) = nonzero.first() {
                        cols.swap(k, j);
                        u.swap(k, j);
                    }
                    break;
                }
                let &p = nonzero.iter().min_by_key(|&&j| cols[j][row].abs()).unwrap();
                for &j in &nonzero {
                    if j != p {
                        let f = Integer::div_floor(&cols[j][row], &cols[p][row]);
                        axpy(&mut cols, j, p, f);
                        axpy(&mut u, j, p, f);
                    }
                }
            }
            if cols[k][row] == 0 {
                continue;
            }
            if cols[k][row] < 0 {
                cols[k].iter_mut().for_each(|v| *v = -*v);
                u[k].iter_mut().for_each(|v| *v = -*v);
            }
            let h = cols[k][row];
            for j in 0..k {
                let f = Integer::div_floor(&cols[j][row], &h);
                axpy(&mut cols, j, k, f);
                axpy(&mut u, j, k, f);
            }
            pivots.push((row, k));
            k += 1;
        }
        ColumnHnf { n, cols, pivots, u }
    }

    /// Rank of the lattice.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn columns(&self) -> &[Vec<i64>] {
        &self.cols[..self.rank()]
    }

    /// Splits `c = r + A·t` with `r` the canonical representative of the
    /// coset `c + Aℤ^d`; returns `(r, t)`.
    pub fn reduce(&self, c: &[i64]) -> (Vec<i64>, Vec<i64>) {
        assert_eq!(c.len(), self.n, "vector length must match the lattice dimension");
        let d = self.u.len();
        let mut r = c.to_vec();
        let mut t = vec![0; d];
        for &(row, k) in &self.pivots {
            let s = Integer::div_floor(&r[row], &self.cols[k][row]);
            if s == 0 {
                continue;
            }
            for (ri, hi) in r.iter_mut().zip(&self.cols[k]) {
                *ri -= s * hi;
            }
            for (ti, ui) in t.iter_mut().zip(&self.u[k]) {
                *ti += s * ui;
            }
        }
        (r, t)
    }

    pub fn contains(&self, c: &[i64]) -> bool {
        self.reduce(c).0.iter().all(|&v| v == 0)
    }
}

fn axpy(cols: &mut [Vec<i64>], target: usize, source: usize, f: i64) {
    if f == 0 {
        return;
    }
    let src = cols[source].clone();
    for (t, s) in cols[target].iter_mut().zip(src) {
        *t -= f * s;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_vec(a: &[Vec<i64>], t: &[i64]) -> Vec<i64> {
        a.iter().map(|r| r.iter().zip(t).map(|(x, y)| x * y).sum()).collect()
    }

    #[test]
    fn diagonal_embedding() {
        let h = ColumnHnf::new(&[vec![1], vec![1]]);
        assert_eq!(h.reduce(&[2, 1]), (vec![1, 0], vec![1]));
        assert_eq!(h.reduce(&[0, -3]), (vec![3, 0], vec![-3]));
    }

    #[test]
    fn reduction_is_canonical() {
        let a = vec![vec![2, 1], vec![0, 3], vec![1, -1]];
        let h = ColumnHnf::new(&a);
        assert_eq!(h.rank(), 2);
        for c in [[1, 2, 3], [-4, 0, 7], [0, 0, 0]] {
            let (r, t) = h.reduce(&c);
            let back: Vec<i64> = r.iter().zip(mat_vec(&a, &t)).map(|(x, y)| x + y).collect();
            assert_eq!(back, c);
            for shift in [[1, 0], [-2, 5]] {
                let moved: Vec<i64> = c.iter().zip(mat_vec(&a, &shift)).map(|(x, y)| x + y).collect();
                assert_eq!(h.reduce(&moved).0, r);
            }
        }
        assert!(h.contains(&mat_vec(&a, &[3, -1])));
        assert!(!h.contains(&[1, 0, 0]));
    }
}
