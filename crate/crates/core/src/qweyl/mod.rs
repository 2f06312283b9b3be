//! Multi-parameter q-Weyl algebras in PBW normal form.
//!
//! An [`AlgebraSpec`] fixes the rank `n`, an integer matrix `M` with
//! `m_ji = -m_ij` off the diagonal, a [`Normalization`] and a coefficient
//! field. Writing `q_ij = q^{m_ij}`, the two normalizations are
//!
//! | relation (i < j for the first two) | `Rescaled`                       | `Unscaled`                     |
//! |------------------------------------|----------------------------------|--------------------------------|
//! | `x_j x_i`                          | `q_ij x_i x_j`                   | `q_ij^{-1} x_i x_j`            |
//! | `∂_j ∂_i`                          | `q_ij ∂_i ∂_j`                   | `q_ij^{-1} ∂_i ∂_j`            |
//! | `∂_i x_j` (i ≠ j)                  | `q_ij x_j ∂_i`                   | `q_ij^{-1} x_j ∂_i`            |
//! | `∂_i x_i`                          | `q_ii x_i ∂_i + (q_ii - 1)`      | `q_ii^{-1} x_i ∂_i + 1`        |
//!
//! Elements are stored in the ordered basis `x_1^{a_1}⋯x_n^{a_n} ∂_1^{b_1}⋯∂_n^{b_n}`.
//! Generator indices are zero-based in the API and one-based when printed.

pub(crate) mod element;
mod identities;
mod localized;
mod word;

pub use element::{Grading, PBWElement};
pub use identities::{flatness_rank, verify_engine, verify_power_identities};
pub use localized::LocalizedElement;
pub use word::{normal_form, Letter, Strategy};

use std::fmt;
use std::sync::Arc;

use crate::error::{param, Result};
use crate::scalars::{FieldDescriptor, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    Unscaled,
    Rescaled,
}

/// Exponent vectors `(a, b)` of the ordered monomial `x^a ∂^b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            a: vec![0; n],
            b: vec![0; n],
        }
    }

    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Self {
        Monomial { a, b }
    }

    pub fn x(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.a[i] = 1;
        m
    }

    pub fn d(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.b[i] = 1;
        m
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.a.iter().sum::<u32>() + self.b.iter().sum::<u32>()
    }

    /// `a - b`, the weight under the torus grading.
    pub fn grading(&self) -> Vec<i64> {
        self.a.iter().zip(&self.b).map(|(&x, &y)| x as i64 - y as i64).collect()
    }

    pub fn is_one(&self) -> bool {
        self.a.iter().chain(&self.b).all(|&e| e == 0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (sym, exps) in [("x", &self.a), ("d", &self.b)] {
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(format!("{sym}{}", i + 1)),
                    _ => parts.push(format!("{sym}{}^{e}", i + 1)),
                }
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Defining data of a q-Weyl algebra. Shared behind an [`Arc`].
#[derive(Debug)]
pub struct AlgebraSpec {
    n: usize,
    m: Vec<Vec<i64>>,
    normalization: Normalization,
    field: FieldDescriptor,
    /// `x_j x_i = q^{xx[i][j]} x_i x_j` for i < j.
    xx: Vec<Vec<i64>>,
    /// `∂_j ∂_i = q^{dd[i][j]} ∂_i ∂_j` for i < j.
    dd: Vec<Vec<i64>>,
    /// `∂_i x_j = q^{dx[i][j]} x_j ∂_i` for i ≠ j; diagonal is the exponent
    /// of the `x_i ∂_i` term in `∂_i x_i`.
    dx: Vec<Vec<i64>>,
    /// Constant term of `∂_i x_i`.
    shift: Vec<Scalar>,
}

impl PartialEq for AlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.normalization == other.normalization && self.field == other.field
    }
}

impl Eq for AlgebraSpec {}

impl AlgebraSpec {
    /// Validates `m` and builds the spec.
    pub fn new(m: Vec<Vec<i64>>, normalization: Normalization, field: FieldDescriptor) -> Result<Arc<Self>> {
        let n = m.len();
        if n == 0 {
            return param("rank n must be at least 1");
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return param(format!("M row {} has length {}, expected {n}", i + 1, row.len()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && m[j][i] != -m[i][j] {
                    return param(format!(
                        "M must satisfy m_ji = -m_ij off the diagonal (entry ({}, {}))",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        if !field.has_q() && m.iter().flatten().any(|&e| e != 0) {
            return param("a nonzero M needs a field containing q");
        }
        let sign = match normalization {
            Normalization::Rescaled => 1,
            Normalization::Unscaled => -1,
        };
        let table: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|e| sign * e).collect()).collect();
        let shift = (0..n)
            .map(|i| match normalization {
                Normalization::Rescaled => &field.q_power(m[i][i]).unwrap() - &field.one(),
                Normalization::Unscaled => field.one(),
            })
            .collect();
        Ok(Arc::new(AlgebraSpec {
            n,
            xx: table.clone(),
            dd: table.clone(),
            dx: table,
            m,
            normalization,
            field,
            shift,
        }))
    }

    /// `m_ii = 1`, `m_ij = 1` for i < j and `-1` for i > j.
    pub fn single_parameter_matrix(n: usize) -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Greater => -1,
                        _ => 1,
                    })
                    .collect()
            })
            .collect()
    }

    pub fn single_parameter(n: usize, normalization: Normalization, field: FieldDescriptor) -> Result<Arc<Self>> {
        Self::new(Self::single_parameter_matrix(n), normalization, field)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> &[Vec<i64>] {
        &self.m
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn is_single_parameter(&self) -> bool {
        self.m == Self::single_parameter_matrix(self.n)
    }

    /// `q^k` in the coefficient field.
    pub fn q_pow(&self, k: i64) -> Scalar {
        self.field
            .q_power(k)
            .expect("exponent tables are zero over the rationals")
    }

    /// `q_ij = q^{m_ij}`.
    pub fn q_ij(&self, i: usize, j: usize) -> Scalar {
        self.q_pow(self.m[i][j])
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return param(format!("generator index {} out of range 1..={}", i + 1, self.n));
        }
        Ok(())
    }

    /// Right-multiplies the monomial by `x_k`; pushes the resulting terms
    /// (monomial, coefficient) onto `out`, each scaled by `c`.
    fn times_x(&self, m: &Monomial, k: usize, c: &Scalar, out: &mut Vec<(Monomial, Scalar)>) {
        let n = self.n;
        let past_high_d: i64 = (k + 1..n).map(|j| self.dx[j][k] * m.b[j] as i64).sum();
        let bk = m.b[k];
        if bk > 0 {
            // ∂_k^b x_k = t^b x_k ∂_k^b + shift·[b]_t ∂_k^{b-1}
            let t = self.dx[k][k];
            let qint = (0..bk as i64).fold(self.field.zero(), |acc, e| &acc + &self.q_pow(t * e));
            let coef = &(&self.shift[k] * &qint) * &(c * &self.q_pow(past_high_d));
            if !coef.is_zero() {
                let mut m2 = m.clone();
                m2.b[k] -= 1;
                out.push((m2, coef));
            }
        }
        let through_dk = self.dx[k][k] * bk as i64;
        let past_low_d: i64 = (0..k).map(|j| self.dx[j][k] * m.b[j] as i64).sum();
        let past_x: i64 = (k + 1..n).map(|j| self.xx[k][j] * m.a[j] as i64).sum();
        let mut m2 = m.clone();
        m2.a[k] += 1;
        out.push((m2, c * &self.q_pow(past_high_d + through_dk + past_low_d + past_x)));
    }

    /// Right-multiplies the monomial by `∂_k`.
    fn times_d(&self, m: &Monomial, k: usize, c: &Scalar) -> (Monomial, Scalar) {
        let e: i64 = (k + 1..self.n).map(|j| self.dd[k][j] * m.b[j] as i64).sum();
        let mut m2 = m.clone();
        m2.b[k] += 1;
        (m2, c * &self.q_pow(e))
    }

    /// Normal form of `m1 * m2`.
    pub(crate) fn mul_monomials(&self, m1: &Monomial, m2: &Monomial) -> Vec<(Monomial, Scalar)> {
        let mut cur = vec![(m1.clone(), self.field.one())];
        let mut next = Vec::new();
        for k in 0..self.n {
            for _ in 0..m2.a[k] {
                for (m, c) in cur.drain(..) {
                    self.times_x(&m, k, &c, &mut next);
                }
                std::mem::swap(&mut cur, &mut next);
                cur = merge_terms(std::mem::take(&mut cur));
            }
        }
        for k in 0..self.n {
            for _ in 0..m2.b[k] {
                cur = cur.iter().map(|(m, c)| self.times_d(m, k, c)).collect();
            }
        }
        cur
    }
}

fn merge_terms(terms: Vec<(Monomial, Scalar)>) -> Vec<(Monomial, Scalar)> {
    if terms.len() < 2 {
        return terms;
    }
    let mut map = std::collections::BTreeMap::new();
    for (m, c) in terms {
        match map.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                *o.get_mut() = s;
            }
        }
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl fmt::Display for AlgebraSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} M={:?} {:?} over {}",
            self.n, self.m, self.normalization, self.field
        )
    }
}

/// Random skew-symmetric integer matrix with entries in `[-bound, bound]`.
pub fn random_skew_matrix(n: usize, bound: i64, rng: &mut impl rand::Rng) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0; n]; n];
    for i in 0..n {
        m[i][i] = rng.gen_range(-bound..=bound);
        for j in i + 1..n {
            let v = rng.gen_range(-bound..=bound);
            m[i][j] = v;
            m[j][i] = -v;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq() -> FieldDescriptor {
        FieldDescriptor::rational_function()
    }

    #[test]
    fn rejects_non_skew_matrix() {
        let err = AlgebraSpec::new(vec![vec![1, 2], vec![2, 1]], Normalization::Rescaled, fq());
        assert!(err.is_err());
        assert!(AlgebraSpec::new(vec![vec![1, 2], vec![-2, 5]], Normalization::Rescaled, fq()).is_ok());
    }

    #[test]
    fn rational_field_needs_zero_matrix() {
        let f = FieldDescriptor::rational();
        assert!(AlgebraSpec::single_parameter(1, Normalization::Unscaled, f.clone()).is_err());
        assert!(AlgebraSpec::new(vec![vec![0]], Normalization::Unscaled, f).is_ok());
    }

    #[test]
    fn single_parameter_shape() {
        assert_eq!(
            AlgebraSpec::single_parameter_matrix(3),
            vec![vec![1, 1, 1], vec![-1, 1, 1], vec![-1, -1, 1]]
        );
    }

    #[test]
    fn monomial_display() {
        let m = Monomial::new(vec![2, 0, 1], vec![0, 1, 0]);
        assert_eq!(m.to_string(), "x1^2*x3*d2");
        assert_eq!(Monomial::one(2).to_string(), "1");
    }
}
