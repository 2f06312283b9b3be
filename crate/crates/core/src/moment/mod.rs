//! Torus actions on the q-Weyl algebra: the quantum comoment maps
//! `z_i ↦ α_i` and `u_j ↦ ∏_i α_i^{a_ij}`, the classical multiplicative
//! moment map on points, and normal forms in the reduction
//! `U_{q,η} = (D° / D°·(Φ(u_j) − η_j))^K`.

mod lattice;
mod reduce;

use std::sync::Arc;

pub use lattice::ColumnHnf;
pub use reduce::{
    invariant_monomials, moment_ideal_reduce, reduced_product, verify_reduction_algebra, CanonicalElement,
    CanonicalMonomial, ElimOrder, Reducer,
};

use crate::check::Report;
use crate::error::{param, Error, Result};
use crate::linalg::Matrix;
use crate::qweyl::{AlgebraSpec, LocalizedElement, Normalization, PBWElement};
use crate::scalars::{FieldDescriptor, Scalar};

/// An embedding `K = (𝕂^×)^d → T = (𝕂^×)^n`, `φ(k)_i = ∏_j k_j^{a_ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusData {
    a: Vec<Vec<i64>>,
    d: usize,
}

impl TorusData {
    /// `a` is `n×d`, given by rows, of full column rank.
    pub fn new(a: Vec<Vec<i64>>) -> Result<Self> {
        let Some(d) = a.first().map(Vec::len) else {
            return param("A must have at least one row");
        };
        if a.iter().any(|r| r.len() != d) {
            return param("rows of A must have equal length");
        }
        let q = FieldDescriptor::rational();
        let rows = a.iter().map(|r| r.iter().map(|&v| q.from_int(v)).collect()).collect();
        if d == 0 || Matrix::from_rows(&q, rows)?.rank() != d {
            return param("A must have full column rank d with 1 <= d <= n");
        }
        Ok(TorusData { a, d })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn a(&self) -> &[Vec<i64>] {
        &self.a
    }

    /// `A·e`
    pub fn apply(&self, e: &[i64]) -> Vec<i64> {
        self.a
            .iter()
            .map(|r| r.iter().zip(e).map(|(x, y)| x * y).sum())
            .collect()
    }

    /// `A^t·λ`
    pub fn apply_transpose(&self, lambda: &[i64]) -> Vec<i64> {
        (0..self.d)
            .map(|j| (0..self.n()).map(|i| self.a[i][j] * lambda[i]).sum())
            .collect()
    }
}

/// Torus data with a target point `η ∈ K` and, at a root of unity, its order.
/// The character `chi` is carried for bookkeeping and drives nothing.
#[derive(Clone, Debug)]
pub struct ReductionDatum {
    pub torus: TorusData,
    pub eta: Vec<Scalar>,
    pub l: Option<u32>,
    pub chi: Vec<i64>,
}

impl ReductionDatum {
    pub fn new(torus: TorusData, eta: Vec<Scalar>, l: Option<u32>) -> Result<Self> {
        if eta.len() != torus.d() {
            return param(format!("eta must have {} entries", torus.d()));
        }
        if eta.iter().any(Scalar::is_zero) {
            return param("every eta_j must be nonzero");
        }
        let chi = vec![0; torus.d()];
        Ok(ReductionDatum { torus, eta, l, chi })
    }

    /// `∏ η_j^{t_j}`
    pub fn eta_power(&self, t: &[i64]) -> Result<Scalar> {
        let mut acc = self.eta[0].field().one();
        for (e, &k) in self.eta.iter().zip(t) {
            acc = &acc * &e.pow(k)?;
        }
        Ok(acc)
    }
}

/// A Laurent monomial in the coordinate ring of `T` or of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LaurentMonomial {
    /// `z^c`, length `n`
    Z(Vec<i64>),
    /// `u^e`, length `d`
    U(Vec<i64>),
}

/// `z^c ↦ α^c` and `u^e ↦ α^{A·e}`.
pub fn quantum_comoment(
    mono: &LaurentMonomial,
    torus: &TorusData,
    spec: &Arc<AlgebraSpec>,
) -> Result<LocalizedElement> {
    if spec.n() != torus.n() {
        return param("torus rank must equal the number of variables");
    }
    let c = match mono {
        LaurentMonomial::Z(c) if c.len() == torus.n() => c.clone(),
        LaurentMonomial::U(e) if e.len() == torus.d() => torus.apply(e),
        _ => return param("Laurent exponent vector has the wrong length"),
    };
    LocalizedElement::alpha_power(spec, &c)
}

/// Checks the moment-map axiom for the group-like elements `z_i` and `u_j`:
/// conjugation by `Φ(h)` must scale every generator by its grading character,
/// `α_i g α_i^{-1} = q_ii^{λ_i} g` and `Φ(u_j) g Φ(u_j)^{-1} = ∏_i q_ii^{a_ij λ_i} g`
/// for `g` of degree `λ`. Euler operators of degree zero must be fixed.
pub fn verify_moment_identity(torus: &TorusData, spec: &Arc<AlgebraSpec>) -> Result<Report> {
    if spec.normalization() != Normalization::Rescaled {
        return param("the moment identity needs the rescaled normalization");
    }
    let n = spec.n();
    let mut gens: Vec<(String, PBWElement)> = Vec::new();
    for i in 0..n {
        gens.push((format!("x{}", i + 1), PBWElement::x(spec, i)?));
        gens.push((format!("d{}", i + 1), PBWElement::d(spec, i)?));
        gens.push((format!("a{}", i + 1), PBWElement::alpha(spec, i)?));
    }
    let mut hs: Vec<(String, LaurentMonomial)> = (0..n)
        .map(|i| {
            let mut c = vec![0; n];
            c[i] = 1;
            (format!("z{}", i + 1), LaurentMonomial::Z(c))
        })
        .collect();
    for j in 0..torus.d() {
        let mut e = vec![0; torus.d()];
        e[j] = 1;
        hs.push((format!("u{}", j + 1), LaurentMonomial::U(e)));
    }
    let mut report = Report::new();
    for (hname, h) in &hs {
        let phi = quantum_comoment(h, torus, spec)?;
        let inv = match h {
            LaurentMonomial::Z(c) => {
                quantum_comoment(&LaurentMonomial::Z(c.iter().map(|v| -v).collect()), torus, spec)?
            }
            LaurentMonomial::U(e) => {
                quantum_comoment(&LaurentMonomial::U(e.iter().map(|v| -v).collect()), torus, spec)?
            }
        };
        let weights = match h {
            LaurentMonomial::Z(c) => c.clone(),
            LaurentMonomial::U(e) => torus.apply(e),
        };
        for (gname, g) in &gens {
            let lambda = match g.grading() {
                crate::qweyl::Grading::Homogeneous(l) => l,
                crate::qweyl::Grading::Inhomogeneous => unreachable!("generators are homogeneous"),
            };
            let k: i64 = (0..n).map(|i| weights[i] * spec.m()[i][i] * lambda[i]).sum();
            let gl = LocalizedElement::from_pbw(g.clone());
            let lhs = phi.mul(&gl)?.mul(&inv)?;
            let rhs = gl.scale(&spec.q_pow(k));
            let ok = lhs.equals(&rhs)?;
            report.push(
                format!("Phi({hname}) {gname} Phi({hname})^-1 = q^{k} {gname}"),
                ok,
                if ok { String::new() } else { format!("got {lhs}") },
            );
        }
    }
    Ok(report)
}

/// Point-level moment maps `(p, w) ↦ ((1 + p_i w_i)_i, (∏_i (1 + p_i w_i)^{a_ij})_j)`.
pub fn classical_moment_eval(p: &[Scalar], w: &[Scalar], torus: &TorusData) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    if p.len() != torus.n() || w.len() != torus.n() {
        return param("p and w must have length n");
    }
    let mut t_point = Vec::with_capacity(p.len());
    for (i, (pi, wi)) in p.iter().zip(w).enumerate() {
        let v = &pi.field().one() + &(pi * wi);
        if v.is_zero() {
            return Err(Error::Domain(format!(
                "1 + p_{0} w_{0} = 0: point is off the open locus",
                i + 1
            )));
        }
        t_point.push(v);
    }
    let mut k_point = Vec::with_capacity(torus.d());
    for j in 0..torus.d() {
        let mut acc = t_point[0].field().one();
        for (i, t) in t_point.iter().enumerate() {
            acc = &acc * &t.pow(torus.a()[i][j])?;
        }
        k_point.push(acc);
    }
    Ok((t_point, k_point))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize) -> Arc<AlgebraSpec> {
        AlgebraSpec::single_parameter(n, Normalization::Rescaled, FieldDescriptor::rational_function()).unwrap()
    }

    #[test]
    fn comoment_values() {
        let s = spec(2);
        let t = TorusData::new(vec![vec![1], vec![1]]).unwrap();
        let u = quantum_comoment(&LaurentMonomial::U(vec![1]), &t, &s).unwrap();
        let expected = PBWElement::alpha(&s, 0)
            .unwrap()
            .mul(&PBWElement::alpha(&s, 1).unwrap())
            .unwrap();
        assert_eq!(u.numerator(), &expected);
        let z = quantum_comoment(&LaurentMonomial::Z(vec![-1, 0]), &t, &s).unwrap();
        assert_eq!(z.denominator(), &[1, 0]);
        assert!(quantum_comoment(&LaurentMonomial::Z(vec![1]), &t, &s).is_err());
    }

    #[test]
    fn moment_identity_general_matrix() {
        let s = AlgebraSpec::new(
            vec![vec![2, 1, 0], vec![-1, 1, -2], vec![0, 2, -1]],
            Normalization::Rescaled,
            FieldDescriptor::rational_function(),
        )
        .unwrap();
        let t = TorusData::new(vec![vec![1, 0], vec![2, 1], vec![-1, 3]]).unwrap();
        let r = verify_moment_identity(&t, &s).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn torus_rank_is_checked() {
        assert!(TorusData::new(vec![vec![1, 2], vec![2, 4]]).is_err());
        assert!(TorusData::new(vec![vec![1, 0]]).is_err());
    }

    #[test]
    fn classical_points() {
        let q = FieldDescriptor::rational();
        let t = TorusData::new(vec![vec![1], vec![1]]).unwrap();
        let (tp, kp) =
            classical_moment_eval(&[q.from_int(1), q.from_int(1)], &[q.from_int(1), q.from_int(2)], &t).unwrap();
        assert_eq!(tp, vec![q.from_int(2), q.from_int(3)]);
        assert_eq!(kp, vec![q.from_int(6)]);
        let t1 = TorusData::new(vec![vec![1]]).unwrap();
        assert!(matches!(
            classical_moment_eval(&[q.from_int(1)], &[q.from_int(-1)], &t1),
            Err(Error::Domain(_))
        ));
        let (tp, kp) = classical_moment_eval(&[q.zero()], &[q.zero()], &t1).unwrap();
        assert!(tp[0].is_one() && kp[0].is_one());
    }
}
