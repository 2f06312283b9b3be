use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::check::Report;
use crate::error::{param, Error, Result};
use crate::linalg::{Echelon, Matrix};
use crate::qweyl::{AlgebraSpec, Normalization};
use crate::scalars::{FieldDescriptor, FieldKind, Scalar};

/// A point `(a, ω)` of the spectrum of the `l`-center: the values of
/// `x_i^l` and `∂_i^l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralCharacter {
    pub a: Vec<Scalar>,
    pub omega: Vec<Scalar>,
}

impl CentralCharacter {
    /// `Δ^l` at this point, `∏ (1 + a_i ω_i)`.
    pub fn delta_l(&self) -> Scalar {
        let one = self.a[0].field().one();
        self.a
            .iter()
            .zip(&self.omega)
            .fold(one.clone(), |acc, (a, w)| &acc * &(&one + &(a * w)))
    }
}

/// Whether `∏ (1 + a_i ω_i) ≠ 0`.
pub fn azumaya_membership(chi: &CentralCharacter) -> bool {
    !chi.delta_l().is_zero()
}

/// Matrices `X_i`, `Y_i` satisfying every defining relation of the rescaled
/// algebra, with `X_i^l` and `Y_i^l` scalar. Only [`MatrixRep::new`] creates
/// one, after checking all of this exactly.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    spec: Arc<AlgebraSpec>,
    x: Vec<Matrix>,
    y: Vec<Matrix>,
    character: CentralCharacter,
}

/// Exact check of the relations of `spec` on the given matrices.
pub fn relation_report(spec: &AlgebraSpec, x: &[Matrix], y: &[Matrix]) -> Result<Report> {
    let n = spec.n();
    let dim = x[0].nrows();
    let f = spec.field();
    let id = Matrix::identity(f, dim);
    let mut report = Report::new();
    let mut check = |name: String, lhs: Matrix, rhs: Matrix| {
        let ok = lhs == rhs;
        report.push(name, ok, "");
    };
    let qp = |k: i64| spec.q_pow(k);
    for i in 0..n {
        for j in 0..n {
            let m = spec.m()[i][j];
            if i < j {
                check(
                    format!("X{0}X{1} = q^{m} X{1}X{0}", j + 1, i + 1),
                    x[j].mul(&x[i])?,
                    x[i].mul(&x[j])?.scale(&qp(m)),
                );
                check(
                    format!("Y{0}Y{1} = q^{m} Y{1}Y{0}", j + 1, i + 1),
                    y[j].mul(&y[i])?,
                    y[i].mul(&y[j])?.scale(&qp(m)),
                );
            }
            let rhs = x[j].mul(&y[i])?.scale(&qp(m));
            if i == j {
                let shift = id.scale(&(&qp(m) - &f.one()));
                check(
                    format!("Y{0}X{0} = q^{m} X{0}Y{0} + (q^{m}-1)", i + 1),
                    y[i].mul(&x[i])?,
                    rhs.add(&shift)?,
                );
            } else {
                check(format!("Y{}X{} = q^{m} X{1}Y{0}", i + 1, j + 1), y[i].mul(&x[j])?, rhs);
            }
        }
    }
    Ok(report)
}

impl MatrixRep {
    pub fn new(spec: &Arc<AlgebraSpec>, x: Vec<Matrix>, y: Vec<Matrix>) -> Result<Self> {
        let l = match (spec.field().kind(), spec.field().l()) {
            (FieldKind::Cyclotomic, Some(l)) => l,
            _ => return param("representations need a cyclotomic field"),
        };
        if spec.normalization() != Normalization::Rescaled {
            return param("representations use the rescaled normalization");
        }
        if x.len() != spec.n()
            || y.len() != spec.n()
            || x.iter().chain(&y).any(|m| !m.is_square() || m.nrows() != x[0].nrows())
        {
            return param("need n square matrices of equal size for X and for Y");
        }
        let report = relation_report(spec, &x, &y)?;
        if let Some(bad) = report.failures().next() {
            return Err(Error::Invariant(format!("relation fails: {}", bad.name)));
        }
        let mut a = Vec::new();
        let mut omega = Vec::new();
        for i in 0..spec.n() {
            let xa = x[i].pow(l)?.as_scalar();
            let yw = y[i].pow(l)?.as_scalar();
            match (xa, yw) {
                (Some(xa), Some(yw)) => {
                    a.push(xa);
                    omega.push(yw);
                }
                (None, _) => return Err(Error::Invariant(format!("X{}^{l} is not scalar", i + 1))),
                (_, None) => return Err(Error::Invariant(format!("Y{}^{l} is not scalar", i + 1))),
            }
        }
        Ok(MatrixRep {
            spec: spec.clone(),
            x,
            y,
            character: CentralCharacter { a, omega },
        })
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.x[0].nrows()
    }

    pub fn x(&self) -> &[Matrix] {
        &self.x
    }

    pub fn y(&self) -> &[Matrix] {
        &self.y
    }

    pub fn character(&self) -> &CentralCharacter {
        &self.character
    }

    /// `I + X_i Y_i`, the image of `α_i`.
    pub fn alpha(&self, i: usize) -> Matrix {
        let id = Matrix::identity(self.spec.field(), self.dim());
        id.add(&self.x[i].mul(&self.y[i]).expect("square")).expect("square")
    }

    /// All `X_i` and `Y_i`.
    pub fn generators(&self) -> Vec<Matrix> {
        self.x.iter().chain(&self.y).cloned().collect()
    }
}

fn cyclotomic_l(field: &FieldDescriptor) -> Result<u32> {
    match (field.kind(), field.l()) {
        (FieldKind::Cyclotomic, Some(l)) => Ok(l),
        _ => param("representations need a cyclotomic field"),
    }
}

fn rank1_matrices(lambda: &Scalar, b: &[Scalar]) -> Result<(Matrix, Matrix)> {
    let f = lambda.field();
    let l = cyclotomic_l(f)? as usize;
    if lambda.is_zero() {
        return param("lambda must be nonzero");
    }
    if b.len() != l {
        return param(format!("b must have l = {l} entries"));
    }
    let q = f.q()?;
    let lambdas: Vec<Scalar> = (0..l).map(|i| lambda * &q.pow(-(i as i64)).unwrap()).collect();
    let x = Matrix::diagonal(f, &lambdas);
    let mut y = Matrix::zeros(f, l, l);
    for i in 0..l {
        y.set(i, i, -(lambdas[i].inv()?));
        let r = (i + 1) % l;
        let prev = y.get(r, i).clone();
        y.set(r, i, &prev + &b[i]);
    }
    Ok((x, y))
}

/// Rank-one representation on `𝕂^l`: `X = diag(λ q^{-i})`, `Y` with
/// diagonal `-1/λ_i` and the cyclic entries `b_i` at `(i+1 mod l, i)`.
/// Irreducible exactly when every `b_i ≠ 0`.
pub fn build_irrep_rank1(lambda: &Scalar, b: &[Scalar]) -> Result<MatrixRep> {
    let (x, y) = rank1_matrices(lambda, b)?;
    let spec = AlgebraSpec::single_parameter(1, Normalization::Rescaled, lambda.field().clone())?;
    MatrixRep::new(&spec, vec![x], vec![y])
}

/// As [`build_irrep_rank1`], with the last cyclic entry chosen so that
/// `α^l = t^l`; the eigenvalues of `α` are then `t ζ^k`. `b_head` holds the
/// first `l − 1` entries, all nonzero.
pub fn build_irrep_rank1_with_root(lambda: &Scalar, b_head: &[Scalar], t: &Scalar) -> Result<MatrixRep> {
    let l = cyclotomic_l(lambda.field())?;
    if b_head.iter().any(Scalar::is_zero) || t.is_zero() {
        return param("b entries and the root t must be nonzero");
    }
    let prod = b_head.iter().fold(lambda.pow(l as i64)?, |acc, v| &acc * v);
    let last = t.pow(l as i64)?.try_div(&prod)?;
    let mut b = b_head.to_vec();
    b.push(last);
    build_irrep_rank1(lambda, &b)
}

/// The module `𝕂[x]/(x^l)`: `X` shifts `x^m ↦ x^{m+1}`, `Y` sends
/// `x^m ↦ (q^m − 1) x^{m−1}`.
pub fn build_irrep_nilpotent(field: &FieldDescriptor) -> Result<MatrixRep> {
    let (x, y) = nilpotent_matrices(field)?;
    let spec = AlgebraSpec::single_parameter(1, Normalization::Rescaled, field.clone())?;
    MatrixRep::new(&spec, vec![x], vec![y])
}

fn nilpotent_matrices(field: &FieldDescriptor) -> Result<(Matrix, Matrix)> {
    let l = cyclotomic_l(field)? as usize;
    let mut x = Matrix::zeros(field, l, l);
    let mut y = Matrix::zeros(field, l, l);
    for m in 0..l {
        if m + 1 < l {
            x.set(m + 1, m, field.one());
        }
        if m > 0 {
            y.set(m - 1, m, &field.q_power(m as i64)? - &field.one());
        }
    }
    Ok((x, y))
}

/// Per-coordinate data for [`build_irrep`].
#[derive(Clone, Debug)]
pub enum SlotData {
    Rank1 { lambda: Scalar, b: Vec<Scalar> },
    Nilpotent,
}

/// Basis of `{G : G·A_k = s_k·A_k·G for all k}`.
pub fn intertwiner_basis(field: &FieldDescriptor, pairs: &[(&Matrix, Scalar)]) -> Vec<Matrix> {
    let dim = pairs[0].0.nrows();
    let mut ech = Echelon::new(field, dim * dim);
    for (a, s) in pairs {
        for r in 0..dim {
            for c in 0..dim {
                let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                for k in 0..dim {
                    let akc = a.get(k, c);
                    if !akc.is_zero() {
                        let e = row.entry(r * dim + k).or_insert_with(|| field.zero());
                        *e = &*e + akc;
                    }
                    let ark = a.get(r, k);
                    if !ark.is_zero() {
                        let e = row.entry(k * dim + c).or_insert_with(|| field.zero());
                        *e = &*e - &(s * ark);
                    }
                }
                let row: Vec<(usize, Scalar)> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                if !row.is_empty() {
                    ech.insert(row);
                }
            }
        }
    }
    ech.kernel()
        .into_iter()
        .map(|v| Matrix::from_rows(field, v.chunks(dim).map(<[Scalar]>::to_vec).collect()).expect("square"))
        .collect()
}

/// Basis of the commutant of a set of square matrices.
pub fn commutant_basis(field: &FieldDescriptor, ops: &[Matrix]) -> Vec<Matrix> {
    let pairs: Vec<(&Matrix, Scalar)> = ops.iter().map(|m| (m, field.one())).collect();
    intertwiner_basis(field, &pairs)
}

/// Dimension of `{M : M X_i = X_i M, M Y_i = Y_i M}`; one means irreducible.
pub fn commutant_dimension(rep: &MatrixRep) -> usize {
    commutant_basis(rep.spec().field(), &rep.generators()).len()
}

/// Dimension of the unital algebra generated by `ops`, as a subspace of the
/// matrix space. Over an algebraically closed field a module is irreducible
/// exactly when this is `dim²`; a commutant of dimension one alone does not
/// rule out an indecomposable but reducible module.
pub fn generated_algebra_dimension(field: &FieldDescriptor, ops: &[Matrix]) -> Result<usize> {
    let dim = ops[0].nrows();
    let mut span = Echelon::new(field, dim * dim);
    let id = Matrix::identity(field, dim);
    span.insert_dense(id.entries());
    let mut frontier = vec![id];
    while let Some(m) = frontier.pop() {
        for g in ops {
            let p = m.mul(g)?;
            if span.insert_dense(p.entries()) {
                frontier.push(p);
            }
        }
    }
    Ok(span.rank())
}

/// An invertible `G` with `G X = q X G` and `G Y = q^{-1} Y G`: `α` itself
/// when it is invertible, otherwise an invertible element of the solution
/// space.
fn twist_operator(field: &FieldDescriptor, x: &Matrix, y: &Matrix) -> Result<Matrix> {
    let dim = x.nrows();
    let alpha = Matrix::identity(field, dim).add(&x.mul(y)?)?;
    if alpha.rank() == dim {
        return Ok(alpha);
    }
    let q = field.q()?;
    let basis = intertwiner_basis(field, &[(x, q.clone()), (y, q.inv()?)]);
    let mut candidates: Vec<Matrix> = basis.clone();
    let mut combo = Matrix::zeros(field, dim, dim);
    for (k, g) in basis.iter().enumerate() {
        combo = combo.add(&g.scale(&field.from_int(k as i64 + 1)))?;
        candidates.push(combo.clone());
    }
    candidates
        .into_iter()
        .find(|g| g.rank() == dim)
        .ok_or_else(|| Error::Invariant("no invertible operator twists this slot; tensor ansatz fails".into()))
}

/// `l^n`-dimensional representation of the single-parameter algebra built
/// slot by slot: `X_i = G_1 ⊗ ⋯ ⊗ G_{i−1} ⊗ X^{(i)} ⊗ I ⊗ ⋯` and
/// `Y_i = G_1^{-1} ⊗ ⋯ ⊗ G_{i−1}^{-1} ⊗ Y^{(i)} ⊗ I ⊗ ⋯`, where `G_k`
/// twists slot `k` (`G X = q X G`, `G Y = q^{-1} Y G`). Every relation is
/// verified before returning.
pub fn build_irrep(slots: &[SlotData], field: &FieldDescriptor) -> Result<MatrixRep> {
    let l = cyclotomic_l(field)? as usize;
    if slots.is_empty() {
        return param("need at least one slot");
    }
    let mut local = Vec::new();
    for s in slots {
        local.push(match s {
            SlotData::Rank1 { lambda, b } => {
                if lambda.field() != field {
                    return param("slot data must lie in the representation field");
                }
                rank1_matrices(lambda, b)?
            }
            SlotData::Nilpotent => nilpotent_matrices(field)?,
        });
    }
    let n = slots.len();
    let mut twists = Vec::new();
    for (x, y) in &local[..n - 1] {
        let g = twist_operator(field, x, y)?;
        let g_inv = g.inverse()?;
        twists.push((g, g_inv));
    }
    let id = Matrix::identity(field, l);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..n {
        let mut xm = Matrix::identity(field, 1);
        let mut ym = Matrix::identity(field, 1);
        for k in 0..n {
            let (xf, yf) = match k.cmp(&i) {
                std::cmp::Ordering::Less => (&twists[k].0, &twists[k].1),
                std::cmp::Ordering::Equal => (&local[i].0, &local[i].1),
                std::cmp::Ordering::Greater => (&id, &id),
            };
            xm = xm.kron(xf);
            ym = ym.kron(yf);
        }
        xs.push(xm);
        ys.push(ym);
    }
    let spec = AlgebraSpec::single_parameter(n, Normalization::Rescaled, field.clone())?;
    MatrixRep::new(&spec, xs, ys)
}

/// Nonzero element of `ℚ(ζ_l)` with small random integer coordinates.
pub fn random_unit(field: &FieldDescriptor, rng: &mut impl Rng) -> Scalar {
    let phi = field.phi().unwrap_or(1);
    loop {
        let coeffs: Vec<BigRational> = (0..phi)
            .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-3..=3))))
            .collect();
        let s = match field.kind() {
            FieldKind::Cyclotomic => field.from_cyclo_coeffs(coeffs).expect("length phi"),
            _ => field.from_rational(coeffs[0].clone()),
        };
        if !s.is_zero() {
            return s;
        }
    }
}

/// For a rank-one rep: the characteristic polynomial of `α = I + XY` is
/// `T^l − (1 + aω)`, so on the Azumaya locus `α` has `l` distinct
/// eigenvalues. With a root `t` of `T^l − (1 + aω)`, also checks that each
/// `t ζ^k` is an eigenvalue with a one-dimensional eigenspace.
pub fn verify_alpha_spectrum(rep: &MatrixRep, root: Option<&Scalar>) -> Result<Report> {
    if rep.spec().n() != 1 {
        return param("spectrum check is for rank-one representations");
    }
    let f = rep.spec().field();
    let l = rep.dim();
    let alpha = rep.alpha(0);
    let c = rep.character().delta_l();
    let mut expected = vec![f.zero(); l + 1];
    expected[0] = -c.clone();
    expected[l] = f.one();
    let cp = alpha.charpoly()?;
    let mut report = Report::new();
    report.push(
        format!("charpoly(alpha) = T^{l} - (1 + a*omega)"),
        cp == expected,
        if cp == expected {
            String::new()
        } else {
            "mismatch".to_string()
        },
    );
    report.push("1 + a*omega != 0 (distinct eigenvalues)", !c.is_zero(), c.to_string());
    if let Some(t) = root {
        let zeta = f.q()?;
        let mut bad = None;
        for k in 0..l as i64 {
            let ev = t * &zeta.pow(k)?;
            let shifted = alpha.sub(&Matrix::scalar(f, l, &ev))?;
            if shifted.rank() != l - 1 && bad.is_none() {
                bad = Some(format!("k = {k}: rank {}", shifted.rank()));
            }
        }
        report.push(
            "t*zeta^k are simple eigenvalues",
            bad.is_none(),
            bad.unwrap_or_default(),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field(l: u32) -> FieldDescriptor {
        FieldDescriptor::cyclotomic(l).unwrap()
    }

    #[test]
    fn rank_one_example() {
        let f = field(3);
        let ones = vec![f.one(); 3];
        let rep = build_irrep_rank1(&f.one(), &ones).unwrap();
        let q = f.q().unwrap();
        assert_eq!(
            rep.x()[0],
            Matrix::diagonal(&f, &[f.one(), q.pow(-1).unwrap(), q.pow(-2).unwrap()])
        );
        assert!(rep.character().a[0].is_one());
        assert_eq!(commutant_dimension(&rep), 1);
        assert_eq!(generated_algebra_dimension(&f, &rep.generators()).unwrap(), 9);
        // one vanishing entry: reducible (a line is invariant) yet indecomposable
        let one_zero = build_irrep_rank1(&f.one(), &[f.one(), f.zero(), f.one()]).unwrap();
        assert_eq!(commutant_dimension(&one_zero), 1);
        assert!(generated_algebra_dimension(&f, &one_zero.generators()).unwrap() < 9);
        let zeros = vec![f.zero(); 3];
        let red = build_irrep_rank1(&f.one(), &zeros).unwrap();
        assert!(commutant_dimension(&red) > 1);
    }

    #[test]
    fn nilpotent_example() {
        let f = field(3);
        let rep = build_irrep_nilpotent(&f).unwrap();
        let q = f.q().unwrap();
        assert_eq!(rep.y()[0].get(0, 1), &(&q - &f.one()));
        assert_eq!(rep.y()[0].get(1, 2), &(&(&q * &q) - &f.one()));
        assert!(rep.character().a[0].is_zero() && rep.character().omega[0].is_zero());
        assert_eq!(commutant_dimension(&rep), 1);
        assert!(azumaya_membership(rep.character()));
    }

    #[test]
    fn spectrum_with_root() {
        let f = field(5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let lambda = random_unit(&f, &mut rng);
        let b: Vec<Scalar> = (0..4).map(|_| random_unit(&f, &mut rng)).collect();
        let t = random_unit(&f, &mut rng);
        let rep = build_irrep_rank1_with_root(&lambda, &b, &t).unwrap();
        let r = verify_alpha_spectrum(&rep, Some(&t)).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn tensor_builds() {
        let f = field(3);
        let rep = build_irrep(&[SlotData::Nilpotent, SlotData::Nilpotent], &f).unwrap();
        assert_eq!(rep.dim(), 9);
        assert!(rep.character().a.iter().all(Scalar::is_zero));
        assert_eq!(commutant_dimension(&rep), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let slot = |rng: &mut ChaCha8Rng| SlotData::Rank1 {
            lambda: random_unit(&f, rng),
            b: (0..3).map(|_| random_unit(&f, rng)).collect(),
        };
        let slots = vec![slot(&mut rng), SlotData::Nilpotent, slot(&mut rng)];
        let rep = build_irrep(&slots, &f).unwrap();
        assert_eq!(rep.dim(), 27);
        // a vanishing b entry admits no invertible twist, so such a slot can only come last
        let degenerate = SlotData::Rank1 {
            lambda: f.one(),
            b: vec![f.one(), f.zero(), f.one()],
        };
        let err = build_irrep(&[degenerate.clone(), SlotData::Nilpotent], &f).unwrap_err();
        assert!(matches!(err, Error::Invariant(_)));
        let rep = build_irrep(&[SlotData::Nilpotent, degenerate], &f).unwrap();
        assert_eq!(commutant_dimension(&rep), 1);
        assert!(generated_algebra_dimension(&f, &rep.generators()).unwrap() < 81);
        let split = SlotData::Rank1 {
            lambda: f.one(),
            b: vec![f.zero(); 3],
        };
        let rep = build_irrep(&[SlotData::Nilpotent, split], &f).unwrap();
        assert!(commutant_dimension(&rep) > 1);
    }

    #[test]
    fn azumaya_examples() {
        let f = field(3);
        let zero = CentralCharacter {
            a: vec![f.zero()],
            omega: vec![f.zero()],
        };
        assert!(azumaya_membership(&zero));
        let bad = CentralCharacter {
            a: vec![f.one()],
            omega: vec![f.from_int(-1)],
        };
        assert!(!azumaya_membership(&bad));
    }
}
