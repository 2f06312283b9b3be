//! Hamiltonian reduction on a single representation `V` at a root of unity:
//! the moment operators `Φ(u_j) = ∏_i (I + X_i Y_i)^{a_ij}`, the weight space
//! `V_η`, the kernel of restriction `End V → Hom(V_η, V)`, the reduced
//! algebra `End_𝔻(Hom(V_η, V))^{op} ≅ End(V_η)`, and the points of the
//! degree-`l^{n−d}` cover over `η`.

use crate::check::Report;
use crate::error::{param, Error, Result};
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::moment::TorusData;
use crate::root_of_unity::{commutant_basis, MatrixRep, SlotData};
use crate::scalars::{FieldDescriptor, Scalar};

/// The operators `Φ(u_j)` and the scalars `Φ(u_j)^l = ∏_i (1 + a_i ω_i)^{a_ij}`.
#[derive(Clone, Debug)]
pub struct MomentOperators {
    pub ops: Vec<Matrix>,
    pub l_scalars: Vec<Scalar>,
}

fn check_ranks(rep: &MatrixRep, torus: &TorusData) -> Result<()> {
    if rep.spec().n() != torus.n() {
        return param("torus rank must equal the number of variables of the representation");
    }
    Ok(())
}

/// `Φ(u_j) = ∏_i (I + X_i Y_i)^{a_ij}`; asserts `Φ(u_j)^l` is the scalar
/// predicted by the central character.
pub fn moment_operators(rep: &MatrixRep, torus: &TorusData) -> Result<MomentOperators> {
    check_ranks(rep, torus)?;
    let f = rep.spec().field();
    let l = f.l().expect("representations live over a cyclotomic field");
    let dim = rep.dim();
    let chi = rep.character();
    let mut ops = Vec::new();
    let mut l_scalars = Vec::new();
    for j in 0..torus.d() {
        let mut phi = Matrix::identity(f, dim);
        let mut scalar = f.one();
        for i in 0..torus.n() {
            let e = torus.a()[i][j];
            if e == 0 {
                continue;
            }
            let alpha = rep.alpha(i);
            let power = alpha.pow_signed(e).map_err(|_| {
                Error::Domain(format!(
                    "I + X{0}Y{0} is singular but A has a negative exponent in row {0}",
                    i + 1
                ))
            })?;
            phi = phi.mul(&power)?;
            let base = &f.one() + &(&chi.a[i] * &chi.omega[i]);
            scalar = &scalar * &base.pow(e)?;
        }
        let check = phi.pow(l)?;
        if check != Matrix::scalar(f, dim, &scalar) {
            return Err(Error::Invariant(format!(
                "Phi(u{})^{l} is not {scalar} times the identity",
                j + 1
            )));
        }
        ops.push(phi);
        l_scalars.push(scalar);
    }
    Ok(MomentOperators { ops, l_scalars })
}

/// The joint eigenspace `V_η` of the moment operators.
#[derive(Clone, Debug)]
pub struct WeightSpaceResult {
    pub basis: Vec<Vec<Scalar>>,
    pub eta: Vec<Scalar>,
    pub moment_ops: Vec<Matrix>,
}

impl WeightSpaceResult {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors as the columns of an `N × k` matrix.
    pub fn basis_matrix(&self, field: &FieldDescriptor) -> Matrix {
        Matrix::from_columns(field, self.moment_ops[0].nrows(), &self.basis)
    }
}

pub fn weight_space(rep: &MatrixRep, torus: &TorusData, eta: &[Scalar]) -> Result<WeightSpaceResult> {
    if eta.len() != torus.d() {
        return param(format!("eta must have {} entries", torus.d()));
    }
    let f = rep.spec().field();
    let dim = rep.dim();
    let ops = moment_operators(rep, torus)?.ops;
    let mut rows = Vec::new();
    for (phi, e) in ops.iter().zip(eta) {
        let shifted = phi.sub(&Matrix::scalar(f, dim, e))?;
        rows.extend(shifted.to_rows());
    }
    let basis = Matrix::from_rows(f, rows)?.kernel();
    Ok(WeightSpaceResult {
        basis,
        eta: eta.to_vec(),
        moment_ops: ops,
    })
}

fn sorted(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    v
}

/// Compares the left ideal `J = span{P (Φ(u_j) − η_j)}` of `End V` with the
/// kernel of restriction to `V_η`. Matrices are vectorized row by row.
pub fn restriction_kernel_check(rep: &MatrixRep, torus: &TorusData, eta: &[Scalar]) -> Result<Report> {
    let ws = weight_space(rep, torus, eta)?;
    let k = ws.dim();
    if k == 0 {
        return param("the weight space is zero");
    }
    let f = rep.spec().field();
    let n = rep.dim();
    let mut ideal = Echelon::new(f, n * n);
    for (phi, e) in ws.moment_ops.iter().zip(eta) {
        let q = phi.sub(&Matrix::scalar(f, n, e))?;
        // E_rs · Q has row r equal to row s of Q
        for s in 0..n {
            let row = q.row(s);
            for r in 0..n {
                ideal.insert(
                    row.iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(c, v)| (r * n + c, v.clone()))
                        .collect(),
                );
            }
        }
    }
    // f|V_η = 0 iff every row of f annihilates the basis of V_η
    let left_null = ws.basis_matrix(f).transpose().kernel();
    let mut kernel = Echelon::new(f, n * n);
    for r in 0..n {
        for w in &left_null {
            kernel.insert(sorted(
                w.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (r * n + c, v.clone()))
                    .collect(),
            ));
        }
    }
    let expected = n * (n - k);
    let mut report = Report::new();
    report.push(
        format!("dim J = {expected}"),
        ideal.rank() == expected,
        format!("dim J = {}", ideal.rank()),
    );
    report.push(
        format!("dim ker res = {expected}"),
        kernel.rank() == expected,
        format!("dim ker res = {}", kernel.rank()),
    );
    report.push("J = ker res", ideal.same_span(&kernel), "");
    Ok(report)
}

/// The reduced algebra at `η` and the check of its isomorphism with `End(V_η)`.
#[derive(Clone, Debug)]
pub struct ReducedAlgebraResult {
    pub dimension: usize,
    pub iso_verified: bool,
    /// Images of the matrix units `E_ab` of `End(V_η)`.
    pub witness: Vec<Matrix>,
    pub report: Report,
}

/// `f ↦ (g ↦ g ∘ f)` sends `F ∈ End(V_η)` to `I_N ⊗ F^T` on row-vectorized
/// `N × k` matrices `g`; `P ∈ End V` acts on `Hom(V_η, V)` as `P ⊗ I_k`.
pub fn reduced_endomorphism_algebra(
    rep: &MatrixRep,
    torus: &TorusData,
    eta: &[Scalar],
) -> Result<ReducedAlgebraResult> {
    let ws = weight_space(rep, torus, eta)?;
    let k = ws.dim();
    if k == 0 {
        return param("the weight space is zero");
    }
    let f = rep.spec().field();
    let n = rep.dim();
    let id_n = Matrix::identity(f, n);
    let id_k = Matrix::identity(f, k);
    let unit = |a: usize, b: usize| {
        let mut e = Matrix::zeros(f, k, k);
        e.set(a, b, f.one());
        e
    };
    // An operator on Hom(V_η, V) is a k×k array of N×N blocks (block (a, b)
    // maps column b of g to column a); commuting with every P ⊗ I_k means
    // each block commutes with every P. So the commutant is C_V ⊗ M_k exactly.
    let c_v = commutant_basis(f, &rep.generators());
    let mut commutant = Echelon::new(f, (n * k) * (n * k));
    for c in &c_v {
        for a in 0..k {
            for b in 0..k {
                commutant.insert_dense(c.kron(&unit(a, b)).entries());
            }
        }
    }
    let lifted: Vec<Matrix> = rep.generators().iter().map(|p| p.kron(&id_k)).collect();
    let mut witness = Vec::new();
    let mut in_commutant = true;
    for a in 0..k {
        for b in 0..k {
            let w = id_n.kron(&unit(a, b).transpose());
            for p in &lifted {
                in_commutant &= p.mul(&w)? == w.mul(p)?;
            }
            witness.push(w);
        }
    }
    let mut images = Echelon::new(f, (n * k) * (n * k));
    for w in &witness {
        images.insert_dense(w.entries());
    }
    let mut anti = true;
    for a in 0..k {
        for b in 0..k {
            for c in 0..k {
                for d in 0..k {
                    // E_ab E_cd = δ_bc E_ad, so W(E_ab E_cd) must equal W(E_cd) W(E_ab)
                    let lhs = if b == c {
                        witness[a * k + d].clone()
                    } else {
                        Matrix::zeros(f, n * k, n * k)
                    };
                    anti &= lhs == witness[c * k + d].mul(&witness[a * k + b])?;
                }
            }
        }
    }
    let mut report = Report::new();
    report.push("image commutes with the action", in_commutant, "");
    report.push(
        format!("map is injective (rank {})", k * k),
        images.rank() == k * k,
        format!("rank {}", images.rank()),
    );
    report.push(
        format!("commutant dimension = (dim V_eta)^2 = {}", k * k),
        commutant.rank() == k * k,
        format!("commutant dimension {}", commutant.rank()),
    );
    report.push("image spans the commutant", images.same_span(&commutant), "");
    report.push("map reverses products", anti, "");
    Ok(ReducedAlgebraResult {
        dimension: commutant.rank(),
        iso_verified: report.all_passed(),
        witness,
        report,
    })
}

/// The `l^d` values `η_j = ζ^{k_j} ∏_i t_i^{a_ij}` at which weight spaces can
/// be nonzero, given roots `t_i` of the values of `α_i^l`.
pub fn candidate_etas(roots: &[Scalar], torus: &TorusData) -> Result<Vec<Vec<Scalar>>> {
    let f = roots[0].field();
    let l = f
        .l()
        .ok_or_else(|| Error::Parameter("needs a cyclotomic field".into()))? as i64;
    let zeta = f.q()?;
    let mut base = Vec::new();
    for j in 0..torus.d() {
        let mut acc = f.one();
        for (i, t) in roots.iter().enumerate() {
            acc = &acc * &t.pow(torus.a()[i][j])?;
        }
        base.push(acc);
    }
    let mut out: Vec<Vec<Scalar>> = vec![vec![]];
    for b in &base {
        let mut next = Vec::new();
        for prefix in &out {
            for k in 0..l {
                let mut v = prefix.clone();
                v.push(b * &zeta.pow(k)?);
                next.push(v);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Rank-one slot data whose `α^l` equals `t^l` (last cyclic entry solved for).
pub fn slot_with_root(lambda: &Scalar, b_head: &[Scalar], t: &Scalar) -> Result<SlotData> {
    let l = lambda
        .field()
        .l()
        .ok_or_else(|| Error::Parameter("needs a cyclotomic field".into()))?;
    if b_head.len() + 1 != l as usize || b_head.iter().any(Scalar::is_zero) || t.is_zero() {
        return param("need l - 1 nonzero b entries and a nonzero root");
    }
    let prod = b_head.iter().fold(lambda.pow(l as i64)?, |acc, v| &acc * v);
    let mut b = b_head.to_vec();
    b.push(t.pow(l as i64)?.try_div(&prod)?);
    Ok(SlotData::Rank1 {
        lambda: lambda.clone(),
        b,
    })
}

/// Points of the cover over `η`.
#[derive(Clone, Debug)]
pub struct CoverFiber {
    pub points: Vec<Vec<Scalar>>,
    /// `l^{n−d}`
    pub expected: usize,
}

impl CoverFiber {
    /// Empty, or exactly `l^{n−d}` points.
    pub fn count_matches(&self) -> bool {
        self.points.is_empty() || self.points.len() == self.expected
    }
}

/// All `T` with `T_i^l = t_i^l` and `∏_i T_i^{a_ij} = η_j`, found by running
/// over the `l^n` choices `T_i = t_i ζ^{k_i}`. Refuses when `l^n > cap`.
pub fn cover_fiber_points(roots: &[Scalar], torus: &TorusData, eta: &[Scalar], cap: usize) -> Result<CoverFiber> {
    let n = torus.n();
    if roots.len() != n || eta.len() != torus.d() {
        return param("need n roots and d values of eta");
    }
    if eta.iter().chain(roots).any(Scalar::is_zero) {
        return param("roots and eta must be nonzero");
    }
    let f = roots[0].field();
    let l = f
        .l()
        .ok_or_else(|| Error::Parameter("needs a cyclotomic field".into()))? as usize;
    let total = (l as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return param(format!("l^n = {total} candidates exceeds the enumeration cap {cap}"));
    }
    let zeta = f.q()?;
    let zeta_pows: Vec<Scalar> = (0..l as i64).map(|k| zeta.pow(k)).collect::<Result<_>>()?;
    let candidates: Vec<Vec<Scalar>> = roots
        .iter()
        .map(|t| zeta_pows.iter().map(|z| t * z).collect())
        .collect();
    let mut points = Vec::new();
    let mut k = vec![0usize; n];
    'outer: loop {
        let t: Vec<Scalar> = (0..n).map(|i| candidates[i][k[i]].clone()).collect();
        let mut ok = true;
        for (j, e) in eta.iter().enumerate() {
            let mut acc = f.one();
            for (i, ti) in t.iter().enumerate() {
                acc = &acc * &ti.pow(torus.a()[i][j])?;
            }
            if &acc != e {
                ok = false;
                break;
            }
        }
        if ok {
            points.push(t);
        }
        for slot in k.iter_mut() {
            *slot += 1;
            if *slot < l {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    Ok(CoverFiber {
        points,
        expected: l.pow((n - torus.d()) as u32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_of_unity::{build_irrep, random_unit};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn generic(n: usize, l: u32, seed: u64) -> (MatrixRep, Vec<Scalar>) {
        let f = FieldDescriptor::cyclotomic(l).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut slots = Vec::new();
        let mut roots = Vec::new();
        for _ in 0..n {
            let lambda = random_unit(&f, &mut rng);
            let head: Vec<Scalar> = (1..l).map(|_| random_unit(&f, &mut rng)).collect();
            let t = random_unit(&f, &mut rng);
            slots.push(slot_with_root(&lambda, &head, &t).unwrap());
            roots.push(t);
        }
        (build_irrep(&slots, &f).unwrap(), roots)
    }

    #[test]
    fn rank_one_fiber() {
        let (rep, roots) = generic(1, 3, 1);
        let torus = TorusData::new(vec![vec![1]]).unwrap();
        let etas = candidate_etas(&roots, &torus).unwrap();
        let mut total = 0;
        for eta in &etas {
            let ws = weight_space(&rep, &torus, eta).unwrap();
            assert_eq!(ws.dim(), 1);
            total += ws.dim();
            assert!(restriction_kernel_check(&rep, &torus, eta).unwrap().all_passed());
            let red = reduced_endomorphism_algebra(&rep, &torus, eta).unwrap();
            assert!(red.iso_verified, "{}", red.report);
            assert_eq!(red.dimension, 1);
        }
        assert_eq!(total, 3);
        let off = vec![&etas[0][0] + &rep.spec().field().one()];
        assert_eq!(weight_space(&rep, &torus, &off).unwrap().dim(), 0);
    }

    #[test]
    fn two_variable_fiber() {
        let (rep, roots) = generic(2, 3, 2);
        let torus = TorusData::new(vec![vec![1], vec![1]]).unwrap();
        let eta = &candidate_etas(&roots, &torus).unwrap()[1];
        assert_eq!(weight_space(&rep, &torus, eta).unwrap().dim(), 3);
        let r = restriction_kernel_check(&rep, &torus, eta).unwrap();
        assert!(r.all_passed(), "{r}");
        let red = reduced_endomorphism_algebra(&rep, &torus, eta).unwrap();
        assert!(red.iso_verified, "{}", red.report);
        assert_eq!(red.dimension, 9);
        let m = moment_operators(&rep, &torus).unwrap();
        assert_eq!(m.ops.len(), 1);
    }

    #[test]
    fn cover_points() {
        let f = FieldDescriptor::cyclotomic(3).unwrap();
        let torus = TorusData::new(vec![vec![1], vec![1]]).unwrap();
        let pts = cover_fiber_points(&[f.one(), f.one()], &torus, &[f.one()], 1000).unwrap();
        assert_eq!(pts.points.len(), 3);
        assert!(pts.count_matches());
        let none = cover_fiber_points(&[f.one(), f.one()], &torus, &[f.from_int(2)], 1000).unwrap();
        assert!(none.points.is_empty());
        let square = TorusData::new(vec![vec![1, 0], vec![1, 1]]).unwrap();
        let one = cover_fiber_points(&[f.one(), f.one()], &square, &[f.one(), f.one()], 1000).unwrap();
        assert_eq!(one.points.len(), 1);
        assert!(cover_fiber_points(
            &vec![f.one(); 3],
            &TorusData::new(vec![vec![1]; 3]).unwrap(),
            &[f.one()],
            10
        )
        .is_err());
    }
}
