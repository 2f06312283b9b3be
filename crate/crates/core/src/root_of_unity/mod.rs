//! The q-Weyl algebra at a primitive `l`-th root of unity: its `l`-center
//! `Z_l = 𝕂[x_i^l, ∂_i^l]`, the identity `Δ^l = ∏ (1 + x_i^l ∂_i^l)` for
//! `Δ = ∏ α_i`, and explicit `l^n`-dimensional representations.

mod rep;

use std::collections::HashMap;
use std::sync::Arc;

pub use rep::{
    azumaya_membership, build_irrep, build_irrep_nilpotent, build_irrep_rank1, build_irrep_rank1_with_root,
    commutant_basis, commutant_dimension, generated_algebra_dimension, intertwiner_basis, random_unit, relation_report,
    verify_alpha_spectrum, CentralCharacter, MatrixRep, SlotData,
};

use crate::check::Report;
use crate::error::{param, Result};
use crate::linalg::Echelon;
use crate::qweyl::{AlgebraSpec, Monomial, Normalization, PBWElement};
use crate::scalars::FieldKind;

fn require_cyclotomic(spec: &AlgebraSpec) -> Result<u32> {
    match (spec.field().kind(), spec.field().l()) {
        (FieldKind::Cyclotomic, Some(l)) => Ok(l),
        _ => param("this operation needs a cyclotomic coefficient field"),
    }
}

fn generators(spec: &Arc<AlgebraSpec>) -> Result<Vec<PBWElement>> {
    let mut out = Vec::with_capacity(2 * spec.n());
    for i in 0..spec.n() {
        out.push(PBWElement::x(spec, i)?);
        out.push(PBWElement::d(spec, i)?);
    }
    Ok(out)
}

/// Whether `u` commutes with every `x_i` and `∂_i`.
pub fn is_central(u: &PBWElement) -> Result<bool> {
    require_cyclotomic(u.spec())?;
    for g in generators(u.spec())? {
        if !u.commutator(&g)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monomials `x^a ∂^b` with every exponent at most `bound`.
fn box_monomials(n: usize, bound: u32) -> Vec<Monomial> {
    let mut out = vec![vec![]];
    for _ in 0..2 * n {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                (0..=bound).map(move |k| {
                    let mut e2 = e.clone();
                    e2.push(k);
                    e2
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|e| Monomial::new(e[..n].to_vec(), e[n..].to_vec()))
        .collect()
}

/// Basis of the elements of `span{x^a ∂^b : a_i, b_i ≤ bound}` that commute
/// with all generators, from the kernel of the exact commutator system.
pub fn centralizer_basis(spec: &Arc<AlgebraSpec>, bound: u32) -> Result<Vec<PBWElement>> {
    require_cyclotomic(spec)?;
    let monos = box_monomials(spec.n(), bound);
    // one equation per (generator, monomial of the commutator)
    let mut equations: HashMap<(usize, Monomial), Vec<(usize, crate::scalars::Scalar)>> = HashMap::new();
    for (col, m) in monos.iter().enumerate() {
        let u = PBWElement::term(spec, m.clone(), spec.field().one());
        for (g_idx, g) in generators(spec)?.iter().enumerate() {
            for (rm, c) in u.commutator(g)?.terms() {
                equations.entry((g_idx, rm.clone())).or_default().push((col, c.clone()));
            }
        }
    }
    let mut ech = Echelon::new(spec.field(), monos.len());
    for (_, row) in equations {
        ech.insert(row);
    }
    Ok(ech
        .kernel()
        .into_iter()
        .map(|v| {
            let mut e = PBWElement::zero(spec);
            for (m, c) in monos.iter().zip(v) {
                e = e.add(&PBWElement::term(spec, m.clone(), c));
            }
            e
        })
        .collect())
}

/// Compares [`centralizer_basis`] with the span of the `l`-center monomials
/// `x^{la} ∂^{lb}` inside the same exponent box.
pub fn verify_center_truncation(spec: &Arc<AlgebraSpec>, bound: u32) -> Result<Report> {
    let l = require_cyclotomic(spec)?;
    let basis = centralizer_basis(spec, bound)?;
    let monos = box_monomials(spec.n(), bound);
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut found = Echelon::new(spec.field(), monos.len());
    let mut all_central = true;
    for e in &basis {
        all_central &= is_central(e)?;
        let mut row: Vec<_> = e.terms().map(|(m, c)| (index[m], c.clone())).collect();
        row.sort_by_key(|(k, _)| *k);
        found.insert(row);
    }
    let mut predicted = Echelon::new(spec.field(), monos.len());
    let mut count = 0;
    for (i, m) in monos.iter().enumerate() {
        if m.a.iter().chain(&m.b).all(|&e| e % l == 0) {
            predicted.insert(vec![(i, spec.field().one())]);
            count += 1;
        }
    }
    let mut report = Report::new();
    report.push("centralizer basis elements are central", all_central, "");
    let same = found.same_span(&predicted);
    report.push(
        format!("centralizer in exponent box {bound} = span of {count} l-center monomials"),
        same,
        if same {
            String::new()
        } else {
            format!("centralizer has dimension {}, expected {count}", found.rank())
        },
    );
    Ok(report)
}

/// Checks `α_i^l = 1 + x_i^l ∂_i^l` for each `i` and `Δ^l = ∏(1 + x_i^l ∂_i^l)`.
pub fn verify_delta_power(spec: &Arc<AlgebraSpec>) -> Result<Report> {
    let l = require_cyclotomic(spec)?;
    if spec.normalization() != Normalization::Rescaled || !spec.is_single_parameter() {
        return param("the power identity needs the rescaled single-parameter algebra");
    }
    let mut report = Report::new();
    let one = PBWElement::one(spec);
    let mut delta = one.clone();
    let mut rhs = one.clone();
    for i in 0..spec.n() {
        let alpha = PBWElement::alpha(spec, i)?;
        let mut a = vec![0; spec.n()];
        let mut b = vec![0; spec.n()];
        a[i] = l;
        b[i] = l;
        let factor = one.add(&PBWElement::monomial(spec, a, b)?);
        let lhs = alpha.pow(l);
        report.push(
            format!("a{}^{l} = 1 + x{0}^{l}*d{0}^{l}", i + 1),
            lhs == factor,
            if lhs == factor {
                String::new()
            } else {
                format!("got {lhs}")
            },
        );
        delta = delta.mul(&alpha)?;
        rhs = rhs.mul(&factor)?;
    }
    let lhs = delta.pow(l);
    report.push(
        format!("Delta^{l} = prod(1 + x_i^{l}*d_i^{l})"),
        lhs == rhs,
        if lhs == rhs {
            String::new()
        } else {
            format!("got {lhs}")
        },
    );
    Ok(report)
}

/// Linear independence of `x^{le+r} ∂^{lf+s}`-type products: for every block
/// `z = x^{le} ∂^{lf}` with `e, f ∈ {0,1}^n`, the products `z · x^r ∂^s`
/// with `0 ≤ r_i, s_i < l` span a space of dimension `l^{2n}`, and all blocks
/// together are independent.
pub fn verify_freeness(spec: &Arc<AlgebraSpec>) -> Result<Report> {
    let l = require_cyclotomic(spec)?;
    let n = spec.n();
    let small = box_monomials(n, l - 1);
    let blocks = box_monomials(n, 1);
    let mut index: HashMap<Monomial, usize> = HashMap::new();
    let mut rows_per_block = Vec::new();
    for blk in &blocks {
        let scale = |e: &Vec<u32>| e.iter().map(|k| k * l).collect::<Vec<_>>();
        let z = PBWElement::monomial(spec, scale(&blk.a), scale(&blk.b))?;
        let mut rows = Vec::new();
        for m in &small {
            let p = z.mul(&PBWElement::term(spec, m.clone(), spec.field().one()))?;
            let mut row: Vec<(usize, crate::scalars::Scalar)> = p
                .terms()
                .map(|(pm, c)| {
                    let len = index.len();
                    (*index.entry(pm.clone()).or_insert(len), c.clone())
                })
                .collect();
            row.sort_by_key(|(k, _)| *k);
            rows.push(row);
        }
        rows_per_block.push(rows);
    }
    let mut report = Report::new();
    let expected = small.len();
    let mut bad_block = None;
    let mut all = Echelon::new(spec.field(), index.len());
    for (blk, rows) in blocks.iter().zip(&rows_per_block) {
        let mut e = Echelon::new(spec.field(), index.len());
        for r in rows {
            e.insert(r.clone());
            all.insert(r.clone());
        }
        if e.rank() != expected && bad_block.is_none() {
            bad_block = Some(format!("block {blk}: rank {}", e.rank()));
        }
    }
    report.push(
        format!("each of {} blocks has rank l^(2n) = {expected}", blocks.len()),
        bad_block.is_none(),
        bad_block.unwrap_or_default(),
    );
    let total = expected * blocks.len();
    report.push(
        format!("all {total} block products independent"),
        all.rank() == total,
        if all.rank() == total {
            String::new()
        } else {
            format!("rank {}", all.rank())
        },
    );
    Ok(report)
}
