use std::sync::Arc;

use super::{normal_form, AlgebraSpec, Grading, Letter, Monomial, Normalization, PBWElement, Strategy};
use crate::check::Report;
use crate::error::{param, Result};
use crate::linalg::Echelon;
use crate::scalars::Scalar;

/// Checks the power and Euler-operator identities for every generator pair
/// and every exponent `1..=nmax`:
///
/// * `∂_i x_i^m = t^m x_i^m ∂_i + c[m]_t x_i^{m-1}`
/// * `∂_i^m x_i = t^m x_i ∂_i^m + c[m]_t ∂_i^{m-1}`
/// * `α_i x_j = q_ii^{δ_ij} x_j α_i` and `α_i ∂_j = q_ii^{-δ_ij} ∂_j α_i`
///
/// where `∂_i x_i = t x_i ∂_i + c`. In the rescaled normalization
/// `c[m]_t = q_ii^m - 1`. The Euler identities are only checked there.
pub fn verify_power_identities(spec: &Arc<AlgebraSpec>, nmax: u32) -> Result<Report> {
    if nmax == 0 {
        return param("nmax must be at least 1");
    }
    let mut report = Report::new();
    let n = spec.n();
    let f = spec.field();
    for i in 0..n {
        let x = PBWElement::x(spec, i)?;
        let d = PBWElement::d(spec, i)?;
        let t = spec.dx[i][i];
        let c = &spec.shift[i];
        for m in 1..=nmax {
            let qint = (0..m as i64).fold(f.zero(), |acc, e| &acc + &spec.q_pow(t * e));
            let low: Scalar = c * &qint;
            let lhs = d.mul(&x.pow(m))?;
            let rhs = x
                .pow(m)
                .mul(&d)?
                .scale(&spec.q_pow(t * m as i64))
                .add(&x.pow(m - 1).scale(&low));
            report.push(
                format!("d{0}*x{0}^{m}", i + 1),
                lhs == rhs,
                if lhs == rhs {
                    String::new()
                } else {
                    format!("{lhs} != {rhs}")
                },
            );
            let lhs = d.pow(m).mul(&x)?;
            let rhs = x
                .mul(&d.pow(m))?
                .scale(&spec.q_pow(t * m as i64))
                .add(&d.pow(m - 1).scale(&low));
            report.push(
                format!("d{0}^{m}*x{0}", i + 1),
                lhs == rhs,
                if lhs == rhs {
                    String::new()
                } else {
                    format!("{lhs} != {rhs}")
                },
            );
        }
    }
    if spec.normalization() == Normalization::Rescaled {
        for i in 0..n {
            let alpha = PBWElement::alpha(spec, i)?;
            for j in 0..n {
                let delta = i64::from(i == j);
                for (name, g, sign) in [("x", PBWElement::x(spec, j)?, 1), ("d", PBWElement::d(spec, j)?, -1)] {
                    let lhs = alpha.mul(&g)?;
                    let rhs = g.mul(&alpha)?.scale(&spec.q_pow(sign * delta * spec.m[i][i]));
                    report.push(
                        format!("a{}*{name}{}", i + 1, j + 1),
                        lhs == rhs,
                        if lhs == rhs {
                            String::new()
                        } else {
                            format!("{lhs} != {rhs}")
                        },
                    );
                }
            }
        }
        // the Euler operators commute with each other
        for i in 0..n {
            for j in i + 1..n {
                let (ai, aj) = (PBWElement::alpha(spec, i)?, PBWElement::alpha(spec, j)?);
                let ok = ai.commutator(&aj)?.is_zero();
                report.push(format!("a{}*a{} = a{}*a{}", i + 1, j + 1, j + 1, i + 1), ok, "");
            }
        }
    }
    Ok(report)
}

/// Rank of the span of all words of length at most `degree` in the `2n`
/// generators, each brought to normal form by rewriting. For a flat
/// deformation this equals the number of commutative monomials of degree at
/// most `degree` in `2n` variables, `C(2n + degree, degree)`.
pub fn flatness_rank(spec: &Arc<AlgebraSpec>, degree: u32) -> Result<(usize, usize)> {
    let n = spec.n();
    let letters: Vec<Letter> = (0..n).map(Letter::X).chain((0..n).map(Letter::D)).collect();
    let mut index: std::collections::HashMap<Monomial, usize> = Default::default();
    let mut words: Vec<Vec<Letter>> = vec![vec![]];
    let mut all = vec![vec![]];
    for _ in 0..degree {
        let mut next = Vec::new();
        for w in &words {
            for &l in &letters {
                let mut w2 = w.clone();
                w2.push(l);
                next.push(w2);
            }
        }
        all.extend(next.iter().cloned());
        words = next;
    }
    let one = spec.field().one();
    let mut rows = Vec::new();
    for w in &all {
        let word: Vec<(Letter, u32)> = w.iter().map(|&l| (l, 1)).collect();
        let e = normal_form(spec, &word, &one, Strategy::Leftmost)?;
        let mut row = Vec::new();
        for (m, c) in e.terms() {
            let len = index.len();
            let k = *index.entry(m.clone()).or_insert(len);
            row.push((k, c.clone()));
        }
        row.sort_by_key(|(k, _)| *k);
        rows.push(row);
    }
    let mut ech = Echelon::new(spec.field(), index.len());
    for r in rows {
        ech.insert(r);
    }
    Ok((
        ech.rank(),
        binomial(2 * n as u64 + degree as u64, degree as u64) as usize,
    ))
}

/// Seeded soundness checks of the multiplication: `(uv)w = u(vw)` on random
/// triples, agreement of every rewriting order with [`PBWElement::mul`] on
/// random words, and additivity of the `ℤ^n` grading on random monomials.
/// `degree` bounds the total degree of each random factor or word.
pub fn verify_engine(spec: &Arc<AlgebraSpec>, cases: usize, degree: u32, seed: u64) -> Result<Report> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = spec.n();
    let one = spec.field().one();
    let mut report = Report::new();
    let mut bad_assoc = None;
    for k in 0..cases {
        let u = PBWElement::random(spec, &mut rng, degree, 3);
        let v = PBWElement::random(spec, &mut rng, degree, 3);
        let w = PBWElement::random(spec, &mut rng, degree, 3);
        if bad_assoc.is_none() && u.mul(&v)?.mul(&w)? != u.mul(&v.mul(&w)?)? {
            bad_assoc = Some(format!("case {k}: u = {u}, v = {v}, w = {w}"));
        }
    }
    report.push(
        format!("associativity on {cases} random triples"),
        bad_assoc.is_none(),
        bad_assoc.unwrap_or_default(),
    );
    let mut bad_confluence = None;
    for k in 0..cases {
        let len = rng.gen_range(0..=degree);
        let word: Vec<(Letter, u32)> = (0..len)
            .map(|_| {
                let i = rng.gen_range(0..n);
                (if rng.gen_bool(0.5) { Letter::X(i) } else { Letter::D(i) }, 1)
            })
            .collect();
        let mut product = PBWElement::one(spec);
        for &(l, _) in &word {
            let g = match l {
                Letter::X(i) => PBWElement::x(spec, i)?,
                Letter::D(i) => PBWElement::d(spec, i)?,
            };
            product = product.mul(&g)?;
        }
        let strategies = [
            Strategy::Leftmost,
            Strategy::Rightmost,
            Strategy::Random(seed ^ k as u64),
        ];
        for s in strategies {
            if bad_confluence.is_none() && normal_form(spec, &word, &one, s)? != product {
                bad_confluence = Some(format!("case {k}: word {word:?} under {s:?}"));
            }
        }
    }
    report.push(
        format!("rewriting orders agree with the product on {cases} random words"),
        bad_confluence.is_none(),
        bad_confluence.unwrap_or_default(),
    );
    let mut bad_grading = None;
    for k in 0..cases {
        let u = PBWElement::random(spec, &mut rng, degree, 1);
        let v = PBWElement::random(spec, &mut rng, degree, 1);
        let (Grading::Homogeneous(gu), Grading::Homogeneous(gv)) = (u.grading(), v.grading()) else {
            unreachable!("single terms are homogeneous");
        };
        let uv = u.mul(&v)?;
        let expected: Vec<i64> = gu.iter().zip(&gv).map(|(a, b)| a + b).collect();
        let ok = uv.is_zero() || uv.grading() == Grading::Homogeneous(expected);
        if bad_grading.is_none() && !ok {
            bad_grading = Some(format!("case {k}: {u} * {v} = {uv}"));
        }
    }
    report.push(
        format!("grading is additive on {cases} random monomial pairs"),
        bad_grading.is_none(),
        bad_grading.unwrap_or_default(),
    );
    Ok(report)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FieldDescriptor;

    #[test]
    fn engine_checks_pass() {
        let spec =
            AlgebraSpec::single_parameter(2, Normalization::Rescaled, FieldDescriptor::rational_function()).unwrap();
        let r = verify_engine(&spec, 20, 3, 7).unwrap();
        assert!(r.all_passed(), "{r}");
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn single_parameter_rank_one() {
        let s =
            AlgebraSpec::single_parameter(1, Normalization::Rescaled, FieldDescriptor::rational_function()).unwrap();
        let r = verify_power_identities(&s, 6).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn unscaled_power_identities() {
        let s =
            AlgebraSpec::single_parameter(2, Normalization::Unscaled, FieldDescriptor::rational_function()).unwrap();
        assert!(verify_power_identities(&s, 4).unwrap().all_passed());
    }

    #[test]
    fn flat_in_low_degree() {
        let s =
            AlgebraSpec::single_parameter(2, Normalization::Rescaled, FieldDescriptor::rational_function()).unwrap();
        let (rank, expected) = flatness_rank(&s, 3).unwrap();
        assert_eq!(rank, expected);
        assert_eq!(expected, 35);
    }
}
