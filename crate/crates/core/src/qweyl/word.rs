//! Normal forms by rewriting words in the generators, independent of the
//! monomial multiplication in [`super::PBWElement::mul`].

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AlgebraSpec, Monomial, PBWElement};
use crate::error::Result;
use crate::scalars::Scalar;

/// A generator, zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X(usize),
    D(usize),
}

/// Which out-of-order adjacent pair gets rewritten next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    /// Uniformly random among all out-of-order pairs, seeded.
    Random(u64),
}

fn rank(spec: &AlgebraSpec, l: Letter) -> usize {
    match l {
        Letter::X(i) => i,
        Letter::D(i) => spec.n() + i,
    }
}

/// Rewrites `left right` (assumed out of order) as a list of
/// `(coefficient, replacement)` pairs.
fn rewrite(spec: &AlgebraSpec, left: Letter, right: Letter) -> Vec<(Scalar, Vec<Letter>)> {
    match (left, right) {
        (Letter::X(j), Letter::X(i)) => vec![(spec.q_pow(spec.xx[i][j]), vec![right, left])],
        (Letter::D(j), Letter::D(i)) => vec![(spec.q_pow(spec.dd[i][j]), vec![right, left])],
        (Letter::D(i), Letter::X(j)) if i != j => vec![(spec.q_pow(spec.dx[i][j]), vec![right, left])],
        (Letter::D(i), Letter::X(_)) => vec![
            (spec.q_pow(spec.dx[i][i]), vec![right, left]),
            (spec.shift[i].clone(), vec![]),
        ],
        (Letter::X(_), Letter::D(_)) => unreachable!("x before d is already ordered"),
    }
}

/// Expands `coeff · w_1^{e_1} ⋯ w_k^{e_k}` into PBW normal form by repeated
/// application of the defining relations.
pub fn normal_form(
    spec: &Arc<AlgebraSpec>,
    word: &[(Letter, u32)],
    coeff: &Scalar,
    strategy: Strategy,
) -> Result<PBWElement> {
    let mut letters = Vec::new();
    for &(l, e) in word {
        let (Letter::X(i) | Letter::D(i)) = l;
        spec.check_index(i)?;
        letters.extend(std::iter::repeat_n(l, e as usize));
    }
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut pending: BTreeMap<Vec<Letter>, Scalar> = BTreeMap::new();
    pending.insert(letters, coeff.clone());
    let mut out = PBWElement::zero(spec);
    while let Some((w, c)) = pending.pop_last() {
        if c.is_zero() {
            continue;
        }
        let inversions: Vec<usize> = (0..w.len().saturating_sub(1))
            .filter(|&p| rank(spec, w[p]) > rank(spec, w[p + 1]))
            .collect();
        let Some(&first) = inversions.first() else {
            out.add_term(to_monomial(spec.n(), &w), c);
            continue;
        };
        let p = match strategy {
            Strategy::Leftmost => first,
            Strategy::Rightmost => *inversions.last().unwrap(),
            Strategy::Random(_) => inversions[rng.as_mut().unwrap().gen_range(0..inversions.len())],
        };
        for (k, rep) in rewrite(spec, w[p], w[p + 1]) {
            let mut nw = w[..p].to_vec();
            nw.extend(rep);
            nw.extend_from_slice(&w[p + 2..]);
            let add = &c * &k;
            let entry = pending.entry(nw).or_insert_with(|| spec.field().zero());
            *entry = &*entry + &add;
        }
    }
    Ok(out)
}

fn to_monomial(n: usize, w: &[Letter]) -> Monomial {
    let mut m = Monomial::one(n);
    for l in w {
        match *l {
            Letter::X(i) => m.a[i] += 1,
            Letter::D(i) => m.b[i] += 1,
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qweyl::Normalization;
    use crate::scalars::FieldDescriptor;

    #[test]
    fn strategies_agree_with_engine() {
        let spec = AlgebraSpec::new(
            vec![vec![1, 2], vec![-2, -1]],
            Normalization::Rescaled,
            FieldDescriptor::rational_function(),
        )
        .unwrap();
        let word = [
            (Letter::D(1), 2),
            (Letter::X(0), 1),
            (Letter::D(0), 1),
            (Letter::X(1), 2),
            (Letter::X(0), 1),
        ];
        let one = spec.field().one();
        let l = normal_form(&spec, &word, &one, Strategy::Leftmost).unwrap();
        let r = normal_form(&spec, &word, &one, Strategy::Rightmost).unwrap();
        let z = normal_form(&spec, &word, &one, Strategy::Random(3)).unwrap();
        assert_eq!(l, r);
        assert_eq!(l, z);
        let mut e = PBWElement::one(&spec);
        for &(letter, k) in &word {
            let g = match letter {
                Letter::X(i) => PBWElement::x(&spec, i).unwrap(),
                Letter::D(i) => PBWElement::d(&spec, i).unwrap(),
            };
            e = e.mul(&g.pow(k)).unwrap();
        }
        assert_eq!(l, e);
    }

    #[test]
    fn unknown_index_is_rejected() {
        let spec =
            AlgebraSpec::single_parameter(1, Normalization::Rescaled, FieldDescriptor::rational_function()).unwrap();
        let one = spec.field().one();
        assert!(normal_form(&spec, &[(Letter::X(3), 1)], &one, Strategy::Leftmost).is_err());
    }
}
