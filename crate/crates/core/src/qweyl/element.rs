use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use super::{AlgebraSpec, Monomial};
use crate::error::{param, Result};
use crate::scalars::Scalar;

/// A finite linear combination of ordered monomials. Zero coefficients are
/// never stored.
#[derive(Clone, Debug)]
pub struct PBWElement {
    spec: Arc<AlgebraSpec>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl PartialEq for PBWElement {
    fn eq(&self, other: &Self) -> bool {
        same_spec(&self.spec, &other.spec) && self.terms == other.terms
    }
}

impl Eq for PBWElement {}

pub(crate) fn same_spec(a: &Arc<AlgebraSpec>, b: &Arc<AlgebraSpec>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Result of [`PBWElement::grading`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grading {
    Homogeneous(Vec<i64>),
    Inhomogeneous,
}

impl PBWElement {
    pub fn zero(spec: &Arc<AlgebraSpec>) -> Self {
        PBWElement {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(spec: &Arc<AlgebraSpec>) -> Self {
        Self::scalar(spec, spec.field().one())
    }

    pub fn scalar(spec: &Arc<AlgebraSpec>, c: Scalar) -> Self {
        Self::term(spec, Monomial::one(spec.n()), c)
    }

    pub fn term(spec: &Arc<AlgebraSpec>, m: Monomial, c: Scalar) -> Self {
        let mut e = Self::zero(spec);
        if !c.is_zero() {
            e.terms.insert(m, c);
        }
        e
    }

    pub fn monomial(spec: &Arc<AlgebraSpec>, a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        if a.len() != spec.n() || b.len() != spec.n() {
            return param("exponent vectors must have length n");
        }
        Ok(Self::term(spec, Monomial::new(a, b), spec.field().one()))
    }

    /// The generator `x_i` (zero-based).
    pub fn x(spec: &Arc<AlgebraSpec>, i: usize) -> Result<Self> {
        spec.check_index(i)?;
        Ok(Self::term(spec, Monomial::x(spec.n(), i), spec.field().one()))
    }

    /// The generator `∂_i` (zero-based).
    pub fn d(spec: &Arc<AlgebraSpec>, i: usize) -> Result<Self> {
        spec.check_index(i)?;
        Ok(Self::term(spec, Monomial::d(spec.n(), i), spec.field().one()))
    }

    /// The Euler operator `α_i = 1 + x_i ∂_i`.
    pub fn alpha(spec: &Arc<AlgebraSpec>, i: usize) -> Result<Self> {
        spec.check_index(i)?;
        let mut m = Monomial::one(spec.n());
        m.a[i] = 1;
        m.b[i] = 1;
        Ok(Self::one(spec).add(&Self::term(spec, m, spec.field().one())))
    }

    /// `α_1^{c_1} ⋯ α_n^{c_n}` for nonnegative exponents.
    pub fn alpha_power(spec: &Arc<AlgebraSpec>, c: &[u32]) -> Result<Self> {
        let mut acc = Self::one(spec);
        for (i, &e) in c.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&Self::alpha(spec, i)?.pow(e))?;
            }
        }
        Ok(acc)
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.spec.field().zero())
    }

    /// `Some(c)` when the element is the constant `c`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(self.spec.field().zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Largest total degree of a term; zero for the zero element.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Common value of `a - b` over all terms. The zero element is reported
    /// as homogeneous of degree zero.
    pub fn grading(&self) -> Grading {
        let mut it = self.terms.keys().map(Monomial::grading);
        let Some(first) = it.next() else {
            return Grading::Homogeneous(vec![0; self.spec.n()]);
        };
        if it.all(|g| g == first) {
            Grading::Homogeneous(first)
        } else {
            Grading::Inhomogeneous
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_spec(&self, other: &Self) -> Result<()> {
        if same_spec(&self.spec, &other.spec) {
            Ok(())
        } else {
            param("elements belong to different algebras")
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_spec(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Panics on mismatched specs; see [`PBWElement::try_add`].
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("spec mismatch")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coefficients(|_, c| -c)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(&self.spec);
        }
        self.map_coefficients(|_, c| c * s)
    }

    pub(crate) fn map_coefficients(&self, f: impl Fn(&Monomial, &Scalar) -> Scalar) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), f(m, c)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        PBWElement {
            spec: self.spec.clone(),
            terms,
        }
    }

    /// Product in normal form; errors when the algebras differ.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_spec(other)?;
        let mut out = Self::zero(&self.spec);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let c = c1 * c2;
                for (m, k) in self.spec.mul_monomials(m1, m2) {
                    out.add_term(m, &k * &c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.spec);
        for _ in 0..e {
            acc = acc.mul(self).expect("same spec");
        }
        acc
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(other)?.sub(&other.mul(self)?))
    }

    /// Random element with up to `terms` terms of total degree at most
    /// `degree`, coefficients small integers times powers of `q`.
    pub fn random(spec: &Arc<AlgebraSpec>, rng: &mut impl Rng, degree: u32, terms: usize) -> Self {
        let n = spec.n();
        let mut out = Self::zero(spec);
        for _ in 0..terms {
            let mut m = Monomial::one(n);
            let target = rng.gen_range(0..=degree);
            for _ in 0..target {
                let slot = rng.gen_range(0..2 * n);
                if slot < n {
                    m.a[slot] += 1;
                } else {
                    m.b[slot - n] += 1;
                }
            }
            let mut c = spec.field().from_int(rng.gen_range(-3..=3));
            if spec.field().has_q() {
                c = &c * &spec.q_pow(rng.gen_range(-2..=2));
            }
            out.add_term(m, c);
        }
        out
    }
}

/// `s` with the sign pulled out when it is a simple negative literal.
pub(crate) fn split_sign(s: &str, compound: bool) -> (bool, String) {
    if !compound {
        if let Some(rest) = s.strip_prefix('-') {
            return (true, rest.to_string());
        }
    }
    (false, s.to_string())
}

/// Writes `Σ c·m` in descending monomial order, e.g. `q*x1*d1 + (q-1)`.
pub(crate) fn fmt_terms<'a, M: fmt::Display + 'a>(
    terms: impl Iterator<Item = (&'a M, &'a Scalar)>,
    is_unit: impl Fn(&M) -> bool,
) -> String {
    let mut out = String::new();
    for (m, c) in terms {
        let (neg, body) = split_sign(&c.to_string(), c.is_compound());
        let body = if c.is_compound() { format!("({body})") } else { body };
        let term = if is_unit(m) {
            body
        } else if body == "1" {
            m.to_string()
        } else {
            format!("{body}*{m}")
        };
        match (out.is_empty(), neg) {
            (true, true) => out.push_str(&format!("-{term}")),
            (true, false) => out.push_str(&term),
            (false, true) => out.push_str(&format!(" - {term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for PBWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_terms(self.terms.iter().rev(), Monomial::is_one))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qweyl::Normalization;
    use crate::scalars::FieldDescriptor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rescaled(n: usize) -> Arc<AlgebraSpec> {
        AlgebraSpec::single_parameter(n, Normalization::Rescaled, FieldDescriptor::rational_function()).unwrap()
    }

    #[test]
    fn d_times_x_rescaled() {
        let s = rescaled(1);
        let e = PBWElement::d(&s, 0)
            .unwrap()
            .mul(&PBWElement::x(&s, 0).unwrap())
            .unwrap();
        assert_eq!(e.to_string(), "q*x1*d1 + (q-1)");
    }

    #[test]
    fn d_times_x_squared() {
        let s = rescaled(1);
        let x = PBWElement::x(&s, 0).unwrap();
        let e = PBWElement::d(&s, 0).unwrap().mul(&x.pow(2)).unwrap();
        assert_eq!(e.to_string(), "q^2*x1^2*d1 + (q^2-1)*x1");
    }

    #[test]
    fn euler_square() {
        let s = rescaled(1);
        let m = PBWElement::monomial(&s, vec![1], vec![1]).unwrap();
        assert_eq!(m.mul(&m).unwrap().to_string(), "q*x1^2*d1^2 + (q-1)*x1*d1");
    }

    #[test]
    fn unscaled_relation() {
        let s =
            AlgebraSpec::single_parameter(2, Normalization::Unscaled, FieldDescriptor::rational_function()).unwrap();
        let d1 = PBWElement::d(&s, 0).unwrap();
        assert_eq!(
            d1.mul(&PBWElement::x(&s, 0).unwrap()).unwrap().to_string(),
            "1/q*x1*d1 + 1"
        );
        assert_eq!(d1.mul(&PBWElement::x(&s, 1).unwrap()).unwrap().to_string(), "1/q*x2*d1");
    }

    #[test]
    fn grading_examples() {
        let s = rescaled(2);
        let e = PBWElement::monomial(&s, vec![1, 0], vec![0, 1]).unwrap();
        assert_eq!(e.grading(), Grading::Homogeneous(vec![1, -1]));
        let f = PBWElement::x(&s, 0).unwrap().add(&PBWElement::d(&s, 0).unwrap());
        assert_eq!(f.grading(), Grading::Inhomogeneous);
        assert_eq!(PBWElement::one(&s).grading(), Grading::Homogeneous(vec![0, 0]));
    }

    #[test]
    fn associativity_small_random() {
        let s = AlgebraSpec::new(
            vec![vec![2, -1, 1], vec![1, -1, 2], vec![-1, -2, 0]],
            Normalization::Rescaled,
            FieldDescriptor::rational_function(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let u = PBWElement::random(&s, &mut rng, 3, 2);
            let v = PBWElement::random(&s, &mut rng, 3, 2);
            let w = PBWElement::random(&s, &mut rng, 3, 2);
            let l = u.mul(&v).unwrap().mul(&w).unwrap();
            let r = u.mul(&v.mul(&w).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }

    #[test]
    fn index_out_of_range() {
        let s = rescaled(1);
        assert!(PBWElement::x(&s, 1).is_err());
    }
}
