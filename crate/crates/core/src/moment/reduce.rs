use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use super::{ColumnHnf, ReductionDatum, TorusData};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::check::Report;
use crate::error::{param, Result};
use crate::qweyl::element::fmt_terms;
use crate::qweyl::{AlgebraSpec, LocalizedElement, Monomial, Normalization, PBWElement};
use crate::scalars::Scalar;

/// `x^a ∂^b α^c` with `min(a_i, b_i) = 0` and `c ∈ ℤ^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalMonomial {
    pub mono: Monomial,
    pub alpha: Vec<i64>,
}

impl CanonicalMonomial {
    pub fn is_one(&self) -> bool {
        self.mono.is_one() && self.alpha.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for CanonicalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.mono.is_one() {
            parts.push(self.mono.to_string());
        }
        for (i, &c) in self.alpha.iter().enumerate() {
            match c {
                0 => {}
                1 => parts.push(format!("a{}", i + 1)),
                _ => parts.push(format!("a{}^{c}", i + 1)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A linear combination of canonical monomials.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CanonicalElement {
    pub terms: BTreeMap<CanonicalMonomial, Scalar>,
}

impl CanonicalElement {
    pub fn add_term(&mut self, m: CanonicalMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::default();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    /// The element `Σ c · x^a ∂^b α^c` of the localized algebra.
    pub fn to_localized(&self, spec: &Arc<AlgebraSpec>) -> Result<LocalizedElement> {
        let mut acc = LocalizedElement::from_pbw(PBWElement::zero(spec));
        for (m, c) in &self.terms {
            let pos: Vec<u32> = m.alpha.iter().map(|&e| e.max(0) as u32).collect();
            let neg: Vec<u32> = m.alpha.iter().map(|&e| (-e).max(0) as u32).collect();
            let num = PBWElement::term(spec, m.mono.clone(), c.clone()).mul(&PBWElement::alpha_power(spec, &pos)?)?;
            acc = acc.add(&LocalizedElement::new(num, neg)?)?;
        }
        Ok(acc)
    }

    /// Whether every term has grading in `ker A^t`.
    pub fn is_invariant(&self, torus: &TorusData) -> bool {
        self.terms
            .keys()
            .all(|m| torus.apply_transpose(&m.mono.grading()).iter().all(|&v| v == 0))
    }
}

impl fmt::Display for CanonicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_terms(self.terms.iter().rev(), CanonicalMonomial::is_one))
    }
}

/// Which mixed pair `x_i ∂_i` is traded for `α_i − 1` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ElimOrder {
    /// all mixed pairs at once, via `x^{a-m} ∂^{b-m} α^m`
    Simultaneous,
    FirstIndex,
    LastIndex,
}

type Expansion = Arc<Vec<(Monomial, Vec<i64>, Scalar)>>;

/// Normal forms modulo the left ideal generated by `Φ(u_j) − η_j`, with
/// memoized expansions of mixed monomials.
pub struct Reducer {
    spec: Arc<AlgebraSpec>,
    datum: ReductionDatum,
    hnf: ColumnHnf,
    order: ElimOrder,
    cache: Mutex<HashMap<Monomial, Expansion>>,
}

impl Reducer {
    pub fn new(spec: &Arc<AlgebraSpec>, datum: &ReductionDatum) -> Result<Self> {
        Self::with_order(spec, datum, ElimOrder::Simultaneous)
    }

    pub fn with_order(spec: &Arc<AlgebraSpec>, datum: &ReductionDatum, order: ElimOrder) -> Result<Self> {
        if spec.normalization() != Normalization::Rescaled {
            return param("moment reduction needs the rescaled normalization");
        }
        if spec.n() != datum.torus.n() {
            return param("torus rank must equal the number of variables");
        }
        if datum.eta[0].field() != spec.field() {
            return param("eta must lie in the algebra's coefficient field");
        }
        Ok(Reducer {
            spec: spec.clone(),
            hnf: ColumnHnf::new(datum.torus.a()),
            datum: datum.clone(),
            order,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    pub fn datum(&self) -> &ReductionDatum {
        &self.datum
    }

    /// `x^a ∂^b` rewritten exactly as `Σ c x^{a'} ∂^{b'} α^{c'}` with no
    /// mixed pairs and `c' ≥ 0`.
    fn expand(&self, m: &Monomial) -> Result<Expansion> {
        if let Some(hit) = self.cache.lock().unwrap().get(m) {
            return Ok(hit.clone());
        }
        let n = self.spec.n();
        let mixed: Vec<u32> = m.a.iter().zip(&m.b).map(|(x, y)| *x.min(y)).collect();
        let out: Expansion = if mixed.iter().all(|&k| k == 0) {
            Arc::new(vec![(m.clone(), vec![0; n], self.spec.field().one())])
        } else {
            let mut step = vec![0u32; n];
            match self.order {
                ElimOrder::Simultaneous => step = mixed,
                ElimOrder::FirstIndex => step[mixed.iter().position(|&k| k > 0).unwrap()] = 1,
                ElimOrder::LastIndex => step[mixed.iter().rposition(|&k| k > 0).unwrap()] = 1,
            }
            let prefix = Monomial::new(
                m.a.iter().zip(&step).map(|(x, s)| x - s).collect(),
                m.b.iter().zip(&step).map(|(x, s)| x - s).collect(),
            );
            // prefix · α^step = lead · m + lower-degree terms
            let product = PBWElement::term(&self.spec, prefix.clone(), self.spec.field().one())
                .mul(&PBWElement::alpha_power(&self.spec, &step)?)?;
            let lead = product.coefficient(m);
            let lead_inv = lead.inv()?;
            let mut acc: BTreeMap<(Monomial, Vec<i64>), Scalar> = BTreeMap::new();
            let mut push = |mono: &Monomial, alpha: Vec<i64>, c: Scalar| {
                let e = acc.entry((mono.clone(), alpha)).or_insert_with(|| c.field().zero());
                *e = &*e + &c;
            };
            for (pm, pa, pc) in self.expand(&prefix)?.iter() {
                let alpha = pa.iter().zip(&step).map(|(x, s)| x + *s as i64).collect();
                push(pm, alpha, pc * &lead_inv);
            }
            for (lm, lc) in product.terms() {
                if lm == m {
                    continue;
                }
                let scale = -(lc * &lead_inv);
                for (em, ea, ec) in self.expand(lm)?.iter() {
                    push(em, ea.clone(), ec * &scale);
                }
            }
            Arc::new(
                acc.into_iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|((m, a), c)| (m, a, c))
                    .collect(),
            )
        };
        self.cache.lock().unwrap().insert(m.clone(), out.clone());
        Ok(out)
    }

    /// Canonical representative of `u` in `D° / D°·Φ(I_η)`.
    pub fn reduce(&self, u: &LocalizedElement) -> Result<CanonicalElement> {
        if u.spec().n() != self.spec.n() || u.spec().normalization() != self.spec.normalization() {
            return param("element does not belong to the reducer's algebra");
        }
        let k = u.denominator();
        let mut out = CanonicalElement::default();
        for (m, c) in u.numerator().terms() {
            for (em, ea, ec) in self.expand(m)?.iter() {
                let alpha: Vec<i64> = ea.iter().zip(k).map(|(x, y)| x - *y as i64).collect();
                let (rep, t) = self.hnf.reduce(&alpha);
                let coef = &(c * ec) * &self.datum.eta_power(&t)?;
                out.add_term(
                    CanonicalMonomial {
                        mono: em.clone(),
                        alpha: rep,
                    },
                    coef,
                );
            }
        }
        Ok(out)
    }

    pub fn reduce_canonical(&self, u: &CanonicalElement) -> Result<CanonicalElement> {
        self.reduce(&u.to_localized(&self.spec)?)
    }

    /// Product of two invariant representatives, reduced again.
    pub fn product(&self, u: &CanonicalElement, v: &CanonicalElement) -> Result<CanonicalElement> {
        let diag: Vec<i64> = (0..self.spec.n()).map(|i| self.spec.m()[i][i]).collect();
        if diag.windows(2).any(|w| w[0] != w[1]) {
            return param("the reduced product needs equal diagonal entries m_ii");
        }
        if !u.is_invariant(&self.datum.torus) || !v.is_invariant(&self.datum.torus) {
            return param("reduced_product needs invariant operands (grading in ker A^t)");
        }
        let p = u.to_localized(&self.spec)?.mul(&v.to_localized(&self.spec)?)?;
        self.reduce(&p)
    }
}

/// [`Reducer::reduce`] with a one-off reducer.
pub fn moment_ideal_reduce(u: &LocalizedElement, datum: &ReductionDatum) -> Result<CanonicalElement> {
    Reducer::new(u.spec(), datum)?.reduce(u)
}

/// [`Reducer::product`] with a one-off reducer.
pub fn reduced_product(
    spec: &Arc<AlgebraSpec>,
    u: &CanonicalElement,
    v: &CanonicalElement,
    datum: &ReductionDatum,
) -> Result<CanonicalElement> {
    Reducer::new(spec, datum)?.product(u, v)
}

/// Seeded checks of the reduction map and the reduced product: reducing twice
/// changes nothing, reduction is linear, and the product of invariant
/// representatives is associative. Random inputs have total degree at most
/// `degree`; half of them carry an `α^{-1}` denominator.
pub fn verify_reduction_algebra(reducer: &Reducer, cases: usize, degree: u32, seed: u64) -> Result<Report> {
    let spec = reducer.spec().clone();
    let n = spec.n();
    let f = spec.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_localized = |rng: &mut ChaCha8Rng| -> Result<LocalizedElement> {
        let u = LocalizedElement::from_pbw(PBWElement::random(&spec, rng, degree, 3));
        if rng.gen_bool(0.5) {
            let mut k = vec![0; n];
            k[rng.gen_range(0..n)] = 1;
            u.mul(&LocalizedElement::alpha_inverse(&spec, k)?)
        } else {
            Ok(u)
        }
    };
    let mut bad_idem = None;
    let mut bad_linear = None;
    for k in 0..cases {
        let u = random_localized(&mut rng)?;
        let v = random_localized(&mut rng)?;
        let c = f.from_int(rng.gen_range(-3..=3));
        let (ru, rv) = (reducer.reduce(&u)?, reducer.reduce(&v)?);
        if bad_idem.is_none() && reducer.reduce_canonical(&ru)? != ru {
            bad_idem = Some(format!("case {k}: {u}"));
        }
        let lhs = reducer.reduce(&u.scale(&c).add(&v)?)?;
        if bad_linear.is_none() && lhs != ru.scale(&c).add(&rv) {
            bad_linear = Some(format!("case {k}: {c} * ({u}) + ({v})"));
        }
    }
    let mut report = Report::new();
    report.push(
        format!("reduction is idempotent on {cases} random elements"),
        bad_idem.is_none(),
        bad_idem.unwrap_or_default(),
    );
    report.push(
        format!("reduction is linear on {cases} random pairs"),
        bad_linear.is_none(),
        bad_linear.unwrap_or_default(),
    );
    let pool = invariant_monomials(&reducer.datum().torus, degree);
    let random_invariant = |rng: &mut ChaCha8Rng| {
        let mut e = CanonicalElement::default();
        for _ in 0..2 {
            let m = pool[rng.gen_range(0..pool.len())].clone();
            e.add_term(m, f.from_int(rng.gen_range(1..=3)));
        }
        e
    };
    let mut bad_assoc = None;
    for k in 0..cases {
        let (u, v, w) = (
            random_invariant(&mut rng),
            random_invariant(&mut rng),
            random_invariant(&mut rng),
        );
        let lhs = reducer.product(&reducer.product(&u, &v)?, &w)?;
        let rhs = reducer.product(&u, &reducer.product(&v, &w)?)?;
        if bad_assoc.is_none() && lhs != rhs {
            bad_assoc = Some(format!("case {k}: ({u}) ({v}) ({w})"));
        }
    }
    report.push(
        format!("reduced product is associative on {cases} invariant triples"),
        bad_assoc.is_none(),
        bad_assoc.unwrap_or_default(),
    );
    Ok(report)
}

/// Canonical monomials `x^a ∂^b α^c` with `a − b ∈ ker A^t` and
/// `|a| + |b| + 2|c|_1 ≤ degree_bound`, with `c` reduced modulo the column
/// lattice of `A` (so distinct entries are distinct in the quotient).
pub fn invariant_monomials(torus: &TorusData, degree_bound: u32) -> Vec<CanonicalMonomial> {
    let n = torus.n();
    let hnf = ColumnHnf::new(torus.a());
    let mut out = BTreeSet::new();
    for e in crate::braided_hopf::exponents_up_to(2 * n, degree_bound) {
        let (a, b) = (e[..n].to_vec(), e[n..].to_vec());
        if a.iter().zip(&b).any(|(x, y)| *x > 0 && *y > 0) {
            continue;
        }
        let mono = Monomial::new(a, b);
        if torus.apply_transpose(&mono.grading()).iter().any(|&v| v != 0) {
            continue;
        }
        let rest = (degree_bound - mono.total_degree()) / 2;
        for c in signed_vectors(n, rest) {
            out.insert(CanonicalMonomial {
                mono: mono.clone(),
                alpha: hnf.reduce(&c).0,
            });
        }
    }
    out.into_iter().collect()
}

/// Integer vectors of length `n` with `|c|_1 ≤ bound`.
fn signed_vectors(n: usize, bound: u32) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for v in &out {
            let used: i64 = v.iter().map(|x: &i64| x.abs()).sum();
            let room = bound as i64 - used;
            for k in -room..=room {
                let mut v2 = v.clone();
                v2.push(k);
                next.push(v2);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_element;
    use crate::scalars::FieldDescriptor;

    fn setup(n: usize, a: Vec<Vec<i64>>, eta: &[&str]) -> (Arc<AlgebraSpec>, ReductionDatum) {
        let f = FieldDescriptor::rational_function();
        let spec = AlgebraSpec::single_parameter(n, Normalization::Rescaled, f.clone()).unwrap();
        let eta = eta.iter().map(|s| crate::expr::parse_scalar(s, &f).unwrap()).collect();
        (
            spec,
            ReductionDatum::new(TorusData::new(a).unwrap(), eta, None).unwrap(),
        )
    }

    fn reduce(src: &str, spec: &Arc<AlgebraSpec>, datum: &ReductionDatum) -> String {
        moment_ideal_reduce(&parse_element(src, spec).unwrap(), datum)
            .unwrap()
            .to_string()
    }

    #[test]
    fn seeded_algebra_checks() {
        let (spec, datum) = setup(2, vec![vec![1], vec![1]], &["q^2"]);
        let r = verify_reduction_algebra(&Reducer::new(&spec, &datum).unwrap(), 10, 3, 5).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn rank_one_values() {
        let (spec, datum) = setup(1, vec![vec![1]], &["q^3+2"]);
        let eta = datum.eta[0].clone();
        let one = eta.field().one();
        let q = eta.field().q().unwrap();
        let r = moment_ideal_reduce(&parse_element("x1*d1", &spec).unwrap(), &datum).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert_eq!(r.terms.values().next().unwrap(), &(&eta - &one));
        let r = moment_ideal_reduce(&parse_element("x1^2*d1^2", &spec).unwrap(), &datum).unwrap();
        let expected = &(&(&eta - &one) * &(&eta - &q)) * &q.inv().unwrap();
        assert_eq!(r.terms.values().next().unwrap(), &expected);
        assert!(r.terms.keys().next().unwrap().is_one());
    }

    #[test]
    fn lattice_step() {
        let (spec, datum) = setup(2, vec![vec![1], vec![1]], &["5"]);
        assert_eq!(reduce("a1^2*a2", &spec, &datum), "5*a1");
        assert_eq!(reduce("x1*d2*a2^-1", &spec, &datum), "1/5*x1*d2*a1");
    }

    #[test]
    fn elimination_orders_agree() {
        let (spec, datum) = setup(3, vec![vec![1, 0], vec![1, 1], vec![0, 2]], &["3", "q"]);
        let u = parse_element("x1^2*x2*x3^2*d1*d2^2*d3 + q*x2^2*d2^3*d3^2*a1^-1", &spec).unwrap();
        let outs: Vec<CanonicalElement> = [ElimOrder::Simultaneous, ElimOrder::FirstIndex, ElimOrder::LastIndex]
            .iter()
            .map(|&o| Reducer::with_order(&spec, &datum, o).unwrap().reduce(&u).unwrap())
            .collect();
        assert_eq!(outs[0], outs[1]);
        assert_eq!(outs[0], outs[2]);
    }

    #[test]
    fn idempotent_and_absorbing() {
        let (spec, datum) = setup(2, vec![vec![1], vec![2]], &["2/3"]);
        let red = Reducer::new(&spec, &datum).unwrap();
        let u = parse_element("x1^2*d1*d2 + 3*x2*d2^2*a2^-1 - q", &spec).unwrap();
        let r = red.reduce(&u).unwrap();
        assert_eq!(red.reduce_canonical(&r).unwrap(), r);
        let phi = parse_element("a1*a2^2 - 2/3", &spec).unwrap();
        assert!(red.reduce(&u.mul(&phi).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn invariant_enumeration() {
        let t = TorusData::new(vec![vec![1], vec![1]]).unwrap();
        let list = invariant_monomials(&t, 2);
        let names: Vec<String> = list.iter().map(ToString::to_string).collect();
        assert!(names.contains(&"x1*d2".to_string()));
        assert!(!names.contains(&"x1".to_string()));
        let t1 = TorusData::new(vec![vec![1]]).unwrap();
        assert_eq!(invariant_monomials(&t1, 4).len(), 1);
    }

    #[test]
    fn product_of_invariants() {
        let (spec, datum) = setup(2, vec![vec![1], vec![1]], &["q+1"]);
        let red = Reducer::new(&spec, &datum).unwrap();
        let u = red.reduce(&parse_element("x1*d2", &spec).unwrap()).unwrap();
        let v = red.reduce(&parse_element("x2*d1", &spec).unwrap()).unwrap();
        let p = red.product(&u, &v).unwrap();
        let direct = red.reduce(&parse_element("x1*d2*x2*d1", &spec).unwrap()).unwrap();
        assert_eq!(p, direct);
        assert!(p.terms.keys().all(|m| m.mono.is_one()));
        let x1 = red.reduce(&parse_element("x1", &spec).unwrap()).unwrap();
        assert!(red.product(&x1, &u).is_err());
    }
}
