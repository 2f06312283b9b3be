//! Braided Hopf algebra structure on the quantum symmetric algebras `S_q`
//! (generated by the `x_i`, degree `e_i`) and `S_q*` (generated by the `∂_i`,
//! degree `-e_i`), and the Heisenberg double built from them.
//!
//! The braiding of homogeneous elements is `v ⊗ w ↦ q^{deg v · M · deg w} w ⊗ v`.
//! Monomials in either algebra are exponent vectors; both algebras are
//! braided-commutative with `x_j x_i = q^{m_ji} x_i x_j` for `i < j`.
//!
//! The left regular action `f ▷ h` pairs `f` with the second coproduct leg of
//! `h`. Two readings of the braid that moves `f` into position are provided
//! by [`ActionConvention`]; only [`ActionConvention::InverseBraid`] yields an
//! associative double that matches the closed presentation.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::check::Report;
use crate::error::{param, Result};
use crate::qweyl::{AlgebraSpec, Monomial, Normalization, PBWElement};
use crate::scalars::Scalar;

pub type Exps = Vec<u32>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `S_q`, generated by the `x_i`.
    Sq,
    /// `S_q*`, generated by the `∂_i`.
    SqDual,
}

/// How the braid in the left regular action is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActionConvention {
    /// `f ▷ h = Σ q^{deg h_(1) · M · deg h_(2)} ⟨f, h_(2)⟩ h_(1)`.
    Literal,
    /// `f ▷ h = Σ q^{-deg h_(2) · M · deg h_(1)} ⟨f, h_(2)⟩ h_(1)`: `f` is
    /// moved past `h_(1)` by the inverse braiding.
    InverseBraid,
}

/// Element of a braided tensor square `S ⊗ S` of one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidedTensorElement {
    pub side: Side,
    pub terms: BTreeMap<(Exps, Exps), Scalar>,
}

/// Element of the Heisenberg double `S_q ⊗ S_q*`, keyed by `(x-exponents,
/// ∂-exponents)`. Its product comes from the smash-product construction,
/// never from the presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleElement {
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl DoubleElement {
    pub fn zero() -> Self {
        DoubleElement { terms: BTreeMap::new() }
    }

    pub fn term(m: Monomial, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
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

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Reads a PBW element of the same rank term by term.
    pub fn from_pbw(u: &PBWElement) -> Self {
        let mut out = Self::zero();
        for (m, c) in u.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

#[derive(Default)]
struct Caches {
    coproduct: HashMap<Exps, Arc<Vec<(Exps, Exps, Scalar)>>>,
    pairing: HashMap<Exps, Scalar>,
}

/// The braided Hopf structure determined by an algebra's matrix `M` and field.
/// Results are memoized; the structure may be shared between threads.
pub struct BraidedHopf {
    spec: Arc<AlgebraSpec>,
    caches: Mutex<Caches>,
}

impl BraidedHopf {
    pub fn new(spec: &Arc<AlgebraSpec>) -> Self {
        BraidedHopf {
            spec: spec.clone(),
            caches: Mutex::new(Caches::default()),
        }
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        &self.spec
    }

    fn n(&self) -> usize {
        self.spec.n()
    }

    fn q(&self, k: i64) -> Scalar {
        self.spec.q_pow(k)
    }

    pub fn degree(side: Side, e: &[u32]) -> Vec<i64> {
        let s = if side == Side::Sq { 1 } else { -1 };
        e.iter().map(|&k| s * k as i64).collect()
    }

    /// `u · M · v`
    pub fn form(&self, u: &[i64], v: &[i64]) -> i64 {
        let m = self.spec.m();
        let mut s = 0;
        for (i, ui) in u.iter().enumerate() {
            if *ui == 0 {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                s += ui * m[i][j] * vj;
            }
        }
        s
    }

    /// Exponent of `q` in the product of monomials `e · f` (either side).
    pub fn mult_exponent(&self, e: &[u32], f: &[u32]) -> i64 {
        let m = self.spec.m();
        let mut s = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                s += m[j][i] * e[j] as i64 * f[i] as i64;
            }
        }
        s
    }

    /// Product `e · f` in `S_q` or `S_q*`: coefficient and exponents.
    pub fn multiply(&self, e: &[u32], f: &[u32]) -> (Scalar, Exps) {
        let sum = e.iter().zip(f).map(|(a, b)| a + b).collect();
        (self.q(self.mult_exponent(e, f)), sum)
    }

    /// Braided product in the tensor square of one side:
    /// `(a ⊗ b)(c ⊗ d) = q^{deg b · M · deg c} ac ⊗ bd`.
    pub fn tensor_mul(&self, u: &BraidedTensorElement, v: &BraidedTensorElement) -> BraidedTensorElement {
        let mut terms: BTreeMap<(Exps, Exps), Scalar> = BTreeMap::new();
        for ((a, b), c1) in &u.terms {
            for ((c, d), c2) in &v.terms {
                let braid = self.form(&Self::degree(u.side, b), &Self::degree(v.side, c));
                let (k1, ac) = self.multiply(a, c);
                let (k2, bd) = self.multiply(b, d);
                let coef = &(&(c1 * c2) * &(&k1 * &k2)) * &self.q(braid);
                let entry = terms.entry((ac, bd)).or_insert_with(|| self.spec.field().zero());
                *entry = &*entry + &coef;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        BraidedTensorElement { side: u.side, terms }
    }

    /// `Δ` of a monomial as a list of `(left, right, coefficient)`, computed
    /// from `Δ(x_i) = x_i ⊗ 1 + 1 ⊗ x_i` by braided multiplicativity.
    /// Coefficients do not depend on the side.
    pub fn coproduct_terms(&self, e: &[u32]) -> Arc<Vec<(Exps, Exps, Scalar)>> {
        if let Some(hit) = self.caches.lock().unwrap().coproduct.get(e) {
            return hit.clone();
        }
        let n = self.n();
        let zero = vec![0; n];
        let one = self.spec.field().one();
        let mut acc = BraidedTensorElement {
            side: Side::Sq,
            terms: [((zero.clone(), zero.clone()), one.clone())].into_iter().collect(),
        };
        for i in 0..n {
            let mut gen = zero.clone();
            gen[i] = 1;
            let delta = BraidedTensorElement {
                side: Side::Sq,
                terms: [
                    ((gen.clone(), zero.clone()), one.clone()),
                    ((zero.clone(), gen), one.clone()),
                ]
                .into_iter()
                .collect(),
            };
            for _ in 0..e[i] {
                acc = self.tensor_mul(&acc, &delta);
            }
        }
        let out: Arc<Vec<_>> = Arc::new(acc.terms.into_iter().map(|((a, b), c)| (a, b, c)).collect());
        self.caches.lock().unwrap().coproduct.insert(e.to_vec(), out.clone());
        out
    }

    pub fn coproduct(&self, e: &[u32], side: Side) -> BraidedTensorElement {
        BraidedTensorElement {
            side,
            terms: self
                .coproduct_terms(e)
                .iter()
                .map(|(a, b, c)| ((a.clone(), b.clone()), c.clone()))
                .collect(),
        }
    }

    pub fn counit(&self, e: &[u32]) -> Scalar {
        if e.iter().all(|&k| k == 0) {
            self.spec.field().one()
        } else {
            self.spec.field().zero()
        }
    }

    /// `S(monomial) = c · monomial`; returns `c`. Uses `S(x_i) = -x_i` and
    /// `S(uv) = q^{deg u · M · deg v} S(v) S(u)`.
    pub fn antipode(&self, e: &[u32], side: Side) -> Scalar {
        let Some(i) = e.iter().position(|&k| k > 0) else {
            return self.spec.field().one();
        };
        let mut rest = e.to_vec();
        rest[i] -= 1;
        let mut gen = vec![0; self.n()];
        gen[i] = 1;
        // e = gen · rest with coefficient one since i is the smallest index
        let braid = self.form(&Self::degree(side, &gen), &Self::degree(side, &rest));
        let s_rest = self.antipode(&rest, side);
        let (k, _) = self.multiply(&rest, &gen);
        -(&(&s_rest * &k) * &self.q(braid))
    }

    /// `⟨∂^b, x^a⟩`, from `⟨∂_i, x_j⟩ = δ_ij`, the counit, and the axiom
    /// `⟨∂_i · g, h⟩ = Σ q^{deg g · M · deg h_(1)} ⟨∂_i, h_(1)⟩ ⟨g, h_(2)⟩`.
    pub fn pairing(&self, b: &[u32], a: &[u32]) -> Scalar {
        let f = self.spec.field();
        if a != b {
            return f.zero();
        }
        let Some(i) = b.iter().position(|&k| k > 0) else {
            return f.one();
        };
        if let Some(hit) = self.caches.lock().unwrap().pairing.get(b) {
            return hit.clone();
        }
        let mut g = b.to_vec();
        g[i] -= 1;
        let mut gen = vec![0; self.n()];
        gen[i] = 1;
        let mut total = f.zero();
        for (h1, h2, c) in self.coproduct_terms(a).iter() {
            if *h1 != gen {
                continue;
            }
            let braid = self.form(&Self::degree(Side::SqDual, &g), &Self::degree(Side::Sq, h1));
            let inner = self.pairing(&g, h2);
            if !inner.is_zero() {
                total = &total + &(&(c * &inner) * &self.q(braid));
            }
        }
        self.caches.lock().unwrap().pairing.insert(b.to_vec(), total.clone());
        total
    }

    /// `∂^b ▷ x^a`, which is a multiple of `x^{a-b}` (zero unless `b ≤ a`).
    pub fn act(&self, b: &[u32], a: &[u32], conv: ActionConvention) -> Option<(Scalar, Exps)> {
        if b.iter().zip(a).any(|(x, y)| x > y) {
            return None;
        }
        let h1: Exps = a.iter().zip(b).map(|(x, y)| x - y).collect();
        let pair = self.pairing(b, b);
        let mut total = self.spec.field().zero();
        for (l, r, c) in self.coproduct_terms(a).iter() {
            if *l != h1 || r.as_slice() != b {
                continue;
            }
            let (d1, d2) = (Self::degree(Side::Sq, l), Self::degree(Side::Sq, r));
            let braid = match conv {
                ActionConvention::Literal => self.form(&d1, &d2),
                ActionConvention::InverseBraid => -self.form(&d2, &d1),
            };
            total = &total + &(&(c * &pair) * &self.q(braid));
        }
        (!total.is_zero()).then_some((total, h1))
    }

    /// Left regular action on a general element of `S_q`, both given as
    /// `(exponents, coefficient)` lists.
    pub fn left_regular_action(
        &self,
        f: &[(Exps, Scalar)],
        h: &[(Exps, Scalar)],
        conv: ActionConvention,
    ) -> BTreeMap<Exps, Scalar> {
        let mut out: BTreeMap<Exps, Scalar> = BTreeMap::new();
        for (b, cf) in f {
            for (a, ch) in h {
                if let Some((c, e)) = self.act(b, a, conv) {
                    let entry = out.entry(e).or_insert_with(|| self.spec.field().zero());
                    *entry = &*entry + &(&c * &(cf * ch));
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Product of two monomials `x^a ⊗ ∂^b` in the Heisenberg double:
    /// `(h ⊗ f)(h' ⊗ f') = Σ q^{deg f_(2) · M · deg h'} h (f_(1) ▷ h') ⊗ f_(2) f'`.
    pub fn double_mul_monomials(&self, u: &Monomial, v: &Monomial, conv: ActionConvention) -> DoubleElement {
        let mut out = DoubleElement::zero();
        for (f1, f2, c) in self.coproduct_terms(&u.b).iter() {
            let Some((act, rest)) = self.act(f1, &v.a, conv) else {
                continue;
            };
            let braid = self.form(&Self::degree(Side::SqDual, f2), &Self::degree(Side::Sq, &v.a));
            let (k1, a) = self.multiply(&u.a, &rest);
            let (k2, b) = self.multiply(f2, &v.b);
            let coef = &(&(c * &act) * &(&k1 * &k2)) * &self.q(braid);
            out.add_term(Monomial::new(a, b), coef);
        }
        out
    }

    pub fn heisenberg_product(&self, u: &DoubleElement, v: &DoubleElement, conv: ActionConvention) -> DoubleElement {
        let mut out = DoubleElement::zero();
        for (m1, c1) in &u.terms {
            for (m2, c2) in &v.terms {
                let c = c1 * c2;
                for (m, k) in self.double_mul_monomials(m1, m2, conv).terms {
                    out.add_term(m, &k * &c);
                }
            }
        }
        out
    }

    pub fn x(&self, i: usize) -> DoubleElement {
        DoubleElement::term(Monomial::x(self.n(), i), self.spec.field().one())
    }

    pub fn d(&self, i: usize) -> DoubleElement {
        DoubleElement::term(Monomial::d(self.n(), i), self.spec.field().one())
    }

    pub fn one(&self) -> DoubleElement {
        DoubleElement::term(Monomial::one(self.n()), self.spec.field().one())
    }
}

/// All exponent vectors of length `n` with sum at most `bound`.
pub fn exponents_up_to(n: usize, bound: u32) -> Vec<Exps> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().sum();
            for k in 0..=bound - used {
                let mut e2 = e.clone();
                e2.push(k);
                next.push(e2);
            }
        }
        out = next;
    }
    out
}

/// All monomials `x^a ∂^b` with `|a| + |b| ≤ bound`.
pub fn monomials_up_to(n: usize, bound: u32) -> Vec<Monomial> {
    exponents_up_to(2 * n, bound)
        .into_iter()
        .map(|e| Monomial::new(e[..n].to_vec(), e[n..].to_vec()))
        .collect()
}

/// Compares the Heisenberg double product with the unscaled presentation on
/// all pairs of monomials of total degree at most `degree_bound`, and checks
/// the defining relations inside the double.
pub fn verify_double_presentation_with(
    spec: &Arc<AlgebraSpec>,
    degree_bound: u32,
    conv: ActionConvention,
) -> Result<Report> {
    let unscaled = if spec.normalization() == Normalization::Unscaled {
        spec.clone()
    } else {
        AlgebraSpec::new(spec.m().to_vec(), Normalization::Unscaled, spec.field().clone())?
    };
    let h = BraidedHopf::new(&unscaled);
    let n = unscaled.n();
    let mut report = Report::new();

    let mut relation = |name: String, lhs: DoubleElement| {
        let ok = lhs.is_zero();
        report.push(
            name,
            ok,
            if ok {
                String::new()
            } else {
                format!("residual {:?}", lhs.terms.len())
            },
        );
    };
    let prod = |a: &DoubleElement, b: &DoubleElement| h.heisenberg_product(a, b, conv);
    for i in 0..n {
        for j in 0..n {
            let qij_inv = unscaled.q_pow(-unscaled.m()[i][j]);
            let mut lhs = prod(&h.d(i), &h.x(j)).sub(&prod(&h.x(j), &h.d(i)).scale(&qij_inv));
            if i == j {
                lhs = lhs.sub(&h.one());
            }
            relation(format!("d{}*x{} relation", i + 1, j + 1), lhs);
            if i < j {
                let qji = unscaled.q_pow(unscaled.m()[j][i]);
                let lhs = prod(&h.x(j), &h.x(i)).sub(&prod(&h.x(i), &h.x(j)).scale(&qji));
                relation(format!("x{}*x{} relation", j + 1, i + 1), lhs);
                let lhs = prod(&h.d(j), &h.d(i)).sub(&prod(&h.d(i), &h.d(j)).scale(&qji));
                relation(format!("d{}*d{} relation", j + 1, i + 1), lhs);
            }
        }
    }

    let monos = monomials_up_to(n, degree_bound);
    let mut mismatches = 0usize;
    let mut first: Option<String> = None;
    for u in &monos {
        for v in &monos {
            let dbl = h.double_mul_monomials(u, v, conv);
            let pu = PBWElement::term(&unscaled, u.clone(), unscaled.field().one());
            let pv = PBWElement::term(&unscaled, v.clone(), unscaled.field().one());
            let pres = DoubleElement::from_pbw(&pu.mul(&pv)?);
            if dbl != pres {
                mismatches += 1;
                if first.is_none() {
                    first = Some(format!(
                        "({u})*({v}): double gives {}, presentation gives {}",
                        show(&dbl),
                        show(&pres)
                    ));
                }
            }
        }
    }
    report.push(
        format!("double product = presentation on {}^2 monomial pairs", monos.len()),
        mismatches == 0,
        first
            .map(|f| format!("{mismatches} mismatches; first {f}"))
            .unwrap_or_default(),
    );
    Ok(report)
}

/// [`verify_double_presentation_with`] under [`ActionConvention::InverseBraid`].
pub fn verify_double_presentation(spec: &Arc<AlgebraSpec>, degree_bound: u32) -> Result<Report> {
    if degree_bound == 0 {
        return param("degree bound must be at least 1");
    }
    let mut report = verify_double_presentation_with(spec, degree_bound, ActionConvention::InverseBraid)?;
    let literal = verify_double_presentation_with(spec, degree_bound.min(2), ActionConvention::Literal)?;
    if let Some(bad) = literal.failures().next() {
        let note = format!(
            "literal reading of the action braid disagrees with the presentation ({}: {})",
            bad.name, bad.detail
        );
        if let Some(last) = report.checks.last_mut() {
            if !last.detail.is_empty() {
                last.detail.push_str("; ");
            }
            last.detail.push_str(&note);
        }
    }
    Ok(report)
}

fn show(e: &DoubleElement) -> String {
    let parts: Vec<String> = e.terms.iter().rev().map(|(m, c)| format!("({c})*{m}")).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Coassociativity, counit and antipode axioms on all monomials of degree at
/// most `degree`. The pairing `⟨∂^e, x^e⟩` must be nonzero unless some
/// q-factorial `[e_i]_{q^{m_ii}}!` vanishes, which only happens at a root of unity.
pub fn verify_hopf_axioms(spec: &Arc<AlgebraSpec>, degree: u32) -> Result<Report> {
    let h = BraidedHopf::new(spec);
    let f = spec.field();
    let mut report = Report::new();
    let mut coassoc_fail = None;
    let mut counit_fail = None;
    let mut antipode_fail = None;
    let exps = exponents_up_to(spec.n(), degree);
    for e in &exps {
        let delta = h.coproduct_terms(e);
        // (Δ ⊗ id)Δ vs (id ⊗ Δ)Δ
        let mut left: BTreeMap<(Exps, Exps, Exps), Scalar> = BTreeMap::new();
        let mut right: BTreeMap<(Exps, Exps, Exps), Scalar> = BTreeMap::new();
        for (a, b, c) in delta.iter() {
            for (a1, a2, c2) in h.coproduct_terms(a).iter() {
                let k = (a1.clone(), a2.clone(), b.clone());
                let entry = left.entry(k).or_insert_with(|| f.zero());
                *entry = &*entry + &(c * c2);
            }
            for (b1, b2, c2) in h.coproduct_terms(b).iter() {
                let k = (a.clone(), b1.clone(), b2.clone());
                let entry = right.entry(k).or_insert_with(|| f.zero());
                *entry = &*entry + &(c * c2);
            }
        }
        left.retain(|_, c| !c.is_zero());
        right.retain(|_, c| !c.is_zero());
        if left != right && coassoc_fail.is_none() {
            coassoc_fail = Some(format!("{e:?}"));
        }
        let zero = vec![0; spec.n()];
        let find = |l: &Exps, r: &Exps| {
            delta
                .iter()
                .find(|(a, b, _)| a == l && b == r)
                .map(|t| t.2.clone())
                .unwrap_or_else(|| f.zero())
        };
        let unit_ok = if e == &zero {
            find(&zero, &zero).is_one()
        } else {
            find(&zero, e).is_one() && find(e, &zero).is_one()
        };
        if !unit_ok && counit_fail.is_none() {
            counit_fail = Some(format!("{e:?}"));
        }
        for side in [Side::Sq, Side::SqDual] {
            let mut l = f.zero();
            let mut r = f.zero();
            for (a, b, c) in delta.iter() {
                let (k, _) = h.multiply(a, b);
                l = &l + &(&(c * &h.antipode(b, side)) * &k);
                r = &r + &(&(c * &h.antipode(a, side)) * &k);
            }
            let eps = h.counit(e);
            if (l != eps || r != eps) && antipode_fail.is_none() {
                antipode_fail = Some(format!("{e:?} on {side:?}"));
            }
        }
    }
    report.push(
        "coassociativity",
        coassoc_fail.is_none(),
        coassoc_fail.unwrap_or_default(),
    );
    report.push("counit", counit_fail.is_none(), counit_fail.unwrap_or_default());
    report.push("antipode", antipode_fail.is_none(), antipode_fail.unwrap_or_default());
    // [k]_t = 1 + t + ... + t^{k-1} with t = q^{m_ii}; at a root of unity some vanish
    let factorial_vanishes = |e: &Exps| {
        (0..spec.n()).any(|i| {
            let t = spec.q_pow(spec.m()[i][i]);
            (1..=e[i] as i64).any(|k| (0..k).fold(f.zero(), |acc, j| &acc + &t.pow(j).unwrap()).is_zero())
        })
    };
    let mut mismatch = None;
    for e in &exps {
        if h.pairing(e, e).is_zero() != factorial_vanishes(e) && mismatch.is_none() {
            mismatch = Some(format!("<d^{e:?}, x^{e:?}> = {}", h.pairing(e, e)));
        }
    }
    report.push(
        "pairing vanishes on the diagonal exactly where a q-factorial does",
        mismatch.is_none(),
        mismatch.unwrap_or_default(),
    );
    Ok(report)
}

/// Searches for a triple of monomials on which the double product fails to be
/// associative; `None` when every triple up to `degree` associates.
pub fn associativity_counterexample(spec: &Arc<AlgebraSpec>, degree: u32, conv: ActionConvention) -> Option<String> {
    let h = BraidedHopf::new(spec);
    let monos = monomials_up_to(spec.n(), degree);
    let one = spec.field().one();
    for u in &monos {
        for v in &monos {
            let uv = h.double_mul_monomials(u, v, conv);
            for w in &monos {
                let l = h.heisenberg_product(&uv, &DoubleElement::term(w.clone(), one.clone()), conv);
                let vw = h.double_mul_monomials(v, w, conv);
                let r = h.heisenberg_product(&DoubleElement::term(u.clone(), one.clone()), &vw, conv);
                if l != r {
                    return Some(format!("({u})({v})({w}): {} vs {}", show(&l), show(&r)));
                }
            }
        }
    }
    None
}
