//! Exact coefficient fields.
//!
//! Three fields are supported: the rationals ℚ, the rational functions ℚ(q)
//! in a formal parameter, and the cyclotomic fields ℚ(ζ_l) for odd `l > 1`,
//! where the parameter `q` is interpreted as the primitive root ζ.
//!
//! A [`Scalar`] carries its [`FieldDescriptor`]. The `std::ops` impls panic
//! when the operands live in different fields; the `try_*` methods return
//! [`Error::Parameter`] instead.

pub mod cyclotomic;
pub mod poly;
pub mod ratfunc;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{param, Error, Result};
use cyclotomic::CycloData;
use poly::QPoly;
use ratfunc::RatFunc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    RationalFunctionInQ,
    Cyclotomic,
}

#[derive(Debug)]
struct FieldInner {
    kind: FieldKind,
    cyclo: Option<CycloData>,
}

/// Describes one of the supported coefficient fields. Cheap to clone.
#[derive(Clone, Debug)]
pub struct FieldDescriptor(Arc<FieldInner>);

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.kind() == other.kind() && self.l() == other.l())
    }
}

impl Eq for FieldDescriptor {}

impl FieldDescriptor {
    /// Builds a field. `l` is required for (and only used by) the cyclotomic
    /// kind, where it must be odd and greater than one.
    pub fn new(kind: FieldKind, l: Option<u32>) -> Result<Self> {
        let cyclo = match kind {
            FieldKind::Cyclotomic => {
                let l = l.ok_or_else(|| Error::Parameter("cyclotomic field needs l".into()))?;
                if l <= 1 || l % 2 == 0 {
                    return param(format!("l must be an odd integer greater than 1, got {l}"));
                }
                Some(CycloData::new(l))
            }
            _ => None,
        };
        Ok(FieldDescriptor(Arc::new(FieldInner { kind, cyclo })))
    }

    pub fn rational() -> Self {
        Self::new(FieldKind::Rational, None).unwrap()
    }

    pub fn rational_function() -> Self {
        Self::new(FieldKind::RationalFunctionInQ, None).unwrap()
    }

    pub fn cyclotomic(l: u32) -> Result<Self> {
        Self::new(FieldKind::Cyclotomic, Some(l))
    }

    pub fn kind(&self) -> FieldKind {
        self.0.kind
    }

    /// Root-of-unity order, cyclotomic fields only.
    pub fn l(&self) -> Option<u32> {
        self.0.cyclo.as_ref().map(|c| c.l)
    }

    /// Coefficients (ascending) of the cyclotomic modulus Φ_l.
    pub fn modulus(&self) -> Option<Vec<BigInt>> {
        self.0
            .cyclo
            .as_ref()
            .map(|c| c.modulus.coeffs().iter().map(|x| x.to_integer()).collect())
    }

    /// Dimension over ℚ of a cyclotomic field.
    pub fn phi(&self) -> Option<usize> {
        self.0.cyclo.as_ref().map(CycloData::phi)
    }

    pub(crate) fn cyclo(&self) -> Option<&CycloData> {
        self.0.cyclo.as_ref()
    }

    /// Whether the field contains the deformation parameter `q`.
    pub fn has_q(&self) -> bool {
        self.kind() != FieldKind::Rational
    }

    pub fn zero(&self) -> Scalar {
        self.from_rational(BigRational::zero())
    }

    pub fn one(&self) -> Scalar {
        self.from_rational(BigRational::one())
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_rational(BigRational::from_integer(n.into()))
    }

    pub fn from_ratio(&self, p: i64, r: i64) -> Scalar {
        self.from_rational(BigRational::new(p.into(), r.into()))
    }

    pub fn from_rational(&self, c: BigRational) -> Scalar {
        let value = match self.kind() {
            FieldKind::Rational => Value::Rat(c),
            FieldKind::RationalFunctionInQ => Value::Func(RatFunc::from_rational(c)),
            FieldKind::Cyclotomic => Value::Cyc(QPoly::constant(c)),
        };
        Scalar {
            field: self.clone(),
            value,
        }
    }

    /// `q^k` (ζ^k in a cyclotomic field). Over ℚ only `k = 0` is defined.
    pub fn q_power(&self, k: i64) -> Result<Scalar> {
        let value = match self.kind() {
            FieldKind::Rational if k == 0 => Value::Rat(BigRational::one()),
            FieldKind::Rational => return param("the rational field has no deformation parameter q"),
            FieldKind::RationalFunctionInQ => Value::Func(RatFunc::q_power(k)),
            FieldKind::Cyclotomic => Value::Cyc(self.cyclo().unwrap().zeta_power(k)),
        };
        Ok(Scalar {
            field: self.clone(),
            value,
        })
    }

    /// The parameter `q` itself.
    pub fn q(&self) -> Result<Scalar> {
        self.q_power(1)
    }

    /// Element of ℚ(ζ_l) from its coefficients on 1, ζ, …, ζ^{φ(l)-1}.
    pub fn from_cyclo_coeffs(&self, coeffs: Vec<BigRational>) -> Result<Scalar> {
        let Some(c) = self.cyclo() else {
            return param("coefficient vectors need a cyclotomic field");
        };
        if coeffs.len() > c.phi() {
            return param(format!("expected at most {} coefficients", c.phi()));
        }
        Ok(Scalar {
            field: self.clone(),
            value: Value::Cyc(QPoly::from_coeffs(coeffs)),
        })
    }

    /// Element of ℚ(q) from numerator and denominator polynomials.
    pub fn from_q_fraction(&self, num: QPoly, den: QPoly) -> Result<Scalar> {
        if self.kind() != FieldKind::RationalFunctionInQ {
            return param("polynomial fractions need the rational-function field");
        }
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Scalar {
            field: self.clone(),
            value: Value::Func(RatFunc::new(num, den)),
        })
    }

    /// The q-integer `1 + q + … + q^{n-1}`; zero for `n = 0`.
    pub fn q_integer(&self, n: u32) -> Result<Scalar> {
        let mut acc = self.zero();
        for k in 0..n {
            acc = acc + self.q_power(k as i64)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::RationalFunctionInQ => write!(f, "Q(q)"),
            FieldKind::Cyclotomic => write!(f, "Q(zeta_{})", self.l().unwrap()),
        }
    }
}

/// Convenience wrapper for [`FieldDescriptor::new`].
pub fn make_field(kind: FieldKind, l: Option<u32>) -> Result<FieldDescriptor> {
    FieldDescriptor::new(kind, l)
}

/// Free-function form of [`FieldDescriptor::q_integer`].
pub fn q_integer(n: u32, field: &FieldDescriptor) -> Result<Scalar> {
    field.q_integer(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Rat(BigRational),
    Func(RatFunc),
    Cyc(QPoly),
}

/// An exact element of one of the coefficient fields.
#[derive(Clone, Debug)]
pub struct Scalar {
    field: FieldDescriptor,
    value: Value,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl Scalar {
    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rat(r) => r.is_zero(),
            Value::Func(f) => f.is_zero(),
            Value::Cyc(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rat(r) => r.is_one(),
            Value::Func(f) => f.is_one(),
            Value::Cyc(p) => p.is_one(),
        }
    }

    /// The value as a rational number, when it lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.value {
            Value::Rat(r) => Some(r.clone()),
            Value::Func(f) => f.as_constant(),
            Value::Cyc(p) if p.is_constant() => Some(p.coeff(0)),
            Value::Cyc(_) => None,
        }
    }

    /// Numerator and denominator, rational-function field only.
    pub fn as_q_fraction(&self) -> Option<(&QPoly, &QPoly)> {
        match &self.value {
            Value::Func(f) => Some((f.numerator(), f.denominator())),
            _ => None,
        }
    }

    /// Coefficients on 1, ζ, …, ζ^{φ(l)-1}, cyclotomic field only.
    pub fn cyclo_coeffs(&self) -> Option<Vec<BigRational>> {
        match &self.value {
            Value::Cyc(p) => {
                let phi = self.field.phi().unwrap();
                Some((0..phi).map(|k| p.coeff(k)).collect())
            }
            _ => None,
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            param(format!("field mismatch: {} vs {}", self.field, other.field))
        }
    }

    fn with(&self, value: Value) -> Scalar {
        Scalar {
            field: self.field.clone(),
            value,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.with(match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (Value::Func(a), Value::Func(b)) => Value::Func(a.add(b)),
            (Value::Cyc(a), Value::Cyc(b)) => Value::Cyc(a.add(b)),
            _ => unreachable!(),
        }))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Scalar> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.with(match (&self.value, &other.value) {
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            (Value::Func(a), Value::Func(b)) => Value::Func(a.mul(b)),
            (Value::Cyc(a), Value::Cyc(b)) => Value::Cyc(self.field.cyclo().unwrap().mul(a, b)),
            _ => unreachable!(),
        }))
    }

    pub fn try_div(&self, other: &Self) -> Result<Scalar> {
        self.try_mul(&other.inv()?)
    }

    fn neg_ref(&self) -> Scalar {
        self.with(match &self.value {
            Value::Rat(a) => Value::Rat(-a),
            Value::Func(a) => Value::Func(a.neg()),
            Value::Cyc(a) => Value::Cyc(a.neg()),
        })
    }

    /// Multiplicative inverse; [`Error::ZeroDivisor`] on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(self.with(match &self.value {
            Value::Rat(a) => Value::Rat(a.recip()),
            Value::Func(a) => Value::Func(a.inv().unwrap()),
            Value::Cyc(a) => Value::Cyc(self.field.cyclo().unwrap().inv(a).unwrap()),
        }))
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.field.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        Ok(acc)
    }

    /// Multiply by a rational number.
    pub fn scale_rational(&self, c: &BigRational) -> Scalar {
        self.with(match &self.value {
            Value::Rat(a) => Value::Rat(a * c),
            Value::Func(a) => Value::Func(a.mul(&RatFunc::from_rational(c.clone()))),
            Value::Cyc(a) => Value::Cyc(a.scale(c)),
        })
    }

    /// Substitutes `q = ζ_l` into an element of ℚ(q), returning an element of
    /// `target`. Fails with [`Error::Domain`] when the denominator vanishes at ζ.
    pub fn specialize(&self, target: &FieldDescriptor) -> Result<Scalar> {
        let Value::Func(f) = &self.value else {
            return param("only rational functions in q can be specialized");
        };
        let Some(c) = target.cyclo() else {
            return param("specialization target must be a cyclotomic field");
        };
        let (num, den) = f.eval_parts(|p| c.eval_at_zeta(p));
        if den.is_zero() {
            return Err(Error::Domain(format!("denominator of {self} vanishes at zeta_{}", c.l)));
        }
        let den = Scalar {
            field: target.clone(),
            value: Value::Cyc(den),
        };
        let num = Scalar {
            field: target.clone(),
            value: Value::Cyc(num),
        };
        num.try_div(&den)
    }

    /// True when printing the value needs more than one additive term.
    pub fn is_compound(&self) -> bool {
        match &self.value {
            Value::Rat(_) => false,
            Value::Func(f) => !(f.numerator().is_monomial() && f.denominator().is_monomial()),
            Value::Cyc(p) => p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1,
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        self.try_add(rhs).expect("scalar field mismatch")
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalar field mismatch")
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        self.try_mul(rhs).expect("scalar field mismatch")
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Polynomial in `var` with descending powers, e.g. `q^2-2*q+1/3`.
pub(crate) fn fmt_poly(p: &QPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let power = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if k == 0 {
            out.push_str(&fmt_rational(&abs));
        } else if abs.is_one() {
            out.push_str(&power);
        } else {
            out.push_str(&fmt_rational(&abs));
            out.push('*');
            out.push_str(&power);
        }
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rat(r) => write!(f, "{}", fmt_rational(r)),
            Value::Cyc(p) => write!(f, "{}", fmt_poly(p, "zeta")),
            Value::Func(r) => {
                if r.denominator().is_constant() {
                    let c = r.denominator().coeff(0).recip();
                    return write!(f, "{}", fmt_poly(&r.numerator().scale(&c), "q"));
                }
                let num = fmt_poly(r.numerator(), "q");
                let den = fmt_poly(r.denominator(), "q");
                let wrap = |s: String, simple: bool| if simple { s } else { format!("({s})") };
                let num_simple = r.numerator().is_monomial();
                let den_simple = r.denominator().is_monomial() && r.denominator().leading().is_one();
                write!(f, "{}/{}", wrap(num, num_simple), wrap(den, den_simple))
            }
        }
    }
}
