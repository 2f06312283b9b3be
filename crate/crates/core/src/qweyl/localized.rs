//! Fractions `u · α_1^{-k_1} ⋯ α_n^{-k_n}` with the Euler operators as
//! denominators. Denominators sit on the right; moving `α^{-k}` past an
//! element applies the diagonal automorphism `σ^{-k}`, where
//! `σ_i(x_j) = q_ii^{δ_ij} x_j` and `σ_i(∂_j) = q_ii^{-δ_ij} ∂_j`.
//!
//! Nontrivial denominators need the `Rescaled` normalization: only there does
//! `α_i` q-commute with the generators.

use std::fmt;
use std::sync::Arc;

use super::{AlgebraSpec, Normalization, PBWElement};
use crate::error::{param, Result};
use crate::scalars::Scalar;

#[derive(Clone, Debug)]
pub struct LocalizedElement {
    numerator: PBWElement,
    denom: Vec<u32>,
}

impl LocalizedElement {
    pub fn new(numerator: PBWElement, denom: Vec<u32>) -> Result<Self> {
        if denom.len() != numerator.spec().n() {
            return param("denominator exponent vector must have length n");
        }
        if denom.iter().any(|&k| k > 0) && numerator.spec().normalization() != Normalization::Rescaled {
            return param("Euler-operator denominators need the rescaled normalization");
        }
        Ok(LocalizedElement { numerator, denom })
    }

    pub fn from_pbw(u: PBWElement) -> Self {
        let n = u.spec().n();
        LocalizedElement {
            numerator: u,
            denom: vec![0; n],
        }
    }

    /// `α^{-k}`
    pub fn alpha_inverse(spec: &Arc<AlgebraSpec>, k: Vec<u32>) -> Result<Self> {
        Self::new(PBWElement::one(spec), k)
    }

    /// `α^c` for an integer vector `c`; negative entries become denominators.
    pub fn alpha_power(spec: &Arc<AlgebraSpec>, c: &[i64]) -> Result<Self> {
        let pos: Vec<u32> = c.iter().map(|&e| e.max(0) as u32).collect();
        let neg: Vec<u32> = c.iter().map(|&e| (-e).max(0) as u32).collect();
        Self::new(PBWElement::alpha_power(spec, &pos)?, neg)
    }

    pub fn numerator(&self) -> &PBWElement {
        &self.numerator
    }

    pub fn denominator(&self) -> &[u32] {
        &self.denom
    }

    pub fn spec(&self) -> &Arc<AlgebraSpec> {
        self.numerator.spec()
    }

    pub fn has_denominator(&self) -> bool {
        self.denom.iter().any(|&k| k > 0)
    }

    /// `σ^{-k}(v)`
    fn twist(v: &PBWElement, k: &[u32]) -> PBWElement {
        if k.iter().all(|&e| e == 0) {
            return v.clone();
        }
        let spec = v.spec().clone();
        v.map_coefficients(|m, c| {
            let e: i64 = (0..spec.n())
                .map(|i| -(k[i] as i64) * spec.m()[i][i] * (m.a[i] as i64 - m.b[i] as i64))
                .sum();
            c * &spec.q_pow(e)
        })
    }

    /// `(u α^{-k})(v α^{-m}) = u σ^{-k}(v) α^{-(k+m)}`
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let v = Self::twist(&other.numerator, &self.denom);
        let denom = self.denom.iter().zip(&other.denom).map(|(a, b)| a + b).collect();
        Self::new(self.numerator.mul(&v)?, denom)
    }

    /// Numerator over the denominator `α^{-target}`, `target ≥ self.denom`.
    fn lift(&self, target: &[u32]) -> Result<PBWElement> {
        let extra: Vec<u32> = target.iter().zip(&self.denom).map(|(t, k)| t - k).collect();
        self.numerator.mul(&PBWElement::alpha_power(self.spec(), &extra)?)
    }

    fn common(&self, other: &Self) -> Vec<u32> {
        self.denom.iter().zip(&other.denom).map(|(a, b)| *a.max(b)).collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.denom == other.denom {
            return Self::new(self.numerator.try_add(&other.numerator)?, self.denom.clone());
        }
        let k = self.common(other);
        Self::new(self.lift(&k)?.try_add(&other.lift(&k)?)?, k)
    }

    pub fn neg(&self) -> Self {
        LocalizedElement {
            numerator: self.numerator.neg(),
            denom: self.denom.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        LocalizedElement {
            numerator: self.numerator.scale(c),
            denom: self.denom.clone(),
        }
    }

    /// Exact equality of fractions, by cross-multiplying to the
    /// componentwise maximum denominator.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.denom == other.denom {
            return Ok(self.numerator == other.numerator);
        }
        let k = self.common(other);
        Ok(self.lift(&k)? == other.lift(&k)?)
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// `Some(c)` when the element is a constant with no denominator.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.has_denominator() {
            None
        } else {
            self.numerator.as_scalar()
        }
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::from_pbw(PBWElement::one(self.spec()));
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.has_denominator() {
            return write!(f, "{}", self.numerator);
        }
        if self.numerator.len() > 1 {
            write!(f, "({})", self.numerator)?;
        } else {
            write!(f, "{}", self.numerator)?;
        }
        for (i, &k) in self.denom.iter().enumerate() {
            if k > 0 {
                write!(f, "*a{}^-{k}", i + 1)?;
            }
        }
        Ok(())
    }
}
