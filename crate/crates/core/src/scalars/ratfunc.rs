//! Rational functions in one formal parameter `q`.
//!
//! Values are kept as `num / den` with both polynomials integral, the pair
//! coprime over ℚ[q], the combined content equal to one and the leading
//! coefficient of `den` positive. With that normalization two equal functions
//! have identical representations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::poly::QPoly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc {
            num: QPoly::one(),
            den: QPoly::one(),
        }
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::new(QPoly::constant(c), QPoly::one())
    }

    /// `q^k` for any integer `k`.
    pub fn q_power(k: i64) -> Self {
        let one = BigRational::one();
        if k >= 0 {
            RatFunc {
                num: QPoly::monomial(one, k as usize),
                den: QPoly::one(),
            }
        } else {
            RatFunc {
                num: QPoly::one(),
                den: QPoly::monomial(one, k.unsigned_abs() as usize),
            }
        }
    }

    pub fn from_poly(p: QPoly) -> Self {
        Self::new(p, QPoly::one())
    }

    /// Builds and normalizes `num / den`. Panics if `den` is zero.
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = if den.is_monomial() || num.is_monomial() {
            // gcd with a monomial is a power of q
            let k = num.valuation().unwrap().min(den.valuation().unwrap());
            QPoly::monomial(BigRational::one(), k)
        } else {
            num.gcd(&den)
        };
        let (num, den) = if g.is_one() {
            (num, den)
        } else if g.is_monomial() {
            let k = g.degree().unwrap();
            (num.shift_down(k), den.shift_down(k))
        } else {
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        Self::normalize_content(num, den)
    }

    fn normalize_content(num: QPoly, den: QPoly) -> Self {
        let lcm = num.denominator_lcm().lcm(&den.denominator_lcm());
        let lcm = BigRational::from_integer(lcm);
        let (num, den) = (num.scale(&lcm), den.scale(&lcm));
        let mut g = num.numerator_gcd().gcd(&den.numerator_gcd());
        if den.leading().is_negative() {
            g = -g;
        }
        if g.is_one() {
            return RatFunc { num, den };
        }
        let s = BigRational::new(BigInt::one(), g);
        RatFunc {
            num: num.scale(&s),
            den: den.scale(&s),
        }
    }

    pub fn numerator(&self) -> &QPoly {
        &self.num
    }

    pub fn denominator(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// `Some(c)` when the function is the constant `c`.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(self.num.coeff(0) / self.den.coeff(0))
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_monomial() && other.den.is_monomial() {
            // Laurent fast path: bring both to the larger power of q
            let (a, b) = (self.den.degree().unwrap(), other.den.degree().unwrap());
            let k = a.max(b);
            let ca = self.den.leading().recip();
            let cb = other.den.leading().recip();
            let num = self
                .num
                .scale(&ca)
                .shift_up(k - a)
                .add(&other.num.scale(&cb).shift_up(k - b));
            return Self::new(num, QPoly::monomial(BigRational::one(), k));
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(num, self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    /// `None` on zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::new(self.den.clone(), self.num.clone()))
    }

    /// Evaluates numerator and denominator separately with `eval`, a ring
    /// homomorphism from ℚ[q]; returns `(num_value, den_value)`.
    pub fn eval_parts<T>(&self, eval: impl Fn(&QPoly) -> T) -> (T, T) {
        (eval(&self.num), eval(&self.den))
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_is_structural() {
        // (q^2 - 1)/(2q - 2) == (q + 1)/2
        let a = RatFunc::new(QPoly::from_ints(&[-1, 0, 1]), QPoly::from_ints(&[-2, 2]));
        let b = RatFunc::new(QPoly::from_ints(&[1, 1]), QPoly::from_ints(&[2]));
        assert_eq!(a, b);
        // sign lives in the numerator
        let c = RatFunc::new(QPoly::from_ints(&[1]), QPoly::from_ints(&[0, -3]));
        assert_eq!(c.denominator(), &QPoly::from_ints(&[0, 3]));
        assert_eq!(c.numerator(), &QPoly::from_ints(&[-1]));
    }

    #[test]
    fn laurent_fast_path_agrees_with_general_addition() {
        let a = RatFunc::q_power(-2);
        let b = RatFunc::new(QPoly::from_ints(&[1, 5]), QPoly::from_ints(&[0, 0, 0, 7]));
        let fast = a.add(&b);
        let slow = RatFunc::new(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den));
        assert_eq!(fast, slow);
    }

    #[test]
    fn inverse_of_q_minus_one() {
        let x = RatFunc::from_poly(QPoly::from_ints(&[-1, 1]));
        assert!(x.mul(&x.inv().unwrap()).is_one());
        assert!(RatFunc::zero().inv().is_none());
    }
}
