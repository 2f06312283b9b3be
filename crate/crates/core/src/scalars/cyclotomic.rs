//! The cyclotomic field ℚ(ζ_l): elements are polynomials in ζ of degree below
//! φ(l), reduced modulo the l-th cyclotomic polynomial.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{cyclotomic_polynomial, QPoly};

#[derive(Debug)]
pub struct CycloData {
    pub l: u32,
    pub modulus: QPoly,
    /// Reduced representatives of ζ^k for 0 <= k < l.
    zeta_powers: Vec<QPoly>,
}

impl CycloData {
    pub fn new(l: u32) -> Self {
        let modulus = cyclotomic_polynomial(l);
        let zeta_powers = (0..l)
            .map(|k| QPoly::monomial(BigRational::one(), k as usize).divrem(&modulus).1)
            .collect();
        CycloData {
            l,
            modulus,
            zeta_powers,
        }
    }

    pub fn phi(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn reduce(&self, p: &QPoly) -> QPoly {
        match p.degree() {
            Some(d) if d >= self.phi() => p.divrem(&self.modulus).1,
            _ => p.clone(),
        }
    }

    pub fn zeta_power(&self, k: i64) -> QPoly {
        self.zeta_powers[k.rem_euclid(self.l as i64) as usize].clone()
    }

    pub fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&a.mul(b))
    }

    /// Inverse by the extended Euclidean algorithm against the modulus.
    pub fn inv(&self, a: &QPoly) -> Option<QPoly> {
        if a.is_zero() {
            return None;
        }
        let (g, s, _) = a.ext_gcd(&self.modulus);
        // the modulus is irreducible, so any nonzero reduced element is a unit
        debug_assert!(g.is_one());
        Some(self.reduce(&s))
    }

    /// Value of a ℚ-polynomial at ζ.
    pub fn eval_at_zeta(&self, p: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.zeta_power(k as i64).scale(c));
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_three_relations() {
        let f = CycloData::new(3);
        // ζ² = -1 - ζ
        assert_eq!(f.zeta_power(2), QPoly::from_ints(&[-1, -1]));
        assert_eq!(f.zeta_power(3), QPoly::one());
        assert_eq!(f.zeta_power(-1), f.zeta_power(2));
    }

    #[test]
    fn inverse_one_minus_zeta() {
        let f = CycloData::new(3);
        let a = QPoly::from_ints(&[1, -1]);
        let inv = f.inv(&a).unwrap();
        // (1-ζ)^{-1} = (2+ζ)/3
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(inv, QPoly::from_ints(&[2, 1]).scale(&third));
        assert!(f.mul(&a, &inv).is_one());
    }
}
