//! Truncated power series with big-rational coefficients.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::RationalPolynomial;

/// `c_0 + c_1 z + … + c_N z^N  (mod z^{N+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRational>,
}

impl PowerSeries {
    /// Pads with zeros or truncates to exactly `order + 1` coefficients.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> PowerSeries {
        coeffs.resize(order + 1, BigRational::zero());
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> PowerSeries {
        PowerSeries::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> PowerSeries {
        PowerSeries::new(vec![BigRational::one()], order)
    }

    pub fn from_poly(p: &RationalPolynomial, order: usize) -> PowerSeries {
        PowerSeries::new(p.coeffs().to_vec(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    fn common_order(&self, other: &PowerSeries) -> usize {
        self.order().min(other.order())
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.common_order(other);
        PowerSeries::new((0..=n).map(|k| &self.coeffs[k] + &other.coeffs[k]).collect(), n)
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.common_order(other);
        PowerSeries::new((0..=n).map(|k| &self.coeffs[k] - &other.coeffs[k]).collect(), n)
    }

    pub fn scale(&self, c: &BigRational) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.common_order(other);
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Quotient, or `None` when the divisor's constant term vanishes.
    pub fn div(&self, other: &PowerSeries) -> Option<PowerSeries> {
        let n = self.common_order(other);
        let d0 = other.coeffs[0].clone();
        if d0.is_zero() {
            return None;
        }
        let d0_inv = d0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut c = self.coeffs[k].clone();
            for j in 1..=k {
                let d = &other.coeffs[j];
                if !d.is_zero() {
                    c -= d * &out[k - j];
                }
            }
            out.push(c * &d0_inv);
        }
        Some(PowerSeries { coeffs: out })
    }

    /// First index where the two series differ, with the difference.
    pub fn first_difference(&self, other: &PowerSeries) -> Option<(usize, BigRational)> {
        let n = self.common_order(other);
        (0..=n).find_map(|k| {
            let d = &self.coeffs[k] - &other.coeffs[k];
            (!d.is_zero()).then_some((k, d))
        })
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = RationalPolynomial::new(self.coeffs.clone());
        write!(f, "{} + O(x^{})", p, self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    fn s(c: &[i64], order: usize) -> PowerSeries {
        PowerSeries::new(c.iter().map(|&x| rat(x)).collect(), order)
    }

    #[test]
    fn geometric_series() {
        // 1 / (1 - 3z)
        let g = s(&[1], 6).div(&s(&[1, -3], 6)).unwrap();
        assert_eq!(g, s(&[1, 3, 9, 27, 81, 243, 729], 6));
        assert!(s(&[1], 3).div(&s(&[0, 1], 3)).is_none());
    }

    #[test]
    fn first_difference() {
        assert_eq!(s(&[1, 2, 3], 4).first_difference(&s(&[1, 2, 5], 4)), Some((2, rat(-2))));
        assert_eq!(s(&[1, 2], 4).first_difference(&s(&[1, 2], 4)), None);
    }

    fn series(order: usize) -> impl Strategy<Value = PowerSeries> {
        prop::collection::vec(-9i64..9, order + 1).prop_map(move |c| s(&c, order))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn ring_laws(a in series(8), b in series(8), c in series(8)) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn division_inverts_multiplication(a in series(8), mut b in series(8)) {
            b.coeffs[0] = rat(1);
            prop_assert_eq!(a.mul(&b).div(&b).unwrap(), a);
        }
    }
}
