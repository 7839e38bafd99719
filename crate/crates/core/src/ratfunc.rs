//! Rational functions over ℚ in lowest terms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::poly::RationalPolynomial;
use crate::series::PowerSeries;

/// `num / den` with `gcd(num, den) = 1` and `den` monic, so equal functions
/// have equal representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: RationalPolynomial,
    den: RationalPolynomial,
}

impl RationalFunction {
    /// Panics if `den` is zero.
    pub fn new(num: RationalPolynomial, den: RationalPolynomial) -> RationalFunction {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalFunction { num, den: RationalPolynomial::one() };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides numerator");
        let mut den = den.div_exact(&g).expect("gcd divides denominator");
        let lead = den.leading().unwrap().recip();
        num = num.scale(&lead);
        den = den.scale(&lead);
        RationalFunction { num, den }
    }

    pub fn from_poly(p: RationalPolynomial) -> RationalFunction {
        RationalFunction::new(p, RationalPolynomial::one())
    }

    pub fn numerator(&self) -> &RationalPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &RationalPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn sub(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &(&self.num * &other.den) - &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &other.num, &self.den * &other.den)
    }

    /// Panics if `other` is zero.
    pub fn div(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    /// `f((a z + b) / (c z + d))`. Panics if `ad − bc = 0`.
    pub fn compose_mobius(
        &self,
        a: &BigRational,
        b: &BigRational,
        c: &BigRational,
        d: &BigRational,
    ) -> RationalFunction {
        assert!(!(a * d - b * c).is_zero(), "degenerate Möbius map");
        let top = RationalPolynomial::new(vec![b.clone(), a.clone()]);
        let bottom = RationalPolynomial::new(vec![d.clone(), c.clone()]);
        let k = self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0));
        // p(top/bottom) · bottom^k = Σ p_j top^j bottom^{k−j}
        let homogenize = |p: &RationalPolynomial| {
            let mut acc = RationalPolynomial::zero();
            for (j, pj) in p.coeffs().iter().enumerate() {
                if pj.is_zero() {
                    continue;
                }
                let term = &top.pow(j) * &bottom.pow(k - j);
                acc = &acc + &term.scale(pj);
            }
            acc
        };
        RationalFunction::new(homogenize(&self.num), homogenize(&self.den))
    }

    /// Taylor coefficients at 0 through `z^order`, or `None` if 0 is a pole.
    pub fn taylor(&self, order: usize) -> Option<PowerSeries> {
        PowerSeries::from_poly(&self.num, order).div(&PowerSeries::from_poly(&self.den, order))
    }

    /// Integer coefficient lists `(num, den)` obtained by clearing the common
    /// denominator; the function is `Σ num_k z^k / Σ den_k z^k`.
    pub fn to_integer_coeffs(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let lcm = self
            .num
            .coeffs()
            .iter()
            .chain(self.den.coeffs())
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let clear = |p: &RationalPolynomial| {
            p.coeffs().iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect()
        };
        (clear(&self.num), clear(&self.den))
    }

    pub fn from_integer_coeffs(num: &[BigInt], den: &[BigInt]) -> Option<RationalFunction> {
        let den = RationalPolynomial::from_integers(den);
        (!den.is_zero()).then(|| RationalFunction::new(RationalPolynomial::from_integers(num), den))
    }
}

#[derive(Serialize, Deserialize)]
struct RationalFunctionFile {
    numerator: Vec<String>,
    denominator: Vec<String>,
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let (n, d) = self.to_integer_coeffs();
        RationalFunctionFile {
            numerator: n.iter().map(ToString::to_string).collect(),
            denominator: d.iter().map(ToString::to_string).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let file = RationalFunctionFile::deserialize(deserializer)?;
        let parse = |v: &[String]| -> Result<Vec<BigInt>, D::Error> {
            v.iter().map(|s| s.parse::<BigInt>().map_err(D::Error::custom)).collect()
        };
        RationalFunction::from_integer_coeffs(&parse(&file.numerator)?, &parse(&file.denominator)?)
            .ok_or_else(|| D::Error::custom("zero denominator"))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{rat, ratio};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_i64(c)
    }

    #[test]
    fn canonical_form() {
        // (z² − 1) / (2z − 2) = (z + 1) / 2
        let f = RationalFunction::new(p(&[-1, 0, 1]), p(&[-2, 2]));
        assert_eq!(f.numerator(), &RationalPolynomial::new(vec![ratio(1, 2), ratio(1, 2)]));
        assert_eq!(f.denominator(), &RationalPolynomial::one());
        assert_eq!(f, RationalFunction::new(p(&[1, 1]), p(&[2])));
    }

    #[test]
    fn mobius_inversion() {
        // f(z) = z / (1 − 3z²) satisfies f(1/(3z)) = −f(z)
        let f = RationalFunction::new(p(&[0, 1]), p(&[1, 0, -3]));
        let g = f.compose_mobius(&rat(0), &rat(1), &rat(3), &rat(0));
        assert_eq!(g, RationalFunction::new(p(&[0, -1]), p(&[1, 0, -3])));
    }

    #[test]
    fn taylor_coefficients() {
        let f = RationalFunction::new(p(&[1]), p(&[1, -1, -1]));
        let fib: Vec<_> = [1, 1, 2, 3, 5, 8, 13].iter().map(|&x| rat(x)).collect();
        assert_eq!(f.taylor(6).unwrap().coeffs(), &fib[..]);
        assert!(RationalFunction::new(p(&[1]), p(&[0, 1])).taylor(3).is_none());
    }

    #[test]
    fn json_round_trip() {
        let f = RationalFunction::new(RationalPolynomial::new(vec![ratio(1, 3), rat(2)]), p(&[5, 0, 7]));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"numerator":["1","6"],"denominator":["15","0","21"]}"#);
        assert_eq!(serde_json::from_str::<RationalFunction>(&s).unwrap(), f);
        assert!(serde_json::from_str::<RationalFunction>(r#"{"numerator":["1"],"denominator":["0"]}"#).is_err());
    }

    fn poly() -> impl Strategy<Value = RationalPolynomial> {
        prop::collection::vec(-6i64..6, 1..5).prop_map(|c| p(&c))
    }

    fn nonzero_poly() -> impl Strategy<Value = RationalPolynomial> {
        poly().prop_filter("nonzero", |q| !q.is_zero())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn field_laws(a in poly(), b in nonzero_poly(), c in poly(), d in nonzero_poly()) {
            let f = RationalFunction::new(a, b);
            let g = RationalFunction::new(c, d);
            prop_assert_eq!(f.add(&g).sub(&g), f.clone());
            if !g.is_zero() {
                prop_assert_eq!(f.mul(&g).div(&g), f.clone());
            }
        }

        #[test]
        fn mobius_involution(a in poly(), b in nonzero_poly(), q in 1i64..8) {
            let f = RationalFunction::new(a, b);
            let (z0, one, qq) = (rat(0), rat(1), rat(q));
            let twice = f.compose_mobius(&z0, &one, &qq, &z0).compose_mobius(&z0, &one, &qq, &z0);
            prop_assert_eq!(twice, f);
        }
    }
}
