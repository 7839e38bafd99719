//! Dense univariate polynomials with big-rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients in ascending degree; the last stored coefficient is nonzero and
/// the zero polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalPolynomial {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Rational bracket `lo ≤ √a ≤ hi` with `hi - lo ≤ 2^-bits` relative to the
/// denominator of `a`; `lo == hi` when `a` is a perfect square.
pub fn sqrt_bracket(a: &BigRational, bits: u32) -> (BigRational, BigRational) {
    assert!(!a.is_negative(), "square root of a negative rational");
    let num = a.numer().magnitude();
    let den = a.denom().magnitude();
    // √(n/d) = √(n d) / d, scaled by 2^bits
    let scale = num_bigint::BigUint::one() << bits;
    let radicand = num * den * &scale * &scale;
    let s = radicand.sqrt();
    let denom = BigInt::from(den * &scale);
    let lo = BigRational::new(BigInt::from(s.clone()), denom.clone());
    if &s * &s == radicand {
        return (lo.clone(), lo);
    }
    let hi = BigRational::new(BigInt::from(s + 1u32), denom);
    (lo, hi)
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> RationalPolynomial {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> RationalPolynomial {
        RationalPolynomial::new(coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn from_integers(coeffs: &[BigInt]) -> RationalPolynomial {
        RationalPolynomial::new(coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    pub fn zero() -> RationalPolynomial {
        RationalPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> RationalPolynomial {
        RationalPolynomial::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> RationalPolynomial {
        RationalPolynomial::new(vec![c])
    }

    pub fn x() -> RationalPolynomial {
        RationalPolynomial::monomial(BigRational::one(), 1)
    }

    pub fn monomial(c: BigRational, degree: usize) -> RationalPolynomial {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        RationalPolynomial::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRational) -> RationalPolynomial {
        if c.is_zero() {
            return RationalPolynomial::zero();
        }
        RationalPolynomial { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> RationalPolynomial {
        match self.leading() {
            None => RationalPolynomial::zero(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn derivative(&self) -> RationalPolynomial {
        RationalPolynomial::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * rat(k as i64)).collect(),
        )
    }

    pub fn pow(&self, e: usize) -> RationalPolynomial {
        let mut acc = RationalPolynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self(inner(x))` by Horner's rule.
    pub fn compose(&self, inner: &RationalPolynomial) -> RationalPolynomial {
        let mut acc = RationalPolynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &RationalPolynomial::constant(c.clone());
        }
        acc
    }

    /// `self(-x)`.
    pub fn reflect(&self) -> RationalPolynomial {
        RationalPolynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Euclidean division. Panics on division by zero.
    pub fn div_rem(&self, divisor: &RationalPolynomial) -> (RationalPolynomial, RationalPolynomial) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (RationalPolynomial::zero(), RationalPolynomial::zero());
        };
        if nd < dd {
            return (RationalPolynomial::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (RationalPolynomial::new(quot), RationalPolynomial::new(rem))
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &RationalPolynomial) -> Option<RationalPolynomial> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &RationalPolynomial) -> RationalPolynomial {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Integer polynomial with the same roots: coefficients cleared of denominators
    /// and divided by their content, leading coefficient positive.
    pub fn primitive_part(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
        for c in &mut ints {
            *c = &*c / &content * &sign;
        }
        ints
    }

    /// Square-free decomposition (Yun): `self = c * prod_i f_i^i` with the `f_i`
    /// square-free and pairwise coprime. Returns `(i, f_i)` for nonconstant `f_i`.
    pub fn squarefree_decomposition(&self) -> Vec<(usize, RationalPolynomial)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let mut a = f.gcd(&fp);
        let mut b = f.div_exact(&a).expect("gcd divides");
        let c = fp.div_exact(&a).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            if b.degree() == Some(0) {
                break;
            }
            a = b.gcd(&d);
            let bb = b.div_exact(&a).expect("gcd divides");
            if a.degree().unwrap_or(0) > 0 {
                out.push((i, a.clone()));
            }
            let cc = d.div_exact(&a).expect("gcd divides");
            d = &cc - &bb.derivative();
            b = bb;
            i += 1;
        }
        out
    }
}

impl Add for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn add(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn sub(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn mul(self, rhs: &RationalPolynomial) -> RationalPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalPolynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPolynomial::new(out)
    }
}

impl Neg for &RationalPolynomial {
    type Output = RationalPolynomial;
    fn neg(self) -> RationalPolynomial {
        RationalPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = k == 0 || !abs.is_one();
            if show_coeff {
                if abs.is_integer() {
                    write!(f, "{abs}")?;
                } else {
                    write!(f, "({abs})")?;
                }
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}
