//! Chebyshev polynomials of the second kind over ℚ.
//!
//! Every identity that involves `√q` is restated in a `√q`-free form: the
//! generating function is checked in the variable `w = √q z`, and the moment
//! formulas rely on `U_n` having only monomials of the parity of `n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{rat, sqrt_bracket, RationalPolynomial};

/// `U_0 ..= U_n` by the three-term recurrence `U_{k+1} = 2x U_k − U_{k−1}`.
pub fn chebyshev_u_upto(n: usize) -> Vec<RationalPolynomial> {
    let two_x = RationalPolynomial::from_i64(&[0, 2]);
    let mut out = vec![RationalPolynomial::one()];
    if n >= 1 {
        out.push(two_x.clone());
    }
    for k in 2..=n {
        let next = &(&two_x * &out[k - 1]) - &out[k - 2];
        out.push(next);
    }
    out
}

pub fn chebyshev_u(n: usize) -> RationalPolynomial {
    chebyshev_u_upto(n).pop().unwrap()
}

/// `C_n = U_n − q⁻¹ U_{n−2}` for `n ≥ 2`, the integrand of the moment formula
/// for `γ_n`.
pub fn cogrowth_kernel(n: usize, q: usize) -> RationalPolynomial {
    assert!(n >= 2, "the cogrowth kernel needs n ≥ 2");
    let us = chebyshev_u_upto(n);
    let q_inv = BigRational::new(BigInt::one(), BigInt::from(q));
    &us[n] - &us[n - 2].scale(&q_inv)
}

/// Whether every monomial of `p` has degree `≡ parity (mod 2)`.
pub fn has_parity(p: &RationalPolynomial, parity: usize) -> bool {
    p.coeffs().iter().enumerate().all(|(k, c)| c.is_zero() || k % 2 == parity % 2)
}

fn rat_pow(x: &BigRational, e: i64) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

/// Checks `U_n((t + t⁻¹)/2) = (t^{n+1} − t^{−n−1}) / (t − t⁻¹)` exactly.
///
/// Panics if `t` is `0` or `±1`.
pub fn closed_form_check(n: usize, t: &BigRational) -> bool {
    closed_form_check_with(&chebyshev_u(n), n, t)
}

/// [`closed_form_check`] with `U_n` supplied by the caller.
pub fn closed_form_check_with(u_n: &RationalPolynomial, n: usize, t: &BigRational) -> bool {
    assert!(!t.is_zero() && !t.abs().is_one(), "t must avoid 0 and ±1");
    let t_inv = t.recip();
    let x = (t + &t_inv) / rat(2);
    let lhs = u_n.eval(&x);
    let e = n as i64 + 1;
    let rhs = (rat_pow(t, e) - rat_pow(t, -e)) / (t - &t_inv);
    lhs == rhs
}

/// Truncated quotient of two power series with polynomial coefficients; the
/// constant term of `den` must be 1.
fn divide_series(
    num: &[RationalPolynomial],
    den: &[RationalPolynomial],
    order: usize,
) -> Vec<RationalPolynomial> {
    assert!(den.first().is_some_and(|d| *d == RationalPolynomial::one()));
    let mut quot: Vec<RationalPolynomial> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        let mut c = num.get(n).cloned().unwrap_or_else(RationalPolynomial::zero);
        for k in 1..=n.min(den.len() - 1) {
            c = &c - &(&den[k] * &quot[n - k]);
        }
        quot.push(c);
    }
    quot
}

/// Checks `Σ_{n≤N} U_n(x) wⁿ ≡ 1 / (1 − 2xw + w²) mod w^{N+1}` by formal
/// division in `ℚ[x][[w]]`. With `w = √q z` this is the `√q`-free form of the
/// generating function `1/(1 − 2√q xz + qz²) = Σ U_n(x) q^{n/2} zⁿ`.
pub fn generating_identity_check(order: usize) -> bool {
    let den = [
        RationalPolynomial::one(),
        RationalPolynomial::from_i64(&[0, -2]),
        RationalPolynomial::one(),
    ];
    let quot = divide_series(&[RationalPolynomial::one()], &den, order);
    quot.iter().zip(chebyshev_u_upto(order)).all(|(a, b)| *a == b)
}

/// Checks the growth bounds `|U_m(x)| ≤ m + 1` on `[0, 1]` and
/// `|U_m(x)| ≤ (m + 1)(x + √(x² − 1))^m` for `x ≥ 1`. The majorant is evaluated
/// exactly with `√(x² − 1)` replaced by a rational upper bound. Negative `x`
/// is handled through `|U_m(−x)| = |U_m(x)|`.
pub fn growth_bound_check(m: usize, x: &BigRational) -> bool {
    growth_bound_check_with(&chebyshev_u(m), m, x)
}

/// [`growth_bound_check`] with `U_m` supplied by the caller.
pub fn growth_bound_check_with(u_m: &RationalPolynomial, m: usize, x: &BigRational) -> bool {
    let ax = x.abs();
    let lhs = u_m.eval(&ax).abs();
    let m1 = rat(m as i64 + 1);
    if ax <= BigRational::one() {
        return lhs <= m1;
    }
    let (_, s_hi) = sqrt_bracket(&(&ax * &ax - BigRational::one()), 128);
    let rhs = m1 * rat_pow(&(ax + s_hi), m as i64);
    lhs <= rhs
}

/// `U_0(x) ..= U_n(x)` in floating point.
pub fn chebyshev_u_values_f64(n: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(2.0 * x);
    }
    for k in 2..=n {
        out.push(2.0 * x * out[k - 1] - out[k - 2]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;
    use proptest::prelude::*;

    fn binomial(n: u64, k: u64) -> BigInt {
        (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
    }

    /// Explicit sum `U_n(x) = Σ_k (−1)^k C(n−k, k) (2x)^{n−2k}`.
    fn explicit_u(n: usize) -> RationalPolynomial {
        let mut coeffs = vec![BigRational::zero(); n + 1];
        for k in 0..=n / 2 {
            let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let c = sign * binomial((n - k) as u64, k as u64) * BigInt::from(2).pow((n - 2 * k) as u32);
            coeffs[n - 2 * k] = BigRational::from_integer(c);
        }
        RationalPolynomial::new(coeffs)
    }

    #[test]
    fn small_cases() {
        assert_eq!(chebyshev_u(0), RationalPolynomial::one());
        assert_eq!(chebyshev_u(2), RationalPolynomial::from_i64(&[-1, 0, 4]));
        assert_eq!(chebyshev_u(3).eval(&rat(1)), rat(4));
        assert_eq!(chebyshev_u(3), RationalPolynomial::from_i64(&[0, -4, 0, 8]));
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for (n, u) in chebyshev_u_upto(50).iter().enumerate() {
            assert_eq!(*u, explicit_u(n), "n = {n}");
            assert_eq!(u.degree(), Some(n));
            assert_eq!(*u.leading().unwrap(), BigRational::from_integer(BigInt::from(2).pow(n as u32)));
            assert!(has_parity(u, n));
            // U_n(−x) = (−1)^n U_n(x)
            let reflected = u.reflect();
            if n % 2 == 0 {
                assert_eq!(reflected, *u);
            } else {
                assert_eq!(reflected, -u);
            }
            assert_eq!(u.eval(&rat(1)), rat(n as i64 + 1));
        }
    }

    #[test]
    fn closed_form_examples() {
        assert!(closed_form_check(1, &rat(2)));
        assert_eq!(chebyshev_u(1).eval(&ratio(5, 4)), ratio(5, 2));
        assert!(closed_form_check(0, &ratio(-7, 3)));
        assert!(closed_form_check(5, &rat(3)));
    }

    #[test]
    fn generating_identity() {
        for order in [1, 3, 25] {
            assert!(generating_identity_check(order));
        }
    }

    #[test]
    fn cogrowth_kernel_support() {
        let c2 = cogrowth_kernel(2, 3);
        assert_eq!(c2, RationalPolynomial::new(vec![ratio(-4, 3), rat(0), rat(4)]));
        for n in 2..=30 {
            assert!(has_parity(&cogrowth_kernel(n, 3), n));
            assert!(has_parity(&cogrowth_kernel(n, 5), n));
        }
    }

    #[test]
    fn growth_bound_examples() {
        assert!(growth_bound_check(4, &rat(1)));
        assert_eq!(chebyshev_u(3).eval(&ratio(1, 2)), rat(-1));
        assert!(growth_bound_check(3, &ratio(1, 2)));
        assert!(growth_bound_check(6, &ratio(3, 2)));
        for (m, u) in chebyshev_u_upto(50).iter().enumerate() {
            for x in [ratio(0, 1), ratio(1, 3), ratio(1, 1), ratio(9, 8), ratio(7, 3), ratio(-5, 4)] {
                assert!(growth_bound_check_with(u, m, &x), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn float_values_agree_with_exact() {
        let x = ratio(7, 5);
        let exact = chebyshev_u_upto(20);
        let approx = chebyshev_u_values_f64(20, 1.4);
        for (e, a) in exact.iter().zip(approx) {
            let ev: f64 = num_traits::ToPrimitive::to_f64(&e.eval(&x)).unwrap();
            assert!((ev - a).abs() <= 1e-12 * ev.abs().max(1.0));
        }
    }

    fn nontrivial_t() -> impl Strategy<Value = BigRational> {
        (-60i64..60, 1i64..40)
            .prop_map(|(n, d)| ratio(n, d))
            .prop_filter("t avoids 0 and ±1", |t| !t.is_zero() && !t.abs().is_one())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]
        #[test]
        fn closed_form_matches_recurrence(t in nontrivial_t()) {
            for (n, u) in chebyshev_u_upto(50).iter().enumerate() {
                prop_assert!(closed_form_check_with(u, n, &t));
            }
        }
    }
}
