//! Exact verification of the cogrowth generating-function identities.
//!
//! Everything here is over ℚ. Identities that carry `√q` are checked in a
//! rationalized form; for the return-probability identity
//!
//! ```text
//! γ(z)/(1−z²) = Σ μ^{*n}(e) · (2√q z/(qz²+1))^{n+1} / (2√q z)
//! ```
//!
//! substituting `μ^{*n}(e) = W_n (2√q)^{−n}` and multiplying by `z` gives
//! `z γ(z)/(1−z²) = Σ W_n z^{n+1}/(qz²+1)^{n+1}`, in which every power of
//! `2√q` cancels.

mod singularity;

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::chebyshev::{chebyshev_u_upto, has_parity};
use crate::counting::CountTable;
use crate::error::GroupError;
use crate::groups::MarkedGroup;
use crate::linalg::RatMatrix;
use crate::poly::{rat, RationalPolynomial};
use crate::ratfunc::RationalFunction;

pub use singularity::{singularity_analysis, Pole, SingularityReport, SpectralPart, SpectralTerm};

/// Outcome of a coefficient-by-coefficient comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    /// Lowest order at which the two sides differ, with `lhs − rhs` there.
    pub first_mismatch: Option<(usize, BigRational)>,
    pub max_abs: BigRational,
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

fn big(n: &BigUint) -> BigInt {
    BigInt::from(n.clone())
}

/// Compares both sides of `z γ(z)/(1−z²) = Σ W_n z^{n+1}/(qz²+1)^{n+1}` at the
/// orders `0 ..= N+1`, which involve exactly `γ_0..γ_N` and `W_0..W_N`.
///
/// Panics if `order > t.n_max()`.
pub fn grigorchuk_identity_check(t: &CountTable, order: usize) -> Residual {
    assert!(order <= t.n_max(), "order {order} exceeds the table length {}", t.n_max());
    let top = order + 1;
    let neg_q = -BigInt::from(t.q());

    // z/(1−z²) · Σ γ_n zⁿ has coefficient Σ_{j≥0} γ_{m−1−2j} at z^m.
    let mut lhs = vec![BigInt::zero(); top + 1];
    for m in 1..=top {
        lhs[m] = (0..m).rev().step_by(2).map(|k| big(&t.gamma[k])).sum();
    }

    // 1/(1+qz²)^{n+1} = Σ_j C(n+j, j) (−q)^j z^{2j}
    let mut rhs = vec![BigInt::zero(); top + 1];
    for n in 0..top {
        let w = big(&t.walk[n]);
        if w.is_zero() {
            continue;
        }
        let mut c = BigInt::one();
        let mut j = 0;
        while n + 1 + 2 * j <= top {
            rhs[n + 1 + 2 * j] += &w * &c;
            j += 1;
            c = c * BigInt::from(n + j) / BigInt::from(j) * &neg_q;
        }
    }

    let mut first_mismatch = None;
    let mut max_abs = BigInt::zero();
    for (m, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
        let d = l - r;
        if !d.is_zero() && first_mismatch.is_none() {
            first_mismatch = Some((m, BigRational::from_integer(d.clone())));
        }
        if d.abs() > max_abs {
            max_abs = d.abs();
        }
    }
    Residual { first_mismatch, max_abs: BigRational::from_integer(max_abs) }
}

/// `γ_n` predicted from return counts through the Chebyshev moment formula:
/// with `C_n = U_n − q⁻¹ U_{n−2} = Σ c_{n,k} x^k` and moments
/// `∫ x^k dσ = W_k (2√q)^{−k}`, `γ_n = Σ c_{n,k} W_k q^{(n−k)/2} 2^{−k}`.
/// Only `k ≡ n (mod 2)` contributes, so the result is rational.
fn moment_prediction(
    u_n: &RationalPolynomial,
    u_n2: &RationalPolynomial,
    t: &CountTable,
    n: usize,
) -> BigRational {
    let q = t.q();
    let kernel = u_n - &u_n2.scale(&BigRational::new(BigInt::one(), BigInt::from(q)));
    assert!(has_parity(&kernel, n), "C_{n} has a monomial of the wrong parity");
    let qb = BigInt::from(q);
    let mut sum = BigRational::zero();
    for (k, c) in kernel.coeffs().iter().enumerate() {
        if c.is_zero() || t.walk[k].is_zero() {
            continue;
        }
        let scale = BigRational::new(qb.pow(((n - k) / 2) as u32), BigInt::from(2).pow(k as u32));
        sum += c * BigRational::from_integer(big(&t.walk[k])) * scale;
    }
    sum
}

/// Checks `γ_n` against the Chebyshev moment formula. Panics unless
/// `2 ≤ n ≤ t.n_max()`.
pub fn chebyshev_moment_check(t: &CountTable, n: usize) -> bool {
    assert!((2..=t.n_max()).contains(&n), "moment check needs 2 ≤ n ≤ n_max");
    let us = chebyshev_u_upto(n);
    moment_prediction(&us[n], &us[n - 2], t, n) == BigRational::from_integer(big(&t.gamma[n]))
}

/// Indices `n ∈ [2, upto]` at which the moment formula fails.
pub fn chebyshev_moment_failures(t: &CountTable, upto: usize) -> Vec<usize> {
    let upto = upto.min(t.n_max());
    if upto < 2 {
        return Vec::new();
    }
    let us = chebyshev_u_upto(upto);
    (2..=upto)
        .filter(|&n| moment_prediction(&us[n], &us[n - 2], t, n) != BigRational::from_integer(big(&t.gamma[n])))
        .collect()
}

/// `Σ_j p_j z^{k−j}(1+qz²)^j`, i.e. `z^k p(u)` at `u = (1+qz²)/z`. Requires
/// `deg p ≤ k`.
pub(crate) fn joukowski_lift(p: &RationalPolynomial, k: usize, q: usize) -> RationalPolynomial {
    assert!(p.degree().unwrap_or(0) <= k);
    let base = RationalPolynomial::from_i64(&[1, 0, q as i64]);
    let mut acc = RationalPolynomial::zero();
    let mut power = RationalPolynomial::one();
    for (j, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            let term = &power * &RationalPolynomial::monomial(c.clone(), k - j);
            acc = &acc + &term;
        }
        power = &power * &base;
    }
    acc
}

/// Inverse of [`joukowski_lift`]: the `p` with `deg p ≤ k` and
/// `z^k p(u) = e(z)`, if one exists.
pub(crate) fn joukowski_project(e: &RationalPolynomial, k: usize, q: usize) -> Option<RationalPolynomial> {
    let base = RationalPolynomial::from_i64(&[1, 0, q as i64]);
    let mut rest = e.clone();
    let mut p = vec![BigRational::zero(); k + 1];
    // z^{k−j}(1+qz²)^j has lowest term z^{k−j}, so peel off j = k, k−1, …
    for m in 0..=k {
        let j = k - m;
        let c = rest.coeff(m);
        if c.is_zero() {
            continue;
        }
        let term = &base.pow(j) * &RationalPolynomial::monomial(c.clone(), m);
        rest = &rest - &term;
        p[j] = c;
    }
    rest.is_zero().then(|| RationalPolynomial::new(p))
}

/// Characteristic polynomial of the adjacency operator `Σ (s_i + s_i⁻¹)`
/// acting on the regular representation of a finite group, with the group
/// order.
pub fn adjacency_charpoly(g: &MarkedGroup, budget: usize) -> Result<(usize, RationalPolynomial), GroupError> {
    let elems = g.elements(budget)?;
    let index: HashMap<_, _> = elems.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
    let n = elems.len();
    let mut a = vec![0i64; n * n];
    for (i, x) in elems.iter().enumerate() {
        for code in 0..g.letter_count() {
            let y = g.step(x, code)?;
            a[i * n + index[&y]] += 1;
        }
    }
    Ok((n, RatMatrix::from_integers(n, &a).characteristic_polynomial()))
}

/// `γ(z) = (1−z²)/(|G| z) · p′(u)/p(u)` at `u = (qz²+1)/z`, as a polynomial
/// quotient: with `d = deg p`, `z^d p(u)` and `z^{d−1} p′(u)` are polynomials.
pub fn cogrowth_series_from_charpoly(group_order: usize, q: usize, p: &RationalPolynomial) -> RationalFunction {
    let d = p.degree().expect("nonzero characteristic polynomial");
    let den = joukowski_lift(p, d, q).scale(&rat(group_order as i64));
    let num = &joukowski_lift(&p.derivative(), d - 1, q) * &RationalPolynomial::from_i64(&[1, 0, -1]);
    RationalFunction::new(num, den)
}

/// Exact cogrowth series of a finite marked group.
pub fn cogrowth_series_finite(g: &MarkedGroup, budget: usize) -> Result<RationalFunction, GroupError> {
    if !g.is_finite() {
        return Err(GroupError::NotFinite(g.name().to_string()));
    }
    let (order, p) = adjacency_charpoly(g, budget)?;
    Ok(cogrowth_series_from_charpoly(order, g.q(), &p))
}

/// `Σ W_n tⁿ = (1/|G|) Σ_λ m_λ/(1 − λt)`, i.e. `rev(p′)/(|G| rev(p))` with the
/// coefficient lists of `p′` and `p` reversed at degrees `d − 1` and `d`.
pub fn return_series_from_charpoly(group_order: usize, p: &RationalPolynomial) -> RationalFunction {
    let d = p.degree().expect("nonzero characteristic polynomial");
    let reversed = |poly: &RationalPolynomial, deg: usize| {
        RationalPolynomial::new((0..=deg).map(|k| poly.coeff(deg - k)).collect())
    };
    let den = reversed(p, d).scale(&rat(group_order as i64));
    RationalFunction::new(reversed(&p.derivative(), d - 1), den)
}

/// `γ_0..γ_N` and `W_0..W_N` of a finite group from the Taylor coefficients of
/// its two rational generating functions.
pub fn count_table_finite(g: &MarkedGroup, n_max: usize, budget: usize) -> Result<CountTable, GroupError> {
    if !g.is_finite() {
        return Err(GroupError::NotFinite(g.name().to_string()));
    }
    let (order, p) = adjacency_charpoly(g, budget)?;
    let to_naturals = |f: &RationalFunction| -> Vec<BigUint> {
        let series = f.taylor(n_max).expect("generating functions are regular at 0");
        series
            .coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer() && !c.is_negative(), "non-natural coefficient {c}");
                c.to_integer().to_biguint().unwrap()
            })
            .collect()
    };
    Ok(CountTable {
        group: g.name().to_string(),
        rank: g.rank(),
        gamma: to_naturals(&cogrowth_series_from_charpoly(order, g.q(), &p)),
        walk: to_naturals(&return_series_from_charpoly(order, &p)),
    })
}

/// `Φ(z) = z γ(z)/(1−z²)`.
pub fn phi(gamma: &RationalFunction) -> RationalFunction {
    gamma.mul(&RationalFunction::new(
        RationalPolynomial::x(),
        RationalPolynomial::from_i64(&[1, 0, -1]),
    ))
}

/// Checks `Φ(1/(qz)) = Φ(z)`.
pub fn functional_equation_check(gamma: &RationalFunction, q: usize) -> bool {
    let f = phi(gamma);
    let (zero, one) = (rat(0), rat(1));
    f.compose_mobius(&zero, &one, &rat(q as i64), &zero) == f
}
