//! Floating-point estimators for the spectral radius `ρ`, the cogrowth
//! exponent `γ` and the ratio limit `γ_{2n+2}/γ_{2n} → γ²`, with diagnostics
//! of the spectral-measure argument behind them.
//!
//! The return counts use the unnormalized step measure, so
//! `μ^{*n}(e) = W_n/(2√q)ⁿ` and `ρ > 1`. Even-parity groups have `W_odd = 0`;
//! every estimator works on even indices only.

mod diagnostics;
mod report;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::counting::CountTable;
use crate::error::{Error, GroupError};
use crate::exact_series::adjacency_charpoly;
use crate::groups::MarkedGroup;
use crate::poly::RationalPolynomial;
use crate::roots::isolate_real_roots;

pub use diagnostics::{
    discrete_ratio_lemma_check, h_rho0, integral_split_diagnostics, remark_bound_probe, IntegralSplit, LemmaReport,
    RemarkProbe,
};
pub use report::{
    amenability_diagnostic, asymptotics_report, ratio_limit_experiment, AmenabilityReport, AsymptoticsReport,
    RatioLimitReport, RatioRow, Thresholds, Verdict, CSV_HEADER,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// `x_{2n}^{1/2n}` at the largest usable `2n`.
    Root,
    /// `(x_{2n+2}/x_{2n})^{1/2}` at the largest usable `2n + 2`.
    EvenRatio,
}

/// An estimate together with the largest sequence index it used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub index: usize,
}

/// Natural logarithm of a positive big integer, valid far beyond `f64` range.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `a / b` correctly rounded.
pub fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    BigRational::new(a.clone().into(), b.clone().into()).to_f64().unwrap_or(f64::NAN)
}

/// `(ρ + √(ρ² − 1))`, the value of `t` with `(t + t⁻¹)/2 = ρ`.
pub fn joukowski_root(x: f64) -> f64 {
    x + (x * x - 1.0).max(0.0).sqrt()
}

/// `√q (ρ + √(ρ² − 1))`, the cogrowth exponent implied by `ρ`.
pub fn gamma_from_rho(rho: f64, q: usize) -> f64 {
    (q as f64).sqrt() * joukowski_root(rho)
}

/// The spectral radius of a finite marked group, `(q+1)/(2√q)`.
pub fn finite_rho(q: usize) -> f64 {
    (q as f64 + 1.0) / (2.0 * (q as f64).sqrt())
}

fn even_positive(seq: &[BigUint]) -> Vec<usize> {
    (1..)
        .map(|n| 2 * n)
        .take_while(|&k| k < seq.len())
        .filter(|&k| !seq[k].is_zero())
        .collect()
}

fn root_estimate(seq: &[BigUint]) -> Option<Estimate> {
    let k = *even_positive(seq).last()?;
    Some(Estimate { value: (ln_big(&seq[k]) / k as f64).exp(), index: k })
}

fn ratio_estimate(seq: &[BigUint]) -> Option<Estimate> {
    let k = (2..seq.len()).rev().find(|&k| k % 2 == 0 && !seq[k].is_zero() && !seq[k - 2].is_zero())?;
    Some(Estimate { value: ratio_f64(&seq[k], &seq[k - 2]).sqrt(), index: k })
}

/// `ρ` from the return counts.
pub fn spectral_radius_estimate(t: &CountTable, method: Method) -> Result<Estimate, Error> {
    if t.n_max() < 4 {
        return Err(Error::InsufficientData(format!("n_max = {} < 4", t.n_max())));
    }
    let norm = 2.0 * (t.q() as f64).sqrt();
    let est = match method {
        Method::Root => root_estimate(&t.walk),
        Method::EvenRatio => ratio_estimate(&t.walk),
    }
    .ok_or_else(|| Error::InsufficientData("no positive even return counts".into()))?;
    Ok(Estimate { value: est.value / norm, index: est.index })
}

/// `γ` from the cogrowth coefficients.
pub fn cogrowth_exponent_estimate(t: &CountTable, method: Method) -> Result<Estimate, Error> {
    if even_positive(&t.gamma).is_empty() {
        return Err(Error::TrivialKernel);
    }
    match method {
        Method::Root => root_estimate(&t.gamma),
        Method::EvenRatio => ratio_estimate(&t.gamma),
    }
    .ok_or_else(|| Error::InsufficientData("need two consecutive positive even coefficients".into()))
}

/// Pairs `(k, j)` with `W_{k+j} < W_k W_j`. Concatenating identity words
/// makes this empty for every genuine table.
pub fn supermultiplicativity_violations(t: &CountTable) -> Vec<(usize, usize)> {
    let n = t.n_max();
    let mut out = Vec::new();
    for k in 1..=n {
        for j in k..=n - k {
            if t.walk[k + j] < &t.walk[k] * &t.walk[j] {
                out.push((k, j));
            }
        }
    }
    out
}

/// An eigenvalue `λ` of the adjacency operator of a finite group, with its
/// position `x = λ/(2√q)` on the support of the spectral measure.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub eigenvalue: f64,
    pub eigenvalue_exact: Option<BigRational>,
    pub multiplicity: usize,
    pub x: f64,
    /// `σ({x}) = multiplicity / |G|`.
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    pub q: usize,
    /// `2√q`.
    pub normalization: f64,
    /// `m_k = W_k/(2√q)^k = μ^{*k}(e)`.
    pub moments: Vec<f64>,
    pub rho: f64,
    /// `(1 + ρ)/2`.
    pub rho0: f64,
    pub atoms: Option<Vec<Atom>>,
}

impl SpectralData {
    /// Moments from the counts; `ρ` from the even-ratio estimate.
    pub fn from_counts(t: &CountTable) -> Result<SpectralData, Error> {
        let rho = spectral_radius_estimate(t, Method::EvenRatio)?.value;
        Ok(SpectralData::build(t, rho, None))
    }

    /// Atoms from the characteristic polynomial of the adjacency operator;
    /// `ρ` is the largest `|x|`.
    pub fn with_atoms(t: &CountTable, group_order: usize, charpoly: &RationalPolynomial) -> SpectralData {
        let norm = 2.0 * (t.q() as f64).sqrt();
        let width = BigRational::new(BigInt::one(), BigInt::one() << 62);
        let mut atoms = Vec::new();
        for (mult, factor) in charpoly.squarefree_decomposition() {
            for root in isolate_real_roots(&factor, &width) {
                let lambda = root.approx();
                atoms.push(Atom {
                    eigenvalue: lambda,
                    eigenvalue_exact: root.exact,
                    multiplicity: mult,
                    x: lambda / norm,
                    weight: mult as f64 / group_order as f64,
                });
            }
        }
        atoms.sort_by(|a, b| a.eigenvalue.total_cmp(&b.eigenvalue));
        let rho = atoms.iter().map(|a| a.x.abs()).fold(0.0, f64::max);
        SpectralData::build(t, rho, Some(atoms))
    }

    pub fn finite(g: &MarkedGroup, t: &CountTable, budget: usize) -> Result<SpectralData, GroupError> {
        let (order, p) = adjacency_charpoly(g, budget)?;
        Ok(SpectralData::with_atoms(t, order, &p))
    }

    fn build(t: &CountTable, rho: f64, atoms: Option<Vec<Atom>>) -> SpectralData {
        let norm = 2.0 * (t.q() as f64).sqrt();
        let moments = t
            .walk
            .iter()
            .enumerate()
            .map(|(k, w)| if w.is_zero() { 0.0 } else { (ln_big(w) - k as f64 * norm.ln()).exp() })
            .collect();
        SpectralData { q: t.q(), normalization: norm, moments, rho, rho0: (1.0 + rho) / 2.0, atoms }
    }

    /// Atoms folded onto `[0, ρ]`: `x` and `−x` merge. The atom at 0 keeps its
    /// own mass, so that `∫ f dσ = ∫ f dσ̃` for even `f`.
    pub fn folded_atoms(&self) -> Option<Vec<(f64, f64)>> {
        let atoms = self.atoms.as_ref()?;
        let mut folded: Vec<(f64, f64)> = Vec::new();
        for a in atoms {
            let x = a.x.abs();
            match folded.iter_mut().find(|(y, _)| (y - x).abs() <= 1e-12 * x.max(1.0)) {
                Some(slot) => slot.1 += a.weight,
                None => folded.push((x, a.weight)),
            }
        }
        folded.sort_by(|a, b| a.0.total_cmp(&b.0));
        Some(folded)
    }

    /// `ρ > 1` and non-negative even moments. Only meaningful for a nontrivial
    /// kernel: the free group itself has `ρ = 1`.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.rho.partial_cmp(&1.0) != Some(std::cmp::Ordering::Greater) {
            return Err(format!("spectral radius estimate {} does not exceed 1", self.rho));
        }
        if let Some(k) = self.moments.iter().step_by(2).position(|m| !m.is_finite() || *m < 0.0) {
            return Err(format!("moment m_{} is negative or not finite", 2 * k));
        }
        Ok(())
    }
}
