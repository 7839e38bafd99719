use num_traits::Zero;

use super::{joukowski_root, ln_big, SpectralData};
use crate::chebyshev::chebyshev_u_values_f64;
use crate::counting::CountTable;
use crate::error::Error;

/// The folded atomic sums behind `γ_{2n} = qⁿ ∫₀^ρ C_{2n} dσ̃`, split at `ρ₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralSplit {
    pub n: usize,
    pub i_n: f64,
    /// Atoms in `[0, ρ₀]`.
    pub i_n1: f64,
    /// Atoms in `(ρ₀, ρ]`.
    pub i_n2: f64,
    /// Surrogate for `I_{n,2}` built from the dominant part of the closed form.
    pub i_n2_tilde: f64,
    /// `I_{n,2} − Ĩ_{n,2}`, summed atom by atom in a cancellation-free form.
    pub surrogate_gap: f64,
    /// `2(2n+1)(ρ₀ + √(ρ₀² − 1))^{2n}`.
    pub majorant: f64,
    /// Atoms at `x = 1`, where the surrogate integrand is singular.
    pub excluded_atoms: Vec<f64>,
}

impl IntegralSplit {
    pub fn majorant_holds(&self) -> bool {
        self.i_n1.abs() <= self.majorant
    }

    /// `|I_{n,2}/Ĩ_{n,2} − 1|`.
    pub fn surrogate_deviation(&self) -> f64 {
        (self.surrogate_gap / self.i_n2_tilde).abs()
    }

    /// `qⁿ I_n`, which reproduces `γ_{2n}`.
    pub fn gamma_2n(&self, q: usize) -> f64 {
        (q as f64).powi(self.n as i32) * self.i_n
    }
}

/// `C_{2n}(x) = U_{2n}(x) − q⁻¹ U_{2n−2}(x)`. For `x > 1` the closed form
/// `U_m = (t^{m+1} − t^{−m−1})/(t − t⁻¹)` with `t = x + √(x² − 1)` is used.
fn cogrowth_kernel_f64(x: f64, n: usize, q: f64) -> f64 {
    let m = 2 * n;
    if x > 1.0 {
        let t = joukowski_root(x);
        let u = |k: usize| (t.powi(k as i32 + 1) - t.powi(-(k as i32) - 1)) / (t - 1.0 / t);
        u(m) - u(m - 2) / q
    } else {
        let us = chebyshev_u_values_f64(m, x);
        us[m] - us[m - 2] / q
    }
}

/// `t^{2n}(t² − q⁻¹) / (2√(x² − 1) t)` with `t = x + √(x² − 1)`.
fn surrogate_f64(x: f64, n: usize, q: f64) -> f64 {
    let t = joukowski_root(x);
    t.powi(2 * n as i32) * (t * t - 1.0 / q) / (2.0 * (x * x - 1.0).sqrt() * t)
}

/// `C_{2n}(x)` minus the surrogate, `t^{−2n−1}(t²/q − 1)/(t − t⁻¹)`, for `x > 1`.
fn surrogate_gap_f64(x: f64, n: usize, q: f64) -> f64 {
    let t = joukowski_root(x);
    t.powi(-(2 * n as i32) - 1) * (t * t / q - 1.0) / (t - 1.0 / t)
}

pub fn integral_split_diagnostics(s: &SpectralData, n: usize) -> Result<IntegralSplit, Error> {
    if n == 0 {
        return Err(Error::InsufficientData("the integral split needs n ≥ 1".into()));
    }
    let folded = s
        .folded_atoms()
        .ok_or_else(|| Error::InsufficientData("the integral split needs the atoms of a finite group".into()))?;
    let q = s.q as f64;
    let mut out = IntegralSplit {
        n,
        i_n: 0.0,
        i_n1: 0.0,
        i_n2: 0.0,
        i_n2_tilde: 0.0,
        surrogate_gap: 0.0,
        majorant: 2.0 * (2 * n + 1) as f64 * joukowski_root(s.rho0).powi(2 * n as i32),
        excluded_atoms: Vec::new(),
    };
    for (x, w) in folded {
        let c = w * cogrowth_kernel_f64(x, n, q);
        out.i_n += c;
        if x <= s.rho0 {
            out.i_n1 += c;
        } else {
            out.i_n2 += c;
            if x == 1.0 {
                out.excluded_atoms.push(x);
            } else {
                out.i_n2_tilde += w * surrogate_f64(x, n, q);
                out.surrogate_gap += w * surrogate_gap_f64(x, n, q);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaReport {
    /// `∫ f^{n+1} dμ / ∫ fⁿ dμ` for `n = 0..=n_max`.
    pub ratios: Vec<f64>,
    pub limit: f64,
    pub final_error: f64,
    pub converged: bool,
}

/// Ratio sequence of a discrete measure against its limit `max f`.
pub fn discrete_ratio_lemma_check(f_values: &[f64], weights: &[f64], n_max: usize, tolerance: f64) -> LemmaReport {
    assert!(!f_values.is_empty() && f_values.len() == weights.len());
    assert!(f_values.iter().chain(weights).all(|v| *v > 0.0));
    let max = f_values.iter().copied().fold(f64::MIN, f64::max);
    // scaled by max f so that every power stays in [0, 1]
    let moment = |k: i32| -> f64 { f_values.iter().zip(weights).map(|(f, w)| w * (f / max).powi(k)).sum() };
    let ratios: Vec<f64> = (0..=n_max as i32).map(|n| max * moment(n + 1) / moment(n)).collect();
    let final_error = (ratios.last().unwrap() - max).abs();
    LemmaReport { ratios, limit: max, final_error, converged: final_error <= tolerance }
}

/// The constant `h(ρ₀) = [(ρ₀+√(ρ₀²−1))² − q⁻¹] / [2√(ρ₀²−1)(ρ₀+√(ρ₀²−1))]`.
pub fn h_rho0(rho0: f64, q: usize) -> f64 {
    let t = joukowski_root(rho0);
    (t * t - 1.0 / q as f64) / (2.0 * (rho0 * rho0 - 1.0).sqrt() * t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RemarkProbe {
    pub h: f64,
    /// `(n, L_n)` with `L_n = γ_{2n} ρ^{2n} / (γ^{2n} μ^{*2n}(e))`.
    pub rows: Vec<(usize, f64)>,
    pub infimum: f64,
    pub epsilon: f64,
}

impl RemarkProbe {
    pub fn bound_holds(&self) -> bool {
        self.rows.iter().all(|(_, l)| *l <= self.h + self.epsilon)
    }
}

/// Observational probe of `L_n` against `h(ρ₀)`. `γ` is taken from `ρ`
/// through `γ = √q (ρ + √(ρ² − 1))`.
pub fn remark_bound_probe(t: &CountTable, s: &SpectralData, n_max: usize, epsilon: f64) -> RemarkProbe {
    let q = t.q();
    let ln_norm = (2.0 * (q as f64).sqrt()).ln();
    let ln_factor = s.rho.ln() - ((q as f64).sqrt() * joukowski_root(s.rho)).ln();
    let rows: Vec<(usize, f64)> = (1..=n_max)
        .take_while(|n| 2 * n <= t.n_max())
        .filter(|n| !t.gamma[2 * n].is_zero())
        .map(|n| {
            let k = 2 * n;
            let ln_mu = ln_big(&t.walk[k]) - k as f64 * ln_norm;
            (n, (ln_big(&t.gamma[k]) - ln_mu + k as f64 * ln_factor).exp())
        })
        .collect();
    let infimum = rows.iter().map(|(_, l)| *l).fold(f64::INFINITY, f64::min);
    RemarkProbe { h: h_rho0(s.rho0, q), rows, infimum, epsilon }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::finite_rho;
    use crate::exact_series::count_table_finite;
    use crate::groups::preset;

    fn finite(name: &str, n: usize) -> (CountTable, SpectralData) {
        let g = preset(name).unwrap();
        let t = count_table_finite(&g, n, 1000).unwrap();
        let s = SpectralData::finite(&g, &t, 1000).unwrap();
        (t, s)
    }

    #[test]
    fn kernel_forms_agree() {
        for x in [1.01, 1.1, 1.5] {
            for n in 1..20 {
                let us = chebyshev_u_values_f64(2 * n, x);
                let direct = us[2 * n] - us[2 * n - 2] / 3.0;
                let closed = cogrowth_kernel_f64(x, n, 3.0);
                assert!((direct - closed).abs() <= 1e-9 * direct.abs(), "x={x} n={n}");
            }
        }
    }

    #[test]
    fn surrogate_gap_matches_difference() {
        for x in [1.1, 1.3, 1.9] {
            for n in 1..8 {
                let direct = cogrowth_kernel_f64(x, n, 3.0) - surrogate_f64(x, n, 3.0);
                let stable = surrogate_gap_f64(x, n, 3.0);
                assert!((direct - stable).abs() <= 1e-9 * cogrowth_kernel_f64(x, n, 3.0).abs(), "x={x} n={n}");
            }
        }
    }

    #[test]
    fn klein_four_reproduces_counts() {
        let (t, s) = finite("z2xz2", 12);
        let split = integral_split_diagnostics(&s, 3).unwrap();
        let exact = t.gamma[6].to_string().parse::<f64>().unwrap();
        assert!((split.gamma_2n(3) - exact).abs() <= 1e-9 * exact);
        assert!(split.majorant_holds());
    }

    #[test]
    fn trivial_group_has_empty_lower_part() {
        let (_, s) = finite("trivial", 4);
        let split = integral_split_diagnostics(&s, 4).unwrap();
        assert_eq!(split.i_n1, 0.0);
        // t = √q at the Perron atom, where the surrogate is exact
        assert!(split.surrogate_deviation() < 1e-12);
    }

    #[test]
    fn infinite_groups_have_no_atoms() {
        let t = crate::counting::count_table(&preset("zsquared").unwrap(), 8, 1000).unwrap();
        let s = SpectralData::from_counts(&t).unwrap();
        assert!(matches!(integral_split_diagnostics(&s, 2), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn lemma_examples() {
        let single = discrete_ratio_lemma_check(&[2.0], &[0.7], 30, 0.0);
        assert!(single.ratios.iter().all(|r| *r == 2.0));
        let flat = discrete_ratio_lemma_check(&[2.0, 2.0], &[0.3, 5.0], 30, 0.0);
        assert!(flat.ratios.iter().all(|r| *r == 2.0));
        let two = discrete_ratio_lemma_check(&[1.0, 3.0], &[0.9, 0.1], 40, 1e-6);
        assert!(two.converged, "{}", two.final_error);
        assert!(!discrete_ratio_lemma_check(&[1.0, 3.0], &[0.9, 0.1], 5, 1e-6).converged);
    }

    #[test]
    fn remark_probe_trivial_group() {
        let (t, s) = finite("trivial", 40);
        let probe = remark_bound_probe(&t, &s, 20, 1e-9);
        assert_eq!(probe.rows.len(), 20);
        for (_, l) in &probe.rows {
            assert!((l - 4.0 / 3.0).abs() < 1e-12);
        }
        assert!(probe.bound_holds());
        assert!((s.rho - finite_rho(3)).abs() < 1e-15);
    }
}
