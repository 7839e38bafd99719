use std::fmt;
use std::io::Write;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::{
    cogrowth_exponent_estimate, gamma_from_rho, integral_split_diagnostics, joukowski_root, ln_big, ratio_f64,
    remark_bound_probe, spectral_radius_estimate, Estimate, IntegralSplit, Method, RemarkProbe, SpectralData,
};
use crate::counting::CountTable;
use crate::error::Error;

/// First line of every CSV report.
pub const CSV_HEADER: &str = "# cogrowth-asymptotics-csv v1";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub n: usize,
    pub gamma_2n: String,
    /// `γ_{2n+2}/γ_{2n}`.
    pub ratio: f64,
    pub prediction: f64,
    pub deviation: f64,
    /// `γ_{2n}^{1/2n}`.
    pub root_estimate: f64,
    /// `W_{2n}^{1/2n}/(2√q)`.
    pub rho_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioLimitReport {
    pub rho: f64,
    /// `q (ρ + √(ρ² − 1))²`.
    pub prediction: f64,
    pub rows: Vec<RatioRow>,
    pub window: usize,
    pub max_trailing_deviation: f64,
}

impl RatioLimitReport {
    /// Whether the trailing-window maxima of the deviation never increase.
    pub fn trailing_windows_decrease(&self) -> bool {
        let devs: Vec<f64> = self.rows.iter().map(|r| r.deviation).collect();
        if devs.len() < self.window {
            return true;
        }
        let maxima: Vec<f64> =
            devs.windows(self.window).map(|w| w.iter().copied().fold(0.0, f64::max)).collect();
        maxima.windows(2).all(|p| p[1] <= p[0] * (1.0 + 1e-12) + f64::EPSILON)
    }
}

/// Tabulates `γ_{2n+2}/γ_{2n}` against `q(ρ + √(ρ² − 1))²`.
pub fn ratio_limit_experiment(t: &CountTable, rho: f64, window: usize) -> RatioLimitReport {
    let q = t.q();
    let prediction = q as f64 * joukowski_root(rho).powi(2);
    let ln_norm = (2.0 * (q as f64).sqrt()).ln();
    let rows: Vec<RatioRow> = (1..)
        .take_while(|n| 2 * n + 2 <= t.n_max())
        .filter(|n| !t.gamma[2 * n].is_zero())
        .map(|n| {
            let (k, g) = (2 * n, &t.gamma[2 * n]);
            let ratio = ratio_f64(&t.gamma[k + 2], g);
            RatioRow {
                n,
                gamma_2n: g.to_string(),
                ratio,
                prediction,
                deviation: (ratio - prediction).abs(),
                root_estimate: (ln_big(g) / k as f64).exp(),
                rho_estimate: (ln_big(&t.walk[k]) / k as f64 - ln_norm).exp(),
            }
        })
        .collect();
    let window = window.max(1);
    let max_trailing_deviation =
        rows.iter().rev().take(window).map(|r| r.deviation).fold(0.0, f64::max);
    RatioLimitReport { rho, prediction, rows, window, max_trailing_deviation }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ConsistentWithAmenable,
    NonamenableIndicated,
    Inconclusive,
    TrivialKernel,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ConsistentWithAmenable => "consistent-with-amenable",
            Verdict::NonamenableIndicated => "nonamenable-indicated",
            Verdict::Inconclusive => "inconclusive",
            Verdict::TrivialKernel => "trivial kernel",
        })
    }
}

/// Relative quantities, as fractions of `q`, that separate the verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    /// At or below this gap `|q − γ̂|/q` the data are consistent with
    /// amenability.
    pub amenable_gap: f64,
    /// At or above this gap non-amenability is indicated.
    pub nonamenable_gap: f64,
    /// Largest spread of the fitted exponent over the last three truncations
    /// for which any verdict is given.
    pub stability: f64,
    /// Number of trailing even indices in each fit.
    pub fit_window: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { amenable_gap: 0.02, nonamenable_gap: 0.05, stability: 0.04, fit_window: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AmenabilityReport {
    pub q: usize,
    /// `(γ_{2n+2}/γ_{2n})^{1/2}` at the largest usable index.
    pub gamma_ratio: Option<Estimate>,
    /// `exp(c₁/2)` from the least-squares fit
    /// `ln γ_{2n} ≈ c₀ + c₁ n + c₂ ln n` over the trailing window.
    pub gamma_fit: Option<f64>,
    /// Spread of the fitted exponent over the truncations at
    /// `n_max, n_max − 2, n_max − 4`, relative to `q`.
    pub fit_spread: Option<f64>,
    pub rho: Option<Estimate>,
    /// `√q (ρ̂ + √(ρ̂² − 1))`.
    pub gamma_from_rho: Option<f64>,
    /// `(q − γ̂)/q` for the fitted exponent.
    pub relative_gap: Option<f64>,
    pub thresholds: Thresholds,
    pub verdict: Verdict,
}

/// Solves the 3×3 system `a x = b` by Gaussian elimination with partial
/// pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for c in 0..3 {
        let p = (c..3).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c] == 0.0 {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for r in c + 1..3 {
            let f = a[r][c] / a[c][c];
            for k in c..3 {
                a[r][k] -= f * a[c][k];
            }
            b[r] -= f * b[c];
        }
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let tail: f64 = (r + 1..3).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    Some(x)
}

/// Fitted exponent from the positive even coefficients up to `n_max`.
fn exponent_fit(gamma: &[BigUint], n_max: usize, window: usize) -> Option<f64> {
    let points: Vec<(f64, f64)> = (1..=n_max / 2)
        .filter(|n| !gamma[2 * n].is_zero())
        .map(|n| (n as f64, ln_big(&gamma[2 * n])))
        .collect();
    if points.len() < window.max(3) {
        return None;
    }
    let mut a = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for &(n, y) in &points[points.len() - window.max(3)..] {
        let f = [1.0, n, n.ln()];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += f[i] * f[j];
            }
            b[i] += f[i] * y;
        }
    }
    solve3(a, b).map(|c| (c[1] / 2.0).exp())
}

/// Compares the estimated exponent with `q`. Finite-`n` data can only
/// indicate, never prove, either answer.
pub fn amenability_diagnostic(t: &CountTable, thresholds: Thresholds) -> Result<AmenabilityReport, Error> {
    let q = t.q();
    let qf = q as f64;
    let rho = spectral_radius_estimate(t, Method::EvenRatio)?;
    let mut report = AmenabilityReport {
        q,
        gamma_ratio: None,
        gamma_fit: None,
        fit_spread: None,
        rho: Some(rho),
        gamma_from_rho: Some(gamma_from_rho(rho.value, q)),
        relative_gap: None,
        thresholds,
        verdict: Verdict::Inconclusive,
    };
    match cogrowth_exponent_estimate(t, Method::EvenRatio) {
        Err(Error::TrivialKernel) => {
            report.verdict = Verdict::TrivialKernel;
            return Ok(report);
        }
        Err(Error::InsufficientData(_)) => return Ok(report),
        Err(e) => return Err(e),
        Ok(e) => report.gamma_ratio = Some(e),
    }
    let fits: Option<Vec<f64>> = (0..3)
        .map(|k| t.n_max().checked_sub(2 * k).and_then(|n| exponent_fit(&t.gamma, n, thresholds.fit_window)))
        .collect();
    let Some(fits) = fits else { return Ok(report) };
    let spread = (fits.iter().copied().fold(f64::MIN, f64::max) - fits.iter().copied().fold(f64::MAX, f64::min)) / qf;
    let gap = (qf - fits[0]) / qf;
    report.gamma_fit = Some(fits[0]);
    report.fit_spread = Some(spread);
    report.relative_gap = Some(gap);
    report.verdict = if spread > thresholds.stability {
        Verdict::Inconclusive
    } else if gap.abs() <= thresholds.amenable_gap {
        Verdict::ConsistentWithAmenable
    } else if gap >= thresholds.nonamenable_gap {
        Verdict::NonamenableIndicated
    } else {
        Verdict::Inconclusive
    };
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitRow {
    pub n: usize,
    pub i_n: f64,
    pub i_n1: f64,
    pub i_n2: f64,
    pub i_n2_tilde: f64,
    pub majorant: f64,
    pub surrogate_deviation: f64,
}

impl From<&IntegralSplit> for SplitRow {
    fn from(s: &IntegralSplit) -> SplitRow {
        SplitRow {
            n: s.n,
            i_n: s.i_n,
            i_n1: s.i_n1,
            i_n2: s.i_n2,
            i_n2_tilde: s.i_n2_tilde,
            majorant: s.majorant,
            surrogate_deviation: s.surrogate_deviation(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RemarkSummary {
    pub h_rho0: f64,
    pub bound_holds: bool,
    pub infimum: f64,
    pub rows: Vec<(usize, f64)>,
}

impl From<&RemarkProbe> for RemarkSummary {
    fn from(p: &RemarkProbe) -> RemarkSummary {
        RemarkSummary { h_rho0: p.h, bound_holds: p.bound_holds(), infimum: p.infimum, rows: p.rows.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticsReport {
    pub group: String,
    pub q: usize,
    pub n_max: usize,
    pub rho_root: Option<Estimate>,
    pub rho_ratio: Option<Estimate>,
    pub rho0: f64,
    pub gamma_root: Option<Estimate>,
    pub ratio_limit: RatioLimitReport,
    pub amenability: AmenabilityReport,
    pub integral_split: Vec<SplitRow>,
    pub remark: Option<RemarkSummary>,
}

/// Full report. `spectral` carries the atoms for finite groups; without it
/// `ρ` comes from the return counts.
pub fn asymptotics_report(
    t: &CountTable,
    spectral: Option<&SpectralData>,
    thresholds: Thresholds,
    window: usize,
    epsilon: f64,
) -> Result<AsymptoticsReport, Error> {
    let from_counts;
    let s = match spectral {
        Some(s) => s,
        None => {
            from_counts = SpectralData::from_counts(t)?;
            &from_counts
        }
    };
    let amenability = amenability_diagnostic(t, thresholds)?;
    let gamma_root = match cogrowth_exponent_estimate(t, Method::Root) {
        Ok(e) => Some(e),
        Err(Error::TrivialKernel) => None,
        Err(e) => return Err(e),
    };
    let (integral_split, remark) = if s.atoms.is_some() {
        let splits = (1..=t.n_max() / 2)
            .map(|n| integral_split_diagnostics(s, n).map(|sp| SplitRow::from(&sp)))
            .collect::<Result<Vec<_>, _>>()?;
        (splits, Some(RemarkSummary::from(&remark_bound_probe(t, s, t.n_max() / 2, epsilon))))
    } else {
        (Vec::new(), None)
    };
    Ok(AsymptoticsReport {
        group: t.group.clone(),
        q: t.q(),
        n_max: t.n_max(),
        rho_root: spectral_radius_estimate(t, Method::Root).ok(),
        rho_ratio: spectral_radius_estimate(t, Method::EvenRatio).ok(),
        rho0: s.rho0,
        gamma_root,
        ratio_limit: ratio_limit_experiment(t, s.rho, window),
        amenability,
        integral_split,
        remark,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.12}")).unwrap_or_else(|| "-".into())
}

impl AsymptoticsReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), Error> {
        writeln!(out, "{CSV_HEADER}")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "gamma_2n", "ratio", "prediction", "deviation", "root_estimate", "rho_estimate", "remark_l"])?;
        for r in &self.ratio_limit.rows {
            let l = self
                .remark
                .as_ref()
                .and_then(|m| m.rows.iter().find(|(n, _)| *n == r.n))
                .map(|(_, l)| l.to_string())
                .unwrap_or_default();
            w.write_record([
                r.n.to_string(),
                r.gamma_2n.clone(),
                r.ratio.to_string(),
                r.prediction.to_string(),
                r.deviation.to_string(),
                r.root_estimate.to_string(),
                r.rho_estimate.to_string(),
                l,
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl fmt::Display for AsymptoticsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = &self.amenability;
        writeln!(f, "group {} (q = {}, n_max = {})", self.group, self.q, self.n_max)?;
        writeln!(f, "rho (root)          {}", opt(self.rho_root.map(|e| e.value)))?;
        writeln!(f, "rho (even ratio)    {}", opt(self.rho_ratio.map(|e| e.value)))?;
        writeln!(f, "gamma (root)        {}", opt(self.gamma_root.map(|e| e.value)))?;
        writeln!(f, "gamma (even ratio)  {}", opt(a.gamma_ratio.map(|e| e.value)))?;
        writeln!(f, "gamma (fitted)      {}", opt(a.gamma_fit))?;
        writeln!(f, "fit spread / q      {}", opt(a.fit_spread))?;
        writeln!(f, "gamma from rho      {}", opt(a.gamma_from_rho))?;
        writeln!(f, "relative gap to q   {}", opt(a.relative_gap))?;
        writeln!(f, "verdict             {}", a.verdict)?;
        writeln!(f)?;
        let rl = &self.ratio_limit;
        writeln!(f, "ratio limit: prediction q(rho + sqrt(rho^2 - 1))^2 = {:.12}", rl.prediction)?;
        writeln!(f, "{:>4} {:>20} {:>20} {:>12}", "n", "ratio", "deviation", "root")?;
        for r in &rl.rows {
            writeln!(f, "{:>4} {:>20.12} {:>20.6e} {:>12.8}", r.n, r.ratio, r.deviation, r.root_estimate)?;
        }
        writeln!(f, "max deviation over the last {} rows: {:.6e}", rl.window, rl.max_trailing_deviation)?;
        if !self.integral_split.is_empty() {
            writeln!(f)?;
            writeln!(f, "integral split at rho0 = {:.12}", self.rho0)?;
            writeln!(f, "{:>4} {:>16} {:>16} {:>16} {:>16} {:>12}", "n", "I_n", "I_n1", "I_n2", "I_n2~", "|I/I~ - 1|")?;
            for s in &self.integral_split {
                writeln!(
                    f,
                    "{:>4} {:>16.8e} {:>16.8e} {:>16.8e} {:>16.8e} {:>12.3e}",
                    s.n, s.i_n, s.i_n1, s.i_n2, s.i_n2_tilde, s.surrogate_deviation
                )?;
            }
        }
        if let Some(m) = &self.remark {
            writeln!(f)?;
            writeln!(f, "remark probe: h(rho0) = {:.12}, inf L_n = {:.12}, bound holds: {}", m.h_rho0, m.infimum, m.bound_holds)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_table, DEFAULT_BALL_BUDGET};
    use crate::exact_series::count_table_finite;
    use crate::groups::preset;

    #[test]
    fn trivial_group_ratio_is_exact() {
        let t = count_table_finite(&preset("trivial").unwrap(), 30, 10).unwrap();
        let r = ratio_limit_experiment(&t, super::super::finite_rho(3), 5);
        assert!(r.rows.iter().all(|row| row.ratio == 9.0));
        assert!((r.prediction - 9.0).abs() < 1e-12);
    }

    #[test]
    fn klein_four_deviation_shrinks() {
        let t = count_table_finite(&preset("z2xz2").unwrap(), 42, 10).unwrap();
        let r = ratio_limit_experiment(&t, super::super::finite_rho(3), 5);
        assert!(r.trailing_windows_decrease());
        assert!(r.max_trailing_deviation < 1e-6);
    }

    #[test]
    fn free_group_is_trivial_kernel() {
        let t = count_table(&preset("free2").unwrap(), 10, DEFAULT_BALL_BUDGET).unwrap();
        let a = amenability_diagnostic(&t, Thresholds::default()).unwrap();
        assert_eq!(a.verdict, Verdict::TrivialKernel);
    }

    #[test]
    fn linear_solve() {
        let x = solve3([[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]], [3.0, 5.0, 5.0]).unwrap();
        for (a, b) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(solve3([[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]], [1.0, 2.0, 3.0]).is_none());
    }

    #[test]
    fn exact_power_law_is_fitted() {
        // γ_{2n} = 5ⁿ n³ up to rounding to integers
        let gamma: Vec<BigUint> = (0..=40usize)
            .map(|k| if k % 2 == 1 { BigUint::zero() } else { BigUint::from(5u32).pow(k as u32 / 2) * BigUint::from(k / 2).pow(3) })
            .collect();
        let fit = exponent_fit(&gamma, 40, 6).unwrap();
        assert!((fit - 5f64.sqrt()).abs() < 1e-9, "{fit}");
    }

    #[test]
    fn amenability_verdicts() {
        let z2 = count_table_finite(&preset("z2xz2").unwrap(), 30, 10).unwrap();
        let a = amenability_diagnostic(&z2, Thresholds::default()).unwrap();
        assert_eq!(a.verdict, Verdict::ConsistentWithAmenable);
        assert!((a.gamma_from_rho.unwrap() - 3.0).abs() < 1e-9);
        let zz = count_table(&preset("zsquared").unwrap(), 28, DEFAULT_BALL_BUDGET).unwrap();
        assert_eq!(amenability_diagnostic(&zz, Thresholds::default()).unwrap().verdict, Verdict::ConsistentWithAmenable);
        // too little data for a stable fit
        let short = count_table(&preset("sl2z").unwrap(), 16, DEFAULT_BALL_BUDGET).unwrap();
        assert_eq!(amenability_diagnostic(&short, Thresholds::default()).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn csv_has_versioned_header() {
        let g = preset("z2xz2").unwrap();
        let t = count_table_finite(&g, 12, 10).unwrap();
        let s = SpectralData::finite(&g, &t, 10).unwrap();
        let rep = asymptotics_report(&t, Some(&s), Thresholds::default(), 5, 1e-9).unwrap();
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert!(lines.next().unwrap().starts_with("n,gamma_2n,ratio,prediction,deviation"));
        assert_eq!(lines.count(), rep.ratio_limit.rows.len());
        assert!(rep.to_string().contains("verdict"));
    }
}
