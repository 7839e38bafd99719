//! Runs the exact identity checks against a count table and reports, per
//! check, the first offending order or index.

use std::fmt;

use serde::Serialize;

use crate::counting::CountTable;
use crate::error::Error;
use crate::exact_series::{
    chebyshev_moment_failures, cogrowth_series_finite, count_table_finite, functional_equation_check,
    grigorchuk_identity_check, singularity_analysis,
};
use crate::groups::MarkedGroup;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Grigorchuk,
    Chebyshev,
    /// Taylor coefficients of the exact finite-quotient series against the table.
    Series,
    Functional,
    Singularities,
}

impl Check {
    pub const ALL: [Check; 5] = [Check::Grigorchuk, Check::Chebyshev, Check::Series, Check::Functional, Check::Singularities];

    pub fn tag(self) -> &'static str {
        match self {
            Check::Grigorchuk => "grigorchuk",
            Check::Chebyshev => "chebyshev",
            Check::Series => "series",
            Check::Functional => "functional",
            Check::Singularities => "singularities",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Check::Grigorchuk => "return-probability identity",
            Check::Chebyshev => "Chebyshev moment formula",
            Check::Series => "finite-quotient series oracle",
            Check::Functional => "functional equation Φ(1/(qz)) = Φ(z)",
            Check::Singularities => "pole classification of the finite-quotient series",
        }
    }

    pub fn parse(name: &str) -> Option<Vec<Check>> {
        if name == "all" {
            return Some(Check::ALL.to_vec());
        }
        Check::ALL.iter().find(|c| c.tag() == name).map(|c| vec![*c])
    }

    fn needs_finite_group(self) -> bool {
        matches!(self, Check::Series | Check::Functional | Check::Singularities)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub label: &'static str,
    pub status: Status,
    /// Series order at which the identity first fails.
    pub order: Option<usize>,
    /// Table index that the failure points to.
    pub index: Option<usize>,
    pub detail: String,
}

impl CheckOutcome {
    fn new(check: Check, status: Status, detail: String) -> CheckOutcome {
        CheckOutcome { check, label: check.label(), status, order: None, index: None, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub group: String,
    pub q: usize,
    pub n_max: usize,
    pub order: usize,
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    /// True unless some check failed. Skipped checks do not count as failures.
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.status != Status::Fail)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.status == Status::Fail)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group {} (q = {}, n_max = {}, order N = {})", self.group, self.q, self.n_max, self.order)?;
        for o in &self.outcomes {
            let status = match o.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            write!(f, "{status} [{}] {}", o.check.tag(), o.label)?;
            if let Some(order) = o.order {
                write!(f, " at order {order}")?;
            }
            if let Some(index) = o.index {
                write!(f, " (index {index})")?;
            }
            writeln!(f, ": {}", o.detail)?;
        }
        Ok(())
    }
}

fn grigorchuk(t: &CountTable, order: usize) -> CheckOutcome {
    let r = grigorchuk_identity_check(t, order);
    match r.first_mismatch {
        None => CheckOutcome::new(Check::Grigorchuk, Status::Pass, format!("residual 0 at orders 0..={}", order + 1)),
        Some((m, diff)) => {
            let mut o = CheckOutcome::new(Check::Grigorchuk, Status::Fail, format!("lhs − rhs = {diff} at order {m}"));
            o.order = Some(m);
            // order m first involves γ_{m−1} and W_{m−1}
            o.index = Some(m - 1);
            o
        }
    }
}

fn chebyshev(t: &CountTable, order: usize) -> CheckOutcome {
    let failures = chebyshev_moment_failures(t, order);
    match failures.first() {
        None => CheckOutcome::new(Check::Chebyshev, Status::Pass, format!("exact for 2 ≤ n ≤ {order}")),
        Some(&n) => {
            let mut o =
                CheckOutcome::new(Check::Chebyshev, Status::Fail, format!("moment prediction differs from γ_{n}; failing n = {failures:?}"));
            o.index = Some(n);
            o
        }
    }
}

fn series(g: &MarkedGroup, t: &CountTable, order: usize, budget: usize) -> Result<CheckOutcome, Error> {
    let exact = count_table_finite(g, order, budget)?;
    let mismatch = (0..=order).find(|&n| exact.gamma[n] != t.gamma[n] || exact.walk[n] != t.walk[n]);
    Ok(match mismatch {
        None => CheckOutcome::new(Check::Series, Status::Pass, format!("γ_n and W_n agree for n ≤ {order}")),
        Some(n) => {
            let which = if exact.gamma[n] != t.gamma[n] {
                format!("γ_{n} = {} but the series gives {}", t.gamma[n], exact.gamma[n])
            } else {
                format!("W_{n} = {} but the series gives {}", t.walk[n], exact.walk[n])
            };
            let mut o = CheckOutcome::new(Check::Series, Status::Fail, which);
            o.order = Some(n);
            o.index = Some(n);
            o
        }
    })
}

fn functional(g: &MarkedGroup, budget: usize) -> Result<CheckOutcome, Error> {
    let gamma = cogrowth_series_finite(g, budget)?;
    Ok(if functional_equation_check(&gamma, g.q()) {
        CheckOutcome::new(Check::Functional, Status::Pass, "canonical forms coincide".into())
    } else {
        CheckOutcome::new(Check::Functional, Status::Fail, "Φ(1/(qz)) and Φ(z) differ".into())
    })
}

fn singularities(g: &MarkedGroup, budget: usize) -> Result<CheckOutcome, Error> {
    let gamma = cogrowth_series_finite(g, budget)?;
    let report = singularity_analysis(&gamma, g.q());
    let summary = format!(
        "{} circle, {} real, {} cancelled poles",
        report.circle_poles.len(),
        report.real_poles.len(),
        report.cancelled_poles.len()
    );
    Ok(if report.is_explained() {
        CheckOutcome::new(Check::Singularities, Status::Pass, summary)
    } else {
        CheckOutcome::new(
            Check::Singularities,
            Status::Fail,
            format!("{summary}; unexplained: {}", report.unexplained_poles.join("; ")),
        )
    })
}

/// Runs `checks` on `t` up to series order `order`. Checks that need the
/// finite-quotient series are skipped when `group` is absent or infinite.
pub fn verify(
    t: &CountTable,
    group: Option<&MarkedGroup>,
    checks: &[Check],
    order: usize,
    budget: usize,
) -> Result<VerifyReport, Error> {
    if order > t.n_max() {
        return Err(Error::InsufficientData(format!("order {order} exceeds the table length {}", t.n_max())));
    }
    if let Some(g) = group {
        if g.rank() != t.rank {
            return Err(Error::Format(format!("table rank {} does not match group rank {}", t.rank, g.rank())));
        }
    }
    let mut outcomes = Vec::new();
    for &check in checks {
        let finite = group.filter(|g| g.is_finite());
        if check.needs_finite_group() && finite.is_none() {
            let why = if group.is_some() { "group is not finite" } else { "no group given" };
            outcomes.push(CheckOutcome::new(check, Status::Skipped, why.into()));
            continue;
        }
        outcomes.push(match check {
            Check::Grigorchuk => grigorchuk(t, order),
            Check::Chebyshev => chebyshev(t, order),
            Check::Series => series(finite.unwrap(), t, order, budget)?,
            Check::Functional => functional(finite.unwrap(), budget)?,
            Check::Singularities => singularities(finite.unwrap(), budget)?,
        });
    }
    Ok(VerifyReport { group: t.group.clone(), q: t.q(), n_max: t.n_max(), order, outcomes })
}
