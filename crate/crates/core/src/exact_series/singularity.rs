//! Pole classification for cogrowth series of finite groups.
//!
//! With `u = (1+qz²)/z` the kernel `z/(1−λz+qz²)` equals `1/(u−λ)`, so
//! `Φ(z) = zγ(z)/(1−z²)` is a rational function `F(u) = Σ w_λ/(u−λ)` whose
//! poles are the spectral atoms. Each `λ` contributes the two roots of
//! `1 − λz + qz²`: a conjugate pair on `|z| = q^{−1/2}` when `λ² ≤ 4q`, and two
//! real poles otherwise.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{joukowski_project, phi};
use crate::poly::{rat, RationalPolynomial};
use crate::ratfunc::RationalFunction;
use crate::roots::{isolate_real_roots, rational_sqrt, RealRoot, SturmSequence};

const MAX_REFINE_STEPS: usize = 4000;

/// Which side of `|λ| = 2√q` an eigenvalue term falls on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralPart {
    /// `|λ| ≤ 2√q`: poles on the circle of radius `q^{−1/2}`.
    Circle,
    /// `|λ| > 2√q`: real poles.
    Interval,
}

/// One atom `w/(u−λ)` of `Φ` as a function of `u`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralTerm {
    pub eigenvalue: f64,
    pub eigenvalue_exact: Option<BigRational>,
    /// Mass of the atom, `m_λ/|G|` for a finite group.
    pub weight: f64,
    pub part: SpectralPart,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pole {
    pub eigenvalue: f64,
    pub re: f64,
    pub im: f64,
    /// The pole itself, when it is rational.
    pub exact: Option<BigRational>,
    /// `|z|²`, when it is rational.
    pub modulus_squared: Option<BigRational>,
}

impl Pole {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularityReport {
    pub q: usize,
    /// Largest `|λ|` among the atoms.
    pub top_eigenvalue: f64,
    pub top_eigenvalue_exact: Option<BigRational>,
    /// `γ = (λ* + √(λ*² − 4q))/2`, or `√q` when every atom lies on the circle side.
    pub gamma_exponent: f64,
    pub gamma_exponent_exact: Option<BigRational>,
    pub circle_poles: Vec<Pole>,
    pub real_poles: Vec<Pole>,
    /// Poles of `Φ` at `z = ±1` removed by the factor `1 − z²`.
    pub cancelled_poles: Vec<Pole>,
    pub unexplained_poles: Vec<String>,
    pub terms: Vec<SpectralTerm>,
}

impl SingularityReport {
    pub fn is_explained(&self) -> bool {
        self.unexplained_poles.is_empty()
    }

    /// `γ⁽⁰⁾` and `γ⁽¹⁾` coefficients through `z^order`, computed from the
    /// atoms in floating point.
    pub fn split_coefficients(&self, order: usize) -> (Vec<f64>, Vec<f64>) {
        let mut parts = (vec![0.0; order + 1], vec![0.0; order + 1]);
        let q = self.q as f64;
        for term in &self.terms {
            // (1−z²)·w/(1 − λz + qz²)
            let mut kernel = vec![0.0; order + 1];
            for n in 0..=order {
                let prev = if n >= 1 { kernel[n - 1] } else { 0.0 };
                let prev2 = if n >= 2 { kernel[n - 2] } else { 0.0 };
                kernel[n] = if n == 0 { 1.0 } else { term.eigenvalue * prev - q * prev2 };
            }
            let target = match term.part {
                SpectralPart::Circle => &mut parts.0,
                SpectralPart::Interval => &mut parts.1,
            };
            for n in 0..=order {
                let two_back = if n >= 2 { kernel[n - 2] } else { 0.0 };
                target[n] += term.weight * (kernel[n] - two_back);
            }
        }
        parts
    }
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Sign of `λ² − c` for the isolated root `λ` of `b`.
fn compare_square(
    b: &RationalPolynomial,
    sturm: &SturmSequence,
    boundary: Option<&SturmSequence>,
    root: &mut RealRoot,
    c: &BigRational,
) -> Option<Ordering> {
    if let Some(x) = &root.exact {
        return Some((x * x).cmp(c));
    }
    if let Some(bs) = boundary {
        if bs.count(&root.lo, &root.hi) > 0 {
            return Some(Ordering::Equal);
        }
    }
    for _ in 0..MAX_REFINE_STEPS {
        let (lo, hi) = (&root.lo, &root.hi);
        let upper = (lo * lo).max(hi * hi);
        let lower = if lo.is_negative() && hi.is_positive() { BigRational::zero() } else { (lo * lo).min(hi * hi) };
        if upper < *c {
            return Some(Ordering::Less);
        }
        if lower > *c {
            return Some(Ordering::Greater);
        }
        let mid = (lo + hi) / rat(2);
        if b.eval(&mid).is_zero() {
            let ord = (&mid * &mid).cmp(c);
            root.exact = Some(mid);
            return Some(ord);
        }
        if sturm.count(&root.lo, &mid) == 1 {
            root.hi = mid;
        } else {
            root.lo = mid;
        }
    }
    None
}

/// The two roots of `1 − λz + qz²` for real `λ` with `λ² > 4q`, exact when
/// `λ` and `√(λ² − 4q)` are rational.
fn real_pole_pair(lambda: f64, exact: Option<&BigRational>, q: usize) -> [Pole; 2] {
    let qf = q as f64;
    let s = (lambda * lambda - 4.0 * qf).sqrt();
    let exact_pair = exact.and_then(|l| {
        let disc = l * l - rat(4 * q as i64);
        rational_sqrt(&disc).map(|r| {
            let two_q = rat(2 * q as i64);
            [(l - &r) / &two_q, (l + &r) / two_q]
        })
    });
    let approx = [(lambda - s) / (2.0 * qf), (lambda + s) / (2.0 * qf)];
    std::array::from_fn(|i| {
        let ex = exact_pair.as_ref().map(|p| p[i].clone());
        Pole {
            eigenvalue: lambda,
            re: ex.as_ref().map(to_f64).unwrap_or(approx[i]),
            im: 0.0,
            modulus_squared: ex.as_ref().map(|z| z * z),
            exact: ex,
        }
    })
}

fn circle_pole_pair(lambda: f64, exact: Option<&BigRational>, q: usize, on_boundary: bool) -> Vec<Pole> {
    let qf = q as f64;
    let modulus_squared = Some(BigRational::new(BigInt::from(1), BigInt::from(q)));
    if on_boundary {
        // double root z = λ/(2q) = ±q^{−1/2}
        return vec![Pole { eigenvalue: lambda, re: lambda / (2.0 * qf), im: 0.0, exact: None, modulus_squared }];
    }
    let im = (4.0 * qf - lambda * lambda).sqrt() / (2.0 * qf);
    let re = exact.map(|l| to_f64(&(l / rat(2 * q as i64)))).unwrap_or(lambda / (2.0 * qf));
    vec![
        Pole { eigenvalue: lambda, re, im, exact: None, modulus_squared: modulus_squared.clone() },
        Pole { eigenvalue: lambda, re, im: -im, exact: None, modulus_squared },
    ]
}

/// Classifies every pole of a cogrowth series `γ(z)` of a finite group.
pub fn singularity_analysis(gamma: &RationalFunction, q: usize) -> SingularityReport {
    let mut report = SingularityReport {
        q,
        top_eigenvalue: f64::NAN,
        top_eigenvalue_exact: None,
        gamma_exponent: f64::NAN,
        gamma_exponent_exact: None,
        circle_poles: Vec::new(),
        real_poles: Vec::new(),
        cancelled_poles: Vec::new(),
        unexplained_poles: Vec::new(),
        terms: Vec::new(),
    };

    // Φ = N/E in lowest terms; E(z) = z^k B(u) and N(z) = z·z^{k−1} A(u)
    // with F = A/B.
    let f = phi(gamma);
    let (num, den) = (f.numerator(), f.denominator());
    let deg = den.degree().unwrap_or(0);
    let projected = if deg % 2 == 1 || deg == 0 {
        None
    } else {
        let k = deg / 2;
        let shifted = num.div_rem(&RationalPolynomial::x());
        if shifted.1.is_zero() {
            joukowski_project(den, k, q).zip(joukowski_project(&shifted.0, k - 1, q))
        } else {
            None
        }
    };
    let Some((b, a)) = projected else {
        if deg > 0 {
            report
                .unexplained_poles
                .push(format!("denominator {den} of zγ/(1−z²) is not a function of (1+{q}z²)/z"));
        }
        return report;
    };

    let squarefree = b.gcd(&b.derivative()).degree() == Some(0);
    if !squarefree {
        report.unexplained_poles.push(format!("repeated atoms in {b}"));
    }
    let mut roots = isolate_real_roots(&b, &BigRational::new(BigInt::from(1), BigInt::from(1u64 << 40)));
    let complex = b.degree().unwrap_or(0).saturating_sub(roots.len());
    if complex > 0 {
        report.unexplained_poles.push(format!("{complex} non-real atoms of {b}"));
    }
    if roots.is_empty() {
        return report;
    }

    let four_q = rat(4 * q as i64);
    let sturm = SturmSequence::new(&b);
    let boundary = b.gcd(&RationalPolynomial::new(vec![-four_q.clone(), rat(0), rat(1)]));
    let boundary_sturm = (boundary.degree().unwrap_or(0) > 0).then(|| SturmSequence::new(&boundary));
    let db = b.derivative();
    let gamma_den = gamma.denominator();

    let top = roots
        .iter()
        .max_by(|x, y| x.approx().abs().total_cmp(&y.approx().abs()))
        .cloned()
        .unwrap();
    report.top_eigenvalue = top.approx().abs();
    report.top_eigenvalue_exact = top.exact.as_ref().map(|x| x.abs());

    for root in roots.iter_mut() {
        let lambda = root.approx();
        let weight = match &root.exact {
            Some(x) => to_f64(&(a.eval(x) / db.eval(x))),
            None => a.eval_f64(lambda) / db.eval_f64(lambda),
        };
        let Some(side) = compare_square(&b, &sturm, boundary_sturm.as_ref(), root, &four_q) else {
            report.unexplained_poles.push(format!("could not place atom {lambda} relative to 2√{q}"));
            continue;
        };
        let part = if side == Ordering::Greater { SpectralPart::Interval } else { SpectralPart::Circle };
        report.terms.push(SpectralTerm { eigenvalue: lambda, eigenvalue_exact: root.exact.clone(), weight, part });
        if part == SpectralPart::Circle {
            let poles = circle_pole_pair(lambda, root.exact.as_ref(), q, side == Ordering::Equal);
            report.circle_poles.extend(poles);
            continue;
        }
        for pole in real_pole_pair(lambda, root.exact.as_ref(), q) {
            let at_unit = pole.exact.as_ref().is_some_and(|z| z.abs() == rat(1));
            let cancelled = at_unit && !gamma_den.eval(pole.exact.as_ref().unwrap()).is_zero();
            if cancelled {
                report.cancelled_poles.push(pole);
            } else {
                report.real_poles.push(pole);
            }
        }
    }

    let qf = q as f64;
    let lam = report.top_eigenvalue;
    if lam * lam > 4.0 * qf {
        report.gamma_exponent = (lam + (lam * lam - 4.0 * qf).sqrt()) / 2.0;
        report.gamma_exponent_exact = report.top_eigenvalue_exact.as_ref().and_then(|l| {
            rational_sqrt(&(l * l - &four_q)).map(|s| (l + s) / rat(2))
        });
    } else {
        report.gamma_exponent = qf.sqrt();
    }

    // Real poles must lie in ±[1/γ, γ/q].
    let (lo, hi) = (1.0 / report.gamma_exponent, report.gamma_exponent / qf);
    let exact_bounds = report.gamma_exponent_exact.as_ref().map(|g| (g.recip(), g / rat(q as i64)));
    let slack = 1e-12;
    let (inside, outside): (Vec<Pole>, Vec<Pole>) = report.real_poles.drain(..).partition(|p| {
        match (&p.exact, &exact_bounds) {
            (Some(z), Some((l, h))) => z.abs() >= *l && z.abs() <= *h,
            _ => p.re.abs() >= lo * (1.0 - slack) && p.re.abs() <= hi * (1.0 + slack),
        }
    });
    report.real_poles = inside;
    for p in outside {
        report.unexplained_poles.push(format!("real pole {} outside ±[{lo}, {hi}]", p.re));
    }
    report.real_poles.sort_by(|x, y| x.re.total_cmp(&y.re));
    report
}
