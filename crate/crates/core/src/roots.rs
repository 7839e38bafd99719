//! Real root isolation for rational polynomials via Sturm sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{rat, RationalPolynomial};

/// A real root inside `(lo, hi]`, with its exact value when it is rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub lo: BigRational,
    pub hi: BigRational,
    pub exact: Option<BigRational>,
}

impl RealRoot {
    pub fn approx(&self) -> f64 {
        match &self.exact {
            Some(x) => x.to_f64().unwrap_or(f64::NAN),
            None => ((&self.lo + &self.hi) / rat(2)).to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

pub struct SturmSequence {
    chain: Vec<RationalPolynomial>,
}

impl SturmSequence {
    /// Panics on the zero polynomial.
    pub fn new(p: &RationalPolynomial) -> SturmSequence {
        assert!(!p.is_zero(), "Sturm sequence of the zero polynomial");
        let mut chain = vec![p.clone(), p.derivative()];
        while !chain.last().unwrap().is_zero() {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            chain.push(-&r);
        }
        chain.pop();
        SturmSequence { chain }
    }

    fn sign_changes(&self, x: &BigRational) -> usize {
        let mut changes = 0;
        let mut prev = 0i8;
        for p in &self.chain {
            let v = p.eval(x);
            let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
            if s != 0 {
                if prev != 0 && s != prev {
                    changes += 1;
                }
                prev = s;
            }
        }
        changes
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.sign_changes(a).saturating_sub(self.sign_changes(b))
    }
}

/// Cauchy bound: every root has `|x| < 1 + max |a_i / a_n|`.
pub fn root_bound(p: &RationalPolynomial) -> BigRational {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let m = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    m + BigRational::one()
}

/// The rational with the smallest denominator in `[lo, hi]`, smallest
/// numerator magnitude among those.
pub fn simplest_between(lo: &BigRational, hi: &BigRational) -> BigRational {
    assert!(lo <= hi);
    if !lo.is_positive() && !hi.is_negative() {
        return BigRational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    let next = &fl + BigRational::one();
    if next <= *hi {
        return next;
    }
    fl.clone() + simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip()).recip()
}

/// Isolates the distinct real roots of `p` in increasing order and refines
/// each interval to width below `width`. A rational root is found exactly
/// whenever its isolating interval shrinks below `1 / lead²` of the primitive
/// integer polynomial, which the refinement always reaches.
pub fn isolate_real_roots(p: &RationalPolynomial, width: &BigRational) -> Vec<RealRoot> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = SturmSequence::new(p);
    let b = root_bound(p);
    let mut pending = vec![(-b.clone(), b)];
    let mut isolated = Vec::new();
    while let Some((lo, hi)) = pending.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => isolated.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / rat(2);
                pending.push((mid.clone(), hi));
                pending.push((lo, mid));
            }
        }
    }
    isolated.sort();

    let lead = p.primitive_part().last().cloned().unwrap_or_else(BigInt::one).abs();
    let detect = BigRational::new(BigInt::one(), &lead * &lead + BigInt::one());
    let target = if *width < detect { width.clone() } else { detect };

    isolated
        .into_iter()
        .map(|(lo, hi)| refine(p, &sturm, lo, hi, &target))
        .collect()
}

fn refine(
    p: &RationalPolynomial,
    sturm: &SturmSequence,
    mut lo: BigRational,
    mut hi: BigRational,
    target: &BigRational,
) -> RealRoot {
    if p.eval(&hi).is_zero() {
        return RealRoot { exact: Some(hi.clone()), lo, hi };
    }
    while &hi - &lo >= *target {
        let mid = (&lo + &hi) / rat(2);
        if p.eval(&mid).is_zero() {
            return RealRoot { lo: mid.clone(), hi: mid.clone(), exact: Some(mid) };
        }
        if sturm.count(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let candidate = simplest_between(&lo, &hi);
    let exact = (candidate > lo && p.eval(&candidate).is_zero()).then_some(candidate);
    RealRoot { lo, hi, exact }
}

/// Number of distinct real roots, counted by the Sturm sequence over the
/// whole line.
pub fn count_real_roots(p: &RationalPolynomial) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let b = root_bound(p);
    SturmSequence::new(p).count(&-b.clone(), &b)
}

/// Whether `|x| < y` for the root `x` described by `root` and `y > 0`,
/// refining the interval as needed; `None` if undecided after `max_steps`.
pub fn abs_below(
    p: &RationalPolynomial,
    root: &mut RealRoot,
    y: &BigRational,
    max_steps: usize,
) -> Option<bool> {
    if let Some(x) = &root.exact {
        return Some(x.abs() < *y);
    }
    let sturm = SturmSequence::new(p);
    for _ in 0..=max_steps {
        let (lo, hi) = (&root.lo, &root.hi);
        let upper = lo.abs().max(hi.abs());
        let lower = if lo.is_negative() && hi.is_positive() { BigRational::zero() } else { lo.abs().min(hi.abs()) };
        if upper < *y {
            return Some(true);
        }
        if lower > *y {
            return Some(false);
        }
        let mid = (lo + hi) / rat(2);
        if p.eval(&mid).is_zero() {
            root.exact = Some(mid.clone());
            return Some(mid.abs() < *y);
        }
        if sturm.count(&root.lo, &mid) == 1 {
            root.hi = mid;
        } else {
            root.lo = mid;
        }
    }
    None
}

/// The square root of a non-negative rational, if it is rational.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    (&n * &n == *x.numer() && &d * &d == *x.denom()).then(|| BigRational::new(n, d))
}
