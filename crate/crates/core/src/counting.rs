//! Exact cogrowth coefficients `γ_n` and return counts `W_n`.
//!
//! `γ_n` counts reduced words of length `n` in the kernel; `W_n` counts all
//! words of length `n` over the `2r` letters that evaluate to the identity.
//! Both are computed by brute force (the oracle) and by a transfer DP over
//! states `(element, last letter)` (resp. `element`).
//!
//! The DP keeps the layers of lengths `0..=h`, `h = ⌈n_max/2⌉`, and obtains
//! longer lengths by splitting a word as `u·v` with `|u| = h`. Inverting a word
//! is a bijection between words for `g` and words for `g⁻¹`, so with
//! `L_k(g)` the number of length-`k` words evaluating to `g`,
//!
//! ```text
//! W_{h+k} = Σ_g L_h(g) L_k(g)
//! ```
//!
//! and with `A_k(g, l)` the reduced words ending in `l`, the concatenation is
//! reduced iff the last letter of `u` differs from the inverse of the first
//! letter of `v`, which after inverting `v` reads
//!
//! ```text
//! γ_{h+k} = Σ_g [ S_h(g) S_k(g) − Σ_l A_h(g, l) A_k(g, l) ],   S_k(g) = Σ_l A_k(g, l).
//! ```
//!
//! The state space is therefore the ball of radius `h`, not `n_max`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CountError, GroupError};
use crate::exec::Strategy;
use crate::freewords::{count_reduced, inverse_code};
use crate::groups::{Element, MarkedGroup};

/// Default limit on the number of words a brute-force count may visit.
pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;
/// Default limit on the number of group elements in one DP layer.
pub const DEFAULT_BALL_BUDGET: usize = 2_000_000;

/// Exact `γ_0..γ_N` and `W_0..W_N` for one marked group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CountTableFile", into = "CountTableFile")]
pub struct CountTable {
    pub group: String,
    pub rank: usize,
    pub gamma: Vec<BigUint>,
    pub walk: Vec<BigUint>,
}

impl CountTable {
    pub fn n_max(&self) -> usize {
        self.gamma.len().saturating_sub(1)
    }

    pub fn q(&self) -> usize {
        2 * self.rank - 1
    }

    /// Copy restricted to indices `0..=n_max`.
    pub fn truncated(&self, n_max: usize) -> CountTable {
        CountTable {
            group: self.group.clone(),
            rank: self.rank,
            gamma: self.gamma.iter().take(n_max + 1).cloned().collect(),
            walk: self.walk.iter().take(n_max + 1).cloned().collect(),
        }
    }

    /// Structural invariants: `γ_0 = W_0 = 1`, the counting upper bounds, and
    /// `W_n ≥ γ_n`. Returns a description of the first violation.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.gamma.len() != self.walk.len() {
            return Err("gamma and walk sequences differ in length".into());
        }
        if self.gamma.is_empty() {
            return Err("empty table".into());
        }
        if !self.gamma[0].is_one() || !self.walk[0].is_one() {
            return Err("γ_0 and W_0 must be 1".into());
        }
        let letters = BigUint::from(2 * self.rank);
        let mut all_words = BigUint::one();
        for n in 1..self.gamma.len() {
            all_words *= &letters;
            let reduced = count_reduced(self.rank, n).map_err(|e| e.to_string())?;
            if self.gamma[n] > reduced {
                return Err(format!("γ_{n} exceeds the number of reduced words"));
            }
            if self.walk[n] > all_words {
                return Err(format!("W_{n} exceeds (2r)^{n}"));
            }
            if self.walk[n] < self.gamma[n] {
                return Err(format!("W_{n} < γ_{n}"));
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CountTableFile {
    format: String,
    group: String,
    rank: usize,
    n_max: usize,
    gamma: Vec<String>,
    walk: Vec<String>,
}

const COUNT_TABLE_FORMAT: &str = "cogrowth-count-table/1";

impl From<CountTable> for CountTableFile {
    fn from(t: CountTable) -> CountTableFile {
        CountTableFile {
            format: COUNT_TABLE_FORMAT.into(),
            n_max: t.n_max(),
            group: t.group,
            rank: t.rank,
            gamma: t.gamma.iter().map(|g| g.to_string()).collect(),
            walk: t.walk.iter().map(|w| w.to_string()).collect(),
        }
    }
}

impl TryFrom<CountTableFile> for CountTable {
    type Error = String;
    fn try_from(f: CountTableFile) -> Result<CountTable, String> {
        if f.format != COUNT_TABLE_FORMAT {
            return Err(format!("unsupported count table format {:?}", f.format));
        }
        let parse = |v: &[String], what: &str| -> Result<Vec<BigUint>, String> {
            v.iter()
                .enumerate()
                .map(|(i, s)| s.parse::<BigUint>().map_err(|e| format!("{what}[{i}] = {s:?}: {e}")))
                .collect()
        };
        let gamma = parse(&f.gamma, "gamma")?;
        let walk = parse(&f.walk, "walk")?;
        if gamma.len() != f.n_max + 1 || walk.len() != f.n_max + 1 {
            return Err(format!("expected {} entries per sequence", f.n_max + 1));
        }
        if f.rank < crate::freewords::MIN_RANK {
            return Err(format!("rank {} is below 2", f.rank));
        }
        Ok(CountTable { group: f.group, rank: f.rank, gamma, walk })
    }
}

fn check_enum_budget(words: &BigUint, budget: u64) -> Result<(), CountError> {
    if words.to_u64().is_none_or(|w| w > budget) {
        return Err(CountError::EnumerationBudget { words: words.to_string(), budget });
    }
    Ok(())
}

/// Brute-force `γ_n`: evaluates every reduced word of length `n`.
pub fn gamma_bruteforce(g: &MarkedGroup, n: usize, budget: u64) -> Result<BigUint, CountError> {
    gamma_bruteforce_with(g, n, budget, Strategy::default())
}

pub fn gamma_bruteforce_with(
    g: &MarkedGroup,
    n: usize,
    budget: u64,
    strategy: Strategy,
) -> Result<BigUint, CountError> {
    check_enum_budget(&count_reduced(g.rank(), n)?, budget)?;
    if n == 0 {
        return Ok(BigUint::one());
    }
    let letters = g.letter_count();
    let task = |first: usize| -> Result<u64, GroupError> {
        let x = g.letter_image(first).clone();
        dfs_reduced(g, &x, first, n - 1)
    };
    let total = sum_over(0..letters, task, strategy)?;
    Ok(BigUint::from(total))
}

fn dfs_reduced(g: &MarkedGroup, x: &Element, last: usize, remaining: usize) -> Result<u64, GroupError> {
    if remaining == 0 {
        return Ok(u64::from(g.is_identity(x)));
    }
    let forbidden = inverse_code(last);
    let mut total = 0;
    for code in 0..g.letter_count() {
        if code == forbidden {
            continue;
        }
        let y = g.step(x, code)?;
        total += dfs_reduced(g, &y, code, remaining - 1)?;
    }
    Ok(total)
}

/// Brute-force `W_n`: evaluates all `(2r)^n` words.
pub fn walk_bruteforce(g: &MarkedGroup, n: usize, budget: u64) -> Result<BigUint, CountError> {
    walk_bruteforce_with(g, n, budget, Strategy::default())
}

pub fn walk_bruteforce_with(
    g: &MarkedGroup,
    n: usize,
    budget: u64,
    strategy: Strategy,
) -> Result<BigUint, CountError> {
    let words = BigUint::from(g.letter_count()).pow(n as u32);
    check_enum_budget(&words, budget)?;
    if n == 0 {
        return Ok(BigUint::one());
    }
    let task = |first: usize| -> Result<u64, GroupError> {
        let x = g.letter_image(first).clone();
        dfs_all(g, &x, n - 1)
    };
    let total = sum_over(0..g.letter_count(), task, strategy)?;
    Ok(BigUint::from(total))
}

fn dfs_all(g: &MarkedGroup, x: &Element, remaining: usize) -> Result<u64, GroupError> {
    if remaining == 0 {
        return Ok(u64::from(g.is_identity(x)));
    }
    let mut total = 0;
    for code in 0..g.letter_count() {
        let y = g.step(x, code)?;
        total += dfs_all(g, &y, remaining - 1)?;
    }
    Ok(total)
}

fn sum_over<F>(range: std::ops::Range<usize>, task: F, strategy: Strategy) -> Result<u64, GroupError>
where
    F: Fn(usize) -> Result<u64, GroupError> + Sync + Send,
{
    match strategy {
        Strategy::Sequential => range.map(task).sum(),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            range.into_par_iter().map(task).sum()
        }
    }
}

type WalkLayer = HashMap<Element, BigUint>;
/// Per element, counts indexed by the code of the last letter.
type ReducedLayer = HashMap<Element, Vec<BigUint>>;

#[cfg(feature = "parallel")]
fn merge_walk(mut a: WalkLayer, b: WalkLayer) -> WalkLayer {
    if a.len() < b.len() {
        return merge_walk(b, a);
    }
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

#[cfg(feature = "parallel")]
fn merge_reduced(mut a: ReducedLayer, b: ReducedLayer) -> ReducedLayer {
    if a.len() < b.len() {
        return merge_reduced(b, a);
    }
    for (k, v) in b {
        match a.get_mut(&k) {
            Some(slot) => {
                for (s, x) in slot.iter_mut().zip(v) {
                    *s += x;
                }
            }
            None => {
                a.insert(k, v);
            }
        }
    }
    a
}

fn expand_walk(g: &MarkedGroup, prev: &WalkLayer, strategy: Strategy) -> Result<WalkLayer, GroupError> {
    let step = |mut acc: WalkLayer, (x, c): (&Element, &BigUint)| -> Result<WalkLayer, GroupError> {
        for code in 0..g.letter_count() {
            *acc.entry(g.step(x, code)?).or_default() += c;
        }
        Ok(acc)
    };
    match strategy.for_len(prev.len()) {
        Strategy::Sequential => prev.iter().try_fold(WalkLayer::new(), step),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            let entries: Vec<_> = prev.iter().collect();
            entries
                .into_par_iter()
                .try_fold(WalkLayer::new, step)
                .try_reduce(WalkLayer::new, |a, b| Ok(merge_walk(a, b)))
        }
    }
}

fn first_reduced_layer(g: &MarkedGroup) -> ReducedLayer {
    let letters = g.letter_count();
    let mut layer = ReducedLayer::new();
    for code in 0..letters {
        let slot = layer
            .entry(g.letter_image(code).clone())
            .or_insert_with(|| vec![BigUint::zero(); letters]);
        slot[code] += 1u32;
    }
    layer
}

fn expand_reduced(
    g: &MarkedGroup,
    prev: &ReducedLayer,
    strategy: Strategy,
) -> Result<ReducedLayer, GroupError> {
    let letters = g.letter_count();
    let step = |mut acc: ReducedLayer, (x, counts): (&Element, &Vec<BigUint>)| {
        let total: BigUint = counts.iter().sum();
        for code in 0..letters {
            // every predecessor letter except the inverse of `code`
            let c = &total - &counts[inverse_code(code)];
            if c.is_zero() {
                continue;
            }
            let y = g.step(x, code)?;
            let slot = acc.entry(y).or_insert_with(|| vec![BigUint::zero(); letters]);
            slot[code] += c;
        }
        Ok::<_, GroupError>(acc)
    };
    match strategy.for_len(prev.len()) {
        Strategy::Sequential => prev.iter().try_fold(ReducedLayer::new(), step),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            let entries: Vec<_> = prev.iter().collect();
            entries
                .into_par_iter()
                .try_fold(ReducedLayer::new, step)
                .try_reduce(ReducedLayer::new, |a, b| Ok(merge_reduced(a, b)))
        }
    }
}

fn sum_pairs<K, V, F>(small: &HashMap<K, V>, big: &HashMap<K, V>, term: F, strategy: Strategy) -> BigUint
where
    K: std::hash::Hash + Eq + Sync,
    V: Sync,
    F: Fn(&V, &V) -> BigUint + Sync,
{
    let (small, big) = if small.len() <= big.len() { (small, big) } else { (big, small) };
    match strategy.for_len(small.len()) {
        Strategy::Sequential => {
            small.iter().filter_map(|(k, a)| big.get(k).map(|b| term(a, b))).sum()
        }
        #[cfg(feature = "parallel")]
        Strategy::Parallel => {
            use rayon::prelude::*;
            let entries: Vec<_> = small.iter().collect();
            entries
                .into_par_iter()
                .filter_map(|(k, a)| big.get(k).map(|b| term(a, b)))
                .reduce(BigUint::zero, |a, b| a + b)
        }
    }
}

/// Result of a DP run that may have stopped early on the state budget.
#[derive(Clone, Debug)]
pub struct PartialCounts {
    /// Entries `0..=n` for the largest `n` that could be completed.
    pub values: Vec<BigUint>,
    pub error: Option<CountError>,
}

fn half(n_max: usize) -> usize {
    n_max.div_ceil(2)
}

fn walk_counts_partial(g: &MarkedGroup, n_max: usize, budget: usize, strategy: Strategy) -> PartialCounts {
    let h = half(n_max);
    let mut layers: Vec<WalkLayer> = vec![HashMap::from([(g.identity().clone(), BigUint::one())])];
    let mut error = None;
    for k in 1..=h {
        match expand_walk(g, &layers[k - 1], strategy) {
            Ok(next) if next.len() <= budget => layers.push(next),
            Ok(_) => {
                error = Some(GroupError::BallBudgetExceeded { radius: k, budget }.into());
                break;
            }
            Err(e) => {
                error = Some(e.into());
                break;
            }
        }
    }
    let top = layers.len() - 1;
    let reach = if error.is_some() { (2 * top).min(n_max) } else { n_max };
    let values = (0..=reach)
        .map(|n| {
            if n <= top {
                layers[n].get(g.identity()).cloned().unwrap_or_default()
            } else {
                sum_pairs(&layers[top], &layers[n - top], |a, b| a * b, strategy)
            }
        })
        .collect();
    PartialCounts { values, error }
}

fn gamma_dp_partial(g: &MarkedGroup, n_max: usize, budget: usize, strategy: Strategy) -> PartialCounts {
    let h = half(n_max);
    // layer 0 holds only the empty word; it has no last letter and is handled apart
    let mut layers: Vec<ReducedLayer> = vec![ReducedLayer::new()];
    let mut error = None;
    for k in 1..=h {
        let next = if k == 1 {
            Ok(first_reduced_layer(g))
        } else {
            expand_reduced(g, &layers[k - 1], strategy)
        };
        match next {
            Ok(next) if next.len() <= budget => layers.push(next),
            Ok(_) => {
                error = Some(GroupError::BallBudgetExceeded { radius: k, budget }.into());
                break;
            }
            Err(e) => {
                error = Some(e.into());
                break;
            }
        }
    }
    let top = layers.len() - 1;
    let reach = if error.is_some() { (2 * top).min(n_max) } else { n_max };
    let pair = |a: &Vec<BigUint>, b: &Vec<BigUint>| {
        let sa: BigUint = a.iter().sum();
        let sb: BigUint = b.iter().sum();
        let same: BigUint = a.iter().zip(b).map(|(x, y)| x * y).sum();
        sa * sb - same
    };
    let values = (0..=reach)
        .map(|n| {
            if n == 0 {
                BigUint::one()
            } else if n <= top {
                layers[n].get(g.identity()).map(|v| v.iter().sum()).unwrap_or_default()
            } else {
                sum_pairs(&layers[top], &layers[n - top], pair, strategy)
            }
        })
        .collect();
    PartialCounts { values, error }
}

fn complete(p: PartialCounts) -> Result<Vec<BigUint>, CountError> {
    match p.error {
        Some(e) => Err(e),
        None => Ok(p.values),
    }
}

/// `γ_0..γ_{n_max}` by the non-backtracking transfer DP.
pub fn gamma_dp(g: &MarkedGroup, n_max: usize, budget: usize) -> Result<Vec<BigUint>, CountError> {
    gamma_dp_with(g, n_max, budget, Strategy::default())
}

pub fn gamma_dp_with(
    g: &MarkedGroup,
    n_max: usize,
    budget: usize,
    strategy: Strategy,
) -> Result<Vec<BigUint>, CountError> {
    complete(gamma_dp_partial(g, n_max, budget, strategy))
}

/// `W_0..W_{n_max}` by the walk DP over group elements.
pub fn walk_counts(g: &MarkedGroup, n_max: usize, budget: usize) -> Result<Vec<BigUint>, CountError> {
    walk_counts_with(g, n_max, budget, Strategy::default())
}

pub fn walk_counts_with(
    g: &MarkedGroup,
    n_max: usize,
    budget: usize,
    strategy: Strategy,
) -> Result<Vec<BigUint>, CountError> {
    complete(walk_counts_partial(g, n_max, budget, strategy))
}

/// Both sequences for `0..=n_max`.
pub fn count_table(g: &MarkedGroup, n_max: usize, budget: usize) -> Result<CountTable, CountError> {
    let (table, err) = count_table_partial(g, n_max, budget);
    match err {
        Some(e) => Err(e),
        None => Ok(table),
    }
}

/// Like [`count_table`], but on a budget failure returns the longest complete
/// prefix together with the error.
pub fn count_table_partial(
    g: &MarkedGroup,
    n_max: usize,
    budget: usize,
) -> (CountTable, Option<CountError>) {
    let strategy = Strategy::default();
    let gamma = gamma_dp_partial(g, n_max, budget, strategy);
    let walk = walk_counts_partial(g, n_max, budget, strategy);
    let len = gamma.values.len().min(walk.values.len());
    let table = CountTable {
        group: g.name().to_string(),
        rank: g.rank(),
        gamma: gamma.values[..len].to_vec(),
        walk: walk.values[..len].to_vec(),
    };
    (table, gamma.error.or(walk.error))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::preset;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn bruteforce_examples() {
        let trivial = preset("trivial").unwrap();
        let z2 = preset("zsquared").unwrap();
        assert_eq!(gamma_bruteforce(&trivial, 3, DEFAULT_ENUM_BUDGET).unwrap(), BigUint::from(36u32));
        assert_eq!(gamma_bruteforce(&z2, 4, DEFAULT_ENUM_BUDGET).unwrap(), BigUint::from(8u32));
        assert_eq!(gamma_bruteforce(&z2, 2, DEFAULT_ENUM_BUDGET).unwrap(), BigUint::zero());
        assert_eq!(walk_bruteforce(&z2, 2, DEFAULT_ENUM_BUDGET).unwrap(), BigUint::from(4u32));
        let klein = preset("z2xz2").unwrap();
        assert_eq!(gamma_bruteforce(&klein, 2, DEFAULT_ENUM_BUDGET).unwrap(), BigUint::from(4u32));
        assert_eq!(walk_bruteforce(&klein, 2, DEFAULT_ENUM_BUDGET).unwrap(), BigUint::from(8u32));
    }

    #[test]
    fn enumeration_budget_enforced() {
        let g = preset("trivial").unwrap();
        assert!(matches!(
            gamma_bruteforce(&g, 20, DEFAULT_ENUM_BUDGET),
            Err(CountError::EnumerationBudget { .. })
        ));
        assert!(matches!(walk_bruteforce(&g, 30, 1000), Err(CountError::EnumerationBudget { .. })));
    }

    #[test]
    fn dp_examples() {
        let trivial = preset("trivial").unwrap();
        let gamma = gamma_dp(&trivial, 8, 100).unwrap();
        for (n, g) in gamma.iter().enumerate() {
            let expected = if n == 0 { 1 } else { 4 * 3u64.pow(n as u32 - 1) };
            assert_eq!(*g, BigUint::from(expected));
        }
        let walk = walk_counts(&trivial, 7, 100).unwrap();
        for (n, w) in walk.iter().enumerate() {
            assert_eq!(*w, BigUint::from(4u64.pow(n as u32)));
        }
        assert_eq!(gamma_dp(&preset("z2xz2").unwrap(), 2, 100).unwrap(), big(&[1, 0, 4]));
        assert_eq!(walk_counts(&preset("zsquared").unwrap(), 2, 100).unwrap(), big(&[1, 0, 4]));
        for n in 0..3 {
            assert_eq!(gamma_dp(&preset("sl2z").unwrap(), n, 100).unwrap()[0], BigUint::one());
        }
    }

    #[test]
    fn cli_reference_tables() {
        let t = count_table(&preset("trivial").unwrap(), 6, 100).unwrap();
        assert_eq!(t.gamma, big(&[1, 4, 12, 36, 108, 324, 972]));
        // independent enumeration and the expansion of the exact γ(z) both give γ_4 = 60
        let t = count_table(&preset("z2xz2").unwrap(), 4, 100).unwrap();
        assert_eq!(t.gamma, big(&[1, 0, 4, 0, 60]));
        let t = count_table(&preset("zsquared").unwrap(), 4, 100).unwrap();
        assert_eq!(t.gamma, big(&[1, 0, 0, 0, 8]));
    }

    #[test]
    fn strategies_agree() {
        for name in ["zsquared", "s3", "sl2z"] {
            let g = preset(name).unwrap();
            let results: Vec<_> = Strategy::available()
                .into_iter()
                .map(|s| (gamma_dp_with(&g, 12, 1 << 20, s).unwrap(), walk_counts_with(&g, 12, 1 << 20, s).unwrap()))
                .collect();
            assert!(results.windows(2).all(|w| w[0] == w[1]));
            let brute: Vec<_> = Strategy::available()
                .into_iter()
                .map(|s| gamma_bruteforce_with(&g, 8, DEFAULT_ENUM_BUDGET, s).unwrap())
                .collect();
            assert!(brute.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn budget_failure_keeps_prefix() {
        let g = preset("sl2z").unwrap();
        let (table, err) = count_table_partial(&g, 30, 200);
        assert!(matches!(err, Some(CountError::Group(GroupError::BallBudgetExceeded { .. }))));
        assert!(table.n_max() < 30);
        let full = count_table(&g, table.n_max(), 1 << 20).unwrap();
        assert_eq!(full, table);
    }

    #[test]
    fn invariants_and_parity() {
        for name in crate::groups::preset_names() {
            let g = preset(name).unwrap();
            let t = count_table(&g, 14, 1 << 20).unwrap();
            t.check_invariants().unwrap();
            if g.even_parity() {
                for n in (1..=14).step_by(2) {
                    assert!(t.gamma[n].is_zero() && t.walk[n].is_zero(), "{name} n={n}");
                }
            }
        }
    }

    #[test]
    fn broken_invariants_are_reported() {
        let mut t = count_table(&preset("z2xz2").unwrap(), 6, 100).unwrap();
        t.walk[4] = BigUint::zero();
        assert!(t.check_invariants().unwrap_err().contains("W_4"));
        t.walk[4] = BigUint::from(10_000u32);
        assert!(t.check_invariants().is_err());
    }

    #[test]
    fn table_serialization() {
        let t = count_table(&preset("z2xz2").unwrap(), 10, 100).unwrap();
        let text = serde_json::to_string(&t).unwrap();
        assert!(text.contains("\"gamma\":[\"1\",\"0\",\"4\""));
        let back: CountTable = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
        let bad = text.replace("\"60\"", "\"6x0\"");
        assert!(serde_json::from_str::<CountTable>(&bad).is_err());
    }
}
