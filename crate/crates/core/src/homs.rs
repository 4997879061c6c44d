//! Predicted non-zero homomorphisms between cell modules.
//!
//! Two mechanisms are implemented. A sum reflection `s_{ε_i+ε_j, rp}` linking
//! `λ ⊇ μ` makes `μ^T ⊆ λ^T` maximal `(δ+rp)`-balanced, which gives
//! `Hom(Δ(λ^T), Δ(μ^T)) ≠ 0`. A difference reflection with `r ≠ 0` linking
//! `μ ⊴ λ` is a Carter–Payne pair, which gives `Hom(Δ(λ), Δ(μ)) ≠ 0` and,
//! after tensoring with the sign module, the transposed statement.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::abacus::OddPrime;
use crate::error::{domain, Error, Result};
use crate::par::{self, Execution};
use crate::partition::{contains, Partition};
use crate::weyl::{as_partition, shifted_reflect, Reflection, ReflectionKind};

/// Outcome of the two balance conditions for `μ ⊆ λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BalanceReport {
    /// Condition (i): contents of the skew pair off with sums `1 - δ`.
    pub pairing: bool,
    /// Columns in the domino band of contents `-δ/2`, `1 - δ/2`, when that band occurs.
    pub band_columns: Option<usize>,
    pub balanced: bool,
}

impl BalanceReport {
    /// True when the column condition alone decides against balance.
    pub fn band_is_load_bearing(&self) -> bool {
        self.pairing && !self.balanced
    }
}

/// Checks both balance conditions for `μ ⊆ λ` at `δ`.
///
/// An odd number of skew nodes can never be paired and reports unbalanced.
pub fn balance_report(mu: &Partition, lambda: &Partition, delta: i64) -> Result<BalanceReport> {
    let skew = mu.skew_cells(lambda)?;
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for node in &skew {
        *counts.entry(node.content()).or_default() += 1;
    }
    let target = 1 - delta;
    let pairing = skew.len() % 2 == 0
        && counts.iter().all(|(&c, &n)| {
            if 2 * c == target {
                n % 2 == 0
            } else {
                counts.get(&(target - c)).copied().unwrap_or(0) == n
            }
        });

    let band_columns = if delta % 2 == 0 { domino_band(&skew, delta) } else { None };
    let balanced = pairing && band_columns.is_none_or(|k| k % 2 == 0);
    Ok(BalanceReport { pairing, band_columns, balanced })
}

/// Nodes of content `1 - δ/2` sitting directly above nodes of content `-δ/2`,
/// one such domino per column over a run of consecutive columns, and no other
/// nodes of those contents. Returns the number of columns.
fn domino_band(skew: &[crate::partition::Node], delta: i64) -> Option<usize> {
    let (low, high) = (-delta / 2, 1 - delta / 2);
    let mut upper: Vec<_> = skew.iter().filter(|n| n.content() == high).collect();
    let lower: BTreeSet<(u32, u32)> =
        skew.iter().filter(|n| n.content() == low).map(|n| (n.row, n.col)).collect();
    if upper.is_empty() || upper.len() != lower.len() {
        return None;
    }
    upper.sort_by_key(|n| n.col);
    let stacked = upper.iter().all(|n| lower.contains(&(n.row + 1, n.col)));
    let contiguous = upper.windows(2).all(|w| w[1].col == w[0].col + 1);
    (stacked && contiguous).then_some(upper.len())
}

/// `μ ⊆ λ` are δ-balanced. Requires `μ ⊆ λ`.
pub fn delta_balanced(mu: &Partition, lambda: &Partition, delta: i64) -> Result<bool> {
    Ok(balance_report(mu, lambda, delta)?.balanced)
}

/// Every partition `ν` with `μ ⊆ ν ⊆ λ`, in lexicographic order.
pub fn intermediate_partitions(mu: &Partition, lambda: &Partition) -> Result<Vec<Partition>> {
    if !contains(mu, lambda) {
        return Err(domain!("{mu} is not contained in {lambda}"));
    }
    fn fill(k: usize, mu: &Partition, lambda: &Partition, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if k > lambda.len() {
            out.push(Partition::new(cur.clone()).expect("rows are weakly decreasing"));
            return;
        }
        let cap = cur.last().copied().unwrap_or(u32::MAX).min(lambda.part(k));
        for v in mu.part(k)..=cap {
            cur.push(v);
            fill(k + 1, mu, lambda, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    fill(1, mu, lambda, &mut Vec::new(), &mut out);
    out.sort();
    Ok(out)
}

/// δ-balanced with no balanced `ν` strictly between. Requires `μ ⊆ λ` balanced.
pub fn maximal_delta_balanced(mu: &Partition, lambda: &Partition, delta: i64) -> Result<bool> {
    if !delta_balanced(mu, lambda, delta)? {
        return Err(domain!("{mu} and {lambda} are not {delta}-balanced"));
    }
    for nu in intermediate_partitions(mu, lambda)? {
        if &nu == mu || &nu == lambda || (lambda.size() - nu.size()) % 2 == 1 {
            continue;
        }
        if delta_balanced(&nu, lambda, delta)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mechanism {
    SumReflectionMaximalBalanced,
    DiffReflectionCarterPayne,
}

/// A predicted `Hom(Δ(source), Δ(target)) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HomPrediction {
    /// Cell-module labels, as the theorem states the Hom.
    pub source: Partition,
    pub target: Partition,
    /// The partitions the witness maps between: `witness ·_δ larger = smaller`.
    pub larger: Partition,
    pub smaller: Partition,
    pub witness: Reflection,
    pub mechanism: Mechanism,
    /// Carter–Payne moves `d` nodes; zero for sum reflections.
    pub d: u32,
    /// The source label is `p`-regular, so a decomposition number is non-zero too.
    pub decomposition_flag: bool,
    /// For diff predictions, the label pair after tensoring with the sign module.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transposed: Option<(Partition, Partition)>,
}

impl HomPrediction {
    /// Re-applies the witness.
    pub fn replays(&self, delta: i64, p: OddPrime) -> bool {
        as_partition(&shifted_reflect(&self.larger, &self.witness, delta, p.get() as i64)).as_ref()
            == Some(&self.smaller)
    }
}

/// The two coordinates where `λ` and `μ` differ, with `λ - μ` there.
fn two_changes(lambda: &Partition, mu: &Partition) -> Option<((usize, i64), (usize, i64))> {
    let n = lambda.len().max(mu.len());
    let diffs: Vec<(usize, i64)> = (1..=n)
        .map(|k| (k, lambda.part(k) as i64 - mu.part(k) as i64))
        .filter(|&(_, d)| d != 0)
        .collect();
    match diffs[..] {
        [a, b] => Some((a, b)),
        _ => None,
    }
}

/// A sum reflection `s_{ε_i+ε_j, rp}` with `s ·_δ λ = μ`, if there is one.
pub fn sum_witness(lambda: &Partition, mu: &Partition, delta: i64, p: OddPrime) -> Option<Reflection> {
    let ((i, ci), (j, cj)) = two_changes(lambda, mu)?;
    if ci != cj {
        return None;
    }
    let pu = p.get() as i64;
    let rp = lambda.part(i) as i64 + lambda.part(j) as i64 - delta - i as i64 - j as i64 + 2 - ci;
    (rp % pu == 0).then(|| Reflection::sum(i, j, rp / pu).expect("i < j"))
}

/// A difference reflection `s_{ε_i-ε_j, rp}` with `s ·_δ λ = μ`, if there is one.
pub fn diff_witness(lambda: &Partition, mu: &Partition, p: OddPrime) -> Option<Reflection> {
    let ((i, ci), (j, cj)) = two_changes(lambda, mu)?;
    if ci != -cj {
        return None;
    }
    let pu = p.get() as i64;
    let rp = lambda.part(i) as i64 - lambda.part(j) as i64 - i as i64 + j as i64 - ci;
    (rp % pu == 0).then(|| Reflection::diff(i, j, rp / pu).expect("i < j"))
}

/// Prediction from a sum reflection between `λ` and `μ`, oriented so the larger
/// partition is the source.
pub fn hom_exists_sum(lambda: &Partition, mu: &Partition, delta: i64, p: OddPrime) -> Result<Option<HomPrediction>> {
    let Some(witness) = sum_witness(lambda, mu, delta, p) else {
        return Ok(None);
    };
    let (larger, smaller) = if contains(mu, lambda) { (lambda, mu) } else { (mu, lambda) };
    let shifted = delta + witness.r * p.get() as i64;
    let (source, target) = (larger.transpose(), smaller.transpose());
    if !maximal_delta_balanced(&target, &source, shifted)? {
        return Err(Error::Internal(format!(
            "{target} ⊆ {source} from {witness} is not maximal {shifted}-balanced"
        )));
    }
    Ok(Some(HomPrediction {
        decomposition_flag: source.is_p_regular(p.get())?,
        source,
        target,
        larger: larger.clone(),
        smaller: smaller.clone(),
        witness,
        mechanism: Mechanism::SumReflectionMaximalBalanced,
        d: 0,
        transposed: None,
    }))
}

/// Carter–Payne data `(i, j, d)`: `λ` is `μ` with `d` nodes raised from row `j`
/// to row `i`, `λ_i - λ_j + j - i - d ≡ 0 (mod p^e)` and `d < p^e`.
pub fn carter_payne_applicable(
    mu: &Partition,
    lambda: &Partition,
    p: OddPrime,
    e: u32,
) -> Result<Option<(usize, usize, u32)>> {
    if mu.size() != lambda.size() {
        return Err(domain!("{mu} and {lambda} have different sizes"));
    }
    let Some(((i, ci), (j, cj))) = two_changes(lambda, mu) else {
        return Ok(None);
    };
    if ci <= 0 || ci != -cj {
        return Ok(None);
    }
    let d = ci;
    let pe = (p.get() as i64).checked_pow(e).ok_or_else(|| domain!("p^e overflows"))?;
    let moved = lambda.part(i) as i64 - lambda.part(j) as i64 + j as i64 - i as i64 - d;
    Ok((moved % pe == 0 && d < pe).then_some((i, j, d as u32)))
}

/// Why [`hom_exists_diff`] produced nothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffRejection {
    NoWitness,
    TrivialLevel,
    TooManyNodes { d: u32 },
}

/// Prediction from a difference reflection, or the reason there is none.
pub fn explain_diff(
    lambda: &Partition,
    mu: &Partition,
    p: OddPrime,
) -> Result<std::result::Result<HomPrediction, DiffRejection>> {
    let Some(witness) = diff_witness(lambda, mu, p) else {
        return Ok(Err(DiffRejection::NoWitness));
    };
    if witness.r == 0 {
        return Ok(Err(DiffRejection::TrivialLevel));
    }
    let (larger, smaller) = if smaller_in_dominance(mu, lambda)? { (lambda, mu) } else { (mu, lambda) };
    let Some((_, _, d)) = carter_payne_applicable(smaller, larger, p, 1)? else {
        let (_, (_, moved)) = two_changes(larger, smaller).expect("witness found two changes");
        return Ok(Err(DiffRejection::TooManyNodes { d: moved.unsigned_abs() as u32 }));
    };
    Ok(Ok(HomPrediction {
        decomposition_flag: larger.transpose().is_p_regular(p.get())?,
        source: larger.clone(),
        target: smaller.clone(),
        larger: larger.clone(),
        smaller: smaller.clone(),
        witness,
        mechanism: Mechanism::DiffReflectionCarterPayne,
        d,
        transposed: Some((larger.transpose(), smaller.transpose())),
    }))
}

fn smaller_in_dominance(a: &Partition, b: &Partition) -> Result<bool> {
    a.dominance_leq(b)
}

/// [`explain_diff`] without the reason.
pub fn hom_exists_diff(lambda: &Partition, mu: &Partition, p: OddPrime) -> Result<Option<HomPrediction>> {
    Ok(explain_diff(lambda, mu, p)?.ok())
}

/// Limits on the reflections tried by [`enumerate_homs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBounds {
    pub max_index: usize,
    pub max_r: i64,
}

impl SearchBounds {
    /// Bounds large enough to find every prediction with source `λ`.
    pub fn sufficient(lambda: &Partition, delta: i64, p: OddPrime) -> Self {
        let n = lambda.size() as i64;
        let max_index = lambda.len() + lambda.size() as usize + 1;
        let max_r = (2 * n + delta.abs() + 2 * max_index as i64) / p.get() as i64 + 1;
        SearchBounds { max_index, max_r }
    }
}

/// All predictions with `λ` as the larger partition: sum reflections to some
/// `μ ⊊ λ` and Carter–Payne reflections to some `μ ⊲ λ`. Sorted and duplicate free.
pub fn enumerate_homs(
    lambda: &Partition,
    delta: i64,
    p: OddPrime,
    bounds: Option<SearchBounds>,
    exec: Execution,
) -> Result<Vec<HomPrediction>> {
    let bounds = bounds.unwrap_or_else(|| SearchBounds::sufficient(lambda, delta, p));
    let mut reflections = Vec::new();
    for i in 1..bounds.max_index {
        for j in i + 1..=bounds.max_index {
            for r in -bounds.max_r..=bounds.max_r {
                reflections.push(Reflection::sum(i, j, r)?);
                if r != 0 {
                    reflections.push(Reflection::diff(i, j, r)?);
                }
            }
        }
    }
    let pu = p.get() as i64;
    let found = par::try_map(exec, &reflections, |refl| -> Result<Option<HomPrediction>> {
        let Some(mu) = as_partition(&shifted_reflect(lambda, refl, delta, pu)) else {
            return Ok(None);
        };
        if &mu == lambda {
            return Ok(None);
        }
        let pred = match refl.kind {
            ReflectionKind::Sum if contains(&mu, lambda) => hom_exists_sum(lambda, &mu, delta, p)?,
            ReflectionKind::Diff if mu.dominance_leq(lambda)? => hom_exists_diff(lambda, &mu, p)?,
            _ => None,
        };
        Ok(pred.filter(|pr| &pr.larger == lambda))
    })?;
    let unique: BTreeSet<HomPrediction> = found.into_iter().flatten().collect();
    Ok(unique.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn p(n: u32) -> OddPrime {
        OddPrime::new(n).unwrap()
    }

    #[test]
    fn balanced_examples() {
        let l = pp("4,2");
        assert!(delta_balanced(&l, &l, 3).unwrap());
        let (mu, lam) = (pp("5,4").transpose(), pp("9,4,4").transpose());
        assert!(delta_balanced(&mu, &lam, 7).unwrap());
        assert!(maximal_delta_balanced(&mu, &lam, 7).unwrap());
        assert!(!delta_balanced(&pp("1"), &pp("2"), 1).unwrap());
        assert!(delta_balanced(&pp("2"), &pp("1"), 1).is_err());
    }

    #[test]
    fn non_maximal_pair() {
        let mut witness = None;
        'search: for lam in Partition::all_up_to(6) {
            for mu in intermediate_partitions(&Partition::empty(), &lam).unwrap() {
                for delta in -3..=3 {
                    if mu != lam
                        && delta_balanced(&mu, &lam, delta).unwrap()
                        && !maximal_delta_balanced(&mu, &lam, delta).unwrap()
                    {
                        witness = Some((mu, lam, delta));
                        break 'search;
                    }
                }
            }
        }
        let (mu, lam, delta) = witness.expect("some balanced pair is not maximal");
        let between = intermediate_partitions(&mu, &lam).unwrap();
        assert!(between
            .iter()
            .any(|nu| nu != &mu && nu != &lam && delta_balanced(nu, &lam, delta).unwrap()));
    }

    #[test]
    fn band_condition() {
        // δ = 2: contents 0 and -1 form a vertical domino in one column.
        let report = balance_report(&Partition::empty(), &pp("1,1"), 2).unwrap();
        assert!(report.pairing);
        assert_eq!(report.band_columns, Some(1));
        assert!(!report.balanced && report.band_is_load_bearing());
        // Two stacked dominoes in consecutive columns.
        let two = balance_report(&Partition::empty(), &pp("2,2,2"), 2).unwrap();
        assert_eq!(two.band_columns, Some(2));
        assert!(two.balanced);
    }

    #[test]
    fn sum_prediction_example() {
        let pred = hom_exists_sum(&pp("5,4"), &pp("9,4,4"), 2, p(5)).unwrap().unwrap();
        assert_eq!(pred.witness, Reflection::sum(1, 3, 1).unwrap());
        assert_eq!(pred.larger, pp("9,4,4"));
        assert_eq!(pred.source, pp("9,4,4").transpose());
        assert!(pred.replays(2, p(5)));
        assert!(hom_exists_sum(&pp("5,4"), &pp("5,4"), 2, p(5)).unwrap().is_none());
    }

    #[test]
    fn carter_payne_examples() {
        assert_eq!(carter_payne_applicable(&pp("5,2"), &pp("6,1"), p(5), 1).unwrap(), Some((1, 2, 1)));
        assert_eq!(carter_payne_applicable(&pp("5,2"), &pp("5,2"), p(5), 1).unwrap(), None);
        assert_eq!(carter_payne_applicable(&pp("5,2"), &pp("6,1"), p(3), 1).unwrap(), None);
        assert!(carter_payne_applicable(&pp("5,2"), &pp("6"), p(3), 1).is_err());
    }

    #[test]
    fn diff_prediction_example() {
        let pred = hom_exists_diff(&pp("6,1"), &pp("5,2"), p(5)).unwrap().unwrap();
        assert_eq!(pred.witness, Reflection::diff(1, 2, 1).unwrap());
        assert_eq!((pred.source.clone(), pred.target.clone(), pred.d), (pp("6,1"), pp("5,2"), 1));
        assert!(pred.replays(0, p(5)));
        assert_eq!(hom_exists_diff(&pp("5,2"), &pp("6,1"), p(5)).unwrap(), Some(pred));
        assert!(hom_exists_diff(&pp("6,1"), &pp("6,1"), p(5)).unwrap().is_none());
    }

    #[test]
    fn diff_rejects_large_moves() {
        // Three nodes move from row 2 to row 1 while p = 3.
        let (lam, mu) = (pp("8"), pp("5,3"));
        let refl = diff_witness(&lam, &mu, p(3)).unwrap();
        assert_ne!(refl.r, 0);
        assert_eq!(explain_diff(&lam, &mu, p(3)).unwrap(), Err(DiffRejection::TooManyNodes { d: 3 }));
    }

    #[test]
    fn enumeration_examples() {
        assert!(enumerate_homs(&Partition::empty(), 2, p(5), None, Execution::Sequential).unwrap().is_empty());
        let preds = enumerate_homs(&pp("9,4,4"), 2, p(5), None, Execution::Parallel).unwrap();
        assert!(preds.iter().any(|pr| pr.smaller == pp("5,4")));
        assert!(preds.iter().all(|pr| pr.replays(2, p(5))));
        let seq = enumerate_homs(&pp("9,4,4"), 2, p(5), None, Execution::Sequential).unwrap();
        assert_eq!(preds, seq);
    }
}
