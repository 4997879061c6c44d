//! Block membership for symmetric groups, Brauer algebras in characteristic
//! zero, and the limiting blocks of Brauer algebras in characteristic `p`.
//!
//! [`same_limiting_block`] and friends take partitions as they sit on the
//! abacus. The cell modules they describe are labelled by the *transposes*;
//! [`same_limiting_block_labels`] accepts labels and transposes for you.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::abacus::{Abacus, MoveTrace, OddPrime, OrbitInvariant};
use crate::error::{domain, Result};
use crate::par::{self, Execution};
use crate::partition::Partition;
use crate::reduction::{choose_b, congruent_b, connecting_trace_at};
use crate::weyl::{same_finite_w_orbit, stable_truncation};

/// Verdict plus the data it was read from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockCertificate {
    pub verdict: bool,
    pub b_used: usize,
    pub invariant_lambda: OrbitInvariant,
    pub invariant_mu: OrbitInvariant,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<MoveTrace>,
}

/// Nakayama: same `p`-core. Both partitions must have the same size.
pub fn same_symmetric_block(lambda: &Partition, mu: &Partition, p: OddPrime) -> Result<bool> {
    if lambda.size() != mu.size() {
        return Err(domain!("{lambda} and {mu} have different sizes"));
    }
    let b = lambda.len().max(mu.len());
    let counts = |x: &Partition| Abacus::from_partition(x, p, b).map(|a| a.runner_counts());
    let verdict = counts(lambda)? == counts(mu)?;
    debug_assert_eq!(
        verdict,
        lambda.p_core_strip(p.get())?.0 == mu.p_core_strip(p.get())?.0
    );
    Ok(verdict)
}

/// Whether `λ^T` and `μ^T` label cell modules in one limiting block at `δ̄`.
pub fn same_limiting_block(
    lambda: &Partition,
    mu: &Partition,
    delta: i64,
    p: OddPrime,
) -> Result<BlockCertificate> {
    let b = choose_b(lambda, mu, delta, p)?;
    let invariant_lambda = Abacus::from_partition(lambda, p, b)?.orbit_invariant();
    let invariant_mu = Abacus::from_partition(mu, p, b)?.orbit_invariant();
    Ok(BlockCertificate {
        verdict: invariant_lambda == invariant_mu,
        b_used: b,
        invariant_lambda,
        invariant_mu,
        trace: None,
    })
}

/// [`same_limiting_block`] with a connecting move word when the verdict is true.
pub fn same_limiting_block_with_trace(
    lambda: &Partition,
    mu: &Partition,
    delta: i64,
    p: OddPrime,
) -> Result<BlockCertificate> {
    let mut cert = same_limiting_block(lambda, mu, delta, p)?;
    if cert.verdict {
        cert.trace = Some(connecting_trace_at(lambda, mu, p, cert.b_used)?);
    }
    Ok(cert)
}

/// [`same_limiting_block`] for cell-module labels (transposes first).
pub fn same_limiting_block_labels(
    lambda_label: &Partition,
    mu_label: &Partition,
    delta: i64,
    p: OddPrime,
) -> Result<BlockCertificate> {
    same_limiting_block(&lambda_label.transpose(), &mu_label.transpose(), delta, p)
}

/// Characteristic-zero blocks: `μ ∈ W ·_δ λ`.
pub fn same_char0_block(lambda: &Partition, mu: &Partition, delta: i64) -> bool {
    let n = stable_truncation(lambda, mu, delta);
    same_finite_w_orbit(lambda, mu, delta, n).expect("stable truncation covers both partitions")
}

/// Partitions of `n, n-2, …` grouped into limiting-block classes.
///
/// Classes are sorted by their least member and members are sorted, both
/// lexicographically. These are orbit classes restricted to the label set;
/// at finite `n` an actual block may be a union of several of them.
pub fn block_classes(n: u32, delta: i64, p: OddPrime, exec: Execution) -> Result<Vec<Vec<Partition>>> {
    let labels: Vec<Partition> = (0..=n)
        .rev()
        .step_by(2)
        .flat_map(Partition::all_of_size)
        .collect();
    let b = congruent_b(n as u64, delta, p)?;
    let invariants = par::try_map(exec, &labels, |x| {
        Abacus::from_partition(x, p, b).map(|a| a.orbit_invariant())
    })?;
    let mut groups: BTreeMap<OrbitInvariant, Vec<Partition>> = BTreeMap::new();
    for (label, inv) in labels.into_iter().zip(invariants) {
        groups.entry(inv).or_default().push(label);
    }
    let mut classes: Vec<Vec<Partition>> = groups
        .into_values()
        .map(|mut class| {
            class.sort();
            class
        })
        .collect();
    classes.sort_by(|a, b| a[0].cmp(&b[0]));
    Ok(classes)
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
    fn symmetric_blocks() {
        assert!(same_symmetric_block(&pp("5,4"), &pp("8,1"), p(5)).unwrap());
        assert!(!same_symmetric_block(&pp("2"), &pp("1,1"), p(5)).unwrap());
        assert!(same_symmetric_block(&pp("3,1"), &pp("3,1"), p(3)).unwrap());
        assert!(same_symmetric_block(&pp("3"), &pp("2"), p(3)).is_err());
    }

    #[test]
    fn limiting_blocks() {
        let cert = same_limiting_block_with_trace(&pp("5,4"), &pp("9,4,4"), 2, p(5)).unwrap();
        assert!(cert.verdict);
        let trace = cert.trace.unwrap();
        let start = Abacus::from_partition(&pp("5,4"), p(5), cert.b_used).unwrap();
        assert_eq!(trace.end_state(&start).unwrap().to_partition(), pp("9,4,4"));

        let same = same_limiting_block_with_trace(&pp("3,1"), &pp("3,1"), 1, p(3)).unwrap();
        assert!(same.verdict && same.trace.unwrap().is_empty());

        let split = same_limiting_block_with_trace(&pp("5,4"), &pp("10,4"), 2, p(5)).unwrap();
        assert!(!split.verdict && split.trace.is_none());
        assert!(same_limiting_block(&pp("1"), &pp("1"), 0, p(3)).is_err());
    }

    #[test]
    fn labels_are_transposed() {
        let a = same_limiting_block_labels(&pp("2,2,2,2,1"), &pp("3,3,3,3,1,1,1,1,1"), 2, p(5)).unwrap();
        assert!(a.verdict);
    }

    #[test]
    fn char0_blocks() {
        assert!(same_char0_block(&pp("5,4"), &pp("9,4,4"), 7));
        assert!(same_char0_block(&pp("2,1"), &pp("2,1"), -4));
        assert!(!same_char0_block(&pp("1"), &Partition::empty(), 1));
    }

    #[test]
    fn classes_partition_the_labels() {
        assert_eq!(block_classes(0, 1, p(3), Execution::Sequential).unwrap(), vec![vec![Partition::empty()]]);
        let classes = block_classes(2, 1, p(3), Execution::Parallel).unwrap();
        let all: Vec<Partition> = classes.iter().flatten().cloned().collect();
        assert_eq!(all.len(), 3);
        for c in &classes {
            for x in c {
                for y in c {
                    assert!(same_limiting_block(x, y, 1, p(3)).unwrap().verdict);
                }
            }
        }
        for (k, a) in classes.iter().enumerate() {
            for b in &classes[k + 1..] {
                assert!(!same_limiting_block(&a[0], &b[0], 1, p(3)).unwrap().verdict);
            }
        }
        assert_eq!(
            block_classes(8, 2, p(5), Execution::Sequential).unwrap(),
            block_classes(8, 2, p(5), Execution::Parallel).unwrap()
        );
    }
}
