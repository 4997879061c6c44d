//! Partitions, Young diagrams and rim-hook stripping.
//!
//! Everything here works directly on the diagram `[λ]` and never goes through
//! the abacus, so the p-core computed by [`Partition::p_core_strip`] can be
//! used to cross-check the abacus module.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A weakly decreasing list of positive parts. Reads past the last part are 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPartition")]
pub struct Partition {
    parts: Vec<u32>,
}

#[derive(Deserialize)]
struct RawPartition {
    parts: Vec<u32>,
}

impl TryFrom<RawPartition> for Partition {
    type Error = Error;

    fn try_from(raw: RawPartition) -> Result<Self> {
        Partition::new(raw.parts)
    }
}

/// A node `(row, col)` of a Young diagram, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    pub row: u32,
    pub col: u32,
}

impl Node {
    pub fn new(row: u32, col: u32) -> Self {
        Node { row, col }
    }

    /// `col - row`.
    pub fn content(&self) -> i64 {
        self.col as i64 - self.row as i64
    }
}

impl Partition {
    /// Builds a partition, dropping trailing zeros. Parts must be weakly decreasing.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(domain!("parts {parts:?} are not weakly decreasing"));
        }
        if parts.contains(&0) {
            return Err(domain!("zero part before a positive part in {parts:?}"));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of (positive) parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|λ|`.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&x| x as u64).sum()
    }

    /// Part `i` (1-based); zero beyond the length and for `i = 0`.
    pub fn part(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn has_node(&self, node: Node) -> bool {
        node.row >= 1 && node.col >= 1 && node.col <= self.part(node.row as usize)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |c| Node::new(i as u32 + 1, c)))
    }

    pub fn transpose(&self) -> Partition {
        let width = self.part(1);
        let parts = (1..=width)
            .map(|j| self.parts.iter().take_while(|&&x| x >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// False iff some positive part value occurs `p` or more times.
    pub fn is_p_regular(&self, p: u32) -> Result<bool> {
        if p < 2 {
            return Err(domain!("p-regularity needs p >= 2, got {p}"));
        }
        let mut run = 0usize;
        for (k, &x) in self.parts.iter().enumerate() {
            run = if k > 0 && self.parts[k - 1] == x { run + 1 } else { 1 };
            if run >= p as usize {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Dominance order `self ⊴ other`; both must have the same size.
    pub fn dominance_leq(&self, other: &Partition) -> Result<bool> {
        if self.size() != other.size() {
            return Err(domain!(
                "dominance needs equal sizes, got {} and {}",
                self.size(),
                other.size()
            ));
        }
        let k_max = self.len().max(other.len());
        let (mut a, mut b) = (0u64, 0u64);
        for k in 1..=k_max {
            a += self.part(k) as u64;
            b += other.part(k) as u64;
            if a > b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self ⊆ other` as Young diagrams.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// The nodes of `[outer] \ [self]`, row by row.
    pub fn skew_cells(&self, outer: &Partition) -> Result<Vec<Node>> {
        if !self.is_contained_in(outer) {
            return Err(domain!("{self} is not contained in {outer}"));
        }
        Ok((1..=outer.len())
            .flat_map(|r| {
                (self.part(r) + 1..=outer.part(r)).map(move |c| Node::new(r as u32, c))
            })
            .collect())
    }

    /// Hook length at `node`, which must lie in the diagram.
    pub fn hook_length(&self, node: Node) -> u32 {
        let arm = self.part(node.row as usize) - node.col;
        let leg = self.parts.iter().skip(node.row as usize).take_while(|&&x| x >= node.col).count() as u32;
        arm + leg + 1
    }

    /// Nodes whose hook has exactly `p` nodes; each labels one removable rim p-hook.
    pub fn rim_hook_sites(&self, p: u32) -> Vec<Node> {
        self.nodes().filter(|&n| self.hook_length(n) == p).collect()
    }

    /// Removes the rim hook associated with the hook at `node`.
    pub fn remove_rim_hook(&self, node: Node) -> Result<Partition> {
        if !self.has_node(node) {
            return Err(domain!("node ({}, {}) is not in {self}", node.row, node.col));
        }
        let x = node.row as usize;
        let y = node.col;
        let foot = x + self.parts.iter().skip(x).take_while(|&&v| v >= y).count();
        let mut parts = self.parts.clone();
        for r in x..foot {
            parts[r - 1] = self.parts[r] - 1;
        }
        parts[foot - 1] = y - 1;
        Partition::new(parts)
    }

    /// Strips rim p-hooks until none remain. Returns `(core, weight)`.
    pub fn p_core_strip(&self, p: u32) -> Result<(Partition, u64)> {
        if p < 2 {
            return Err(domain!("p-core needs p >= 2, got {p}"));
        }
        let mut current = self.clone();
        let mut weight = 0;
        while let Some(&site) = current.rim_hook_sites(p).first() {
            current = current.remove_rim_hook(site)?;
            weight += 1;
        }
        Ok((current, weight))
    }

    /// All partitions of `n`, in increasing lexicographic order of parts.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition { parts: prefix.clone() });
                return;
            }
            for first in (1..=rest.min(max)).rev() {
                prefix.push(first);
                rec(rest - first, first, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// All partitions of size at most `n`, sorted.
    pub fn all_up_to(n: u32) -> Vec<Partition> {
        let mut out: Vec<_> = (0..=n).flat_map(Partition::all_of_size).collect();
        out.sort();
        out
    }

    /// Compact text form, `5^2,4,1`; empty partition is the empty string.
    pub fn to_text(&self) -> String {
        let mut chunks = Vec::new();
        let mut k = 0;
        while k < self.parts.len() {
            let v = self.parts[k];
            let run = self.parts[k..].iter().take_while(|&&x| x == v).count();
            chunks.push(if run > 1 { format!("{v}^{run}") } else { v.to_string() });
            k += run;
        }
        chunks.join(",")
    }
}

/// `μ ⊆ λ`, reading missing parts as 0.
pub fn contains(mu: &Partition, lambda: &Partition) -> bool {
    mu.is_contained_in(lambda)
}

/// Total order used for deterministic output: by size, then lexicographic.
pub fn size_then_lex(a: &Partition, b: &Partition) -> Ordering {
    a.size().cmp(&b.size()).then_with(|| a.cmp(b))
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Accepts `5,4`, `5^2,4^2,3,2^3,1`, optional surrounding parentheses;
    /// whitespace is ignored and the empty string is the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = cleaned
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(&cleaned);
        if body.is_empty() {
            return Ok(Partition::empty());
        }
        let mut parts = Vec::new();
        for chunk in body.split(',') {
            let (value, count) = match chunk.split_once('^') {
                Some((v, e)) => (v, e),
                None => (chunk, "1"),
            };
            let value: u32 = value
                .parse()
                .map_err(|_| Error::Parse(format!("bad part {chunk:?} in {s:?}")))?;
            let count: usize = count
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in {chunk:?}")))?;
            if value == 0 {
                return Err(Error::Parse(format!("zero part in {s:?}")));
            }
            parts.extend(std::iter::repeat_n(value, count));
        }
        Partition::new(parts).map_err(|e| Error::Parse(e.to_string()))
    }
}
