//! The p-runner abacus with paired runners.
//!
//! Positions are numbered row-major from 0; runner of `q` is `q mod p`, row is
//! `q / p`. Beads are labelled by rank: bead 1 sits at the largest occupied
//! position. Labels are recomputed after every move.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, illegal, Error, Result};
use crate::partition::Partition;

/// An odd prime, the only runner counts this crate supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct OddPrime(u32);

impl OddPrime {
    pub fn new(p: u32) -> Result<Self> {
        let prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if !prime || p == 2 {
            return Err(domain!("p must be an odd prime, got {p}"));
        }
        Ok(OddPrime(p))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// `(p - 1) / 2`, the index of the last left-hand runner.
    pub fn half(self) -> u32 {
        (self.0 - 1) / 2
    }

    /// Reduces an integer into `0..p`.
    pub fn reduce(self, x: i64) -> i64 {
        x.rem_euclid(self.0 as i64)
    }
}

impl TryFrom<u32> for OddPrime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        OddPrime::new(p)
    }
}

impl From<OddPrime> for u32 {
    fn from(p: OddPrime) -> u32 {
        p.0
    }
}

impl fmt::Display for OddPrime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `2b ≡ 2 - δ (mod p)`.
pub fn check_bead_congruence(b: u64, delta: i64, p: OddPrime) -> bool {
    p.reduce(2 * b as i64 - 2 + delta) == 0
}

/// `(λ_1 - 1 + b, λ_2 - 2 + b, …, 1, 0)`, strictly decreasing, length `b`.
pub fn beta_sequence(lambda: &Partition, b: usize) -> Result<Vec<u32>> {
    if b < lambda.len() {
        return Err(domain!("b = {b} beads cannot hold {lambda} with {} parts", lambda.len()));
    }
    (1..=b)
        .map(|i| {
            let v = lambda.part(i) as u64 + b as u64 - i as u64;
            u32::try_from(v).map_err(|_| domain!("bead position {v} overflows"))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    /// Bead `i` slides down `r` spaces, bead `j` slides up `r` spaces.
    A,
    /// Beads `i` and `j` both travel `r` spaces up, over the arc and down: `q ↦ rp - q`.
    D,
}

/// An elementary move `a^r_(i,j)` or `d^r_(i,j)` on bead labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Move {
    pub kind: MoveKind,
    pub i: usize,
    pub j: usize,
    pub r: u32,
}

impl Move {
    pub fn a(i: usize, j: usize, r: u32) -> Self {
        Move { kind: MoveKind::A, i, j, r }
    }

    pub fn d(i: usize, j: usize, r: u32) -> Self {
        Move { kind: MoveKind::D, i, j, r }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            MoveKind::A => 'a',
            MoveKind::D => 'd',
        };
        write!(f, "{k}^{}_({},{})", self.r, self.i, self.j)
    }
}

/// An ordered list of moves; move `k` applies to the `k`-th snapshot of a replay.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoveTrace {
    moves: Vec<Move>,
}

impl MoveTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_moves(moves: Vec<Move>) -> Self {
        MoveTrace { moves }
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn push(&mut self, mv: Move) {
        self.moves.push(mv);
    }

    pub fn extend(&mut self, other: MoveTrace) {
        self.moves.extend(other.moves);
    }

    /// All intermediate abaci, starting with `start`; fails at the first illegal move.
    pub fn replay(&self, start: &Abacus) -> Result<Vec<Abacus>> {
        let mut states = Vec::with_capacity(self.moves.len() + 1);
        states.push(start.clone());
        for (k, mv) in self.moves.iter().enumerate() {
            let next = states[k]
                .apply(mv)
                .map_err(|e| illegal!("step {k} ({mv}): {e}"))?;
            states.push(next);
        }
        Ok(states)
    }

    pub fn end_state(&self, start: &Abacus) -> Result<Abacus> {
        Ok(self.replay(start)?.pop().expect("replay yields the start state"))
    }

    /// The trace that undoes `self` from its end state back to `start`.
    pub fn inverse(&self, start: &Abacus) -> Result<MoveTrace> {
        let states = self.replay(start)?;
        let mut moves = Vec::with_capacity(self.moves.len());
        for (k, mv) in self.moves.iter().enumerate().rev() {
            moves.push(states[k].inverse_move(mv)?);
        }
        Ok(MoveTrace { moves })
    }
}

/// Runner-0 count, paired-runner sums and size parity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitInvariant {
    pub runner0: usize,
    /// `paired[t - 1]` = beads on runner `t` plus beads on runner `p - t`.
    pub paired: Vec<usize>,
    pub parity: u8,
}

/// Bead positions on a `p`-runner abacus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Abacus {
    p: OddPrime,
    /// Strictly decreasing; index `k` holds bead `k + 1`.
    beads: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct AbacusJson {
    p: u32,
    b: usize,
    occupied: Vec<u32>,
}

impl Serialize for Abacus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AbacusJson { p: self.p.get(), b: self.b(), occupied: self.occupied() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Abacus {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = AbacusJson::deserialize(d)?;
        let p = OddPrime::new(raw.p).map_err(serde::de::Error::custom)?;
        let ab = Abacus::from_positions(p, raw.occupied).map_err(serde::de::Error::custom)?;
        if ab.b() != raw.b {
            return Err(serde::de::Error::custom("b does not match the occupied count"));
        }
        Ok(ab)
    }
}

impl Abacus {
    pub fn from_partition(lambda: &Partition, p: OddPrime, b: usize) -> Result<Self> {
        Ok(Abacus { p, beads: beta_sequence(lambda, b)? })
    }

    pub fn from_positions(p: OddPrime, positions: impl IntoIterator<Item = u32>) -> Result<Self> {
        let list: Vec<u32> = positions.into_iter().collect();
        let set: BTreeSet<u32> = list.iter().copied().collect();
        if set.len() != list.len() {
            return Err(domain!("repeated bead position in {list:?}"));
        }
        Ok(Abacus { p, beads: set.into_iter().rev().collect() })
    }

    pub fn p(&self) -> OddPrime {
        self.p
    }

    pub fn b(&self) -> usize {
        self.beads.len()
    }

    /// Occupied positions, ascending.
    pub fn occupied(&self) -> Vec<u32> {
        self.beads.iter().rev().copied().collect()
    }

    pub fn is_occupied(&self, q: u32) -> bool {
        self.label_of(q).is_some()
    }

    /// Position of bead `label` (1-based).
    pub fn position(&self, label: usize) -> Result<u32> {
        if label == 0 || label > self.b() {
            return Err(Error::Usage(format!("no bead {label} among {} beads", self.b())));
        }
        Ok(self.beads[label - 1])
    }

    /// Label of the bead at `q`, if any.
    pub fn label_of(&self, q: u32) -> Option<usize> {
        self.beads.binary_search_by(|x| q.cmp(x)).ok().map(|k| k + 1)
    }

    pub fn runner(&self, q: u32) -> u32 {
        q % self.p.get()
    }

    pub fn row(&self, q: u32) -> u32 {
        q / self.p.get()
    }

    /// Positions of the beads on runner `t`, top to bottom.
    pub fn runner_beads(&self, t: u32) -> Vec<u32> {
        self.beads.iter().rev().copied().filter(|&q| self.runner(q) == t).collect()
    }

    pub fn to_partition(&self) -> Partition {
        let b = self.b() as u32;
        let parts = self
            .beads
            .iter()
            .enumerate()
            .map(|(k, &q)| q + k as u32 + 1 - b)
            .collect();
        Partition::new(parts).expect("strictly decreasing β-sequence decodes to a partition")
    }

    /// `|λ|` computed from positions.
    pub fn size(&self) -> u64 {
        let b = self.b() as u64;
        self.beads.iter().map(|&q| q as u64).sum::<u64>() - b * b.saturating_sub(1) / 2
    }

    pub fn runner_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.p.get() as usize];
        for &q in &self.beads {
            counts[self.runner(q) as usize] += 1;
        }
        counts
    }

    pub fn orbit_invariant(&self) -> OrbitInvariant {
        let counts = self.runner_counts();
        let p = self.p.get() as usize;
        OrbitInvariant {
            runner0: counts[0],
            paired: (1..=self.p.half() as usize).map(|t| counts[t] + counts[p - t]).collect(),
            parity: (self.size() % 2) as u8,
        }
    }

    /// Slides every bead as far up its runner as it goes; returns `(core, weight)`.
    pub fn p_core(&self) -> (Partition, u64) {
        let p = self.p.get();
        let mut slid = 0u64;
        let mut packed = Vec::with_capacity(self.b());
        for t in 0..p {
            for (k, q) in self.runner_beads(t).into_iter().enumerate() {
                slid += (self.row(q) - k as u32) as u64;
                packed.push(t + k as u32 * p);
            }
        }
        let core = Abacus::from_positions(self.p, packed).expect("packing keeps positions distinct");
        (core.to_partition(), slid)
    }

    /// Moves the beads at `src` to `dst` simultaneously.
    fn relocate(&self, src: [u32; 2], dst: [i64; 2]) -> Result<Abacus> {
        if dst[0] == dst[1] {
            return Err(illegal!("both beads would land on position {}", dst[0]));
        }
        let mut beads: BTreeSet<u32> = self.beads.iter().copied().collect();
        beads.remove(&src[0]);
        beads.remove(&src[1]);
        for &t in &dst {
            if t < 0 {
                return Err(illegal!("target position {t} is off the top of the abacus"));
            }
            let t = u32::try_from(t).map_err(|_| illegal!("target position {t} overflows"))?;
            if !beads.insert(t) {
                return Err(illegal!("target position {t} is occupied"));
            }
        }
        Ok(Abacus { p: self.p, beads: beads.into_iter().rev().collect() })
    }

    fn labels_to_positions(&self, i: usize, j: usize, r: u32) -> Result<(u32, u32)> {
        if i == j {
            return Err(Error::Usage(format!("a move needs two distinct beads, got {i} twice")));
        }
        if r == 0 {
            return Err(Error::Usage("moves need r >= 1".into()));
        }
        Ok((self.position(i)?, self.position(j)?))
    }

    /// `a^r_(i,j)`: bead `i` down `r` spaces, bead `j` up `r` spaces.
    pub fn move_a(&self, i: usize, j: usize, r: u32) -> Result<Abacus> {
        let (qi, qj) = self.labels_to_positions(i, j, r)?;
        let shift = r as i64 * self.p.get() as i64;
        self.relocate([qi, qj], [qi as i64 + shift, qj as i64 - shift])
    }

    /// `d^r_(i,j)`: each bead goes from `q` to `rp - q`.
    pub fn move_d(&self, i: usize, j: usize, r: u32) -> Result<Abacus> {
        let (qi, qj) = self.labels_to_positions(i, j, r)?;
        let rp = r as i64 * self.p.get() as i64;
        self.relocate([qi, qj], [rp - qi as i64, rp - qj as i64])
    }

    pub fn apply(&self, mv: &Move) -> Result<Abacus> {
        match mv.kind {
            MoveKind::A => self.move_a(mv.i, mv.j, mv.r),
            MoveKind::D => self.move_d(mv.i, mv.j, mv.r),
        }
    }

    /// The move that undoes `mv` when applied to `self.apply(mv)`.
    pub fn inverse_move(&self, mv: &Move) -> Result<Move> {
        let after = self.apply(mv)?;
        let (qi, qj) = (self.position(mv.i)?, self.position(mv.j)?);
        let shift = mv.r * self.p.get();
        let lbl = |q: u32| after.label_of(q).ok_or_else(|| Error::Internal(format!("lost bead at {q}")));
        Ok(match mv.kind {
            MoveKind::A => Move::a(lbl(qj - shift)?, lbl(qi + shift)?, mv.r),
            MoveKind::D => Move::d(lbl(shift - qi)?, lbl(shift - qj)?, mv.r),
        })
    }

    pub(crate) fn move_by_position(&self, kind: MoveKind, qa: u32, qb: u32, r: u32) -> Result<(Move, Abacus)> {
        let lbl = |q: u32| self.label_of(q).ok_or_else(|| illegal!("no bead at position {q}"));
        let mv = Move { kind, i: lbl(qa)?, j: lbl(qb)?, r };
        Ok((mv, self.apply(&mv)?))
    }

    /// (M1): bead `up` one space up, bead `down` one space down; this is `a^1_(down,up)`.
    pub fn move_m1(&self, up: usize, down: usize) -> Result<(Abacus, MoveTrace)> {
        let mv = Move::a(down, up, 1);
        Ok((self.apply(&mv)?, MoveTrace::from_moves(vec![mv])))
    }

    /// (M2): consecutive beads `i`, `j` of one runner go together over the arc (`d^r_(i,j)`).
    pub fn move_m2(&self, i: usize, j: usize, r: u32) -> Result<(Abacus, MoveTrace)> {
        let (qi, qj) = self.labels_to_positions(i, j, r)?;
        let t = self.runner(qi);
        if self.runner(qj) != t {
            return Err(Error::Usage(format!("beads {i} and {j} are on different runners")));
        }
        let (lo, hi) = (qi.min(qj), qi.max(qj));
        let p = self.p.get();
        if (lo + p..hi).step_by(p as usize).any(|q| self.is_occupied(q)) {
            return Err(Error::Usage(format!("beads {i} and {j} are not consecutive on runner {t}")));
        }
        let mv = Move::d(i, j, r);
        Ok((self.apply(&mv)?, MoveTrace::from_moves(vec![mv])))
    }

    /// (M3): beads `i` and `j` each one space up, or bead `i` two spaces up when `i == j`.
    ///
    /// Expands to two (M1) moves against a pair of beads on `helper`, then
    /// `d^r` and `d^(r-1)` on that pair, which puts the helper beads back.
    pub fn move_m3(&self, i: usize, j: usize, helper: u32) -> Result<(Abacus, MoveTrace)> {
        let (qi, qj) = (self.position(i)?, self.position(j)?);
        self.raise_pair(qi, qj, helper)
    }

    /// (M4): beads `i` and `j` each one space down, or bead `i` two spaces down when `i == j`.
    /// The trace is the inverse of the (M3) expansion from the end state.
    pub fn move_m4(&self, i: usize, j: usize, helper: u32) -> Result<(Abacus, MoveTrace)> {
        let (qi, qj) = (self.position(i)?, self.position(j)?);
        self.lower_pair(qi, qj, helper)
    }

    /// Position-level (M3); `qi == qj` raises one bead by two.
    pub(crate) fn raise_pair(&self, qi: u32, qj: u32, helper: u32) -> Result<(Abacus, MoveTrace)> {
        let p = self.p.get();
        if helper >= p {
            return Err(Error::Usage(format!("runner {helper} does not exist")));
        }
        let target = self.raised(qi, qj)?;
        let helpers = self.runner_beads(helper);
        if helpers.len() < 2 {
            return Err(Error::Usage(format!("helper runner {helper} has fewer than two beads")));
        }
        // Lowest helper beads first.
        let hs: Vec<u32> = helpers.into_iter().rev().collect();
        let mut last_err = None;
        for a in 0..hs.len() {
            for b in a + 1..hs.len() {
                for (u1, h1, u2, h2) in [
                    (qi, hs[a], qj, hs[b]),
                    (qi, hs[b], qj, hs[a]),
                    (qj, hs[a], qi, hs[b]),
                    (qj, hs[b], qi, hs[a]),
                ] {
                    if u1 == h1 || u2 == h2 {
                        continue;
                    }
                    match self.try_m3_expansion([u1, h1, u2, h2], &target) {
                        Ok(trace) => return Ok((target, trace)),
                        Err(e) => last_err = Some(e),
                    }
                }
            }
        }
        Err(last_err.unwrap_or_else(|| illegal!("no legal (M3) expansion via runner {helper}")))
    }

    pub(crate) fn lower_pair(&self, qi: u32, qj: u32, helper: u32) -> Result<(Abacus, MoveTrace)> {
        let p = self.p.get();
        let end = if qi == qj {
            self.relocate_one(qi, qi as i64 + 2 * p as i64, Some(qi + p))?
        } else {
            self.relocate([qi, qj], [(qi + p) as i64, (qj + p) as i64])?
        };
        let (lo_i, lo_j) = if qi == qj { (qi + 2 * p, qi + 2 * p) } else { (qi + p, qj + p) };
        let (back, up_trace) = end.raise_pair(lo_i, lo_j, helper)?;
        if &back != self {
            return Err(Error::Internal("(M4) reversal does not return to the start".into()));
        }
        Ok((end.clone(), up_trace.inverse(&end)?))
    }

    /// Net end state of (M3), checking legality of the net displacement.
    fn raised(&self, qi: u32, qj: u32) -> Result<Abacus> {
        let p = self.p.get();
        for q in [qi, qj] {
            if !self.is_occupied(q) {
                return Err(illegal!("no bead at position {q}"));
            }
        }
        if qi == qj {
            self.relocate_one(qi, qi as i64 - 2 * p as i64, qi.checked_sub(p))
        } else {
            self.relocate([qi, qj], [qi as i64 - p as i64, qj as i64 - p as i64])
        }
    }

    fn relocate_one(&self, src: u32, dst: i64, via: Option<u32>) -> Result<Abacus> {
        if let Some(v) = via {
            if self.is_occupied(v) && v != src {
                return Err(illegal!("bead at {src} cannot pass occupied position {v}"));
            }
        }
        if dst < 0 {
            return Err(illegal!("target position {dst} is off the top of the abacus"));
        }
        let dst = dst as u32;
        if self.is_occupied(dst) {
            return Err(illegal!("target position {dst} is occupied"));
        }
        let mut beads: BTreeSet<u32> = self.beads.iter().copied().collect();
        beads.remove(&src);
        beads.insert(dst);
        Ok(Abacus { p: self.p, beads: beads.into_iter().rev().collect() })
    }

    /// Runs the four-move (M3) expansion. `roles` = `[u1, h1, u2, h2]` as
    /// starting positions: `u1` up / `h1` down, then `u2` up / `h2` down,
    /// then `d^r` and `d^(r-1)` on the two helper beads.
    fn try_m3_expansion(&self, roles: [u32; 4], target: &Abacus) -> Result<MoveTrace> {
        let p = self.p.get();
        // Track bead identities by their starting position.
        let ids: Vec<u32> = {
            let mut v = roles.to_vec();
            v.sort_unstable();
            v.dedup();
            v
        };
        let mut pos: Vec<(u32, u32)> = ids.iter().map(|&q| (q, q)).collect();
        let cur = |pos: &Vec<(u32, u32)>, id: u32| pos.iter().find(|e| e.0 == id).unwrap().1;
        let set = |pos: &mut Vec<(u32, u32)>, id: u32, q: u32| {
            pos.iter_mut().find(|e| e.0 == id).unwrap().1 = q;
        };

        let mut trace = MoveTrace::new();
        let mut state = self.clone();
        let [u1, h1, u2, h2] = roles;
        for (u, h) in [(u1, h1), (u2, h2)] {
            let (qh, qu) = (cur(&pos, h), cur(&pos, u));
            let (mv, next) = state.move_by_position(MoveKind::A, qh, qu, 1)?;
            trace.push(mv);
            state = next;
            set(&mut pos, h, qh + p);
            set(&mut pos, u, qu - p);
        }
        let (x, y) = (cur(&pos, h1), cur(&pos, h2));
        let r_max = (x.max(y) + state.beads[0]) / p + 3;
        for r in 2..=r_max {
            let Ok((first, mid)) = state.move_by_position(MoveKind::D, x, y, r) else {
                continue;
            };
            let (x2, y2) = (r * p - x, r * p - y);
            let Ok((second, end)) = mid.move_by_position(MoveKind::D, x2, y2, r - 1) else {
                continue;
            };
            if &end != target {
                return Err(Error::Internal("(M3) expansion misses its net effect".into()));
            }
            trace.push(first);
            trace.push(second);
            return Ok(trace);
        }
        Err(illegal!("no r makes the (M3) return moves legal"))
    }

    /// ASCII picture: pairing row, runner numbers, then `o`/`.` rows.
    pub fn render(&self) -> String {
        let p = self.p.get();
        let width = (p - 1).to_string().len() + 1;
        let rows = self.beads.first().map_or(1, |&q| self.row(q) + 1);
        let mut out = String::new();
        let pair_mark = |t: u32| -> String {
            if t == 0 {
                "-".into()
            } else {
                let k = t.min(p - t) - 1;
                char::from_u32('a' as u32 + k % 26).unwrap().to_string()
            }
        };
        out.push_str("arc ");
        for t in 0..p {
            out.push_str(&format!("{:>width$}", pair_mark(t)));
        }
        out.push('\n');
        out.push_str("run ");
        for t in 0..p {
            out.push_str(&format!("{t:>width$}"));
        }
        out.push('\n');
        for row in 0..rows {
            out.push_str("    ");
            for t in 0..p {
                let mark = if self.is_occupied(row * p + t) { "o" } else { "." };
                out.push_str(&format!("{mark:>width$}"));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Abacus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
