//! Brute-force oracles for the integration tests.
//!
//! Only `Partition` is borrowed from the library. Bead arithmetic, reflections
//! and the type-D group action are recomputed here from first principles so a
//! bug in the library cannot hide behind an identical bug in its checker.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use brauer_core::Partition;

/// Finite limits for a search; exceeding `max_states` is an error, never a silent cut.
#[derive(Clone, Copy, Debug)]
pub struct SearchBounds {
    pub max_size: u64,
    pub max_index: usize,
    pub r_range: (i64, i64),
    pub max_states: usize,
}

impl SearchBounds {
    pub fn sized(max_size: u64) -> Self {
        SearchBounds { max_size, max_index: 0, r_range: (0, 0), max_states: 2_000_000 }
    }
}

/// Bead positions `λ_i - i + b`, ascending.
pub fn beads(lambda: &Partition, b: usize) -> Vec<i64> {
    assert!(b >= lambda.len(), "{lambda} does not fit on {b} beads");
    let mut v: Vec<i64> = (1..=b).map(|i| lambda.part(i) as i64 - i as i64 + b as i64).collect();
    v.sort_unstable();
    v
}

/// The partition with the given bead positions.
pub fn unbead(positions: &[i64]) -> Partition {
    let mut desc = positions.to_vec();
    desc.sort_unstable_by(|a, b| b.cmp(a));
    let b = desc.len() as i64;
    let parts: Vec<u32> = desc.iter().enumerate().map(|(k, &q)| (q - (b - 1 - k as i64)) as u32).collect();
    Partition::new(parts).unwrap()
}

fn bead_size(positions: &[i64]) -> u64 {
    let b = positions.len() as i64;
    (positions.iter().sum::<i64>() - b * (b - 1) / 2) as u64
}

/// One step along every legal `a` and `d` move from `state`, within the size box.
fn move_neighbours(state: &[i64], p: i64, max_size: u64) -> Vec<Vec<i64>> {
    let b = state.len() as i64;
    let top = max_size as i64 + b - 1;
    let size = bead_size(state) as i64;
    let occupied = |q: i64| state.binary_search(&q).is_ok();
    let mut out = Vec::new();
    let mut emit = |x: i64, y: i64, nx: i64, ny: i64| {
        if nx == ny || nx < 0 || ny < 0 || nx > top || ny > top {
            return;
        }
        let new_size = size + (nx + ny) - (x + y);
        if new_size > max_size as i64 {
            return;
        }
        let blocked = |q: i64| q != x && q != y && occupied(q);
        if blocked(nx) || blocked(ny) {
            return;
        }
        let mut v: Vec<i64> = state.iter().copied().filter(|&q| q != x && q != y).collect();
        v.push(nx);
        v.push(ny);
        v.sort_unstable();
        out.push(v);
    };
    for (ix, &x) in state.iter().enumerate() {
        for (iy, &y) in state.iter().enumerate() {
            if ix == iy {
                continue;
            }
            // a-move: x slides down r rows, y slides up r rows.
            let mut r = 1;
            while y - r * p >= 0 && x + r * p <= top {
                emit(x, y, x + r * p, y - r * p);
                r += 1;
            }
            // d-move: both beads swing over the arc, q -> rp - q.
            if ix < iy {
                for r in 1..=(top + y) / p {
                    emit(x, y, r * p - x, r * p - y);
                }
            }
        }
    }
    out
}

/// All bead configurations reachable from `λ` on `b` beads by `a`/`d` moves,
/// never leaving partitions of size at most `bounds.max_size`.
pub fn move_bfs(lambda: &Partition, p: u32, b: usize, bounds: SearchBounds) -> Result<BTreeSet<Vec<i64>>, String> {
    let start = beads(lambda, b);
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        for next in move_neighbours(&state, p as i64, bounds.max_size) {
            if seen.insert(next.clone()) {
                if seen.len() > bounds.max_states {
                    return Err(format!("move_bfs exceeded {} states", bounds.max_states));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// Connected components of the move graph on all `b`-bead configurations of
/// size at most `max_size`, as a map from partition to component id.
pub fn move_components(p: u32, b: usize, max_size: u64) -> Result<BTreeMap<Partition, usize>, String> {
    let mut comp: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    let mut next_id = 0;
    for lambda in Partition::all_up_to(max_size as u32) {
        if lambda.len() > b {
            continue;
        }
        let start = beads(&lambda, b);
        if comp.contains_key(&start) {
            continue;
        }
        let reached = move_bfs(&lambda, p, b, SearchBounds::sized(max_size))?;
        for s in reached {
            comp.insert(s, next_id);
        }
        next_id += 1;
    }
    Ok(comp.into_iter().map(|(s, id)| (unbead(&s), id)).collect())
}

/// New values of coordinates `i < j` (0-based) under `s_{α,rp} ·_δ`, where
/// `α = ε_i ± ε_j`, computed as `s(x + ρ) - ρ` in doubled units.
#[allow(clippy::too_many_arguments)]
fn reflect_pair(xi: i64, xj: i64, i: usize, j: usize, plus: bool, r: i64, delta: i64, p: i64) -> (i64, i64) {
    let rho = |k: usize| -delta - 2 * k as i64;
    let (yi, yj) = (2 * xi + rho(i), 2 * xj + rho(j));
    let sign = if plus { 1 } else { -1 };
    let pairing = yi + sign * yj - 2 * r * p;
    ((yi - pairing - rho(i)) / 2, (yj - sign * pairing - rho(j)) / 2)
}

/// `s_{α,rp} ·_δ x` with `α = ε_i + ε_j` (`plus`) or `ε_i - ε_j`, 0-based `i < j`.
pub fn reflect_oracle(x: &[i64], i: usize, j: usize, plus: bool, r: i64, delta: i64, p: i64) -> Vec<i64> {
    let mut v = x.to_vec();
    v.resize(x.len().max(j + 1), 0);
    let (a, b) = reflect_pair(v[i], v[j], i, j, plus, r, delta, p);
    v[i] = a;
    v[j] = b;
    v
}

/// Closure of `{λ}` under in-bounds shifted reflections landing on partitions.
pub fn orbit_bfs(lambda: &Partition, delta: i64, p: u32, bounds: SearchBounds) -> Result<BTreeSet<Partition>, String> {
    let n = bounds.max_index;
    let pad = |x: &Partition| -> Vec<i64> { (1..=n).map(|k| x.part(k) as i64).collect() };
    if lambda.len() > n {
        return Err(format!("{lambda} has more than {n} parts"));
    }
    let mut seen = BTreeSet::from([pad(lambda)]);
    let mut queue = VecDeque::from([pad(lambda)]);
    while let Some(x) = queue.pop_front() {
        let size: i64 = x.iter().sum();
        for i in 0..n {
            for j in i + 1..n {
                for r in bounds.r_range.0..=bounds.r_range.1 {
                    for plus in [true, false] {
                        let (a, b) = reflect_pair(x[i], x[j], i, j, plus, r, delta, p as i64);
                        let at = |k: usize| if k == i { a } else if k == j { b } else { x[k] };
                        let ordered = [i.checked_sub(1), Some(i), j.checked_sub(1), Some(j)]
                            .into_iter()
                            .flatten()
                            .filter(|&k| k + 1 < n)
                            .all(|k| at(k) >= at(k + 1));
                        if a < 0 || b < 0 || !ordered {
                            continue;
                        }
                        let new_size = size - x[i] - x[j] + a + b;
                        if new_size < 0 || new_size as u64 > bounds.max_size {
                            continue;
                        }
                        let mut y = x.clone();
                        y[i] = a;
                        y[j] = b;
                        if seen.insert(y.clone()) {
                            if seen.len() > bounds.max_states {
                                return Err(format!("orbit_bfs exceeded {} states", bounds.max_states));
                            }
                            queue.push_back(y);
                        }
                    }
                }
            }
        }
    }
    Ok(seen.into_iter().map(|v| to_partition(&v).expect("only partitions are queued")).collect())
}

fn to_partition(v: &[i64]) -> Option<Partition> {
    if v.iter().any(|&c| c < 0) || v.windows(2).any(|w| w[0] < w[1]) {
        return None;
    }
    Partition::new(v.iter().filter(|&&c| c > 0).map(|&c| c as u32).collect()).ok()
}

/// Orbit of a (doubled) vector under the finite type-D Weyl group: coordinate
/// permutations together with sign changes of pairs of coordinates.
pub fn naive_type_d_orbit(v: &[i64], max_states: usize) -> Result<BTreeSet<Vec<i64>>, String> {
    let n = v.len();
    let mut seen = BTreeSet::from([v.to_vec()]);
    let mut queue = VecDeque::from([v.to_vec()]);
    while let Some(x) = queue.pop_front() {
        for i in 0..n {
            for j in i + 1..n {
                let mut swap = x.clone();
                swap.swap(i, j);
                let mut flip = swap.clone();
                flip[i] = -flip[i];
                flip[j] = -flip[j];
                for y in [swap, flip] {
                    if seen.insert(y.clone()) {
                        if seen.len() > max_states {
                            return Err(format!("type-D orbit exceeded {max_states} states"));
                        }
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    Ok(seen)
}

/// Core and weight by repeatedly deleting the rim hook under any node of
/// hook length `p`, using only the row lengths.
pub fn strip_core(lambda: &Partition, p: u32) -> (Partition, u64) {
    let mut rows: Vec<u32> = lambda.parts().to_vec();
    let mut weight = 0;
    'outer: loop {
        for i in 0..rows.len() {
            for j in 0..rows[i] {
                // Leg: rows below i that still reach column j.
                let foot = (i..rows.len()).take_while(|&k| rows[k] > j).last().unwrap();
                let hook = (rows[i] - j) + (foot - i) as u32;
                if hook != p {
                    continue;
                }
                for k in i..foot {
                    rows[k] = rows[k + 1] - 1;
                }
                rows[foot] = j;
                while rows.last() == Some(&0) {
                    rows.pop();
                }
                weight += 1;
                continue 'outer;
            }
        }
        break;
    }
    (Partition::new(rows).unwrap(), weight)
}

/// Random partitions with at most `max_len` parts, each at most `max_part`.
pub fn partition_strategy(max_len: usize, max_part: u32) -> impl proptest::strategy::Strategy<Value = Partition> {
    use proptest::prelude::*;
    proptest::collection::vec(1..=max_part, 0..=max_len).prop_map(|mut parts| {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(parts).unwrap()
    })
}

/// Whether the skew cells can be perfectly matched with content sums `target`,
/// found by exhaustive backtracking over the cells themselves.
pub fn content_pairing_exists(contents: &[i64], target: i64) -> bool {
    fn go(rest: &mut Vec<i64>, target: i64) -> bool {
        let Some(first) = rest.pop() else { return true };
        for k in 0..rest.len() {
            if first + rest[k] == target {
                let other = rest.remove(k);
                if go(rest, target) {
                    return true;
                }
                rest.insert(k, other);
            }
        }
        rest.push(first);
        false
    }
    go(&mut contents.to_vec(), target)
}

/// Proptest settings shared by the suites; failures are reported, not persisted.
pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config { cases, failure_persistence: None, ..Default::default() }
}

/// Components of the reflection graph on partitions of size at most
/// `bounds.max_size`, seeded from every partition of size at most `seeds_up_to`.
pub fn orbit_components(delta: i64, p: u32, seeds_up_to: u32, bounds: SearchBounds) -> Result<BTreeMap<Partition, usize>, String> {
    let mut comp = BTreeMap::new();
    let mut next_id = 0;
    for lambda in Partition::all_up_to(seeds_up_to) {
        if comp.contains_key(&lambda) {
            continue;
        }
        for mu in orbit_bfs(&lambda, delta, p, bounds)? {
            comp.insert(mu, next_id);
        }
        next_id += 1;
    }
    Ok(comp)
}
