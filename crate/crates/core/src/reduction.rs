//! Reduction of an abacus to its canonical `b`-reduced form.
//!
//! Every configuration with at least three beads on runner 0 is carried by
//! composite moves to a unique reduced abacus determined by its
//! [`OrbitInvariant`]: all beads sit on runners `0..=h` (with `h = (p-1)/2`),
//! every runner is packed, and the last bead of runner 0 may sit one row low
//! to fix the size parity. Two partitions are connected by moves exactly when
//! their reduced forms agree, and [`connecting_trace`] produces the
//! connecting word.

pub use crate::abacus::MoveTrace;
use crate::abacus::{check_bead_congruence, Abacus, MoveKind, OddPrime, OrbitInvariant};
use crate::error::{domain, Error, Result};
use crate::partition::Partition;

/// Whether `ab` is in reduced form.
pub fn is_b_reduced(ab: &Abacus) -> bool {
    let p = ab.p().get();
    let h = ab.p().half();
    for t in 0..p {
        let beads = ab.runner_beads(t);
        if t > h && !beads.is_empty() {
            return false;
        }
        for (k, &q) in beads.iter().enumerate() {
            let row = ab.row(q) as usize;
            let last = k + 1 == beads.len();
            let ok = row == k || (t == 0 && last && row == k + 1);
            if !ok {
                return false;
            }
        }
    }
    true
}

/// The reduced abacus with `b` beads attached to an orbit invariant.
pub fn reduced_from_invariant(p: OddPrime, inv: &OrbitInvariant) -> Result<Abacus> {
    let pu = p.get();
    if inv.paired.len() != p.half() as usize {
        return Err(Error::Usage(format!(
            "invariant lists {} paired counts, expected {}",
            inv.paired.len(),
            p.half()
        )));
    }
    let mut positions = Vec::new();
    let mut push_runner = |t: u32, count: usize| {
        for k in 0..count as u32 {
            positions.push(t + k * pu);
        }
    };
    push_runner(0, inv.runner0);
    for (idx, &c) in inv.paired.iter().enumerate() {
        push_runner(idx as u32 + 1, c);
    }
    let packed = Abacus::from_positions(p, positions.iter().copied())?;
    if packed.size() % 2 == inv.parity as u64 {
        return Ok(packed);
    }
    if inv.runner0 == 0 {
        return Err(domain!("parity cannot be corrected without a bead on runner 0"));
    }
    let last = (inv.runner0 as u32 - 1) * pu;
    positions.retain(|&q| q != last);
    positions.push(last + pu);
    Abacus::from_positions(p, positions)
}

/// The reduced form that [`reduce`] reaches from `lambda` with `b` beads.
pub fn reduction_target(lambda: &Partition, p: OddPrime, b: usize) -> Result<Abacus> {
    let ab = Abacus::from_partition(lambda, p, b)?;
    reduced_from_invariant(p, &ab.orbit_invariant())
}

/// Reduces `lambda` on `b` beads, returning the reduced abacus and the move word.
///
/// Needs `b` at least the length of `lambda` and at least three beads on runner 0.
pub fn reduce(lambda: &Partition, p: OddPrime, b: usize) -> Result<(Abacus, MoveTrace)> {
    reduce_abacus(&Abacus::from_partition(lambda, p, b)?)
}

/// [`reduce`] on an abacus directly.
pub fn reduce_abacus(start: &Abacus) -> Result<(Abacus, MoveTrace)> {
    let c0 = start.runner_counts()[0];
    if c0 < 3 {
        let need = start.b() + (3 - c0) * start.p().get() as usize;
        return Err(domain!(
            "reduction needs at least 3 beads on runner 0 (found {c0}); use b = {need}"
        ));
    }
    let mut red = Reducer { state: start.clone(), trace: MoveTrace::new() };
    red.run()?;

    let target = reduced_from_invariant(start.p(), &start.orbit_invariant())?;
    if red.state != target || !is_b_reduced(&red.state) {
        return Err(Error::Internal(format!(
            "reduction ended at {:?}, expected {:?}",
            red.state.occupied(),
            target.occupied()
        )));
    }
    if red.trace.end_state(start)? != target {
        return Err(Error::Internal("reduction trace does not replay to its end state".into()));
    }
    Ok((target, red.trace))
}

/// Smallest admissible bead count for comparing `lambda` and `mu` at `delta`.
///
/// The count is at least `max(|λ|, |μ|)`, satisfies `2b ≡ 2 - δ (mod p)`, and
/// leaves at least three beads on runner 0 in both abaci.
pub fn choose_b(lambda: &Partition, mu: &Partition, delta: i64, p: OddPrime) -> Result<usize> {
    let pu = p.get() as u64;
    let mut b = congruent_b(lambda.size().max(mu.size()), delta, p)? as u64;
    loop {
        let enough = |x: &Partition| -> Result<bool> {
            Ok(Abacus::from_partition(x, p, b as usize)?.runner_counts()[0] >= 3)
        };
        if enough(lambda)? && enough(mu)? {
            return Ok(b as usize);
        }
        b += pu;
    }
}

/// Smallest `b >= floor` with `2b ≡ 2 - δ (mod p)`; `δ ≡ 0` is rejected.
pub fn congruent_b(floor: u64, delta: i64, p: OddPrime) -> Result<usize> {
    let pu = p.get() as i64;
    if p.reduce(delta) == 0 {
        return Err(domain!("δ ≡ 0 (mod {pu}) is outside the supported range"));
    }
    let residue = p.reduce((2 - delta) * (pu + 1) / 2) as u64;
    let b = floor + (residue + pu as u64 - floor % pu as u64) % pu as u64;
    debug_assert!(check_bead_congruence(b, delta, p));
    Ok(b as usize)
}

/// A move word at `choose_b(λ, μ, δ, p)` beads carrying `λ`'s abacus to `μ`'s.
pub fn connecting_trace(
    lambda: &Partition,
    mu: &Partition,
    delta: i64,
    p: OddPrime,
) -> Result<MoveTrace> {
    let b = choose_b(lambda, mu, delta, p)?;
    connecting_trace_at(lambda, mu, p, b)
}

/// [`connecting_trace`] at a caller-chosen bead count.
pub fn connecting_trace_at(
    lambda: &Partition,
    mu: &Partition,
    p: OddPrime,
    b: usize,
) -> Result<MoveTrace> {
    let start = Abacus::from_partition(lambda, p, b)?;
    let finish = Abacus::from_partition(mu, p, b)?;
    if start == finish {
        return Ok(MoveTrace::new());
    }
    if start.orbit_invariant() != finish.orbit_invariant() {
        return Err(domain!("{lambda} and {mu} have different orbit invariants at b = {b}"));
    }
    let (mid_a, mut trace) = reduce_abacus(&start)?;
    let (mid_b, back) = reduce_abacus(&finish)?;
    if mid_a != mid_b {
        return Err(Error::Internal("equal invariants reduced to different abaci".into()));
    }
    trace.extend(back.inverse(&finish)?);
    if trace.end_state(&start)? != finish {
        return Err(Error::Internal("connecting trace misses its endpoint".into()));
    }
    Ok(trace)
}

struct Reducer {
    state: Abacus,
    trace: MoveTrace,
}

impl Reducer {
    fn p(&self) -> u32 {
        self.state.p().get()
    }

    fn take(&mut self, step: (Abacus, MoveTrace)) {
        self.state = step.0;
        self.trace.extend(step.1);
    }

    fn run(&mut self) -> Result<()> {
        let p = self.p();
        let h = self.state.p().half();
        self.pack()?;
        for t in (h + 1..p).rev() {
            self.gather_right(t)?;
        }
        for t in (h + 1..p).rev() {
            if !self.state.runner_beads(t).is_empty() {
                self.clear_right(t)?;
            }
        }
        Ok(())
    }

    /// Displaced beads as `(position, rows below packed)`, runners `1..p`
    /// first and runner 0 last, each runner top to bottom.
    fn displaced(&self) -> Vec<(u32, u32)> {
        let p = self.p();
        let mut out = Vec::new();
        for t in (1..p).chain(std::iter::once(0)) {
            for (k, q) in self.state.runner_beads(t).into_iter().enumerate() {
                let over = self.state.row(q) - k as u32;
                if over > 0 {
                    out.push((q, over));
                }
            }
        }
        out
    }

    /// Packs every runner, leaving at most the last runner-0 bead one row low.
    fn pack(&mut self) -> Result<()> {
        loop {
            let disp = self.displaced();
            let total: u32 = disp.iter().map(|d| d.1).sum();
            if total == 0 {
                return Ok(());
            }
            let z = disp[0].0;
            let t = self.state.runner(z);
            if total == 1 {
                if t == 0 {
                    return Ok(());
                }
                let last0 = *self.state.runner_beads(0).last().expect("runner 0 is nonempty");
                let up = self.label(z)?;
                let down = self.label(last0)?;
                let step = self.state.move_m1(up, down)?;
                self.take(step);
                continue;
            }
            let same_runner_next = disp.get(1).filter(|d| self.state.runner(d.0) == t).map(|d| d.0);
            let other_runner = disp.iter().find(|d| self.state.runner(d.0) != t).map(|d| d.0);
            let partner = same_runner_next.or(other_runner).unwrap_or(z);
            self.shift_pair(z, partner, true)?;
        }
    }

    /// Sends pairs of beads from right runner `t` across to runner `p - t`
    /// until at most one remains.
    fn gather_right(&mut self, t: u32) -> Result<()> {
        let s = self.p() - t;
        loop {
            let beads = self.state.runner_beads(t);
            if beads.len() < 2 {
                return Ok(());
            }
            let cs = self.state.runner_beads(s).len();
            let r = (beads.len() + cs) as u32;
            let lo = beads[beads.len() - 1];
            let hi = beads[beads.len() - 2];
            let (i, j) = (self.label(lo)?, self.label(hi)?);
            let step = self.state.move_m2(i, j, r)?;
            self.take(step);
        }
    }

    /// Removes the single bead on right runner `t`.
    fn clear_right(&mut self, t: u32) -> Result<()> {
        let p = self.p();
        let s = p - t;
        let on_s = self.state.runner_beads(s);
        // Move pairs from the bottom of runner s two spaces down.
        let mut k = on_s.len();
        while k >= 2 {
            let (a, b) = (on_s[k - 1], on_s[k - 2]);
            self.shift_pair(a, b, false)?;
            self.shift_pair(a + p, b + p, false)?;
            k -= 2;
        }
        if !self.state.is_occupied(p) {
            return Err(Error::Internal("runner 0 lost its second bead".into()));
        }
        let lone = self.state.runner_beads(t);
        let (mv, next) = self.state.move_by_position(MoveKind::D, p, lone[0], 2)?;
        self.trace.push(mv);
        self.state = next;
        self.pack()
    }

    /// Raises (or lowers) the beads at `qa`, `qb` one space each, or one bead
    /// two spaces when `qa == qb`. Helper beads come from runner 0 when that
    /// works, otherwise from the fullest runner that does.
    fn shift_pair(&mut self, qa: u32, qb: u32, up: bool) -> Result<()> {
        let counts = self.state.runner_counts();
        let mut helpers: Vec<u32> = (1..self.p()).filter(|&t| counts[t as usize] >= 2).collect();
        helpers.sort_by_key(|&t| std::cmp::Reverse(counts[t as usize]));
        helpers.insert(0, 0);
        let mut last_err = None;
        for h in helpers {
            let attempt = if up {
                self.state.raise_pair(qa, qb, h)
            } else {
                self.state.lower_pair(qa, qb, h)
            };
            match attempt {
                Ok(step) => {
                    self.take(step);
                    return Ok(());
                }
                Err(e) => last_err = Some(e),
            }
        }
        Err(last_err.expect("runner 0 is always tried"))
    }

    fn label(&self, q: u32) -> Result<usize> {
        self.state
            .label_of(q)
            .ok_or_else(|| Error::Internal(format!("expected a bead at position {q}")))
    }
}
