//! Shifted actions of the type-D Weyl group `W` and its affine extension `W_p`.
//!
//! Vectors live in a finite truncation `ℝ^N` of the infinite space. Half-integers
//! are stored doubled, so every computation is exact integer arithmetic.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abacus::{Abacus, OddPrime};
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::reduction::choose_b;

/// A vector with half-integer coordinates, stored as twice its value.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfIntVector {
    doubled: Vec<i64>,
}

impl HalfIntVector {
    pub fn from_doubled(doubled: Vec<i64>) -> Self {
        HalfIntVector { doubled }
    }

    pub fn from_integers(xs: &[i64]) -> Self {
        HalfIntVector { doubled: xs.iter().map(|x| 2 * x).collect() }
    }

    pub fn doubled(&self) -> &[i64] {
        &self.doubled
    }

    pub fn len(&self) -> usize {
        self.doubled.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doubled.is_empty()
    }

    pub fn add(&self, other: &HalfIntVector) -> HalfIntVector {
        debug_assert_eq!(self.len(), other.len());
        HalfIntVector { doubled: self.doubled.iter().zip(&other.doubled).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &HalfIntVector) -> HalfIntVector {
        debug_assert_eq!(self.len(), other.len());
        HalfIntVector { doubled: self.doubled.iter().zip(&other.doubled).map(|(a, b)| a - b).collect() }
    }

    /// Integer coordinates, if every coordinate is an integer.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.doubled.iter().map(|&d| (d % 2 == 0).then_some(d / 2)).collect()
    }
}

impl fmt::Display for HalfIntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self
            .doubled
            .iter()
            .map(|&d| if d % 2 == 0 { (d / 2).to_string() } else { format!("{d}/2") })
            .collect();
        write!(f, "({})", coords.join(","))
    }
}

/// `ρ(δ)` truncated to `n` coordinates: `ρ_i = -δ/2 - (i - 1)`.
pub fn rho(delta: i64, n: usize) -> Result<HalfIntVector> {
    if n == 0 {
        return Err(Error::Usage("ρ needs at least one coordinate".into()));
    }
    Ok(HalfIntVector { doubled: (0..n as i64).map(|k| -delta - 2 * k).collect() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReflectionKind {
    /// `α = ε_i + ε_j`
    Sum,
    /// `α = ε_i - ε_j`
    Diff,
}

/// The affine reflection `s_{α, rp}` with `α = ε_i ± ε_j`, `1 <= i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawReflection")]
pub struct Reflection {
    pub kind: ReflectionKind,
    pub i: usize,
    pub j: usize,
    pub r: i64,
}

#[derive(Deserialize)]
struct RawReflection {
    kind: ReflectionKind,
    i: usize,
    j: usize,
    r: i64,
}

impl TryFrom<RawReflection> for Reflection {
    type Error = Error;
    fn try_from(raw: RawReflection) -> Result<Self> {
        Reflection::new(raw.kind, raw.i, raw.j, raw.r)
    }
}

impl Reflection {
    pub fn new(kind: ReflectionKind, i: usize, j: usize, r: i64) -> Result<Self> {
        if i == 0 || i >= j {
            return Err(Error::Usage(format!("reflection indices need 1 <= i < j, got i={i}, j={j}")));
        }
        Ok(Reflection { kind, i, j, r })
    }

    pub fn sum(i: usize, j: usize, r: i64) -> Result<Self> {
        Self::new(ReflectionKind::Sum, i, j, r)
    }

    pub fn diff(i: usize, j: usize, r: i64) -> Result<Self> {
        Self::new(ReflectionKind::Diff, i, j, r)
    }

    /// The amount `c` with `s·λ = λ - c·α` for the dot action at `δ`.
    pub fn coefficient(&self, lambda: &[i64], delta: i64, p: i64) -> i64 {
        let at = |k: usize| lambda.get(k - 1).copied().unwrap_or(0);
        let (i, j) = (self.i as i64, self.j as i64);
        match self.kind {
            ReflectionKind::Sum => at(self.i) + at(self.j) - delta - self.r * p - i - j + 2,
            ReflectionKind::Diff => at(self.i) - at(self.j) - i + j - self.r * p,
        }
    }
}

impl fmt::Display for Reflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.kind {
            ReflectionKind::Sum => '+',
            ReflectionKind::Diff => '-',
        };
        write!(f, "s(e{}{}e{}, {}p)", self.i, sign, self.j, self.r)
    }
}

fn padded(lambda: &Partition, n: usize) -> Vec<i64> {
    (1..=n).map(|k| lambda.part(k) as i64).collect()
}

/// `s_{α,rp} ·_δ λ` by the closed form, on `max(ℓ(λ), j)` coordinates.
pub fn shifted_reflect(lambda: &Partition, refl: &Reflection, delta: i64, p: i64) -> Vec<i64> {
    shifted_reflect_vec(&padded(lambda, lambda.len().max(refl.j)), refl, delta, p)
}

/// Closed form on an arbitrary integer vector (at least `j` coordinates).
pub fn shifted_reflect_vec(x: &[i64], refl: &Reflection, delta: i64, p: i64) -> Vec<i64> {
    let mut out = x.to_vec();
    if out.len() < refl.j {
        out.resize(refl.j, 0);
    }
    let c = refl.coefficient(x, delta, p);
    out[refl.i - 1] -= c;
    match refl.kind {
        ReflectionKind::Sum => out[refl.j - 1] -= c,
        ReflectionKind::Diff => out[refl.j - 1] += c,
    }
    out
}

/// `s_{α,rp}(λ + ρ) - ρ` evaluated from the inner product, on `n` coordinates.
pub fn shifted_reflect_via_rho(
    lambda: &Partition,
    refl: &Reflection,
    delta: i64,
    p: i64,
    n: usize,
) -> Result<Vec<i64>> {
    if n < lambda.len().max(refl.j) {
        return Err(Error::Usage(format!(
            "truncation N = {n} is shorter than max(ℓ(λ), j) = {}",
            lambda.len().max(refl.j)
        )));
    }
    let rho = rho(delta, n)?;
    let x = HalfIntVector::from_integers(&padded(lambda, n)).add(&rho);
    let mut alpha = vec![0i64; n];
    alpha[refl.i - 1] = 1;
    alpha[refl.j - 1] = match refl.kind {
        ReflectionKind::Sum => 1,
        ReflectionKind::Diff => -1,
    };
    // (x, α) - rp in doubled units; α has integer entries so this stays exact.
    let pairing2: i64 = x.doubled().iter().zip(&alpha).map(|(a, b)| a * b).sum::<i64>() - 2 * refl.r * p;
    let reflected = HalfIntVector::from_doubled(
        x.doubled().iter().zip(&alpha).map(|(xd, a)| xd - pairing2 * a).collect(),
    );
    reflected
        .sub(&rho)
        .to_integers()
        .ok_or_else(|| Error::Internal("dot action left the integer lattice".into()))
}

/// Reads an integer vector as a partition when it is one (trailing zeros allowed).
pub fn as_partition(v: &[i64]) -> Option<Partition> {
    if v.iter().any(|&x| x < 0) || v.windows(2).any(|w| w[0] < w[1]) {
        return None;
    }
    Partition::new(v.iter().map(|&x| x as u32).collect()).ok()
}

/// Index of the coordinate of `ρ(δ)` that vanishes, if any (1-based).
fn rho_zero_index(delta: i64) -> Option<usize> {
    (delta <= 0 && delta % 2 == 0).then(|| (1 - delta / 2) as usize)
}

/// A truncation long enough that the finite orbit test no longer depends on it.
pub fn stable_truncation(lambda: &Partition, mu: &Partition, delta: i64) -> usize {
    lambda.len().max(mu.len()).max(rho_zero_index(delta).unwrap_or(0)) + 1
}

/// Type-D orbit test on `λ + ρ(δ)` and `μ + ρ(δ)` in `ℝ^n`.
///
/// Two vectors are `W(D_n)`-conjugate iff their multisets of absolute values
/// agree and either their numbers of negative entries have the same parity or
/// some entry is zero.
pub fn same_finite_w_orbit(lambda: &Partition, mu: &Partition, delta: i64, n: usize) -> Result<bool> {
    if n < lambda.len().max(mu.len()) || n == 0 {
        return Err(Error::Usage(format!("truncation N = {n} is shorter than both partitions")));
    }
    let rho = rho(delta, n)?;
    let x = HalfIntVector::from_integers(&padded(lambda, n)).add(&rho);
    let y = HalfIntVector::from_integers(&padded(mu, n)).add(&rho);
    Ok(type_d_conjugate(x.doubled(), y.doubled()))
}

pub(crate) fn type_d_conjugate(x: &[i64], y: &[i64]) -> bool {
    let abs_sorted = |v: &[i64]| {
        let mut a: Vec<i64> = v.iter().map(|c| c.abs()).collect();
        a.sort_unstable();
        a
    };
    if abs_sorted(x) != abs_sorted(y) {
        return false;
    }
    let negs = |v: &[i64]| v.iter().filter(|&&c| c < 0).count();
    negs(x) % 2 == negs(y) % 2 || x.contains(&0)
}

/// Same `W_p`-orbit under the dot action at `δ̄`: equal size parity and equal
/// runner data at the common bead count from [`choose_b`].
pub fn same_wp_orbit(lambda: &Partition, mu: &Partition, delta: i64, p: OddPrime) -> Result<bool> {
    let b = choose_b(lambda, mu, delta, p)?;
    let inv = |x: &Partition| Abacus::from_partition(x, p, b).map(|a| a.orbit_invariant());
    Ok(lambda.size() % 2 == mu.size() % 2 && inv(lambda)? == inv(mu)?)
}

/// Evidence that a legal `d`-move is a finite reflection at a shifted parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DMoveCertificate {
    pub delta_prime: i64,
    pub mu: Partition,
    pub witness: bool,
}

/// Applies `d^r_(i,j)` to `λ` on `b` beads; `μ` is then in `W ·_{δ'} λ` with `δ' = rp - 2b + 2`.
pub fn move_d_reflection_certificate(
    lambda: &Partition,
    b: usize,
    i: usize,
    j: usize,
    r: u32,
    p: OddPrime,
) -> Result<DMoveCertificate> {
    let after = Abacus::from_partition(lambda, p, b)?.move_d(i, j, r)?;
    let mu = after.to_partition();
    let delta_prime = r as i64 * p.get() as i64 - 2 * b as i64 + 2;
    let n = stable_truncation(lambda, &mu, delta_prime);
    let witness = same_finite_w_orbit(lambda, &mu, delta_prime, n)?;
    Ok(DMoveCertificate { delta_prime, mu, witness })
}
