//! Brauer diagrams, their products, and their action on partial diagrams.
//!
//! A diagram on `n` strands is a perfect matching of `2n` nodes. Top node `k`
//! (1-based in text) has index `k - 1` and bottom node `k` has index `n + k - 1`.
//! The product `xy` places `x` on top of `y`; every closed loop formed in the
//! middle contributes a factor `δ`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::abacus::OddPrime;
use crate::error::{domain, Error, Result};

/// Exact scalars used as diagram coefficients.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    /// The unit of the same field as `self`.
    fn unit(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn inverse(&self) -> Option<Self>;

    fn pow(&self, k: u32) -> Self {
        (0..k).fold(self.unit(), |acc, _| acc.mul(self))
    }
}

impl Scalar for BigRational {
    fn unit(&self) -> Self {
        BigRational::one()
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// A residue modulo an odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Residue {
    value: u64,
    p: OddPrime,
}

impl Residue {
    pub fn new(x: i64, p: OddPrime) -> Self {
        Residue { value: p.reduce(x) as u64, p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> OddPrime {
        self.p
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.p)
    }
}

impl Scalar for Residue {
    fn unit(&self) -> Self {
        Residue { value: 1, p: self.p }
    }

    fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "residues modulo different primes");
        Residue { value: self.value * other.value % self.p.get() as u64, p: self.p }
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn inverse(&self) -> Option<Self> {
        (self.value != 0).then(|| self.pow(self.p.get() - 2))
    }
}

/// Parses `3`, `-2`, `5/2` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerDiagram {
    n: usize,
    partner: Vec<usize>,
}

impl BrauerDiagram {
    pub fn identity(n: usize) -> Self {
        let partner = (0..2 * n).map(|k| if k < n { k + n } else { k - n }).collect();
        BrauerDiagram { n, partner }
    }

    /// Top node `k` joined to bottom node `perm[k]` (0-based).
    pub fn from_permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &t in perm {
            if t >= n || std::mem::replace(&mut seen[t], true) {
                return Err(domain!("{perm:?} is not a permutation"));
            }
        }
        Self::from_pairs(n, perm.iter().enumerate().map(|(k, &t)| (k, n + t)))
    }

    /// Builds a diagram from node-index pairs; every node must appear exactly once.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut partner = vec![usize::MAX; 2 * n];
        for (a, b) in pairs {
            if a >= 2 * n || b >= 2 * n || a == b {
                return Err(domain!("pair ({a},{b}) is not a pair of distinct nodes among {}", 2 * n));
            }
            if partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(domain!("node used twice in pair ({a},{b})"));
            }
            partner[a] = b;
            partner[b] = a;
        }
        if partner.contains(&usize::MAX) {
            return Err(domain!("some node is left unmatched"));
        }
        Ok(BrauerDiagram { n, partner })
    }

    /// The diagram with arcs on the last two top and last two bottom nodes.
    pub fn cap_cup(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Usage(format!("the arc diagram needs n >= 2, got {n}")));
        }
        let mut pairs: Vec<(usize, usize)> = (0..n - 2).map(|k| (k, n + k)).collect();
        pairs.push((n - 2, n - 1));
        pairs.push((2 * n - 2, 2 * n - 1));
        Self::from_pairs(n, pairs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partner(&self, node: usize) -> usize {
        self.partner[node]
    }

    /// Each pair once, smaller index first, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..2 * self.n).filter(|&a| a < self.partner[a]).map(|a| (a, self.partner[a])).collect()
    }

    pub fn is_permutation(&self) -> bool {
        (0..self.n).all(|k| self.partner[k] >= self.n)
    }

    /// `self` with one more arc on top and one on the bottom, at the right end.
    pub fn with_end_arcs(&self) -> Self {
        let n = self.n;
        let m = n + 2;
        let shift = |a: usize| if a < n { a } else { a + 2 };
        let mut pairs: Vec<(usize, usize)> = self.pairs().into_iter().map(|(a, b)| (shift(a), shift(b))).collect();
        pairs.push((m - 2, m - 1));
        pairs.push((2 * m - 2, 2 * m - 1));
        Self::from_pairs(m, pairs).expect("adding disjoint arcs keeps a matching")
    }

    /// `x` on top of `y`: the concatenated diagram and the number of closed loops.
    pub fn compose(&self, other: &BrauerDiagram) -> Result<(u32, BrauerDiagram)> {
        let n = self.n;
        if other.n != n {
            return Err(domain!("cannot multiply diagrams on {n} and {} strands", other.n));
        }
        let mut middle_seen = vec![false; n];
        let mut partner = vec![usize::MAX; 2 * n];
        // Outer nodes: top of x (0..n) and bottom of y (n..2n).
        for start in 0..2 * n {
            if partner[start] != usize::MAX {
                continue;
            }
            let (mut in_x, mut node) = if start < n { (true, start) } else { (false, start) };
            let end = loop {
                let next = if in_x { self.partner[node] } else { other.partner[node] };
                if in_x && next < n {
                    break next;
                }
                if !in_x && next >= n {
                    break next;
                }
                let m = if in_x { next - n } else { next };
                middle_seen[m] = true;
                (in_x, node) = if in_x { (false, m) } else { (true, n + m) };
            };
            partner[start] = end;
            partner[end] = start;
        }
        let mut loops = 0;
        for m0 in 0..n {
            if middle_seen[m0] {
                continue;
            }
            loops += 1;
            let mut m = m0;
            while !middle_seen[m] {
                middle_seen[m] = true;
                // Down through y's top row, back up through x's bottom row.
                let via_y = other.partner[m];
                middle_seen[via_y] = true;
                m = self.partner[n + via_y] - n;
            }
        }
        Ok((loops, BrauerDiagram { n, partner }))
    }

    /// Text form `[(T1,B1),(T2,T3),…]` with pairs sorted.
    pub fn to_text(&self) -> String {
        let name = |a: usize| if a < self.n { format!("T{}", a + 1) } else { format!("B{}", a - self.n + 1) };
        let body: Vec<String> = self.pairs().iter().map(|&(a, b)| format!("({},{})", name(a), name(b))).collect();
        format!("[{}]", body.join(","))
    }

    /// Parses the text form for a diagram on `n` strands.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("diagram must be bracketed: {text:?}")))?;
        let node = |tok: &str| -> Result<usize> {
            let bad = || Error::Parse(format!("bad node {tok:?}"));
            let (row, idx) = tok.split_at_checked(1).ok_or_else(bad)?;
            let k: usize = idx.parse().map_err(|_| bad())?;
            if k == 0 || k > n {
                return Err(Error::Parse(format!("node {tok} outside 1..={n}")));
            }
            match row {
                "T" | "t" => Ok(k - 1),
                "B" | "b" => Ok(n + k - 1),
                _ => Err(bad()),
            }
        };
        let mut pairs = Vec::new();
        if !inner.is_empty() {
            let body = inner
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| Error::Parse(format!("pairs must be parenthesised: {text:?}")))?;
            for chunk in body.split("),(") {
                let (a, b) = chunk
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("bad pair {chunk:?}")))?;
                pairs.push((node(a)?, node(b)?));
            }
        }
        Self::from_pairs(n, pairs).map_err(|e| match e {
            Error::Domain(m) => Error::Parse(m),
            other => other,
        })
    }
}

impl fmt::Display for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for BrauerDiagram {
    type Err = Error;

    /// Infers `n` from the number of pairs.
    fn from_str(s: &str) -> Result<Self> {
        let pairs = s.matches('(').count();
        BrauerDiagram::parse(s, pairs)
    }
}

/// A non-zero scalar multiple of a diagram.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledDiagram<F> {
    pub coefficient: F,
    pub diagram: BrauerDiagram,
}

impl<F: Scalar> ScaledDiagram<F> {
    /// Product of two scaled diagrams; `None` when the coefficient vanishes.
    pub fn mul(&self, other: &Self, delta: &F) -> Result<Option<Self>> {
        let Some(prod) = multiply(&self.diagram, &other.diagram, delta)? else {
            return Ok(None);
        };
        let coefficient = self.coefficient.mul(&other.coefficient).mul(&prod.coefficient);
        Ok((!coefficient.is_zero()).then_some(ScaledDiagram { coefficient, diagram: prod.diagram }))
    }
}

/// `xy = δ^t · (concatenation)`, or `None` if that coefficient is zero.
pub fn multiply<F: Scalar>(x: &BrauerDiagram, y: &BrauerDiagram, delta: &F) -> Result<Option<ScaledDiagram<F>>> {
    let (loops, diagram) = x.compose(y)?;
    let coefficient = delta.pow(loops);
    Ok((!coefficient.is_zero()).then_some(ScaledDiagram { coefficient, diagram }))
}

fn inverse_of<F: Scalar>(delta: &F) -> Result<F> {
    delta.inverse().ok_or_else(|| domain!("δ must be invertible here"))
}

/// The idempotent `e_n = δ^{-1} · (arc diagram)`.
pub fn idempotent_e<F: Scalar>(n: usize, delta: &F) -> Result<ScaledDiagram<F>> {
    let diagram = BrauerDiagram::cap_cup(n)?;
    Ok(ScaledDiagram { coefficient: inverse_of(delta)?, diagram })
}

/// `Φ(x) = δ^{-1} · (x with arcs appended)`, from `n - 2` strands to `n`.
pub fn phi_embed<F: Scalar>(x: &BrauerDiagram, delta: &F) -> Result<ScaledDiagram<F>> {
    Ok(ScaledDiagram { coefficient: inverse_of(delta)?, diagram: x.with_end_arcs() })
}

/// A row of `n` nodes with disjoint edges; unmatched nodes are free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialDiagram {
    partner: Vec<Option<usize>>,
}

impl PartialDiagram {
    /// Edges are 0-based node pairs.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![None; n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b || partner[a].is_some() || partner[b].is_some() {
                return Err(domain!("edge ({a},{b}) is not disjoint from the others within {n} nodes"));
            }
            partner[a] = Some(b);
            partner[b] = Some(a);
        }
        Ok(PartialDiagram { partner })
    }

    pub fn n(&self) -> usize {
        self.partner.len()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n()).filter_map(|a| self.partner[a].filter(|&b| a < b).map(|b| (a, b))).collect()
    }

    pub fn t(&self) -> usize {
        self.edges().len()
    }

    /// Free nodes, left to right.
    pub fn free_nodes(&self) -> Vec<usize> {
        (0..self.n()).filter(|&a| self.partner[a].is_none()).collect()
    }
}

impl fmt::Display for PartialDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.edges().iter().map(|(a, b)| format!("({},{})", a + 1, b + 1)).collect();
        write!(f, "[{}] on {}", body.join(","), self.n())
    }
}

/// Result of following strands from `v` up through `x`.
struct Action {
    loops: u32,
    result: PartialDiagram,
    /// Top node reached from each free node of `v`, or `None` if it met another free node.
    landing: Vec<Option<usize>>,
}

/// `v` is attached along the bottom row of `x`; the result is read on the top row.
fn follow(x: &BrauerDiagram, v: &PartialDiagram) -> Result<Action> {
    let n = x.n();
    if v.n() != n {
        return Err(domain!("diagram on {n} strands cannot act on {} nodes", v.n()));
    }
    let mut seen = vec![false; n];
    // From bottom node k of x, walk until a top node of x or a free node of v.
    let walk_from_bottom = |mut k: usize, seen: &mut Vec<bool>| -> (bool, usize) {
        loop {
            seen[k] = true;
            let up = x.partner(n + k);
            if up < n {
                return (true, up);
            }
            let k2 = up - n;
            seen[k2] = true;
            match v.partner[k2] {
                Some(k3) => k = k3,
                None => return (false, k2),
            }
        }
    };

    let mut top_partner: Vec<Option<usize>> = vec![None; n];
    let mut landing = Vec::new();
    for k in v.free_nodes() {
        if seen[k] {
            landing.push(None);
            continue;
        }
        match walk_from_bottom(k, &mut seen) {
            (true, top) => landing.push(Some(top)),
            (false, _) => landing.push(None),
        }
    }
    #[allow(clippy::needless_range_loop)]
    for a in 0..n {
        let b = x.partner(a);
        if b < n {
            top_partner[a] = Some(b);
            continue;
        }
        // Strand from top node a into the bottom row, through edges of v.
        let k = b - n;
        if v.partner[k].is_none() {
            continue;
        }
        let k1 = v.partner[k].expect("checked");
        seen[k] = true;
        let (hit_top, end) = walk_from_bottom(k1, &mut seen);
        if hit_top {
            top_partner[a] = Some(end);
        }
    }
    let mut loops = 0;
    for k0 in 0..n {
        if seen[k0] {
            continue;
        }
        loops += 1;
        let mut k = k0;
        while !seen[k] {
            let k1 = v.partner[k].expect("unvisited bottom nodes lie on closed loops");
            seen[k] = true;
            seen[k1] = true;
            k = x.partner(n + k1) - n;
        }
    }
    Ok(Action { loops, result: PartialDiagram { partner: top_partner }, landing })
}

/// `xv = δ^j · w` when `w` keeps exactly `t` edges, `None` (zero) otherwise.
pub fn act_partial<F: Scalar>(
    x: &BrauerDiagram,
    v: &PartialDiagram,
    delta: &F,
) -> Result<Option<(F, PartialDiagram)>> {
    let action = follow(x, v)?;
    if action.result.t() != v.t() {
        return Ok(None);
    }
    let coefficient = delta.pow(action.loops);
    Ok((!coefficient.is_zero()).then_some((coefficient, action.result)))
}

/// `σ(x, v)`: entry `k` is the rank among free nodes of `xv` reached from the
/// `k`-th free node of `v`.
pub fn sigma_perm(x: &BrauerDiagram, v: &PartialDiagram) -> Result<Vec<usize>> {
    let action = follow(x, v)?;
    if action.result.t() != v.t() {
        return Err(domain!("x v is zero, so σ(x, v) is undefined"));
    }
    let free = action.result.free_nodes();
    action
        .landing
        .iter()
        .map(|top| {
            let top = top.ok_or_else(|| Error::Internal("free strand did not reach the top".into()))?;
            free.binary_search(&top).map_err(|_| Error::Internal("landing node is not free".into()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn identity_and_loops() {
        let x: BrauerDiagram = "[(T1,B2),(T2,T3),(B1,B3)]".parse().unwrap();
        let id = BrauerDiagram::identity(3);
        let prod = multiply(&id, &x, &q(5)).unwrap().unwrap();
        assert_eq!((prod.coefficient, prod.diagram), (q(1), x.clone()));

        let u = BrauerDiagram::cap_cup(2).unwrap();
        let uu = multiply(&u, &u, &q(5)).unwrap().unwrap();
        assert_eq!((uu.coefficient, uu.diagram), (q(5), u.clone()));
        assert!(multiply(&u, &u, &q(0)).unwrap().is_none());
    }

    #[test]
    fn permutations_compose() {
        let a = BrauerDiagram::from_permutation(&[1, 2, 0]).unwrap();
        let b = BrauerDiagram::from_permutation(&[2, 0, 1]).unwrap();
        let (loops, ab) = a.compose(&b).unwrap();
        assert_eq!(loops, 0);
        // top k -> a -> middle a[k] -> b -> bottom b[a[k]]
        assert_eq!(ab, BrauerDiagram::identity(3));
    }

    #[test]
    fn idempotents() {
        for n in 2..=6 {
            let e = idempotent_e(n, &q(3)).unwrap();
            assert_eq!(e.mul(&e, &q(3)).unwrap().unwrap(), e);
            let u = ScaledDiagram { coefficient: q(1), diagram: BrauerDiagram::cap_cup(n).unwrap() };
            assert_eq!(e.mul(&u, &q(3)).unwrap().unwrap(), u);
        }
        assert!(idempotent_e(1, &q(3)).is_err());
        assert!(idempotent_e(2, &q(0)).is_err());
        let p = OddPrime::new(5).unwrap();
        let e = idempotent_e(4, &Residue::new(-3, p)).unwrap();
        assert_eq!(e.mul(&e, &Residue::new(-3, p)).unwrap().unwrap(), e);
    }

    #[test]
    fn phi_of_identity_is_e() {
        for n in 2..=5 {
            let phi = phi_embed(&BrauerDiagram::identity(n - 2), &q(-2)).unwrap();
            assert_eq!(phi, idempotent_e(n, &q(-2)).unwrap());
        }
    }

    #[test]
    fn text_roundtrip() {
        let x = BrauerDiagram::parse("[(T1,B3),(T2,T3),(B1,B2)]", 3).unwrap();
        assert_eq!(x.to_text(), "[(T1,B3),(T2,T3),(B1,B2)]");
        assert!(BrauerDiagram::parse("[(T1,B3),(T2,T3)]", 3).is_err());
        assert!(BrauerDiagram::parse("[(T1,B4),(T2,T3),(B1,B2)]", 3).is_err());
        assert!(matches!(BrauerDiagram::parse("(T1,B1)", 1), Err(Error::Parse(_))));
        assert_eq!(parse_rational("-5/2").unwrap(), BigRational::new((-5).into(), 2.into()));
    }

    #[test]
    fn partial_actions() {
        let v = PartialDiagram::new(2, &[(0, 1)]).unwrap();
        let id = BrauerDiagram::identity(2);
        assert_eq!(act_partial(&id, &v, &q(7)).unwrap(), Some((q(1), v.clone())));
        let u = BrauerDiagram::cap_cup(2).unwrap();
        assert_eq!(act_partial(&u, &v, &q(7)).unwrap(), Some((q(7), v.clone())));

        // A bottom arc joining two free nodes kills the vector.
        let free = PartialDiagram::new(2, &[]).unwrap();
        assert_eq!(act_partial(&u, &free, &q(7)).unwrap(), None);
        assert!(sigma_perm(&u, &free).is_err());
    }

    #[test]
    fn sigma_of_permutation() {
        let v = PartialDiagram::new(4, &[(1, 2)]).unwrap();
        assert_eq!(sigma_perm(&BrauerDiagram::identity(4), &v).unwrap(), vec![0, 1]);
        // Swap strands 1 and 4: free nodes 1,4 of v land on top nodes 4,1.
        let w = BrauerDiagram::from_permutation(&[3, 1, 2, 0]).unwrap();
        assert_eq!(sigma_perm(&w, &v).unwrap(), vec![1, 0]);
    }
}
