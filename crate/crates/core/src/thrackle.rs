//! Convex thrackles: verification, maximality, structural decomposition into
//! an odd cycle plus pendants, and generators.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex::{in_open_arc, Chord, PointConfig};
use crate::error::{Error, Result};

/// A set of pairwise-intersecting chords on `n` convex points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Thrackle {
    n: usize,
    edges: BTreeSet<Chord>,
}

impl Thrackle {
    /// Validates indices and the pairwise-intersection property.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Chord>) -> Result<Self> {
        let config = PointConfig::new(n)?;
        let edges: BTreeSet<Chord> = edges.into_iter().collect();
        for &c in &edges {
            config.check(c)?;
        }
        if let Some((c1, c2)) = first_disjoint_pair(edges.iter().copied()) {
            return Err(Error::NotThrackle(c1, c2));
        }
        Ok(Self { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<Chord> {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, c: Chord) -> bool {
        self.edges.contains(&c)
    }

    /// Would `c` keep this a thrackle?
    pub fn admits(&self, c: Chord) -> bool {
        !self.edges.contains(&c) && self.edges.iter().all(|e| e.intersects(c))
    }

    fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for c in &self.edges {
            deg[c.a()] += 1;
            deg[c.b()] += 1;
        }
        deg
    }
}

fn first_disjoint_pair(edges: impl Iterator<Item = Chord>) -> Option<(Chord, Chord)> {
    let v: Vec<Chord> = edges.collect();
    for (i, c1) in v.iter().enumerate() {
        for c2 in &v[i + 1..] {
            if c1.is_disjoint(*c2) {
                return Some((*c1, *c2));
            }
        }
    }
    None
}

pub fn is_thrackle(n: usize, edges: &[Chord]) -> Result<bool> {
    let config = PointConfig::new(n)?;
    for &c in edges {
        config.check(c)?;
    }
    Ok(first_disjoint_pair(edges.iter().copied()).is_none())
}

/// Edge-maximality, checked two ways: no admissible chord remains, and the
/// edge count equals `n`. A disagreement between the two is reported as a
/// falsification.
pub fn is_maximal(t: &Thrackle) -> Result<bool> {
    let config = PointConfig::new(t.n)?;
    let no_extension = config.chords().all(|c| !t.admits(c));
    let has_n_edges = t.len() == t.n;
    if no_extension != has_n_edges {
        return Err(Error::Falsified(format!(
            "thrackle with {} edges on {} points: extension check says maximal = {}",
            t.len(),
            t.n,
            no_extension
        )));
    }
    Ok(no_extension)
}

/// The convex wedge at a cycle vertex, bounded by rays through its two cycle
/// neighbours. Its points are those strictly inside the clockwise arc from
/// `first` to `second`, the arc that avoids the apex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Wedge {
    pub apex: usize,
    pub first: usize,
    pub second: usize,
}

impl Wedge {
    pub fn contains(&self, u: usize, n: usize) -> bool {
        in_open_arc(u, self.first, self.second, n)
    }
}

/// A maximal thrackle as odd cycle plus pendant map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalThrackleStructure {
    n: usize,
    cycle: Vec<usize>,
    pendants: BTreeMap<usize, usize>,
}

impl MaximalThrackleStructure {
    /// Assembles and validates a structure. The cycle must be odd, its edges
    /// pairwise intersecting, and every other point must be listed as a
    /// pendant of the unique wedge containing it.
    pub fn from_parts(n: usize, cycle: Vec<usize>, pendants: BTreeMap<usize, usize>) -> Result<Self> {
        PointConfig::new(n)?;
        if cycle.len() < 3 || cycle.len().is_multiple_of(2) {
            return Err(Error::MalformedStructure(format!(
                "cycle length {} is not odd and at least 3",
                cycle.len()
            )));
        }
        let mut seen = vec![false; n];
        for &v in &cycle {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, n });
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::MalformedStructure(format!("cycle repeats vertex {v}")));
            }
        }
        let s = Self { n, cycle, pendants: BTreeMap::new() };
        if let Some((c1, c2)) = first_disjoint_pair(s.cycle_edges().into_iter()) {
            return Err(Error::MalformedStructure(format!("cycle edges {c1} and {c2} are disjoint")));
        }
        let expected = s.pendant_map()?;
        if expected != pendants {
            return Err(Error::MalformedStructure(
                "pendant map does not match wedge membership".into(),
            ));
        }
        Ok(Self { pendants, ..s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cycle vertices in traversal order, starting from the smallest index.
    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn pendants(&self) -> &BTreeMap<usize, usize> {
        &self.pendants
    }

    pub fn is_cycle_vertex(&self, v: usize) -> bool {
        self.cycle.contains(&v)
    }

    pub fn cycle_vertex_set(&self) -> BTreeSet<usize> {
        self.cycle.iter().copied().collect()
    }

    pub fn cycle_edges(&self) -> Vec<Chord> {
        let k = self.cycle.len();
        (0..k)
            .map(|i| Chord::new(self.cycle[i], self.cycle[(i + 1) % k]).expect("cycle vertices distinct"))
            .collect()
    }

    /// Cycle neighbours of `v`, the one met first going clockwise from `v`
    /// listed first.
    pub fn cycle_neighbors(&self, v: usize) -> Option<(usize, usize)> {
        let k = self.cycle.len();
        let i = self.cycle.iter().position(|&x| x == v)?;
        let (x, y) = (self.cycle[(i + k - 1) % k], self.cycle[(i + 1) % k]);
        let dist = |p: usize| (p + self.n - v) % self.n;
        Some(if dist(x) < dist(y) { (x, y) } else { (y, x) })
    }

    pub fn wedge(&self, v: usize) -> Option<Wedge> {
        let (first, second) = self.cycle_neighbors(v)?;
        Some(Wedge { apex: v, first, second })
    }

    pub fn wedges(&self) -> Vec<Wedge> {
        self.cycle.iter().map(|&v| self.wedge(v).expect("cycle vertex")).collect()
    }

    fn pendant_map(&self) -> Result<BTreeMap<usize, usize>> {
        (0..self.n)
            .filter(|u| !self.is_cycle_vertex(*u))
            .map(|u| Ok((u, self.locate_wedge(u)?)))
            .collect()
    }

    fn locate_wedge(&self, u: usize) -> Result<usize> {
        let mut hits = self.wedges().into_iter().filter(|w| w.contains(u, self.n));
        match (hits.next(), hits.next()) {
            (Some(w), None) => Ok(w.apex),
            (None, _) => Err(Error::Falsified(format!("point {u} lies in no wedge"))),
            (Some(w1), Some(w2)) => Err(Error::Falsified(format!(
                "point {u} lies in the wedges at {} and {}",
                w1.apex, w2.apex
            ))),
        }
    }

    /// Rebuilds the edge set: cycle edges plus one edge per pendant.
    pub fn to_thrackle(&self) -> Thrackle {
        let mut edges: BTreeSet<Chord> = self.cycle_edges().into_iter().collect();
        for (&u, &v) in &self.pendants {
            edges.insert(Chord::new(u, v).expect("pendant is not its apex"));
        }
        Thrackle { n: self.n, edges }
    }

    /// Relabels every point through `f`, which must be injective into
    /// `0..new_n` and preserve circular order. Pendant apices are recomputed.
    pub(crate) fn relabel(&self, new_n: usize, f: impl Fn(usize) -> usize) -> Result<Self> {
        let cycle = canonical_cycle_order(&self.cycle.iter().map(|&v| f(v)).collect::<Vec<_>>());
        let skeleton = Self { n: new_n, cycle, pendants: BTreeMap::new() };
        let pendants = skeleton.pendant_map()?;
        Self::from_parts(new_n, skeleton.cycle, pendants)
    }
}

/// Rotates a cycle to start at its smallest vertex and head towards the
/// neighbour met first clockwise.
fn canonical_cycle_order(cycle: &[usize]) -> Vec<usize> {
    let k = cycle.len();
    let start = (0..k).min_by_key(|&i| cycle[i]).expect("non-empty cycle");
    let fwd: Vec<usize> = (0..k).map(|i| cycle[(start + i) % k]).collect();
    if fwd[1] < fwd[k - 1] {
        fwd
    } else {
        let mut rev = vec![fwd[0]];
        rev.extend(fwd[1..].iter().rev());
        rev
    }
}

pub fn wedge_apex(s: &MaximalThrackleStructure, u: usize) -> Result<usize> {
    if u >= s.n {
        return Err(Error::IndexOutOfRange { index: u, n: s.n });
    }
    if s.is_cycle_vertex(u) {
        return Err(Error::CycleVertex(u));
    }
    s.locate_wedge(u)
}

/// Splits a maximal thrackle into its odd cycle (the 2-core) and pendants.
pub fn decompose(t: &Thrackle) -> Result<MaximalThrackleStructure> {
    if !is_maximal(t)? {
        return Err(Error::NotMaximal(t.len()));
    }
    let n = t.n;
    let mut alive: BTreeSet<Chord> = t.edges.clone();
    let mut deg = t.degrees();
    let mut pendants = BTreeMap::new();
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    while let Some(u) = stack.pop() {
        if deg[u] != 1 {
            continue;
        }
        let e = *alive.iter().find(|c| c.has_endpoint(u)).expect("degree 1");
        let v = e.other(u).expect("endpoint");
        alive.remove(&e);
        deg[u] = 0;
        deg[v] -= 1;
        pendants.insert(u, v);
        if deg[v] == 1 {
            stack.push(v);
        }
    }
    if let Some(v) = (0..n).find(|&v| deg[v] != 2 && deg[v] != 0) {
        return Err(Error::Falsified(format!("vertex {v} has core degree {}", deg[v])));
    }
    // Walk the core.
    let start = (0..n).find(|&v| deg[v] == 2).ok_or_else(|| Error::Falsified("maximal thrackle has no cycle".into()))?;
    let mut cycle = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = alive
            .iter()
            .filter_map(|c| c.other(cur))
            .find(|&w| w != prev)
            .expect("core vertex has two neighbours");
        if next == start {
            break;
        }
        cycle.push(next);
        prev = cur;
        cur = next;
    }
    if cycle.len() != alive.len() {
        return Err(Error::Falsified("core of a maximal thrackle is not a single cycle".into()));
    }
    let s = MaximalThrackleStructure::from_parts(n, canonical_cycle_order(&cycle), pendants)?;
    debug_assert_eq!(&s.to_thrackle(), t);
    Ok(s)
}

fn validate_support(n: usize, support: &[usize]) -> Result<Vec<usize>> {
    PointConfig::new(n)?;
    let s: BTreeSet<usize> = support.iter().copied().collect();
    if let Some(&v) = s.iter().find(|&&v| v >= n) {
        return Err(Error::IndexOutOfRange { index: v, n });
    }
    if s.len() != support.len() {
        return Err(Error::Precondition("support has repeated points".into()));
    }
    if s.len() < 3 || s.len().is_multiple_of(2) {
        return Err(Error::BadSupport(s.len()));
    }
    Ok(s.into_iter().collect())
}

/// The maximal thrackle whose cycle is the step-`m` star polygon on an odd
/// support of size `2m+1`, with every other point hung on its wedge apex.
pub fn structure_from_cycle_support(n: usize, support: &[usize]) -> Result<MaximalThrackleStructure> {
    let sorted = validate_support(n, support)?;
    let k = sorted.len();
    let m = k / 2;
    let cycle: Vec<usize> = (0..k).map(|i| sorted[(i * m) % k]).collect();
    let skeleton = MaximalThrackleStructure { n, cycle, pendants: BTreeMap::new() };
    let pendants = skeleton.pendant_map()?;
    MaximalThrackleStructure::from_parts(n, skeleton.cycle, pendants)
}

pub fn from_cycle_support(n: usize, support: &[usize]) -> Result<Thrackle> {
    let t = structure_from_cycle_support(n, support)?.to_thrackle();
    if let Some((c1, c2)) = first_disjoint_pair(t.edges.iter().copied()) {
        return Err(Error::Falsified(format!("star-polygon thrackle has disjoint edges {c1}, {c2}")));
    }
    if !is_maximal(&t)? {
        return Err(Error::Falsified("star-polygon thrackle is not maximal".into()));
    }
    Ok(t)
}

/// Lexicographic greedy completion to a maximal thrackle.
pub fn complete_to_maximal(t: &Thrackle) -> Result<Thrackle> {
    let config = PointConfig::new(t.n)?;
    let mut out = t.clone();
    // Adding chords only shrinks the admissible set, so one pass suffices.
    for c in config.chords() {
        if out.admits(c) {
            out.edges.insert(c);
        }
    }
    if !is_maximal(&out)? {
        return Err(Error::Falsified("greedy completion is not maximal".into()));
    }
    Ok(out)
}

/// Uniform odd subset of size at least 3, by rejection.
pub fn random_odd_support<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen::<bool>()).collect();
        if s.len() >= 3 && s.len() % 2 == 1 {
            return s;
        }
    }
}

pub fn random_maximal(n: usize, seed: u64) -> Result<Thrackle> {
    PointConfig::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    from_cycle_support(n, &random_odd_support(n, &mut rng))
}

/// Every odd subset of `0..n` with at least 3 elements, as sorted vectors,
/// in increasing bitmask order. Only sensible for small `n`.
pub fn odd_supports(n: usize) -> impl Iterator<Item = Vec<usize>> {
    assert!(n < 64, "odd_supports enumerates bitmasks");
    (0u64..1 << n).filter(|m| m.count_ones() >= 3 && m.count_ones() % 2 == 1).map(move |m| {
        (0..n).filter(|i| m >> i & 1 == 1).collect()
    })
}
