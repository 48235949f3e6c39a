//! Points in convex position, chords between them, and the segment
//! disjointness graph `D_n`.
//!
//! Points are identified by their index `0..n` in clockwise order. No
//! coordinates are stored: whether two chords cross depends only on the
//! circular order of their endpoints.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 4;

/// Is `x` strictly inside the clockwise arc running from `from` to `to`?
///
/// Every circular-order question in the crate goes through here.
pub fn in_open_arc(x: usize, from: usize, to: usize, n: usize) -> bool {
    let span = (to + n - from) % n;
    let off = (x + n - from) % n;
    off > 0 && off < span
}

/// `n` points in convex position, indexed clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointConfig {
    n: usize,
}

impl PointConfig {
    pub fn new(n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::TooFewPoints(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chord_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    /// Builds a chord, checking both endpoints against this configuration.
    pub fn chord(&self, x: usize, y: usize) -> Result<Chord> {
        let c = Chord::new(x, y)?;
        self.check(c)?;
        Ok(c)
    }

    pub fn check(&self, c: Chord) -> Result<()> {
        if c.b >= self.n {
            return Err(Error::IndexOutOfRange { index: c.b, n: self.n });
        }
        Ok(())
    }

    /// All chords in lexicographic order.
    pub fn chords(&self) -> impl Iterator<Item = Chord> {
        let n = self.n;
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| Chord { a, b }))
    }

    /// Position of `c` in the lexicographic chord order.
    pub fn chord_index(&self, c: Chord) -> usize {
        c.a * self.n - c.a * (c.a + 1) / 2 + (c.b - c.a - 1)
    }

    pub fn chords_cross(&self, c1: Chord, c2: Chord) -> Result<bool> {
        self.check(c1)?;
        self.check(c2)?;
        Ok(c1.crosses(c2))
    }

    pub fn chords_disjoint(&self, c1: Chord, c2: Chord) -> Result<bool> {
        self.check(c1)?;
        self.check(c2)?;
        Ok(c1.is_disjoint(c2))
    }
}

/// A segment between two distinct points, normalized so that `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[usize; 2]", into = "[usize; 2]")]
pub struct Chord {
    a: usize,
    b: usize,
}

impl Chord {
    pub fn new(x: usize, y: usize) -> Result<Self> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok(Self { a: x, b: y }),
            std::cmp::Ordering::Greater => Ok(Self { a: y, b: x }),
            std::cmp::Ordering::Equal => Err(Error::DegenerateChord(x)),
        }
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn has_endpoint(&self, p: usize) -> bool {
        self.a == p || self.b == p
    }

    pub fn shares_endpoint(&self, other: Chord) -> bool {
        self.has_endpoint(other.a) || self.has_endpoint(other.b)
    }

    /// The endpoint that is not `p`, if `p` is an endpoint.
    pub fn other(&self, p: usize) -> Option<usize> {
        if self.a == p {
            Some(self.b)
        } else if self.b == p {
            Some(self.a)
        } else {
            None
        }
    }

    /// Proper crossing: the endpoints strictly interleave.
    pub fn crosses(&self, other: Chord) -> bool {
        if self.shares_endpoint(other) {
            return false;
        }
        // a < b, so the arc (a, b) never wraps past index 0.
        let inside = |x: usize| self.a < x && x < self.b;
        inside(other.a) != inside(other.b)
    }

    /// Shared endpoint or crossing.
    pub fn intersects(&self, other: Chord) -> bool {
        self.shares_endpoint(other) || self.crosses(other)
    }

    /// Adjacency in `D_n`.
    pub fn is_disjoint(&self, other: Chord) -> bool {
        !self.intersects(other)
    }

    /// Relabels both endpoints through `f`.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> Result<Chord> {
        Chord::new(f(self.a), f(self.b))
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl TryFrom<[usize; 2]> for Chord {
    type Error = Error;

    fn try_from(v: [usize; 2]) -> Result<Self> {
        Chord::new(v[0], v[1])
    }
}

impl From<Chord> for [usize; 2] {
    fn from(c: Chord) -> Self {
        [c.a, c.b]
    }
}

/// The convex segment disjointness graph on `C(n,2)` chords.
#[derive(Debug, Clone)]
pub struct DisjointnessGraph {
    config: PointConfig,
    vertices: Vec<Chord>,
    /// One bit row per vertex, `words` u64s each.
    rows: Vec<Vec<u64>>,
}

impl DisjointnessGraph {
    pub fn build(n: usize) -> Result<Self> {
        let config = PointConfig::new(n)?;
        let vertices: Vec<Chord> = config.chords().collect();
        let words = vertices.len().div_ceil(64);
        let mut rows = vec![vec![0u64; words]; vertices.len()];
        for (i, ci) in vertices.iter().enumerate() {
            for (j, cj) in vertices.iter().enumerate().skip(i + 1) {
                if ci.is_disjoint(*cj) {
                    rows[i][j / 64] |= 1 << (j % 64);
                    rows[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(Self { config, vertices, rows })
    }

    pub fn n(&self) -> usize {
        self.config.n()
    }

    pub fn config(&self) -> PointConfig {
        self.config
    }

    pub fn vertices(&self) -> &[Chord] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.rows[i].iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.vertex_count();
        (0..m).flat_map(move |i| (i + 1..m).filter(move |&j| self.adjacent(i, j)).map(move |j| (i, j)))
    }

    /// Do the given vertex indices form an independent set?
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &i)| set[k + 1..].iter().all(|&j| !self.adjacent(i, j)))
    }
}

pub fn build_disjointness_graph(n: usize) -> Result<DisjointnessGraph> {
    DisjointnessGraph::build(n)
}

/// `C(n, k)` for small arguments.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
