//! Piecewise-linear free involutions of the circle built from maximal
//! thrackles, agreement points of two such involutions, and the common-edge
//! algorithm that reads an edge off an agreement point.
//!
//! The circle has circumference `n` with point `i` at position `i`, and
//! clockwise means increasing position. Every breakpoint sits at `v ± 1/3`
//! for a cycle vertex `v`, so all arithmetic is exact over small rationals.

use std::fmt::{self, Write as _};

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::convex::Chord;
use crate::error::{Error, Result};
use crate::thrackle::{decompose, MaximalThrackleStructure, Thrackle};

pub type Rational = Ratio<i64>;

fn third() -> Rational {
    Rational::new(1, 3)
}

/// Reduces `x` into `[0, n)`.
pub fn wrap(x: Rational, n: usize) -> Rational {
    let n = Rational::from_integer(n as i64);
    x - n * (x / n).floor()
}

/// A position on the circle of circumference `n`, kept in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CirclePoint(Rational);

impl CirclePoint {
    pub fn new(x: Rational, n: usize) -> Self {
        Self(wrap(x, n))
    }

    pub fn position(&self) -> Rational {
        self.0
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_rational(self.0))
    }
}

pub fn fmt_rational(x: Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// A closed clockwise arc starting at `start` with length `len` in `(0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleArc {
    start: Rational,
    len: Rational,
}

impl CircleArc {
    /// The clockwise arc from `from` to `to`.
    pub fn between(from: Rational, to: Rational, n: usize) -> Self {
        let start = wrap(from, n);
        Self { start, len: wrap(to - start, n) }
    }

    pub fn start(&self) -> Rational {
        self.start
    }

    pub fn len(&self) -> Rational {
        self.len
    }

    /// Clockwise end, wrapped into `[0, n)`.
    pub fn end(&self, n: usize) -> Rational {
        wrap(self.start + self.len, n)
    }

    /// Clockwise distance from the start, if `x` lies on the arc.
    pub fn offset(&self, x: Rational, n: usize) -> Option<Rational> {
        let off = wrap(x - self.start, n);
        (off <= self.len).then_some(off)
    }

    pub fn contains(&self, x: Rational, n: usize) -> bool {
        self.offset(x, n).is_some()
    }

    pub fn midpoint(&self, n: usize) -> Rational {
        wrap(self.start + self.len / 2, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Anticlockwise end to anticlockwise end.
    Preserving,
    Reversing,
}

/// An affine map from one arc onto another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Piece {
    pub src: CircleArc,
    pub dst: CircleArc,
    pub dir: Direction,
}

impl Piece {
    fn slope(&self) -> Rational {
        let s = self.dst.len / self.src.len;
        match self.dir {
            Direction::Preserving => s,
            Direction::Reversing => -s,
        }
    }

    fn apply(&self, offset: Rational, n: usize) -> Rational {
        let scaled = offset * self.dst.len / self.src.len;
        match self.dir {
            Direction::Preserving => wrap(self.dst.start + scaled, n),
            Direction::Reversing => wrap(self.dst.start + self.dst.len - scaled, n),
        }
    }
}

/// The arc pair attached to a cycle vertex: `i` is the vertex's own third
/// neighbourhood and `j` spans the gap between its cycle neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntervalPair {
    pub owner: usize,
    pub i: CircleArc,
    pub j: CircleArc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSide {
    I,
    J,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlInvolution {
    circumference: usize,
    pairs: Vec<IntervalPair>,
    /// Sorted by source start.
    pieces: Vec<Piece>,
}

/// Builds the involution swapping `I_u` and `J_u` for every cycle vertex
/// `u`, then checks that it is a well-defined free involution of the circle.
pub fn build_action(s: &MaximalThrackleStructure) -> Result<PlInvolution> {
    let n = s.n();
    let mut pairs = Vec::with_capacity(s.cycle().len());
    for &u in s.cycle() {
        let (v, w) = s
            .cycle_neighbors(u)
            .ok_or_else(|| Error::MalformedStructure(format!("{u} has no cycle neighbours")))?;
        let uq = Rational::from_integer(u as i64);
        let i = CircleArc::between(uq - third(), uq + third(), n);
        let p = Rational::from_integer(v as i64) + third();
        let q = Rational::from_integer(w as i64) - third();
        let j = CircleArc::between(p, q, n);
        pairs.push(IntervalPair { owner: u, i, j });
    }
    let mut pieces: Vec<Piece> = pairs
        .iter()
        .flat_map(|pr| {
            [
                Piece { src: pr.i, dst: pr.j, dir: Direction::Preserving },
                Piece { src: pr.j, dst: pr.i, dir: Direction::Preserving },
            ]
        })
        .collect();
    pieces.sort_by_key(|p| p.src.start);
    let f = PlInvolution { circumference: n, pairs, pieces };
    f.check_invariants()?;
    Ok(f)
}

impl PlInvolution {
    pub fn circumference(&self) -> usize {
        self.circumference
    }

    pub fn pairs(&self) -> &[IntervalPair] {
        &self.pairs
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    fn piece_at(&self, x: Rational) -> (&Piece, Rational) {
        self.pieces
            .iter()
            .find_map(|p| p.src.offset(x, self.circumference).map(|off| (p, off)))
            .expect("pieces tile the circle")
    }

    pub fn evaluate(&self, x: Rational) -> Rational {
        let (p, off) = self.piece_at(x);
        p.apply(off, self.circumference)
    }

    pub fn evaluate_point(&self, x: CirclePoint) -> CirclePoint {
        CirclePoint(self.evaluate(x.0))
    }

    /// Piece endpoints, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut b: Vec<Rational> = self.pieces.iter().map(|p| p.src.start).collect();
        b.sort();
        b.dedup();
        b
    }

    /// Which arcs of which pairs contain `x`.
    pub fn locate(&self, x: Rational) -> Vec<(usize, PairSide)> {
        let n = self.circumference;
        let mut out = Vec::new();
        for pr in &self.pairs {
            if pr.i.contains(x, n) {
                out.push((pr.owner, PairSide::I));
            }
            if pr.j.contains(x, n) {
                out.push((pr.owner, PairSide::J));
            }
        }
        out
    }

    /// Tiling, continuity at breakpoints, involution and freeness at every
    /// breakpoint and piece midpoint. Failures are reported as falsifications
    /// since the construction is supposed to guarantee all of them.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.circumference;
        let total: Rational = self.pieces.iter().map(|p| p.src.len).sum();
        if total != Rational::from_integer(n as i64) {
            return Err(Error::Falsified(format!(
                "source arcs have total length {}, not {n}",
                fmt_rational(total)
            )));
        }
        for (k, p) in self.pieces.iter().enumerate() {
            let next = &self.pieces[(k + 1) % self.pieces.len()];
            if p.src.end(n) != next.src.start {
                return Err(Error::Falsified(format!(
                    "gap or overlap between arcs ending at {} and starting at {}",
                    fmt_rational(p.src.end(n)),
                    fmt_rational(next.src.start)
                )));
            }
            // Both pieces meeting at a breakpoint must agree there.
            let left = p.apply(p.src.len, n);
            let right = next.apply(Rational::zero(), n);
            if left != right {
                return Err(Error::Falsified(format!(
                    "discontinuity at {}",
                    fmt_rational(next.src.start)
                )));
            }
        }
        for p in &self.pieces {
            for x in [p.src.start, p.src.midpoint(n)] {
                self.check_point(x)?;
            }
        }
        Ok(())
    }

    /// `f(f(x)) = x` and `f(x) != x`.
    pub fn check_point(&self, x: Rational) -> Result<()> {
        let x = wrap(x, self.circumference);
        let y = self.evaluate(x);
        if y == x {
            return Err(Error::Falsified(format!("fixed point at {}", fmt_rational(x))));
        }
        if self.evaluate(y) != x {
            return Err(Error::Falsified(format!("f(f({})) != itself", fmt_rational(x))));
        }
        Ok(())
    }

    /// One line per piece: `src=[lo,hi] dst=[lo,hi] dir=+`.
    pub fn dump(&self) -> String {
        let n = self.circumference;
        let mut s = String::new();
        for p in &self.pieces {
            let dir = match p.dir {
                Direction::Preserving => '+',
                Direction::Reversing => '-',
            };
            writeln!(
                s,
                "src=[{},{}] dst=[{},{}] dir={dir}",
                fmt_rational(p.src.start),
                fmt_rational(p.src.end(n)),
                fmt_rational(p.dst.start),
                fmt_rational(p.dst.end(n)),
            )
            .unwrap();
        }
        s
    }
}

/// A point where two involutions agree, found exactly.
///
/// Both maps are affine between consecutive breakpoints of the merged
/// breakpoint set, so on each such sub-arc `f(x) = g(x)` reduces to
/// `(slope_f - slope_g) t ≡ g(b) - f(b) (mod n)` for the offset `t`. The
/// smallest solution in the first sub-arc that has one is returned; if the
/// maps coincide on a sub-arc, its anticlockwise end is returned.
pub fn agreement_point(f: &PlInvolution, g: &PlInvolution) -> Result<CirclePoint> {
    if f.circumference != g.circumference {
        return Err(Error::PointCountMismatch(f.circumference, g.circumference));
    }
    let n = f.circumference;
    let nq = Rational::from_integer(n as i64);
    let mut bps = f.breakpoints();
    bps.extend(g.breakpoints());
    bps.sort();
    bps.dedup();
    for (k, &b) in bps.iter().enumerate() {
        let len = if k + 1 < bps.len() { bps[k + 1] - b } else { bps[0] + nq - b };
        let mid = wrap(b + len / 2, n);
        let sf = f.piece_at(mid).0.slope();
        let sg = g.piece_at(mid).0.slope();
        let d = wrap(g.evaluate(b) - f.evaluate(b), n);
        let diff = sf - sg;
        let t = if diff.is_zero() {
            if !d.is_zero() {
                continue;
            }
            Rational::zero()
        } else {
            // t = (d + j n) / diff; pick the integer j giving the least t >= 0.
            let j = if diff.is_positive() || d.is_zero() { 0 } else { -1 };
            (d + nq * j) / diff
        };
        if t.is_negative() || t > len {
            continue;
        }
        let x = wrap(b + t, n);
        if f.evaluate(x) != g.evaluate(x) {
            return Err(Error::Falsified(format!(
                "solved agreement at {} does not evaluate equal",
                fmt_rational(x)
            )));
        }
        return Ok(CirclePoint(x));
    }
    Err(Error::Falsified("two free involutions with no agreement point".into()))
}

/// Everything the topological common-edge argument produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologicalWitness {
    pub x: CirclePoint,
    pub y: CirclePoint,
    /// Cycle vertex of the first thrackle.
    pub u: usize,
    /// Cycle vertex of the second thrackle.
    pub v: usize,
    /// Which arc of the first thrackle's pair holds `x`.
    pub side: PairSide,
    pub chord: Chord,
}

pub(crate) fn disjoint_cycles(s1: &MaximalThrackleStructure, s2: &MaximalThrackleStructure) -> Result<()> {
    if s1.n() != s2.n() {
        return Err(Error::PointCountMismatch(s1.n(), s2.n()));
    }
    match s1.cycle().iter().find(|v| s2.is_cycle_vertex(**v)) {
        Some(&v) => Err(Error::CyclesIntersect(v)),
        None => Ok(()),
    }
}

pub fn common_edge_topological_witness(t1: &Thrackle, t2: &Thrackle) -> Result<TopologicalWitness> {
    let s1 = decompose(t1)?;
    let s2 = decompose(t2)?;
    disjoint_cycles(&s1, &s2)?;
    let f = build_action(&s1)?;
    let g = build_action(&s2)?;
    let x = agreement_point(&f, &g)?;
    let y = f.evaluate_point(x);
    let pick = f.locate(x.0).into_iter().find_map(|(u, su)| {
        g.locate(x.0)
            .into_iter()
            .find(|&(_, sv)| su != sv)
            .map(|(v, _)| (u, v, su))
    });
    let (u, v, side) = pick.ok_or_else(|| {
        Error::Falsified(format!("agreement point {x} lies in J_u and J_v only"))
    })?;
    let chord = Chord::new(u, v)?;
    if !t1.contains(chord) || !t2.contains(chord) {
        return Err(Error::Falsified(format!("topological edge {chord} is not shared")));
    }
    Ok(TopologicalWitness { x, y, u, v, side, chord })
}

pub fn common_edge_topological(t1: &Thrackle, t2: &Thrackle) -> Result<Chord> {
    common_edge_topological_witness(t1, t2).map(|w| w.chord)
}

/// Rational samples `i/denom` for `i` in `0..denom*n`.
pub fn grid_points(n: usize, denom: i64) -> impl Iterator<Item = Rational> {
    (0..denom * n as i64).map(move |i| Rational::new(i, denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thrackle::{from_cycle_support, random_maximal, structure_from_cycle_support};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(a: i64, b: i64) -> Rational {
        Rational::new(a, b)
    }

    fn star(n: usize, v: usize) -> Thrackle {
        from_cycle_support(n, &[(v + n - 1) % n, v, (v + 1) % n]).unwrap()
    }

    #[test]
    fn star_pair_arcs() {
        let s = structure_from_cycle_support(5, &[0, 1, 2]).unwrap();
        let f = build_action(&s).unwrap();
        let p1 = f.pairs().iter().find(|p| p.owner == 1).unwrap();
        assert_eq!(p1.i.start(), r(2, 3));
        assert_eq!(p1.i.end(5), r(4, 3));
        assert_eq!(p1.j.start(), r(7, 3));
        assert_eq!(p1.j.end(5), r(14, 3));
        assert_eq!(f.evaluate(r(2, 3)), r(7, 3));
        // Midpoint of I_1 is the vertex itself; it lands mid-J_1.
        assert_eq!(f.evaluate(r(1, 1)), r(7, 2));
    }

    #[test]
    fn endpoints_have_denominator_three() {
        let s = structure_from_cycle_support(9, &[0, 1, 3, 5, 8]).unwrap();
        let f = build_action(&s).unwrap();
        for b in f.breakpoints() {
            assert_eq!(*b.denom(), 3);
        }
        for pr in f.pairs() {
            assert_eq!(pr.i.len(), r(2, 3));
        }
    }

    #[test]
    fn involution_on_grid() {
        for seed in 0..40 {
            let n = 4 + (seed as usize % 20);
            let s = decompose(&random_maximal(n, seed).unwrap()).unwrap();
            let f = build_action(&s).unwrap();
            for x in grid_points(n, 7) {
                f.check_point(x).unwrap();
            }
        }
    }

    #[test]
    fn random_rationals_free_and_involutive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = decompose(&random_maximal(13, 5).unwrap()).unwrap();
        let f = build_action(&s).unwrap();
        for _ in 0..500 {
            let x = r(rng.gen_range(0..13 * 997), 997);
            let y = f.evaluate(x);
            assert_ne!(x, y);
            assert_eq!(f.evaluate(y), x);
        }
    }

    #[test]
    fn agreement_of_identical_maps_is_a_breakpoint() {
        let s = structure_from_cycle_support(8, &[1, 2, 5]).unwrap();
        let f = build_action(&s).unwrap();
        let x = agreement_point(&f, &f).unwrap();
        assert!(f.breakpoints().contains(&x.position()));
    }

    #[test]
    fn agreement_of_star_pair() {
        let f = build_action(&decompose(&star(8, 0)).unwrap()).unwrap();
        let g = build_action(&decompose(&star(8, 3)).unwrap()).unwrap();
        let x = agreement_point(&f, &g).unwrap();
        assert_eq!(f.evaluate_point(x), g.evaluate_point(x));
    }

    #[test]
    fn mismatched_circumference() {
        let f = build_action(&decompose(&star(8, 0)).unwrap()).unwrap();
        let g = build_action(&decompose(&star(9, 0)).unwrap()).unwrap();
        assert_eq!(agreement_point(&f, &g), Err(Error::PointCountMismatch(8, 9)));
    }

    #[test]
    fn topological_star_pairs() {
        assert_eq!(common_edge_topological(&star(8, 0), &star(8, 3)).unwrap(), Chord::new(0, 3).unwrap());
        assert_eq!(common_edge_topological(&star(9, 0), &star(9, 4)).unwrap(), Chord::new(0, 4).unwrap());
    }

    #[test]
    fn topological_rejects_shared_cycles() {
        let e = common_edge_topological(&star(8, 0), &star(8, 1));
        assert!(matches!(e, Err(Error::CyclesIntersect(_))));
    }

    #[test]
    fn dump_format() {
        let f = build_action(&structure_from_cycle_support(5, &[0, 1, 2]).unwrap()).unwrap();
        let d = f.dump();
        assert_eq!(d.lines().count(), 6);
        assert!(d.contains("src=[2/3,4/3] dst=[7/3,14/3] dir=+"));
        assert!(d.contains("src=[7/3,14/3] dst=[2/3,4/3] dir=+"));
    }

    #[test]
    fn reversing_piece_evaluates_backwards() {
        let p = Piece {
            src: CircleArc::between(r(0, 1), r(1, 1), 4),
            dst: CircleArc::between(r(2, 1), r(4, 1), 4),
            dir: Direction::Reversing,
        };
        assert_eq!(p.apply(r(0, 1), 4), r(0, 1));
        assert_eq!(p.apply(r(1, 2), 4), r(3, 1));
        assert_eq!(p.slope(), r(-2, 1));
    }
}
