//! Shared edge of two maximal thrackles with disjoint cycles, found through
//! the apex digraph.
//!
//! Every vertex of either cycle is a pendant of the other thrackle, so it has
//! exactly one out-arc: to the apex of the other thrackle's wedge containing
//! it. Following out-arcs must end in a 2-cycle `u -> v -> u`, and `uv` is an
//! edge of both thrackles.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::circle::disjoint_cycles;
use crate::convex::Chord;
use crate::error::{Error, Result};
use crate::thrackle::{decompose, wedge_apex, MaximalThrackleStructure, Thrackle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ArcColor {
    /// Into a wedge of the first thrackle.
    Blue,
    /// Into a wedge of the second thrackle.
    Red,
}

impl ArcColor {
    fn name(self) -> &'static str {
        match self {
            ArcColor::Blue => "blue",
            ArcColor::Red => "red",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApexArc {
    pub from: usize,
    pub to: usize,
    pub color: ArcColor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApexDigraph {
    first: BTreeSet<usize>,
    second: BTreeSet<usize>,
    out: BTreeMap<usize, ApexArc>,
}

pub fn build_apex_digraph(s1: &MaximalThrackleStructure, s2: &MaximalThrackleStructure) -> Result<ApexDigraph> {
    disjoint_cycles(s1, s2)?;
    let mut out = BTreeMap::new();
    for &u in s2.cycle() {
        out.insert(u, ApexArc { from: u, to: wedge_apex(s1, u)?, color: ArcColor::Blue });
    }
    for &u in s1.cycle() {
        out.insert(u, ApexArc { from: u, to: wedge_apex(s2, u)?, color: ArcColor::Red });
    }
    let h = ApexDigraph { first: s1.cycle_vertex_set(), second: s2.cycle_vertex_set(), out };
    h.check()?;
    Ok(h)
}

impl ApexDigraph {
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.out.keys().copied()
    }

    pub fn arcs(&self) -> impl Iterator<Item = &ApexArc> {
        self.out.values()
    }

    pub fn out_arc(&self, v: usize) -> Option<&ApexArc> {
        self.out.get(&v)
    }

    pub fn first_cycle(&self) -> &BTreeSet<usize> {
        &self.first
    }

    pub fn second_cycle(&self) -> &BTreeSet<usize> {
        &self.second
    }

    /// Outdegree one everywhere, arcs land inside the vertex set, and no
    /// vertex has an in-arc and out-arc of the same colour. With one out-arc
    /// per vertex, parallel arcs of one colour cannot occur.
    fn check(&self) -> Result<()> {
        if self.out.len() != self.first.len() + self.second.len() {
            return Err(Error::Falsified("apex digraph vertex has outdegree other than 1".into()));
        }
        for a in self.out.values() {
            let Some(next) = self.out.get(&a.to) else {
                return Err(Error::Falsified(format!("arc {} -> {} leaves the digraph", a.from, a.to)));
            };
            if next.color == a.color {
                return Err(Error::Falsified(format!(
                    "vertex {} has {} arcs in and out",
                    a.to,
                    a.color.name()
                )));
            }
        }
        Ok(())
    }

    /// Follows out-arcs from `start` until a vertex repeats and returns the
    /// cycle reached.
    pub fn terminal_cycle(&self, start: usize) -> Result<AlternatingCycle> {
        let mut order = vec![start];
        let mut pos = BTreeMap::from([(start, 0usize)]);
        let mut cur = start;
        loop {
            let a = self
                .out
                .get(&cur)
                .ok_or_else(|| Error::Precondition(format!("{cur} is not a vertex of the digraph")))?;
            if let Some(&i) = pos.get(&a.to) {
                let vertices = order[i..].to_vec();
                let arcs = vertices.iter().map(|v| self.out[v]).collect();
                let c = AlternatingCycle { vertices, arcs };
                c.check()?;
                return Ok(c);
            }
            pos.insert(a.to, order.len());
            order.push(a.to);
            cur = a.to;
        }
    }

    /// One `u -> v [colour]` line per arc, by source vertex.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for a in self.out.values() {
            writeln!(s, "{} -> {} [{}]", a.from, a.to, a.color.name()).unwrap();
        }
        s
    }
}

/// A directed cycle of the apex digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlternatingCycle {
    vertices: Vec<usize>,
    arcs: Vec<ApexArc>,
}

impl AlternatingCycle {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn arcs(&self) -> &[ApexArc] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Colours alternate, and each colour class is a matching whose chords
    /// pairwise cross.
    fn check(&self) -> Result<()> {
        let k = self.arcs.len();
        for i in 0..k {
            if self.arcs[i].color == self.arcs[(i + 1) % k].color {
                return Err(Error::Falsified("apex cycle does not alternate colours".into()));
            }
        }
        for color in [ArcColor::Blue, ArcColor::Red] {
            let chords: Vec<Chord> = self
                .arcs
                .iter()
                .filter(|a| a.color == color)
                .map(|a| Chord::new(a.from, a.to))
                .collect::<Result<_>>()?;
            for (i, c1) in chords.iter().enumerate() {
                for c2 in &chords[i + 1..] {
                    if c1.shares_endpoint(*c2) || !c1.crosses(*c2) {
                        return Err(Error::Falsified(format!(
                            "{} arcs {c1} and {c2} are not a crossing matching",
                            color.name()
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The 2-cycle reached from the smallest vertex of the first cycle, as
/// `(u, v)` with `u` on the first cycle and `v` on the second.
pub fn find_two_cycle(h: &ApexDigraph) -> Result<(usize, usize)> {
    let start = *h.first.iter().next().ok_or_else(|| Error::Precondition("empty apex digraph".into()))?;
    let c = h.terminal_cycle(start)?;
    if c.len() != 2 {
        return Err(Error::Falsified(format!("apex digraph terminal cycle has length {}", c.len())));
    }
    let (x, y) = (c.vertices[0], c.vertices[1]);
    Ok(if h.first.contains(&x) { (x, y) } else { (y, x) })
}

pub fn common_edge_combinatorial(t1: &Thrackle, t2: &Thrackle) -> Result<Chord> {
    let s1 = decompose(t1)?;
    let s2 = decompose(t2)?;
    let h = build_apex_digraph(&s1, &s2)?;
    let (u, v) = find_two_cycle(&h)?;
    let chord = Chord::new(u, v)?;
    if !t1.contains(chord) || !t2.contains(chord) {
        return Err(Error::Falsified(format!("combinatorial edge {chord} is not shared")));
    }
    if !(s1.is_cycle_vertex(u) && s2.is_cycle_vertex(v)) {
        return Err(Error::Falsified(format!("{chord} does not join the two cycles")));
    }
    Ok(chord)
}
