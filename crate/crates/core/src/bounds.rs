//! Families of maximal thrackles and the union edge bound `k n - C(k,2)`.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::common_edge::common_edge_combinatorial;
use crate::convex::{Chord, PointConfig};
use crate::error::{Error, Result};
use crate::thrackle::{
    decompose, from_cycle_support, random_odd_support, wedge_apex, MaximalThrackleStructure, Thrackle,
};

/// `k` maximal thrackles on one point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThrackleFamily {
    n: usize,
    members: Vec<Thrackle>,
    structures: Vec<MaximalThrackleStructure>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyStats {
    pub union_edges: usize,
    pub r: usize,
    pub bound: i64,
    pub tight: bool,
}

/// `k n - C(k,2)`.
pub fn edge_bound(n: usize, k: usize) -> i64 {
    let (n, k) = (n as i64, k as i64);
    k * n - k * (k - 1) / 2
}

impl ThrackleFamily {
    pub fn new(n: usize, members: Vec<Thrackle>) -> Result<Self> {
        PointConfig::new(n)?;
        if members.is_empty() {
            return Err(Error::Precondition("a family needs at least one member".into()));
        }
        let structures = members
            .iter()
            .map(|t| {
                if t.n() != n {
                    return Err(Error::PointCountMismatch(n, t.n()));
                }
                decompose(t)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, members, structures })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Thrackle] {
        &self.members
    }

    pub fn structures(&self) -> &[MaximalThrackleStructure] {
        &self.structures
    }

    /// Sum of member sizes, i.e. edges counted with multiplicity.
    pub fn edge_slots(&self) -> usize {
        self.members.iter().map(Thrackle::len).sum()
    }

    pub fn union(&self) -> BTreeSet<Chord> {
        self.members.iter().flat_map(|t| t.edges().iter().copied()).collect()
    }
}

pub fn union_edge_count(fam: &ThrackleFamily) -> usize {
    fam.union().len()
}

/// Ordered triples `(v, T_i, T_j)` with `i != j` and `v` on both cycles.
pub fn r_statistic(fam: &ThrackleFamily) -> usize {
    let s = &fam.structures;
    (0..fam.n)
        .map(|v| {
            let m = s.iter().filter(|st| st.is_cycle_vertex(v)).count();
            m * m.saturating_sub(1)
        })
        .sum()
}

/// Replaces `v` by two consecutive points: `v` keeps its place for every
/// member except member `j`, which gets a new point immediately clockwise of
/// `v` instead. Each member then takes its foreign twin as a pendant.
pub fn split_vertex(fam: &ThrackleFamily, v: usize, j: usize) -> Result<ThrackleFamily> {
    if j >= fam.k() {
        return Err(Error::Precondition(format!("member index {j} out of range for k = {}", fam.k())));
    }
    if v >= fam.n {
        return Err(Error::IndexOutOfRange { index: v, n: fam.n });
    }
    let shared = fam.structures[j].is_cycle_vertex(v)
        && fam.structures.iter().enumerate().any(|(i, s)| i != j && s.is_cycle_vertex(v));
    if !shared {
        return Err(Error::Precondition(format!(
            "{v} is not on the cycle of member {j} and of another member"
        )));
    }
    let new_n = fam.n + 1;
    let shift = |x: usize| if x > v { x + 1 } else { x };
    let mut members = Vec::with_capacity(fam.k());
    for (i, s) in fam.structures.iter().enumerate() {
        // Member j moves v to v + 1; the others keep v and see v + 1 as new.
        let (own, twin) = if i == j { (v + 1, v) } else { (v, v + 1) };
        let relabeled = s.relabel(new_n, |x| if x == v { own } else { shift(x) })?;
        debug_assert_eq!(relabeled.pendants().get(&twin), Some(&wedge_apex(&relabeled, twin)?));
        members.push(relabeled.to_thrackle());
    }
    // Rebuilding through `new` re-checks maximality of every member.
    let out = ThrackleFamily::new(new_n, members)?;
    if out.edge_slots() != fam.edge_slots() + fam.k() {
        return Err(Error::Falsified("split did not add exactly one edge per member".into()));
    }
    Ok(out)
}

/// Splits shared cycle vertices until `r = 0`, always taking the smallest
/// shared vertex and the last member holding it.
pub fn split_until_disjoint(fam: &ThrackleFamily) -> Result<Vec<ThrackleFamily>> {
    let mut chain = vec![fam.clone()];
    loop {
        let cur = chain.last().expect("non-empty");
        let next = (0..cur.n).find_map(|v| {
            let holders: Vec<usize> =
                (0..cur.k()).filter(|&i| cur.structures[i].is_cycle_vertex(v)).collect();
            (holders.len() >= 2).then(|| (v, *holders.last().unwrap()))
        });
        match next {
            None => return Ok(chain),
            Some((v, j)) => {
                let split = split_vertex(cur, v, j)?;
                if r_statistic(&split) >= r_statistic(cur) {
                    return Err(Error::Falsified("split did not decrease r".into()));
                }
                chain.push(split);
            }
        }
    }
}

pub fn verify_edge_bound(fam: &ThrackleFamily) -> Result<FamilyStats> {
    let union_edges = union_edge_count(fam);
    let bound = edge_bound(fam.n, fam.k());
    if union_edges as i64 > bound {
        return Err(Error::Falsified(format!(
            "{} maximal thrackles on {} points have {union_edges} union edges, above {bound}",
            fam.k(),
            fam.n
        )));
    }
    Ok(FamilyStats { union_edges, r: r_statistic(fam), bound, tight: union_edges as i64 == bound })
}

/// For a family with pairwise disjoint cycles, one shared edge per member
/// pair, each joining the two cycles. The edges are distinct, so the union
/// loses at least `C(k,2)` to double counting.
pub fn overlap_witnesses(fam: &ThrackleFamily) -> Result<Vec<(usize, usize, Chord)>> {
    if r_statistic(fam) != 0 {
        return Err(Error::Precondition("member cycles are not pairwise disjoint".into()));
    }
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for i in 0..fam.k() {
        for j in i + 1..fam.k() {
            let c = common_edge_combinatorial(&fam.members[i], &fam.members[j])?;
            if !seen.insert(c) {
                return Err(Error::Falsified(format!("edge {c} witnesses two member pairs")));
            }
            out.push((i, j, c));
        }
    }
    let slots = fam.edge_slots() as i64;
    if union_edge_count(fam) as i64 > slots - out.len() as i64 {
        return Err(Error::Falsified("witness edges do not account for the overcount".into()));
    }
    Ok(out)
}

/// Stars at `0, 2, ..., 2(k-1)`, each closed by the chord joining the
/// centre's two neighbours.
pub fn tight_family(n: usize, k: usize) -> Result<ThrackleFamily> {
    PointConfig::new(n)?;
    if k == 0 || n < 2 * k {
        return Err(Error::Precondition(format!("tight family needs 1 <= k and n >= 2k, got n = {n}, k = {k}")));
    }
    let members = (0..k)
        .map(|i| {
            let v = 2 * i;
            from_cycle_support(n, &[(v + n - 1) % n, v, v + 1])
        })
        .collect::<Result<Vec<_>>>()?;
    ThrackleFamily::new(n, members)
}

pub fn random_family(n: usize, k: usize, seed: u64) -> Result<ThrackleFamily> {
    PointConfig::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = (0..k)
        .map(|_| from_cycle_support(n, &random_odd_support(n, &mut rng)))
        .collect::<Result<Vec<_>>>()?;
    ThrackleFamily::new(n, members)
}

/// A random family with at least one shared cycle vertex: the second member
/// is forced to reuse a cycle vertex of the first.
pub fn random_shared_family(n: usize, k: usize, seed: u64) -> Result<ThrackleFamily> {
    if k < 2 {
        return Err(Error::Precondition("sharing needs k >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let supports: Vec<Vec<usize>> = (0..k).map(|_| random_odd_support(n, &mut rng)).collect();
        if supports[1].iter().any(|v| supports[0].contains(v)) {
            let members = supports
                .iter()
                .map(|s| from_cycle_support(n, s))
                .collect::<Result<Vec<_>>>()?;
            return ThrackleFamily::new(n, members);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(n: usize, v: usize) -> Thrackle {
        from_cycle_support(n, &[(v + n - 1) % n, v, (v + 1) % n]).unwrap()
    }

    #[test]
    fn union_counts() {
        let t = from_cycle_support(9, &[0, 3, 4, 6, 8]).unwrap();
        let one = ThrackleFamily::new(9, vec![t.clone()]).unwrap();
        assert_eq!(union_edge_count(&one), 9);
        let two = ThrackleFamily::new(9, vec![t.clone(), t]).unwrap();
        assert_eq!(union_edge_count(&two), 9);
        assert_eq!(union_edge_count(&tight_family(8, 3).unwrap()), 21);
    }

    #[test]
    fn r_examples() {
        let fam = ThrackleFamily::new(5, vec![star(5, 1), star(5, 2)]).unwrap();
        assert_eq!(r_statistic(&fam), 4);
        assert_eq!(r_statistic(&ThrackleFamily::new(5, vec![star(5, 1)]).unwrap()), 0);
    }

    #[test]
    fn tight_family_r_counts_shared_neighbours() {
        // Centres two apart share the point between them.
        assert_eq!(r_statistic(&tight_family(8, 3).unwrap()), 4);
        assert_eq!(r_statistic(&tight_family(8, 4).unwrap()), 8);
        assert_eq!(r_statistic(&tight_family(9, 1).unwrap()), 0);
    }

    #[test]
    fn split_example() {
        let fam = ThrackleFamily::new(5, vec![star(5, 1), star(5, 2)]).unwrap();
        let split = split_vertex(&fam, 1, 1).unwrap();
        assert_eq!(split.n(), 6);
        assert_eq!(split.members().iter().map(Thrackle::len).collect::<Vec<_>>(), vec![6, 6]);
        assert_eq!(r_statistic(&split), 2);
        assert_eq!(split.edge_slots(), fam.edge_slots() + 2);
        assert_eq!(split.structures()[0].cycle(), &[0, 1, 3]);
        assert_eq!(split.structures()[1].cycle(), &[2, 3, 4]);
    }

    #[test]
    fn split_rejects_unshared_vertex() {
        let fam = ThrackleFamily::new(5, vec![star(5, 1), star(5, 2)]).unwrap();
        assert!(matches!(split_vertex(&fam, 0, 0), Err(Error::Precondition(_))));
        assert!(matches!(split_vertex(&fam, 4, 1), Err(Error::Precondition(_))));
        assert!(matches!(split_vertex(&fam, 1, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn splitting_terminates() {
        let chain = split_until_disjoint(&tight_family(8, 4).unwrap()).unwrap();
        assert_eq!(r_statistic(chain.last().unwrap()), 0);
        for fam in &chain {
            verify_edge_bound(fam).unwrap();
        }
    }

    #[test]
    fn tight_examples() {
        let s = verify_edge_bound(&tight_family(20, 7).unwrap()).unwrap();
        assert_eq!((s.union_edges, s.bound, s.tight), (119, 119, true));
        assert_eq!(union_edge_count(&tight_family(4, 1).unwrap()), 4);
        // On four points both stars close with {1,3}, and D_4 has only 6 chords.
        let s = verify_edge_bound(&tight_family(4, 2).unwrap()).unwrap();
        assert_eq!((s.union_edges, s.bound, s.tight), (6, 7, false));
        assert!(tight_family(7, 4).is_err());
        assert!(tight_family(7, 0).is_err());
    }

    #[test]
    fn disjoint_pair_shares_an_edge() {
        let fam = ThrackleFamily::new(8, vec![star(8, 0), star(8, 3)]).unwrap();
        let s = verify_edge_bound(&fam).unwrap();
        assert!(s.union_edges <= 15);
        let w = overlap_witnesses(&fam).unwrap();
        assert_eq!(w, vec![(0, 1, Chord::new(0, 3).unwrap())]);
    }

    #[test]
    fn random_families_respect_bound() {
        for seed in 0..300 {
            let n = 4 + seed as usize % 7;
            let k = 1 + seed as usize % 4;
            verify_edge_bound(&random_family(n, k, seed).unwrap()).unwrap();
        }
    }

    #[test]
    fn member_count_mismatch() {
        let e = ThrackleFamily::new(6, vec![star(5, 1)]);
        assert_eq!(e, Err(Error::PointCountMismatch(6, 5)));
        assert!(ThrackleFamily::new(6, vec![]).is_err());
    }
}
