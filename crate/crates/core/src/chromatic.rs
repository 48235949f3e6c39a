//! Bounds on the chromatic number of `D_n` and its exact computation at
//! small `n`.
//!
//! A colour class of `D_n` is exactly a thrackle, so a proper colouring is a
//! partition of all chords into thrackles. The exact solver is a DSATUR
//! branch and bound on `D_n` itself; the greedy upper bound covers the chords
//! with maximal thrackles from the odd-support catalogue.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::convex::{build_disjointness_graph, Chord, PointConfig};
use crate::error::{Error, Result};
use crate::thrackle::{complete_to_maximal, odd_supports, random_odd_support, structure_from_cycle_support, Thrackle};

/// Slack applied before taking ceilings of floating-point bounds.
pub const GUARD: f64 = 1e-9;

/// Largest `n` whose `C(n,2)` chords fit in one `u128` row.
pub const MAX_SOLVER_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    /// `2 floor((n+1)/3) - 1`.
    pub araujo_lb: i64,
    /// `ceil(3(n-2)/4)`.
    pub dw_lb: i64,
    /// `ceil(n - sqrt(2n + 1/4) + 1/2)`.
    pub main_lb: i64,
    /// `n - sqrt(n/2) - ln(n)/2 + 4`; the chromatic number is strictly below.
    pub upper_strict: f64,
    /// Least `k` with `C(n,2) <= k n - C(k,2)`, by integer search.
    pub min_k: i64,
}

impl BoundReport {
    pub fn best_lower(&self) -> i64 {
        self.araujo_lb.max(self.dw_lb).max(self.main_lb)
    }
}

/// Least `k >= 1` with `C(n,2) <= k n - C(k,2)`.
///
/// The slack `k n - C(k,2) - C(n,2)` increases in `k` up to `k = n`, and is
/// non-negative at `k = n`, so binary search over `1..=n` is exact.
pub fn min_k(n: u64) -> u64 {
    let fits = |k: u64| {
        let (n, k) = (n as i128, k as i128);
        k * n - k * (k - 1) / 2 >= n * (n - 1) / 2
    };
    let (mut lo, mut hi) = (1u64, n.max(1));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// `ceil(n - sqrt(2n + 1/4) + 1/2)` in floating point with the guard band.
pub fn main_lower_bound(n: u64) -> i64 {
    let n = n as f64;
    (n - (2.0 * n + 0.25).sqrt() + 0.5 - GUARD).ceil() as i64
}

pub fn upper_strict(n: u64) -> f64 {
    let n = n as f64;
    n - (n / 2.0).sqrt() - n.ln() / 2.0 + 4.0
}

pub fn bound_report(n: usize) -> Result<BoundReport> {
    PointConfig::new(n)?;
    let ni = n as i64;
    let report = BoundReport {
        n,
        araujo_lb: 2 * ((ni + 1) / 3) - 1,
        dw_lb: (3 * (ni - 2) + 3) / 4,
        main_lb: main_lower_bound(n as u64),
        upper_strict: upper_strict(n as u64),
        min_k: min_k(n as u64) as i64,
    };
    if report.main_lb != report.min_k {
        return Err(Error::Falsified(format!(
            "n = {n}: closed-form lower bound {} differs from integer search {}",
            report.main_lb, report.min_k
        )));
    }
    Ok(report)
}

/// A partition of all chords into thrackles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringCertificate {
    pub n: usize,
    pub classes: Vec<Vec<Chord>>,
}

impl ColoringCertificate {
    pub fn k(&self) -> usize {
        self.classes.len()
    }

    /// Sorts chords within classes and classes by their first chord.
    pub fn normalized(mut self) -> Self {
        for c in &mut self.classes {
            c.sort();
        }
        self.classes.sort();
        self
    }
}

/// Every chord exactly once, every class pairwise intersecting. Out-of-range
/// chords or too few points make the certificate malformed rather than false.
pub fn verify_certificate(c: &ColoringCertificate) -> Result<bool> {
    let config = PointConfig::new(c.n).map_err(|e| Error::Malformed(e.to_string()))?;
    let mut seen = vec![false; config.chord_count()];
    for class in &c.classes {
        for &ch in class {
            config.check(ch).map_err(|e| Error::Malformed(e.to_string()))?;
            if std::mem::replace(&mut seen[config.chord_index(ch)], true) {
                return Ok(false);
            }
        }
        for (i, a) in class.iter().enumerate() {
            if class[i + 1..].iter().any(|b| a.is_disjoint(*b)) {
                return Ok(false);
            }
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

/// Extends every class to a maximal thrackle. The result covers all chords
/// with `k` maximal thrackles, possibly overlapping.
pub fn maximal_cover(c: &ColoringCertificate) -> Result<Vec<Thrackle>> {
    c.classes
        .iter()
        .map(|class| complete_to_maximal(&Thrackle::new(c.n, class.iter().copied())?))
        .collect()
}

fn check_solver_size(n: usize) -> Result<PointConfig> {
    let config = PointConfig::new(n)?;
    if n > MAX_SOLVER_POINTS {
        return Err(Error::TooLarge(config.chord_count()));
    }
    Ok(config)
}

fn chord_mask(config: &PointConfig, t: &Thrackle) -> u128 {
    t.edges().iter().fold(0u128, |m, &c| m | 1u128 << config.chord_index(c))
}

fn catalogue(n: usize, seed: u64) -> Result<Vec<Thrackle>> {
    let supports: Vec<Vec<usize>> = if n <= 14 {
        odd_supports(n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let mut s: BTreeSet<Vec<usize>> = (0..n).map(|v| {
            let mut t = vec![(v + n - 1) % n, v, (v + 1) % n];
            t.sort();
            t
        }).collect();
        while s.len() < 64 * n {
            s.insert(random_odd_support(n, &mut rng));
        }
        s.into_iter().collect()
    };
    supports
        .iter()
        .map(|s| Ok(structure_from_cycle_support(n, s)?.to_thrackle()))
        .collect()
}

/// Greedy cover by maximal thrackles, each round taking one of the
/// thrackles covering the most uncovered chords (ties broken by the seeded
/// generator), then assigning each chord to the first pick containing it.
/// A repair pass then dissolves classes whose chords all fit elsewhere.
pub fn thrackle_cover_greedy(n: usize, seed: u64) -> Result<ColoringCertificate> {
    let config = check_solver_size(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cat = catalogue(n, seed)?;
    cat.shuffle(&mut rng);
    let masks: Vec<u128> = cat.iter().map(|t| chord_mask(&config, t)).collect();
    let all = if config.chord_count() == 128 { u128::MAX } else { (1u128 << config.chord_count()) - 1 };
    let mut uncovered = all;
    let mut classes = Vec::new();
    while uncovered != 0 {
        let (best, gain) = masks
            .iter()
            .enumerate()
            .map(|(i, m)| (i, (m & uncovered).count_ones()))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("non-empty catalogue");
        if gain == 0 {
            return Err(Error::Falsified("catalogue does not cover every chord".into()));
        }
        let take = masks[best] & uncovered;
        classes.push(config.chords().enumerate().filter(|(i, _)| take >> i & 1 == 1).map(|(_, c)| c).collect());
        uncovered &= !take;
    }
    dissolve_small_classes(&mut classes);
    let cert = ColoringCertificate { n, classes };
    debug_assert!(verify_certificate(&cert).unwrap());
    Ok(cert)
}

/// Repeatedly tries to empty the smallest class by moving each of its chords
/// into another class whose chords it all meets.
fn dissolve_small_classes(classes: &mut Vec<Vec<Chord>>) {
    loop {
        let mut order: Vec<usize> = (0..classes.len()).collect();
        order.sort_by_key(|&i| (classes[i].len(), i));
        let dissolved = order.into_iter().find_map(|victim| {
            let mut trial = classes.clone();
            let moving = std::mem::take(&mut trial[victim]);
            for ch in moving {
                let home = (0..trial.len())
                    .find(|&j| j != victim && trial[j].iter().all(|c| c.intersects(ch)))?;
                trial[home].push(ch);
            }
            trial.remove(victim);
            Some(trial)
        });
        match dissolved {
            Some(t) => *classes = t,
            None => return,
        }
    }
}

/// Result of an exact search under a time budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChromaticOutcome {
    Exact { k: usize, certificate: ColoringCertificate },
    /// The budget ran out; `certificate` witnesses `upper`.
    Unknown { lower: usize, upper: usize, certificate: ColoringCertificate },
}

impl ChromaticOutcome {
    pub fn exact(&self) -> Option<usize> {
        match self {
            ChromaticOutcome::Exact { k, .. } => Some(*k),
            ChromaticOutcome::Unknown { .. } => None,
        }
    }

    pub fn certificate(&self) -> &ColoringCertificate {
        match self {
            ChromaticOutcome::Exact { certificate, .. } | ChromaticOutcome::Unknown { certificate, .. } => {
                certificate
            }
        }
    }

    pub fn bounds(&self) -> (usize, usize) {
        match self {
            ChromaticOutcome::Exact { k, .. } => (*k, *k),
            ChromaticOutcome::Unknown { lower, upper, .. } => (*lower, *upper),
        }
    }
}

enum Search {
    Found(Vec<u8>),
    Exhausted,
    Timeout,
}

struct Dsatur<'a> {
    adj: &'a [u128],
    /// A class is a thrackle, so it holds at most `n` chords.
    capacity: u32,
    colors: usize,
    deadline: Instant,
    nodes: u64,
    color: Vec<u8>,
    /// Vertices adjacent to some member of each class.
    blocked: Vec<u128>,
    size: Vec<u32>,
}

impl Dsatur<'_> {
    fn run(&mut self, uncolored: u128, used: usize) -> Search {
        if uncolored == 0 {
            return Search::Found(self.color.clone());
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) && Instant::now() > self.deadline {
            return Search::Timeout;
        }
        // Capacity of the open classes plus fresh ones must absorb the rest.
        let mut room = (self.colors - used) as u32 * self.capacity;
        for c in 0..used {
            room += (self.capacity - self.size[c]).min((uncolored & !self.blocked[c]).count_ones());
        }
        if room < uncolored.count_ones() {
            return Search::Exhausted;
        }
        let fresh = (used < self.colors) as u32;
        let mut pick = None;
        let mut best = (u32::MAX, 0u32);
        let mut rest = uncolored;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let bit = 1u128 << v;
            let options = (0..used).filter(|&c| self.blocked[c] & bit == 0).count() as u32 + fresh;
            if options == 0 {
                return Search::Exhausted;
            }
            let degree = (self.adj[v] & uncolored).count_ones();
            if options < best.0 || (options == best.0 && degree > best.1) {
                best = (options, degree);
                pick = Some(v);
            }
        }
        let v = pick.expect("uncolored non-empty");
        let bit = 1u128 << v;
        for c in 0..(used + fresh as usize) {
            if c < used && self.blocked[c] & bit != 0 {
                continue;
            }
            if self.size[c] >= self.capacity {
                continue;
            }
            let saved = self.blocked[c];
            self.blocked[c] |= self.adj[v];
            self.size[c] += 1;
            self.color[v] = c as u8;
            let r = self.run(uncolored & !bit, used.max(c + 1));
            self.blocked[c] = saved;
            self.size[c] -= 1;
            match r {
                Search::Exhausted => {}
                other => return other,
            }
        }
        Search::Exhausted
    }
}

fn try_colors(adj: &[u128], n: usize, colors: usize, deadline: Instant) -> Search {
    let m = adj.len();
    let all = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
    let mut s = Dsatur {
        adj,
        capacity: n as u32,
        colors,
        deadline,
        nodes: 0,
        color: vec![u8::MAX; m],
        blocked: vec![0; colors],
        size: vec![0; colors],
    };
    s.run(all, 0)
}

/// `chi(D_n)` with a verified certificate, or the best interval known when
/// the budget runs out.
pub fn exact_chromatic(n: usize, budget: Duration) -> Result<ChromaticOutcome> {
    let config = check_solver_size(n)?;
    let deadline = Instant::now() + budget;
    let report = bound_report(n)?;
    let lower = report.dw_lb.max(report.main_lb) as usize;
    let greedy = thrackle_cover_greedy(n, 0)?.normalized();

    let g = build_disjointness_graph(n)?;
    let adj: Vec<u128> = (0..g.vertex_count())
        .map(|i| g.row(i).iter().enumerate().fold(0u128, |m, (w, &bits)| m | (bits as u128) << (64 * w)))
        .collect();

    for k in lower..greedy.k() {
        match try_colors(&adj, n, k, deadline) {
            Search::Found(color) => {
                let mut classes = vec![Vec::new(); k];
                for (c, ch) in color.iter().zip(config.chords()) {
                    classes[*c as usize].push(ch);
                }
                let certificate = ColoringCertificate { n, classes }.normalized();
                return finish(k, certificate);
            }
            Search::Exhausted => {}
            Search::Timeout => {
                return Ok(ChromaticOutcome::Unknown { lower: k, upper: greedy.k(), certificate: greedy });
            }
        }
    }
    finish(greedy.k(), greedy)
}

fn finish(k: usize, certificate: ColoringCertificate) -> Result<ChromaticOutcome> {
    if certificate.k() != k || !verify_certificate(&certificate)? {
        return Err(Error::Falsified(format!("solver certificate for k = {k} does not verify")));
    }
    Ok(ChromaticOutcome::Exact { k, certificate })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(a: usize, b: usize) -> Chord {
        Chord::new(a, b).unwrap()
    }

    #[test]
    fn report_examples() {
        let r = bound_report(4).unwrap();
        assert_eq!((r.main_lb, r.min_k), (2, 2));
        let r = bound_report(8).unwrap();
        assert_eq!((r.main_lb, r.min_k), (5, 5));
        let r = bound_report(5).unwrap();
        assert_eq!((r.araujo_lb, r.dw_lb, r.main_lb), (3, 3, 3));
        assert_eq!(bound_report(3), Err(Error::TooFewPoints(3)));
    }

    #[test]
    fn min_k_matches_closed_form_with_exact_square_roots() {
        // 8n + 1 is a perfect square at n = 3, 6, 10, 15, ...: the root is an integer.
        for n in [6u64, 10, 15, 21, 28, 36, 45, 55, 1770, 499_500] {
            assert_eq!(min_k(n) as i64, main_lower_bound(n), "n = {n}");
        }
        for n in 4..=5000u64 {
            assert_eq!(min_k(n) as i64, main_lower_bound(n), "n = {n}");
        }
    }

    #[test]
    fn araujo_never_beats_the_others() {
        for n in 4..200 {
            let r = bound_report(n).unwrap();
            assert!(r.araujo_lb <= r.dw_lb.max(r.main_lb));
        }
    }

    #[test]
    fn certificate_checks() {
        let good = ColoringCertificate {
            n: 4,
            classes: vec![vec![ch(0, 1), ch(1, 2), ch(0, 2), ch(1, 3)], vec![ch(2, 3), ch(0, 3)]],
        };
        assert!(verify_certificate(&good).unwrap());
        let missing = ColoringCertificate { n: 4, classes: vec![good.classes[0].clone(), vec![ch(2, 3)]] };
        assert!(!verify_certificate(&missing).unwrap());
        let bad_class = ColoringCertificate {
            n: 4,
            classes: vec![vec![ch(0, 1), ch(2, 3)], vec![ch(0, 2), ch(1, 3), ch(1, 2), ch(0, 3)]],
        };
        assert!(!verify_certificate(&bad_class).unwrap());
        let twice = ColoringCertificate { n: 4, classes: vec![good.classes[0].clone(), good.classes[0].clone()] };
        assert!(!verify_certificate(&twice).unwrap());
        let out_of_range = ColoringCertificate { n: 4, classes: vec![vec![ch(0, 4)]] };
        assert!(matches!(verify_certificate(&out_of_range), Err(Error::Malformed(_))));
    }

    #[test]
    fn greedy_covers() {
        for n in 4..=12 {
            let c = thrackle_cover_greedy(n, 0).unwrap();
            assert!(verify_certificate(&c).unwrap());
            assert!(c.k() as u64 >= min_k(n as u64));
            assert!(c.k() < n, "n = {n}: greedy used {} classes", c.k());
        }
        assert_eq!(thrackle_cover_greedy(9, 3).unwrap(), thrackle_cover_greedy(9, 3).unwrap());
    }

    #[test]
    fn exact_small() {
        let four = exact_chromatic(4, Duration::from_secs(10)).unwrap();
        assert_eq!(four.exact(), Some(2));
        let five = exact_chromatic(5, Duration::from_secs(10)).unwrap();
        assert_eq!(five.exact(), Some(3));
        assert!(verify_certificate(five.certificate()).unwrap());
    }

    #[test]
    fn maximal_cover_extends_classes() {
        let c = thrackle_cover_greedy(7, 1).unwrap();
        let cover = maximal_cover(&c).unwrap();
        assert_eq!(cover.len(), c.k());
        for (t, class) in cover.iter().zip(&c.classes) {
            assert_eq!(t.len(), 7);
            assert!(class.iter().all(|ch| t.contains(*ch)));
        }
    }

    #[test]
    fn zero_budget_reports_interval() {
        let out = exact_chromatic(11, Duration::ZERO).unwrap();
        if let ChromaticOutcome::Unknown { lower, upper, certificate } = &out {
            assert!(lower <= upper);
            assert_eq!(certificate.k(), *upper);
            assert!(verify_certificate(certificate).unwrap());
        }
    }
}
