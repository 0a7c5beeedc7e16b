//! Enumeration, random generation and counterexample search.
//!
//! A preconvergence on `n` points is the same as a family `F_x` of bases per
//! point, with `x ∈ L(A)` iff `A ∈ F_x`. All axioms except topological
//! constrain each `F_x` separately, so enumeration runs an odometer over
//! per-point candidate families and filters for topological at the end.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{all_mappings, is_limit_space, quotient, SpaceMap};
use crate::error::{Error, Result};
use crate::filters::{Carrier, Mapping, PointSet};
use crate::spaces::{
    check_axiom, classify_set, mixing_closure, open_sets, from_topology, Axiom, Preconvergence,
};

/// Largest enumeration the odometer will run.
const MAX_ENUMERATION: u128 = 1 << 24;

fn implied(constraints: &[Axiom]) -> Vec<Axiom> {
    let mut all: Vec<Axiom> = constraints.to_vec();
    if constraints.contains(&Axiom::Topological) {
        all.extend(Axiom::ALL);
    }
    all.sort();
    all.dedup();
    all
}

/// Per-point family as a bitmask over base indices (`bits - 1`).
fn family_has(fam: u64, a: PointSet) -> bool {
    fam >> (a.bits() - 1) & 1 == 1
}

fn family_members(fam: u64) -> impl Iterator<Item = PointSet> {
    (0..64u32)
        .filter(move |i| fam >> i & 1 == 1)
        .map(|i| PointSet::from_bits(i + 1))
}

fn family_allowed(n: usize, x: usize, fam: u64, constraints: &[Axiom]) -> bool {
    let members: Vec<PointSet> = family_members(fam).collect();
    constraints.iter().all(|axiom| match axiom {
        Axiom::Centered => family_has(fam, PointSet::singleton(x)),
        Axiom::Isotone => members.iter().all(|&a| {
            a.len() == 1 || a.iter().all(|p| family_has(fam, a.without(p)))
        }),
        Axiom::Stable => members
            .iter()
            .all(|&a| members.iter().all(|&b| family_has(fam, a.union(b)))),
        Axiom::Kent => members.iter().all(|&a| family_has(fam, a.with(x))),
        Axiom::Pretopological => {
            members.is_empty()
                || family_has(fam, members.iter().fold(PointSet::EMPTY, |u, &a| u.union(a)))
        }
        Axiom::Pseudotopological => {
            let singles: PointSet = (0..n).filter(|&p| family_has(fam, PointSet::singleton(p))).collect();
            let expected: u64 = singles
                .nonempty_subsets()
                .fold(0, |acc, a| acc | 1 << (a.bits() - 1));
            fam == expected
        }
        Axiom::Topological => true,
    })
}

/// Tables over alphabetic carriers in a fixed order, point `a`'s family
/// changing slowest.
pub struct Spaces {
    carrier: Arc<Carrier>,
    candidates: Vec<Vec<u64>>,
    odometer: Option<Vec<usize>>,
    topological: bool,
}

impl Spaces {
    fn build(&self) -> Preconvergence {
        let odo = self.odometer.as_ref().expect("active");
        let fams: Vec<u64> = odo
            .iter()
            .zip(&self.candidates)
            .map(|(&i, c)| c[i])
            .collect();
        Preconvergence::from_fn(self.carrier.clone(), |a| {
            (0..fams.len()).filter(|&x| family_has(fams[x], a)).collect()
        })
    }

    fn advance(&mut self) {
        let Some(odo) = self.odometer.as_mut() else { return };
        for i in (0..odo.len()).rev() {
            odo[i] += 1;
            if odo[i] < self.candidates[i].len() {
                return;
            }
            odo[i] = 0;
        }
        self.odometer = None;
    }

    /// Number of tables visited before the topological filter.
    pub fn raw_len(&self) -> u128 {
        self.candidates.iter().map(|c| c.len() as u128).product()
    }
}

impl Iterator for Spaces {
    type Item = Preconvergence;

    fn next(&mut self) -> Option<Preconvergence> {
        while self.odometer.is_some() {
            let l = self.build();
            self.advance();
            if !self.topological || check_axiom(&l, Axiom::Topological).holds {
                return Some(l);
            }
        }
        None
    }
}

/// Every preconvergence on the alphabetic `n`-point carrier satisfying all
/// `constraints`.
pub fn enumerate_spaces(n: usize, constraints: &[Axiom]) -> Result<Spaces> {
    if n > 4 {
        return Err(Error::TooLarge(format!("{n} points; enumeration stops at 4")));
    }
    let carrier = Arc::new(Carrier::alphabetic(n)?);
    let constraints = implied(constraints);
    let families = 1u64 << ((1u32 << n) - 1);
    let mut candidates = Vec::with_capacity(n);
    for x in 0..n {
        candidates.push(
            (0..families)
                .filter(|&f| family_allowed(n, x, f, &constraints))
                .collect::<Vec<u64>>(),
        );
    }
    let spaces = Spaces {
        carrier,
        odometer: if candidates.iter().any(|c| c.is_empty()) {
            None
        } else {
            Some(vec![0; n])
        },
        candidates,
        topological: constraints.contains(&Axiom::Topological),
    };
    if spaces.raw_len() > MAX_ENUMERATION {
        return Err(Error::TooLarge(format!(
            "{} candidate tables on {n} points",
            spaces.raw_len()
        )));
    }
    Ok(spaces)
}

/// Every table on `n ≤ 3` points.
pub fn all_preconvergences(n: usize) -> Spaces {
    enumerate_spaces(n, &[]).expect("small carrier")
}

/// Every finite topology on the alphabetic `n`-point carrier, `n ≤ 4`.
pub fn enumerate_topologies(n: usize) -> Result<Vec<crate::spaces::FiniteTopology>> {
    Ok(enumerate_spaces(n, &[Axiom::Topological])?
        .map(|l| open_sets(&l))
        .collect())
}

/// Enlarges `l` until every requested axiom holds. Each step only adds
/// limits, so the loop ends.
pub fn close_under(l: &Preconvergence, constraints: &[Axiom]) -> Preconvergence {
    let mut l = l.clone();
    let n = l.size();
    loop {
        let failing: Vec<Axiom> = constraints
            .iter()
            .copied()
            .filter(|&a| !check_axiom(&l, a).holds)
            .collect();
        if failing.is_empty() {
            return l;
        }
        for axiom in failing {
            l = match axiom {
                Axiom::Centered => {
                    let mut m = l.clone();
                    for x in 0..n {
                        let s = PointSet::singleton(x);
                        m.set_limits(s, m.limits(s).with(x));
                    }
                    m
                }
                Axiom::Isotone => Preconvergence::from_fn(l.carrier().clone(), |b| {
                    l.entries()
                        .filter(|(a, _)| b.is_subset(*a))
                        .fold(PointSet::EMPTY, |acc, (_, lim)| acc.union(lim))
                }),
                Axiom::Kent => {
                    let mut m = l.clone();
                    for (a, lim) in l.entries() {
                        for x in lim {
                            m.set_limits(a.with(x), m.limits(a.with(x)).with(x));
                        }
                    }
                    m
                }
                Axiom::Stable | Axiom::Pretopological => mixing_closure(&l),
                Axiom::Pseudotopological => {
                    let singles: Vec<PointSet> = (0..n)
                        .map(|p| {
                            l.entries()
                                .filter(|(a, _)| a.contains(p))
                                .fold(PointSet::EMPTY, |acc, (_, lim)| acc.union(lim))
                        })
                        .collect();
                    Preconvergence::from_fn(l.carrier().clone(), |a| {
                        a.iter()
                            .fold(PointSet::full(n), |acc, p| acc.intersection(singles[p]))
                    })
                }
                Axiom::Topological => from_topology(&open_sets(&l)),
            };
        }
    }
}

/// A seeded random table closed under `constraints`. Each instance draws a
/// density `d` and puts each point into `L(A)` with probability `d^|A|`.
pub fn random_space(n: usize, seed: u64, constraints: &[Axiom]) -> Result<Preconvergence> {
    let carrier = Arc::new(Carrier::alphabetic(n)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let density: f64 = rng.gen_range(0.15..0.9);
    let raw = Preconvergence::from_fn(carrier, |a| {
        let p = density.powi(a.len() as i32);
        (0..n).filter(|_| rng.gen_bool(p)).collect()
    });
    let closed = close_under(&raw, constraints);
    if let Some(a) = constraints.iter().find(|&&a| !check_axiom(&closed, a).holds) {
        return Err(Error::Falsification(format!("closure left {a} failing")));
    }
    Ok(closed)
}

/// Independent seed for instance `index` of a search keyed by `seed`.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    /// A centered isotone table that is not stable.
    Stability,
    /// A limit space with a quotient that is not a limit space.
    QuotientLimit,
    /// Limit spaces, a 2-cover with a non-closed piece, continuous pieces
    /// and a discontinuous glued map.
    PastingClosed,
    /// A centered isotone non-stable domain, a closed 2-cover, continuous
    /// pieces into a limit space and a discontinuous glued map.
    PastingStability,
}

impl Property {
    pub const ALL: [Property; 4] = [
        Property::Stability,
        Property::QuotientLimit,
        Property::PastingClosed,
        Property::PastingStability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Stability => "stability",
            Property::QuotientLimit => "quotient-limit",
            Property::PastingClosed => "pasting-closed",
            Property::PastingStability => "pasting-stability",
        }
    }

    /// Axioms every candidate domain must satisfy.
    pub fn domain_constraints(self) -> &'static [Axiom] {
        match self {
            Property::Stability | Property::PastingStability => &[Axiom::Centered, Axiom::Isotone],
            Property::QuotientLimit | Property::PastingClosed => {
                &[Axiom::Centered, Axiom::Isotone, Axiom::Stable]
            }
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::PreconditionFailed(format!("unknown property `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub min_points: usize,
    pub max_points: usize,
    /// Extra axioms required of the domain.
    pub constraints: Vec<Axiom>,
    pub property: Property,
    pub seed: u64,
    /// Number of domains examined.
    pub budget: u64,
}

impl SearchSpec {
    pub fn new(property: Property, max_points: usize, seed: u64, budget: u64) -> Self {
        SearchSpec {
            min_points: 1,
            max_points,
            constraints: vec![],
            property,
            seed,
            budget,
        }
    }

    fn check(&self) -> Result<()> {
        if self.max_points == 0 || self.budget == 0 || self.min_points > self.max_points {
            return Err(Error::PreconditionFailed(
                "need 1 ≤ min_points ≤ max_points and budget ≥ 1".into(),
            ));
        }
        Ok(())
    }
}

/// The offending structures. `spaces[0]` is the domain. For the pasting
/// properties `spaces[1]` is the target, `maps[0]` the glued map and
/// `sets` the cover; for quotients `spaces[1]` is the quotient, `maps[0]`
/// the projection and `sets` the classes; for stability `sets` are the two
/// bases and `points[0]` the lost limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub property: Property,
    pub spaces: Vec<Preconvergence>,
    pub maps: Vec<Mapping>,
    pub sets: Vec<PointSet>,
    pub points: Vec<usize>,
    /// What fails, in words.
    pub detail: String,
    /// Seed that regenerates `spaces[0]`, when it came from the random phase.
    pub replay_seed: Option<u64>,
}

/// Re-evaluates the property on the stored structures.
pub fn replay(w: &Witness) -> bool {
    let x = &w.spaces[0];
    let domain_ok = w
        .property
        .domain_constraints()
        .iter()
        .all(|&a| check_axiom(x, a).holds);
    if !domain_ok {
        return false;
    }
    match w.property {
        Property::Stability => {
            let (a, b, p) = (w.sets[0], w.sets[1], w.points[0]);
            x.converges(a, p) && x.converges(b, p) && !x.converges(a.union(b), p)
        }
        Property::QuotientLimit => match quotient(x, &w.sets) {
            Ok(q) => q.space == w.spaces[1] && !is_limit_space(&q.space),
            Err(_) => false,
        },
        Property::PastingClosed | Property::PastingStability => {
            let y = &w.spaces[1];
            pasting_instance(x, y, &w.maps[0], w.sets[0], w.sets[1], w.property).is_some()
        }
    }
}

fn stability_witness(x: &Preconvergence) -> Option<Witness> {
    let check = check_axiom(x, Axiom::Stable);
    let w = check.witness?;
    Some(Witness {
        property: Property::Stability,
        spaces: vec![x.clone()],
        maps: vec![],
        detail: format!(
            "{} is a limit of ↑{} and ↑{} but not of their intersection",
            x.carrier().label(w.point.expect("point")),
            x.carrier().format_set(w.sets[0]),
            x.carrier().format_set(w.sets[1])
        ),
        points: vec![w.point.expect("point")],
        sets: w.sets,
        replay_seed: None,
    })
}

/// Set partitions of `0..n` as class lists, in restricted-growth order.
pub fn partitions(n: usize) -> Vec<Vec<PointSet>> {
    fn go(i: usize, n: usize, classes: &mut Vec<PointSet>, out: &mut Vec<Vec<PointSet>>) {
        if i == n {
            out.push(classes.clone());
            return;
        }
        for c in 0..classes.len() {
            classes[c] = classes[c].with(i);
            go(i + 1, n, classes, out);
            classes[c] = classes[c].without(i);
        }
        classes.push(PointSet::singleton(i));
        go(i + 1, n, classes, out);
        classes.pop();
    }
    let mut out = vec![];
    go(0, n, &mut vec![], &mut out);
    out
}

fn quotient_witness(x: &Preconvergence) -> Option<Witness> {
    for classes in partitions(x.size()) {
        let q = quotient(x, &classes).expect("valid partition");
        let failing = [Axiom::Centered, Axiom::Isotone, Axiom::Stable]
            .into_iter()
            .find(|&a| !check_axiom(&q.space, a).holds);
        if let Some(axiom) = failing {
            return Some(Witness {
                property: Property::QuotientLimit,
                detail: format!("quotient fails {axiom}"),
                spaces: vec![x.clone(), q.space],
                maps: q.maps,
                sets: classes,
                points: vec![],
                replay_seed: None,
            });
        }
    }
    None
}

/// The pasting property on one glued map, or `None` if it does not break.
fn pasting_instance(
    x: &Preconvergence,
    y: &Preconvergence,
    g: &Mapping,
    a: PointSet,
    b: PointSet,
    property: Property,
) -> Option<String> {
    if a.union(b) != x.full() || a.is_empty() || b.is_empty() || !is_limit_space(y) {
        return None;
    }
    let closed = |s| classify_set(x, s).map(|c| c.closed).unwrap_or(false);
    let both_closed = closed(a) && closed(b);
    match property {
        Property::PastingClosed if both_closed || !is_limit_space(x) => return None,
        Property::PastingStability if !both_closed || is_limit_space(x) => return None,
        _ => {}
    }
    let f = SpaceMap::new(x.clone(), y.clone(), g.clone()).ok()?;
    let pieces_ok = [a, b].into_iter().all(|s| {
        crate::constructions::restrict(&f, s)
            .map(|r| r.is_continuous())
            .unwrap_or(false)
    });
    let w = f.discontinuity()?;
    pieces_ok.then(|| {
        format!(
            "pieces continuous, glued map discontinuous at {} on {}",
            x.carrier().label(w.point),
            x.carrier().format_set(w.base)
        )
    })
}

fn pasting_targets() -> Vec<Preconvergence> {
    (1..=2)
        .flat_map(|m| {
            enumerate_spaces(m, &[Axiom::Centered, Axiom::Isotone, Axiom::Stable])
                .expect("small")
                .collect::<Vec<_>>()
        })
        .collect()
}

fn pasting_witness(x: &Preconvergence, property: Property, targets: &[Preconvergence]) -> Option<Witness> {
    let full = x.full();
    let covers: Vec<(PointSet, PointSet)> = full
        .nonempty_subsets()
        .flat_map(|a| {
            full.nonempty_subsets()
                .filter(move |&b| a.bits() <= b.bits() && a.union(b) == full)
                .map(move |b| (a, b))
        })
        .collect();
    for y in targets {
        for g in all_mappings(x.size(), y.size()) {
            for &(a, b) in &covers {
                if let Some(detail) = pasting_instance(x, y, &g, a, b, property) {
                    return Some(Witness {
                        property,
                        spaces: vec![x.clone(), y.clone()],
                        maps: vec![g],
                        sets: vec![a, b],
                        points: vec![],
                        detail,
                        replay_seed: None,
                    });
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub witness: Option<Witness>,
    /// Domains examined.
    pub examined: u64,
}

/// Exhaustive over domains with at most 3 points, then random domains on
/// `max_points` points, stopping after `budget` domains.
pub fn search_counterexample(spec: &SearchSpec) -> Result<SearchOutcome> {
    spec.check()?;
    let mut constraints = spec.property.domain_constraints().to_vec();
    constraints.extend(&spec.constraints);
    let targets = pasting_targets();
    let test = |x: &Preconvergence| match spec.property {
        Property::Stability => stability_witness(x),
        Property::QuotientLimit => quotient_witness(x),
        Property::PastingClosed | Property::PastingStability => {
            pasting_witness(x, spec.property, &targets)
        }
    };
    let mut examined = 0u64;
    for n in spec.min_points..=spec.max_points.min(3) {
        for x in enumerate_spaces(n, &constraints)? {
            if examined == spec.budget {
                return Ok(SearchOutcome { witness: None, examined });
            }
            examined += 1;
            if let Some(w) = test(&x) {
                return Ok(SearchOutcome { witness: Some(w), examined });
            }
        }
    }
    if spec.max_points > 3 {
        let n = spec.max_points;
        let mut index = 0u64;
        while examined < spec.budget {
            let seed = instance_seed(spec.seed, index);
            index += 1;
            examined += 1;
            let x = random_space(n, seed, &constraints)?;
            if let Some(mut w) = test(&x) {
                w.replay_seed = Some(seed);
                return Ok(SearchOutcome { witness: Some(w), examined });
            }
        }
    }
    Ok(SearchOutcome { witness: None, examined })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(all_preconvergences(1).count(), 2);
        assert_eq!(enumerate_spaces(1, &[Axiom::Centered]).unwrap().count(), 1);
        assert_eq!(all_preconvergences(2).count(), 64);
        let limits = [Axiom::Centered, Axiom::Isotone, Axiom::Stable];
        assert_eq!(enumerate_spaces(2, &limits).unwrap().count(), 4);
        assert_eq!(enumerate_spaces(3, &limits).unwrap().count(), 64);
        assert!(matches!(enumerate_spaces(4, &[]), Err(Error::TooLarge(_))));
    }

    #[test]
    fn enumeration_filters_exactly() {
        for l in enumerate_spaces(2, &[Axiom::Kent]).unwrap() {
            assert!(check_axiom(&l, Axiom::Kent).holds);
        }
        let kent = all_preconvergences(2)
            .filter(|l| check_axiom(l, Axiom::Kent).holds)
            .count();
        assert_eq!(enumerate_spaces(2, &[Axiom::Kent]).unwrap().count(), kent);
        let pseudo = all_preconvergences(2)
            .filter(|l| check_axiom(l, Axiom::Pseudotopological).holds)
            .count();
        assert_eq!(
            enumerate_spaces(2, &[Axiom::Pseudotopological]).unwrap().count(),
            pseudo
        );
    }

    #[test]
    fn random_space_is_deterministic() {
        let a = random_space(4, 7, &[]).unwrap();
        assert_eq!(a, random_space(4, 7, &[]).unwrap());
        assert_ne!(a, random_space(4, 8, &[]).unwrap());
    }

    #[test]
    fn random_closures_hold() {
        for seed in 0..50 {
            for axiom in Axiom::ALL {
                let l = random_space(3, seed, &[axiom]).unwrap();
                assert!(check_axiom(&l, axiom).holds);
            }
        }
    }

    #[test]
    fn partitions_of_four() {
        assert_eq!(partitions(4).len(), 15);
        assert_eq!(partitions(1), vec![vec![PointSet::singleton(0)]]);
    }

    #[test]
    fn pasting_closed_on_discrete_finds_nothing() {
        let d2 = crate::fixtures::d2();
        assert!(pasting_witness(&d2, Property::PastingClosed, &pasting_targets()).is_none());
    }

    #[test]
    fn property_names_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
    }
}
