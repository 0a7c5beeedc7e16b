//! Filter-level axiom checks.
//!
//! On a finite carrier every filter is `↑A` for a nonempty `A`, and `ψ` is a
//! subnet of `φ` iff `ψ↑ ⊇ φ↑`. With `L(A)` the limits of `↑A`:
//!
//! - centered: `x ∈ L({x})`
//! - isotone: `B ⊆ A ⇒ L(A) ⊆ L(B)`
//! - stable: `L(A) ∩ L(B) ⊆ L(A ∪ B)`
//! - kent: `x ∈ L(A) ⇒ x ∈ L(A ∪ {x})`
//! - pseudotopological: `L(A) = ⋂_{x∈A} L({x})`
//! - pretopological: `x ∈ L(V_x)` where `V_x` is the union of all bases
//!   converging to `x` (vacuous if there are none)
//! - topological: `L = from_topology(open_sets(L))`
//!
//! Stable and kent are phrased through mixings, and a mixing of two nets can
//! induce a filter finer than the intersection of theirs. The reductions
//! above agree with the net definitions on isotone preconvergences.

use std::fmt;
use std::str::FromStr;

use super::{from_topology, open_sets, Preconvergence};
use crate::error::Error;
use crate::filters::PointSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    Centered,
    Isotone,
    Stable,
    Kent,
    Pretopological,
    Pseudotopological,
    Topological,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::Centered,
        Axiom::Isotone,
        Axiom::Stable,
        Axiom::Kent,
        Axiom::Pretopological,
        Axiom::Pseudotopological,
        Axiom::Topological,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Centered => "centered",
            Axiom::Isotone => "isotone",
            Axiom::Stable => "stable",
            Axiom::Kent => "kent",
            Axiom::Pretopological => "pretopological",
            Axiom::Pseudotopological => "pseudotopological",
            Axiom::Topological => "topological",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Axiom::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::PreconditionFailed(format!("unknown axiom `{s}`")))
    }
}

/// Sets and point certifying a failure. The meaning of `sets` depends on the
/// axiom: `[B, A]` with `A ⊆ B` for isotone, `[A, B]` for stable, `[A]` for
/// kent, pseudotopological and topological, `[V_x]` for pretopological,
/// `[{x}]` for centered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomWitness {
    pub sets: Vec<PointSet>,
    pub point: Option<usize>,
}

impl AxiomWitness {
    fn new(sets: Vec<PointSet>, point: usize) -> Self {
        AxiomWitness {
            sets,
            point: Some(point),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub holds: bool,
    pub witness: Option<AxiomWitness>,
}

pub fn check_axiom(l: &Preconvergence, axiom: Axiom) -> AxiomCheck {
    let witness = match axiom {
        Axiom::Centered => centered(l),
        Axiom::Isotone => isotone(l),
        Axiom::Stable => stable(l),
        Axiom::Kent => kent(l),
        Axiom::Pretopological => pretopological(l),
        Axiom::Pseudotopological => pseudotopological(l),
        Axiom::Topological => topological(l),
    };
    AxiomCheck {
        axiom,
        holds: witness.is_none(),
        witness,
    }
}

fn centered(l: &Preconvergence) -> Option<AxiomWitness> {
    (0..l.size())
        .find(|&x| !l.converges(PointSet::singleton(x), x))
        .map(|x| AxiomWitness::new(vec![PointSet::singleton(x)], x))
}

fn isotone(l: &Preconvergence) -> Option<AxiomWitness> {
    for (a, lim) in l.entries() {
        for b in a.nonempty_subsets() {
            if let Some(x) = lim.difference(l.limits(b)).first() {
                return Some(AxiomWitness::new(vec![a, b], x));
            }
        }
    }
    None
}

fn stable(l: &Preconvergence) -> Option<AxiomWitness> {
    for (a, la) in l.entries() {
        for (b, lb) in l.entries().skip(a.bits() as usize) {
            let lost = la.intersection(lb).difference(l.limits(a.union(b)));
            if let Some(x) = lost.first() {
                return Some(AxiomWitness::new(vec![a, b], x));
            }
        }
    }
    None
}

fn kent(l: &Preconvergence) -> Option<AxiomWitness> {
    for (a, lim) in l.entries() {
        if let Some(x) = lim.iter().find(|&x| !l.converges(a.with(x), x)) {
            return Some(AxiomWitness::new(vec![a], x));
        }
    }
    None
}

fn pretopological(l: &Preconvergence) -> Option<AxiomWitness> {
    (0..l.size()).find_map(|x| {
        let hull = l.convergence_hull(x);
        (!hull.is_empty() && !l.converges(hull, x)).then(|| AxiomWitness::new(vec![hull], x))
    })
}

fn through_points(l: &Preconvergence, a: PointSet) -> PointSet {
    a.iter().fold(l.full(), |acc, x| {
        acc.intersection(l.limits(PointSet::singleton(x)))
    })
}

fn pseudotopological(l: &Preconvergence) -> Option<AxiomWitness> {
    l.entries().find_map(|(a, lim)| {
        let expected = through_points(l, a);
        let diff = lim.union(expected).difference(lim.intersection(expected));
        diff.first().map(|x| AxiomWitness::new(vec![a], x))
    })
}

/// Prefers the largest base with nonempty limits on which `L` and its
/// topological modification differ.
fn topological(l: &Preconvergence) -> Option<AxiomWitness> {
    let t = from_topology(&open_sets(l));
    let differing = |a: &PointSet| l.limits(*a) != t.limits(*a);
    let mut bases: Vec<PointSet> = l.entries().map(|(a, _)| a).filter(differing).collect();
    bases.reverse();
    let a = bases
        .iter()
        .copied()
        .find(|&a| !l.limits(a).is_empty())
        .or_else(|| bases.first().copied())?;
    let (la, ta) = (l.limits(a), t.limits(a));
    let x = la.union(ta).difference(la.intersection(ta)).first()?;
    Some(AxiomWitness::new(vec![a], x))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn holds(&self, axiom: Axiom) -> bool {
        self.check(axiom).holds
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        &self.checks[Axiom::ALL.iter().position(|&a| a == axiom).expect("listed")]
    }

    pub fn checks(&self) -> &[AxiomCheck] {
        &self.checks
    }

    /// Centered and isotone.
    pub fn is_convergence(&self) -> bool {
        self.holds(Axiom::Centered) && self.holds(Axiom::Isotone)
    }

    /// A stable convergence.
    pub fn is_limit(&self) -> bool {
        self.is_convergence() && self.holds(Axiom::Stable)
    }

    /// The stable and kent flags read mixings as filter unions, which is
    /// only faithful when isotonicity holds.
    pub fn dependency_note(&self) -> Option<&'static str> {
        (!self.holds(Axiom::Isotone))
            .then_some("stable and kent verdicts assume isotonicity, which fails here")
    }

    /// First broken implication among: topological ⇒ every other axiom;
    /// pseudotopological ⇒ isotone and stable; for isotone spaces,
    /// pretopological ⇒ pseudotopological.
    pub fn hierarchy_violation(&self) -> Option<String> {
        let h = |a| self.holds(a);
        let mut implications = vec![];
        if h(Axiom::Topological) {
            implications.extend(Axiom::ALL.map(|a| (Axiom::Topological, a)));
        }
        if h(Axiom::Pseudotopological) {
            implications.push((Axiom::Pseudotopological, Axiom::Isotone));
            implications.push((Axiom::Pseudotopological, Axiom::Stable));
        }
        if h(Axiom::Pretopological) && h(Axiom::Isotone) {
            implications.push((Axiom::Pretopological, Axiom::Pseudotopological));
        }
        implications
            .into_iter()
            .find(|&(_, b)| !h(b))
            .map(|(a, b)| format!("{a} holds but {b} fails"))
    }
}

pub fn classify(l: &Preconvergence) -> AxiomReport {
    AxiomReport {
        checks: Axiom::ALL.iter().map(|&a| check_axiom(l, a)).collect(),
    }
}
