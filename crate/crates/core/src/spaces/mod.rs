//! Preconvergences on finite carriers.
//!
//! A [`Preconvergence`] is a limit table: one entry per nonempty subset `B`,
//! holding the points that `↑B` converges to. A net `φ` converges to `x`
//! exactly when `x` is in the entry for the base of `φ↑`.

mod axioms;
mod topology;

use std::fmt;
use std::sync::Arc;

pub use axioms::{check_axiom, classify, Axiom, AxiomCheck, AxiomReport, AxiomWitness};
pub use topology::{
    from_topology, open_sets, topological_modification, FiniteTopology,
};

use crate::error::{Error, Result};
use crate::filters::{nonempty_subsets, same_carrier, Carrier, PointSet, PrincipalFilter};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Preconvergence {
    carrier: Arc<Carrier>,
    /// Entry `i` belongs to the base with bits `i + 1`.
    table: Vec<PointSet>,
}

impl fmt::Debug for Preconvergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (base, lim) in self.entries() {
            map.entry(
                &self.carrier.set_key(base),
                &self.carrier.format_set(lim),
            );
        }
        map.finish()
    }
}

impl Preconvergence {
    /// `table[i]` is the limit set of the base with bits `i + 1`.
    pub fn new(carrier: Arc<Carrier>, table: Vec<PointSet>) -> Result<Self> {
        let expected = (1usize << carrier.len()) - 1;
        if table.len() != expected {
            return Err(Error::TableSize {
                expected,
                found: table.len(),
            });
        }
        for &entry in &table {
            carrier.check_set(entry)?;
        }
        Ok(Preconvergence { carrier, table })
    }

    pub fn from_fn(carrier: Arc<Carrier>, mut limits: impl FnMut(PointSet) -> PointSet) -> Self {
        let full = carrier.full();
        let table = nonempty_subsets(carrier.len())
            .map(|b| limits(b).intersection(full))
            .collect();
        Preconvergence { carrier, table }
    }

    /// Nothing converges.
    pub fn empty(carrier: Arc<Carrier>) -> Self {
        Preconvergence::from_fn(carrier, |_| PointSet::EMPTY)
    }

    /// Every filter converges to every point.
    pub fn chaotic(carrier: Arc<Carrier>) -> Self {
        let full = carrier.full();
        Preconvergence::from_fn(carrier, |_| full)
    }

    /// Only `u_x → x`.
    pub fn discrete(carrier: Arc<Carrier>) -> Self {
        Preconvergence::from_fn(carrier, |b| if b.len() == 1 { b } else { PointSet::EMPTY })
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn size(&self) -> usize {
        self.carrier.len()
    }

    pub fn full(&self) -> PointSet {
        self.carrier.full()
    }

    /// Limit points of `↑base`. The empty base has none.
    pub fn limits(&self, base: PointSet) -> PointSet {
        match base.bits() {
            0 => PointSet::EMPTY,
            bits => self.table[bits as usize - 1],
        }
    }

    pub fn limits_of(&self, filter: &PrincipalFilter) -> PointSet {
        self.limits(filter.base())
    }

    pub fn converges(&self, base: PointSet, point: usize) -> bool {
        self.limits(base).contains(point)
    }

    pub fn set_limits(&mut self, base: PointSet, limits: PointSet) {
        assert!(!base.is_empty(), "the empty set is not a filter base");
        self.table[base.bits() as usize - 1] = limits.intersection(self.carrier.full());
    }

    pub fn table(&self) -> &[PointSet] {
        &self.table
    }

    /// `(base, limits)` pairs in increasing bit order of the base.
    pub fn entries(&self) -> impl Iterator<Item = (PointSet, PointSet)> + '_ {
        self.table
            .iter()
            .enumerate()
            .map(|(i, &lim)| (PointSet::from_bits(i as u32 + 1), lim))
    }

    /// Union of all bases converging to `point`; the base of `V_x`.
    pub fn convergence_hull(&self, point: usize) -> PointSet {
        self.entries()
            .filter(|(_, lim)| lim.contains(point))
            .fold(PointSet::EMPTY, |acc, (b, _)| acc.union(b))
    }

    fn hulls(&self) -> Vec<PointSet> {
        let mut hulls = vec![PointSet::EMPTY; self.size()];
        for (b, lim) in self.entries() {
            for x in lim {
                hulls[x] = hulls[x].union(b);
            }
        }
        hulls
    }

    pub fn same_carrier(&self, other: &Preconvergence) -> bool {
        same_carrier(&self.carrier, &other.carrier)
    }

    fn require_same_carrier(&self, other: &Preconvergence) -> Result<()> {
        if self.same_carrier(other) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }

    /// Same table on another carrier of equal size.
    pub fn relabeled(&self, carrier: Arc<Carrier>) -> Result<Self> {
        if carrier.len() != self.size() {
            return Err(Error::CarrierMismatch);
        }
        Ok(Preconvergence {
            carrier,
            table: self.table.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Finer,
    Coarser,
    Equal,
    Incomparable,
}

/// How `l` relates to `m`. `l` is finer when every limit of `l` is a limit
/// of `m`.
pub fn compare(l: &Preconvergence, m: &Preconvergence) -> Result<Comparison> {
    l.require_same_carrier(m)?;
    let l_in_m = l.table.iter().zip(&m.table).all(|(a, b)| a.is_subset(*b));
    let m_in_l = l.table.iter().zip(&m.table).all(|(a, b)| b.is_subset(*a));
    Ok(match (l_in_m, m_in_l) {
        (true, true) => Comparison::Equal,
        (true, false) => Comparison::Finer,
        (false, true) => Comparison::Coarser,
        (false, false) => Comparison::Incomparable,
    })
}

/// `l` is finer than or equal to `m` (`m ≤ l` in the preconvergence order).
pub fn is_finer_or_equal(l: &Preconvergence, m: &Preconvergence) -> bool {
    l.table.iter().zip(&m.table).all(|(a, b)| a.is_subset(*b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeOp {
    Sup,
    Inf,
}

/// Supremum (entrywise intersection, chaotic for the empty family) or
/// infimum (entrywise union, empty for the empty family).
pub fn lattice_op(
    kind: LatticeOp,
    family: &[Preconvergence],
    carrier: &Arc<Carrier>,
) -> Result<Preconvergence> {
    if family.iter().any(|l| !same_carrier(l.carrier(), carrier)) {
        return Err(Error::CarrierMismatch);
    }
    let start = match kind {
        LatticeOp::Sup => Preconvergence::chaotic(carrier.clone()),
        LatticeOp::Inf => Preconvergence::empty(carrier.clone()),
    };
    Ok(family.iter().fold(start, |mut acc, l| {
        for (entry, &other) in acc.table.iter_mut().zip(&l.table) {
            *entry = match kind {
                LatticeOp::Sup => entry.intersection(other),
                LatticeOp::Inf => entry.union(other),
            };
        }
        acc
    }))
}

pub fn sup(family: &[Preconvergence], carrier: &Arc<Carrier>) -> Result<Preconvergence> {
    lattice_op(LatticeOp::Sup, family, carrier)
}

pub fn inf(family: &[Preconvergence], carrier: &Arc<Carrier>) -> Result<Preconvergence> {
    lattice_op(LatticeOp::Inf, family, carrier)
}

/// Points all of whose convergent filters contain `set`.
pub fn inherence(l: &Preconvergence, set: PointSet) -> PointSet {
    l.hulls()
        .iter()
        .enumerate()
        .filter(|(_, hull)| hull.is_subset(set))
        .map(|(x, _)| x)
        .collect()
}

/// Limits of filters meshing `set`.
pub fn adherence(l: &Preconvergence, set: PointSet) -> PointSet {
    l.entries()
        .filter(|(b, _)| b.meets(set))
        .fold(PointSet::EMPTY, |acc, (_, lim)| acc.union(lim))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetClass {
    pub open: bool,
    pub closed: bool,
}

/// Open (`S ⊆ inh(S)`) and closed (complement open). For isotone `l` the
/// closed verdict is cross-checked against "no filter on `S` converges
/// outside `S`".
pub fn classify_set(l: &Preconvergence, set: PointSet) -> Result<SetClass> {
    l.carrier.check_set(set)?;
    let n = l.size();
    let is_open = |s: PointSet| s.is_subset(inherence(l, s));
    let class = SetClass {
        open: is_open(set),
        closed: is_open(set.complement(n)),
    };
    if check_axiom(l, Axiom::Isotone).holds {
        let by_nets = set.nonempty_subsets().all(|a| l.limits(a).is_subset(set));
        if by_nets != class.closed {
            return Err(Error::Falsification(format!(
                "closed-set characterization disagrees on {}",
                l.carrier.format_set(set)
            )));
        }
    }
    Ok(class)
}

/// `{x : A ⊆ ⋃{B : x ∈ L(B)}}`. Isotone and stable for any input, and
/// coarser than or equal to `l`.
pub(crate) fn mixing_closure(l: &Preconvergence) -> Preconvergence {
    let hulls = l.hulls();
    Preconvergence::from_fn(l.carrier.clone(), |a| {
        hulls
            .iter()
            .enumerate()
            .filter(|(_, h)| a.is_subset(**h))
            .map(|(x, _)| x)
            .collect()
    })
}

/// The greatest limit convergence coarser than or equal to a convergence:
/// a filter converges to `x` when finitely many filters converging to `x`
/// have an intersection contained in it.
pub fn limit_modification(l: &Preconvergence) -> Result<Preconvergence> {
    for axiom in [Axiom::Centered, Axiom::Isotone] {
        let check = check_axiom(l, axiom);
        if !check.holds {
            return Err(Error::NotAConvergence(format!("{} fails", axiom.name())));
        }
    }
    let modified = mixing_closure(l);
    if !is_finer_or_equal(l, &modified) || !classify(&modified).is_limit() {
        return Err(Error::Falsification(
            "limit modification is not a coarser limit convergence".into(),
        ));
    }
    Ok(modified)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(l: &Preconvergence, text: &str) -> PointSet {
        l.carrier().parse_set(text).unwrap()
    }

    #[test]
    fn table_size_is_checked() {
        let c = Arc::new(Carrier::alphabetic(2).unwrap());
        assert_eq!(
            Preconvergence::new(c.clone(), vec![PointSet::EMPTY; 2]).unwrap_err(),
            Error::TableSize {
                expected: 3,
                found: 2
            }
        );
        assert!(Preconvergence::new(c, vec![PointSet::EMPTY; 3]).is_ok());
    }

    #[test]
    fn compare_examples() {
        let (d2, c2, s2) = (fixtures::d2(), fixtures::c2(), fixtures::s2());
        assert_eq!(compare(&d2, &c2).unwrap(), Comparison::Finer);
        assert_eq!(compare(&c2, &d2).unwrap(), Comparison::Coarser);
        assert_eq!(compare(&s2, &s2).unwrap(), Comparison::Equal);
        assert_eq!(compare(&d2, &s2).unwrap(), Comparison::Finer);
        assert_eq!(compare(&d2, &fixtures::p3()), Err(Error::CarrierMismatch));
    }

    #[test]
    fn lattice_examples() {
        let (d2, c2, s2) = (fixtures::d2(), fixtures::c2(), fixtures::s2());
        let c = s2.carrier().clone();
        assert_eq!(sup(std::slice::from_ref(&s2), &c).unwrap(), s2);
        assert_eq!(sup(&[], &c).unwrap(), Preconvergence::chaotic(c.clone()));
        assert_eq!(inf(&[], &c).unwrap(), Preconvergence::empty(c.clone()));
        assert_eq!(inf(&[d2.clone(), c2.clone()], &c).unwrap(), c2);
        assert_eq!(sup(&[d2.clone(), c2], &c).unwrap(), d2);
        assert_eq!(sup(&[fixtures::p3()], &c), Err(Error::CarrierMismatch));
    }

    #[test]
    fn inherence_examples() {
        let s2 = fixtures::s2();
        assert_eq!(inherence(&s2, set(&s2, "a")), set(&s2, "a"));
        let p3 = fixtures::p3();
        assert_eq!(inherence(&p3, set(&p3, "c")), set(&p3, "c"));
        for l in [fixtures::d2(), fixtures::c2(), s2, p3] {
            assert_eq!(inherence(&l, l.full()), l.full());
        }
    }

    #[test]
    fn adherence_examples() {
        let s2 = fixtures::s2();
        assert_eq!(adherence(&s2, set(&s2, "a")), s2.full());
        assert_eq!(adherence(&s2, PointSet::EMPTY), PointSet::EMPTY);
        for l in [fixtures::d2(), fixtures::c2(), fixtures::p3()] {
            assert_eq!(adherence(&l, l.full()), l.full());
        }
    }

    #[test]
    fn classify_set_examples() {
        let p3 = fixtures::p3();
        assert_eq!(
            classify_set(&p3, set(&p3, "c")).unwrap(),
            SetClass {
                open: true,
                closed: false
            }
        );
        assert_eq!(
            classify_set(&p3, set(&p3, "a")).unwrap(),
            SetClass {
                open: false,
                closed: true
            }
        );
        assert_eq!(
            classify_set(&p3, PointSet::EMPTY).unwrap(),
            SetClass {
                open: true,
                closed: true
            }
        );
    }

    #[test]
    fn limit_modification_examples() {
        let s2 = fixtures::s2();
        assert_eq!(limit_modification(&s2).unwrap(), s2);

        let w3 = fixtures::w3();
        let ab = set(&w3, "a b");
        assert!(!w3.converges(ab, 2));
        let m = limit_modification(&w3).unwrap();
        assert!(m.converges(ab, 2));

        let c3 = Preconvergence::chaotic(w3.carrier().clone());
        assert_eq!(limit_modification(&c3).unwrap(), c3);

        let empty = Preconvergence::empty(w3.carrier().clone());
        assert!(matches!(
            limit_modification(&empty),
            Err(Error::NotAConvergence(_))
        ));
    }

    #[test]
    fn limit_modification_is_idempotent_on_w3() {
        let m = limit_modification(&fixtures::w3()).unwrap();
        assert_eq!(limit_modification(&m).unwrap(), m);
    }
}
