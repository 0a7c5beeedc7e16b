use std::sync::Arc;

use super::{inherence, is_finer_or_equal, Preconvergence};
use crate::error::{Error, Result};
use crate::filters::{Carrier, PointSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    carrier: Arc<Carrier>,
    /// Sorted by bits.
    opens: Vec<PointSet>,
    neighborhoods: Vec<PointSet>,
}

impl FiniteTopology {
    pub fn new(carrier: Arc<Carrier>, opens: impl IntoIterator<Item = PointSet>) -> Result<Self> {
        let full = carrier.full();
        let mut opens: Vec<PointSet> = opens.into_iter().collect();
        for &u in &opens {
            carrier.check_set(u)?;
        }
        opens.sort();
        opens.dedup();
        let has = |s: PointSet| opens.binary_search(&s).is_ok();
        if !has(PointSet::EMPTY) || !has(full) {
            return Err(Error::InvalidTopology("must contain ∅ and the carrier".into()));
        }
        for &u in &opens {
            for &v in &opens {
                if !has(u.union(v)) || !has(u.intersection(v)) {
                    return Err(Error::InvalidTopology(format!(
                        "not closed under union and intersection: {} and {}",
                        carrier.format_set(u),
                        carrier.format_set(v)
                    )));
                }
            }
        }
        let neighborhoods = (0..carrier.len())
            .map(|x| {
                opens
                    .iter()
                    .filter(|u| u.contains(x))
                    .fold(full, |acc, &u| acc.intersection(u))
            })
            .collect();
        Ok(FiniteTopology {
            carrier,
            opens,
            neighborhoods,
        })
    }

    pub fn discrete(carrier: Arc<Carrier>) -> Self {
        let opens: Vec<PointSet> = carrier.full().subsets().collect();
        FiniteTopology::new(carrier, opens).expect("power set")
    }

    pub fn indiscrete(carrier: Arc<Carrier>) -> Self {
        let full = carrier.full();
        FiniteTopology::new(carrier, [PointSet::EMPTY, full]).expect("trivial topology")
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn is_open(&self, set: PointSet) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    pub fn is_closed(&self, set: PointSet) -> bool {
        self.is_open(set.complement(self.carrier.len()))
    }

    /// Least open set containing `point`.
    pub fn neighborhood(&self, point: usize) -> PointSet {
        self.neighborhoods[point]
    }

    pub fn interior(&self, set: PointSet) -> PointSet {
        self.opens
            .iter()
            .filter(|u| u.is_subset(set))
            .fold(PointSet::EMPTY, |acc, &u| acc.union(u))
    }

    pub fn closure(&self, set: PointSet) -> PointSet {
        let n = self.carrier.len();
        self.interior(set.complement(n)).complement(n)
    }
}

/// `↑B → x` iff `B ⊆ U_x`.
pub fn from_topology(tau: &FiniteTopology) -> Preconvergence {
    Preconvergence::from_fn(tau.carrier.clone(), |b| {
        (0..tau.carrier.len())
            .filter(|&x| b.is_subset(tau.neighborhoods[x]))
            .collect()
    })
}

/// Sets contained in their own inherence.
pub fn open_sets(l: &Preconvergence) -> FiniteTopology {
    let opens: Vec<PointSet> = l
        .full()
        .subsets()
        .filter(|&s| s.is_subset(inherence(l, s)))
        .collect();
    FiniteTopology::new(l.carrier().clone(), opens)
        .expect("open sets of a preconvergence form a topology")
}

pub fn topological_modification(l: &Preconvergence) -> Result<Preconvergence> {
    let t = from_topology(&open_sets(l));
    if !is_finer_or_equal(l, &t) {
        return Err(Error::Falsification(
            "topological modification is not coarser".into(),
        ));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::spaces::Axiom;

    #[test]
    fn sierpinski_table() {
        let c = fixtures::s2().carrier().clone();
        let a = PointSet::singleton(0);
        let tau = FiniteTopology::new(c.clone(), [PointSet::EMPTY, a, c.full()]).unwrap();
        let l = from_topology(&tau);
        assert_eq!(l.limits(a), c.full());
        assert_eq!(l.limits(PointSet::singleton(1)), PointSet::singleton(1));
        assert_eq!(l.limits(c.full()), PointSet::singleton(1));
        assert_eq!(l, fixtures::s2());
    }

    #[test]
    fn discrete_and_indiscrete() {
        let c = fixtures::d2().carrier().clone();
        assert_eq!(from_topology(&FiniteTopology::discrete(c.clone())), fixtures::d2());
        assert_eq!(
            from_topology(&FiniteTopology::indiscrete(c.clone())),
            Preconvergence::chaotic(c)
        );
    }

    #[test]
    fn invalid_topologies() {
        let c = Arc::new(Carrier::alphabetic(3).unwrap());
        let (a, b) = (PointSet::singleton(0), PointSet::singleton(1));
        assert!(FiniteTopology::new(c.clone(), [a, c.full()]).is_err());
        assert!(FiniteTopology::new(c.clone(), [PointSet::EMPTY, a, b, c.full()]).is_err());
    }

    #[test]
    fn open_sets_examples() {
        let p3 = fixtures::p3();
        let opens: Vec<String> = open_sets(&p3)
            .opens()
            .iter()
            .map(|&u| p3.carrier().format_set(u))
            .collect();
        assert_eq!(opens, ["{}", "{c}", "{b, c}", "{a, b, c}"]);

        let chaotic = Preconvergence::chaotic(p3.carrier().clone());
        assert_eq!(open_sets(&chaotic).opens().len(), 2);
        assert_eq!(open_sets(&fixtures::d2()).opens().len(), 4);
    }

    #[test]
    fn topological_modification_examples() {
        let s2 = fixtures::s2();
        assert_eq!(topological_modification(&s2).unwrap(), s2);
        let d2 = fixtures::d2();
        assert_eq!(topological_modification(&d2).unwrap(), d2);
        let p3 = fixtures::p3();
        let bc = p3.carrier().parse_set("b c").unwrap();
        let t = topological_modification(&p3).unwrap();
        assert_eq!(t.limits(bc), p3.carrier().parse_set("a b").unwrap());
        assert_eq!(p3.limits(bc), PointSet::singleton(1));
    }

    #[test]
    fn modification_of_any_two_point_table_is_coarser_and_topological() {
        for l in crate::search::all_preconvergences(2) {
            let t = topological_modification(&l).unwrap();
            assert!(crate::spaces::check_axiom(&t, Axiom::Topological).holds);
        }
    }
}
