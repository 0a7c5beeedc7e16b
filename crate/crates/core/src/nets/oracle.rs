//! Net-level axiom verdicts.
//!
//! Every verdict here quantifies over explicit nets with small domains and
//! reads the preconvergence only through `limits(base(φ↑))`, which is how a
//! filter-indexed table acts on nets. Nothing here calls the filter-level
//! reductions it is meant to check.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::{induced_filter, is_subnet, mix, DirectedSet, Net, Side};
use crate::filters::{Carrier, PointSet};

/// All nets into an `n`-point carrier over directed domains of at most
/// `max_domain` elements (one domain per isomorphism class), with the
/// relations between their induced filters that the axioms quantify over.
pub struct NetCorpus {
    n: usize,
    /// One representative net per induced base.
    representatives: BTreeMap<PointSet, Net>,
    /// `(ψ↑, φ↑)` such that `ψ` is a subnet of `φ`.
    subnets: BTreeSet<(PointSet, PointSet)>,
    /// `(φ↑, ψ↑, ρ↑)` for every mixing `ρ` of `φ` and `ψ`.
    mixings: BTreeSet<(PointSet, PointSet, PointSet)>,
    /// `(φ↑, x, ρ↑)` for every mixing `ρ` of `φ` with the constant net at `x`.
    constant_mixings: BTreeSet<(PointSet, usize, PointSet)>,
    /// `(x, ⟨x⟩↑)` for constant nets.
    constants: BTreeSet<(usize, PointSet)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetVerdicts {
    pub centered: bool,
    pub isotone: bool,
    pub stable: bool,
    pub kent: bool,
    pub pretopological: bool,
    pub pseudotopological: bool,
    pub topological: bool,
}

impl NetCorpus {
    pub fn new(n: usize, max_domain: usize) -> Self {
        let carrier = Arc::new(Carrier::alphabetic(n).expect("small carrier"));
        let domains: Vec<Arc<DirectedSet>> = super::directed_sets_up_to(max_domain)
            .into_iter()
            .map(Arc::new)
            .collect();

        let mut corpus = NetCorpus {
            n,
            representatives: BTreeMap::new(),
            subnets: BTreeSet::new(),
            mixings: BTreeSet::new(),
            constant_mixings: BTreeSet::new(),
            constants: BTreeSet::new(),
        };
        if n == 0 {
            return corpus;
        }

        for domain in &domains {
            let m = domain.len();
            let nets: Vec<Net> = valuations(n, m)
                .map(|values| Net::new(domain.clone(), carrier.clone(), values).expect("valid net"))
                .collect();
            let bases: Vec<PointSet> = nets
                .iter()
                .map(|net| induced_filter(net).expect("nonempty domain").base())
                .collect();
            for (net, &base) in nets.iter().zip(&bases) {
                corpus.representatives.entry(base).or_insert_with(|| net.clone());
            }
            let selectors: Vec<Vec<Side>> = (0..1u32 << m)
                .map(|code| {
                    (0..m)
                        .map(|i| if code >> i & 1 == 1 { Side::Right } else { Side::Left })
                        .collect()
                })
                .collect();
            for x in 0..n {
                let constant = Net::constant(domain.clone(), carrier.clone(), x).expect("valid");
                let cbase = induced_filter(&constant).expect("nonempty").base();
                corpus.constants.insert((x, cbase));
                for (phi, &pbase) in nets.iter().zip(&bases) {
                    for sel in &selectors {
                        let rho = mix(phi, &constant, sel).expect("shared domain");
                        let rbase = induced_filter(&rho).expect("nonempty").base();
                        corpus.constant_mixings.insert((pbase, x, rbase));
                    }
                }
            }
            for (phi, &pbase) in nets.iter().zip(&bases) {
                for (psi, &qbase) in nets.iter().zip(&bases) {
                    for sel in &selectors {
                        let rho = mix(phi, psi, sel).expect("shared domain");
                        let rbase = induced_filter(&rho).expect("nonempty").base();
                        corpus.mixings.insert((pbase, qbase, rbase));
                    }
                }
            }
        }

        let reps: Vec<(PointSet, &Net)> =
            corpus.representatives.iter().map(|(&b, net)| (b, net)).collect();
        let mut subnets = BTreeSet::new();
        for &(pb, phi) in &reps {
            for &(qb, psi) in &reps {
                if is_subnet(psi, phi).expect("same carrier") {
                    subnets.insert((qb, pb));
                }
            }
        }
        corpus.subnets = subnets;
        corpus
    }

    pub fn carrier_size(&self) -> usize {
        self.n
    }

    /// Bases induced by some net in the corpus.
    pub fn bases(&self) -> impl Iterator<Item = PointSet> + '_ {
        self.representatives.keys().copied()
    }

    pub fn mixing_count(&self) -> usize {
        self.mixings.len()
    }

    /// Evaluates every axiom on the preconvergence whose action on nets is
    /// `limits(base(φ↑))`.
    pub fn verdicts<F: Fn(PointSet) -> PointSet>(&self, limits: F) -> NetVerdicts {
        NetVerdicts {
            centered: self.centered(&limits),
            isotone: self.isotone(&limits),
            stable: self.stable(&limits),
            kent: self.kent(&limits),
            pretopological: self.pretopological(&limits),
            pseudotopological: self.pseudotopological(&limits),
            topological: self.topological(&limits),
        }
    }

    /// Every constant net converges to its value.
    fn centered(&self, limits: &impl Fn(PointSet) -> PointSet) -> bool {
        self.constants.iter().all(|&(x, b)| limits(b).contains(x))
    }

    /// Subnets of convergent nets converge to the same points.
    fn isotone(&self, limits: &impl Fn(PointSet) -> PointSet) -> bool {
        self.subnets
            .iter()
            .all(|&(sub, sup)| limits(sup).is_subset(limits(sub)))
    }

    /// Mixings of two nets converging to `x` converge to `x`.
    fn stable(&self, limits: &impl Fn(PointSet) -> PointSet) -> bool {
        self.mixings
            .iter()
            .all(|&(a, b, c)| limits(a).intersection(limits(b)).is_subset(limits(c)))
    }

    /// Mixings of a net converging to `x` with the constant net `⟨x⟩`
    /// converge to `x`.
    fn kent(&self, limits: &impl Fn(PointSet) -> PointSet) -> bool {
        self.constant_mixings
            .iter()
            .all(|&(a, x, c)| !limits(a).contains(x) || limits(c).contains(x))
    }

    /// For each point with a convergent net, some convergent net `ν` has
    /// every convergent net as a subnet.
    fn pretopological(&self, limits: &impl Fn(PointSet) -> PointSet) -> bool {
        (0..self.n).all(|x| {
            let convergent: Vec<&Net> = self
                .representatives
                .iter()
                .filter(|(&b, _)| limits(b).contains(x))
                .map(|(_, net)| net)
                .collect();
            convergent.is_empty()
                || convergent.iter().any(|nu| {
                    convergent
                        .iter()
                        .all(|phi| is_subnet(phi, nu).expect("same carrier"))
                })
        })
    }

    /// `L(φ)` is the intersection of `L(ψ)` over ultranet subnets `ψ` of `φ`.
    fn pseudotopological(&self, limits: &impl Fn(PointSet) -> PointSet) -> bool {
        let full = PointSet::full(self.n);
        self.representatives.iter().all(|(&b, phi)| {
            let through_ultranets = self
                .representatives
                .values()
                .filter(|psi| {
                    induced_filter(psi).expect("nonempty").is_ultrafilter()
                        && is_subnet(psi, phi).expect("same carrier")
                })
                .fold(full, |acc, psi| {
                    acc.intersection(limits(induced_filter(psi).expect("nonempty").base()))
                });
            limits(b) == through_ultranets
        })
    }

    /// `L` agrees on every net with convergence in the topology of sets `S`
    /// such that every net converging to a point of `S` is eventually in `S`.
    fn topological(&self, limits: &impl Fn(PointSet) -> PointSet) -> bool {
        let nets: Vec<(&PointSet, _)> = self
            .representatives
            .iter()
            .map(|(b, net)| (b, induced_filter(net).expect("nonempty")))
            .collect();
        let opens: Vec<PointSet> = PointSet::full(self.n)
            .subsets()
            .filter(|&s| {
                nets.iter()
                    .all(|(&b, filter)| !limits(b).meets(s) || filter.contains(s))
            })
            .collect();
        nets.iter().all(|(&b, filter)| {
            let topological_limits: PointSet = (0..self.n)
                .filter(|&x| opens.iter().all(|&u| !u.contains(x) || filter.contains(u)))
                .collect();
            limits(b) == topological_limits
        })
    }
}

/// All maps `0..m → 0..n` as value vectors.
fn valuations(n: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(m as u32);
    (0..total).map(move |mut code| {
        (0..m)
            .map(|_| {
                let v = code % n;
                code /= n;
                v
            })
            .collect()
    })
}
