//! Finite directed sets, nets and the net ↔ filter bridge.
//!
//! A finite directed preorder always has a top cluster (the elements above
//! everything), so the induced filter of a net is generated by the values it
//! takes there. The [`oracle`] submodule quantifies over explicit nets to
//! cross-check the filter-level axiom reductions in [`crate::spaces`].

pub mod oracle;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::filters::{Carrier, PointSet, PrincipalFilter};

/// A preorder on `0..size` in which every pair has an upper bound.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedSet {
    size: usize,
    le: Vec<bool>,
}

/// Reflexive, transitive and upward directed.
pub fn check_directed(table: &[Vec<bool>]) -> bool {
    let m = table.len();
    if table.iter().any(|row| row.len() != m) {
        return false;
    }
    let reflexive = (0..m).all(|i| table[i][i]);
    let transitive = (0..m).all(|i| {
        (0..m).all(|j| !table[i][j] || (0..m).all(|k| !table[j][k] || table[i][k]))
    });
    let directed =
        (0..m).all(|a| (0..m).all(|b| (0..m).any(|c| table[a][c] && table[b][c])));
    reflexive && transitive && directed
}

impl DirectedSet {
    pub fn new(table: &[Vec<bool>]) -> Result<Self> {
        if !check_directed(table) {
            return Err(Error::NotDirected);
        }
        Ok(DirectedSet {
            size: table.len(),
            le: table.iter().flatten().copied().collect(),
        })
    }

    /// `0 ≤ 1 ≤ … ≤ m−1`.
    pub fn chain(m: usize) -> Self {
        let table: Vec<Vec<bool>> = (0..m).map(|i| (0..m).map(|j| i <= j).collect()).collect();
        DirectedSet::new(&table).expect("chains are directed")
    }

    /// Every element below every other: a single cluster.
    pub fn cluster(m: usize) -> Self {
        DirectedSet {
            size: m,
            le: vec![true; m * m],
        }
    }

    /// Componentwise order on `self × other`; pair `(i, j)` has index
    /// `i * other.len() + j`.
    pub fn product(&self, other: &DirectedSet) -> DirectedSet {
        let (m, k) = (self.size, other.size);
        let mut le = Vec::with_capacity(m * k * m * k);
        for i in 0..m {
            for j in 0..k {
                for i2 in 0..m {
                    for j2 in 0..k {
                        le.push(self.le(i, i2) && other.le(j, j2));
                    }
                }
            }
        }
        DirectedSet { size: m * k, le }
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.size + b]
    }

    /// `{e : d ≤ e}`.
    pub fn tail(&self, d: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&e| self.le(d, e))
    }

    /// Relabels the elements through `perm` (element `i` becomes `perm[i]`).
    pub fn permuted(&self, perm: &[usize]) -> DirectedSet {
        let m = self.size;
        let mut le = vec![false; m * m];
        for a in 0..m {
            for b in 0..m {
                le[perm[a] * m + perm[b]] = self.le(a, b);
            }
        }
        DirectedSet { size: m, le }
    }

    fn table(&self) -> Vec<Vec<bool>> {
        (0..self.size)
            .map(|a| (0..self.size).map(|b| self.le(a, b)).collect())
            .collect()
    }
}

/// Directed preorders on `1..=max_size` elements, one per isomorphism class.
pub fn directed_sets_up_to(max_size: usize) -> Vec<DirectedSet> {
    let mut out = Vec::new();
    for m in 1..=max_size {
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| (a, b)))
            .collect();
        let perms = permutations(m);
        let mut seen = std::collections::HashSet::new();
        for code in 0u32..1 << pairs.len() {
            let mut table = vec![vec![false; m]; m];
            for (i, row) in table.iter_mut().enumerate() {
                row[i] = true;
            }
            for (bit, &(a, b)) in pairs.iter().enumerate() {
                table[a][b] = code >> bit & 1 == 1;
            }
            let Ok(set) = DirectedSet::new(&table) else {
                continue;
            };
            let canonical = perms
                .iter()
                .map(|p| set.permuted(p).le)
                .min()
                .expect("at least one permutation");
            if seen.insert(canonical) {
                out.push(set);
            }
        }
    }
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..m {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

/// A function from a directed set into a carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    domain: Arc<DirectedSet>,
    carrier: Arc<Carrier>,
    values: Vec<usize>,
}

impl Net {
    pub fn new(domain: Arc<DirectedSet>, carrier: Arc<Carrier>, values: Vec<usize>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::InvalidMap(format!(
                "net has {} values over a domain of {} elements",
                values.len(),
                domain.len()
            )));
        }
        if values.iter().any(|&v| v >= carrier.len()) {
            return Err(Error::InvalidMap("net value outside the carrier".into()));
        }
        Ok(Net {
            domain,
            carrier,
            values,
        })
    }

    pub fn constant(domain: Arc<DirectedSet>, carrier: Arc<Carrier>, value: usize) -> Result<Self> {
        let m = domain.len();
        Net::new(domain, carrier, vec![value; m])
    }

    pub fn domain(&self) -> &Arc<DirectedSet> {
        &self.domain
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn tail_set(&self, d: usize) -> PointSet {
        self.domain.tail(d).map(|e| self.values[e]).collect()
    }

    /// The same net viewed over `self.domain × other`, constant along the
    /// second coordinate. Induced filters are unchanged.
    pub fn lift_left(&self, other: &Arc<DirectedSet>) -> Net {
        let k = other.len();
        Net {
            domain: Arc::new(self.domain.product(other)),
            carrier: self.carrier.clone(),
            values: (0..self.domain.len() * k).map(|p| self.values[p / k]).collect(),
        }
    }

    /// The same net viewed over `other × self.domain`.
    pub fn lift_right(&self, other: &Arc<DirectedSet>) -> Net {
        let k = self.domain.len();
        Net {
            domain: Arc::new(other.product(&self.domain)),
            carrier: self.carrier.clone(),
            values: (0..other.len() * k).map(|p| self.values[p % k]).collect(),
        }
    }
}

/// Lifts two nets to the product of their domains so they can be mixed.
pub fn lift_to_common_domain(phi: &Net, psi: &Net) -> (Net, Net) {
    (phi.lift_left(psi.domain()), psi.lift_right(phi.domain()))
}

/// `φ↑`, generated by the tail sets of `φ`.
pub fn induced_filter(net: &Net) -> Result<PrincipalFilter> {
    if net.domain.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let tails: Vec<PointSet> = (0..net.domain.len()).map(|d| net.tail_set(d)).collect();
    let least = tails
        .iter()
        .fold(net.carrier.full(), |acc, &t| acc.intersection(t));
    debug_assert!(tails.contains(&least), "a directed domain has a least tail");
    PrincipalFilter::new(net.carrier.clone(), least)
}

/// `ψ` is a subnet of `φ` when `φ↑ ⊆ ψ↑`.
pub fn is_subnet(psi: &Net, phi: &Net) -> Result<bool> {
    induced_filter(psi)?.finer(&induced_filter(phi)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// The mixing `ρ_d ∈ {φ_d, ψ_d}` picked by `selector`.
pub fn mix(phi: &Net, psi: &Net, selector: &[Side]) -> Result<Net> {
    if phi.domain != psi.domain {
        return Err(Error::DomainMismatch);
    }
    if !crate::filters::same_carrier(&phi.carrier, &psi.carrier) {
        return Err(Error::CarrierMismatch);
    }
    if selector.len() != phi.domain.len() {
        return Err(Error::DomainMismatch);
    }
    let values = selector
        .iter()
        .zip(phi.values.iter().zip(&psi.values))
        .map(|(side, (&l, &r))| match side {
            Side::Left => l,
            Side::Right => r,
        })
        .collect();
    Ok(Net {
        domain: phi.domain.clone(),
        carrier: phi.carrier.clone(),
        values,
    })
}

/// The net `Γ` over `{⟨x, M⟩ : x ∈ M ∈ F}` ordered by reverse inclusion of
/// the second coordinate, `Γ⟨x, M⟩ = x`. Its induced filter is `F`.
pub fn canonical_net(filter: &PrincipalFilter) -> Net {
    let pairs: Vec<(usize, PointSet)> = filter
        .members()
        .flat_map(|m| m.iter().map(move |x| (x, m)))
        .collect();
    let table: Vec<Vec<bool>> = pairs
        .iter()
        .map(|&(_, m)| pairs.iter().map(|&(_, n)| n.is_subset(m)).collect())
        .collect();
    let domain = DirectedSet {
        size: pairs.len(),
        le: table.iter().flatten().copied().collect(),
    };
    debug_assert!(check_directed(&domain.table()));
    Net {
        domain: Arc::new(domain),
        carrier: filter.carrier().clone(),
        values: pairs.iter().map(|&(x, _)| x).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filters::{intersect_filters, make_filter, nonempty_subsets};

    fn carrier(n: usize) -> Arc<Carrier> {
        Arc::new(Carrier::alphabetic(n).unwrap())
    }

    /// `{0,1} < {2,3}` with each pair a cluster; the top cluster is `{2,3}`.
    fn two_level_cluster() -> Arc<DirectedSet> {
        let table: Vec<Vec<bool>> = (0..4)
            .map(|i| (0..4).map(|j| i / 2 <= j / 2).collect())
            .collect();
        Arc::new(DirectedSet::new(&table).unwrap())
    }

    #[test]
    fn check_directed_examples() {
        assert!(check_directed(&DirectedSet::chain(3).table()));
        let antichain = vec![vec![true, false], vec![false, true]];
        assert!(!check_directed(&antichain));
        let square = DirectedSet::chain(2).product(&DirectedSet::chain(2));
        assert!(check_directed(&square.table()));
        let not_transitive = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        assert!(!check_directed(&not_transitive));
    }

    #[test]
    fn induced_filter_examples() {
        let c = carrier(2);
        let chain3 = Arc::new(DirectedSet::chain(3));
        let constant = Net::constant(chain3.clone(), c.clone(), 0).unwrap();
        assert_eq!(induced_filter(&constant).unwrap().base(), PointSet::singleton(0));

        // values b, a, a: tails {b,a}, {a}, {a}
        let bab = Net::new(chain3, c.clone(), vec![1, 0, 0]).unwrap();
        assert_eq!(induced_filter(&bab).unwrap().base(), PointSet::singleton(0));

        // On a strict 4-chain the last tail is a singleton.
        let chain4 = Arc::new(DirectedSet::chain(4));
        let alt = Net::new(chain4, c.clone(), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(induced_filter(&alt).unwrap().base(), PointSet::singleton(1));

        // Alternating over a top cluster keeps both values in every tail.
        let alt = Net::new(two_level_cluster(), c.clone(), vec![0, 1, 0, 1]).unwrap();
        assert_eq!(induced_filter(&alt).unwrap().base(), c.full());

        let empty = Net::new(Arc::new(DirectedSet::cluster(0)), c, vec![]).unwrap();
        assert_eq!(induced_filter(&empty), Err(Error::EmptyDomain));
    }

    #[test]
    fn subnet_examples() {
        let c = carrier(2);
        let d = two_level_cluster();
        let const_a = Net::constant(d.clone(), c.clone(), 0).unwrap();
        let alt = Net::new(d, c, vec![0, 1, 0, 1]).unwrap();
        assert!(is_subnet(&alt, &alt).unwrap());
        assert!(is_subnet(&const_a, &alt).unwrap());
        assert!(!is_subnet(&alt, &const_a).unwrap());
    }

    #[test]
    fn mix_examples() {
        let c = carrier(2);
        let d = two_level_cluster();
        let const_a = Net::constant(d.clone(), c.clone(), 0).unwrap();
        let const_b = Net::constant(d.clone(), c.clone(), 1).unwrap();
        let left = vec![Side::Left; 4];
        assert_eq!(mix(&const_a, &const_b, &left).unwrap(), const_a);

        use Side::*;
        let rho = mix(&const_a, &const_b, &[Left, Right, Left, Right]).unwrap();
        assert_eq!(induced_filter(&rho).unwrap().base(), c.full());

        let other = Net::constant(Arc::new(DirectedSet::chain(4)), c, 0).unwrap();
        assert_eq!(mix(&const_a, &other, &left), Err(Error::DomainMismatch));
    }

    #[test]
    fn mixing_refines_intersection_on_chains() {
        let c = carrier(3);
        for m in 1..=4 {
            let d = Arc::new(DirectedSet::chain(m));
            let nets: Vec<Net> = (0..3usize.pow(m as u32))
                .map(|code| {
                    let vals = (0..m).map(|i| code / 3usize.pow(i as u32) % 3).collect();
                    Net::new(d.clone(), c.clone(), vals).unwrap()
                })
                .collect();
            for phi in &nets {
                for psi in &nets {
                    let meet = intersect_filters(
                        &induced_filter(phi).unwrap(),
                        &induced_filter(psi).unwrap(),
                    )
                    .unwrap();
                    for sel in 0..1u32 << m {
                        let selector: Vec<Side> = (0..m)
                            .map(|i| if sel >> i & 1 == 1 { Side::Right } else { Side::Left })
                            .collect();
                        let rho = mix(phi, psi, &selector).unwrap();
                        assert!(induced_filter(&rho).unwrap().finer(&meet).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_net_examples() {
        let c = carrier(2);
        let u_a = make_filter(&c, PointSet::singleton(0)).unwrap();
        let g = canonical_net(&u_a);
        assert_eq!(g.domain().len(), 3);
        assert_eq!(induced_filter(&g).unwrap(), u_a);

        let c3 = carrier(3);
        let ab = make_filter(&c3, c3.parse_set("a b").unwrap()).unwrap();
        let g = canonical_net(&ab);
        assert_eq!(g.domain().len(), 5);
        assert_eq!(induced_filter(&g).unwrap(), ab);
    }

    #[test]
    fn canonical_net_round_trip_exhaustive() {
        for n in 1..=3 {
            let c = carrier(n);
            for base in nonempty_subsets(n) {
                let f = make_filter(&c, base).unwrap();
                let g = canonical_net(&f);
                assert!(check_directed(&g.domain().table()));
                assert_eq!(induced_filter(&g).unwrap(), f);
            }
        }
    }

    #[test]
    fn lifting_preserves_induced_filters() {
        let c = carrier(2);
        let phi = Net::new(Arc::new(DirectedSet::chain(3)), c.clone(), vec![1, 0, 1]).unwrap();
        let psi = Net::new(two_level_cluster(), c, vec![0, 0, 1, 0]).unwrap();
        let (lp, ls) = lift_to_common_domain(&phi, &psi);
        assert_eq!(lp.domain(), ls.domain());
        assert_eq!(induced_filter(&lp).unwrap(), induced_filter(&phi).unwrap());
        assert_eq!(induced_filter(&ls).unwrap(), induced_filter(&psi).unwrap());
    }

    #[test]
    fn induced_filter_invariant_under_isomorphism() {
        let c = carrier(3);
        let perms = permutations(4);
        for d in directed_sets_up_to(4).into_iter().filter(|d| d.len() == 4) {
            let d = Arc::new(d);
            for code in 0..81usize {
                let vals: Vec<usize> = (0..4).map(|i| code / 3usize.pow(i) % 3).collect();
                let net = Net::new(d.clone(), c.clone(), vals.clone()).unwrap();
                let base = induced_filter(&net).unwrap();
                for p in &perms {
                    let mut moved = vec![0; 4];
                    for (i, &v) in vals.iter().enumerate() {
                        moved[p[i]] = v;
                    }
                    let iso = Net::new(Arc::new(d.permuted(p)), c.clone(), moved).unwrap();
                    assert_eq!(induced_filter(&iso).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn directed_set_counts() {
        // one class of size 1; size 2: chain, cluster.
        let classes = directed_sets_up_to(2);
        assert_eq!(classes.len(), 3);
    }

    #[test]
    fn subnet_is_a_preorder() {
        let c = carrier(2);
        let domains: Vec<Arc<DirectedSet>> =
            directed_sets_up_to(3).into_iter().map(Arc::new).collect();
        let mut nets = Vec::new();
        for d in &domains {
            for code in 0..1usize << d.len() {
                let vals = (0..d.len()).map(|i| code >> i & 1).collect();
                nets.push(Net::new(d.clone(), c.clone(), vals).unwrap());
            }
        }
        for a in &nets {
            assert!(is_subnet(a, a).unwrap());
            for b in &nets {
                for z in &nets {
                    if is_subnet(a, b).unwrap() && is_subnet(b, z).unwrap() {
                        assert!(is_subnet(a, z).unwrap());
                    }
                }
            }
        }
    }
}
