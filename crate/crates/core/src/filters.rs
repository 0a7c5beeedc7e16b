//! Carriers, bit-indexed point sets and proper filters on finite sets.
//!
//! Every proper filter on a finite carrier is principal: it is the upset of
//! the intersection of its members. A [`PrincipalFilter`] therefore stores
//! only its base; members are enumerated on demand.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest carrier the bitset representation supports. Limit tables have
/// `2^n - 1` entries, so this also bounds memory.
pub const MAX_POINTS: usize = 20;

/// A labeled finite point set. Point `i` is the `i`-th label.
#[derive(Debug, Clone)]
pub struct Carrier {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Carrier {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() > MAX_POINTS {
            return Err(Error::CarrierTooLarge(labels.len()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(Error::InvalidLabel(label.clone()));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Carrier { labels, index })
    }

    /// Carrier labeled `a`, `b`, `c`, ...
    pub fn alphabetic(n: usize) -> Result<Self> {
        if n > MAX_POINTS {
            return Err(Error::CarrierTooLarge(n));
        }
        Carrier::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, point: usize) -> &str {
        &self.labels[point]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn full(&self) -> PointSet {
        PointSet::full(self.len())
    }

    /// Parses a whitespace-separated list of labels (order irrelevant).
    pub fn parse_set(&self, text: &str) -> Result<PointSet> {
        let mut set = PointSet::EMPTY;
        for label in text.split_whitespace() {
            let i = self
                .index_of(label)
                .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            set = set.with(i);
        }
        Ok(set)
    }

    /// Labels of `set` in point order, joined by single spaces.
    pub fn set_key(&self, set: PointSet) -> String {
        set.iter()
            .map(|i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// `{a, b}` style rendering.
    pub fn format_set(&self, set: PointSet) -> String {
        let inner = set
            .iter()
            .map(|i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join(", ");
        format!("{{{inner}}}")
    }

    pub fn check_set(&self, set: PointSet) -> Result<()> {
        if set.is_subset(self.full()) {
            Ok(())
        } else {
            Err(Error::SetOutOfRange {
                set: set.bits(),
                size: self.len(),
            })
        }
    }
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Carrier {}

impl std::hash::Hash for Carrier {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.labels.hash(state);
    }
}

/// Carrier equality with a pointer fast path.
pub(crate) fn same_carrier(a: &Arc<Carrier>, b: &Arc<Carrier>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A subset of a carrier, bit `i` standing for point `i`.
///
/// The value does not remember its carrier; callers validate against one
/// with [`Carrier::check_set`].
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(u32);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        PointSet(bits)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_POINTS);
        PointSet(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(point: usize) -> Self {
        PointSet(1 << point)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> Self {
        points.into_iter().fold(PointSet::EMPTY, PointSet::with)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, point: usize) -> bool {
        self.0 >> point & 1 == 1
    }

    #[must_use]
    pub fn with(self, point: usize) -> Self {
        PointSet(self.0 | 1 << point)
    }

    #[must_use]
    pub fn without(self, point: usize) -> Self {
        PointSet(self.0 & !(1 << point))
    }

    #[must_use]
    pub fn union(self, other: Self) -> Self {
        PointSet(self.0 | other.0)
    }

    #[must_use]
    pub fn intersection(self, other: Self) -> Self {
        PointSet(self.0 & other.0)
    }

    #[must_use]
    pub fn difference(self, other: Self) -> Self {
        PointSet(self.0 & !other.0)
    }

    #[must_use]
    pub fn complement(self, n: usize) -> Self {
        PointSet::full(n).difference(self)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn meets(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    /// Least point, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Points in increasing order.
    pub fn iter(self) -> Points {
        Points(self.0)
    }

    /// All subsets of `self`, starting with the empty set, in increasing
    /// bit order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            set: self.0,
            next: Some(0),
        }
    }

    /// All nonempty subsets of `self`.
    pub fn nonempty_subsets(self) -> impl Iterator<Item = PointSet> {
        self.subsets().skip(1)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl IntoIterator for PointSet {
    type Item = usize;
    type IntoIter = Points;

    fn into_iter(self) -> Points {
        self.iter()
    }
}

impl FromIterator<usize> for PointSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        PointSet::from_points(iter)
    }
}

pub struct Points(u32);

impl Iterator for Points {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i as usize)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

/// Carry-rippler enumeration of the subsets of a bitset.
pub struct Subsets {
    set: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = PointSet;

    fn next(&mut self) -> Option<PointSet> {
        let current = self.next?;
        let following = current.wrapping_sub(self.set) & self.set;
        self.next = (following != 0).then_some(following);
        Some(PointSet(current))
    }
}

/// Every nonempty subset of an `n`-point carrier in increasing bit order.
/// These index limit tables.
pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = PointSet> + Clone {
    (1..1u32 << n).map(PointSet)
}

/// A total function between carriers of the given sizes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mapping {
    graph: Vec<usize>,
    target_size: usize,
}

impl Mapping {
    pub fn new(graph: Vec<usize>, target_size: usize) -> Result<Self> {
        if let Some(&bad) = graph.iter().find(|&&y| y >= target_size) {
            return Err(Error::InvalidMap(format!(
                "value {bad} outside a target of {target_size} points"
            )));
        }
        Ok(Mapping { graph, target_size })
    }

    pub fn identity(n: usize) -> Self {
        Mapping {
            graph: (0..n).collect(),
            target_size: n,
        }
    }

    pub fn constant(source_size: usize, value: usize, target_size: usize) -> Result<Self> {
        Mapping::new(vec![value; source_size], target_size)
    }

    pub fn source_size(&self) -> usize {
        self.graph.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn graph(&self) -> &[usize] {
        &self.graph
    }

    pub fn apply(&self, point: usize) -> usize {
        self.graph[point]
    }

    pub fn image(&self, set: PointSet) -> PointSet {
        set.iter().map(|x| self.graph[x]).collect()
    }

    pub fn preimage(&self, set: PointSet) -> PointSet {
        self.graph
            .iter()
            .enumerate()
            .filter(|&(_, &y)| set.contains(y))
            .map(|(x, _)| x)
            .collect()
    }

    pub fn is_onto(&self) -> bool {
        self.image(PointSet::full(self.source_size())) == PointSet::full(self.target_size)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Mapping) -> Result<Mapping> {
        if self.target_size != other.source_size() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose a map into {} points with a map from {} points",
                self.target_size,
                other.source_size()
            )));
        }
        Ok(Mapping {
            graph: self.graph.iter().map(|&y| other.graph[y]).collect(),
            target_size: other.target_size,
        })
    }
}

/// A proper filter `↑base` on a finite carrier.
#[derive(Clone, PartialEq, Eq)]
pub struct PrincipalFilter {
    carrier: Arc<Carrier>,
    base: PointSet,
}

impl fmt::Debug for PrincipalFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "↑{}", self.carrier.format_set(self.base))
    }
}

/// Builds `↑base`. The empty base would give the improper filter.
pub fn make_filter(carrier: &Arc<Carrier>, base: PointSet) -> Result<PrincipalFilter> {
    PrincipalFilter::new(carrier.clone(), base)
}

impl PrincipalFilter {
    pub fn new(carrier: Arc<Carrier>, base: PointSet) -> Result<Self> {
        carrier.check_set(base)?;
        if base.is_empty() {
            return Err(Error::EmptyBase);
        }
        Ok(PrincipalFilter { carrier, base })
    }

    /// The principal ultrafilter `u_x`.
    pub fn ultra(carrier: Arc<Carrier>, point: usize) -> Result<Self> {
        PrincipalFilter::new(carrier, PointSet::singleton(point))
    }

    pub fn base(&self) -> PointSet {
        self.base
    }

    pub fn carrier(&self) -> &Arc<Carrier> {
        &self.carrier
    }

    pub fn contains(&self, set: PointSet) -> bool {
        self.base.is_subset(set)
    }

    /// Members in increasing bit order.
    pub fn members(&self) -> impl Iterator<Item = PointSet> + '_ {
        let base = self.base;
        self.carrier
            .full()
            .difference(base)
            .subsets()
            .map(move |extra| extra.union(base))
    }

    /// `self` is finer than `other`: every member of `other` is a member of
    /// `self`.
    pub fn finer(&self, other: &PrincipalFilter) -> Result<bool> {
        self.same_carrier(other)?;
        Ok(self.base.is_subset(other.base))
    }

    pub fn intersect(&self, other: &PrincipalFilter) -> Result<PrincipalFilter> {
        self.same_carrier(other)?;
        Ok(PrincipalFilter {
            carrier: self.carrier.clone(),
            base: self.base.union(other.base),
        })
    }

    /// `self # set`: every member meets `set`.
    pub fn meshes(&self, set: PointSet) -> bool {
        self.base.meets(set)
    }

    pub fn is_ultrafilter(&self) -> bool {
        self.base.len() == 1
    }

    fn same_carrier(&self, other: &PrincipalFilter) -> Result<()> {
        if same_carrier(&self.carrier, &other.carrier) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch)
        }
    }
}

pub fn finer(f: &PrincipalFilter, g: &PrincipalFilter) -> Result<bool> {
    f.finer(g)
}

pub fn intersect_filters(f: &PrincipalFilter, g: &PrincipalFilter) -> Result<PrincipalFilter> {
    f.intersect(g)
}

pub fn mesh(f: &PrincipalFilter, set: PointSet) -> bool {
    f.meshes(set)
}

pub fn is_ultrafilter(f: &PrincipalFilter) -> bool {
    f.is_ultrafilter()
}

/// `f(F)`, the filter generated by the images of the members of `F`.
pub fn image_filter(
    map: &Mapping,
    filter: &PrincipalFilter,
    target: &Arc<Carrier>,
) -> Result<PrincipalFilter> {
    check_map_shape(map, filter.carrier(), target)?;
    PrincipalFilter::new(target.clone(), map.image(filter.base))
}

/// `f⁻¹(G)`, defined when every member of `G` has a nonempty preimage.
pub fn preimage_filter(
    map: &Mapping,
    filter: &PrincipalFilter,
    source: &Arc<Carrier>,
) -> Result<PrincipalFilter> {
    check_map_shape(map, source, filter.carrier())?;
    let base = map.preimage(filter.base);
    if base.is_empty() {
        return Err(Error::EmptyPreimage);
    }
    PrincipalFilter::new(source.clone(), base)
}

fn check_map_shape(map: &Mapping, source: &Carrier, target: &Carrier) -> Result<()> {
    if map.source_size() != source.len() || map.target_size() != target.len() {
        return Err(Error::ShapeMismatch(format!(
            "map {}→{} used between carriers of {} and {} points",
            map.source_size(),
            map.target_size(),
            source.len(),
            target.len()
        )));
    }
    Ok(())
}

/// Extends a family with the finite intersection property to an
/// ultrafilter containing it. The least point of the intersection is chosen.
pub fn fip_extend(carrier: &Arc<Carrier>, family: &[PointSet]) -> Result<PrincipalFilter> {
    let mut common = carrier.full();
    for &set in family {
        carrier.check_set(set)?;
        common = common.intersection(set);
    }
    let point = common.first().ok_or(Error::NoFip)?;
    PrincipalFilter::ultra(carrier.clone(), point)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn carrier(n: usize) -> Arc<Carrier> {
        Arc::new(Carrier::alphabetic(n).unwrap())
    }

    fn set(c: &Carrier, text: &str) -> PointSet {
        c.parse_set(text).unwrap()
    }

    #[test]
    fn make_filter_members() {
        let c = carrier(2);
        let f = make_filter(&c, set(&c, "a")).unwrap();
        let members: Vec<_> = f.members().collect();
        assert_eq!(members, vec![set(&c, "a"), set(&c, "a b")]);

        let g = make_filter(&c, set(&c, "a b")).unwrap();
        assert_eq!(g.members().collect::<Vec<_>>(), vec![set(&c, "a b")]);

        assert_eq!(make_filter(&c, PointSet::EMPTY), Err(Error::EmptyBase));
    }

    #[test]
    fn finer_examples() {
        let c = carrier(2);
        let a = make_filter(&c, set(&c, "a")).unwrap();
        let b = make_filter(&c, set(&c, "b")).unwrap();
        let ab = make_filter(&c, set(&c, "a b")).unwrap();
        assert!(finer(&a, &ab).unwrap());
        assert!(finer(&a, &a).unwrap());
        assert!(!finer(&a, &b).unwrap());
        let other = make_filter(&carrier(3), PointSet::singleton(0)).unwrap();
        assert_eq!(finer(&a, &other), Err(Error::CarrierMismatch));
    }

    #[test]
    fn image_filter_examples() {
        let c = carrier(2);
        let ab = make_filter(&c, set(&c, "a b")).unwrap();
        let a = make_filter(&c, set(&c, "a")).unwrap();
        assert_eq!(image_filter(&Mapping::identity(2), &ab, &c).unwrap(), ab);

        let constant = Mapping::constant(2, 0, 2).unwrap();
        assert_eq!(image_filter(&constant, &ab, &c).unwrap(), a);

        // f(a) = b, f(b) = b: members of the image filter, enumerated, are
        // {b} and {a, b}, which is exactly ↑{b}.
        let f = Mapping::new(vec![1, 1], 2).unwrap();
        let img = image_filter(&f, &a, &c).unwrap();
        let members: Vec<_> = img.members().collect();
        assert_eq!(members, vec![set(&c, "b"), set(&c, "a b")]);
    }

    #[test]
    fn preimage_filter_examples() {
        let c = carrier(2);
        let a = make_filter(&c, set(&c, "a")).unwrap();
        let b = make_filter(&c, set(&c, "b")).unwrap();
        assert_eq!(preimage_filter(&Mapping::identity(2), &b, &c).unwrap(), b);

        let constant = Mapping::constant(2, 0, 2).unwrap();
        let pre = preimage_filter(&constant, &a, &c).unwrap();
        assert_eq!(pre.members().collect::<Vec<_>>(), vec![c.full()]);
        assert_eq!(preimage_filter(&constant, &b, &c), Err(Error::EmptyPreimage));
    }

    #[test]
    fn ultrafilter_examples() {
        let c = carrier(2);
        assert!(make_filter(&c, set(&c, "a")).unwrap().is_ultrafilter());
        assert!(!make_filter(&c, set(&c, "a b")).unwrap().is_ultrafilter());
        let one = carrier(1);
        assert!(make_filter(&one, PointSet::singleton(0)).unwrap().is_ultrafilter());
    }

    #[test]
    fn intersect_and_mesh_examples() {
        let c = carrier(2);
        let a = make_filter(&c, set(&c, "a")).unwrap();
        let b = make_filter(&c, set(&c, "b")).unwrap();
        let ab = make_filter(&c, set(&c, "a b")).unwrap();
        assert_eq!(intersect_filters(&a, &b).unwrap(), ab);
        assert_eq!(intersect_filters(&a, &a).unwrap(), a);
        assert_eq!(intersect_filters(&a, &ab).unwrap(), ab);

        assert!(mesh(&a, set(&c, "a b")));
        assert!(!mesh(&a, set(&c, "b")));
        assert!(mesh(&b, c.full()));
    }

    #[test]
    fn fip_extend_examples() {
        let c = carrier(3);
        let u = fip_extend(&c, &[set(&c, "a b"), set(&c, "b c")]).unwrap();
        assert_eq!(u.base(), set(&c, "b"));
        for member in [set(&c, "a b"), set(&c, "b c")] {
            assert!(u.contains(member));
        }
        assert_eq!(fip_extend(&c, &[c.full()]).unwrap().base(), set(&c, "a"));
        assert_eq!(fip_extend(&c, &[set(&c, "a"), set(&c, "b")]), Err(Error::NoFip));
    }

    #[test]
    fn empty_carrier_has_no_filters() {
        let c = carrier(0);
        assert_eq!(nonempty_subsets(0).count(), 0);
        assert_eq!(make_filter(&c, PointSet::EMPTY), Err(Error::EmptyBase));
    }

    #[test]
    fn subsets_enumerates_powerset() {
        let s = PointSet::from_bits(0b1011);
        let all: Vec<u32> = s.subsets().map(PointSet::bits).collect();
        assert_eq!(all, vec![0, 1, 2, 3, 8, 9, 10, 11]);
        assert_eq!(PointSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn carrier_rejects_duplicates() {
        assert_eq!(
            Carrier::new(["a", "a"]).unwrap_err(),
            Error::DuplicateLabel("a".into())
        );
    }

    #[test]
    fn finer_is_base_inclusion_exhaustive() {
        for n in 0..=4 {
            let c = carrier(n);
            for a in nonempty_subsets(n) {
                for b in nonempty_subsets(n) {
                    let fa = make_filter(&c, a).unwrap();
                    let fb = make_filter(&c, b).unwrap();
                    assert_eq!(finer(&fa, &fb).unwrap(), a.is_subset(b));
                }
            }
        }
    }

    /// Trichotomy: for every A, exactly one of A and X∖A belongs to F.
    fn trichotomy(f: &PrincipalFilter) -> bool {
        let n = f.carrier().len();
        PointSet::full(n)
            .subsets()
            .all(|a| f.contains(a) != f.contains(a.complement(n)))
    }

    #[test]
    fn ultrafilter_matches_trichotomy_exhaustive() {
        for n in 1..=4 {
            let c = carrier(n);
            for base in nonempty_subsets(n) {
                let f = make_filter(&c, base).unwrap();
                assert_eq!(f.is_ultrafilter(), trichotomy(&f), "base {base:?}");
            }
        }
    }

    #[test]
    fn mesh_matches_member_enumeration() {
        for n in 1..=4 {
            let c = carrier(n);
            for base in nonempty_subsets(n) {
                let f = make_filter(&c, base).unwrap();
                for s in PointSet::full(n).subsets() {
                    let oracle = f.members().all(|m| m.meets(s));
                    assert_eq!(f.meshes(s), oracle);
                }
            }
        }
    }

    #[test]
    fn image_monotone_and_preimage_of_image_coarser() {
        // all maps 3 → 2
        let src = carrier(3);
        let dst = carrier(2);
        for code in 0..8usize {
            let graph = (0..3).map(|i| code >> i & 1).collect();
            let map = Mapping::new(graph, 2).unwrap();
            for a in nonempty_subsets(3) {
                let fa = make_filter(&src, a).unwrap();
                let img = image_filter(&map, &fa, &dst).unwrap();
                for b in nonempty_subsets(3) {
                    let fb = make_filter(&src, b).unwrap();
                    if fa.finer(&fb).unwrap() {
                        let imgb = image_filter(&map, &fb, &dst).unwrap();
                        assert!(img.finer(&imgb).unwrap());
                    }
                }
                let back = preimage_filter(&map, &img, &src).unwrap();
                assert!(fa.finer(&back).unwrap());
            }
        }
    }
}
