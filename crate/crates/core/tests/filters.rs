use std::sync::Arc;

use convg::filters::{
    finer, image_filter, intersect_filters, is_ultrafilter, mesh, preimage_filter, Carrier, Mapping,
    PointSet, PrincipalFilter,
};
use convg::nets::{canonical_net, induced_filter, is_subnet, lift_to_common_domain, DirectedSet, Net};
use convg::Error;
use proptest::prelude::*;

fn carrier(n: usize) -> Arc<Carrier> {
    Arc::new(Carrier::alphabetic(n).unwrap())
}

fn filter_on(n: usize) -> impl Strategy<Value = PrincipalFilter> {
    (1u32..1 << n).prop_map(move |bits| PrincipalFilter::new(carrier(n), PointSet::from_bits(bits)).unwrap())
}

fn filter_pair() -> impl Strategy<Value = (PrincipalFilter, PrincipalFilter)> {
    (1usize..=5).prop_flat_map(|n| {
        let c = carrier(n);
        (1u32..1 << n, 1u32..1 << n).prop_map(move |(a, b)| {
            (
                PrincipalFilter::new(c.clone(), PointSet::from_bits(a)).unwrap(),
                PrincipalFilter::new(c.clone(), PointSet::from_bits(b)).unwrap(),
            )
        })
    })
}

fn map_between() -> impl Strategy<Value = (usize, usize, Mapping)> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(n, m)| {
        proptest::collection::vec(0..m, n).prop_map(move |g| (n, m, Mapping::new(g, m).unwrap()))
    })
}

fn members(f: &PrincipalFilter) -> Vec<PointSet> {
    let mut v: Vec<PointSet> = f.members().collect();
    v.sort();
    v
}

proptest! {
    #[test]
    fn finer_is_member_inclusion((f, g) in filter_pair()) {
        let by_members = members(&g).iter().all(|&s| f.contains(s));
        prop_assert_eq!(finer(&f, &g).unwrap(), by_members);
    }

    #[test]
    fn intersection_keeps_common_members((f, g) in filter_pair()) {
        let h = intersect_filters(&f, &g).unwrap();
        let common: Vec<PointSet> = members(&f).into_iter().filter(|&s| g.contains(s)).collect();
        prop_assert_eq!(members(&h), common);
    }

    #[test]
    fn mesh_means_every_member_meets(f in (1usize..=5).prop_flat_map(filter_on), bits in 0u32..32) {
        let set = PointSet::from_bits(bits).intersection(f.carrier().full());
        prop_assert_eq!(mesh(&f, set), f.members().all(|m| m.meets(set)));
    }

    #[test]
    fn image_filter_is_generated_by_images((n, m, map) in map_between(), bits in 1u32..16) {
        let (src, dst) = (carrier(n), carrier(m));
        let base = PointSet::from_bits(bits).intersection(src.full());
        prop_assume!(!base.is_empty());
        let f = PrincipalFilter::new(src.clone(), base).unwrap();
        let image = image_filter(&map, &f, &dst).unwrap();
        for s in dst.full().subsets() {
            prop_assert_eq!(image.contains(s), f.contains(map.preimage(s)));
        }
    }

    #[test]
    fn preimage_filter_needs_a_meeting_base((n, m, map) in map_between(), bits in 1u32..16) {
        let (src, dst) = (carrier(n), carrier(m));
        let base = PointSet::from_bits(bits).intersection(dst.full());
        prop_assume!(!base.is_empty());
        let g = PrincipalFilter::new(dst, base).unwrap();
        match preimage_filter(&map, &g, &src) {
            Ok(h) => prop_assert_eq!(h.base(), map.preimage(base)),
            Err(e) => {
                prop_assert!(map.preimage(base).is_empty());
                prop_assert!(matches!(e, Error::EmptyPreimage));
            }
        }
    }

    #[test]
    fn canonical_net_round_trip(f in (1usize..=6).prop_flat_map(filter_on)) {
        prop_assert_eq!(induced_filter(&canonical_net(&f)).unwrap(), f);
    }

    #[test]
    fn lifted_nets_are_subnets(a in 0usize..3, b in 0usize..3, n in 1usize..=3, seed in any::<u64>()) {
        let c = carrier(n);
        let d1 = Arc::new(DirectedSet::chain(a + 1));
        let d2 = Arc::new(DirectedSet::cluster(b + 1));
        let v1 = (0..d1.len()).map(|i| (seed as usize >> i) % n).collect();
        let v2 = (0..d2.len()).map(|i| (seed as usize >> (8 + i)) % n).collect();
        let phi = Net::new(d1, c.clone(), v1).unwrap();
        let psi = Net::new(d2, c, v2).unwrap();
        let (p, q) = lift_to_common_domain(&phi, &psi);
        prop_assert!(is_subnet(&p, &phi).unwrap());
        prop_assert!(is_subnet(&q, &psi).unwrap());
        prop_assert_eq!(induced_filter(&p).unwrap(), induced_filter(&phi).unwrap());
    }
}

#[test]
fn ultrafilters_are_point_filters() {
    let c = carrier(3);
    for bits in 1u32..8 {
        let f = PrincipalFilter::new(c.clone(), PointSet::from_bits(bits)).unwrap();
        assert_eq!(is_ultrafilter(&f), bits.count_ones() == 1);
    }
}

#[test]
fn filters_reject_empty_bases_and_foreign_carriers() {
    assert!(PrincipalFilter::new(carrier(2), PointSet::EMPTY).is_err());
    assert!(PrincipalFilter::new(carrier(2), PointSet::singleton(3)).is_err());
    let f = PrincipalFilter::new(carrier(2), PointSet::singleton(0)).unwrap();
    let g = PrincipalFilter::new(carrier(3), PointSet::singleton(0)).unwrap();
    assert!(matches!(finer(&f, &g), Err(Error::CarrierMismatch)));
}

#[test]
fn carriers_reject_bad_labels() {
    assert!(Carrier::new(["a", "a"]).is_err());
    assert!(Carrier::new(["a", ""]).is_err());
    assert!(Carrier::new(["a b"]).is_err());
    let c = Carrier::new(["x", "y", "z"]).unwrap();
    assert_eq!(c.parse_set("z x").unwrap(), PointSet::from_bits(0b101));
    assert!(c.parse_set("w").is_err());
}
