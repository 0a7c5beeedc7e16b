use convg::constructions::{product, SpaceMap};
use convg::filters::{Mapping, PointSet};
use convg::fixtures;
use convg::function_space::{
    continuous_convergence, continuous_maps, curry, eval_map, eval_perturbation_escape, uncurry,
    verify_composition_continuity,
};
use convg::search::random_space;
use convg::spaces::{Axiom, Preconvergence};
use convg::Error;
use proptest::prelude::*;

const LIMIT: [Axiom; 3] = [Axiom::Centered, Axiom::Isotone, Axiom::Stable];

fn limit_space(max: usize) -> impl Strategy<Value = Preconvergence> {
    (1usize..=max, any::<u64>()).prop_map(|(n, seed)| random_space(n, seed, &LIMIT).unwrap())
}

/// `G → f` read straight off the definition, for every `G` and `f`.
fn convergence_by_definition(x: &Preconvergence, y: &Preconvergence, fs: &[Mapping]) -> Vec<PointSet> {
    let k = fs.len();
    PointSet::full(k)
        .nonempty_subsets()
        .map(|g| {
            (0..k)
                .filter(|&f| {
                    x.entries().all(|(a, lim)| {
                        let image = g.iter().fold(PointSet::EMPTY, |acc, i| acc.union(fs[i].image(a)));
                        lim.iter().all(|p| y.converges(image, fs[f].apply(p)))
                    })
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn structure_matches_the_definition(x in limit_space(3), y in limit_space(2)) {
        let fs = continuous_convergence(&x, &y).unwrap();
        let expected = convergence_by_definition(&x, &y, fs.functions());
        let k = fs.functions().len();
        let got: Vec<PointSet> = PointSet::full(k).nonempty_subsets().map(|g| fs.structure().limits(g)).collect();
        prop_assert_eq!(got, expected);
        let labels: Vec<String> = (0..k).map(|i| format!("f{i}")).collect();
        prop_assert_eq!(fs.structure().carrier().labels(), labels.as_slice());
    }

    #[test]
    fn evaluation_is_continuous_and_tight(x in limit_space(3), y in limit_space(2)) {
        let fs = continuous_convergence(&x, &y).unwrap();
        prop_assert!(convg::constructions::is_limit_space(fs.structure()));
        prop_assume!(fs.functions().len() * x.size() <= 12);
        prop_assert!(eval_map(&fs).unwrap().is_continuous());
        prop_assert_eq!(eval_perturbation_escape(&fs).unwrap(), None);
    }

    #[test]
    fn currying_is_a_bijection(z in limit_space(2), x in limit_space(2), y in limit_space(2)) {
        let fs = continuous_convergence(&x, &y).unwrap();
        let zx = product(&[z.clone(), x.clone()]).unwrap().space;
        let hs = continuous_maps(&zx, &y);
        let ks = continuous_maps(&z, fs.structure());
        prop_assert_eq!(hs.len(), ks.len());
        for h in &hs {
            let k = curry(h, &z, &fs).unwrap();
            prop_assert_eq!(&uncurry(&k, &fs).unwrap(), h);
        }
    }

    #[test]
    fn composition_is_continuous(x in limit_space(2), y in limit_space(2), z in limit_space(2)) {
        prop_assert!(verify_composition_continuity(&x, &y, &z).unwrap());
    }
}

#[test]
fn maps_from_sierpinski_to_itself() {
    let s = fixtures::s2();
    let fs = continuous_convergence(&s, &s).unwrap();
    let graphs: Vec<&[usize]> = fs.functions().iter().map(Mapping::graph).collect();
    assert_eq!(graphs, [&[0, 0][..], &[0, 1], &[1, 1]]);
    assert_eq!(fs.index_of(&Mapping::identity(2)), Some(1));
}

#[test]
fn curry_rejects_discontinuous_maps() {
    let (z, x, y) = (fixtures::c2(), fixtures::d2(), fixtures::d2());
    let fs = continuous_convergence(&x, &y).unwrap();
    let zx = product(&[z.clone(), x]).unwrap().space;
    let h = SpaceMap::new(zx, y, Mapping::new(vec![0, 0, 1, 1], 2).unwrap()).unwrap();
    assert!(!h.is_continuous());
    assert!(matches!(curry(&h, &z, &fs), Err(Error::NotContinuous)));
}

#[test]
fn evaluation_needs_limit_spaces() {
    let w3 = fixtures::w3();
    let fs = continuous_convergence(&w3, &fixtures::c2());
    assert!(fs.is_err() || eval_map(&fs.unwrap()).is_err());
}
