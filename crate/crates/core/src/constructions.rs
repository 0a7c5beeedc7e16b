//! Continuous maps, initial and final structures, and the constructions built
//! from them.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::filters::{nonempty_subsets, Carrier, Mapping, PointSet};
use crate::spaces::{check_axiom, classify_set, Axiom, Preconvergence};

/// A base and a point it converges to whose image does not converge to the
/// image point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContinuityWitness {
    pub base: PointSet,
    pub point: usize,
}

#[derive(Debug, Clone)]
pub struct SpaceMap {
    source: Preconvergence,
    target: Preconvergence,
    map: Mapping,
    continuity: OnceLock<Option<ContinuityWitness>>,
}

impl PartialEq for SpaceMap {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.map == other.map
    }
}

impl SpaceMap {
    pub fn new(source: Preconvergence, target: Preconvergence, map: Mapping) -> Result<Self> {
        if map.source_size() != source.size() || map.target_size() != target.size() {
            return Err(Error::InvalidMap(format!(
                "map {} → {} between spaces of {} and {} points",
                map.source_size(),
                map.target_size(),
                source.size(),
                target.size()
            )));
        }
        Ok(SpaceMap {
            source,
            target,
            map,
            continuity: OnceLock::new(),
        })
    }

    pub fn identity(space: &Preconvergence) -> Self {
        let map = Mapping::identity(space.size());
        SpaceMap::new(space.clone(), space.clone(), map).expect("identity fits")
    }

    pub fn constant(source: &Preconvergence, target: &Preconvergence, value: usize) -> Result<Self> {
        let map = Mapping::constant(source.size(), value, target.size())?;
        SpaceMap::new(source.clone(), target.clone(), map)
    }

    pub fn source(&self) -> &Preconvergence {
        &self.source
    }

    pub fn target(&self) -> &Preconvergence {
        &self.target
    }

    pub fn mapping(&self) -> &Mapping {
        &self.map
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SpaceMap) -> Result<SpaceMap> {
        if self.target != g.source {
            return Err(Error::ShapeMismatch(
                "composite needs the first target to be the second source".into(),
            ));
        }
        SpaceMap::new(self.source.clone(), g.target.clone(), self.map.then(&g.map)?)
    }

    fn with_source(&self, source: Preconvergence) -> Result<SpaceMap> {
        SpaceMap::new(source, self.target.clone(), self.map.clone())
    }

    fn with_target(&self, target: Preconvergence) -> Result<SpaceMap> {
        SpaceMap::new(self.source.clone(), target, self.map.clone())
    }

    /// Continuity failure, searching larger bases first.
    pub fn discontinuity(&self) -> Option<ContinuityWitness> {
        *self.continuity.get_or_init(|| {
            let n = self.source.size();
            let mut bases: Vec<PointSet> = nonempty_subsets(n).collect();
            bases.reverse();
            bases.into_iter().find_map(|a| {
                let image_limits = self.target.limits(self.map.image(a));
                self.source
                    .limits(a)
                    .iter()
                    .find(|&x| !image_limits.contains(self.map.apply(x)))
                    .map(|x| ContinuityWitness { base: a, point: x })
            })
        })
    }

    pub fn is_continuous(&self) -> bool {
        self.discontinuity().is_none()
    }

    pub fn is_continuous_at(&self, point: usize) -> Result<bool> {
        if point >= self.source.size() {
            return Err(Error::SetOutOfRange {
                set: 1u32.checked_shl(point as u32).unwrap_or(0),
                size: self.source.size(),
            });
        }
        let fx = self.map.apply(point);
        Ok(nonempty_subsets(self.source.size())
            .filter(|&a| self.source.converges(a, point))
            .all(|a| self.target.converges(self.map.image(a), fx)))
    }
}

pub fn is_continuous(f: &SpaceMap) -> (bool, Option<ContinuityWitness>) {
    let w = f.discontinuity();
    (w.is_none(), w)
}

pub fn is_continuous_at(f: &SpaceMap, point: usize) -> Result<bool> {
    f.is_continuous_at(point)
}

/// Coarsest preconvergence on `carrier` making every `f_i` continuous into
/// its space. Chaotic for the empty family.
pub fn initial_structure(
    maps: &[(Mapping, &Preconvergence)],
    carrier: &Arc<Carrier>,
) -> Result<Preconvergence> {
    for (f, l) in maps {
        if f.source_size() != carrier.len() || f.target_size() != l.size() {
            return Err(Error::InvalidMap("map does not fit the carriers".into()));
        }
    }
    Ok(Preconvergence::from_fn(carrier.clone(), |a| {
        (0..carrier.len())
            .filter(|&x| {
                maps.iter()
                    .all(|(f, l)| l.converges(f.image(a), f.apply(x)))
            })
            .collect()
    }))
}

/// Finest preconvergence on `carrier` making every `f_i` continuous out of
/// its space. Empty for the empty family.
pub fn final_structure(
    maps: &[(Mapping, &Preconvergence)],
    carrier: &Arc<Carrier>,
) -> Result<Preconvergence> {
    for (f, l) in maps {
        if f.target_size() != carrier.len() || f.source_size() != l.size() {
            return Err(Error::InvalidMap("map does not fit the carriers".into()));
        }
    }
    let mut out = Preconvergence::empty(carrier.clone());
    for (f, l) in maps {
        for (b, lim) in l.entries() {
            let a = f.image(b);
            out.set_limits(a, out.limits(a).union(f.image(lim)));
        }
    }
    Ok(out)
}

/// A constructed space together with its defining maps: the inclusion for a
/// subspace, projections for a product, the canonical projection for a
/// quotient and inclusions for a coproduct.
#[derive(Debug, Clone, PartialEq)]
pub struct Construction {
    pub space: Preconvergence,
    pub maps: Vec<Mapping>,
}

fn inclusion(set: PointSet, n: usize) -> Mapping {
    Mapping::new(set.iter().collect(), n).expect("points of the carrier")
}

/// Carrier of the points of `set`, in order.
fn sub_carrier(carrier: &Carrier, set: PointSet) -> Arc<Carrier> {
    Arc::new(Carrier::new(set.iter().map(|x| carrier.label(x).to_string())).expect("distinct labels"))
}

pub fn subspace(x: &Preconvergence, set: PointSet) -> Result<Construction> {
    x.carrier().check_set(set)?;
    if set.is_empty() {
        return Err(Error::EmptySubset);
    }
    let incl = inclusion(set, x.size());
    let carrier = sub_carrier(x.carrier(), set);
    let space = Preconvergence::from_fn(carrier.clone(), |a| {
        incl.preimage(x.limits(incl.image(a)))
    });
    let initial = initial_structure(&[(incl.clone(), x)], &carrier)?;
    if initial != space {
        return Err(Error::Falsification(
            "subspace differs from the initial structure".into(),
        ));
    }
    Ok(Construction {
        space,
        maps: vec![incl],
    })
}

pub fn product(factors: &[Preconvergence]) -> Result<Construction> {
    if factors.is_empty() {
        return Err(Error::ShapeMismatch("a product needs at least one factor".into()));
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
    let total = match total {
        Some(t) if t <= crate::filters::MAX_POINTS => t,
        Some(t) => return Err(Error::CarrierTooLarge(t)),
        None => return Err(Error::CarrierTooLarge(usize::MAX)),
    };
    // Tuple `t` has coordinate `j` equal to digit `j` of `t`, first factor
    // most significant.
    let coords = |mut t: usize| {
        let mut c = vec![0; sizes.len()];
        for j in (0..sizes.len()).rev() {
            c[j] = t % sizes[j];
            t /= sizes[j];
        }
        c
    };
    let tuples: Vec<Vec<usize>> = (0..total).map(coords).collect();
    let labels = tuples.iter().map(|c| {
        let parts: Vec<&str> = c
            .iter()
            .zip(factors)
            .map(|(&i, f)| f.carrier().label(i))
            .collect();
        format!("({})", parts.join(","))
    });
    let carrier = Arc::new(Carrier::new(labels)?);
    let projections: Vec<Mapping> = (0..sizes.len())
        .map(|j| Mapping::new(tuples.iter().map(|c| c[j]).collect(), sizes[j]).expect("in range"))
        .collect();
    let space = Preconvergence::from_fn(carrier.clone(), |a| {
        let allowed: Vec<PointSet> = projections
            .iter()
            .zip(factors)
            .map(|(p, f)| f.limits(p.image(a)))
            .collect();
        (0..total)
            .filter(|&t| tuples[t].iter().zip(&allowed).all(|(&i, s)| s.contains(i)))
            .collect()
    });
    let pairs: Vec<(Mapping, &Preconvergence)> =
        projections.iter().cloned().zip(factors).collect();
    if initial_structure(&pairs, &carrier)? != space {
        return Err(Error::Falsification(
            "product differs from the initial structure".into(),
        ));
    }
    Ok(Construction {
        space,
        maps: projections,
    })
}

/// Classes must be nonempty, disjoint and cover the carrier. The quotient
/// lists classes by least element and labels each by joining its labels
/// with `~`.
pub fn quotient(x: &Preconvergence, classes: &[PointSet]) -> Result<Construction> {
    let n = x.size();
    let mut seen = PointSet::EMPTY;
    for &c in classes {
        x.carrier().check_set(c)?;
        if c.is_empty() {
            return Err(Error::InvalidPartition("empty class".into()));
        }
        if c.meets(seen) {
            return Err(Error::InvalidPartition("classes overlap".into()));
        }
        seen = seen.union(c);
    }
    if seen != x.full() {
        return Err(Error::InvalidPartition("classes do not cover the carrier".into()));
    }
    let mut classes = classes.to_vec();
    classes.sort_by_key(|c| c.first());
    let labels = classes.iter().map(|c| {
        c.iter()
            .map(|p| x.carrier().label(p))
            .collect::<Vec<_>>()
            .join("~")
    });
    let carrier = Arc::new(Carrier::new(labels)?);
    let graph = (0..n)
        .map(|p| classes.iter().position(|c| c.contains(p)).expect("covered"))
        .collect();
    let projection = Mapping::new(graph, classes.len())?;
    let space = final_structure(&[(projection.clone(), x)], &carrier)?;
    Ok(Construction {
        space,
        maps: vec![projection],
    })
}

/// Tagged disjoint union with labels `x_j` for point `x` of summand `j`.
pub fn coproduct(summands: &[Preconvergence]) -> Result<Construction> {
    if summands.is_empty() {
        return Err(Error::ShapeMismatch("a coproduct needs at least one summand".into()));
    }
    let total: usize = summands.iter().map(|s| s.size()).sum();
    if total > crate::filters::MAX_POINTS {
        return Err(Error::CarrierTooLarge(total));
    }
    let labels = summands.iter().enumerate().flat_map(|(j, s)| {
        s.carrier()
            .labels()
            .iter()
            .map(move |l| format!("{l}_{j}"))
            .collect::<Vec<_>>()
    });
    let carrier = Arc::new(Carrier::new(labels)?);
    let mut offset = 0;
    let inclusions: Vec<Mapping> = summands
        .iter()
        .map(|s| {
            let m = Mapping::new((offset..offset + s.size()).collect(), total).expect("in range");
            offset += s.size();
            m
        })
        .collect();
    let pairs: Vec<(Mapping, &Preconvergence)> =
        inclusions.iter().cloned().zip(summands).collect();
    let space = final_structure(&pairs, &carrier)?;
    Ok(Construction {
        space,
        maps: inclusions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StructureKind {
    Initial,
    Final,
}

/// Checks that continuity of `g` against the constructed structure matches
/// continuity of every composite. For initial structures `g` maps into the
/// carrier being structured; for final ones it maps out of it.
pub fn verify_universal_property(
    kind: StructureKind,
    g: &SpaceMap,
    maps: &[(Mapping, &Preconvergence)],
) -> Result<bool> {
    let mismatch = || Error::ShapeMismatch("maps do not fit the carrier of g".into());
    match kind {
        StructureKind::Initial => {
            let carrier = g.target().carrier();
            let structure = initial_structure(maps, carrier).map_err(|_| mismatch())?;
            let direct = g.with_target(structure)?.is_continuous();
            let mut composites = true;
            for (f, l) in maps {
                let fg = g.mapping().then(f)?;
                composites &= SpaceMap::new(g.source().clone(), (*l).clone(), fg)?.is_continuous();
            }
            Ok(direct == composites)
        }
        StructureKind::Final => {
            let carrier = g.source().carrier();
            let structure = final_structure(maps, carrier).map_err(|_| mismatch())?;
            let direct = g.with_source(structure)?.is_continuous();
            let mut composites = true;
            for (f, l) in maps {
                let gf = f.then(g.mapping())?;
                composites &= SpaceMap::new((*l).clone(), g.target().clone(), gf)?.is_continuous();
            }
            Ok(direct == composites)
        }
    }
}

/// `f` restricted to the subspace on `set`.
pub fn restrict(f: &SpaceMap, set: PointSet) -> Result<SpaceMap> {
    let sub = subspace(f.source(), set)?;
    let map = sub.maps[0].then(f.mapping())?;
    SpaceMap::new(sub.space, f.target().clone(), map)
}

/// `f` with codomain cut down to the subspace on `set ⊇ f[X]`.
pub fn corestrict(f: &SpaceMap, set: PointSet) -> Result<SpaceMap> {
    if !f.mapping().image(f.source().full()).is_subset(set) {
        return Err(Error::PreconditionFailed("image leaves the codomain".into()));
    }
    let sub = subspace(f.target(), set)?;
    let positions: Vec<usize> = set.iter().collect();
    let graph = f
        .mapping()
        .graph()
        .iter()
        .map(|y| positions.iter().position(|p| p == y).expect("inside"))
        .collect();
    SpaceMap::new(f.source().clone(), sub.space, Mapping::new(graph, set.len())?)
}

#[derive(Debug, Clone)]
pub struct GlueOutcome {
    pub map: SpaceMap,
    pub continuous: bool,
    /// The first hypothesis that fails, if any. When present, `continuous`
    /// is a direct verdict rather than a guarantee.
    pub hypothesis_violation: Option<String>,
}

/// Joins maps defined on `a` and `b ⊆ X` into one map on `X`. The sources of
/// `fa` and `fb` list the points of `a` and `b` in carrier order.
pub fn glue(
    fa: &SpaceMap,
    fb: &SpaceMap,
    x: &Preconvergence,
    y: &Preconvergence,
    a: PointSet,
    b: PointSet,
) -> Result<GlueOutcome> {
    x.carrier().check_set(a)?;
    x.carrier().check_set(b)?;
    if fa.source().size() != a.len() || fb.source().size() != b.len() {
        return Err(Error::ShapeMismatch("piece sizes do not match their sets".into()));
    }
    if fa.target() != y || fb.target() != y {
        return Err(Error::ShapeMismatch("pieces must map into the target".into()));
    }
    if a.union(b) != x.full() {
        return Err(Error::CoverGap);
    }
    let value = |f: &SpaceMap, set: PointSet, p: usize| {
        f.mapping().apply(set.iter().position(|q| q == p).expect("member"))
    };
    for p in a.intersection(b) {
        if value(fa, a, p) != value(fb, b, p) {
            return Err(Error::Disagreement(x.carrier().label(p).to_string()));
        }
    }
    let graph = (0..x.size())
        .map(|p| if a.contains(p) { value(fa, a, p) } else { value(fb, b, p) })
        .collect();
    let map = SpaceMap::new(x.clone(), y.clone(), Mapping::new(graph, y.size())?)?;
    let continuous = map.is_continuous();

    let violation = if !is_limit_space(x) {
        Some("domain is not a limit space".to_string())
    } else if !is_limit_space(y) {
        Some("target is not a limit space".to_string())
    } else if !classify_set(x, a)?.closed || !classify_set(x, b)?.closed {
        Some("pieces are not closed".to_string())
    } else if fa.source() != &subspace(x, a)?.space || fb.source() != &subspace(x, b)?.space {
        Some("pieces are not defined on subspaces".to_string())
    } else if !fa.is_continuous() || !fb.is_continuous() {
        Some("pieces are not continuous".to_string())
    } else {
        None
    };
    if violation.is_none() && !continuous {
        return Err(Error::Falsification(
            "glued map of continuous pieces on closed sets is discontinuous".into(),
        ));
    }
    Ok(GlueOutcome {
        map,
        continuous,
        hypothesis_violation: violation,
    })
}

/// All maps from an `n`-point set to an `m`-point set.
pub fn all_mappings(n: usize, m: usize) -> impl Iterator<Item = Mapping> {
    let total = (m as u64).pow(n as u32);
    (0..total).map(move |mut code| {
        let graph = (0..n)
            .map(|_| {
                let v = (code % m as u64) as usize;
                code /= m as u64;
                v
            })
            .collect();
        Mapping::new(graph, m).expect("in range")
    })
}

/// True when `l` is centered, isotone and stable.
pub fn is_limit_space(l: &Preconvergence) -> bool {
    [Axiom::Centered, Axiom::Isotone, Axiom::Stable]
        .into_iter()
        .all(|a| check_axiom(l, a).holds)
}
