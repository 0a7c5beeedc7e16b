//! The space `C(X,Y)` of continuous maps under continuous convergence.

use std::sync::Arc;

use crate::constructions::{all_mappings, is_limit_space, product, SpaceMap};
use crate::error::{Error, Result};
use crate::filters::{nonempty_subsets, Carrier, Mapping, PointSet};
use crate::spaces::Preconvergence;

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpace {
    source: Preconvergence,
    target: Preconvergence,
    /// Continuous maps in lexicographic order of their graphs.
    functions: Vec<Mapping>,
    /// Continuous convergence on a carrier labelled `f0, f1, …`.
    structure: Preconvergence,
}

impl FunctionSpace {
    pub fn source(&self) -> &Preconvergence {
        &self.source
    }

    pub fn target(&self) -> &Preconvergence {
        &self.target
    }

    pub fn functions(&self) -> &[Mapping] {
        &self.functions
    }

    pub fn structure(&self) -> &Preconvergence {
        &self.structure
    }

    pub fn index_of(&self, f: &Mapping) -> Option<usize> {
        self.functions.iter().position(|g| g == f)
    }

    /// `G[A]`: all values of functions in `g` at points of `a`.
    pub fn image_base(&self, g: PointSet, a: PointSet) -> PointSet {
        g.iter()
            .fold(PointSet::EMPTY, |acc, i| acc.union(self.functions[i].image(a)))
    }
}

pub fn continuous_maps(x: &Preconvergence, y: &Preconvergence) -> Vec<SpaceMap> {
    let mut maps: Vec<SpaceMap> = all_mappings(x.size(), y.size())
        .map(|m| SpaceMap::new(x.clone(), y.clone(), m).expect("sizes fit"))
        .filter(SpaceMap::is_continuous)
        .collect();
    maps.sort_by(|f, g| f.mapping().graph().cmp(g.mapping().graph()));
    maps
}

/// `G → f` when for every `↑A → x` in `X`, `↑G[A] → f(x)` in `Y`.
pub fn continuous_convergence(x: &Preconvergence, y: &Preconvergence) -> Result<FunctionSpace> {
    let functions: Vec<Mapping> = continuous_maps(x, y)
        .into_iter()
        .map(|f| f.mapping().clone())
        .collect();
    let carrier = Arc::new(Carrier::new((0..functions.len()).map(|i| format!("f{i}")))?);
    let mut space = FunctionSpace {
        source: x.clone(),
        target: y.clone(),
        functions,
        structure: Preconvergence::empty(carrier.clone()),
    };
    let convergent: Vec<(PointSet, PointSet)> = x
        .entries()
        .filter(|(_, lim)| !lim.is_empty())
        .collect();
    space.structure = Preconvergence::from_fn(carrier, |g| {
        let images: Vec<(PointSet, PointSet)> = convergent
            .iter()
            .map(|&(a, lim)| (lim, y.limits(space.image_base(g, a))))
            .collect();
        (0..space.functions.len())
            .filter(|&i| {
                let f = &space.functions[i];
                images
                    .iter()
                    .all(|&(lim, target)| lim.iter().all(|p| target.contains(f.apply(p))))
            })
            .collect()
    });
    if is_limit_space(x) && is_limit_space(y) && !is_limit_space(&space.structure) {
        return Err(Error::Falsification(
            "continuous convergence between limit spaces is not a limit space".into(),
        ));
    }
    Ok(space)
}

fn require_limit_spaces(spaces: &[&Preconvergence]) -> Result<()> {
    if spaces.iter().all(|l| is_limit_space(l)) {
        Ok(())
    } else {
        Err(Error::PreconditionFailed("spaces must be limit spaces".into()))
    }
}

fn eval_on(fs: &FunctionSpace, structure: &Preconvergence) -> Result<SpaceMap> {
    let prod = product(&[structure.clone(), fs.source.clone()])?;
    let n = fs.source.size();
    let graph = (0..prod.space.size())
        .map(|t| fs.functions[t / n].apply(t % n))
        .collect();
    SpaceMap::new(prod.space, fs.target.clone(), Mapping::new(graph, fs.target.size())?)
}

/// `ev: C(X,Y) × X → Y`.
pub fn eval_map(fs: &FunctionSpace) -> Result<SpaceMap> {
    require_limit_spaces(&[&fs.source, &fs.target])?;
    if fs.functions.is_empty() {
        return Err(Error::PreconditionFailed("no continuous maps".into()));
    }
    let ev = eval_on(fs, &fs.structure)?;
    if !ev.is_continuous() {
        return Err(Error::Falsification("evaluation is not continuous".into()));
    }
    Ok(ev)
}

/// Adding any missing limit to the continuous convergence breaks continuity
/// of evaluation. Returns the first `(G, f)` for which it does not.
pub fn eval_perturbation_escape(fs: &FunctionSpace) -> Result<Option<(PointSet, usize)>> {
    require_limit_spaces(&[&fs.source, &fs.target])?;
    let k = fs.functions.len();
    for g in nonempty_subsets(k) {
        let lim = fs.structure.limits(g);
        for f in PointSet::full(k).difference(lim) {
            let mut enlarged = fs.structure.clone();
            enlarged.set_limits(g, lim.with(f));
            if eval_on(fs, &enlarged)?.is_continuous() {
                return Ok(Some((g, f)));
            }
        }
    }
    Ok(None)
}

fn check_product_source(h: &SpaceMap, z: &Preconvergence, x: &Preconvergence) -> Result<()> {
    if h.source() != &product(&[z.clone(), x.clone()])?.space {
        return Err(Error::ShapeMismatch("source must be the product Z × X".into()));
    }
    Ok(())
}

/// `h̃: Z → C(X,Y)` with `h̃(z) = h(z, ·)`.
pub fn curry(h: &SpaceMap, z: &Preconvergence, fs: &FunctionSpace) -> Result<SpaceMap> {
    require_limit_spaces(&[z, &fs.source, &fs.target])?;
    check_product_source(h, z, &fs.source)?;
    if h.target() != &fs.target {
        return Err(Error::ShapeMismatch("target must be Y".into()));
    }
    if !h.is_continuous() {
        return Err(Error::NotContinuous);
    }
    let n = fs.source.size();
    let mut graph = Vec::with_capacity(z.size());
    for point in 0..z.size() {
        let section = Mapping::new(
            (0..n).map(|p| h.mapping().apply(point * n + p)).collect(),
            fs.target.size(),
        )?;
        let index = fs.index_of(&section).ok_or_else(|| {
            Error::Falsification("a section of a continuous map is not continuous".into())
        })?;
        graph.push(index);
    }
    let curried = SpaceMap::new(
        z.clone(),
        fs.structure.clone(),
        Mapping::new(graph, fs.functions.len())?,
    )?;
    if !curried.is_continuous() {
        return Err(Error::Falsification("curried map is not continuous".into()));
    }
    if &uncurry(&curried, fs)? != h {
        return Err(Error::Falsification("uncurrying does not recover the map".into()));
    }
    Ok(curried)
}

/// `ev ∘ (k × id_X)`.
pub fn uncurry(k: &SpaceMap, fs: &FunctionSpace) -> Result<SpaceMap> {
    if k.target() != &fs.structure {
        return Err(Error::ShapeMismatch("target must be the function space".into()));
    }
    if !k.is_continuous() {
        return Err(Error::NotContinuous);
    }
    let z = k.source();
    let prod = product(&[z.clone(), fs.source.clone()])?;
    let n = fs.source.size();
    let graph = (0..prod.space.size())
        .map(|t| fs.functions[k.mapping().apply(t / n)].apply(t % n))
        .collect();
    let h = SpaceMap::new(prod.space, fs.target.clone(), Mapping::new(graph, fs.target.size())?)?;
    if is_limit_space(z) && is_limit_space(&fs.source) && is_limit_space(&fs.target) && !h.is_continuous() {
        return Err(Error::Falsification("uncurried map is not continuous".into()));
    }
    Ok(h)
}

/// Continuity of `∘: C(X,Y) × C(Y,Z) → C(X,Z)`.
pub fn verify_composition_continuity(
    x: &Preconvergence,
    y: &Preconvergence,
    z: &Preconvergence,
) -> Result<bool> {
    require_limit_spaces(&[x, y, z])?;
    let xy = continuous_convergence(x, y)?;
    let yz = continuous_convergence(y, z)?;
    let xz = continuous_convergence(x, z)?;
    let prod = product(&[xy.structure.clone(), yz.structure.clone()])?;
    let m = yz.functions.len();
    let mut graph = Vec::with_capacity(prod.space.size());
    for t in 0..prod.space.size() {
        let composite = xy.functions[t / m].then(&yz.functions[t % m])?;
        graph.push(xz.index_of(&composite).ok_or_else(|| {
            Error::Falsification("composite of continuous maps is not continuous".into())
        })?);
    }
    let compose = SpaceMap::new(prod.space, xz.structure.clone(), Mapping::new(graph, xz.functions.len())?)?;
    Ok(compose.is_continuous())
}
