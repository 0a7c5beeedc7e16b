//! Compactness and convergence systems.

use crate::constructions::SpaceMap;
use crate::error::{Error, Result};
use crate::filters::PointSet;
use crate::spaces::{check_axiom, Axiom, Preconvergence};

/// Every filter has a finer convergent filter. On a finite carrier this
/// amounts to every `↑{x}` converging somewhere.
pub fn is_compact(l: &Preconvergence) -> bool {
    l.full()
        .nonempty_subsets()
        .all(|a| a.nonempty_subsets().any(|b| !l.limits(b).is_empty()))
}

/// A convergent base not contained in any member of the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemWitness {
    pub base: PointSet,
    pub point: usize,
}

pub fn is_convergence_system(l: &Preconvergence, family: &[PointSet]) -> (bool, Option<SystemWitness>) {
    let witness = l.entries().find_map(|(a, lim)| {
        let point = lim.first()?;
        (!family.iter().any(|c| a.is_subset(*c))).then_some(SystemWitness { base: a, point })
    });
    (witness.is_none(), witness)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSystem {
    space: Preconvergence,
    family: Vec<PointSet>,
    validated: bool,
}

impl ConvergenceSystem {
    pub fn new(space: Preconvergence, family: Vec<PointSet>) -> Result<Self> {
        for &c in &family {
            space.carrier().check_set(c)?;
        }
        Ok(ConvergenceSystem {
            space,
            family,
            validated: false,
        })
    }

    /// Validates in place; on failure returns the uncovered convergent base.
    pub fn validate(&mut self) -> Option<SystemWitness> {
        let (ok, witness) = is_convergence_system(&self.space, &self.family);
        self.validated = ok;
        witness
    }

    pub fn validated(space: Preconvergence, family: Vec<PointSet>) -> Result<Self> {
        let mut system = ConvergenceSystem::new(space, family)?;
        match system.validate() {
            None => Ok(system),
            Some(w) => Err(Error::PreconditionFailed(format!(
                "not a convergence system: base {} converging to {} is uncovered",
                system.space.carrier().format_set(w.base),
                system.space.carrier().label(w.point)
            ))),
        }
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    pub fn space(&self) -> &Preconvergence {
        &self.space
    }

    pub fn family(&self) -> &[PointSet] {
        &self.family
    }

    pub fn covers(&self) -> bool {
        self.family
            .iter()
            .fold(PointSet::EMPTY, |acc, &c| acc.union(c))
            == self.space.full()
    }
}

/// Indices of a smallest covering subfamily, least in lexicographic order
/// among those of that size.
fn smallest_cover(n: usize, family: &[PointSet]) -> Option<Vec<usize>> {
    let full = PointSet::full(n);
    // No minimal cover needs more members than points.
    let max = family.len().min(n.max(1));
    (0..=max).find_map(|k| {
        let mut chosen = Vec::with_capacity(k);
        first_cover(family, full, k, 0, PointSet::EMPTY, &mut chosen).then_some(chosen)
    })
}

fn first_cover(
    family: &[PointSet],
    full: PointSet,
    k: usize,
    start: usize,
    covered: PointSet,
    chosen: &mut Vec<usize>,
) -> bool {
    if chosen.len() == k {
        return covered == full;
    }
    for i in start..family.len() {
        chosen.push(i);
        if first_cover(family, full, k, i + 1, covered.union(family[i]), chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// A smallest finite subcover, or `None` when there is none. On a compact
/// space a missing subcover is a falsification.
pub fn finite_subcover(system: &ConvergenceSystem) -> Result<Option<Vec<PointSet>>> {
    if !system.validated {
        return Err(Error::NotValidated);
    }
    let cover = smallest_cover(system.space.size(), &system.family)
        .map(|idx| idx.into_iter().map(|i| system.family[i]).collect());
    if cover.is_none() && is_compact(&system.space) {
        return Err(Error::Falsification(
            "convergence system of a compact space has no finite subcover".into(),
        ));
    }
    Ok(cover)
}

/// `{X ∖ U : U ∈ u_x}`: every set missing `x`. A convergence system without
/// subcover when `L` is isotone and `↑{x}` converges nowhere.
pub fn dual_system(l: &Preconvergence, point: usize) -> Result<ConvergenceSystem> {
    let family: Vec<PointSet> = l.full().without(point).subsets().collect();
    ConvergenceSystem::new(l.clone(), family)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompactnessReport {
    pub compact: bool,
    pub every_system_has_subcover: bool,
    /// A validated system without subcover, if one exists.
    pub counterexample: Option<Vec<PointSet>>,
    /// The system dual to a non-convergent ultrafilter, built when the space
    /// is not compact.
    pub dual: Option<Vec<PointSet>>,
}

impl CompactnessReport {
    pub fn agrees(&self) -> bool {
        self.compact == self.every_system_has_subcover
    }
}

/// Compares compactness with "every convergence system has a finite
/// subcover", quantifying over every family of subsets.
pub fn verify_compactness_theorem(l: &Preconvergence) -> Result<CompactnessReport> {
    let n = l.size();
    if n > 3 {
        return Err(Error::TooLarge(format!(
            "{n} points; families are enumerated only up to 3"
        )));
    }
    if !check_axiom(l, Axiom::Isotone).holds {
        return Err(Error::NotIsotone);
    }
    let subsets: Vec<PointSet> = l.full().subsets().collect();
    let mut counterexample = None;
    for code in 0u64..1 << subsets.len() {
        let family: Vec<PointSet> = (0..subsets.len())
            .filter(|&i| code >> i & 1 == 1)
            .map(|i| subsets[i])
            .collect();
        if is_convergence_system(l, &family).0 && smallest_cover(n, &family).is_none() {
            counterexample = Some(family);
            break;
        }
    }
    let compact = is_compact(l);
    let dual = match (0..n).find(|&x| l.limits(PointSet::singleton(x)).is_empty()) {
        Some(x) if !compact => {
            let mut system = dual_system(l, x)?;
            if system.validate().is_some() || smallest_cover(n, system.family()).is_some() {
                return Err(Error::Falsification(
                    "dual system is not a subcover-free convergence system".into(),
                ));
            }
            Some(system.family)
        }
        _ => None,
    };
    Ok(CompactnessReport {
        compact,
        every_system_has_subcover: counterexample.is_none(),
        counterexample,
        dual,
    })
}

/// `{f⁻¹[C] : C ∈ system}` on the source of a continuous `f`.
pub fn preimage_system(f: &SpaceMap, system: &ConvergenceSystem) -> Result<ConvergenceSystem> {
    if !f.is_continuous() {
        return Err(Error::NotContinuous);
    }
    if !system.validated {
        return Err(Error::NotValidated);
    }
    if system.space() != f.target() {
        return Err(Error::ShapeMismatch("system lives on another space".into()));
    }
    let family = system
        .family
        .iter()
        .map(|&c| f.mapping().preimage(c))
        .collect();
    let mut pulled = ConvergenceSystem::new(f.source().clone(), family)?;
    if pulled.validate().is_some() {
        return Err(Error::Falsification(
            "preimage of a convergence system is not a convergence system".into(),
        ));
    }
    Ok(pulled)
}

/// Compactness of the target of a continuous surjection from a compact space.
pub fn image_compact(f: &SpaceMap) -> Result<bool> {
    if !f.is_continuous() {
        return Err(Error::PreconditionFailed("map is not continuous".into()));
    }
    if !f.mapping().is_onto() {
        return Err(Error::PreconditionFailed("map is not onto".into()));
    }
    if !is_compact(f.source()) {
        return Err(Error::PreconditionFailed("source is not compact".into()));
    }
    if !is_compact(f.target()) {
        return Err(Error::Falsification(
            "continuous image of a compact space is not compact".into(),
        ));
    }
    Ok(true)
}
