//! Named example spaces. The same tables ship as JSON under `fixtures/`.

use std::sync::Arc;

use crate::filters::{Carrier, PointSet};
use crate::spaces::Preconvergence;

pub const FIXTURE_VERSION: &str = "fixture v1";

pub const NAMES: [&str; 5] = ["S2", "D2", "C2", "P3", "W3"];

fn carrier(n: usize) -> Arc<Carrier> {
    Arc::new(Carrier::alphabetic(n).expect("small carrier"))
}

/// Sierpinski space on `{a, b}` with `{a}` open.
pub fn s2() -> Preconvergence {
    let a = PointSet::singleton(0);
    let b = PointSet::singleton(1);
    Preconvergence::from_fn(carrier(2), |base| if base == a { a.union(b) } else { b })
}

/// Discrete space on `{a, b}`.
pub fn d2() -> Preconvergence {
    Preconvergence::discrete(carrier(2))
}

/// Chaotic space on `{a, b}`.
pub fn c2() -> Preconvergence {
    Preconvergence::chaotic(carrier(2))
}

/// Pretopological, not topological: `L(A) = {x : A ⊆ V_x}` with
/// `V_a = {a,b}`, `V_b = {b,c}`, `V_c = {c}`.
pub fn p3() -> Preconvergence {
    let v = [0b011u32, 0b110, 0b100].map(PointSet::from_bits);
    Preconvergence::from_fn(carrier(3), |base| {
        (0..3).filter(|&x| base.is_subset(v[x])).collect()
    })
}

/// A convergence that is not stable: `c` is a limit of `↑{a}` and `↑{b}` but
/// not of `↑{a,b}`.
pub fn w3() -> Preconvergence {
    let mut l = Preconvergence::empty(carrier(3));
    let set = |bits| PointSet::from_bits(bits);
    l.set_limits(set(0b001), set(0b101));
    l.set_limits(set(0b010), set(0b110));
    l.set_limits(set(0b100), set(0b100));
    l.set_limits(set(0b101), set(0b100));
    l.set_limits(set(0b110), set(0b100));
    l
}

pub fn by_name(name: &str) -> Option<Preconvergence> {
    match name {
        "S2" => Some(s2()),
        "D2" => Some(d2()),
        "C2" => Some(c2()),
        "P3" => Some(p3()),
        "W3" => Some(w3()),
        _ => None,
    }
}

fn description(name: &str) -> &'static str {
    match name {
        "S2" => "Sierpinski space: {a} is open",
        "D2" => "discrete space on two points",
        "C2" => "chaotic space on two points",
        "P3" => "pretopological, not topological: L(A) = {x : A ⊆ V_x}",
        "W3" => "centered and isotone, not stable: c is lost on {a, b}",
        _ => "",
    }
}

/// The fixture as it is stored on disk.
pub fn document(name: &str) -> Option<crate::io::SpaceDocument> {
    let space = by_name(name)?;
    Some(crate::io::SpaceDocument {
        description: Some(description(name).to_string()),
        provenance: Some(FIXTURE_VERSION.to_string()),
        ..crate::io::SpaceDocument::new(name, space)
    })
}
