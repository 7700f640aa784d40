//! Shared generators for the integration suites.

use std::sync::Mutex;

use augcut::dsfm::DsfmInstance;
use augcut::reduce::{Hyperedge, Hypergraph};
use augcut::splitting::{Family, GscbFunction, ScbFunction, SplittingSpec};
use rand::prelude::*;

/// Serializes whole test functions so wall-clock measurements are not
/// perturbed by sibling tests on other threads.
pub static SERIAL: Mutex<()> = Mutex::new(());

pub fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

pub fn catalog_families() -> Vec<Family> {
    vec![
        Family::Clique,
        Family::Linear,
        Family::DeltaLinear(1.0),
        Family::DeltaLinear(2.0),
        Family::DeltaLinear(5.0),
        Family::Sqrt,
        Family::Power(0.5),
        Family::Power(0.9),
        Family::AllOrNothing,
    ]
}

pub fn random_spec(rng: &mut impl Rng) -> SplittingSpec {
    let families = catalog_families();
    let family = families[rng.gen_range(0..families.len())].clone();
    SplittingSpec::new(family, rng.gen_range(0.2..2.0)).unwrap()
}

/// Random symmetric hypergraph: `n <= 10`, up to 6 hyperedges of sizes 2-6.
pub fn random_hypergraph(rng: &mut impl Rng) -> Hypergraph {
    let n = rng.gen_range(4..=10);
    let edge_count = rng.gen_range(1..=6);
    let mut edges = Vec::new();
    for _ in 0..edge_count {
        let k = rng.gen_range(2..=6.min(n));
        let members = rand::seq::index::sample(rng, n, k).into_vec();
        edges.push(Hyperedge::Symmetric { members, spec: random_spec(rng) });
    }
    Hypergraph::new(n, edges).unwrap()
}

/// Random valid symmetric penalty sequence with `1 <= r <= max_r`:
/// nonnegative, nonincreasing increments. A third of the draws quantize the
/// increments to force collinear runs and plateaus.
pub fn random_scb(rng: &mut impl Rng, max_r: usize) -> ScbFunction {
    let r = rng.gen_range(1..=max_r);
    let quantize = rng.gen_bool(0.33);
    let mut incs: Vec<f64> = (0..r)
        .map(|_| {
            let d: f64 = rng.gen_range(0.0..2.0);
            if quantize {
                (d * 2.0).round() / 2.0
            } else {
                d
            }
        })
        .collect();
    incs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut w = vec![0.0];
    for d in incs {
        w.push(w.last().unwrap() + d);
    }
    ScbFunction::new(w).unwrap()
}

/// Strictly concave, strictly increasing penalty sequence: increments are
/// strictly decreasing with a definite gap.
pub fn strictly_concave_scb(rng: &mut impl Rng, max_r: usize) -> ScbFunction {
    let r = rng.gen_range(2..=max_r);
    let mut w = vec![0.0];
    for i in 0..r {
        let inc = 0.5 + ((r - i) as f64) + rng.gen_range(0.0..0.4);
        w.push(w.last().unwrap() + inc);
    }
    ScbFunction::new(w).unwrap()
}

/// Random concave nonnegative penalty sequence over `0..=k`.
pub fn random_gscb(rng: &mut impl Rng, k: usize) -> GscbFunction {
    let mut incs: Vec<f64> = (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect();
    incs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut w = vec![rng.gen_range(0.0..2.0)];
    for d in incs {
        w.push(w.last().unwrap() + d);
    }
    let min = w.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < 0.0 {
        for v in &mut w {
            *v -= min;
        }
    }
    GscbFunction::new(w).unwrap()
}

/// Random Card-DSFM instance: `n <= 10`, up to 5 components on supports of
/// size up to 6.
pub fn random_dsfm(rng: &mut impl Rng) -> DsfmInstance {
    let n = rng.gen_range(2..=10);
    let comps = rng.gen_range(1..=5);
    let mut components = Vec::new();
    for _ in 0..comps {
        let k = rng.gen_range(1..=6.min(n));
        let members = rand::seq::index::sample(rng, n, k).into_vec();
        components.push((members, random_gscb(rng, k)));
    }
    DsfmInstance::new(n, components).unwrap()
}
