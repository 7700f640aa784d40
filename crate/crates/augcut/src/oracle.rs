//! Independent brute-force references for the test and acceptance suites.
//!
//! Each oracle recomputes its quantity along a different arithmetic path
//! than the implementation it certifies (bitmask popcounts instead of set
//! intersections, candidate enumeration plus interval DP instead of the
//! greedy, exhaustive placement instead of closed forms), so agreement is
//! evidence rather than tautology. All oracles refuse inputs large enough
//! to make exhaustion meaningless.

use std::collections::BTreeSet;

use crate::dsfm::DsfmInstance;
use crate::gadget::{GraphFragment, NodeRef};
use crate::reduce::{AugmentedGraph, Hypergraph};
use crate::splitting::{GscbFunction, ScbFunction};
use crate::{Error, Result};

/// Exhaustive minimizer of a Card-DSFM instance over all `2^n` subsets.
/// Ties break toward the smallest characteristic bitmask (node `i` is bit
/// `i`), so the result is deterministic.
pub fn brute_min_f(inst: &DsfmInstance) -> Result<(BTreeSet<usize>, f64)> {
    if inst.n > 22 {
        return Err(Error::TooLarge(format!("brute_min_f handles n <= 22, got {}", inst.n)));
    }
    let masks: Vec<(u32, &[f64])> = inst
        .components
        .iter()
        .map(|(members, f)| {
            let m = members.iter().fold(0u32, |acc, v| acc | (1 << v));
            (m, f.values())
        })
        .collect();
    let mut best_mask = 0u32;
    let mut best = f64::INFINITY;
    for mask in 0u32..(1u32 << inst.n) {
        let mut v = 0.0;
        for (m, w) in &masks {
            v += w[(mask & m).count_ones() as usize];
        }
        if v < best {
            best = v;
            best_mask = mask;
        }
    }
    let set = (0..inst.n).filter(|v| best_mask & (1 << v) != 0).collect();
    Ok((set, best))
}

/// Outcome of an exhaustive sandwich check.
#[derive(Debug, Clone, Copy)]
pub struct SandwichReport {
    pub max_ratio: f64,
    pub sets_checked: usize,
}

/// Enumerates every `S ⊆ V` and asserts
/// `cut_H(S) <= augmented_cut(S) <= (1+eps)·cut_H(S)` within `1e-9`
/// relative slack; returns the largest observed ratio. The hypergraph cut
/// is evaluated from the splitting specs directly, independent of the
/// gadget weights being certified.
pub fn brute_cut_sandwich(
    h: &Hypergraph,
    g: &AugmentedGraph,
    eps: f64,
) -> Result<SandwichReport> {
    if h.n > 16 {
        return Err(Error::TooLarge(format!("sandwich check handles n <= 16, got {}", h.n)));
    }
    let mut max_ratio = 1.0_f64;
    let count = 1usize << h.n;
    for mask in 0u32..(count as u32) {
        let s: BTreeSet<usize> = (0..h.n).filter(|v| mask & (1 << v) != 0).collect();
        let cut = h.cut_value(&s)?;
        let aug = g.augmented_cut(&s)?;
        let scale = cut.abs().max(1.0);
        if aug < cut - 1e-9 * scale {
            return Err(Error::Domain(format!(
                "augmented cut {aug} below hypergraph cut {cut} at S = {s:?}"
            )));
        }
        if aug > (1.0 + eps) * cut * (1.0 + 1e-9) + 1e-9 {
            return Err(Error::Domain(format!(
                "augmented cut {aug} above (1+{eps})·{cut} at S = {s:?}"
            )));
        }
        if cut > 0.0 {
            max_ratio = max_ratio.max(aug / cut);
        }
    }
    Ok(SandwichReport { max_ratio, sets_checked: count })
}

/// Minimum number of lines needed to `(1+eps)`-cover a penalty sequence,
/// by candidate enumeration and a shortest-chain interval DP.
///
/// Candidates are the chords through consecutive points, every two-point
/// line through `(ell, (1+eps)w(ell))` and `(q, w(q))`, and the trailing
/// constant; each is kept only if it upper-bounds `w` at all integers. In
/// symmetric mode the count is of positive-slope lines (the constant is
/// free); in generalized mode every line counts.
fn min_cover_size_dp(w: &[f64], eps: f64, symmetric: bool) -> Result<usize> {
    let n = w.len() - 1;
    if n > 20 {
        return Err(Error::TooLarge(format!("cover DP handles domains up to 20, got {n}")));
    }
    let scale = w.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let tol = 1e-12 * scale;
    if symmetric && w[n] <= 0.0 {
        return Ok(0);
    }

    // (slope, value at x = 0)
    let mut cands: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        let m = w[i + 1] - w[i];
        cands.push((m, w[i] - m * i as f64));
    }
    if symmetric {
        cands.push((0.0, w[n]));
    }
    for ell in 0..=n {
        let y = (1.0 + eps) * w[ell];
        for q in 0..=n {
            if q == ell {
                continue;
            }
            let m = (w[q] - y) / (q as f64 - ell as f64);
            cands.push((m, y - m * ell as f64));
        }
    }

    // Coverage interval per feasible candidate.
    let mut intervals: Vec<(usize, usize, usize)> = Vec::new(); // (lo, hi, cost)
    for (m, y0) in cands {
        let eval = |i: usize| m * i as f64 + y0;
        if (0..=n).any(|i| eval(i) < w[i] - tol) {
            continue;
        }
        let covered: Vec<usize> =
            (0..=n).filter(|&i| eval(i) <= (1.0 + eps) * w[i] + tol).collect();
        if covered.is_empty() {
            continue;
        }
        let lo = covered[0];
        let hi = *covered.last().unwrap();
        debug_assert_eq!(covered.len(), hi - lo + 1, "coverage must be contiguous");
        let cost = if symmetric && m <= tol { 0 } else { 1 };
        intervals.push((lo, hi, cost));
    }

    // best[x] = cheapest cover of points x..=n.
    let mut best = vec![usize::MAX; n + 2];
    best[n + 1] = 0;
    for x in (0..=n).rev() {
        for &(lo, hi, cost) in &intervals {
            if lo <= x && x <= hi {
                let rest = best[hi + 1];
                if rest != usize::MAX {
                    best[x] = best[x].min(cost + rest);
                }
            }
        }
        if best[x] == usize::MAX {
            return Err(Error::Domain(format!("no feasible line covers index {x}")));
        }
    }
    Ok(best[0])
}

/// DP bound for a symmetric penalty sequence: minimum positive-slope lines.
pub fn min_cover_size_dp_scb(w: &ScbFunction, eps: f64) -> Result<usize> {
    min_cover_size_dp(w.values(), eps, true)
}

/// DP bound for a generalized penalty sequence: minimum total lines.
pub fn min_cover_size_dp_gscb(w: &GscbFunction, eps: f64) -> Result<usize> {
    min_cover_size_dp(w.values(), eps, false)
}

/// Minimum directed cut of one gadget fragment over all placements of its
/// auxiliary nodes, with the given members pinned to the source side.
/// Certifies the closed-form augmented cut formulas.
pub fn brute_aux_mincut(frag: &GraphFragment, source_members: &BTreeSet<usize>) -> Result<f64> {
    if frag.aux_count > 20 {
        return Err(Error::TooLarge(format!(
            "placement enumeration handles <= 20 auxiliaries, got {}",
            frag.aux_count
        )));
    }
    let mut best = f64::INFINITY;
    for placement in 0u32..(1u32 << frag.aux_count) {
        let on_source = |r: &NodeRef| match r {
            NodeRef::Source => true,
            NodeRef::Sink => false,
            NodeRef::Member(v) => source_members.contains(v),
            NodeRef::Aux(j) => placement & (1 << j) != 0,
        };
        let mut cut = 0.0;
        for (t, h, c) in &frag.arcs {
            if on_source(t) && !on_source(h) {
                cut += c;
            }
        }
        best = best.min(cut);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::{augmented_cut_acb, augmented_cut_cb, expand_ccb, expand_kcg};
    use crate::plcover::{self, CcbParams, KcgParams};
    use crate::splitting::{Family, SplittingSpec};

    #[test]
    fn brute_min_zero_instance() {
        let inst = DsfmInstance::new(
            3,
            vec![(vec![0, 1], GscbFunction::new(vec![0.0, 1.0, 0.0]).unwrap())],
        )
        .unwrap();
        let (s, v) = brute_min_f(&inst).unwrap();
        assert_eq!(v, 0.0);
        assert!(s.is_empty());
    }

    #[test]
    fn brute_min_symmetric_component_has_trivial_minimizer() {
        let inst = DsfmInstance::new(
            4,
            vec![(
                vec![0, 1, 2, 3],
                GscbFunction::new(vec![0.0, 3.0, 4.0, 3.0, 0.0]).unwrap(),
            )],
        )
        .unwrap();
        let (s, v) = brute_min_f(&inst).unwrap();
        assert_eq!(v, 0.0);
        assert!(s.is_empty() || s.len() == 4);
    }

    #[test]
    fn brute_min_refuses_large_ground_sets() {
        let inst = DsfmInstance::new(
            23,
            vec![(vec![0], GscbFunction::new(vec![0.0, 1.0]).unwrap())],
        )
        .unwrap();
        assert!(matches!(brute_min_f(&inst), Err(Error::TooLarge(_))));
    }

    #[test]
    fn dp_examples() {
        let linear = ScbFunction::new((0..=6).map(|i| i as f64).collect()).unwrap();
        assert_eq!(min_cover_size_dp_scb(&linear, 0.0).unwrap(), 1);

        // Clique k = 4: min(3x, 4) covers both points with one positive line.
        let clique = ScbFunction::new(vec![0.0, 3.0, 4.0]).unwrap();
        assert_eq!(min_cover_size_dp_scb(&clique, 0.0).unwrap(), 1);

        let sqrt = ScbFunction::new((0..=10).map(|i| (i as f64).sqrt()).collect()).unwrap();
        let dp = min_cover_size_dp_scb(&sqrt, 0.05).unwrap();
        let greedy = plcover::find_best_cover(&sqrt, 0.05).unwrap().positive_pieces();
        assert_eq!(dp, greedy);
    }

    #[test]
    fn dp_refuses_large_domains() {
        let w = ScbFunction::new((0..=21).map(|i| i as f64).collect()).unwrap();
        assert!(matches!(min_cover_size_dp_scb(&w, 0.0), Err(Error::TooLarge(_))));
    }

    #[test]
    fn gscb_dp_matches_greedy_cover() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let k = rng.gen_range(1..=9);
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
            let f = GscbFunction::new(w).unwrap();
            for eps in [0.0, 0.2, 1.0] {
                let greedy = plcover::gscb_cover(&f, eps).unwrap().lines.len();
                let dp = min_cover_size_dp_gscb(&f, eps).unwrap();
                assert_eq!(greedy, dp, "w={:?} eps={eps}", f.values());
            }
        }
    }

    #[test]
    fn aux_mincut_certifies_cb_formula() {
        let p = CcbParams::new(vec![1.0], vec![2.0]).unwrap();
        let members: Vec<usize> = (0..5).collect();
        let frag = expand_ccb(&members, &p);
        let s: BTreeSet<usize> = BTreeSet::from([0]);
        assert_eq!(brute_aux_mincut(&frag, &s).unwrap(), 1.0);
        assert_eq!(augmented_cut_cb(&p, 5, 1), 1.0);
    }

    #[test]
    fn aux_mincut_certifies_acb_formula() {
        let p = KcgParams::new(0.0, 0.0, vec![1.0], vec![2.0], 5).unwrap();
        let members: Vec<usize> = (0..5).collect();
        let frag = expand_kcg(&members, &p);
        let s: BTreeSet<usize> = BTreeSet::from([0]);
        assert_eq!(brute_aux_mincut(&frag, &s).unwrap(), 3.0);
        assert_eq!(augmented_cut_acb(&p, 5, 1), 3.0);
    }

    #[test]
    fn aux_mincut_gadgets_minimize_independently() {
        let p = CcbParams::new(vec![2.0, 1.0], vec![1.0, 2.0]).unwrap();
        let members: Vec<usize> = (0..4).collect();
        let frag = expand_ccb(&members, &p);
        for i in 0..=4usize {
            let s: BTreeSet<usize> = (0..i).collect();
            let split = brute_aux_mincut(&frag, &s).unwrap();
            let single: f64 = p
                .a
                .iter()
                .zip(p.b.iter())
                .map(|(a, b)| {
                    let frag_j = expand_ccb(
                        &members,
                        &CcbParams::new(vec![*a], vec![*b]).unwrap(),
                    );
                    brute_aux_mincut(&frag_j, &s).unwrap()
                })
                .sum();
            assert!((split - single).abs() < 1e-12);
        }
    }

    #[test]
    fn sandwich_detects_corruption() {
        use crate::reduce::{build_sparsifier, EdgeGadget, Hyperedge};
        let h = Hypergraph::new(
            4,
            vec![Hyperedge::Symmetric {
                members: vec![0, 1, 2, 3],
                spec: SplittingSpec::unweighted(Family::Clique).unwrap(),
            }],
        )
        .unwrap();
        let g = build_sparsifier(&h, 0.0).unwrap();
        assert!(brute_cut_sandwich(&h, &g, 0.0).is_ok());
        let mut bad = g.clone();
        if let EdgeGadget::Ccb { params, .. } = &mut bad.gadgets[0] {
            params.a[0] *= 0.5;
        }
        assert!(brute_cut_sandwich(&h, &bad, 0.0).is_err());
    }
}
