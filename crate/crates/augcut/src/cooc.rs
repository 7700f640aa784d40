//! Implicit sparsification of co-occurrence graphs.
//!
//! A co-occurrence instance is a collection of weighted node sets; its graph
//! is the union of the induced weighted cliques, with cut function
//! `sum_c w_c · |S ∩ c| · |c \ S|`. Building that graph costs
//! `sum_c |c|^2` edges. [`sparsify_cooc`] never materializes it: each set is
//! replaced by the tangent-line clique cover's CB-gadgets, touching only
//! `sum_c J_c (2|c|+1)` arcs.

use std::collections::{BTreeSet, HashMap};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::plcover::{self, PlCover};
use crate::reduce::{AugmentedGraph, EdgeGadget};
use crate::{gadget, Error, Result};

#[derive(Debug, Clone)]
pub struct CoocSet {
    pub members: Vec<usize>,
    pub weight: f64,
}

#[derive(Debug, Clone)]
pub struct CoocInstance {
    pub n: usize,
    pub sets: Vec<CoocSet>,
}

impl CoocInstance {
    pub fn new(n: usize, sets: Vec<CoocSet>) -> Result<Self> {
        for (idx, c) in sets.iter().enumerate() {
            if c.members.is_empty() {
                return Err(Error::Domain(format!("set {idx} is empty")));
            }
            if !(c.weight > 0.0) {
                return Err(Error::Domain(format!("set {idx}: weight must be positive")));
            }
            let mut seen = BTreeSet::new();
            for &v in &c.members {
                if v >= n {
                    return Err(Error::Domain(format!("set {idx}: node {v} out of range")));
                }
                if !seen.insert(v) {
                    return Err(Error::Domain(format!("set {idx}: duplicate node {v}")));
                }
            }
        }
        Ok(CoocInstance { n, sets })
    }

    pub fn sum_sizes(&self) -> usize {
        self.sets.iter().map(|c| c.members.len()).sum()
    }

    /// `sum_c |c|^2` — the cost of materializing the clique expansion.
    pub fn sum_sq_sizes(&self) -> usize {
        self.sets.iter().map(|c| c.members.len() * c.members.len()).sum()
    }

    /// Text format: `n m`, then `w_c k v1 ... vk` per set.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, header) =
            lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(Error::Parse { line: ln + 1, msg: "expected `n m`".into() });
        }
        let n: usize = head[0]
            .parse()
            .map_err(|_| Error::Parse { line: ln + 1, msg: format!("bad n `{}`", head[0]) })?;
        let m: usize = head[1]
            .parse()
            .map_err(|_| Error::Parse { line: ln + 1, msg: format!("bad m `{}`", head[1]) })?;
        let mut sets = Vec::with_capacity(m);
        for (ln, raw) in lines {
            let line = ln + 1;
            let f: Vec<&str> = raw.split_whitespace().collect();
            if f.len() < 2 {
                return Err(Error::Parse { line, msg: "expected `w k v1 ... vk`".into() });
            }
            let weight: f64 = f[0]
                .parse()
                .map_err(|_| Error::Parse { line, msg: format!("bad weight `{}`", f[0]) })?;
            let k: usize = f[1]
                .parse()
                .map_err(|_| Error::Parse { line, msg: format!("bad size `{}`", f[1]) })?;
            if f.len() != 2 + k {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {k} members, found {}", f.len() - 2),
                });
            }
            let members: Vec<usize> = f[2..]
                .iter()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse { line, msg: format!("bad node `{t}`") })
                })
                .collect::<Result<_>>()?;
            sets.push(CoocSet { members, weight });
        }
        if sets.len() != m {
            return Err(Error::Parse {
                line: sets.len() + 2,
                msg: format!("header announced {m} sets, found {}", sets.len()),
            });
        }
        CoocInstance::new(n, sets)
    }

    pub fn write_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.sets.len());
        for c in &self.sets {
            s.push_str(&format!("{} {}", c.weight, c.members.len()));
            for v in &c.members {
                s.push_str(&format!(" {v}"));
            }
            s.push('\n');
        }
        s
    }
}

/// Co-occurrence cut: `sum_c w_c · |S ∩ c| · |c \ S|`.
pub fn cooc_cut_value(inst: &CoocInstance, s: &BTreeSet<usize>) -> f64 {
    inst.sets
        .iter()
        .map(|c| {
            let inside = c.members.iter().filter(|v| s.contains(v)).count();
            c.weight * (inside * (c.members.len() - inside)) as f64
        })
        .sum()
}

/// Sparsifies the clique expansion without forming it: every set of size at
/// least 2 becomes the CB-gadgets of a tangent-line clique cover, scaled by
/// the set weight. Size-1 sets contribute nothing to any cut and are
/// skipped.
pub fn sparsify_cooc(inst: &CoocInstance, eps: f64) -> Result<AugmentedGraph> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let sizes: BTreeSet<usize> =
        inst.sets.iter().map(|c| c.members.len()).filter(|k| *k >= 2).collect();
    let covers: HashMap<usize, PlCover> = sizes
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| Ok((k, plcover::clique_cover(k, eps)?)))
        .collect::<Result<_>>()?;

    let mut g = AugmentedGraph::new(inst.n, eps);
    for (idx, c) in inst.sets.iter().enumerate() {
        let k = c.members.len();
        let params = if k < 2 {
            plcover::CcbParams::empty()
        } else {
            plcover::cover_to_ccb(&covers[&k])?.scaled(c.weight)
        };
        let frag = gadget::expand_ccb(&c.members, &params);
        g.push_fragment(idx, &frag);
        g.gadgets.push(EdgeGadget::Ccb { members: c.members.clone(), params });
    }
    Ok(g)
}

/// Samples a power-law co-occurrence instance: `m` sets whose sizes are
/// i.i.d. with `P[K = k] ∝ k^{-gamma}` on `[1, n]` (inverse-CDF over a
/// precomputed cumulative table), members uniform without replacement.
/// Deterministic for a fixed seed.
pub fn gen_powerlaw(n: usize, m: usize, gamma: f64, seed: u64) -> Result<CoocInstance> {
    if n == 0 || m == 0 {
        return Err(Error::Domain("n and m must be at least 1".into()));
    }
    if !(gamma > 1.0) {
        return Err(Error::Domain(format!("gamma must exceed 1, got {gamma}")));
    }
    let mut cdf = Vec::with_capacity(n);
    let mut acc = 0.0;
    for k in 1..=n {
        acc += (k as f64).powf(-gamma);
        cdf.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sets = Vec::with_capacity(m);
    for _ in 0..m {
        let u = rng.gen::<f64>() * total;
        let k = cdf.partition_point(|c| *c < u) + 1;
        let k = k.min(n);
        let mut members = rand::seq::index::sample(&mut rng, n, k).into_vec();
        members.sort_unstable();
        sets.push(CoocSet { members, weight: 1.0 });
    }
    CoocInstance::new(n, sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cut_value_single_set() {
        let inst = CoocInstance::new(
            4,
            vec![CoocSet { members: vec![0, 1, 2, 3], weight: 1.0 }],
        )
        .unwrap();
        assert_eq!(cooc_cut_value(&inst, &BTreeSet::from([0])), 3.0);
        assert_eq!(cooc_cut_value(&inst, &BTreeSet::new()), 0.0);
    }

    #[test]
    fn cut_value_matches_explicit_clique_expansion() {
        use rand::prelude::*;
        let inst = CoocInstance::new(
            6,
            vec![
                CoocSet { members: vec![0, 1, 2, 3], weight: 1.5 },
                CoocSet { members: vec![2, 3, 4, 5], weight: 0.5 },
            ],
        )
        .unwrap();
        // Explicit expansion: accumulate pairwise weights.
        let mut w = vec![vec![0.0; 6]; 6];
        for c in &inst.sets {
            for (i, &u) in c.members.iter().enumerate() {
                for &v in &c.members[i + 1..] {
                    w[u][v] += c.weight;
                    w[v][u] += c.weight;
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s: BTreeSet<usize> = (0..6).filter(|_| rng.gen_bool(0.5)).collect();
            let mut expect = 0.0;
            for u in 0..6 {
                for v in 0..6 {
                    if u < v && s.contains(&u) != s.contains(&v) {
                        expect += w[u][v];
                    }
                }
            }
            assert!((cooc_cut_value(&inst, &s) - expect).abs() < 1e-9, "S={s:?}");
        }
    }

    #[test]
    fn pair_sets_reduce_exactly() {
        let inst = CoocInstance::new(
            3,
            vec![
                CoocSet { members: vec![0, 1], weight: 2.0 },
                CoocSet { members: vec![1, 2], weight: 1.0 },
            ],
        )
        .unwrap();
        let g = sparsify_cooc(&inst, 0.5).unwrap();
        for mask in 0u32..8 {
            let s: BTreeSet<usize> = (0..3).filter(|v| mask & (1 << v) != 0).collect();
            let want = cooc_cut_value(&inst, &s);
            let got = g.augmented_cut(&s).unwrap();
            assert!((want - got).abs() < 1e-9, "S={s:?}");
        }
    }

    #[test]
    fn sparsifier_size_formulas() {
        let inst = gen_powerlaw(100, 60, 2.0, 9).unwrap();
        let g = sparsify_cooc(&inst, 0.25).unwrap();
        let orders = g.orders();
        let mut aux = 0usize;
        let mut arcs = 0usize;
        for (c, j) in inst.sets.iter().zip(orders.iter()) {
            let k = c.members.len();
            if k >= 2 {
                aux += 2 * j;
                arcs += j * (2 * k + 1);
            } else {
                assert_eq!(*j, 0);
            }
        }
        assert_eq!(g.aux_count, aux);
        assert_eq!(g.arcs.len(), arcs);
    }

    #[test]
    fn sandwich_on_sampled_cuts() {
        let inst = gen_powerlaw(120, 80, 2.2, 11).unwrap();
        let eps = 0.2;
        let g = sparsify_cooc(&inst, eps).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let s: BTreeSet<usize> = (0..inst.n).filter(|_| rng.gen_bool(0.5)).collect();
            let cut = cooc_cut_value(&inst, &s);
            let aug = g.augmented_cut(&s).unwrap();
            let scale = cut.max(1.0);
            assert!(aug >= cut - 1e-9 * scale);
            assert!(aug <= (1.0 + eps) * cut + 1e-9 * scale, "{aug} vs {cut}");
        }
    }

    #[test]
    fn generator_is_deterministic() {
        let a = gen_powerlaw(50, 30, 2.5, 42).unwrap();
        let b = gen_powerlaw(50, 30, 2.5, 42).unwrap();
        for (x, y) in a.sets.iter().zip(b.sets.iter()) {
            assert_eq!(x.members, y.members);
        }
        let c = gen_powerlaw(50, 30, 2.5, 43).unwrap();
        assert!(a.sets.iter().zip(c.sets.iter()).any(|(x, y)| x.members != y.members));
    }

    #[test]
    fn steep_exponent_gives_singletons() {
        let inst = gen_powerlaw(100, 200, 50.0, 1).unwrap();
        let singletons = inst.sets.iter().filter(|c| c.members.len() == 1).count();
        assert!(singletons >= 199, "got {singletons}");
    }

    #[test]
    fn size_frequencies_match_power_law() {
        let n = 50usize;
        let gamma = 2.5;
        let inst = gen_powerlaw(n, 100_000, gamma, 1234).unwrap();
        let mut counts = vec![0usize; n + 1];
        for c in &inst.sets {
            counts[c.members.len()] += 1;
        }
        let z: f64 = (1..=n).map(|k| (k as f64).powf(-gamma)).sum();
        // Chi-square over bins with expected count >= 5; tail merged.
        let total = 100_000.0;
        let mut chi2 = 0.0;
        let mut tail_obs = 0.0;
        let mut tail_exp = 0.0;
        let mut bins = 0usize;
        for k in 1..=n {
            let exp = total * (k as f64).powf(-gamma) / z;
            if exp >= 5.0 {
                let obs = counts[k] as f64;
                chi2 += (obs - exp) * (obs - exp) / exp;
                bins += 1;
            } else {
                tail_obs += counts[k] as f64;
                tail_exp += exp;
            }
        }
        if tail_exp > 0.0 {
            chi2 += (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
            bins += 1;
        }
        // 99.9th percentile of chi2 with ~17 dof is ~40; anything sane is
        // far below.
        assert!(chi2 < 45.0, "chi2 = {chi2} over {bins} bins");
    }

    #[test]
    fn text_round_trip() {
        let inst = gen_powerlaw(20, 10, 2.0, 5).unwrap();
        let text = inst.write_text();
        let back = CoocInstance::parse_text(&text).unwrap();
        assert_eq!(text, back.write_text());
    }
}
