//! Assembling whole hypergraphs into augmented sparsifiers and s-t flow
//! networks.
//!
//! Every hyperedge is covered by a piecewise-linear approximation of its
//! splitting penalties, the cover is converted into gadget weights, and the
//! gadgets are expanded into arcs over a deterministic node numbering:
//! originals `0..n`, then auxiliaries in hyperedge order. The per-edge
//! gadget weights are retained so the augmented cut of any node set can be
//! evaluated in closed form, without a flow solve.
//!
//! Covers are cached by the bit pattern of the unit-weight penalty sequence
//! (plus `eps`); weight multipliers are applied afterwards by scaling the
//! gadget weight vectors, since the cover shape is scale-invariant. Unique
//! covers are computed in parallel; assembly order stays deterministic.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::flownet::FlowNetwork;
use crate::gadget::{self, GraphFragment, NodeRef};
use crate::plcover::{self, CcbParams, KcgParams, PlCover};
use crate::splitting::{GscbFunction, SplittingSpec};
use crate::{Error, Result};

/// Role of a node in an augmented graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    Original(usize),
    Auxiliary { hyperedge: usize, local: usize },
}

/// One hyperedge: either a symmetric catalog spec or an explicit
/// generalized penalty sequence over `0..=|e|`.
#[derive(Debug, Clone)]
pub enum Hyperedge {
    Symmetric { members: Vec<usize>, spec: SplittingSpec },
    Asymmetric { members: Vec<usize>, f: GscbFunction },
}

impl Hyperedge {
    pub fn members(&self) -> &[usize] {
        match self {
            Hyperedge::Symmetric { members, .. } => members,
            Hyperedge::Asymmetric { members, .. } => members,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Hypergraph {
    pub n: usize,
    pub edges: Vec<Hyperedge>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<Hyperedge>) -> Result<Self> {
        for (idx, e) in edges.iter().enumerate() {
            let members = e.members();
            if members.is_empty() {
                return Err(Error::Domain(format!("hyperedge {idx} is empty")));
            }
            let mut seen = BTreeSet::new();
            for &v in members {
                if v >= n {
                    return Err(Error::Domain(format!("hyperedge {idx}: node {v} out of range")));
                }
                if !seen.insert(v) {
                    return Err(Error::Domain(format!("hyperedge {idx}: duplicate node {v}")));
                }
            }
            if let Hyperedge::Asymmetric { members, f } = e {
                if f.k() != members.len() {
                    return Err(Error::Domain(format!(
                        "hyperedge {idx}: penalty list covers k = {}, edge has {} members",
                        f.k(),
                        members.len()
                    )));
                }
            }
        }
        Ok(Hypergraph { n, edges })
    }

    /// Generalized cut value: the sum of per-edge penalties at `|S ∩ e|`.
    pub fn cut_value(&self, s: &BTreeSet<usize>) -> Result<f64> {
        if let Some(&v) = s.iter().next_back() {
            if v >= self.n {
                return Err(Error::Domain(format!("node {v} out of range")));
            }
        }
        let mut total = 0.0;
        for e in &self.edges {
            let i = e.members().iter().filter(|v| s.contains(v)).count();
            total += match e {
                Hyperedge::Symmetric { members, spec } => spec.evaluate(members.len(), i)?,
                Hyperedge::Asymmetric { f, .. } => f.values()[i],
            };
        }
        Ok(total)
    }

    pub fn sum_sizes(&self) -> usize {
        self.edges.iter().map(|e| e.members().len()).sum()
    }

    /// Text format: `n R` on the first line, then one hyperedge per line,
    /// `<spec tokens> : <v1> ... <vk>` where the spec part is either the
    /// symmetric grammar or `gscb <w0> ... <wk>`.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, header) =
            lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 2 {
            return Err(Error::Parse { line: ln + 1, msg: "expected `n R`".into() });
        }
        let n: usize = head[0]
            .parse()
            .map_err(|_| Error::Parse { line: ln + 1, msg: format!("bad n `{}`", head[0]) })?;
        let r: usize = head[1]
            .parse()
            .map_err(|_| Error::Parse { line: ln + 1, msg: format!("bad R `{}`", head[1]) })?;
        let mut edges = Vec::with_capacity(r);
        for (ln, raw) in lines {
            let line_no = ln + 1;
            let (spec_part, member_part) = raw.split_once(':').ok_or(Error::Parse {
                line: line_no,
                msg: "expected `<spec> : <members>`".into(),
            })?;
            let members: Vec<usize> = member_part
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse { line: line_no, msg: format!("bad node `{t}`") })
                })
                .collect::<Result<_>>()?;
            let toks: Vec<&str> = spec_part.split_whitespace().collect();
            let edge = if toks.first() == Some(&"gscb") {
                let w: Vec<f64> = toks[1..]
                    .iter()
                    .map(|t| {
                        t.parse::<f64>().map_err(|_| Error::Parse {
                            line: line_no,
                            msg: format!("bad penalty `{t}`"),
                        })
                    })
                    .collect::<Result<_>>()?;
                if w.len() != members.len() + 1 {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!(
                            "gscb needs {} penalties for {} members, got {}",
                            members.len() + 1,
                            members.len(),
                            w.len()
                        ),
                    });
                }
                let f = GscbFunction::new(w)
                    .map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
                Hyperedge::Asymmetric { members, f }
            } else {
                let spec = SplittingSpec::parse_tokens(&toks)
                    .map_err(|msg| Error::Parse { line: line_no, msg })?;
                Hyperedge::Symmetric { members, spec }
            };
            edges.push(edge);
        }
        if edges.len() != r {
            return Err(Error::Parse {
                line: edges.len() + 2,
                msg: format!("header announced {r} hyperedges, found {}", edges.len()),
            });
        }
        Hypergraph::new(n, edges)
    }

    pub fn write_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            match e {
                Hyperedge::Symmetric { members, spec } => {
                    s.push_str(&spec.to_tokens());
                    s.push_str(" :");
                    for v in members {
                        s.push_str(&format!(" {v}"));
                    }
                }
                Hyperedge::Asymmetric { members, f } => {
                    s.push_str("gscb");
                    for w in f.values() {
                        s.push_str(&format!(" {w}"));
                    }
                    s.push_str(" :");
                    for v in members {
                        s.push_str(&format!(" {v}"));
                    }
                }
            }
            s.push('\n');
        }
        s
    }
}

/// Gadget weights retained per hyperedge for closed-form cut evaluation.
#[derive(Debug, Clone)]
pub enum EdgeGadget {
    Ccb { members: Vec<usize>, params: CcbParams },
    Kcg { members: Vec<usize>, params: KcgParams },
}

impl EdgeGadget {
    pub fn order(&self) -> usize {
        match self {
            EdgeGadget::Ccb { params, .. } => params.order(),
            EdgeGadget::Kcg { params, .. } => params.order(),
        }
    }
}

/// A directed graph over originals plus auxiliaries, with aggregated
/// terminal capacities for the s-t case and the per-edge gadget weights.
#[derive(Debug, Clone)]
pub struct AugmentedGraph {
    pub n: usize,
    pub aux_count: usize,
    /// Arcs among originals and auxiliaries (global ids `0..n+aux_count`).
    pub arcs: Vec<(usize, usize, f64)>,
    /// Source -> original capacities, summed across hyperedges.
    pub source_caps: Vec<f64>,
    /// Original -> sink capacities, summed across hyperedges.
    pub sink_caps: Vec<f64>,
    pub roles: Vec<NodeRole>,
    pub gadgets: Vec<EdgeGadget>,
    pub epsilon: f64,
}

impl AugmentedGraph {
    pub(crate) fn new(n: usize, epsilon: f64) -> Self {
        AugmentedGraph {
            n,
            aux_count: 0,
            arcs: Vec::new(),
            source_caps: vec![0.0; n],
            sink_caps: vec![0.0; n],
            roles: (0..n).map(NodeRole::Original).collect(),
            gadgets: Vec::new(),
            epsilon,
        }
    }

    pub(crate) fn push_fragment(&mut self, edge_idx: usize, frag: &GraphFragment) {
        let base = self.n + self.aux_count;
        for local in 0..frag.aux_count {
            self.roles.push(NodeRole::Auxiliary { hyperedge: edge_idx, local });
        }
        self.aux_count += frag.aux_count;
        for (t, h, c) in &frag.arcs {
            match (t, h) {
                (NodeRef::Source, NodeRef::Member(v)) => self.source_caps[*v] += c,
                (NodeRef::Member(v), NodeRef::Sink) => self.sink_caps[*v] += c,
                _ => {
                    let tid = Self::global_id(*t, base);
                    let hid = Self::global_id(*h, base);
                    self.arcs.push((tid, hid, *c));
                }
            }
        }
    }

    fn global_id(r: NodeRef, base: usize) -> usize {
        match r {
            NodeRef::Member(v) => v,
            NodeRef::Aux(j) => base + j,
            NodeRef::Source | NodeRef::Sink => unreachable!("terminal arcs handled separately"),
        }
    }

    /// Nodes including terminals when any terminal capacity is present.
    pub fn node_count(&self) -> usize {
        self.n + self.aux_count
    }

    /// Internal arcs plus nonzero terminal arcs.
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
            + self.source_caps.iter().filter(|c| **c > 0.0).count()
            + self.sink_caps.iter().filter(|c| **c > 0.0).count()
    }

    /// Total capacity mass, used to size seed capacities for pinning.
    pub fn capacity_mass(&self) -> f64 {
        self.arcs.iter().map(|(_, _, c)| c).sum::<f64>()
            + self.source_caps.iter().sum::<f64>()
            + self.sink_caps.iter().sum::<f64>()
    }

    /// Closed-form augmented cut of a set of original nodes: the sum over
    /// hyperedges of the gadget cut at `|S ∩ e|`, which equals the minimum
    /// directed cut over all auxiliary placements.
    pub fn augmented_cut(&self, s: &BTreeSet<usize>) -> Result<f64> {
        if let Some(&v) = s.iter().next_back() {
            if v >= self.n {
                return Err(Error::Domain(format!("node {v} is not an original node")));
            }
        }
        let mut total = 0.0;
        for g in &self.gadgets {
            total += match g {
                EdgeGadget::Ccb { members, params } => {
                    let i = members.iter().filter(|v| s.contains(v)).count();
                    gadget::augmented_cut_cb(params, members.len(), i)
                }
                EdgeGadget::Kcg { members, params } => {
                    let i = members.iter().filter(|v| s.contains(v)).count();
                    gadget::augmented_cut_acb(params, members.len(), i)
                }
            };
        }
        Ok(total)
    }

    /// Materializes a flow network with appended terminal nodes
    /// (`source = n + aux`, `sink = n + aux + 1`), carrying the aggregated
    /// terminal capacities plus `pin_cap` arcs pinning the given originals
    /// to a side.
    pub fn to_st_network(
        &self,
        pin_source: &BTreeSet<usize>,
        pin_sink: &BTreeSet<usize>,
        pin_cap: f64,
    ) -> Result<FlowNetwork> {
        let inner = self.n + self.aux_count;
        let source = inner;
        let sink = inner + 1;
        let mut net = FlowNetwork::new(inner + 2, source, sink)?;
        for (t, h, c) in &self.arcs {
            net.add_arc(*t, *h, *c)?;
        }
        for (v, c) in self.source_caps.iter().enumerate() {
            if *c > 0.0 {
                net.add_arc(source, v, *c)?;
            }
        }
        for (v, c) in self.sink_caps.iter().enumerate() {
            if *c > 0.0 {
                net.add_arc(v, sink, *c)?;
            }
        }
        for &v in pin_source {
            if v >= self.n {
                return Err(Error::Domain(format!("pinned node {v} is not original")));
            }
            net.add_arc(source, v, pin_cap)?;
        }
        for &v in pin_sink {
            if v >= self.n {
                return Err(Error::Domain(format!("pinned node {v} is not original")));
            }
            net.add_arc(v, sink, pin_cap)?;
        }
        Ok(net)
    }

    /// Network in which `s` is forced to the source side and the remaining
    /// originals to the sink side; its min cut equals `augmented_cut(s)`.
    pub fn st_network_forcing(&self, s: &BTreeSet<usize>) -> Result<FlowNetwork> {
        let complement: BTreeSet<usize> = (0..self.n).filter(|v| !s.contains(v)).collect();
        let pin = 1e6 * self.capacity_mass().max(1.0);
        self.to_st_network(s, &complement, pin)
    }

    /// Gadget orders per hyperedge.
    pub fn orders(&self) -> Vec<usize> {
        self.gadgets.iter().map(|g| g.order()).collect()
    }
}

fn key_of(values: &[f64], eps: f64) -> (Vec<u64>, u64) {
    (values.iter().map(|v| v.to_bits()).collect(), eps.to_bits())
}

/// Builds an augmented cut sparsifier for a hypergraph whose hyperedges all
/// carry symmetric splitting specs.
///
/// Each hyperedge is covered at weight 1, the cover is converted to
/// CB-gadget weights, the weights are scaled by the spec weight, and the
/// gadgets are expanded. Hyperedges of size 1 cannot be cut and are skipped.
pub fn build_sparsifier(h: &Hypergraph, eps: f64) -> Result<AugmentedGraph> {
    if !(eps >= 0.0) {
        return Err(Error::Domain(format!("eps must be nonnegative, got {eps}")));
    }
    // Unit-weight penalty sequences per edge.
    let mut unit_w: Vec<Option<Vec<f64>>> = Vec::with_capacity(h.edges.len());
    let mut weights: Vec<f64> = Vec::with_capacity(h.edges.len());
    for e in &h.edges {
        match e {
            Hyperedge::Symmetric { members, spec } => {
                let scb = spec.unit().materialize_scb(members.len())?;
                weights.push(spec.weight);
                if members.len() < 2 || scb.is_zero() || spec.weight == 0.0 {
                    unit_w.push(None);
                } else {
                    unit_w.push(Some(scb.values().to_vec()));
                }
            }
            Hyperedge::Asymmetric { .. } => {
                return Err(Error::Domain(
                    "build_sparsifier requires symmetric splitting specs".into(),
                ));
            }
        }
    }
    let covers = compute_covers(&unit_w, eps, |w| {
        plcover::find_best_cover(&crate::splitting::ScbFunction::new(w.to_vec())?, eps)
    })?;

    let mut g = AugmentedGraph::new(h.n, eps);
    for (idx, e) in h.edges.iter().enumerate() {
        let members = e.members();
        let params = match &unit_w[idx] {
            None => CcbParams::empty(),
            Some(w) => {
                let cover = &covers[&key_of(w, eps)];
                plcover::cover_to_ccb(cover)?.scaled(weights[idx])
            }
        };
        let frag = gadget::expand_ccb(members, &params);
        g.push_fragment(idx, &frag);
        g.gadgets.push(EdgeGadget::Ccb { members: members.to_vec(), params });
    }
    Ok(g)
}

/// Builds the s-t reduction of a hypergraph with generalized (possibly
/// asymmetric, endpoint-nonzero) penalties. Symmetric specs are accepted and
/// mirrored over `0..=k` first. Terminal capacities aggregate by summation
/// across hyperedges sharing a node.
pub fn build_st_network(h: &Hypergraph, eps: f64) -> Result<AugmentedGraph> {
    if !(eps >= 0.0) {
        return Err(Error::Domain(format!("eps must be nonnegative, got {eps}")));
    }
    let mut unit_w: Vec<Option<Vec<f64>>> = Vec::with_capacity(h.edges.len());
    let mut weights: Vec<f64> = Vec::with_capacity(h.edges.len());
    for e in &h.edges {
        match e {
            Hyperedge::Symmetric { members, spec } => {
                let full = spec.unit().materialize_full(members.len())?;
                weights.push(spec.weight);
                if full.is_zero() || spec.weight == 0.0 {
                    unit_w.push(None);
                } else {
                    unit_w.push(Some(full.values().to_vec()));
                }
            }
            Hyperedge::Asymmetric { f, .. } => {
                weights.push(1.0);
                if f.is_zero() {
                    unit_w.push(None);
                } else {
                    unit_w.push(Some(f.values().to_vec()));
                }
            }
        }
    }
    let covers = compute_covers(&unit_w, eps, |w| {
        plcover::gscb_cover(&GscbFunction::new(w.to_vec())?, eps)
    })?;

    let mut g = AugmentedGraph::new(h.n, eps);
    for (idx, e) in h.edges.iter().enumerate() {
        let members = e.members();
        let params = match &unit_w[idx] {
            None => KcgParams::empty(),
            Some(w) => {
                let cover = &covers[&key_of(w, eps)];
                plcover::cover_to_kcg(cover, members.len())?.scaled(weights[idx])
            }
        };
        let frag = gadget::expand_kcg(members, &params);
        g.push_fragment(idx, &frag);
        g.gadgets.push(EdgeGadget::Kcg { members: members.to_vec(), params });
    }
    Ok(g)
}

/// Computes the distinct covers among `unit_w` in parallel and returns them
/// keyed by penalty bit pattern. Deduplication keeps one cover per identical
/// penalty sequence, which is what makes grid- and co-occurrence-style
/// instances cheap.
fn compute_covers<F>(
    unit_w: &[Option<Vec<f64>>],
    eps: f64,
    cover_fn: F,
) -> Result<HashMap<(Vec<u64>, u64), PlCover>>
where
    F: Fn(&[f64]) -> Result<PlCover> + Sync,
{
    let mut unique: Vec<(&Vec<f64>, (Vec<u64>, u64))> = Vec::new();
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    for w in unit_w.iter().flatten() {
        let key = key_of(w, eps);
        if seen.insert(key.0.clone()) {
            unique.push((w, key));
        }
    }
    unique
        .into_par_iter()
        .map(|(w, key)| Ok((key, cover_fn(w)?)))
        .collect::<Result<HashMap<_, _>>>()
}
