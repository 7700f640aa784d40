//! Expansion of gadget weight vectors into concrete directed graph
//! fragments, plus closed-form evaluation of their cut contribution.
//!
//! A CB-gadget on a hyperedge `e` with parameters `(a, b)` adds two
//! auxiliary nodes `e'`, `e''`, arcs `v -> e'` and `e'' -> v` of weight `a`
//! for every member `v`, and the middle arc `e' -> e''` of weight `a·b`.
//! Minimizing over auxiliary placements, the gadget charges
//! `a · min(|A|, |e\A|, b)` to a split that puts `A` on the source side.
//! The asymmetric single-auxiliary variant (ACB-gadget) charges
//! `a · min(i(k-b), (k-i)b)` and is combined with per-node terminal arcs to
//! realize penalties that are nonzero on uncut configurations.

use crate::plcover::{CcbParams, KcgParams};

/// Node reference local to one fragment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRef {
    /// An original node, by its global id.
    Member(usize),
    /// A fragment-local auxiliary node.
    Aux(usize),
    Source,
    Sink,
}

/// A bundle of arcs produced for one hyperedge.
#[derive(Debug, Clone, Default)]
pub struct GraphFragment {
    pub aux_count: usize,
    pub arcs: Vec<(NodeRef, NodeRef, f64)>,
}

impl GraphFragment {
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }
}

/// Expands a combination of CB-gadgets over `members`.
///
/// Gadget `j` uses auxiliaries `2j` (entry) and `2j + 1` (exit); a fragment
/// of order `J` on `k` members has `2J` auxiliaries and `J(2k+1)` arcs.
/// Hyperedges with fewer than two members cannot be cut and yield an empty
/// fragment.
pub fn expand_ccb(members: &[usize], p: &CcbParams) -> GraphFragment {
    let k = members.len();
    if k < 2 {
        return GraphFragment::default();
    }
    let mut frag = GraphFragment { aux_count: 2 * p.order(), arcs: Vec::new() };
    frag.arcs.reserve(p.order() * (2 * k + 1));
    for (j, (a, b)) in p.a.iter().zip(p.b.iter()).enumerate() {
        let entry = NodeRef::Aux(2 * j);
        let exit = NodeRef::Aux(2 * j + 1);
        for &v in members {
            frag.arcs.push((NodeRef::Member(v), entry, *a));
            frag.arcs.push((exit, NodeRef::Member(v), *a));
        }
        frag.arcs.push((entry, exit, a * b));
    }
    frag
}

/// Expands a combination of ACB-gadgets plus terminal arcs over `members`.
///
/// Gadget `j` uses auxiliary `j` with arcs `v -> aux` of weight `a_j(k-b_j)`
/// and `aux -> v` of weight `a_j·b_j`. Every member additionally gets
/// `SOURCE -> v` of weight `z0` and `v -> SINK` of weight `zk`; zero-weight
/// terminal arcs are omitted.
pub fn expand_kcg(members: &[usize], p: &KcgParams) -> GraphFragment {
    let k = members.len() as f64;
    let mut frag = GraphFragment { aux_count: p.order(), arcs: Vec::new() };
    for (j, (a, b)) in p.a.iter().zip(p.b.iter()).enumerate() {
        let aux = NodeRef::Aux(j);
        let into = a * (k - b);
        let out = a * b;
        for &v in members {
            frag.arcs.push((NodeRef::Member(v), aux, into));
            frag.arcs.push((aux, NodeRef::Member(v), out));
        }
    }
    for &v in members {
        if p.z0 > 0.0 {
            frag.arcs.push((NodeRef::Source, NodeRef::Member(v), p.z0));
        }
        if p.zk > 0.0 {
            frag.arcs.push((NodeRef::Member(v), NodeRef::Sink, p.zk));
        }
    }
    frag
}

/// Cut charged by a CB-gadget combination when `i` of `k` members sit on the
/// source side: `sum_j a_j · min(i, k-i, b_j)`.
pub fn augmented_cut_cb(p: &CcbParams, k: usize, i: usize) -> f64 {
    debug_assert!(i <= k);
    let m = (i.min(k - i)) as f64;
    p.a.iter().zip(p.b.iter()).map(|(a, b)| a * m.min(*b)).sum()
}

/// Cut charged by an ACB-gadget combination with terminal arcs:
/// `z0(k-i) + zk·i + sum_j a_j · min(i(k-b_j), (k-i)b_j)`.
pub fn augmented_cut_acb(p: &KcgParams, k: usize, i: usize) -> f64 {
    debug_assert!(i <= k);
    crate::plcover::kcg_evaluate(p, i, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ccb_expansion_counts() {
        let p = CcbParams::new(vec![2.0], vec![1.0]).unwrap();
        let frag = expand_ccb(&[0, 1, 2], &p);
        assert_eq!(frag.aux_count, 2);
        assert_eq!(frag.arc_count(), 7);
        let middle: Vec<_> = frag
            .arcs
            .iter()
            .filter(|(t, h, _)| matches!(t, NodeRef::Aux(_)) && matches!(h, NodeRef::Aux(_)))
            .collect();
        assert_eq!(middle.len(), 1);
        assert_eq!(middle[0].2, 2.0);

        let frag = expand_ccb(&[0, 1, 2], &CcbParams::empty());
        assert_eq!(frag.aux_count, 0);
        assert_eq!(frag.arc_count(), 0);

        let p = CcbParams::new(vec![2.0, 1.0], vec![1.0, 2.0]).unwrap();
        let frag = expand_ccb(&[4, 5, 6, 7], &p);
        assert_eq!(frag.aux_count, 4);
        assert_eq!(frag.arc_count(), 18);
        assert!(frag.arcs.iter().all(|(_, _, c)| *c > 0.0));
    }

    #[test]
    fn singleton_edge_expands_empty() {
        let p = CcbParams::new(vec![1.0], vec![1.0]).unwrap();
        assert_eq!(expand_ccb(&[3], &p).arc_count(), 0);
    }

    #[test]
    fn kcg_expansion_counts() {
        let p = KcgParams::new(0.0, 0.0, vec![1.0], vec![1.0], 4).unwrap();
        let frag = expand_kcg(&[0, 1, 2, 3], &p);
        assert_eq!(frag.aux_count, 1);
        assert_eq!(frag.arc_count(), 8);
        for (t, h, c) in &frag.arcs {
            match (t, h) {
                (NodeRef::Member(_), NodeRef::Aux(_)) => assert_eq!(*c, 3.0),
                (NodeRef::Aux(_), NodeRef::Member(_)) => assert_eq!(*c, 1.0),
                other => panic!("unexpected arc {other:?}"),
            }
        }

        let p = KcgParams::new(0.5, 0.0, Vec::new(), Vec::new(), 4).unwrap();
        let frag = expand_kcg(&[0, 1, 2, 3], &p);
        assert_eq!(frag.aux_count, 0);
        assert_eq!(frag.arc_count(), 4);
        assert!(frag
            .arcs
            .iter()
            .all(|(t, _, c)| *t == NodeRef::Source && *c == 0.5));
    }

    #[test]
    fn cb_cut_formula() {
        let p = CcbParams::new(vec![1.0], vec![2.0]).unwrap();
        assert_eq!(augmented_cut_cb(&p, 10, 4), 2.0);
        assert_eq!(augmented_cut_cb(&p, 10, 0), 0.0);
        let p = CcbParams::new(vec![2.0, 1.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(augmented_cut_cb(&p, 4, 1), 3.0);
    }

    #[test]
    fn acb_cut_formula() {
        let p = KcgParams::new(0.0, 0.0, vec![1.0], vec![2.0], 5).unwrap();
        assert_eq!(augmented_cut_acb(&p, 5, 1), 3.0);
        let p = KcgParams::new(1.0, 0.0, Vec::new(), Vec::new(), 3).unwrap();
        assert_eq!(augmented_cut_acb(&p, 3, 3), 0.0);
    }
}
