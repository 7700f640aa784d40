//! Directed flow networks and an exact blocking-flow max-flow solver.
//!
//! Capacities are `f64`; residual capacities below `1e-12` times the largest
//! capacity count as saturated, which keeps the phase structure terminating
//! for irrational gadget weights. Parallel arcs are merged by capacity
//! summation at construction, which leaves every cut value unchanged.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::{Error, Result};

/// An immutable directed flow network. Solving never mutates the network, so
/// one instance may be solved from several threads at once.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    node_count: usize,
    source: usize,
    sink: usize,
    arcs: Vec<(usize, usize, f64)>,
    merge: HashMap<(usize, usize), usize>,
}

/// Result of a max-flow computation. `source_side` is the set of nodes
/// reachable from the source in the final residual graph, so it is the
/// minimal minimum cut and is deterministic for a fixed input.
#[derive(Debug, Clone)]
pub struct MinCutResult {
    pub flow_value: f64,
    pub source_side: Vec<bool>,
}

impl MinCutResult {
    pub fn source_side_set(&self) -> BTreeSet<usize> {
        self.source_side
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.then_some(i))
            .collect()
    }
}

impl FlowNetwork {
    pub fn new(node_count: usize, source: usize, sink: usize) -> Result<Self> {
        if source >= node_count || sink >= node_count {
            return Err(Error::Domain("terminal id out of range".into()));
        }
        if source == sink {
            return Err(Error::Domain("source and sink must differ".into()));
        }
        Ok(FlowNetwork { node_count, source, sink, arcs: Vec::new(), merge: HashMap::new() })
    }

    pub fn add_arc(&mut self, tail: usize, head: usize, capacity: f64) -> Result<()> {
        if tail >= self.node_count || head >= self.node_count {
            return Err(Error::Domain(format!("arc ({tail}, {head}) out of range")));
        }
        if !(capacity >= 0.0) || !capacity.is_finite() {
            return Err(Error::Domain(format!("capacity {capacity} must be finite and >= 0")));
        }
        if tail == head || capacity == 0.0 {
            return Ok(());
        }
        match self.merge.entry((tail, head)) {
            std::collections::hash_map::Entry::Occupied(e) => {
                self.arcs[*e.get()].2 += capacity;
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(self.arcs.len());
                self.arcs.push((tail, head, capacity));
            }
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[(usize, usize, f64)] {
        &self.arcs
    }

    /// Sum of capacities crossing from `side` to its complement. `side` must
    /// contain the source and exclude the sink.
    pub fn directed_cut_value(&self, side: &BTreeSet<usize>) -> Result<f64> {
        if !side.contains(&self.source) {
            return Err(Error::Domain("cut side must contain the source".into()));
        }
        if side.contains(&self.sink) {
            return Err(Error::Domain("cut side must exclude the sink".into()));
        }
        if let Some(&v) = side.iter().next_back() {
            if v >= self.node_count {
                return Err(Error::Domain(format!("node {v} out of range")));
            }
        }
        Ok(self
            .arcs
            .iter()
            .filter(|(t, h, _)| side.contains(t) && !side.contains(h))
            .map(|(_, _, c)| c)
            .sum())
    }

    /// Exact maximum flow via blocking flows on the level graph.
    pub fn max_flow_min_cut(&self) -> MinCutResult {
        Dinic::new(self).run()
    }

    /// Serializes as `N M source sink` followed by `tail head capacity`
    /// rows; floats print in shortest round-trip form.
    pub fn write_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "{} {} {} {}\n",
            self.node_count,
            self.arcs.len(),
            self.source,
            self.sink
        ));
        for (t, h, c) in &self.arcs {
            s.push_str(&format!("{t} {h} {c}\n"));
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (ln, header) = lines
            .next()
            .ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        if head.len() != 4 {
            return Err(Error::Parse { line: ln + 1, msg: "expected `N M source sink`".into() });
        }
        let n: usize = parse_field(head[0], ln + 1)?;
        let m: usize = parse_field(head[1], ln + 1)?;
        let source: usize = parse_field(head[2], ln + 1)?;
        let sink: usize = parse_field(head[3], ln + 1)?;
        let mut net = FlowNetwork::new(n, source, sink)
            .map_err(|e| Error::Parse { line: ln + 1, msg: e.to_string() })?;
        let mut seen = 0usize;
        for (ln, raw) in lines {
            let row = raw.trim();
            if row.is_empty() {
                continue;
            }
            let f: Vec<&str> = row.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: "expected `tail head capacity`".into(),
                });
            }
            let t: usize = parse_field(f[0], ln + 1)?;
            let h: usize = parse_field(f[1], ln + 1)?;
            let c: f64 = parse_field(f[2], ln + 1)?;
            net.add_arc(t, h, c)
                .map_err(|e| Error::Parse { line: ln + 1, msg: e.to_string() })?;
            seen += 1;
        }
        if seen != m {
            return Err(Error::Parse {
                line: seen + 2,
                msg: format!("header announced {m} arcs, found {seen}"),
            });
        }
        Ok(net)
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse::<T>().map_err(|_| Error::Parse { line, msg: format!("bad field `{s}`") })
}

struct Dinic<'a> {
    net: &'a FlowNetwork,
    // Residual arcs in pairs: 2t forward, 2t+1 reverse.
    to: Vec<usize>,
    cap: Vec<f64>,
    adj: Vec<Vec<usize>>,
    level: Vec<i32>,
    iter: Vec<usize>,
    sat: f64,
}

impl<'a> Dinic<'a> {
    fn new(net: &'a FlowNetwork) -> Self {
        let n = net.node_count;
        let mut to = Vec::with_capacity(2 * net.arcs.len());
        let mut cap = Vec::with_capacity(2 * net.arcs.len());
        let mut adj = vec![Vec::new(); n];
        let mut max_cap = 0.0_f64;
        for (t, h, c) in &net.arcs {
            adj[*t].push(to.len());
            to.push(*h);
            cap.push(*c);
            adj[*h].push(to.len());
            to.push(*t);
            cap.push(0.0);
            max_cap = max_cap.max(*c);
        }
        let sat = 1e-12 * max_cap;
        Dinic { net, to, cap, adj, level: vec![-1; n], iter: vec![0; n], sat }
    }

    fn bfs(&mut self) -> bool {
        self.level.fill(-1);
        let mut q = VecDeque::new();
        self.level[self.net.source] = 0;
        q.push_back(self.net.source);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.level[v] < 0 && self.cap[e] > self.sat {
                    self.level[v] = self.level[u] + 1;
                    q.push_back(v);
                }
            }
        }
        self.level[self.net.sink] >= 0
    }

    fn dfs(&mut self, u: usize, pushed: f64) -> f64 {
        if u == self.net.sink {
            return pushed;
        }
        while self.iter[u] < self.adj[u].len() {
            let e = self.adj[u][self.iter[u]];
            let v = self.to[e];
            if self.level[v] == self.level[u] + 1 && self.cap[e] > self.sat {
                let d = self.dfs(v, pushed.min(self.cap[e]));
                if d > self.sat {
                    self.cap[e] -= d;
                    self.cap[e ^ 1] += d;
                    return d;
                }
            }
            self.iter[u] += 1;
        }
        0.0
    }

    fn run(mut self) -> MinCutResult {
        let mut flow = 0.0;
        while self.bfs() {
            self.iter.fill(0);
            loop {
                let pushed = self.dfs(self.net.source, f64::INFINITY);
                if pushed <= self.sat {
                    break;
                }
                flow += pushed;
            }
        }
        // Residual reachability from the source.
        let mut side = vec![false; self.net.node_count];
        let mut q = VecDeque::new();
        side[self.net.source] = true;
        q.push_back(self.net.source);
        while let Some(u) = q.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if !side[v] && self.cap[e] > self.sat {
                    side[v] = true;
                    q.push_back(v);
                }
            }
        }
        MinCutResult { flow_value: flow, source_side: side }
    }
}
