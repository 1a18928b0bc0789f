//! Simple graphs on dense vertex ids `0..n`, stored as sorted adjacency
//! arrays (CSR). Undirected graphs keep each edge once in `edges` and list
//! it in both endpoints' adjacency.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "GraphRepr", try_from = "GraphRepr")]
pub struct Graph {
    n: usize,
    directed: bool,
    edges: Vec<(usize, usize)>,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    directed: bool,
    edges: Vec<(usize, usize)>,
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n,
            directed: g.directed,
            edges: g.edges,
        }
    }
}

impl TryFrom<GraphRepr> for Graph {
    type Error = Error;
    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::new(r.n, r.directed, r.edges)
    }
}

fn build_csr(n: usize, pairs: impl Iterator<Item = (usize, usize)>, len: usize) -> (Vec<usize>, Vec<usize>) {
    let pairs: Vec<(usize, usize)> = pairs.collect();
    debug_assert_eq!(pairs.len(), len);
    let mut offsets = vec![0usize; n + 1];
    for &(u, _) in &pairs {
        offsets[u + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut cursor = offsets.clone();
    let mut targets = vec![0usize; len];
    for (u, v) in pairs {
        targets[cursor[u]] = v;
        cursor[u] += 1;
    }
    for u in 0..n {
        targets[offsets[u]..offsets[u + 1]].sort_unstable();
    }
    (offsets, targets)
}

impl Graph {
    /// Validates and builds a graph. Undirected edges are normalized to
    /// `(min, max)`; edge order is otherwise preserved.
    pub fn new(n: usize, directed: bool, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut edges = edges;
        for e in edges.iter_mut() {
            let (u, v) = *e;
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) has an endpoint outside [0, {n})"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at {u}")));
            }
            if !directed && u > v {
                *e = (v, u);
            }
        }
        let (out_offsets, out_targets, in_offsets, in_sources) = if directed {
            let (oo, ot) = build_csr(n, edges.iter().copied(), edges.len());
            let (io, is) = build_csr(n, edges.iter().map(|&(u, v)| (v, u)), edges.len());
            (oo, ot, io, is)
        } else {
            let both = edges.iter().flat_map(|&(u, v)| [(u, v), (v, u)]);
            let (oo, ot) = build_csr(n, both, 2 * edges.len());
            (oo.clone(), ot.clone(), oo, ot)
        };
        for u in 0..n {
            let adj = &out_targets[out_offsets[u]..out_offsets[u + 1]];
            if let Some(w) = adj.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({u}, {})", w[0])));
            }
        }
        Ok(Graph {
            n,
            directed,
            edges,
            out_offsets,
            out_targets,
            in_offsets,
            in_sources,
        })
    }

    pub fn undirected(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(n, false, edges)
    }

    pub fn directed(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(n, true, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges (each undirected edge counted once).
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Out-neighbors (all neighbors for undirected graphs), sorted.
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    /// In-neighbors (all neighbors for undirected graphs), sorted.
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    /// Total degree: neighbor count for undirected graphs, in + out for directed.
    pub fn degree(&self, v: usize) -> usize {
        if self.directed {
            self.out_degree(v) + self.in_degree(v)
        } else {
            self.out_degree(v)
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.arc_index(u, v).is_some()
    }

    /// Number of inspection arcs: `m` for directed graphs, `2m` for undirected.
    pub fn arc_count(&self) -> usize {
        self.out_targets.len()
    }

    /// Arc-index range of `u`'s outgoing arcs, aligned with `out_neighbors(u)`.
    pub fn arc_range(&self, u: usize) -> Range<usize> {
        self.out_offsets[u]..self.out_offsets[u + 1]
    }

    pub fn arc_index(&self, u: usize, v: usize) -> Option<usize> {
        let start = self.out_offsets[u];
        self.out_neighbors(u).binary_search(&v).ok().map(|i| start + i)
    }

    /// All inspection arcs `(u, v, arc_index)` in arc-index order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.arc_range(u)
                .map(move |idx| (u, self.out_targets[idx], idx))
        })
    }

    /// Sorted `(degree, count)` pairs.
    pub fn degree_histogram(&self) -> Vec<(usize, usize)> {
        let mut hist = BTreeMap::new();
        for v in 0..self.n {
            *hist.entry(self.degree(v)).or_insert(0usize) += 1;
        }
        hist.into_iter().collect()
    }

    /// Common degree if every vertex has the same total degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Underlying simple undirected graph; antiparallel arcs collapse.
    pub fn underlying(&self) -> Graph {
        if !self.directed {
            return self.clone();
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Graph::new(self.n, false, edges).expect("underlying graph of a valid graph is valid")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(16 * (self.edges.len() + 1));
        let kind = if self.directed { "directed" } else { "undirected" };
        let _ = writeln!(out, "{} {} {}", self.n, self.edges.len(), kind);
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                line: hl + 1,
                msg: "header must be `n m directed|undirected`".into(),
            });
        }
        let parse_num = |s: &str, line: usize| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("expected a non-negative integer, got `{s}`"),
            })
        };
        let n = parse_num(parts[0], hl + 1)?;
        let m = parse_num(parts[1], hl + 1)?;
        let directed = match parts[2] {
            "directed" => true,
            "undirected" => false,
            other => {
                return Err(Error::Parse {
                    line: hl + 1,
                    msg: format!("unknown graph kind `{other}`"),
                })
            }
        };
        let mut edges = Vec::with_capacity(m);
        for (ln, line) in lines {
            let mut it = line.split_whitespace();
            let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: "edge line must be `u v`".into(),
                });
            };
            edges.push((parse_num(a, ln + 1)?, parse_num(b, ln + 1)?));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hl + 1,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::new(n, directed, edges)
    }
}

/// Disjoint vertex classes covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPartition {
    pub component_id: Vec<usize>,
    /// Members of each component, sorted ascending.
    pub components: Vec<Vec<usize>>,
    /// Topological order of the component DAG (directed input only).
    pub topo_order: Option<Vec<usize>>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }
}

/// Connected components numbered by their smallest vertex.
pub fn connected_components(g: &Graph) -> Result<ComponentPartition> {
    if g.is_directed() {
        return Err(Error::WrongOrientation {
            expected: "an undirected",
        });
    }
    let n = g.n();
    let mut component_id = vec![usize::MAX; n];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if component_id[s] != usize::MAX {
            continue;
        }
        let id = components.len();
        component_id[s] = id;
        queue.push_back(s);
        let mut members = Vec::new();
        while let Some(u) = queue.pop_front() {
            members.push(u);
            for &v in g.out_neighbors(u) {
                if component_id[v] == usize::MAX {
                    component_id[v] = id;
                    queue.push_back(v);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    Ok(ComponentPartition {
        component_id,
        components,
        topo_order: None,
    })
}

/// Strongly connected components via an iterative Tarjan pass.
///
/// Components are numbered in topological order of the condensation:
/// every arc between different components goes from a lower to a higher id,
/// so `topo_order` is the identity permutation.
pub fn strongly_connected_components(g: &Graph) -> Result<ComponentPartition> {
    strongly_connected_components_where(g, |_| true)
}

/// Strong components of the subgraph keeping the arcs whose index
/// satisfies `keep`.
pub fn strongly_connected_components_where<F: Fn(usize) -> bool>(g: &Graph, keep: F) -> Result<ComponentPartition> {
    if !g.is_directed() {
        return Err(Error::WrongOrientation { expected: "a directed" });
    }
    let n = g.n();
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    // (vertex, next neighbor position)
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0usize;
    // Tarjan emits SCCs in reverse topological order.
    let mut reversed: Vec<Vec<usize>> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let adj = g.out_neighbors(v);
            if *pos < adj.len() {
                let w = adj[*pos];
                let idx = g.out_offsets[v] + *pos;
                *pos += 1;
                if !keep(idx) {
                    continue;
                }
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    reversed.push(comp);
                }
            }
        }
    }

    reversed.reverse();
    let components = reversed;
    let mut component_id = vec![0usize; n];
    for (id, comp) in components.iter().enumerate() {
        for &v in comp {
            component_id[v] = id;
        }
    }
    let topo_order = (0..components.len()).collect();
    Ok(ComponentPartition {
        component_id,
        components,
        topo_order: Some(topo_order),
    })
}

/// Length of the shortest cycle of the underlying simple undirected graph,
/// or `None` for a forest.
pub fn girth(g: &Graph) -> Option<usize> {
    let h = g.underlying();
    let n = h.n();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for root in 0..n {
        for &v in &touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[root] = 0;
        touched.push(root);
        queue.push_back(root);
        'bfs: while let Some(u) = queue.pop_front() {
            // Any cycle found from here on is at least 2*dist[u]+1 long.
            if let Some(b) = best {
                if 2 * dist[u] + 1 >= b {
                    break;
                }
            }
            for &w in h.out_neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    touched.push(w);
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|b| len < b) {
                        best = Some(len);
                    }
                    if len == 3 {
                        break 'bfs;
                    }
                }
            }
        }
        if best == Some(3) {
            break;
        }
    }
    best
}
