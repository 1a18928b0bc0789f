//! Orientations of regular graphs into directed expander candidates.
//!
//! A `2k`-regular spanning subgraph `E1` is extracted as a union of `k`
//! edge-disjoint 2-factors, oriented along Eulerian circuits so every vertex
//! has in- and out-degree `k` inside `E1`; the remaining edges get
//! independent fair-coin orientations.

use std::collections::VecDeque;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

const NONE: usize = usize::MAX;

/// `ceil(3 sqrt(d))`, the default number of 2-factors.
pub fn default_k(d: usize) -> usize {
    // smallest c with c^2 >= 9d
    let mut c = (3.0 * (d as f64).sqrt()) as usize;
    while c * c < 9 * d {
        c += 1;
    }
    while c > 0 && (c - 1) * (c - 1) >= 9 * d {
        c -= 1;
    }
    c
}

#[derive(Debug, Clone)]
pub struct Orientation {
    pub graph: Graph,
    /// Per edge of the output (same order as the input edges): whether it lies in `E1`.
    pub in_e1: Vec<bool>,
    pub k: usize,
}

/// Orients an undirected `d`-regular graph; `k = None` uses [`default_k`].
pub fn orient_regular(g: &Graph, k: Option<usize>, seed: u64) -> Result<Orientation> {
    if g.is_directed() {
        return Err(Error::WrongOrientation {
            expected: "an undirected",
        });
    }
    let d = g.regular_degree().ok_or_else(|| Error::NotRegular {
        histogram: g.degree_histogram(),
    })?;
    let k = k.unwrap_or_else(|| default_k(d));
    if k == 0 || 2 * k > d {
        return Err(Error::NoRegularSubgraph {
            degree: 2 * k,
            reason: format!("need 1 <= k and 2k <= d (k={k}, d={d})"),
        });
    }
    let e1_ids = regular_even_subgraph(g, k)?;
    let mut in_e1 = vec![false; g.m()];
    for &id in &e1_ids {
        in_e1[id] = true;
    }
    let e1_edges: Vec<(usize, usize)> = e1_ids.iter().map(|&id| g.edges()[id]).collect();
    let e1_oriented = eulerian_orientation(g.n(), &e1_edges);
    let mut arcs = vec![(0, 0); g.m()];
    for (&id, &arc) in e1_ids.iter().zip(&e1_oriented) {
        arcs[id] = arc;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        if !in_e1[id] {
            arcs[id] = if rng.gen::<bool>() { (u, v) } else { (v, u) };
        }
    }
    Ok(Orientation {
        graph: Graph::directed(g.n(), arcs)?,
        in_e1,
        k,
    })
}

/// Orients an even-degree edge list along Eulerian circuits (Hierholzer),
/// component by component. Output is aligned with the input edges.
pub fn eulerian_orientation(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        incident[u].push(id);
        incident[v].push(id);
    }
    let mut used = vec![false; edges.len()];
    let mut cursor = vec![0usize; n];
    let mut out = edges.to_vec();
    let mut stack = Vec::new();
    for start in 0..n {
        stack.push(start);
        while let Some(&v) = stack.last() {
            let mut advanced = false;
            while cursor[v] < incident[v].len() {
                let id = incident[v][cursor[v]];
                cursor[v] += 1;
                if used[id] {
                    continue;
                }
                used[id] = true;
                let (a, b) = edges[id];
                let w = if a == v { b } else { a };
                out[id] = (v, w);
                stack.push(w);
                advanced = true;
                break;
            }
            if !advanced {
                stack.pop();
            }
        }
    }
    out
}

/// Edge ids of a `2k`-regular spanning subgraph made of `k` edge-disjoint
/// 2-factors.
///
/// For even `d` the graph is Eulerian-oriented and each 2-factor is a perfect
/// matching of the out-copy/in-copy bipartite graph, which is `d/2`-regular.
/// For odd `d` a perfect matching is removed first.
pub fn regular_even_subgraph(g: &Graph, k: usize) -> Result<Vec<usize>> {
    let n = g.n();
    let d = g.regular_degree().ok_or_else(|| Error::NotRegular {
        histogram: g.degree_histogram(),
    })?;
    let mut keep: Vec<usize> = (0..g.m()).collect();
    let mut even_d = d;
    if d % 2 == 1 {
        let mate = maximum_matching(g);
        if let Some(v) = (0..n).find(|&v| mate[v] == NONE) {
            return Err(Error::NoRegularSubgraph {
                degree: 2 * k,
                reason: format!("odd degree {d} and no perfect matching (vertex {v} unmatched)"),
            });
        }
        keep.retain(|&id| {
            let (u, v) = g.edges()[id];
            mate[u] != v
        });
        even_d = d - 1;
    }
    if 2 * k > even_d {
        return Err(Error::NoRegularSubgraph {
            degree: 2 * k,
            reason: format!("even part of the graph is only {even_d}-regular"),
        });
    }
    let sub: Vec<(usize, usize)> = keep.iter().map(|&id| g.edges()[id]).collect();
    let oriented = eulerian_orientation(n, &sub);
    // bipartite adjacency: out-copy u -> list of (in-copy v, local edge index)
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (local, &(u, v)) in oriented.iter().enumerate() {
        adj[u].push((v, local));
    }
    let mut removed = vec![false; sub.len()];
    let mut chosen = Vec::with_capacity(k * n);
    for round in 0..k {
        let matching = bipartite_perfect_matching(n, &adj, &removed).ok_or_else(|| Error::NoRegularSubgraph {
            degree: 2 * k,
            reason: format!("no perfect matching in round {round} of 2-factor extraction"),
        })?;
        for local in matching {
            removed[local] = true;
            chosen.push(keep[local]);
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

/// Hopcroft-Karp on an `n + n` bipartite graph; returns local edge ids of a
/// perfect matching, or `None` if none exists.
fn bipartite_perfect_matching(n: usize, adj: &[Vec<(usize, usize)>], removed: &[bool]) -> Option<Vec<usize>> {
    let mut match_l = vec![NONE; n];
    let mut match_r = vec![NONE; n];
    let mut via = vec![NONE; n];
    let mut dist = vec![0usize; n];
    loop {
        // BFS layering from free left vertices
        let mut queue = VecDeque::new();
        for u in 0..n {
            if match_l[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &adj[u] {
                if removed[e] {
                    continue;
                }
                let w = match_r[v];
                if w == NONE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; n];
        for u in 0..n {
            if match_l[u] == NONE {
                augment(u, adj, removed, &mut match_l, &mut match_r, &mut via, &mut dist, &mut it);
            }
        }
    }
    if match_l.contains(&NONE) {
        return None;
    }
    Some(via)
}

#[allow(clippy::too_many_arguments)]
fn augment(
    root: usize,
    adj: &[Vec<(usize, usize)>],
    removed: &[bool],
    match_l: &mut [usize],
    match_r: &mut [usize],
    via: &mut [usize],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    // iterative DFS along the BFS layering; taken[i] is the (right vertex,
    // edge) used to leave path[i]
    let mut path: Vec<usize> = vec![root];
    let mut taken: Vec<(usize, usize)> = Vec::new();
    while let Some(&u) = path.last() {
        let mut advanced = false;
        while it[u] < adj[u].len() {
            let (v, e) = adj[u][it[u]];
            it[u] += 1;
            if removed[e] {
                continue;
            }
            let w = match_r[v];
            if w == NONE {
                taken.push((v, e));
                for (&x, &(y, edge)) in path.iter().zip(&taken) {
                    match_l[x] = y;
                    match_r[y] = x;
                    via[x] = edge;
                }
                return true;
            }
            if dist[w] == dist[u] + 1 {
                taken.push((v, e));
                path.push(w);
                advanced = true;
                break;
            }
        }
        if !advanced {
            dist[u] = usize::MAX;
            path.pop();
            taken.pop();
        }
    }
    false
}

/// Maximum matching of an undirected graph (Edmonds' blossom algorithm),
/// as a mate array with `usize::MAX` for unmatched vertices.
pub fn maximum_matching(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut mate = vec![NONE; n];
    for u in 0..n {
        if mate[u] == NONE {
            if let Some(&v) = g.out_neighbors(u).iter().find(|&&v| mate[v] == NONE) {
                mate[u] = v;
                mate[v] = u;
            }
        }
    }
    let mut st = Blossom::new(n);
    for root in 0..n {
        if mate[root] != NONE {
            continue;
        }
        let end = st.find_path(g, &mut mate, root);
        let mut v = end;
        while v != NONE {
            let pv = st.parent[v];
            let ppv = mate[pv];
            mate[v] = pv;
            mate[pv] = v;
            v = ppv;
        }
    }
    mate
}

struct Blossom {
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom {
    fn new(n: usize) -> Self {
        Blossom {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mate: &[usize], mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[mate[b]];
        }
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[mate[v]]] = true;
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    fn find_path(&mut self, g: &Graph, mate: &mut [usize], root: usize) -> usize {
        let n = g.n();
        self.used.iter_mut().for_each(|x| *x = false);
        self.parent.iter_mut().for_each(|x| *x = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in g.out_neighbors(v) {
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE) {
                    let cur = self.lca(mate, v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(mate, v, cur, to);
                    self.mark_path(mate, to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if mate[to] == NONE {
                        return to;
                    }
                    let next = mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        NONE
    }
}
