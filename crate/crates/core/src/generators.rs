//! Graph families: random regular expander candidates and the structured
//! fixtures (grids, stars, cycles, complete graphs, clique blowups).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Consecutive rejected pairings before the random-regular sampler restarts.
const RESTART_AFTER: usize = 100;
const MAX_RESTARTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum GenSpec {
    RandomRegular { n: usize, d: usize, seed: u64 },
    Grid { rows: usize, cols: usize },
    Star { leaves: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Blowup { base: Box<GenSpec>, k: usize },
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameters(m));
        match self {
            GenSpec::RandomRegular { n, d, .. } => {
                if *d >= *n {
                    return bad(format!("random-regular needs d < n (d={d}, n={n})"));
                }
                if (n * d) % 2 != 0 {
                    return bad(format!("random-regular needs n*d even (n={n}, d={d})"));
                }
            }
            GenSpec::Grid { rows, cols } => {
                if *rows < 1 || *cols < 1 {
                    return bad(format!("grid dimensions must be >= 1 (got {rows}x{cols})"));
                }
            }
            GenSpec::Star { .. } => {}
            GenSpec::Cycle { n } => {
                if *n < 3 {
                    return bad(format!("cycle needs n >= 3 (got {n})"));
                }
            }
            GenSpec::Complete { .. } => {}
            GenSpec::Blowup { base, k } => {
                if *k < 1 {
                    return bad("blowup needs k >= 1".into());
                }
                base.validate()?;
            }
        }
        Ok(())
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    spec.validate()?;
    match spec {
        GenSpec::RandomRegular { n, d, seed } => random_regular(*n, *d, *seed),
        GenSpec::Grid { rows, cols } => Ok(grid(*rows, *cols)),
        GenSpec::Star { leaves } => Ok(star(*leaves)),
        GenSpec::Cycle { n } => Ok(cycle(*n)),
        GenSpec::Complete { n } => Ok(complete(*n)),
        GenSpec::Blowup { base, k } => blowup(&generate(base)?, *k),
    }
}

/// `rows x cols` grid; vertex `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Graph::undirected(rows * cols, edges).expect("grid is simple")
}

/// Star with center 0 and leaves `1..=leaves`.
pub fn star(leaves: usize) -> Graph {
    Graph::undirected(leaves + 1, (1..=leaves).map(|i| (0, i)).collect()).expect("star is simple")
}

pub fn cycle(n: usize) -> Graph {
    Graph::undirected(n, (0..n).map(|i| (i, (i + 1) % n)).collect()).expect("cycle is simple")
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::undirected(n, edges).expect("complete graph is simple")
}

/// Complete digraph with both arcs between every pair.
pub fn complete_digraph(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v {
                edges.push((u, v));
            }
        }
    }
    Graph::directed(n, edges).expect("complete digraph is simple")
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::undirected(10, edges).expect("petersen graph is simple")
}

/// Replaces every vertex with a `k`-clique and every edge with a complete
/// bipartite join between the two cliques. Vertex `v` becomes `v*k..v*k+k`.
pub fn blowup(g: &Graph, k: usize) -> Result<Graph> {
    if k < 1 {
        return Err(Error::InvalidParameters("blowup needs k >= 1".into()));
    }
    if g.is_directed() {
        return Err(Error::WrongOrientation {
            expected: "an undirected",
        });
    }
    let mut edges = Vec::new();
    for v in 0..g.n() {
        for a in 0..k {
            for b in a + 1..k {
                edges.push((v * k + a, v * k + b));
            }
        }
    }
    for &(u, v) in g.edges() {
        for a in 0..k {
            for b in 0..k {
                edges.push((u * k + a, v * k + b));
            }
        }
    }
    Graph::undirected(g.n() * k, edges)
}

/// Simple `d`-regular graph on `n` vertices from the pairing model.
///
/// Points are paired one random pair at a time; a pair that would create a
/// loop or a repeated edge is rejected and redrawn, and after
/// `RESTART_AFTER` consecutive rejections the whole pairing restarts.
/// The output is deterministic in `seed` but not exactly uniform.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    GenSpec::RandomRegular { n, d, seed }.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RESTARTS {
        if let Some(edges) = try_pairing(n, d, &mut rng) {
            return Graph::undirected(n, edges);
        }
    }
    Err(Error::InvalidParameters(format!(
        "random-regular(n={n}, d={d}) failed after {MAX_RESTARTS} restarts"
    )))
}

fn try_pairing(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
    let mut edges = Vec::with_capacity(n * d / 2);
    let mut rejected = 0usize;
    while !points.is_empty() {
        let len = points.len();
        let i = rng.gen_range(0..len);
        let mut j = rng.gen_range(0..len - 1);
        if j >= i {
            j += 1;
        }
        let (u, v) = (points[i], points[j]);
        if u == v || adj[u].contains(&v) {
            rejected += 1;
            if rejected >= RESTART_AFTER {
                return None;
            }
            continue;
        }
        rejected = 0;
        adj[u].push(v);
        adj[v].push(u);
        edges.push((u.min(v), u.max(v)));
        // remove the higher index first so the lower one stays valid
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        points.swap_remove(hi);
        points.swap_remove(lo);
    }
    Some(edges)
}
