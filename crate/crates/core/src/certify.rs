//! Expansion certification.
//!
//! The exhaustive method evaluates the literal set conditions:
//!
//! * undirected-good: every `U` with `|U| <= floor(2 delta n)` has
//!   `|N(U) \ U| > |U|`, and every disjoint `A`, `B` with
//!   `|A| >= ceil(delta n)`, `|B| >= ceil(n/4)` are joined by an edge;
//! * directed-good: the same with `N+`, `|U| <= floor(4 delta n)`, and an
//!   arc in each direction between `A` and `B`;
//! * delta-connected: disjoint `A1`, `A2` with `|A1| >= ceil(delta n)`,
//!   `|A2| >= ceil((1 - 3 delta) n)` are joined by an edge.
//!
//! A pair condition fails iff some `A` of exactly the minimum size leaves at
//! least the required number of vertices outside `A ∪ N(A)`, since shrinking
//! `A` only shrinks `A ∪ N(A)`. That set of non-neighbors is the witness `B`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sizes::{binomial, ceil_count, floor_count};
use crate::spectral::{spectral_gap, SpectralMode};

/// Default cap on subset evaluations for the exhaustive method.
pub const DEFAULT_WORK_BUDGET: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    UndirectedGood,
    DirectedGood,
    DeltaConnected,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::UndirectedGood => "undirected-good",
            Criterion::DirectedGood => "directed-good",
            Criterion::DeltaConnected => "delta-connected",
        }
    }

    /// Checks `0 < delta < bound` for the criterion.
    pub fn check_delta(self, delta: f64) -> Result<()> {
        let (bound, range) = match self {
            Criterion::UndirectedGood => (1.0 / 8.0, "(0, 1/8)"),
            Criterion::DirectedGood => (1.0 / 16.0, "(0, 1/16)"),
            Criterion::DeltaConnected => (1.0 / 3.0, "(0, 1/3)"),
        };
        if delta.is_finite() && delta > 0.0 && delta < bound {
            Ok(())
        } else {
            Err(Error::DeltaOutOfRange { delta, range })
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "undirected-good" => Ok(Criterion::UndirectedGood),
            "directed-good" => Ok(Criterion::DirectedGood),
            "delta-connected" => Ok(Criterion::DeltaConnected),
            other => Err(Error::InvalidParameters(format!("unknown criterion `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertVerdict {
    Pass,
    Fail,
    NotAttempted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertMethod {
    Exhaustive,
    SpectralSurrogate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodChoice {
    /// Exhaustive within budget, spectral surrogate otherwise.
    Auto,
    Exhaustive,
    SpectralSurrogate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub method: MethodChoice,
    pub work_budget: u64,
    /// Overrides the derived bound on the second adjacency eigenvalue.
    pub surrogate_max_eigenvalue: Option<f64>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            method: MethodChoice::Auto,
            work_budget: DEFAULT_WORK_BUDGET,
            surrogate_max_eigenvalue: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `|N(U) \ U| <= |U|` (out-neighbors for directed graphs).
    SmallExpansion { set: Vec<usize>, outside_neighbors: usize },
    /// No edge between `a` and `b` (for directed graphs: no arc from `a` to `b`).
    NoEdge { a: Vec<usize>, b: Vec<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// Small-set expansion, condition (a) / (i).
    Expansion,
    /// Large disjoint sets are joined, condition (b) / (ii) / delta-connectedness.
    Joined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionOutcome {
    pub condition: Condition,
    pub verdict: CertVerdict,
    pub subsets_checked: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpanderCert {
    pub delta: f64,
    pub criterion: Criterion,
    pub verdict: CertVerdict,
    pub method: CertMethod,
    pub witness: Option<Witness>,
    pub conditions: Vec<ConditionOutcome>,
    /// Exhaustive evaluations required (whether or not performed).
    pub work: u64,
    pub work_budget: u64,
    pub spectral_gap: Option<f64>,
    /// Minimum gap the surrogate demanded.
    pub surrogate_gap_threshold: Option<f64>,
    pub eigen_tolerance: Option<f64>,
}

/// Size parameters a criterion induces on an `n`-vertex graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeBounds {
    /// Largest `|U|` subject to the expansion condition (0 if none).
    pub expansion_max: usize,
    /// Minimum size of the small side `A`.
    pub small_side: usize,
    /// Minimum size of the large side `B`.
    pub large_side: usize,
}

pub fn size_bounds(criterion: Criterion, delta: f64, n: usize) -> SizeBounds {
    let nf = n as f64;
    match criterion {
        Criterion::UndirectedGood => SizeBounds {
            expansion_max: floor_count(2.0 * delta * nf),
            small_side: ceil_count(delta * nf).max(1),
            large_side: ceil_count(nf / 4.0),
        },
        Criterion::DirectedGood => SizeBounds {
            expansion_max: floor_count(4.0 * delta * nf),
            small_side: ceil_count(delta * nf).max(1),
            large_side: ceil_count(nf / 4.0),
        },
        Criterion::DeltaConnected => SizeBounds {
            expansion_max: 0,
            small_side: ceil_count(delta * nf).max(1),
            large_side: ceil_count((1.0 - 3.0 * delta) * nf).max(1),
        },
    }
}

fn exhaustive_work(n: usize, b: SizeBounds) -> (u64, u64) {
    let sat = |x: u128| u64::try_from(x).unwrap_or(u64::MAX);
    let expansion: u128 = (1..=b.expansion_max.min(n))
        .map(|k| binomial(n, k))
        .fold(0u128, |a, x| a.saturating_add(x));
    let pairs = if b.small_side + b.large_side > n {
        0
    } else {
        binomial(n, b.small_side)
    };
    (sat(expansion), sat(pairs))
}

/// Certifies `g` against `criterion` at `delta`.
pub fn certify(g: &Graph, delta: f64, criterion: Criterion, opts: &CertifyOptions) -> Result<ExpanderCert> {
    criterion.check_delta(delta)?;
    match criterion {
        Criterion::DirectedGood if !g.is_directed() => {
            return Err(Error::WrongOrientation { expected: "a directed" })
        }
        Criterion::UndirectedGood | Criterion::DeltaConnected if g.is_directed() => {
            return Err(Error::WrongOrientation {
                expected: "an undirected",
            })
        }
        _ => {}
    }
    let bounds = size_bounds(criterion, delta, g.n());
    let (w_exp, w_pair) = exhaustive_work(g.n(), bounds);
    let work = w_exp.saturating_add(w_pair);
    let within = work <= opts.work_budget;

    let base = ExpanderCert {
        delta,
        criterion,
        verdict: CertVerdict::NotAttempted,
        method: CertMethod::Exhaustive,
        witness: None,
        conditions: Vec::new(),
        work,
        work_budget: opts.work_budget,
        spectral_gap: None,
        surrogate_gap_threshold: None,
        eigen_tolerance: None,
    };

    match opts.method {
        MethodChoice::Exhaustive if !within => Ok(base),
        MethodChoice::Exhaustive => Ok(exhaustive(g, bounds, criterion, base)),
        MethodChoice::Auto if within => Ok(exhaustive(g, bounds, criterion, base)),
        MethodChoice::Auto => match surrogate(g, bounds, opts, base.clone()) {
            Ok(c) => Ok(c),
            Err(Error::NotRegular { .. }) => Ok(base),
            Err(e) => Err(e),
        },
        MethodChoice::SpectralSurrogate => surrogate(g, bounds, opts, base),
    }
}

fn surrogate(g: &Graph, bounds: SizeBounds, opts: &CertifyOptions, mut cert: ExpanderCert) -> Result<ExpanderCert> {
    let s = spectral_gap(g, SpectralMode::Auto)?;
    let n = g.n() as f64;
    let d = s.degree as f64;
    let limit = opts.surrogate_max_eigenvalue.unwrap_or_else(|| {
        // Mixing lemma: e(A, B) >= d|A||B|/n - lambda sqrt(|A||B|) > 0.
        let frac_a = bounds.small_side as f64 / n;
        let frac_b = bounds.large_side as f64 / n;
        let mut limit = d * (frac_a * frac_b).sqrt();
        // Tanner: |N(U)| >= d^2 |U| / (lambda^2 + (d^2 - lambda^2) alpha) > 2|U|.
        if bounds.expansion_max > 0 {
            let alpha = bounds.expansion_max as f64 / n;
            if alpha < 0.5 {
                limit = limit.min(d * ((1.0 - 2.0 * alpha) / (2.0 * (1.0 - alpha))).sqrt());
            } else {
                limit = 0.0;
            }
        }
        limit
    });
    cert.method = CertMethod::SpectralSurrogate;
    cert.spectral_gap = Some(s.gap);
    cert.surrogate_gap_threshold = Some(d - limit);
    cert.eigen_tolerance = Some(s.tolerance);
    cert.verdict = if s.second_eigenvalue < limit {
        CertVerdict::Pass
    } else {
        CertVerdict::Fail
    };
    Ok(cert)
}

/// Fixed-width bitset over `0..n`.
#[derive(Clone)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn new(n: usize) -> Self {
        Bits {
            words: vec![0; n.div_ceil(64).max(1)],
        }
    }
    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
}

/// Depth-first enumeration of `k`-subsets in lexicographic order, carrying
/// the union of the members' bits and of their neighborhood masks. `visit`
/// receives (members, set bits, neighborhood bits) and returns `true` to stop.
struct Enumerator<'a> {
    n: usize,
    words: usize,
    masks: &'a [Bits],
    chosen: Vec<usize>,
    set_stack: Vec<u64>,
    nbr_stack: Vec<u64>,
    count: u64,
}

impl<'a> Enumerator<'a> {
    fn new(n: usize, masks: &'a [Bits]) -> Self {
        Enumerator {
            n,
            words: n.div_ceil(64).max(1),
            masks,
            chosen: Vec::new(),
            set_stack: Vec::new(),
            nbr_stack: Vec::new(),
            count: 0,
        }
    }

    fn run<F>(&mut self, k: usize, visit: &mut F) -> bool
    where
        F: FnMut(&[usize], &[u64], &[u64]) -> bool,
    {
        let w = self.words;
        self.chosen.clear();
        self.set_stack = vec![0; (k + 1) * w];
        self.nbr_stack = vec![0; (k + 1) * w];
        self.rec(0, k, visit)
    }

    fn rec<F>(&mut self, start: usize, k: usize, visit: &mut F) -> bool
    where
        F: FnMut(&[usize], &[u64], &[u64]) -> bool,
    {
        let depth = self.chosen.len();
        let w = self.words;
        if depth == k {
            self.count += 1;
            let s = &self.set_stack[depth * w..(depth + 1) * w];
            let nb = &self.nbr_stack[depth * w..(depth + 1) * w];
            return visit(&self.chosen, s, nb);
        }
        let remaining = k - depth;
        for v in start..=(self.n - remaining) {
            for i in 0..w {
                let bit = if i == v / 64 { 1u64 << (v % 64) } else { 0 };
                self.set_stack[(depth + 1) * w + i] = self.set_stack[depth * w + i] | bit;
                self.nbr_stack[(depth + 1) * w + i] = self.nbr_stack[depth * w + i] | self.masks[v].words[i];
            }
            self.chosen.push(v);
            let stop = self.rec(v + 1, k, visit);
            self.chosen.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

fn masks_from(n: usize, nbrs: impl Fn(usize) -> Vec<usize>) -> Vec<Bits> {
    (0..n)
        .map(|v| {
            let mut b = Bits::new(n);
            for u in nbrs(v) {
                b.set(u);
            }
            b
        })
        .collect()
}

fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

/// Smallest (then lexicographically first) `U` with `|U| <= max_size` and
/// `|N(U) \ U| <= |U|`, plus the number of subsets examined.
fn find_small_expansion_violation(n: usize, masks: &[Bits], max_size: usize) -> (Option<Witness>, u64) {
    let mut en = Enumerator::new(n, masks);
    let mut found = None;
    for k in 1..=max_size.min(n) {
        let stop = en.run(k, &mut |chosen, set, nb| {
            let outside: usize = nb.iter().zip(set).map(|(a, b)| (a & !b).count_ones() as usize).sum();
            if outside <= chosen.len() {
                found = Some(Witness::SmallExpansion {
                    set: chosen.to_vec(),
                    outside_neighbors: outside,
                });
                true
            } else {
                false
            }
        });
        if stop {
            break;
        }
    }
    (found, en.count)
}

/// First `A` of size `a_size` whose non-neighborhood (outside `A ∪ N(A)`)
/// has at least `b_size` vertices.
fn find_unjoined_pair(n: usize, masks: &[Bits], a_size: usize, b_size: usize) -> (Option<Witness>, u64) {
    if a_size + b_size > n {
        return (None, 0);
    }
    let mut en = Enumerator::new(n, masks);
    let mut found = None;
    en.run(a_size, &mut |chosen, set, nb| {
        let covered: Vec<u64> = set.iter().zip(nb).map(|(a, b)| a | b).collect();
        if n - popcount(&covered) >= b_size {
            let b = (0..n)
                .filter(|&i| covered[i / 64] >> (i % 64) & 1 == 0)
                .collect();
            found = Some(Witness::NoEdge {
                a: chosen.to_vec(),
                b,
            });
            true
        } else {
            false
        }
    });
    (found, en.count)
}

fn exhaustive(g: &Graph, bounds: SizeBounds, criterion: Criterion, mut cert: ExpanderCert) -> ExpanderCert {
    let n = g.n();
    let out_masks = masks_from(n, |v| g.out_neighbors(v).to_vec());
    let mut witness = None;
    let mut conditions = Vec::new();

    if bounds.expansion_max > 0 {
        let (w, count) = find_small_expansion_violation(n, &out_masks, bounds.expansion_max);
        conditions.push(ConditionOutcome {
            condition: Condition::Expansion,
            verdict: if w.is_some() { CertVerdict::Fail } else { CertVerdict::Pass },
            subsets_checked: count,
        });
        witness = witness.or(w);
    }

    let (mut w, mut count) = find_unjoined_pair(n, &out_masks, bounds.small_side, bounds.large_side);
    if w.is_none() && criterion == Criterion::DirectedGood {
        // No arc from B into A: A's in-neighborhood misses B.
        let in_masks = masks_from(n, |v| g.in_neighbors(v).to_vec());
        let (w_in, c_in) = find_unjoined_pair(n, &in_masks, bounds.small_side, bounds.large_side);
        count += c_in;
        w = w_in.map(|wit| match wit {
            Witness::NoEdge { a, b } => Witness::NoEdge { a: b, b: a },
            other => other,
        });
    }
    conditions.push(ConditionOutcome {
        condition: Condition::Joined,
        verdict: if w.is_some() { CertVerdict::Fail } else { CertVerdict::Pass },
        subsets_checked: count,
    });
    witness = witness.or(w);

    cert.verdict = if witness.is_some() {
        CertVerdict::Fail
    } else {
        CertVerdict::Pass
    };
    cert.witness = witness;
    cert.conditions = conditions;
    cert.method = CertMethod::Exhaustive;
    cert
}
