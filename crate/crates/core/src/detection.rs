//! Detectors that label vertices truthful or corrupt from a report set.
//!
//! All of them start from the agreement graph `H`: in the undirected case
//! the edges whose endpoints praise each other, in the directed case the
//! arcs reported truthful. Components of `H` (strong components when
//! directed) never mix truthful and corrupt vertices, so the detectors
//! decide whole components and then read off the verdicts of vertices
//! already known to be truthful.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components_where, ComponentPartition, Graph};
use crate::reporting::{for_each_consistent_mask, ReportSet, Verdict, ORACLE_BOUND};
use crate::sizes::{ceil_count, floor_count};

/// Default work budget of the exponential subroutines (independent-set
/// branch and bound, consistent-union search).
pub const DEFAULT_SEARCH_BUDGET: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    Truthful,
    Corrupt,
    Unknown,
}

impl Label {
    pub fn letter(self) -> char {
        match self {
            Label::Truthful => 'T',
            Label::Corrupt => 'C',
            Label::Unknown => 'U',
        }
    }
}

impl From<Verdict> for Label {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Truthful => Label::Truthful,
            Verdict::Corrupt => Label::Corrupt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Member of a component decided on size alone.
    GiantComponent,
    /// Member of a large component decided by comparing the two candidates.
    Disambiguation,
    /// Read off the verdict of a vertex already known to be truthful.
    NeighborPropagation,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::GiantComponent => "giant-component",
            Provenance::Disambiguation => "disambiguation",
            Provenance::NeighborPropagation => "neighbor-propagation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectMode {
    Fast,
    General,
}

impl std::str::FromStr for DetectMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(DetectMode::Fast),
            "general" => Ok(DetectMode::General),
            other => Err(Error::InvalidParameters(format!("unknown detection mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeUsed {
    Fast,
    General,
    Connected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Notice {
    /// Fast mode found no component above half the vertices and ran the
    /// general path instead.
    FallbackToGeneral,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub labels: Vec<Label>,
    pub provenance: Vec<Option<Provenance>>,
    pub mode: ModeUsed,
    pub notices: Vec<Notice>,
}

impl DetectionResult {
    fn empty(n: usize, mode: ModeUsed) -> Self {
        DetectionResult {
            labels: vec![Label::Unknown; n],
            provenance: vec![None; n],
            mode,
            notices: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn unknown_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l == Label::Unknown).count()
    }

    pub fn labeled_count(&self) -> usize {
        self.n() - self.unknown_count()
    }

    pub fn with_label(&self, label: Label) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.labels[v] == label).collect()
    }

    /// One line per vertex: `v T|C|U provenance`, with `-` for unknowns.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, (l, p)) in self.labels.iter().zip(&self.provenance).enumerate() {
            let _ = writeln!(out, "{v} {} {}", l.letter(), p.map_or("-", |p| p.name()));
        }
        out
    }

    fn set(&mut self, v: usize, label: Label, prov: Provenance) -> Result<bool> {
        match self.labels[v] {
            Label::Unknown => {
                self.labels[v] = label;
                self.provenance[v] = Some(prov);
                Ok(true)
            }
            l if l == label => Ok(false),
            _ => Err(Error::ConflictingLabels { vertex: v }),
        }
    }

    /// Labels every vertex reachable through verdicts of known-truthful
    /// vertices.
    fn propagate(&mut self, g: &Graph, r: &ReportSet) -> Result<()> {
        let mut queue: VecDeque<usize> = (0..self.n()).filter(|&v| self.labels[v] == Label::Truthful).collect();
        while let Some(u) = queue.pop_front() {
            for (idx, &v) in g.arc_range(u).zip(g.out_neighbors(u)) {
                let label = Label::from(r.by_index(idx));
                if self.set(v, label, Provenance::NeighborPropagation)? && label == Label::Truthful {
                    queue.push_back(v);
                }
            }
        }
        Ok(())
    }
}

/// Agreement graph: undirected input keeps edges praised in both
/// directions, directed input keeps arcs reported truthful.
pub fn agreement_graph(g: &Graph, r: &ReportSet) -> Result<Graph> {
    r.check_for(g)?;
    let edges = if g.is_directed() {
        g.arcs()
            .filter(|&(_, _, idx)| r.by_index(idx) == Verdict::Truthful)
            .map(|(u, v, _)| (u, v))
            .collect()
    } else {
        g.arcs()
            .filter(|&(u, v, idx)| {
                u < v
                    && r.by_index(idx) == Verdict::Truthful
                    && r.get(g, v, u) == Some(Verdict::Truthful)
            })
            .map(|(u, v, _)| (u, v))
            .collect()
    };
    Graph::new(g.n(), g.is_directed(), edges)
}

/// Components of the agreement graph: connected components for undirected
/// input (found by union-find without building the graph), strong
/// components for directed input.
pub fn agreement_components(g: &Graph, r: &ReportSet) -> Result<ComponentPartition> {
    r.check_for(g)?;
    if g.is_directed() {
        return strongly_connected_components_where(g, |idx| r.by_index(idx) == Verdict::Truthful);
    }
    let n = g.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for (u, v, idx) in g.arcs() {
        if u < v && r.by_index(idx) == Verdict::Truthful && r.get(g, v, u) == Some(Verdict::Truthful) {
            let (a, b) = (root(&mut parent, u), root(&mut parent, v));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut component_id = vec![usize::MAX; n];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        let rv = root(&mut parent, v);
        if component_id[rv] == usize::MAX {
            component_id[rv] = components.len();
            components.push(Vec::new());
        }
        let id = component_id[rv];
        component_id[v] = id;
        components[id].push(v);
    }
    Ok(ComponentPartition {
        component_id,
        components,
        topo_order: None,
    })
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && (0.0..0.5).contains(&delta) {
        Ok(())
    } else {
        Err(Error::DeltaOutOfRange {
            delta,
            range: "[0, 1/2)",
        })
    }
}

/// Detection on an undirected graph.
///
/// `delta` only sets the size threshold for "large" components in the
/// general path: `2 * size >= n - ceil(2 * delta * n)`.
pub fn detect_undirected(g: &Graph, r: &ReportSet, mode: DetectMode, delta: f64) -> Result<DetectionResult> {
    detect_undirected_budgeted(g, r, mode, delta, DEFAULT_SEARCH_BUDGET)
}

pub fn detect_undirected_budgeted(
    g: &Graph,
    r: &ReportSet,
    mode: DetectMode,
    delta: f64,
    budget: u64,
) -> Result<DetectionResult> {
    if g.is_directed() {
        return Err(Error::WrongOrientation {
            expected: "an undirected",
        });
    }
    check_delta(delta)?;
    let parts = agreement_components(g, r)?;
    let slack = ceil_count(2.0 * delta * g.n() as f64);
    detect_with(g, r, &parts, mode, slack, |large| {
        let weights = ComponentWeights::new(g, &parts);
        let mut admits = Vec::with_capacity(large.len());
        let mut work = 0u64;
        for &c in large {
            let (size, _) = mwis_search(&weights, c, budget, &mut work)?;
            admits.push(2 * size > g.n());
        }
        Ok(admits)
    })
}

/// Detection on a directed graph; large strong components satisfy
/// `2 * size >= n - ceil(4 * delta * n)`.
pub fn detect_directed(g: &Graph, r: &ReportSet, mode: DetectMode, delta: f64) -> Result<DetectionResult> {
    detect_directed_budgeted(g, r, mode, delta, DEFAULT_SEARCH_BUDGET)
}

pub fn detect_directed_budgeted(
    g: &Graph,
    r: &ReportSet,
    mode: DetectMode,
    delta: f64,
    budget: u64,
) -> Result<DetectionResult> {
    if !g.is_directed() {
        return Err(Error::WrongOrientation { expected: "a directed" });
    }
    check_delta(delta)?;
    let parts = agreement_components(g, r)?;
    let slack = ceil_count(4.0 * delta * g.n() as f64);
    detect_with(g, r, &parts, mode, slack, |large| {
        let mut search = UnionSearch::new(g, r, &parts, budget);
        large.iter().map(|&c| search.exists_majority_union(c)).collect()
    })
}

/// Shared skeleton: giant component, otherwise large components decided by
/// `admits`, then propagation. `admits` gets the large component ids and
/// says for each whether it can belong to a consistent truthful majority.
fn detect_with<F>(
    g: &Graph,
    r: &ReportSet,
    parts: &ComponentPartition,
    mode: DetectMode,
    slack: usize,
    admits: F,
) -> Result<DetectionResult>
where
    F: FnOnce(&[usize]) -> Result<Vec<bool>>,
{
    let n = g.n();
    let sizes = parts.sizes();
    let mut res = DetectionResult::empty(
        n,
        match mode {
            DetectMode::Fast => ModeUsed::Fast,
            DetectMode::General => ModeUsed::General,
        },
    );
    if mode == DetectMode::Fast {
        if let Some(c) = (0..sizes.len()).find(|&c| 2 * sizes[c] > n) {
            for &v in &parts.components[c] {
                res.set(v, Label::Truthful, Provenance::GiantComponent)?;
            }
            res.propagate(g, r)?;
            return Ok(res);
        }
        res.mode = ModeUsed::General;
        res.notices.push(Notice::FallbackToGeneral);
    }
    let need = n.saturating_sub(slack);
    let large: Vec<usize> = (0..sizes.len()).filter(|&c| 2 * sizes[c] >= need).collect();
    match large.len() {
        0 => {
            return Err(Error::NoLargeComponent {
                threshold: format!("2*size >= {need}"),
            })
        }
        1 => {
            for &v in &parts.components[large[0]] {
                res.set(v, Label::Truthful, Provenance::GiantComponent)?;
            }
        }
        _ => {
            let ok = admits(&large)?;
            let winners: Vec<usize> = (0..large.len()).filter(|&i| ok[i]).collect();
            if winners.len() != 1 {
                return Err(Error::AmbiguousInstance(format!(
                    "{} of {} large components can lie in a truthful majority",
                    winners.len(),
                    large.len()
                )));
            }
            for (i, &c) in large.iter().enumerate() {
                let label = if ok[i] { Label::Truthful } else { Label::Corrupt };
                for &v in &parts.components[c] {
                    res.set(v, label, Provenance::Disambiguation)?;
                }
            }
        }
    }
    res.propagate(g, r)?;
    Ok(res)
}

/// Union of the agreement-graph components with more than `eps * n`
/// vertices, sorted.
pub fn detect_connected(g: &Graph, r: &ReportSet, eps: f64) -> Result<Vec<usize>> {
    if g.is_directed() {
        return Err(Error::WrongOrientation {
            expected: "an undirected",
        });
    }
    if !(eps.is_finite() && (0.0..1.0).contains(&eps)) {
        return Err(Error::DeltaOutOfRange {
            delta: eps,
            range: "[0, 1)",
        });
    }
    let parts = agreement_components(g, r)?;
    let min_size = floor_count(eps * g.n() as f64) + 1;
    let mut out: Vec<usize> = parts
        .components
        .iter()
        .filter(|c| c.len() >= min_size)
        .flatten()
        .copied()
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// [`detect_connected`] as a labeling, with the verdicts of the identified
/// truthful vertices propagated.
pub fn detect_connected_labels(g: &Graph, r: &ReportSet, eps: f64) -> Result<DetectionResult> {
    let t = detect_connected(g, r, eps)?;
    let mut res = DetectionResult::empty(g.n(), ModeUsed::Connected);
    for v in t {
        res.set(v, Label::Truthful, Provenance::GiantComponent)?;
    }
    res.propagate(g, r)?;
    Ok(res)
}

/// Component graph `S`: one vertex per agreement component, weighted by its
/// share of the vertices, adjacent when some edge of `g` joins the two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentWeights {
    n: usize,
    sizes: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl ComponentWeights {
    pub fn new(g: &Graph, parts: &ComponentPartition) -> Self {
        let s = parts.len();
        let mut adj = vec![Vec::new(); s];
        for (u, v, _) in g.arcs() {
            let (a, b) = (parts.component_id[u], parts.component_id[v]);
            if a != b {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        ComponentWeights {
            n: g.n(),
            sizes: parts.sizes(),
            adj,
        }
    }

    /// Builds `S` directly; `sizes` must be positive and edges in range.
    pub fn from_parts(sizes: Vec<usize>, edges: &[(usize, usize)]) -> Result<Self> {
        let s = sizes.len();
        if sizes.contains(&0) {
            return Err(Error::InvalidParameters("component sizes must be positive".into()));
        }
        let mut adj = vec![Vec::new(); s];
        for &(a, b) in edges {
            if a >= s || b >= s || a == b {
                return Err(Error::InvalidParameters(format!("bad component edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(ComponentWeights {
            n: sizes.iter().sum(),
            sizes,
            adj,
        })
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn size(&self, i: usize) -> usize {
        self.sizes[i]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.sizes[i] as f64 / self.n as f64
    }

    pub fn total(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }
}

/// Maximum-weight independent set of `s` containing `forced`, as (weight,
/// sorted set). Among optimal sets the lexicographically smallest is
/// returned. Exponential in the worst case.
pub fn max_weight_independent_set_containing(s: &ComponentWeights, forced: usize) -> (f64, Vec<usize>) {
    let mut work = 0;
    let (size, set) = mwis_search(s, forced, u64::MAX, &mut work).expect("unbounded search");
    (size as f64 / s.total() as f64, set)
}

/// Budgeted form of [`max_weight_independent_set_containing`] with the
/// weight as an exact vertex count.
pub fn max_weight_independent_set_budgeted(
    s: &ComponentWeights,
    forced: usize,
    budget: u64,
) -> Result<(usize, Vec<usize>)> {
    let mut work = 0;
    mwis_search(s, forced, budget, &mut work)
}

/// Include-first branch and bound over candidates in increasing id order.
/// Only strictly better sets replace the incumbent, so the first optimum
/// found (the lexicographically smallest) is kept.
fn mwis_search(s: &ComponentWeights, forced: usize, budget: u64, work: &mut u64) -> Result<(usize, Vec<usize>)> {
    let k = s.len();
    // blocked[v] counts chosen neighbors of v
    let mut blocked = vec![0u32; k];
    let mut chosen = vec![forced];
    for &w in s.neighbors(forced) {
        blocked[w] += 1;
    }
    let candidates: Vec<usize> = (0..k).filter(|&v| v != forced && blocked[v] == 0).collect();
    // suffix sums of candidate sizes bound what the rest can add
    let mut best = (s.size(forced), vec![forced]);
    let mut current = s.size(forced);
    struct Frame {
        pos: usize,
        included: bool,
    }
    let mut stack: Vec<Frame> = Vec::new();
    let mut pos = 0usize;
    loop {
        *work += 1;
        if *work > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        // remaining capacity among free candidates from pos on
        let free: usize = candidates[pos..]
            .iter()
            .filter(|&&v| blocked[v] == 0)
            .map(|&v| s.size(v))
            .sum();
        let mut descended = false;
        if current + free > best.0 {
            if let Some(off) = candidates[pos..].iter().position(|&v| blocked[v] == 0) {
                let at = pos + off;
                let v = candidates[at];
                chosen.push(v);
                current += s.size(v);
                for &w in s.neighbors(v) {
                    blocked[w] += 1;
                }
                if current > best.0 {
                    let mut set = chosen.clone();
                    set.sort_unstable();
                    best = (current, set);
                }
                stack.push(Frame { pos: at, included: true });
                pos = at + 1;
                descended = true;
            }
        }
        if descended {
            continue;
        }
        // backtrack: flip the deepest include into an exclude
        loop {
            let Some(frame) = stack.last_mut() else {
                return Ok(best);
            };
            let v = candidates[frame.pos];
            if frame.included {
                chosen.pop();
                current -= s.size(v);
                for &w in s.neighbors(v) {
                    blocked[w] -= 1;
                }
                frame.included = false;
                pos = frame.pos + 1;
                break;
            }
            stack.pop();
        }
    }
}

/// Search for a truthful set that is a union of strong components,
/// contains more than half the vertices and is consistent with every
/// report. Each report gives two implications between component types:
/// a truthful source forces the reported type on the target, and the
/// opposite type on the target forces the source corrupt.
struct UnionSearch {
    n: usize,
    sizes: Vec<usize>,
    /// implications on literals `2c` (c truthful) and `2c + 1` (c corrupt)
    imp: Vec<Vec<usize>>,
    forced_corrupt: Vec<usize>,
    order: Vec<usize>,
    budget: u64,
    work: u64,
}

impl UnionSearch {
    fn new(g: &Graph, r: &ReportSet, parts: &ComponentPartition, budget: u64) -> Self {
        let s = parts.len();
        let mut imp = vec![Vec::new(); 2 * s];
        let mut forced_corrupt = Vec::new();
        for (u, v, idx) in g.arcs() {
            let (a, b) = (parts.component_id[u], parts.component_id[v]);
            let verdict = r.by_index(idx);
            if a == b {
                if verdict == Verdict::Corrupt {
                    forced_corrupt.push(a);
                }
                continue;
            }
            let (holds, fails) = match verdict {
                Verdict::Truthful => (2 * b, 2 * b + 1),
                Verdict::Corrupt => (2 * b + 1, 2 * b),
            };
            imp[2 * a].push(holds);
            imp[fails].push(2 * a + 1);
        }
        for list in &mut imp {
            list.sort_unstable();
            list.dedup();
        }
        forced_corrupt.sort_unstable();
        forced_corrupt.dedup();
        let sizes = parts.sizes();
        let mut order: Vec<usize> = (0..s).collect();
        order.sort_by_key(|&c| (std::cmp::Reverse(sizes[c]), c));
        UnionSearch {
            n: g.n(),
            sizes,
            imp,
            forced_corrupt,
            order,
            budget,
            work: 0,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.work += 1;
        if self.work > self.budget {
            Err(Error::BudgetExceeded { budget: self.budget })
        } else {
            Ok(())
        }
    }

    /// Whether some consistent truthful majority contains component `c`.
    fn exists_majority_union(&mut self, c: usize) -> Result<bool> {
        let s = self.sizes.len();
        let mut st = State {
            value: vec![None; s],
            trail: Vec::new(),
            truthful: 0,
            free: self.n,
        };
        for i in 0..self.forced_corrupt.len() {
            let x = self.forced_corrupt[i];
            if !self.assign(&mut st, 2 * x + 1)? {
                return Ok(false);
            }
        }
        if !self.assign(&mut st, 2 * c)? {
            return Ok(false);
        }
        // Once propagation settles, setting every unassigned component
        // corrupt is consistent, so a majority of assigned truthful
        // vertices is a witness.
        struct Frame {
            at: usize,
            mark: usize,
            tried_corrupt: bool,
        }
        let mut stack: Vec<Frame> = Vec::new();
        let mut at = 0usize;
        loop {
            self.tick()?;
            let mut descend = None;
            if 2 * st.truthful > self.n {
                return Ok(true);
            }
            if 2 * (st.truthful + st.free) > self.n {
                descend = self.order[at..].iter().position(|&x| st.value[x].is_none()).map(|o| at + o);
            }
            if let Some(next) = descend {
                let mark = st.trail.len();
                stack.push(Frame {
                    at: next,
                    mark,
                    tried_corrupt: false,
                });
                let lit = 2 * self.order[next];
                if self.assign(&mut st, lit)? {
                    at = next + 1;
                    continue;
                }
            }
            // backtrack
            loop {
                let Some(frame) = stack.last_mut() else {
                    return Ok(false);
                };
                st.undo(frame.mark, &self.sizes);
                if frame.tried_corrupt {
                    stack.pop();
                    continue;
                }
                frame.tried_corrupt = true;
                let (next, lit) = (frame.at, 2 * self.order[frame.at] + 1);
                if self.assign(&mut st, lit)? {
                    at = next + 1;
                    break;
                }
            }
        }
    }

    /// Sets literal `lit` and its consequences; false on contradiction
    /// (partial assignments stay on the trail for the caller to undo).
    fn assign(&mut self, st: &mut State, lit: usize) -> Result<bool> {
        let mut queue = vec![lit];
        while let Some(l) = queue.pop() {
            self.tick()?;
            let (c, truthful) = (l / 2, l % 2 == 0);
            match st.value[c] {
                Some(t) if t == truthful => continue,
                Some(_) => return Ok(false),
                None => {}
            }
            st.value[c] = Some(truthful);
            st.trail.push(c);
            st.free -= self.sizes[c];
            if truthful {
                st.truthful += self.sizes[c];
            }
            queue.extend_from_slice(&self.imp[l]);
        }
        Ok(true)
    }
}

struct State {
    value: Vec<Option<bool>>,
    trail: Vec<usize>,
    truthful: usize,
    free: usize,
}

impl State {
    fn undo(&mut self, mark: usize, sizes: &[usize]) {
        while self.trail.len() > mark {
            let c = self.trail.pop().expect("trail above mark");
            if self.value[c] == Some(true) {
                self.truthful -= sizes[c];
            }
            self.free += sizes[c];
            self.value[c] = None;
        }
    }
}

/// Labels forced by the reports alone: truthful (corrupt) iff truthful
/// (corrupt) in every consistent world with a truthful majority.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertainLabels {
    pub labels: Vec<Label>,
    pub consistent_worlds: usize,
    /// No consistent world with a truthful majority exists; every label is
    /// then Unknown.
    pub no_consistent_world: bool,
}

pub fn certain_labels(g: &Graph, r: &ReportSet) -> Result<CertainLabels> {
    certain_labels_bounded(g, r, ORACLE_BOUND)
}

pub fn certain_labels_bounded(g: &Graph, r: &ReportSet, bound: usize) -> Result<CertainLabels> {
    certain_labels_with(g, r, g.n() / 2 + 1, bound)
}

/// Certainty over consistent worlds with at least `min_truthful` truthful
/// vertices instead of a strict majority.
pub fn certain_labels_with(g: &Graph, r: &ReportSet, min_truthful: usize, bound: usize) -> Result<CertainLabels> {
    let n = g.n();
    let mut all = u64::MAX;
    let mut any = 0u64;
    let mut count = 0usize;
    for_each_consistent_mask(g, r, min_truthful, bound, |mask| {
        all &= mask;
        any |= mask;
        count += 1;
    })?;
    if count == 0 {
        return Ok(CertainLabels {
            labels: vec![Label::Unknown; n],
            consistent_worlds: 0,
            no_consistent_world: true,
        });
    }
    let labels = (0..n)
        .map(|v| {
            if all >> v & 1 == 1 {
                Label::Truthful
            } else if any >> v & 1 == 0 {
                Label::Corrupt
            } else {
                Label::Unknown
            }
        })
        .collect();
    Ok(CertainLabels {
        labels,
        consistent_worlds: count,
        no_consistent_world: false,
    })
}
