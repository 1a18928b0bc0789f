//! Instance builders for the two lower-bound constructions: the
//! independent-set reduction gadget, and the family of scenarios over a
//! small separator whose report sets coincide.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::reporting::{generate_reports, Adversary, ReportSet, Verdict, World};
use crate::sizes::floor_count;

/// Reduction input. `h` is placed on `v3` (`v3[i]` is the image of vertex
/// `i` of `h`); `base` is the expander the reduction starts from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetSpec {
    pub base: Graph,
    pub h: Graph,
    pub a: Rational64,
    pub b: Rational64,
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub v3: Vec<usize>,
}

/// Which part of the gadget partition a vertex lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Part {
    V1,
    V2,
    V3,
}

impl GadgetSpec {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn m(&self) -> usize {
        self.h.n()
    }

    pub fn parts(&self) -> Result<Vec<Part>> {
        let n = self.n();
        let mut part: Vec<Option<Part>> = vec![None; n];
        for (list, p) in [(&self.v1, Part::V1), (&self.v2, Part::V2), (&self.v3, Part::V3)] {
            for &v in list {
                if v >= n {
                    return Err(Error::InvalidGadget(format!("vertex {v} outside [0, {n})")));
                }
                if part[v].replace(p).is_some() {
                    return Err(Error::InvalidGadget(format!("vertex {v} placed twice")));
                }
            }
        }
        part.into_iter()
            .enumerate()
            .map(|(v, p)| p.ok_or_else(|| Error::InvalidGadget(format!("vertex {v} not placed"))))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidGadget(m));
        if self.base.is_directed() || self.h.is_directed() {
            return bad("base and h must be undirected".into());
        }
        if self.h.max_degree() > 4 {
            return bad(format!("h has a vertex of degree {}", self.h.max_degree()));
        }
        let half = Rational64::new(1, 2);
        let zero = Rational64::from_integer(0);
        if !(zero < self.b && self.b < self.a && self.a < half) {
            return bad(format!("need 0 < b < a < 1/2 (a = {}, b = {})", self.a, self.b));
        }
        let part = self.parts()?;
        if self.v3.len() != self.m() {
            return bad(format!("|V3| = {} but h has {} vertices", self.v3.len(), self.m()));
        }
        for &x in &self.v3 {
            for &y in self.base.out_neighbors(x) {
                if part[y] != Part::V2 {
                    return bad(format!("V3 vertex {x} has base neighbor {y} outside V2"));
                }
            }
        }
        let (n, m) = (self.n() as i64, self.m() as i64);
        let am = self.a * Rational64::from_integer(m);
        let want_v1 = Rational64::new(n, 2) - am;
        let want_v2 = Rational64::new(n, 2) - Rational64::from_integer(m) + am;
        if Rational64::from_integer(self.v1.len() as i64) != want_v1 {
            return bad(format!("|V1| = {} but n/2 - am = {want_v1}", self.v1.len()));
        }
        if Rational64::from_integer(self.v2.len() as i64) != want_v2 {
            return bad(format!("|V2| = {} but n/2 - m + am = {want_v2}", self.v2.len()));
        }
        Ok(())
    }

    /// Truthful set `V1 ∪ I` for an independent set `i_set` of `h`.
    pub fn world_for(&self, i_set: &[usize]) -> Result<World> {
        let mut t = self.v1.clone();
        for &i in i_set {
            let &v = self
                .v3
                .get(i)
                .ok_or_else(|| Error::InvalidGadget(format!("h has no vertex {i}")))?;
            t.push(v);
        }
        World::from_truthful(self.n(), &t).map_err(|e| Error::InvalidGadget(e.to_string()))
    }
}

/// Base graph, `h` edges on `V3`, and the gadget's fixed reports: `V1` and
/// `V2` praise their own part and accuse everything else, `V3` accuses all.
pub fn build_np_gadget(spec: &GadgetSpec) -> Result<(Graph, ReportSet)> {
    spec.validate()?;
    let part = spec.parts()?;
    let mut edges = spec.base.edges().to_vec();
    edges.extend(spec.h.edges().iter().map(|&(x, y)| (spec.v3[x], spec.v3[y])));
    let g = Graph::undirected(spec.n(), edges)?;
    let verdicts = g
        .arcs()
        .map(|(u, v, _)| match part[u] {
            Part::V3 => Verdict::Corrupt,
            p => Verdict::from_bool(part[v] == p),
        })
        .collect();
    let r = ReportSet::from_verdicts(&g, verdicts)?;
    Ok((g, r))
}

/// Gadget over the dense base used for small fixtures: a clique on
/// `V1 ∪ V2` with every `V3` vertex joined to all of `V2`. Vertices are laid
/// out as `V1`, then `V2`, then `V3`.
pub fn dense_gadget(n: usize, h: Graph, a: Rational64, b: Rational64) -> Result<GadgetSpec> {
    let m = h.n();
    let (v1, v2) = part_sizes(n, m, a)
        .ok_or_else(|| Error::InvalidGadget(format!("(n={n}, m={m}, a={a}) gives non-integral or empty parts")))?;
    let v1: Vec<usize> = (0..v1).collect();
    let v2: Vec<usize> = (v1.len()..v1.len() + v2).collect();
    let v3: Vec<usize> = (v1.len() + v2.len()..n).collect();
    let mut edges = Vec::new();
    let core = v1.len() + v2.len();
    for u in 0..core {
        for w in u + 1..core {
            edges.push((u, w));
        }
    }
    for &x in &v3 {
        for &y in &v2 {
            edges.push((y, x));
        }
    }
    let spec = GadgetSpec {
        base: Graph::undirected(n, edges)?,
        h,
        a,
        b,
        v1,
        v2,
        v3,
    };
    spec.validate()?;
    Ok(spec)
}

/// `(|V1|, |V2|)` when both are positive integers and the parts fit in `n`.
pub fn part_sizes(n: usize, m: usize, a: Rational64) -> Option<(usize, usize)> {
    if !n.is_multiple_of(2) || m > n {
        return None;
    }
    let am = a * Rational64::from_integer(m as i64);
    if !am.is_integer() {
        return None;
    }
    let am = am.to_integer();
    let half = (n / 2) as i64;
    let v1 = half - am;
    let v2 = half - m as i64 + am;
    (v1 >= 1 && v2 >= 1).then_some((v1 as usize, v2 as usize))
}

/// Admissible small `(n, m, a)` with `a = p/q < 1/2`, `q <= max_den`,
/// `n <= max_n`, integral non-empty parts and `2 <= m`.
pub fn admissible_tuples(max_n: usize, max_den: i64) -> Vec<(usize, usize, Rational64)> {
    let mut out = Vec::new();
    let mut ratios: Vec<Rational64> = Vec::new();
    for q in 2..=max_den {
        for p in 1..q {
            let r = Rational64::new(p, q);
            if r < Rational64::new(1, 2) && !ratios.contains(&r) {
                ratios.push(r);
            }
        }
    }
    ratios.sort();
    for n in (2..=max_n).step_by(2) {
        for m in 2..=n {
            for &a in &ratios {
                if part_sizes(n, m, a).is_some() {
                    out.push((n, m, a));
                }
            }
        }
    }
    out
}

/// Size of a maximum independent set, by exhaustive search (m <= 30).
pub fn independence_number(h: &Graph) -> usize {
    let m = h.n();
    assert!(m <= 30, "independence_number is exhaustive; m = {m}");
    let nbr: Vec<u32> = (0..m)
        .map(|v| h.out_neighbors(v).iter().fold(0u32, |acc, &w| acc | 1 << w))
        .collect();
    (0u32..1 << m)
        .filter(|&s| (0..m).all(|v| s >> v & 1 == 0 || nbr[v] & s == 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// All independent sets of `h`, as sorted vertex lists (m <= 20).
pub fn independent_sets(h: &Graph) -> Vec<Vec<usize>> {
    let m = h.n();
    assert!(m <= 20, "independent_sets is exhaustive; m = {m}");
    let nbr: Vec<u32> = (0..m)
        .map(|v| h.out_neighbors(v).iter().fold(0u32, |acc, &w| acc | 1 << w))
        .collect();
    (0u32..1 << m)
        .filter(|&s| (0..m).all(|v| s >> v & 1 == 0 || nbr[v] & s == 0))
        .map(|s| (0..m).filter(|&v| s >> v & 1 == 1).collect())
        .collect()
}

/// Scenarios `R_i` over a separator: in scenario `i` the corrupt set is the
/// separator plus component `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioFamily {
    pub separator: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    pub scenarios: Vec<World>,
    pub reports: Vec<ReportSet>,
}

impl ScenarioFamily {
    pub fn len(&self) -> usize {
        self.scenarios.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty()
    }

    /// Vertices truthful in every scenario.
    pub fn common_truthful(&self) -> Vec<usize> {
        let Some(first) = self.scenarios.first() else {
            return Vec::new();
        };
        (0..first.n())
            .filter(|&v| self.scenarios.iter().all(|w| w.is_truthful(v)))
            .collect()
    }
}

pub fn build_separator_scenarios(g: &Graph, separator: &[usize], eps: f64) -> Result<ScenarioFamily> {
    if g.is_directed() {
        return Err(Error::WrongOrientation {
            expected: "an undirected",
        });
    }
    if !(eps.is_finite() && eps > 0.0 && eps < 1.0) {
        return Err(Error::DeltaOutOfRange {
            delta: eps,
            range: "(0, 1)",
        });
    }
    let n = g.n();
    let cap = floor_count(eps * n as f64);
    let mut in_sep = vec![false; n];
    for &s in separator {
        if s >= n {
            return Err(Error::InvalidSeparator(format!("vertex {s} outside [0, {n})")));
        }
        if in_sep[s] {
            return Err(Error::InvalidSeparator(format!("vertex {s} listed twice")));
        }
        in_sep[s] = true;
    }
    if separator.len() > cap {
        return Err(Error::InvalidSeparator(format!(
            "separator has {} vertices, more than eps*n = {cap}",
            separator.len()
        )));
    }
    let components = components_without(g, &in_sep);
    if let Some(c) = components.iter().find(|c| c.len() > cap) {
        return Err(Error::InvalidSeparator(format!(
            "component of {} vertices (starting at {}) exceeds eps*n = {cap}",
            c.len(),
            c[0]
        )));
    }
    let mut sep = separator.to_vec();
    sep.sort_unstable();
    let adv = Adversary::ScenarioRi { separator: sep.clone() };
    let mut scenarios = Vec::with_capacity(components.len());
    let mut reports = Vec::with_capacity(components.len());
    for comp in &components {
        let mut truthful = vec![true; n];
        for &v in sep.iter().chain(comp) {
            truthful[v] = false;
        }
        let w = World::from_flags(truthful);
        reports.push(generate_reports(g, &w, &adv)?);
        scenarios.push(w);
    }
    Ok(ScenarioFamily {
        separator: sep,
        components,
        scenarios,
        reports,
    })
}

/// True iff every scenario produced the same verdict on every arc.
pub fn verify_indistinguishable(family: &ScenarioFamily) -> bool {
    family.reports.windows(2).all(|w| w[0] == w[1])
}

/// Components of `g` after deleting `removed`, each sorted, ordered by
/// smallest vertex.
fn components_without(g: &Graph, removed: &[bool]) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = removed.to_vec();
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &v in g.out_neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Middle row `rows / 2` of a `rows x cols` grid.
pub fn grid_middle_row(rows: usize, cols: usize) -> Vec<usize> {
    let r = rows / 2;
    (0..cols).map(|c| r * cols + c).collect()
}

/// Middle column `cols / 2` of a `rows x cols` grid.
pub fn grid_middle_column(rows: usize, cols: usize) -> Vec<usize> {
    let c = cols / 2;
    (0..rows).map(|r| r * cols + c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::{agreement_graph, certain_labels, certain_labels_with, Label};
    use crate::generators::{complete, cycle, grid};
    use crate::graph::connected_components;
    use crate::reporting::{consistency_check, enumerate_consistent, ORACLE_BOUND};

    fn path(m: usize) -> Graph {
        Graph::undirected(m, (1..m).map(|i| (i - 1, i)).collect()).unwrap()
    }

    fn quarter() -> (Rational64, Rational64) {
        (Rational64::new(1, 4), Rational64::new(1, 8))
    }

    #[test]
    fn gadget_components() {
        let (a, b) = quarter();
        let spec = dense_gadget(12, path(4), a, b).unwrap();
        assert_eq!((spec.v1.len(), spec.v2.len(), spec.v3.len()), (5, 3, 4));
        let (g, r) = build_np_gadget(&spec).unwrap();
        let parts = connected_components(&agreement_graph(&g, &r).unwrap()).unwrap();
        let mut expect = vec![spec.v1.clone(), spec.v2.clone()];
        expect.extend(spec.v3.iter().map(|&v| vec![v]));
        expect.sort();
        let mut got = parts.components.clone();
        got.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn gadget_max_truthful_matches_independence_number() {
        let (a, b) = quarter();
        for (n, h) in [(12, path(4)), (16, cycle(4))] {
            let spec = dense_gadget(n, h.clone(), a, b).unwrap();
            let (g, r) = build_np_gadget(&spec).unwrap();
            for i in independent_sets(&h) {
                assert!(consistency_check(&g, &r, &spec.world_for(&i).unwrap()));
            }
            let worlds = enumerate_consistent(&g, &r, n / 2 + 1, ORACLE_BOUND).unwrap();
            let best = worlds.iter().map(|w| w.truthful_count()).max().unwrap();
            assert_eq!(best, spec.v1.len() + independence_number(&h));
        }
    }

    #[test]
    fn gadget_rejects_bad_placement() {
        let (a, b) = quarter();
        assert!(dense_gadget(12, path(5), a, b).is_err());
        let mut spec = dense_gadget(12, path(4), a, b).unwrap();
        spec.v1.swap_remove(0);
        assert!(matches!(build_np_gadget(&spec), Err(Error::InvalidGadget(_))));
        let mut spec = dense_gadget(12, path(4), a, b).unwrap();
        spec.b = Rational64::new(1, 2);
        assert!(spec.validate().is_err());
        let mut spec = dense_gadget(12, path(4), a, b).unwrap();
        spec.h = complete(4);
        spec.base = complete(12);
        assert!(spec.validate().is_err());
    }

    #[test]
    fn planned_tuples_are_admissible() {
        let tuples = admissible_tuples(20, 5);
        for t in [(12, 4, (1, 4)), (16, 4, (1, 4)), (20, 6, (1, 3)), (14, 6, (1, 3)), (18, 5, (2, 5)), (10, 4, (1, 4))] {
            assert!(tuples.contains(&(t.0, t.1, Rational64::new(t.2 .0, t.2 .1))), "{t:?}");
        }
        assert!(!tuples.contains(&(12, 5, Rational64::new(1, 4))));
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(independence_number(&path(4)), 2);
        assert_eq!(independence_number(&cycle(5)), 2);
        assert_eq!(independence_number(&complete(4)), 1);
        assert_eq!(independent_sets(&path(3)).len(), 5);
    }

    #[test]
    fn grid_scenarios() {
        let g = grid(5, 5);
        let fam = build_separator_scenarios(&g, &grid_middle_row(5, 5), 0.4).unwrap();
        assert_eq!(fam.len(), 2);
        for w in &fam.scenarios {
            assert_eq!(w.corrupt().len(), 15);
        }
        assert!(verify_indistinguishable(&fam));
        assert!(fam.common_truthful().is_empty());

        let g = grid(3, 3);
        let fam = build_separator_scenarios(&g, &grid_middle_column(3, 3), 1.0 / 3.0).unwrap();
        assert_eq!(fam.components, vec![vec![0, 3, 6], vec![2, 5, 8]]);
        assert!(verify_indistinguishable(&fam));
        // every scenario has 3 truthful vertices; with that budget nothing is certain
        let c = certain_labels_with(&g, &fam.reports[0], 3, ORACLE_BOUND).unwrap();
        assert!(!c.labels.contains(&Label::Truthful));
        // a strict majority forces both outer columns truthful
        let c = certain_labels(&g, &fam.reports[0]).unwrap();
        assert_eq!(c.consistent_worlds, 1);
        assert_eq!(c.labels[0], Label::Truthful);
        let worlds = enumerate_consistent(&g, &fam.reports[0], 3, ORACLE_BOUND).unwrap();
        for w in &fam.scenarios {
            assert!(worlds.contains(w));
        }
    }

    #[test]
    fn empty_separator_on_disconnected_graph() {
        let g = Graph::undirected(6, vec![(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let fam = build_separator_scenarios(&g, &[], 0.5).unwrap();
        assert_eq!(fam.len(), 2);
        assert!(verify_indistinguishable(&fam));
        assert!(fam.reports[0].verdicts().iter().all(|&v| v == Verdict::Truthful));
    }

    #[test]
    fn perturbed_family_is_distinguishable() {
        let g = grid(5, 5);
        let mut fam = build_separator_scenarios(&g, &grid_middle_row(5, 5), 0.4).unwrap();
        let mut v = fam.reports[1].verdicts().to_vec();
        v[0] = match v[0] {
            Verdict::Truthful => Verdict::Corrupt,
            Verdict::Corrupt => Verdict::Truthful,
        };
        fam.reports[1] = ReportSet::from_verdicts(&g, v).unwrap();
        assert!(!verify_indistinguishable(&fam));
        fam.reports.truncate(1);
        assert!(verify_indistinguishable(&fam));
    }

    #[test]
    fn separator_errors() {
        let g = grid(5, 5);
        assert!(matches!(
            build_separator_scenarios(&g, &grid_middle_row(5, 5), 0.3),
            Err(Error::InvalidSeparator(_))
        ));
        assert!(matches!(
            build_separator_scenarios(&g, &(0..12).collect::<Vec<_>>(), 0.4),
            Err(Error::InvalidSeparator(_))
        ));
    }
}
