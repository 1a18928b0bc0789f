//! Ground-truth worlds, report generation under adversary strategies, and
//! consistency of candidate worlds with a report set.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default vertex bound for the exponential oracles.
pub const ORACLE_BOUND: usize = 25;
/// Hard ceiling of the bitmask representation used by the oracles.
pub const ORACLE_HARD_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Truthful,
    Corrupt,
}

impl Verdict {
    pub fn from_bool(truthful: bool) -> Self {
        if truthful {
            Verdict::Truthful
        } else {
            Verdict::Corrupt
        }
    }

    pub fn letter(self) -> char {
        match self {
            Verdict::Truthful => 'T',
            Verdict::Corrupt => 'C',
        }
    }
}

/// Partition of the vertices into truthful and corrupt.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct World {
    truthful: Vec<bool>,
}

impl World {
    pub fn from_flags(truthful: Vec<bool>) -> Self {
        World { truthful }
    }

    /// World on `n` vertices whose truthful set is `t`.
    pub fn from_truthful(n: usize, t: &[usize]) -> Result<Self> {
        let mut flags = vec![false; n];
        for &v in t {
            if v >= n {
                return Err(Error::InvalidWorld(format!("vertex {v} outside [0, {n})")));
            }
            if flags[v] {
                return Err(Error::InvalidWorld(format!("vertex {v} listed twice")));
            }
            flags[v] = true;
        }
        Ok(World { truthful: flags })
    }

    /// World whose truthful set is a uniformly shuffled prefix of size `t`.
    pub fn random<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> Result<Self> {
        if t > n {
            return Err(Error::InvalidWorld(format!("|T| = {t} exceeds n = {n}")));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        World::from_truthful(n, &order[..t])
    }

    pub fn all_truthful(n: usize) -> Self {
        World {
            truthful: vec![true; n],
        }
    }

    pub fn n(&self) -> usize {
        self.truthful.len()
    }

    pub fn is_truthful(&self, v: usize) -> bool {
        self.truthful[v]
    }

    pub fn verdict(&self, v: usize) -> Verdict {
        Verdict::from_bool(self.truthful[v])
    }

    pub fn flags(&self) -> &[bool] {
        &self.truthful
    }

    pub fn truthful(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.truthful[v]).collect()
    }

    pub fn corrupt(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| !self.truthful[v]).collect()
    }

    pub fn truthful_count(&self) -> usize {
        self.truthful.iter().filter(|&&t| t).count()
    }

    pub fn check_for(&self, g: &Graph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::InvalidWorld(format!(
                "world has {} vertices, graph has {}",
                self.n(),
                g.n()
            )));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let join = |v: Vec<usize>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        format!("T: {}\nB: {}\n", join(self.truthful()), join(self.corrupt()))
    }

    /// Parses the `T: ids` / `B: ids` format; together the lists must cover
    /// `0..n` exactly once.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut t = None;
        let mut b = None;
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (tag, rest) = line.split_once(':').ok_or(Error::Parse {
                line: ln + 1,
                msg: "expected `T:` or `B:`".into(),
            })?;
            let ids = rest
                .split_whitespace()
                .map(|s| {
                    s.parse::<usize>().map_err(|_| Error::Parse {
                        line: ln + 1,
                        msg: format!("bad vertex id `{s}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            match tag.trim() {
                "T" => t = Some(ids),
                "B" => b = Some(ids),
                other => {
                    return Err(Error::Parse {
                        line: ln + 1,
                        msg: format!("unknown tag `{other}`"),
                    })
                }
            }
        }
        let (t, b) = (t.unwrap_or_default(), b.unwrap_or_default());
        let n = t.len() + b.len();
        let world = World::from_truthful(n, &t)?;
        for &v in &b {
            if v >= n || world.truthful[v] {
                return Err(Error::InvalidWorld(format!("vertex {v} misplaced in B list")));
            }
        }
        let mut seen = vec![false; n];
        for &v in &b {
            if seen[v] {
                return Err(Error::InvalidWorld(format!("vertex {v} listed twice")));
            }
            seen[v] = true;
        }
        Ok(world)
    }
}

/// One verdict per inspection arc, aligned with [`Graph::arcs`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReportSet {
    verdicts: Vec<Verdict>,
}

impl ReportSet {
    pub fn from_verdicts(g: &Graph, verdicts: Vec<Verdict>) -> Result<Self> {
        if verdicts.len() != g.arc_count() {
            return Err(Error::InvalidReports(format!(
                "{} verdicts for {} arcs",
                verdicts.len(),
                g.arc_count()
            )));
        }
        Ok(ReportSet { verdicts })
    }

    pub fn len(&self) -> usize {
        self.verdicts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verdicts.is_empty()
    }

    pub fn verdicts(&self) -> &[Verdict] {
        &self.verdicts
    }

    pub fn by_index(&self, arc: usize) -> Verdict {
        self.verdicts[arc]
    }

    /// What `u` reported about `v`, if `(u, v)` is an inspection arc.
    pub fn get(&self, g: &Graph, u: usize, v: usize) -> Option<Verdict> {
        g.arc_index(u, v).map(|i| self.verdicts[i])
    }

    pub fn check_for(&self, g: &Graph) -> Result<()> {
        if self.verdicts.len() != g.arc_count() {
            return Err(Error::InvalidReports(format!(
                "{} verdicts for {} arcs",
                self.verdicts.len(),
                g.arc_count()
            )));
        }
        Ok(())
    }

    pub fn to_text(&self, g: &Graph) -> String {
        let mut out = String::with_capacity(12 * self.verdicts.len());
        for (u, v, idx) in g.arcs() {
            let _ = writeln!(out, "{u} {v} {}", self.verdicts[idx].letter());
        }
        out
    }

    /// Parses `u v T|C` lines; every arc of `g` must appear exactly once.
    pub fn from_text(g: &Graph, text: &str) -> Result<Self> {
        let mut verdicts: Vec<Option<Verdict>> = vec![None; g.arc_count()];
        for (ln, line) in text.lines().enumerate() {
            let mut it = line.split_whitespace();
            let Some(first) = it.next() else { continue };
            let (Some(second), Some(third), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse {
                    line: ln + 1,
                    msg: "report line must be `u v T|C`".into(),
                });
            };
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| Error::Parse {
                    line: ln + 1,
                    msg: format!("bad vertex id `{s}`"),
                })
            };
            let (u, v) = (parse(first)?, parse(second)?);
            let verdict = match third {
                "T" => Verdict::Truthful,
                "C" => Verdict::Corrupt,
                other => {
                    return Err(Error::Parse {
                        line: ln + 1,
                        msg: format!("verdict must be T or C, got `{other}`"),
                    })
                }
            };
            let idx = (u < g.n() && v < g.n())
                .then(|| g.arc_index(u, v))
                .flatten()
                .ok_or_else(|| Error::InvalidReports(format!("({u}, {v}) is not an inspection arc")))?;
            if verdicts[idx].replace(verdict).is_some() {
                return Err(Error::InvalidReports(format!("duplicate report for ({u}, {v})")));
            }
        }
        let verdicts = verdicts
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or(i))
            .collect::<std::result::Result<Vec<_>, usize>>()
            .map_err(|i| Error::InvalidReports(format!("missing report for arc index {i}")))?;
        Ok(ReportSet { verdicts })
    }
}

/// Reporting strategy of the corrupt vertices. Adversaries know the graph
/// and the world; they only ever decide verdicts on arcs leaving a corrupt
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "kebab-case")]
pub enum Adversary {
    /// Paired corrupt vertices `V2` behave as if they were the truthful set:
    /// praise `V2`, accuse everyone else. Unpaired corrupt vertices accuse
    /// everyone. `pairing` lists `(truthful, corrupt)` pairs; `None` zips the
    /// sorted truthful and corrupt sets.
    MirrorConfusion { pairing: Option<Vec<(usize, usize)>> },
    /// Separator vertices accuse all neighbors; other corrupt vertices praise
    /// corrupt non-separator neighbors and accuse the rest.
    ScenarioRi { separator: Vec<usize> },
    /// Praise corrupt neighbors, accuse truthful ones.
    ColludePraise,
    AllAccuse,
    Random { seed: u64 },
    /// Fixed verdicts (e.g. read from a report file); only the entries on
    /// corrupt-source arcs are used.
    Scripted { verdicts: Vec<Verdict> },
}

impl Adversary {
    pub fn name(&self) -> &'static str {
        match self {
            Adversary::MirrorConfusion { .. } => "mirror-confusion",
            Adversary::ScenarioRi { .. } => "scenario-ri",
            Adversary::ColludePraise => "collude-praise",
            Adversary::AllAccuse => "all-accuse",
            Adversary::Random { .. } => "random",
            Adversary::Scripted { .. } => "scripted",
        }
    }
}

/// Validated mirror set `V2` for the mirror-confusion strategy.
pub fn mirror_set(w: &World, pairing: Option<&[(usize, usize)]>) -> Result<Vec<bool>> {
    let n = w.n();
    let mut v2 = vec![false; n];
    match pairing {
        None => {
            for (_, b) in w.truthful().into_iter().zip(w.corrupt()) {
                v2[b] = true;
            }
        }
        Some(pairs) => {
            let mut seen = vec![false; n];
            for &(t, b) in pairs {
                if t >= n || b >= n {
                    return Err(Error::InvalidPairing(format!("pair ({t}, {b}) out of range")));
                }
                if !w.is_truthful(t) || w.is_truthful(b) {
                    return Err(Error::InvalidPairing(format!(
                        "pair ({t}, {b}) must be (truthful, corrupt)"
                    )));
                }
                if seen[t] || seen[b] {
                    return Err(Error::InvalidPairing(format!("vertex repeated in pair ({t}, {b})")));
                }
                seen[t] = true;
                seen[b] = true;
                v2[b] = true;
            }
        }
    }
    Ok(v2)
}

pub fn generate_reports(g: &Graph, w: &World, adv: &Adversary) -> Result<ReportSet> {
    w.check_for(g)?;
    let n = g.n();
    let mut verdicts = Vec::with_capacity(g.arc_count());
    let mut corrupt_choice: Box<dyn FnMut(usize, usize, usize) -> Verdict> = match adv {
        Adversary::MirrorConfusion { pairing } => {
            let v2 = mirror_set(w, pairing.as_deref())?;
            Box::new(move |u, v, _| Verdict::from_bool(v2[u] && v2[v]))
        }
        Adversary::ScenarioRi { separator } => {
            let mut sep = vec![false; n];
            for &s in separator {
                if s >= n {
                    return Err(Error::InvalidParameters(format!("separator vertex {s} out of range")));
                }
                sep[s] = true;
            }
            let flags = w.flags().to_vec();
            Box::new(move |u, v, _| Verdict::from_bool(!sep[u] && !sep[v] && !flags[v]))
        }
        Adversary::ColludePraise => {
            let flags = w.flags().to_vec();
            Box::new(move |_, v, _| Verdict::from_bool(!flags[v]))
        }
        Adversary::AllAccuse => Box::new(|_, _, _| Verdict::Corrupt),
        Adversary::Random { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Box::new(move |_, _, _| Verdict::from_bool(rng.gen::<bool>()))
        }
        Adversary::Scripted { verdicts: script } => {
            if script.len() != g.arc_count() {
                return Err(Error::InvalidReports(format!(
                    "script has {} verdicts for {} arcs",
                    script.len(),
                    g.arc_count()
                )));
            }
            let script = script.clone();
            Box::new(move |_, _, idx| script[idx])
        }
    };
    for (u, v, idx) in g.arcs() {
        let verdict = if w.is_truthful(u) {
            w.verdict(v)
        } else {
            corrupt_choice(u, v, idx)
        };
        verdicts.push(verdict);
    }
    Ok(ReportSet { verdicts })
}

/// True iff every truthful reporter of `candidate` reports correctly.
pub fn consistency_check(g: &Graph, r: &ReportSet, candidate: &World) -> bool {
    g.arcs()
        .all(|(u, v, idx)| !candidate.is_truthful(u) || r.by_index(idx) == candidate.verdict(v))
}

/// All worlds with at least `min_truthful` truthful vertices that are
/// consistent with `r`, in depth-first order (vertex 0 first, truthful
/// before corrupt). Exponential; refuses graphs above `bound` vertices.
pub fn enumerate_consistent(g: &Graph, r: &ReportSet, min_truthful: usize, bound: usize) -> Result<Vec<World>> {
    let mut out = Vec::new();
    for_each_consistent_mask(g, r, min_truthful, bound, |mask| {
        out.push(World::from_flags((0..g.n()).map(|v| mask >> v & 1 == 1).collect()));
    })?;
    Ok(out)
}

/// Bitmask form of [`enumerate_consistent`]: calls `visit` with each
/// consistent truthful set.
pub fn for_each_consistent_mask<F: FnMut(u64)>(
    g: &Graph,
    r: &ReportSet,
    min_truthful: usize,
    bound: usize,
    mut visit: F,
) -> Result<()> {
    let n = g.n();
    let bound = bound.min(ORACLE_HARD_LIMIT);
    if n > bound {
        return Err(Error::OracleBound { n, bound });
    }
    r.check_for(g)?;
    let mut praise_out = vec![0u64; n];
    let mut accuse_out = vec![0u64; n];
    let mut praised_by = vec![0u64; n];
    let mut accused_by = vec![0u64; n];
    for (u, v, idx) in g.arcs() {
        match r.by_index(idx) {
            Verdict::Truthful => {
                praise_out[u] |= 1 << v;
                praised_by[v] |= 1 << u;
            }
            Verdict::Corrupt => {
                accuse_out[u] |= 1 << v;
                accused_by[v] |= 1 << u;
            }
        }
    }
    let tables = Tables {
        n,
        min_truthful,
        praise_out,
        accuse_out,
        praised_by,
        accused_by,
    };
    tables.search(0, 0, 0, &mut visit);
    Ok(())
}

struct Tables {
    n: usize,
    min_truthful: usize,
    praise_out: Vec<u64>,
    accuse_out: Vec<u64>,
    praised_by: Vec<u64>,
    accused_by: Vec<u64>,
}

impl Tables {
    /// `truth` holds the truthful vertices among `0..i`.
    fn search<F: FnMut(u64)>(&self, i: usize, truth: u64, count: usize, visit: &mut F) {
        if count + (self.n - i) < self.min_truthful {
            return;
        }
        if i == self.n {
            visit(truth);
            return;
        }
        let assigned: u64 = if i == 64 { u64::MAX } else { (1u64 << i) - 1 };
        let corrupt_assigned = assigned & !truth;
        let bit = 1u64 << i;
        // i truthful: its reports on assigned vertices hold, and truthful
        // assigned vertices reported it truthful
        if self.praise_out[i] & corrupt_assigned == 0
            && self.accuse_out[i] & truth == 0
            && self.accused_by[i] & truth == 0
        {
            self.search(i + 1, truth | bit, count + 1, visit);
        }
        // i corrupt: no truthful assigned vertex praised it
        if self.praised_by[i] & truth == 0 {
            self.search(i + 1, truth, count, visit);
        }
    }
}
