//! Adaptive machine-testing game on the complete graph.
//!
//! `n` machines, exactly `t` of them truthful. A test asks machine `i`
//! about machine `j`; a truthful tester answers correctly, a corrupt one
//! answers as the adversary likes. A strategy chooses each test from the
//! answers so far and must end with every machine labeled correctly.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reporting::Verdict;

/// Largest `n` accepted by [`verify_strategy`].
pub const VERIFY_BOUND: usize = 6;
/// Largest `n` accepted by [`minimal_tests`].
pub const MINIMAX_BOUND: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PuzzleInstance {
    n: usize,
    t: usize,
}

impl PuzzleInstance {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        if n == 0 || t == 0 || t > n {
            return Err(Error::InvalidParameters(format!("need 1 <= t <= n (n={n}, t={t})")));
        }
        Ok(PuzzleInstance { n, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Truthful machines are a strict majority.
    pub fn is_solvable(&self) -> bool {
        2 * self.t > self.n
    }

    fn require_solvable(&self) -> Result<()> {
        if self.is_solvable() {
            Ok(())
        } else {
            Err(Error::ImpossibleInstance { n: self.n, t: self.t })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TestRecord {
    pub tester: usize,
    pub testee: usize,
    pub answer: Verdict,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TestHistory {
    records: Vec<TestRecord>,
}

impl TestHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[TestRecord] {
        &self.records
    }

    pub fn push(&mut self, tester: usize, testee: usize, answer: Verdict) -> Result<()> {
        if tester == testee {
            return Err(Error::StrategyViolation(format!("machine {tester} cannot test itself")));
        }
        self.records.push(TestRecord { tester, testee, answer });
        Ok(())
    }

    fn pop(&mut self) {
        self.records.pop();
    }

    /// Whether the truthful set `world` (one flag per machine) explains
    /// every answer.
    pub fn consistent_with(&self, world: &[bool]) -> bool {
        self.records
            .iter()
            .all(|r| !world[r.tester] || Verdict::from_bool(world[r.testee]) == r.answer)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Move {
    Test(usize, usize),
    /// Final labeling, `true` for truthful.
    Done(Vec<bool>),
}

pub trait Strategy {
    fn name(&self) -> &str;
    /// Upper bound on tests the strategy ever performs on `inst`.
    fn max_tests(&self, inst: &PuzzleInstance) -> usize;
    fn next(&self, inst: &PuzzleInstance, history: &TestHistory) -> Move;
}

/// Chain elimination, then one known-truthful machine settles the rest.
///
/// Machines join a stack one at a time; the top tests the newcomer, which
/// is pushed on a truthful answer, and otherwise the top and the newcomer
/// are set aside as a pair. Each stack element vouched for the one above
/// it, so the stack is corrupt at the bottom and truthful at the top, and
/// every set-aside pair holds at least one corrupt machine. A truthful
/// majority therefore leaves a truthful machine on top. That machine then
/// walks down the stack until its first corrupt answer and checks each
/// pair, testing the second member only when the first is corrupt.
/// At most `2n - 2` tests.
#[derive(Debug, Clone, Copy, Default)]
pub struct DefaultStrategy;

impl Strategy for DefaultStrategy {
    fn name(&self) -> &str {
        "chain-elimination"
    }

    fn max_tests(&self, inst: &PuzzleInstance) -> usize {
        (2 * inst.n).saturating_sub(2)
    }

    fn next(&self, inst: &PuzzleInstance, history: &TestHistory) -> Move {
        let mut replay = Replay { history, pos: 0 };
        match chain_elimination(inst, &mut replay) {
            Ok(labels) => Move::Done(labels),
            Err(Pending(i, j)) => Move::Test(i, j),
        }
    }
}

/// Test not yet present in the replayed history.
struct Pending(usize, usize);

struct Replay<'a> {
    history: &'a TestHistory,
    pos: usize,
}

impl Replay<'_> {
    fn ask(&mut self, i: usize, j: usize) -> std::result::Result<Verdict, Pending> {
        match self.history.records.get(self.pos) {
            Some(r) => {
                self.pos += 1;
                Ok(r.answer)
            }
            None => Err(Pending(i, j)),
        }
    }
}

fn chain_elimination(inst: &PuzzleInstance, q: &mut Replay) -> std::result::Result<Vec<bool>, Pending> {
    let (n, t) = (inst.n, inst.t);
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for x in 0..n {
        match stack.last() {
            None => stack.push(x),
            Some(&top) => {
                if q.ask(top, x)? == Verdict::Truthful {
                    stack.push(x);
                } else {
                    stack.pop();
                    pairs.push((top, x));
                }
            }
        }
    }
    let Some(&judge) = stack.last() else {
        return Ok(vec![false; n]);
    };
    let mut tally = Tally::new(n, t);
    if tally.mark(judge, true) {
        return Ok(tally.finish());
    }
    for i in (0..stack.len() - 1).rev() {
        let v = stack[i];
        if q.ask(judge, v)? == Verdict::Truthful {
            if tally.mark(v, true) {
                return Ok(tally.finish());
            }
        } else {
            // everything below a corrupt chain element is corrupt
            if stack[..=i].iter().fold(false, |_, &w| tally.mark(w, false)) {
                return Ok(tally.finish());
            }
            break;
        }
    }
    for &(p, x) in &pairs {
        let done = if q.ask(judge, p)? == Verdict::Truthful {
            tally.mark(p, true);
            tally.mark(x, false)
        } else {
            tally.mark(p, false);
            let verdict = q.ask(judge, x)?;
            tally.mark(x, verdict == Verdict::Truthful)
        };
        if done {
            return Ok(tally.finish());
        }
    }
    Ok(tally.finish())
}

/// Machines identified so far; once all `t` truthful (or all `n - t`
/// corrupt) are known the rest follow.
struct Tally {
    known: Vec<Option<bool>>,
    truthful: usize,
    corrupt: usize,
    t: usize,
}

impl Tally {
    fn new(n: usize, t: usize) -> Self {
        Tally {
            known: vec![None; n],
            truthful: 0,
            corrupt: 0,
            t,
        }
    }

    /// Records `v`; true once the labeling is determined.
    fn mark(&mut self, v: usize, truthful: bool) -> bool {
        if self.known[v].is_none() {
            self.known[v] = Some(truthful);
            if truthful {
                self.truthful += 1;
            } else {
                self.corrupt += 1;
            }
        }
        self.truthful >= self.t || self.corrupt >= self.known.len() - self.t
    }

    fn finish(&self) -> Vec<bool> {
        let rest = self.truthful < self.t;
        self.known.iter().map(|k| k.unwrap_or(rest)).collect()
    }
}

/// Labels the first `t` machines truthful without testing anything.
#[derive(Debug, Clone, Copy, Default)]
pub struct BlindStrategy;

impl Strategy for BlindStrategy {
    fn name(&self) -> &str {
        "blind"
    }

    fn max_tests(&self, _inst: &PuzzleInstance) -> usize {
        0
    }

    fn next(&self, inst: &PuzzleInstance, _history: &TestHistory) -> Move {
        Move::Done((0..inst.n).map(|v| v < inst.t).collect())
    }
}

/// How corrupt testers answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnswerRule {
    /// Call corrupt machines truthful and truthful machines corrupt.
    Invert,
    AlwaysTruthful,
    AlwaysCorrupt,
    /// Answer correctly.
    Honest,
    /// Independent fair coin per test.
    Coin,
}

const RULES: [AnswerRule; 5] = [
    AnswerRule::Invert,
    AnswerRule::AlwaysTruthful,
    AnswerRule::AlwaysCorrupt,
    AnswerRule::Honest,
    AnswerRule::Coin,
];

/// Adversary with a fixed world and a per-tester answer rule.
#[derive(Debug, Clone)]
pub struct PuzzleAdversary {
    world: Vec<bool>,
    rules: Vec<AnswerRule>,
    rng: ChaCha8Rng,
}

impl PuzzleAdversary {
    pub fn new(world: Vec<bool>, rule: AnswerRule, seed: u64) -> Self {
        let n = world.len();
        PuzzleAdversary {
            world,
            rules: vec![rule; n],
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Random placement of the `t` truthful machines and a random answer
    /// rule for each corrupt machine.
    pub fn randomized(inst: &PuzzleInstance, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut world: Vec<bool> = (0..inst.n).map(|v| v < inst.t).collect();
        world.shuffle(&mut rng);
        let rules = (0..inst.n).map(|_| RULES[rng.gen_range(0..RULES.len())]).collect();
        PuzzleAdversary { world, rules, rng }
    }

    pub fn world(&self) -> &[bool] {
        &self.world
    }

    pub fn answer(&mut self, tester: usize, testee: usize) -> Verdict {
        let truth = self.world[testee];
        if self.world[tester] {
            return Verdict::from_bool(truth);
        }
        Verdict::from_bool(match self.rules[tester] {
            AnswerRule::Invert => !truth,
            AnswerRule::AlwaysTruthful => true,
            AnswerRule::AlwaysCorrupt => false,
            AnswerRule::Honest => truth,
            AnswerRule::Coin => self.rng.gen::<bool>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuzzleOutcome {
    pub labels: Vec<bool>,
    pub tests: usize,
    pub history: TestHistory,
}

/// Plays `strat` against `adv`. Refuses instances without a truthful
/// majority.
pub fn run_strategy(inst: &PuzzleInstance, strat: &dyn Strategy, adv: &mut PuzzleAdversary) -> Result<PuzzleOutcome> {
    inst.require_solvable()?;
    play(inst, strat, |i, j| adv.answer(i, j))
}

/// Plays `strat` with answers from `answer`, without the majority check.
pub fn play<F: FnMut(usize, usize) -> Verdict>(
    inst: &PuzzleInstance,
    strat: &dyn Strategy,
    mut answer: F,
) -> Result<PuzzleOutcome> {
    let limit = strat.max_tests(inst);
    let mut history = TestHistory::new();
    loop {
        match strat.next(inst, &history) {
            Move::Done(labels) => {
                if labels.len() != inst.n {
                    return Err(Error::StrategyViolation(format!(
                        "labeling has {} entries for {} machines",
                        labels.len(),
                        inst.n
                    )));
                }
                let tests = history.len();
                return Ok(PuzzleOutcome { labels, tests, history });
            }
            Move::Test(i, j) => {
                if i >= inst.n || j >= inst.n {
                    return Err(Error::StrategyViolation(format!("test ({i}, {j}) out of range")));
                }
                if history.len() >= limit {
                    return Err(Error::StrategyViolation(format!(
                        "{} exceeded its declared bound of {limit} tests",
                        strat.name()
                    )));
                }
                let a = answer(i, j);
                history.push(i, j, a)?;
            }
        }
    }
}

/// Truthful sets with exactly `t` members, as bitmasks in increasing order.
fn worlds(inst: &PuzzleInstance) -> Vec<u64> {
    (0u64..1 << inst.n)
        .filter(|w| w.count_ones() as usize == inst.t)
        .collect()
}

fn flags(mask: u64, n: usize) -> Vec<bool> {
    (0..n).map(|v| mask >> v & 1 == 1).collect()
}

fn world_consistent(mask: u64, i: usize, j: usize, a: Verdict) -> bool {
    mask >> i & 1 == 0 || Verdict::from_bool(mask >> j & 1 == 1) == a
}

/// Worlds with exactly `t` truthful machines that explain `history`.
pub fn consistent_worlds(inst: &PuzzleInstance, history: &TestHistory) -> Vec<Vec<bool>> {
    worlds(inst)
        .into_iter()
        .map(|m| flags(m, inst.n))
        .filter(|w| history.consistent_with(w))
        .collect()
}

/// Exhaustive game tree: the adversary may give any answer that some
/// still-consistent world allows. True iff every final labeling is the
/// only consistent world left.
pub fn verify_strategy(inst: &PuzzleInstance, strat: &dyn Strategy) -> Result<bool> {
    if inst.n > VERIFY_BOUND {
        return Err(Error::OracleBound {
            n: inst.n,
            bound: VERIFY_BOUND,
        });
    }
    let all = worlds(inst);
    let mut history = TestHistory::new();
    Ok(verify_node(inst, strat, &all, &mut history))
}

fn verify_node(inst: &PuzzleInstance, strat: &dyn Strategy, alive: &[u64], history: &mut TestHistory) -> bool {
    match strat.next(inst, history) {
        Move::Done(labels) => {
            labels.len() == inst.n && alive.iter().all(|&w| flags(w, inst.n) == labels)
        }
        Move::Test(i, j) => {
            if i >= inst.n || j >= inst.n || i == j || history.len() >= strat.max_tests(inst) {
                return false;
            }
            for a in [Verdict::Truthful, Verdict::Corrupt] {
                let next: Vec<u64> = alive.iter().copied().filter(|&w| world_consistent(w, i, j, a)).collect();
                if next.is_empty() {
                    continue;
                }
                history.push(i, j, a).expect("tester differs from testee");
                let ok = verify_node(inst, strat, &next, history);
                history.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
    }
}

/// Worst-case number of tests of an optimal adaptive strategy.
pub fn minimal_tests(inst: &PuzzleInstance) -> Result<usize> {
    inst.require_solvable()?;
    if inst.n > MINIMAX_BOUND {
        return Err(Error::OracleBound {
            n: inst.n,
            bound: MINIMAX_BOUND,
        });
    }
    let all = worlds(inst);
    let full: u64 = if all.len() == 64 { u64::MAX } else { (1u64 << all.len()) - 1 };
    let mut memo = HashMap::new();
    Ok(minimax(inst.n, &all, full, &mut memo))
}

/// `alive` indexes into `all`. Tests after which some possible answer
/// leaves `alive` unchanged are skipped: that answer could be repeated
/// forever.
fn minimax(n: usize, all: &[u64], alive: u64, memo: &mut HashMap<u64, usize>) -> usize {
    if alive.count_ones() <= 1 {
        return 0;
    }
    if let Some(&v) = memo.get(&alive) {
        return v;
    }
    let mut best = usize::MAX;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let split = |a: Verdict| {
                (0..all.len())
                    .filter(|&k| alive >> k & 1 == 1 && world_consistent(all[k], i, j, a))
                    .fold(0u64, |acc, k| acc | 1 << k)
            };
            let branches = [split(Verdict::Truthful), split(Verdict::Corrupt)];
            if branches.contains(&alive) {
                continue;
            }
            let mut worst = 0;
            for b in branches {
                if b != 0 {
                    worst = worst.max(1 + minimax(n, all, b, memo));
                    if worst >= best {
                        break;
                    }
                }
            }
            best = best.min(worst);
        }
    }
    memo.insert(alive, best);
    best
}

/// Two plays for `t <= n/2` that no strategy can tell apart: `V1` (the
/// first `t` machines) and `V2` (the next `t`) each praise their own group
/// and accuse everyone else; the remaining machines accuse everyone. In
/// world A the truthful set is `V1`, in world B it is `V2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorPlays {
    pub world_a: Vec<bool>,
    pub world_b: Vec<bool>,
    pub outcome_a: PuzzleOutcome,
    pub outcome_b: PuzzleOutcome,
}

impl MirrorPlays {
    pub fn same_transcript(&self) -> bool {
        self.outcome_a.history == self.outcome_b.history
    }

    /// No machine is truthful in both worlds.
    pub fn disjoint_truthful(&self) -> bool {
        self.world_a.iter().zip(&self.world_b).all(|(&a, &b)| !(a && b))
    }

    /// The strategy's labeling is wrong in at least one of the worlds.
    pub fn fooled(&self) -> bool {
        self.outcome_a.labels != self.world_a || self.outcome_b.labels != self.world_b
    }
}

pub fn mirror_plays(inst: &PuzzleInstance, strat: &dyn Strategy) -> Result<MirrorPlays> {
    if inst.is_solvable() {
        return Err(Error::InvalidParameters(format!(
            "mirror plays need t <= n/2 (n={}, t={})",
            inst.n, inst.t
        )));
    }
    let (n, t) = (inst.n, inst.t);
    let group = |v: usize| {
        if v < t {
            1
        } else if v < 2 * t {
            2
        } else {
            0
        }
    };
    let answer = |i: usize, j: usize| Verdict::from_bool(group(i) != 0 && group(i) == group(j));
    let world_a: Vec<bool> = (0..n).map(|v| group(v) == 1).collect();
    let world_b: Vec<bool> = (0..n).map(|v| group(v) == 2).collect();
    let outcome_a = play(inst, strat, answer)?;
    let outcome_b = play(inst, strat, answer)?;
    // the shared answer rule must be honest for the truthful machines of each world
    for (w, o) in [(&world_a, &outcome_a), (&world_b, &outcome_b)] {
        if !o.history.consistent_with(w) {
            return Err(Error::StrategyViolation("mirror answers inconsistent with world".into()));
        }
    }
    Ok(MirrorPlays {
        world_a,
        world_b,
        outcome_a,
        outcome_b,
    })
}
