//! Random instances, reduction cross-checks and strategy certification.
//!
//! Every trial draws its instance from a ChaCha stream seeded by
//! [`trial_seed`]`(master, index)`, so a suite produces the same reports in
//! the same order whether it runs sequentially or on the rayon pool.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::error::{ArenaError, SolveError};
use crate::format::{serialize_position, GameFile};
use crate::game::{Convention, Game, Move, Outcome, Position};
use crate::graph::{Bipartition, Graph, GraphKind, Side};
use crate::par::{map_indexed, ExecMode};
use crate::poly::Policy;
use crate::reductions::{check_bookkeeping, reduce, ReductionKind, ReductionOutput};
use crate::solver::{state_key, SolveReport, Solver, StateKey};

/// Which loops a random graph may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoopMode {
    /// Loop-free.
    #[default]
    None,
    /// A loop on every vertex, on top of the `m` requested non-loop edges.
    All,
    /// Loops are ordinary candidates among the `m` edges.
    Free,
}

impl LoopMode {
    pub fn tag(self) -> &'static str {
        match self {
            LoopMode::None => "none",
            LoopMode::All => "all",
            LoopMode::Free => "free",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        [LoopMode::None, LoopMode::All, LoopMode::Free]
            .into_iter()
            .find(|l| l.tag() == s)
    }
}

/// SplitMix64 finalizer applied to `master` advanced by `index` steps.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn candidate_edges(kind: GraphKind, n: usize, loops: LoopMode) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            let keep = match kind {
                GraphKind::Directed => u != v,
                GraphKind::Undirected => u < v,
            } || (u == v && loops == LoopMode::Free);
            if keep {
                out.push((u, v));
            }
        }
    }
    out
}

/// Largest `m` that [`random_graph`] accepts.
pub fn max_edges(kind: GraphKind, n: usize, loops: LoopMode) -> usize {
    let pairs = match kind {
        GraphKind::Directed => n * n.saturating_sub(1),
        GraphKind::Undirected => n * n.saturating_sub(1) / 2,
    };
    pairs + if loops == LoopMode::Free { n } else { 0 }
}

/// Uniformly random simple graph on `n` vertices with `m` edges drawn from
/// the candidates allowed by `loops`.
pub fn random_graph<R: Rng>(
    rng: &mut R,
    kind: GraphKind,
    n: usize,
    m: usize,
    loops: LoopMode,
) -> Result<Graph, ArenaError> {
    let cands = candidate_edges(kind, n, loops);
    if m > cands.len() {
        return Err(ArenaError::InfeasibleEdgeCount {
            n,
            m,
            max: cands.len(),
        });
    }
    let mut edges: Vec<_> = sample(rng, cands.len(), m)
        .into_iter()
        .map(|i| cands[i])
        .collect();
    if loops == LoopMode::All {
        edges.extend((0..n).map(|u| (u, u)));
    }
    Ok(Graph::new(kind, n, &edges).expect("candidates are distinct and in range"))
}

pub fn random_weights<R: Rng>(rng: &mut R, n: usize, weight_bound: u32) -> Vec<u32> {
    (0..n)
        .map(|_| rng.gen_range(1..=weight_bound.max(1)))
        .collect()
}

/// Random starting position of `game` at vertex 0. Weights are uniform in
/// `1..=weight_bound` and ignored for Geography.
pub fn random_instance(
    game: Game,
    kind: GraphKind,
    n: usize,
    m: usize,
    weight_bound: u32,
    loops: LoopMode,
    seed: u64,
) -> Result<Position, ArenaError> {
    let mut rng = rng_for(seed);
    let g = random_graph(&mut rng, kind, n.max(1), m, loops)?;
    let weights = game
        .is_nimg()
        .then(|| random_weights(&mut rng, g.vertex_count(), weight_bound));
    Ok(Position::new(game, g, weights, 0)?)
}

/// Random connected bipartite graph: a random spanning tree over a random
/// two-colouring plus `extra` further cross edges where they fit.
pub fn random_connected_bipartite<R: Rng>(rng: &mut R, n: usize, extra: usize) -> Graph {
    // vertices 0 and 1 take opposite colours so every later vertex has an
    // earlier vertex of the other colour to hang from
    let side: Vec<bool> = (0..n)
        .map(|i| i == 0 || (i > 1 && rng.gen_bool(0.5)))
        .collect();
    let mut edges = Vec::new();
    for u in 1..n {
        let opts: Vec<usize> = (0..u).filter(|&x| side[x] != side[u]).collect();
        edges.push((opts[rng.gen_range(0..opts.len())], u));
    }
    let spare: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| side[a] != side[b] && !edges.contains(&(a, b)))
        .collect();
    let take = extra.min(spare.len());
    edges.extend(sample(rng, spare.len(), take).into_iter().map(|i| spare[i]));
    Graph::undirected(n, &edges).expect("tree plus distinct cross edges")
}

/// Uniformly random bipartite graph with `m` edges between a left side
/// `0..left` and a right side `left..left + right`.
pub fn random_bipartite<R: Rng>(
    rng: &mut R,
    left: usize,
    right: usize,
    m: usize,
) -> Result<(Graph, Bipartition), ArenaError> {
    let n = left + right;
    if m > left * right {
        return Err(ArenaError::InfeasibleEdgeCount {
            n,
            m,
            max: left * right,
        });
    }
    let edges: Vec<_> = sample(rng, left * right, m)
        .into_iter()
        .map(|i| (i / right, left + i % right))
        .collect();
    let g = Graph::undirected(n, &edges).expect("distinct cross edges");
    let sides = (0..n)
        .map(|u| if u < left { Side::Left } else { Side::Right })
        .collect();
    Ok((g, Bipartition::from_sides(sides)))
}

/// One side of a cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideReport {
    pub outcome: Option<Outcome>,
    pub states_expanded: u64,
    pub budget_exhausted: bool,
}

impl From<&SolveReport> for SideReport {
    fn from(r: &SolveReport) -> Self {
        SideReport {
            outcome: r.outcome,
            states_expanded: r.states_expanded,
            budget_exhausted: r.budget_exhausted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StartReport {
    pub start: usize,
    pub source: SideReport,
    pub target: SideReport,
    /// `None` when either side ran out of budget.
    pub agree: Option<bool>,
}

/// Result of checking one reduction instance at one or more starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialReport {
    pub kind: ReductionKind,
    pub index: u64,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub weight_bound: u32,
    pub starts: Vec<StartReport>,
    /// First violated size or degree property, if any.
    pub bookkeeping: Option<String>,
}

impl TrialReport {
    /// `Some(false)` on any disagreement, `None` if some start is undecided
    /// and none disagrees.
    pub fn agree(&self) -> Option<bool> {
        let mut all = Some(true);
        for s in &self.starts {
            match s.agree {
                Some(false) => return Some(false),
                None => all = None,
                Some(true) => {}
            }
        }
        all
    }

    pub fn complete(&self) -> bool {
        self.starts.iter().all(|s| s.agree.is_some())
    }

    pub fn states_expanded(&self) -> u64 {
        self.starts
            .iter()
            .map(|s| s.source.states_expanded + s.target.states_expanded)
            .sum()
    }
}

impl fmt::Display for TrialReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cell = |o: Option<Outcome>| o.map_or("?".to_string(), |o| o.to_string());
        let outs: Vec<String> = self
            .starts
            .iter()
            .map(|s| format!("{}{}", cell(s.source.outcome), cell(s.target.outcome)))
            .collect();
        let verdict = match (self.agree(), &self.bookkeeping) {
            (_, Some(_)) => "BOOKKEEPING",
            (Some(true), None) => "agree",
            (Some(false), None) => "DISAGREE",
            (None, None) => "incomplete",
        };
        write!(
            f,
            "{:>5} {:>20} n={} m={}",
            self.index, self.seed, self.n, self.m
        )?;
        if self.kind.source().0.is_nimg() {
            write!(f, " w<={}", self.weight_bound)?;
        }
        write!(
            f,
            " states={:>9} [{}] {}",
            self.states_expanded(),
            outs.join(" "),
            verdict
        )
    }
}

fn compare(start: usize, src: &SolveReport, tgt: &SolveReport) -> StartReport {
    let agree = match (src.outcome, tgt.outcome) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    StartReport {
        start,
        source: src.into(),
        target: tgt.into(),
        agree,
    }
}

fn check_starts(
    kind: ReductionKind,
    instance: &Position,
    starts: impl IntoIterator<Item = usize>,
    budget: u64,
) -> Result<(Vec<StartReport>, Option<String>), ArenaError> {
    let mut src_solver = Solver::new(Convention::Normal, budget);
    let mut tgt_solver = Solver::new(Convention::Misere, budget);
    let mut reports = Vec::new();
    let mut bookkeeping = None;
    for s in starts {
        let src = instance.with_current(s)?;
        let out = reduce(kind, &src)?;
        if bookkeeping.is_none() {
            bookkeeping = check_bookkeeping(src.graph(), &out).err();
        }
        let a = src_solver.solve(&src)?;
        let b = tgt_solver.solve(&out.position)?;
        reports.push(compare(s, &a, &b));
    }
    Ok((reports, bookkeeping))
}

/// Solves `instance` under normal play and its reduction under misère play,
/// at the instance's own start.
pub fn check_reduction(
    kind: ReductionKind,
    instance: &Position,
    budget: u64,
) -> Result<TrialReport, ArenaError> {
    let (starts, bookkeeping) = check_starts(kind, instance, [instance.current()], budget)?;
    Ok(TrialReport {
        kind,
        index: 0,
        seed: 0,
        n: instance.graph().vertex_count(),
        m: instance.graph().edge_count(),
        weight_bound: instance.weights().iter().copied().max().unwrap_or(0),
        starts,
        bookkeeping,
    })
}

/// Parameter grid of a reduction suite. Each trial draws `n` and then `m`
/// uniformly from the ranges, clamping `m` to what fits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub kind: ReductionKind,
    pub trials: u64,
    pub n_min: usize,
    pub n_max: usize,
    pub m_min: usize,
    pub m_max: usize,
    pub weight_bound: u32,
    pub loops: LoopMode,
    pub seed: u64,
    pub budget: u64,
}

impl SuiteConfig {
    pub fn new(kind: ReductionKind, trials: u64, n_max: usize, m_max: usize, seed: u64) -> Self {
        SuiteConfig {
            kind,
            trials,
            n_min: 1,
            n_max,
            m_min: 0,
            m_max,
            weight_bound: 2,
            loops: LoopMode::None,
            seed,
            budget: crate::solver::DEFAULT_BUDGET,
        }
    }

    fn validate(&self) -> Result<(), ArenaError> {
        let kind = self.kind.source().1;
        let max = max_edges(kind, self.n_max, self.loops);
        if self.n_min == 0 || self.n_min > self.n_max || self.m_min > max.min(self.m_max) {
            return Err(ArenaError::InfeasibleEdgeCount {
                n: self.n_max,
                m: self.m_min,
                max,
            });
        }
        Ok(())
    }

    /// The instance of trial `index`.
    pub fn instance(&self, index: u64) -> Result<(u64, Position), ArenaError> {
        let seed = trial_seed(self.seed, index);
        let mut rng = rng_for(seed);
        let (game, kind) = self.kind.source();
        // geography reductions only accept loop-free sources
        let loops = if game.is_nimg() {
            self.loops
        } else {
            LoopMode::None
        };
        let n = rng.gen_range(self.n_min..=self.n_max);
        let max = max_edges(kind, n, loops);
        let m = rng.gen_range(self.m_min.min(max)..=self.m_max.min(max));
        let g = random_graph(&mut rng, kind, n, m, loops)?;
        let weights = game
            .is_nimg()
            .then(|| random_weights(&mut rng, n, self.weight_bound));
        Ok((seed, Position::new(game, g, weights, 0)?))
    }

    /// Runs trial `index` over every start vertex.
    pub fn run_trial(&self, index: u64) -> Result<TrialReport, ArenaError> {
        let (seed, p) = self.instance(index)?;
        let n = p.graph().vertex_count();
        let (starts, bookkeeping) = check_starts(self.kind, &p, 0..n, self.budget)?;
        Ok(TrialReport {
            kind: self.kind,
            index,
            seed,
            n,
            m: p.graph().edge_count(),
            weight_bound: self.weight_bound,
            starts,
            bookkeeping,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub trials: Vec<TrialReport>,
}

impl SuiteReport {
    pub fn agreeing(&self) -> usize {
        self.trials
            .iter()
            .filter(|t| t.agree() == Some(true))
            .count()
    }

    pub fn disagreeing(&self) -> Vec<&TrialReport> {
        self.trials
            .iter()
            .filter(|t| t.agree() == Some(false))
            .collect()
    }

    pub fn incomplete(&self) -> usize {
        self.trials.iter().filter(|t| t.agree().is_none()).count()
    }

    pub fn bookkeeping_failures(&self) -> Vec<&TrialReport> {
        self.trials
            .iter()
            .filter(|t| t.bookkeeping.is_some())
            .collect()
    }

    pub fn starts_checked(&self) -> usize {
        self.trials.iter().map(|t| t.starts.len()).sum()
    }
}

/// Runs every trial of `config`. Reports come back in trial order.
pub fn run_suite(config: &SuiteConfig, mode: ExecMode) -> Result<SuiteReport, ArenaError> {
    config.validate()?;
    let results = map_indexed(mode, config.trials as usize, |i| config.run_trial(i as u64));
    Ok(SuiteReport {
        config: config.clone(),
        trials: results.into_iter().collect::<Result<_, _>>()?,
    })
}

/// Writes `source.pos`, `target.pos`, `namemap.txt` and `report.txt` into
/// `dir`, creating it if needed.
pub fn write_counterexample(
    dir: &Path,
    source: &Position,
    target: &ReductionOutput,
    report: &TrialReport,
) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let src = GameFile::new(source.clone(), Convention::Normal);
    let tgt = GameFile::new(target.position.clone(), target.convention());
    fs::write(dir.join("source.pos"), serialize_position(&src))?;
    fs::write(dir.join("target.pos"), serialize_position(&tgt))?;
    fs::write(dir.join("namemap.txt"), target.name_map_text())?;
    let mut text = format!("reduction {}\n{report}\n", report.kind);
    for s in &report.starts {
        text += &format!(
            "start {} source {:?} ({} states) target {:?} ({} states) agree {:?}\n",
            s.start,
            s.source.outcome,
            s.source.states_expanded,
            s.target.outcome,
            s.target.states_expanded,
            s.agree
        );
    }
    fs::write(dir.join("report.txt"), text)
}

/// Writes one bundle per disagreeing start of every disagreeing trial, under
/// `root/trial-<index>-start-<v>`. Returns the number written.
pub fn dump_counterexamples(
    config: &SuiteConfig,
    report: &SuiteReport,
    root: &Path,
) -> Result<usize, ArenaError> {
    let mut written = 0;
    for t in report.disagreeing() {
        let (_, p) = config.instance(t.index)?;
        for s in t.starts.iter().filter(|s| s.agree == Some(false)) {
            let src = p.with_current(s.start)?;
            let out = reduce(config.kind, &src)?;
            let dir = root.join(format!("trial-{}-start-{}", t.index, s.start));
            write_counterexample(&dir, &src, &out, t)
                .map_err(|e| ArenaError::Io(format!("{}: {e}", dir.display())))?;
            written += 1;
        }
    }
    Ok(written)
}

/// Outcome of adversarial strategy checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The policy wins against every adversary line.
    Certified,
    /// Some line beats the policy; `line` alternates policy and adversary
    /// moves from the root.
    Refuted { line: Vec<Move> },
    /// The node budget ran out first.
    Indeterminate,
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified)
    }
}

struct Certifier<'a> {
    convention: Convention,
    policy: &'a Policy,
    budget: u64,
    nodes: u64,
    won: FxHashMap<(StateKey, bool), ()>,
    line: Vec<Move>,
}

enum Step {
    Win,
    Lose,
    OutOfBudget,
}

impl Certifier<'_> {
    fn visit(&mut self, p: &Position, policy_to_move: bool) -> Result<Step, SolveError> {
        if p.is_terminal() {
            // the player to move at a terminal wins exactly under misère
            let mover_wins = self.convention == Convention::Misere;
            return Ok(if mover_wins == policy_to_move {
                Step::Win
            } else {
                Step::Lose
            });
        }
        let key = (state_key(p)?, policy_to_move);
        if self.won.contains_key(&key) {
            return Ok(Step::Win);
        }
        if self.nodes >= self.budget {
            return Ok(Step::OutOfBudget);
        }
        self.nodes += 1;
        let replies: Vec<Move> = if policy_to_move {
            let m = match self.policy.choose(p) {
                Ok(Some(m)) => m,
                Ok(None) => unreachable!("non-terminal positions have moves"),
                Err(SolveError::BudgetExhausted(_)) => return Ok(Step::OutOfBudget),
                Err(e) => return Err(e),
            };
            if !p.is_legal(&m) {
                self.line.push(m);
                return Ok(Step::Lose);
            }
            vec![m]
        } else {
            p.legal_moves()
        };
        for m in replies {
            self.line.push(m);
            let child = p.apply_move(&m)?;
            match self.visit(&child, !policy_to_move)? {
                Step::Win => {
                    self.line.pop();
                }
                other => return Ok(other),
            }
        }
        self.won.insert(key, ());
        Ok(Step::Win)
    }
}

/// Plays `policy` for the player to move at `p` against every possible
/// adversary reply. Certified iff every line ends at a terminal where the
/// adversary loses under `c`. `budget` bounds the number of distinct
/// positions visited.
pub fn verify_strategy(
    p: &Position,
    c: Convention,
    policy: &Policy,
    budget: u64,
) -> Result<Verdict, SolveError> {
    let mut cert = Certifier {
        convention: c,
        policy,
        budget,
        nodes: 0,
        won: FxHashMap::default(),
        line: Vec::new(),
    };
    Ok(match cert.visit(p, true)? {
        Step::Win => Verdict::Certified,
        Step::Lose => Verdict::Refuted { line: cert.line },
        Step::OutOfBudget => Verdict::Indeterminate,
    })
}
