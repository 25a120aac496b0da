use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use mgg::arena::{
    dump_counterexamples, random_bipartite, rng_for, run_suite, LoopMode, SuiteConfig,
};
use mgg::matching::hopcroft_karp;
use mgg::poly::solve_polynomial;
use mgg::{
    parse_position, reduce, serialize_position, Convention, ExecMode, GameFile, Move, Outcome,
    PolyError, Position, ReductionKind, SolveError,
};

mod exit {
    pub const OK: u8 = 0;
    pub const INPUT: u8 = 1;
    pub const BUDGET: u8 = 2;
    pub const DISAGREE: u8 = 3;
    pub const NOT_APPLICABLE: u8 = 4;
}

#[derive(Parser)]
#[command(
    name = "mgg",
    version,
    about = "Solve, reduce and cross-check NimG and Geography positions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Matching-based solver when one applies, exhaustive search otherwise.
    Auto,
    Exhaustive,
    /// Matching-based solver only; exits with status 4 when none applies.
    Matching,
}

#[derive(Clone, Copy, ValueEnum)]
enum Loops {
    None,
    All,
    Free,
}

impl From<Loops> for LoopMode {
    fn from(l: Loops) -> Self {
        match l {
            Loops::None => LoopMode::None,
            Loops::All => LoopMode::All,
            Loops::Free => LoopMode::Free,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchTarget {
    Matching,
}

#[derive(Subcommand)]
enum Command {
    /// Print the outcome of a position file.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        #[arg(long, default_value_t = mgg::DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Apply a reduction to a normal-play position file.
    Reduce {
        /// vgeo-dir, vgeo-undir, egeo-undir, egeo-dir, nimg-rm or nimg-mr
        name: String,
        input: PathBuf,
        output: PathBuf,
        /// Where to write the name map; defaults to OUTPUT with `.names` appended.
        #[arg(long)]
        names: Option<PathBuf>,
    },
    /// Cross-check a reduction on random instances.
    Verify {
        name: String,
        /// Largest vertex count.
        #[arg(long)]
        n: usize,
        /// Largest edge count.
        #[arg(long)]
        m: usize,
        /// Smallest vertex count; defaults to --n.
        #[arg(long)]
        n_min: Option<usize>,
        /// Smallest edge count; defaults to --m.
        #[arg(long)]
        m_min: Option<usize>,
        #[arg(long, default_value_t = 2)]
        wmax: u32,
        #[arg(long, value_enum, default_value = "none")]
        loops: Loops,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = mgg::DEFAULT_BUDGET)]
        budget: u64,
        /// Run trials one after another instead of on the thread pool.
        #[arg(long)]
        sequential: bool,
        /// Directory for counterexample bundles.
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Only print the summary line.
        #[arg(long, short)]
        quiet: bool,
    },
    /// Time a maximum matching on a random bipartite graph.
    Bench {
        #[arg(value_enum)]
        target: BenchTarget,
        #[arg(long, default_value_t = 20_000)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Play against the engine on stdin.
    Play {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        #[arg(long, default_value_t = mgg::DEFAULT_BUDGET)]
        budget: u64,
        /// Let the engine make the first move.
        #[arg(long)]
        engine_first: bool,
    },
}

/// An error carrying the exit status it maps to.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: exit::INPUT,
            err: e.into(),
        }
    }
}

fn fail(code: u8, err: anyhow::Error) -> Failure {
    Failure { code, err }
}

fn read_game(path: &Path) -> Result<GameFile, Failure> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(parse_position(&text).with_context(|| format!("{}", path.display()))?)
}

/// Result of solving one position with a chosen method.
struct Solution {
    outcome: Option<Outcome>,
    mv: Option<Move>,
    solver: &'static str,
    strategy: Option<&'static str>,
    states: u64,
}

fn solve_with(file: &GameFile, method: Method, budget: u64) -> Result<Solution, Failure> {
    let p = &file.position;
    let c = file.convention;
    if !matches!(method, Method::Exhaustive) {
        match solve_polynomial(p, c) {
            Ok((which, sol)) => {
                let (mv, strategy) = match &sol.policy {
                    Some(policy) => (policy.choose(p)?, Some(policy.provenance().tag())),
                    None => (None, None),
                };
                return Ok(Solution {
                    outcome: Some(sol.outcome),
                    mv,
                    solver: which.tag(),
                    strategy,
                    states: 0,
                });
            }
            Err(PolyError::NotApplicable(_)) if matches!(method, Method::Auto) => {}
            Err(PolyError::NotApplicable(na)) => return Err(fail(exit::NOT_APPLICABLE, na.into())),
            Err(e) => return Err(e.into()),
        }
    }
    let r = match mgg::solve(p, c, budget) {
        Ok(r) => r,
        Err(e @ SolveError::Capacity { .. }) => return Err(fail(exit::BUDGET, e.into())),
        Err(e) => return Err(e.into()),
    };
    Ok(Solution {
        outcome: r.outcome,
        mv: r.principal_move,
        solver: "exhaustive",
        strategy: None,
        states: r.states_expanded,
    })
}

fn cmd_solve(file: &Path, method: Method, budget: u64) -> Result<u8, Failure> {
    let g = read_game(file)?;
    let s = solve_with(&g, method, budget)?;
    let Some(outcome) = s.outcome else {
        println!("outcome ?");
        println!("solver {}", s.solver);
        println!("states {}", s.states);
        eprintln!("budget of {budget} states exhausted");
        return Ok(exit::BUDGET);
    };
    println!("outcome {outcome}");
    if let Some(m) = s.mv {
        println!("move {m}");
    }
    println!("solver {}", s.solver);
    if let Some(t) = s.strategy {
        println!("strategy: {t}");
    }
    println!("states {}", s.states);
    Ok(exit::OK)
}

fn cmd_reduce(
    name: &str,
    input: &Path,
    output: &Path,
    names: Option<&Path>,
) -> Result<u8, Failure> {
    let kind =
        ReductionKind::from_tag(name).with_context(|| format!("unknown reduction {name:?}"))?;
    let src = read_game(input)?;
    if src.convention != Convention::Normal {
        eprintln!(
            "note: {name} maps normal-play sources; the input's {} convention is ignored",
            src.convention
        );
    }
    let out = reduce(kind, &src.position)?;
    let target = GameFile::new(out.position.clone(), out.convention());
    fs::write(output, serialize_position(&target))
        .with_context(|| format!("cannot write {}", output.display()))?;
    let names_path = names.map(Path::to_path_buf).unwrap_or_else(|| {
        let mut s = output.as_os_str().to_owned();
        s.push(".names");
        PathBuf::from(s)
    });
    fs::write(&names_path, out.name_map_text())
        .with_context(|| format!("cannot write {}", names_path.display()))?;
    let g = out.position.graph();
    println!(
        "{kind}: {} vertices, {} edges -> {} vertices, {} edges",
        src.position.graph().vertex_count(),
        src.position.graph().edge_count(),
        g.vertex_count(),
        g.edge_count()
    );
    println!("target {}", output.display());
    println!("names {}", names_path.display());
    Ok(exit::OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    name: &str,
    n: usize,
    m: usize,
    n_min: Option<usize>,
    m_min: Option<usize>,
    wmax: u32,
    loops: Loops,
    trials: u64,
    seed: u64,
    budget: u64,
    sequential: bool,
    dump: Option<&Path>,
    quiet: bool,
) -> Result<u8, Failure> {
    let kind =
        ReductionKind::from_tag(name).with_context(|| format!("unknown reduction {name:?}"))?;
    if budget == 0 || wmax == 0 {
        return Err(anyhow::anyhow!("--budget and --wmax must be positive").into());
    }
    let mut cfg = SuiteConfig::new(kind, trials, n, m, seed);
    cfg.n_min = n_min.unwrap_or(n);
    cfg.m_min = m_min.unwrap_or(m);
    cfg.weight_bound = wmax;
    cfg.loops = loops.into();
    cfg.budget = budget;
    let mode = if sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Parallel
    };
    let t = Instant::now();
    let rep = run_suite(&cfg, mode)?;
    if !quiet {
        println!("{:>5} {:>20} instance", "trial", "seed");
        for tr in &rep.trials {
            println!("{tr}");
        }
    }
    let bad = rep.disagreeing().len();
    let books = rep.bookkeeping_failures().len();
    println!(
        "{kind}: {}/{} agree, {bad} disagree, {} incomplete, {books} bookkeeping failures ({:.2}s)",
        rep.agreeing(),
        rep.trials.len(),
        rep.incomplete(),
        t.elapsed().as_secs_f64()
    );
    if let Some(dir) = dump {
        if bad > 0 {
            let k = dump_counterexamples(&cfg, &rep, dir)?;
            println!("{k} counterexample bundles in {}", dir.display());
        }
    }
    Ok(if bad > 0 || books > 0 {
        exit::DISAGREE
    } else if rep.incomplete() > 0 {
        exit::BUDGET
    } else {
        exit::OK
    })
}

fn cmd_bench(n: usize, m: usize, seed: u64) -> Result<u8, Failure> {
    let left = n / 2;
    let (g, b) = random_bipartite(&mut rng_for(seed), left, n - left, m)?;
    let t = Instant::now();
    let (matching, phases) = hopcroft_karp(&g, &b)?;
    let elapsed = t.elapsed();
    println!(
        "matching n={n} m={m} seed={seed}: size {} phases {phases} time {:.3} ms",
        matching.size(),
        elapsed.as_secs_f64() * 1e3
    );
    Ok(exit::OK)
}

fn print_board(out: &mut impl Write, p: &Position) -> io::Result<()> {
    let g = p.graph();
    writeln!(
        out,
        "{} on {} {} vertices",
        p.game(),
        g.kind(),
        g.vertex_count()
    )?;
    for u in 0..g.vertex_count() {
        let live = match p.game() {
            mgg::Game::VertexGeography => !p.is_vertex_removed(u),
            _ => true,
        };
        let nbrs: Vec<String> = g
            .arcs(u)
            .iter()
            .filter(|&&(_, id)| !(p.game() == mgg::Game::EdgeGeography && p.is_edge_removed(id)))
            .map(|&(v, _)| v.to_string())
            .collect();
        let mark = if u == p.current() { '*' } else { ' ' };
        let w = if p.game().is_nimg() {
            format!(" w={}", p.weight(u))
        } else {
            String::new()
        };
        let gone = if live { "" } else { " (removed)" };
        writeln!(out, "{mark}{u}{w}{gone}: {}", nbrs.join(" "))?;
    }
    writeln!(out, "pointer at {}", p.current())
}

fn move_hint(p: &Position) -> &'static str {
    match p.game() {
        mgg::Game::NimgRm => "k v (keep k tokens here, then move to v)",
        mgg::Game::NimgMr => "v k (move to v, then keep k tokens there)",
        _ => "v (move the token to v)",
    }
}

fn play<R: BufRead, W: Write>(
    file: GameFile,
    method: Method,
    budget: u64,
    engine_first: bool,
    input: &mut R,
    out: &mut W,
) -> Result<u8, Failure> {
    let c = file.convention;
    let mut pos = file.position;
    let mut engine_turn = engine_first;
    writeln!(out, "{} play; enter moves as {}", c, move_hint(&pos))?;
    loop {
        print_board(out, &pos)?;
        if pos.is_terminal() {
            let mover_wins = c == Convention::Misere;
            let engine_wins = mover_wins == engine_turn;
            writeln!(
                out,
                "no moves left: {} wins",
                if engine_wins { "engine" } else { "you" }
            )?;
            return Ok(exit::OK);
        }
        let mv = if engine_turn {
            let s = solve_with(&GameFile::new(pos.clone(), c), method, budget)?;
            let mv = match (s.outcome, s.mv) {
                (Some(Outcome::N), Some(m)) => m,
                (None, _) => {
                    writeln!(
                        out,
                        "engine search ran out of budget, playing the first legal move"
                    )?;
                    pos.legal_moves()[0]
                }
                _ => pos.legal_moves()[0],
            };
            writeln!(out, "engine ({}) plays {mv}", s.solver)?;
            mv
        } else {
            loop {
                write!(out, "your move> ")?;
                out.flush()?;
                let mut line = String::new();
                if input.read_line(&mut line)? == 0 {
                    writeln!(out)?;
                    writeln!(out, "input closed")?;
                    return Ok(exit::OK);
                }
                match pos.parse_move(&line) {
                    Some(m) if pos.is_legal(&m) => break m,
                    _ => writeln!(
                        out,
                        "illegal move {:?}; expected {}",
                        line.trim(),
                        move_hint(&pos)
                    )?,
                }
            }
        };
        pos = pos.apply_move(&mv)?;
        engine_turn = !engine_turn;
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve {
            file,
            method,
            budget,
        } => cmd_solve(&file, method, budget),
        Command::Reduce {
            name,
            input,
            output,
            names,
        } => cmd_reduce(&name, &input, &output, names.as_deref()),
        Command::Verify {
            name,
            n,
            m,
            n_min,
            m_min,
            wmax,
            loops,
            trials,
            seed,
            budget,
            sequential,
            dump,
            quiet,
        } => cmd_verify(
            &name,
            n,
            m,
            n_min,
            m_min,
            wmax,
            loops,
            trials,
            seed,
            budget,
            sequential,
            dump.as_deref(),
            quiet,
        ),
        Command::Bench {
            target: BenchTarget::Matching,
            n,
            m,
            seed,
        } => cmd_bench(n, m, seed),
        Command::Play {
            file,
            method,
            budget,
            engine_first,
        } => {
            let g = read_game(&file)?;
            let stdin = io::stdin();
            play(
                g,
                method,
                budget,
                engine_first,
                &mut stdin.lock(),
                &mut io::stdout(),
            )
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
