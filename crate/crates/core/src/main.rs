//! Command-line front end: generation, power construction, play, exact
//! solving, verification campaigns, and bound evaluation.
//!
//! Exit codes: 0 success, 1 verification failure or monitor violation,
//! 2 usage error, 3 capacity error.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use colgame::bounds::{child_bound, BoundParams};
use colgame::error::Error;
use colgame::forest::{Forest, GenKind};
use colgame::game::{play, GameState, JsonlSink, Rule};
use colgame::power::PowerView;
use colgame::solver;
use colgame::strategy::{
    bob_exhaustive, ActivationAlice, GreedyAlice, GreedyBob, RandomBob, Strategy,
};
use colgame::verify::{
    verify_exhaustive, verify_random, BobKind, ExhaustiveParams, RandomParams, CSV_HEADER,
};

#[derive(Parser)]
#[command(name = "colgame", version, about = "Marking games on powers of forests")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Add human-readable detail on top of the machine-parsable output.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a forest and write it in the edge-list text format.
    Gen {
        #[arg(long)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_degree: Option<usize>,
        /// Decimal 64-bit seed; required for random kinds.
        #[arg(long)]
        seed: Option<u64>,
        /// Output path, `-` for stdout.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Read a forest and write its m-th power as an edge list.
    Power {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short = 'm', long)]
        m: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Play one game and print the score and bound comparison.
    Play {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short = 'm', long)]
        m: u32,
        /// Alice strategy: refined | basic | greedy-alice.
        #[arg(long)]
        alice: String,
        /// Bob strategy: random | greedy | exhaustive.
        #[arg(long)]
        bob: String,
        /// Required when Bob is `random`.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the game trace as JSON lines, `-` for stdout.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Override Alice's opening vertex.
        #[arg(long)]
        opening: Option<usize>,
    },
    /// Exact game colouring number (or a threshold query) of a small instance.
    Exact {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short = 'm', long)]
        m: u32,
        /// Answer `true`/`false` for this score bound instead.
        #[arg(long)]
        threshold: Option<u32>,
    },
    /// Run a verification campaign and write the CSV report.
    Verify {
        /// exhaustive | random
        #[arg(long)]
        mode: String,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long)]
        count: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        delta: u64,
        #[arg(short = 'm', long, default_value_t = 1)]
        m: u64,
        /// Bob for random mode: random | greedy.
        #[arg(long, default_value = "greedy")]
        bob: BobKind,
        /// Required in random mode.
        #[arg(long)]
        seed: Option<u64>,
        /// Report path, `-` for stdout.
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        /// Worker threads for instance-level parallelism.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Evaluate a closed-form bound.
    Bound {
        #[arg(long)]
        delta: u64,
        #[arg(short = 'm', long)]
        m: u64,
        /// 1 | 2 | mm | ancestor | child
        #[arg(long, default_value = "2")]
        theorem: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Capacity(_) => ExitCode::from(3),
                Error::Verification(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> colgame::Result<()> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            max_degree,
            seed,
            output,
        } => {
            let forest = Forest::generate(kind, n, max_degree, seed)?;
            write_output(&output, &forest.to_text())
        }
        Command::Power { input, m, output } => {
            let forest = Forest::parse(&fs::read_to_string(input)?)?;
            let power = PowerView::build(forest, m);
            let mut text = format!("n {}\n", power.vertex_count());
            for (u, v) in power.edges() {
                let _ = writeln!(text, "{u} {v}");
            }
            write_output(&output, &text)
        }
        Command::Play {
            input,
            m,
            alice,
            bob,
            seed,
            trace,
            opening,
        } => cmd_play(&input, m, &alice, &bob, seed, trace, opening, cli.verbose),
        Command::Exact { input, m, threshold } => {
            let forest = Forest::parse(&fs::read_to_string(input)?)?;
            let power = PowerView::build(forest, m);
            match threshold {
                Some(s) => println!("{}", solver::alice_wins(&power, s)?),
                None => {
                    let result = solver::exact_colg(&power)?;
                    println!("{}", result.value);
                    if cli.verbose {
                        eprintln!(
                            "principal variation: {:?} (nodes expanded: {})",
                            result.principal_variation, result.nodes_expanded
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Verify {
            mode,
            n_max,
            count,
            n,
            delta,
            m,
            bob,
            seed,
            output,
            jobs,
        } => cmd_verify(&mode, n_max, count, n, delta, m, bob, seed, &output, jobs),
        Command::Bound { delta, m, theorem } => {
            let value = match theorem.as_str() {
                "1" => BoundParams::new(delta, m)?.score_bound_v1()?,
                "2" => BoundParams::new(delta, m)?.score_bound_v2()?,
                "mm" => BoundParams::new(delta, m)?.invariant_ceiling()?,
                "ancestor" => BoundParams::new(delta, m)?.ancestor_bound()?,
                "child" => child_bound(m)?,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "unknown bound variant `{other}` (expected 1|2|mm|ancestor|child)"
                    )))
                }
            };
            println!("{value}");
            Ok(())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_play(
    input: &Path,
    m: u32,
    alice_name: &str,
    bob_name: &str,
    seed: Option<u64>,
    trace: Option<PathBuf>,
    opening: Option<usize>,
    verbose: bool,
) -> colgame::Result<()> {
    let forest = Forest::parse(&fs::read_to_string(input)?)?;
    let delta_actual = forest.max_degree() as u64;
    let power = PowerView::build(forest, m);
    let mut alice = make_alice(alice_name, opening)?;

    let (score, order) = if bob_name == "exhaustive" {
        let outcome = bob_exhaustive(&power, alice.as_mut(), None, None)?;
        (outcome.worst_score, outcome.witness)
    } else {
        let mut bob: Box<dyn Strategy> = match bob_name {
            "random" => Box::new(RandomBob::new(seed.ok_or_else(|| {
                Error::InvalidInput("--seed is required when Bob is `random`".into())
            })?)),
            "greedy" => Box::new(GreedyBob),
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown Bob strategy `{other}` (expected random|greedy|exhaustive)"
                )))
            }
        };
        let mut state = GameState::new(&power);
        state.set_validation(false);
        let report = play(&mut state, alice.as_mut(), bob.as_mut(), None)?;
        (report.score, report.ordering)
    };

    if let Some(path) = trace {
        // Re-drive the game with Bob scripted from the played order so the
        // trace carries Alice's rule tags.
        let mut state = GameState::new(&power);
        state.set_validation(false);
        let mut alice = make_alice(alice_name, opening)?;
        let mut scripted = ScriptedBob::new(&order);
        let text = {
            let mut sink = JsonlSink::new(Vec::new());
            play(&mut state, alice.as_mut(), &mut scripted, Some(&mut sink))?;
            String::from_utf8(sink.into_inner()).expect("traces are UTF-8")
        };
        write_output(&path, &text)?;
    }

    let bound = BoundParams::new(delta_actual.max(3), u64::from(m.max(1)))?.score_bound_v2()?;
    println!(
        "score={score} bound_thm2={bound} within_bound={}",
        u64::from(score) <= bound
    );
    if verbose {
        eprintln!(
            "alice={alice_name} bob={bob_name} n={} m={m} delta={delta_actual} order={order:?}",
            power.vertex_count()
        );
    }
    Ok(())
}

fn make_alice(name: &str, opening: Option<usize>) -> colgame::Result<Box<dyn Strategy>> {
    match name {
        "refined" => Ok(Box::new(ActivationAlice::refined().with_opening(opening))),
        "basic" => Ok(Box::new(ActivationAlice::basic().with_opening(opening))),
        "greedy-alice" => Ok(Box::new(GreedyAlice)),
        other => Err(Error::InvalidInput(format!(
            "unknown Alice strategy `{other}` (expected refined|basic|greedy-alice)"
        ))),
    }
}

/// Bob replaying the even-indexed moves of a recorded order.
struct ScriptedBob {
    moves: Vec<usize>,
    next: usize,
}

impl ScriptedBob {
    fn new(order: &[usize]) -> Self {
        ScriptedBob {
            moves: order.iter().copied().skip(1).step_by(2).collect(),
            next: 0,
        }
    }
}

impl Strategy for ScriptedBob {
    fn name(&self) -> &str {
        "scripted"
    }

    fn deterministic(&self) -> bool {
        true
    }

    fn choose(&mut self, _state: &GameState) -> colgame::Result<(usize, Option<Rule>)> {
        let v = *self
            .moves
            .get(self.next)
            .ok_or_else(|| Error::State("script exhausted".into()))?;
        self.next += 1;
        Ok((v, None))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    mode: &str,
    n_max: usize,
    count: Option<u64>,
    n: Option<usize>,
    delta: u64,
    m: u64,
    bob: BobKind,
    seed: Option<u64>,
    output: &Path,
    jobs: usize,
) -> colgame::Result<()> {
    let mut writer = open_output(output)?;
    writeln!(writer, "{CSV_HEADER}")?;
    let mut emit = |report: &colgame::verify::CampaignReport| -> colgame::Result<()> {
        writeln!(writer, "{}", report.csv_row())?;
        if !report.verdict {
            eprintln!(
                "FAIL {} witness={:?} violations={:?}",
                report.csv_row(),
                report.witness,
                report.violation_details
            );
        }
        Ok(())
    };
    let summary = match mode {
        "exhaustive" => {
            let params = ExhaustiveParams {
                n_max,
                delta,
                m,
                jobs,
            };
            verify_exhaustive(&params, &mut emit)?
        }
        "random" => {
            let params = RandomParams {
                count: count.ok_or_else(|| {
                    Error::InvalidInput("--count is required in random mode".into())
                })?,
                n: n.ok_or_else(|| Error::InvalidInput("--n is required in random mode".into()))?,
                delta,
                m,
                bob,
                seed: seed.ok_or_else(|| {
                    Error::InvalidInput("--seed is required in random mode".into())
                })?,
                jobs,
            };
            verify_random(&params, &mut emit)?
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown mode `{other}` (expected exhaustive|random)"
            )))
        }
    };
    drop(writer);
    eprintln!(
        "instances={} failures={} monitor_violations={} max_score={}",
        summary.instances, summary.failures, summary.monitor_violations, summary.max_score
    );
    if !summary.all_passed() {
        return Err(Error::Verification(format!(
            "{} of {} instances failed",
            summary.failures, summary.instances
        )));
    }
    Ok(())
}

fn write_output(path: &Path, text: &str) -> colgame::Result<()> {
    if path.as_os_str() == "-" {
        io::stdout().write_all(text.as_bytes())?;
    } else {
        fs::write(path, text)?;
    }
    Ok(())
}

fn open_output(path: &Path) -> colgame::Result<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(io::stdout().lock()))
    } else {
        Ok(Box::new(BufWriter::new(fs::File::create(path)?)))
    }
}
