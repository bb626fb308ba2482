//! Verification campaigns: exhaustive adversarial search over all small
//! bounded-degree trees, and bulk seeded random games, both with the
//! proof-invariant monitors attached and every score checked against the
//! closed-form bounds.

use std::str::FromStr;

use rayon::prelude::*;

use crate::bounds::BoundParams;
use crate::error::{Error, Result};
use crate::forest::{enumerate_trees, Forest};
use crate::game::{play, GameState};
use crate::monitor::{MonitorSet, MonitorSink};
use crate::power::PowerView;
use crate::rng::SplitMix64;
use crate::strategy::{bob_exhaustive, ActivationAlice, GreedyBob, RandomBob, Strategy};

/// Bob adversaries available to random campaigns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BobKind {
    Random,
    Greedy,
}

impl std::fmt::Display for BobKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BobKind::Random => "random",
            BobKind::Greedy => "greedy",
        })
    }
}

impl FromStr for BobKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(BobKind::Random),
            "greedy" => Ok(BobKind::Greedy),
            other => Err(Error::InvalidInput(format!("unknown Bob kind `{other}`"))),
        }
    }
}

/// One verified instance.
#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub kind: String,
    pub n: usize,
    /// Degree cap handed to the generator / enumerator.
    pub delta_cap: u64,
    /// Maximum degree the instance actually realizes.
    pub delta_actual: u64,
    pub m: u64,
    pub alice: String,
    pub bob: String,
    pub seed: Option<u64>,
    pub score: u32,
    pub bound_v1: u64,
    pub bound_v2: u64,
    pub monitor_violations: u64,
    /// Pass iff the score respects the sharper bound and no monitor fired.
    pub verdict: bool,
    /// Replayable witness (marking order) kept for failing instances.
    pub witness: Option<Vec<usize>>,
    /// First few monitor violation descriptions, for failing instances.
    pub violation_details: Vec<String>,
}

pub const CSV_HEADER: &str =
    "kind,n,delta_cap,delta_actual,m,alice,bob,seed,score,bound_thm1,bound_thm2,monitor_violations,verdict";

impl CampaignReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.n,
            self.delta_cap,
            self.delta_actual,
            self.m,
            self.alice,
            self.bob,
            self.seed.map_or(String::new(), |s| s.to_string()),
            self.score,
            self.bound_v1,
            self.bound_v2,
            self.monitor_violations,
            if self.verdict { "pass" } else { "fail" }
        )
    }
}

/// Aggregate outcome of a campaign.
#[derive(Debug, Clone, Default)]
pub struct CampaignSummary {
    pub instances: u64,
    pub failures: u64,
    pub monitor_violations: u64,
    pub max_score: u32,
}

impl CampaignSummary {
    fn absorb(&mut self, report: &CampaignReport) {
        self.instances += 1;
        if !report.verdict {
            self.failures += 1;
        }
        self.monitor_violations += report.monitor_violations;
        self.max_score = self.max_score.max(report.score);
    }

    pub fn all_passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone)]
pub struct ExhaustiveParams {
    /// Trees on 1..=n_max vertices are enumerated.
    pub n_max: usize,
    /// Degree cap for the enumeration and the bound formulas.
    pub delta: u64,
    pub m: u64,
    /// Worker threads; 0 or 1 runs sequentially.
    pub jobs: usize,
}

#[derive(Debug, Clone)]
pub struct RandomParams {
    pub count: u64,
    pub n: usize,
    pub delta: u64,
    pub m: u64,
    pub bob: BobKind,
    pub seed: u64,
    pub jobs: usize,
}

/// The closed forms are monotone in delta, so instances below degree 3
/// are checked against the delta = 3 bound.
fn bounds_for(delta_cap: u64, m: u64) -> Result<(u64, u64)> {
    let params = BoundParams::new(delta_cap.max(3), m)?;
    Ok((params.score_bound_v1()?, params.score_bound_v2()?))
}

/// Runs the exhaustive Bob search against refined Alice on every labelled
/// tree with at most `n_max` vertices and maximum degree at most `delta`,
/// monitors attached along every explored line. Reports stream to `sink`
/// in deterministic enumeration order.
pub fn verify_exhaustive(
    params: &ExhaustiveParams,
    sink: &mut dyn FnMut(&CampaignReport) -> Result<()>,
) -> Result<CampaignSummary> {
    if params.m < 1 {
        return Err(Error::InvalidInput("verification requires m >= 1".into()));
    }
    let (bound_v1, bound_v2) = bounds_for(params.delta, params.m)?;
    let run = |tree: Forest| -> Result<CampaignReport> {
        exhaustive_instance(tree, params.delta, params.m, bound_v1, bound_v2)
    };

    let mut summary = CampaignSummary::default();
    for n in 1..=params.n_max {
        let trees = enumerate_trees(n, params.delta as usize)?;
        process_ordered(trees, params.jobs, &run, &mut summary, sink)?;
    }
    Ok(summary)
}

fn exhaustive_instance(
    tree: Forest,
    delta_cap: u64,
    m: u64,
    bound_v1: u64,
    bound_v2: u64,
) -> Result<CampaignReport> {
    let n = tree.vertex_count();
    let delta_actual = tree.max_degree() as u64;
    let power = PowerView::build(tree, m as u32);
    let mut alice = ActivationAlice::refined();
    let mut monitors = MonitorSet::for_instance(&power);
    let outcome = bob_exhaustive(&power, &mut alice, Some(bound_v2 as u32), Some(&mut monitors))?;
    let verdict = u64::from(outcome.worst_score) <= bound_v2 && monitors.clean();
    Ok(CampaignReport {
        kind: "enumerated-tree".into(),
        n,
        delta_cap,
        delta_actual,
        m,
        alice: "refined".into(),
        bob: "exhaustive".into(),
        seed: None,
        score: outcome.worst_score,
        bound_v1,
        bound_v2,
        monitor_violations: monitors.total_violations,
        verdict,
        witness: (!verdict).then_some(outcome.witness),
        violation_details: monitors.violations,
    })
}

/// Plays `count` seeded games of refined Alice against the chosen Bob on
/// seeded random forests, monitors attached. Deterministic given the
/// master seed; reports stream in instance order.
pub fn verify_random(
    params: &RandomParams,
    sink: &mut dyn FnMut(&CampaignReport) -> Result<()>,
) -> Result<CampaignSummary> {
    if params.m < 1 {
        return Err(Error::InvalidInput("verification requires m >= 1".into()));
    }
    let (bound_v1, bound_v2) = bounds_for(params.delta, params.m)?;
    let mut master = SplitMix64::new(params.seed);
    let seeds: Vec<(u64, u64)> = (0..params.count)
        .map(|_| (master.next_u64(), master.next_u64()))
        .collect();

    let run = |(tree_seed, bob_seed): (u64, u64)| -> Result<CampaignReport> {
        random_instance(params, tree_seed, bob_seed, bound_v1, bound_v2)
    };
    let mut summary = CampaignSummary::default();
    process_ordered(seeds.into_iter(), params.jobs, &run, &mut summary, sink)?;
    Ok(summary)
}

fn random_instance(
    params: &RandomParams,
    tree_seed: u64,
    bob_seed: u64,
    bound_v1: u64,
    bound_v2: u64,
) -> Result<CampaignReport> {
    let forest = Forest::random_forest(params.n, params.delta as usize, tree_seed)?;
    let delta_actual = forest.max_degree() as u64;
    let power = PowerView::build(forest, params.m as u32);
    let mut monitors = MonitorSet::for_instance(&power);
    let mut state = GameState::new(&power);
    state.set_validation(false);
    let mut alice = ActivationAlice::refined();
    let mut bob: Box<dyn Strategy> = match params.bob {
        BobKind::Random => Box::new(RandomBob::new(bob_seed)),
        BobKind::Greedy => Box::new(GreedyBob),
    };
    let report = {
        let mut sink = MonitorSink {
            monitors: &mut monitors,
        };
        play(&mut state, &mut alice, bob.as_mut(), Some(&mut sink))?
    };
    let verdict = u64::from(report.score) <= bound_v2 && monitors.clean();
    Ok(CampaignReport {
        kind: "random-forest".into(),
        n: params.n,
        delta_cap: params.delta,
        delta_actual,
        m: params.m,
        alice: "refined".into(),
        bob: params.bob.to_string(),
        seed: Some(tree_seed),
        score: report.score,
        bound_v1,
        bound_v2,
        monitor_violations: monitors.total_violations,
        verdict,
        witness: (!verdict).then_some(report.ordering),
        violation_details: monitors.violations,
    })
}

const CHUNK: usize = 4096;

/// Processes items chunk by chunk, in parallel when `jobs > 1`, emitting
/// reports in input order regardless of completion order.
fn process_ordered<T, I, F>(
    items: I,
    jobs: usize,
    run: &F,
    summary: &mut CampaignSummary,
    sink: &mut dyn FnMut(&CampaignReport) -> Result<()>,
) -> Result<()>
where
    T: Send,
    I: Iterator<Item = T>,
    F: Fn(T) -> Result<CampaignReport> + Sync,
{
    if jobs <= 1 {
        for item in items {
            let report = run(item)?;
            summary.absorb(&report);
            sink(&report)?;
        }
        return Ok(());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let mut items = items.peekable();
    while items.peek().is_some() {
        let chunk: Vec<T> = items.by_ref().take(CHUNK).collect();
        let reports: Vec<CampaignReport> =
            pool.install(|| chunk.into_par_iter().map(run).collect::<Result<Vec<_>>>())?;
        for report in &reports {
            summary.absorb(report);
            sink(report)?;
        }
    }
    Ok(())
}
