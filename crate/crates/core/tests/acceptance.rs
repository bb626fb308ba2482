//! Acceptance gate: each test checks one release criterion end to end and
//! prints a single pass/fail line (visible with `-- --nocapture`).

mod common;

use colgame::bounds::{child_bound, BoundParams};
use colgame::forest::{enumerate_trees, Forest};
use colgame::power::PowerView;
use colgame::rng::SplitMix64;
use colgame::solver::exact_colg;
use colgame::strategy::{bob_exhaustive, ActivationAlice};
use colgame::verify::{verify_exhaustive, verify_random, BobKind, ExhaustiveParams, RandomParams};

fn criterion(name: &str, ok: bool, detail: &str) {
    println!(
        "criterion {name}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {name} failed: {detail}");
}

#[test]
fn tree_radius_one_worst_score_at_most_four() {
    let params = ExhaustiveParams {
        n_max: 9,
        delta: 3,
        m: 1,
        jobs: 1,
    };
    let summary = verify_exhaustive(&params, &mut |_| Ok(())).unwrap();
    let enumerated_ok =
        summary.all_passed() && summary.max_score <= 4 && summary.monitor_violations == 0;

    let mut sampled_max = 0u32;
    let mut rng = SplitMix64::new(0x5eed_0001);
    for _ in 0..500 {
        let n = 2 + rng.below(8) as usize;
        let tree = Forest::random_tree(n, 5, rng.next_u64()).unwrap();
        let power = PowerView::build(tree, 1);
        let mut alice = ActivationAlice::refined();
        let outcome = bob_exhaustive(&power, &mut alice, None, None).unwrap();
        sampled_max = sampled_max.max(outcome.worst_score);
    }
    criterion(
        "tree_radius_one_worst_score_at_most_four",
        enumerated_ok && sampled_max <= 4,
        &format!(
            "{} trees (max degree 3) worst {}, 500 sampled trees (max degree 5) worst {sampled_max}",
            summary.instances, summary.max_score
        ),
    );
}

#[test]
fn degree_three_square_worst_score_at_most_eight() {
    let params = ExhaustiveParams {
        n_max: 9,
        delta: 3,
        m: 2,
        jobs: 1,
    };
    let summary = verify_exhaustive(&params, &mut |_| Ok(())).unwrap();
    criterion(
        "degree_three_square_worst_score_at_most_eight",
        summary.all_passed() && summary.max_score <= 8 && summary.monitor_violations == 0,
        &format!(
            "{} trees, worst score {}, {} monitor violations",
            summary.instances, summary.max_score, summary.monitor_violations
        ),
    );
}

#[test]
fn proof_monitors_never_fire_on_random_campaigns() {
    let mut games = 0u64;
    let mut violations = 0u64;
    let mut failures = 0u64;
    let mut seed_rng = SplitMix64::new(0x5eed_0003);
    for delta in [3u64, 4, 5] {
        for m in [1u64, 2, 3] {
            for bob in [BobKind::Random, BobKind::Greedy] {
                let params = RandomParams {
                    count: 556,
                    n: 200,
                    delta,
                    m,
                    bob,
                    seed: seed_rng.next_u64(),
                    jobs: 1,
                };
                let summary = verify_random(&params, &mut |_| Ok(())).unwrap();
                games += summary.instances;
                violations += summary.monitor_violations;
                failures += summary.failures;
            }
        }
    }
    criterion(
        "proof_monitors_never_fire_on_random_campaigns",
        games >= 10_000 && violations == 0 && failures == 0,
        &format!("{games} games, {violations} monitor firings, {failures} bound failures"),
    );
}

#[test]
fn exact_solver_agrees_with_minimax_oracle() {
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    for n in 1..=6 {
        for forest in common::enumerate_forests(n) {
            for m in [1u32, 2] {
                let power = PowerView::build(forest.clone(), m);
                let fast = exact_colg(&power).unwrap().value;
                let slow = common::naive_colg(&power);
                checked += 1;
                if fast != slow {
                    mismatches += 1;
                }
            }
        }
    }
    criterion(
        "exact_solver_agrees_with_minimax_oracle",
        mismatches == 0,
        &format!("{checked} forest instances, {mismatches} mismatches"),
    );
}

#[test]
fn exact_at_most_exhaustive_at_most_closed_form() {
    let mut checked = 0u64;
    let mut violations = 0u64;
    for m in [1u64, 2] {
        let bound = BoundParams::new(3, m).unwrap().score_bound_v2().unwrap();
        for n in 1..=8 {
            for tree in enumerate_trees(n, 3).unwrap() {
                let power = PowerView::build(tree, m as u32);
                let exact = exact_colg(&power).unwrap().value;
                let mut alice = ActivationAlice::refined();
                let worst = bob_exhaustive(&power, &mut alice, None, None)
                    .unwrap()
                    .worst_score;
                checked += 1;
                if !(exact <= worst && u64::from(worst) <= bound) {
                    violations += 1;
                }
            }
        }
    }
    criterion(
        "exact_at_most_exhaustive_at_most_closed_form",
        violations == 0,
        &format!("{checked} tree instances, {violations} ordering violations"),
    );
}

#[test]
fn closed_form_bound_identities() {
    let mut ok = true;
    for delta in 3..=12 {
        for m in 1..=8 {
            let b = BoundParams::new(delta, m).unwrap();
            let v1 = b.score_bound_v1().unwrap();
            let v2 = b.score_bound_v2().unwrap();
            let ceiling = b.invariant_ceiling().unwrap();
            ok &= v2 <= v1;
            ok &= v2 - ceiling == 2;
            ok &= b.ancestor_bound().unwrap() + child_bound(m).unwrap() == ceiling;
        }
    }
    criterion(
        "closed_form_bound_identities",
        ok,
        "grid 3 <= delta <= 12, 1 <= m <= 8",
    );
}

#[test]
fn power_builder_agrees_with_distance_oracle() {
    let mut rng = SplitMix64::new(0x5eed_0007);
    let mut checked = 0u64;
    let mut mismatches = 0u64;
    for _ in 0..100 {
        let n = 1 + rng.below(64) as usize;
        let forest = Forest::random_forest(n, 4, rng.next_u64()).unwrap();
        let dist = common::distance_matrix(&forest);
        for m in 0..=6u32 {
            let power = PowerView::build(forest.clone(), m);
            for u in 0..n {
                for v in (u + 1)..n {
                    let expected = matches!(dist[u][v], Some(d) if d >= 1 && d <= m);
                    checked += 1;
                    if power.contains_edge(u, v) != expected {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    criterion(
        "power_builder_agrees_with_distance_oracle",
        mismatches == 0,
        &format!("{checked} vertex pairs, {mismatches} mismatches"),
    );
}
