//! Alice's activation strategies, a family of Bob adversaries, and the
//! exhaustive Bob search that computes the worst case against a fixed
//! deterministic Alice.

use crate::error::{Error, Result};
use crate::game::{GameState, Player, Rule};
use crate::monitor::MonitorSet;
use crate::power::PowerView;
use crate::rng::SplitMix64;

/// Largest instance accepted by [`bob_exhaustive`]; the search branches
/// over every Bob move sequence.
pub const EXHAUSTIVE_VERTEX_CAP: usize = 12;

/// A move chooser for one side of the game.
///
/// `choose` must return an unmarked vertex whenever one exists.
/// Deterministic strategies return identical moves for identical states;
/// seeded ones for identical seed stream positions.
pub trait Strategy {
    fn name(&self) -> &str;

    /// True when the choice is a pure function of the game state.
    fn deterministic(&self) -> bool;

    fn choose(&mut self, state: &GameState) -> Result<(usize, Option<Rule>)>;
}

/// Alice's activation strategy. With `refined` set, the strategy has the
/// extra path-repair case (Rule A2) between Rule A1 and Rule B; without
/// it, that case falls through to Rule B.
pub struct ActivationAlice {
    refined: bool,
    /// Overrides the default lowest-index opening vertex.
    opening: Option<usize>,
}

impl ActivationAlice {
    pub fn refined() -> Self {
        ActivationAlice {
            refined: true,
            opening: None,
        }
    }

    pub fn basic() -> Self {
        ActivationAlice {
            refined: false,
            opening: None,
        }
    }

    pub fn with_opening(mut self, opening: Option<usize>) -> Self {
        self.opening = opening;
        self
    }

    /// Component Alice plays into under Rule B: the component of Bob's
    /// last move when it still has an unmarked vertex, else the
    /// lowest-indexed component with one.
    fn rule_b_component(&self, state: &GameState, last_bob: Option<usize>) -> Result<usize> {
        let base = state.power().base();
        if let Some(v) = last_bob {
            let cid = base.component_id(v);
            if base.components()[cid].iter().any(|&x| !state.is_marked(x)) {
                return Ok(cid);
            }
        }
        for (cid, members) in base.components().iter().enumerate() {
            if members.iter().any(|&x| !state.is_marked(x)) {
                return Ok(cid);
            }
        }
        Err(Error::State("no unmarked vertex remains".into()))
    }

    /// Rule B move within a chosen component: nearest unmarked vertex to
    /// the root (lowest index on ties), or the component's opening vertex
    /// when it has no root yet.
    fn rule_b_vertex(&self, state: &GameState, cid: usize) -> usize {
        let members = &state.power().base().components()[cid];
        if state.root_of_component(cid).is_some() {
            let mut best: Option<(u32, usize)> = None;
            for &x in members {
                if state.is_marked(x) {
                    continue;
                }
                let key = (state.depth_of(x), x);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
            best.expect("component chosen to contain an unmarked vertex").1
        } else {
            // untouched component: every vertex is unmarked
            if let Some(o) = self.opening {
                if members.contains(&o) && !state.is_marked(o) {
                    return o;
                }
            }
            members[0]
        }
    }
}

impl Strategy for ActivationAlice {
    fn name(&self) -> &str {
        if self.refined {
            "refined"
        } else {
            "basic"
        }
    }

    fn deterministic(&self) -> bool {
        true
    }

    fn choose(&mut self, state: &GameState) -> Result<(usize, Option<Rule>)> {
        if state.turn() != Player::Alice {
            return Err(Error::State("not Alice's turn".into()));
        }
        if state.finished() {
            return Err(Error::State("no unmarked vertex remains".into()));
        }

        // Opening move of the game.
        if state.order().is_empty() {
            let v = match self.opening {
                Some(o) if o < state.vertex_count() => o,
                Some(o) => {
                    return Err(Error::InvalidInput(format!(
                        "opening vertex {o} out of range"
                    )))
                }
                None => 0,
            };
            return Ok((v, Some(Rule::First)));
        }

        let (v, w) = state
            .last_bob_move()
            .ok_or_else(|| Error::State("Alice's non-opening move without a Bob move".into()))?;

        if v != w {
            if !state.is_marked(w) {
                return Ok((w, Some(Rule::A1)));
            }
            if self.refined {
                // first unmarked vertex on the path from w to the root
                let mut x = state.hop_toward_root(w);
                while let Some(y) = x {
                    if !state.is_marked(y) {
                        return Ok((y, Some(Rule::A2)));
                    }
                    x = state.hop_toward_root(y);
                }
            }
        }

        let cid = self.rule_b_component(state, Some(v))?;
        Ok((self.rule_b_vertex(state, cid), Some(Rule::B)))
    }
}

/// Alice heuristic: mark the unmarked vertex with the most marked
/// power-neighbours, locking in its back degree before it grows further.
/// Ties go to the lowest index.
pub struct GreedyAlice;

impl Strategy for GreedyAlice {
    fn name(&self) -> &str {
        "greedy-alice"
    }

    fn deterministic(&self) -> bool {
        true
    }

    fn choose(&mut self, state: &GameState) -> Result<(usize, Option<Rule>)> {
        let v = state
            .unmarked()
            .max_by_key(|&v| (state.marked_power_neighbours(v), std::cmp::Reverse(v)))
            .ok_or_else(|| Error::State("no unmarked vertex remains".into()))?;
        Ok((v, None))
    }
}

/// Uniform random Bob over the unmarked vertices.
pub struct RandomBob {
    rng: SplitMix64,
}

impl RandomBob {
    pub fn new(seed: u64) -> Self {
        RandomBob {
            rng: SplitMix64::new(seed),
        }
    }
}

impl Strategy for RandomBob {
    fn name(&self) -> &str {
        "random"
    }

    fn deterministic(&self) -> bool {
        false
    }

    fn choose(&mut self, state: &GameState) -> Result<(usize, Option<Rule>)> {
        let unmarked: Vec<usize> = state.unmarked().collect();
        if unmarked.is_empty() {
            return Err(Error::State("no unmarked vertex remains".into()));
        }
        let v = unmarked[self.rng.below(unmarked.len() as u64) as usize];
        Ok((v, None))
    }
}

/// Greedy Bob: marks the vertex `v` maximizing, over unmarked `u != v`,
/// the marked power-neighbour count `u` would have after `v` is marked.
/// Ties go to the lowest index.
pub struct GreedyBob;

impl Strategy for GreedyBob {
    fn name(&self) -> &str {
        "greedy"
    }

    fn deterministic(&self) -> bool {
        true
    }

    fn choose(&mut self, state: &GameState) -> Result<(usize, Option<Rule>)> {
        // Top two marked-neighbour counts among unmarked vertices let us
        // evaluate "max over u != v" without rescanning per candidate.
        let mut top: Option<(u32, usize)> = None;
        let mut second: Option<u32> = None;
        for u in state.unmarked() {
            let c = state.marked_power_neighbours(u);
            match top {
                Some((t, _)) if c <= t => {
                    if second.map_or(true, |s| c > s) {
                        second = Some(c);
                    }
                }
                _ => {
                    if let Some((t, _)) = top {
                        second = Some(second.map_or(t, |s| s.max(t)));
                    }
                    top = Some((c, u));
                }
            }
        }
        let Some((top_count, top_vertex)) = top else {
            return Err(Error::State("no unmarked vertex remains".into()));
        };

        let mut best: Option<(u32, usize)> = None;
        for v in state.unmarked() {
            // best count among unmarked u != v, without v marked
            let background = if v == top_vertex {
                second.unwrap_or(0)
            } else {
                top_count
            };
            let mut objective = background;
            for &u in state.power().neighbours(v) {
                if !state.is_marked(u) {
                    objective = objective.max(state.marked_power_neighbours(u) + 1);
                }
            }
            if best.map_or(true, |(b, _)| objective > b) {
                best = Some((objective, v));
            }
        }
        Ok((best.unwrap().1, None))
    }
}

/// Outcome of the exhaustive Bob search.
#[derive(Debug, Clone)]
pub struct ExhaustiveOutcome {
    /// Maximum score Bob can force against the given Alice.
    pub worst_score: u32,
    /// One complete marking order achieving `worst_score` (or exceeding
    /// `bound`, when the search exited early).
    pub witness: Vec<usize>,
    /// True when the search stopped early because `bound` was exceeded.
    pub bound_exceeded: bool,
}

/// Depth-first search over all Bob move sequences, interleaving the
/// deterministic Alice's replies. With `bound` set, the search exits as
/// soon as any line exceeds it. With `monitors` set, every state reached
/// after an Alice move is checked once per line.
pub fn bob_exhaustive(
    power: &PowerView,
    alice: &mut dyn Strategy,
    bound: Option<u32>,
    mut monitors: Option<&mut MonitorSet>,
) -> Result<ExhaustiveOutcome> {
    if !alice.deterministic() {
        return Err(Error::InvalidInput(format!(
            "bob_exhaustive requires a deterministic Alice, `{}` is not",
            alice.name()
        )));
    }
    let n = power.vertex_count();
    if n > EXHAUSTIVE_VERTEX_CAP {
        return Err(Error::Capacity(format!(
            "bob_exhaustive is capped at n <= {EXHAUSTIVE_VERTEX_CAP}, got {n}"
        )));
    }
    let mut state = GameState::new(power);
    state.set_validation(false);
    let mut search = ExhaustiveSearch {
        state,
        alice,
        bound,
        monitors: monitors.as_deref_mut(),
        best: 0,
        witness: Vec::new(),
        bound_exceeded: false,
    };
    if n == 0 {
        return Ok(ExhaustiveOutcome {
            worst_score: 1,
            witness: Vec::new(),
            bound_exceeded: false,
        });
    }
    let (v, rule) = search.alice.choose(&search.state)?;
    let rec = search.state.apply_move(Player::Alice, v, rule)?;
    if let Some(m) = search.monitors.as_deref_mut() {
        m.check_after_alice(&search.state, rec.i);
    }
    search.descend(rec.back_degree_at_mark)?;
    Ok(ExhaustiveOutcome {
        worst_score: search.best,
        witness: search.witness,
        bound_exceeded: search.bound_exceeded,
    })
}

struct ExhaustiveSearch<'a, 'p> {
    state: GameState<'p>,
    alice: &'a mut dyn Strategy,
    bound: Option<u32>,
    monitors: Option<&'a mut MonitorSet>,
    best: u32,
    witness: Vec<usize>,
    bound_exceeded: bool,
}

impl ExhaustiveSearch<'_, '_> {
    /// Called with Bob to move (or the game finished); `running_max` is
    /// the largest back degree seen so far along the current line.
    fn descend(&mut self, running_max: u32) -> Result<()> {
        if self.state.finished() {
            let score = running_max + 1;
            if score > self.best {
                self.best = score;
                self.witness = self.state.order().to_vec();
            }
            return Ok(());
        }
        let candidates: Vec<usize> = self.state.unmarked().collect();
        for v in candidates {
            let rec = self.state.apply_move(Player::Bob, v, None)?;
            let mut line_max = running_max.max(rec.back_degree_at_mark);
            let mut alice_moved = false;
            if !self.state.finished() {
                let (a, rule) = self.alice.choose(&self.state)?;
                let arec = self.state.apply_move(Player::Alice, a, rule)?;
                if let Some(m) = self.monitors.as_deref_mut() {
                    m.check_after_alice(&self.state, arec.i);
                }
                line_max = line_max.max(arec.back_degree_at_mark);
                alice_moved = true;
            }
            if self.bound.is_some_and(|b| line_max + 1 > b) {
                // early exit: this line already violates the bound
                self.best = self.best.max(line_max + 1);
                self.witness = self.state.order().to_vec();
                self.bound_exceeded = true;
                if alice_moved {
                    self.state.undo_last();
                }
                self.state.undo_last();
                return Ok(());
            }
            self.descend(line_max)?;
            if alice_moved {
                self.state.undo_last();
            }
            self.state.undo_last();
            if self.bound_exceeded {
                return Ok(());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::Forest;
    use crate::game::{play, VecSink};

    /// The hand-trace tree: 0-1, 1-2, 2-3, 3-4, 3-6, 3-8, 2-7, 1-5.
    fn trace_tree() -> PowerView {
        let f = Forest::from_edges(
            9,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (3, 6), (3, 8), (2, 7), (1, 5)],
        )
        .unwrap();
        PowerView::build(f, 1)
    }

    #[test]
    fn refined_hand_trace() {
        let power = trace_tree();
        let mut state = GameState::new(&power);
        let mut alice = ActivationAlice::refined().with_opening(Some(0));

        let (v, r) = alice.choose(&state).unwrap();
        assert_eq!((v, r), (0, Some(Rule::First)));
        state.apply_move(Player::Alice, 0, r).unwrap();

        let rec = state.apply_move(Player::Bob, 4, None).unwrap();
        assert_eq!(rec.activated, vec![1, 2, 3, 4]);
        // w = 0 = root, marked -> Rule B: nearest unmarked to root is 1
        let (v, r) = alice.choose(&state).unwrap();
        assert_eq!((v, r), (1, Some(Rule::B)));
        state.apply_move(Player::Alice, 1, r).unwrap();

        state.apply_move(Player::Bob, 6, None).unwrap();
        // w = 3, unmarked -> Rule A1
        let (v, r) = alice.choose(&state).unwrap();
        assert_eq!((v, r), (3, Some(Rule::A1)));
        state.apply_move(Player::Alice, 3, r).unwrap();

        state.apply_move(Player::Bob, 8, None).unwrap();
        // w = 3, marked; first unmarked on 3 -> 0 path is 2 -> Rule A2
        let (v, r) = alice.choose(&state).unwrap();
        assert_eq!((v, r), (2, Some(Rule::A2)));
    }

    #[test]
    fn basic_falls_through_to_rule_b() {
        let power = trace_tree();
        let mut state = GameState::new(&power);
        let mut refined = ActivationAlice::refined().with_opening(Some(0));
        let mut basic = ActivationAlice::basic().with_opening(Some(0));

        for (player, v) in [
            (Player::Alice, 0),
            (Player::Bob, 4),
            (Player::Alice, 1),
            (Player::Bob, 6),
        ] {
            state.apply_move(player, v, None).unwrap();
        }
        // A1 applies identically under both
        assert_eq!(basic.choose(&state).unwrap(), (3, Some(Rule::A1)));
        assert_eq!(refined.choose(&state).unwrap(), (3, Some(Rule::A1)));

        state.apply_move(Player::Alice, 3, None).unwrap();
        state.apply_move(Player::Bob, 8, None).unwrap();
        // refined repairs the path (A2); basic falls through to Rule B,
        // which happens to pick the same vertex on this tree
        assert_eq!(refined.choose(&state).unwrap(), (2, Some(Rule::A2)));
        assert_eq!(basic.choose(&state).unwrap(), (2, Some(Rule::B)));
    }

    #[test]
    fn basic_and_refined_diverge_somewhere() {
        // Search small trees for a reachable state where the two
        // strategies pick different vertices.
        let mut found = false;
        'outer: for n in 4..=7 {
            for tree in crate::forest::enumerate_trees(n, 3).unwrap() {
                let power = PowerView::build(tree, 1);
                if diverges(&power) {
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(found, "expected some tree where basic and refined differ");
    }

    fn diverges(power: &PowerView) -> bool {
        fn dfs(state: &mut GameState) -> bool {
            if state.finished() {
                return false;
            }
            match state.turn() {
                Player::Alice => {
                    let refined = ActivationAlice::refined().choose(state).unwrap();
                    let basic = ActivationAlice::basic().choose(state).unwrap();
                    if refined.0 != basic.0 {
                        return true;
                    }
                    state.apply_move(Player::Alice, refined.0, refined.1).unwrap();
                    let hit = dfs(state);
                    state.undo_last();
                    hit
                }
                Player::Bob => {
                    let candidates: Vec<usize> = state.unmarked().collect();
                    for v in candidates {
                        state.apply_move(Player::Bob, v, None).unwrap();
                        let hit = dfs(state);
                        state.undo_last();
                        if hit {
                            return true;
                        }
                    }
                    false
                }
            }
        }
        let mut state = GameState::new(power);
        state.set_validation(false);
        dfs(&mut state)
    }

    #[test]
    fn single_vertex_opening() {
        let power = PowerView::build(Forest::path(1).unwrap(), 1);
        let state = GameState::new(&power);
        let mut alice = ActivationAlice::refined();
        assert_eq!(alice.choose(&state).unwrap(), (0, Some(Rule::First)));
    }

    #[test]
    fn random_bob_contract() {
        let power = PowerView::build(Forest::path(5).unwrap(), 1);
        let runs: Vec<Vec<usize>> = [1u64, 2, 3]
            .iter()
            .map(|&seed| {
                let mut state = GameState::new(&power);
                let mut alice = ActivationAlice::refined();
                let mut bob = RandomBob::new(seed);
                let mut sink = VecSink::default();
                play(&mut state, &mut alice, &mut bob, Some(&mut sink)).unwrap();
                sink.records.iter().map(|r| r.v).collect()
            })
            .collect();
        // reproducible per seed
        let mut state = GameState::new(&power);
        let mut alice = ActivationAlice::refined();
        let mut bob = RandomBob::new(1);
        let mut sink = VecSink::default();
        play(&mut state, &mut alice, &mut bob, Some(&mut sink)).unwrap();
        let again: Vec<usize> = sink.records.iter().map(|r| r.v).collect();
        assert_eq!(runs[0], again);
        // generally distinct across seeds
        assert!(runs[0] != runs[1] || runs[1] != runs[2]);
    }

    #[test]
    fn random_bob_forced_and_empty() {
        let power = PowerView::build(Forest::path(1).unwrap(), 1);
        let mut state = GameState::new(&power);
        let mut bob = RandomBob::new(7);
        state.apply_move(Player::Alice, 0, None).unwrap();
        assert!(matches!(bob.choose(&state), Err(Error::State(_))));

        let power2 = PowerView::build(Forest::path(2).unwrap(), 1);
        let mut state2 = GameState::new(&power2);
        state2.apply_move(Player::Alice, 1, None).unwrap();
        assert_eq!(bob.choose(&state2).unwrap().0, 0);
    }

    #[test]
    fn greedy_bob_objective() {
        // P_3, Alice marked 0: marking 2 gives the middle vertex two
        // marked neighbours.
        let power = PowerView::build(Forest::path(3).unwrap(), 1);
        let mut state = GameState::new(&power);
        state.apply_move(Player::Alice, 0, None).unwrap();
        assert_eq!(GreedyBob.choose(&state).unwrap().0, 2);

        // P_4, Alice marked 1: Bob marks 3, vertex 2 reaches two marked
        // neighbours.
        let power = PowerView::build(Forest::path(4).unwrap(), 1);
        let mut state = GameState::new(&power);
        state.apply_move(Player::Alice, 1, None).unwrap();
        assert_eq!(GreedyBob.choose(&state).unwrap().0, 3);
    }

    #[test]
    fn greedy_bob_tie_break_on_isolated_vertices() {
        let f = Forest::from_edges(3, &[]).unwrap();
        let power = PowerView::build(f, 1);
        let mut state = GameState::new(&power);
        state.apply_move(Player::Alice, 1, None).unwrap();
        assert_eq!(GreedyBob.choose(&state).unwrap().0, 0);
    }

    #[test]
    fn exhaustive_p4_worst_score() {
        let power = PowerView::build(Forest::path(4).unwrap(), 1);
        let mut alice = ActivationAlice::refined();
        let out = bob_exhaustive(&power, &mut alice, None, None).unwrap();
        assert_eq!(out.worst_score, 3);
        assert!(!out.bound_exceeded);
        assert_eq!(out.witness.len(), 4);
    }

    #[test]
    fn exhaustive_single_vertex() {
        let power = PowerView::build(Forest::path(1).unwrap(), 1);
        let mut alice = ActivationAlice::refined();
        let out = bob_exhaustive(&power, &mut alice, None, None).unwrap();
        assert_eq!(out.worst_score, 1);
    }

    #[test]
    fn exhaustive_rejects_nondeterministic_alice() {
        let power = PowerView::build(Forest::path(3).unwrap(), 1);
        struct FakeRandom;
        impl Strategy for FakeRandom {
            fn name(&self) -> &str {
                "fake"
            }
            fn deterministic(&self) -> bool {
                false
            }
            fn choose(&mut self, _s: &GameState) -> Result<(usize, Option<Rule>)> {
                unreachable!()
            }
        }
        assert!(bob_exhaustive(&power, &mut FakeRandom, None, None).is_err());
    }

    #[test]
    fn exhaustive_dominates_heuristic_bobs() {
        for seed in [3u64, 9, 27] {
            let f = Forest::random_tree(8, 3, seed).unwrap();
            let power = PowerView::build(f, 2);
            let mut alice = ActivationAlice::refined();
            let worst = bob_exhaustive(&power, &mut alice, None, None)
                .unwrap()
                .worst_score;
            for bob_seed in [0u64, 1] {
                let mut state = GameState::new(&power);
                let mut alice = ActivationAlice::refined();
                let mut bob = RandomBob::new(bob_seed);
                let report = play(&mut state, &mut alice, &mut bob, None).unwrap();
                assert!(report.score <= worst);
            }
            let mut state = GameState::new(&power);
            let mut alice = ActivationAlice::refined();
            let report = play(&mut state, &mut alice, &mut GreedyBob, None).unwrap();
            assert!(report.score <= worst);
        }
    }

    #[test]
    fn play_p5_refined_vs_greedy_within_forest_bound() {
        let power = PowerView::build(Forest::path(5).unwrap(), 1);
        let mut state = GameState::new(&power);
        let mut alice = ActivationAlice::refined();
        let report = play(&mut state, &mut alice, &mut GreedyBob, None).unwrap();
        assert!(report.score <= 4);
    }

    #[test]
    fn play_faults_name_the_offender() {
        struct BadBob;
        impl Strategy for BadBob {
            fn name(&self) -> &str {
                "bad-bob"
            }
            fn deterministic(&self) -> bool {
                true
            }
            fn choose(&mut self, _s: &GameState) -> Result<(usize, Option<Rule>)> {
                Ok((0, None)) // always vertex 0, soon already marked
            }
        }
        let power = PowerView::build(Forest::path(4).unwrap(), 1);
        let mut state = GameState::new(&power);
        let mut alice = ActivationAlice::refined();
        let err = play(&mut state, &mut alice, &mut BadBob, None).unwrap_err();
        match err {
            Error::StrategyFault { strategy, .. } => assert_eq!(strategy, "bad-bob"),
            other => panic!("unexpected error {other}"),
        }
    }
}
