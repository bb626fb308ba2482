//! Exact game colouring numbers of small instances by memoized
//! threshold-game search.
//!
//! The reduction: the final score stays at most `s` exactly when no
//! unmarked vertex ever accumulates `s` marked power-neighbours (its back
//! degree is frozen at marking time, so a vertex that reaches `s` marked
//! power-neighbours while unmarked is a lost cause, and a vertex that
//! never does is marked with back degree below `s`). Under that terminal
//! test the position is fully described by the marked set, whose parity
//! also fixes the player to move, so positions memoize on a bitmask.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::power::PowerView;

/// Largest instance the bitmask solver accepts.
pub const SOLVER_VERTEX_CAP: usize = 24;

/// Exact value together with one optimal line of play.
#[derive(Debug, Clone)]
pub struct SolverResult {
    /// The game colouring number of the power graph.
    pub value: u32,
    /// A complete marking order realized when both sides play optimally.
    pub principal_variation: Vec<usize>,
    pub nodes_expanded: u64,
}

/// The threshold game for a candidate score bound `s`.
pub struct ThresholdGame<'p> {
    power: &'p PowerView,
    s: u32,
    full: u64,
    /// Marked power-neighbour count per vertex, kept in sync with `mask`.
    counts: Vec<u32>,
    mask: u64,
    memo: HashMap<u64, bool>,
    nodes: u64,
}

impl<'p> ThresholdGame<'p> {
    pub fn new(power: &'p PowerView, s: u32) -> Result<Self> {
        let n = power.vertex_count();
        if n > SOLVER_VERTEX_CAP {
            return Err(Error::Capacity(format!(
                "exact solver is capped at n <= {SOLVER_VERTEX_CAP}, got {n}"
            )));
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(ThresholdGame {
            power,
            s,
            full,
            counts: vec![0; n],
            mask: 0,
            memo: HashMap::new(),
            nodes: 0,
        })
    }

    pub fn nodes_expanded(&self) -> u64 {
        self.nodes
    }

    /// Whether Alice (to move iff an even number of vertices is marked)
    /// can keep the final score at most `s` from the given position.
    pub fn evaluate(&mut self, mask: u64) -> bool {
        self.set_position(mask);
        self.win()
    }

    fn set_position(&mut self, mask: u64) {
        self.mask = mask;
        self.counts.iter_mut().for_each(|c| *c = 0);
        for v in 0..self.power.vertex_count() {
            if mask & (1 << v) != 0 {
                for &u in self.power.neighbours(v) {
                    self.counts[u] += 1;
                }
            }
        }
    }

    fn mark(&mut self, v: usize) {
        self.mask |= 1 << v;
        for &u in self.power.neighbours(v) {
            self.counts[u] += 1;
        }
    }

    fn unmark(&mut self, v: usize) {
        self.mask &= !(1 << v);
        for &u in self.power.neighbours(v) {
            self.counts[u] -= 1;
        }
    }

    fn lost(&self) -> bool {
        (0..self.power.vertex_count())
            .any(|v| self.mask & (1 << v) == 0 && self.counts[v] >= self.s)
    }

    /// Unmarked vertices, most-threatening first: vertices adjacent to the
    /// hottest unmarked vertices come out early, which helps pruning and
    /// never changes the value.
    fn move_order(&self) -> Vec<usize> {
        let mut moves: Vec<(u32, usize)> = (0..self.power.vertex_count())
            .filter(|&v| self.mask & (1 << v) == 0)
            .map(|v| {
                let heat = self
                    .power
                    .neighbours(v)
                    .iter()
                    .filter(|&&u| self.mask & (1 << u) == 0)
                    .map(|&u| self.counts[u])
                    .max()
                    .unwrap_or(0);
                (heat, v)
            })
            .collect();
        moves.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        moves.into_iter().map(|(_, v)| v).collect()
    }

    fn win(&mut self) -> bool {
        if self.lost() {
            return false;
        }
        if self.mask == self.full {
            return true;
        }
        if let Some(&cached) = self.memo.get(&self.mask) {
            return cached;
        }
        self.nodes += 1;
        let alice_to_move = self.mask.count_ones() % 2 == 0;
        let key = self.mask;
        let mut result = !alice_to_move;
        for v in self.move_order() {
            self.mark(v);
            let child = self.win();
            self.unmark(v);
            if alice_to_move && child {
                result = true;
                break;
            }
            if !alice_to_move && !child {
                result = false;
                break;
            }
        }
        self.memo.insert(key, result);
        result
    }
}

/// True when Alice, moving first, can keep the final score at most `s`.
pub fn alice_wins(power: &PowerView, s: u32) -> Result<bool> {
    Ok(ThresholdGame::new(power, s)?.evaluate(0))
}

/// The exact game colouring number, found by scanning `s` upward, plus a
/// principal variation replaying to that score.
pub fn exact_colg(power: &PowerView) -> Result<SolverResult> {
    let n = power.vertex_count();
    let ceiling = 1 + power.max_degree() as u32;
    let mut nodes = 0;
    let mut winning: Option<ThresholdGame> = None;
    let mut value = ceiling;
    for s in 1..=ceiling {
        let mut game = ThresholdGame::new(power, s)?;
        let won = game.evaluate(0);
        nodes += game.nodes_expanded();
        if won {
            value = s;
            winning = Some(game);
            break;
        }
    }
    let mut winning = winning.expect("score is always at most 1 + max power degree");

    // Alice follows the winning threshold game at `value`; Bob follows his
    // winning strategy of the failed game at `value - 1`. Together they
    // pin the realized score to exactly `value`.
    let mut losing = if value > 1 {
        Some(ThresholdGame::new(power, value - 1)?)
    } else {
        None
    };
    let mut mask = 0u64;
    let mut principal_variation = Vec::with_capacity(n);
    while principal_variation.len() < n {
        let alice_to_move = mask.count_ones() % 2 == 0;
        winning.set_position(mask);
        let order = winning.move_order();
        let chosen = if alice_to_move {
            *order
                .iter()
                .find(|&&v| winning.evaluate(mask | (1 << v)))
                .expect("a winning Alice move exists from a winning position")
        } else {
            let bob_win = losing
                .as_mut()
                .and_then(|low| order.iter().find(|&&v| !low.evaluate(mask | (1 << v))));
            *bob_win.unwrap_or(&order[0])
        };
        principal_variation.push(chosen);
        mask |= 1 << chosen;
    }
    nodes += winning.nodes_expanded();
    if let Some(low) = &losing {
        nodes += low.nodes_expanded();
    }
    Ok(SolverResult {
        value,
        principal_variation,
        nodes_expanded: nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::Forest;
    use crate::game::score;

    fn power(n: usize, m: u32) -> PowerView {
        PowerView::build(Forest::path(n).unwrap(), m)
    }

    #[test]
    fn threshold_examples() {
        assert!(alice_wins(&power(1, 1), 1).unwrap());
        assert!(!alice_wins(&power(2, 1), 1).unwrap());
        assert!(alice_wins(&power(2, 1), 2).unwrap());
        assert!(!alice_wins(&power(4, 1), 2).unwrap());
        assert!(alice_wins(&power(4, 1), 3).unwrap());
    }

    #[test]
    fn exact_values() {
        assert_eq!(exact_colg(&power(1, 1)).unwrap().value, 1);
        assert_eq!(exact_colg(&power(4, 1)).unwrap().value, 3);
    }

    #[test]
    fn monotone_in_s() {
        for seed in [5u64, 6, 7] {
            let f = Forest::random_tree(8, 3, seed).unwrap();
            let p = PowerView::build(f, 2);
            let mut prev = false;
            for s in 1..=(1 + p.max_degree() as u32) {
                let now = alice_wins(&p, s).unwrap();
                assert!(!prev || now, "seed {seed}, s {s}");
                prev = now;
            }
        }
    }

    #[test]
    fn pv_replays_to_the_value() {
        for (n, m) in [(4, 1), (5, 1), (6, 2), (7, 2)] {
            let p = power(n, m);
            let result = exact_colg(&p).unwrap();
            let report = score(&p, &result.principal_variation).unwrap();
            assert_eq!(report.score, result.value, "n={n} m={m}");
        }
    }

    #[test]
    fn value_within_structural_limits() {
        let f = Forest::random_tree(10, 3, 9).unwrap();
        let p = PowerView::build(f, 2);
        let result = exact_colg(&p).unwrap();
        assert!(result.value >= 1);
        assert!(result.value <= 1 + p.max_degree() as u32);
    }

    #[test]
    fn capacity_is_enforced() {
        let f = Forest::path(SOLVER_VERTEX_CAP + 1).unwrap();
        let p = PowerView::build(f, 1);
        assert!(matches!(exact_colg(&p), Err(Error::Capacity(_))));
    }

    #[test]
    fn trees_up_to_seven_stay_at_most_four() {
        for n in 1..=7usize {
            for tree in crate::forest::enumerate_trees(n, n.saturating_sub(1).max(1)).unwrap() {
                let p = PowerView::build(tree, 1);
                assert!(exact_colg(&p).unwrap().value <= 4);
            }
        }
    }
}
