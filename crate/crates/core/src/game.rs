//! The marking game engine: move application with activation bookkeeping,
//! back degrees and scores, trace emission and replay.
//!
//! Activation works per component. The first vertex marked in a component
//! becomes the root of that component's active tree; every later move in
//! the component activates all not-yet-active vertices on the path from
//! the marked vertex to the root, with parent links oriented toward the
//! root. The engine activates on both players' moves, which keeps the
//! marked set a subset of the active set at all times.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::power::PowerView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    #[serde(rename = "A")]
    Alice,
    #[serde(rename = "B")]
    Bob,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Player::Alice => "A",
            Player::Bob => "B",
        })
    }
}

/// Which case of Alice's activation strategy produced a move. Advisory
/// metadata supplied by Alice strategies; the engine never enforces it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    A1,
    A2,
    B,
    #[serde(rename = "first")]
    First,
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rule::A1 => "A1",
            Rule::A2 => "A2",
            Rule::B => "B",
            Rule::First => "first",
        })
    }
}

/// One move of the game, as emitted to JSONL traces:
/// `{"i":1,"player":"A","v":2,"rule":"first","activated":[2]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveRecord {
    /// Move number, starting from 1.
    pub i: u32,
    pub player: Player,
    pub v: usize,
    pub rule: Option<Rule>,
    /// Vertices newly activated by this move, ascending.
    pub activated: Vec<usize>,
    /// Marked power-neighbours of `v` at the moment it was marked. Not
    /// part of the wire format.
    #[serde(skip)]
    pub back_degree_at_mark: u32,
}

struct UndoFrame {
    vertex: usize,
    activated: Vec<usize>,
    flagged: Vec<usize>,
    rooted_component: Option<usize>,
    prev_last_bob: Option<(usize, usize)>,
}

/// Mutable state of one game over an immutable [`PowerView`].
pub struct GameState<'p> {
    power: &'p PowerView,
    marked: Vec<bool>,
    order: Vec<usize>,
    active: Vec<bool>,
    /// Root of the active tree, per component id.
    root: Vec<Option<usize>>,
    /// Active-tree parent, toward the component root; set when activated.
    parent: Vec<Option<usize>>,
    /// Next hop toward the component root in the base forest; populated
    /// for the whole component when its root is created.
    hop: Vec<Option<usize>>,
    /// Base-forest distance to the component root; valid once rooted.
    depth: Vec<u32>,
    /// Whether the rooted subtree at this vertex contains a marked vertex.
    subtree_marked: Vec<bool>,
    /// Marked power-neighbour count, maintained incrementally.
    marked_power_neighbours: Vec<u32>,
    turn: Player,
    /// Bob's last move `v` and the first active vertex `w` on the path
    /// from `v` to the root, evaluated before that move's activation.
    last_bob: Option<(usize, usize)>,
    history: Vec<UndoFrame>,
    validate: bool,
}

impl<'p> GameState<'p> {
    pub fn new(power: &'p PowerView) -> Self {
        let n = power.vertex_count();
        GameState {
            power,
            marked: vec![false; n],
            order: Vec::with_capacity(n),
            active: vec![false; n],
            root: vec![None; power.base().components().len()],
            parent: vec![None; n],
            hop: vec![None; n],
            depth: vec![0; n],
            subtree_marked: vec![false; n],
            marked_power_neighbours: vec![0; n],
            turn: Player::Alice,
            last_bob: None,
            history: Vec::new(),
            validate: cfg!(debug_assertions),
        }
    }

    /// Toggles the per-transition invariant validator (on by default in
    /// debug builds). Bulk campaigns switch it off.
    pub fn set_validation(&mut self, on: bool) {
        self.validate = on;
    }

    pub fn power(&self) -> &'p PowerView {
        self.power
    }

    pub fn vertex_count(&self) -> usize {
        self.marked.len()
    }

    pub fn is_marked(&self, v: usize) -> bool {
        self.marked[v]
    }

    pub fn is_active(&self, v: usize) -> bool {
        self.active[v]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn turn(&self) -> Player {
        self.turn
    }

    pub fn finished(&self) -> bool {
        self.order.len() == self.marked.len()
    }

    pub fn root_of_component(&self, cid: usize) -> Option<usize> {
        self.root[cid]
    }

    /// Active-tree parent of `v`, toward its component root.
    pub fn parent_of(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Next hop from `v` toward its component root in the base forest;
    /// `None` for the root itself or for unrooted components.
    pub fn hop_toward_root(&self, v: usize) -> Option<usize> {
        self.hop[v]
    }

    /// Base-forest distance from `v` to its component root. Only
    /// meaningful once the component is rooted.
    pub fn depth_of(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn subtree_contains_mark(&self, v: usize) -> bool {
        self.subtree_marked[v]
    }

    /// Current number of marked power-neighbours of `v`.
    pub fn marked_power_neighbours(&self, v: usize) -> u32 {
        self.marked_power_neighbours[v]
    }

    /// Bob's last move together with its pre-activation `w`.
    pub fn last_bob_move(&self) -> Option<(usize, usize)> {
        self.last_bob
    }

    pub fn unmarked(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.marked.len()).filter(|&v| !self.marked[v])
    }

    /// The first active vertex on the path from `v` to its component
    /// root; `v` itself when active. Errors on unrooted components.
    pub fn first_active_on_path(&self, v: usize) -> Result<usize> {
        if v >= self.vertex_count() {
            return Err(Error::InvalidInput(format!("vertex {v} out of range")));
        }
        let cid = self.power.base().component_id(v);
        if self.root[cid].is_none() {
            return Err(Error::State(format!(
                "component of vertex {v} has no root yet"
            )));
        }
        let mut x = v;
        while !self.active[x] {
            x = self.hop[x].expect("root is active, walk terminates");
        }
        Ok(x)
    }

    /// Marks `v` for `player`, performing the activation bookkeeping.
    /// Rejects wrong-turn, already-marked, and out-of-range moves.
    pub fn apply_move(
        &mut self,
        player: Player,
        v: usize,
        rule: Option<Rule>,
    ) -> Result<MoveRecord> {
        if player != self.turn {
            return Err(Error::RuleViolation(format!(
                "it is not {player}'s turn"
            )));
        }
        if v >= self.vertex_count() {
            return Err(Error::RuleViolation(format!("vertex {v} out of range")));
        }
        if self.marked[v] {
            return Err(Error::RuleViolation(format!(
                "vertex {v} is already marked"
            )));
        }

        let cid = self.power.base().component_id(v);
        let mut activated = Vec::new();
        let mut rooted_component = None;
        let w;
        if self.root[cid].is_none() {
            // First mark in the component: v becomes root and is activated.
            self.root[cid] = Some(v);
            rooted_component = Some(cid);
            self.index_component(cid, v);
            self.active[v] = true;
            self.parent[v] = None;
            activated.push(v);
            w = v;
        } else {
            let mut x = v;
            while !self.active[x] {
                x = self.hop[x].expect("rooted component");
            }
            w = x;
            let mut x = v;
            while !self.active[x] {
                self.active[x] = true;
                self.parent[x] = self.hop[x];
                activated.push(x);
                x = self.hop[x].expect("rooted component");
            }
            activated.sort_unstable();
        }

        let back_degree_at_mark = self.marked_power_neighbours[v];
        self.marked[v] = true;
        self.order.push(v);
        for &u in self.power.neighbours(v) {
            self.marked_power_neighbours[u] += 1;
        }
        let mut flagged = Vec::new();
        let mut x = v;
        loop {
            if self.subtree_marked[x] {
                break;
            }
            self.subtree_marked[x] = true;
            flagged.push(x);
            match self.hop[x] {
                Some(h) => x = h,
                None => break,
            }
        }
        let prev_last_bob = self.last_bob;
        if player == Player::Bob {
            self.last_bob = Some((v, w));
        }
        self.turn = self.turn.other();
        self.history.push(UndoFrame {
            vertex: v,
            activated: activated.clone(),
            flagged,
            rooted_component,
            prev_last_bob,
        });

        if self.validate {
            self.validate_invariants()?;
        }

        Ok(MoveRecord {
            i: self.order.len() as u32,
            player,
            v,
            rule,
            activated,
            back_degree_at_mark,
        })
    }

    /// Reverts the most recent move. Returns false on an empty history.
    pub fn undo_last(&mut self) -> bool {
        let Some(frame) = self.history.pop() else {
            return false;
        };
        let v = frame.vertex;
        self.turn = self.turn.other();
        self.order.pop();
        self.marked[v] = false;
        for &u in self.power.neighbours(v) {
            self.marked_power_neighbours[u] -= 1;
        }
        for &x in &frame.flagged {
            self.subtree_marked[x] = false;
        }
        for &x in &frame.activated {
            self.active[x] = false;
            self.parent[x] = None;
        }
        if let Some(cid) = frame.rooted_component {
            self.root[cid] = None;
            for &x in &self.power.base().components()[cid] {
                self.hop[x] = None;
                self.depth[x] = 0;
            }
        }
        self.last_bob = frame.prev_last_bob;
        true
    }

    /// BFS from the new root filling `hop` and `depth` for the component.
    fn index_component(&mut self, _cid: usize, root: usize) {
        self.hop[root] = None;
        self.depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in self.power.base().neighbours(x) {
                if y != root && self.hop[y].is_none() {
                    self.hop[y] = Some(x);
                    self.depth[y] = self.depth[x] + 1;
                    queue.push_back(y);
                }
            }
        }
    }

    /// Full invariant check, used after every transition in test builds.
    pub fn validate_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::State(format!("invariant violated: {msg}")));
        let n = self.vertex_count();
        let marked_count = self.marked.iter().filter(|&&m| m).count();
        if self.order.len() != marked_count {
            return fail("order length differs from marked count".into());
        }
        let mut seen = vec![false; n];
        for &v in &self.order {
            if seen[v] {
                return fail(format!("vertex {v} occurs twice in order"));
            }
            seen[v] = true;
            if !self.marked[v] {
                return fail(format!("ordered vertex {v} is not marked"));
            }
        }
        for v in 0..n {
            if self.marked[v] && !self.active[v] {
                return fail(format!("marked vertex {v} is not active"));
            }
        }
        let base = self.power.base();
        for v in 0..n {
            if !self.active[v] {
                continue;
            }
            let cid = base.component_id(v);
            let Some(root) = self.root[cid] else {
                return fail(format!("active vertex {v} in unrooted component"));
            };
            if v == root {
                if self.parent[v].is_some() {
                    return fail(format!("root {v} has a parent"));
                }
                continue;
            }
            let Some(p) = self.parent[v] else {
                return fail(format!("active non-root vertex {v} has no parent"));
            };
            if !self.active[p] {
                return fail(format!("parent {p} of active vertex {v} is inactive"));
            }
            if !base.neighbours(v).contains(&p) {
                return fail(format!("parent {p} is not adjacent to {v}"));
            }
            if self.depth[p] + 1 != self.depth[v] {
                return fail(format!("parent {p} of {v} does not step toward the root"));
            }
        }
        Ok(())
    }
}

/// A completed (or partial) ordering's back degrees and score.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreReport {
    pub ordering: Vec<usize>,
    /// Back degree per vertex index.
    pub back_degrees: Vec<u32>,
    /// `1 + max back degree`.
    pub score: u32,
}

/// Number of power-neighbours of `v` preceding it in `ordering`.
pub fn back_degree(power: &PowerView, ordering: &[usize], v: usize) -> Result<u32> {
    let pos_v = ordering
        .iter()
        .position(|&x| x == v)
        .ok_or_else(|| Error::InvalidInput(format!("vertex {v} absent from ordering")))?;
    let mut count = 0;
    for &u in &ordering[..pos_v] {
        if power.contains_edge(v, u) {
            count += 1;
        }
    }
    Ok(count)
}

/// Scores a complete ordering of all vertices.
pub fn score(power: &PowerView, ordering: &[usize]) -> Result<ScoreReport> {
    let n = power.vertex_count();
    if ordering.len() != n {
        return Err(Error::InvalidInput(format!(
            "ordering has {} vertices, expected {n}",
            ordering.len()
        )));
    }
    let mut position = vec![usize::MAX; n];
    for (i, &v) in ordering.iter().enumerate() {
        if v >= n || position[v] != usize::MAX {
            return Err(Error::InvalidInput(format!(
                "ordering is not a permutation (vertex {v})"
            )));
        }
        position[v] = i;
    }
    let mut back_degrees = vec![0u32; n];
    for v in 0..n {
        back_degrees[v] = power
            .neighbours(v)
            .iter()
            .filter(|&&u| position[u] < position[v])
            .count() as u32;
    }
    let score = 1 + back_degrees.iter().copied().max().unwrap_or(0);
    Ok(ScoreReport {
        ordering: ordering.to_vec(),
        back_degrees,
        score,
    })
}

/// Observer of moves as they are applied.
pub trait MoveSink {
    fn on_move(&mut self, state: &GameState, record: &MoveRecord) -> Result<()>;
}

/// Collects all records.
#[derive(Default)]
pub struct VecSink {
    pub records: Vec<MoveRecord>,
}

impl MoveSink for VecSink {
    fn on_move(&mut self, _state: &GameState, record: &MoveRecord) -> Result<()> {
        self.records.push(record.clone());
        Ok(())
    }
}

/// Writes one JSON object per move.
pub struct JsonlSink<W: Write> {
    writer: W,
}

impl<W: Write> JsonlSink<W> {
    pub fn new(writer: W) -> Self {
        JsonlSink { writer }
    }

    pub fn into_inner(self) -> W {
        self.writer
    }
}

impl<W: Write> MoveSink for JsonlSink<W> {
    fn on_move(&mut self, _state: &GameState, record: &MoveRecord) -> Result<()> {
        let line = serde_json::to_string(record)
            .map_err(|e| Error::InvalidInput(format!("trace serialization: {e}")))?;
        writeln!(self.writer, "{line}")?;
        Ok(())
    }
}

/// Parses a JSONL trace.
pub fn read_trace<R: BufRead>(reader: R) -> Result<Vec<MoveRecord>> {
    let mut records = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: MoveRecord = serde_json::from_str(&line)
            .map_err(|e| Error::InvalidInput(format!("trace line {}: {e}", lineno + 1)))?;
        records.push(record);
    }
    Ok(records)
}

/// Replays a trace from an empty state, verifying move numbering, player
/// alternation, and that each recorded activation set matches what the
/// engine derives.
pub fn replay<'p>(power: &'p PowerView, records: &[MoveRecord]) -> Result<GameState<'p>> {
    let mut state = GameState::new(power);
    for (idx, rec) in records.iter().enumerate() {
        if rec.i as usize != idx + 1 {
            return Err(Error::InvalidInput(format!(
                "trace move {} has index {}",
                idx + 1,
                rec.i
            )));
        }
        let applied = state.apply_move(rec.player, rec.v, rec.rule)?;
        if applied.activated != rec.activated {
            return Err(Error::InvalidInput(format!(
                "trace move {}: recorded activation {:?} differs from derived {:?}",
                rec.i, rec.activated, applied.activated
            )));
        }
    }
    Ok(state)
}

/// Runs a full game: Alice moves first, players strictly alternate, the
/// loop ends as soon as every vertex is marked. Strategy errors or
/// illegal strategy moves abort with a fault naming the offender.
pub fn play<'s>(
    state: &mut GameState,
    alice: &'s mut dyn crate::strategy::Strategy,
    bob: &'s mut dyn crate::strategy::Strategy,
    mut sink: Option<&mut dyn MoveSink>,
) -> Result<ScoreReport> {
    if !state.order().is_empty() {
        return Err(Error::State("play requires a fresh game state".into()));
    }
    while !state.finished() {
        let (player, strategy) = match state.turn() {
            Player::Alice => (Player::Alice, &mut *alice),
            Player::Bob => (Player::Bob, &mut *bob),
        };
        let name = strategy.name().to_string();
        let fault = |reason: String| Error::StrategyFault {
            strategy: name.clone(),
            reason,
        };
        let (v, rule) = strategy.choose(state).map_err(|e| fault(e.to_string()))?;
        let record = state
            .apply_move(player, v, rule)
            .map_err(|e| fault(e.to_string()))?;
        if let Some(sink) = sink.as_deref_mut() {
            sink.on_move(state, &record)?;
        }
    }
    score(state.power(), state.order())
}
