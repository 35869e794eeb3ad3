//! Exhaustive search over tie-break choices.
//!
//! [`worst_case_cover`] explores every argmin choice depth first and returns
//! the largest cover time together with a replayable witness. Completed
//! subtrees are memoized under a key that keeps exactly the information the
//! policy can see: the current node, the visited set, and the policy's own
//! counter family with frequencies shifted by their minimum or timestamps
//! replaced by their ranks. Two states with equal keys have identical futures.
//!
//! A key that reappears on the current search path means the walk can loop
//! forever without covering the graph, and a path that reaches the step cap
//! means the same. Either way the search stops and reports the cap as a lower
//! bound, with a witness that runs for exactly `step_cap` moves.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, NodeId};
use crate::walk::{Move, Policy, WalkState};

pub const DEFAULT_STEP_CAP: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("start node {0} is not in the graph")]
    BadStart(u32),
    #[error("step cap must be at least 1")]
    ZeroCap,
    #[error(transparent)]
    Walk(#[from] crate::walk::WalkError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub max_cover_time: u64,
    pub witness: Vec<Move>,
    pub nodes_explored: u64,
    /// Some choice sequence runs past the cap without covering; the true
    /// maximum is at least `max_cover_time` and may be unbounded.
    pub lower_bound_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Key {
    current: u32,
    counters: Vec<u64>,
    visited: Vec<u64>,
}

fn shifted(xs: &[u64]) -> Vec<u64> {
    let m = xs.iter().copied().min().unwrap_or(0);
    xs.iter().map(|x| x - m).collect()
}

fn ranked(xs: &[Option<u64>]) -> Vec<u64> {
    let mut seen: Vec<u64> = xs.iter().flatten().copied().collect();
    seen.sort_unstable();
    seen.dedup();
    xs.iter()
        .map(|x| x.map_or(0, |t| seen.binary_search(&t).expect("present") as u64 + 1))
        .collect()
}

fn key_of(policy: Policy, s: &WalkState, visited: &Bits) -> Key {
    let counters = match policy {
        Policy::LfvV => shifted(&s.node_freq),
        Policy::LfvE => shifted(&s.edge_freq),
        Policy::LrvV => ranked(&s.node_last),
        Policy::LrvE => ranked(&s.edge_last),
    };
    Key {
        current: s.current.0,
        counters,
        visited: visited.words.clone(),
    }
}

#[derive(Debug, Clone)]
struct Bits {
    words: Vec<u64>,
    unset: usize,
}

impl Bits {
    fn new(n: usize) -> Self {
        Bits {
            words: vec![0; n.div_ceil(64)],
            unset: n,
        }
    }

    fn set(&mut self, i: usize) {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        if self.words[w] & b == 0 {
            self.words[w] |= b;
            self.unset -= 1;
        }
    }
}

struct Frame {
    state: WalkState,
    visited: Bits,
    key: Key,
    slots: Vec<usize>,
    next: usize,
    best: Option<(u64, usize)>,
}

enum Child {
    Value(u64),
    Push(Frame),
    Capped(Vec<Move>),
}

struct Search<'g> {
    g: &'g Graph,
    policy: Policy,
    cap: u64,
    memo: HashMap<Key, (u64, usize)>,
    on_path: HashMap<Key, usize>,
    explored: u64,
}

impl Search<'_> {
    fn frame(&self, state: WalkState, visited: Bits, key: Key) -> Frame {
        let mut slots = Vec::new();
        state.candidate_slots(self.g, self.policy, &mut slots);
        Frame {
            state,
            visited,
            key,
            slots,
            next: 0,
            best: None,
        }
    }

    fn best_move(&self, s: &WalkState, visited: &Bits) -> Move {
        let (_, slot) = self.memo[&key_of(self.policy, s, visited)];
        Move::from(self.g.incidences(s.current)[slot])
    }

    /// Extends `moves` (ending in `state`) to exactly `cap` moves by following
    /// memoized best choices.
    fn extend_by_memo(
        &self,
        mut moves: Vec<Move>,
        mut state: WalkState,
        mut visited: Bits,
    ) -> Vec<Move> {
        while (moves.len() as u64) < self.cap {
            let mv = self.best_move(&state, &visited);
            step_to(self.g, &mut state, &mut visited, mv);
            moves.push(mv);
        }
        moves
    }

    fn path_moves(&self, stack: &[Frame]) -> Vec<Move> {
        stack
            .iter()
            .filter_map(|f| {
                f.next
                    .checked_sub(1)
                    .map(|i| Move::from(self.g.incidences(f.state.current)[f.slots[i]]))
            })
            .collect()
    }

    fn child(&mut self, stack: &[Frame], state: WalkState, visited: Bits) -> Child {
        self.explored += 1;
        if visited.unset == 0 {
            return Child::Value(0);
        }
        if state.t >= self.cap {
            return Child::Capped(self.path_moves(stack));
        }
        let key = key_of(self.policy, &state, &visited);
        if let Some(&(rem, _)) = self.memo.get(&key) {
            if state.t + rem <= self.cap {
                return Child::Value(rem);
            }
            let prefix = self.path_moves(stack);
            return Child::Capped(self.extend_by_memo(prefix, state, visited));
        }
        if let Some(&depth) = self.on_path.get(&key) {
            let moves = self.path_moves(stack);
            let cycle = moves[depth..].to_vec();
            let mut out = moves;
            let mut i = 0;
            while (out.len() as u64) < self.cap {
                out.push(cycle[i % cycle.len()]);
                i += 1;
            }
            return Child::Capped(out);
        }
        Child::Push(self.frame(state, visited, key))
    }
}

fn step_to(g: &Graph, state: &mut WalkState, visited: &mut Bits, mv: Move) {
    state
        .advance(crate::graph::Incidence {
            neighbor: mv.dest,
            edge: mv.edge,
        })
        .expect("oracle runs are far below counter limits");
    visited.set(mv.dest.index());
    debug_assert!(g.contains(mv.dest));
}

/// Largest cover time over every tie-resolution sequence, with a witness.
pub fn worst_case_cover(
    g: &Graph,
    policy: Policy,
    start: NodeId,
    step_cap: u64,
) -> Result<OracleResult, OracleError> {
    if !g.contains(start) {
        return Err(OracleError::BadStart(start.0));
    }
    if step_cap == 0 {
        return Err(OracleError::ZeroCap);
    }
    let mut visited = Bits::new(g.node_count());
    visited.set(start.index());
    if visited.unset == 0 {
        return Ok(OracleResult {
            max_cover_time: 0,
            witness: Vec::new(),
            nodes_explored: 1,
            lower_bound_only: false,
        });
    }
    let mut search = Search {
        g,
        policy,
        cap: step_cap,
        memo: HashMap::new(),
        on_path: HashMap::new(),
        explored: 1,
    };
    let root_state = WalkState::new(g, start);
    let root_key = key_of(policy, &root_state, &visited);
    search.on_path.insert(root_key.clone(), 0);
    let mut stack = vec![search.frame(root_state, visited, root_key)];

    loop {
        let top = stack
            .last_mut()
            .expect("stack is never empty inside the loop");
        if top.next < top.slots.len() {
            let slot = top.slots[top.next];
            top.next += 1;
            let mut state = top.state.clone();
            let mut visited = top.visited.clone();
            let mv = Move::from(g.incidences(state.current)[slot]);
            step_to(g, &mut state, &mut visited, mv);
            match search.child(&stack, state, visited) {
                Child::Value(rem) => {
                    let top = stack.last_mut().expect("non-empty");
                    if top.best.is_none_or(|(b, _)| rem + 1 > b) {
                        top.best = Some((rem + 1, slot));
                    }
                }
                Child::Push(f) => {
                    search.on_path.insert(f.key.clone(), stack.len());
                    stack.push(f);
                }
                Child::Capped(witness) => {
                    debug_assert_eq!(witness.len() as u64, step_cap);
                    return Ok(OracleResult {
                        max_cover_time: step_cap,
                        witness,
                        nodes_explored: search.explored,
                        lower_bound_only: true,
                    });
                }
            }
        } else {
            let done = stack.pop().expect("non-empty");
            let best = done
                .best
                .expect("every node of a connected graph with n >= 2 has a move");
            search.on_path.remove(&done.key);
            search.memo.insert(done.key, best);
            match stack.last_mut() {
                Some(parent) => {
                    let slot = parent.slots[parent.next - 1];
                    if parent.best.is_none_or(|(b, _)| best.0 + 1 > b) {
                        parent.best = Some((best.0 + 1, slot));
                    }
                }
                None => {
                    let mut state = WalkState::new(g, start);
                    let mut visited = Bits::new(g.node_count());
                    visited.set(start.index());
                    let mut witness = Vec::with_capacity(best.0 as usize);
                    while visited.unset > 0 {
                        let mv = search.best_move(&state, &visited);
                        step_to(g, &mut state, &mut visited, mv);
                        witness.push(mv);
                    }
                    debug_assert_eq!(witness.len() as u64, best.0);
                    return Ok(OracleResult {
                        max_cover_time: best.0,
                        witness,
                        nodes_explored: search.explored,
                        lower_bound_only: false,
                    });
                }
            }
        }
    }
}

/// Searches every tie-resolution sequence of at most `max_steps` moves for a
/// state satisfying `target`. Returns the moves that reach it.
pub fn reach(
    g: &Graph,
    policy: Policy,
    start: NodeId,
    max_steps: u64,
    target: impl Fn(&WalkState) -> bool,
) -> Result<Option<Vec<Move>>, OracleError> {
    if !g.contains(start) {
        return Err(OracleError::BadStart(start.0));
    }
    let root = WalkState::new(g, start);
    if target(&root) {
        return Ok(Some(Vec::new()));
    }
    let mut seen: HashSet<WalkState> = HashSet::new();
    let mut stack: Vec<(WalkState, Vec<Move>)> = vec![(root, Vec::new())];
    while let Some((state, path)) = stack.pop() {
        if state.t >= max_steps {
            continue;
        }
        for inc in state.candidates(g, policy).into_iter().rev() {
            let mut next = state.clone();
            next.advance(inc)?;
            let mut p = path.clone();
            p.push(Move::from(inc));
            if target(&next) {
                return Ok(Some(p));
            }
            if seen.insert(next.clone()) {
                stack.push((next, p));
            }
        }
    }
    Ok(None)
}
