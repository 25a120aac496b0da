//! Exhaustive N/P search with a per-query transposition table.
//!
//! This is the ground truth every polynomial solver and reduction is checked
//! against. The search is an explicit-stack depth-first traversal, so deep
//! games (large token counts) cannot overflow the call stack.

use rustc_hash::FxHashMap;

use crate::error::SolveError;
use crate::game::{Convention, Game, Move, Outcome, Position};
use crate::poly::Policy;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Widest live-vertex / live-edge set the bitset key can hold.
pub const KEY_BITS: usize = 128;

/// Canonical encoding of a position, injective among positions sharing one
/// graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StateKey {
    /// NimG: token counts and pointer.
    Weights { weights: Box<[u32]>, pointer: u32 },
    /// Geography: live vertices or live edges, and token.
    Live { bits: u128, token: u32 },
}

pub fn state_key(p: &Position) -> Result<StateKey, SolveError> {
    let token = p.current() as u32;
    let live_bits = |len: usize| -> Result<u128, SolveError> {
        if len > KEY_BITS {
            return Err(SolveError::Capacity {
                needed: len,
                cap: KEY_BITS,
            });
        }
        let words = p.removed_mask().words();
        let removed = words.first().map_or(0, |&w| u128::from(w))
            | words.get(1).map_or(0, |&w| u128::from(w) << 64);
        let all = if len == KEY_BITS {
            u128::MAX
        } else {
            (1u128 << len) - 1
        };
        Ok(all & !removed)
    };
    Ok(match p.game() {
        Game::NimgRm | Game::NimgMr => StateKey::Weights {
            weights: p.weights().into(),
            pointer: token,
        },
        Game::VertexGeography => StateKey::Live {
            bits: live_bits(p.graph().vertex_count())?,
            token,
        },
        Game::EdgeGeography => StateKey::Live {
            bits: live_bits(p.graph().edge_count())?,
            token,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    /// `None` only when the budget ran out.
    pub outcome: Option<Outcome>,
    /// Canonically-first winning move, for non-terminal N positions.
    pub principal_move: Option<Move>,
    pub states_expanded: u64,
    pub budget_exhausted: bool,
}

struct Frame {
    pos: Position,
    key: StateKey,
    moves: Vec<Move>,
    next: usize,
}

/// Reusable search state. The table is only meaningful for positions that
/// share the graph of the first query.
pub struct Solver {
    convention: Convention,
    budget: u64,
    table: FxHashMap<StateKey, Outcome>,
}

impl Solver {
    pub fn new(convention: Convention, budget: u64) -> Self {
        Solver {
            convention,
            budget,
            table: FxHashMap::default(),
        }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Number of distinct states evaluated so far.
    pub fn states(&self) -> u64 {
        self.table.len() as u64
    }

    pub fn lookup(&self, p: &Position) -> Option<Outcome> {
        self.table.get(&state_key(p).ok()?).copied()
    }

    pub fn solve(&mut self, root: &Position) -> Result<SolveReport, SolveError> {
        if self.budget == 0 {
            return Err(SolveError::ZeroBudget);
        }
        let before = self.states();
        let key = state_key(root)?;
        let exhausted = |s: &Self| SolveReport {
            outcome: None,
            principal_move: None,
            states_expanded: s.states() - before,
            budget_exhausted: true,
        };

        if let Some(&o) = self.table.get(&key) {
            // an N entry is only ever written after one of its P children
            let principal = match o {
                Outcome::N => self.first_winning_move(root)?,
                Outcome::P => None,
            };
            return Ok(SolveReport {
                outcome: Some(o),
                principal_move: principal,
                states_expanded: 0,
                budget_exhausted: false,
            });
        }
        if root.is_terminal() {
            let o = self.convention.terminal_outcome();
            self.table.insert(key, o);
            return Ok(SolveReport {
                outcome: Some(o),
                principal_move: None,
                states_expanded: self.states() - before,
                budget_exhausted: false,
            });
        }
        if self.states() >= self.budget {
            return Ok(exhausted(self));
        }

        let mut stack = vec![Frame {
            moves: root.legal_moves(),
            pos: root.clone(),
            key,
            next: 0,
        }];
        let mut principal = None;
        // outcome of the frame popped last, to be consumed by its parent
        let mut returned: Option<Outcome> = None;

        while let Some(top) = stack.last_mut() {
            let mut resolved = None;
            if let Some(r) = returned.take() {
                if r == Outcome::P {
                    resolved = Some(Outcome::N);
                } else {
                    top.next += 1;
                }
            }
            let mut descend = None;
            while resolved.is_none() && top.next < top.moves.len() {
                let child = top.pos.apply_unchecked(&top.moves[top.next]);
                let ck = state_key(&child)?;
                let known = match self.table.get(&ck) {
                    Some(&o) => Some(o),
                    None if child.is_terminal() => {
                        if self.states() >= self.budget {
                            return Ok(exhausted(self));
                        }
                        let o = self.convention.terminal_outcome();
                        self.table.insert(ck.clone(), o);
                        Some(o)
                    }
                    None => None,
                };
                match known {
                    Some(Outcome::P) => resolved = Some(Outcome::N),
                    Some(Outcome::N) => top.next += 1,
                    None => {
                        descend = Some((child, ck));
                        break;
                    }
                }
            }
            if let Some((child, ck)) = descend {
                // reserve the slot: the table size is the expansion count
                if self.states() + stack.len() as u64 >= self.budget {
                    return Ok(exhausted(self));
                }
                stack.push(Frame {
                    moves: child.legal_moves(),
                    pos: child,
                    key: ck,
                    next: 0,
                });
                continue;
            }
            let outcome = resolved.unwrap_or(Outcome::P);
            let done = stack.pop().expect("non-empty");
            if stack.is_empty() && outcome == Outcome::N {
                principal = Some(done.moves[done.next]);
            }
            self.table.insert(done.key, outcome);
            returned = Some(outcome);
        }

        let outcome = returned.expect("root resolved");
        Ok(SolveReport {
            outcome: Some(outcome),
            principal_move: principal,
            states_expanded: self.states() - before,
            budget_exhausted: false,
        })
    }

    // Canonically-first move to a P child; unknown children earlier in the
    // order are solved on demand.
    fn first_winning_move(&mut self, p: &Position) -> Result<Option<Move>, SolveError> {
        for (m, child) in p.successors() {
            let o = match self.table.get(&state_key(&child)?) {
                Some(&o) => o,
                None => match self.solve(&child)?.outcome {
                    Some(o) => o,
                    None => return Err(SolveError::BudgetExhausted(self.budget)),
                },
            };
            if o == Outcome::P {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }
}

/// Exact outcome of `p` under `c`, expanding at most `budget` states.
pub fn solve(p: &Position, c: Convention, budget: u64) -> Result<SolveReport, SolveError> {
    Solver::new(c, budget).solve(p)
}

/// Outcome or an error when the budget runs out.
pub fn outcome(p: &Position, c: Convention, budget: u64) -> Result<Outcome, SolveError> {
    solve(p, c, budget)?
        .outcome
        .ok_or(SolveError::BudgetExhausted(budget))
}

/// Winning policy for an N position: at every position it is queried on, it
/// plays the canonically-first move to a P successor.
pub fn extract_strategy(p: &Position, c: Convention, budget: u64) -> Result<Policy, SolveError> {
    match outcome(p, c, budget)? {
        Outcome::N => Ok(Policy::Exhaustive {
            convention: c,
            budget,
        }),
        Outcome::P => Err(SolveError::NotWinning),
    }
}
