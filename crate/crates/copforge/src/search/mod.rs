//! Proof search: clausal (two backends) and nonclausal engines with
//! iterative deepening, conjecture-directed start clauses, and restricted
//! backtracking.

pub mod clausal;
pub mod nonclausal;

use std::collections::HashMap;
use std::time::Instant;

use crate::ncmatrix::{ClauseId, NcClause};
use crate::term::{Term, VarId};

/// Search statistics, reported even on timeout.
#[derive(Debug, Clone, Default)]
pub struct Stats {
    /// Successful unifications performed.
    pub inferences: u64,
    /// Deepest path-length limit reached.
    pub depth: u32,
    /// Monte Carlo statistics, present in MCPS mode.
    pub mcts: Option<McStats>,
}

#[derive(Debug, Clone, Default)]
pub struct McStats {
    pub iterations: u64,
    pub simulation_steps: u64,
    pub max_simulation_len: u64,
    pub discrimination: Option<f64>,
}

/// Exploration backends for clausal search. Both traverse the search space
/// in exactly the same order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Resumable solution stream driven by an explicit choice-point stack.
    #[default]
    Stream,
    /// Continuation-passing style.
    Cps,
}

#[derive(Debug, Clone)]
pub struct SearchOpts {
    /// Restricted backtracking: once a branch closes, its remaining
    /// alternatives are discarded.
    pub cut: bool,
    /// Conjecture-directed start clauses (falls back to all clauses when no
    /// clause descends from a conjecture).
    pub conj: bool,
    pub backend: Backend,
    pub lim_start: u32,
    pub lim_max: u32,
    /// Wall-clock deadline.
    pub deadline: Option<Instant>,
    /// Regularity pruning: reject extension steps that place a literal
    /// σ-identical to a path literal.
    pub regularity: bool,
    /// Lemma reuse: close a goal that σ-equals an already closed literal of
    /// the same conjunction context.
    pub lemmata: bool,
}

impl Default for SearchOpts {
    fn default() -> Self {
        SearchOpts {
            cut: false,
            conj: false,
            backend: Backend::Stream,
            lim_start: 1,
            lim_max: 64,
            deadline: None,
            regularity: false,
            lemmata: false,
        }
    }
}

/// Final bindings of a found proof: every variable bound by the global
/// substitution, fully dereferenced. Variables absent from the map were
/// unbound when the proof closed.
pub type Sigma = HashMap<VarId, Term>;

/// A clausal connection proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClausalProof {
    pub start_clause: usize,
    pub start_vars: Vec<VarId>,
    pub children: Vec<ClausalNode>,
    pub sigma: Sigma,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClausalNode {
    /// Closed against a path literal (0 = oldest path entry).
    Reduction { path_index: usize },
    /// Extension with the contrapositive at (clause, lit); `vars` are the
    /// fresh variables of the clause copy in clause-variable order.
    Extension { clause: usize, lit: usize, vars: Vec<VarId>, children: Vec<ClausalNode> },
    /// Closed by reusing the recorded proof of an σ-identical literal.
    Lemma { replay: Box<ClausalNode> },
}

/// A nonclausal connection proof.
#[derive(Debug, Clone)]
pub struct NcProof {
    pub start_index: usize,
    /// The instantiated copy of the start clause.
    pub start_copy: NcClause,
    pub children: Vec<NcNode>,
    pub sigma: Sigma,
}

#[derive(Debug, Clone)]
pub enum NcNode {
    Reduction { path_index: usize },
    /// Extension into `target` (the clause replaced in the matrix) using
    /// the fresh copy `copy`; `lit_path` locates the connected literal
    /// within the copy.
    Extension { target: ClauseId, copy: NcClause, lit_path: Vec<usize>, children: Vec<NcNode> },
    /// Decomposition choosing clause `resident_index` of a matrix goal.
    /// `spine` marks the forced steps along a β-clause continuation.
    Decomposition { resident_id: ClauseId, resident_index: usize, spine: bool, children: Vec<NcNode> },
}

/// Outcome of a proof attempt.
#[derive(Debug, Clone)]
pub enum Outcome<P> {
    Proof(P, Stats),
    /// A deepening level completed without any branch being cut off by the
    /// path limit: no proof exists at any depth.
    Exhausted(Stats),
    Timeout(Stats),
}

impl<P> Outcome<P> {
    pub fn stats(&self) -> &Stats {
        match self {
            Outcome::Proof(_, s) | Outcome::Exhausted(s) | Outcome::Timeout(s) => s,
        }
    }

    pub fn proof(&self) -> Option<&P> {
        match self {
            Outcome::Proof(p, _) => Some(p),
            _ => None,
        }
    }
}
