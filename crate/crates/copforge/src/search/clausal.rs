//! Clausal connection proof search with iterative deepening, restricted
//! backtracking, conjecture-directed start clauses, and two backends that
//! explore the search space in exactly the same order.

use std::rc::Rc;
use std::time::Instant;

use crate::guidance::GuideState;
use crate::matrix::{ClausalMatrix, ContraIndex};
use crate::search::{Backend, ClausalNode, ClausalProof, Outcome, SearchOpts, Stats};
use crate::term::{Lit, VarGen, VarId};
use crate::unify::{unify_lits, Subst};

// ---------------------------------------------------------------------------
// Shared pieces
// ---------------------------------------------------------------------------

#[derive(Debug)]
enum PathList {
    Nil,
    Cons { lit: Lit, depth: u32, next: Rc<PathList> },
}

fn path_vec(path: &Rc<PathList>) -> Vec<Lit> {
    // oldest first
    let mut out = Vec::new();
    let mut cur = path;
    while let PathList::Cons { lit, next, .. } = &**cur {
        out.push(lit.clone());
        cur = next;
    }
    out.reverse();
    out
}

#[derive(Debug)]
enum GoalList {
    Nil,
    Lit { lit: Lit, path: Rc<PathList>, rem: u32, next: Rc<GoalList> },
    /// Branch-closed marker for the literal whose extension spawned the
    /// goals before this node. `cp_height` is the index of that literal's
    /// choice point, `ext_begin` its ExtBegin trace position.
    Pop { lit: Lit, cp_height: usize, ext_begin: usize, next: Rc<GoalList> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TraceEv {
    Start { clause: usize, vars: Vec<VarId> },
    Reduction { path_index: usize },
    ExtBegin { clause: usize, lit: usize, vars: Vec<VarId> },
    ExtEnd,
    Lemma { replay: Box<ClausalNode> },
}

fn parse_trace(evs: &[TraceEv], sigma: crate::search::Sigma) -> ClausalProof {
    let (clause, vars) = match &evs[0] {
        TraceEv::Start { clause, vars } => (*clause, vars.clone()),
        other => panic!("trace starts with Start, got {:?}", other),
    };
    let mut pos = 1;
    let mut children = Vec::new();
    while pos < evs.len() {
        children.push(parse_node(evs, &mut pos));
    }
    ClausalProof { start_clause: clause, start_vars: vars, children, sigma }
}

fn parse_node(evs: &[TraceEv], pos: &mut usize) -> ClausalNode {
    match &evs[*pos] {
        TraceEv::Reduction { path_index } => {
            *pos += 1;
            ClausalNode::Reduction { path_index: *path_index }
        }
        TraceEv::Lemma { replay } => {
            *pos += 1;
            ClausalNode::Lemma { replay: replay.clone() }
        }
        TraceEv::ExtBegin { clause, lit, vars } => {
            *pos += 1;
            let mut children = Vec::new();
            while !matches!(evs[*pos], TraceEv::ExtEnd) {
                children.push(parse_node(evs, pos));
            }
            *pos += 1; // skip ExtEnd
            ClausalNode::Extension { clause: *clause, lit: *lit, vars: vars.clone(), children }
        }
        other => panic!("unexpected trace event {:?}", other),
    }
}

/// Alternatives for one goal literal, in exploration order: lemma closures
/// (when enabled), reductions against the path oldest to newest, then
/// extensions from the contrapositive index in index order (possibly
/// reordered by guidance).
struct Alternatives {
    lemma: Option<Box<ClausalNode>>,
    lemma_done: bool,
    reductions: Vec<usize>, // path indices, oldest first
    red_pos: usize,
    extensions: Vec<usize>, // positions into the index entry list
    ext_pos: usize,
}

fn compute_alternatives(
    goal: &Lit,
    path: &[Lit],
    index: &ContraIndex,
    opts: &SearchOpts,
    subst: &Subst,
    lemmas: &[(Lit, ClausalNode)],
    guide: Option<&mut GuideState>,
) -> Alternatives {
    let lemma = if opts.lemmata {
        let resolved = subst.resolve_lit(goal);
        lemmas
            .iter()
            .find(|(l, _)| subst.resolve_lit(l) == resolved)
            .map(|(_, n)| Box::new(n.clone()))
    } else {
        None
    };
    let reductions: Vec<usize> = path
        .iter()
        .enumerate()
        .filter(|(_, p)| p.pred == -goal.pred)
        .map(|(i, _)| i)
        .collect();
    let entries = index.lookup(goal);
    let extensions: Vec<usize> = match guide {
        Some(g) => g.order_extensions(goal, entries),
        None => (0..entries.len()).collect(),
    };
    Alternatives { lemma, lemma_done: false, reductions, red_pos: 0, extensions, ext_pos: 0 }
}

// ---------------------------------------------------------------------------
// Stream backend
// ---------------------------------------------------------------------------

struct Cp {
    goals: Rc<GoalList>,
    goal_lit: Option<Lit>,
    goal_path: Vec<Lit>,
    goal_rem: u32,
    alts: Alternatives,
    mark: crate::unify::Mark,
    trace_len: usize,
    lemma_len: usize,
    guide_len: usize,
}

/// Resumable clausal search at a fixed path limit. `next_solution` yields
/// closed proof trees one at a time; between calls the engine state
/// reflects the last solution.
pub struct StreamEngine<'a> {
    matrix: &'a ClausalMatrix,
    index: &'a ContraIndex,
    opts: &'a SearchOpts,
    pub subst: Subst,
    gen: VarGen,
    lim: u32,
    goals: Rc<GoalList>,
    cps: Vec<Cp>,
    trace: Vec<TraceEv>,
    lemmas: Vec<(Lit, ClausalNode)>,
    guide: Option<GuideState<'a>>,
    pub depth_pruned: bool,
    pub timed_out: bool,
    started: bool,
    ticks: u32,
}

impl<'a> StreamEngine<'a> {
    pub fn new(
        matrix: &'a ClausalMatrix,
        index: &'a ContraIndex,
        opts: &'a SearchOpts,
        guide: Option<GuideState<'a>>,
        var_base: VarId,
        lim: u32,
    ) -> StreamEngine<'a> {
        StreamEngine {
            matrix,
            index,
            opts,
            subst: Subst::new(),
            gen: VarGen::starting_at(var_base),
            lim,
            goals: Rc::new(GoalList::Nil),
            cps: Vec::new(),
            trace: Vec::new(),
            lemmas: Vec::new(),
            guide,
            depth_pruned: false,
            timed_out: false,
            started: false,
            ticks: 0,
        }
    }

    fn start_candidates(matrix: &ClausalMatrix, conj: bool) -> Vec<usize> {
        if conj {
            let flagged: Vec<usize> = matrix
                .clauses
                .iter()
                .enumerate()
                .filter(|(_, c)| c.from_conjecture)
                .map(|(i, _)| i)
                .collect();
            if !flagged.is_empty() {
                return flagged;
            }
        }
        (0..matrix.clauses.len()).collect()
    }

    fn check_deadline(&mut self) -> bool {
        self.ticks += 1;
        if self.ticks % 1024 == 0 {
            if let Some(d) = self.opts.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                    return true;
                }
            }
        }
        false
    }

    /// Produce the next closed proof tree, or `None` when the level is
    /// exhausted (or the deadline hit; see `timed_out`).
    pub fn next_solution(&mut self) -> Option<ClausalProof> {
        let mut need_alt = if self.started {
            true // resume past the previous solution
        } else {
            self.started = true;
            // pseudo choice point over start clauses
            let starts = Self::start_candidates(self.matrix, self.opts.conj);
            self.cps.push(Cp {
                goals: Rc::new(GoalList::Nil),
                goal_lit: None,
                goal_path: Vec::new(),
                goal_rem: self.lim,
                alts: Alternatives {
                    lemma: None,
                    lemma_done: true,
                    reductions: Vec::new(),
                    red_pos: 0,
                    extensions: starts,
                    ext_pos: 0,
                },
                mark: self.subst.mark(),
                trace_len: 0,
                lemma_len: 0,
                guide_len: 0,
            });
            true
        };

        loop {
            if self.check_deadline() {
                return None;
            }
            if need_alt {
                if self.cps.is_empty() {
                    return None;
                }
                if self.try_alternative() {
                    need_alt = false;
                } else {
                    self.cps.pop();
                }
                continue;
            }
            let goals = self.goals.clone();
            match &*goals {
                GoalList::Nil => {
                    let sigma = self.subst.bound_vars().into_iter().collect();
                    return Some(parse_trace(&self.trace, sigma));
                }
                GoalList::Pop { lit, cp_height, ext_begin, next } => {
                    self.trace.push(TraceEv::ExtEnd);
                    let mut pos = *ext_begin;
                    let node = parse_node(&self.trace, &mut pos);
                    self.lemmas.push((lit.clone(), node));
                    if self.opts.cut {
                        self.cps.truncate(*cp_height);
                    }
                    if let Some(g) = self.guide.as_mut() {
                        g.pop();
                    }
                    self.goals = next.clone();
                }
                GoalList::Lit { lit, path, rem, next } => {
                    let pvec = path_vec(path);
                    let alts = compute_alternatives(
                        lit,
                        &pvec,
                        self.index,
                        self.opts,
                        &self.subst,
                        &self.lemmas,
                        self.guide.as_mut(),
                    );
                    self.cps.push(Cp {
                        goals: next.clone(),
                        goal_lit: Some(lit.clone()),
                        goal_path: pvec,
                        goal_rem: *rem,
                        alts,
                        mark: self.subst.mark(),
                        trace_len: self.trace.len(),
                        lemma_len: self.lemmas.len(),
                        guide_len: self.guide.as_ref().map(|g| g.depth()).unwrap_or(0),
                    });
                    // keep `path` reachable through the choice point's goal
                    // data: rebuild on application from goal_path
                    self.goals = goals.clone();
                    need_alt = true;
                }
            }
        }
    }

    /// Try the next alternative of the top choice point. Returns whether
    /// one was applied.
    fn try_alternative(&mut self) -> bool {
        loop {
            // restore state to the decision point
            {
                let cp = self.cps.last().unwrap();
                self.subst.undo_to(cp.mark);
                self.trace.truncate(cp.trace_len);
                self.lemmas.truncate(cp.lemma_len);
                let guide_len = cp.guide_len;
                if let Some(g) = self.guide.as_mut() {
                    g.truncate(guide_len);
                }
            }
            let cp_height = self.cps.len() - 1;
            let cp = self.cps.last_mut().unwrap();
            let goal = match cp.goal_lit.clone() {
                None => {
                    // start clauses
                    if cp.alts.ext_pos >= cp.alts.extensions.len() {
                        return false;
                    }
                    let ci = cp.alts.extensions[cp.alts.ext_pos];
                    cp.alts.ext_pos += 1;
                    let (lits, vars) = self.matrix.instantiate(ci, &mut self.gen);
                    self.trace.push(TraceEv::Start { clause: ci, vars });
                    let mut goals = Rc::new(GoalList::Nil);
                    for lit in lits.into_iter().rev() {
                        goals = Rc::new(GoalList::Lit {
                            lit,
                            path: Rc::new(PathList::Nil),
                            rem: self.lim,
                            next: goals,
                        });
                    }
                    self.goals = goals;
                    return true;
                }
                Some(g) => g,
            };

            // lemma closure
            if !cp.alts.lemma_done {
                cp.alts.lemma_done = true;
                if let Some(node) = cp.alts.lemma.clone() {
                    self.trace.push(TraceEv::Lemma { replay: node.clone() });
                    self.lemmas.push((goal.clone(), ClausalNode::Lemma { replay: node }));
                    let next = cp.goals.clone();
                    if self.opts.cut {
                        self.cps.truncate(cp_height);
                    }
                    self.goals = next;
                    return true;
                }
            }

            // reductions, oldest path entry first
            while cp.alts.red_pos < cp.alts.reductions.len() {
                let pidx = cp.alts.reductions[cp.alts.red_pos];
                cp.alts.red_pos += 1;
                let plit = cp.goal_path[pidx].clone();
                if unify_lits(&mut self.subst, &goal.complement(), &plit) {
                    self.trace.push(TraceEv::Reduction { path_index: pidx });
                    self.lemmas.push((goal.clone(), ClausalNode::Reduction { path_index: pidx }));
                    let next = cp.goals.clone();
                    if self.opts.cut {
                        self.cps.truncate(cp_height);
                    }
                    self.goals = next;
                    return true;
                }
            }

            // extensions in index (or guided) order
            let entries = self.index.lookup(&goal);
            while cp.alts.ext_pos < cp.alts.extensions.len() {
                let epos = cp.alts.extensions[cp.alts.ext_pos];
                cp.alts.ext_pos += 1;
                let entry = &entries[epos];
                let mark = self.subst.mark();
                let (lits, vars) = self.matrix.instantiate(entry.clause, &mut self.gen);
                if !unify_lits(&mut self.subst, &goal.complement(), &lits[entry.lit]) {
                    continue;
                }
                if cp.goal_rem == 0 {
                    // a branch was pruned by the path limit
                    self.subst.undo_to(mark);
                    self.depth_pruned = true;
                    continue;
                }
                if self.opts.regularity {
                    let violates = lits.iter().enumerate().filter(|(i, _)| *i != entry.lit).any(
                        |(_, l)| {
                            let rl = self.subst.resolve_lit(l);
                            cp.goal_path.iter().chain(std::iter::once(&goal)).any(|p| {
                                p.pred == rl.pred && self.subst.resolve_lit(p) == rl
                            })
                        },
                    );
                    if violates {
                        self.subst.undo_to(mark);
                        continue;
                    }
                }
                // apply
                self.trace.push(TraceEv::ExtBegin { clause: entry.clause, lit: entry.lit, vars });
                let ext_begin = self.trace.len() - 1;
                let depth = cp.goal_path.len() as u32;
                let mut subpath = Rc::new(PathList::Nil);
                for l in cp.goal_path.iter() {
                    // rebuild oldest-to-newest as a cons list (newest at head)
                    subpath = Rc::new(PathList::Cons {
                        lit: l.clone(),
                        depth: 0,
                        next: subpath,
                    });
                }
                // note: path_vec reverses, so re-reverse here by rebuilding
                let mut ordered = path_vec_rc(&cp.goal_path);
                ordered = Rc::new(PathList::Cons { lit: goal.clone(), depth: depth + 1, next: ordered });
                let _ = subpath;
                let mut goals = Rc::new(GoalList::Pop {
                    lit: goal.clone(),
                    cp_height,
                    ext_begin,
                    next: cp.goals.clone(),
                });
                let rem = cp.goal_rem - 1;
                for (i, lit) in lits.into_iter().enumerate().rev() {
                    if i == entry.lit {
                        continue;
                    }
                    goals = Rc::new(GoalList::Lit { lit, path: ordered.clone(), rem, next: goals });
                }
                if let Some(g) = self.guide.as_mut() {
                    g.push(&goal);
                }
                self.goals = goals;
                return true;
            }
            return false;
        }
    }
}

fn path_vec_rc(oldest_first: &[Lit]) -> Rc<PathList> {
    let mut out = Rc::new(PathList::Nil);
    for (i, l) in oldest_first.iter().enumerate() {
        out = Rc::new(PathList::Cons { lit: l.clone(), depth: i as u32 + 1, next: out });
    }
    out
}

// ---------------------------------------------------------------------------
// CPS backend
// ---------------------------------------------------------------------------

struct CpsCtx<'a> {
    matrix: &'a ClausalMatrix,
    index: &'a ContraIndex,
    opts: &'a SearchOpts,
    subst: Subst,
    gen: VarGen,
    trace: Vec<TraceEv>,
    lemmas: Vec<(Lit, ClausalNode)>,
    depth_pruned: bool,
    timed_out: bool,
    ticks: u32,
    solution: Option<ClausalProof>,
}

impl<'a> CpsCtx<'a> {
    fn check_deadline(&mut self) -> bool {
        self.ticks += 1;
        if self.ticks % 1024 == 0 {
            if let Some(d) = self.opts.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                    return true;
                }
            }
        }
        false
    }
}

type AltK<'c> = Box<dyn FnOnce(&mut CpsCtx<'c>) -> bool + 'c>;
type RemK<'c> = Rc<dyn Fn(&mut CpsCtx<'c>, AltK<'c>) -> bool + 'c>;

#[derive(Clone)]
struct CpsGoals {
    lits: Rc<Vec<Lit>>,
    pos: usize,
    path: Rc<Vec<Lit>>,
    rem: u32,
}

fn cps_prove<'c>(ctx: &mut CpsCtx<'c>, goals: CpsGoals, alt: AltK<'c>, rem: RemK<'c>) -> bool {
    if ctx.check_deadline() {
        return false;
    }
    if goals.pos >= goals.lits.len() {
        return rem(ctx, alt);
    }
    let lit = goals.lits[goals.pos].clone();
    let alts = compute_alternatives(&lit, &goals.path, ctx.index, ctx.opts, &ctx.subst, &ctx.lemmas, None);

    // lemma closure first when enabled
    if let Some(node) = alts.lemma {
        ctx.trace.push(TraceEv::Lemma { replay: node.clone() });
        ctx.lemmas.push((lit.clone(), ClausalNode::Lemma { replay: node }));
        let next = CpsGoals { pos: goals.pos + 1, ..goals };
        return cps_prove(ctx, next, alt, rem);
    }

    cps_reduce(ctx, goals, lit, alts.reductions, 0, alts.extensions, alt, rem)
}

#[allow(clippy::too_many_arguments)]
fn cps_reduce<'c>(
    ctx: &mut CpsCtx<'c>,
    goals: CpsGoals,
    lit: Lit,
    reductions: Vec<usize>,
    red_pos: usize,
    extensions: Vec<usize>,
    alt: AltK<'c>,
    rem: RemK<'c>,
) -> bool {
    if red_pos >= reductions.len() {
        return cps_extend(ctx, goals, lit, extensions, 0, alt, rem);
    }
    let pidx = reductions[red_pos];
    let plit = goals.path[pidx].clone();
    let mark = ctx.subst.mark();
    let trace_len = ctx.trace.len();
    let lemma_len = ctx.lemmas.len();
    if unify_lits(&mut ctx.subst, &lit.complement(), &plit) {
        ctx.trace.push(TraceEv::Reduction { path_index: pidx });
        ctx.lemmas.push((lit.clone(), ClausalNode::Reduction { path_index: pidx }));
        let next = CpsGoals { pos: goals.pos + 1, ..goals.clone() };
        let delivered: AltK<'c> = if ctx.opts.cut {
            alt
        } else {
            let g2 = goals.clone();
            let l2 = lit.clone();
            let r2 = reductions.clone();
            let e2 = extensions.clone();
            let rem2 = rem.clone();
            Box::new(move |ctx: &mut CpsCtx<'c>| {
                ctx.subst.undo_to(mark);
                ctx.trace.truncate(trace_len);
                ctx.lemmas.truncate(lemma_len);
                cps_reduce(ctx, g2, l2, r2, red_pos + 1, e2, alt, rem2)
            })
        };
        cps_prove(ctx, next, delivered, rem)
    } else {
        cps_reduce(ctx, goals, lit, reductions, red_pos + 1, extensions, alt, rem)
    }
}

#[allow(clippy::too_many_arguments)]
fn cps_extend<'c>(
    ctx: &mut CpsCtx<'c>,
    goals: CpsGoals,
    lit: Lit,
    extensions: Vec<usize>,
    ext_pos: usize,
    alt: AltK<'c>,
    rem: RemK<'c>,
) -> bool {
    if ext_pos >= extensions.len() {
        return alt(ctx);
    }
    let entries = ctx.index.lookup(&lit);
    let entry = entries[extensions[ext_pos]].clone();
    let mark = ctx.subst.mark();
    let trace_len = ctx.trace.len();
    let lemma_len = ctx.lemmas.len();
    let (lits, vars) = ctx.matrix.instantiate(entry.clause, &mut ctx.gen);

    let proceed = unify_lits(&mut ctx.subst, &lit.complement(), &lits[entry.lit]) && {
        if goals.rem == 0 {
            ctx.subst.undo_to(mark);
            ctx.depth_pruned = true;
            false
        } else if ctx.opts.regularity {
            let violates = lits.iter().enumerate().filter(|(i, _)| *i != entry.lit).any(|(_, l)| {
                let rl = ctx.subst.resolve_lit(l);
                goals.path.iter().chain(std::iter::once(&lit)).any(|p| {
                    p.pred == rl.pred && ctx.subst.resolve_lit(p) == rl
                })
            });
            if violates {
                ctx.subst.undo_to(mark);
                false
            } else {
                true
            }
        } else {
            true
        }
    };

    if !proceed {
        return cps_extend(ctx, goals, lit, extensions, ext_pos + 1, alt, rem);
    }

    ctx.trace.push(TraceEv::ExtBegin { clause: entry.clause, lit: entry.lit, vars });
    let ext_begin = ctx.trace.len() - 1;
    let sub_lits: Vec<Lit> = lits
        .into_iter()
        .enumerate()
        .filter(|(i, _)| *i != entry.lit)
        .map(|(_, l)| l)
        .collect();
    let mut sub_path = goals.path.as_ref().clone();
    sub_path.push(lit.clone());
    let sub_goals = CpsGoals {
        lits: Rc::new(sub_lits),
        pos: 0,
        path: Rc::new(sub_path),
        rem: goals.rem - 1,
    };

    // the alternative that tries the next contrapositive
    let alt_slot: Rc<std::cell::RefCell<Option<AltK<'c>>>> =
        Rc::new(std::cell::RefCell::new(Some(alt)));
    let alt1: AltK<'c> = {
        let g2 = goals.clone();
        let l2 = lit.clone();
        let e2 = extensions.clone();
        let rem2 = rem.clone();
        let slot = alt_slot.clone();
        Box::new(move |ctx: &mut CpsCtx<'c>| {
            ctx.subst.undo_to(mark);
            ctx.trace.truncate(trace_len);
            ctx.lemmas.truncate(lemma_len);
            let alt = slot.borrow_mut().take().expect("outer alternative available");
            cps_extend(ctx, g2, l2, e2, ext_pos + 1, alt, rem2)
        })
    };

    // what to do once the branch for `lit` is closed
    let rem1: RemK<'c> = {
        let goals = goals.clone();
        let lit = lit.clone();
        let rem = rem.clone();
        let cut = ctx.opts.cut;
        let slot = alt_slot;
        Rc::new(move |ctx: &mut CpsCtx<'c>, delivered: AltK<'c>| {
            ctx.trace.push(TraceEv::ExtEnd);
            let mut pos = ext_begin;
            let node = parse_node(&ctx.trace, &mut pos);
            ctx.lemmas.push((lit.clone(), node));
            let next = CpsGoals { pos: goals.pos + 1, ..goals.clone() };
            let alt_for_rest: AltK<'c> = if cut {
                match slot.borrow_mut().take() {
                    Some(outer) => outer,
                    // the outer alternative was already consumed: the
                    // remaining branches may only fail outright
                    None => Box::new(|_: &mut CpsCtx<'c>| false),
                }
            } else {
                delivered
            };
            cps_prove(ctx, next, alt_for_rest, rem.clone())
        })
    };

    cps_prove(ctx, sub_goals, alt1, rem1)
}

fn cps_level(
    matrix: &ClausalMatrix,
    index: &ContraIndex,
    opts: &SearchOpts,
    var_base: VarId,
    lim: u32,
) -> (Option<ClausalProof>, bool, bool, u64) {
    let mut ctx = CpsCtx {
        matrix,
        index,
        opts,
        subst: Subst::new(),
        gen: VarGen::starting_at(var_base),
        trace: Vec::new(),
        lemmas: Vec::new(),
        depth_pruned: false,
        timed_out: false,
        ticks: 0,
        solution: None,
    };
    let starts = StreamEngine::start_candidates(matrix, opts.conj);
    for ci in starts {
        ctx.trace.clear();
        ctx.lemmas.clear();
        let mark = ctx.subst.mark();
        let (lits, vars) = ctx.matrix.instantiate(ci, &mut ctx.gen);
        ctx.trace.push(TraceEv::Start { clause: ci, vars });
        let goals = CpsGoals {
            lits: Rc::new(lits),
            pos: 0,
            path: Rc::new(Vec::new()),
            rem: lim,
        };
        let alt: AltK = Box::new(|_| false);
        let rem: RemK = Rc::new(|ctx: &mut CpsCtx, _alt| {
            let sigma = ctx.subst.bound_vars().into_iter().collect();
            ctx.solution = Some(parse_trace(&ctx.trace, sigma));
            true
        });
        if cps_prove(&mut ctx, goals, alt, rem) {
            return (ctx.solution, ctx.depth_pruned, ctx.timed_out, ctx.subst.inferences);
        }
        if ctx.timed_out {
            break;
        }
        ctx.subst.undo_to(mark);
    }
    (None, ctx.depth_pruned, ctx.timed_out, ctx.subst.inferences)
}

// ---------------------------------------------------------------------------
// Iterative deepening driver
// ---------------------------------------------------------------------------

/// Prove with iterative deepening. Start clauses are conjecture clauses
/// when `opts.conj` (all clauses otherwise or when nothing is flagged);
/// returns the first proof found, `Exhausted` when some level completes
/// with no proof and no branch was pruned by the depth limit, `Timeout`
/// past the deadline, and `GaveUp` when `lim_max` is spent.
pub fn prove_clausal(
    matrix: &ClausalMatrix,
    index: &ContraIndex,
    opts: &SearchOpts,
    var_base: VarId,
) -> Outcome<ClausalProof> {
    prove_clausal_guided(matrix, index, opts, var_base, None)
}

/// [`prove_clausal`] with an optional guidance hook reordering extension
/// alternatives (stream backend only).
pub fn prove_clausal_guided(
    matrix: &ClausalMatrix,
    index: &ContraIndex,
    opts: &SearchOpts,
    var_base: VarId,
    guide: Option<GuideState<'_>>,
) -> Outcome<ClausalProof> {
    let mut stats = Stats::default();
    let mut guide = guide;
    for lim in opts.lim_start..=opts.lim_max {
        stats.depth = lim;
        match opts.backend {
            Backend::Stream => {
                let mut engine =
                    StreamEngine::new(matrix, index, opts, guide.take(), var_base, lim);
                let solution = engine.next_solution();
                stats.inferences += engine.subst.inferences;
                if let Some(p) = solution {
                    return Outcome::Proof(p, stats);
                }
                if engine.timed_out {
                    return Outcome::Timeout(stats);
                }
                if !engine.depth_pruned {
                    return Outcome::Exhausted(stats);
                }
                guide = engine.guide.take().map(|mut g| {
                    g.truncate(0);
                    g
                });
            }
            Backend::Cps => {
                let (solution, pruned, timed_out, inf) = cps_level(matrix, index, opts, var_base, lim);
                stats.inferences += inf;
                if let Some(p) = solution {
                    return Outcome::Proof(p, stats);
                }
                if timed_out {
                    return Outcome::Timeout(stats);
                }
                if !pruned {
                    return Outcome::Exhausted(stats);
                }
            }
        }
    }
    Outcome::GaveUp(stats)
}

/// Enumerate every solution at a fixed path limit (stream backend, no
/// deepening). Used by tests that check reachability of specific proofs.
pub fn solutions_at(
    matrix: &ClausalMatrix,
    index: &ContraIndex,
    opts: &SearchOpts,
    var_base: VarId,
    lim: u32,
    max: usize,
) -> Vec<ClausalProof> {
    let mut engine = StreamEngine::new(matrix, index, opts, None, var_base, lim);
    let mut out = Vec::new();
    while out.len() < max {
        match engine.next_solution() {
            Some(p) => out.push(p),
            None => break,
        }
    }
    out
}
