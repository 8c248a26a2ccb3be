//! Nonclausal matrices: nested clause/matrix trees with clause identities,
//! α-relatedness, β-clauses, extension-clause checks, and the
//! contrapositive index.
//!
//! Positions inside the tree are paths of indices alternating between
//! clause indices (within a matrix) and element indices (within a clause).
//! A full path starts at the matrix root with a clause index, so indices at
//! even offsets select clauses and indices at odd offsets select elements.

use std::collections::HashMap;

use crate::nnf::Nnf;
use crate::symtab::SymTable;
use crate::term::{Lit, SignedSym, VarGen, VarId};

pub type ClauseId = u32;

#[derive(Debug, Clone)]
pub struct NcClause {
    pub id: ClauseId,
    /// Universal variables attached to this clause (renamed on copying).
    pub vars: Vec<VarId>,
    pub elements: Vec<NcElem>,
    pub from_conjecture: bool,
    /// For copies, the clause this one was copied from.
    pub origin: Option<ClauseId>,
}

#[derive(Debug, Clone)]
pub enum NcElem {
    Lit(Lit),
    Mat(NcMatrix),
}

#[derive(Debug, Clone, Default)]
pub struct NcMatrix {
    pub clauses: Vec<NcClause>,
}

/// Hands out fresh clause identifiers during matrix building and clause
/// copying.
#[derive(Debug, Clone, Default)]
pub struct ClauseIdGen {
    next: ClauseId,
}

impl ClauseIdGen {
    pub fn fresh(&mut self) -> ClauseId {
        let id = self.next;
        self.next += 1;
        id
    }
}

// ---------------------------------------------------------------------------
// Building
// ---------------------------------------------------------------------------

/// Convert a skolemised NNF formula into the nonclausal matrix: ∨ nodes
/// become clauses, ∧ nodes become matrices, ∀-bound variables attach to the
/// enclosing clause, and literals keep formula order.
pub fn build_nc_matrix(f: &Nnf, syms: &SymTable, ids: &mut ClauseIdGen) -> NcMatrix {
    let parts: Vec<&Nnf> = match f {
        Nnf::And(ps) => ps.iter().collect(),
        other => vec![other],
    };
    let marker = syms.marker();
    NcMatrix { clauses: parts.into_iter().map(|p| build_clause(p, marker, ids)).collect() }
}

fn build_clause(f: &Nnf, marker: u32, ids: &mut ClauseIdGen) -> NcClause {
    let id = ids.fresh();
    let mut vars = Vec::new();
    let mut g = f;
    while let Nnf::Forall(v, body) = g {
        vars.push(*v);
        g = body;
    }
    let mut elements = Vec::new();
    build_elements(g, marker, ids, &mut vars, &mut elements);
    let from_conjecture = elements_contain_marker(&elements, marker);
    NcClause { id, vars, elements, from_conjecture, origin: None }
}

fn build_elements(
    f: &Nnf,
    marker: u32,
    ids: &mut ClauseIdGen,
    vars: &mut Vec<VarId>,
    out: &mut Vec<NcElem>,
) {
    match f {
        Nnf::Lit(l) => out.push(NcElem::Lit(l.clone())),
        Nnf::Or(ps) => {
            for p in ps {
                build_elements(p, marker, ids, vars, out);
            }
        }
        Nnf::Forall(v, body) => {
            // a quantifier under a disjunction attaches to the enclosing
            // clause; sound because the variable is fresh for its siblings
            vars.push(*v);
            build_elements(body, marker, ids, vars, out);
        }
        Nnf::And(ps) => {
            let clauses = ps.iter().map(|p| build_clause(p, marker, ids)).collect();
            out.push(NcElem::Mat(NcMatrix { clauses }));
        }
        Nnf::Exists(_, _) => unreachable!("matrix building runs on skolemised formulas"),
    }
}

fn elements_contain_marker(elements: &[NcElem], marker: u32) -> bool {
    elements.iter().any(|e| match e {
        NcElem::Lit(l) => l.root() == marker,
        NcElem::Mat(m) => m.clauses.iter().any(|c| elements_contain_marker(&c.elements, marker)),
    })
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

impl NcMatrix {
    pub fn render(&self, syms: &SymTable) -> String {
        let mut out = String::new();
        self.render_into(syms, &mut out);
        out
    }

    fn render_into(&self, syms: &SymTable, out: &mut String) {
        out.push('[');
        for c in &self.clauses {
            c.render_into(syms, out);
        }
        out.push(']');
    }
}

impl NcClause {
    pub fn render(&self, syms: &SymTable) -> String {
        let mut out = String::new();
        self.render_into(syms, &mut out);
        out
    }

    fn render_into(&self, syms: &SymTable, out: &mut String) {
        out.push('[');
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            match e {
                NcElem::Lit(l) => out.push_str(&Nnf::Lit(l.clone()).render(syms)),
                NcElem::Mat(m) => m.render_into(syms, out),
            }
        }
        out.push(']');
    }
}

// ---------------------------------------------------------------------------
// Copying
// ---------------------------------------------------------------------------

pub fn collect_clause_vars(c: &NcClause, out: &mut Vec<VarId>) {
    for v in &c.vars {
        if !out.contains(v) {
            out.push(*v);
        }
    }
    for e in &c.elements {
        match e {
            NcElem::Lit(l) => {
                let mut vs = Vec::new();
                l.collect_vars(&mut vs);
                for v in vs {
                    if !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            NcElem::Mat(m) => {
                for cc in &m.clauses {
                    collect_clause_vars(cc, out);
                }
            }
        }
    }
}

/// Copy a clause: all variables occurring in the clause are replaced by
/// fresh ones and every nested clause receives a fresh identity linked to
/// its original.
pub fn copy_clause(c: &NcClause, gen: &mut VarGen, ids: &mut ClauseIdGen) -> NcClause {
    let mut vars = Vec::new();
    collect_clause_vars(c, &mut vars);
    let map: HashMap<VarId, VarId> = vars.iter().map(|&v| (v, gen.fresh())).collect();
    rename_clause(c, &map, ids)
}

fn rename_clause(c: &NcClause, map: &HashMap<VarId, VarId>, ids: &mut ClauseIdGen) -> NcClause {
    NcClause {
        id: ids.fresh(),
        vars: c.vars.iter().map(|v| *map.get(v).unwrap_or(v)).collect(),
        elements: c
            .elements
            .iter()
            .map(|e| match e {
                NcElem::Lit(l) => NcElem::Lit(l.rename(map)),
                NcElem::Mat(m) => NcElem::Mat(NcMatrix {
                    clauses: m.clauses.iter().map(|cc| rename_clause(cc, map, ids)).collect(),
                }),
            })
            .collect(),
        from_conjecture: c.from_conjecture,
        origin: Some(c.id),
    }
}

// ---------------------------------------------------------------------------
// Matrix view with clause replacements
// ---------------------------------------------------------------------------

/// The current matrix during nonclausal search: the immutable base plus an
/// overlay of clause replacements `M[C₁∖C₂]`.
#[derive(Clone, Copy)]
pub struct MatrixView<'a> {
    pub base: &'a NcMatrix,
    pub overlay: &'a HashMap<ClauseId, NcClause>,
}

impl<'a> MatrixView<'a> {
    pub fn new(base: &'a NcMatrix, overlay: &'a HashMap<ClauseId, NcClause>) -> MatrixView<'a> {
        MatrixView { base, overlay }
    }

    /// Resolve a clause through the replacement chain.
    pub fn resolved(&self, c: &'a NcClause) -> &'a NcClause {
        let mut cur = c;
        while let Some(rep) = self.overlay.get(&cur.id) {
            cur = rep;
        }
        cur
    }

    /// Visit every clause of the current matrix in preorder, with its full
    /// position path.
    pub fn for_each_clause<F: FnMut(&'a NcClause, &[usize])>(&self, f: &mut F) {
        let mut path = Vec::new();
        for (ci, c) in self.base.clauses.iter().enumerate() {
            path.push(ci);
            self.visit_clause(self.resolved(c), &mut path, f);
            path.pop();
        }
    }

    fn visit_clause<F: FnMut(&'a NcClause, &[usize])>(
        &self,
        c: &'a NcClause,
        path: &mut Vec<usize>,
        f: &mut F,
    ) {
        f(c, path);
        for (ei, e) in c.elements.iter().enumerate() {
            if let NcElem::Mat(m) = e {
                path.push(ei);
                for (ci, cc) in m.clauses.iter().enumerate() {
                    path.push(ci);
                    self.visit_clause(self.resolved(cc), path, f);
                    path.pop();
                }
                path.pop();
            }
        }
    }

    /// Visit every literal occurrence with its full position path.
    pub fn for_each_literal<F: FnMut(&'a Lit, &[usize])>(&self, f: &mut F) {
        self.for_each_clause(&mut |c, cpath| {
            for (ei, e) in c.elements.iter().enumerate() {
                if let NcElem::Lit(l) = e {
                    let mut lpath = cpath.to_vec();
                    lpath.push(ei);
                    f(l, &lpath);
                }
            }
        });
    }

    /// Find a clause by id, returning it with its position path.
    pub fn find_clause(&self, id: ClauseId) -> Option<(&'a NcClause, Vec<usize>)> {
        let mut found = None;
        self.for_each_clause(&mut |c, path| {
            if c.id == id && found.is_none() {
                found = Some((c, path.to_vec()));
            }
        });
        found
    }

    /// All positions at which `lit` occurs syntactically.
    pub fn occurrences_of(&self, lit: &Lit) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each_literal(&mut |l, path| {
            if l == lit {
                out.push(path.to_vec());
            }
        });
        out
    }
}

/// Two positions are α-related exactly when their paths diverge at a clause
/// index, i.e. they first part ways by choosing different clauses of a
/// common matrix. Offsets at even depth select clauses.
pub fn alpha_related_paths(cpath: &[usize], lpath: &[usize]) -> bool {
    let mut i = 0;
    while i < cpath.len() && i < lpath.len() {
        if cpath[i] != lpath[i] {
            return i % 2 == 0;
        }
        i += 1;
    }
    false // one is an ancestor of the other
}

/// Extension-clause check: `C` is an e-clause of the matrix with respect to
/// `path` iff (a) it contains a `path` literal, or (b) it is α-related to
/// all `path` literals occurring in the matrix and its parent clause, if
/// any, contains a `path` literal.
pub fn is_extension_clause(view: MatrixView<'_>, clause_id: ClauseId, path: &[Lit]) -> bool {
    let (clause, cpath) = match view.find_clause(clause_id) {
        Some(hit) => hit,
        None => return false,
    };
    // case (a): the clause contains a literal of the path
    if clause_contains_path_lit(view, clause, path) {
        return true;
    }
    // case (b)
    for p in path {
        for occ in view.occurrences_of(p) {
            if !alpha_related_paths(&cpath, &occ) {
                return false;
            }
        }
    }
    if cpath.len() > 1 {
        // parent clause is two levels up (matrix, then clause)
        let parent_path = &cpath[..cpath.len() - 2];
        let mut parent = None;
        view.for_each_clause(&mut |c, p| {
            if p == parent_path && parent.is_none() {
                parent = Some(c);
            }
        });
        match parent {
            Some(pc) => clause_contains_path_lit(view, pc, path),
            None => false,
        }
    } else {
        true
    }
}

fn clause_contains_path_lit(view: MatrixView<'_>, c: &NcClause, path: &[Lit]) -> bool {
    for e in &c.elements {
        match e {
            NcElem::Lit(l) => {
                if path.contains(l) {
                    return true;
                }
            }
            NcElem::Mat(m) => {
                for cc in &m.clauses {
                    if clause_contains_path_lit(view, view.resolved(cc), path) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// β-clauses
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaOrder {
    /// Source order `<`.
    Plain,
    /// `<_L`: the element containing the connected literal first.
    Lifted,
}

/// The β-clause of a clause with respect to one of its literal positions:
/// the literal and all clauses α-related to it are removed. The nested
/// spine structure is kept explicit so search and translation can follow
/// it.
#[derive(Debug, Clone)]
pub struct BetaClause {
    /// Identity of the (copied) clause this level prunes.
    pub resident_id: ClauseId,
    pub elements: Vec<BetaElem>,
}

#[derive(Debug, Clone)]
pub enum BetaElem {
    Lit(Lit),
    /// A full resident sub-matrix (subject to ordinary decomposition).
    Full(NcMatrix),
    /// The pruned continuation towards the removed literal: a matrix
    /// containing exactly the next β-clause, together with the index the
    /// continuation clause has in its resident matrix.
    Spine(usize, Box<BetaClause>),
}

impl BetaClause {
    /// Structural rendering of the β-clause as an ordinary clause, used by
    /// tests and the matrix dump.
    pub fn to_clause(&self) -> NcClause {
        NcClause {
            id: self.resident_id,
            vars: Vec::new(),
            elements: self
                .elements
                .iter()
                .map(|e| match e {
                    BetaElem::Lit(l) => NcElem::Lit(l.clone()),
                    BetaElem::Full(m) => NcElem::Mat(m.clone()),
                    BetaElem::Spine(_, inner) => {
                        NcElem::Mat(NcMatrix { clauses: vec![inner.to_clause()] })
                    }
                })
                .collect(),
            from_conjecture: false,
            origin: None,
        }
    }
}

/// Compute the β-clause of `clause` with respect to the literal at
/// `lit_path` (a clause-relative path: element index, then alternating
/// clause/element indices).
pub fn beta_clause(clause: &NcClause, lit_path: &[usize], order: BetaOrder) -> BetaClause {
    assert!(lit_path.len() % 2 == 1, "literal paths end on an element");
    let elem_idx = lit_path[0];
    let mut elements = Vec::new();
    let mut spine_slot = None;
    for (ei, e) in clause.elements.iter().enumerate() {
        if ei == elem_idx {
            if lit_path.len() == 1 {
                // the removed literal itself
                debug_assert!(matches!(e, NcElem::Lit(_)));
                continue;
            }
            let m = match e {
                NcElem::Mat(m) => m,
                NcElem::Lit(_) => unreachable!("path descends through a matrix"),
            };
            let clause_idx = lit_path[1];
            // all sibling clauses are α-related to the literal: deleted
            let inner = beta_clause(&m.clauses[clause_idx], &lit_path[2..], order);
            spine_slot = Some(elements.len());
            elements.push(BetaElem::Spine(clause_idx, Box::new(inner)));
        } else {
            elements.push(match e {
                NcElem::Lit(l) => BetaElem::Lit(l.clone()),
                NcElem::Mat(m) => BetaElem::Full(m.clone()),
            });
        }
    }
    if order == BetaOrder::Lifted {
        if let Some(idx) = spine_slot {
            let spine = elements.remove(idx);
            elements.insert(0, spine);
        }
    }
    BetaClause { resident_id: clause.id, elements }
}

// ---------------------------------------------------------------------------
// Contrapositive index
// ---------------------------------------------------------------------------

/// Nonclausal contrapositive entry: the literal occurrence, its innermost
/// enclosing clause, its position, and the pruned-matrix template (a copy
/// of the matrix with all clauses α-related to the literal deleted).
#[derive(Debug, Clone)]
pub struct NcContra {
    pub clause: ClauseId,
    pub lit_path: Vec<usize>,
    pub lit: Lit,
    pub template: NcMatrix,
}

/// Index from signed root symbols to contrapositive entries over the input
/// matrix.
#[derive(Debug, Clone, Default)]
pub struct NcContraIndex {
    map: HashMap<SignedSym, Vec<NcContra>>,
}

impl NcContraIndex {
    pub fn build(m: &NcMatrix) -> NcContraIndex {
        let empty = HashMap::new();
        let view = MatrixView::new(m, &empty);
        let mut map: HashMap<SignedSym, Vec<NcContra>> = HashMap::new();
        view.for_each_literal(&mut |l, path| {
            let clause_path = &path[..path.len() - 1];
            let mut clause_id = None;
            view.for_each_clause(&mut |c, p| {
                if p == clause_path && clause_id.is_none() {
                    clause_id = Some(c.id);
                }
            });
            let template = prune_matrix(m, path);
            map.entry(l.pred).or_default().push(NcContra {
                clause: clause_id.expect("literal has an enclosing clause"),
                lit_path: path.to_vec(),
                lit: l.clone(),
                template,
            });
        });
        NcContraIndex { map }
    }

    /// Entries whose stored literal has opposite sign and the same root
    /// symbol as the goal.
    pub fn lookup(&self, goal: &Lit) -> &[NcContra] {
        self.map.get(&-goal.pred).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// Copy of the matrix with all clauses α-related to the literal at `lpath`
/// deleted: exactly the spine from the top down to the literal's clause.
fn prune_matrix(m: &NcMatrix, lpath: &[usize]) -> NcMatrix {
    let empty = HashMap::new();
    let view = MatrixView::new(m, &empty);
    let mut keep: Vec<Vec<usize>> = Vec::new();
    view.for_each_clause(&mut |_, cpath| {
        if !alpha_related_paths(cpath, lpath) {
            keep.push(cpath.to_vec());
        }
    });
    prune_rec(m, &[], &keep)
}

fn prune_rec(m: &NcMatrix, prefix: &[usize], keep: &[Vec<usize>]) -> NcMatrix {
    let mut clauses = Vec::new();
    for (ci, c) in m.clauses.iter().enumerate() {
        let mut cpath = prefix.to_vec();
        cpath.push(ci);
        if !keep.iter().any(|k| k == &cpath) {
            continue;
        }
        let elements = c
            .elements
            .iter()
            .enumerate()
            .map(|(ei, e)| match e {
                NcElem::Lit(l) => NcElem::Lit(l.clone()),
                NcElem::Mat(inner) => {
                    let mut epath = cpath.clone();
                    epath.push(ei);
                    NcElem::Mat(prune_rec(inner, &epath, keep))
                }
            })
            .collect();
        clauses.push(NcClause { elements, ..c.clone() });
    }
    NcMatrix { clauses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::{pipeline, Normal, PreprocOpts};
    use crate::tptp::parse_problem;

    pub fn nc_matrix_of(src: &str) -> (NcMatrix, SymTable, VarGen, ClauseIdGen) {
        let p = parse_problem(src, &[]).unwrap();
        let pre = pipeline(&p, PreprocOpts::default());
        match pre.normal {
            Normal::Formula(ref nnf) => {
                let mut ids = ClauseIdGen::default();
                let m = build_nc_matrix(nnf, &pre.syms, &mut ids);
                (m, pre.syms, pre.gen, ids)
            }
            ref other => panic!("degenerate: {:?}", other),
        }
    }

    const EXAMPLE: &str = "fof(f, axiom, q & p(a) & ![X]: (~p(X) | (~p(s(s(X))) & (p(s(X)) | ~q)))).\n\
                           fof(goal, conjecture, $false).";

    #[test]
    fn worked_example_nonclausal_matrix() {
        let (m, syms, _, _) = nc_matrix_of(EXAMPLE);
        // [[q][p(a)][¬p(x) [[¬p(s²x)][p(sx) ¬q]]]]
        assert_eq!(m.clauses.len(), 3, "matrix: {}", m.render(&syms));
        assert_eq!(m.clauses[0].elements.len(), 1);
        assert_eq!(m.clauses[1].elements.len(), 1);
        let c3 = &m.clauses[2];
        assert_eq!(c3.elements.len(), 2);
        assert_eq!(c3.vars.len(), 1);
        match &c3.elements[1] {
            NcElem::Mat(inner) => {
                assert_eq!(inner.clauses.len(), 2);
                assert_eq!(inner.clauses[0].elements.len(), 1); // [¬p(s²x)]
                assert_eq!(inner.clauses[1].elements.len(), 2); // [p(sx) ¬q]
            }
            other => panic!("expected nested matrix, got {:?}", other),
        }
    }

    #[test]
    fn simple_shapes() {
        // p ∧ q → [[p][q]]
        let (m, _, _, _) = nc_matrix_of("fof(f, axiom, p & q). fof(g, conjecture, $false).");
        assert_eq!(m.clauses.len(), 2);
        // p ∨ (q ∧ r) → [[p [[q][r]]]]
        let (m, _, _, _) = nc_matrix_of("fof(f, axiom, p | (q & r)). fof(g, conjecture, $false).");
        assert_eq!(m.clauses.len(), 1);
        assert_eq!(m.clauses[0].elements.len(), 2);
        assert!(matches!(m.clauses[0].elements[0], NcElem::Lit(_)));
        assert!(matches!(m.clauses[0].elements[1], NcElem::Mat(_)));
    }

    #[test]
    fn copy_renames_everything() {
        let (m, _, mut gen, mut ids) = nc_matrix_of(EXAMPLE);
        let c3 = &m.clauses[2];
        let copy = copy_clause(c3, &mut gen, &mut ids);
        assert_ne!(copy.id, c3.id);
        assert_eq!(copy.origin, Some(c3.id));
        let mut orig_vars = Vec::new();
        collect_clause_vars(c3, &mut orig_vars);
        let mut copy_vars = Vec::new();
        collect_clause_vars(&copy, &mut copy_vars);
        assert!(orig_vars.iter().all(|v| !copy_vars.contains(v)));
        // nested clause ids are fresh too
        match (&c3.elements[1], &copy.elements[1]) {
            (NcElem::Mat(a), NcElem::Mat(b)) => {
                assert_ne!(a.clauses[0].id, b.clauses[0].id);
                assert_eq!(b.clauses[0].origin, Some(a.clauses[0].id));
            }
            _ => panic!(),
        }
    }

    #[test]
    fn beta_clause_flat_degenerate() {
        // flat clause {L1, L} wrt L → {L1}
        let (m, _, _, _) = nc_matrix_of("fof(f, axiom, (p | k)). fof(g, conjecture, $false).");
        let c = &m.clauses[0];
        let beta = beta_clause(c, &[1], BetaOrder::Plain);
        assert_eq!(beta.elements.len(), 1);
        let first = match &c.elements[0] {
            NcElem::Lit(l) => l,
            _ => panic!(),
        };
        assert!(matches!(&beta.elements[0], BetaElem::Lit(l) if l == first));
    }

    #[test]
    fn beta_clause_prunes_alpha_related() {
        let (m, _, _, _) = nc_matrix_of(EXAMPLE);
        let c3 = &m.clauses[2];
        // the ¬q literal is at [1 (matrix), 1 (clause [p(sx) ¬q]), 1 (elem ¬q)]
        let beta = beta_clause(c3, &[1, 1, 1], BetaOrder::Plain);
        assert_eq!(beta.elements.len(), 2);
        assert!(matches!(beta.elements[0], BetaElem::Lit(_))); // ¬p(x)
        match &beta.elements[1] {
            BetaElem::Spine(idx, inner) => {
                assert_eq!(*idx, 1);
                // inner β is [p(sx)]: ¬q removed, [¬p(s²x)] α-related removed
                assert_eq!(inner.elements.len(), 1);
                assert!(matches!(inner.elements[0], BetaElem::Lit(_)));
            }
            other => panic!("expected spine, got {:?}", other),
        }
        // lifted order puts the spine first
        let lifted = beta_clause(c3, &[1, 1, 1], BetaOrder::Lifted);
        assert!(matches!(lifted.elements[0], BetaElem::Spine(_, _)));
        assert!(matches!(lifted.elements[1], BetaElem::Lit(_)));
    }

    #[test]
    fn lifted_equals_plain_for_toplevel_literal() {
        let (m, syms, _, _) = nc_matrix_of(EXAMPLE);
        let c3 = &m.clauses[2];
        // ¬p(x) is the top-level element 0
        let plain = beta_clause(c3, &[0], BetaOrder::Plain);
        let lifted = beta_clause(c3, &[0], BetaOrder::Lifted);
        assert_eq!(plain.to_clause().render(&syms), lifted.to_clause().render(&syms));
    }

    #[test]
    fn extension_clause_cases() {
        let (m, _, _, _) = nc_matrix_of(EXAMPLE);
        let empty = HashMap::new();
        let view = MatrixView::new(&m, &empty);
        let c3 = &m.clauses[2];
        // top-level clause, empty path → true (case b vacuously)
        assert!(is_extension_clause(view, c3.id, &[]));
        // the inner clause [p(sx) ¬q]: parent c3 contains no literal of {q}
        let inner_id = match &c3.elements[1] {
            NcElem::Mat(mm) => mm.clauses[1].id,
            _ => panic!(),
        };
        let q_lit = match &m.clauses[0].elements[0] {
            NcElem::Lit(l) => l.clone(),
            _ => panic!(),
        };
        assert!(!is_extension_clause(view, inner_id, &[q_lit.clone()]));
        // c3 itself is α-related to q and has no parent → e-clause
        assert!(is_extension_clause(view, c3.id, &[q_lit]));
    }

    /// After placing a copy of the third clause in the matrix, the copy
    /// contains the path literal p(s(x')) and is therefore an e-clause by
    /// case (a) — the situation of the worked example's second extension.
    #[test]
    fn extension_clause_case_a_through_copy() {
        let (m, _, mut gen, mut ids) = nc_matrix_of(EXAMPLE);
        let c3 = &m.clauses[2];
        let copy = copy_clause(c3, &mut gen, &mut ids);
        // path literals: q and the copy's own p(s(x'))
        let q_lit = match &m.clauses[0].elements[0] {
            NcElem::Lit(l) => l.clone(),
            _ => panic!(),
        };
        let psx = match &copy.elements[1] {
            NcElem::Mat(mm) => match &mm.clauses[1].elements[0] {
                NcElem::Lit(l) => l.clone(),
                _ => panic!(),
            },
            _ => panic!(),
        };
        let mut overlay = HashMap::new();
        overlay.insert(c3.id, copy.clone());
        let view = MatrixView::new(&m, &overlay);
        assert!(is_extension_clause(view, copy.id, &[q_lit, psx]));
    }

    #[test]
    fn contra_index_has_pruned_templates() {
        let (m, syms, _, _) = nc_matrix_of(EXAMPLE);
        let idx = NcContraIndex::build(&m);
        // looking up the complement root of ¬q finds the entry for ¬q
        let q_lit = match &m.clauses[0].elements[0] {
            NcElem::Lit(l) => l.clone(),
            _ => panic!(),
        };
        let entries = idx.lookup(&q_lit);
        assert_eq!(entries.len(), 1);
        let entry = &entries[0];
        assert!(!entry.lit.is_positive());
        // template is the spine: [q] and [p(a)] deleted (α-related), and
        // inside the third clause the [¬p(s²x)] sibling deleted
        assert_eq!(entry.template.clauses.len(), 1, "template: {}", entry.template.render(&syms));
        let spine_top = &entry.template.clauses[0];
        match &spine_top.elements[1] {
            NcElem::Mat(mm) => assert_eq!(mm.clauses.len(), 1),
            other => panic!("expected matrix, got {:?}", other),
        }
    }

    #[test]
    fn alpha_related_parity() {
        // diverge at a clause offset (even) → α-related
        assert!(alpha_related_paths(&[2, 1, 0], &[2, 1, 1, 1]));
        // diverge at an element offset (odd) → not α-related
        assert!(!alpha_related_paths(&[2, 0], &[2, 1, 1, 1]));
        // ancestor → not α-related
        assert!(!alpha_related_paths(&[2], &[2, 1, 1, 1]));
        // top-level siblings
        assert!(alpha_related_paths(&[0], &[2, 1, 1, 1]));
    }
}
