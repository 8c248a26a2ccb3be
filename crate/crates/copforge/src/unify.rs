//! Unification with occurs check over two interchangeable binding stores:
//! a flat variable-indexed array with an undo trail (the default for
//! backtracking search), and a persistent association list (used by Monte
//! Carlo proof search, which jumps between non-ancestral states).

use std::rc::Rc;

use crate::term::{Lit, Term, VarId};

// ---------------------------------------------------------------------------
// Trail-based store
// ---------------------------------------------------------------------------

/// Flat binding store: the n-th slot holds the term bound to variable n.
/// A trail of bound variables allows cheap backtracking.
#[derive(Debug, Default)]
pub struct Subst {
    bindings: Vec<Option<Term>>,
    trail: Vec<VarId>,
    /// Successful unifications performed in this search.
    pub inferences: u64,
}

/// Trail depth; undoing to a mark restores the store to its state when the
/// mark was taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mark(usize);

impl Subst {
    pub fn new() -> Subst {
        Subst::default()
    }

    pub fn lookup(&self, v: VarId) -> Option<&Term> {
        self.bindings.get(v as usize).and_then(|b| b.as_ref())
    }

    fn bind(&mut self, v: VarId, t: Term) {
        let idx = v as usize;
        if idx >= self.bindings.len() {
            self.bindings.resize(idx + 1, None);
        }
        debug_assert!(self.bindings[idx].is_none());
        self.bindings[idx] = Some(t);
        self.trail.push(v);
    }

    pub fn mark(&self) -> Mark {
        Mark(self.trail.len())
    }

    pub fn undo_to(&mut self, m: Mark) {
        debug_assert!(m.0 <= self.trail.len(), "stale mark");
        while self.trail.len() > m.0 {
            let v = self.trail.pop().unwrap();
            self.bindings[v as usize] = None;
        }
    }

    /// Follow variable bindings until an unbound variable or an
    /// application appears.
    fn walk<'a>(&'a self, t: &'a Term) -> &'a Term {
        let mut cur = t;
        while let Term::Var(v) = cur {
            match self.lookup(*v) {
                Some(next) => cur = next,
                None => break,
            }
        }
        cur
    }

    fn occurs(&self, v: VarId, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn unify_terms(&mut self, a: &Term, b: &Term) -> bool {
        let wa = self.walk(a).clone();
        let wb = self.walk(b).clone();
        match (wa, wb) {
            (Term::Var(v), Term::Var(w)) if v == w => true,
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if self.occurs(v, &t) {
                    false
                } else {
                    self.bind(v, t);
                    true
                }
            }
            (Term::App(f, fargs), Term::App(g, gargs)) => {
                f == g
                    && fargs.len() == gargs.len()
                    && fargs.iter().zip(gargs.iter()).all(|(x, y)| self.unify_terms(x, y))
            }
        }
    }

    /// Fully dereference a term under the current bindings.
    pub fn resolve(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Var(v) => Term::Var(*v),
            Term::App(s, args) => Term::App(*s, args.iter().map(|a| self.resolve(a)).collect()),
        }
    }

    pub fn resolve_lit(&self, l: &Lit) -> Lit {
        Lit { pred: l.pred, args: l.args.iter().map(|a| self.resolve(a)).collect() }
    }

    /// All currently bound variables with their fully dereferenced values.
    pub fn bound_vars(&self) -> Vec<(VarId, Term)> {
        self.trail
            .iter()
            .map(|&v| (v, self.resolve(&Term::Var(v))))
            .collect()
    }
}

/// Unify two literals with identical signed predicate symbols. On success
/// the bindings are extended (and the inference counter bumped); on failure
/// every binding added during the attempt is rolled back.
pub fn unify_lits(s: &mut Subst, a: &Lit, b: &Lit) -> bool {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return false;
    }
    let m = s.mark();
    for (x, y) in a.args.iter().zip(b.args.iter()) {
        if !s.unify_terms(x, y) {
            s.undo_to(m);
            return false;
        }
    }
    s.inferences += 1;
    true
}

// ---------------------------------------------------------------------------
// Persistent store
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct PNode {
    var: VarId,
    term: Term,
    next: Option<Rc<PNode>>,
}

/// Persistent association-list substitution. Cloning is O(1); lookups walk
/// the list. Adequate for the Monte Carlo search states it backs.
#[derive(Debug, Clone, Default)]
pub struct PersistentSubst {
    head: Option<Rc<PNode>>,
    pub inferences: u64,
}

impl PersistentSubst {
    pub fn new() -> PersistentSubst {
        PersistentSubst::default()
    }

    pub fn lookup(&self, v: VarId) -> Option<&Term> {
        let mut cur = self.head.as_ref();
        while let Some(node) = cur {
            if node.var == v {
                return Some(&node.term);
            }
            cur = node.next.as_ref();
        }
        None
    }

    fn bind(&mut self, v: VarId, t: Term) {
        self.head = Some(Rc::new(PNode { var: v, term: t, next: self.head.take() }));
    }

    fn walk<'a>(&'a self, t: &'a Term) -> &'a Term {
        let mut cur = t;
        while let Term::Var(v) = cur {
            match self.lookup(*v) {
                Some(next) => cur = next,
                None => break,
            }
        }
        cur
    }

    fn occurs(&self, v: VarId, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn unify_terms(&mut self, a: &Term, b: &Term) -> bool {
        let wa = self.walk(a).clone();
        let wb = self.walk(b).clone();
        match (wa, wb) {
            (Term::Var(v), Term::Var(w)) if v == w => true,
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if self.occurs(v, &t) {
                    false
                } else {
                    self.bind(v, t);
                    true
                }
            }
            (Term::App(f, fargs), Term::App(g, gargs)) => {
                f == g
                    && fargs.len() == gargs.len()
                    && fargs.iter().zip(gargs.iter()).all(|(x, y)| self.unify_terms(x, y))
            }
        }
    }

    pub fn resolve(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Var(v) => Term::Var(*v),
            Term::App(s, args) => Term::App(*s, args.iter().map(|a| self.resolve(a)).collect()),
        }
    }

    pub fn resolve_lit(&self, l: &Lit) -> Lit {
        Lit { pred: l.pred, args: l.args.iter().map(|a| self.resolve(a)).collect() }
    }
}

/// Persistent-store counterpart of [`unify_lits`]: returns the extended
/// substitution on success, `None` on failure (the input is untouched
/// either way).
pub fn punify_lits(s: &PersistentSubst, a: &Lit, b: &Lit) -> Option<PersistentSubst> {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return None;
    }
    let mut out = s.clone();
    for (x, y) in a.args.iter().zip(b.args.iter()) {
        if !out.unify_terms(x, y) {
            return None;
        }
    }
    out.inferences += 1;
    Some(out)
}

// ---------------------------------------------------------------------------
// Store abstraction for the generic search engine
// ---------------------------------------------------------------------------

/// Binding-store interface the search engines run against. The trail store
/// marks and undoes in place; the persistent store snapshots.
pub trait BindingStore {
    type Snapshot;
    fn snapshot(&self) -> Self::Snapshot;
    fn restore(&mut self, snap: &Self::Snapshot);
    fn unify(&mut self, a: &Lit, b: &Lit) -> bool;
    fn resolve(&self, t: &Term) -> Term;
    fn resolve_lit(&self, l: &Lit) -> Lit;
    fn inferences(&self) -> u64;
}

impl BindingStore for Subst {
    type Snapshot = Mark;

    fn snapshot(&self) -> Mark {
        self.mark()
    }

    fn restore(&mut self, snap: &Mark) {
        self.undo_to(*snap);
    }

    fn unify(&mut self, a: &Lit, b: &Lit) -> bool {
        unify_lits(self, a, b)
    }

    fn resolve(&self, t: &Term) -> Term {
        Subst::resolve(self, t)
    }

    fn resolve_lit(&self, l: &Lit) -> Lit {
        Subst::resolve_lit(self, l)
    }

    fn inferences(&self) -> u64 {
        self.inferences
    }
}

impl BindingStore for PersistentSubst {
    type Snapshot = PersistentSubst;

    fn snapshot(&self) -> PersistentSubst {
        self.clone()
    }

    fn restore(&mut self, snap: &PersistentSubst) {
        *self = snap.clone();
    }

    fn unify(&mut self, a: &Lit, b: &Lit) -> bool {
        match punify_lits(self, a, b) {
            Some(next) => {
                *self = next;
                true
            }
            None => false,
        }
    }

    fn resolve(&self, t: &Term) -> Term {
        PersistentSubst::resolve(self, t)
    }

    fn resolve_lit(&self, l: &Lit) -> Lit {
        PersistentSubst::resolve_lit(self, l)
    }

    fn inferences(&self) -> u64 {
        self.inferences
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(v: VarId) -> Term {
        Term::Var(v)
    }

    fn app(s: u32, args: Vec<Term>) -> Term {
        Term::App(s, args)
    }

    #[test]
    fn single_binding() {
        // P(x, f(a)) vs P(a, f(a)) → true with x↦a
        let mut s = Subst::new();
        let a = Lit::new(1, vec![var(0), app(2, vec![app(3, vec![])])]);
        let b = Lit::new(1, vec![app(3, vec![]), app(2, vec![app(3, vec![])])]);
        assert!(unify_lits(&mut s, &a, &b));
        assert_eq!(s.resolve(&var(0)), app(3, vec![]));
        assert_eq!(s.inferences, 1);
    }

    #[test]
    fn occurs_check_fails() {
        // P(x) vs P(f(x)) → false
        let mut s = Subst::new();
        let a = Lit::new(1, vec![var(0)]);
        let b = Lit::new(1, vec![app(2, vec![var(0)])]);
        assert!(!unify_lits(&mut s, &a, &b));
        assert!(s.lookup(0).is_none(), "rollback on failure");
        assert_eq!(s.inferences, 0);
    }

    #[test]
    fn failure_rolls_back_partial_bindings() {
        // P(x, b) vs P(a, c): first argument binds x, second clashes.
        let mut s = Subst::new();
        let a = Lit::new(1, vec![var(0), app(4, vec![])]);
        let b = Lit::new(1, vec![app(3, vec![]), app(5, vec![])]);
        assert!(!unify_lits(&mut s, &a, &b));
        assert!(s.lookup(0).is_none());
        assert_eq!(s.trail.len(), 0);
    }

    #[test]
    fn mark_undo_restores() {
        let mut s = Subst::new();
        let m = s.mark();
        assert!(unify_lits(&mut s, &Lit::new(1, vec![var(0)]), &Lit::new(1, vec![app(2, vec![])])));
        assert!(s.lookup(0).is_some());
        s.undo_to(m);
        assert!(s.lookup(0).is_none());
    }

    #[test]
    fn nested_marks_restore_lifo() {
        let mut s = Subst::new();
        let m1 = s.mark();
        assert!(unify_lits(&mut s, &Lit::new(1, vec![var(0)]), &Lit::new(1, vec![app(2, vec![])])));
        let m2 = s.mark();
        assert!(unify_lits(&mut s, &Lit::new(1, vec![var(1)]), &Lit::new(1, vec![app(3, vec![])])));
        s.undo_to(m2);
        assert!(s.lookup(0).is_some());
        assert!(s.lookup(1).is_none());
        s.undo_to(m1);
        assert!(s.lookup(0).is_none());
    }

    #[test]
    fn stores_agree_on_chained_bindings() {
        // x ↦ y, then y ↦ f(z), then unify g(x) with g(f(a))
        let mut s = Subst::new();
        let mut p = PersistentSubst::new();
        let steps: Vec<(Lit, Lit)> = vec![
            (Lit::new(1, vec![var(0)]), Lit::new(1, vec![var(1)])),
            (Lit::new(1, vec![var(1)]), Lit::new(1, vec![app(2, vec![var(3)])])),
            (
                Lit::new(1, vec![app(4, vec![var(0)])]),
                Lit::new(1, vec![app(4, vec![app(2, vec![app(5, vec![])])])]),
            ),
        ];
        for (a, b) in &steps {
            let ok1 = unify_lits(&mut s, a, b);
            let ok2 = match punify_lits(&p, a, b) {
                Some(next) => {
                    p = next;
                    true
                }
                None => false,
            };
            assert_eq!(ok1, ok2);
            assert!(ok1);
        }
        for v in 0..4 {
            assert_eq!(s.resolve(&var(v)), p.resolve(&var(v)));
        }
    }
}
