//! Clausal matrices: clausification (standard and definitional), clause
//! instantiation, and the contrapositive index keyed by signed root symbol.

use std::collections::HashMap;

use crate::nnf::Nnf;
use crate::symtab::SymTable;
use crate::term::{Lit, SignedSym, Term, VarGen, VarId};

/// Prefix of predicate names introduced by the definitional transformation.
pub const DEF_PREFIX: &str = "def:";

#[derive(Debug, Clone)]
pub struct Clause {
    pub lits: Vec<Lit>,
    /// Clause-local variables in first-occurrence order; every variable in
    /// a clause is implicitly universally quantified and local to it.
    pub vars: Vec<VarId>,
    /// Contains the # marker or descends from the conjecture.
    pub from_conjecture: bool,
}

#[derive(Debug, Clone, Default)]
pub struct ClausalMatrix {
    pub clauses: Vec<Clause>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClausifyMode {
    Standard,
    Definitional,
}

impl ClausalMatrix {
    /// Instantiate clause `ci` with fresh variables. Returns the renamed
    /// literals and the fresh variables in `vars` order.
    pub fn instantiate(&self, ci: usize, gen: &mut VarGen) -> (Vec<Lit>, Vec<VarId>) {
        let clause = &self.clauses[ci];
        let mut map = HashMap::new();
        let mut fresh = Vec::with_capacity(clause.vars.len());
        for &v in &clause.vars {
            let f = gen.fresh();
            map.insert(v, f);
            fresh.push(f);
        }
        (clause.lits.iter().map(|l| l.rename(&map)).collect(), fresh)
    }

    /// Bracket notation dump, e.g. `[[q][p(a)][~p(X0),p(s(X0)),~q]]`.
    pub fn render(&self, syms: &SymTable) -> String {
        let mut out = String::from("[");
        for c in &self.clauses {
            out.push('[');
            for (i, l) in c.lits.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Nnf::Lit(l.clone()).render(syms));
            }
            out.push(']');
        }
        out.push(']');
        out
    }
}

fn clause_vars(lits: &[Lit]) -> Vec<VarId> {
    let mut vars = Vec::new();
    for l in lits {
        l.collect_vars(&mut vars);
    }
    vars
}

/// Clausify a skolemised NNF formula.
///
/// Standard mode distributes disjunctions over conjunctions until fixpoint.
/// Definitional mode introduces fresh predicate symbols for conjunctive
/// subformulas under disjunctions; the new names are derived from a
/// normalised string rendering of the defined subformula so they are
/// consistent across problems.
pub fn clausify(
    f: &Nnf,
    mode: ClausifyMode,
    syms: &mut SymTable,
    gen: &mut VarGen,
) -> ClausalMatrix {
    let raw = match mode {
        ClausifyMode::Standard => cnf_standard(f),
        ClausifyMode::Definitional => {
            let mut out = Vec::new();
            cnf_definitional(f, syms, &mut out);
            out
        }
    };
    let marker = syms.marker();
    let mut clauses: Vec<Clause> = raw
        .into_iter()
        .map(|lits| {
            let from_conjecture = lits.iter().any(|l| l.root() == marker);
            let vars = clause_vars(&lits);
            Clause { lits, vars, from_conjecture }
        })
        .collect();

    // Definitional clauses descend from the conjecture when the predicate
    // they define occurs in a conjecture clause; propagate to fixpoint.
    if mode == ClausifyMode::Definitional {
        loop {
            let flagged_defs: Vec<SignedSym> = clauses
                .iter()
                .filter(|c| c.from_conjecture)
                .flat_map(|c| c.lits.iter())
                .filter(|l| syms.name(l.root()).starts_with(DEF_PREFIX))
                .map(|l| l.pred.abs())
                .collect();
            let mut changed = false;
            for c in clauses.iter_mut() {
                if !c.from_conjecture
                    && c.lits.iter().any(|l| flagged_defs.contains(&l.pred.abs()))
                {
                    c.from_conjecture = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    // Rename variables apart per clause so each clause owns its variables.
    for c in clauses.iter_mut() {
        let mut map = HashMap::new();
        let mut fresh_vars = Vec::with_capacity(c.vars.len());
        for &v in &c.vars {
            let fv = gen.fresh();
            map.insert(v, fv);
            fresh_vars.push(fv);
        }
        c.lits = c.lits.iter().map(|l| l.rename(&map)).collect();
        c.vars = fresh_vars;
    }

    ClausalMatrix { clauses }
}

fn cnf_standard(f: &Nnf) -> Vec<Vec<Lit>> {
    match f {
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::And(ps) => ps.iter().flat_map(cnf_standard).collect(),
        Nnf::Or(ps) => {
            let mut acc: Vec<Vec<Lit>> = vec![Vec::new()];
            for p in ps {
                let cs = cnf_standard(p);
                let mut next = Vec::with_capacity(acc.len() * cs.len());
                for a in &acc {
                    for c in &cs {
                        let mut merged = a.clone();
                        merged.extend(c.iter().cloned());
                        next.push(merged);
                    }
                }
                acc = next;
            }
            acc
        }
        Nnf::Forall(_, body) => cnf_standard(body),
        Nnf::Exists(_, _) => unreachable!("clausify runs on skolemised formulas"),
    }
}

fn cnf_definitional(f: &Nnf, syms: &mut SymTable, out: &mut Vec<Vec<Lit>>) {
    match f {
        Nnf::Lit(l) => out.push(vec![l.clone()]),
        Nnf::And(ps) => {
            for p in ps {
                cnf_definitional(p, syms, out);
            }
        }
        Nnf::Forall(_, body) => cnf_definitional(body, syms, out),
        Nnf::Or(_) => {
            let mut defs = Vec::new();
            let clause = definitional_clause(f, syms, &mut defs);
            out.push(clause);
            out.extend(defs);
        }
        Nnf::Exists(_, _) => unreachable!("clausify runs on skolemised formulas"),
    }
}

/// Build one clause for a disjunction, replacing conjunctive elements by
/// fresh definitional literals and collecting their defining clauses.
fn definitional_clause(f: &Nnf, syms: &mut SymTable, defs: &mut Vec<Vec<Lit>>) -> Vec<Lit> {
    let parts: Vec<&Nnf> = match f {
        Nnf::Or(ps) => ps.iter().collect(),
        other => vec![other],
    };
    let mut clause = Vec::new();
    for p in parts {
        match strip_foralls(p) {
            Nnf::Lit(l) => clause.push(l.clone()),
            complex => {
                let d = define(complex, syms, defs);
                clause.push(d);
            }
        }
    }
    clause
}

fn strip_foralls(f: &Nnf) -> &Nnf {
    match f {
        Nnf::Forall(_, body) => strip_foralls(body),
        other => other,
    }
}

/// Introduce a definitional predicate `d(x̄) → f` for a conjunctive
/// subformula and emit its defining clauses.
fn define(f: &Nnf, syms: &mut SymTable, defs: &mut Vec<Vec<Lit>>) -> Lit {
    let sorted = canonical_sorted(f, syms);
    let (alpha, free_in_canonical_order) = sorted.alpha_key(syms);
    let key = format!("{}{}", DEF_PREFIX, alpha);
    let sym = syms.intern(&key, free_in_canonical_order.len());
    let args: Vec<Term> = free_in_canonical_order.iter().map(|v| Term::Var(*v)).collect();
    let dlit = Lit::new(sym as SignedSym, args);

    // d → f: every clause of f's CNF, prefixed with ¬d.
    let parts: Vec<&Nnf> = match f {
        Nnf::And(ps) => ps.iter().collect(),
        other => vec![other],
    };
    for part in parts {
        match strip_foralls(part) {
            Nnf::Lit(l) => defs.push(vec![dlit.complement(), l.clone()]),
            Nnf::Or(_) | Nnf::And(_) => {
                let mut inner_defs = Vec::new();
                let mut clause = vec![dlit.complement()];
                match strip_foralls(part) {
                    Nnf::And(_) => {
                        // nested conjunction directly: define it as well
                        let d2 = define(strip_foralls(part), syms, &mut inner_defs);
                        clause.push(d2);
                    }
                    or => clause.extend(definitional_clause(or, syms, &mut inner_defs)),
                }
                defs.push(clause);
                defs.extend(inner_defs);
            }
            Nnf::Forall(_, _) | Nnf::Exists(_, _) => unreachable!(),
        }
    }
    dlit
}

/// Canonical form used for definitional names: children of ∧/∨ sorted by
/// their α-strings, recursively. Only the name derivation uses this; the
/// emitted clauses keep source order.
fn canonical_sorted(f: &Nnf, syms: &SymTable) -> Nnf {
    match f {
        Nnf::Lit(_) => f.clone(),
        Nnf::And(ps) => {
            let mut sorted: Vec<Nnf> = ps.iter().map(|p| canonical_sorted(p, syms)).collect();
            sorted.sort_by_cached_key(|p| p.alpha_string(syms));
            Nnf::And(sorted)
        }
        Nnf::Or(ps) => {
            let mut sorted: Vec<Nnf> = ps.iter().map(|p| canonical_sorted(p, syms)).collect();
            sorted.sort_by_cached_key(|p| p.alpha_string(syms));
            Nnf::Or(sorted)
        }
        Nnf::Forall(v, body) => Nnf::forall(*v, canonical_sorted(body, syms)),
        Nnf::Exists(v, body) => Nnf::exists(*v, canonical_sorted(body, syms)),
    }
}

// ---------------------------------------------------------------------------
// Contrapositive index
// ---------------------------------------------------------------------------

/// One clausal contrapositive: clause `clause`, literal position `lit`, and
/// the remaining literals in clause order.
#[derive(Debug, Clone)]
pub struct ClausalContra {
    pub clause: usize,
    pub lit: usize,
    pub remainder: Vec<Lit>,
}

/// Hash table from the signed root symbol of the stored literal to its
/// contrapositive entries, in (clause order, literal order).
#[derive(Debug, Clone, Default)]
pub struct ContraIndex {
    map: HashMap<SignedSym, Vec<ClausalContra>>,
}

impl ContraIndex {
    pub fn build(m: &ClausalMatrix) -> ContraIndex {
        let mut map: HashMap<SignedSym, Vec<ClausalContra>> = HashMap::new();
        for (ci, c) in m.clauses.iter().enumerate() {
            for (li, l) in c.lits.iter().enumerate() {
                let remainder: Vec<Lit> = c
                    .lits
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != li)
                    .map(|(_, x)| x.clone())
                    .collect();
                map.entry(l.pred).or_default().push(ClausalContra { clause: ci, lit: li, remainder });
            }
        }
        ContraIndex { map }
    }

    /// Extension candidates for a goal literal: entries whose stored
    /// literal has opposite sign and the same root symbol.
    pub fn lookup(&self, goal: &Lit) -> &[ClausalContra] {
        self.map.get(&-goal.pred).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::{pipeline, Normal, PreprocOpts};
    use crate::tptp::parse_problem;

    fn matrix_of(src: &str, mode: ClausifyMode) -> (ClausalMatrix, SymTable) {
        let p = parse_problem(src, &[]).unwrap();
        let mut pre = pipeline(&p, PreprocOpts::default());
        match pre.normal {
            Normal::Formula(ref nnf) => {
                let m = clausify(nnf, mode, &mut pre.syms, &mut pre.gen);
                (m, pre.syms)
            }
            ref other => panic!("degenerate: {:?}", other),
        }
    }

    #[test]
    fn single_literal_matrix() {
        // refuting the axiom p alone yields [[p]]
        let (m, syms) = matrix_of("fof(a, axiom, p). fof(c, conjecture, $false).", ClausifyMode::Standard);
        assert_eq!(m.clauses.len(), 1);
        assert_eq!(m.clauses[0].lits.len(), 1);
        assert_eq!(syms.name(m.clauses[0].lits[0].root()), "p");
        assert!(m.clauses[0].lits[0].is_positive());
    }

    /// The running worked example: axiom
    /// `q ∧ p(a) ∧ ∀x.(¬p(x) ∨ (¬p(s(s(x))) ∧ (p(s(x)) ∨ ¬q)))` refuted on
    /// its own must clausify to the four clauses
    /// `[q] [p(a)] [¬p(x), ¬p(s²x)] [¬p(x), p(sx), ¬q]`.
    #[test]
    fn worked_example_clausal_matrix() {
        let src = "fof(f, axiom, q & p(a) & ![X]: (~p(X) | (~p(s(s(X))) & (p(s(X)) | ~q)))).\n\
                   fof(goal, conjecture, $false).";
        let (m, syms) = matrix_of(src, ClausifyMode::Standard);
        let rendered = m.render(&syms);
        assert_eq!(m.clauses.len(), 4, "matrix was {}", rendered);
        assert_eq!(m.clauses[0].lits.len(), 1); // [q]
        assert_eq!(syms.name(m.clauses[0].lits[0].root()), "q");
        assert_eq!(m.clauses[1].lits.len(), 1); // [p(a)]
        assert_eq!(syms.name(m.clauses[1].lits[0].root()), "p");
        // [¬p(x), ¬p(s(s(x)))]
        assert_eq!(m.clauses[2].lits.len(), 2);
        assert!(m.clauses[2].lits.iter().all(|l| !l.is_positive()));
        // [¬p(x), p(s(x)), ¬q]
        assert_eq!(m.clauses[3].lits.len(), 3);
        assert_eq!(syms.name(m.clauses[3].lits[2].root()), "q");
        assert!(!m.clauses[3].lits[2].is_positive());
        // no conjecture clauses in a plain refutation
        assert!(m.clauses.iter().all(|c| !c.from_conjecture));
    }

    #[test]
    fn conjecture_clauses_are_flagged() {
        let (m, _) =
            matrix_of("fof(a, axiom, p). fof(c, conjecture, q).", ClausifyMode::Standard);
        // negation of ((p ∧ #) → (q ∧ #)) is p ∧ # ∧ (¬q ∨ ¬#)
        let flagged: Vec<bool> = m.clauses.iter().map(|c| c.from_conjecture).collect();
        assert!(flagged.iter().any(|&f| f));
        assert!(flagged.iter().any(|&f| !f));
    }

    #[test]
    fn contra_index_lookup_completeness() {
        let (m, _) = matrix_of(
            "fof(f, axiom, q & p(a) & ![X]: (~p(X) | (~p(s(s(X))) & (p(s(X)) | ~q)))).\n\
             fof(goal, conjecture, $false).",
            ClausifyMode::Standard,
        );
        let idx = ContraIndex::build(&m);
        for (ci, c) in m.clauses.iter().enumerate() {
            for (li, l) in c.lits.iter().enumerate() {
                let entries = idx.lookup(&l.complement());
                assert!(
                    entries.iter().any(|e| e.clause == ci && e.lit == li),
                    "entry for clause {} literal {} reachable via the complement",
                    ci,
                    li
                );
            }
        }
    }

    #[test]
    fn both_modes_equisatisfiable_on_ground_formulas() {
        // (a∨b) ∧ (a∨c) — ground both modes and compare satisfiability via
        // truth tables over the atom set.
        let src = "fof(f, axiom, (a | b) & (a | c)). fof(g, conjecture, $false).";
        let (ms, syms_s) = matrix_of(src, ClausifyMode::Standard);
        let (md, syms_d) = matrix_of(src, ClausifyMode::Definitional);
        assert_eq!(sat_ground(&ms, &syms_s), sat_ground(&md, &syms_d));

        // distribution case: a ∨ (b ∧ c)
        let src = "fof(f, axiom, a | (b & c)). fof(g, conjecture, $false).";
        let (ms, syms_s) = matrix_of(src, ClausifyMode::Standard);
        let (md, syms_d) = matrix_of(src, ClausifyMode::Definitional);
        assert_eq!(ms.clauses.len(), 2); // (a∨b) ∧ (a∨c)
        assert_eq!(sat_ground(&ms, &syms_s), sat_ground(&md, &syms_d));
    }

    /// Brute-force CNF satisfiability for ground matrices (definitional
    /// symbols are ordinary atoms here, which preserves satisfiability).
    fn sat_ground(m: &ClausalMatrix, _syms: &SymTable) -> bool {
        let mut atoms: Vec<SignedSym> = Vec::new();
        for c in &m.clauses {
            for l in &c.lits {
                assert!(l.args.iter().all(|t| matches!(t, Term::App(_, a) if a.is_empty())) || l.args.is_empty());
                let a = l.pred.abs();
                if !atoms.contains(&a) {
                    atoms.push(a);
                }
            }
        }
        assert!(atoms.len() <= 12);
        for assignment in 0u32..(1 << atoms.len()) {
            let value = |p: SignedSym| {
                let idx = atoms.iter().position(|&a| a == p.abs()).unwrap();
                let v = assignment & (1 << idx) != 0;
                if p > 0 {
                    v
                } else {
                    !v
                }
            };
            if m.clauses.iter().all(|c| c.lits.iter().any(|l| value(l.pred))) {
                return true;
            }
        }
        false
    }

    #[test]
    fn definitional_names_are_consistent_across_problems() {
        let src_a = "fof(f, axiom, a | (b(k) & c)). fof(g, conjecture, $false).";
        let src_b = "fof(other, axiom, zz | (b(k) & c)). fof(g, conjecture, $false).";
        let (ma, syms_a) = matrix_of(src_a, ClausifyMode::Definitional);
        let (mb, syms_b) = matrix_of(src_b, ClausifyMode::Definitional);
        let defs_a: Vec<&str> = ma
            .clauses
            .iter()
            .flat_map(|c| c.lits.iter())
            .map(|l| syms_a.name(l.root()))
            .filter(|n| n.starts_with(DEF_PREFIX))
            .collect();
        let defs_b: Vec<&str> = mb
            .clauses
            .iter()
            .flat_map(|c| c.lits.iter())
            .map(|l| syms_b.name(l.root()))
            .filter(|n| n.starts_with(DEF_PREFIX))
            .collect();
        assert!(!defs_a.is_empty());
        assert_eq!(
            defs_a.iter().collect::<std::collections::HashSet<_>>(),
            defs_b.iter().collect::<std::collections::HashSet<_>>()
        );
    }
}
