//! Problem preprocessing: combine axioms and conjecture, intern symbols,
//! add equality axioms, expand derived connectives, miniscope, negate into
//! negation normal form, reorder, rectify.
//!
//! Skolemisation (the final step) lives in [`crate::skolem`].

use std::collections::HashMap;

use crate::nnf::Nnf;
use crate::symtab::{SymTable, EQ_NAME, MARKER_NAME};
use crate::term::{Lit, Sym, Term, VarGen, VarId};
use crate::tptp::{Problem, RawFormula, RawTerm};

/// Interned first-order formula with the full connective set. Intermediate
/// representation between the parser's string world and [`Nnf`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom(Sym, Vec<Term>),
    Neg(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(VarId, Box<Formula>),
    Exists(VarId, Box<Formula>),
}

/// Result of normalisation: the refutation formula may collapse to a truth
/// constant when the input is degenerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Normal {
    /// Refutation formula is verum: nothing to refute, search must fail.
    Top,
    /// Refutation formula is falsum: trivially refuted.
    Bot,
    Formula(Nnf),
}

// ---------------------------------------------------------------------------
// Step 1 + 4: combine axioms and conjecture, insert the # marker
// ---------------------------------------------------------------------------

fn marker() -> RawFormula {
    RawFormula::Atom(MARKER_NAME.to_string(), Vec::new())
}

/// Build the single problem formula `(A1 ∧ … ∧ An) → C` and apply the
/// conjecture-marker transformation `(P ∧ #) → (C ∧ #)` when the result is
/// an implication.
///
/// A `$false` conjecture (or a missing one) denotes refutation of the
/// axioms alone; no marker is inserted in that case, since there are no
/// conjecture clauses to direct search towards.
pub fn combine(problem: &Problem) -> RawFormula {
    let axioms: Vec<RawFormula> = problem.axioms.iter().map(|a| a.formula.clone()).collect();
    let conj = problem.conjecture.as_ref().map(|c| c.formula.clone());

    let plain_refutation = matches!(conj, None | Some(RawFormula::False));
    let conj = conj.unwrap_or(RawFormula::False);

    let combined = if axioms.is_empty() {
        conj
    } else {
        RawFormula::Imp(Box::new(RawFormula::and(axioms)), Box::new(conj))
    };

    if plain_refutation {
        return combined;
    }
    match combined {
        RawFormula::Imp(p, c) => RawFormula::Imp(
            Box::new(RawFormula::and(vec![*p, marker()])),
            Box::new(RawFormula::and(vec![*c, marker()])),
        ),
        other => other,
    }
}

// ---------------------------------------------------------------------------
// Step 2: symbol interning
// ---------------------------------------------------------------------------

/// Scan a formula and intern every predicate and function symbol, in first
/// occurrence order. Returns whether equality occurs.
pub fn collect_symbols(f: &RawFormula, syms: &mut SymTable) -> bool {
    let mut has_eq = false;
    collect_rec(f, syms, &mut has_eq);
    has_eq
}

fn collect_rec(f: &RawFormula, syms: &mut SymTable, has_eq: &mut bool) {
    match f {
        RawFormula::True | RawFormula::False => {}
        RawFormula::Atom(name, args) => {
            syms.intern(name, args.len());
            for a in args {
                collect_term(a, syms);
            }
        }
        RawFormula::Eq(a, b) => {
            *has_eq = true;
            collect_term(a, syms);
            collect_term(b, syms);
        }
        RawFormula::Neg(g) => collect_rec(g, syms, has_eq),
        RawFormula::And(ps) | RawFormula::Or(ps) => {
            for p in ps {
                collect_rec(p, syms, has_eq);
            }
        }
        RawFormula::Imp(a, b) | RawFormula::Iff(a, b) => {
            collect_rec(a, syms, has_eq);
            collect_rec(b, syms, has_eq);
        }
        RawFormula::Forall(_, g) | RawFormula::Exists(_, g) => collect_rec(g, syms, has_eq),
    }
}

fn collect_term(t: &RawTerm, syms: &mut SymTable) {
    if let RawTerm::App(name, args) = t {
        syms.intern(name, args.len());
        for a in args {
            collect_term(a, syms);
        }
    }
}

/// Function and predicate signatures occurring in a formula, each in first
/// occurrence order. Predicates exclude equality itself.
pub fn signature(f: &RawFormula) -> (Vec<(String, usize)>, Vec<(String, usize)>) {
    let mut funs = Vec::new();
    let mut preds = Vec::new();
    sig_formula(f, &mut funs, &mut preds);
    (funs, preds)
}

fn sig_formula(f: &RawFormula, funs: &mut Vec<(String, usize)>, preds: &mut Vec<(String, usize)>) {
    match f {
        RawFormula::True | RawFormula::False => {}
        RawFormula::Atom(name, args) => {
            let key = (name.clone(), args.len());
            if !preds.contains(&key) {
                preds.push(key);
            }
            for a in args {
                sig_term(a, funs);
            }
        }
        RawFormula::Eq(a, b) => {
            sig_term(a, funs);
            sig_term(b, funs);
        }
        RawFormula::Neg(g) => sig_formula(g, funs, preds),
        RawFormula::And(ps) | RawFormula::Or(ps) => {
            for p in ps {
                sig_formula(p, funs, preds);
            }
        }
        RawFormula::Imp(a, b) | RawFormula::Iff(a, b) => {
            sig_formula(a, funs, preds);
            sig_formula(b, funs, preds);
        }
        RawFormula::Forall(_, g) | RawFormula::Exists(_, g) => sig_formula(g, funs, preds),
    }
}

fn sig_term(t: &RawTerm, funs: &mut Vec<(String, usize)>) {
    if let RawTerm::App(name, args) = t {
        let key = (name.clone(), args.len());
        if !funs.contains(&key) {
            funs.push(key);
        }
        for a in args {
            sig_term(a, funs);
        }
    }
}

// ---------------------------------------------------------------------------
// Step 3: equality axioms
// ---------------------------------------------------------------------------

fn eq(a: RawTerm, b: RawTerm) -> RawFormula {
    RawFormula::Eq(a, b)
}

fn var(n: &str) -> RawTerm {
    RawTerm::Var(n.to_string())
}

fn forall_many(vars: Vec<String>, body: RawFormula) -> RawFormula {
    vars.into_iter().rev().fold(body, |acc, v| RawFormula::Forall(v, Box::new(acc)))
}

/// Step 3: if equality occurs in `f`, conjoin reflexivity, symmetry,
/// transitivity plus congruence/monotonicity axioms for every function and
/// predicate of positive arity to the axiom part of `f`; otherwise return
/// `f` unchanged.
///
/// Axiom symbols come from the formula as interned in step 2, so Skolem
/// functions introduced later never receive congruence axioms.
pub fn add_equality_axioms(f: RawFormula, _syms: &SymTable) -> RawFormula {
    let mut has_eq = false;
    let mut probe = SymTable::new();
    collect_rec(&f, &mut probe, &mut has_eq);
    if !has_eq {
        return f;
    }
    let (funs, preds) = signature(&f);

    let mut axioms = Vec::new();
    // Reflexivity, symmetry, transitivity.
    axioms.push(forall_many(vec!["EQV1".into()], eq(var("EQV1"), var("EQV1"))));
    axioms.push(forall_many(
        vec!["EQV1".into(), "EQV2".into()],
        RawFormula::Imp(Box::new(eq(var("EQV1"), var("EQV2"))), Box::new(eq(var("EQV2"), var("EQV1")))),
    ));
    axioms.push(forall_many(
        vec!["EQV1".into(), "EQV2".into(), "EQV3".into()],
        RawFormula::Imp(
            Box::new(eq(var("EQV1"), var("EQV2"))),
            Box::new(RawFormula::Imp(
                Box::new(eq(var("EQV2"), var("EQV3"))),
                Box::new(eq(var("EQV1"), var("EQV3"))),
            )),
        ),
    ));
    // Function congruence: x1=y1 → … → xn=yn → f(x̄)=f(ȳ).
    for (name, arity) in funs.iter().filter(|(_, a)| *a > 0) {
        let xs: Vec<String> = (0..*arity).map(|i| format!("EQX{}", i)).collect();
        let ys: Vec<String> = (0..*arity).map(|i| format!("EQY{}", i)).collect();
        let concl = eq(
            RawTerm::App(name.clone(), xs.iter().map(|v| var(v)).collect()),
            RawTerm::App(name.clone(), ys.iter().map(|v| var(v)).collect()),
        );
        let body = (0..*arity).rev().fold(concl, |acc, i| {
            RawFormula::Imp(Box::new(eq(var(&xs[i]), var(&ys[i]))), Box::new(acc))
        });
        let mut vars: Vec<String> = xs;
        vars.extend(ys);
        axioms.push(forall_many(vars, body));
    }
    // Predicate monotonicity: x1=y1 → … → xn=yn → P(x̄) → P(ȳ).
    for (name, arity) in preds.iter().filter(|(n, a)| *a > 0 && n != EQ_NAME) {
        let xs: Vec<String> = (0..*arity).map(|i| format!("EQX{}", i)).collect();
        let ys: Vec<String> = (0..*arity).map(|i| format!("EQY{}", i)).collect();
        let concl = RawFormula::Imp(
            Box::new(RawFormula::Atom(name.clone(), xs.iter().map(|v| var(v)).collect())),
            Box::new(RawFormula::Atom(name.clone(), ys.iter().map(|v| var(v)).collect())),
        );
        let body = (0..*arity).rev().fold(concl, |acc, i| {
            RawFormula::Imp(Box::new(eq(var(&xs[i]), var(&ys[i]))), Box::new(acc))
        });
        let mut vars: Vec<String> = xs;
        vars.extend(ys);
        axioms.push(forall_many(vars, body));
    }

    let eq_part = RawFormula::and(axioms);
    match f {
        RawFormula::Imp(p, c) => {
            RawFormula::Imp(Box::new(RawFormula::and(vec![*p, eq_part])), Box::new(*c))
        }
        other => RawFormula::Imp(Box::new(eq_part), Box::new(other)),
    }
}

/// Number of equality axioms [`add_equality_axioms`] would conjoin.
pub fn equality_axiom_count(f: &RawFormula) -> usize {
    let mut has_eq = false;
    let mut probe = SymTable::new();
    collect_rec(f, &mut probe, &mut has_eq);
    if !has_eq {
        return 0;
    }
    let (funs, preds) = signature(f);
    3 + funs.iter().filter(|(_, a)| *a > 0).count()
        + preds.iter().filter(|(n, a)| *a > 0 && n != EQ_NAME).count()
}

// ---------------------------------------------------------------------------
// Interning raw formulas
// ---------------------------------------------------------------------------

/// Convert a raw formula into the interned representation. Every quantifier
/// binding receives a fresh variable identifier; occurrences resolve to the
/// innermost enclosing binder of the same name.
pub fn intern_formula(f: &RawFormula, syms: &mut SymTable, gen: &mut VarGen) -> Formula {
    let mut env: Vec<(String, VarId)> = Vec::new();
    intern_rec(f, syms, gen, &mut env)
}

fn intern_rec(
    f: &RawFormula,
    syms: &mut SymTable,
    gen: &mut VarGen,
    env: &mut Vec<(String, VarId)>,
) -> Formula {
    match f {
        RawFormula::True => Formula::True,
        RawFormula::False => Formula::False,
        RawFormula::Atom(name, args) => {
            let s = syms.intern(name, args.len());
            Formula::Atom(s, args.iter().map(|t| intern_term(t, syms, env)).collect())
        }
        RawFormula::Eq(a, b) => {
            let s = syms.equality();
            Formula::Atom(s, vec![intern_term(a, syms, env), intern_term(b, syms, env)])
        }
        RawFormula::Neg(g) => Formula::Neg(Box::new(intern_rec(g, syms, gen, env))),
        RawFormula::And(ps) => {
            Formula::And(ps.iter().map(|p| intern_rec(p, syms, gen, env)).collect())
        }
        RawFormula::Or(ps) => {
            Formula::Or(ps.iter().map(|p| intern_rec(p, syms, gen, env)).collect())
        }
        RawFormula::Imp(a, b) => Formula::Imp(
            Box::new(intern_rec(a, syms, gen, env)),
            Box::new(intern_rec(b, syms, gen, env)),
        ),
        RawFormula::Iff(a, b) => Formula::Iff(
            Box::new(intern_rec(a, syms, gen, env)),
            Box::new(intern_rec(b, syms, gen, env)),
        ),
        RawFormula::Forall(v, g) => {
            let id = gen.fresh();
            env.push((v.clone(), id));
            let body = intern_rec(g, syms, gen, env);
            env.pop();
            Formula::Forall(id, Box::new(body))
        }
        RawFormula::Exists(v, g) => {
            let id = gen.fresh();
            env.push((v.clone(), id));
            let body = intern_rec(g, syms, gen, env);
            env.pop();
            Formula::Exists(id, Box::new(body))
        }
    }
}

fn intern_term(t: &RawTerm, syms: &mut SymTable, env: &[(String, VarId)]) -> Term {
    match t {
        RawTerm::Var(name) => {
            let id = env
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, id)| *id)
                .expect("parser guarantees closed formulas");
            Term::Var(id)
        }
        RawTerm::App(name, args) => {
            let s = syms.intern(name, args.len());
            Term::App(s, args.iter().map(|a| intern_term(a, syms, env)).collect())
        }
    }
}

// ---------------------------------------------------------------------------
// Step 5: expand implications and equivalences, fold truth constants
// ---------------------------------------------------------------------------

fn fand(parts: Vec<Formula>) -> Formula {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Formula::True => {}
            Formula::False => return Formula::False,
            Formula::And(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Formula::True,
        1 => out.pop().unwrap(),
        _ => Formula::And(out),
    }
}

fn for_(parts: Vec<Formula>) -> Formula {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Formula::False => {}
            Formula::True => return Formula::True,
            Formula::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Formula::False,
        1 => out.pop().unwrap(),
        _ => Formula::Or(out),
    }
}

fn fneg(f: Formula) -> Formula {
    match f {
        Formula::True => Formula::False,
        Formula::False => Formula::True,
        Formula::Neg(inner) => *inner,
        other => Formula::Neg(Box::new(other)),
    }
}

/// Step 5: `A → B` becomes `¬A ∨ B` and `A ↔ B` becomes
/// `(¬A ∨ B) ∧ (A ∨ ¬B)`. Truth constants are folded away.
pub fn expand(f: Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_, _) => f,
        Formula::Neg(g) => fneg(expand(*g)),
        Formula::And(ps) => fand(ps.into_iter().map(expand).collect()),
        Formula::Or(ps) => for_(ps.into_iter().map(expand).collect()),
        Formula::Imp(a, b) => {
            let a = expand(*a);
            let b = expand(*b);
            for_(vec![fneg(a), b])
        }
        Formula::Iff(a, b) => {
            let a = expand(*a);
            let b = expand(*b);
            fand(vec![
                for_(vec![fneg(a.clone()), b.clone()]),
                for_(vec![a, fneg(b)]),
            ])
        }
        Formula::Forall(v, g) => match expand(*g) {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            body => Formula::Forall(v, Box::new(body)),
        },
        Formula::Exists(v, g) => match expand(*g) {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            body => Formula::Exists(v, Box::new(body)),
        },
    }
}

// ---------------------------------------------------------------------------
// Step 6: miniscoping
// ---------------------------------------------------------------------------

fn formula_has_free(f: &Formula, v: VarId) -> bool {
    match f {
        Formula::True | Formula::False => false,
        Formula::Atom(_, args) => args.iter().any(|t| t.contains_var(v)),
        Formula::Neg(g) => formula_has_free(g, v),
        Formula::And(ps) | Formula::Or(ps) => ps.iter().any(|p| formula_has_free(p, v)),
        Formula::Imp(a, b) | Formula::Iff(a, b) => {
            formula_has_free(a, v) || formula_has_free(b, v)
        }
        Formula::Forall(w, g) | Formula::Exists(w, g) => *w != v && formula_has_free(g, v),
    }
}

fn quant(exists: bool, v: VarId, body: Formula) -> Formula {
    if exists {
        Formula::Exists(v, Box::new(body))
    } else {
        Formula::Forall(v, Box::new(body))
    }
}

/// Step 6: push quantifiers inside so their scope becomes minimal. ∀
/// distributes over ∧ and ∃ over ∨; over the dual connective, parts without
/// the bound variable are hoisted out. Negations block pushing (they are
/// resolved by the later NNF conversion).
pub fn miniscope(f: Formula) -> Formula {
    match f {
        Formula::True | Formula::False | Formula::Atom(_, _) => f,
        Formula::Neg(g) => fneg(miniscope(*g)),
        Formula::And(ps) => fand(ps.into_iter().map(miniscope).collect()),
        Formula::Or(ps) => for_(ps.into_iter().map(miniscope).collect()),
        Formula::Imp(_, _) | Formula::Iff(_, _) => {
            unreachable!("miniscope runs after expansion")
        }
        Formula::Forall(v, g) => miniscope_quant(false, v, miniscope(*g)),
        Formula::Exists(v, g) => miniscope_quant(true, v, miniscope(*g)),
    }
}

fn miniscope_quant(exists: bool, v: VarId, body: Formula) -> Formula {
    if !formula_has_free(&body, v) {
        return body;
    }
    let distributes_over_and = !exists;
    match body {
        Formula::And(ps) if distributes_over_and => fand(
            ps.into_iter()
                .map(|p| if formula_has_free(&p, v) { miniscope_quant(exists, v, p) } else { p })
                .collect(),
        ),
        Formula::Or(ps) if !distributes_over_and => for_(
            ps.into_iter()
                .map(|p| if formula_has_free(&p, v) { miniscope_quant(exists, v, p) } else { p })
                .collect(),
        ),
        Formula::Or(ps) if distributes_over_and => {
            if ps.iter().all(|p| formula_has_free(p, v)) {
                quant(exists, v, Formula::Or(ps))
            } else {
                hoist(exists, v, ps, false)
            }
        }
        Formula::And(ps) if !distributes_over_and => {
            if ps.iter().all(|p| formula_has_free(p, v)) {
                quant(exists, v, Formula::And(ps))
            } else {
                hoist(exists, v, ps, true)
            }
        }
        other => quant(exists, v, other),
    }
}

/// Hoist the parts not containing `v` out of the quantifier. The quantified
/// group is placed at the position of its first member.
fn hoist(exists: bool, v: VarId, parts: Vec<Formula>, conj: bool) -> Formula {
    let mut group = Vec::new();
    let mut out: Vec<Option<Formula>> = Vec::new();
    let mut group_pos = None;
    for p in parts {
        if formula_has_free(&p, v) {
            if group_pos.is_none() {
                group_pos = Some(out.len());
                out.push(None);
            }
            group.push(p);
        } else {
            out.push(Some(p));
        }
    }
    let pos = group_pos.expect("v free in body");
    let inner = if conj { fand(group) } else { for_(group) };
    // Recurse in case the regrouped body now distributes.
    let quantified = miniscope_quant(exists, v, inner);
    let pieces: Vec<Formula> = out
        .into_iter()
        .enumerate()
        .map(|(i, slot)| match slot {
            Some(p) => p,
            None => {
                debug_assert_eq!(i, pos);
                quantified.clone()
            }
        })
        .collect();
    if conj {
        fand(pieces)
    } else {
        for_(pieces)
    }
}

// ---------------------------------------------------------------------------
// Step 7: negate and convert to NNF
// ---------------------------------------------------------------------------

enum NnfOrConst {
    Top,
    Bot,
    F(Nnf),
}

fn nnf_and(parts: Vec<NnfOrConst>) -> NnfOrConst {
    let mut out = Vec::new();
    for p in parts {
        match p {
            NnfOrConst::Top => {}
            NnfOrConst::Bot => return NnfOrConst::Bot,
            NnfOrConst::F(f) => out.push(f),
        }
    }
    if out.is_empty() {
        NnfOrConst::Top
    } else {
        NnfOrConst::F(Nnf::and(out))
    }
}

fn nnf_or(parts: Vec<NnfOrConst>) -> NnfOrConst {
    let mut out = Vec::new();
    for p in parts {
        match p {
            NnfOrConst::Bot => {}
            NnfOrConst::Top => return NnfOrConst::Top,
            NnfOrConst::F(f) => out.push(f),
        }
    }
    if out.is_empty() {
        NnfOrConst::Bot
    } else {
        NnfOrConst::F(Nnf::or(out))
    }
}

fn to_nnf(f: &Formula, positive: bool) -> NnfOrConst {
    match f {
        Formula::True => {
            if positive {
                NnfOrConst::Top
            } else {
                NnfOrConst::Bot
            }
        }
        Formula::False => {
            if positive {
                NnfOrConst::Bot
            } else {
                NnfOrConst::Top
            }
        }
        Formula::Atom(s, args) => {
            let pred = if positive { *s as i32 } else { -(*s as i32) };
            NnfOrConst::F(Nnf::Lit(Lit::new(pred, args.clone())))
        }
        Formula::Neg(g) => to_nnf(g, !positive),
        Formula::And(ps) => {
            let parts: Vec<NnfOrConst> = ps.iter().map(|p| to_nnf(p, positive)).collect();
            if positive {
                nnf_and(parts)
            } else {
                nnf_or(parts)
            }
        }
        Formula::Or(ps) => {
            let parts: Vec<NnfOrConst> = ps.iter().map(|p| to_nnf(p, positive)).collect();
            if positive {
                nnf_or(parts)
            } else {
                nnf_and(parts)
            }
        }
        Formula::Imp(_, _) | Formula::Iff(_, _) => unreachable!("NNF runs after expansion"),
        Formula::Forall(v, g) => match to_nnf(g, positive) {
            NnfOrConst::Top => NnfOrConst::Top,
            NnfOrConst::Bot => NnfOrConst::Bot,
            NnfOrConst::F(body) => NnfOrConst::F(if positive {
                Nnf::forall(*v, body)
            } else {
                Nnf::exists(*v, body)
            }),
        },
        Formula::Exists(v, g) => match to_nnf(g, positive) {
            NnfOrConst::Top => NnfOrConst::Top,
            NnfOrConst::Bot => NnfOrConst::Bot,
            NnfOrConst::F(body) => NnfOrConst::F(if positive {
                Nnf::exists(*v, body)
            } else {
                Nnf::forall(*v, body)
            }),
        },
    }
}

// ---------------------------------------------------------------------------
// Step 8: reorder to reduce path count
// ---------------------------------------------------------------------------

/// Stable sort of ∧/∨ children by ascending path count, bottom-up. Ties
/// keep source order.
pub fn reorder(f: Nnf) -> Nnf {
    match f {
        Nnf::Lit(_) => f,
        Nnf::And(ps) => {
            let mut keyed: Vec<(u128, Nnf)> =
                ps.into_iter().map(reorder).map(|p| (p.path_count(), p)).collect();
            keyed.sort_by_key(|(k, _)| *k);
            Nnf::And(keyed.into_iter().map(|(_, p)| p).collect())
        }
        Nnf::Or(ps) => {
            let mut keyed: Vec<(u128, Nnf)> =
                ps.into_iter().map(reorder).map(|p| (p.path_count(), p)).collect();
            keyed.sort_by_key(|(k, _)| *k);
            Nnf::Or(keyed.into_iter().map(|(_, p)| p).collect())
        }
        Nnf::Forall(v, body) => Nnf::forall(v, reorder(*body)),
        Nnf::Exists(v, body) => Nnf::exists(v, reorder(*body)),
    }
}

// ---------------------------------------------------------------------------
// Step 9: rectification
// ---------------------------------------------------------------------------

/// Rename bound variables so any two distinct quantifiers bind distinct
/// identifiers.
pub fn rectify(f: &Nnf, gen: &mut VarGen) -> Nnf {
    let mut env: Vec<(VarId, VarId)> = Vec::new();
    rectify_rec(f, gen, &mut env)
}

fn rectify_rec(f: &Nnf, gen: &mut VarGen, env: &mut Vec<(VarId, VarId)>) -> Nnf {
    match f {
        Nnf::Lit(l) => {
            let map: HashMap<VarId, VarId> = env.iter().copied().collect();
            Nnf::Lit(l.rename(&map))
        }
        Nnf::And(ps) => Nnf::And(ps.iter().map(|p| rectify_rec(p, gen, env)).collect()),
        Nnf::Or(ps) => Nnf::Or(ps.iter().map(|p| rectify_rec(p, gen, env)).collect()),
        Nnf::Forall(v, body) => {
            let fresh = gen.fresh();
            env.push((*v, fresh));
            let b = rectify_rec(body, gen, env);
            env.pop();
            Nnf::forall(fresh, b)
        }
        Nnf::Exists(v, body) => {
            let fresh = gen.fresh();
            env.push((*v, fresh));
            let b = rectify_rec(body, gen, env);
            env.pop();
            Nnf::exists(fresh, b)
        }
    }
}

/// Steps 5–9: expand derived connectives, miniscope, negate into NNF,
/// reorder by path count, rectify.
pub fn normalize(f: Formula, gen: &mut VarGen) -> Normal {
    let f = expand(f);
    let f = miniscope(f);
    match to_nnf(&f, false) {
        NnfOrConst::Top => Normal::Top,
        NnfOrConst::Bot => Normal::Bot,
        NnfOrConst::F(nnf) => {
            let nnf = reorder(nnf);
            Normal::Formula(rectify(&nnf, gen))
        }
    }
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct PreprocOpts {
    /// Add equality axioms when `=` occurs (step 3). Disable for
    /// pre-axiomatised corpora.
    pub eq_axioms: bool,
}

impl Default for PreprocOpts {
    fn default() -> Self {
        PreprocOpts { eq_axioms: true }
    }
}

#[derive(Debug)]
pub struct Preprocessed {
    pub normal: Normal,
    pub syms: SymTable,
    pub gen: VarGen,
}

/// Run the whole preprocessing pipeline on a parsed problem, including
/// consistent Skolemisation.
pub fn pipeline(problem: &Problem, opts: PreprocOpts) -> Preprocessed {
    let raw = combine(problem);
    let mut syms = SymTable::new();
    collect_symbols(&raw, &mut syms);
    let raw = if opts.eq_axioms { add_equality_axioms(raw, &syms) } else { raw };
    let mut gen = VarGen::new();
    let f = intern_formula(&raw, &mut syms, &mut gen);
    let normal = match normalize(f, &mut gen) {
        Normal::Formula(nnf) => {
            Normal::Formula(crate::skolem::skolemize_consistent(nnf, &mut syms, &mut gen))
        }
        other => other,
    };
    Preprocessed { normal, syms, gen }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tptp::parse_problem;

    fn atom(name: &str) -> RawFormula {
        RawFormula::Atom(name.into(), vec![])
    }

    #[test]
    fn combine_no_axioms_returns_conjecture() {
        let p = parse_problem("fof(c, conjecture, p).", &[]).unwrap();
        assert_eq!(combine(&p), atom("p"));
    }

    #[test]
    fn combine_inserts_marker() {
        let p = parse_problem("fof(a, axiom, p). fof(c, conjecture, q).", &[]).unwrap();
        let f = combine(&p);
        // (p ∧ #) → (q ∧ #)
        match f {
            RawFormula::Imp(l, r) => {
                assert_eq!(*l, RawFormula::and(vec![atom("p"), atom("#")]));
                assert_eq!(*r, RawFormula::and(vec![atom("q"), atom("#")]));
            }
            other => panic!("expected implication, got {:?}", other),
        }
    }

    #[test]
    fn combine_folds_axiom_conjunction() {
        let p = parse_problem("fof(a1, axiom, p). fof(a2, axiom, q). fof(c, conjecture, r).", &[])
            .unwrap();
        match combine(&p) {
            RawFormula::Imp(l, _) => {
                assert_eq!(*l, RawFormula::and(vec![atom("p"), atom("q"), atom("#")]));
            }
            other => panic!("expected implication, got {:?}", other),
        }
    }

    #[test]
    fn combine_false_conjecture_refutes_axioms_alone() {
        let p = parse_problem("fof(a, axiom, p). fof(c, conjecture, $false).", &[]).unwrap();
        let f = combine(&p);
        match f {
            RawFormula::Imp(l, r) => {
                assert_eq!(*l, atom("p"), "no marker on the axiom part");
                assert_eq!(*r, RawFormula::False);
            }
            other => panic!("expected implication, got {:?}", other),
        }
    }

    #[test]
    fn equality_axiom_counts() {
        // no equality: unchanged
        let p = parse_problem("fof(a, axiom, p(a)).", &[]).unwrap();
        let f = combine(&p);
        assert_eq!(equality_axiom_count(&f), 0);
        assert_eq!(add_equality_axioms(f.clone(), &SymTable::new()), f);

        // one unary function g: 3 base + 1 congruence
        let p = parse_problem("fof(a, axiom, g(a) = a).", &[]).unwrap();
        let f = combine(&p);
        // symbols: g/1 and a/0; only g has positive arity
        assert_eq!(equality_axiom_count(&f), 4);

        // binary predicate r alongside equality: monotonicity with 2 premises
        let p = parse_problem("fof(a, axiom, (r(a,b) & a = b)).", &[]).unwrap();
        let f = combine(&p);
        assert_eq!(equality_axiom_count(&f), 4); // 3 base + r monotonicity
    }

    #[test]
    fn monotonicity_premise_count() {
        let p = parse_problem("fof(a, axiom, (r(a,b) & a = b)).", &[]).unwrap();
        let f = add_equality_axioms(combine(&p), &SymTable::new());
        // find the monotonicity axiom for r and count its equation premises
        fn count_imp_prefix(f: &RawFormula) -> usize {
            match f {
                RawFormula::Imp(l, r) if matches!(**l, RawFormula::Eq(_, _)) => {
                    1 + count_imp_prefix(r)
                }
                _ => 0,
            }
        }
        fn strip_foralls(f: &RawFormula) -> &RawFormula {
            match f {
                RawFormula::Forall(_, g) => strip_foralls(g),
                other => other,
            }
        }
        let axiom_part = match &f {
            RawFormula::Imp(l, _) => l,
            _ => panic!(),
        };
        let parts = match &**axiom_part {
            RawFormula::And(ps) => ps,
            _ => panic!(),
        };
        let mono = parts
            .iter()
            .map(|p| strip_foralls(p))
            .find(|p| {
                matches!(p, RawFormula::Imp(_, r) if count_imp_prefix(p) == 2
                    && matches!(strip_imps(r), RawFormula::Imp(_, _)))
            });
        fn strip_imps(f: &RawFormula) -> &RawFormula {
            match f {
                RawFormula::Imp(l, r) if matches!(**l, RawFormula::Eq(_, _)) => strip_imps(r),
                other => other,
            }
        }
        assert!(mono.is_some(), "monotonicity axiom with 2 equation premises present");
    }

    #[test]
    fn double_negation_normalizes() {
        let mut syms = SymTable::new();
        let mut gen = VarGen::new();
        let p = parse_problem("fof(c, conjecture, ~(~p)).", &[]).unwrap();
        let f = intern_formula(&combine(&p), &mut syms, &mut gen);
        // refutation formula is the negation: ¬¬¬p → ¬p
        match normalize(f, &mut gen) {
            Normal::Formula(Nnf::Lit(l)) => {
                assert!(!l.is_positive());
                assert_eq!(syms.name(l.root()), "p");
            }
            other => panic!("expected single literal, got {:?}", other),
        }
    }

    #[test]
    fn miniscope_splits_forall_over_and() {
        let mut syms = SymTable::new();
        let mut gen = VarGen::new();
        let p = syms.intern("p", 1);
        let q = syms.intern("q", 0);
        let v = gen.fresh();
        // ∀x.(p(x) ∧ q) → (∀x.p(x)) ∧ q
        let f = Formula::Forall(
            v,
            Box::new(Formula::And(vec![
                Formula::Atom(p, vec![Term::Var(v)]),
                Formula::Atom(q, vec![]),
            ])),
        );
        let m = miniscope(f);
        match m {
            Formula::And(parts) => {
                assert!(matches!(&parts[0], Formula::Forall(_, _)));
                assert!(matches!(&parts[1], Formula::Atom(_, _)));
            }
            other => panic!("expected conjunction, got {:?}", other),
        }
    }

    #[test]
    fn iff_expansion_truth_table() {
        // (A↔B) expands to (¬A∨B)∧(A∨¬B); verify by evaluating all four
        // assignments to ground atoms.
        fn eval(f: &Formula, a: bool, b: bool, sa: Sym, _sb: Sym) -> bool {
            match f {
                Formula::True => true,
                Formula::False => false,
                Formula::Atom(s, _) => {
                    if *s == sa {
                        a
                    } else {
                        b
                    }
                }
                Formula::Neg(g) => !eval(g, a, b, sa, _sb),
                Formula::And(ps) => ps.iter().all(|p| eval(p, a, b, sa, _sb)),
                Formula::Or(ps) => ps.iter().any(|p| eval(p, a, b, sa, _sb)),
                Formula::Imp(x, y) => !eval(x, a, b, sa, _sb) || eval(y, a, b, sa, _sb),
                Formula::Iff(x, y) => eval(x, a, b, sa, _sb) == eval(y, a, b, sa, _sb),
                _ => unreachable!(),
            }
        }
        let mut syms = SymTable::new();
        let sa = syms.intern("a", 0);
        let sb = syms.intern("b", 0);
        let iff = Formula::Iff(
            Box::new(Formula::Atom(sa, vec![])),
            Box::new(Formula::Atom(sb, vec![])),
        );
        let expanded = expand(iff.clone());
        assert!(matches!(expanded, Formula::And(_)));
        for a in [false, true] {
            for b in [false, true] {
                assert_eq!(eval(&iff, a, b, sa, sb), eval(&expanded, a, b, sa, sb));
            }
        }
    }

    #[test]
    fn reorder_is_stable_and_preserves_total_paths() {
        let mut syms = SymTable::new();
        let p = syms.intern("p", 0) as i32;
        let q = syms.intern("q", 0) as i32;
        let r = syms.intern("r", 0) as i32;
        let lit = |s: i32| Nnf::Lit(Lit::new(s, vec![]));
        // And children with path counts 2 (inner And of two lits) and 1
        let inner = Nnf::And(vec![lit(p), lit(q)]);
        let f = Nnf::And(vec![inner.clone(), lit(r)]);
        let total_before = f.path_count();
        let g = reorder(f);
        assert_eq!(g.path_count(), total_before);
        match g {
            Nnf::And(ps) => {
                // the single literal (1 path) now precedes the inner And (2 paths)
                assert_eq!(ps[0], lit(r));
            }
            other => panic!("expected And, got {:?}", other),
        }
    }

    #[test]
    fn rectify_makes_binders_distinct() {
        let mut gen = VarGen::new();
        let v = gen.fresh();
        let lit = |x: VarId| Nnf::Lit(Lit::new(1, vec![Term::Var(x)]));
        let f = Nnf::And(vec![Nnf::forall(v, lit(v)), Nnf::forall(v, lit(v))]);
        let r = rectify(&f, &mut gen);
        match r {
            Nnf::And(ps) => {
                let (a, b) = match (&ps[0], &ps[1]) {
                    (Nnf::Forall(a, _), Nnf::Forall(b, _)) => (*a, *b),
                    _ => panic!(),
                };
                assert_ne!(a, b);
            }
            _ => panic!(),
        }
    }
}
