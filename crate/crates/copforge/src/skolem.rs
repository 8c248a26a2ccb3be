//! Consistent ε-Skolemisation.
//!
//! Every existential quantifier `∃x.G` is replaced by `G[t/x]` where `t` is
//! a function application whose symbol name is the α-normalised
//! serialisation of the ε-term for `x`. Because the name depends only on
//! the α-class of the ε-term, structurally identical binders receive
//! identical Skolem symbols across different problems.

use std::collections::{HashMap, HashSet};

use crate::nnf::Nnf;
use crate::symtab::SymTable;
use crate::term::{Term, VarGen, VarId};

/// Prefix of Skolem function names. The remainder of the name is the
/// α-normalised serialisation of the ε-term.
pub const SKOLEM_PREFIX: &str = "sk:";

/// The ε-term computed for one existential variable: the bound variable,
/// the defining body with the appropriate quantifiers removed, and the free
/// variables in canonical (first occurrence) order.
#[derive(Debug, Clone)]
pub struct EpsilonTerm {
    pub bound: VarId,
    pub body: Nnf,
    pub free: Vec<VarId>,
    pub key: String,
}

struct Ctx<'a> {
    syms: &'a SymTable,
    /// true = existentially bound
    is_exists: HashMap<VarId, bool>,
    /// for each existential variable x, the subformula ∃x.F of Δ
    delta: HashMap<VarId, Nnf>,
    star_memo: HashMap<VarId, (Vec<VarId>, Vec<VarId>)>,
}

fn record_binders(f: &Nnf, is_exists: &mut HashMap<VarId, bool>, delta: &mut HashMap<VarId, Nnf>) {
    match f {
        Nnf::Lit(_) => {}
        Nnf::And(ps) | Nnf::Or(ps) => {
            for p in ps {
                record_binders(p, is_exists, delta);
            }
        }
        Nnf::Forall(v, body) => {
            is_exists.insert(*v, false);
            record_binders(body, is_exists, delta);
        }
        Nnf::Exists(v, body) => {
            is_exists.insert(*v, true);
            delta.insert(*v, f.clone());
            record_binders(body, is_exists, delta);
        }
    }
}

impl<'a> Ctx<'a> {
    /// Transitive universal/existential free variables of `Δ^x`
    /// (`FVar*_∀` and `FVar*_∃`).
    fn star(&mut self, x: VarId) -> (Vec<VarId>, Vec<VarId>) {
        if let Some(hit) = self.star_memo.get(&x) {
            return hit.clone();
        }
        let dx = self.delta.get(&x).expect("existential binder recorded").clone();
        let fv = dx.free_vars();
        let mut fa: Vec<VarId> = Vec::new();
        let mut fe: Vec<VarId> = Vec::new();
        for v in fv {
            if *self.is_exists.get(&v).expect("closed formula") {
                fe.push(v);
            } else {
                fa.push(v);
            }
        }
        let mut star_a = fa.clone();
        let mut star_e = fe.clone();
        for y in fe {
            let (ya, ye) = self.star(y);
            for v in ya {
                if !star_a.contains(&v) {
                    star_a.push(v);
                }
            }
            for v in ye {
                if !star_e.contains(&v) {
                    star_e.push(v);
                }
            }
        }
        self.star_memo.insert(x, (star_a.clone(), star_e.clone()));
        (star_a, star_e)
    }

    /// The ε-defining formula of `Δ^x`: the largest formula among `Δ^x` and
    /// the `Δ^y` for `y ∈ FVar*_∃(Δ^x)`.
    fn defining_formula(&mut self, x: VarId) -> Nnf {
        let (_, star_e) = self.star(x);
        let mut best = self.delta[&x].clone();
        let mut best_size = best.serial_size(self.syms);
        for y in star_e {
            let cand = self.delta[&y].clone();
            let sz = cand.serial_size(self.syms);
            if sz > best_size {
                best = cand;
                best_size = sz;
            }
        }
        best
    }

    fn epsilon_term(&mut self, x: VarId) -> EpsilonTerm {
        let (star_a, _) = self.star(x);
        let defining = self.defining_formula(x);
        let mut remove: HashSet<VarId> = star_a.iter().copied().collect();
        remove.insert(x);
        let body = remove_binders(&defining, &remove);
        // Present the ε-term as a binder over x so that α-normalisation
        // treats x as bound.
        let eps = Nnf::exists(x, body.clone());
        let (alpha, free) = eps.alpha_key(self.syms);
        debug_assert_eq!(
            free.iter().copied().collect::<HashSet<_>>(),
            star_a.iter().copied().collect::<HashSet<_>>(),
            "free variables of the ε-term are the transitive universal dependencies"
        );
        EpsilonTerm { bound: x, body, free, key: format!("{}{}", SKOLEM_PREFIX, alpha) }
    }
}

/// Remove quantifier nodes binding any variable in `remove`, keeping their
/// bodies. Occurrences of the variables stay.
fn remove_binders(f: &Nnf, remove: &HashSet<VarId>) -> Nnf {
    match f {
        Nnf::Lit(_) => f.clone(),
        Nnf::And(ps) => Nnf::And(ps.iter().map(|p| remove_binders(p, remove)).collect()),
        Nnf::Or(ps) => Nnf::Or(ps.iter().map(|p| remove_binders(p, remove)).collect()),
        Nnf::Forall(v, body) | Nnf::Exists(v, body) if remove.contains(v) => {
            remove_binders(body, remove)
        }
        Nnf::Forall(v, body) => Nnf::forall(*v, remove_binders(body, remove)),
        Nnf::Exists(v, body) => Nnf::exists(*v, remove_binders(body, remove)),
    }
}

/// Compute the ε-terms of every existential variable of a rectified NNF
/// formula. Exposed for inspection and testing; [`skolemize_consistent`] is
/// the pipeline entry point.
pub fn epsilon_terms(f: &Nnf, syms: &SymTable) -> Vec<EpsilonTerm> {
    let mut is_exists = HashMap::new();
    let mut delta = HashMap::new();
    record_binders(f, &mut is_exists, &mut delta);
    let mut ctx = Ctx { syms, is_exists, delta, star_memo: HashMap::new() };
    let mut xs: Vec<VarId> = ctx.delta.keys().copied().collect();
    xs.sort();
    xs.into_iter().map(|x| ctx.epsilon_term(x)).collect()
}

/// Consistent ε-Skolemisation: replace every `∃x.G` by `G[t/x]` with
/// `t = f_[εx.F](ȳ)`, then distribute universal quantifiers over
/// conjunctions so that downstream matrix building sees quantifiers only
/// over disjunctions and literals.
///
/// The serialised size of the skolemised formula is asserted to stay below
/// the square of the input size whenever any replacement happened.
pub fn skolemize_consistent(f: Nnf, syms: &mut SymTable, gen: &mut VarGen) -> Nnf {
    if !f.contains_exists() {
        return push_universals(f, gen);
    }
    let input_size = f.serial_size(syms);
    let eps = epsilon_terms(&f, syms);
    let mut terms: HashMap<VarId, Term> = HashMap::new();
    for e in &eps {
        let sym = syms.intern(&e.key, e.free.len());
        terms.insert(e.bound, Term::App(sym, e.free.iter().map(|v| Term::Var(*v)).collect()));
    }
    let replaced = strip_exists(&f, &terms);
    let output_size = replaced.serial_size(syms);
    assert!(
        (output_size as u128) < (input_size as u128) * (input_size as u128),
        "skolemised output of size {} exceeds the quadratic bound for input size {}",
        output_size,
        input_size
    );
    push_universals(replaced, gen)
}

fn strip_exists(f: &Nnf, terms: &HashMap<VarId, Term>) -> Nnf {
    match f {
        Nnf::Lit(l) => Nnf::Lit(crate::term::Lit {
            pred: l.pred,
            args: l.args.iter().map(|t| t.substitute(terms)).collect(),
        }),
        Nnf::And(ps) => Nnf::and(ps.iter().map(|p| strip_exists(p, terms)).collect()),
        Nnf::Or(ps) => Nnf::or(ps.iter().map(|p| strip_exists(p, terms)).collect()),
        Nnf::Forall(v, body) => Nnf::forall(*v, strip_exists(body, terms)),
        Nnf::Exists(_, body) => strip_exists(body, terms),
    }
}

/// Distribute `∀` over `∧` (renaming the bound variable freshly per
/// conjunct so binder identifiers stay globally distinct) and drop vacuous
/// quantifiers.
pub fn push_universals(f: Nnf, gen: &mut VarGen) -> Nnf {
    match f {
        Nnf::Lit(_) => f,
        Nnf::And(ps) => Nnf::and(ps.into_iter().map(|p| push_universals(p, gen)).collect()),
        Nnf::Or(ps) => Nnf::or(ps.into_iter().map(|p| push_universals(p, gen)).collect()),
        Nnf::Forall(v, body) => {
            let body = push_universals(*body, gen);
            if !body.has_free_var(v) {
                return body;
            }
            match body {
                Nnf::And(parts) => Nnf::and(
                    parts
                        .into_iter()
                        .map(|p| {
                            if p.has_free_var(v) {
                                let fresh = gen.fresh();
                                let mut m = HashMap::new();
                                m.insert(v, Term::Var(fresh));
                                push_universals(Nnf::forall(fresh, p.substitute(&m)), gen)
                            } else {
                                p
                            }
                        })
                        .collect(),
                ),
                other => Nnf::forall(v, other),
            }
        }
        Nnf::Exists(_, _) => unreachable!("no existential quantifiers after skolemisation"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Lit;

    fn lit(pred: i32, args: Vec<Term>) -> Nnf {
        Nnf::Lit(Lit::new(pred, args))
    }

    #[test]
    fn closed_existential_gets_nullary_skolem_constant() {
        let mut syms = SymTable::new();
        let p = syms.intern("p", 1) as i32;
        let mut gen = VarGen::starting_at(1);
        let f = Nnf::exists(0, lit(p, vec![Term::Var(0)]));
        let out = skolemize_consistent(f, &mut syms, &mut gen);
        match out {
            Nnf::Lit(l) => match &l.args[0] {
                Term::App(s, args) => {
                    assert!(args.is_empty(), "0-ary Skolem constant");
                    assert!(syms.name(*s).starts_with(SKOLEM_PREFIX));
                }
                other => panic!("expected application, got {:?}", other),
            },
            other => panic!("expected literal, got {:?}", other),
        }
    }

    /// Δ = ∀x1 ∃y1. (¬P(x1,y1) ∨ ((∀x2 ∃y2. P(x2,y2)) ∧ (∀x3 ∃y3. Q(x3,y3,y1))))
    /// — the NNF rendering of the paper-style nested dependency example.
    /// The Skolem terms for y1, y2, y3 must depend on {x1}, {x2}, {x1,x3}.
    #[test]
    fn nested_dependencies() {
        let mut syms = SymTable::new();
        let p = syms.intern("p", 2) as i32;
        let q = syms.intern("q", 3) as i32;
        let (x1, y1, x2, y2, x3, y3) = (0, 1, 2, 3, 4, 5);
        let f = Nnf::forall(
            x1,
            Nnf::exists(
                y1,
                Nnf::or(vec![
                    lit(-p, vec![Term::Var(x1), Term::Var(y1)]),
                    Nnf::and(vec![
                        Nnf::forall(x2, Nnf::exists(y2, lit(p, vec![Term::Var(x2), Term::Var(y2)]))),
                        Nnf::forall(
                            x3,
                            Nnf::exists(y3, lit(q, vec![Term::Var(x3), Term::Var(y3), Term::Var(y1)])),
                        ),
                    ]),
                ]),
            ),
        );
        let eps = epsilon_terms(&f, &syms);
        let by_var: HashMap<VarId, &EpsilonTerm> = eps.iter().map(|e| (e.bound, e)).collect();
        assert_eq!(by_var[&y1].free, vec![x1]);
        assert_eq!(by_var[&y2].free, vec![x2]);
        assert_eq!(by_var[&y3].free, vec![x1, x3]);
        // y1 and y3 share the same defining formula (Δ^{y1}); y2's is its own.
        assert_ne!(by_var[&y1].key, by_var[&y3].key);
    }

    #[test]
    fn alpha_variants_get_identical_keys() {
        let mut syms = SymTable::new();
        let p = syms.intern("p", 1) as i32;
        let build = |x: VarId, y: VarId| {
            Nnf::forall(x, Nnf::exists(y, Nnf::or(vec![lit(-p, vec![Term::Var(x)]), lit(p, vec![Term::Var(y)])])))
        };
        let a = epsilon_terms(&build(0, 1), &syms);
        let b = epsilon_terms(&build(7, 3), &syms);
        assert_eq!(a[0].key, b[0].key);
    }

    #[test]
    fn push_universals_distributes_and_renames() {
        let mut syms = SymTable::new();
        let p = syms.intern("p", 1) as i32;
        let q = syms.intern("q", 1) as i32;
        let mut gen = VarGen::starting_at(1);
        let f = Nnf::forall(0, Nnf::And(vec![lit(p, vec![Term::Var(0)]), lit(q, vec![Term::Var(0)])]));
        let out = push_universals(f, &mut gen);
        match out {
            Nnf::And(parts) => {
                let vars: Vec<VarId> = parts
                    .iter()
                    .map(|p| match p {
                        Nnf::Forall(v, _) => *v,
                        other => panic!("expected forall, got {:?}", other),
                    })
                    .collect();
                assert_ne!(vars[0], vars[1], "binders renamed apart");
            }
            other => panic!("expected conjunction, got {:?}", other),
        }
    }

    #[test]
    fn quadratic_size_bound_on_chain() {
        // ∀x3.∃x2.(¬P(x3,x3) ∨ ∃x1.(¬P(x2,x2) ∨ P(x1,x1))) — a small
        // nested chain; the bound |out| < |in|² must hold.
        let mut syms = SymTable::new();
        let p = syms.intern("p", 2) as i32;
        let f = Nnf::forall(
            3,
            Nnf::exists(
                2,
                Nnf::or(vec![
                    lit(-p, vec![Term::Var(3), Term::Var(3)]),
                    Nnf::exists(
                        1,
                        Nnf::or(vec![
                            lit(-p, vec![Term::Var(2), Term::Var(2)]),
                            lit(p, vec![Term::Var(1), Term::Var(1)]),
                        ]),
                    ),
                ]),
            ),
        );
        let input_size = f.serial_size(&syms);
        let mut gen = VarGen::starting_at(4);
        let out = skolemize_consistent(f, &mut syms, &mut gen);
        assert!(!out.contains_exists());
        assert!(out.serial_size(&syms) < input_size * input_size);
    }
}
