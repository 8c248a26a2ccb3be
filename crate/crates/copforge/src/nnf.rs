//! Negation normal form formulas over interned symbols.
//!
//! After preprocessing, negation occurs only on atoms (encoded in the
//! literal sign), `And`/`Or` are n-ary and flattened, and quantifiers bind
//! one variable each. Existential quantifiers disappear after
//! Skolemisation.

use std::collections::HashMap;

use crate::symtab::SymTable;
use crate::term::{Lit, Term, VarId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nnf {
    Lit(Lit),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Forall(VarId, Box<Nnf>),
    Exists(VarId, Box<Nnf>),
}

impl Nnf {
    /// Flattening conjunction constructor.
    pub fn and(parts: Vec<Nnf>) -> Nnf {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Nnf::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Nnf::And(out)
        }
    }

    /// Flattening disjunction constructor.
    pub fn or(parts: Vec<Nnf>) -> Nnf {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Nnf::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        if out.len() == 1 {
            out.pop().unwrap()
        } else {
            Nnf::Or(out)
        }
    }

    pub fn forall(v: VarId, body: Nnf) -> Nnf {
        Nnf::Forall(v, Box::new(body))
    }

    pub fn exists(v: VarId, body: Nnf) -> Nnf {
        Nnf::Exists(v, Box::new(body))
    }

    /// Free variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<VarId> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.free_vars_into(&mut bound, &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<VarId>, out: &mut Vec<VarId>) {
        match self {
            Nnf::Lit(l) => {
                let mut vs = Vec::new();
                l.collect_vars(&mut vs);
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
            Nnf::And(ps) | Nnf::Or(ps) => {
                for p in ps {
                    p.free_vars_into(bound, out);
                }
            }
            Nnf::Forall(v, body) | Nnf::Exists(v, body) => {
                bound.push(*v);
                body.free_vars_into(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free_var(&self, v: VarId) -> bool {
        self.free_vars().contains(&v)
    }

    pub fn contains_exists(&self) -> bool {
        match self {
            Nnf::Lit(_) => false,
            Nnf::And(ps) | Nnf::Or(ps) => ps.iter().any(Nnf::contains_exists),
            Nnf::Forall(_, body) => body.contains_exists(),
            Nnf::Exists(_, _) => true,
        }
    }

    /// Number of paths through the formula under the matrix reading:
    /// `paths(literal) = 1`, `paths(∧) = Σ`, `paths(∨) = Π`; quantifiers are
    /// transparent. Saturating to avoid overflow on adversarial inputs.
    pub fn path_count(&self) -> u128 {
        match self {
            Nnf::Lit(_) => 1,
            Nnf::And(ps) => ps.iter().fold(0u128, |acc, p| acc.saturating_add(p.path_count())),
            Nnf::Or(ps) => ps.iter().fold(1u128, |acc, p| acc.saturating_mul(p.path_count())),
            Nnf::Forall(_, body) | Nnf::Exists(_, body) => body.path_count(),
        }
    }

    /// Substitute terms for variables (capture is the caller's problem; used
    /// only with fresh replacement terms).
    pub fn substitute(&self, map: &HashMap<VarId, Term>) -> Nnf {
        match self {
            Nnf::Lit(l) => Nnf::Lit(Lit {
                pred: l.pred,
                args: l.args.iter().map(|t| t.substitute(map)).collect(),
            }),
            Nnf::And(ps) => Nnf::And(ps.iter().map(|p| p.substitute(map)).collect()),
            Nnf::Or(ps) => Nnf::Or(ps.iter().map(|p| p.substitute(map)).collect()),
            Nnf::Forall(v, body) => Nnf::forall(*v, body.substitute(map)),
            Nnf::Exists(v, body) => Nnf::exists(*v, body.substitute(map)),
        }
    }

    /// Serialised size: the length of the canonical string rendering, with
    /// symbols printed by name.
    pub fn serial_size(&self, syms: &SymTable) -> usize {
        self.render(syms).len()
    }

    /// Canonical rendering with symbol names and raw variable ids.
    pub fn render(&self, syms: &SymTable) -> String {
        let mut out = String::new();
        self.render_into(syms, &mut out);
        out
    }

    fn render_into(&self, syms: &SymTable, out: &mut String) {
        match self {
            Nnf::Lit(l) => {
                if !l.is_positive() {
                    out.push('~');
                }
                out.push_str(syms.name(l.root()));
                if !l.args.is_empty() {
                    out.push('(');
                    for (i, a) in l.args.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        render_term(a, syms, out);
                    }
                    out.push(')');
                }
            }
            Nnf::And(ps) => {
                out.push('(');
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        out.push('&');
                    }
                    p.render_into(syms, out);
                }
                out.push(')');
            }
            Nnf::Or(ps) => {
                out.push('(');
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        out.push('|');
                    }
                    p.render_into(syms, out);
                }
                out.push(')');
            }
            Nnf::Forall(v, body) => {
                out.push_str(&format!("![X{}]:", v));
                body.render_into(syms, out);
            }
            Nnf::Exists(v, body) => {
                out.push_str(&format!("?[X{}]:", v));
                body.render_into(syms, out);
            }
        }
    }

    /// Canonical string with variables positionally renamed so that
    /// α-equivalent formulas render identically: bound variables are
    /// numbered in order of binder occurrence, free variables in order of
    /// first occurrence.
    pub fn alpha_string(&self, syms: &SymTable) -> String {
        let mut out = String::new();
        let mut bound = HashMap::new();
        let mut free = HashMap::new();
        let mut next_bound = 0usize;
        self.alpha_into(syms, &mut bound, &mut free, &mut next_bound, &mut out);
        out
    }

    /// Like [`Nnf::alpha_string`], additionally returning the free
    /// variables in the order their positional indices were assigned
    /// (first occurrence in the canonical traversal).
    pub fn alpha_key(&self, syms: &SymTable) -> (String, Vec<VarId>) {
        let mut out = String::new();
        let mut bound = HashMap::new();
        let mut free = HashMap::new();
        let mut next_bound = 0usize;
        self.alpha_into(syms, &mut bound, &mut free, &mut next_bound, &mut out);
        let mut order: Vec<(usize, VarId)> = free.into_iter().map(|(v, i)| (i, v)).collect();
        order.sort();
        (out, order.into_iter().map(|(_, v)| v).collect())
    }

    fn alpha_into(
        &self,
        syms: &SymTable,
        bound: &mut HashMap<VarId, usize>,
        free: &mut HashMap<VarId, usize>,
        next_bound: &mut usize,
        out: &mut String,
    ) {
        match self {
            Nnf::Lit(l) => {
                if !l.is_positive() {
                    out.push('~');
                }
                out.push_str(syms.name(l.root()));
                if !l.args.is_empty() {
                    out.push('(');
                    for (i, a) in l.args.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        alpha_term(a, syms, bound, free, out);
                    }
                    out.push(')');
                }
            }
            Nnf::And(ps) => {
                out.push('(');
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        out.push('&');
                    }
                    p.alpha_into(syms, bound, free, next_bound, out);
                }
                out.push(')');
            }
            Nnf::Or(ps) => {
                out.push('(');
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        out.push('|');
                    }
                    p.alpha_into(syms, bound, free, next_bound, out);
                }
                out.push(')');
            }
            Nnf::Forall(v, body) | Nnf::Exists(v, body) => {
                out.push(if matches!(self, Nnf::Forall(_, _)) { '!' } else { '?' });
                let idx = *next_bound;
                *next_bound += 1;
                out.push_str(&format!("[b{}]:", idx));
                let shadowed = bound.insert(*v, idx);
                body.alpha_into(syms, bound, free, next_bound, out);
                match shadowed {
                    Some(old) => {
                        bound.insert(*v, old);
                    }
                    None => {
                        bound.remove(v);
                    }
                }
            }
        }
    }
}

fn render_term(t: &Term, syms: &SymTable, out: &mut String) {
    match t {
        Term::Var(v) => out.push_str(&format!("X{}", v)),
        Term::App(s, args) => {
            out.push_str(syms.name(*s));
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    render_term(a, syms, out);
                }
                out.push(')');
            }
        }
    }
}

fn alpha_term(
    t: &Term,
    syms: &SymTable,
    bound: &HashMap<VarId, usize>,
    free: &mut HashMap<VarId, usize>,
    out: &mut String,
) {
    match t {
        Term::Var(v) => match bound.get(v) {
            Some(idx) => out.push_str(&format!("b{}", idx)),
            None => {
                let n = free.len();
                let idx = *free.entry(*v).or_insert(n);
                out.push_str(&format!("f{}", idx));
            }
        },
        Term::App(s, args) => {
            out.push_str(syms.name(*s));
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    alpha_term(a, syms, bound, free, out);
                }
                out.push(')');
            }
        }
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
    fn path_counts_follow_spec_reading() {
        // Flat clause [p, q] read as ∨: paths = 1·1 = 1
        let clause = Nnf::or(vec![lit(3, vec![]), lit(4, vec![])]);
        assert_eq!(clause.path_count(), 1);
        // Matrix of two flat clauses read as ∧: paths = 1 + 1 = 2
        let m = Nnf::and(vec![clause.clone(), lit(5, vec![])]);
        assert_eq!(m.path_count(), 2);
    }

    #[test]
    fn alpha_string_invariant_under_renaming() {
        let syms = {
            let mut t = SymTable::new();
            t.intern("p", 1);
            t
        };
        let p = syms.lookup("p", 1).unwrap() as i32;
        let f1 = Nnf::exists(3, lit(p, vec![Term::Var(3)]));
        let f2 = Nnf::exists(9, lit(p, vec![Term::Var(9)]));
        assert_eq!(f1.alpha_string(&syms), f2.alpha_string(&syms));
        let g = Nnf::exists(3, lit(-p, vec![Term::Var(3)]));
        assert_ne!(f1.alpha_string(&syms), g.alpha_string(&syms));
    }

    #[test]
    fn free_vars_in_first_occurrence_order() {
        let f = Nnf::or(vec![lit(3, vec![Term::Var(5), Term::Var(2)]), lit(3, vec![Term::Var(5), Term::Var(7)])]);
        assert_eq!(f.free_vars(), vec![5, 2, 7]);
    }
}
