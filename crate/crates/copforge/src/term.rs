//! First-order terms and literals over interned integer symbols.
//!
//! Variables and symbols live in disjoint integer namespaces. Literal
//! polarity is encoded in the sign of the predicate symbol: `+s` is a
//! positive occurrence of predicate `s`, `-s` a negated one.

use std::fmt;

/// Variable identifier. Dense integers handed out by a fresh-variable counter.
pub type VarId = u32;

/// Interned function or predicate symbol. Never zero.
pub type Sym = u32;

/// Signed predicate symbol: `+s` positive, `-s` negative polarity.
pub type SignedSym = i32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(VarId),
    /// Function application; constants are 0-ary applications.
    App(Sym, Vec<Term>),
}

impl Term {
    pub fn constant(s: Sym) -> Term {
        Term::App(s, Vec::new())
    }

    /// Does `v` occur anywhere in this term?
    pub fn contains_var(&self, v: VarId) -> bool {
        match self {
            Term::Var(w) => *w == v,
            Term::App(_, args) => args.iter().any(|t| t.contains_var(v)),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<VarId>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    /// Number of symbol occurrences (variables count as one each).
    pub fn symbol_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::symbol_count).sum::<usize>(),
        }
    }

    /// Replace variables according to `map`; variables not in the map stay.
    pub fn rename(&self, map: &std::collections::HashMap<VarId, VarId>) -> Term {
        match self {
            Term::Var(v) => Term::Var(*map.get(v).unwrap_or(v)),
            Term::App(s, args) => Term::App(*s, args.iter().map(|t| t.rename(map)).collect()),
        }
    }

    /// Substitute variables by terms according to `map`.
    pub fn substitute(&self, map: &std::collections::HashMap<VarId, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(s, args) => Term::App(*s, args.iter().map(|t| t.substitute(map)).collect()),
        }
    }
}

/// A literal: signed predicate symbol applied to argument terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lit {
    pub pred: SignedSym,
    pub args: Vec<Term>,
}

impl Lit {
    pub fn new(pred: SignedSym, args: Vec<Term>) -> Lit {
        debug_assert!(pred != 0);
        Lit { pred, args }
    }

    /// The complement flips the sign of the predicate and nothing else.
    pub fn complement(&self) -> Lit {
        Lit { pred: -self.pred, args: self.args.clone() }
    }

    pub fn is_positive(&self) -> bool {
        self.pred > 0
    }

    /// Unsigned root symbol.
    pub fn root(&self) -> Sym {
        self.pred.unsigned_abs()
    }

    pub fn collect_vars(&self, out: &mut Vec<VarId>) {
        for a in &self.args {
            a.collect_vars(out);
        }
    }

    pub fn symbol_count(&self) -> usize {
        1 + self.args.iter().map(Term::symbol_count).sum::<usize>()
    }

    pub fn rename(&self, map: &std::collections::HashMap<VarId, VarId>) -> Lit {
        Lit { pred: self.pred, args: self.args.iter().map(|t| t.rename(map)).collect() }
    }
}

/// Counter handing out fresh variable identifiers.
#[derive(Debug, Clone, Default)]
pub struct VarGen {
    next: VarId,
}

impl VarGen {
    pub fn new() -> VarGen {
        VarGen { next: 0 }
    }

    pub fn starting_at(next: VarId) -> VarGen {
        VarGen { next }
    }

    pub fn fresh(&mut self) -> VarId {
        let v = self.next;
        self.next += 1;
        v
    }

    pub fn peek(&self) -> VarId {
        self.next
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "_{}", v),
            Term::App(s, args) => {
                write!(f, "f{}", s)?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", a)?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_flips_sign_only() {
        let l = Lit::new(3, vec![Term::Var(0)]);
        let c = l.complement();
        assert_eq!(c.pred, -3);
        assert_eq!(c.args, l.args);
        assert_eq!(c.complement(), l);
    }

    #[test]
    fn occurs_check_helper() {
        let t = Term::App(1, vec![Term::App(2, vec![Term::Var(7)])]);
        assert!(t.contains_var(7));
        assert!(!t.contains_var(8));
    }

    #[test]
    fn symbol_count_counts_occurrences() {
        // p(x, f(a)) has p, x, f, a = 4 occurrences
        let l = Lit::new(1, vec![Term::Var(0), Term::App(2, vec![Term::constant(3)])]);
        assert_eq!(l.symbol_count(), 4);
    }
}
