//! Symbol interning: bidirectional map between source names and integer
//! symbols.
//!
//! Interning is keyed by `(name, arity)`, so the same name with two
//! different arities yields two distinct symbols. Symbol 0 is never handed
//! out; variable identifiers live in a separate namespace entirely.

use std::collections::HashMap;

use crate::term::Sym;

/// Reserved name of the conjecture marker predicate (a nullary predicate
/// that behaves like verum).
pub const MARKER_NAME: &str = "#";

/// Reserved name of the equality predicate.
pub const EQ_NAME: &str = "=";

/// Prefix of the reserved namespace for constants invented during LK
/// translation when a variable is unbound in the final substitution.
pub const FREE_CONST_PREFIX: &str = "_sk_free_";

#[derive(Debug, Clone)]
struct SymInfo {
    name: String,
    arity: usize,
}

/// Bidirectional name/arity to symbol table.
#[derive(Debug, Clone)]
pub struct SymTable {
    by_key: HashMap<(String, usize), Sym>,
    info: Vec<SymInfo>,
    marker: Sym,
    equality: Sym,
}

impl Default for SymTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymTable {
    pub fn new() -> SymTable {
        let mut t = SymTable {
            by_key: HashMap::new(),
            info: Vec::new(),
            marker: 0,
            equality: 0,
        };
        t.marker = t.intern(MARKER_NAME, 0);
        t.equality = t.intern(EQ_NAME, 2);
        t
    }

    /// Intern `(name, arity)`, returning the existing symbol when already
    /// present.
    pub fn intern(&mut self, name: &str, arity: usize) -> Sym {
        if let Some(&s) = self.by_key.get(&(name.to_string(), arity)) {
            return s;
        }
        self.info.push(SymInfo { name: name.to_string(), arity });
        let s = self.info.len() as Sym; // ids start at 1
        self.by_key.insert((name.to_string(), arity), s);
        s
    }

    pub fn lookup(&self, name: &str, arity: usize) -> Option<Sym> {
        self.by_key.get(&(name.to_string(), arity)).copied()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.info[(s - 1) as usize].name
    }

    pub fn arity(&self, s: Sym) -> usize {
        self.info[(s - 1) as usize].arity
    }

    pub fn marker(&self) -> Sym {
        self.marker
    }

    pub fn equality(&self) -> Sym {
        self.equality
    }

    /// Number of interned symbols.
    pub fn len(&self) -> usize {
        self.info.len()
    }

    pub fn is_empty(&self) -> bool {
        self.info.is_empty()
    }

    /// Iterate over all symbols as `(sym, name, arity)`.
    pub fn iter(&self) -> impl Iterator<Item = (Sym, &str, usize)> {
        self.info
            .iter()
            .enumerate()
            .map(|(i, si)| ((i + 1) as Sym, si.name.as_str(), si.arity))
    }

    /// Intern a fresh constant from the reserved `_sk_free_` namespace.
    pub fn fresh_free_constant(&mut self, n: usize) -> Sym {
        self.intern(&format!("{}{}", FREE_CONST_PREFIX, n), 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_injective_per_name_arity() {
        let mut t = SymTable::new();
        let p1 = t.intern("p", 1);
        let p2 = t.intern("p", 2);
        let p1b = t.intern("p", 1);
        assert_eq!(p1, p1b);
        assert_ne!(p1, p2);
        assert_eq!(t.name(p1), "p");
        assert_eq!(t.arity(p2), 2);
    }

    #[test]
    fn zero_is_never_a_symbol() {
        let mut t = SymTable::new();
        let s = t.intern("q", 0);
        assert!(s > 0);
        assert!(t.marker() > 0);
        assert!(t.equality() > 0);
    }
}
