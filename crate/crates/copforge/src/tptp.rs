//! TPTP FOF frontend: parse a first-order subset of the TPTP language into
//! a problem of named axioms plus at most one conjecture.
//!
//! Supported syntax: `fof(name, role, formula).` statements, `include`
//! directives, `%` line comments, the connectives `~ & | => <=>`, the
//! quantifiers `! [X,..] :` and `? [X,..] :`, equality `=` / disequality
//! `!=`, and the constants `$true` / `$false`. Everything else (CNF/TFF/THF,
//! arithmetic, exotic roles) is out of scope.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};

/// Term of the surface syntax: variables are upper-case names, function
/// applications lower-case or quoted names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RawTerm {
    Var(String),
    App(String, Vec<RawTerm>),
}

/// Formula of the surface syntax. `And`/`Or` are n-ary after flattening;
/// `Imp`/`Iff` are binary; `Neg` unary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawFormula {
    True,
    False,
    Atom(String, Vec<RawTerm>),
    Eq(RawTerm, RawTerm),
    Neg(Box<RawFormula>),
    And(Vec<RawFormula>),
    Or(Vec<RawFormula>),
    Imp(Box<RawFormula>, Box<RawFormula>),
    Iff(Box<RawFormula>, Box<RawFormula>),
    Forall(String, Box<RawFormula>),
    Exists(String, Box<RawFormula>),
}

impl RawFormula {
    pub fn neg(f: RawFormula) -> RawFormula {
        RawFormula::Neg(Box::new(f))
    }

    /// n-ary conjunction with flattening of nested `And`s.
    pub fn and(parts: Vec<RawFormula>) -> RawFormula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                RawFormula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            1 => out.pop().unwrap(),
            _ => RawFormula::And(out),
        }
    }

    /// n-ary disjunction with flattening of nested `Or`s.
    pub fn or(parts: Vec<RawFormula>) -> RawFormula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                RawFormula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            1 => out.pop().unwrap(),
            _ => RawFormula::Or(out),
        }
    }
}

/// A named input formula together with its TPTP role.
#[derive(Debug, Clone)]
pub struct NamedFormula {
    pub name: String,
    pub role: String,
    pub formula: RawFormula,
}

/// A parsed problem: axioms in input order plus an optional conjecture.
#[derive(Debug, Clone, Default)]
pub struct Problem {
    pub axioms: Vec<NamedFormula>,
    pub conjecture: Option<NamedFormula>,
}

/// Parse error with source position.
#[derive(Debug, Clone)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub col: usize,
    pub file: Option<PathBuf>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.file {
            Some(p) => write!(f, "{}:{}:{}: {}", p.display(), self.line, self.col, self.message),
            None => write!(f, "{}:{}: {}", self.line, self.col, self.message),
        }
    }
}

impl std::error::Error for ParseError {}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Dollar(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,    // =>
    DblArrow, // <=>
    Eq,
    Neq, // !=
    Bang,
    Question,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Lower(w) | Tok::Upper(w) => return write!(f, "'{}'", w),
            Tok::Dollar(w) => return write!(f, "'${}'", w),
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Arrow => "=>",
            Tok::DblArrow => "<=>",
            Tok::Eq => "=",
            Tok::Neq => "!=",
            Tok::Bang => "!",
            Tok::Question => "?",
            Tok::Eof => "end of input",
        };
        write!(f, "'{}'", s)
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(b' ') | Some(b'\t') | Some(b'\r') | Some(b'\n') => {
                    self.bump();
                }
                Some(b'%') => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { message: msg.into(), line: self.line, col: self.col, file: None })
    }

    fn next_tok(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        self.skip_ws();
        let (line, col) = (self.line, self.col);
        let c = match self.peek() {
            None => return Ok((Tok::Eof, line, col)),
            Some(c) => c,
        };
        let tok = match c {
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b'[' => {
                self.bump();
                Tok::LBracket
            }
            b']' => {
                self.bump();
                Tok::RBracket
            }
            b',' => {
                self.bump();
                Tok::Comma
            }
            b':' => {
                self.bump();
                Tok::Colon
            }
            b'.' => {
                self.bump();
                Tok::Dot
            }
            b'~' => {
                self.bump();
                Tok::Tilde
            }
            b'&' => {
                self.bump();
                Tok::Amp
            }
            b'|' => {
                self.bump();
                Tok::Bar
            }
            b'=' => {
                self.bump();
                if self.peek() == Some(b'>') {
                    self.bump();
                    Tok::Arrow
                } else {
                    Tok::Eq
                }
            }
            b'<' => {
                self.bump();
                if self.peek() == Some(b'=') {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        Tok::DblArrow
                    } else {
                        return self.err("expected '<=>'");
                    }
                } else {
                    return self.err("expected '<=>'");
                }
            }
            b'!' => {
                self.bump();
                if self.peek() == Some(b'=') {
                    self.bump();
                    Tok::Neq
                } else {
                    Tok::Bang
                }
            }
            b'?' => {
                self.bump();
                Tok::Question
            }
            b'$' => {
                self.bump();
                let w = self.lex_word()?;
                Tok::Dollar(w)
            }
            b'\'' => {
                self.bump();
                let mut w = String::new();
                loop {
                    match self.bump() {
                        Some(b'\'') => break,
                        Some(b'\\') => match self.bump() {
                            Some(c2) => w.push(c2 as char),
                            None => return self.err("unterminated quoted name"),
                        },
                        Some(c2) => w.push(c2 as char),
                        None => return self.err("unterminated quoted name"),
                    }
                }
                Tok::Lower(w)
            }
            b'a'..=b'z' | b'0'..=b'9' => Tok::Lower(self.lex_word()?),
            b'A'..=b'Z' | b'_' => Tok::Upper(self.lex_word()?),
            other => return self.err(format!("unexpected character '{}'", other as char)),
        };
        Ok((tok, line, col))
    }

    fn lex_word(&mut self) -> Result<String, ParseError> {
        let mut w = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == b'_' {
                w.push(c as char);
                self.bump();
            } else {
                break;
            }
        }
        if w.is_empty() {
            return self.err("expected a name");
        }
        Ok(w)
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Parser<'a>, ParseError> {
        let mut lexer = Lexer::new(src);
        let (tok, line, col) = lexer.next_tok()?;
        Ok(Parser { lexer, tok, line, col })
    }

    fn advance(&mut self) -> Result<(), ParseError> {
        let (tok, line, col) = self.lexer.next_tok()?;
        self.tok = tok;
        self.line = line;
        self.col = col;
        Ok(())
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { message: msg.into(), line: self.line, col: self.col, file: None })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.tok == tok {
            self.advance()
        } else {
            self.err(format!("expected {}, found {}", tok, self.tok))
        }
    }

    /// One top-level statement: either an `fof` formula or an `include`.
    fn statement(&mut self) -> Result<Statement, ParseError> {
        match &self.tok {
            Tok::Lower(w) if w == "fof" => {
                self.advance()?;
                self.expect(Tok::LParen)?;
                let name = self.name()?;
                self.expect(Tok::Comma)?;
                let role = self.name()?;
                self.expect(Tok::Comma)?;
                let formula = self.formula()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(Statement::Formula(NamedFormula { name, role, formula }))
            }
            Tok::Lower(w) if w == "include" => {
                self.advance()?;
                self.expect(Tok::LParen)?;
                let path = self.name()?;
                // Optional selection list is accepted and ignored.
                if self.tok == Tok::Comma {
                    self.advance()?;
                    self.expect(Tok::LBracket)?;
                    loop {
                        self.name()?;
                        if self.tok == Tok::Comma {
                            self.advance()?;
                        } else {
                            break;
                        }
                    }
                    self.expect(Tok::RBracket)?;
                }
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(Statement::Include(path))
            }
            Tok::Eof => Ok(Statement::Eof),
            other => self.err(format!("expected 'fof' or 'include', found {}", other)),
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        match self.tok.clone() {
            Tok::Lower(w) | Tok::Upper(w) => {
                self.advance()?;
                Ok(w)
            }
            other => self.err(format!("expected a name, found {}", other)),
        }
    }

    /// Formula with TPTP binary-connective rules: `&` and `|` chains
    /// associate with themselves, `=>` and `<=>` are non-associative, and
    /// distinct connectives must be disambiguated with parentheses.
    fn formula(&mut self) -> Result<RawFormula, ParseError> {
        let first = self.unitary()?;
        match self.tok {
            Tok::Amp => {
                let mut parts = vec![first];
                while self.tok == Tok::Amp {
                    self.advance()?;
                    parts.push(self.unitary()?);
                }
                if matches!(self.tok, Tok::Bar | Tok::Arrow | Tok::DblArrow) {
                    return self.err("mixed binary connectives need parentheses");
                }
                Ok(RawFormula::and(parts))
            }
            Tok::Bar => {
                let mut parts = vec![first];
                while self.tok == Tok::Bar {
                    self.advance()?;
                    parts.push(self.unitary()?);
                }
                if matches!(self.tok, Tok::Amp | Tok::Arrow | Tok::DblArrow) {
                    return self.err("mixed binary connectives need parentheses");
                }
                Ok(RawFormula::or(parts))
            }
            Tok::Arrow => {
                self.advance()?;
                let rhs = self.unitary()?;
                if matches!(self.tok, Tok::Amp | Tok::Bar | Tok::Arrow | Tok::DblArrow) {
                    return self.err("'=>' is non-associative; use parentheses");
                }
                Ok(RawFormula::Imp(Box::new(first), Box::new(rhs)))
            }
            Tok::DblArrow => {
                self.advance()?;
                let rhs = self.unitary()?;
                if matches!(self.tok, Tok::Amp | Tok::Bar | Tok::Arrow | Tok::DblArrow) {
                    return self.err("'<=>' is non-associative; use parentheses");
                }
                Ok(RawFormula::Iff(Box::new(first), Box::new(rhs)))
            }
            _ => Ok(first),
        }
    }

    fn unitary(&mut self) -> Result<RawFormula, ParseError> {
        match self.tok.clone() {
            Tok::Tilde => {
                self.advance()?;
                Ok(RawFormula::neg(self.unitary()?))
            }
            Tok::Bang | Tok::Question => {
                let exists = self.tok == Tok::Question;
                self.advance()?;
                self.expect(Tok::LBracket)?;
                let mut vars = Vec::new();
                loop {
                    match self.tok.clone() {
                        Tok::Upper(v) => {
                            vars.push(v);
                            self.advance()?;
                        }
                        other => return self.err(format!("expected a variable, found {}", other)),
                    }
                    if self.tok == Tok::Comma {
                        self.advance()?;
                    } else {
                        break;
                    }
                }
                self.expect(Tok::RBracket)?;
                self.expect(Tok::Colon)?;
                let mut body = self.unitary()?;
                for v in vars.into_iter().rev() {
                    body = if exists {
                        RawFormula::Exists(v, Box::new(body))
                    } else {
                        RawFormula::Forall(v, Box::new(body))
                    };
                }
                Ok(body)
            }
            Tok::LParen => {
                self.advance()?;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Dollar(w) => {
                self.advance()?;
                match w.as_str() {
                    "true" => Ok(RawFormula::True),
                    "false" => Ok(RawFormula::False),
                    other => self.err(format!("unsupported defined formula '${}'", other)),
                }
            }
            Tok::Lower(_) | Tok::Upper(_) => {
                let t = self.term()?;
                match self.tok {
                    Tok::Eq => {
                        self.advance()?;
                        let rhs = self.term()?;
                        Ok(RawFormula::Eq(t, rhs))
                    }
                    Tok::Neq => {
                        self.advance()?;
                        let rhs = self.term()?;
                        Ok(RawFormula::neg(RawFormula::Eq(t, rhs)))
                    }
                    _ => match t {
                        RawTerm::App(name, args) => Ok(RawFormula::Atom(name, args)),
                        RawTerm::Var(_) => self.err("a variable is not a formula"),
                    },
                }
            }
            other => self.err(format!("expected a formula, found {}", other)),
        }
    }

    fn term(&mut self) -> Result<RawTerm, ParseError> {
        match self.tok.clone() {
            Tok::Upper(v) => {
                self.advance()?;
                Ok(RawTerm::Var(v))
            }
            Tok::Lower(name) => {
                self.advance()?;
                if self.tok == Tok::LParen {
                    self.advance()?;
                    let mut args = Vec::new();
                    loop {
                        args.push(self.term()?);
                        if self.tok == Tok::Comma {
                            self.advance()?;
                        } else {
                            break;
                        }
                    }
                    self.expect(Tok::RParen)?;
                    Ok(RawTerm::App(name, args))
                } else {
                    Ok(RawTerm::App(name, Vec::new()))
                }
            }
            other => self.err(format!("expected a term, found {}", other)),
        }
    }
}

enum Statement {
    Formula(NamedFormula),
    Include(String),
    Eof,
}

// ---------------------------------------------------------------------------
// Problem assembly
// ---------------------------------------------------------------------------

fn attach_file(mut e: ParseError, file: Option<&Path>) -> ParseError {
    if e.file.is_none() {
        e.file = file.map(|p| p.to_path_buf());
    }
    e
}

/// Parse TPTP text into a [`Problem`]. Include directives are resolved
/// against `include_dirs` in order.
pub fn parse_problem(text: &str, include_dirs: &[PathBuf]) -> Result<Problem, ParseError> {
    let mut problem = Problem::default();
    parse_into(text, None, include_dirs, &mut problem, &mut HashSet::new())?;
    Ok(problem)
}

/// Parse a problem file, resolving includes against the file's own directory
/// followed by `include_dirs`.
pub fn parse_problem_file(path: &Path, include_dirs: &[PathBuf]) -> Result<Problem, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError {
        message: format!("cannot read file: {}", e),
        line: 0,
        col: 0,
        file: Some(path.to_path_buf()),
    })?;
    let mut dirs = Vec::new();
    if let Some(parent) = path.parent() {
        dirs.push(parent.to_path_buf());
    }
    dirs.extend(include_dirs.iter().cloned());
    let mut problem = Problem::default();
    parse_into(&text, Some(path), &dirs, &mut problem, &mut HashSet::new())?;
    Ok(problem)
}

fn parse_into(
    text: &str,
    file: Option<&Path>,
    include_dirs: &[PathBuf],
    problem: &mut Problem,
    seen_includes: &mut HashSet<PathBuf>,
) -> Result<(), ParseError> {
    let mut parser = Parser::new(text).map_err(|e| attach_file(e, file))?;
    loop {
        let stmt = parser.statement().map_err(|e| attach_file(e, file))?;
        match stmt {
            Statement::Eof => return Ok(()),
            Statement::Include(rel) => {
                let resolved = include_dirs
                    .iter()
                    .map(|d| d.join(&rel))
                    .find(|p| p.exists())
                    .ok_or_else(|| ParseError {
                        message: format!("cannot resolve include '{}'", rel),
                        line: parser.line,
                        col: parser.col,
                        file: file.map(|p| p.to_path_buf()),
                    })?;
                if !seen_includes.insert(resolved.clone()) {
                    continue; // already loaded
                }
                let sub = std::fs::read_to_string(&resolved).map_err(|e| ParseError {
                    message: format!("cannot read include: {}", e),
                    line: parser.line,
                    col: parser.col,
                    file: Some(resolved.clone()),
                })?;
                parse_into(&sub, Some(&resolved), include_dirs, problem, seen_includes)?;
            }
            Statement::Formula(nf) => {
                check_closed(&nf.formula, &mut Vec::new()).map_err(|v| ParseError {
                    message: format!("unbound variable '{}' in formula '{}'", v, nf.name),
                    line: parser.line,
                    col: parser.col,
                    file: file.map(|p| p.to_path_buf()),
                })?;
                if nf.role == "conjecture" {
                    if problem.conjecture.is_some() {
                        return Err(ParseError {
                            message: format!("duplicate conjecture '{}'", nf.name),
                            line: parser.line,
                            col: parser.col,
                            file: file.map(|p| p.to_path_buf()),
                        });
                    }
                    problem.conjecture = Some(nf);
                } else {
                    problem.axioms.push(nf);
                }
            }
        }
    }
}

fn check_closed(f: &RawFormula, bound: &mut Vec<String>) -> Result<(), String> {
    match f {
        RawFormula::True | RawFormula::False => Ok(()),
        RawFormula::Atom(_, args) => args.iter().try_for_each(|t| check_term(t, bound)),
        RawFormula::Eq(a, b) => {
            check_term(a, bound)?;
            check_term(b, bound)
        }
        RawFormula::Neg(g) => check_closed(g, bound),
        RawFormula::And(ps) | RawFormula::Or(ps) => {
            ps.iter().try_for_each(|p| check_closed(p, bound))
        }
        RawFormula::Imp(a, b) | RawFormula::Iff(a, b) => {
            check_closed(a, bound)?;
            check_closed(b, bound)
        }
        RawFormula::Forall(v, g) | RawFormula::Exists(v, g) => {
            bound.push(v.clone());
            let r = check_closed(g, bound);
            bound.pop();
            r
        }
    }
}

fn check_term(t: &RawTerm, bound: &[String]) -> Result<(), String> {
    match t {
        RawTerm::Var(v) => {
            if bound.iter().any(|b| b == v) {
                Ok(())
            } else {
                Err(v.clone())
            }
        }
        RawTerm::App(_, args) => args.iter().try_for_each(|a| check_term(a, bound)),
    }
}

// ---------------------------------------------------------------------------
// Pretty printer
// ---------------------------------------------------------------------------

fn needs_quotes(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
        _ => true,
    }
}

fn print_name(name: &str, out: &mut String) {
    if needs_quotes(name) {
        out.push('\'');
        for c in name.chars() {
            if c == '\'' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('\'');
    } else {
        out.push_str(name);
    }
}

pub fn print_term(t: &RawTerm, out: &mut String) {
    match t {
        RawTerm::Var(v) => out.push_str(v),
        RawTerm::App(name, args) => {
            print_name(name, out);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    print_term(a, out);
                }
                out.push(')');
            }
        }
    }
}

/// Print a formula in parseable TPTP syntax. Sub-formulas are parenthesised
/// wherever TPTP's non-associativity rules require it.
pub fn print_formula(f: &RawFormula, out: &mut String) {
    match f {
        RawFormula::True => out.push_str("$true"),
        RawFormula::False => out.push_str("$false"),
        RawFormula::Atom(name, args) => print_term(&RawTerm::App(name.clone(), args.clone()), out),
        RawFormula::Eq(a, b) => {
            print_term(a, out);
            out.push_str(" = ");
            print_term(b, out);
        }
        RawFormula::Neg(g) => {
            out.push('~');
            print_unitary(g, out);
        }
        RawFormula::And(ps) => print_assoc(ps, " & ", out),
        RawFormula::Or(ps) => print_assoc(ps, " | ", out),
        RawFormula::Imp(a, b) => {
            print_unitary(a, out);
            out.push_str(" => ");
            print_unitary(b, out);
        }
        RawFormula::Iff(a, b) => {
            print_unitary(a, out);
            out.push_str(" <=> ");
            print_unitary(b, out);
        }
        RawFormula::Forall(_, _) | RawFormula::Exists(_, _) => {
            let mut vars = Vec::new();
            let mut g = f;
            let exists = matches!(f, RawFormula::Exists(_, _));
            loop {
                match g {
                    RawFormula::Forall(v, body) if !exists => {
                        vars.push(v.clone());
                        g = body;
                    }
                    RawFormula::Exists(v, body) if exists => {
                        vars.push(v.clone());
                        g = body;
                    }
                    _ => break,
                }
            }
            out.push(if exists { '?' } else { '!' });
            out.push('[');
            out.push_str(&vars.join(","));
            out.push_str("]: ");
            print_unitary(g, out);
        }
    }
}

fn print_assoc(ps: &[RawFormula], sep: &str, out: &mut String) {
    for (i, p) in ps.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        print_unitary(p, out);
    }
}

fn print_unitary(f: &RawFormula, out: &mut String) {
    let atomic = matches!(
        f,
        RawFormula::True
            | RawFormula::False
            | RawFormula::Atom(_, _)
            | RawFormula::Eq(_, _)
            | RawFormula::Neg(_)
            | RawFormula::Forall(_, _)
            | RawFormula::Exists(_, _)
    );
    if atomic {
        print_formula(f, out);
    } else {
        out.push('(');
        print_formula(f, out);
        out.push(')');
    }
}

/// Render a whole problem as TPTP text.
pub fn print_problem(p: &Problem) -> String {
    let mut out = String::new();
    for a in &p.axioms {
        out.push_str("fof(");
        print_name(&a.name, &mut out);
        out.push_str(", ");
        out.push_str(&a.role);
        out.push_str(", ");
        print_formula(&a.formula, &mut out);
        out.push_str(").\n");
    }
    if let Some(c) = &p.conjecture {
        out.push_str("fof(");
        print_name(&c.name, &mut out);
        out.push_str(", conjecture, ");
        print_formula(&c.formula, &mut out);
        out.push_str(").\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_statement_parse() {
        let p = parse_problem("fof(a, axiom, p(a)).", &[]).unwrap();
        assert_eq!(p.axioms.len(), 1);
        assert!(p.conjecture.is_none());
        assert_eq!(p.axioms[0].formula, RawFormula::Atom("p".into(), vec![RawTerm::App("a".into(), vec![])]));
    }

    #[test]
    fn tautology_conjecture() {
        let p = parse_problem("fof(c, conjecture, ![X]: (p(X) => p(X))).", &[]).unwrap();
        let c = p.conjecture.unwrap();
        match c.formula {
            RawFormula::Forall(v, body) => {
                assert_eq!(v, "X");
                match *body {
                    RawFormula::Imp(a, b) => assert_eq!(a, b),
                    other => panic!("expected implication, got {:?}", other),
                }
            }
            other => panic!("expected forall, got {:?}", other),
        }
    }

    #[test]
    fn duplicate_conjecture_rejected() {
        let r = parse_problem("fof(a, conjecture, p). fof(b, conjecture, q).", &[]);
        assert!(r.is_err());
        assert!(r.unwrap_err().message.contains("duplicate conjecture"));
    }

    #[test]
    fn syntax_error_has_position() {
        let r = parse_problem("fof(a, axiom,\n  p(a) & ).", &[]);
        let e = r.unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.col > 0);
    }

    #[test]
    fn unbound_variable_rejected() {
        let r = parse_problem("fof(a, axiom, p(X)).", &[]);
        assert!(r.unwrap_err().message.contains("unbound variable"));
    }

    #[test]
    fn mixed_connectives_need_parens() {
        assert!(parse_problem("fof(a, axiom, p & q | r).", &[]).is_err());
        assert!(parse_problem("fof(a, axiom, (p & q) | r).", &[]).is_ok());
    }

    #[test]
    fn disequality_is_negated_equality() {
        let p = parse_problem("fof(a, axiom, a != b).", &[]).unwrap();
        match &p.axioms[0].formula {
            RawFormula::Neg(inner) => assert!(matches!(**inner, RawFormula::Eq(_, _))),
            other => panic!("expected negated equality, got {:?}", other),
        }
    }

    #[test]
    fn roles_other_than_conjecture_are_axioms() {
        let p = parse_problem("fof(h, hypothesis, p). fof(l, lemma, q).", &[]).unwrap();
        assert_eq!(p.axioms.len(), 2);
    }

    #[test]
    fn print_parse_roundtrip() {
        let src = "fof(a, axiom, ![X]: (p(X) => ?[Y]: (q(X,Y) & (r | s(Y))))).\nfof(c, conjecture, ~(p(a) <=> q(a,b))).";
        let p1 = parse_problem(src, &[]).unwrap();
        let printed = print_problem(&p1);
        let p2 = parse_problem(&printed, &[]).unwrap();
        assert_eq!(p1.axioms[0].formula, p2.axioms[0].formula);
        assert_eq!(p1.conjecture.unwrap().formula, p2.conjecture.unwrap().formula);
    }
}
