//! TPTP CNF reader and writer.
//!
//! Accepts `cnf(name, role, formula).` inputs, `%` and `/* */` comments, and
//! `include` directives. Non-equality atoms `p(ts)` are encoded as equations
//! `p(ts) = tTop` over a dedicated boolean sort, so the whole prover works
//! on equality literals only. First-order formula inputs (fof/tff/thf) are
//! rejected, not clausified.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::clause::Literal;
use crate::term::{Signature, Term, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Io { path: String, message: String },
    Syntax { line: usize, col: usize, message: String },
    UnsupportedInput { line: usize, col: usize, kind: String },
    ArityClash { line: usize, col: usize, symbol: String, expected: usize, found: usize },
    RoleClash { line: usize, col: usize, symbol: String },
    IncludeNotFound { line: usize, col: usize, name: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Io { path, message } => write!(f, "{path}: {message}"),
            ParseError::Syntax { line, col, message } => {
                write!(f, "{line}:{col}: {message}")
            }
            ParseError::UnsupportedInput { line, col, kind } => {
                write!(f, "{line}:{col}: unsupported input format '{kind}' (only cnf is accepted)")
            }
            ParseError::ArityClash { line, col, symbol, expected, found } => write!(
                f,
                "{line}:{col}: symbol '{symbol}' used with arity {found}, previously {expected}"
            ),
            ParseError::RoleClash { line, col, symbol } => write!(
                f,
                "{line}:{col}: symbol '{symbol}' used both as predicate and function"
            ),
            ParseError::IncludeNotFound { line, col, name } => {
                write!(f, "{line}:{col}: include '{name}' not found")
            }
        }
    }
}

impl std::error::Error for ParseError {}

/// A parsed problem: the signature grown while reading, plus the named
/// clauses in input order.
#[derive(Debug)]
pub struct ProblemFile {
    pub sig: Signature,
    pub clauses: Vec<(String, Vec<Literal>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LowerWord(String),
    UpperWord(String),
    Quoted(String),
    Number(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Pipe,
    Tilde,
    Eq,
    Neq,
    Eof,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Lexer<'a> {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col, message: message.into() }
    }

    /// The next token plus the position where it started.
    fn next_tok(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        loop {
            match self.chars.peek() {
                None => return Ok((Tok::Eof, self.line, self.col)),
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('%') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some('/') => {
                    let (line, col) = (self.line, self.col);
                    self.bump();
                    if self.chars.peek() != Some(&'*') {
                        return Err(ParseError::Syntax {
                            line,
                            col,
                            message: "stray '/'".into(),
                        });
                    }
                    self.bump();
                    let mut prev = ' ';
                    loop {
                        match self.bump() {
                            None => {
                                return Err(self.syntax("unterminated block comment"))
                            }
                            Some('/') if prev == '*' => break,
                            Some(c) => prev = c,
                        }
                    }
                }
                Some(_) => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let c = self.bump().unwrap();
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '.' => Tok::Dot,
            '|' => Tok::Pipe,
            '~' => Tok::Tilde,
            '=' => Tok::Eq,
            '!' => {
                if self.chars.peek() == Some(&'=') {
                    self.bump();
                    Tok::Neq
                } else {
                    return Err(self.syntax("expected '=' after '!'"));
                }
            }
            '\'' => {
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(self.syntax("unterminated quoted name")),
                        Some('\'') => break,
                        Some(c) => s.push(c),
                    }
                }
                Tok::Quoted(s)
            }
            c if c.is_ascii_lowercase() || c == '$' => {
                let mut s = String::from(c);
                while let Some(&n) = self.chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' {
                        s.push(n);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::LowerWord(s)
            }
            c if c.is_ascii_uppercase() || c == '_' => {
                let mut s = String::from(c);
                while let Some(&n) = self.chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' {
                        s.push(n);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::UpperWord(s)
            }
            c if c.is_ascii_digit() => {
                let mut s = String::from(c);
                while let Some(&n) = self.chars.peek() {
                    if n.is_ascii_digit() {
                        s.push(n);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Number(s)
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character '{other}'"),
                })
            }
        };
        Ok((tok, line, col))
    }
}

/// Per-symbol bookkeeping for clash detection.
struct SymbolInfo {
    arity: usize,
    is_predicate: bool,
    is_function: bool,
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    line: usize,
    col: usize,
    sig: &'a mut Signature,
    info: &'a mut BTreeMap<String, SymbolInfo>,
    clauses: &'a mut Vec<(String, Vec<Literal>)>,
    include_dirs: &'a [PathBuf],
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<(), ParseError> {
        let (tok, line, col) = self.lexer.next_tok()?;
        self.tok = tok;
        self.line = line;
        self.col = col;
        Ok(())
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col, message: message.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.tok == tok {
            self.advance()
        } else {
            Err(self.syntax(format!("expected {what}, found {:?}", self.tok)))
        }
    }

    fn file(&mut self) -> Result<(), ParseError> {
        loop {
            match &self.tok {
                Tok::Eof => return Ok(()),
                Tok::LowerWord(w) => match w.as_str() {
                    "cnf" => self.cnf_input()?,
                    "include" => self.include_input()?,
                    "fof" | "tff" | "thf" | "tcf" => {
                        return Err(ParseError::UnsupportedInput {
                            line: self.line,
                            col: self.col,
                            kind: w.clone(),
                        })
                    }
                    other => {
                        return Err(self.syntax(format!("unexpected input kind '{other}'")))
                    }
                },
                other => return Err(self.syntax(format!("expected an input, found {other:?}"))),
            }
        }
    }

    fn name(&mut self) -> Result<String, ParseError> {
        let s = match &self.tok {
            Tok::LowerWord(s) | Tok::Quoted(s) | Tok::Number(s) => s.clone(),
            other => return Err(self.syntax(format!("expected a name, found {other:?}"))),
        };
        self.advance()?;
        Ok(s)
    }

    fn include_input(&mut self) -> Result<(), ParseError> {
        let (line, col) = (self.line, self.col);
        self.advance()?;
        self.expect(Tok::LParen, "'('")?;
        let name = match &self.tok {
            Tok::Quoted(s) | Tok::LowerWord(s) => s.clone(),
            other => return Err(self.syntax(format!("expected a file name, found {other:?}"))),
        };
        self.advance()?;
        self.expect(Tok::RParen, "')'")?;
        self.expect(Tok::Dot, "'.'")?;
        let path = self
            .include_dirs
            .iter()
            .map(|d| d.join(&name))
            .find(|p| p.is_file())
            .ok_or(ParseError::IncludeNotFound { line, col, name: name.clone() })?;
        let text = fs::read_to_string(&path).map_err(|e| ParseError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        parse_into(&text, self.include_dirs, self.sig, self.info, self.clauses)
    }

    fn cnf_input(&mut self) -> Result<(), ParseError> {
        self.advance()?;
        self.expect(Tok::LParen, "'('")?;
        let name = self.name()?;
        self.expect(Tok::Comma, "','")?;
        let _role = self.name()?;
        self.expect(Tok::Comma, "','")?;
        let parenthesized = self.tok == Tok::LParen;
        if parenthesized {
            self.advance()?;
        }
        let mut vars: BTreeMap<String, VarId> = BTreeMap::new();
        let mut literals = Vec::new();
        loop {
            if let Some(lit) = self.literal(&mut vars)? {
                literals.push(lit);
            }
            if self.tok == Tok::Pipe {
                self.advance()?;
            } else {
                break;
            }
        }
        if parenthesized {
            self.expect(Tok::RParen, "')'")?;
        }
        // ignore optional annotations
        while self.tok == Tok::Comma {
            self.advance()?;
            self.skip_annotation()?;
        }
        self.expect(Tok::RParen, "')'")?;
        self.expect(Tok::Dot, "'.'")?;
        self.clauses.push((name, literals));
        Ok(())
    }

    /// Skips one balanced annotation term.
    fn skip_annotation(&mut self) -> Result<(), ParseError> {
        let mut depth = 0usize;
        loop {
            match self.tok {
                Tok::LParen => depth += 1,
                Tok::RParen => {
                    if depth == 0 {
                        return Ok(());
                    }
                    depth -= 1;
                }
                Tok::Eof => return Err(self.syntax("unterminated annotation")),
                _ => {}
            }
            self.advance()?;
            if depth == 0 && (self.tok == Tok::Comma || self.tok == Tok::RParen) {
                return Ok(());
            }
        }
    }

    /// `None` for a `$false` disjunct, which contributes no literal.
    fn literal(&mut self, vars: &mut BTreeMap<String, VarId>) -> Result<Option<Literal>, ParseError> {
        let negated = if self.tok == Tok::Tilde {
            self.advance()?;
            true
        } else {
            false
        };
        if self.tok == Tok::LowerWord("$false".into()) {
            self.advance()?;
            if negated {
                return Err(self.syntax("'~$false' is not a clause literal"));
            }
            return Ok(None);
        }
        if self.tok == Tok::LowerWord("$true".into()) {
            self.advance()?;
            let top = Term::constant(self.sig.top);
            return Ok(Some(Literal::new(!negated, top.clone(), top)));
        }
        let lhs = self.term(vars, false)?;
        match self.tok {
            Tok::Eq => {
                self.advance()?;
                let rhs = self.term(vars, false)?;
                self.mark_function(&lhs)?;
                self.mark_function(&rhs)?;
                Ok(Some(Literal::new(!negated, lhs, rhs)))
            }
            Tok::Neq => {
                self.advance()?;
                let rhs = self.term(vars, false)?;
                self.mark_function(&lhs)?;
                self.mark_function(&rhs)?;
                Ok(Some(Literal::new(negated, lhs, rhs)))
            }
            _ => {
                // plain atom: re-type its head as a predicate
                let lhs = self.into_predicate(lhs)?;
                Ok(Some(Literal::new(!negated, lhs, Term::constant(self.sig.top))))
            }
        }
    }

    /// Records that every symbol in `t` occurs in a term position; an
    /// earlier atom use of the same name is a role clash.
    fn mark_function(&mut self, t: &Term) -> Result<(), ParseError> {
        let Term::App { sym, args } = t else { return Ok(()) };
        let name = self.sig.symbol(*sym).name.clone();
        let entry = self.info.get_mut(&name).expect("registered in term()");
        if entry.is_predicate {
            return Err(ParseError::RoleClash { line: self.line, col: self.col, symbol: name });
        }
        entry.is_function = true;
        for a in args {
            self.mark_function(a)?;
        }
        Ok(())
    }

    /// Re-registers the head symbol of an atom with boolean result sort.
    fn into_predicate(&mut self, t: Term) -> Result<Term, ParseError> {
        let Term::App { sym, args } = t else {
            return Err(self.syntax("a variable cannot be an atom"));
        };
        let name = self.sig.symbol(sym).name.clone();
        let entry = self.info.get_mut(&name).expect("registered in term()");
        if entry.is_function {
            return Err(ParseError::RoleClash { line: self.line, col: self.col, symbol: name });
        }
        entry.is_predicate = true;
        for a in &args {
            self.mark_function(a)?;
        }
        let pred_name = format!("{name}#p");
        let arg_sorts = vec![self.sig.default_sort; args.len()];
        let pid = self.sig.add_symbol(&pred_name, &arg_sorts, self.sig.bool_sort);
        Ok(Term::App { sym: pid, args })
    }

    fn term(&mut self, vars: &mut BTreeMap<String, VarId>, _nested: bool) -> Result<Term, ParseError> {
        match self.tok.clone() {
            Tok::UpperWord(v) => {
                self.advance()?;
                let next = vars.len() as VarId;
                let id = *vars.entry(v).or_insert(next);
                Ok(Term::var(id, self.sig.default_sort))
            }
            Tok::LowerWord(f) | Tok::Quoted(f) | Tok::Number(f) => {
                let (line, col) = (self.line, self.col);
                self.advance()?;
                let mut args = Vec::new();
                if self.tok == Tok::LParen {
                    self.advance()?;
                    loop {
                        args.push(self.term(vars, true)?);
                        if self.tok == Tok::Comma {
                            self.advance()?;
                        } else {
                            break;
                        }
                    }
                    self.expect(Tok::RParen, "')'")?;
                }
                match self.info.get(&f) {
                    Some(entry) => {
                        if entry.arity != args.len() {
                            return Err(ParseError::ArityClash {
                                line,
                                col,
                                symbol: f,
                                expected: entry.arity,
                                found: args.len(),
                            });
                        }
                    }
                    None => {
                        self.info.insert(
                            f.clone(),
                            SymbolInfo { arity: args.len(), is_predicate: false, is_function: false },
                        );
                    }
                }
                let arg_sorts = vec![self.sig.default_sort; args.len()];
                let sym = self.sig.add_symbol(&f, &arg_sorts, self.sig.default_sort);
                Ok(Term::App { sym, args })
            }
            other => Err(self.syntax(format!("expected a term, found {other:?}"))),
        }
    }
}

fn parse_into(
    text: &str,
    include_dirs: &[PathBuf],
    sig: &mut Signature,
    info: &mut BTreeMap<String, SymbolInfo>,
    clauses: &mut Vec<(String, Vec<Literal>)>,
) -> Result<(), ParseError> {
    let mut p = Parser {
        lexer: Lexer::new(text),
        tok: Tok::Eof,
        line: 1,
        col: 1,
        sig,
        info,
        clauses,
        include_dirs,
    };
    p.advance()?;
    p.file()
}

/// Parses a problem from a string. Include directives are resolved against
/// `include_dirs` in order.
pub fn parse_str(text: &str, include_dirs: &[PathBuf]) -> Result<ProblemFile, ParseError> {
    let mut sig = Signature::new();
    let mut info = BTreeMap::new();
    let mut clauses = Vec::new();
    parse_into(text, include_dirs, &mut sig, &mut info, &mut clauses)?;
    Ok(ProblemFile { sig, clauses })
}

/// Parses a problem file; the file's own directory is appended to the
/// include search path.
pub fn parse_file(path: &Path, include_dirs: &[PathBuf]) -> Result<ProblemFile, ParseError> {
    let text = fs::read_to_string(path).map_err(|e| ParseError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut dirs: Vec<PathBuf> = include_dirs.to_vec();
    if let Some(parent) = path.parent() {
        dirs.push(parent.to_path_buf());
    }
    parse_str(&text, &dirs)
}

/// Serializes one literal back to TPTP syntax. Predicate encodings print as
/// atoms again; the boolean marker constant itself prints as `tTop`.
pub fn print_literal(sig: &Signature, lit: &Literal) -> String {
    let top = Term::constant(sig.top);
    let is_pred = |t: &Term| matches!(t, Term::App { sym, .. } if sig.symbol(*sym).result_sort == sig.bool_sort && *sym != sig.top);
    if lit.rhs == top && is_pred(&lit.lhs) {
        let atom = print_term(sig, &lit.lhs);
        return if lit.positive { atom } else { format!("~ {atom}") };
    }
    if lit.lhs == top && is_pred(&lit.rhs) {
        let atom = print_term(sig, &lit.rhs);
        return if lit.positive { atom } else { format!("~ {atom}") };
    }
    let op = if lit.positive { "=" } else { "!=" };
    format!("{} {} {}", print_term(sig, &lit.lhs), op, print_term(sig, &lit.rhs))
}

pub fn print_term(sig: &Signature, t: &Term) -> String {
    match t {
        Term::Var { id, .. } => format!("X{id}"),
        Term::App { sym, args } => {
            let name = sig.symbol(*sym).name.trim_end_matches("#p").to_string();
            if args.is_empty() {
                name
            } else {
                let inner: Vec<String> = args.iter().map(|a| print_term(sig, a)).collect();
                format!("{}({})", name, inner.join(","))
            }
        }
    }
}

pub fn print_clause(sig: &Signature, name: &str, lits: &[Literal]) -> String {
    let body = if lits.is_empty() {
        "$false".to_string()
    } else {
        lits.iter().map(|l| print_literal(sig, l)).collect::<Vec<_>>().join(" | ")
    };
    format!("cnf({name}, axiom, ({body})).")
}
