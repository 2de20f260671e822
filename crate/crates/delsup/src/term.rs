//! Sorts, symbols, terms, positions and substitutions.
//!
//! Terms are immutable trees over a shared [`Signature`]. Variables are
//! globally numbered; clause-level normalization renames them to a canonical
//! prefix so that renaming apart for binary inferences is a constant offset
//! shift. Substitutions are kept in normalized idempotent form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Index of a sort in a [`Signature`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub u32);

/// Index of a symbol in a [`Signature`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolId(pub u32);

/// Globally numbered variable.
pub type VarId = u32;

#[derive(Clone, Debug)]
pub struct SymbolData {
    pub name: String,
    pub arg_sorts: Vec<SortId>,
    pub result_sort: SortId,
    pub kbo_weight: u64,
    /// Position in the total precedence order; higher means greater.
    pub precedence: u32,
}

impl SymbolData {
    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }
}

/// How the total precedence over symbols is derived from the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecedenceScheme {
    /// Earlier first occurrence in the input means higher precedence.
    Occurrence,
    /// Descending by arity, ties broken by first occurrence (the default).
    Arity,
    /// Reverse of occurrence order.
    Reverse,
}

/// Symbol table shared by all terms of a problem.
///
/// Always contains the default individual sort `iota`, the boolean-like sort
/// `o` and the special constant `tTop : o` used to encode predicate atoms as
/// equations.
#[derive(Clone, Debug)]
pub struct Signature {
    sorts: Vec<String>,
    symbols: Vec<SymbolData>,
    by_name: BTreeMap<String, SymbolId>,
    pub default_sort: SortId,
    pub bool_sort: SortId,
    pub top: SymbolId,
}

impl Signature {
    pub fn new() -> Signature {
        let mut sig = Signature {
            sorts: vec!["iota".to_string(), "o".to_string()],
            symbols: Vec::new(),
            by_name: BTreeMap::new(),
            default_sort: SortId(0),
            bool_sort: SortId(1),
            top: SymbolId(0),
        };
        let top = sig.add_symbol("tTop", &[], SortId(1));
        sig.top = top;
        sig
    }

    pub fn add_sort(&mut self, name: &str) -> SortId {
        if let Some(i) = self.sorts.iter().position(|s| s == name) {
            return SortId(i as u32);
        }
        self.sorts.push(name.to_string());
        SortId((self.sorts.len() - 1) as u32)
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        &self.sorts[s.0 as usize]
    }

    pub fn num_sorts(&self) -> usize {
        self.sorts.len()
    }

    /// Adds a symbol with weight 1 and provisional precedence equal to its
    /// registration order. Returns the existing id when the name is known.
    pub fn add_symbol(&mut self, name: &str, arg_sorts: &[SortId], result_sort: SortId) -> SymbolId {
        if let Some(&id) = self.by_name.get(name) {
            return id;
        }
        let id = SymbolId(self.symbols.len() as u32);
        self.symbols.push(SymbolData {
            name: name.to_string(),
            arg_sorts: arg_sorts.to_vec(),
            result_sort,
            kbo_weight: 1,
            precedence: id.0,
        });
        self.by_name.insert(name.to_string(), id);
        id
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn symbol(&self, id: SymbolId) -> &SymbolData {
        &self.symbols[id.0 as usize]
    }

    pub fn symbols(&self) -> impl Iterator<Item = (SymbolId, &SymbolData)> {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, d)| (SymbolId(i as u32), d))
    }

    pub fn num_symbols(&self) -> usize {
        self.symbols.len()
    }

    /// Reassigns precedences following `scheme`. The encoding constant `tTop`
    /// is always made minimal so that encoded atoms orient towards the atom.
    pub fn assign_precedence(&mut self, scheme: PrecedenceScheme) {
        let n = self.symbols.len();
        let mut order: Vec<usize> = (0..n).collect();
        match scheme {
            // Registration order tracks first occurrence in the input.
            PrecedenceScheme::Occurrence => {}
            PrecedenceScheme::Arity => {
                order.sort_by_key(|&i| (std::cmp::Reverse(self.symbols[i].arity()), i));
            }
            PrecedenceScheme::Reverse => order.reverse(),
        }
        // order[0] receives the highest precedence.
        for (rank, &i) in order.iter().enumerate() {
            self.symbols[i].precedence = (n - rank) as u32;
        }
        let top = self.top.0 as usize;
        self.symbols[top].precedence = 0;
    }

    /// Pins an explicit precedence: earlier names are greater. Symbols not
    /// mentioned keep their relative registration order below the listed ones.
    pub fn set_precedence(&mut self, descending: &[&str]) {
        let n = self.symbols.len() as u32;
        for (rank, name) in descending.iter().enumerate() {
            let id = self.lookup(name).expect("unknown symbol in precedence");
            self.symbols[id.0 as usize].precedence = 2 * n - rank as u32;
        }
        let top = self.top.0 as usize;
        self.symbols[top].precedence = 0;
    }
}

impl Default for Signature {
    fn default() -> Self {
        Signature::new()
    }
}

/// A first-order term: a sorted variable or a symbol application.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var { id: VarId, sort: SortId },
    App { sym: SymbolId, args: Vec<Term> },
}

/// Path of argument indices (0-based) addressing a subterm; empty addresses
/// the whole term.
pub type Position = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermError {
    InvalidPosition,
    SortMismatch,
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::InvalidPosition => write!(f, "position does not address a subterm"),
            TermError::SortMismatch => write!(f, "sort mismatch"),
        }
    }
}

impl Term {
    pub fn var(id: VarId, sort: SortId) -> Term {
        Term::Var { id, sort }
    }

    pub fn app(sym: SymbolId, args: Vec<Term>) -> Term {
        Term::App { sym, args }
    }

    pub fn constant(sym: SymbolId) -> Term {
        Term::App { sym, args: Vec::new() }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var { .. })
    }

    pub fn as_var(&self) -> Option<VarId> {
        match self {
            Term::Var { id, .. } => Some(*id),
            Term::App { .. } => None,
        }
    }

    pub fn top_symbol(&self) -> Option<SymbolId> {
        match self {
            Term::Var { .. } => None,
            Term::App { sym, .. } => Some(*sym),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var { .. } => &[],
            Term::App { args, .. } => args,
        }
    }

    pub fn sort(&self, sig: &Signature) -> SortId {
        match self {
            Term::Var { sort, .. } => *sort,
            Term::App { sym, .. } => sig.symbol(*sym).result_sort,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var { .. } => false,
            Term::App { args, .. } => args.iter().all(Term::is_ground),
        }
    }

    /// Free variables of the term.
    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Term::Var { id, .. } => {
                out.insert(*id);
            }
            Term::App { args, .. } => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        match self {
            Term::Var { id, .. } => *id == v,
            Term::App { args, .. } => args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var { .. } => 1,
            Term::App { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var { .. } => 0,
            Term::App { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn subterm_at(&self, pos: &[usize]) -> Result<&Term, TermError> {
        let mut cur = self;
        for &i in pos {
            match cur {
                Term::App { args, .. } if i < args.len() => cur = &args[i],
                _ => return Err(TermError::InvalidPosition),
            }
        }
        Ok(cur)
    }

    /// Replaces the subterm at `pos` with `u`, checking sorts.
    pub fn replace_at(&self, pos: &[usize], u: &Term, sig: &Signature) -> Result<Term, TermError> {
        let old = self.subterm_at(pos)?;
        if old.sort(sig) != u.sort(sig) {
            return Err(TermError::SortMismatch);
        }
        Ok(self.replace_unchecked(pos, u))
    }

    fn replace_unchecked(&self, pos: &[usize], u: &Term) -> Term {
        if pos.is_empty() {
            return u.clone();
        }
        match self {
            Term::App { sym, args } => {
                let mut args = args.clone();
                args[pos[0]] = args[pos[0]].replace_unchecked(&pos[1..], u);
                Term::App { sym: *sym, args }
            }
            Term::Var { .. } => unreachable!("validated by subterm_at"),
        }
    }

    /// All positions of the term in preorder, paired with their subterms.
    pub fn positions(&self) -> Vec<(Position, &Term)> {
        let mut out = Vec::new();
        self.collect_positions(&mut Vec::new(), &mut out);
        out
    }

    fn collect_positions<'a>(&'a self, prefix: &mut Position, out: &mut Vec<(Position, &'a Term)>) {
        out.push((prefix.clone(), self));
        if let Term::App { args, .. } = self {
            for (i, a) in args.iter().enumerate() {
                prefix.push(i);
                a.collect_positions(prefix, out);
                prefix.pop();
            }
        }
    }

    /// Renames every variable id by adding `offset`.
    pub fn shift_vars(&self, offset: VarId) -> Term {
        match self {
            Term::Var { id, sort } => Term::Var { id: id + offset, sort: *sort },
            Term::App { sym, args } => Term::App {
                sym: *sym,
                args: args.iter().map(|a| a.shift_vars(offset)).collect(),
            },
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay { term: self, sig }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var { id, .. } => write!(f, "X{}", id),
            Term::App { sym, args } => {
                write!(f, "{}", self.sig.symbol(*sym).name)?;
                if !args.is_empty() {
                    write!(f, "(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", a.display(self.sig))?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

/// Finite idempotent map from variables to terms.
///
/// The normalized form never contains a binding `x -> x` and no bound
/// variable occurs in any bound term, so application is a single pass.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<VarId, Term>,
}

impl Substitution {
    pub fn empty() -> Substitution {
        Substitution::default()
    }

    /// Builds a substitution from bindings and normalizes it to idempotent
    /// form. Panics on cyclic bindings (e.g. `x -> f(x)`).
    pub fn from_bindings(bindings: &[(VarId, Term)]) -> Substitution {
        let mut map = BTreeMap::new();
        for (v, t) in bindings {
            map.insert(*v, t.clone());
        }
        let mut s = Substitution { map };
        s.normalize();
        s
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, v: VarId) -> Option<&Term> {
        self.map.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, &Term)> {
        self.map.iter().map(|(v, t)| (*v, t))
    }

    pub fn domain(&self) -> impl Iterator<Item = VarId> + '_ {
        self.map.keys().copied()
    }

    /// Applies the substitution to a term. Unbound variables pass through.
    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var { id, .. } => match self.map.get(id) {
                Some(u) => u.clone(),
                None => t.clone(),
            },
            Term::App { sym, args } => Term::App {
                sym: *sym,
                args: args.iter().map(|a| self.apply(a)).collect(),
            },
        }
    }

    /// Adds the binding `v -> t`, composing with the existing bindings.
    /// Requires `v` not to occur in `t` after applying `self`.
    pub fn extend(&mut self, v: VarId, t: &Term) {
        let t = self.apply(t);
        debug_assert!(!t.contains_var(v), "occurs check violated in extend");
        let single = {
            let mut m = BTreeMap::new();
            m.insert(v, t.clone());
            Substitution { map: m }
        };
        for u in self.map.values_mut() {
            *u = single.apply(u);
        }
        if t.as_var() != Some(v) {
            self.map.insert(v, t);
        }
    }

    fn normalize(&mut self) {
        // Iterate application of the map to its own range until it becomes
        // idempotent; terminates for acyclic bindings.
        let bound: Vec<VarId> = self.map.keys().copied().collect();
        for _ in 0..=bound.len() {
            let snapshot = self.clone();
            let mut changed = false;
            for t in self.map.values_mut() {
                let nt = snapshot.apply(t);
                if nt != *t {
                    *t = nt;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        self.map.retain(|v, t| t.as_var() != Some(*v));
        for (v, t) in &self.map {
            assert!(!t.contains_var(*v), "cyclic substitution");
        }
    }

    /// Sequential composition: applying the result equals applying `self`
    /// first and then `rho`. Errors on a sort clash between bindings.
    pub fn compose(&self, rho: &Substitution, sig: &Signature) -> Result<Substitution, TermError> {
        let mut map = BTreeMap::new();
        for (v, t) in &self.map {
            let t = rho.apply(t);
            if t.as_var() != Some(*v) {
                map.insert(*v, t);
            }
        }
        for (v, t) in &rho.map {
            map.entry(*v).or_insert_with(|| t.clone());
        }
        // Every binding must respect the sort at which the variable is used.
        let mut var_sorts: BTreeMap<VarId, SortId> = BTreeMap::new();
        let mut record = |term: &Term| {
            let mut stack = vec![term];
            while let Some(t) = stack.pop() {
                match t {
                    Term::Var { id, sort } => {
                        var_sorts.entry(*id).or_insert(*sort);
                    }
                    Term::App { args, .. } => stack.extend(args.iter()),
                }
            }
        };
        for t in self.map.values().chain(rho.map.values()) {
            record(t);
        }
        for (v, t) in &map {
            if let Some(&s) = var_sorts.get(v) {
                if t.sort(sig) != s {
                    return Err(TermError::SortMismatch);
                }
            }
        }
        let mut out = Substitution { map };
        out.normalize();
        Ok(out)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> SubstDisplay<'a> {
        SubstDisplay { subst: self, sig }
    }
}

pub struct SubstDisplay<'a> {
    subst: &'a Substitution,
    sig: &'a Signature,
}

impl fmt::Display for SubstDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.subst.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "X{} -> {}", v, t.display(self.sig))?;
        }
        write!(f, "}}")
    }
}
