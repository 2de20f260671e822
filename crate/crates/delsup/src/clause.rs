//! Literals, clauses, selection functions and clause-level utilities.

use std::collections::BTreeSet;
use std::fmt;

use crate::order::Kbo;
use crate::term::{Position, Signature, Substitution, Term, VarId};
use crate::unify::match_term_extend;

/// An equality literal. Stored unoriented: the two sides are kept in a
/// canonical structural order so that `s = t` and `t = s` compare and hash
/// identically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    pub lhs: Term,
    pub rhs: Term,
}

impl Literal {
    pub fn new(positive: bool, lhs: Term, rhs: Term) -> Literal {
        if lhs <= rhs {
            Literal { positive, lhs, rhs }
        } else {
            Literal { positive, lhs: rhs, rhs: lhs }
        }
    }

    pub fn negate(&self) -> Literal {
        Literal { positive: !self.positive, ..self.clone() }
    }

    pub fn apply(&self, sigma: &Substitution) -> Literal {
        Literal::new(self.positive, sigma.apply(&self.lhs), sigma.apply(&self.rhs))
    }

    pub fn shift_vars(&self, offset: VarId) -> Literal {
        Literal::new(
            self.positive,
            self.lhs.shift_vars(offset),
            self.rhs.shift_vars(offset),
        )
    }

    pub fn is_trivial(&self) -> bool {
        self.lhs == self.rhs
    }

    pub fn is_ground(&self) -> bool {
        self.lhs.is_ground() && self.rhs.is_ground()
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        self.lhs.collect_vars(out);
        self.rhs.collect_vars(out);
    }

    pub fn size(&self) -> usize {
        self.lhs.size() + self.rhs.size()
    }

    /// Both orientations of the literal: (first side, second side).
    pub fn orientations(&self) -> [(&Term, &Term); 2] {
        [(&self.lhs, &self.rhs), (&self.rhs, &self.lhs)]
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> LiteralDisplay<'a> {
        LiteralDisplay { lit: self, sig }
    }
}

pub struct LiteralDisplay<'a> {
    lit: &'a Literal,
    sig: &'a Signature,
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.lit.positive { "=" } else { "!=" };
        write!(
            f,
            "{} {} {}",
            self.lit.lhs.display(self.sig),
            op,
            self.lit.rhs.display(self.sig)
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseId(pub usize);

impl fmt::Display for ClauseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Inference rules and bookkeeping tags appearing in derivation records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Input,
    Sup,
    VSup,
    EqFact,
    VEqFact,
    Decompose,
    Bind,
    ReflDel,
    /// Classical equality resolution (standard mode only).
    EqRes,
    /// Duplicate literal removal (bookkeeping simplification).
    DupLit,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::Input => "input",
            Rule::Sup => "sup",
            Rule::VSup => "vsup",
            Rule::EqFact => "eq_fact",
            Rule::VEqFact => "veq_fact",
            Rule::Decompose => "decompose",
            Rule::Bind => "bind",
            Rule::ReflDel => "refl_del",
            Rule::EqRes => "eq_res",
            Rule::DupLit => "dup_lit",
        };
        write!(f, "{}", s)
    }
}

/// Positions a rule application touched, relative to the recorded premises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSpot {
    None,
    /// Sup/VSup: equation literal in the first premise, rewritten subterm in
    /// the second. `eq_lhs`/`tgt_lhs` say which stored side plays the role.
    Rewrite {
        eq_lit: usize,
        eq_lhs: bool,
        tgt_lit: usize,
        tgt_lhs: bool,
        pos: Position,
    },
    /// EqFact/VEqFact: the kept literal and the factored-away literal.
    Factor {
        keep_lit: usize,
        keep_lhs: bool,
        other_lit: usize,
        other_lhs: bool,
    },
    /// Decompose/Bind/ReflDel/EqRes: the literal worked on.
    Unary { lit: usize, lhs_first: bool },
}

/// The checkable trace unit: replaying `rule` on the recorded premises at the
/// recorded positions must reproduce the conclusion exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InferenceRecord {
    pub rule: Rule,
    pub premises: Vec<ClauseId>,
    pub unifier: Substitution,
    pub spot: RuleSpot,
    /// True when the step was applied destructively as a simplification.
    pub simplifying: bool,
}

impl InferenceRecord {
    pub fn input() -> InferenceRecord {
        InferenceRecord {
            rule: Rule::Input,
            premises: Vec::new(),
            unifier: Substitution::empty(),
            spot: RuleSpot::None,
            simplifying: false,
        }
    }
}

/// A clause: a multiset of literals with identity and provenance.
///
/// Variables are renamed to the canonical prefix 0..k at construction, in
/// order of first occurrence.
#[derive(Clone, Debug)]
pub struct Clause {
    pub literals: Vec<Literal>,
    pub id: ClauseId,
    pub age: u32,
    pub derivation: InferenceRecord,
}

impl Clause {
    pub fn new(
        literals: Vec<Literal>,
        id: ClauseId,
        age: u32,
        derivation: InferenceRecord,
    ) -> Clause {
        let literals = normalize_vars(&literals);
        Clause { literals, id, age, derivation }
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        for l in &self.literals {
            l.collect_vars(&mut out);
        }
        out
    }

    pub fn num_vars(&self) -> u32 {
        self.vars().len() as u32
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(Literal::is_ground)
    }

    /// Symbol-counting weight used by clause selection.
    pub fn weight(&self) -> usize {
        self.literals.iter().map(Literal::size).sum()
    }

    /// Literal multisets equal, ignoring order.
    pub fn same_literals(&self, other: &[Literal]) -> bool {
        let mut a = self.literals.clone();
        let mut b = other.to_vec();
        a.sort();
        b.sort();
        a == b
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> ClauseDisplay<'a> {
        ClauseDisplay { clause: self, sig }
    }
}

pub struct ClauseDisplay<'a> {
    clause: &'a Clause,
    sig: &'a Signature,
}

impl fmt::Display for ClauseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clause.literals.is_empty() {
            return write!(f, "$false");
        }
        for (i, l) in self.clause.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{}", l.display(self.sig))?;
        }
        Ok(())
    }
}

/// Renames variables to 0..k in order of first occurrence.
pub fn normalize_vars(literals: &[Literal]) -> Vec<Literal> {
    let mut mapping: Vec<(VarId, VarId)> = Vec::new();
    let mut next = 0;
    fn walk(t: &Term, mapping: &mut Vec<(VarId, VarId)>, next: &mut VarId) -> Term {
        match t {
            Term::Var { id, sort } => {
                let new = match mapping.iter().find(|(old, _)| old == id) {
                    Some((_, n)) => *n,
                    None => {
                        let n = *next;
                        mapping.push((*id, n));
                        *next += 1;
                        n
                    }
                };
                Term::Var { id: new, sort: *sort }
            }
            Term::App { sym, args } => Term::App {
                sym: *sym,
                args: args.iter().map(|a| walk(a, mapping, next)).collect(),
            },
        }
    }
    literals
        .iter()
        .map(|l| {
            // Walk sides in stored order so the result is deterministic.
            let lhs = walk(&l.lhs, &mut mapping, &mut next);
            let rhs = walk(&l.rhs, &mut mapping, &mut next);
            Literal::new(l.positive, lhs, rhs)
        })
        .collect()
}

/// Renames the second literal list apart from the first by shifting its
/// variables past those of the first. Both inputs keep their structure; the
/// outputs are variants of the inputs with disjoint variable sets.
pub fn rename_apart(c1: &[Literal], c2: &[Literal]) -> Vec<Literal> {
    c2.iter().map(|l| l.shift_vars(rename_offset(c1))).collect()
}

/// The variable shift `rename_apart` applies to its second clause.
pub fn rename_offset(c1: &[Literal]) -> VarId {
    let mut vars = BTreeSet::new();
    for l in c1 {
        l.collect_vars(&mut vars);
    }
    vars.iter().next_back().map_or(0, |v| v + 1)
}

/// True iff the clause contains `s = s` or a complementary pair.
pub fn is_tautology(literals: &[Literal]) -> bool {
    for (i, l) in literals.iter().enumerate() {
        if l.positive && l.is_trivial() {
            return true;
        }
        for m in &literals[i + 1..] {
            if l.positive != m.positive && l.lhs == m.lhs && l.rhs == m.rhs {
                return true;
            }
        }
    }
    false
}

/// Removes duplicate literal occurrences, keeping the first of each.
pub fn dedup_literals(literals: &[Literal]) -> Vec<Literal> {
    let mut out: Vec<Literal> = Vec::new();
    for l in literals {
        if !out.contains(l) {
            out.push(l.clone());
        }
    }
    out
}

/// Multiset subsumption: true iff some substitution maps `c`'s literals
/// injectively onto a sub-multiset of `d`. Backtracking search with polarity
/// and length prefilters.
pub fn subsumes(c: &[Literal], d: &[Literal]) -> bool {
    if c.len() > d.len() {
        return false;
    }
    let npos = |ls: &[Literal]| ls.iter().filter(|l| l.positive).count();
    if npos(c) > npos(d) || c.len() - npos(c) > d.len() - npos(d) {
        return false;
    }
    let mut used = vec![false; d.len()];
    subsume_rec(c, d, &mut used, &Vec::new())
}

fn subsume_rec(c: &[Literal], d: &[Literal], used: &mut Vec<bool>, bindings: &Vec<(VarId, Term)>) -> bool {
    let Some(first) = c.first() else { return true };
    for j in 0..d.len() {
        if used[j] || d[j].positive != first.positive {
            continue;
        }
        for (s1, s2) in first.orientations() {
            let mut b = bindings.clone();
            if match_term_extend(s1, &d[j].lhs, &mut b) && match_term_extend(s2, &d[j].rhs, &mut b) {
                used[j] = true;
                if subsume_rec(&c[1..], d, used, &b) {
                    used[j] = false;
                    return true;
                }
                used[j] = false;
            }
        }
    }
    false
}

/// Literal selection strategies; selection only ever returns negative
/// literals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionStrategy {
    None,
    OneNegative,
    AllNegative,
}

/// Positions of the selected literals, deterministic per strategy.
pub fn select(strategy: SelectionStrategy, kbo: &Kbo, literals: &[Literal]) -> Vec<usize> {
    let negatives: Vec<usize> = literals
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.positive)
        .map(|(i, _)| i)
        .collect();
    match strategy {
        SelectionStrategy::None => Vec::new(),
        SelectionStrategy::AllNegative => negatives,
        SelectionStrategy::OneNegative => {
            // The cmp_literals-smallest negative literal, ties by position.
            let mut best: Option<usize> = None;
            for &i in &negatives {
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if kbo.cmp_literals(&literals[i], &literals[b])
                            == crate::order::OrderResult::Less
                        {
                            best = Some(i);
                        }
                    }
                }
            }
            best.into_iter().collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{PrecedenceScheme, Signature};

    fn setup() -> (Signature, crate::term::SymbolId, crate::term::SymbolId, crate::term::SymbolId, crate::term::SymbolId) {
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let a = sig.add_symbol("a", &[], i);
        let b = sig.add_symbol("b", &[], i);
        let c = sig.add_symbol("c", &[], i);
        let d = sig.add_symbol("d", &[], i);
        sig.assign_precedence(PrecedenceScheme::Arity);
        (sig, a, b, c, d)
    }

    #[test]
    fn literal_is_unoriented() {
        let (sig, a, b, _, _) = setup();
        let l1 = Literal::new(true, Term::constant(a), Term::constant(b));
        let l2 = Literal::new(true, Term::constant(b), Term::constant(a));
        assert_eq!(l1, l2);
        let _ = sig;
    }

    #[test]
    fn tautology_detection() {
        let (_, a, b, _, _) = setup();
        let ta = Term::constant(a);
        let tb = Term::constant(b);
        assert!(is_tautology(&[Literal::new(true, ta.clone(), ta.clone())]));
        assert!(is_tautology(&[
            Literal::new(true, ta.clone(), tb.clone()),
            Literal::new(false, ta.clone(), tb.clone())
        ]));
        let i = crate::term::SortId(0);
        let x = Term::var(0, i);
        let y = Term::var(1, i);
        assert!(!is_tautology(&[Literal::new(true, x, y)]));
    }

    #[test]
    fn subsumption_examples() {
        let (sig, a, b, c, d) = setup();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        let y = Term::var(1, i);
        let xy = vec![Literal::new(true, x, y)];
        let ab = Literal::new(true, Term::constant(a), Term::constant(b));
        let cd = Literal::new(true, Term::constant(c), Term::constant(d));
        assert!(subsumes(&xy, &[ab.clone(), cd]));
        // multiset, not set, inclusion
        assert!(!subsumes(&[ab.clone(), ab.clone()], &[ab.clone()]));
        assert!(subsumes(&[ab.clone()], &[ab.clone()]));
    }

    #[test]
    fn rename_apart_disjoint_variants() {
        let (sig, a, _, _, _) = setup();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        let c1 = vec![Literal::new(true, x.clone(), Term::constant(a))];
        let c2 = vec![Literal::new(false, x.clone(), Term::constant(a))];
        let c2r = rename_apart(&c1, &c2);
        let mut v1 = BTreeSet::new();
        let mut v2 = BTreeSet::new();
        c1[0].collect_vars(&mut v1);
        c2r[0].collect_vars(&mut v2);
        assert!(v1.is_disjoint(&v2));
        // variant-ship: matching both ways succeeds
        assert!(subsumes(&c2, &c2r) && subsumes(&c2r, &c2));
        // ground clauses unchanged
        let g = vec![Literal::new(true, Term::constant(a), Term::constant(a))];
        assert_eq!(rename_apart(&c1, &g), g);
    }

    #[test]
    fn selection_strategies() {
        let (sig, a, b, c, d) = setup();
        let kbo = Kbo::new(&sig);
        let neg_ab = Literal::new(false, Term::constant(a), Term::constant(b));
        let pos_ab = Literal::new(true, Term::constant(a), Term::constant(b));
        let neg_cd = Literal::new(false, Term::constant(c), Term::constant(d));
        let lits = vec![neg_ab.clone(), pos_ab];
        assert_eq!(select(SelectionStrategy::AllNegative, &kbo, &lits), vec![0]);
        assert_eq!(select(SelectionStrategy::None, &kbo, &lits), Vec::<usize>::new());
        // one_negative picks the smallest negative; a > b > c > d by occurrence
        // here precedence is by registration, so c=d is smaller than a=b
        let lits2 = vec![neg_ab, neg_cd];
        let sel = select(SelectionStrategy::OneNegative, &kbo, &lits2);
        assert_eq!(sel.len(), 1);
        assert_eq!(sel[0], 1);
    }
}
