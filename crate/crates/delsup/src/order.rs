//! Knuth-Bendix ordering and its multiset extensions to literals and clauses.
//!
//! The comparison follows the textbook KBO definition: variable-count
//! domination, then weight, then precedence, then lexicographic descent.
//! `Incomparable` is a first-class result; every calculus side condition is
//! phrased in the negated form "not less-or-equal", which holds for it.

use std::collections::BTreeMap;

use crate::clause::Literal;
use crate::term::{Signature, Substitution, Term, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderResult {
    Greater,
    Less,
    Equal,
    Incomparable,
}

impl OrderResult {
    pub fn flip(self) -> OrderResult {
        match self {
            OrderResult::Greater => OrderResult::Less,
            OrderResult::Less => OrderResult::Greater,
            other => other,
        }
    }

    /// The side condition form "s not-less-equal t".
    pub fn not_le(self) -> bool {
        matches!(self, OrderResult::Greater | OrderResult::Incomparable)
    }
}

/// KBO parameters: per-symbol weights and precedence live in the signature;
/// only the variable weight is carried here. The default configuration gives
/// every symbol weight 1 with variable weight 1, which is admissible.
#[derive(Clone, Copy, Debug)]
pub struct KboParams {
    pub var_weight: u64,
}

impl Default for KboParams {
    fn default() -> Self {
        KboParams { var_weight: 1 }
    }
}

pub struct Kbo<'a> {
    pub sig: &'a Signature,
    pub params: KboParams,
}

impl<'a> Kbo<'a> {
    pub fn new(sig: &'a Signature) -> Kbo<'a> {
        Kbo { sig, params: KboParams::default() }
    }

    fn weight(&self, t: &Term) -> u64 {
        match t {
            Term::Var { .. } => self.params.var_weight,
            Term::App { sym, args } => {
                self.sig.symbol(*sym).kbo_weight
                    + args.iter().map(|a| self.weight(a)).sum::<u64>()
            }
        }
    }

    fn var_counts(t: &Term, out: &mut BTreeMap<VarId, i64>, delta: i64) {
        match t {
            Term::Var { id, .. } => *out.entry(*id).or_insert(0) += delta,
            Term::App { args, .. } => {
                for a in args {
                    Self::var_counts(a, out, delta);
                }
            }
        }
    }

    /// Every variable occurs in `s` at least as often as in `t`.
    fn var_dominates(s: &Term, t: &Term) -> bool {
        let mut counts = BTreeMap::new();
        Self::var_counts(s, &mut counts, 1);
        Self::var_counts(t, &mut counts, -1);
        counts.values().all(|&c| c >= 0)
    }

    fn kbo_gt(&self, s: &Term, t: &Term) -> bool {
        if s == t || !Self::var_dominates(s, t) {
            return false;
        }
        let ws = self.weight(s);
        let wt = self.weight(t);
        if ws != wt {
            return ws > wt;
        }
        match (s, t) {
            (_, Term::Var { id, .. }) => s.contains_var(*id),
            (Term::Var { .. }, _) => false,
            (Term::App { sym: f, args: sa }, Term::App { sym: g, args: ta }) => {
                let pf = self.sig.symbol(*f).precedence;
                let pg = self.sig.symbol(*g).precedence;
                if pf != pg {
                    return pf > pg;
                }
                for (a, b) in sa.iter().zip(ta.iter()) {
                    if a != b {
                        return self.kbo_gt(a, b);
                    }
                }
                false
            }
        }
    }

    pub fn cmp_terms(&self, s: &Term, t: &Term) -> OrderResult {
        if s == t {
            OrderResult::Equal
        } else if self.kbo_gt(s, t) {
            OrderResult::Greater
        } else if self.kbo_gt(t, s) {
            OrderResult::Less
        } else {
            OrderResult::Incomparable
        }
    }

    /// Multiset extension of a strict partial order given by `cmp`.
    fn multiset_cmp<T: Clone + Eq>(
        xs: &[T],
        ys: &[T],
        cmp: &mut dyn FnMut(&T, &T) -> OrderResult,
    ) -> OrderResult {
        // Cancel syntactically equal elements pairwise.
        let mut xs: Vec<&T> = xs.iter().collect();
        let mut ys: Vec<&T> = ys.iter().collect();
        let mut i = 0;
        while i < xs.len() {
            if let Some(j) = ys.iter().position(|y| *y == xs[i]) {
                xs.swap_remove(i);
                ys.swap_remove(j);
            } else {
                i += 1;
            }
        }
        match (xs.is_empty(), ys.is_empty()) {
            (true, true) => return OrderResult::Equal,
            (false, true) => return OrderResult::Greater,
            (true, false) => return OrderResult::Less,
            (false, false) => {}
        }
        let x_dominates = ys
            .iter()
            .all(|y| xs.iter().any(|x| cmp(x, y) == OrderResult::Greater));
        let y_dominates = xs
            .iter()
            .all(|x| ys.iter().any(|y| cmp(y, x) == OrderResult::Greater));
        match (x_dominates, y_dominates) {
            (true, false) => OrderResult::Greater,
            (false, true) => OrderResult::Less,
            (false, false) => OrderResult::Incomparable,
            (true, true) => unreachable!("strict order cannot dominate both ways"),
        }
    }

    /// A positive literal s = t is the multiset {s,t}, a negative one the
    /// multiset {s,s,t,t}.
    pub fn literal_multiset(lit: &Literal) -> Vec<Term> {
        if lit.positive {
            vec![lit.lhs.clone(), lit.rhs.clone()]
        } else {
            vec![lit.lhs.clone(), lit.lhs.clone(), lit.rhs.clone(), lit.rhs.clone()]
        }
    }

    pub fn cmp_literals(&self, l1: &Literal, l2: &Literal) -> OrderResult {
        let m1 = Self::literal_multiset(l1);
        let m2 = Self::literal_multiset(l2);
        Self::multiset_cmp(&m1, &m2, &mut |a, b| self.cmp_terms(a, b))
    }

    pub fn cmp_lit_slices(&self, c1: &[Literal], c2: &[Literal]) -> OrderResult {
        Self::multiset_cmp(c1, c2, &mut |a, b| self.cmp_literals(a, b))
    }

    pub fn cmp_clauses(&self, c1: &crate::clause::Clause, c2: &crate::clause::Clause) -> OrderResult {
        self.cmp_lit_slices(&c1.literals, &c2.literals)
    }

    /// A literal is sigma-eligible if it is selected, or nothing is selected
    /// and its sigma-instance is (strictly, when requested) maximal in the
    /// sigma-instance of the clause.
    pub fn eligible(
        &self,
        literals: &[Literal],
        selection: &[usize],
        index: usize,
        sigma: &Substitution,
        strict: bool,
    ) -> bool {
        if !selection.is_empty() {
            return selection.contains(&index);
        }
        let li = literals[index].apply(sigma);
        for (j, l) in literals.iter().enumerate() {
            if j == index {
                continue;
            }
            match self.cmp_literals(&li, &l.apply(sigma)) {
                OrderResult::Less => return false,
                OrderResult::Equal if strict => return false,
                _ => {}
            }
        }
        true
    }
}
