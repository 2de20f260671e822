//! The given-clause saturation loop.
//!
//! An Otter-style loop: passive clauses wait in a priority queue, the given
//! clause moves to the active set and all inferences between it and the
//! active set are generated, simplified, and enqueued. Every clause ever
//! created lives in an append-only store so a proof is a walk over recorded
//! inference premises.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::calculus::{self, CalcCtx, Conclusion};
use crate::clause::{
    dedup_literals, is_tautology, subsumes, Clause, ClauseId, InferenceRecord, Literal, Rule,
    RuleSpot, SelectionStrategy,
};
use crate::index::{FingerprintIndex, TopSymbolIndex};
use crate::order::Kbo;
use crate::term::{Signature, Substitution, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CalculusMode {
    /// Classical superposition with eager most general unifiers; candidate
    /// pairs are filtered by fingerprint before unification.
    Standard,
    /// Delayed unification with top-symbol retrieval only.
    Delayed,
    /// Delayed unification with fingerprint retrieval.
    DelayedFp,
    /// Delayed unification with fingerprint retrieval plus destructive
    /// Bind/ReflDel simplification.
    DelayedEager,
}

impl CalculusMode {
    pub fn is_delayed(self) -> bool {
        !matches!(self, CalculusMode::Standard)
    }
}

#[derive(Clone, Debug)]
pub struct SaturationConfig {
    pub mode: CalculusMode,
    pub selection: SelectionStrategy,
    pub time_limit: Option<Duration>,
    pub max_clauses: Option<usize>,
    pub max_iterations: Option<usize>,
    /// Restricts generation to the unification rules (Decompose and Bind;
    /// ReflDel runs as a simplification). Used to run the calculus as a
    /// unification procedure.
    pub unification_rules_only: bool,
    /// Given-clause pick ratio (age picks, weight picks) per cycle. A zero
    /// weight component makes the queue first-in-first-out.
    pub age_weight: (u32, u32),
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig {
            mode: CalculusMode::Delayed,
            selection: SelectionStrategy::AllNegative,
            time_limit: None,
            max_clauses: None,
            max_iterations: None,
            unification_rules_only: false,
            age_weight: (1, 4),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaturationStatus {
    Unsatisfiable,
    Saturated,
    ResourceOut,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SaturationStats {
    pub generated: usize,
    pub simplified: usize,
    pub subsumed: usize,
    pub tautologies: usize,
    pub iterations: usize,
    pub candidates: usize,
}

pub struct SaturationResult {
    pub status: SaturationStatus,
    pub clauses: Vec<Clause>,
    pub empty_clause: Option<ClauseId>,
    pub stats: SaturationStats,
}

impl SaturationResult {
    /// Clause ids participating in the refutation, ascending. `None` unless
    /// the empty clause was derived.
    pub fn proof_ids(&self) -> Option<Vec<ClauseId>> {
        let goal = self.empty_clause?;
        let mut seen = BTreeSet::new();
        let mut stack = vec![goal];
        while let Some(id) = stack.pop() {
            if seen.insert(id.0) {
                stack.extend(self.clauses[id.0].derivation.premises.iter().copied());
            }
        }
        Some(seen.into_iter().map(ClauseId).collect())
    }

    /// Multiset of non-input rule names along the refutation.
    pub fn proof_rules(&self) -> Option<Vec<Rule>> {
        let ids = self.proof_ids()?;
        let mut rules: Vec<Rule> = ids
            .iter()
            .map(|id| self.clauses[id.0].derivation.rule)
            .filter(|r| *r != Rule::Input)
            .collect();
        rules.sort_by_key(|r| format!("{r}"));
        Some(rules)
    }
}

enum SubtermIndex {
    Top(TopSymbolIndex),
    Fp(FingerprintIndex),
}

impl SubtermIndex {
    fn insert(&mut self, t: &Term, id: usize) {
        match self {
            SubtermIndex::Top(ix) => ix.insert(t, id),
            SubtermIndex::Fp(ix) => ix.insert(t, id),
        }
    }

    fn retrieve(&self, t: &Term) -> BTreeSet<usize> {
        match self {
            SubtermIndex::Top(ix) => ix.retrieve(t),
            SubtermIndex::Fp(ix) => ix.retrieve(t),
        }
    }
}

struct Prover<'a> {
    sig: &'a Signature,
    config: SaturationConfig,
    store: Vec<Clause>,
    passive: BTreeSet<usize>,
    by_weight: BTreeSet<(usize, usize)>,
    active: BTreeSet<usize>,
    /// Sides of positive literals in active clauses, by clause id.
    eq_index: SubtermIndex,
    /// Non-variable subterms of active clauses, by clause id.
    sub_index: SubtermIndex,
    stats: SaturationStats,
    empty_clause: Option<ClauseId>,
    deadline: Option<Instant>,
    next_age: u32,
    pick_counter: usize,
}

/// Retrieval filter for equation-side/subterm pairs, per mode.
fn pair_filter(mode: CalculusMode) -> fn(&Term, &Term) -> bool {
    match mode {
        CalculusMode::Delayed => {
            |from: &Term, u: &Term| match (from.top_symbol(), u.top_symbol()) {
                (None, _) => true,
                (Some(f), Some(g)) => f == g,
                (Some(_), None) => false,
            }
        }
        _ => crate::index::may_unify,
    }
}

impl<'a> Prover<'a> {
    fn new(sig: &'a Signature, config: SaturationConfig) -> Prover<'a> {
        let mode = config.mode;
        let mk = || match mode {
            CalculusMode::Delayed => SubtermIndex::Top(TopSymbolIndex::new()),
            _ => SubtermIndex::Fp(FingerprintIndex::new()),
        };
        Prover {
            sig,
            deadline: config.time_limit.map(|d| Instant::now() + d),
            config,
            store: Vec::new(),
            passive: BTreeSet::new(),
            by_weight: BTreeSet::new(),
            active: BTreeSet::new(),
            eq_index: mk(),
            sub_index: mk(),
            stats: SaturationStats::default(),
            empty_clause: None,
            next_age: 0,
            pick_counter: 0,
        }
    }

    fn ctx(&self) -> CalcCtx<'a> {
        CalcCtx::new(Kbo::new(self.sig), self.config.selection)
    }

    fn out_of_time(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() > d)
    }

    /// Appends to the store and returns the id. Does not queue the clause.
    fn intern(&mut self, literals: Vec<Literal>, derivation: InferenceRecord) -> ClauseId {
        let id = ClauseId(self.store.len());
        let age = self.next_age;
        self.next_age += 1;
        self.store.push(Clause::new(literals, id, age, derivation));
        id
    }

    fn enqueue(&mut self, id: ClauseId) {
        let c = &self.store[id.0];
        if c.is_empty() {
            self.empty_clause = Some(id);
            return;
        }
        self.passive.insert(id.0);
        self.by_weight.insert((c.weight(), id.0));
    }

    /// Simplification pipeline: trivial-literal removal, duplicate-literal
    /// removal, and (eager mode) destructive binding, each a recorded step.
    /// Returns the id of the fully simplified clause, or `None` when it was
    /// discarded as a tautology or forward-subsumed.
    fn simplify_and_keep(&mut self, id: ClauseId) -> Option<ClauseId> {
        let ctx = self.ctx();
        let mut cur = id;
        loop {
            let c = &self.store[cur.0];
            if let Some(lit) = c
                .literals
                .iter()
                .position(|l| !l.positive && l.lhs == l.rhs)
            {
                let concl = calculus::refl_del_at(&ctx, c, lit, true).expect("trivial literal");
                self.stats.simplified += 1;
                cur = self.intern(concl.literals, concl.record);
                continue;
            }
            let deduped = dedup_literals(&c.literals);
            if deduped.len() < c.literals.len() {
                let record = InferenceRecord {
                    rule: Rule::DupLit,
                    premises: vec![cur],
                    unifier: Substitution::empty(),
                    spot: RuleSpot::None,
                    simplifying: true,
                };
                self.stats.simplified += 1;
                cur = self.intern(deduped, record);
                continue;
            }
            if self.config.mode == CalculusMode::DelayedEager {
                let c = &self.store[cur.0];
                let mut bound = None;
                'outer: for lit in 0..c.literals.len() {
                    for lhs_first in [true, false] {
                        if let Some(concl) = calculus::bind_at(&ctx, c, lit, lhs_first, true) {
                            bound = Some(concl);
                            break 'outer;
                        }
                    }
                }
                if let Some(concl) = bound {
                    self.stats.simplified += 1;
                    cur = self.intern(concl.literals, concl.record);
                    continue;
                }
            }
            break;
        }
        let c = &self.store[cur.0];
        if c.is_empty() {
            return Some(cur);
        }
        if is_tautology(&c.literals) {
            self.stats.tautologies += 1;
            return None;
        }
        for &other in self.active.iter().chain(self.passive.iter()) {
            if subsumes(&self.store[other].literals, &self.store[cur.0].literals) {
                self.stats.subsumed += 1;
                return None;
            }
        }
        Some(cur)
    }

    fn add_conclusion(&mut self, concl: Conclusion) {
        self.stats.generated += 1;
        let id = self.intern(concl.literals, concl.record);
        if let Some(kept) = self.simplify_and_keep(id) {
            self.enqueue(kept);
        }
    }

    fn pick_given(&mut self) -> Option<ClauseId> {
        // age : weight ratio; with the default (1, 4) every fifth pick is by
        // age and the rest by weight
        let (age, weight) = self.config.age_weight;
        let cycle = (age + weight).max(1) as usize;
        let by_age = weight == 0 || self.pick_counter % cycle < age as usize;
        self.pick_counter += 1;
        let id = if by_age {
            *self.passive.iter().next()?
        } else {
            self.by_weight.iter().next()?.1
        };
        self.passive.remove(&id);
        let w = self.store[id].weight();
        self.by_weight.remove(&(w, id));
        Some(ClauseId(id))
    }

    fn activate(&mut self, id: ClauseId) {
        self.active.insert(id.0);
        let c = self.store[id.0].clone();
        for lit in &c.literals {
            if lit.positive {
                for (from, _) in lit.orientations() {
                    self.eq_index.insert(from, id.0);
                }
            }
            for t in [&lit.lhs, &lit.rhs] {
                for (_, u) in t.positions() {
                    if !u.is_var() {
                        self.sub_index.insert(u, id.0);
                    }
                }
            }
        }
    }

    /// All candidate partners for superposition with `c`, via the indexes.
    fn partners(&mut self, c: &Clause) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for lit in &c.literals {
            if lit.positive {
                for (from, _) in lit.orientations() {
                    out.extend(self.sub_index.retrieve(from));
                }
            }
            for t in [&lit.lhs, &lit.rhs] {
                for (_, u) in t.positions() {
                    if !u.is_var() {
                        out.extend(self.eq_index.retrieve(u));
                    }
                }
            }
        }
        self.stats.candidates += out.len();
        out
    }

    fn generate(&mut self, given: ClauseId) {
        let ctx = self.ctx();
        let g = self.store[given.0].clone();
        let filter = pair_filter(self.config.mode);
        if !self.config.unification_rules_only {
            let partner_ids = self.partners(&g);
            for p in partner_ids {
                if self.out_of_time() {
                    return;
                }
                let partner = self.store[p].clone();
                let mut concls = Vec::new();
                if self.config.mode.is_delayed() {
                    concls.extend(calculus::sup_all(&ctx, &g, &partner, &filter));
                    if p != given.0 {
                        concls.extend(calculus::sup_all(&ctx, &partner, &g, &filter));
                    }
                } else {
                    concls.extend(calculus::sup_std_all(&ctx, &g, &partner, &filter));
                    if p != given.0 {
                        concls.extend(calculus::sup_std_all(&ctx, &partner, &g, &filter));
                    }
                }
                for c in concls {
                    self.add_conclusion(c);
                    if self.empty_clause.is_some() {
                        return;
                    }
                }
            }
        }
        let unary = if self.config.mode.is_delayed() {
            let mut out = Vec::new();
            if !self.config.unification_rules_only {
                out.extend(calculus::factor_all(&ctx, &g));
            }
            // eager mode applies Bind destructively during simplification,
            // so only Decompose remains a generating unification rule there
            if self.config.mode == CalculusMode::DelayedEager {
                for lit in 0..g.literals.len() {
                    out.extend(calculus::decompose_at(&ctx, &g, lit));
                }
            } else {
                out.extend(calculus::unification_all(&ctx, &g));
            }
            out
        } else {
            calculus::std_unary_all(&ctx, &g)
        };
        for c in unary {
            self.add_conclusion(c);
            if self.empty_clause.is_some() {
                return;
            }
        }
    }

    fn run(mut self, input: Vec<Vec<Literal>>) -> SaturationResult {
        for lits in input {
            let id = self.intern(lits, InferenceRecord::input());
            if let Some(kept) = self.simplify_and_keep(id) {
                self.enqueue(kept);
            }
            if self.empty_clause.is_some() {
                break;
            }
        }
        let mut status = loop {
            if self.empty_clause.is_some() {
                break SaturationStatus::Unsatisfiable;
            }
            if self.out_of_time()
                || self
                    .config
                    .max_clauses
                    .is_some_and(|m| self.store.len() > m)
                || self
                    .config
                    .max_iterations
                    .is_some_and(|m| self.stats.iterations >= m)
            {
                break SaturationStatus::ResourceOut;
            }
            let Some(given) = self.pick_given() else {
                break SaturationStatus::Saturated;
            };
            self.stats.iterations += 1;
            self.activate(given);
            self.generate(given);
        };
        if self.empty_clause.is_some() {
            status = SaturationStatus::Unsatisfiable;
        }
        SaturationResult {
            status,
            clauses: self.store,
            empty_clause: self.empty_clause,
            stats: self.stats,
        }
    }
}

/// Saturates the input clause set under the configured calculus.
pub fn saturate(
    sig: &Signature,
    input: Vec<Vec<Literal>>,
    config: &SaturationConfig,
) -> SaturationResult {
    Prover::new(sig, config.clone()).run(input)
}
