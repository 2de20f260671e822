//! Ground-level oracle: Herbrand universe enumeration, the classical ground
//! calculus (GSup, GEqFact, GEqRes), a lifting checker, and a brute-force
//! entailment check over two-element interpretations.
//!
//! The lifting checker verifies, on small clause sets, that every ground
//! inference from the set of groundings is either the ground instance of a
//! delayed-calculus inference from the original clauses (constraints dropped
//! after instantiation) or a superposition rewriting at or below a variable
//! position — the one case the redundancy argument covers.

use std::collections::BTreeMap;
use std::collections::HashMap;

use crate::calculus::{self, CalcCtx, Conclusion};
use crate::clause::{
    rename_offset, select, Clause, ClauseId, InferenceRecord, Literal, Rule, RuleSpot,
    SelectionStrategy,
};
use crate::order::Kbo;
use crate::term::{Signature, SortId, Substitution, Term, VarId};

/// The Herbrand universe of every sort, up to a nesting bound. Layer 0 holds
/// the constants; layer d the applications whose deepest argument is in
/// layer d-1.
pub struct GroundingSpace {
    by_sort: BTreeMap<SortId, Vec<Term>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundError {
    UninhabitedSort(SortId),
}

impl GroundingSpace {
    pub fn new(sig: &Signature, depth: usize) -> GroundingSpace {
        let mut layers: BTreeMap<SortId, Vec<Vec<Term>>> = BTreeMap::new();
        for s in 0..sig.num_sorts() {
            layers.insert(SortId(s as u32), vec![Vec::new(); depth + 1]);
        }
        for (sym, data) in sig.symbols() {
            if data.arg_sorts.is_empty() {
                layers.get_mut(&data.result_sort).unwrap()[0].push(Term::constant(sym));
            }
        }
        for d in 1..=depth {
            let mut new_terms: BTreeMap<SortId, Vec<Term>> = BTreeMap::new();
            for (sym, data) in sig.symbols() {
                if data.arg_sorts.is_empty() {
                    continue;
                }
                // all argument tuples drawn from layers < d, at least one
                // from layer d-1 exactly
                let pools: Vec<Vec<&Term>> = data
                    .arg_sorts
                    .iter()
                    .map(|s| layers[s][..d].iter().flatten().collect())
                    .collect();
                if pools.iter().any(|p| p.is_empty()) {
                    continue;
                }
                let mut idx = vec![0usize; pools.len()];
                loop {
                    let args: Vec<Term> =
                        idx.iter().zip(&pools).map(|(&i, p)| p[i].clone()).collect();
                    // layer-k terms have depth() == k+1; require at least one
                    // argument from the newest layer so nothing repeats
                    if args.iter().map(|a| a.depth()).max().unwrap_or(0) == d {
                        new_terms
                            .entry(data.result_sort)
                            .or_default()
                            .push(Term::App { sym, args });
                    }
                    let mut k = 0;
                    loop {
                        if k == idx.len() {
                            break;
                        }
                        idx[k] += 1;
                        if idx[k] < pools[k].len() {
                            break;
                        }
                        idx[k] = 0;
                        k += 1;
                    }
                    if k == idx.len() {
                        break;
                    }
                }
            }
            for (sort, terms) in new_terms {
                layers.get_mut(&sort).unwrap()[d] = terms;
            }
        }
        let by_sort = layers
            .into_iter()
            .map(|(s, ls)| (s, ls.into_iter().flatten().collect()))
            .collect();
        GroundingSpace { by_sort }
    }

    pub fn terms(&self, sort: SortId) -> &[Term] {
        self.by_sort.get(&sort).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// All groundings of a literal list into the space, paired with their
/// substitutions. A ground clause yields itself under the empty
/// substitution.
pub fn groundings(
    sig: &Signature,
    literals: &[Literal],
    space: &GroundingSpace,
) -> Result<Vec<(Substitution, Vec<Literal>)>, GroundError> {
    let mut var_sorts: BTreeMap<VarId, SortId> = BTreeMap::new();
    fn collect(t: &Term, out: &mut BTreeMap<VarId, SortId>) {
        match t {
            Term::Var { id, sort } => {
                out.insert(*id, *sort);
            }
            Term::App { args, .. } => args.iter().for_each(|a| collect(a, out)),
        }
    }
    for l in literals {
        collect(&l.lhs, &mut var_sorts);
        collect(&l.rhs, &mut var_sorts);
    }
    let _ = sig;
    let vars: Vec<(VarId, SortId)> = var_sorts.into_iter().collect();
    for (_, sort) in &vars {
        if space.terms(*sort).is_empty() {
            return Err(GroundError::UninhabitedSort(*sort));
        }
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let bindings: Vec<(VarId, Term)> = vars
            .iter()
            .zip(&idx)
            .map(|(&(v, s), &i)| (v, space.terms(s)[i].clone()))
            .collect();
        let theta = Substitution::from_bindings(&bindings);
        let lits = literals.iter().map(|l| l.apply(&theta)).collect();
        out.push((theta, lits));
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < space.terms(vars[k].1).len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// One inference of the classical ground calculus. Premise indices refer to
/// the input clause list.
pub struct GroundInference {
    pub rule: Rule,
    pub premises: Vec<usize>,
    pub conclusion: Vec<Literal>,
    pub spot: RuleSpot,
}

/// All GSup, GEqFact, and GEqRes inferences among the given ground clauses
/// under the ground selection function `gsel` (indexed by clause position).
pub fn ground_inferences(
    sig: &Signature,
    clauses: &[Vec<Literal>],
    gsel: &dyn Fn(usize) -> Vec<usize>,
) -> Vec<GroundInference> {
    let store: Vec<Clause> = clauses
        .iter()
        .enumerate()
        .map(|(i, lits)| {
            Clause::new(lits.clone(), ClauseId(i), i as u32, InferenceRecord::input())
        })
        .collect();
    // rules look up selection by literal list; distinct clauses with equal
    // literal lists select identically, which is consistent
    let by_lits: HashMap<Vec<Literal>, Vec<usize>> = store
        .iter()
        .enumerate()
        .map(|(i, c)| (c.literals.clone(), gsel(i)))
        .collect();
    let kbo = Kbo::new(sig);
    let ctx = CalcCtx::with_selection(
        kbo,
        Box::new(move |lits: &[Literal]| by_lits.get(lits).cloned().unwrap_or_default()),
    );
    let ground_eq = |a: &Term, b: &Term| a == b;
    let mut out = Vec::new();
    let mut push = |concl: Conclusion| {
        out.push(GroundInference {
            rule: concl.record.rule,
            premises: concl.record.premises.iter().map(|id| id.0).collect(),
            conclusion: concl.literals,
            spot: concl.record.spot,
        });
    };
    for d in &store {
        for c in &store {
            for concl in calculus::sup_std_all(&ctx, d, c, &ground_eq) {
                push(concl);
            }
        }
        for concl in calculus::std_unary_all(&ctx, d) {
            push(concl);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub rule: Rule,
    pub description: String,
}

/// Checks the lifting property on a small clause set: every ground
/// inference from the groundings of `input` must be the ground instance of
/// some delayed inference from `input`, except GSup rewritings at or below
/// a variable position. Returns the violations found.
pub fn check_lifting(
    sig: &Signature,
    input: &[Vec<Literal>],
    strategy: SelectionStrategy,
    depth: usize,
) -> Result<Vec<Violation>, GroundError> {
    let kbo = Kbo::new(sig);
    let origins: Vec<Clause> = input
        .iter()
        .enumerate()
        .map(|(i, lits)| {
            Clause::new(lits.clone(), ClauseId(i), i as u32, InferenceRecord::input())
        })
        .collect();
    let space = GroundingSpace::new(sig, depth);
    // distinct ground clauses, each remembering the first (lowest-id) origin
    // whose groundings produced it; that origin also dictates selection
    struct GroundClause {
        lits: Vec<Literal>,
        origin: usize,
        theta: Substitution,
    }
    let mut seen: HashMap<Vec<Literal>, usize> = HashMap::new();
    let mut gclauses: Vec<GroundClause> = Vec::new();
    for (i, c) in origins.iter().enumerate() {
        for (theta, lits) in groundings(sig, &c.literals, &space)? {
            let mut key = lits.clone();
            key.sort();
            if !seen.contains_key(&key) {
                seen.insert(key, gclauses.len());
                gclauses.push(GroundClause { lits, origin: i, theta });
            }
        }
    }
    let gsel: Vec<Vec<usize>> = gclauses
        .iter()
        .map(|g| select(strategy, &kbo, &origins[g.origin].literals))
        .collect();
    let glits: Vec<Vec<Literal>> = gclauses.iter().map(|g| g.lits.clone()).collect();
    let inferences = ground_inferences(sig, &glits, &|i| gsel[i].clone());
    let dctx = CalcCtx::new(Kbo::new(sig), strategy);
    let any = |_: &Term, _: &Term| true;

    // does applying theta to the candidate conclusion reproduce the ground
    // conclusion, with every constraint literal collapsing to s != s?
    let matches_def1 = |cand: &Conclusion, theta: &Substitution, gconcl: &[Literal]| -> bool {
        let grounded: Vec<Literal> = cand.literals.iter().map(|l| l.apply(theta)).collect();
        let split = grounded.len() - cand.constraints;
        let (body, cs) = grounded.split_at(split);
        if !cs.iter().all(|l| !l.positive && l.lhs == l.rhs) {
            return false;
        }
        let mut a: Vec<&Literal> = body.iter().collect();
        let mut b: Vec<&Literal> = gconcl.iter().collect();
        a.sort();
        b.sort();
        a == b
    };

    let combined_theta = |d: &Clause, td: &Substitution, tc: &Substitution| -> Substitution {
        let offset = rename_offset(&d.literals);
        let mut bindings: Vec<(VarId, Term)> = td.iter().map(|(v, t)| (v, t.clone())).collect();
        bindings.extend(tc.iter().map(|(v, t)| (v + offset, t.clone())));
        Substitution::from_bindings(&bindings)
    };

    // the exempt case: the rewritten position lies at or below a variable of
    // the non-ground premise
    let below_var = |origin: &Clause, g: &GroundClause, spot: &RuleSpot| -> bool {
        let RuleSpot::Rewrite { tgt_lit, tgt_lhs, pos, .. } = spot else { return false };
        let gl = &g.lits[*tgt_lit];
        let gside = if *tgt_lhs { &gl.lhs } else { &gl.rhs };
        let ol = &origin.literals[*tgt_lit];
        for oside in [&ol.lhs, &ol.rhs] {
            if &g.theta.apply(oside) != gside {
                continue;
            }
            let mut cur = oside;
            let mut hit_var = cur.is_var();
            for &i in pos.iter() {
                if hit_var {
                    break;
                }
                match cur {
                    Term::App { args, .. } => {
                        cur = &args[i];
                        hit_var = cur.is_var();
                    }
                    Term::Var { .. } => {
                        hit_var = true;
                    }
                }
            }
            if hit_var {
                return true;
            }
        }
        false
    };

    let mut violations = Vec::new();
    for inf in &inferences {
        let candidates: Vec<Conclusion> = match inf.rule {
            Rule::Sup => {
                let gd = &gclauses[inf.premises[0]];
                let gc = &gclauses[inf.premises[1]];
                calculus::sup_all(&dctx, &origins[gd.origin], &origins[gc.origin], &any)
            }
            Rule::EqFact => {
                let gc = &gclauses[inf.premises[0]];
                calculus::factor_all(&dctx, &origins[gc.origin])
            }
            Rule::EqRes => {
                let gc = &gclauses[inf.premises[0]];
                let origin = &origins[gc.origin];
                let mut cands = calculus::unification_all(&dctx, origin);
                for lit in 0..origin.literals.len() {
                    cands.extend(calculus::refl_del_at(&dctx, origin, lit, false));
                }
                cands
            }
            _ => unreachable!("ground calculus has three rules"),
        };
        let theta = match inf.rule {
            Rule::Sup => {
                let gd = &gclauses[inf.premises[0]];
                let gc = &gclauses[inf.premises[1]];
                combined_theta(&origins[gd.origin], &gd.theta, &gc.theta)
            }
            _ => gclauses[inf.premises[0]].theta.clone(),
        };
        let lifted = candidates
            .iter()
            .any(|cand| matches_def1(cand, &theta, &inf.conclusion));
        if lifted {
            continue;
        }
        if inf.rule == Rule::Sup {
            let gc = &gclauses[inf.premises[1]];
            if below_var(&origins[gc.origin], gc, &inf.spot) {
                continue;
            }
        }
        violations.push(Violation {
            rule: inf.rule,
            description: format!(
                "unliftable {} from ground premises {:?} with conclusion of {} literals",
                inf.rule,
                inf.premises,
                inf.conclusion.len()
            ),
        });
    }
    Ok(violations)
}

// ---------------------------------------------------------------------------
// Two-element-universe entailment
// ---------------------------------------------------------------------------

/// An interpretation over the universe {0,1} for every sort: one truth table
/// per symbol.
struct Interp<'a> {
    tables: BTreeMap<crate::term::SymbolId, Vec<u8>>,
    sig: &'a Signature,
}

impl Interp<'_> {
    fn eval(&self, t: &Term, assign: &BTreeMap<VarId, u8>) -> u8 {
        match t {
            Term::Var { id, .. } => assign[id],
            Term::App { sym, args } => {
                let mut ix = 0usize;
                for a in args {
                    ix = ix * 2 + self.eval(a, assign) as usize;
                }
                self.tables[sym][ix]
            }
        }
    }

    /// A clause holds if every variable assignment satisfies some literal.
    fn clause_true(&self, lits: &[Literal]) -> bool {
        let mut vars = std::collections::BTreeSet::new();
        for l in lits {
            l.collect_vars(&mut vars);
        }
        let vars: Vec<VarId> = vars.into_iter().collect();
        let _ = self.sig;
        for mask in 0..(1u32 << vars.len()) {
            let assign: BTreeMap<VarId, u8> = vars
                .iter()
                .enumerate()
                .map(|(i, &v)| (v, ((mask >> i) & 1) as u8))
                .collect();
            let sat = lits.iter().any(|l| {
                (self.eval(&l.lhs, &assign) == self.eval(&l.rhs, &assign)) == l.positive
            });
            if !sat {
                return false;
            }
        }
        true
    }
}

/// Brute-force entailment over all two-element interpretations of the
/// symbols occurring in the clauses. Sound and complete only for validity
/// over that universe, which suffices to catch unsound inferences.
pub fn entails(sig: &Signature, premises: &[Vec<Literal>], conclusion: &[Literal]) -> bool {
    let mut symbols = std::collections::BTreeSet::new();
    fn syms(t: &Term, out: &mut std::collections::BTreeSet<crate::term::SymbolId>) {
        if let Term::App { sym, args } = t {
            out.insert(*sym);
            args.iter().for_each(|a| syms(a, out));
        }
    }
    for lits in premises.iter().chain(std::iter::once(&conclusion.to_vec())) {
        for l in lits.iter() {
            syms(&l.lhs, &mut symbols);
            syms(&l.rhs, &mut symbols);
        }
    }
    let symbols: Vec<crate::term::SymbolId> = symbols.into_iter().collect();
    let table_sizes: Vec<usize> = symbols
        .iter()
        .map(|s| 1usize << sig.symbol(*s).arity())
        .collect();
    let mut tables: Vec<Vec<u8>> = table_sizes.iter().map(|&n| vec![0u8; n]).collect();
    loop {
        let interp = Interp {
            tables: symbols.iter().copied().zip(tables.iter().cloned()).collect(),
            sig,
        };
        if premises.iter().all(|p| interp.clause_true(p)) && !interp.clause_true(conclusion) {
            return false;
        }
        // advance to the next interpretation, odometer-style over all bits
        let mut k = 0;
        let mut pos = 0;
        'adv: loop {
            if k == tables.len() {
                return true;
            }
            if pos == tables[k].len() {
                k += 1;
                pos = 0;
                continue;
            }
            if tables[k][pos] == 0 {
                tables[k][pos] = 1;
                break 'adv;
            }
            tables[k][pos] = 0;
            pos += 1;
        }
    }
}
