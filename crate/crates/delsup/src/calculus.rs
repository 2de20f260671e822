//! The inference rules: delayed-unification superposition (Sup, VSup,
//! EqFact, VEqFact) with constraint literals, the unification inferences
//! (Decompose, Bind, ReflDel), and the classical eager-MGU rules used by the
//! standard mode (superposition, equality factoring, equality resolution).
//!
//! Every rule application produces a [`Conclusion`] carrying an
//! [`InferenceRecord`]; re-running the rule at the recorded positions
//! reproduces the conclusion exactly. Side-condition failures never error,
//! they simply produce no inference.

use crate::clause::{
    rename_apart, Clause, InferenceRecord, Literal, Rule, RuleSpot, SelectionStrategy,
};
use crate::order::Kbo;
use crate::term::{Position, Substitution, Term};
use crate::unify::mgu;

/// A rule conclusion before it is registered as a clause. Literals are raw
/// (not yet variable-normalized).
#[derive(Clone, Debug)]
pub struct Conclusion {
    pub literals: Vec<Literal>,
    pub record: InferenceRecord,
    /// How many trailing literals are argument-wise constraints (the CS
    /// disjunction); zero for rules that substitute instead.
    pub constraints: usize,
}

/// Shared rule context: the ordering plus the selection function.
pub struct CalcCtx<'a> {
    pub kbo: Kbo<'a>,
    pub select: Box<dyn Fn(&[Literal]) -> Vec<usize> + 'a>,
}

impl<'a> CalcCtx<'a> {
    pub fn new(kbo: Kbo<'a>, strategy: SelectionStrategy) -> CalcCtx<'a> {
        let kbo2 = Kbo { sig: kbo.sig, params: kbo.params };
        CalcCtx {
            kbo,
            select: Box::new(move |lits| crate::clause::select(strategy, &kbo2, lits)),
        }
    }

    /// Context with an explicit selection function (used by the ground
    /// oracle, where selection is dictated per clause).
    pub fn with_selection(
        kbo: Kbo<'a>,
        select: Box<dyn Fn(&[Literal]) -> Vec<usize> + 'a>,
    ) -> CalcCtx<'a> {
        CalcCtx { kbo, select }
    }

    fn eligible(&self, lits: &[Literal], idx: usize, sigma: &Substitution, strict: bool) -> bool {
        let sel = (self.select)(lits);
        self.kbo.eligible(lits, &sel, idx, sigma, strict)
    }
}

fn remove_at(lits: &[Literal], idx: usize) -> Vec<Literal> {
    lits.iter()
        .enumerate()
        .filter(|(i, _)| *i != idx)
        .map(|(_, l)| l.clone())
        .collect()
}

fn side<'t>(lit: &'t Literal, lhs: bool) -> (&'t Term, &'t Term) {
    if lhs {
        (&lit.lhs, &lit.rhs)
    } else {
        (&lit.rhs, &lit.lhs)
    }
}

fn apply_all(lits: &[Literal], sigma: &Substitution) -> Vec<Literal> {
    lits.iter().map(|l| l.apply(sigma)).collect()
}

/// Argument-wise constraint literals `t_i != s_i`.
fn constraints(ts: &[Term], ss: &[Term]) -> Vec<Literal> {
    ts.iter()
        .zip(ss.iter())
        .map(|(t, s)| Literal::new(false, t.clone(), s.clone()))
        .collect()
}

// ---------------------------------------------------------------------------
// Sup / VSup
// ---------------------------------------------------------------------------

/// Delayed superposition at a fixed spot. `d` holds the positive equation
/// `f(ts) = t'`, `c` the literal whose subterm at `pos` shares `f`'s top
/// symbol; the argument pairs become constraint literals.
pub fn sup_at(
    ctx: &CalcCtx,
    d: &Clause,
    c: &Clause,
    eq_lit: usize,
    eq_lhs: bool,
    tgt_lit: usize,
    tgt_lhs: bool,
    pos: &Position,
) -> Option<Conclusion> {
    let c_lits = rename_apart(&d.literals, &c.literals);
    let eq = d.literals.get(eq_lit)?;
    if !eq.positive {
        return None;
    }
    let (from, to) = side(eq, eq_lhs);
    let Term::App { sym: f, args: ts } = from else { return None };
    let tgt = c_lits.get(tgt_lit)?;
    let (s_whole, s_prime) = side(tgt, tgt_lhs);
    let u = s_whole.subterm_at(pos).ok()?;
    let Term::App { sym: g, args: ss } = u else { return None };
    if f != g {
        return None;
    }
    let empty = Substitution::empty();
    if !ctx.eligible(&d.literals, eq_lit, &empty, true) {
        return None;
    }
    if !ctx.eligible(&c_lits, tgt_lit, &empty, tgt.positive) {
        return None;
    }
    if !ctx.kbo.cmp_terms(from, to).not_le() {
        return None;
    }
    if !ctx.kbo.cmp_terms(s_whole, s_prime).not_le() {
        return None;
    }
    if !ctx.kbo.cmp_lit_slices(&c_lits, &d.literals).not_le() {
        return None;
    }
    let rewritten = Literal::new(
        tgt.positive,
        s_whole.replace_at(pos, to, ctx.kbo.sig).ok()?,
        s_prime.clone(),
    );
    let mut literals = remove_at(&c_lits, tgt_lit);
    literals.extend(remove_at(&d.literals, eq_lit));
    literals.push(rewritten);
    literals.extend(constraints(ts, ss));
    Some(Conclusion {
        literals,
        record: InferenceRecord {
            rule: Rule::Sup,
            premises: vec![d.id, c.id],
            unifier: empty,
            spot: RuleSpot::Rewrite { eq_lit, eq_lhs, tgt_lit, tgt_lhs, pos: pos.clone() },
            simplifying: false,
        },
        constraints: ts.len(),
    })
}

/// Variable superposition at a fixed spot: the equation side is a variable
/// `x`, the rewritten subterm is non-variable, and the single unification
/// step `sigma = {x -> f(ss)}` is applied to the conclusion.
pub fn vsup_at(
    ctx: &CalcCtx,
    d: &Clause,
    c: &Clause,
    eq_lit: usize,
    eq_lhs: bool,
    tgt_lit: usize,
    tgt_lhs: bool,
    pos: &Position,
) -> Option<Conclusion> {
    let sig = ctx.kbo.sig;
    let c_lits = rename_apart(&d.literals, &c.literals);
    let eq = d.literals.get(eq_lit)?;
    if !eq.positive {
        return None;
    }
    let (from, to) = side(eq, eq_lhs);
    let x = from.as_var()?;
    let tgt = c_lits.get(tgt_lit)?;
    let (s_whole, s_prime) = side(tgt, tgt_lhs);
    let u = s_whole.subterm_at(pos).ok()?;
    if u.is_var() || u.sort(sig) != from.sort(sig) {
        return None;
    }
    // Premises are renamed apart, so x cannot occur in u.
    debug_assert!(!u.contains_var(x));
    let sigma = Substitution::from_bindings(&[(x, u.clone())]);
    if !ctx.eligible(&d.literals, eq_lit, &sigma, true) {
        return None;
    }
    if !ctx.eligible(&c_lits, tgt_lit, &sigma, tgt.positive) {
        return None;
    }
    if !ctx.kbo.cmp_terms(&sigma.apply(from), &sigma.apply(to)).not_le() {
        return None;
    }
    if !ctx
        .kbo
        .cmp_terms(&sigma.apply(s_whole), &sigma.apply(s_prime))
        .not_le()
    {
        return None;
    }
    if !ctx
        .kbo
        .cmp_lit_slices(&apply_all(&c_lits, &sigma), &apply_all(&d.literals, &sigma))
        .not_le()
    {
        return None;
    }
    let rewritten = Literal::new(
        tgt.positive,
        s_whole.replace_at(pos, to, sig).ok()?,
        s_prime.clone(),
    );
    let mut literals = remove_at(&c_lits, tgt_lit);
    literals.extend(remove_at(&d.literals, eq_lit));
    literals.push(rewritten);
    let literals = apply_all(&literals, &sigma);
    Some(Conclusion {
        literals,
        record: InferenceRecord {
            rule: Rule::VSup,
            premises: vec![d.id, c.id],
            unifier: sigma,
            spot: RuleSpot::Rewrite { eq_lit, eq_lhs, tgt_lit, tgt_lhs, pos: pos.clone() },
            simplifying: false,
        },
        constraints: 0,
    })
}

/// All Sup and VSup inferences with `d` as the equation premise and `c` as
/// the rewritten premise. `pair_ok` is the retrieval filter applied to each
/// (equation side, candidate subterm) pair.
pub fn sup_all(
    ctx: &CalcCtx,
    d: &Clause,
    c: &Clause,
    pair_ok: &dyn Fn(&Term, &Term) -> bool,
) -> Vec<Conclusion> {
    let mut out = Vec::new();
    let c_lits = rename_apart(&d.literals, &c.literals);
    for (eq_lit, eq) in d.literals.iter().enumerate() {
        if !eq.positive {
            continue;
        }
        for eq_lhs in [true, false] {
            let (from, _) = side(eq, eq_lhs);
            if !eq_lhs && eq.lhs == eq.rhs {
                continue;
            }
            for (tgt_lit, tgt) in c_lits.iter().enumerate() {
                for tgt_lhs in [true, false] {
                    if !tgt_lhs && tgt.lhs == tgt.rhs {
                        continue;
                    }
                    let (s_whole, _) = side(tgt, tgt_lhs);
                    // innermost-first, so small rewrites are registered (and
                    // thus scheduled) before root rewrites
                    for (pos, u) in s_whole.positions().into_iter().rev() {
                        if u.is_var() || !pair_ok(from, u) {
                            continue;
                        }
                        let concl = if from.is_var() {
                            vsup_at(ctx, d, c, eq_lit, eq_lhs, tgt_lit, tgt_lhs, &pos)
                        } else if from.top_symbol() == u.top_symbol() {
                            sup_at(ctx, d, c, eq_lit, eq_lhs, tgt_lit, tgt_lhs, &pos)
                        } else {
                            None
                        };
                        out.extend(concl);
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// EqFact / VEqFact
// ---------------------------------------------------------------------------

/// Delayed equality factoring: both positive literals share a top symbol and
/// the argument pairs become constraints.
pub fn eq_fact_at(
    ctx: &CalcCtx,
    c: &Clause,
    keep_lit: usize,
    keep_lhs: bool,
    other_lit: usize,
    other_lhs: bool,
) -> Option<Conclusion> {
    if keep_lit == other_lit {
        return None;
    }
    let keep = c.literals.get(keep_lit)?;
    let other = c.literals.get(other_lit)?;
    if !keep.positive || !other.positive {
        return None;
    }
    let (fs, v) = side(keep, keep_lhs);
    let (ft, v_prime) = side(other, other_lhs);
    let Term::App { sym: f, args: ss } = fs else { return None };
    let Term::App { sym: g, args: ts } = ft else { return None };
    if f != g {
        return None;
    }
    let empty = Substitution::empty();
    if !ctx.eligible(&c.literals, keep_lit, &empty, false) {
        return None;
    }
    if !ctx.kbo.cmp_terms(fs, v).not_le() {
        return None;
    }
    if !ctx.kbo.cmp_terms(ft, v_prime).not_le() {
        return None;
    }
    let mut literals: Vec<Literal> = c
        .literals
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != keep_lit && *i != other_lit)
        .map(|(_, l)| l.clone())
        .collect();
    literals.push(Literal::new(false, v.clone(), v_prime.clone()));
    literals.push(keep.clone());
    literals.extend(constraints(ts, ss));
    Some(Conclusion {
        literals,
        record: InferenceRecord {
            rule: Rule::EqFact,
            premises: vec![c.id],
            unifier: empty,
            spot: RuleSpot::Factor { keep_lit, keep_lhs, other_lit, other_lhs },
            simplifying: false,
        },
        constraints: ts.len(),
    })
}

/// Variable equality factoring: one of the factored sides is a variable and
/// their most general unifier is applied to the conclusion.
pub fn veq_fact_at(
    ctx: &CalcCtx,
    c: &Clause,
    keep_lit: usize,
    keep_lhs: bool,
    other_lit: usize,
    other_lhs: bool,
) -> Option<Conclusion> {
    if keep_lit == other_lit {
        return None;
    }
    let keep = c.literals.get(keep_lit)?;
    let other = c.literals.get(other_lit)?;
    if !keep.positive || !other.positive {
        return None;
    }
    let (u, v) = side(keep, keep_lhs);
    let (u_prime, v_prime) = side(other, other_lhs);
    if !u.is_var() && !u_prime.is_var() {
        return None;
    }
    let sigma = mgu(ctx.kbo.sig, u, u_prime).ok()?.unifier()?;
    if !ctx.eligible(&c.literals, keep_lit, &sigma, false) {
        return None;
    }
    if !ctx.kbo.cmp_terms(&sigma.apply(u), &sigma.apply(v)).not_le() {
        return None;
    }
    if !ctx
        .kbo
        .cmp_terms(&sigma.apply(u_prime), &sigma.apply(v_prime))
        .not_le()
    {
        return None;
    }
    let mut literals: Vec<Literal> = c
        .literals
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != keep_lit && *i != other_lit)
        .map(|(_, l)| l.clone())
        .collect();
    literals.push(Literal::new(false, v.clone(), v_prime.clone()));
    literals.push(Literal::new(true, u.clone(), v.clone()));
    let literals = apply_all(&literals, &sigma);
    Some(Conclusion {
        literals,
        record: InferenceRecord {
            rule: Rule::VEqFact,
            premises: vec![c.id],
            unifier: sigma,
            spot: RuleSpot::Factor { keep_lit, keep_lhs, other_lit, other_lhs },
            simplifying: false,
        },
        constraints: 0,
    })
}

/// All EqFact and VEqFact inferences on `c`.
pub fn factor_all(ctx: &CalcCtx, c: &Clause) -> Vec<Conclusion> {
    let mut out = Vec::new();
    let n = c.literals.len();
    for keep_lit in 0..n {
        for other_lit in 0..n {
            if keep_lit == other_lit {
                continue;
            }
            for keep_lhs in [true, false] {
                for other_lhs in [true, false] {
                    out.extend(eq_fact_at(ctx, c, keep_lit, keep_lhs, other_lit, other_lhs));
                    out.extend(veq_fact_at(ctx, c, keep_lit, keep_lhs, other_lit, other_lhs));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Decompose / Bind / ReflDel
// ---------------------------------------------------------------------------

/// One Robinson decomposition step on a negative literal with a shared top
/// symbol and syntactically distinct sides.
pub fn decompose_at(ctx: &CalcCtx, c: &Clause, lit: usize) -> Option<Conclusion> {
    let l = c.literals.get(lit)?;
    if l.positive || l.lhs == l.rhs {
        return None;
    }
    let Term::App { sym: f, args: ss } = &l.lhs else { return None };
    let Term::App { sym: g, args: ts } = &l.rhs else { return None };
    if f != g {
        return None;
    }
    let empty = Substitution::empty();
    if !ctx.eligible(&c.literals, lit, &empty, false) {
        return None;
    }
    let mut literals = remove_at(&c.literals, lit);
    literals.extend(constraints(ts, ss));
    Some(Conclusion {
        literals,
        record: InferenceRecord {
            rule: Rule::Decompose,
            premises: vec![c.id],
            unifier: empty,
            spot: RuleSpot::Unary { lit, lhs_first: true },
            simplifying: false,
        },
        constraints: ts.len(),
    })
}

/// One variable binding step: eliminates a negative literal `x != t` by
/// applying `{x -> t}` to the rest of the clause. `skip_eligibility` is used
/// by the eager-simplification mode.
pub fn bind_at(
    ctx: &CalcCtx,
    c: &Clause,
    lit: usize,
    lhs_first: bool,
    skip_eligibility: bool,
) -> Option<Conclusion> {
    let l = c.literals.get(lit)?;
    if l.positive {
        return None;
    }
    let (xs, t) = side(l, lhs_first);
    let x = xs.as_var()?;
    if t.contains_var(x) {
        return None;
    }
    let sigma = Substitution::from_bindings(&[(x, t.clone())]);
    if !skip_eligibility && !ctx.eligible(&c.literals, lit, &sigma, false) {
        return None;
    }
    let literals = apply_all(&remove_at(&c.literals, lit), &sigma);
    Some(Conclusion {
        literals,
        record: InferenceRecord {
            rule: Rule::Bind,
            premises: vec![c.id],
            unifier: sigma,
            spot: RuleSpot::Unary { lit, lhs_first },
            simplifying: skip_eligibility,
        },
        constraints: 0,
    })
}

/// Removes a trivial negative literal `s != s`. As a simplification the
/// conclusion makes the premise redundant, so eligibility may be skipped.
pub fn refl_del_at(
    ctx: &CalcCtx,
    c: &Clause,
    lit: usize,
    skip_eligibility: bool,
) -> Option<Conclusion> {
    let l = c.literals.get(lit)?;
    if l.positive || l.lhs != l.rhs {
        return None;
    }
    let empty = Substitution::empty();
    if !skip_eligibility && !ctx.eligible(&c.literals, lit, &empty, false) {
        return None;
    }
    Some(Conclusion {
        literals: remove_at(&c.literals, lit),
        record: InferenceRecord {
            rule: Rule::ReflDel,
            premises: vec![c.id],
            unifier: empty,
            spot: RuleSpot::Unary { lit, lhs_first: true },
            simplifying: skip_eligibility,
        },
        constraints: 0,
    })
}

/// All unification inferences (Decompose, Bind) on `c` used as generating
/// rules. ReflDel is always applied as a simplification instead.
pub fn unification_all(ctx: &CalcCtx, c: &Clause) -> Vec<Conclusion> {
    let mut out = Vec::new();
    for lit in 0..c.literals.len() {
        out.extend(decompose_at(ctx, c, lit));
        for lhs_first in [true, false] {
            out.extend(bind_at(ctx, c, lit, lhs_first, false));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Classical rules (standard mode)
// ---------------------------------------------------------------------------

/// Classical superposition with an eagerly computed most general unifier.
pub fn sup_std_at(
    ctx: &CalcCtx,
    d: &Clause,
    c: &Clause,
    eq_lit: usize,
    eq_lhs: bool,
    tgt_lit: usize,
    tgt_lhs: bool,
    pos: &Position,
) -> Option<Conclusion> {
    let sig = ctx.kbo.sig;
    let c_lits = rename_apart(&d.literals, &c.literals);
    let eq = d.literals.get(eq_lit)?;
    if !eq.positive {
        return None;
    }
    let (from, to) = side(eq, eq_lhs);
    let tgt = c_lits.get(tgt_lit)?;
    let (s_whole, s_prime) = side(tgt, tgt_lhs);
    let u = s_whole.subterm_at(pos).ok()?;
    if u.is_var() || u.sort(sig) != from.sort(sig) {
        return None;
    }
    let sigma = mgu(sig, from, u).ok()?.unifier()?;
    if !ctx.eligible(&d.literals, eq_lit, &sigma, true) {
        return None;
    }
    if !ctx.eligible(&c_lits, tgt_lit, &sigma, tgt.positive) {
        return None;
    }
    if !ctx.kbo.cmp_terms(&sigma.apply(from), &sigma.apply(to)).not_le() {
        return None;
    }
    if !ctx
        .kbo
        .cmp_terms(&sigma.apply(s_whole), &sigma.apply(s_prime))
        .not_le()
    {
        return None;
    }
    if !ctx
        .kbo
        .cmp_lit_slices(&apply_all(&c_lits, &sigma), &apply_all(&d.literals, &sigma))
        .not_le()
    {
        return None;
    }
    let rewritten = Literal::new(
        tgt.positive,
        s_whole.replace_at(pos, to, sig).ok()?,
        s_prime.clone(),
    );
    let mut literals = remove_at(&c_lits, tgt_lit);
    literals.extend(remove_at(&d.literals, eq_lit));
    literals.push(rewritten);
    let literals = apply_all(&literals, &sigma);
    Some(Conclusion {
        literals,
        record: InferenceRecord {
            rule: Rule::Sup,
            premises: vec![d.id, c.id],
            unifier: sigma,
            spot: RuleSpot::Rewrite { eq_lit, eq_lhs, tgt_lit, tgt_lhs, pos: pos.clone() },
            simplifying: false,
        },
        constraints: 0,
    })
}

pub fn sup_std_all(
    ctx: &CalcCtx,
    d: &Clause,
    c: &Clause,
    pair_ok: &dyn Fn(&Term, &Term) -> bool,
) -> Vec<Conclusion> {
    let mut out = Vec::new();
    let c_lits = rename_apart(&d.literals, &c.literals);
    for (eq_lit, eq) in d.literals.iter().enumerate() {
        if !eq.positive {
            continue;
        }
        for eq_lhs in [true, false] {
            if !eq_lhs && eq.lhs == eq.rhs {
                continue;
            }
            let (from, _) = side(eq, eq_lhs);
            for (tgt_lit, tgt) in c_lits.iter().enumerate() {
                for tgt_lhs in [true, false] {
                    if !tgt_lhs && tgt.lhs == tgt.rhs {
                        continue;
                    }
                    let (s_whole, _) = side(tgt, tgt_lhs);
                    // innermost-first, as in sup_all
                    for (pos, u) in s_whole.positions().into_iter().rev() {
                        if u.is_var() || !pair_ok(from, u) {
                            continue;
                        }
                        out.extend(sup_std_at(ctx, d, c, eq_lit, eq_lhs, tgt_lit, tgt_lhs, &pos));
                    }
                }
            }
        }
    }
    out
}

/// Classical equality factoring.
pub fn eq_fact_std_at(
    ctx: &CalcCtx,
    c: &Clause,
    keep_lit: usize,
    keep_lhs: bool,
    other_lit: usize,
    other_lhs: bool,
) -> Option<Conclusion> {
    if keep_lit == other_lit {
        return None;
    }
    let keep = c.literals.get(keep_lit)?;
    let other = c.literals.get(other_lit)?;
    if !keep.positive || !other.positive {
        return None;
    }
    let (u, v) = side(keep, keep_lhs);
    let (u_prime, v_prime) = side(other, other_lhs);
    if u.sort(ctx.kbo.sig) != u_prime.sort(ctx.kbo.sig) {
        return None;
    }
    let sigma = mgu(ctx.kbo.sig, u, u_prime).ok()?.unifier()?;
    if !ctx.eligible(&c.literals, keep_lit, &sigma, false) {
        return None;
    }
    if !ctx.kbo.cmp_terms(&sigma.apply(u), &sigma.apply(v)).not_le() {
        return None;
    }
    if !ctx
        .kbo
        .cmp_terms(&sigma.apply(u_prime), &sigma.apply(v_prime))
        .not_le()
    {
        return None;
    }
    let mut literals: Vec<Literal> = c
        .literals
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != keep_lit && *i != other_lit)
        .map(|(_, l)| l.clone())
        .collect();
    literals.push(Literal::new(false, v.clone(), v_prime.clone()));
    literals.push(Literal::new(true, u.clone(), v.clone()));
    let literals = apply_all(&literals, &sigma);
    Some(Conclusion {
        literals,
        record: InferenceRecord {
            rule: Rule::EqFact,
            premises: vec![c.id],
            unifier: sigma,
            spot: RuleSpot::Factor { keep_lit, keep_lhs, other_lit, other_lhs },
            simplifying: false,
        },
        constraints: 0,
    })
}

/// Classical equality resolution on a negative literal.
pub fn eq_res_at(ctx: &CalcCtx, c: &Clause, lit: usize) -> Option<Conclusion> {
    let l = c.literals.get(lit)?;
    if l.positive {
        return None;
    }
    let sigma = mgu(ctx.kbo.sig, &l.lhs, &l.rhs).ok()?.unifier()?;
    if !ctx.eligible(&c.literals, lit, &sigma, false) {
        return None;
    }
    let literals = apply_all(&remove_at(&c.literals, lit), &sigma);
    Some(Conclusion {
        literals,
        record: InferenceRecord {
            rule: Rule::EqRes,
            premises: vec![c.id],
            unifier: sigma,
            spot: RuleSpot::Unary { lit, lhs_first: true },
            simplifying: false,
        },
        constraints: 0,
    })
}

/// All classical unary inferences on `c` (equality factoring and equality
/// resolution).
pub fn std_unary_all(ctx: &CalcCtx, c: &Clause) -> Vec<Conclusion> {
    let mut out = Vec::new();
    let n = c.literals.len();
    for lit in 0..n {
        out.extend(eq_res_at(ctx, c, lit));
        for other in 0..n {
            if other == lit {
                continue;
            }
            for keep_lhs in [true, false] {
                for other_lhs in [true, false] {
                    out.extend(eq_fact_std_at(ctx, c, lit, keep_lhs, other, other_lhs));
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Replay
// ---------------------------------------------------------------------------

/// Re-runs a recorded inference on its premises. Returns the reproduced
/// conclusion literals (raw), or `None` when the rule no longer applies,
/// which a trace checker treats as a verification failure.
pub fn replay(
    ctx: &CalcCtx,
    record: &InferenceRecord,
    premises: &[&Clause],
    delayed: bool,
) -> Option<Vec<Literal>> {
    let concl = match (&record.rule, &record.spot) {
        (Rule::Input, _) => return None,
        (Rule::Sup, RuleSpot::Rewrite { eq_lit, eq_lhs, tgt_lit, tgt_lhs, pos }) => {
            if delayed {
                sup_at(ctx, premises[0], premises[1], *eq_lit, *eq_lhs, *tgt_lit, *tgt_lhs, pos)
            } else {
                sup_std_at(ctx, premises[0], premises[1], *eq_lit, *eq_lhs, *tgt_lit, *tgt_lhs, pos)
            }
        }
        (Rule::VSup, RuleSpot::Rewrite { eq_lit, eq_lhs, tgt_lit, tgt_lhs, pos }) => {
            vsup_at(ctx, premises[0], premises[1], *eq_lit, *eq_lhs, *tgt_lit, *tgt_lhs, pos)
        }
        (Rule::EqFact, RuleSpot::Factor { keep_lit, keep_lhs, other_lit, other_lhs }) => {
            if delayed {
                eq_fact_at(ctx, premises[0], *keep_lit, *keep_lhs, *other_lit, *other_lhs)
            } else {
                eq_fact_std_at(ctx, premises[0], *keep_lit, *keep_lhs, *other_lit, *other_lhs)
            }
        }
        (Rule::VEqFact, RuleSpot::Factor { keep_lit, keep_lhs, other_lit, other_lhs }) => {
            veq_fact_at(ctx, premises[0], *keep_lit, *keep_lhs, *other_lit, *other_lhs)
        }
        (Rule::Decompose, RuleSpot::Unary { lit, .. }) => decompose_at(ctx, premises[0], *lit),
        (Rule::Bind, RuleSpot::Unary { lit, lhs_first }) => {
            bind_at(ctx, premises[0], *lit, *lhs_first, record.simplifying)
        }
        (Rule::ReflDel, RuleSpot::Unary { lit, .. }) => {
            refl_del_at(ctx, premises[0], *lit, record.simplifying)
        }
        (Rule::EqRes, RuleSpot::Unary { lit, .. }) => eq_res_at(ctx, premises[0], *lit),
        (Rule::DupLit, _) => {
            return Some(crate::clause::dedup_literals(&premises[0].literals));
        }
        _ => return None,
    }?;
    if concl.record.unifier != record.unifier {
        return None;
    }
    Some(concl.literals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clause::{Clause, ClauseId, InferenceRecord};
    use crate::term::{PrecedenceScheme, Signature, SymbolId};

    fn clause(lits: Vec<Literal>, id: usize) -> Clause {
        Clause::new(lits, ClauseId(id), id as u32, InferenceRecord::input())
    }

    fn any_pair(_: &Term, _: &Term) -> bool {
        true
    }

    /// Signature of Example 1: f/2, g/1, constants b and t.
    fn example1_sig() -> (Signature, SymbolId, SymbolId, SymbolId, SymbolId) {
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let f = sig.add_symbol("f", &[i, i], i);
        let g = sig.add_symbol("g", &[i], i);
        let b = sig.add_symbol("b", &[], i);
        let t = sig.add_symbol("t", &[], i);
        sig.assign_precedence(PrecedenceScheme::Arity);
        (sig, f, g, b, t)
    }

    #[test]
    fn sup_example_1() {
        // C1 = f(x,g(x)) != t, C2 = f(g(b),y) = t
        // Sup(C2, C1) = t != t | x != g(b) | g(x) != y
        let (sig, f, g, b, t) = example1_sig();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        let y = Term::var(1, i);
        let gb = Term::app(g, vec![Term::constant(b)]);
        let c1 = clause(
            vec![Literal::new(
                false,
                Term::app(f, vec![x.clone(), Term::app(g, vec![x.clone()])]),
                Term::constant(t),
            )],
            1,
        );
        let c2 = clause(
            vec![Literal::new(
                true,
                Term::app(f, vec![gb.clone(), y.clone()]),
                Term::constant(t),
            )],
            2,
        );
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::AllNegative);
        let out = sup_all(&ctx, &c2, &c1, &any_pair);
        let tt = Term::constant(t);
        // C2's y normalizes to variable 0; renaming C1 apart turns x into 1
        let y0 = Term::var(0, i);
        let x1 = Term::var(1, i);
        let expected = vec![
            Literal::new(false, tt.clone(), tt.clone()),
            Literal::new(false, gb.clone(), x1.clone()),
            Literal::new(false, y0, Term::app(g, vec![x1])),
        ];
        assert!(
            out.iter().any(|c| {
                let mut a = c.literals.clone();
                let mut b = expected.clone();
                a.sort();
                b.sort();
                a == b
            }),
            "expected Example 1 conclusion among {:?}",
            out.iter().map(|c| c.literals.len()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn sup_intro_example_constraint() {
        // f(g(a,b)) = t into f(g(a,x)) != t at the top of the lhs gives
        // t != t | g(a,b) != g(a,x)
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let f = sig.add_symbol("f", &[i], i);
        let g = sig.add_symbol("g", &[i, i], i);
        let a = sig.add_symbol("a", &[], i);
        let b = sig.add_symbol("b", &[], i);
        let t = sig.add_symbol("t", &[], i);
        sig.assign_precedence(PrecedenceScheme::Arity);
        let x = Term::var(0, i);
        let gab = Term::app(g, vec![Term::constant(a), Term::constant(b)]);
        let gax = Term::app(g, vec![Term::constant(a), x.clone()]);
        let d = clause(
            vec![Literal::new(true, Term::app(f, vec![gab.clone()]), Term::constant(t))],
            1,
        );
        let c = clause(
            vec![Literal::new(false, Term::app(f, vec![gax.clone()]), Term::constant(t))],
            2,
        );
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::AllNegative);
        let out = sup_all(&ctx, &d, &c, &any_pair);
        let tt = Term::constant(t);
        let expected = vec![
            Literal::new(false, tt.clone(), tt),
            Literal::new(false, gab, gax),
        ];
        assert!(out.iter().any(|cl| {
            let mut x = cl.literals.clone();
            let mut y = expected.clone();
            x.sort();
            y.sort();
            x == y
        }));
    }

    #[test]
    fn sup_ordering_condition_blocks() {
        // equation a = b with b > a in precedence: rewriting with a as the
        // larger side fails the ordering side condition in that orientation
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let b = sig.add_symbol("b", &[], i);
        let a = sig.add_symbol("a", &[], i);
        let c_sym = sig.add_symbol("c", &[], i);
        sig.set_precedence(&["b", "a", "c"]);
        let d = clause(vec![Literal::new(true, Term::constant(a), Term::constant(b))], 1);
        let c = clause(vec![Literal::new(true, Term::constant(b), Term::constant(c_sym))], 2);
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::None);
        // rewriting b by a requires b not-less-equal a, which holds (b > a),
        // but the equation must be used with from=b; from=a fails a > b.
        for concl in sup_all(&ctx, &d, &c, &any_pair) {
            // no conclusion may come from the a-side of the equation
            let RuleSpot::Rewrite { eq_lhs, .. } = concl.record.spot else { panic!() };
            let (from, _) = side(&d.literals[0], eq_lhs);
            assert_eq!(from, &Term::constant(b));
        }
    }

    #[test]
    fn vsup_example_2_step() {
        // D = x = c, C = f(a,c) != t, rewriting a gives f(c,c) != t
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let f = sig.add_symbol("f", &[i, i], i);
        let a = sig.add_symbol("a", &[], i);
        let c_sym = sig.add_symbol("c", &[], i);
        let t = sig.add_symbol("t", &[], i);
        sig.set_precedence(&["f", "a", "c", "t"]);
        let x = Term::var(0, i);
        let d = clause(vec![Literal::new(true, x, Term::constant(c_sym))], 1);
        let c = clause(
            vec![Literal::new(
                false,
                Term::app(f, vec![Term::constant(a), Term::constant(c_sym)]),
                Term::constant(t),
            )],
            2,
        );
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::AllNegative);
        let out = sup_all(&ctx, &d, &c, &any_pair);
        let expected = vec![Literal::new(
            false,
            Term::app(f, vec![Term::constant(c_sym), Term::constant(c_sym)]),
            Term::constant(t),
        )];
        assert!(out.iter().any(|cl| cl.literals == expected));
        // no target below an f-term of matching shape: rewriting c itself is
        // blocked because {x -> c} fails the ordering condition c > c
        assert!(out.iter().all(|cl| cl.literals != vec![Literal::new(
            false,
            Term::app(f, vec![Term::constant(a), Term::constant(a)]),
            Term::constant(t)
        )]));
    }

    #[test]
    fn vsup_self_referential_equation_produces_nothing() {
        // D = x = g(x): sigma maps x below its own image, the ordering
        // condition can never hold
        let (sig, f, g, _, t) = example1_sig();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        let d = clause(vec![Literal::new(true, x.clone(), Term::app(g, vec![x]))], 1);
        let c = clause(
            vec![Literal::new(
                false,
                Term::app(f, vec![Term::constant(t), Term::constant(t)]),
                Term::constant(t),
            )],
            2,
        );
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::AllNegative);
        let out: Vec<_> = sup_all(&ctx, &d, &c, &any_pair)
            .into_iter()
            .filter(|cl| cl.record.rule == Rule::VSup)
            .collect();
        assert!(out.is_empty());
        let _ = f;
    }

    #[test]
    fn decompose_intro_example() {
        // t != t | g(a,x) != g(a,b) decomposes to t != t | a != a | b != x
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let g = sig.add_symbol("g", &[i, i], i);
        let a = sig.add_symbol("a", &[], i);
        let b = sig.add_symbol("b", &[], i);
        let t = sig.add_symbol("t", &[], i);
        sig.assign_precedence(PrecedenceScheme::Arity);
        let x = Term::var(0, i);
        let tt = Term::constant(t);
        let c = clause(
            vec![
                Literal::new(false, tt.clone(), tt.clone()),
                Literal::new(
                    false,
                    Term::app(g, vec![Term::constant(a), x.clone()]),
                    Term::app(g, vec![Term::constant(a), Term::constant(b)]),
                ),
            ],
            1,
        );
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::AllNegative);
        let out = decompose_at(&ctx, &c, 1).expect("decompose applies");
        let expected = vec![
            Literal::new(false, tt.clone(), tt),
            Literal::new(false, Term::constant(a), Term::constant(a)),
            Literal::new(false, Term::constant(b), x),
        ];
        let mut got = out.literals.clone();
        let mut want = expected;
        got.sort();
        want.sort();
        assert_eq!(got, want);
        // equal sides are ReflDel's job, head clash is no inference
        let d1 = clause(
            vec![Literal::new(
                false,
                Term::app(g, vec![Term::constant(a), Term::constant(a)]),
                Term::app(g, vec![Term::constant(a), Term::constant(a)]),
            )],
            2,
        );
        assert!(decompose_at(&ctx, &d1, 0).is_none());
        let d2 = clause(
            vec![Literal::new(false, Term::constant(a), Term::constant(b))],
            3,
        );
        assert!(decompose_at(&ctx, &d2, 0).is_none());
    }

    #[test]
    fn bind_example_1_steps() {
        // x != g(b) | g(x) != y binds x to g(b) giving g(g(b)) != y
        let (sig, _, g, b, _) = example1_sig();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        let y = Term::var(1, i);
        let gb = Term::app(g, vec![Term::constant(b)]);
        let c = clause(
            vec![
                Literal::new(false, x.clone(), gb.clone()),
                Literal::new(false, Term::app(g, vec![x.clone()]), y.clone()),
            ],
            1,
        );
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::AllNegative);
        let out = unification_all(&ctx, &c);
        let ggb = Term::app(g, vec![gb.clone()]);
        let expected = vec![Literal::new(false, ggb.clone(), y.clone())];
        assert!(out.iter().any(|cl| cl.literals == expected));
        // g(g(b)) != y then binds to the empty clause
        let c5 = clause(vec![Literal::new(false, ggb, Term::var(0, i))], 2);
        let out5 = unification_all(&ctx, &c5);
        assert!(out5.iter().any(|cl| cl.literals.is_empty()));
        // occurs check: x != f(x) does not bind
        let fx = Term::app(g, vec![x.clone()]);
        let c6 = clause(vec![Literal::new(false, x.clone(), fx)], 3);
        assert!(unification_all(&ctx, &c6)
            .iter()
            .all(|cl| cl.record.rule != Rule::Bind));
    }

    #[test]
    fn refl_del_examples() {
        let (sig, _, g, b, t) = example1_sig();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        let y = Term::var(1, i);
        let tt = Term::constant(t);
        let gb = Term::app(g, vec![Term::constant(b)]);
        let c3 = clause(
            vec![
                Literal::new(false, tt.clone(), tt.clone()),
                Literal::new(false, x.clone(), gb.clone()),
                Literal::new(false, Term::app(g, vec![x.clone()]), y.clone()),
            ],
            1,
        );
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::AllNegative);
        let out = refl_del_at(&ctx, &c3, 0, false).expect("trivial literal eligible under all-negative");
        assert_eq!(out.literals.len(), 2);
        let neg = clause(vec![Literal::new(false, Term::constant(b), tt)], 2);
        assert!(refl_del_at(&ctx, &neg, 0, false).is_none());
    }

    #[test]
    fn eq_fact_shapes() {
        // f(a) = b | f(a) = c factors when the ordering permits
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let f = sig.add_symbol("f", &[i], i);
        let a = sig.add_symbol("a", &[], i);
        let b = sig.add_symbol("b", &[], i);
        let c_sym = sig.add_symbol("c", &[], i);
        sig.assign_precedence(PrecedenceScheme::Arity);
        let fa = Term::app(f, vec![Term::constant(a)]);
        let cl = clause(
            vec![
                Literal::new(true, fa.clone(), Term::constant(b)),
                Literal::new(true, fa.clone(), Term::constant(c_sym)),
            ],
            1,
        );
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::None);
        let out = factor_all(&ctx, &cl);
        // some factoring with constraint a != a must exist
        assert!(out.iter().any(|c| c.record.rule == Rule::EqFact
            && c.literals.contains(&Literal::new(false, Term::constant(a), Term::constant(a)))));
        // distinct heads produce nothing
        let cl2 = clause(
            vec![
                Literal::new(true, Term::constant(a), Term::constant(b)),
                Literal::new(true, Term::constant(c_sym), Term::constant(b)),
            ],
            2,
        );
        assert!(factor_all(&ctx, &cl2)
            .iter()
            .all(|c| c.record.rule != Rule::EqFact));
    }

    #[test]
    fn veq_fact_unifies_variable_side() {
        // x = a | b = a with sigma = {x -> b} gives a != a | b = a
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let a = sig.add_symbol("a", &[], i);
        let b = sig.add_symbol("b", &[], i);
        // the substituted constant must not be smaller than the kept side
        sig.set_precedence(&["b", "a"]);
        let x = Term::var(0, i);
        let cl = clause(
            vec![
                Literal::new(true, x.clone(), Term::constant(a)),
                Literal::new(true, Term::constant(b), Term::constant(a)),
            ],
            1,
        );
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::None);
        let out = factor_all(&ctx, &cl);
        let expected = vec![
            Literal::new(false, Term::constant(a), Term::constant(a)),
            Literal::new(true, Term::constant(b), Term::constant(a)),
        ];
        assert!(out.iter().any(|c| {
            let mut g = c.literals.clone();
            let mut w = expected.clone();
            g.sort();
            w.sort();
            c.record.rule == Rule::VEqFact && g == w
        }));
    }

    #[test]
    fn standard_rules_intro_example() {
        // f(g(a,x)) != t and f(g(a,b)) = t resolve to t != t via {x -> b},
        // then equality resolution closes it
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let f = sig.add_symbol("f", &[i], i);
        let g = sig.add_symbol("g", &[i, i], i);
        let a = sig.add_symbol("a", &[], i);
        let b = sig.add_symbol("b", &[], i);
        let t = sig.add_symbol("t", &[], i);
        sig.assign_precedence(PrecedenceScheme::Arity);
        let x = Term::var(0, i);
        let c1 = clause(
            vec![Literal::new(
                false,
                Term::app(f, vec![Term::app(g, vec![Term::constant(a), x])]),
                Term::constant(t),
            )],
            1,
        );
        let c2 = clause(
            vec![Literal::new(
                true,
                Term::app(f, vec![Term::app(g, vec![Term::constant(a), Term::constant(b)])]),
                Term::constant(t),
            )],
            2,
        );
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::AllNegative);
        let out = sup_std_all(&ctx, &c2, &c1, &any_pair);
        let tt = Term::constant(t);
        let expected = vec![Literal::new(false, tt.clone(), tt)];
        assert!(out.iter().any(|c| c.literals == expected));
        let c3 = clause(expected, 3);
        let res = eq_res_at(&ctx, &c3, 0).expect("eq_res applies");
        assert!(res.literals.is_empty());
        // eq_res on x != a yields the empty clause, on f(x) != g(x) nothing
        let c4 = clause(vec![Literal::new(false, Term::var(0, i), Term::constant(a))], 4);
        assert!(eq_res_at(&ctx, &c4, 0).unwrap().literals.is_empty());
        let c5 = clause(
            vec![Literal::new(
                false,
                Term::app(f, vec![Term::var(0, i)]),
                Term::app(g, vec![Term::constant(a), Term::var(0, i)]),
            )],
            5,
        );
        assert!(eq_res_at(&ctx, &c5, 0).is_none());
    }

    #[test]
    fn replay_reproduces_conclusions() {
        let (sig, f, g, b, t) = example1_sig();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        let y = Term::var(1, i);
        let gb = Term::app(g, vec![Term::constant(b)]);
        let c1 = clause(
            vec![Literal::new(
                false,
                Term::app(f, vec![x.clone(), Term::app(g, vec![x.clone()])]),
                Term::constant(t),
            )],
            1,
        );
        let c2 = clause(
            vec![Literal::new(true, Term::app(f, vec![gb, y]), Term::constant(t))],
            2,
        );
        let kbo = Kbo::new(&sig);
        let ctx = CalcCtx::new(kbo, SelectionStrategy::AllNegative);
        for concl in sup_all(&ctx, &c2, &c1, &any_pair) {
            let replayed = replay(&ctx, &concl.record, &[&c2, &c1], true).expect("replays");
            assert_eq!(replayed, concl.literals);
        }
    }
}
