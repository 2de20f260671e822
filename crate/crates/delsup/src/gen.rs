//! Seeded random generation of terms, literals, and clauses over a small
//! fixed signature. Used by property tests and the self-check oracles; not
//! part of the prover itself.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clause::Literal;
use crate::term::{PrecedenceScheme, Signature, SortId, SymbolId, Term};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// f/2, g/1, h/1 and constants a, b, c over the default sort, with the
/// arity precedence scheme.
pub fn small_signature() -> Signature {
    let mut sig = Signature::new();
    let i = sig.default_sort;
    sig.add_symbol("f", &[i, i], i);
    sig.add_symbol("g", &[i], i);
    sig.add_symbol("h", &[i], i);
    sig.add_symbol("a", &[], i);
    sig.add_symbol("b", &[], i);
    sig.add_symbol("c", &[], i);
    sig.assign_precedence(PrecedenceScheme::Arity);
    sig
}

/// Uniform choice among the symbols of `sort` whose arity is at most
/// `max_arity`.
fn pick_symbol(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    sort: SortId,
    max_arity: usize,
) -> Option<SymbolId> {
    let candidates: Vec<SymbolId> = sig
        .symbols()
        .filter(|(id, d)| {
            *id != sig.top && d.result_sort == sort && d.arg_sorts.len() <= max_arity
        })
        .map(|(id, _)| id)
        .collect();
    if candidates.is_empty() {
        None
    } else {
        Some(candidates[rng.gen_range(0..candidates.len())])
    }
}

/// A random term of the given sort, up to `depth` levels of nesting, with
/// variables drawn from `0..num_vars`.
pub fn random_term(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    sort: SortId,
    depth: usize,
    num_vars: u32,
) -> Term {
    if num_vars > 0 && rng.gen_bool(0.3) {
        return Term::var(rng.gen_range(0..num_vars), sort);
    }
    let max_arity = if depth == 0 { 0 } else { usize::MAX };
    match pick_symbol(rng, sig, sort, max_arity) {
        Some(sym) => {
            let args = sig
                .symbol(sym)
                .arg_sorts
                .clone()
                .into_iter()
                .map(|s| random_term(rng, sig, s, depth.saturating_sub(1), num_vars))
                .collect();
            Term::App { sym, args }
        }
        // no constant of this sort: fall back to a variable
        None => Term::var(rng.gen_range(0..num_vars.max(1)), sort),
    }
}

pub fn random_literal(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    depth: usize,
    num_vars: u32,
) -> Literal {
    let sort = sig.default_sort;
    let lhs = random_term(rng, sig, sort, depth, num_vars);
    let rhs = random_term(rng, sig, sort, depth, num_vars);
    Literal::new(rng.gen_bool(0.5), lhs, rhs)
}

pub fn random_literals(
    rng: &mut ChaCha8Rng,
    sig: &Signature,
    max_lits: usize,
    depth: usize,
    num_vars: u32,
) -> Vec<Literal> {
    let n = rng.gen_range(1..=max_lits.max(1));
    (0..n).map(|_| random_literal(rng, sig, depth, num_vars)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_well_sorted() {
        let sig = small_signature();
        let mut r1 = rng(42);
        let mut r2 = rng(42);
        for _ in 0..100 {
            let t1 = random_term(&mut r1, &sig, sig.default_sort, 3, 3);
            let t2 = random_term(&mut r2, &sig, sig.default_sort, 3, 3);
            assert_eq!(t1, t2);
            assert_eq!(t1.sort(&sig), sig.default_sort);
            assert!(t1.depth() <= 4);
        }
    }

    #[test]
    fn literals_cover_both_polarities() {
        let sig = small_signature();
        let mut r = rng(7);
        let lits = random_literals(&mut r, &sig, 4, 2, 2);
        assert!(!lits.is_empty() && lits.len() <= 4);
        let mut seen_pos = false;
        let mut seen_neg = false;
        for _ in 0..200 {
            let l = random_literal(&mut r, &sig, 2, 2);
            seen_pos |= l.positive;
            seen_neg |= !l.positive;
        }
        assert!(seen_pos && seen_neg);
    }
}
