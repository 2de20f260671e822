//! Robinson unification and one-sided matching with occurs check.

use crate::term::{Signature, Substitution, Term, TermError};

/// Why a unification attempt failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnifyFailure {
    /// Two distinct function symbols at the same position.
    Clash,
    /// A variable would be bound to a term containing it.
    Occurs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnifyOutcome {
    Unifier(Substitution),
    Failure(UnifyFailure),
}

impl UnifyOutcome {
    pub fn unifier(self) -> Option<Substitution> {
        match self {
            UnifyOutcome::Unifier(s) => Some(s),
            UnifyOutcome::Failure(_) => None,
        }
    }

    pub fn is_unifier(&self) -> bool {
        matches!(self, UnifyOutcome::Unifier(_))
    }
}

/// Most general unifier of `s` and `t`.
///
/// A sort mismatch between the inputs is a caller bug and reported as `Err`,
/// distinct from ordinary unification failure. The returned unifier is
/// idempotent.
pub fn mgu(sig: &Signature, s: &Term, t: &Term) -> Result<UnifyOutcome, TermError> {
    if s.sort(sig) != t.sort(sig) {
        return Err(TermError::SortMismatch);
    }
    let mut subst = Substitution::empty();
    let mut work = vec![(s.clone(), t.clone())];
    while let Some((a, b)) = work.pop() {
        let a = subst.apply(&a);
        let b = subst.apply(&b);
        if a == b {
            continue;
        }
        match (&a, &b) {
            (Term::Var { id, .. }, other) | (other, Term::Var { id, .. }) => {
                if other.contains_var(*id) {
                    return Ok(UnifyOutcome::Failure(UnifyFailure::Occurs));
                }
                subst.extend(*id, other);
            }
            (Term::App { sym: f, args: fa }, Term::App { sym: g, args: ga }) => {
                if f != g {
                    return Ok(UnifyOutcome::Failure(UnifyFailure::Clash));
                }
                for pair in fa.iter().cloned().zip(ga.iter().cloned()) {
                    work.push(pair);
                }
            }
        }
    }
    Ok(UnifyOutcome::Unifier(subst))
}

/// One-sided unification: finds `sigma` with `pattern * sigma == target`,
/// leaving the target's variables untouched.
pub fn match_term(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut bindings = Vec::new();
    if match_into(pattern, target, &mut bindings) {
        Some(Substitution::from_bindings(&bindings))
    } else {
        None
    }
}

/// Extends an existing partial matcher; used by multiset subsumption.
pub fn match_term_extend(
    pattern: &Term,
    target: &Term,
    bindings: &mut Vec<(u32, Term)>,
) -> bool {
    match_into(pattern, target, bindings)
}

fn match_into(pattern: &Term, target: &Term, bindings: &mut Vec<(u32, Term)>) -> bool {
    match pattern {
        Term::Var { id, sort } => {
            if let Some((_, bound)) = bindings.iter().find(|(v, _)| v == id) {
                return bound == target;
            }
            if let Term::Var { sort: ts, .. } = target {
                if ts != sort {
                    return false;
                }
            }
            bindings.push((*id, target.clone()));
            true
        }
        Term::App { sym: f, args: fa } => match target {
            Term::App { sym: g, args: ga } if f == g => fa
                .iter()
                .zip(ga.iter())
                .all(|(p, t)| match_into(p, t, bindings)),
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Signature;
    use crate::term::Term;

    fn setup() -> (Signature, crate::term::SymbolId, crate::term::SymbolId, crate::term::SymbolId, crate::term::SymbolId) {
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let f = sig.add_symbol("f", &[i], i);
        let g = sig.add_symbol("g", &[i], i);
        let a = sig.add_symbol("a", &[], i);
        let b = sig.add_symbol("b", &[], i);
        (sig, f, g, a, b)
    }

    #[test]
    fn mgu_binds_variable() {
        let (sig, f, _, a, _) = setup();
        let x = Term::var(0, sig.default_sort);
        let fa = Term::app(f, vec![Term::constant(a)]);
        let out = mgu(&sig, &x, &fa).unwrap();
        let s = out.unifier().unwrap();
        assert_eq!(s.apply(&x), fa);
    }

    #[test]
    fn mgu_example_1_pair() {
        // mgu(f(x,g(x)), f(g(b),y)) = {x -> g(b), y -> g(g(b))}
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let f = sig.add_symbol("f", &[i, i], i);
        let g = sig.add_symbol("g", &[i], i);
        let b = sig.add_symbol("b", &[], i);
        let x = Term::var(0, i);
        let y = Term::var(1, i);
        let s = Term::app(f, vec![x.clone(), Term::app(g, vec![x.clone()])]);
        let t = Term::app(f, vec![Term::app(g, vec![Term::constant(b)]), y.clone()]);
        let sigma = mgu(&sig, &s, &t).unwrap().unifier().unwrap();
        let gb = Term::app(g, vec![Term::constant(b)]);
        assert_eq!(sigma.apply(&x), gb);
        assert_eq!(sigma.apply(&y), Term::app(g, vec![gb]));
        assert_eq!(sigma.apply(&s), sigma.apply(&t));
    }

    #[test]
    fn mgu_occurs_and_clash() {
        let (sig, f, g, a, _) = setup();
        let x = Term::var(0, sig.default_sort);
        let fx = Term::app(f, vec![x.clone()]);
        assert_eq!(
            mgu(&sig, &x, &fx).unwrap(),
            UnifyOutcome::Failure(UnifyFailure::Occurs)
        );
        let fa = Term::app(f, vec![Term::constant(a)]);
        let ga = Term::app(g, vec![Term::constant(a)]);
        assert_eq!(
            mgu(&sig, &fa, &ga).unwrap(),
            UnifyOutcome::Failure(UnifyFailure::Clash)
        );
    }

    #[test]
    fn mgu_sort_mismatch_is_error() {
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let a = sig.add_symbol("a", &[], i);
        let p = sig.add_symbol("p", &[], sig.bool_sort);
        assert!(mgu(&sig, &Term::constant(a), &Term::constant(p)).is_err());
    }

    #[test]
    fn matching_is_one_sided() {
        let (sig, f, _, a, b) = setup();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        let fx = Term::app(f, vec![x.clone()]);
        let fa = Term::app(f, vec![Term::constant(a)]);
        let m = match_term(&fx, &fa).unwrap();
        assert_eq!(m.apply(&fx), fa);
        assert!(match_term(&fa, &fx).is_none());
        // f(x,x) does not match f(a,b)
        let mut sig = sig;
        let f2 = sig.add_symbol("f2", &[i, i], i);
        let fxx = Term::app(f2, vec![x.clone(), x]);
        let fab = Term::app(f2, vec![Term::constant(a), Term::constant(b)]);
        assert!(match_term(&fxx, &fab).is_none());
    }
}
