//! Term indexing for candidate retrieval: a top-symbol index and a
//! fingerprint index.
//!
//! Fingerprints sample the symbols at a fixed set of shallow positions.
//! Two terms can only unify if their fingerprints are compatible at every
//! sampled position, so the index is a sound overapproximation: it may
//! return non-unifiable candidates but never drops a unifiable one.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::term::{SymbolId, Term};

/// What a term looks like at one sampled position.
///
/// `Below` (position is under a variable) can become anything after
/// instantiation. `AtVar` (position holds a variable) exists and stays
/// existent, so it is incompatible only with `Gone`. `Gone` (position does
/// not exist) survives instantiation and is compatible only with `Gone` and
/// `Below`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Feature {
    Sym(SymbolId),
    AtVar,
    Below,
    Gone,
}

/// Sampled positions: the root, its arguments, and their arguments.
pub const SAMPLE_POSITIONS: [&[usize]; 7] =
    [&[], &[0], &[1], &[0, 0], &[0, 1], &[1, 0], &[1, 1]];

pub type Fingerprint = [Feature; 7];

fn feature_at(t: &Term, pos: &[usize]) -> Feature {
    match t {
        Term::Var { .. } => {
            if pos.is_empty() {
                Feature::AtVar
            } else {
                Feature::Below
            }
        }
        Term::App { sym, args } => {
            if pos.is_empty() {
                Feature::Sym(*sym)
            } else if pos[0] < args.len() {
                feature_at(&args[pos[0]], &pos[1..])
            } else {
                Feature::Gone
            }
        }
    }
}

pub fn fingerprint(t: &Term) -> Fingerprint {
    let mut fp = [Feature::Gone; 7];
    for (i, pos) in SAMPLE_POSITIONS.iter().enumerate() {
        fp[i] = feature_at(t, pos);
    }
    fp
}

/// Unification compatibility of two features (both terms may be
/// instantiated).
pub fn features_compatible(a: Feature, b: Feature) -> bool {
    use Feature::*;
    match (a, b) {
        (Below, _) | (_, Below) => true,
        (AtVar, Gone) | (Gone, AtVar) => false,
        (AtVar, _) | (_, AtVar) => true,
        (Gone, Gone) => true,
        (Sym(f), Sym(g)) => f == g,
        (Sym(_), Gone) | (Gone, Sym(_)) => false,
    }
}

pub fn compatible(a: &Fingerprint, b: &Fingerprint) -> bool {
    a.iter().zip(b.iter()).all(|(x, y)| features_compatible(*x, *y))
}

/// Candidate filter used by the prover: may two terms unify, judging only by
/// their fingerprints?
pub fn may_unify(s: &Term, t: &Term) -> bool {
    compatible(&fingerprint(s), &fingerprint(t))
}

/// Fingerprint index: buckets of entry ids keyed by fingerprint. Retrieval
/// scans buckets and keeps the compatible ones; entry sets are ordered so
/// results are deterministic.
#[derive(Default)]
pub struct FingerprintIndex {
    buckets: BTreeMap<Fingerprint, BTreeSet<usize>>,
}

impl FingerprintIndex {
    pub fn new() -> FingerprintIndex {
        FingerprintIndex::default()
    }

    pub fn insert(&mut self, t: &Term, id: usize) {
        self.buckets.entry(fingerprint(t)).or_default().insert(id);
    }

    pub fn remove(&mut self, t: &Term, id: usize) {
        let fp = fingerprint(t);
        if let Some(set) = self.buckets.get_mut(&fp) {
            set.remove(&id);
            if set.is_empty() {
                self.buckets.remove(&fp);
            }
        }
    }

    /// Ids of all stored terms whose fingerprint is compatible with `t`'s.
    pub fn retrieve(&self, t: &Term) -> BTreeSet<usize> {
        let fp = fingerprint(t);
        let mut out = BTreeSet::new();
        for (key, ids) in &self.buckets {
            if compatible(&fp, key) {
                out.extend(ids.iter().copied());
            }
        }
        out
    }
}

/// Top-symbol index: buckets keyed by root symbol, with a separate bucket
/// for variable terms. Much coarser than fingerprints but O(1) per lookup.
#[derive(Default)]
pub struct TopSymbolIndex {
    buckets: BTreeMap<Option<SymbolId>, BTreeSet<usize>>,
}

impl TopSymbolIndex {
    pub fn new() -> TopSymbolIndex {
        TopSymbolIndex::default()
    }

    fn key(t: &Term) -> Option<SymbolId> {
        t.top_symbol()
    }

    pub fn insert(&mut self, t: &Term, id: usize) {
        self.buckets.entry(Self::key(t)).or_default().insert(id);
    }

    pub fn remove(&mut self, t: &Term, id: usize) {
        let key = Self::key(t);
        if let Some(set) = self.buckets.get_mut(&key) {
            set.remove(&id);
            if set.is_empty() {
                self.buckets.remove(&key);
            }
        }
    }

    /// Ids of stored terms that could unify with `t` judging only by root
    /// symbols: same root, either side a variable.
    pub fn retrieve(&self, t: &Term) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        match Self::key(t) {
            None => {
                for ids in self.buckets.values() {
                    out.extend(ids.iter().copied());
                }
            }
            Some(f) => {
                if let Some(ids) = self.buckets.get(&Some(f)) {
                    out.extend(ids.iter().copied());
                }
                if let Some(ids) = self.buckets.get(&None) {
                    out.extend(ids.iter().copied());
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Signature;
    use crate::unify::mgu;

    fn setup() -> (Signature, SymbolId, SymbolId, SymbolId, SymbolId) {
        let mut sig = Signature::new();
        let i = sig.default_sort;
        let f = sig.add_symbol("f", &[i, i], i);
        let g = sig.add_symbol("g", &[i], i);
        let a = sig.add_symbol("a", &[], i);
        let b = sig.add_symbol("b", &[], i);
        (sig, f, g, a, b)
    }

    #[test]
    fn fingerprint_features() {
        let (sig, f, g, a, _) = setup();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        // f(x, g(a)): root f, arg0 at-var, arg1 g; below x everything Below,
        // under g only position .0 exists
        let t = Term::app(f, vec![x.clone(), Term::app(g, vec![Term::constant(a)])]);
        let fp = fingerprint(&t);
        assert_eq!(fp[0], Feature::Sym(f));
        assert_eq!(fp[1], Feature::AtVar);
        assert_eq!(fp[2], Feature::Sym(g));
        assert_eq!(fp[3], Feature::Below);
        assert_eq!(fp[4], Feature::Below);
        assert_eq!(fp[5], Feature::Sym(a));
        assert_eq!(fp[6], Feature::Gone);
        assert_eq!(fingerprint(&x), [Feature::AtVar, Feature::Below, Feature::Below,
            Feature::Below, Feature::Below, Feature::Below, Feature::Below]);
    }

    #[test]
    fn compatibility_table() {
        use Feature::*;
        let f = Sym(SymbolId(2));
        let g = Sym(SymbolId(3));
        assert!(features_compatible(f, f));
        assert!(!features_compatible(f, g));
        assert!(features_compatible(f, AtVar));
        assert!(features_compatible(f, Below));
        assert!(!features_compatible(f, Gone));
        assert!(features_compatible(AtVar, AtVar));
        assert!(features_compatible(AtVar, Below));
        assert!(!features_compatible(AtVar, Gone));
        assert!(features_compatible(Below, Gone));
        assert!(features_compatible(Gone, Gone));
    }

    #[test]
    fn filter_never_rejects_unifiable() {
        // hand-picked pairs: whenever mgu succeeds, may_unify must agree
        let (sig, f, g, a, b) = setup();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        let y = Term::var(1, i);
        let terms = vec![
            x.clone(),
            Term::constant(a),
            Term::constant(b),
            Term::app(g, vec![x.clone()]),
            Term::app(g, vec![Term::constant(a)]),
            Term::app(f, vec![x.clone(), y.clone()]),
            Term::app(f, vec![Term::constant(a), Term::app(g, vec![y.clone()])]),
            Term::app(f, vec![Term::app(g, vec![x.clone()]), Term::constant(b)]),
        ];
        for s in &terms {
            for t in &terms {
                let t2 = t.shift_vars(10);
                let unifies = mgu(&sig, s, &t2).unwrap().unifier().is_some();
                if unifies {
                    assert!(may_unify(s, &t2), "filter rejected {:?} vs {:?}", s, t2);
                }
            }
        }
        // and it does prune: g(a) vs g(b) share roots but cannot unify
        assert!(!may_unify(
            &Term::app(g, vec![Term::constant(a)]),
            &Term::app(g, vec![Term::constant(b)])
        ));
    }

    #[test]
    fn fingerprint_index_roundtrip() {
        let (sig, f, g, a, b) = setup();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        let ga = Term::app(g, vec![Term::constant(a)]);
        let gb = Term::app(g, vec![Term::constant(b)]);
        let mut idx = FingerprintIndex::new();
        idx.insert(&ga, 1);
        idx.insert(&gb, 2);
        idx.insert(&x, 3);
        let hits = idx.retrieve(&Term::app(g, vec![x.clone()]));
        assert_eq!(hits, BTreeSet::from([1, 2, 3]));
        let hits = idx.retrieve(&ga);
        assert_eq!(hits, BTreeSet::from([1, 3]));
        idx.remove(&ga, 1);
        assert_eq!(idx.retrieve(&ga), BTreeSet::from([3]));
        let _ = f;
    }

    #[test]
    fn top_symbol_index_roundtrip() {
        let (sig, f, g, a, _) = setup();
        let i = sig.default_sort;
        let x = Term::var(0, i);
        let ga = Term::app(g, vec![Term::constant(a)]);
        let fa = Term::app(f, vec![Term::constant(a), Term::constant(a)]);
        let mut idx = TopSymbolIndex::new();
        idx.insert(&ga, 1);
        idx.insert(&fa, 2);
        idx.insert(&x, 3);
        assert_eq!(idx.retrieve(&Term::app(g, vec![x.clone()])), BTreeSet::from([1, 3]));
        assert_eq!(idx.retrieve(&x), BTreeSet::from([1, 2, 3]));
        idx.remove(&x, 3);
        assert_eq!(idx.retrieve(&fa), BTreeSet::from([2]));
    }
}
