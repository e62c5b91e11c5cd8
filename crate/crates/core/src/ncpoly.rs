//! Words and polynomials in the free associative algebra.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;
use thiserror::Error;

use crate::scalar::{Scalar, ScalarError, ScalarField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("generator priority is not a permutation of 0..{0}")]
    BadPriority(usize),
}

/// Position of a generator in the generator list of a presentation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct GeneratorId(pub u16);

impl GeneratorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A monomial of the free algebra: a finite sequence of generators.
///
/// The derived `Ord` is degree-lexicographic with the identity generator
/// priority: shorter words first, then lexicographic by generator index.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[GeneratorId; 8]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(letters: I) -> Self {
        Word(letters.into_iter().map(|i| GeneratorId(i as u16)).collect())
    }

    pub fn letter(g: usize) -> Self {
        Self::from_indices([g])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Sum of generator weights.
    pub fn weighted_degree(&self, weights: &[u32]) -> u32 {
        self.0.iter().map(|g| weights[g.index()]).sum()
    }

    pub fn letters(&self) -> &[GeneratorId] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// `left · self · right`
    pub fn sandwich(&self, left: &[GeneratorId], right: &[GeneratorId]) -> Word {
        let mut v = SmallVec::with_capacity(left.len() + self.0.len() + right.len());
        v.extend_from_slice(left);
        v.extend_from_slice(&self.0);
        v.extend_from_slice(right);
        Word(v)
    }

    /// First position at which `factor` occurs as a contiguous subword.
    pub fn find_factor(&self, factor: &Word) -> Option<usize> {
        if factor.degree() > self.degree() {
            return None;
        }
        (0..=self.degree() - factor.degree())
            .find(|&i| self.0[i..i + factor.degree()] == factor.0[..])
    }

    pub fn map_letters(&self, f: impl Fn(GeneratorId) -> GeneratorId) -> Word {
        Word(self.0.iter().map(|&g| f(g)).collect())
    }
}

impl Deref for Word {
    type Target = [GeneratorId];

    fn deref(&self) -> &[GeneratorId] {
        &self.0
    }
}

// Hash and Eq agree with the slice; Ord does not, so slice keys are only
// for hashed lookups.
impl std::borrow::Borrow<[GeneratorId]> for Word {
    fn borrow(&self) -> &[GeneratorId] {
        &self.0
    }
}

impl From<&[GeneratorId]> for Word {
    fn from(s: &[GeneratorId]) -> Self {
        Word(SmallVec::from_slice(s))
    }
}

impl FromIterator<GeneratorId> for Word {
    fn from_iter<I: IntoIterator<Item = GeneratorId>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{}", g.0)?;
        }
        Ok(())
    }
}

/// Degree-lexicographic order with a configurable generator priority.
///
/// `priority[r]` is the generator ranked `r`-th smallest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    priority: Vec<GeneratorId>,
    rank: Vec<u16>,
}

impl MonomialOrder {
    pub fn identity(num_generators: usize) -> Self {
        Self::from_priority((0..num_generators).map(|i| GeneratorId(i as u16)).collect()).unwrap()
    }

    pub fn from_priority(priority: Vec<GeneratorId>) -> Result<Self, PolyError> {
        let n = priority.len();
        let mut rank = vec![u16::MAX; n];
        for (r, g) in priority.iter().enumerate() {
            if g.index() >= n || rank[g.index()] != u16::MAX {
                return Err(PolyError::BadPriority(n));
            }
            rank[g.index()] = r as u16;
        }
        Ok(MonomialOrder { priority, rank })
    }

    /// A seeded pseudo-random priority; reproducible across platforms.
    pub fn shuffled(num_generators: usize, seed: u64) -> Self {
        let mut p: Vec<GeneratorId> = (0..num_generators).map(|i| GeneratorId(i as u16)).collect();
        p.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self::from_priority(p).unwrap()
    }

    pub fn num_generators(&self) -> usize {
        self.priority.len()
    }

    pub fn priority(&self) -> &[GeneratorId] {
        &self.priority
    }

    pub fn rank_of(&self, g: GeneratorId) -> GeneratorId {
        GeneratorId(self.rank[g.index()])
    }

    pub fn is_identity(&self) -> bool {
        self.priority
            .iter()
            .enumerate()
            .all(|(i, g)| g.index() == i)
    }

    pub fn compare(&self, a: &Word, b: &Word) -> Ordering {
        a.degree().cmp(&b.degree()).then_with(|| {
            a.iter()
                .map(|&g| self.rank[g.index()])
                .cmp(b.iter().map(|&g| self.rank[g.index()]))
        })
    }
}

/// Deglex comparison of two words under `ord`.
pub fn compare(a: &Word, b: &Word, ord: &MonomialOrder) -> Ordering {
    ord.compare(a, b)
}

/// A noncommutative polynomial: a finite map from words to nonzero scalars.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NCPolynomial {
    terms: BTreeMap<Word, Scalar>,
}

impl NCPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(Word::empty(), c)
    }

    pub fn monomial(w: Word, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NCPolynomial { terms }
    }

    pub fn letter(g: usize) -> Self {
        Self::monomial(Word::letter(g), Scalar::from(1))
    }

    /// Builds a polynomial from `(coefficient, word)` pairs, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (Scalar, Word)>>(terms: I) -> Result<Self, PolyError> {
        let mut p = Self::zero();
        for (c, w) in terms {
            p.add_term(w, &c)?;
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing identity-deglex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Option<&Scalar> {
        self.terms.get(w)
    }

    /// Field of the coefficients; `None` for the zero polynomial.
    pub fn field(&self) -> Option<ScalarField> {
        self.terms.values().next().map(|c| c.field())
    }

    pub fn add_term(&mut self, w: Word, c: &Scalar) -> Result<(), PolyError> {
        if c.is_zero() {
            return Ok(());
        }
        if let Some(f) = self.field() {
            if f != c.field() {
                return Err(ScalarError::MixedFields(f, c.field()).into());
            }
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().try_add(c)?;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        let mut r = self.clone();
        for (w, c) in &other.terms {
            r.add_term(w.clone(), c)?;
        }
        Ok(r)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        NCPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Result<Self, PolyError> {
        if s.is_zero() {
            return Ok(Self::zero());
        }
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            terms.insert(w.clone(), c.try_mul(s)?);
        }
        Ok(NCPolynomial { terms })
    }

    /// Bilinear extension of word concatenation.
    pub fn multiply(&self, other: &Self) -> Result<Self, PolyError> {
        let mut r = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                r.add_term(u.concat(v), &a.try_mul(b)?)?;
            }
        }
        Ok(r)
    }

    /// Maximal word under `ord` with its coefficient.
    pub fn leading_term(&self, ord: &MonomialOrder) -> Result<(Word, Scalar), PolyError> {
        self.terms
            .iter()
            .max_by(|a, b| ord.compare(a.0, b.0))
            .map(|(w, c)| (w.clone(), c.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// `Some(d)` iff every word has length `d`. The zero polynomial has no degree.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|w| w.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Like [`homogeneous_degree`](Self::homogeneous_degree) for weighted generators.
    pub fn weighted_homogeneous_degree(&self, weights: &[u32]) -> Option<u32> {
        let mut it = self.terms.keys().map(|w| w.weighted_degree(weights));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.degree()).max()
    }

    pub fn map_letters(&self, f: impl Fn(GeneratorId) -> GeneratorId) -> Self {
        NCPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.map_letters(&f), c.clone()))
                .collect(),
        }
    }

    /// Maps every coefficient into `field` (rationals only as a source).
    pub fn to_field(&self, field: ScalarField) -> Result<Self, PolyError> {
        let mut r = Self::zero();
        for (w, c) in &self.terms {
            let c = match (c, field) {
                (Scalar::Rational(q), f) => f.from_rational(q)?,
                (c, f) if c.field() == f => c.clone(),
                (c, f) => return Err(ScalarError::MixedFields(c.field(), f).into()),
            };
            r.add_term(w.clone(), &c)?;
        }
        Ok(r)
    }
}

impl fmt::Debug for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{:?}*{:?}", c, w)?;
        }
        Ok(())
    }
}

/// Free-function form of [`NCPolynomial::multiply`].
pub fn multiply(f: &NCPolynomial, g: &NCPolynomial) -> Result<NCPolynomial, PolyError> {
    f.multiply(g)
}

/// Free-function form of [`NCPolynomial::leading_term`].
pub fn leading_term(f: &NCPolynomial, ord: &MonomialOrder) -> Result<(Word, Scalar), PolyError> {
    f.leading_term(ord)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(ix: &[usize]) -> Word {
        Word::from_indices(ix.iter().copied())
    }

    fn x(i: usize) -> NCPolynomial {
        NCPolynomial::letter(i)
    }

    fn all_words(gens: usize, max_deg: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max_deg {
            let mut next = Vec::new();
            for u in &layer {
                for g in 0..gens {
                    next.push(u.concat(&Word::letter(g)));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    #[test]
    fn compare_examples() {
        let ord = MonomialOrder::identity(3);
        assert_eq!(compare(&Word::empty(), &w(&[0]), &ord), Ordering::Less);
        assert_eq!(compare(&w(&[0, 1]), &w(&[1, 0]), &ord), Ordering::Less);
        assert_eq!(
            compare(&w(&[0, 0, 0]), &w(&[0, 1]), &ord),
            Ordering::Greater
        );
        let rev =
            MonomialOrder::from_priority(vec![GeneratorId(2), GeneratorId(1), GeneratorId(0)])
                .unwrap();
        assert_eq!(compare(&w(&[0, 1]), &w(&[1, 0]), &rev), Ordering::Greater);
    }

    #[test]
    fn bad_priority() {
        assert!(MonomialOrder::from_priority(vec![GeneratorId(0), GeneratorId(0)]).is_err());
        assert!(MonomialOrder::from_priority(vec![GeneratorId(2), GeneratorId(0)]).is_err());
    }

    #[test]
    fn multiply_examples() {
        let f = x(0).try_add(&x(1)).unwrap();
        let g = x(0).try_sub(&x(1)).unwrap();
        let expected = NCPolynomial::from_terms([
            (Scalar::from(1), w(&[0, 0])),
            (Scalar::from(-1), w(&[0, 1])),
            (Scalar::from(1), w(&[1, 0])),
            (Scalar::from(-1), w(&[1, 1])),
        ])
        .unwrap();
        assert_eq!(f.multiply(&g).unwrap(), expected);
        assert_eq!(
            f.multiply(&NCPolynomial::constant(Scalar::from(1)))
                .unwrap(),
            f
        );
        let x01 = NCPolynomial::monomial(w(&[0, 1]), Scalar::from(1));
        assert_eq!(
            multiply(&x01, &x(2)).unwrap(),
            NCPolynomial::monomial(w(&[0, 1, 2]), Scalar::from(1))
        );
    }

    #[test]
    fn multiply_mixed_moduli_fails() {
        let a = NCPolynomial::monomial(w(&[0]), ScalarField::Prime(7).one());
        let b = NCPolynomial::monomial(w(&[1]), ScalarField::Prime(11).one());
        assert!(matches!(
            a.multiply(&b),
            Err(PolyError::Scalar(ScalarError::MixedFields(..)))
        ));
    }

    #[test]
    fn leading_term_examples() {
        let ord = MonomialOrder::identity(2);
        let p = NCPolynomial::from_terms([
            (Scalar::from(1), w(&[0, 1])),
            (Scalar::from(1), w(&[1, 0])),
        ])
        .unwrap();
        assert_eq!(
            leading_term(&p, &ord).unwrap(),
            (w(&[1, 0]), Scalar::from(1))
        );
        assert_eq!(
            NCPolynomial::constant(Scalar::from(3))
                .leading_term(&ord)
                .unwrap(),
            (Word::empty(), Scalar::from(3))
        );
        let q =
            NCPolynomial::from_terms([(Scalar::from(1), w(&[0])), (Scalar::from(-1), w(&[0, 1]))])
                .unwrap();
        assert_eq!(
            q.leading_term(&ord).unwrap(),
            (w(&[0, 1]), Scalar::from(-1))
        );
        assert_eq!(
            NCPolynomial::zero().leading_term(&ord),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn homogeneity() {
        let p = NCPolynomial::from_terms([
            (Scalar::from(1), w(&[0, 1])),
            (Scalar::from(2), w(&[1, 1])),
        ])
        .unwrap();
        assert_eq!(p.homogeneous_degree(), Some(2));
        let q = p.try_add(&x(0)).unwrap();
        assert_eq!(q.homogeneous_degree(), None);
        assert_eq!(q.weighted_homogeneous_degree(&[2, 1]), None);
        let r =
            NCPolynomial::from_terms([(Scalar::from(1), w(&[0])), (Scalar::from(-1), w(&[1, 1]))])
                .unwrap();
        assert_eq!(r.weighted_homogeneous_degree(&[2, 1]), Some(2));
        assert_eq!(NCPolynomial::zero().homogeneous_degree(), None);
    }

    #[test]
    fn zero_terms_dropped() {
        let p = x(0).try_sub(&x(0)).unwrap();
        assert!(p.is_zero());
        assert!(NCPolynomial::monomial(w(&[1]), Scalar::from(0)).is_zero());
    }

    #[test]
    fn order_is_strict_total_on_small_words() {
        let words = all_words(3, 4);
        for seed in 0..3 {
            let ord = MonomialOrder::shuffled(3, seed);
            for a in &words {
                for b in &words {
                    let ab = ord.compare(a, b);
                    assert_eq!(ab, ord.compare(b, a).reverse());
                    assert_eq!(ab == Ordering::Equal, a == b);
                }
            }
            let mut sorted = words.clone();
            sorted.sort_by(|a, b| ord.compare(a, b));
            for win in sorted.windows(2) {
                assert_eq!(ord.compare(&win[0], &win[1]), Ordering::Less);
            }
            // transitivity over a sorted chain plus random triples
            for a in words.iter().step_by(7) {
                for b in words.iter().step_by(5) {
                    for c in words.iter().step_by(11) {
                        if ord.compare(a, b) == Ordering::Less
                            && ord.compare(b, c) == Ordering::Less
                        {
                            assert_eq!(ord.compare(a, c), Ordering::Less);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn order_is_multiplicative() {
        let ord = MonomialOrder::shuffled(2, 7);
        let words = all_words(2, 3);
        let ctx = all_words(2, 2);
        for u in &words {
            for v in &words {
                if ord.compare(u, v) != Ordering::Less {
                    continue;
                }
                for a in &ctx {
                    for b in &ctx {
                        if a.degree() + v.degree().max(u.degree()) + b.degree() > 6 {
                            continue;
                        }
                        let au_b = u.sandwich(a, b);
                        let av_b = v.sandwich(a, b);
                        assert_eq!(ord.compare(&au_b, &av_b), Ordering::Less);
                    }
                }
            }
        }
    }

    fn arb_poly() -> impl Strategy<Value = NCPolynomial> {
        prop::collection::vec((-5i64..=5, prop::collection::vec(0usize..3, 0..=3)), 0..=4).prop_map(
            |ts| {
                NCPolynomial::from_terms(
                    ts.into_iter()
                        .map(|(c, l)| (Scalar::from(c), Word::from_indices(l))),
                )
                .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn ring_axioms(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            let fg_h = f.multiply(&g).unwrap().multiply(&h).unwrap();
            let f_gh = f.multiply(&g.multiply(&h).unwrap()).unwrap();
            prop_assert_eq!(fg_h, f_gh);
            let left = f.multiply(&g.try_add(&h).unwrap()).unwrap();
            let right = f.multiply(&g).unwrap().try_add(&f.multiply(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let left = g.try_add(&h).unwrap().multiply(&f).unwrap();
            let right = g.multiply(&f).unwrap().try_add(&h.multiply(&f).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            prop_assert!(f.terms().all(|(_, c)| !c.is_zero()));
        }
    }
}
