//! Degree-truncated noncommutative Buchberger procedure for graded
//! two-sided ideals, normal forms, and normal-word counting.
//!
//! The ideal is processed one (weighted) degree at a time. In degree `d` all
//! overlap obstructions whose S-word has degree `d`, together with the input
//! relations of degree `d`, are reduced against the frozen basis of degree
//! `< d`; the nonzero remainders are brought to reduced echelon form and
//! become the new basis elements of degree `d`. Since every polynomial
//! involved is homogeneous, new elements never reduce older ones, and the
//! basis stays reduced without a separate interreduction pass.
//!
//! Internally generators are relabelled by their rank in the monomial
//! order, so that the derived `Ord` on [`Word`] is the working order.

mod automaton;

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use automaton::ForbiddenFactorAutomaton;

use crate::ncpoly::{GeneratorId, MonomialOrder, NCPolynomial, PolyError, Word};
use crate::presentations::Presentation;
use crate::scalar::{Scalar, ScalarError, ScalarField};

#[derive(Debug, Error)]
pub enum GroebnerError {
    #[error("max_degree {max_degree} is below the largest relation degree {relation_degree}")]
    MaxDegreeTooSmall {
        max_degree: u32,
        relation_degree: u32,
    },
    #[error("order has {order} generators, presentation has {presentation}")]
    OrderMismatch { order: usize, presentation: usize },
    #[error("{kind} budget exceeded; basis complete through degree {}", .partial.complete_to())]
    BudgetExceeded {
        kind: BudgetKind,
        partial: Box<TruncatedGroebnerBasis>,
    },
    #[error("degree {degree} exceeds the completeness bound {complete_to}")]
    BeyondCompleteness { degree: u32, complete_to: u32 },
    #[error("normal-word count overflows u64 by degree {0}")]
    CountOverflow(u32),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetKind {
    BasisSize,
    Reductions,
    Time,
}

impl std::fmt::Display for BudgetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BudgetKind::BasisSize => "basis size",
            BudgetKind::Reductions => "reduction",
            BudgetKind::Time => "time",
        })
    }
}

#[derive(Debug, Clone)]
pub struct GroebnerOptions {
    /// Coefficient field; relation coefficients are mapped into it.
    pub field: ScalarField,
    pub max_basis_size: Option<usize>,
    pub max_reductions: Option<u64>,
    pub time_limit: Option<Duration>,
    /// Worker threads for reducing S-polynomials; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for GroebnerOptions {
    fn default() -> Self {
        GroebnerOptions {
            field: ScalarField::Rational,
            max_basis_size: None,
            max_reductions: None,
            time_limit: None,
            workers: None,
        }
    }
}

/// Overlap of two leading words: `lead(left) = a·s`, `lead(right) = s·b`
/// with `a`, `s`, `b` nonempty and `shift = |a|`. The S-word is `a·s·b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obstruction {
    pub left: usize,
    pub right: usize,
    pub shift: usize,
    pub degree: u32,
}

/// A basis element in working letters, terms sorted descending, monic.
#[derive(Debug, Clone)]
struct Element {
    terms: Vec<(Word, Scalar)>,
    degree: u32,
}

impl Element {
    fn lead(&self) -> &Word {
        &self.terms[0].0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerStats {
    pub obstructions: u64,
    pub relations_reduced: u64,
    pub zero_reductions: u64,
    /// Basis elements added in each degree, index = degree.
    pub added_per_degree: Vec<usize>,
}

/// Trie over leading words for factor lookup during reduction.
#[derive(Debug, Clone)]
struct LeadTrie {
    alphabet: usize,
    children: Vec<u32>,
    terminal: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl LeadTrie {
    fn new(alphabet: usize) -> Self {
        LeadTrie {
            alphabet,
            children: vec![NONE; alphabet],
            terminal: vec![NONE],
        }
    }

    fn insert(&mut self, w: &[GeneratorId], idx: usize) {
        let mut s = 0usize;
        for g in w {
            let slot = s * self.alphabet + g.index();
            if self.children[slot] == NONE {
                self.children[slot] = self.terminal.len() as u32;
                self.terminal.push(NONE);
                self.children
                    .extend(std::iter::repeat_n(NONE, self.alphabet));
            }
            s = self.children[slot] as usize;
        }
        self.terminal[s] = idx as u32;
    }

    /// Leftmost occurrence of some leading word in `w`: `(element, start)`.
    fn find(&self, w: &[GeneratorId]) -> Option<(usize, usize)> {
        if self.terminal[0] != NONE {
            return Some((self.terminal[0] as usize, 0));
        }
        for start in 0..w.len() {
            let mut s = 0usize;
            for g in &w[start..] {
                s = self.children[s * self.alphabet + g.index()] as usize;
                if s == NONE as usize {
                    break;
                }
                if self.terminal[s] != NONE {
                    return Some((self.terminal[s] as usize, start));
                }
            }
        }
        None
    }
}

/// A basis resolving every obstruction of degree `<= complete_to`.
#[derive(Debug, Clone)]
pub struct TruncatedGroebnerBasis {
    presentation: Presentation,
    order: MonomialOrder,
    field: ScalarField,
    /// Generator weights in working letters.
    weights: Vec<u32>,
    max_degree: u32,
    complete_to: u32,
    elements: Vec<Element>,
    trie: LeadTrie,
    /// Pending obstructions keyed by degree.
    pending: BTreeMap<u32, Vec<Obstruction>>,
    prefix_index: HashMap<Word, Vec<u32>>,
    suffix_index: HashMap<Word, Vec<u32>>,
    stats: GroebnerStats,
}

impl TruncatedGroebnerBasis {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn complete_to(&self) -> u32 {
        self.complete_to
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn stats(&self) -> &GroebnerStats {
        &self.stats
    }

    fn to_external(&self, w: &Word) -> Word {
        let pr = self.order.priority();
        w.map_letters(|g| pr[g.index()])
    }

    fn to_internal(&self, w: &Word) -> Word {
        w.map_letters(|g| self.order.rank_of(g))
    }

    /// Basis elements in the presentation's generator labels, sorted by
    /// degree and then by leading word.
    pub fn elements(&self) -> Vec<NCPolynomial> {
        self.elements
            .iter()
            .map(|e| {
                let mut p = NCPolynomial::zero();
                for (w, c) in &e.terms {
                    p.add_term(self.to_external(w), c)
                        .expect("basis coefficients share a field");
                }
                p
            })
            .collect()
    }

    /// Leading words in the presentation's generator labels.
    pub fn leading_words(&self) -> Vec<Word> {
        self.elements
            .iter()
            .map(|e| self.to_external(e.lead()))
            .collect()
    }

    /// Automaton over working letters forbidding every leading word.
    fn automaton(&self) -> ForbiddenFactorAutomaton {
        let leads: Vec<Vec<u16>> = self
            .elements
            .iter()
            .map(|e| e.lead().iter().map(|g| g.0).collect())
            .collect();
        ForbiddenFactorAutomaton::new(self.weights.len(), leads.iter().map(|l| l.as_slice()))
    }

    /// Reduces a polynomial (working letters) to normal form modulo the basis.
    fn reduce(&self, mut work: BTreeMap<Word, Scalar>) -> Result<Vec<(Word, Scalar)>, ScalarError> {
        let mut out = Vec::new();
        while let Some((w, c)) = work.pop_last() {
            match self.trie.find(&w) {
                Some((idx, start)) => {
                    let g = &self.elements[idx];
                    let (left, right) = (&w[..start], &w[start + g.lead().degree()..]);
                    for (tw, tc) in &g.terms[1..] {
                        add_into(&mut work, tw.sandwich(left, right), &c.try_mul(tc)?.neg())?;
                    }
                }
                None => out.push((w, c)),
            }
        }
        Ok(out)
    }

    fn s_polynomial(&self, ob: &Obstruction) -> Result<BTreeMap<Word, Scalar>, ScalarError> {
        let (l, r) = (&self.elements[ob.left], &self.elements[ob.right]);
        let overlap = l.lead().degree() - ob.shift;
        let a = &l.lead()[..ob.shift];
        let b = &r.lead()[overlap..];
        let mut work = BTreeMap::new();
        for (w, c) in &l.terms[1..] {
            add_into(&mut work, w.sandwich(&[], b), c)?;
        }
        for (w, c) in &r.terms[1..] {
            add_into(&mut work, w.sandwich(a, &[]), &c.neg())?;
        }
        Ok(work)
    }

    fn push_element(&mut self, terms: Vec<(Word, Scalar)>, degree: u32) {
        let j = self.elements.len();
        let lead = terms[0].0.clone();
        self.trie.insert(&lead, j);
        self.elements.push(Element { terms, degree });
        let len = lead.degree();
        for k in 1..len {
            self.prefix_index
                .entry(Word::from(&lead[..k]))
                .or_default()
                .push(j as u32);
            self.suffix_index
                .entry(Word::from(&lead[len - k..]))
                .or_default()
                .push(j as u32);
        }
        let weight = |w: &[GeneratorId]| -> u32 { w.iter().map(|g| self.weights[g.index()]).sum() };
        let mut fresh = Vec::new();
        // j on the left: a proper suffix of lead(j) is a proper prefix of lead(i)
        for k in 1..len {
            if let Some(list) = self.prefix_index.get(&lead[len - k..]) {
                for &i in list {
                    let d = weight(&lead[..len - k]) + self.elements[i as usize].degree;
                    fresh.push(Obstruction {
                        left: j,
                        right: i as usize,
                        shift: len - k,
                        degree: d,
                    });
                }
            }
        }
        // j on the right
        for k in 1..len {
            if let Some(list) = self.suffix_index.get(&lead[..k]) {
                for &i in list {
                    if i as usize == j {
                        continue;
                    }
                    let li = self.elements[i as usize].lead();
                    let shift = li.degree() - k;
                    let d = weight(&li[..shift]) + degree;
                    fresh.push(Obstruction {
                        left: i as usize,
                        right: j,
                        shift,
                        degree: d,
                    });
                }
            }
        }
        for ob in fresh {
            if ob.degree <= self.max_degree {
                self.pending.entry(ob.degree).or_default().push(ob);
            }
        }
    }

    /// Words of the S-polynomial's overlap: `a·s·b`, in presentation labels.
    pub fn s_word(&self, ob: &Obstruction) -> Word {
        let l = self.elements[ob.left].lead();
        let r = self.elements[ob.right].lead();
        self.to_external(&r.sandwich(&l[..ob.shift], &[]))
    }

    /// Obstructions of degree `> complete_to` that are still unresolved.
    pub fn pending_obstructions(&self) -> impl Iterator<Item = &Obstruction> {
        self.pending.values().flatten()
    }
}

fn add_into(work: &mut BTreeMap<Word, Scalar>, w: Word, c: &Scalar) -> Result<(), ScalarError> {
    use std::collections::btree_map::Entry;
    match work.entry(w) {
        Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        Entry::Occupied(mut e) => {
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

fn make_monic(terms: &mut [(Word, Scalar)]) -> Result<(), ScalarError> {
    let inv = terms[0].1.inv()?;
    for (_, c) in terms.iter_mut() {
        *c = c.try_mul(&inv)?;
    }
    Ok(())
}

/// Reduced echelon form of homogeneous remainders of one degree. Every
/// input is already in normal form modulo the lower-degree basis.
fn echelon(rems: Vec<Vec<(Word, Scalar)>>) -> Result<Vec<Vec<(Word, Scalar)>>, ScalarError> {
    let mut pivots: BTreeMap<Word, Vec<(Word, Scalar)>> = BTreeMap::new();
    for r in rems {
        let mut work: BTreeMap<Word, Scalar> = r.into_iter().collect();
        let mut out = Vec::new();
        while let Some((w, c)) = work.pop_last() {
            match pivots.get(&w) {
                Some(p) => {
                    for (tw, tc) in &p[1..] {
                        add_into(&mut work, tw.clone(), &c.try_mul(tc)?.neg())?;
                    }
                }
                None => out.push((w, c)),
            }
        }
        if !out.is_empty() {
            make_monic(&mut out)?;
            pivots.insert(out[0].0.clone(), out);
        }
    }
    // Back substitution in ascending lead order: tails of a pivot only hold
    // words below its lead, and smaller pivots are already fully reduced.
    let leads: Vec<Word> = pivots.keys().cloned().collect();
    for lead in leads {
        let p = pivots.remove(&lead).unwrap();
        let mut work: BTreeMap<Word, Scalar> = p[1..].iter().cloned().collect();
        let mut out = vec![p[0].clone()];
        while let Some((w, c)) = work.pop_last() {
            match pivots.get(&w) {
                Some(q) if w < lead => {
                    for (tw, tc) in &q[1..] {
                        add_into(&mut work, tw.clone(), &c.try_mul(tc)?.neg())?;
                    }
                }
                _ => out.push((w, c)),
            }
        }
        pivots.insert(lead, out);
    }
    Ok(pivots.into_values().collect())
}

/// Truncated Gröbner basis of the ideal of `p` through degree `max_degree`
/// with default options (exact rationals, no budgets).
pub fn truncated_groebner(
    p: &Presentation,
    ord: &MonomialOrder,
    max_degree: u32,
) -> Result<TruncatedGroebnerBasis, GroebnerError> {
    truncated_groebner_with(p, ord, max_degree, &GroebnerOptions::default())
}

pub fn truncated_groebner_with(
    p: &Presentation,
    ord: &MonomialOrder,
    max_degree: u32,
    opts: &GroebnerOptions,
) -> Result<TruncatedGroebnerBasis, GroebnerError> {
    if ord.num_generators() != p.num_generators() {
        return Err(GroebnerError::OrderMismatch {
            order: ord.num_generators(),
            presentation: p.num_generators(),
        });
    }
    if max_degree < p.max_relation_degree() {
        return Err(GroebnerError::MaxDegreeTooSmall {
            max_degree,
            relation_degree: p.max_relation_degree(),
        });
    }
    match opts.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .expect("thread pool");
            pool.install(|| build(p, ord, max_degree, opts))
        }
        None => build(p, ord, max_degree, opts),
    }
}

fn build(
    p: &Presentation,
    ord: &MonomialOrder,
    max_degree: u32,
    opts: &GroebnerOptions,
) -> Result<TruncatedGroebnerBasis, GroebnerError> {
    let start = Instant::now();
    let m = p.num_generators();
    let weights: Vec<u32> = ord
        .priority()
        .iter()
        .map(|g| p.degrees()[g.index()])
        .collect();
    let mut gb = TruncatedGroebnerBasis {
        presentation: p.clone(),
        order: ord.clone(),
        field: opts.field,
        weights,
        max_degree,
        complete_to: 0,
        elements: Vec::new(),
        trie: LeadTrie::new(m),
        pending: BTreeMap::new(),
        prefix_index: HashMap::new(),
        suffix_index: HashMap::new(),
        stats: GroebnerStats {
            added_per_degree: vec![0],
            ..Default::default()
        },
    };

    let mut relations: BTreeMap<u32, Vec<BTreeMap<Word, Scalar>>> = BTreeMap::new();
    for r in p.relations() {
        let r = r.to_field(opts.field)?;
        let d = r
            .weighted_homogeneous_degree(p.degrees())
            .expect("presentations are homogeneous");
        let work: BTreeMap<Word, Scalar> = r
            .terms()
            .map(|(w, c)| (gb.to_internal(w), c.clone()))
            .collect();
        relations.entry(d).or_default().push(work);
    }

    let cancelled = AtomicBool::new(false);
    let mut reductions = 0u64;
    for d in 1..=max_degree {
        let rels = relations.remove(&d).unwrap_or_default();
        let mut obs = gb.pending.remove(&d).unwrap_or_default();
        obs.sort_unstable_by_key(|o| (o.left, o.right, o.shift));
        let tasks = (rels.len() + obs.len()) as u64;

        let over_time = |_: ()| opts.time_limit.is_some_and(|t| start.elapsed() > t);
        if opts
            .max_reductions
            .is_some_and(|cap| reductions + tasks > cap)
        {
            return Err(abort(gb, BudgetKind::Reductions));
        }
        if over_time(()) {
            return Err(abort(gb, BudgetKind::Time));
        }
        reductions += tasks;

        let reduce_all =
            |inputs: Vec<BTreeMap<Word, Scalar>>| -> Result<Vec<Vec<(Word, Scalar)>>, ScalarError> {
                inputs
                    .into_par_iter()
                    .map(|w| {
                        if cancelled.load(AtomicOrdering::Relaxed) {
                            return Ok(Vec::new());
                        }
                        if over_time(()) {
                            cancelled.store(true, AtomicOrdering::Relaxed);
                            return Ok(Vec::new());
                        }
                        gb.reduce(w)
                    })
                    .collect()
            };
        let mut inputs = rels;
        inputs.extend(
            obs.par_iter()
                .map(|o| gb.s_polynomial(o))
                .collect::<Result<Vec<_>, _>>()?,
        );
        let rems = reduce_all(inputs)?;
        if cancelled.load(AtomicOrdering::Relaxed) {
            return Err(abort(gb, BudgetKind::Time));
        }

        gb.stats.obstructions += obs.len() as u64;
        gb.stats.relations_reduced += tasks - obs.len() as u64;
        gb.stats.zero_reductions += rems.iter().filter(|r| r.is_empty()).count() as u64;
        let new = echelon(rems.into_iter().filter(|r| !r.is_empty()).collect())?;
        gb.stats.added_per_degree.push(new.len());
        for terms in new {
            gb.push_element(terms, d);
        }
        gb.complete_to = d;
        if opts
            .max_basis_size
            .is_some_and(|cap| gb.elements.len() > cap)
            && d < max_degree
        {
            return Err(abort(gb, BudgetKind::BasisSize));
        }
    }
    Ok(gb)
}

fn abort(gb: TruncatedGroebnerBasis, kind: BudgetKind) -> GroebnerError {
    GroebnerError::BudgetExceeded {
        kind,
        partial: Box::new(gb),
    }
}

/// Normal form of `f` modulo the basis; every word of `f` must have degree
/// at most `complete_to`.
pub fn normal_form(
    f: &NCPolynomial,
    gb: &TruncatedGroebnerBasis,
) -> Result<NCPolynomial, GroebnerError> {
    let degrees = gb.presentation.degrees();
    if let Some(d) = f.terms().map(|(w, _)| w.weighted_degree(degrees)).max() {
        if d > gb.complete_to {
            return Err(GroebnerError::BeyondCompleteness {
                degree: d,
                complete_to: gb.complete_to,
            });
        }
    }
    let f = f.to_field(gb.field)?;
    let work = f
        .terms()
        .map(|(w, c)| (gb.to_internal(w), c.clone()))
        .collect();
    let mut out = NCPolynomial::zero();
    for (w, c) in gb.reduce(work)? {
        out.add_term(gb.to_external(&w), &c)?;
    }
    Ok(out)
}

/// Graded dimensions of a graded algebra, possibly only a prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeries {
    /// Index = degree.
    pub coefficients: Vec<u64>,
    /// Coefficients at degrees `<= exact_to` are exact.
    pub exact_to: usize,
    /// The series is a polynomial and every nonzero coefficient is present.
    pub complete: bool,
}

impl HilbertSeries {
    pub fn complete(coefficients: Vec<u64>) -> Self {
        let exact_to = coefficients.len().saturating_sub(1);
        HilbertSeries {
            coefficients,
            exact_to,
            complete: true,
        }
    }

    pub fn prefix(coefficients: Vec<u64>) -> Self {
        let exact_to = coefficients.len().saturating_sub(1);
        HilbertSeries {
            coefficients,
            exact_to,
            complete: false,
        }
    }

    /// Degree of the last nonzero coefficient.
    pub fn top_degree(&self) -> Option<usize> {
        self.coefficients.iter().rposition(|&c| c != 0)
    }

    /// Value at `t = 1`.
    pub fn total(&self) -> u128 {
        self.coefficients.iter().map(|&c| c as u128).sum()
    }

    /// Coefficients with trailing zeros removed.
    pub fn trimmed(&self) -> Vec<u64> {
        let end = self.top_degree().map_or(0, |d| d + 1);
        self.coefficients[..end].to_vec()
    }
}

/// Number of normal words in each degree `0..=up_to`.
pub fn hilbert_coefficients(
    gb: &TruncatedGroebnerBasis,
    up_to: u32,
) -> Result<HilbertSeries, GroebnerError> {
    if up_to > gb.complete_to {
        return Err(GroebnerError::BeyondCompleteness {
            degree: up_to,
            complete_to: gb.complete_to,
        });
    }
    let coefficients = gb
        .automaton()
        .count_by_degree(&gb.weights, up_to as usize)
        .ok_or(GroebnerError::CountOverflow(up_to))?;
    let window = gb.weights.iter().copied().max().unwrap_or(1) as usize;
    let complete = vanishes_beyond(&coefficients, window).is_some();
    Ok(HilbertSeries {
        coefficients,
        exact_to: up_to as usize,
        complete,
    })
}

/// First degree `d` from which all coefficients vanish, if `window`
/// consecutive zeros (the largest generator weight) have been observed.
fn vanishes_beyond(coefficients: &[u64], window: usize) -> Option<usize> {
    let mut run = 0;
    for (d, &c) in coefficients.iter().enumerate() {
        if c == 0 {
            run += 1;
            if run == window {
                return Some(d + 1 - window);
            }
        } else {
            run = 0;
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dimension {
    Finite(u128),
    /// No vanishing degree was reached within the completeness bound.
    Inconclusive {
        partial_sum: u128,
    },
}

/// Total dimension if the algebra is seen to be finite within the bound.
pub fn dimension(gb: &TruncatedGroebnerBasis) -> Result<Dimension, GroebnerError> {
    let series = hilbert_coefficients(gb, gb.complete_to)?;
    let window = gb.weights.iter().copied().max().unwrap_or(1) as usize;
    let sum = series.total();
    Ok(match vanishes_beyond(&series.coefficients, window) {
        Some(_) => Dimension::Finite(sum),
        None => Dimension::Inconclusive { partial_sum: sum },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::{fk_presentation, GeneratorLabel};

    fn commutative_plane() -> Presentation {
        let r = NCPolynomial::from_terms([
            (Scalar::from(1), Word::from_indices([0, 1])),
            (Scalar::from(-1), Word::from_indices([1, 0])),
        ])
        .unwrap();
        Presentation::new(
            0,
            vec![
                GeneratorLabel::Named("a".into()),
                GeneratorLabel::Named("b".into()),
            ],
            vec![1, 1],
            vec![r],
        )
        .unwrap()
    }

    #[test]
    fn commutative_plane_basis() {
        let p = commutative_plane();
        let gb = truncated_groebner(&p, &MonomialOrder::identity(2), 4).unwrap();
        assert_eq!(gb.len(), 1);
        assert_eq!(
            gb.elements()[0]
                .leading_term(&MonomialOrder::identity(2))
                .unwrap()
                .0,
            Word::from_indices([1, 0])
        );
        assert_eq!(gb.pending_obstructions().count(), 0);
        let h = hilbert_coefficients(&gb, 4).unwrap();
        assert_eq!(h.coefficients, vec![1, 2, 3, 4, 5]);
        assert!(!h.complete);
        assert_eq!(
            dimension(&gb).unwrap(),
            Dimension::Inconclusive { partial_sum: 15 }
        );
    }

    #[test]
    fn fk3_degree_two() {
        let p = fk_presentation(3).unwrap();
        let gb = truncated_groebner(&p, &MonomialOrder::identity(3), 6).unwrap();
        let h = hilbert_coefficients(&gb, 6).unwrap();
        assert_eq!(h.coefficients[2], 4);
        assert_eq!(h.coefficients, vec![1, 3, 4, 3, 1, 0, 0]);
        assert!(h.complete);
        assert_eq!(dimension(&gb).unwrap(), Dimension::Finite(12));
    }

    #[test]
    fn basis_is_reduced_and_monic() {
        let p = fk_presentation(4).unwrap();
        let gb = truncated_groebner(&p, &MonomialOrder::identity(6), 6).unwrap();
        let leads = gb.leading_words();
        for (a, la) in leads.iter().enumerate() {
            for (b, lb) in leads.iter().enumerate() {
                if a != b {
                    assert!(lb.find_factor(la).is_none(), "{la:?} divides {lb:?}");
                }
            }
        }
        let ord = MonomialOrder::identity(6);
        for e in gb.elements() {
            let (lead, c) = e.leading_term(&ord).unwrap();
            assert!(c.is_one());
            for (w, _) in e.terms() {
                if *w != lead {
                    assert!(
                        leads.iter().all(|l| w.find_factor(l).is_none()),
                        "tail word {w:?} reducible"
                    );
                }
            }
        }
    }

    #[test]
    fn s_words_are_common_multiples() {
        let p = fk_presentation(4).unwrap();
        let opts = GroebnerOptions {
            max_basis_size: Some(20),
            ..Default::default()
        };
        let gb = match truncated_groebner_with(&p, &MonomialOrder::identity(6), 8, &opts) {
            Err(GroebnerError::BudgetExceeded { partial, .. }) => *partial,
            other => panic!("unexpected {other:?}"),
        };
        let leads = gb.leading_words();
        let mut checked = 0;
        for ob in gb.pending_obstructions() {
            let w = gb.s_word(ob);
            let (l, r) = (&leads[ob.left], &leads[ob.right]);
            assert!(w[..l.degree()] == l[..]);
            assert!(w[ob.shift..] == r[..]);
            assert!(ob.shift > 0 && ob.shift < l.degree() && ob.shift + r.degree() > l.degree());
            assert!(
                ob.degree as usize == w.degree()
                    && ob.degree <= gb.max_degree()
                    && ob.degree > gb.complete_to()
            );
            checked += 1;
        }
        assert!(checked > 0);
    }

    #[test]
    fn budget_reports_completed_degree() {
        let p = fk_presentation(4).unwrap();
        let opts = GroebnerOptions {
            max_basis_size: Some(20),
            ..Default::default()
        };
        match truncated_groebner_with(&p, &MonomialOrder::identity(6), 12, &opts) {
            Err(GroebnerError::BudgetExceeded {
                kind: BudgetKind::BasisSize,
                partial,
            }) => {
                assert!(partial.complete_to() >= 2 && partial.complete_to() < 12);
                let h = hilbert_coefficients(&partial, partial.complete_to()).unwrap();
                assert_eq!(&h.coefficients[..3], &[1, 6, 19]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let opts = GroebnerOptions {
            max_reductions: Some(1),
            ..Default::default()
        };
        match truncated_groebner_with(&p, &MonomialOrder::identity(6), 12, &opts) {
            Err(GroebnerError::BudgetExceeded {
                kind: BudgetKind::Reductions,
                partial,
            }) => assert_eq!(partial.complete_to(), 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn argument_errors() {
        let p = fk_presentation(3).unwrap();
        assert!(matches!(
            truncated_groebner(&p, &MonomialOrder::identity(3), 1),
            Err(GroebnerError::MaxDegreeTooSmall { .. })
        ));
        assert!(matches!(
            truncated_groebner(&p, &MonomialOrder::identity(4), 3),
            Err(GroebnerError::OrderMismatch { .. })
        ));
        let gb = truncated_groebner(&p, &MonomialOrder::identity(3), 3).unwrap();
        assert!(matches!(
            hilbert_coefficients(&gb, 4),
            Err(GroebnerError::BeyondCompleteness { .. })
        ));
        let w = NCPolynomial::monomial(Word::from_indices([0, 1, 2, 0]), Scalar::from(1));
        assert!(matches!(
            normal_form(&w, &gb),
            Err(GroebnerError::BeyondCompleteness { degree: 4, .. })
        ));
    }

    #[test]
    fn weighted_vanishing_window() {
        assert_eq!(vanishes_beyond(&[1, 0, 1, 0, 0], 2), Some(3));
        assert_eq!(vanishes_beyond(&[1, 0, 1, 0], 2), None);
        assert_eq!(vanishes_beyond(&[1, 2, 0], 1), Some(2));
    }

    #[test]
    fn modular_field_agrees_on_fk3() {
        let p = fk_presentation(3).unwrap();
        let opts = GroebnerOptions {
            field: ScalarField::Prime(32003),
            ..Default::default()
        };
        let gb = truncated_groebner_with(&p, &MonomialOrder::identity(3), 6, &opts).unwrap();
        assert_eq!(
            hilbert_coefficients(&gb, 6).unwrap().coefficients,
            vec![1, 3, 4, 3, 1, 0, 0]
        );
    }
}
