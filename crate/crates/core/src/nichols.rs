//! Graded dimensions of the Nichols algebra of `V_n` as ranks of quantum
//! symmetrizers, and comparison of the degree-2 kernel with the FK
//! quadratic relations.
//!
//! The symmetrizer `S_k = Σ_{w ∈ S_k} M(w)` lifts each permutation to the
//! braid group along a reduced word (`M(s_i) = c_i`). Every `c_i` preserves
//! the ordered product `σ_1 σ_2 ⋯ σ_k` of the transpositions labelling a
//! tensor basis vector, so `S_k` is block diagonal with blocks indexed by
//! that product; ranks are taken block by block.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braided::{braid_matrix, BraidError, BraidedSpace, SignedPermMatrix};
use crate::linalg::{nullspace, rank_dense, Field, PrimeField, RationalField, SparseMatrix};
use crate::presentations::fk_presentation;
use crate::scalar::Rational;

pub const DEFAULT_PRIMES: [u64; 2] = [2147483629, 2147483587];
/// Largest tensor dimension `C(n,2)^k` handled without an explicit override.
pub const DEFAULT_MAX_TENSOR_DIM: u128 = 65_536;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NicholsError {
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error("{0} is not a prime below 2^32")]
    BadPrime(u64),
    #[error("modular backend needs at least one prime")]
    NoPrimes,
}

/// A permutation of `{1..k}`, stored 0-based in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation {
            images: (0..k as u8).collect(),
        }
    }

    /// From 1-based one-line notation; `None` unless bijective.
    pub fn from_one_line(one_line: &[usize]) -> Option<Self> {
        let k = one_line.len();
        let mut seen = vec![false; k];
        for &v in one_line {
            if v == 0 || v > k || std::mem::replace(&mut seen[v - 1], true) {
                return None;
            }
        }
        Some(Permutation {
            images: one_line.iter().map(|&v| (v - 1) as u8).collect(),
        })
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// The product `s_{i_1} s_{i_2} ⋯ s_{i_l}` of simple transpositions
    /// (1-based indices), composed as functions.
    pub fn from_word(k: usize, word: &[usize]) -> Self {
        let mut p = Self::identity(k);
        for &i in word.iter().rev() {
            p = p.left_simple(i);
        }
        p
    }

    /// All permutations of `{1..k}` in lexicographic order.
    pub fn all(k: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Self::identity(k).images;
        loop {
            out.push(Permutation {
                images: cur.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
                break;
            };
            let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }

    pub fn inversions(&self) -> usize {
        let v = &self.images;
        (0..v.len())
            .map(|a| (a + 1..v.len()).filter(|&b| v[a] > v[b]).count())
            .sum()
    }

    /// `s_i ∘ self`: swaps the values `i` and `i+1`.
    fn left_simple(&self, i: usize) -> Self {
        let (a, b) = ((i - 1) as u8, i as u8);
        Permutation {
            images: self
                .images
                .iter()
                .map(|&v| {
                    if v == a {
                        b
                    } else if v == b {
                        a
                    } else {
                        v
                    }
                })
                .collect(),
        }
    }

    /// `i` is a left descent iff the value `i+1` appears before `i`.
    fn is_left_descent(&self, i: usize) -> bool {
        let pos = |v: u8| self.images.iter().position(|&x| x == v).unwrap();
        pos(i as u8) < pos((i - 1) as u8)
    }
}

/// Lexicographically smallest reduced word `[i_1, …, i_l]` with
/// `w = s_{i_1} ⋯ s_{i_l}`.
pub fn lex_reduced_word(w: &Permutation) -> Vec<usize> {
    let mut word = Vec::new();
    let mut cur = w.clone();
    while let Some(i) = (1..cur.size()).find(|&i| cur.is_left_descent(i)) {
        word.push(i);
        cur = cur.left_simple(i);
    }
    word
}

/// Every reduced word of `w`.
pub fn all_reduced_words(w: &Permutation) -> Vec<Vec<usize>> {
    let descents: Vec<usize> = (1..w.size()).filter(|&i| w.is_left_descent(i)).collect();
    if descents.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in descents {
        for mut rest in all_reduced_words(&w.left_simple(i)) {
            rest.insert(0, i);
            out.push(rest);
        }
    }
    out
}

/// `c_{i_1} ⋯ c_{i_l}` on `V^{⊗k}` for an explicit word.
pub fn lift_word(
    word: &[usize],
    space: &BraidedSpace,
    k: usize,
) -> Result<SignedPermMatrix, NicholsError> {
    let dim = space.tensor_dim(k, u32::MAX as u128)?;
    let mut m = SignedPermMatrix::identity(dim);
    for &i in word {
        m = m.compose(&braid_matrix(space, k, i)?);
    }
    Ok(m)
}

/// The braid-group lift of `w` along its lexicographically smallest
/// reduced word.
pub fn matsumoto_lift(
    w: &Permutation,
    space: &BraidedSpace,
    k: usize,
) -> Result<SignedPermMatrix, NicholsError> {
    assert_eq!(w.size(), k, "permutation must lie in S_k");
    lift_word(&lex_reduced_word(w), space, k)
}

/// Applies `c_{i_1} ⋯ c_{i_l}` to a tensor basis word in place.
fn apply_word(space: &BraidedSpace, word: &[usize], digits: &mut [usize]) -> i64 {
    word.iter()
        .rev()
        .map(|&i| space.braid_word(digits, i) as i64)
        .product()
}

/// `S_k = Σ_{w ∈ S_k} M(w)`, assembled column by column.
pub fn quantum_symmetrizer(
    space: &BraidedSpace,
    k: usize,
    budget: u128,
) -> Result<SparseMatrix, NicholsError> {
    let dim = space.tensor_dim(k, budget)?;
    let words: Vec<Vec<usize>> = Permutation::all(k).iter().map(lex_reduced_word).collect();
    let cols = (0..dim)
        .into_par_iter()
        .map(|c| {
            let start = space.decode(k, c);
            words
                .iter()
                .map(|w| {
                    let mut digits = start.clone();
                    let s = apply_word(space, w, &mut digits);
                    (space.encode(&digits) as u32, s)
                })
                .collect()
        })
        .collect();
    Ok(SparseMatrix::from_columns(dim, cols))
}

/// `S_k` by the recursion `S_k = (id ⊗ S_{k-1}) · (1 + c_1 + c_1c_2 + ⋯ + c_1⋯c_{k-1})`.
pub fn quantum_symmetrizer_factorized(
    space: &BraidedSpace,
    k: usize,
    budget: u128,
) -> Result<SparseMatrix, NicholsError> {
    let dim = space.tensor_dim(k, budget)?;
    if k <= 1 {
        return Ok(SparseMatrix::identity(dim));
    }
    let inner = quantum_symmetrizer_factorized(space, k - 1, budget)?;
    let block = inner.nrows();
    let lifted = SparseMatrix::from_columns(
        dim,
        (0..dim)
            .map(|c| {
                let (head, rest) = (c / block, c % block);
                inner
                    .column(rest)
                    .iter()
                    .map(|&(r, v)| ((head * block) as u32 + r, v))
                    .collect()
            })
            .collect(),
    );
    let shuffle = SparseMatrix::from_columns(
        dim,
        (0..dim)
            .map(|c| {
                let start = space.decode(k, c);
                (0..k)
                    .map(|j| {
                        let word: Vec<usize> = (1..=j).collect();
                        let mut digits = start.clone();
                        let s = apply_word(space, &word, &mut digits);
                        (space.encode(&digits) as u32, s)
                    })
                    .collect()
            })
            .collect(),
    );
    Ok(lifted.mul(&shuffle))
}

/// Product `σ_1 ∘ ⋯ ∘ σ_k` in `S_n` of the transpositions labelling a
/// tensor basis vector, one-line, 0-based.
fn transposition_product(space: &BraidedSpace, k: usize, c: usize) -> Vec<u8> {
    let mut p: Vec<u8> = (0..space.n() as u8).collect();
    for d in space.decode(k, c) {
        let t = space.basis()[d];
        let (a, b) = ((t.i() - 1) as u8, (t.j() - 1) as u8);
        // p ∘ t: swap the entries at positions a and b
        p.swap(a as usize, b as usize);
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RankBackend {
    Rational,
    /// Ranks modulo each prime; all must agree, otherwise the exact
    /// rational rank is computed instead.
    Modular {
        primes: Vec<u64>,
    },
}

impl Default for RankBackend {
    fn default() -> Self {
        RankBackend::Modular {
            primes: DEFAULT_PRIMES.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    /// `"rational"`, `"modular"` or `"rational-fallback"`.
    pub method: String,
    pub primes_used: Vec<u64>,
    /// Per-prime ranks, in the order of `primes_used`.
    pub modular_ranks: Vec<usize>,
}

/// Rank of `S_k` on `V_n^{⊗k}`, i.e. the dimension of the degree-`k` part
/// of the Nichols algebra.
pub fn nichols_dimension(
    space: &BraidedSpace,
    k: usize,
    backend: &RankBackend,
    budget: u128,
) -> Result<RankReport, NicholsError> {
    let sym = quantum_symmetrizer(space, k, budget)?;
    let key = |c: usize| transposition_product(space, k, c);
    match backend {
        RankBackend::Rational => Ok(RankReport {
            rank: sym.rank_by_blocks(&RationalField, key),
            method: "rational".into(),
            primes_used: Vec::new(),
            modular_ranks: Vec::new(),
        }),
        RankBackend::Modular { primes } => {
            if primes.is_empty() {
                return Err(NicholsError::NoPrimes);
            }
            let mut ranks = Vec::with_capacity(primes.len());
            for &p in primes {
                let f = PrimeField::new(p).ok_or(NicholsError::BadPrime(p))?;
                ranks.push(sym.rank_by_blocks(&f, key));
            }
            if ranks.iter().all(|&r| r == ranks[0]) {
                Ok(RankReport {
                    rank: ranks[0],
                    method: "modular".into(),
                    primes_used: primes.clone(),
                    modular_ranks: ranks,
                })
            } else {
                Ok(RankReport {
                    rank: sym.rank_by_blocks(&RationalField, key),
                    method: "rational-fallback".into(),
                    primes_used: primes.clone(),
                    modular_ranks: ranks,
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NicholsDims {
    pub n: usize,
    /// Index = degree.
    pub dims: Vec<u64>,
    pub method: String,
    pub primes_used: Vec<u64>,
    pub per_degree: Vec<RankReport>,
}

/// Dimensions of the Nichols algebra of `V_n` in degrees `0..=max_degree`.
pub fn nichols_dims(
    n: usize,
    max_degree: usize,
    backend: &RankBackend,
    budget: u128,
) -> Result<NicholsDims, NicholsError> {
    let space = BraidedSpace::new(n)?;
    for k in 0..=max_degree {
        space.tensor_dim(k, budget)?;
    }
    let per_degree = (0..=max_degree)
        .map(|k| nichols_dimension(&space, k, backend, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let method = if per_degree.iter().any(|r| r.method == "rational-fallback") {
        "rational-fallback".to_string()
    } else {
        match backend {
            RankBackend::Rational => "rational".to_string(),
            RankBackend::Modular { .. } => "modular".to_string(),
        }
    };
    let primes_used = match backend {
        RankBackend::Rational => Vec::new(),
        RankBackend::Modular { primes } => primes.clone(),
    };
    Ok(NicholsDims {
        n,
        dims: per_degree.iter().map(|r| r.rank as u64).collect(),
        method,
        primes_used,
        per_degree,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum KernelVerdict {
    Equal { dim: usize },
    FkStrictlyInside { codimension: usize },
    KernelStrictlyInside { codimension: usize },
    Incomparable,
}

impl std::fmt::Display for KernelVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelVerdict::Equal { dim } => write!(f, "equal (dim {dim})"),
            KernelVerdict::FkStrictlyInside { codimension } => {
                write!(f, "fk strictly inside (codim {codimension})")
            }
            KernelVerdict::KernelStrictlyInside { codimension } => {
                write!(f, "kernel strictly inside (codim {codimension})")
            }
            KernelVerdict::Incomparable => write!(f, "incomparable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelComparison {
    pub n: usize,
    pub kernel_dim: usize,
    pub relation_dim: usize,
    pub sum_dim: usize,
    pub verdict: KernelVerdict,
}

/// Compares `ker(S_2)` with the span of the FK quadratic relations inside
/// `V_n ⊗ V_n`, by exact ranks of the stacked bases.
pub fn quadratic_kernel_compare(n: usize) -> Result<KernelComparison, NicholsError> {
    let space = BraidedSpace::new(n)?;
    let m = space.dim();
    let s2 = quantum_symmetrizer(&space, 2, u128::MAX)?;
    let kernel = nullspace(&RationalField, s2.to_dense(&RationalField), m * m);
    let presentation = fk_presentation(n).expect("n >= 3");
    let relations: Vec<Vec<Rational>> = presentation
        .relations()
        .iter()
        .map(|r| {
            let mut v = vec![Rational::zero(); m * m];
            for (w, c) in r.terms() {
                v[w[0].index() * m + w[1].index()] =
                    c.as_rational().expect("FK relations are rational").clone();
            }
            v
        })
        .collect();
    let kernel_dim = kernel.len();
    let relation_dim = rank_dense(&RationalField, relations.clone());
    let sum_dim = rank_dense(
        &RationalField,
        kernel.into_iter().chain(relations).collect(),
    );
    let verdict = match (sum_dim == kernel_dim, sum_dim == relation_dim) {
        (true, true) => KernelVerdict::Equal { dim: kernel_dim },
        (true, false) => KernelVerdict::FkStrictlyInside {
            codimension: kernel_dim - relation_dim,
        },
        (false, true) => KernelVerdict::KernelStrictlyInside {
            codimension: relation_dim - kernel_dim,
        },
        (false, false) => KernelVerdict::Incomparable,
    };
    Ok(KernelComparison {
        n,
        kernel_dim,
        relation_dim,
        sum_dim,
        verdict,
    })
}

/// Rank of a symmetrizer over a given field, without block splitting.
pub fn symmetrizer_rank<F: Field>(
    space: &BraidedSpace,
    k: usize,
    field: &F,
    budget: u128,
) -> Result<usize, NicholsError> {
    Ok(quantum_symmetrizer(space, k, budget)?.rank(field))
}
