//! The braided vector space spanned by transpositions, with braiding
//! `c(v_σ ⊗ v_τ) = χ(σ,τ) v_{στσ⁻¹} ⊗ v_σ`, and its signed-permutation
//! matrices on tensor powers.

use thiserror::Error;

pub use crate::linalg::SparseMatrix;
use crate::presentations::Transposition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("n must be at least 3, got {0}")]
    TooSmall(usize),
    #[error("slot {slot} out of range for tensor power {k}")]
    SlotOutOfRange { slot: usize, k: usize },
    #[error("tensor dimension {dim} exceeds the budget {budget}")]
    TooLarge { dim: u128, budget: u128 },
}

/// The sign cocycle: `+1` if `σ` keeps the entries of `τ = (i j)` in order.
pub fn chi(sigma: Transposition, tau: Transposition) -> i8 {
    if sigma.apply(tau.i()) < sigma.apply(tau.j()) {
        1
    } else {
        -1
    }
}

/// `σ ▷ τ = στσ⁻¹`, canonicalized.
pub fn conjugate(sigma: Transposition, tau: Transposition) -> Transposition {
    Transposition::new(sigma.apply(tau.i()), sigma.apply(tau.j()))
        .expect("conjugate of a transposition")
}

/// `c(v_σ ⊗ v_τ) = sign · v_a ⊗ v_b`, returned as `(sign, a, b)`.
pub fn braid_on_basis(
    sigma: Transposition,
    tau: Transposition,
) -> (i8, Transposition, Transposition) {
    (chi(sigma, tau), conjugate(sigma, tau), sigma)
}

/// `V_n` with basis `v_(ij)`, ordered like the generators of the FK
/// presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidedSpace {
    n: usize,
    basis: Vec<Transposition>,
    /// `index[i * (n + 1) + j]` is the basis position of `(i j)`.
    index: Vec<u32>,
    /// Braiding on pairs of basis indices: `table[a * dim + b] = (sign, a', b')`.
    table: Vec<(i8, u32, u32)>,
}

impl BraidedSpace {
    pub fn new(n: usize) -> Result<Self, BraidError> {
        if n < 3 {
            return Err(BraidError::TooSmall(n));
        }
        let basis = Transposition::all(n);
        let mut index = vec![u32::MAX; (n + 1) * (n + 1)];
        for (a, t) in basis.iter().enumerate() {
            index[t.i() * (n + 1) + t.j()] = a as u32;
        }
        let mut space = BraidedSpace {
            n,
            basis,
            index,
            table: Vec::new(),
        };
        let m = space.dim();
        let mut table = Vec::with_capacity(m * m);
        for &s in &space.basis {
            for &t in &space.basis {
                let (sign, a, b) = braid_on_basis(s, t);
                table.push((sign, space.index_of(a) as u32, space.index_of(b) as u32));
            }
        }
        space.table = table;
        Ok(space)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Transposition] {
        &self.basis
    }

    pub fn index_of(&self, t: Transposition) -> usize {
        self.index[t.i() * (self.n + 1) + t.j()] as usize
    }

    /// Braiding on a pair of basis indices.
    #[inline]
    pub fn braid_indices(&self, a: usize, b: usize) -> (i8, usize, usize) {
        let (s, x, y) = self.table[a * self.dim() + b];
        (s, x as usize, y as usize)
    }

    /// `dim^k`, or an error when it exceeds `budget`.
    pub fn tensor_dim(&self, k: usize, budget: u128) -> Result<usize, BraidError> {
        let dim = (self.dim() as u128)
            .checked_pow(k as u32)
            .unwrap_or(u128::MAX);
        if dim > budget || dim > u32::MAX as u128 {
            return Err(BraidError::TooLarge { dim, budget });
        }
        Ok(dim as usize)
    }

    /// Digits of a tensor basis index, most significant first.
    pub fn decode(&self, k: usize, mut idx: usize) -> Vec<usize> {
        let m = self.dim();
        let mut digits = vec![0; k];
        for d in digits.iter_mut().rev() {
            *d = idx % m;
            idx /= m;
        }
        digits
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * self.dim() + d)
    }

    /// Applies `c` to factors `slot, slot+1` (1-based) of a tensor word in place.
    #[inline]
    pub fn braid_word(&self, word: &mut [usize], slot: usize) -> i8 {
        let (s, a, b) = self.braid_indices(word[slot - 1], word[slot]);
        word[slot - 1] = a;
        word[slot] = b;
        s
    }
}

/// A matrix with exactly one entry `±1` in every row and column.
///
/// Column `c` is sent to `sign[c] · e_{image[c]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermMatrix {
    image: Vec<u32>,
    sign: Vec<i8>,
}

impl SignedPermMatrix {
    pub fn identity(dim: usize) -> Self {
        SignedPermMatrix {
            image: (0..dim as u32).collect(),
            sign: vec![1; dim],
        }
    }

    /// `None` unless `image` is a permutation and every sign is `±1`.
    pub fn new(image: Vec<u32>, sign: Vec<i8>) -> Option<Self> {
        if image.len() != sign.len() || sign.iter().any(|s| s.abs() != 1) {
            return None;
        }
        let mut seen = vec![false; image.len()];
        for &r in &image {
            if r as usize >= image.len() || std::mem::replace(&mut seen[r as usize], true) {
                return None;
            }
        }
        Some(SignedPermMatrix { image, sign })
    }

    pub fn dim(&self) -> usize {
        self.image.len()
    }

    /// `(row, sign)` of the entry in column `c`.
    pub fn column(&self, c: usize) -> (usize, i8) {
        (self.image[c] as usize, self.sign[c])
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &SignedPermMatrix) -> SignedPermMatrix {
        assert_eq!(self.dim(), other.dim());
        let (image, sign) = (0..other.dim())
            .map(|c| {
                let (r, s) = other.column(c);
                let (r2, s2) = self.column(r);
                (r2 as u32, s * s2)
            })
            .unzip();
        SignedPermMatrix { image, sign }
    }

    pub fn inverse(&self) -> SignedPermMatrix {
        let mut image = vec![0u32; self.dim()];
        let mut sign = vec![0i8; self.dim()];
        for c in 0..self.dim() {
            let (r, s) = self.column(c);
            image[r] = c as u32;
            sign[r] = s;
        }
        SignedPermMatrix { image, sign }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(c, &r)| r as usize == c)
            && self.sign.iter().all(|&s| s == 1)
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        SparseMatrix::from_columns(
            self.dim(),
            (0..self.dim())
                .map(|c| vec![(self.image[c], self.sign[c] as i64)])
                .collect(),
        )
    }
}

/// `c` acting on factors `slot, slot+1` (1-based) of `V_n^{⊗k}`. The tensor
/// basis is ordered lexicographically by index tuples.
pub fn braid_matrix(
    space: &BraidedSpace,
    k: usize,
    slot: usize,
) -> Result<SignedPermMatrix, BraidError> {
    if slot == 0 || slot >= k {
        return Err(BraidError::SlotOutOfRange { slot, k });
    }
    let dim = space.tensor_dim(k, u32::MAX as u128)?;
    let (image, sign) = (0..dim)
        .map(|c| {
            let mut w = space.decode(k, c);
            let s = space.braid_word(&mut w, slot);
            (space.encode(&w) as u32, s)
        })
        .unzip();
    Ok(SignedPermMatrix { image, sign })
}

/// `(c⊗id)(id⊗c)(c⊗id) = (id⊗c)(c⊗id)(id⊗c)` on `V^{⊗3}`, checked on every
/// basis vector.
pub fn check_yang_baxter(space: &BraidedSpace) -> bool {
    let c1 = braid_matrix(space, 3, 1).expect("slot 1 of 3");
    let c2 = braid_matrix(space, 3, 2).expect("slot 2 of 3");
    c1.compose(&c2).compose(&c1) == c2.compose(&c1).compose(&c2)
}
