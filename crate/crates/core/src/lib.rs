//! Graded dimensions of Fomin-Kirillov algebras and of the Nichols algebras
//! of the transposition rack with its sign cocycle.
//!
//! The two sides are computed independently: [`groebner`] finds a
//! degree-truncated noncommutative Gröbner basis of the quadratic
//! presentation and counts normal words, while [`nichols`] takes ranks of
//! quantum symmetrizers on tensor powers of the braided space from
//! [`braided`]. [`hilbert`] handles t-number factorizations of the
//! resulting series.

pub mod braided;
pub mod groebner;
pub mod hilbert;
pub mod linalg;
pub mod ncpoly;
pub mod nichols;
pub mod presentations;
pub mod scalar;

pub use groebner::{
    dimension, hilbert_coefficients, normal_form, truncated_groebner, Dimension, HilbertSeries,
    TruncatedGroebnerBasis,
};
pub use ncpoly::{GeneratorId, MonomialOrder, NCPolynomial, Word};
pub use presentations::{fk_presentation, Presentation, Transposition};
pub use scalar::{Rational, Scalar, ScalarField};
