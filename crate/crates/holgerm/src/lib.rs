//! Formal and numerical dynamics of germs of holomorphic diffeomorphisms
//! fixing the origin.
//!
//! The crate is organized around the classification of such germs by their
//! multiplier `λ = f'(0)`:
//!
//! * [`jet`] — truncated jet algebra: composition, reversion, iteration,
//!   rotation numbers and the attracting / repelling / parabolic taxonomy;
//! * [`linearize`] — Koenigs linearization `h∘f = L_λ∘h` for non-resonant
//!   multipliers, small divisors and the formal centralizer `h^{-1}L_μh`;
//! * [`parabolic`] — normal forms of nondegenerate parabolic germs: the
//!   vector field `X_{n,τ} = z^{n+1}/(1+τzⁿ) ∂/∂z`, its Lie-series flow,
//!   order-by-order conjugation to `e^{2πip/q}·exp(X_{n,τ})` and the
//!   centralizer `{e^{2πik/n} exp(tX)}`;
//! * [`qz`] — exact arithmetic in Q/Z, cyclic towers of subgroups and the
//!   δ-neighborhood intersection identity in exact interval arithmetic;
//! * [`conformal`] — closed-form uniformizers of slit disks, intrinsic
//!   rotations, roots of rigid rotations with prescribed rotation number,
//!   and the inductive tower realizing a given Q/Z subgroup as rotation
//!   numbers of commuting finite-order germs, with a numerical
//!   verification suite.
//!
//! All values are immutable and all operations are pure; everything can be
//! called concurrently without synchronization.

pub mod conformal;
pub mod jet;
pub mod linearize;
pub mod parabolic;
pub mod qz;
pub mod scalar;
pub mod tol;

pub use jet::{classify, ClassifyOptions, GermClass, GermTag, JetError, JetSeries};
pub use linearize::{centralizer_element, koenigs_linearize, LinearizeError, LinearizeOptions};
pub use parabolic::{parabolic_normalize, ParabolicData, ParabolicError, VectorFieldNF};
pub use qz::{CyclicTower, QZRational, QzError};
pub use scalar::{GaussianRational, Scalar};
