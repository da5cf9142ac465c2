//! Exact arithmetic for the trinomials `-x + t x^q + x^{2q-1}` over `F_{q^2}`.
//!
//! - [`field`]: prime fields and their extensions, `F_q ⊂ F_{q^2}`.
//! - [`poly`]: dense polynomials over a field context.
//! - [`pp`]: permutation tests, power sums and the preimage constructor.
//! - [`trinomial`]: the trinomial family and its permutation criteria.
//! - [`quadsums`]: the binomial-coefficient sums governed by `x² + x - z`.
//! - [`hs`]: the sequences `H(a)` and `S(a)` and their congruences.

pub mod binomial;
pub mod field;
mod fp_poly;
pub mod hs;
pub mod poly;
pub mod pp;
pub mod quadsums;
pub mod trinomial;

pub use field::{Felt, FieldCtx, FieldError, FieldId, QuadraticExtension};
pub use poly::{PolyError, PolyFq};
