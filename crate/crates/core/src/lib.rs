//! Chebyshev polynomials of the first kind (minimax), restricted variants,
//! and ersatz second-kind (minimal weighted L1) polynomials on finite unions
//! of compact intervals, computed through semidefinite programming, plus
//! logarithmic-capacity estimates and a-posteriori certificates.

// index loops here usually walk several matrices in lockstep
#![allow(clippy::needless_range_loop)]
#![allow(clippy::type_complexity)]

pub mod capacity;
pub mod cheb;
mod eig;
pub mod first_kind;
pub mod interval;
pub mod norms;
pub mod quad;
pub mod sdp;
pub mod second_kind;
pub mod weight;

pub use cheb::{Basis, ChebError, ChebPoly};
pub use interval::{AffineMap, IntervalError, IntervalUnion};
pub use norms::{l1_norm_weighted, signed_integral, sup_norm_on_union, sup_norm_weighted, NormError};
pub use weight::{RationalWeight, UnitWeight, WeightError, WeightFn};
