//! Exact symbol calculus for polynomial symbols.
//!
//! For polynomial symbols every asymptotic series terminates, so each
//! expansion theorem becomes an identity between finite sums that can be
//! checked coefficient by coefficient.

mod gamma;
mod multi_index;
mod poly;
mod theorems;

pub use gamma::{gamma_norm_estimate, ClassParams};
pub use multi_index::{compositions, factorial, indices_up_to, MultiIndex};
pub use poly::{Monomial, PolySymbol};
pub use theorems::{
    aw_odd_terms, aw_to_weyl_terms, compose_terms, gaussian_moment, heat_quarter, inverse_aw_recursion,
    moment_coeff, moment_recurrence_ok, tau_change_terms, transpose_terms, FormalExpansion, InverseExpansion,
};
