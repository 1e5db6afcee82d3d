//! Default discretization parameters and tolerances.
//!
//! Every verification report echoes [`header`] so that a tolerance regression
//! can be traced back to a parameter change.

pub const DEFAULTS_VERSION: u32 = 1;

/// Points per axis for one-dimensional grids.
pub const N_1D: usize = 128;
/// Half-width of one-dimensional grids, which cover `[-L, L)`.
pub const L_1D: f64 = 10.0;
pub const N_2D: usize = 64;
pub const L_2D: f64 = 8.0;

/// Truncation index for weight sequences.
pub const WEIGHT_TRUNCATION: usize = 64;

/// `(M.2)` constant fitting lattice: `H` ranges over `[H_MIN, H_MAX]` in steps of `H_STEP`.
pub const H_MIN: f64 = 1.0;
pub const H_MAX: f64 = 16.0;
pub const H_STEP: f64 = 0.1;

/// Dropped-tail bound for truncated ultrapolynomial products.
pub const ULTRAPOLY_TAIL: f64 = 1e-12;

/// Regularization ladder for the oscillatory kernel.
pub const DELTA_LADDER: [f64; 5] = [0.4, 0.2, 0.1, 0.05, 0.025];

pub fn header() -> String {
    format!(
        "defaults v{DEFAULTS_VERSION}: n1={N_1D} L1={L_1D} n2={N_2D} L2={L_2D} P={WEIGHT_TRUNCATION} \
         H=[{H_MIN},{H_MAX}]/{H_STEP}"
    )
}
