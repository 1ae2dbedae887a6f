//! Exact computation of the restricted partition function `p_a(n)`.
//!
//! `p_a(n)` counts the nonnegative integer solutions of `a_1 x_1 + ... + a_r x_r = n`
//! for a fixed weight vector `a`. The crate evaluates it three independent ways
//! (a coin-counting dynamic program, a residue-filtered binomial sum over the box
//! `J = prod_i [0, D/a_i)`, and the quasi-polynomial built from that box), builds
//! the polynomial part shared by all constituents, and computes Fourier-Dedekind
//! sums in exact cyclotomic arithmetic so the constituent decomposition can be
//! checked with rational equality.
//!
//! Everything is exact: big integers, reduced rationals and `Q[z]/Phi_b(z)`.

pub mod arith;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod fdsum;
pub mod poly;
pub mod quasi;
pub mod weights;

pub use arith::{binom_count, lcm_vec, Rat};
pub use cyclotomic::{cyclotomic_poly, CycField, CycNum};
pub use error::{Error, Result};
pub use fdsum::{
    decomposition_check, decomposition_check_all, fd_residue_average, fd_sum, Decomposition,
    FdSumSpec, FdSumTable,
};
pub use poly::{binom_poly_shifted, IntPoly, RationalPoly};
pub use quasi::{poly_part_closed_r2, QuasiPolynomial};
pub use weights::{dp_count, dp_table, WeightSystem, DEFAULT_BOX_GUARD};
