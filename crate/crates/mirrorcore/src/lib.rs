//! Exact-arithmetic engine for mirror-symmetry gluing identities.
//!
//! A Tyurin degeneration X ~> X_1 u_{X_0} X_2 of a Calabi-Yau complete
//! intersection in a toric variety splits the mirror family into two
//! Landau-Ginzburg charts glued over the mirror of X_0. This crate builds the
//! associated holomorphic period series, cohomology-valued I-functions, and
//! generalized functional invariants from the toric data, and mechanically
//! verifies the identities that bind them:
//!
//!   - Hadamard-product / residue gluing of periods:
//!       f0_smoothing *_q f0_central = ct_y [ f0_lg1 *_q f0_lg2 ]
//!   - the same gluing for I-functions, truncated in ambient cohomology;
//!   - product relations of generalized functional invariants;
//!   - reconstruction of the smoothing period from the central period by an
//!     exact change of variables and residue;
//!   - annihilation of period series and I-functions by their Picard-Fuchs
//!     operators;
//!   - rational normal forms of glued invariants on rational base curves
//!     (Hurwitz cusp profiles) and of Landau-Ginzburg potentials.
//!
//! Everything is computed over arbitrary-precision rationals to explicit
//! truncation orders. Identities either match exactly or report the first
//! differing coefficient; there is no numerical tolerance anywhere.

pub mod check;
pub mod cohom;
pub mod ifunc;
pub mod invariants;
pub mod pf;
pub mod periods;
pub mod rat;
pub mod ratfun;
pub mod series;
pub mod toric;

pub use check::{CheckConfig, CheckId, CheckResult, CheckStatus, ConfigError, Report};
pub use cohom::{CohomElement, NilpotentAlgebra};
pub use periods::Mismatch;
pub use rat::Q;
pub use series::{CohomSeries, QSeries, Series, TruncSpec, VarTable};
pub use toric::ToricModel;
