//! Cogrowth coefficients and random-walk return counts of marked groups,
//! with exact checks of their generating-function identities and
//! floating-point diagnostics of their asymptotics.
//!
//! A marked group is a group `G` with `r ≥ 2` distinguished generators, i.e.
//! a quotient `F_r / N` of the free group. The cogrowth coefficient `γ_n` is
//! the number of reduced words of length `n` in `N`; the return count `W_n` is
//! the number of all words of length `n` that evaluate to the identity.

pub mod asymptotics;
pub mod chebyshev;
pub mod counting;
pub mod error;
pub mod exact_series;
pub mod exec;
pub mod freewords;
pub mod groups;
pub mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod roots;
pub mod series;
pub mod verify;

pub use counting::CountTable;
pub use error::{CountError, Error, GroupError, WordError};
pub use exec::Strategy;
pub use groups::{preset, Element, MarkedGroup};
