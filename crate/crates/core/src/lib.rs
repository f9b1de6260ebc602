//! Exact arithmetic for the f-invariant of double quaternionic transfers.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactmath`]: rationals, the quadratic extension Q(√−3), Bernoulli numbers
//! - [`qseries`]: truncated q-expansions with exact coefficients
//! - [`modforms`]: Eisenstein series and level-2 / level-3 generator bases
//! - [`divcong`]: divided congruences, the indeterminacy lattice and torsion orders
//! - [`genus`]: elliptic genus and Todd series of a quaternionic line
//! - [`flagcohom`]: cohomology of quaternionic flag manifolds as a coinvariant algebra
//! - [`transfer`]: the f-invariant formula, its oracle, validation and classification

pub mod divcong;
pub mod error;
pub mod exactmath;
pub mod flagcohom;
pub mod genus;
mod linalg;
pub mod modforms;
pub mod qseries;
pub mod transfer;

pub use divcong::{Certificate, FilteredElement, Verdict};
pub use error::{Error, Result};
pub use exactmath::{QuadExt, Rational};
pub use flagcohom::{ChernGrid, CoinvariantPoly};
pub use genus::C2Series;
pub use modforms::{Generator, Level, ModularForm};
pub use qseries::{QSeries, QuadSeries, Series};
pub use transfer::{BetaLabel, Finding, TransferResult};
