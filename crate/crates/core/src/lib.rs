//! Exact F-nef (Faber) cones of the moduli spaces of stable pointed curves.
//!
//! The crate is organised bottom-up:
//!
//! * [`combinat`] indexes boundary classes and enumerates one-dimensional
//!   boundary strata of `M̄_{g,n}`.
//! * [`divisor`] holds divisor classes as exact rational coefficient maps,
//!   plus the named classes used throughout (Cornalba–Harris, flag divisor, ...).
//! * [`intersection`] turns strata into linear functionals and decides
//!   F-nefness with reports.
//! * [`cone`] is an exact polyhedral kernel: double description, facet
//!   conversion, LP membership with Farkas certificates.
//! * [`fulton`] is the genus-zero cone containment question `N ⊆ E`.
//! * [`cli`] is the command line front end used by the `fabercone` binary.

pub mod cache;
pub mod cli;
pub mod combinat;
pub mod cone;
pub mod divisor;
pub mod error;
pub mod fulton;
pub mod intersection;
pub mod linalg;
pub mod rational;
pub mod symmetry;

pub use combinat::{ClassIndex, Leg, MarkSet, ModuliSig, StratumCurve, StratumKind};
pub use cone::{Certificate, ConeH, ConeV};
pub use divisor::DivisorClass;
pub use error::{Error, Result};
pub use intersection::{FNefReport, LinearFunctional};
pub use rational::Rational;
