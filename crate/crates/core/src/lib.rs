//! Exact and numerical tools for interval translation mappings: the
//! Bruin–Troubetzkoy family and its `d`-interval generalisation, their
//! Rauzy-type induction, the induced matrix cocycles and substitutions,
//! Lyapunov exponents, and explicit non-weakly-mixing constructions.
//!
//! Everything combinatorial runs on arbitrary-precision integers and
//! rationals. Only the Lyapunov estimators use floating point.

pub mod cocycles;
pub mod constructions;
pub mod error;
pub mod galois;
pub mod group;
pub mod induction;
pub mod itm;
pub mod kseq;
pub mod lyapunov;
pub mod matrix;
pub mod rational;
pub mod report;
pub mod sadic;

pub use cocycles::Family;
pub use constructions::{IrrationalPlan, MinusOnePlan, ResidualReport};
pub use error::{Error, Result};
pub use galois::{GaloisGroup, GaloisReport, PolyZ};
pub use group::{Expr, SteinbergWord};
pub use induction::{CaseTag, Exit, InductionStep, SuspensionState, ZOutcome};
pub use itm::{BruinParams, BtParams, Classification, IntervalSet, Itm};
pub use kseq::KSequence;
pub use lyapunov::{Distribution, LyapunovEstimate, SamplingSpec};
pub use matrix::IntMatrix;
pub use rational::Rat;
pub use report::{Check, Report, Value};
pub use sadic::{Coincidence, Substitution, TowerFamily, Word};
