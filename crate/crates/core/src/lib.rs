//! Weak pair correlation statistics of finite sequences on the circle `[0, 1)`.
//!
//! For `N` points and a parameter `0 <= beta <= 1` the crate computes
//! `F_{N,beta}(s)`, its integral in `s`, the covering function
//! `F_{N,beta}(t, s)` and its second moment `I_{N,beta}(s)`, checks the exact
//! finite-N identities and inequalities tying them together, and estimates
//! limiting functions on ladders of sample sizes.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`). The aliases
//! below fix the scalar for the common cases.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod error;
pub mod metric;
pub mod oracle;
pub mod scalar;
pub mod sequences;
pub mod statistics;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type PointSet64 = sequences::PointSet<f64>;
pub type PointSet32 = sequences::PointSet<f32>;
pub type GenSpec64 = sequences::GenSpec<f64>;
pub type GenSpec32 = sequences::GenSpec<f32>;
pub type PairAggregate64 = metric::PairAggregate<f64>;
pub type PairAggregate32 = metric::PairAggregate<f32>;
pub type PairStatistic64 = statistics::PairStatistic<f64>;
pub type PairStatistic32 = statistics::PairStatistic<f32>;
pub type SecondMoment64 = statistics::SecondMoment<f64>;
pub type SecondMoment32 = statistics::SecondMoment<f32>;
pub type CoveringProfile64 = statistics::CoveringProfile<f64>;
pub type CoveringProfile32 = statistics::CoveringProfile<f32>;
pub type LimitEstimate64 = analysis::LimitEstimate<f64>;
pub type LimitEstimate32 = analysis::LimitEstimate<f32>;
