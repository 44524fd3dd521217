//! Data-farming toolkit: Latin hypercube designs, chunked batch execution
//! with early stopping, statistical analysis, surrogate models, WGS-84
//! geodesy and a reference flight-fuel simulator.
//!
//! The guide in `book/` walks through each stage; its snippets run as
//! doctests of this crate.

// `!(x > 0.0)` is used deliberately throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod dist;
pub mod doe;
pub mod exec;
pub mod geo;
pub mod models;
pub mod rng;
pub mod simkit;
pub mod special;
pub mod table;

/// Guide chapters compiled as doctests so the book cannot drift from the code.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/rng.md")]
    pub mod rng {}
    #[doc = include_str!("../../../book/src/designs.md")]
    pub mod designs {}
    #[doc = include_str!("../../../book/src/execution.md")]
    pub mod execution {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    pub mod analysis {}
    #[doc = include_str!("../../../book/src/models.md")]
    pub mod models {}
    #[doc = include_str!("../../../book/src/geo.md")]
    pub mod geo {}
    #[doc = include_str!("../../../book/src/navigation.md")]
    pub mod navigation {}
}
