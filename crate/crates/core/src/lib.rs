//! Cycles of length divisible by `k` in small graphs: exact search,
//! canonical forms, connectivity, the exceptional and special families, and
//! exhaustive verification over enumerated classes.
//!
//! The guide in `book/` walks through each module; its code blocks run as
//! doctests of this crate.

pub mod campaign;
pub mod canon;
pub mod connectivity;
pub mod cycles;
pub mod enumerate;
pub mod error;
pub mod families;
pub mod formats;
pub mod graph;
pub mod named;
pub mod planarity;

pub use error::{Error, Result};
pub use graph::{Graph, Suppressed, VertexSet, MAX_ORDER};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/canonical.md")]
    mod canonical {}
    #[doc = include_str!("../../../book/src/cycles.md")]
    mod cycles {}
    #[doc = include_str!("../../../book/src/connectivity.md")]
    mod connectivity {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/campaigns.md")]
    mod campaigns {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
