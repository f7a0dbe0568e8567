// Range checks are written as `!(lo <= v && v <= hi)` on purpose so NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channels;
pub mod cmat;
pub mod error;
pub mod lattice;
pub mod mc;
pub mod perm;
pub mod pop;
pub mod replica;
pub mod rmps;
pub mod scaling;
pub mod weingarten;

pub use error::{Error, Result};

/// The guide's chapters, compiled so their snippets run under `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scaling.md")]
    mod scaling {}
    #[doc = include_str!("../../../book/src/replicas.md")]
    mod replicas {}
    #[doc = include_str!("../../../book/src/rmps.md")]
    mod rmps {}
    #[doc = include_str!("../../../book/src/brickwall.md")]
    mod brickwall {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/pop.md")]
    mod pop {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
