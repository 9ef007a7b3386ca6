//! The narrative guide, pulled in chapter by chapter so that every code
//! block in `book/src` compiles and runs under `cargo test --doc`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/weighted-index.md")]
pub mod weighted_index {}

#[doc = include_str!("../../../book/src/exact-baseline.md")]
pub mod exact_baseline {}

#[doc = include_str!("../../../book/src/binary-weights.md")]
pub mod binary_weights {}

#[doc = include_str!("../../../book/src/randomized.md")]
pub mod randomized {}

#[doc = include_str!("../../../book/src/lp-relaxation.md")]
pub mod lp_relaxation {}

#[doc = include_str!("../../../book/src/lp-rounding.md")]
pub mod lp_rounding {}

#[doc = include_str!("../../../book/src/bounded-forest-cover.md")]
pub mod bounded_forest_cover {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
