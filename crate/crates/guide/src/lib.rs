//! The book's code listings, compiled as doctests. Each chapter is its own
//! module so a failing listing points at its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/polytopes.md")]
pub mod polytopes {}
#[doc = include_str!("../../../book/src/mixed-volumes.md")]
pub mod mixed_volumes {}
#[doc = include_str!("../../../book/src/difference-bodies.md")]
pub mod difference_bodies {}
#[doc = include_str!("../../../book/src/antiblocking.md")]
pub mod antiblocking {}
#[doc = include_str!("../../../book/src/verifiers.md")]
pub mod verifiers {}
#[doc = include_str!("../../../book/src/search.md")]
pub mod search {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
