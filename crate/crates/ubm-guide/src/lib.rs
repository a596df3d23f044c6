//! Doc-test harness for the book under `book/`.
//!
//! mdbook cannot run example code against crate dependencies, so every
//! chapter is included here as module documentation and `cargo test` runs
//! the book's code listings as ordinary doc-tests. One module per chapter
//! keeps test failures attributable to the chapter they come from.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/transforms.md")]
pub mod transforms {}

#[doc = include_str!("../../../book/src/monotone.md")]
pub mod monotone {}

#[doc = include_str!("../../../book/src/boolean.md")]
pub mod boolean {}

#[doc = include_str!("../../../book/src/convolution.md")]
pub mod convolution {}

#[doc = include_str!("../../../book/src/ode.md")]
pub mod ode {}

#[doc = include_str!("../../../book/src/fock.md")]
pub mod fock {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
