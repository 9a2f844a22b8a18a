//! Doc-tested chapters of the guide book.
//!
//! Each module's documentation is the corresponding chapter under
//! `book/src/`, included verbatim, so `cargo test --doc` compiles and runs
//! every code block in the book against the current `ihf` API. The book
//! cannot drift from the library without failing the build.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/complexes.md")]
pub mod complexes {}

#[doc = include_str!("../../../book/src/homology.md")]
pub mod homology {}

#[doc = include_str!("../../../book/src/hodge.md")]
pub mod hodge {}

#[doc = include_str!("../../../book/src/harmonicity.md")]
pub mod harmonicity {}

#[doc = include_str!("../../../book/src/flows.md")]
pub mod flows {}

#[doc = include_str!("../../../book/src/bundles.md")]
pub mod bundles {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
