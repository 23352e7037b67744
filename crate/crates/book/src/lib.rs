//! Compiles and runs the code listings of the guide in `book/src` as
//! doc-tests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/basis.md")]
pub mod basis {}

#[doc = include_str!("../../../book/src/hamiltonians.md")]
pub mod hamiltonians {}

#[doc = include_str!("../../../book/src/closed-forms.md")]
pub mod closed_forms {}

#[doc = include_str!("../../../book/src/dynamics.md")]
pub mod dynamics {}

#[doc = include_str!("../../../book/src/observables.md")]
pub mod observables {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}

#[doc = include_str!("../../../book/src/figures.md")]
pub mod figures {}
