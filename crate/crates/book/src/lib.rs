// mdbook cannot run the guide's Rust blocks against this workspace, so each
// chapter is included here as a module doc and exercised by `cargo test --doc`.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/model.md")]
pub mod chapter1 {}
#[doc = include_str!("../../../book/src/moments.md")]
pub mod chapter2 {}
#[doc = include_str!("../../../book/src/algebra.md")]
pub mod chapter3 {}
#[doc = include_str!("../../../book/src/noise.md")]
pub mod chapter4 {}
#[doc = include_str!("../../../book/src/langevin.md")]
pub mod chapter5 {}
#[doc = include_str!("../../../book/src/sampling.md")]
pub mod chapter6 {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod chapter7 {}
