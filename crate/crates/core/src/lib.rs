pub mod braided_hopf;
pub mod check;
pub mod error;
pub mod expr;
pub mod linalg;
pub mod moment;
pub mod qweyl;
pub mod reduction;
pub mod root_of_unity;
pub mod scalars;
pub mod workbench;

pub use error::{Error, Result};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    mod scalars {}
    #[doc = include_str!("../../../book/src/qweyl.md")]
    mod qweyl {}
    #[doc = include_str!("../../../book/src/braided_hopf.md")]
    mod braided_hopf {}
    #[doc = include_str!("../../../book/src/moment.md")]
    mod moment {}
    #[doc = include_str!("../../../book/src/root_of_unity.md")]
    mod root_of_unity {}
    #[doc = include_str!("../../../book/src/reduction.md")]
    mod reduction {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
