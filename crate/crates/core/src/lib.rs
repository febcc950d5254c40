//! Spiked sample covariance matrices: simulation, phase-transition
//! constants, limiting laws and exact path combinatorics.

pub mod dyck;
pub mod ensembles;
pub mod error;
pub mod genfun;
pub mod harness;
pub mod limitlaws;
pub mod momentlab;
pub mod phase;
pub mod rng;
pub mod spectra;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/phase.md")]
    mod phase {}
    #[doc = include_str!("../../../book/src/limitlaws.md")]
    mod limitlaws {}
    #[doc = include_str!("../../../book/src/dyck.md")]
    mod dyck {}
    #[doc = include_str!("../../../book/src/genfun.md")]
    mod genfun {}
    #[doc = include_str!("../../../book/src/moments.md")]
    mod moments {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
