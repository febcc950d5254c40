//! Limiting distributions: Tracy–Widom, the critical spike law and the
//! super-critical Gaussian reference.

pub mod airy;
pub mod curve;
pub mod fredholm;
pub mod gk;
pub mod painleve;
pub mod quadrature;

pub use airy::{airy, AiryEval};
pub use curve::{DistributionCurve, LimitLaw};
pub use fredholm::{bbp_f1_cdf, bbp_fk_cdf, tw_gue_cdf, FredholmConfig};
pub use gk::gk_reference_sample;
pub use painleve::{tw_goe_cdf, tw_gue_cdf_painleve};
