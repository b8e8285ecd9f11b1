//! Exact constructions of generalized spin representations of the maximal
//! compact subalgebra of a simply laced Kac-Moody algebra, and of their
//! higher-spin extensions.
//!
//! Everything is computed over the rationals (or Gaussian rationals) with
//! no floating point.

pub mod cartan;
pub mod clifford;
pub mod exactnum;
pub mod export;
pub mod extender;
pub mod halfspin;
pub mod higherspin;
pub mod rootsys;
pub mod weylrep;

pub use cartan::{max_coclique, parse_gcm, realization, Diagram, DiagramKind, Gcm, Realization};
pub use exactnum::{CMatrix, GaussianRational, Matrix, QMatrix, Rational};
pub use extender::{Carrier, Convention, XMap};
pub use halfspin::{build_half_spin, gammas, verify_berman, GammaSet, HalfSpinRep};
pub use rootsys::{iterated_sum_closure, lambda_set, real_roots, Root};
pub use weylrep::Space;
