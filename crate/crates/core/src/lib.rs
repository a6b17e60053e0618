//! Exact computation of diffusion rates for periodic wind-tree billiards.
//!
//! The pipeline: a doubly-symmetric right-angled obstacle repeated over a
//! lattice unfolds to a square-tiled translation surface; the SL(2,Z) orbit
//! of that surface carries an arithmetic Teichmueller curve whose Lyapunov
//! exponents are computed exactly from cylinder decompositions, and the
//! diffusion rate falls out through Siegel-Veech constants of genus-zero
//! strata. The closed form (2m)!!/(2m+1)!! is evaluated both ways.

pub mod exact;
pub mod identities;
pub mod origami;
pub mod siegel_veech;
pub mod teichcurve;
pub mod windtree;

pub use exact::{Rational, SVValue};
pub use origami::{CylinderDecomposition, DifferentialKind, Origami, Perm, SingularityProfile};
pub use windtree::IntegerTable;
