//! Box splines with parameters, deconvolution of the semi-discrete
//! convolution by truncated Todd-type operators, and Kostant partition
//! functions with parameters.
//!
//! Everything geometric (wall membership, zonotope containment, alcove
//! identification) runs in arbitrary-precision rational arithmetic, and the
//! parameter-free (`y = 0`) pipeline is exact end to end: the recovered
//! lattice functions come back as rational complex numbers with no
//! tolerance anywhere. The parametric path (`y != 0`) evaluates local
//! analytic pieces numerically with controlled error.
//!
//! The central objects:
//!
//! * [`directions::DirectionList`] — the list Φ of integer direction
//!   vectors spanning ℝ^d, with its zonotope Z(Φ).
//! * [`arrangement`] — walls, affine walls, alcoves and the exact
//!   realization of one-sided limits from a generic direction.
//! * [`boxspline`] — evaluation of B(Φ,y) and extraction of exact local
//!   polynomials on alcoves.
//! * [`series`] — Bernoulli numbers, the β(ℓ,u) coefficients and truncated
//!   Todd-type differential operators.
//! * [`torus`] — the finite vertex set 𝒱 of points s of the torus with
//!   Φ(s) = {α : s^α = 1} still spanning.
//! * [`deconv`] — semi-discrete convolution and its inversion, translated
//!   variants, and the Dahmen–Micchelli quasipolynomial attached to an
//!   alcove.
//! * [`partition`] — Kostant partition functions, chambers, the
//!   multispline, and the Todd-operator formula for partition counts.

pub mod arrangement;
pub mod boxspline;
pub mod cyclotomic;
pub mod deconv;
pub mod directions;
pub mod error;
pub mod io;
pub mod lp;
pub mod partition;
pub mod poly;
pub mod quad;
pub mod rat;
pub mod series;
pub mod snf;
pub mod torus;

pub use error::Error;
pub type Result<T> = std::result::Result<T, Error>;
