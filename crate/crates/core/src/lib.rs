//! Numerical verification of sharp inverse-coefficient bounds for four
//! families of close-to-convex functions.
//!
//! A normalized analytic function `f(z) = z + a2 z^2 + ...` on the unit disk
//! that satisfies `Re((1-z)f'(z)) > 0`, `Re((1-z^2)f'(z)) > 0`,
//! `Re((1-z+z^2)f'(z)) > 0` or `Re((1-z)^2 f'(z)) > 0` is close-to-convex
//! with respect to one of the starlike generators `z/(1-z)`, `z/(1-z^2)`,
//! `z/(1-z+z^2)`, `z/(1-z)^2` (classes F1..F4 here).  The first inverse
//! coefficients `delta_2..delta_5` of such functions obey sharp magnitude
//! bounds; this crate recomputes those bounds by deterministic global search
//! and certifies every identity the derivation rests on.
//!
//! Module map:
//! - [`series`]: truncated power-series arithmetic and series inversion,
//! - [`caratheodory`]: Schur parametrization of the coefficients `c1..c4` of
//!   positive-real-part functions, Toeplitz membership tests, extremal
//!   families,
//! - [`omega`]: piecewise closed form of the disk maximum
//!   `max_{|v|<=1} |M|(1-|v|^2) + |A + Bv + Cv^2|` and a brute-force oracle,
//! - [`bounds`]: the per-class functionals `delta_2..delta_5`, the scalar
//!   case functions of the maximization, and recomputed case-boundary
//!   constants,
//! - [`optimizer`]: deterministic derivative-free maximization over products
//!   of real intervals and unit disks,
//! - [`verify`]: assembly of bound-verification, extremal, identity and
//!   omega-equivalence reports (the data behind the CLI).

pub mod bounds;
pub mod caratheodory;
pub mod omega;
pub mod optimizer;
pub mod series;
pub mod verify;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
