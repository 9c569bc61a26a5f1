//! Boundary quadrature on the unit circle, outer functions, the inner-outer
//! split of `g'_ζ`, outerness diagnostics and the residue form of the
//! derivative operator.

mod grid;
mod outerness;
mod quadrature;
mod residue;
mod split;

pub use grid::{BoundaryGrid, GridKind};
pub use outerness::check_outer;
pub use quadrature::{
    herglotz_kernel, integrate_boundary, integrate_fn, integrate_real, outer_from_modulus,
    poisson_extension, poisson_kernel, CompensatedSum, BOUNDARY_MARGIN,
};
pub use residue::{
    residue_derivative, residue_radius, winding_number, ResidueOptions, ResidueValue, MAX_RADIUS,
    MIN_RADIUS,
};
pub use split::{boundary_log_modulus, character_delta, inner_outer_split, InnerOuterSplit};
