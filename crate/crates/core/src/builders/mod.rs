//! Triangulated objects: stacked spheres, subdivided simplices, triangulated
//! complete complexes, linear discs and corner blocks.

mod comdiv;
mod lattice;
mod linear_disc;
mod shrink;
mod sphere;

pub use comdiv::{
    triangulated_complete_complex, vertex_count_bound, vertex_count_formula, SubdividedSphere,
    TriangulatedCompleteComplex, TriangulatedFace,
};
pub use lattice::{
    dihedral_elements, subdivide_simplex, symmetry_action, LatticeAutomorphism, LatticeCell, SubdividedSimplex,
};
pub use linear_disc::{linear_disc, OrderedDisc};
pub use shrink::{shrink_after_delete, CornerBlock};
pub use sphere::{sphere_with_k_simplices, stacked_sphere, stacked_sphere_on};
