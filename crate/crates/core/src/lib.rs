//! Exact chain algebra, triangulations, linking numbers and Ramsey-type
//! link constructions for embedded complete n-complexes.

pub mod builders;
pub mod cert;
pub mod chain;
pub mod error;
pub mod exact;
pub mod geom;
pub mod ramsey;
pub mod seed;
pub mod surgery;
pub mod verify;

pub use chain::{
    check_disc, check_sphere, complete_complex, ids, IntegerChain, OrientedSimplex,
    SimplicialComplex, SphereFailure, SphereWitness, VertexId,
};
pub use error::{Error, Result};
