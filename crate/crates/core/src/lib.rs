//! Exact verification of the `3^d` face bound for centrally symmetric
//! polytopes that are mirror symmetric about `d` orthogonal hyperplanes.
//!
//! The pipeline: build a [`Polytope`] from halfspaces or vertices with exact
//! rational arithmetic, enumerate its faces from the vertex-facet incidence,
//! check the symmetry hypotheses, then assign a face to each of the
//! `3^d - 1` signed coordinate cones and certify that the assignment is
//! injective. [`certify`] bundles all of it into a [`Certificate`].

pub mod error;
pub mod io;
pub mod kalai;
pub mod lattice;
pub mod lp;
pub mod polytope;
pub mod ratgeom;
pub mod symmetry;

pub use error::{Error, Result};
pub use kalai::{
    certify, check_lemma6, disjointness_holds, enumerate_cones, qk_halfspaces,
    relint_meets_cone_interior, witness_for_cone, Certificate, Cone, ConeWitness, Sign,
    SignedSubset,
};
pub use lattice::{brute_force_faces, closure, enumerate_faces, relint_point, Face, FaceLattice};
pub use polytope::{
    cross_polytope, cube, facets_from_vrep, generate, product, random_reflection_symmetric,
    vertices_from_hrep, Family, HRep, Halfspace, Polytope, VRep,
};
pub use ratgeom::{affine_rank, dot, solve_linear, QMatrix, QVector, Rational};
pub use symmetry::{
    detect_standard_basis, is_centrally_symmetric, reflect, verify_basis, OrthoBasis,
    SymmetryReport,
};
