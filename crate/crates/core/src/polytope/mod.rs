//! Polytopes in both representations, exact conversion between them, and
//! the vertex-facet incidence table.

mod enumerate;
mod generate;

pub use enumerate::{facets_from_vrep, vertices_from_hrep};
pub use generate::{cross_polytope, cube, generate, product, random_reflection_symmetric, Family};

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratgeom::{affine_rank, dot, QVector, Rational};

/// The closed halfspace `{x : normal · x <= offset}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    normal: QVector,
    offset: Rational,
}

impl Halfspace {
    pub fn new(normal: QVector, offset: Rational) -> Result<Self> {
        if normal.is_zero() {
            return Err(Error::ZeroNormal);
        }
        Ok(Self { normal, offset })
    }

    pub fn normal(&self) -> &QVector {
        &self.normal
    }

    pub fn offset(&self) -> &Rational {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// `offset - normal · x`; nonnegative exactly on the halfspace.
    pub fn slack(&self, x: &QVector) -> Result<Rational> {
        Ok(&self.offset - dot(&self.normal, x)?)
    }

    pub fn contains(&self, x: &QVector) -> bool {
        self.slack(x).is_ok_and(|s| !s.is_negative())
    }

    pub fn on_boundary(&self, x: &QVector) -> bool {
        self.slack(x).is_ok_and(|s| s.is_zero())
    }

    /// The same halfspace rescaled by a positive factor so the normal has
    /// coprime integer entries.
    pub fn primitive(&self) -> Halfspace {
        let coords = self.normal.coords();
        let lcm = coords
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let gcd = coords.iter().fold(BigInt::zero(), |acc, r| {
            acc.gcd(&(r.numer() * (&lcm / r.denom())))
        });
        let k = Rational::new(lcm, gcd);
        Halfspace {
            normal: self.normal.scale(&k),
            offset: &self.offset * k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    dim: usize,
    halfspaces: Vec<Halfspace>,
}

impl HRep {
    pub fn new(dim: usize, halfspaces: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParams("dimension must be at least 1".into()));
        }
        for h in &halfspaces {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: h.dim(),
                });
            }
        }
        Ok(Self { dim, halfspaces })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }
}

/// A point list, deduplicated and sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    dim: usize,
    vertices: Vec<QVector>,
}

impl VRep {
    pub fn new(dim: usize, mut vertices: Vec<QVector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParams("dimension must be at least 1".into()));
        }
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.dim(),
                });
            }
        }
        vertices.sort();
        vertices.dedup();
        Ok(Self { dim, vertices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }
}

/// A bounded full-dimensional polytope with both representations.
///
/// Vertices are sorted lexicographically. Facets are irredundant and sorted
/// by their incident vertex-index lists, so two builds of the same polytope
/// from different inputs produce the same incidence table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    hrep: HRep,
    vrep: VRep,
    incidence: Vec<Vec<usize>>,
    vertex_facets: Vec<Vec<usize>>,
}

impl Polytope {
    pub fn from_hrep(h: &HRep) -> Result<Self> {
        let vrep = vertices_from_hrep(h)?;
        let d = h.dim();
        let mut seen = HashSet::new();
        let mut facets: Vec<(Vec<usize>, Halfspace)> = Vec::new();
        for hs in h.halfspaces() {
            let ids: Vec<usize> = vrep
                .vertices()
                .iter()
                .enumerate()
                .filter(|(_, v)| hs.on_boundary(v))
                .map(|(i, _)| i)
                .collect();
            if ids.is_empty() || seen.contains(&ids) {
                continue;
            }
            let pts: Vec<QVector> = ids.iter().map(|&i| vrep.vertices()[i].clone()).collect();
            if affine_rank(&pts)? + 1 == d {
                seen.insert(ids.clone());
                facets.push((ids, hs.clone()));
            }
        }
        facets.sort_by(|a, b| a.0.cmp(&b.0));

        let mut vertex_facets = vec![Vec::new(); vrep.vertices().len()];
        for (f, (ids, _)) in facets.iter().enumerate() {
            for &v in ids {
                vertex_facets[v].push(f);
            }
        }
        debug_assert!(vertex_facets.iter().all(|fs| fs.len() >= d));
        let (incidence, halfspaces): (Vec<_>, Vec<_>) = facets.into_iter().unzip();
        Ok(Self {
            hrep: HRep { dim: d, halfspaces },
            vrep,
            incidence,
            vertex_facets,
        })
    }

    /// Builds from a point cloud; points that are not extreme are dropped.
    pub fn from_vrep(v: &VRep) -> Result<Self> {
        Self::from_hrep(&facets_from_vrep(v)?)
    }

    pub fn dim(&self) -> usize {
        self.hrep.dim
    }

    pub fn hrep(&self) -> &HRep {
        &self.hrep
    }

    pub fn vrep(&self) -> &VRep {
        &self.vrep
    }

    pub fn vertices(&self) -> &[QVector] {
        self.vrep.vertices()
    }

    pub fn facets(&self) -> &[Halfspace] {
        self.hrep.halfspaces()
    }

    pub fn num_vertices(&self) -> usize {
        self.vrep.vertices.len()
    }

    pub fn num_facets(&self) -> usize {
        self.incidence.len()
    }

    /// Facet index to the sorted vertex indices on that facet.
    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    /// Vertex index to the sorted facet indices containing it.
    pub fn vertex_facets(&self) -> &[Vec<usize>] {
        &self.vertex_facets
    }

    /// Index of `x` in the sorted vertex list.
    pub fn vertex_index(&self, x: &QVector) -> Option<usize> {
        self.vrep.vertices.binary_search(x).ok()
    }
}
