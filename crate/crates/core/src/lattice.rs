//! Face enumeration from the vertex-facet incidence table.
//!
//! A face is identified by its vertex set. The polytope itself is a face;
//! the empty set is not. Faces are listed by dimension, then by vertex
//! indices, everywhere.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::polytope::Polytope;
use crate::ratgeom::{affine_rank, dot, QVector, Rational};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub vertex_ids: Vec<usize>,
    pub dim: usize,
    /// Facets containing the face; empty exactly for the polytope itself.
    pub facet_ids: Vec<usize>,
}

impl Face {
    fn sort_key(&self) -> (usize, &[usize]) {
        (self.dim, &self.vertex_ids)
    }

    pub fn vertices<'a>(&'a self, p: &'a Polytope) -> impl Iterator<Item = &'a QVector> + 'a {
        self.vertex_ids.iter().map(|&i| &p.vertices()[i])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    faces: Vec<Face>,
    f_vector: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
}

impl FaceLattice {
    fn from_faces(dim: usize, mut faces: Vec<Face>) -> Self {
        faces.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let mut f_vector = vec![0; dim + 1];
        for f in &faces {
            f_vector[f.dim] += 1;
        }
        let index = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.vertex_ids.clone(), i))
            .collect();
        Self {
            faces,
            f_vector,
            index,
        }
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Face counts by dimension `0..=d`.
    pub fn f_vector(&self) -> &[usize] {
        &self.f_vector
    }

    /// Number of nonempty faces, the polytope included.
    pub fn total(&self) -> usize {
        self.faces.len()
    }

    pub fn find(&self, vertex_ids: &[usize]) -> Option<&Face> {
        self.index.get(vertex_ids).map(|&i| &self.faces[i])
    }

    pub fn proper_faces(&self) -> impl Iterator<Item = &Face> {
        let top = self.f_vector.len() - 1;
        self.faces.iter().filter(move |f| f.dim < top)
    }
}

struct Incidence {
    n_vertices: usize,
    n_facets: usize,
    vertex_facets: Vec<FixedBitSet>,
    facet_vertices: Vec<FixedBitSet>,
}

impl Incidence {
    fn new(p: &Polytope) -> Self {
        let (nv, nf) = (p.num_vertices(), p.num_facets());
        let mut vertex_facets = vec![FixedBitSet::with_capacity(nf); nv];
        let mut facet_vertices = vec![FixedBitSet::with_capacity(nv); nf];
        for (f, ids) in p.incidence().iter().enumerate() {
            for &v in ids {
                vertex_facets[v].insert(f);
                facet_vertices[f].insert(v);
            }
        }
        Self {
            n_vertices: nv,
            n_facets: nf,
            vertex_facets,
            facet_vertices,
        }
    }

    /// Vertices on every facet in `facets`; all vertices if `facets` is empty.
    fn vertices_on(&self, facets: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n_vertices);
        out.insert_range(..);
        for f in facets.ones() {
            out.intersect_with(&self.facet_vertices[f]);
        }
        out
    }

    fn facets_of(&self, vertices: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n_facets);
        out.insert_range(..);
        for v in vertices {
            out.intersect_with(&self.vertex_facets[v]);
        }
        out
    }
}

/// Smallest face containing the vertex set `s`: every vertex on every facet
/// that contains all of `s`, or all vertices if no facet contains `s`.
pub fn closure(p: &Polytope, s: &[usize]) -> Result<Vec<usize>> {
    if s.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(&bad) = s.iter().find(|&&i| i >= p.num_vertices()) {
        return Err(Error::InvalidIndex(bad));
    }
    let inc = Incidence::new(p);
    let facets = inc.facets_of(s.iter().copied());
    Ok(inc.vertices_on(&facets).ones().collect())
}

fn make_face(p: &Polytope, vertex_ids: Vec<usize>, facet_ids: Vec<usize>) -> Result<Face> {
    let pts: Vec<QVector> = vertex_ids
        .iter()
        .map(|&i| p.vertices()[i].clone())
        .collect();
    let dim = affine_rank(&pts)?;
    Ok(Face {
        vertex_ids,
        dim,
        facet_ids,
    })
}

/// All faces, found by joining vertex atoms breadth first and closing.
pub fn enumerate_faces(p: &Polytope) -> FaceLattice {
    let inc = Incidence::new(p);
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut found: Vec<(FixedBitSet, FixedBitSet)> = Vec::new();
    let mut queue = VecDeque::new();

    for v in 0..inc.n_vertices {
        let facets = inc.vertex_facets[v].clone();
        let verts = inc.vertices_on(&facets);
        if seen.insert(verts.clone()) {
            queue.push_back(found.len());
            found.push((verts, facets));
        }
    }
    while let Some(i) = queue.pop_front() {
        let (verts, facets) = found[i].clone();
        for v in 0..inc.n_vertices {
            if verts.contains(v) {
                continue;
            }
            let mut joined = facets.clone();
            joined.intersect_with(&inc.vertex_facets[v]);
            let closed = inc.vertices_on(&joined);
            if seen.insert(closed.clone()) {
                queue.push_back(found.len());
                found.push((closed, joined));
            }
        }
    }

    let faces = found
        .into_par_iter()
        .map(|(verts, facets)| {
            make_face(p, verts.ones().collect(), facets.ones().collect())
                .expect("face vertex lists are nonempty and share a dimension")
        })
        .collect();
    FaceLattice::from_faces(p.dim(), faces)
}

/// Largest vertex count the supporting-hyperplane oracle accepts.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 64;

/// Literal oracle: a nonempty proper vertex subset is a face iff some
/// hyperplane has exactly that subset on it and every other vertex strictly
/// on one side. Subsets are grown depth first and pruned as soon as no
/// supporting hyperplane contains them, since that is inherited by supersets.
///
/// Uses nothing from the incidence table except to annotate `facet_ids`.
pub fn brute_force_faces(p: &Polytope) -> Result<FaceLattice> {
    let d = p.dim();
    let n = p.num_vertices();
    if d > 3 || n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "brute-force oracle needs d <= 3 and at most {BRUTE_FORCE_MAX_VERTICES} vertices (d={d}, n={n})"
        )));
    }
    let verts = p.vertices();
    let mut faces = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..n).rev().map(|v| vec![v]).collect();
    while let Some(s) = stack.pop() {
        let Some(contact) = supporting_contact_set(verts, &s) else {
            continue;
        };
        if contact == s || exposes_exactly(verts, &s) {
            faces.push(s.clone());
        }
        let last = *s.last().expect("nonempty");
        for v in (last + 1..n).rev() {
            let mut t = s.clone();
            t.push(v);
            stack.push(t);
        }
    }

    let inc = Incidence::new(p);
    let mut out = Vec::with_capacity(faces.len() + 1);
    for ids in faces {
        let facet_ids = inc.facets_of(ids.iter().copied()).ones().collect();
        out.push(make_face(p, ids, facet_ids)?);
    }
    out.push(make_face(p, (0..n).collect(), Vec::new())?);
    Ok(FaceLattice::from_faces(d, out))
}

/// Variables: `a = a⁺ - a⁻` (2d), `β = β⁺ - β⁻` (2); row for `a · w - β`.
fn hyperplane_row(w: &QVector) -> Vec<Rational> {
    let mut row = Vec::with_capacity(2 * w.dim() + 2);
    row.extend(w.coords().iter().cloned());
    row.extend(w.coords().iter().map(|c| -c));
    row.push(-Rational::one());
    row.push(Rational::one());
    row
}

/// Looks for a nontrivial hyperplane `a · x = β` through `s` with every
/// vertex in `a · x <= β`, normalized by `Σ (β - a · w) = 1`, and returns the
/// vertices it touches.
fn supporting_contact_set(verts: &[QVector], s: &[usize]) -> Option<Vec<usize>> {
    let d = verts[0].dim();
    let mut lp = LinearProgram::new(2 * d + 2);
    let mut total = vec![Rational::zero(); 2 * d + 2];
    for (i, w) in verts.iter().enumerate() {
        let row = hyperplane_row(w);
        for (t, r) in total.iter_mut().zip(&row) {
            *t -= r;
        }
        let rel = if s.binary_search(&i).is_ok() {
            Relation::Eq
        } else {
            Relation::Le
        };
        lp.add(row, rel, Rational::zero());
    }
    lp.add(total, Relation::Eq, Rational::one());
    let LpOutcome::Optimal { solution, .. } = lp.solve() else {
        return None;
    };
    let contact = verts
        .iter()
        .enumerate()
        .filter(|(_, w)| {
            let slack: Rational = hyperplane_row(w)
                .iter()
                .zip(&solution)
                .map(|(a, x)| a * x)
                .sum();
            slack.is_zero()
        })
        .map(|(i, _)| i)
        .collect();
    Some(contact)
}

/// Is there a hyperplane through `s` with every other vertex strictly below?
/// Strictness is scaled to `a · w - β <= -1`.
fn exposes_exactly(verts: &[QVector], s: &[usize]) -> bool {
    if s.len() == verts.len() {
        return false;
    }
    let d = verts[0].dim();
    let mut lp = LinearProgram::new(2 * d + 2);
    for (i, w) in verts.iter().enumerate() {
        if s.binary_search(&i).is_ok() {
            lp.add(hyperplane_row(w), Relation::Eq, Rational::zero());
        } else {
            lp.add(hyperplane_row(w), Relation::Le, -Rational::one());
        }
    }
    lp.solve().is_feasible()
}

/// Barycenter of the face's vertices, a point of its relative interior.
pub fn relint_point(f: &Face, p: &Polytope) -> QVector {
    QVector::barycenter(f.vertices(p)).expect("faces are nonempty")
}

/// True iff `x` is in the affine hull of `f` and can be written with all
/// barycentric weights strictly positive, i.e. lies in the face's relative
/// interior.
pub fn in_relative_interior(f: &Face, p: &Polytope, x: &QVector) -> bool {
    // maximize t subject to λ_i >= t, Σ λ_i = 1, Σ λ_i w_i = x
    let k = f.vertex_ids.len();
    let mut lp = LinearProgram::new(k + 1);
    let mut objective = vec![Rational::zero(); k + 1];
    objective[k] = Rational::one();
    lp.maximize(objective);
    for i in 0..k {
        let mut row = vec![Rational::zero(); k + 1];
        row[i] = Rational::one();
        row[k] = -Rational::one();
        lp.add(row, Relation::Ge, Rational::zero());
    }
    let mut ones = vec![Rational::one(); k];
    ones.push(Rational::zero());
    lp.add(ones, Relation::Eq, Rational::one());
    for j in 0..p.dim() {
        let mut row: Vec<Rational> = f.vertices(p).map(|w| w[j].clone()).collect();
        row.push(Rational::zero());
        lp.add(row, Relation::Eq, x[j].clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => value > Rational::zero(),
        _ => false,
    }
}

/// Index permutation sending each vertex to its negation, if `P = -P`.
pub fn antipodal_map(p: &Polytope) -> Option<Vec<usize>> {
    p.vertices().iter().map(|v| p.vertex_index(&-v)).collect()
}

/// Checks `x · n = c` for every facet listed on the face.
pub fn face_lies_on_facets(f: &Face, p: &Polytope) -> bool {
    f.facet_ids.iter().all(|&j| {
        let h = &p.facets()[j];
        f.vertices(p)
            .all(|w| dot(h.normal(), w).is_ok_and(|v| &v == h.offset()))
    })
}
