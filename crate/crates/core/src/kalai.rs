//! Cone-to-face witness map and the `3^d` certificate.
//!
//! For an orthogonal basis `B` every nonempty signed subset `K` (at most one
//! of `±b` per basis vector) spans a closed cone `X_K`. Each cone gets the
//! lowest-dimensional proper face whose relative interior meets the open
//! cone, ties broken by vertex indices. The certificate records, per cone,
//! that face, a witness point in both open sets, and whether the face's
//! relative interior sits inside the open orthant-like region
//! `Q_K = {x : x · u >= 0 for every u in K}`. If the map is injective, the
//! `3^d - 1` distinct faces plus the polytope itself give at least `3^d`
//! faces.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{enumerate_faces, Face, FaceLattice};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::polytope::{Halfspace, Polytope};
use crate::ratgeom::{dot, format_rational, sign, QVector, Rational};
use crate::symmetry::{verify_basis, OrthoBasis, SymmetryReport};

/// Largest dimension for which the cone list is materialized.
pub const MAX_CONE_DIM: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Absent,
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Absent => 0,
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i8(s: i8) -> Option<Self> {
        match s {
            0 => Some(Sign::Absent),
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// A choice of `+b`, `-b` or neither for each basis vector `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedSubset(Vec<Sign>);

impl SignedSubset {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.iter().all(|&s| s == Sign::Absent) {
            return Err(Error::EmptyInput);
        }
        Ok(Self(signs))
    }

    pub fn from_i8s(signs: &[i8]) -> Result<Self> {
        let signs = signs
            .iter()
            .map(|&s| {
                Sign::from_i8(s)
                    .ok_or_else(|| Error::InvalidParams(format!("sign {s} is not in {{-1, 0, 1}}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(signs)
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn to_i8s(&self) -> Vec<i8> {
        self.0.iter().map(|s| s.as_i8()).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Number of selected signed vectors, `|K|`.
    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&s| s != Sign::Absent).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The signed basis vectors in `K`, as `(basis index, ±b)`.
    pub fn selected(&self, b: &OrthoBasis) -> Vec<(usize, QVector)> {
        self.0
            .iter()
            .zip(b.vectors())
            .enumerate()
            .filter_map(|(i, (s, v))| match s {
                Sign::Absent => None,
                Sign::Plus => Some((i, v.clone())),
                Sign::Minus => Some((i, -v)),
            })
            .collect()
    }

    /// Basis vectors with neither sign in `K`.
    pub fn unselected<'a>(&self, b: &'a OrthoBasis) -> Vec<&'a QVector> {
        self.0
            .iter()
            .zip(b.vectors())
            .filter(|(s, _)| **s == Sign::Absent)
            .map(|(_, v)| v)
            .collect()
    }
}

/// All `3^d - 1` signed subsets, with `0 < + < -` per coordinate and the
/// first coordinate most significant.
pub fn enumerate_cones(d: usize) -> Result<Vec<SignedSubset>> {
    if d == 0 {
        return Err(Error::InvalidParams("dimension must be at least 1".into()));
    }
    if d > MAX_CONE_DIM {
        return Err(Error::TooLarge(format!("3^{d} cones")));
    }
    let count = 3usize.pow(d as u32);
    let digits = [Sign::Absent, Sign::Plus, Sign::Minus];
    Ok((1..count)
        .map(|mut n| {
            let mut signs = vec![Sign::Absent; d];
            for slot in signs.iter_mut().rev() {
                *slot = digits[n % 3];
                n /= 3;
            }
            SignedSubset(signs)
        })
        .collect())
}

/// The closed cone `X_K` of nonnegative combinations of `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub signs: SignedSubset,
    pub generators: Vec<QVector>,
    absent: Vec<QVector>,
}

impl Cone {
    pub fn new(signs: SignedSubset, b: &OrthoBasis) -> Result<Self> {
        if signs.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: b.dim(),
                got: signs.dim(),
            });
        }
        let generators = signs.selected(b).into_iter().map(|(_, v)| v).collect();
        let absent = signs.unselected(b).into_iter().cloned().collect();
        Ok(Self {
            signs,
            generators,
            absent,
        })
    }

    /// Because the basis is orthogonal, the coefficient of `x` on a
    /// generator `u` is `x · u / u · u`, so membership is a sign test.
    fn coefficient_test(&self, x: &QVector, strict: bool) -> bool {
        let ok = |r: &Rational| {
            if strict {
                r.is_positive()
            } else {
                !r.is_negative()
            }
        };
        self.generators
            .iter()
            .all(|u| dot(x, u).is_ok_and(|v| ok(&v)))
            && self
                .absent
                .iter()
                .all(|b| dot(x, b).is_ok_and(|v| v.is_zero()))
    }

    pub fn contains(&self, x: &QVector) -> bool {
        self.coefficient_test(x, false)
    }

    /// Membership in `X_K°`: every coefficient strictly positive.
    pub fn interior_contains(&self, x: &QVector) -> bool {
        self.coefficient_test(x, true)
    }
}

/// `Q_K` as halfspaces `-u · x <= 0`, one per `u` in `K`.
pub fn qk_halfspaces(k: &SignedSubset, b: &OrthoBasis) -> Result<Vec<Halfspace>> {
    if k.is_empty() {
        return Err(Error::EmptyInput);
    }
    if k.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: b.dim(),
            got: k.dim(),
        });
    }
    k.selected(b)
        .into_iter()
        .map(|(_, u)| Halfspace::new(-&u, Rational::zero()))
        .collect()
}

/// Necessary conditions on vertex signs; the LP is skipped when they fail.
fn may_meet(products_sel: &[Vec<Rational>], products_abs: &[Vec<Rational>]) -> bool {
    products_sel
        .iter()
        .all(|col| col.iter().any(|v| v.is_positive()))
        && products_abs.iter().all(|col| {
            let has_pos = col.iter().any(|v| v.is_positive());
            let has_neg = col.iter().any(|v| v.is_negative());
            has_pos == has_neg
        })
}

/// A point in the relative interior of `f` and in `X_K°`, if there is one.
///
/// Over barycentric weights `λ` and a slack `ε >= 0`: maximize `ε` subject
/// to `λ_i >= ε`, `Σ λ_i = 1`, `x · u >= ε (u · u)` for each `u` in `K`, and
/// `x · b = 0` for each basis vector not in `K`, where `x = Σ λ_i w_i`. The
/// intersection is nonempty iff the optimum is positive.
pub fn relint_meets_cone_interior(
    f: &Face,
    k: &SignedSubset,
    b: &OrthoBasis,
    p: &Polytope,
) -> Option<QVector> {
    let verts: Vec<&QVector> = f.vertices(p).collect();
    let n = verts.len();
    let selected = k.selected(b);
    let unselected = k.unselected(b);
    let column = |u: &QVector| -> Vec<Rational> {
        verts
            .iter()
            .map(|w| dot(w, u).expect("dimensions checked"))
            .collect()
    };
    let sel_products: Vec<Vec<Rational>> = selected.iter().map(|(_, u)| column(u)).collect();
    let abs_products: Vec<Vec<Rational>> = unselected.iter().map(|v| column(v)).collect();
    if !may_meet(&sel_products, &abs_products) {
        return None;
    }

    let mut lp = LinearProgram::new(n + 1);
    let mut objective = vec![Rational::zero(); n + 1];
    objective[n] = Rational::one();
    lp.maximize(objective);
    for i in 0..n {
        let mut row = vec![Rational::zero(); n + 1];
        row[i] = Rational::one();
        row[n] = -Rational::one();
        lp.add(row, Relation::Ge, Rational::zero());
    }
    let mut ones = vec![Rational::one(); n];
    ones.push(Rational::zero());
    lp.add(ones, Relation::Eq, Rational::one());
    for ((_, u), prods) in selected.iter().zip(sel_products) {
        let mut row = prods;
        row.push(-dot(u, u).expect("dimensions checked"));
        lp.add(row, Relation::Ge, Rational::zero());
    }
    for prods in abs_products {
        let mut row = prods;
        row.push(Rational::zero());
        lp.add(row, Relation::Eq, Rational::zero());
    }

    match lp.solve() {
        LpOutcome::Optimal { value, solution } if value.is_positive() => {
            let mut x = QVector::zeros(p.dim());
            for (lambda, w) in solution.iter().zip(&verts) {
                x = x.checked_add(&w.scale(lambda)).expect("dimensions checked");
            }
            Some(x)
        }
        _ => None,
    }
}

/// The face assigned to one cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeWitness {
    pub signs: SignedSubset,
    /// `None` if no proper face meets the open cone, which can only happen
    /// when the hypotheses fail.
    pub face: Option<Face>,
    pub point: Option<QVector>,
    pub lemma6_ok: bool,
}

/// Scans proper faces by increasing dimension, then vertex indices, and
/// takes the first whose relative interior meets `X_K°`.
pub fn witness_for_cone(
    p: &Polytope,
    l: &FaceLattice,
    b: &OrthoBasis,
    k: &SignedSubset,
) -> ConeWitness {
    let hit = l
        .proper_faces()
        .find_map(|f| relint_meets_cone_interior(f, k, b, p).map(|x| (f.clone(), x)));
    let mut w = ConeWitness {
        signs: k.clone(),
        face: None,
        point: None,
        lemma6_ok: false,
    };
    if let Some((face, point)) = hit {
        w.face = Some(face);
        w.point = Some(point);
        w.lemma6_ok = check_lemma6(&w, p, b);
    }
    w
}

/// `τ_K° ⊂ Q_K°`, checked on vertices: a positive convex combination of the
/// face's vertices is strictly positive against `u` for every choice of
/// weights iff no vertex is negative against `u` and at least one is
/// positive.
pub fn check_lemma6(w: &ConeWitness, p: &Polytope, b: &OrthoBasis) -> bool {
    let Some(face) = &w.face else {
        return false;
    };
    w.signs.selected(b).iter().all(|(_, u)| {
        let signs: Vec<i8> = face
            .vertices(p)
            .map(|x| sign(&dot(x, u).expect("dimensions checked")))
            .collect();
        signs.iter().all(|&s| s >= 0) && signs.iter().any(|&s| s > 0)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub dim: usize,
    pub vertices: Vec<QVector>,
    pub symmetry: SymmetryReport,
    pub f_vector: Vec<usize>,
    pub total: usize,
    pub witnesses: Vec<ConeWitness>,
    pub injective: bool,
    /// Distinct witness faces plus one for the polytope itself.
    pub distinct_faces_count: usize,
    pub verdict: bool,
}

impl Certificate {
    pub fn all_witnesses_found(&self) -> bool {
        !self.witnesses.is_empty() && self.witnesses.iter().all(|w| w.face.is_some())
    }

    pub fn all_lemma6_ok(&self) -> bool {
        !self.witnesses.is_empty() && self.witnesses.iter().all(|w| w.lemma6_ok)
    }

    pub fn to_json(&self) -> Value {
        let rat_vec = |v: &QVector| {
            Value::Array(
                v.coords()
                    .iter()
                    .map(|c| Value::String(format_rational(c)))
                    .collect(),
            )
        };
        let cones: Vec<Value> = self
            .witnesses
            .iter()
            .map(|w| {
                json!({
                    "signs": w.signs.to_i8s(),
                    "face_vertices": w.face.as_ref().map(|f| f.vertex_ids.clone()),
                    "face_dim": w.face.as_ref().map(|f| f.dim),
                    "witness_point": w.point.as_ref().map(rat_vec),
                    "lemma6_ok": w.lemma6_ok,
                })
            })
            .collect();
        json!({
            "dim": self.dim,
            "vertices": self.vertices.iter().map(rat_vec).collect::<Vec<_>>(),
            "symmetry": {
                "centrally_symmetric": self.symmetry.centrally_symmetric,
                "basis_verified": self.symmetry.basis_verified,
                "failing_vector": self.symmetry.failing_vector,
                "details": self.symmetry.details,
            },
            "f_vector": self.f_vector,
            "total": self.total,
            "cones": cones,
            "injective": self.injective,
            "distinct_faces": self.distinct_faces_count,
            "verdict": self.verdict,
        })
    }
}

/// Runs every check and records failures instead of returning errors.
pub fn certify(p: &Polytope, b: &OrthoBasis) -> Certificate {
    let d = p.dim();
    let lattice = enumerate_faces(p);
    let symmetry = verify_basis(p, b).unwrap_or_else(|e| SymmetryReport {
        centrally_symmetric: crate::symmetry::is_centrally_symmetric(p),
        basis_verified: false,
        failing_vector: None,
        details: e.to_string(),
    });

    let usable_basis = b.dim() == d && b.vectors().iter().all(|v| v.dim() == d && !v.is_zero());
    let witnesses: Vec<ConeWitness> = match (usable_basis, enumerate_cones(d)) {
        (true, Ok(cones)) => cones
            .par_iter()
            .map(|k| witness_for_cone(p, &lattice, b, k))
            .collect(),
        _ => Vec::new(),
    };

    let faces: Vec<&Vec<usize>> = witnesses
        .iter()
        .filter_map(|w| w.face.as_ref().map(|f| &f.vertex_ids))
        .collect();
    let distinct: HashSet<&Vec<usize>> = faces.iter().copied().collect();
    let injective =
        !witnesses.is_empty() && faces.len() == witnesses.len() && distinct.len() == faces.len();
    let distinct_faces_count = distinct.len() + 1;
    let target = 3usize.saturating_pow(d as u32);

    let all_found = !witnesses.is_empty() && witnesses.iter().all(|w| w.face.is_some());
    let all_lemma = !witnesses.is_empty() && witnesses.iter().all(|w| w.lemma6_ok);
    let verdict = symmetry.passed()
        && all_found
        && all_lemma
        && injective
        && distinct_faces_count == target
        && lattice.total() >= target;

    Certificate {
        dim: d,
        vertices: p.vertices().to_vec(),
        symmetry,
        f_vector: lattice.f_vector().to_vec(),
        total: lattice.total(),
        witnesses,
        injective,
        distinct_faces_count,
        verdict,
    }
}

/// Pointwise form of the injectivity argument: for `K != K'` with
/// `|K| >= |K'|`, every `u` in `K` but not in `K'` has `u · p' <= 0` at the
/// witness point `p'` of `K'`.
pub fn disjointness_holds(cert: &Certificate, b: &OrthoBasis) -> bool {
    let selected: Vec<Vec<(usize, QVector)>> =
        cert.witnesses.iter().map(|w| w.signs.selected(b)).collect();
    cert.witnesses.iter().enumerate().all(|(i, wk)| {
        cert.witnesses.iter().enumerate().all(|(j, wj)| {
            if i == j || wk.signs.len() < wj.signs.len() {
                return true;
            }
            let Some(pj) = &wj.point else { return false };
            let in_j: HashSet<(usize, i8)> = wj
                .signs
                .signs()
                .iter()
                .enumerate()
                .map(|(t, s)| (t, s.as_i8()))
                .collect();
            selected[i]
                .iter()
                .filter(|(t, _)| !in_j.contains(&(*t, wk.signs.signs()[*t].as_i8())))
                .all(|(_, u)| !dot(pj, u).expect("dimensions checked").is_positive())
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::in_relative_interior;
    use crate::polytope::{cross_polytope, cube, VRep};

    fn std(d: usize) -> OrthoBasis {
        OrthoBasis::standard(d)
    }

    fn k(s: &[i8]) -> SignedSubset {
        SignedSubset::from_i8s(s).unwrap()
    }

    fn face_of(p: &Polytope, l: &FaceLattice, pts: &[&[i64]]) -> Face {
        let mut ids: Vec<usize> = pts
            .iter()
            .map(|c| p.vertex_index(&QVector::from_ints(c)).unwrap())
            .collect();
        ids.sort();
        l.find(&ids).unwrap().clone()
    }

    #[test]
    fn cone_counts() {
        assert_eq!(enumerate_cones(1).unwrap(), vec![k(&[1]), k(&[-1])]);
        assert_eq!(enumerate_cones(2).unwrap().len(), 8);
        assert_eq!(enumerate_cones(4).unwrap().len(), 80);
        assert!(enumerate_cones(0).is_err());
        let two = enumerate_cones(2).unwrap();
        assert_eq!(two[0], k(&[0, 1]));
        assert_eq!(two[2], k(&[1, 0]));
        assert_eq!(two[7], k(&[-1, -1]));
    }

    #[test]
    fn signed_subset_rejects_empty_and_bad_signs() {
        assert_eq!(SignedSubset::from_i8s(&[0, 0]), Err(Error::EmptyInput));
        assert!(SignedSubset::from_i8s(&[2]).is_err());
    }

    #[test]
    fn qk_examples() {
        let h = qk_halfspaces(&k(&[1, 0]), &std(2)).unwrap();
        assert_eq!(
            h,
            vec![Halfspace::new(QVector::from_ints(&[-1, 0]), Rational::zero()).unwrap()]
        );
        let h = qk_halfspaces(&k(&[1, -1]), &std(2)).unwrap();
        assert_eq!(
            h,
            vec![
                Halfspace::new(QVector::from_ints(&[-1, 0]), Rational::zero()).unwrap(),
                Halfspace::new(QVector::from_ints(&[0, 1]), Rational::zero()).unwrap(),
            ]
        );
        assert_eq!(qk_halfspaces(&k(&[0, 1, 0]), &std(3)).unwrap().len(), 1);
        assert_eq!(
            qk_halfspaces(&SignedSubset(vec![Sign::Absent]), &std(1)),
            Err(Error::EmptyInput)
        );
    }

    #[test]
    fn cone_membership() {
        let c = Cone::new(k(&[1, 0, -1]), &std(3)).unwrap();
        assert_eq!(
            c.generators,
            vec![
                QVector::from_ints(&[1, 0, 0]),
                QVector::from_ints(&[0, 0, -1])
            ]
        );
        assert!(c.contains(&QVector::from_ints(&[0, 0, 0])));
        assert!(!c.interior_contains(&QVector::from_ints(&[0, 0, 0])));
        assert!(c.interior_contains(&QVector::from_ints(&[2, 0, -1])));
        assert!(!c.contains(&QVector::from_ints(&[2, 1, -1])));
        assert!(c.contains(&QVector::from_ints(&[2, 0, 0])));
        assert!(!c.interior_contains(&QVector::from_ints(&[2, 0, 0])));
    }

    #[test]
    fn relint_cone_examples() {
        let sq = cube(2).unwrap();
        let l = enumerate_faces(&sq);
        let right = face_of(&sq, &l, &[&[1, -1], &[1, 1]]);
        assert_eq!(
            relint_meets_cone_interior(&right, &k(&[1, 0]), &std(2), &sq),
            Some(QVector::from_ints(&[1, 0]))
        );
        let corner = face_of(&sq, &l, &[&[1, 1]]);
        assert_eq!(
            relint_meets_cone_interior(&corner, &k(&[1, 1]), &std(2), &sq),
            Some(QVector::from_ints(&[1, 1]))
        );
        assert_eq!(
            relint_meets_cone_interior(&corner, &k(&[1, 0]), &std(2), &sq),
            None
        );
        // an edge whose relative interior avoids the open quadrant
        assert_eq!(
            relint_meets_cone_interior(&right, &k(&[-1, 1]), &std(2), &sq),
            None
        );
    }

    #[test]
    fn witness_examples() {
        let sq = cube(2).unwrap();
        let l = enumerate_faces(&sq);
        let w = witness_for_cone(&sq, &l, &std(2), &k(&[1, 0]));
        assert_eq!(w.face, Some(face_of(&sq, &l, &[&[1, -1], &[1, 1]])));
        assert_eq!(w.face.as_ref().unwrap().dim, 1);
        assert!(w.lemma6_ok);
        let w = witness_for_cone(&sq, &l, &std(2), &k(&[1, 1]));
        assert_eq!(w.face, Some(face_of(&sq, &l, &[&[1, 1]])));
        assert!(w.lemma6_ok);

        let c3 = cube(3).unwrap();
        let l3 = enumerate_faces(&c3);
        let w = witness_for_cone(&c3, &l3, &std(3), &k(&[1, 1, 1]));
        assert_eq!(w.face, Some(face_of(&c3, &l3, &[&[1, 1, 1]])));
    }

    #[test]
    fn lemma6_rejects_a_face_on_the_mirror() {
        let diamond = cross_polytope(2).unwrap();
        let l = enumerate_faces(&diamond);
        let mut segment = face_of(&diamond, &l, &[&[0, 1]]);
        segment
            .vertex_ids
            .push(diamond.vertex_index(&QVector::from_ints(&[0, -1])).unwrap());
        segment.vertex_ids.sort();
        segment.dim = 1;
        let w = ConeWitness {
            signs: k(&[1, 0]),
            face: Some(segment),
            point: None,
            lemma6_ok: false,
        };
        assert!(!check_lemma6(&w, &diamond, &std(2)));
        let missing = ConeWitness { face: None, ..w };
        assert!(!check_lemma6(&missing, &diamond, &std(2)));
    }

    #[test]
    fn certify_small_families() {
        for p in [cube(3).unwrap(), cross_polytope(3).unwrap()] {
            let c = certify(&p, &std(3));
            assert!(c.verdict, "{:?}", c.symmetry);
            assert_eq!(c.total, 27);
            assert_eq!(c.witnesses.len(), 26);
            assert_eq!(c.distinct_faces_count, 27);
            assert!(c.injective);
            assert!(disjointness_holds(&c, &std(3)));
            for w in &c.witnesses {
                let x = w.point.as_ref().unwrap();
                assert!(Cone::new(w.signs.clone(), &std(3))
                    .unwrap()
                    .interior_contains(x));
                assert!(in_relative_interior(w.face.as_ref().unwrap(), &p, x));
            }
        }
    }

    #[test]
    fn simplex_fails_on_central_symmetry() {
        let tri = Polytope::from_vrep(
            &VRep::new(
                2,
                vec![
                    QVector::from_ints(&[0, 0]),
                    QVector::from_ints(&[1, 0]),
                    QVector::from_ints(&[0, 1]),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let c = certify(&tri, &std(2));
        assert!(!c.verdict);
        assert!(!c.symmetry.centrally_symmetric);
        assert_eq!(c.total, 7);
    }

    #[test]
    fn wrong_basis_size_is_recorded() {
        let c = certify(&cube(2).unwrap(), &std(3));
        assert!(!c.verdict);
        assert!(!c.symmetry.basis_verified);
        assert!(c.witnesses.is_empty());
    }

    #[test]
    fn json_is_deterministic_and_sorted() {
        let a = certify(&cube(2).unwrap(), &std(2)).to_json().to_string();
        let b = certify(&cube(2).unwrap(), &std(2)).to_json().to_string();
        assert_eq!(a, b);
        assert!(a.starts_with("{\"cones\":"));
        assert!(a.contains("\"witness_point\":[\"1\",\"0\"]"));
    }
}
