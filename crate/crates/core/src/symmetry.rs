//! Hypothesis checks: central symmetry and mirror symmetry about the
//! hyperplanes orthogonal to a rational orthogonal basis.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::ratgeom::{dot, int, QVector};

/// Pairwise orthogonal nonzero rational vectors, not necessarily unit length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoBasis {
    vectors: Vec<QVector>,
}

impl OrthoBasis {
    /// Checks shape, nonzero vectors and exact orthogonality.
    pub fn new(vectors: Vec<QVector>) -> Result<Self> {
        let d = vectors.len();
        if d == 0 {
            return Err(Error::EmptyInput);
        }
        for v in &vectors {
            if v.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: v.dim(),
                });
            }
            if v.is_zero() {
                return Err(Error::ZeroNormal);
            }
        }
        if let Some((i, j)) = orthogonality_failures(&vectors).next() {
            return Err(Error::InvalidParams(format!(
                "basis vectors {i} and {j} are not orthogonal"
            )));
        }
        Ok(Self { vectors })
    }

    /// Skips validation so failing bases can still be reported on.
    pub fn new_unchecked(vectors: Vec<QVector>) -> Self {
        Self { vectors }
    }

    pub fn standard(d: usize) -> Self {
        Self {
            vectors: (0..d).map(|i| QVector::unit(d, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[QVector] {
        &self.vectors
    }
}

fn orthogonality_failures(vs: &[QVector]) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..vs.len()).flat_map(move |i| {
        (i + 1..vs.len()).filter_map(move |j| match dot(&vs[i], &vs[j]) {
            Ok(x) if x.is_zero() => None,
            _ => Some((i, j)),
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryReport {
    pub centrally_symmetric: bool,
    pub basis_verified: bool,
    /// First basis vector whose mirror does not preserve the polytope.
    pub failing_vector: Option<usize>,
    pub details: String,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.centrally_symmetric && self.basis_verified
    }
}

fn vertex_set(p: &Polytope) -> BTreeSet<&QVector> {
    p.vertices().iter().collect()
}

/// `P = -P`, checked on the vertex set.
pub fn is_centrally_symmetric(p: &Polytope) -> bool {
    let set = vertex_set(p);
    p.vertices().iter().all(|v| set.contains(&-v))
}

/// Mirror image of `x` in the hyperplane through 0 with normal `v`.
pub fn reflect(x: &QVector, v: &QVector) -> Result<QVector> {
    let vv = dot(v, v)?;
    if vv.is_zero() {
        return Err(Error::ZeroNormal);
    }
    let k = int(2) * dot(x, v)? / vv;
    x.checked_sub(&v.scale(&k))
}

fn mirror_preserves(p: &Polytope, v: &QVector) -> bool {
    let set = vertex_set(p);
    p.vertices()
        .iter()
        .all(|x| reflect(x, v).is_ok_and(|y| set.contains(&y)))
}

/// Checks orthogonality of `b`, then that each mirror maps the vertex set to
/// itself. Central symmetry is reported separately in the same report.
pub fn verify_basis(p: &Polytope, b: &OrthoBasis) -> Result<SymmetryReport> {
    let d = p.dim();
    if b.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: b.dim(),
        });
    }
    if let Some(bad) = b.vectors().iter().find(|v| v.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: bad.dim(),
        });
    }
    let centrally_symmetric = is_centrally_symmetric(p);
    let mut details = Vec::new();
    if !centrally_symmetric {
        details.push("vertex set is not closed under negation".to_string());
    }

    let mut failing_vector = None;
    if let Some(i) = b.vectors().iter().position(QVector::is_zero) {
        failing_vector = Some(i);
        details.push(format!("basis vector {i} is zero"));
    } else if let Some((i, j)) = orthogonality_failures(b.vectors()).next() {
        failing_vector = Some(j);
        details.push(format!("basis vectors {i} and {j} are not orthogonal"));
    } else if let Some(i) = b.vectors().iter().position(|v| !mirror_preserves(p, v)) {
        failing_vector = Some(i);
        details.push(format!("mirror about the hyperplane orthogonal to basis vector {i} does not preserve the vertex set"));
    }
    let basis_verified = failing_vector.is_none();
    if centrally_symmetric && basis_verified {
        details.push("all symmetry hypotheses hold".to_string());
    }
    Ok(SymmetryReport {
        centrally_symmetric,
        basis_verified,
        failing_vector,
        details: details.join("; "),
    })
}

/// The standard basis, if every coordinate mirror is a symmetry of `p`.
pub fn detect_standard_basis(p: &Polytope) -> Option<OrthoBasis> {
    let b = OrthoBasis::standard(p.dim());
    match verify_basis(p, &b) {
        Ok(r) if r.basis_verified => Some(b),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::enumerate_faces;
    use crate::polytope::{cross_polytope, cube, random_reflection_symmetric, VRep};
    use crate::ratgeom::ratio;
    use proptest::prelude::*;

    fn polygon(pts: &[[i64; 2]]) -> Polytope {
        Polytope::from_vrep(
            &VRep::new(2, pts.iter().map(|p| QVector::from_ints(p)).collect()).unwrap(),
        )
        .unwrap()
    }

    pub(crate) fn skew_hexagon() -> Polytope {
        polygon(&[[2, 0], [1, 2], [-1, 1], [-2, 0], [-1, -2], [1, -1]])
    }

    #[test]
    fn central_symmetry() {
        assert!(is_centrally_symmetric(&cube(3).unwrap()));
        assert!(!is_centrally_symmetric(&polygon(&[[0, 0], [1, 0], [0, 1]])));
        assert!(is_centrally_symmetric(
            &random_reflection_symmetric(3, 2, 3).unwrap()
        ));
    }

    #[test]
    fn reflect_examples() {
        let e1 = QVector::unit(2, 0);
        assert_eq!(
            reflect(&QVector::from_ints(&[1, 2]), &e1).unwrap(),
            QVector::from_ints(&[-1, 2])
        );
        let q = QVector::from_ints(&[0, 5]);
        assert_eq!(reflect(&q, &e1).unwrap(), q);
        assert_eq!(reflect(&q, &QVector::zeros(2)), Err(Error::ZeroNormal));
    }

    #[test]
    fn families_verify_with_standard_basis() {
        for d in 1..=4 {
            for p in [cube(d).unwrap(), cross_polytope(d).unwrap()] {
                let r = verify_basis(&p, &OrthoBasis::standard(d)).unwrap();
                assert!(r.passed(), "{r:?}");
                assert_eq!(detect_standard_basis(&p), Some(OrthoBasis::standard(d)));
            }
        }
    }

    #[test]
    fn parallelogram_fails_at_first_vector() {
        let p = polygon(&[[1, 0], [-1, 0], [1, 1], [-1, -1]]);
        let r = verify_basis(&p, &OrthoBasis::standard(2)).unwrap();
        assert!(r.centrally_symmetric);
        assert!(!r.basis_verified);
        assert_eq!(r.failing_vector, Some(0));
    }

    #[test]
    fn scaled_cross_polytope_keeps_standard_basis() {
        let p = polygon(&[[2, 0], [0, 2], [-2, 0], [0, -2]]);
        assert!(detect_standard_basis(&p).is_some());
    }

    #[test]
    fn skew_hexagon_has_no_axis_symmetry() {
        let h = skew_hexagon();
        assert_eq!(h.num_vertices(), 6);
        assert!(is_centrally_symmetric(&h));
        assert_eq!(detect_standard_basis(&h), None);
        assert!(!mirror_preserves(&h, &QVector::unit(2, 0)));
        assert!(!mirror_preserves(&h, &QVector::unit(2, 1)));
    }

    #[test]
    fn diagonal_basis_for_the_square() {
        // the square is also symmetric about both diagonals
        let b = OrthoBasis::new(vec![
            QVector::from_ints(&[1, 1]),
            QVector::from_ints(&[1, -1]),
        ])
        .unwrap();
        assert!(verify_basis(&cube(2).unwrap(), &b).unwrap().passed());
        // but the skew hexagon is not
        assert!(!verify_basis(&skew_hexagon(), &b).unwrap().basis_verified);
    }

    #[test]
    fn bad_bases() {
        assert!(OrthoBasis::new(vec![
            QVector::from_ints(&[1, 1]),
            QVector::from_ints(&[1, 0])
        ])
        .is_err());
        assert_eq!(
            OrthoBasis::new(vec![QVector::zeros(1)]),
            Err(Error::ZeroNormal)
        );
        let skew = OrthoBasis::new_unchecked(vec![
            QVector::from_ints(&[1, 1]),
            QVector::from_ints(&[1, 0]),
        ]);
        let r = verify_basis(&cube(2).unwrap(), &skew).unwrap();
        assert!(!r.basis_verified);
        assert_eq!(r.failing_vector, Some(1));
        assert!(verify_basis(&cube(3).unwrap(), &OrthoBasis::standard(2)).is_err());
    }

    #[test]
    fn mirrors_map_faces_to_faces() {
        let p = random_reflection_symmetric(3, 3, 21).unwrap();
        let l = enumerate_faces(&p);
        for v in OrthoBasis::standard(3).vectors() {
            for f in l.faces() {
                let mut image: Vec<usize> = f
                    .vertices(&p)
                    .map(|w| p.vertex_index(&reflect(w, v).unwrap()).unwrap())
                    .collect();
                image.sort();
                assert!(l.find(&image).is_some());
            }
        }
    }

    fn rational() -> impl Strategy<Value = crate::ratgeom::Rational> {
        (-30i64..=30, 1i64..=9).prop_map(|(n, d)| ratio(n, d))
    }

    fn vector(d: usize) -> impl Strategy<Value = QVector> {
        proptest::collection::vec(rational(), d).prop_map(QVector::new)
    }

    proptest! {
        #[test]
        fn reflect_is_an_involution(x in vector(4), v in vector(4).prop_filter("nonzero", |v| !v.is_zero())) {
            let y = reflect(&x, &v).unwrap();
            prop_assert_eq!(reflect(&y, &v).unwrap(), x);
        }

        #[test]
        fn reflect_preserves_orthogonal_components(x in vector(3), (a, b) in (1i64..5, 1i64..5)) {
            // v = (a, b, 0) and u = (-b, a, 7) are orthogonal
            let v = QVector::from_ints(&[a, b, 0]);
            let u = QVector::from_ints(&[-b, a, 7]);
            let y = reflect(&x, &v).unwrap();
            prop_assert_eq!(dot(&y, &u).unwrap(), dot(&x, &u).unwrap());
        }

        #[test]
        fn verification_ignores_positive_scaling(k in 1i64..20, l in 1i64..20, seed in 0u64..30) {
            let p = random_reflection_symmetric(2, 2, seed).unwrap();
            let std = OrthoBasis::standard(2);
            let scaled = OrthoBasis::new(vec![
                QVector::unit(2, 0).scale(&ratio(k, l)),
                QVector::unit(2, 1).scale(&ratio(l, k)),
            ]).unwrap();
            prop_assert_eq!(verify_basis(&p, &std).unwrap(), verify_basis(&p, &scaled).unwrap());
            let h = skew_hexagon();
            prop_assert_eq!(verify_basis(&h, &std).unwrap(), verify_basis(&h, &scaled).unwrap());
        }
    }
}
