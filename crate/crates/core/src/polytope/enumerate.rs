//! H to V by enumerating basic solutions, V to H by polarity.
//!
//! Every `d`-subset of the halfspace system is solved exactly and the
//! solution kept when it satisfies the whole system. Rows are first scaled to
//! integers; when they fit in machine words the subsets are solved with a
//! fraction-free Gauss-Jordan pass in checked `i128`, falling back to exact
//! rationals for any subset that would overflow.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{HRep, Halfspace, VRep};
use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::ratgeom::{affine_rank, dot, solve_linear, QMatrix, QVector, Rational};

/// Exact vertex list of a bounded full-dimensional halfspace intersection.
pub fn vertices_from_hrep(h: &HRep) -> Result<VRep> {
    let d = h.dim();
    let rows = h.halfspaces();
    if !is_bounded(d, rows) {
        return Err(Error::Unbounded);
    }
    let int_rows = IntRow::scale_all(rows);

    let found: BTreeSet<QVector> = (0..rows.len())
        .into_par_iter()
        .map(|first| {
            let mut local = BTreeSet::new();
            for rest in (first + 1..rows.len()).combinations(d - 1) {
                let mut subset = Vec::with_capacity(d);
                subset.push(first);
                subset.extend(rest);
                let point = match &int_rows {
                    Some(ir) => match basic_solution_int(ir, &subset) {
                        Some(p) => p,
                        None => basic_solution_rational(rows, &subset),
                    },
                    None => basic_solution_rational(rows, &subset),
                };
                if let Some(p) = point {
                    local.insert(p);
                }
            }
            local
        })
        .reduce(BTreeSet::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });

    let vertices: Vec<QVector> = found.into_iter().collect();
    if vertices.is_empty() {
        return Err(Error::Infeasible);
    }
    let found_dim = affine_rank(&vertices)?;
    if found_dim < d {
        return Err(Error::Degenerate {
            dim: d,
            found: found_dim,
        });
    }
    VRep::new(d, vertices)
}

/// Irredundant facets of `conv(v)`, read off the vertices of the polar taken
/// around the vertex barycenter.
pub fn facets_from_vrep(v: &VRep) -> Result<HRep> {
    let d = v.dim();
    let pts = v.vertices();
    if pts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let found = affine_rank(pts)?;
    if found < d {
        return Err(Error::Degenerate { dim: d, found });
    }
    let center = QVector::barycenter(pts)?;
    let mut polar = Vec::with_capacity(pts.len());
    for p in pts {
        let shifted = p.checked_sub(&center)?;
        // a point at the barycenter imposes no polar constraint
        if !shifted.is_zero() {
            polar.push(Halfspace::new(shifted, Rational::one())?);
        }
    }
    let polar_vertices = match vertices_from_hrep(&HRep::new(d, polar)?) {
        Ok(v) => v,
        Err(Error::Unbounded | Error::Infeasible | Error::Degenerate { .. }) => {
            unreachable!("polar around an interior point is a full-dimensional polytope")
        }
        Err(e) => return Err(e),
    };
    let facets = polar_vertices
        .vertices()
        .iter()
        .map(|y| {
            let offset = Rational::one() + dot(y, &center)?;
            Ok(Halfspace::new(y.clone(), offset)?.primitive())
        })
        .collect::<Result<Vec<_>>>()?;
    HRep::new(d, facets)
}

/// A system is bounded iff every coordinate direction `±e_i` is a
/// nonnegative combination of the normals.
fn is_bounded(d: usize, rows: &[Halfspace]) -> bool {
    (0..d).all(|i| {
        [Rational::one(), -Rational::one()].into_iter().all(|s| {
            let mut lp = LinearProgram::new(rows.len());
            for k in 0..d {
                let coeffs = rows.iter().map(|h| h.normal()[k].clone()).collect();
                let rhs = if k == i { s.clone() } else { Rational::zero() };
                lp.add(coeffs, Relation::Eq, rhs);
            }
            lp.solve() != LpOutcome::Infeasible
        })
    })
}

fn basic_solution_rational(rows: &[Halfspace], subset: &[usize]) -> Option<QVector> {
    let a = QMatrix::from_rows(subset.iter().map(|&i| rows[i].normal().clone()).collect()).ok()?;
    if a.rank() < a.ncols() {
        return None;
    }
    let b = QVector::new(subset.iter().map(|&i| rows[i].offset().clone()).collect());
    let x = solve_linear(&a, &b).ok()??;
    rows.iter().all(|h| h.contains(&x)).then_some(x)
}

/// A halfspace scaled to integer coefficients: `a · x <= c`.
struct IntRow {
    a: Vec<i128>,
    c: i128,
}

impl IntRow {
    /// `None` unless every scaled coefficient fits in an `i64`.
    fn scale_all(rows: &[Halfspace]) -> Option<Vec<IntRow>> {
        rows.iter().map(Self::scale).collect()
    }

    fn scale(h: &Halfspace) -> Option<IntRow> {
        let all = h
            .normal()
            .coords()
            .iter()
            .chain(std::iter::once(h.offset()));
        let lcm = all.clone().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let to_int = |r: &Rational| -> Option<i128> {
            let v = r.numer() * (&lcm / r.denom());
            v.to_i64().map(i128::from)
        };
        Some(IntRow {
            a: h.normal()
                .coords()
                .iter()
                .map(to_int)
                .collect::<Option<_>>()?,
            c: to_int(h.offset())?,
        })
    }
}

/// Solves the square subsystem with fraction-free Gauss-Jordan (every
/// division is exact, and the final diagonal is the determinant), then checks
/// all rows. Outer `None` means an `i128` overflow; `Some(None)` means the
/// subset is singular or its solution infeasible.
#[allow(clippy::needless_range_loop)]
fn basic_solution_int(rows: &[IntRow], subset: &[usize]) -> Option<Option<QVector>> {
    let d = subset.len();
    let mut m: Vec<Vec<i128>> = subset
        .iter()
        .map(|&i| {
            let mut r = rows[i].a.clone();
            r.push(rows[i].c);
            r
        })
        .collect();
    let mut prev: i128 = 1;
    for k in 0..d {
        let Some(p) = (k..d).find(|&r| m[r][k] != 0) else {
            return Some(None);
        };
        m.swap(k, p);
        let pivot = m[k][k];
        for i in 0..d {
            if i == k {
                continue;
            }
            let factor = m[i][k];
            for j in 0..=d {
                if j == k {
                    continue;
                }
                let v = pivot
                    .checked_mul(m[i][j])?
                    .checked_sub(factor.checked_mul(m[k][j])?)?;
                m[i][j] = v / prev;
            }
            m[i][k] = 0;
        }
        prev = pivot;
    }
    let det = prev;
    let num: Vec<i128> = m.iter().map(|r| r[d]).collect();
    for row in rows {
        let mut lhs: i128 = 0;
        for (a, x) in row.a.iter().zip(&num) {
            lhs = lhs.checked_add(a.checked_mul(*x)?)?;
        }
        let rhs = row.c.checked_mul(det)?;
        let violated = if det > 0 { lhs > rhs } else { lhs < rhs };
        if violated {
            return Some(None);
        }
    }
    let den = BigInt::from(det);
    let coords = num
        .into_iter()
        .map(|n| Rational::new(BigInt::from(n), den.clone()))
        .collect();
    Some(Some(QVector::new(coords)))
}
