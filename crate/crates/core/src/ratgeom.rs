//! Exact rational scalars, vectors and matrices.
//!
//! Everything geometric in this crate runs on [`Rational`], an
//! arbitrary-precision fraction kept in lowest terms. There is no floating
//! point anywhere on these paths.

use std::fmt;
use std::ops::{Index, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always normalized.
pub type Rational = num_rational::BigRational;

/// Builds `num/den` from machine integers. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p/q` or `p` (base ten, optional leading sign, no whitespace).
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(format!("invalid rational {s:?}"));
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = BigInt::from_str(num).map_err(|_| format!("invalid numerator in {s:?}"))?;
    let den = match den {
        Some(d) => {
            if d.starts_with(['+', '-']) {
                return Err(format!("signed denominator in {s:?}"));
            }
            BigInt::from_str(d).map_err(|_| format!("invalid denominator in {s:?}"))?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rational::new(num, den))
}

/// A point or direction in exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVector(Vec<Rational>);

impl QVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![Rational::zero(); dim])
    }

    /// The `i`-th standard basis vector of `R^dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &QVector) -> Result<Rational> {
        dot(self, other)
    }

    pub fn checked_add(&self, other: &QVector) -> Result<QVector> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn checked_sub(&self, other: &QVector) -> Result<QVector> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scale(&self, k: &Rational) -> QVector {
        Self(self.0.iter().map(|a| a * k).collect())
    }

    /// Equal-weight average of a nonempty list of points.
    pub fn barycenter<'a, I>(points: I) -> Result<QVector>
    where
        I: IntoIterator<Item = &'a QVector>,
    {
        let mut iter = points.into_iter();
        let first = iter.next().ok_or(Error::EmptyInput)?;
        let mut sum = first.clone();
        let mut n = 1i64;
        for p in iter {
            sum = sum.checked_add(p)?;
            n += 1;
        }
        Ok(sum.scale(&ratio(1, n)))
    }
}

impl Index<usize> for QVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Neg for &QVector {
    type Output = QVector;

    fn neg(self) -> QVector {
        QVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// Exact inner product.
pub fn dot(a: &QVector, b: &QVector) -> Result<Rational> {
    check_dims(a.dim(), b.dim())?;
    Ok(a.0
        .iter()
        .zip(&b.0)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y))
}

/// Dense rectangular matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: Vec<QVector>,
    ncols: usize,
}

impl QMatrix {
    /// Fails unless every row has length `ncols`.
    pub fn new(rows: Vec<QVector>, ncols: usize) -> Result<Self> {
        for r in &rows {
            check_dims(ncols, r.dim())?;
        }
        Ok(Self { rows, ncols })
    }

    pub fn from_rows(rows: Vec<QVector>) -> Result<Self> {
        let ncols = rows.first().map(QVector::dim).ok_or(Error::EmptyInput)?;
        Self::new(rows, ncols)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }

    pub fn mul_vec(&self, x: &QVector) -> Result<QVector> {
        check_dims(self.ncols, x.dim())?;
        self.rows
            .iter()
            .map(|r| dot(r, x))
            .collect::<Result<Vec<_>>>()
            .map(QVector)
    }

    /// Rank by exact elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rational>> = self.rows.iter().map(|r| r.0.clone()).collect();
        eliminate(&mut m, self.ncols).len()
    }
}

/// Reduces `m` in place to reduced row echelon form on its first `ncols`
/// columns, using the first nonzero entry in each column as pivot. Returns
/// the pivot columns in order; the first `len()` rows are the pivot rows.
fn eliminate(m: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (v, p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Dimension of the affine hull of `points` (0 for a single point).
pub fn affine_rank(points: &[QVector]) -> Result<usize> {
    let (first, rest) = points.split_first().ok_or(Error::EmptyInput)?;
    if rest.is_empty() {
        return Ok(0);
    }
    let diffs = rest
        .iter()
        .map(|p| p.checked_sub(first))
        .collect::<Result<Vec<_>>>()?;
    Ok(QMatrix::new(diffs, first.dim())?.rank())
}

/// One exact solution of `a x = b`, or `None` if the system is inconsistent.
/// Free variables are set to zero.
pub fn solve_linear(a: &QMatrix, b: &QVector) -> Result<Option<QVector>> {
    check_dims(a.nrows(), b.dim())?;
    let n = a.ncols();
    let mut aug: Vec<Vec<Rational>> = a
        .rows
        .iter()
        .zip(&b.0)
        .map(|(r, bi)| {
            let mut row = r.0.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let pivots = eliminate(&mut aug, n);
    if aug[pivots.len()..].iter().any(|r| !r[n].is_zero()) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug[row][n].clone();
    }
    Ok(Some(QVector(x)))
}

/// Sign of `r` as -1, 0 or 1.
pub(crate) fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cube_vertices(d: usize) -> Vec<QVector> {
        (0..1u32 << d)
            .map(|mask| {
                QVector::new(
                    (0..d)
                        .map(|i| if mask >> i & 1 == 1 { int(1) } else { int(-1) })
                        .collect(),
                )
            })
            .collect()
    }

    #[test]
    fn dot_examples() {
        let e1 = QVector::from_ints(&[1, 0]);
        let e2 = QVector::from_ints(&[0, 1]);
        assert_eq!(dot(&e1, &e2).unwrap(), int(0));
        let a = QVector::new(vec![ratio(1, 2), ratio(1, 3)]);
        let b = QVector::from_ints(&[2, 3]);
        assert_eq!(dot(&a, &b).unwrap(), int(2));
        for i in 0..4 {
            let e = QVector::unit(4, i);
            assert_eq!(dot(&e, &e).unwrap(), int(1));
        }
        assert_eq!(
            dot(&e1, &QVector::zeros(3)),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 3
            })
        );
    }

    #[test]
    fn affine_rank_examples() {
        assert_eq!(affine_rank(&[QVector::from_ints(&[1, 1])]).unwrap(), 0);
        let seg = [QVector::from_ints(&[1, -1]), QVector::from_ints(&[1, 1])];
        assert_eq!(affine_rank(&seg).unwrap(), 1);
        assert_eq!(affine_rank(&cube_vertices(3)).unwrap(), 3);
        // one facet of the cube
        let facet: Vec<_> = cube_vertices(3)
            .into_iter()
            .filter(|v| v[2] == int(1))
            .collect();
        assert_eq!(affine_rank(&facet).unwrap(), 2);
        assert_eq!(affine_rank(&[]), Err(Error::EmptyInput));
    }

    #[test]
    fn solve_linear_examples() {
        let id = QMatrix::from_rows(vec![QVector::unit(2, 0), QVector::unit(2, 1)]).unwrap();
        let b = QVector::from_ints(&[1, 2]);
        assert_eq!(solve_linear(&id, &b).unwrap(), Some(b.clone()));

        let a =
            QMatrix::from_rows(vec![QVector::from_ints(&[1]), QVector::from_ints(&[1])]).unwrap();
        assert_eq!(
            solve_linear(&a, &QVector::from_ints(&[0, 1])).unwrap(),
            None
        );

        // facets x <= 1, y <= 1 of the square meet at the corner
        let a = QMatrix::from_rows(vec![
            QVector::from_ints(&[1, 0]),
            QVector::from_ints(&[0, 1]),
        ])
        .unwrap();
        assert_eq!(
            solve_linear(&a, &QVector::from_ints(&[1, 1])).unwrap(),
            Some(QVector::from_ints(&[1, 1]))
        );

        assert!(solve_linear(&a, &QVector::from_ints(&[1])).is_err());
    }

    #[test]
    fn rational_text_format() {
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&int(5)), "5");
        assert_eq!(parse_rational("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("4/2").unwrap(), int(2));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
        for bad in ["", "1/0", "1/-2", "a", "1 /2", "1/", "/3", "1.5"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..=50, 1i64..=12).prop_map(|(n, d)| ratio(n, d))
    }

    fn vector(d: usize) -> impl Strategy<Value = QVector> {
        proptest::collection::vec(small_rational(), d).prop_map(QVector::new)
    }

    proptest! {
        #[test]
        fn normalization_is_canonical(n in -1000i64..1000, d in 1i64..1000, k in 1i64..50) {
            let a = ratio(n, d);
            let b = ratio(n * k, d * k);
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(parse_rational(&format_rational(&a)).unwrap(), a);
        }

        #[test]
        fn affine_rank_permutation_and_translation_invariant(
            pts in proptest::collection::vec(vector(3), 1..7),
            shift in vector(3),
            rot in 0usize..7,
        ) {
            let r = affine_rank(&pts).unwrap();
            let mut permuted = pts.clone();
            permuted.rotate_left(rot % pts.len());
            permuted.reverse();
            prop_assert_eq!(affine_rank(&permuted).unwrap(), r);
            let moved: Vec<_> = pts.iter().map(|p| p.checked_add(&shift).unwrap()).collect();
            prop_assert_eq!(affine_rank(&moved).unwrap(), r);
        }

        #[test]
        fn solutions_satisfy_the_system(
            rows in proptest::collection::vec(vector(3), 1..5),
            b in vector(4),
        ) {
            let a = QMatrix::from_rows(rows).unwrap();
            let b = QVector::new(b.coords()[..a.nrows()].to_vec());
            if let Some(x) = solve_linear(&a, &b).unwrap() {
                prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
            }
        }

        #[test]
        fn consistent_systems_are_solved(rows in proptest::collection::vec(vector(3), 1..5), x in vector(3)) {
            let a = QMatrix::from_rows(rows).unwrap();
            let b = a.mul_vec(&x).unwrap();
            let sol = solve_linear(&a, &b).unwrap();
            prop_assert!(sol.is_some());
        }
    }
}
