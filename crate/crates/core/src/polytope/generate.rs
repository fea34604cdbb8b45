use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HRep, Halfspace, Polytope, VRep};
use crate::error::{Error, Result};
use crate::ratgeom::{int, ratio, QVector, Rational};

/// Attempts before the random generator gives up on unbounded draws.
pub const RETRY_CAP: usize = 100;

#[derive(Clone, Copy, Debug)]
pub enum Family<'a> {
    Cube {
        dim: usize,
    },
    CrossPolytope {
        dim: usize,
    },
    Product(&'a Polytope, &'a Polytope),
    RandomReflectionSymmetric {
        dim: usize,
        generators: usize,
        seed: u64,
    },
}

pub fn generate(family: Family<'_>) -> Result<Polytope> {
    match family {
        Family::Cube { dim } => cube(dim),
        Family::CrossPolytope { dim } => cross_polytope(dim),
        Family::Product(a, b) => product(a, b),
        Family::RandomReflectionSymmetric {
            dim,
            generators,
            seed,
        } => random_reflection_symmetric(dim, generators, seed),
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidParams("dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `[-1, 1]^d`.
pub fn cube(d: usize) -> Result<Polytope> {
    check_dim(d)?;
    let mut hs = Vec::with_capacity(2 * d);
    for i in 0..d {
        let e = QVector::unit(d, i);
        hs.push(Halfspace::new(-&e, int(1))?);
        hs.push(Halfspace::new(e, int(1))?);
    }
    Polytope::from_hrep(&HRep::new(d, hs)?)
}

/// `conv{±e_i}`.
pub fn cross_polytope(d: usize) -> Result<Polytope> {
    check_dim(d)?;
    let pts = (0..d)
        .flat_map(|i| {
            let e = QVector::unit(d, i);
            [-&e, e]
        })
        .collect();
    Polytope::from_vrep(&VRep::new(d, pts)?)
}

/// Cartesian product, with block-diagonal facets.
pub fn product(a: &Polytope, b: &Polytope) -> Result<Polytope> {
    let (da, db) = (a.dim(), b.dim());
    let d = da + db;
    let pad = |h: &Halfspace, before: usize, after: usize| {
        let mut coords = vec![Rational::zero(); before];
        coords.extend_from_slice(h.normal().coords());
        coords.resize(before + h.dim() + after, Rational::zero());
        Halfspace::new(QVector::new(coords), h.offset().clone())
    };
    let mut hs = Vec::with_capacity(a.num_facets() + b.num_facets());
    for h in a.facets() {
        hs.push(pad(h, 0, db)?);
    }
    for h in b.facets() {
        hs.push(pad(h, da, 0)?);
    }
    Polytope::from_hrep(&HRep::new(d, hs)?)
}

/// Intersects the orbits of `m` random rational halfspaces under every
/// coordinate sign change (which includes `x -> -x`), so the result is
/// centrally symmetric and symmetric about every coordinate hyperplane.
///
/// Normals have entries `p/q` with `|p| <= 4`, `q <= 3`; offsets lie in
/// `[1, 3]` in steps of 1/2. Unbounded draws are resampled up to
/// [`RETRY_CAP`] times.
pub fn random_reflection_symmetric(d: usize, m: usize, seed: u64) -> Result<Polytope> {
    check_dim(d)?;
    if m == 0 {
        return Err(Error::InvalidParams(
            "need at least one generating halfspace".into(),
        ));
    }
    if d > 12 {
        return Err(Error::InvalidParams(format!(
            "dimension {d} is too large for the sign orbit"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_CAP {
        let mut orbit = BTreeSet::new();
        for _ in 0..m {
            let normal = loop {
                let v: Vec<Rational> = (0..d)
                    .map(|_| ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
                    .collect();
                let v = QVector::new(v);
                if !v.is_zero() {
                    break v;
                }
            };
            let offset = ratio(rng.gen_range(2..=6), 2);
            for signs in 0u32..1 << d {
                let flipped = normal
                    .coords()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| if signs >> i & 1 == 1 { -c } else { c.clone() })
                    .collect();
                orbit.insert((QVector::new(flipped), offset.clone()));
            }
        }
        let hs = orbit
            .into_iter()
            .map(|(n, c)| Halfspace::new(n, c))
            .collect::<Result<Vec<_>>>()?;
        match Polytope::from_hrep(&HRep::new(d, hs)?) {
            Err(Error::Unbounded) => continue,
            other => return other,
        }
    }
    Err(Error::InvalidParams(format!(
        "no bounded instance after {RETRY_CAP} draws (d={d}, m={m}, seed={seed})"
    )))
}
