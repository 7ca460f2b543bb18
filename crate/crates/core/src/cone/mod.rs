//! Exact polyhedral cones.
//!
//! A [`ConeH`] is `{x : A x ≥ 0, E x = 0}`; a [`ConeV`] is the nonnegative
//! span of its rays plus the linear span of its lineality generators.
//! Conversions go through the double description method in [`dd`];
//! membership questions are answered by an exact simplex in [`lp`] that
//! returns a checkable [`Certificate`].

pub mod dd;
pub mod lp;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::rref;
use crate::rational::{dot, primitive, serde_matrix, sign_normalized, Rational};

pub use dd::{extremal_rays, extremal_rays_with, Adjacency, DdCheckpoint, DdOptions, DdRun};
pub use lp::{cone_contained, cone_contained_dual, cone_contained_h, membership, membership_via_facets, Certificate, Containment, FacetVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConeH {
    pub dim: usize,
    /// Rows `a` with `a·x ≥ 0`: primitive integer, deduplicated, sorted.
    pub inequalities: Vec<Vec<Rational>>,
    /// Rows `e` with `e·x = 0`: primitive integer, first nonzero entry
    /// positive, deduplicated, sorted.
    pub equations: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConeV {
    pub dim: usize,
    /// Primitive integer rays, reduced modulo the lineality space, pairwise
    /// non-proportional and sorted.
    pub rays: Vec<Vec<Rational>>,
    /// Reduced row echelon basis of the lineality space, scaled to primitive
    /// integer rows.
    pub lineality: Vec<Vec<Rational>>,
}

fn check_dims(dim: usize, rows: &[Vec<Rational>]) -> Result<()> {
    match rows.iter().find(|r| r.len() != dim) {
        Some(r) => Err(Error::DimensionMismatch { expected: dim, got: r.len() }),
        None => Ok(()),
    }
}

fn sorted_unique(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    rows.sort();
    rows.dedup();
    rows
}

impl ConeH {
    pub fn new(dim: usize, inequalities: Vec<Vec<Rational>>, equations: Vec<Vec<Rational>>) -> Result<Self> {
        check_dims(dim, &inequalities)?;
        check_dims(dim, &equations)?;
        let inequalities = sorted_unique(
            inequalities
                .iter()
                .filter(|r| !r.iter().all(Zero::is_zero))
                .map(|r| primitive(r))
                .collect(),
        );
        let equations = sorted_unique(
            equations
                .iter()
                .filter(|r| !r.iter().all(Zero::is_zero))
                .map(|r| sign_normalized(r))
                .collect(),
        );
        Ok(ConeH { dim, inequalities, equations })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.inequalities.iter().all(|a| dot(a, x) >= Rational::zero())
            && self.equations.iter().all(|e| dot(e, x).is_zero())
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile { dim: self.dim, rows: self.inequalities.clone(), linearity: self.equations.clone() }
    }

    pub fn content_hash(&self) -> String {
        hash_json(&self.to_file())
    }
}

impl ConeV {
    pub fn new(dim: usize, rays: Vec<Vec<Rational>>, lineality: Vec<Vec<Rational>>) -> Result<Self> {
        check_dims(dim, &rays)?;
        check_dims(dim, &lineality)?;
        let red = rref(&lineality, dim);
        let lineality: Vec<Vec<Rational>> = red.rows.iter().map(|r| sign_normalized(r)).collect();
        let rays = sorted_unique(
            rays.iter()
                .map(|r| {
                    let mut r = r.clone();
                    for (l, &p) in red.rows.iter().zip(&red.pivots) {
                        if !r[p].is_zero() {
                            let t = r[p].clone();
                            for (x, y) in r.iter_mut().zip(l) {
                                *x -= &t * y;
                            }
                        }
                    }
                    r
                })
                .filter(|r| !r.iter().all(Zero::is_zero))
                .map(|r| primitive(&r))
                .collect(),
        );
        Ok(ConeV { dim, rays, lineality })
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile { dim: self.dim, rows: self.rays.clone(), linearity: self.lineality.clone() }
    }

    pub fn content_hash(&self) -> String {
        hash_json(&self.to_file())
    }

    /// Every generator satisfies every row of `h`.
    pub fn satisfies(&self, h: &ConeH) -> bool {
        self.dim == h.dim
            && self.rays.iter().all(|r| h.contains(r))
            && self.lineality.iter().all(|l| {
                h.contains(l) && h.contains(&l.iter().map(|x| -x.clone()).collect::<Vec<_>>())
            })
    }
}

/// Matrix file: `{"dim": d, "rows": [["p/q", ...], ...]}`. The optional
/// `"linearity"` rows are equations (H side) or lineality generators
/// (V side); the command line flag decides which side is meant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    #[serde(with = "serde_matrix")]
    pub rows: Vec<Vec<Rational>>,
    #[serde(with = "serde_matrix", default, skip_serializing_if = "Vec::is_empty")]
    pub linearity: Vec<Vec<Rational>>,
}

impl MatrixFile {
    pub fn into_h(self) -> Result<ConeH> {
        ConeH::new(self.dim, self.rows, self.linearity)
    }

    pub fn into_v(self) -> Result<ConeV> {
        ConeV::new(self.dim, self.rows, self.linearity)
    }
}

pub(crate) fn hash_json<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable");
    hex::encode(Sha256::digest(&bytes))
}

/// Inequality description of the cone generated by `c` (dual conversion).
pub fn facets(c: &ConeV) -> Result<ConeH> {
    let dual = ConeH::new(c.dim, c.rays.clone(), c.lineality.clone())?;
    let v = extremal_rays(&dual)?;
    ConeH::new(c.dim, v.rays, v.lineality)
}

/// Number of inequalities of `h` tight at `x`, and the rank of those rows
/// together with the equations.
pub fn tight_rank(h: &ConeH, x: &[Rational]) -> usize {
    let mut rows: Vec<Vec<Rational>> = h.inequalities.iter().filter(|a| dot(a, x).is_zero()).cloned().collect();
    rows.extend(h.equations.iter().cloned());
    crate::linalg::rank(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn h_canonical_form() {
        let h = ConeH::new(2, vec![v(&[2, 4]), v(&[1, 2]), v(&[0, 0]), v(&[-3, 0])], vec![v(&[-2, 0])]).unwrap();
        assert_eq!(h.inequalities, vec![v(&[-1, 0]), v(&[1, 2])]);
        assert_eq!(h.equations, vec![v(&[1, 0])]);
        assert!(ConeH::new(3, vec![v(&[1, 2])], vec![]).is_err());
    }

    #[test]
    fn v_canonical_form() {
        let c = ConeV::new(2, vec![v(&[2, 7]), v(&[3, -1])], vec![v(&[0, -5])]).unwrap();
        assert_eq!(c.lineality, vec![v(&[0, 1])]);
        assert_eq!(c.rays, vec![v(&[1, 0])]);
    }

    #[test]
    fn matrix_file_round_trip() {
        let h = ConeH::new(2, vec![v(&[1, 0]), v(&[1, 1])], vec![]).unwrap();
        let s = serde_json::to_string(&h.to_file()).unwrap();
        assert_eq!(s, r#"{"dim":2,"rows":[["1","0"],["1","1"]]}"#);
        let back: MatrixFile = serde_json::from_str(&s).unwrap();
        assert_eq!(back.into_h().unwrap(), h);
    }
}
