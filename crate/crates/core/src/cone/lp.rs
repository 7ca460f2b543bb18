//! Exact cone membership by phase-one simplex (Bland's rule) with a
//! checkable witness either way.
//!
//! Deciding `v ∈ cone(rays) + span(lineality)` is the feasibility problem
//! `Σ x_j r_j + Σ (y⁺_k − y⁻_k) l_k = v` with all variables nonnegative.
//! Rows are sign-flipped so the right-hand side is nonnegative and one
//! artificial variable is added per row. If the artificial optimum is zero
//! the basic solution is the membership witness; otherwise the simplex
//! multipliers give a covector that is nonnegative on every ray, zero on the
//! lineality and negative on `v`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{facets, ConeH, ConeV};
use crate::error::{Error, Result};
use crate::rational::{dot, format_vector, parse_rational, primitive, serde_rational, serde_vec, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `target = Σ coefficients[j]·rays[j] + Σ lineality[k]·lineality_basis[k]`
    /// with every ray coefficient nonnegative.
    Member {
        #[serde(with = "serde_coeffs")]
        coefficients: BTreeMap<usize, Rational>,
        #[serde(with = "serde_coeffs", default, skip_serializing_if = "BTreeMap::is_empty")]
        lineality: BTreeMap<usize, Rational>,
    },
    /// `functional` is nonnegative on every ray, zero on the lineality and
    /// takes the negative value `value_on_target` at the target.
    Separated {
        #[serde(with = "serde_vec")]
        functional: Vec<Rational>,
        #[serde(with = "serde_rational")]
        value_on_target: Rational,
    },
}

mod serde_coeffs {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<usize, Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        let out: BTreeMap<usize, String> = m.iter().map(|(k, v)| (*k, crate::rational::format_rational(v))).collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<usize, Rational>, D::Error> {
        // keys arrive as strings inside the tagged enum
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                let k: usize = k.parse().map_err(|_| serde::de::Error::custom(format!("bad generator index {k:?}")))?;
                parse_rational(&v).map(|r| (k, r)).map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

fn reject(msg: impl Into<String>) -> Error {
    Error::CertificateRejected(msg.into())
}

impl Certificate {
    pub fn is_member(&self) -> bool {
        matches!(self, Certificate::Member { .. })
    }

    /// Re-checks the witness against `target` and `cone` by exact arithmetic.
    pub fn verify(&self, target: &[Rational], cone: &ConeV) -> Result<()> {
        if target.len() != cone.dim {
            return Err(Error::DimensionMismatch { expected: cone.dim, got: target.len() });
        }
        match self {
            Certificate::Member { coefficients, lineality } => {
                let mut sum = vec![Rational::zero(); cone.dim];
                for (&j, c) in coefficients {
                    let ray = cone.rays.get(j).ok_or_else(|| reject(format!("generator index {j} out of range")))?;
                    if c.is_negative() {
                        return Err(reject(format!("negative coefficient on generator {j}")));
                    }
                    crate::rational::add_scaled(&mut sum, ray, c);
                }
                for (&k, c) in lineality {
                    let l = cone.lineality.get(k).ok_or_else(|| reject(format!("lineality index {k} out of range")))?;
                    crate::rational::add_scaled(&mut sum, l, c);
                }
                if sum != target {
                    return Err(reject(format!("combination gives {} instead of {}", format_vector(&sum), format_vector(target))));
                }
                Ok(())
            }
            Certificate::Separated { functional, value_on_target } => {
                if functional.len() != cone.dim {
                    return Err(Error::DimensionMismatch { expected: cone.dim, got: functional.len() });
                }
                if let Some(j) = cone.rays.iter().position(|r| dot(functional, r).is_negative()) {
                    return Err(reject(format!("functional is negative on generator {j}")));
                }
                if let Some(k) = cone.lineality.iter().position(|l| !dot(functional, l).is_zero()) {
                    return Err(reject(format!("functional is nonzero on lineality vector {k}")));
                }
                let value = dot(functional, target);
                if !value.is_negative() {
                    return Err(reject("functional is not negative on the target"));
                }
                if &value != value_on_target {
                    return Err(reject("stated value on the target is wrong"));
                }
                Ok(())
            }
        }
    }
}

struct Tableau {
    /// `rows × (cols + 1)`, last column is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs of the phase-one objective.
    cost: Vec<Rational>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for x in self.t[r].iter_mut() {
            *x /= &p;
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&prow) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        if !self.cost[c].is_zero() {
            let f = self.cost[c].clone();
            for (x, y) in self.cost.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Bland's rule: entering column is the smallest index with negative
    /// reduced cost, leaving row the smallest basic index among ratio ties.
    fn solve(&mut self) {
        loop {
            let Some(c) = (0..self.cols).find(|&j| self.cost[j].is_negative()) else { return };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][c];
                if a.is_positive() {
                    let ratio = &self.t[i][self.cols] / a;
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            // phase one is bounded below by zero, so a leaving row exists
            let (r, _) = best.expect("phase-one objective is bounded");
            self.pivot(r, c);
        }
    }
}

/// Decides whether `target` lies in `cone`; the returned certificate has
/// already been verified.
pub fn membership(target: &[Rational], cone: &ConeV) -> Result<Certificate> {
    let d = cone.dim;
    if target.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: target.len() });
    }
    let nr = cone.rays.len();
    let nl = cone.lineality.len();
    let structural = nr + 2 * nl;
    let cols = structural + d;

    let mut t = Vec::with_capacity(d);
    let mut flip = Vec::with_capacity(d);
    for i in 0..d {
        let s = if target[i].is_negative() { -Rational::one() } else { Rational::one() };
        let mut row = vec![Rational::zero(); cols + 1];
        for (j, r) in cone.rays.iter().enumerate() {
            row[j] = &s * &r[i];
        }
        for (k, l) in cone.lineality.iter().enumerate() {
            row[nr + 2 * k] = &s * &l[i];
            row[nr + 2 * k + 1] = -(&s * &l[i]);
        }
        row[structural + i] = Rational::one();
        row[cols] = &s * &target[i];
        t.push(row);
        flip.push(s);
    }
    let mut cost = vec![Rational::zero(); cols + 1];
    for row in &t {
        for j in 0..structural {
            cost[j] -= &row[j];
        }
        cost[cols] -= &row[cols];
    }
    let mut tab = Tableau { t, basis: (structural..cols).collect(), cost, cols };
    tab.solve();

    let infeasibility: Rational = tab
        .basis
        .iter()
        .zip(&tab.t)
        .filter(|(&b, _)| b >= structural)
        .map(|(_, row)| row[cols].clone())
        .sum();

    let cert = if infeasibility.is_zero() {
        let mut x = vec![Rational::zero(); structural];
        for (&b, row) in tab.basis.iter().zip(&tab.t) {
            if b < structural {
                x[b] = row[cols].clone();
            }
        }
        let coefficients = (0..nr).filter(|&j| !x[j].is_zero()).map(|j| (j, x[j].clone())).collect();
        let lineality = (0..nl)
            .map(|k| (k, &x[nr + 2 * k] - &x[nr + 2 * k + 1]))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Certificate::Member { coefficients, lineality }
    } else {
        // multiplier of row i is 1 - reduced cost of its artificial column
        let y: Vec<Rational> = (0..d).map(|i| Rational::one() - &tab.cost[structural + i]).collect();
        let f: Vec<Rational> = y.iter().zip(&flip).map(|(yi, s)| -(yi * s)).collect();
        let functional = primitive(&f);
        let value_on_target = dot(&functional, target);
        Certificate::Separated { functional, value_on_target }
    };
    cert.verify(target, cone)?;
    Ok(cert)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FacetVerdict {
    Inside,
    /// First facet row (in canonical order) that is negative on the target.
    Outside { facet: Vec<Rational>, value: Rational },
}

/// Membership through the inequality description of `cone`, for
/// cross-checking [`membership`].
pub fn membership_via_facets(target: &[Rational], cone: &ConeV) -> Result<FacetVerdict> {
    if target.len() != cone.dim {
        return Err(Error::DimensionMismatch { expected: cone.dim, got: target.len() });
    }
    let h = facets(cone)?;
    for e in &h.equations {
        let value = dot(e, target);
        if !value.is_zero() {
            let facet = if value.is_positive() { e.iter().map(|x| -x).collect() } else { e.clone() };
            return Ok(FacetVerdict::Outside { facet, value: -value.abs() });
        }
    }
    for a in &h.inequalities {
        let value = dot(a, target);
        if value.is_negative() {
            return Ok(FacetVerdict::Outside { facet: a.clone(), value });
        }
    }
    Ok(FacetVerdict::Inside)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Containment {
    pub contained: bool,
    /// One certificate per ray of the inner cone, then two per lineality
    /// generator (the vector and its negative).
    pub witnesses: Vec<Certificate>,
}

/// Whether the cone generated by `a` lies inside `b`, ray by ray.
pub fn cone_contained(a: &ConeV, b: &ConeV) -> Result<Containment> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: b.dim, got: a.dim });
    }
    let mut targets: Vec<Vec<Rational>> = a.rays.clone();
    for l in &a.lineality {
        targets.push(l.clone());
        targets.push(l.iter().map(|x| -x).collect());
    }
    let witnesses = targets.par_iter().map(|t| membership(t, b)).collect::<Result<Vec<_>>>()?;
    Ok(Containment { contained: witnesses.iter().all(Certificate::is_member), witnesses })
}

/// [`cone_contained`] for an inner cone given by inequalities.
pub fn cone_contained_h(a: &ConeH, b: &ConeV) -> Result<Containment> {
    cone_contained(&super::extremal_rays(a)?, b)
}

/// Containment decided on the dual side: every generator of `a` satisfies
/// every facet of `b`.
pub fn cone_contained_dual(a: &ConeV, b: &ConeV) -> Result<bool> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch { expected: b.dim, got: a.dim });
    }
    Ok(a.satisfies(&facets(b)?))
}
