//! Genus zero: the space `V(n)` spanned by boundary symbols `δ_T` modulo the
//! four-point relations, the cone `N ⊂ V(n)` cut out by the four-block
//! inequalities, the cone `E` generated by the `δ_T`, and the containment
//! question `N ⊆ E`.
//!
//! Coordinates of `V(n)` before the quotient are the canonical pairs
//! `[T, T^c]` with `2 ≤ |T| ≤ n-2` (the smaller bitmask represents the
//! pair), in increasing bitmask order. Symbols with `|T| ≤ 1` are zero.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinat::{set_partitions, ClassIndex, MarkSet, ModuliSig};
use crate::cone::{
    cone_contained, extremal_rays_with, hash_json, membership, Certificate, ConeH, ConeV, DdCheckpoint, DdOptions, DdRun,
    MatrixFile,
};
use crate::error::{Error, Result};
use crate::linalg::{rank, rank_reverse_order, rref_with_order};
use crate::rational::{add_scaled, frac, int, serde_vec, Rational};
use crate::symmetry::PermutationGroup;

/// Largest `n` accepted by default; beyond `n = 6` runs are budgeted.
pub const DEFAULT_MAX_N: u32 = 8;

fn check_n(n: u32, max: u32) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidN { n, reason: "needs n >= 4".into() });
    }
    if n > max {
        return Err(Error::InvalidN { n, reason: format!("exceeds the configured limit {max}") });
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct RelationSpace {
    pub n: u32,
    /// Canonical representatives `T` of the coordinate pairs.
    pub coords: Vec<MarkSet>,
    index: HashMap<u32, usize>,
    /// Two rows per 4-subset `{i,j,k,l}`: `ij|kl - ik|jl` and `ij|kl - il|jk`.
    pub relations: Vec<Vec<Rational>>,
    /// Coordinates kept as a basis of the quotient (earliest possible).
    pub quotient_basis: Vec<usize>,
    /// Row `t` is the image of the unit vector `δ_{coords[t]}` in quotient
    /// coordinates.
    pub projection: Vec<Vec<Rational>>,
}

impl RelationSpace {
    pub fn dim(&self) -> usize {
        self.quotient_basis.len()
    }

    /// Coordinate of `δ_T`, or `None` when the symbol is zero (`|T| ≤ 1` or
    /// `|T^c| ≤ 1`).
    pub fn coord_of(&self, t: MarkSet) -> Option<usize> {
        let c = t.complement(self.n);
        let key = if t.bits() <= c.bits() { t } else { c };
        self.index.get(&key.bits()).copied()
    }

    /// Quotient image of a vector in the coordinates `coords`.
    pub fn project(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (x, row) in v.iter().zip(&self.projection) {
            if !x.is_zero() {
                add_scaled(&mut out, row, x);
            }
        }
        out
    }

    /// Coordinate vector whose basis coordinates are `y`.
    pub fn lift(&self, y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.coords.len()];
        for (&c, x) in self.quotient_basis.iter().zip(y) {
            out[c] = x.clone();
        }
        out
    }

    /// Relabels marks on a coordinate vector: `δ_T ↦ δ_{σ(T)}`.
    pub fn permute_coords(&self, images: &[u32], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.len()];
        for (t, x) in self.coords.iter().zip(v) {
            let target = self.coord_of(t.permute(images)).expect("relabeling preserves sizes");
            out[target] = x.clone();
        }
        out
    }

    /// Unit vector of `δ_T` in the coordinates (zero for vanishing symbols).
    pub fn unit(&self, t: MarkSet) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.coords.len()];
        if let Some(c) = self.coord_of(t) {
            v[c] = int(1);
        }
        v
    }
}

pub fn build_v(n: u32) -> Result<RelationSpace> {
    check_n(n, crate::combinat::MAX_MARKS)?;
    let sig = ModuliSig::new(0, n)?;
    let coords: Vec<MarkSet> = sig
        .boundary_indices()
        .into_iter()
        .map(|idx| match idx {
            ClassIndex::Boundary(_, s) => s,
            _ => unreachable!("genus zero has only boundary classes"),
        })
        .collect();
    let index: HashMap<u32, usize> = coords.iter().enumerate().map(|(i, s)| (s.bits(), i)).collect();
    let mut space = RelationSpace { n, coords, index, relations: Vec::new(), quotient_basis: Vec::new(), projection: Vec::new() };

    let m = space.coords.len();
    let full = MarkSet::full(n);
    let mut relations = Vec::new();
    for quad in MarkSet::all_subsets(n).filter(|s| s.len() == 4) {
        let q: Vec<u32> = quad.marks().collect();
        let (i, j, k, l) = (q[0], q[1], q[2], q[3]);
        // Σ over T containing the first pair and avoiding the second
        let pairing_sum = |a: [u32; 2], b: [u32; 2]| {
            let mut v = vec![Rational::zero(); m];
            let need = MarkSet::from_marks(a);
            let avoid = MarkSet::from_marks(b);
            for t in MarkSet::all_subsets(n) {
                if need.is_subset(t) && t.is_disjoint(avoid) && t != full {
                    if let Some(c) = space.coord_of(t) {
                        v[c] += int(1);
                    }
                }
            }
            v
        };
        let base = pairing_sum([i, j], [k, l]);
        for other in [pairing_sum([i, k], [j, l]), pairing_sum([i, l], [j, k])] {
            relations.push(base.iter().zip(&other).map(|(a, b)| a - b).collect::<Vec<_>>());
        }
    }

    let reversed: Vec<usize> = (0..m).rev().collect();
    let red = rref_with_order(&relations, m, &reversed);
    let basis = red.free_columns();
    let position: HashMap<usize, usize> = basis.iter().enumerate().map(|(q, &c)| (c, q)).collect();
    let mut projection = vec![vec![Rational::zero(); basis.len()]; m];
    for (&c, &q) in &position {
        projection[c][q] = int(1);
    }
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        for (&c, &q) in &position {
            projection[p][q] = -row[c].clone();
        }
    }
    space.relations = relations;
    space.quotient_basis = basis;
    space.projection = projection;
    Ok(space)
}

/// `dim V(n)` by exact rank, cross-checked by a second elimination order.
pub fn quotient_dimension(n: u32) -> Result<usize> {
    let v = build_v(n)?;
    let r = rank(&v.relations);
    let r2 = rank_reverse_order(&v.relations);
    if r != r2 {
        return Err(Error::RelationTable(format!("rank {r} disagrees with reverse-order rank {r2}")));
    }
    Ok(v.coords.len() - r)
}

/// Inequality `b_{I∪J} + b_{I∪K} + b_{I∪L} - b_I - b_J - b_K - b_L ≥ 0` of a
/// four-block partition, over the coordinates.
pub fn four_block_row(v: &RelationSpace, blocks: &[MarkSet; 4]) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); v.coords.len()];
    let [i, j, k, l] = *blocks;
    for t in [i.union(j), i.union(k), i.union(l)] {
        if let Some(c) = v.coord_of(t) {
            row[c] += int(1);
        }
    }
    for t in blocks {
        if let Some(c) = v.coord_of(*t) {
            row[c] -= int(1);
        }
    }
    row
}

/// The rows of [`four_block_row`], one per partition into four blocks, over
/// the coordinates (before the quotient).
pub fn n_rows(v: &RelationSpace) -> Vec<Vec<Rational>> {
    set_partitions(v.n, 4)
        .iter()
        .map(|p| four_block_row(v, &[p[0], p[1], p[2], p[3]]))
        .collect()
}

/// `N` in quotient coordinates. The inequalities vanish on the relations, so
/// restricting them to the basis coordinates gives the functional on `V(n)`.
pub fn build_n(v: &RelationSpace) -> Result<ConeH> {
    let rows = n_rows(v)
        .into_iter()
        .map(|r| {
            for rel in &v.relations {
                if !crate::rational::dot(&r, rel).is_zero() {
                    return Err(Error::RelationTable("four-block inequality does not vanish on a relation".into()));
                }
            }
            Ok(v.quotient_basis.iter().map(|&c| r[c].clone()).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    ConeH::new(v.dim(), rows, vec![])
}

/// `E`: the cone generated by the images of the `δ_T`.
pub fn build_e(v: &RelationSpace) -> Result<ConeV> {
    ConeV::new(v.dim(), v.projection.clone(), vec![])
}

/// `κ` as a coordinate vector: coefficient `|T|(n-|T|)/(n-1) - 1` on `δ_T`.
pub fn kappa_class(v: &RelationSpace) -> Vec<Rational> {
    let n = v.n as i64;
    v.coords
        .iter()
        .map(|t| {
            let s = t.len() as i64;
            frac(s * (n - s), n - 1) - int(1)
        })
        .collect()
}

/// Invariant subspace of `V(n)` under all relabelings, in quotient
/// coordinates.
pub fn symmetric_invariants(v: &RelationSpace) -> Result<Vec<Vec<Rational>>> {
    let group = PermutationGroup::symmetric(v.n)?;
    Ok(group.invariant_basis(v.dim(), |p, y| v.project(&v.permute_coords(p, &v.lift(y)))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    pub n: u32,
    pub blocks: Vec<MarkSet>,
}

impl BlockPartition {
    /// A partition of `{1..n}` into blocks of size at least two.
    pub fn new(n: u32, mut blocks: Vec<MarkSet>) -> Result<Self> {
        let mut seen = MarkSet::EMPTY;
        for b in &blocks {
            if b.len() < 2 {
                return Err(Error::InvalidPartition(format!("block {b} has fewer than two elements")));
            }
            if !b.is_disjoint(seen) {
                return Err(Error::InvalidPartition(format!("block {b} overlaps another block")));
            }
            seen = seen.union(*b);
        }
        if seen != MarkSet::full(n) {
            return Err(Error::InvalidPartition(format!("blocks cover {seen}, not all of 1..{n}")));
        }
        blocks.sort();
        Ok(BlockPartition { n, blocks })
    }

    /// Parses `"12|345"` or `"1,2|3,4,5"`.
    pub fn parse(n: u32, s: &str) -> Result<Self> {
        let blocks = s
            .split(['|', '/'])
            .map(|part| {
                let marks: Option<Vec<u32>> = if part.contains(',') {
                    part.split(',').map(|m| m.trim().parse::<u32>().ok()).collect()
                } else {
                    part.trim().chars().map(|c| c.to_digit(10)).collect()
                };
                let marks = marks
                    .filter(|m| !m.is_empty())
                    .ok_or_else(|| Error::InvalidPartition(format!("cannot parse block {part:?}")))?;
                if marks.iter().any(|&m| m == 0 || m > n) {
                    return Err(Error::InvalidPartition(format!("block {part:?} has a mark outside 1..{n}")));
                }
                Ok(MarkSet::from_marks(marks))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, blocks)
    }

    /// `T > P`: `T` is a union of blocks.
    pub fn is_coarser(&self, t: MarkSet) -> bool {
        self.blocks.iter().all(|b| b.is_subset(t) || b.is_disjoint(t))
    }

    /// Canonical coordinates `[T, T^c]` with `T > P`.
    pub fn admissible(&self, v: &RelationSpace) -> Vec<MarkSet> {
        v.coords.iter().copied().filter(|t| self.is_coarser(*t)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Lemma44Outcome {
    /// `κ + Σ e_T δ_T` in coordinates.
    pub class: Vec<Rational>,
    /// Its image in `V(n)`.
    pub target: Vec<Rational>,
    pub effective_cone: ConeV,
    pub certificate: Certificate,
}

/// Decides whether `κ + Σ_{T > P} e_T δ_T` lies in `E`.
pub fn lemma44_check(v: &RelationSpace, p: &BlockPartition, e: &BTreeMap<MarkSet, Rational>) -> Result<Lemma44Outcome> {
    if p.n != v.n {
        return Err(Error::InvalidPartition(format!("partition is on {} marks, space on {}", p.n, v.n)));
    }
    let mut class = kappa_class(v);
    for (t, x) in e {
        let c = v
            .coord_of(*t)
            .ok_or_else(|| Error::InvalidPartition(format!("δ_{t} is not a boundary symbol for n = {}", v.n)))?;
        if !p.is_coarser(*t) {
            return Err(Error::InvalidPartition(format!("{t} is not a union of blocks")));
        }
        class[c] += x;
    }
    let target = v.project(&class);
    let effective_cone = build_e(v)?;
    let certificate = membership(&target, &effective_cone)?;
    Ok(Lemma44Outcome { class, target, effective_cone, certificate })
}

#[derive(Clone, Default)]
pub struct FultonOptions {
    pub max_n: Option<u32>,
    pub budget: Option<Duration>,
    pub max_rays: Option<usize>,
    /// Where partial progress of the ray enumeration is saved and resumed.
    pub checkpoint: Option<PathBuf>,
    /// Save progress every this many rows (0: only on interruption).
    pub checkpoint_every: usize,
}

#[derive(Clone, Debug)]
pub struct FultonAnswer {
    pub n: u32,
    pub answer: bool,
    pub dim: usize,
    pub n_cone: ConeH,
    pub n_rays: ConeV,
    pub e_cone: ConeV,
    /// One per ray of `N` (then two per lineality generator, if any).
    pub certificates: Vec<Certificate>,
}

impl FultonAnswer {
    /// The vectors the certificates speak about, in order.
    pub fn targets(&self) -> Vec<Vec<Rational>> {
        let mut t = self.n_rays.rays.clone();
        for l in &self.n_rays.lineality {
            t.push(l.clone());
            t.push(l.iter().map(|x| -x).collect());
        }
        t
    }
}

fn read_checkpoint(path: &Path) -> Option<DdCheckpoint> {
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

fn write_checkpoint(path: &Path, cp: &DdCheckpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_vec(cp)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Is `N ⊆ E`? Enumerates the rays of `N` and decides membership of each.
pub fn fulton_question(n: u32, opts: &FultonOptions) -> Result<FultonAnswer> {
    check_n(n, opts.max_n.unwrap_or(DEFAULT_MAX_N))?;
    let v = build_v(n)?;
    let n_cone = build_n(&v)?;
    let e_cone = build_e(&v)?;

    let resume = opts.checkpoint.as_deref().and_then(read_checkpoint).filter(|cp| cp.input_hash == n_cone.content_hash());
    let write_error = std::sync::Mutex::new(None);
    let save = |cp: &DdCheckpoint| {
        if let Some(path) = &opts.checkpoint {
            if let Err(e) = write_checkpoint(path, cp) {
                *write_error.lock().unwrap() = Some(e);
            }
        }
    };
    let dd = DdOptions {
        max_rays: opts.max_rays,
        deadline: opts.budget.map(|b| Instant::now() + b),
        resume,
        checkpoint: Some(&save),
        checkpoint_every: opts.checkpoint_every,
        ..Default::default()
    };
    let n_rays = match extremal_rays_with(&n_cone, &dd)? {
        DdRun::Complete(c) => c,
        DdRun::Interrupted { reason, checkpoint } => {
            let mut msg = format!("N({n}) ray enumeration stopped after {} of {} rows: {reason}", checkpoint.rows_done, n_cone.inequalities.len());
            if let Some(path) = &opts.checkpoint {
                write_checkpoint(path, &checkpoint)?;
                msg.push_str(&format!("; progress saved to {}", path.display()));
            }
            return Err(Error::ResourceLimit(msg));
        }
    };
    if let Some(e) = write_error.into_inner().unwrap() {
        return Err(e);
    }
    if let Some(path) = &opts.checkpoint {
        let _ = std::fs::remove_file(path);
    }
    let containment = cone_contained(&n_rays, &e_cone)?;
    Ok(FultonAnswer {
        n,
        answer: containment.contained,
        dim: v.dim(),
        n_cone,
        n_rays,
        e_cone,
        certificates: containment.witnesses,
    })
}

/// A self-contained membership witness: the target, the generators it is
/// measured against, the certificate, and a hash of the verified content.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub label: String,
    #[serde(with = "serde_vec")]
    pub target: Vec<Rational>,
    pub generators: MatrixFile,
    pub certificate: Certificate,
    pub transcript: String,
}

#[derive(Serialize)]
struct TranscriptBody<'a> {
    label: &'a str,
    #[serde(with = "serde_vec")]
    target: &'a [Rational],
    generators: &'a MatrixFile,
    certificate: &'a Certificate,
    verified: bool,
}

impl CertificateFile {
    /// Verifies `certificate` and seals it with its transcript hash.
    pub fn new(label: String, target: Vec<Rational>, cone: &ConeV, certificate: Certificate) -> Result<Self> {
        certificate.verify(&target, cone)?;
        let mut f = CertificateFile { label, target, generators: cone.to_file(), certificate, transcript: String::new() };
        f.transcript = f.body_hash();
        Ok(f)
    }

    fn body_hash(&self) -> String {
        hash_json(&TranscriptBody {
            label: &self.label,
            target: &self.target,
            generators: &self.generators,
            certificate: &self.certificate,
            verified: true,
        })
    }

    /// Re-verifies the certificate by exact arithmetic and checks the hash.
    pub fn verify(&self) -> Result<()> {
        let cone = self.generators.clone().into_v()?;
        if cone.to_file() != self.generators {
            return Err(Error::CertificateRejected("generators are not in canonical form".into()));
        }
        self.certificate.verify(&self.target, &cone)?;
        if self.body_hash() != self.transcript {
            return Err(Error::CertificateRejected("transcript hash mismatch".into()));
        }
        Ok(())
    }
}

/// Writes one certificate file per ray of `N`, `ray_00000.json`, ... in
/// canonical ray order. Returns the paths written.
pub fn write_certificates(dir: &Path, answer: &FultonAnswer) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (idx, (target, cert)) in answer.targets().into_iter().zip(&answer.certificates).enumerate() {
        let file = CertificateFile::new(format!("fulton n={} ray {idx}", answer.n), target, &answer.e_cone, cert.clone())?;
        let path = dir.join(format!("ray_{idx:05}.json"));
        let mut text = serde_json::to_string_pretty(&file)?;
        text.push('\n');
        std::fs::write(&path, text)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Expected `dim V(n) = 2^{n-1} - n(n-1)/2 - 1`.
pub fn expected_dimension(n: u32) -> usize {
    (1usize << (n - 1)) - (n * (n - 1) / 2) as usize - 1
}
