//! Boundary class indexing and enumeration of one-dimensional strata.
//!
//! Mark `k` (1-based) is stored as bit `k - 1` of a [`MarkSet`]. A boundary
//! class `δ_{i,S}` is identified with `δ_{g-i,S^c}`; the canonical
//! representative has `i < g/2`, or `i = g/2` and the smaller bitmask of
//! `S`, `S^c`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of marked points.
pub const MAX_MARKS: u32 = 24;

#[derive(Copy, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkSet(u32);

impl MarkSet {
    pub const EMPTY: MarkSet = MarkSet(0);

    pub fn from_bits(bits: u32) -> Self {
        MarkSet(bits)
    }

    pub fn full(n: u32) -> Self {
        if n == 0 {
            MarkSet(0)
        } else {
            MarkSet(u32::MAX >> (32 - n))
        }
    }

    pub fn singleton(mark: u32) -> Self {
        debug_assert!(mark >= 1);
        MarkSet(1 << (mark - 1))
    }

    pub fn from_marks<I: IntoIterator<Item = u32>>(marks: I) -> Self {
        MarkSet(marks.into_iter().fold(0, |acc, k| acc | (1 << (k - 1))))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, mark: u32) -> bool {
        mark >= 1 && self.0 & (1 << (mark - 1)) != 0
    }

    pub fn union(self, other: MarkSet) -> MarkSet {
        MarkSet(self.0 | other.0)
    }

    pub fn intersection(self, other: MarkSet) -> MarkSet {
        MarkSet(self.0 & other.0)
    }

    pub fn is_disjoint(self, other: MarkSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: MarkSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(self, n: u32) -> MarkSet {
        MarkSet(!self.0 & MarkSet::full(n).0)
    }

    /// Marks in ascending order.
    pub fn marks(self) -> impl Iterator<Item = u32> {
        (1..=32u32).filter(move |&k| self.contains(k))
    }

    /// Applies a permutation of `{1..n}` given as images of marks `1..n`.
    pub fn permute(self, images: &[u32]) -> MarkSet {
        MarkSet::from_marks(self.marks().map(|k| images[(k - 1) as usize]))
    }

    /// All subsets of `{1..n}` in increasing bitmask order.
    pub fn all_subsets(n: u32) -> impl Iterator<Item = MarkSet> {
        (0..(1u32 << n)).map(MarkSet)
    }
}

impl fmt::Debug for MarkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MarkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let marks: Vec<String> = self.marks().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", marks.join(","))
    }
}

/// Genus and number of marked points of `M̄_{g,n}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuliSig {
    pub g: u32,
    pub n: u32,
}

impl ModuliSig {
    /// Checks stability `2g - 2 + n > 0`.
    pub fn new(g: u32, n: u32) -> Result<Self> {
        if n > MAX_MARKS {
            return Err(Error::InvalidSignature { g, n, reason: format!("at most {MAX_MARKS} marks supported") });
        }
        if 2 * g + n <= 2 {
            return Err(Error::InvalidSignature { g, n, reason: "unstable (2g-2+n must be positive)".into() });
        }
        Ok(ModuliSig { g, n })
    }

    /// Like [`ModuliSig::new`], additionally requiring one-dimensional strata
    /// to exist (`3g - 3 + n >= 1`).
    pub fn with_strata(g: u32, n: u32) -> Result<Self> {
        let sig = Self::new(g, n)?;
        if sig.dimension() < 1 {
            return Err(Error::InvalidSignature { g, n, reason: "space has no one-dimensional strata".into() });
        }
        Ok(sig)
    }

    pub fn dimension(self) -> i64 {
        3 * self.g as i64 - 3 + self.n as i64
    }

    pub fn all_marks(self) -> MarkSet {
        MarkSet::full(self.n)
    }

    pub fn class_exists(self, idx: &ClassIndex) -> bool {
        match *idx {
            ClassIndex::Lambda | ClassIndex::DeltaIrr => self.g >= 1,
            ClassIndex::Psi(k) => k >= 1 && k <= self.n,
            ClassIndex::Boundary(i, s) => {
                s.is_subset(self.all_marks()) && boundary_exists(self, i, s) && canonical_index(self, i, s).ok() == Some(*idx)
            }
        }
    }

    /// Canonical boundary classes `δ_{i,S}` of this space, in index order.
    pub fn boundary_indices(self) -> Vec<ClassIndex> {
        let mut out = BTreeSet::new();
        for i in 0..=self.g {
            for s in MarkSet::all_subsets(self.n) {
                if let Ok(idx) = canonical_index(self, i, s) {
                    out.insert(idx);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Every coefficient slot of a divisor on this space: `λ`, `δ_irr`
    /// (both only for `g ≥ 1`), `ψ_1..ψ_n`, then the boundary classes.
    pub fn coordinates(self) -> Vec<ClassIndex> {
        let mut v = Vec::new();
        if self.g >= 1 {
            v.push(ClassIndex::Lambda);
            v.push(ClassIndex::DeltaIrr);
        }
        v.extend((1..=self.n).map(ClassIndex::Psi));
        v.extend(self.boundary_indices());
        v
    }
}

impl fmt::Display for ModuliSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M_{{{},{}}}", self.g, self.n)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassIndex {
    Lambda,
    DeltaIrr,
    Psi(u32),
    Boundary(u32, MarkSet),
}

impl ClassIndex {
    /// Key used in the divisor JSON: `"i|s1,s2,..."` for boundary classes.
    pub fn boundary_key(i: u32, s: MarkSet) -> String {
        let marks: Vec<String> = s.marks().map(|k| k.to_string()).collect();
        format!("{i}|{}", marks.join(","))
    }

    pub fn parse_boundary_key(key: &str) -> Result<(u32, MarkSet)> {
        let (i, s) = key
            .split_once('|')
            .ok_or_else(|| Error::parse(format!("boundary key {key:?} lacks '|'")))?;
        let i: u32 = i.trim().parse().map_err(|_| Error::parse(format!("bad genus in key {key:?}")))?;
        let mut set = MarkSet::EMPTY;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let k: u32 = part.parse().map_err(|_| Error::parse(format!("bad mark in key {key:?}")))?;
            if k == 0 || k > MAX_MARKS {
                return Err(Error::parse(format!("mark {k} out of range in key {key:?}")));
            }
            set = set.union(MarkSet::singleton(k));
        }
        Ok((i, set))
    }
}

impl fmt::Display for ClassIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassIndex::Lambda => write!(f, "lambda"),
            ClassIndex::DeltaIrr => write!(f, "delta_irr"),
            ClassIndex::Psi(k) => write!(f, "psi_{k}"),
            ClassIndex::Boundary(i, s) => write!(f, "delta_{{{i},{s}}}"),
        }
    }
}

fn boundary_exists(sig: ModuliSig, i: u32, s: MarkSet) -> bool {
    let n = sig.n;
    let g = sig.g;
    if i > g {
        return false;
    }
    let size = s.len();
    let co = n - size;
    if g == 0 {
        return size >= 2 && co >= 2;
    }
    (i == 0 && size >= 2) || (1..g).contains(&i) || (i == g && co >= 2)
}

/// Canonical representative of `δ_{i,S}` on `sig`, or `NonexistentClass`.
pub fn canonical_index(sig: ModuliSig, i: u32, s: MarkSet) -> Result<ClassIndex> {
    if !s.is_subset(sig.all_marks()) || !boundary_exists(sig, i, s) {
        return Err(Error::NonexistentClass(format!("delta_{{{i},{s}}} on {sig}")));
    }
    let co = s.complement(sig.n);
    let (i, s) = match (2 * i).cmp(&sig.g) {
        std::cmp::Ordering::Less => (i, s),
        std::cmp::Ordering::Greater => (sig.g - i, co),
        std::cmp::Ordering::Equal => (i, if s.bits() <= co.bits() { s } else { co }),
    };
    Ok(ClassIndex::Boundary(i, s))
}

/// A leg of a stratum: a fixed component of genus `genus` carrying `marks`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Leg {
    pub genus: u32,
    pub marks: MarkSet,
}

impl Leg {
    pub fn new(genus: u32, marks: MarkSet) -> Self {
        Leg { genus, marks }
    }

    fn is_nonempty(self) -> bool {
        self.genus + self.marks.len() > 0
    }

    pub fn permute(self, images: &[u32]) -> Leg {
        Leg::new(self.genus, self.marks.permute(images))
    }
}

/// The six families of one-dimensional strata, numbered 1 to 6.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StratumKind {
    /// 1: a moving elliptic tail.
    EllipticTail,
    /// 2: a fixed `4 + N` pointed curve of genus `g - 3`.
    FourPoint,
    /// 3: fixed `1 + I` pointed genus `i` and `3 + I^c` pointed genus `g-2-i` curves.
    ThreeOne { leg: Leg },
    /// 4: fixed `2 + I` pointed genus `i` and `2 + I^c` pointed genus `g-2-i` curves.
    TwoTwo { leg: Leg },
    /// 5: two `1 + I`, `1 + J` pointed legs and a `2 + (I∪J)^c` pointed core.
    TwoOneOne { legs: [Leg; 2] },
    /// 6: four `1 + I` pointed legs partitioning the marks and the genus.
    Flag { legs: [Leg; 4] },
}

impl StratumKind {
    pub fn type_number(&self) -> u8 {
        match self {
            StratumKind::EllipticTail => 1,
            StratumKind::FourPoint => 2,
            StratumKind::ThreeOne { .. } => 3,
            StratumKind::TwoTwo { .. } => 4,
            StratumKind::TwoOneOne { .. } => 5,
            StratumKind::Flag { .. } => 6,
        }
    }

    pub fn legs(&self) -> Vec<Leg> {
        match self {
            StratumKind::EllipticTail | StratumKind::FourPoint => vec![],
            StratumKind::ThreeOne { leg } | StratumKind::TwoTwo { leg } => vec![*leg],
            StratumKind::TwoOneOne { legs } => legs.to_vec(),
            StratumKind::Flag { legs } => legs.to_vec(),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StratumCurve {
    pub sig: ModuliSig,
    pub kind: StratumKind,
}

impl StratumCurve {
    /// Validates the parameter constraints of the family and stores
    /// unordered legs in sorted order.
    pub fn new(sig: ModuliSig, kind: StratumKind) -> Result<Self> {
        let g = sig.g;
        let all = sig.all_marks();
        let bad = |why: &str| Error::parse(format!("invalid type-{} stratum on {sig}: {why}", kind.type_number()));
        for leg in kind.legs() {
            if !leg.marks.is_subset(all) {
                return Err(bad("mark out of range"));
            }
        }
        let kind = match kind {
            StratumKind::EllipticTail => {
                if g < 1 {
                    return Err(bad("needs g >= 1"));
                }
                kind
            }
            StratumKind::FourPoint => {
                if g < 3 {
                    return Err(bad("needs g >= 3"));
                }
                kind
            }
            StratumKind::ThreeOne { leg } => {
                if g < 2 || leg.genus > g - 2 || !leg.is_nonempty() {
                    return Err(bad("needs g >= 2, i <= g-2, i+|I| > 0"));
                }
                kind
            }
            StratumKind::TwoTwo { leg } => {
                if g < 2 || leg.genus > g - 2 {
                    return Err(bad("needs g >= 2, i <= g-2"));
                }
                kind
            }
            StratumKind::TwoOneOne { mut legs } => {
                if g < 1
                    || legs[0].genus + legs[1].genus > g - 1
                    || !legs[0].marks.is_disjoint(legs[1].marks)
                    || !legs.iter().all(|l| l.is_nonempty())
                {
                    return Err(bad("needs g >= 1, i+j <= g-1, I∩J = ∅, nonempty legs"));
                }
                legs.sort();
                StratumKind::TwoOneOne { legs }
            }
            StratumKind::Flag { mut legs } => {
                let genus: u32 = legs.iter().map(|l| l.genus).sum();
                let mut union = MarkSet::EMPTY;
                for l in &legs {
                    if !union.is_disjoint(l.marks) {
                        return Err(bad("mark sets overlap"));
                    }
                    union = union.union(l.marks);
                }
                if genus != g || union != all || !legs.iter().all(|l| l.is_nonempty()) {
                    return Err(bad("legs must partition genus and marks, each nonempty"));
                }
                legs.sort();
                StratumKind::Flag { legs }
            }
        };
        Ok(StratumCurve { sig, kind })
    }

    pub fn type_number(&self) -> u8 {
        self.kind.type_number()
    }

    /// Relabels marks by a permutation (images of marks `1..n`).
    pub fn permute(&self, images: &[u32]) -> Result<StratumCurve> {
        let kind = match self.kind {
            StratumKind::ThreeOne { leg } => StratumKind::ThreeOne { leg: leg.permute(images) },
            StratumKind::TwoTwo { leg } => StratumKind::TwoTwo { leg: leg.permute(images) },
            StratumKind::TwoOneOne { legs } => StratumKind::TwoOneOne { legs: legs.map(|l| l.permute(images)) },
            StratumKind::Flag { legs } => StratumKind::Flag { legs: legs.map(|l| l.permute(images)) },
            k => k,
        };
        StratumCurve::new(self.sig, kind)
    }

    pub fn to_json(&self) -> StratumJson {
        StratumJson {
            r#type: self.type_number(),
            legs: self
                .kind
                .legs()
                .into_iter()
                .map(|l| LegJson { i: l.genus, s: l.marks.marks().collect() })
                .collect(),
        }
    }

    pub fn from_json(sig: ModuliSig, j: &StratumJson) -> Result<Self> {
        let legs: Vec<Leg> = j
            .legs
            .iter()
            .map(|l| {
                if l.s.iter().any(|&k| k == 0 || k > sig.n) {
                    return Err(Error::parse(format!("mark out of range in stratum leg {:?}", l.s)));
                }
                Ok(Leg::new(l.i, MarkSet::from_marks(l.s.iter().copied())))
            })
            .collect::<Result<_>>()?;
        let want = match j.r#type {
            1 | 2 => 0,
            3 | 4 => 1,
            5 => 2,
            6 => 4,
            t => return Err(Error::parse(format!("unknown stratum type {t}"))),
        };
        if legs.len() != want {
            return Err(Error::parse(format!("type {} stratum needs {want} legs", j.r#type)));
        }
        let kind = match j.r#type {
            1 => StratumKind::EllipticTail,
            2 => StratumKind::FourPoint,
            3 => StratumKind::ThreeOne { leg: legs[0] },
            4 => StratumKind::TwoTwo { leg: legs[0] },
            5 => StratumKind::TwoOneOne { legs: [legs[0], legs[1]] },
            _ => StratumKind::Flag { legs: [legs[0], legs[1], legs[2], legs[3]] },
        };
        StratumCurve::new(sig, kind)
    }
}

impl fmt::Display for StratumCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.type_number())?;
        let legs = self.kind.legs();
        if !legs.is_empty() {
            let parts: Vec<String> = legs.iter().map(|l| format!("({},{})", l.genus, l.marks)).collect();
            write!(f, "[{}]", parts.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegJson {
    pub i: u32,
    #[serde(rename = "S")]
    pub s: Vec<u32>,
}

/// Wire form of a stratum: `{"type": 1..6, "legs": [{"i": .., "S": [..]}, ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumJson {
    pub r#type: u8,
    pub legs: Vec<LegJson>,
}

/// Every parameter-canonical stratum of `sig`, before merging strata with
/// equal functionals. Ordered by type, then leg keys.
pub fn enumerate_parameter_strata(sig: ModuliSig) -> Result<Vec<StratumCurve>> {
    let sig = ModuliSig::with_strata(sig.g, sig.n)?;
    let g = sig.g;
    let n = sig.n;
    let mut out: BTreeSet<StratumCurve> = BTreeSet::new();
    let mut push = |kind: StratumKind| {
        if let Ok(s) = StratumCurve::new(sig, kind) {
            out.insert(s);
        }
    };

    if g >= 1 {
        push(StratumKind::EllipticTail);
    }
    if g >= 3 {
        push(StratumKind::FourPoint);
    }
    if g >= 2 {
        for i in 0..=g - 2 {
            for s in MarkSet::all_subsets(n) {
                push(StratumKind::ThreeOne { leg: Leg::new(i, s) });
                push(StratumKind::TwoTwo { leg: Leg::new(i, s) });
            }
        }
    }
    if g >= 1 {
        // Each mark goes to I, J or neither.
        let assignments = 3usize.pow(n);
        for code in 0..assignments {
            let (mut a, mut b) = (MarkSet::EMPTY, MarkSet::EMPTY);
            let mut c = code;
            for k in 1..=n {
                match c % 3 {
                    0 => a = a.union(MarkSet::singleton(k)),
                    1 => b = b.union(MarkSet::singleton(k)),
                    _ => {}
                }
                c /= 3;
            }
            for i in 0..g {
                for j in 0..g - i {
                    let legs = [Leg::new(i, a), Leg::new(j, b)];
                    if legs[0] <= legs[1] {
                        push(StratumKind::TwoOneOne { legs });
                    }
                }
            }
        }
    }
    {
        let compositions = genus_compositions(g);
        let assignments = 4usize.pow(n);
        for code in 0..assignments {
            let mut blocks = [MarkSet::EMPTY; 4];
            let mut c = code;
            for k in 1..=n {
                let b = c % 4;
                blocks[b] = blocks[b].union(MarkSet::singleton(k));
                c /= 4;
            }
            for comp in &compositions {
                let mut legs = [0, 1, 2, 3].map(|t| Leg::new(comp[t], blocks[t]));
                if !legs.iter().all(|l| l.is_nonempty()) {
                    continue;
                }
                let unsorted = legs;
                legs.sort();
                if legs == unsorted {
                    push(StratumKind::Flag { legs });
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn genus_compositions(g: u32) -> Vec<[u32; 4]> {
    let mut v = Vec::new();
    for i in 0..=g {
        for j in 0..=g - i {
            for k in 0..=g - i - j {
                v.push([i, j, k, g - i - j - k]);
            }
        }
    }
    v
}

/// A stratum kept by [`enumerate_strata`] together with the parameter
/// strata that have the identical functional and were merged into it.
#[derive(Clone, Debug)]
pub struct MergedStratum {
    pub representative: StratumCurve,
    pub merged: Vec<StratumCurve>,
}

/// Strata of `sig` up to identical intersection functional. The first
/// parameter stratum in canonical order represents each class.
pub fn enumerate_strata_with_merges(sig: ModuliSig) -> Result<Vec<MergedStratum>> {
    let raw = enumerate_parameter_strata(sig)?;
    let mut seen: BTreeMap<Vec<(ClassIndex, crate::Rational)>, usize> = BTreeMap::new();
    let mut out: Vec<MergedStratum> = Vec::new();
    for s in raw {
        let key: Vec<_> = crate::intersection::stratum_functional(&s).covector.into_iter().collect();
        match seen.get(&key) {
            Some(&pos) => out[pos].merged.push(s),
            None => {
                seen.insert(key, out.len());
                out.push(MergedStratum { representative: s, merged: vec![] });
            }
        }
    }
    Ok(out)
}

/// Strata of `sig` deduplicated by functional, in canonical order.
pub fn enumerate_strata(sig: ModuliSig) -> Result<Vec<StratumCurve>> {
    Ok(enumerate_strata_with_merges(sig)?.into_iter().map(|m| m.representative).collect())
}

/// All set partitions of `{1..n}` into exactly `k` nonempty blocks, blocks
/// ordered by smallest element.
pub fn set_partitions(n: u32, k: usize) -> Vec<Vec<MarkSet>> {
    fn rec(mark: u32, n: u32, k: usize, blocks: &mut Vec<MarkSet>, out: &mut Vec<Vec<MarkSet>>) {
        if mark > n {
            if blocks.len() == k {
                out.push(blocks.clone());
            }
            return;
        }
        let remaining = (n - mark + 1) as usize;
        if blocks.len() + remaining < k {
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] = blocks[b].union(MarkSet::singleton(mark));
            rec(mark + 1, n, k, blocks, out);
            blocks[b] = MarkSet::from_bits(blocks[b].bits() & !(1 << (mark - 1)));
        }
        if blocks.len() < k {
            blocks.push(MarkSet::singleton(mark));
            rec(mark + 1, n, k, blocks, out);
            blocks.pop();
        }
    }
    let mut out = Vec::new();
    rec(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// All set partitions of `{1..n}` (any number of blocks).
pub fn all_set_partitions(n: u32) -> Vec<Vec<MarkSet>> {
    (1..=n.max(1) as usize).flat_map(|k| set_partitions(n, k)).collect()
}
