//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use fabercone::combinat::{ClassIndex, MarkSet, ModuliSig};
use fabercone::intersection::LinearFunctional;
use fabercone::linalg::{nullspace, rank};
use fabercone::rational::{dot, int, primitive, Rational};
use fabercone::{ConeH, ConeV};
use num_traits::{Signed, Zero};
use rand::Rng;

// ---------------------------------------------------------------------------
// Fourier-Motzkin oracle for extremal rays.
//
// The dual cone C* = cone(rows of A) is described by eliminating the
// multipliers λ from y = Aᵀλ, λ ≥ 0: equalities are used to substitute
// multipliers first, the rest are eliminated pairwise, discarding
// combinations whose support is not minimal.
// The surviving inequalities s·y ≥ 0 generate C modulo the leftover
// equations; extreme ones are kept by the tight-rank test.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
struct Ineq {
    /// Coefficients on (y_1..y_d, λ_1..λ_m).
    coeffs: Vec<Rational>,
    origin: BTreeSet<usize>,
}

pub fn fm_extremal_rays(h: &ConeH) -> ConeV {
    let d = h.dim;
    let mut rows = h.inequalities.clone();
    for e in &h.equations {
        rows.push(e.clone());
        rows.push(e.iter().map(|x| -x).collect());
    }
    let m = rows.len();
    let w = d + m;

    // equalities y_i - Σ_j rows[j][i] λ_j = 0
    let mut eqs: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            let mut e = vec![Rational::zero(); w];
            e[i] = int(1);
            for j in 0..m {
                e[d + j] = -rows[j][i].clone();
            }
            e
        })
        .collect();
    let mut ineqs: Vec<Ineq> = (0..m)
        .map(|j| {
            let mut c = vec![Rational::zero(); w];
            c[d + j] = int(1);
            Ineq { coeffs: c, origin: BTreeSet::from([j]) }
        })
        .collect();

    // substitute multipliers using the equalities
    let mut y_equations = Vec::new();
    while let Some(e) = eqs.pop() {
        let Some(var) = (d..w).find(|&k| !e[k].is_zero()) else {
            if e.iter().any(|x| !x.is_zero()) {
                y_equations.push(e[..d].to_vec());
            }
            continue;
        };
        let pivot = e[var].clone();
        let subst = |v: &mut Vec<Rational>| {
            if !v[var].is_zero() {
                let f = &v[var] / &pivot;
                for k in 0..w {
                    let t = &f * &e[k];
                    v[k] -= t;
                }
            }
        };
        for other in eqs.iter_mut() {
            subst(other);
        }
        for q in ineqs.iter_mut() {
            subst(&mut q.coeffs);
        }
    }

    // eliminate the remaining multipliers, keeping only combinations of
    // minimal support (the others are conic combinations of those)
    for var in d..w {
        if ineqs.iter().all(|q| q.coeffs[var].is_zero()) {
            continue;
        }
        let (pos, rest): (Vec<Ineq>, Vec<Ineq>) = ineqs.into_iter().partition(|q| q.coeffs[var].is_positive());
        let (neg, zero): (Vec<Ineq>, Vec<Ineq>) = rest.into_iter().partition(|q| q.coeffs[var].is_negative());
        let mut next = zero;
        for p in &pos {
            for q in &neg {
                let origin: BTreeSet<usize> = p.origin.union(&q.origin).copied().collect();
                let a = p.coeffs[var].clone();
                let b = -q.coeffs[var].clone();
                let coeffs: Vec<Rational> = p.coeffs.iter().zip(&q.coeffs).map(|(x, y)| &b * x + &a * y).collect();
                next.push(Ineq { coeffs, origin });
            }
        }
        next.sort_by_key(|q| q.origin.len());
        let mut kept: Vec<Ineq> = Vec::new();
        let mut seen = BTreeSet::new();
        for mut q in next {
            if q.coeffs.iter().all(Zero::is_zero) {
                continue;
            }
            if kept.iter().any(|k| k.origin.len() < q.origin.len() && k.origin.is_subset(&q.origin)) {
                continue;
            }
            q.coeffs = primitive(&q.coeffs);
            if seen.insert(q.coeffs.clone()) {
                kept.push(q);
            }
        }
        ineqs = kept;
    }

    let lineality = y_equations;
    let lin_dim = rank(&lineality);
    let candidates: Vec<Vec<Rational>> = ineqs.iter().map(|q| q.coeffs[..d].to_vec()).collect();
    let rays = candidates
        .into_iter()
        .filter(|s| {
            assert!(rows.iter().all(|a| !dot(a, s).is_negative()), "oracle produced an infeasible vector");
            let tight: Vec<Vec<Rational>> = rows.iter().filter(|a| dot(a, s).is_zero()).cloned().collect();
            let mut with_lin = lineality.clone();
            with_lin.push(s.clone());
            rank(&with_lin) > lin_dim && rank(&tight) + 1 + lin_dim == d
        })
        .collect();
    ConeV::new(d, rays, lineality).unwrap()
}

/// Random H-cone with `dim ≤ 6` and at most 12 small integer rows.
pub fn random_cone<R: Rng>(rng: &mut R) -> ConeH {
    let d = rng.gen_range(1..=6);
    let m = rng.gen_range(0..=12);
    let rows: Vec<Vec<Rational>> = (0..m).map(|_| (0..d).map(|_| int(rng.gen_range(-3..=3))).collect()).collect();
    ConeH::new(d, rows, vec![]).unwrap()
}

// ---------------------------------------------------------------------------
// Brute-force strata oracle.
//
// Raw parameter tuples of the six families are generated without any
// canonical ordering, filtered by the family constraints, turned into
// functionals over normalized `b`-keys, and collected as a set.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BKey {
    A,
    Birr,
    C(u32),
    B(u32, u32),
}

fn oracle_exists(g: u32, n: u32, i: u32, s: u32) -> bool {
    let size = s.count_ones();
    let co = n - size;
    if g == 0 {
        size >= 2 && co >= 2
    } else {
        (i == 0 && size >= 2) || (i >= 1 && i < g) || (i == g && co >= 2)
    }
}

/// Normalized key of `b_{i,I}`, or `None` when the divisor does not exist.
fn oracle_key(g: u32, n: u32, i: u32, s: u32) -> Option<BKey> {
    let full = (1u32 << n) - 1;
    let co = full & !s;
    if i == 0 && s.count_ones() == 1 {
        return Some(BKey::C(s.trailing_zeros() + 1));
    }
    if i == g && co.count_ones() == 1 {
        return Some(BKey::C(co.trailing_zeros() + 1));
    }
    if !oracle_exists(g, n, i, s) {
        return None;
    }
    Some(std::cmp::min((i, s), (g - i, co))).map(|(i, s)| BKey::B(i, s))
}

pub type OracleFunctional = BTreeMap<BKey, Rational>;

struct Builder<'a> {
    g: u32,
    n: u32,
    f: &'a mut OracleFunctional,
}

impl Builder<'_> {
    fn add(&mut self, key: BKey, w: i64) {
        *self.f.entry(key).or_insert_with(Rational::zero) += int(w);
    }
    fn l(&mut self, i: u32, s: u32, w: i64) {
        if let Some(k) = oracle_key(self.g, self.n, i, s) {
            self.add(k, w);
        }
    }
}

fn finish(mut f: OracleFunctional) -> OracleFunctional {
    f.retain(|_, v| !v.is_zero());
    f
}

pub fn oracle_strata_functionals(g: u32, n: u32) -> BTreeSet<OracleFunctional> {
    let mut out = BTreeSet::new();
    let subsets = 0..(1u32 << n);
    let nonempty = |i: u32, s: u32| i + s.count_ones() > 0;
    let mut emit = |build: &dyn Fn(&mut Builder)| {
        let mut f = OracleFunctional::new();
        build(&mut Builder { g, n, f: &mut f });
        out.insert(finish(f));
    };
    if g >= 1 {
        emit(&|b| {
            b.add(BKey::A, 1);
            b.add(BKey::Birr, -12);
            b.l(1, 0, 1);
        });
    }
    if g >= 3 {
        emit(&|b| b.add(BKey::Birr, 1));
    }
    if g >= 2 {
        for i in 0..=g - 2 {
            for s in subsets.clone() {
                if nonempty(i, s) {
                    emit(&|b| b.l(i, s, 1));
                }
                emit(&|b| {
                    b.add(BKey::Birr, 2);
                    b.l(i + 1, s, -1);
                });
            }
        }
    }
    if g >= 1 {
        for i in 0..g {
            for j in 0..g - i {
                for s in subsets.clone() {
                    for t in subsets.clone() {
                        if s & t == 0 && nonempty(i, s) && nonempty(j, t) {
                            emit(&|b| {
                                b.l(i, s, 1);
                                b.l(j, t, 1);
                                b.l(i + j, s | t, -1);
                            });
                        }
                    }
                }
            }
        }
    }
    // type 6: every ordered assignment of marks and genera to four legs
    let total = 4u64.pow(n);
    for code in 0..total {
        let mut sets = [0u32; 4];
        let mut c = code;
        for mark in 0..n {
            sets[(c % 4) as usize] |= 1 << mark;
            c /= 4;
        }
        for i in 0..=g {
            for j in 0..=g - i {
                for k in 0..=g - i - j {
                    let gen = [i, j, k, g - i - j - k];
                    if (0..4).all(|x| nonempty(gen[x], sets[x])) {
                        emit(&|b| {
                            for x in 0..4 {
                                b.l(gen[x], sets[x], 1);
                            }
                            for x in 1..4 {
                                b.l(gen[0] + gen[x], sets[0] | sets[x], -1);
                            }
                        });
                    }
                }
            }
        }
    }
    out
}

/// The library functional in oracle keys.
pub fn to_oracle(f: &LinearFunctional) -> OracleFunctional {
    let mut out = OracleFunctional::new();
    for (idx, w) in &f.covector {
        let (key, sign) = match *idx {
            ClassIndex::Lambda => (BKey::A, 1),
            ClassIndex::DeltaIrr => (BKey::Birr, -1),
            ClassIndex::Psi(k) => (BKey::C(k), 1),
            ClassIndex::Boundary(i, s) => (BKey::B(i, s.bits()), -1),
        };
        *out.entry(key).or_insert_with(Rational::zero) += w * int(sign);
    }
    finish(out)
}

/// Signatures with `1 ≤ 3g-3+n ≤ 6`.
pub fn small_signatures() -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for g in 0..=3u32 {
        for n in 0..=9u32 {
            let dim = 3 * g as i64 - 3 + n as i64;
            if (1..=6).contains(&dim) && ModuliSig::new(g, n).is_ok() {
                v.push((g, n));
            }
        }
    }
    v
}

// ---------------------------------------------------------------------------
// Small independent computations.
// ---------------------------------------------------------------------------

/// Stirling numbers of the second kind by the recurrence
/// `S(n,k) = k S(n-1,k) + S(n-1,k-1)`.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut t = vec![vec![0u64; k + 1]; n + 1];
    t[0][0] = 1;
    for i in 1..=n {
        for j in 1..=k.min(i) {
            t[i][j] = j as u64 * t[i - 1][j] + t[i - 1][j - 1];
        }
    }
    t[n][k]
}

/// Extremal rays of a pointed 3-dimensional cone by trying every pair of
/// rows: the common kernel direction, with the sign that satisfies all rows.
pub fn tight_pair_rays(rows: &[Vec<Rational>]) -> BTreeSet<Vec<Rational>> {
    let mut out = BTreeSet::new();
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            let k = nullspace(&[rows[a].clone(), rows[b].clone()], 3);
            if k.len() != 1 {
                continue;
            }
            for sign in [1, -1] {
                let v: Vec<Rational> = k[0].iter().map(|x| x * int(sign)).collect();
                if rows.iter().all(|r| !dot(r, &v).is_negative()) {
                    out.insert(primitive(&v));
                }
            }
        }
    }
    out
}

pub fn marks(xs: &[u32]) -> MarkSet {
    MarkSet::from_marks(xs.iter().copied())
}
