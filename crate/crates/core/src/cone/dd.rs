//! Double description: H-cone to extremal rays plus lineality.
//!
//! Inequalities are inserted in their canonical (lexicographic) order. The
//! lineality space is carried explicitly; while a new row is not constant on
//! it, one lineality generator is turned into a ray and the rest of the
//! state is projected onto the row's kernel. Otherwise rays are split by the
//! sign of the row and adjacent `(+,-)` pairs are combined.
//!
//! Two rays are adjacent iff their common tight rows (with the equations)
//! have rank `dim - lineality - 2`. The rank is first computed modulo a
//! large prime: equality there proves adjacency. When the modular rank
//! falls short the equivalent combinatorial test decides (no third ray is
//! tight on all common rows).

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ConeH, ConeV};
use crate::error::{Error, Result};
use crate::linalg::{rank_mod_p, reduce_mod};
use crate::rational::Rational;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Adjacency {
    /// Rank of the common tight rows (modular fast path, exact fallback).
    #[default]
    Algebraic,
    /// No third ray tight on all common rows.
    Combinatorial,
}

#[derive(Clone, Default)]
pub struct DdOptions<'a> {
    pub adjacency: Adjacency,
    /// Give up once the intermediate ray list exceeds this size.
    pub max_rays: Option<usize>,
    pub deadline: Option<Instant>,
    /// Continue from a previously saved state of the same input.
    pub resume: Option<DdCheckpoint>,
    /// Called with the current state every `checkpoint_every` rows.
    pub checkpoint: Option<&'a (dyn Fn(&DdCheckpoint) + Sync)>,
    pub checkpoint_every: usize,
}

/// Serializable intermediate state after `rows_done` inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdCheckpoint {
    pub input_hash: String,
    pub rows_done: usize,
    pub lineality: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub enum DdRun {
    Complete(ConeV),
    Interrupted { reason: String, checkpoint: DdCheckpoint },
}

/// Extremal rays and lineality space of `h`.
pub fn extremal_rays(h: &ConeH) -> Result<ConeV> {
    match extremal_rays_with(h, &DdOptions::default())? {
        DdRun::Complete(v) => Ok(v),
        DdRun::Interrupted { reason, .. } => Err(Error::ResourceLimit(reason)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64).max(1)])
    }

    fn prefix(len: usize, total: usize) -> Self {
        let mut b = Bits::new(total);
        for i in 0..len {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn subset_of(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w * 64 + b))
    }
}

#[derive(Clone, Debug)]
struct Ray {
    v: Vec<BigInt>,
    zero: Bits,
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn make_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in &v {
        g = g.gcd(x);
        if g.is_one() {
            return v;
        }
    }
    if !g.is_zero() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// `s·x - t·y`, made primitive.
fn combine(s: &BigInt, x: &[BigInt], t: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    make_primitive(x.iter().zip(y).map(|(a, b)| s * a - t * b).collect())
}

fn to_int_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    // canonical rows are already integral
    rows.iter()
        .map(|r| {
            debug_assert!(r.iter().all(|x| x.is_integer()));
            r.iter().map(|x| x.to_integer()).collect()
        })
        .collect()
}

struct State {
    lin: Vec<Vec<BigInt>>,
    rays: Vec<Ray>,
    rows_done: usize,
}

impl State {
    fn checkpoint(&self, hash: &str) -> DdCheckpoint {
        let strs = |v: &Vec<BigInt>| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        DdCheckpoint {
            input_hash: hash.to_string(),
            rows_done: self.rows_done,
            lineality: self.lin.iter().map(strs).collect(),
            rays: self.rays.iter().map(|r| strs(&r.v)).collect(),
        }
    }
}

fn parse_ints(rows: &[Vec<String>], dim: usize) -> Result<Vec<Vec<BigInt>>> {
    rows.iter()
        .map(|r| {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
            }
            r.iter()
                .map(|s| s.parse::<BigInt>().map_err(|_| Error::parse(format!("bad integer {s:?} in checkpoint"))))
                .collect()
        })
        .collect()
}

pub fn extremal_rays_with(h: &ConeH, opts: &DdOptions) -> Result<DdRun> {
    let dim = h.dim;
    let rows = to_int_rows(&h.inequalities);
    let eqs = to_int_rows(&h.equations);
    let m = rows.len();
    let hash = h.content_hash();

    let mut state = match &opts.resume {
        Some(cp) => {
            if cp.input_hash != hash {
                return Err(Error::parse("checkpoint belongs to a different cone"));
            }
            let lin = parse_ints(&cp.lineality, dim)?;
            let rays = parse_ints(&cp.rays, dim)?
                .into_iter()
                .map(|v| {
                    let mut zero = Bits::new(m);
                    for (k, a) in rows.iter().enumerate().take(cp.rows_done) {
                        if idot(a, &v).is_zero() {
                            zero.set(k);
                        }
                    }
                    Ray { v, zero }
                })
                .collect();
            State { lin, rays, rows_done: cp.rows_done }
        }
        None => {
            let mut lin: Vec<Vec<BigInt>> = (0..dim)
                .map(|i| (0..dim).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
                .collect();
            for e in &eqs {
                lin = restrict_lineality(lin, e).0;
            }
            State { lin, rays: Vec::new(), rows_done: 0 }
        }
    };

    let eq_mod: Vec<Vec<u64>> = eqs.iter().map(|e| e.iter().map(reduce_mod).collect()).collect();
    let eq_rank = rank_mod_p(&mut eq_mod.clone());
    let rows_mod: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(reduce_mod).collect()).collect();

    while state.rows_done < m {
        if let Some(deadline) = opts.deadline {
            if Instant::now() >= deadline {
                return Ok(DdRun::Interrupted { reason: "time budget exhausted".into(), checkpoint: state.checkpoint(&hash) });
            }
        }
        let k = state.rows_done;
        let a = &rows[k];
        let next = match state.lin.iter().position(|l| !idot(a, l).is_zero()) {
            Some(pos) => lineality_step(&state, a, k, m, pos),
            None => {
                let ctx = PairCtx { rows_mod: &rows_mod, eq_mod: &eq_mod, eq_rank, dim, adjacency: opts.adjacency, deadline: opts.deadline };
                match ray_step(&state, a, k, &ctx) {
                    Some(s) => s,
                    None => {
                        return Ok(DdRun::Interrupted {
                            reason: "time budget exhausted".into(),
                            checkpoint: state.checkpoint(&hash),
                        })
                    }
                }
            }
        };
        state = next;
        if let Some(max) = opts.max_rays {
            if state.rays.len() > max {
                return Ok(DdRun::Interrupted {
                    reason: format!("intermediate ray count {} exceeds limit {max}", state.rays.len()),
                    checkpoint: state.checkpoint(&hash),
                });
            }
        }
        if let Some(cb) = opts.checkpoint {
            if opts.checkpoint_every > 0 && state.rows_done % opts.checkpoint_every == 0 {
                cb(&state.checkpoint(&hash));
            }
        }
    }

    let to_q = |v: &Vec<BigInt>| v.iter().map(|x| Rational::from_integer(x.clone())).collect::<Vec<_>>();
    let rays = state.rays.iter().map(|r| to_q(&r.v)).collect();
    let lin = state.lin.iter().map(to_q).collect();
    Ok(DdRun::Complete(ConeV::new(dim, rays, lin)?))
}

/// Projects lineality generators onto `{e·x = 0}`; returns the remaining
/// generators and the removed one (if `e` was not already constant zero).
fn restrict_lineality(lin: Vec<Vec<BigInt>>, e: &[BigInt]) -> (Vec<Vec<BigInt>>, Option<Vec<BigInt>>) {
    let Some(pos) = lin.iter().position(|l| !idot(e, l).is_zero()) else {
        return (lin, None);
    };
    let l0 = lin[pos].clone();
    let s0 = idot(e, &l0);
    let rest = lin
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pos)
        .map(|(_, l)| {
            let sl = idot(e, l);
            if sl.is_zero() {
                l.clone()
            } else {
                combine(&s0, l, &sl, &l0)
            }
        })
        .collect();
    (rest, Some(l0))
}

fn lineality_step(state: &State, a: &[BigInt], k: usize, m: usize, pos: usize) -> State {
    let mut l0 = state.lin[pos].clone();
    let mut s0 = idot(a, &l0);
    if s0.is_negative() {
        for x in l0.iter_mut() {
            *x = -x.clone();
        }
        s0 = -s0;
    }
    let lin: Vec<Vec<BigInt>> = state
        .lin
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pos)
        .map(|(_, l)| {
            let sl = idot(a, l);
            if sl.is_zero() {
                l.clone()
            } else {
                combine(&s0, l, &sl, &l0)
            }
        })
        .collect();
    let mut rays: Vec<Ray> = state
        .rays
        .iter()
        .map(|r| {
            let sr = idot(a, &r.v);
            let v = if sr.is_zero() { r.v.clone() } else { combine(&s0, &r.v, &sr, &l0) };
            let mut zero = r.zero.clone();
            zero.set(k);
            Ray { v, zero }
        })
        .collect();
    rays.push(Ray { v: make_primitive(l0), zero: Bits::prefix(k, m) });
    State { lin, rays, rows_done: k + 1 }
}

struct PairCtx<'a> {
    rows_mod: &'a [Vec<u64>],
    eq_mod: &'a [Vec<u64>],
    eq_rank: usize,
    dim: usize,
    adjacency: Adjacency,
    deadline: Option<Instant>,
}

fn ray_step(state: &State, a: &[BigInt], k: usize, ctx: &PairCtx) -> Option<State> {
    let values: Vec<BigInt> = state.rays.par_iter().map(|r| idot(a, &r.v)).collect();
    let pos: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_positive()).collect();
    let neg: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_negative()).collect();

    let mut next: Vec<Ray> = Vec::with_capacity(state.rays.len());
    for (i, r) in state.rays.iter().enumerate() {
        if values[i].is_positive() {
            next.push(r.clone());
        } else if values[i].is_zero() {
            let mut r = r.clone();
            r.zero.set(k);
            next.push(r);
        }
    }
    if !neg.is_empty() && !pos.is_empty() {
        let target = (ctx.dim - state.lin.len()).checked_sub(2);
        let aborted = AtomicBool::new(false);
        let created: Vec<Vec<Ray>> = pos
            .par_iter()
            .map(|&p| {
                if aborted.load(Ordering::Relaxed) {
                    return Vec::new();
                }
                if ctx.deadline.is_some_and(|d| Instant::now() >= d) {
                    aborted.store(true, Ordering::Relaxed);
                    return Vec::new();
                }
                let rp = &state.rays[p];
                let mut out = Vec::new();
                for &q in &neg {
                    let rq = &state.rays[q];
                    let common = rp.zero.and(&rq.zero);
                    let Some(target) = target else { continue };
                    if !adjacent(state, p, q, &common, target, ctx) {
                        continue;
                    }
                    let sp = &values[p];
                    let sq = &values[q];
                    let v = combine(sp, &rq.v, sq, &rp.v);
                    let mut zero = common;
                    zero.set(k);
                    out.push(Ray { v, zero });
                }
                out
            })
            .collect();
        if aborted.load(Ordering::Relaxed) {
            return None;
        }
        next.extend(created.into_iter().flatten());
    }
    Some(State { lin: state.lin.clone(), rays: next, rows_done: k + 1 })
}

fn adjacent(state: &State, p: usize, q: usize, common: &Bits, target: usize, ctx: &PairCtx) -> bool {
    if common.count() + ctx.eq_rank < target {
        return false;
    }
    if ctx.adjacency == Adjacency::Algebraic {
        let mut m: Vec<Vec<u64>> = common.ones().map(|i| ctx.rows_mod[i].clone()).collect();
        m.extend(ctx.eq_mod.iter().cloned());
        if m.is_empty() {
            if target == 0 {
                return true;
            }
        } else if rank_mod_p(&mut m) >= target {
            return true;
        }
    }
    !state
        .rays
        .iter()
        .enumerate()
        .any(|(t, r)| t != p && t != q && common.subset_of(&r.zero))
}
