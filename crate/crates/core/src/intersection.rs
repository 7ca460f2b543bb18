//! Pairing of divisor classes with one-dimensional strata.
//!
//! Each stratum is turned into a linear functional on divisor coefficients,
//! written in the `b`-notation of the F-nef inequalities. For some families
//! the functional is a positive multiple of the actual intersection number
//! (type 2 is recorded as `b_irr`); this is irrelevant for cone questions.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinat::{enumerate_parameter_strata, enumerate_strata, ClassIndex, Leg, MarkSet, ModuliSig, StratumCurve, StratumJson, StratumKind};
use crate::cone::ConeH;
use crate::divisor::{flag_divisor, lookup_slot, DivisorClass};
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFunctional {
    pub sig: ModuliSig,
    pub covector: BTreeMap<ClassIndex, Rational>,
    pub label: String,
    pub stratum: Option<StratumCurve>,
}

impl LinearFunctional {
    pub fn evaluate(&self, d: &DivisorClass) -> Rational {
        self.covector
            .iter()
            .map(|(idx, w)| w * d.coeff(idx))
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// Covector in the order of `sig.coordinates()`, natural-sign coordinates.
    pub fn to_vector(&self) -> Vec<Rational> {
        self.sig
            .coordinates()
            .iter()
            .map(|idx| self.covector.get(idx).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    /// Covector in coordinates `(a, b_irr, c_1.., b_{i,S}..)`, i.e. with the
    /// boundary coordinates sign-flipped.
    pub fn to_b_vector(&self) -> Vec<Rational> {
        self.sig
            .coordinates()
            .iter()
            .map(|idx| {
                let w = self.covector.get(idx).cloned().unwrap_or_else(Rational::zero);
                w * b_sign(idx)
            })
            .collect()
    }
}

/// Sign relating a stored coefficient to its `b`-coordinate.
pub fn b_sign(idx: &ClassIndex) -> Rational {
    match idx {
        ClassIndex::DeltaIrr | ClassIndex::Boundary(..) => int(-1),
        _ => int(1),
    }
}

/// Accumulates a functional written in `a`, `b_irr`, `b_{i,I}` terms.
struct Form {
    sig: ModuliSig,
    cov: BTreeMap<ClassIndex, Rational>,
}

impl Form {
    fn new(sig: ModuliSig) -> Self {
        Form { sig, cov: BTreeMap::new() }
    }

    fn bump(&mut self, idx: ClassIndex, t: Rational) {
        let e = self.cov.entry(idx).or_insert_with(Rational::zero);
        *e += t;
        if e.is_zero() {
            self.cov.remove(&idx);
        }
    }

    fn a(&mut self, t: i64) -> &mut Self {
        self.bump(ClassIndex::Lambda, int(t));
        self
    }

    fn b_irr(&mut self, t: i64) -> &mut Self {
        self.bump(ClassIndex::DeltaIrr, int(-t));
        self
    }

    fn b(&mut self, i: u32, set: MarkSet, t: i64) -> &mut Self {
        if let Some((idx, sign)) = lookup_slot(self.sig, i, set) {
            self.bump(idx, int(t * sign as i64));
        }
        self
    }

    fn finish(self, label: String, stratum: Option<StratumCurve>) -> LinearFunctional {
        LinearFunctional { sig: self.sig, covector: self.cov, label, stratum }
    }
}

/// Functional of the four-leg family with `legs[0]` as the pivot leg:
/// `Σ b(leg) - b(l0∪l1) - b(l0∪l2) - b(l0∪l3)`.
pub fn four_leg_functional(sig: ModuliSig, legs: &[Leg; 4]) -> LinearFunctional {
    let mut f = Form::new(sig);
    for l in legs {
        f.b(l.genus, l.marks, 1);
    }
    let p = legs[0];
    for l in &legs[1..] {
        f.b(p.genus + l.genus, p.marks.union(l.marks), -1);
    }
    f.finish("four-leg".into(), None)
}

pub fn stratum_functional(x: &StratumCurve) -> LinearFunctional {
    let sig = x.sig;
    let mut f = Form::new(sig);
    match x.kind {
        StratumKind::EllipticTail => {
            f.a(1).b_irr(-12).b(1, MarkSet::EMPTY, 1);
        }
        StratumKind::FourPoint => {
            f.b_irr(1);
        }
        StratumKind::ThreeOne { leg } => {
            f.b(leg.genus, leg.marks, 1);
        }
        StratumKind::TwoTwo { leg } => {
            f.b_irr(2).b(leg.genus + 1, leg.marks, -1);
        }
        StratumKind::TwoOneOne { legs: [p, q] } => {
            f.b(p.genus, p.marks, 1)
                .b(q.genus, q.marks, 1)
                .b(p.genus + q.genus, p.marks.union(q.marks), -1);
        }
        StratumKind::Flag { legs } => {
            let cov = four_leg_functional(sig, &legs).covector;
            f.cov = cov;
        }
    }
    f.finish(x.to_string(), Some(*x))
}

#[derive(Clone, Debug)]
pub struct FNefReport {
    pub verdict: bool,
    pub violated: Vec<(StratumCurve, Rational)>,
    pub tight: Vec<StratumCurve>,
    pub tight_rank: usize,
}

#[derive(Serialize)]
struct ViolationJson {
    stratum: StratumJson,
    value: String,
}

#[derive(Serialize)]
struct ReportJson {
    verdict: bool,
    violated: Vec<ViolationJson>,
    tight: Vec<StratumJson>,
    tight_rank: usize,
}

impl FNefReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        let r = ReportJson {
            verdict: self.verdict,
            violated: self
                .violated
                .iter()
                .map(|(s, v)| ViolationJson { stratum: s.to_json(), value: format_rational(v) })
                .collect(),
            tight: self.tight.iter().map(StratumCurve::to_json).collect(),
            tight_rank: self.tight_rank,
        };
        serde_json::to_value(r).expect("report serializes")
    }
}

/// Value of `d` on every stratum of `strata`, in order.
pub fn evaluate_on(d: &DivisorClass, strata: &[StratumCurve]) -> Vec<Rational> {
    strata.par_iter().map(|s| stratum_functional(s).evaluate(d)).collect()
}

/// Decides F-nefness by evaluating every stratum functional.
pub fn is_f_nef(d: &DivisorClass) -> Result<FNefReport> {
    let strata = enumerate_strata(d.sig)?;
    let values = evaluate_on(d, &strata);
    let mut violated = Vec::new();
    let mut tight = Vec::new();
    let mut tight_rows = Vec::new();
    for (s, v) in strata.iter().zip(values) {
        if v.is_negative() {
            violated.push((*s, v));
        } else if v.is_zero() {
            tight.push(*s);
            tight_rows.push(stratum_functional(s).to_vector());
        }
    }
    Ok(FNefReport { verdict: violated.is_empty(), violated, tight, tight_rank: crate::linalg::rank(&tight_rows) })
}

fn require_unmarked(d: &DivisorClass) -> Result<()> {
    if d.sig.n != 0 || d.sig.g < 2 {
        return Err(Error::InvalidSignature { g: d.sig.g, n: d.sig.n, reason: "criterion needs n = 0 and g >= 2".into() });
    }
    Ok(())
}

/// Outcome of the sufficient nefness criterion for classes on `M̄_g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NefCriterion {
    /// True when the criterion certifies nefness.
    pub holds: bool,
    pub f_nef: bool,
    /// Every `b_i` is zero or at least `b_irr`.
    pub coefficient_condition: bool,
    /// The certificate is valid in characteristic zero only.
    pub requires_char_zero: bool,
}

/// F-nef plus "each `b_i` is `0` or `≥ b_irr`" certifies nefness.
pub fn nef_criterion_61(d: &DivisorClass) -> Result<NefCriterion> {
    require_unmarked(d)?;
    let b_irr = d.b_irr();
    let coefficient_condition = (1..=d.sig.g / 2).all(|i| {
        let b = d.lookup_b(i, MarkSet::EMPTY);
        b.is_zero() || b >= b_irr
    });
    let f_nef = is_f_nef(d)?.verdict;
    Ok(NefCriterion { holds: f_nef && coefficient_condition, f_nef, coefficient_condition, requires_char_zero: true })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectiveCriterion {
    /// `a ≥ 0`, `g·a ≥ (8g+4) b_irr` and `2g·a ≥ (8g+4) b_i` all hold.
    pub holds: bool,
    /// All three hold strictly (the bigness clause).
    pub strict: bool,
    pub requires_char_zero: bool,
}

/// Inequalities under which a class on `M̄_g` is a limit of effective
/// divisors away from the boundary (via the Cornalba–Harris class).
pub fn effective_criterion_35(d: &DivisorClass) -> Result<EffectiveCriterion> {
    require_unmarked(d)?;
    let g = int(d.sig.g as i64);
    let a = d.a();
    let k = int(8 * d.sig.g as i64 + 4);
    let mut lhs_rhs = vec![(a.clone(), int(0)), (&g * &a, &k * d.b_irr())];
    for i in 1..=d.sig.g / 2 {
        lhs_rhs.push((int(2) * &g * &a, &k * d.lookup_b(i, MarkSet::EMPTY)));
    }
    Ok(EffectiveCriterion {
        holds: lhs_rhs.iter().all(|(l, r)| l >= r),
        strict: lhs_rhs.iter().all(|(l, r)| l > r),
        requires_char_zero: true,
    })
}

#[derive(Clone, Debug)]
pub struct FlagReport {
    pub zero_on_t6: bool,
    pub positive_on_rest: bool,
    pub conditions_met: bool,
    /// Value on every parameter stratum (before merging equal functionals).
    pub values: Vec<(StratumCurve, Rational)>,
}

impl FlagReport {
    pub fn all_pass(&self) -> bool {
        self.zero_on_t6 && self.positive_on_rest && self.conditions_met
    }
}

/// Evaluates the flag divisor on every parameter stratum and checks the
/// strict conditions `a > 12 b_irr - (g+n-1)`, `2 b_irr > ((g+n)/2)^2`.
pub fn verify_flag_divisor(g: u32, n: u32, a: Rational, b_irr: Rational) -> Result<FlagReport> {
    let d = flag_divisor(g, n, a.clone(), b_irr.clone())?;
    let sig = ModuliSig::with_strata(g, n)?;
    let total = int((g + n) as i64);
    let cond_a = a > int(12) * &b_irr - (&total - int(1));
    let half = &total / int(2);
    let cond_b = int(2) * &b_irr > &half * &half;
    let strata = enumerate_parameter_strata(sig)?;
    let values = evaluate_on(&d, &strata);
    let mut zero_on_t6 = true;
    let mut positive_on_rest = true;
    for (s, v) in strata.iter().zip(&values) {
        if s.type_number() == 6 {
            zero_on_t6 &= v.is_zero();
        } else {
            positive_on_rest &= v.is_positive();
        }
    }
    Ok(FlagReport {
        zero_on_t6,
        positive_on_rest,
        conditions_met: cond_a && cond_b,
        values: strata.into_iter().zip(values).collect(),
    })
}

/// The F-nef cone of `M̄_{g,n}` as an H-cone in `b`-coordinates, one row per
/// distinct stratum functional.
#[derive(Clone, Debug)]
pub struct FaberCone {
    pub sig: ModuliSig,
    pub coordinates: Vec<ClassIndex>,
    pub functionals: Vec<LinearFunctional>,
    pub cone: ConeH,
}

pub fn faber_cone(sig: ModuliSig) -> Result<FaberCone> {
    let strata = enumerate_strata(sig)?;
    let functionals: Vec<LinearFunctional> = strata.iter().map(stratum_functional).collect();
    let rows: Vec<Vec<Rational>> = functionals.iter().map(LinearFunctional::to_b_vector).collect();
    let coordinates = sig.coordinates();
    let cone = ConeH::new(coordinates.len(), rows, vec![])?;
    Ok(FaberCone { sig, coordinates, functionals, cone })
}

/// Natural-sign divisor class from a vector in `b`-coordinates.
pub fn divisor_from_b_vector(sig: ModuliSig, v: &[Rational]) -> Result<DivisorClass> {
    let coords = sig.coordinates();
    if v.len() != coords.len() {
        return Err(Error::DimensionMismatch { expected: coords.len(), got: v.len() });
    }
    DivisorClass::from_coeffs(sig, coords.iter().zip(v).map(|(idx, x)| (*idx, x * b_sign(idx))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisor::{ch_gamma, eleven_lambda_minus_delta, genus_ten_vertex, ten_lambda_minus_two_delta, unmarked};
    use crate::rational::frac;

    fn sig(g: u32, n: u32) -> ModuliSig {
        ModuliSig::new(g, n).unwrap()
    }

    fn tail(g: u32) -> StratumCurve {
        StratumCurve::new(sig(g, 0), StratumKind::EllipticTail).unwrap()
    }

    #[test]
    fn functional_examples() {
        let f = stratum_functional(&tail(3));
        assert_eq!(f.evaluate(&eleven_lambda_minus_delta(3).unwrap()), int(0));
        assert_eq!(f.evaluate(&ch_gamma(3).unwrap()), int(-2));

        let legs = [Leg::new(1, MarkSet::EMPTY); 4];
        let x = StratumCurve::new(sig(4, 0), StratumKind::Flag { legs }).unwrap();
        let d = flag_divisor(4, 0, int(100), int(13)).unwrap();
        assert_eq!(stratum_functional(&x).evaluate(&d), int(0));
    }

    #[test]
    fn named_classes_f_nef() {
        assert!(is_f_nef(&eleven_lambda_minus_delta(5).unwrap()).unwrap().verdict);
        assert!(is_f_nef(&ten_lambda_minus_two_delta(3).unwrap()).unwrap().verdict);
        let r = is_f_nef(&ch_gamma(3).unwrap()).unwrap();
        assert!(!r.verdict);
        assert_eq!(r.violated.len(), 1);
        assert_eq!(r.violated[0].0.type_number(), 1);
        assert_eq!(r.violated[0].1, int(-2));
    }

    #[test]
    fn zero_divisor_is_tight_everywhere() {
        let s = sig(3, 1);
        let r = is_f_nef(&DivisorClass::zero(s)).unwrap();
        assert!(r.verdict);
        assert_eq!(r.tight.len(), enumerate_strata(s).unwrap().len());
    }

    #[test]
    fn criterion_61() {
        for g in 2..=6 {
            assert!(nef_criterion_61(&ten_lambda_minus_two_delta(g).unwrap()).unwrap().holds);
            assert!(nef_criterion_61(&eleven_lambda_minus_delta(g).unwrap()).unwrap().holds);
        }
        let v = nef_criterion_61(&genus_ten_vertex()).unwrap();
        assert!(v.f_nef && !v.coefficient_condition && !v.holds);
        let marked = DivisorClass::zero(sig(2, 1));
        assert!(matches!(nef_criterion_61(&marked), Err(Error::InvalidSignature { .. })));
    }

    #[test]
    fn criterion_35() {
        let r = effective_criterion_35(&ch_gamma(4).unwrap()).unwrap();
        assert!(r.holds && !r.strict);
        let d = unmarked(3, int(12), int(1), &[int(0)]).unwrap();
        assert!(effective_criterion_35(&d).unwrap().holds);
        let d = unmarked(2, int(1), frac(1, 2), &[int(0)]).unwrap();
        assert!(!effective_criterion_35(&d).unwrap().holds);
    }

    #[test]
    fn flag_divisor_reports() {
        let r = verify_flag_divisor(4, 0, int(100), int(13)).unwrap();
        assert!(!r.conditions_met);
        assert!(r.zero_on_t6);

        let r = verify_flag_divisor(2, 1, int(17), frac(3, 2)).unwrap();
        assert!(r.all_pass());
        assert!(r.values.iter().all(|(s, _)| s.type_number() != 6));
        let mut vals: Vec<Rational> = r.values.iter().map(|(_, v)| v.clone()).collect();
        vals.sort();
        assert_eq!(vals, vec![int(1), int(1), int(1), int(2), int(2)]);

        let r = verify_flag_divisor(1, 2, int(23), int(2)).unwrap();
        assert!(r.all_pass());
        let t1 = r.values.iter().find(|(s, _)| s.type_number() == 1).unwrap();
        assert_eq!(t1.1, int(1));
        let t5 = r.values.iter().find(|(s, _)| s.type_number() == 5).unwrap();
        assert_eq!(t5.1, int(2));
    }

    #[test]
    fn four_leg_functional_leg_order_invariant() {
        let s = sig(2, 4);
        let legs = [
            Leg::new(1, MarkSet::singleton(1)),
            Leg::new(0, MarkSet::from_marks([2, 3])),
            Leg::new(1, MarkSet::EMPTY),
            Leg::new(0, MarkSet::singleton(4)),
        ];
        let base = four_leg_functional(s, &legs).covector;
        let mut perm = [0usize, 1, 2, 3];
        // Heap's algorithm over all 24 orders
        let mut c = [0usize; 4];
        let mut i = 0;
        let mut count = 1;
        while i < 4 {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                let l = perm.map(|k| legs[k]);
                assert_eq!(four_leg_functional(s, &l).covector, base);
                count += 1;
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        assert_eq!(count, 24);
    }

    #[test]
    fn faber_cone_rows_genus_three() {
        let fc = faber_cone(sig(3, 0)).unwrap();
        assert_eq!(fc.cone.inequalities.len(), 4);
    }
}
