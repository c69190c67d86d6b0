//! Lower bounds for the multi-point Seshadri constant
//! `ε(𝔽_e, l; p₁…p_r) = sup{ m ≥ 0 : π*l − m Σ Eᵢ is ample }` of an ample
//! class `l = aC_e + bf`.
//!
//! Each bound is the largest `m` for which the uniform bundle
//! `π*l − m Σ Eᵢ` satisfies one of the three ampleness criteria. Bounds I and
//! II are rational. Bound III is a minimum of square roots; candidates are
//! compared through their squares so the choice never depends on rounding.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::criteria::{lambda_of, Variant};
use crate::lattice::{BaseDivisorClass, Position};

/// Exact form of a bound: a rational, or the square root of one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactBound {
    Rational(BigRational),
    Sqrt(BigRational),
}

impl ExactBound {
    /// The square of the bound; bounds are nonnegative so this orders them.
    pub fn squared(&self) -> BigRational {
        match self {
            ExactBound::Rational(q) => q * q,
            ExactBound::Sqrt(q) => q.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactBound::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            ExactBound::Sqrt(q) => q.to_f64().unwrap_or(f64::NAN).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub value: f64,
    /// `p/q` for rational bounds, `sqrt(p/q)` for radicals.
    pub expr: String,
    #[serde(skip)]
    pub exact: Option<ExactBound>,
}

impl BoundValue {
    fn rational(q: BigRational) -> Self {
        BoundValue {
            value: q.to_f64().unwrap_or(f64::NAN),
            expr: q.to_string(),
            exact: Some(ExactBound::Rational(q)),
        }
    }

    fn sqrt(num: BigInt, den: BigInt) -> Self {
        let expr = format!("sqrt({num}/{den})");
        let q = BigRational::new(num, den);
        let exact = ExactBound::Sqrt(q);
        BoundValue {
            value: exact.to_f64(),
            expr,
            exact: Some(exact),
        }
    }

    /// Exact comparison; falls back to the float when the exact form is lost
    /// (e.g. after deserialization).
    pub fn cmp_exact(&self, other: &BoundValue) -> Ordering {
        match (&self.exact, &other.exact) {
            (Some(x), Some(y)) => x.squared().cmp(&y.squared()),
            _ => self.value.total_cmp(&other.value),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.exact {
            Some(ExactBound::Rational(q)) => Some(q),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeshadriBoundReport {
    pub bound_i: Option<BoundValue>,
    pub bound_ii: Option<BoundValue>,
    pub bound_iii: Option<BoundValue>,
    pub best: Option<BoundValue>,
    pub best_from: Option<Variant>,
    /// Position the points must satisfy for each bound.
    pub assumptions: Vec<(Variant, Position)>,
    pub warnings: Vec<String>,
}

fn ample_regime(l: &BaseDivisorClass, e: u64, r: usize) -> bool {
    e >= 1 && r >= 1 && l.is_ample(e)
}

fn rational_min(values: impl IntoIterator<Item = BigRational>) -> Option<BigRational> {
    values.into_iter().min()
}

/// `min(b/r, a)`, for points off `C_e` on distinct fibers.
pub fn bound_from_i(l: &BaseDivisorClass, e: u64, r: usize) -> Option<BoundValue> {
    if !ample_regime(l, e, r) {
        return None;
    }
    let q = rational_min([
        BigRational::new(l.b.clone(), BigInt::from(r)),
        BigRational::from_integer(l.a.clone()),
    ])?;
    Some(BoundValue::rational(q))
}

/// `min(min_{e ≤ i ≤ λ} (b + (i−e)a)/kᵢ, a)` when `b > aλ`, for very general points.
pub fn bound_from_ii(l: &BaseDivisorClass, e: u64, r: usize) -> Option<BoundValue> {
    if !ample_regime(l, e, r) {
        return None;
    }
    let th = lambda_of(e, r as u64);
    if l.b <= &l.a * BigInt::from(th.lambda) {
        return None;
    }
    let e_big = BigInt::from(e);
    let terms = th.k_values.iter().map(|&(i, ki)| {
        BigRational::new(&l.b + (BigInt::from(i) - &e_big) * &l.a, BigInt::from(ki))
    });
    let q = rational_min(terms.chain([BigRational::from_integer(l.a.clone())]))?;
    Some(BoundValue::rational(q))
}

/// `min(√((r+2)/(r+3))·√(l²/r), √((r+2)/(3r))·√(b² − e·l²), a)` for very
/// general points and `r ≥ 3`.
pub fn bound_from_iii(l: &BaseDivisorClass, e: u64, r: usize) -> Option<BoundValue> {
    if !ample_regime(l, e, r) || r < 3 {
        return None;
    }
    let l2 = l.self_intersection(e);
    if !l2.is_positive() {
        return None;
    }
    let disc = &l.b * &l.b - BigInt::from(e) * &l2;
    if disc.is_negative() {
        return None;
    }
    let rb = BigInt::from(r);
    let candidates = [
        BoundValue::sqrt((&rb + 2) * &l2, &rb * (&rb + 3)),
        BoundValue::sqrt((&rb + 2) * &disc, BigInt::from(3) * &rb),
        BoundValue::rational(BigRational::from_integer(l.a.clone())),
    ];
    candidates.into_iter().min_by(|x, y| x.cmp_exact(y))
}

/// All three bounds and the best of those that apply.
pub fn seshadri_bounds(l: &BaseDivisorClass, e: u64, r: usize) -> SeshadriBoundReport {
    let bound_i = bound_from_i(l, e, r);
    let bound_ii = bound_from_ii(l, e, r);
    let bound_iii = bound_from_iii(l, e, r);

    let mut warnings = Vec::new();
    if e == 0 {
        warnings.push("bounds require e > 0".to_string());
    }
    if r == 0 {
        warnings.push("bounds require r >= 1".to_string());
    }
    if !l.is_ample(e) {
        warnings.push(format!("l = {}C_e + {}f is not ample on F_{} (need a > 0 and b > a*e)", l.a, l.b, e));
    }
    if bound_ii.is_none() && ample_regime(l, e, r) {
        warnings.push(format!("bound II needs b > a*lambda (lambda = {})", lambda_of(e, r as u64).lambda));
    }
    if r < 3 && ample_regime(l, e, r) {
        warnings.push("bound III needs r >= 3".to_string());
    }

    let mut best: Option<(Variant, BoundValue)> = None;
    for (v, b) in [(Variant::I, &bound_i), (Variant::II, &bound_ii), (Variant::III, &bound_iii)] {
        if let Some(b) = b {
            if best.as_ref().map_or(true, |(_, cur)| b.cmp_exact(cur) == Ordering::Greater) {
                best = Some((v, b.clone()));
            }
        }
    }
    let (best_from, best) = match best {
        Some((v, b)) => (Some(v), Some(b)),
        None => (None, None),
    };

    SeshadriBoundReport {
        bound_i,
        bound_ii,
        bound_iii,
        best,
        best_from,
        assumptions: vec![
            (Variant::I, Position::OffCeDistinctFibers),
            (Variant::II, Position::VeryGeneral),
            (Variant::III, Position::VeryGeneral),
        ],
        warnings,
    }
}

impl SeshadriBoundReport {
    pub fn bound(&self, variant: Variant) -> Option<&BoundValue> {
        match variant {
            Variant::I => self.bound_i.as_ref(),
            Variant::II => self.bound_ii.as_ref(),
            Variant::III => self.bound_iii.as_ref(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bound_i.is_none() && self.bound_ii.is_none() && self.bound_iii.is_none()
    }
}
