//! Sufficient numerical criteria for ampleness, global generation, very
//! ampleness and k-very ampleness of `L = aH + bF − Σ mᵢEᵢ` on `𝔽_{e,r}`.
//!
//! Every checker evaluates its inequalities exactly as stated, including the
//! choice between strict and non-strict comparisons. Fractional coefficients
//! such as `(s+3)/(s+2)` are compared by cross-multiplying integers; the
//! rational `lhs`/`rhs` values in a [`Condition`] are for reporting only.
//!
//! Conditions quantified over "any distinct kᵢ of the mⱼ" or over
//! `2 ≤ s ≤ r` are evaluated on the dominating subset (the largest entries
//! after the relevant transform), see [`topk_sum`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::LatticeError;
use crate::lattice::{BlowupModel, DivisorClass, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Ample,
    GloballyGenerated,
    VeryAmple,
    KVeryAmple,
}

/// I: points off `C_e` on distinct fibers; II: the `λ`/`kᵢ` criterion;
/// III: the quadratic criterion quantified over `2 ≤ s ≤ r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    I,
    II,
    III,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::I, Variant::II, Variant::III];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::I => "I",
            Variant::II => "II",
            Variant::III => "III",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CriterionId {
    pub family: Family,
    pub variant: Variant,
    /// Present iff `family` is [`Family::KVeryAmple`].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
}

impl CriterionId {
    pub fn ample(variant: Variant) -> Self {
        CriterionId { family: Family::Ample, variant, k: None }
    }

    pub fn globally_generated(variant: Variant) -> Self {
        CriterionId { family: Family::GloballyGenerated, variant, k: None }
    }

    pub fn very_ample(variant: Variant) -> Self {
        CriterionId { family: Family::VeryAmple, variant, k: None }
    }

    pub fn k_very_ample(variant: Variant, k: u32) -> Self {
        CriterionId { family: Family::KVeryAmple, variant, k: Some(k) }
    }

    /// Column name used in scan output, e.g. `ampI`, `ggII`, `kvaIII`.
    pub fn short_name(&self) -> String {
        let prefix = match self.family {
            Family::Ample => "amp",
            Family::GloballyGenerated => "gg",
            Family::VeryAmple => "va",
            Family::KVeryAmple => "kva",
        };
        format!("{}{}", prefix, self.variant.as_str())
    }
}

impl fmt::Display for CriterionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "{}(k={})", self.short_name(), k),
            None => f.write_str(&self.short_name()),
        }
    }
}

/// The twelve criteria, in the canonical column order; `k` is used for the
/// k-very ampleness family.
pub fn all_criteria(k: u32) -> Vec<CriterionId> {
    let mut ids = Vec::with_capacity(12);
    for v in Variant::ALL {
        ids.push(CriterionId::ample(v));
    }
    for v in Variant::ALL {
        ids.push(CriterionId::globally_generated(v));
    }
    for v in Variant::ALL {
        ids.push(CriterionId::very_ample(v));
    }
    for v in Variant::ALL {
        ids.push(CriterionId::k_very_ample(v, k));
    }
    ids
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    NotSatisfied,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds<T: PartialOrd>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Relation::Gt => lhs > rhs,
            Relation::Ge => lhs >= rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Gt => ">",
            Relation::Ge => ">=",
        }
    }
}

/// One evaluated inequality `lhs relation rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub label: String,
    pub passed: bool,
    pub relation: Relation,
    #[serde(with = "rational_string")]
    pub lhs: BigRational,
    #[serde(with = "rational_string")]
    pub rhs: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: CriterionId,
    pub verdict: Verdict,
    pub conditions: Vec<Condition>,
    pub applicability_note: String,
}

impl CriterionReport {
    pub fn is_satisfied(&self) -> bool {
        self.verdict == Verdict::Satisfied
    }

    /// The first condition that failed, if any.
    pub fn first_failure(&self) -> Option<&Condition> {
        self.conditions.iter().find(|c| !c.passed)
    }

    fn not_applicable(id: CriterionId, note: String) -> Self {
        CriterionReport {
            id,
            verdict: Verdict::NotApplicable,
            conditions: Vec::new(),
            applicability_note: note,
        }
    }

    fn from_conditions(id: CriterionId, conditions: Vec<Condition>, note: String) -> Self {
        let verdict = if conditions.iter().all(|c| c.passed) {
            Verdict::Satisfied
        } else {
            Verdict::NotSatisfied
        };
        CriterionReport {
            id,
            verdict,
            conditions,
            applicability_note: note,
        }
    }
}

/// `λ` and the subset sizes `kᵢ = 2i − e + 1` for `e ≤ i ≤ λ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdData {
    pub lambda: u64,
    pub k_values: Vec<(u64, u64)>,
}

impl ThresholdData {
    pub fn k_at(&self, i: u64) -> Option<u64> {
        self.k_values.iter().find(|(j, _)| *j == i).map(|(_, k)| *k)
    }
}

/// Least `λ ≥ e` with `2λ − e + 2 > r`, i.e. `max(e, ⌊(r+e−2)/2⌋ + 1)`.
pub fn lambda_of(e: u64, r: u64) -> ThresholdData {
    let from_r = (r as i64 + e as i64 - 2).div_euclid(2) + 1;
    let lambda = (e as i64).max(from_r) as u64;
    let k_values = (e..=lambda).map(|i| (i, 2 * i + 1 - e)).collect();
    ThresholdData { lambda, k_values }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Transform {
    Identity,
    PlusOne,
    Square,
    PlusOneSquared,
}

impl Transform {
    pub fn apply(self, x: &BigInt) -> BigInt {
        match self {
            Transform::Identity => x.clone(),
            Transform::PlusOne => x + 1,
            Transform::Square => x * x,
            Transform::PlusOneSquared => {
                let y = x + 1;
                &y * &y
            }
        }
    }
}

/// Sum of the `k` largest transformed values; all of them when `k` exceeds
/// the length.
pub fn topk_sum(values: &[BigInt], k: usize, transform: Transform) -> BigInt {
    let mut t: Vec<BigInt> = values.iter().map(|x| transform.apply(x)).collect();
    t.sort_unstable_by(|x, y| y.cmp(x));
    t.into_iter().take(k).sum()
}

/// Prefix sums of the transformed values sorted descending: `out[s]` is the
/// sum of the `s` largest.
fn sorted_prefix_sums(values: &[BigInt], transform: Transform) -> Vec<BigInt> {
    let mut t: Vec<BigInt> = values.iter().map(|x| transform.apply(x)).collect();
    t.sort_unstable_by(|x, y| y.cmp(x));
    let mut out = Vec::with_capacity(t.len() + 1);
    let mut acc = BigInt::zero();
    out.push(acc.clone());
    for v in t {
        acc += v;
        out.push(acc.clone());
    }
    out
}

struct Conditions(Vec<Condition>);

impl Conditions {
    fn new() -> Self {
        Conditions(Vec::new())
    }

    fn int(&mut self, label: impl Into<String>, lhs: BigInt, relation: Relation, rhs: BigInt) {
        let passed = relation.holds(&lhs, &rhs);
        self.0.push(Condition {
            label: label.into(),
            passed,
            relation,
            lhs: BigRational::from_integer(lhs),
            rhs: BigRational::from_integer(rhs),
        });
    }

    /// `lhs relation num/den` with `den > 0`, decided as `lhs·den relation num`.
    fn frac(&mut self, label: impl Into<String>, lhs: BigInt, relation: Relation, num: BigInt, den: BigInt) {
        debug_assert!(den > BigInt::zero());
        let passed = relation.holds(&(&lhs * &den), &num);
        self.0.push(Condition {
            label: label.into(),
            passed,
            relation,
            lhs: BigRational::from_integer(lhs),
            rhs: BigRational::new(num, den),
        });
    }

    /// `upper > mᵢ + shift` and `mᵢ + shift > lower` for every `i`, reported
    /// at the extreme multiplicities. Vacuous when `r = 0`.
    fn chain(&mut self, upper_label: &str, lower_label: &str, upper: &BigInt, m: &[BigInt], shift: &BigInt, lower: &BigInt) {
        let (Some(max), Some(min)) = (m.iter().max(), m.iter().min()) else {
            return;
        };
        self.int(upper_label, upper.clone(), Relation::Gt, max + shift);
        self.int(lower_label, min + shift, Relation::Gt, lower.clone());
    }

    fn finish(self) -> Vec<Condition> {
        self.0
    }
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

/// `None` when the theorem applies to `model`, otherwise the reason it does not.
fn applicability(model: &BlowupModel, position: Position, min_r: usize, k: Option<u32>) -> Option<String> {
    if model.e == 0 {
        return Some("requires e > 0".into());
    }
    if !model.position.implies(position) {
        return Some(format!("requires {} points, model asserts {}", position, model.position));
    }
    if model.r < min_r {
        return Some(format!("requires r >= {}, model has r = {}", min_r, model.r));
    }
    if k == Some(0) {
        return Some("requires k > 0".into());
    }
    None
}

fn position_note(position: Position) -> String {
    format!("applicable: {} points", position)
}

/// Ampleness of `L`.
pub fn check_ampleness(l: &DivisorClass, model: &BlowupModel, variant: Variant) -> Result<CriterionReport, LatticeError> {
    model.check(l)?;
    let id = CriterionId::ample(variant);
    let e = model.e_big();
    let (a, b, m) = (&l.a, &l.b, &l.m);
    let zero = BigInt::zero();
    let mut c = Conditions::new();

    match variant {
        Variant::I => {
            let pos = Position::OffCeDistinctFibers;
            if let Some(note) = applicability(model, pos, 1, None) {
                return Ok(CriterionReport::not_applicable(id, note));
            }
            c.chain("(1) a > m_i", "(1) m_i > 0", a, m, &zero, &zero);
            c.int("(2) b > ae", b.clone(), Relation::Gt, a * &e);
            c.int("(3) b > sum m_i", b.clone(), Relation::Gt, m.iter().sum());
            Ok(CriterionReport::from_conditions(id, c.finish(), position_note(pos)))
        }
        Variant::II => {
            let pos = Position::VeryGeneral;
            if let Some(note) = applicability(model, pos, 1, None) {
                return Ok(CriterionReport::not_applicable(id, note));
            }
            let th = lambda_of(model.e, model.r as u64);
            let prefix = sorted_prefix_sums(m, Transform::Identity);
            c.chain("(1) a > m_i", "(1) m_i > 0", a, m, &zero, &zero);
            for &(i, ki) in &th.k_values {
                let top = prefix[(ki as usize).min(model.r)].clone();
                c.int(
                    format!("(2) i={i}: b + (i-e)a > sum of k_i={ki} largest m_j"),
                    b + (big(i) - &e) * a,
                    Relation::Gt,
                    top,
                );
            }
            c.int(format!("(3) b > a*lambda (lambda={})", th.lambda), b.clone(), Relation::Gt, a * big(th.lambda));
            let note = format!("{}; lambda = {}", position_note(pos), th.lambda);
            Ok(CriterionReport::from_conditions(id, c.finish(), note))
        }
        Variant::III => {
            let pos = Position::VeryGeneral;
            if let Some(note) = applicability(model, pos, 3, None) {
                return Ok(CriterionReport::not_applicable(id, note));
            }
            let prefix = sorted_prefix_sums(m, Transform::Square);
            c.chain("(1) a > m_i", "(1) m_i > 0", a, m, &zero, &zero);
            c.int("(2) b > ae", b.clone(), Relation::Gt, a * &e);
            let quad = b * b - &e * (BigInt::from(2) * a * b - a * a * &e);
            let square = BigInt::from(2) * a * b - a * a * &e;
            for s in 2..=model.r {
                let sb = big(s as u64);
                c.frac(
                    format!("(3) s={s}: b^2 - e(2ab - a^2 e) >= 3/(s+2) * sum of s largest m^2"),
                    quad.clone(),
                    Relation::Ge,
                    BigInt::from(3) * &prefix[s],
                    &sb + 2,
                );
            }
            for s in 2..=model.r {
                let sb = big(s as u64);
                c.frac(
                    format!("(4) s={s}: 2ab - a^2 e > (s+3)/(s+2) * sum of s largest m^2"),
                    square.clone(),
                    Relation::Gt,
                    (&sb + 3) * &prefix[s],
                    &sb + 2,
                );
            }
            Ok(CriterionReport::from_conditions(id, c.finish(), position_note(pos)))
        }
    }
}

/// The quantities `(a+2, b+e+2, e)` shared by the adjoint criteria.
struct Shifted {
    a2: BigInt,
    be2: BigInt,
    e: BigInt,
}

impl Shifted {
    fn new(l: &DivisorClass, model: &BlowupModel) -> Self {
        let e = model.e_big();
        Shifted {
            a2: &l.a + 2,
            be2: &l.b + &e + 2,
            e,
        }
    }

    /// `(b+e+2)² − e[2(a+2)(b+e+2) − (a+2)²e]`.
    fn quad(&self) -> BigInt {
        &self.be2 * &self.be2 - &self.e * self.square()
    }

    /// `2(a+2)(b+e+2) − (a+2)²e`.
    fn square(&self) -> BigInt {
        BigInt::from(2) * &self.a2 * &self.be2 - &self.a2 * &self.a2 * &self.e
    }
}

/// Global generation of `L`, through Reider's criterion applied to `N = L − K`.
pub fn check_global_generation(
    l: &DivisorClass,
    model: &BlowupModel,
    variant: Variant,
) -> Result<CriterionReport, LatticeError> {
    model.check(l)?;
    let id = CriterionId::globally_generated(variant);
    let sh = Shifted::new(l, model);
    let (a2, be2, e) = (&sh.a2, &sh.be2, &sh.e);
    let m = &l.m;
    let one = BigInt::one();
    let zero = BigInt::zero();
    let sum_m1: BigInt = m.iter().map(|x| x + 1).sum();
    let mut c = Conditions::new();

    match variant {
        Variant::I => {
            let pos = Position::OffCeDistinctFibers;
            if let Some(note) = applicability(model, pos, 1, None) {
                return Ok(CriterionReport::not_applicable(id, note));
            }
            c.chain("(1) a+2 > m_i+1", "(1) m_i+1 > 0", a2, m, &one, &zero);
            c.int("(2) b+e+2 > (a+2)e", be2.clone(), Relation::Gt, a2 * e);
            c.int("(3) b+e+2 > sum (m_i+1)", be2.clone(), Relation::Gt, sum_m1);
            Ok(CriterionReport::from_conditions(id, c.finish(), position_note(pos)))
        }
        Variant::II => {
            let pos = Position::VeryGeneral;
            if let Some(note) = applicability(model, pos, 1, None) {
                return Ok(CriterionReport::not_applicable(id, note));
            }
            let th = lambda_of(model.e, model.r as u64);
            let prefix = sorted_prefix_sums(m, Transform::PlusOne);
            c.chain("(1) a+2 > m_i+1", "(1) m_i+1 > 0", a2, m, &one, &zero);
            for &(i, ki) in &th.k_values {
                let top = &prefix[(ki as usize).min(model.r)];
                c.int(
                    format!("(2) i={i}: b+e+2 + (i-e)(a+2) > sum of k_i={ki} largest (m_j+1) + 1"),
                    be2 + (big(i) - e) * a2,
                    Relation::Gt,
                    top + 1,
                );
            }
            c.int(
                format!("(3) b+e+2 >= (a+2)lambda + 1 (lambda={})", th.lambda),
                be2.clone(),
                Relation::Ge,
                a2 * big(th.lambda) + 1,
            );
            let note = format!("{}; lambda = {}", position_note(pos), th.lambda);
            Ok(CriterionReport::from_conditions(id, c.finish(), note))
        }
        Variant::III => {
            let pos = Position::VeryGeneral;
            if let Some(note) = applicability(model, pos, 3, None) {
                return Ok(CriterionReport::not_applicable(id, note));
            }
            let prefix = sorted_prefix_sums(m, Transform::PlusOneSquared);
            c.chain("(1) a+2 > m_i+1", "(1) m_i+1 > 2", a2, m, &one, &BigInt::from(2));
            c.int("(2) b+e+2 > (a+2)e", be2.clone(), Relation::Gt, a2 * e);
            let quad = sh.quad();
            let square = sh.square();
            for s in 2..=model.r {
                let sb = big(s as u64);
                c.frac(
                    format!("(3) s={s}: (b+e+2)^2 - e[2(a+2)(b+e+2) - (a+2)^2 e] >= 3/(s+2) * sum of s largest (m+1)^2"),
                    quad.clone(),
                    Relation::Ge,
                    BigInt::from(3) * &prefix[s],
                    &sb + 2,
                );
            }
            for s in 2..=model.r {
                let sb = big(s as u64);
                c.frac(
                    format!("(4) s={s}: 2(a+2)(b+e+2) - (a+2)^2 e > (s+3)/(s+2) * sum of s largest (m+1)^2"),
                    square.clone(),
                    Relation::Gt,
                    (&sb + 3) * &prefix[s],
                    &sb + 2,
                );
            }
            Ok(CriterionReport::from_conditions(id, c.finish(), position_note(pos)))
        }
    }
}

/// Very ampleness of `L`, through Reider's criterion applied to `N = L − K`.
/// All three variants assume very general points.
pub fn check_very_ample(l: &DivisorClass, model: &BlowupModel, variant: Variant) -> Result<CriterionReport, LatticeError> {
    model.check(l)?;
    let id = CriterionId::very_ample(variant);
    let sh = Shifted::new(l, model);
    let (a2, be2, e) = (&sh.a2, &sh.be2, &sh.e);
    let m = &l.m;
    let two = BigInt::from(2);
    let sum_m1: BigInt = m.iter().map(|x| x + 1).sum();
    let pos = Position::VeryGeneral;
    let mut c = Conditions::new();

    match variant {
        Variant::I => {
            if let Some(note) = applicability(model, pos, 1, None) {
                return Ok(CriterionReport::not_applicable(id, note));
            }
            c.chain("(1) a+2 > m_i+2", "(1) m_i+2 > 2", a2, m, &two, &two);
            c.int("(2) b+e+2 > (a+2)e + 1", be2.clone(), Relation::Gt, a2 * e + 1);
            c.int("(3) b+e+2 > sum (m_i+1) + 2", be2.clone(), Relation::Gt, sum_m1 + 2);
            Ok(CriterionReport::from_conditions(id, c.finish(), position_note(pos)))
        }
        Variant::II => {
            if let Some(note) = applicability(model, pos, 1, None) {
                return Ok(CriterionReport::not_applicable(id, note));
            }
            let th = lambda_of(model.e, model.r as u64);
            let prefix = sorted_prefix_sums(m, Transform::PlusOne);
            c.chain("(1) a+2 > m_i+2", "(1) m_i+2 > 2", a2, m, &two, &two);
            for &(i, ki) in &th.k_values {
                let top = &prefix[(ki as usize).min(model.r)];
                c.int(
                    format!("(2) i={i}: b+e+2 + (i-e)(a+2) > sum of k_i={ki} largest (m_j+1) + 2"),
                    be2 + (big(i) - e) * a2,
                    Relation::Gt,
                    top + 2,
                );
            }
            c.int(
                format!("(3) b+e+2 > (a+2)lambda + 1 (lambda={})", th.lambda),
                be2.clone(),
                Relation::Gt,
                a2 * big(th.lambda) + 1,
            );
            let note = format!(
                "{}; lambda = {}; condition (2) read with the same subset quantifier as the ampleness criterion",
                position_note(pos),
                th.lambda
            );
            Ok(CriterionReport::from_conditions(id, c.finish(), note))
        }
        Variant::III => {
            if let Some(note) = applicability(model, pos, 4, None) {
                return Ok(CriterionReport::not_applicable(id, note));
            }
            let prefix = sorted_prefix_sums(m, Transform::PlusOneSquared);
            c.chain("(1) a+2 > m_i+2", "(1) m_i+2 > 2", a2, m, &two, &two);
            c.int("(2) b+e+2 > (a+2)e + 1", be2.clone(), Relation::Gt, a2 * e + 1);
            let quad = sh.quad();
            let square = sh.square();
            for s in 2..=model.r {
                let sb = big(s as u64);
                // 3/(s+2) + 2 = (2s + 7)/(s+2)
                c.frac(
                    format!("(3) s={s}: (b+e+2)^2 - e[2(a+2)(b+e+2) - (a+2)^2 e] >= (3/(s+2) + 2) * sum of s largest (m+1)^2"),
                    quad.clone(),
                    Relation::Ge,
                    (BigInt::from(2) * &sb + 7) * &prefix[s],
                    &sb + 2,
                );
            }
            for s in 2..=model.r {
                let sb = big(s as u64);
                // (s+3)/(s+2) + 2 = (3s + 7)/(s+2)
                c.frac(
                    format!("(4) s={s}: 2(a+2)(b+e+2) - (a+2)^2 e > ((s+3)/(s+2) + 2) * sum of s largest (m+1)^2"),
                    square.clone(),
                    Relation::Gt,
                    (BigInt::from(3) * &sb + 7) * &prefix[s],
                    &sb + 2,
                );
            }
            Ok(CriterionReport::from_conditions(id, c.finish(), position_note(pos)))
        }
    }
}

/// k-very ampleness of `L` for `k ≥ 1`, through the Beltrametti–Francia–Sommese
/// criterion applied to `N = L − K`. All three variants assume very general points.
pub fn check_k_very_ample(
    l: &DivisorClass,
    model: &BlowupModel,
    variant: Variant,
    k: u32,
) -> Result<CriterionReport, LatticeError> {
    model.check(l)?;
    let id = CriterionId::k_very_ample(variant, k);
    let sh = Shifted::new(l, model);
    let (a2, be2, e) = (&sh.a2, &sh.be2, &sh.e);
    let m = &l.m;
    let kb = BigInt::from(k);
    let two_k = BigInt::from(2) * &kb;
    let lower = BigInt::from(3) * &kb - 1;
    let sum_m1: BigInt = m.iter().map(|x| x + 1).sum();
    let pos = Position::VeryGeneral;
    let min_r = if variant == Variant::III { 4 } else { 1 };
    if let Some(note) = applicability(model, pos, min_r, Some(k)) {
        return Ok(CriterionReport::not_applicable(id, note));
    }
    let mut c = Conditions::new();
    c.chain("(1) a+2 > m_i+2k", "(1) m_i+2k > 3k-1", a2, m, &two_k, &lower);

    match variant {
        Variant::I => {
            c.int("(2) b+e+2 > (a+2)e + 2k + 1", be2.clone(), Relation::Gt, a2 * e + &two_k + 1);
            c.int("(3) b+e+2 >= sum (m_i+1) + 2k", be2.clone(), Relation::Ge, sum_m1 + &two_k);
            Ok(CriterionReport::from_conditions(id, c.finish(), position_note(pos)))
        }
        Variant::II => {
            let th = lambda_of(model.e, model.r as u64);
            let prefix = sorted_prefix_sums(m, Transform::PlusOne);
            for &(i, ki) in &th.k_values {
                let top = &prefix[(ki as usize).min(model.r)];
                c.int(
                    format!("(2) i={i}: b+e+2 + (i-e)(a+2) > sum of k_i={ki} largest (m_j+1) + 2k + 1"),
                    be2 + (big(i) - e) * a2,
                    Relation::Gt,
                    top + &two_k + 1,
                );
            }
            c.int(
                format!("(3) b+e+2 > (a+2)(lambda+1) (lambda={})", th.lambda),
                be2.clone(),
                Relation::Gt,
                a2 * big(th.lambda + 1),
            );
            let note = format!("{}; lambda = {}", position_note(pos), th.lambda);
            Ok(CriterionReport::from_conditions(id, c.finish(), note))
        }
        Variant::III => {
            c.int("(2) b+e+2 > (a+2)e + 2k + 1", be2.clone(), Relation::Gt, a2 * e + &two_k + 1);
            let prefix = sorted_prefix_sums(m, Transform::PlusOneSquared);
            // Left side as stated for this criterion; it differs from sh.quad() by 2(a+2)e².
            let quad = be2 * be2 - a2 * e * (BigInt::from(2) * be2 - &l.a * e);
            let square = sh.square();
            let coeff = &two_k + 1;
            for s in 2..=model.r {
                let sb = big(s as u64);
                // 3/(s+2) + 2k + 1 = (3 + (2k+1)(s+2))/(s+2)
                c.frac(
                    format!("(3) s={s}: (b+e+2)^2 - (a+2)e[2(b+e+2) - ae] >= (3/(s+2) + 2k + 1) * sum of s largest (m+1)^2"),
                    quad.clone(),
                    Relation::Ge,
                    (BigInt::from(3) + &coeff * (&sb + 2)) * &prefix[s],
                    &sb + 2,
                );
            }
            for s in 2..=model.r {
                let sb = big(s as u64);
                // (s+3)/(s+2) + 2k + 1 = (s + 3 + (2k+1)(s+2))/(s+2)
                c.frac(
                    format!("(4) s={s}: 2(a+2)(b+e+2) - (a+2)^2 e >= ((s+3)/(s+2) + 2k + 1) * sum of s largest (m+1)^2"),
                    square.clone(),
                    Relation::Ge,
                    (&sb + 3 + &coeff * (&sb + 2)) * &prefix[s],
                    &sb + 2,
                );
            }
            let note = format!(
                "{}; condition (3) uses (b+e+2)^2 - (a+2)e[2(b+e+2) - ae] as stated, which is 2(a+2)e^2 \
                 smaller than the global-generation form; possibly a misprint, evaluated verbatim",
                position_note(pos)
            );
            Ok(CriterionReport::from_conditions(id, c.finish(), note))
        }
    }
}

/// Dispatch on a [`CriterionId`].
pub fn check(l: &DivisorClass, model: &BlowupModel, id: CriterionId) -> Result<CriterionReport, LatticeError> {
    match id.family {
        Family::Ample => check_ampleness(l, model, id.variant),
        Family::GloballyGenerated => check_global_generation(l, model, id.variant),
        Family::VeryAmple => check_very_ample(l, model, id.variant),
        Family::KVeryAmple => check_k_very_ample(l, model, id.variant, id.k.unwrap_or(0)),
    }
}

/// Serializes rationals as `"p/q"` (or `"p"` for integers) so JSON output
/// stays exact.
pub mod rational_string {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn example_one() -> DivisorClass {
        let mut m = vec![32; 10];
        m.extend([1, 1]);
        DivisorClass::from_i64(33, 331, &m)
    }

    fn vg(e: u64, r: usize) -> BlowupModel {
        BlowupModel::new(e, r, Position::VeryGeneral)
    }

    #[test]
    fn lambda_examples() {
        let t = lambda_of(10, 12);
        assert_eq!(t.lambda, 11);
        assert_eq!(t.k_values, vec![(10, 11), (11, 13)]);
        assert_eq!(lambda_of(1, 1).lambda, 1);
        let t = lambda_of(2, 10);
        assert_eq!(t.lambda, 6);
        let ks: Vec<u64> = t.k_values.iter().map(|&(_, k)| k).collect();
        assert_eq!(ks, vec![3, 5, 7, 9, 11]);
    }

    #[test]
    fn lambda_is_least() {
        for e in 1..20u64 {
            for r in 0..60u64 {
                let lam = lambda_of(e, r).lambda;
                assert!(lam >= e && 2 * lam + 2 > r + e);
                assert!(lam == e || 2 * (lam - 1) + 2 <= r + e);
            }
        }
    }

    #[test]
    fn topk_examples() {
        let mut m = vec![32; 10];
        m.extend([1, 1]);
        let m = ints(&m);
        assert_eq!(topk_sum(&m, 11, Transform::Identity), BigInt::from(321));
        assert_eq!(topk_sum(&m, 13, Transform::Identity), BigInt::from(322));
        assert_eq!(topk_sum(&m, 0, Transform::Square), BigInt::from(0));
        assert_eq!(topk_sum(&ints(&[-5, 1, 2]), 1, Transform::Square), BigInt::from(25));
        assert_eq!(topk_sum(&ints(&[1, 3]), 1, Transform::PlusOneSquared), BigInt::from(16));
    }

    #[test]
    fn example_one_verdicts() {
        let model = vg(10, 12);
        let l = example_one();
        assert!(check_ampleness(&l, &model, Variant::I).unwrap().is_satisfied());

        let two = check_ampleness(&l, &model, Variant::II).unwrap();
        assert_eq!(two.verdict, Verdict::NotSatisfied);
        let failed: Vec<_> = two.conditions.iter().filter(|c| !c.passed).collect();
        assert_eq!(failed.len(), 1);
        assert!(failed[0].label.starts_with("(3)"));
        assert_eq!(failed[0].lhs, BigRational::from_integer(331.into()));
        assert_eq!(failed[0].rhs, BigRational::from_integer(363.into()));

        let three = check_ampleness(&l, &model, Variant::III).unwrap();
        assert_eq!(three.verdict, Verdict::NotSatisfied);
        let f = three.first_failure().unwrap();
        assert!(f.label.starts_with("(3) s=2"));
        assert_eq!(f.lhs, BigRational::from_integer(1.into()));
        assert_eq!(f.rhs, BigRational::from_integer(1536.into()));
    }

    #[test]
    fn example_two_verdicts() {
        let model = vg(10, 12);
        let l = DivisorClass::uniform(32, 353, 31, 12);
        assert!(check_ampleness(&l, &model, Variant::II).unwrap().is_satisfied());
        let one = check_ampleness(&l, &model, Variant::I).unwrap();
        let f = one.first_failure().unwrap();
        assert!(f.label.starts_with("(3)"));
        assert_eq!(f.rhs, BigRational::from_integer(372.into()));
        assert_eq!(check_ampleness(&l, &model, Variant::III).unwrap().verdict, Verdict::NotSatisfied);
    }

    #[test]
    fn example_three_verdicts() {
        let model = vg(2, 10);
        let l = DivisorClass::uniform(2, 6, 1, 10);
        assert!(check_ampleness(&l, &model, Variant::III).unwrap().is_satisfied());
        let one = check_ampleness(&l, &model, Variant::I).unwrap();
        assert_eq!(one.first_failure().unwrap().rhs, BigRational::from_integer(10.into()));
        let two = check_ampleness(&l, &model, Variant::II).unwrap();
        let f = two.first_failure().unwrap();
        assert!(f.label.starts_with("(3)"));
        assert_eq!(f.rhs, BigRational::from_integer(12.into()));
    }

    #[test]
    fn global_generation_examples() {
        let model = BlowupModel::new(1, 2, Position::OffCeDistinctFibers);
        let ok = DivisorClass::from_i64(1, 1, &[1, 0]);
        assert!(check_global_generation(&ok, &model, Variant::I).unwrap().is_satisfied());

        let edge = DivisorClass::from_i64(1, 1, &[1, 1]);
        let rep = check_global_generation(&edge, &model, Variant::I).unwrap();
        let f = rep.first_failure().unwrap();
        assert!(f.label.starts_with("(3)"));
        assert_eq!((f.lhs.to_integer(), f.rhs.to_integer()), (4.into(), 4.into()));

        let rep = check_global_generation(&DivisorClass::from_i64(2, 2, &[1, 1, 1]), &vg(1, 3), Variant::III).unwrap();
        assert_eq!(rep.verdict, Verdict::NotSatisfied);
        assert_eq!(rep.first_failure().unwrap().label, "(1) m_i+1 > 2");
    }

    #[test]
    fn very_ample_examples() {
        let model = vg(1, 1);
        assert!(check_very_ample(&DivisorClass::from_i64(2, 4, &[1]), &model, Variant::I).unwrap().is_satisfied());
        // b+e+2 = 5 against (a+2)e + 1 = 5: only the fiber-slope condition fails.
        let rep = check_very_ample(&DivisorClass::from_i64(2, 2, &[1]), &model, Variant::I).unwrap();
        assert_eq!(rep.verdict, Verdict::NotSatisfied);
        let failed: Vec<&str> = rep.conditions.iter().filter(|c| !c.passed).map(|c| c.label.as_str()).collect();
        assert_eq!(failed.len(), 1);
        assert!(failed[0].starts_with("(2)"), "{failed:?}");
        // One less in b: 4 > 4 fails twice.
        let rep = check_very_ample(&DivisorClass::from_i64(2, 1, &[1]), &model, Variant::I).unwrap();
        assert_eq!(rep.conditions.iter().filter(|c| !c.passed).count(), 2);

        for b in [0, 5, 100] {
            let rep = check_very_ample(&DivisorClass::from_i64(1, b, &[1, 1, 1, 1]), &vg(1, 4), Variant::III).unwrap();
            assert_eq!(rep.first_failure().unwrap().label, "(1) a+2 > m_i+2");
        }
    }

    #[test]
    fn very_ample_requires_very_general() {
        let model = BlowupModel::new(1, 1, Position::OffCeDistinctFibers);
        let rep = check_very_ample(&DivisorClass::from_i64(2, 4, &[1]), &model, Variant::I).unwrap();
        assert_eq!(rep.verdict, Verdict::NotApplicable);
    }

    #[test]
    fn k_very_ample_examples() {
        let model = vg(1, 1);
        assert!(check_k_very_ample(&DivisorClass::from_i64(2, 5, &[1]), &model, Variant::I, 1)
            .unwrap()
            .is_satisfied());
        // b+e+2 = 7 against (a+2)e + 2k + 1 = 7.
        let l = DivisorClass::from_i64(2, 4, &[1]);
        let rep = check_k_very_ample(&l, &model, Variant::I, 1).unwrap();
        assert!(rep.first_failure().unwrap().label.starts_with("(2)"));
        let rep = check_k_very_ample(&l, &model, Variant::I, 2).unwrap();
        assert_eq!(rep.first_failure().unwrap().label, "(1) a+2 > m_i+2k");
        for v in Variant::ALL {
            assert_eq!(check_k_very_ample(&l, &model, v, 0).unwrap().verdict, Verdict::NotApplicable);
        }
    }

    #[test]
    fn kva_three_notes_left_side() {
        let rep = check_k_very_ample(&DivisorClass::uniform(20, 200, 2, 4), &vg(1, 4), Variant::III, 1).unwrap();
        assert!(rep.applicability_note.contains("2(a+2)e^2"));
    }

    #[test]
    fn hypotheses_give_not_applicable() {
        let l = DivisorClass::uniform(5, 50, 1, 4);
        for id in all_criteria(1) {
            let rep = check(&l, &BlowupModel::new(0, 4, Position::VeryGeneral), id).unwrap();
            assert_eq!(rep.verdict, Verdict::NotApplicable, "{id}");
            assert!(rep.conditions.is_empty());
        }
        let arb = BlowupModel::new(1, 4, Position::Arbitrary);
        for id in all_criteria(1) {
            assert_eq!(check(&l, &arb, id).unwrap().verdict, Verdict::NotApplicable);
        }
        let fib = BlowupModel::new(1, 4, Position::OffCeDistinctFibers);
        assert!(check_ampleness(&l, &fib, Variant::I).unwrap().is_satisfied());
        assert_eq!(check_ampleness(&l, &fib, Variant::II).unwrap().verdict, Verdict::NotApplicable);
        let small = DivisorClass::uniform(5, 50, 1, 2);
        assert_eq!(
            check_ampleness(&small, &vg(1, 2), Variant::III).unwrap().verdict,
            Verdict::NotApplicable
        );
        let three = DivisorClass::uniform(5, 50, 2, 3);
        assert_eq!(check_very_ample(&three, &vg(1, 3), Variant::III).unwrap().verdict, Verdict::NotApplicable);
        assert_ne!(check_global_generation(&three, &vg(1, 3), Variant::III).unwrap().verdict, Verdict::NotApplicable);
    }

    #[test]
    fn failed_inequality_is_not_applicability() {
        // m_i = 0 violates condition (1) of the ampleness criteria: a failed
        // inequality, not a violated hypothesis.
        let rep = check_ampleness(&DivisorClass::from_i64(3, 30, &[0, 1]), &vg(1, 2), Variant::I).unwrap();
        assert_eq!(rep.verdict, Verdict::NotSatisfied);
    }

    #[test]
    fn dimension_errors_propagate() {
        let l = DivisorClass::from_i64(3, 30, &[1]);
        for id in all_criteria(1) {
            assert!(check(&l, &vg(1, 2), id).is_err());
        }
    }

    #[test]
    fn short_names() {
        let names: Vec<String> = all_criteria(3).iter().map(|c| c.short_name()).collect();
        assert_eq!(
            names,
            ["ampI", "ampII", "ampIII", "ggI", "ggII", "ggIII", "vaI", "vaII", "vaIII", "kvaI", "kvaII", "kvaIII"]
        );
    }
}
