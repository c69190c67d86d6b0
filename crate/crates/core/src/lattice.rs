//! Picard lattice of the blow-up of a Hirzebruch surface at `r` points.
//!
//! A class is written `a·H + b·F − Σ mᵢ·Eᵢ`, where `H` and `F` are the
//! pullbacks of the negative section and of a fiber, and `Eᵢ` are the
//! exceptional curves. The multiplicity vector `m` is stored with the
//! subtraction already applied, so the canonical class has `m = [−1, …, −1]`.
//!
//! Intersection numbers: `H² = −e`, `H·F = 1`, `F² = 0`, `Eᵢ·Eⱼ = −δᵢⱼ`,
//! and `Eᵢ` is orthogonal to `H` and `F`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

/// Assumption on the blown-up points, ordered from weakest to strongest.
///
/// The flag is never verified; it selects which criteria apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Position {
    /// No assumption beyond the points being distinct.
    Arbitrary,
    /// No point on the negative section, no two points on one fiber.
    OffCeDistinctFibers,
    /// Points outside a countable union of proper closed subsets.
    VeryGeneral,
}

impl Position {
    /// Whether this assumption is at least as strong as `required`.
    pub fn implies(self, required: Position) -> bool {
        self >= required
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Position::Arbitrary => "arbitrary",
            Position::OffCeDistinctFibers => "off_ce_distinct_fibers",
            Position::VeryGeneral => "very_general",
        }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Position {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "arbitrary" => Ok(Position::Arbitrary),
            "off_ce_distinct_fibers" | "off_ce" | "fibered" => Ok(Position::OffCeDistinctFibers),
            "very_general" | "general" => Ok(Position::VeryGeneral),
            other => Err(LatticeError::UnknownPosition(other.to_string())),
        }
    }
}

/// The surface `𝔽_{e,r}` together with the position assumption on the points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlowupModel {
    pub e: u64,
    pub r: usize,
    pub position: Position,
}

impl BlowupModel {
    pub fn new(e: u64, r: usize, position: Position) -> Self {
        BlowupModel { e, r, position }
    }

    pub fn e_big(&self) -> BigInt {
        BigInt::from(self.e)
    }

    /// Errors unless `class` has exactly `r` multiplicities.
    pub fn check(&self, class: &DivisorClass) -> Result<(), LatticeError> {
        if class.m.len() == self.r {
            Ok(())
        } else {
            Err(LatticeError::DimensionMismatch {
                expected: self.r,
                found: class.m.len(),
            })
        }
    }
}

/// A class `a·H + b·F − Σ mᵢ·Eᵢ` on `𝔽_{e,r}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    #[serde(with = "crate::int_serde::one")]
    pub a: BigInt,
    #[serde(with = "crate::int_serde::one")]
    pub b: BigInt,
    #[serde(with = "crate::int_serde::seq")]
    pub m: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, m: Vec<BigInt>) -> Self {
        DivisorClass {
            a: a.into(),
            b: b.into(),
            m,
        }
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(a: i64, b: i64, m: &[i64]) -> Self {
        DivisorClass {
            a: a.into(),
            b: b.into(),
            m: m.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    /// The class with every multiplicity equal to `value`.
    pub fn uniform(a: impl Into<BigInt>, b: impl Into<BigInt>, value: impl Into<BigInt>, r: usize) -> Self {
        DivisorClass {
            a: a.into(),
            b: b.into(),
            m: vec![value.into(); r],
        }
    }

    pub fn zero(r: usize) -> Self {
        DivisorClass::from_i64(0, 0, &vec![0; r])
    }

    /// `H` on a surface with `r` exceptional curves.
    pub fn section(r: usize) -> Self {
        let mut c = DivisorClass::zero(r);
        c.a = BigInt::from(1);
        c
    }

    /// `F` on a surface with `r` exceptional curves.
    pub fn fiber(r: usize) -> Self {
        let mut c = DivisorClass::zero(r);
        c.b = BigInt::from(1);
        c
    }

    /// `Eᵢ` (zero-based index), stored as `m = −unit` since `Eᵢ = −(−Eᵢ)`.
    pub fn exceptional(i: usize, r: usize) -> Self {
        let mut c = DivisorClass::zero(r);
        c.m[i] = BigInt::from(-1);
        c
    }

    pub fn r(&self) -> usize {
        self.m.len()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.m.iter().all(Zero::is_zero)
    }

    fn zip_with(&self, other: &DivisorClass, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> DivisorClass {
        assert_eq!(self.m.len(), other.m.len(), "multiplicity vectors differ in length");
        DivisorClass {
            a: f(&self.a, &other.a),
            b: f(&self.b, &other.b),
            m: self.m.iter().zip(&other.m).map(|(x, y)| f(x, y)).collect(),
        }
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |x, y| x + y)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |x, y| x - y)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            a: -&self.a,
            b: -&self.b,
            m: self.m.iter().map(|x| -x).collect(),
        }
    }
}

impl fmt::Display for DivisorClass {
    /// Renders as `aH + bF − m₁E1 − …`, collapsing runs of equal multiplicities.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}H {} {}F", self.a, sign(&self.b), self.b.abs())?;
        let mut i = 0;
        while i < self.m.len() {
            let mut j = i;
            while j + 1 < self.m.len() && self.m[j + 1] == self.m[i] {
                j += 1;
            }
            let v = &self.m[i];
            let op = if v.is_negative() { "+" } else { "-" };
            if i == j {
                write!(f, " {} {}E{}", op, v.abs(), i + 1)?;
            } else {
                write!(f, " {} {}(E{}+…+E{})", op, v.abs(), i + 1, j + 1)?;
            }
            i = j + 1;
        }
        Ok(())
    }
}

fn sign(x: &BigInt) -> &'static str {
    if x.is_negative() {
        "-"
    } else {
        "+"
    }
}

/// A class `a·C_e + b·f` on the Hirzebruch surface itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BaseDivisorClass {
    #[serde(with = "crate::int_serde::one")]
    pub a: BigInt,
    #[serde(with = "crate::int_serde::one")]
    pub b: BigInt,
}

impl BaseDivisorClass {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>) -> Self {
        BaseDivisorClass { a: a.into(), b: b.into() }
    }

    /// `2ab − a²e`.
    pub fn self_intersection(&self, e: u64) -> BigInt {
        let e = BigInt::from(e);
        BigInt::from(2) * &self.a * &self.b - &self.a * &self.a * e
    }

    /// Ample on `𝔽_e` iff `a > 0` and `b > a·e`.
    pub fn is_ample(&self, e: u64) -> bool {
        self.a.is_positive() && self.b > &self.a * BigInt::from(e)
    }

    /// Pullback `π*l − Σ mᵢEᵢ` to `𝔽_{e,r}`.
    pub fn pullback(&self, m: Vec<BigInt>) -> DivisorClass {
        DivisorClass {
            a: self.a.clone(),
            b: self.b.clone(),
            m,
        }
    }
}

/// Intersection number `L·M = aβ + αb − aαe − Σ mᵢnᵢ`.
pub fn intersect(l: &DivisorClass, m: &DivisorClass, model: &BlowupModel) -> Result<BigInt, LatticeError> {
    model.check(l)?;
    model.check(m)?;
    let e = model.e_big();
    let exc: BigInt = l.m.iter().zip(&m.m).map(|(x, y)| x * y).sum();
    Ok(&l.a * &m.b + &m.a * &l.b - &l.a * &m.a * e - exc)
}

/// `L² = 2ab − a²e − Σ mᵢ²`, evaluated directly rather than through [`intersect`].
pub fn self_intersection(l: &DivisorClass, model: &BlowupModel) -> Result<BigInt, LatticeError> {
    model.check(l)?;
    let e = model.e_big();
    let squares: BigInt = l.m.iter().map(|x| x * x).sum();
    Ok(BigInt::from(2) * &l.a * &l.b - &l.a * &l.a * e - squares)
}

/// `K = −2H − (e+2)F + Σ Eᵢ`.
pub fn canonical_class(model: &BlowupModel) -> DivisorClass {
    DivisorClass {
        a: BigInt::from(-2),
        b: -(model.e_big() + 2u32),
        m: vec![BigInt::from(-1); model.r],
    }
}

/// `N = L − K = (a+2)H + (b+e+2)F − Σ (mᵢ+1)Eᵢ`, so that `L = K + N`.
pub fn adjoint_shift(l: &DivisorClass, model: &BlowupModel) -> Result<DivisorClass, LatticeError> {
    model.check(l)?;
    Ok(DivisorClass {
        a: &l.a + 2,
        b: &l.b + model.e_big() + 2,
        m: l.m.iter().map(|x| x + 1).collect(),
    })
}

/// `h⁰(𝔽_e, a·C_e + b·f) = (a+1)(b+1) − a(a+1)e/2`, valid for `a ≥ 0`, `b ≥ a·e`.
pub fn hzero_base(d: &BaseDivisorClass, e: u64) -> Result<BigInt, LatticeError> {
    let e_big = BigInt::from(e);
    if d.a.is_negative() || d.b < &d.a * &e_big {
        return Err(LatticeError::Domain {
            a: d.a.clone(),
            b: d.b.clone(),
            e,
        });
    }
    let a1: BigInt = &d.a + 1u32;
    let (half, rem) = (&d.a * &a1 * e_big).div_rem(&BigInt::from(2));
    debug_assert!(rem.is_zero());
    Ok(&a1 * (&d.b + 1) - half)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_bundle() -> DivisorClass {
        let mut m = vec![32; 10];
        m.extend([1, 1]);
        DivisorClass::from_i64(33, 331, &m)
    }

    #[test]
    fn basic_products() {
        let model = BlowupModel::new(2, 2, Position::Arbitrary);
        let h = DivisorClass::section(2);
        let f = DivisorClass::fiber(2);
        let e1 = DivisorClass::exceptional(0, 2);
        let e2 = DivisorClass::exceptional(1, 2);
        assert_eq!(intersect(&h, &h, &model).unwrap(), BigInt::from(-2));
        assert_eq!(intersect(&h, &f, &model).unwrap(), BigInt::from(1));
        assert_eq!(intersect(&f, &f, &model).unwrap(), BigInt::from(0));
        assert_eq!(intersect(&e1, &e2, &model).unwrap(), BigInt::from(0));
        assert_eq!(intersect(&e1, &e1, &model).unwrap(), BigInt::from(-1));
        assert_eq!(intersect(&e1, &h, &model).unwrap(), BigInt::from(0));
    }

    #[test]
    fn example_bundle_square() {
        let model = BlowupModel::new(10, 12, Position::VeryGeneral);
        let l = example_bundle();
        // 2·33·331 − 33²·10 − (10·32² + 2) = 21846 − 10890 − 10242
        assert_eq!(intersect(&l, &l, &model).unwrap(), BigInt::from(714));
        assert_eq!(self_intersection(&l, &model).unwrap(), BigInt::from(714));
    }

    #[test]
    fn dimension_mismatch() {
        let model = BlowupModel::new(1, 2, Position::Arbitrary);
        let l = DivisorClass::from_i64(1, 1, &[1, 1, 1]);
        let err = intersect(&l, &l, &model).unwrap_err();
        assert_eq!(err, LatticeError::DimensionMismatch { expected: 2, found: 3 });
        assert!(self_intersection(&l, &model).is_err());
        assert!(adjoint_shift(&l, &model).is_err());
    }

    #[test]
    fn canonical_squares() {
        let k = canonical_class(&BlowupModel::new(1, 0, Position::Arbitrary));
        assert_eq!(k, DivisorClass::from_i64(-2, -3, &[]));
        for (e, r, expect) in [(1, 0, 8), (2, 3, 5), (10, 12, -4)] {
            let model = BlowupModel::new(e, r, Position::Arbitrary);
            let k = canonical_class(&model);
            assert_eq!(self_intersection(&k, &model).unwrap(), BigInt::from(expect));
        }
    }

    #[test]
    fn self_intersection_examples() {
        let m3 = BlowupModel::new(3, 0, Position::Arbitrary);
        assert_eq!(self_intersection(&DivisorClass::from_i64(1, 0, &[]), &m3).unwrap(), BigInt::from(-3));
        assert_eq!(self_intersection(&DivisorClass::from_i64(0, 1, &[]), &m3).unwrap(), BigInt::from(0));
        let m2 = BlowupModel::new(2, 10, Position::VeryGeneral);
        let l = DivisorClass::uniform(2, 6, 1, 10);
        assert_eq!(self_intersection(&l, &m2).unwrap(), BigInt::from(6));
        assert_eq!(intersect(&l, &l, &m2).unwrap(), BigInt::from(6));
    }

    #[test]
    fn hzero_examples() {
        for e in 0..5 {
            assert_eq!(hzero_base(&BaseDivisorClass::new(0, 0), e).unwrap(), BigInt::from(1));
        }
        for e in 1..6u64 {
            for n in e..12 {
                let h = hzero_base(&BaseDivisorClass::new(1, n), e).unwrap();
                assert_eq!(h, BigInt::from(2 * n as i64 - e as i64 + 2));
            }
        }
        assert_eq!(hzero_base(&BaseDivisorClass::new(2, 3), 0).unwrap(), BigInt::from(12));
    }

    #[test]
    fn hzero_rejects_out_of_domain() {
        assert!(matches!(
            hzero_base(&BaseDivisorClass::new(-1, 5), 1),
            Err(LatticeError::Domain { .. })
        ));
        assert!(hzero_base(&BaseDivisorClass::new(2, 3), 2).is_err());
        assert!(hzero_base(&BaseDivisorClass::new(2, 4), 2).is_ok());
    }

    #[test]
    fn adjoint_examples() {
        let m1 = BlowupModel::new(1, 2, Position::Arbitrary);
        let n = adjoint_shift(&DivisorClass::zero(2), &m1).unwrap();
        assert_eq!(n, DivisorClass::from_i64(2, 3, &[1, 1]));

        let model = BlowupModel::new(10, 12, Position::VeryGeneral);
        let n = adjoint_shift(&example_bundle(), &model).unwrap();
        let mut m = vec![33; 10];
        m.extend([2, 2]);
        assert_eq!(n, DivisorClass::from_i64(35, 343, &m));

        let k = canonical_class(&model);
        assert!(adjoint_shift(&k, &model).unwrap().is_zero());
    }

    #[test]
    fn position_order() {
        assert!(Position::VeryGeneral.implies(Position::OffCeDistinctFibers));
        assert!(Position::OffCeDistinctFibers.implies(Position::Arbitrary));
        assert!(!Position::Arbitrary.implies(Position::VeryGeneral));
        assert_eq!("very-general".parse::<Position>().unwrap(), Position::VeryGeneral);
        assert!("sideways".parse::<Position>().is_err());
    }

    #[test]
    fn display_collapses_runs() {
        assert_eq!(example_bundle().to_string(), "33H + 331F - 32(E1+…+E10) - 1(E11+…+E12)");
    }
}
