//! Independent reference implementation of the twelve criteria.
//!
//! Written straight from the printed inequalities with `i128` arithmetic and
//! `Ratio<i128>` for the fractional coefficients. Subset quantifiers are
//! evaluated by enumerating every subset, never by sorting.

#![allow(dead_code)]

use hzpos::{Family, Position, Variant, Verdict};
use num_rational::Ratio;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub e: u64,
    pub r: usize,
    pub position: Position,
    pub a: i128,
    pub b: i128,
    pub m: Vec<i128>,
}

impl Bundle {
    pub fn class(&self) -> hzpos::DivisorClass {
        hzpos::DivisorClass::new(self.a, self.b, self.m.iter().map(|&x| x.into()).collect())
    }

    pub fn model(&self) -> hzpos::BlowupModel {
        hzpos::BlowupModel::new(self.e, self.r, self.position)
    }
}

/// Least `λ ≥ e` with `2λ − e + 2 > r`, by linear search.
pub fn lambda(e: u64, r: usize) -> u64 {
    let mut l = e;
    while 2 * l + 2 <= r as u64 + e {
        l += 1;
    }
    l
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rel {
    Gt,
    Ge,
}

fn holds<T: PartialOrd>(lhs: T, rel: Rel, rhs: T) -> bool {
    match rel {
        Rel::Gt => lhs > rhs,
        Rel::Ge => lhs >= rhs,
    }
}

/// Every subset of `0..r` of exactly `size` elements, as bitmasks.
fn subsets(r: usize, size: usize) -> impl Iterator<Item = u32> {
    (0u32..(1u32 << r)).filter(move |mask| mask.count_ones() as usize == size)
}

fn subset_sum(vals: &[i128], mask: u32, f: impl Fn(i128) -> i128) -> i128 {
    vals.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, &v)| f(v))
        .sum()
}

/// The family-specific constants once everything is written in terms of
/// `A`, `B` and the shifted multiplicities `t`.
struct Shape {
    big_a: i128,
    big_b: i128,
    /// Shifted multiplicities summed in conditions (2)/(3): `m` or `m + 1`.
    t: Vec<i128>,
    /// Chain `A > m + chain_shift > chain_lower`.
    chain_shift: i128,
    chain_lower: i128,
    chain_lower_iii: i128,
    /// Variant I: `B > A·e + i2`, `B rel Σt + i3`.
    i2: i128,
    i3: (Rel, i128),
    /// Variant II: `B + (i−e)A > Σ_{kᵢ} t + ii2`, `B rel A·λ' + ii3` with `λ' = λ + ii3_lambda_shift`.
    ii2: i128,
    ii3: (Rel, i128, u64),
    /// Variant III: `B > A·e + iii2`; quadratic conditions.
    iii2: i128,
    quad: i128,
    square: i128,
    c3: (Rel, Box<dyn Fn(i128) -> Ratio<i128>>),
    c4: (Rel, Box<dyn Fn(i128) -> Ratio<i128>>),
    iii_min_r: usize,
    i_position: Position,
}

fn shape(family: Family, k: u32, l: &Bundle) -> Shape {
    let e = l.e as i128;
    let (a, b) = (l.a, l.b);
    let k = k as i128;
    let r3 = |n: i128| Box::new(move |s: i128| Ratio::new(n, s + 2)) as Box<dyn Fn(i128) -> Ratio<i128>>;
    match family {
        Family::Ample => Shape {
            big_a: a,
            big_b: b,
            t: l.m.clone(),
            chain_shift: 0,
            chain_lower: 0,
            chain_lower_iii: 0,
            i2: 0,
            i3: (Rel::Gt, 0),
            ii2: 0,
            ii3: (Rel::Gt, 0, 0),
            iii2: 0,
            quad: b * b - e * (2 * a * b - a * a * e),
            square: 2 * a * b - a * a * e,
            c3: (Rel::Ge, r3(3)),
            c4: (Rel::Gt, Box::new(|s| Ratio::new(s + 3, s + 2))),
            iii_min_r: 3,
            i_position: Position::OffCeDistinctFibers,
        },
        _ => {
            let big_a = a + 2;
            let big_b = b + e + 2;
            let t: Vec<i128> = l.m.iter().map(|x| x + 1).collect();
            let quad = big_b * big_b - e * (2 * big_a * big_b - big_a * big_a * e);
            let square = 2 * big_a * big_b - big_a * big_a * e;
            match family {
                Family::GloballyGenerated => Shape {
                    big_a,
                    big_b,
                    t,
                    chain_shift: 1,
                    chain_lower: 0,
                    chain_lower_iii: 2,
                    i2: 0,
                    i3: (Rel::Gt, 0),
                    ii2: 1,
                    ii3: (Rel::Ge, 1, 0),
                    iii2: 0,
                    quad,
                    square,
                    c3: (Rel::Ge, r3(3)),
                    c4: (Rel::Gt, Box::new(|s| Ratio::new(s + 3, s + 2))),
                    iii_min_r: 3,
                    i_position: Position::OffCeDistinctFibers,
                },
                Family::VeryAmple => Shape {
                    big_a,
                    big_b,
                    t,
                    chain_shift: 2,
                    chain_lower: 2,
                    chain_lower_iii: 2,
                    i2: 1,
                    i3: (Rel::Gt, 2),
                    ii2: 2,
                    ii3: (Rel::Gt, 1, 0),
                    iii2: 1,
                    quad,
                    square,
                    c3: (Rel::Ge, Box::new(|s| Ratio::new(3, s + 2) + 2)),
                    c4: (Rel::Gt, Box::new(|s| Ratio::new(s + 3, s + 2) + 2)),
                    iii_min_r: 4,
                    i_position: Position::VeryGeneral,
                },
                Family::KVeryAmple => Shape {
                    big_a,
                    big_b,
                    t,
                    chain_shift: 2 * k,
                    chain_lower: 3 * k - 1,
                    chain_lower_iii: 3 * k - 1,
                    i2: 2 * k + 1,
                    i3: (Rel::Ge, 2 * k),
                    ii2: 2 * k + 1,
                    ii3: (Rel::Gt, 0, 1),
                    iii2: 2 * k + 1,
                    // (b+e+2)² − (a+2)e[2(b+e+2) − ae], as printed
                    quad: big_b * big_b - big_a * e * (2 * big_b - a * e),
                    square,
                    c3: (Rel::Ge, Box::new(move |s| Ratio::new(3, s + 2) + (2 * k + 1))),
                    c4: (Rel::Ge, Box::new(move |s| Ratio::new(s + 3, s + 2) + (2 * k + 1))),
                    iii_min_r: 4,
                    i_position: Position::VeryGeneral,
                },
                Family::Ample => unreachable!(),
            }
        }
    }
}

/// Verdict of criterion `(family, variant)` (with `k` for the k-family).
pub fn verdict(family: Family, variant: Variant, k: u32, l: &Bundle) -> Verdict {
    if l.e == 0 || (family == Family::KVeryAmple && k == 0) {
        return Verdict::NotApplicable;
    }
    let sh = shape(family, k, l);
    let (required, min_r) = match variant {
        Variant::I => (sh.i_position, 1),
        Variant::II => (Position::VeryGeneral, 1),
        Variant::III => (Position::VeryGeneral, sh.iii_min_r),
    };
    if l.position < required || l.r < min_r {
        return Verdict::NotApplicable;
    }
    let e = l.e as i128;
    let lower = if variant == Variant::III { sh.chain_lower_iii } else { sh.chain_lower };
    let chain = l
        .m
        .iter()
        .all(|&mi| sh.big_a > mi + sh.chain_shift && mi + sh.chain_shift > lower);

    let ok = chain
        && match variant {
            Variant::I => {
                let sum: i128 = sh.t.iter().sum();
                sh.big_b > sh.big_a * e + sh.i2 && holds(sh.big_b, sh.i3.0, sum + sh.i3.1)
            }
            Variant::II => {
                let lam = lambda(l.e, l.r);
                let two = (l.e..=lam).all(|i| {
                    let ki = (2 * i + 1 - l.e) as usize;
                    let lhs = sh.big_b + (i as i128 - e) * sh.big_a;
                    subsets(l.r, ki.min(l.r)).all(|mask| lhs > subset_sum(&sh.t, mask, |v| v) + sh.ii2)
                });
                let (rel, add, shift) = sh.ii3;
                two && holds(sh.big_b, rel, sh.big_a * (lam + shift) as i128 + add)
            }
            Variant::III => {
                sh.big_b > sh.big_a * e + sh.iii2
                    && (2..=l.r).all(|s| {
                        let (c3, c4) = ((sh.c3.1)(s as i128), (sh.c4.1)(s as i128));
                        subsets(l.r, s).all(|mask| {
                            let sq = Ratio::from_integer(subset_sum(&sh.t, mask, |v| v * v));
                            holds(Ratio::from_integer(sh.quad), sh.c3.0, c3 * sq)
                                && holds(Ratio::from_integer(sh.square), sh.c4.0, c4 * sq)
                        })
                    })
            }
        };
    if ok {
        Verdict::Satisfied
    } else {
        Verdict::NotSatisfied
    }
}

/// `h⁰(aC + bf)` as the number of monomials `x^i y^j` with `0 ≤ i ≤ a` and
/// `0 ≤ j ≤ b − ie`.
pub fn monomial_count(a: i64, b: i64, e: i64) -> i64 {
    (0..=a).map(|i| (b - i * e + 1).max(0)).sum()
}

/// Direct evaluation of
/// `((r+3)/(r+2) + t)(Σ mᵢ²)(Σ nᵢ² − nmin) > (Σ mᵢnᵢ + t)²` in rationals.
pub fn lemma_holds(m: &[i64], n: &[i64], t: i64, nmin: i64) -> bool {
    let r = m.len() as i128;
    let sm: i128 = m.iter().map(|&x| (x as i128).pow(2)).sum();
    let sn: i128 = n.iter().map(|&x| (x as i128).pow(2)).sum();
    let dot: i128 = m.iter().zip(n).map(|(&x, &y)| x as i128 * y as i128).sum();
    let coef = Ratio::new(r + 3, r + 2) + t as i128;
    coef * sm * (sn - nmin as i128) > Ratio::from_integer((dot + t as i128).pow(2))
}
