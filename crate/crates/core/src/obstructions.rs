//! Candidate curve classes and obstruction windows.
//!
//! The criteria in [`crate::criteria`] are sufficient conditions whose proofs
//! rule out specific curve classes. This module replays that case analysis
//! numerically: it builds the catalog of classes the proofs consider, checks
//! the positivity conditions they need, and looks for classes that land in
//! the Reider or Beltrametti–Francia–Sommese windows for the adjoint class
//! `N = L − K`.
//!
//! An empty result never certifies a positivity property. The catalog is
//! finite and the optional generic sweep is a bounded heuristic.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::criteria::lambda_of;
use crate::error::{LatticeError, ObstructionError};
use crate::lattice::{intersect, self_intersection, BlowupModel, DivisorClass, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `Eᵢ`
    Exceptional,
    /// `F`
    Fiber,
    /// `F − Eᵢ`
    FiberMinusE,
    /// `H`
    SectionH,
    /// `H + βF − Σ Eᵢ` over a subset of the points.
    SectionType,
    /// Produced by the bounded sweep.
    Generic,
}

/// A candidate class `αH + βF − Σ nᵢEᵢ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveClass {
    #[serde(with = "crate::int_serde::one")]
    pub alpha: BigInt,
    #[serde(with = "crate::int_serde::one")]
    pub beta: BigInt,
    #[serde(with = "crate::int_serde::seq")]
    pub n: Vec<BigInt>,
    pub provenance: Provenance,
}

impl CurveClass {
    pub fn divisor(&self) -> DivisorClass {
        DivisorClass {
            a: self.alpha.clone(),
            b: self.beta.clone(),
            m: self.n.clone(),
        }
    }

    fn from_divisor(d: DivisorClass, provenance: Provenance) -> Self {
        CurveClass {
            alpha: d.a,
            beta: d.b,
            n: d.m,
            provenance,
        }
    }

    /// Short human-readable name, e.g. `E3`, `F-E1`, `H+4F-(5 points)`.
    pub fn name(&self) -> String {
        match self.provenance {
            Provenance::Exceptional | Provenance::FiberMinusE => {
                let i = self.n.iter().position(|x| !x.is_zero()).map_or(0, |i| i + 1);
                if self.provenance == Provenance::Exceptional {
                    format!("E{i}")
                } else {
                    format!("F-E{i}")
                }
            }
            Provenance::Fiber => "F".into(),
            Provenance::SectionH => "H".into(),
            Provenance::SectionType | Provenance::Generic => {
                let pts: Vec<String> = self
                    .n
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| if x.is_one() { format!("E{}", i + 1) } else { format!("{}E{}", x, i + 1) })
                    .collect();
                let mut s = format!("{}H+{}F", self.alpha, self.beta);
                if !pts.is_empty() {
                    s.push_str(&format!("-({})", pts.join("+")));
                }
                s
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Window {
    ReiderGg,
    ReiderVa,
    Bfs { k: u32 },
    NecessaryPositivity,
}

/// A class whose intersection data meet a window condition. `curve` is
/// `None` for the self-intersection finding of [`necessary_positivity`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionFinding {
    pub curve: Option<CurveClass>,
    #[serde(with = "crate::int_serde::one")]
    pub pairing: BigInt,
    #[serde(with = "crate::int_serde::one")]
    pub self_int: BigInt,
    pub window: Window,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReiderMode {
    Gg,
    Va,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum ScanMode {
    Gg,
    Va,
    Bfs { k: u32 },
}

impl ScanMode {
    /// Lower bound on `N²` required before the window theorem applies.
    pub fn n_squared_floor(self) -> BigInt {
        match self {
            ScanMode::Gg => BigInt::from(5),
            ScanMode::Va => BigInt::from(10),
            ScanMode::Bfs { k } => BigInt::from(4) * BigInt::from(k) + 5,
        }
    }

    pub fn window(self) -> Window {
        match self {
            ScanMode::Gg => Window::ReiderGg,
            ScanMode::Va => Window::ReiderVa,
            ScanMode::Bfs { k } => Window::Bfs { k },
        }
    }

    pub fn contains(self, n_dot_d: &BigInt, d_sq: &BigInt) -> bool {
        match self {
            ScanMode::Gg => reider_window(n_dot_d, d_sq, ReiderMode::Gg),
            ScanMode::Va => reider_window(n_dot_d, d_sq, ReiderMode::Va),
            ScanMode::Bfs { k } => bfs_window(n_dot_d, d_sq, k),
        }
    }

    /// Smallest `D²` any class in the window can have, assuming `N·D ≥ 0`.
    fn min_self_int(self) -> BigInt {
        match self {
            ScanMode::Gg => BigInt::from(-1),
            ScanMode::Va => BigInt::from(-2),
            ScanMode::Bfs { k } => -(BigInt::from(k) + 1u32),
        }
    }
}

/// Indices of the `count` largest entries of `m`, ties broken by index.
fn largest_indices(m: &[BigInt], count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..m.len()).collect();
    idx.sort_by(|&i, &j| m[j].cmp(&m[i]).then(i.cmp(&j)));
    idx.truncate(count);
    idx.sort_unstable();
    idx
}

/// The named catalog of candidate classes for `model`.
///
/// Always `Eᵢ` and `F`; with points off `C_e` on distinct fibers also `F − Eᵢ`
/// and `H`; with very general points also `H + βF − Σ Eᵢ` for
/// `e ≤ β ≤ beta_max`, with `min(r, 2β − e + 1)` unit entries placed on the
/// largest multiplicities of `bundle`.
pub fn candidate_classes(model: &BlowupModel, bundle: &DivisorClass, beta_max: u64) -> Result<Vec<CurveClass>, LatticeError> {
    model.check(bundle)?;
    let r = model.r;
    let mut out = Vec::new();
    for i in 0..r {
        out.push(CurveClass::from_divisor(DivisorClass::exceptional(i, r), Provenance::Exceptional));
    }
    out.push(CurveClass::from_divisor(DivisorClass::fiber(r), Provenance::Fiber));
    if model.position.implies(Position::OffCeDistinctFibers) {
        for i in 0..r {
            let mut d = DivisorClass::fiber(r);
            d.m[i] = BigInt::one();
            out.push(CurveClass::from_divisor(d, Provenance::FiberMinusE));
        }
        out.push(CurveClass::from_divisor(DivisorClass::section(r), Provenance::SectionH));
    }
    if model.position.implies(Position::VeryGeneral) && model.e >= 1 {
        for beta in model.e..=beta_max {
            let units = ((2 * beta + 1 - model.e) as usize).min(r);
            let mut d = DivisorClass::section(r);
            d.b = BigInt::from(beta);
            for i in largest_indices(&bundle.m, units) {
                d.m[i] = BigInt::one();
            }
            out.push(CurveClass::from_divisor(d, Provenance::SectionType));
        }
    }
    Ok(out)
}

/// Catalog classes with `L·D ≤ 0`, plus a finding when `L² ≤ 0`.
pub fn necessary_positivity(
    l: &DivisorClass,
    model: &BlowupModel,
    catalog: &[CurveClass],
) -> Result<Vec<ObstructionFinding>, LatticeError> {
    let mut out = Vec::new();
    let l_sq = self_intersection(l, model)?;
    for c in catalog {
        let d = c.divisor();
        let pairing = intersect(l, &d, model)?;
        if !pairing.is_positive() {
            out.push(ObstructionFinding {
                curve: Some(c.clone()),
                pairing,
                self_int: self_intersection(&d, model)?,
                window: Window::NecessaryPositivity,
            });
        }
    }
    if !l_sq.is_positive() {
        out.push(ObstructionFinding {
            curve: None,
            pairing: l_sq.clone(),
            self_int: l_sq,
            window: Window::NecessaryPositivity,
        });
    }
    Ok(out)
}

/// Whether `(N·D, D²)` is one of the pairs Reider's theorem lists.
///
/// Global generation: `(0, −1)`, `(1, 0)`. Very ampleness: `(0, −1)`,
/// `(0, −2)`, `(1, 0)`, `(1, −1)`, `(2, 0)`.
pub fn reider_window(n_dot_d: &BigInt, d_sq: &BigInt, mode: ReiderMode) -> bool {
    let (Ok(nd), Ok(d2)) = (i64::try_from(n_dot_d), i64::try_from(d_sq)) else {
        return false;
    };
    match mode {
        ReiderMode::Gg => matches!((nd, d2), (0, -1) | (1, 0)),
        ReiderMode::Va => matches!((nd, d2), (0, -1) | (0, -2) | (1, 0) | (1, -1) | (2, 0)),
    }
}

/// `N·D − k − 1 ≤ D² ≤ N·D/2 < k + 1`, with the halving done by doubling.
pub fn bfs_window(n_dot_d: &BigInt, d_sq: &BigInt, k: u32) -> bool {
    let k1 = BigInt::from(k) + 1;
    let doubled = BigInt::from(2) * d_sq;
    n_dot_d - &k1 <= *d_sq && doubled <= *n_dot_d && *n_dot_d < BigInt::from(2) * k1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub mode: ScanMode,
    pub findings: Vec<ObstructionFinding>,
    #[serde(with = "crate::int_serde::one")]
    pub n_squared: BigInt,
    #[serde(with = "crate::int_serde::one")]
    pub n_squared_floor: BigInt,
    pub floor_met: bool,
    pub catalog_size: usize,
    pub generic_bound: u64,
    pub generic_examined: u64,
}

impl ScanReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty() && self.floor_met
    }
}

/// Finds catalog and swept classes whose `(N·D, D²)` lands in the window of
/// `mode`, and checks the `N²` floor (5, 10 or `4k + 5`).
///
/// `n` is meant to be the adjoint shift `L − K` of the bundle under test.
///
/// The sweep covers `αH + βF − Σ nᵢEᵢ` with `0 ≤ α, β ≤ generic_bound`,
/// `0 ≤ nᵢ ≤ α`, `β ≥ αe` when `α ≥ 1`, excluding the zero class and catalog
/// classes. With very general points the multiplicity budget is
/// `Σ nᵢ ≤ β + (λ − e)α` when `α > 1` or `β > λ`, and `Σ nᵢ ≤ 2β − e + 1`
/// otherwise. Classes whose self-intersection is below every value the
/// window admits (taking `N·D ≥ 0`, as for nef `N`) are pruned.
pub fn scan_obstructions(
    n: &DivisorClass,
    model: &BlowupModel,
    mode: ScanMode,
    beta_max: u64,
    generic_bound: u64,
) -> Result<ScanReport, LatticeError> {
    let n_squared = self_intersection(n, model)?;
    let catalog = candidate_classes(model, n, beta_max)?;
    let mut findings = Vec::new();
    for c in &catalog {
        let d = c.divisor();
        let nd = intersect(n, &d, model)?;
        let d2 = self_intersection(&d, model)?;
        if mode.contains(&nd, &d2) {
            findings.push(ObstructionFinding {
                curve: Some(c.clone()),
                pairing: nd,
                self_int: d2,
                window: mode.window(),
            });
        }
    }

    let known: HashSet<DivisorClass> = catalog.iter().map(CurveClass::divisor).collect();
    let mut sweep = Sweep {
        n,
        model,
        mode,
        known: &known,
        min_d2: mode.min_self_int(),
        findings: Vec::new(),
        examined: 0,
    };
    sweep.run(generic_bound);
    let examined = sweep.examined;
    findings.extend(sweep.findings);

    let floor = mode.n_squared_floor();
    Ok(ScanReport {
        mode,
        findings,
        floor_met: n_squared >= floor,
        n_squared,
        n_squared_floor: floor,
        catalog_size: catalog.len(),
        generic_bound,
        generic_examined: examined,
    })
}

struct Sweep<'a> {
    n: &'a DivisorClass,
    model: &'a BlowupModel,
    mode: ScanMode,
    known: &'a HashSet<DivisorClass>,
    min_d2: BigInt,
    findings: Vec<ObstructionFinding>,
    examined: u64,
}

impl Sweep<'_> {
    fn run(&mut self, bound: u64) {
        let e = self.model.e;
        let lambda = lambda_of(e, self.model.r as u64).lambda;
        for alpha in 0..=bound {
            for beta in 0..=bound {
                if alpha == 0 && beta == 0 {
                    continue;
                }
                if alpha >= 1 && beta < alpha * e {
                    continue;
                }
                let budget = if self.model.position.implies(Position::VeryGeneral) && alpha >= 1 {
                    if alpha > 1 || beta > lambda {
                        Some(beta + (lambda - e) * alpha)
                    } else {
                        Some(2 * beta + 1 - e)
                    }
                } else {
                    None
                };
                let (a, b) = (BigInt::from(alpha), BigInt::from(beta));
                let e_big = self.model.e_big();
                // αB + βA − αAe, before subtracting Σ Mᵢnᵢ
                let base_nd = &a * &self.n.b + &b * &self.n.a - &a * &self.n.a * &e_big;
                let base_d2 = BigInt::from(2) * &a * &b - &a * &a * &e_big;
                let mut ns = vec![0u64; self.model.r];
                self.descend(alpha, beta, budget, &base_nd, &base_d2, 0, &mut ns, 0, BigInt::zero(), BigInt::zero());
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &mut self,
        alpha: u64,
        beta: u64,
        budget: Option<u64>,
        base_nd: &BigInt,
        base_d2: &BigInt,
        i: usize,
        ns: &mut Vec<u64>,
        sum_n: u64,
        sum_sq: BigInt,
        sum_mn: BigInt,
    ) {
        if base_d2 - &sum_sq < self.min_d2 {
            return;
        }
        if i == ns.len() {
            self.examined += 1;
            let d2 = base_d2 - &sum_sq;
            let nd = base_nd - &sum_mn;
            if self.mode.contains(&nd, &d2) {
                let class = DivisorClass {
                    a: BigInt::from(alpha),
                    b: BigInt::from(beta),
                    m: ns.iter().map(|&x| BigInt::from(x)).collect(),
                };
                if !self.known.contains(&class) {
                    self.findings.push(ObstructionFinding {
                        curve: Some(CurveClass::from_divisor(class, Provenance::Generic)),
                        pairing: nd,
                        self_int: d2,
                        window: self.mode.window(),
                    });
                }
            }
            return;
        }
        for v in 0..=alpha {
            if budget.is_some_and(|cap| sum_n + v > cap) {
                break;
            }
            ns[i] = v;
            let vb = BigInt::from(v);
            let sq = &sum_sq + &vb * &vb;
            let mn = &sum_mn + &self.n.m[i] * &vb;
            self.descend(alpha, beta, budget, base_nd, base_d2, i + 1, ns, sum_n + v, sq, mn);
        }
        ns[i] = 0;
    }
}

/// Default `nmin`: the least nonzero entry of `n`.
pub fn nmin_nonzero(n: &[BigInt]) -> Option<BigInt> {
    n.iter().filter(|x| !x.is_zero()).min().cloned()
}

/// Alternative `nmin`: the least entry of `m`.
pub fn nmin_from_m(m: &[BigInt]) -> Option<BigInt> {
    m.iter().min().cloned()
}

/// `((r+3)/(r+2) + t)(Σ mᵢ²)(Σ nᵢ² − nmin) > (Σ mᵢnᵢ + t)²`, evaluated after
/// multiplying through by `r + 2`.
///
/// Requires `r ≥ 4`, all `mᵢ, nᵢ, t ≥ 1`, some `nᵢ ≥ 2` and `Σ mᵢ² ≥ t`.
pub fn lemma_general_inequality(m: &[BigInt], n: &[BigInt], t: &BigInt, nmin: &BigInt) -> Result<bool, ObstructionError> {
    let pre = |msg: &str| Err(ObstructionError::Precondition(msg.to_string()));
    if m.len() != n.len() {
        return pre("m and n differ in length");
    }
    let r = m.len();
    if r < 4 {
        return pre("needs r >= 4");
    }
    if m.iter().any(|x| !x.is_positive()) || !t.is_positive() {
        return pre("needs every m_i >= 1 and t >= 1");
    }
    if n.iter().any(|x| !x.is_positive()) {
        return pre("needs every n_i > 0");
    }
    if !n.iter().any(|x| *x >= BigInt::from(2)) {
        return pre("needs some n_i >= 2");
    }
    if !nmin.is_positive() {
        return pre("needs nmin >= 1");
    }
    let sum_m2: BigInt = m.iter().map(|x| x * x).sum();
    if sum_m2 < *t {
        return pre("needs sum m_i^2 >= t");
    }
    let sum_n2: BigInt = n.iter().map(|x| x * x).sum();
    let dot: BigInt = m.iter().zip(n).map(|(x, y)| x * y).sum();
    let r2 = BigInt::from(r) + 2;
    let lhs = (BigInt::from(r) + 3 + t * &r2) * sum_m2 * (sum_n2 - nmin);
    let rhs_root = dot + t;
    Ok(lhs > r2 * &rhs_root * &rhs_root)
}
