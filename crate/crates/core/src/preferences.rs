//! Risk attitudes, simple lotteries and Pratt's comparison of risk aversion.
//!
//! `u` is less risk-averse than `v` when every sure alternative that `v`
//! weakly (strictly) prefers to a lottery is also weakly (strictly)
//! preferred by `u`. On a finite set this is equivalent to ordinal
//! equivalence plus a cross-ratio inequality on every triple, and to
//! `u = φ ∘ v` for an increasing convex `φ`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::numeric::{PiecewiseLinearFn, SetDescriptor};
use crate::sampling;

/// Tolerance on the total probability of a [`SimpleLottery`].
pub const PROB_TOL: f64 = 1e-12;

#[derive(Serialize, Deserialize)]
struct AttitudeRepr {
    alternatives: Vec<f64>,
    values: Vec<f64>,
}

/// A utility value for each of finitely many alternatives, sorted by
/// position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AttitudeRepr", into = "AttitudeRepr")]
pub struct RiskAttitude {
    alternatives: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<AttitudeRepr> for RiskAttitude {
    type Error = Error;

    fn try_from(r: AttitudeRepr) -> Result<Self> {
        RiskAttitude::new(r.alternatives, r.values)
    }
}

impl From<RiskAttitude> for AttitudeRepr {
    fn from(r: RiskAttitude) -> Self {
        AttitudeRepr {
            alternatives: r.alternatives,
            values: r.values,
        }
    }
}

impl RiskAttitude {
    /// Pairs are sorted by alternative; duplicates are rejected.
    pub fn new(alternatives: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if alternatives.is_empty() {
            return Err(invalid("a risk attitude needs at least one alternative"));
        }
        if alternatives.len() != values.len() {
            return Err(invalid(format!(
                "{} alternatives but {} values",
                alternatives.len(),
                values.len()
            )));
        }
        if alternatives.iter().chain(&values).any(|x| !x.is_finite()) {
            return Err(invalid("alternatives and values must be finite"));
        }
        let mut pairs: Vec<(f64, f64)> = alternatives.into_iter().zip(values).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("alternatives must be distinct"));
        }
        let (alternatives, values) = pairs.into_iter().unzip();
        Ok(RiskAttitude {
            alternatives,
            values,
        })
    }

    /// `u(x) = x` on the given alternatives.
    pub fn identity(alternatives: &[f64]) -> Result<Self> {
        Self::new(alternatives.to_vec(), alternatives.to_vec())
    }

    pub fn alternatives(&self) -> &[f64] {
        &self.alternatives
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn index_of(&self, x: f64) -> Result<usize> {
        self.alternatives
            .binary_search_by(|a| a.total_cmp(&x))
            .map_err(|_| domain(format!("{x} is not an alternative")))
    }

    pub fn value_at(&self, x: f64) -> Result<f64> {
        Ok(self.values[self.index_of(x)?])
    }

    /// Same alternatives, values `f(u(x))`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.alternatives.clone(),
            self.values.iter().map(|&y| f(y)).collect(),
        )
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_constant(&self) -> bool {
        self.min_value() == self.max_value()
    }

    /// Sorted distinct values.
    pub fn distinct_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    /// The image `u(X)`.
    pub fn image(&self) -> SetDescriptor {
        SetDescriptor::from_points(&self.values).expect("values are finite")
    }

    pub(crate) fn same_alternatives(&self, other: &RiskAttitude) -> Result<()> {
        if self.alternatives != other.alternatives {
            return Err(domain(
                "risk attitudes are defined on different alternatives",
            ));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct LotteryEntry {
    at: f64,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct LotteryRepr {
    support: Vec<LotteryEntry>,
}

/// A finitely supported probability mass function over alternatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LotteryRepr", into = "LotteryRepr")]
pub struct SimpleLottery {
    support: Vec<(f64, f64)>,
}

impl TryFrom<LotteryRepr> for SimpleLottery {
    type Error = Error;

    fn try_from(r: LotteryRepr) -> Result<Self> {
        SimpleLottery::new(r.support.into_iter().map(|e| (e.at, e.p)).collect())
    }
}

impl From<SimpleLottery> for LotteryRepr {
    fn from(l: SimpleLottery) -> Self {
        LotteryRepr {
            support: l
                .support
                .into_iter()
                .map(|(at, p)| LotteryEntry { at, p })
                .collect(),
        }
    }
}

impl SimpleLottery {
    /// Probabilities must be positive and sum to one within [`PROB_TOL`].
    pub fn new(mut support: Vec<(f64, f64)>) -> Result<Self> {
        if support.is_empty() {
            return Err(invalid("a lottery needs a non-empty support"));
        }
        if support
            .iter()
            .any(|&(x, p)| !x.is_finite() || !(p > 0.0) || !p.is_finite())
        {
            return Err(invalid("lottery probabilities must be positive and finite"));
        }
        support.sort_by(|a, b| a.0.total_cmp(&b.0));
        if support.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("lottery support points must be distinct"));
        }
        let total: f64 = support.iter().map(|s| s.1).sum();
        if (total - 1.0).abs() > PROB_TOL {
            return Err(invalid(format!("lottery probabilities sum to {total}")));
        }
        Ok(SimpleLottery { support })
    }

    pub fn degenerate(x: f64) -> Self {
        SimpleLottery {
            support: vec![(x, 1.0)],
        }
    }

    /// `p` on `x`, `1 - p` on `z`, for `0 < p < 1`.
    pub fn two_point(x: f64, p: f64, z: f64) -> Result<Self> {
        Self::new(vec![(x, p), (z, 1.0 - p)])
    }

    pub fn support(&self) -> &[(f64, f64)] {
        &self.support
    }
}

/// `∫ u dp`.
pub fn expected_utility(u: &RiskAttitude, p: &SimpleLottery) -> Result<f64> {
    p.support.iter().map(|&(x, q)| Ok(q * u.value_at(x)?)).sum()
}

/// Why `u` fails to be less risk-averse than `v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrattViolation {
    /// `u` and `v` order `x` and `y` differently.
    Ordinal { x: f64, y: f64 },
    /// `u(x) < u(y) < u(z)` but `[u(z)-u(y)]/[u(y)-u(x)]` falls short of the
    /// same ratio for `v`.
    CrossRatio { x: f64, y: f64, z: f64 },
}

impl fmt::Display for PrattViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrattViolation::Ordinal { x, y } => {
                write!(f, "alternatives {x} and {y} are ranked differently")
            }
            PrattViolation::CrossRatio { x, y, z } => {
                write!(f, "cross-ratio fails on the triple ({x}, {y}, {z})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossRatioReport {
    pub holds: bool,
    pub violation: Option<PrattViolation>,
}

fn sign_with_tol(d: f64, tol: f64) -> i8 {
    if d > tol {
        1
    } else if d < -tol {
        -1
    } else {
        0
    }
}

/// Ordinal equivalence plus the cross-ratio inequality on every triple,
/// reporting the first violation found.
pub fn crossratio_report(u: &RiskAttitude, v: &RiskAttitude, tol: f64) -> Result<CrossRatioReport> {
    u.same_alternatives(v)?;
    let xs = u.alternatives();
    let (uv, vv) = (u.values(), v.values());
    let n = xs.len();
    let fail = |violation| {
        Ok(CrossRatioReport {
            holds: false,
            violation: Some(violation),
        })
    };

    for i in 0..n {
        for j in i + 1..n {
            if sign_with_tol(uv[i] - uv[j], tol) != sign_with_tol(vv[i] - vv[j], tol) {
                return fail(PrattViolation::Ordinal { x: xs[i], y: xs[j] });
            }
        }
    }

    // One representative per tie class, sorted by u.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| uv[a].total_cmp(&uv[b]));
    let mut reps: Vec<usize> = Vec::with_capacity(n);
    for i in order {
        match reps.last() {
            Some(&last) if uv[i] - uv[last] <= tol => {}
            _ => reps.push(i),
        }
    }
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            for c in b + 1..reps.len() {
                let (x, y, z) = (reps[a], reps[b], reps[c]);
                let ru = (uv[z] - uv[y]) / (uv[y] - uv[x]);
                let rv = (vv[z] - vv[y]) / (vv[y] - vv[x]);
                if ru < rv - tol {
                    return fail(PrattViolation::CrossRatio {
                        x: xs[x],
                        y: xs[y],
                        z: xs[z],
                    });
                }
            }
        }
    }
    Ok(CrossRatioReport {
        holds: true,
        violation: None,
    })
}

/// Whether `u` is less risk-averse than `v`, decided by ordinal
/// equivalence and the cross-ratio inequality.
pub fn less_risk_averse_crossratio(u: &RiskAttitude, v: &RiskAttitude, tol: f64) -> Result<bool> {
    Ok(crossratio_report(u, v, tol)?.holds)
}

/// A lottery `p` and sure alternative `x` on which the lottery comparison
/// of `u` does not carry over to `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LotteryWitness {
    pub lottery: SimpleLottery,
    pub x: f64,
    /// `u(x) - ∫u dp`.
    pub u_gap: f64,
    /// `v(x) - ∫v dp`.
    pub v_gap: f64,
    /// Whether the strict half of the implication failed.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub holds: bool,
    pub witness: Option<LotteryWitness>,
    pub lotteries_checked: usize,
}

/// Checks the lottery implication for `p` against every sure alternative.
pub fn lottery_witness(
    u: &RiskAttitude,
    v: &RiskAttitude,
    p: &SimpleLottery,
    tol: f64,
) -> Result<Option<LotteryWitness>> {
    let eu = expected_utility(u, p)?;
    let ev = expected_utility(v, p)?;
    for (i, &x) in u.alternatives().iter().enumerate() {
        let u_gap = u.values()[i] - eu;
        let v_gap = v.values()[i] - ev;
        let weak_fails = u_gap >= -tol && v_gap < -tol;
        let strict_fails = u_gap > tol && v_gap <= tol;
        if weak_fails || strict_fails {
            return Ok(Some(LotteryWitness {
                lottery: p.clone(),
                x,
                u_gap,
                v_gap,
                strict: !weak_fails,
            }));
        }
    }
    Ok(None)
}

/// Brute-force lottery check that `u` is less risk-averse than `v`.
///
/// Lotteries are tried in a fixed order: degenerate ones; for every triple
/// `u(x) < u(y) < u(z)` the two-point lottery on `{x, z}` whose expected
/// `u` equals `u(y)`; all two-point lotteries with probabilities `j/64`;
/// then `trials` random lotteries on at most four points. For each, the
/// weak implication `u(x) ≥ ∫u dp ⇒ v(x) ≥ ∫v dp` and the strict one are
/// checked with tolerance `tol`. Stops at the first witness.
pub fn less_risk_averse_oracle(
    u: &RiskAttitude,
    v: &RiskAttitude,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<OracleReport> {
    u.same_alternatives(v)?;
    let xs = u.alternatives();
    let uv = u.values();
    let n = xs.len();
    let mut checked = 0usize;
    let mut check = |p: &SimpleLottery| -> Result<Option<OracleReport>> {
        checked += 1;
        Ok(lottery_witness(u, v, p, tol)?.map(|w| OracleReport {
            holds: false,
            witness: Some(w),
            lotteries_checked: checked,
        }))
    };

    for &x in xs {
        if let Some(r) = check(&SimpleLottery::degenerate(x))? {
            return Ok(r);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| uv[a].total_cmp(&uv[b]));
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let (x, y, z) = (order[a], order[b], order[c]);
                if !(uv[x] < uv[y] && uv[y] < uv[z]) {
                    continue;
                }
                let p = (uv[z] - uv[y]) / (uv[z] - uv[x]);
                if let Ok(l) = SimpleLottery::two_point(xs[x], p, xs[z]) {
                    if let Some(r) = check(&l)? {
                        return Ok(r);
                    }
                }
            }
        }
    }

    for i in 0..n {
        for k in i + 1..n {
            for j in 1..64 {
                let l = SimpleLottery::two_point(xs[i], f64::from(j) / 64.0, xs[k])?;
                if let Some(r) = check(&l)? {
                    return Ok(r);
                }
            }
        }
    }

    let mut rng = sampling::rng(seed);
    for _ in 0..trials {
        let l = sampling::random_lottery(&mut rng, xs, 4);
        if let Some(r) = check(&l)? {
            return Ok(r);
        }
    }

    Ok(OracleReport {
        holds: true,
        witness: None,
        lotteries_checked: checked,
    })
}

/// The pointwise greatest increasing convex `φ` on `co(v(X))` with
/// `u = φ ∘ v`: it interpolates `u` against `v` and is affine between
/// consecutive values of `v`.
pub fn construct_phi_greatest(
    u: &RiskAttitude,
    v: &RiskAttitude,
    tol: f64,
) -> Result<PiecewiseLinearFn> {
    u.same_alternatives(v)?;
    if v.is_constant() {
        return Err(domain("v is constant, so co(v(X)) is a single point"));
    }
    let mut pairs: Vec<(f64, f64)> = v
        .values()
        .iter()
        .copied()
        .zip(u.values().iter().copied())
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut knots: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        match knots.last() {
            Some(&(lx, ly)) if lx == x => {
                if (y - ly).abs() > tol {
                    return Err(domain(format!(
                        "v takes the value {x} twice with different u values, so u is not a function of v"
                    )));
                }
            }
            _ => knots.push((x, y)),
        }
    }
    let report = crossratio_report(u, v, tol)?;
    if let Some(violation) = report.violation {
        return Err(Error::NotLessRiskAverse(violation));
    }
    PiecewiseLinearFn::new(knots)
}

/// Central-difference estimate of `u''/u'` at interior points of a uniform
/// grid with spacing `h`.
pub fn arrow_pratt_index(u: &RiskAttitude, h: f64) -> Result<Vec<(f64, f64)>> {
    let xs = u.alternatives();
    if !(h > 0.0) {
        return Err(invalid("grid spacing must be positive"));
    }
    if xs.len() < 3 {
        return Err(domain("need at least three grid points"));
    }
    if xs.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-6 * h) {
        return Err(domain(format!(
            "alternatives do not form a uniform grid with spacing {h}"
        )));
    }
    let y = u.values();
    let mut out = Vec::with_capacity(xs.len() - 2);
    for i in 1..xs.len() - 1 {
        let d1 = (y[i + 1] - y[i - 1]) / (2.0 * h);
        if !(d1 > 0.0) {
            return Err(domain(format!("u is not increasing near {}", xs[i])));
        }
        let d2 = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
        out.push((xs[i], d2 / d1));
    }
    Ok(out)
}
