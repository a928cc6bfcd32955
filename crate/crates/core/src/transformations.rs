//! Lottery-replacement kernels and their outside-option decomposition.
//!
//! A kernel replaces each alternative `x` with a lottery `G_x` over the
//! same finite set. It reduces risk aversion for every strictly increasing
//! `v` exactly when it has the form
//!
//! ```text
//! G_x = λ G 1_{[x,∞)} + (1-λ) H      for x below the top alternative,
//! G_x = λ G 1_{[x,∞)} + (1-λ) H★     at the top alternative,
//! ```
//!
//! with `H★` first-order dominating `H`. [`decompose`] extracts
//! `(λ, G, H, H★)` or names the structural property that fails;
//! [`check_risk_reduction`] samples `v` to look for a Pratt violation
//! directly, and [`directed_violation_search`] turns a structural failure
//! into an explicit violating `v`.
//!
//! Finite `X` always contains its top element, and the split of mass at
//! the second-highest alternative between `G` and `H` is then not
//! identified. [`decompose`] picks the largest admissible `λ`, which puts
//! no mass of `H` at the top.

use serde::{Deserialize, Serialize};

use crate::distributions::{fosd_leq, ExtendedCdf};
use crate::error::{domain, invalid, Error, Result};
use crate::preferences::{
    crossratio_report, less_risk_averse_oracle, LotteryWitness, PrattViolation, RiskAttitude,
};
use crate::sampling;

#[derive(Serialize, Deserialize)]
struct KernelEntry {
    at: f64,
    cdf: ExtendedCdf,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelRepr {
    #[serde(rename = "X")]
    xs: Vec<f64>,
    kernels: Vec<KernelEntry>,
}

/// A family `(G_x)` of CDFs concentrated on a finite set `X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KernelRepr", into = "KernelRepr")]
pub struct LotteryKernel {
    xs: Vec<f64>,
    cdfs: Vec<ExtendedCdf>,
}

impl TryFrom<KernelRepr> for LotteryKernel {
    type Error = Error;

    fn try_from(r: KernelRepr) -> Result<Self> {
        LotteryKernel::new(r.xs, r.kernels.into_iter().map(|k| (k.at, k.cdf)).collect())
    }
}

impl From<LotteryKernel> for KernelRepr {
    fn from(k: LotteryKernel) -> Self {
        KernelRepr {
            xs: k.xs.clone(),
            kernels: k
                .xs
                .into_iter()
                .zip(k.cdfs)
                .map(|(at, cdf)| KernelEntry { at, cdf })
                .collect(),
        }
    }
}

impl LotteryKernel {
    /// `X` needs at least two distinct points; each must carry exactly one
    /// CDF without mass at `-∞`, concentrated on `X`.
    pub fn new(mut xs: Vec<f64>, entries: Vec<(f64, ExtendedCdf)>) -> Result<Self> {
        xs.sort_by(f64::total_cmp);
        if xs.len() < 2 || xs.windows(2).any(|w| w[0] == w[1]) || xs.iter().any(|x| !x.is_finite())
        {
            return Err(invalid(
                "a kernel needs at least two distinct finite alternatives",
            ));
        }
        let mut cdfs: Vec<Option<ExtendedCdf>> = vec![None; xs.len()];
        let set = crate::numeric::SetDescriptor::from_points(&xs)?;
        for (at, cdf) in entries {
            let i = xs
                .binary_search_by(|x| x.total_cmp(&at))
                .map_err(|_| invalid(format!("kernel entry at {at} is not in X")))?;
            if cdfs[i].is_some() {
                return Err(invalid(format!("two kernel entries at {at}")));
            }
            if !cdf.concentrated_on(&set, false) {
                return Err(invalid(format!("G_{at} is not concentrated on X")));
            }
            cdfs[i] = Some(cdf);
        }
        let cdfs = cdfs
            .into_iter()
            .zip(&xs)
            .map(|(c, x)| c.ok_or_else(|| invalid(format!("no kernel entry at {x}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(LotteryKernel { xs, cdfs })
    }

    /// `G_x` the law of `x` itself.
    pub fn identity(xs: Vec<f64>) -> Result<Self> {
        let entries = xs
            .iter()
            .map(|&x| Ok((x, ExtendedCdf::degenerate(x)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(xs, entries)
    }

    pub fn alternatives(&self) -> &[f64] {
        &self.xs
    }

    pub fn cdfs(&self) -> &[ExtendedCdf] {
        &self.cdfs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// `m(x) = ∫ v dG_x`.
    pub fn effective(&self, v: &RiskAttitude) -> Result<RiskAttitude> {
        if v.alternatives() != self.xs.as_slice() {
            return Err(domain("v is not defined on the kernel's alternatives"));
        }
        let m = self
            .cdfs
            .iter()
            .map(|g| {
                g.atoms()
                    .iter()
                    .map(|a| Ok(a.mass * v.value_at(a.at)?))
                    .sum()
            })
            .collect::<Result<Vec<f64>>>()?;
        RiskAttitude::new(self.xs.clone(), m)
    }

    // table[i][j] = G_{x_i}(x_j)
    fn table(&self) -> Vec<Vec<f64>> {
        self.cdfs
            .iter()
            .map(|g| self.xs.iter().map(|&y| g.cdf(y)).collect())
            .collect()
    }
}

/// `(λ, G, H, H★)` with `G_x = λ G 1_{[x,∞)} + (1-λ) H` below the top
/// alternative and `H★` in place of `H` at the top.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub lambda: f64,
    #[serde(rename = "G")]
    pub g: ExtendedCdf,
    #[serde(rename = "H")]
    pub h: ExtendedCdf,
    /// Absent when the top alternative uses `H` as well.
    #[serde(rename = "H_star")]
    pub h_star: Option<ExtendedCdf>,
    /// Set when `λ = 1`, where `H` plays no role and is fixed at the law of
    /// the smallest alternative.
    #[serde(default)]
    pub h_arbitrary: bool,
}

impl Decomposition {
    fn validate(&self, xs: &[f64]) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(invalid(format!(
                "lambda must lie in (0, 1], got {}",
                self.lambda
            )));
        }
        let set = crate::numeric::SetDescriptor::from_points(xs)?;
        if !self.g.concentrated_on(&set, true) {
            return Err(invalid("G is not concentrated on X and -∞"));
        }
        if !(self.g.cdf(xs[0]) > 0.0) {
            return Err(invalid("G vanishes just above inf X"));
        }
        if !self.h.concentrated_on(&set, false) {
            return Err(invalid("H is not a CDF concentrated on X"));
        }
        if let Some(hs) = &self.h_star {
            if !hs.concentrated_on(&set, false) {
                return Err(invalid("H★ is not a CDF concentrated on X"));
            }
            if !fosd_leq(&self.h, hs, xs, 1e-12)? {
                return Err(invalid("H★ does not first-order dominate H"));
            }
        }
        Ok(())
    }
}

/// Builds the kernel `G_x = λ · law(max{x, K}) + (1-λ) H` with `K ~ G`,
/// using `H★` at the top alternative when present.
pub fn synthesize(d: &Decomposition, xs: &[f64]) -> Result<LotteryKernel> {
    let mut xs = xs.to_vec();
    xs.sort_by(f64::total_cmp);
    if xs.len() < 2 {
        return Err(invalid("a kernel needs at least two alternatives"));
    }
    d.validate(&xs)?;
    let top = *xs.last().expect("non-empty");
    let entries = xs
        .iter()
        .map(|&x| {
            let lifted = d.g.lift_below(x)?;
            let h = match (&d.h_star, x == top) {
                (Some(hs), true) => hs,
                _ => &d.h,
            };
            Ok((
                x,
                ExtendedCdf::mixture(&[(d.lambda, &lifted), (1.0 - d.lambda, h)])?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    LotteryKernel::new(xs, entries)
}

/// The structural property a kernel fails, with the points involved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum DecomposeFailure {
    /// `G_x` does not dominate `G_y`'s complement: `G_x(at) < G_y(at)` for
    /// `x < y`, or `G_x = G_y` (`at` absent).
    FosdMonotonicity { x: f64, y: f64, at: Option<f64> },
    /// `G_x ≠ G_y` at a point outside `[x, y)`.
    Claim1 { x: f64, y: f64, at: f64 },
    /// `G_x ≠ L + 1_{[x,∞)}(R - L)` at `at`.
    StructureEquation { x: f64, at: f64 },
    /// `R - L` is larger at `x` than at `y > x`.
    Claim2 { x: f64, y: f64 },
    /// The top alternative's lottery puts too much mass below `at`; `z` is
    /// the reference alternative used to expose it.
    Claim3 { top: f64, at: f64, z: f64 },
    /// `G` or `λ` fails to be positive.
    Positivity { at: f64 },
    /// Re-synthesizing the decomposition does not reproduce the kernel.
    Reconstruction { x: f64, at: f64 },
}

impl std::fmt::Display for DecomposeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecomposeFailure::FosdMonotonicity { x, y, at: Some(at) } => {
                write!(
                    f,
                    "G_{x}({at}) < G_{y}({at}): not increasing in first-order dominance"
                )
            }
            DecomposeFailure::FosdMonotonicity { x, y, at: None } => {
                write!(
                    f,
                    "G_{x} = G_{y}: not strictly increasing in first-order dominance"
                )
            }
            DecomposeFailure::Claim1 { x, y, at } => {
                write!(f, "G_{x} and G_{y} differ at {at}, outside [{x}, {y})")
            }
            DecomposeFailure::StructureEquation { x, at } => {
                write!(f, "G_{x} departs from L + 1[x,∞)(R - L) at {at}")
            }
            DecomposeFailure::Claim2 { x, y } => write!(f, "R - L decreases from {x} to {y}"),
            DecomposeFailure::Claim3 { top, at, z } => {
                write!(
                    f,
                    "G_{top} puts too much mass at or below {at} (reference {z})"
                )
            }
            DecomposeFailure::Positivity { at } => write!(f, "G is not positive at {at}"),
            DecomposeFailure::Reconstruction { x, at } => {
                write!(f, "rebuilt G_{x} differs at {at}")
            }
        }
    }
}

/// Extracts `(λ, G, H, H★)` from a kernel, or reports the first structural
/// check that fails.
///
/// Checks run in order: strict first-order monotonicity of `x ↦ G_x`;
/// agreement of `G_x` and `G_y` outside `[x, y)` below the top alternative;
/// the equation `G_x = L + 1_{[x,∞)}(R - L)` there; `R - L` non-decreasing;
/// the top alternative's lottery staying below `L`; positivity; and finally
/// that the extracted pieces rebuild the kernel within `tol`.
pub fn decompose(
    kernel: &LotteryKernel,
    tol: f64,
) -> std::result::Result<Decomposition, DecomposeFailure> {
    extract(kernel, tol, false)
}

/// Like [`decompose`], but ignores the top alternative's lottery: only the
/// alternatives below the top are checked and rebuilt, `H★` is never
/// reported, and `λ` is the largest value those alternatives allow.
pub fn decompose_withheld_top(
    kernel: &LotteryKernel,
    tol: f64,
) -> std::result::Result<Decomposition, DecomposeFailure> {
    extract(kernel, tol, true)
}

fn extract(
    kernel: &LotteryKernel,
    tol: f64,
    withhold_top: bool,
) -> std::result::Result<Decomposition, DecomposeFailure> {
    let xs = &kernel.xs;
    let n = xs.len();
    let t = kernel.table();
    let top = n - 1;
    let rows = if withhold_top { top } else { n };

    // Strict FOSD monotonicity over the checked alternatives.
    for i in 0..rows {
        for k in i + 1..rows {
            if let Some(j) = (0..n).find(|&j| t[i][j] < t[k][j] - tol) {
                return Err(DecomposeFailure::FosdMonotonicity {
                    x: xs[i],
                    y: xs[k],
                    at: Some(xs[j]),
                });
            }
            if (0..n).all(|j| (t[i][j] - t[k][j]).abs() <= tol) {
                return Err(DecomposeFailure::FosdMonotonicity {
                    x: xs[i],
                    y: xs[k],
                    at: None,
                });
            }
        }
    }

    // Below the top, G_x = G_y outside [x, y).
    for i in 0..top {
        for k in i + 1..top {
            if let Some(j) = (0..n)
                .filter(|&j| j < i || j >= k)
                .find(|&j| (t[i][j] - t[k][j]).abs() > tol)
            {
                return Err(DecomposeFailure::Claim1 {
                    x: xs[i],
                    y: xs[k],
                    at: xs[j],
                });
            }
        }
    }

    // L and R over the alternatives below the top, at points where L is
    // pinned down by some alternative strictly above.
    let below = |j: usize| (0..top).map(move |i| (i, j));
    let l: Vec<f64> = (0..n)
        .map(|j| below(j).map(|(i, j)| t[i][j]).fold(f64::INFINITY, f64::min))
        .collect();
    let r: Vec<f64> = (0..n)
        .map(|j| {
            below(j)
                .map(|(i, j)| t[i][j])
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect();

    for i in 0..top {
        for j in 0..n {
            let expect = if j >= i { r[j] } else { l[j] };
            if (t[i][j] - expect).abs() > tol {
                return Err(DecomposeFailure::StructureEquation {
                    x: xs[i],
                    at: xs[j],
                });
            }
        }
    }

    // Points 0..n-3 have an alternative strictly above them below the top.
    let pinned = n.saturating_sub(2);
    for a in 0..pinned {
        for b in a + 1..pinned {
            if r[a] - l[a] > r[b] - l[b] + tol {
                return Err(DecomposeFailure::Claim2 { x: xs[a], y: xs[b] });
            }
        }
    }

    // The top alternative's lottery sits below L where L is pinned down,
    // and leaves room for G to increase at the second-highest alternative.
    let q = if pinned > 0 { l[pinned - 1] } else { 0.0 };
    let t_top = if withhold_top { 0.0 } else { t[top][top - 1] };
    for j in (0..pinned).filter(|_| !withhold_top) {
        if t[top][j] > l[j] + tol {
            let z = if j > 0 { xs[j - 1] } else { xs[j] };
            return Err(DecomposeFailure::Claim3 {
                top: xs[top],
                at: xs[j],
                z,
            });
        }
    }
    let s = r[top - 1];
    let below_top = q.max(t_top);
    if pinned > 0 && s - below_top < r[pinned - 1] - q - tol {
        return Err(DecomposeFailure::Claim3 {
            top: xs[top],
            at: xs[top - 1],
            z: xs[pinned - 1],
        });
    }

    let (lambda, one_minus) = if below_top <= tol {
        (1.0, 0.0)
    } else {
        (1.0 - below_top, below_top)
    };
    if !(lambda > tol) {
        return Err(DecomposeFailure::Positivity { at: xs[top - 1] });
    }

    // G at the alternatives; its value at x_0 is the mass at -∞.
    let mut g_vals: Vec<f64> = (0..pinned).map(|j| (r[j] - l[j]) / lambda).collect();
    g_vals.push((s - below_top.min(s)) / lambda);
    g_vals.push(1.0);
    let g_vals: Vec<f64> = g_vals.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
    if !(g_vals[0] > tol) {
        return Err(DecomposeFailure::Positivity { at: xs[0] });
    }
    let g = ExtendedCdf::from_cdf_values(g_vals[0], &xs[1..], &g_vals[1..]).map_err(|_| {
        DecomposeFailure::Claim2 {
            x: xs[0],
            y: xs[top - 1],
        }
    })?;

    let (h, h_star, h_arbitrary) = if one_minus == 0.0 {
        let h = ExtendedCdf::degenerate(xs[0]).expect("finite point");
        (h, None, true)
    } else {
        let mut h_vals: Vec<f64> = (0..pinned).map(|j| l[j] / one_minus).collect();
        h_vals.push(1.0);
        h_vals.push(1.0);
        let hs_vals: Vec<f64> = (0..n)
            .map(|j| if j == top { 1.0 } else { t[top][j] / one_minus })
            .collect();
        let clamp =
            |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(|x| x.clamp(0.0, 1.0)).collect() };
        let (h_vals, hs_vals) = (clamp(h_vals), clamp(hs_vals));
        let h = ExtendedCdf::from_cdf_values(0.0, xs, &h_vals).map_err(|_| {
            DecomposeFailure::Claim2 {
                x: xs[0],
                y: xs[top - 1],
            }
        })?;
        let same = h_vals
            .iter()
            .zip(&hs_vals)
            .all(|(a, b)| (a - b).abs() <= tol);
        let h_star = if same || withhold_top {
            None
        } else {
            Some(
                ExtendedCdf::from_cdf_values(0.0, xs, &hs_vals).map_err(|_| {
                    DecomposeFailure::Claim3 {
                        top: xs[top],
                        at: xs[top - 1],
                        z: xs[0],
                    }
                })?,
            )
        };
        (h, h_star, false)
    };

    let d = Decomposition {
        lambda,
        g,
        h,
        h_star,
        h_arbitrary,
    };
    let rebuilt = synthesize(&d, xs).map_err(|_| DecomposeFailure::Reconstruction {
        x: xs[top],
        at: xs[top],
    })?;
    let t2 = rebuilt.table();
    for i in 0..rows {
        for j in 0..n {
            if (t[i][j] - t2[i][j]).abs() > tol {
                return Err(DecomposeFailure::Reconstruction {
                    x: xs[i],
                    at: xs[j],
                });
            }
        }
    }
    Ok(d)
}

/// A strictly increasing `v` and a lottery on which `x ↦ ∫ v dG_x` fails
/// to be less risk-averse than `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelWitness {
    pub v: RiskAttitude,
    /// `x ↦ ∫ v dG_x`.
    pub effective: RiskAttitude,
    pub violation: Option<PrattViolation>,
    pub lottery: Option<LotteryWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskReductionReport {
    /// No violation found among the sampled `v`; not a proof.
    pub all_pass: bool,
    pub samples: usize,
    pub witness: Option<KernelWitness>,
}

fn kernel_witness(
    kernel: &LotteryKernel,
    v: RiskAttitude,
    seed: u64,
    trials: usize,
    tol: f64,
) -> Result<Option<KernelWitness>> {
    let m = kernel.effective(&v)?;
    let cr = crossratio_report(&m, &v, tol)?;
    let oracle = less_risk_averse_oracle(&m, &v, trials, seed, tol)?;
    if cr.holds && oracle.holds {
        return Ok(None);
    }
    Ok(Some(KernelWitness {
        v,
        effective: m,
        violation: cr.violation,
        lottery: oracle.witness,
    }))
}

/// Samples strictly increasing `v` on `X` (sorted positive increments
/// rescaled to `[0, 1]`) and checks that `x ↦ ∫ v dG_x` is less
/// risk-averse than `v`, both by cross-ratios and by the lottery oracle.
pub fn check_risk_reduction(
    kernel: &LotteryKernel,
    v_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<RiskReductionReport> {
    if v_samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    let mut rng = sampling::rng(seed);
    for s in 0..v_samples {
        let values = sampling::random_increasing(&mut rng, kernel.len());
        let v = RiskAttitude::new(kernel.xs.clone(), values)?;
        if let Some(w) = kernel_witness(kernel, v, seed.wrapping_add(s as u64), 20, tol)? {
            return Ok(RiskReductionReport {
                all_pass: false,
                samples: s + 1,
                witness: Some(w),
            });
        }
    }
    Ok(RiskReductionReport {
        all_pass: true,
        samples: v_samples,
        witness: None,
    })
}

// ∫_a^b e^{-|t|} dt
fn pi_mass(a: f64, b: f64) -> f64 {
    // Antiderivative of e^{-|t|} that vanishes at 0.
    let prim = |t: f64| {
        if t >= 0.0 {
            1.0 - (-t).exp()
        } else {
            (t).exp() - 1.0
        }
    };
    prim(b) - prim(a)
}

/// `w(x') = ∫_0^{x'} (1_A + ε π 1_{R∖A})` for `A` a finite union of
/// intervals with weight one, `π(t) = e^{-|t|}`, and optional extra
/// weights on further intervals.
struct SteepOn {
    steep: Vec<(f64, f64)>,
    flat: Vec<(f64, f64)>,
    eps: f64,
}

impl SteepOn {
    fn density_integral(&self, a: f64, b: f64) -> f64 {
        // Integral over [a, b] of the piecewise density.
        let mut cuts = vec![a, b];
        for &(lo, hi) in self.steep.iter().chain(&self.flat) {
            for c in [lo, hi] {
                if c > a && c < b {
                    cuts.push(c);
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                if self.steep.iter().any(|&(lo, hi)| mid > lo && mid < hi) {
                    w[1] - w[0]
                } else if self.flat.iter().any(|&(lo, hi)| mid > lo && mid < hi) {
                    self.eps * (w[1] - w[0])
                } else {
                    self.eps * pi_mass(w[0], w[1])
                }
            })
            .sum()
    }

    fn eval(&self, x: f64) -> f64 {
        if x >= 0.0 {
            self.density_integral(0.0, x)
        } else {
            -self.density_integral(x, 0.0)
        }
    }
}

/// Turns a structural failure into an explicit `v` violating risk
/// reduction, following the construction that proves the corresponding
/// property necessary: `v` is steep on a region chosen from the failure's
/// points and has slope `ε π` elsewhere, for `ε = 10⁻¹, …, 10⁻⁶`.
pub fn directed_violation_search(
    kernel: &LotteryKernel,
    failure: &DecomposeFailure,
    tol: f64,
) -> Result<Option<KernelWitness>> {
    let xs = &kernel.xs;
    let span = xs[xs.len() - 1] - xs[0];
    let delta = xs[0].abs().max(xs[xs.len() - 1].abs()) + span + 1.0;
    let next_above = |y: f64| xs.iter().copied().find(|&z| z > y);

    for k in 1..=6 {
        let eps = 10f64.powi(-k);
        let w = match *failure {
            DecomposeFailure::FosdMonotonicity { at: Some(at), .. } => SteepOn {
                steep: vec![(
                    at,
                    at + span.max(1.0) * 1e-9 + next_above(at).map_or(0.0, |z| z - at),
                )],
                flat: vec![],
                eps,
            },
            DecomposeFailure::Claim1 { x, y, .. } => SteepOn {
                steep: vec![(-delta, x), (y, delta)],
                flat: vec![],
                eps,
            },
            DecomposeFailure::Claim2 { x, y } => {
                let Some(z) = next_above(y) else {
                    return Ok(None);
                };
                let a = 0.5 * (y - x).min(z - y);
                SteepOn {
                    steep: vec![(x, x + a), (y, y + a)],
                    flat: vec![],
                    eps,
                }
            }
            DecomposeFailure::Claim3 { top, at, z } => SteepOn {
                steep: vec![(at, top)],
                flat: vec![(z.min(at), at)],
                eps,
            },
            _ => return Ok(None),
        };
        let values: Vec<f64> = xs.iter().map(|&x| w.eval(x)).collect();
        let v = RiskAttitude::new(xs.clone(), values)?;
        if let Some(found) = kernel_witness(kernel, v, 0, 0, tol)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem3Report {
    /// No risk-reduction violation found (sampled, plus a directed search
    /// when the decomposition fails).
    pub lra: bool,
    /// The kernel decomposes into outside-option form.
    pub oo_form: bool,
    pub agree: bool,
    pub samples: usize,
    pub decomposition: Option<Decomposition>,
    pub failure: Option<DecomposeFailure>,
    pub witness: Option<KernelWitness>,
    /// The witness came from the directed search rather than sampling.
    pub directed: bool,
}

/// Compares sampled risk reduction with decomposability.
pub fn theorem3_agreement(
    kernel: &LotteryKernel,
    v_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<Theorem3Report> {
    let rr = check_risk_reduction(kernel, v_samples, seed, tol)?;
    let dec = decompose(kernel, tol);
    let (mut lra, mut witness, mut directed) = (rr.all_pass, rr.witness, false);
    if let Err(failure) = &dec {
        if lra {
            if let Some(w) = directed_violation_search(kernel, failure, tol)? {
                lra = false;
                witness = Some(w);
                directed = true;
            }
        }
    }
    let oo_form = dec.is_ok();
    Ok(Theorem3Report {
        lra,
        oo_form,
        agree: lra == oo_form,
        samples: rr.samples,
        decomposition: dec.as_ref().ok().cloned(),
        failure: dec.err(),
        witness,
        directed,
    })
}
