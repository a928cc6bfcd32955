//! Comparative statics: how the effective risk attitude moves with the
//! outside-option distribution (reverse hazard rate order) and with the
//! underlying risk attitude, plus the constant-absolute-risk-aversion
//! example with a reversed-exponential outside option.

use serde::{Deserialize, Serialize};

use crate::distributions::{rhr_violation, ExtendedCdf};
use crate::error::{domain, invalid, Result};
use crate::numeric::TOL_EXACT;
use crate::outside_option::effective_utility;
use crate::preferences::{
    arrow_pratt_index, crossratio_report, less_risk_averse_oracle, LotteryWitness, PrattViolation,
    RiskAttitude,
};

#[derive(Serialize, Deserialize)]
struct OptionEntry {
    at: f64,
    mass: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhysicalRepr {
    #[serde(default)]
    unavailable: f64,
    #[serde(default)]
    options: Vec<OptionEntry>,
}

/// Distribution of a physical outside option: with probability
/// `unavailable` there is none, otherwise it is an alternative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PhysicalRepr", into = "PhysicalRepr")]
pub struct PhysicalOutsideOption {
    unavailable: f64,
    options: Vec<(f64, f64)>,
}

impl TryFrom<PhysicalRepr> for PhysicalOutsideOption {
    type Error = crate::Error;

    fn try_from(r: PhysicalRepr) -> Result<Self> {
        PhysicalOutsideOption::new(
            r.unavailable,
            r.options.into_iter().map(|o| (o.at, o.mass)).collect(),
        )
    }
}

impl From<PhysicalOutsideOption> for PhysicalRepr {
    fn from(p: PhysicalOutsideOption) -> Self {
        PhysicalRepr {
            unavailable: p.unavailable,
            options: p
                .options
                .into_iter()
                .map(|(at, mass)| OptionEntry { at, mass })
                .collect(),
        }
    }
}

impl PhysicalOutsideOption {
    pub fn new(unavailable: f64, options: Vec<(f64, f64)>) -> Result<Self> {
        let masses = std::iter::once(unavailable).chain(options.iter().map(|o| o.1));
        let mut total = 0.0;
        for m in masses {
            if !m.is_finite() || m < 0.0 {
                return Err(invalid(format!(
                    "masses must be finite and non-negative, got {m}"
                )));
            }
            total += m;
        }
        if options.iter().any(|o| !o.0.is_finite()) {
            return Err(invalid("option locations must be finite"));
        }
        if (total - 1.0).abs() > crate::distributions::MASS_TOL {
            return Err(invalid(format!("masses sum to {total}, not 1")));
        }
        Ok(PhysicalOutsideOption {
            unavailable,
            options,
        })
    }

    pub fn unavailable(&self) -> f64 {
        self.unavailable
    }

    pub fn options(&self) -> &[(f64, f64)] {
        &self.options
    }
}

/// `F(k) = μ({y : v(y) ≤ k})` with `v(∅) = -∞`.
pub fn induce_f(mu: &PhysicalOutsideOption, v: &RiskAttitude) -> Result<ExtendedCdf> {
    let atoms = mu
        .options
        .iter()
        .map(|&(y, m)| Ok((v.value_at(y)?, m)))
        .collect::<Result<Vec<_>>>()?;
    ExtendedCdf::new(mu.unavailable, atoms, Vec::new())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McsAReport {
    /// `χ_F̂ ∘ v` is less risk-averse than `χ_F ∘ v`.
    pub lra: bool,
    /// `F̂` is better than `F` in the reverse hazard rate order on
    /// `v(X) \ {sup v(X)}`.
    pub rhr: bool,
    pub agree: bool,
    pub lra_violation: Option<PrattViolation>,
    pub lra_witness: Option<LotteryWitness>,
    pub rhr_violation: Option<(f64, f64)>,
}

fn check_outside_option(f: &ExtendedCdf, v: &RiskAttitude, name: &str) -> Result<()> {
    if !f.concentrated_on(&v.image(), true) {
        return Err(domain(format!("{name} is not concentrated on v(X) and -∞")));
    }
    if !(f.cdf(v.min_value()) > 0.0) {
        return Err(domain(format!("{name} vanishes just above inf v(X)")));
    }
    Ok(())
}

fn witness(u: &RiskAttitude, v: &RiskAttitude, tol: f64) -> Result<Option<LotteryWitness>> {
    Ok(less_risk_averse_oracle(u, v, 0, 0, tol)?.witness)
}

/// Compares the two sides of the reverse-hazard-rate characterization for
/// a fixed `v`.
pub fn mcs_part_a_check(
    v: &RiskAttitude,
    f: &ExtendedCdf,
    f_hat: &ExtendedCdf,
    tol: f64,
) -> Result<McsAReport> {
    check_outside_option(f, v, "F")?;
    check_outside_option(f_hat, v, "F̂")?;
    let u = effective_utility(v, f);
    let u_hat = effective_utility(v, f_hat);
    let report = crossratio_report(&u_hat, &u, tol)?;
    let mut k = v.distinct_values();
    k.pop();
    let rhr_violation = rhr_violation(f, f_hat, &k, tol);
    let lra_witness = if report.holds {
        None
    } else {
        witness(&u_hat, &u, tol)?
    };
    Ok(McsAReport {
        lra: report.holds,
        rhr: rhr_violation.is_none(),
        agree: report.holds == rhr_violation.is_none(),
        lra_violation: report.violation,
        lra_witness,
        rhr_violation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McsBReport {
    /// `χ_F̂ ∘ v̂` is less risk-averse than `χ_F ∘ v`.
    pub lra_u: bool,
    /// `v̂` is less risk-averse than `v`.
    pub lra_v: bool,
    pub agree: bool,
    pub u_violation: Option<PrattViolation>,
    pub u_witness: Option<LotteryWitness>,
    pub v_violation: Option<PrattViolation>,
}

/// Holds the physical outside option `μ` fixed while the risk attitude
/// moves from `v` to `v̂`.
pub fn mcs_part_b_check(
    v: &RiskAttitude,
    v_hat: &RiskAttitude,
    mu: &PhysicalOutsideOption,
    tol: f64,
) -> Result<McsBReport> {
    v.same_alternatives(v_hat)?;
    let f = induce_f(mu, v)?;
    let f_hat = induce_f(mu, v_hat)?;
    check_outside_option(&f, v, "F")?;
    check_outside_option(&f_hat, v_hat, "F̂")?;
    for (&a, &b) in v.values().iter().zip(v_hat.values()) {
        if (f.cdf(a) - f_hat.cdf(b)).abs() > TOL_EXACT {
            return Err(domain(
                "F∘v and F̂∘v̂ differ: v and v̂ order the options differently",
            ));
        }
    }
    let u = effective_utility(v, &f);
    let u_hat = effective_utility(v_hat, &f_hat);
    let ru = crossratio_report(&u_hat, &u, tol)?;
    let rv = crossratio_report(v_hat, v, tol)?;
    let u_witness = if ru.holds {
        None
    } else {
        witness(&u_hat, &u, tol)?
    };
    Ok(McsBReport {
        lra_u: ru.holds,
        lra_v: rv.holds,
        agree: ru.holds == rv.holds,
        u_violation: ru.violation,
        u_witness,
        v_violation: rv.violation,
    })
}

/// Constant absolute risk aversion `σ` with a reversed-exponential outside
/// option `G(x) = min{1, exp(-λ(x₀ - x))}` in monetary units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaraSpec {
    pub sigma: f64,
    pub lambda: f64,
    pub x0: f64,
}

impl CaraSpec {
    pub fn new(sigma: f64, lambda: f64, x0: f64) -> Result<Self> {
        let s = CaraSpec { sigma, lambda, x0 };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite()
            || !self.x0.is_finite()
            || !(self.lambda >= 0.0)
            || !self.lambda.is_finite()
        {
            return Err(invalid(
                "CARA spec needs finite sigma and x0 and finite lambda >= 0",
            ));
        }
        Ok(())
    }

    /// `v(x) = -e^{-σx}/σ`, or `x` when `σ = 0`.
    pub fn v(&self, x: f64) -> f64 {
        if self.sigma == 0.0 {
            x
        } else {
            -(-self.sigma * x).exp() / self.sigma
        }
    }

    pub fn g(&self, x: f64) -> f64 {
        (-self.lambda * (self.x0 - x)).exp().min(1.0)
    }
}

/// Effective coefficient of absolute risk aversion `ρ = σ − λ`.
pub fn cara_effective_rho(spec: &CaraSpec) -> f64 {
    spec.sigma - spec.lambda
}

/// `n` equally spaced points on `[lo, x₀]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaraGrid {
    pub lo: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaraRow {
    pub x: f64,
    pub v: f64,
    pub u: f64,
    /// Estimated `-u''/u'`; absent at the two end points.
    pub rho_hat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaraReport {
    pub rho_closed_form: f64,
    /// Estimates at the points used for the error, away from the ends.
    pub rho_hat: Vec<(f64, f64)>,
    pub max_abs_err: f64,
    pub rows: Vec<CaraRow>,
}

/// Discretizes the CARA example and estimates the effective coefficient
/// numerically.
///
/// The outside option is an atom at each grid point carrying the increment
/// of `G`, with all of `G`'s mass below the grid lumped at `lo`. The error
/// is taken over interior points at least 10% of the span from either end.
pub fn cara_numeric_check(spec: &CaraSpec, grid: &CaraGrid) -> Result<CaraReport> {
    spec.validate()?;
    if grid.n < 5 {
        return Err(domain("the grid needs at least five points"));
    }
    if !grid.lo.is_finite() || !(grid.lo < spec.x0) {
        return Err(domain("the grid needs lo < x0"));
    }
    let n = grid.n;
    let span = spec.x0 - grid.lo;
    let h = span / (n - 1) as f64;
    let xs: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                spec.x0
            } else {
                grid.lo + i as f64 * h
            }
        })
        .collect();
    let v = RiskAttitude::new(xs.clone(), xs.iter().map(|&x| spec.v(x)).collect())?;

    let mut atoms = Vec::with_capacity(n);
    let mut prev = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let g = if i == n - 1 { 1.0 } else { spec.g(x) };
        atoms.push((v.values()[i], g - prev));
        prev = g;
    }
    let f = ExtendedCdf::new(0.0, atoms, Vec::new())?;
    let u = effective_utility(&v, &f);
    let index = arrow_pratt_index(&u, h)?;

    let rho = cara_effective_rho(spec);
    let margin = 0.1 * span;
    let mut rho_hat = Vec::new();
    let mut max_abs_err = 0.0f64;
    let mut rows: Vec<CaraRow> = xs
        .iter()
        .zip(v.values().iter().zip(u.values()))
        .map(|(&x, (&vx, &ux))| CaraRow {
            x,
            v: vx,
            u: ux,
            rho_hat: None,
        })
        .collect();
    for (i, &(x, r)) in index.iter().enumerate() {
        let est = -r;
        rows[i + 1].rho_hat = Some(est);
        if x >= grid.lo + margin && x <= spec.x0 - margin {
            rho_hat.push((x, est));
            max_abs_err = max_abs_err.max((est - rho).abs());
        }
    }
    Ok(CaraReport {
        rho_closed_form: rho,
        rho_hat,
        max_abs_err,
        rows,
    })
}
