use risklens_core::preferences::{crossratio_report, CrossRatioReport, OracleReport};
use risklens_core::{
    cara_numeric_check, decompose as decompose_kernel, directed_violation_search,
    effective_utility, identify_f, less_risk_averse_oracle, mcs_part_a_check, mcs_part_b_check,
    theorem3_agreement, CaraGrid, CaraSpec, DecomposeFailure, Error, ExtendedCdf, KernelWitness,
    LotteryKernel, PhysicalOutsideOption, PrattViolation, RiskAttitude, Theorem3Report,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::output::{fields, json, num, table};
use crate::{Failure, Format, Outcome, RunConfig};

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Input(e.to_string()))
}

fn done(body: String, holds: bool) -> Result<Outcome, Failure> {
    Ok(Outcome { body, holds })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EffectiveIn {
    v: RiskAttitude,
    #[serde(rename = "F")]
    f: ExtendedCdf,
}

#[derive(Serialize)]
struct EffectiveOut {
    u: RiskAttitude,
    /// `F(v(x))`, the probability of keeping `x` over the outside option.
    inside_kept: Vec<f64>,
}

pub fn effective(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let input: EffectiveIn = parse(text)?;
    let u = effective_utility(&input.v, &input.f);
    let kept: Vec<f64> = input.v.values().iter().map(|&y| input.f.cdf(y)).collect();
    let body = match cfg.format {
        Format::Json => json(&EffectiveOut {
            u: u.clone(),
            inside_kept: kept,
        })?,
        Format::Csv => table(
            &["x", "v", "u", "inside_kept"],
            (0..u.len()).map(|i| {
                vec![
                    num(u.alternatives()[i]),
                    num(input.v.values()[i]),
                    num(u.values()[i]),
                    num(kept[i]),
                ]
            }),
        )?,
    };
    done(body, true)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairIn {
    u: RiskAttitude,
    v: RiskAttitude,
}

#[derive(Serialize)]
struct IdentifyOut {
    #[serde(rename = "F")]
    f: ExtendedCdf,
    alpha: f64,
    beta: f64,
    lambda: f64,
    concentrated: bool,
}

#[derive(Serialize)]
struct ViolationOut {
    less_risk_averse: bool,
    violation: PrattViolation,
}

pub fn identify(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let input: PairIn = parse(text)?;
    let id = match identify_f(&input.u, &input.v, cfg.tol) {
        Ok(id) => id,
        Err(Error::NotLessRiskAverse(violation)) => {
            let out = ViolationOut {
                less_risk_averse: false,
                violation,
            };
            let body = match cfg.format {
                Format::Json => json(&out)?,
                Format::Csv => fields(&out)?,
            };
            return done(body, false);
        }
        Err(e) => return Err(e.into()),
    };
    let body = match cfg.format {
        Format::Json => json(&IdentifyOut {
            f: id.f,
            alpha: id.alpha,
            beta: id.beta,
            lambda: id.lambda,
            concentrated: id.concentrated,
        })?,
        Format::Csv => {
            let mut rows = vec![vec!["-inf".to_string(), num(id.f.neg_inf_mass())]];
            rows.extend(id.f.atoms().iter().map(|a| vec![num(a.at), num(a.mass)]));
            table(&["at", "mass"], rows)?
        }
    };
    done(body, true)
}

#[derive(Serialize)]
struct CompareOut {
    less_risk_averse: bool,
    crossratio: CrossRatioReport,
    oracle: OracleReport,
}

pub fn compare(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let input: PairIn = parse(text)?;
    let crossratio = crossratio_report(&input.u, &input.v, cfg.tol)?;
    let oracle = less_risk_averse_oracle(&input.u, &input.v, cfg.trials, cfg.seed, cfg.tol)?;
    let holds = crossratio.holds && oracle.holds;
    let out = CompareOut {
        less_risk_averse: holds,
        crossratio,
        oracle,
    };
    let body = match cfg.format {
        Format::Json => json(&out)?,
        Format::Csv => fields(&out)?,
    };
    done(body, holds)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct McsAIn {
    v: RiskAttitude,
    #[serde(rename = "F")]
    f: ExtendedCdf,
    #[serde(rename = "F_hat")]
    f_hat: ExtendedCdf,
}

pub fn mcs_a(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let input: McsAIn = parse(text)?;
    let r = mcs_part_a_check(&input.v, &input.f, &input.f_hat, cfg.tol)?;
    let body = match cfg.format {
        Format::Json => json(&r)?,
        Format::Csv => fields(&r)?,
    };
    done(body, r.agree)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct McsBIn {
    v: RiskAttitude,
    v_hat: RiskAttitude,
    mu: PhysicalOutsideOption,
}

pub fn mcs_b(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let input: McsBIn = parse(text)?;
    let r = mcs_part_b_check(&input.v, &input.v_hat, &input.mu, cfg.tol)?;
    let body = match cfg.format {
        Format::Json => json(&r)?,
        Format::Csv => fields(&r)?,
    };
    done(body, r.agree)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CaraIn {
    sigma: f64,
    lambda: f64,
    x0: f64,
    /// Defaults to 4001 points on `[x0 - 4, x0]`.
    grid: Option<CaraGrid>,
}

pub fn cara(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let input: CaraIn = parse(text)?;
    let spec = CaraSpec::new(input.sigma, input.lambda, input.x0)?;
    let grid = input.grid.unwrap_or(CaraGrid {
        lo: input.x0 - 4.0,
        n: 4001,
    });
    let r = cara_numeric_check(&spec, &grid)?;
    let body = match cfg.format {
        Format::Json => json(&r)?,
        Format::Csv => {
            let head = format!(
                "rho_closed_form={}\nmax_abs_err={}\n",
                r.rho_closed_form,
                num(r.max_abs_err)
            );
            let rows = r.rows.iter().map(|row| {
                vec![
                    num(row.x),
                    num(row.v),
                    num(row.u),
                    row.rho_hat.map_or_else(String::new, num),
                ]
            });
            head + &table(&["x", "v", "u", "rho_hat"], rows)?
        }
    };
    done(body, true)
}

/// A bare kernel, or an object carrying one under `"kernel"`.
fn parse_kernel(text: &str) -> Result<LotteryKernel, Failure> {
    let value: serde_json::Value = parse(text)?;
    let inner = match value {
        serde_json::Value::Object(mut map) if map.contains_key("kernel") => {
            map.remove("kernel").expect("present")
        }
        other => other,
    };
    serde_json::from_value(inner).map_err(|e| Failure::Input(e.to_string()))
}

#[derive(Serialize)]
struct DecomposeFailureOut {
    decomposable: bool,
    failure: DecomposeFailure,
    message: String,
    witness: Option<KernelWitness>,
}

pub fn decompose(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let kernel = parse_kernel(text)?;
    let xs = kernel.alternatives();
    match decompose_kernel(&kernel, cfg.tol) {
        Ok(d) => {
            let body = match cfg.format {
                Format::Json => json(&d)?,
                Format::Csv => {
                    let head = format!("lambda={}\nh_arbitrary={}\n", num(d.lambda), d.h_arbitrary);
                    let rows = xs.iter().map(|&x| {
                        vec![
                            num(x),
                            num(d.g.cdf(x)),
                            num(d.h.cdf(x)),
                            d.h_star
                                .as_ref()
                                .map_or_else(String::new, |h| num(h.cdf(x))),
                        ]
                    });
                    head + &table(&["x", "G", "H", "H_star"], rows)?
                }
            };
            done(body, true)
        }
        Err(failure) => {
            let witness = directed_violation_search(&kernel, &failure, cfg.tol)?;
            let out = DecomposeFailureOut {
                decomposable: false,
                failure,
                message: failure.to_string(),
                witness,
            };
            let body = match cfg.format {
                Format::Json => json(&out)?,
                Format::Csv => fields(&out)?,
            };
            done(body, false)
        }
    }
}

#[derive(Serialize)]
struct CheckKernelOut {
    #[serde(flatten)]
    report: Theorem3Report,
    note: String,
}

pub fn check_kernel(text: &str, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let kernel = parse_kernel(text)?;
    let report = theorem3_agreement(&kernel, cfg.trials, cfg.seed, cfg.tol_numeric)?;
    let note = if report.lra {
        format!("no violation found in {} samples", report.samples)
    } else if report.directed {
        "violation found by directed search".to_string()
    } else {
        format!("violation found at sample {}", report.samples)
    };
    let holds = report.lra && report.agree;
    let out = CheckKernelOut { report, note };
    let body = match cfg.format {
        Format::Json => json(&out)?,
        Format::Csv => fields(&out)?,
    };
    done(body, holds)
}
