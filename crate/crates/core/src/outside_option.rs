//! The outside-option model: `α u(x) + β = ∫ max{v(x), k} F(dk)`.
//!
//! Forward valuation maps `(v, F)` to the effective risk attitude `u`;
//! identification recovers `F` (and the gauge `α, β`) from `(u, v)`; and
//! [`construct_v_prop2`] goes the other way, finding a `v` that produces a
//! given `u` under a given `F`.

use serde::{Deserialize, Serialize};

use crate::distributions::ExtendedCdf;
use crate::error::{domain, Error, Result};
use crate::numeric::PiecewiseLinearFn;
use crate::preferences::{construct_phi_greatest, RiskAttitude};

/// A pair `(v, F)` together with the gauge `α > 0, β` under which it
/// represents a risk attitude `u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OoRepresentation {
    pub v: RiskAttitude,
    #[serde(rename = "F")]
    pub f: ExtendedCdf,
    pub alpha: f64,
    pub beta: f64,
}

/// `u(x) = χ(v(x)) = ∫ max{v(x), k} F(dk)`, in the gauge `α = 1, β = 0`.
pub fn effective_utility(v: &RiskAttitude, f: &ExtendedCdf) -> RiskAttitude {
    v.map(|y| f.chi_eval(y))
        .expect("chi of a finite value is finite")
}

/// Output of [`identify_f`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Identification {
    #[serde(rename = "F")]
    pub f: ExtendedCdf,
    pub alpha: f64,
    pub beta: f64,
    /// Slope of `φ` on its last segment.
    pub lambda: f64,
    /// The greatest increasing convex `φ` with `u = φ ∘ v`.
    pub phi: PiecewiseLinearFn,
    /// Whether `F` is concentrated on `v(X) ∪ {-∞}`.
    pub concentrated: bool,
}

impl Identification {
    pub fn representation(&self, v: &RiskAttitude) -> OoRepresentation {
        OoRepresentation {
            v: v.clone(),
            f: self.f.clone(),
            alpha: self.alpha,
            beta: self.beta,
        }
    }
}

/// Recovers an outside-option distribution `F` with
/// `α u + β = χ_F ∘ v` from `u` less risk-averse than `v`.
///
/// With `w_0 < … < w_{m-1}` the distinct values of `v` and `s_i` the slope
/// of the greatest `φ` on `[w_i, w_{i+1}]`, `F = s_i / λ` on
/// `[w_i, w_{i+1})` with `λ = s_{m-2}`, constant below `w_0` (that constant
/// is the mass at `-∞`) and one from `w_{m-2}` on. `α = 1/λ` and `β` is
/// matched at the alternative where `u` is smallest.
pub fn identify_f(u: &RiskAttitude, v: &RiskAttitude, tol: f64) -> Result<Identification> {
    u.same_alternatives(v)?;
    if u.is_constant() {
        return Err(domain("u is constant, so no strictly increasing φ exists"));
    }
    let phi = construct_phi_greatest(u, v, tol)?;
    let slopes: Vec<f64> = phi.right_derivative().iter().map(|s| s.slope).collect();
    let lambda = *slopes.last().expect("phi has a segment");
    if !(lambda > 0.0) {
        return Err(Error::Numerical(format!("last slope of φ is {lambda}")));
    }

    let points: Vec<f64> = phi.knots().iter().map(|k| k.x).collect();
    // Monotone envelope of s_i / λ guards against rounding in the slopes.
    let mut levels = Vec::with_capacity(slopes.len());
    let mut run = 0.0f64;
    for &s in &slopes {
        run = run.max((s / lambda).clamp(0.0, 1.0));
        levels.push(run);
    }
    let neg_inf_mass = levels[0];
    let mut values = levels.clone();
    *values.last_mut().expect("non-empty") = 1.0;
    // F(w_i) = level_i for i < m-1; F(w_{m-1}) = 1.
    let mut cdf_values = values;
    cdf_values.push(1.0);
    let f = ExtendedCdf::from_cdf_values(neg_inf_mass, &points, &cdf_values)?;

    let alpha = 1.0 / lambda;
    let i_min = argmin(u.values());
    let beta = f.chi_eval(v.values()[i_min]) - alpha * u.values()[i_min];
    let concentrated = f.concentrated_on(&v.image(), true);
    Ok(Identification {
        f,
        alpha,
        beta,
        lambda,
        phi,
        concentrated,
    })
}

fn argmin(xs: &[f64]) -> usize {
    (0..xs.len())
        .min_by(|&a, &b| xs[a].total_cmp(&xs[b]))
        .expect("non-empty")
}

fn argmax(xs: &[f64]) -> usize {
    (0..xs.len())
        .max_by(|&a, &b| xs[a].total_cmp(&xs[b]))
        .expect("non-empty")
}

/// Result of [`verify_representation`] with the fitted gauge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationCheck {
    pub holds: bool,
    pub alpha: f64,
    pub beta: f64,
    /// Largest `|α u(x) + β - χ(v(x))|`.
    pub max_residual: f64,
}

/// Fits `α, β` at the alternatives where `u` is smallest and largest, then
/// checks `α u(x) + β = χ(v(x))` everywhere within `tol` with `α > 0`.
///
/// The gauge stored in `rep` is not used.
pub fn verify_representation(
    u: &RiskAttitude,
    rep: &OoRepresentation,
    tol: f64,
) -> Result<RepresentationCheck> {
    u.same_alternatives(&rep.v)?;
    let c: Vec<f64> = rep.v.values().iter().map(|&y| rep.f.chi_eval(y)).collect();
    let uv = u.values();
    let (lo, hi) = (argmin(uv), argmax(uv));
    let (alpha, beta) = if uv[hi] > uv[lo] {
        let a = (c[hi] - c[lo]) / (uv[hi] - uv[lo]);
        (a, c[lo] - a * uv[lo])
    } else {
        (1.0, c[lo] - uv[lo])
    };
    let max_residual = uv
        .iter()
        .zip(&c)
        .map(|(&ux, &cx)| (alpha * ux + beta - cx).abs())
        .fold(0.0, f64::max);
    Ok(RepresentationCheck {
        holds: alpha > 0.0 && max_residual <= tol,
        alpha,
        beta,
        max_residual,
    })
}

/// Builds `v` with `χ_F ∘ v` an affine transform of `u`.
///
/// Let `J = {k : F(k) > 0}`. With no mass at `-∞`, `φ = χ + β` with
/// `β = inf u − inf χ(J) − 1`; otherwise `φ = χ`. Then `v = φ⁻¹ ∘ u`, the
/// inverse taken on `J` where `χ` is strictly increasing.
pub fn construct_v_prop2(u: &RiskAttitude, f: &ExtendedCdf) -> Result<RiskAttitude> {
    let alpha = f.neg_inf_mass();
    let beta = if alpha > 0.0 {
        0.0
    } else {
        let j_lo = f
            .support_inf()
            .ok_or_else(|| domain("F has no mass anywhere"))?;
        u.min_value() - f.chi_eval(j_lo) - 1.0
    };
    let inv = ChiInverse::new(f);
    u.map(|y| inv.solve(y - beta))
}

/// Inverse of `χ` on the region where `F > 0`.
struct ChiInverse<'a> {
    f: &'a ExtendedCdf,
    cuts: Vec<f64>,
    chi_at: Vec<f64>,
}

impl<'a> ChiInverse<'a> {
    fn new(f: &'a ExtendedCdf) -> Self {
        let cuts = f.breakpoints();
        let chi_at = cuts.iter().map(|&b| f.chi_eval(b)).collect();
        ChiInverse { f, cuts, chi_at }
    }

    fn solve(&self, t: f64) -> f64 {
        let (cuts, chi) = (&self.cuts, &self.chi_at);
        let Some(&first) = cuts.first() else {
            // All mass at -∞: χ(ℓ) = ℓ.
            return t;
        };
        if t < chi[0] {
            // Below every breakpoint F is the constant mass at -∞.
            return first - (chi[0] - t) / self.f.neg_inf_mass();
        }
        let last = cuts.len() - 1;
        if t >= chi[last] {
            return cuts[last] + (t - chi[last]);
        }
        let i = chi.partition_point(|&c| c <= t) - 1;
        let a = cuts[i];
        let b = cuts[i + 1];
        let level = self.f.cdf(a);
        let slope = (self.f.cdf_left(b) - level) / (b - a);
        let delta = t - chi[i];
        if delta <= 0.0 {
            return a;
        }
        // Solve level·s + slope·s²/2 = delta in the stable form.
        let s = 2.0 * delta / (level + (level * level + 2.0 * slope * delta).sqrt());
        (a + s).min(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn att(values: &[f64]) -> RiskAttitude {
        let xs: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
        RiskAttitude::new(xs, values.to_vec()).unwrap()
    }

    fn cdf(alpha: f64, atoms: &[(f64, f64)]) -> ExtendedCdf {
        ExtendedCdf::new(alpha, atoms.to_vec(), vec![]).unwrap()
    }

    #[test]
    fn effective_utility_examples() {
        let v = att(&[0.0, 1.0, 2.0]);
        assert_eq!(effective_utility(&v, &ExtendedCdf::unavailable()), v);
        let u = effective_utility(&att(&[0.0, 1.0]), &ExtendedCdf::degenerate(0.5).unwrap());
        assert_eq!(u.values(), &[0.5, 1.0]);
        let u = effective_utility(&v, &cdf(0.5, &[(1.0, 0.5)]));
        assert_eq!(u.values(), &[0.5, 1.0, 2.0]);
    }

    #[test]
    fn identify_examples() {
        let v = att(&[0.0, 1.0, 2.0]);
        let id = identify_f(&att(&[0.0, 0.5, 1.5]), &v, 1e-9).unwrap();
        assert_eq!(id.f, cdf(0.5, &[(1.0, 0.5)]));
        assert_eq!((id.alpha, id.beta, id.lambda), (1.0, 0.5, 1.0));
        assert!(id.concentrated);

        let id = identify_f(&att(&[0.0, 1.0, 3.0]), &v, 1e-9).unwrap();
        assert_eq!(id.f, cdf(0.5, &[(1.0, 0.5)]));
        assert_eq!((id.alpha, id.beta, id.lambda), (0.5, 0.5, 2.0));

        // u = v: φ is the identity and F puts everything at -∞.
        let id = identify_f(&v, &v, 1e-9).unwrap();
        assert_eq!(id.f, ExtendedCdf::unavailable());
        assert_eq!(effective_utility(&v, &id.f), v);
    }

    #[test]
    fn identify_errors() {
        let v = att(&[0.0, 1.0, 2.0]);
        assert!(matches!(
            identify_f(&att(&[0.0, 1.0, 1.5]), &v, 1e-9),
            Err(Error::NotLessRiskAverse(_))
        ));
        assert!(identify_f(&att(&[1.0, 1.0, 1.0]), &v, 1e-9).is_err());
    }

    #[test]
    fn verify_examples() {
        let v = att(&[0.0, 1.0, 2.0]);
        let u = att(&[0.0, 0.5, 1.5]);
        let id = identify_f(&u, &v, 1e-9).unwrap();
        assert!(
            verify_representation(&u, &id.representation(&v), 1e-9)
                .unwrap()
                .holds
        );

        let rep = OoRepresentation {
            v: v.clone(),
            f: ExtendedCdf::unavailable(),
            alpha: 1.0,
            beta: 0.0,
        };
        let r = verify_representation(&v, &rep, 1e-9).unwrap();
        assert!(r.holds);
        assert_eq!((r.alpha, r.beta), (1.0, 0.0));

        let rep = OoRepresentation {
            f: ExtendedCdf::degenerate(0.0).unwrap(),
            ..rep
        };
        assert!(
            !verify_representation(&att(&[0.0, 1.0, 1.9]), &rep, 1e-9)
                .unwrap()
                .holds
        );
        assert!(
            !verify_representation(&att(&[1.0, 1.0, 1.0]), &rep, 1e-9)
                .unwrap()
                .holds
        );
    }

    #[test]
    fn construct_v_examples() {
        let v =
            construct_v_prop2(&att(&[3.0, 5.0]), &ExtendedCdf::degenerate(0.0).unwrap()).unwrap();
        assert_eq!(v.values(), &[1.0, 3.0]);

        let u = att(&[0.0, 2.0, 7.0]);
        assert_eq!(
            construct_v_prop2(&u, &ExtendedCdf::unavailable()).unwrap(),
            u
        );

        let f = cdf(0.5, &[(0.0, 0.5)]);
        let v = construct_v_prop2(&att(&[0.0, 1.0]), &f).unwrap();
        assert_eq!(v.values(), &[0.0, 1.0]);
        // Below zero χ has slope one half.
        let v = construct_v_prop2(&att(&[-1.0, 1.0]), &f).unwrap();
        assert_eq!(v.values(), &[-2.0, 1.0]);
    }

    #[test]
    fn construct_v_inverts_quadratic_sections() {
        let f = ExtendedCdf::new(0.0, vec![(2.0, 0.25)], vec![(0.0, 4.0, 0.75)]).unwrap();
        let u = att(&[0.0, 0.3, 1.0, 2.5, 9.0]);
        let v = construct_v_prop2(&u, &f).unwrap();
        let rep = OoRepresentation {
            v,
            f,
            alpha: 1.0,
            beta: 0.0,
        };
        assert!(verify_representation(&u, &rep, 1e-9).unwrap().holds);
    }
}
