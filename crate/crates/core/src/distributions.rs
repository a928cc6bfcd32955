//! Extended CDFs on `[-∞, +∞)` and the valuation transform `χ`.
//!
//! The distribution class is finite mixtures of a mass at `-∞`, atoms, and
//! uniform pieces. It is closed under every construction in this crate.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::numeric::{Component, PiecewiseLinearFn, SetDescriptor, TOL_EXACT};

/// Tolerance on the total mass of an [`ExtendedCdf`].
pub const MASS_TOL: f64 = 1e-12;

/// Largest knot count [`ExtendedCdf::chi`] will produce.
const MAX_CHI_KNOTS: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub at: f64,
    pub mass: f64,
}

/// Mass spread uniformly over `[from, to]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformPiece {
    pub from: f64,
    pub to: f64,
    pub mass: f64,
}

impl UniformPiece {
    fn width(&self) -> f64 {
        self.to - self.from
    }

    fn density(&self) -> f64 {
        self.mass / self.width()
    }

    // Antiderivative of this piece's CDF contribution, zero left of `from`.
    fn ramp(&self, k: f64) -> f64 {
        if k <= self.from {
            0.0
        } else if k < self.to {
            let s = k - self.from;
            self.mass * s * s / (2.0 * self.width())
        } else {
            self.mass * (self.width() / 2.0 + (k - self.to))
        }
    }

    fn cdf(&self, k: f64) -> f64 {
        if k <= self.from {
            0.0
        } else if k >= self.to {
            self.mass
        } else {
            self.mass * (k - self.from) / self.width()
        }
    }
}

/// Probability mass accepted from JSON either as a number or as a decimal
/// string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum MassRepr {
    Num(f64),
    Str(String),
}

impl MassRepr {
    fn value(&self) -> Result<f64> {
        match self {
            MassRepr::Num(x) => Ok(*x),
            MassRepr::Str(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("cannot parse mass {s:?}"))),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomRepr {
    at: f64,
    mass: MassRepr,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PieceRepr {
    from: f64,
    to: f64,
    mass: MassRepr,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CdfRepr {
    #[serde(default)]
    neg_inf_mass: Option<MassRepr>,
    #[serde(default)]
    atoms: Vec<AtomRepr>,
    #[serde(default)]
    uniform: Vec<PieceRepr>,
}

impl TryFrom<CdfRepr> for ExtendedCdf {
    type Error = Error;

    fn try_from(repr: CdfRepr) -> Result<Self> {
        let alpha = match &repr.neg_inf_mass {
            Some(m) => m.value()?,
            None => 0.0,
        };
        let atoms = repr
            .atoms
            .iter()
            .map(|a| Ok((a.at, a.mass.value()?)))
            .collect::<Result<Vec<_>>>()?;
        let pieces = repr
            .uniform
            .iter()
            .map(|p| Ok((p.from, p.to, p.mass.value()?)))
            .collect::<Result<Vec<_>>>()?;
        ExtendedCdf::new(alpha, atoms, pieces)
    }
}

/// CDF of a `[-∞, +∞)`-valued random variable: mass `neg_inf_mass` at
/// `-∞`, finitely many atoms and finitely many uniform pieces.
///
/// Atoms are sorted with distinct locations; uniform pieces are sorted and
/// pairwise disjoint (overlapping input pieces are split on construction).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CdfRepr")]
pub struct ExtendedCdf {
    neg_inf_mass: f64,
    atoms: Vec<Atom>,
    uniform: Vec<UniformPiece>,
}

impl ExtendedCdf {
    /// Zero masses are dropped, atoms at equal locations merged, and
    /// overlapping pieces split into disjoint ones. Total mass must be one
    /// within [`MASS_TOL`].
    pub fn new(
        neg_inf_mass: f64,
        atoms: Vec<(f64, f64)>,
        uniform: Vec<(f64, f64, f64)>,
    ) -> Result<Self> {
        let check_mass = |m: f64| -> Result<()> {
            if !m.is_finite() || m < 0.0 {
                return Err(invalid(format!(
                    "masses must be finite and non-negative, got {m}"
                )));
            }
            Ok(())
        };
        check_mass(neg_inf_mass)?;
        let mut total = neg_inf_mass;

        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        let mut sorted = atoms;
        for &(at, mass) in &sorted {
            if !at.is_finite() {
                return Err(invalid("atom locations must be finite"));
            }
            check_mass(mass)?;
            total += mass;
        }
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (at, mass) in sorted {
            if mass == 0.0 {
                continue;
            }
            match merged.last_mut() {
                Some(last) if last.at == at => last.mass += mass,
                _ => merged.push(Atom { at, mass }),
            }
        }

        let mut pieces = Vec::with_capacity(uniform.len());
        for (from, to, mass) in uniform {
            if !from.is_finite() || !to.is_finite() || from >= to {
                return Err(invalid(format!(
                    "uniform piece needs finite from < to, got ({from}, {to})"
                )));
            }
            check_mass(mass)?;
            total += mass;
            if mass > 0.0 {
                pieces.push(UniformPiece { from, to, mass });
            }
        }

        if (total - 1.0).abs() > MASS_TOL {
            return Err(invalid(format!("masses sum to {total}, not 1")));
        }

        Ok(ExtendedCdf {
            neg_inf_mass,
            atoms: merged,
            uniform: split_pieces(pieces),
        })
    }

    /// All mass at `-∞`: `F ≡ 1`, the outside option is never available.
    pub fn unavailable() -> Self {
        ExtendedCdf {
            neg_inf_mass: 1.0,
            atoms: Vec::new(),
            uniform: Vec::new(),
        }
    }

    /// Unit mass at `at`.
    pub fn degenerate(at: f64) -> Result<Self> {
        Self::new(0.0, vec![(at, 1.0)], Vec::new())
    }

    /// Atom-only CDF with the given values at sorted points.
    ///
    /// `values[i]` is `F(points[i])`; the last value must be one. Masses are
    /// the increments, with `neg_inf_mass` below the first point. Negative
    /// increments within [`TOL_EXACT`] are treated as zero.
    pub fn from_cdf_values(neg_inf_mass: f64, points: &[f64], values: &[f64]) -> Result<Self> {
        if points.len() != values.len() {
            return Err(invalid("points and values differ in length"));
        }
        let mut prev = neg_inf_mass;
        let mut atoms = Vec::with_capacity(points.len());
        for (&at, &value) in points.iter().zip(values) {
            let mass = value - prev;
            if mass < -TOL_EXACT {
                return Err(invalid(format!("CDF values decrease at {at}")));
            }
            atoms.push((at, mass.max(0.0)));
            prev = prev.max(value);
        }
        Self::new(neg_inf_mass, atoms, Vec::new())
    }

    /// Convex combination `Σ w_i F_i`.
    pub fn mixture(parts: &[(f64, &ExtendedCdf)]) -> Result<Self> {
        let mut alpha = 0.0;
        let mut atoms = Vec::new();
        let mut pieces = Vec::new();
        for &(w, f) in parts {
            if !(w >= 0.0) {
                return Err(invalid("mixture weights must be non-negative"));
            }
            alpha += w * f.neg_inf_mass;
            atoms.extend(f.atoms.iter().map(|a| (a.at, w * a.mass)));
            pieces.extend(f.uniform.iter().map(|p| (p.from, p.to, w * p.mass)));
        }
        Self::new(alpha, atoms, pieces)
    }

    /// Distribution of `max{x, K}`: everything below `x`, including the mass
    /// at `-∞`, moves to an atom at `x`.
    pub fn lift_below(&self, x: f64) -> Result<Self> {
        let mut at_x = self.neg_inf_mass;
        let mut atoms = Vec::new();
        for a in &self.atoms {
            if a.at < x {
                at_x += a.mass;
            } else {
                atoms.push((a.at, a.mass));
            }
        }
        let mut pieces = Vec::new();
        for p in &self.uniform {
            if p.to <= x {
                at_x += p.mass;
            } else if p.from >= x {
                pieces.push((p.from, p.to, p.mass));
            } else {
                let below = p.cdf(x);
                at_x += below;
                pieces.push((x, p.to, p.mass - below));
            }
        }
        atoms.push((x, at_x));
        Self::new(0.0, atoms, pieces)
    }

    pub fn neg_inf_mass(&self) -> f64 {
        self.neg_inf_mass
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn uniform_pieces(&self) -> &[UniformPiece] {
        &self.uniform
    }

    pub fn is_atom_only(&self) -> bool {
        self.uniform.is_empty()
    }

    /// Mass of the atom at exactly `x`.
    pub fn atom_mass_at(&self, x: f64) -> f64 {
        self.atoms
            .binary_search_by(|a| a.at.total_cmp(&x))
            .map(|i| self.atoms[i].mass)
            .unwrap_or(0.0)
    }

    /// Sorted, distinct atom locations and piece endpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .atoms
            .iter()
            .map(|a| a.at)
            .chain(self.uniform.iter().flat_map(|p| [p.from, p.to]))
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Infimum of the finite part of the support, if any.
    pub fn support_inf(&self) -> Option<f64> {
        let a = self.atoms.first().map(|a| a.at);
        let p = self.uniform.first().map(|p| p.from);
        match (a, p) {
            (Some(a), Some(p)) => Some(a.min(p)),
            (a, p) => a.or(p),
        }
    }

    /// `F(k) = P(K ≤ k)`.
    pub fn cdf(&self, k: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .take_while(|a| a.at <= k)
            .map(|a| a.mass)
            .sum();
        let pieces: f64 = self.uniform.iter().map(|p| p.cdf(k)).sum();
        (self.neg_inf_mass + atoms + pieces).min(1.0)
    }

    /// `F(k-) = P(K < k)`.
    pub fn cdf_left(&self, k: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .take_while(|a| a.at < k)
            .map(|a| a.mass)
            .sum();
        let pieces: f64 = self.uniform.iter().map(|p| p.cdf(k)).sum();
        (self.neg_inf_mass + atoms + pieces).min(1.0)
    }

    /// `∫_{(0,+∞)} k F(dk)`.
    pub fn positive_part_mean(&self) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.at > 0.0)
            .map(|a| a.at * a.mass)
            .sum();
        let pieces: f64 = self
            .uniform
            .iter()
            .map(|p| {
                let (a, b) = (p.from.max(0.0), p.to.max(0.0));
                p.density() * (b * b - a * a) / 2.0
            })
            .sum();
        atoms + pieces
    }

    // Antiderivative of the finite part of F (excluding the -∞ mass),
    // vanishing to the left of all breakpoints.
    fn finite_antiderivative(&self, k: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.at < k)
            .map(|a| a.mass * (k - a.at))
            .sum();
        let pieces: f64 = self.uniform.iter().map(|p| p.ramp(k)).sum();
        atoms + pieces
    }

    /// `∫_a^b F(k) dk` for finite `a ≤ b`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.neg_inf_mass * (b - a) + self.finite_antiderivative(b) - self.finite_antiderivative(a)
    }

    /// `χ(ℓ) = ∫ max{ℓ, k} F(dk)`, evaluated as `m + ∫_0^ℓ F` with `m` the
    /// positive-part mean.
    pub fn chi_eval(&self, ell: f64) -> f64 {
        self.positive_part_mean() + self.integral(0.0, ell)
    }

    /// `χ` on `[lo, hi]` as a piecewise-linear function.
    ///
    /// Exact when `F` has no uniform pieces. Over a uniform piece `χ` is
    /// quadratic with second derivative equal to the density `d`, so linear
    /// interpolation on a cell of width `w` errs by at most `d w² / 8`; cells
    /// are chosen to keep that below `1e-9`.
    pub fn chi(&self, lo: f64, hi: f64) -> Result<PiecewiseLinearFn> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(domain(format!(
                "chi needs a bounded domain lo < hi, got [{lo}, {hi}]"
            )));
        }
        let mut cuts = vec![lo];
        cuts.extend(self.breakpoints().into_iter().filter(|&b| b > lo && b < hi));
        cuts.push(hi);

        let mut xs = Vec::new();
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = 0.5 * (a + b);
            let density: f64 = self
                .uniform
                .iter()
                .filter(|p| p.from <= a && p.to >= b && p.from < mid && mid < p.to)
                .map(UniformPiece::density)
                .sum();
            let cells = if density > 0.0 {
                ((b - a) * (density / (8.0 * 1e-9)).sqrt()).ceil().max(1.0)
            } else {
                1.0
            };
            if xs.len() as f64 + cells > MAX_CHI_KNOTS as f64 {
                return Err(Error::Numerical(format!(
                    "chi on [{lo}, {hi}] needs more than {MAX_CHI_KNOTS} knots"
                )));
            }
            let cells = cells as usize;
            for i in 0..cells {
                xs.push(a + (b - a) * i as f64 / cells as f64);
            }
        }
        xs.push(hi);
        PiecewiseLinearFn::new(xs.into_iter().map(|x| (x, self.chi_eval(x))).collect())
    }

    /// Evaluation form of an atom-only CDF.
    pub fn to_step_fn(&self) -> Result<StepFn> {
        if !self.is_atom_only() {
            return Err(domain("only atom-only CDFs have a step-function form"));
        }
        let mut acc = self.neg_inf_mass;
        let steps = self
            .atoms
            .iter()
            .map(|a| {
                acc += a.mass;
                (a.at, acc.min(1.0))
            })
            .collect();
        StepFn::new(self.neg_inf_mass, steps)
    }

    /// Whether every atom and piece lies in `s` (and there is no mass at
    /// `-∞` unless `allow_neg_inf`).
    pub fn concentrated_on(&self, s: &SetDescriptor, allow_neg_inf: bool) -> bool {
        if self.neg_inf_mass > 0.0 && !allow_neg_inf {
            return false;
        }
        self.atoms.iter().all(|a| s.contains(a.at))
            && self.uniform.iter().all(|p| {
                SetDescriptor::new(vec![Component::open(p.from, p.to)])
                    .map(|piece| piece.is_subset_of(s))
                    .unwrap_or(false)
            })
    }
}

// Splits overlapping pieces into disjoint elementary pieces with the summed
// density.
fn split_pieces(pieces: Vec<UniformPiece>) -> Vec<UniformPiece> {
    if pieces.len() <= 1 {
        return pieces;
    }
    let mut ends: Vec<f64> = pieces.iter().flat_map(|p| [p.from, p.to]).collect();
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    let mut out = Vec::new();
    for w in ends.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mass: f64 = pieces
            .iter()
            .filter(|p| p.from <= a && p.to >= b)
            .map(|p| p.density() * (b - a))
            .sum();
        if mass > 0.0 {
            out.push(UniformPiece {
                from: a,
                to: b,
                mass,
            });
        }
    }
    out
}

/// `F̂` first-order stochastically dominates `F`: `F̂ ≤ F` everywhere.
///
/// Both CDFs are linear between consecutive breakpoints, so comparing
/// values and left limits at the union of breakpoints and `grid` is exact.
pub fn fosd_leq(f: &ExtendedCdf, f_hat: &ExtendedCdf, grid: &[f64], tol: f64) -> Result<bool> {
    if grid.is_empty() {
        return Err(domain("fosd_leq needs a non-empty grid"));
    }
    if f_hat.neg_inf_mass > f.neg_inf_mass + tol {
        return Ok(false);
    }
    let mut pts: Vec<f64> = grid.iter().copied().filter(|x| x.is_finite()).collect();
    pts.extend(f.breakpoints());
    pts.extend(f_hat.breakpoints());
    Ok(pts
        .iter()
        .all(|&k| f_hat.cdf(k) <= f.cdf(k) + tol && f_hat.cdf_left(k) <= f.cdf_left(k) + tol))
}

/// `F̂` is better than `F` in the reverse hazard rate order on `K`:
/// `F(ℓ) F̂(k) ≤ F(k) F̂(ℓ) + tol` for all `k < ℓ` in `K`.
pub fn rhr_geq(f: &ExtendedCdf, f_hat: &ExtendedCdf, k_set: &[f64], tol: f64) -> bool {
    rhr_violation(f, f_hat, k_set, tol).is_none()
}

/// First pair `(k, ℓ)` violating [`rhr_geq`].
pub fn rhr_violation(
    f: &ExtendedCdf,
    f_hat: &ExtendedCdf,
    k_set: &[f64],
    tol: f64,
) -> Option<(f64, f64)> {
    let mut ks = k_set.to_vec();
    ks.sort_by(f64::total_cmp);
    ks.dedup();
    let vals: Vec<(f64, f64)> = ks.iter().map(|&k| (f.cdf(k), f_hat.cdf(k))).collect();
    for i in 0..ks.len() {
        for j in i + 1..ks.len() {
            let (fk, fhk) = vals[i];
            let (fl, fhl) = vals[j];
            if fl * fhk > fk * fhl + tol {
                return Some((ks[i], ks[j]));
            }
        }
    }
    None
}

/// Right-continuous step function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFn {
    initial: f64,
    steps: Vec<(f64, f64)>,
}

impl StepFn {
    /// `initial` holds on `(-∞, steps[0].0)`; `steps[i].1` on
    /// `[steps[i].0, steps[i+1].0)`.
    pub fn new(initial: f64, steps: Vec<(f64, f64)>) -> Result<Self> {
        if steps.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(invalid("step breakpoints must be strictly increasing"));
        }
        Ok(StepFn { initial, steps })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.steps.partition_point(|s| s.0 <= x);
        if i == 0 {
            self.initial
        } else {
            self.steps[i - 1].1
        }
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn steps(&self) -> &[(f64, f64)] {
        &self.steps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cdf(alpha: f64, atoms: &[(f64, f64)], pieces: &[(f64, f64, f64)]) -> ExtendedCdf {
        ExtendedCdf::new(alpha, atoms.to_vec(), pieces.to_vec()).unwrap()
    }

    // χ(ℓ) = F(ℓ)ℓ + ∫_{(ℓ,∞)} k F(dk), evaluated term by term.
    fn chi_direct(f: &ExtendedCdf, ell: f64) -> f64 {
        let above_atoms: f64 = f
            .atoms()
            .iter()
            .filter(|a| a.at > ell)
            .map(|a| a.at * a.mass)
            .sum();
        let above_pieces: f64 = f
            .uniform_pieces()
            .iter()
            .map(|p| {
                let (a, b) = (p.from.max(ell), p.to.max(ell));
                p.mass / (p.to - p.from) * (b * b - a * a) / 2.0
            })
            .sum();
        f.cdf(ell) * ell + above_atoms + above_pieces
    }

    #[test]
    fn cdf_examples() {
        let f = ExtendedCdf::degenerate(0.0).unwrap();
        assert_eq!(f.cdf(-1.0), 0.0);
        assert_eq!(f.cdf(0.0), 1.0);
        assert_eq!(f.cdf_left(0.0), 0.0);
        let g = cdf(0.5, &[(1.0, 0.5)], &[]);
        assert_eq!(g.cdf(0.0), 0.5);
        let h = cdf(0.0, &[], &[(0.0, 1.0, 1.0)]);
        assert_eq!(h.cdf(0.25), 0.25);
    }

    #[test]
    fn positive_part_mean_examples() {
        assert_eq!(
            ExtendedCdf::degenerate(2.0).unwrap().positive_part_mean(),
            2.0
        );
        assert_eq!(
            ExtendedCdf::degenerate(-3.0).unwrap().positive_part_mean(),
            0.0
        );
        let u = cdf(0.0, &[], &[(-1.0, 1.0, 1.0)]);
        assert!((u.positive_part_mean() - 0.25).abs() < 1e-15);
        // Riemann midpoint sum of k/2 on (0,1).
        let n = 100_000;
        let riemann: f64 = (0..n)
            .map(|i| (i as f64 + 0.5) / n as f64 * 0.5 / n as f64)
            .sum();
        assert!((riemann - 0.25).abs() < 1e-9);
    }

    #[test]
    fn chi_examples() {
        let f = ExtendedCdf::degenerate(0.0).unwrap();
        assert_eq!(f.chi_eval(-5.0), 0.0);
        assert_eq!(f.chi_eval(3.0), 3.0);
        let chi = f.chi(-2.0, 2.0).unwrap();
        for x in [-2.0, -0.5, 0.0, 1.0, 2.0] {
            assert!((chi.eval(x).unwrap() - x.max(0.0)).abs() < 1e-12);
        }

        let g = cdf(0.5, &[(1.0, 0.5)], &[]);
        assert_eq!(g.chi_eval(0.0), 0.5);
        assert_eq!(g.chi_eval(1.0), 1.0);
        assert_eq!(g.chi_eval(2.0), 2.0);

        let u = cdf(0.0, &[], &[(0.0, 1.0, 1.0)]);
        assert!((u.chi_eval(0.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn chi_on_mixed_cdf_meets_interpolation_bound() {
        let f = cdf(0.1, &[(0.5, 0.3)], &[(-1.0, 2.0, 0.4), (0.0, 0.5, 0.2)]);
        let chi = f.chi(-2.0, 3.0).unwrap();
        let k = chi.knots();
        for w in k.windows(2) {
            let mid = 0.5 * (w[0].x + w[1].x);
            let err = (chi.eval(mid).unwrap() - f.chi_eval(mid)).abs();
            assert!(err < 1e-9, "midpoint error {err} at {mid}");
        }
        for kn in k {
            assert!((kn.y - chi_direct(&f, kn.x)).abs() < 1e-9);
        }
        assert!(chi.is_convex(1e-12));
    }

    #[test]
    fn overlapping_pieces_are_split() {
        let f = cdf(0.0, &[], &[(0.0, 2.0, 0.5), (1.0, 3.0, 0.5)]);
        assert_eq!(f.uniform_pieces().len(), 3);
        for k in [0.5f64, 1.0, 1.5, 2.5] {
            let expect = 0.25 * k.clamp(0.0, 2.0) + 0.25 * (k - 1.0).clamp(0.0, 2.0);
            assert!((f.cdf(k) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_masses() {
        assert!(ExtendedCdf::new(0.5, vec![(0.0, 0.4)], vec![]).is_err());
        assert!(ExtendedCdf::new(-0.1, vec![(0.0, 1.1)], vec![]).is_err());
        assert!(ExtendedCdf::new(0.0, vec![], vec![(1.0, 1.0, 1.0)]).is_err());
        assert!(ExtendedCdf::new(0.0, vec![(f64::NAN, 1.0)], vec![]).is_err());
    }

    #[test]
    fn json_accepts_string_masses() {
        let f: ExtendedCdf = serde_json::from_str(
            r#"{"neg_inf_mass": "0.25", "atoms": [{"at": 1, "mass": 0.5}], "uniform": [{"from": 0, "to": 1, "mass": "0.25"}]}"#,
        )
        .unwrap();
        assert_eq!(f.neg_inf_mass(), 0.25);
        assert_eq!(f.cdf(1.0), 1.0);
        let bad: std::result::Result<ExtendedCdf, _> =
            serde_json::from_str(r#"{"atoms": [{"at": 1, "mass": 0.5}]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn fosd_examples() {
        let a0 = ExtendedCdf::degenerate(0.0).unwrap();
        let a1 = ExtendedCdf::degenerate(1.0).unwrap();
        assert!(fosd_leq(&a0, &a0, &[0.0], 1e-9).unwrap());
        assert!(fosd_leq(&a0, &a1, &[0.0], 1e-9).unwrap());
        assert!(!fosd_leq(&a1, &a0, &[0.0], 1e-9).unwrap());
        assert!(fosd_leq(&a0, &a1, &[], 1e-9).is_err());
    }

    #[test]
    fn rhr_examples() {
        let f = cdf(0.0, &[(0.0, 0.5), (2.0, 0.5)], &[]);
        let fh = ExtendedCdf::degenerate(2.0).unwrap();
        let k = [0.0, 1.0, 2.0];
        assert!(rhr_geq(&f, &f, &k, 1e-9));
        assert!(rhr_geq(&f, &fh, &k, 1e-9));
        assert!(!rhr_geq(&fh, &f, &k, 1e-9));
        assert_eq!(rhr_violation(&fh, &f, &k, 1e-9), Some((0.0, 2.0)));
    }

    #[test]
    fn concentration_examples() {
        let s = SetDescriptor::from_points(&[0.0, 1.0, 2.0]).unwrap();
        assert!(ExtendedCdf::degenerate(1.0)
            .unwrap()
            .concentrated_on(&s, false));
        assert!(!ExtendedCdf::degenerate(0.5)
            .unwrap()
            .concentrated_on(&s, false));
        let one = SetDescriptor::from_points(&[1.0]).unwrap();
        let f = cdf(0.3, &[(1.0, 0.7)], &[]);
        assert!(f.concentrated_on(&one, true));
        assert!(!f.concentrated_on(&one, false));
        let interval = SetDescriptor::new(vec![Component::open(0.0, 1.0)]).unwrap();
        assert!(cdf(0.0, &[], &[(0.0, 1.0, 1.0)]).concentrated_on(&interval, false));
    }

    #[test]
    fn lift_below_moves_lower_mass_to_x() {
        let f = cdf(0.2, &[(-1.0, 0.2), (2.0, 0.2)], &[(0.0, 2.0, 0.4)]);
        let g = f.lift_below(1.0).unwrap();
        assert_eq!(g.neg_inf_mass(), 0.0);
        assert!((g.atom_mass_at(1.0) - 0.6).abs() < 1e-15);
        for k in [1.0, 1.5, 2.0, 3.0] {
            assert!((g.cdf(k) - f.cdf(k)).abs() < 1e-15);
        }
        assert_eq!(g.cdf(0.999), 0.0);
    }

    #[test]
    fn step_fn_form() {
        let f = cdf(0.25, &[(0.0, 0.25), (1.0, 0.5)], &[]);
        let s = f.to_step_fn().unwrap();
        assert_eq!(s.eval(-1.0), 0.25);
        assert_eq!(s.eval(0.0), 0.5);
        assert_eq!(s.eval(0.5), 0.5);
        assert_eq!(s.eval(1.0), 1.0);
    }

    fn arb_cdf() -> impl Strategy<Value = ExtendedCdf> {
        arb_mixture(3)
    }

    fn arb_atom_cdf() -> impl Strategy<Value = ExtendedCdf> {
        arb_mixture(0)
    }

    fn arb_mixture(max_pieces: usize) -> impl Strategy<Value = ExtendedCdf> {
        (
            0u32..4,
            prop::collection::vec((-40i32..40, 1u32..10), 0..4),
            prop::collection::vec((-40i32..40, 1i32..20, 1u32..10), 0..=max_pieces),
        )
            .prop_filter_map("needs some mass", |(a, atoms, pieces)| {
                let total = a
                    + atoms.iter().map(|x| x.1).sum::<u32>()
                    + pieces.iter().map(|x| x.2).sum::<u32>();
                if total == 0 {
                    return None;
                }
                let t = f64::from(total);
                ExtendedCdf::new(
                    f64::from(a) / t,
                    atoms
                        .iter()
                        .map(|&(x, m)| (f64::from(x) / 8.0, f64::from(m) / t))
                        .collect(),
                    pieces
                        .iter()
                        .map(|&(x, w, m)| {
                            let from = f64::from(x) / 8.0;
                            (from, from + f64::from(w) / 8.0, f64::from(m) / t)
                        })
                        .collect(),
                )
                .ok()
            })
    }

    proptest! {
        #[test]
        fn chi_is_increasing_convex_one_lipschitz(f in arb_cdf()) {
            let chi = f.chi(-6.0, 6.0).unwrap();
            for s in chi.right_derivative() {
                prop_assert!(s.slope >= -1e-9 && s.slope <= 1.0 + 1e-9, "slope {}", s.slope);
            }
            prop_assert!(chi.is_convex(1e-6));
        }

        #[test]
        fn chi_eval_matches_definition(f in arb_cdf(), ell in -8.0f64..8.0) {
            let a = f.chi_eval(ell);
            let b = chi_direct(&f, ell);
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
            if ell >= 0.0 {
                let above = b - f.cdf(ell) * ell;
                prop_assert!(a >= f.cdf(ell) * ell - 1e-9);
                prop_assert!(a >= above - 1e-9);
            }
        }

        #[test]
        fn chi_derivative_is_cdf(f in arb_cdf(), ell in -6.0f64..6.0) {
            let h = 1e-4;
            let clear = f.breakpoints().iter().all(|b| (b - ell).abs() > 2.0 * h);
            prop_assume!(clear);
            let d = (f.chi_eval(ell + h) - f.chi_eval(ell - h)) / (2.0 * h);
            prop_assert!((d - f.cdf(ell)).abs() < 1e-6);
        }

        #[test]
        fn rhr_implies_fosd(f in arb_atom_cdf(), g in arb_atom_cdf()) {
            let mut k = f.breakpoints();
            k.extend(g.breakpoints());
            k.sort_by(f64::total_cmp);
            k.dedup();
            prop_assume!(!k.is_empty());
            k.insert(0, k[0] - 1.0);
            let top = *k.last().unwrap();
            prop_assume!(f.cdf(top) == 1.0 && g.cdf(top) == 1.0);
            if rhr_geq(&f, &g, &k, 1e-12) {
                prop_assert!(fosd_leq(&f, &g, &k, 1e-9).unwrap());
            }
        }

        #[test]
        fn negative_tail_finite_iff_no_mass_at_neg_inf(f in arb_cdf()) {
            // ∫_{-M}^0 F stays bounded as M grows iff α = 0.
            let lo = f.support_inf().unwrap_or(0.0).min(0.0);
            let i1 = f.integral(lo - 1e3, 0.0);
            let i2 = f.integral(lo - 1e6, 0.0);
            let bounded = (i2 - i1).abs() < 1e-6;
            prop_assert_eq!(bounded, f.neg_inf_mass() == 0.0);
        }
    }
}
