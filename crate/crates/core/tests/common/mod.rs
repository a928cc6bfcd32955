// Seeded instance generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use risklens_core::sampling;
use risklens_core::{Decomposition, ExtendedCdf, PhysicalOutsideOption, RiskAttitude};

pub fn rng(seed: u64) -> ChaCha8Rng {
    sampling::rng(seed)
}

/// `n` sorted distinct alternatives with gaps in `[0.5, 2)`.
pub fn alternatives<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut x = rng.gen_range(-2.0..2.0);
    (0..n)
        .map(|_| {
            let out = x;
            x += rng.gen_range(0.5..2.0);
            out
        })
        .collect()
}

/// Strictly increasing `v` on `n` alternatives.
pub fn increasing<R: Rng>(rng: &mut R, n: usize) -> RiskAttitude {
    let xs = alternatives(rng, n);
    let scale = rng.gen_range(0.5..5.0);
    let shift = rng.gen_range(-3.0..3.0);
    let vals = sampling::random_increasing(rng, n)
        .into_iter()
        .map(|y| shift + scale * y)
        .collect();
    RiskAttitude::new(xs, vals).unwrap()
}

/// `k` positive weights summing to `total`, each at least a few percent.
pub fn weights<R: Rng>(rng: &mut R, k: usize, total: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|w| total * w / s).collect()
}

/// Atom-only `F` on `v(X) ∪ {-∞}` that is identified exactly from
/// `(χ∘v, v)`: positive mass at `-∞` and atoms strictly between the
/// smallest and largest values, so `F` already reaches one below the top.
pub fn identifiable_f<R: Rng>(rng: &mut R, v: &RiskAttitude) -> ExtendedCdf {
    let w = v.distinct_values();
    let m = w.len();
    let inner: Vec<f64> = w[1..m - 1]
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.7))
        .collect();
    let ws = weights(rng, inner.len() + 1, 1.0);
    let atoms = inner.into_iter().zip(ws[1..].iter().copied()).collect();
    ExtendedCdf::new(ws[0], atoms, vec![]).unwrap()
}

/// Atom-only `F` on `v(X) ∪ {-∞}` with `F(min v) > 0`.
pub fn outside_option<R: Rng>(rng: &mut R, v: &RiskAttitude) -> ExtendedCdf {
    let w = v.distinct_values();
    let mut points: Vec<Option<f64>> = vec![None];
    points.extend(w.iter().map(|&a| Some(a)));
    let chosen: Vec<Option<f64>> = points
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.6))
        .collect();
    let mut chosen = if chosen.is_empty() {
        vec![Some(w[0])]
    } else {
        chosen
    };
    if !chosen.iter().any(|p| p.map_or(true, |a| a == w[0])) {
        chosen.push(if rng.gen_bool(0.5) { None } else { Some(w[0]) });
    }
    let ws = weights(rng, chosen.len(), 1.0);
    let mut alpha = 0.0;
    let mut atoms = Vec::new();
    for (p, m) in chosen.into_iter().zip(ws) {
        match p {
            None => alpha += m,
            Some(a) => atoms.push((a, m)),
        }
    }
    ExtendedCdf::new(alpha, atoms, vec![]).unwrap()
}

/// `F̂ = F^θ` with `θ > 1`, better than `F` in the reverse hazard rate
/// order, on the points of `v(X)`.
pub fn rhr_improvement<R: Rng>(rng: &mut R, f: &ExtendedCdf, v: &RiskAttitude) -> ExtendedCdf {
    let theta = rng.gen_range(1.1..3.0);
    let w = v.distinct_values();
    let vals: Vec<f64> = w.iter().map(|&k| f.cdf(k).powf(theta)).collect();
    let mut vals = vals;
    *vals.last_mut().unwrap() = 1.0;
    ExtendedCdf::from_cdf_values(f.neg_inf_mass().powf(theta), &w, &vals).unwrap()
}

/// Physical outside option on the alternatives with positive mass at or
/// below the smallest one.
pub fn physical<R: Rng>(rng: &mut R, xs: &[f64]) -> PhysicalOutsideOption {
    let k = rng.gen_range(1..=xs.len());
    let mut picked: Vec<f64> = xs.choose_multiple(rng, k).copied().collect();
    let none = rng.gen_bool(0.5);
    if !none && !picked.contains(&xs[0]) {
        picked.push(xs[0]);
    }
    let ws = weights(rng, picked.len() + 1, 1.0);
    let (unavailable, ws) = if none {
        (ws[0], &ws[1..])
    } else {
        (0.0, &ws[..picked.len()])
    };
    let total = unavailable + ws.iter().sum::<f64>();
    let options = picked
        .into_iter()
        .zip(ws)
        .map(|(a, &m)| (a, m / total))
        .collect();
    PhysicalOutsideOption::new(unavailable / total, options).unwrap()
}

/// `v + c v²` on `v ≥ 0`, an increasing convex transform of `v`.
pub fn convex_transform<R: Rng>(rng: &mut R, v: &RiskAttitude) -> RiskAttitude {
    let lo = v.min_value();
    let c = rng.gen_range(0.1..2.0);
    v.map(|y| (y - lo) + c * (y - lo) * (y - lo)).unwrap()
}

/// Increasing `u` plus an `F` satisfying the existence condition: either
/// mass at `-∞`, or none and `u` bounded below (automatic for finite `X`).
pub fn construct_v_instance<R: Rng>(rng: &mut R) -> (RiskAttitude, ExtendedCdf) {
    let n = rng.gen_range(2..=6);
    let u = increasing(rng, n);
    let alpha = if rng.gen_bool(0.5) {
        0.0
    } else {
        rng.gen_range(0.05..0.8)
    };
    (u, mixed_cdf(rng, alpha))
}

/// Mixed CDF with up to three atoms and up to two uniform pieces on
/// `[-4, 4]`, plus mass `alpha` at `-∞`.
pub fn mixed_cdf<R: Rng>(rng: &mut R, alpha: f64) -> ExtendedCdf {
    let na = rng.gen_range(0..=3);
    let np = rng.gen_range(if na == 0 { 1 } else { 0 }..=2);
    let ws = weights(rng, na + np, 1.0 - alpha);
    let atoms = (0..na).map(|i| (rng.gen_range(-4.0..4.0), ws[i])).collect();
    let pieces = (0..np)
        .map(|i| {
            let a = rng.gen_range(-4.0..3.0);
            (a, a + rng.gen_range(0.2..2.0), ws[na + i])
        })
        .collect();
    ExtendedCdf::new(alpha, atoms, pieces).unwrap()
}

/// A decomposition that [`risklens_core::decompose`] recovers exactly.
///
/// `G` has mass at `-∞` and none at the smallest alternative. `H` has no
/// mass at the top; with `with_h_star` it sits below the second-highest
/// alternative and `H★` shifts it up.
pub fn decomposition<R: Rng>(
    rng: &mut R,
    xs: &[f64],
    lambda: f64,
    with_h_star: bool,
) -> Decomposition {
    let n = xs.len();
    let gw = weights(rng, n, 1.0);
    let g = ExtendedCdf::new(
        gw[0],
        xs[1..]
            .iter()
            .copied()
            .zip(gw[1..].iter().copied())
            .collect(),
        vec![],
    )
    .unwrap();
    if lambda == 1.0 {
        return Decomposition {
            lambda,
            g,
            h: ExtendedCdf::degenerate(xs[0]).unwrap(),
            h_star: None,
            h_arbitrary: true,
        };
    }
    let h_top = if with_h_star { n - 2 } else { n - 1 };
    let hw = weights(rng, h_top, 1.0);
    let h_atoms: Vec<(f64, f64)> = xs[..h_top]
        .iter()
        .copied()
        .zip(hw.iter().copied())
        .collect();
    let h = ExtendedCdf::new(0.0, h_atoms.clone(), vec![]).unwrap();
    let h_star = with_h_star.then(|| {
        let s = rng.gen_range(0.0..0.5);
        let mut atoms: Vec<(f64, f64)> = hw
            .iter()
            .enumerate()
            .map(|(i, &m)| (xs[i + 1], (1.0 - s) * m))
            .collect();
        atoms.push((xs[n - 1], s));
        ExtendedCdf::new(0.0, atoms, vec![]).unwrap()
    });
    Decomposition {
        lambda,
        g,
        h,
        h_star,
        h_arbitrary: false,
    }
}

/// Largest difference in mass at `-∞` or at any of `xs`.
pub fn mass_gap(a: &ExtendedCdf, b: &ExtendedCdf, xs: &[f64]) -> f64 {
    xs.iter()
        .map(|&x| (a.atom_mass_at(x) - b.atom_mass_at(x)).abs())
        .fold((a.neg_inf_mass() - b.neg_inf_mass()).abs(), f64::max)
}
