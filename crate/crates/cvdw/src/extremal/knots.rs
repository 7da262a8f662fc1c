//! Norm minimization over perfect-spline sources: derivative-free simplex
//! search in knot-gap coordinates.
//!
//! Gaps live on the simplex {g_j > 0, Σ g_j = 2π} through a softmax map of
//! 2n−1 free logits (the last logit is pinned to remove the null
//! direction). Rotation of the knot set is a symmetry of the objective, so
//! the knots are placed from 0 and later rotated only by the constraint
//! enforcement. Collapsed gaps drop their knot pair, matching the closure
//! of the knot domain.

use std::f64::consts::{PI, TAU};

use rand::Rng;

use crate::error::{Error, Result};
use crate::exec::par_map;
use crate::kernel::KernelSpec;
use crate::oscillation::trial_rng;
use crate::quad::bisect_monotone;
use crate::spectral::{analyze, compose_link, convolve, synthesize};
use crate::spline::KnotVector;
use crate::standard::{euler_spline_value, StandardFunction};

use super::member::enforce_step_constraint;
use super::ClassConfig;

/// Result of the multi-start search.
#[derive(Debug, Clone)]
pub struct KnotSearch {
    pub knots: KnotVector,
    pub a: f64,
    pub value: f64,
    /// Largest deviation of the returned gaps from equidistance.
    pub gap_spread: f64,
    /// Best objective value reached from each start.
    pub start_values: Vec<f64>,
    pub evals: usize,
}

/// Minimize `‖a + G∗φ(K_β∗h_ξ)‖_q` over admissible knot vectors with at
/// most 2n knots (and over the constant when the class admits one). With
/// `polish_sup` the final value is re-measured in the sup norm.
pub fn minimize_knot_norm(
    cfg: &ClassConfig,
    n: u32,
    q: f64,
    polish_sup: bool,
    seed: u64,
    n_grid: usize,
) -> Result<KnotSearch> {
    if q < 1.0 {
        return Err(Error::NormExponent(q));
    }
    cfg.validate()?;
    let dim = (2 * n - 1) as usize;
    let starts: Vec<(usize, Vec<f64>)> = (0..8)
        .map(|s| {
            let mut rng = trial_rng(seed, s as u64 ^ 0x6b6e_6f74);
            let theta = match s {
                0 => vec![0.0; dim],
                1 => (0..dim).map(|_| rng.random_range(-0.05..0.05)).collect(),
                _ => (0..dim).map(|_| rng.random_range(-0.7..0.7)).collect(),
            };
            (s, theta)
        })
        .collect();

    let outcomes = par_map(starts, |(_, theta0)| {
        let objective = |theta: &[f64]| objective_value(cfg, n, q, theta).unwrap_or(f64::INFINITY);
        nelder_mead(&objective, &theta0, 0.15, 420)
    });

    let mut evals = 0;
    let mut start_values = Vec::with_capacity(outcomes.len());
    let mut best: Option<(Vec<f64>, f64)> = None;
    for (theta, value, used) in outcomes {
        evals += used;
        start_values.push(value);
        if best.as_ref().map_or(true, |(_, v)| value < *v) {
            best = Some((theta, value));
        }
    }
    let (theta, _) = best.expect("at least one start");

    // Rebuild at full resolution and re-measure with the rigorous norm.
    let knots = realize_knots(cfg, n, &theta)?;
    let (a, _) = optimal_constant(cfg, &knots, q, 2048)?;
    let sf = StandardFunction::with_constant(
        cfg.kernel(),
        cfg.link(),
        cfg.beta,
        knots.clone(),
        a,
        n_grid,
    )?;
    let value = if polish_sup {
        sf.sup_norm()
    } else {
        crate::analysis::lq_norm_of(&|t| sf.value_at(t), 4096, q)?
    };
    let m = knots.count() / 2;
    let ideal = PI / m as f64;
    let b = knots.boundaries();
    let mut gap_spread = 0.0f64;
    // Gaps are rotation-invariant; compare consecutive knot distances
    // (plus the wrap) against the equidistant spacing.
    let ks = knots.knots();
    for i in 0..ks.len() {
        let gap = if i + 1 < ks.len() {
            ks[i + 1] - ks[i]
        } else {
            ks[0] + TAU - ks[i]
        };
        gap_spread = gap_spread.max((gap - ideal).abs());
    }
    let _ = b;
    Ok(KnotSearch {
        knots,
        a,
        value,
        gap_spread,
        start_values,
        evals,
    })
}

/// Gaps from logits; the last logit is implicitly zero.
fn gaps_from_theta(theta: &[f64]) -> Vec<f64> {
    let mut w: Vec<f64> = theta.iter().map(|&t| t.exp()).collect();
    w.push(1.0);
    let sum: f64 = w.iter().sum();
    w.iter().map(|&x| TAU * x / sum).collect()
}

/// Knot vector from logits, with collapsed intervals merged away and the
/// Θ-constraint enforced.
fn realize_knots(cfg: &ClassConfig, n: u32, theta: &[f64]) -> Result<KnotVector> {
    let gaps = gaps_from_theta(theta);
    assert_eq!(gaps.len(), 2 * n as usize);
    let mut knots = Vec::with_capacity(gaps.len());
    let mut pos = 0.0;
    for &g in &gaps[..gaps.len() - 1] {
        pos += g;
        knots.push(pos);
    }
    knots.insert(0, 0.0);
    // Merge knot pairs whose interval collapsed.
    let mut merged: Vec<f64> = Vec::with_capacity(knots.len());
    let mut skip = false;
    for i in 0..knots.len() {
        if skip {
            skip = false;
            continue;
        }
        let next = if i + 1 < knots.len() { knots[i + 1] } else { knots[0] + TAU };
        if next - knots[i] < 1e-9 {
            skip = true;
            continue;
        }
        merged.push(knots[i]);
    }
    if merged.len() < 2 {
        return Err(Error::Knots("all intervals collapsed".into()));
    }
    if merged.len() % 2 != 0 {
        merged.pop();
    }
    let kv = KnotVector::new(merged)?;
    if cfg.constants_allowed() {
        enforce_step_constraint(cfg, kv)
    } else {
        Ok(kv)
    }
}

/// The search objective: best constant, then the grid norm.
fn objective_value(cfg: &ClassConfig, n: u32, q: f64, theta: &[f64]) -> Result<f64> {
    let knots = realize_knots(cfg, n, theta)?;
    let (_, value) = optimal_constant(cfg, &knots, q, 1024)?;
    Ok(value)
}

/// Minimize `‖a + f‖_q` over the constant on a sampled grid; returns
/// (a*, norm). Classes without constants fix a = 0.
fn optimal_constant(
    cfg: &ClassConfig,
    knots: &KnotVector,
    q: f64,
    samples: usize,
) -> Result<(f64, f64)> {
    let f = sample_pipeline(cfg, knots, samples)?;
    let h = TAU / samples as f64;
    let norm = |a: f64| -> f64 {
        let peak = f.iter().fold(0.0f64, |m, &v| m.max((a + v).abs())).max(1e-300);
        let sum: f64 = f
            .iter()
            .map(|&v| {
                let x = (a + v).abs() / peak;
                if q == q.trunc() && q <= 127.0 {
                    x.powi(q as i32)
                } else {
                    x.powf(q)
                }
            })
            .sum();
        peak * (sum * h).powf(1.0 / q)
    };
    if !cfg.constants_allowed() {
        return Ok((0.0, norm(0.0)));
    }
    if q == 2.0 {
        let a = -f.iter().sum::<f64>() / samples as f64;
        return Ok((a, norm(a)));
    }
    // d/da Σ|a+f|^q is increasing in a; bisect its sign change.
    let slope = |a: f64| -> f64 {
        f.iter()
            .map(|&v| {
                let x: f64 = a + v;
                let m = x.abs().max(1e-300);
                x.signum() * (m).powf(q - 1.0)
            })
            .sum()
    };
    let bound = f.iter().fold(0.0f64, |m, &v| m.max(v.abs())) + 1.0;
    let a = match bisect_monotone(&slope, -bound, bound, 1e-12, 80) {
        Some((a, _)) => a,
        None => 0.0,
    };
    Ok((a, norm(a)))
}

/// Sample `G∗φ(K_β∗h_ξ)` (no constant) on a uniform grid; exact Euler
/// route for β = 0, short spectral pipeline otherwise.
fn sample_pipeline(cfg: &ClassConfig, knots: &KnotVector, samples: usize) -> Result<Vec<f64>> {
    if cfg.beta == 0.0 {
        let r = cfg.kernel().bernoulli_order().unwrap();
        return Ok((0..samples)
            .map(|j| euler_spline_value(r, knots, TAU * j as f64 / samples as f64))
            .collect());
    }
    let kmax = samples / 2 - 1;
    let smoothed = convolve(&KernelSpec::analytic(cfg.beta), &knots.h_fourier(kmax));
    let sampled = synthesize(&smoothed, samples)?;
    let linked = compose_link(cfg.link(), &sampled)?;
    let out = convolve(&cfg.kernel(), &analyze(&linked));
    Ok(synthesize(&out, samples)?.values().to_vec())
}

/// Plain Nelder–Mead with standard coefficients; terminates on simplex
/// collapse in value or position.
fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    step: f64,
    max_evals: usize,
) -> (Vec<f64>, f64, usize) {
    let dim = x0.len();
    let mut evals = 0usize;
    let eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        let spread = (worst - best).abs();
        let diam = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if spread <= 1e-13 * (best.abs() + 1e-13) || diam <= 1e-10 {
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|i| simplex[..dim].iter().map(|(x, _)| x[i]).sum::<f64>() / dim as f64)
            .collect();
        let combine = |alpha: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[dim].0)
                .map(|(c, w)| c + alpha * (c - w))
                .collect()
        };
        let reflected = combine(1.0);
        let fr = eval(&reflected, &mut evals);
        if fr < simplex[0].1 {
            let expanded = combine(2.0);
            let fe = eval(&expanded, &mut evals);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let contracted = combine(-0.5);
            let fc = eval(&contracted, &mut evals);
            if fc < simplex[dim].1 {
                simplex[dim] = (contracted, fc);
            } else {
                let best_x = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = item
                        .0
                        .iter()
                        .zip(&best_x)
                        .map(|(a, b)| b + 0.5 * (a - b))
                        .collect();
                    let v = eval(&x, &mut evals);
                    *item = (x, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    (x, v, evals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_minimizes_a_quadratic() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 2.0 * (x[1] + 0.5).powi(2);
        let (x, v, _) = nelder_mead(&f, &[0.0, 0.0], 0.25, 400);
        assert!(v < 1e-10);
        assert!((x[0] - 1.0).abs() < 1e-4 && (x[1] + 0.5).abs() < 1e-4);
    }

    #[test]
    fn equidistant_knots_are_a_fixed_point() {
        // Starting at the equidistant logits, the returned value matches the
        // standard function norm.
        let cfg = ClassConfig::sobolev(1).unwrap();
        let search = minimize_knot_norm(&cfg, 2, 2.0, false, 42, 2048).unwrap();
        let phi = cfg.standard(2, 2048).unwrap();
        let direct = crate::analysis::lq_norm_of(&|t| phi.value_at(t), 2048, 2.0).unwrap();
        assert!(
            (search.value - direct).abs() < 1e-4,
            "search {} direct {}",
            search.value,
            direct
        );
        assert!(search.gap_spread < 1e-3, "spread {}", search.gap_spread);
    }
}
