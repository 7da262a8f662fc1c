//! First-order stationarity residuals of the constrained knot-norm
//! minimum.
//!
//! At an optimum of `‖a + G∗φ(K_β∗h_ξ)‖_q^q` subject to the orthogonality
//! constraint, with `f = q|p|^{q−1} sgn p` for the optimal `p`, the
//! residual system consists of `∫f = 0` (stationarity in the constant),
//! one equation per knot involving the multiplier θ, and the constraint
//! integral itself. Equidistant knots annihilate the whole stack with a
//! single θ by the alternation symmetry; generic knots do not.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::kernel::{eval_d, eval_k, KernelSpec};
use crate::quad::{bisect_root, gauss16_split};
use crate::spectral::{analyze, convolve, synthesize, PeriodicGrid};
use crate::spline::KnotVector;
use crate::standard::{euler_spline_value, StandardFunction};

use super::ClassConfig;

#[derive(Debug, Clone)]
pub struct LagrangeResidual {
    /// Fitted (or supplied) multiplier.
    pub theta: f64,
    /// Stationarity in the constant term: ∫ f.
    pub constant_residual: f64,
    /// One first-order residual per knot, multiplier applied.
    pub knot_residuals: Vec<f64>,
    /// The constraint integral ∫ φ(K_β∗h).
    pub mean_constraint: f64,
}

impl LagrangeResidual {
    pub fn max_knot_residual(&self) -> f64 {
        self.knot_residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// Largest entry of the stacked residual (constant, knots, constraint).
    pub fn stacked_max(&self) -> f64 {
        self.max_knot_residual()
            .max(self.constant_residual.abs())
            .max(self.mean_constraint.abs())
    }
}

/// Evaluate the residual stack at the given knots and constant. With
/// `theta = None` the multiplier is fitted by least squares first.
pub fn lagrange_residual(
    cfg: &ClassConfig,
    knots: &KnotVector,
    a: f64,
    theta: Option<f64>,
    q: f64,
    n_grid: usize,
) -> Result<LagrangeResidual> {
    if !(1.0 < q && q.is_finite()) {
        return Err(Error::NormExponent(q));
    }
    cfg.validate()?;
    if cfg.beta == 0.0 {
        residual_exact(cfg, knots, a, theta, q)
    } else {
        residual_spectral(cfg, knots, a, theta, q, n_grid)
    }
}

fn signed_power(p: f64, q: f64) -> f64 {
    let m = p.abs();
    if m == 0.0 {
        return 0.0;
    }
    q * p.signum() * m.powf(q - 1.0)
}

fn fit_theta(i: &[f64], c: &[f64]) -> f64 {
    let num: f64 = i.iter().zip(c).map(|(a, b)| a * b).sum();
    let den: f64 = c.iter().map(|b| b * b).sum();
    if den == 0.0 {
        0.0
    } else {
        -num / den
    }
}

fn assemble(
    i_vals: Vec<f64>,
    c_vals: Vec<f64>,
    theta: Option<f64>,
    constant_residual: f64,
    mean_constraint: f64,
) -> LagrangeResidual {
    let theta = theta.unwrap_or_else(|| fit_theta(&i_vals, &c_vals));
    let knot_residuals: Vec<f64> = i_vals
        .iter()
        .zip(&c_vals)
        .enumerate()
        .map(|(idx, (i, c))| {
            let sign = if (idx + 1) % 2 == 0 { 1.0 } else { -1.0 };
            sign / PI * (i + theta * c)
        })
        .collect();
    LagrangeResidual {
        theta,
        constant_residual,
        knot_residuals,
        mean_constraint,
    }
}

/// β = 0: the smoothing stage is absent and every integral is done with
/// panels split at the kinks of the integrand.
fn residual_exact(
    cfg: &ClassConfig,
    knots: &KnotVector,
    a: f64,
    theta: Option<f64>,
    q: f64,
) -> Result<LagrangeResidual> {
    let r = cfg
        .kernel()
        .bernoulli_order()
        .ok_or_else(|| Error::Config("polynomial kernel required at β = 0".into()))?;
    let p = |x: f64| a + euler_spline_value(r, knots, x);
    let f = move |x: f64| signed_power(p(x), q);

    let mut breaks: Vec<f64> = knots.knots().to_vec();
    breaks.extend(zeros_of(&p, 2048));
    breaks.push(0.0);
    breaks.push(TAU);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-12);

    let constant_residual = gauss16_split(&f, &breaks, 8);
    let mut i_vals = Vec::with_capacity(knots.count());
    let c_vals = vec![TAU; knots.count()];
    for &xi in knots.knots() {
        let mut b = breaks.clone();
        b.push(xi);
        b.sort_by(f64::total_cmp);
        b.dedup_by(|x, y| (*x - *y).abs() < 1e-12);
        let integrand = |x: f64| f(x) * eval_d(r, (x - xi).rem_euclid(TAU)).unwrap();
        i_vals.push(gauss16_split(&integrand, &b, 8));
    }
    let mean_constraint = TAU * knots.signed_mean();
    Ok(assemble(i_vals, c_vals, theta, constant_residual, mean_constraint))
}

/// β > 0: grid quadrature; the power q is expected even here so the
/// integrands are smooth.
fn residual_spectral(
    cfg: &ClassConfig,
    knots: &KnotVector,
    a: f64,
    theta: Option<f64>,
    q: f64,
    n_grid: usize,
) -> Result<LagrangeResidual> {
    let n = n_grid;
    let h = TAU / n as f64;
    let sf = StandardFunction::with_constant(cfg.kernel(), cfg.link(), cfg.beta, knots.clone(), a, n)?;
    let f_vals: Vec<f64> = sf.grid().values().iter().map(|&pv| signed_power(pv, q)).collect();
    let constant_residual = f_vals.iter().sum::<f64>() * h;

    let smoothed_series = convolve(&KernelSpec::analytic(cfg.beta), &knots.h_fourier(n / 2 - 1));
    let smoothed = synthesize(&smoothed_series, n)?;
    let phi_deriv: Vec<f64> = smoothed
        .values()
        .iter()
        .map(|&v| cfg.link().deriv(v.clamp(-1.0, 1.0)).unwrap())
        .collect();
    let mean_constraint = smoothed
        .values()
        .iter()
        .map(|&v| cfg.link().eval(v.clamp(-1.0, 1.0)).unwrap())
        .sum::<f64>()
        * h;

    let mut i_vals = Vec::with_capacity(knots.count());
    let mut c_vals = Vec::with_capacity(knots.count());
    for &xi in knots.knots() {
        let w: Vec<f64> = (0..n)
            .map(|j| {
                let s = TAU * j as f64 / n as f64;
                phi_deriv[j] * eval_k(cfg.beta, s - xi, 1e-13).unwrap()
            })
            .collect();
        let w_grid = PeriodicGrid::new(w)?;
        c_vals.push(w_grid.values().iter().sum::<f64>() * h);
        let gw = synthesize(&convolve(&cfg.kernel(), &analyze(&w_grid)), n)?;
        let i: f64 = f_vals
            .iter()
            .zip(gw.values())
            .map(|(fv, gv)| fv * gv)
            .sum::<f64>()
            * h;
        i_vals.push(i);
    }
    Ok(assemble(i_vals, c_vals, theta, constant_residual, mean_constraint))
}

fn zeros_of<F: Fn(f64) -> f64>(f: &F, scan: usize) -> Vec<f64> {
    let mut zs = Vec::new();
    let mut prev_t = 0.0;
    let mut prev_v = f(0.0);
    for j in 1..=scan {
        let t = TAU * j as f64 / scan as f64;
        let v = f(t);
        if prev_v != 0.0 && v != 0.0 && (prev_v > 0.0) != (v > 0.0) {
            zs.push(bisect_root(f, prev_t, t, 1e-13));
        }
        prev_t = t;
        prev_v = v;
    }
    zs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equidistant_point_is_stationary() {
        for cfg in [
            ClassConfig::sobolev(1).unwrap(),
            ClassConfig::achieser(1, 1.0).unwrap(),
            ClassConfig::hardy(1, 1.0).unwrap(),
        ] {
            let res =
                lagrange_residual(&cfg, &KnotVector::uniform(2), 0.0, None, 2.0, 1024).unwrap();
            assert!(res.constant_residual.abs() < 1e-8, "{}", cfg.label());
            assert!(res.mean_constraint.abs() < 1e-8, "{}", cfg.label());
            assert!(
                res.max_knot_residual() < 1e-6,
                "{} residual {}",
                cfg.label(),
                res.max_knot_residual()
            );
        }
    }

    #[test]
    fn random_knots_are_not_stationary() {
        let cfg = ClassConfig::sobolev(1).unwrap();
        let knots = KnotVector::new(vec![0.3, 1.1, 3.8, 5.0]).unwrap();
        let res = lagrange_residual(&cfg, &knots, 0.05, None, 2.0, 1024).unwrap();
        assert!(
            res.stacked_max() > 1e-2,
            "stack unexpectedly small: {}",
            res.stacked_max()
        );
    }
}
