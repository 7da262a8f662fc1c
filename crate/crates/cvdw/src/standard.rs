//! The extremal standard functions: step source → analytic smoothing →
//! link → outer kernel.
//!
//! For a knot vector ξ the pipeline produces `a + G∗φ(K_β∗h_ξ)`; with
//! β = 0 the smoothing and link stages are skipped and the result is the
//! perfect Euler spline `a + G∗h_ξ`. Two independent evaluation routes are
//! kept: the spectral one (exact step-function coefficients pushed through
//! kernel multipliers) and a time-domain one (piecewise-polynomial kernel
//! identities for β = 0, panel quadrature of the defining convolution
//! otherwise). Equioscillation structure for equidistant knots is located
//! numerically, not assumed.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::kernel::{
    eval_d, eval_k_antiderivative_osc, KernelSpec, LinkFunction, DEFAULT_KERNEL_TOL,
};
use crate::quad::{bisect_root, gauss16_panels, gauss16_split, golden_max};
use crate::spectral::{
    analyze, compose_link, convolve, differentiate, synthesize, FourierSeries, PeriodicGrid,
};
use crate::spline::KnotVector;

/// Default sample count for cached grids.
pub const DEFAULT_GRID: usize = 4096;

/// Run the class pipeline for an arbitrary zero-stage source series.
/// Returns the series of `G∗φ(K_β∗·)` applied to the source (no constant
/// term added).
pub fn pipeline_series(
    kernel: &KernelSpec,
    link: LinkFunction,
    beta: f64,
    source: &FourierSeries,
    n_grid: usize,
) -> Result<FourierSeries> {
    let inner = if beta > 0.0 {
        let smoothed = convolve(&KernelSpec::analytic(beta), source);
        let sampled = synthesize(&smoothed, n_grid)?;
        let linked = compose_link(link, &sampled)?;
        analyze(&linked)
    } else {
        source.clone()
    };
    Ok(convolve(kernel, &inner))
}

/// `Φ` together with its construction data and cached representations.
#[derive(Debug)]
pub struct StandardFunction {
    kernel: KernelSpec,
    link: LinkFunction,
    beta: f64,
    knots: KnotVector,
    a: f64,
    series: FourierSeries,
    deriv_series: FourierSeries,
    grid: PeriodicGrid,
    /// Effective Bernoulli order when β = 0, enabling exact evaluation.
    exact_order: Option<u32>,
    uniform_n: Option<u32>,
    sup_cache: OnceLock<f64>,
}

/// Construct the standard function for the given kernel, link, smoothing
/// width and knot vector. β = 0 skips the smoothing and link stages.
pub fn standard_function(
    kernel: KernelSpec,
    link: LinkFunction,
    beta: f64,
    knots: KnotVector,
    n_grid: usize,
) -> Result<StandardFunction> {
    StandardFunction::with_constant(kernel, link, beta, knots, 0.0, n_grid)
}

impl StandardFunction {
    pub fn with_constant(
        kernel: KernelSpec,
        link: LinkFunction,
        beta: f64,
        knots: KnotVector,
        a: f64,
        n_grid: usize,
    ) -> Result<Self> {
        kernel.validate()?;
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::Config(format!("smoothing width must be ≥ 0, got {beta}")));
        }
        let kmax = n_grid / 2 - 1;
        let source = knots.h_fourier(kmax);
        let mut series = pipeline_series(&kernel, link, beta, &source, n_grid)?;
        series.set_mean(series.mean() + a);
        let deriv_series = differentiate(&series);
        let grid = synthesize(&series, n_grid)?;
        let exact_order = if beta == 0.0 {
            kernel.bernoulli_order()
        } else {
            None
        };
        let uniform_n = detect_uniform(&knots);
        Ok(StandardFunction {
            kernel,
            link,
            beta,
            knots,
            a,
            series,
            deriv_series,
            grid,
            exact_order,
            uniform_n,
            sup_cache: OnceLock::new(),
        })
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    pub fn link(&self) -> LinkFunction {
        self.link
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn knots(&self) -> &KnotVector {
        &self.knots
    }

    pub fn constant(&self) -> f64 {
        self.a
    }

    pub fn series(&self) -> &FourierSeries {
        &self.series
    }

    pub fn deriv_series(&self) -> &FourierSeries {
        &self.deriv_series
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn uniform_n(&self) -> Option<u32> {
        self.uniform_n
    }

    /// Point evaluation: exact piecewise polynomials for β = 0, spectral
    /// synthesis otherwise.
    pub fn value_at(&self, t: f64) -> f64 {
        match self.exact_order {
            Some(0) => self.a + self.knots.eval_h(t),
            Some(r) => self.a + euler_spline_value(r, &self.knots, t),
            None => self.series.eval(t),
        }
    }

    /// Derivative evaluation along the matching route.
    pub fn deriv_at(&self, t: f64) -> f64 {
        match self.exact_order {
            Some(r) if r >= 2 => euler_spline_value(r - 1, &self.knots, t),
            Some(1) => self.knots.eval_h(t) - self.knots.signed_mean(),
            _ => self.deriv_series.eval(t),
        }
    }

    /// Uniform-norm via grid scan plus golden-section refinement.
    pub fn sup_norm(&self) -> f64 {
        *self.sup_cache.get_or_init(|| {
            let (j, _) = self
                .grid
                .values()
                .iter()
                .enumerate()
                .fold((0, 0.0), |(bj, bv), (j, &v)| {
                    if v.abs() > bv {
                        (j, v.abs())
                    } else {
                        (bj, bv)
                    }
                });
            let h = self.grid.step();
            let t0 = self.grid.abscissa(j);
            let (_, m) = golden_max(&|t| self.value_at(t).abs(), t0 - h, t0 + h, 1e-12);
            m
        })
    }

    /// Sup norm of the derivative.
    pub fn deriv_sup_norm(&self) -> f64 {
        let n = self.grid.len();
        let mut best_j = 0;
        let mut best = 0.0;
        for j in 0..n {
            let v = self.deriv_at(TAU * j as f64 / n as f64).abs();
            if v > best {
                best = v;
                best_j = j;
            }
        }
        let h = TAU / n as f64;
        let t0 = TAU * best_j as f64 / n as f64;
        let (_, m) = golden_max(&|t| self.deriv_at(t).abs(), t0 - h, t0 + h, 1e-12);
        m.max(best)
    }

    /// Zeros of the function over one period, bisected from a dense scan.
    /// The scan is cyclic, so a zero sitting on the period seam is still
    /// found once.
    pub fn zeros(&self) -> Vec<f64> {
        let m = (4 * self.grid.len()).max(8192);
        let vals: Vec<f64> = (0..m)
            .map(|j| self.value_at(TAU * j as f64 / m as f64))
            .collect();
        let mut zs = Vec::new();
        for j in 0..m {
            let a = vals[j];
            let b = vals[(j + 1) % m];
            let t_lo = TAU * j as f64 / m as f64;
            let t_hi = TAU * (j + 1) as f64 / m as f64;
            if a == 0.0 {
                zs.push(t_lo);
            } else if b != 0.0 && (a > 0.0) != (b > 0.0) {
                zs.push(bisect_root(&|x| self.value_at(x), t_lo, t_hi, 1e-13));
            }
        }
        zs.sort_by(f64::total_cmp);
        zs
    }

    /// Locate the alternation points for equidistant knots: one extremum of
    /// |Φ| between consecutive zeros, refined by golden section.
    pub fn extrema(&self) -> Result<Vec<(f64, f64)>> {
        let n = self.uniform_n.ok_or_else(|| {
            Error::Config("extremum location expects equidistant knots".into())
        })?;
        let zs = self.zeros();
        if zs.len() != 2 * n as usize {
            return Err(Error::Config(format!(
                "expected {} zeros, found {}",
                2 * n,
                zs.len()
            )));
        }
        let mut out = Vec::with_capacity(zs.len());
        for i in 0..zs.len() {
            let lo = zs[i];
            let hi = if i + 1 < zs.len() { zs[i + 1] } else { zs[0] + TAU };
            let (t, _) = golden_max(&|x| self.value_at(x).abs(), lo, hi, 1e-11);
            let t = t.rem_euclid(TAU);
            out.push((t, self.value_at(t)));
        }
        out.sort_by(|x, y| x.0.total_cmp(&y.0));
        Ok(out)
    }

    /// Number of sign changes of the derivative over the period (critical
    /// points at the sampling scale).
    pub fn critical_point_count(&self) -> Result<usize> {
        let m = 8192;
        let vals: Vec<f64> = (0..m)
            .map(|j| self.deriv_at(TAU * j as f64 / m as f64))
            .collect();
        crate::oscillation::sampled_sc_values(&vals, None)
    }

    /// Max over sample points of |Φ(t + π/n) + Φ(t)| for equidistant knots.
    pub fn antiperiodicity_defect(&self) -> Result<f64> {
        let n = self.uniform_n.ok_or_else(|| {
            Error::Config("antiperiodicity expects equidistant knots".into())
        })?;
        let shift = PI / n as f64;
        let mut worst = 0.0f64;
        for j in 0..512 {
            let t = TAU * j as f64 / 512.0;
            worst = worst.max((self.value_at(t + shift) + self.value_at(t)).abs());
        }
        Ok(worst)
    }

    /// Independent time-domain evaluation of the pipeline at one point,
    /// bypassing the FFT/multiplier machinery.
    pub fn direct_value_at(&self, x: f64) -> Result<f64> {
        if self.beta == 0.0 {
            let r = self.kernel.bernoulli_order().ok_or_else(|| {
                Error::Config("direct route with β = 0 needs a polynomial kernel".into())
            })?;
            if r == 0 {
                return Ok(self.a + self.knots.eval_h(x));
            }
            // (1/2π)∫ D_r(u) h(x−u) du with panel splits at the jumps of h.
            let mut breaks: Vec<f64> = self
                .knots
                .knots()
                .iter()
                .map(|&xi| (x - xi).rem_euclid(TAU))
                .collect();
            breaks.push(0.0);
            breaks.push(TAU);
            breaks.sort_by(f64::total_cmp);
            breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
            let val = gauss16_split(
                &|u: f64| eval_d(r, u).unwrap() * self.knots.eval_h(x - u),
                &breaks,
                8,
            ) / TAU;
            return Ok(self.a + val);
        }
        let smooth = |s: f64| smoothed_step_value(self.beta, &self.knots, s);
        let psi = |s: f64| self.link.eval(smooth(s)).unwrap_or(f64::NAN);
        let val = match self.kernel.bernoulli_order() {
            Some(0) => psi(x),
            Some(r) => {
                gauss16_panels(&|u: f64| eval_d(r, u).unwrap() * psi(x - u), 0.0, TAU, 128) / TAU
            }
            None => {
                return Err(Error::Config(
                    "direct route implemented for polynomial outer kernels".into(),
                ))
            }
        };
        if val.is_nan() {
            return Err(Error::LinkDomain(f64::NAN));
        }
        Ok(self.a + val)
    }
}

/// `(D_r ∗ h_ξ)(t)` through the telescoped antiderivative identity
/// `−(1/π) Σ_j (−1)^j D_{r+1}(t − ξ_j)`.
pub fn euler_spline_value(r: u32, knots: &KnotVector, t: f64) -> f64 {
    debug_assert!(r >= 1);
    let mut acc = 0.0;
    for (idx, &xi) in knots.knots().iter().enumerate() {
        let sign = if idx % 2 == 0 { -1.0 } else { 1.0 };
        acc += sign * eval_d(r + 1, (t - xi).rem_euclid(TAU)).unwrap();
    }
    -acc / PI
}

/// `(K_β ∗ h_ξ)(x)` evaluated through the periodic antiderivative of the
/// kernel: `mean(h) − (1/π) Σ_j (−1)^j J_β(x − ξ_j)`.
pub fn smoothed_step_value(beta: f64, knots: &KnotVector, x: f64) -> f64 {
    let mut acc = 0.0;
    for (idx, &xi) in knots.knots().iter().enumerate() {
        let sign = if idx % 2 == 0 { -1.0 } else { 1.0 };
        acc += sign
            * eval_k_antiderivative_osc(beta, (x - xi).rem_euclid(TAU), DEFAULT_KERNEL_TOL * 1e-3)
                .unwrap();
    }
    knots.signed_mean() - acc / PI
}

fn detect_uniform(knots: &KnotVector) -> Option<u32> {
    let count = knots.count();
    let n = (count / 2) as u32;
    let step = PI / n as f64;
    for (j, &xi) in knots.knots().iter().enumerate() {
        if (xi - j as f64 * step).abs() > 1e-11 {
            return None;
        }
    }
    Some(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_spline_matches_triangle_wave() {
        // D_1∗h_1 is the triangle wave with peak π/2 at 0.
        let knots = KnotVector::uniform(1);
        let v0 = euler_spline_value(1, &knots, 0.0);
        assert!((v0 + PI / 2.0).abs() < 1e-13);
        // Linear in between: value at π/4 is −π/2 + π/4.
        let v = euler_spline_value(1, &knots, PI / 4.0);
        assert!((v - (-PI / 2.0 + PI / 4.0)).abs() < 1e-13);
    }

    #[test]
    fn smoothed_step_matches_series() {
        let beta = 0.7;
        let knots = KnotVector::uniform(2);
        let series = convolve(&KernelSpec::analytic(beta), &knots.h_fourier(2047));
        for &x in &[0.0, 0.3, 1.1, 2.9, 5.0] {
            let direct = smoothed_step_value(beta, &knots, x);
            assert!((direct - series.eval(x)).abs() < 1e-11, "x={x}");
        }
    }

    #[test]
    fn antiperiodicity_for_uniform_knots() {
        for beta in [0.0, 1.0] {
            let phi = standard_function(
                KernelSpec::bernoulli(1),
                LinkFunction::Phi0,
                beta,
                KnotVector::uniform(3),
                1024,
            )
            .unwrap();
            assert!(phi.antiperiodicity_defect().unwrap() < 1e-10, "β={beta}");
        }
    }

    #[test]
    fn sobolev_sup_is_favard_value() {
        // ‖D_1∗h_n‖_∞ = (π/2)/n
        for n in [1u32, 2, 4] {
            let phi = standard_function(
                KernelSpec::bernoulli(1),
                LinkFunction::Phi1,
                0.0,
                KnotVector::uniform(n),
                1024,
            )
            .unwrap();
            assert!((phi.sup_norm() - PI / (2.0 * n as f64)).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn integrated_kernel_is_the_periodic_integral() {
        let knots = KnotVector::uniform(2);
        let phi = standard_function(
            KernelSpec::bernoulli(1),
            LinkFunction::Phi0,
            1.0,
            knots.clone(),
            2048,
        )
        .unwrap();
        let phi_tilde = standard_function(
            KernelSpec::bernoulli(1).integrated(),
            LinkFunction::Phi0,
            1.0,
            knots,
            2048,
        )
        .unwrap();
        let integral = crate::spectral::periodic_integral(phi.series()).unwrap();
        for &t in &[0.1, 0.8, 2.2, 4.4] {
            assert!((integral.eval(t) - phi_tilde.value_at(t)).abs() < 1e-8);
        }
    }

    #[test]
    fn direct_route_agrees_with_spectral_route() {
        let phi = standard_function(
            KernelSpec::bernoulli(2),
            LinkFunction::Phi0,
            1.0,
            KnotVector::uniform(2),
            2048,
        )
        .unwrap();
        for &x in &[0.0, 0.4, 1.3, 3.8] {
            let d = phi.direct_value_at(x).unwrap();
            assert!((d - phi.value_at(x)).abs() < 1e-10, "x={x}");
        }
        // β = 0: quadrature against the exact piecewise route.
        let phi0 = standard_function(
            KernelSpec::bernoulli(1),
            LinkFunction::Phi1,
            0.0,
            KnotVector::new(vec![0.5, 1.9, 3.0, 5.1]).unwrap(),
            1024,
        )
        .unwrap();
        for &x in &[0.2, 1.0, 2.5, 4.0] {
            let d = phi0.direct_value_at(x).unwrap();
            assert!((d - phi0.value_at(x)).abs() < 1e-11, "x={x}");
        }
    }

    #[test]
    fn equioscillation_structure() {
        let phi = standard_function(
            KernelSpec::bernoulli(1),
            LinkFunction::Phi0,
            0.5,
            KnotVector::uniform(3),
            4096,
        )
        .unwrap();
        let ext = phi.extrema().unwrap();
        assert_eq!(ext.len(), 6);
        let sup = phi.sup_norm();
        for w in ext.windows(2) {
            assert!((w[1].0 - w[0].0 - PI / 3.0).abs() < 1e-7);
            assert!(w[0].1 * w[1].1 < 0.0, "alternating signs");
        }
        for &(_, v) in &ext {
            assert!((v.abs() - sup).abs() < 1e-9);
        }
        assert_eq!(phi.critical_point_count().unwrap(), 6);
    }
}
