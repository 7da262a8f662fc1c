//! Periodic function calculus: sampling, discrete Fourier analysis and
//! synthesis, convolution by kernel multiplier, pointwise link composition,
//! spectral differentiation and periodic integration.
//!
//! Conventions: a series is `mean + Σ_{k≥1} a_k cos(kt) + b_k sin(kt)`;
//! convolution is `(f∗g)(x) = (1/2π)∫ f(x−t) g(t) dt`, so the frequency-k
//! component picks up the kernel multiplier at k.

use std::cell::RefCell;
use std::f64::consts::TAU;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::kernel::{KernelSpec, LinkFunction};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_in_place(buf: &mut [Complex<f64>], inverse: bool) {
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        let plan = if inverse {
            planner.plan_fft_inverse(buf.len())
        } else {
            planner.plan_fft_forward(buf.len())
        };
        plan.process(buf);
    });
}

/// Finite trigonometric series on [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    mean: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl FourierSeries {
    pub fn new(mean: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        assert_eq!(cos.len(), sin.len());
        FourierSeries { mean, cos, sin }
    }

    pub fn constant(c: f64) -> Self {
        FourierSeries {
            mean: c,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn max_freq(&self) -> usize {
        self.cos.len()
    }

    /// Cosine coefficient at frequency `k ≥ 1` (zero beyond the cutoff).
    pub fn cos_coeff(&self, k: usize) -> f64 {
        assert!(k >= 1);
        self.cos.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn sin_coeff(&self, k: usize) -> f64 {
        assert!(k >= 1);
        self.sin.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn set_mean(&mut self, mean: f64) {
        self.mean = mean;
    }

    /// Drop trailing coefficients that are negligible against the largest
    /// one; exponentially decaying spectra collapse to a short vector.
    pub fn trimmed(mut self) -> Self {
        let scale = self
            .cos
            .iter()
            .chain(self.sin.iter())
            .fold(self.mean.abs(), |m, &c| m.max(c.abs()));
        let floor = scale * 1e-18;
        let mut keep = 0;
        for k in 0..self.cos.len() {
            if self.cos[k].abs() > floor || self.sin[k].abs() > floor {
                keep = k + 1;
            }
        }
        self.cos.truncate(keep);
        self.sin.truncate(keep);
        self
    }

    /// Evaluate at an arbitrary point by angle stepping.
    pub fn eval(&self, t: f64) -> f64 {
        let (c1, s1) = (t.cos(), t.sin());
        let (mut ck, mut sk) = (c1, s1);
        let mut acc = self.mean;
        for k in 0..self.cos.len() {
            acc += self.cos[k] * ck + self.sin[k] * sk;
            let c_next = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = c_next;
        }
        acc
    }

    pub fn scaled(&self, factor: f64) -> Self {
        FourierSeries {
            mean: self.mean * factor,
            cos: self.cos.iter().map(|c| c * factor).collect(),
            sin: self.sin.iter().map(|c| c * factor).collect(),
        }
    }

    /// Hard cutoff at `max_freq` coefficients.
    pub fn truncated(mut self, max_freq: usize) -> Self {
        self.cos.truncate(max_freq);
        self.sin.truncate(max_freq);
        self
    }
}

/// Uniform samples of a 2π-periodic function; sample j sits at t = 2πj/N.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicGrid {
    values: Vec<f64>,
}

impl PeriodicGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::GridSize(n));
        }
        Ok(PeriodicGrid { values })
    }

    pub fn from_fn<F: FnMut(f64) -> f64>(n: usize, mut f: F) -> Result<Self> {
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::GridSize(n));
        }
        let values = (0..n).map(|j| f(TAU * j as f64 / n as f64)).collect();
        Ok(PeriodicGrid { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn abscissa(&self, j: usize) -> f64 {
        TAU * j as f64 / self.values.len() as f64
    }

    pub fn step(&self) -> f64 {
        TAU / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn range(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in &self.values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Mean of the samples (the discrete zero mode).
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn map<F: FnMut(f64) -> f64>(&self, f: F) -> Self {
        PeriodicGrid {
            values: self.values.iter().copied().map(f).collect(),
        }
    }
}

/// Discrete Fourier analysis of a sampled period; exact for signals
/// band-limited below the Nyquist frequency.
pub fn analyze(grid: &PeriodicGrid) -> FourierSeries {
    let n = grid.len();
    let mut buf: Vec<Complex<f64>> = grid
        .values()
        .iter()
        .map(|&v| Complex::new(v, 0.0))
        .collect();
    fft_in_place(&mut buf, false);
    let mean = buf[0].re / n as f64;
    let kmax = n / 2 - 1;
    let mut cos = Vec::with_capacity(kmax);
    let mut sin = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        cos.push(2.0 * buf[k].re / n as f64);
        sin.push(-2.0 * buf[k].im / n as f64);
    }
    FourierSeries::new(mean, cos, sin).trimmed()
}

/// Sample a series on `n` uniform points. Coefficients at or above the
/// Nyquist frequency of the target grid are dropped.
pub fn synthesize(series: &FourierSeries, n: usize) -> Result<PeriodicGrid> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::GridSize(n));
    }
    let kmax = (n / 2 - 1).min(series.max_freq());
    let mut buf = vec![Complex::new(0.0, 0.0); n];
    buf[0] = Complex::new(series.mean, 0.0);
    for k in 1..=kmax {
        let c = Complex::new(series.cos[k - 1] / 2.0, -series.sin[k - 1] / 2.0);
        buf[k] = c;
        buf[n - k] = c.conj();
    }
    fft_in_place(&mut buf, true);
    PeriodicGrid::new(buf.into_iter().map(|z| z.re).collect())
}

/// Convolve a series with a kernel by applying its Fourier multiplier.
pub fn convolve(kernel: &KernelSpec, series: &FourierSeries) -> FourierSeries {
    let m0 = kernel.multiplier(0);
    let mut cos = Vec::with_capacity(series.max_freq());
    let mut sin = Vec::with_capacity(series.max_freq());
    for k in 1..=series.max_freq() {
        let m = kernel.multiplier(k as u32);
        let (a, b) = m.apply(series.cos[k - 1], series.sin[k - 1]);
        cos.push(a);
        sin.push(b);
    }
    FourierSeries::new(series.mean * m0.re, cos, sin).trimmed()
}

/// Apply a link function pointwise on a sampled period.
pub fn compose_link(link: LinkFunction, grid: &PeriodicGrid) -> Result<PeriodicGrid> {
    let mut out = Vec::with_capacity(grid.len());
    for &v in grid.values() {
        out.push(link.eval(v)?);
    }
    PeriodicGrid::new(out)
}

/// Spectral differentiation.
pub fn differentiate(series: &FourierSeries) -> FourierSeries {
    let mut cos = Vec::with_capacity(series.max_freq());
    let mut sin = Vec::with_capacity(series.max_freq());
    for k in 1..=series.max_freq() {
        let kf = k as f64;
        cos.push(kf * series.sin[k - 1]);
        sin.push(-kf * series.cos[k - 1]);
    }
    FourierSeries::new(0.0, cos, sin)
}

/// Zero-mean periodic antiderivative; the input must have (numerically)
/// zero mean.
pub fn periodic_integral(series: &FourierSeries) -> Result<FourierSeries> {
    if series.mean.abs() > 1e-9 {
        return Err(Error::NonzeroMean(series.mean.abs()));
    }
    let mut cos = Vec::with_capacity(series.max_freq());
    let mut sin = Vec::with_capacity(series.max_freq());
    for k in 1..=series.max_freq() {
        let kf = k as f64;
        cos.push(-series.sin[k - 1] / kf);
        sin.push(series.cos[k - 1] / kf);
    }
    Ok(FourierSeries::new(0.0, cos, sin))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::eval_k;

    #[test]
    fn analyze_pure_cosine() {
        let g = PeriodicGrid::from_fn(8, |t| t.cos()).unwrap();
        let s = analyze(&g);
        assert!((s.cos_coeff(1) - 1.0).abs() < 1e-14);
        for k in 2..4 {
            assert!(s.cos_coeff(k).abs() < 1e-14);
            assert!(s.sin_coeff(k).abs() < 1e-14);
        }
        assert!(s.mean().abs() < 1e-15);
    }

    #[test]
    fn analyze_constant() {
        let g = PeriodicGrid::from_fn(16, |_| 2.5).unwrap();
        let s = analyze(&g);
        assert!((s.mean() - 2.5).abs() < 1e-14);
        assert_eq!(s.max_freq(), 0);
    }

    #[test]
    fn grid_size_must_be_power_of_two() {
        assert!(PeriodicGrid::new(vec![0.0; 12]).is_err());
        assert!(PeriodicGrid::new(vec![0.0; 2]).is_err());
        assert!(synthesize(&FourierSeries::constant(1.0), 20).is_err());
    }

    #[test]
    fn convolving_constant_with_sawtooth_kernel_vanishes() {
        let s = convolve(&KernelSpec::bernoulli(2), &FourierSeries::constant(1.0));
        assert_eq!(s.mean(), 0.0);
        assert_eq!(s.max_freq(), 0);
    }

    #[test]
    fn derivative_integral_pair() {
        let s = FourierSeries::new(0.0, vec![0.0, 0.3], vec![1.0, -0.2]);
        let d = differentiate(&s);
        assert!((d.cos_coeff(1) - 1.0).abs() < 1e-15); // (sin t)' = cos t
        let back = periodic_integral(&d).unwrap();
        for k in 1..=2 {
            assert!((back.cos_coeff(k) - s.cos_coeff(k)).abs() < 1e-15);
            assert!((back.sin_coeff(k) - s.sin_coeff(k)).abs() < 1e-15);
        }
        let i = periodic_integral(&FourierSeries::new(0.0, vec![1.0], vec![0.0])).unwrap();
        assert!((i.sin_coeff(1) - 1.0).abs() < 1e-15); // ∫cos = sin
        assert!(periodic_integral(&FourierSeries::constant(0.1)).is_err());
    }

    #[test]
    fn spectral_convolution_matches_direct_quadrature() {
        // K_β ∗ f against the defining integral on a coarse grid.
        let beta = 0.8;
        let f = FourierSeries::new(0.2, vec![1.0, 0.0, -0.4], vec![0.5, 0.3, 0.0]);
        let conv = convolve(&KernelSpec::analytic(beta), &f);
        for &x in &[0.0, 0.9, 2.5, 4.8] {
            let direct = crate::quad::gauss16_panels(
                &|t: f64| f.eval(x - t) * eval_k(beta, t, 1e-14).unwrap(),
                0.0,
                TAU,
                48,
            ) / TAU;
            assert!((conv.eval(x) - direct).abs() < 1e-10, "x={x}");
        }
    }

    #[test]
    fn multiplier_application_order_is_immaterial() {
        let f = FourierSeries::new(0.0, vec![0.4, -0.1, 0.2], vec![0.9, 0.0, -0.3]);
        let g1 = KernelSpec::bernoulli(1);
        let g2 = KernelSpec::analytic(1.1);
        let a = convolve(&g1, &convolve(&g2, &f));
        let b = convolve(&g2, &convolve(&g1, &f));
        for k in 1..=3 {
            assert!((a.cos_coeff(k) - b.cos_coeff(k)).abs() < 1e-15);
            assert!((a.sin_coeff(k) - b.sin_coeff(k)).abs() < 1e-15);
        }
    }
}
