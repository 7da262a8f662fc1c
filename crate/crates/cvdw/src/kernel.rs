//! Periodic convolution kernels and link functions.
//!
//! Two kernel families drive everything here: the Bernoulli kernels `D_r`
//! (periodic splines whose Fourier coefficients are `k^{-r}` with a quarter
//! turn of phase per order) and the analytic kernel `K_β` with coefficients
//! `1/cosh(kβ)`. `D_r` is evaluated through its exact piecewise polynomial
//! pieces, obtained by repeated zero-mean antidifferentiation of the
//! sawtooth `D_1(t) = π − t`, so no series truncation enters. `K_β` is a
//! rapidly convergent cosine series with a certified geometric tail bound.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default tail bound for analytic-kernel series evaluation.
pub const DEFAULT_KERNEL_TOL: f64 = 1e-12;

/// Accepted overshoot above |z| = 1 in link-function arguments before a
/// domain error is raised. Convolution of a unit-bounded source with the
/// mean-one kernel keeps |K_β∗u| ≤ 1 up to roundoff.
pub const CLAMP_TOL: f64 = 1e-9;

/// Largest Bernoulli order kept in the piecewise-polynomial table. Orders
/// up to this bound can also appear as integrated kernels of lower orders.
pub const MAX_BERNOULLI_ORDER: u32 = 16;

/// Declarative description of a periodic convolution kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// Bernoulli kernel `D_r`, the r-fold periodic integral of the sawtooth.
    BernoulliD { r: u32 },
    /// Analytic kernel with coefficient `1/cosh(kβ)` at frequency k.
    AnalyticK { beta: f64 },
    /// Zero-mean periodic integral of the inner kernel.
    IntegratedOf(Box<KernelSpec>),
    /// Convolution identity (Dirac comb of mean one).
    Identity,
}

impl KernelSpec {
    pub fn bernoulli(r: u32) -> Self {
        KernelSpec::BernoulliD { r }
    }

    pub fn analytic(beta: f64) -> Self {
        KernelSpec::AnalyticK { beta }
    }

    pub fn integrated(self) -> Self {
        KernelSpec::IntegratedOf(Box::new(self))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::BernoulliD { r } => {
                if *r < 1 {
                    return Err(Error::KernelOrder(*r));
                }
                if *r >= MAX_BERNOULLI_ORDER {
                    return Err(Error::KernelOrderTooLarge(*r, MAX_BERNOULLI_ORDER - 1));
                }
                Ok(())
            }
            KernelSpec::AnalyticK { beta } => {
                if !(beta.is_finite() && *beta > 0.0) {
                    return Err(Error::KernelWidth(*beta));
                }
                Ok(())
            }
            KernelSpec::IntegratedOf(inner) => inner.validate(),
            KernelSpec::Identity => Ok(()),
        }
    }

    /// Complex factor applied to the frequency-`k` component under
    /// convolution with this kernel. The pair is (real, imaginary) of the
    /// multiplier acting on complex Fourier coefficients; `D_r` carries the
    /// quarter-turn phase `e^{-iπr/2} k^{-r}`.
    pub fn multiplier(&self, k: u32) -> Multiplier {
        match self {
            KernelSpec::Identity => Multiplier { re: 1.0, im: 0.0 },
            KernelSpec::AnalyticK { beta } => {
                if k == 0 {
                    Multiplier { re: 1.0, im: 0.0 }
                } else {
                    Multiplier {
                        re: sech(k as f64 * beta),
                        im: 0.0,
                    }
                }
            }
            KernelSpec::BernoulliD { r } => {
                if k == 0 {
                    return Multiplier { re: 0.0, im: 0.0 };
                }
                let mag = (k as f64).powi(-(*r as i32));
                // e^{-iπr/2} cycles through (1,0), (0,-1), (-1,0), (0,1).
                let (re, im) = match r % 4 {
                    0 => (1.0, 0.0),
                    1 => (0.0, -1.0),
                    2 => (-1.0, 0.0),
                    _ => (0.0, 1.0),
                };
                Multiplier {
                    re: re * mag,
                    im: im * mag,
                }
            }
            KernelSpec::IntegratedOf(inner) => {
                if k == 0 {
                    return Multiplier { re: 0.0, im: 0.0 };
                }
                inner.multiplier(k).div_ik(k)
            }
        }
    }

    /// Order `r` such that this kernel coincides with `D_r` as a function
    /// (the identity acts as order 0). `None` for analytic kernels.
    pub fn bernoulli_order(&self) -> Option<u32> {
        match self {
            KernelSpec::Identity => Some(0),
            KernelSpec::BernoulliD { r } => Some(*r),
            KernelSpec::IntegratedOf(inner) => inner.bernoulli_order().map(|r| r + 1),
            KernelSpec::AnalyticK { .. } => None,
        }
    }
}

/// Frequency-domain multiplier as a complex pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Multiplier {
    pub re: f64,
    pub im: f64,
}

impl Multiplier {
    pub fn magnitude(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Division by `ik`, the differentiation multiplier at frequency k.
    pub fn div_ik(self, k: u32) -> Multiplier {
        let k = k as f64;
        Multiplier {
            re: self.im / k,
            im: -self.re / k,
        }
    }

    /// Apply to a cosine/sine coefficient pair at a positive frequency.
    pub fn apply(self, a: f64, b: f64) -> (f64, f64) {
        (self.re * a + self.im * b, self.re * b - self.im * a)
    }
}

fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// Piecewise-polynomial coefficients of `D_r` on (0, 2π), lowest degree
/// first. Each entry is the zero-mean antiderivative of the previous one,
/// starting from `D_1(t) = π − t`.
fn bernoulli_polys() -> &'static Vec<Vec<f64>> {
    static TABLE: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: Vec<Vec<f64>> = Vec::with_capacity(MAX_BERNOULLI_ORDER as usize);
        table.push(vec![PI, -1.0]);
        for _ in 1..MAX_BERNOULLI_ORDER {
            let prev = table.last().unwrap();
            let mut next = vec![0.0];
            for (j, &c) in prev.iter().enumerate() {
                next.push(c / (j as f64 + 1.0));
            }
            // Mean of Σ c_j t^j over [0, 2π] is Σ c_j (2π)^j / (j + 1).
            let mut mean = 0.0;
            let mut pw = 1.0;
            for (j, &c) in next.iter().enumerate() {
                mean += c * pw / (j as f64 + 1.0);
                pw *= TAU;
            }
            next[0] = -mean;
            table.push(next);
        }
        table
    })
}

/// Evaluate `D_r(t)`, exactly up to roundoff. At the jump of `D_1` the
/// midpoint value 0 is returned.
pub fn eval_d(r: u32, t: f64) -> Result<f64> {
    if r < 1 {
        return Err(Error::KernelOrder(r));
    }
    if r > MAX_BERNOULLI_ORDER {
        return Err(Error::KernelOrderTooLarge(r, MAX_BERNOULLI_ORDER));
    }
    let w = t.rem_euclid(TAU);
    if r == 1 && w == 0.0 {
        return Ok(0.0);
    }
    let coeffs = &bernoulli_polys()[(r - 1) as usize];
    let mut val = 0.0;
    for &c in coeffs.iter().rev() {
        val = val * w + c;
    }
    Ok(val)
}

/// Evaluate `K_β(z)` by partial summation, truncated once the geometric
/// tail bound `Σ_{k>k₀} 4 e^{-kβ}` drops below `tol`.
pub fn eval_k(beta: f64, z: f64, tol: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::KernelWidth(beta));
    }
    if !(tol > 0.0) {
        return Err(Error::Tolerance(tol));
    }
    let cutoff = analytic_series_cutoff(beta, tol);
    let mut sum = 1.0;
    let (c1, s1) = (z.cos(), z.sin());
    let (mut ck, mut sk) = (c1, s1);
    for k in 1..=cutoff {
        sum += 2.0 * ck * sech(k as f64 * beta);
        let c_next = ck * c1 - sk * s1;
        sk = sk * c1 + ck * s1;
        ck = c_next;
    }
    Ok(sum)
}

/// First `k₀` with `Σ_{k>k₀} 4 e^{-kβ} = 4 e^{-(k₀+1)β}/(1-e^{-β}) ≤ tol`.
pub fn analytic_series_cutoff(beta: f64, tol: f64) -> u32 {
    let denom = 1.0 - (-beta).exp();
    let needed = (4.0 / (tol * denom)).ln() / beta - 1.0;
    needed.ceil().max(1.0) as u32
}

/// Periodic antiderivative of the oscillating part of `K_β`:
/// `J_β(z) = 2 Σ sin(kz) / (k cosh(kβ))`, so that `(z + J_β(z))' = K_β(z)`.
pub fn eval_k_antiderivative_osc(beta: f64, z: f64, tol: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::KernelWidth(beta));
    }
    let cutoff = analytic_series_cutoff(beta, tol.max(1e-17));
    let (c1, s1) = (z.cos(), z.sin());
    let (mut ck, mut sk) = (c1, s1);
    let mut sum = 0.0;
    for k in 1..=cutoff {
        sum += 2.0 * sk * sech(k as f64 * beta) / k as f64;
        let c_next = ck * c1 - sk * s1;
        sk = sk * c1 + ck * s1;
        ck = c_next;
    }
    Ok(sum)
}

/// Odd, strictly increasing rescaling applied inside the class pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkFunction {
    /// `φ₀(z) = tan(πz/4)`, mapping [-1, 1] onto itself.
    Phi0,
    /// The identity link `φ₁(z) = z`.
    Phi1,
}

impl LinkFunction {
    /// Clamp arguments within `CLAMP_TOL` of ±1 back onto the closed
    /// interval; anything further out is a class violation.
    fn admit(z: f64) -> Result<f64> {
        if z.abs() <= 1.0 {
            Ok(z)
        } else if z.abs() <= 1.0 + CLAMP_TOL {
            Ok(z.signum())
        } else {
            Err(Error::LinkDomain(z))
        }
    }

    pub fn eval(self, z: f64) -> Result<f64> {
        let z = Self::admit(z)?;
        Ok(match self {
            LinkFunction::Phi0 => (PI * z / 4.0).tan(),
            LinkFunction::Phi1 => z,
        })
    }

    pub fn deriv(self, z: f64) -> Result<f64> {
        let z = Self::admit(z)?;
        Ok(match self {
            LinkFunction::Phi0 => {
                let c = (PI * z / 4.0).cos();
                PI / (4.0 * c * c)
            }
            LinkFunction::Phi1 => 1.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sawtooth_closed_form() {
        assert!((eval_d(1, PI / 2.0).unwrap() - PI / 2.0).abs() < 1e-14);
        assert_eq!(eval_d(1, 0.0).unwrap(), 0.0); // midpoint convention at the jump
        for &t in &[0.3, 1.0, 2.0, 5.0] {
            assert!((eval_d(1, t).unwrap() - (PI - t)).abs() < 1e-13);
        }
    }

    #[test]
    fn second_order_at_pi_is_eta_two() {
        // 2 Σ (−1)^{k−1} / k² = π²/6
        let expect = PI * PI / 6.0;
        assert!((eval_d(2, PI).unwrap() - expect).abs() < 1e-13);
    }

    #[test]
    fn reflection_symmetry() {
        for r in 1..=5u32 {
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            for &t in &[0.2, 0.9, 1.7, 3.0] {
                let lhs = eval_d(r, TAU - t).unwrap();
                let rhs = sign * eval_d(r, t).unwrap();
                assert!((lhs - rhs).abs() < 1e-12, "r={r} t={t}");
            }
        }
    }

    #[test]
    fn zero_order_rejected() {
        assert!(eval_d(0, 1.0).is_err());
        assert!(KernelSpec::bernoulli(0).validate().is_err());
    }

    #[test]
    fn antiderivative_relation_by_quadrature() {
        // ∫_a^b D_r = D_{r+1}(b) − D_{r+1}(a) on intervals that avoid the
        // sawtooth jump.
        for r in 1..=4u32 {
            let (a, b) = (0.7, 2.9);
            let quad = crate::quad::gauss16_panels(&|t| eval_d(r, t).unwrap(), a, b, 32);
            let diff = eval_d(r + 1, b).unwrap() - eval_d(r + 1, a).unwrap();
            assert!((quad - diff).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn matches_partial_sums_of_the_series() {
        // Partial sums of 2 Σ cos(kt − πr/2)/k^r to one million terms,
        // Cesàro-averaged over the last stretch to damp the oscillating
        // O(1/(K·t)) tail of the low orders.
        let terms = 1_000_000usize;
        let avg_window = 2048usize;
        let partial_sum_avg = |r: u32, t: f64| -> f64 {
            let (c1, s1) = (t.cos(), t.sin());
            let (mut ck, mut sk) = (c1, s1);
            let (pr, pi) = match r % 4 {
                0 => (1.0, 0.0),
                1 => (0.0, 1.0),
                2 => (-1.0, 0.0),
                _ => (0.0, -1.0),
            };
            let mut sum = 0.0;
            let mut tail_acc = 0.0;
            for k in 1..=terms {
                // cos(kt − πr/2) = cos(kt)cos(πr/2) + sin(kt)sin(πr/2)
                sum += 2.0 * (ck * pr + sk * pi) / (k as f64).powi(r as i32);
                let c_next = ck * c1 - sk * s1;
                sk = sk * c1 + ck * s1;
                ck = c_next;
                if k > terms - avg_window {
                    tail_acc += sum;
                }
            }
            tail_acc / avg_window as f64
        };
        for r in 1..=4u32 {
            for &t in &[0.5, 1.3, PI / 3.0, 2.8, 4.4] {
                let sum = partial_sum_avg(r, t);
                let exact = eval_d(r, t).unwrap();
                assert!((sum - exact).abs() < 1e-6, "r={r} t={t} err={}", (sum - exact).abs());
            }
        }
        // Slow sine tail near the jump of D_1.
        let t = 0.01;
        let sum = partial_sum_avg(1, t);
        assert!((sum - (PI - t)).abs() < 1e-3);
    }

    #[test]
    fn analytic_kernel_even_and_mean_one() {
        for &z in &[0.4, 1.1, 2.7] {
            let a = eval_k(1.0, z, 1e-12).unwrap();
            let b = eval_k(1.0, -z, 1e-12).unwrap();
            assert!((a - b).abs() < 1e-14);
        }
        // Grid mean equals the constant coefficient.
        let n = 512;
        let mean: f64 = (0..n)
            .map(|j| eval_k(0.7, TAU * j as f64 / n as f64, 1e-13).unwrap())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn analytic_kernel_partial_sum_oracle() {
        // 1 + 2 Σ 1/cosh(k) summed far past the certified cutoff.
        let mut oracle = 1.0;
        for k in 1..200 {
            oracle += 2.0 * sech(k as f64);
        }
        assert!((eval_k(1.0, 0.0, 1e-12).unwrap() - oracle).abs() < 1e-12);
        assert!(eval_k(-1.0, 0.0, 1e-12).is_err());
        assert!(eval_k(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn analytic_kernel_positive_on_grid() {
        // Observed positivity; recorded, not assumed elsewhere.
        for &beta in &[0.5, 1.0, 2.0] {
            let min = (0..4096)
                .map(|j| eval_k(beta, TAU * j as f64 / 4096.0, 1e-12).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert!(min >= 0.0, "β={beta} min={min}");
        }
    }

    #[test]
    fn multipliers() {
        let k3 = KernelSpec::analytic(0.8).multiplier(3);
        assert!((k3.re - sech(2.4)).abs() < 1e-15);
        assert_eq!(k3.im, 0.0);
        assert_eq!(
            KernelSpec::bernoulli(2).multiplier(0),
            Multiplier { re: 0.0, im: 0.0 }
        );
        // Integrating the sawtooth kernel gives the order-2 multiplier.
        let integrated = KernelSpec::bernoulli(1).integrated();
        for k in 1..20u32 {
            let a = integrated.multiplier(k);
            let b = KernelSpec::bernoulli(2).multiplier(k);
            assert!((a.re - b.re).abs() < 1e-15 && (a.im - b.im).abs() < 1e-15);
        }
        assert_eq!(integrated.bernoulli_order(), Some(2));
        assert_eq!(KernelSpec::Identity.bernoulli_order(), Some(0));
        assert_eq!(KernelSpec::analytic(1.0).bernoulli_order(), None);
    }

    #[test]
    fn antiderivative_of_analytic_kernel() {
        // (z + J_β(z))' = K_β(z) via central differences.
        let beta = 0.9;
        let h = 1e-5;
        for &z in &[0.5, 1.4, 3.0] {
            let up = z + h + eval_k_antiderivative_osc(beta, z + h, 1e-15).unwrap();
            let dn = z - h + eval_k_antiderivative_osc(beta, z - h, 1e-15).unwrap();
            let deriv = (up - dn) / (2.0 * h);
            let exact = eval_k(beta, z, 1e-13).unwrap();
            assert!((deriv - exact).abs() < 1e-8);
        }
    }

    #[test]
    fn links_are_odd_increasing_and_clamped() {
        assert!((LinkFunction::Phi0.eval(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(LinkFunction::Phi0.eval(0.0).unwrap(), 0.0);
        assert!((LinkFunction::Phi0.deriv(0.0).unwrap() - PI / 4.0).abs() < 1e-15);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=1000 {
            let z = -1.0 + 2.0 * i as f64 / 1000.0;
            let v0 = LinkFunction::Phi0.eval(z).unwrap();
            let v1 = LinkFunction::Phi1.eval(z).unwrap();
            assert!((v0 + LinkFunction::Phi0.eval(-z).unwrap()).abs() < 1e-15);
            assert_eq!(v1, z);
            assert!(v0 > prev);
            prev = v0;
        }
        assert!(LinkFunction::Phi0.eval(1.0 + 0.5e-9).is_ok());
        assert!(LinkFunction::Phi0.eval(1.0 + 1e-6).is_err());
    }
}
