//! Norms, the non-increasing rearrangement, total variation and the
//! low-frequency information map.
//!
//! The L_q norms carry no period normalisation: `‖f‖_q = (∫₀^{2π}|f|^q)^{1/q}`.
//! High-accuracy integrals split the domain at the sign changes of the
//! integrand so the |·| kink never meets a quadrature panel interior.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::quad::{bisect_root, gauss16_panels, golden_max};
use crate::spectral::{analyze, PeriodicGrid};

/// Non-increasing rearrangement of |f| over one period; sample j carries
/// measure 2π/N.
#[derive(Debug, Clone)]
pub struct Rearrangement {
    values: Vec<f64>,
}

impl Rearrangement {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Cumulative integrals `∫₀^{x_j} r` at the grid points, length N+1.
    pub fn cumulative(&self) -> Vec<f64> {
        let h = TAU / self.values.len() as f64;
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.values.len() + 1);
        out.push(0.0);
        for &v in &self.values {
            acc += v * h;
            out.push(acc);
        }
        out
    }

    /// Riemann L_q norm of the rearranged profile.
    pub fn lq_riemann(&self, q: f64) -> Result<f64> {
        if q < 1.0 {
            return Err(Error::NormExponent(q));
        }
        let h = TAU / self.values.len() as f64;
        let peak = self.values.first().copied().unwrap_or(0.0).max(1e-300);
        let sum: f64 = self.values.iter().map(|&v| pow_q(v / peak, q)).sum();
        Ok(peak * (sum * h).powf(1.0 / q))
    }
}

/// Sort |samples| in non-increasing order.
pub fn rearrangement(f: &PeriodicGrid) -> Rearrangement {
    let mut values: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
    values.sort_unstable_by(|a, b| b.total_cmp(a));
    Rearrangement { values }
}

/// Verdict of the cumulative-integral comparison `∫₀^x r(f) ≤ ∫₀^x r(g)`.
#[derive(Debug, Clone, Copy)]
pub struct DominationReport {
    pub dominated: bool,
    pub max_violation: f64,
}

/// Check `∫₀^x r(f,t) dt ≤ ∫₀^x r(g,t) dt + tol` at every grid point.
pub fn rearrangement_dominates(
    f: &PeriodicGrid,
    g: &PeriodicGrid,
    tol: f64,
) -> Result<DominationReport> {
    if f.len() != g.len() {
        return Err(Error::GridMismatch(f.len(), g.len()));
    }
    let rf = rearrangement(f).cumulative();
    let rg = rearrangement(g).cumulative();
    let mut worst = 0.0f64;
    for (a, b) in rf.iter().zip(rg.iter()) {
        worst = worst.max(a - b);
    }
    Ok(DominationReport {
        dominated: worst <= tol,
        max_violation: worst,
    })
}

fn pow_q(x: f64, q: f64) -> f64 {
    if q == q.trunc() && q <= 127.0 {
        x.abs().powi(q as i32)
    } else {
        x.abs().powf(q)
    }
}

/// `(∫₀^{2π} |eval|^q)^{1/q}` with the domain split at the sign changes of
/// `eval` located from `scan` samples, composite Gauss panels per piece and
/// panel doubling until two estimates agree.
pub fn lq_norm_of<F: Fn(f64) -> f64>(eval: &F, scan: usize, q: f64) -> Result<f64> {
    if q < 1.0 || !q.is_finite() {
        return Err(Error::NormExponent(q));
    }
    let mut breaks = sign_change_points(eval, scan);
    if breaks.is_empty() {
        breaks.push(0.0);
    }
    let first = breaks[0];
    breaks.push(first + TAU);
    // Normalise by the peak to keep powers in range for large q.
    let mut peak = 0.0f64;
    for j in 0..scan {
        peak = peak.max(eval(TAU * j as f64 / scan as f64).abs());
    }
    if peak == 0.0 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for w in breaks.windows(2) {
        if w[1] - w[0] < 1e-13 {
            continue;
        }
        let integrand = |t: f64| pow_q(eval(t) / peak, q);
        let mut panels = 8usize;
        let mut prev = gauss16_panels(&integrand, w[0], w[1], panels);
        loop {
            panels *= 2;
            let next = gauss16_panels(&integrand, w[0], w[1], panels);
            if (next - prev).abs() <= 1e-13 * next.abs().max(1e-16) || panels >= 512 {
                prev = next;
                break;
            }
            prev = next;
        }
        total += prev;
    }
    Ok(peak * total.powf(1.0 / q))
}

/// Sup norm of a smooth evaluator: dense scan plus golden refinement.
pub fn sup_norm_of<F: Fn(f64) -> f64>(eval: &F, scan: usize) -> f64 {
    let mut best = 0.0f64;
    let mut best_j = 0usize;
    for j in 0..scan {
        let v = eval(TAU * j as f64 / scan as f64).abs();
        if v > best {
            best = v;
            best_j = j;
        }
    }
    let h = TAU / scan as f64;
    let t0 = TAU * best_j as f64 / scan as f64;
    let (_, m) = golden_max(&|t| eval(t).abs(), t0 - h, t0 + h, 1e-12);
    m.max(best)
}

fn sign_change_points<F: Fn(f64) -> f64>(eval: &F, scan: usize) -> Vec<f64> {
    let mut zs = Vec::new();
    let mut prev_t = 0.0;
    let mut prev_v = eval(0.0);
    for j in 1..=scan {
        let t = TAU * j as f64 / scan as f64;
        let v = eval(t);
        if prev_v != 0.0 && v != 0.0 && (prev_v > 0.0) != (v > 0.0) {
            zs.push(bisect_root(eval, prev_t, t, 1e-13));
        }
        prev_t = t;
        prev_v = v;
    }
    zs
}

/// High-accuracy L_q norm of a sampled period through its series.
pub fn lq_norm(f: &PeriodicGrid, q: f64) -> Result<f64> {
    let series = analyze(f);
    lq_norm_of(&|t| series.eval(t), f.len().max(1024), q)
}

/// Riemann L_q norm of the raw samples.
pub fn lq_norm_grid(f: &PeriodicGrid, q: f64) -> Result<f64> {
    if q < 1.0 {
        return Err(Error::NormExponent(q));
    }
    let peak = f.max_abs().max(1e-300);
    let h = f.step();
    let sum: f64 = f.values().iter().map(|&v| pow_q(v / peak, q)).sum();
    Ok(peak * (sum * h).powf(1.0 / q))
}

/// Total variation of the sampled period, wrap-around term included.
pub fn total_variation(f: &PeriodicGrid) -> f64 {
    let v = f.values();
    let n = v.len();
    (0..n).map(|j| (v[(j + 1) % n] - v[j]).abs()).sum()
}

/// Information map: `(a₀, a₁, b₁, …, a_{n−1}, b_{n−1})` with coefficients
/// normalised by π, so `a₀` is twice the mean.
pub fn fourier_information(f: &PeriodicGrid, n: u32) -> Vec<f64> {
    assert!(n >= 1);
    let s = analyze(f);
    let mut out = Vec::with_capacity(2 * n as usize - 1);
    out.push(2.0 * s.mean());
    for j in 1..n as usize {
        out.push(s.cos_coeff(j));
        out.push(s.sin_coeff(j));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rearranged_cosine_follows_the_distribution_function() {
        // measure{|cos| > y} = 4 arccos(y), so r(cos, t) = cos(t/4).
        let n = 4096;
        let g = PeriodicGrid::from_fn(n, |t| t.cos()).unwrap();
        let r = rearrangement(&g);
        let mut worst = 0.0f64;
        for (j, &v) in r.values().iter().enumerate() {
            let t = TAU * j as f64 / n as f64;
            worst = worst.max((v - (t / 4.0).cos()).abs());
        }
        assert!(worst < TAU / n as f64, "defect {worst}");
    }

    #[test]
    fn rearrangement_of_constant_and_l1_preservation() {
        let g = PeriodicGrid::from_fn(64, |_| -0.7).unwrap();
        let r = rearrangement(&g);
        assert!(r.values().iter().all(|&v| (v - 0.7).abs() < 1e-15));
        let f = PeriodicGrid::from_fn(1024, |t| t.sin() + 0.3 * (3.0 * t).cos()).unwrap();
        let l1_f = lq_norm_grid(&f.map(f64::abs), 1.0).unwrap();
        let l1_r = rearrangement(&f).lq_riemann(1.0).unwrap();
        assert!((l1_f - l1_r).abs() < 1e-8);
    }

    #[test]
    fn norms_of_reference_functions() {
        for q in [1.0, 2.0, 5.0] {
            let one = lq_norm_of(&|_| 1.0, 64, q).unwrap();
            assert!((one - TAU.powf(1.0 / q)).abs() < 1e-12, "q={q}");
        }
        let l2 = lq_norm_of(&|t: f64| t.cos(), 512, 2.0).unwrap();
        assert!((l2 - PI.sqrt()).abs() < 1e-12);
        assert!(lq_norm_of(&|t: f64| t.cos(), 64, 0.5).is_err());
    }

    #[test]
    fn equimeasurability_of_the_rearrangement() {
        let f = PeriodicGrid::from_fn(1 << 16, |t| {
            t.sin() - 0.4 * (2.0 * t).cos() + 0.1 * (5.0 * t).sin()
        })
        .unwrap();
        for q in [1.0, 2.0, 3.0] {
            let direct = lq_norm(&f, q).unwrap();
            let sorted = rearrangement(&f).lq_riemann(q).unwrap();
            assert!((direct - sorted).abs() < 1e-6, "q={q} {direct} {sorted}");
        }
    }

    #[test]
    fn holder_ordering_after_normalisation() {
        let f = PeriodicGrid::from_fn(2048, |t| t.sin() + 0.2 * (3.0 * t).sin()).unwrap();
        let mut prev = 0.0;
        for q in [1.0, 2.0, 4.0, 8.0] {
            let nq = lq_norm(&f, q).unwrap() / TAU.powf(1.0 / q);
            assert!(nq >= prev - 1e-12, "q={q}");
            prev = nq;
        }
    }

    #[test]
    fn total_variation_of_references() {
        let cos_grid = PeriodicGrid::from_fn(4096, |t| t.cos()).unwrap();
        assert!((total_variation(&cos_grid) - 4.0).abs() < 1e-5);
        let flat = PeriodicGrid::from_fn(64, |_| 3.0).unwrap();
        assert_eq!(total_variation(&flat), 0.0);
    }

    #[test]
    fn information_map_reference_values() {
        let cos_grid = PeriodicGrid::from_fn(256, |t| t.cos()).unwrap();
        let i1 = fourier_information(&cos_grid, 1);
        assert_eq!(i1.len(), 1);
        assert!(i1[0].abs() < 1e-14);
        let hi = PeriodicGrid::from_fn(256, |t| (5.0 * t).cos()).unwrap();
        let i3 = fourier_information(&hi, 2);
        assert_eq!(i3.len(), 3);
        assert!(i3.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn domination_on_scaled_copies() {
        let f = PeriodicGrid::from_fn(1024, |t| t.sin()).unwrap();
        let half = f.map(|v| 0.5 * v);
        let rep = rearrangement_dominates(&half, &f, 1e-12).unwrap();
        assert!(rep.dominated);
        let eq = rearrangement_dominates(&f, &f, 1e-12).unwrap();
        assert!(eq.dominated && eq.max_violation <= 0.0);
        let rev = rearrangement_dominates(&f, &half, 1e-12).unwrap();
        assert!(!rev.dominated);
    }
}
