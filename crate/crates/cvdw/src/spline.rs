//! Knot vectors and the ±1 step functions they generate.
//!
//! A knot vector is an even-cardinality strictly increasing set in
//! [0, 2π); the associated step function `h_ξ` takes the value `(-1)^j` on
//! the j-th interval, counting the (possibly empty) interval `[0, ξ₁)` as
//! the first. Fourier coefficients are integrated in closed form per
//! constant piece, so they are exact.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::spectral::FourierSeries;

/// Knots closer than this are rejected as a degenerate interval; the
/// closure of the knot domain is represented by a shorter vector instead.
pub const MIN_KNOT_GAP: f64 = 1e-12;

/// Sorted even-cardinality knot set in [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector {
    knots: Vec<f64>,
}

impl KnotVector {
    pub fn new(knots: Vec<f64>) -> Result<Self> {
        if knots.is_empty() || knots.len() % 2 != 0 {
            return Err(Error::Knots(format!(
                "need a positive even number of knots, got {}",
                knots.len()
            )));
        }
        for &x in &knots {
            if !(0.0..TAU).contains(&x) || !x.is_finite() {
                return Err(Error::Knots(format!("knot {x} outside [0, 2π)")));
            }
        }
        for w in knots.windows(2) {
            if w[1] - w[0] < MIN_KNOT_GAP {
                return Err(Error::Knots(format!(
                    "knots {} and {} closer than the degeneracy threshold",
                    w[0], w[1]
                )));
            }
        }
        // The first and last knot must also stay separated around the wrap.
        let wrap_gap = knots[0] + TAU - knots[knots.len() - 1];
        if wrap_gap < MIN_KNOT_GAP {
            return Err(Error::Knots("first and last knot collide modulo 2π".into()));
        }
        Ok(KnotVector { knots })
    }

    /// Equidistant knots `ξ_j = (j-1)π/n`, j = 1..2n.
    pub fn uniform(n: u32) -> Self {
        assert!(n >= 1);
        let knots = (0..2 * n).map(|j| j as f64 * PI / n as f64).collect();
        KnotVector { knots }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Number of knots (2m).
    pub fn count(&self) -> usize {
        self.knots.len()
    }

    /// Interval boundaries 0, ξ₁, …, ξ_{2m}, 2π.
    pub fn boundaries(&self) -> Vec<f64> {
        let mut b = Vec::with_capacity(self.knots.len() + 2);
        b.push(0.0);
        b.extend_from_slice(&self.knots);
        b.push(TAU);
        b
    }

    /// `h_ξ(t)`: right-continuous ±1 step function with value `(-1)^j` on
    /// the j-th interval.
    pub fn eval_h(&self, t: f64) -> f64 {
        let w = t.rem_euclid(TAU);
        let below = self.knots.partition_point(|&x| x <= w);
        if below % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    /// Mean of `h_ξ` over the period.
    pub fn signed_mean(&self) -> f64 {
        let b = self.boundaries();
        let mut acc = 0.0;
        for (i, w) in b.windows(2).enumerate() {
            let sign = if (i + 1) % 2 == 1 { -1.0 } else { 1.0 };
            acc += sign * (w[1] - w[0]);
        }
        acc / TAU
    }

    /// Exact Fourier coefficients of `h_ξ` through frequency `max_freq`.
    pub fn h_fourier(&self, max_freq: usize) -> FourierSeries {
        assert!(max_freq >= 1);
        let b = self.boundaries();
        // Per-boundary phase tables sin(k·x), cos(k·x) by angle stepping.
        let mut cos_k = vec![0.0; max_freq + 1];
        let mut sin_k = vec![0.0; max_freq + 1];
        let mut a = vec![0.0; max_freq + 1];
        let mut bb = vec![0.0; max_freq + 1];
        let mut boundary_trig = Vec::with_capacity(b.len());
        for &x in &b {
            let (c1, s1) = (x.cos(), x.sin());
            cos_k[0] = 1.0;
            sin_k[0] = 0.0;
            for k in 1..=max_freq {
                cos_k[k] = cos_k[k - 1] * c1 - sin_k[k - 1] * s1;
                sin_k[k] = sin_k[k - 1] * c1 + cos_k[k - 1] * s1;
            }
            boundary_trig.push((cos_k.clone(), sin_k.clone()));
        }
        for i in 1..b.len() {
            let sign = if i % 2 == 1 { -1.0 } else { 1.0 };
            let (c_hi, s_hi) = &boundary_trig[i];
            let (c_lo, s_lo) = &boundary_trig[i - 1];
            for k in 1..=max_freq {
                let kf = k as f64 * PI;
                a[k] += sign * (s_hi[k] - s_lo[k]) / kf;
                bb[k] += sign * (c_lo[k] - c_hi[k]) / kf;
            }
        }
        FourierSeries::new(
            self.signed_mean(),
            a[1..].to_vec(),
            bb[1..].to_vec(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss16_split;

    #[test]
    fn construction_rules() {
        assert!(KnotVector::new(vec![0.0, 1.0, 2.0]).is_err()); // odd
        assert!(KnotVector::new(vec![]).is_err());
        assert!(KnotVector::new(vec![0.0, 0.0 + 1e-13]).is_err()); // degenerate
        assert!(KnotVector::new(vec![0.0, TAU]).is_err()); // out of range
        assert!(KnotVector::new(vec![0.5, 2.5]).is_ok());
    }

    #[test]
    fn step_values_and_antiperiodicity() {
        for n in 1..=5u32 {
            let h = KnotVector::uniform(n);
            assert_eq!(h.eval_h(0.0), 1.0);
            for &t in &[0.1, 0.9, 2.2, 4.0, 6.1] {
                let shifted = h.eval_h(t + PI / n as f64);
                assert_eq!(shifted, -h.eval_h(t), "n={n} t={t}");
            }
            assert!(h.signed_mean().abs() < 1e-15);
        }
    }

    #[test]
    fn sign_changes_match_knot_count() {
        let xi = KnotVector::new(vec![0.4, 1.1, 2.0, 3.3, 4.0, 5.5]).unwrap();
        let n = 4096;
        let vals: Vec<f64> = (0..n).map(|j| xi.eval_h(TAU * j as f64 / n as f64)).collect();
        let count = crate::oscillation::cyclic_sign_changes(&vals).unwrap();
        assert_eq!(count, 6);
    }

    #[test]
    fn uniform_knots_give_the_square_wave_series() {
        for n in [1u32, 2, 3] {
            let s = KnotVector::uniform(n).h_fourier(64);
            assert!(s.mean().abs() < 1e-15);
            for k in 1..=64usize {
                let a = s.cos_coeff(k);
                let b = s.sin_coeff(k);
                assert!(a.abs() < 1e-13, "n={n} k={k} a={a}");
                let expect = if k % (n as usize) == 0 && (k / n as usize) % 2 == 1 {
                    4.0 / (PI * (k as f64 / n as f64))
                } else {
                    0.0
                };
                assert!((b - expect).abs() < 1e-13, "n={n} k={k} b={b} expect={expect}");
            }
        }
    }

    #[test]
    fn arbitrary_knots_match_quadrature_oracle() {
        // Piecewise Gauss quadrature of ∫ h cos(kt), ∫ h sin(kt), split at
        // the knots where the integrand jumps.
        let xi = KnotVector::new(vec![0.7, 1.9, 3.1, 5.2]).unwrap();
        let s = xi.h_fourier(16);
        let breaks = xi.boundaries();
        for k in 1..=16usize {
            let ak = gauss16_split(&|t: f64| xi.eval_h(t) * (k as f64 * t).cos(), &breaks, 8) / PI;
            let bk = gauss16_split(&|t: f64| xi.eval_h(t) * (k as f64 * t).sin(), &breaks, 8) / PI;
            assert!((s.cos_coeff(k) - ak).abs() < 1e-10, "k={k}");
            assert!((s.sin_coeff(k) - bk).abs() < 1e-10, "k={k}");
        }
        let mean = gauss16_split(&|t: f64| xi.eval_h(t), &breaks, 8) / TAU;
        assert!((s.mean() - mean).abs() < 1e-12);
    }

    #[test]
    fn parseval_defect_small_at_large_cutoff() {
        // Σ coefficients² → mean of h² = 1; defect below 1e-3 at K = 10⁴.
        let xi = KnotVector::new(vec![0.4, 1.7, 2.4, 4.9]).unwrap();
        let s = xi.h_fourier(10_000);
        let mut sum = 2.0 * s.mean() * s.mean();
        for k in 1..=10_000usize {
            sum += s.cos_coeff(k).powi(2) + s.sin_coeff(k).powi(2);
        }
        // mean of h² over the period equals (mean²·2 + Σ(a²+b²))/2 = 1
        assert!((sum / 2.0 - 1.0).abs() < 1e-3, "defect {}", (sum / 2.0 - 1.0).abs());
    }
}
