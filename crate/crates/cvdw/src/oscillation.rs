//! Sign-change and zero counting for vectors and sampled periodic
//! functions, plus the randomized variation-diminishing checks.
//!
//! Sampled counts are lower bounds of the underlying suprema, so every
//! check here places them on the side where undercounting is conservative.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::spectral::{analyze, convolve, synthesize, FourierSeries, PeriodicGrid};
use crate::spline::KnotVector;
use crate::standard::StandardFunction;

/// `S⁻`: sign changes with zero entries discarded.
pub fn sign_changes(x: &[f64]) -> Result<usize> {
    let signs: Vec<i8> = x
        .iter()
        .filter(|v| **v != 0.0)
        .map(|v| if *v > 0.0 { 1 } else { -1 })
        .collect();
    if signs.is_empty() {
        return Err(Error::TrivialVector);
    }
    Ok(signs.windows(2).filter(|w| w[0] != w[1]).count())
}

/// `S_c⁻`: cyclic sign changes, invariant under rotation and always even.
pub fn cyclic_sign_changes(x: &[f64]) -> Result<usize> {
    let signs: Vec<i8> = x
        .iter()
        .filter(|v| **v != 0.0)
        .map(|v| if *v > 0.0 { 1 } else { -1 })
        .collect();
    if signs.is_empty() {
        return Err(Error::TrivialVector);
    }
    let n = signs.len();
    Ok((0..n)
        .filter(|&i| signs[i] != signs[(i + 1) % n])
        .count())
}

/// `S_c⁺`: cyclic sign changes with zeros assigned ±1 adversarially to
/// maximize the count. Solved per maximal zero run; parity fixes whether a
/// run of length L can contribute L+1 or only L changes.
pub fn max_cyclic_sign_changes(x: &[f64]) -> Result<usize> {
    let n = x.len();
    let nonzero: Vec<usize> = (0..n).filter(|&i| x[i] != 0.0).collect();
    if nonzero.is_empty() {
        return Err(Error::TrivialVector);
    }
    let m = nonzero.len();
    let mut total = 0usize;
    for i in 0..m {
        let p = nonzero[i];
        let q = nonzero[(i + 1) % m];
        let run = if m == 1 {
            n - 1
        } else {
            (q + n - p - 1) % n
        };
        let opposite = (x[p] > 0.0) != (x[q] > 0.0);
        total += if run == 0 {
            usize::from(opposite)
        } else if ((run + 1) % 2 == 1) == opposite {
            run + 1
        } else {
            run
        };
    }
    Ok(total)
}

/// Zero out entries below the threshold and count `S_c⁻`. With `eps =
/// None` the threshold is 1e-8 of the sample range.
pub fn sampled_sc(grid: &PeriodicGrid, eps: Option<f64>) -> Result<usize> {
    sampled_sc_values(grid.values(), eps)
}

pub(crate) fn sampled_sc_values(values: &[f64], eps: Option<f64>) -> Result<usize> {
    let eps = eps.unwrap_or_else(|| default_eps(values));
    let masked: Vec<f64> = values
        .iter()
        .map(|&v| if v.abs() < eps { 0.0 } else { v })
        .collect();
    cyclic_sign_changes(&masked)
}

/// Thresholded `S_c⁺` of the samples (zeros may count twice).
pub fn sampled_zc(grid: &PeriodicGrid, eps: Option<f64>) -> Result<usize> {
    let values = grid.values();
    let eps = eps.unwrap_or_else(|| default_eps(values));
    let masked: Vec<f64> = values
        .iter()
        .map(|&v| if v.abs() < eps { 0.0 } else { v })
        .collect();
    max_cyclic_sign_changes(&masked)
}

fn default_eps(values: &[f64]) -> f64 {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    1e-8 * (hi - lo)
}

/// Outcome of a randomized variation-diminishing trial run.
#[derive(Debug, Clone)]
pub struct CvdReport {
    pub trials: usize,
    pub max_output_count: usize,
    pub violations: Vec<CvdViolation>,
}

#[derive(Debug, Clone)]
pub struct CvdViolation {
    pub trial: usize,
    pub input_count: usize,
    pub output_count: usize,
}

/// Randomized check that convolution with the kernel never increases the
/// cyclic sign count of a ±1 step source.
pub fn check_cvd(kernel: &KernelSpec, trials: usize, seed: u64) -> Result<CvdReport> {
    kernel.validate()?;
    let n_grid = 2048usize;
    let kmax = n_grid / 2 - 1;
    let mut violations = Vec::new();
    let mut max_out = 0usize;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial as u64);
        let knots = random_knots(&mut rng, 16.0 * TAU / n_grid as f64);
        let h_grid = PeriodicGrid::from_fn(n_grid, |t| knots.eval_h(t))?;
        let in_count = sampled_sc(&h_grid, None)?;
        let conv = convolve(kernel, &knots.h_fourier(kmax));
        let out_grid = synthesize(&conv, n_grid)?;
        let out_count = sampled_sc(&out_grid, None)?;
        max_out = max_out.max(out_count);
        if out_count > in_count {
            violations.push(CvdViolation {
                trial,
                input_count: in_count,
                output_count: out_count,
            });
        }
    }
    Ok(CvdReport {
        trials,
        max_output_count: max_out,
        violations,
    })
}

/// Randomized check of the oscillation-diminishing consequence for the
/// polynomial kernels: `S_c(a + D_r∗φ) ≤ S_c(φ)` for trigonometric φ ⊥ 1.
pub fn check_kernel_diminishes_trig(r: u32, trials: usize, seed: u64) -> Result<CvdReport> {
    let kernel = KernelSpec::bernoulli(r);
    kernel.validate()?;
    let n_grid = 2048usize;
    let mut violations = Vec::new();
    let mut max_out = 0usize;
    for trial in 0..trials {
        let mut rng = trial_rng(seed ^ 0x9f0e_331d, trial as u64);
        let degree = rng.random_range(1..=6usize);
        let cos: Vec<f64> = (0..degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sin: Vec<f64> = (0..degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        let phi = FourierSeries::new(0.0, cos, sin);
        let phi_grid = synthesize(&phi, n_grid)?;
        let in_count = sampled_sc(&phi_grid, None)?;
        let mut psi = convolve(&kernel, &phi);
        let a = rng.random_range(-0.5..0.5) * psi_scale(&psi);
        psi.set_mean(psi.mean() + a);
        let psi_grid = synthesize(&psi, n_grid)?;
        let out_count = sampled_sc(&psi_grid, None).unwrap_or(0);
        max_out = max_out.max(out_count);
        if out_count > in_count {
            violations.push(CvdViolation {
                trial,
                input_count: in_count,
                output_count: out_count,
            });
        }
    }
    Ok(CvdReport {
        trials,
        max_output_count: max_out,
        violations,
    })
}

fn psi_scale(s: &FourierSeries) -> f64 {
    (1..=s.max_freq())
        .map(|k| s.cos_coeff(k).hypot(s.sin_coeff(k)))
        .sum::<f64>()
        .max(1e-12)
}

pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(trial.wrapping_mul(0xd1b5_4a32_d192_ed03)),
    )
}

pub(crate) fn random_knots(rng: &mut ChaCha8Rng, min_gap: f64) -> KnotVector {
    loop {
        let m = rng.random_range(1..=5usize);
        let mut pts: Vec<f64> = (0..2 * m).map(|_| rng.random_range(0.0..TAU)).collect();
        pts.sort_by(f64::total_cmp);
        let ok = pts.windows(2).all(|w| w[1] - w[0] >= min_gap)
            && pts[0] + TAU - pts[2 * m - 1] >= min_gap;
        if ok {
            if let Ok(k) = KnotVector::new(pts) {
                return k;
            }
        }
    }
}

/// Single-crossing verdict for `f` against each monotone branch of a
/// regular comparison function, over a grid of shifts.
#[derive(Debug, Clone)]
pub struct MuPropertyReport {
    pub holds: bool,
    pub witness: Option<MuWitness>,
}

#[derive(Debug, Clone)]
pub struct MuWitness {
    pub shift: f64,
    pub interval: (f64, f64),
    pub sign_changes: usize,
    pub wrong_orientation: bool,
}

/// Check that on every monotone branch of `psi` and every tested shift of
/// `f`, the difference `psi(t) − f(t+α)` crosses zero at most once and in
/// the orientation dictated by the branch direction.
pub fn check_mu_property(f: &PeriodicGrid, psi: &StandardFunction) -> Result<MuPropertyReport> {
    let extrema = psi.extrema()?;
    let f_series = analyze(f);
    let scale = psi.sup_norm().max(f.max_abs());
    let eps = 1e-9 * scale;
    for shift_idx in 0..64 {
        let alpha = TAU * shift_idx as f64 / 64.0;
        for j in 0..extrema.len() {
            let (t_lo, v_lo) = extrema[j];
            let (mut t_hi, v_hi) = extrema[(j + 1) % extrema.len()];
            if t_hi <= t_lo {
                t_hi += TAU;
            }
            let decreasing = v_lo > v_hi;
            let samples = 128;
            let mut signs: Vec<i8> = Vec::with_capacity(samples + 1);
            for i in 0..=samples {
                let t = t_lo + (t_hi - t_lo) * i as f64 / samples as f64;
                let d = psi.value_at(t) - f_series.eval(t + alpha);
                if d.abs() >= eps {
                    signs.push(if d > 0.0 { 1 } else { -1 });
                }
            }
            let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
            let wrong_orientation = changes == 1
                && ((decreasing && signs[0] != 1) || (!decreasing && signs[0] != -1));
            if changes > 1 || wrong_orientation {
                return Ok(MuPropertyReport {
                    holds: false,
                    witness: Some(MuWitness {
                        shift: alpha,
                        interval: (t_lo, t_hi),
                        sign_changes: changes,
                        wrong_orientation,
                    }),
                });
            }
        }
    }
    Ok(MuPropertyReport {
        holds: true,
        witness: None,
    })
}

/// A sampled function is `2π/n`-regular when it has that period and runs
/// through exactly one decreasing and one increasing branch per period.
pub fn check_regular(psi: &PeriodicGrid, n: u32) -> Result<bool> {
    if n < 1 {
        return Err(Error::Config("regularity index must be ≥ 1".into()));
    }
    let series = analyze(psi);
    let period = TAU / n as f64;
    let mut period_defect = 0.0f64;
    for j in 0..256 {
        let t = TAU * j as f64 / 256.0;
        period_defect = period_defect.max((series.eval(t + period) - series.eval(t)).abs());
    }
    if period_defect > 1e-8 {
        return Ok(false);
    }
    let diffs: Vec<f64> = (0..psi.len())
        .map(|j| psi.values()[(j + 1) % psi.len()] - psi.values()[j])
        .collect();
    let count = sampled_sc_values(&diffs, None)?;
    Ok(count == 2 * n as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::LinkFunction;
    use crate::standard::standard_function;

    #[test]
    fn basic_counts() {
        assert_eq!(sign_changes(&[1.0, -1.0, 1.0]).unwrap(), 2);
        assert_eq!(sign_changes(&[1.0, 0.0, -1.0]).unwrap(), 1);
        assert_eq!(sign_changes(&[1.0, 2.0, 3.0]).unwrap(), 0);
        assert!(sign_changes(&[0.0, 0.0]).is_err());
        assert_eq!(cyclic_sign_changes(&[1.0, -1.0, 1.0, -1.0]).unwrap(), 4);
        assert_eq!(max_cyclic_sign_changes(&[1.0, 0.0, -1.0]).unwrap(), 2);
        assert_eq!(max_cyclic_sign_changes(&[1.0, 0.0, 1.0]).unwrap(), 2);
        assert_eq!(max_cyclic_sign_changes(&[1.0, 0.0]).unwrap(), 2);
    }

    #[test]
    fn cyclic_count_is_rotation_invariant_and_even() {
        let x = [1.0, 0.0, -2.0, 3.0, -1.0, 0.0, 0.0, 4.0];
        let base = cyclic_sign_changes(&x).unwrap();
        assert_eq!(base % 2, 0);
        for rot in 1..x.len() {
            let mut y = x.to_vec();
            y.rotate_left(rot);
            assert_eq!(cyclic_sign_changes(&y).unwrap(), base);
            assert_eq!(
                max_cyclic_sign_changes(&y).unwrap(),
                max_cyclic_sign_changes(&x).unwrap()
            );
        }
    }

    #[test]
    fn sampled_counts_on_reference_signals() {
        let cos_grid = PeriodicGrid::from_fn(256, |t| t.cos()).unwrap();
        assert_eq!(sampled_sc(&cos_grid, None).unwrap(), 2);
        let h3 = KnotVector::uniform(3);
        let h_grid = PeriodicGrid::from_fn(256, |t| h3.eval_h(t)).unwrap();
        assert_eq!(sampled_sc(&h_grid, None).unwrap(), 6);
        let one = PeriodicGrid::from_fn(64, |_| 1.0).unwrap();
        assert_eq!(sampled_sc(&one, None).unwrap(), 0);
        assert!(sampled_sc(&one, None).unwrap() <= sampled_zc(&one, None).unwrap());
    }

    #[test]
    fn smoothing_preserves_the_square_wave_count() {
        let n = 2;
        let knots = KnotVector::uniform(n);
        let conv = convolve(&KernelSpec::analytic(1.0), &knots.h_fourier(511));
        let grid = synthesize(&conv, 1024).unwrap();
        assert_eq!(sampled_sc(&grid, None).unwrap(), 2 * n as usize);
    }

    #[test]
    fn randomized_cvd_suite_is_clean() {
        let report = check_cvd(&KernelSpec::analytic(1.0), 50, 11).unwrap();
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        let pb = check_kernel_diminishes_trig(2, 50, 12).unwrap();
        assert!(pb.violations.is_empty(), "{:?}", pb.violations);
    }

    #[test]
    fn regularity_verdicts() {
        let cos_grid = PeriodicGrid::from_fn(1024, |t| t.cos()).unwrap();
        assert!(check_regular(&cos_grid, 1).unwrap());
        let mixed = PeriodicGrid::from_fn(1024, |t| t.cos() + (2.0 * t).cos()).unwrap();
        assert!(!check_regular(&mixed, 1).unwrap());
        let phi = standard_function(
            KernelSpec::bernoulli(1),
            LinkFunction::Phi0,
            1.0,
            KnotVector::uniform(2),
            1024,
        )
        .unwrap();
        assert!(check_regular(phi.grid(), 2).unwrap());
    }

    #[test]
    fn mu_property_verdicts() {
        let psi = standard_function(
            KernelSpec::bernoulli(1),
            LinkFunction::Phi1,
            1.0,
            KnotVector::uniform(1),
            1024,
        )
        .unwrap();
        // The comparison function against itself and against a shrunk copy.
        let same = psi.grid().clone();
        assert!(check_mu_property(&same, &psi).unwrap().holds);
        let half = psi.grid().map(|v| 0.5 * v);
        assert!(check_mu_property(&half, &psi).unwrap().holds);
        // cos 3t oscillates three times per branch of cos t.
        let fast = PeriodicGrid::from_fn(1024, |t| (3.0 * t).cos()).unwrap();
        let slow = standard_function(
            KernelSpec::Identity,
            LinkFunction::Phi1,
            1.0,
            KnotVector::uniform(1),
            1024,
        )
        .unwrap();
        let verdict = check_mu_property(&fast, &slow).unwrap();
        assert!(!verdict.holds);
        assert!(verdict.witness.is_some());
    }
}
