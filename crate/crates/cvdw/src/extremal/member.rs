//! Randomized class members `f = a + G∗φ(K_β∗u)` with ‖u‖_∞ ≤ 1.
//!
//! Sources come in two flavours: ±1 step functions on random knots, and
//! clipped trigonometric polynomials (smooth, rescalable). Constraint
//! enforcement (orthogonality of `φ(K_β∗u)` to constants when the class
//! admits them) runs a bisection on a scalar deformation of the source:
//! alternating knot breathing for steps, a pre-clip offset for polynomials.
//! For β = 0 every evaluation has an exact time-domain route so that
//! near-equality margins are never blurred by series truncation.

use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernel::{eval_d, KernelSpec, LinkFunction};
use crate::oscillation::trial_rng;
use crate::quad::{bisect_monotone, gauss16_panels, golden_max};
use crate::spectral::{
    analyze, compose_link, convolve, differentiate, synthesize, FourierSeries, PeriodicGrid,
};
use crate::spline::KnotVector;
use crate::standard::{euler_spline_value, smoothed_step_value};

use super::ClassConfig;

/// How the unit-bounded source is drawn.
#[derive(Debug, Clone, Copy)]
pub enum SourceMode {
    /// ±1 step function with at most `2·max_m` random knots.
    Step { max_m: usize },
    /// Clipped random trigonometric polynomial of degree ≤ `max_degree`.
    ClippedTrig { max_degree: usize },
}

#[derive(Debug, Clone)]
enum Source {
    Step(KnotVector),
    Trig(TrigSource),
}

#[derive(Debug, Clone)]
struct TrigSource {
    cos: Vec<f64>,
    sin: Vec<f64>,
    amp: f64,
    offset: f64,
    scale: f64,
    /// Points where `amp·T − offset` crosses ±1 (kinks of the clipped wave).
    breaks: Vec<f64>,
}

impl TrigSource {
    fn raw(&self, t: f64) -> f64 {
        let (c1, s1) = (t.cos(), t.sin());
        let (mut ck, mut sk) = (c1, s1);
        let mut acc = 0.0;
        for k in 0..self.cos.len() {
            acc += self.cos[k] * ck + self.sin[k] * sk;
            let c_next = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = c_next;
        }
        acc
    }

    fn eval(&self, t: f64) -> f64 {
        self.scale * (self.amp * self.raw(t) - self.offset).clamp(-1.0, 1.0)
    }

    fn locate_breaks(&mut self) {
        let scan = 4096;
        let mut breaks = Vec::new();
        let g = |t: f64| self.amp * self.raw(t) - self.offset;
        let mut prev = g(0.0);
        for j in 1..=scan {
            let t = TAU * j as f64 / scan as f64;
            let v = g(t);
            for level in [-1.0, 1.0] {
                if (prev - level) * (v - level) < 0.0 {
                    breaks.push(crate::quad::bisect_root(
                        &|x| g(x) - level,
                        TAU * (j - 1) as f64 / scan as f64,
                        t,
                        1e-13,
                    ));
                }
            }
            prev = v;
        }
        breaks.sort_by(f64::total_cmp);
        self.breaks = breaks;
    }
}

impl Source {
    fn eval(&self, t: f64) -> f64 {
        match self {
            Source::Step(k) => k.eval_h(t),
            Source::Trig(tr) => tr.eval(t),
        }
    }

    fn kinks(&self) -> Vec<f64> {
        match self {
            Source::Step(k) => k.knots().to_vec(),
            Source::Trig(tr) => tr.breaks.clone(),
        }
    }

    fn mean(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|j| self.eval(TAU * j as f64 / samples as f64))
            .sum::<f64>()
            / samples as f64
    }
}

/// A realized class member with cached spectral data and exact evaluators.
#[derive(Debug, Clone)]
pub struct ClassMember {
    cfg: ClassConfig,
    source: Source,
    pub a: f64,
    pub series: FourierSeries,
    pub grid: PeriodicGrid,
    deriv_series: FourierSeries,
    /// |∫φ(K_β∗u)| / 2π after constraint enforcement.
    pub mean_defect: f64,
    n_grid: usize,
}

impl ClassMember {
    pub fn config(&self) -> &ClassConfig {
        &self.cfg
    }

    pub fn source_sup(&self) -> f64 {
        let scan = 2048;
        (0..scan)
            .map(|j| self.source.eval(TAU * j as f64 / scan as f64).abs())
            .fold(0.0, f64::max)
    }

    pub fn value_at(&self, t: f64) -> f64 {
        if self.cfg.beta > 0.0 {
            return self.series.eval(t);
        }
        let r = self.cfg.kernel().bernoulli_order().unwrap_or(0);
        if r == 0 {
            return self.a + self.source.eval(t);
        }
        match &self.source {
            Source::Step(k) => self.a + euler_spline_value(r, k, t),
            Source::Trig(_) => self.a + self.direct_bernoulli_conv(r, t),
        }
    }

    pub fn deriv_at(&self, t: f64) -> f64 {
        if self.cfg.beta > 0.0 {
            return self.deriv_series.eval(t);
        }
        let r = self.cfg.kernel().bernoulli_order().unwrap_or(0);
        match (&self.source, r) {
            (_, 0) => self.deriv_series.eval(t),
            (_, 1) => self.source.eval(t) - self.source.mean(2048),
            (Source::Step(k), _) => euler_spline_value(r - 1, k, t),
            (Source::Trig(_), _) => self.direct_bernoulli_conv(r - 1, t),
        }
    }

    /// Whether `value_at` is both exact and cheap enough to drive the
    /// adaptive norm quadrature directly (spectral members and equidistant
    /// or step sources). Clipped-polynomial sources at β = 0 fall back to
    /// their truncated series for norms.
    pub fn exact_norm_route(&self) -> bool {
        self.cfg.beta > 0.0 || matches!(self.source, Source::Step(_))
    }

    /// `(1/2π) ∫ D_r(u) · source(t−u) du` with panels split at the kernel
    /// kink and at the source kinks.
    fn direct_bernoulli_conv(&self, r: u32, t: f64) -> f64 {
        let mut breaks: Vec<f64> = self
            .source
            .kinks()
            .iter()
            .map(|&s| (t - s).rem_euclid(TAU))
            .collect();
        breaks.push(0.0);
        breaks.push(TAU);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        let mut total = 0.0;
        let target_h = TAU / 96.0;
        for w in breaks.windows(2) {
            let len = w[1] - w[0];
            if len < 1e-13 {
                continue;
            }
            let panels = (len / target_h).ceil().max(1.0) as usize;
            total += gauss16_panels(
                &|u: f64| eval_d(r, u).unwrap() * self.source.eval(t - u),
                w[0],
                w[1],
                panels,
            );
        }
        total / TAU
    }

    pub fn sup_norm(&self) -> f64 {
        sup_of(|t| self.value_at(t), 2048)
    }

    pub fn deriv_sup_norm(&self) -> f64 {
        sup_of(|t| self.deriv_at(t), 2048)
    }

    /// Sup norm of the zero-mean periodic integral; the member must have no
    /// constant term.
    pub fn integral_sup_norm(&self) -> Result<f64> {
        if self.a != 0.0 {
            return Err(Error::NonzeroMean(self.a.abs()));
        }
        if self.cfg.beta > 0.0 {
            let integral = crate::spectral::periodic_integral(&self.series)?;
            return Ok(sup_of(|t| integral.eval(t), 2048));
        }
        let r = self.cfg.kernel().bernoulli_order().unwrap_or(0);
        match &self.source {
            Source::Step(k) => Ok(sup_of(|t| euler_spline_value(r + 1, k, t), 2048)),
            Source::Trig(_) => Ok(sup_of(|t| self.direct_bernoulli_conv(r + 1, t), 2048)),
        }
    }

    pub fn n_grid(&self) -> usize {
        self.n_grid
    }
}

fn sup_of<F: Fn(f64) -> f64>(eval: F, scan: usize) -> f64 {
    let mut best = 0.0f64;
    let mut best_j = 0;
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

/// Mean of `φ(K_β∗u)` over the period, the quantity the Θ-constraint pins
/// to zero.
fn constraint_mean(cfg: &ClassConfig, source: &Source) -> f64 {
    if cfg.beta == 0.0 {
        return source.mean(4096);
    }
    let samples = 1024;
    match source {
        Source::Step(knots) => {
            let mut acc = 0.0;
            for j in 0..samples {
                let t = TAU * j as f64 / samples as f64;
                let v = smoothed_step_value(cfg.beta, knots, t);
                acc += cfg.link().eval(v.clamp(-1.0, 1.0)).unwrap();
            }
            acc / samples as f64
        }
        Source::Trig(_) => {
            let grid = PeriodicGrid::from_fn(samples, |t| source.eval(t)).unwrap();
            let smoothed = convolve(&KernelSpec::analytic(cfg.beta), &analyze(&grid));
            let sampled = synthesize(&smoothed, samples).unwrap();
            let mut acc = 0.0;
            for &v in sampled.values() {
                acc += cfg.link().eval(v.clamp(-1.0, 1.0)).unwrap();
            }
            acc / samples as f64
        }
    }
}

/// Move odd-indexed knots forward and even-indexed knots backward by δ;
/// the constraint mean is monotone in δ.
fn breathe(knots: &KnotVector, delta: f64) -> Result<KnotVector> {
    let moved: Vec<f64> = knots
        .knots()
        .iter()
        .enumerate()
        .map(|(idx, &x)| {
            let s = if idx % 2 == 0 { 1.0 } else { -1.0 };
            (x + s * delta).rem_euclid(TAU)
        })
        .collect();
    let mut sorted = moved.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted != moved {
        return Err(Error::Knots("breathing crossed a knot".into()));
    }
    KnotVector::new(moved)
}

/// Rotate the knot set so that 0 sits in the middle of the largest gap.
/// Rotation changes neither norms nor the constraint magnitude, and it
/// gives the breathing deformation clearance from the period boundary.
fn rotate_mid_gap(knots: &KnotVector) -> KnotVector {
    let ks = knots.knots();
    let last = ks.len() - 1;
    let mut best_start = ks[last];
    let mut best_gap = ks[0] + TAU - ks[last];
    for i in 0..last {
        let g = ks[i + 1] - ks[i];
        if g > best_gap {
            best_gap = g;
            best_start = ks[i];
        }
    }
    let mid = best_start + 0.5 * best_gap;
    let mut moved: Vec<f64> = ks.iter().map(|&x| (x - mid).rem_euclid(TAU)).collect();
    moved.sort_by(f64::total_cmp);
    KnotVector::new(moved).expect("rotation preserves knot validity")
}

/// Largest admissible breathing amplitudes (negative, positive): gaps
/// alternate between shrinking by 2δ and growing by 2δ, and the outermost
/// knots must not cross the period boundary.
fn breathing_range(knots: &KnotVector) -> (f64, f64) {
    let ks = knots.knots();
    let mut shrink_pos = f64::INFINITY; // gaps that shrink when δ > 0
    let mut shrink_neg = f64::INFINITY; // gaps that shrink when δ < 0
    for j in 0..ks.len() {
        let gap = if j + 1 < ks.len() {
            ks[j + 1] - ks[j]
        } else {
            ks[0] + TAU - ks[j]
        };
        if j % 2 == 0 {
            shrink_pos = shrink_pos.min(gap);
        } else {
            shrink_neg = shrink_neg.min(gap);
        }
    }
    let boundary = ks[0].min(TAU - ks[ks.len() - 1]);
    let lo = -(0.45 * shrink_neg).min(0.9 * boundary);
    let hi = 0.45 * shrink_pos;
    (lo, hi)
}

pub(super) fn enforce_step_constraint(cfg: &ClassConfig, knots: KnotVector) -> Result<KnotVector> {
    if constraint_mean(cfg, &Source::Step(knots.clone())).abs() <= 1e-10 {
        return Ok(knots);
    }
    let mut current = rotate_mid_gap(&knots);
    for _round in 0..16 {
        let mean = constraint_mean(cfg, &Source::Step(current.clone()));
        if mean.abs() <= 1e-10 {
            return Ok(current);
        }
        let (lo, hi) = breathing_range(&current);
        if hi - lo <= 1e-10 {
            break;
        }
        let f = |d: f64| {
            breathe(&current, d)
                .map(|k| constraint_mean(cfg, &Source::Step(k)))
                .unwrap_or(f64::NAN)
        };
        match bisect_monotone(&f, lo, hi, 1e-11, 100) {
            Some((d, _)) => {
                current = breathe(&current, d)?;
            }
            None => {
                // Saturate toward the better end and breathe again.
                let at_lo = f(lo);
                let at_hi = f(hi);
                if at_lo.is_nan() || at_hi.is_nan() {
                    break;
                }
                let d = if at_lo.abs() < at_hi.abs() { lo } else { hi };
                current = breathe(&current, d * 0.98)?;
                current = rotate_mid_gap(&current);
            }
        }
        if constraint_mean(cfg, &Source::Step(current.clone())).abs() <= 1e-10 {
            return Ok(current);
        }
    }
    let mean = constraint_mean(cfg, &Source::Step(current.clone()));
    if mean.abs() <= 1e-8 {
        Ok(current)
    } else {
        Err(Error::ConstraintEnforcement(100))
    }
}

fn enforce_trig_constraint(cfg: &ClassConfig, mut trig: TrigSource) -> Result<TrigSource> {
    let f = |c: f64| {
        let mut probe = trig.clone();
        probe.offset = c;
        constraint_mean(cfg, &Source::Trig(probe))
    };
    // The mean is decreasing in the offset; ±(amp·maxT + 1) brackets it.
    let bound = 1.0 + trig.amp * (0..512).map(|j| trig.raw(TAU * j as f64 / 512.0).abs()).fold(0.0, f64::max);
    let (c, _steps) =
        bisect_monotone(&f, -bound, bound, 1e-11, 100).ok_or(Error::ConstraintEnforcement(100))?;
    trig.offset = c;
    Ok(trig)
}

fn build_member(cfg: &ClassConfig, source: Source, a: f64, n_grid: usize) -> Result<ClassMember> {
    // Step sources have exact coefficients; clipped polynomials are
    // oversampled to tame aliasing from their kinks, then truncated.
    let u_series = match &source {
        Source::Step(knots) => knots.h_fourier(n_grid / 2 - 1),
        Source::Trig(_) => {
            let fine = 4 * n_grid;
            let u_grid = PeriodicGrid::from_fn(fine, |t| source.eval(t))?;
            analyze(&u_grid).truncated(n_grid / 2 - 1)
        }
    };
    let kernel = cfg.kernel();
    let mut series = if cfg.beta > 0.0 {
        let smoothed = convolve(&KernelSpec::analytic(cfg.beta), &u_series);
        let sampled = synthesize(&smoothed, n_grid)?;
        let linked = compose_link(cfg.link(), &sampled)?;
        convolve(&kernel, &analyze(&linked))
    } else {
        convolve(&kernel, &u_series)
    };
    series.set_mean(series.mean() + a);
    let deriv_series = differentiate(&series);
    let grid = synthesize(&series, n_grid)?;
    let mean_defect = constraint_mean(cfg, &source).abs();
    Ok(ClassMember {
        cfg: *cfg,
        source,
        a,
        series,
        grid,
        deriv_series,
        mean_defect,
        n_grid,
    })
}

/// Draw a random member of the class. Step sources keep ‖u‖_∞ = 1; clipped
/// polynomials may be rescaled later. When the class admits constants the
/// orthogonality constraint is enforced to 1e-8.
pub fn random_class_member(
    cfg: &ClassConfig,
    n_grid: usize,
    seed: u64,
    mode: SourceMode,
) -> Result<ClassMember> {
    let mut rng = trial_rng(seed, 0x6d65_6d62);
    let (source, a) = draw_source(cfg, &mut rng, mode)?;
    build_member(cfg, source, a, n_grid)
}

fn draw_source(
    cfg: &ClassConfig,
    rng: &mut ChaCha8Rng,
    mode: SourceMode,
) -> Result<(Source, f64)> {
    match mode {
        SourceMode::Step { max_m } => {
            let min_gap = 0.08;
            let knots = loop {
                let m = rng.random_range(1..=max_m.max(1));
                let mut pts: Vec<f64> = (0..2 * m).map(|_| rng.random_range(0.0..TAU)).collect();
                pts.sort_by(f64::total_cmp);
                let ok = pts.windows(2).all(|w| w[1] - w[0] >= min_gap)
                    && pts[0] + TAU - pts[2 * m - 1] >= min_gap;
                if ok {
                    if let Ok(k) = KnotVector::new(pts) {
                        break k;
                    }
                }
            };
            let knots = if cfg.constants_allowed() {
                enforce_step_constraint(cfg, knots)?
            } else {
                knots
            };
            Ok((Source::Step(knots), 0.0))
        }
        SourceMode::ClippedTrig { max_degree } => {
            let degree = rng.random_range(2..=max_degree.max(2));
            let cos: Vec<f64> = (1..=degree)
                .map(|k| rng.random_range(-1.0..1.0) / k as f64)
                .collect();
            let sin: Vec<f64> = (1..=degree)
                .map(|k| rng.random_range(-1.0..1.0) / k as f64)
                .collect();
            let mut trig = TrigSource {
                cos,
                sin,
                amp: 1.0,
                offset: 0.0,
                scale: 1.0,
                breaks: Vec::new(),
            };
            let max_t = (0..1024)
                .map(|j| trig.raw(TAU * j as f64 / 1024.0).abs())
                .fold(0.0, f64::max)
                .max(1e-9);
            trig.amp = rng.random_range(0.7..1.6) / max_t;
            let mut trig = if cfg.constants_allowed() {
                enforce_trig_constraint(cfg, trig)?
            } else {
                trig
            };
            trig.locate_breaks();
            Ok((Source::Trig(trig), 0.0))
        }
    }
}

/// Draw a clipped-polynomial member and shrink its source until
/// `metric(f) ≤ rho · target`. The shrink rescales the source (keeping it
/// unit-bounded and re-enforcing the constraint), so class membership is
/// exact at every step. A random constant term within the allowance is
/// added for classes that contain constants, unless `zero_constant`.
pub fn random_member_with_bound(
    cfg: &ClassConfig,
    n_grid: usize,
    seed: u64,
    target: f64,
    rho: f64,
    metric: MemberMetric,
    zero_constant: bool,
) -> Result<ClassMember> {
    let mut rng = trial_rng(seed, 0x7363_616c);
    let (source, _) = draw_source(cfg, &mut rng, SourceMode::ClippedTrig { max_degree: 8 })?;
    let Source::Trig(trig) = source else {
        unreachable!()
    };
    let goal = rho * target;
    let measure = |m: &ClassMember| -> Result<f64> {
        Ok(match metric {
            MemberMetric::Sup => m.sup_norm(),
            MemberMetric::IntegralSup => m.integral_sup_norm()?,
        })
    };

    let build_at = |s: f64| -> Result<ClassMember> {
        let mut scaled = trig.clone();
        scaled.scale = s;
        let scaled = if cfg.constants_allowed() && cfg.link() == LinkFunction::Phi0 {
            // The offset that balances the constraint moves with the scale.
            let mut t = scaled;
            t = enforce_trig_constraint_scaled(cfg, t)?;
            t
        } else {
            scaled
        };
        let mut t = scaled;
        t.locate_breaks();
        build_member(cfg, Source::Trig(t), 0.0, n_grid)
    };

    let base = build_at(1.0)?;
    let base_val = measure(&base)?;
    let mut member = if base_val <= goal {
        base
    } else if cfg.link() == LinkFunction::Phi1 {
        // Linear pipeline: one exact rescale.
        build_at(goal / base_val)?
    } else {
        // Shrink from below; keep the last scale whose metric is ≤ goal.
        let mut lo = 0.0;
        let mut hi = 1.0;
        let mut best = None;
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            let cand = build_at(mid)?;
            if measure(&cand)? <= goal {
                lo = mid;
                best = Some(cand);
            } else {
                hi = mid;
            }
        }
        best.unwrap_or(build_at(lo.max(1e-3))?)
    };
    if cfg.constants_allowed() && !zero_constant {
        // Re-seat the constant inside the remaining sup allowance.
        let slack = (target - measure(&member)?).max(0.0);
        if metric == MemberMetric::Sup && slack > 0.0 {
            let a = rng.random_range(-1.0..1.0) * 0.9 * slack;
            let Source::Trig(t) = member.source.clone() else {
                unreachable!()
            };
            member = build_member(cfg, Source::Trig(t), a, n_grid)?;
        }
    }
    Ok(member)
}

fn enforce_trig_constraint_scaled(cfg: &ClassConfig, trig: TrigSource) -> Result<TrigSource> {
    // Same bisection as the unscaled variant; the scaled eval is already
    // what `constraint_mean` sees.
    let f = |c: f64| {
        let mut probe = trig.clone();
        probe.offset = c;
        constraint_mean(cfg, &Source::Trig(probe))
    };
    let bound =
        1.0 + trig.amp * (0..512).map(|j| trig.raw(TAU * j as f64 / 512.0).abs()).fold(0.0, f64::max);
    let (c, _) =
        bisect_monotone(&f, -bound, bound, 1e-11, 100).ok_or(Error::ConstraintEnforcement(100))?;
    let mut out = trig;
    out.offset = c;
    Ok(out)
}

/// Which functional the shrink controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberMetric {
    Sup,
    IntegralSup,
}

/// The member generated by the equidistant step source (the standard
/// function itself, as a class member).
pub fn uniform_member(cfg: &ClassConfig, m: u32, n_grid: usize) -> Result<ClassMember> {
    build_member(cfg, Source::Step(KnotVector::uniform(m)), 0.0, n_grid)
}

/// A member of the linear-link classes built from a source with no
/// spectral content below frequency `n`; its low information block
/// vanishes identically.
pub fn highpass_member(
    cfg: &ClassConfig,
    n: u32,
    n_grid: usize,
    seed: u64,
) -> Result<ClassMember> {
    if cfg.link() != LinkFunction::Phi1 {
        return Err(Error::Config(
            "high-pass members need the linear link".into(),
        ));
    }
    let mut rng = trial_rng(seed, 0x6870_6173);
    let lo = n as usize;
    let hi = (3 * n) as usize;
    let mut cos = vec![0.0; hi];
    let mut sin = vec![0.0; hi];
    for k in lo..=hi {
        cos[k - 1] = rng.random_range(-1.0..1.0);
        sin[k - 1] = rng.random_range(-1.0..1.0);
    }
    let mut trig = TrigSource {
        cos,
        sin,
        amp: 1.0,
        offset: 0.0,
        scale: 1.0,
        breaks: Vec::new(),
    };
    let max_t = (0..2048)
        .map(|j| trig.raw(TAU * j as f64 / 2048.0).abs())
        .fold(0.0, f64::max)
        .max(1e-9);
    // Stay strictly inside the unit ball so no clipping occurs and the
    // source remains band-limited above n.
    trig.amp = 0.95 / max_t;
    build_member(cfg, Source::Trig(trig), 0.0, n_grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn members_are_unit_bounded_and_constrained() {
        for cfg in [
            ClassConfig::sobolev(1).unwrap(),
            ClassConfig::achieser(1, 1.0).unwrap(),
            ClassConfig::hardy(1, 1.0).unwrap(),
            ClassConfig::hardy(0, 0.5).unwrap(),
        ] {
            for seed in 0..4u64 {
                let m = random_class_member(&cfg, 1024, seed, SourceMode::ClippedTrig { max_degree: 6 })
                    .unwrap();
                assert!(m.source_sup() <= 1.0 + 1e-12, "{}", cfg.label());
                if cfg.constants_allowed() {
                    assert!(m.mean_defect < 1e-8, "{} defect {}", cfg.label(), m.mean_defect);
                }
                let s = random_class_member(&cfg, 1024, seed, SourceMode::Step { max_m: 4 }).unwrap();
                assert!(s.source_sup() <= 1.0 + 1e-12);
                if cfg.constants_allowed() {
                    assert!(s.mean_defect < 1e-8);
                }
            }
        }
    }

    #[test]
    fn uniform_member_reproduces_the_standard_function() {
        let cfg = ClassConfig::hardy(1, 1.0).unwrap();
        let m = uniform_member(&cfg, 2, 1024).unwrap();
        let phi = cfg.standard(2, 1024).unwrap();
        for &t in &[0.2, 1.0, 2.4, 5.0] {
            assert!((m.value_at(t) - phi.value_at(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_route_agrees_with_series_for_beta_zero() {
        let cfg = ClassConfig::sobolev(2).unwrap();
        let m = random_class_member(&cfg, 1024, 7, SourceMode::ClippedTrig { max_degree: 5 })
            .unwrap();
        for &t in &[0.3, 1.9, 4.2] {
            let exact = m.value_at(t);
            let series = m.series.eval(t);
            assert!((exact - series).abs() < 1e-5, "exact {exact} series {series}");
        }
    }

    #[test]
    fn scaled_member_respects_the_sup_bound() {
        let cfg = ClassConfig::hardy(1, 1.0).unwrap();
        let phi = cfg.standard(2, 1024).unwrap();
        let target = phi.sup_norm();
        let m = random_member_with_bound(&cfg, 1024, 3, target, 1.0, MemberMetric::Sup, true)
            .unwrap();
        assert!(m.sup_norm() <= target + 1e-10);
    }

    #[test]
    fn highpass_member_has_empty_information_block() {
        let cfg = ClassConfig::achieser(1, 1.0).unwrap();
        let m = highpass_member(&cfg, 3, 1024, 5).unwrap();
        let info = crate::analysis::fourier_information(&m.grid, 3);
        for v in info {
            assert!(v.abs() < 1e-10, "{v}");
        }
    }
}
