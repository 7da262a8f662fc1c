//! Small quadrature and 1-D search toolbox shared by the norm and
//! verification code: composite 16-point Gauss–Legendre panels, golden
//! section maximisation and bisection root finding.

/// 16-point Gauss–Legendre nodes on [-1, 1] (positive half; the rule is
/// symmetric).
const GL16_NODES: [f64; 8] = [
    0.095_012_509_837_637_440_185,
    0.281_603_550_779_258_913_230,
    0.458_016_777_657_227_386_342,
    0.617_876_244_402_643_748_447,
    0.755_404_408_355_003_033_895,
    0.865_631_202_387_831_743_880,
    0.944_575_023_073_232_576_078,
    0.989_400_934_991_649_932_596,
];

const GL16_WEIGHTS: [f64; 8] = [
    0.189_450_610_455_068_496_285,
    0.182_603_415_044_923_588_867,
    0.169_156_519_395_002_538_189,
    0.149_595_988_816_576_732_081,
    0.124_628_971_255_533_872_052,
    0.095_158_511_682_492_784_810,
    0.062_253_523_938_647_892_863,
    0.027_152_459_411_754_094_852,
];

/// 16-point Gauss–Legendre estimate of `∫_a^b f`.
pub fn gauss16<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for i in 0..8 {
        let dx = half * GL16_NODES[i];
        sum += GL16_WEIGHTS[i] * (f(mid - dx) + f(mid + dx));
    }
    sum * half
}

/// Composite Gauss–Legendre over `panels` equal subintervals of [a, b].
pub fn gauss16_panels<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| gauss16(f, a + i as f64 * h, a + (i + 1) as f64 * h))
        .sum()
}

/// Composite Gauss–Legendre with panel doubling until two successive
/// estimates agree to `rel_tol` (Richardson-style convergence check).
pub fn gauss16_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let mut panels = 4;
    let mut prev = gauss16_panels(f, a, b, panels);
    loop {
        panels *= 2;
        let next = gauss16_panels(f, a, b, panels);
        if (next - prev).abs() <= rel_tol * next.abs().max(1e-30) || panels >= 1024 {
            return next;
        }
        prev = next;
    }
}

/// Composite Gauss–Legendre over a list of break points (kinks of the
/// integrand), with `panels_per_piece` panels between breaks.
pub fn gauss16_split<F: Fn(f64) -> f64>(
    f: &F,
    breaks: &[f64],
    panels_per_piece: usize,
) -> f64 {
    let mut total = 0.0;
    for w in breaks.windows(2) {
        if w[1] - w[0] > 1e-14 {
            total += gauss16_panels(f, w[0], w[1], panels_per_piece);
        }
    }
    total
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximisation of `f` on [a, b]; returns (argmax, max).
/// Assumes `f` is unimodal on the bracket.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, x_tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x).max(fc).max(fd))
}

/// Bisection for a sign change of `f` on [a, b]; `f(a)` and `f(b)` must
/// have opposite signs. Returns the midpoint of the final bracket.
pub fn bisect_root<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, x_tol: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    for _ in 0..200 {
        if (b - a).abs() <= x_tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fa > 0.0) == (fm > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Bisection for a root of a monotone function on [lo, hi]; returns the
/// argument and how many steps were taken. `None` if the bracket never
/// straddles zero.
pub fn bisect_monotone<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    y_tol: f64,
    max_steps: usize,
) -> Option<(f64, usize)> {
    let (mut lo, mut hi) = (lo, hi);
    let flo = f(lo);
    let fhi = f(hi);
    if flo.abs() <= y_tol {
        return Some((lo, 0));
    }
    if fhi.abs() <= y_tol {
        return Some((hi, 0));
    }
    if (flo > 0.0) == (fhi > 0.0) {
        return None;
    }
    let increasing = fhi > flo;
    for step in 1..=max_steps {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= y_tol {
            return Some((mid, step));
        }
        if (fm > 0.0) == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    None
}
