//! Adaptive Gauss–Kronrod (7/15) quadrature and golden-section search.

/// Kronrod nodes on [0, 1]; the symmetric negatives are implied.
const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut kron = WK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XK[j];
        let s = f(mid - dx) + f(mid + dx);
        kron += WK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`; either bound may be infinite.
///
/// Subdivides the interval with the largest error estimate until the total
/// error falls below `max(abs_tol, rel_tol·|value|)` or `max_intervals` is hit.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Quad {
    integrate_limited(f, a, b, abs_tol, rel_tol, 4000)
}

pub fn integrate_limited<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Quad {
    integrate_dyn(&f, a, b, abs_tol, rel_tol, max_intervals)
}

fn integrate_dyn(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Quad {
    if a == b {
        return Quad { value: 0.0, error: 0.0, evaluations: 0 };
    }
    if a > b {
        let q = integrate_dyn(f, b, a, abs_tol, rel_tol, max_intervals);
        return Quad { value: -q.value, ..q };
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive(f, a, b, abs_tol, rel_tol, max_intervals),
        (true, false) => {
            // x = a + u/(1-u), u in [0, 1)
            let g = |u: f64| {
                let v = 1.0 - u;
                f(a + u / v) / (v * v)
            };
            adaptive(&g, 0.0, 1.0, abs_tol, rel_tol, max_intervals)
        }
        (false, true) => {
            let g = |u: f64| {
                let v = 1.0 - u;
                f(b - u / v) / (v * v)
            };
            adaptive(&g, 0.0, 1.0, abs_tol, rel_tol, max_intervals)
        }
        (false, false) => {
            let left = integrate_dyn(f, f64::NEG_INFINITY, 0.0, abs_tol / 2.0, rel_tol, max_intervals);
            let right = integrate_dyn(f, 0.0, f64::INFINITY, abs_tol / 2.0, rel_tol, max_intervals);
            Quad {
                value: left.value + right.value,
                error: left.error + right.error,
                evaluations: left.evaluations + right.evaluations,
            }
        }
    }
}

fn adaptive<F: Fn(f64) -> f64 + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Quad {
    let (v, e) = gk15(f, a, b);
    let mut segs: Vec<(f64, f64, f64, f64)> = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let total: f64 = segs.iter().map(|s| s.2).sum();
        let err: f64 = segs.iter().map(|s| s.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) || segs.len() >= max_intervals || !err.is_finite() {
            // Pairwise-stable final sum in interval order.
            segs.sort_by(|x, y| x.0.total_cmp(&y.0));
            let value = segs.iter().map(|s| s.2).sum();
            return Quad { value, error: err, evaluations };
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = segs.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Interval no longer splittable in floating point.
            segs.push((lo, hi, gk15(f, lo, hi).0, 0.0));
            continue;
        }
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        evaluations += 30;
        segs.push((lo, mid, v1, e1));
        segs.push((mid, hi, v2, e2));
    }
}

/// Integrates over `[a, b]` split at the sorted interior `breaks`, so that
/// kinks and jumps sit on subinterval endpoints.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Quad {
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    let n = (pts.len() - 1) as f64;
    let mut out = Quad { value: 0.0, error: 0.0, evaluations: 0 };
    for w in pts.windows(2) {
        let q = integrate(&f, w[0], w[1], abs_tol / n, rel_tol);
        out.value += q.value;
        out.error += q.error;
        out.evaluations += q.evaluations;
    }
    out
}

/// Golden-section maximization of a unimodal `f` on `[a, b]`.
/// Returns `(argmax, max)`; the endpoints are included in the comparison.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let (lo0, hi0) = (a, b);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol * (1.0 + c.abs().max(d.abs())) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc > fd { (c, fc) } else { (d, fd) };
    for x in [lo0, hi0] {
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Brackets a scalar maximum by scanning `samples` points, then refines the
/// best cell with [`golden_max`]. Robust for mildly multimodal functions.
pub fn scan_max<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, samples: usize, tol: f64) -> (f64, f64) {
    let n = samples.max(3);
    let step = (b - a) / (n - 1) as f64;
    let mut best = (a, f64::NEG_INFINITY);
    let mut best_i = 0;
    for i in 0..n {
        let x = a + step * i as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let lo = a + step * best_i.saturating_sub(1) as f64;
    let hi = (a + step * (best_i + 1) as f64).min(b);
    let refined = golden_max(&f, lo, hi, tol);
    if refined.1 > best.1 {
        refined
    } else {
        best
    }
}

/// Bisection root of a function that changes sign on `[lo, hi]`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol * mid.abs().max(1e-300) || mid == lo || mid == hi {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
