//! Small 1-D numerical kernels shared by the analysis modules: bracketed
//! root finding, golden-section minimisation and quadrature.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Bisection for a sign change of `f` on `[lo, hi]`.
///
/// The bracket must satisfy `f(lo) * f(hi) <= 0`; the midpoint of the final
/// bracket is returned once its width drops below `tol`.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    // 200 halvings exhaust any f64 bracket.
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Safeguarded Newton iteration for a root of `f` bracketed by `[lo, hi]`.
///
/// `f_df` returns the value and derivative. Steps leaving the current
/// bracket fall back to bisection, so convergence is never worse than
/// [`bisect`].
pub fn newton_bracketed<F>(f_df: F, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: Fn(f64) -> (f64, f64),
{
    let (f_lo, _) = f_df(lo);
    if f_lo == 0.0 {
        return lo;
    }
    let lo_negative = f_lo < 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (fx, dfx) = f_df(x);
        if fx == 0.0 {
            return x;
        }
        if (fx < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= tol || hi - lo <= tol {
            return next;
        }
        x = next;
    }
    x
}

/// Golden-section search for a minimiser of a unimodal `f` on `[lo, hi]`.
/// Returns `(x, f(x))`.
pub fn golden_min<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        // Ties move left, toward the smaller abscissa.
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Golden-section search for a maximiser; see [`golden_min`].
pub fn golden_max<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let (x, v) = golden_min(|x| -f(x), lo, hi, tol);
    (x, -v)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// `breaks` are interior points where `f` (or a derivative) is known to be
/// non-smooth; the interval is split there first so no panel straddles a
/// kink. `rel_tol` is relative to the magnitude of the running estimate,
/// with `abs_floor` as the absolute tolerance used when the integral is near
/// zero.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, breaks: &[f64], rel_tol: f64, abs_floor: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if b <= a {
        return 0.0;
    }
    let mut knots: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    knots.sort_by(|x, y| x.total_cmp(y));
    knots.dedup();
    let mut edges = Vec::with_capacity(knots.len() + 2);
    edges.push(a);
    edges.extend(knots);
    edges.push(b);

    // Coarse pass to scale the tolerance.
    let coarse: f64 = edges
        .windows(2)
        .map(|w| {
            let (l, r) = (w[0], w[1]);
            let m = 0.5 * (l + r);
            (r - l) / 6.0 * (f(l) + 4.0 * f(m) + f(r))
        })
        .sum();
    let tol = (rel_tol * coarse.abs()).max(abs_floor);
    let total_width = b - a;

    edges
        .windows(2)
        .map(|w| {
            let (l, r) = (w[0], w[1]);
            let panel_tol = tol * (r - l) / total_width;
            let fl = f(l);
            let fr = f(r);
            let m = 0.5 * (l + r);
            let fm = f(m);
            let whole = (r - l) / 6.0 * (fl + 4.0 * fm + fr);
            simpson_rec(f, l, r, fl, fm, fr, whole, panel_tol, 48)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || (b - a) < 1e-14 * (1.0 + a.abs()) {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Composite Simpson rule over samples on an arbitrary increasing grid.
///
/// Consecutive interval pairs are integrated with the three-point rule for
/// unequal spacing (exact for quadratics); an odd trailing interval falls
/// back to the trapezoid rule.
pub fn simpson_samples(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "abscissae and ordinates differ in length");
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < n {
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        let hs = h0 + h1;
        if h0 <= 0.0 || h1 <= 0.0 {
            total += trapezoid_samples(&x[i..=i + 2], &y[i..=i + 2]);
        } else {
            total += hs / 6.0
                * (y[i] * (2.0 - h1 / h0) + y[i + 1] * hs * hs / (h0 * h1) + y[i + 2] * (2.0 - h0 / h1));
        }
        i += 2;
    }
    if i + 1 < n {
        total += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    }
    total
}

/// Weights `w` such that `Σ w_i y_i` equals [`simpson_samples`]`(x, y)`.
pub fn simpson_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut w = vec![0.0; n];
    if n < 2 {
        return w;
    }
    let mut i = 0;
    while i + 2 < n {
        let h0 = x[i + 1] - x[i];
        let h1 = x[i + 2] - x[i + 1];
        let hs = h0 + h1;
        if h0 <= 0.0 || h1 <= 0.0 {
            w[i] += 0.5 * h0;
            w[i + 1] += 0.5 * (h0 + h1);
            w[i + 2] += 0.5 * h1;
        } else {
            w[i] += hs / 6.0 * (2.0 - h1 / h0);
            w[i + 1] += hs / 6.0 * hs * hs / (h0 * h1);
            w[i + 2] += hs / 6.0 * (2.0 - h0 / h1);
        }
        i += 2;
    }
    if i + 1 < n {
        let h = x[i + 1] - x[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    w
}

/// Trapezoid rule over samples on an increasing grid.
pub fn trapezoid_samples(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xw, yw)| 0.5 * (xw[1] - xw[0]) * (yw[0] + yw[1]))
        .sum()
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14);
        assert_relative_eq!(r, 2f64.sqrt(), epsilon = 1e-13);
    }

    #[test]
    fn simpson_weights_reproduce_rule() {
        let x = [0.0f64, 0.1, 0.4, 0.5, 1.0, 1.3];
        let y: Vec<f64> = x.iter().map(|t| (3.0 * t).sin()).collect();
        let w = simpson_weights(&x);
        let dot: f64 = w.iter().zip(&y).map(|(a, b)| a * b).sum();
        assert_relative_eq!(dot, simpson_samples(&x, &y), epsilon = 1e-14);
    }

    #[test]
    fn newton_matches_bisection() {
        let r = newton_bracketed(|x| (x.cos() - x, -x.sin() - 1.0), 0.0, 1.0, 1e-14);
        let b = bisect(|x| x.cos() - x, 0.0, 1.0, 1e-15);
        assert!((r - b).abs() < 1e-13);
    }

    #[test]
    fn golden_min_on_parabola() {
        let (x, v) = golden_min(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-6);
        assert_relative_eq!(v, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn golden_min_prefers_left_on_plateau() {
        let (x, _) = golden_min(|x: f64| if x < 0.5 { 1.0 - x } else { 0.5 }, 0.0, 1.0, 1e-9);
        assert!(x < 0.6, "plateau tie should resolve toward the left, got {x}");
    }

    #[test]
    fn adaptive_simpson_handles_sqrt_kink() {
        // ∫_0^2 sqrt(|x-1|) dx = 4/3
        let f = |x: f64| (x - 1.0).abs().sqrt();
        let v = adaptive_simpson(&f, 0.0, 2.0, &[1.0], 1e-9, 1e-14);
        assert_relative_eq!(v, 4.0 / 3.0, epsilon = 1e-7);
    }

    #[test]
    fn simpson_samples_exact_for_quadratic_on_uneven_grid() {
        let x = [0.0, 0.1, 0.4, 0.5, 1.0];
        let y: Vec<f64> = x.iter().map(|t| 3.0 * t * t - t + 2.0).collect();
        assert_relative_eq!(simpson_samples(&x, &y), 1.0 - 0.5 + 2.0, epsilon = 1e-12);
    }
}
