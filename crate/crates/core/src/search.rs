//! One-dimensional search kernels: golden-section minimization and
//! bracketed bisection, plus a periodic root scanner.

/// Golden-section minimization of `f` on [lo, hi]. Returns (argmin, min).
/// Deterministic fixed-iteration scheme; `tol` bounds the final interval width.
pub fn golden_min<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let xm = 0.5 * (a + b);
    (xm, f(xm))
}

/// Golden-section maximization; returns (argmax, max).
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, neg) = golden_min(|t| -f(t), lo, hi, tol);
    (x, -neg)
}

/// Bisection on a bracketed sign change. `f(a)` and `f(b)` must have opposite
/// signs (or one of them be zero). Stops at |f| <= tol_f or width <= tol_x.
pub fn bisect<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol_f: f64, tol_x: f64) -> f64 {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    if f(b) == 0.0 {
        return b;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm.abs() <= tol_f || b - a <= tol_x {
            return mid;
        }
        if (fa < 0.0) == (fm < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// All roots of a continuous periodic function found by an `n`-sample scan
/// over one period followed by bisection on each sign-change bracket.
pub fn roots_on_period<F: Fn(f64) -> f64>(f: &F, period: f64, n: usize) -> Vec<f64> {
    let step = period / n as f64;
    let mut roots = Vec::new();
    let mut prev_x = 0.0;
    let mut prev_f = f(0.0);
    for i in 1..=n {
        let x = i as f64 * step;
        let fx = f(x);
        if prev_f == 0.0 {
            roots.push(prev_x);
        } else if (prev_f < 0.0) != (fx < 0.0) {
            roots.push(bisect(f, prev_x, x, 1e-12, 1e-13));
        }
        prev_x = x;
        prev_f = fx;
    }
    roots
}
