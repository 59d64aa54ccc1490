//! One-dimensional bracketed searches.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Stops when the bracket is shorter than `tol` or after `max_iter` steps.
/// Returns `(argmin, min)`; only unimodal `f` is guaranteed a global answer.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
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
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Golden-section search for a maximum.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> (f64, f64) {
    let (x, v) = golden_section_min(&|x| -f(x), lo, hi, tol, max_iter);
    (x, -v)
}
