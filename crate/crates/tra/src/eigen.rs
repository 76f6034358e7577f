//! Eigenvalues of real symmetric tridiagonal matrices by Sturm-sequence bisection.

/// Number of eigenvalues strictly below `x`. `e[i]` couples rows i and i+1.
pub fn count_below(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let off = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - off;
        if q == 0.0 {
            q = -f64::EPSILON * (d[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing the spectrum.
pub fn gershgorin(d: &[f64], e: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..d.len() {
        let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < d.len() { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - left - right);
        hi = hi.max(d[i] + left + right);
    }
    (lo, hi)
}

/// The `k` smallest eigenvalues in increasing order.
pub fn lowest_eigenvalues(d: &[f64], e: &[f64], k: usize) -> Vec<f64> {
    assert_eq!(e.len() + 1, d.len().max(1), "off-diagonal must have n-1 entries");
    let k = k.min(d.len());
    let (lo, hi) = gershgorin(d, e);
    (0..k).map(|j| kth_eigenvalue(d, e, j, lo, hi)).collect()
}

fn kth_eigenvalue(d: &[f64], e: &[f64], j: usize, mut lo: f64, mut hi: f64) -> f64 {
    // invariant: count_below(lo) <= j < count_below(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(d, e, mid) > j {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 50;
        let d = vec![2.0; n];
        let e = vec![-1.0; n - 1];
        let ev = lowest_eigenvalues(&d, &e, 5);
        for (j, v) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * (std::f64::consts::PI * (j + 1) as f64 / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13, "{j}");
        }
    }

    #[test]
    fn two_by_two() {
        let ev = lowest_eigenvalues(&[1.0, 3.0], &[1.0], 2);
        let s = 2f64.sqrt();
        assert!((ev[0] - (2.0 - s)).abs() < 1e-14);
        assert!((ev[1] - (2.0 + s)).abs() < 1e-14);
    }

    #[test]
    fn count_is_monotone() {
        let d = [0.5, -1.0, 2.0, 0.0];
        let e = [0.3, -0.7, 1.1];
        let mut prev = 0;
        for i in -40..40 {
            let c = count_below(&d, &e, i as f64 * 0.1);
            assert!(c >= prev);
            prev = c;
        }
        assert_eq!(prev, 4);
    }
}
