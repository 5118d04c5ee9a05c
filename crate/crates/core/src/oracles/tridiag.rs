//! Eigenvalues of symmetric tridiagonal matrices by Sturm-sequence bisection.

/// Symmetric tridiagonal matrix with diagonal `diag` and constant off-diagonal `off`.
#[derive(Clone, Debug)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: f64,
}

impl Tridiagonal {
    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let off_sq = self.off * self.off;
        let pivmin = f64::MIN_POSITIVE.max(1e-300 * off_sq);
        let mut count = 0;
        let mut q = 1.0;
        for (i, d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - off_sq / q };
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |m, d| m.min(*d)) - r;
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |m, d| m.max(*d)) + r;
        (lo, hi)
    }

    /// All eigenvalues below `upper`, ascending, each to within `rel_tol * max(1, |lambda|)`.
    pub fn eigenvalues_below(&self, upper: f64, rel_tol: f64) -> Vec<f64> {
        let (lo, hi) = self.bounds();
        let upper = upper.min(hi);
        if upper <= lo {
            return Vec::new();
        }
        let mut out = Vec::new();
        // depth-first over lower halves keeps the output sorted
        let mut stack = vec![(lo, upper, 0usize, self.count_below(upper))];
        while let Some((a, b, ca, cb)) = stack.pop() {
            if cb == ca {
                continue;
            }
            let tol = rel_tol * a.abs().max(b.abs()).max(1.0);
            if b - a <= tol {
                let mid = 0.5 * (a + b);
                out.extend(std::iter::repeat_n(mid, cb - ca));
                continue;
            }
            let mid = 0.5 * (a + b);
            let cm = self.count_below(mid);
            stack.push((mid, b, cm, cb));
            stack.push((a, mid, ca, cm));
        }
        out
    }
}
