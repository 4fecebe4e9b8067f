//! Periodic cubic spline on the unit circle with non-uniform knots.
//!
//! Natural periodic closure: second derivatives solve a cyclic tridiagonal
//! system (Thomas elimination plus a Sherman-Morrison rank-1 correction).
//! Interpolation error is O(h^4) for smooth periodic data, which sets the
//! error floor of the interpolate-then-FFT transform path.

use crate::error::{Error, Result};
use crate::float::Float;

#[derive(Debug, Clone)]
pub struct PeriodicCubicSpline<S: Float> {
    /// Strictly increasing knots in [x0, x0 + 1).
    knots: Vec<S>,
    /// Values, with y[n] = y[0] appended for the wrap interval.
    values: Vec<S>,
    /// Interval widths, h[i] = x[i+1] - x[i] (wrap closes the period).
    widths: Vec<S>,
    /// Second derivatives at the knots, m[n] = m[0] appended.
    second: Vec<S>,
}

impl<S: Float> PeriodicCubicSpline<S> {
    /// Builds the spline for 1-periodic data. Knots must be strictly
    /// increasing and span less than one period.
    pub fn new(knots: &[S], values: &[S]) -> Result<Self> {
        let n = knots.len();
        if n < 3 {
            return Err(Error::invalid_argument("periodic spline needs >= 3 knots"));
        }
        if values.len() != n {
            return Err(Error::invalid_argument("spline knot/value length mismatch"));
        }
        for w in knots.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::invalid_argument("spline knots must strictly increase"));
            }
        }
        let span = *knots.last().unwrap() - knots[0];
        if !(span < S::one()) {
            return Err(Error::invalid_argument("spline knots must span < 1 period"));
        }

        let mut widths = Vec::with_capacity(n);
        for i in 0..n - 1 {
            widths.push(knots[i + 1] - knots[i]);
        }
        widths.push(knots[0] + S::one() - knots[n - 1]);

        // Slopes of the secants, cyclic.
        let mut slope = Vec::with_capacity(n);
        for i in 0..n {
            let dy = if i + 1 < n { values[i + 1] - values[i] } else { values[0] - values[n - 1] };
            slope.push(dy / widths[i]);
        }

        // h[i-1] m[i-1] + 2(h[i-1] + h[i]) m[i] + h[i] m[i+1] = 6 (d[i] - d[i-1])
        let six = S::of(6.0);
        let two = S::of(2.0);
        let mut sub = Vec::with_capacity(n);
        let mut diag = Vec::with_capacity(n);
        let mut sup = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for i in 0..n {
            let hm = widths[(i + n - 1) % n];
            let hp = widths[i];
            sub.push(hm);
            diag.push(two * (hm + hp));
            sup.push(hp);
            let dm = slope[(i + n - 1) % n];
            rhs.push(six * (slope[i] - dm));
        }
        let m = solve_cyclic_tridiag(&sub, &diag, &sup, &rhs)?;

        let mut values_ext = values.to_vec();
        values_ext.push(values[0]);
        let mut second = m;
        second.push(second[0]);

        Ok(PeriodicCubicSpline { knots: knots.to_vec(), values: values_ext, widths, second })
    }

    /// Evaluates the spline at `x`, treating the data as 1-periodic.
    pub fn eval(&self, x: S) -> S {
        let n = self.knots.len();
        let x0 = self.knots[0];
        // wrap into [x0, x0 + 1)
        let mut u = (x - x0).fract();
        if u < S::zero() {
            u += S::one();
        }
        let u = u + x0;
        // locate interval by binary search over knots
        let mut lo = 0usize;
        let mut hi = n; // interval index in 0..n (n-1 = wrap interval)
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if mid < n && self.knots[mid] <= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let i = lo;
        let h = self.widths[i];
        let right = if i + 1 < n { self.knots[i + 1] } else { self.knots[0] + S::one() };
        let a = (right - u) / h;
        let b = S::one() - a;
        let six = S::of(6.0);
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.second[i] + (b * b * b - b) * self.second[i + 1]) * h * h
                / six
    }

    pub fn eval_many(&self, xs: &[S]) -> Vec<S> {
        xs.iter().map(|&x| self.eval(x)).collect()
    }
}

/// Thomas elimination for a strictly diagonally dominant tridiagonal system.
fn solve_tridiag<S: Float>(sub: &[S], diag: &[S], sup: &[S], rhs: &[S]) -> Vec<S> {
    let n = diag.len();
    let mut c = vec![S::zero(); n];
    let mut d = vec![S::zero(); n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let den = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / den;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / den;
    }
    let mut x = vec![S::zero(); n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

/// Cyclic tridiagonal solve: corner entries sub[0] (row 0, col n-1) and
/// sup[n-1] (row n-1, col 0) are folded in by a rank-1 correction.
fn solve_cyclic_tridiag<S: Float>(sub: &[S], diag: &[S], sup: &[S], rhs: &[S]) -> Result<Vec<S>> {
    let n = diag.len();
    if n < 3 {
        return Err(Error::invalid_argument("cyclic solve needs n >= 3"));
    }
    let gamma = -diag[0];
    let mut diag_mod = diag.to_vec();
    diag_mod[0] = diag[0] - gamma;
    diag_mod[n - 1] = diag[n - 1] - sup[n - 1] * sub[0] / gamma;

    let y = solve_tridiag(sub, &diag_mod, sup, rhs);
    let mut u = vec![S::zero(); n];
    u[0] = gamma;
    u[n - 1] = sup[n - 1];
    let z = solve_tridiag(sub, &diag_mod, sup, &u);

    // v = (1, 0, ..., 0, sub[0]/gamma)
    let vy = y[0] + sub[0] * y[n - 1] / gamma;
    let vz = z[0] + sub[0] * z[n - 1] / gamma;
    let factor = vy / (S::one() + vz);
    Ok((0..n).map(|i| y[i] - factor * z[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_knots(n: usize) -> Vec<f64> {
        (0..n).map(|j| j as f64 / n as f64).collect()
    }

    #[test]
    fn constant_is_exact() {
        let x = uniform_knots(16);
        let y = vec![3.0; 16];
        let sp = PeriodicCubicSpline::new(&x, &y).unwrap();
        for q in [0.0, 0.1, 0.55, 0.9999, -0.3, 1.7] {
            assert!((sp.eval(q) - 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn interpolates_knots() {
        let x: Vec<f64> = vec![0.0, 0.07, 0.22, 0.4, 0.55, 0.61, 0.8, 0.93];
        let y: Vec<f64> = x.iter().map(|&v| (2.0 * std::f64::consts::PI * v).sin() + 0.3).collect();
        let sp = PeriodicCubicSpline::new(&x, &y).unwrap();
        for (xi, yi) in x.iter().zip(&y) {
            assert!((sp.eval(*xi) - yi).abs() < 1e-13);
        }
    }

    #[test]
    fn fourth_order_convergence_on_sine() {
        let tau = 2.0 * std::f64::consts::PI;
        let err = |n: usize| {
            let x = uniform_knots(n);
            let y: Vec<f64> = x.iter().map(|&v| (tau * v).sin()).collect();
            let sp = PeriodicCubicSpline::new(&x, &y).unwrap();
            let mut e: f64 = 0.0;
            for j in 0..10 * n {
                let q = j as f64 / (10 * n) as f64;
                e = e.max((sp.eval(q) - (tau * q).sin()).abs());
            }
            e
        };
        let e32 = err(32);
        let e64 = err(64);
        assert!(e32 < 1e-4, "e32 = {e32}");
        let order = (e32 / e64).log2();
        assert!((3.5..4.5).contains(&order), "order = {order}");
    }

    #[test]
    fn periodic_wraparound_consistency() {
        let x: Vec<f64> = vec![0.05, 0.3, 0.52, 0.77, 0.96];
        let y: Vec<f64> = vec![1.0, -0.5, 0.25, 2.0, -1.0];
        let sp = PeriodicCubicSpline::new(&x, &y).unwrap();
        for q in [0.01, 0.4, 0.99] {
            assert!((sp.eval(q) - sp.eval(q + 1.0)).abs() < 1e-13);
            assert!((sp.eval(q) - sp.eval(q - 2.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(PeriodicCubicSpline::new(&[0.0, 0.5], &[1.0, 2.0]).is_err());
        assert!(PeriodicCubicSpline::new(&[0.0, 0.5, 0.4], &[1.0, 2.0, 3.0]).is_err());
        assert!(PeriodicCubicSpline::new(&[0.0, 0.5, 1.2], &[1.0, 2.0, 3.0]).is_err());
    }
}
