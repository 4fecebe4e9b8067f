//! Domain types and synthetic signal generators.
//!
//! Time lives on the periodic unit interval: a [`TimeGrid`] is the uniform
//! mesh `t_j = j/n`, a [`ScatterSet`] is a sorted subset of such a mesh.
//! Phases are stored together with their derivative so that cycle counts and
//! normalized phases are cheap and quadrature-exact.

use num_traits::FloatConst;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::float::Float;

/// Uniform mesh `t_j = j/n`, `j = 0..n-1`, over the unit period.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeGrid {
    n: usize,
}

impl TimeGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid_argument(format!("grid size {n} < 2")));
        }
        Ok(TimeGrid { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn point<S: Float>(&self, j: usize) -> S {
        debug_assert!(j < self.n);
        S::of_usize(j) / S::of_usize(self.n)
    }

    pub fn points<S: Float>(&self) -> Vec<S> {
        (0..self.n).map(|j| self.point(j)).collect()
    }
}

/// Uniform mesh `t_j = j/n` for `j = 0..n-1`.
pub fn make_uniform_grid(n: usize) -> Result<TimeGrid> {
    TimeGrid::new(n)
}

/// Strictly increasing subset of a parent uniform grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScatterSet {
    indices: Vec<usize>,
    parent_n: usize,
}

impl ScatterSet {
    pub fn new(indices: Vec<usize>, parent_n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::invalid_argument("empty scatter set"));
        }
        for w in indices.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::invalid_argument(
                    "scatter indices must be strictly increasing",
                ));
            }
        }
        if *indices.last().unwrap() >= parent_n {
            return Err(Error::invalid_argument(format!(
                "scatter index {} out of range for parent grid {}",
                indices.last().unwrap(),
                parent_n
            )));
        }
        Ok(ScatterSet { indices, parent_n })
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn parent_n(&self) -> usize {
        self.parent_n
    }

    pub fn time<S: Float>(&self, j: usize) -> S {
        S::of_usize(self.indices[j]) / S::of_usize(self.parent_n)
    }

    pub fn times<S: Float>(&self) -> Vec<S> {
        (0..self.len()).map(|j| self.time(j)).collect()
    }
}

/// Where a signal's samples live.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SampleGrid {
    Uniform(TimeGrid),
    Scattered(ScatterSet),
}

impl SampleGrid {
    pub fn len(&self) -> usize {
        match self {
            SampleGrid::Uniform(g) => g.len(),
            SampleGrid::Scattered(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Real-valued samples on a uniform or scattered grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<S: Float> {
    grid: SampleGrid,
    values: Vec<S>,
}

impl<S: Float> Signal<S> {
    pub fn uniform(grid: TimeGrid, values: Vec<S>) -> Result<Self> {
        Self::new(SampleGrid::Uniform(grid), values)
    }

    pub fn scattered(set: ScatterSet, values: Vec<S>) -> Result<Self> {
        Self::new(SampleGrid::Scattered(set), values)
    }

    fn new(grid: SampleGrid, values: Vec<S>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::invalid_argument(format!(
                "signal length {} does not match grid length {}",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid_argument("non-finite signal value"));
        }
        Ok(Signal { grid, values })
    }

    pub fn grid(&self) -> &SampleGrid {
        &self.grid
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The uniform grid, or an error for scattered signals.
    pub fn uniform_grid(&self) -> Result<TimeGrid> {
        match &self.grid {
            SampleGrid::Uniform(g) => Ok(*g),
            SampleGrid::Scattered(_) => {
                Err(Error::invalid_argument("operation requires a uniform grid"))
            }
        }
    }

    pub fn scatter_set(&self) -> Result<&ScatterSet> {
        match &self.grid {
            SampleGrid::Uniform(_) => {
                Err(Error::invalid_argument("operation requires scattered samples"))
            }
            SampleGrid::Scattered(s) => Ok(s),
        }
    }
}

/// Monotone phase on a uniform grid, stored with its derivative.
///
/// The derivative is the source of truth for the cycle count: by periodicity
/// of `theta'`, `theta(1) - theta(0)` equals the grid mean of `theta'`, and
/// that quadrature is exact for band-limited derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFn<S: Float> {
    grid: TimeGrid,
    values: Vec<S>,
    derivative: Vec<S>,
}

impl<S: Float> PhaseFn<S> {
    pub fn new(grid: TimeGrid, values: Vec<S>, derivative: Vec<S>) -> Result<Self> {
        if values.len() != grid.len() || derivative.len() != grid.len() {
            return Err(Error::invalid_argument(
                "phase value/derivative length mismatch with grid",
            ));
        }
        if values.iter().chain(derivative.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid_phase("non-finite phase data"));
        }
        if derivative.iter().any(|&d| d < S::zero()) {
            return Err(Error::invalid_phase("negative phase derivative"));
        }
        let phase = PhaseFn { grid, values, derivative };
        if phase.cycle_count() <= S::zero() {
            return Err(Error::invalid_phase("cycle count must be positive"));
        }
        Ok(phase)
    }

    /// Linear phase `2*pi*l*t` (constant instantaneous frequency).
    pub fn linear(grid: TimeGrid, l: S) -> Result<Self> {
        let two_pi_l = S::of(2.0) * S::PI() * l;
        let values = (0..grid.len()).map(|j| two_pi_l * grid.point::<S>(j)).collect();
        let derivative = vec![two_pi_l; grid.len()];
        Self::new(grid, values, derivative)
    }

    pub fn grid(&self) -> TimeGrid {
        self.grid
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn derivative(&self) -> &[S] {
        &self.derivative
    }

    /// Cycle count `L = (theta(1) - theta(0)) / 2pi`, via the exact periodic
    /// quadrature `theta(1) - theta(0) = mean(theta')`.
    pub fn cycle_count(&self) -> S {
        let n = S::of_usize(self.grid.len());
        let mean = self.derivative.iter().copied().sum::<S>() / n;
        mean / (S::of(2.0) * S::PI())
    }

    /// Normalized phase `(theta - theta(0)) / (2 pi L)` with its derivative.
    /// The values start at 0 and sweep [0, 1).
    pub fn theta_bar(&self) -> (Vec<S>, Vec<S>) {
        let l = self.cycle_count();
        let denom = S::of(2.0) * S::PI() * l;
        let t0 = self.values[0];
        let vals = self.values.iter().map(|&v| (v - t0) / denom).collect();
        let deriv = self.derivative.iter().map(|&d| d / denom).collect();
        (vals, deriv)
    }

    /// Offset of the phase origin in the normalized coordinate,
    /// `theta(0) / (2 pi L)`. Adding it to `theta_bar` aligns the carrier
    /// `cos(theta)` with `cos(2 pi L theta_bar)`.
    pub fn carrier_offset(&self) -> S {
        self.values[0] / (S::of(2.0) * S::PI() * self.cycle_count())
    }

    /// Quadrature weights `theta_bar'(t_j) / n` for integrals in the
    /// normalized phase coordinate.
    pub fn quadrature_weights(&self) -> Vec<S> {
        let l = self.cycle_count();
        let denom = S::of(2.0) * S::PI() * l * S::of_usize(self.grid.len());
        self.derivative.iter().map(|&d| d / denom).collect()
    }
}

/// Exact generating data behind a synthetic signal.
#[derive(Debug, Clone)]
pub struct GroundTruth<S: Float> {
    pub a0: Vec<S>,
    pub a1: Vec<S>,
    pub phase: PhaseFn<S>,
    pub noise_sigma: S,
}

/// Which benchmark signal to generate.
///
/// 1: well-resolved, exactly sparse in the phase coordinate (L = 10).
/// 2: sparse-sample benchmark, exactly sparse (L = 100).
/// 3: example 2's phase plus an uncapturable high-frequency ripple and
///    additive Gaussian noise.
pub fn gen_example_signal<S: Float>(
    example_id: u8,
    grid: TimeGrid,
    seed: u64,
) -> Result<(Signal<S>, GroundTruth<S>)> {
    let n = grid.len();
    let two_pi = S::of(2.0) * S::PI();
    let mut theta = Vec::with_capacity(n);
    let mut dtheta = Vec::with_capacity(n);
    let mut a0 = Vec::with_capacity(n);
    let mut a1 = Vec::with_capacity(n);

    for j in 0..n {
        let t: S = grid.point(j);
        let (th, dth, m, env) = match example_id {
            1 => {
                let th = S::of(20.0) * S::PI() * t
                    + S::of(2.0) * (two_pi * t).cos()
                    + S::of(2.0) * (S::of(2.0) * two_pi * t).sin();
                let dth = S::of(20.0) * S::PI()
                    - S::of(4.0) * S::PI() * (two_pi * t).sin()
                    + S::of(8.0) * S::PI() * (S::of(2.0) * two_pi * t).cos();
                let tb = th / S::of(10.0);
                let m = S::of(2.0) + tb.cos() + S::of(2.0) * (S::of(2.0) * tb).sin()
                    + (S::of(3.0) * tb).cos();
                let env = S::of(3.0) + tb.cos() + (S::of(3.0) * tb).sin();
                (th, dth, m, env)
            }
            2 | 3 => {
                let mut th = S::of(200.0) * S::PI() * t
                    - S::of(10.0) * (two_pi * t).cos()
                    - S::of(2.0) * (S::of(2.0) * two_pi * t).sin();
                let mut dth = S::of(200.0) * S::PI()
                    + S::of(20.0) * S::PI() * (two_pi * t).sin()
                    - S::of(8.0) * S::PI() * (S::of(2.0) * two_pi * t).cos();
                if example_id == 2 {
                    let tb = th / S::of(100.0);
                    let m = tb.cos();
                    let env = S::of(3.0) + tb.cos() + (S::of(2.0) * tb).sin();
                    (th, dth, m, env)
                } else {
                    th += S::of(0.1) * (S::of(120.0) * S::PI() * t).sin();
                    dth += S::of(12.0) * S::PI() * (S::of(120.0) * S::PI() * t).cos();
                    let m = (two_pi * t).cos();
                    let env = S::of(3.0) + (two_pi * t).cos() + (S::of(2.0) * two_pi * t).sin();
                    (th, dth, m, env)
                }
            }
            other => {
                return Err(Error::invalid_argument(format!("unknown example id {other}")))
            }
        };
        theta.push(th);
        dtheta.push(dth);
        a0.push(m);
        a1.push(env);
    }

    let phase = PhaseFn::new(grid, theta, dtheta)?;
    let mut values: Vec<S> = (0..n)
        .map(|j| a0[j] + a1[j] * phase.values()[j].cos())
        .collect();
    let noise_sigma = if example_id == 3 { S::of(0.1) } else { S::zero() };
    if example_id == 3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in values.iter_mut() {
            let x: f64 = StandardNormal.sample(&mut rng);
            *v += noise_sigma * S::of(x);
        }
    }
    let signal = Signal::uniform(grid, values)?;
    Ok((signal, GroundTruth { a0, a1, phase, noise_sigma }))
}

/// `count` distinct indices drawn uniformly without replacement, sorted.
/// Deterministic for a fixed seed (ChaCha8 keyed by `seed`).
pub fn subsample_random(grid: TimeGrid, count: usize, seed: u64) -> Result<ScatterSet> {
    if count == 0 {
        return Err(Error::invalid_argument("subsample count must be positive"));
    }
    if count > grid.len() {
        return Err(Error::invalid_argument(format!(
            "subsample count {} exceeds grid size {}",
            count,
            grid.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, grid.len(), count).into_vec();
    idx.sort_unstable();
    ScatterSet::new(idx, grid.len())
}

/// Adds `sigma * X_j` with `X_j` i.i.d. standard normal (ChaCha8 keyed by
/// `seed`; samples drawn in f64 and converted, so the stream is identical
/// for every scalar type).
pub fn add_gaussian_noise<S: Float>(signal: &Signal<S>, sigma: S, seed: u64) -> Result<Signal<S>> {
    if sigma < S::zero() {
        return Err(Error::invalid_argument("noise sigma must be nonnegative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = signal
        .values()
        .iter()
        .map(|&v| {
            let x: f64 = StandardNormal.sample(&mut rng);
            v + sigma * S::of(x)
        })
        .collect();
    Signal::new(signal.grid().clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_grid_points() {
        let g = make_uniform_grid(4).unwrap();
        assert_eq!(g.points::<f64>(), vec![0.0, 0.25, 0.5, 0.75]);
        let g = make_uniform_grid(256).unwrap();
        assert_eq!(g.len(), 256);
        assert_eq!(g.point::<f64>(255), 255.0 / 256.0);
        assert_eq!(make_uniform_grid(4096).unwrap().len(), 4096);
        assert!(make_uniform_grid(1).is_err());
    }

    #[test]
    fn example_cycle_counts() {
        let g = make_uniform_grid(256).unwrap();
        let (_, truth) = gen_example_signal::<f64>(1, g, 0).unwrap();
        assert!((truth.phase.cycle_count() - 10.0).abs() < 1e-12);

        let g = make_uniform_grid(4096).unwrap();
        let (_, truth) = gen_example_signal::<f64>(2, g, 0).unwrap();
        assert!((truth.phase.cycle_count() - 100.0).abs() < 1e-10);
        let (_, truth) = gen_example_signal::<f64>(3, g, 0).unwrap();
        assert!((truth.phase.cycle_count() - 100.0).abs() < 1e-10);
    }

    #[test]
    fn example_envelopes_positive_and_monotone() {
        for (id, n) in [(1u8, 256usize), (2, 4096), (3, 4096)] {
            let g = make_uniform_grid(n).unwrap();
            let (_, truth) = gen_example_signal::<f64>(id, g, 7).unwrap();
            assert!(truth.a1.iter().all(|&v| v > 0.0), "example {id} envelope");
            assert!(
                truth.phase.derivative().iter().all(|&d| d > 0.0),
                "example {id} monotone"
            );
        }
    }

    #[test]
    fn example3_matches_clean_formula_at_origin() {
        // With the noise term removed, f(0) = a0(0) + a1(0) cos(theta(0)).
        let g = make_uniform_grid(4096).unwrap();
        let (_, truth) = gen_example_signal::<f64>(3, g, 3).unwrap();
        let clean = truth.a0[0] + truth.a1[0] * truth.phase.values()[0].cos();
        let t0 = 0.0f64;
        let th0 = -10.0 * (2.0 * std::f64::consts::PI * t0).cos();
        assert!((truth.phase.values()[0] - th0).abs() < 1e-12);
        assert!((clean - (1.0 + truth.a1[0] * th0.cos())).abs() < 1e-12);
    }

    #[test]
    fn bad_example_id_rejected() {
        let g = make_uniform_grid(16).unwrap();
        assert!(gen_example_signal::<f64>(4, g, 0).is_err());
    }

    #[test]
    fn subsample_counts_and_determinism() {
        let g = make_uniform_grid(4096).unwrap();
        let s = subsample_random(g, 120, 9).unwrap();
        assert_eq!(s.len(), 120);
        let s80 = subsample_random(g, 80, 9).unwrap();
        assert_eq!(s80.len(), 80);

        let g10 = make_uniform_grid(10).unwrap();
        let all = subsample_random(g10, 10, 5).unwrap();
        assert_eq!(all.indices(), (0..10).collect::<Vec<_>>().as_slice());

        let a = subsample_random(g, 120, 42).unwrap();
        let b = subsample_random(g, 120, 42).unwrap();
        assert_eq!(a, b);
        // Different seeds differ somewhere across 10 pairs.
        let mut any_diff = 0;
        for k in 0..10u64 {
            let x = subsample_random(g, 120, 100 + k).unwrap();
            let y = subsample_random(g, 120, 200 + k).unwrap();
            if x != y {
                any_diff += 1;
            }
        }
        assert!(any_diff >= 1);
        assert!(subsample_random(g10, 11, 0).is_err());
    }

    #[test]
    fn gaussian_noise_zero_sigma_and_determinism() {
        let g = make_uniform_grid(64).unwrap();
        let (f, _) = gen_example_signal::<f64>(1, g, 0).unwrap();
        let same = add_gaussian_noise(&f, 0.0, 1).unwrap();
        assert_eq!(f.values(), same.values());
        let n1 = add_gaussian_noise(&f, 0.1, 77).unwrap();
        let n2 = add_gaussian_noise(&f, 0.1, 77).unwrap();
        assert_eq!(n1.values(), n2.values());
    }

    #[test]
    fn gaussian_noise_variance() {
        // Sample variance of the realized noise vector within 20% of sigma^2.
        let g = make_uniform_grid(4096).unwrap();
        let (f, _) = gen_example_signal::<f64>(2, g, 0).unwrap();
        let noisy = add_gaussian_noise(&f, 0.1, 2024).unwrap();
        let diffs: Vec<f64> = noisy
            .values()
            .iter()
            .zip(f.values())
            .map(|(a, b)| a - b)
            .collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / diffs.len() as f64;
        assert!((var - 0.01).abs() < 0.002, "sample variance {var}");
    }

    #[test]
    fn phase_validation() {
        let g = make_uniform_grid(8).unwrap();
        let vals: Vec<f64> = (0..8).map(|j| j as f64).collect();
        let bad_deriv = vec![-1.0; 8];
        assert!(PhaseFn::new(g, vals.clone(), bad_deriv).is_err());
        let lin = PhaseFn::linear(g, 2.0f64).unwrap();
        assert!((lin.cycle_count() - 2.0).abs() < 1e-14);
        let (tb, dtb) = lin.theta_bar();
        assert!((tb[4] - 0.5).abs() < 1e-14);
        assert!(dtb.iter().all(|&d| (d - 1.0).abs() < 1e-14));
    }
}
