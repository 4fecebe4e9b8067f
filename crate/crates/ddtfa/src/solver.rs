//! Well-resolved decomposition loop: envelope extraction in the phase
//! coordinate, arctangent phase correction confined to a low-frequency band,
//! a monotonicity line search, and sequential peeling of components.

use num_complex::Complex;
use num_traits::FloatConst;

use crate::error::{Error, Result};
use crate::float::Float;
use crate::model::{PhaseFn, Signal, TimeGrid};
use crate::spectral::{
    self, cutoff_chi, extract_envelope_spectra, inverse_on_mesh, inverse_theta_fft, theta_fft,
    theta_nudft, EnvelopePair, ThetaSpectrum,
};
use crate::spline::PeriodicCubicSpline;

/// Relative floor on a^2 + b^2 below which the arctangent quotient is
/// declared degenerate.
const ENVELOPE_FLOOR: f64 = 1e-6;

/// How the forward/backward transforms in the phase coordinate are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformMode {
    /// Periodic cubic spline onto the uniform phase mesh, then FFT.
    /// O(N log N) per pass; accuracy limited by interpolation error.
    FftInterp,
    /// Direct non-uniform quadrature/synthesis. Slower, spectrally accurate.
    Nudft,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions<S: Float> {
    /// Frequency band of the phase correction (`theta'` lives in V_{m0}).
    pub m0: usize,
    /// Absolute stopping tolerance on the 2-norm of the phase step.
    pub eps0: S,
    pub max_iter: usize,
    pub transform_mode: TransformMode,
}

impl<S: Float> SolverOptions<S> {
    /// Defaults for a grid of `n` points: `eps0 = 1e-8 sqrt(n)` (an RMS
    /// phase step of 1e-8), `m0 = 2`, 200 iterations, direct transform.
    pub fn default_for(n: usize) -> Self {
        SolverOptions {
            m0: 2,
            eps0: S::of(1e-8) * S::of_usize(n).sqrt(),
            max_iter: 200,
            transform_mode: TransformMode::Nudft,
        }
    }

    pub fn with_mode(mut self, mode: TransformMode) -> Self {
        self.transform_mode = mode;
        self
    }

    pub fn with_m0(mut self, m0: usize) -> Self {
        self.m0 = m0;
        self
    }

    pub fn with_eps0(mut self, eps0: S) -> Self {
        self.eps0 = eps0;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps0 > S::zero()) {
            return Err(Error::invalid_argument("eps0 must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid_argument("max_iter must be >= 1"));
        }
        Ok(())
    }
}

/// One iteration record.
#[derive(Debug, Clone, Copy)]
pub struct IterRecord<S: Float> {
    pub beta: S,
    /// 2-norm of the applied phase step.
    pub theta_step: S,
    /// l2 mass of the spectrum outside the kept (mean + carrier) bands.
    pub residual: S,
    /// Fractional part of the cycle count that the integer shift dropped.
    pub frac_cycle: S,
    /// l1 norm of the Fourier coefficients of the frequency error, when
    /// ground truth was supplied.
    pub freq_err_l1: Option<S>,
    /// freq_err_l1 / (2 pi m0).
    pub gamma: Option<S>,
}

#[derive(Debug, Clone, Default)]
pub struct IterTrace<S: Float> {
    pub records: Vec<IterRecord<S>>,
}

/// Recovered decomposition `f ~ a0 + a1 cos(theta)`.
#[derive(Debug, Clone)]
pub struct Decomposition<S: Float> {
    pub a0: Vec<S>,
    pub a1: Vec<S>,
    pub phase: PhaseFn<S>,
    pub imf: Vec<S>,
    /// `input - a0 - imf` on the sample set (the full grid for the
    /// well-resolved path, the scattered samples for the sparse path).
    pub residual: Vec<S>,
    pub trace: IterTrace<S>,
    pub converged: bool,
}

impl<S: Float> Decomposition<S> {
    pub fn residual_norm(&self) -> S {
        self.residual.iter().map(|&r| r * r).sum::<S>().sqrt()
    }
}

/// Largest beta on the lattice {1.00, 0.99, ..., 0.00} keeping
/// `theta' + beta * delta'` nonnegative everywhere. beta = 0 is always
/// admissible for a monotone phase.
pub fn beta_max_monotone<S: Float>(theta_prime: &[S], delta_theta_prime: &[S]) -> S {
    debug_assert_eq!(theta_prime.len(), delta_theta_prime.len());
    for k in (0..=100u32).rev() {
        let beta = S::of(f64::from(k) / 100.0);
        let ok = theta_prime
            .iter()
            .zip(delta_theta_prime)
            .all(|(&d, &c)| d + beta * c >= S::zero());
        if ok {
            return beta;
        }
    }
    S::zero()
}

/// Derivative of atan2(b, a) computed without branch cuts:
/// `(a b' - b a') / (a^2 + b^2)` with spectral differentiation.
fn arctan_derivative<S: Float>(env: &EnvelopePair<S>) -> Result<Vec<S>> {
    let q_max = env
        .a
        .iter()
        .zip(&env.b)
        .map(|(&a, &b)| a * a + b * b)
        .fold(S::zero(), S::max);
    let q_min = env
        .a
        .iter()
        .zip(&env.b)
        .map(|(&a, &b)| a * a + b * b)
        .fold(S::infinity(), S::min);
    if q_min < S::of(ENVELOPE_FLOOR) * q_max {
        return Err(Error::DegenerateEnvelope {
            min_sq: q_min.to_f64().unwrap_or(0.0),
            floor: ENVELOPE_FLOOR,
        });
    }
    let da = spectral::spectral_derivative(&env.a);
    let db = spectral::spectral_derivative(&env.b);
    Ok((0..env.a.len())
        .map(|j| {
            let (a, b) = (env.a[j], env.b[j]);
            (a * db[j] - b * da[j]) / (a * a + b * b)
        })
        .collect())
}

/// Antiderivative (from 0) of a band-limited function given by its kept
/// Fourier coefficients (slot k + m0 holds wavenumber k). Exact for members
/// of V_{m0}.
fn integrate_band<S: Float>(kept: &[Complex<S>], m0: usize, grid: TimeGrid) -> Vec<S> {
    let n = grid.len();
    let two_pi = S::of(2.0) * S::PI();
    let c0 = kept[m0].re;
    (0..n)
        .map(|j| {
            let t: S = grid.point(j);
            let mut acc = c0 * t;
            for (slot, &c) in kept.iter().enumerate() {
                let k = slot as i64 - m0 as i64;
                if k == 0 || c.norm() == S::zero() {
                    continue;
                }
                let kk = S::of(k as f64);
                let ph = spectral::cis_two_pi_prod(kk, t) - Complex::new(S::one(), S::zero());
                // Re(c * ph / (i 2 pi k))
                let div = Complex::new(S::zero(), two_pi * kk);
                acc += (c * ph / div).re;
            }
            acc
        })
        .collect()
}

/// One phase correction: project d/dt atan2(b, a) onto the low band,
/// integrate from 0, and apply the largest monotonicity-preserving step.
/// Returns the updated phase, beta, and the unscaled correction.
pub fn phase_update<S: Float>(
    theta: &PhaseFn<S>,
    env: &EnvelopePair<S>,
    m0: usize,
) -> Result<(PhaseFn<S>, S, Vec<S>)> {
    let n = theta.grid().len();
    if env.a.len() != n || env.b.len() != n {
        return Err(Error::invalid_argument("envelope length mismatch"));
    }
    let dphi = arctan_derivative(env)?;
    let (corr_deriv, kept) = spectral::project_low_modes_coeffs(&dphi, m0)?;
    let corr = integrate_band(&kept, m0, theta.grid());
    let beta = beta_max_monotone(theta.derivative(), &corr_deriv);

    let values = theta
        .values()
        .iter()
        .zip(&corr)
        .map(|(&v, &c)| v + beta * c)
        .collect();
    let derivative = theta
        .derivative()
        .iter()
        .zip(&corr_deriv)
        .map(|(&d, &c)| d + beta * c)
        .collect();
    let next = PhaseFn::new(theta.grid(), values, derivative)?;
    Ok((next, beta, corr))
}

/// Sum of |Fourier coefficients| of `(theta - theta_ref)'` over time-domain
/// modes.
pub fn l1_freq_error<S: Float>(theta: &PhaseFn<S>, theta_ref: &PhaseFn<S>) -> S {
    assert_eq!(theta.grid(), theta_ref.grid(), "phase grids differ");
    let diff: Vec<S> = theta
        .derivative()
        .iter()
        .zip(theta_ref.derivative())
        .map(|(&a, &b)| a - b)
        .collect();
    spectral::fourier_coeffs(&diff).iter().map(|c| c.norm()).sum()
}

/// Carrier-aligned transform state for one iteration.
struct WarpedSpectrum<S: Float> {
    spectrum: ThetaSpectrum<S>,
    /// Carrier-aligned normalized phase (mod 1) at the grid points.
    tb_aligned: Vec<S>,
    cycle_count: S,
}

fn frac_mod1<S: Float>(x: S) -> S {
    let f = x.fract();
    if f < S::zero() {
        f + S::one()
    } else {
        f
    }
}

/// Forward transform of the signal in the carrier-aligned phase coordinate
/// `theta / (2 pi L)` (mod 1), in which the current carrier is exactly
/// `cos(2 pi L u)`.
fn forward_transform<S: Float>(
    signal: &Signal<S>,
    theta: &PhaseFn<S>,
    mode: TransformMode,
) -> Result<WarpedSpectrum<S>> {
    let n = signal.len();
    let l = theta.cycle_count();
    let offset = theta.carrier_offset();
    let (tb, _) = theta.theta_bar();
    let tb_aligned: Vec<S> = tb.iter().map(|&u| frac_mod1(u + offset)).collect();

    let spectrum = match mode {
        TransformMode::FftInterp => {
            // Mesh point j sits at aligned coordinate j/N, i.e. at
            // offset-normalized coordinate frac(j/N - offset).
            let targets: Vec<S> = (0..n)
                .map(|j| frac_mod1(S::of_usize(j) / S::of_usize(n) - offset))
                .collect();
            let mesh_vals = spectral::interp_at_theta_points(signal, theta, &targets)?;
            theta_fft(&mesh_vals)?
        }
        TransformMode::Nudft => {
            let w = theta.quadrature_weights();
            theta_nudft(signal.values(), &tb_aligned, Some(&w), n)?
        }
    };
    Ok(WarpedSpectrum { spectrum, tb_aligned, cycle_count: l })
}

/// Envelopes on the time grid from the band-split spectra.
fn envelopes_to_grid<S: Float>(
    ah: &ThetaSpectrum<S>,
    bh: &ThetaSpectrum<S>,
    warped: &WarpedSpectrum<S>,
    mode: TransformMode,
) -> Result<EnvelopePair<S>> {
    match mode {
        TransformMode::Nudft => Ok(EnvelopePair {
            a: inverse_theta_fft(ah, &warped.tb_aligned),
            b: inverse_theta_fft(bh, &warped.tb_aligned),
        }),
        TransformMode::FftInterp => {
            let n = ah.len();
            let knots: Vec<S> = (0..n).map(|j| S::of_usize(j) / S::of_usize(n)).collect();
            let to_grid = |spec: &ThetaSpectrum<S>| -> Result<Vec<S>> {
                let mesh = inverse_on_mesh(spec);
                let spline = PeriodicCubicSpline::new(&knots, &mesh)?;
                Ok(spline.eval_many(&warped.tb_aligned))
            };
            Ok(EnvelopePair { a: to_grid(ah)?, b: to_grid(bh)? })
        }
    }
}

/// Low-band (mean) content of the spectrum evaluated on the time grid.
fn low_band_to_grid<S: Float>(
    warped: &WarpedSpectrum<S>,
    mode: TransformMode,
) -> Result<Vec<S>> {
    let spec = &warped.spectrum;
    let l = warped.cycle_count;
    let n = spec.len();
    let mut low = ThetaSpectrum::from_coeffs(
        vec![Complex::new(S::zero(), S::zero()); n],
        l,
    )?;
    for w in spec.min_wavenumber()..=spec.max_wavenumber() {
        if cutoff_chi(S::of(w as f64) / l) > S::zero() {
            low.set_coeff(w, spec.coeff(w));
        }
    }
    match mode {
        TransformMode::Nudft => Ok(inverse_theta_fft(&low, &warped.tb_aligned)),
        TransformMode::FftInterp => {
            let mesh = inverse_on_mesh(&low);
            let knots: Vec<S> = (0..n).map(|j| S::of_usize(j) / S::of_usize(n)).collect();
            let spline = PeriodicCubicSpline::new(&knots, &mesh)?;
            Ok(spline.eval_many(&warped.tb_aligned))
        }
    }
}

/// l2 mass of the spectrum outside the kept mean + carrier bands.
fn spectral_residual<S: Float>(spec: &ThetaSpectrum<S>, l: S) -> S {
    let lr = l.round();
    let mut acc = S::zero();
    for w in spec.min_wavenumber()..=spec.max_wavenumber() {
        let wf = S::of(w as f64);
        let kept = cutoff_chi(wf / l) > S::zero()
            || cutoff_chi((wf - lr) / l) > S::zero()
            || cutoff_chi((wf + lr) / l) > S::zero();
        if !kept {
            let m = spec.coeff(w).norm();
            acc += m * m;
        }
    }
    acc.sqrt()
}

/// Unwraps a sequence of atan2 values into a continuous curve.
fn unwrap_angles<S: Float>(raw: &[S]) -> Vec<S> {
    let two_pi = S::of(2.0) * S::PI();
    let mut out = Vec::with_capacity(raw.len());
    let mut shift = S::zero();
    for (j, &v) in raw.iter().enumerate() {
        if j > 0 {
            let prev = out[j - 1];
            let mut cur = v + shift;
            while cur - prev > S::PI() {
                shift -= two_pi;
                cur -= two_pi;
            }
            while prev - cur > S::PI() {
                shift += two_pi;
                cur += two_pi;
            }
            out.push(cur);
        } else {
            out.push(v);
        }
    }
    out
}

/// Full well-resolved iteration (Steps: warp -> band split -> arctangent
/// correction -> monotone step -> stop test), with optional ground-truth
/// phase for convergence diagnostics.
pub fn decompose_well_resolved_traced<S: Float>(
    signal: &Signal<S>,
    theta0: &PhaseFn<S>,
    opts: &SolverOptions<S>,
    truth: Option<&PhaseFn<S>>,
) -> Result<Decomposition<S>> {
    opts.validate()?;
    let grid = signal.uniform_grid()?;
    if grid != theta0.grid() {
        return Err(Error::invalid_argument("signal and initial phase grids differ"));
    }
    if theta0.cycle_count() < S::one() {
        return Err(Error::invalid_phase("initial cycle count below 1"));
    }

    let mut theta = theta0.clone();
    let mut trace = IterTrace::default();
    let mut converged = false;

    for _ in 0..opts.max_iter {
        let warped = forward_transform(signal, &theta, opts.transform_mode)?;
        let (ah, bh) = extract_envelope_spectra(&warped.spectrum, warped.cycle_count)?;
        let env = envelopes_to_grid(&ah, &bh, &warped, opts.transform_mode)?;
        let (next, beta, corr) = phase_update(&theta, &env, opts.m0)?;
        let step = corr.iter().map(|&c| (beta * c) * (beta * c)).sum::<S>().sqrt();

        let (freq_err_l1, gamma) = match truth {
            Some(t) => {
                let e = l1_freq_error(&next, t);
                (Some(e), Some(e / (S::of(2.0) * S::PI() * S::of_usize(opts.m0.max(1)))))
            }
            None => (None, None),
        };
        trace.records.push(IterRecord {
            beta,
            theta_step: step,
            residual: spectral_residual(&warped.spectrum, warped.cycle_count),
            frac_cycle: warped.cycle_count - warped.cycle_count.round(),
            freq_err_l1,
            gamma,
        });
        theta = next;
        if step < opts.eps0 {
            converged = true;
            break;
        }
    }

    finalize(signal, theta, trace, converged, opts.transform_mode)
}

/// As [`decompose_well_resolved_traced`] without diagnostics.
pub fn decompose_well_resolved<S: Float>(
    signal: &Signal<S>,
    theta0: &PhaseFn<S>,
    opts: &SolverOptions<S>,
) -> Result<Decomposition<S>> {
    decompose_well_resolved_traced(signal, theta0, opts, None)
}

/// Final extraction at the converged phase: polar envelope, arctangent
/// phase correction (restoring the constant the derivative-only updates
/// cannot see), low-band mean, and the pointwise residual.
fn finalize<S: Float>(
    signal: &Signal<S>,
    theta: PhaseFn<S>,
    trace: IterTrace<S>,
    mut converged: bool,
    mode: TransformMode,
) -> Result<Decomposition<S>> {
    let warped = forward_transform(signal, &theta, mode)?;
    let (ah, bh) = extract_envelope_spectra(&warped.spectrum, warped.cycle_count)?;
    let env = envelopes_to_grid(&ah, &bh, &warped, mode)?;
    let a0 = low_band_to_grid(&warped, mode)?;

    let a1: Vec<S> = env
        .a
        .iter()
        .zip(&env.b)
        .map(|(&a, &b)| (a * a + b * b).sqrt())
        .collect();
    let raw: Vec<S> = env.a.iter().zip(&env.b).map(|(&a, &b)| b.atan2(a)).collect();
    let phi = unwrap_angles(&raw);
    let dphi = arctan_derivative(&env)?;
    let beta_exit = beta_max_monotone(theta.derivative(), &dphi);
    if beta_exit < S::one() {
        converged = false;
    }
    let values: Vec<S> = theta
        .values()
        .iter()
        .zip(&phi)
        .map(|(&v, &p)| v + beta_exit * p)
        .collect();
    let derivative: Vec<S> = theta
        .derivative()
        .iter()
        .zip(&dphi)
        .map(|(&d, &p)| d + beta_exit * p)
        .collect();
    let phase = PhaseFn::new(theta.grid(), values, derivative)?;

    let imf: Vec<S> = a1.iter().zip(phase.values()).map(|(&a, &th)| a * th.cos()).collect();
    let residual: Vec<S> = signal
        .values()
        .iter()
        .enumerate()
        .map(|(j, &f)| f - a0[j] - imf[j])
        .collect();

    Ok(Decomposition { a0, a1, phase, imf, residual, trace, converged })
}

/// Sequentially peels components: decompose, feed the recovered mean back in
/// as the next signal, stop when the remaining signal norm drops under eps0.
pub fn peel_imfs<S: Float>(
    signal: &Signal<S>,
    initial_phases: &[PhaseFn<S>],
    opts: &SolverOptions<S>,
) -> Result<Vec<Decomposition<S>>> {
    if initial_phases.is_empty() {
        return Err(Error::invalid_argument("at least one initial phase required"));
    }
    let grid = signal.uniform_grid()?;
    let mut current = signal.clone();
    let mut out = Vec::new();
    for theta0 in initial_phases {
        let norm = current.values().iter().map(|&v| v * v).sum::<S>().sqrt();
        if norm <= opts.eps0 {
            break;
        }
        let dec = decompose_well_resolved(&current, theta0, opts)?;
        current = Signal::uniform(grid, dec.a0.clone())?;
        out.push(dec);
    }
    Ok(out)
}
