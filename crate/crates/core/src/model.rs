//! The disordered Kuramoto network: quenched disorder, phase state, order
//! parameter and the complex network-noise observable.
//!
//! The network is
//!
//! ```text
//! dθ_l/dt = ω_l + Σ_m K_lm sin(θ_m − θ_l) + ξ_l(t)
//! ```
//!
//! with ω_l = σ_ω G_l, K_lm = K/N + k G_lm/√N (all G iid standard normal,
//! K_lm and K_ml independent) and ⟨ξ_l(t) ξ_m(t')⟩ = 2D δ(t−t') δ_lm.

use crate::error::{Error, Result};
use crate::rng::{stream, Purpose};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

/// Time-stepping scheme for the network dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Integrator {
    /// Classical fixed-step 4th-order Runge-Kutta; deterministic drift only.
    RungeKutta4,
    /// Euler-Maruyama; mandatory when the dynamical noise intensity is > 0.
    EulerMaruyama,
}

/// All scalar knobs of a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimParams {
    /// Number of oscillators N.
    pub n_osc: usize,
    /// Mean coupling K (the coupling matrix mean is K/N).
    pub mean_coupling: f64,
    /// Coupling disorder strength k (entry std dev is k/√N).
    pub coupling_disorder: f64,
    /// Std dev σ_ω of the natural frequencies.
    pub freq_spread: f64,
    /// Intensity D of the dynamical white noise.
    pub noise_intensity: f64,
    /// Integration step.
    pub dt: f64,
    /// Measurement window T (time units).
    pub window: f64,
    /// Discarded transient t_d (time units).
    pub transient: f64,
    /// Master seed; all RNG streams derive from it.
    pub seed: u64,
    pub integrator: Integrator,
}

impl SimParams {
    /// Checks the structural invariants. Call once at the boundary; the
    /// simulation routines assume a validated parameter set.
    pub fn validate(&self) -> Result<()> {
        if self.n_osc == 0 {
            return Err(Error::InvalidParams("n_osc must be positive".into()));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParams(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.window > 0.0) || !self.window.is_finite() {
            return Err(Error::InvalidParams(format!(
                "window must be positive, got {}",
                self.window
            )));
        }
        if self.transient < 0.0 || !self.transient.is_finite() {
            return Err(Error::InvalidParams(format!(
                "transient must be nonnegative, got {}",
                self.transient
            )));
        }
        if self.coupling_disorder < 0.0 {
            return Err(Error::InvalidParams("coupling_disorder must be >= 0".into()));
        }
        if self.freq_spread < 0.0 {
            return Err(Error::InvalidParams("freq_spread must be >= 0".into()));
        }
        if self.noise_intensity < 0.0 {
            return Err(Error::InvalidParams("noise_intensity must be >= 0".into()));
        }
        let steps = self.window / self.dt;
        if (steps - steps.round()).abs() > 1e-6 * steps.max(1.0) {
            return Err(Error::InvalidParams(format!(
                "window {} is not an integer multiple of dt {}",
                self.window, self.dt
            )));
        }
        if self.integrator == Integrator::RungeKutta4 && self.noise_intensity > 0.0 {
            return Err(Error::InvalidParams(
                "RungeKutta4 requires noise_intensity = 0; use EulerMaruyama".into(),
            ));
        }
        Ok(())
    }

    /// Number of integration steps in the measurement window.
    pub fn window_steps(&self) -> usize {
        (self.window / self.dt).round() as usize
    }

    /// Number of integration steps in the discarded transient.
    pub fn transient_steps(&self) -> usize {
        (self.transient / self.dt).round() as usize
    }
}

/// One quenched draw of the disorder: natural frequencies and the dense
/// coupling matrix (row-major, `couplings[l*n + m]` = K_lm).
#[derive(Debug, Clone, PartialEq)]
pub struct DisorderRealization {
    pub n: usize,
    pub freqs: Vec<f64>,
    pub couplings: Vec<f64>,
    /// Seed the realization was generated from (carried for provenance).
    pub seed: u64,
}

impl DisorderRealization {
    pub fn coupling(&self, l: usize, m: usize) -> f64 {
        self.couplings[l * self.n + m]
    }

    pub fn coupling_row(&self, l: usize) -> &[f64] {
        &self.couplings[l * self.n..(l + 1) * self.n]
    }
}

/// Oscillator phases, stored unwrapped; wrap only when reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    pub phases: Vec<f64>,
    pub time: f64,
}

impl PhaseState {
    /// Phases reduced to [0, 2π), for observables.
    pub fn wrapped(&self) -> Vec<f64> {
        self.phases.iter().map(|p| p.rem_euclid(TAU)).collect()
    }
}

/// The Kuramoto mean field r e^{iψ} = (1/N) Σ e^{iθ_l}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderParameterSample {
    /// Modulus, in [0, 1].
    pub r: f64,
    /// Argument, in [−π, π).
    pub psi: f64,
}

/// Draws one disorder realization: freqs[l] = σ_ω G_l and
/// K_lm = K/N + k G_lm / √N, all G iid standard normal.
///
/// `rep` selects the realization stream; fixed (seed, rep) gives a
/// bit-identical draw regardless of threading.
pub fn sample_disorder(params: &SimParams, rep: u32) -> DisorderRealization {
    let n = params.n_osc;
    let mut rng = stream(params.seed, Purpose::Disorder, rep, 0);
    let normal = StandardNormal;

    let freqs: Vec<f64> = (0..n)
        .map(|_| params.freq_spread * normal.sample(&mut rng))
        .collect();

    let mean = params.mean_coupling / n as f64;
    let sd = params.coupling_disorder / (n as f64).sqrt();
    let couplings: Vec<f64> = (0..n * n)
        .map(|_| mean + sd * <StandardNormal as Distribution<f64>>::sample(&normal, &mut rng))
        .collect();

    DisorderRealization {
        n,
        freqs,
        couplings,
        seed: params.seed,
    }
}

/// Initial phases iid uniform on [0, 2π), at time 0.
pub fn init_phases(params: &SimParams, rep: u32) -> PhaseState {
    let n = params.n_osc;
    let mut rng = stream(params.seed, Purpose::InitPhases, rep, 0);
    let phases: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * TAU).collect();
    PhaseState { phases, time: 0.0 }
}

/// Modulus and argument of the population mean field.
pub fn order_parameter(state: &PhaseState) -> OrderParameterSample {
    let n = state.phases.len() as f64;
    let (mut sc, mut ss) = (0.0, 0.0);
    for &p in &state.phases {
        let (s, c) = p.sin_cos();
        sc += c;
        ss += s;
    }
    let re = sc / n;
    let im = ss / n;
    let r = re.hypot(im);
    let mut psi = im.atan2(re);
    if psi >= PI {
        psi -= TAU;
    }
    OrderParameterSample { r, psi }
}

/// The network noise ζ_l(t) = Σ_m K_lm e^{iθ_m} seen by oscillator `l`.
pub fn network_noise(state: &PhaseState, disorder: &DisorderRealization, l: usize) -> Complex64 {
    assert!(l < disorder.n, "oscillator index out of range");
    let row = disorder.coupling_row(l);
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, &theta) in row.iter().zip(&state.phases) {
        let (s, c) = theta.sin_cos();
        acc += k * Complex64::new(c, s);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn base_params(n: usize) -> SimParams {
        SimParams {
            n_osc: n,
            mean_coupling: 1.0,
            coupling_disorder: 1.0,
            freq_spread: 1.0,
            noise_intensity: 0.0,
            dt: 0.01,
            window: 10.0,
            transient: 0.0,
            seed: 1234,
            integrator: Integrator::RungeKutta4,
        }
    }

    #[test]
    fn validation_rejects_rk4_with_noise() {
        let mut p = base_params(4);
        p.noise_intensity = 0.5;
        assert!(p.validate().is_err());
        p.integrator = Integrator::EulerMaruyama;
        assert!(p.validate().is_ok());
    }

    #[test]
    fn validation_rejects_non_multiple_window() {
        let mut p = base_params(4);
        p.window = 10.005;
        assert!(p.validate().is_err());
    }

    #[test]
    fn no_disorder_gives_uniform_couplings() {
        // k = 0, K = 1, N = 4: every entry exactly K/N = 0.25.
        let mut p = base_params(4);
        p.coupling_disorder = 0.0;
        let d = sample_disorder(&p, 0);
        assert!(d.couplings.iter().all(|&c| c == 0.25));
    }

    #[test]
    fn zero_spread_gives_zero_freqs() {
        let mut p = base_params(16);
        p.freq_spread = 0.0;
        let d = sample_disorder(&p, 0);
        assert!(d.freqs.iter().all(|&w| w == 0.0));
    }

    #[test]
    fn coupling_sample_variance_matches_construction() {
        // k = 1, K = 0, N = 10^4: sample variance of the 10^8 entries is
        // 1/N = 1e-4 within 5%.
        let mut p = base_params(10_000);
        p.mean_coupling = 0.0;
        let d = sample_disorder(&p, 0);
        let n_entries = d.couplings.len() as f64;
        let mean = d.couplings.iter().sum::<f64>() / n_entries;
        let var = d.couplings.iter().map(|&c| (c - mean) * (c - mean)).sum::<f64>() / n_entries;
        let expected = 1.0 / 10_000.0;
        assert!(
            (var - expected).abs() < 0.05 * expected,
            "sample variance {var:.3e} vs {expected:.3e}"
        );
    }

    #[test]
    fn coupling_moments_at_n_1000() {
        // Empirical mean ~ K/N and variance ~ k^2/N within 5 standard errors.
        let p = base_params(1000);
        let d = sample_disorder(&p, 0);
        let n_entries = d.couplings.len() as f64;
        let mean = d.couplings.iter().sum::<f64>() / n_entries;
        let var = d.couplings.iter().map(|&c| (c - mean) * (c - mean)).sum::<f64>() / n_entries;
        let exp_mean = 1.0 / 1000.0;
        let exp_var = 1.0 / 1000.0;
        let se_mean = (exp_var / n_entries).sqrt();
        let se_var = exp_var * (2.0 / n_entries).sqrt();
        assert!((mean - exp_mean).abs() < 5.0 * se_mean);
        assert!((var - exp_var).abs() < 5.0 * se_var);
    }

    #[test]
    fn freq_sample_stats() {
        let n = 4000;
        let p = base_params(n);
        let d = sample_disorder(&p, 0);
        let nf = n as f64;
        let mean = d.freqs.iter().sum::<f64>() / nf;
        let var = d.freqs.iter().map(|&w| (w - mean) * (w - mean)).sum::<f64>() / nf;
        let tol = 5.0 / nf.sqrt();
        assert!(mean.abs() < tol, "freq mean {mean}");
        assert!((var - 1.0).abs() < tol, "freq variance {var}");
    }

    #[test]
    fn transpose_entries_are_independent_draws() {
        // Correlation of K_lm with K_ml over off-diagonal pairs is ~ 0.
        let mut p = base_params(400);
        p.mean_coupling = 0.0;
        let d = sample_disorder(&p, 0);
        let n = d.n;
        let mut num = 0.0;
        let mut den = 0.0;
        for l in 0..n {
            for m in (l + 1)..n {
                num += d.coupling(l, m) * d.coupling(m, l);
                den += d.coupling(l, m) * d.coupling(l, m);
            }
        }
        let corr = num / den;
        // ~ 1/sqrt(#pairs) fluctuation; 5 sigma.
        let pairs = (n * (n - 1) / 2) as f64;
        assert!(corr.abs() < 5.0 / pairs.sqrt(), "transpose correlation {corr}");
    }

    #[test]
    fn disorder_is_deterministic() {
        let p = base_params(64);
        let a = sample_disorder(&p, 3);
        let b = sample_disorder(&p, 3);
        assert_eq!(a, b);
        let c = sample_disorder(&p, 4);
        assert_ne!(a, c);
    }

    #[test]
    fn init_phases_uniform_and_deterministic() {
        let p = base_params(10_000);
        let s = init_phases(&p, 0);
        assert_eq!(s.time, 0.0);
        assert!(s.phases.iter().all(|&t| (0.0..TAU).contains(&t)));
        // CLT: |mean pointer| ~ 1/sqrt(2N) per component; 0.05 is ~ 5 sigma.
        let m = s
            .phases
            .iter()
            .map(|&t| Complex64::new(t.cos(), t.sin()))
            .sum::<Complex64>()
            / 10_000.0;
        assert!(m.norm() < 0.05, "pointer mean modulus {}", m.norm());
        let s2 = init_phases(&p, 0);
        assert_eq!(s.phases, s2.phases);
    }

    #[test]
    fn single_phase_in_range() {
        let p = base_params(1);
        let s = init_phases(&p, 0);
        assert!(s.phases[0] >= 0.0 && s.phases[0] < TAU);
    }

    #[test]
    fn order_parameter_extremes() {
        let all_equal = PhaseState {
            phases: vec![1.3; 7],
            time: 0.0,
        };
        let op = order_parameter(&all_equal);
        assert!((op.r - 1.0).abs() < 1e-12);
        assert!((op.psi - 1.3).abs() < 1e-12);

        let antipodal = PhaseState {
            phases: vec![0.0, PI],
            time: 0.0,
        };
        assert!(order_parameter(&antipodal).r < 1e-12);
    }

    #[test]
    fn order_parameter_scales_as_inverse_sqrt_n() {
        // <r^2> over 100 uniform draws at N = 10^4 is ~ 1/N within factor 2.
        let p = base_params(10_000);
        let mean_r2 = (0..100)
            .map(|rep| {
                let s = init_phases(&p, rep);
                let r = order_parameter(&s).r;
                r * r
            })
            .sum::<f64>()
            / 100.0;
        let expected = 1.0 / 10_000.0;
        assert!(
            mean_r2 > expected / 2.0 && mean_r2 < expected * 2.0,
            "<r^2> = {mean_r2:.3e}, expected ~ {expected:.3e}"
        );
    }

    #[test]
    fn network_noise_homogeneous_sum() {
        // k = 0, K = 1, all phases 0: ζ = N * (K/N) * 1 = 1.
        let mut p = base_params(8);
        p.coupling_disorder = 0.0;
        let d = sample_disorder(&p, 0);
        let s = PhaseState {
            phases: vec![0.0; 8],
            time: 0.0,
        };
        let z = network_noise(&s, &d, 3);
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn network_noise_zero_couplings() {
        let mut p = base_params(8);
        p.coupling_disorder = 0.0;
        p.mean_coupling = 0.0;
        let d = sample_disorder(&p, 0);
        let s = init_phases(&p, 0);
        for l in 0..8 {
            assert_eq!(network_noise(&s, &d, l), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn network_noise_matches_direct_resummation() {
        // Independent oracle: naive complex-exponential sum, N = 8.
        let p = base_params(8);
        let d = sample_disorder(&p, 1);
        let s = init_phases(&p, 1);
        for l in 0..8 {
            let mut oracle = Complex64::new(0.0, 0.0);
            for m in 0..8 {
                oracle += d.coupling(l, m) * (Complex64::i() * s.phases[m]).exp();
            }
            let got = network_noise(&s, &d, l);
            assert!((got - oracle).norm() < 1e-12, "osc {l}: {got} vs {oracle}");
        }
    }
}
