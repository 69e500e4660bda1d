//! Closed-form harmonic solutions and frequency analysis.
//!
//! Two force layouts reduce to x'' + ω²x = 0: a body on an elastic binding
//! (ω = √(k_e/m)) and a body sliding on the rigid surface of a large
//! complex under its surface gravity (ω = √(g/R)). This module solves both
//! from initial conditions, and goes the other way: given a sampled
//! trajectory, it estimates the dominant frequency from a discrete Fourier
//! transform with quadratic peak interpolation, and fits the sin/cos
//! amplitudes by least squares.

use crate::error::{Error, Result};

/// Where the angular frequency of a harmonic problem comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaSource {
    /// Elastic binding: ω = √(k_e / m).
    Elastic { k_e: f64, m: f64 },
    /// Surface-gravity pendulum: ω = √(g / radius).
    Pendulum { g: f64, radius: f64 },
}

/// A harmonic problem: frequency source plus initial conditions along the
/// oscillation axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicSpec {
    pub source: OmegaSource,
    pub x0: f64,
    pub v0: f64,
}

impl HarmonicSpec {
    pub fn validate(&self) -> Result<()> {
        let pairs = match self.source {
            OmegaSource::Elastic { k_e, m } => [("k_e", k_e), ("m", m)],
            OmegaSource::Pendulum { g, radius } => [("g", g), ("radius", radius)],
        };
        for (name, v) in pairs {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: name.into(),
                    reason: "must be finite and > 0".into(),
                });
            }
        }
        if !self.x0.is_finite() || !self.v0.is_finite() {
            return Err(Error::NonFinite {
                quantity: "initial conditions".into(),
            });
        }
        Ok(())
    }

    pub fn omega(&self) -> f64 {
        match self.source {
            OmegaSource::Elastic { k_e, m } => (k_e / m).sqrt(),
            OmegaSource::Pendulum { g, radius } => (g / radius).sqrt(),
        }
    }
}

/// x(t) = A sin ωt + B cos ωt, with its period and frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSolution {
    pub a: f64,
    pub b: f64,
    pub omega: f64,
    pub period: f64,
    pub frequency: f64,
}

impl OscillatorSolution {
    pub fn new(a: f64, b: f64, omega: f64) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega".into(),
                reason: "must be finite and > 0".into(),
            });
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite {
                quantity: "oscillator amplitudes".into(),
            });
        }
        let period = 2.0 * std::f64::consts::PI / omega;
        Ok(Self {
            a,
            b,
            omega,
            period,
            frequency: 1.0 / period,
        })
    }

    /// Position and velocity at time t.
    pub fn evaluate(&self, t: f64) -> (f64, f64) {
        let (s, c) = (self.omega * t).sin_cos();
        let x = self.a * s + self.b * c;
        let v = self.a * self.omega * c - self.b * self.omega * s;
        (x, v)
    }

    /// Peak displacement √(A² + B²).
    pub fn amplitude(&self) -> f64 {
        self.a.hypot(self.b)
    }
}

/// Solves the harmonic problem: A = v0/ω, B = x0.
pub fn solve_harmonic(spec: &HarmonicSpec) -> Result<OscillatorSolution> {
    spec.validate()?;
    let omega = spec.omega();
    OscillatorSolution::new(spec.v0 / omega, spec.x0, omega)
}

/// Position and velocity of a solution at time t.
pub fn evaluate_solution(solution: &OscillatorSolution, t: f64) -> (f64, f64) {
    solution.evaluate(t)
}

/// Minimum sample count for spectral estimation.
pub const MIN_SPECTRAL_SAMPLES: usize = 64;

/// Relative tolerance on sample spacing uniformity.
pub const SPACING_REL_TOL: f64 = 1e-9;

/// Estimates the dominant frequency of a uniformly sampled signal.
///
/// Takes (t, x) pairs — at least 64, uniformly spaced within 1e-9 relative.
/// The mean is removed, the largest-magnitude DFT bin above DC is located,
/// and the bin index is refined by fitting a parabola through the peak and
/// its neighbors. Returns cycles per time unit.
pub fn dominant_frequency(samples: &[(f64, f64)]) -> Result<f64> {
    let n = samples.len();
    if n < MIN_SPECTRAL_SAMPLES {
        return Err(Error::InvalidParameter {
            name: "samples".into(),
            reason: format!("need at least {MIN_SPECTRAL_SAMPLES} samples, got {n}"),
        });
    }
    let dt = (samples[n - 1].0 - samples[0].0) / (n - 1) as f64;
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "samples".into(),
            reason: "times must increase".into(),
        });
    }
    for w in samples.windows(2) {
        let step = w[1].0 - w[0].0;
        if (step - dt).abs() > SPACING_REL_TOL * dt {
            return Err(Error::InvalidParameter {
                name: "samples".into(),
                reason: format!(
                    "non-uniform spacing: step {} deviates from {} beyond {SPACING_REL_TOL} relative",
                    step, dt
                ),
            });
        }
    }
    if samples.iter().all(|&(_, x)| x == samples[0].1) {
        return Err(Error::InvalidParameter {
            name: "signal".into(),
            reason: "no oscillation: signal is constant".into(),
        });
    }

    let mean: f64 = samples.iter().map(|&(_, x)| x).sum::<f64>() / n as f64;
    let xs: Vec<f64> = samples.iter().map(|&(_, x)| x - mean).collect();

    // Direct DFT magnitudes for bins 1..=n/2, one rotation recurrence per
    // bin. O(n²), plenty for trajectory-sized inputs.
    let half = n / 2;
    let mut magnitudes = Vec::with_capacity(half);
    for k in 1..=half {
        let theta = -2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let (step_s, step_c) = theta.sin_cos();
        let (mut wc, mut ws) = (1.0, 0.0);
        let (mut re, mut im) = (0.0, 0.0);
        for &x in &xs {
            re += x * wc;
            im += x * ws;
            let next_c = wc * step_c - ws * step_s;
            ws = wc * step_s + ws * step_c;
            wc = next_c;
        }
        magnitudes.push(re.hypot(im));
    }

    let mut k_max = 0;
    for (i, &m) in magnitudes.iter().enumerate() {
        if m > magnitudes[k_max] {
            k_max = i;
        }
    }
    let k = k_max + 1; // bin index (magnitudes[0] is bin 1)

    // Parabolic refinement when both neighbors exist.
    let delta = if k_max > 0 && k_max + 1 < magnitudes.len() {
        let y1 = magnitudes[k_max - 1];
        let y2 = magnitudes[k_max];
        let y3 = magnitudes[k_max + 1];
        let denom = y1 - 2.0 * y2 + y3;
        if denom != 0.0 {
            (0.5 * (y1 - y3) / denom).clamp(-0.5, 0.5)
        } else {
            0.0
        }
    } else {
        0.0
    };

    Ok((k as f64 + delta) / (n as f64 * dt))
}

/// Least-squares fit of x(t) ≈ A sin ωt + B cos ωt at a known ω.
pub fn fit_harmonic(samples: &[(f64, f64)], omega: f64) -> Result<(f64, f64)> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "omega".into(),
            reason: "must be finite and > 0".into(),
        });
    }
    if samples.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "samples".into(),
            reason: "need at least 2 samples to fit".into(),
        });
    }
    let (mut sss, mut scc, mut ssc, mut bs, mut bc) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(t, x) in samples {
        let (s, c) = (omega * t).sin_cos();
        sss += s * s;
        scc += c * c;
        ssc += s * c;
        bs += x * s;
        bc += x * c;
    }
    let det = sss * scc - ssc * ssc;
    if det.abs() < 1e-12 * (sss * scc).max(1.0) {
        return Err(Error::InvalidParameter {
            name: "samples".into(),
            reason: "degenerate sampling: sin/cos basis is not resolvable".into(),
        });
    }
    Ok(((bs * scc - bc * ssc) / det, (bc * sss - bs * ssc) / det))
}

/// Oscillation period estimated from zero crossings of a sampled signal,
/// by linear interpolation between samples. Needs at least two crossings;
/// returns `None` otherwise. Consecutive crossings are half a period apart.
pub fn zero_crossing_period(samples: &[(f64, f64)]) -> Option<f64> {
    let mut crossings = Vec::new();
    for w in samples.windows(2) {
        let (t0, x0) = w[0];
        let (t1, x1) = w[1];
        if x0 == 0.0 {
            if crossings.last() != Some(&t0) {
                crossings.push(t0);
            }
        } else if x0 * x1 < 0.0 {
            crossings.push(t0 + (t1 - t0) * x0 / (x0 - x1));
        }
    }
    if let Some(&(t, x)) = samples.last() {
        if x == 0.0 && crossings.last() != Some(&t) {
            crossings.push(t);
        }
    }
    if crossings.len() < 2 {
        return None;
    }
    let span = crossings.last().unwrap() - crossings.first().unwrap();
    Some(2.0 * span / (crossings.len() - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn solve_frozen_omega_and_period() {
        let spec = HarmonicSpec {
            source: OmegaSource::Elastic { k_e: 4.0, m: 1.0 },
            x0: 0.5,
            v0: 0.0,
        };
        let s = solve_harmonic(&spec).unwrap();
        assert_eq!(s.omega, 2.0);
        assert_eq!(s.period, PI);
        assert_eq!(s.b, 0.5);
        assert_eq!(s.a, 0.0);
    }

    #[test]
    fn solve_pure_sine() {
        let spec = HarmonicSpec {
            source: OmegaSource::Elastic { k_e: 1.0, m: 1.0 },
            x0: 0.0,
            v0: 1.0,
        };
        let s = solve_harmonic(&spec).unwrap();
        assert_eq!(s.a, 1.0);
        assert_eq!(s.b, 0.0);
        assert_eq!(s.omega, 1.0);
    }

    #[test]
    fn pendulum_omega() {
        let spec = HarmonicSpec {
            source: OmegaSource::Pendulum {
                g: 1.0,
                radius: 100.0,
            },
            x0: 1.0,
            v0: 0.0,
        };
        let s = solve_harmonic(&spec).unwrap();
        assert_eq!(s.omega, 0.1);
        assert!((s.period - 20.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn evaluate_at_zero_and_half_period() {
        let s = OscillatorSolution::new(0.0, 2.0, 3.0).unwrap();
        let (x, v) = s.evaluate(0.0);
        assert_eq!(x, 2.0);
        assert_eq!(v, 0.0);
        let (x, v) = s.evaluate(s.period / 2.0);
        assert!((x + 2.0).abs() < 1e-12);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn sine_peaks_at_quarter_period() {
        let s = OscillatorSolution::new(1.5, 0.0, 1.0).unwrap();
        let (x, v) = s.evaluate(s.period / 4.0);
        assert!((x - 1.5).abs() < 1e-12);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(solve_harmonic(&HarmonicSpec {
            source: OmegaSource::Elastic { k_e: 0.0, m: 1.0 },
            x0: 0.0,
            v0: 0.0,
        })
        .is_err());
        assert!(solve_harmonic(&HarmonicSpec {
            source: OmegaSource::Pendulum {
                g: 1.0,
                radius: -1.0,
            },
            x0: 0.0,
            v0: 0.0,
        })
        .is_err());
    }

    fn sampled(f: impl Fn(f64) -> f64, n: usize, duration: f64) -> Vec<(f64, f64)> {
        let dt = duration / n as f64;
        (0..n).map(|i| (i as f64 * dt, f(i as f64 * dt))).collect()
    }

    #[test]
    fn dominant_frequency_recovers_pure_tone() {
        let samples = sampled(|t| (2.0 * PI * 0.5 * t).sin(), 1024, 20.0);
        let f = dominant_frequency(&samples).unwrap();
        let half_bin = 0.5 / 20.0;
        assert!((f - 0.5).abs() < half_bin, "estimate {f}");
    }

    #[test]
    fn dominant_frequency_picks_larger_component() {
        let samples = sampled(
            |t| 3.0 * (2.0 * PI * 0.3 * t).sin() + (2.0 * PI * 1.1 * t).sin(),
            1024,
            20.0,
        );
        let f = dominant_frequency(&samples).unwrap();
        assert!((f - 0.3).abs() < 0.05, "estimate {f}");
    }

    #[test]
    fn dominant_frequency_rejects_bad_input() {
        let short = sampled(|t| t.sin(), 32, 5.0);
        assert!(dominant_frequency(&short).is_err());

        let mut warped = sampled(|t| t.sin(), 128, 10.0);
        warped[64].0 += 0.01;
        assert!(dominant_frequency(&warped).is_err());

        let flat = sampled(|_| 42.0, 128, 10.0);
        let e = dominant_frequency(&flat).unwrap_err();
        assert!(e.to_string().contains("no oscillation"), "{e}");
    }

    #[test]
    fn fit_recovers_cosine() {
        let samples = sampled(|t| 2.5 * (1.3 * t).cos(), 256, 30.0);
        let (a, b) = fit_harmonic(&samples, 1.3).unwrap();
        assert!(a.abs() < 1e-9, "a = {a}");
        assert!((b - 2.5).abs() < 1e-9, "b = {b}");
    }

    #[test]
    fn zero_crossings_of_cosine() {
        let s = OscillatorSolution::new(0.0, 1.0, 0.1).unwrap();
        let samples = sampled(|t| s.evaluate(t).0, 2000, 3.0 * s.period);
        let period = zero_crossing_period(&samples).unwrap();
        assert!((period - s.period).abs() < 1e-3 * s.period);
    }

    #[test]
    fn zero_crossing_needs_two_crossings() {
        let samples = sampled(|_| 1.0, 100, 1.0);
        assert_eq!(zero_crossing_period(&samples), None);
    }

    proptest! {
        #[test]
        fn ode_residual_vanishes(
            a in -10.0f64..10.0,
            b in -10.0f64..10.0,
            k_e in 0.01f64..100.0,
            m in 0.01f64..100.0,
            ts in proptest::collection::vec(0.0f64..1000.0, 1000),
        ) {
            prop_assume!(a != 0.0 || b != 0.0);
            let omega = (k_e / m).sqrt();
            let s = OscillatorSolution::new(a, b, omega).unwrap();
            let amp_scale = a.abs().max(1e-12) * omega * omega;
            for t in ts {
                let (x, _) = s.evaluate(t);
                // Closed-form second derivative, recomputed independently.
                let (sin, cos) = (omega * t).sin_cos();
                let xdd = -a * omega * omega * sin - b * omega * omega * cos;
                prop_assert!((xdd + (k_e / m) * x).abs() < 1e-9 * amp_scale.max(b.abs() * omega * omega));
            }
        }

        #[test]
        fn amplitude_is_peak_displacement(
            a in -10.0f64..10.0,
            b in -10.0f64..10.0,
            omega in 0.1f64..10.0,
        ) {
            prop_assume!(a.hypot(b) > 1e-6);
            let s = OscillatorSolution::new(a, b, omega).unwrap();
            let amp = s.amplitude();
            // Phase where the extremum sits: x = amp * sin(ωt + φ).
            let phi = b.atan2(a);
            let t_peak = (std::f64::consts::FRAC_PI_2 - phi) / omega;
            let (x, _) = s.evaluate(t_peak);
            prop_assert!((x.abs() - amp).abs() < 1e-9 * amp);
            // And no sampled point exceeds it.
            for i in 0..100 {
                let t = i as f64 * s.period / 100.0;
                prop_assert!(s.evaluate(t).0.abs() <= amp * (1.0 + 1e-12));
            }
        }

        #[test]
        fn round_trip_initial_conditions(
            x0 in -10.0f64..10.0,
            v0 in -10.0f64..10.0,
            k_e in 0.01f64..100.0,
            m in 0.01f64..100.0,
        ) {
            let spec = HarmonicSpec { source: OmegaSource::Elastic { k_e, m }, x0, v0 };
            let s = solve_harmonic(&spec).unwrap();
            let (x, v) = s.evaluate(0.0);
            prop_assert_eq!(x, x0);
            // v(0) = (v0/ω)·ω: two roundings, exact to one ulp.
            prop_assert!((v - v0).abs() <= 2.0 * f64::EPSILON * v0.abs());
        }

        #[test]
        fn period_frequency_consistency(omega in 1e-3f64..1e3) {
            let s = OscillatorSolution::new(1.0, 1.0, omega).unwrap();
            prop_assert!((s.period - 2.0 * std::f64::consts::PI / omega).abs() <= 1e-12 * s.period);
            prop_assert!((s.frequency - 1.0 / s.period).abs() <= 1e-12 * s.frequency);
        }
    }

    #[test]
    fn round_trip_exact_at_power_of_two_omega() {
        let spec = HarmonicSpec {
            source: OmegaSource::Elastic { k_e: 4.0, m: 1.0 },
            x0: 0.37,
            v0: -1.93,
        };
        let s = solve_harmonic(&spec).unwrap();
        let (x, v) = s.evaluate(0.0);
        assert_eq!(x, 0.37);
        assert_eq!(v, -1.93, "ω = 2 divides and multiplies exactly");
    }
}
