//! Time integration of dθᵢ/dt = ωᵢ + γΣⱼsin(θⱼ−θᵢ), as an empirical check
//! on the algebraic stability decisions.
//!
//! The flow is the gradient ascent of L(θ) = ⟨ω,θ⟩ + (γ/2)Σᵢⱼcos(θᵢ−θⱼ) on
//! the covering space ℝ^N — angles are never wrapped — so L is nondecreasing
//! along exact trajectories and the classical fourth-order one-step scheme
//! preserves that up to O(dt⁴) per unit time. Locking is read off the
//! trailing-window average frequencies (θᵢ(T) − θᵢ(T−w))/w.

use crate::error::{Error, Result};
use crate::model::{check_gamma, phasor_sums_raw, FrequencyVector, PhaseConfig};
use crate::scalar::Real;

/// Default step 0.01/(γN): the Jacobian spectrum lies in [−2γN, 0], so this
/// keeps the stiffest mode fifty steps per e-fold.
pub fn default_dt<R: Real>(gamma: R, n: usize) -> R {
    R::lit(0.01) / (gamma * R::of_usize(n))
}

/// Default trailing window (time units) for locking detection.
pub const DEFAULT_WINDOW: f64 = 10.0;

/// Default locking tolerance 1e−6·γ·N, far below any beat frequency a
/// drifting pair can sustain at desk scale.
pub fn default_locking_tol<R: Real>(gamma: R, n: usize) -> R {
    R::lit(1e-6) * gamma * R::of_usize(n)
}

/// A fixed-step trajectory: states[k] is the configuration at times[k].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<R> {
    pub times: Vec<R>,
    pub states: Vec<PhaseConfig<R>>,
    pub omega: FrequencyVector<R>,
    pub gamma: R,
}

impl<R: Real> Trajectory<R> {
    pub fn final_state(&self) -> &PhaseConfig<R> {
        self.states.last().expect("trajectories hold at least the initial state")
    }

    pub fn final_time(&self) -> R {
        *self.times.last().expect("trajectories hold at least the initial state")
    }
}

/// dθ/dt into `out`, phasor form on a raw angle slice.
fn derivative<R: Real>(omega: &[R], gamma: R, angles: &[R], out: &mut [R]) {
    let (sin_sum, cos_sum) = phasor_sums_raw(angles);
    for ((o, &t), &w) in out.iter_mut().zip(angles).zip(omega) {
        *o = w + gamma * (sin_sum * t.cos() - cos_sum * t.sin());
    }
}

/// Integrate from θ0 to t_end with the classical fourth-order scheme at
/// fixed step dt (a shorter final step lands exactly on t_end). Every step
/// is recorded.
pub fn integrate<R: Real>(
    theta0: &PhaseConfig<R>,
    omega: &FrequencyVector<R>,
    gamma: R,
    dt: R,
    t_end: R,
) -> Result<Trajectory<R>> {
    check_gamma(gamma)?;
    if theta0.n() != omega.n() {
        return Err(Error::DimensionMismatch {
            expected: theta0.n(),
            got: omega.n(),
        });
    }
    if !(dt > R::zero()) || !dt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "step size must be positive and finite, got {dt}"
        )));
    }
    if !(t_end >= dt) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "horizon must satisfy t_end ≥ dt, got t_end = {t_end}, dt = {dt}"
        )));
    }

    let n = theta0.n();
    let w = omega.omega();
    let whole_steps = (t_end / dt).floor();
    let steps = whole_steps.as_f64() as usize;
    let remainder = t_end - whole_steps * dt;

    let mut y = theta0.angles().to_vec();
    let mut stage = vec![R::zero(); n];
    let mut k1 = vec![R::zero(); n];
    let mut k2 = vec![R::zero(); n];
    let mut k3 = vec![R::zero(); n];
    let mut k4 = vec![R::zero(); n];

    let mut times = Vec::with_capacity(steps + 2);
    let mut states = Vec::with_capacity(steps + 2);
    times.push(R::zero());
    states.push(theta0.clone());

    let mut step = |y: &mut Vec<R>, h: R| -> Result<()> {
        let half = h * R::lit(0.5);
        derivative(w, gamma, y, &mut k1);
        for i in 0..n {
            stage[i] = y[i] + half * k1[i];
        }
        derivative(w, gamma, &stage, &mut k2);
        for i in 0..n {
            stage[i] = y[i] + half * k2[i];
        }
        derivative(w, gamma, &stage, &mut k3);
        for i in 0..n {
            stage[i] = y[i] + h * k3[i];
        }
        derivative(w, gamma, &stage, &mut k4);
        let sixth = h / R::lit(6.0);
        for i in 0..n {
            y[i] += sixth * (k1[i] + R::lit(2.0) * (k2[i] + k3[i]) + k4[i]);
            if !y[i].is_finite() {
                return Err(Error::NonFinite);
            }
        }
        Ok(())
    };

    for s in 1..=steps {
        step(&mut y, dt)?;
        times.push(R::of_usize(s) * dt);
        states.push(PhaseConfig::new(y.clone())?);
    }
    if remainder > dt * R::lit(1e-9) {
        step(&mut y, remainder)?;
        times.push(t_end);
        states.push(PhaseConfig::new(y.clone())?);
    }

    Ok(Trajectory {
        times,
        states,
        omega: omega.clone(),
        gamma,
    })
}

/// Full frequency locking: over the trailing `window` time units, the
/// time-averaged instantaneous frequencies (θᵢ(T) − θᵢ(T−w))/w must agree to
/// within `tol` across oscillators. The covering-space average telescopes,
/// so no per-step finite differences are involved.
pub fn detect_locking<R: Real>(traj: &Trajectory<R>, window: R, tol: R) -> Result<bool> {
    if !(window > R::zero()) || !window.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "window must be positive and finite, got {window}"
        )));
    }
    if !(tol > R::zero()) {
        return Err(Error::InvalidParameter(format!(
            "locking tolerance must be positive, got {tol}"
        )));
    }
    let t_end = traj.final_time();
    let span = t_end - traj.times[0];
    if window >= span {
        return Err(Error::WindowTooLong {
            window: window.as_f64(),
            span: span.as_f64(),
        });
    }
    let cut = t_end - window;
    let k = traj.times.partition_point(|&t| t < cut);
    if k + 1 >= traj.times.len() {
        return Err(Error::InvalidParameter(
            "window shorter than a single step".to_string(),
        ));
    }
    let dt_window = t_end - traj.times[k];
    let last = traj.final_state().angles();
    let base = traj.states[k].angles();
    let mut lo = R::infinity();
    let mut hi = R::neg_infinity();
    for (&a, &b) in last.iter().zip(base) {
        let avg = (a - b) / dt_window;
        lo = lo.min(avg);
        hi = hi.max(avg);
    }
    Ok(hi - lo < tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{coupling_map, energy, velocity_field};
    use crate::region::{is_synchronizable, solve_kappa, reconstruct_theta};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn inward_omega(n: usize, rng: &mut impl Rng) -> FrequencyVector<f64> {
        let theta = PhaseConfig::new(
            (0..n)
                .map(|_| rng.random_range(0.1..FRAC_PI_2 - 0.1))
                .collect(),
        )
        .unwrap();
        FrequencyVector::new(coupling_map(&theta).iter().map(|x| -x).collect()).unwrap()
    }

    #[test]
    fn trajectory_bookkeeping() {
        let theta0 = PhaseConfig::new(vec![0.1, -0.2, 0.1]).unwrap();
        let omega = FrequencyVector::<f64>::zeros(3).unwrap();
        let traj = integrate(&theta0, &omega, 1.0, 0.01, 0.25).unwrap();
        assert_eq!(traj.times.len(), traj.states.len());
        assert!((traj.final_time() - 0.25).abs() < 1e-12);
        for pair in traj.times.windows(2) {
            assert!(pair[1] > pair[0], "times must be strictly increasing");
        }
        // 0.25/0.01 = 25 whole steps, no partial step.
        assert_eq!(traj.times.len(), 26);
    }

    #[test]
    fn partial_final_step_lands_on_horizon() {
        let theta0 = PhaseConfig::new(vec![0.3f64, -0.3]).unwrap();
        let omega = FrequencyVector::zeros(2).unwrap();
        let traj = integrate(&theta0, &omega, 1.0, 0.013, 0.1).unwrap();
        assert!((traj.final_time() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn zero_frequencies_relax_to_in_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let theta0 = PhaseConfig::new(
            (0..5).map(|_| rng.random_range(-0.8..0.8)).collect(),
        )
        .unwrap();
        let omega = FrequencyVector::<f64>::zeros(5).unwrap();
        let traj = integrate(&theta0, &omega, 1.0, default_dt(1.0, 5), 30.0).unwrap();
        let end = traj.final_state().angles();
        for i in 1..5 {
            assert!(
                (end[i] - end[0]).abs() < 1e-8,
                "pairwise differences must vanish, got {:?}",
                end
            );
        }
    }

    #[test]
    fn perturbed_fixed_point_returns() {
        let mut rng = ChaCha8Rng::seed_from_u64(82);
        for _ in 0..10 {
            let n = rng.random_range(3..6);
            let omega = inward_omega(n, &mut rng);
            let kv = solve_kappa(&omega).unwrap();
            let star = reconstruct_theta(&kv, &omega).unwrap();
            let mut kick: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = kick.iter().map(|x| x * x).sum::<f64>().sqrt();
            kick.iter_mut().for_each(|x| *x *= 0.01 / norm);
            let theta0 = PhaseConfig::new(
                star.angles().iter().zip(&kick).map(|(&t, &k)| t + k).collect(),
            )
            .unwrap();
            let traj = integrate(&theta0, &omega, 1.0, default_dt(1.0, n), 60.0).unwrap();
            let vel = velocity_field(traj.final_state(), &omega, 1.0).unwrap();
            let speed = vel.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!(
                speed < 1e-8,
                "perturbed state must fall back to the fixed point, |θ̇| = {speed}"
            );
        }
    }

    #[test]
    fn outside_sphere_never_locks() {
        // ‖ω‖ = 3 > 3^{3/2}/2 ≈ 2.598: no fixed point exists, phases drift.
        let s2 = 2.0f64.sqrt();
        let omega = FrequencyVector::new(vec![3.0 / s2, 0.0, -3.0 / s2]).unwrap();
        let theta0 = PhaseConfig::new(vec![0.0, 0.4, -0.4]).unwrap();
        let traj = integrate(&theta0, &omega, 1.0, default_dt(1.0, 3), 80.0).unwrap();
        let locked = detect_locking(&traj, 10.0, default_locking_tol(1.0, 3)).unwrap();
        assert!(!locked, "no locked state exists outside the sphere bound");
        let spread0 = {
            let a = theta0.angles();
            a.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
                - a.iter().fold(f64::INFINITY, |m, &x| m.min(x))
        };
        let a = traj.final_state().angles();
        let spread = a.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x))
            - a.iter().fold(f64::INFINITY, |m, &x| m.min(x));
        assert!(
            spread > spread0 + 10.0,
            "covering-space spread must grow without bound, got {spread}"
        );
    }

    #[test]
    fn fixed_point_initial_condition_reports_locked() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let omega = inward_omega(4, &mut rng);
        let star = reconstruct_theta(&solve_kappa(&omega).unwrap(), &omega).unwrap();
        let traj = integrate(&star, &omega, 1.0, default_dt(1.0, 4), 15.0).unwrap();
        assert!(detect_locking(&traj, 10.0, default_locking_tol(1.0, 4)).unwrap());
    }

    #[test]
    fn locking_agrees_with_membership_decision() {
        let mut rng = ChaCha8Rng::seed_from_u64(84);
        let mut done = 0;
        while done < 30 {
            let n = rng.random_range(3..6);
            let gamma = rng.random_range(0.5..1.5);
            // Mix clearly-inside and clearly-outside draws.
            let omega = if done % 2 == 0 {
                inward_omega(n, &mut rng).scaled(gamma)
            } else {
                let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let mean = v.iter().sum::<f64>() / n as f64;
                v.iter_mut().for_each(|x| *x -= mean);
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                let reach = gamma * (n as f64).powf(1.5) / 2.0;
                FrequencyVector::new(v.iter().map(|x| x / norm * reach * 1.3).collect())
                    .unwrap()
            };
            let decision = is_synchronizable(&omega, gamma).unwrap();
            // Leave the marginal band to the algebra.
            let margin = match decision.tau {
                Some(t) => (t - 2.0).abs() > 1e-3,
                None => true,
            };
            if !margin {
                continue;
            }
            let theta0 = match &decision.theta {
                Some(star) => PhaseConfig::new(
                    star.angles()
                        .iter()
                        .map(|&t| t + rng.random_range(-0.05..0.05))
                        .collect(),
                )
                .unwrap(),
                None => PhaseConfig::new(
                    (0..n).map(|_| rng.random_range(-0.5..0.5)).collect(),
                )
                .unwrap(),
            };
            let traj =
                integrate(&theta0, &omega, gamma, default_dt(gamma, n), 120.0).unwrap();
            let locked =
                detect_locking(&traj, 10.0, default_locking_tol(gamma, n)).unwrap();
            assert_eq!(
                locked,
                decision.synchronizable(),
                "dynamics and algebra disagree at n = {n}, γ = {gamma}, ω = {:?}",
                omega.omega()
            );
            done += 1;
        }
    }

    #[test]
    fn energy_never_decreases_along_flow() {
        let mut rng = ChaCha8Rng::seed_from_u64(85);
        for _ in 0..5 {
            let n = rng.random_range(3..6);
            let omega = inward_omega(n, &mut rng);
            let theta0 = PhaseConfig::new(
                (0..n).map(|_| rng.random_range(-1.5..1.5)).collect(),
            )
            .unwrap();
            let traj = integrate(&theta0, &omega, 1.0, default_dt(1.0, n), 20.0).unwrap();
            let mut prev = f64::NEG_INFINITY;
            for state in traj.states.iter().step_by(10) {
                let l = energy(state, &omega, 1.0).unwrap();
                assert!(
                    l >= prev - 1e-9 * (1.0 + prev.abs()),
                    "gradient flow must not lose energy: {l} < {prev}"
                );
                prev = l;
            }
        }
    }

    #[test]
    fn mean_phase_is_conserved_for_mean_zero_frequencies() {
        let mut rng = ChaCha8Rng::seed_from_u64(86);
        let n = 5;
        let omega = inward_omega(n, &mut rng);
        let theta0 = PhaseConfig::new(
            (0..n).map(|_| rng.random_range(-2.0..2.0)).collect(),
        )
        .unwrap();
        let traj = integrate(&theta0, &omega, 1.0, default_dt(1.0, n), 25.0).unwrap();
        let sum0: f64 = theta0.angles().iter().sum();
        for state in traj.states.iter().step_by(50) {
            let s: f64 = state.angles().iter().sum();
            assert!(
                (s - sum0).abs() < 1e-8,
                "Σθ must stay constant (mean-zero drive), drifted to {s} from {sum0}"
            );
        }
    }

    #[test]
    fn step_halving_shows_fourth_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(87);
        let n = 4;
        let omega = inward_omega(n, &mut rng);
        let theta0 = PhaseConfig::new(vec![0.9, -0.4, 0.2, -0.7]).unwrap();
        let run = |dt: f64| {
            integrate(&theta0, &omega, 1.0, dt, 2.0)
                .unwrap()
                .final_state()
                .angles()
                .to_vec()
        };
        let coarse = run(0.1);
        let fine = run(0.05);
        let reference = run(0.0125);
        let err = |a: &[f64]| -> f64 {
            a.iter()
                .zip(&reference)
                .map(|(x, r)| (x - r) * (x - r))
                .sum::<f64>()
                .sqrt()
        };
        let ratio = err(&coarse) / err(&fine);
        assert!(
            (10.0..24.0).contains(&ratio),
            "halving the step must cut the error ≈16×, got {ratio}"
        );
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let theta0 = PhaseConfig::new(vec![0.0, 0.1]).unwrap();
        let omega = FrequencyVector::zeros(2).unwrap();
        assert!(integrate(&theta0, &omega, 1.0, 0.0, 1.0).is_err());
        assert!(integrate(&theta0, &omega, 1.0, 0.1, 0.05).is_err());
        assert!(integrate(&theta0, &omega, -1.0, 0.1, 1.0).is_err());

        let traj = integrate(&theta0, &omega, 1.0, 0.1, 1.0).unwrap();
        assert!(matches!(
            detect_locking(&traj, 5.0, 1e-6),
            Err(Error::WindowTooLong { .. })
        ));
        assert!(detect_locking(&traj, 0.0, 1e-6).is_err());
    }
}
