//! Minimum-energy input synthesis and exact zero-order-hold simulation.
//!
//! The unit-energy set is defined through trajectories that leave the origin
//! in the infinite past and return to it in the infinite future. Here the
//! horizon is truncated to `[-T, T]` and the input is piecewise constant on a
//! uniform grid; the minimum-norm input meeting `z(-T) = 0`, `z(0) = target`,
//! `z(T) = 0` is found by least squares.
//!
//! The constraints are written per mode in the decoupled modal coordinates.
//! A stable mode is propagated forward from the left end of a segment, an
//! unstable mode backward from the right end, so every coefficient is a
//! decaying exponential and the constraint map stays well conditioned.

use std::io::Write;

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};

use crate::decomposition::{build_transform, ModalCoords, ModalTransform};
use crate::error::{Error, Result};
use crate::systems::{CoupledSystem, FirstOrderPair, State4};

/// Pseudo-inverse cut-off relative to the largest singular value.
pub const RANK_RTOL: f64 = 1e-10;
/// Endpoint tolerance `|z(0) - target| <= ENDPOINT_TOL (1 + |target|)`.
pub const ENDPOINT_TOL: f64 = 1e-6;
/// Default truncation `T = DEFAULT_HORIZON_FACTOR / min(pi)`.
pub const DEFAULT_HORIZON_FACTOR: f64 = 8.0;

/// How the input samples are interpreted between grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hold {
    /// `inputs[k]` is held on `[t_k, t_{k+1})`; the last sample is unused.
    ZeroOrder,
    /// Point samples of a continuous signal; integrated by the trapezoid rule.
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S = State4> {
    pub times: Vec<f64>,
    pub inputs: Vec<f64>,
    pub states: Vec<S>,
    /// Approximation of `||u||^2` under `hold`.
    pub energy: f64,
    pub hold: Hold,
}

impl<S> Trajectory<S> {
    /// Checks lengths and the uniform step, then computes the energy.
    pub fn from_samples(times: Vec<f64>, inputs: Vec<f64>, states: Vec<S>, hold: Hold) -> Result<Self> {
        if times.len() < 2 || inputs.len() != times.len() || states.len() != times.len() {
            return Err(Error::Domain {
                name: "samples",
                value: times.len() as f64,
                expected: "at least two samples with matching lengths",
            });
        }
        let dt = times[1] - times[0];
        let uniform = times
            .windows(2)
            .all(|w| w[1] > w[0] && ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.abs().max(1.0));
        if !uniform {
            return Err(Error::Domain {
                name: "times",
                value: dt,
                expected: "strictly increasing with a uniform step",
            });
        }
        let mut traj = Self {
            times,
            inputs,
            states,
            energy: 0.0,
            hold,
        };
        traj.energy = energy_of(&traj);
        Ok(traj)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.times[1] - self.times[0]
    }

    /// Index of the grid point nearest to `t`.
    pub fn index_at(&self, t: f64) -> usize {
        let k = ((t - self.times[0]) / self.dt()).round();
        (k.max(0.0) as usize).min(self.len() - 1)
    }

    pub fn state_at(&self, t: f64) -> &S {
        &self.states[self.index_at(t)]
    }
}

impl Trajectory<State4> {
    /// CSV with header `t,u,x1,dx1,x2,dx2`, shortest round-trip floats.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "u", "x1", "dx1", "x2", "dx2"])?;
        for ((t, u), z) in self.times.iter().zip(&self.inputs).zip(&self.states) {
            w.write_record([
                t.to_string(),
                u.to_string(),
                z.x1.to_string(),
                z.dx1.to_string(),
                z.x2.to_string(),
                z.dx2.to_string(),
            ])?;
        }
        w.flush()
    }
}

/// `||u||^2` approximated under the trajectory's hold convention.
pub fn energy_of<S>(traj: &Trajectory<S>) -> f64 {
    let n = traj.times.len();
    if n < 2 {
        return 0.0;
    }
    match traj.hold {
        Hold::ZeroOrder => (0..n - 1)
            .map(|k| traj.inputs[k].powi(2) * (traj.times[k + 1] - traj.times[k]))
            .sum(),
        Hold::Sampled => (0..n - 1)
            .map(|k| {
                0.5 * (traj.inputs[k].powi(2) + traj.inputs[k + 1].powi(2))
                    * (traj.times[k + 1] - traj.times[k])
            })
            .sum(),
    }
}

/// Exact one-step maps of both subsystems over a hold interval `dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMatrices {
    pub dt: f64,
    pub phi: [Matrix2<f64>; 2],
    pub gamma: [Vector2<f64>; 2],
}

impl StepMatrices {
    pub fn step(&self, z: &State4, u: f64) -> State4 {
        let z1 = self.phi[0] * Vector2::from(z.subsystem(0)) + self.gamma[0] * u;
        let z2 = self.phi[1] * Vector2::from(z.subsystem(1)) + self.gamma[1] * u;
        State4::new(z1[0], z1[1], z2[0], z2[1])
    }
}

/// Zero-order-hold discretization of `x'' = pi^2 x + v pi^2 u`.
///
/// `phi = [[cosh, sinh / pi], [pi sinh, cosh]]` at `pi dt`, and
/// `gamma = v (cosh - 1, pi sinh)`.
pub fn discretize(sys: &CoupledSystem, dt: f64) -> Result<StepMatrices> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain {
            name: "dt",
            value: dt,
            expected: "(0, inf)",
        });
    }
    let one = |pi: f64, v: f64| {
        let (sh, ch) = ((pi * dt).sinh(), (pi * dt).cosh());
        // cosh(x) - 1 = 2 sinh(x/2)^2 without cancellation
        let ch_m1 = 2.0 * (0.5 * pi * dt).sinh().powi(2);
        (
            Matrix2::new(ch, sh / pi, pi * sh, ch),
            Vector2::new(v * ch_m1, v * pi * sh),
        )
    };
    let (p1, g1) = one(sys.pi1(), sys.v1());
    let (p2, g2) = one(sys.pi2(), sys.v2());
    Ok(StepMatrices {
        dt,
        phi: [p1, p2],
        gamma: [g1, g2],
    })
}

/// Forward simulation from `z0` with inputs held for `dt` each.
///
/// Returns `inputs.len() + 1` samples starting at `t = 0`; the final input
/// sample is recorded as 0.
pub fn simulate(sys: &CoupledSystem, inputs: &[f64], z0: State4, dt: f64) -> Result<Trajectory> {
    let steps = discretize(sys, dt)?;
    let mut states = Vec::with_capacity(inputs.len() + 1);
    states.push(z0);
    let mut z = z0;
    for &u in inputs {
        z = steps.step(&z, u);
        states.push(z);
    }
    let times = (0..=inputs.len()).map(|k| k as f64 * dt).collect();
    let mut u = inputs.to_vec();
    u.push(0.0);
    Trajectory::from_samples(times, u, states, Hold::ZeroOrder)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisProblem {
    pub system: CoupledSystem,
    pub target: State4,
    /// Two-sided horizon `T`; the input lives on `[-T, T]`.
    pub horizon: f64,
    pub dt: f64,
}

impl SynthesisProblem {
    pub fn new(system: CoupledSystem, target: State4, horizon: f64, dt: f64) -> Result<Self> {
        check_grid(horizon, dt)?;
        if target.as_array().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState);
        }
        Ok(Self {
            system,
            target,
            horizon,
            dt,
        })
    }

    /// `T = 8 / min(pi)` with `steps` hold intervals per half-horizon.
    pub fn with_default_horizon(system: CoupledSystem, target: State4, steps: usize) -> Result<Self> {
        let horizon = default_horizon(&system);
        Self::new(system, target, horizon, horizon / steps as f64)
    }
}

pub fn default_horizon(sys: &CoupledSystem) -> f64 {
    DEFAULT_HORIZON_FACTOR / sys.pi1().min(sys.pi2())
}

fn check_grid(horizon: f64, dt: f64) -> Result<()> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::Domain {
            name: "horizon",
            value: horizon,
            expected: "(0, inf)",
        });
    }
    if !(dt > 0.0 && dt <= horizon / 50.0) {
        return Err(Error::Domain {
            name: "dt",
            value: dt,
            expected: "(0, horizon / 50]",
        });
    }
    Ok(())
}

/// Number of hold intervals per half-horizon and the step that makes it exact.
fn grid(horizon: f64, dt: f64) -> (usize, f64) {
    let n = (horizon / dt).round().max(1.0) as usize;
    (n, horizon / n as f64)
}

/// Scalar mode `xi' = rate xi + gain u`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Mode {
    rate: f64,
    gain: f64,
}

impl Mode {
    /// State increment per unit input over one hold interval.
    fn input_step(&self, dt: f64) -> f64 {
        self.gain * (self.rate * dt).exp_m1() / self.rate
    }
}

/// Minimum-norm piecewise-constant input moving every mode from `start` to
/// `end` in `n` steps, plus the modal states along the way and the
/// propagation residual of each mode at its free end.
struct Segment {
    inputs: Vec<f64>,
    /// `states[j][k]`, mode `j` at grid point `k`.
    states: Vec<Vec<f64>>,
    /// Stable modes: mismatch at the right end; unstable: at the left end.
    residual: Vec<f64>,
}

fn solve_segment(modes: &[Mode], start: &[f64], end: &[f64], n: usize, dt: f64) -> Result<Segment> {
    let m = modes.len();
    let len = n as f64 * dt;
    let mut rows = DMatrix::<f64>::zeros(m, n);
    let mut rhs = DVector::<f64>::zeros(m);
    for (j, mode) in modes.iter().enumerate() {
        let c = mode.input_step(dt);
        if mode.rate < 0.0 {
            // end = e^{rate L} start + sum_k e^{rate (n-1-k) dt} c u_k
            for k in 0..n {
                rows[(j, k)] = (mode.rate * (n - 1 - k) as f64 * dt).exp() * c;
            }
            rhs[j] = end[j] - (mode.rate * len).exp() * start[j];
        } else {
            // e^{-rate L} end - start = sum_k e^{-rate (k+1) dt} c u_k
            for k in 0..n {
                rows[(j, k)] = (-mode.rate * (k + 1) as f64 * dt).exp() * c;
            }
            rhs[j] = (-mode.rate * len).exp() * end[j] - start[j];
        }
    }

    let svd = rows.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let u = svd
        .solve(&rhs, RANK_RTOL * smax)
        .map_err(|_| Error::InfeasibleDiscretization)?;
    let fit = &rows * &u - &rhs;
    if fit.amax() > 1e-8 * (1.0 + rhs.amax()) {
        return Err(Error::InfeasibleDiscretization);
    }

    let mut states = Vec::with_capacity(m);
    let mut residual = Vec::with_capacity(m);
    for (j, mode) in modes.iter().enumerate() {
        let c = mode.input_step(dt);
        let mut xi = vec![0.0; n + 1];
        if mode.rate < 0.0 {
            let a = (mode.rate * dt).exp();
            xi[0] = start[j];
            for k in 0..n {
                xi[k + 1] = a * xi[k] + c * u[k];
            }
            residual.push(xi[n] - end[j]);
            xi[n] = end[j];
        } else {
            let a_inv = (-mode.rate * dt).exp();
            xi[n] = end[j];
            for k in (0..n).rev() {
                xi[k] = a_inv * (xi[k + 1] - c * u[k]);
            }
            residual.push(xi[0] - start[j]);
            xi[0] = start[j];
        }
        states.push(xi);
    }
    Ok(Segment {
        inputs: u.iter().copied().collect(),
        states,
        residual,
    })
}

/// Two-sided (or past-only) solve in modal coordinates.
///
/// Returns grid times, inputs (with a trailing 0), modal states per grid
/// point, and the modal residuals at `-T`, `0`, `T`.
struct ModalSolution {
    times: Vec<f64>,
    inputs: Vec<f64>,
    modal: Vec<Vec<f64>>,
    residual_start: Vec<f64>,
    residual_target: Vec<f64>,
    residual_end: Vec<f64>,
}

fn solve_modal(modes: &[Mode], target: &[f64], horizon: f64, dt: f64, two_sided: bool) -> Result<ModalSolution> {
    let m = modes.len();
    let (n, step) = grid(horizon, dt);
    let zero = vec![0.0; m];
    let past = solve_segment(modes, &zero, target, n, step)?;

    let mut residual_start = vec![0.0; m];
    let mut residual_target = vec![0.0; m];
    let mut residual_end = vec![0.0; m];
    for j in 0..m {
        if modes[j].rate < 0.0 {
            residual_target[j] = past.residual[j];
        } else {
            residual_start[j] = past.residual[j];
        }
    }

    let mut inputs = past.inputs;
    let mut modal: Vec<Vec<f64>> = (0..=n)
        .map(|k| (0..m).map(|j| past.states[j][k]).collect())
        .collect();
    let segments = if two_sided {
        let future = solve_segment(modes, target, &zero, n, step)?;
        for j in 0..m {
            if modes[j].rate < 0.0 {
                residual_end[j] = future.residual[j];
            } else {
                residual_target[j] = future.residual[j];
            }
        }
        inputs.extend(future.inputs);
        modal.extend((1..=n).map(|k| (0..m).map(|j| future.states[j][k]).collect()));
        2
    } else {
        1
    };
    inputs.push(0.0);
    let times = (0..=segments * n)
        .map(|k| -horizon + k as f64 * step)
        .collect();
    Ok(ModalSolution {
        times,
        inputs,
        modal,
        residual_start,
        residual_target,
        residual_end,
    })
}

fn coupled_modes(tf: &ModalTransform, sys: &CoupledSystem) -> [Mode; 4] {
    let [p1, p2] = sys.pis();
    let b1 = tf.modal_input(0, sys.v1());
    let b2 = tf.modal_input(1, sys.v2());
    [
        Mode { rate: p1, gain: b1[0] },
        Mode { rate: p2, gain: b2[0] },
        Mode { rate: -p1, gain: b1[1] },
        Mode { rate: -p2, gain: b2[1] },
    ]
}

fn check_residual(residual: f64, tolerance: f64) -> Result<()> {
    if residual.is_finite() && residual <= tolerance {
        Ok(())
    } else {
        Err(Error::HorizonTooShort {
            residual,
            tolerance,
        })
    }
}

/// Minimum-energy trajectory through `problem.target` at `t = 0` that is at
/// rest at `-T` and `T`.
pub fn synthesize_min_energy(problem: &SynthesisProblem) -> Result<Trajectory> {
    check_grid(problem.horizon, problem.dt)?;
    let sys = &problem.system;
    let tf = build_transform(sys);
    let modes = coupled_modes(&tf, sys);
    let target = tf.to_modal(&problem.target);
    let sol = solve_modal(&modes, &target.0, problem.horizon, problem.dt, true)?;

    let to_state = |v: &[f64]| tf.from_modal(&ModalCoords([v[0], v[1], v[2], v[3]]));
    let tnorm = problem.target.norm();
    check_residual(to_state(&sol.residual_target).norm(), ENDPOINT_TOL * (1.0 + tnorm))?;
    check_residual(to_state(&sol.residual_start).norm(), ENDPOINT_TOL)?;
    check_residual(to_state(&sol.residual_end).norm(), ENDPOINT_TOL)?;

    let states = sol.modal.iter().map(|v| to_state(v)).collect();
    Trajectory::from_samples(sol.times, sol.inputs, states, Hold::ZeroOrder)
}

/// Boundary conditions for [`synthesize_pair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairBoundary {
    /// From rest at `-T` to the target at `0`.
    ReachFromRest,
    /// From rest at `-T`, through the target at `0`, back to rest at `T`.
    TwoSided,
}

/// The same solver applied to a first-order pair `xi' = -alpha xi + beta u`.
pub fn synthesize_pair(
    pair: &FirstOrderPair,
    target: [f64; 2],
    horizon: f64,
    dt: f64,
    boundary: PairBoundary,
) -> Result<Trajectory<[f64; 2]>> {
    check_grid(horizon, dt)?;
    if target.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState);
    }
    let modes = [
        Mode { rate: -pair.alpha1(), gain: pair.beta1() },
        Mode { rate: -pair.alpha2(), gain: pair.beta2() },
    ];
    let two_sided = boundary == PairBoundary::TwoSided;
    let sol = solve_modal(&modes, &target, horizon, dt, two_sided)?;
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tnorm = norm(&target);
    check_residual(norm(&sol.residual_target), ENDPOINT_TOL * (1.0 + tnorm))?;
    check_residual(norm(&sol.residual_start), ENDPOINT_TOL)?;
    check_residual(norm(&sol.residual_end), ENDPOINT_TOL)?;
    let states = sol.modal.iter().map(|v| [v[0], v[1]]).collect();
    Trajectory::from_samples(sol.times, sol.inputs, states, Hold::ZeroOrder)
}
