//! Rigid body balanced on one principal axis by a single force acting at
//! distance `l` below its centre of gravity.
//!
//! Linearized about upright, the two tilt axes follow
//!
//! ```txt
//! phi1'' = pi1^2 phi1 + pi1^2 F2 / (m g0)
//! phi2'' = pi2^2 phi2 - pi2^2 F1 / (m g0)
//! ```
//!
//! with `pi_i^2 = l m g0 / I_i`. When the two horizontal force components are
//! linearly dependent this is the coupled plant with gains `(+1, -1)`.

use crate::error::{Error, Result};
use crate::reachability::{paper_volume_measure, ratio_objective, SILVER_RATIO};
use crate::systems::CoupledSystem;

pub const STANDARD_GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PendulumParams {
    pub i1: f64,
    pub i2: f64,
    pub mass: f64,
    pub arm: f64,
    pub g0: f64,
}

impl PendulumParams {
    pub fn new(i1: f64, i2: f64, mass: f64, arm: f64, g0: f64) -> Result<Self> {
        let p = Self {
            i1,
            i2,
            mass,
            arm,
            g0,
        };
        p.validate()?;
        Ok(p)
    }

    /// With `g0 = 9.81`.
    pub fn earth(i1: f64, i2: f64, mass: f64, arm: f64) -> Result<Self> {
        Self::new(i1, i2, mass, arm, STANDARD_GRAVITY)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("i1", self.i1),
            ("i2", self.i2),
            ("mass", self.mass),
            ("arm", self.arm),
            ("g0", self.g0),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidPendulumParameter { name, value });
            }
        }
        Ok(())
    }

    fn with_inertia(&self, i1: f64, i2: f64) -> Self {
        Self { i1, i2, ..*self }
    }
}

/// `pi_i = sqrt(l m g0 / I_i)`, gains `(+1, -1)`.
pub fn linearize(params: &PendulumParams) -> Result<CoupledSystem> {
    params.validate()?;
    let torque = params.arm * params.mass * params.g0;
    CoupledSystem::new(
        (torque / params.i1).sqrt(),
        (torque / params.i2).sqrt(),
        1.0,
        -1.0,
    )
}

/// `I1 / I2 = (1 + sqrt(2))^2 = 3 + 2 sqrt(2)`, for `I1 >= I2`.
pub fn optimal_inertia_ratio() -> f64 {
    SILVER_RATIO * SILVER_RATIO
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignReport {
    pub params: PendulumParams,
    pub pi1: f64,
    pub pi2: f64,
    pub epsilon: f64,
    pub objective: f64,
    pub paper_volume_measure: f64,
    /// Optimal `I1` with `I2` held.
    pub optimal_i1: f64,
    /// Optimal `I2` with `I1` held.
    pub optimal_i2: f64,
    /// Volume ratio optimal/current when the smaller inertia (the faster
    /// axis) is held; `None` when the current volume is zero.
    pub gain_factor: Option<f64>,
    /// Volume ratio optimal/current with `I2` held.
    pub gain_holding_i2: Option<f64>,
    /// Volume ratio optimal/current with `I1` held.
    pub gain_holding_i1: Option<f64>,
    pub degenerate: bool,
}

fn volume(params: &PendulumParams) -> Result<f64> {
    Ok(paper_volume_measure(&linearize(params)?))
}

fn gain(optimal: f64, current: f64) -> Option<f64> {
    (current > 0.0).then(|| optimal / current)
}

/// Silver-ratio redesign of the inertias.
///
/// Axes are compared in the caller's order: if `I1 >= I2` the larger inertia
/// stays on axis 1, otherwise on axis 2, so no axes are silently swapped.
pub fn recommend(params: &PendulumParams) -> Result<DesignReport> {
    let sys = linearize(params)?;
    let [pi1, pi2] = sys.pis();
    let epsilon = pi1.min(pi2) / pi1.max(pi2);
    let ratio = optimal_inertia_ratio();
    let axis1_heavier = params.i1 >= params.i2;
    let (optimal_i1, optimal_i2) = if axis1_heavier {
        (ratio * params.i2, params.i1 / ratio)
    } else {
        (params.i2 / ratio, ratio * params.i1)
    };

    let current = paper_volume_measure(&sys);
    let hold_i2 = volume(&params.with_inertia(optimal_i1, params.i2))?;
    let hold_i1 = volume(&params.with_inertia(params.i1, optimal_i2))?;
    let gain_holding_i2 = gain(hold_i2, current);
    let gain_holding_i1 = gain(hold_i1, current);
    let gain_factor = if axis1_heavier {
        gain_holding_i2
    } else {
        gain_holding_i1
    };

    Ok(DesignReport {
        params: *params,
        pi1,
        pi2,
        epsilon,
        objective: ratio_objective(epsilon)?,
        paper_volume_measure: current,
        optimal_i1,
        optimal_i2,
        gain_factor,
        gain_holding_i2,
        gain_holding_i1,
        degenerate: sys.is_degenerate(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn linearize_example() {
        let p = PendulumParams::earth(0.01, 0.02, 1.0, 0.1).unwrap();
        let s = linearize(&p).unwrap();
        assert!((s.pi1() - 98.1f64.sqrt()).abs() < 1e-12);
        assert!((s.pi1() - 9.904_544).abs() < 1e-6);
        assert_eq!(s.gains(), [1.0, -1.0]);
    }

    #[test]
    fn equal_inertias_degenerate() {
        let s = linearize(&PendulumParams::earth(0.3, 0.3, 2.0, 0.5).unwrap()).unwrap();
        assert_eq!(s.pi1(), s.pi2());
        let r = recommend(&PendulumParams::earth(0.3, 0.3, 2.0, 0.5).unwrap()).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.paper_volume_measure, 0.0);
        assert_eq!(r.gain_factor, None);
    }

    #[test]
    fn arm_mass_product_invariance() {
        let a = linearize(&PendulumParams::earth(0.2, 0.1, 3.0, 0.4).unwrap()).unwrap();
        let b = linearize(&PendulumParams::earth(0.2, 0.1, 1.5, 0.8).unwrap()).unwrap();
        assert!((a.pi1() - b.pi1()).abs() < 1e-15);
        assert!((a.pi2() - b.pi2()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(matches!(
            PendulumParams::earth(0.0, 1.0, 1.0, 1.0),
            Err(Error::InvalidPendulumParameter { name: "i1", .. })
        ));
        assert!(PendulumParams::new(1.0, 1.0, 1.0, 1.0, -9.81).is_err());
    }

    #[test]
    fn optimal_ratio_value() {
        let r = optimal_inertia_ratio();
        assert!((r - 5.828_427_124_746_19).abs() < 1e-13);
        assert!((r.sqrt() - SILVER_RATIO).abs() < 1e-15);
        let p = PendulumParams::earth(0.01 * r, 0.01, 1.0, 0.1).unwrap();
        let s = linearize(&p).unwrap();
        assert!((s.pi2() / s.pi1() - SILVER_RATIO).abs() < 1e-12);
    }

    #[test]
    fn already_optimal() {
        let r = recommend(&PendulumParams::earth(0.01, 0.01 / optimal_inertia_ratio(), 1.0, 0.1).unwrap())
            .unwrap();
        assert!((r.gain_factor.unwrap() - 1.0).abs() < 1e-12);
        assert!((r.gain_holding_i1.unwrap() - 1.0).abs() < 1e-12);
        assert!((r.optimal_i1 - 0.01).abs() < 1e-15);
    }

    #[test]
    fn ratio_four_against_optimum() {
        let p = PendulumParams::earth(0.04, 0.01, 1.0, 0.1).unwrap();
        let r = recommend(&p).unwrap();
        assert!((r.epsilon - 0.5).abs() < 1e-15);
        assert!((r.objective - 1.0 / 6.0).abs() < 1e-15);
        // Holding I2 keeps the fast time constant: gain is (f* / f(1/2))^2.
        let shape = (3.0 - 2.0 * 2f64.sqrt()) * 6.0;
        assert!((r.gain_holding_i2.unwrap() - shape * shape).abs() < 1e-12);
        // Holding I1 raises pi2 by sqrt(ratio / 4); the measure carries pi2^4.
        let speedup = (optimal_inertia_ratio() / 4.0).powi(2);
        assert!((r.gain_holding_i1.unwrap() - shape * shape * speedup).abs() < 1e-11);
        assert_eq!(r.gain_factor, r.gain_holding_i2);
    }

    #[test]
    fn reversed_axes_keep_caller_order() {
        let p = PendulumParams::earth(0.01, 0.04, 1.0, 0.1).unwrap();
        let r = recommend(&p).unwrap();
        assert!(r.optimal_i1 < p.i2);
        let s = linearize(&p.with_inertia(r.optimal_i1, p.i2)).unwrap();
        assert!((s.pi1() / s.pi2() - SILVER_RATIO).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn pi_monotonicity(i1 in 0.01..10.0f64, i2 in 0.01..10.0f64, m in 0.1..10.0f64,
                           l in 0.01..2.0f64, k in 1.01..3.0f64) {
            let base = PendulumParams::earth(i1, i2, m, l).unwrap();
            let s0 = linearize(&base).unwrap();
            let heavier = linearize(&PendulumParams { i1: i1 * k, ..base }).unwrap();
            prop_assert!(heavier.pi1() < s0.pi1());
            let longer = linearize(&PendulumParams { arm: l * k, ..base }).unwrap();
            prop_assert!(longer.pi1() > s0.pi1() && longer.pi2() > s0.pi2());
            let massive = linearize(&PendulumParams { mass: m * k, ..base }).unwrap();
            prop_assert!(massive.pi2() > s0.pi2());
            let stronger = linearize(&PendulumParams { g0: 9.81 * k, ..base }).unwrap();
            prop_assert!(stronger.pi1() > s0.pi1());
        }

        #[test]
        fn recommendation_round_trip(i1 in 0.01..10.0f64, i2 in 0.01..10.0f64) {
            let p = PendulumParams::earth(i1, i2, 1.0, 0.1).unwrap();
            let r = recommend(&p).unwrap();
            let s = linearize(&p.with_inertia(r.optimal_i1, i2)).unwrap();
            let ratio = s.pi1().max(s.pi2()) / s.pi1().min(s.pi2());
            prop_assert!((ratio - SILVER_RATIO).abs() < 1e-12);
            let s = linearize(&p.with_inertia(i1, r.optimal_i2)).unwrap();
            let ratio = s.pi1().max(s.pi2()) / s.pi1().min(s.pi2());
            prop_assert!((ratio - SILVER_RATIO).abs() < 1e-12);
        }
    }
}
