//! Plant descriptions shared by every other module.
//!
//! The coupled plant is two unstable second-order systems driven by one
//! scalar input `u`:
//!
//! ```txt
//! x1'' = pi1^2 x1 + v1 pi1^2 u
//! x2'' = pi2^2 x2 + v2 pi2^2 u
//! ```
//!
//! Its stable and unstable modal subspaces are both instances of the
//! first-order pair
//!
//! ```txt
//! xi1' = -alpha1 xi1 + beta1 u
//! xi2' = -alpha2 xi2 + beta2 u
//! ```
//!
//! Note the sign convention: `alpha > 0` is a *stable* pole.

use crate::error::{Error, Result};

/// Two unstable second-order plants with a common input.
///
/// The ordering `pi1 <= pi2` is not imposed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledSystem {
    pi1: f64,
    pi2: f64,
    v1: f64,
    v2: f64,
}

impl CoupledSystem {
    pub fn new(pi1: f64, pi2: f64, v1: f64, v2: f64) -> Result<Self> {
        for (name, value) in [("pi1", pi1), ("pi2", pi2)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidTimeConstant { name, value });
            }
        }
        for (name, value) in [("v1", v1), ("v2", v2)] {
            if !value.is_finite() || value == 0.0 {
                return Err(Error::InvalidGain { name, value });
            }
        }
        Ok(Self { pi1, pi2, v1, v2 })
    }

    /// Unit-gain plant (`v1 = v2 = 1`).
    pub fn unit_gain(pi1: f64, pi2: f64) -> Result<Self> {
        Self::new(pi1, pi2, 1.0, 1.0)
    }

    pub fn pi1(&self) -> f64 {
        self.pi1
    }

    pub fn pi2(&self) -> f64 {
        self.pi2
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }

    pub fn pis(&self) -> [f64; 2] {
        [self.pi1, self.pi2]
    }

    pub fn gains(&self) -> [f64; 2] {
        [self.v1, self.v2]
    }

    /// Equal time constants: the common input cannot separate the two axes.
    pub fn is_degenerate(&self) -> bool {
        self.pi1 == self.pi2
    }

    /// Swap the roles of the two subsystems.
    pub fn swapped(&self) -> Self {
        Self {
            pi1: self.pi2,
            pi2: self.pi1,
            v1: self.v2,
            v2: self.v1,
        }
    }

    /// Modal input gain magnitude `|v_i| pi_i sqrt(1 + pi_i^2) / 2` of subsystem `i` (0 or 1).
    pub fn modal_gain(&self, i: usize) -> f64 {
        let (pi, v) = match i {
            0 => (self.pi1, self.v1),
            1 => (self.pi2, self.v2),
            _ => panic!("subsystem index {i} out of range"),
        };
        v * pi * (1.0 + pi * pi).sqrt() / 2.0
    }

    /// Stable and unstable modal pairs, in that order.
    ///
    /// Both pairs carry `|beta_i| = |v_i| pi_i sqrt(1 + pi_i^2) / 2`. The
    /// unstable pair (`alpha = (-pi1, -pi2)`) keeps the `+` sign of the modal
    /// input column, the stable pair (`alpha = (pi1, pi2)`) the `-` sign.
    pub fn modal_pairs(&self) -> ModalPairs {
        let b1 = self.modal_gain(0);
        let b2 = self.modal_gain(1);
        ModalPairs {
            stable: FirstOrderPair {
                alpha1: self.pi1,
                alpha2: self.pi2,
                beta1: -b1,
                beta2: -b2,
            },
            unstable: FirstOrderPair {
                alpha1: -self.pi1,
                alpha2: -self.pi2,
                beta1: b1,
                beta2: b2,
            },
        }
    }
}

/// Result of [`CoupledSystem::modal_pairs`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModalPairs {
    pub stable: FirstOrderPair,
    pub unstable: FirstOrderPair,
}

/// Physical state `(x1, x1', x2, x2')`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State4 {
    pub x1: f64,
    pub dx1: f64,
    pub x2: f64,
    pub dx2: f64,
}

impl State4 {
    pub const ZERO: State4 = State4 {
        x1: 0.0,
        dx1: 0.0,
        x2: 0.0,
        dx2: 0.0,
    };

    pub fn new(x1: f64, dx1: f64, x2: f64, dx2: f64) -> Self {
        Self { x1, dx1, x2, dx2 }
    }

    /// Like [`State4::new`] but rejects non-finite entries.
    pub fn try_new(x1: f64, dx1: f64, x2: f64, dx2: f64) -> Result<Self> {
        let s = Self::new(x1, dx1, x2, dx2);
        if s.as_array().iter().all(|v| v.is_finite()) {
            Ok(s)
        } else {
            Err(Error::NonFiniteState)
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x1, self.dx1, self.x2, self.dx2]
    }

    pub fn norm(&self) -> f64 {
        self.as_array().iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.x1 * s, self.dx1 * s, self.x2 * s, self.dx2 * s)
    }

    /// Subsystem `i` (0 or 1) as `(x_i, x_i')`.
    pub fn subsystem(&self, i: usize) -> [f64; 2] {
        match i {
            0 => [self.x1, self.dx1],
            1 => [self.x2, self.dx2],
            _ => panic!("subsystem index {i} out of range"),
        }
    }
}

impl From<[f64; 4]> for State4 {
    fn from(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

impl From<State4> for [f64; 4] {
    fn from(s: State4) -> Self {
        s.as_array()
    }
}

/// Auxiliary first-order pair `xi' = -alpha xi + beta u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderPair {
    alpha1: f64,
    alpha2: f64,
    beta1: f64,
    beta2: f64,
}

impl FirstOrderPair {
    pub fn new(alpha1: f64, alpha2: f64, beta1: f64, beta2: f64) -> Result<Self> {
        for (name, value) in [("alpha1", alpha1), ("alpha2", alpha2)] {
            if !value.is_finite() || value == 0.0 {
                return Err(Error::InvalidPole { name, value });
            }
        }
        for (name, value) in [("beta1", beta1), ("beta2", beta2)] {
            if !value.is_finite() || value == 0.0 {
                return Err(Error::InvalidGain { name, value });
            }
        }
        Ok(Self {
            alpha1,
            alpha2,
            beta1,
            beta2,
        })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }

    pub fn beta2(&self) -> f64 {
        self.beta2
    }

    pub fn alphas(&self) -> [f64; 2] {
        [self.alpha1, self.alpha2]
    }

    pub fn betas(&self) -> [f64; 2] {
        [self.beta1, self.beta2]
    }

    pub fn classify(&self) -> StabilityClass {
        classify(self)
    }

    /// Equal pole magnitudes with equal signs make the Gramian rank one.
    pub fn has_equal_poles(&self) -> bool {
        self.alpha1 == self.alpha2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    BothStable,
    BothUnstable,
    Mixed,
}

impl StabilityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            StabilityClass::BothStable => "both_stable",
            StabilityClass::BothUnstable => "both_unstable",
            StabilityClass::Mixed => "mixed",
        }
    }
}

pub fn classify(sys: &FirstOrderPair) -> StabilityClass {
    match (sys.alpha1 > 0.0, sys.alpha2 > 0.0) {
        (true, true) => StabilityClass::BothStable,
        (false, false) => StabilityClass::BothUnstable,
        _ => StabilityClass::Mixed,
    }
}

pub fn modal_pairs(sys: &CoupledSystem) -> (FirstOrderPair, FirstOrderPair) {
    let p = sys.modal_pairs();
    (p.unstable, p.stable)
}
