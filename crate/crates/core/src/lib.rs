//! Controllability of two unstable second-order plants driven by one input.
//!
//! Controllability is measured by the volume of the set of states that a
//! trajectory starting and ending at rest can pass through with unit input
//! energy. The crate computes that set in closed form, checks it against
//! independent numerical routes (quadrature of the Gramian integral and
//! least-squares input synthesis), and finds the time-constant ratio that
//! maximizes its volume: `pi2 / pi1 = 1 + sqrt(2)`.
//!
//! ```
//! use silverreach::{optimal_ratio, volume_measures, CoupledSystem, SILVER_RATIO};
//!
//! let opt = optimal_ratio();
//! assert!((opt.delta_s - SILVER_RATIO).abs() < 1e-12);
//!
//! let sys = CoupledSystem::unit_gain(1.0, SILVER_RATIO).unwrap();
//! assert!((volume_measures(&sys).paper_volume_measure - 1.0 / 16.0).abs() < 1e-12);
//! ```

pub mod cli;
pub mod decomposition;
pub mod error;
pub mod golden;
pub mod gramian;
pub mod pendulum;
pub mod reachability;
pub mod synthesis;
pub mod systems;

pub use decomposition::{build_transform, ModalCoords, ModalTransform};
pub use error::{Error, Result};
pub use gramian::{
    ellipse_area_paper, gramian_closed_form, gramian_quadrature, min_energy_to_reach, mixed_set,
    EllipseArea, Gramian2, SetDescription, SetKind,
};
pub use pendulum::{linearize, optimal_inertia_ratio, recommend, DesignReport, PendulumParams};
pub use reachability::{
    boundary_state, optimal_ratio, p_matrix, ratio_objective, reachable_set, sweep_objective,
    volume_measures, OptimalRatio, VolumeReport, SILVER_RATIO,
};
pub use synthesis::{
    discretize, energy_of, simulate, synthesize_min_energy, synthesize_pair, PairBoundary,
    SynthesisProblem, Trajectory,
};
pub use systems::{classify, modal_pairs, CoupledSystem, FirstOrderPair, StabilityClass, State4};
