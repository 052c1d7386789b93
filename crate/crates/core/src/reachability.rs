//! The four-dimensional unit-energy set of the coupled plant, its volume, and
//! the time-constant ratio that maximizes it.
//!
//! In grouped modal coordinates `eta = (u1, u2, s1, s2)` the set is
//!
//! ```txt
//! (u1, u2)^T P^-1 (u1, u2) + (s1, s2)^T P^-1 (s1, s2) <= 1
//! ```
//!
//! where `P` is the Gramian of the stable modal pair (the unstable pair has
//! the same Gramian after time reversal). Its volume is proportional to
//! `det(P) det(T1) det(T2) = (pi1 pi2 / 4 * (pi1 - pi2) / (pi1 + pi2))^2`
//! for unit gains, which depends on the ratio `eps = pi1 / pi2` through
//! `eps (1 - eps) / (1 + eps)`, maximized at `eps = sqrt(2) - 1`.

use nalgebra::{DMatrix, Matrix2, Matrix4, Vector2};
use twofloat::TwoFloat;

use crate::decomposition::{build_transform, ModalCoords, ModalTransform};
use crate::error::{Error, Result};
use crate::golden::{parabolic_vertex, GoldenSection};
use crate::gramian::{dd_div, det_dd, unit_ball_volume, Frame, Gramian2, SetDescription, SetKind};
use crate::systems::{CoupledSystem, State4};

/// The silver ratio `1 + sqrt(2)`.
pub const SILVER_RATIO: f64 = 1.0 + std::f64::consts::SQRT_2;

/// `P`, the Gramian of either modal pair.
///
/// With gains, entry `(i, j)` carries the factor `v_i v_j`.
pub fn p_matrix(sys: &CoupledSystem) -> Gramian2 {
    let [p1, p2] = sys.pis();
    let [v1, v2] = sys.gains();
    let r1 = (1.0 + p1 * p1).sqrt();
    let r2 = (1.0 + p2 * p2).sqrt();
    Gramian2::new(
        0.25 * v1 * v1 * p1 * (1.0 + p1 * p1) / 2.0,
        0.25 * v1 * v2 * p1 * p2 * r1 * r2 / (p1 + p2),
        0.25 * v2 * v2 * p2 * (1.0 + p2 * p2) / 2.0,
    )
}

fn block_diag(a: &Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(a);
    m
}

fn inverse_block(tf: &ModalTransform) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(&tf.block_inverse(0));
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(&tf.block_inverse(1));
    m
}

/// The set in physical coordinates, `{z : z^T Q^-1 z <= 1}` with
/// `Q^-1 = T^-T Pi^T diag(P^-1, P^-1) Pi T^-1`.
pub fn reachable_set(sys: &CoupledSystem) -> Result<SetDescription> {
    if sys.is_degenerate() {
        return Err(Error::DegenerateSystem(
            "equal time constants collapse the set to two dimensions",
        ));
    }
    let p = p_matrix(sys);
    let p_inv = p.inverse().ok_or(Error::DegenerateSystem(
        "time constants too close to separate numerically",
    ))?;
    let tf = build_transform(sys);
    let perm = tf.perm_matrix();
    let t = tf.block_matrix();
    let t_inv = inverse_block(&tf);

    let q = t * perm.transpose() * block_diag(&p.to_matrix()) * perm * t.transpose();
    let q_inv =
        t_inv.transpose() * perm.transpose() * block_diag(&p_inv.to_matrix()) * perm * t_inv;
    let to_dyn = |m: Matrix4<f64>| {
        let sym = 0.5 * (m + m.transpose());
        DMatrix::from_iterator(4, 4, sym.iter().copied())
    };
    Ok(SetDescription {
        kind: SetKind::Ellipsoid4,
        form: to_dyn(q),
        inverse_form: to_dyn(q_inv),
        frame: Frame::Physical,
    })
}

/// Modal energy `u^T P^-1 u + s^T P^-1 s` of a physical state.
///
/// This is the minimum input energy of a trajectory that starts and ends at
/// the origin and passes through `z`.
pub fn min_energy(sys: &CoupledSystem, z: &State4) -> Result<f64> {
    let p = p_matrix(sys);
    let eta = build_transform(sys).to_modal(z);
    Ok(p.inverse_quadratic_form(eta.unstable())? + p.inverse_quadratic_form(eta.stable())?)
}

/// Boundary state in the direction `w` of whitened modal space.
///
/// With `P = L L^T`, the state `z = T Pi^T (L w_u, L w_s) / |w|` has modal
/// energy exactly 1.
pub fn boundary_state(sys: &CoupledSystem, w: [f64; 4]) -> Result<State4> {
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Domain {
            name: "direction",
            value: norm,
            expected: "finite nonzero vectors",
        });
    }
    let p = p_matrix(sys);
    let chol = p.to_matrix().cholesky().ok_or(Error::DegenerateSystem(
        "P is not positive definite",
    ))?;
    let l = chol.l();
    let u = l * Vector2::new(w[0], w[1]) / norm;
    let s = l * Vector2::new(w[2], w[3]) / norm;
    let tf = build_transform(sys);
    Ok(tf.from_modal(&ModalCoords::from_parts([u[0], u[1]], [s[0], s[1]])))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeReport {
    pub p_matrix: Gramian2,
    /// `(pi1 pi2 / 4 * (pi1 - pi2) / (pi1 + pi2))^2 * v1^2 v2^2`.
    pub paper_volume_measure: f64,
    /// Lebesgue volume of the set, `pi^2 / 2 * det(P) * |det T|`.
    pub geometric_volume: f64,
    /// `min(pi) / max(pi)`.
    pub epsilon: f64,
    /// `eps (1 - eps) / (1 + eps)`.
    pub objective: f64,
    pub degenerate: bool,
}

/// Closed-form volume measure.
pub fn paper_volume_measure(sys: &CoupledSystem) -> f64 {
    let [p1, p2] = sys.pis();
    let [v1, v2] = sys.gains();
    let core = p1 * p2 / 4.0 * (p1 - p2) / (p1 + p2);
    core * core * v1 * v1 * v2 * v2
}

/// `det(P) det(T1) det(T2)`, the determinant route to the same measure.
pub fn determinant_volume_measure(sys: &CoupledSystem) -> f64 {
    let tf = build_transform(sys);
    p_matrix_det(sys) * tf.det_block(0) * tf.det_block(1)
}

/// `det P`, accumulated in double-double: for `pi1` near `pi2` the two
/// products in `P11 P22 - P12^2` cancel down to `(pi1 - pi2)^2`.
pub fn p_matrix_det(sys: &CoupledSystem) -> f64 {
    let [p1, p2] = sys.pis();
    let [v1, v2] = sys.gains();
    let g1 = TwoFloat::new_mul(v1, v1);
    let g2 = TwoFloat::new_mul(v2, v2);
    let q1 = TwoFloat::new_add(1.0, p1 * p1) + p1.mul_add(p1, -(p1 * p1));
    let q2 = TwoFloat::new_add(1.0, p2 * p2) + p2.mul_add(p2, -(p2 * p2));
    let sum = TwoFloat::new_add(p1, p2);
    let cross = TwoFloat::new_mul(p1, p2);
    det_dd(
        g1 * q1 * p1 / 8.0,
        dd_div(g1 * g2 * cross * cross * q1 * q2, sum * sum * 16.0),
        g2 * q2 * p2 / 8.0,
    )
}

pub fn volume_measures(sys: &CoupledSystem) -> VolumeReport {
    let [p1, p2] = sys.pis();
    let epsilon = p1.min(p2) / p1.max(p2);
    let p = p_matrix(sys);
    let tf = build_transform(sys);
    let degenerate = sys.is_degenerate();
    let geometric_volume = if degenerate {
        0.0
    } else {
        unit_ball_volume(4) * p_matrix_det(sys).max(0.0) * tf.det().abs()
    };
    VolumeReport {
        p_matrix: p,
        paper_volume_measure: paper_volume_measure(sys),
        geometric_volume,
        epsilon,
        objective: objective(epsilon),
        degenerate,
    }
}

fn objective(eps: f64) -> f64 {
    eps * (1.0 - eps) / (1.0 + eps)
}

/// `eps (1 - eps) / (1 + eps)` on `(0, 1]`.
pub fn ratio_objective(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Domain {
            name: "epsilon",
            value: epsilon,
            expected: "(0, 1]",
        });
    }
    Ok(objective(epsilon))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalRatio {
    /// `sqrt(2) - 1`, positive root of `eps^2 + 2 eps - 1 = 0`.
    pub epsilon_star: f64,
    /// `1 / epsilon_star = 1 + sqrt(2)`.
    pub delta_s: f64,
    /// Maximizer found numerically on `(1e-9, 1]`.
    pub searched: f64,
    pub max_objective: f64,
}

/// Lower end of the search bracket.
pub const SEARCH_LO: f64 = 1e-9;

/// Numerical maximizer of the ratio objective.
///
/// Golden-section search narrows the bracket; because the objective is flat
/// to rounding within about `1e-8` of the peak, the location is then refined
/// with two symmetric three-point parabolic fits.
pub fn search_optimal_ratio() -> f64 {
    let f = |e: f64| objective(e);
    let coarse = GoldenSection::default().maximize(f, SEARCH_LO, 1.0);
    let mut x = coarse.x;
    for h in [1e-4, 1e-6] {
        x = parabolic_vertex(f, x, h);
    }
    x.clamp(SEARCH_LO, 1.0)
}

pub fn optimal_ratio() -> OptimalRatio {
    // f'(eps) = 0  <=>  eps^2 + 2 eps - 1 = 0
    let epsilon_star = -1.0 + 2f64.sqrt();
    OptimalRatio {
        epsilon_star,
        // 1 / (sqrt(2) - 1), formed directly to avoid a rounded division.
        delta_s: SILVER_RATIO,
        searched: search_optimal_ratio(),
        max_objective: objective(epsilon_star),
    }
}

/// `n` samples `(k / n, f(k / n))`, `k = 1..=n`.
pub fn sweep_objective(n: usize) -> Result<Vec<(f64, f64)>> {
    if n < 2 {
        return Err(Error::Domain {
            name: "n",
            value: n as f64,
            expected: "n >= 2",
        });
    }
    Ok((1..=n)
        .map(|k| {
            let eps = k as f64 / n as f64;
            (eps, objective(eps))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gramian::gramian_closed_form;
    use proptest::prelude::*;

    fn sys(p1: f64, p2: f64) -> CoupledSystem {
        CoupledSystem::unit_gain(p1, p2).unwrap()
    }

    #[test]
    fn p_matrix_at_pi_1_2() {
        let p = p_matrix(&sys(1.0, 2.0));
        let s10 = 10f64.sqrt() / 6.0;
        assert!((p.w11 - 0.25).abs() < 1e-15);
        assert!((p.w12 - s10).abs() < 1e-15);
        assert!((p.w22 - 1.25).abs() < 1e-15);
        let stable = sys(1.0, 2.0).modal_pairs().stable;
        let w = gramian_closed_form(&stable).unwrap();
        assert!((w.w11 - p.w11).abs() < 1e-15);
        assert!((w.w12 - p.w12).abs() < 1e-15);
        assert!((w.w22 - p.w22).abs() < 1e-15);
    }

    #[test]
    fn p_matrix_singular_for_equal_time_constants() {
        assert!(p_matrix(&sys(1.0, 1.0)).is_singular());
    }

    #[test]
    fn p_matrix_gain_bilinearity() {
        let base = p_matrix(&sys(1.0, 2.0));
        let g = p_matrix(&CoupledSystem::new(1.0, 2.0, 2.0, 3.0).unwrap());
        assert!((g.w11 - 4.0 * base.w11).abs() < 1e-14);
        assert!((g.w12 - 6.0 * base.w12).abs() < 1e-14);
        assert!((g.w22 - 9.0 * base.w22).abs() < 1e-14);
    }

    #[test]
    fn reachable_set_membership() {
        let s = sys(1.0, 2.0);
        let set = reachable_set(&s).unwrap();
        assert_eq!(set.membership(&[0.0; 4]), 0.0);

        // Boundary point from an eigenvector of P, stable pair zero.
        let p = p_matrix(&s);
        let eig = nalgebra::SymmetricEigen::new(p.to_matrix());
        let v = eig.eigenvectors.column(1) * eig.eigenvalues[1].sqrt();
        let z = build_transform(&s).from_modal(&ModalCoords::from_parts([v[0], v[1]], [0.0, 0.0]));
        assert!((set.membership(&z.as_array()) - 1.0).abs() < 1e-10);

        assert!(matches!(
            reachable_set(&sys(1.5, 1.5)),
            Err(Error::DegenerateSystem(_))
        ));
    }

    #[test]
    fn form_and_inverse_agree() {
        let set = reachable_set(&CoupledSystem::new(0.7, 3.1, -2.0, 0.5).unwrap()).unwrap();
        let id = &set.form * &set.inverse_form;
        assert!((id - DMatrix::<f64>::identity(4, 4)).abs().max() < 1e-9);
    }

    #[test]
    fn boundary_state_has_unit_energy() {
        let s = sys(1.0, 2.0);
        let set = reachable_set(&s).unwrap();
        for w in [[1.0, 0.0, 0.0, 0.0], [0.3, -0.2, 0.9, 0.1], [0.0, 0.0, 0.0, 2.0]] {
            let z = boundary_state(&s, w).unwrap();
            assert!((set.membership(&z.as_array()) - 1.0).abs() < 1e-10);
            assert!((min_energy(&s, &z).unwrap() - 1.0).abs() < 1e-10);
        }
        assert!(boundary_state(&s, [0.0; 4]).is_err());
    }

    #[test]
    fn volume_at_silver_ratio() {
        let r = volume_measures(&sys(1.0, SILVER_RATIO));
        assert!((r.paper_volume_measure - 0.0625).abs() < 1e-15);
        assert!((r.epsilon - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let r = volume_measures(&sys(1.0, 1.0));
        assert_eq!(r.paper_volume_measure, 0.0);
        assert_eq!(r.geometric_volume, 0.0);
        assert!(r.degenerate);
    }

    #[test]
    fn geometric_volume_matches_set() {
        let s = CoupledSystem::new(0.5, 2.0, 1.5, -1.0).unwrap();
        let r = volume_measures(&s);
        let set = reachable_set(&s).unwrap();
        assert!((r.geometric_volume - set.volume()).abs() < 1e-10 * r.geometric_volume);
        // pi^2/2 times the determinant route.
        let expect = unit_ball_volume(4) * determinant_volume_measure(&s);
        assert!((r.geometric_volume - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn objective_values() {
        assert_eq!(ratio_objective(1.0).unwrap(), 0.0);
        assert!((ratio_objective(0.5).unwrap() - 1.0 / 6.0).abs() < 1e-16);
        let e = 2f64.sqrt() - 1.0;
        assert!((ratio_objective(e).unwrap() - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-15);
        for bad in [0.0, -0.1, 1.0 + 1e-12, f64::NAN] {
            assert!(matches!(ratio_objective(bad), Err(Error::Domain { .. })));
        }
    }

    #[test]
    fn optimum_two_routes() {
        let o = optimal_ratio();
        assert!((o.epsilon_star - 0.414_213_562_373_095_1).abs() < 1e-15);
        assert!((o.delta_s - 2.414_213_562_373_095).abs() < 1e-14);
        assert!((o.epsilon_star * o.delta_s - 1.0).abs() < 1e-15);
        assert!((o.searched - o.epsilon_star).abs() < 1e-10);
        // Grid oracle.
        let n = 1_000_000;
        let (best, _) = sweep_objective(n)
            .unwrap()
            .into_iter()
            .fold((0.0, f64::MIN), |acc, (e, f)| if f > acc.1 { (e, f) } else { acc });
        assert!((best - o.epsilon_star).abs() <= 2.0 / n as f64);
    }

    #[test]
    fn sweep_grid() {
        let s = sweep_objective(5).unwrap();
        let eps: Vec<f64> = s.iter().map(|p| p.0).collect();
        assert_eq!(eps, vec![0.2, 0.4, 0.6, 0.8, 1.0]);
        assert!(sweep_objective(1).is_err());
        let cap = 3.0 - 2.0 * 2f64.sqrt();
        assert!(sweep_objective(1000).unwrap().iter().all(|&(_, f)| (0.0..=cap).contains(&f)));
    }

    proptest! {
        #[test]
        fn volume_identity(p1 in 1e-3..10.0f64, p2 in 1e-3..10.0f64) {
            prop_assume!((p1 - p2).abs() > 1e-3);
            let s = sys(p1, p2);
            let closed = paper_volume_measure(&s);
            let det = determinant_volume_measure(&s);
            prop_assert!((closed - det).abs() <= 1e-10 * closed);
        }

        #[test]
        fn swap_symmetry(p1 in 0.01..10.0f64, p2 in 0.01..10.0f64,
                         v1 in 0.1..3.0f64, v2 in -3.0..-0.1f64) {
            let s = CoupledSystem::new(p1, p2, v1, v2).unwrap();
            let a = volume_measures(&s);
            let b = volume_measures(&s.swapped());
            prop_assert!((a.paper_volume_measure - b.paper_volume_measure).abs()
                <= 1e-12 * a.paper_volume_measure.max(1e-300));
            prop_assert!((a.geometric_volume - b.geometric_volume).abs()
                <= 1e-9 * a.geometric_volume.max(1e-300));
            prop_assert_eq!(a.epsilon, b.epsilon);
        }

        #[test]
        fn gain_scaling(p1 in 0.01..10.0f64, p2 in 0.01..10.0f64,
                        v1 in 0.1..5.0f64, v2 in 0.1..5.0f64) {
            let unit = paper_volume_measure(&sys(p1, p2));
            let g = paper_volume_measure(&CoupledSystem::new(p1, p2, v1, -v2).unwrap());
            prop_assert!((g - unit * v1 * v1 * v2 * v2).abs() <= 1e-12 * g.max(1e-300));
        }

        #[test]
        fn time_scaling(p1 in 0.01..10.0f64, p2 in 0.01..10.0f64, k in 0.05..20.0f64) {
            let base = paper_volume_measure(&sys(p1, p2));
            let scaled = paper_volume_measure(&sys(k * p1, k * p2));
            prop_assert!((scaled - k.powi(4) * base).abs() <= 1e-12 * scaled.max(1e-300));
        }

        #[test]
        fn concavity(a in 1e-6..1.0f64, b in 1e-6..1.0f64) {
            let mid = ratio_objective(0.5 * (a + b)).unwrap();
            let chord = 0.5 * (ratio_objective(a).unwrap() + ratio_objective(b).unwrap());
            prop_assert!(mid >= chord - 1e-12);
        }

        #[test]
        fn argmax_ignores_gains(p2 in 0.1..10.0f64, v1 in 0.1..5.0f64, v2 in 0.1..5.0f64) {
            let f = |p1: f64| paper_volume_measure(&CoupledSystem::new(p1, p2, v1, v2).unwrap());
            let r = GoldenSection { tol: 1e-10 * p2, max_iter: 200 }.maximize(f, 1e-9 * p2, p2);
            prop_assert!((r.x - p2 / SILVER_RATIO).abs() < 1e-6 * p2);
        }
    }
}
