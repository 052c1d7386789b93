//! Similarity transform splitting each second-order plant into its unstable
//! (pole `+pi`) and stable (pole `-pi`) modes.
//!
//! Per subsystem `z_i = T_i zhat_i` with
//!
//! ```txt
//! T_i = 1/sqrt(1 + pi_i^2) * [[1, 1], [pi_i, -pi_i]]
//! ```
//!
//! so `zhat_i = (unstable, stable)`. The stacked modal vector
//! `(u1, s1, u2, s2)` is then permuted into grouped order
//! [`ModalCoords`] = `(u1, u2, s1, s2)`.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};

use crate::systems::{CoupledSystem, State4};

/// Grouped modal coordinates: unstable pair first, stable pair second.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModalCoords(pub [f64; 4]);

impl ModalCoords {
    pub fn from_parts(unstable: [f64; 2], stable: [f64; 2]) -> Self {
        Self([unstable[0], unstable[1], stable[0], stable[1]])
    }

    pub fn unstable(&self) -> [f64; 2] {
        [self.0[0], self.0[1]]
    }

    pub fn stable(&self) -> [f64; 2] {
        [self.0[2], self.0[3]]
    }
}

/// `T = diag(t1, t2)` together with the grouping permutation.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalTransform {
    pub t1: Matrix2<f64>,
    pub t2: Matrix2<f64>,
    /// `grouped[k] = stacked[perm[k]]`, zero based.
    pub perm: [usize; 4],
    pis: [f64; 2],
}

/// Unstable coordinates first: stacked `(u1, s1, u2, s2)` -> `(u1, u2, s1, s2)`.
pub const GROUPING: [usize; 4] = [0, 2, 1, 3];

pub fn subsystem_transform(pi: f64) -> Matrix2<f64> {
    let s = 1.0 / (1.0 + pi * pi).sqrt();
    Matrix2::new(s, s, s * pi, -s * pi)
}

/// Closed-form inverse of [`subsystem_transform`].
pub fn subsystem_transform_inverse(pi: f64) -> Matrix2<f64> {
    let s = (1.0 + pi * pi).sqrt() / 2.0;
    Matrix2::new(s, s / pi, s, -s / pi)
}

/// Physical drift `[[0, 1], [pi^2, 0]]` of one subsystem.
pub fn subsystem_drift(pi: f64) -> Matrix2<f64> {
    Matrix2::new(0.0, 1.0, pi * pi, 0.0)
}

/// Physical input column `(0, v pi^2)` of one subsystem.
pub fn subsystem_input(pi: f64, v: f64) -> Vector2<f64> {
    Vector2::new(0.0, v * pi * pi)
}

pub fn build_transform(sys: &CoupledSystem) -> ModalTransform {
    ModalTransform {
        t1: subsystem_transform(sys.pi1()),
        t2: subsystem_transform(sys.pi2()),
        perm: GROUPING,
        pis: sys.pis(),
    }
}

impl ModalTransform {
    pub fn new(sys: &CoupledSystem) -> Self {
        build_transform(sys)
    }

    pub fn pis(&self) -> [f64; 2] {
        self.pis
    }

    pub fn block(&self, i: usize) -> &Matrix2<f64> {
        match i {
            0 => &self.t1,
            1 => &self.t2,
            _ => panic!("subsystem index {i} out of range"),
        }
    }

    pub fn block_inverse(&self, i: usize) -> Matrix2<f64> {
        subsystem_transform_inverse(self.pis[i])
    }

    /// `det(t_i) = -2 pi_i / (1 + pi_i^2)`.
    pub fn det_block(&self, i: usize) -> f64 {
        let pi = self.pis[i];
        -2.0 * pi / (1.0 + pi * pi)
    }

    /// `det(T) = det(t1) det(t2)`.
    pub fn det(&self) -> f64 {
        self.det_block(0) * self.det_block(1)
    }

    /// `T = diag(t1, t2)` as a 4x4 matrix.
    pub fn block_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.t1);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&self.t2);
        m
    }

    /// Permutation matrix with `eta = Pi * zhat_stacked`.
    pub fn perm_matrix(&self) -> Matrix4<f64> {
        let mut m = Matrix4::zeros();
        for (row, &col) in self.perm.iter().enumerate() {
            m[(row, col)] = 1.0;
        }
        m
    }

    /// Physical state -> grouped modal coordinates, `eta = Pi T^-1 z`.
    pub fn to_modal(&self, z: &State4) -> ModalCoords {
        let mut stacked = [0.0; 4];
        for i in 0..2 {
            let zi = Vector2::from(z.subsystem(i));
            let h = self.block_inverse(i) * zi;
            stacked[2 * i] = h[0];
            stacked[2 * i + 1] = h[1];
        }
        let mut grouped = [0.0; 4];
        for (k, &src) in self.perm.iter().enumerate() {
            grouped[k] = stacked[src];
        }
        ModalCoords(grouped)
    }

    /// Inverse of [`ModalTransform::to_modal`], `z = T Pi^T eta`.
    pub fn from_modal(&self, eta: &ModalCoords) -> State4 {
        let mut stacked = [0.0; 4];
        for (k, &dst) in self.perm.iter().enumerate() {
            stacked[dst] = eta.0[k];
        }
        let z1 = self.t1 * Vector2::new(stacked[0], stacked[1]);
        let z2 = self.t2 * Vector2::new(stacked[2], stacked[3]);
        State4::new(z1[0], z1[1], z2[0], z2[1])
    }

    /// `t_i^-1 A_i t_i`, which should be `diag(pi_i, -pi_i)`.
    pub fn modal_drift(&self, i: usize) -> Matrix2<f64> {
        self.block_inverse(i) * subsystem_drift(self.pis[i]) * self.block(i)
    }

    /// `t_i^-1 b_i = v_i sqrt(1 + pi_i^2) / 2 * (pi_i, -pi_i)`.
    pub fn modal_input(&self, i: usize, v: f64) -> Vector2<f64> {
        self.block_inverse(i) * subsystem_input(self.pis[i], v)
    }
}

/// Vector form of the grouped modal coordinates.
pub fn modal_vector(eta: &ModalCoords) -> Vector4<f64> {
    Vector4::from(eta.0)
}
