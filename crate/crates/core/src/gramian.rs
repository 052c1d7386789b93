//! Infinite-horizon reachability Gramians of first-order pairs.
//!
//! For a pair with both poles stable (`alpha_i > 0`) the set of states
//! reachable from rest with `||u||^2 <= 1` is `{x : x^T W^-1 x <= 1}` with
//!
//! ```txt
//! W = [[beta1^2 / (2 alpha1),       beta1 beta2 / (alpha1 + alpha2)],
//!      [beta1 beta2 / (alpha1 + alpha2), beta2^2 / (2 alpha2)      ]]
//! ```
//!
//! An anti-stable pair is the same problem run backwards in time, so it uses
//! `|alpha_i|`. A pair with one pole of each sign decouples into an
//! axis-aligned ellipse, see [`mixed_set`].

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2, SymmetricEigen, Vector2};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::systems::{classify, FirstOrderPair, StabilityClass};

/// Symmetric 2x2 Gramian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gramian2 {
    pub w11: f64,
    pub w12: f64,
    pub w22: f64,
}

impl Gramian2 {
    pub fn new(w11: f64, w12: f64, w22: f64) -> Self {
        Self { w11, w12, w22 }
    }

    pub fn to_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.w11, self.w12, self.w12, self.w22)
    }

    /// `w11 w22 - w12^2`, with the products formed by FMA so the difference
    /// is correctly rounded for the stored entries.
    pub fn det(&self) -> f64 {
        let p = self.w12 * self.w12;
        let p_err = self.w12.mul_add(self.w12, -p);
        self.w11.mul_add(self.w22, -p) - p_err
    }

    pub fn trace(&self) -> f64 {
        self.w11 + self.w22
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::new(self.w11 * s, self.w12 * s, self.w22 * s)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mean = 0.5 * self.trace();
        let half_gap = (0.25 * (self.w11 - self.w22).powi(2) + self.w12 * self.w12).sqrt();
        [mean - half_gap, mean + half_gap]
    }

    /// Inverse, or `None` when numerically singular.
    pub fn inverse(&self) -> Option<Gramian2> {
        if self.is_singular() {
            return None;
        }
        let d = self.det();
        Some(Gramian2::new(self.w22 / d, -self.w12 / d, self.w11 / d))
    }

    /// Rank-deficient at tolerance `1e-10 * ||W||`.
    pub fn is_singular(&self) -> bool {
        let [lo, hi] = self.eigenvalues();
        hi <= 0.0 || lo.abs() <= SINGULAR_RTOL * hi.abs()
    }

    /// `x^T W x`.
    pub fn quadratic_form(&self, x: [f64; 2]) -> f64 {
        self.w11 * x[0] * x[0] + 2.0 * self.w12 * x[0] * x[1] + self.w22 * x[1] * x[1]
    }

    /// `x^T W^+ x`, where `W^+` is the pseudo-inverse.
    ///
    /// Fails with [`Error::SingularGramian`] when `W` is singular and `x` has
    /// a component outside its range.
    pub fn inverse_quadratic_form(&self, x: [f64; 2]) -> Result<f64> {
        if let Some(inv) = self.inverse() {
            return Ok(inv.quadratic_form(x));
        }
        let eig = SymmetricEigen::new(self.to_matrix());
        let hi = eig.eigenvalues.amax();
        let xv = Vector2::from(x);
        let xnorm = xv.norm();
        let mut value = 0.0;
        for k in 0..2 {
            let lambda = eig.eigenvalues[k];
            let proj = eig.eigenvectors.column(k).dot(&xv);
            if lambda.abs() > SINGULAR_RTOL * hi {
                value += proj * proj / lambda;
            } else if proj.abs() > RANGE_RTOL * xnorm {
                return Err(Error::SingularGramian);
            }
        }
        Ok(value)
    }
}

const SINGULAR_RTOL: f64 = 1e-10;
const RANGE_RTOL: f64 = 1e-9;

/// Closed-form Gramian of a pair whose poles share a sign.
pub fn gramian_closed_form(sys: &FirstOrderPair) -> Result<Gramian2> {
    if classify(sys) == StabilityClass::Mixed {
        return Err(Error::MixedClass);
    }
    let [a1, a2] = sys.alphas().map(f64::abs);
    let [b1, b2] = sys.betas();
    Ok(Gramian2::new(
        b1 * b1 / (2.0 * a1),
        b1 * b2 / (a1 + a2),
        b2 * b2 / (2.0 * a2),
    ))
}

/// `det W` of the closed-form Gramian.
///
/// For close poles `w11 w22` and `w12^2` agree in most of their digits, so
/// the entries are formed and combined in double-double arithmetic; the
/// result keeps full `f64` relative accuracy until `|a1 - a2| / (a1 + a2)`
/// drops near `1e-8`.
pub fn closed_form_det(sys: &FirstOrderPair) -> Result<f64> {
    if classify(sys) == StabilityClass::Mixed {
        return Err(Error::MixedClass);
    }
    let [a1, a2] = sys.alphas().map(f64::abs);
    let [b1, b2] = sys.betas();
    let s1 = TwoFloat::new_mul(b1, b1);
    let s2 = TwoFloat::new_mul(b2, b2);
    let sum = TwoFloat::new_add(a1, a2);
    Ok(det_dd(
        s1 / (2.0 * a1),
        dd_div(s1 * s2, sum * sum),
        s2 / (2.0 * a2),
    ))
}

/// `w11 w22 - w12^2` given `w12^2` directly.
pub(crate) fn det_dd(w11: TwoFloat, w12_sq: TwoFloat, w22: TwoFloat) -> f64 {
    f64::from(w11 * w22 - w12_sq)
}

/// Double-double quotient by long division. `TwoFloat / TwoFloat` forms its
/// reciprocal residual without FMA and only reaches `f64` accuracy.
pub(crate) fn dd_div(x: TwoFloat, y: TwoFloat) -> TwoFloat {
    let q1 = x.hi() / y.hi();
    let r = x - y * q1;
    let q2 = r.hi() / y.hi();
    let r = r - y * q2;
    let q3 = r.hi() / y.hi();
    TwoFloat::from(q1) + q2 + q3
}

/// Limits for [`gramian_quadrature_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub max_horizon: f64,
    pub max_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            max_horizon: 1e6,
            max_panels: 1 << 20,
        }
    }
}

pub fn gramian_quadrature(sys: &FirstOrderPair, rtol: f64) -> Result<Gramian2> {
    gramian_quadrature_with(sys, rtol, &QuadratureConfig::default())
}

/// Numerical reachability Gramian `int_0^T e^{-At} B B^T e^{-A^T t} dt`.
///
/// `T` is chosen so the neglected tail is below `rtol / 10` of every entry;
/// the integral over `[0, T]` uses composite Gauss-Legendre with the panel
/// count doubled until successive estimates agree to `rtol / 10`.
pub fn gramian_quadrature_with(
    sys: &FirstOrderPair,
    rtol: f64,
    cfg: &QuadratureConfig,
) -> Result<Gramian2> {
    if !(rtol > 0.0 && rtol <= 1e-4) {
        return Err(Error::Domain {
            name: "rtol",
            value: rtol,
            expected: "(0, 1e-4]",
        });
    }
    if classify(sys) == StabilityClass::Mixed {
        return Err(Error::MixedClass);
    }
    let rates = sys.alphas().map(f64::abs);
    let betas = sys.betas();
    let slowest = rates[0].min(rates[1]);
    // Entry (i, j) decays like exp(-(a_i + a_j) t); its relative tail beyond T
    // is exp(-(a_i + a_j) T) <= exp(-2 slowest T).
    let horizon = (10.0 / rtol).ln() / (2.0 * slowest);
    if !horizon.is_finite() || horizon > cfg.max_horizon {
        return Err(Error::NonConvergence(format!(
            "horizon {horizon:e} exceeds cap {:e}",
            cfg.max_horizon
        )));
    }

    let integrand = |t: f64| -> [f64; 3] {
        // e^{-At} B with A = diag(rates)
        let g1 = (-rates[0] * t).exp() * betas[0];
        let g2 = (-rates[1] * t).exp() * betas[1];
        [g1 * g1, g1 * g2, g2 * g2]
    };

    let rule = GaussLegendre::new(GL_ORDER);
    let mut panels = 1usize;
    let mut prev = rule.composite(&integrand, horizon, panels);
    loop {
        panels *= 2;
        if panels > cfg.max_panels {
            return Err(Error::NonConvergence(format!(
                "no agreement within {rtol:e} after {} panels",
                cfg.max_panels
            )));
        }
        let next = rule.composite(&integrand, horizon, panels);
        let converged = (0..3).all(|k| (next[k] - prev[k]).abs() <= 0.1 * rtol * next[k].abs());
        prev = next;
        if converged {
            break;
        }
    }
    Ok(Gramian2::new(prev[0], prev[1], prev[2]))
}

const GL_ORDER: usize = 10;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            // Newton on P_n starting from the Chebyshev-like guess.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    fn composite<F: Fn(f64) -> [f64; 3]>(&self, f: &F, horizon: f64, panels: usize) -> [f64; 3] {
        let h = horizon / panels as f64;
        let mut acc = [0.0; 3];
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in self.nodes.iter().zip(&self.weights) {
                let v = f(mid + 0.5 * h * x);
                for k in 0..3 {
                    acc[k] += 0.5 * h * w * v[k];
                }
            }
        }
        acc
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Area measures of `{x : x^T W^-1 x <= 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseArea {
    /// `sqrt(det W)`, the closed-form quantity without the factor pi.
    pub paper: f64,
    /// `pi * sqrt(det W)`.
    pub geometric: f64,
    /// Equal poles: the set collapses to a segment and both measures are 0.
    pub degenerate: bool,
}

/// `|beta1 beta2| / (2 sqrt(a1 a2)) * |a1 - a2| / (a1 + a2)` with `a_i = |alpha_i|`.
pub fn ellipse_area_paper(sys: &FirstOrderPair) -> Result<EllipseArea> {
    if classify(sys) == StabilityClass::Mixed {
        return Err(Error::MixedClass);
    }
    let [a1, a2] = sys.alphas().map(f64::abs);
    let [b1, b2] = sys.betas();
    let paper = (b1 * b2).abs() / (2.0 * (a1 * a2).sqrt()) * (a1 - a2).abs() / (a1 + a2);
    Ok(EllipseArea {
        paper,
        geometric: PI * paper,
        degenerate: a1 == a2,
    })
}

/// The three factors of the area: single-mode extents and the coupling term.
pub fn area_factors(sys: &FirstOrderPair) -> Result<[f64; 3]> {
    if classify(sys) == StabilityClass::Mixed {
        return Err(Error::MixedClass);
    }
    let [a1, a2] = sys.alphas().map(f64::abs);
    let [b1, b2] = sys.betas();
    Ok([
        b1.abs() / (2.0 * a1).sqrt(),
        b2.abs() / (2.0 * a2).sqrt(),
        (a1 - a2).abs() / (a1 + a2),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetKind {
    Ellipse2,
    Ellipsoid4,
    AxisAlignedEllipse2,
}

impl SetKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SetKind::Ellipse2 => "ellipse2",
            SetKind::Ellipsoid4 => "ellipsoid4",
            SetKind::AxisAlignedEllipse2 => "axis_aligned_ellipse2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Physical,
    Modal,
}

/// Ellipsoid `{x : x^T Q^-1 x <= 1}` centred at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct SetDescription {
    pub kind: SetKind,
    /// `Q`.
    pub form: DMatrix<f64>,
    /// `Q^-1`, assembled directly rather than by inverting `form`.
    pub inverse_form: DMatrix<f64>,
    pub frame: Frame,
}

impl SetDescription {
    pub fn dim(&self) -> usize {
        self.form.nrows()
    }

    /// `x^T Q^-1 x`: below 1 inside, 1 on the boundary.
    pub fn membership(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim(), "dimension mismatch");
        let v = nalgebra::DVector::from_column_slice(x);
        (v.transpose() * &self.inverse_form * &v)[(0, 0)]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.membership(x) <= 1.0
    }

    /// `sqrt(det Q)`.
    pub fn sqrt_det(&self) -> f64 {
        self.form.determinant().max(0.0).sqrt()
    }

    /// Lebesgue measure: unit-ball volume times `sqrt(det Q)`.
    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) * self.sqrt_det()
    }

    /// Radially rescale a nonzero point onto the boundary.
    pub fn boundary_point(&self, x: &[f64]) -> Vec<f64> {
        let m = self.membership(x);
        assert!(m > 0.0, "cannot project the origin onto the boundary");
        let s = 1.0 / m.sqrt();
        x.iter().map(|v| v * s).collect()
    }
}

/// Volume of the unit ball in 2 and 4 dimensions.
pub fn unit_ball_volume(dim: usize) -> f64 {
    match dim {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        4 => PI * PI / 2.0,
        _ => panic!("unsupported dimension {dim}"),
    }
}

/// Reachable set of a same-sign pair, `{x : x^T W^-1 x <= 1}`.
pub fn same_sign_set(sys: &FirstOrderPair) -> Result<SetDescription> {
    let w = gramian_closed_form(sys)?;
    let inv = w
        .inverse()
        .ok_or(Error::DegenerateSystem("equal poles give a rank-one Gramian"))?;
    Ok(SetDescription {
        kind: SetKind::Ellipse2,
        form: DMatrix::from_row_slice(2, 2, &[w.w11, w.w12, w.w12, w.w22]),
        inverse_form: DMatrix::from_row_slice(2, 2, &[inv.w11, inv.w12, inv.w12, inv.w22]),
        frame: Frame::Modal,
    })
}

/// Pair with one stable and one unstable pole.
///
/// The unstable mode bounds what can be driven back to zero and the stable
/// mode bounds what can be reached from zero, so the two costs add:
/// `Q = diag(beta1^2 / (2|alpha1|), beta2^2 / (2|alpha2|))`.
pub fn mixed_set(sys: &FirstOrderPair) -> Result<SetDescription> {
    if classify(sys) != StabilityClass::Mixed {
        return Err(Error::NotMixed);
    }
    let [a1, a2] = sys.alphas().map(f64::abs);
    let [b1, b2] = sys.betas();
    let q1 = b1 * b1 / (2.0 * a1);
    let q2 = b2 * b2 / (2.0 * a2);
    Ok(SetDescription {
        kind: SetKind::AxisAlignedEllipse2,
        form: DMatrix::from_row_slice(2, 2, &[q1, 0.0, 0.0, q2]),
        inverse_form: DMatrix::from_row_slice(2, 2, &[1.0 / q1, 0.0, 0.0, 1.0 / q2]),
        frame: Frame::Modal,
    })
}

/// Minimum input energy to place the pair at `target`, with trajectories
/// starting and ending at rest.
///
/// Same-sign pairs use `target^T W^+ target`; mixed pairs the decoupled
/// diagonal form of [`mixed_set`].
pub fn min_energy_to_reach(sys: &FirstOrderPair, target: [f64; 2]) -> Result<f64> {
    if target.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteState);
    }
    match classify(sys) {
        StabilityClass::Mixed => Ok(mixed_set(sys)?.membership(&target)),
        _ => gramian_closed_form(sys)?.inverse_quadratic_form(target),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a1: f64, a2: f64, b1: f64, b2: f64) -> FirstOrderPair {
        FirstOrderPair::new(a1, a2, b1, b2).unwrap()
    }

    #[test]
    fn det_close_poles() {
        // Reference from exact rational arithmetic on the same f64 inputs.
        let s = pair(7.934494177310519, 7.9287751096594885, -4.945936112510281, -0.33628846778144705);
        let exact = 1.428_896_231_567_125_1e-9;
        assert!((closed_form_det(&s).unwrap() - exact).abs() <= 4e-16 * exact);
        // The plain f64 determinant loses about eight digits here.
        let plain = gramian_closed_form(&s).unwrap().det();
        assert!((plain - exact).abs() > 1e-12 * exact);
    }

    #[test]
    fn long_division() {
        let x = TwoFloat::from(1.0);
        let y = TwoFloat::new_add(3.0, 1e-17);
        let q = dd_div(x, y);
        let back = q * y - 1.0;
        assert!(f64::from(back).abs() < 1e-30);
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    /// Adaptive-truncation trapezoid on e^{-At} B B^T e^{-A^T t}, kept
    /// separate from the Gauss-Legendre path.
    fn trapezoid_oracle(sys: &FirstOrderPair) -> [f64; 3] {
        let [a1, a2] = sys.alphas().map(f64::abs);
        let [b1, b2] = sys.betas();
        let horizon = 40.0 / a1.min(a2);
        let n = 400_000;
        let h = horizon / n as f64;
        let f = |t: f64| {
            let g1 = b1 * (-a1 * t).exp();
            let g2 = b2 * (-a2 * t).exp();
            [g1 * g1, g1 * g2, g2 * g2]
        };
        let mut acc = [0.0; 3];
        for k in 0..=n {
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            let v = f(k as f64 * h);
            for j in 0..3 {
                acc[j] += w * h * v[j];
            }
        }
        // Endpoint correction -h^2/12 (f'(T) - f'(0)); f'(T) is negligible.
        let d0 = [-2.0 * a1 * b1 * b1, -(a1 + a2) * b1 * b2, -2.0 * a2 * b2 * b2];
        for j in 0..3 {
            acc[j] += h * h / 12.0 * d0[j];
        }
        acc
    }

    #[test]
    fn closed_form_matches_trapezoid_oracle() {
        let sys = pair(1.0, 2.0, 1.0, 1.0);
        let oracle = trapezoid_oracle(&sys);
        assert!(close(oracle[0], 0.5, 1e-9));
        assert!(close(oracle[1], 1.0 / 3.0, 1e-9));
        assert!(close(oracle[2], 0.25, 1e-9));
        let w = gramian_closed_form(&sys).unwrap();
        assert_eq!(w, Gramian2::new(0.5, 1.0 / 3.0, 0.25));
    }

    #[test]
    fn equal_poles_rank_one() {
        let w = gramian_closed_form(&pair(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(w, Gramian2::new(0.5, 0.5, 0.5));
        assert!(w.is_singular());
        assert_eq!(w.det(), 0.0);
    }

    #[test]
    fn time_reversal() {
        let fwd = gramian_closed_form(&pair(1.0, 2.0, 1.0, 1.0)).unwrap();
        let back = gramian_closed_form(&pair(-1.0, -2.0, 1.0, 1.0)).unwrap();
        assert_eq!(fwd, back);
    }

    #[test]
    fn mixed_rejected_by_same_sign_routines() {
        let sys = pair(-1.0, 1.0, 1.0, 1.0);
        assert_eq!(gramian_closed_form(&sys), Err(Error::MixedClass));
        assert_eq!(gramian_quadrature(&sys, 1e-8), Err(Error::MixedClass));
        assert_eq!(ellipse_area_paper(&sys), Err(Error::MixedClass));
        assert_eq!(mixed_set(&pair(1.0, 2.0, 1.0, 1.0)), Err(Error::NotMixed));
    }

    #[test]
    fn quadrature_examples() {
        let w = gramian_quadrature(&pair(1.0, 2.0, 1.0, 1.0), 1e-8).unwrap();
        assert!((w.w11 - 0.5).abs() < 1e-8);
        assert!((w.w12 - 1.0 / 3.0).abs() < 1e-8);
        assert!((w.w22 - 0.25).abs() < 1e-8);

        let w = gramian_quadrature(&pair(0.1, 0.2, 1.0, 1.0), 1e-8).unwrap();
        assert!(close(w.w11, 5.0, 1e-8));
        assert!(close(w.w12, 10.0 / 3.0, 1e-8));
        assert!(close(w.w22, 2.5, 1e-8));

        let w = gramian_quadrature(&pair(3.0, 3.0, 1.0, 2.0), 1e-8).unwrap();
        assert!(w.det().abs() <= 1e-8 * w.w11 * w.w22);
    }

    #[test]
    fn quadrature_guards() {
        let sys = pair(1.0, 2.0, 1.0, 1.0);
        assert!(matches!(gramian_quadrature(&sys, 1e-3), Err(Error::Domain { .. })));
        assert!(matches!(gramian_quadrature(&sys, 0.0), Err(Error::Domain { .. })));
        let tight = QuadratureConfig {
            max_horizon: 1.0,
            ..Default::default()
        };
        assert!(matches!(
            gramian_quadrature_with(&sys, 1e-8, &tight),
            Err(Error::NonConvergence(_))
        ));
        let few = QuadratureConfig {
            max_panels: 2,
            ..Default::default()
        };
        assert!(matches!(
            gramian_quadrature_with(&pair(0.05, 10.0, 1.0, 1.0), 1e-8, &few),
            Err(Error::NonConvergence(_))
        ));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = GaussLegendre::new(GL_ORDER);
        let wsum: f64 = rule.weights.iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // Exact up to degree 2n - 1 = 19.
        let got = rule.composite(&|t| [t.powi(19), t.powi(4), 1.0], 1.0, 1);
        assert!((got[0] - 1.0 / 20.0).abs() < 1e-14);
        assert!((got[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn area_examples() {
        let a = ellipse_area_paper(&pair(1.0, 2.0, 1.0, 1.0)).unwrap();
        let expect = 1.0 / (6.0 * 2f64.sqrt());
        assert!((a.paper - expect).abs() < 1e-15);
        assert!((a.paper - (1.0f64 / 72.0).sqrt()).abs() < 1e-15);
        assert!((a.geometric - PI * expect).abs() < 1e-15);
        assert!(!a.degenerate);

        let a = ellipse_area_paper(&pair(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(a.paper, 0.0);
        assert!(a.degenerate);

        let a = ellipse_area_paper(&pair(1.0, 2.0, 2.0, 3.0)).unwrap();
        assert!((a.paper - 6.0 * expect).abs() < 1e-14);
    }

    #[test]
    fn mixed_set_examples() {
        let s = mixed_set(&pair(-1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(s.kind, SetKind::AxisAlignedEllipse2);
        assert_eq!(s.form, DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]));
        assert!((s.sqrt_det() - 0.5).abs() < 1e-15);

        let s = mixed_set(&pair(-1.0, 2.0, 1.0, 1.0)).unwrap();
        assert_eq!(s.form, DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.25]));
        let same_sign = ellipse_area_paper(&pair(1.0, 2.0, 1.0, 1.0)).unwrap().paper;
        assert!((s.sqrt_det() - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
        assert!(s.sqrt_det() > same_sign);

        // Either ordering of the signs.
        let s = mixed_set(&pair(2.0, -1.0, 1.0, 1.0)).unwrap();
        assert_eq!(s.form, DMatrix::from_row_slice(2, 2, &[0.25, 0.0, 0.0, 0.5]));
    }

    #[test]
    fn min_energy_examples() {
        let sys = pair(1.0, 2.0, 1.0, 1.0);
        assert_eq!(min_energy_to_reach(&sys, [0.0, 0.0]).unwrap(), 0.0);
        let e = min_energy_to_reach(&sys, [0.5, 1.0 / 3.0]).unwrap();
        assert!((e - 0.5).abs() < 1e-12);
        // Boundary point scaled by t costs t^2.
        let x = [0.3, -0.7];
        let e1 = min_energy_to_reach(&sys, x).unwrap();
        let b = [x[0] / e1.sqrt(), x[1] / e1.sqrt()];
        assert!((min_energy_to_reach(&sys, b).unwrap() - 1.0).abs() < 1e-12);
        let e3 = min_energy_to_reach(&sys, [3.0 * b[0], 3.0 * b[1]]).unwrap();
        assert!((e3 - 9.0).abs() < 1e-10);
    }

    #[test]
    fn min_energy_singular_gramian() {
        let sys = pair(1.0, 1.0, 1.0, 2.0);
        // Range of W is spanned by beta = (1, 2).
        let e = min_energy_to_reach(&sys, [1.0, 2.0]).unwrap();
        // W = beta beta^T / 2, so beta^T W^+ beta = 2.
        assert!((e - 2.0).abs() < 1e-12);
        assert_eq!(min_energy_to_reach(&sys, [1.0, 0.0]), Err(Error::SingularGramian));
    }

    #[test]
    fn min_energy_mixed_uses_decoupled_form() {
        let sys = pair(-1.0, 2.0, 1.0, 1.0);
        let e = min_energy_to_reach(&sys, [0.5, 0.5]).unwrap();
        assert!((e - (2.0 * 0.25 + 4.0 * 0.25)).abs() < 1e-15);
    }

    #[test]
    fn same_sign_set_boundary() {
        let s = same_sign_set(&pair(1.0, 2.0, 1.0, 1.0)).unwrap();
        let b = s.boundary_point(&[0.2, 0.9]);
        assert!((s.membership(&b) - 1.0).abs() < 1e-12);
        assert!((s.volume() - PI / (6.0 * 2f64.sqrt())).abs() < 1e-14);
        assert!(matches!(
            same_sign_set(&pair(2.0, 2.0, 1.0, 1.0)),
            Err(Error::DegenerateSystem(_))
        ));
    }
}
