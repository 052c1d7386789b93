//! Golden-section search for unimodal scalar functions.
//!
//! Each iteration shrinks the bracket by `1/phi` and reuses one interior
//! point, so only one new evaluation is needed per step.

/// `(sqrt(5) - 1) / 2`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GoldenSection {
    /// Stop once the bracket is narrower than this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for GoldenSection {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchResult {
    pub x: f64,
    pub value: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

impl GoldenSection {
    /// Maximize `f` on `[lo, hi]`.
    pub fn maximize<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> SearchResult {
        let r = self.minimize(|x| -f(x), lo, hi);
        SearchResult {
            value: -r.value,
            ..r
        }
    }

    /// Minimize `f` on `[lo, hi]`.
    pub fn minimize<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> SearchResult {
        assert!(lo < hi, "empty bracket [{lo}, {hi}]");
        let (mut a, mut b) = (lo, hi);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = f(c);
        let mut fd = f(d);
        let mut iterations = 0;
        while b - a > self.tol && iterations < self.max_iter {
            if fc <= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = f(d);
            }
            iterations += 1;
        }
        let (x, value) = if fc <= fd { (c, fc) } else { (d, fd) };
        SearchResult {
            x,
            value,
            bracket: (a, b),
            iterations,
        }
    }
}

/// Vertex of the parabola through `f(x - h), f(x), f(x + h)`.
///
/// Near a smooth extremum comparisons of `f` stop resolving the location
/// below roughly `sqrt(eps)`; the fitted vertex does not have that limit,
/// its error being `O(h^2)` plus `O(eps / h)`.
pub fn parabolic_vertex<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let fm = f(x - h);
    let f0 = f(x);
    let fp = f(x + h);
    let curvature = fp - 2.0 * f0 + fm;
    if curvature == 0.0 {
        return x;
    }
    x - 0.5 * h * (fp - fm) / curvature
}
