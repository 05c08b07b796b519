//! Gauss–Legendre rules (nodes by Newton iteration on the Legendre
//! polynomials) and the composite helpers used by the inner-product and
//! fiber integrals.

use alloc::vec::Vec;
#[allow(unused_imports)] use num_traits::Float;

/// Nodes and weights of the `g`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(g: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(g >= 1);
    let mut nodes = Vec::with_capacity(g);
    let mut weights = Vec::with_capacity(g);
    for i in 0..g {
        // Chebyshev-style initial guess.
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (g as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(g, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(g, x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// A reusable composite Gauss–Legendre rule: `panels` panels of a `g`-point
/// rule over `[a, b]`, flattened to (nodes, weights).
#[derive(Debug, Clone)]
pub struct CompositeRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn gauss_legendre(a: f64, b: f64, panels: usize, points_per_panel: usize) -> Self {
        assert!(panels >= 1 && b > a);
        let (xs, ws) = gauss_legendre(points_per_panel);
        let width = (b - a) / panels as f64;
        let mut nodes = Vec::with_capacity(panels * points_per_panel);
        let mut weights = Vec::with_capacity(panels * points_per_panel);
        for p in 0..panels {
            let left = a + p as f64 * width;
            let mid = left + 0.5 * width;
            for (x, w) in xs.iter().zip(&ws) {
                nodes.push(mid + 0.5 * width * x);
                weights.push(0.5 * width * w);
            }
        }
        CompositeRule { nodes, weights }
    }

    /// Splits [0, 2π) uniformly; exact for trigonometric polynomials of
    /// degree < `points`.
    pub fn circle(points: usize) -> Self {
        assert!(points >= 1);
        let step = core::f64::consts::TAU / points as f64;
        CompositeRule {
            nodes: (0..points).map(|k| k as f64 * step).collect(),
            weights: alloc::vec![step; points],
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn integrate_complex(
        &self,
        mut f: impl FnMut(f64) -> crate::C64,
    ) -> crate::C64 {
        let mut acc = crate::C64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += f(x) * w;
        }
        acc
    }
}

/// `panels * points_per_panel` total nodes, total node count chosen by the
/// caller; used where a spec fixes "Q nodes".
pub fn split_node_budget(total: usize) -> (usize, usize) {
    let per = 8usize.min(total.max(1));
    let panels = (total / per).max(1);
    (panels, per)
}
