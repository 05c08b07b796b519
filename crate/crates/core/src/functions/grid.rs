//! Uniform grid samples over [−L, L]^d with multilinear interpolation and
//! 4th-order central finite differences.

use crate::spaces::ComponentId;
use crate::C64;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// The X-side (V or Γ_e).
    X,
    /// The Λ-side (iV* or iV*/Γ_e^∨).
    Lambda,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    pub component: ComponentId,
    pub side: Side,
    /// Window half-width L; samples cover [−L, L] per axis.
    pub window: f64,
    /// Step h; L/h must be integral.
    pub step: f64,
    /// Declared support radius r ≤ L for C_r^∞-type representations.
    pub support_radius: Option<f64>,
    /// Row-major over the d-dimensional index grid (lexicographic).
    pub samples: Vec<C64>,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridError {
    BadGeometry(String),
    OutOfWindow,
}

impl core::fmt::Display for GridError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GridError::BadGeometry(msg) => write!(f, "bad grid geometry: {msg}"),
            GridError::OutOfWindow => write!(f, "evaluation point outside the grid window"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GridError {}

impl GridFunction {
    /// Number of samples per axis.
    pub fn points_per_axis(&self) -> usize {
        if self.dim == 0 {
            return 1;
        }
        2 * (self.window / self.step).round() as usize + 1
    }

    pub fn check_geometry(&self) -> Result<(), GridError> {
        if self.dim == 0 {
            if self.samples.len() != 1 {
                return Err(GridError::BadGeometry(
                    "zero-dimensional grid must hold exactly one sample".into(),
                ));
            }
            return Ok(());
        }
        if !(self.step > 0.0) || !(self.window > 0.0) {
            return Err(GridError::BadGeometry("window and step must be positive".into()));
        }
        let ratio = self.window / self.step;
        if (ratio - ratio.round()).abs() > 1e-9 {
            return Err(GridError::BadGeometry("L/h must be integral".into()));
        }
        let n = self.points_per_axis();
        let expected = n.pow(self.dim as u32);
        if self.samples.len() != expected {
            return Err(GridError::BadGeometry(alloc::format!(
                "expected {expected} samples, found {}",
                self.samples.len()
            )));
        }
        if let Some(r) = self.support_radius {
            if r > self.window + 1e-12 {
                return Err(GridError::BadGeometry(
                    "support radius exceeds the window".into(),
                ));
            }
        }
        Ok(())
    }

    /// Builds a grid by sampling `f` at every grid point, coordinates in the
    /// natural (V or iV*) coordinate system.
    pub fn sample(
        component: ComponentId,
        side: Side,
        dim: usize,
        window: f64,
        step: f64,
        support_radius: Option<f64>,
        mut f: impl FnMut(&[f64]) -> C64,
    ) -> Result<Self, GridError> {
        let mut g = GridFunction {
            component,
            side,
            window,
            step,
            support_radius,
            samples: Vec::new(),
            dim,
        };
        if dim == 0 {
            g.samples = vec![f(&[])];
            return Ok(g);
        }
        let ratio = window / step;
        if !(step > 0.0) || (ratio - ratio.round()).abs() > 1e-9 {
            return Err(GridError::BadGeometry("L/h must be integral".into()));
        }
        let n = 2 * (ratio.round() as usize) + 1;
        let total = n.pow(dim as u32);
        let mut samples = Vec::with_capacity(total);
        let mut idx = vec![0usize; dim];
        let mut point = vec![0.0f64; dim];
        for _ in 0..total {
            for (k, &i) in idx.iter().enumerate() {
                point[k] = -window + i as f64 * step;
            }
            samples.push(f(&point));
            // lexicographic increment
            for k in (0..dim).rev() {
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
            }
        }
        g.samples = samples;
        Ok(g)
    }

    pub fn index_of(&self, idx: &[usize]) -> usize {
        let n = self.points_per_axis();
        idx.iter().fold(0, |acc, &i| acc * n + i)
    }

    pub fn coordinate_of(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().map(|&i| -self.window + i as f64 * self.step).collect()
    }

    /// Iterates every grid index in lexicographic order.
    pub fn for_each_index(&self, mut body: impl FnMut(&[usize], C64)) {
        let n = self.points_per_axis();
        let mut idx = vec![0usize; self.dim];
        for &s in &self.samples {
            body(&idx, s);
            for k in (0..self.dim).rev() {
                idx[k] += 1;
                if idx[k] < n {
                    break;
                }
                idx[k] = 0;
            }
        }
    }

    /// Multilinear interpolation at a point inside the window.
    pub fn eval(&self, point: &[f64]) -> Result<C64, GridError> {
        if self.dim == 0 {
            return Ok(self.samples[0]);
        }
        assert_eq!(point.len(), self.dim, "evaluation point has wrong dimension");
        let n = self.points_per_axis();
        let mut base = vec![0usize; self.dim];
        let mut frac = vec![0.0f64; self.dim];
        for k in 0..self.dim {
            let t = (point[k] + self.window) / self.step;
            if t < -1e-9 || t > (n - 1) as f64 + 1e-9 {
                return Err(GridError::OutOfWindow);
            }
            let t = t.clamp(0.0, (n - 1) as f64);
            let b = (t.floor() as usize).min(n.saturating_sub(2));
            base[k] = b;
            frac[k] = t - b as f64;
        }
        let mut acc = C64::new(0.0, 0.0);
        for corner in 0..(1usize << self.dim) {
            let mut w = 1.0;
            let mut idx = vec![0usize; self.dim];
            for k in 0..self.dim {
                if corner >> k & 1 == 1 {
                    idx[k] = (base[k] + 1).min(n - 1);
                    w *= frac[k];
                } else {
                    idx[k] = base[k];
                    w *= 1.0 - frac[k];
                }
            }
            if w != 0.0 {
                acc += self.samples[self.index_of(&idx)] * w;
            }
        }
        Ok(acc)
    }

    /// 4th-order central difference along `axis`, in place on a fresh copy;
    /// boundary samples where the stencil does not fit are zeroed, and the
    /// caller is expected to restrict suprema to the interior.
    pub fn central_difference(&self, axis: usize) -> GridFunction {
        assert!(axis < self.dim);
        let n = self.points_per_axis();
        let mut out = self.clone();
        let stride: usize = n.pow((self.dim - 1 - axis) as u32);
        let h = self.step;
        for (flat, slot) in out.samples.iter_mut().enumerate() {
            let i = flat / stride % n;
            if i < 2 || i + 2 >= n {
                *slot = C64::new(0.0, 0.0);
                continue;
            }
            let f = |off: isize| {
                self.samples[(flat as isize + off * stride as isize) as usize]
            };
            *slot = (-f(2) + f(1) * 8.0 - f(-1) * 8.0 + f(-2)) / (12.0 * h);
        }
        out
    }

    /// Indices closer than two steps to any face (where the stencil output
    /// is not valid).
    pub fn is_interior(&self, idx: &[usize], margin: usize) -> bool {
        let n = self.points_per_axis();
        idx.iter().all(|&i| i >= margin && i + margin < n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::ComponentId;

    fn gaussian_grid(dim: usize, window: f64, step: f64) -> GridFunction {
        GridFunction::sample(
            ComponentId::new("e"),
            Side::X,
            dim,
            window,
            step,
            Some(window),
            |x| C64::new((-x.iter().map(|t| t * t).sum::<f64>()).exp(), 0.0),
        )
        .unwrap()
    }

    #[test]
    fn eval_at_grid_points_is_exact() {
        let g = gaussian_grid(1, 2.0, 0.5);
        let v = g.eval(&[1.0]).unwrap();
        assert!((v.re - (-1.0f64).exp()).abs() < 1e-15);
        assert!((g.eval(&[0.0]).unwrap().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn interpolation_error_is_quadratic() {
        let g = gaussian_grid(1, 4.0, 0.01);
        let v = g.eval(&[0.1234]).unwrap();
        assert!((v.re - (-0.1234f64 * 0.1234).exp()).abs() < 1e-4);
    }

    #[test]
    fn out_of_window_rejected() {
        let g = gaussian_grid(1, 2.0, 0.5);
        assert!(matches!(g.eval(&[2.5]), Err(GridError::OutOfWindow)));
    }

    #[test]
    fn central_difference_of_quadratic() {
        let g = GridFunction::sample(
            ComponentId::new("e"),
            Side::Lambda,
            1,
            2.0,
            0.1,
            None,
            |x| C64::new(x[0] * x[0], 0.0),
        )
        .unwrap();
        let d = g.central_difference(0);
        // d/dx x^2 = 2x, exact for the 4th-order stencil.
        let n = d.points_per_axis();
        for i in 2..n - 2 {
            let x = -2.0 + i as f64 * 0.1;
            assert!((d.samples[i].re - 2.0 * x).abs() < 1e-12);
        }
    }

    #[test]
    fn two_dimensional_indexing_roundtrip() {
        let g = gaussian_grid(2, 1.0, 0.5);
        assert_eq!(g.points_per_axis(), 5);
        assert_eq!(g.samples.len(), 25);
        let mut count = 0;
        g.for_each_index(|idx, v| {
            assert_eq!(g.samples[g.index_of(idx)], v);
            count += 1;
        });
        assert_eq!(count, 25);
    }

    #[test]
    fn zero_dimensional_grid() {
        let g = GridFunction::sample(
            ComponentId::new("pt"),
            Side::Lambda,
            0,
            1.0,
            1.0,
            None,
            |_| C64::new(3.0, -1.0),
        )
        .unwrap();
        assert_eq!(g.eval(&[]).unwrap(), C64::new(3.0, -1.0));
        g.check_geometry().unwrap();
    }
}
