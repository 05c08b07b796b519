//! Computable seminorms: joint-decay Schwartz seminorms ‖φ‖_{D,N}, the
//! X-side decay seminorms ‖φ‖_N, and the Paley–Wiener growth seminorms
//! ‖φ‖_{r,N} estimated on a documented complex sampling grid.
//!
//! Derivatives are exact (term-wise) for Fourier series and 4th-order
//! central differences for grids. Suprema over continuous domains are
//! sampled; every report carries the resolution that produced it.

use super::grid::{GridFunction, Side};
use super::{
    torus_eval_complexified, ComponentRep, DecayCert, FamilyClass, FamilyFunction,
    FunctionError, TorusClass, TorusFunction,
};
use crate::spaces::SpaceFamily;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] use num_traits::Float;

/// Above this step the 4th-order stencil's truncation error (∝ h⁴) is no
/// longer negligible at the tolerances this crate works to; derivative
/// seminorms then carry a warning.
const DERIVATIVE_STEP_WARN: f64 = 0.0316;

#[derive(Debug, Clone, PartialEq)]
pub struct SeminormReport {
    pub value: f64,
    /// Grid step used for finite differences, when any were taken.
    pub step_used: Option<f64>,
    pub warning: Option<String>,
}

/// ‖φ‖_{D,N} = sup over stored Λ-side data of |Dφ(λ)| (1 + ‖e‖ + ‖λ‖)^N.
///
/// `deriv` is a multi-index over iV*-coordinates; non-archimedean components
/// differentiate the Fourier series exactly term by term, archimedean grids
/// use central differences (suprema restricted to stencil-valid interior
/// points). Non-archimedean components have no ‖e‖ and contribute weight
/// (1 + ‖λ‖)^N with λ the centered fundamental-domain representative.
pub fn schwartz_seminorm(
    fam: &SpaceFamily,
    f: &FamilyFunction,
    deriv: &[u32],
    n: u32,
) -> Result<SeminormReport, FunctionError> {
    f.check_family(fam)?;
    if deriv.len() != fam.dim() {
        return Err(FunctionError::DimensionMismatch);
    }
    let mut value = 0.0f64;
    let mut step_used = None;
    let mut warning = None;
    for (id, rep) in &f.components {
        let comp = fam
            .component(id)
            .map_err(|_| FunctionError::UnknownComponent(id.0.clone()))?;
        match rep {
            ComponentRep::Torus(t) => {
                let sup = torus_weighted_sup(fam, t, comp.norm(), deriv, n)?;
                value = value.max(sup);
            }
            ComponentRep::Grid(g) if g.side == Side::Lambda => {
                let order: u32 = deriv.iter().sum();
                if order > 0 {
                    step_used = Some(g.step);
                    if g.step > DERIVATIVE_STEP_WARN {
                        warning = Some(format!(
                            "step {} too coarse for reliable derivatives (h^4 = {:.2e})",
                            g.step,
                            g.step.powi(4)
                        ));
                    }
                }
                let sup = grid_weighted_sup(fam, g, comp.norm(), deriv, n, CoordNorm::Covector);
                value = value.max(sup);
            }
            _ => {
                return Err(FunctionError::ClassMismatch(
                    "Schwartz seminorm requires Λ-side data".into(),
                ))
            }
        }
    }
    Ok(SeminormReport { value, step_used, warning })
}

/// X-side decay seminorm sup |Dφ(x)| (1 + ‖e‖ + ‖x‖)^N over stored data.
pub fn x_seminorm(
    fam: &SpaceFamily,
    f: &FamilyFunction,
    deriv: &[u32],
    n: u32,
) -> Result<SeminormReport, FunctionError> {
    f.check_family(fam)?;
    if deriv.len() != fam.dim() {
        return Err(FunctionError::DimensionMismatch);
    }
    let mut value = 0.0f64;
    let mut step_used = None;
    let mut warning = None;
    for (id, rep) in &f.components {
        let comp = fam
            .component(id)
            .map_err(|_| FunctionError::UnknownComponent(id.0.clone()))?;
        match rep {
            ComponentRep::Lattice(l) => {
                if deriv.iter().any(|&d| d > 0) {
                    return Err(FunctionError::ClassMismatch(
                        "no derivatives on lattice functions".into(),
                    ));
                }
                for (k, c) in &l.coefficients {
                    let norm = fam
                        .lattice_point_norm(id, k)
                        .map_err(|_| FunctionError::UnknownComponent(id.0.clone()))?;
                    let w = (1.0 + comp.norm() + norm).powi(n as i32);
                    value = value.max(c.norm() * w);
                }
            }
            ComponentRep::Grid(g) if g.side == Side::X => {
                let order: u32 = deriv.iter().sum();
                if order > 0 {
                    step_used = Some(g.step);
                    if g.step > DERIVATIVE_STEP_WARN {
                        warning = Some(format!("step {} too coarse for derivatives", g.step));
                    }
                }
                let sup = grid_weighted_sup(fam, g, comp.norm(), deriv, n, CoordNorm::Point);
                value = value.max(sup);
            }
            _ => {
                return Err(FunctionError::ClassMismatch(
                    "X-side seminorm requires X-side data".into(),
                ))
            }
        }
    }
    Ok(SeminormReport { value, step_used, warning })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PwSeminormReport {
    pub value: f64,
    /// Exponential growth beyond type `r` detected (support outside the
    /// ball of radius r); the supremum is then only a lower bound and grows
    /// without bound beyond the sampling box.
    pub diverging: bool,
    pub re_samples_per_dim: usize,
    pub im_samples_per_dim: usize,
}

/// Paley–Wiener seminorm ‖φ‖_{r,N} (archimedean) / ‖φ‖_r (non-archimedean),
/// estimated with Re(λ) over a box of radius 2r.
///
/// Non-archimedean input is a Λ-side Fourier series, evaluated term-wise at
/// complexified λ. Archimedean input is the X-side preimage grid (a Cc-class
/// representation); its entire extension is the finite Fourier integral,
/// which is how archimedean PW functions are represented in this crate.
/// The polynomial weight (1+‖e‖+‖λ‖)^N applies in the archimedean case only.
pub fn pw_seminorm(
    fam: &SpaceFamily,
    f: &FamilyFunction,
    r: f64,
    n: u32,
) -> Result<PwSeminormReport, FunctionError> {
    f.check_family(fam)?;
    if !(r > 0.0) {
        return Err(FunctionError::ClassMismatch("type radius must be positive".into()));
    }
    if !f.class.is_pw() && !matches!(f.class, FamilyClass::Cc { .. }) {
        return Err(FunctionError::ClassMismatch(
            "Paley–Wiener seminorm requires a PW-class function (or its Cc preimage)".into(),
        ));
    }
    let d = fam.dim();
    let re_samples = 9usize;
    let im_samples = 33usize;
    let mut value = 0.0f64;
    let mut diverging = false;
    for (id, rep) in &f.components {
        let comp = fam
            .component(id)
            .map_err(|_| FunctionError::UnknownComponent(id.0.clone()))?;
        match rep {
            ComponentRep::Torus(t) => {
                for (k, c) in &t.fourier_coefficients {
                    if c.norm() != 0.0 {
                        let norm = fam
                            .lattice_point_norm(id, k)
                            .map_err(|_| FunctionError::UnknownComponent(id.0.clone()))?;
                        if norm > r * (1.0 + 1e-12) {
                            diverging = true;
                        }
                    }
                }
                let dual = crate::spaces::dual_lattice(fam, id)
                    .map_err(|_| FunctionError::UnknownComponent(id.0.clone()))?
                    .to_real();
                let maxfreq = t
                    .fourier_coefficients
                    .keys()
                    .flat_map(|k| k.iter().map(|x| x.unsigned_abs()))
                    .max()
                    .unwrap_or(0);
                let m = (2 * maxfreq as usize + 1) * 2 + 1;
                let m = m.min(im_samples.max(3));
                for_each_box_point(d, re_samples, |re_idx| {
                    let rho: Vec<f64> = re_idx
                        .iter()
                        .map(|&i| {
                            -2.0 * r + 4.0 * r * i as f64 / (re_samples.max(2) - 1) as f64
                        })
                        .collect();
                    for_each_box_point(d, m, |im_idx| {
                        // centered fundamental cell in dual-basis coords
                        let t_coord: Vec<f64> = im_idx
                            .iter()
                            .map(|&j| j as f64 / m as f64 - 0.5)
                            .collect();
                        let l: Vec<f64> = (0..d)
                            .map(|i| {
                                core::f64::consts::TAU
                                    * (0..d)
                                        .map(|j| dual[(i, j)] * t_coord[j])
                                        .sum::<f64>()
                            })
                            .collect();
                        if let Ok(v) = torus_eval_complexified(fam, t, &rho, &l) {
                            let damp = (-r * fam.covector_norm(&rho)).exp();
                            value = value.max(v.norm() * damp);
                        }
                    });
                });
            }
            ComponentRep::Grid(g) if g.side == Side::X => {
                if let Some(s) = g.support_radius {
                    if s > r * (1.0 + 1e-12) {
                        diverging = true;
                    }
                }
                let lim = 4.0 * (1.0 + 2.0 * r);
                for_each_box_point(d, re_samples, |re_idx| {
                    let rho: Vec<f64> = re_idx
                        .iter()
                        .map(|&i| {
                            -2.0 * r + 4.0 * r * i as f64 / (re_samples.max(2) - 1) as f64
                        })
                        .collect();
                    for_each_box_point(d, im_samples, |im_idx| {
                        let l: Vec<f64> = im_idx
                            .iter()
                            .map(|&i| {
                                -lim + 2.0 * lim * i as f64 / (im_samples - 1) as f64
                            })
                            .collect();
                        let v = finite_fourier_integral(g, &rho, &l);
                        let lam_norm = (fam.covector_norm(&rho).powi(2)
                            + fam.covector_norm(&l).powi(2))
                        .sqrt();
                        let weight = (1.0 + comp.norm() + lam_norm).powi(n as i32);
                        let damp = (-r * fam.covector_norm(&rho)).exp();
                        value = value.max(v.norm() * weight * damp);
                    });
                });
            }
            _ => {
                return Err(FunctionError::ClassMismatch(
                    "PW seminorm requires a torus series or an X-side preimage grid".into(),
                ))
            }
        }
    }
    Ok(PwSeminormReport {
        value,
        diverging,
        re_samples_per_dim: re_samples,
        im_samples_per_dim: im_samples,
    })
}

/// φ̂(ρ + iℓ) = h^d Σ_x φ(x) e^{−ρ·x − iℓ·x}, the entire extension of the
/// transform of a compactly supported grid function.
pub(crate) fn finite_fourier_integral(g: &GridFunction, rho: &[f64], l: &[f64]) -> crate::C64 {
    let mut acc = crate::C64::new(0.0, 0.0);
    let weight = g.step.powi(g.dim as i32);
    g.for_each_index(|idx, v| {
        if v.norm() != 0.0 {
            let x = g.coordinate_of(idx);
            let re: f64 = -x.iter().zip(rho).map(|(a, b)| a * b).sum::<f64>();
            let im: f64 = -x.iter().zip(l).map(|(a, b)| a * b).sum::<f64>();
            acc += v * crate::C64::new(re, im).exp();
        }
    });
    acc * weight
}

/// Reclassifies a PW-class function as Schwartz-class, deriving the decay
/// certificate (with exponent `n`) from the stored data. The inclusion
/// PW ⊂ Schwartz; only the certificate is computed, the data is shared.
pub fn reclassify_pw_as_schwartz(
    fam: &SpaceFamily,
    f: &FamilyFunction,
    n: u32,
) -> Result<FamilyFunction, FunctionError> {
    f.check_family(fam)?;
    if !f.class.is_pw() {
        return Err(FunctionError::ClassMismatch("input is not PW-class".into()));
    }
    let mut out = f.clone();
    let mut family_constant = 0.0f64;
    for (id, rep) in &mut out.components {
        let comp = fam
            .component(id)
            .map_err(|_| FunctionError::UnknownComponent(id.0.clone()))?;
        match rep {
            ComponentRep::Torus(t) => {
                let zero = vec![0u32; fam.dim()];
                let sup = torus_weighted_sup(fam, t, comp.norm(), &zero, n)?;
                let c = sup * (1.0 + 1e-9) + 1e-300;
                t.class = TorusClass::Schwartz { cert: DecayCert { constant: c, exponent: n } };
                family_constant = family_constant.max(c);
            }
            ComponentRep::Grid(g) if g.side == Side::Lambda => {
                let zero = vec![0u32; fam.dim()];
                let sup = grid_weighted_sup(fam, g, comp.norm(), &zero, n, CoordNorm::Covector);
                family_constant = family_constant.max(sup * (1.0 + 1e-9) + 1e-300);
            }
            _ => {
                return Err(FunctionError::ClassMismatch(
                    "reclassify the Λ-side transform, not its X-side preimage".into(),
                ))
            }
        }
    }
    out.class = FamilyClass::Schwartz {
        cert: DecayCert { constant: family_constant, exponent: n },
    };
    Ok(out)
}

/// sup over a sampled fundamental domain of |∂^deriv φ(λ)| (1+‖e‖+‖λ‖)^N
/// for a Fourier series; derivatives are exact term-wise multipliers.
pub(crate) fn torus_weighted_sup(
    fam: &SpaceFamily,
    t: &TorusFunction,
    e_norm: f64,
    deriv: &[u32],
    n: u32,
) -> Result<f64, FunctionError> {
    let d = fam.dim();
    let deriv_full;
    let deriv = if deriv.is_empty() {
        deriv_full = vec![0u32; d];
        &deriv_full
    } else {
        deriv
    };
    let basis = fam
        .lattice_basis(&t.component)
        .map_err(|_| FunctionError::UnknownComponent(t.component.0.clone()))?;
    // term-wise derivative: multiply c(k) by ∏ (i x_j)^{α_j}
    let modified: Vec<(Vec<f64>, crate::C64)> = t
        .fourier_coefficients
        .iter()
        .map(|(k, &c)| {
            let x: Vec<f64> = (0..d)
                .map(|i| (0..d).map(|j| basis[(i, j)] as f64 * k[j] as f64).sum())
                .collect();
            let mut factor = crate::C64::new(1.0, 0.0);
            for (j, &a) in deriv.iter().enumerate() {
                for _ in 0..a {
                    factor *= crate::C64::new(0.0, x[j]);
                }
            }
            (x, c * factor)
        })
        .collect();
    if d == 0 {
        let v: crate::C64 = modified.iter().map(|(_, c)| *c).sum();
        return Ok(v.norm() * (1.0 + e_norm).powi(n as i32));
    }
    let dual = crate::spaces::dual_lattice(fam, &t.component)
        .map_err(|_| FunctionError::UnknownComponent(t.component.0.clone()))?
        .to_real();
    let maxfreq = t
        .fourier_coefficients
        .keys()
        .flat_map(|k| k.iter().map(|x| x.unsigned_abs()))
        .max()
        .unwrap_or(0) as usize;
    let m = (4 * maxfreq + 5).min(64);
    let mut sup = 0.0f64;
    for_each_box_point(d, m, |idx| {
        let t_coord: Vec<f64> = idx.iter().map(|&j| j as f64 / m as f64 - 0.5).collect();
        let l: Vec<f64> = (0..d)
            .map(|i| {
                core::f64::consts::TAU
                    * (0..d).map(|j| dual[(i, j)] * t_coord[j]).sum::<f64>()
            })
            .collect();
        let mut v = crate::C64::new(0.0, 0.0);
        for (x, c) in &modified {
            let phase: f64 = x.iter().zip(&l).map(|(a, b)| a * b).sum();
            v += c * crate::C64::new(0.0, phase).exp();
        }
        let weight = (1.0 + e_norm + fam.covector_norm(&l)).powi(n as i32);
        sup = sup.max(v.norm() * weight);
    });
    Ok(sup)
}

pub(crate) enum CoordNorm {
    Point,
    Covector,
}

/// sup over stencil-valid grid samples of |∂^deriv φ| (1+‖e‖+‖·‖)^N.
pub(crate) fn grid_weighted_sup(
    fam: &SpaceFamily,
    g: &GridFunction,
    e_norm: f64,
    deriv: &[u32],
    n: u32,
    coord_norm: CoordNorm,
) -> f64 {
    let mut work = g.clone();
    let mut margin = 0usize;
    for (axis, &count) in deriv.iter().enumerate() {
        for _ in 0..count {
            work = work.central_difference(axis);
            margin += 2;
        }
    }
    let mut sup = 0.0f64;
    work.for_each_index(|idx, v| {
        if !work.is_interior(idx, margin) {
            return;
        }
        let coord = work.coordinate_of(idx);
        let norm = match coord_norm {
            CoordNorm::Point => fam.point_norm(&coord),
            CoordNorm::Covector => fam.covector_norm(&coord),
        };
        let weight = (1.0 + e_norm + norm).powi(n as i32);
        sup = sup.max(v.norm() * weight);
    });
    sup
}

fn for_each_box_point(dim: usize, per_dim: usize, mut body: impl FnMut(&[usize])) {
    if dim == 0 {
        body(&[]);
        return;
    }
    let mut idx = vec![0usize; dim];
    let total = per_dim.pow(dim as u32);
    for _ in 0..total {
        body(&idx);
        for k in (0..dim).rev() {
            idx[k] += 1;
            if idx[k] < per_dim {
                break;
            }
            idx[k] = 0;
        }
    }
}
