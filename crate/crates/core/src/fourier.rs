//! Per-component Fourier isomorphisms between X-side and Λ-side
//! representations.
//!
//! Kernel convention: the default pairing is e^{−⟨λ,x⟩} with λ = iℓ, i.e.
//! e^{−iℓ·x} in coordinates, which makes Λ-side periodicity with respect to
//! Γ^∨ = Hom(Γ, 2πiZ) exact. The `TwoPi` convention (kernel e^{−2πiℓ·x})
//! is available for archimedean grid transforms as a comparison flag; on
//! non-archimedean components the two conventions differ only by the 2π
//! rescaling of λ that the dual-lattice bookkeeping already absorbs.
//!
//! Measures: the X-side carries counting measure (non-archimedean) or h^d
//! Riemann weights (archimedean); the Λ-side inverse uses the normalised
//! Haar measure of the compact torus, pinned by the requirement that
//! inverse ∘ forward is the identity. The Lebesgue mass of the fundamental
//! domain, (2π)^d / covol(Γ), is exposed in the round-trip report.

use crate::functions::{
    ComponentRep, DecayCert, DecayClass, FamilyClass, FamilyFunction, FunctionError,
    GridFunction, LatticeFunction, Side, TorusClass, TorusFunction,
};
use crate::spaces::{ComponentId, SpaceError, SpaceFamily};
use crate::C64;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelConvention {
    /// e^{−iℓ·x}: angular frequencies, exact Γ^∨-periodicity.
    #[default]
    Angular,
    /// e^{−2πiℓ·x}: the self-dual-Gaussian normalisation.
    TwoPi,
}

impl KernelConvention {
    fn factor(self) -> f64 {
        match self {
            KernelConvention::Angular => 1.0,
            KernelConvention::TwoPi => core::f64::consts::TAU,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub window: f64,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TransformOptions {
    pub kernel: KernelConvention,
    /// Output grid for archimedean forward transforms; defaults to the
    /// Nyquist-dual grid (window π/(c·h), step π/(c·L) with c the kernel
    /// factor).
    pub lambda_grid: Option<GridSpec>,
    /// Output grid for archimedean inverse transforms; defaults to the
    /// Nyquist dual of the Λ-side grid.
    pub x_grid: Option<GridSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FourierError {
    ClassMismatch(String),
    WindowTooSmall { support: f64, window: f64 },
    Function(FunctionError),
    Space(SpaceError),
}

impl core::fmt::Display for FourierError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FourierError::ClassMismatch(m) => write!(f, "class mismatch: {m}"),
            FourierError::WindowTooSmall { support, window } => {
                write!(f, "support radius {support} exceeds the grid window {window}")
            }
            FourierError::Function(e) => write!(f, "{e}"),
            FourierError::Space(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FourierError {}

impl From<FunctionError> for FourierError {
    fn from(e: FunctionError) -> Self {
        FourierError::Function(e)
    }
}

impl From<SpaceError> for FourierError {
    fn from(e: SpaceError) -> Self {
        FourierError::Space(e)
    }
}

/// Forward transform φ ↦ φ̂, component by component.
///
/// Non-archimedean: the exact finite sum φ̂(λ) = Σ_x c(x) e^{−⟨λ,x⟩},
/// represented as a Fourier series with frequency support −supp(c); the
/// exponential type of the output equals the achieved support radius of the
/// input (exact bookkeeping). Archimedean: Riemann sum on the stored grid.
pub fn forward(
    fam: &SpaceFamily,
    f: &FamilyFunction,
    opts: &TransformOptions,
) -> Result<FamilyFunction, FourierError> {
    f.check_family(fam)?;
    let class = match f.class {
        FamilyClass::Cc { .. } | FamilyClass::Schwartz { .. } => f.class,
        _ => {
            return Err(FourierError::ClassMismatch(
                "forward transform expects a Cc- or Schwartz-class X-side function".into(),
            ))
        }
    };
    let mut achieved_radius = 0.0f64;
    let mut components = BTreeMap::new();
    for (id, rep) in &f.components {
        match rep {
            ComponentRep::Lattice(l) => {
                let (t, radius) = forward_lattice(fam, id, l)?;
                achieved_radius = achieved_radius.max(radius);
                components.insert(id.clone(), ComponentRep::Torus(t));
            }
            ComponentRep::Grid(g) if g.side == Side::X => {
                let (out, radius) = forward_grid(fam, id, g, opts)?;
                achieved_radius = achieved_radius.max(radius);
                components.insert(id.clone(), ComponentRep::Grid(out));
            }
            _ => {
                return Err(FourierError::ClassMismatch(
                    "forward transform expects X-side data".into(),
                ))
            }
        }
    }
    let out_class = match class {
        FamilyClass::Cc { .. } => FamilyClass::Pw { type_radius: achieved_radius },
        FamilyClass::Schwartz { cert } => FamilyClass::Schwartz { cert },
        _ => unreachable!(),
    };
    Ok(FamilyFunction {
        family_label: f.family_label.clone(),
        class: out_class,
        components,
    })
}

fn forward_lattice(
    fam: &SpaceFamily,
    id: &ComponentId,
    l: &LatticeFunction,
) -> Result<(TorusFunction, f64), FourierError> {
    let mut coeffs: BTreeMap<Vec<i64>, C64> = BTreeMap::new();
    let mut radius = 0.0f64;
    for (k, &c) in &l.coefficients {
        let neg: Vec<i64> = k.iter().map(|x| -x).collect();
        radius = radius.max(fam.lattice_point_norm(id, k)?);
        coeffs.insert(neg, c);
    }
    let class = match &l.decay {
        DecayClass::CompactSupport { .. } => TorusClass::PaleyWiener { type_radius: radius },
        DecayClass::RapidDecay { cert, .. } => {
            // |φ̂(λ)| ≤ Σ|c| on the real torus; weight by the largest λ in
            // the centered fundamental cell for the stored exponent.
            let sum: f64 = l.coefficients.values().map(|c| c.norm()).sum();
            let lam_max = max_fundamental_covector_norm(fam, id)?;
            let constant = sum * (1.0 + lam_max).powi(cert.exponent as i32) + 1e-300;
            TorusClass::Schwartz { cert: DecayCert { constant, exponent: cert.exponent } }
        }
    };
    Ok((
        TorusFunction {
            component: id.clone(),
            fourier_coefficients: coeffs,
            class,
        },
        radius,
    ))
}

fn max_fundamental_covector_norm(
    fam: &SpaceFamily,
    id: &ComponentId,
) -> Result<f64, FourierError> {
    let d = fam.dim();
    if d == 0 {
        return Ok(0.0);
    }
    let dual = crate::spaces::dual_lattice(fam, id)?.to_real();
    let mut best = 0.0f64;
    for corner in 0..(1u32 << d) {
        let t: Vec<f64> = (0..d)
            .map(|j| if corner >> j & 1 == 1 { 0.5 } else { -0.5 })
            .collect();
        let l: Vec<f64> = (0..d)
            .map(|i| core::f64::consts::TAU * (0..d).map(|j| dual[(i, j)] * t[j]).sum::<f64>())
            .collect();
        best = best.max(fam.covector_norm(&l));
    }
    Ok(best)
}

fn forward_grid(
    fam: &SpaceFamily,
    id: &ComponentId,
    g: &GridFunction,
    opts: &TransformOptions,
) -> Result<(GridFunction, f64), FourierError> {
    g.check_geometry()
        .map_err(|e| FourierError::ClassMismatch(alloc::format!("{e}")))?;
    if let Some(r) = g.support_radius {
        if r > g.window + 1e-12 {
            return Err(FourierError::WindowTooSmall { support: r, window: g.window });
        }
    }
    let c = opts.kernel.factor();
    let spec = opts.lambda_grid.unwrap_or(GridSpec {
        window: core::f64::consts::PI / (c * g.step),
        step: core::f64::consts::PI / (c * g.window),
    });
    let d = g.dim;
    let weight = g.step.powi(d as i32);
    // Achieved support radius: largest metric norm over nonzero samples.
    let mut radius = 0.0f64;
    let mut support: Vec<(Vec<f64>, C64)> = Vec::new();
    g.for_each_index(|idx, v| {
        if v.norm() != 0.0 {
            let x = g.coordinate_of(idx);
            radius = radius.max(fam.point_norm(&x));
            support.push((x, v));
        }
    });
    let out = GridFunction::sample(
        id.clone(),
        Side::Lambda,
        d,
        spec.window,
        spec.step,
        None,
        |l| {
            let mut acc = C64::new(0.0, 0.0);
            for (x, v) in &support {
                let phase: f64 = -c * x.iter().zip(l).map(|(a, b)| a * b).sum::<f64>();
                acc += v * C64::new(0.0, phase).exp();
            }
            acc * weight
        },
    )
    .map_err(|e| FourierError::ClassMismatch(alloc::format!("{e}")))?;
    Ok((out, radius))
}

/// Inverse transform φ̂ ↦ φ.
///
/// Non-archimedean: coefficient extraction by exact character-orthogonality
/// quadrature over one fundamental domain, sampled at M_j = 2·maxfreq_j + 1
/// points per dimension (derived from the stored support); the extraction
/// is the independent dual route to the stored coefficients. Archimedean:
/// discretised inverse integral with the Pontryagin-dual weight
/// (2π)^{−d} η^d (Angular) or η^d (TwoPi).
pub fn inverse(
    fam: &SpaceFamily,
    f: &FamilyFunction,
    opts: &TransformOptions,
) -> Result<FamilyFunction, FourierError> {
    f.check_family(fam)?;
    let class = match f.class {
        FamilyClass::Pw { .. } | FamilyClass::PwF { .. } | FamilyClass::Schwartz { .. } => {
            f.class
        }
        _ => {
            return Err(FourierError::ClassMismatch(
                "inverse transform expects a PW- or Schwartz-class Λ-side function".into(),
            ))
        }
    };
    let mut achieved_radius = 0.0f64;
    let mut components = BTreeMap::new();
    for (id, rep) in &f.components {
        match rep {
            ComponentRep::Torus(t) => {
                let (l, radius) = inverse_torus(fam, id, t)?;
                achieved_radius = achieved_radius.max(radius);
                components.insert(id.clone(), ComponentRep::Lattice(l));
            }
            ComponentRep::Grid(g) if g.side == Side::Lambda => {
                let out = inverse_grid(id, g, &class, opts)?;
                achieved_radius = achieved_radius.max(out.support_radius.unwrap_or(0.0));
                components.insert(id.clone(), ComponentRep::Grid(out));
            }
            _ => {
                return Err(FourierError::ClassMismatch(
                    "inverse transform expects Λ-side data".into(),
                ))
            }
        }
    }
    let out_class = match class {
        FamilyClass::Pw { .. } | FamilyClass::PwF { .. } => {
            FamilyClass::Cc { radius: achieved_radius }
        }
        FamilyClass::Schwartz { cert } => FamilyClass::Schwartz { cert },
        _ => unreachable!(),
    };
    Ok(FamilyFunction {
        family_label: f.family_label.clone(),
        class: out_class,
        components,
    })
}

fn inverse_torus(
    fam: &SpaceFamily,
    id: &ComponentId,
    t: &TorusFunction,
) -> Result<(LatticeFunction, f64), FourierError> {
    let d = fam.dim();
    let keys: Vec<&Vec<i64>> = t.fourier_coefficients.keys().collect();
    // Per-dimension sampling counts derived from the support.
    let m: Vec<usize> = (0..d)
        .map(|j| {
            let maxfreq =
                keys.iter().map(|k| k[j].unsigned_abs() as usize).max().unwrap_or(0);
            2 * maxfreq + 1
        })
        .collect();
    let total: usize = m.iter().product::<usize>().max(1);
    // Sample φ over the fundamental domain (normalised Haar = average).
    let mut samples: Vec<C64> = Vec::with_capacity(total);
    let mut idx = vec![0usize; d];
    let zeros = alloc::vec![0.0f64; d];
    let dual = if d > 0 {
        Some(crate::spaces::dual_lattice(fam, id)?.to_real())
    } else {
        None
    };
    for _ in 0..total {
        let l: Vec<f64> = match &dual {
            Some(dual) => (0..d)
                .map(|i| {
                    core::f64::consts::TAU
                        * (0..d)
                            .map(|j| dual[(i, j)] * (idx[j] as f64 / m[j] as f64))
                            .sum::<f64>()
                })
                .collect(),
            None => vec![],
        };
        let v = crate::functions::torus_eval_complexified(fam, t, &zeros, &l)
            .map_err(FourierError::Function)?;
        samples.push(v);
        for k in (0..d).rev() {
            idx[k] += 1;
            if idx[k] < m[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    // Extract each stored frequency by the exact inverse character sum.
    let mut coefficients: BTreeMap<Vec<i64>, C64> = BTreeMap::new();
    let mut radius = 0.0f64;
    for key in keys {
        let mut acc = C64::new(0.0, 0.0);
        let mut idx = vec![0usize; d];
        for s in &samples {
            let phase: f64 = (0..d)
                .map(|j| {
                    -core::f64::consts::TAU * idx[j] as f64 * key[j] as f64 / m[j] as f64
                })
                .sum();
            acc += s * C64::new(0.0, phase).exp();
            for k in (0..d).rev() {
                idx[k] += 1;
                if idx[k] < m[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        let c = acc / total as f64;
        // X-side frequency is the negation (kernel e^{−⟨λ,x⟩}).
        let x: Vec<i64> = key.iter().map(|v| -v).collect();
        radius = radius.max(fam.lattice_point_norm(id, &x)?);
        coefficients.insert(x, c);
    }
    let decay = match &t.class {
        TorusClass::PaleyWiener { .. } => DecayClass::CompactSupport { radius },
        TorusClass::Schwartz { cert } => {
            DecayClass::RapidDecay { cert: *cert, truncation_radius: radius }
        }
    };
    Ok((
        LatticeFunction { component: id.clone(), coefficients, decay },
        radius,
    ))
}

fn inverse_grid(
    id: &ComponentId,
    g: &GridFunction,
    class: &FamilyClass,
    opts: &TransformOptions,
) -> Result<GridFunction, FourierError> {
    g.check_geometry()
        .map_err(|e| FourierError::ClassMismatch(alloc::format!("{e}")))?;
    let c = opts.kernel.factor();
    let spec = opts.x_grid.unwrap_or(GridSpec {
        window: core::f64::consts::PI / (c * g.step),
        step: core::f64::consts::PI / (c * g.window),
    });
    let d = g.dim;
    let dual_weight = g.step.powi(d as i32)
        * match opts.kernel {
            KernelConvention::Angular => core::f64::consts::TAU.powi(-(d as i32)),
            KernelConvention::TwoPi => 1.0,
        };
    let mut support: Vec<(Vec<f64>, C64)> = Vec::new();
    g.for_each_index(|idx, v| {
        if v.norm() != 0.0 {
            support.push((g.coordinate_of(idx), v));
        }
    });
    let clip_radius = match class {
        FamilyClass::Pw { type_radius } | FamilyClass::PwF { type_radius } => {
            Some(*type_radius)
        }
        _ => None,
    };
    let out = GridFunction::sample(
        id.clone(),
        Side::X,
        d,
        spec.window,
        spec.step,
        clip_radius.map(|r| r.min(spec.window)),
        |x| {
            // A type-r function is supported in the r-ball; discretisation
            // residue outside is clipped to keep the Cc certificate exact.
            if let Some(r) = clip_radius {
                let norm2: f64 = x.iter().map(|t| t * t).sum();
                if norm2.sqrt() > r + 1e-12 {
                    return C64::new(0.0, 0.0);
                }
            }
            let mut acc = C64::new(0.0, 0.0);
            for (l, v) in &support {
                let phase: f64 = c * x.iter().zip(l).map(|(a, b)| a * b).sum::<f64>();
                acc += v * C64::new(0.0, phase).exp();
            }
            acc * dual_weight
        },
    )
    .map_err(|e| FourierError::ClassMismatch(alloc::format!("{e}")))?;
    Ok(out)
}

/// Per-component round-trip error summary for f − inverse(forward(f)).
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentRoundtrip {
    pub component: String,
    pub sup_error: f64,
    pub l2_error: f64,
    /// Non-archimedean: Lebesgue mass (2π)^d / covol(Γ) of the fundamental
    /// domain the normalised dual measure lives on.
    pub dual_domain_mass: Option<f64>,
    /// Archimedean: |φ̂| at the dual window boundary relative to its peak;
    /// large values mean the round-trip error is truncation-dominated.
    pub boundary_ratio: Option<f64>,
    pub nan_detected: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundtripReport {
    pub components: Vec<ComponentRoundtrip>,
    pub sup_error: f64,
    pub l2_error: f64,
    /// True when the error is dominated by window truncation rather than
    /// resolution (boundary ratio above 1e−3 on some component).
    pub truncation_dominated: bool,
    pub nan_detected: bool,
}

/// Runs inverse ∘ forward and reports errors; never raises on numeric
/// trouble (NaNs are flagged instead).
pub fn roundtrip_report(
    fam: &SpaceFamily,
    f: &FamilyFunction,
    opts: &TransformOptions,
) -> Result<RoundtripReport, FourierError> {
    let hat = forward(fam, f, opts)?;
    let back = inverse(fam, &hat, opts)?;
    let mut components = Vec::new();
    let mut sup_all = 0.0f64;
    let mut l2_all = 0.0f64;
    let mut truncation = false;
    let mut nan_all = false;
    for (id, rep) in &f.components {
        let mut sup = 0.0f64;
        let mut l2 = 0.0f64;
        let mut nan = false;
        let mut dual_domain_mass = None;
        let mut boundary_ratio = None;
        match (rep, back.components.get(id)) {
            (ComponentRep::Lattice(orig), Some(ComponentRep::Lattice(rec))) => {
                for (k, c) in &orig.coefficients {
                    let r = rec.coefficients.get(k).copied().unwrap_or(C64::new(0.0, 0.0));
                    let d = (c - r).norm();
                    if d.is_nan() {
                        nan = true;
                    }
                    sup = sup.max(d);
                    l2 += d * d;
                }
                l2 = l2.sqrt();
                let covol = crate::spaces::lattice_covolume(fam, id)?;
                dual_domain_mass =
                    Some(core::f64::consts::TAU.powi(fam.dim() as i32) / covol);
            }
            (ComponentRep::Grid(orig), Some(ComponentRep::Grid(rec))) => {
                // Compare on the original grid; under default options the
                // reconstructed grid has identical geometry.
                let same_geometry = orig.window == rec.window
                    && orig.step == rec.step
                    && orig.dim == rec.dim;
                let weight = orig.step.powi(orig.dim as i32);
                orig.for_each_index(|idx, v| {
                    let r = if same_geometry {
                        rec.samples[rec.index_of(idx)]
                    } else {
                        rec.eval(&orig.coordinate_of(idx)).unwrap_or(C64::new(0.0, 0.0))
                    };
                    let d = (v - r).norm();
                    if d.is_nan() {
                        nan = true;
                    }
                    sup = sup.max(d);
                    l2 += d * d * weight;
                });
                l2 = l2.sqrt();
                if let Some(ComponentRep::Grid(hatg)) = hat.components.get(id) {
                    boundary_ratio = Some(grid_boundary_ratio(hatg));
                    if boundary_ratio.unwrap_or(0.0) > 1e-3 {
                        truncation = true;
                    }
                }
            }
            _ => {
                sup = f64::INFINITY;
            }
        }
        sup_all = sup_all.max(sup);
        l2_all = l2_all.max(l2);
        nan_all |= nan;
        components.push(ComponentRoundtrip {
            component: id.0.clone(),
            sup_error: sup,
            l2_error: l2,
            dual_domain_mass,
            boundary_ratio,
            nan_detected: nan,
        });
    }
    Ok(RoundtripReport {
        components,
        sup_error: sup_all,
        l2_error: l2_all,
        truncation_dominated: truncation,
        nan_detected: nan_all,
    })
}

fn grid_boundary_ratio(g: &GridFunction) -> f64 {
    let n = g.points_per_axis();
    let mut peak = 0.0f64;
    let mut boundary = 0.0f64;
    g.for_each_index(|idx, v| {
        let m = v.norm();
        peak = peak.max(m);
        if idx.iter().any(|&i| i == 0 || i + 1 == n) {
            boundary = boundary.max(m);
        }
    });
    if peak == 0.0 {
        0.0
    } else {
        boundary / peak
    }
}

/// ‖f‖² on the X-side under its measure (counting / h^d Riemann weights).
pub fn l2_norm_sq_x(f: &FamilyFunction) -> f64 {
    let mut acc = 0.0;
    for rep in f.components.values() {
        match rep {
            ComponentRep::Lattice(l) => {
                acc += l.coefficients.values().map(|c| c.norm_sqr()).sum::<f64>();
            }
            ComponentRep::Grid(g) if g.side == Side::X => {
                let w = g.step.powi(g.dim as i32);
                acc += g.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * w;
            }
            _ => {}
        }
    }
    acc
}

/// ‖φ̂‖² on the Λ-side under the dual measure: normalised Haar quadrature
/// for torus series, the Pontryagin-dual weight for grids.
pub fn l2_norm_sq_lambda(
    fam: &SpaceFamily,
    f: &FamilyFunction,
    opts: &TransformOptions,
) -> Result<f64, FourierError> {
    let mut acc = 0.0;
    for (id, rep) in &f.components {
        match rep {
            ComponentRep::Torus(t) => {
                let d = fam.dim();
                let m: Vec<usize> = (0..d)
                    .map(|j| {
                        let maxfreq = t
                            .fourier_coefficients
                            .keys()
                            .map(|k| k[j].unsigned_abs() as usize)
                            .max()
                            .unwrap_or(0);
                        2 * maxfreq + 1
                    })
                    .collect();
                let total: usize = m.iter().product::<usize>().max(1);
                let dual = if d > 0 {
                    Some(crate::spaces::dual_lattice(fam, id)?.to_real())
                } else {
                    None
                };
                let mut idx = vec![0usize; d];
                let zeros = vec![0.0f64; d];
                let mut sum = 0.0;
                for _ in 0..total {
                    let l: Vec<f64> = match &dual {
                        Some(dual) => (0..d)
                            .map(|i| {
                                core::f64::consts::TAU
                                    * (0..d)
                                        .map(|j| dual[(i, j)] * (idx[j] as f64 / m[j] as f64))
                                        .sum::<f64>()
                            })
                            .collect(),
                        None => vec![],
                    };
                    let v = crate::functions::torus_eval_complexified(fam, t, &zeros, &l)
                        .map_err(FourierError::Function)?;
                    sum += v.norm_sqr();
                    for k in (0..d).rev() {
                        idx[k] += 1;
                        if idx[k] < m[k] {
                            break;
                        }
                        idx[k] = 0;
                    }
                }
                acc += sum / total as f64;
            }
            ComponentRep::Grid(g) if g.side == Side::Lambda => {
                let d = g.dim as i32;
                let w = g.step.powi(d)
                    * match opts.kernel {
                        KernelConvention::Angular => core::f64::consts::TAU.powi(-d),
                        KernelConvention::TwoPi => 1.0,
                    };
                acc += g.samples.iter().map(|c| c.norm_sqr()).sum::<f64>() * w;
            }
            _ => {
                return Err(FourierError::ClassMismatch(
                    "Λ-side norm requires Λ-side data".into(),
                ))
            }
        }
    }
    Ok(acc)
}
