//! Concrete finite representations of the four function classes on a
//! component family and its dual: compactly supported and Schwartz functions
//! on the X-side, Paley–Wiener and Schwartz functions on the Λ-side.
//!
//! Decay and support certificates are stored, not inferred: constructors
//! accept them as data and [`check_class`] verifies them against everything
//! stored. Evaluation is exact for coefficient representations and
//! multilinear for grids.

mod grid;
mod seminorm;

pub use grid::{GridError, GridFunction, Side};
pub use seminorm::{
    pw_seminorm, reclassify_pw_as_schwartz, schwartz_seminorm, x_seminorm, PwSeminormReport,
    SeminormReport,
};

use crate::spaces::{ComponentId, SpaceFamily, ValidationReport};
use crate::C64;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] use num_traits::Float;

/// A certified decay bound |φ(x)| ≤ C (1 + ‖x‖)^{−N}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCert {
    pub constant: f64,
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DecayClass {
    CompactSupport { radius: f64 },
    RapidDecay { cert: DecayCert, truncation_radius: f64 },
}

/// Function on a lattice Γ_e (X-side, non-archimedean), finitely many
/// stored coefficients in Γ_e-basis integer coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFunction {
    pub component: ComponentId,
    pub coefficients: BTreeMap<Vec<i64>, C64>,
    pub decay: DecayClass,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TorusClass {
    /// Finite exponential type `r`; equivalently coefficient support within
    /// the metric ball of radius `r`.
    PaleyWiener { type_radius: f64 },
    Schwartz { cert: DecayCert },
}

/// Function on a compact torus Λ_e = iV*/Γ_e^∨ (Λ-side, non-archimedean):
/// λ ↦ Σ_x c(x) e^{⟨λ, x⟩} over finitely many frequencies x ∈ Γ_e.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusFunction {
    pub component: ComponentId,
    pub fourier_coefficients: BTreeMap<Vec<i64>, C64>,
    pub class: TorusClass,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentRep {
    Lattice(LatticeFunction),
    Torus(TorusFunction),
    Grid(GridFunction),
}

impl ComponentRep {
    pub fn side(&self) -> Side {
        match self {
            ComponentRep::Lattice(_) => Side::X,
            ComponentRep::Torus(_) => Side::Lambda,
            ComponentRep::Grid(g) => g.side,
        }
    }
}

/// Global class tag of a family function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyClass {
    /// X-side, uniformly compactly supported with radius `r`.
    Cc { radius: f64 },
    /// Joint rapid decay in (‖e‖, argument).
    Schwartz { cert: DecayCert },
    /// Λ-side Paley–Wiener of exponential type ≤ `r`.
    Pw { type_radius: f64 },
    /// Paley–Wiener supported on finitely many components, uniform type `r`.
    PwF { type_radius: f64 },
}

impl FamilyClass {
    pub fn is_pw(&self) -> bool {
        matches!(self, FamilyClass::Pw { .. } | FamilyClass::PwF { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyFunction {
    pub family_label: String,
    pub class: FamilyClass,
    pub components: BTreeMap<ComponentId, ComponentRep>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionError {
    UnknownComponent(String),
    FamilyMismatch { expected: String, found: String },
    ClassMismatch(String),
    NotALatticePoint,
    OutOfWindow,
    DimensionMismatch,
}

impl core::fmt::Display for FunctionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FunctionError::UnknownComponent(id) => write!(f, "unknown component id `{id}`"),
            FunctionError::FamilyMismatch { expected, found } => {
                write!(f, "function belongs to family `{found}`, expected `{expected}`")
            }
            FunctionError::ClassMismatch(msg) => write!(f, "class mismatch: {msg}"),
            FunctionError::NotALatticePoint => {
                write!(f, "evaluation point is not a lattice point")
            }
            FunctionError::OutOfWindow => write!(f, "evaluation point outside the grid window"),
            FunctionError::DimensionMismatch => write!(f, "coordinate dimension mismatch"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FunctionError {}

impl FamilyFunction {
    pub fn new(family_label: impl Into<String>, class: FamilyClass) -> Self {
        FamilyFunction {
            family_label: family_label.into(),
            class,
            components: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, rep: ComponentRep) {
        let id = match &rep {
            ComponentRep::Lattice(l) => l.component.clone(),
            ComponentRep::Torus(t) => t.component.clone(),
            ComponentRep::Grid(g) => g.component.clone(),
        };
        self.components.insert(id, rep);
    }

    pub fn check_family(&self, fam: &SpaceFamily) -> Result<(), FunctionError> {
        if fam.label() != self.family_label {
            return Err(FunctionError::FamilyMismatch {
                expected: fam.label().into(),
                found: self.family_label.clone(),
            });
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|rep| match rep {
            ComponentRep::Lattice(l) => l.coefficients.values().all(|c| c.norm() == 0.0),
            ComponentRep::Torus(t) => t.fourier_coefficients.values().all(|c| c.norm() == 0.0),
            ComponentRep::Grid(g) => g.samples.iter().all(|c| c.norm() == 0.0),
        })
    }
}

/// Evaluation pairing: real part ρ and imaginary coordinate ℓ of
/// λ = ρ + iℓ against a lattice frequency in V-coordinates.
pub(crate) fn torus_eval_complexified(
    fam: &SpaceFamily,
    t: &TorusFunction,
    re: &[f64],
    im: &[f64],
) -> Result<C64, FunctionError> {
    let basis = fam
        .lattice_basis(&t.component)
        .map_err(|_| FunctionError::UnknownComponent(t.component.0.clone()))?;
    let d = fam.dim();
    if re.len() != d || im.len() != d {
        return Err(FunctionError::DimensionMismatch);
    }
    let mut acc = C64::new(0.0, 0.0);
    for (k, &c) in &t.fourier_coefficients {
        // x = B k in V-coordinates; ⟨λ, x⟩ = ρ·x + i ℓ·x.
        let mut dot_re = 0.0;
        let mut dot_im = 0.0;
        for i in 0..d {
            let xi: f64 = (0..d).map(|j| basis[(i, j)] as f64 * k[j] as f64).sum();
            dot_re += re[i] * xi;
            dot_im += im[i] * xi;
        }
        acc += c * C64::new(dot_re, dot_im).exp();
    }
    Ok(acc)
}

/// Evaluates a family function at a point of one component.
///
/// * Lattice representations take integer points (within 1e−9) and return
///   exact coefficients; anything off the stored support is 0.
/// * Torus representations accept any coordinate vector ℓ for λ = iℓ.
/// * Grid representations interpolate multilinearly inside their window.
///
/// Components of the family without stored data evaluate to exactly 0;
/// component ids outside the family are an error.
pub fn eval(
    fam: &SpaceFamily,
    f: &FamilyFunction,
    id: &ComponentId,
    point: &[f64],
) -> Result<C64, FunctionError> {
    f.check_family(fam)?;
    fam.component(id)
        .map_err(|_| FunctionError::UnknownComponent(id.0.clone()))?;
    let Some(rep) = f.components.get(id) else {
        return Ok(C64::new(0.0, 0.0));
    };
    match rep {
        ComponentRep::Lattice(l) => {
            if point.len() != fam.dim() {
                return Err(FunctionError::DimensionMismatch);
            }
            let mut key = Vec::with_capacity(point.len());
            for &p in point {
                if (p - p.round()).abs() > 1e-9 {
                    return Err(FunctionError::NotALatticePoint);
                }
                key.push(p.round() as i64);
            }
            Ok(l.coefficients.get(&key).copied().unwrap_or(C64::new(0.0, 0.0)))
        }
        ComponentRep::Torus(t) => {
            let zeros = alloc::vec![0.0; fam.dim()];
            torus_eval_complexified(fam, t, &zeros, point)
        }
        ComponentRep::Grid(g) => g.eval(point).map_err(|e| match e {
            GridError::OutOfWindow => FunctionError::OutOfWindow,
            GridError::BadGeometry(_) => FunctionError::DimensionMismatch,
        }),
    }
}

/// Pointwise sum; both operands must carry the same class variant, and grid
/// representations must share their geometry. The certificate of the sum is
/// the triangle-inequality combination of the operands'.
pub fn add(a: &FamilyFunction, b: &FamilyFunction) -> Result<FamilyFunction, FunctionError> {
    if a.family_label != b.family_label {
        return Err(FunctionError::FamilyMismatch {
            expected: a.family_label.clone(),
            found: b.family_label.clone(),
        });
    }
    let class = match (&a.class, &b.class) {
        (FamilyClass::Cc { radius: r1 }, FamilyClass::Cc { radius: r2 }) => {
            FamilyClass::Cc { radius: r1.max(*r2) }
        }
        (FamilyClass::Pw { type_radius: r1 }, FamilyClass::Pw { type_radius: r2 }) => {
            FamilyClass::Pw { type_radius: r1.max(*r2) }
        }
        (FamilyClass::PwF { type_radius: r1 }, FamilyClass::PwF { type_radius: r2 }) => {
            FamilyClass::PwF { type_radius: r1.max(*r2) }
        }
        (FamilyClass::Schwartz { cert: c1 }, FamilyClass::Schwartz { cert: c2 }) => {
            FamilyClass::Schwartz {
                cert: DecayCert {
                    constant: c1.constant + c2.constant,
                    exponent: c1.exponent.min(c2.exponent),
                },
            }
        }
        _ => {
            return Err(FunctionError::ClassMismatch(format!(
                "cannot add {:?} and {:?}",
                a.class, b.class
            )))
        }
    };
    let mut out = FamilyFunction::new(a.family_label.clone(), class);
    let ids: alloc::collections::BTreeSet<_> =
        a.components.keys().chain(b.components.keys()).cloned().collect();
    for id in ids {
        match (a.components.get(&id), b.components.get(&id)) {
            (Some(ra), None) => out.components.insert(id, ra.clone()),
            (None, Some(rb)) => out.components.insert(id, rb.clone()),
            (Some(ra), Some(rb)) => out.components.insert(id.clone(), add_rep(ra, rb)?),
            (None, None) => unreachable!(),
        };
    }
    Ok(out)
}

fn add_rep(a: &ComponentRep, b: &ComponentRep) -> Result<ComponentRep, FunctionError> {
    match (a, b) {
        (ComponentRep::Lattice(x), ComponentRep::Lattice(y)) => {
            let mut coefficients = x.coefficients.clone();
            for (k, c) in &y.coefficients {
                *coefficients.entry(k.clone()).or_insert(C64::new(0.0, 0.0)) += c;
            }
            let decay = match (&x.decay, &y.decay) {
                (
                    DecayClass::CompactSupport { radius: r1 },
                    DecayClass::CompactSupport { radius: r2 },
                ) => DecayClass::CompactSupport { radius: r1.max(*r2) },
                (
                    DecayClass::RapidDecay { cert: c1, truncation_radius: t1 },
                    DecayClass::RapidDecay { cert: c2, truncation_radius: t2 },
                ) => DecayClass::RapidDecay {
                    cert: DecayCert {
                        constant: c1.constant + c2.constant,
                        exponent: c1.exponent.min(c2.exponent),
                    },
                    truncation_radius: t1.max(*t2),
                },
                _ => {
                    return Err(FunctionError::ClassMismatch(
                        "mixed decay classes on one component".into(),
                    ))
                }
            };
            Ok(ComponentRep::Lattice(LatticeFunction {
                component: x.component.clone(),
                coefficients,
                decay,
            }))
        }
        (ComponentRep::Torus(x), ComponentRep::Torus(y)) => {
            let mut fourier_coefficients = x.fourier_coefficients.clone();
            for (k, c) in &y.fourier_coefficients {
                *fourier_coefficients.entry(k.clone()).or_insert(C64::new(0.0, 0.0)) += c;
            }
            let class = match (&x.class, &y.class) {
                (
                    TorusClass::PaleyWiener { type_radius: r1 },
                    TorusClass::PaleyWiener { type_radius: r2 },
                ) => TorusClass::PaleyWiener { type_radius: r1.max(*r2) },
                (TorusClass::Schwartz { cert: c1 }, TorusClass::Schwartz { cert: c2 }) => {
                    TorusClass::Schwartz {
                        cert: DecayCert {
                            constant: c1.constant + c2.constant,
                            exponent: c1.exponent.min(c2.exponent),
                        },
                    }
                }
                _ => {
                    return Err(FunctionError::ClassMismatch(
                        "mixed torus classes on one component".into(),
                    ))
                }
            };
            Ok(ComponentRep::Torus(TorusFunction {
                component: x.component.clone(),
                fourier_coefficients,
                class,
            }))
        }
        (ComponentRep::Grid(x), ComponentRep::Grid(y)) => {
            if x.window != y.window || x.step != y.step || x.side != y.side || x.dim != y.dim {
                return Err(FunctionError::ClassMismatch(
                    "grid geometries differ on one component".into(),
                ));
            }
            let mut out = x.clone();
            for (s, t) in out.samples.iter_mut().zip(&y.samples) {
                *s += t;
            }
            out.support_radius = match (x.support_radius, y.support_radius) {
                (Some(a), Some(b)) => Some(a.max(b)),
                _ => None,
            };
            Ok(ComponentRep::Grid(out))
        }
        _ => Err(FunctionError::ClassMismatch(
            "mixed representation kinds on one component".into(),
        )),
    }
}

/// Scalar multiple; scales the stored certificates by |a|.
pub fn scale(f: &FamilyFunction, a: C64) -> FamilyFunction {
    let scale_cert = |c: &DecayCert| DecayCert {
        constant: c.constant * a.norm(),
        exponent: c.exponent,
    };
    let class = match &f.class {
        FamilyClass::Schwartz { cert } => FamilyClass::Schwartz { cert: scale_cert(cert) },
        other => *other,
    };
    let mut out = FamilyFunction::new(f.family_label.clone(), class);
    for (id, rep) in &f.components {
        let rep = match rep {
            ComponentRep::Lattice(l) => ComponentRep::Lattice(LatticeFunction {
                component: l.component.clone(),
                coefficients: l
                    .coefficients
                    .iter()
                    .map(|(k, c)| (k.clone(), c * a))
                    .collect(),
                decay: match &l.decay {
                    DecayClass::CompactSupport { radius } => {
                        DecayClass::CompactSupport { radius: *radius }
                    }
                    DecayClass::RapidDecay { cert, truncation_radius } => {
                        DecayClass::RapidDecay {
                            cert: scale_cert(cert),
                            truncation_radius: *truncation_radius,
                        }
                    }
                },
            }),
            ComponentRep::Torus(t) => ComponentRep::Torus(TorusFunction {
                component: t.component.clone(),
                fourier_coefficients: t
                    .fourier_coefficients
                    .iter()
                    .map(|(k, c)| (k.clone(), c * a))
                    .collect(),
                class: match &t.class {
                    TorusClass::PaleyWiener { type_radius } => {
                        TorusClass::PaleyWiener { type_radius: *type_radius }
                    }
                    TorusClass::Schwartz { cert } => {
                        TorusClass::Schwartz { cert: scale_cert(cert) }
                    }
                },
            }),
            ComponentRep::Grid(g) => {
                let mut g = g.clone();
                for s in &mut g.samples {
                    *s *= a;
                }
                ComponentRep::Grid(g)
            }
        };
        out.components.insert(id.clone(), rep);
    }
    out
}

/// Verifies every stored certificate of `f` against its stored data and the
/// family geometry; report style, never errors.
pub fn check_class(fam: &SpaceFamily, f: &FamilyFunction) -> ValidationReport {
    let mut report = ValidationReport::default();
    if f.family_label != fam.label() {
        report.push(None, format!("function references family `{}`", f.family_label));
        return report;
    }
    let uniform_radius = match f.class {
        FamilyClass::Cc { radius } | FamilyClass::PwF { type_radius: radius } => Some(radius),
        FamilyClass::Pw { type_radius } => Some(type_radius),
        FamilyClass::Schwartz { .. } => None,
    };
    for (id, rep) in &f.components {
        let comp = match fam.component(id) {
            Ok(c) => c,
            Err(_) => {
                report.push(Some(id), "component not present in the family");
                continue;
            }
        };
        match rep {
            ComponentRep::Lattice(l) => {
                if l.component != *id {
                    report.push(Some(id), "component id mismatch inside representation");
                }
                for (k, c) in &l.coefficients {
                    let norm = match fam.lattice_point_norm(id, k) {
                        Ok(n) => n,
                        Err(_) => {
                            report.push(Some(id), "lattice data on an archimedean component");
                            break;
                        }
                    };
                    match &l.decay {
                        DecayClass::CompactSupport { radius } => {
                            if c.norm() != 0.0 && norm > radius + 1e-12 {
                                report.push(
                                    Some(id),
                                    format!("coefficient at ‖x‖={norm:.6} outside support radius {radius}"),
                                );
                            }
                        }
                        DecayClass::RapidDecay { cert, truncation_radius } => {
                            if norm > truncation_radius + 1e-12 {
                                report.push(
                                    Some(id),
                                    format!("coefficient at ‖x‖={norm:.6} beyond truncation radius"),
                                );
                            }
                            let bound = cert.constant
                                * (1.0 + norm).powi(-(cert.exponent as i32));
                            if c.norm() > bound + 1e-12 {
                                report.push(
                                    Some(id),
                                    format!(
                                        "decay certificate violated: |c|={} > {bound} at ‖x‖={norm:.6}",
                                        c.norm()
                                    ),
                                );
                            }
                        }
                    }
                }
                if let Some(r) = uniform_radius {
                    if let DecayClass::CompactSupport { radius } = &l.decay {
                        if *radius > r + 1e-12 {
                            report.push(Some(id), "component radius exceeds the family radius");
                        }
                    }
                }
            }
            ComponentRep::Torus(t) => {
                for (k, c) in &t.fourier_coefficients {
                    let norm = match fam.lattice_point_norm(id, k) {
                        Ok(n) => n,
                        Err(_) => {
                            report.push(Some(id), "torus data on an archimedean component");
                            break;
                        }
                    };
                    if let TorusClass::PaleyWiener { type_radius } = &t.class {
                        if c.norm() != 0.0 && norm > type_radius + 1e-12 {
                            report.push(
                                Some(id),
                                format!(
                                    "frequency at ‖x‖={norm:.6} exceeds exponential type {type_radius}"
                                ),
                            );
                        }
                    }
                }
                if let TorusClass::Schwartz { cert } = &t.class {
                    // Certificate against sampled values on the torus.
                    let sup = seminorm::torus_weighted_sup(fam, t, comp.norm(), &[], cert.exponent);
                    if let Ok(sup) = sup {
                        if sup > cert.constant + 1e-9 {
                            report.push(
                                Some(id),
                                format!("Schwartz certificate violated: sampled sup {sup}"),
                            );
                        }
                    }
                }
                if let (Some(r), TorusClass::PaleyWiener { type_radius }) =
                    (uniform_radius, &t.class)
                {
                    if *type_radius > r + 1e-12 {
                        report.push(Some(id), "component type exceeds the family type");
                    }
                }
            }
            ComponentRep::Grid(g) => {
                if let Err(e) = g.check_geometry() {
                    report.push(Some(id), format!("{e}"));
                    continue;
                }
                if g.dim != fam.dim() {
                    report.push(Some(id), "grid dimension differs from the family dimension");
                    continue;
                }
                if g.side == Side::X {
                    if let Some(r) = g.support_radius {
                        g.for_each_index(|idx, v| {
                            let x = g.coordinate_of(idx);
                            let norm = fam.point_norm(&x);
                            if v.norm() != 0.0 && norm > r + 1e-12 {
                                report.push(
                                    Some(id),
                                    format!("sample at ‖x‖={norm:.6} outside support radius {r}"),
                                );
                            }
                        });
                    } else if matches!(f.class, FamilyClass::Cc { .. }) {
                        report.push(Some(id), "Cc-class grid lacks a support radius");
                    }
                }
                if let (Side::Lambda, FamilyClass::Schwartz { cert }) = (g.side, &f.class) {
                    g.for_each_index(|idx, v| {
                        let l = g.coordinate_of(idx);
                        let weight =
                            (1.0 + comp.norm() + fam.covector_norm(&l)).powi(cert.exponent as i32);
                        if v.norm() * weight > cert.constant + 1e-9 {
                            report.push(Some(id), "joint decay certificate violated on a sample");
                        }
                    });
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests;
