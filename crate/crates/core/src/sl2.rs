//! The fully explicit SL2(R) instance: discrete-series and stable
//! characters on the elliptic torus t(θ) = (cos θ, −sin θ; sin θ, cos θ),
//! the Weyl discriminant, the elliptic inner product by quadrature,
//! pseudocoefficients on the elliptic set, and the three-strand stable
//! spectral data model S(Z_{>0}) ⊕ S(R)^even ⊕ S(R)^even.
//!
//! Measure normalisation: vol(SO2(R)) = 1, i.e. dθ/2π, and the rational
//! Weyl group of the elliptic torus is trivial, so the elliptic measure on
//! the regular elliptic set is exactly (1/2π)∫₀^{2π}. With this pinning,
//! ⟨π_σn, π_σ′m⟩_el = δ and ‖φ_n‖²_el = 2 (the packet size) are exact
//! targets. The centraliser volume m(γ) = vol(SO2(R)) defaults to 1.

use crate::functions::{DecayCert, GridFunction, Side};
use crate::quad::{split_node_budget, CompositeRule};
use crate::spaces::{ComponentId, ValidationReport};
use crate::C64;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
#[allow(unused_imports)] use num_traits::Float;

/// Regularity cutoff: |sin θ| at or below this counts as singular.
pub const SINGULAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticTorusPoint {
    theta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sl2Error {
    SingularTheta(f64),
    BadIndex(String),
    QuadratureTooCoarse { q: usize },
    UndefinedParameter(String),
}

impl core::fmt::Display for Sl2Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Sl2Error::SingularTheta(t) => {
                write!(f, "θ = {t} is singular (|sin θ| ≤ {SINGULAR_TOL:e})")
            }
            Sl2Error::BadIndex(m) => write!(f, "bad index: {m}"),
            Sl2Error::QuadratureTooCoarse { q } => {
                write!(f, "quadrature needs at least 64 nodes, got {q}")
            }
            Sl2Error::UndefinedParameter(m) => write!(f, "undefined parameter image: {m}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Sl2Error {}

impl EllipticTorusPoint {
    /// θ must lie in (0, 2π) away from the singular set {π} (and the
    /// endpoints), i.e. |sin θ| > 1e−12.
    pub fn new(theta: f64) -> Result<Self, Sl2Error> {
        if !(theta > 0.0 && theta < core::f64::consts::TAU)
            || theta.sin().abs() <= SINGULAR_TOL
        {
            return Err(Sl2Error::SingularTheta(theta));
        }
        Ok(EllipticTorusPoint { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// Θ_{π_{±n}}(t(θ)) = −(±e^{±inθ}) / (e^{iθ} − e^{−iθ}).
pub fn discrete_series_character(
    n: u32,
    sign: Sign,
    point: EllipticTorusPoint,
) -> Result<C64, Sl2Error> {
    if n == 0 {
        return Err(Sl2Error::BadIndex("discrete series index must be positive".into()));
    }
    let theta = point.theta;
    let s = match sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    let numerator = C64::new(0.0, s * n as f64 * theta).exp() * s;
    let denominator = C64::new(0.0, 2.0 * theta.sin());
    Ok(-numerator / denominator)
}

/// Θ_{φ_n}(t(θ)) = −(e^{inθ} − e^{−inθ}) / (e^{iθ} − e^{−iθ})
///               = −sin(nθ)/sin(θ), real-valued.
pub fn stable_character(n: u32, point: EllipticTorusPoint) -> Result<f64, Sl2Error> {
    if n == 0 {
        return Err(Sl2Error::BadIndex("stable character index must be positive".into()));
    }
    let theta = point.theta;
    Ok(-(n as f64 * theta).sin() / theta.sin())
}

/// |D^G(t(θ))| = |(1 − e^{2iθ})(1 − e^{−2iθ})| = 4 sin²θ.
pub fn weyl_discriminant_elliptic(theta: f64) -> f64 {
    let s = theta.sin();
    4.0 * s * s
}

/// ⟨φ_n, φ_m⟩_el = (1/2π) ∫₀^{2π} 4sin²θ · Θ_{φ_n} conj(Θ_{φ_m}) dθ by
/// composite Gauss–Legendre with `q_nodes` total nodes.
pub fn elliptic_inner_product_sl2(n: u32, m: u32, q_nodes: usize) -> Result<C64, Sl2Error> {
    if q_nodes < 64 {
        return Err(Sl2Error::QuadratureTooCoarse { q: q_nodes });
    }
    if n == 0 || m == 0 {
        return Err(Sl2Error::BadIndex("indices must be positive".into()));
    }
    let (panels, per) = split_node_budget(q_nodes);
    let rule = CompositeRule::gauss_legendre(0.0, core::f64::consts::TAU, panels, per);
    let mut acc = C64::new(0.0, 0.0);
    for (&theta, &w) in rule.nodes.iter().zip(&rule.weights) {
        let point = EllipticTorusPoint::new(theta)?;
        let a = stable_character(n, point)?;
        let b = stable_character(m, point)?;
        acc += C64::new(weyl_discriminant_elliptic(theta) * a * b, 0.0) * w;
    }
    Ok(acc / core::f64::consts::TAU)
}

/// Discrete-series variant ⟨π_{σn}, π_{σ′m}⟩_el; equals δ_{(σ,n),(σ′,m)}
/// (the orthogonality relations with |W^G(τ)| = ι(τ) = 1).
pub fn elliptic_inner_product_discrete(
    n: u32,
    sign_n: Sign,
    m: u32,
    sign_m: Sign,
    q_nodes: usize,
) -> Result<C64, Sl2Error> {
    if q_nodes < 64 {
        return Err(Sl2Error::QuadratureTooCoarse { q: q_nodes });
    }
    let (panels, per) = split_node_budget(q_nodes);
    let rule = CompositeRule::gauss_legendre(0.0, core::f64::consts::TAU, panels, per);
    let mut acc = C64::new(0.0, 0.0);
    for (&theta, &w) in rule.nodes.iter().zip(&rule.weights) {
        let point = EllipticTorusPoint::new(theta)?;
        let a = discrete_series_character(n, sign_n, point)?;
        let b = discrete_series_character(m, sign_m, point)?;
        acc += a * b.conj() * weyl_discriminant_elliptic(theta) * w;
    }
    Ok(acc / core::f64::consts::TAU)
}

/// f[φ_n]_G on the elliptic set:
/// m(γ)⁻¹ · |D^G(t(θ))|^{1/2} · conj(Θ_{φ_n}(t(θ)))
/// = m⁻¹ · 2|sin θ| · conj(stable character).
pub fn pseudocoefficient_elliptic(
    n: u32,
    point: EllipticTorusPoint,
    m_gamma: f64,
) -> Result<C64, Sl2Error> {
    if !(m_gamma > 0.0) {
        return Err(Sl2Error::BadIndex("centraliser volume must be positive".into()));
    }
    let chi = stable_character(n, point)?;
    let d_half = 2.0 * point.theta.sin().abs();
    Ok(C64::new(d_half * chi / m_gamma, 0.0))
}

/// The stable spectral data model of SL2(R): a rapidly decreasing (or
/// finitely supported) function on the discrete strand Z_{>0} and two even
/// strands on R (unitary principal-series parameters with m = 0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct SL2StableTransform {
    pub discrete_part: BTreeMap<u32, C64>,
    /// `None` means finitely supported (the PW_f flavour).
    pub discrete_decay: Option<DecayCert>,
    pub principal_even: GridFunction,
    pub principal_odd: GridFunction,
}

impl SL2StableTransform {
    pub fn new(
        discrete_part: BTreeMap<u32, C64>,
        discrete_decay: Option<DecayCert>,
        principal_even: GridFunction,
        principal_odd: GridFunction,
    ) -> Self {
        SL2StableTransform { discrete_part, discrete_decay, principal_even, principal_odd }
    }

    /// A transform with zero principal strands on a default window.
    pub fn discrete_only(
        discrete_part: BTreeMap<u32, C64>,
        discrete_decay: Option<DecayCert>,
    ) -> Self {
        let zero = |name: &str| {
            GridFunction::sample(ComponentId::new(name), Side::Lambda, 1, 1.0, 0.5, None, |_| {
                C64::new(0.0, 0.0)
            })
            .expect("static geometry")
        };
        SL2StableTransform {
            discrete_part,
            discrete_decay,
            principal_even: zero("principal-even"),
            principal_odd: zero("principal-odd"),
        }
    }

    /// Checks the W-invariance φ(λ) = φ(−λ) of both principal strands on
    /// the stored samples (to 1e−12) and the discrete decay certificate.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.discrete_part.contains_key(&0) {
            report.push(None, "discrete strand is indexed by positive integers");
        }
        if let Some(cert) = &self.discrete_decay {
            for (&n, c) in &self.discrete_part {
                let bound = cert.constant * (1.0 + n as f64).powi(-(cert.exponent as i32));
                if c.norm() > bound + 1e-12 {
                    report.push(None, format!("discrete decay violated at n = {n}"));
                }
            }
        }
        for (name, g) in
            [("even", &self.principal_even), ("odd", &self.principal_odd)]
        {
            if let Err(e) = g.check_geometry() {
                report.push(None, format!("principal {name} strand: {e}"));
                continue;
            }
            let n = g.points_per_axis();
            for i in 0..n {
                let v = g.samples[i];
                let w = g.samples[n - 1 - i];
                if (v - w).norm() > 1e-12 {
                    report.push(
                        None,
                        format!("principal {name} strand is not even at index {i}"),
                    );
                    break;
                }
            }
        }
        report
    }
}

/// A point of the stable spectral data model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetPoint {
    Discrete(u32),
    PrincipalEven(f64),
    PrincipalOdd(f64),
}

/// The component map Z∖{0} → spectral data used by the elliptic-torus
/// transfer. The default sends k to the discrete point |k|; the image of
/// k = 0 is not pinned down by the data model and must be supplied
/// explicitly — absent, it is dropped with a warning flag.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParameterMap {
    pub zero: Option<TargetPoint>,
    pub overrides: BTreeMap<i64, TargetPoint>,
}

impl ParameterMap {
    fn image(&self, k: i64) -> Option<TargetPoint> {
        if let Some(t) = self.overrides.get(&k) {
            return Some(*t);
        }
        if k == 0 {
            return self.zero;
        }
        Some(TargetPoint::Discrete(k.unsigned_abs() as u32))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralTransferOutput {
    /// Coefficient function on Z, the tempered-parameter set of SO2(R),
    /// ready for inverse Fourier to a function on the circle.
    pub coefficients: BTreeMap<i64, C64>,
    /// Decay certificate carried over from the discrete strand
    /// (composition with k ↦ |k| preserves the bound).
    pub decay: Option<DecayCert>,
    /// True when k = 0 had no configured image and was dropped.
    pub dropped_zero: bool,
}

/// Pullback of the stable spectral data along the parameter map into the
/// character lattice of the compact torus SO2(R).
pub fn spectral_transfer_to_elliptic_torus(
    transform: &SL2StableTransform,
    map: &ParameterMap,
) -> Result<SpectralTransferOutput, Sl2Error> {
    let mut keys: alloc::collections::BTreeSet<i64> = alloc::collections::BTreeSet::new();
    for &n in transform.discrete_part.keys() {
        keys.insert(n as i64);
        keys.insert(-(n as i64));
    }
    for &k in map.overrides.keys() {
        keys.insert(k);
    }
    keys.insert(0);

    let mut coefficients = BTreeMap::new();
    let mut dropped_zero = false;
    for k in keys {
        let Some(target) = map.image(k) else {
            if k == 0 {
                dropped_zero = true;
                continue;
            }
            continue;
        };
        let value = match target {
            TargetPoint::Discrete(0) => {
                return Err(Sl2Error::UndefinedParameter(
                    "discrete strand has no index 0".into(),
                ))
            }
            TargetPoint::Discrete(n) => {
                transform.discrete_part.get(&n).copied().unwrap_or(C64::new(0.0, 0.0))
            }
            TargetPoint::PrincipalEven(l) => transform
                .principal_even
                .eval(&[l])
                .map_err(|_| Sl2Error::UndefinedParameter(format!("even strand at λ={l}")))?,
            TargetPoint::PrincipalOdd(l) => transform
                .principal_odd
                .eval(&[l])
                .map_err(|_| Sl2Error::UndefinedParameter(format!("odd strand at λ={l}")))?,
        };
        if value.norm() != 0.0 {
            coefficients.insert(k, value);
        }
    }
    Ok(SpectralTransferOutput {
        coefficients,
        decay: transform.discrete_decay,
        dropped_zero,
    })
}

#[cfg(test)]
mod tests;
