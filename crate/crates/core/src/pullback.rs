//! The pullback operator T* along a partial component map T_E and a linear
//! map T_V, with extension by zero off the domain of T_E.
//!
//! Preconditions (verified by [`validate`]): archimedean T_V must be
//! injective and the growth certificate ‖T_E(e)‖ ≥ c‖e‖^{1/M} must hold on
//! every mapped component; non-archimedean T_V must carry Γ₁^∨ into Γ₂^∨,
//! an exact rational check after certifying the matrix entries rational.
//!
//! Non-archimedean coefficient action: a target frequency x₂ contributes to
//! the source frequency T_Vᵀ x₂ — which lies in Γ₁ automatically whenever
//! the dual-lattice condition holds, by e^{⟨T_V λ, x₂⟩} = e^{⟨λ, T_Vᵀ x₂⟩}
//! — and distinct target frequencies landing on one source frequency
//! accumulate, in lexicographic target order.

use crate::functions::{
    self, ComponentRep, FamilyClass, FamilyFunction, FunctionError, GridFunction, Side,
    TorusClass, TorusFunction,
};
use crate::mat::{rationalize, Rat, RatMat, RealMat};
use crate::spaces::{ComponentId, SpaceError, SpaceFamily, ValidationReport};
use crate::C64;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)] use num_traits::Float;

/// Singular values of T_V below this fail the archimedean injectivity check.
pub const INJECTIVITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PullbackData {
    pub source_family: String,
    pub target_family: String,
    /// Partial map E₁ → E₂ as an explicit association list.
    pub component_map: Vec<(ComponentId, ComponentId)>,
    /// T_V: iV₁* → iV₂*, a d₂ × d₁ real matrix.
    pub linear_map: RealMat,
    /// Growth certificate (c, M) for ‖T_E(e₁)‖ ≥ c·‖e₁‖^{1/M}
    /// (archimedean only).
    pub growth: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PullbackError {
    Validation(String),
    Function(FunctionError),
    Space(SpaceError),
    ClassNotClosed(String),
}

impl core::fmt::Display for PullbackError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PullbackError::Validation(m) => write!(f, "pullback data invalid: {m}"),
            PullbackError::Function(e) => write!(f, "{e}"),
            PullbackError::Space(e) => write!(f, "{e}"),
            PullbackError::ClassNotClosed(m) => write!(f, "class not closed: {m}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for PullbackError {}

impl From<FunctionError> for PullbackError {
    fn from(e: FunctionError) -> Self {
        PullbackError::Function(e)
    }
}

impl From<SpaceError> for PullbackError {
    fn from(e: SpaceError) -> Self {
        PullbackError::Space(e)
    }
}

/// Validation report with the tightest growth certificate achieved on the
/// stored components.
#[derive(Debug, Clone, PartialEq)]
pub struct PullbackReport {
    pub report: ValidationReport,
    /// Tightest constants achieved: for the declared M, the largest c with
    /// ‖T_E(e)‖ ≥ c‖e‖^{1/M} on every mapped component.
    pub achieved_growth: Option<(f64, f64)>,
    pub min_singular_value: Option<f64>,
}

impl PullbackReport {
    pub fn is_valid(&self) -> bool {
        self.report.is_valid()
    }
}

pub fn validate(
    pd: &PullbackData,
    source: &SpaceFamily,
    target: &SpaceFamily,
) -> PullbackReport {
    let mut report = ValidationReport::default();
    let mut achieved_growth = None;
    let mut min_singular_value = None;

    if source.label() != pd.source_family {
        report.push(None, format!("source family is `{}`", pd.source_family));
    }
    if target.label() != pd.target_family {
        report.push(None, format!("target family is `{}`", pd.target_family));
    }
    if pd.linear_map.rows() != target.dim() || pd.linear_map.cols() != source.dim() {
        report.push(
            None,
            format!(
                "linear map is {}x{}, expected {}x{}",
                pd.linear_map.rows(),
                pd.linear_map.cols(),
                target.dim(),
                source.dim()
            ),
        );
        return PullbackReport { report, achieved_growth, min_singular_value };
    }
    // The association list is a partial map: no duplicate sources.
    let mut seen: Vec<&ComponentId> = Vec::new();
    for (src, tgt) in &pd.component_map {
        if seen.contains(&src) {
            report.push(Some(src), "component mapped twice");
        }
        seen.push(src);
        if source.component(src).is_err() {
            report.push(Some(src), "source component not in the source family");
        }
        if target.component(tgt).is_err() {
            report.push(Some(tgt), "target component not in the target family");
        }
    }

    match (source.field().is_archimedean(), target.field().is_archimedean()) {
        (true, true) => {
            let sv = pd.linear_map.min_singular_value();
            min_singular_value = Some(sv);
            if source.dim() > 0 && sv <= INJECTIVITY_TOL {
                report.push(None, format!("linear map not injective (σ_min = {sv:e})"));
            }
            // Growth certificate on every mapped component.
            if let Some((c, m)) = pd.growth {
                if !(c > 0.0) || !(m >= 1.0) {
                    report.push(None, "growth constants must satisfy c > 0, M ≥ 1");
                } else {
                    let mut tightest = f64::INFINITY;
                    let mut ok = true;
                    for (src, tgt) in &pd.component_map {
                        let (Ok(s), Ok(t)) = (source.component(src), target.component(tgt))
                        else {
                            continue;
                        };
                        let lhs = t.norm();
                        let rhs_base = s.norm().powf(1.0 / m);
                        if rhs_base > 0.0 {
                            tightest = tightest.min(lhs / rhs_base);
                        }
                        if lhs + 1e-12 < c * rhs_base {
                            ok = false;
                            report.push(
                                Some(src),
                                format!(
                                    "growth violated: ‖T_E(e)‖ = {lhs} < {c}·‖e‖^(1/{m})"
                                ),
                            );
                        }
                    }
                    let _ = ok;
                    if tightest.is_finite() {
                        achieved_growth = Some((tightest, m));
                    } else {
                        achieved_growth = Some((c, m));
                    }
                }
            } else if !pd.component_map.is_empty() {
                report.push(None, "archimedean pullback requires a growth certificate");
            }
        }
        (false, false) => {
            match dual_transfer_matrix(pd, source, target) {
                Ok(Some(_)) => {}
                Ok(None) => report.push(
                    None,
                    "dual lattice not preserved: T_V(Γ₁^∨) ⊄ Γ₂^∨",
                ),
                Err(msg) => report.push(None, msg),
            }
        }
        _ => {
            report.push(None, "source and target families have different field kinds");
        }
    }
    PullbackReport { report, achieved_growth, min_singular_value }
}

/// Exact rational certificate K = B₂ᵀ T_V (B₁ᵀ)⁻¹ per mapped component
/// pair; `Some` iff every entry is an integer (the dual-lattice condition).
/// Errors when T_V has an entry with no small rational representation.
fn dual_transfer_matrix(
    pd: &PullbackData,
    source: &SpaceFamily,
    target: &SpaceFamily,
) -> Result<Option<()>, String> {
    let tv = rational_matrix(&pd.linear_map)
        .ok_or_else(|| String::from("linear map entries are not rational at 1e−12"))?;
    for (src, tgt) in &pd.component_map {
        let (Ok(b1), Ok(b2)) = (source.lattice_basis(src), target.lattice_basis(tgt)) else {
            continue;
        };
        // λ-coordinates: dual bases are 2π(Bᵀ)⁻¹; K integer iff
        // T_V · 2π(B₁ᵀ)⁻¹ = 2π(B₂ᵀ)⁻¹ · K.
        let k = b2
            .to_rat()
            .transpose()
            .mul(&tv)
            .mul(
                &b1.to_rat()
                    .transpose()
                    .inverse()
                    .ok_or_else(|| format!("degenerate lattice on `{src}`"))?,
            );
        if !k.is_integer() {
            return Ok(None);
        }
    }
    Ok(Some(()))
}

fn rational_matrix(m: &RealMat) -> Option<RatMat> {
    let data: Option<Vec<Rat>> = m
        .data()
        .iter()
        .map(|&x| rationalize(x, 1_000_000, 1e-12))
        .collect();
    Some(RatMat::new(m.rows(), m.cols(), data?))
}

/// T*φ: component-wise composition with T_V, extension by zero off the
/// domain of T_E. Class is preserved (Schwartz → Schwartz, PW → PW,
/// PW_f → PW_f when fibres are finite — structural here, since the
/// association list is finite).
pub fn pullback(
    pd: &PullbackData,
    source: &SpaceFamily,
    target: &SpaceFamily,
    phi: &FamilyFunction,
) -> Result<FamilyFunction, PullbackError> {
    let check = validate(pd, source, target);
    if !check.is_valid() {
        let first = &check.report.violations[0].message;
        return Err(PullbackError::Validation(first.clone()));
    }
    phi.check_family(target)?;
    if !matches!(
        phi.class,
        FamilyClass::Pw { .. } | FamilyClass::PwF { .. } | FamilyClass::Schwartz { .. }
    ) {
        return Err(PullbackError::ClassNotClosed(
            "pullback acts on Schwartz-, PW-, or PW_f-class Λ-side functions".into(),
        ));
    }

    let mut out = FamilyFunction::new(source.label(), phi.class);
    let mut max_torus_radius = 0.0f64;
    let mut pulled_grid = false;
    for (src, tgt) in &pd.component_map {
        let Some(rep) = phi.components.get(tgt) else {
            // Mapped component with no stored data: contributes zero, which
            // is represented by absence.
            continue;
        };
        match rep {
            ComponentRep::Torus(t) => {
                let pulled = pullback_torus(pd, source, target, src, tgt, t)?;
                if let TorusClass::PaleyWiener { type_radius } = pulled.class {
                    max_torus_radius = max_torus_radius.max(type_radius);
                }
                out.components.insert(src.clone(), ComponentRep::Torus(pulled));
            }
            ComponentRep::Grid(g) if g.side == Side::Lambda => {
                let pulled = pullback_grid(pd, source, src, g)?;
                pulled_grid = true;
                out.components.insert(src.clone(), ComponentRep::Grid(pulled));
            }
            _ => {
                return Err(PullbackError::ClassNotClosed(
                    "pullback expects Λ-side component data".into(),
                ))
            }
        }
    }
    // Exponential-type bookkeeping: pulled frequencies are T_Vᵀ-images, so
    // the family type is the achieved maximum (grids scale by the largest
    // singular value of T_V).
    let grid_scale = if pulled_grid {
        pd.linear_map
            .transpose()
            .mul(&pd.linear_map)
            .symmetric_eigenvalues()
            .last()
            .copied()
            .unwrap_or(0.0)
            .max(0.0)
            .sqrt()
    } else {
        0.0
    };
    out.class = match phi.class {
        FamilyClass::Pw { type_radius } => FamilyClass::Pw {
            type_radius: max_torus_radius.max(type_radius * grid_scale),
        },
        FamilyClass::PwF { type_radius } => FamilyClass::PwF {
            type_radius: max_torus_radius.max(type_radius * grid_scale),
        },
        other => other,
    };
    Ok(out)
}

fn pullback_torus(
    pd: &PullbackData,
    source: &SpaceFamily,
    target: &SpaceFamily,
    src: &ComponentId,
    tgt: &ComponentId,
    t: &TorusFunction,
) -> Result<TorusFunction, PullbackError> {
    let b1 = source.lattice_basis(src)?;
    let b2 = target.lattice_basis(tgt)?;
    let tv = rational_matrix(&pd.linear_map)
        .ok_or_else(|| PullbackError::Validation("linear map not rational".into()))?;
    // k₁ = B₁⁻¹ T_Vᵀ B₂ k₂, exact over the rationals; integrality is
    // guaranteed by the dual-lattice condition.
    let action = b1
        .to_rat()
        .inverse()
        .ok_or_else(|| PullbackError::Validation(format!("degenerate lattice on `{src}`")))?
        .mul(&tv.transpose())
        .mul(&b2.to_rat());
    let mut coeffs: BTreeMap<Vec<i64>, C64> = BTreeMap::new();
    let mut max_radius = 0.0f64;
    for (k2, &c) in &t.fourier_coefficients {
        let image = action.mul_int_vec(k2);
        let k1: Vec<i64> = image
            .iter()
            .map(|r| {
                if r.is_integer() {
                    Ok(r.to_integer())
                } else {
                    Err(PullbackError::Validation(format!(
                        "frequency {k2:?} pulls back off the source lattice; dual condition violated"
                    )))
                }
            })
            .collect::<Result<_, _>>()?;
        max_radius = max_radius.max(source.lattice_point_norm(src, &k1)?);
        // Aliasing rule: distinct k₂ with equal k₁ accumulate (BTreeMap
        // iteration gives lexicographic target order).
        *coeffs.entry(k1).or_insert(C64::new(0.0, 0.0)) += c;
    }
    let class = match &t.class {
        TorusClass::PaleyWiener { .. } => TorusClass::PaleyWiener { type_radius: max_radius },
        TorusClass::Schwartz { cert } => TorusClass::Schwartz { cert: *cert },
    };
    Ok(TorusFunction {
        component: src.clone(),
        fourier_coefficients: coeffs,
        class,
    })
}

fn pullback_grid(
    pd: &PullbackData,
    source: &SpaceFamily,
    src: &ComponentId,
    g: &GridFunction,
) -> Result<GridFunction, PullbackError> {
    // Resample φ ∘ T_V with the same multilinear interpolation used by
    // evaluation. Output window shrinks so that T_V maps it inside the
    // stored window (∞-norm bound per output row).
    let d1 = source.dim();
    let tv = &pd.linear_map;
    let mut row_norm = 0.0f64;
    for i in 0..tv.rows() {
        let s: f64 = (0..tv.cols()).map(|j| tv[(i, j)].abs()).sum();
        row_norm = row_norm.max(s);
    }
    let window = if row_norm > 0.0 { g.window / row_norm } else { g.window };
    // Snap to an integral multiple of the step.
    let steps = (window / g.step).floor().max(1.0);
    let window = steps * g.step;
    let out = GridFunction::sample(
        src.clone(),
        Side::Lambda,
        d1,
        window,
        g.step,
        None,
        |l| {
            let image = tv.mul_vec(l);
            g.eval(&image).unwrap_or(C64::new(0.0, 0.0))
        },
    )
    .map_err(|e| PullbackError::Validation(format!("{e}")))?;
    Ok(out)
}

/// Composes two pullbacks: `first` maps Λ₁ → Λ₂ data, `second` Λ₂ → Λ₃;
/// the result pulls Λ₃-functions all the way back to Λ₁.
pub fn compose(first: &PullbackData, second: &PullbackData) -> PullbackData {
    let mut component_map = Vec::new();
    for (e1, e2) in &first.component_map {
        if let Some((_, e3)) = second.component_map.iter().find(|(s, _)| s == e2) {
            component_map.push((e1.clone(), e3.clone()));
        }
    }
    let linear_map = second.linear_map.mul(&first.linear_map);
    let growth = match (first.growth, second.growth) {
        (Some((c1, m1)), Some((c2, m2))) => Some((c2 * c1.powf(1.0 / m2), m1 * m2)),
        _ => None,
    };
    PullbackData {
        source_family: first.source_family.clone(),
        target_family: second.target_family.clone(),
        component_map,
        linear_map,
        growth,
    }
}

/// Report for the seminorm comparison ‖T*φ‖_{D,N} ≪ ‖φ‖_{D,N′}: sweeps
/// N′ ∈ {N, …, N+10} and returns the smallest N′ with a nonzero denominator
/// together with the achieved ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct SeminormBoundReport {
    pub pulled_seminorm: f64,
    pub best_n_prime: u32,
    pub ratio: f64,
    /// (N′, ‖φ‖_{D,N′}, ratio) for the whole sweep.
    pub sweep: Vec<(u32, f64, f64)>,
}

pub fn seminorm_bound_report(
    pd: &PullbackData,
    source: &SpaceFamily,
    target: &SpaceFamily,
    phi: &FamilyFunction,
    deriv: &[u32],
    n: u32,
) -> Result<SeminormBoundReport, PullbackError> {
    if !source.field().is_archimedean() || !target.field().is_archimedean() {
        return Err(PullbackError::ClassNotClosed(
            "seminorm bound report applies to archimedean Schwartz inputs".into(),
        ));
    }
    let pulled = pullback(pd, source, target, phi)?;
    let pulled_deriv: Vec<u32> = if deriv.len() == target.dim() {
        // Same multi-index order requested on the source side.
        deriv.iter().take(source.dim()).cloned().collect()
    } else {
        deriv.to_vec()
    };
    let pulled_value = functions::schwartz_seminorm(source, &pulled, &pulled_deriv, n)?.value;
    let mut sweep = Vec::new();
    let mut best: Option<(u32, f64)> = None;
    for np in n..=n + 10 {
        let denom = functions::schwartz_seminorm(target, phi, deriv, np)?.value;
        let ratio = if denom > 0.0 { pulled_value / denom } else { 0.0 };
        sweep.push((np, denom, ratio));
        if best.is_none() && denom > 0.0 {
            best = Some((np, ratio));
        }
    }
    let (best_n_prime, ratio) = best.unwrap_or((n, 0.0));
    Ok(SeminormBoundReport { pulled_seminorm: pulled_value, best_n_prime, ratio, sweep })
}

/// Extension-by-zero means absent components; this helper materialises the
/// guarantee for tests: evaluation off dom(T_E) is exactly zero.
pub fn evaluates_to_zero_off_domain(
    pd: &PullbackData,
    source: &SpaceFamily,
    pulled: &FamilyFunction,
) -> bool {
    source.components().iter().all(|c| {
        let mapped = pd.component_map.iter().any(|(s, _)| s == &c.id);
        mapped || !pulled.components.contains_key(&c.id)
    })
}

#[cfg(test)]
mod tests;
