//! Descriptors for component families Λ = ⊔ Λ_e over a Euclidean space V
//! and their dual X-side spaces, with measures and norms.
//!
//! Archimedean families tag every component with a norm ‖e‖ ≥ 0 and each
//! Λ_e is a copy of iV*. Non-archimedean families carry a full-rank lattice
//! Γ_e per component and Λ_e is the compact torus iV*/Γ_e^∨, where
//! Γ_e^∨ = Hom(Γ_e, 2πiZ).
//!
//! Convention: dual-lattice bases are stored in units of 2π, which keeps all
//! lattice arithmetic exact over the rationals. The evaluation pairing is
//! ⟨λ, x⟩ = i ℓ·x for λ = iℓ, so a dual basis B∨ (in 2π units) satisfies
//! (B∨)ᵀ B = identity exactly.

use crate::mat::{IntMat, Rat, RatMat, RealMat};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_rational::Ratio;
#[allow(unused_imports)] use num_traits::Float;

/// Tolerance for the positive-definiteness check on inner products.
pub const PD_EIGENVALUE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Archimedean,
    /// `residue_cardinality` is the cardinality of the residue field (q ≥ 2).
    NonArchimedean { residue_cardinality: u64 },
}

impl FieldKind {
    pub fn is_archimedean(&self) -> bool {
        matches!(self, FieldKind::Archimedean)
    }
}

/// Opaque component identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentId(pub String);

impl ComponentId {
    pub fn new(s: impl Into<String>) -> Self {
        ComponentId(s.into())
    }
}

impl core::fmt::Display for ComponentId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ComponentData {
    /// Archimedean: the norm ‖e‖ ≥ 0 of the component.
    ArchNorm(f64),
    /// Non-archimedean: columns generate the lattice Γ_e in V-coordinates.
    Lattice(IntMat),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentDescriptor {
    pub id: ComponentId,
    pub data: ComponentData,
}

impl ComponentDescriptor {
    pub fn archimedean(id: impl Into<String>, norm: f64) -> Self {
        ComponentDescriptor { id: ComponentId::new(id), data: ComponentData::ArchNorm(norm) }
    }

    pub fn lattice(id: impl Into<String>, basis: IntMat) -> Self {
        ComponentDescriptor { id: ComponentId::new(id), data: ComponentData::Lattice(basis) }
    }

    /// ‖e‖ for seminorm weights; non-archimedean components have no norm and
    /// contribute 0.
    pub fn norm(&self) -> f64 {
        match &self.data {
            ComponentData::ArchNorm(n) => *n,
            ComponentData::Lattice(_) => 0.0,
        }
    }
}

/// Optional generator rule for archimedean families: components may be
/// materialised with norms in an arithmetic progression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormRule {
    pub start: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceFamily {
    label: String,
    field: FieldKind,
    dim: usize,
    inner_product: RealMat,
    components: Vec<ComponentDescriptor>,
    norm_rule: Option<NormRule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    UnknownComponent(String),
    ArchimedeanFamily,
    NonArchimedeanFamily,
    ShapeMismatch(String),
    DegenerateLattice(String),
}

impl core::fmt::Display for SpaceError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SpaceError::UnknownComponent(id) => write!(f, "unknown component id `{id}`"),
            SpaceError::ArchimedeanFamily => {
                write!(f, "operation requires a non-archimedean family")
            }
            SpaceError::NonArchimedeanFamily => {
                write!(f, "operation requires an archimedean family")
            }
            SpaceError::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            SpaceError::DegenerateLattice(id) => {
                write!(f, "degenerate lattice on component `{id}`")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SpaceError {}

/// Report-style validation result, listing violated invariants with the
/// component they occur on.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Component id, or `None` for family-level violations.
    pub component: Option<String>,
    pub message: String,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, component: Option<&ComponentId>, message: impl Into<String>) {
        self.violations.push(Violation {
            component: component.map(|c| c.0.clone()),
            message: message.into(),
        });
    }
}

impl SpaceFamily {
    /// Shape-level checks are hard errors; numeric invariants are left to
    /// [`SpaceFamily::validate`].
    pub fn new(
        label: impl Into<String>,
        field: FieldKind,
        dim: usize,
        inner_product: RealMat,
        components: Vec<ComponentDescriptor>,
    ) -> Result<Self, SpaceError> {
        if inner_product.rows() != dim || inner_product.cols() != dim {
            return Err(SpaceError::ShapeMismatch(format!(
                "inner product is {}x{}, expected {dim}x{dim}",
                inner_product.rows(),
                inner_product.cols()
            )));
        }
        for c in &components {
            match (&field, &c.data) {
                (FieldKind::Archimedean, ComponentData::Lattice(_)) => {
                    return Err(SpaceError::ShapeMismatch(format!(
                        "component `{}` carries a lattice in an archimedean family",
                        c.id
                    )))
                }
                (FieldKind::NonArchimedean { .. }, ComponentData::ArchNorm(_)) => {
                    return Err(SpaceError::ShapeMismatch(format!(
                        "component `{}` carries a norm in a non-archimedean family",
                        c.id
                    )))
                }
                (FieldKind::NonArchimedean { .. }, ComponentData::Lattice(b)) => {
                    if b.rows() != dim || b.cols() != dim {
                        return Err(SpaceError::ShapeMismatch(format!(
                            "lattice basis on `{}` is {}x{}, expected {dim}x{dim}",
                            c.id,
                            b.rows(),
                            b.cols()
                        )));
                    }
                }
                (FieldKind::Archimedean, ComponentData::ArchNorm(_)) => {}
            }
        }
        Ok(SpaceFamily {
            label: label.into(),
            field,
            dim,
            inner_product,
            components,
            norm_rule: None,
        })
    }

    /// Archimedean family whose first `count` components have norms in the
    /// arithmetic progression `start + k·step`, ids `e0, e1, ...`.
    pub fn with_norm_progression(
        label: impl Into<String>,
        dim: usize,
        inner_product: RealMat,
        rule: NormRule,
        count: usize,
    ) -> Result<Self, SpaceError> {
        let components = (0..count)
            .map(|k| {
                ComponentDescriptor::archimedean(
                    format!("e{k}"),
                    rule.start + k as f64 * rule.step,
                )
            })
            .collect();
        let mut fam =
            SpaceFamily::new(label, FieldKind::Archimedean, dim, inner_product, components)?;
        fam.norm_rule = Some(rule);
        Ok(fam)
    }

    /// Materialises `extra` more components from the stored norm rule.
    pub fn extend_from_rule(&mut self, extra: usize) -> Result<(), SpaceError> {
        let rule = self.norm_rule.ok_or(SpaceError::NonArchimedeanFamily)?;
        let base = self.components.len();
        for k in 0..extra {
            let n = base + k;
            self.components.push(ComponentDescriptor::archimedean(
                format!("e{n}"),
                rule.start + n as f64 * rule.step,
            ));
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inner_product(&self) -> &RealMat {
        &self.inner_product
    }

    pub fn components(&self) -> &[ComponentDescriptor] {
        &self.components
    }

    pub fn component(&self, id: &ComponentId) -> Result<&ComponentDescriptor, SpaceError> {
        self.components
            .iter()
            .find(|c| &c.id == id)
            .ok_or_else(|| SpaceError::UnknownComponent(id.0.clone()))
    }

    pub fn lattice_basis(&self, id: &ComponentId) -> Result<&IntMat, SpaceError> {
        match &self.component(id)?.data {
            ComponentData::Lattice(b) => Ok(b),
            ComponentData::ArchNorm(_) => Err(SpaceError::ArchimedeanFamily),
        }
    }

    /// Metric norm of a point of V given in V-coordinates.
    pub fn point_norm(&self, x: &[f64]) -> f64 {
        let gx = self.inner_product.mul_vec(x);
        x.iter().zip(&gx).map(|(a, b)| a * b).sum::<f64>().max(0.0).sqrt()
    }

    /// Metric norm of a covector (an element of V*, e.g. Re λ or the
    /// coordinate vector ℓ of λ = iℓ); uses the inverse metric.
    pub fn covector_norm(&self, l: &[f64]) -> f64 {
        if self.dim == 0 {
            return 0.0;
        }
        let inv = self
            .inner_product
            .inverse()
            .expect("inner product not invertible; run validate() first");
        let gl = inv.mul_vec(l);
        l.iter().zip(&gl).map(|(a, b)| a * b).sum::<f64>().max(0.0).sqrt()
    }

    /// Metric norm of a lattice point given in Γ_e-basis integer
    /// coordinates.
    pub fn lattice_point_norm(&self, id: &ComponentId, k: &[i64]) -> Result<f64, SpaceError> {
        let b = self.lattice_basis(id)?;
        let x: Vec<f64> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| b[(i, j)] as f64 * k[j] as f64).sum())
            .collect();
        Ok(self.point_norm(&x))
    }

    /// Checks every invariant and returns a report (never errors).
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if let FieldKind::NonArchimedean { residue_cardinality } = self.field {
            if residue_cardinality < 2 {
                report.push(None, "residue cardinality must be at least 2");
            }
        }
        if !self.inner_product.is_symmetric(1e-12) {
            report.push(None, "inner product is not symmetric");
        } else if self.dim > 0 {
            let eig = self.inner_product.symmetric_eigenvalues();
            if eig[0] <= PD_EIGENVALUE_TOL {
                report.push(
                    None,
                    format!("inner product not positive definite (min eigenvalue {:e})", eig[0]),
                );
            }
        }
        let mut seen: Vec<&str> = Vec::new();
        for c in &self.components {
            if seen.contains(&c.id.0.as_str()) {
                report.push(Some(&c.id), "duplicate component id");
            }
            seen.push(&c.id.0);
            match &c.data {
                ComponentData::ArchNorm(n) => {
                    if !(*n >= 0.0) {
                        report.push(Some(&c.id), "component norm must be non-negative");
                    }
                }
                ComponentData::Lattice(b) => {
                    if b.det() == 0 {
                        report.push(Some(&c.id), "degenerate lattice");
                    }
                }
            }
        }
        report
    }
}

/// Basis of Γ_e^∨ = Hom(Γ_e, 2πiZ) in iV*-coordinates, in units of 2π:
/// the returned matrix is (Bᵀ)⁻¹ for the primal basis B, so multiplying by
/// 2π gives the actual covector basis.
pub fn dual_lattice(fam: &SpaceFamily, id: &ComponentId) -> Result<RatMat, SpaceError> {
    let basis = fam.lattice_basis(id)?;
    dual_basis(&basis.to_rat()).ok_or_else(|| SpaceError::DegenerateLattice(id.0.clone()))
}

/// Transpose-inverse on rational bases; the engine behind [`dual_lattice`]
/// and the double-dual identity.
pub fn dual_basis(basis: &RatMat) -> Option<RatMat> {
    basis.transpose().inverse()
}

/// Covolume |det B| · sqrt(det G) of Γ_e under the family metric G.
pub fn lattice_covolume(fam: &SpaceFamily, id: &ComponentId) -> Result<f64, SpaceError> {
    let basis = fam.lattice_basis(id)?;
    let det_b = basis.det();
    if det_b == 0 {
        return Err(SpaceError::DegenerateLattice(id.0.clone()));
    }
    Ok((det_b.abs() as f64) * fam.inner_product.det().max(0.0).sqrt())
}

/// Covolume of a rational basis under an explicit metric; used for the
/// dual-side covolume in the (2π)^d duality identity.
pub fn rational_covolume(basis: &RatMat, metric: &RealMat) -> f64 {
    let det_b: Rat = det_rat(basis);
    let det_b = *det_b.numer() as f64 / *det_b.denom() as f64;
    det_b.abs() * metric.det().max(0.0).sqrt()
}

fn det_rat(m: &RatMat) -> Rat {
    // Expansion via Gauss elimination over the rationals.
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return Ratio::from_integer(1);
    }
    let mut a = m.clone();
    let mut det = Ratio::from_integer(1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !num_traits::Zero::is_zero(&a[(r, col)])) else {
            return Ratio::from_integer(0);
        };
        if p != col {
            for j in 0..n {
                let t = a[(p, j)];
                a[(p, j)] = a[(col, j)];
                a[(col, j)] = t;
            }
            det = -det;
        }
        det *= a[(col, col)];
        for r in col + 1..n {
            let f = a[(r, col)] / a[(col, col)];
            if !num_traits::Zero::is_zero(&f) {
                for j in col..n {
                    let s = a[(col, j)] * f;
                    a[(r, j)] -= s;
                }
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn unit_family(d: usize, bases: Vec<IntMat>) -> SpaceFamily {
        let comps = bases
            .into_iter()
            .enumerate()
            .map(|(i, b)| ComponentDescriptor::lattice(format!("e{i}"), b))
            .collect();
        SpaceFamily::new(
            "test",
            FieldKind::NonArchimedean { residue_cardinality: 2 },
            d,
            RealMat::identity(d),
            comps,
        )
        .unwrap()
    }

    #[test]
    fn unit_lattice_family_is_valid() {
        let fam = unit_family(1, vec![IntMat::new(1, 1, vec![1])]);
        assert!(fam.validate().is_valid());
    }

    #[test]
    fn degenerate_lattice_reported() {
        let fam = unit_family(2, vec![IntMat::new(2, 2, vec![1, 2, 2, 4])]);
        let report = fam.validate();
        assert!(!report.is_valid());
        assert!(report.violations[0].message.contains("degenerate lattice"));
    }

    #[test]
    fn archimedean_norms_any_nonnegative() {
        let comps = vec![
            ComponentDescriptor::archimedean("a", 0.0),
            ComponentDescriptor::archimedean("b", 1.0),
            ComponentDescriptor::archimedean("c", 4.0),
        ];
        let fam = SpaceFamily::new(
            "arch",
            FieldKind::Archimedean,
            1,
            RealMat::identity(1),
            comps,
        )
        .unwrap();
        assert!(fam.validate().is_valid());
    }

    #[test]
    fn dual_of_unit_lattice_is_identity_in_2pi_units() {
        let fam = unit_family(1, vec![IntMat::new(1, 1, vec![1])]);
        let dual = dual_lattice(&fam, &ComponentId::new("e0")).unwrap();
        assert_eq!(dual, RatMat::identity(1));
    }

    #[test]
    fn dual_of_2z_is_half_in_2pi_units() {
        // Dual basis of 2Z is π = (1/2)·2π.
        let fam = unit_family(1, vec![IntMat::new(1, 1, vec![2])]);
        let dual = dual_lattice(&fam, &ComponentId::new("e0")).unwrap();
        assert_eq!(dual[(0, 0)], Rat::new(1, 2));
    }

    #[test]
    fn dual_of_skew_z2() {
        // B columns (1,1), (0,2); dual = (Bᵀ)⁻¹, times 2π gives
        // [[2π, −π], [0, π]].
        let fam = unit_family(2, vec![IntMat::new(2, 2, vec![1, 0, 1, 2])]);
        let dual = dual_lattice(&fam, &ComponentId::new("e0")).unwrap();
        assert_eq!(dual[(0, 0)], Rat::new(1, 1));
        assert_eq!(dual[(0, 1)], Rat::new(-1, 2));
        assert_eq!(dual[(1, 0)], Rat::new(0, 1));
        assert_eq!(dual[(1, 1)], Rat::new(1, 2));
    }

    #[test]
    fn covolume_examples() {
        let fam = unit_family(1, vec![IntMat::new(1, 1, vec![1])]);
        assert!((lattice_covolume(&fam, &ComponentId::new("e0")).unwrap() - 1.0).abs() < 1e-15);

        // Γ = (log q)Z with log q = 2.
        let fam = unit_family(1, vec![IntMat::new(1, 1, vec![2])]);
        assert!((lattice_covolume(&fam, &ComponentId::new("e0")).unwrap() - 2.0).abs() < 1e-15);

        // Z² with metric diag(4, 1).
        let comps = vec![ComponentDescriptor::lattice("e0", IntMat::identity(2))];
        let fam = SpaceFamily::new(
            "metric",
            FieldKind::NonArchimedean { residue_cardinality: 3 },
            2,
            RealMat::new(2, 2, vec![4.0, 0.0, 0.0, 1.0]),
            comps,
        )
        .unwrap();
        assert!((lattice_covolume(&fam, &ComponentId::new("e0")).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn double_dual_recovers_lattice_up_to_unimodular() {
        for basis in [
            IntMat::new(2, 2, vec![1, 0, 1, 2]),
            IntMat::new(2, 2, vec![3, 1, 1, 1]),
            IntMat::new(3, 3, vec![1, 0, 0, 2, 3, 0, 4, 5, 6]),
        ] {
            let dual = dual_basis(&basis.to_rat()).unwrap();
            let double = dual_basis(&dual).unwrap();
            // change of basis U = B⁻¹ B″ must be integer with det ±1
            let u = basis.to_rat().inverse().unwrap().mul(&double);
            let u = u.to_int().expect("change of basis not integral");
            assert_eq!(u.det().abs(), 1);
        }
    }

    #[test]
    fn covolume_duality_2pi_power() {
        let metric = RealMat::new(2, 2, vec![2.0, 1.0, 1.0, 3.0]);
        let basis = IntMat::new(2, 2, vec![1, 0, 1, 2]);
        let comps = vec![ComponentDescriptor::lattice("e0", basis.clone())];
        let fam = SpaceFamily::new(
            "dualvol",
            FieldKind::NonArchimedean { residue_cardinality: 5 },
            2,
            metric.clone(),
            comps,
        )
        .unwrap();
        let primal = lattice_covolume(&fam, &ComponentId::new("e0")).unwrap();
        // dual basis in actual units = 2π (Bᵀ)⁻¹; dual metric = G⁻¹.
        let dual = dual_lattice(&fam, &ComponentId::new("e0"))
            .unwrap()
            .scale(Rat::new(1, 1));
        let dual_metric = metric.inverse().unwrap();
        let dual_vol = rational_covolume(&dual, &dual_metric)
            * core::f64::consts::TAU.powi(fam.dim() as i32);
        let product = primal * dual_vol;
        let expected = core::f64::consts::TAU.powi(2);
        assert!((product - expected).abs() < 1e-9, "{product} vs {expected}");
    }

    #[test]
    fn validate_is_pure_and_idempotent() {
        let fam = unit_family(1, vec![IntMat::new(1, 1, vec![1])]);
        let r1 = fam.validate();
        let r2 = fam.validate();
        assert_eq!(r1, r2);
    }

    #[test]
    fn norm_progression_rule() {
        let mut fam = SpaceFamily::with_norm_progression(
            "prog",
            1,
            RealMat::identity(1),
            NormRule { start: 0.5, step: 2.0 },
            3,
        )
        .unwrap();
        assert_eq!(fam.components().len(), 3);
        assert!((fam.components()[2].norm() - 4.5).abs() < 1e-15);
        fam.extend_from_rule(2).unwrap();
        assert_eq!(fam.components().len(), 5);
        assert!((fam.components()[4].norm() - 8.5).abs() < 1e-15);
    }

    #[test]
    fn unknown_component_and_field_errors() {
        let fam = unit_family(1, vec![IntMat::new(1, 1, vec![1])]);
        assert!(matches!(
            dual_lattice(&fam, &ComponentId::new("nope")),
            Err(SpaceError::UnknownComponent(_))
        ));
        let arch = SpaceFamily::new(
            "arch",
            FieldKind::Archimedean,
            1,
            RealMat::identity(1),
            vec![ComponentDescriptor::archimedean("a", 0.0)],
        )
        .unwrap();
        assert!(matches!(
            dual_lattice(&arch, &ComponentId::new("a")),
            Err(SpaceError::ArchimedeanFamily)
        ));
    }
}
