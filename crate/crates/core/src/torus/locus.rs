//! The ξ-singular locus of a complex-ground torus map: the union over
//! finite-kernel elements a and roots α killing D° of the translated
//! subtori ξ₀*(a·ker α), each of codimension one, together with the
//! membership test that guards complex-group descent.

use super::mixture::GaussianMixture;
use super::transfer::{fiber_integrate, QuadratureOptions};
use super::{
    format_rational_angles, kernel_decomposition, FiniteGenerator, Ground, GroundPoint,
    TorusError, TorusMap, TwistCharacter,
};
use crate::mat::{IntMat, Rat};
use crate::snf::kernel_basis;
use crate::C64;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::Ratio;
use num_traits::Zero;
#[allow(unused_imports)] use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct LocusPiece {
    /// Translation point ξ₀*(a·w): a torsion point of S with these angle
    /// coordinates in units of 2π (log part zero).
    pub translation: Vec<Rat>,
    /// m×r integer basis of the image subtorus direction (r = m − 1).
    pub sublattice: IntMat,
    /// m×1 saturated annihilator: c with cᵀ·sublattice = 0; membership is
    /// ⟨c, θ − translation⟩ ∈ 2πZ and ⟨c, log s⟩ = 0.
    pub annihilator: IntMat,
    /// The root that produced the piece.
    pub root: Vec<i64>,
    pub codim: usize,
}

impl LocusPiece {
    pub fn describe(&self) -> String {
        if self.sublattice.cols() == 0 {
            format!("point {}", format_rational_angles(&self.translation))
        } else {
            format!(
                "subtorus of rank {} through {}",
                self.sublattice.cols(),
                format_rational_angles(&self.translation)
            )
        }
    }

    /// Membership within `tol` (angles tested modulo 2π).
    pub fn contains(&self, s: &GroundPoint, tol: f64) -> bool {
        let GroundPoint::Complex { angles, logs } = s else {
            return false;
        };
        let m = self.annihilator.rows();
        let tau = core::f64::consts::TAU;
        for col in 0..self.annihilator.cols() {
            let c: Vec<i64> = (0..m).map(|i| self.annihilator[(i, col)]).collect();
            let mut log_pair = 0.0;
            let mut angle_pair = 0.0;
            for i in 0..m {
                log_pair += c[i] as f64 * logs[i];
                let trans =
                    tau * (*self.translation[i].numer() as f64)
                        / (*self.translation[i].denom() as f64);
                angle_pair += c[i] as f64 * (angles[i] - trans);
            }
            if log_pair.abs() > tol {
                return false;
            }
            let wrapped = angle_pair - tau * (angle_pair / tau).round();
            if wrapped.abs() > tol {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularLocus {
    pub pieces: Vec<LocusPiece>,
}

impl SingularLocus {
    /// Index of a piece containing `s`, if any.
    pub fn locate(&self, s: &GroundPoint, tol: f64) -> Option<usize> {
        self.pieces.iter().position(|p| p.contains(s, tol))
    }
}

/// Enumerates the locus pieces ξ₀*(a·w·(ker α)°) over the finite kernel
/// part and the torsion of each relevant root kernel; relevance of a root
/// is the exact integer condition α·D° = 0.
pub fn xi_singular_locus(
    tm: &TorusMap,
    roots: &[Vec<i64>],
) -> Result<SingularLocus, TorusError> {
    if tm.ground != Ground::ComplexField {
        return Err(TorusError::GroundMismatch(
            "the ξ-singular locus is a complex-ground construction".into(),
        ));
    }
    let n = tm.source_rank();
    let m = tm.target_rank();
    for r in roots {
        if r.len() != n {
            return Err(TorusError::Dimension("root length != source rank".into()));
        }
        if r.iter().all(|&x| x == 0) {
            return Err(TorusError::Dimension("roots must be nonzero".into()));
        }
    }
    let kd = kernel_decomposition(tm)?;
    let a_angles = finite_part_angles(&kd, n)?;

    let mut pieces: Vec<LocusPiece> = Vec::new();
    for root in roots {
        // α(D°) = 1 ⟺ α kills every connected-basis column (exact).
        let kills = (0..kd.connected_basis.cols()).all(|j| {
            (0..n).map(|i| root[i] * kd.connected_basis[(i, j)]).sum::<i64>() == 0
        });
        if !kills {
            continue;
        }
        // ker α on the source torus: its identity component and torsion.
        let alpha = IntMat::new(1, n, root.clone());
        let alpha_map = TorusMap::new(alpha.clone(), Ground::ComplexField)
            .expect("nonzero root has rank 1");
        let alpha_kernel = kernel_decomposition(&alpha_map)?;
        let w_angles = finite_part_angles(&alpha_kernel, n)?;
        // image subtorus direction: M · (ker α basis), rank m − 1.
        let sublattice = tm.cochar_matrix.mul(&alpha_kernel.connected_basis);
        let annihilator = kernel_basis(&sublattice.transpose());
        let codim = annihilator.cols();
        debug_assert!(codim >= 1, "locus piece must have positive codimension");
        for a in &a_angles {
            for w in &w_angles {
                // translation = ξ₀*(a·w), exact rational angles mod 1
                let combined: Vec<Rat> =
                    a.iter().zip(w).map(|(x, y)| reduce_mod_one(*x + *y)).collect();
                let translation: Vec<Rat> = (0..m)
                    .map(|i| {
                        let mut acc = Rat::zero();
                        for j in 0..n {
                            acc += Ratio::from_integer(tm.cochar_matrix[(i, j)]) * combined[j];
                        }
                        reduce_mod_one(acc)
                    })
                    .collect();
                let piece = LocusPiece {
                    translation,
                    sublattice: sublattice.clone(),
                    annihilator: annihilator.clone(),
                    root: root.clone(),
                    codim,
                };
                if !pieces.iter().any(|p| same_piece(p, &piece)) {
                    pieces.push(piece);
                }
            }
        }
    }
    Ok(SingularLocus { pieces })
}

fn finite_part_angles(
    kd: &super::KernelDecomposition,
    n: usize,
) -> Result<Vec<Vec<Rat>>, TorusError> {
    if kd.finite_order() > (1 << 20) {
        return Err(TorusError::FiniteKernelTooLarge(kd.finite_order()));
    }
    let mut out = Vec::new();
    for coords in kd.finite_elements() {
        let mut angles = vec![Rat::zero(); n];
        for (t, gen) in coords.iter().zip(&kd.finite_generators) {
            let FiniteGenerator::Angles(r) = gen else {
                return Err(TorusError::GroundMismatch(
                    "finite kernel generators are not torsion angles".into(),
                ));
            };
            for j in 0..n {
                angles[j] += r[j] * Ratio::from_integer(*t as i64);
            }
        }
        out.push(angles.into_iter().map(reduce_mod_one).collect());
    }
    Ok(out)
}

fn reduce_mod_one(x: Rat) -> Rat {
    let f = x.floor();
    x - f
}

/// Exact equality of pieces: same annihilator lattice and each translation
/// lies on the other piece (rational arithmetic throughout).
fn same_piece(a: &LocusPiece, b: &LocusPiece) -> bool {
    if a.annihilator.cols() != b.annihilator.cols() {
        return false;
    }
    // Both annihilators are saturated bases; equal lattices iff each
    // column of one is a rational combination of the other with integer
    // coefficients. At codimension one this is proportionality; in general
    // use the rational solve via the pseudo-test below.
    let span_eq = annihilator_span_contains(&a.annihilator, &b.annihilator)
        && annihilator_span_contains(&b.annihilator, &a.annihilator);
    if !span_eq {
        return false;
    }
    // translation difference annihilated mod 1 by every covector
    let m = a.annihilator.rows();
    for col in 0..a.annihilator.cols() {
        let mut acc = Rat::zero();
        for i in 0..m {
            acc += Ratio::from_integer(a.annihilator[(i, col)])
                * (a.translation[i] - b.translation[i]);
        }
        if !acc.is_integer() {
            return false;
        }
    }
    true
}

fn annihilator_span_contains(outer: &IntMat, inner: &IntMat) -> bool {
    // every inner column must lie in the rational span of outer columns:
    // rank does not grow when appended.
    let base_rank = outer.rank();
    for col in 0..inner.cols() {
        let mut data = Vec::new();
        for i in 0..outer.rows() {
            for j in 0..outer.cols() {
                data.push(outer[(i, j)]);
            }
            data.push(inner[(i, col)]);
        }
        let appended = IntMat::new(outer.rows(), outer.cols() + 1, data);
        if appended.rank() != base_rank {
            return false;
        }
    }
    true
}

/// Stable transfer at a ξ-regular point of the complex ground: checks
/// membership against the locus, checks the declared Weyl invariance of
/// the integrand on sample points, then fiber-integrates (the singular
/// intersection has measure zero in the fiber and needs no special
/// handling).
#[allow(clippy::too_many_arguments)]
pub fn complex_descent_transfer(
    tm: &TorusMap,
    roots: &[Vec<i64>],
    chi: &TwistCharacter,
    f: &GaussianMixture,
    weyl_generators: &[IntMat],
    s: &GroundPoint,
    opts: &QuadratureOptions,
    locus_tol: f64,
) -> Result<C64, TorusError> {
    let locus = xi_singular_locus(tm, roots)?;
    if let Some(idx) = locus.locate(s, locus_tol) {
        return Err(TorusError::XiSingular { piece: locus.pieces[idx].describe() });
    }
    check_weyl_invariance(tm, f, weyl_generators)?;
    fiber_integrate(tm, chi, f, s, opts)
}

/// Verifies |f(w·t) − f(t)| ≤ 1e−10 on a deterministic sample set.
pub(crate) fn check_weyl_invariance(
    tm: &TorusMap,
    f: &GaussianMixture,
    weyl_generators: &[IntMat],
) -> Result<(), TorusError> {
    let n = tm.source_rank();
    // fixed low-discrepancy-ish sample points
    let samples: Vec<GroundPoint> = (0..8)
        .map(|k| {
            let angles: Vec<f64> =
                (0..n).map(|j| (0.7 + 1.3 * k as f64 + 0.41 * j as f64) % core::f64::consts::TAU).collect();
            let logs: Vec<f64> =
                (0..n).map(|j| -1.5 + 0.37 * k as f64 + 0.23 * j as f64).collect();
            GroundPoint::Complex { angles, logs }
        })
        .collect();
    for w in weyl_generators {
        if w.rows() != n || w.cols() != n {
            return Err(TorusError::Dimension("Weyl generator shape mismatch".into()));
        }
        for t in &samples {
            let GroundPoint::Complex { angles, logs } = t else { unreachable!() };
            let wt = GroundPoint::Complex {
                angles: w.to_real().mul_vec(angles),
                logs: w.to_real().mul_vec(logs),
            };
            let a = f.eval(t, tm.ground);
            let b = f.eval(&wt, tm.ground);
            if (a - b).norm() > 1e-10 {
                return Err(TorusError::NotInvariant(format!(
                    "sample deviation {:e} under a Weyl generator",
                    (a - b).norm()
                )));
            }
        }
    }
    Ok(())
}
