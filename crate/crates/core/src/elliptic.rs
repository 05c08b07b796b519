//! Finite-dimensional elliptic character blocks: the elliptic inner
//! product as a Hermitian Gram matrix per (ζ, μ) block, stable/unstable
//! splitting, change-of-basis matrices, pseudocoefficient pairings, and the
//! finite-quotient integral profile backed by the subgroup-indicator
//! transform.

use crate::abelian::{self, AbelianError, FiniteAbelianGroup};
use crate::mat::{CMat, IntMat};
use crate::spaces::ValidationReport;
use crate::C64;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] use num_traits::Float;

/// Gram eigenvalues at or below this fail positive-definiteness.
pub const PD_TOL: f64 = 1e-10;
/// Gram–Schmidt dependence-detection tolerance.
pub const GS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticBlock {
    /// Opaque (ζ, μ) pair naming the block.
    pub label: (String, String),
    pub basis_labels: Vec<String>,
    /// gram[i][j] = ⟨τᵢ, τⱼ⟩_el, Hermitian positive-definite.
    pub gram: CMat,
    /// Stable vectors φ = Σ c_{φ,π} π with non-negative integer
    /// coefficients over `basis_labels` (positive on the packet).
    pub stable_vectors: Vec<Vec<u32>>,
    pub iota: Vec<f64>,
    pub weyl_order: Vec<u32>,
    /// Declared orthogonal mode: the gram must be diagonal with entries
    /// |W(τ)| · ι(τ)⁻¹.
    pub orthogonal_mode: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EllipticError {
    InvalidBlock(String),
    DimensionMismatch,
    Abelian(AbelianError),
}

impl core::fmt::Display for EllipticError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            EllipticError::InvalidBlock(m) => write!(f, "invalid elliptic block: {m}"),
            EllipticError::DimensionMismatch => write!(f, "coefficient dimension mismatch"),
            EllipticError::Abelian(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EllipticError {}

impl From<AbelianError> for EllipticError {
    fn from(e: AbelianError) -> Self {
        EllipticError::Abelian(e)
    }
}

impl EllipticBlock {
    pub fn dim(&self) -> usize {
        self.basis_labels.len()
    }

    /// ⟨v, w⟩_el = Σ_{ij} vᵢ G_{ij} w̄ⱼ — linear in the first argument,
    /// conjugate-linear in the second.
    pub fn inner(&self, v: &[C64], w: &[C64]) -> C64 {
        let n = self.dim();
        assert_eq!(v.len(), n);
        assert_eq!(w.len(), n);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += v[i] * self.gram[(i, j)] * w[j].conj();
            }
        }
        acc
    }

    pub fn norm_sq(&self, v: &[C64]) -> f64 {
        self.inner(v, v).re
    }

    pub fn stable_as_complex(&self) -> Vec<Vec<C64>> {
        self.stable_vectors
            .iter()
            .map(|v| v.iter().map(|&c| C64::new(c as f64, 0.0)).collect())
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.dim();
        if self.gram.rows() != n || self.gram.cols() != n {
            report.push(None, "gram shape does not match the basis");
            return report;
        }
        if self.iota.len() != n || self.weyl_order.len() != n {
            report.push(None, "iota / weyl_order length mismatch");
            return report;
        }
        if !self.gram.is_hermitian(1e-12) {
            report.push(None, "gram is not Hermitian");
        } else if n > 0 {
            let eig = self.gram.hermitian_eigenvalues();
            if eig[0] <= PD_TOL {
                report.push(
                    None,
                    format!("gram not positive definite (min eigenvalue {:e})", eig[0]),
                );
            }
        }
        if self.iota.iter().any(|&x| !(x > 0.0)) {
            report.push(None, "iota values must be positive");
        }
        if self.weyl_order.iter().any(|&w| w == 0) {
            report.push(None, "Weyl orders must be positive");
        }
        if self.orthogonal_mode {
            for i in 0..n {
                for j in 0..n {
                    let expected = if i == j {
                        C64::new(self.weyl_order[i] as f64 / self.iota[i], 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    if (self.gram[(i, j)] - expected).norm() > 1e-10 {
                        report.push(
                            None,
                            format!(
                                "orthogonal mode: gram[{i}][{j}] must be |W|·ι⁻¹·δ, found {}",
                                self.gram[(i, j)]
                            ),
                        );
                    }
                }
            }
        }
        for (k, v) in self.stable_vectors.iter().enumerate() {
            if v.len() != n {
                report.push(None, format!("stable vector {k} has wrong length"));
            } else if v.iter().all(|&c| c == 0) {
                report.push(None, format!("stable vector {k} is zero"));
            }
        }
        // exact integer independence check
        if !self.stable_vectors.is_empty()
            && self.stable_vectors.iter().all(|v| v.len() == n)
        {
            let rows = self.stable_vectors.len();
            let data: Vec<i64> = self
                .stable_vectors
                .iter()
                .flat_map(|v| v.iter().map(|&c| c as i64))
                .collect();
            let m = IntMat::new(rows, n, data);
            if m.rank() < rows {
                report.push(None, "stable vectors are linearly dependent");
            }
        }
        report
    }
}

fn ensure_valid(block: &EllipticBlock) -> Result<(), EllipticError> {
    let report = block.validate();
    if let Some(v) = report.violations.first() {
        return Err(EllipticError::InvalidBlock(v.message.clone()));
    }
    Ok(())
}

/// Gram-orthonormal basis of the orthogonal complement of the stable span:
/// pivoted Gram–Schmidt against the stable vectors, with a
/// re-orthogonalisation pass, dependence cut at [`GS_TOL`].
pub fn unstable_complement(block: &EllipticBlock) -> Result<Vec<Vec<C64>>, EllipticError> {
    ensure_valid(block)?;
    let n = block.dim();
    // orthonormal frame spanning the stable space
    let mut frame: Vec<Vec<C64>> = Vec::new();
    for v in block.stable_as_complex() {
        let w = project_out(block, v, &frame);
        let norm = block.norm_sq(&w).max(0.0).sqrt();
        if norm > GS_TOL {
            frame.push(normalize(block, w));
        }
    }
    let stable_rank = frame.len();
    let target = n - stable_rank;
    let mut complement: Vec<Vec<C64>> = Vec::new();
    while complement.len() < target {
        // pivot: the coordinate vector with the largest residual
        let mut best: Option<(f64, Vec<C64>)> = None;
        for k in 0..n {
            let mut e = vec![C64::new(0.0, 0.0); n];
            e[k] = C64::new(1.0, 0.0);
            let r = project_out(block, e, &frame);
            let norm = block.norm_sq(&r).max(0.0).sqrt();
            if best.as_ref().map_or(true, |(b, _)| norm > *b) {
                best = Some((norm, r));
            }
        }
        let (norm, r) = best.expect("non-empty basis");
        if norm <= GS_TOL {
            return Err(EllipticError::InvalidBlock(
                "stable span and complement do not fill the block".into(),
            ));
        }
        // re-orthogonalisation pass
        let r = project_out(block, r, &frame);
        let unit = normalize(block, r);
        frame.push(unit.clone());
        complement.push(unit);
    }
    Ok(complement)
}

fn project_out(block: &EllipticBlock, mut v: Vec<C64>, frame: &[Vec<C64>]) -> Vec<C64> {
    for u in frame {
        let coeff = block.inner(&v, u);
        for (x, y) in v.iter_mut().zip(u) {
            *x -= coeff * y;
        }
    }
    v
}

fn normalize(block: &EllipticBlock, mut v: Vec<C64>) -> Vec<C64> {
    let norm = block.norm_sq(&v).max(0.0).sqrt();
    for x in &mut v {
        *x /= norm;
    }
    v
}

/// Change of basis between the τ-basis and B = stable ∪ unstable on one
/// block: `c_b_tau` rows express the B-basis in τ-coordinates, `c_tau_b`
/// is its inverse.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockChange {
    pub label: (String, String),
    pub stable_count: usize,
    pub c_b_tau: CMat,
    pub c_tau_b: CMat,
    /// max |(c·c′ − I)_{ij}|
    pub product_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChangeOfBasis {
    pub blocks: Vec<BlockChange>,
    /// Boundedness report (mirrors the block-diagonal boundedness
    /// argument): largest matrix entry and largest block dimension seen.
    pub max_entry: f64,
    pub max_block_dim: usize,
    pub max_product_deviation: f64,
}

impl ChangeOfBasis {
    /// Entry of the full (block-diagonal) matrix c_{b,τ}; indices are
    /// (block, row, col) pairs flattened by the caller. Cross-block entries
    /// are exactly zero by construction — this accessor materialises that.
    pub fn c_b_tau_entry(
        &self,
        block_b: usize,
        b_index: usize,
        block_tau: usize,
        tau_index: usize,
    ) -> C64 {
        if block_b != block_tau {
            return C64::new(0.0, 0.0);
        }
        self.blocks[block_b].c_b_tau[(b_index, tau_index)]
    }
}

pub fn change_of_basis(blocks: &[EllipticBlock]) -> Result<ChangeOfBasis, EllipticError> {
    let mut out = Vec::with_capacity(blocks.len());
    let mut max_entry = 0.0f64;
    let mut max_block_dim = 0usize;
    let mut max_dev = 0.0f64;
    for block in blocks {
        let n = block.dim();
        let complement = unstable_complement(block)?;
        let stable = block.stable_as_complex();
        let stable_count = stable.len();
        if stable_count + complement.len() != n {
            return Err(EllipticError::InvalidBlock(
                "stable + unstable dimensions do not reconstruct the block".into(),
            ));
        }
        let mut c_b_tau = CMat::zeros(n, n);
        for (r, v) in stable.iter().chain(complement.iter()).enumerate() {
            for (c, &x) in v.iter().enumerate() {
                c_b_tau[(r, c)] = x;
            }
        }
        let c_tau_b = c_b_tau
            .inverse()
            .ok_or_else(|| EllipticError::InvalidBlock("singular change of basis".into()))?;
        let product = c_tau_b.mul(&c_b_tau);
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let expected = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                dev = dev.max((product[(i, j)] - expected).norm());
            }
        }
        for z in c_b_tau.data().iter().chain(c_tau_b.data()) {
            max_entry = max_entry.max(z.norm());
        }
        max_block_dim = max_block_dim.max(n);
        max_dev = max_dev.max(dev);
        out.push(BlockChange {
            label: block.label.clone(),
            stable_count,
            c_b_tau,
            c_tau_b,
            product_deviation: dev,
        });
    }
    Ok(ChangeOfBasis {
        blocks: out,
        max_entry,
        max_block_dim,
        max_product_deviation: max_dev,
    })
}

/// Pseudocoefficient pairing f[b](b′) = ⟨b′, b⟩_el via the Gram matrix;
/// for members of one orthogonal basis this is ‖b‖²_el·δ_b(b′).
pub fn pseudocoefficient_pairing(
    block: &EllipticBlock,
    b: &[C64],
    b_prime: &[C64],
) -> Result<C64, EllipticError> {
    if b.len() != block.dim() || b_prime.len() != block.dim() {
        return Err(EllipticError::DimensionMismatch);
    }
    Ok(block.inner(b_prime, b))
}

/// The per-coset integral profile of Θ_{b′}·f[b] over a finite quotient:
/// value ‖b‖²·|stab|⁻¹·δ_b(b′) on the stabiliser cosets, zero elsewhere.
/// The profile is cross-checked against the subgroup-indicator transform
/// (the identity the formula reduces to).
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoIntegralProfile {
    /// Value per coset (flat mixed-radix index over the quotient).
    pub values: Vec<f64>,
    pub stabilizer_order: u64,
    /// Character-side table ‖b‖²·δ·1_{stab^⊥} from the indicator
    /// transform route.
    pub character_side: Vec<f64>,
    /// True when the transform of the profile equals the character side
    /// exactly (after the shared scaling).
    pub verified: bool,
}

pub fn pseudo_integral_profile(
    quotient_orders: &[u64],
    stabilizer_generators: &[Vec<i64>],
    norm_sq_b: f64,
    delta_b_bprime: bool,
) -> Result<PseudoIntegralProfile, EllipticError> {
    let group = FiniteAbelianGroup::new(quotient_orders)?;
    let transform = abelian::indicator_transform(&group, stabilizer_generators)?;
    let b = group.subgroup(stabilizer_generators)?;
    let order = group.order() as usize;
    let delta = if delta_b_bprime { 1.0 } else { 0.0 };
    let scale = norm_sq_b / b.len() as f64 * delta;
    let mut values = vec![0.0f64; order];
    for &e in &b {
        values[e as usize] = scale;
    }
    // Fourier route: profile is (‖b‖²/|B|)·δ·1_B, so its transform must be
    // ‖b‖²·δ·1_{B^⊥}; the indicator transform supplies exact 1̂_B.
    let character_side: Vec<f64> = transform
        .predicted
        .iter()
        .map(|&p| if p != 0 { norm_sq_b * delta } else { 0.0 })
        .collect();
    // The profile is scale·1_B, so its transform must be scale·1̂_B =
    // ‖b‖²·δ·1_{B^⊥}, with 1̂_B from the brute-force route.
    let verified = transform.matches
        && transform
            .transform
            .iter()
            .zip(&character_side)
            .all(|(&t, &c)| (scale * t as f64 - c).abs() < 1e-9);
    Ok(PseudoIntegralProfile {
        values,
        stabilizer_order: b.len() as u64,
        character_side,
        verified,
    })
}

#[cfg(test)]
mod tests;
