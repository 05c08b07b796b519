//! Explicit stable transfer for split tori and complex-group descent:
//! cocharacter-level torus maps, Smith-normal-form kernel decomposition
//! D = A·D°, fiber integration against the disintegration measures μ_s,
//! the adjunction identity as the normalisation arbiter, and the
//! ξ-singular locus.
//!
//! Ground models and coordinates (split throughout):
//!  * `RealField`: (F^×)^n with x = ε·e^u, Haar = counting ⊗ du per factor;
//!  * `ComplexField`: x = e^{u+iθ}, Haar = du ⊗ dθ/2π per factor;
//!  * `DiscreteModel`: F^× replaced by Z/u × Z with counting measure — an
//!    exactly computable stand-in with non-archimedean shape, not Q_p.
//!
//! The fiber measures are pinned by exact disintegration of the Haar
//! measure along ξ₀* (the adjunction identity is the arbiter): the finite
//! part A carries counting (real/discrete grounds) or |A|⁻¹-normalised
//! counting (complex ground, whose compact factors carry normalised Haar),
//! the connected part carries Lebesgue in the kernel-lattice coordinates
//! times the coarea constant √(det BᵀB / det MMᵀ), and angular kernel
//! directions carry dψ/2π.

mod locus;
mod mixture;
mod transfer;

pub use locus::{complex_descent_transfer, xi_singular_locus, LocusPiece, SingularLocus};
pub use mixture::{CompactFactor, GaussianMixture, MixtureTerm};
pub use transfer::{
    adjunction_check, fiber_integrate, AdjunctionReport, QuadratureOptions,
};

use crate::mat::{solve_mod2, IntMat, Rat};
use crate::snf::{self, smith_normal_form};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use num_rational::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ground {
    RealField,
    ComplexField,
    /// Value group Z, unit group Z/u.
    DiscreteModel { unit_order: u64 },
}

/// ξ₀*: T = (F^×)^n → S = (F^×)^m, x ↦ (∏_j x_j^{M_ij})_i at the
/// cocharacter level.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusMap {
    pub cochar_matrix: IntMat,
    pub ground: Ground,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TorusError {
    RankDeficient { rank: usize, expected: usize },
    GroundMismatch(String),
    Dimension(String),
    DecayInsufficient { tail_bound: f64, tol: f64 },
    XiSingular { piece: String },
    NotInvariant(String),
    FiniteKernelTooLarge(u128),
}

impl core::fmt::Display for TorusError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TorusError::RankDeficient { rank, expected } => {
                write!(f, "cocharacter matrix has rank {rank}, expected {expected}")
            }
            TorusError::GroundMismatch(m) => write!(f, "ground model mismatch: {m}"),
            TorusError::Dimension(m) => write!(f, "dimension mismatch: {m}"),
            TorusError::DecayInsufficient { tail_bound, tol } => {
                write!(f, "decay insufficient for tolerance {tol:e} (tail bound {tail_bound:e})")
            }
            TorusError::XiSingular { piece } => {
                write!(f, "point lies on the ξ-singular locus piece {piece}")
            }
            TorusError::NotInvariant(m) => write!(f, "function not invariant: {m}"),
            TorusError::FiniteKernelTooLarge(n) => {
                write!(f, "finite kernel part has {n} elements; refusing to enumerate")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TorusError {}

impl TorusMap {
    pub fn new(cochar_matrix: IntMat, ground: Ground) -> Result<Self, TorusError> {
        let m = cochar_matrix.rows();
        let rank = cochar_matrix.rank();
        if rank != m {
            return Err(TorusError::RankDeficient { rank, expected: m });
        }
        Ok(TorusMap { cochar_matrix, ground })
    }

    /// Source rank n.
    pub fn source_rank(&self) -> usize {
        self.cochar_matrix.cols()
    }

    /// Target rank m.
    pub fn target_rank(&self) -> usize {
        self.cochar_matrix.rows()
    }
}

/// Unitary character data of T(F), per ground model; |χ(x)| = 1 always.
#[derive(Debug, Clone, PartialEq)]
pub enum TwistCharacter {
    /// χ(x) = ∏ sgn(x_j)^{ε_j} |x_j|^{iλ_j}.
    Real { sign_exponents: Vec<u8>, frequencies: Vec<f64> },
    /// χ(x) = ∏ e^{i k_j arg(x_j)} e^{iλ_j log|x_j|}.
    Complex { windings: Vec<i64>, frequencies: Vec<f64> },
    /// χ(w, v) = ∏ ω_u^{c_j w_j} e^{iλ_j v_j}.
    Discrete { unit_exponents: Vec<i64>, frequencies: Vec<f64> },
}

impl TwistCharacter {
    pub fn trivial(ground: Ground, rank: usize) -> Self {
        match ground {
            Ground::RealField => TwistCharacter::Real {
                sign_exponents: vec![0; rank],
                frequencies: vec![0.0; rank],
            },
            Ground::ComplexField => TwistCharacter::Complex {
                windings: vec![0; rank],
                frequencies: vec![0.0; rank],
            },
            Ground::DiscreteModel { .. } => TwistCharacter::Discrete {
                unit_exponents: vec![0; rank],
                frequencies: vec![0.0; rank],
            },
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            TwistCharacter::Real { frequencies, .. }
            | TwistCharacter::Complex { frequencies, .. }
            | TwistCharacter::Discrete { frequencies, .. } => frequencies.len(),
        }
    }
}

/// A point of T(F) or S(F) in split coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum GroundPoint {
    /// sign bits (0 = +, 1 = −) and logs.
    Real { signs: Vec<u8>, logs: Vec<f64> },
    /// angles in [0, 2π) and log-moduli.
    Complex { angles: Vec<f64>, logs: Vec<f64> },
    /// unit-part coordinates mod u and value-part integers.
    Discrete { units: Vec<i64>, vals: Vec<i64> },
}

impl GroundPoint {
    pub fn rank(&self) -> usize {
        match self {
            GroundPoint::Real { logs, .. } => logs.len(),
            GroundPoint::Complex { logs, .. } => logs.len(),
            GroundPoint::Discrete { vals, .. } => vals.len(),
        }
    }
}

/// Finite-part generator of the kernel, per ground model.
#[derive(Debug, Clone, PartialEq)]
pub enum FiniteGenerator {
    /// Real: an element of {±1}^n as sign bits.
    Signs(Vec<u8>),
    /// Complex: a torsion point with angle vector 2π·(entries), exact.
    Angles(Vec<Rat>),
    /// Discrete: unit-part coordinates mod u.
    Units(Vec<i64>),
}

/// D = ker ξ₀* split as a finite group A times a connected (or free)
/// part D°, the latter given by a saturated integer kernel basis.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelDecomposition {
    pub ground: Ground,
    /// n×k basis of ker_Z(M); real span = Lie(D°) (real/complex grounds),
    /// or the free kernel lattice (discrete model).
    pub connected_basis: IntMat,
    pub finite_generators: Vec<FiniteGenerator>,
    /// Order of each finite generator.
    pub finite_orders: Vec<u64>,
}

impl KernelDecomposition {
    pub fn finite_order(&self) -> u128 {
        self.finite_orders.iter().map(|&o| o as u128).product()
    }

    /// Enumerates the finite part A as coordinate tuples over the
    /// generators (mixed-radix), in lexicographic order.
    pub fn finite_elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for &order in &self.finite_orders {
            let mut next = Vec::with_capacity(out.len() * order as usize);
            for prefix in &out {
                for t in 0..order {
                    let mut p = prefix.clone();
                    p.push(t);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }
}

/// Computes D = A·D° from the Smith normal form of the cocharacter matrix.
pub fn kernel_decomposition(tm: &TorusMap) -> Result<KernelDecomposition, TorusError> {
    let m = &tm.cochar_matrix;
    let connected_basis = snf::kernel_basis(m);
    let (finite_generators, finite_orders) = match tm.ground {
        Ground::RealField => {
            // Kernel of M on {±1}^n = null space of M mod 2, minus sign
            // cosets inside the closure of D° — the closure carries only
            // positive signs, so the subtraction removes nothing; the set
            // arithmetic stays exact by construction.
            let zero = vec![0u8; m.rows()];
            let (_, basis) = solve_mod2(m, &zero).expect("homogeneous system is consistent");
            let gens: Vec<FiniteGenerator> =
                basis.into_iter().map(FiniteGenerator::Signs).collect();
            let orders = vec![2u64; gens.len()];
            (gens, orders)
        }
        Ground::ComplexField => {
            // Torsion of ker(M: T^n → T^m): from D = U M V, the angle
            // vectors 2π·V[:,i]/d_i for the divisors d_i > 1.
            let snf = smith_normal_form(m);
            let mut gens = Vec::new();
            let mut orders = Vec::new();
            for (i, &d) in snf.diagonal().iter().enumerate() {
                if d > 1 {
                    let col = snf.v.column(i);
                    gens.push(FiniteGenerator::Angles(
                        col.iter().map(|&x| Ratio::new(x, d)).collect(),
                    ));
                    orders.push(d as u64);
                }
            }
            (gens, orders)
        }
        Ground::DiscreteModel { unit_order } => {
            let u = unit_order as i64;
            let zero = vec![0i64; m.rows()];
            let (_, gens) = snf::solve_mod(m, &zero, u)
                .expect("homogeneous congruence is consistent");
            let mut out_gens = Vec::new();
            let mut orders = Vec::new();
            for g in gens {
                // order = lcm over coordinates of u / gcd(u, g_j)
                let ord = g
                    .iter()
                    .map(|&x| {
                        let g = gcd_i64(u, x.rem_euclid(u));
                        (u / if g == 0 { u } else { g }) as u64
                    })
                    .fold(1u64, |a, b| a / gcd_u64(a, b) * b);
                if ord > 1 {
                    out_gens.push(FiniteGenerator::Units(g));
                    orders.push(ord);
                }
            }
            (out_gens, orders)
        }
    };
    Ok(KernelDecomposition {
        ground: tm.ground,
        connected_basis,
        finite_generators,
        finite_orders,
    })
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact sanity check: every finite generator and every connected-basis
/// column maps to the identity under M.
pub fn kernel_maps_to_identity(tm: &TorusMap, kd: &KernelDecomposition) -> bool {
    let m = &tm.cochar_matrix;
    // connected part: M B = 0 exactly
    let prod = m.mul(&kd.connected_basis);
    if prod.data().iter().any(|&x| x != 0) {
        return false;
    }
    for g in &kd.finite_generators {
        match g {
            FiniteGenerator::Signs(bits) => {
                let v: Vec<i64> = bits.iter().map(|&b| b as i64).collect();
                if m.mul_vec(&v).iter().any(|&x| x.rem_euclid(2) != 0) {
                    return false;
                }
            }
            FiniteGenerator::Angles(angles) => {
                // M · angle vector must be integral (2π units)
                for i in 0..m.rows() {
                    let mut acc = Ratio::new(0, 1);
                    for (j, a) in angles.iter().enumerate() {
                        acc += Ratio::from_integer(m[(i, j)]) * a;
                    }
                    if !acc.is_integer() {
                        return false;
                    }
                }
            }
            FiniteGenerator::Units(units) => {
                let Ground::DiscreteModel { unit_order } = tm.ground else {
                    return false;
                };
                let u = unit_order as i64;
                if m.mul_vec(units).iter().any(|&x| x.rem_euclid(u) != 0) {
                    return false;
                }
            }
        }
    }
    true
}

/// The string form used in reports and singular-locus diagnostics.
pub(crate) fn format_rational_angles(angles: &[Rat]) -> String {
    let mut s = String::from("(");
    for (i, a) in angles.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&format!("{}/{}", a.numer(), a.denom()));
    }
    s.push_str(")·2π");
    s
}
