//! Exactly evaluable test functions on T(F) in split coordinates: finite
//! sums of Gaussians in the log/value coordinates with optional linear
//! phases and compact-part factors. Closed-form evaluation keeps fiber and
//! adjunction quadratures at their nominal accuracy, and the Gaussian tails
//! give computable truncation radii.

use super::{Ground, GroundPoint, TorusError};
use crate::C64;
use alloc::string::ToString;
use alloc::vec::Vec;
#[allow(unused_imports)] use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub enum CompactFactor {
    /// No compact-part dependence.
    None,
    /// Real ground: ∏ (−1)^{ε_j s_j} (a sign character).
    SignParity(Vec<u8>),
    /// Real ground: restrict to exactly this sign sheet.
    SignSheet(Vec<u8>),
    /// Complex ground: ∏ e^{i k_j θ_j}.
    Winding(Vec<i64>),
    /// Discrete ground: ∏ ω_u^{c_j w_j}.
    UnitCharacter(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureTerm {
    pub weight: C64,
    /// Gaussian widths a_j > 0: exp(−a_j (v_j − μ_j)²).
    pub widths: Vec<f64>,
    pub centers: Vec<f64>,
    /// Linear phase e^{i b_j v_j}.
    pub lin_phase: Vec<f64>,
    pub compact: CompactFactor,
}

/// f(t) = Σ_terms weight · compact(t) · ∏_j e^{−a_j(v_j−μ_j)² + i b_j v_j}.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixture {
    pub rank: usize,
    pub terms: Vec<MixtureTerm>,
}

impl GaussianMixture {
    /// Single centered Gaussian ∏ e^{−a_j v_j²} with no compact factor.
    pub fn gaussian(widths: &[f64]) -> Self {
        GaussianMixture {
            rank: widths.len(),
            terms: alloc::vec![MixtureTerm {
                weight: C64::new(1.0, 0.0),
                widths: widths.to_vec(),
                centers: alloc::vec![0.0; widths.len()],
                lin_phase: alloc::vec![0.0; widths.len()],
                compact: CompactFactor::None,
            }],
        }
    }

    pub fn validate(&self, ground: Ground) -> Result<(), TorusError> {
        for term in &self.terms {
            if term.widths.len() != self.rank
                || term.centers.len() != self.rank
                || term.lin_phase.len() != self.rank
            {
                return Err(TorusError::Dimension("mixture term rank mismatch".to_string()));
            }
            if term.widths.iter().any(|&a| !(a > 0.0)) {
                return Err(TorusError::Dimension(
                    "Gaussian widths must be positive".to_string(),
                ));
            }
            let ok = match (&term.compact, ground) {
                (CompactFactor::None, _) => true,
                (CompactFactor::SignParity(e), Ground::RealField)
                | (CompactFactor::SignSheet(e), Ground::RealField) => e.len() == self.rank,
                (CompactFactor::Winding(k), Ground::ComplexField) => k.len() == self.rank,
                (CompactFactor::UnitCharacter(c), Ground::DiscreteModel { .. }) => {
                    c.len() == self.rank
                }
                _ => false,
            };
            if !ok {
                return Err(TorusError::GroundMismatch(
                    "compact factor does not fit the ground model".to_string(),
                ));
            }
        }
        Ok(())
    }

    pub fn eval(&self, point: &GroundPoint, ground: Ground) -> C64 {
        match point {
            GroundPoint::Real { signs, logs } => self.eval_with(logs, &|c| match c {
                CompactFactor::None => C64::new(1.0, 0.0),
                CompactFactor::SignParity(e) => {
                    let parity: u32 =
                        e.iter().zip(signs).map(|(&a, &b)| (a & b & 1) as u32).sum();
                    C64::new(if parity % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
                }
                CompactFactor::SignSheet(e) => {
                    let same = e.iter().zip(signs).all(|(&a, &b)| a % 2 == b % 2);
                    C64::new(if same { 1.0 } else { 0.0 }, 0.0)
                }
                _ => C64::new(0.0, 0.0),
            }),
            GroundPoint::Complex { angles, logs } => self.eval_with(logs, &|c| match c {
                CompactFactor::None => C64::new(1.0, 0.0),
                CompactFactor::Winding(k) => {
                    let phase: f64 = k.iter().zip(angles).map(|(&k, &t)| k as f64 * t).sum();
                    C64::new(0.0, phase).exp()
                }
                _ => C64::new(0.0, 0.0),
            }),
            GroundPoint::Discrete { units, vals } => {
                let Ground::DiscreteModel { unit_order } = ground else {
                    return C64::new(0.0, 0.0);
                };
                let logs: Vec<f64> = vals.iter().map(|&v| v as f64).collect();
                self.eval_with(&logs, &|c| match c {
                    CompactFactor::None => C64::new(1.0, 0.0),
                    CompactFactor::UnitCharacter(cc) => {
                        let phase: f64 = cc
                            .iter()
                            .zip(units)
                            .map(|(&c, &w)| {
                                core::f64::consts::TAU * (c * w) as f64 / unit_order as f64
                            })
                            .sum();
                        C64::new(0.0, phase).exp()
                    }
                    _ => C64::new(0.0, 0.0),
                })
            }
        }
    }

    fn eval_with(&self, logs: &[f64], compact: &dyn Fn(&CompactFactor) -> C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for term in &self.terms {
            let cf = compact(&term.compact);
            if cf.norm() == 0.0 {
                continue;
            }
            let mut re = 0.0;
            let mut im = 0.0;
            for j in 0..self.rank {
                let d = logs[j] - term.centers[j];
                re -= term.widths[j] * d * d;
                im += term.lin_phase[j] * logs[j];
            }
            acc += term.weight * cf * C64::new(re, im).exp();
        }
        acc
    }

    /// Truncation radius in the log coordinates for absolute tail ≤ `tol`:
    /// beyond it every term is below tol/(#terms·max|w|). Errors when the
    /// required radius exceeds the hard cap (decay too weak for the
    /// requested tolerance), reporting the tail bound at the cap.
    pub fn truncation_radius(&self, tol: f64) -> Result<f64, TorusError> {
        const CAP: f64 = 60.0;
        if self.terms.is_empty() {
            return Ok(1.0);
        }
        let total_weight: f64 = self.terms.iter().map(|t| t.weight.norm()).sum();
        let a_min = self
            .terms
            .iter()
            .flat_map(|t| t.widths.iter().copied())
            .fold(f64::INFINITY, f64::min);
        let mu_max = self
            .terms
            .iter()
            .flat_map(|t| t.centers.iter().map(|c| c.abs()))
            .fold(0.0f64, f64::max);
        let excess = (total_weight / tol).max(1.0).ln();
        let radius = mu_max + (excess / a_min).sqrt() + 1.0;
        if radius > CAP {
            let d = CAP - mu_max;
            let tail_bound = total_weight * (-a_min * d * d).exp();
            return Err(TorusError::DecayInsufficient { tail_bound, tol });
        }
        Ok(radius)
    }
}
