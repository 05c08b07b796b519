//! Fiber integration along ξ₀* with disintegration-exact measures, and the
//! adjunction identity ⟨χ_a, T_ξ f⟩_S = ⟨χ_{ξ_*a}, f⟩_T that pins every
//! normalisation constant.

use super::mixture::GaussianMixture;
use super::{
    kernel_decomposition, FiniteGenerator, Ground, GroundPoint, KernelDecomposition,
    TorusError, TorusMap, TwistCharacter,
};
use crate::mat::{solve_mod2, IntMat, RealMat};
use crate::quad::CompositeRule;
use crate::snf;
use crate::C64;
use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    /// Gauss–Legendre panels per log dimension.
    pub panels: usize,
    pub points_per_panel: usize,
    /// Trapezoid points per angular dimension (complex ground); exact for
    /// windings below half this count.
    pub angular_points: usize,
    /// Target absolute tolerance; drives the Gaussian truncation radius.
    pub tol: f64,
    /// Hard cap on finite-part enumerations.
    pub max_finite: u128,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            panels: 16,
            points_per_panel: 8,
            angular_points: 32,
            tol: 1e-9,
            max_finite: 1 << 20,
        }
    }
}

/// χ(t) for a point in matching split coordinates.
pub(crate) fn character_eval(chi: &TwistCharacter, point: &GroundPoint) -> C64 {
    match (chi, point) {
        (
            TwistCharacter::Real { sign_exponents, frequencies },
            GroundPoint::Real { signs, logs },
        ) => {
            let parity: u32 = sign_exponents
                .iter()
                .zip(signs)
                .map(|(&e, &s)| (e & s & 1) as u32)
                .sum();
            let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
            let phase: f64 = frequencies.iter().zip(logs).map(|(&l, &u)| l * u).sum();
            C64::new(0.0, phase).exp() * sign
        }
        (
            TwistCharacter::Complex { windings, frequencies },
            GroundPoint::Complex { angles, logs },
        ) => {
            let phase: f64 = windings
                .iter()
                .zip(angles)
                .map(|(&k, &t)| k as f64 * t)
                .chain(frequencies.iter().zip(logs).map(|(&l, &u)| l * u))
                .sum();
            C64::new(0.0, phase).exp()
        }
        (
            TwistCharacter::Discrete { unit_exponents, frequencies },
            GroundPoint::Discrete { units, vals },
        ) => {
            let phase: f64 = frequencies
                .iter()
                .zip(vals)
                .map(|(&l, &v)| l * v as f64)
                .sum();
            // the unit-part phase needs the group order; callers fold it in
            // via `unit_phase` below — kept separate because the order
            // lives on the ground model, not the character.
            let _ = unit_exponents;
            let _ = units;
            C64::new(0.0, phase).exp()
        }
        _ => {
            debug_assert!(false, "character / point coordinate kinds must match");
            C64::new(0.0, 0.0)
        }
    }
}

fn discrete_unit_phase(chi: &TwistCharacter, units: &[i64], unit_order: u64) -> C64 {
    if let TwistCharacter::Discrete { unit_exponents, .. } = chi {
        let phase: f64 = unit_exponents
            .iter()
            .zip(units)
            .map(|(&c, &w)| core::f64::consts::TAU * ((c * w) as f64) / unit_order as f64)
            .sum();
        C64::new(0.0, phase).exp()
    } else {
        C64::new(1.0, 0.0)
    }
}

/// Full character value including the discrete unit part.
pub(crate) fn character_full(
    chi: &TwistCharacter,
    point: &GroundPoint,
    ground: Ground,
) -> C64 {
    let base = character_eval(chi, point);
    match (point, ground) {
        (GroundPoint::Discrete { units, .. }, Ground::DiscreteModel { unit_order }) => {
            base * discrete_unit_phase(chi, units, unit_order)
        }
        _ => base,
    }
}

/// Pushforward ξ₀*(t) in split coordinates.
pub(crate) fn push_point(m: &IntMat, point: &GroundPoint, ground: Ground) -> GroundPoint {
    match point {
        GroundPoint::Real { signs, logs } => {
            let sv: Vec<i64> = signs.iter().map(|&s| s as i64).collect();
            GroundPoint::Real {
                signs: m.mul_vec(&sv).iter().map(|&x| (x.rem_euclid(2)) as u8).collect(),
                logs: m.to_real().mul_vec(logs),
            }
        }
        GroundPoint::Complex { angles, logs } => GroundPoint::Complex {
            angles: m.to_real().mul_vec(angles),
            logs: m.to_real().mul_vec(logs),
        },
        GroundPoint::Discrete { units, vals } => {
            let u = match ground {
                Ground::DiscreteModel { unit_order } => unit_order as i64,
                _ => 1,
            };
            GroundPoint::Discrete {
                units: m.mul_vec(units).iter().map(|&x| x.rem_euclid(u)).collect(),
                vals: m.mul_vec(vals),
            }
        }
    }
}

/// Min-norm preimage coordinates: Mᵀ(MMᵀ)⁻¹·y. M has full row rank by
/// `TorusMap::new`.
fn min_norm_solve(m: &RealMat, y: &[f64]) -> Vec<f64> {
    let mt = m.transpose();
    let gram = m.mul(&mt);
    let inv = gram.inverse().expect("full row rank");
    mt.mul_vec(&inv.mul_vec(y))
}

/// √(det BᵀB / det MMᵀ): the coarea constant of the disintegration of
/// Lebesgue measure along the linear map M, with the fiber parametrised by
/// the kernel basis B.
fn coarea_constant(m: &RealMat, b: &IntMat) -> f64 {
    let bt = b.to_real();
    let bb = bt.transpose().mul(&bt);
    let mm = m.mul(&m.transpose());
    (bb.det() / mm.det()).abs().sqrt()
}

struct LogFiber {
    rule: CompositeRule,
    basis: RealMat,
    k: usize,
}

impl LogFiber {
    fn new(
        kd: &KernelDecomposition,
        base_norm: f64,
        f: &GaussianMixture,
        opts: &QuadratureOptions,
    ) -> Result<Self, TorusError> {
        let k = kd.connected_basis.cols();
        let radius = f.truncation_radius(opts.tol)?;
        let reach = if k > 0 {
            let sigma = kd.connected_basis.to_real().min_singular_value();
            (radius + base_norm) / sigma.max(1e-12)
        } else {
            1.0
        };
        Ok(LogFiber {
            rule: CompositeRule::gauss_legendre(-reach, reach, opts.panels, opts.points_per_panel),
            basis: kd.connected_basis.to_real(),
            k,
        })
    }

    /// Iterates the k-dimensional tensor grid in lexicographic order,
    /// passing (offset = B·v, weight).
    fn for_each(&self, mut body: impl FnMut(&[f64], f64)) {
        let n = self.basis.rows();
        if self.k == 0 {
            body(&vec![0.0; n], 1.0);
            return;
        }
        let len = self.rule.len();
        let total = len.pow(self.k as u32);
        let mut idx = vec![0usize; self.k];
        for _ in 0..total {
            let v: Vec<f64> = idx.iter().map(|&i| self.rule.nodes[i]).collect();
            let w: f64 = idx.iter().map(|&i| self.rule.weights[i]).product();
            let offset = self.basis.mul_vec(&v);
            body(&offset, w);
            for d in (0..self.k).rev() {
                idx[d] += 1;
                if idx[d] < len {
                    break;
                }
                idx[d] = 0;
            }
        }
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// (T_ξ f)(s) = ∫_{fiber over s} χ_ξ(t) f(t) dμ_s(t); exactly 0 when the
/// fiber over the F-points is empty.
pub fn fiber_integrate(
    tm: &TorusMap,
    chi: &TwistCharacter,
    f: &GaussianMixture,
    s: &GroundPoint,
    opts: &QuadratureOptions,
) -> Result<C64, TorusError> {
    f.validate(tm.ground)?;
    if f.rank != tm.source_rank() {
        return Err(TorusError::Dimension("mixture rank != source rank".to_string()));
    }
    if chi.rank() != tm.source_rank() {
        return Err(TorusError::Dimension("twist rank != source rank".to_string()));
    }
    if s.rank() != tm.target_rank() {
        return Err(TorusError::Dimension("target point rank mismatch".to_string()));
    }
    let kd = kernel_decomposition(tm)?;
    let m_real = tm.cochar_matrix.to_real();

    match (tm.ground, s) {
        (Ground::RealField, GroundPoint::Real { signs, logs }) => {
            let Some((sign0, sign_basis)) = solve_mod2(&tm.cochar_matrix, signs) else {
                return Ok(C64::new(0.0, 0.0));
            };
            let combos = 1u128 << sign_basis.len();
            if combos > opts.max_finite {
                return Err(TorusError::FiniteKernelTooLarge(combos));
            }
            let u0 = min_norm_solve(&m_real, logs);
            let fiber = LogFiber::new(&kd, norm2(&u0), f, opts)?;
            let constant = coarea_constant(&m_real, &kd.connected_basis);
            let n = tm.source_rank();
            let mut acc = C64::new(0.0, 0.0);
            for combo in 0..combos {
                let mut eps = sign0.clone();
                for (b, basis_vec) in sign_basis.iter().enumerate() {
                    if combo >> b & 1 == 1 {
                        for (e, &x) in eps.iter_mut().zip(basis_vec) {
                            *e ^= x;
                        }
                    }
                }
                fiber.for_each(|offset, w| {
                    let logs_t: Vec<f64> =
                        (0..n).map(|j| u0[j] + offset[j]).collect();
                    let t = GroundPoint::Real { signs: eps.clone(), logs: logs_t };
                    let val = character_full(chi, &t, tm.ground) * f.eval(&t, tm.ground);
                    acc += val * w;
                });
            }
            Ok(acc * constant)
        }
        (Ground::ComplexField, GroundPoint::Complex { angles, logs }) => {
            let finite = kd.finite_order();
            if finite > opts.max_finite {
                return Err(TorusError::FiniteKernelTooLarge(finite));
            }
            let theta0 = min_norm_solve(&m_real, angles);
            let u0 = min_norm_solve(&m_real, logs);
            let fiber = LogFiber::new(&kd, norm2(&u0), f, opts)?;
            let constant = coarea_constant(&m_real, &kd.connected_basis);
            let n = tm.source_rank();
            let k = kd.connected_basis.cols();
            // finite-part angle offsets
            let tau = core::f64::consts::TAU;
            let a_elements = kd.finite_elements();
            let mut angle_offsets: Vec<Vec<f64>> = Vec::with_capacity(a_elements.len());
            for coords in &a_elements {
                let mut off = vec![0.0f64; n];
                for (t, gen) in coords.iter().zip(&kd.finite_generators) {
                    if let FiniteGenerator::Angles(r) = gen {
                        for j in 0..n {
                            off[j] += tau * *t as f64 * (*r[j].numer() as f64)
                                / (*r[j].denom() as f64);
                        }
                    }
                }
                angle_offsets.push(off);
            }
            // angular kernel directions: ψ over [0, 2π)^k with dψ/2π
            let circle = CompositeRule::circle(opts.angular_points.max(1));
            let psi_total = circle.len().pow(k as u32);
            let b = &kd.connected_basis;
            let mut acc = C64::new(0.0, 0.0);
            for off in &angle_offsets {
                let mut psi_idx = vec![0usize; k];
                for _ in 0..psi_total.max(1) {
                    let mut ang = vec![0.0f64; n];
                    let mut psi_weight = 1.0;
                    for (d, &pi) in psi_idx.iter().enumerate() {
                        let psi = circle.nodes[pi];
                        psi_weight *= circle.weights[pi] / tau;
                        for j in 0..n {
                            ang[j] += b[(j, d)] as f64 * psi;
                        }
                    }
                    fiber.for_each(|offset, w| {
                        let angles_t: Vec<f64> = (0..n)
                            .map(|j| theta0[j] + off[j] + ang[j])
                            .collect();
                        let logs_t: Vec<f64> = (0..n).map(|j| u0[j] + offset[j]).collect();
                        let t = GroundPoint::Complex { angles: angles_t, logs: logs_t };
                        let val =
                            character_full(chi, &t, tm.ground) * f.eval(&t, tm.ground);
                        acc += val * (w * psi_weight);
                    });
                    for d in (0..k).rev() {
                        psi_idx[d] += 1;
                        if psi_idx[d] < circle.len() {
                            break;
                        }
                        psi_idx[d] = 0;
                    }
                    if k == 0 {
                        break;
                    }
                }
            }
            Ok(acc * constant / finite.max(1) as f64)
        }
        (Ground::DiscreteModel { unit_order }, GroundPoint::Discrete { units, vals }) => {
            let u = unit_order as i64;
            let Some((w0, wgens)) = snf::solve_mod(&tm.cochar_matrix, units, u) else {
                return Ok(C64::new(0.0, 0.0));
            };
            let Some(v0) = snf::solve_integer(&tm.cochar_matrix, vals) else {
                return Ok(C64::new(0.0, 0.0));
            };
            // enumerate the unit-part solutions (deduplicated)
            let mut unit_solutions: BTreeSet<Vec<i64>> = BTreeSet::new();
            let mut stack = vec![w0.clone()];
            unit_solutions.insert(w0.iter().map(|x| x.rem_euclid(u)).collect());
            while let Some(cur) = stack.pop() {
                for g in &wgens {
                    let next: Vec<i64> = cur
                        .iter()
                        .zip(g)
                        .map(|(&a, &b)| (a + b).rem_euclid(u))
                        .collect();
                    if unit_solutions.insert(next.clone()) {
                        if unit_solutions.len() as u128 > opts.max_finite {
                            return Err(TorusError::FiniteKernelTooLarge(
                                unit_solutions.len() as u128,
                            ));
                        }
                        stack.push(next);
                    }
                }
            }
            // value-part lattice sum over v0 + B·t in a decay-derived box
            let radius = f.truncation_radius(opts.tol)?;
            let k = kd.connected_basis.cols();
            let reach = if k > 0 {
                let sigma = kd.connected_basis.to_real().min_singular_value();
                (((radius + norm2(&v0.iter().map(|&x| x as f64).collect::<Vec<_>>()))
                    / sigma.max(1e-12))
                .ceil()) as i64
            } else {
                0
            };
            let n = tm.source_rank();
            let side = (2 * reach + 1) as usize;
            let mut acc = C64::new(0.0, 0.0);
            for w in &unit_solutions {
                for_each_grid(side, k, |idx| {
                    let mut vals_t: Vec<i64> = v0.clone();
                    for (d, &i) in idx.iter().enumerate() {
                        let td = i as i64 - reach;
                        for j in 0..n {
                            vals_t[j] += kd.connected_basis[(j, d)] * td;
                        }
                    }
                    let t = GroundPoint::Discrete { units: w.clone(), vals: vals_t };
                    acc += character_full(chi, &t, tm.ground) * f.eval(&t, tm.ground);
                    Ok::<(), TorusError>(())
                })?;
            }
            Ok(acc)
        }
        _ => Err(TorusError::GroundMismatch(
            "point coordinates do not match the ground model".to_string(),
        )),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdjunctionReport {
    pub lhs: C64,
    pub rhs: C64,
    pub abs_error: f64,
    /// |lhs − rhs| / (1 + |rhs|), the spectral-characterisation residual.
    pub rel_error: f64,
}

/// Computes both sides of ⟨χ_a, T_ξ f⟩_S = ⟨χ_ξ·(χ_a ∘ ξ₀*), f⟩_T by
/// independent quadratures and reports the discrepancy.
pub fn adjunction_check(
    tm: &TorusMap,
    chi: &TwistCharacter,
    f: &GaussianMixture,
    a: &TwistCharacter,
    opts: &QuadratureOptions,
) -> Result<AdjunctionReport, TorusError> {
    if a.rank() != tm.target_rank() {
        return Err(TorusError::Dimension("character rank != target rank".to_string()));
    }
    let radius = f.truncation_radius(opts.tol)?;
    let m_real = tm.cochar_matrix.to_real();
    // pushforward reach: |(M u)_i| ≤ (row sum) · radius
    let mut row_sum = 0.0f64;
    for i in 0..m_real.rows() {
        let s: f64 = (0..m_real.cols()).map(|j| m_real[(i, j)].abs()).sum();
        row_sum = row_sum.max(s);
    }
    let s_reach = row_sum * radius + 1.0;

    let lhs = integrate_target(tm, chi, f, a, s_reach, opts)?;
    let rhs = integrate_source(tm, chi, f, a, radius, opts)?;
    let abs_error = (lhs - rhs).norm();
    Ok(AdjunctionReport {
        lhs,
        rhs,
        abs_error,
        rel_error: abs_error / (1.0 + rhs.norm()),
    })
}

/// ∫_S χ_a(s) (T_ξ f)(s) ds
fn integrate_target(
    tm: &TorusMap,
    chi: &TwistCharacter,
    f: &GaussianMixture,
    a: &TwistCharacter,
    s_reach: f64,
    opts: &QuadratureOptions,
) -> Result<C64, TorusError> {
    let m = tm.target_rank();
    let rule =
        CompositeRule::gauss_legendre(-s_reach, s_reach, opts.panels, opts.points_per_panel);
    let mut acc = C64::new(0.0, 0.0);
    match tm.ground {
        Ground::RealField => {
            for sign_combo in 0..(1u32 << m) {
                let signs: Vec<u8> = (0..m).map(|i| (sign_combo >> i & 1) as u8).collect();
                for_each_grid(rule.len(), m, |idx| {
                    let logs: Vec<f64> = idx.iter().map(|&i| rule.nodes[i]).collect();
                    let w: f64 = idx.iter().map(|&i| rule.weights[i]).product();
                    let s = GroundPoint::Real { signs: signs.clone(), logs };
                    let tf = fiber_integrate(tm, chi, f, &s, opts)?;
                    acc += character_full(a, &s, tm.ground) * tf * w;
                    Ok(())
                })?;
            }
        }
        Ground::ComplexField => {
            let circle = CompositeRule::circle(opts.angular_points.max(1));
            let tau = core::f64::consts::TAU;
            for_each_grid(circle.len(), m, |aidx| {
                let angles: Vec<f64> = aidx.iter().map(|&i| circle.nodes[i]).collect();
                let aw: f64 = aidx.iter().map(|&i| circle.weights[i] / tau).product();
                for_each_grid(rule.len(), m, |idx| {
                    let logs: Vec<f64> = idx.iter().map(|&i| rule.nodes[i]).collect();
                    let w: f64 = idx.iter().map(|&i| rule.weights[i]).product();
                    let s = GroundPoint::Complex { angles: angles.clone(), logs };
                    let tf = fiber_integrate(tm, chi, f, &s, opts)?;
                    acc += character_full(a, &s, tm.ground) * tf * (w * aw);
                    Ok(())
                })
            })?;
        }
        Ground::DiscreteModel { unit_order } => {
            let reach = s_reach.ceil() as i64;
            let u = unit_order as i64;
            let side = (2 * reach + 1) as usize;
            for_each_grid(unit_order as usize, m, |uidx| {
                let units: Vec<i64> = uidx.iter().map(|&x| x as i64 % u).collect();
                for_each_grid(side, m, |vidx| {
                    let vals: Vec<i64> = vidx.iter().map(|&x| x as i64 - reach).collect();
                    let s = GroundPoint::Discrete { units: units.clone(), vals };
                    let tf = fiber_integrate(tm, chi, f, &s, opts)?;
                    acc += character_full(a, &s, tm.ground) * tf;
                    Ok(())
                })
            })?;
        }
    }
    Ok(acc)
}

/// ∫_T χ_ξ(t) χ_a(ξ₀*(t)) f(t) dt
fn integrate_source(
    tm: &TorusMap,
    chi: &TwistCharacter,
    f: &GaussianMixture,
    a: &TwistCharacter,
    radius: f64,
    opts: &QuadratureOptions,
) -> Result<C64, TorusError> {
    let n = tm.source_rank();
    let rule =
        CompositeRule::gauss_legendre(-radius, radius, opts.panels, opts.points_per_panel);
    let mut acc = C64::new(0.0, 0.0);
    match tm.ground {
        Ground::RealField => {
            for sign_combo in 0..(1u32 << n) {
                let signs: Vec<u8> = (0..n).map(|i| (sign_combo >> i & 1) as u8).collect();
                for_each_grid(rule.len(), n, |idx| {
                    let logs: Vec<f64> = idx.iter().map(|&i| rule.nodes[i]).collect();
                    let w: f64 = idx.iter().map(|&i| rule.weights[i]).product();
                    let t = GroundPoint::Real { signs: signs.clone(), logs };
                    let s = push_point(&tm.cochar_matrix, &t, tm.ground);
                    acc += character_full(chi, &t, tm.ground)
                        * character_full(a, &s, tm.ground)
                        * f.eval(&t, tm.ground)
                        * w;
                    Ok(())
                })?;
            }
        }
        Ground::ComplexField => {
            let circle = CompositeRule::circle(opts.angular_points.max(1));
            let tau = core::f64::consts::TAU;
            for_each_grid(circle.len(), n, |aidx| {
                let angles: Vec<f64> = aidx.iter().map(|&i| circle.nodes[i]).collect();
                let aw: f64 = aidx.iter().map(|&i| circle.weights[i] / tau).product();
                for_each_grid(rule.len(), n, |idx| {
                    let logs: Vec<f64> = idx.iter().map(|&i| rule.nodes[i]).collect();
                    let w: f64 = idx.iter().map(|&i| rule.weights[i]).product();
                    let t = GroundPoint::Complex { angles: angles.clone(), logs };
                    let s = push_point(&tm.cochar_matrix, &t, tm.ground);
                    acc += character_full(chi, &t, tm.ground)
                        * character_full(a, &s, tm.ground)
                        * f.eval(&t, tm.ground)
                        * (w * aw);
                    Ok(())
                })
            })?;
        }
        Ground::DiscreteModel { unit_order } => {
            let reach = radius.ceil() as i64;
            let u = unit_order as i64;
            let side = (2 * reach + 1) as usize;
            for_each_grid(unit_order as usize, n, |uidx| {
                let units: Vec<i64> = uidx.iter().map(|&x| x as i64 % u).collect();
                for_each_grid(side, n, |vidx| {
                    let vals: Vec<i64> = vidx.iter().map(|&x| x as i64 - reach).collect();
                    let t = GroundPoint::Discrete { units: units.clone(), vals };
                    let s = push_point(&tm.cochar_matrix, &t, tm.ground);
                    acc += character_full(chi, &t, tm.ground)
                        * character_full(a, &s, tm.ground)
                        * f.eval(&t, tm.ground);
                    Ok(())
                })
            })?;
        }
    }
    Ok(acc)
}

fn for_each_grid<E>(
    per_dim: usize,
    dims: usize,
    mut body: impl FnMut(&[usize]) -> Result<(), E>,
) -> Result<(), E> {
    if dims == 0 {
        return body(&[]);
    }
    let total = per_dim.pow(dims as u32);
    let mut idx = vec![0usize; dims];
    for _ in 0..total {
        body(&idx)?;
        for d in (0..dims).rev() {
            idx[d] += 1;
            if idx[d] < per_dim {
                break;
            }
            idx[d] = 0;
        }
    }
    Ok(())
}
