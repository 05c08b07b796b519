//! Finite abelian groups A = ∏ Z/nᵢ: subgroup closure and enumeration, and
//! the exact character-sum transform of subgroup indicators.
//!
//! The key identity here is 1̂_B(χ) = Σ_{b∈B} χ(b)⁻¹ = |B|·1_{A^⊥}(χ) with
//! A^⊥ = {χ : χ|_B = 1}. [`indicator_transform`] computes the left side by
//! brute-force character sums and the right side independently from the
//! generators, and checks exact integer equality.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] use num_traits::Float;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbelianError {
    TrivialOrder,
    TooLarge { order: u128, limit: u128 },
    GeneratorRank { expected: usize, found: usize },
}

impl core::fmt::Display for AbelianError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AbelianError::TrivialOrder => write!(f, "cyclic orders must be at least 1"),
            AbelianError::TooLarge { order, limit } => {
                write!(f, "group order {order} exceeds the supported limit {limit}")
            }
            AbelianError::GeneratorRank { expected, found } => {
                write!(f, "generator has {found} coordinates, expected {expected}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for AbelianError {}

/// Working limit: all the shipped checks stay at order ≤ 10⁴; the dense
/// element tables used here are fine well beyond that.
pub const MAX_ORDER: u128 = 1 << 22;

impl FiniteAbelianGroup {
    pub fn new(cyclic_orders: &[u64]) -> Result<Self, AbelianError> {
        if cyclic_orders.iter().any(|&n| n == 0) {
            return Err(AbelianError::TrivialOrder);
        }
        let order: u128 = cyclic_orders.iter().map(|&n| n as u128).product();
        if order > MAX_ORDER {
            return Err(AbelianError::TooLarge { order, limit: MAX_ORDER });
        }
        Ok(FiniteAbelianGroup { orders: cyclic_orders.to_vec() })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Flat index of an element given in (possibly unreduced) coordinates;
    /// out-of-range coordinates reduce, never reject.
    pub fn encode(&self, coords: &[i64]) -> Result<u32, AbelianError> {
        if coords.len() != self.orders.len() {
            return Err(AbelianError::GeneratorRank {
                expected: self.orders.len(),
                found: coords.len(),
            });
        }
        let mut idx: u64 = 0;
        for (c, &n) in coords.iter().zip(&self.orders) {
            idx = idx * n + c.rem_euclid(n as i64) as u64;
        }
        Ok(idx as u32)
    }

    pub fn decode(&self, mut idx: u32) -> Vec<u64> {
        let mut out = vec![0u64; self.orders.len()];
        for k in (0..self.orders.len()).rev() {
            out[k] = idx as u64 % self.orders[k];
            idx /= self.orders[k] as u32;
        }
        out
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let (ca, cb) = (self.decode(a), self.decode(b));
        let mut idx: u64 = 0;
        for ((x, y), &n) in ca.iter().zip(&cb).zip(&self.orders) {
            idx = idx * n + (x + y) % n;
        }
        idx as u32
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[Vec<i64>]) -> Result<Vec<u32>, AbelianError> {
        let mut member = vec![false; self.order() as usize];
        member[0] = true;
        let mut elements = vec![0u32];
        for g in gens {
            let g = self.encode(g)?;
            // extend the closed subgroup S by g: add cosets S + k·g until
            // the shift k·g falls back into the accumulated set.
            let base = elements.clone();
            let mut shift = g;
            while !member[shift as usize] {
                for &s in &base {
                    let t = self.add(s, shift);
                    if !member[t as usize] {
                        member[t as usize] = true;
                        elements.push(t);
                    }
                }
                shift = self.add(shift, g);
            }
        }
        elements.sort_unstable();
        Ok(elements)
    }

    /// Exact character pairing exponent: χ_k(a) = exp(2πi·pair/L) where
    /// pair = Σ kᵢ aᵢ (L/nᵢ) mod L and L = lcm of the orders.
    fn char_exponent(&self, chi: u32, a: u32, l: u64) -> u64 {
        let kc = self.decode(chi);
        let ac = self.decode(a);
        let mut acc: u128 = 0;
        for ((k, x), &n) in kc.iter().zip(&ac).zip(&self.orders) {
            acc += (*k as u128) * (*x as u128) % (l as u128) * ((l / n) as u128);
        }
        (acc % l as u128) as u64
    }
}

fn lcm_orders(orders: &[u64]) -> u64 {
    orders.iter().fold(1u64, |a, &b| {
        let g = gcd(a, b);
        a / g * b
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorTransform {
    /// Character sums Σ_{b∈B} χ(b)⁻¹ per flat character index, rounded to
    /// the nearest integer (real parts; imaginary parts vanish for sums
    /// over subgroups).
    pub transform: Vec<i64>,
    /// |B| · 1_{A^⊥}(χ), computed independently from the generators.
    pub predicted: Vec<i64>,
    pub subgroup_order: u64,
    /// Exact (post-rounding) equality of the two routes.
    pub matches: bool,
    /// Largest distance of any brute-force sum from its rounded integer;
    /// a health check on the float route.
    pub max_rounding_residual: f64,
}

/// Brute-force character-sum transform of the subgroup indicator 1_B,
/// checked against |B|·1_{A^⊥}.
pub fn indicator_transform(
    group: &FiniteAbelianGroup,
    subgroup_generators: &[Vec<i64>],
) -> Result<IndicatorTransform, AbelianError> {
    let b = group.subgroup(subgroup_generators)?;
    let n = group.order() as usize;
    let l = lcm_orders(group.orders());
    // e^{-2πi t / L} table
    let tau = core::f64::consts::TAU;
    let table: Vec<crate::C64> = (0..l)
        .map(|t| {
            let ang = -tau * t as f64 / l as f64;
            crate::C64::new(ang.cos(), ang.sin())
        })
        .collect();
    let gens_encoded: Vec<u32> = subgroup_generators
        .iter()
        .map(|g| group.encode(g))
        .collect::<Result<_, _>>()?;

    let mut transform = Vec::with_capacity(n);
    let mut predicted = Vec::with_capacity(n);
    let mut max_residual = 0.0f64;
    for chi in 0..n as u32 {
        let mut acc = crate::C64::new(0.0, 0.0);
        for &e in &b {
            acc += table[group.char_exponent(chi, e, l) as usize];
        }
        let rounded = acc.re.round();
        max_residual = max_residual
            .max((acc.re - rounded).abs())
            .max(acc.im.abs());
        transform.push(rounded as i64);
        // χ ∈ A^⊥ iff χ kills every generator — exact integer test.
        let in_perp = gens_encoded
            .iter()
            .all(|&g| group.char_exponent(chi, g, l) == 0);
        predicted.push(if in_perp { b.len() as i64 } else { 0 });
    }
    let matches = transform == predicted;
    Ok(IndicatorTransform {
        transform,
        predicted,
        subgroup_order: b.len() as u64,
        matches,
        max_rounding_residual: max_residual,
    })
}

/// All subgroups of `group`, each as a sorted list of flat element indices.
/// Intended for groups of modest order (the shipped checks go to 200).
pub fn enumerate_subgroups(group: &FiniteAbelianGroup) -> Vec<Vec<u32>> {
    let n = group.order() as usize;
    // addition table for speed
    let mut add = vec![0u32; n * n];
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            add[a as usize * n + b as usize] = group.add(a, b);
        }
    }
    let trivial = vec![0u32];
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    seen.insert(trivial.clone());
    let mut queue = vec![trivial];
    while let Some(s) = queue.pop() {
        let mut member = vec![false; n];
        for &e in &s {
            member[e as usize] = true;
        }
        for a in 1..n as u32 {
            if member[a as usize] {
                continue;
            }
            // closure of ⟨s, a⟩ = ∪_k (s + k·a)
            let mut new_member = member.clone();
            let mut elements = s.clone();
            let mut shift = a;
            while !new_member[shift as usize] {
                for &e in &s {
                    let t = add[e as usize * n + shift as usize];
                    if !new_member[t as usize] {
                        new_member[t as usize] = true;
                        elements.push(t);
                    }
                }
                shift = add[shift as usize * n + a as usize];
            }
            elements.sort_unstable();
            if seen.insert(elements.clone()) {
                queue.push(elements);
            }
        }
    }
    seen.into_iter().collect()
}

/// Pretty-prints an element for diagnostics.
pub fn element_string(group: &FiniteAbelianGroup, e: u32) -> String {
    use core::fmt::Write;
    let mut s = String::from("(");
    for (i, c) in group.decode(e).iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{c}");
    }
    s.push(')');
    s
}
