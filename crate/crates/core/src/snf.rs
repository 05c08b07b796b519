//! Smith normal form of integer matrices, with the unimodular transforms,
//! plus the lattice-kernel and divisibility solvers built on it.

use crate::mat::IntMat;
use alloc::vec;
use alloc::vec::Vec;

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal with
/// `d[0] | d[1] | ...` (non-negative diagonal).
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<i64> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)]).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|&&x| x != 0).count()
    }

    /// Nontrivial elementary divisors (the entries > 1).
    pub fn torsion_divisors(&self) -> Vec<i64> {
        self.diagonal().into_iter().filter(|&x| x > 1).collect()
    }
}

pub fn smith_normal_form(m: &IntMat) -> Snf {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // Move a pivot of smallest absolute value into position (t, t).
        let Some((pi, pj)) = smallest_nonzero(&d, t) else { break };
        swap_rows(&mut d, &mut u, t, pi);
        swap_cols(&mut d, &mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = div_nearest(d[(i, t)], d[(t, t)]);
                if q != 0 {
                    row_op(&mut d, &mut u, i, t, q);
                }
                if d[(i, t)] != 0 {
                    // Remainder strictly smaller in absolute value: swap up
                    // and keep reducing.
                    swap_rows(&mut d, &mut u, t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = div_nearest(d[(t, j)], d[(t, t)]);
                if q != 0 {
                    col_op(&mut d, &mut v, j, t, q);
                }
                if d[(t, j)] != 0 {
                    swap_cols(&mut d, &mut v, t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        t += 1;
    }

    // Fix signs, then enforce the divisibility chain.
    let n = rows.min(cols);
    for i in 0..n {
        if d[(i, i)] < 0 {
            negate_row(&mut d, &mut u, i);
        }
    }
    loop {
        let mut changed = false;
        for i in 0..n.saturating_sub(1) {
            let a = d[(i, i)];
            let b = d[(i + 1, i + 1)];
            if a != 0 && b % a != 0 {
                // Standard trick: add column i+1 to column i, then
                // re-eliminate the 2x2 block.
                col_add(&mut d, &mut v, i, i + 1);
                reduce_pair(&mut d, &mut u, &mut v, i);
                for k in 0..=i + 1 {
                    if d[(k, k)] < 0 {
                        negate_row(&mut d, &mut u, k);
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    debug_assert_eq!(u.mul(m).mul(&v), d);
    Snf { u, d, v }
}

/// Basis of the integer kernel of `m` (columns of the result); the basis is
/// saturated, i.e. it spans `ker(m) ∩ Z^n` exactly.
pub fn kernel_basis(m: &IntMat) -> IntMat {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let cols: Vec<Vec<i64>> = (rank..m.cols()).map(|j| snf.v.column(j)).collect();
    IntMat::from_columns(m.cols(), &cols)
}

/// A particular integer solution of `m x = b`, if one exists.
pub fn solve_integer(m: &IntMat, b: &[i64]) -> Option<Vec<i64>> {
    assert_eq!(b.len(), m.rows());
    let snf = smith_normal_form(m);
    let c = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut y = vec![0i64; m.cols()];
    for i in 0..m.rows() {
        let d = if i < diag.len() { diag[i] } else { 0 };
        if d == 0 {
            if c[i] != 0 {
                return None;
            }
        } else {
            if c[i] % d != 0 {
                return None;
            }
            y[i] = c[i] / d;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// A particular solution of `m x ≡ b (mod n)` together with generators of
/// the solution lattice of the homogeneous congruence (mod n), or `None`.
pub fn solve_mod(m: &IntMat, b: &[i64], n: i64) -> Option<(Vec<i64>, Vec<Vec<i64>>)> {
    assert!(n > 0);
    assert_eq!(b.len(), m.rows());
    let snf = smith_normal_form(m);
    let c = snf.u.mul_vec(b);
    let diag = snf.diagonal();
    let mut y = vec![0i64; m.cols()];
    for i in 0..m.rows() {
        let d = if i < diag.len() { diag[i] } else { 0 };
        // d y ≡ c (mod n): solvable iff gcd(d, n) | c.
        let dd = d.rem_euclid(n);
        let g = gcd(dd, n);
        let g = if g == 0 { n } else { g };
        let ci = c[i].rem_euclid(n);
        if ci % g != 0 {
            return None;
        }
        if dd != 0 {
            // Solve (dd/g) y ≡ (ci/g) (mod n/g) by modular inverse.
            let ng = n / g;
            let inv = mod_inverse((dd / g).rem_euclid(ng), ng)?;
            y[i] = ((ci / g) % ng * inv).rem_euclid(ng);
        } else if ci != 0 {
            return None;
        }
    }
    let x = snf.v.mul_vec(&y).iter().map(|t| t.rem_euclid(n)).collect();
    // Homogeneous solution group: V columns scaled by n/gcd(d_j, n); a
    // diagonal entry 0 gives a free column (step 1), gcd 1 a trivial one.
    let mut gens = Vec::new();
    for j in 0..m.cols() {
        let d = if j < diag.len() { diag[j] } else { 0 };
        let g = gcd(d, n);
        let step = n / if g == 0 { n } else { g };
        if step.rem_euclid(n) == 0 {
            continue;
        }
        let col = snf.v.column(j);
        gens.push(col.iter().map(|t| (t * step).rem_euclid(n)).collect());
    }
    Some((x, gens))
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn mod_inverse(a: i64, n: i64) -> Option<i64> {
    if n == 1 {
        return Some(0);
    }
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (n, a.rem_euclid(n));
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(n))
}

fn smallest_nonzero(d: &IntMat, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let x = d[(i, j)];
            if x != 0 {
                match best {
                    Some((bi, bj)) if d[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
    }
    best
}

fn div_nearest(a: i64, b: i64) -> i64 {
    // Quotient rounding to nearest, so remainders shrink fast.
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        q + if (r < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

fn swap_rows(d: &mut IntMat, u: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..d.cols() {
        let t = d[(a, j)];
        d[(a, j)] = d[(b, j)];
        d[(b, j)] = t;
    }
    for j in 0..u.cols() {
        let t = u[(a, j)];
        u[(a, j)] = u[(b, j)];
        u[(b, j)] = t;
    }
}

fn swap_cols(d: &mut IntMat, v: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..d.rows() {
        let t = d[(i, a)];
        d[(i, a)] = d[(i, b)];
        d[(i, b)] = t;
    }
    for i in 0..v.rows() {
        let t = v[(i, a)];
        v[(i, a)] = v[(i, b)];
        v[(i, b)] = t;
    }
}

/// row[i] -= q * row[t]
fn row_op(d: &mut IntMat, u: &mut IntMat, i: usize, t: usize, q: i64) {
    for j in 0..d.cols() {
        d[(i, j)] -= q * d[(t, j)];
    }
    for j in 0..u.cols() {
        u[(i, j)] -= q * u[(t, j)];
    }
}

/// col[j] -= q * col[t]
fn col_op(d: &mut IntMat, v: &mut IntMat, j: usize, t: usize, q: i64) {
    for i in 0..d.rows() {
        d[(i, j)] -= q * d[(i, t)];
    }
    for i in 0..v.rows() {
        v[(i, j)] -= q * v[(i, t)];
    }
}

fn col_add(d: &mut IntMat, v: &mut IntMat, dst: usize, src: usize) {
    for i in 0..d.rows() {
        d[(i, dst)] += d[(i, src)];
    }
    for i in 0..v.rows() {
        v[(i, dst)] += v[(i, src)];
    }
}

fn negate_row(d: &mut IntMat, u: &mut IntMat, i: usize) {
    for j in 0..d.cols() {
        d[(i, j)] = -d[(i, j)];
    }
    for j in 0..u.cols() {
        u[(i, j)] = -u[(i, j)];
    }
}

/// Re-eliminates the block starting at `t` after a divisibility fix.
fn reduce_pair(d: &mut IntMat, u: &mut IntMat, v: &mut IntMat, t: usize) {
    loop {
        let Some((pi, pj)) = smallest_nonzero(d, t) else { return };
        swap_rows(d, u, t, pi);
        swap_cols(d, v, t, pj);
        let mut dirty = false;
        for i in t + 1..d.rows() {
            let q = div_nearest(d[(i, t)], d[(t, t)]);
            if q != 0 {
                row_op(d, u, i, t, q);
            }
            if d[(i, t)] != 0 {
                swap_rows(d, u, t, i);
                dirty = true;
            }
        }
        for j in t + 1..d.cols() {
            let q = div_nearest(d[(t, j)], d[(t, t)]);
            if q != 0 {
                col_op(d, v, j, t, q);
            }
            if d[(t, j)] != 0 {
                swap_cols(d, v, t, j);
                dirty = true;
            }
        }
        if !dirty {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn check(m: IntMat) {
        let snf = smith_normal_form(&m);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert_eq!(snf.u.det().abs(), 1, "u not unimodular");
        assert_eq!(snf.v.det().abs(), 1, "v not unimodular");
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if w[0] != 0 {
                assert_eq!(w[1] % w[0], 0, "divisibility chain broken: {diag:?}");
            } else {
                assert_eq!(w[1], 0);
            }
        }
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert_eq!(snf.d[(i, j)], 0);
                }
            }
        }
    }

    #[test]
    fn snf_of_small_matrices() {
        check(IntMat::new(1, 1, vec![2]));
        check(IntMat::new(1, 2, vec![1, 1]));
        check(IntMat::new(2, 2, vec![2, 4, 4, 8]));
        check(IntMat::new(2, 3, vec![2, 4, 4, -6, 6, 12]));
        check(IntMat::new(3, 3, vec![2, 0, 0, 0, 3, 0, 0, 0, 5]));
        check(IntMat::new(3, 2, vec![1, 0, 0, 0, 0, 0]));
        check(IntMat::zeros(2, 2));
    }

    #[test]
    fn snf_divisor_chain_example() {
        // diag(2,3,5) has SNF diag(1,...,30)-style chain.
        let m = IntMat::new(3, 3, vec![2, 0, 0, 0, 3, 0, 0, 0, 5]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), vec![1, 1, 30]);
    }

    #[test]
    fn kernel_basis_spans_kernel() {
        let m = IntMat::new(1, 2, vec![1, 1]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols(), 1);
        assert_eq!(m.mul(&k), IntMat::zeros(1, 1));
        // Saturation: the generator must be primitive.
        let col = k.column(0);
        assert_eq!(col.iter().fold(0, |a, &b| super::gcd(a, b)), 1);

        let id = IntMat::identity(3);
        assert_eq!(kernel_basis(&id).cols(), 0);
    }

    #[test]
    fn integer_solver() {
        let m = IntMat::new(1, 2, vec![2, 4]);
        let x = solve_integer(&m, &[6]).unwrap();
        assert_eq!(2 * x[0] + 4 * x[1], 6);
        assert!(solve_integer(&m, &[3]).is_none());
    }

    #[test]
    fn modular_solver() {
        // 2x = 2 mod 4: solvable; 2x = 1 mod 4: not.
        let m = IntMat::new(1, 1, vec![2]);
        let (x, _gens) = solve_mod(&m, &[2], 4).unwrap();
        assert_eq!((2 * x[0]).rem_euclid(4), 2);
        assert!(solve_mod(&m, &[1], 4).is_none());
    }
}
