//! Small dense matrices over the scalars the crate actually needs: `i64`
//! (lattice bases, cocharacter maps), exact rationals (dual lattices, units
//! of 2π), and `f64` (inner products, linear maps).
//!
//! Everything is desk scale (dimensions well under 100), so the algorithms
//! are the simple exact or classically stable ones: Bareiss for integer
//! determinants and rank, Gauss–Jordan over the rationals, LU with partial
//! pivoting and cyclic Jacobi for `f64`.

use alloc::vec;
use alloc::vec::Vec;
use num_rational::Ratio;
use num_traits::Zero;
#[allow(unused_imports)] use num_traits::Float;

pub type Rat = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<i64>) -> Self {
        assert_eq!(data.len(), rows * cols, "integer matrix shape mismatch");
        IntMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<i64>]) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for i in 0..rows {
                m[(i, j)] = c[i];
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[i64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "integer matrix product shape mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    acc += self[(i, k)] as i128 * other[(k, j)] as i128;
                }
                out[(i, j)] = i128_to_i64(acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols, "integer matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let acc: i128 =
                    (0..self.cols).map(|k| self[(i, k)] as i128 * v[k] as i128).sum();
                i128_to_i64(acc)
            })
            .collect()
    }

    /// Determinant by the Bareiss fraction-free algorithm (exact).
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let pivot = (k + 1..n).find(|&i| a[i * n + k] != 0);
                match pivot {
                    Some(p) => {
                        for j in 0..n {
                            a.swap(k * n + j, p * n + j);
                        }
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] =
                        (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
                a[i * n + k] = 0;
            }
            prev = a[k * n + k];
        }
        i128_to_i64(sign * a[n * n - 1])
    }

    /// Rank over the rationals (fraction-free elimination).
    pub fn rank(&self) -> usize {
        let mut a: Vec<Rat> =
            self.data.iter().map(|&x| Ratio::from_integer(x)).collect();
        rat_row_echelon_rank(&mut a, self.rows, self.cols)
    }

    pub fn to_rat(&self) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| Ratio::from_integer(x)).collect(),
        }
    }

    pub fn to_real(&self) -> RealMat {
        RealMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x as f64).collect(),
        }
    }
}

impl core::ops::Index<(usize, usize)> for IntMat {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

fn i128_to_i64(x: i128) -> i64 {
    i64::try_from(x).expect("integer overflow in exact matrix arithmetic")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "rational matrix shape mismatch");
        RatMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Ratio::from_integer(1);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Rat] {
        &self.data
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "rational matrix product shape mismatch");
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self[(i, k)] * other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn mul_int_vec(&self, v: &[i64]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|k| self[(i, k)] * Ratio::from_integer(v[k]))
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .collect()
    }

    /// Exact inverse by Gauss–Jordan; `None` when singular.
    pub fn inverse(&self) -> Option<RatMat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMat::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a[(pivot, j)];
                    a[(pivot, j)] = a[(col, j)];
                    a[(col, j)] = tmp;
                    let tmp = inv[(pivot, j)];
                    inv[(pivot, j)] = inv[(col, j)];
                    inv[(col, j)] = tmp;
                }
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r != col && !a[(r, col)].is_zero() {
                    let f = a[(r, col)];
                    for j in 0..n {
                        let s = a[(col, j)] * f;
                        a[(r, j)] -= s;
                        let s = inv[(col, j)] * f;
                        inv[(r, j)] -= s;
                    }
                }
            }
        }
        Some(inv)
    }

    pub fn is_integer(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn scale(&self, s: Rat) -> RatMat {
        RatMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn to_real(&self) -> RealMat {
        RealMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|x| *x.numer() as f64 / *x.denom() as f64)
                .collect(),
        }
    }

    /// Rounds every entry to the nearest integer matrix, if all entries are
    /// integral.
    pub fn to_int(&self) -> Option<IntMat> {
        if !self.is_integer() {
            return None;
        }
        Some(IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_integer()).collect(),
        })
    }
}

impl core::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

fn rat_row_echelon_rank(a: &mut [Rat], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot = (row..rows).find(|&r| !a[r * cols + col].is_zero());
        let Some(p) = pivot else { continue };
        for j in 0..cols {
            a.swap(row * cols + j, p * cols + j);
        }
        let pv = a[row * cols + col];
        for r in row + 1..rows {
            let f = a[r * cols + col] / pv;
            if !f.is_zero() {
                for j in col..cols {
                    let s = a[row * cols + j] * f;
                    a[r * cols + j] -= s;
                }
            }
        }
        row += 1;
        rank += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// Best rational approximation of `x` by continued fractions, with the
/// denominator capped at `max_den`. Returns `None` when no fraction within
/// the cap reproduces `x` to `tol`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() <= tol {
            return Some(Ratio::new(p1, q1));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let a = (1.0 / frac).floor();
        frac = 1.0 / frac - a;
        let a = a as i64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let approx = p1 as f64 / q1 as f64;
    ((approx - x).abs() <= tol).then(|| Ratio::new(p1, q1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealMat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMat {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "real matrix shape mismatch");
        RealMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RealMat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> RealMat {
        let mut t = RealMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &RealMat) -> RealMat {
        assert_eq!(self.cols, other.rows, "real matrix product shape mismatch");
        let mut out = RealMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0.0;
                for k in 0..self.cols {
                    acc += self[(i, k)] * other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "real matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if (self[(i, j)] - self[(j, i)]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1.0;
        }
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot = col;
            for r in col + 1..n {
                if a[r * n + col].abs() > a[pivot * n + col].abs() {
                    pivot = r;
                }
            }
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            det *= a[col * n + col];
            for r in col + 1..n {
                let f = a[r * n + col] / a[col * n + col];
                for j in col..n {
                    a[r * n + j] -= f * a[col * n + j];
                }
            }
        }
        det
    }

    /// Inverse by Gauss–Jordan with partial pivoting; `None` when a pivot
    /// falls below `1e-300`.
    pub fn inverse(&self) -> Option<RealMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RealMat::identity(n);
        for col in 0..n {
            let mut pivot = col;
            for r in col + 1..n {
                if a[(r, col)].abs() > a[(pivot, col)].abs() {
                    pivot = r;
                }
            }
            if a[(pivot, col)].abs() < 1e-300 {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    let t = a[(pivot, j)];
                    a[(pivot, j)] = a[(col, j)];
                    a[(col, j)] = t;
                    let t = inv[(pivot, j)];
                    inv[(pivot, j)] = inv[(col, j)];
                    inv[(col, j)] = t;
                }
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r != col {
                    let f = a[(r, col)];
                    if f != 0.0 {
                        for j in 0..n {
                            a[(r, j)] -= f * a[(col, j)];
                            inv[(r, j)] -= f * inv[(col, j)];
                        }
                    }
                }
            }
        }
        Some(inv)
    }

    /// Eigenvalues of a symmetric matrix by the cyclic Jacobi method,
    /// ascending.
    pub fn symmetric_eigenvalues(&self) -> Vec<f64> {
        assert_eq!(self.rows, self.cols, "eigenvalues of non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        for _sweep in 0..64 {
            let mut off = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    off += a[i * n + j] * a[i * n + j];
                }
            }
            if off.sqrt() < 1e-14 * (1.0 + frobenius(&a)) {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[p * n + q];
                    if apq.abs() < 1e-300 {
                        continue;
                    }
                    let app = a[p * n + p];
                    let aqq = a[q * n + q];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[k * n + p];
                        let akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[p * n + k];
                        let aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
        eig.sort_by(|x, y| x.partial_cmp(y).expect("NaN eigenvalue"));
        eig
    }

    /// Smallest singular value, computed as sqrt of the smallest eigenvalue
    /// of AᵀA (clamped at zero).
    pub fn min_singular_value(&self) -> f64 {
        let gram = self.transpose().mul(self);
        let eig = gram.symmetric_eigenvalues();
        eig.first().copied().unwrap_or(0.0).max(0.0).sqrt()
    }
}

impl core::ops::Index<(usize, usize)> for RealMat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for RealMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

fn frobenius(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<crate::C64>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<crate::C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "complex matrix shape mismatch");
        CMat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat { rows, cols, data: vec![crate::C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = crate::C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real(m: &RealMat) -> Self {
        CMat {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|&x| crate::C64::new(x, 0.0)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[crate::C64] {
        &self.data
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "complex matrix product shape mismatch");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = crate::C64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += self[(i, k)] * other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self[(i, j)] - self[(j, i)].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Inverse by complex Gauss–Jordan with partial pivoting.
    pub fn inverse(&self) -> Option<CMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CMat::identity(n);
        for col in 0..n {
            let mut pivot = col;
            for r in col + 1..n {
                if a[(r, col)].norm() > a[(pivot, col)].norm() {
                    pivot = r;
                }
            }
            if a[(pivot, col)].norm() < 1e-300 {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    let t = a[(pivot, j)];
                    a[(pivot, j)] = a[(col, j)];
                    a[(col, j)] = t;
                    let t = inv[(pivot, j)];
                    inv[(pivot, j)] = inv[(col, j)];
                    inv[(col, j)] = t;
                }
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r != col {
                    let f = a[(r, col)];
                    if f.norm() != 0.0 {
                        for j in 0..n {
                            let s = a[(col, j)] * f;
                            a[(r, j)] -= s;
                            let s = inv[(col, j)] * f;
                            inv[(r, j)] -= s;
                        }
                    }
                }
            }
        }
        Some(inv)
    }

    /// Eigenvalues of a Hermitian matrix, ascending, via the real symmetric
    /// embedding [[Re, −Im], [Im, Re]] (each eigenvalue appears twice
    /// there; the deduplicated ascending list is returned).
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut embed = RealMat::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                embed[(i, j)] = z.re;
                embed[(i, j + n)] = -z.im;
                embed[(i + n, j)] = z.im;
                embed[(i + n, j + n)] = z.re;
            }
        }
        let eig = embed.symmetric_eigenvalues();
        // doubled spectrum: take every second entry
        eig.into_iter().step_by(2).collect()
    }
}

impl core::ops::Index<(usize, usize)> for CMat {
    type Output = crate::C64;
    fn index(&self, (i, j): (usize, usize)) -> &crate::C64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut crate::C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `M x ≡ b (mod 2)` by Gaussian elimination over F2 with
/// lexicographic pivot choice. Returns a particular solution and a basis of
/// the homogeneous solution space, or `None` when inconsistent.
pub fn solve_mod2(m: &IntMat, b: &[u8]) -> Option<(Vec<u8>, Vec<Vec<u8>>)> {
    assert_eq!(b.len(), m.rows());
    let rows = m.rows();
    let cols = m.cols();
    let mut a: Vec<u8> = m.data().iter().map(|&x| (x.rem_euclid(2)) as u8).collect();
    let mut rhs: Vec<u8> = b.iter().map(|&x| x % 2).collect();
    let mut pivot_col_of_row = vec![usize::MAX; rows];
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| a[r * cols + col] == 1) else {
            continue;
        };
        for j in 0..cols {
            a.swap(row * cols + j, p * cols + j);
        }
        rhs.swap(row, p);
        for r in 0..rows {
            if r != row && a[r * cols + col] == 1 {
                for j in 0..cols {
                    a[r * cols + j] ^= a[row * cols + j];
                }
                rhs[r] ^= rhs[row];
            }
        }
        pivot_col_of_row[row] = col;
        row += 1;
        if row == rows {
            break;
        }
    }
    for r in row..rows {
        if rhs[r] == 1 {
            return None;
        }
    }
    let mut particular = vec![0u8; cols];
    for r in 0..row {
        particular[pivot_col_of_row[r]] = rhs[r];
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row[..row].to_vec();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u8; cols];
        v[free] = 1;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = a[r * cols + free];
        }
        basis.push(v);
    }
    Some((particular, basis))
}
