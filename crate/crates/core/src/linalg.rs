//! Dense complex matrices and the handful of factorizations the rest of the
//! crate needs: Hermitian eigendecomposition (cyclic Jacobi), singular values,
//! nullspaces, determinants and Kronecker products.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance for structural preconditions such as Hermiticity.
pub const STRUCTURAL_TOL: f64 = 1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-13;

/// `exp(2πi x)`.
pub fn phase(x: f64) -> Result<Complex64> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "phase of non-finite value {x}"
        )));
    }
    Ok(unit_phase(x))
}

/// `exp(2πi x)` for inputs already known to be finite.
///
/// The argument is reduced modulo 1 first so that large lattice coordinates
/// do not lose precision in the trigonometric calls.
pub(crate) fn unit_phase(x: f64) -> Complex64 {
    let r = x - x.round();
    let (s, c) = (2.0 * PI * r).sin_cos();
    Complex64::new(c, s)
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting shape mismatches and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Square matrix from nested rows; panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self {
            rows: n,
            cols: m,
            data: rows.concat(),
        }
    }

    /// Real matrix from nested rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let m = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Self {
            rows: rows.len(),
            cols: m,
            data: rows
                .iter()
                .flat_map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)))
                .collect(),
        }
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn scale_in_place(&mut self, s: Complex64) {
        self.data.iter_mut().for_each(|z| *z *= s);
    }

    /// `self += s · other`, in place.
    pub fn axpy(&mut self, s: Complex64, other: &Self) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "axpy shape mismatch"
        );
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += s * b;
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .fold(0.0, nan_max)
            .sqrt()
    }

    /// `‖A − A†‖_max`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// `‖A − B‖_max`; infinite when the shapes differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, nan_max)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let (rows, inner, cols) = (self.rows, self.cols, other.cols);
        let mut out = Self::zeros(rows, cols);
        // Outer products of column k and row k, skipping zeros on both sides,
        // so a permutation-like factor costs O(n²) whichever side it is on.
        let mut nz_rows = Vec::with_capacity(rows);
        let mut nz_cols = Vec::with_capacity(cols);
        for k in 0..inner {
            nz_rows.clear();
            nz_rows.extend((0..rows).filter(|&i| self.data[i * inner + k] != ZERO));
            if nz_rows.is_empty() {
                continue;
            }
            nz_cols.clear();
            nz_cols.extend((0..cols).filter(|&j| other.data[k * cols + j] != ZERO));
            for &i in &nz_rows {
                let a = self.data[i * inner + k];
                for &j in &nz_cols {
                    out.data[i * cols + j] += a * other.data[k * cols + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        &self.matmul(other) + &other.matmul(self)
    }

    /// Product of a non-empty list of square matrices, left to right.
    pub fn product(mats: &[&Self]) -> Self {
        let mut it = mats.iter();
        let first = it.next().expect("product of an empty list");
        it.fold((*first).clone(), |acc, m| acc.matmul(m))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of range"
        );
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "add shape mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "sub shape mismatch"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// `max` that propagates NaN, so a corrupted entry never reads as a small residual.
pub fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Largest of non-negative values, or NaN if any is NaN.
pub fn nonneg_max(values: impl Iterator<Item = f64>) -> f64 {
    let (max, sum) = values.fold((0.0f64, 0.0f64), |(m, s), x| (m.max(x), s + x));
    if sum.is_nan() {
        f64::NAN
    } else {
        max
    }
}

/// Kronecker product: entry `(ia·rB + ib, ja·cB + jb)` is `A(ia,ja)·B(ib,jb)`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows, a.cols, b.rows, b.cols);
    ComplexMatrix::from_fn(ra * rb, ca * cb, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    })
}

/// All permutations of `0..n` in lexicographic order, paired with their sign.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        out.push((perm.clone(), permutation_sign(&perm)));
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    out
}

/// Sign of a permutation given as an image list, via inversion count.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Σ_σ sign(σ) A_σ(1)⋯A_σ(n)` over all `n!` permutations.
pub fn antisymmetrized_product(mats: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let first = mats
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty matrix list".into()))?;
    let d = first.rows;
    if mats.iter().any(|m| m.rows != d || m.cols != d) {
        return Err(Error::InvalidArgument(
            "matrices must be square and of equal size".into(),
        ));
    }
    let mut total = ComplexMatrix::zeros(d, d);
    for (perm, sign) in permutations(mats.len()) {
        let factors: Vec<&ComplexMatrix> = perm.iter().map(|&i| &mats[i]).collect();
        let term = ComplexMatrix::product(&factors);
        total = if sign > 0 {
            &total + &term
        } else {
            &total - &term
        };
    }
    Ok(total)
}

/// Eigenvalues in ascending order with a unitary matrix of eigenvectors
/// stored column-wise.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(λ) V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let d = ComplexMatrix::diag(
            &self
                .eigenvalues
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        );
        v.matmul(&d).matmul(&v.adjoint())
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Sweeps visit pairs `(p, q)`, `p < q`, in row-major order, so the output is
/// a deterministic function of the input.
pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !a.is_square() {
        return Err(Error::Precondition(format!(
            "{}x{} matrix is not square",
            a.rows, a.cols
        )));
    }
    let defect = a.hermitian_defect();
    if defect > STRUCTURAL_TOL {
        return Err(Error::Precondition(format!(
            "matrix is not Hermitian (defect {defect:e})"
        )));
    }
    let n = a.rows;
    // Work on the exactly Hermitian part.
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(a[(i, i)].re, 0.0)
        } else {
            (a[(i, j)] + a[(j, i)].conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    let target = JACOBI_REL_TOL * scale;

    let off_norm = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while scale > 0.0 && off_norm(&m) >= target {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence(sweeps));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation annihilating `m[(p, q)]`.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let n = m.rows;
    let apq = m[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let u = apq / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let s_u = u * s; // s·e^{iφ}
    let s_uc = u.conj() * s; // s·e^{−iφ}

    // columns: A ← A R
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * c - akq * s_uc;
        m[(k, q)] = akp * s_u + akq * c;
    }
    // rows: A ← R† A
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = apk * c - aqk * s_u;
        m[(q, k)] = apk * s_uc + aqk * c;
    }
    m[(p, p)] = Complex64::new(app - t * g, 0.0);
    m[(q, q)] = Complex64::new(aqq + t * g, 0.0);
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * s_uc;
        v[(k, q)] = vkp * s_u + vkq * c;
    }
}

/// Singular values in descending order, from the eigenvalues of `A†A`.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let gram = a.adjoint().matmul(a);
    let eig = hermitian_eigen(&gram).expect("Gram matrix is Hermitian");
    eig.eigenvalues
        .iter()
        .rev()
        .map(|&x| x.max(0.0).sqrt())
        .collect()
}

/// Smallest singular value.
pub fn min_singular_value(a: &ComplexMatrix) -> f64 {
    singular_values(a).last().copied().unwrap_or(0.0)
}

/// Orthonormal basis (as columns) of `{x : Ax = 0}`, keeping right singular
/// vectors whose singular value is at most `tol`.
pub fn nullspace(a: &ComplexMatrix, tol: f64) -> ComplexMatrix {
    let gram = a.adjoint().matmul(a);
    let eig = hermitian_eigen(&gram).expect("Gram matrix is Hermitian");
    let keep: Vec<usize> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l.max(0.0).sqrt() <= tol)
        .map(|(i, _)| i)
        .collect();
    ComplexMatrix::from_fn(a.cols, keep.len(), |i, j| eig.eigenvectors[(i, keep[j])])
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &ComplexMatrix) -> Result<Complex64> {
    if !a.is_square() {
        return Err(Error::InvalidArgument(
            "determinant of a non-square matrix".into(),
        ));
    }
    let n = a.rows;
    let mut m = a.clone();
    let mut det = ONE;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().total_cmp(&m[(j, col)].norm()))
            .unwrap();
        if m[(pivot, col)] == ZERO {
            return Ok(ZERO);
        }
        if pivot != col {
            for k in 0..n {
                m.data.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let p = m[(col, col)];
        det *= p;
        for r in col + 1..n {
            let f = m[(r, col)] / p;
            if f == ZERO {
                continue;
            }
            for k in col..n {
                let delta = f * m[(col, k)];
                m[(r, k)] -= delta;
            }
        }
    }
    Ok(det)
}

/// Real determinant of a small square matrix given as rows.
pub fn real_determinant(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
    if n == 0 {
        return 1.0;
    }
    determinant(&ComplexMatrix::from_real_rows(&refs))
        .map(|z| z.re)
        .unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn nan_entries_are_not_small() {
        let mut m = ComplexMatrix::identity(2);
        m[(1, 0)] = c(f64::NAN, 0.0);
        assert!(m.max_abs().is_nan());
        assert!(!(m.distance(&ComplexMatrix::identity(2)) <= 1.0));
    }

    #[test]
    fn phase_reference_values() {
        assert_abs_diff_eq!(phase(0.0).unwrap().re, 1.0, epsilon = 1e-15);
        let h = phase(0.5).unwrap();
        assert!((h - c(-1.0, 0.0)).norm() < 1e-15);
        let q = phase(0.25).unwrap();
        assert!((q - I).norm() < 1e-15);
        assert!(phase(f64::NAN).is_err());
        assert!(phase(f64::INFINITY).is_err());
    }

    #[test]
    fn new_rejects_bad_shapes_and_values() {
        assert!(ComplexMatrix::new(2, 2, vec![ONE; 3]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::new(1, 2, vec![ONE, I]).is_ok());
    }

    #[test]
    fn eigen_of_diagonal_and_swap() {
        let d = ComplexMatrix::diag(&[c(3.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let e = hermitian_eigen(&d).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = hermitian_eigen(&x).unwrap();
        assert_abs_diff_eq!(e.eigenvalues[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.eigenvalues[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eigen(&m), Err(Error::Precondition(_))));
    }

    #[test]
    fn eigen_of_complex_hermitian_reconstructs() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.25, 0.0)],
            vec![c(0.0, -0.5), c(0.25, 0.0), c(0.5, 0.0)],
        ]);
        let e = hermitian_eigen(&m).unwrap();
        assert!(e.reconstruct().distance(&m) < 1e-12);
        let v = &e.eigenvectors;
        assert!(v.adjoint().matmul(v).distance(&ComplexMatrix::identity(3)) < 1e-12);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn kron_examples() {
        let id2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&id2, &id2), ComplexMatrix::identity(4));
        let z = ComplexMatrix::diag(&[ONE, -ONE]);
        let expected = ComplexMatrix::diag(&[ONE, ONE, -ONE, -ONE]);
        assert_eq!(kron(&z, &id2), expected);
    }

    #[test]
    fn permutation_listing() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], (vec![0, 1, 2], 1));
        assert_eq!(p[1], (vec![0, 2, 1], -1));
        assert_eq!(p[5], (vec![2, 1, 0], -1));
        assert_eq!(permutations(0).len(), 1);
    }

    #[test]
    fn antisymmetrized_small_cases() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 1.0)],
            vec![c(0.0, 3.0), c(-1.0, 0.0)],
        ]);
        let b = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[5.0, 2.0]]);
        assert_eq!(
            antisymmetrized_product(std::slice::from_ref(&a)).unwrap(),
            a
        );
        let two = antisymmetrized_product(&[a.clone(), b.clone()]).unwrap();
        assert!(two.distance(&a.commutator(&b)) < 1e-14);
        assert!(antisymmetrized_product(&[a, ComplexMatrix::identity(3)]).is_err());
    }

    #[test]
    fn determinant_matches_hand_values() {
        let m = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]);
        assert!((determinant(&m).unwrap() - c(5.0, 0.0)).norm() < 1e-14);
        let s =
            ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert!((determinant(&s).unwrap() + ONE).norm() < 1e-14);
        assert_abs_diff_eq!(
            real_determinant(&[vec![1.0, 2.0], vec![3.0, 4.0]]),
            -2.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[2.0, 2.0]]);
        let ns = nullspace(&m, 1e-9);
        assert_eq!(ns.cols(), 1);
        let v = ns.column(0);
        assert!((v[0] + v[1]).norm() < 1e-12);
        assert_abs_diff_eq!(singular_values(&m)[0], 10f64.sqrt(), epsilon = 1e-12);
    }
}
