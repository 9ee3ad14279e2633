//! Assembly of the spectral triple `(A, H, D, J, Γ)` on a truncated lattice.

use std::borrow::Cow;

use num_complex::Complex64;
use serde::Serialize;

use crate::clifford::{build_generators, CliffordRep};
use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, nullspace, real_determinant, unit_phase, ComplexMatrix, ZERO,
};
use crate::torus::{
    apply_operator, canonical_a, AMatrix, LatticeOperator, SiteBlocks, SiteImage, ThetaMatrix,
    TruncatedLattice,
};

/// Default threshold below which an eigenvalue counts as zero.
pub const KERNEL_TOL: f64 = 1e-8;
/// Threshold on `|det τ|` below which `τ` is treated as singular.
pub const TAU_DET_GUARD: f64 = 1e-9;
/// Residual allowed when certifying that `C` satisfies its constraints.
pub const C_MEMBERSHIP_TOL: f64 = 1e-10;

/// Real `n×n` matrix whose columns `τ¹…τⁿ` scale the Dirac operator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TauMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl TauMatrix {
    /// Row-major entries; rejects singular matrices.
    pub fn from_row_major(n: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidConfig(format!(
                "tau needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConfig("tau entries must be finite".into()));
        }
        let tau = Self {
            n,
            entries: entries.to_vec(),
        };
        let det = tau.det();
        if det.abs() <= TAU_DET_GUARD {
            return Err(Error::InvalidConfig(format!(
                "tau is singular (det = {det:e})"
            )));
        }
        Ok(tau)
    }

    /// Row-major entries without the invertibility check.
    pub fn unchecked(n: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), n * n);
        Self {
            n,
            entries: entries.to_vec(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let entries = (0..n * n)
            .map(|i| if i / n == i % n { 1.0 } else { 0.0 })
            .collect();
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn det(&self) -> f64 {
        let rows: Vec<Vec<f64>> = (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec())
            .collect();
        real_determinant(&rows)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    /// Coefficients `c_j = τʲ·v`.
    pub fn pair(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j) * v[i]).sum())
            .collect()
    }
}

/// Parameters of one spectral triple.
#[derive(Clone, Debug)]
pub struct TripleConfig {
    pub n: usize,
    pub theta: ThetaMatrix,
    pub epsilon: Vec<f64>,
    pub tau: TauMatrix,
    /// Constant spinor block added to `D`; zero when absent.
    pub c: Option<ComplexMatrix>,
    pub cutoff: usize,
}

impl TripleConfig {
    /// `θ = 0`, `τ = Id`, `C = 0`.
    pub fn simple(epsilon: &[f64], cutoff: usize) -> Self {
        let n = epsilon.len();
        Self {
            n,
            theta: ThetaMatrix::zero(n),
            epsilon: epsilon.to_vec(),
            tau: TauMatrix::identity(n),
            c: None,
            cutoff,
        }
    }
}

/// A fully assembled triple on its truncated lattice.
#[derive(Clone, Debug)]
pub struct AssembledTriple {
    pub config: TripleConfig,
    pub lattice: TruncatedLattice,
    pub rep: CliffordRep,
    pub a: AMatrix,
    pub c: ComplexMatrix,
}

/// Validates a configuration and builds the triple.
pub fn assemble(config: TripleConfig) -> Result<AssembledTriple> {
    let n = config.n;
    if config.theta.n() != n || config.epsilon.len() != n || config.tau.n() != n {
        return Err(Error::InvalidConfig(format!(
            "theta, epsilon and tau must all have dimension {n}"
        )));
    }
    let det = config.tau.det();
    if det.abs() <= TAU_DET_GUARD {
        return Err(Error::InvalidConfig(format!(
            "tau is singular (det = {det:e})"
        )));
    }
    let rep = build_generators(n).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let lattice = TruncatedLattice::new(&config.epsilon, config.cutoff)
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let d = rep.spinor_dim();
    let c = match &config.c {
        None => ComplexMatrix::zeros(d, d),
        Some(c) => {
            if c.rows() != d || c.cols() != d {
                return Err(Error::InvalidConfig(format!(
                    "C must be {d}x{d} for n = {n}"
                )));
            }
            let space = solve_c_space_for(&rep);
            let residual = space.membership_residual(c);
            if residual > C_MEMBERSHIP_TOL {
                return Err(Error::InvalidConfig(format!(
                    "C violates the reality/grading constraints (residual {residual:e})"
                )));
            }
            c.clone()
        }
    };
    let a = canonical_a(&config.theta);
    Ok(AssembledTriple {
        config,
        lattice,
        rep,
        a,
        c,
    })
}

impl AssembledTriple {
    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn spinor_dim(&self) -> usize {
        self.rep.spinor_dim()
    }

    /// `Σ_j c_j A_j` for real coefficients.
    pub fn clifford_combination(&self, coeffs: &[f64]) -> ComplexMatrix {
        let d = self.spinor_dim();
        let mut out = ComplexMatrix::zeros(d, d);
        for (c, a) in coeffs.iter().zip(&self.rep.generators) {
            if *c != 0.0 {
                out.axpy(Complex64::new(*c, 0.0), a);
            }
        }
        out
    }

    /// `D(μ) = Σ_j (τʲ·μ) A_j + C` at arbitrary coordinates.
    pub fn dirac_block_at(&self, mu: &[f64]) -> ComplexMatrix {
        let mut out = self.clifford_combination(&self.config.tau.pair(mu));
        out.axpy(Complex64::new(1.0, 0.0), &self.c);
        out
    }

    /// `D(μ)` at a lattice site.
    pub fn dirac_block(&self, site: usize) -> Result<ComplexMatrix> {
        if site >= self.lattice.site_count() {
            return Err(Error::Index(format!(
                "site {site} of {}",
                self.lattice.site_count()
            )));
        }
        Ok(self.dirac_block_at(&self.lattice.site(site)))
    }

    /// `D(μ + x) − D(μ) = Σ_j (τʲ·x) A_j`.
    pub fn shift_block(&self, x: &[i64]) -> ComplexMatrix {
        let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        self.clifford_combination(&self.config.tau.pair(&xf))
    }

    /// Eigenvalues of every block, site-major and ascending within a block.
    pub fn full_spectrum(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.lattice.dimension());
        for site in 0..self.lattice.site_count() {
            let block = self.dirac_block_at(&self.lattice.site(site));
            let eig = hermitian_eigen(&block).expect("Dirac blocks are Hermitian");
            out.extend(eig.eigenvalues);
        }
        out
    }

    /// Number of eigenvalues with `|λ| ≤ tol`.
    pub fn kernel_dimension(&self, tol: f64) -> usize {
        kernel_count(&self.full_spectrum(), tol)
    }

    pub fn dirac(&self) -> DiracOperator<'_> {
        DiracOperator { triple: self }
    }

    /// `D` with every block computed up front, for checks that visit each site many times.
    pub fn dirac_table(&self) -> SiteBlocks {
        SiteBlocks::new(&self.lattice, |s| {
            self.dirac_block_at(&self.lattice.site(s))
        })
    }

    pub fn reality(&self) -> RealityOperator<'_> {
        RealityOperator { triple: self }
    }

    /// Block-diagonal grading; `None` for odd `n`.
    pub fn grading(&self) -> Option<GradingOperator<'_>> {
        self.rep.grading.as_ref().map(|g| GradingOperator {
            lattice: &self.lattice,
            gamma: g,
        })
    }

    /// Applies the antilinear `J` to a full vector.
    pub fn apply_j(&self, v: &[Complex64]) -> Vec<Complex64> {
        apply_operator(&self.reality(), v)
    }
}

pub fn kernel_count(spectrum: &[f64], tol: f64) -> usize {
    spectrum.iter().filter(|l| l.abs() <= tol).count()
}

/// The Dirac operator, block-diagonal in the lattice.
pub struct DiracOperator<'a> {
    triple: &'a AssembledTriple,
}

impl LatticeOperator for DiracOperator<'_> {
    fn lattice(&self) -> &TruncatedLattice {
        &self.triple.lattice
    }

    fn image(&self, site: usize) -> Option<SiteImage<'_>> {
        let block = self.triple.dirac_block_at(&self.triple.lattice.site(site));
        Some(SiteImage {
            target: site,
            phase: Complex64::new(1.0, 0.0),
            block: Some(Cow::Owned(block)),
        })
    }
}

/// `J e_{μ,j} = e(μ·Aμ) Σ_k Λ_kj e_{−μ,k}`, extended antilinearly.
pub struct RealityOperator<'a> {
    triple: &'a AssembledTriple,
}

impl LatticeOperator for RealityOperator<'_> {
    fn lattice(&self) -> &TruncatedLattice {
        &self.triple.lattice
    }

    fn is_antilinear(&self) -> bool {
        true
    }

    fn image(&self, site: usize) -> Option<SiteImage<'_>> {
        let lat = &self.triple.lattice;
        let phase = unit_phase(lat.with_site(site, |mu| self.triple.a.form(mu, mu)));
        Some(SiteImage {
            target: lat.reflected(site),
            phase,
            block: Some(Cow::Borrowed(&self.triple.rep.reality)),
        })
    }
}

/// `Γ` acting on every spinor block.
pub struct GradingOperator<'a> {
    lattice: &'a TruncatedLattice,
    gamma: &'a ComplexMatrix,
}

impl LatticeOperator for GradingOperator<'_> {
    fn lattice(&self) -> &TruncatedLattice {
        self.lattice
    }

    fn image(&self, site: usize) -> Option<SiteImage<'_>> {
        Some(SiteImage {
            target: site,
            phase: Complex64::new(1.0, 0.0),
            block: Some(Cow::Borrowed(self.gamma)),
        })
    }
}

/// Real vector space of admissible constant blocks `C`.
#[derive(Clone, Debug)]
pub struct CSpace {
    pub n: usize,
    pub dimension: usize,
    /// Hermitian matrices, orthonormal for `⟨X, Y⟩ = Re tr(X†Y)`.
    pub basis: Vec<ComplexMatrix>,
}

impl CSpace {
    /// Orthogonal projection onto the space.
    pub fn project(&self, c: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(c.rows(), c.cols());
        for b in &self.basis {
            let coef: f64 = b
                .data()
                .iter()
                .zip(c.data())
                .map(|(x, y)| (x.conj() * y).re)
                .sum();
            out = &out + &b.scale_real(coef);
        }
        out
    }

    /// `‖C − P(C)‖_max`.
    pub fn membership_residual(&self, c: &ComplexMatrix) -> f64 {
        c.distance(&self.project(c))
    }
}

/// Hermitian `C` with `Λ·conj(C)·Λ† = ε_D C` and, for even `n`, `ΓC = −CΓ`.
pub fn solve_c_space(n: usize) -> Result<CSpace> {
    Ok(solve_c_space_for(&build_generators(n)?))
}

fn hermitian_basis(d: usize) -> Vec<ComplexMatrix> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        out.push(m);
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(i, j)] = Complex64::new(r, 0.0);
            m[(j, i)] = Complex64::new(r, 0.0);
            out.push(m);
            let mut m = ComplexMatrix::zeros(d, d);
            m[(i, j)] = Complex64::new(0.0, r);
            m[(j, i)] = Complex64::new(0.0, -r);
            out.push(m);
        }
    }
    out
}

pub(crate) fn solve_c_space_for(rep: &CliffordRep) -> CSpace {
    let d = rep.spinor_dim();
    let lam = &rep.reality;
    let lam_adj = lam.adjoint();
    let eps_d = rep.signs.eps_d.value();
    let basis = hermitian_basis(d);
    // Column k holds the real and imaginary parts of the constraint residuals of basis[k].
    let columns: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| {
            let mut parts = vec![&lam.matmul(&b.conj()).matmul(&lam_adj) - &b.scale_real(eps_d)];
            if let Some(g) = &rep.grading {
                parts.push(g.anticommutator(b));
            }
            let mut col = Vec::new();
            for p in &parts {
                col.extend(p.data().iter().map(|z| z.re));
                col.extend(p.data().iter().map(|z| z.im));
            }
            col
        })
        .collect();
    let rows = columns[0].len();
    let system =
        ComplexMatrix::from_fn(rows, basis.len(), |i, k| Complex64::new(columns[k][i], 0.0));
    let scale = system.max_abs().max(1.0);
    let ns = nullspace(&system, 1e-9 * scale);
    // The Gram matrix is real symmetric, so the Jacobi rotations keep the
    // null vectors real; re-orthonormalize their real parts to be safe.
    let mut vecs: Vec<Vec<f64>> = Vec::new();
    for j in 0..ns.cols() {
        let mut v: Vec<f64> = ns.column(j).iter().map(|z| z.re).collect();
        for u in &vecs {
            let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            vecs.push(v);
        }
    }
    let basis_out: Vec<ComplexMatrix> = vecs
        .iter()
        .map(|v| {
            let mut m = ComplexMatrix::zeros(d, d);
            for (coef, b) in v.iter().zip(&basis) {
                if *coef != 0.0 {
                    m = &m + &b.scale_real(*coef);
                }
            }
            orient(m)
        })
        .collect();
    CSpace {
        n: rep.n,
        dimension: basis_out.len(),
        basis: basis_out,
    }
}

/// Fixes the sign so the first significant entry has positive real part.
fn orient(m: ComplexMatrix) -> ComplexMatrix {
    let peak = m.max_abs();
    let lead = m
        .data()
        .iter()
        .find(|z| z.norm() > 1e-6 * peak)
        .copied()
        .unwrap_or(ZERO);
    let flip = if lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0) {
        -1.0
    } else {
        1.0
    };
    m.scale_real(flip)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::ThetaMatrix;

    #[test]
    fn tau_rejects_singular_input() {
        assert!(TauMatrix::from_row_major(2, &[1.0, 2.0, 2.0, 4.0]).is_err());
        assert!(TauMatrix::from_row_major(2, &[1.0, 0.0, 0.0]).is_err());
        let t = TauMatrix::from_row_major(2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!((t.det() + 2.0).abs() < 1e-12);
        assert_eq!(t.column(1), vec![2.0, 4.0]);
        assert_eq!(t.pair(&[1.0, 0.0]), vec![1.0, 2.0]);
    }

    #[test]
    fn one_dimensional_spectrum() {
        let t = assemble(TripleConfig::simple(&[0.0], 2)).unwrap();
        assert_eq!(t.full_spectrum(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn dirac_blocks_of_the_plane() {
        let t = assemble(TripleConfig::simple(&[0.0, 0.0], 2)).unwrap();
        let origin = t.lattice.index_of(&[0, 0]).unwrap();
        assert_eq!(t.dirac_block(origin).unwrap(), ComplexMatrix::zeros(2, 2));
        let e1 = t.lattice.index_of(&[1, 0]).unwrap();
        assert_eq!(t.dirac_block(e1).unwrap(), t.rep.generators[0]);
        assert!(t.dirac_block(10_000).is_err());
        assert_eq!(t.kernel_dimension(KERNEL_TOL), 2);
    }

    #[test]
    fn scaling_tau_doubles_eigenvalues() {
        let base = assemble(TripleConfig::simple(&[0.5, 0.0], 2)).unwrap();
        let mut cfg = TripleConfig::simple(&[0.5, 0.0], 2);
        cfg.tau = cfg.tau.scaled(2.0);
        let doubled = assemble(cfg).unwrap();
        for (a, b) in base.full_spectrum().iter().zip(doubled.full_spectrum()) {
            assert!((2.0 * a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn assemble_rejects_bad_configs() {
        let mut cfg = TripleConfig::simple(&[0.0, 0.0], 2);
        cfg.tau = TauMatrix::unchecked(2, &[1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(assemble(cfg), Err(Error::InvalidConfig(_))));
        let mut cfg = TripleConfig::simple(&[0.0, 0.0], 2);
        cfg.c = Some(ComplexMatrix::identity(2));
        assert!(matches!(assemble(cfg), Err(Error::InvalidConfig(_))));
        let mut cfg = TripleConfig::simple(&[0.0, 0.0, 0.0], 2);
        cfg.c = Some(ComplexMatrix::identity(2).scale_real(0.7));
        assert!(assemble(cfg).is_ok());
        let mut cfg = TripleConfig::simple(&[0.0, 0.0], 2);
        cfg.theta = ThetaMatrix::zero(3);
        assert!(assemble(cfg).is_err());
    }

    #[test]
    fn c_space_small_dimensions() {
        assert_eq!(solve_c_space(2).unwrap().dimension, 0);
        let three = solve_c_space(3).unwrap();
        assert_eq!(three.dimension, 1);
        let b = &three.basis[0];
        assert!(b.distance(&ComplexMatrix::identity(2).scale_real(b[(0, 0)].re)) < 1e-12);
        assert_eq!(solve_c_space(4).unwrap().dimension, 4);
    }
}
