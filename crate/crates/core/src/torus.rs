//! The noncommutative torus acting on a truncated, shifted lattice.
//!
//! Basis vectors `e_{μ,j}` are labelled by a lattice site `μ = m + ε` and a
//! spinor index `j`. Operators are described site by site ([`SiteImage`]) and
//! are partial: an image is missing when the shifted site leaves the box.

use std::borrow::Cow;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{nan_max, nonneg_max, unit_phase, ComplexMatrix, ONE, ZERO};

/// Antisymmetric real matrix, stored in full but built from its strict upper
/// triangle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ThetaMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ThetaMatrix {
    /// `upper` lists `θ_jk` for `j < k` in row-major order.
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "theta for n = {n} needs {expected} upper-triangle entries, got {}",
                upper.len()
            )));
        }
        if upper.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "theta entries must be finite".into(),
            ));
        }
        let mut entries = vec![0.0; n * n];
        let mut it = upper.iter();
        for j in 0..n {
            for k in j + 1..n {
                let t = *it.next().unwrap();
                entries[j * n + k] = t;
                entries[k * n + j] = -t;
            }
        }
        Ok(Self { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.n + k]
    }

    pub fn upper(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for j in 0..self.n {
            for k in j + 1..self.n {
                out.push(self.get(j, k));
            }
        }
        out
    }

    /// `x·θy`.
    pub fn form(&self, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.entries, self.n, x, y)
    }

    /// `θv`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| (0..self.n).map(|k| self.get(j, k) * v[k]).sum())
            .collect()
    }
}

fn bilinear(m: &[f64], n: usize, x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..n {
        if x[j] == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for k in 0..n {
            row += m[j * n + k] * y[k];
        }
        s += x[j] * row;
    }
    s
}

/// Real matrix `A` with `A − Aᵗ = θ`, fixing the phases of the representation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl AMatrix {
    /// Accepts any `A` whose antisymmetric part is `θ` (tolerance 1e-12).
    pub fn new(n: usize, entries: Vec<f64>, theta: &ThetaMatrix) -> Result<Self> {
        if entries.len() != n * n || theta.n != n {
            return Err(Error::InvalidArgument(
                "A must be n×n and match theta".into(),
            ));
        }
        for j in 0..n {
            for k in 0..n {
                let d = entries[j * n + k] - entries[k * n + j] - theta.get(j, k);
                if d.abs() > 1e-12 {
                    return Err(Error::InvalidArgument(format!(
                        "A − Aᵗ differs from theta at ({j},{k})"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.n + k]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `x·Ay`.
    pub fn form(&self, x: &[f64], y: &[f64]) -> f64 {
        bilinear(&self.entries, self.n, x, y)
    }

    /// Recovers `A − Aᵗ`.
    pub fn antisymmetric_part(&self) -> ThetaMatrix {
        let n = self.n;
        let entries = (0..n * n)
            .map(|i| self.entries[i] - self.entries[(i % n) * n + i / n])
            .collect();
        ThetaMatrix { n, entries }
    }
}

/// Strict upper triangle of `θ`.
pub fn canonical_a(theta: &ThetaMatrix) -> AMatrix {
    let n = theta.n;
    let entries = (0..n * n)
        .map(|i| if i / n < i % n { theta.entries[i] } else { 0.0 })
        .collect();
    AMatrix { n, entries }
}

/// Finite box of sites `μ = m + ε` with `|μ_i| ≤ M + ε_i`, symmetric under
/// `μ ↦ −μ`.
///
/// Along an unshifted axis this is `|m_i| ≤ M` (`2M+1` sites); along an axis
/// with `ε_i = ½` it is `−M−1 ≤ m_i ≤ M` (`2M+2` sites).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedLattice {
    n: usize,
    epsilon: Vec<f64>,
    cutoff: usize,
    spinor_mult: usize,
    lower: Vec<i64>,
    extent: Vec<usize>,
    site_count: usize,
}

impl TruncatedLattice {
    pub fn new(epsilon: &[f64], cutoff: usize) -> Result<Self> {
        let n = epsilon.len();
        if n == 0 {
            return Err(Error::InvalidArgument(
                "lattice dimension must be at least 1".into(),
            ));
        }
        if cutoff == 0 {
            return Err(Error::InvalidArgument("cutoff must be positive".into()));
        }
        if let Some(bad) = epsilon.iter().find(|&&e| e != 0.0 && e != 0.5) {
            return Err(Error::InvalidArgument(format!(
                "spin structure entries must be 0 or 1/2, got {bad}"
            )));
        }
        let m = cutoff as i64;
        let lower: Vec<i64> = epsilon
            .iter()
            .map(|&e| if e == 0.0 { -m } else { -m - 1 })
            .collect();
        let extent: Vec<usize> = lower.iter().map(|&lo| (m - lo + 1) as usize).collect();
        let site_count = extent.iter().product();
        Ok(Self {
            n,
            epsilon: epsilon.to_vec(),
            cutoff,
            spinor_mult: 1 << (n / 2),
            lower,
            extent,
            site_count,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> &[f64] {
        &self.epsilon
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn spinor_mult(&self) -> usize {
        self.spinor_mult
    }

    pub fn site_count(&self) -> usize {
        self.site_count
    }

    /// Dimension of the truncated Hilbert space.
    pub fn dimension(&self) -> usize {
        self.site_count * self.spinor_mult
    }

    /// Integer part `m` of a site.
    pub fn integer_coords(&self, index: usize) -> Vec<i64> {
        let mut rem = index;
        let mut m = vec![0i64; self.n];
        for i in (0..self.n).rev() {
            m[i] = self.lower[i] + (rem % self.extent[i]) as i64;
            rem /= self.extent[i];
        }
        m
    }

    /// Site coordinates `μ = m + ε`.
    pub fn site(&self, index: usize) -> Vec<f64> {
        self.integer_coords(index)
            .iter()
            .zip(&self.epsilon)
            .map(|(&m, &e)| m as f64 + e)
            .collect()
    }

    /// Calls `f` with the site coordinates, avoiding an allocation for `n ≤ 8`.
    pub fn with_site<R>(&self, index: usize, f: impl FnOnce(&[f64]) -> R) -> R {
        let mut buf = [0.0f64; 8];
        if self.n > buf.len() {
            return f(&self.site(index));
        }
        let mu = &mut buf[..self.n];
        let mut rem = index;
        for i in (0..self.n).rev() {
            mu[i] = (self.lower[i] + (rem % self.extent[i]) as i64) as f64 + self.epsilon[i];
            rem /= self.extent[i];
        }
        f(mu)
    }

    pub fn index_of(&self, m: &[i64]) -> Option<usize> {
        if m.len() != self.n {
            return None;
        }
        let mut idx = 0usize;
        for i in 0..self.n {
            let off = m[i] - self.lower[i];
            if off < 0 || off as usize >= self.extent[i] {
                return None;
            }
            idx = idx * self.extent[i] + off as usize;
        }
        Some(idx)
    }

    /// Index of the site with coordinates `μ`, if `μ − ε` is integral and in the box.
    pub fn index_of_site(&self, mu: &[f64]) -> Option<usize> {
        if mu.len() != self.n {
            return None;
        }
        let mut m = Vec::with_capacity(self.n);
        for (x, e) in mu.iter().zip(&self.epsilon) {
            let r = x - e;
            if (r - r.round()).abs() > 1e-9 {
                return None;
            }
            m.push(r.round() as i64);
        }
        self.index_of(&m)
    }

    /// Site reached from `index` by the integer shift `x`.
    pub fn shifted(&self, index: usize, x: &[i64]) -> Option<usize> {
        if x.len() != self.n {
            return None;
        }
        let (mut rem, mut stride, mut out) = (index, 1, 0);
        for i in (0..self.n).rev() {
            let off = (rem % self.extent[i]) as i64 + x[i];
            rem /= self.extent[i];
            if off < 0 || off as usize >= self.extent[i] {
                return None;
            }
            out += off as usize * stride;
            stride *= self.extent[i];
        }
        Some(out)
    }

    /// Site `−μ`; always inside the box.
    pub fn reflected(&self, index: usize) -> usize {
        let (mut rem, mut stride, mut out) = (index, 1, 0);
        for i in (0..self.n).rev() {
            let m = self.lower[i] + (rem % self.extent[i]) as i64;
            rem /= self.extent[i];
            let off = -m - (2.0 * self.epsilon[i]) as i64 - self.lower[i];
            debug_assert!(
                off >= 0 && (off as usize) < self.extent[i],
                "box is symmetric under reflection"
            );
            out += off as usize * stride;
            stride *= self.extent[i];
        }
        out
    }

    /// Minimum number of qualifying sites a check must see: `(2M−3)ⁿ`, at least 1.
    pub fn interior_floor(&self) -> usize {
        let side = (2 * self.cutoff as i64 - 3).max(1) as usize;
        side.pow(self.n as u32)
    }
}

/// Image of a basis vector `e_{μ,j}` under an operator: `phase · e_{target} ⊗
/// (block · w)`, or `block · conj(w)` for antilinear operators. A missing
/// block stands for the identity.
#[derive(Clone, Debug)]
pub struct SiteImage<'a> {
    pub target: usize,
    pub phase: Complex64,
    pub block: Option<Cow<'a, ComplexMatrix>>,
}

/// Operator on the truncated Hilbert space, described site by site.
pub trait LatticeOperator {
    fn lattice(&self) -> &TruncatedLattice;

    fn is_antilinear(&self) -> bool {
        false
    }

    /// `None` when the image leaves the box.
    fn image(&self, site: usize) -> Option<SiteImage<'_>>;
}

/// Result of applying a product of operators to one site.
#[derive(Clone, Debug)]
pub struct Composite<'a> {
    pub target: usize,
    pub antilinear: bool,
    pub phase: Complex64,
    pub block: Option<Cow<'a, ComplexMatrix>>,
}

impl Composite<'_> {
    pub fn matrix(&self, dim: usize) -> ComplexMatrix {
        match &self.block {
            Some(b) => b.scale(self.phase),
            None => ComplexMatrix::identity(dim).scale(self.phase),
        }
    }
}

/// Applies `ops[0] · ops[1] ⋯ ops[k]` to the site: the last operator acts first.
pub fn compose<'a>(ops: &[&'a dyn LatticeOperator], site: usize) -> Option<Composite<'a>> {
    let mut acc = Composite {
        target: site,
        antilinear: false,
        phase: ONE,
        block: None,
    };
    for op in ops.iter().rev() {
        let img = op.image(acc.target)?;
        let anti = op.is_antilinear();
        let (prev_phase, prev_block) = if anti {
            (
                acc.phase.conj(),
                acc.block.as_ref().map(|b| Cow::Owned(b.conj())),
            )
        } else {
            (acc.phase, acc.block.take())
        };
        let block = match (img.block, prev_block) {
            (None, b) => b,
            (Some(k), None) => Some(k),
            (Some(k), Some(b)) => Some(Cow::Owned(k.matmul(&b))),
        };
        acc = Composite {
            target: img.target,
            antilinear: acc.antilinear ^ anti,
            phase: img.phase * prev_phase,
            block,
        };
    }
    Some(acc)
}

/// A linear combination `Σ c_t · (product of operators)_t`.
pub type Combination<'a> = Vec<(Complex64, Vec<&'a dyn LatticeOperator>)>;

/// `out = a · b` for row-major `d × d` blocks, with `b` conjugated when
/// `conj_b`. Zero entries of `a` are skipped.
fn mul_into(a: &[Complex64], b: &[Complex64], conj_b: bool, out: &mut [Complex64], d: usize) {
    out.fill(ZERO);
    for (arow, orow) in a.chunks_exact(d).zip(out.chunks_exact_mut(d)) {
        for (k, &x) in arow.iter().enumerate() {
            if x == ZERO {
                continue;
            }
            let brow = &b[k * d..(k + 1) * d];
            if conj_b {
                for (o, y) in orow.iter_mut().zip(brow) {
                    *o += x * y.conj();
                }
            } else {
                for (o, y) in orow.iter_mut().zip(brow) {
                    *o += x * y;
                }
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Block<'a> {
    Identity,
    Borrowed(&'a [Complex64]),
    /// Held in the evaluator's buffer for this product.
    Buffer,
}

/// Where one product sends a site. The block is conjugated when `conj` is set.
#[derive(Clone, Copy)]
struct Evaluated<'a> {
    target: usize,
    antilinear: bool,
    phase: Complex64,
    block: Block<'a>,
    conj: bool,
}

/// Reusable buffers for evaluating products of operators site by site.
struct Evaluator<'a> {
    dim: usize,
    buffers: Vec<Vec<Complex64>>,
    tmp: Vec<Complex64>,
    sum: Vec<Complex64>,
    evaluated: Vec<Evaluated<'a>>,
}

impl<'a> Evaluator<'a> {
    fn new(dim: usize, products: usize) -> Self {
        let zeros = || vec![ZERO; dim * dim];
        Self {
            dim,
            buffers: (0..products).map(|_| zeros()).collect(),
            tmp: zeros(),
            sum: zeros(),
            evaluated: Vec::with_capacity(products),
        }
    }

    fn product(
        &mut self,
        t: usize,
        ops: &[&'a dyn LatticeOperator],
        site: usize,
    ) -> Option<Evaluated<'a>> {
        let Self {
            dim, buffers, tmp, ..
        } = self;
        let buf = &mut buffers[t];
        let mut e = Evaluated {
            target: site,
            antilinear: false,
            phase: ONE,
            block: Block::Identity,
            conj: false,
        };
        for op in ops.iter().rev() {
            let img = op.image(e.target)?;
            if op.is_antilinear() {
                e.phase = e.phase.conj();
                e.antilinear = !e.antilinear;
                e.conj = !e.conj;
            }
            if let Some(k) = img.block {
                let current = match e.block {
                    Block::Identity => None,
                    Block::Borrowed(b) => Some(b),
                    Block::Buffer => Some(&buf[..]),
                };
                match (current, k) {
                    (None, Cow::Borrowed(k)) => e.block = Block::Borrowed(k.data()),
                    (None, Cow::Owned(k)) => {
                        buf.copy_from_slice(k.data());
                        e.block = Block::Buffer;
                    }
                    (Some(b), k) => {
                        mul_into(k.data(), b, e.conj, tmp, *dim);
                        std::mem::swap(buf, tmp);
                        e.block = Block::Buffer;
                    }
                }
                e.conj = false;
            }
            e.phase = img.phase * e.phase;
            e.target = img.target;
        }
        Some(e)
    }

    /// Evaluates every product at `site`; `false` when one leaves the box.
    fn evaluate(&mut self, products: &[Vec<&'a dyn LatticeOperator>], site: usize) -> bool {
        self.evaluated.clear();
        for (t, ops) in products.iter().enumerate() {
            let Some(e) = self.product(t, ops, site) else {
                return false;
            };
            if let Some(first) = self.evaluated.first() {
                assert_eq!(
                    first.antilinear, e.antilinear,
                    "mixing linear and antilinear terms"
                );
            }
            self.evaluated.push(e);
        }
        true
    }

    /// Stored entries of product `t` and whether they need conjugating;
    /// `None` for the identity.
    fn entries(&self, t: usize) -> Option<(&[Complex64], bool)> {
        let e = &self.evaluated[t];
        match e.block {
            Block::Identity => None,
            Block::Borrowed(b) => Some((b, e.conj)),
            Block::Buffer => Some((&self.buffers[t], e.conj)),
        }
    }

    /// Max-entry norm of `Σ c_t P_t` for the last evaluated site, with terms
    /// landing on different sites measured separately.
    fn combined_max(&mut self, coefs: &[Complex64]) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        let mut group = Vec::with_capacity(self.evaluated.len());
        for (i, lead) in self.evaluated.iter().enumerate() {
            if self.evaluated[..i].iter().any(|e| e.target == lead.target) {
                continue;
            }
            group.clear();
            group.extend(
                (i..self.evaluated.len()).filter(|&t| self.evaluated[t].target == lead.target),
            );
            let scale = |t: usize| coefs[t] * self.evaluated[t].phase;
            let read = |x: &Complex64, conj: bool| if conj { x.conj() } else { *x };
            let local = match (&group[..], group.get(1).map(|&u| self.entries(u))) {
                (&[t], _) if self.entries(t).is_some() => {
                    let (x, _) = self.entries(t).expect("checked");
                    scale(t).norm_sqr() * nonneg_max(x.iter().map(|z| z.norm_sqr()))
                }
                (&[t, u], Some(Some((y, cy)))) if self.entries(t).is_some() => {
                    let (x, cx) = self.entries(t).expect("checked");
                    // s·x + r·y = s·(x + (r/s)·y)
                    let (s, r) = (scale(t), scale(u));
                    if s == ZERO {
                        r.norm_sqr() * nonneg_max(y.iter().map(|z| z.norm_sqr()))
                    } else {
                        let q = r / s;
                        let m = nonneg_max(
                            x.iter()
                                .zip(y)
                                .map(|(a, b)| (read(a, cx) + q * read(b, cy)).norm_sqr()),
                        );
                        s.norm_sqr() * m
                    }
                }
                _ => {
                    let mut sum = std::mem::take(&mut self.sum);
                    sum.fill(ZERO);
                    for &t in &group {
                        let s = scale(t);
                        match self.entries(t) {
                            None => (0..d).for_each(|k| sum[k * (d + 1)] += s),
                            Some((x, c)) => sum
                                .iter_mut()
                                .zip(x)
                                .for_each(|(z, x)| *z += s * read(x, c)),
                        }
                    }
                    let m = nonneg_max(sum.iter().map(|z| z.norm_sqr()));
                    self.sum = sum;
                    m
                }
            };
            worst = nan_max(worst, local);
        }
        worst.sqrt()
    }
}

fn split<'a>(terms: &Combination<'a>) -> (Vec<Vec<&'a dyn LatticeOperator>>, Vec<Complex64>) {
    terms.iter().map(|(c, ops)| (ops.clone(), *c)).unzip()
}

/// Max-entry norm of a linear combination at one site, or `None` when some
/// term leaves the box there.
pub fn combination_at(terms: &Combination<'_>, site: usize, dim: usize) -> Option<f64> {
    let (products, coefs) = split(terms);
    let mut ev = Evaluator::new(dim, products.len());
    ev.evaluate(&products, site)
        .then(|| ev.combined_max(&coefs))
}

/// Largest value of [`combination_at`] over all sites where it is defined,
/// together with the number of such sites.
pub fn combination_residual(lattice: &TruncatedLattice, terms: &Combination<'_>) -> (f64, usize) {
    let (products, coefs) = split(terms);
    let (worst, count) = combination_residuals(lattice, &products, &[coefs]);
    (worst[0], count)
}

/// [`combination_residual`] for several coefficient vectors over the same
/// products, each product evaluated once per site.
pub fn combination_residuals<'a>(
    lattice: &TruncatedLattice,
    products: &[Vec<&'a dyn LatticeOperator>],
    coefficients: &[Vec<Complex64>],
) -> (Vec<f64>, usize) {
    let mut ev = Evaluator::new(lattice.spinor_mult, products.len());
    let mut worst = vec![0.0f64; coefficients.len()];
    let mut count = 0;
    for site in 0..lattice.site_count {
        if !ev.evaluate(products, site) {
            continue;
        }
        for (w, coefs) in worst.iter_mut().zip(coefficients) {
            *w = nan_max(*w, ev.combined_max(coefs));
        }
        count += 1;
    }
    (worst, count)
}

/// Applies an operator to a full vector indexed by `site · d + j`.
/// Components whose image leaves the box are dropped.
pub fn apply_operator(op: &dyn LatticeOperator, v: &[Complex64]) -> Vec<Complex64> {
    let lat = op.lattice();
    let d = lat.spinor_mult;
    assert_eq!(
        v.len(),
        lat.dimension(),
        "vector length does not match the lattice"
    );
    let mut out = vec![ZERO; v.len()];
    for site in 0..lat.site_count {
        let Some(img) = op.image(site) else { continue };
        let mut w: Vec<Complex64> = v[site * d..(site + 1) * d].to_vec();
        if op.is_antilinear() {
            w.iter_mut().for_each(|z| *z = z.conj());
        }
        let w = match &img.block {
            Some(b) => b.mul_vec(&w),
            None => w,
        };
        for (j, z) in w.into_iter().enumerate() {
            out[img.target * d + j] += img.phase * z;
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn to_f64(x: &[i64]) -> Vec<f64> {
    x.iter().map(|&v| v as f64).collect()
}

/// `π(U_x) e_μ = e(½x·Ax + x·Aμ) e_{μ+x}`.
#[derive(Clone, Debug)]
pub struct UAction {
    lattice: TruncatedLattice,
    x: Vec<i64>,
    /// `xᵗA`, so the phase is `½x·Ax + xa·μ`.
    xa: Vec<f64>,
    half_xax: f64,
}

pub fn u_action(x: &[i64], lattice: &TruncatedLattice, a: &AMatrix) -> UAction {
    assert_eq!(x.len(), lattice.n, "shift dimension mismatch");
    let xf = to_f64(x);
    let half_xax = 0.5 * a.form(&xf, &xf);
    let n = lattice.n;
    let xa = (0..n)
        .map(|j| (0..n).map(|i| xf[i] * a.get(i, j)).sum())
        .collect();
    UAction {
        lattice: lattice.clone(),
        x: x.to_vec(),
        xa,
        half_xax,
    }
}

impl LatticeOperator for UAction {
    fn lattice(&self) -> &TruncatedLattice {
        &self.lattice
    }

    fn image(&self, site: usize) -> Option<SiteImage<'_>> {
        let target = self.lattice.shifted(site, &self.x)?;
        let linear = self.lattice.with_site(site, |mu| dot(&self.xa, mu));
        let phase = unit_phase(self.half_xax + linear);
        Some(SiteImage {
            target,
            phase,
            block: None,
        })
    }
}

/// `U_x^o e_μ = e(μ·Ax + ½x·Ax) e_{μ+x}`.
#[derive(Clone, Debug)]
pub struct UOpposite {
    lattice: TruncatedLattice,
    x: Vec<i64>,
    /// `Ax`, so the phase is `μ·ax + ½x·Ax`.
    ax: Vec<f64>,
    half_xax: f64,
}

pub fn u_opposite_action(x: &[i64], lattice: &TruncatedLattice, a: &AMatrix) -> UOpposite {
    assert_eq!(x.len(), lattice.n, "shift dimension mismatch");
    let xf = to_f64(x);
    let half_xax = 0.5 * a.form(&xf, &xf);
    let n = lattice.n;
    let ax = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j) * xf[j]).sum())
        .collect();
    UOpposite {
        lattice: lattice.clone(),
        x: x.to_vec(),
        ax,
        half_xax,
    }
}

impl LatticeOperator for UOpposite {
    fn lattice(&self) -> &TruncatedLattice {
        &self.lattice
    }

    fn image(&self, site: usize) -> Option<SiteImage<'_>> {
        let target = self.lattice.shifted(site, &self.x)?;
        let linear = self.lattice.with_site(site, |mu| dot(mu, &self.ax));
        let phase = unit_phase(linear + self.half_xax);
        Some(SiteImage {
            target,
            phase,
            block: None,
        })
    }
}

/// `ρ(δ_i) e_μ = μ_i e_μ` (`i` is zero-based).
#[derive(Clone, Debug)]
pub struct Derivation {
    lattice: TruncatedLattice,
    i: usize,
}

pub fn derivation(i: usize, lattice: &TruncatedLattice) -> Result<Derivation> {
    if i >= lattice.n {
        return Err(Error::Index(format!(
            "derivation index {i} for dimension {}",
            lattice.n
        )));
    }
    Ok(Derivation {
        lattice: lattice.clone(),
        i,
    })
}

impl LatticeOperator for Derivation {
    fn lattice(&self) -> &TruncatedLattice {
        &self.lattice
    }

    fn image(&self, site: usize) -> Option<SiteImage<'_>> {
        let mu_i = self.lattice.with_site(site, |mu| mu[self.i]);
        Some(SiteImage {
            target: site,
            phase: Complex64::new(mu_i, 0.0),
            block: None,
        })
    }
}

/// Identity on the truncated space.
#[derive(Clone, Debug)]
pub struct Identity {
    lattice: TruncatedLattice,
}

impl Identity {
    pub fn new(lattice: &TruncatedLattice) -> Self {
        Self {
            lattice: lattice.clone(),
        }
    }
}

impl LatticeOperator for Identity {
    fn lattice(&self) -> &TruncatedLattice {
        &self.lattice
    }

    fn image(&self, site: usize) -> Option<SiteImage<'_>> {
        Some(SiteImage {
            target: site,
            phase: ONE,
            block: None,
        })
    }
}

/// Diagonal operator `e_μ ↦ e(f(μ)) e_μ`.
pub struct DiagonalPhase {
    lattice: TruncatedLattice,
    phases: Vec<Complex64>,
}

impl DiagonalPhase {
    pub fn new(lattice: &TruncatedLattice, f: impl Fn(&[f64]) -> f64) -> Self {
        let phases = (0..lattice.site_count)
            .map(|s| unit_phase(f(&lattice.site(s))))
            .collect();
        Self {
            lattice: lattice.clone(),
            phases,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            lattice: self.lattice.clone(),
            phases: self.phases.iter().map(|z| z.conj()).collect(),
        }
    }
}

impl LatticeOperator for DiagonalPhase {
    fn lattice(&self) -> &TruncatedLattice {
        &self.lattice
    }

    fn image(&self, site: usize) -> Option<SiteImage<'_>> {
        Some(SiteImage {
            target: site,
            phase: self.phases[site],
            block: None,
        })
    }
}

/// Block-diagonal operator `e_{μ,j} ↦ Σ_k B(μ)_kj e_{μ,k}` with tabulated blocks.
pub struct SiteBlocks {
    lattice: TruncatedLattice,
    blocks: Vec<ComplexMatrix>,
}

impl SiteBlocks {
    pub fn new(lattice: &TruncatedLattice, f: impl Fn(usize) -> ComplexMatrix) -> Self {
        Self {
            lattice: lattice.clone(),
            blocks: (0..lattice.site_count).map(f).collect(),
        }
    }
}

impl LatticeOperator for SiteBlocks {
    fn lattice(&self) -> &TruncatedLattice {
        &self.lattice
    }

    fn image(&self, site: usize) -> Option<SiteImage<'_>> {
        Some(SiteImage {
            target: site,
            phase: ONE,
            block: Some(Cow::Borrowed(&self.blocks[site])),
        })
    }
}

/// Diagonal unitary `T` with `T π^{from}(U_x) T⁻¹ = π^{to}(U_x)`, where both
/// matrices have the same antisymmetric part: `T e_μ = e(½μ·(to − from)μ) e_μ`.
pub fn representation_intertwiner(
    lattice: &TruncatedLattice,
    from: &AMatrix,
    to: &AMatrix,
) -> Result<DiagonalPhase> {
    let n = lattice.n;
    if from.n != n || to.n != n {
        return Err(Error::InvalidArgument(
            "A matrices do not match the lattice dimension".into(),
        ));
    }
    let s: Vec<f64> = to
        .entries
        .iter()
        .zip(&from.entries)
        .map(|(a, b)| a - b)
        .collect();
    for j in 0..n {
        for k in 0..n {
            if (s[j * n + k] - s[k * n + j]).abs() > 1e-12 {
                return Err(Error::InvalidArgument(
                    "A matrices have different antisymmetric parts".into(),
                ));
            }
        }
    }
    Ok(DiagonalPhase::new(lattice, move |mu| {
        0.5 * bilinear(&s, n, mu, mu)
    }))
}

/// Residuals of the product and commutation relations of two monomials.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProductRelationResidual {
    /// `‖π(U_x)π(U_y) − e(½x·θy)π(U_{x+y})‖`
    pub product: f64,
    /// `‖π(U_x)π(U_y) − e(x·θy)π(U_y)π(U_x)‖`
    pub commutation: f64,
    pub interior_sites: usize,
}

/// Checks `U_xU_y = e(½x·θy)U_{x+y}` and `U_xU_y = e(x·θy)U_yU_x` on interior sites.
pub fn product_relation_check(
    x: &[i64],
    y: &[i64],
    lattice: &TruncatedLattice,
    a: &AMatrix,
) -> ProductRelationResidual {
    let theta = a.antisymmetric_part();
    let (xf, yf) = (to_f64(x), to_f64(y));
    let xty = theta.form(&xf, &yf);
    let sum: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
    let ux = u_action(x, lattice, a);
    let uy = u_action(y, lattice, a);
    let uxy = u_action(&sum, lattice, a);
    let product_terms: Combination =
        vec![(ONE, vec![&ux, &uy]), (-unit_phase(0.5 * xty), vec![&uxy])];
    let comm_terms: Combination = vec![(ONE, vec![&ux, &uy]), (-unit_phase(xty), vec![&uy, &ux])];
    let (p, c1) = combination_residual(lattice, &product_terms);
    let (c, c2) = combination_residual(lattice, &comm_terms);
    ProductRelationResidual {
        product: p,
        commutation: c,
        interior_sites: c1.min(c2),
    }
}
