//! Hochschild chains with monomial entries, kept in an exact normal form.
//!
//! A term is `c · e(½ Σ_{j<l} k_jl θ_jl) · (U_{x⁰} ⊗ U_y^o) ⊗ U_{x¹} ⊗ … ⊗ U_{x^k}`.
//! The phase is carried symbolically as the integer vector `k`, so
//! cancellations are exact for every `θ` at once.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{permutations, unit_phase, ComplexMatrix, ONE};
use crate::torus::{u_action, u_opposite_action, LatticeOperator, ThetaMatrix};
use crate::triple::AssembledTriple;

/// Largest `n` for which [`build_cycle`] is offered.
pub const MAX_CYCLE_DIMENSION: usize = 6;

type TermKey = (Option<Vec<i64>>, Vec<Vec<i64>>, Vec<i64>);

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainTerm {
    pub coefficient: Complex64,
    /// Half-integer multiples of the upper-triangle entries of `θ`, row-major.
    pub theta_exponent: Vec<i64>,
    pub opposite: Option<Vec<i64>>,
    /// `x⁰, x¹, …, x^k`.
    pub factors: Vec<Vec<i64>>,
}

impl ChainTerm {
    /// Numeric coefficient including the phase at a given `θ`.
    pub fn value(&self, theta: &ThetaMatrix) -> Complex64 {
        let upper = theta.upper();
        let x: f64 = self
            .theta_exponent
            .iter()
            .zip(&upper)
            .map(|(&k, t)| k as f64 * t)
            .sum();
        self.coefficient * unit_phase(0.5 * x)
    }

    /// Sum of all lattice degrees, including the opposite factor.
    pub fn total_degree(&self) -> Vec<i64> {
        let mut s = self
            .opposite
            .clone()
            .unwrap_or_else(|| vec![0; self.factors[0].len()]);
        for f in &self.factors {
            s.iter_mut().zip(f).for_each(|(a, b)| *a += b);
        }
        s
    }
}

/// A formal sum of Hochschild `k`-chains over the `n`-torus.
#[derive(Clone, Debug, PartialEq)]
pub struct HochschildChain {
    n: usize,
    degree: usize,
    terms: BTreeMap<TermKey, Complex64>,
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Exponent increment from `U_x U_y = e(½ x·θy) U_{x+y}`.
fn product_exponent(n: usize, x: &[i64], y: &[i64], into: &mut [i64]) {
    let mut p = 0;
    for j in 0..n {
        for l in j + 1..n {
            into[p] += x[j] * y[l] - x[l] * y[j];
            p += 1;
        }
    }
}

fn add(x: &[i64], y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

impl HochschildChain {
    pub fn zero(n: usize, degree: usize) -> Self {
        Self {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coefficient · (U_{factors[0]} ⊗ U_y^o) ⊗ U_{factors[1]} ⊗ …`.
    pub fn add_term(
        &mut self,
        coefficient: Complex64,
        opposite: Option<Vec<i64>>,
        factors: Vec<Vec<i64>>,
    ) -> Result<()> {
        self.add_with_exponent(coefficient, vec![0; pair_count(self.n)], opposite, factors)
    }

    pub fn add_with_exponent(
        &mut self,
        coefficient: Complex64,
        theta_exponent: Vec<i64>,
        opposite: Option<Vec<i64>>,
        factors: Vec<Vec<i64>>,
    ) -> Result<()> {
        if factors.len() != self.degree + 1 {
            return Err(Error::InvalidChain(format!(
                "a {}-chain needs {} factors, got {}",
                self.degree,
                self.degree + 1,
                factors.len()
            )));
        }
        if factors
            .iter()
            .chain(opposite.iter())
            .any(|f| f.len() != self.n)
        {
            return Err(Error::InvalidChain(format!(
                "monomial degrees must have length {}",
                self.n
            )));
        }
        if theta_exponent.len() != pair_count(self.n) {
            return Err(Error::InvalidChain(
                "phase exponent has the wrong length".into(),
            ));
        }
        if !(coefficient.re.is_finite() && coefficient.im.is_finite()) {
            return Err(Error::InvalidChain("non-finite coefficient".into()));
        }
        self.insert((opposite, factors, theta_exponent), coefficient);
        Ok(())
    }

    fn insert(&mut self, key: TermKey, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        let entry = self.terms.entry(key);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + c;
                if sum == Complex64::new(0.0, 0.0) {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> Vec<ChainTerm> {
        self.terms
            .iter()
            .map(|((y, f, k), c)| ChainTerm {
                coefficient: *c,
                theta_exponent: k.clone(),
                opposite: y.clone(),
                factors: f.clone(),
            })
            .collect()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (k, c) in &self.terms {
            out.insert(k.clone(), c * s);
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.degree != other.degree {
            return Err(Error::InvalidChain(
                "adding chains of different shape".into(),
            ));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), *c);
        }
        Ok(out)
    }

    /// Collapses the symbolic phases at a given `θ` and merges terms with equal
    /// monomials. Terms whose merged coefficient has modulus at most `tol` are dropped.
    pub fn evaluate(
        &self,
        theta: &ThetaMatrix,
        tol: f64,
    ) -> Vec<(Complex64, Option<Vec<i64>>, Vec<Vec<i64>>)> {
        let mut merged: BTreeMap<(Option<Vec<i64>>, Vec<Vec<i64>>), Complex64> = BTreeMap::new();
        for t in self.terms() {
            *merged
                .entry((t.opposite.clone(), t.factors.clone()))
                .or_default() += t.value(theta);
        }
        merged
            .into_iter()
            .filter(|(_, c)| c.norm() > tol)
            .map(|((y, f), c)| (c, y, f))
            .collect()
    }
}

/// Hochschild boundary `b = Σ_i (−1)^i d_i` with `d_0 = m·a₁`, `d_i` merging
/// `a_i a_{i+1}`, and `d_k = a_k·m`. The opposite factor is carried along.
pub fn boundary(chain: &HochschildChain) -> Result<HochschildChain> {
    let k = chain.degree;
    if k == 0 {
        return Err(Error::InvalidChain(
            "the boundary of a 0-chain is not defined".into(),
        ));
    }
    let n = chain.n;
    let mut out = HochschildChain::zero(n, k - 1);
    for ((y, f, e), c) in &chain.terms {
        for i in 0..=k {
            let mut exp = e.clone();
            let mut faces: Vec<Vec<i64>> = Vec::with_capacity(k);
            if i < k {
                product_exponent(n, &f[i], &f[i + 1], &mut exp);
                faces.extend(f[..i].iter().cloned());
                faces.push(add(&f[i], &f[i + 1]));
                faces.extend(f[i + 2..].iter().cloned());
            } else {
                product_exponent(n, &f[k], &f[0], &mut exp);
                faces.push(add(&f[k], &f[0]));
                faces.extend(f[1..k].iter().cloned());
            }
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            out.insert((y.clone(), faces, exp), c * sign);
        }
    }
    Ok(out)
}

/// `c_n = Σ_σ sign(σ) (U_{e_σ(1)} ⋯ U_{e_σ(n)})* ⊗ U_{e_σ(1)} ⊗ ⋯ ⊗ U_{e_σ(n)}`.
pub fn build_cycle(n: usize) -> Result<HochschildChain> {
    if n == 0 || n > MAX_CYCLE_DIMENSION {
        return Err(Error::UnsupportedDimension(n));
    }
    let mut chain = HochschildChain::zero(n, n);
    let unit = |i: usize| -> Vec<i64> { (0..n).map(|j| i64::from(j == i)).collect() };
    for (perm, sign) in permutations(n) {
        let mut acc = vec![0i64; n];
        let mut exp = vec![0i64; pair_count(n)];
        let mut factors = vec![vec![0i64; n]];
        for &p in &perm {
            let e = unit(p);
            product_exponent(n, &acc, &e, &mut exp);
            acc = add(&acc, &e);
            factors.push(e);
        }
        factors[0] = acc.iter().map(|v| -v).collect();
        exp.iter_mut().for_each(|v| *v = -*v);
        chain.insert((None, factors, exp), Complex64::new(sign as f64, 0.0));
    }
    Ok(chain)
}

/// Site-independent spinor block of `π_D(chain)`.
#[derive(Clone, Debug)]
pub struct Representative {
    pub block: ComplexMatrix,
    /// Largest entrywise deviation of any site's block from `block`.
    pub site_deviation: f64,
    pub interior_sites: usize,
}

/// Evaluates `π_D((a ⊗ b^o) ⊗ a₁ ⊗ ⋯ ⊗ a_k) = a b^o [D,a₁] ⋯ [D,a_k]` on every
/// site where all terms stay in the box.
///
/// `[D, π(U_x)] = π(U_x)·S(x)` with the constant spinor block `S(x) = D(μ+x) − D(μ)`,
/// and `S(x)` commutes with every lattice operator, so each term is a lattice
/// phase times the fixed block `S(x¹)⋯S(x^k)`.
pub fn hochschild_representative(
    triple: &AssembledTriple,
    chain: &HochschildChain,
) -> Result<Representative> {
    if chain.n != triple.n() {
        return Err(Error::InvalidChain(format!(
            "chain over n = {} for a triple with n = {}",
            chain.n,
            triple.n()
        )));
    }
    let terms = chain.terms();
    if let Some(bad) = terms
        .iter()
        .find(|t| t.total_degree().iter().any(|&v| v != 0))
    {
        return Err(Error::InvalidChain(format!(
            "term with nonzero total degree {:?}",
            bad.total_degree()
        )));
    }
    let lat = &triple.lattice;
    let theta = &triple.config.theta;
    let d = triple.spinor_dim();

    struct Prepared {
        coef: Complex64,
        ops: Vec<Box<dyn LatticeOperator>>,
        block: ComplexMatrix,
    }
    let prepared: Vec<Prepared> = terms
        .iter()
        .map(|t| {
            let mut ops: Vec<Box<dyn LatticeOperator>> =
                vec![Box::new(u_action(&t.factors[0], lat, &triple.a))];
            if let Some(y) = &t.opposite {
                ops.push(Box::new(u_opposite_action(y, lat, &triple.a)));
            }
            let mut block = ComplexMatrix::identity(d);
            for x in &t.factors[1..] {
                ops.push(Box::new(u_action(x, lat, &triple.a)));
                block = block.matmul(&triple.shift_block(x));
            }
            Prepared {
                coef: t.value(theta),
                ops,
                block,
            }
        })
        .collect();

    let mut reference: Option<ComplexMatrix> = None;
    let mut deviation = 0.0f64;
    let mut count = 0;
    'sites: for site in 0..lat.site_count() {
        let mut sum = ComplexMatrix::zeros(d, d);
        for p in &prepared {
            let mut target = site;
            let mut phase = p.coef;
            for op in p.ops.iter().rev() {
                let Some(img) = op.image(target) else {
                    continue 'sites;
                };
                target = img.target;
                phase *= img.phase;
            }
            debug_assert_eq!(target, site);
            sum = &sum + &p.block.scale(phase);
        }
        count += 1;
        match &reference {
            None => reference = Some(sum),
            Some(r) => deviation = deviation.max((r - &sum).max_abs()),
        }
    }
    let block = reference
        .ok_or_else(|| Error::Precondition("no site keeps every term inside the box".into()))?;
    Ok(Representative {
        block,
        site_deviation: deviation,
        interior_sites: count,
    })
}

/// Best complex `κ` with `block ≈ κ·target` and the entrywise residual `‖block − κ·target‖_max`.
pub fn proportionality(block: &ComplexMatrix, target: &ComplexMatrix) -> (Complex64, f64) {
    let num: Complex64 = target
        .data()
        .iter()
        .zip(block.data())
        .map(|(t, b)| t.conj() * b)
        .sum();
    let den: f64 = target.data().iter().map(|t| t.norm_sqr()).sum();
    let kappa = if den > 0.0 { num / den } else { ONE * 0.0 };
    (kappa, (block - &target.scale(kappa)).max_abs())
}
