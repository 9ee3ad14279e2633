use serde::Serialize;

use super::{NamedConstant, VerificationReport};
use crate::error::{Error, Result};
use crate::linalg::{min_singular_value, ComplexMatrix};
use crate::triple::{AssembledTriple, KERNEL_TOL};

pub const DEFAULT_PENCIL_SAMPLES: usize = 4096;

/// Fraction of the largest `|λ|` bounding the fit, and the number of
/// log-spaced points sampled inside it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitWindow {
    pub lower: f64,
    pub upper: f64,
    pub points: usize,
}

impl Default for FitWindow {
    fn default() -> Self {
        Self {
            lower: 0.25,
            upper: 0.5,
            points: 32,
        }
    }
}

/// `N(Λ)`: number of entries of a sorted list of moduli that are at most `Λ`.
pub fn counting_function(sorted_moduli: &[f64], lambda: f64) -> usize {
    sorted_moduli.partition_point(|&v| v <= lambda)
}

/// Least-squares slope of `log N(Λ)` against `log Λ`, with `N` counting the
/// nonzero eigenvalues of `|D|` up to `Λ`.
pub fn spectral_dimension(triple: &AssembledTriple, window: FitWindow) -> Result<f64> {
    if !(window.lower > 0.0 && window.lower < window.upper && window.upper <= 1.0)
        || window.points < 2
    {
        return Err(Error::InvalidArgument(
            "fit window must satisfy 0 < lower < upper <= 1 with at least 2 points".into(),
        ));
    }
    let mut moduli: Vec<f64> = triple
        .full_spectrum()
        .into_iter()
        .map(f64::abs)
        .filter(|&v| v > KERNEL_TOL)
        .collect();
    moduli.sort_by(f64::total_cmp);
    let Some(&max) = moduli.last() else {
        return Err(Error::InvalidArgument(
            "spectrum is empty after removing the kernel".into(),
        ));
    };
    let (lo, hi) = (window.lower * max, window.upper * max);
    let mut xs = Vec::with_capacity(window.points);
    let mut ys = Vec::with_capacity(window.points);
    for k in 0..window.points {
        let lambda = lo * (hi / lo).powf(k as f64 / (window.points - 1) as f64);
        let count = counting_function(&moduli, lambda);
        if count > 0 {
            xs.push(lambda.ln());
            ys.push((count as f64).ln());
        }
    }
    if xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "fit window contains fewer than two nonzero counts".into(),
        ));
    }
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 2u64;
    while out.len() < count {
        if out.iter().all(|p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Deterministic points on the unit sphere in `ℝⁿ`: the coordinate axes
/// first, then Box–Muller images of a Halton sequence starting after index `seed`.
pub fn sphere_samples(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    for k in 0..n.min(count) {
        out.push((0..n).map(|j| if j == k { 1.0 } else { 0.0 }).collect());
    }
    let pairs = n.div_ceil(2);
    let bases = primes(2 * pairs);
    let mut index = seed;
    while out.len() < count {
        index += 1;
        let mut g = Vec::with_capacity(2 * pairs);
        for p in 0..pairs {
            let u1 = radical_inverse(index, bases[2 * p]);
            let u2 = radical_inverse(index, bases[2 * p + 1]);
            let r = (-2.0 * u1.ln()).sqrt();
            let a = std::f64::consts::TAU * u2;
            g.push(r * a.cos());
            g.push(r * a.sin());
        }
        g.truncate(n);
        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            out.push(g.into_iter().map(|v| v / norm).collect());
        }
    }
    out
}

/// Smallest singular value of `Σ x_i A_i` over a set of unit directions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PencilMinimum {
    pub value: f64,
    pub direction: Vec<f64>,
    pub samples: usize,
}

fn check_square_family(matrices: &[ComplexMatrix]) -> Result<usize> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::InvalidArgument("no matrices given".into()))?;
    let d = first.rows();
    if matrices.iter().any(|m| m.rows() != d || m.cols() != d) {
        return Err(Error::InvalidArgument(
            "matrices must be square and of equal size".into(),
        ));
    }
    Ok(d)
}

/// `Σ x_i A_i`.
pub fn pencil_matrix(matrices: &[ComplexMatrix], x: &[f64]) -> ComplexMatrix {
    let d = matrices[0].rows();
    let mut out = ComplexMatrix::zeros(d, d);
    for (c, a) in x.iter().zip(matrices) {
        out = &out + &a.scale_real(*c);
    }
    out
}

fn normalized(mut x: Vec<f64>) -> Vec<f64> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
    x
}

/// Shrinking-step coordinate search on the sphere, started from `x`.
fn refine(matrices: &[ComplexMatrix], mut x: Vec<f64>, mut best: f64) -> (f64, Vec<f64>) {
    let mut step = 0.05;
    let mut evaluations = 0;
    while step > 1e-13 && evaluations < 20_000 {
        let mut improved = false;
        for i in 0..x.len() {
            for sign in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += sign * step;
                let y = normalized(y);
                let v = min_singular_value(&pencil_matrix(matrices, &y));
                evaluations += 1;
                if v < best {
                    best = v;
                    x = y;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best, x)
}

/// Number of best samples that [`pencil_minimum`] refines locally.
const REFINED_STARTS: usize = 4;

/// Minimum of the smallest singular value of `Σ x_i A_i` over the sampled
/// directions of [`sphere_samples`], followed by a local search from the best
/// few samples.
pub fn pencil_minimum(
    matrices: &[ComplexMatrix],
    sample_count: usize,
    seed: u64,
) -> Result<PencilMinimum> {
    check_square_family(matrices)?;
    if sample_count == 0 {
        return Err(Error::InvalidArgument(
            "sample_count must be at least 1".into(),
        ));
    }
    let mut scored: Vec<(f64, Vec<f64>)> = sphere_samples(matrices.len(), sample_count, seed)
        .into_iter()
        .map(|x| (min_singular_value(&pencil_matrix(matrices, &x)), x))
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = PencilMinimum {
        value: scored[0].0,
        direction: scored[0].1.clone(),
        samples: sample_count,
    };
    for (v, x) in scored.into_iter().take(REFINED_STARTS) {
        if best.value == 0.0 {
            break;
        }
        let (v, x) = refine(matrices, x, v);
        if v < best.value {
            best.value = v;
            best.direction = x;
        }
    }
    Ok(best)
}

/// Pencil test for Clifford generators: the smallest singular value of
/// `Σ x_i A_i` over sampled unit `x` must be exactly 1.
pub fn check_pencil(
    matrices: &[ComplexMatrix],
    sample_count: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let m = pencil_minimum(matrices, sample_count, seed)?;
    Ok(
        VerificationReport::new("pencil", (m.value - 1.0).abs(), 1e-10, m.samples, 1)
            .with_constant(NamedConstant::real("min_singular_value", m.value))
            .with_constant(NamedConstant::real("seed", seed as f64)),
    )
}

/// Simultaneous rational approximation `|q a_i − p_i| < N^{−1/n}` with `1 ≤ q < N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirichletApprox {
    pub q: u64,
    pub p: Vec<i64>,
    pub error: f64,
}

/// Returns the smallest `q` meeting the bound, with `p_i = round(q a_i)`.
pub fn dirichlet_approx(a: &[f64], bound: u64) -> Result<DirichletApprox> {
    if bound < 2 {
        return Err(Error::InvalidArgument("bound must be at least 2".into()));
    }
    if a.is_empty() || a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "need a nonempty finite vector".into(),
        ));
    }
    let limit = (bound as f64).powf(-1.0 / a.len() as f64);
    for q in 1..bound {
        let qf = q as f64;
        let p: Vec<i64> = a.iter().map(|v| (qf * v).round() as i64).collect();
        let error = a
            .iter()
            .zip(&p)
            .map(|(v, &pi)| (qf * v - pi as f64).abs())
            .fold(0.0, f64::max);
        if error < limit {
            return Ok(DirichletApprox { q, p, error });
        }
    }
    Err(Error::NoConvergence(bound as usize))
}
