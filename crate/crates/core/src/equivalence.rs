//! Lattice automorphisms acting on spin structures: the `SL(2,ℤ)` action on
//! the 2-torus, the flip `x ↦ −x`, the intertwiner `W` and the
//! inner-equivalence obstruction.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::torus::{representation_intertwiner, u_action, AMatrix, LatticeOperator, ThetaMatrix};
use crate::triple::{assemble, AssembledTriple, TauMatrix, TripleConfig};

/// Integer `2×2` matrix `[[a, b], [c, d]]` of determinant 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SL2Element {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl SL2Element {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::InvalidArgument(format!(
                "[[{a}, {b}], [{c}, {d}]] does not have determinant 1"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    /// `M = [[1, 0], [−1, 1]]`.
    pub fn m() -> Self {
        Self {
            a: 1,
            b: 0,
            c: -1,
            d: 1,
        }
    }

    /// `N = [[1, −1], [0, 1]]`.
    pub fn n() -> Self {
        Self {
            a: 1,
            b: -1,
            c: 0,
            d: 1,
        }
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        vec![self.a * x[0] + self.b * x[1], self.c * x[0] + self.d * x[1]]
    }

    pub fn apply_real(&self, x: &[f64]) -> Vec<f64> {
        vec![
            self.a as f64 * x[0] + self.b as f64 * x[1],
            self.c as f64 * x[0] + self.d as f64 * x[1],
        ]
    }

    /// Entries as reals, row-major.
    fn real_entries(&self) -> [f64; 4] {
        [self.a as f64, self.b as f64, self.c as f64, self.d as f64]
    }
}

/// A spin structure `ε ∈ {0, ½}ⁿ`, stored as the set of half entries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpinStructure {
    halves: Vec<bool>,
}

impl SpinStructure {
    pub fn new(epsilon: &[f64]) -> Result<Self> {
        let halves = epsilon
            .iter()
            .map(|&e| match e {
                v if v == 0.0 => Ok(false),
                v if v == 0.5 => Ok(true),
                v => Err(Error::InvalidArgument(format!(
                    "spin structure entries must be 0 or 1/2, got {v}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { halves })
    }

    /// All `2ⁿ` structures; the first coordinate is the least significant bit.
    pub fn all(n: usize) -> Vec<Self> {
        (0..1usize << n)
            .map(|b| Self {
                halves: (0..n).map(|i| b >> i & 1 == 1).collect(),
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.halves.len()
    }

    pub fn epsilon(&self) -> Vec<f64> {
        self.halves
            .iter()
            .map(|&h| if h { 0.5 } else { 0.0 })
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.halves.iter().all(|h| !h)
    }

    /// Names such as `ε10` for `(½, 0)`.
    pub fn label(&self) -> String {
        let digits: String = self
            .halves
            .iter()
            .map(|&h| if h { '1' } else { '0' })
            .collect();
        format!("ε{digits}")
    }
}

impl Serialize for SpinStructure {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

impl fmt::Display for SpinStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `σ(ε) mod ℤ²`.
pub fn act_on_spin(sigma: &SL2Element, eps: &SpinStructure) -> Result<SpinStructure> {
    if eps.n() != 2 {
        return Err(Error::UnsupportedDimension(eps.n()));
    }
    let bits: Vec<i64> = eps.halves.iter().map(|&h| i64::from(h)).collect();
    let image = sigma.apply(&bits);
    Ok(SpinStructure {
        halves: image.iter().map(|v| v.rem_euclid(2) == 1).collect(),
    })
}

/// `−ε mod ℤⁿ`, which is always `ε`.
pub fn flip_spin(eps: &SpinStructure) -> SpinStructure {
    eps.clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Generator {
    M,
    N,
}

/// A product of generators and their inverses, written left to right as a
/// matrix product (the rightmost letter acts first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Word(pub Vec<(Generator, bool)>);

impl Word {
    pub fn matrix(&self) -> SL2Element {
        self.0
            .iter()
            .fold(SL2Element::identity(), |acc, &(g, inv)| {
                let m = match g {
                    Generator::M => SL2Element::m(),
                    Generator::N => SL2Element::n(),
                };
                acc.mul(&if inv { m.inverse() } else { m })
            })
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|&(g, inv)| (g, !inv)).collect())
    }

    pub fn then(&self, later: &Self) -> Self {
        Word(later.0.iter().chain(&self.0).copied().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("Id");
        }
        for &(g, inv) in &self.0 {
            let name = match g {
                Generator::M => "M",
                Generator::N => "N",
            };
            write!(f, "{name}{}", if inv { "^-1" } else { "" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Arrow {
    pub from: SpinStructure,
    pub to: SpinStructure,
    pub word: String,
    pub matrix: [[i64; 2]; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitPartition {
    pub n: usize,
    /// `"SL(2,Z)"` for `n = 2`, `"flip"` otherwise.
    pub group: String,
    pub orbits: Vec<Vec<SpinStructure>>,
    pub arrows: Vec<Arrow>,
}

/// Orbits of spin structures. For `n = 2` the closure under `{M, N, M⁻¹, N⁻¹}`
/// is computed by breadth-first search from the last structure of each orbit,
/// and every ordered pair inside an orbit gets a witnessing word built from the
/// search tree. For `n > 2` the flip fixes every structure.
pub fn orbits(n: usize) -> Result<OrbitPartition> {
    if n < 2 {
        return Err(Error::UnsupportedDimension(n));
    }
    let all = SpinStructure::all(n);
    if n > 2 {
        let orbits = all.iter().map(|e| vec![flip_spin(e)]).collect();
        return Ok(OrbitPartition {
            n,
            group: "flip".into(),
            orbits,
            arrows: Vec::new(),
        });
    }
    let gens = [
        (Generator::M, false),
        (Generator::N, false),
        (Generator::M, true),
        (Generator::N, true),
    ];
    let mut words: Vec<Option<Word>> = vec![None; all.len()];
    let mut orbits = Vec::new();
    let mut arrows = Vec::new();
    for root in (0..all.len()).rev() {
        if words[root].is_some() {
            continue;
        }
        words[root] = Some(Word(Vec::new()));
        let mut members = vec![root];
        let mut queue = VecDeque::from([root]);
        while let Some(cur) = queue.pop_front() {
            let w = words[cur].clone().expect("visited");
            for &g in &gens {
                let next = w.then(&Word(vec![g]));
                let image = act_on_spin(&next.matrix(), &all[root])?;
                let idx = all.iter().position(|e| *e == image).expect("closed set");
                if words[idx].is_none() {
                    words[idx] = Some(next);
                    members.push(idx);
                    queue.push_back(idx);
                }
            }
        }
        members.sort_unstable();
        for &a in &members {
            for &b in &members {
                if a == b {
                    continue;
                }
                let word = words[a]
                    .clone()
                    .expect("visited")
                    .inverse()
                    .then(&words[b].clone().expect("visited"));
                let word = simplify(word);
                let matrix = word.matrix();
                debug_assert_eq!(act_on_spin(&matrix, &all[a])?, all[b]);
                arrows.push(Arrow {
                    from: all[a].clone(),
                    to: all[b].clone(),
                    word: word.to_string(),
                    matrix: matrix.rows(),
                });
            }
        }
        orbits.push(members.iter().map(|&i| all[i].clone()).collect::<Vec<_>>());
    }
    orbits.sort_by_key(|o: &Vec<SpinStructure>| {
        SpinStructure::all(n).iter().position(|e| *e == o[0])
    });
    Ok(OrbitPartition {
        n,
        group: "SL(2,Z)".into(),
        orbits,
        arrows,
    })
}

/// Cancels adjacent `g g⁻¹` pairs.
fn simplify(w: Word) -> Word {
    let mut out: Vec<(Generator, bool)> = Vec::new();
    for l in w.0 {
        match out.last() {
            Some(&(g, inv)) if g == l.0 && inv != l.1 => {
                out.pop();
            }
            _ => out.push(l),
        }
    }
    Word(out)
}

/// Outcome of [`build_w`].
#[derive(Clone, Debug, Serialize)]
pub struct WConstruction {
    pub sigma: [[i64; 2]; 2],
    pub source: SpinStructure,
    pub target: SpinStructure,
    /// `τ′` with columns `σ^{−t}τʲ`, row-major.
    pub tau_prime: Vec<f64>,
    /// `σ^{−t} A σ^{−1}`, row-major.
    pub a_prime: Vec<f64>,
    /// Sites of the source box whose image lies in the target box.
    pub mapped_sites: usize,
    /// `max ‖W π(U_x) − π(U_{σx}) W‖` over `|x_i| ≤ 2` on sites where both sides are defined.
    pub algebra_residual: f64,
    pub algebra_sites: usize,
    /// `max ‖W D − D′ W‖` on mapped sites.
    pub dirac_residual: f64,
    pub pass: bool,
}

pub const W_TOL: f64 = 1e-10;

/// `W = T∘P` with `P e_μ = e_{σμ}` and `T` the diagonal intertwiner taking the
/// representation with `A′ = σ^{−t}Aσ^{−1}` back to `A`, normalized so that the
/// site `m = 0` keeps phase 1. Verifies `W π(U_x) W⁻¹ = π(U_{σx})` and
/// `W D W⁻¹ = D′` on the sites where both sides live in the boxes.
pub fn build_w(sigma: &SL2Element, triple: &AssembledTriple) -> Result<WConstruction> {
    if triple.n() != 2 {
        return Err(Error::InvalidArgument(format!(
            "W is built for n = 2 only, got n = {}",
            triple.n()
        )));
    }
    let source = SpinStructure::new(&triple.config.epsilon)?;
    let target = act_on_spin(sigma, &source)?;
    let inv = sigma.inverse().real_entries();
    // σ^{−t} as a row-major matrix.
    let inv_t = [inv[0], inv[2], inv[1], inv[3]];
    let a = triple.a.entries();
    let mut a_prime = vec![0.0; 4];
    for r in 0..2 {
        for c in 0..2 {
            a_prime[r * 2 + c] = (0..2)
                .flat_map(|k| (0..2).map(move |l| (k, l)))
                .map(|(k, l)| inv_t[r * 2 + k] * a[k * 2 + l] * inv[l * 2 + c])
                .sum();
        }
    }
    let tau = &triple.config.tau;
    let mut tau_prime = vec![0.0; 4];
    for r in 0..2 {
        for j in 0..2 {
            tau_prime[r * 2 + j] = (0..2).map(|k| inv_t[r * 2 + k] * tau.get(k, j)).sum();
        }
    }

    let image_config = TripleConfig {
        epsilon: target.epsilon(),
        tau: TauMatrix::from_row_major(2, &tau_prime)?,
        ..triple.config.clone()
    };
    let image = assemble(image_config)?;
    let tlat = &image.lattice;
    let a_prime_matrix = AMatrix::new(2, a_prime.clone(), &triple.config.theta)?;
    let t_op = representation_intertwiner(tlat, &a_prime_matrix, &image.a)?;
    let zero_site = tlat
        .index_of(&[0, 0])
        .ok_or_else(|| Error::Precondition("target box misses m = 0".into()))?;
    let normalize = t_op.image(zero_site).expect("diagonal").phase.conj();

    let slat = &triple.lattice;
    let w_of = |site: usize| -> Option<(usize, num_complex::Complex64)> {
        let mu = slat.site(site);
        let t = tlat.index_of_site(&sigma.apply_real(&mu))?;
        Some((t, t_op.image(t).expect("diagonal").phase * normalize))
    };
    let mapped_sites = (0..slat.site_count())
        .filter(|&s| w_of(s).is_some())
        .count();

    let mut algebra_residual = 0.0f64;
    let mut algebra_sites = usize::MAX;
    for x0 in -2..=2i64 {
        for x1 in -2..=2i64 {
            let x = [x0, x1];
            let sx = sigma.apply(&x);
            let ux = u_action(&x, slat, &triple.a);
            let usx = u_action(&sx, tlat, &image.a);
            let mut count = 0;
            for s in 0..slat.site_count() {
                let Some(img) = ux.image(s) else { continue };
                let (Some((ws, pws)), Some((wx, pwx))) = (w_of(s), w_of(img.target)) else {
                    continue;
                };
                let Some(rhs) = usx.image(ws) else { continue };
                if rhs.target != wx {
                    return Err(Error::Precondition(
                        "W does not map shifted sites consistently".into(),
                    ));
                }
                count += 1;
                algebra_residual = algebra_residual.max((pwx * img.phase - rhs.phase * pws).norm());
            }
            algebra_sites = algebra_sites.min(count);
        }
    }

    let mut dirac_residual = 0.0f64;
    for s in 0..slat.site_count() {
        let Some((t, _)) = w_of(s) else { continue };
        let lhs = triple.dirac_block(s)?;
        let rhs = image.dirac_block(t)?;
        dirac_residual = dirac_residual.max((&lhs - &rhs).max_abs());
    }

    let pass = algebra_residual <= W_TOL
        && dirac_residual <= W_TOL
        && algebra_sites >= slat.interior_floor();
    Ok(WConstruction {
        sigma: sigma.rows(),
        source,
        target,
        tau_prime,
        a_prime,
        mapped_sites,
        algebra_residual,
        algebra_sites,
        dirac_residual,
        pass,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionVerdict {
    Obstructed,
    UnobstructedNecessaryCondition,
}

impl fmt::Display for ObstructionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Obstructed => "obstructed",
            Self::UnobstructedNecessaryCondition => "unobstructed-necessary-condition",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Obstruction {
    pub verdict: ObstructionVerdict,
    /// `v = k + σ(ε) − ε̃` with `θv = 0`, when one was found.
    pub witness: Option<Vec<f64>>,
}

pub const OBSTRUCTION_TOL: f64 = 1e-9;

/// Necessary condition for an inner unitary mapping spin structure `ε` to `ε̃`
/// along `σ`: some `v = k + σ(ε) − ε̃`, `k ∈ ℤⁿ`, must satisfy `θv = 0`. If
/// `ε̃ − σ(ε)` is integral then `v = 0` qualifies. Otherwise `k` is searched in
/// `[−search_box, search_box]ⁿ`.
///
/// `sigma` is row-major `n×n`; for `n > 2` it must be `±Id`, for `n = 2` it
/// must have determinant 1.
pub fn inner_obstruction(
    theta: &ThetaMatrix,
    eps: &SpinStructure,
    eps_tilde: &SpinStructure,
    sigma: &[i64],
    search_box: i64,
) -> Result<Obstruction> {
    let n = theta.n();
    if eps.n() != n || eps_tilde.n() != n || sigma.len() != n * n {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    if search_box < 0 {
        return Err(Error::InvalidArgument(
            "search box must be nonnegative".into(),
        ));
    }
    if n == 2 {
        SL2Element::new(sigma[0], sigma[1], sigma[2], sigma[3])?;
    } else {
        let sign = sigma[0];
        let ok = sign.abs() == 1
            && (0..n).all(|r| (0..n).all(|c| sigma[r * n + c] == if r == c { sign } else { 0 }));
        if !ok {
            return Err(Error::InvalidArgument(
                "for n > 2 only sigma = ±Id is supported".into(),
            ));
        }
    }
    let e = eps.epsilon();
    let et = eps_tilde.epsilon();
    let sig_eps: Vec<f64> = (0..n)
        .map(|r| (0..n).map(|c| sigma[r * n + c] as f64 * e[c]).sum())
        .collect();
    let offset: Vec<f64> = sig_eps.iter().zip(&et).map(|(s, t)| s - t).collect();
    if offset.iter().all(|v| v.fract() == 0.0) {
        return Ok(Obstruction {
            verdict: ObstructionVerdict::UnobstructedNecessaryCondition,
            witness: Some(vec![0.0; n]),
        });
    }
    let side = (2 * search_box + 1) as usize;
    let total = side.pow(n as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut v = vec![0.0; n];
        for i in (0..n).rev() {
            v[i] = (rem % side) as f64 - search_box as f64 + offset[i];
            rem /= side;
        }
        if theta.apply(&v).iter().all(|w| w.abs() <= OBSTRUCTION_TOL) {
            return Ok(Obstruction {
                verdict: ObstructionVerdict::UnobstructedNecessaryCondition,
                witness: Some(v),
            });
        }
    }
    Ok(Obstruction {
        verdict: ObstructionVerdict::Obstructed,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(a: f64, b: f64) -> SpinStructure {
        SpinStructure::new(&[a, b]).unwrap()
    }

    #[test]
    fn generator_actions() {
        assert_eq!(
            act_on_spin(&SL2Element::m(), &eps(0.5, 0.5)).unwrap(),
            eps(0.5, 0.0)
        );
        assert_eq!(
            act_on_spin(&SL2Element::n(), &eps(0.5, 0.5)).unwrap(),
            eps(0.0, 0.5)
        );
        assert_eq!(
            act_on_spin(&SL2Element::m(), &eps(0.0, 0.0)).unwrap(),
            eps(0.0, 0.0)
        );
        assert!(act_on_spin(&SL2Element::m(), &SpinStructure::new(&[0.5]).unwrap()).is_err());
    }

    #[test]
    fn determinant_is_enforced() {
        assert!(SL2Element::new(2, 0, 0, 1).is_err());
        let s = SL2Element::new(2, 1, 1, 1).unwrap();
        assert_eq!(s.mul(&s.inverse()), SL2Element::identity());
    }

    #[test]
    fn word_rendering_and_matrix() {
        let w = Word(vec![(Generator::N, false), (Generator::M, true)]);
        assert_eq!(w.to_string(), "NM^-1");
        assert_eq!(w.matrix(), SL2Element::n().mul(&SL2Element::m().inverse()));
        assert_eq!(w.inverse().to_string(), "MN^-1");
    }

    #[test]
    fn spin_labels() {
        assert_eq!(eps(0.5, 0.0).label(), "ε10");
        assert!(SpinStructure::new(&[0.3]).is_err());
        assert_eq!(SpinStructure::all(2)[1], eps(0.5, 0.0));
    }
}
