use num_complex::Complex64;
use serde::Serialize;

use super::hochschild::{build_cycle, hochschild_representative, proportionality};
use super::{NamedConstant, VerificationReport};
use crate::clifford::{sign_table, Sign, SignTriple};
use crate::error::Result;
use crate::linalg::{antisymmetrized_product, nan_max, ComplexMatrix, ONE};
use crate::torus::{
    combination_residual, combination_residuals, derivation, u_action, u_opposite_action,
    Combination, Derivation, Identity, LatticeOperator, TruncatedLattice,
};
use crate::triple::AssembledTriple;

pub const FIRST_ORDER_TOL: f64 = 1e-10;
pub const EQUIVARIANCE_TOL: f64 = 1e-12;
pub const SIGN_TOL: f64 = 1e-11;
pub const HOCHSCHILD_TOL: f64 = 1e-10;

fn label(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

/// `[π(U_x), π(U_y)^o]` on every site where both orderings stay in the box.
pub fn check_zeroth_order(triple: &AssembledTriple, x: &[i64], y: &[i64]) -> VerificationReport {
    let lat = &triple.lattice;
    let ux = u_action(x, lat, &triple.a);
    let uy = u_opposite_action(y, lat, &triple.a);
    let terms: Combination = vec![(ONE, vec![&ux, &uy]), (-ONE, vec![&uy, &ux])];
    let (r, sites) = combination_residual(lat, &terms);
    VerificationReport::new(
        format!("zeroth_order x={} y={}", label(x), label(y)),
        r,
        FIRST_ORDER_TOL,
        sites,
        lat.interior_floor(),
    )
}

/// `[[D, π(U_x)], π(U_y)^o]` on every site where all four products stay in the box.
pub fn check_first_order(triple: &AssembledTriple, x: &[i64], y: &[i64]) -> VerificationReport {
    let lat = &triple.lattice;
    let d = triple.dirac();
    let ux = u_action(x, lat, &triple.a);
    let uy = u_opposite_action(y, lat, &triple.a);
    let terms: Combination = vec![
        (ONE, vec![&d, &ux, &uy]),
        (-ONE, vec![&ux, &d, &uy]),
        (-ONE, vec![&uy, &d, &ux]),
        (ONE, vec![&uy, &ux, &d]),
    ];
    let (r, sites) = combination_residual(lat, &terms);
    VerificationReport::new(
        format!("first_order x={} y={}", label(x), label(y)),
        r,
        FIRST_ORDER_TOL,
        sites,
        lat.interior_floor(),
    )
}

/// Commuting derivations, their Leibniz action on monomials, `[δ_i, D] = 0`
/// and `δ_i J = −J δ_i`.
pub fn check_equivariance(triple: &AssembledTriple) -> VerificationReport {
    let lat = &triple.lattice;
    let n = triple.n();
    let deltas: Vec<Derivation> = (0..n)
        .map(|i| derivation(i, lat).expect("index below n"))
        .collect();
    let d = triple.dirac();
    let j = triple.reality();

    let mut shifts: Vec<Vec<i64>> = Vec::new();
    for k in 0..n {
        let mut e = vec![0i64; n];
        e[k] = 1;
        shifts.push(e.clone());
        e[k] = -1;
        shifts.push(e);
    }
    shifts.push(vec![1; n]);

    let mut worst = 0.0f64;
    let mut leibniz_sites = usize::MAX;
    for (i, di) in deltas.iter().enumerate() {
        for dj in &deltas {
            let t: Combination = vec![(ONE, vec![di, dj]), (-ONE, vec![dj, di])];
            worst = nan_max(worst, combination_residual(lat, &t).0);
        }
        for x in &shifts {
            let u = u_action(x, lat, &triple.a);
            let xi = Complex64::new(x[i] as f64, 0.0);
            let t: Combination = vec![(ONE, vec![di, &u]), (-ONE, vec![&u, di]), (-xi, vec![&u])];
            let (r, s) = combination_residual(lat, &t);
            worst = nan_max(worst, r);
            leibniz_sites = leibniz_sites.min(s);
        }
        let t: Combination = vec![(ONE, vec![di, &d]), (-ONE, vec![&d, di])];
        worst = nan_max(worst, combination_residual(lat, &t).0);
        let t: Combination = vec![(ONE, vec![di, &j]), (ONE, vec![&j, di])];
        worst = nan_max(worst, combination_residual(lat, &t).0);
    }
    VerificationReport::new(
        "equivariance",
        worst,
        EQUIVARIANCE_TOL,
        leibniz_sites,
        lat.interior_floor(),
    )
}

/// Result of [`check_signs`]: the report plus the signs actually realized by the operators.
#[derive(Clone, Debug, Serialize)]
pub struct SignCheck {
    pub report: VerificationReport,
    pub realized: SignTriple,
    pub expected: SignTriple,
}

fn best_sign(
    lat: &TruncatedLattice,
    lhs: Vec<&dyn LatticeOperator>,
    rhs: Vec<&dyn LatticeOperator>,
) -> (Sign, f64) {
    let coefs = [Sign::Plus, Sign::Minus].map(|s| vec![ONE, Complex64::new(-s.value(), 0.0)]);
    let (worst, _) = combination_residuals(lat, &[lhs, rhs], &coefs);
    if worst[1] < worst[0] {
        (Sign::Minus, worst[1])
    } else {
        (Sign::Plus, worst[0])
    }
}

/// Measures `J² = ε_J`, `JD = ε_D DJ`, `JΓ = ε_Γ ΓJ`, `Γ² = 1`, `ΓD = −DΓ` and
/// `[Γ, π(U_{e_k})] = 0` over the whole truncated space. Passes when every
/// relation holds with the measured sign and those signs equal the table entry.
pub fn check_signs(triple: &AssembledTriple) -> SignCheck {
    let lat = &triple.lattice;
    let n = triple.n();
    let expected = sign_table(n).expect("assembled triples have supported n");
    let j = triple.reality();
    let d = triple.dirac_table();
    let id = Identity::new(lat);

    let (eps_j, r_j) = best_sign(lat, vec![&j, &j], vec![&id]);
    let (eps_d, r_d) = best_sign(lat, vec![&j, &d], vec![&d, &j]);
    let mut worst = nan_max(r_j, r_d);
    let mut sites = lat.site_count();
    let mut eps_gamma = None;
    if let Some(g) = triple.grading() {
        let (eg, r_g) = best_sign(lat, vec![&j, &g], vec![&g, &j]);
        eps_gamma = Some(eg);
        worst = nan_max(worst, r_g);
        let sq: Combination = vec![(ONE, vec![&g, &g]), (-ONE, vec![&id])];
        worst = nan_max(worst, combination_residual(lat, &sq).0);
        let anti: Combination = vec![(ONE, vec![&g, &d]), (ONE, vec![&d, &g])];
        worst = nan_max(worst, combination_residual(lat, &anti).0);
        for k in 0..n {
            let mut e = vec![0i64; n];
            e[k] = 1;
            let u = u_action(&e, lat, &triple.a);
            let t: Combination = vec![(ONE, vec![&g, &u]), (-ONE, vec![&u, &g])];
            let (r, s) = combination_residual(lat, &t);
            worst = nan_max(worst, r);
            sites = sites.min(s);
        }
    }
    let realized = SignTriple {
        eps_j,
        eps_d,
        eps_gamma,
    };
    let mut report = VerificationReport::new("signs", worst, SIGN_TOL, sites, lat.interior_floor())
        .with_constant(NamedConstant::real("eps_J", eps_j.value()))
        .with_constant(NamedConstant::real("eps_D", eps_d.value()));
    if let Some(eg) = eps_gamma {
        report = report.with_constant(NamedConstant::real("eps_Gamma", eg.value()));
    }
    if realized != expected {
        report = report.fail();
    }
    SignCheck {
        report,
        realized,
        expected,
    }
}

/// Represents the orientation cycle: `π_D(c_n)` must be a constant block
/// `κ·Γ` (even `n`) or `κ·Id` (odd `n`), with `|κ| = n!·|det τ|` and the block
/// equal to `det τ · Σ_σ sign(σ) A_σ(1)⋯A_σ(n)`.
pub fn check_hochschild(triple: &AssembledTriple) -> Result<VerificationReport> {
    let n = triple.n();
    let cycle = build_cycle(n)?;
    let rep = hochschild_representative(triple, &cycle)?;
    let d = triple.spinor_dim();
    let target = triple
        .rep
        .grading
        .clone()
        .unwrap_or_else(|| ComplexMatrix::identity(d));
    let (kappa, off) = proportionality(&rep.block, &target);
    let det = triple.config.tau.det();
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    let expected_norm = factorial * det.abs();
    let norm_err = (kappa.norm() - expected_norm).abs() / expected_norm;
    let identity = antisymmetrized_product(&triple.rep.generators)?.scale_real(det);
    let identity_err = (&rep.block - &identity).max_abs();
    let residual = [off, identity_err, norm_err]
        .into_iter()
        .fold(rep.site_deviation, nan_max);
    let lat = &triple.lattice;
    Ok(VerificationReport::new(
        "hochschild",
        residual,
        HOCHSCHILD_TOL,
        rep.interior_sites,
        lat.interior_floor(),
    )
    .with_constant(NamedConstant::new("kappa", kappa))
    .with_constant(NamedConstant::real("off_proportionality", off))
    .with_constant(NamedConstant::real("relative_norm_error", norm_err))
    .with_constant(NamedConstant::real(
        "antisymmetrized_identity_error",
        identity_err,
    )))
}
