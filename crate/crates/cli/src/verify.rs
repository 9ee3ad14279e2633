use nctorus::axioms::{
    check_equivariance, check_first_order, check_hochschild, check_pencil, check_signs,
    check_zeroth_order, spectral_dimension, FitWindow, NamedConstant, VerificationReport,
    DEFAULT_PENCIL_SAMPLES, EQUIVARIANCE_TOL, FIRST_ORDER_TOL, HOCHSCHILD_TOL, SIGN_TOL,
};
use nctorus::triple::{solve_c_space, C_MEMBERSHIP_TOL, KERNEL_TOL};
use nctorus::{assemble, AssembledTriple};
use serde::Serialize;

use crate::config::ResolvedConfig;
use crate::CliError;

const PENCIL_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumSummary {
    pub count: usize,
    pub kernel_dimension: usize,
    pub min_abs: f64,
    /// `null` when the lattice is too small for a fit.
    pub weyl_slope: Option<f64>,
}

impl SpectrumSummary {
    pub fn from_sorted(eigenvalues: &[f64], weyl_slope: Option<f64>) -> Self {
        Self {
            count: eigenvalues.len(),
            kernel_dimension: eigenvalues.iter().filter(|l| l.abs() <= KERNEL_TOL).count(),
            min_abs: eigenvalues
                .iter()
                .map(|l| l.abs())
                .fold(f64::INFINITY, f64::min),
            weyl_slope,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub config: ResolvedConfig,
    pub checks: Vec<VerificationReport>,
    /// Absent when the triple could not be assembled.
    pub spectrum: Option<SpectrumSummary>,
    pub pass: bool,
}

impl RunReport {
    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {:<14} residual {} (tol {}), sites {}/{}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                crate::format_f64(c.max_residual),
                crate::format_f64(c.tolerance),
                c.interior_sites,
                c.min_interior
            ));
        }
        if let Some(s) = &self.spectrum {
            let slope = s.weyl_slope.map_or("n/a".to_string(), crate::format_f64);
            out.push_str(&format!(
                "spectrum: {} eigenvalues, kernel {}, min |λ| {}, Weyl slope {}\n",
                s.count,
                s.kernel_dimension,
                crate::format_f64(s.min_abs),
                slope
            ));
        }
        out.push_str(if self.pass {
            "overall: PASS\n"
        } else {
            "overall: FAIL\n"
        });
        out
    }
}

/// Integer vectors of Euclidean length at most `radius`, in lexicographic order.
pub fn shift_set(n: usize, radius: f64) -> Vec<Vec<i64>> {
    let r = radius.floor() as i64;
    let side = (2 * r + 1) as usize;
    let mut out = Vec::new();
    for k in 0..side.pow(n as u32) {
        let mut rest = k;
        let mut v = vec![0i64; n];
        for slot in v.iter_mut().rev() {
            *slot = (rest % side) as i64 - r;
            rest /= side;
        }
        if v.iter().map(|x| (x * x) as f64).sum::<f64>() <= radius * radius + 1e-9 {
            out.push(v);
        }
    }
    out
}

fn with_tolerance(mut r: VerificationReport, tol: f64) -> VerificationReport {
    r.tolerance = tol;
    r.pass = r.max_residual <= tol && r.interior_sites >= r.min_interior;
    r
}

/// Worst case of a pairwise check over all pairs of shifts.
fn pairwise(
    name: &str,
    triple: &AssembledTriple,
    shifts: &[Vec<i64>],
    tol: f64,
    check: fn(&AssembledTriple, &[i64], &[i64]) -> VerificationReport,
) -> VerificationReport {
    let mut worst = 0.0f64;
    let mut min_sites = usize::MAX;
    for x in shifts {
        for y in shifts {
            let r = check(triple, x, y);
            worst = nctorus::linalg::nan_max(worst, r.max_residual);
            min_sites = min_sites.min(r.interior_sites);
        }
    }
    let pairs = shifts.len() * shifts.len();
    VerificationReport::new(name, worst, tol, min_sites, triple.lattice.interior_floor())
        .with_constant(NamedConstant::real("pairs", pairs as f64))
}

fn c_membership(config: &ResolvedConfig) -> Result<VerificationReport, CliError> {
    let tol = config.tolerance("c_membership", C_MEMBERSHIP_TOL);
    let residual = match config.c_matrix() {
        None => 0.0,
        Some(c) => {
            let space = solve_c_space(config.n)?;
            space.membership_residual(&c).max(c.hermitian_defect())
        }
    };
    Ok(VerificationReport::new("c_membership", residual, tol, 1, 1))
}

/// Runs the whole suite. An inadmissible `C` is a verified failure: the
/// report then holds only the membership check.
pub fn cmd_verify(config: &ResolvedConfig) -> Result<RunReport, CliError> {
    let membership = c_membership(config)?;
    if !membership.pass {
        return Ok(RunReport {
            config: config.clone(),
            checks: vec![membership],
            spectrum: None,
            pass: false,
        });
    }
    let triple = assemble(config.triple_config()?)?;
    let mut checks = vec![membership];

    let signs = check_signs(&triple);
    let mut report = with_tolerance(signs.report, config.tolerance("signs", SIGN_TOL));
    if signs.realized != signs.expected {
        report = report.fail();
    }
    checks.push(report);
    checks.push(with_tolerance(
        check_equivariance(&triple),
        config.tolerance("equivariance", EQUIVARIANCE_TOL),
    ));

    let shifts = shift_set(config.n, config.shift_radius);
    checks.push(pairwise(
        "zeroth_order",
        &triple,
        &shifts,
        config.tolerance("zeroth_order", FIRST_ORDER_TOL),
        check_zeroth_order,
    ));
    checks.push(pairwise(
        "first_order",
        &triple,
        &shifts,
        config.tolerance("first_order", FIRST_ORDER_TOL),
        check_first_order,
    ));
    checks.push(with_tolerance(
        check_hochschild(&triple)?,
        config.tolerance("hochschild", HOCHSCHILD_TOL),
    ));
    let pencil = check_pencil(&triple.rep.generators, DEFAULT_PENCIL_SAMPLES, config.seed)?;
    checks.push(with_tolerance(
        pencil,
        config.tolerance("pencil", PENCIL_TOL),
    ));

    let mut eigenvalues = triple.full_spectrum();
    eigenvalues.sort_by(f64::total_cmp);
    let spectrum = SpectrumSummary::from_sorted(
        &eigenvalues,
        spectral_dimension(&triple, FitWindow::default()).ok(),
    );
    let pass = checks.iter().all(|c| c.pass);
    Ok(RunReport {
        config: config.clone(),
        checks,
        spectrum: Some(spectrum),
        pass,
    })
}
