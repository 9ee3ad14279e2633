//! Command implementations behind the `nctorus` binary. Each command returns
//! a serializable record plus a pass flag; the binary maps these to exit codes.

pub mod config;
mod verify;

use std::fmt::Write as _;
use std::path::Path;

use nctorus::axioms::{spectral_dimension, FitWindow};
use nctorus::cliffordcheck::{self, CliffordVerdict};
use nctorus::equivalence::{orbits, OrbitPartition};
use nctorus::triple::solve_c_space;
use nctorus::{assemble, ComplexMatrix};
use serde::{Deserialize, Serialize};

pub use config::{ResolvedConfig, RunConfig};
pub use verify::{cmd_verify, shift_set, RunReport, SpectrumSummary};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed input or unusable arguments: exit code 2.
    #[error("{0}")]
    Input(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl From<nctorus::Error> for CliError {
    fn from(e: nctorus::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Process exit status: `0` pass, `1` verified failure, `2` input or usage error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Usage = 2,
}

impl Status {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }
}

/// Shortest round-trip decimal, in exponent form outside `[1e-4, 1e16)`,
/// with `-0` printed as `0`.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 {
        "0".to_string()
    } else if a.is_finite() && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumOutput {
    pub summary: SpectrumSummary,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
}

/// Full Dirac spectrum of the configured triple, sorted ascending.
pub fn cmd_spectrum(config: &ResolvedConfig) -> Result<SpectrumOutput, CliError> {
    let triple = assemble(config.triple_config()?)?;
    let mut eigenvalues = triple.full_spectrum();
    eigenvalues.sort_by(f64::total_cmp);
    let summary = SpectrumSummary::from_sorted(
        &eigenvalues,
        spectral_dimension(&triple, FitWindow::default()).ok(),
    );
    Ok(SpectrumOutput {
        summary,
        eigenvalues,
    })
}

/// One eigenvalue per line.
pub fn spectrum_csv(eigenvalues: &[f64]) -> String {
    let mut out = String::with_capacity(eigenvalues.len() * 20);
    for l in eigenvalues {
        out.push_str(&format_f64(*l));
        out.push('\n');
    }
    out
}

pub fn cmd_orbit(n: usize) -> Result<OrbitPartition, CliError> {
    if n < 2 {
        return Err(CliError::Input(format!(
            "orbit: n must be at least 2, got {n}"
        )));
    }
    Ok(orbits(n)?)
}

pub fn orbit_text(p: &OrbitPartition) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "n = {}, group {}, {} orbit(s)",
        p.n,
        p.group,
        p.orbits.len()
    )
    .unwrap();
    for o in &p.orbits {
        let labels: Vec<String> = o.iter().map(|s| s.label()).collect();
        writeln!(out, "  {{{}}}", labels.join(", ")).unwrap();
    }
    for a in &p.arrows {
        writeln!(
            out,
            "  {} -> {} via {}",
            a.from.label(),
            a.to.label(),
            a.word
        )
        .unwrap();
    }
    out
}

/// Matrix file contents: a list of matrices, each a list of rows of `[re, im]`
/// pairs, optionally wrapped as `{"matrices": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Bare(Vec<Vec<Vec<config::Entry>>>),
    Wrapped {
        matrices: Vec<Vec<Vec<config::Entry>>>,
    },
}

pub fn read_matrices(path: &Path) -> Result<Vec<ComplexMatrix>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let parsed: MatrixFile = serde_json::from_str(&text).map_err(|_| {
        CliError::Input(format!(
            "{}: expected a list of matrices with [re, im] entries",
            path.display()
        ))
    })?;
    let raw = match parsed {
        MatrixFile::Bare(m) | MatrixFile::Wrapped { matrices: m } => m,
    };
    if raw.is_empty() {
        return Err(CliError::Input(format!("{}: no matrices", path.display())));
    }
    for (k, m) in raw.iter().enumerate() {
        let d = m.len();
        if d == 0 || m.iter().any(|row| row.len() != d) || d != raw[0].len() {
            return Err(CliError::Input(format!(
                "{}: matrix {k} is not square of the common size",
                path.display()
            )));
        }
        if m.iter().flatten().flatten().any(|v| !v.is_finite()) {
            return Err(CliError::Input(format!(
                "{}: matrix {k} has a non-finite entry",
                path.display()
            )));
        }
    }
    Ok(raw.iter().map(|m| config::matrix_from_entries(m)).collect())
}

pub fn cmd_clifford_check(
    matrices: &[ComplexMatrix],
    seed: u64,
) -> Result<CliffordVerdict, CliError> {
    Ok(cliffordcheck::check_with(
        matrices,
        nctorus::axioms::DEFAULT_PENCIL_SAMPLES,
        seed,
    )?)
}

pub fn verdict_text(v: &CliffordVerdict) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| writeln!(out, "{k:<22} {v}").unwrap();
    line(
        "generators",
        format!("{} of size {}", v.generator_count, v.size),
    );
    line(
        "hermitian",
        format!(
            "{} (defect {})",
            v.is_hermitian,
            format_f64(v.hermitian_defect)
        ),
    );
    line(
        "pencil_nonsingular",
        format!(
            "{} (min singular value {})",
            v.pencil_nonsingular,
            format_f64(v.min_singular_value)
        ),
    );
    line(
        "antisym_scalar",
        format!(
            "{} (lambda {} + {}i, residual {})",
            v.antisym_scalar,
            format_f64(v.lambda.re),
            format_f64(v.lambda.im),
            format_f64(v.antisym_residual)
        ),
    );
    line(
        "anticommutator_form",
        format!(
            "{} (residual {})",
            v.anticommutator_form,
            format_f64(v.anticommutator_residual)
        ),
    );
    if let Some(g) = &v.gram {
        for row in g {
            let cells: Vec<String> = row.iter().map(|x| format_f64(*x)).collect();
            line("  gram", cells.join(" "));
        }
    }
    line("overall", v.overall.to_string());
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CSpaceOutput {
    pub n: usize,
    pub dimension: usize,
    /// Orthonormal basis for `Re tr(X†Y)`, entries as `[re, im]`.
    pub basis: Vec<Vec<Vec<config::Entry>>>,
}

pub fn cmd_c_space(n: usize) -> Result<CSpaceOutput, CliError> {
    let s = solve_c_space(n)?;
    Ok(CSpaceOutput {
        n,
        dimension: s.dimension,
        basis: s.basis.iter().map(config::matrix_to_entries).collect(),
    })
}

pub fn c_space_text(c: &CSpaceOutput) -> String {
    let mut out = String::new();
    writeln!(out, "n = {}: {} real dimension(s)", c.n, c.dimension).unwrap();
    for (k, b) in c.basis.iter().enumerate() {
        writeln!(out, "basis[{k}]").unwrap();
        for row in b {
            let cells: Vec<String> = row
                .iter()
                .map(|[re, im]| {
                    let im = format_f64(*im);
                    let sign = if im.starts_with('-') { "" } else { "+" };
                    format!("{}{sign}{im}i", format_f64(*re))
                })
                .collect();
            writeln!(out, "  {}", cells.join("  ")).unwrap();
        }
    }
    out
}
