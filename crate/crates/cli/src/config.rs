//! Run configuration: JSON schema, defaults and validation.

use std::collections::BTreeMap;
use std::path::Path;

use nctorus::{Complex64, ComplexMatrix, TauMatrix, ThetaMatrix, TripleConfig};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_CUTOFF: usize = 4;

/// Default Euclidean radius of the order-check shifts. The pair count grows
/// like the square of the ball size, so larger `n` uses unit shifts.
pub fn default_shift_radius(n: usize) -> f64 {
    if n <= 3 {
        2.0
    } else {
        1.0
    }
}

/// Names accepted by `--tol` and the `tolerances` object.
pub const TOLERANCE_NAMES: [&str; 7] = [
    "signs",
    "equivariance",
    "zeroth_order",
    "first_order",
    "hochschild",
    "pencil",
    "c_membership",
];

/// A complex entry written as `[re, im]`.
pub type Entry = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    /// Strict upper triangle of `θ`, row by row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<f64>>,
    /// Row-major `n×n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<f64>>,
    #[serde(
        default,
        rename = "C",
        alias = "c",
        skip_serializing_if = "Option::is_none"
    )]
    pub c: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    /// Euclidean radius of the shifts `x, y` used by the order checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// `RunConfig` with every default filled in and every shape checked.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub n: usize,
    pub theta: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub tau: Vec<f64>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<Vec<Entry>>>,
    pub cutoff: usize,
    pub shift_radius: f64,
    pub tolerances: BTreeMap<String, f64>,
    pub seed: u64,
}

/// `frac(√p)` over the first `count` primes.
pub fn default_theta(count: usize) -> Vec<f64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut k = 2u64;
    while primes.len() < count {
        if primes.iter().all(|p| k % p != 0) {
            primes.push(k);
        }
        k += 1;
    }
    primes.iter().map(|&p| (p as f64).sqrt().fract()).collect()
}

fn field(name: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{name}: {msg}"))
}

/// Parses `NAME=VALUE`.
pub fn parse_tolerance(arg: &str) -> Result<(String, f64), CliError> {
    let (name, value) = arg
        .split_once('=')
        .ok_or_else(|| field("--tol", format!("expected NAME=VALUE, got {arg:?}")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| field("--tol", format!("{value:?} is not a number")))?;
    Ok((name.trim().to_string(), value))
}

fn check_tolerance(name: &str, value: f64) -> Result<(), CliError> {
    if !TOLERANCE_NAMES.contains(&name) {
        return Err(field(
            "tolerances",
            format!(
                "unknown name {name:?}; expected one of {}",
                TOLERANCE_NAMES.join(", ")
            ),
        ));
    }
    if !(value.is_finite() && value > 0.0) {
        return Err(field(
            &format!("tolerances.{name}"),
            format!("must be positive and finite, got {value}"),
        ));
    }
    Ok(())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn resolve(&self) -> Result<ResolvedConfig, CliError> {
        let n = self.n;
        if !(1..=nctorus::clifford::MAX_DIMENSION).contains(&n) {
            return Err(field(
                "n",
                format!(
                    "must be between 1 and {}, got {n}",
                    nctorus::clifford::MAX_DIMENSION
                ),
            ));
        }
        let pairs = n * (n - 1) / 2;
        let theta = self.theta.clone().unwrap_or_else(|| default_theta(pairs));
        if theta.len() != pairs {
            return Err(field(
                "theta",
                format!(
                    "expected {pairs} upper-triangle entries, got {}",
                    theta.len()
                ),
            ));
        }
        if let Some(i) = theta.iter().position(|t| !t.is_finite()) {
            return Err(field(&format!("theta[{i}]"), "must be finite"));
        }
        let epsilon = self.epsilon.clone().unwrap_or_else(|| vec![0.0; n]);
        if epsilon.len() != n {
            return Err(field(
                "epsilon",
                format!("expected {n} entries, got {}", epsilon.len()),
            ));
        }
        for (i, e) in epsilon.iter().enumerate() {
            if *e != 0.0 && *e != 0.5 {
                return Err(field(
                    &format!("epsilon[{i}]"),
                    format!("expected 0 or 0.5, got {e}"),
                ));
            }
        }
        let tau = self
            .tau
            .clone()
            .unwrap_or_else(|| TauMatrix::identity(n).entries().to_vec());
        if tau.len() != n * n {
            return Err(field(
                "tau",
                format!("expected {} row-major entries, got {}", n * n, tau.len()),
            ));
        }
        TauMatrix::from_row_major(n, &tau).map_err(|e| field("tau", e))?;
        if let Some(c) = &self.c {
            let d = 1usize << (n / 2);
            if c.len() != d || c.iter().any(|row| row.len() != d) {
                return Err(field(
                    "C",
                    format!("expected a {d}×{d} matrix of [re, im] pairs"),
                ));
            }
        }
        let cutoff = self.cutoff.unwrap_or(DEFAULT_CUTOFF);
        if cutoff == 0 {
            return Err(field("cutoff", "must be at least 1"));
        }
        let shift_radius = self.shift_radius.unwrap_or_else(|| default_shift_radius(n));
        if !(shift_radius.is_finite() && shift_radius >= 0.0) {
            return Err(field(
                "shift_radius",
                format!("must be non-negative, got {shift_radius}"),
            ));
        }
        for (name, value) in &self.tolerances {
            check_tolerance(name, *value)?;
        }
        Ok(ResolvedConfig {
            n,
            theta,
            epsilon,
            tau,
            c: self.c.clone(),
            cutoff,
            shift_radius,
            tolerances: self.tolerances.clone(),
            seed: self.seed.unwrap_or(0),
        })
    }
}

impl ResolvedConfig {
    /// Applies command-line overrides, which take precedence over the file.
    pub fn with_overrides(
        mut self,
        cutoff: Option<usize>,
        seed: Option<u64>,
        tols: &[(String, f64)],
    ) -> Result<Self, CliError> {
        if let Some(m) = cutoff {
            if m == 0 {
                return Err(field("--cutoff", "must be at least 1"));
            }
            self.cutoff = m;
        }
        if let Some(s) = seed {
            self.seed = s;
        }
        for (name, value) in tols {
            check_tolerance(name, *value)?;
            self.tolerances.insert(name.clone(), *value);
        }
        Ok(self)
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    pub fn c_matrix(&self) -> Option<ComplexMatrix> {
        self.c.as_ref().map(|rows| matrix_from_entries(rows))
    }

    pub fn triple_config(&self) -> Result<TripleConfig, CliError> {
        let n = self.n;
        Ok(TripleConfig {
            n,
            theta: ThetaMatrix::from_upper(n, &self.theta).map_err(|e| field("theta", e))?,
            epsilon: self.epsilon.clone(),
            tau: TauMatrix::from_row_major(n, &self.tau).map_err(|e| field("tau", e))?,
            c: self.c_matrix(),
            cutoff: self.cutoff,
        })
    }
}

pub fn matrix_from_entries(rows: &[Vec<Entry>]) -> ComplexMatrix {
    let data: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    ComplexMatrix::from_rows(&data)
}

pub fn matrix_to_entries(m: &ComplexMatrix) -> Vec<Vec<Entry>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<ResolvedConfig, CliError> {
        serde_json::from_str::<RunConfig>(s)
            .map_err(|e| CliError::Input(e.to_string()))?
            .resolve()
    }

    #[test]
    fn defaults_fill_in() {
        let r = parse(r#"{"n": 2}"#).unwrap();
        assert_eq!(r.theta, vec![std::f64::consts::SQRT_2 - 1.0]);
        assert_eq!(r.epsilon, vec![0.0, 0.0]);
        assert_eq!(r.tau, vec![1.0, 0.0, 0.0, 1.0]);
        assert_eq!((r.cutoff, r.seed, r.shift_radius), (4, 0, 2.0));
        assert_eq!(parse(r#"{"n": 4}"#).unwrap().shift_radius, 1.0);
        assert_eq!(default_theta(3).len(), 3);
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse(r#"{"n": 2, "epsilon": [0.3, 0]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("epsilon[0]"), "{e}");
        let e = parse(r#"{"n": 2, "theta": [0.1, 0.2]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("theta"), "{e}");
        let e = parse(r#"{"n": 2, "tau": [1, 1, 1, 1]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("tau"), "{e}");
        let e = parse(r#"{"n": 3, "C": [[[1, 0]]]}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains('C'), "{e}");
        let e = parse(r#"{"n": 2, "tolerances": {"bogus": 1e-3}}"#)
            .unwrap_err()
            .to_string();
        assert!(e.contains("bogus"), "{e}");
        assert!(parse(r#"{"n": 2, "extra": 1}"#).is_err());
        assert!(parse(r#"{"n": 0}"#).is_err());
    }

    #[test]
    fn tolerance_flags() {
        assert_eq!(
            parse_tolerance("hochschild=1e-8").unwrap(),
            ("hochschild".to_string(), 1e-8)
        );
        assert!(parse_tolerance("hochschild").is_err());
        assert!(parse_tolerance("hochschild=abc").is_err());
        let r = parse(r#"{"n": 1}"#).unwrap();
        let r = r
            .with_overrides(Some(7), Some(9), &[("pencil".into(), 1e-3)])
            .unwrap();
        assert_eq!((r.cutoff, r.seed, r.tolerance("pencil", 0.0)), (7, 9, 1e-3));
        assert!(r
            .clone()
            .with_overrides(None, None, &[("pencil".into(), -1.0)])
            .is_err());
    }

    #[test]
    fn lowercase_c_is_accepted() {
        let r = parse(r#"{"n": 3, "c": [[[2, 0], [0, 0]], [[0, 0], [2, 0]]]}"#).unwrap();
        assert_eq!(
            r.c_matrix().unwrap(),
            ComplexMatrix::identity(2).scale_real(2.0)
        );
    }
}
