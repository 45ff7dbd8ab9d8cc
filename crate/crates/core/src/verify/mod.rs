//! Self-verification suites with a serializable report.
//!
//! Each suite is a list of [`Check`]s: a measured value, a fixed threshold
//! and the comparison between them. Thresholds here are absolute and do not
//! follow `VN_TOLERANCE_SCALE`; internal preconditions still do.

pub mod checks;
pub mod instances;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 20_240_917;
pub const RANDOM_TRIALS: usize = 50;
pub const EFFECTIVE_H_TRIALS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    /// Similarity form of the binary transformation, step by step.
    Theorem1,
    /// Shifted and rescaled solutions still solve the family equation.
    Theorem2,
    /// The three- and eight-level examples and their figure data.
    Examples,
    /// Eigenbasis reduction, the W equation and Jacobi `sn`.
    Elliptic,
    /// Conservation of `Tr rho^k` and the effective-Hamiltonian identity.
    Casimir,
}

impl Suite {
    pub const PARTS: [Suite; 5] = [
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::Examples,
        Suite::Elliptic,
        Suite::Casimir,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::Examples => "examples",
            Suite::Elliptic => "elliptic",
            Suite::Casimir => "casimir",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All]
            .into_iter()
            .chain(Suite::PARTS)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

/// Deliberate corruption used to confirm that a suite can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Adds `1e-6` to `P[0][1]` before the proof chain is evaluated.
    CorruptProjector,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub fault: Option<Fault>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "flag")]
    Flag,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub relation: Relation,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value, threshold, Relation::AtMost, value <= threshold)
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, value, threshold, Relation::AtLeast, value >= threshold)
    }

    pub fn flag(name: &str, ok: bool) -> Self {
        Self::new(name, f64::from(u8::from(ok)), 1.0, Relation::Flag, ok)
    }

    /// A check that could not be evaluated.
    pub fn errored(name: &str, err: &Error) -> Self {
        Self::flag(name, false).with_detail(err.to_string())
    }

    fn new(name: &str, value: f64, threshold: f64, relation: Relation, pass: bool) -> Self {
        Self {
            suite: String::new(),
            name: name.to_string(),
            value,
            threshold,
            relation,
            pass,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn in_suite(mut self, suite: Suite) -> Self {
        self.suite = suite.name().to_string();
        self
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        match self.relation {
            Relation::Flag => write!(f, "{verdict} {}", self.name)?,
            Relation::AtMost => write!(
                f,
                "{verdict} {}: {:.3e} <= {:.1e}",
                self.name, self.value, self.threshold
            )?,
            Relation::AtLeast => write!(
                f,
                "{verdict} {}: {:.3e} >= {:.1e}",
                self.name, self.value, self.threshold
            )?,
        }
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn collect<const N: usize>(label: &str, r: Result<[Check; N]>) -> Vec<Check> {
    match r {
        Ok(c) => c.into(),
        Err(e) => vec![Check::errored(label, &e)],
    }
}

fn collect_vec(label: &str, r: Result<Vec<Check>>) -> Vec<Check> {
    r.unwrap_or_else(|e| vec![Check::errored(label, &e)])
}

fn run_part(suite: Suite, opts: &VerifyOptions) -> Vec<Check> {
    use checks::*;
    let mut out = Vec::new();
    match suite {
        Suite::All => unreachable!("expanded by run_suite"),
        Suite::Theorem1 => {
            out.extend(collect_vec("fixture proof chains", theorem1_fixture_checks(opts.fault)));
            out.extend(collect(
                "random instances",
                theorem1_random_checks(opts.seed, RANDOM_TRIALS),
            ));
        }
        Suite::Theorem2 => out.extend(collect_vec(
            "shifted and rescaled solutions",
            theorem2_checks(opts.seed),
        )),
        Suite::Examples => {
            out.extend(collect(
                "3x3 equation residual",
                three_level_equation_residual().map(|c| [c]),
            ));
            out.extend(collect("3x3 spectrum", three_level_spectrum().map(|c| [c])));
            out.extend(collect("RK4 agreement", rk4_agreement()));
            out.extend(collect("envelopes", envelope_checks()));
            out.extend(collect("scattering fits", scattering_checks()));
            out.extend(collect("8x8 example", eight_level_checks()));
            out.extend(collect("Lax pairs", lax_pair_checks()));
        }
        Suite::Elliptic => {
            out.extend(collect("eigenbasis reduction", reduction_checks()));
            out.extend(collect("W equation", w_checks()));
            out.extend(collect("Jacobi sn", sn_checks()));
        }
        Suite::Casimir => {
            out.extend(collect_vec("Casimir drift", casimir_checks(opts.seed)));
            out.extend(collect(
                "effective Hamiltonian",
                effective_hamiltonian_check(opts.seed, EFFECTIVE_H_TRIALS).map(|c| [c]),
            ));
        }
    }
    out.into_iter().map(|c| c.in_suite(suite)).collect()
}

/// Runs `suite` (every part for [`Suite::All`]).
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> VerifyReport {
    let parts: Vec<Suite> = match suite {
        Suite::All => Suite::PARTS.to_vec(),
        s => vec![s],
    };
    let checks: Vec<Check> = parts.into_iter().flat_map(|s| run_part(s, opts)).collect();
    VerifyReport {
        suite,
        seed: opts.seed,
        fault: opts.fault,
        passed: checks.iter().all(|c| c.pass),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::All].into_iter().chain(Suite::PARTS) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("theorem3".parse::<Suite>().is_err());
    }

    #[test]
    fn relations() {
        assert!(Check::at_most("x", 1.0, 1.0).pass);
        assert!(!Check::at_most("x", f64::NAN, 1.0).pass);
        assert!(!Check::at_least("x", 7.9, 8.0).pass);
        assert!(!Check::flag("x", false).pass);
        let c = Check::at_most("residual", 2e-7, 1e-6).in_suite(Suite::Examples);
        assert_eq!(c.to_string(), "PASS residual: 2.000e-7 <= 1.0e-6");
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["relation"], "<=");
        assert_eq!(v["suite"], "examples");
        assert!(v.get("detail").is_none());
    }

    #[test]
    fn fault_fails_the_chain_and_report_serializes() {
        let opts = VerifyOptions {
            fault: Some(Fault::CorruptProjector),
            ..Default::default()
        };
        let report = run_suite(Suite::Theorem1, &opts);
        assert!(!report.passed);
        let first = report.failures().next().unwrap();
        assert_eq!(first.name, "3x3: z_mu P = (rho - mu A) P");
        let v = serde_json::to_value(&report).unwrap();
        assert_eq!(v["suite"], "theorem1");
        assert_eq!(v["fault"], "corrupt-projector");
    }
}
