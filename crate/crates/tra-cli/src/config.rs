use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::PathBuf;
use tra::physics::PotentialCase;
use tra::tra::{Branch, Equation, OdeParams, Scenario};

pub const DEFAULT_TRUNCATION: usize = 60;
pub const TRUNCATION_ENV: &str = "TRA_DEFAULT_TRUNCATION";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Spectrum,
    Phaseshift,
    Wavefunction,
    Polytable,
    Verify,
    Match,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseName {
    Coulomb,
    Oscillator,
    Morse,
    PoschlTeller,
    Scarf,
    Eckart,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyName {
    MeixnerPollaczek,
    Meixner,
    Krawtchouk,
    ContinuousDualHahn,
    DualHahn,
    Wilson,
    Racah,
    NewH,
    NewG,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquationName {
    Laguerre,
    Jacobi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioName {
    A7a,
    A7b,
    B12a,
    B12b,
    B12c,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchName {
    Plus,
    Minus,
}

/// One job. Every field is optional so a config file and the command line
/// can each supply part of it; flags win over the file.
#[derive(Clone, Debug, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// Command to run (may come from --config instead).
    #[arg(value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandKind>,

    /// JSON job file; a previous JSON output is accepted too.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseName>,
    /// Nuclear charge (Coulomb).
    #[arg(long = "Z")]
    #[serde(rename = "Z", skip_serializing_if = "Option::is_none")]
    pub charge: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Box size of the Scarf well; sets lambda = pi/L.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v1: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v2: Option<f64>,
    /// Potential strength A (Poschl-Teller, Scarf, Eckart).
    #[arg(long = "A", allow_negative_numbers = true)]
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub strength_a: Option<f64>,
    /// Potential strength B (Poschl-Teller, Scarf, Eckart).
    #[arg(long = "B", allow_negative_numbers = true)]
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub strength_b: Option<f64>,
    /// Free basis index (nu for Morse, mu for the Jacobi cases).
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free: Option<f64>,

    #[arg(long = "m-max")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    /// Series length for infinite sums; default from TRA_DEFAULT_TRUNCATION or 60.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// Relative tolerance for spectrum and verify checks.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,

    /// Energies, comma separated.
    #[arg(long = "energy", value_delimiter = ',', allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energies: Option<Vec<f64>>,
    #[arg(long = "e-min", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_min: Option<f64>,
    #[arg(long = "e-max", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_max: Option<f64>,
    /// Number of grid points for energy or radial grids.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    /// Bound level for wavefunction.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[arg(long = "r-min", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_min: Option<f64>,
    #[arg(long = "r-max", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<f64>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyName>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// Wilson tau squared (negative for the mixed case).
    #[arg(long = "tau-sq", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_sq: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Size N of a finite family.
    #[arg(long = "N")]
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    /// Polynomial argument (for NewH/NewG: the parameter z).
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    /// Recursion variable for NewH/NewG; defaults to cos(theta) and (1+tau)/(2 sqrt tau).
    #[arg(long, allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[arg(long = "n-max")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equation: Option<EquationName>,
    #[arg(long = "ode-a", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ode_a: Option<f64>,
    #[arg(long = "ode-b", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ode_b: Option<f64>,
    #[arg(long = "a-plus", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_plus: Option<f64>,
    #[arg(long = "a-minus", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_minus: Option<f64>,
    #[arg(long = "a-zero", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_zero: Option<f64>,
    #[arg(long = "a-one", allow_negative_numbers = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_one: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioName>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<BranchName>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Output file; not echoed so reruns compare byte for byte.
    #[arg(long)]
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
}

fn missing(what: &str) -> String {
    format!("missing --{what}")
}

impl JobConfig {
    /// File values overlaid by the flags that were given.
    pub fn merged(file: Value, flags: &JobConfig) -> Result<JobConfig, String> {
        let file = match file {
            Value::Object(mut m) if m.contains_key("rows") && m.contains_key("config") => m.remove("config").unwrap_or(Value::Null),
            other => other,
        };
        let Value::Object(mut base) = file else {
            return Err("config file must hold a JSON object".into());
        };
        let Value::Object(over) = serde_json::to_value(flags).map_err(|e| e.to_string())? else {
            unreachable!("JobConfig serializes to an object")
        };
        base.extend(over);
        let file_out = base.remove("out").and_then(|v| v.as_str().map(PathBuf::from));
        let mut cfg: JobConfig = serde_json::from_value(Value::Object(base)).map_err(|e| format!("config: {e}"))?;
        cfg.out = flags.out.clone().or(file_out);
        Ok(cfg)
    }

    /// Fills the truncation from the environment or the built-in default.
    pub fn resolve_defaults(&mut self) -> Result<(), String> {
        if self.truncation.is_none() {
            self.truncation = Some(match std::env::var(TRUNCATION_ENV) {
                Ok(v) => v.trim().parse().map_err(|_| format!("{TRUNCATION_ENV}={v} is not a count"))?,
                Err(_) => DEFAULT_TRUNCATION,
            });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), String> {
        let raw = self.equation.is_some() || self.a_zero.is_some() || self.a_plus.is_some() || self.a_minus.is_some();
        if self.case.is_some() && raw {
            return Err("give either --case or raw ODE parameters, not both".into());
        }
        if let Some(e) = &self.energies {
            if e.is_empty() || e.windows(2).any(|w| !(w[1] > w[0])) {
                return Err("--energy values must be strictly increasing".into());
            }
        }
        if let Some(p) = self.points {
            if p < 2 {
                return Err("--points must be at least 2".into());
            }
        }
        for (lo, hi, what) in [(self.e_min, self.e_max, "energy"), (self.r_min, self.r_max, "radial")] {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if !(hi > lo) {
                    return Err(format!("{what} grid must be increasing"));
                }
            }
        }
        Ok(())
    }

    pub fn truncation(&self) -> usize {
        self.truncation.unwrap_or(DEFAULT_TRUNCATION)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn has_case(&self) -> bool {
        self.case.is_some()
    }

    /// Potential case; `lambda` overrides the configured one when given.
    pub fn potential(&self, lambda: Option<f64>) -> Result<PotentialCase, String> {
        let name = self.case.ok_or_else(|| missing("case"))?;
        let lam = lambda.or(self.lambda).unwrap_or(1.0);
        let a = || self.strength_a.ok_or_else(|| missing("A"));
        let b = || self.strength_b.ok_or_else(|| missing("B"));
        Ok(match name {
            CaseName::Coulomb => PotentialCase::Coulomb { z: self.charge.unwrap_or(1.0), ell: self.ell.unwrap_or(0), lambda: lam },
            CaseName::Oscillator => PotentialCase::IsotropicOscillator { omega: self.omega.unwrap_or(1.0), ell: self.ell.unwrap_or(0), lambda: lam },
            CaseName::Morse => PotentialCase::Morse { v1: self.v1.ok_or_else(|| missing("v1"))?, v2: self.v2, lambda: lam, nu: self.free },
            CaseName::PoschlTeller => PotentialCase::PoschlTeller { a: a()?, b: b()?, lambda: lam, mu: self.free },
            CaseName::Scarf => match self.width {
                Some(w) => PotentialCase::scarf_with_width(a()?, b()?, w, self.free),
                None => PotentialCase::Scarf { a: a()?, b: b()?, lambda: lam, mu: self.free },
            },
            CaseName::Eckart => PotentialCase::Eckart { a: a()?, b: b()?, lambda: lam, mu: self.free },
        })
    }

    pub fn ode_params(&self) -> Result<(OdeParams, Scenario, Branch, Option<f64>), String> {
        let eq = self.equation.ok_or_else(|| missing("equation"))?;
        let get = |v: Option<f64>, what: &str| v.ok_or_else(|| missing(what));
        let (a, b) = (get(self.ode_a, "ode-a")?, get(self.ode_b, "ode-b")?);
        let (ap, am, a0) = (get(self.a_plus, "a-plus")?, get(self.a_minus, "a-minus")?, get(self.a_zero, "a-zero")?);
        let p = match eq {
            EquationName::Laguerre => OdeParams::laguerre(a, b, ap, am, a0),
            EquationName::Jacobi => OdeParams::jacobi(a, b, ap, am, self.a_one.unwrap_or(0.0), a0),
        };
        let scenario = match self.scenario {
            Some(ScenarioName::A7a) => Scenario::A7a,
            Some(ScenarioName::A7b) => Scenario::A7b,
            Some(ScenarioName::B12a) => Scenario::B12a,
            Some(ScenarioName::B12b) => Scenario::B12b,
            Some(ScenarioName::B12c) => Scenario::B12c,
            None => match (p.equation, self.a_one.unwrap_or(0.0) != 0.0) {
                (Equation::Laguerre, _) => Scenario::A7a,
                (Equation::Jacobi, true) => Scenario::B12a,
                (Equation::Jacobi, false) => Scenario::B12c,
            },
        };
        let branch = match self.branch {
            Some(BranchName::Minus) => Branch::Minus,
            _ => Branch::Plus,
        };
        Ok((p, scenario, branch, self.free))
    }
}
