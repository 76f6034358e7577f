use crate::config::{CaseName, CommandKind, FamilyName, JobConfig};
use crate::output::{Cell, Diagnostic, Table};
use serde_json::Value;
use std::f64::consts::PI;
use tra::ortho_polys::{family_coeffs, PolyFamily};
use tra::physics::{default_mesh, fd_oracle, PotentialCase};
use tra::recurrence::run_recursion;
use tra::solver::{ode_residual, SeriesSolution};
use tra::tra::*;
use tra::TraError;

pub enum Failure {
    Config(String),
    Domain(TraError),
}

impl From<TraError> for Failure {
    fn from(e: TraError) -> Self {
        Failure::Domain(e)
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Config(e)
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "ConfigError: {m}"),
            Failure::Domain(e) => write!(f, "{e}"),
        }
    }
}

type Out = Result<Table, Failure>;

/// Rows plus whether a verification check failed.
pub fn run(cfg: &JobConfig) -> Result<(Table, bool), Failure> {
    let command = cfg.command.ok_or_else(|| "missing command".to_string())?;
    let table = match command {
        CommandKind::Spectrum => spectrum(cfg)?,
        CommandKind::Phaseshift => phaseshift(cfg)?,
        CommandKind::Wavefunction => wavefunction(cfg)?,
        CommandKind::Polytable => polytable(cfg)?,
        CommandKind::Match => match_cmd(cfg)?,
        CommandKind::Verify => {
            let t = verify(cfg)?;
            let failed = t.rows.iter().any(|r| r.last() == Some(&Cell::Int(0)));
            return Ok((t, failed));
        }
    };
    Ok((table, false))
}

fn close_enough(diff: f64, energy: f64, tol: f64) -> bool {
    diff <= tol * energy.abs().max(0.1)
}

fn spectrum(cfg: &JobConfig) -> Out {
    let case = cfg.potential(None)?;
    let m_max = cfg.m_max.unwrap_or(2);
    let levels = case.bound_spectrum(m_max)?;
    let tol = cfg.tolerance.unwrap_or(1e-3);
    let mut t = Table::new(&["m", "E", "E_oracle", "abs_diff"]);
    if levels.len() < m_max + 1 {
        t.diagnostics.push(Diagnostic::info(format!("{} has {} bound levels", case.name(), levels.len())));
    }
    let oracle = default_mesh(&case, levels.len()).and_then(|mesh| fd_oracle(&case, &mesh, levels.len()));
    let oracle = match oracle {
        Ok(v) => v,
        Err(e) => {
            t.diagnostics.push(Diagnostic::warning(format!("finite-difference oracle unavailable: {e}")));
            vec![f64::NAN; levels.len()]
        }
    };
    for (lv, fd) in levels.iter().zip(oracle) {
        let diff = (lv.energy - fd).abs();
        if !close_enough(diff, lv.energy, tol) {
            t.diagnostics.push(Diagnostic::warning(format!("level {} differs from the oracle by {diff:e}", lv.m)));
        }
        t.push(vec![lv.m.into(), lv.energy.into(), fd.into(), diff.into()]);
    }
    Ok(t)
}

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

fn energies(cfg: &JobConfig) -> Result<Vec<f64>, Failure> {
    if let Some(e) = &cfg.energies {
        return Ok(e.clone());
    }
    match (cfg.e_min, cfg.e_max) {
        (Some(lo), Some(hi)) => Ok(grid(lo, hi, cfg.points.unwrap_or(11))),
        _ => Err(Failure::Config("give --energy or --e-min and --e-max".into())),
    }
}

fn phaseshift(cfg: &JobConfig) -> Out {
    let case = cfg.potential(None)?;
    let mut t = Table::new(&["E", "delta"]);
    for e in energies(cfg)? {
        t.push(vec![e.into(), case.phase_shift(e)?.into()]);
    }
    Ok(t)
}

/// Basis scale that puts the Coulomb/oscillator Meixner parameter at 1/4.
fn quarter_lambda(case: &PotentialCase, level: usize) -> Option<f64> {
    match *case {
        PotentialCase::Coulomb { z, ell, .. } => {
            let n = (level + ell as usize + 1) as f64;
            Some(2.0 * z / (3.0 * n))
        }
        PotentialCase::IsotropicOscillator { omega, .. } => Some((4.0 * omega / 3.0).sqrt()),
        _ => None,
    }
}

fn default_radial_grid(case: &PotentialCase) -> (f64, f64) {
    let lam = case.lambda();
    match case {
        PotentialCase::Morse { .. } => (-5.0 / lam, 5.0 / lam),
        PotentialCase::Scarf { .. } => (0.02 * PI / lam, 0.98 * PI / lam),
        PotentialCase::Coulomb { .. } | PotentialCase::IsotropicOscillator { .. } => (0.1, 10.0),
        _ => (0.05 / lam, 8.0 / lam),
    }
}

fn wavefunction(cfg: &JobConfig) -> Out {
    let probe = cfg.potential(None)?;
    let level = cfg.level.unwrap_or(0);
    let scattering = cfg.energies.as_ref().and_then(|e| e.first().copied());
    let mut diags = Vec::new();
    let infinite = matches!(cfg.case, Some(CaseName::Coulomb | CaseName::Oscillator));
    let case = match (cfg.lambda, quarter_lambda(&probe, level)) {
        (None, Some(l)) if scattering.is_none() => {
            diags.push(Diagnostic::info(format!("basis scale lambda={l} (Meixner parameter 1/4)")));
            cfg.potential(Some(l))?
        }
        _ => probe,
    };
    let sol: SeriesSolution = match scattering {
        Some(e) => {
            diags.push(Diagnostic::info("continuum series converge conditionally; increase --truncation to check stability"));
            case.scattering_state(e, cfg.truncation())?
        }
        None if infinite => case.bound_state(level, cfg.truncation())?,
        None => {
            diags.push(Diagnostic::info("terminating series, unnormalized"));
            case.bound_state_terminating(level)?
        }
    };
    let (lo, hi) = default_radial_grid(&case);
    let (lo, hi) = (cfg.r_min.unwrap_or(lo), cfg.r_max.unwrap_or(hi));
    let mut t = Table::new(&["r", "x", "psi"]);
    t.diagnostics = diags;
    for r in grid(lo, hi, cfg.points.unwrap_or(41)) {
        t.push(vec![r.into(), case.coordinate(r).into(), case.wavefunction(&sol, r)?.into()]);
    }
    Ok(t)
}

fn need(v: Option<f64>, what: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::Config(format!("missing --{what}")))
}

fn poly_family(cfg: &JobConfig) -> Result<PolyFamily, Failure> {
    let name = cfg.family.ok_or_else(|| Failure::Config("missing --family".into()))?;
    // Family parameter mu is (nu+1)/2 when only nu is given.
    let mu = || cfg.mu.or(cfg.nu.map(|nu| 0.5 * (nu + 1.0))).ok_or_else(|| Failure::Config("missing --mu or --nu".into()));
    let size = || cfg.size.ok_or_else(|| Failure::Config("missing --N".into()));
    Ok(match name {
        FamilyName::MeixnerPollaczek => PolyFamily::MeixnerPollaczek { mu: mu()?, theta: need(cfg.theta, "theta")? },
        FamilyName::Meixner => PolyFamily::Meixner { mu: mu()?, tau: need(cfg.tau, "tau")? },
        FamilyName::Krawtchouk => PolyFamily::Krawtchouk { n: size()?, tau: need(cfg.tau, "tau")? },
        FamilyName::ContinuousDualHahn => PolyFamily::ContinuousDualHahn { tau: need(cfg.tau, "tau")?, a: need(cfg.alpha, "alpha")?, b: need(cfg.beta, "beta")? },
        FamilyName::DualHahn => PolyFamily::DualHahn { n: size()?, tau: need(cfg.tau, "tau")?, sigma: need(cfg.sigma, "sigma")? },
        FamilyName::Wilson => PolyFamily::wilson_symmetric(need(cfg.sigma, "sigma")?, need(cfg.tau_sq, "tau-sq")?, need(cfg.gamma, "gamma")?),
        FamilyName::Racah => PolyFamily::Racah { n: size()?, alpha: need(cfg.alpha, "alpha")?, beta: need(cfg.beta, "beta")?, gamma: need(cfg.gamma, "gamma")? },
        FamilyName::NewH => PolyFamily::NewH {
            mu: need(cfg.mu, "mu")?,
            nu: need(cfg.nu, "nu")?,
            theta: need(cfg.theta, "theta")?,
            sigma: need(cfg.sigma, "sigma")?,
            z: need(cfg.z, "z")?,
        },
        FamilyName::NewG => PolyFamily::NewG {
            mu: need(cfg.mu, "mu")?,
            nu: need(cfg.nu, "nu")?,
            tau: need(cfg.tau, "tau")?,
            sigma: need(cfg.sigma, "sigma")?,
            z: need(cfg.z, "z")?,
        },
    })
}

fn polytable(cfg: &JobConfig) -> Out {
    let family = poly_family(cfg)?;
    let n_max = cfg.n_max.unwrap_or(10);
    if let Some(big_n) = family.size() {
        if n_max > big_n {
            return Err(TraError::IndexOutOfValidity(format!("{} has degrees 0..={big_n}", family.name())).into());
        }
    }
    let x = match family {
        PolyFamily::NewH { theta, .. } => cfg.x.unwrap_or(theta.cos()),
        PolyFamily::NewG { tau, .. } => cfg.x.unwrap_or((1.0 + tau) / (2.0 * tau.sqrt())),
        _ => family.recursion_variable(need(cfg.z, "z")?),
    };
    let seq = run_recursion(&family_coeffs(&family, n_max)?, x, n_max)?;
    let mut t = Table::new(&["n", "P_n"]);
    for (n, v) in seq.values.into_iter().enumerate() {
        t.push(vec![n.into(), v.into()]);
    }
    Ok(t)
}

fn push_fields(t: &mut Table, prefix: &str, v: &Value) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                push_fields(t, &key, v);
            }
        }
        Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number) => {
            push_fields(t, &format!("{prefix}.re"), &a[0]);
            push_fields(t, &format!("{prefix}.im"), &a[1]);
        }
        Value::Number(n) => t.push(vec![prefix.into(), n.as_f64().unwrap_or(f64::NAN).into()]),
        Value::String(s) => t.push(vec![prefix.into(), s.as_str().into()]),
        Value::Null => t.push(vec![prefix.into(), "none".into()]),
        other => t.push(vec![prefix.into(), other.to_string().into()]),
    }
}

fn match_cmd(cfg: &JobConfig) -> Out {
    let m = if cfg.has_case() {
        let e = need(cfg.energies.as_ref().and_then(|e| e.first().copied()), "energy")?;
        cfg.potential(None)?.match_at(e)?
    } else {
        let (p, scenario, branch, free) = cfg.ode_params()?;
        tra::solver::match_family(&p, scenario, branch, free)?
    };
    let mut t = Table::new(&["key", "value"]);
    t.push(vec!["family".into(), m.family.name().into()]);
    t.push(vec!["family_value".into(), m.family_value().into()]);
    if let PolyFamily::MeixnerPollaczek { theta, .. } = m.family {
        t.push(vec!["cos_theta".into(), theta.cos().into()]);
    }
    let fam = serde_json::to_value(&m.family).expect("family serializes");
    push_fields(&mut t, "param", &fam);
    let kind = serde_json::to_value(m.spectrum_kind).expect("kind serializes");
    push_fields(&mut t, "spectrum", &kind);
    t.push(vec!["formal".into(), m.formal.into()]);
    t.push(vec!["basis.alpha".into(), m.spec.alpha.into()]);
    t.push(vec!["basis.beta".into(), m.spec.beta.into()]);
    if let Some(mu) = m.spec.mu {
        t.push(vec!["basis.mu".into(), mu.into()]);
    }
    t.push(vec!["basis.nu".into(), m.spec.nu.into()]);
    t.push(vec!["map.scale".into(), m.spectral_map.scale.into()]);
    t.push(vec!["map.offset".into(), m.spectral_map.offset.into()]);
    Ok(t)
}

fn check(t: &mut Table, name: String, value: f64, tol: f64) {
    let pass = value.is_finite() && value <= tol;
    t.push(vec![name.into(), value.into(), tol.into(), pass.into()]);
}

fn verify(cfg: &JobConfig) -> Out {
    let mut t = Table::new(&["check", "value", "tolerance", "pass"]);
    if cfg.has_case() {
        verify_case(cfg, &mut t)?;
    } else {
        verify_recursions(&mut t)?;
    }
    Ok(t)
}

fn verify_case(cfg: &JobConfig, t: &mut Table) -> Result<(), Failure> {
    let case = cfg.potential(None)?;
    let tol = cfg.tolerance.unwrap_or(1e-3);
    let levels = case.bound_spectrum(cfg.m_max.unwrap_or(2))?;
    let fd = default_mesh(&case, levels.len()).and_then(|mesh| fd_oracle(&case, &mesh, levels.len()));
    for (i, lv) in levels.iter().enumerate() {
        let diff = match &fd {
            Ok(v) => (lv.energy - v[i]).abs() / lv.energy.abs().max(0.1),
            Err(_) => f64::NAN,
        };
        check(t, format!("level {} vs finite differences", lv.m), diff, tol);
    }
    if let Err(e) = &fd {
        t.diagnostics.push(Diagnostic::error(e.to_string()));
    }
    let lag: Vec<f64> = (1..=10).map(|i| 0.3 * i as f64).collect();
    let jac: Vec<f64> = (0..=12).map(|i| -0.9 + 0.15 * i as f64).collect();
    let infinite = matches!(cfg.case, Some(CaseName::Coulomb | CaseName::Oscillator));
    for lv in &levels {
        let (sol, res_tol) = if infinite {
            let scaled = cfg.potential(quarter_lambda(&case, lv.m))?;
            (scaled.bound_state_partial(lv.m, cfg.truncation()), 1e-5)
        } else {
            (case.bound_state_terminating(lv.m), 1e-8)
        };
        let value = match sol {
            Ok(s) => {
                let xs = if s.params.equation == Equation::Laguerre { &lag } else { &jac };
                ode_residual(&s.params, &s, xs).unwrap_or(f64::NAN)
            }
            Err(e) => {
                t.diagnostics.push(Diagnostic::error(e.to_string()));
                f64::NAN
            }
        };
        check(t, format!("level {} series residual", lv.m), value, res_tol);
    }
    Ok(())
}

fn verify_recursions(t: &mut Table) -> Result<(), Failure> {
    type PairFn = fn(&TraSystem) -> tra::Result<Pairing>;
    let cases: [(&str, OdeParams, Scenario, Branch, Option<f64>, PairFn); 8] = [
        ("MeixnerPollaczek", OdeParams::laguerre(0.3, 0.4, 1.2, -0.5, 0.7), Scenario::A7a, Branch::Plus, None, pair_meixner_pollaczek),
        ("Meixner", OdeParams::laguerre(0.2, 1.5, 0.1, -0.4, 0.9), Scenario::A7a, Branch::Plus, None, pair_meixner),
        ("Krawtchouk", OdeParams::laguerre(0.0, 0.3, 0.7, -72.0, 0.4), Scenario::A7a, Branch::Minus, None, pair_krawtchouk),
        ("ContinuousDualHahn", OdeParams::laguerre(0.5, 1.2, 0.11, 1.0, 0.4), Scenario::A7b, Branch::Plus, Some(0.8), pair_continuous_dual_hahn),
        ("DualHahn", OdeParams::laguerre(0.5, 1.2, 0.11, 1.0, 1.95), Scenario::A7b, Branch::Plus, Some(-17.0), pair_dual_hahn),
        ("NewH", OdeParams::jacobi(0.5, 0.7, -0.2, -0.3, 2.0, 0.5), Scenario::B12a, Branch::Plus, None, pair_new_h),
        ("Wilson", OdeParams::jacobi(1.0, 0.5, -0.3, 1.5, 0.0, 2.0), Scenario::B12c, Branch::Plus, Some(0.7), pair_wilson),
        ("Racah", OdeParams::jacobi(1.0, 0.5, -0.3, 1.5, 0.0, -1.0), Scenario::B12c, Branch::Plus, Some(-17.0), pair_racah),
    ];
    for (name, p, scenario, branch, free, pair) in cases {
        let spec = resolve_basis(&p, scenario, branch, free)?;
        let sys = TraSystem::new(&p, &spec)?;
        let pairing = pair(&sys)?;
        let mut gap = pairing.max_mismatch(&sys, 16);
        if !pairing.formal {
            gap = gap.max(pairing.max_t_mismatch(&sys, 16)?);
        }
        check(t, format!("{name} pairing"), gap, 1e-10);
    }
    let mut worst: f64 = 0.0;
    for i in 0..10 {
        for j in 0..10 {
            let (mu, nu) = (-4.7 + 0.97 * i as f64, -4.3 + 0.93 * j as f64);
            for (k, chi) in [-37.5, -3.1, 0.6, 12.9, 44.0].into_iter().enumerate() {
                if let Ok(r) = check_identity_52(mu, nu, chi, 4 * k + (i + j) % 4) {
                    worst = worst.max(r);
                }
            }
        }
    }
    check(t, "Jacobi identity on a 500-point lattice".into(), worst, 1e-11);
    Ok(())
}
