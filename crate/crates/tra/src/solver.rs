//! Family matching for a given ODE, assembly of y(x) = Σ f_n φ_n(x), and
//! verification of assembled series against the ODE itself.

use crate::error::{Result, TraError};
use crate::ortho_polys::{basis_element, closed_form, family_coeffs, weight, PolyFamily};
use crate::recurrence::{run_recursion, DEFAULT_N_MAX};
use crate::special::{ln_gamma_signed, c};
use crate::tra::*;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default number of terms for non-terminating series.
pub const DEFAULT_TRUNCATION: usize = 60;
/// Relative width of the parameter-region boundaries reported as ambiguous.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// Tail size above which a bound-state series is considered truncated too early.
pub const TAIL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n")]
pub enum SpectrumKind {
    Continuous,
    DiscreteInfinite,
    DiscreteFinite(usize),
    Mixed(usize),
}

/// How f_n enters y(x): real, or multiplied by iⁿ (negative-index bases).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Twist {
    None,
    ImaginaryPowers,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub family: PolyFamily,
    pub params: OdeParams,
    pub spec: BasisSpec,
    pub system: TraSystem,
    pub spectral_map: SpectralMap,
    pub spectrum_kind: SpectrumKind,
    pub formal: bool,
    pub twist: Twist,
    pub branches: (Branch, Branch),
    pub free: Option<f64>,
}

impl MatchResult {
    /// Value of the family variable fixed by the ODE parameters.
    pub fn family_value(&self) -> f64 {
        self.spectral_map.family_value()
    }
}

fn near(x: f64, y: f64) -> bool {
    (x - y).abs() <= BOUNDARY_TOL * x.abs().max(y.abs()).max(1.0)
}

fn negative_integer(x: f64) -> Option<usize> {
    let n = -x - 1.0;
    (n >= 0.0 && (n - n.round()).abs() < 1e-12).then(|| n.round() as usize)
}

fn nonpositive_integer(x: f64) -> bool {
    x <= BOUNDARY_TOL && (x - x.round()).abs() <= BOUNDARY_TOL * x.abs().max(1.0)
}

fn no_family(e: TraError) -> TraError {
    match e {
        TraError::InvalidFamilyParams(m) => TraError::NoFamilyApplies(m),
        other => other,
    }
}

/// Picks the polynomial family whose parameter region contains `params`.
pub fn match_family(params: &OdeParams, scenario: Scenario, branch: Branch, free: Option<f64>) -> Result<MatchResult> {
    match_family_with(params, scenario, (branch, branch), free)
}

pub fn match_family_with(params: &OdeParams, scenario: Scenario, branches: (Branch, Branch), free: Option<f64>) -> Result<MatchResult> {
    let spec = resolve_basis_with(params, scenario, branches, free)?;
    let p = params;
    let build = |system: TraSystem, pairing: Pairing, kind: SpectrumKind| {
        let twist = if pairing.formal && system.formal_coeff_sq(0).1 < 0.0 { Twist::ImaginaryPowers } else { Twist::None };
        MatchResult {
            family: pairing.family,
            params: *p,
            spec,
            system,
            spectral_map: pairing.map,
            spectrum_kind: kind,
            formal: pairing.formal,
            twist,
            branches,
            free,
        }
    };
    match scenario {
        Scenario::A7a => {
            let d = 4.0 * p.a_plus - p.b * p.b;
            if let Some(n) = negative_integer(spec.nu).filter(|n| *n >= 1) {
                let sys = TraSystem::new(p, &spec)?;
                return Ok(build(sys, pair_krawtchouk(&sys)?, SpectrumKind::DiscreteFinite(n)));
            }
            if near(d, 0.0) || near(d, -1.0) {
                return Err(TraError::AmbiguousRegion(format!("4A+ - b^2 = {d} sits on a region boundary")));
            }
            if d > 0.0 {
                let sys = TraSystem::new(p, &spec)?;
                let pr = pair_meixner_pollaczek(&sys)?;
                pr.family.validate().map_err(no_family)?;
                Ok(build(sys, pr, SpectrumKind::Continuous))
            } else if d < -1.0 {
                let sys = TraSystem::new(p, &spec)?;
                let pr = pair_meixner(&sys)?;
                pr.family.validate().map_err(no_family)?;
                Ok(build(sys, pr, SpectrumKind::DiscreteInfinite))
            } else {
                Err(TraError::NoFamilyApplies(format!("b^2 - 1 < 4A+ < b^2 (4A+ - b^2 = {d})")))
            }
        }
        Scenario::A7b => {
            let sys = TraSystem::new(p, &spec)?;
            if let Some(n) = negative_integer(spec.nu) {
                return Ok(build(sys, pair_dual_hahn(&sys)?, SpectrumKind::DiscreteFinite(n)));
            }
            let tau = p.a_zero + 0.5 * (p.a * p.b + 1.0);
            if nonpositive_integer(tau) {
                return Err(TraError::AmbiguousRegion(format!("tau = {tau} is a non-positive integer")));
            }
            let pr = pair_continuous_dual_hahn(&sys)?;
            let kind = if tau > 0.0 { SpectrumKind::Continuous } else { SpectrumKind::Mixed((-tau).floor() as usize) };
            Ok(build(sys, pr, kind))
        }
        Scenario::B12a => {
            if p.a_one == 0.0 {
                return Err(TraError::NoFamilyApplies("B12a needs A1 != 0".into()));
            }
            let ratio = p.jacobi_g() / p.a_one;
            if near(ratio.abs(), 1.0) {
                return Err(TraError::AmbiguousRegion(format!("G/A1 = {ratio} sits on a region boundary")));
            }
            let sys = TraSystem::new(p, &spec)?;
            if ratio.abs() < 1.0 {
                Ok(build(sys, pair_new_h(&sys)?, SpectrumKind::Continuous))
            } else if ratio > 1.0 {
                Ok(build(sys, pair_new_g(&sys)?, SpectrumKind::DiscreteInfinite))
            } else {
                Err(TraError::NoFamilyApplies(format!("G/A1 = {ratio} < -1")))
            }
        }
        Scenario::B12b => {
            let sys = TraSystem::new(p, &spec)?;
            let (q, spec_c) = apply_b14(p, &spec)?;
            let swapped = match_b12c(&q, &spec_c)?;
            // Same z and s, opposite t: the family recursion is read with (−1)ⁿ.
            Ok(MatchResult { params: *p, spec, system: sys, branches, free, ..swapped })
        }
        Scenario::B12c => {
            let mut m = match_b12c(p, &spec)?;
            m.branches = branches;
            m.free = free;
            Ok(m)
        }
    }
}

fn match_b12c(p: &OdeParams, spec: &BasisSpec) -> Result<MatchResult> {
    let sys = TraSystem::new(p, spec)?;
    let g = p.jacobi_g();
    let mu = spec.mu.unwrap_or(0.0);
    let make = |pr: Pairing, kind| {
        let twist = if pr.formal && sys.formal_coeff_sq(0).1 < 0.0 { Twist::ImaginaryPowers } else { Twist::None };
        MatchResult {
            family: pr.family,
            params: *p,
            spec: *spec,
            system: sys,
            spectral_map: pr.map,
            spectrum_kind: kind,
            formal: pr.formal,
            twist,
            branches: (Branch::Plus, Branch::Plus),
            free: None,
        }
    };
    if let Some(n) = negative_integer(mu) {
        if g < 0.0 {
            return Ok(make(pair_racah(&sys)?, SpectrumKind::DiscreteFinite(n)));
        }
    }
    let sigma = 0.5 * (spec.nu + 1.0);
    let kind = if g >= 0.0 {
        SpectrumKind::Continuous
    } else {
        let lowest = sigma - (-g).sqrt();
        if nonpositive_integer(lowest) {
            return Err(TraError::AmbiguousRegion(format!("sigma - sqrt(-G) = {lowest} is a non-positive integer")));
        }
        if lowest > 0.0 {
            SpectrumKind::Continuous
        } else {
            SpectrumKind::Mixed((-lowest).floor() as usize)
        }
    };
    Ok(make(pair_wilson(&sys)?, kind))
}

/// Where to evaluate the family: a continuous value of its variable or a discrete index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SpectralArgument {
    Value(f64),
    Index(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesSolution {
    pub f: Vec<f64>,
    pub spec: BasisSpec,
    /// ODE parameters this series solves (the spectral combination follows the argument).
    pub params: OdeParams,
    pub truncation: usize,
    pub norm_factor: f64,
    /// False when the family's weight is unknown and p = 1 was used.
    pub normalized: bool,
    pub argument: SpectralArgument,
    pub twist: Twist,
}

impl SeriesSolution {
    pub fn norm_sq(&self) -> f64 {
        self.f.iter().map(|v| v * v).sum()
    }

    /// Σ iⁿ f_n φ_n(x) (the iⁿ only for twisted series).
    pub fn evaluate_complex(&self, x: f64) -> Result<Complex64> {
        let mut acc = c(0.0, 0.0);
        for (n, fn_) in self.f.iter().enumerate() {
            if *fn_ == 0.0 {
                continue;
            }
            let term = fn_ * basis_element(&self.spec, n, x)?;
            acc += match self.twist {
                Twist::None => c(term, 0.0),
                Twist::ImaginaryPowers => c(0.0, 1.0).powu(n as u32) * term,
            };
        }
        Ok(acc)
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if self.twist == Twist::ImaginaryPowers {
            return Err(TraError::RealityViolation("twisted series is complex-valued".into()));
        }
        Ok(self.evaluate_complex(x)?.re)
    }
}

/// ODE parameters whose spectral combination equals `raw`.
pub fn params_with_raw_value(sys: &TraSystem, raw: f64) -> OdeParams {
    let mut p = sys.params;
    let mu = sys.spec.mu.unwrap_or(0.0);
    let nu = sys.spec.nu;
    match sys.kind {
        RawKind::A8a => {
            let big_p = p.a_plus - 0.25 * p.b * p.b + 0.25;
            p.a_zero = -raw * big_p - 0.5 * p.a * p.b;
        }
        RawKind::A8b => p.a_minus = raw - 0.25 * (nu * nu - 1.0) + 0.25 * (p.a - 1.0).powi(2),
        RawKind::B13a => p.a_zero = raw * p.a_one + 0.25 * (p.a + p.b - 1.0).powi(2),
        RawKind::B13b => p.a_plus = raw - 0.5 * (nu + 1.0).powi(2) + 0.5 * (p.b - 1.0).powi(2),
        RawKind::B13c => p.a_minus = raw - 0.5 * (mu + 1.0).powi(2) + 0.5 * (p.a - 1.0).powi(2),
    }
    p
}

/// Same match with the ODE moved so that the family variable equals `value`.
pub fn rematch_at(m: &MatchResult, value: f64) -> Result<MatchResult> {
    if near(value, m.family_value()) {
        return Ok(m.clone());
    }
    let raw = m.spectral_map.scale * value + m.spectral_map.offset;
    let p = params_with_raw_value(&m.system, raw);
    match_family_with(&p, m.spec.scenario, m.branches, m.free)
}

fn discrete_point(m: &MatchResult, k: usize) -> Result<(f64, f64)> {
    let out_of = |n: usize| TraError::IndexOutOfSpectrum(format!("index {k} outside 0..={n}"));
    match (&m.family, m.spectrum_kind) {
        (PolyFamily::Meixner { mu, tau }, _) => {
            let kf = k as f64;
            let ln = 2.0 * mu * (1.0 - tau).ln() + ln_gamma_signed(2.0 * mu + kf).0 - ln_gamma_signed(2.0 * mu).0
                + kf * tau.ln()
                - ln_gamma_signed(kf + 1.0).0;
            Ok((kf, ln.exp()))
        }
        (_, SpectrumKind::DiscreteFinite(n) | SpectrumKind::Mixed(n)) => {
            if k > n {
                return Err(out_of(n));
            }
            let w = weight(&m.family)?;
            let dm = w.masses.get(k).ok_or_else(|| out_of(n))?;
            if !(dm.mass > 0.0) {
                return Err(TraError::InvalidFamilyParams(format!("mass at k={k} is {}", dm.mass)));
            }
            let natural = match m.family {
                PolyFamily::Krawtchouk { .. } | PolyFamily::DualHahn { .. } | PolyFamily::Racah { .. } => k as f64,
                _ => dm.point,
            };
            Ok((natural, dm.mass))
        }
        _ => Err(TraError::IndexOutOfSpectrum(format!("{} has no discrete spectrum", m.family.name()))),
    }
}

/// sign(t_raw,n)·sign(scale·t_fam,n) accumulated, so f_n follows the raw recursion
/// even where the family's t sign convention differs (e.g. the exchanged scenario).
fn raw_signs(m: &MatchResult, sys: &TraSystem, family: &PolyFamily, len: usize) -> Result<(Vec<f64>, usize)> {
    let mut eps = Vec::with_capacity(len);
    let mut acc = 1.0;
    for n in 0..len {
        eps.push(acc);
        if n + 1 == len {
            break;
        }
        let traw = match sys.coeff(n) {
            Ok((_, t)) => t,
            Err(TraError::ZeroOffDiagonal { .. }) => return Ok((eps, n + 1)),
            Err(e) => return Err(e),
        };
        let tf = family.coeff(n)?.1 * m.spectral_map.scale;
        if tf == 0.0 {
            return Ok((eps, n + 1));
        }
        acc *= traw.signum() * tf.signum();
    }
    Ok((eps, len))
}

/// Series coefficients with the bound-state tail check.
pub fn assemble_solution(m: &MatchResult, arg: SpectralArgument, truncation: usize) -> Result<SeriesSolution> {
    let sol = assemble_partial(m, arg, truncation)?;
    let infinite = matches!(m.spectrum_kind, SpectrumKind::DiscreteInfinite | SpectrumKind::Mixed(_));
    if infinite && matches!(arg, SpectralArgument::Index(_)) && sol.f.len() == truncation && truncation > 0 {
        let max = sol.f.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let tail = sol.f[truncation - 1].abs();
        if max > 0.0 && tail > TAIL_TOL * max {
            return Err(TraError::TruncationTooSmall { truncation, ratio: tail / max });
        }
    }
    Ok(sol)
}

/// Series coefficients f_n = p·P_n without the tail check.
pub fn assemble_partial(m: &MatchResult, arg: SpectralArgument, truncation: usize) -> Result<SeriesSolution> {
    if truncation > DEFAULT_N_MAX + 1 {
        return Err(TraError::RecursionTooLong { requested: truncation, cap: DEFAULT_N_MAX });
    }
    match arg {
        SpectralArgument::Value(v) => assemble_value(m, v, truncation),
        SpectralArgument::Index(k) => assemble_index(m, k, truncation),
    }
}

fn assemble_value(m: &MatchResult, v: f64, truncation: usize) -> Result<SeriesSolution> {
    let on_continuum = match (&m.family, m.spectrum_kind) {
        (_, SpectrumKind::DiscreteFinite(_)) | (PolyFamily::Meixner { .. }, _) => false,
        (PolyFamily::ContinuousDualHahn { .. } | PolyFamily::Wilson { .. }, _) => v >= 0.0,
        _ => true,
    };
    if !on_continuum {
        return Err(TraError::IndexOutOfSpectrum(format!("{v} is not on the continuous spectrum of {}", m.family.name())));
    }
    let mm = rematch_at(m, v)?;
    let (normalized, p) = match mm.family {
        PolyFamily::NewH { .. } | PolyFamily::NewG { .. } => (false, 1.0),
        PolyFamily::ContinuousDualHahn { .. } | PolyFamily::Wilson { .. } => (true, weight(&mm.family)?.density(v.sqrt()).sqrt()),
        _ => (true, weight(&mm.family)?.density(v).sqrt()),
    };
    let (eps, len) = raw_signs(&mm, &mm.system, &mm.family, truncation)?;
    let coeffs = family_coeffs(&mm.family, len.saturating_sub(1))?;
    let x = mm.family.recursion_variable(mm.family_value());
    let seq = run_recursion(&coeffs, x, len.saturating_sub(1))?;
    let f = seq.values.iter().zip(&eps).map(|(pn, e)| p * pn * e).collect();
    Ok(SeriesSolution {
        f,
        spec: mm.spec,
        params: mm.params,
        truncation,
        norm_factor: p,
        normalized,
        argument: SpectralArgument::Value(v),
        twist: Twist::None,
    })
}

fn assemble_index(m: &MatchResult, k: usize, truncation: usize) -> Result<SeriesSolution> {
    let (natural, mass) = discrete_point(m, k)?;
    let point = match m.family {
        PolyFamily::Krawtchouk { .. } | PolyFamily::DualHahn { .. } | PolyFamily::Racah { .. } => m.family_value(),
        _ => natural,
    };
    let mm = rematch_at(m, point)?;
    let p = mass.sqrt();
    let len = match m.spectrum_kind {
        SpectrumKind::DiscreteFinite(n) => n + 1,
        _ => truncation,
    };
    let (eps, len) = if mm.formal { (vec![1.0; len], len) } else { raw_signs(&mm, &mm.system, &mm.family, len)? };
    let mut f = Vec::with_capacity(len);
    for (n, e) in eps.iter().enumerate().take(len) {
        f.push(p * e * closed_form(&mm.family, n, natural)?);
    }
    Ok(SeriesSolution {
        f,
        spec: mm.spec,
        params: mm.params,
        truncation: len,
        norm_factor: p,
        normalized: true,
        argument: SpectralArgument::Index(k),
        twist: mm.twist,
    })
}

/// Both sums of a mixed-spectrum solution: the continuum part at `value` and level `k`.
pub fn assemble_mixed(m: &MatchResult, value: f64, k: usize, truncation: usize) -> Result<(SeriesSolution, SeriesSolution)> {
    if !matches!(m.spectrum_kind, SpectrumKind::Mixed(_)) {
        return Err(TraError::IndexOutOfSpectrum(format!("{:?} is not a mixed spectrum", m.spectrum_kind)));
    }
    Ok((assemble_partial(m, SpectralArgument::Value(value), truncation)?, assemble_solution(m, SpectralArgument::Index(k), truncation)?))
}

/// Series read straight off the raw coefficient recursion at the ODE's own
/// z, unnormalized. A vanishing t_n ends the series at n (terminating case).
pub fn assemble_raw(sys: &TraSystem, truncation: usize) -> Result<SeriesSolution> {
    let coeffs = sys.coeffs_until_zero(truncation)?;
    let last = coeffs.len().min(truncation.saturating_sub(1));
    let seq = run_recursion(&coeffs, sys.z_raw(), last)?;
    Ok(SeriesSolution {
        f: seq.values,
        spec: sys.spec,
        params: sys.params,
        truncation: last + 1,
        norm_factor: 1.0,
        normalized: false,
        argument: SpectralArgument::Value(sys.z_raw()),
        twist: Twist::None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualOptions {
    /// Difference step is `base_step · max(1, |x|)`.
    pub base_step: f64,
    pub laguerre_margin: f64,
    pub jacobi_margin: f64,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self { base_step: 1e-3, laguerre_margin: 0.05, jacobi_margin: 0.95 }
    }
}

/// max over `xs` of |Ly − A₀y| / max(1, |y|).
pub fn ode_residual(params: &OdeParams, sol: &SeriesSolution, xs: &[f64]) -> Result<f64> {
    ode_residual_with(params, sol, xs, &ResidualOptions::default())
}

pub fn ode_residual_with(params: &OdeParams, sol: &SeriesSolution, xs: &[f64], opts: &ResidualOptions) -> Result<f64> {
    for &x in xs {
        let bad = match params.equation {
            Equation::Laguerre => x < opts.laguerre_margin,
            Equation::Jacobi => x.abs() > opts.jacobi_margin,
        };
        if bad || !x.is_finite() {
            return Err(TraError::SingularPointTooClose(x));
        }
    }
    if sol.f.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    let mut worst: f64 = 0.0;
    for &x in xs {
        let h = opts.base_step * x.abs().max(1.0);
        let y = sol.evaluate(x)?;
        let diffs = |h: f64| -> Result<(f64, f64)> {
            let (yp, ym) = (sol.evaluate(x + h)?, sol.evaluate(x - h)?);
            Ok(((yp - ym) / (2.0 * h), (yp - 2.0 * y + ym) / (h * h)))
        };
        let (d1h, d2h) = diffs(h)?;
        let (d1, d2) = diffs(0.5 * h)?;
        let dy = (4.0 * d1 - d1h) / 3.0;
        let ddy = (4.0 * d2 - d2h) / 3.0;
        let p = params;
        let lhs = match p.equation {
            Equation::Laguerre => x * ddy + (p.a + p.b * x) * dy + (p.a_plus * x + p.a_minus / x) * y,
            Equation::Jacobi => {
                (1.0 - x * x) * ddy - (p.a - p.b + x * (p.a + p.b)) * dy
                    + (p.a_plus / (1.0 + x) + p.a_minus / (1.0 - x) + p.a_one * x) * y
            }
        };
        worst = worst.max((lhs - p.a_zero * y).abs() / y.abs().max(1.0));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_between_meixner_and_pollaczek_has_no_family() {
        let p = OdeParams::laguerre(0.0, 0.0, -0.1, -1.0, 0.3);
        assert!(matches!(match_family(&p, Scenario::A7a, Branch::Plus, None), Err(TraError::NoFamilyApplies(_))));
        let edge = OdeParams::laguerre(0.0, 0.0, 0.0, -1.0, 0.3);
        assert!(matches!(match_family(&edge, Scenario::A7a, Branch::Plus, None), Err(TraError::AmbiguousRegion(_))));
    }

    #[test]
    fn zero_series_has_zero_residual() {
        let p = OdeParams::laguerre(0.0, 0.0, 1.0, -2.0, -2.0);
        let m = match_family(&p, Scenario::A7a, Branch::Plus, None).unwrap();
        let mut s = assemble_partial(&m, SpectralArgument::Value(m.family_value()), 10).unwrap();
        s.f.iter_mut().for_each(|v| *v = 0.0);
        assert_eq!(ode_residual(&p, &s, &[1.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn margins_are_enforced() {
        let p = OdeParams::laguerre(0.0, 0.0, 1.0, -2.0, -2.0);
        let m = match_family(&p, Scenario::A7a, Branch::Plus, None).unwrap();
        let s = assemble_partial(&m, SpectralArgument::Value(m.family_value()), 10).unwrap();
        assert!(matches!(ode_residual(&p, &s, &[0.01]), Err(TraError::SingularPointTooClose(_))));
    }
}
