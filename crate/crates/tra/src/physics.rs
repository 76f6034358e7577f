//! Quantum applications: potentials, their maps onto the Laguerre/Jacobi
//! equations, bound spectra, phase shifts, series wavefunctions, and an
//! independent finite-difference spectrum for cross-checking.
//!
//! Units have ħ = m = 1, so the radial equation is −½ψ'' + Vψ = Eψ.

use crate::eigen::lowest_eigenvalues;
use crate::error::{Result, TraError};
use crate::recurrence::run_recursion;
use crate::solver::{assemble_partial, assemble_solution, match_family_with, MatchResult, SeriesSolution, SpectralArgument, Twist};
use crate::special::{arg_gamma, c, wrap_angle};
use crate::tra::{resolve_basis_with, Branch, OdeParams, Scenario, TraSystem};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

/// A potential with its physical parameters. `lambda` is the basis scale for
/// Coulomb and the oscillator and a physical range parameter otherwise.
/// `None` for the free basis index picks an admissible default.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum PotentialCase {
    /// V = −Z/r + ℓ(ℓ+1)/2r².
    Coulomb { z: f64, ell: u32, lambda: f64 },
    /// V = ½ω²r² + ℓ(ℓ+1)/2r².
    IsotropicOscillator { omega: f64, ell: u32, lambda: f64 },
    /// V = V₂e^{2λr} − V₁e^{λr} on the whole line; V₂ defaults to λ²/8.
    Morse { v1: f64, v2: Option<f64>, lambda: f64, nu: Option<f64> },
    /// V = ¼[A(A−λ)/sinh²(λr/√2) + λB/cosh²(λr/√2)].
    PoschlTeller { a: f64, b: f64, lambda: f64, mu: Option<f64> },
    /// V = [A²+B²−λA − B(2A−λ)cos λr] / (2 sin² λr) on 0 < r < π/λ.
    Scarf { a: f64, b: f64, lambda: f64, mu: Option<f64> },
    /// V = [λB + A(A−λ)/(e^{λr}−1)] / (2(1−e^{−λr})).
    Eckart { a: f64, b: f64, lambda: f64, mu: Option<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundLevel {
    pub m: usize,
    pub energy: f64,
}

fn domain(msg: impl Into<String>) -> TraError {
    TraError::DomainError(msg.into())
}

impl PotentialCase {
    pub fn name(&self) -> &'static str {
        match self {
            PotentialCase::Coulomb { .. } => "Coulomb",
            PotentialCase::IsotropicOscillator { .. } => "IsotropicOscillator",
            PotentialCase::Morse { .. } => "Morse",
            PotentialCase::PoschlTeller { .. } => "PoschlTeller",
            PotentialCase::Scarf { .. } => "Scarf",
            PotentialCase::Eckart { .. } => "Eckart",
        }
    }

    pub fn lambda(&self) -> f64 {
        match *self {
            PotentialCase::Coulomb { lambda, .. }
            | PotentialCase::IsotropicOscillator { lambda, .. }
            | PotentialCase::Morse { lambda, .. }
            | PotentialCase::PoschlTeller { lambda, .. }
            | PotentialCase::Scarf { lambda, .. }
            | PotentialCase::Eckart { lambda, .. } => lambda,
        }
    }

    /// Scarf with box size L, λ = π/L.
    pub fn scarf_with_width(a: f64, b: f64, width: f64, mu: Option<f64>) -> Self {
        PotentialCase::Scarf { a, b, lambda: PI / width, mu }
    }

    /// (a, b) of the ODE.
    pub fn ode_ab(&self) -> (f64, f64) {
        match self {
            PotentialCase::Coulomb { .. } => (0.0, 0.0),
            PotentialCase::IsotropicOscillator { .. } => (0.5, 0.0),
            PotentialCase::Morse { .. } => (1.0, 0.0),
            PotentialCase::PoschlTeller { .. } => (1.0, 0.5),
            PotentialCase::Scarf { .. } => (0.5, 0.5),
            PotentialCase::Eckart { .. } => (1.0, 0.0),
        }
    }

    pub fn scenario(&self) -> Scenario {
        match self {
            PotentialCase::Coulomb { .. } | PotentialCase::IsotropicOscillator { .. } => Scenario::A7a,
            PotentialCase::Morse { .. } => Scenario::A7b,
            _ => Scenario::B12c,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lambda = self.lambda();
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(domain(format!("lambda must be positive, got {lambda}")));
        }
        let ok = match *self {
            PotentialCase::Coulomb { z, .. } => z.is_finite(),
            PotentialCase::IsotropicOscillator { omega, .. } => omega > 0.0 && omega.is_finite(),
            PotentialCase::Morse { v1, v2, nu, .. } => {
                v1.is_finite() && v2.map_or(true, |v| v > 0.0 && v.is_finite()) && nu.map_or(true, |v| v > -1.0)
            }
            PotentialCase::PoschlTeller { a, b, mu, .. } | PotentialCase::Scarf { a, b, mu, .. } | PotentialCase::Eckart { a, b, mu, .. } => {
                a.is_finite() && b.is_finite() && a != 0.0 && mu.map_or(true, |v| v > -1.0)
            }
        };
        if !ok {
            return Err(domain(format!("{} parameters out of range: {self:?}", self.name())));
        }
        if let PotentialCase::Scarf { a, b, lambda, .. } = *self {
            if !(a > 0.0 && (a + b) / lambda > 0.5) {
                return Err(domain("Scarf needs A > 0 and (A+B)/lambda > 1/2"));
            }
        }
        Ok(())
    }

    /// x(r).
    pub fn coordinate(&self, r: f64) -> f64 {
        match *self {
            PotentialCase::Coulomb { lambda, .. } => lambda * r,
            PotentialCase::IsotropicOscillator { lambda, .. } => (0.5 * lambda * r).powi(2),
            PotentialCase::Morse { lambda, .. } => self.morse_scale() * (lambda * r).exp(),
            PotentialCase::PoschlTeller { lambda, .. } => 2.0 * (lambda * r / SQRT_2).tanh().powi(2) - 1.0,
            PotentialCase::Scarf { lambda, .. } => -(lambda * r).cos(),
            PotentialCase::Eckart { lambda, .. } => 1.0 - 2.0 * (-lambda * r).exp(),
        }
    }

    /// Open r-interval of the problem.
    pub fn radial_domain(&self) -> (f64, f64) {
        match *self {
            PotentialCase::Morse { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            PotentialCase::Scarf { lambda, .. } => (0.0, PI / lambda),
            _ => (0.0, f64::INFINITY),
        }
    }

    fn morse_v2(&self) -> f64 {
        match *self {
            PotentialCase::Morse { v2, lambda, .. } => v2.unwrap_or(lambda * lambda / 8.0),
            _ => f64::NAN,
        }
    }

    /// s in x = s·e^{λr}; 1 when V₂ = λ²/8.
    fn morse_scale(&self) -> f64 {
        (8.0 * self.morse_v2()).sqrt() / self.lambda()
    }

    /// Potential including the orbital term.
    pub fn potential(&self, r: f64) -> f64 {
        match *self {
            PotentialCase::Coulomb { z, ell, .. } => -z / r + orbital(ell, r),
            PotentialCase::IsotropicOscillator { omega, ell, .. } => 0.5 * omega * omega * r * r + orbital(ell, r),
            PotentialCase::Morse { v1, lambda, .. } => self.morse_v2() * (2.0 * lambda * r).exp() - v1 * (lambda * r).exp(),
            PotentialCase::PoschlTeller { a, b, lambda, .. } => {
                let y = lambda * r / SQRT_2;
                0.25 * (a * (a - lambda) / y.sinh().powi(2) + lambda * b / y.cosh().powi(2))
            }
            PotentialCase::Scarf { a, b, lambda, .. } => {
                let y = lambda * r;
                (a * a + b * b - lambda * a - b * (2.0 * a - lambda) * y.cos()) / (2.0 * y.sin().powi(2))
            }
            PotentialCase::Eckart { a, b, lambda, .. } => {
                let e = (lambda * r).exp();
                0.5 * (lambda * b + a * (a - lambda) / (e - 1.0)) / (1.0 - 1.0 / e)
            }
        }
    }

    /// Energy where the continuum starts; `None` for purely discrete spectra.
    pub fn threshold(&self) -> Option<f64> {
        match *self {
            PotentialCase::IsotropicOscillator { .. } | PotentialCase::Scarf { .. } => None,
            PotentialCase::Eckart { b, lambda, .. } => Some((0.5 * lambda * b).max(0.0)),
            _ => Some(0.0),
        }
    }

    /// ODE parameters at energy E.
    pub fn to_ode_params(&self, energy: f64) -> Result<OdeParams> {
        self.validate()?;
        let (a, b) = self.ode_ab();
        let e = energy;
        Ok(match *self {
            PotentialCase::Coulomb { z, ell, lambda } => {
                let l = ell as f64;
                OdeParams::laguerre(a, b, 2.0 * e / (lambda * lambda), -l * (l + 1.0), -2.0 * z / lambda)
            }
            PotentialCase::IsotropicOscillator { omega, ell, lambda } => {
                let l = ell as f64;
                let l2 = lambda * lambda;
                OdeParams::laguerre(a, b, -4.0 * omega * omega / (l2 * l2), -0.25 * l * (l + 1.0), -2.0 * e / l2)
            }
            PotentialCase::Morse { v1, lambda, .. } => {
                let l2 = lambda * lambda;
                OdeParams::laguerre(a, b, -0.25, 2.0 * e / l2, -2.0 * v1 / (l2 * self.morse_scale()))
            }
            PotentialCase::PoschlTeller { a: pa, b: pb, lambda, .. } => {
                let l2 = lambda * lambda;
                OdeParams::jacobi(a, b, -pa * (pa - lambda) / (2.0 * l2), 2.0 * e / l2, 0.0, pb / (4.0 * lambda))
            }
            PotentialCase::Scarf { a: pa, b: pb, lambda, .. } => {
                let plus = 0.5 * (0.25 - (pa / lambda - pb / lambda - 0.5).powi(2));
                let minus = 0.5 * (0.25 - (pa / lambda + pb / lambda - 0.5).powi(2));
                OdeParams::jacobi(a, b, plus, minus, 0.0, -2.0 * e / (lambda * lambda))
            }
            PotentialCase::Eckart { a: pa, b: pb, lambda, .. } => {
                let q = pa / lambda;
                let l2 = lambda * lambda;
                OdeParams::jacobi(a, b, -2.0 * q * (q - 1.0), 2.0 * (2.0 * e - lambda * pb) / l2, 0.0, 2.0 * e / l2)
            }
        })
    }

    /// Continuous dual Hahn τ for Morse.
    pub fn morse_tau(&self) -> f64 {
        match *self {
            PotentialCase::Morse { v1, lambda, .. } => 0.5 - 2.0 * v1 / (lambda * lambda * self.morse_scale()),
            _ => f64::NAN,
        }
    }

    /// Index fixed by a square root: ν for the Jacobi cases, with the sign
    /// convention tied to the sign of A (and A vs B for Scarf).
    pub fn derived_nu(&self) -> Option<f64> {
        match *self {
            PotentialCase::Coulomb { ell, .. } => Some(2.0 * ell as f64 + 1.0),
            PotentialCase::IsotropicOscillator { ell, .. } => Some(ell as f64 + 0.5),
            PotentialCase::Morse { .. } => None,
            PotentialCase::PoschlTeller { a, lambda, .. } => Some(a.signum() * (a / lambda - 0.5)),
            PotentialCase::Scarf { a, b, lambda, .. } => {
                let v = a / lambda - b / lambda - 0.5;
                Some(if a > b { v } else { -v })
            }
            PotentialCase::Eckart { a, lambda, .. } => Some(a.signum() * (2.0 * a / lambda - 1.0)),
        }
    }

    fn branches(&self) -> (Branch, Branch) {
        let nu = self.derived_nu().unwrap_or(1.0);
        let b = if nu < 0.0 { Branch::Minus } else { Branch::Plus };
        (b, b)
    }

    /// σ = (ν+1)/2 for the Jacobi cases.
    fn sigma(&self) -> f64 {
        0.5 * (self.derived_nu().unwrap_or(0.0) + 1.0)
    }

    /// Free basis index at energy E: the user's, or one that keeps every
    /// family parameter admissible.
    pub fn free_index(&self, energy: f64) -> Result<Option<f64>> {
        Ok(match *self {
            PotentialCase::Coulomb { .. } | PotentialCase::IsotropicOscillator { .. } => None,
            PotentialCase::Morse { nu, .. } => Some(nu.unwrap_or_else(|| 2.0 * (-self.morse_tau()).max(0.0) + 1.0)),
            PotentialCase::PoschlTeller { mu, .. } | PotentialCase::Scarf { mu, .. } | PotentialCase::Eckart { mu, .. } => {
                let g = self.to_ode_params(energy)?.jacobi_g();
                let reach = if g < 0.0 { (-g).sqrt() - self.sigma() } else { 0.0 };
                Some(mu.unwrap_or(2.0 * reach.max(0.0) + 1.0))
            }
        })
    }

    /// Family match at energy E with the case's basis.
    pub fn match_at(&self, energy: f64) -> Result<MatchResult> {
        let p = self.to_ode_params(energy)?;
        match_family_with(&p, self.scenario(), self.branches(), self.free_index(energy)?)
    }

    /// N for finite spectra, `None` when the spectrum is infinite.
    pub fn spectrum_size(&self) -> Result<Option<usize>> {
        self.validate()?;
        let none = |why: String| Err(TraError::NoBoundStates(why));
        match *self {
            PotentialCase::Coulomb { z, .. } => {
                if z > 0.0 {
                    Ok(None)
                } else {
                    none(format!("Z = {z} is not attractive"))
                }
            }
            PotentialCase::IsotropicOscillator { .. } | PotentialCase::Scarf { .. } => Ok(None),
            PotentialCase::Morse { .. } => {
                let tau = self.morse_tau();
                if tau >= 0.0 {
                    return none(format!("tau = {tau} >= 0: the spectrum is purely continuous"));
                }
                Ok(Some(last_below(|m| m as f64 + tau)))
            }
            PotentialCase::PoschlTeller { b, lambda, .. } => {
                if b >= 0.25 * lambda {
                    return none(format!("B = {b} >= lambda/4"));
                }
                let edge = 0.5 * (0.25 - b / lambda).sqrt();
                let sigma = self.sigma();
                if sigma - edge >= 0.0 {
                    return none(format!("(nu+1)/2 = {sigma} exceeds sqrt(1/4 - B/lambda)/2 = {edge}"));
                }
                Ok(Some(last_below(|m| m as f64 + sigma - edge)))
            }
            PotentialCase::Eckart { b, lambda, .. } => {
                let depth = -b / lambda;
                let sigma = self.sigma();
                if !(depth > 0.0) || sigma * sigma >= depth {
                    return none(format!("no level with (m + (nu+1)/2)^2 < -B/lambda = {depth}"));
                }
                Ok(Some(last_below(|m| (m as f64 + sigma).powi(2) - depth)))
            }
        }
    }

    /// E_m from the closed-form spectrum (no range checks on m).
    pub fn level_energy(&self, m: usize) -> f64 {
        let mf = m as f64;
        match *self {
            PotentialCase::Coulomb { z, ell, .. } => -0.5 * z * z / (mf + ell as f64 + 1.0).powi(2),
            PotentialCase::IsotropicOscillator { omega, ell, .. } => omega * (2.0 * mf + ell as f64 + 1.5),
            PotentialCase::Morse { lambda, .. } => -0.5 * lambda * lambda * (mf + self.morse_tau()).powi(2),
            PotentialCase::PoschlTeller { b, lambda, .. } => {
                let nu = self.derived_nu().unwrap_or(0.0);
                -0.25 * lambda * lambda * (2.0 * mf + nu + 1.0 - (0.25 - b / lambda).sqrt()).powi(2)
            }
            PotentialCase::Scarf { a, b, lambda, .. } => {
                let shift = if a > b { a / lambda } else { 0.5 + b / lambda };
                0.5 * lambda * lambda * (mf + shift).powi(2)
            }
            PotentialCase::Eckart { b, lambda, .. } => {
                let s = mf + self.sigma();
                -0.125 * lambda * lambda * (s - (b / lambda) / s).powi(2)
            }
        }
    }

    /// Bound levels m = 0..=min(N, m_max).
    pub fn bound_spectrum(&self, m_max: usize) -> Result<Vec<BoundLevel>> {
        let top = match self.spectrum_size()? {
            Some(n) => n.min(m_max),
            None => m_max,
        };
        Ok((0..=top).map(|m| BoundLevel { m, energy: self.level_energy(m) }).collect())
    }

    /// Scattering phase shift in (−π, π].
    pub fn phase_shift(&self, energy: f64) -> Result<f64> {
        self.validate()?;
        let Some(threshold) = self.threshold() else {
            return Err(TraError::NoContinuum(format!("{} has a purely discrete spectrum", self.name())));
        };
        if !(energy > threshold) {
            return Err(TraError::BelowThreshold { energy, threshold });
        }
        let kappa = (2.0 * energy).sqrt();
        let delta = match *self {
            PotentialCase::Coulomb { z, ell, .. } => arg_gamma(c(ell as f64 + 1.0, -z / kappa)),
            PotentialCase::Morse { lambda, .. } => {
                let k = kappa / lambda;
                let nu = self.free_index(energy)?.unwrap_or(0.0);
                arg_gamma(c(0.0, 2.0 * k)) - arg_gamma(c(self.morse_tau(), k)) - 2.0 * arg_gamma(c(0.5 * (nu + 1.0), k))
            }
            PotentialCase::PoschlTeller { b, lambda, .. } => {
                let zeta = energy.sqrt() / lambda;
                let gamma = 0.5 * (self.free_index(energy)?.unwrap_or(0.0) + 1.0);
                let tau_sq = 0.25 * (b / lambda - 0.25);
                wilson_phase(zeta, self.sigma(), tau_sq, gamma)
            }
            PotentialCase::Eckart { b, lambda, .. } => {
                let zeta = (kappa * kappa / (lambda * lambda) - b / lambda).sqrt();
                let gamma = 0.5 * (self.free_index(energy)?.unwrap_or(0.0) + 1.0);
                wilson_phase(zeta, self.sigma(), (kappa / lambda).powi(2), gamma)
            }
            PotentialCase::IsotropicOscillator { .. } | PotentialCase::Scarf { .. } => unreachable!(),
        };
        Ok(wrap_angle(delta))
    }

    /// Series bound state at level m in the case's own basis (infinite series
    /// for the mixed families, truncated at `truncation`).
    pub fn bound_state(&self, m: usize, truncation: usize) -> Result<SeriesSolution> {
        let levels = self.bound_spectrum(m)?;
        let level = levels.get(m).ok_or_else(|| TraError::IndexOutOfSpectrum(format!("{} has no level {m}", self.name())))?;
        let mr = self.match_at(level.energy)?;
        assemble_solution(&mr, SpectralArgument::Index(m), truncation)
    }

    /// As [`PotentialCase::bound_state`] without the tail check.
    pub fn bound_state_partial(&self, m: usize, truncation: usize) -> Result<SeriesSolution> {
        let levels = self.bound_spectrum(m)?;
        let level = levels.get(m).ok_or_else(|| TraError::IndexOutOfSpectrum(format!("{} has no level {m}", self.name())))?;
        let mr = self.match_at(level.energy)?;
        assemble_partial(&mr, SpectralArgument::Index(m), truncation)
    }

    /// Level-m bound state in a basis whose free index makes the series stop
    /// after n = m (finite cases only). Unnormalized.
    pub fn bound_state_terminating(&self, m: usize) -> Result<SeriesSolution> {
        let levels = self.bound_spectrum(m)?;
        let level = levels.get(m).ok_or_else(|| TraError::IndexOutOfSpectrum(format!("{} has no level {m}", self.name())))?;
        let p = self.to_ode_params(level.energy)?;
        let mf = m as f64;
        let free = match *self {
            PotentialCase::Morse { .. } => -2.0 * (mf + self.morse_tau()) - 1.0,
            PotentialCase::PoschlTeller { .. } | PotentialCase::Scarf { .. } | PotentialCase::Eckart { .. } => {
                let nu = self.derived_nu().unwrap_or(0.0);
                2.0 * ((-p.jacobi_g()).sqrt() - mf - 1.0) - nu
            }
            _ => return Err(TraError::NoFamilyApplies(format!("{} bound states do not terminate", self.name()))),
        };
        let spec = resolve_basis_with(&p, self.scenario(), self.branches(), Some(free))?;
        let sys = TraSystem::new(&p, &spec)?;
        // t_m vanishes analytically here; stop before it rather than test a float for zero.
        let coeffs = sys.coeffs(m)?;
        let seq = run_recursion(&coeffs, sys.z_raw(), m)?;
        Ok(SeriesSolution {
            f: seq.values,
            spec: sys.spec,
            params: sys.params,
            truncation: m + 1,
            norm_factor: 1.0,
            normalized: false,
            argument: SpectralArgument::Value(sys.z_raw()),
            twist: Twist::None,
        })
    }

    /// Continuum state at energy E, truncated at `truncation` terms.
    pub fn scattering_state(&self, energy: f64, truncation: usize) -> Result<SeriesSolution> {
        let Some(threshold) = self.threshold() else {
            return Err(TraError::NoContinuum(format!("{} has a purely discrete spectrum", self.name())));
        };
        if !(energy > threshold) {
            return Err(TraError::BelowThreshold { energy, threshold });
        }
        let mr = self.match_at(energy)?;
        assemble_partial(&mr, SpectralArgument::Value(mr.family_value()), truncation)
    }

    /// ψ(r) = y(x(r)).
    pub fn wavefunction(&self, sol: &SeriesSolution, r: f64) -> Result<f64> {
        sol.evaluate(self.coordinate(r))
    }
}

fn orbital(ell: u32, r: f64) -> f64 {
    let l = ell as f64;
    0.5 * l * (l + 1.0) / (r * r)
}

/// Largest m with g(m) < 0 for increasing g with g(0) < 0.
fn last_below(g: impl Fn(usize) -> f64) -> usize {
    let mut m = 0;
    while g(m + 1) < 0.0 {
        m += 1;
    }
    m
}

/// arg Γ(2iz) − arg Γ(σ+i(z+τ)) − arg Γ(σ+i(z−τ)) − 2 arg Γ(γ+iz), with τ = √τ²
/// possibly imaginary.
fn wilson_phase(z: f64, sigma: f64, tau_sq: f64, gamma: f64) -> f64 {
    let (t_re, t_im) = if tau_sq >= 0.0 { (tau_sq.sqrt(), 0.0) } else { (0.0, (-tau_sq).sqrt()) };
    // σ + i(z ± τ) with τ = t_re + i t_im.
    let plus = c(sigma - t_im, z + t_re);
    let minus = c(sigma + t_im, z - t_re);
    arg_gamma(c(0.0, 2.0 * z)) - arg_gamma(plus) - arg_gamma(minus) - 2.0 * arg_gamma(c(gamma, z))
}

/// Uniform mesh of `intervals` steps on [r_min, r_max], Dirichlet at both ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialMesh {
    pub r_min: f64,
    pub r_max: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdOptions {
    /// Largest relative change allowed between the h and h/2 meshes.
    pub tolerance: f64,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self { tolerance: 1e-5 }
    }
}

const DEFAULT_INTERVALS: usize = 20_000;
const MAX_INTERVALS: usize = 120_000;
const MAX_STEP: f64 = 1e-3;

/// Mesh wide enough for the lowest `levels` states. Sizing uses the
/// closed-form energies only to estimate decay lengths.
pub fn default_mesh(case: &PotentialCase, levels: usize) -> Result<RadialMesh> {
    let top = case.bound_spectrum(levels.saturating_sub(1))?.last().map(|l| l.energy).unwrap_or(0.0);
    let lambda = case.lambda();
    let decay = |binding: f64| 40.0 / (2.0 * binding.max(1e-6)).sqrt();
    let (r_min, r_max) = match *case {
        PotentialCase::Coulomb { z, ell, .. } => {
            let n = (levels + ell as usize) as f64;
            (0.0, (6.0 * n * n / z + 30.0).max(80.0))
        }
        PotentialCase::IsotropicOscillator { omega, .. } => (0.0, (2.0 * top).sqrt() / omega + 10.0 / omega.sqrt()),
        PotentialCase::Morse { v1, .. } => {
            let wall = (100.0 * (1.0 + v1.abs() / case.morse_v2())).ln() / lambda;
            (-decay(-top), wall)
        }
        PotentialCase::PoschlTeller { .. } => (0.0, decay(-top) + 5.0 / lambda),
        PotentialCase::Scarf { lambda, .. } => (0.0, PI / lambda),
        PotentialCase::Eckart { b, .. } => (0.0, decay(0.5 * lambda * b - top) + 5.0 / lambda),
    };
    let steps = ((r_max - r_min) / MAX_STEP).ceil() as usize;
    Ok(RadialMesh { r_min, r_max, intervals: steps.clamp(DEFAULT_INTERVALS, MAX_INTERVALS) })
}

/// Lowest eigenvalues of the 3-point discretization on one mesh.
pub fn fd_eigenvalues(case: &PotentialCase, mesh: &RadialMesh, levels: usize) -> Vec<f64> {
    let n = mesh.intervals;
    let h = (mesh.r_max - mesh.r_min) / n as f64;
    let kin = 1.0 / (h * h);
    let d: Vec<f64> = (1..n).map(|i| kin + case.potential(mesh.r_min + i as f64 * h)).collect();
    let e = vec![-0.5 * kin; d.len().saturating_sub(1)];
    lowest_eigenvalues(&d, &e, levels)
}

/// Lowest `levels` eigenvalues of −½d²/dr² + V: meshes h and h/2, Richardson
/// combined, with the h → h/2 change checked against the tolerance.
pub fn fd_oracle(case: &PotentialCase, mesh: &RadialMesh, levels: usize) -> Result<Vec<f64>> {
    fd_oracle_with(case, mesh, levels, &FdOptions::default())
}

pub fn fd_oracle_with(case: &PotentialCase, mesh: &RadialMesh, levels: usize, opts: &FdOptions) -> Result<Vec<f64>> {
    case.validate()?;
    if !(mesh.r_max > mesh.r_min) || mesh.intervals < 4 {
        return Err(domain("mesh needs r_max > r_min and at least 4 intervals"));
    }
    let coarse = fd_eigenvalues(case, mesh, levels);
    let fine = fd_eigenvalues(case, &RadialMesh { intervals: 2 * mesh.intervals, ..*mesh }, levels);
    let mut out = Vec::with_capacity(levels);
    for (level, (ec, ef)) in coarse.iter().zip(&fine).enumerate() {
        let change = (ef - ec).abs() / ef.abs().max(1.0);
        if change > opts.tolerance {
            return Err(TraError::MeshTooCoarse { level, change });
        }
        out.push((4.0 * ef - ec) / 3.0);
    }
    Ok(out)
}
