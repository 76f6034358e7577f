//! Orthonormal polynomial families: recursion coefficients, terminating
//! hypergeometric closed forms, and weights. Also the classical Laguerre and
//! Jacobi polynomials behind the expansion bases.

use crate::error::{Result, TraError};
use crate::recurrence::RecursionCoeffs;
use crate::special::{
    abs_gamma_sq, binomial, binomial_real, c, dd_sum, factorial, hyper_terminating, hyper_terminating_dd, ln_gamma_c, HyperParam, ln_gamma_signed, pochhammer,
    pochhammer_c, r,
};
use crate::tra::{BasisSpec, Equation};
use num_complex::Complex64;
use twofloat::TwoFloat;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Cumulative mass at which infinite discrete weights are cut.
pub const MASS_TAIL: f64 = 1e-12;
const IMAG_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum PolyFamily {
    MeixnerPollaczek { mu: f64, theta: f64 },
    Meixner { mu: f64, tau: f64 },
    Krawtchouk { n: usize, tau: f64 },
    ContinuousDualHahn { tau: f64, a: f64, b: f64 },
    DualHahn { n: usize, tau: f64, sigma: f64 },
    /// Conjugate pairs allowed. Spectral variable z².
    Wilson { a: Complex64, b: Complex64, c: Complex64, d: Complex64 },
    /// General Racah with δ = −N−1−β.
    Racah { n: usize, alpha: f64, beta: f64, gamma: f64 },
    NewH { mu: f64, nu: f64, theta: f64, sigma: f64, z: f64 },
    NewG { mu: f64, nu: f64, tau: f64, sigma: f64, z: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeightKind {
    Continuous,
    Discrete,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMass {
    pub k: usize,
    /// Value of the recursion variable at this mass.
    pub point: f64,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Support {
    /// Density in z over (lo, hi); recursion variable is z or z² per family.
    Interval { lo: f64, hi: f64 },
    Indices { count: usize },
    Both { lo: f64, hi: f64, count: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightFunction {
    pub kind: WeightKind,
    pub family: PolyFamily,
    pub masses: Vec<DiscreteMass>,
    pub support: Support,
}

impl WeightFunction {
    /// Continuous density ρ(z); zero for purely discrete weights.
    pub fn density(&self, z: f64) -> f64 {
        match (&self.kind, &self.family) {
            (WeightKind::Discrete, _) => 0.0,
            (_, PolyFamily::MeixnerPollaczek { mu, theta }) => {
                let ln_pre = 2.0 * mu * (2.0 * theta.sin()).ln() - (2.0 * PI).ln() - ln_gamma_signed(2.0 * mu).0;
                (ln_pre + (2.0 * theta - PI) * z).exp() * abs_gamma_sq(c(*mu, z))
            }
            (_, PolyFamily::ContinuousDualHahn { tau, a, b }) => {
                if z <= 0.0 {
                    return 0.0;
                }
                let num = [*tau, *a, *b].iter().map(|p| ln_gamma_c(c(*p, z)).re).sum::<f64>();
                let den = ln_gamma_c(c(0.0, 2.0 * z)).re;
                let norm = ln_gamma_signed(tau + a).0 + ln_gamma_signed(tau + b).0 + ln_gamma_signed(a + b).0;
                (2.0 * (num - den) - norm).exp() / (2.0 * PI)
            }
            (_, PolyFamily::Wilson { a, b, c: cc, d }) => {
                if z <= 0.0 {
                    return 0.0;
                }
                let iz = c(0.0, z);
                let num = [*a, *b, *cc, *d].iter().map(|p| ln_gamma_c(p + iz).re).sum::<f64>();
                let den = ln_gamma_c(2.0 * iz).re;
                (2.0 * (num - den) - wilson_ln_h0(*a, *b, *cc, *d)).exp() / (2.0 * PI)
            }
            _ => 0.0,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().map(|m| m.mass).sum()
    }
}

fn wilson_ln_h0(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> f64 {
    let s = a + b + c + d;
    [a + b, a + c, a + d, b + c, b + d, c + d].iter().map(|p| ln_gamma_c(*p).re).sum::<f64>() - ln_gamma_c(s).re
}

fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn invalid(msg: impl Into<String>) -> TraError {
    TraError::InvalidFamilyParams(msg.into())
}

/// Recursion-normalized coefficients C_n and D_n of orthonormal Jacobi polynomials.
pub fn jacobi_c(n: usize, mu: f64, nu: f64) -> f64 {
    if n == 0 {
        return (nu - mu) / (mu + nu + 2.0);
    }
    let m = 2.0 * n as f64 + mu + nu;
    (nu * nu - mu * mu) / (m * (m + 2.0))
}

pub fn jacobi_d_sq(n: usize, mu: f64, nu: f64) -> f64 {
    let nf = n as f64;
    let m = 2.0 * nf + mu + nu;
    let ratio = if n == 0 { 1.0 } else { (nf + mu + nu + 1.0) / (m + 1.0) };
    4.0 / ((m + 2.0) * (m + 2.0)) * (nf + 1.0) * (nf + mu + 1.0) * (nf + nu + 1.0) / (m + 3.0) * ratio
}

pub fn jacobi_d(n: usize, mu: f64, nu: f64) -> f64 {
    jacobi_d_sq(n, mu, nu).sqrt()
}

fn wilson_ac(n: f64, a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let s = a + b + c + d;
    let big_a = (n + s - 1.0) * (n + a + b) * (n + a + c) * (n + a + d) / ((2.0 * n + s - 1.0) * (2.0 * n + s));
    let big_c = if n == 0.0 {
        c_zero()
    } else {
        n * (n + b + c - 1.0) * (n + b + d - 1.0) * (n + c + d - 1.0) / ((2.0 * n + s - 2.0) * (2.0 * n + s - 1.0))
    };
    (big_a, big_c)
}

fn c_zero() -> Complex64 {
    c(0.0, 0.0)
}

fn racah_ac(n: f64, big_n: f64, al: f64, be: f64, ga: f64) -> (f64, f64) {
    let ab = al + be;
    let a = (n + al + 1.0) * (n + ab + 1.0) * (n - big_n) * (n + ga + 1.0) / ((2.0 * n + ab + 1.0) * (2.0 * n + ab + 2.0));
    let cc = if n == 0.0 {
        0.0
    } else {
        n * (n + ab - ga) * (n + ab + big_n + 1.0) * (n + be) / ((2.0 * n + ab) * (2.0 * n + ab + 1.0))
    };
    (a, cc)
}

fn dual_hahn_ac(n: f64, big_n: f64, tau: f64, sigma: f64) -> (f64, f64) {
    ((n + tau + 1.0) * (n - big_n), n * (n - sigma - big_n - 1.0))
}

fn cdh_ac(n: f64, tau: f64, a: f64, b: f64) -> (f64, f64) {
    ((n + tau + a) * (n + tau + b), n * (n + a + b - 1.0))
}

fn is_conjugate_closed(ps: &[Complex64]) -> bool {
    let mut used = [false; 4];
    for i in 0..ps.len() {
        if ps[i].im == 0.0 || used[i] {
            continue;
        }
        let partner = (0..ps.len()).find(|&j| j != i && !used[j] && (ps[j] - ps[i].conj()).norm() <= 1e-12 * (1.0 + ps[i].norm()));
        match partner {
            Some(j) => {
                used[i] = true;
                used[j] = true;
            }
            None => return false,
        }
    }
    true
}

impl PolyFamily {
    /// Symmetric Racah form with parameters (γ; σ, σ).
    pub fn racah_symmetric(n: usize, gamma: f64, sigma: f64) -> Self {
        PolyFamily::Racah { n, alpha: gamma, beta: sigma, gamma: sigma }
    }

    /// Wilson with {σ+iτ, σ−iτ, γ, γ}; τ² < 0 gives the real pair σ ± √(−τ²).
    pub fn wilson_symmetric(sigma: f64, tau_sq: f64, gamma: f64) -> Self {
        let (a, b) = if tau_sq >= 0.0 {
            let t = tau_sq.sqrt();
            (c(sigma, t), c(sigma, -t))
        } else {
            let t = (-tau_sq).sqrt();
            (r(sigma - t), r(sigma + t))
        };
        PolyFamily::Wilson { a, b, c: r(gamma), d: r(gamma) }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PolyFamily::MeixnerPollaczek { .. } => "MeixnerPollaczek",
            PolyFamily::Meixner { .. } => "Meixner",
            PolyFamily::Krawtchouk { .. } => "Krawtchouk",
            PolyFamily::ContinuousDualHahn { .. } => "ContinuousDualHahn",
            PolyFamily::DualHahn { .. } => "DualHahn",
            PolyFamily::Wilson { .. } => "Wilson",
            PolyFamily::Racah { .. } => "Racah",
            PolyFamily::NewH { .. } => "NewH",
            PolyFamily::NewG { .. } => "NewG",
        }
    }

    /// N for the finite families.
    pub fn size(&self) -> Option<usize> {
        match self {
            PolyFamily::Krawtchouk { n, .. } | PolyFamily::DualHahn { n, .. } | PolyFamily::Racah { n, .. } => Some(*n),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match *self {
            PolyFamily::MeixnerPollaczek { mu, theta } => {
                if !finite(&[mu, theta]) || mu <= 0.0 || theta <= 0.0 || theta >= PI {
                    return Err(invalid(format!("MeixnerPollaczek needs mu > 0 and 0 < theta < pi, got mu={mu}, theta={theta}")));
                }
            }
            PolyFamily::Meixner { mu, tau } => {
                if !finite(&[mu, tau]) || mu <= 0.0 || tau <= 0.0 || tau >= 1.0 {
                    return Err(invalid(format!("Meixner needs mu > 0 and 0 < tau < 1, got mu={mu}, tau={tau}")));
                }
            }
            PolyFamily::Krawtchouk { n, tau } => {
                if n == 0 || !tau.is_finite() || tau <= 0.0 || tau >= 1.0 {
                    return Err(invalid(format!("Krawtchouk needs N >= 1 and 0 < tau < 1, got N={n}, tau={tau}")));
                }
            }
            PolyFamily::ContinuousDualHahn { tau, a, b } => {
                if !finite(&[tau, a, b]) {
                    return Err(invalid("ContinuousDualHahn parameters must be finite"));
                }
                let ps = [tau, a, b];
                let neg = ps.iter().filter(|p| **p <= 0.0).count();
                let ok = match neg {
                    0 => true,
                    1 => {
                        let m = ps.iter().cloned().fold(f64::INFINITY, f64::min);
                        ps.iter().filter(|p| **p > 0.0).all(|p| p + m > 0.0) && m.fract() != 0.0
                    }
                    _ => false,
                };
                if !ok {
                    return Err(invalid(format!("ContinuousDualHahn parameters ({tau}, {a}, {b}) outside the admissible region")));
                }
            }
            PolyFamily::DualHahn { n, tau, sigma } => {
                let nf = n as f64;
                let ok = n >= 1 && finite(&[tau, sigma]) && ((tau > -1.0 && sigma > -1.0) || (tau < -nf && sigma < -nf));
                if !ok {
                    return Err(invalid(format!("DualHahn needs tau, sigma > -1 or < -N, got tau={tau}, sigma={sigma}, N={n}")));
                }
            }
            PolyFamily::Wilson { a, b, c: cc, d } => {
                let ps = [a, b, cc, d];
                if ps.iter().any(|p| !p.re.is_finite() || !p.im.is_finite()) || !is_conjugate_closed(&ps) {
                    return Err(invalid("Wilson parameters must be finite with non-real ones in conjugate pairs"));
                }
                let neg: Vec<usize> = (0..4).filter(|&i| ps[i].re <= 0.0).collect();
                let ok = match neg.len() {
                    0 => true,
                    1 => {
                        let i = neg[0];
                        ps[i].im == 0.0 && ps[i].re.fract() != 0.0 && (0..4).filter(|&j| j != i).all(|j| (ps[i] + ps[j]).re > 0.0)
                    }
                    _ => false,
                };
                if !ok {
                    return Err(invalid("Wilson parameters outside the admissible region"));
                }
            }
            PolyFamily::Racah { n, .. } => {
                if n == 0 {
                    return Err(invalid("Racah needs N >= 1"));
                }
                for k in 0..n {
                    let (s2, t2) = self.raw_coeff_sq(k);
                    if !(t2 > 0.0) || !s2.is_finite() {
                        return Err(invalid(format!("Racah off-diagonal square {t2} at n={k} is not positive")));
                    }
                }
                for k in 0..=n {
                    if !(self.racah_prefactor(k) > 0.0) {
                        return Err(invalid(format!("Racah normalization at n={k} is not positive")));
                    }
                }
                let w = racah_raw_masses(self);
                if !(w.iter().all(|x| *x > 0.0) || w.iter().all(|x| *x < 0.0)) {
                    return Err(invalid("Racah weights change sign"));
                }
            }
            PolyFamily::NewH { mu, nu, theta, sigma, z } => {
                if !finite(&[mu, nu, theta, sigma, z]) || mu <= -1.0 || nu <= -1.0 || theta <= 0.0 || theta >= PI || z == 0.0 {
                    return Err(invalid("NewH needs mu, nu > -1, 0 < theta < pi and z != 0"));
                }
            }
            PolyFamily::NewG { mu, nu, tau, sigma, z } => {
                if !finite(&[mu, nu, tau, sigma, z]) || mu <= -1.0 || nu <= -1.0 || tau <= 0.0 || tau >= 1.0 || z == 0.0 {
                    return Err(invalid("NewG needs mu, nu > -1, 0 < tau < 1 and z != 0"));
                }
            }
        }
        Ok(())
    }

    /// (s_n, t_n²) as algebraic expressions, with no admissibility checks.
    /// Krawtchouk gives the i^n-twisted recursion, whose t² is negative.
    pub fn formal_coeff_sq(&self, n: usize) -> (f64, f64) {
        match self {
            PolyFamily::Krawtchouk { n: big_n, .. } => {
                let (s, _) = self.raw_coeff_sq(n);
                (s, -((n + 1) as f64) * (*big_n as f64 - n as f64))
            }
            _ => self.raw_coeff_sq(n),
        }
    }

    fn raw_coeff_sq(&self, n: usize) -> (f64, f64) {
        let nf = n as f64;
        match *self {
            PolyFamily::MeixnerPollaczek { mu, theta } => {
                let st = theta.sin();
                (-(nf + mu) * theta.cos() / st, (nf + 1.0) * (nf + 2.0 * mu) / (4.0 * st * st))
            }
            PolyFamily::Meixner { mu, tau } => {
                let d = 1.0 - tau;
                ((nf * (1.0 + tau) + 2.0 * mu * tau) / d, (nf + 1.0) * (nf + 2.0 * mu) * tau / (d * d))
            }
            PolyFamily::Krawtchouk { n: big_n, tau } => {
                let q = (tau * (1.0 - tau)).sqrt();
                let bn = big_n as f64;
                ((bn * tau + nf * (1.0 - 2.0 * tau)) / q, (nf + 1.0) * (bn - nf))
            }
            PolyFamily::ContinuousDualHahn { tau, a, b } => {
                let (a0, c0) = cdh_ac(nf, tau, a, b);
                let (_, c1) = cdh_ac(nf + 1.0, tau, a, b);
                (a0 + c0 - tau * tau, a0 * c1)
            }
            PolyFamily::DualHahn { n: big_n, tau, sigma } => {
                let bn = big_n as f64;
                let (a0, c0) = dual_hahn_ac(nf, bn, tau, sigma);
                let (_, c1) = dual_hahn_ac(nf + 1.0, bn, tau, sigma);
                let h = 0.5 * (tau + sigma + 1.0);
                (-(a0 + c0) + h * h, a0 * c1)
            }
            PolyFamily::Wilson { a, b, c: cc, d } => {
                let (a0, c0) = wilson_ac(nf, a, b, cc, d);
                let (_, c1) = wilson_ac(nf + 1.0, a, b, cc, d);
                ((a0 + c0 - a * a).re, (a0 * c1).re)
            }
            PolyFamily::Racah { n: big_n, alpha, beta, gamma } => {
                let bn = big_n as f64;
                let (a0, c0) = racah_ac(nf, bn, alpha, beta, gamma);
                let (_, c1) = racah_ac(nf + 1.0, bn, alpha, beta, gamma);
                let h = 0.5 * (gamma - beta - bn);
                (-(a0 + c0) + h * h, a0 * c1)
            }
            PolyFamily::NewH { mu, nu, theta, sigma, z } => {
                let h = nf + 0.5 * (mu + nu + 1.0);
                (theta.sin() / z * (sigma + h * h) + jacobi_c(n, mu, nu), jacobi_d_sq(n, mu, nu))
            }
            PolyFamily::NewG { mu, nu, tau, sigma, z } => {
                let h = nf + 0.5 * (mu + nu + 1.0);
                ((1.0 - tau) / (2.0 * tau.sqrt() * z) * (sigma + h * h) + jacobi_c(n, mu, nu), jacobi_d_sq(n, mu, nu))
            }
        }
    }

    fn t_sign(&self, n: usize) -> f64 {
        let nf = n as f64;
        match *self {
            PolyFamily::MeixnerPollaczek { .. } | PolyFamily::NewH { .. } | PolyFamily::NewG { .. } => 1.0,
            PolyFamily::Meixner { .. } | PolyFamily::Krawtchouk { .. } => -1.0,
            PolyFamily::ContinuousDualHahn { tau, a, b } => -sgn(cdh_ac(nf, tau, a, b).0),
            PolyFamily::DualHahn { n: big_n, tau, sigma } => sgn(dual_hahn_ac(nf, big_n as f64, tau, sigma).0),
            PolyFamily::Wilson { a, b, c: cc, d } => {
                let s = (a + b + cc + d).re;
                -sgn((nf + s - 1.0) / ((2.0 * nf + s - 1.0) * (2.0 * nf + s)))
            }
            PolyFamily::Racah { n: big_n, alpha, beta, gamma } => sgn(racah_ac(nf, big_n as f64, alpha, beta, gamma).0),
        }
    }

    /// Normalized (s_n, t_n) of the real recursion.
    pub fn coeff(&self, n: usize) -> Result<(f64, f64)> {
        let (s, t2) = self.raw_coeff_sq(n);
        if !s.is_finite() || !t2.is_finite() {
            return Err(TraError::NonFiniteCoefficient { n });
        }
        if let Some(big_n) = self.size() {
            if n >= big_n {
                return Ok((s, 0.0));
            }
        }
        if t2 < 0.0 {
            return Err(invalid(format!("{}: t_{n}^2 = {t2} is negative", self.name())));
        }
        Ok((s, self.t_sign(n) * t2.sqrt()))
    }

    /// Variable at which the recursion is evaluated, from the family's natural
    /// argument (z for MeixnerPollaczek, z² for ContinuousDualHahn and Wilson,
    /// the index k for the discrete families, cos θ / (1+τ)/(2√τ) for NewH/NewG).
    pub fn recursion_variable(&self, arg: f64) -> f64 {
        match *self {
            PolyFamily::Krawtchouk { tau, .. } => arg / (tau * (1.0 - tau)).sqrt(),
            PolyFamily::DualHahn { tau, sigma, .. } => {
                let h = arg + 0.5 * (tau + sigma + 1.0);
                h * h
            }
            PolyFamily::Racah { n, beta, gamma, .. } => {
                let h = n as f64 + beta - gamma - 2.0 * arg;
                0.25 * h * h
            }
            _ => arg,
        }
    }

    fn racah_prefactor(&self, n: usize) -> f64 {
        let PolyFamily::Racah { n: big_n, alpha, beta, gamma } = *self else {
            return f64::NAN;
        };
        if n == 0 {
            return 1.0;
        }
        let bn = big_n as f64;
        let ab = alpha + beta;
        let nf = n as f64;
        (2.0 * nf + ab + 1.0) / (nf + ab + 1.0) * pochhammer(-bn, n) * pochhammer(alpha + 1.0, n) * pochhammer(gamma + 1.0, n)
            * pochhammer(ab + 2.0, n)
            / (pochhammer(beta + 1.0, n) * pochhammer(ab - gamma + 1.0, n) * pochhammer(ab + bn + 2.0, n) * factorial(n))
    }
}

/// s and t streams of length `len`. Finite families need len ≤ N.
pub fn family_coeffs(family: &PolyFamily, len: usize) -> Result<RecursionCoeffs> {
    family.validate()?;
    if let Some(big_n) = family.size() {
        if len > big_n {
            return Err(TraError::IndexOutOfValidity(format!("{} has only N={big_n} recursion steps, asked for {len}", family.name())));
        }
    }
    let mut s = Vec::with_capacity(len);
    let mut t = Vec::with_capacity(len);
    for n in 0..len {
        let (sn, tn) = family.coeff(n)?;
        s.push(sn);
        t.push(tn);
    }
    Ok(RecursionCoeffs::new(s, t))
}

fn real_part_checked(v: Complex64, what: &str) -> Result<f64> {
    if v.im.abs() > IMAG_TOL * v.re.abs().max(1.0) {
        return Err(TraError::NumericalOverflow(format!("{what}: imaginary residue {} of {}", v.im, v.re)));
    }
    Ok(v.re)
}

fn finite_or_overflow(v: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(TraError::NumericalOverflow(format!("{what} prefactor is not finite")))
    }
}

/// Orthonormal P_n at the family's natural argument (see [`PolyFamily::recursion_variable`]).
pub fn closed_form(family: &PolyFamily, n: usize, arg: f64) -> Result<f64> {
    family.validate()?;
    let nf = n as f64;
    let minus_n = r(-nf);
    match *family {
        PolyFamily::MeixnerPollaczek { mu, theta } => {
            let pre = finite_or_overflow((pochhammer(2.0 * mu, n) / factorial(n)).sqrt(), "MeixnerPollaczek")?;
            let x = c(1.0, 0.0) - Complex64::from_polar(1.0, -2.0 * theta);
            let h = hyper_terminating(&[minus_n, c(mu, arg)], &[r(2.0 * mu)], x, n);
            real_part_checked(Complex64::from_polar(pre, nf * theta) * h, "MeixnerPollaczek")
        }
        PolyFamily::Meixner { mu, tau } => {
            let pre = finite_or_overflow((pochhammer(2.0 * mu, n) / factorial(n)).sqrt() * tau.powf(0.5 * nf), "Meixner")?;
            let x = TwoFloat::from(1.0) - TwoFloat::from(1.0) / tau;
            Ok(pre * hyper_terminating_dd(&[re(-nf), re(-arg)], &[re(2.0 * mu)], x, n))
        }
        PolyFamily::Krawtchouk { n: big_n, tau } => {
            check_finite_index(n, big_n, "Krawtchouk")?;
            let pre = (binomial(big_n, n) * (tau / (1.0 - tau)).powi(n as i32)).sqrt();
            let x = TwoFloat::from(1.0) / tau;
            Ok(pre * hyper_terminating_dd(&[re(-nf), re(-arg)], &[re(-(big_n as f64))], x, n))
        }
        PolyFamily::ContinuousDualHahn { tau, a, b } => {
            let ln_pre = 0.5
                * (ln_poch_c(r(tau + a), n) + ln_poch_c(r(tau + b), n) - ln_poch_c(r(a + b), n) - ln_poch_c(r(1.0), n)).re;
            let up = [re(-nf), HyperParam::Quad { center: tau.into(), offset: arg.into() }];
            let h = hyper_terminating_dd(&up, &[HyperParam::Real(dd_sum(&[tau, a])), HyperParam::Real(dd_sum(&[tau, b]))], 1.0.into(), n);
            if h == 0.0 {
                return Ok(0.0);
            }
            finite_or_overflow(h.signum() * (h.abs().ln() + ln_pre).exp(), "ContinuousDualHahn")
        }
        PolyFamily::DualHahn { n: big_n, tau, sigma } => {
            check_finite_index(n, big_n, "DualHahn")?;
            let bn = big_n as f64;
            let pre = pochhammer(tau + 1.0, n) * pochhammer(bn - nf + 1.0, n) / (factorial(n) * pochhammer(bn + sigma - nf + 1.0, n));
            let pre = finite_or_overflow(pre.abs().sqrt(), "DualHahn")?;
            let up = [re(-nf), re(-arg), HyperParam::Real(dd_sum(&[arg, tau, sigma, 1.0]))];
            Ok(pre * hyper_terminating_dd(&up, &[HyperParam::Real(dd_sum(&[tau, 1.0])), re(-bn)], 1.0.into(), n))
        }
        PolyFamily::Wilson { a, b, c: cc, d } => {
            // P_n = lead·₄F₃·√(ratio·(s)_n / (lead·rest)), evaluated in logs.
            // W_n is symmetric in (a, b, c, d); a real leading parameter keeps the sum real.
            let [a, b, cc, d] = wilson_order([a, b, cc, d]);
            let s = a + b + cc + d;
            let h = match wilson_real_sum(a, [b, cc, d], nf, arg) {
                Some(v) => r(v),
                None => {
                    let iz = Complex64::new(-arg, 0.0).sqrt();
                    hyper_terminating(&[minus_n, s + nf - 1.0, a + iz, a - iz], &[a + b, a + cc, a + d], r(1.0), n)
                }
            };
            let ln_lead = ln_poch_c(a + b, n) + ln_poch_c(a + cc, n) + ln_poch_c(a + d, n);
            let ln_rest = ln_poch_c(b + cc, n) + ln_poch_c(b + d, n) + ln_poch_c(cc + d, n) + ln_gamma_signed(nf + 1.0).0;
            let ratio = if n == 0 { c(1.0, 0.0) } else { (s + 2.0 * nf - 1.0) / (s + nf - 1.0) };
            if ln_lead.re == f64::NEG_INFINITY {
                return Ok(0.0);
            }
            let ln_abs = 0.5 * (ratio.ln() + ln_poch_c(s, n) - ln_lead - ln_rest).re;
            let v = h * (ln_lead + ln_abs).exp();
            finite_or_overflow(v.norm(), "Wilson")?;
            real_part_checked(v, "Wilson")
        }
        PolyFamily::Racah { n: big_n, alpha, beta, gamma } => {
            check_finite_index(n, big_n, "Racah")?;
            let bn = big_n as f64;
            let pre = finite_or_overflow(family.racah_prefactor(n).abs().sqrt(), "Racah")?;
            let up = [re(-nf), re(-arg), HyperParam::Real(dd_sum(&[nf, alpha, beta, 1.0])), HyperParam::Real(dd_sum(&[arg, -beta, gamma, -bn]))];
            let low = [HyperParam::Real(dd_sum(&[alpha, 1.0])), HyperParam::Real(dd_sum(&[gamma, 1.0])), re(-bn)];
            Ok(pre * hyper_terminating_dd(&up, &low, 1.0.into(), n))
        }
        PolyFamily::NewH { .. } => Err(TraError::NoClosedForm("NewH")),
        PolyFamily::NewG { .. } => Err(TraError::NoClosedForm("NewG")),
    }
}

fn re(x: f64) -> HyperParam {
    HyperParam::Real(x.into())
}

/// Real parameter first, then conjugate partners adjacent.
fn wilson_order(ps: [Complex64; 4]) -> [Complex64; 4] {
    let Some(i) = ps.iter().position(|p| p.im == 0.0) else {
        return ps;
    };
    let mut rest: Vec<Complex64> = (0..4).filter(|&j| j != i).map(|j| ps[j]).collect();
    rest.sort_by(|x, y| x.re.partial_cmp(&y.re).unwrap().then(x.im.partial_cmp(&y.im).unwrap()));
    [ps[i], rest[0], rest[1], rest[2]]
}

/// ₄F₃(−n, n+s−1, a±iz; a+b, a+c, a+d; 1) in double-double when a is real and
/// the others are real or one conjugate pair.
fn wilson_real_sum(a: Complex64, others: [Complex64; 3], nf: f64, arg: f64) -> Option<f64> {
    if a.im != 0.0 {
        return None;
    }
    let mut lower = Vec::with_capacity(3);
    let mut used = [false; 3];
    for i in 0..3 {
        if used[i] {
            continue;
        }
        let p = others[i];
        if p.im == 0.0 {
            lower.push(HyperParam::Real(dd_sum(&[a.re, p.re])));
            used[i] = true;
            continue;
        }
        let j = (i + 1..3).find(|&j| !used[j] && others[j] == p.conj())?;
        used[i] = true;
        used[j] = true;
        lower.push(HyperParam::Quad { center: dd_sum(&[a.re, p.re]), offset: TwoFloat::new_mul(p.im, p.im) });
    }
    let up = [re(-nf), HyperParam::Real(dd_sum(&[nf, a.re, others[0].re, others[1].re, others[2].re, -1.0])), HyperParam::Quad { center: a.re.into(), offset: arg.into() }];
    Some(hyper_terminating_dd(&up, &lower, 1.0.into(), nf as usize))
}

/// ln (a)_n as Σ ln(a+j); −∞ real part when a factor vanishes.
fn ln_poch_c(a: Complex64, n: usize) -> Complex64 {
    (0..n).map(|j| (a + j as f64).ln()).sum()
}

fn check_finite_index(n: usize, big_n: usize, name: &str) -> Result<()> {
    if n > big_n {
        return Err(TraError::IndexOutOfValidity(format!("{name}: degree {n} exceeds N={big_n}")));
    }
    Ok(())
}

fn racah_raw_masses(family: &PolyFamily) -> Vec<f64> {
    let PolyFamily::Racah { n: big_n, alpha, beta, gamma } = *family else {
        return Vec::new();
    };
    let de = -(big_n as f64) - 1.0 - beta;
    (0..=big_n)
        .map(|k| {
            pochhammer(alpha + 1.0, k) * pochhammer(beta + de + 1.0, k) * pochhammer(gamma + 1.0, k) * pochhammer(gamma + de + 1.0, k)
                * pochhammer(0.5 * (gamma + de + 3.0), k)
                / (pochhammer(-alpha + gamma + de + 1.0, k)
                    * pochhammer(-beta + gamma + 1.0, k)
                    * pochhammer(0.5 * (gamma + de + 1.0), k)
                    * pochhammer(de + 1.0, k)
                    * factorial(k))
        })
        .collect()
}

fn normalized(raw: Vec<f64>, points: impl Fn(usize) -> f64) -> Vec<DiscreteMass> {
    let total: f64 = raw.iter().sum();
    raw.into_iter().enumerate().map(|(k, w)| DiscreteMass { k, point: points(k), mass: w / total }).collect()
}

/// Normalized weight. Densities are in z; discrete points are recursion-variable values.
pub fn weight(family: &PolyFamily) -> Result<WeightFunction> {
    family.validate()?;
    let fam = family.clone();
    let wf = |kind, masses, support| WeightFunction { kind, family: fam.clone(), masses, support };
    match *family {
        PolyFamily::MeixnerPollaczek { .. } => Ok(wf(WeightKind::Continuous, Vec::new(), Support::Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY })),
        PolyFamily::Meixner { mu, tau } => {
            let mut masses = Vec::new();
            let mut cum = 0.0;
            let mut w = (1.0 - tau).powf(2.0 * mu);
            let mut k = 0usize;
            loop {
                masses.push(DiscreteMass { k, point: k as f64, mass: w });
                cum += w;
                if cum > 1.0 - MASS_TAIL || k > 100_000 {
                    break;
                }
                w *= (2.0 * mu + k as f64) * tau / (k as f64 + 1.0);
                k += 1;
            }
            let count = masses.len();
            Ok(wf(WeightKind::Discrete, masses, Support::Indices { count }))
        }
        PolyFamily::Krawtchouk { n: big_n, tau } => {
            let raw = (0..=big_n).map(|k| binomial(big_n, k) * tau.powi(k as i32) * (1.0 - tau).powi((big_n - k) as i32)).collect();
            let masses = normalized(raw, |k| family.recursion_variable(k as f64));
            Ok(wf(WeightKind::Discrete, masses, Support::Indices { count: big_n + 1 }))
        }
        PolyFamily::DualHahn { n: big_n, tau, sigma } => {
            let bn = big_n as f64;
            let raw: Vec<f64> = (0..=big_n)
                .map(|k| {
                    let x = k as f64;
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    (2.0 * x + tau + sigma + 1.0) * pochhammer(tau + 1.0, k) * pochhammer(-bn, k) * factorial(big_n)
                        / (sign * pochhammer(x + tau + sigma + 1.0, big_n + 1) * pochhammer(sigma + 1.0, k) * factorial(k))
                })
                .collect();
            if !(raw.iter().all(|w| *w > 0.0) || raw.iter().all(|w| *w < 0.0)) {
                return Err(invalid("DualHahn weights change sign"));
            }
            let masses = normalized(raw, |k| family.recursion_variable(k as f64));
            Ok(wf(WeightKind::Discrete, masses, Support::Indices { count: big_n + 1 }))
        }
        PolyFamily::Racah { n: big_n, .. } => {
            let masses = normalized(racah_raw_masses(family), |k| family.recursion_variable(k as f64));
            Ok(wf(WeightKind::Discrete, masses, Support::Indices { count: big_n + 1 }))
        }
        PolyFamily::ContinuousDualHahn { tau, a, b } => {
            let mut ps = [tau, a, b];
            ps.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let [p, q, s] = ps;
            if p > 0.0 {
                return Ok(wf(WeightKind::Continuous, Vec::new(), Support::Interval { lo: 0.0, hi: f64::INFINITY }));
            }
            let lead = (ln_gamma_signed(q - p).0 + ln_gamma_signed(s - p).0 - ln_gamma_signed(-2.0 * p).0 - ln_gamma_signed(q + s).0).exp();
            let count = (-p).ceil() as usize;
            let masses = (0..count)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let w = pochhammer(2.0 * p, k) * pochhammer(p + 1.0, k) * pochhammer(p + q, k) * pochhammer(p + s, k)
                        / (pochhammer(p, k) * pochhammer(p - q + 1.0, k) * pochhammer(p - s + 1.0, k) * factorial(k));
                    let x = p + k as f64;
                    DiscreteMass { k, point: -x * x, mass: lead * sign * w }
                })
                .collect();
            Ok(wf(WeightKind::Mixed, masses, Support::Both { lo: 0.0, hi: f64::INFINITY, count }))
        }
        PolyFamily::Wilson { a, b, c: cc, d } => {
            let ps = [a, b, cc, d];
            let Some(i) = (0..4).find(|&i| ps[i].re <= 0.0) else {
                return Ok(wf(WeightKind::Continuous, Vec::new(), Support::Interval { lo: 0.0, hi: f64::INFINITY }));
            };
            let p = ps[i];
            let others: Vec<Complex64> = (0..4).filter(|&j| j != i).map(|j| ps[j]).collect();
            let ln_lead = others.iter().map(|o| ln_gamma_c(p + o) + ln_gamma_c(o - p)).sum::<Complex64>() - ln_gamma_c(-2.0 * p)
                - wilson_ln_h0(a, b, cc, d);
            let lead = ln_lead.exp().re;
            let count = (-p.re).ceil() as usize;
            let masses = (0..count)
                .map(|k| {
                    let mut num = pochhammer_c(2.0 * p, k) * pochhammer_c(p + 1.0, k);
                    let mut den = pochhammer_c(p, k) * factorial(k);
                    for o in &others {
                        num *= pochhammer_c(p + o, k);
                        den *= pochhammer_c(p - o + 1.0, k);
                    }
                    let x = p.re + k as f64;
                    DiscreteMass { k, point: -x * x, mass: lead * (num / den).re }
                })
                .collect();
            Ok(wf(WeightKind::Mixed, masses, Support::Both { lo: 0.0, hi: f64::INFINITY, count }))
        }
        PolyFamily::NewH { .. } => Err(TraError::NoClosedForm("NewH")),
        PolyFamily::NewG { .. } => Err(TraError::NoClosedForm("NewG")),
    }
}

fn negative_integer_bound(idx: f64) -> Option<usize> {
    if idx < 0.0 && idx == idx.floor() {
        Some((-idx - 1.0).max(0.0) as usize)
    } else {
        None
    }
}

/// Classical L_n^ν(x).
pub fn laguerre(n: usize, nu: f64, x: f64) -> Result<f64> {
    if let Some(big_n) = negative_integer_bound(nu) {
        if n > big_n {
            return Err(TraError::IndexOutOfValidity(format!("Laguerre index nu={nu} allows degree <= {big_n}, got {n}")));
        }
    }
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + nu + 1.0 - x) * cur - (kf + nu) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Classical P_n^{(μ,ν)}(x).
pub fn jacobi(n: usize, mu: f64, nu: f64, x: f64) -> Result<f64> {
    for idx in [mu, nu] {
        if let Some(big_n) = negative_integer_bound(idx) {
            if n > big_n {
                return Err(TraError::IndexOutOfValidity(format!("Jacobi index {idx} allows degree <= {big_n}, got {n}")));
            }
        }
    }
    let degenerate = (0..n).any(|k| {
        let kf = k as f64;
        (kf + mu + nu + 1.0).abs() < 1e-12 || (2.0 * kf + mu + nu).abs() < 1e-12
    });
    if degenerate {
        return Ok(jacobi_sum(n, mu, nu, x));
    }
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let m = 2.0 * kf + mu + nu;
        let next = if k == 0 {
            0.5 * (mu - nu) + 0.5 * (mu + nu + 2.0) * x
        } else {
            ((m + 1.0) * ((m + 2.0) * m * x + mu * mu - nu * nu) * cur - 2.0 * (kf + mu) * (kf + nu) * (m + 2.0) * prev)
                / (2.0 * (kf + 1.0) * (kf + mu + nu + 1.0) * m)
        };
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn jacobi_sum(n: usize, mu: f64, nu: f64, x: f64) -> f64 {
    let nf = n as f64;
    (0..=n)
        .map(|s| {
            binomial_real(nf + mu, n - s) * binomial_real(nf + nu, s) * (0.5 * (x - 1.0)).powi(s as i32) * (0.5 * (x + 1.0)).powi((n - s) as i32)
        })
        .sum()
}

fn ln_abs_gamma_or_pole(x: f64) -> Result<f64> {
    let (l, _) = ln_gamma_signed(x);
    if l.is_infinite() {
        return Err(TraError::IndexOutOfValidity(format!("gamma pole at {x} in basis normalization")));
    }
    Ok(l)
}

/// Basis normalization c_n.
pub fn basis_norm(spec: &BasisSpec, n: usize) -> Result<f64> {
    let nf = n as f64;
    match spec.equation {
        Equation::Laguerre => Ok((0.5 * (ln_gamma_signed(nf + 1.0).0 - ln_abs_gamma_or_pole(nf + spec.nu + 1.0)?)).exp()),
        Equation::Jacobi => {
            let (mu, nu) = (spec.mu.unwrap_or(0.0), spec.nu);
            let head = if n == 0 {
                ln_abs_gamma_or_pole(mu + nu + 2.0)?
            } else {
                (2.0 * nf + mu + nu + 1.0).abs().ln() + ln_abs_gamma_or_pole(nf + mu + nu + 1.0)?
            };
            let l = head - (mu + nu + 1.0) * 2f64.ln() + ln_gamma_signed(nf + 1.0).0
                - ln_abs_gamma_or_pole(nf + mu + 1.0)?
                - ln_abs_gamma_or_pole(nf + nu + 1.0)?;
            Ok((0.5 * l).exp())
        }
    }
}

/// φ_n(x) including its normalization.
pub fn basis_element(spec: &BasisSpec, n: usize, x: f64) -> Result<f64> {
    let cn = basis_norm(spec, n)?;
    match spec.equation {
        Equation::Laguerre => {
            if !(x >= 0.0) {
                return Err(TraError::DomainError(format!("Laguerre basis needs x >= 0, got {x}")));
            }
            let env = if x == 0.0 && spec.alpha > 0.0 { 0.0 } else { x.powf(spec.alpha) * (-spec.beta * x).exp() };
            Ok(cn * env * laguerre(n, spec.nu, x)?)
        }
        Equation::Jacobi => {
            if !(-1.0..=1.0).contains(&x) {
                return Err(TraError::DomainError(format!("Jacobi basis needs -1 <= x <= 1, got {x}")));
            }
            let env = (1.0 - x).powf(spec.alpha) * (1.0 + x).powf(spec.beta);
            Ok(cn * env * jacobi(n, spec.mu.unwrap_or(0.0), spec.nu, x)?)
        }
    }
}
