//! Basis scenarios and the three-term recursions obeyed by the expansion
//! coefficients f_n, plus their identification with polynomial families.

use crate::error::{Result, TraError};
use crate::ortho_polys::{jacobi_c, jacobi_d, jacobi_d_sq, PolyFamily};
use crate::recurrence::RecursionCoeffs;
use serde::{Deserialize, Serialize};

/// Relative tolerance for algebraic constraints between ODE parameters.
pub const CONSTRAINT_RTOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equation {
    /// x y'' + (a+bx) y' + (A₊x + A₋/x) y = A₀ y on x ≥ 0.
    Laguerre,
    /// (1−x²) y'' − [a−b+x(a+b)] y' + (A₊/(1+x) + A₋/(1−x) + A₁x) y = A₀ y on [−1, 1].
    Jacobi,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeParams {
    pub equation: Equation,
    pub a: f64,
    pub b: f64,
    pub a_plus: f64,
    pub a_minus: f64,
    pub a_zero: f64,
    /// Always 0 for the Laguerre equation.
    pub a_one: f64,
}

impl OdeParams {
    pub fn laguerre(a: f64, b: f64, a_plus: f64, a_minus: f64, a_zero: f64) -> Self {
        Self { equation: Equation::Laguerre, a, b, a_plus, a_minus, a_zero, a_one: 0.0 }
    }

    pub fn jacobi(a: f64, b: f64, a_plus: f64, a_minus: f64, a_one: f64, a_zero: f64) -> Self {
        Self { equation: Equation::Jacobi, a, b, a_plus, a_minus, a_zero, a_one }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.a, self.b, self.a_plus, self.a_minus, self.a_zero, self.a_one];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(TraError::DomainError("ODE parameters must be finite".into()));
        }
        if self.equation == Equation::Laguerre && self.a_one != 0.0 {
            return Err(TraError::DomainError("the Laguerre equation has no A1 term".into()));
        }
        Ok(())
    }

    /// G = A₀ − ¼(a+b−1)², the Jacobi combination shared by every scenario.
    pub fn jacobi_g(&self) -> f64 {
        let h = self.a + self.b - 1.0;
        self.a_zero - 0.25 * h * h
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    A7a,
    A7b,
    B12a,
    B12b,
    B12c,
}

impl Scenario {
    pub fn equation(self) -> Equation {
        match self {
            Scenario::A7a | Scenario::A7b => Equation::Laguerre,
            _ => Equation::Jacobi,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub equation: Equation,
    pub alpha: f64,
    pub beta: f64,
    /// Jacobi only.
    pub mu: Option<f64>,
    pub nu: f64,
    pub scenario: Scenario,
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= CONSTRAINT_RTOL * x.abs().max(y.abs()).max(1.0)
}

fn signed_root(arg: f64, branch: Branch, what: &str) -> Result<f64> {
    if arg < 0.0 {
        if arg > -CONSTRAINT_RTOL {
            return Ok(0.0);
        }
        return Err(TraError::RealityViolation(format!("{what} = {arg} < 0")));
    }
    Ok(branch.sign() * arg.sqrt())
}

/// Basis for a scenario. `branch` picks the sign of the index fixed by a
/// square root (both indices in B12a); `free` sets the unconstrained index
/// in A7b, B12b and B12c (default 0).
pub fn resolve_basis(params: &OdeParams, scenario: Scenario, branch: Branch, free: Option<f64>) -> Result<BasisSpec> {
    resolve_basis_with(params, scenario, (branch, branch), free)
}

/// As [`resolve_basis`] with separate (μ, ν) branches for B12a.
pub fn resolve_basis_with(params: &OdeParams, scenario: Scenario, branches: (Branch, Branch), free: Option<f64>) -> Result<BasisSpec> {
    params.validate()?;
    if params.equation != scenario.equation() {
        return Err(TraError::ScenarioMismatch(format!("{scenario:?} does not belong to the {:?} equation", params.equation)));
    }
    let p = params;
    let free = free.unwrap_or(0.0);
    let jac = |alpha, beta, mu, nu| BasisSpec { equation: Equation::Jacobi, alpha, beta, mu: Some(mu), nu, scenario };
    match scenario {
        Scenario::A7a => {
            let nu = signed_root((1.0 - p.a).powi(2) - 4.0 * p.a_minus, branches.1, "(1-a)^2 - 4A-")?;
            Ok(BasisSpec { equation: Equation::Laguerre, alpha: 0.5 * (nu + 1.0 - p.a), beta: 0.5 * (p.b + 1.0), mu: None, nu, scenario })
        }
        Scenario::A7b => {
            if p.a_plus < -0.25 - CONSTRAINT_RTOL {
                return Err(TraError::RealityViolation(format!("A+ = {} < -1/4", p.a_plus)));
            }
            if !close(p.b * p.b, 1.0 + 4.0 * p.a_plus) {
                return Err(TraError::ConstraintViolation(format!("b^2 = {} but 1 + 4A+ = {}", p.b * p.b, 1.0 + 4.0 * p.a_plus)));
            }
            let nu = free;
            Ok(BasisSpec { equation: Equation::Laguerre, alpha: 0.5 * (nu + 2.0 - p.a), beta: 0.5 * (p.b + 1.0), mu: None, nu, scenario })
        }
        Scenario::B12a => {
            let mu = signed_root((1.0 - p.a).powi(2) - 2.0 * p.a_minus, branches.0, "(1-a)^2 - 2A-")?;
            let nu = signed_root((1.0 - p.b).powi(2) - 2.0 * p.a_plus, branches.1, "(1-b)^2 - 2A+")?;
            Ok(jac(0.5 * (mu + 1.0 - p.a), 0.5 * (nu + 1.0 - p.b), mu, nu))
        }
        Scenario::B12b => {
            if p.a_one != 0.0 {
                return Err(TraError::ScenarioRequiresA1Zero(p.a_one));
            }
            let mu = signed_root((1.0 - p.a).powi(2) - 2.0 * p.a_minus, branches.0, "(1-a)^2 - 2A-")?;
            let nu = free;
            Ok(jac(0.5 * (mu + 1.0 - p.a), 0.5 * (nu + 2.0 - p.b), mu, nu))
        }
        Scenario::B12c => {
            if p.a_one != 0.0 {
                return Err(TraError::ScenarioRequiresA1Zero(p.a_one));
            }
            let nu = signed_root((1.0 - p.b).powi(2) - 2.0 * p.a_plus, branches.1, "(1-b)^2 - 2A+")?;
            let mu = free;
            Ok(jac(0.5 * (mu + 2.0 - p.a), 0.5 * (nu + 1.0 - p.b), mu, nu))
        }
    }
}

/// Checks that a basis satisfies its scenario's relations for these parameters.
pub fn check_scenario(params: &OdeParams, spec: &BasisSpec) -> Result<()> {
    let p = params;
    let mismatch = |what: &str| Err(TraError::ScenarioMismatch(format!("{:?}: {what} does not hold", spec.scenario)));
    if p.equation != spec.equation || spec.scenario.equation() != spec.equation {
        return mismatch("equation type");
    }
    let mu = spec.mu.unwrap_or(0.0);
    let nu = spec.nu;
    let ok = match spec.scenario {
        Scenario::A7a => {
            close(2.0 * spec.alpha, nu + 1.0 - p.a) && close(2.0 * spec.beta, p.b + 1.0) && close(nu * nu, (1.0 - p.a).powi(2) - 4.0 * p.a_minus)
        }
        Scenario::A7b => close(2.0 * spec.alpha, nu + 2.0 - p.a) && close(2.0 * spec.beta, p.b + 1.0) && close(p.b * p.b, 1.0 + 4.0 * p.a_plus),
        Scenario::B12a => {
            close(2.0 * spec.alpha, mu + 1.0 - p.a)
                && close(2.0 * spec.beta, nu + 1.0 - p.b)
                && close(mu * mu, (1.0 - p.a).powi(2) - 2.0 * p.a_minus)
                && close(nu * nu, (1.0 - p.b).powi(2) - 2.0 * p.a_plus)
        }
        Scenario::B12b => {
            if p.a_one != 0.0 {
                return Err(TraError::ScenarioRequiresA1Zero(p.a_one));
            }
            close(2.0 * spec.alpha, mu + 1.0 - p.a) && close(2.0 * spec.beta, nu + 2.0 - p.b) && close(mu * mu, (1.0 - p.a).powi(2) - 2.0 * p.a_minus)
        }
        Scenario::B12c => {
            if p.a_one != 0.0 {
                return Err(TraError::ScenarioRequiresA1Zero(p.a_one));
            }
            close(2.0 * spec.alpha, mu + 2.0 - p.a) && close(2.0 * spec.beta, nu + 1.0 - p.b) && close(nu * nu, (1.0 - p.b).powi(2) - 2.0 * p.a_plus)
        }
    };
    if ok {
        Ok(())
    } else {
        mismatch("basis relations")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RawKind {
    A8a,
    A8b,
    B13a,
    B13b,
    B13c,
}

/// The coefficient recursion z f_n = s_n f_n + t_{n−1} f_{n−1} + t_n f_{n+1}
/// produced by a scenario, with z a fixed combination of ODE parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraSystem {
    pub params: OdeParams,
    pub spec: BasisSpec,
    pub kind: RawKind,
}

impl TraSystem {
    pub fn new(params: &OdeParams, spec: &BasisSpec) -> Result<Self> {
        check_scenario(params, spec)?;
        let kind = match spec.scenario {
            Scenario::A7a => RawKind::A8a,
            Scenario::A7b => RawKind::A8b,
            Scenario::B12a => RawKind::B13a,
            Scenario::B12b => RawKind::B13b,
            Scenario::B12c => RawKind::B13c,
        };
        let sys = Self { params: *params, spec: *spec, kind };
        match kind {
            RawKind::A8a if sys.a8a_p() == 0.0 => Err(TraError::ZeroOffDiagonal { n: 0 }),
            RawKind::B13a if params.a_one == 0.0 => Err(TraError::ZeroOffDiagonal { n: 0 }),
            _ => Ok(sys),
        }
    }

    fn a8a_p(&self) -> f64 {
        self.params.a_plus - 0.25 * self.params.b * self.params.b + 0.25
    }

    fn q(&self, n: usize) -> f64 {
        let m = 2.0 * n as f64 + self.spec.mu.unwrap_or(0.0) + self.spec.nu + 2.0;
        0.25 * m * m + self.params.jacobi_g()
    }

    /// The ODE-parameter combination playing the role of z.
    pub fn z_raw(&self) -> f64 {
        let p = &self.params;
        let mu = self.spec.mu.unwrap_or(0.0);
        let nu = self.spec.nu;
        match self.kind {
            RawKind::A8a => -(p.a_zero + 0.5 * p.a * p.b) / self.a8a_p(),
            RawKind::A8b => p.a_minus + 0.25 * (nu * nu - 1.0) - 0.25 * (p.a - 1.0).powi(2),
            RawKind::B13a => p.jacobi_g() / p.a_one,
            RawKind::B13b => p.a_plus + 0.5 * (nu + 1.0).powi(2) - 0.5 * (p.b - 1.0).powi(2),
            RawKind::B13c => p.a_minus + 0.5 * (mu + 1.0).powi(2) - 0.5 * (p.a - 1.0).powi(2),
        }
    }

    /// (s_n, t_n²) with the sign of t² kept, so negative-index bases give t² < 0.
    pub fn formal_coeff_sq(&self, n: usize) -> (f64, f64) {
        let (s, t) = self.signed_parts(n);
        (s, t.0 * t.0 * t.1)
    }

    /// s_n and t_n as (real factor, sign of the radicand).
    fn signed_parts(&self, n: usize) -> (f64, (f64, f64)) {
        let p = &self.params;
        let nf = n as f64;
        let mu = self.spec.mu.unwrap_or(0.0);
        let nu = self.spec.nu;
        let root = |x: f64| (x.abs().sqrt(), if x < 0.0 { -1.0 } else { 1.0 });
        match self.kind {
            RawKind::A8a => {
                let big_p = self.a8a_p();
                let m = big_p - 0.5;
                let (r, sg) = root((nf + 1.0) * (nf + nu + 1.0));
                (-(2.0 * nf + nu + 1.0) * m / big_p, (r, sg))
            }
            RawKind::A8b => {
                let omega = p.a_zero + 0.5 * (nu + p.a * p.b + 1.0);
                let (r, sg) = root((nf + 1.0) * (nf + nu + 1.0));
                ((2.0 * nf + nu + 1.0) * (nf + omega), (-(nf + omega + 0.5) * r, sg))
            }
            RawKind::B13a => {
                let h = 2.0 * nf + mu + nu + 1.0;
                let (r, sg) = root(jacobi_d_sq(n, mu, nu));
                (jacobi_c(n, mu, nu) - h * h / (4.0 * p.a_one), (r, sg))
            }
            RawKind::B13b => {
                let lead = if n == 0 { 0.0 } else { 2.0 * nf * (nf + mu) / (2.0 * nf + mu + nu) };
                let (r, sg) = root(jacobi_d_sq(n, mu, nu));
                (-lead + (jacobi_c(n, mu, nu) + 1.0) * self.q(n), (r * self.q(n), sg))
            }
            RawKind::B13c => {
                let lead = if n == 0 { 0.0 } else { 2.0 * nf * (nf + nu) / (2.0 * nf + mu + nu) };
                let (r, sg) = root(jacobi_d_sq(n, mu, nu));
                (-lead - (jacobi_c(n, mu, nu) - 1.0) * self.q(n), (-r * self.q(n), sg))
            }
        }
    }

    /// Real (s_n, t_n); errors when the radicand is negative or t_n = 0.
    pub fn coeff(&self, n: usize) -> Result<(f64, f64)> {
        let (s, (t, sg)) = self.signed_parts(n);
        if !s.is_finite() || !t.is_finite() {
            return Err(TraError::NonFiniteCoefficient { n });
        }
        if t == 0.0 {
            return Err(TraError::ZeroOffDiagonal { n });
        }
        if sg < 0.0 {
            return Err(TraError::RealityViolation(format!("t_{n}^2 < 0: formal recursion only")));
        }
        Ok((s, t))
    }

    pub fn coeffs(&self, len: usize) -> Result<RecursionCoeffs> {
        let mut s = Vec::with_capacity(len);
        let mut t = Vec::with_capacity(len);
        for n in 0..len {
            let (sn, tn) = self.coeff(n)?;
            s.push(sn);
            t.push(tn);
        }
        Ok(RecursionCoeffs::new(s, t))
    }

    /// Like [`TraSystem::coeffs`] but a vanishing t_n ends the stream early,
    /// the way a terminating (finite) series ends.
    pub fn coeffs_until_zero(&self, len: usize) -> Result<RecursionCoeffs> {
        let mut s = Vec::with_capacity(len);
        let mut t = Vec::with_capacity(len);
        for n in 0..len {
            match self.coeff(n) {
                Ok((sn, tn)) => {
                    s.push(sn);
                    t.push(tn);
                }
                Err(TraError::ZeroOffDiagonal { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        Ok(RecursionCoeffs::new(s, t))
    }
}

/// raw = scale·family + offset for z and s_n; t_n scales by `scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralMap {
    pub scale: f64,
    pub offset: f64,
    pub raw_value: f64,
}

impl SpectralMap {
    /// Value of the family's recursion variable.
    pub fn family_value(&self) -> f64 {
        (self.raw_value - self.offset) / self.scale
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pairing {
    pub family: PolyFamily,
    pub map: SpectralMap,
    /// Negative-index basis: only (s, t²) correspond, t is imaginary.
    pub formal: bool,
}

impl Pairing {
    /// Largest |Δ|/max(1,|·|) between raw (s, t²) and the mapped family's, over n < len.
    pub fn max_mismatch(&self, sys: &TraSystem, len: usize) -> f64 {
        let m = &self.map;
        (0..len)
            .map(|n| {
                let (rs, rt2) = sys.formal_coeff_sq(n);
                let (fs, ft2) = self.family.formal_coeff_sq(n);
                let ds = (rs - (m.scale * fs + m.offset)).abs() / rs.abs().max(1.0);
                let dt = (rt2 - m.scale * m.scale * ft2).abs() / rt2.abs().max(1.0);
                ds.max(dt)
            })
            .fold(0.0, f64::max)
    }

    /// Largest signed-t mismatch, for non-formal pairings.
    pub fn max_t_mismatch(&self, sys: &TraSystem, len: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for n in 0..len {
            let (_, rt) = sys.coeff(n)?;
            let (_, ft) = self.family.coeff(n)?;
            worst = worst.max((rt - self.map.scale * ft).abs() / rt.abs().max(1.0));
        }
        Ok(worst)
    }
}

fn require(sys: &TraSystem, kind: RawKind) -> Result<()> {
    if sys.kind != kind {
        return Err(TraError::ScenarioMismatch(format!("expected a {kind:?} recursion, got {:?}", sys.kind)));
    }
    Ok(())
}

fn negative_index(x: f64) -> Result<usize> {
    let n = -x - 1.0;
    if n >= 0.0 && (n - n.round()).abs() < 1e-12 {
        Ok(n.round() as usize)
    } else {
        Err(TraError::NoFamilyApplies(format!("index {x} is not of the form -N-1")))
    }
}

/// Continuous spectrum, 4A₊ > b².
pub fn pair_meixner_pollaczek(sys: &TraSystem) -> Result<Pairing> {
    require(sys, RawKind::A8a)?;
    let big_p = sys.a8a_p();
    let cos_t = (big_p - 0.5) / big_p;
    if !(big_p > 0.25) {
        return Err(TraError::NoFamilyApplies(format!("MeixnerPollaczek needs 4A+ > b^2 (cos theta = {cos_t})")));
    }
    let theta = cos_t.acos();
    let family = PolyFamily::MeixnerPollaczek { mu: 0.5 * (sys.spec.nu + 1.0), theta };
    Ok(Pairing { family, map: SpectralMap { scale: 2.0 * theta.sin(), offset: 0.0, raw_value: sys.z_raw() }, formal: false })
}

/// Discrete infinite spectrum, 4A₊ ≤ b² − 1.
pub fn pair_meixner(sys: &TraSystem) -> Result<Pairing> {
    require(sys, RawKind::A8a)?;
    let big_p = sys.a8a_p();
    if !(big_p < 0.0) {
        return Err(TraError::NoFamilyApplies("Meixner needs 4A+ < b^2 - 1".into()));
    }
    let theta = ((big_p - 0.5) / big_p).acosh();
    let sh = theta.sinh();
    let family = PolyFamily::Meixner { mu: 0.5 * (sys.spec.nu + 1.0), tau: (-2.0 * theta).exp() };
    let map = SpectralMap { scale: -2.0 * sh, offset: -(sys.spec.nu + 1.0) * sh, raw_value: sys.z_raw() };
    Ok(Pairing { family, map, formal: false })
}

/// Finite spectrum with ν = −N−1 (twisted polynomials).
pub fn pair_krawtchouk(sys: &TraSystem) -> Result<Pairing> {
    require(sys, RawKind::A8a)?;
    let n = negative_index(sys.spec.nu)?;
    if n == 0 {
        return Err(TraError::NoFamilyApplies("Krawtchouk needs N >= 1".into()));
    }
    let big_p = sys.a8a_p();
    let theta = (-(big_p - 0.5) / big_p).asinh();
    let family = PolyFamily::Krawtchouk { n, tau: 0.5 * (1.0 + theta.tanh()) };
    let map = SpectralMap { scale: -1.0, offset: n as f64 * theta.cosh(), raw_value: sys.z_raw() };
    Ok(Pairing { family, map, formal: true })
}

/// 2A₀ + ab as printed for the Krawtchouk case.
pub fn krawtchouk_a0_printed(k: f64, n: usize, theta: f64) -> f64 {
    let nf = n as f64;
    let e = ((1.0 + theta.tanh()) / (1.0 - theta.tanh())).sqrt();
    (2.0 * k * theta.cosh() - nf * (theta.sinh() + e)) / (1.0 - theta.sinh())
}

/// 2A₀ + ab implied by the recursion comparison for the Krawtchouk case.
pub fn krawtchouk_a0_derived(k: f64, n: usize, theta: f64) -> f64 {
    (2.0 * k - n as f64) * theta.cosh() / (1.0 + theta.sinh())
}

/// Continuous (τ > 0) or mixed (τ < 0) spectrum, family variable z².
pub fn pair_continuous_dual_hahn(sys: &TraSystem) -> Result<Pairing> {
    require(sys, RawKind::A8b)?;
    let p = &sys.params;
    let h = 0.5 * (sys.spec.nu + 1.0);
    let tau = p.a_zero + 0.5 * (p.a * p.b + 1.0);
    let family = PolyFamily::ContinuousDualHahn { tau, a: h, b: h };
    family.validate().map_err(|e| TraError::NoFamilyApplies(e.to_string()))?;
    Ok(Pairing { family, map: SpectralMap { scale: 1.0, offset: h * h - h, raw_value: sys.z_raw() }, formal: false })
}

/// Finite spectrum with ν = −N−1.
pub fn pair_dual_hahn(sys: &TraSystem) -> Result<Pairing> {
    require(sys, RawKind::A8b)?;
    let n = negative_index(sys.spec.nu)?;
    let nf = n as f64;
    let x = 2.0 * sys.params.a_zero + sys.params.a * sys.params.b;
    let family = PolyFamily::DualHahn { n, tau: 0.5 * (x - nf - 1.0), sigma: 0.5 * (-x - nf - 1.0) };
    let map = SpectralMap { scale: -1.0, offset: 0.25 * nf * nf + 0.5 * nf, raw_value: sys.z_raw() };
    Ok(Pairing { family, map, formal: true })
}

/// New continuous-spectrum polynomial, |G/A₁| ≤ 1, σ = 0, variable cos θ.
pub fn pair_new_h(sys: &TraSystem) -> Result<Pairing> {
    require(sys, RawKind::B13a)?;
    let (g, a1) = (sys.params.jacobi_g(), sys.params.a_one);
    let ratio = g / a1;
    if !(ratio.abs() < 1.0) {
        return Err(TraError::NoFamilyApplies(format!("NewH needs A1^2 > G^2, got G/A1 = {ratio}")));
    }
    let family = PolyFamily::NewH {
        mu: sys.spec.mu.unwrap_or(0.0),
        nu: sys.spec.nu,
        theta: ratio.acos(),
        sigma: 0.0,
        z: -a1.signum() * (a1 * a1 - g * g).sqrt(),
    };
    Ok(Pairing { family, map: SpectralMap { scale: 1.0, offset: 0.0, raw_value: ratio }, formal: false })
}

/// New discrete polynomial, G/A₁ > 1, variable (1+τ)/(2√τ).
pub fn pair_new_g(sys: &TraSystem) -> Result<Pairing> {
    require(sys, RawKind::B13a)?;
    let (g, a1) = (sys.params.jacobi_g(), sys.params.a_one);
    let ratio = g / a1;
    if !(ratio > 1.0) {
        return Err(TraError::NoFamilyApplies(format!("NewG needs G/A1 > 1, got {ratio}")));
    }
    let w = (ratio * ratio - 1.0).sqrt();
    let root_tau = ratio - w;
    let family = PolyFamily::NewG { mu: sys.spec.mu.unwrap_or(0.0), nu: sys.spec.nu, tau: root_tau * root_tau, sigma: 0.0, z: -a1 * w };
    Ok(Pairing { family, map: SpectralMap { scale: 1.0, offset: 0.0, raw_value: ratio }, formal: false })
}

/// Wilson {σ±iτ, γ, γ} with 2σ = ν+1, 2γ = μ+1, τ² = G; family variable z².
pub fn pair_wilson(sys: &TraSystem) -> Result<Pairing> {
    require(sys, RawKind::B13c)?;
    let mu = sys.spec.mu.unwrap_or(0.0);
    let family = PolyFamily::wilson_symmetric(0.5 * (sys.spec.nu + 1.0), sys.params.jacobi_g(), 0.5 * (mu + 1.0));
    family.validate().map_err(|e| TraError::NoFamilyApplies(e.to_string()))?;
    Ok(Pairing { family, map: SpectralMap { scale: 2.0, offset: 0.5 * (mu + 1.0).powi(2), raw_value: sys.z_raw() }, formal: false })
}

/// Racah with μ = −N−1 and G < 0.
pub fn pair_racah(sys: &TraSystem) -> Result<Pairing> {
    require(sys, RawKind::B13c)?;
    let mu = sys.spec.mu.unwrap_or(0.0);
    let n = negative_index(mu)?;
    let g = sys.params.jacobi_g();
    if !(g < 0.0) {
        return Err(TraError::NoFamilyApplies("Racah needs A0 < (a+b-1)^2/4".into()));
    }
    let r = (-4.0 * g).sqrt();
    let sigma = 0.5 * (mu + sys.spec.nu + r);
    let gamma = 0.5 * (mu + sys.spec.nu - r);
    let nf = n as f64;
    let family = PolyFamily::racah_symmetric(n, gamma, sigma);
    Ok(Pairing { family, map: SpectralMap { scale: -2.0, offset: 0.5 * nf * nf, raw_value: sys.z_raw() }, formal: true })
}

fn denominators(mu: f64, nu: f64, n: usize, shifts: &[f64]) -> Result<()> {
    for s in shifts {
        let d = 2.0 * n as f64 + mu + nu + s;
        if d.abs() < 1e-300 {
            return Err(TraError::DegenerateDenominator(format!("2n+mu+nu+{s} = 0")));
        }
    }
    Ok(())
}

/// |LHS − RHS| of the identity used to match the Jacobi-case recursions,
/// divided by max(1, largest summand) so rounding near poles stays small.
pub fn check_identity_52(mu: f64, nu: f64, chi: f64, n: usize) -> Result<f64> {
    let nf = n as f64;
    denominators(mu, nu, n, &[1.0, 2.0])?;
    if n > 0 {
        denominators(mu, nu, n, &[0.0])?;
    }
    let m = 2.0 * nf + mu + nu;
    let top = (m + 2.0).powi(2) + chi;
    let mut lhs = vec![(nf + mu + 1.0) * (nf + mu + nu + 1.0) * top / ((m + 1.0) * (m + 2.0))];
    let mut rhs = vec![0.5 * top];
    if n > 0 {
        lhs.push(nf * (nf + nu) * (m * m + chi) / (m * (m + 1.0)));
        rhs.push(-4.0 * nf * (nf + nu) / m);
        rhs.push(0.5 * (mu * mu - nu * nu) / (m * (m + 2.0)) * top);
    } else {
        rhs.push(0.5 * (mu - nu) / (mu + nu + 2.0) * top);
    }
    let scale = lhs.iter().chain(&rhs).fold(1.0f64, |a, t| a.max(t.abs()));
    Ok((lhs.iter().sum::<f64>() - rhs.iter().sum::<f64>()).abs() / scale)
}

/// Residuals of the two auxiliary identities relating n(C_n ± 1) to the Jacobi recursion terms.
pub fn check_identities_b11(mu: f64, nu: f64, n: usize) -> Result<(f64, f64)> {
    if n == 0 {
        return Ok((0.0, 0.0));
    }
    denominators(mu, nu, n, &[0.0, 2.0])?;
    let nf = n as f64;
    let m = 2.0 * nf + mu + nu;
    let cn = jacobi_c(n, mu, nu);
    let base = 2.0 * nf * (nf + mu + nu + 1.0) / (m * (m + 2.0));
    let rb = base * (mu - nu) - (2.0 * nf * (nf + mu) / m - nf * (cn + 1.0));
    let rc = base * (nu - mu) - (2.0 * nf * (nf + nu) / m + nf * (cn - 1.0));
    Ok((rb.abs(), rc.abs()))
}

/// μ↔ν, a↔b, α↔β, A₊↔A₋ (and B12b↔B12c).
pub fn apply_b14(params: &OdeParams, spec: &BasisSpec) -> Result<(OdeParams, BasisSpec)> {
    if params.equation != Equation::Jacobi || spec.equation != Equation::Jacobi {
        return Err(TraError::ScenarioMismatch("the exchange symmetry applies to the Jacobi equation only".into()));
    }
    let p = OdeParams { a: params.b, b: params.a, a_plus: params.a_minus, a_minus: params.a_plus, ..*params };
    let scenario = match spec.scenario {
        Scenario::B12b => Scenario::B12c,
        Scenario::B12c => Scenario::B12b,
        s => s,
    };
    let s = BasisSpec { alpha: spec.beta, beta: spec.alpha, mu: Some(spec.nu), nu: spec.mu.unwrap_or(0.0), scenario, ..*spec };
    Ok((p, s))
}

/// The Jacobi off-diagonal D_n, re-exported for recursion comparisons.
pub fn d_n(n: usize, mu: f64, nu: f64) -> f64 {
    jacobi_d(n, mu, nu)
}
