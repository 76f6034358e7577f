//! Symmetric three-term recursions z P_n = s_n P_n + t_{n−1} P_{n−1} + t_n P_{n+1}.

use crate::error::{Result, TraError};
use serde::{Deserialize, Serialize};

/// Largest degree the forward recursion will produce.
pub const DEFAULT_N_MAX: usize = 500;

/// Diagonal and off-diagonal streams; `t[n]` couples degrees n and n+1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionCoeffs {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
}

impl RecursionCoeffs {
    pub fn new(s: Vec<f64>, t: Vec<f64>) -> Self {
        Self { s, t }
    }

    /// Tabulate `len` entries of a coefficient rule n ↦ (s_n, t_n).
    pub fn from_fn<F: FnMut(usize) -> (f64, f64)>(len: usize, mut rule: F) -> Self {
        let (s, t) = (0..len).map(&mut rule).unzip();
        Self { s, t }
    }

    pub fn len(&self) -> usize {
        self.s.len().min(self.t.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolySequence {
    pub values: Vec<f64>,
    pub argument: f64,
    pub coeffs: RecursionCoeffs,
}

impl PolySequence {
    /// Highest degree held.
    pub fn degree(&self) -> usize {
        self.values.len() - 1
    }
}

/// P_0..P_{n_max} at z by forward recursion.
pub fn run_recursion(coeffs: &RecursionCoeffs, z: f64, n_max: usize) -> Result<PolySequence> {
    if n_max > DEFAULT_N_MAX {
        return Err(TraError::RecursionTooLong { requested: n_max, cap: DEFAULT_N_MAX });
    }
    let values = forward(coeffs, z, n_max)?;
    Ok(PolySequence { values, argument: z, coeffs: coeffs.clone() })
}

fn forward(coeffs: &RecursionCoeffs, z: f64, n_max: usize) -> Result<Vec<f64>> {
    if n_max > 0 && coeffs.len() < n_max {
        return Err(TraError::CoefficientsTooShort { needed: n_max, have: coeffs.len() });
    }
    let mut p = Vec::with_capacity(n_max + 1);
    p.push(1.0);
    let mut t_prev = 0.0;
    for n in 0..n_max {
        let (s, t) = (coeffs.s[n], coeffs.t[n]);
        if !s.is_finite() || !t.is_finite() {
            return Err(TraError::NonFiniteCoefficient { n });
        }
        if t == 0.0 {
            return Err(TraError::ZeroOffDiagonal { n });
        }
        let below = if n == 0 { 0.0 } else { p[n - 1] };
        let next = ((z - s) * p[n] - t_prev * below) / t;
        p.push(next);
        t_prev = t;
    }
    Ok(p)
}

/// |Σ_{n<N} P_n² − t_{N−1}(P'_N P_{N−1} − P_N P'_{N−1})| with central differences.
///
/// `h` is used as given; [`default_cd_step`] gives the conventional choice.
pub fn christoffel_darboux_check(seq: &PolySequence, z: f64, h: f64) -> f64 {
    let big_n = seq.degree();
    if big_n == 0 {
        return 0.0;
    }
    let at = |x: f64| forward(&seq.coeffs, x, big_n).expect("sequence coefficients were valid");
    let p = at(z);
    let hi = at(z + h);
    let lo = at(z - h);
    let d = |n: usize| (hi[n] - lo[n]) / (2.0 * h);
    let sum: f64 = p[..big_n].iter().map(|v| v * v).sum();
    let t = seq.coeffs.t[big_n - 1];
    (sum - t * (d(big_n) * p[big_n - 1] - p[big_n] * d(big_n - 1))).abs()
}

pub fn default_cd_step(z: f64) -> f64 {
    1e-5 * z.abs().max(1.0)
}
