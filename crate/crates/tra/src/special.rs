//! Gamma-type special functions and terminating hypergeometric sums.

use num_complex::Complex64;
use twofloat::TwoFloat;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Pochhammer symbols up to this length are formed by direct products.
pub const POCHHAMMER_DIRECT_MAX: usize = 64;

/// Complex log-gamma (Lanczos, g = 7, nine terms) with reflection for Re z < 1/2.
///
/// The imaginary part is a continuous branch in the right half-plane; callers
/// that need a principal angle should pass it through [`wrap_angle`].
pub fn ln_gamma_c(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return Complex64::new(PI.ln(), 0.0) - ln_sin(z * PI) - ln_gamma_c(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// ln sin w without overflow for large |Im w|.
fn ln_sin(w: Complex64) -> Complex64 {
    let i = Complex64::i();
    if w.im.abs() < 20.0 {
        return w.sin().ln();
    }
    if w.im > 0.0 {
        -i * w + ((2.0 * i * w).exp() - 1.0).ln() - (2.0 * i).ln()
    } else {
        i * w + (1.0 - (-2.0 * i * w).exp()).ln() - (2.0 * i).ln()
    }
}

/// ln|Γ(x)| together with the sign of Γ(x). Poles give (+inf, 1).
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x <= 0.0 && x == x.floor() {
        return (f64::INFINITY, 1.0);
    }
    let lg = ln_gamma_c(Complex64::new(x, 0.0)).re;
    let sign = if x > 0.0 || (x.floor() as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    (lg, sign)
}

pub fn ln_gamma(x: f64) -> f64 {
    ln_gamma_signed(x).0
}

/// Real gamma function; overflows to ±inf past x ≈ 171.6.
pub fn gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    ln_gamma_c(Complex64::new(x, 0.0)).re.exp()
}

/// |Γ(z)|² = exp(2 Re ln Γ(z)).
pub fn abs_gamma_sq(z: Complex64) -> f64 {
    (2.0 * ln_gamma_c(z).re).exp()
}

/// arg Γ(z) reduced to (−π, π].
pub fn arg_gamma(z: Complex64) -> f64 {
    wrap_angle(ln_gamma_c(z).im)
}

/// Reduce an angle to (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut r = x.rem_euclid(two_pi);
    if r > PI {
        r -= two_pi;
    }
    r
}

fn is_nonpositive_integer(a: f64) -> bool {
    a <= 0.0 && a == a.floor()
}

/// Rising factorial (a)_n for real a.
pub fn pochhammer(a: f64, n: usize) -> f64 {
    if n <= POCHHAMMER_DIRECT_MAX {
        return (0..n).fold(1.0, |acc, j| acc * (a + j as f64));
    }
    if is_nonpositive_integer(a) && (n as f64) > -a {
        return 0.0;
    }
    let (l1, s1) = ln_gamma_signed(a + n as f64);
    let (l0, s0) = ln_gamma_signed(a);
    s1 * s0 * (l1 - l0).exp()
}

/// Rising factorial (a)_n for complex a.
pub fn pochhammer_c(a: Complex64, n: usize) -> Complex64 {
    if n <= POCHHAMMER_DIRECT_MAX || a.im == 0.0 && is_nonpositive_integer(a.re) {
        if a.im == 0.0 && is_nonpositive_integer(a.re) && (n as f64) > -a.re {
            return Complex64::new(0.0, 0.0);
        }
        return (0..n).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (a + j as f64));
    }
    (ln_gamma_c(a + n as f64) - ln_gamma_c(a)).exp()
}

pub fn factorial(n: usize) -> f64 {
    if n <= 170 {
        (1..=n).fold(1.0, |acc, j| acc * j as f64)
    } else {
        f64::INFINITY
    }
}

/// Binomial coefficient C(n, k) for integers, zero when k > n.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Generalized binomial C(a, j) = a(a−1)…(a−j+1)/j! for real a.
pub fn binomial_real(a: f64, j: usize) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (a - i as f64) / (i + 1) as f64)
}

/// Σ_{k=0}^{m} Π(upper)_k / Π(lower)_k · x^k / k!.
///
/// The caller fixes the number of terms; with an upper parameter −m the
/// series terminates there and a lower parameter −N with N ≥ m is never
/// divided by zero.
pub fn hyper_terminating(upper: &[Complex64], lower: &[Complex64], x: Complex64, m: usize) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..m {
        let kf = k as f64;
        let mut num = x / (kf + 1.0);
        for a in upper {
            num *= a + kf;
        }
        let mut den = Complex64::new(1.0, 0.0);
        for b in lower {
            den *= b + kf;
        }
        term = term * num / den;
        sum += term;
    }
    sum
}

/// Parameter of a real hypergeometric sum in double-double precision.
/// `Quad` stands for a conjugate pair c, c̄ with (c+k)(c̄+k) = (center+k)² + offset.
#[derive(Clone, Copy, Debug)]
pub enum HyperParam {
    Real(TwoFloat),
    Quad { center: TwoFloat, offset: TwoFloat },
}

impl HyperParam {
    fn at(&self, k: f64) -> TwoFloat {
        match *self {
            HyperParam::Real(a) => a + k,
            HyperParam::Quad { center, offset } => {
                let h = center + k;
                h * h + offset
            }
        }
    }
}

/// Exact-as-possible sum of a few doubles.
pub fn dd_sum(xs: &[f64]) -> TwoFloat {
    xs.iter().fold(TwoFloat::from(0.0), |acc, x| acc + *x)
}

/// Real terminating series as in [`hyper_terminating`], accumulated in
/// double-double so alternating sums keep their leading digits.
pub fn hyper_terminating_dd(upper: &[HyperParam], lower: &[HyperParam], x: TwoFloat, m: usize) -> f64 {
    let mut term = TwoFloat::from(1.0);
    let mut sum = term;
    for k in 0..m {
        let kf = k as f64;
        let mut num = x / (kf + 1.0);
        for a in upper {
            num = num * a.at(kf);
        }
        let mut den = TwoFloat::from(1.0);
        for b in lower {
            den = den * b.at(kf);
        }
        term = dd_div(term * num, den);
        sum += term;
    }
    sum.hi() + sum.lo()
}

/// a / b with two correction steps; the crate's own TwoFloat division
/// keeps only double precision.
fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q1 = a.hi() / b.hi();
    let r = a - b * q1;
    let q2 = r.hi() / b.hi();
    let r = r - b * q2;
    let q3 = r.hi() / b.hi();
    TwoFloat::new_add(q1, q2) + q3
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn r(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
