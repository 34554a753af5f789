//! Complex log-gamma, K-Bessel of complex order, the Fourier transform of
//! `(u²+1)^{-s}u^k`, and the gamma factors of the functional equations.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{integrate, wynn_epsilon};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

// B_{2j}/(2j(2j-1)) for j = 1..=12
const STIRLING: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
    77683.0 / 5796.0,
    -236_364_091.0 / 1_506_960.0,
];

const STIRLING_SHIFT: f64 = 16.0;

/// `log Γ(z)`, the branch continuous off the negative real axis and real on
/// the positive one.
///
/// Evaluated by Stirling's series after shifting `Re z` past 16 with
/// `log Γ(z) = log Γ(z + n) − Σ_{k<n} log(z + k)`.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::Pole(format!("Γ has a pole at {}", z.re)));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Invalid(format!("log_gamma of non-finite {z}")));
    }
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < STIRLING_SHIFT {
        shift += w.ln();
        w += 1.0;
    }
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for b in STIRLING {
        series += pow * b;
        pow *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - shift)
}

/// `Γ(z)`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// `K_ν(x) = ∫₀^∞ e^{-x cosh t} cosh(νt) dt` for `x > 0`.
///
/// The integrand is integrated as `e^{-x(cosh t − 1)} cosh(νt)` and rescaled by
/// `e^{-x}`; the range stops where the envelope falls below `1e-18` of its peak.
pub fn bessel_k(nu: Complex64, x: f64) -> Result<Complex64> {
    if x.is_nan() || x <= 0.0 || x.is_infinite() {
        return Err(Error::Invalid(format!("bessel_k needs x > 0, got {x}")));
    }
    let r = nu.re.abs();
    // log-envelope −x(cosh t − 1) + |Re ν| t, maximal where sinh t = |Re ν|/x
    let envelope = |t: f64| -x * (t.cosh() - 1.0) + r * t;
    let peak_t = (r / x).asinh();
    let floor = envelope(peak_t) - 18.0 * std::f64::consts::LN_10;
    let mut hi = peak_t.max(1.0);
    while envelope(hi) > floor {
        hi *= 1.25;
    }
    let f = |t: f64| (nu * t).cosh() * (-x * (t.cosh() - 1.0)).exp();
    let mut knots = vec![0.0];
    if peak_t > 0.0 {
        knots.push(peak_t);
    }
    knots.push(hi);
    let mut total = Complex64::new(0.0, 0.0);
    for pair in knots.windows(2) {
        total += integrate(f, pair[0], pair[1], 1e-14, 0.0, 4000)?;
    }
    Ok(total * (-x).exp())
}

/// `∫_ℝ e(uy)(u²+1)^{-s}u^k du` by half-period panels summed with Wynn's
/// epsilon algorithm.
///
/// The integrand is folded onto `u ≥ 0`: `2∫cos(2πuy)(u²+1)^{-s}du` for `k = 0`
/// and `2i∫sin(2πuy)u(u²+1)^{-s}du` for `k = 1`. Panels end on the zeros of the
/// trigonometric factor, so the panel values alternate and the epsilon table
/// accelerates the slowly decaying tail.
pub fn fourier_integral(s: Complex64, k: u32, y: f64) -> Result<Complex64> {
    if k > 1 {
        return Err(Error::Invalid(format!("k must be 0 or 1, got {k}")));
    }
    if y == 0.0 || !y.is_finite() {
        return Err(Error::Invalid(format!("y must be nonzero, got {y}")));
    }
    if s.re <= 0.5 || (k == 1 && s.re <= 1.0) {
        return Err(Error::Invalid(format!("Re s = {} is outside the convergent range for k = {k}", s.re)));
    }
    let omega = 2.0 * PI * y;
    let f = |u: f64| {
        let env = (-s * (u * u + 1.0).ln()).exp();
        if k == 0 {
            env * (omega * u).cos()
        } else {
            env * u * (omega * u).sin()
        }
    };
    let half = 0.5 / y.abs();
    // first zero of cos is a quarter period in; sin vanishes at 0
    let first = if k == 0 { 0.5 * half } else { half };
    let mut a = 0.0;
    let mut b = first;
    let mut partial = Complex64::new(0.0, 0.0);
    let mut sums = Vec::new();
    // panels until the envelope has started its monotone decay, then a fixed batch for extrapolation
    let settle = (2.0f64).max(4.0 * half);
    let mut extra = 0;
    while extra < 48 {
        partial += integrate(f, a, b, 1e-15, 1e-300, 400)?;
        if b > settle {
            sums.push(partial);
            extra += 1;
        }
        a = b;
        b += half;
    }
    let (limit, err) = wynn_epsilon(&sums);
    if !(err <= 1e-10 * limit.norm().max(1e-300) || err < 1e-15) {
        return Err(Error::Quadrature(format!("tail extrapolation did not settle (gap {err:e})")));
    }
    let factor = if k == 0 { Complex64::new(2.0, 0.0) } else { 2.0 * I };
    Ok(limit * factor)
}

/// Closed form `(i·sign y)^k · 2π^s|y|^{s−1/2}/Γ(s) · K_{s−1/2−k}(2π|y|)`.
pub fn fourier_bessel_rhs(s: Complex64, k: u32, y: f64) -> Result<Complex64> {
    let ay = y.abs();
    let phase = if k == 0 { Complex64::new(1.0, 0.0) } else { I * y.signum() };
    let log_mag = (s * PI.ln()) + (s - 0.5) * ay.ln() - log_gamma(s)?;
    let bessel = bessel_k(s - 0.5 - f64::from(k), 2.0 * PI * ay)?;
    Ok(phase * 2.0 * log_mag.exp() * bessel)
}

/// Relative difference between [`fourier_integral`] and [`fourier_bessel_rhs`].
pub fn fourier_bessel_identity_residual(s: Complex64, k: u32, y: f64) -> Result<f64> {
    let lhs = fourier_integral(s, k, y)?;
    let rhs = fourier_bessel_rhs(s, k, y)?;
    Ok((lhs - rhs).norm() / rhs.norm())
}

/// Spectral data at the archimedean place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaData {
    pub nu1: Complex64,
    pub nu2: Complex64,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    /// `ψ(−1) = −1`.
    pub psi_odd: bool,
    pub epsilon: Complex64,
    pub level: u64,
}

impl GammaData {
    /// `α = −ν₁−2ν₂+1`, `β = −ν₁+ν₂`, and `γ = −(α+β)`, which equals
    /// `2ν₁+ν₂−1` and makes `α+β+γ` vanish exactly in floating point.
    pub fn new(nu1: Complex64, nu2: Complex64, psi_odd: bool, epsilon: Complex64, level: u64) -> Result<Self> {
        if (epsilon.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Invalid(format!("|ε(F)| = {} is not 1", epsilon.norm())));
        }
        if level == 0 {
            return Err(Error::Zero);
        }
        let alpha = -nu1 - 2.0 * nu2 + 1.0;
        let beta = -nu1 + nu2;
        let gamma = -(alpha + beta);
        Ok(Self { nu1, nu2, alpha, beta, gamma, psi_odd, epsilon, level })
    }

    /// Level one, trivial ψ, `ε = 1`.
    pub fn level_one(nu1: Complex64, nu2: Complex64) -> Self {
        Self::new(nu1, nu2, false, Complex64::new(1.0, 0.0), 1).expect("valid level-one data")
    }

    /// `ν_j = 1/3 + i t_j`, for which α, β, γ are purely imaginary.
    pub fn tempered(t1: f64, t2: f64) -> Self {
        Self::level_one(Complex64::new(1.0 / 3.0, t1), Complex64::new(1.0 / 3.0, t2))
    }

    pub fn params(&self) -> [Complex64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    /// `α+β+γ`, evaluated left to right.
    pub fn param_sum(&self) -> Complex64 {
        self.alpha + self.beta + self.gamma
    }
}

/// `Σ_j log Γ((1+k−s+α_j)/2) − log Γ((s+k−α_j)/2)`.
fn log_gamma_ratio(s: Complex64, g: &GammaData, k: u32) -> Result<Complex64> {
    let k = f64::from(k);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in g.params() {
        acc += log_gamma((1.0 + k - s + a) / 2.0)? - log_gamma((s + k - a) / 2.0)?;
    }
    Ok(acc)
}

/// `𝖦_k(s) = Π_j Γ((1+k−s+α_j)/2)/Γ((s+k−α_j)/2)`.
pub fn gamma_factor_k(s: Complex64, g: &GammaData, k: u32) -> Result<Complex64> {
    if k > 1 {
        return Err(Error::Invalid(format!("k must be 0 or 1, got {k}")));
    }
    Ok(log_gamma_ratio(s, g, k)?.exp())
}

/// `𝖦(s) = ½(𝖦₀(s) + i·sign·𝖦₁(s))`, assembled as `½e^{L₀}(1 + i·sign·e^{L₁−L₀})`.
pub fn gamma_factor_g(s: Complex64, g: &GammaData, sign: i8) -> Result<Complex64> {
    if sign != 1 && sign != -1 {
        return Err(Error::Invalid(format!("sign must be ±1, got {sign}")));
    }
    let l0 = log_gamma_ratio(s, g, 0)?;
    let l1 = log_gamma_ratio(s, g, 1)?;
    Ok(0.5 * l0.exp() * (1.0 + I * f64::from(sign) * (l1 - l0).exp()))
}

/// `κ = 0` for even `ψχ`, `1` for odd.
pub fn kappa(psi_chi_parity: i8) -> u32 {
    u32::from(psi_chi_parity < 0)
}

/// `i^k`.
fn i_pow(k: u32) -> Complex64 {
    [Complex64::new(1.0, 0.0), I, Complex64::new(-1.0, 0.0), -I][(k % 4) as usize]
}

/// `Ξ(s) = τ(ψχ)τ(χ)²c^{-3s} i^κ π^{3(s−1/2)} Π_j Γ((1−s+κ+α_j)/2)/Γ((s+κ−α_j)/2)`.
pub fn xi_factor(
    s: Complex64,
    g: &GammaData,
    kappa: u32,
    tau_psi_chi: Complex64,
    tau_chi: Complex64,
    c: u64,
) -> Result<Complex64> {
    if kappa > 1 {
        return Err(Error::Invalid(format!("κ must be 0 or 1, got {kappa}")));
    }
    if c == 0 {
        return Err(Error::Zero);
    }
    let log_part = -3.0 * s * (c as f64).ln() + 3.0 * (s - 0.5) * PI.ln() + log_gamma_ratio(s, g, kappa)?;
    Ok(tau_psi_chi * tau_chi * tau_chi * i_pow(kappa) * log_part.exp())
}

/// Branch of the dual gamma factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    /// `k = 0` for `G_+` and `k = 1` for `G_-` when ψ is even; swapped when ψ is odd.
    pub fn k(self, psi_odd: bool) -> u32 {
        u32::from((self == Branch::Minus) != psi_odd)
    }
}

/// `G_±(s) = i^k τ(ψ) ε(F) N^{1/2−s} π^{3(s−1/2)} Π_j Γ((1−s+k+α_j)/2)/Γ((s+k−α_j)/2)`.
pub fn g_pm_factor(s: Complex64, g: &GammaData, branch: Branch, tau_psi: Complex64) -> Result<Complex64> {
    let k = branch.k(g.psi_odd);
    let log_part = (0.5 - s) * (g.level as f64).ln() + 3.0 * (s - 0.5) * PI.ln() + log_gamma_ratio(s, g, k)?;
    Ok(i_pow(k) * tau_psi * g.epsilon * log_part.exp())
}

/// `𝖢 = π^{1/2−3ν₁−3ν₂} Γ(3ν₁/2) Γ(3ν₂/2) Γ((3ν₁+3ν₂−1)/2)`.
pub fn constant_c(nu1: Complex64, nu2: Complex64) -> Result<Complex64> {
    let log_c = (0.5 - 3.0 * nu1 - 3.0 * nu2) * PI.ln()
        + log_gamma(1.5 * nu1)?
        + log_gamma(1.5 * nu2)?
        + log_gamma((3.0 * nu1 + 3.0 * nu2 - 1.0) / 2.0)?;
    Ok(log_c.exp())
}
