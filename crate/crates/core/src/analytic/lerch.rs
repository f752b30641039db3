use std::f64::consts::PI;

use num_complex::Complex64;

use super::theta::{eta_num, theta, ThetaLabel};
use super::{i_pi, lattice_sum, EllipticArg, ModularPoint, POLE_THRESHOLD};
use crate::{Error, Result};

/// The Lerch sum
/// `μ(z;τ) = i e^{πiz}/θ₁₁(z;τ) · Σ_n (-1)^n q^{n(n+1)/2} e^{2πinz} / (1 - q^n e^{2πiz})`.
pub fn mu(z: EllipticArg, tau: ModularPoint) -> Result<Complex64> {
    let th = theta(ThetaLabel::T11, z, tau);
    if th.norm() < POLE_THRESHOLD {
        return Err(Error::PoleAtArgument(format!("theta_11(z) vanishes at z = {}", z.z())));
    }
    let t = tau.tau();
    let w = z.z();
    let peak = w.im.abs() / tau.im() + 1.0;
    let sum = lattice_sum(peak, |n| {
        let nf = n as f64;
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let log_num = i_pi() * (t * nf * (nf + 1.0) + 2.0 * nf * w);
        let log_den = 2.0 * i_pi() * (t * nf + w);
        let den = 1.0 - log_den.exp();
        if log_den.re <= 0.0 {
            if den.norm() < POLE_THRESHOLD {
                return Err(pole(n, z));
            }
            Ok(sign * log_num.exp() / den)
        } else {
            // 1/(1 - e^M) = -e^{-M}/(1 - e^{-M}) keeps the magnitudes bounded.
            let den = 1.0 - (-log_den).exp();
            if den.norm() < POLE_THRESHOLD {
                return Err(pole(n, z));
            }
            Ok(-sign * (log_num - log_den).exp() / den)
        }
    })?;
    Ok(Complex64::i() * (i_pi() * w).exp() / th * sum)
}

fn pole(n: i64, z: EllipticArg) -> Error {
    Error::PoleAtArgument(format!("1 - q^{n} e^(2 pi i z) vanishes at z = {}", z.z()))
}

/// How to evaluate `R(τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RMethod {
    /// The error-function lattice sum.
    Sum,
    /// The period integral of `η³`.
    PeriodIntegral,
}

/// The non-holomorphic correction
/// `R(τ) = Σ_n (-1)^n [sgn(n+½) - E((n+½)√(2 Im τ))] q^{-(n+½)²/2}`.
pub fn r_num(tau: ModularPoint, method: RMethod) -> Result<Complex64> {
    match method {
        RMethod::Sum => Ok(r_sum(tau)),
        RMethod::PeriodIntegral => r_period_integral(tau),
    }
}

fn r_sum(tau: ModularPoint) -> Complex64 {
    let v = tau.im();
    let u = tau.re();
    let scale = (2.0 * PI * v).sqrt();
    lattice_sum(0.0, |n| {
        let x = n as f64 + 0.5;
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        // sgn(x) - E(x√(2v)) = sgn(x) erfc(√(2πv)|x|)
        let magnitude = libm::erfc(scale * x.abs()) * (PI * v * x * x).exp();
        let phase = Complex64::from_polar(1.0, -PI * u * x * x);
        Ok(sign * x.signum() * magnitude * phase)
    })
    .expect("R(tau) terms decay for Im tau > 0")
}

/// `R(τ) = (1/√i) ∫_{-τ̄}^{i∞} η(x)³/√(x+τ) dx`. Along `x = -τ̄ + it` the
/// prefactors cancel and `R = ∫₀^∞ η(-τ̄+it)³/√(2 Im τ + t) dt`; with
/// `t = e^s` the trapezoid rule converges geometrically.
fn r_period_integral(tau: ModularPoint) -> Result<Complex64> {
    const TOLERANCE: f64 = 1e-10;
    const MAX_LEVELS: usize = 18;
    let v = tau.im();
    let start = -tau.tau().conj();
    // |η(x)|³ ≈ e^{-π Im x/4}: stop once that has dropped by ~e^{-45}.
    let s_min = -45.0f64;
    let s_max = (180.0 / PI).ln().max(1.0);
    let integrand = |s: f64| -> Complex64 {
        let t = s.exp();
        let x = ModularPoint(start + Complex64::new(0.0, t));
        eta_num(x).powi(3) * t / (2.0 * v + t).sqrt()
    };

    let mut n = 64usize;
    let mut h = (s_max - s_min) / n as f64;
    let mut sum: Complex64 = (0..=n)
        .map(|k| {
            let w = if k == 0 || k == n { 0.5 } else { 1.0 };
            w * integrand(s_min + k as f64 * h)
        })
        .sum();
    let mut estimate = sum * h;
    let mut last_change = f64::INFINITY;
    for _ in 0..MAX_LEVELS {
        // Add the midpoints of the current grid.
        let mids: Complex64 = (0..n).map(|k| integrand(s_min + (k as f64 + 0.5) * h)).sum();
        sum += mids;
        n *= 2;
        h /= 2.0;
        let refined = sum * h;
        last_change = (refined - estimate).norm();
        estimate = refined;
        if last_change < TOLERANCE {
            return Ok(estimate);
        }
    }
    Err(Error::QuadratureNonConvergence { last_change })
}

/// `μ̂(z;τ) = μ(z;τ) - R(τ)/2`.
pub fn mu_hat(z: EllipticArg, tau: ModularPoint) -> Result<Complex64> {
    Ok(mu(z, tau)? - 0.5 * r_sum(tau))
}
