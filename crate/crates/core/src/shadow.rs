//! The completion and shadow structure: Fourier coefficients of the
//! anti-holomorphic derivative of the Poincaré–Maass series against
//! `24 η(8τ)³`, modularity of `Σ̂`, and the differential equations of `μ̂`
//! by finite differences.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;

use crate::analytic::{
    bessel_half, eta_num, mu_hat, r_num, whittaker_closed, BesselKind, EllipticArg, ModularPoint,
    RMethod, WhittakerClosed, WhittakerKind,
};
use crate::qseries::{named_series, FracExp, SeriesName};
use crate::rademacher::{dedekind_sum, kloosterman, DedekindMethod, Family};
use crate::summation::{ComplexNeumaierSum, NeumaierSum};
use crate::{Error, Kind, Result};

/// Modulus bound used for the shadow coefficients by default.
pub const DEFAULT_SHADOW_C_MAX: u64 = 800;

/// Coefficient of `q^{8n+1}` in `i√v · conj(∂_τ̄ P(8τ))`, truncated at `c_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowCoeff {
    pub n: u64,
    pub c_max: u64,
    pub value: f64,
}

impl ShadowCoeff {
    pub fn exponent(&self) -> u64 {
        8 * self.n + 1
    }
}

/// `2δ_{n0} + (8n+1)^{1/4} Σ_{c≤c_max} (4π/c) J_{1/2}(π√(8n+1)/(2c)) K₊(n,c)`
/// with `K₊(n,c) = Σ_d e^{3πi s(d,c) + 2πi dn/c} = conj K(-n,c)`.
pub fn shadow_coefficient(n: u64, c_max: u64) -> Result<ShadowCoeff> {
    if c_max == 0 {
        return Err(Error::InvalidInput("c_max must be >= 1".into()));
    }
    let root = ((8 * n + 1) as f64).sqrt();
    let terms: Vec<f64> = (1..=c_max)
        .into_par_iter()
        .map(|c| {
            let k = kloosterman(Family::FullGamma1, -(n as i64), c)?.conj();
            let j = bessel_half(BesselKind::J, PI * root / (2.0 * c as f64))?;
            Ok(4.0 * PI / c as f64 * j * k.re)
        })
        .collect::<Result<_>>()?;
    let sum: f64 = terms.into_iter().collect::<NeumaierSum>().value();
    let delta = if n == 0 { 2.0 } else { 0.0 };
    Ok(ShadowCoeff {
        n,
        c_max,
        value: delta + root.sqrt() * sum,
    })
}

/// Coefficients of `24 η(8τ)³` at every integer exponent `0..=n_max`.
pub fn eta8_cubed_reference(n_max: u64) -> Result<BTreeMap<u64, BigInt>> {
    let truncation = FracExp::integer(n_max as i64 + 1);
    let cubed = named_series(SeriesName::EtaCubed, FracExp::from_units(3 * (n_max as i64 + 1)))?;
    let series = cubed.substitute_qm(8)?.truncate(truncation);
    (0..=n_max)
        .map(|e| {
            let c = series.coefficient(FracExp::integer(e as i64))?;
            Ok((e, c.to_integer() * 24))
        })
        .collect()
}

/// `Σ̂ = 8 Σ_w μ̂(w;τ)` over the half-periods, or `Σ̂° = 8 μ̂(1/2;τ)`.
pub fn sigma_hat_num(tau: ModularPoint, kind: Kind) -> Result<Complex64> {
    let points: Vec<EllipticArg> = match kind {
        Kind::K3 => EllipticArg::half_periods(tau).to_vec(),
        Kind::Noncompact => vec![EllipticArg::real(0.5)],
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for w in points {
        acc += mu_hat(w, tau)?;
    }
    Ok(8.0 * acc)
}

/// `χ(γ)`: `i^{3/2} e^{-(a+d)πi/(4c) + 3πi s(d,c)}` for `c > 0` and
/// `e^{-bπi/4}` for `c = 0, d = 1`. The phase is reduced mod `8c` in
/// integers: with `M = 6c s(d,c)` it is `π(3c - (a+d) + 2M)/(4c)`.
pub fn multiplier(gamma: [i64; 4]) -> Result<Complex64> {
    let [a, b, c, d] = gamma;
    if a * d - b * c != 1 {
        return Err(Error::InvalidInput(format!("({a} {b}; {c} {d}) is not in SL(2,Z)")));
    }
    if c == 0 && d == 1 {
        let p = (-b).rem_euclid(8);
        return Ok(Complex64::from_polar(1.0, PI * p as f64 / 4.0));
    }
    if c <= 0 {
        return Err(Error::InvalidInput("multiplier is defined for c > 0 or c = 0, d = 1".into()));
    }
    let m = dedekind_sum(d, c, DedekindMethod::Euclid)?.six_c_multiple();
    let p = (3 * c as i128 - (a + d) as i128 + 2 * m).rem_euclid(8 * c as i128);
    Ok(Complex64::from_polar(1.0, PI * p as f64 / (4.0 * c as f64)))
}

/// `∂/∂τ̄ = (∂_u + i∂_v)/2` by central differences of step `h`.
pub fn d_tau_bar<F>(f: F, tau: ModularPoint, h: f64) -> Result<Complex64>
where
    F: Fn(ModularPoint) -> Result<Complex64>,
{
    let at = |du: f64, dv: f64| ModularPoint::from_parts(tau.re() + du, tau.im() + dv).and_then(&f);
    let fu = (at(h, 0.0)? - at(-h, 0.0)?) / (2.0 * h);
    let fv = (at(0.0, h)? - at(0.0, -h)?) / (2.0 * h);
    Ok(0.5 * (fu + Complex64::i() * fv))
}

/// `Δ_k f = -v²(f_uu + f_vv) + ikv(f_u + i f_v)` on the 5-point stencil.
pub fn laplacian<F>(k: f64, f: F, tau: ModularPoint, h: f64) -> Result<Complex64>
where
    F: Fn(ModularPoint) -> Result<Complex64>,
{
    let v = tau.im();
    let at = |du: f64, dv: f64| ModularPoint::from_parts(tau.re() + du, v + dv).and_then(&f);
    let center = at(0.0, 0.0)?;
    let (up, um, vp, vm) = (at(h, 0.0)?, at(-h, 0.0)?, at(0.0, h)?, at(0.0, -h)?);
    let lap = (up + um + vp + vm - 4.0 * center) / (h * h);
    let fu = (up - um) / (2.0 * h);
    let fv = (vp - vm) / (2.0 * h);
    Ok(-v * v * lap + Complex64::i() * k * v * (fu + Complex64::i() * fv))
}

/// `(i/2) η(-τ̄)³ / √(2 Im τ)`, the anti-holomorphic derivative of `μ̂`.
pub fn anomaly_rhs(tau: ModularPoint) -> Complex64 {
    Complex64::new(0.0, 0.5) * eta_num(tau.reflect()).powi(3) / (2.0 * tau.im()).sqrt()
}

/// `|∂_τ̄ μ̂(z;τ) - (i/2) η(-τ̄)³/√(2 Im τ)|` by central differences.
pub fn anomaly_check(z: EllipticArg, tau: ModularPoint, h: f64) -> Result<f64> {
    let lhs = d_tau_bar(|t| mu_hat(z, t), tau, h)?;
    Ok((lhs - anomaly_rhs(tau)).norm())
}

/// `|Δ_{1/2} μ̂(z;τ)|` on the 5-point stencil.
pub fn laplacian_check(z: EllipticArg, tau: ModularPoint, h: f64) -> Result<f64> {
    Ok(laplacian(0.5, |t| mu_hat(z, t), tau, h)?.norm())
}

/// Fourier coefficients `c_n` of `Σ = q^{-1/8} Σ_n c_n q^n`, recovered from
/// the completion at height `v` by a discrete Fourier transform in `Re τ`
/// over `samples` points. The holomorphic part is `Σ̂ + 12R` for K3 and
/// `Σ̂° + 4R` for the noncompact case. Roundoff in `c_n` grows like
/// `e^{2πnv}`.
pub fn holomorphic_coefficients(kind: Kind, v: f64, count: usize, samples: usize) -> Result<Vec<f64>> {
    let r_weight = match kind {
        Kind::K3 => 12.0,
        Kind::Noncompact => 4.0,
    };
    let values: Vec<Complex64> = (0..samples)
        .map(|j| {
            let tau = ModularPoint::from_parts(j as f64 / samples as f64, v)?;
            let holo = sigma_hat_num(tau, kind)? + r_weight * r_num(tau, RMethod::Sum)?;
            Ok(holo * tau.q_pow(0.125))
        })
        .collect::<Result<_>>()?;
    Ok((0..count)
        .map(|n| {
            let mut acc = ComplexNeumaierSum::new();
            for (j, g) in values.iter().enumerate() {
                let angle = -2.0 * PI * (n * j % samples) as f64 / samples as f64;
                acc.add(g * Complex64::from_polar(1.0, angle));
            }
            (acc.value() / samples as f64).re * (2.0 * PI * n as f64 * v).exp()
        })
        .collect())
}

/// Terms `|m| < M` of each translate family `d₀ + cm`.
const TRANSLATES: i64 = 2000;

/// `φ(τ) = 𝓜^{1/2}_{3/4}(-π Im τ/2) e^{-πi Re τ/4}`.
fn seed(tau: Complex64) -> Result<Complex64> {
    let m = whittaker_closed(WhittakerClosed {
        kind: WhittakerKind::MMinus,
        v: PI * tau.im / 2.0,
    })?;
    Ok(m * Complex64::from_polar(1.0, -PI * tau.re / 4.0))
}

/// Direct partial sum of the Poincaré–Maass series at `s = 3/4`:
/// `(4/√π)[φ(τ) + Σ_{0<c≤c_bound} Σ_{(c,d)=1} χ(γ)⁻¹ (cτ+d)^{-1/2} φ(γτ)]`.
/// The factor 2 over the `(2/√π)` normalization accounts for `-γ`. Each
/// residue class `d₀ mod c` is summed over the translates `d₀ + cm`,
/// `|m| < 2000`, which carry the phase `e^{iπm/4}`. Only even `c` enter for
/// [`Kind::Noncompact`].
///
/// Experimental: the series converges only conditionally in `c`, so it is a
/// loose check of the completion, not an evaluator.
pub fn poincare_direct(tau: ModularPoint, c_bound: u64, kind: Kind) -> Result<Complex64> {
    if tau.im() < 1.0 {
        return Err(Error::InvalidInput("poincare_direct needs Im tau >= 1".into()));
    }
    let t = tau.tau();
    let moduli: Vec<i64> = (1..=c_bound as i64)
        .filter(|c| kind == Kind::K3 || c % 2 == 0)
        .collect();
    let per_c: Vec<Complex64> = moduli
        .into_par_iter()
        .map(|c| {
            let mut acc = ComplexNeumaierSum::new();
            for d0 in 0..c {
                if d0.gcd(&c) != 1 {
                    continue;
                }
                let a = if c == 1 { 1 } else { inverse_mod(d0, c) };
                let b = (a * d0 - 1) / c;
                let chi_inv = multiplier([a, b, c, d0])?.conj();
                for m in -TRANSLATES..TRANSLATES {
                    let shifted = t + m as f64;
                    let w = shifted * c as f64 + d0 as f64;
                    let image = (shifted * a as f64 + b as f64) / w;
                    let phase = Complex64::from_polar(1.0, PI * m.rem_euclid(8) as f64 / 4.0);
                    acc.add(chi_inv * phase * seed(image)? / w.sqrt());
                }
            }
            Ok(acc.value())
        })
        .collect::<Result<_>>()?;
    let mut total = ComplexNeumaierSum::new();
    total.add(seed(t)?);
    for term in per_c {
        total.add(term);
    }
    Ok(4.0 / PI.sqrt() * total.value())
}

fn inverse_mod(d: i64, c: i64) -> i64 {
    let e = d.extended_gcd(&c);
    e.x.rem_euclid(c)
}
