use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::cache::Family;
use super::kloosterman::kloosterman;
use crate::analytic::{bessel_half, BesselKind};
use crate::summation::{ComplexNeumaierSum, NeumaierSum};
use crate::{Error, Kind, Result};

/// Default modulus bound for the coefficient formulas.
pub const DEFAULT_C_MAX: u64 = 20;

/// A truncated exact formula with its per-modulus breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct RademacherPartial {
    pub n: u64,
    pub family: Family,
    /// `(c, term)` in ascending `c`.
    pub terms: Vec<(u64, f64)>,
    /// Compensated prefix sum of all terms.
    pub cumulative: f64,
}

impl RademacherPartial {
    /// Compensated sum of the first `count` terms.
    pub fn after_terms(&self, count: usize) -> f64 {
        self.terms.iter().take(count).map(|&(_, t)| t).collect::<NeumaierSum>().value()
    }

    /// Compensated sum of the terms with modulus `≤ c`.
    pub fn up_to_modulus(&self, c: u64) -> f64 {
        self.terms
            .iter()
            .take_while(|&&(ci, _)| ci <= c)
            .map(|&(_, t)| t)
            .collect::<NeumaierSum>()
            .value()
    }
}

pub fn family_of(kind: Kind) -> Family {
    match kind {
        Kind::K3 => Family::FullGamma1,
        Kind::Noncompact => Family::Gamma0Two,
    }
}

fn moduli(kind: Kind, c_max: u64) -> Vec<u64> {
    match kind {
        Kind::K3 => (1..=c_max).collect(),
        Kind::Noncompact => (2..=c_max).step_by(2).collect(),
    }
}

/// Modulus bound that yields `terms` nonzero terms.
pub fn c_max_for_terms(kind: Kind, terms: u64) -> u64 {
    match kind {
        Kind::K3 => terms,
        Kind::Noncompact => 2 * terms,
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidInput("n must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// `4π/(8n-1)^{1/4} Σ_c (1/c) I_{1/2}(π√(8n-1)/(2c)) K(n,c)` over `c ≤ c_max`,
/// all `c` for [`Kind::K3`] and even `c` for [`Kind::Noncompact`].
pub fn exact_coeff(kind: Kind, n: u64, c_max: u64) -> Result<RademacherPartial> {
    check_n(n)?;
    if c_max == 0 {
        return Err(Error::InvalidInput("c_max must be >= 1".into()));
    }
    let family = family_of(kind);
    let root = ((8 * n - 1) as f64).sqrt();
    let prefactor = 4.0 * PI / root.sqrt();
    let terms: Vec<(u64, f64)> = moduli(kind, c_max)
        .into_par_iter()
        .map(|c| {
            let k = kloosterman(family, n as i64, c)?;
            let bessel = bessel_half(BesselKind::I, PI * root / (2.0 * c as f64))?;
            Ok((c, prefactor * bessel * k.re / c as f64))
        })
        .collect::<Result<_>>()?;
    let cumulative = terms.iter().map(|&(_, t)| t).collect::<NeumaierSum>().value();
    Ok(RademacherPartial { n, family, terms, cumulative })
}

/// [`exact_coeff`] truncated after `terms` nonzero terms.
pub fn exact_coeff_terms(kind: Kind, n: u64, terms: u64) -> Result<RademacherPartial> {
    exact_coeff(kind, n, c_max_for_terms(kind, terms))
}

/// The dominant term: `4π/(8n-1)^{1/4} I_{1/2}(π√(8n-1)/2)` for K3 and
/// `(-1)^n 2π/(8n-1)^{1/4} I_{1/2}(π√(8n-1)/4)` for the noncompact case.
pub fn leading_asymptotic(kind: Kind, n: u64) -> Result<f64> {
    check_n(n)?;
    let root = ((8 * n - 1) as f64).sqrt();
    Ok(match kind {
        Kind::K3 => 4.0 * PI / root.sqrt() * bessel_half(BesselKind::I, PI * root / 2.0)?,
        Kind::Noncompact => {
            let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * 2.0 * PI / root.sqrt() * bessel_half(BesselKind::I, PI * root / 4.0)?
        }
    })
}

/// Cardy-type growth exponent `2π√((n - 1/8)/2)`.
pub fn entropy(n: u64) -> Result<f64> {
    check_n(n)?;
    Ok(2.0 * PI * ((n as f64 - 0.125) / 2.0).sqrt())
}

/// `(12/d)`: `+1` for `d ≡ ±1 (12)`, `-1` for `d ≡ ±5 (12)`, else `0`.
fn chi_twelve(d: i64) -> f64 {
    match d.rem_euclid(12) {
        1 | 11 => 1.0,
        5 | 7 => -1.0,
        _ => 0.0,
    }
}

/// Truncated Rademacher series for `p(n)`:
/// `π/(24n-1)^{3/4} Σ_{c≤c_max} (12c)^{-1/2} I_{3/2}(π√(24n-1)/(6c)) Σ_d (12/d) e^{πid/(6c)}`
/// with `d mod 24c`, `d² ≡ 1 - 24n (mod 24c)`. The imaginary part is kept
/// so callers can confirm it cancels.
pub fn partition_rademacher(n: u64, c_max: u64) -> Result<Complex64> {
    check_n(n)?;
    let m = 24 * n as i64 - 1;
    let root = (m as f64).sqrt();
    let terms: Vec<Complex64> = (1..=c_max as i64)
        .into_par_iter()
        .map(|c| {
            let modulus = 24 * c;
            let target = (-m).rem_euclid(modulus);
            let mut inner = ComplexNeumaierSum::new();
            // d and 24c - d solve the congruence together, carry the same
            // (12/d), and contribute conjugate phases; d = 12c never solves it.
            for d in 1..modulus / 2 {
                if (d * d) % modulus == target {
                    let w = Complex64::from_polar(1.0, PI * d as f64 / (6.0 * c as f64));
                    inner.add(chi_twelve(d) * w);
                    inner.add(chi_twelve(modulus - d) * w.conj());
                }
            }
            let bessel = bessel_half(BesselKind::IThreeHalf, PI * root / (6.0 * c as f64))?;
            Ok(inner.value() * bessel / (12.0 * c as f64).sqrt())
        })
        .collect::<Result<_>>()?;
    let mut acc = ComplexNeumaierSum::new();
    for t in terms {
        acc.add(t);
    }
    Ok(acc.value() * PI / (m as f64).powf(0.75))
}
