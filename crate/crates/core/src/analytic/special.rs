use std::f64::consts::PI;

use crate::{Error, Result};

/// `E(x) = 2∫₀ˣ e^{-πu²} du = 1 - erfc(√π x)`.
pub fn e_fn(x: f64) -> f64 {
    libm::erf(PI.sqrt() * x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    /// `I_{1/2}`
    I,
    /// `J_{1/2}`
    J,
    /// `I_{3/2}`
    IThreeHalf,
}

/// Half-integer order Bessel functions in closed form.
pub fn bessel_half(kind: BesselKind, x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::NonPositiveArgument(x));
    }
    let prefactor = (2.0 / (PI * x)).sqrt();
    Ok(match kind {
        BesselKind::I => prefactor * x.sinh(),
        BesselKind::J => prefactor * x.sin(),
        BesselKind::IThreeHalf => prefactor * cosh_minus_sinhc(x),
    })
}

/// `cosh x - sinh(x)/x`, with a power series where the difference cancels.
fn cosh_minus_sinhc(x: f64) -> f64 {
    if x > 0.5 {
        return x.cosh() - x.sinh() / x;
    }
    // Σ_{k≥1} 2k x^{2k} / (2k+1)!
    let x2 = x * x;
    let mut term = x2 / 3.0; // k = 1
    let mut sum = term;
    for k in 2..30 {
        let k = k as f64;
        term *= x2 * k / ((k - 1.0) * (2.0 * k) * (2.0 * k + 1.0));
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhittakerKind {
    /// `𝓦^{1/2}_{3/4}(v)`
    WPlus,
    /// `𝓦^{1/2}_{3/4}(-v)`
    WMinus,
    /// `𝓜^{1/2}_{3/4}(-v)`
    MMinus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhittakerClosed {
    pub kind: WhittakerKind,
    pub v: f64,
}

/// Closed forms of the weight-1/2, `s = 3/4` Whittaker envelopes.
pub fn whittaker_closed(w: WhittakerClosed) -> Result<f64> {
    let v = w.v;
    if v.is_nan() || v <= 0.0 {
        return Err(Error::NonPositiveArgument(v));
    }
    Ok(match w.kind {
        WhittakerKind::WPlus => (-v / 2.0).exp(),
        // 1 - E(√(v/π)) = erfc(√v)
        WhittakerKind::WMinus => PI.sqrt() * libm::erfc(v.sqrt()) * (v / 2.0).exp(),
        WhittakerKind::MMinus => PI.sqrt() / 2.0 * e_fn((v / PI).sqrt()) * (v / 2.0).exp(),
    })
}
