//! Double-precision evaluation of the analytic objects: Jacobi theta
//! functions, Dedekind eta, the Lerch sum `μ(z;τ)` and its completion,
//! half-order Bessel functions, N=4 characters and elliptic genera.
//!
//! Lattice sums are truncated by a relative tail criterion rather than a
//! fixed term count, so accuracy holds down to small `Im τ`.

mod characters;
mod lerch;
mod special;
mod theta;

pub use characters::{
    affine_char, char_eval, elliptic_genus, flow_argument, j_fn, CharKind, CharSpec, GenusVariant,
    Sector,
};
pub use lerch::{mu, mu_hat, r_num, RMethod};
pub use special::{bessel_half, e_fn, whittaker_closed, BesselKind, WhittakerClosed, WhittakerKind};
pub use theta::{eta_num, theta, vartheta, ThetaLabel};

use num_complex::Complex64;

use crate::{Error, Result};

/// Relative size below which a lattice-sum term is dropped.
pub(crate) const TAIL_TOLERANCE: f64 = 1e-18;

/// Denominators smaller than this are reported as poles.
pub(crate) const POLE_THRESHOLD: f64 = 1e-10;

/// A point `τ` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularPoint(Complex64);

impl ModularPoint {
    pub fn new(tau: Complex64) -> Result<Self> {
        if tau.im > 0.0 && tau.re.is_finite() && tau.im.is_finite() {
            Ok(ModularPoint(tau))
        } else {
            Err(Error::InvalidInput(format!("tau = {tau} is not in the upper half-plane")))
        }
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }

    pub fn tau(self) -> Complex64 {
        self.0
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    /// `q^r = e^{2πiτr}` for real `r`.
    pub fn q_pow(self, r: f64) -> Complex64 {
        (Complex64::i() * std::f64::consts::TAU * self.0 * r).exp()
    }

    /// `|q| = e^{-2π Im τ}`.
    pub fn q_abs(self) -> f64 {
        (-std::f64::consts::TAU * self.0.im).exp()
    }

    /// `τ + n`.
    pub fn translate(self, n: f64) -> Self {
        ModularPoint(self.0 + n)
    }

    /// `-1/τ`.
    pub fn inversion(self) -> Self {
        ModularPoint(-1.0 / self.0)
    }

    /// `-τ̄`, the reflection used by the shadow.
    pub fn reflect(self) -> Self {
        ModularPoint(-self.0.conj())
    }

    /// Möbius action `(aτ + b)/(cτ + d)`; requires `ad - bc = 1`.
    pub fn act(self, [a, b, c, d]: [i64; 4]) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::InvalidInput(format!(
                "({a} {b}; {c} {d}) is not in SL(2,Z)"
            )));
        }
        let tau = self.0;
        Self::new((tau * a as f64 + b as f64) / (tau * c as f64 + d as f64))
    }
}

/// An elliptic argument `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArg(pub Complex64);

impl EllipticArg {
    pub fn real(x: f64) -> Self {
        EllipticArg(Complex64::new(x, 0.0))
    }

    pub fn new(re: f64, im: f64) -> Self {
        EllipticArg(Complex64::new(re, im))
    }

    pub fn z(self) -> Complex64 {
        self.0
    }

    /// The three half-periods `1/2`, `(1+τ)/2`, `τ/2`.
    pub fn half_periods(tau: ModularPoint) -> [EllipticArg; 3] {
        let t = tau.tau();
        [
            EllipticArg(Complex64::new(0.5, 0.0)),
            EllipticArg((t + 1.0) / 2.0),
            EllipticArg(t / 2.0),
        ]
    }
}

impl From<Complex64> for EllipticArg {
    fn from(z: Complex64) -> Self {
        EllipticArg(z)
    }
}

/// Sums `term(n)` over all integers. Terms are visited in pairs `n = k` and
/// `n = -k-1`; the sum stops once `|n|` is past `peak` (where the terms are
/// largest) and both new terms are below the tail tolerance relative to the
/// largest term seen.
pub(crate) fn lattice_sum<F>(peak: f64, mut term: F) -> Result<Complex64>
where
    F: FnMut(i64) -> Result<Complex64>,
{
    const MAX_TERMS: i64 = 100_000;
    let mut acc = crate::summation::ComplexNeumaierSum::new();
    let mut largest = 0.0f64;
    for k in 0..MAX_TERMS {
        let a = term(k)?;
        let b = term(-k - 1)?;
        acc.add(a);
        acc.add(b);
        let size = a.norm().max(b.norm());
        largest = largest.max(size);
        if (k as f64) > peak.abs() + 1.0 && size <= TAIL_TOLERANCE * largest {
            return Ok(acc.value());
        }
    }
    Err(Error::InvalidInput("lattice sum failed to converge".into()))
}

pub(crate) fn i_pi() -> Complex64 {
    Complex64::new(0.0, std::f64::consts::PI)
}
