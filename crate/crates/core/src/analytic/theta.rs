use num_complex::Complex64;

use super::{i_pi, lattice_sum, EllipticArg, ModularPoint, TAIL_TOLERANCE};
use crate::{Error, Result};

/// Jacobi theta function labels in the `θ_{ab}` characteristic notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThetaLabel {
    /// `θ₁₁ = θ₁`
    T11,
    /// `θ₁₀ = θ₂`
    T10,
    /// `θ₀₀ = θ₃`
    T00,
    /// `θ₀₁ = θ₄`
    T01,
}

impl std::str::FromStr for ThetaLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "11" => ThetaLabel::T11,
            "10" => ThetaLabel::T10,
            "00" => ThetaLabel::T00,
            "01" => ThetaLabel::T01,
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }
}

/// `θ_{ab}(z;τ) = Σ_n q^{(n+a/2)²/2} e^{2πi(n+a/2)(z+b/2)}`.
pub fn theta(label: ThetaLabel, z: EllipticArg, tau: ModularPoint) -> Complex64 {
    let (a, b) = match label {
        ThetaLabel::T11 => (0.5, 0.5),
        ThetaLabel::T10 => (0.5, 0.0),
        ThetaLabel::T00 => (0.0, 0.0),
        ThetaLabel::T01 => (0.0, 0.5),
    };
    let t = tau.tau();
    let w = z.z() + b;
    let peak = z.z().im.abs() / tau.im();
    lattice_sum(peak, |n| {
        let x = n as f64 + a;
        Ok((i_pi() * (t * x * x + 2.0 * x * w)).exp())
    })
    .expect("theta series terms decay for Im tau > 0")
}

/// `η(τ) = q^{1/24} ∏_{n≤N} (1 - q^n)` with `|q|^N` below the tail tolerance.
pub fn eta_num(tau: ModularPoint) -> Complex64 {
    let n_max = (TAIL_TOLERANCE.ln() / tau.q_abs().ln()).ceil().max(1.0) as i64;
    let q = tau.q_pow(1.0);
    let mut qn = Complex64::new(1.0, 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    for _ in 1..=n_max {
        qn *= q;
        prod *= 1.0 - qn;
    }
    tau.q_pow(1.0 / 24.0) * prod
}

/// `ϑ_{P,a}(z;τ) = Σ_n q^{(2Pn+a)²/(4P)} e^{2πiz(2Pn+a)}`.
pub fn vartheta(p: u32, a: i64, z: EllipticArg, tau: ModularPoint) -> Complex64 {
    let p = p.max(1) as f64;
    let t = tau.tau();
    let w = z.z();
    let peak = w.im.abs() / tau.im() / p + a.abs() as f64 / (2.0 * p);
    lattice_sum(peak, |n| {
        let m = 2.0 * p * n as f64 + a as f64;
        Ok((i_pi() * (t * m * m / (2.0 * p) + 2.0 * w * m)).exp())
    })
    .expect("vartheta series terms decay for Im tau > 0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{named_series, FracExp, SeriesName};

    fn tau(re: f64, im: f64) -> ModularPoint {
        ModularPoint::from_parts(re, im).unwrap()
    }

    #[test]
    fn theta11_vanishes_at_origin() {
        for t in [tau(0.0, 1.0), tau(0.3, 0.7), tau(-0.2, 2.0)] {
            assert!(theta(ThetaLabel::T11, EllipticArg::real(0.0), t).norm() < 1e-14);
        }
    }

    #[test]
    fn jacobi_quartic_identity_at_2i() {
        let t = tau(0.0, 2.0);
        let z = EllipticArg::real(0.0);
        let r = theta(ThetaLabel::T00, z, t).powi(4)
            - theta(ThetaLabel::T01, z, t).powi(4)
            - theta(ThetaLabel::T10, z, t).powi(4);
        assert!(r.norm() < 1e-12, "{r}");
    }

    #[test]
    fn theta10_matches_exact_series() {
        let t = tau(0.13, 0.9);
        let series = named_series(SeriesName::Theta10Const, FracExp::integer(40)).unwrap();
        let exact = series.evaluate(t.tau());
        let num = theta(ThetaLabel::T10, EllipticArg::real(0.0), t);
        assert!((exact - num).norm() < 1e-12 * num.norm());
    }

    #[test]
    fn eta_matches_exact_series() {
        let t = tau(-0.21, 1.05);
        let series = named_series(SeriesName::Eta, FracExp::integer(40)).unwrap();
        assert!((series.evaluate(t.tau()) - eta_num(t)).norm() < 1e-12);
    }

    #[test]
    fn eta_at_i_eighth_power_is_positive_real() {
        let e8 = eta_num(tau(0.0, 1.0)).powi(8);
        assert!(e8.re > 0.0);
        assert!(e8.im.abs() < 1e-15 * e8.re);
    }

    #[test]
    fn vartheta_index_shift_and_symmetry() {
        let t = tau(0.1, 1.1);
        let z = EllipticArg::new(0.13, 0.04);
        for (p, a) in [(1, 1), (2, 1), (3, -2)] {
            let d = vartheta(p, a, z, t) - vartheta(p, a + 2 * p as i64, z, t);
            assert!(d.norm() < 1e-14);
        }
        let z0 = EllipticArg::real(0.0);
        assert!((vartheta(2, 1, z0, t) - vartheta(2, -1, z0, t)).norm() < 1e-15);
    }

    #[test]
    fn vartheta_against_direct_sum() {
        let t = tau(0.0, 1.1);
        let z = EllipticArg::real(0.1);
        let mut oracle = Complex64::new(0.0, 0.0);
        for n in -40i64..=40 {
            let m = (2 * n + 1) as f64;
            let qpow = (-std::f64::consts::PI * 1.1 * m * m / 2.0).exp();
            oracle += qpow * Complex64::from_polar(1.0, std::f64::consts::TAU * 0.1 * m);
        }
        assert!((vartheta(1, 1, z, t) - oracle).norm() < 1e-12);
    }
}
