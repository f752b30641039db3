use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use super::lerch::mu;
use super::theta::{eta_num, theta, vartheta, ThetaLabel};
use super::{i_pi, lattice_sum, EllipticArg, ModularPoint, POLE_THRESHOLD};
use crate::{Error, Result};

/// Superconformal sectors, related by shifts of the elliptic argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sector {
    R,
    RTilde,
    NS,
    NSTilde,
}

/// Shift of `z` attached to each sector: NS `z`, NS̃ `z+1/2`, R `z+τ/2`,
/// R̃ `z+(1+τ)/2`. Only differences between sectors are meaningful.
pub fn flow_argument(sector: Sector, tau: ModularPoint) -> Complex64 {
    let t = tau.tau();
    match sector {
        Sector::NS => Complex64::zero(),
        Sector::NSTilde => Complex64::new(0.5, 0.0),
        Sector::R => t / 2.0,
        Sector::RTilde => (t + 1.0) / 2.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharKind {
    /// Massless character from its Appell–Lerch type m-sum.
    MasslessSumForm,
    /// Massless level-1 character written through `μ(z;τ)`.
    MasslessMuForm,
    Massive,
}

/// Labels of an N=4 character: level `k`, conformal weight `h`, isospin `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharSpec {
    pub kind: CharKind,
    pub level: u32,
    pub h: Rational64,
    pub isospin: Rational64,
    pub sector: Sector,
}

impl CharSpec {
    /// Level-1 massless character in the R̃ sector (`h = 1/4`).
    pub fn massless_level1(kind: CharKind, isospin: Rational64) -> Self {
        CharSpec {
            kind,
            level: 1,
            h: Rational64::new(1, 4),
            isospin,
            sector: Sector::RTilde,
        }
    }

    /// Level-1 massive character `h = n + 1/4`, `ℓ = 1/2`, R̃ sector.
    pub fn massive_level1(n: i64) -> Self {
        CharSpec {
            kind: CharKind::Massive,
            level: 1,
            h: Rational64::new(4 * n + 1, 4),
            isospin: Rational64::new(1, 2),
            sector: Sector::RTilde,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let k = Rational64::from_integer(self.level as i64);
        let ell = self.isospin;
        let bad = |why: &str| Err(Error::UnsupportedSpec(format!("{self:?}: {why}")));
        if self.level == 0 {
            return bad("level must be >= 1");
        }
        if !(ell * 2).is_integer() {
            return bad("isospin must be a multiple of 1/2");
        }
        let bound = self.level as f64 / 4.0;
        match self.kind {
            CharKind::MasslessSumForm | CharKind::MasslessMuForm => {
                if self.h != k / 4 {
                    return bad("massless requires h = k/4");
                }
                if ell < Rational64::zero() || ell > k / 2 {
                    return bad("massless requires 0 <= isospin <= k/2");
                }
                if self.kind == CharKind::MasslessMuForm && (self.level != 1 || !ell.is_zero()) {
                    return bad("the mu form exists for k = 1, isospin 0 only");
                }
            }
            CharKind::Massive => {
                if self.h.to_f64().unwrap_or(f64::NAN) <= bound {
                    return bad("massive requires h > k/4");
                }
                if ell < Rational64::new(1, 2) || ell > k / 2 {
                    return bad("massive requires 1/2 <= isospin <= k/2");
                }
            }
        }
        Ok(())
    }
}

/// Affine SU(2) character
/// `χ_{k,ℓ} = (ϑ_{k+2,2ℓ+1} - ϑ_{k+2,-2ℓ-1}) / (ϑ_{2,1} - ϑ_{2,-1})`.
pub fn affine_char(k: u32, isospin: Rational64, z: EllipticArg, tau: ModularPoint) -> Result<Complex64> {
    let twice = isospin * 2;
    if !twice.is_integer() || isospin < Rational64::zero() {
        return Err(Error::UnsupportedSpec(format!("isospin {isospin}")));
    }
    let a = twice.to_integer() + 1;
    let d1 = vartheta(2, 1, z, tau);
    let d2 = vartheta(2, -1, z, tau);
    let den = d1 - d2;
    if den.norm() < POLE_THRESHOLD * (d1.norm() + d2.norm()).max(1e-300) {
        return Err(Error::DenominatorVanishes);
    }
    Ok((vartheta(k + 2, a, z, tau) - vartheta(k + 2, -a, z, tau)) / den)
}

/// `[θ_{ab}(z)]² / η³`.
fn theta_sq_over_eta3(label: ThetaLabel, z: EllipticArg, tau: ModularPoint) -> Complex64 {
    theta(label, z, tau).powi(2) / eta_num(tau).powi(3)
}

fn inverse_theta11_2z(z: EllipticArg, tau: ModularPoint) -> Result<Complex64> {
    let th = theta(ThetaLabel::T11, EllipticArg(2.0 * z.z()), tau);
    if th.norm() < POLE_THRESHOLD {
        return Err(Error::PoleAtArgument(format!("theta_11(2z) vanishes at z = {}", z.z())));
    }
    Ok(Complex64::i() / th)
}

/// Level-1, `ℓ = 0` massless R̃ character from
/// `i/θ₁₁(2z) · θ₁₁(z)²/η³ · Σ_m q^{2m²} e^{8πimz} (1 + e^{2πiz}q^m)/(1 - e^{2πiz}q^m)`.
fn massless_level1_sum(z: EllipticArg, tau: ModularPoint) -> Result<Complex64> {
    let pre = inverse_theta11_2z(z, tau)? * theta_sq_over_eta3(ThetaLabel::T11, z, tau);
    let t = tau.tau();
    let w = z.z();
    let sum = lattice_sum(2.0 * w.im.abs() / tau.im() + 1.0, |m| {
        let mf = m as f64;
        let lead = (i_pi() * (4.0 * t * mf * mf + 8.0 * mf * w)).exp();
        let log_y = 2.0 * i_pi() * (w + t * mf);
        let y = if log_y.re <= 0.0 { log_y.exp() } else { (-log_y).exp() };
        if (1.0 - y).norm() < POLE_THRESHOLD {
            return Err(Error::PoleAtArgument(format!("1 - y q^{m} vanishes at z = {w}")));
        }
        let ratio = if log_y.re <= 0.0 {
            (1.0 + y) / (1.0 - y)
        } else {
            (y + 1.0) / (y - 1.0)
        };
        Ok(lead * ratio)
    })?;
    Ok(pre * sum)
}

/// General massless character in the R sector:
/// `i/θ₁₁(2z) · θ₁₀(z)²/η³ · Σ_ε Σ_m ε e^{4πiε((k+1)m+ℓ)z} q^{(k+1)m²+2ℓm} / (1 + e^{-2πiεz} q^{-m})²`.
fn massless_general_r(k: u32, isospin: f64, z: EllipticArg, tau: ModularPoint) -> Result<Complex64> {
    let pre = inverse_theta11_2z(z, tau)? * theta_sq_over_eta3(ThetaLabel::T10, z, tau);
    let t = tau.tau();
    let w = z.z();
    let kp1 = k as f64 + 1.0;
    let mut total = Complex64::zero();
    for eps in [1.0, -1.0] {
        total += eps
            * lattice_sum(2.0 * w.im.abs() / tau.im() + 1.0, |m| {
                let mf = m as f64;
                let log_num = i_pi()
                    * (4.0 * eps * (kp1 * mf + isospin) * w + 2.0 * t * (kp1 * mf * mf + 2.0 * isospin * mf));
                let log_x = -2.0 * i_pi() * (eps * w + t * mf);
                let (log_num, x) = if log_x.re <= 0.0 {
                    (log_num, log_x.exp())
                } else {
                    // (1 + e^M)^{-2} = e^{-2M} (1 + e^{-M})^{-2}
                    (log_num - 2.0 * log_x, (-log_x).exp())
                };
                let den = 1.0 + x;
                if den.norm() < POLE_THRESHOLD {
                    return Err(Error::PoleAtArgument(format!("1 + e^(-2 pi i eps z) q^(-{m}) vanishes at z = {w}")));
                }
                Ok(log_num.exp() / (den * den))
            })?;
    }
    Ok(pre * total)
}

/// Evaluates an N=4 character. Formulas are stated in a base sector (R̃ for
/// the level-1 μ and m-sum forms, R for the general massless and massive
/// forms); other sectors are reached by shifting `z` along the flow table.
pub fn char_eval(spec: &CharSpec, z: EllipticArg, tau: ModularPoint) -> Result<Complex64> {
    spec.validate()?;
    let level1_ground = spec.level == 1 && spec.isospin.is_zero();
    let base = match spec.kind {
        CharKind::MasslessMuForm => Sector::RTilde,
        CharKind::MasslessSumForm if level1_ground => Sector::RTilde,
        _ => Sector::R,
    };
    let arg = EllipticArg(z.z() + flow_argument(spec.sector, tau) - flow_argument(base, tau));
    let ell = spec.isospin.to_f64().unwrap_or(f64::NAN);
    match spec.kind {
        CharKind::MasslessMuForm => Ok(theta_sq_over_eta3(ThetaLabel::T11, arg, tau) * mu(arg, tau)?),
        CharKind::MasslessSumForm if level1_ground => massless_level1_sum(arg, tau),
        CharKind::MasslessSumForm => massless_general_r(spec.level, ell, arg, tau),
        CharKind::Massive => {
            let k = spec.level as i64;
            let exponent = spec.h - spec.isospin * spec.isospin / (k + 1) - Rational64::new(k, 4);
            let affine = if spec.level == 1 {
                // χ_{0,0} is the trivial representation.
                Complex64::new(1.0, 0.0)
            } else {
                affine_char(spec.level - 1, spec.isospin - Rational64::new(1, 2), arg, tau)?
            };
            Ok(tau.q_pow(exponent.to_f64().unwrap_or(f64::NAN))
                * theta_sq_over_eta3(ThetaLabel::T10, arg, tau)
                * affine)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusVariant {
    K3,
    Decompactified,
    /// The A₁ (ALE) genus.
    A1,
}

/// Elliptic genera as sums of squared normalized theta quotients.
pub fn elliptic_genus(variant: GenusVariant, z: EllipticArg, tau: ModularPoint) -> Complex64 {
    let zero = EllipticArg::real(0.0);
    let quotient = |label| (theta(label, z, tau) / theta(label, zero, tau)).powi(2);
    let pair = quotient(ThetaLabel::T00) + quotient(ThetaLabel::T01);
    match variant {
        GenusVariant::K3 => 8.0 * (quotient(ThetaLabel::T10) + pair),
        GenusVariant::Decompactified => 8.0 * pair,
        GenusVariant::A1 => 0.5 * pair,
    }
}

/// `J(z;w;τ) = θ₁₁(z)²/η³ · (μ(z;τ) - μ(w;τ))`.
pub fn j_fn(z: EllipticArg, w: EllipticArg, tau: ModularPoint) -> Result<Complex64> {
    let diff = mu(z, tau)? - mu(w, tau)?;
    Ok(theta_sq_over_eta3(ThetaLabel::T11, z, tau) * diff)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau(re: f64, im: f64) -> ModularPoint {
        ModularPoint::from_parts(re, im).unwrap()
    }

    fn half() -> Rational64 {
        Rational64::new(1, 2)
    }

    #[test]
    fn flow_table() {
        let t = tau(0.2, 1.3);
        assert_eq!(flow_argument(Sector::NS, t), Complex64::zero());
        assert_eq!(flow_argument(Sector::NSTilde, t) - flow_argument(Sector::NS, t), Complex64::new(0.5, 0.0));
        let d = flow_argument(Sector::RTilde, t) - flow_argument(Sector::R, t);
        assert!((d - Complex64::new(0.5, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn affine_trivial_and_even() {
        let t = tau(0.0, 1.2);
        let z = EllipticArg::new(0.13, 0.02);
        assert!((affine_char(0, Rational64::zero(), z, t).unwrap() - 1.0).norm() < 1e-12);
        let a = affine_char(2, half(), z, t).unwrap();
        let b = affine_char(2, half(), EllipticArg(-z.z()), t).unwrap();
        assert!((a - b).norm() < 1e-12);
        assert_eq!(
            affine_char(1, half(), EllipticArg::real(0.0), t),
            Err(Error::DenominatorVanishes)
        );
    }

    #[test]
    fn affine_level1_against_quotient_oracle() {
        let t = tau(0.0, 1.2);
        let z = 0.13;
        // Direct sums with fixed ranges for ϑ_{3,±2} and ϑ_{2,±1}.
        let direct = |p: f64, a: f64| -> Complex64 {
            (-30..=30)
                .map(|n| {
                    let m = 2.0 * p * n as f64 + a;
                    let mag = (-std::f64::consts::PI * 1.2 * m * m / (2.0 * p)).exp();
                    mag * Complex64::from_polar(1.0, std::f64::consts::TAU * z * m)
                })
                .sum()
        };
        let oracle = (direct(3.0, 2.0) - direct(3.0, -2.0)) / (direct(2.0, 1.0) - direct(2.0, -1.0));
        let v = affine_char(1, half(), EllipticArg::real(z), t).unwrap();
        assert!((v - oracle).norm() < 1e-12);
    }

    #[test]
    fn sum_form_matches_mu_form() {
        let t = tau(0.1, 1.3);
        let z = EllipticArg::new(0.21, 0.05);
        let s = char_eval(&CharSpec::massless_level1(CharKind::MasslessSumForm, Rational64::zero()), z, t).unwrap();
        let m = char_eval(&CharSpec::massless_level1(CharKind::MasslessMuForm, Rational64::zero()), z, t).unwrap();
        assert!((s - m).norm() < 1e-9, "{s} {m}");
    }

    #[test]
    fn general_massless_formula_reduces_to_level1_sum() {
        let t = tau(-0.05, 1.1);
        let z = EllipticArg::new(0.17, -0.03);
        let shifted = EllipticArg(z.z() + 0.5);
        let general = massless_general_r(1, 0.0, shifted, t).unwrap();
        let level1 = massless_level1_sum(z, t).unwrap();
        assert!((general - level1).norm() < 1e-10, "{general} {level1}");
    }

    #[test]
    fn massive_level1_is_theta_quotient() {
        let t = tau(0.0, 1.2);
        let z = EllipticArg::new(0.19, 0.0);
        for n in 1..4 {
            let ch = char_eval(&CharSpec::massive_level1(n), z, t).unwrap();
            let expect = t.q_pow(n as f64 - 0.125) * theta_sq_over_eta3(ThetaLabel::T11, z, t);
            assert!((ch - expect).norm() < 1e-12 * expect.norm());
        }
    }

    #[test]
    fn spec_validation() {
        let mut bad = CharSpec::massive_level1(1);
        bad.h = Rational64::new(1, 4);
        assert!(matches!(bad.validate(), Err(Error::UnsupportedSpec(_))));
        let mu_half = CharSpec::massless_level1(CharKind::MasslessMuForm, half());
        assert!(mu_half.validate().is_err());
        let mut quarter = CharSpec::massless_level1(CharKind::MasslessSumForm, Rational64::new(1, 4));
        assert!(quarter.validate().is_err());
        quarter.isospin = Rational64::new(3, 2);
        assert!(quarter.validate().is_err());
    }

    #[test]
    fn genus_basics() {
        let t = tau(0.05, 1.1);
        let g = elliptic_genus(GenusVariant::K3, EllipticArg::real(0.0), t);
        assert!((g - 24.0).norm() < 1e-10);
        let z = EllipticArg::new(0.17, 0.04);
        let d = elliptic_genus(GenusVariant::A1, z, t) - elliptic_genus(GenusVariant::Decompactified, z, t) / 16.0;
        assert!(d.norm() < 1e-14);
    }

    #[test]
    fn genus_against_direct_theta_sums() {
        let t = 1.1;
        let z = 0.17;
        let sum = |a: f64, b: f64, zz: f64| -> Complex64 {
            (-40..=40)
                .map(|n| {
                    let x = n as f64 + a;
                    let mag = (-std::f64::consts::PI * t * x * x).exp();
                    mag * Complex64::from_polar(1.0, std::f64::consts::TAU * x * (zz + b))
                })
                .sum()
        };
        let mut oracle = Complex64::zero();
        for (a, b) in [(0.5, 0.0), (0.0, 0.0), (0.0, 0.5)] {
            oracle += (sum(a, b, z) / sum(a, b, 0.0)).powi(2);
        }
        oracle *= 8.0;
        let g = elliptic_genus(GenusVariant::K3, EllipticArg::real(z), tau(0.0, t));
        assert!((g - oracle).norm() < 1e-12);
    }

    #[test]
    fn j_vanishes_on_diagonal_and_half_periods() {
        let t = tau(0.12, 1.05);
        let z = EllipticArg::new(0.2, 0.07);
        assert!(j_fn(z, z, t).unwrap().norm() < 1e-12);
        let zero = EllipticArg::real(0.0);
        let [w2, w3, w4] = EllipticArg::half_periods(t);
        for (w, label) in [(w2, ThetaLabel::T10), (w3, ThetaLabel::T00), (w4, ThetaLabel::T01)] {
            let expect = (theta(label, z, t) / theta(label, zero, t)).powi(2);
            let r = j_fn(z, w, t).unwrap() - expect;
            assert!(r.norm() < 1e-9, "{label:?}: {r}");
        }
    }
}
