//! Exact coefficient tables of the K3 elliptic genus and numerical checks
//! of its character decomposition.
//!
//! The Lerch sums at the half-periods are expanded as Lambert-type series in
//! `q`, divided by theta constants, and the massive multiplicities are read
//! off from
//!
//! ```text
//! Σ(τ)  = 8 Σ_a N_a/θ_a(0) = q^{-1/8} (2 - Σ A_n q^n)
//! Σ°(τ) = 8 N₂/θ₁₀(0)      = q^{-1/8} (2 - Σ A°_n q^n)
//! ```
//!
//! where `h_a = N_a/(η θ_a(0))`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::analytic::{
    char_eval, elliptic_genus, j_fn, theta, CharKind, CharSpec, EllipticArg, GenusVariant,
    ModularPoint, Sector, ThetaLabel,
};
use crate::qseries::{int, named_series, FracExp, QSeries, SeriesName, UNITS_PER_POWER};
use crate::{Error, Kind, Result};

/// Extra full powers of `q` carried through divisions, so that the
/// `q^{-1/4}` loss from inverting theta constants never reaches the
/// requested truncation.
const GUARD_POWERS: i64 = 1;

/// Which of `h₂, h₃, h₄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfPeriod {
    /// `w = 1/2`, theta constant `θ₁₀(0)`.
    H2,
    /// `w = (1+τ)/2`, theta constant `θ₀₀(0)`.
    H3,
    /// `w = τ/2`, theta constant `θ₀₁(0)`.
    H4,
}

impl HalfPeriod {
    pub const ALL: [HalfPeriod; 3] = [HalfPeriod::H2, HalfPeriod::H3, HalfPeriod::H4];

    pub fn from_index(a: u32) -> Result<Self> {
        match a {
            2 => Ok(HalfPeriod::H2),
            3 => Ok(HalfPeriod::H3),
            4 => Ok(HalfPeriod::H4),
            other => Err(Error::UnknownName(format!("h_{other}"))),
        }
    }

    /// The elliptic argument `w` with `h_a = μ(w;τ)/η(τ)`.
    pub fn point(self, tau: ModularPoint) -> EllipticArg {
        let [w2, w3, w4] = EllipticArg::half_periods(tau);
        match self {
            HalfPeriod::H2 => w2,
            HalfPeriod::H3 => w3,
            HalfPeriod::H4 => w4,
        }
    }

    fn theta_const(self) -> SeriesName {
        match self {
            HalfPeriod::H2 => SeriesName::Theta10Const,
            HalfPeriod::H3 => SeriesName::Theta00Const,
            HalfPeriod::H4 => SeriesName::Theta01Const,
        }
    }
}

/// Expands `Σ_{j≥0} sign(j) q^{base + j·step}` below `truncation` (all in
/// 1/24 units) into `out`, scaled by `weight`.
fn geometric(out: &mut Vec<(FracExp, BigRational)>, base: i64, step: i64, alternating: bool, weight: i64, truncation: i64) {
    let mut e = base;
    let mut j = 0i64;
    while e < truncation {
        let sign = if alternating && j % 2 == 1 { -1 } else { 1 };
        out.push((FracExp::from_units(e), int(sign * weight)));
        e += step;
        j += 1;
    }
}

/// Lambert-type numerator `N_a` of `h_a`, with the index pairings that leave
/// only geometric series in positive powers of `q`:
///
/// ```text
/// N₂ = 1/2 + 2 Σ_{m≥1} q^{m(m+1)/2} / (1 + q^m)
/// N₃ = 2 Σ_{m≥1} q^{m²/2 - 1/8} / (1 + q^{m-1/2})
/// N₄ = 2 Σ_{m≥1} (-1)^m q^{m²/2 - 1/8} / (1 - q^{m-1/2})
/// ```
pub fn lambert_numerator(a: HalfPeriod, truncation: FracExp) -> QSeries {
    let t = truncation.units();
    let mut terms = Vec::new();
    match a {
        HalfPeriod::H2 => {
            terms.push((FracExp::ZERO, BigRational::new(1.into(), 2.into())));
            for m in 1.. {
                let base = 12 * m * (m + 1);
                if base >= t {
                    break;
                }
                geometric(&mut terms, base, UNITS_PER_POWER * m, true, 2, t);
            }
        }
        HalfPeriod::H3 | HalfPeriod::H4 => {
            for m in 1.. {
                let base = 12 * m * m - 3;
                if base >= t {
                    break;
                }
                let step = UNITS_PER_POWER * m - 12;
                if a == HalfPeriod::H3 {
                    geometric(&mut terms, base, step, true, 2, t);
                } else {
                    let sign = if m % 2 == 0 { 2 } else { -2 };
                    geometric(&mut terms, base, step, false, sign, t);
                }
            }
        }
    }
    QSeries::from_terms(terms, truncation)
}

fn guarded(truncation: FracExp) -> FracExp {
    truncation + FracExp::integer(GUARD_POWERS)
}

/// `N_a / θ_a(0)`, i.e. `η·h_a`, truncated at `truncation`.
fn eta_times_h(a: HalfPeriod, truncation: FracExp) -> Result<QSeries> {
    let inner = guarded(truncation);
    let numerator = lambert_numerator(a, inner);
    let theta = named_series(a.theta_const(), inner)?;
    Ok(numerator.div(&theta)?.truncate(truncation))
}

/// Exact q-expansion of `h_a = N_a/(η θ_a(0))`.
pub fn h_series(a: HalfPeriod, truncation: FracExp) -> Result<QSeries> {
    if truncation < FracExp::integer(1) {
        return Err(Error::InvalidInput("h_series needs at least one full power of q".into()));
    }
    let inner = guarded(truncation);
    let eta = named_series(SeriesName::Eta, inner)?;
    Ok(eta_times_h(a, inner)?.div(&eta)?.truncate(truncation))
}

/// `Σ = 8η(h₂+h₃+h₄)` for [`Kind::K3`], `Σ° = 8η h₂` for
/// [`Kind::Noncompact`]. Every coefficient must come out integral.
pub fn sigma_series(kind: Kind, truncation: FracExp) -> Result<QSeries> {
    if truncation < FracExp::integer(1) {
        return Err(Error::InvalidInput("sigma_series needs at least one full power of q".into()));
    }
    let parts: &[HalfPeriod] = match kind {
        Kind::K3 => &HalfPeriod::ALL,
        Kind::Noncompact => &[HalfPeriod::H2],
    };
    let pieces: Vec<QSeries> = parts
        .par_iter()
        .map(|&a| eta_times_h(a, truncation))
        .collect::<Result<_>>()?;
    let sum = pieces
        .iter()
        .fold(QSeries::zero(truncation), |acc, p| acc.add(p));
    let sigma = sum.scale(&int(8));
    sigma.ensure_integral()?;
    Ok(sigma)
}

/// Provenance of a coefficient table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    /// `A_n`.
    K3,
    /// `A°_n`.
    Noncompact,
    /// `(A_n - A°_n)/16`.
    Ale,
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k3" => Ok(TableKind::K3),
            "noncompact" => Ok(TableKind::Noncompact),
            "ale" => Ok(TableKind::Ale),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

impl std::fmt::Display for TableKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TableKind::K3 => "k3",
            TableKind::Noncompact => "noncompact",
            TableKind::Ale => "ale",
        })
    }
}

/// Exact integer multiplicities indexed by `n ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    pub kind: TableKind,
    pub values: BTreeMap<u32, BigInt>,
    pub n_max: u32,
}

impl CoeffTable {
    pub fn get(&self, n: u32) -> Option<&BigInt> {
        self.values.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigInt)> + '_ {
        self.values.iter().map(|(&n, v)| (n, v))
    }
}

/// Reads `-[q^{n-1/8}]` for `1 ≤ n ≤ n_max`.
fn massive_multiplicities(sigma: &QSeries, n_max: u32) -> Result<BTreeMap<u32, BigInt>> {
    (1..=n_max)
        .map(|n| {
            let e = FracExp::from_units(UNITS_PER_POWER * n as i64 - 3);
            let c = sigma.coefficient(e)?;
            if !c.is_integer() {
                return Err(Error::NonIntegralCoefficient {
                    units: e.units(),
                    value: c.to_string(),
                });
            }
            Ok((n, -c.to_integer()))
        })
        .collect()
}

fn invariant(what: String) -> Error {
    Error::InvalidInput(format!("table invariant violated: {what}"))
}

/// Sign pattern `(-1)^n` of `A°_n` is asserted on this range only.
pub const NONCOMPACT_SIGN_CHECKED_UP_TO: u32 = 10;

/// Builds the exact table and checks its invariants: `A_n > 0`,
/// `A_n ≡ A°_n (mod 16)` with positive quotient, and `sgn A°_n = (-1)^n`
/// for `n ≤ 10`.
pub fn coeff_table(kind: TableKind, n_max: u32) -> Result<CoeffTable> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be >= 1".into()));
    }
    let truncation = FracExp::integer(n_max as i64 + 1);
    let get = |k: Kind| -> Result<BTreeMap<u32, BigInt>> {
        massive_multiplicities(&sigma_series(k, truncation)?, n_max)
    };
    let values = match kind {
        TableKind::K3 => {
            let a = get(Kind::K3)?;
            if let Some((n, v)) = a.iter().find(|(_, v)| !v.is_positive()) {
                return Err(invariant(format!("A_{n} = {v} is not positive")));
            }
            a
        }
        TableKind::Noncompact => {
            let a = get(Kind::Noncompact)?;
            for (&n, v) in a.range(..=NONCOMPACT_SIGN_CHECKED_UP_TO) {
                if v.is_positive() != (n % 2 == 0) {
                    return Err(invariant(format!("A°_{n} = {v} has the wrong sign")));
                }
            }
            a
        }
        TableKind::Ale => {
            let (a, b) = rayon::join(|| get(Kind::K3), || get(Kind::Noncompact));
            let (a, b) = (a?, b?);
            let sixteen = BigInt::from(16);
            a.iter()
                .map(|(&n, an)| {
                    let diff = an - &b[&n];
                    if !(&diff % &sixteen).is_zero() || !diff.is_positive() {
                        return Err(invariant(format!("(A_{n} - A°_{n})/16 = {diff}/16")));
                    }
                    Ok((n, diff / &sixteen))
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(CoeffTable { kind, values, n_max })
}

/// Which elliptic genus a decomposition refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decomposition {
    /// `Z = 20 ch₀ - 2 ch_{1/2} + Σ A_n ch_n`.
    K3,
    /// `Z° = 16 ch₀ + Σ (A_n - A°_n) ch_n`.
    Decompactified,
}

fn massless(isospin: Rational64) -> CharSpec {
    CharSpec::massless_level1(CharKind::MasslessSumForm, isospin)
}

/// `|Z(z;τ) - (massless part + Σ_{n≤N} mult_n · ch_{n+1/4})|`, all
/// characters in the R̃ sector.
pub fn decomposition_residual(
    which: Decomposition,
    z: EllipticArg,
    tau: ModularPoint,
    n_terms: u32,
) -> Result<f64> {
    let ch0 = char_eval(&massless(Rational64::zero()), z, tau)?;
    let (genus, mut total, mults) = match which {
        Decomposition::K3 => {
            let ch_half = char_eval(&massless(Rational64::new(1, 2)), z, tau)?;
            let table = if n_terms > 0 { Some(coeff_table(TableKind::K3, n_terms)?) } else { None };
            (
                elliptic_genus(GenusVariant::K3, z, tau),
                20.0 * ch0 - 2.0 * ch_half,
                table.map(|t| t.values).unwrap_or_default(),
            )
        }
        Decomposition::Decompactified => {
            let table = if n_terms > 0 { Some(coeff_table(TableKind::Ale, n_terms)?) } else { None };
            let values = table
                .map(|t| t.values.into_iter().map(|(n, v)| (n, v * 16)).collect())
                .unwrap_or_default();
            (elliptic_genus(GenusVariant::Decompactified, z, tau), 16.0 * ch0, values)
        }
    };
    for (n, mult) in &mults {
        let spec = CharSpec::massive_level1(*n as i64);
        debug_assert_eq!(spec.sector, Sector::RTilde);
        let weight: f64 = mult.to_string().parse().unwrap_or(f64::NAN);
        total += weight * char_eval(&spec, z, tau)?;
    }
    Ok((genus - total).norm())
}

/// The named identities checked by [`identity_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityName {
    /// `J(z;w;τ) = (θ_w(z)/θ_w(0))²` at all three half-periods.
    HalfPeriodSq,
    /// `J(z;z;τ) = 0`.
    JVanish,
    /// `ch_{1/2} + 2 ch₀ = q^{-1/8} θ₁₁(z)²/η³`.
    Recursion,
    /// `Z_K3(0;τ) = 24`.
    GenusAtZero,
}

impl FromStr for IdentityName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half_period_sq" => Ok(IdentityName::HalfPeriodSq),
            "J_vanish" | "j_vanish" => Ok(IdentityName::JVanish),
            "recursion" => Ok(IdentityName::Recursion),
            "genus_at_zero" => Ok(IdentityName::GenusAtZero),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

/// Absolute residual of a named identity at `(z, τ)`.
pub fn identity_check(name: IdentityName, z: EllipticArg, tau: ModularPoint) -> Result<f64> {
    match name {
        IdentityName::HalfPeriodSq => {
            let zero = EllipticArg::real(0.0);
            let labels = [ThetaLabel::T10, ThetaLabel::T00, ThetaLabel::T01];
            let mut worst = 0.0f64;
            for (w, label) in EllipticArg::half_periods(tau).into_iter().zip(labels) {
                let expect = (theta(label, z, tau) / theta(label, zero, tau)).powi(2);
                worst = worst.max((j_fn(z, w, tau)? - expect).norm());
            }
            Ok(worst)
        }
        IdentityName::JVanish => Ok(j_fn(z, z, tau)?.norm()),
        IdentityName::Recursion => {
            let lhs = char_eval(&massless(Rational64::new(1, 2)), z, tau)?
                + 2.0 * char_eval(&massless(Rational64::zero()), z, tau)?;
            let eta = crate::analytic::eta_num(tau);
            let rhs: Complex64 = tau.q_pow(-0.125) * theta(ThetaLabel::T11, z, tau).powi(2) / eta.powi(3);
            Ok((lhs - rhs).norm())
        }
        IdentityName::GenusAtZero => {
            Ok((elliptic_genus(GenusVariant::K3, EllipticArg::real(0.0), tau) - 24.0).norm())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{eta_num, mu};
    use num_traits::ToPrimitive;

    fn tau(re: f64, im: f64) -> ModularPoint {
        ModularPoint::from_parts(re, im).unwrap()
    }

    fn values(t: &CoeffTable) -> Vec<i64> {
        t.values.values().map(|v| v.to_i64().unwrap()).collect()
    }

    #[test]
    fn h2_constant_is_one_half() {
        let n2 = lambert_numerator(HalfPeriod::H2, FracExp::integer(4));
        assert_eq!(n2.coefficient(FracExp::ZERO).unwrap(), BigRational::new(1.into(), 2.into()));
    }

    /// Direct expansion of the unpaired bilateral sums by brute force: each
    /// `n` contributes one geometric series, using `1/(1+x) = x⁻¹/(1+x⁻¹)`
    /// when the exponent of `x` is negative.
    fn lambert_oracle(a: HalfPeriod, t_units: i64) -> BTreeMap<i64, BigRational> {
        let mut out: BTreeMap<i64, BigRational> = BTreeMap::new();
        let mut push = |e: i64, c: BigRational| {
            if e < t_units {
                *out.entry(e).or_insert_with(BigRational::zero) += c;
            }
        };
        for n in -40i64..=40 {
            let (num, den_exp, sign_num, den_sign) = match a {
                HalfPeriod::H2 => (12 * n * (n + 1), 24 * n, 1, 1),
                HalfPeriod::H3 => (12 * n * n - 3, 24 * n - 12, 1, 1),
                HalfPeriod::H4 => (12 * n * n - 3, 24 * n - 12, if n % 2 == 0 { 1 } else { -1 }, -1),
            };
            if den_exp == 0 {
                push(num, BigRational::new(sign_num.into(), 2.into()));
                continue;
            }
            // 1/(1 + s x) with s = den_sign, x = q^{den_exp}
            let (start, step, lead_sign, ratio_sign) = if den_exp > 0 {
                (num, den_exp, 1, -den_sign)
            } else {
                (num - den_exp, -den_exp, den_sign, -den_sign)
            };
            let mut e = start;
            let mut s = sign_num * lead_sign;
            while e < t_units {
                push(e, int(s));
                e += step;
                s *= ratio_sign;
            }
        }
        out
    }

    #[test]
    fn paired_lambert_sums_match_bilateral_oracle() {
        let t = FracExp::integer(8);
        for a in HalfPeriod::ALL {
            let series = lambert_numerator(a, t);
            let oracle = lambert_oracle(a, t.units());
            for units in 0..t.units() {
                let expect = oracle.get(&units).cloned().unwrap_or_else(BigRational::zero);
                let got = series.coefficient(FracExp::from_units(units)).unwrap();
                assert_eq!(got, expect, "{a:?} at {units}/24");
            }
        }
    }

    #[test]
    fn h_series_matches_mu_over_eta() {
        let t = tau(0.0, 1.3);
        let eta = eta_num(t);
        for a in HalfPeriod::ALL {
            let h = h_series(a, FracExp::integer(12)).unwrap();
            let expect = mu(a.point(t), t).unwrap() / eta;
            assert!((h.evaluate(t.tau()) - expect).norm() < 1e-9, "{a:?}");
        }
    }

    #[test]
    fn sigma_leading_terms() {
        let s = sigma_series(Kind::K3, FracExp::integer(3)).unwrap();
        assert_eq!(s.offset(), FracExp::from_units(-3));
        assert_eq!(s.leading().unwrap(), &int(2));
        assert_eq!(s.coefficient(FracExp::from_units(21)).unwrap(), int(-90));
        let so = sigma_series(Kind::Noncompact, FracExp::integer(3)).unwrap();
        assert_eq!(so.leading().unwrap(), &int(2));
        assert_eq!(so.coefficient(FracExp::from_units(21)).unwrap(), int(6));
    }

    #[test]
    fn sigma_tenth_coefficient() {
        let s = sigma_series(Kind::K3, FracExp::integer(11)).unwrap();
        assert_eq!(s.coefficient(FracExp::from_units(240 - 3)).unwrap(), int(-521136));
    }

    #[test]
    fn tables_to_ten() {
        assert_eq!(
            values(&coeff_table(TableKind::K3, 10).unwrap()),
            [90, 462, 1540, 4554, 11592, 27830, 61686, 131100, 265650, 521136]
        );
        assert_eq!(
            values(&coeff_table(TableKind::Noncompact, 10).unwrap()),
            [-6, 14, -28, 42, -56, 86, -138, 188, -238, 336]
        );
        assert_eq!(values(&coeff_table(TableKind::Ale, 3).unwrap()), [6, 28, 98]);
    }

    #[test]
    fn sigma_agrees_with_lerch_sums_numerically() {
        for t in [tau(0.0, 1.0), tau(0.2, 1.2), tau(-0.3, 1.6)] {
            let s = sigma_series(Kind::K3, FracExp::integer(20)).unwrap();
            let direct: Complex64 = EllipticArg::half_periods(t)
                .into_iter()
                .map(|w| 8.0 * mu(w, t).unwrap())
                .sum();
            assert!((s.evaluate(t.tau()) - direct).norm() < 1e-9);
            let so = sigma_series(Kind::Noncompact, FracExp::integer(20)).unwrap();
            let direct = 8.0 * mu(EllipticArg::real(0.5), t).unwrap();
            assert!((so.evaluate(t.tau()) - direct).norm() < 1e-9);
        }
    }

    #[test]
    fn named_identities_hold() {
        for (z, t) in [
            (EllipticArg::new(0.2, 0.0), tau(0.0, 1.1)),
            (EllipticArg::new(0.13, 0.05), tau(0.3, 0.9)),
            (EllipticArg::new(-0.31, 0.1), tau(-0.2, 1.7)),
        ] {
            assert!(identity_check(IdentityName::JVanish, z, t).unwrap() < 1e-12);
            for name in [IdentityName::HalfPeriodSq, IdentityName::Recursion] {
                let r = identity_check(name, z, t).unwrap();
                assert!(r < 1e-9, "{name:?}: {r}");
            }
            assert!(identity_check(IdentityName::GenusAtZero, z, t).unwrap() < 1e-10);
        }
        assert!(matches!("nope".parse::<IdentityName>(), Err(Error::UnknownName(_))));
    }

    /// Fitted at `τ = 1.4i`, `z = 0.2`: residual(N) / |q|^{N+7/8} is about
    /// 42, 215, 716, 2100 for N = 0..=3 before the floating-point floor takes
    /// over. The ratio tracks the growth of `A_{N+1}`.
    const TAIL_CONSTANT: f64 = 1.0e4;
    const FLOATING_FLOOR: f64 = 1.0e-12;

    #[test]
    fn decomposition_converges() {
        let z = EllipticArg::real(0.2);
        let t = tau(0.0, 1.4);
        let residuals: Vec<f64> = (0..=12)
            .map(|n| decomposition_residual(Decomposition::K3, z, t, n).unwrap())
            .collect();
        assert!(residuals[..4].windows(2).all(|w| w[1] < w[0]), "{residuals:?}");
        for (n, r) in residuals.iter().enumerate() {
            let bound = TAIL_CONSTANT * t.q_abs().powf(n as f64 + 0.875) + FLOATING_FLOOR;
            assert!(*r < bound, "N = {n}: {r} >= {bound}");
        }
        let r = decomposition_residual(Decomposition::K3, z, tau(0.0, 1.5), 12).unwrap();
        assert!(r < 1e-6, "{r}");
        let r = decomposition_residual(Decomposition::Decompactified, z, tau(0.0, 1.5), 12).unwrap();
        assert!(r < 1e-6, "{r}");
        let r0 = decomposition_residual(Decomposition::Decompactified, z, t, 0).unwrap();
        let r3 = decomposition_residual(Decomposition::Decompactified, z, t, 3).unwrap();
        assert!(r3 < r0);
    }
}
