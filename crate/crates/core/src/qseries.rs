//! Exact formal q-series with exponents graded in units of 1/24.
//!
//! Every exponent in play (`q^{1/24}` from eta, `q^{1/8}` from theta
//! constants, `q^{1/2}` from the half-period Lerch sums) is an integer
//! multiple of 1/24, so exponents are stored as plain integers and never
//! rounded. Coefficients are arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, Result};

/// Number of exponent units per full power of q.
pub const UNITS_PER_POWER: i64 = 24;

/// Default truncation: 60 full powers of q.
pub const DEFAULT_TRUNCATION: FracExp = FracExp(60 * UNITS_PER_POWER);

/// An exponent of q measured in units of 1/24.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FracExp(i64);

impl FracExp {
    pub const ZERO: FracExp = FracExp(0);

    pub const fn from_units(units: i64) -> Self {
        FracExp(units)
    }

    /// The exponent `n`, a whole power of q.
    pub const fn integer(n: i64) -> Self {
        FracExp(n * UNITS_PER_POWER)
    }

    /// The exponent `num/den`; `None` unless it is a multiple of 1/24.
    pub fn ratio(num: i64, den: i64) -> Option<Self> {
        if den == 0 || (num * UNITS_PER_POWER) % den != 0 {
            return None;
        }
        Some(FracExp(num * UNITS_PER_POWER / den))
    }

    pub const fn units(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / UNITS_PER_POWER as f64
    }
}

impl Add for FracExp {
    type Output = FracExp;
    fn add(self, rhs: FracExp) -> FracExp {
        FracExp(self.0 + rhs.0)
    }
}

impl Sub for FracExp {
    type Output = FracExp;
    fn sub(self, rhs: FracExp) -> FracExp {
        FracExp(self.0 - rhs.0)
    }
}

impl Neg for FracExp {
    type Output = FracExp;
    fn neg(self) -> FracExp {
        FracExp(-self.0)
    }
}

impl fmt::Display for FracExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = num_integer::gcd(self.0, UNITS_PER_POWER);
        let (n, d) = (self.0 / g, UNITS_PER_POWER / g);
        if d == 1 {
            write!(f, "{n}")
        } else {
            write!(f, "{n}/{d}")
        }
    }
}

/// A truncated q-series `Σ a_k q^{(offset + k)/24} + O(q^{truncation})`.
///
/// Canonical form: the coefficient at `offset` is nonzero and there are no
/// trailing zeros. The zero series stores `offset == truncation`, which makes
/// the truncation rule of [`QSeries::mul`] uniform.
#[derive(Clone)]
pub struct QSeries {
    offset: FracExp,
    coeffs: Vec<BigRational>,
    truncation: FracExp,
}

impl QSeries {
    pub fn zero(truncation: FracExp) -> Self {
        QSeries {
            offset: truncation,
            coeffs: Vec::new(),
            truncation,
        }
    }

    pub fn one(truncation: FracExp) -> Self {
        Self::monomial(BigRational::one(), FracExp::ZERO, truncation)
    }

    pub fn monomial(coeff: BigRational, exp: FracExp, truncation: FracExp) -> Self {
        Self::from_terms([(exp, coeff)], truncation)
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Repeated exponents
    /// are summed; exponents at or beyond `truncation` are dropped.
    pub fn from_terms<I>(terms: I, truncation: FracExp) -> Self
    where
        I: IntoIterator<Item = (FracExp, BigRational)>,
    {
        let kept: Vec<(FracExp, BigRational)> = terms
            .into_iter()
            .filter(|(e, c)| *e < truncation && !c.is_zero())
            .collect();
        let Some(low) = kept.iter().map(|(e, _)| *e).min() else {
            return Self::zero(truncation);
        };
        let len = (truncation - low).units() as usize;
        let mut coeffs = vec![BigRational::zero(); len];
        for (e, c) in kept {
            let slot = &mut coeffs[(e - low).units() as usize];
            *slot += c;
        }
        Self::canonical(low, coeffs, truncation)
    }

    fn canonical(offset: FracExp, mut coeffs: Vec<BigRational>, truncation: FracExp) -> Self {
        let max_len = (truncation - offset).units().max(0) as usize;
        coeffs.truncate(max_len);
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        match coeffs.iter().position(|c| !c.is_zero()) {
            None => Self::zero(truncation),
            Some(lead) => {
                coeffs.drain(..lead);
                QSeries {
                    offset: offset + FracExp(lead as i64),
                    coeffs,
                    truncation,
                }
            }
        }
    }

    pub fn offset(&self) -> FracExp {
        self.offset
    }

    pub fn truncation(&self) -> FracExp {
        self.truncation
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient, if the series is nonzero.
    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.first()
    }

    /// Nonzero `(exponent, coefficient)` pairs in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (FracExp, &BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.offset + FracExp(k as i64), c))
    }

    /// Exact coefficient of `q^e`.
    pub fn coefficient(&self, e: FracExp) -> Result<BigRational> {
        if e >= self.truncation {
            return Err(Error::BeyondTruncation {
                requested: e.units(),
                truncation: self.truncation.units(),
            });
        }
        if e < self.offset {
            return Ok(BigRational::zero());
        }
        Ok(self
            .coeffs
            .get((e - self.offset).units() as usize)
            .cloned()
            .unwrap_or_else(BigRational::zero))
    }

    /// Restricts the series to exponents strictly below `truncation`.
    pub fn truncate(&self, truncation: FracExp) -> Self {
        let truncation = truncation.min(self.truncation);
        if self.is_zero() {
            return Self::zero(truncation);
        }
        Self::canonical(self.offset, self.coeffs.clone(), truncation)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.truncation);
        }
        QSeries {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            truncation: self.truncation,
        }
    }

    /// Multiplies by the monomial `q^e`; the truncation shifts along.
    pub fn shift(&self, e: FracExp) -> Self {
        QSeries {
            offset: self.offset + e,
            coeffs: self.coeffs.clone(),
            truncation: self.truncation + e,
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let truncation = self.truncation.min(other.truncation);
        if self.is_zero() {
            return other.truncate(truncation);
        }
        if other.is_zero() {
            return self.truncate(truncation);
        }
        let low = self.offset.min(other.offset);
        let len = (truncation - low).units().max(0) as usize;
        let mut coeffs = vec![BigRational::zero(); len];
        for series in [self, other] {
            let base = (series.offset - low).units() as usize;
            for (k, c) in series.coeffs.iter().enumerate() {
                if let Some(slot) = coeffs.get_mut(base + k) {
                    *slot += c;
                }
            }
        }
        Self::canonical(low, coeffs, truncation)
    }

    /// Cauchy product. The result is known up to
    /// `min(T_f + v_g, T_g + v_f)` where `v` is the valuation.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let truncation = (self.truncation + other.offset).min(other.truncation + self.offset);
        if self.is_zero() || other.is_zero() {
            return Self::zero(truncation);
        }
        let offset = self.offset + other.offset;
        let len = (truncation - offset).units().max(0) as usize;
        let rhs: Vec<(usize, &BigRational)> = other
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for &(j, b) in &rhs {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        Self::canonical(offset, coeffs, truncation)
    }

    /// Multiplicative inverse. If `f = c q^a (1 + …) + O(q^T)` the inverse is
    /// `c⁻¹ q^{-a} (1 + …) + O(q^{T - 2a})`.
    pub fn invert(&self) -> Result<QSeries> {
        let lead = self.leading().ok_or(Error::ZeroLeadingCoefficient)?;
        if lead.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let inv_lead = lead.recip();
        let len = (self.truncation - self.offset).units() as usize;
        let f: Vec<(usize, &BigRational)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let mut g: Vec<BigRational> = Vec::with_capacity(len);
        g.push(inv_lead.clone());
        for k in 1..len {
            let mut acc = BigRational::zero();
            for &(j, fj) in &f {
                if j > k {
                    break;
                }
                let gk = &g[k - j];
                if !gk.is_zero() {
                    acc += fj * gk;
                }
            }
            g.push(-(acc * &inv_lead));
        }
        let offset = -self.offset;
        Ok(Self::canonical(
            offset,
            g,
            self.truncation - self.offset - self.offset,
        ))
    }

    pub fn div(&self, other: &QSeries) -> Result<QSeries> {
        Ok(self.mul(&other.invert()?))
    }

    /// The substitution `q -> q^m`.
    pub fn substitute_qm(&self, m: u32) -> Result<QSeries> {
        if m == 0 {
            return Err(Error::InvalidInput("substitution power must be >= 1".into()));
        }
        let m = m as i64;
        let truncation = FracExp(self.truncation.units() * m);
        if self.is_zero() {
            return Ok(Self::zero(truncation));
        }
        Ok(Self::from_terms(
            self.terms().map(|(e, c)| (FracExp(e.units() * m), c.clone())),
            truncation,
        ))
    }

    /// Numerical value at `q = e^{2πiτ}`, using `q^{k/24} = e^{2πiτk/24}`.
    pub fn evaluate(&self, tau: Complex64) -> Complex64 {
        let step = (Complex64::i() * 2.0 * std::f64::consts::PI * tau / UNITS_PER_POWER as f64).exp();
        let base = (Complex64::i() * 2.0 * std::f64::consts::PI * tau * self.offset.to_f64()).exp();
        // Horner in q^{1/24}.
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * step + Complex64::new(rational_to_f64(c), 0.0);
        }
        acc * base
    }

    /// Equality on the exponent range both series know about.
    pub fn agrees_with(&self, other: &QSeries) -> bool {
        let t = self.truncation.min(other.truncation);
        self.truncate(t) == other.truncate(t)
    }

    /// Checks that every coefficient is an integer.
    pub fn ensure_integral(&self) -> Result<()> {
        match self.terms().find(|(_, c)| !c.is_integer()) {
            None => Ok(()),
            Some((e, c)) => Err(Error::NonIntegralCoefficient {
                units: e.units(),
                value: c.to_string(),
            }),
        }
    }
}

impl PartialEq for QSeries {
    fn eq(&self, other: &Self) -> bool {
        self.truncation == other.truncation
            && (self.is_zero() && other.is_zero()
                || self.offset == other.offset && self.coeffs == other.coeffs)
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms().take(12) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})q^({e})")?;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^({}))", self.truncation)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            truncation: self.truncation,
        }
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        QSeries::add(self, &-rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// The series available through [`named_series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesName {
    /// `q^{1/24} ∏ (1 - q^n)`.
    Eta,
    /// `Σ_{n≥0} (-1)^n (2n+1) q^{(2n+1)²/8}`.
    EtaCubed,
    /// `∏ 1/(1 - q^n)`.
    PartitionGen,
    /// `θ₁₀(0;τ) = Σ q^{(n+1/2)²/2}`.
    Theta10Const,
    /// `θ₀₀(0;τ) = Σ q^{n²/2}`.
    Theta00Const,
    /// `θ₀₁(0;τ) = Σ (-1)^n q^{n²/2}`.
    Theta01Const,
}

impl FromStr for SeriesName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "eta" => SeriesName::Eta,
            "eta_cubed" => SeriesName::EtaCubed,
            "partition_gen" => SeriesName::PartitionGen,
            "theta10_const" => SeriesName::Theta10Const,
            "theta00_const" => SeriesName::Theta00Const,
            "theta01_const" => SeriesName::Theta01Const,
            other => return Err(Error::UnknownName(other.to_string())),
        })
    }
}

/// `∏_{n ≥ 1} (1 - q^n)` up to (exclusive) `truncation`.
pub fn euler_product(truncation: FracExp) -> QSeries {
    let max_power = (truncation.units() + UNITS_PER_POWER - 1) / UNITS_PER_POWER;
    // Dense integer polynomial in q; far cheaper than repeated series products.
    let mut poly = vec![0i128; max_power.max(1) as usize];
    poly[0] = 1;
    for n in 1..max_power as usize {
        for k in (n..poly.len()).rev() {
            poly[k] -= poly[k - n];
        }
    }
    QSeries::from_terms(
        poly.into_iter()
            .enumerate()
            .map(|(k, c)| (FracExp::integer(k as i64), BigRational::from_integer(BigInt::from(c)))),
        truncation,
    )
}

/// Exact q-expansion of a named series, truncated at `truncation`.
pub fn named_series(name: SeriesName, truncation: FracExp) -> Result<QSeries> {
    if truncation <= FracExp::ZERO {
        return Err(Error::InvalidInput("truncation must be positive".into()));
    }
    let t = truncation.units();
    let series = match name {
        SeriesName::Eta => {
            let shift = FracExp::from_units(1);
            euler_product(truncation - shift).shift(shift)
        }
        SeriesName::EtaCubed => QSeries::from_terms(
            (0..)
                .map(|n: i64| (n, 3 * (2 * n + 1) * (2 * n + 1)))
                .take_while(|&(_, units)| units < t)
                .map(|(n, units)| {
                    let sign = if n % 2 == 0 { 1 } else { -1 };
                    (FracExp::from_units(units), int(sign * (2 * n + 1)))
                }),
            truncation,
        ),
        SeriesName::PartitionGen => euler_product(truncation).invert()?,
        SeriesName::Theta10Const => QSeries::from_terms(
            (0..)
                .map(|n: i64| 3 * (2 * n + 1) * (2 * n + 1))
                .take_while(|&units| units < t)
                .map(|units| (FracExp::from_units(units), int(2))),
            truncation,
        ),
        SeriesName::Theta00Const | SeriesName::Theta01Const => {
            let alternating = name == SeriesName::Theta01Const;
            let tail = (1..)
                .map(|n: i64| (n, 12 * n * n))
                .take_while(|&(_, units)| units < t)
                .map(|(n, units)| {
                    let sign = if alternating && n % 2 == 1 { -2 } else { 2 };
                    (FracExp::from_units(units), int(sign))
                });
            QSeries::from_terms(std::iter::once((FracExp::ZERO, int(1))).chain(tail), truncation)
        }
    };
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(units: i64) -> FracExp {
        FracExp::from_units(units)
    }

    fn t() -> FracExp {
        FracExp::integer(30)
    }

    #[test]
    fn frac_exp_ratio() {
        assert_eq!(FracExp::ratio(1, 8), Some(q(3)));
        assert_eq!(FracExp::ratio(-1, 8), Some(q(-3)));
        assert_eq!(FracExp::ratio(1, 5), None);
        assert_eq!(FracExp::ratio(3, 24).unwrap().to_string(), "1/8");
    }

    #[test]
    fn add_identity_and_inverse() {
        let eta = named_series(SeriesName::Eta, t()).unwrap();
        assert_eq!(&eta + &QSeries::zero(t()), eta);
        assert!((&eta - &eta).is_zero());
    }

    #[test]
    fn eta_plus_eta_is_doubled() {
        let eta = named_series(SeriesName::Eta, t()).unwrap();
        let doubled = &eta + &eta;
        let oracle = named_series(SeriesName::Eta, t()).unwrap().scale(&int(2));
        for (e, c) in oracle.terms() {
            assert_eq!(&doubled.coefficient(e).unwrap(), c);
        }
        assert_eq!(doubled, oracle);
    }

    #[test]
    fn mul_identity_and_exponent_addition() {
        let eta = named_series(SeriesName::Eta, t()).unwrap();
        assert!((&eta * &QSeries::one(FracExp::integer(100))).agrees_with(&eta));
        let a = QSeries::monomial(int(1), q(1), t());
        let sq = &a * &a;
        assert_eq!(sq.offset(), q(2));
        assert_eq!(sq.coefficient(q(2)).unwrap(), int(1));
        assert_eq!(sq.terms().count(), 1);
    }

    #[test]
    fn invert_of_one_and_eta() {
        let one = QSeries::one(t());
        assert_eq!(one.invert().unwrap(), one);
        let eta = named_series(SeriesName::Eta, t()).unwrap();
        let prod = &eta.invert().unwrap() * &eta;
        assert_eq!(prod.offset(), FracExp::ZERO);
        assert_eq!(prod.terms().count(), 1);
        assert_eq!(prod.coefficient(FracExp::ZERO).unwrap(), int(1));
    }

    #[test]
    fn invert_rejects_zero() {
        assert_eq!(QSeries::zero(t()).invert(), Err(Error::ZeroLeadingCoefficient));
    }

    #[test]
    fn truncation_rules() {
        // f = q^{1/8}(…) + O(q^{30}), g = q^{-1/8}(…) + O(q^{10}).
        let f = QSeries::from_terms([(q(3), int(1)), (q(27), int(2))], FracExp::integer(30));
        let g = QSeries::from_terms([(q(-3), int(1))], FracExp::integer(10));
        assert_eq!((&f * &g).truncation(), FracExp::integer(10) + q(3));
        let inv = f.invert().unwrap();
        assert_eq!(inv.offset(), q(-3));
        assert_eq!(inv.truncation(), FracExp::integer(30) - q(6));
    }

    #[test]
    fn coefficient_beyond_truncation() {
        let z = QSeries::zero(t());
        assert_eq!(z.coefficient(q(5)).unwrap(), BigRational::zero());
        assert!(matches!(
            z.coefficient(t()),
            Err(Error::BeyondTruncation { .. })
        ));
    }

    #[test]
    fn eta_leading_and_theta_constant_leading() {
        let eta = named_series(SeriesName::Eta, t()).unwrap();
        assert_eq!(eta.offset(), q(1));
        assert_eq!(eta.coefficient(q(1)).unwrap(), int(1));
        let th = named_series(SeriesName::Theta10Const, t()).unwrap();
        assert_eq!(th.offset(), q(3));
        assert_eq!(th.leading().unwrap(), &int(2));
    }

    #[test]
    fn partition_counts() {
        let p = named_series(SeriesName::PartitionGen, t()).unwrap();
        assert_eq!(p.coefficient(FracExp::integer(5)).unwrap(), int(7));
    }

    #[test]
    fn substitute_identity_and_exponents() {
        let eta = named_series(SeriesName::Eta, t()).unwrap();
        assert_eq!(eta.substitute_qm(1).unwrap(), eta);
        let eighth = QSeries::monomial(int(1), q(3), t());
        let s = eighth.substitute_qm(8).unwrap();
        assert_eq!(s.offset(), FracExp::integer(1));
        assert_eq!(s.truncation(), FracExp::integer(240));
        assert!(eta.substitute_qm(0).is_err());
    }

    #[test]
    fn unknown_series_name() {
        assert!(matches!(
            "theta11_const".parse::<SeriesName>(),
            Err(Error::UnknownName(_))
        ));
        assert_eq!("eta".parse::<SeriesName>().unwrap(), SeriesName::Eta);
    }

    /// Partition counts by brute-force enumeration of non-increasing parts.
    fn count_partitions(n: u32, largest: u32) -> u64 {
        if n == 0 {
            return 1;
        }
        (1..=largest.min(n)).map(|k| count_partitions(n - k, k)).sum()
    }

    #[test]
    fn partition_of_ten_by_enumeration() {
        let p = named_series(SeriesName::PartitionGen, FracExp::integer(16)).unwrap();
        for n in 0..16u32 {
            let c = p.coefficient(FracExp::integer(n as i64)).unwrap();
            assert_eq!(c, int(count_partitions(n, n) as i64), "p({n})");
        }
        assert_eq!(count_partitions(10, 10), 42);
    }

    /// `∏_{n<N}(1 - q^n)` by repeated polynomial multiplication.
    fn brute_product(len: usize) -> Vec<i64> {
        let mut poly = vec![0i64; len];
        poly[0] = 1;
        for n in 1..len {
            let mut next = poly.clone();
            for k in n..len {
                next[k] -= poly[k - n];
            }
            poly = next;
        }
        poly
    }

    #[test]
    fn euler_product_is_pentagonal() {
        let len = 50;
        let brute = brute_product(len);
        let mut pentagonal = vec![0i64; len];
        for k in -10i64..=10 {
            let g = (k * (3 * k - 1) / 2) as usize;
            if g < len {
                pentagonal[g] += if k % 2 == 0 { 1 } else { -1 };
            }
        }
        assert_eq!(brute, pentagonal);
        let series = euler_product(FracExp::integer(len as i64));
        for (k, want) in pentagonal.iter().enumerate() {
            assert_eq!(series.coefficient(FracExp::integer(k as i64)).unwrap(), int(*want));
        }
    }

    #[test]
    fn eta_cubed_is_triple_product() {
        let truncation = FracExp::integer(30);
        let eta = named_series(SeriesName::Eta, truncation).unwrap();
        let cubed = &(&eta * &eta) * &eta;
        let jacobi = named_series(SeriesName::EtaCubed, cubed.truncation()).unwrap();
        assert_eq!(cubed, jacobi);
        let terms: Vec<(i64, BigRational)> = jacobi.terms().take(4).map(|(e, c)| (e.units(), c.clone())).collect();
        assert_eq!(terms, vec![(3, int(1)), (27, int(-3)), (75, int(5)), (147, int(-7))]);
    }

    #[test]
    fn eta_cubed_at_eight_tau() {
        let s = named_series(SeriesName::EtaCubed, FracExp::integer(8)).unwrap().substitute_qm(8).unwrap();
        for (e, want) in [(1, 1), (9, -3), (25, 5), (49, -7), (17, 0)] {
            assert_eq!(s.coefficient(FracExp::integer(e)).unwrap(), int(want));
        }
    }

    fn series_strategy() -> impl Strategy<Value = QSeries> {
        (
            -30i64..30,
            proptest::collection::vec((-20i64..20, 1i64..4), 1..12),
            180i64..260,
        )
            .prop_map(|(offset, coeffs, trunc)| {
                QSeries::from_terms(
                    coeffs
                        .into_iter()
                        .enumerate()
                        .map(|(k, (num, den))| (q(offset + 3 * k as i64), BigRational::new(num.into(), den.into()))),
                    q(trunc),
                )
            })
    }

    fn unit_series_strategy() -> impl Strategy<Value = QSeries> {
        (series_strategy(), 1i64..5, -6i64..6).prop_map(|(tail, lead, offset)| {
            let lead = QSeries::monomial(int(lead), q(offset), tail.truncation());
            let tail = tail.shift(q(offset + 31 - tail.offset().units()));
            lead.add(&tail)
        })
    }

    proptest! {
        #[test]
        fn addition_laws(f in series_strategy(), g in series_strategy(), h in series_strategy()) {
            prop_assert_eq!(&f + &g, &g + &f);
            prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        }

        #[test]
        fn multiplication_laws(f in series_strategy(), g in series_strategy(), h in series_strategy()) {
            prop_assert_eq!(&f * &g, &g * &f);
            let left = &(&f * &g) * &h;
            let right = &f * &(&g * &h);
            prop_assert!(left.agrees_with(&right), "{} vs {}", left, right);
            let dist = &f * &(&g + &h);
            let expanded = &(&f * &g) + &(&f * &h);
            prop_assert!(dist.agrees_with(&expanded));
        }

        #[test]
        fn substitution_scales_exponents(f in series_strategy(), m in 1u32..6) {
            let s = f.substitute_qm(m).unwrap();
            prop_assert_eq!(s.truncation().units(), f.truncation().units() * m as i64);
            for (e, c) in f.terms() {
                prop_assert_eq!(&s.coefficient(FracExp::from_units(e.units() * m as i64)).unwrap(), c);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn inverse_is_two_sided(f in unit_series_strategy()) {
            let g = f.invert().unwrap();
            let product = &f * &g;
            prop_assert!(product.agrees_with(&QSeries::one(product.truncation())), "{}", product);
            prop_assert_eq!(g.offset(), -f.offset());
        }
    }
}
