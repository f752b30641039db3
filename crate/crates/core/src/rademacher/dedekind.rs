use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::{Error, Result};

/// Exact rationals used for Dedekind sums. Numerators and denominators stay
/// below `~10^{21}` for moduli up to `10^6`, far inside `i128`.
pub type Rational128 = Ratio<i128>;

/// The sawtooth `((x))`: `0` on integers, `x - ⌊x⌋ - 1/2` otherwise.
pub fn sawtooth(x: Rational128) -> Rational128 {
    if x.is_integer() {
        Rational128::zero()
    } else {
        x - x.floor() - Rational128::new(1, 2)
    }
}

/// `s(d, c)` as an exact rational. The denominator divides `6c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DedekindSumValue {
    pub value: Rational128,
    pub c: i64,
}

impl DedekindSumValue {
    /// `6c · s(d, c)`, always an integer.
    pub fn six_c_multiple(&self) -> i128 {
        let scaled = self.value * Rational128::from_integer(6 * self.c as i128);
        debug_assert!(scaled.is_integer());
        scaled.to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DedekindMethod {
    /// The defining sum over `k mod c`, `O(c)`.
    Direct,
    /// Reciprocity recursion, `O(log c)`; requires `gcd(d, c) = 1`.
    Euclid,
}

/// `s(d,c) = Σ_{k mod c} ((k/c)) ((kd/c))`.
pub fn dedekind_sum(d: i64, c: i64, method: DedekindMethod) -> Result<DedekindSumValue> {
    if c <= 0 {
        return Err(Error::InvalidInput(format!("modulus c = {c} must be positive")));
    }
    let value = match method {
        DedekindMethod::Direct => direct(d, c),
        DedekindMethod::Euclid => {
            if d.gcd(&c) != 1 {
                return Err(Error::NotCoprime { d, c });
            }
            euclid(d.rem_euclid(c), c)
        }
    };
    Ok(DedekindSumValue { value, c })
}

/// With `((k/c)) = (2k - c)/(2c)` for `0 < k < c`, the sum is an integer
/// over `4c²`.
fn direct(d: i64, c: i64) -> Rational128 {
    let (c, d) = (c as i128, d.rem_euclid(c) as i128);
    let mut acc: i128 = 0;
    for k in 1..c {
        let r = (k * d) % c;
        if r != 0 {
            acc += (2 * k - c) * (2 * r - c);
        }
    }
    Rational128::new(acc, 4 * c * c)
}

/// `s(d,c) + s(c,d) = -1/4 + (d² + c² + 1)/(12cd)` for coprime `0 < d < c`,
/// with `s(c,d) = s(c mod d, d)`. Folded from the bottom of the Euclidean
/// chain so every intermediate is a reduced `s` value.
fn euclid(d: i64, c: i64) -> Rational128 {
    let mut chain = Vec::new();
    let (mut d, mut c) = (d as i128, c as i128);
    while d != 0 {
        chain.push((d, c));
        let r = c % d;
        c = d;
        d = r;
    }
    // c == 1 here; s(0, 1) = 0.
    let quarter = Rational128::new(1, 4);
    chain.into_iter().rev().fold(Rational128::zero(), |inner, (d, c)| {
        Rational128::new(d * d + c * c + 1, 12 * c * d) - quarter - inner
    })
}
