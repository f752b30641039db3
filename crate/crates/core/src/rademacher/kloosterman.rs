use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;

use super::cache::{Family, KloostermanCache, KloostermanKey};
use super::dedekind::{dedekind_sum, DedekindMethod};
use crate::summation::ComplexNeumaierSum;
use crate::Result;

/// Sign of the Dedekind-sum phase in a multiplier sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSign {
    /// `e^{-3πi s(d,c)}`, the coefficient sums.
    Minus,
    /// `e^{+3πi s(d,c)}`, the shadow sums.
    Plus,
}

/// `Σ_{d mod c, gcd(d,c)=1} e^{∓3πi s(d,c) + 2πi dn/c}` without caching.
///
/// With `M = 6c·s(d,c) ∈ ℤ` the phase is `π(∓M + 4dn)/(2c)`; the numerator
/// is reduced mod `4c` in integers before conversion to an angle.
pub fn multiplier_sum(sign: PhaseSign, n: i64, c: u64) -> Result<Complex64> {
    let ci = c as i64;
    let four_c = 4 * c as i128;
    let n_mod = n.rem_euclid(ci) as i128;
    let mut acc = ComplexNeumaierSum::new();
    for d in 0..ci {
        if d.gcd(&ci) != 1 {
            continue;
        }
        let m = dedekind_sum(d, ci, DedekindMethod::Euclid)?.six_c_multiple();
        let m = match sign {
            PhaseSign::Minus => -m,
            PhaseSign::Plus => m,
        };
        let p = (m + 4 * d as i128 * n_mod).rem_euclid(four_c);
        acc.add(phase(p as f64 / (2.0 * c as f64)));
    }
    Ok(acc.value())
}

/// `e^{iπx}` for `x ∈ [0, 2)`, exact at the quarter turns.
fn phase(x: f64) -> Complex64 {
    match x {
        0.0 => Complex64::new(1.0, 0.0),
        0.5 => Complex64::new(0.0, 1.0),
        1.0 => Complex64::new(-1.0, 0.0),
        1.5 => Complex64::new(0.0, -1.0),
        v => Complex64::from_polar(1.0, PI * v),
    }
}

/// `K(n,c) = Σ_{d mod c, gcd(d,c)=1} e^{-3πi s(d,c) + 2πi dn/c}`, memoized in
/// [`KloostermanCache::global`]. For `c = 1` the only term is `d = 0`, so
/// `K(n,1) = 1`.
pub fn kloosterman(family: Family, n: i64, c: u64) -> Result<Complex64> {
    kloosterman_in(KloostermanCache::global(), family, n, c)
}

/// [`kloosterman`] against an explicit cache.
pub fn kloosterman_in(cache: &KloostermanCache, family: Family, n: i64, c: u64) -> Result<Complex64> {
    let key = KloostermanKey::new(family, n, c)?;
    if let Some(v) = cache.lookup(&key) {
        return Ok(v);
    }
    let v = multiplier_sum(PhaseSign::Minus, key.n_mod_c as i64, c)?;
    cache.insert(key, v);
    Ok(v)
}

/// Reads the cached value, if any.
pub fn cache_lookup(key: &KloostermanKey) -> Option<Complex64> {
    KloostermanCache::global().lookup(key)
}

/// `(-4/k)` on odd `k`: `+1` for `k ≡ 1 (4)`, `-1` for `k ≡ 3 (4)`.
fn chi_minus_four(k: i64) -> f64 {
    match k.rem_euclid(4) {
        1 => 1.0,
        3 => -1.0,
        _ => 0.0,
    }
}

/// The quadratic form of the same sum:
/// `-(i√c/2) Σ_{k mod 4c, k² ≡ 1-8n (8c)} (-4/k) e^{πik/(2c)}`.
pub fn kloosterman_quadratic(n: i64, c: u64) -> Complex64 {
    let c = c as i64;
    let modulus = 8 * c as i128;
    let target = (1 - 8 * n as i128).rem_euclid(modulus);
    let mut acc = ComplexNeumaierSum::new();
    for k in (1..=4 * c).step_by(2) {
        if (k as i128 * k as i128) % modulus == target {
            acc.add(chi_minus_four(k) * phase((k as f64 / (2.0 * c as f64)).rem_euclid(2.0)));
        }
    }
    Complex64::new(0.0, -(c as f64).sqrt() / 2.0) * acc.value()
}
