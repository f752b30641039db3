//! Exact q-series, Rademacher-type exact formulas and numerical checks for
//! the massive N=4 character multiplicities of the K3 elliptic genus.
//!
//! The crate is split along the computation pipeline:
//!
//! - [`qseries`]: exact formal q-expansions with exponents graded in 1/24.
//! - [`analytic`]: double-precision evaluation of theta functions, eta, the
//!   Lerch sum and its completion, characters and elliptic genera.
//! - [`characters`]: the exact coefficient tables `A_n`, `A_n°` and the
//!   character decomposition checks.
//! - [`rademacher`]: Dedekind sums, multiplier sums and the truncated exact
//!   formulas for `A_n`, `A_n°` and `p(n)`.
//! - [`shadow`]: the shadow / completion structure of the Poincaré–Maass series.

pub mod analytic;
pub mod characters;
mod error;
pub mod qseries;
pub mod rademacher;
pub mod shadow;
pub mod summation;

pub use error::{Error, Result};

/// Which generating function a coefficient belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Compact K3: `A_n`, Kloosterman moduli over all `c >= 1`.
    K3,
    /// Decompactified K3: `A_n°`, moduli restricted to even `c`.
    Noncompact,
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k3" => Ok(Kind::K3),
            "noncompact" => Ok(Kind::Noncompact),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::K3 => "k3",
            Kind::Noncompact => "noncompact",
        })
    }
}
