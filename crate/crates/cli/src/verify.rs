//! Verification suites run by `mockforms verify`.

use std::f64::consts::PI;

use mockforms::analytic::{
    char_eval, eta_num, mu_hat, CharKind, CharSpec, EllipticArg, ModularPoint,
};
use mockforms::characters::{decomposition_residual, identity_check, Decomposition, IdentityName};
use mockforms::rademacher::{
    dedekind_sum, kloosterman, kloosterman_quadratic, multiplier_sum, DedekindMethod, Family,
    PhaseSign, Rational128,
};
use mockforms::shadow::{
    anomaly_check, holomorphic_coefficients, laplacian_check, multiplier, sigma_hat_num,
};
use mockforms::{Kind, Result};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Identities,
    Dedekind,
    Kloosterman,
    ShadowLight,
    Decomposition,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Dedekind => "dedekind",
            Suite::Kloosterman => "kloosterman",
            Suite::ShadowLight => "shadow-light",
            Suite::Decomposition => "decomposition",
            Suite::All => "all",
        }
    }
}

/// One aggregated check: the worst residual over `count` evaluations.
#[derive(Debug, Clone)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub count: usize,
    pub residual: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual < self.tolerance
    }
}

struct Collector {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Collector {
    fn new(suite: &'static str) -> Self {
        Collector { suite, checks: Vec::new() }
    }

    fn push(&mut self, name: &str, tolerance: f64, residuals: &[f64]) {
        // NaN must fail, so fold with a NaN-propagating max.
        let residual = residuals
            .iter()
            .fold(0.0f64, |m, &r| if r.is_nan() || m.is_nan() { f64::NAN } else { m.max(r) });
        self.checks.push(Check {
            suite: self.suite,
            name: name.to_string(),
            count: residuals.len(),
            residual,
            tolerance,
        });
    }
}

pub fn run(suite: Suite) -> Result<Vec<Check>> {
    Ok(match suite {
        Suite::Identities => identities()?,
        Suite::Dedekind => dedekind()?,
        Suite::Kloosterman => kloosterman_suite()?,
        Suite::ShadowLight => shadow_light()?,
        Suite::Decomposition => decomposition()?,
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Identities, Suite::Dedekind, Suite::Kloosterman, Suite::ShadowLight, Suite::Decomposition] {
                all.extend(run(s)?);
            }
            all
        }
    })
}

fn taus() -> Vec<ModularPoint> {
    [(0.1, 0.9), (-0.2, 1.35), (0.35, 1.8)]
        .into_iter()
        .map(|(re, im)| ModularPoint::from_parts(re, im).expect("upper half-plane"))
        .collect()
}

fn zs() -> [EllipticArg; 3] {
    [EllipticArg::new(0.13, 0.04), EllipticArg::new(0.31, -0.07), EllipticArg::new(-0.27, 0.11)]
}

fn identities() -> Result<Vec<Check>> {
    let mut out = Collector::new("identities");
    let phase_t = Complex64::from_polar(1.0, -PI / 4.0);
    let names = [
        ("J at half-periods is a theta quotient squared", IdentityName::HalfPeriodSq),
        ("J(z;z) vanishes", IdentityName::JVanish),
        ("massless recursion", IdentityName::Recursion),
        ("K3 genus at z = 0 is 24", IdentityName::GenusAtZero),
    ];
    for (label, name) in names {
        let mut r = Vec::new();
        for tau in taus() {
            for z in zs() {
                r.push(identity_check(name, z, tau)?);
            }
        }
        out.push(label, 1e-9, &r);
    }

    let mut forms = Vec::new();
    let mut laws: [Vec<f64>; 4] = Default::default();
    for tau in taus() {
        let t = tau.tau();
        for z in zs() {
            let zero = Rational64::zero();
            let a = char_eval(&CharSpec::massless_level1(CharKind::MasslessSumForm, zero), z, tau)?;
            let b = char_eval(&CharSpec::massless_level1(CharKind::MasslessMuForm, zero), z, tau)?;
            forms.push((a - b).norm());

            let base = mu_hat(z, tau)?;
            laws[0].push((mu_hat(z, tau.translate(1.0))? - phase_t * base).norm());
            let root = (Complex64::i() / t).sqrt();
            laws[1].push((base + root * mu_hat(EllipticArg(z.z() / t), tau.inversion())?).norm());
            laws[2].push((mu_hat(EllipticArg(z.z() + 1.0), tau)? - base).norm());
            laws[3].push((mu_hat(EllipticArg(z.z() + t), tau)? - base).norm());
        }
    }
    out.push("massless character: sum form = mu form", 1e-9, &forms);
    let law_names = ["mu_hat(tau+1)", "mu_hat(-1/tau)", "mu_hat(z+1)", "mu_hat(z+tau)"];
    for (name, r) in law_names.iter().zip(&laws) {
        out.push(name, 1e-9, r);
    }

    let gammas = [[1i64, 0, 1, 1], [1, 0, 2, 1], [2, -1, 3, -1]];
    let (mut s_law, mut t_law, mut g_law, mut eta_law) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for tau in taus() {
        let t = tau.tau();
        let base = sigma_hat_num(tau, Kind::K3)?;
        s_law.push((sigma_hat_num(tau.inversion(), Kind::K3)? + (t / Complex64::i()).sqrt() * base).norm());
        t_law.push((sigma_hat_num(tau.translate(1.0), Kind::K3)? - phase_t * base).norm());
        for gamma in gammas {
            let [a, _, c, d] = gamma;
            let image = tau.act(gamma)?;
            let root = (t * c as f64 + d as f64).sqrt();
            g_law.push((sigma_hat_num(image, Kind::K3)? - multiplier(gamma)? * root * base).norm());
            let s = dedekind_sum(d, c, DedekindMethod::Euclid)?.to_f64();
            let eta_phase = Complex64::from_polar(1.0, -PI / 4.0 + (a + d) as f64 * PI / (12.0 * c as f64) - s * PI);
            eta_law.push((eta_num(image) - eta_phase * root * eta_num(tau)).norm());
        }
    }
    out.push("completed sum under -1/tau", 1e-9, &s_law);
    out.push("completed sum under tau+1", 1e-9, &t_law);
    out.push("completed sum under three sample gammas", 1e-9, &g_law);
    out.push("eta multiplier under three sample gammas", 1e-9, &eta_law);

    let mut anomaly = Vec::new();
    let mut laplace = Vec::new();
    for (tau, z) in taus().into_iter().zip(zs()) {
        anomaly.push(anomaly_check(z, tau, 1e-4)?);
        laplace.push(laplacian_check(z, tau, 1e-3)?);
    }
    out.push("d/d(tau bar) of mu_hat against eta cubed", 1e-5, &anomaly);
    out.push("weight 1/2 Laplacian of mu_hat", 1e-4, &laplace);
    Ok(out.checks)
}

fn dedekind() -> Result<Vec<Check>> {
    let mut out = Collector::new("dedekind");
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut recip = Vec::new();
    while recip.len() < 500 {
        let a: i64 = rng.gen_range(1..=1_000_000);
        let b: i64 = rng.gen_range(1..=1_000_000);
        if a.gcd(&b) != 1 {
            continue;
        }
        let sum = dedekind_sum(a, b, DedekindMethod::Euclid)?.value + dedekind_sum(b, a, DedekindMethod::Euclid)?.value;
        let (ai, bi) = (a as i128, b as i128);
        let want = Rational128::new(ai * ai + bi * bi + 1, 12 * ai * bi) - Rational128::new(1, 4);
        recip.push(if sum == want { 0.0 } else { 1.0 });
    }
    out.push("reciprocity on random coprime pairs up to 1e6 (exact)", 0.5, &recip);

    let mut agree = Vec::new();
    let mut denominators = Vec::new();
    for c in 1..=200i64 {
        for d in (0..c).filter(|d| d.gcd(&c) == 1) {
            let x = dedekind_sum(d, c, DedekindMethod::Direct)?;
            let y = dedekind_sum(d, c, DedekindMethod::Euclid)?;
            agree.push(if x == y { 0.0 } else { 1.0 });
            let divides = (6 * c as i128) % x.value.denom() == 0;
            denominators.push(if divides { 0.0 } else { 1.0 });
        }
    }
    out.push("direct sum = reciprocity recursion for c <= 200 (exact)", 0.5, &agree);
    out.push("denominator divides 6c for c <= 200 (exact)", 0.5, &denominators);
    Ok(out.checks)
}

fn kloosterman_suite() -> Result<Vec<Check>> {
    let mut out = Collector::new("kloosterman");
    let mut quad = Vec::new();
    for c in 1..=25u64 {
        for n in 0..=25i64 {
            quad.push((multiplier_sum(PhaseSign::Minus, n, c)? - kloosterman_quadratic(n, c)).norm());
        }
    }
    out.push("quadratic form, c <= 25, n <= 25", 1e-9, &quad);
    let mut real = Vec::new();
    for c in 1..=100u64 {
        for n in 0..=50i64 {
            real.push(multiplier_sum(PhaseSign::Minus, n, c)?.im.abs());
            real.push(multiplier_sum(PhaseSign::Plus, n, c)?.im.abs());
        }
    }
    out.push("sums are real, c <= 100, n <= 50", 1e-9, &real);
    let mut unit = Vec::new();
    for n in -5..=5 {
        unit.push((kloosterman(Family::FullGamma1, n, 1)? - 1.0).norm());
    }
    out.push("K(n, 1) = 1", 1e-15, &unit);
    Ok(out.checks)
}

fn shadow_light() -> Result<Vec<Check>> {
    let mut out = Collector::new("shadow-light");
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    let mut unitary = Vec::new();
    while unitary.len() < 200 {
        let c: i64 = rng.gen_range(1..5000);
        let d: i64 = rng.gen_range(-5000..5000);
        if d.gcd(&c) != 1 {
            continue;
        }
        let e = d.extended_gcd(&c);
        unitary.push((multiplier([e.x, -e.y, c, d])?.norm() - 1.0).abs());
    }
    out.push("multiplier is unitary on 200 random gammas", 1e-12, &unitary);
    let mut translation = Vec::new();
    for n in -8..=8 {
        translation.push((multiplier([1, n, 0, 1])? - Complex64::from_polar(1.0, -PI * n as f64 / 4.0)).norm());
    }
    out.push("multiplier on translations", 1e-14, &translation);

    let mut nc = Vec::new();
    let phase_t = Complex64::from_polar(1.0, -PI / 4.0);
    for tau in taus() {
        let base = sigma_hat_num(tau, Kind::Noncompact)?;
        nc.push((sigma_hat_num(tau.translate(1.0), Kind::Noncompact)? - phase_t * base).norm());
    }
    out.push("noncompact completed sum under tau+1", 1e-9, &nc);

    let k3 = holomorphic_coefficients(Kind::K3, 0.6, 4, 128)?;
    let k3_r: Vec<f64> = k3.iter().zip([2.0, -90.0, -462.0, -1540.0]).map(|(g, w)| (g - w).abs()).collect();
    out.push("K3 holomorphic part re-expands to 2, -A_1, -A_2, -A_3", 1e-6, &k3_r);
    let ncc = holomorphic_coefficients(Kind::Noncompact, 0.6, 3, 128)?;
    let nc_r: Vec<f64> = ncc.iter().zip([2.0, 6.0, -14.0]).map(|(g, w)| (g - w).abs()).collect();
    out.push("noncompact holomorphic part re-expands to 2, 6, -14", 1e-6, &nc_r);
    Ok(out.checks)
}

fn decomposition() -> Result<Vec<Check>> {
    let mut out = Collector::new("decomposition");
    let points = [
        (EllipticArg::real(0.2), ModularPoint::from_parts(0.0, 1.4)?),
        (EllipticArg::new(0.31, -0.05), ModularPoint::from_parts(0.15, 1.2)?),
    ];
    for (label, which) in [("K3 genus", Decomposition::K3), ("decompactified genus", Decomposition::Decompactified)] {
        let mut r = Vec::new();
        for (z, tau) in points {
            r.push(decomposition_residual(which, z, tau, 14)?);
        }
        out.push(&format!("{label} from 14 massive characters"), 1e-9, &r);
    }
    Ok(out.checks)
}
