//! Cross-module consistency: the exact q-series, the analytic completion
//! and the exact formulas must describe the same numbers.

use mockforms::analytic::{r_num, ModularPoint, RMethod};
use mockforms::characters::{coeff_table, sigma_series, TableKind};
use mockforms::qseries::FracExp;
use mockforms::rademacher::{exact_coeff, exact_coeff_terms, KloostermanCache};
use mockforms::shadow::sigma_hat_num;
use mockforms::Kind;
use num_traits::ToPrimitive;

#[test]
fn completion_minus_correction_is_the_exact_series() {
    let tau = ModularPoint::from_parts(0.17, 1.1).unwrap();
    for (kind, weight) in [(Kind::K3, 12.0), (Kind::Noncompact, 4.0)] {
        let series = sigma_series(kind, FracExp::integer(30)).unwrap();
        let holo = sigma_hat_num(tau, kind).unwrap() + weight * r_num(tau, RMethod::Sum).unwrap();
        let exact = series.evaluate(tau.tau());
        assert!((holo - exact).norm() < 1e-9 * exact.norm().max(1.0), "{kind}: {holo} vs {exact}");
    }
}

#[test]
fn long_truncation_rounds_to_the_table() {
    // Two hundred moduli push the truncation error well below 1/2.
    let table = coeff_table(TableKind::K3, 10).unwrap();
    for (n, exact) in table.iter() {
        let approx = exact_coeff(Kind::K3, n as u64, 200).unwrap().cumulative;
        assert_eq!(approx.round(), exact.to_f64().unwrap(), "n={n}: {approx}");
    }
}

#[test]
fn noncompact_formula_tracks_the_table() {
    let table = coeff_table(TableKind::Noncompact, 12).unwrap();
    for (n, exact) in table.iter() {
        let approx = exact_coeff_terms(Kind::Noncompact, n as u64, 100).unwrap().cumulative;
        let exact = exact.to_f64().unwrap();
        assert!((approx - exact).abs() < 0.5, "n={n}: {approx} vs {exact}");
        assert_eq!(approx.signum(), exact.signum());
    }
}

#[test]
fn ale_table_is_the_scaled_difference() {
    let k3 = coeff_table(TableKind::K3, 15).unwrap();
    let nc = coeff_table(TableKind::Noncompact, 15).unwrap();
    let ale = coeff_table(TableKind::Ale, 15).unwrap();
    for n in 1..=15 {
        let diff = k3.get(n).unwrap() - nc.get(n).unwrap();
        assert_eq!(&diff, &(ale.get(n).unwrap() * 16), "n={n}");
    }
}

#[test]
fn persisted_cache_reproduces_results_bit_for_bit() {
    let dir = std::env::temp_dir().join(format!("mockforms-pipeline-{}", std::process::id()));
    let cold = exact_coeff(Kind::K3, 9, 40).unwrap().cumulative;
    KloostermanCache::global().save(&dir).unwrap();
    let restored = KloostermanCache::new();
    assert!(restored.load(&dir).unwrap() >= 40);
    KloostermanCache::global().clear();
    KloostermanCache::global().load(&dir).unwrap();
    let warm = exact_coeff(Kind::K3, 9, 40).unwrap().cumulative;
    assert_eq!(cold.to_bits(), warm.to_bits());
    std::fs::remove_dir_all(&dir).unwrap();
}
