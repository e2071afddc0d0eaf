use approx::assert_abs_diff_eq;

use dwradius::bounds::BoundId;
use dwradius::harness::{run_fuzz, sharpness_scan, FuzzConfig, MatrixClass};
use dwradius::NormSpec;

fn config(classes: &[MatrixClass], norms: Vec<NormSpec>, count: usize) -> FuzzConfig {
    FuzzConfig {
        dims: vec![2, 3],
        classes: classes.to_vec(),
        norms,
        count_per_cell: count,
        oracle_samples: 2_000,
        ..FuzzConfig::default()
    }
}

#[test]
fn projections_have_dw_n_sqrt2_under_operator_norm() {
    let report = run_fuzz(&config(&[MatrixClass::Projection], vec![NormSpec::operator()], 8)).unwrap();
    let r = report.range(MatrixClass::Projection, "op").unwrap();
    assert_abs_diff_eq!(r.dw_n_min, 2f64.sqrt(), epsilon = 1e-9);
    assert_abs_diff_eq!(r.dw_n_max, 2f64.sqrt(), epsilon = 1e-9);
    assert_abs_diff_eq!(r.w_n_max, 1.0, epsilon = 1e-12);
}

#[test]
fn report_shape_and_cleanliness() {
    let classes = [MatrixClass::Ginibre, MatrixClass::Unitary, MatrixClass::Rank1];
    let norms = vec![NormSpec::operator(), NormSpec::frobenius(), NormSpec::numerical_radius()];
    let report = run_fuzz(&config(&classes, norms, 4)).unwrap();
    assert_eq!(report.cells.len(), BoundId::ALL.len() * 3 * 3);
    assert_eq!(report.samples, report.planned_samples);
    assert_eq!(report.samples, 24);
    assert!(report.is_clean());
    assert!(report.violations_of(BoundId::RefutedUp) > 0);
    let tri = report.cell(BoundId::TriDwn, MatrixClass::Ginibre, "op").unwrap();
    assert_eq!(tri.checked, 4, "one triangle check per sample pair");
    let algebra_only = report.cell(BoundId::Eqb1, MatrixClass::Ginibre, "w").unwrap();
    assert!(!algebra_only.applicable);
    assert_eq!(algebra_only.checked, 0);
    assert_eq!(report.oracle.checked, 24);
}

#[test]
fn single_sample_cells_skip_triangle_bounds() {
    let report = run_fuzz(&config(&[MatrixClass::Normal], vec![NormSpec::trace()], 1)).unwrap();
    let tri = report.cell(BoundId::TriDw, MatrixClass::Normal, "tr").unwrap();
    assert!(!tri.applicable);
    assert_eq!(tri.checked, 0);
}

#[test]
fn huge_tolerance_silences_every_violation() {
    let mut cfg = config(&[MatrixClass::Diagonal], vec![NormSpec::operator()], 4);
    cfg.tolerance = Some(1e6);
    let report = run_fuzz(&cfg).unwrap();
    assert_eq!(report.violations_of(BoundId::RefutedUp), 0);
}

#[test]
fn same_seed_same_report() {
    let cfg = config(&[MatrixClass::Nilpotent, MatrixClass::Hermitian], vec![NormSpec::trace()], 4);
    assert_eq!(run_fuzz(&cfg).unwrap().to_json(), run_fuzz(&cfg).unwrap().to_json());
    let other = FuzzConfig { seed: 43, ..cfg.clone() };
    assert_ne!(run_fuzz(&cfg).unwrap().to_json(), run_fuzz(&other).unwrap().to_json());
}

#[test]
fn invalid_configs_are_rejected() {
    let cfg = FuzzConfig { count_per_cell: 0, ..FuzzConfig::default() };
    assert!(run_fuzz(&cfg).is_err());
    let cfg = FuzzConfig { dims: vec![0], ..FuzzConfig::default() };
    assert!(run_fuzz(&cfg).is_err());
    let cfg = FuzzConfig { tolerance: Some(f64::NAN), ..FuzzConfig::default() };
    assert!(run_fuzz(&cfg).is_err());
}

#[test]
fn sharpness_scan_finds_known_equality_cases() {
    let cfg = config(
        &[MatrixClass::Nilpotent, MatrixClass::Projection, MatrixClass::Hermitian],
        vec![NormSpec::operator()],
        6,
    );
    let witnesses = sharpness_scan(&cfg).unwrap();
    let has = |bound, class| witnesses.iter().any(|w| w.bound == bound && w.class == class);
    assert!(has(BoundId::Thm22, MatrixClass::Nilpotent));
    assert!(has(BoundId::Eqb1, MatrixClass::Projection));
    assert!(has(BoundId::Eqb2, MatrixClass::Projection));
    assert!(has(BoundId::SandwichDwn, MatrixClass::Hermitian));
    assert!(witnesses.windows(2).all(|p| p[0].margin <= p[1].margin));
    assert!(witnesses.iter().all(|w| w.margin.abs() < 1e-3 && w.matrix.is_some() && w.digest.len() == 64));
}

#[test]
fn hermitian_samples_attain_the_dw_n_upper_link() {
    let norms = FuzzConfig::default().norms;
    let report = run_fuzz(&config(&[MatrixClass::Hermitian], norms.clone(), 5)).unwrap();
    for norm in &norms {
        let cell = report.cell(BoundId::SandwichDwn, MatrixClass::Hermitian, &norm.to_string()).unwrap();
        let upper = cell.links.iter().find(|l| l.label == "upper").unwrap();
        assert!(upper.max_margin <= 1e-6, "{norm}: {}", upper.max_margin);
    }
}
