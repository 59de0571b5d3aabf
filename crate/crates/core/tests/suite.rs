use weighted_radius::ensemble::{random_weight, sample, EnsembleConfig, EnsembleKind};
use weighted_radius::radius::WeightPair;
use weighted_radius::suite::{
    check, checker_ids, failure_count, kappa_ratio, kappa_ratio_search, report_to_json, reproduce, run_suite,
    tightness_search, ChainStatus, CheckInputs, FailureRecord, SuiteConfig, SuiteEnsemble,
};
use weighted_radius::{Error, Matrix, Weight};

fn inputs(x: Matrix<f64>, y: Option<Matrix<f64>>) -> CheckInputs {
    CheckInputs {
        x,
        y,
        p: WeightPair::half(),
        seed: 0,
        ensemble: None,
    }
}

#[test]
fn unknown_checker_and_non_member_are_errors() {
    let w = Weight::<f64>::new(&Matrix::real_diag(&[1.0, 0.0])).unwrap();
    let upper = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    assert!(matches!(
        check("thm-9-9", &w, &inputs(upper.clone(), None)),
        Err(Error::UnknownChecker(_))
    ));
    assert!(matches!(check("eq-1-2", &w, &inputs(upper, None)), Err(Error::NotMember { .. })));
}

#[test]
fn pair_checker_needs_second_input() {
    let w = Weight::<f64>::identity(2);
    let x = Matrix::real_diag(&[1.0, 2.0]);
    assert!(check("lem-4-2", &w, &inputs(x, None)).is_err());
}

#[test]
fn lem_4_2_thousand_trials() {
    let mut cfg = SuiteConfig::new(1000, 11);
    cfg.checkers = vec!["lem-4-2".into()];
    let report = run_suite(&cfg).unwrap();
    let r = &report["lem-4-2"];
    assert_eq!(r.trials, 4000);
    assert_eq!(r.failures.len(), 0);
}

#[test]
fn conditional_checkers_skip_on_generic_instances() {
    let mut cfg = SuiteConfig::new(20, 5);
    cfg.checkers = vec!["cor-2-10".into(), "cor-3-8".into(), "rem-3-9".into()];
    let report = run_suite(&cfg).unwrap();
    for id in ["cor-2-10", "cor-3-8", "rem-3-9"] {
        let r = &report[id];
        assert!(r.skips > 0, "{id}");
        assert!(r.skips < r.trials, "{id} never fired");
        assert_eq!(r.failures.len(), 0, "{id}");
    }
}

#[test]
fn same_seed_same_bytes() {
    let mut cfg = SuiteConfig::new(6, 99);
    cfg.checkers = checker_ids().into_iter().map(String::from).collect();
    cfg.heavy_trials = 1;
    let a = report_to_json(&run_suite(&cfg).unwrap());
    let b = report_to_json(&run_suite(&cfg).unwrap());
    assert_eq!(a, b);
    cfg.seed = 100;
    assert_ne!(a, report_to_json(&run_suite(&cfg).unwrap()));
}

#[test]
fn recorded_failures_reproduce_bit_for_bit() {
    let mut cfg = SuiteConfig::new(8, 3);
    cfg.checkers = vec!["thm-2-5".into(), "power".into(), "lem-4-2".into()];
    cfg.chain_tol = 1e-16;
    let report = run_suite(&cfg).unwrap();
    assert!(failure_count(&report) > 0, "a vanishing tolerance should expose rounding noise");
    for (id, r) in &report {
        for f in &r.failures {
            let text = serde_json::to_string(f).unwrap();
            let back: FailureRecord = serde_json::from_str(&text).unwrap();
            let chain = reproduce(id, &back, cfg.chain_tol).unwrap();
            assert_eq!(chain.status, ChainStatus::Fail);
            assert_eq!(chain.values.len(), f.chain.len());
            for (a, b) in chain.values.iter().zip(&f.chain) {
                assert_eq!(a.to_bits(), b.to_bits(), "{id}");
            }
        }
    }
}

#[test]
fn empty_checker_list_is_rejected() {
    let mut cfg = SuiteConfig::new(3, 1);
    cfg.checkers.clear();
    assert!(matches!(run_suite(&cfg), Err(Error::EmptyCheckers)));
}

fn ens(kind: EnsembleKind, dim: usize, rank: usize) -> SuiteEnsemble {
    SuiteEnsemble { kind, dim, rank }
}

#[test]
fn tightness_self_adjoint_radius_equals_norm() {
    let res = tightness_search("eq-1-2", 1, ens(EnsembleKind::ASelfAdjoint, 3, 2), 20, 4).unwrap();
    assert!((res.ratio - 1.0).abs() <= 1e-9, "{}", res.ratio);
}

#[test]
fn tightness_nilpotent_lower_bound_is_attained() {
    let res = tightness_search("eq-1-2", 0, ens(EnsembleKind::NilpotentAx2Zero, 3, 3), 20, 4).unwrap();
    assert!((res.ratio - 1.0).abs() <= 1e-8, "{}", res.ratio);
}

#[test]
fn tightness_thm_2_9_middle_meets_right_for_self_adjoint() {
    let res = tightness_search("thm-2-9", 1, ens(EnsembleKind::ASelfAdjoint, 3, 3), 20, 8).unwrap();
    assert!((res.ratio - 1.0).abs() <= 1e-8, "{}", res.ratio);
}

#[test]
fn tightness_never_exceeds_one_plus_tol() {
    for (id, pair) in [("thm-2-6", 0), ("thm-3-3", 0), ("cor-3-5", 1), ("rem-3-2", 2)] {
        let res = tightness_search(id, pair, ens(EnsembleKind::GeneralMember, 3, 2), 40, 17).unwrap();
        assert!(res.ratio <= 1.0 + 1e-7, "{id}: {}", res.ratio);
    }
}

#[test]
fn tightness_rejects_incompatible_kind_and_zero_budget() {
    assert!(tightness_search("thm-4-6", 0, ens(EnsembleKind::GeneralMember, 3, 3), 10, 1).is_err());
    assert!(tightness_search("eq-1-2", 0, ens(EnsembleKind::GeneralMember, 3, 3), 0, 1).is_err());
    assert!(matches!(
        tightness_search("nope", 0, ens(EnsembleKind::GeneralMember, 3, 3), 10, 1),
        Err(Error::UnknownChecker(_))
    ));
}

#[test]
fn kappa_diagonal_and_self_adjoint_bounds() {
    let wd = random_weight::<f64>(8, 4, 3, true).unwrap();
    let kd = kappa_ratio_search(&wd, true, 400, 2).unwrap();
    assert!(kd.sup_ratio <= 1.0 + 1e-6, "{}", kd.sup_ratio);
    let w = random_weight::<f64>(8, 3, 3, false).unwrap();
    let k = kappa_ratio_search(&w, false, 400, 2).unwrap();
    assert!(k.sup_ratio <= 2.0 + 1e-6, "{}", k.sup_ratio);
    let again = kappa_ratio(&w, &k.witness_x, &k.witness_y).unwrap().unwrap();
    assert_eq!(again, k.sup_ratio);
}

#[test]
fn kappa_is_monotone_in_budget() {
    let w = random_weight::<f64>(21, 3, 2, false).unwrap();
    let mut last = f64::NEG_INFINITY;
    for budget in [1, 5, 25, 125] {
        match kappa_ratio_search(&w, false, budget, 6) {
            Ok(k) => {
                assert!(k.sup_ratio >= last);
                last = k.sup_ratio;
            }
            Err(Error::NoNonzeroSample { .. }) => assert_eq!(last, f64::NEG_INFINITY),
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn kappa_of_equal_pair() {
    let w = random_weight::<f64>(2, 3, 3, false).unwrap();
    let x = sample(&EnsembleConfig::new(4, 3, 3, EnsembleKind::ASelfAdjoint), &w).unwrap();
    // For a-self-adjoint x, ‖x²‖_a = ‖x‖²_a, so the ratio is exactly 1.
    let r = kappa_ratio(&w, &x, &x).unwrap().unwrap();
    assert!((r - 1.0).abs() <= 1e-10, "{r}");
}
