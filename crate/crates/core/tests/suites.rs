use quosyn::{mutation_report, run_suite, GenConfig, InstanceId};

fn passes(instance: InstanceId, trials: usize) {
    let cfg = GenConfig::new(instance).with_trials(trials).with_seed(11);
    let report = run_suite(&cfg).unwrap();
    assert!(report.all_passed(), "{report}");
    assert!(!report.properties.is_empty());
}

#[test]
fn prop_suite_passes() {
    passes(InstanceId::Prop, 300);
}

#[test]
fn strlang_suite_passes() {
    passes(InstanceId::Strlang, 300);
}

#[test]
fn goedel_suite_passes() {
    passes(InstanceId::Goedel, 300);
}

#[test]
fn minilisp_suite_passes() {
    passes(InstanceId::Minilisp, 300);
}

#[test]
fn lambda_suite_passes() {
    passes(InstanceId::Lambda, 100);
}

#[test]
fn ring_suite_passes() {
    passes(InstanceId::Ring, 300);
}

#[test]
fn zero_trials_give_an_empty_report() {
    for i in InstanceId::ALL {
        let report = run_suite(&GenConfig::new(i).with_trials(0)).unwrap();
        assert!(report.properties.is_empty());
        assert!(report.all_passed());
    }
}

#[test]
fn corrupted_quotation_is_caught() {
    for i in InstanceId::ALL {
        let report = mutation_report(&GenConfig::new(i).with_trials(200).with_seed(3)).unwrap();
        assert!(!report.all_passed(), "{i}: mutation survived\n{report}");
    }
}

#[test]
fn reports_are_reproducible() {
    let cfg = GenConfig::new(InstanceId::Ring).with_trials(100).with_seed(42);
    let a = run_suite(&cfg).unwrap().to_json();
    let b = run_suite(&cfg).unwrap().to_json();
    assert_eq!(a, b);
}
