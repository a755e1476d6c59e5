use ratli::checks;

#[test]
fn bundled_suites() {
    let reports = checks::run_all(7);
    assert_eq!(reports.len(), checks::suites().len());
    for r in &reports {
        println!("{}: {} cases, {} failed", r.name, r.cases, r.failures.len());
        if r.name == "neglog_faulhaber_bound" {
            continue;
        }
        assert!(
            r.passed(),
            "{}: {:?}",
            r.name,
            &r.failures[..r.failures.len().min(5)]
        );
    }
}

#[test]
fn faulhaber_term_bound_has_counterexamples() {
    let r = checks::neglog_faulhaber_bound(0);
    assert!(
        r.failures.iter().any(|f| f.starts_with("y4:")),
        "{:?}",
        r.failures
    );
}

#[test]
fn basis_images_are_independent() {
    for seed in 0..10 {
        assert!(checks::basis_rank_margin(seed) > 1e-8);
    }
}

#[test]
fn generators_stay_in_domain() {
    assert!(checks::generators_valid(3));
}
