use alasso::dgp::preset;
use alasso::mc::{read_summary_csv, render_table, run_experiment, write_run, McExperiment, RunSnapshot, SummaryRecord, TableFormat};

#[test]
fn summary_does_not_depend_on_worker_count() {
    let exp = McExperiment::new(preset("setting3", 200, 17).unwrap(), 40);
    let one = run_experiment(&exp, 1).unwrap();
    for workers in [4, 16] {
        assert_eq!(run_experiment(&exp, workers).unwrap(), one);
    }
}

#[test]
fn frequencies_and_standard_errors_are_consistent() {
    let exp = McExperiment::new(preset("setting4", 300, 5).unwrap(), 60);
    let s = run_experiment(&exp, 2).unwrap();
    assert_eq!(s.completed + s.failures, 60);
    for c in &s.coefficients {
        for cell in [c.coverage_without_bias, c.coverage_with_bias, Some(c.rejection)].into_iter().flatten() {
            let f = cell.frequency();
            assert!((0.0..=1.0).contains(&f));
            assert_eq!(cell.std_error(), (f * (1.0 - f) / cell.total as f64).sqrt());
        }
    }
    assert_eq!(s.coefficients.iter().filter(|c| c.coverage_with_bias.is_some()).count(), 7);
}

#[test]
fn panels_follow_the_table_layout() {
    let exp = McExperiment::new(preset("setting1", 200, 1).unwrap(), 10);
    let s = run_experiment(&exp, 2).unwrap();
    let a = render_table(&s, TableFormat::PanelA);
    let header: Vec<&str> = a.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(header, ["rho1", "rho2", "gamma1", "gamma2", "beta1", "beta2"]);
    assert!(a.lines().nth(2).unwrap().starts_with("without bias correction"));
    assert!(a.lines().nth(3).unwrap().starts_with("with bias correction"));

    let exp = McExperiment::new(preset("setting4", 200, 1).unwrap(), 10);
    let s = run_experiment(&exp, 2).unwrap();
    let b = render_table(&s, TableFormat::PanelB);
    let name_rows: Vec<&str> = b.lines().filter(|l| l.contains("gamma1") || l.contains("gamma8") || l.contains("gamma15")).collect();
    assert_eq!(name_rows.len(), 3);
    assert!(b.lines().all(|l| l.matches(" (0.").count() <= 7));
}

#[test]
fn run_directory_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let exp = McExperiment::new(preset("setting5", 200, 9).unwrap(), 8);
    let s = run_experiment(&exp, 3).unwrap();
    write_run(&s, &exp, dir.path()).unwrap();
    for f in ["summary.csv", "panelA.txt", "panelB.txt", "config.snapshot"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let csv = std::fs::read(dir.path().join("summary.csv")).unwrap();
    let back = read_summary_csv(csv.as_slice()).unwrap();
    let direct: Vec<SummaryRecord> = s.coefficients.iter().map(SummaryRecord::from).collect();
    assert_eq!(back, direct);
    let snap = RunSnapshot::from_toml(&std::fs::read_to_string(dir.path().join("config.snapshot")).unwrap()).unwrap();
    assert_eq!(snap.experiment, exp);
    assert!(snap.rng.contains("ChaCha8"));
    assert_eq!(snap.experiment.dgp.corr_fixture.as_deref(), Some(alasso::dgp::SETTING5_CORR_FIXTURE));
    assert!(std::fs::read_to_string(dir.path().join("panelB.txt")).unwrap().contains("fixture"));
    // rerunning from the snapshot reproduces the summary
    assert_eq!(run_experiment(&snap.experiment, 1).unwrap(), s);
}

#[test]
fn inactive_rejections_stay_conservative() {
    let exp = McExperiment::new(preset("setting1", 800, 21).unwrap(), 1000);
    let s = run_experiment(&exp, 4).unwrap();
    let alpha = exp.alpha;
    let bound = alpha + 3.0 * (alpha * (1.0 - alpha) / s.completed as f64).sqrt();
    for c in s.coefficients.iter().filter(|c| c.true_value == 0.0) {
        assert!(c.rejection.frequency() <= bound, "{}: {}", c.name, c.rejection.frequency());
    }
}

#[test]
fn power_grows_with_sample_size() {
    let small = run_experiment(&McExperiment::new(preset("setting1", 800, 21).unwrap(), 1000), 4).unwrap();
    let large = run_experiment(&McExperiment::new(preset("setting1", 1600, 21).unwrap(), 1000), 4).unwrap();
    for (a, b) in small.coefficients.iter().zip(&large.coefficients) {
        if a.true_value != 0.0 {
            let slack = 2.0 * a.rejection.std_error().max(b.rejection.std_error());
            assert!(b.rejection.frequency() + slack >= a.rejection.frequency(), "{}", a.name);
        }
    }
}
