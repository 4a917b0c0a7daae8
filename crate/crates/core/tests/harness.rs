use planted_cycle::harness::{phase_sweep, read_results, write_results, ExperimentConfig, ExperimentResult, SweepSection};

fn sweep_config(b: Vec<f64>) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.experiment.trials = 200;
    cfg.experiment.seed = 17;
    cfg.recovery.ell = 2;
    cfg.sweep = SweepSection { a: vec![0.1], b, n: vec![400], q_ratio: 0.1, ..SweepSection::default() };
    cfg
}

fn without_time(mut row: ExperimentResult) -> ExperimentResult {
    row.wall_time_s = 0.0;
    row
}

fn beats_trivial(row: &ExperimentResult) -> bool {
    row.ratio_to_trivial.unwrap() + 4.0 * row.ratio_stderr.unwrap() < 1.0
}

#[test]
fn sweep_regions_and_isolated_reruns() {
    let rows = phase_sweep(&sweep_config(vec![0.2, 0.6, 0.9])).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.status == "ok"));
    let sep = |r: &ExperimentResult| r.separation_ratio.unwrap();

    let (easy, gap, hard) = (&rows[0], &rows[1], &rows[2]);
    assert!(sep(easy) >= 2.0 && beats_trivial(easy), "{easy:?}");
    assert!(sep(gap) >= 2.0 && !beats_trivial(gap), "{gap:?}");
    assert!(sep(hard) <= 1.0 && !beats_trivial(hard), "{hard:?}");

    let alone = phase_sweep(&sweep_config(vec![0.6])).unwrap();
    assert_eq!(without_time(alone[0].clone()), without_time(gap.clone()));

    let mut buf = Vec::new();
    write_results(&mut buf, &rows).unwrap();
    let back = read_results(buf.as_slice()).unwrap();
    assert_eq!(back, rows);
}

#[test]
fn config_round_trips_through_toml() {
    let cfg = sweep_config(vec![0.3, 0.7]);
    let text = cfg.to_toml_string();
    assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), cfg);
}
