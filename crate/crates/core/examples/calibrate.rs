//! Pilot calibration for the Monte Carlo acceptance tolerances.
//!
//! Re-runs the detection and recovery pilot cells under independent seeds
//! and reports the spread of each metric. A tolerance is set at twice the
//! observed noise around the pilot mean.
//!
//! ```text
//! cargo run --release -p planted-cycle --example calibrate -- [reps] [trials]
//! ```

use planted_cycle::harness::{detection_experiment, recovery_experiment, ExperimentSection, Statistic};
use planted_cycle::numeric::RunningStats;
use planted_cycle::recovery::RecoveryConfig;
use planted_cycle::ModelParams;

fn report(name: &str, stats: &RunningStats) {
    let sd = stats.std_dev();
    println!("{name:<28} mean {:>9.4}  sd {:>8.4}  band ±{:.4}", stats.mean(), sd, 2.0 * sd);
}

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let reps = args.first().copied().unwrap_or(5) as u64;
    let trials = args.get(1).copied().unwrap_or(200);

    let easy = ModelParams::new(400, 0.8, 0.4, 0.12).unwrap();
    let hard = ModelParams::new(400, 0.8, 0.4, 400f64.powf(-0.8)).unwrap();
    let recover = ModelParams::new(500, 0.9, 0.3, 0.15).unwrap();
    let cfg = RecoveryConfig::new(&recover, 3).unwrap();

    let mut metrics: Vec<(&str, RunningStats)> = [
        "easy separation ratio",
        "easy held-out error",
        "hard separation ratio",
        "recovery error / tau",
    ]
    .into_iter()
    .map(|name| (name, RunningStats::new()))
    .collect();

    for rep in 0..reps {
        let exp = ExperimentSection { trials, seed: 1000 + rep, statistic: Statistic::Triangle, pilot_fraction: 0.5, null_control: false };
        let e = detection_experiment(&easy, &exp, "pilot-easy").unwrap();
        let h = detection_experiment(&hard, &exp, "pilot-hard").unwrap();
        let r = recovery_experiment(&recover, &cfg, trials, 1000 + rep, "pilot-recover").unwrap();
        for (k, v) in [e.separation_ratio, e.holdout_error, h.separation_ratio, r.ratio_to_trivial].into_iter().enumerate() {
            metrics[k].1.push(v);
        }
        eprintln!("replicate {} of {reps} done", rep + 1);
    }
    println!("{reps} replicates of {trials} trials");
    for (name, stats) in &metrics {
        report(name, stats);
    }
}
