use planted_cycle::harness::{evaluate_statistic, Statistic};
use planted_cycle::recovery::t_cond_mean;
use planted_cycle::ModelParams;
use planted_cycle_web::{conditional_mean_curve_native, sample_cycle_native, triangle_samples_native, MAX_DEMO_N};

#[test]
fn sample_marks_close_edges() {
    let s = sample_cycle_native(80, 0.9, 0.1, 0.1, 3).unwrap();
    let pos = s.positions();
    let edges = s.edges();
    let close = s.close();
    assert_eq!(pos.len(), 80);
    assert_eq!(edges.len(), 2 * close.len());
    assert_eq!(s.edge_count(), close.len());
    for (k, &c) in close.iter().enumerate() {
        let (i, j) = (edges[2 * k] as usize, edges[2 * k + 1] as usize);
        let d = (pos[i] - pos[j]).abs();
        assert_eq!(c == 1, d.min(1.0 - d) <= 0.05);
    }
    // Same seed, same picture.
    assert_eq!(sample_cycle_native(80, 0.9, 0.1, 0.1, 3).unwrap().edges(), edges);
}

#[test]
fn curve_matches_library() {
    let data = conditional_mean_curve_native(40, 0.9, 0.3, 0.1, 2, 11).unwrap();
    assert_eq!(data.len(), 23);
    let params = ModelParams::new(40, 0.9, 0.3, 0.1).unwrap();
    for k in 0..11 {
        let (u, t) = (data[2 * k], data[2 * k + 1]);
        assert_eq!(t, t_cond_mean(&params, 2, u).unwrap());
    }
    assert_eq!(data[1], data.iter().skip(1).step_by(2).take(11).cloned().fold(f64::MIN, f64::max));
    let kappa = data[22];
    assert!(kappa > 0.0 && kappa < data[1]);
}

#[test]
fn histogram_arms_are_ordered() {
    let xs = triangle_samples_native(40, 0.8, 0.4, 0.2, 30, 9).unwrap();
    assert_eq!(xs.len(), 60);
    let params = ModelParams::new(40, 0.8, 0.4, 0.2).unwrap();
    let mut rng = planted_cycle::derive_stream(9, &[
        planted_cycle::Label::Tag("web-hist"),
        planted_cycle::Label::Index(0),
        planted_cycle::Label::Tag("Q"),
    ]);
    let g = planted_cycle::sample_null(&params, &mut rng);
    assert_eq!(xs[30], evaluate_statistic(&g, &params, Statistic::Triangle).unwrap());
}

#[test]
fn demo_limits() {
    assert!(sample_cycle_native(MAX_DEMO_N + 1, 0.8, 0.4, 0.1, 0).is_err());
    assert!(triangle_samples_native(40, 0.8, 0.4, 0.1, 0, 0).is_err());
    assert!(conditional_mean_curve_native(40, 0.8, 0.4, 0.4, 3, 10).is_err());
}
