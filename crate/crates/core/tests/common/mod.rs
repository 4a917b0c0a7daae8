//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use planted_cycle::irwin_hall::IrwinHallOrder;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(points: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(points);
    let nf = points as f64;
    for i in 0..points {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=points {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            deriv = nf * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / deriv;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * deriv * deriv)));
    }
    out
}

/// `∫_a^b f` by a 16-point rule on each unit piece between integer knots;
/// exact for the piecewise polynomials used here.
pub fn integrate_pieces(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let rule = gauss_legendre(16);
    let mut cuts = vec![a];
    let mut k = a.floor() + 1.0;
    while k < b {
        cuts.push(k);
        k += 1.0;
    }
    cuts.push(b);
    cuts.windows(2)
        .map(|w| {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            rule.iter().map(|&(x, wt)| wt * half * f(mid + half * x)).sum::<f64>()
        })
        .sum()
}

fn order(ell: usize) -> IrwinHallOrder {
    IrwinHallOrder::new(ell).unwrap()
}

/// `|∫ f_ℓ − 1|`.
pub fn normalization_error(ell: usize) -> f64 {
    let h = order(ell);
    (integrate_pieces(|x| h.pdf(x), 0.0, ell as f64) - 1.0).abs()
}

fn grid(ell: usize, steps: usize) -> impl Iterator<Item = f64> {
    (0..=steps).map(move |k| ell as f64 * k as f64 / steps as f64)
}

/// `max |f_ℓ(x) − f_ℓ(ℓ − x)|` and the same for `F_ℓ(x) + F_ℓ(ℓ − x) − 1`.
pub fn symmetry_error(ell: usize) -> f64 {
    let h = order(ell);
    let l = ell as f64;
    grid(ell, 997)
        .map(|x| (h.pdf(x) - h.pdf(l - x)).abs().max((h.cdf(x) + h.cdf(l - x) - 1.0).abs()))
        .fold(0.0, f64::max)
}

/// Largest violation of "nondecreasing up to `ℓ/2`, nonincreasing after".
pub fn unimodality_violation(ell: usize) -> f64 {
    let h = order(ell);
    let half = ell as f64 / 2.0;
    let xs: Vec<f64> = grid(ell, 2000).collect();
    xs.windows(2)
        .map(|w| {
            let d = h.pdf(w[1]) - h.pdf(w[0]);
            if w[1] <= half { (-d).max(0.0) } else if w[0] >= half { d.max(0.0) } else { 0.0 }
        })
        .fold(0.0, f64::max)
}

/// `max |f_{ℓ+1}(x) − ∫_{x−1}^{x} f_ℓ|` over a grid of `x ∈ [0, ℓ + 1]`.
pub fn convolution_error(ell: usize) -> f64 {
    let (h, next) = (order(ell), order(ell + 1));
    grid(ell + 1, 389)
        .map(|x| {
            let conv = integrate_pieces(|t| h.pdf(t), (x - 1.0).max(0.0), x.min(ell as f64));
            (next.pdf(x) - conv).abs()
        })
        .fold(0.0, f64::max)
}

/// `max |(F(x + h) − F(x − h)) / 2h − f(x)|` at points away from the knots.
pub fn finite_difference_error(ell: usize) -> f64 {
    let ih = order(ell);
    let h = 1e-5;
    (0..ell)
        .flat_map(|k| [0.13, 0.37, 0.5, 0.71, 0.94].map(|frac| k as f64 + frac))
        .map(|x| ((ih.cdf(x + h) - ih.cdf(x - h)) / (2.0 * h) - ih.pdf(x)).abs())
        .fold(0.0, f64::max)
}
