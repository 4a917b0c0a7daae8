//! Irwin–Hall distribution: the law of a sum of `ℓ` independent `U[0, 1]`
//! variables.
//!
//! Both the density and the CDF are evaluated from the alternating sums
//!
//! ```text
//! f_ℓ(x) = 1/(ℓ−1)! · Σ_{k=0}^{⌊x⌋} (−1)^k C(ℓ,k) (x − k)^{ℓ−1}
//! F_ℓ(x) = 1/ℓ!     · Σ_{k=0}^{⌊x⌋} (−1)^k C(ℓ,k) (x − k)^ℓ
//! ```
//!
//! on the left half of the support only; the right half is obtained by the
//! reflection `x ↦ ℓ − x`, which keeps the number of cancelling terms small.

use crate::error::{ensure, Result};
use crate::numeric::{binomial_u128, factorial, CompensatedSum};

/// Largest supported order. Cancellation in the alternating sum grows with `ℓ`.
pub const MAX_ORDER: usize = 20;

/// A validated order `1 ≤ ℓ ≤ 20`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IrwinHallOrder(usize);

impl IrwinHallOrder {
    pub fn new(ell: usize) -> Result<Self> {
        ensure!((1..=MAX_ORDER).contains(&ell), "Irwin-Hall order must be in 1..={MAX_ORDER}, got {ell}");
        Ok(IrwinHallOrder(ell))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn pdf(self, x: f64) -> f64 {
        let ell = self.0;
        let l = ell as f64;
        if !(0.0..=l).contains(&x) {
            return 0.0;
        }
        let x = if x > l / 2.0 { l - x } else { x };
        alternating_sum(ell, x, ell as i32 - 1) / factorial(ell as u32 - 1)
    }

    pub fn cdf(self, x: f64) -> f64 {
        let ell = self.0;
        let l = ell as f64;
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= 0.0 {
            return 0.0;
        }
        if x >= l {
            return 1.0;
        }
        let (y, reflected) = if x > l / 2.0 { (l - x, true) } else { (x, false) };
        let left = (alternating_sum(ell, y, ell as i32) / factorial(ell as u32)).clamp(0.0, 1.0);
        if reflected {
            1.0 - left
        } else {
            left
        }
    }

    /// `P(lo ≤ S ≤ hi)`.
    pub fn window(self, lo: f64, hi: f64) -> Result<f64> {
        ensure!(lo <= hi, "window bounds must satisfy lo <= hi (lo = {lo}, hi = {hi})");
        Ok((self.cdf(hi) - self.cdf(lo)).clamp(0.0, 1.0))
    }
}

/// `max(0, Σ_{k ≤ ⌊x⌋} (−1)^k C(ℓ,k) (x−k)^power)` for `0 ≤ x ≤ ℓ/2`.
fn alternating_sum(ell: usize, x: f64, power: i32) -> f64 {
    let top = (x.floor() as usize).min(ell);
    let mut acc = CompensatedSum::new();
    for k in 0..=top {
        let c = binomial_u128(ell as u64, k as u64).expect("small binomial") as f64;
        let term = c * (x - k as f64).powi(power);
        acc.add(if k % 2 == 0 { term } else { -term });
    }
    acc.value().max(0.0)
}

/// Density of the sum of `ell` uniforms at `x`.
pub fn ih_pdf(ell: usize, x: f64) -> Result<f64> {
    Ok(IrwinHallOrder::new(ell)?.pdf(x))
}

/// Distribution function of the sum of `ell` uniforms at `x`.
pub fn ih_cdf(ell: usize, x: f64) -> Result<f64> {
    Ok(IrwinHallOrder::new(ell)?.cdf(x))
}

/// Probability mass the sum of `ell` uniforms puts on `[lo, hi]`.
pub fn ih_window(ell: usize, lo: f64, hi: f64) -> Result<f64> {
    IrwinHallOrder::new(ell)?.window(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact rationals over i128, enough for the small orders used here.
    #[derive(Clone, Copy, Debug, PartialEq)]
    struct Q(i128, i128);

    fn gcd(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }

    impl Q {
        fn new(n: i128, d: i128) -> Q {
            let g = gcd(n, d).max(1) * d.signum();
            Q(n / g, d / g)
        }
        fn add(self, o: Q) -> Q {
            Q::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
        }
        fn mul(self, o: Q) -> Q {
            Q::new(self.0 * o.0, self.1 * o.1)
        }
        fn to_f64(self) -> f64 {
            self.0 as f64 / self.1 as f64
        }
    }

    /// Exact density at a rational point.
    fn rational_pdf(ell: i128, x: Q) -> Q {
        let mut total = Q::new(0, 1);
        let mut binom = 1i128;
        let mut k = 0i128;
        while k <= ell && Q::new(k, 1).to_f64() <= x.to_f64() {
            let base = x.add(Q::new(-k, 1));
            let mut pw = Q::new(1, 1);
            for _ in 0..ell - 1 {
                pw = pw.mul(base);
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            total = total.add(pw.mul(Q::new(sign * binom, 1)));
            binom = binom * (ell - k) / (k + 1);
            k += 1;
        }
        let fact: i128 = (1..ell).product();
        total.mul(Q::new(1, fact))
    }

    #[test]
    fn spec_examples() {
        assert_eq!(ih_pdf(1, 0.5).unwrap(), 1.0);
        assert!((ih_pdf(2, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let oracle = Q::new(1, 2).mul(Q::new(-2, 1).mul(Q::new(9, 4)).add(Q::new(9, 1)).add(Q::new(-3, 1)));
        assert_eq!(oracle, Q::new(3, 4));
        assert!((ih_pdf(3, 1.5).unwrap() - oracle.to_f64()).abs() < 1e-15);
        assert_eq!(rational_pdf(3, Q::new(3, 2)), oracle);

        assert!((ih_cdf(3, 1.5).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(ih_cdf(2, 0.0).unwrap(), 0.0);
        assert!((ih_cdf(1, 0.25).unwrap() - 0.25).abs() < 1e-15);

        assert_eq!(ih_window(1, 0.0, 1.0).unwrap(), 1.0);
        // Triangular CDF: x²/2 on [0,1], 1 − (2−x)²/2 on [1,2].
        let tri = |x: f64| if x <= 1.0 { x * x / 2.0 } else { 1.0 - (2.0 - x) * (2.0 - x) / 2.0 };
        assert!((ih_window(2, 0.5, 1.5).unwrap() - (tri(1.5) - tri(0.5))).abs() < 1e-15);
        assert!((ih_window(2, 0.5, 1.5).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(ih_window(3, 3.0, 5.0).unwrap(), 0.0);
    }

    #[test]
    fn matches_exact_rationals() {
        for ell in 1..=9i128 {
            for num in 0..=(8 * ell) {
                if ell == 1 && num % 8 == 0 {
                    continue; // the uniform density jumps at 0 and 1
                }
                let x = Q::new(num, 8);
                let exact = rational_pdf(ell, x).to_f64();
                let got = ih_pdf(ell as usize, x.to_f64()).unwrap();
                assert!((got - exact).abs() < 1e-13, "ell={ell} x={x:?}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn guards() {
        assert!(ih_pdf(0, 0.5).is_err());
        assert!(ih_pdf(21, 0.5).is_err());
        assert!(ih_cdf(0, 0.5).is_err());
        assert!(ih_window(3, 2.0, 1.0).is_err());
        assert_eq!(ih_pdf(4, -0.1).unwrap(), 0.0);
        assert_eq!(ih_pdf(4, 4.1).unwrap(), 0.0);
        assert_eq!(ih_cdf(4, 9.0).unwrap(), 1.0);
    }

    #[test]
    fn large_orders_stay_in_range() {
        for ell in 13..=MAX_ORDER {
            let order = IrwinHallOrder::new(ell).unwrap();
            let mut prev = 0.0;
            for k in 0..=1000 {
                let x = ell as f64 * k as f64 / 1000.0;
                let (f, c) = (order.pdf(x), order.cdf(x));
                assert!(f >= 0.0 && (0.0..=1.0).contains(&c));
                assert!(c >= prev - 1e-12);
                prev = c;
            }
            assert!((order.window(0.0, ell as f64).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
