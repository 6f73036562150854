//! Reference computations for two-normal mixtures with unit variances,
//! built from composite Simpson quadrature only.

use std::f64::consts::PI;

pub struct TwoNormals {
    pub p1: f64,
    pub mu1: f64,
    pub mu2: f64,
}

impl TwoNormals {
    pub fn pdf(&self, x: f64) -> f64 {
        let phi = |z: f64| (-0.5 * z * z).exp() / (2.0 * PI).sqrt();
        self.p1 * phi(x - self.mu1) + (1.0 - self.p1) * phi(x - self.mu2)
    }

    /// Mean of the density restricted to `[a, b]`.
    pub fn trunc_mean(&self, a: f64, b: f64) -> f64 {
        simpson(|x| x * self.pdf(x), a, b) / simpson(|x| self.pdf(x), a, b)
    }

    pub fn g(&self, l: f64, r: f64, a: f64) -> f64 {
        self.trunc_mean(a, r) - self.trunc_mean(l, a)
    }

    /// Interior point of `(l, r)` maximising `g`, by grid search and local
    /// ternary refinement.
    pub fn argmax_g(&self, l: f64, r: f64) -> f64 {
        let grid = 400;
        let h = (r - l) / grid as f64;
        let best = (1..grid)
            .map(|i| l + i as f64 * h)
            .max_by(|a, b| self.g(l, r, *a).total_cmp(&self.g(l, r, *b)))
            .unwrap();
        let (mut lo, mut hi) = ((best - h).max(l + 1e-9), (best + h).min(r - 1e-9));
        for _ in 0..80 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if self.g(l, r, m1) < self.g(l, r, m2) {
                lo = m1;
            } else {
                hi = m2;
            }
        }
        0.5 * (lo + hi)
    }

    /// `(mu_{l,s} - (l+s)/2, mu_{s,r} - (s+r)/2)`.
    pub fn deltas(&self, l: f64, s: f64, r: f64) -> (f64, f64) {
        (self.trunc_mean(l, s) - 0.5 * (l + s), self.trunc_mean(s, r) - 0.5 * (s + r))
    }

    /// True when the density has an interior local minimum on a fine grid.
    pub fn has_interior_minimum(&self) -> bool {
        let (a, b) = (self.mu1.min(self.mu2) - 1.0, self.mu1.max(self.mu2) + 1.0);
        let n = 20_000;
        let ys: Vec<f64> = (0..=n).map(|i| self.pdf(a + (b - a) * i as f64 / n as f64)).collect();
        ys.windows(3).any(|w| w[1] < w[0] && w[1] < w[2])
    }
}

pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let n = 4000;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}
