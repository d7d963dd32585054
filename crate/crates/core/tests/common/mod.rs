// Independent reference implementations for the oracle tests. Nothing here
// calls into the library's numeric code.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::ops::{Add, Div, Mul, Sub};

/// Double-double number: `hi + lo` with `|lo| <= ulp(hi) / 2`, about 106 bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            Dd {
                hi: -self.hi,
                lo: -self.lo,
            }
        } else {
            self
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::new(0.0);
        }
        let x = self.hi.sqrt();
        let s = Dd::new(x);
        let r = self - s * s;
        s + Dd::new(r.hi / (2.0 * x))
    }

    pub fn clamp(self, lo: f64, hi: f64) -> Self {
        if self.to_f64() < lo {
            Dd::new(lo)
        } else if self.to_f64() > hi {
            Dd::new(hi)
        } else {
            self
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        quick_two_sum(s, e + self.lo + o.lo)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + Dd { hi: -o.hi, lo: -o.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + self.hi * o.lo + self.lo * o.hi)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        quick_two_sum(q1, q2) + Dd::new(q3)
    }
}

pub const SIGMA_MAX: f64 = 1.0 / (2.0 * PI);
pub const SIGMA_MIN: f64 = 1.0 / (4.0 * PI);

/// High-precision replay of one dimension of a granule absorbing `xs[1..]`
/// after being created at `xs[0]`. Returns the pre-clamp dispersion after
/// every absorbed sample and the final mean.
pub fn replay_dispersion(xs: &[f64]) -> (Vec<f64>, f64) {
    let mut mu = Dd::new(xs[0]);
    let mut sigma = Dd::new(SIGMA_MAX);
    let mut raw = Vec::new();
    for (k, &x) in xs.iter().enumerate().skip(1) {
        // k samples already absorbed, this one is number k + 1
        let w = Dd::new((k + 1) as f64);
        let x = Dd::new(x);
        let one = Dd::new(1.0);
        let innovation = x - mu;
        mu = ((w - one) * mu + x) / w;
        let s = ((w - one) / w * sigma * sigma + innovation * innovation / w).sqrt();
        raw.push(s.to_f64());
        sigma = s.clamp(SIGMA_MIN, SIGMA_MAX);
    }
    (raw, mu.to_f64())
}

/// Mean computed with a compensated double-double sum.
pub fn exact_mean(xs: &[f64]) -> f64 {
    let s = xs.iter().fold(Dd::new(0.0), |acc, &x| acc + Dd::new(x));
    (s / Dd::new(xs.len() as f64)).to_f64()
}

/// `|X_k|` for `k = 0..=n/2` straight from the DFT definition.
pub fn direct_dft_magnitudes(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, &v) in x.iter().enumerate() {
                // reduce k*t mod n first so the angle stays in [0, 2pi)
                let angle = 2.0 * PI * ((k * t) % n) as f64 / n as f64;
                re += v * angle.cos();
                im -= v * angle.sin();
            }
            (re * re + im * im).sqrt()
        })
        .collect()
}

/// Average ranks by counting, O(n^2).
pub fn brute_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&u| u < v).count() as f64;
            let equal = x.iter().filter(|&&u| u == v).count() as f64;
            less + (equal + 1.0) / 2.0
        })
        .collect()
}

/// Pearson correlation of the brute-force ranks; `None` when either side is
/// constant.
pub fn brute_spearman(u: &[f64], v: &[f64]) -> Option<f64> {
    let (a, b) = (brute_ranks(u), brute_ranks(v));
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let cov: f64 = a.iter().zip(&b).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = a.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = b.iter().map(|y| (y - mb).powi(2)).sum();
    if va == 0.0 || vb == 0.0 {
        None
    } else {
        Some(cov / (va * vb).sqrt())
    }
}
