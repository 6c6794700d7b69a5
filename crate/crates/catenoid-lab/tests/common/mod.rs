//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerics.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Literature value of `Gamma(1/4)`, 3.62560990822190831193...
pub const GAMMA_QUARTER_LITERATURE: f64 = 3.625_609_908_221_908;

/// `sigma = coth sigma` by Newton's method from `sigma = 1.2`.
pub fn sigma_star_newton() -> f64 {
    let mut x: f64 = 1.2;
    for _ in 0..60 {
        let f = x - 1.0 / x.tanh();
        let df = 1.0 + 1.0 / x.sinh().powi(2);
        let step = f / df;
        x -= step;
        if step.abs() < 1e-17 {
            break;
        }
    }
    x
}

/// `Gamma(1/4)` from the lemniscate constant: `Gamma(1/4)^2 = 2 sqrt(2 pi) * pi / AGM(1, sqrt2)`.
pub fn gamma_quarter_agm() -> f64 {
    let (mut x, mut y) = (1.0_f64, 2.0_f64.sqrt());
    for _ in 0..40 {
        let (m, g) = (0.5 * (x + y), (x * y).sqrt());
        x = m;
        y = g;
    }
    let lemniscate = PI / x;
    (2.0 * lemniscate * (2.0 * PI).sqrt()).sqrt()
}

/// Composite Simpson on `panels` (even) panels.
pub fn dense_simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    let h = (hi - lo) / panels as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..panels {
        let v = f(lo + i as f64 * h);
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (f(lo) + f(hi) + 4.0 * odd + 2.0 * even)
}

/// `B^2(s)` evaluated plainly from `a cosh 2s - 1/2`, no library call.
pub fn b2_plain(a: f64, s: f64) -> f64 {
    a * (2.0 * s).cosh() - 0.5
}

/// Twist-angle integrand `K / (A^2 B)` written out independently.
pub fn phi_integrand_plain(a: f64, t: f64) -> f64 {
    let k = ((a - 0.5) * (a + 0.5)).sqrt();
    let b2 = b2_plain(a, t);
    k / ((b2 + 1.0) * b2.sqrt())
}

/// Double-double number `hi + lo`.
#[derive(Debug, Clone, Copy)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub fn new(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let e = e + self.lo + o.lo;
        let (hi, lo) = two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = (self.hi - p - e + self.lo) / d;
        let (hi, lo) = two_sum(q1, r);
        Dd { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// `exp(x)` by Taylor series in double-double; intended for `|x| <= 2`.
    pub fn exp(x: f64) -> Dd {
        let xd = Dd::new(x);
        let mut term = Dd::new(1.0);
        let mut sum = Dd::new(1.0);
        for n in 1..60 {
            term = term.mul(xd).div_f64(n as f64);
            sum = sum.add(term);
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        sum
    }

    /// `cosh(x)` via `(e^x + e^-x) / 2`.
    pub fn cosh(x: f64) -> Dd {
        Dd::exp(x).add(Dd::exp(-x)).div_f64(2.0)
    }
}

/// `B^2 = a cosh 2s - 1/2` in double-double, rounded once.
pub fn b2_double_double(a: f64, s: f64) -> f64 {
    Dd::new(a).mul(Dd::cosh(2.0 * s)).add(Dd::new(-0.5)).to_f64()
}
