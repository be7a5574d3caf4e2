//! Double-double arithmetic (about 32 significant digits), real and complex.

use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
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
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact for every i64.
    pub fn from_i64(x: i64) -> Dd {
        let hi = x as f64;
        let lo = (x as i128 - hi as i128) as f64;
        quick_two_sum(hi, lo)
    }

    /// Exact while |x| < 2^106.
    pub fn from_i128(x: i128) -> Dd {
        let hi = x as f64;
        let lo = (x - hi as i128) as f64;
        quick_two_sum(hi, lo)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn div_f64(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let p = q1 * b;
        let e = q1.mul_add(b, -p);
        let r = (self.hi - p) - e + self.lo;
        quick_two_sum(q1, r / b)
    }

    fn mul_pow2(self, k: i32) -> Dd {
        let f = 2f64.powi(k);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn exp(self) -> Dd {
        let k = (self.hi / LN2.hi).round();
        // r = x − k·ln2, then scaled into |r| < 0.011 and squared back
        let r = (self - LN2 * Dd::from_f64(k)).mul_pow2(-5);
        let mut term = Dd::from_f64(1.0);
        let mut sum = term;
        for n in 1..=16 {
            term = (term * r).div_f64(n as f64);
            sum = sum + term;
        }
        for _ in 0..5 {
            sum = sum * sum;
        }
        sum.mul_pow2(k as i32)
    }

    /// Natural log of a positive value: one Newton step from the f64 log.
    pub fn ln(self) -> Dd {
        let y = Dd::from_f64(self.hi.ln());
        y + self * (-y).exp() - Dd::from_f64(1.0)
    }
}

const LN2: Dd = Dd { hi: std::f64::consts::LN_2, lo: 2.3190468138462996e-17 };

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let r = quick_two_sum(s, e + t);
        quick_two_sum(r.hi, r.lo + f)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CDd {
    pub re: Dd,
    pub im: Dd,
}

impl CDd {
    pub fn real(x: Dd) -> CDd {
        CDd { re: x, im: Dd::default() }
    }

    pub fn scale(self, k: Dd) -> CDd {
        CDd { re: self.re * k, im: self.im * k }
    }

    pub fn to_f64(self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }
}

impl Add for CDd {
    type Output = CDd;
    fn add(self, o: CDd) -> CDd {
        CDd { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for CDd {
    type Output = CDd;
    fn sub(self, o: CDd) -> CDd {
        CDd { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for CDd {
    type Output = CDd;
    fn mul(self, o: CDd) -> CDd {
        CDd { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

/// Refine a root of a·t³ + b·t² + c·t + d by Newton steps in double-double.
pub fn refine_root(coeffs: [i64; 4], t0: (f64, f64)) -> CDd {
    let [a, b, c, d] = coeffs.map(Dd::from_i64);
    let mut t = CDd { re: Dd::from_f64(t0.0), im: Dd::from_f64(t0.1) };
    for _ in 0..4 {
        let val = ((t.scale(a) + CDd::real(b)) * t + CDd::real(c)) * t + CDd::real(d);
        let (vr, vi) = val.to_f64();
        let (tr, ti) = t.to_f64();
        // f'(t) in plain precision is enough for the correction
        let (a, b, c) = (coeffs[0] as f64, coeffs[1] as f64, coeffs[2] as f64);
        let sq = (tr * tr - ti * ti, 2.0 * tr * ti);
        let dr = 3.0 * a * sq.0 + 2.0 * b * tr + c;
        let di = 3.0 * a * sq.1 + 2.0 * b * ti;
        let den = dr * dr + di * di;
        if den == 0.0 {
            break;
        }
        let qr = (vr * dr + vi * di) / den;
        let qi = (vi * dr - vr * di) / den;
        t = t - CDd { re: Dd::from_f64(qr), im: Dd::from_f64(qi) };
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_and_ln() {
        let ln10 = Dd::from_f64(10.0).ln();
        assert_eq!(ln10.hi, 2.302585092994046);
        assert!((ln10.lo + 2.1707562233822494e-16).abs() < 1e-30, "{ln10:?}");
        for x in [1e-9, 0.37, 1.0, 3.5, 7.25e12] {
            let back = Dd::from_f64(x).ln().exp() - Dd::from_f64(x);
            assert!(back.to_f64().abs() < 1e-29 * x, "{x} {back:?}");
        }
    }

    #[test]
    fn cube_root_of_two_to_double_double_precision() {
        let t = refine_root([1, 0, 0, -2], (1.26, 0.0));
        let cube = t * t * t;
        let err = (cube.re - CDd::real(Dd::from_i64(2)).re).to_f64();
        assert!(err.abs() < 1e-29, "{err}");
        assert_eq!(Dd::from_i64(i64::MAX - 1).hi as i128 + Dd::from_i64(i64::MAX - 1).lo as i128, (i64::MAX - 1) as i128);
    }
}
