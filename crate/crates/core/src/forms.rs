//! Integral binary cubic forms: discriminant, GL₂(ℤ) action, reduction,
//! irreducibility and local maximality.
//!
//! Reduction follows a covariant quadratic form: the Hessian
//! (P,Q,R) = (b²−3ac, bc−9ad, c²−3bd) when disc > 0, and the real quadratic
//! factor of f when disc < 0. A form is reduced when its covariant is
//! Gauss-reduced (|B| ≤ A ≤ C). The canonical representative of a class is
//! the lexicographically largest form among all reduced forms ±f∘g.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::ring::CubicRing;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryCubicForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl From<[i64; 4]> for BinaryCubicForm {
    fn from(v: [i64; 4]) -> Self {
        BinaryCubicForm { a: v[0], b: v[1], c: v[2], d: v[3] }
    }
}

impl fmt::Display for BinaryCubicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

/// A 2×2 integer matrix acting by f ↦ f((x,y)·g), i.e. f(px+qy, rx+sy)
/// for g = [[p,q],[r,s]].
pub type Mat2 = [[i64; 2]; 2];

const RELAXED_EPS: f64 = 1e-9;

impl BinaryCubicForm {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        BinaryCubicForm { a, b, c, d }
    }

    pub fn coeffs(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// 18abcd + b²c² − 4ac³ − 4b³d − 27a²d².
    pub fn disc(&self) -> i128 {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        18 * a * b * c * d + b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d
    }

    pub fn eval(&self, x: i128, y: i128) -> i128 {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        a * x * x * x + b * x * x * y + c * x * y * y + d * y * y * y
    }

    pub fn neg(&self) -> Self {
        BinaryCubicForm::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn content(&self) -> i64 {
        use num_integer::Integer;
        self.a.gcd(&self.b).gcd(&self.c).gcd(&self.d)
    }

    pub fn scale(&self, k: i64) -> Self {
        BinaryCubicForm::new(k * self.a, k * self.b, k * self.c, k * self.d)
    }

    /// f(px+qy, rx+sy).
    pub fn apply(&self, g: &Mat2) -> Self {
        let [[p, q], [r, s]] = *g;
        let (p, q, r, s) = (p as i128, q as i128, r as i128, s as i128);
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        let na = a * p * p * p + b * p * p * r + c * p * r * r + d * r * r * r;
        let nb = a * 3 * p * p * q + b * (p * p * s + 2 * p * q * r) + c * (q * r * r + 2 * p * r * s) + d * 3 * r * r * s;
        let nc = a * 3 * p * q * q + b * (2 * p * q * s + q * q * r) + c * (p * s * s + 2 * q * r * s) + d * 3 * r * s * s;
        let nd = a * q * q * q + b * q * q * s + c * q * s * s + d * s * s * s;
        BinaryCubicForm::new(to64(na), to64(nb), to64(nc), to64(nd))
    }

    /// f(x + ky, y)
    pub fn translate(&self, k: i64) -> Self {
        self.apply(&[[1, k], [0, 1]])
    }

    /// f(y, x)
    pub fn swap(&self) -> Self {
        BinaryCubicForm::new(self.d, self.c, self.b, self.a)
    }

    /// Hessian covariant (P, Q, R).
    pub fn hessian(&self) -> (i128, i128, i128) {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        (b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)
    }

    /// Real roots of f(x,1) (ascending) for a ≠ 0.
    pub fn real_roots(&self) -> Vec<f64> {
        real_roots_cubic(self.a as f64, self.b as f64, self.c as f64, self.d as f64)
    }

    /// The real root of f(x,1) when disc < 0: Cardano, then Newton polishing.
    pub fn single_real_root(&self) -> f64 {
        let (a, b, c, d) = (self.a as f64, self.b as f64, self.c as f64, self.d as f64);
        let (b1, c1, d1) = (b / a, c / a, d / a);
        let p = c1 - b1 * b1 / 3.0;
        let q = 2.0 * b1 * b1 * b1 / 27.0 - b1 * c1 / 3.0 + d1;
        let disc = (q * q / 4.0 + p * p * p / 27.0).max(0.0);
        let s = disc.sqrt();
        // avoid cancellation: take the larger-magnitude cube root term first
        let u = if q > 0.0 { (-q / 2.0 - s).cbrt() } else { (-q / 2.0 + s).cbrt() };
        let t = if u != 0.0 { u - p / (3.0 * u) } else { 0.0 };
        let mut x = t - b1 / 3.0;
        for _ in 0..3 {
            let fx = ((x + b1) * x + c1) * x + d1;
            let dfx = (3.0 * x + 2.0 * b1) * x + c1;
            if dfx == 0.0 {
                break;
            }
            let nx = x - fx / dfx;
            if nx == x || !nx.is_finite() {
                break;
            }
            x = nx;
        }
        x
    }

    fn covariant_f64(&self) -> (f64, f64, f64) {
        if self.disc() > 0 {
            let (p, q, r) = self.hessian();
            (p as f64, q as f64, r as f64)
        } else {
            let alpha = self.single_real_root();
            let (a, b, c) = (self.a as f64, self.b as f64, self.c as f64);
            let (qa, qb, qc) = (a, a * alpha + b, a * alpha * alpha + b * alpha + c);
            if qa < 0.0 {
                (-qa, -qb, -qc)
            } else {
                (qa, qb, qc)
            }
        }
    }

    /// Whether the covariant is Gauss-reduced. Exact for disc > 0; for
    /// disc < 0 the comparison carries a relative slack of 1e-9.
    pub fn is_reduced(&self) -> bool {
        if self.a == 0 {
            return false;
        }
        let disc = self.disc();
        if disc > 0 {
            let (p, q, r) = self.hessian();
            q.abs() <= p && p <= r
        } else if disc < 0 {
            let (a, b, c) = self.covariant_f64();
            b.abs() <= a * (1.0 + RELAXED_EPS) && a <= c * (1.0 + RELAXED_EPS)
        } else {
            false
        }
    }

    /// Move to a form with Gauss-reduced covariant.
    fn to_reduced(&self) -> Self {
        let mut f = *self;
        if f.a == 0 {
            // irreducible forms have f(1,0)f(0,1) ≠ 0; bring a nonzero value to the front
            f = f.swap();
        }
        let exact = f.disc() > 0;
        for _ in 0..10_000 {
            if exact {
                let (p, q, r) = f.hessian();
                if q.abs() > p {
                    // choose k with |q + 2kp| ≤ p
                    let k = -((q + p).div_euclid(2 * p));
                    f = f.translate(to64(k));
                    continue;
                }
                if p > r {
                    f = f.swap();
                    continue;
                }
                return f;
            } else {
                let (a, b, c) = f.covariant_f64();
                if b.abs() > a * (1.0 + 1e-12) {
                    let k = -(b / (2.0 * a)).round();
                    if k == 0.0 {
                        return f;
                    }
                    f = f.translate(k as i64);
                    continue;
                }
                if a > c * (1.0 + 1e-12) {
                    f = f.swap();
                    continue;
                }
                return f;
            }
        }
        f
    }

    /// Canonical representative of the GL₂(ℤ)-class (forms f and −f identified).
    pub fn reduce(&self) -> Result<Self> {
        if !self.is_irreducible() {
            return Err(Error::Reducible(self.coeffs()));
        }
        Ok(self.canonical_unchecked())
    }

    /// Canonical representative without the irreducibility check.
    /// Requires a ≠ 0 or d ≠ 0 and nonzero discriminant.
    pub fn canonical_unchecked(&self) -> Self {
        let f0 = self.to_reduced();
        let mut best: Option<BinaryCubicForm> = None;
        for g in small_gl2() {
            let h = f0.apply(g);
            if h.a != 0 && h.is_reduced() {
                for cand in [h, h.neg()] {
                    if best.map_or(true, |b| cand > b) {
                        best = Some(cand);
                    }
                }
            }
        }
        best.unwrap_or(f0)
    }

    /// True iff f is its own canonical representative.
    pub fn is_canonical(&self) -> bool {
        if self.a <= 0 || !self.is_reduced() {
            return false;
        }
        if self.is_strictly_reduced() {
            // the only reduced forms in the class are ±f(x,±y)
            return self.b > 0 || (self.b == 0 && self.d > 0);
        }
        self.canonical_unchecked() == *self
    }

    /// Reduced with a margin large enough that no other covariant in the
    /// orbit is reduced, apart from (x,y) ↦ (±x,±y).
    fn is_strictly_reduced(&self) -> bool {
        let disc = self.disc();
        if disc > 0 {
            let (p, q, r) = self.hessian();
            q.abs() < p && p < r
        } else {
            let (a, b, c) = self.covariant_f64();
            let m = 1e-6;
            b.abs() < a * (1.0 - m) && a < c * (1.0 - m)
        }
    }

    /// No linear factor over ℚ (and not identically zero).
    pub fn is_irreducible(&self) -> bool {
        if self.coeffs() == [0; 4] || self.a == 0 || self.d == 0 {
            return false;
        }
        // rational root s/t of f(x,1) with t | a, s | d
        let ds = divisors(self.d.unsigned_abs());
        let ts = divisors(self.a.unsigned_abs());
        for &t in &ts {
            for &s in &ds {
                let (s, t) = (s as i128, t as i128);
                if self.eval(s, t) == 0 || self.eval(-s, t) == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// p-maximality of the associated ring (pohst–zassenhaus test).
    pub fn is_maximal_at(&self, p: i64) -> bool {
        CubicRing::new(*self).is_maximal_at(p)
    }

    /// Davenport–Heilbronn criterion: R_f is non-maximal at p iff f ≡ 0 (mod p)
    /// or f is equivalent to a form with p² | a and p | b.
    pub fn is_maximal_at_dh(&self, p: i64) -> bool {
        let m = |x: i64| x.rem_euclid(p);
        if self.coeffs().iter().all(|&x| m(x) == 0) {
            return false;
        }
        for (root, mult) in self.roots_mod(p) {
            if mult < 2 {
                continue;
            }
            let g: Mat2 = match root {
                None => [[1, 0], [0, 1]],
                Some(x0) => [[x0, -1], [1, 0]],
            };
            let h = self.apply(&g);
            debug_assert!(m(h.a) == 0 && m(h.b) == 0);
            return h.a.rem_euclid(p * p) != 0;
        }
        true
    }

    /// Roots of f on ℙ¹(𝔽_p) with multiplicities; `None` is the point at infinity [1:0].
    pub fn roots_mod(&self, p: i64) -> Vec<(Option<i64>, u32)> {
        let m = |x: i128| x.rem_euclid(p as i128);
        let mut out = Vec::new();
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        // finite roots of g(x) = f(x,1) = a x³ + b x² + c x + d
        let poly = [d, c, b, a];
        let mut deg_known = 0;
        for x in 0..p as i128 {
            let mut mult = 0;
            let mut q: Vec<i128> = poly.iter().map(|&v| m(v)).collect();
            loop {
                // synthetic division by (X - x)
                let n = q.len();
                if n == 0 || q.iter().all(|&v| v == 0) {
                    break;
                }
                let mut val = 0i128;
                for &coef in q.iter().rev() {
                    val = m(val * x + coef);
                }
                if val != 0 {
                    break;
                }
                mult += 1;
                let mut quot = vec![0i128; n - 1];
                let mut carry = 0i128;
                for i in (1..n).rev() {
                    carry = m(carry * x + q[i]);
                    quot[i - 1] = carry;
                }
                q = quot;
            }
            if mult > 0 {
                out.push((Some(x as i64), mult));
                deg_known += mult;
            }
        }
        // multiplicity at infinity = 3 − deg(f(x,1) mod p)
        let deg = if m(a) != 0 { 3 } else if m(b) != 0 { 2 } else if m(c) != 0 { 1 } else { 0 };
        if deg < 3 {
            out.push((None, 3 - deg));
        }
        let _ = deg_known;
        out
    }

    /// Factorization type of f mod p over ℙ¹(𝔽_p): pairs (multiplicity, degree).
    pub fn factor_type_mod(&self, p: i64) -> Vec<(u32, u32)> {
        let roots = self.roots_mod(p);
        let mut out: Vec<(u32, u32)> = roots.iter().map(|&(_, m)| (m, 1)).collect();
        let used: u32 = roots.iter().map(|&(_, m)| m).sum();
        if used < 3 {
            out.push((1, 3 - used));
        }
        out.sort();
        out
    }

    /// Number of distinct real roots of f on ℙ¹(ℝ), by a Sturm sequence in exact arithmetic.
    pub fn real_root_count_sturm(&self) -> usize {
        let (a, b, c, d) = (self.a, self.b, self.c, self.d);
        let infinity = if a == 0 { 1 } else { 0 };
        let coeffs: Vec<BigRational> =
            [d, c, b, a].iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        let p0 = trim(coeffs);
        if p0.len() <= 1 {
            return infinity;
        }
        let p1 = derivative(&p0);
        let mut seq = vec![p0, p1];
        loop {
            let n = seq.len();
            let r = poly_rem(&seq[n - 2], &seq[n - 1]);
            if r.is_empty() {
                break;
            }
            seq.push(r.into_iter().map(|x| -x).collect());
        }
        let sign_changes = |at_pos_inf: bool| {
            let signs: Vec<i32> = seq
                .iter()
                .filter_map(|p| {
                    let lead = p.last().unwrap();
                    if lead.is_zero() {
                        return None;
                    }
                    let deg = p.len() - 1;
                    let mut s = if lead.is_positive() { 1 } else { -1 };
                    if !at_pos_inf && deg % 2 == 1 {
                        s = -s;
                    }
                    Some(s)
                })
                .collect();
            signs.windows(2).filter(|w| w[0] != w[1]).count()
        };
        sign_changes(false) - sign_changes(true) + infinity
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().map_or(false, |x| x.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &[BigRational]) -> Vec<BigRational> {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(BigInt::from(i))).collect())
}

fn poly_rem(num: &[BigRational], den: &[BigRational]) -> Vec<BigRational> {
    let mut r = num.to_vec();
    let dl = den.last().unwrap().clone();
    while r.len() >= den.len() && !r.is_empty() {
        let shift = r.len() - den.len();
        let f = r.last().unwrap() / &dl;
        for (i, c) in den.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &f * c;
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn to64(x: i128) -> i64 {
    i64::try_from(x).expect("form coefficient overflow")
}

/// All g ∈ GL₂(ℤ) with entries in {−1, 0, 1}.
pub fn small_gl2() -> &'static [Mat2] {
    use std::sync::OnceLock;
    static SET: OnceLock<Vec<Mat2>> = OnceLock::new();
    SET.get_or_init(|| {
        let mut v = Vec::new();
        for p in -1..=1 {
            for q in -1..=1 {
                for r in -1..=1 {
                    for s in -1..=1 {
                        if (p * s - q * r).abs() == 1 {
                            v.push([[p, q], [r, s]]);
                        }
                    }
                }
            }
        }
        v
    })
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            out.push(i);
            if i * i != n {
                out.push(n / i);
            }
        }
        i += 1;
    }
    out
}

/// Real roots (ascending) of a x³ + b x² + c x + d, a ≠ 0.
pub fn real_roots_cubic(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let f = |x: f64| ((a * x + b) * x + c) * x + d;
    let df = |x: f64| (3.0 * a * x + 2.0 * b) * x + c;
    let bound = 1.0 + (b / a).abs().max((c / a).abs()).max((d / a).abs());
    // split at critical points
    let mut pts = vec![-bound];
    let disc = 4.0 * b * b - 12.0 * a * c;
    if disc > 0.0 {
        let s = disc.sqrt();
        let mut r = [(-2.0 * b - s) / (6.0 * a), (-2.0 * b + s) / (6.0 * a)];
        r.sort_by(|x, y| x.partial_cmp(y).unwrap());
        pts.extend(r);
    }
    pts.push(bound);
    let mut roots = Vec::new();
    for w in pts.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        let (flo, fhi) = (f(lo), f(hi));
        if flo == 0.0 {
            if roots.last().map_or(true, |&r: &f64| (r - lo).abs() > 1e-12 * (1.0 + lo.abs())) {
                roots.push(lo);
            }
            continue;
        }
        if flo.signum() == fhi.signum() {
            continue;
        }
        let up = fhi > 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = f(mid);
            if (fm > 0.0) == up {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..3 {
            let dx = df(x);
            if dx != 0.0 {
                let nx = x - f(x) / dx;
                if nx >= w[0] && nx <= w[1] {
                    x = nx;
                }
            }
        }
        roots.push(x);
    }
    if let Some(&last) = pts.last() {
        if f(last) == 0.0 && roots.last().map_or(true, |&r| r != last) {
            roots.push(last);
        }
    }
    roots
}

/// All complex roots of f(x,1): real ones ascending, then the complex one with im > 0.
pub fn complex_roots(f: &BinaryCubicForm) -> Vec<(f64, f64)> {
    let (a, b, c) = (f.a as f64, f.b as f64, f.c as f64);
    if f.disc() > 0 {
        return f.real_roots().into_iter().map(|r| (r, 0.0)).collect();
    }
    let alpha = f.single_real_root();
    // deflate: a x² + (aα + b) x + (aα² + bα + c)
    let qb = a * alpha + b;
    let qc = a * alpha * alpha + b * alpha + c;
    let disc = qb * qb - 4.0 * a * qc;
    let re = -qb / (2.0 * a);
    let im = (-disc).max(0.0).sqrt() / (2.0 * a.abs());
    // one Newton polish step in ℂ on the cubic
    let (mut zr, mut zi) = (re, im);
    for _ in 0..2 {
        let (fr, fi) = cpoly(&[f.d as f64, c, b, a], zr, zi);
        let (dr, di) = cpoly(&[c, 2.0 * b, 3.0 * a], zr, zi);
        let den = dr * dr + di * di;
        if den == 0.0 {
            break;
        }
        zr -= (fr * dr + fi * di) / den;
        zi -= (fi * dr - fr * di) / den;
    }
    vec![(alpha, 0.0), (zr, zi.abs())]
}

fn cpoly(coeffs: &[f64], zr: f64, zi: f64) -> (f64, f64) {
    let (mut r, mut i) = (0.0, 0.0);
    for &c in coeffs.iter().rev() {
        let nr = r * zr - i * zi + c;
        let ni = r * zi + i * zr;
        r = nr;
        i = ni;
    }
    (r, i)
}
