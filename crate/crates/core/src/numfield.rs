//! A cubic field given by a maximal form: embeddings with exact sign
//! decisions, weighted T₂ forms, quadratic characters, and the analytic
//! class number formula estimate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::arith;
use crate::field::Signature;
use crate::forms::BinaryCubicForm;
use crate::ideals::IdealHNF;
use crate::lattice::{self, Gram};
use crate::ring::{CubicRing, Elt, Embeddings};
use crate::splitting;

#[derive(Clone, Debug)]
pub struct NumberField {
    pub form: BinaryCubicForm,
    pub ring: CubicRing,
    pub emb: Embeddings,
    pub disc: i64,
    pub signature: Signature,
}

impl NumberField {
    pub fn new(form: BinaryCubicForm) -> Self {
        let disc = form.disc() as i64;
        NumberField { form, ring: CubicRing::new(form), emb: Embeddings::new(&form), disc, signature: Signature::of_disc(disc) }
    }

    pub fn r1(&self) -> usize {
        self.emb.real_places
    }

    /// Archimedean places (real ones first).
    pub fn places(&self) -> usize {
        self.emb.places()
    }

    /// Local degree of place i (1 real, 2 complex).
    pub fn place_degree(&self, i: usize) -> f64 {
        if i < self.r1() {
            1.0
        } else {
            2.0
        }
    }

    pub fn unit_rank(&self) -> usize {
        self.places() - 1
    }

    /// Minkowski bound (2/9)√D for totally real, (8/9π)√|D| for complex fields.
    pub fn minkowski_bound(&self) -> f64 {
        let s = (self.disc.abs() as f64).sqrt();
        match self.signature {
            Signature::TotallyReal => 2.0 / 9.0 * s,
            Signature::Complex => 8.0 / (9.0 * std::f64::consts::PI) * s,
        }
    }

    pub fn norm(&self, x: &Elt) -> i128 {
        self.ring.norm(x)
    }

    /// log|σ_i(x)| per place.
    pub fn logs(&self, x: &Elt) -> Vec<f64> {
        self.emb.log_abs(x)
    }

    /// Logs in double-double precision, with an absolute error bound.
    pub(crate) fn logs_dd(&self, x: &Elt) -> (Vec<crate::dd::Dd>, f64) {
        self.emb.log_abs_dd(x)
    }

    /// Sign bits at the real places (bit i set when σ_i(x) < 0).
    pub fn sign_bits(&self, x: &Elt) -> u128 {
        let mut bits = 0u128;
        for i in 0..self.r1() {
            if self.sign_at(x, i) < 0 {
                bits |= 1 << i;
            }
        }
        bits
    }

    /// Sign of σ_i(x) at a real place, exact.
    pub fn sign_at(&self, x: &Elt, i: usize) -> i32 {
        let (v, _) = self.emb.eval(x, i);
        let err = self.emb.eval_error(x, i);
        if v.abs() > 8.0 * err {
            return if v > 0.0 { 1 } else { -1 };
        }
        self.exact_sign(x, i)
    }

    /// Sign of x at the i-th real root by rational interval refinement.
    fn exact_sign(&self, x: &Elt, i: usize) -> i32 {
        let BinaryCubicForm { a, b, c, d } = self.form;
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        // x = x0 + x1·aρ + x2·(aρ² + bρ) as a polynomial in ρ
        let ga = q(x[2] * a);
        let gb = q(x[1] * a + x[2] * b);
        let gc = q(x[0]);
        let g = |t: &BigRational| &ga * t * t + &gb * t + &gc;
        let f = |t: &BigRational| ((q(a) * t + q(b)) * t + q(c)) * t + q(d);
        let roots = self.form.real_roots();
        let bound = 2.0 + (b as f64 / a as f64).abs() + (c as f64 / a as f64).abs() + (d as f64 / a as f64).abs();
        let to_q = |v: f64| BigRational::from_float(v).expect("finite");
        let mut lo = if i == 0 { to_q(-bound) } else { to_q(0.5 * (roots[i - 1] + roots[i])) };
        let mut hi = if i + 1 == roots.len() { to_q(bound) } else { to_q(0.5 * (roots[i] + roots[i + 1])) };
        let flo_pos = f(&lo).is_positive();
        for _ in 0..4000 {
            let (glo, ghi) = (g(&lo), g(&hi));
            let mut vals = vec![glo, ghi];
            if !ga.is_zero() {
                let vertex = -&gb / (q(2) * &ga);
                if vertex > lo && vertex < hi {
                    vals.push(g(&vertex));
                }
            }
            if vals.iter().all(|v| v.is_positive()) {
                return 1;
            }
            if vals.iter().all(|v| v.is_negative()) {
                return -1;
            }
            let mid = (&lo + &hi) / q(2);
            let fm = f(&mid);
            if fm.is_positive() == flo_pos {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        panic!("sign of a nonzero element at a real place did not resolve");
    }

    /// Gram matrix of Σ_i d_i·w_i·|σ_i(x)|² on three elements.
    pub fn weighted_gram(&self, basis: &[Elt; 3], weights: &[f64]) -> Gram {
        let vals: Vec<Vec<(f64, f64)>> = basis.iter().map(|b| (0..self.places()).map(|i| self.emb.eval(b, i)).collect()).collect();
        let mut g = [[0.0; 3]; 3];
        for k in 0..3 {
            for l in 0..3 {
                let mut s = 0.0;
                for i in 0..self.places() {
                    let (xr, xi) = vals[k][i];
                    let (yr, yi) = vals[l][i];
                    s += self.place_degree(i) * weights[i] * (xr * yr + xi * yi);
                }
                g[k][l] = s;
            }
        }
        g
    }

    /// An LLL-reduced basis of the ideal for the weighted T₂ form, with its
    /// Gram matrix. The Gram matrix is recomputed from the embeddings of each
    /// new basis so that its entries stay accurate when the weights are skewed.
    pub fn reduced_basis(&self, ideal: &IdealHNF, weights: &[f64]) -> ([Elt; 3], Gram) {
        let mut basis = ideal.basis();
        let mut g = self.weighted_gram(&basis, weights);
        for _ in 0..20 {
            let u = lattice::lll(&g);
            if u == [[1, 0, 0], [0, 1, 0], [0, 0, 1]] {
                break;
            }
            let mut nb = [[0i64; 3]; 3];
            for i in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        nb[i][l] += u[i][k] * basis[k][l];
                    }
                }
            }
            basis = nb;
            g = self.weighted_gram(&basis, weights);
        }
        (basis, g)
    }

    /// Quadratic character of x at the degree one prime given by the point
    /// (p, u, v), where 1, ω, θ map to 1, u, v: +1 or −1 (0 if x lies in it).
    pub fn linear_character(&self, x: &Elt, pt: &(u64, u64, u64)) -> i32 {
        let (p, u, v) = *pt;
        let p128 = p as i128;
        let img = (x[0] as i128 + x[1] as i128 * u as i128 + x[2] as i128 * v as i128).rem_euclid(p128);
        arith::legendre(img, p)
    }

    /// `count` unramified primes from `start` on with a degree one prime above
    /// them, with the image (u, v) of (ω, θ) in the residue field of one such
    /// prime.
    pub fn linear_character_primes(&self, start: u64, count: usize) -> Vec<(u64, u64, u64)> {
        let mut out = Vec::new();
        let mut p = start | 1;
        while out.len() < count {
            if arith::is_prime(p) && self.disc.rem_euclid(p as i64) != 0 && self.form.a.rem_euclid(p as i64) != 0 {
                if let Some(r) = some_root(&self.form, p) {
                    let m = |x: i128| x.rem_euclid(p as i128);
                    let (a, b, r) = (self.form.a as i128, self.form.b as i128, r as i128);
                    let u = m(a * r);
                    let v = m(m(a * m(r * r)) + b * r);
                    out.push((p, u as u64, v as u64));
                }
            }
            p += 2;
        }
        out
    }

    /// Truncated Euler product for the residue of ζ_K at s = 1, turned into
    /// an estimate of h·R by the analytic class number formula.
    pub fn hr_estimate(&self, pmax: u64) -> f64 {
        let mut log_res = 0.0;
        for p in arith::primes_up_to(pmax) {
            let pf = p as f64;
            let mut l = (1.0 - 1.0 / pf).ln();
            if self.disc.rem_euclid(p as i64) == 0 {
                for (_, f) in splitting::splitting_type(&self.form, p).parts {
                    l -= (1.0 - pf.powi(-(f as i32))).ln();
                }
            } else {
                match count_projective_roots(&self.form, p) {
                    3 => l -= 3.0 * (1.0 - 1.0 / pf).ln(),
                    1 => l -= (1.0 - 1.0 / pf).ln() + (1.0 - 1.0 / (pf * pf)).ln(),
                    _ => l -= (1.0 - 1.0 / (pf * pf * pf)).ln(),
                }
            }
            log_res += l;
        }
        let r1 = self.r1() as i32;
        let r2 = (self.places() - self.r1()) as i32;
        let w = 2.0;
        log_res.exp() * w * (self.disc.abs() as f64).sqrt() / (2f64.powi(r1) * (2.0 * std::f64::consts::PI).powi(r2))
    }
}

/// A root of the squarefree f(x, 1) mod p, if it has any (p ∤ a).
fn some_root(f: &BinaryCubicForm, p: u64) -> Option<u64> {
    let m = |x: i64| x.rem_euclid(p as i64) as u64;
    let mut g = vec![m(f.d), m(f.c), m(f.b), m(f.a)];
    let inv = crate::linalg::inv_mod(g[3] as i64, p as i64) as u64;
    for c in g.iter_mut() {
        *c = mulm(*c, inv, p);
    }
    let mut h = xpow_mod_cubic(&g, p, p);
    h.resize(h.len().max(2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(&mut h);
    let mut gcd = poly_gcd(g, h, p);
    if gcd.len() < 2 {
        return None;
    }
    // split a product of distinct linear factors by gcd with (x + a)^((p−1)/2) − 1
    let mut a = 0;
    while gcd.len() > 2 {
        let mut h = poly_powmod(&[a, 1], (p - 1) / 2, &gcd, p);
        h.resize(h.len().max(1), 0);
        h[0] = (h[0] + p - 1) % p;
        trim(&mut h);
        let d = poly_gcd(gcd.clone(), h, p);
        if d.len() >= 2 && d.len() < gcd.len() {
            gcd = d;
        }
        a += 1;
    }
    // monic linear x + c
    Some((p - gcd[0]) % p)
}

/// Number of distinct roots of f on ℙ¹(𝔽_p).
pub fn count_projective_roots(f: &BinaryCubicForm, p: u64) -> usize {
    let m = |x: i64| x.rem_euclid(p as i64) as u64;
    let mut g = vec![m(f.d), m(f.c), m(f.b), m(f.a)];
    while g.last() == Some(&0) {
        g.pop();
    }
    let at_infinity = usize::from(m(f.a) == 0);
    if g.len() <= 1 {
        return at_infinity;
    }
    // make monic
    let inv = crate::linalg::inv_mod(*g.last().unwrap() as i64, p as i64) as u64;
    for c in g.iter_mut() {
        *c = mulm(*c, inv, p);
    }
    // x^p mod g
    let xp = if g.len() == 4 { xpow_mod_cubic(&g, p, p) } else { poly_powmod(&[0, 1], p, &g, p) };
    let mut h = xp;
    if h.len() < 2 {
        h.resize(2, 0);
    }
    h[1] = (h[1] + p - 1) % p;
    trim(&mut h);
    let gcd = poly_gcd(g, h, p);
    gcd.len().saturating_sub(1) + at_infinity
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    if p < 1 << 32 {
        return a * b % p;
    }
    ((a as u128 * b as u128) % p as u128) as u64
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mulmod(x: &[u64], y: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if x.is_empty() || y.is_empty() {
        return vec![];
    }
    let mut r = vec![0u64; x.len() + y.len() - 1];
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            r[i + j] = (r[i + j] + mulm(a, b, p)) % p;
        }
    }
    poly_rem(r, g, p)
}

/// Remainder modulo a monic polynomial.
fn poly_rem(mut r: Vec<u64>, g: &[u64], p: u64) -> Vec<u64> {
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().unwrap();
        let shift = r.len() - dg;
        for k in 0..dg {
            r[shift + k] = (r[shift + k] + p - mulm(lead, g[k], p)) % p;
        }
    }
    trim(&mut r);
    r
}

/// x^e modulo the monic cubic x³ + g₂x² + g₁x + g₀ over 𝔽_p.
fn xpow_mod_cubic(g: &[u64], mut e: u64, p: u64) -> Vec<u64> {
    let mul = |x: &[u64; 3], y: &[u64; 3]| -> [u64; 3] {
        let mut r = [0u64; 5];
        for i in 0..3 {
            for j in 0..3 {
                r[i + j] = (r[i + j] + mulm(x[i], y[j], p)) % p;
            }
        }
        for k in (3..5).rev() {
            let lead = r[k];
            if lead != 0 {
                for l in 0..3 {
                    r[k - 3 + l] = (r[k - 3 + l] + p - mulm(lead, g[l], p)) % p;
                }
            }
        }
        [r[0], r[1], r[2]]
    };
    let mut acc = [1u64, 0, 0];
    let mut b = [0u64, 1, 0];
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(&acc, &b);
        }
        b = mul(&b, &b);
        e >>= 1;
    }
    let mut out = acc.to_vec();
    trim(&mut out);
    out
}

fn poly_powmod(base: &[u64], mut e: u64, g: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base.to_vec(), g, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, g, p);
        }
        b = poly_mulmod(&b, &b, g, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = crate::linalg::inv_mod(*b.last().unwrap() as i64, p as i64) as u64;
        let monic: Vec<u64> = b.iter().map(|&c| mulm(c, inv, p)).collect();
        let r = poly_rem(a, &monic, p);
        a = monic;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts_match_brute_force() {
        let forms = [[1, 0, -1, -1], [1, -1, -3, 1], [3, 1, 4, 2], [5, 0, 7, 1]];
        for v in forms {
            let f = BinaryCubicForm::from(v);
            for p in arith::primes_up_to(80) {
                if f.disc().rem_euclid(p as i128) == 0 {
                    continue;
                }
                let brute = f.roots_mod(p as i64).len();
                assert_eq!(count_projective_roots(&f, p), brute, "{v:?} p={p}");
            }
        }
    }

    #[test]
    fn roots_found_for_split_and_single_primes() {
        // the second form is cyclic, so every unramified prime splits or is inert
        for v in [[1, 0, -1, -1], [1, 1, -2, -1], [3, 1, 4, 2]] {
            let f = BinaryCubicForm::from(v);
            for p in arith::primes_up_to(200).into_iter().skip(2) {
                if f.disc().rem_euclid(p as i128) == 0 || (v[0] as u64) % p == 0 {
                    continue;
                }
                let r = some_root(&f, p);
                let affine = f.roots_mod(p as i64).len() - usize::from(v[0] as u64 % p == 0);
                assert_eq!(r.is_some(), affine > 0, "{v:?} p={p}");
                if let Some(r) = r {
                    let r = r as i128;
                    let val = v[0] as i128 * r * r * r + v[1] as i128 * r * r + v[2] as i128 * r + v[3] as i128;
                    assert_eq!(val.rem_euclid(p as i128), 0, "{v:?} p={p}");
                }
            }
        }
        let k = NumberField::new(BinaryCubicForm::from([1, 1, -2, -1]));
        assert_eq!(k.linear_character_primes(1 << 30, 4).len(), 4);
    }

    #[test]
    fn exact_signs_agree_with_floats() {
        let k = NumberField::new(BinaryCubicForm::from([1, -1, -3, 1]));
        for x in [[1i64, 1, 0], [0, 1, 0], [-2, 0, 1], [3, -1, 1]] {
            for i in 0..3 {
                let (v, _) = k.emb.eval(&x, i);
                assert_eq!(k.exact_sign(&x, i), if v > 0.0 { 1 } else { -1 });
            }
        }
    }

    #[test]
    fn characters_are_multiplicative() {
        for f in [[1, 0, -1, -1], [3, 1, 4, 2]] {
            let k = NumberField::new(BinaryCubicForm::from(f));
            let x = [3, 1, -2];
            let y = [-1, 4, 1];
            let xy = k.ring.mul(&x, &y);
            for pt in k.linear_character_primes(1 << 20, 4) {
                let c = |z: &Elt| k.linear_character(z, &pt);
                assert_eq!(c(&xy), c(&x) * c(&y));
                assert_eq!(c(&k.ring.mul(&x, &x)), 1);
            }
        }
    }

    #[test]
    fn characters_see_units_of_norm_one() {
        // α with α³ = α + 1 is a unit of norm 1; some character must reject it
        let k = NumberField::new(BinaryCubicForm::from([1, 0, -1, -1]));
        let alpha = [0, 1, 0];
        let pts = k.linear_character_primes(1 << 20, 12);
        assert!(pts.iter().any(|pt| k.linear_character(&alpha, pt) == -1));
    }

    #[test]
    fn class_number_formula_estimate_for_disc_minus_23() {
        // h = 1 and R ≈ 0.2811995743 for x³ − x − 1
        let k = NumberField::new(BinaryCubicForm::from([1, 0, -1, -1]));
        let est = k.hr_estimate(10_000);
        assert!((est / 0.2811995743 - 1.0).abs() < 0.1, "{est}");
    }
}
