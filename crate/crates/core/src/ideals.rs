//! Integral ideals of a cubic ring in Hermite normal form, prime
//! decomposition and valuations.

use std::fmt;

use crate::linalg;
use crate::ring::{CubicRing, Elt};
use crate::splitting::{self, SplittingType};

/// An ideal given by an upper-triangular row basis with respect to {1, ω, θ},
/// scaled by `1/denominator`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealHNF {
    pub rows: [[i64; 3]; 3],
    pub denominator: i64,
}

impl fmt::Display for IdealHNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.rows;
        write!(f, "[{} {} {}; 0 {} {}; 0 0 {}]", r[0][0], r[0][1], r[0][2], r[1][1], r[1][2], r[2][2])?;
        if self.denominator != 1 {
            write!(f, "/{}", self.denominator)?;
        }
        Ok(())
    }
}

impl IdealHNF {
    pub fn unit() -> Self {
        IdealHNF { rows: [[1, 0, 0], [0, 1, 0], [0, 0, 1]], denominator: 1 }
    }

    pub fn scalar(n: i64) -> Self {
        IdealHNF { rows: [[n, 0, 0], [0, n, 0], [0, 0, n]], denominator: 1 }
    }

    /// Norm of an integral ideal (index in the ring).
    pub fn norm(&self) -> i64 {
        self.rows[0][0] * self.rows[1][1] * self.rows[2][2]
    }

    /// Norm as a fraction (numerator, denominator³).
    pub fn norm_fraction(&self) -> (i64, i64) {
        (self.norm(), self.denominator.pow(3))
    }

    pub fn is_integral(&self) -> bool {
        self.denominator == 1
    }

    /// The ideal generated over the ring by `gens`, known to contain `modulus`.
    pub fn from_generators(ring: &CubicRing, gens: &[[i128; 3]], modulus: i64) -> Self {
        let mut rows = Vec::with_capacity(gens.len() * 3);
        let basis: [[i128; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let m = modulus as i128;
        for g in gens {
            let g = [g[0].rem_euclid(m), g[1].rem_euclid(m), g[2].rem_euclid(m)];
            for e in &basis {
                rows.push(ring.mul_i128(&g, e).to_vec());
            }
        }
        Self::from_lattice(&rows, modulus)
    }

    /// HNF of the ℤ-lattice spanned by `rows` together with modulus·ℤ³.
    pub fn from_lattice(rows: &[Vec<i128>], modulus: i64) -> Self {
        let h = linalg::hnf_mod(rows, 3, modulus as i128).expect("ideal HNF stays below its modulus");
        let mut out = [[0i64; 3]; 3];
        for (i, row) in h.iter().enumerate() {
            for j in 0..3 {
                out[i][j] = row[j] as i64;
            }
        }
        IdealHNF { rows: out, denominator: 1 }
    }

    /// The principal ideal αO.
    pub fn principal(ring: &CubicRing, alpha: &Elt) -> Self {
        let n = ring.norm(alpha).abs();
        assert!(n != 0, "principal ideal of zero");
        let x = [alpha[0] as i128, alpha[1] as i128, alpha[2] as i128];
        Self::from_generators(ring, &[x], i64::try_from(n).expect("norm fits in i64"))
    }

    pub fn mul(&self, other: &Self, ring: &CubicRing) -> Self {
        let modulus = self.norm() * other.norm();
        let mut rows = Vec::with_capacity(9);
        for r in &self.rows {
            for s in &other.rows {
                let x = ring.mul_i128(&to128(r), &to128(s));
                rows.push(x.to_vec());
            }
        }
        let mut out = Self::from_lattice(&rows, modulus);
        out.denominator = self.denominator * other.denominator;
        out.normalize()
    }

    pub fn pow(&self, k: u32, ring: &CubicRing) -> Self {
        let mut acc = IdealHNF::unit();
        for _ in 0..k {
            acc = acc.mul(self, ring);
        }
        acc
    }

    /// Divide out the content shared with the denominator.
    pub fn normalize(mut self) -> Self {
        use num_integer::Integer;
        if self.denominator == 1 {
            return self;
        }
        let mut g = self.denominator;
        for r in &self.rows {
            for &x in r {
                g = g.gcd(&x);
            }
        }
        if g > 1 {
            for r in self.rows.iter_mut() {
                for x in r.iter_mut() {
                    *x /= g;
                }
            }
            self.denominator /= g;
        }
        self
    }

    /// Membership of a ring element in an integral ideal.
    pub fn contains(&self, x: &[i128; 3]) -> bool {
        let h = &self.rows;
        let mut v = *x;
        for i in 0..3 {
            let piv = h[i][i] as i128;
            if v[i] % piv != 0 {
                return false;
            }
            let k = v[i] / piv;
            for j in i..3 {
                v[j] -= k * h[i][j] as i128;
            }
        }
        true
    }

    /// I ⊆ J for integral ideals.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.rows.iter().all(|r| other.contains(&to128(r)))
    }

    pub fn basis(&self) -> [Elt; 3] {
        self.rows
    }
}

fn to128(r: &[i64; 3]) -> [i128; 3] {
    [r[0] as i128, r[1] as i128, r[2] as i128]
}

/// A prime ideal above p with its local data and a helper element for valuations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub hnf: IdealHNF,
    /// β ∈ p·P⁻¹ outside p·O: multiplying by β/p lowers v_P by one and keeps
    /// every other valuation above p nonnegative.
    pub beta: Elt,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }

    /// v_P(α) for a nonzero ring element.
    pub fn valuation(&self, ring: &CubicRing, alpha: &Elt) -> u32 {
        let p = self.p as i128;
        let beta = to128(&self.beta);
        let mut x = to128(alpha);
        assert!(x != [0, 0, 0]);
        let mut v = 0;
        loop {
            let y = ring.mul_i128(&x, &beta);
            if y.iter().all(|c| c % p == 0) {
                x = [y[0] / p, y[1] / p, y[2] / p];
                v += 1;
            } else {
                return v;
            }
        }
    }
}

/// {x ∈ O : x·I ⊆ pO}, the ideal p·I⁻¹ for I ⊇ pO.
pub fn colon_p(ring: &CubicRing, ideal: &IdealHNF, p: u64) -> IdealHNF {
    let pi = p as i64;
    // rows: 9 equations (coordinate k of x·g_i), columns: x coordinates
    let mut m = vec![vec![0i64; 3]; 9];
    for (i, g) in ideal.rows.iter().enumerate() {
        for j in 0..3 {
            let mut ej = [0i64; 3];
            ej[j] = 1;
            let prod = ring.mul_mod(g, &ej, pi);
            for k in 0..3 {
                m[3 * i + k][j] = prod[k];
            }
        }
    }
    let ker = linalg::kernel_mod(&m, 3, pi);
    let rows: Vec<Vec<i128>> = ker.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    IdealHNF::from_lattice(&rows, pi)
}

/// The prime ideals above p, sorted by (norm, HNF).
pub fn primes_above(ring: &CubicRing, p: u64) -> Vec<PrimeIdeal> {
    let t = splitting::splitting_type(&ring.form, p);
    let pi = p as i64;
    let kernel_ideal = |u: i64, v: i64| {
        IdealHNF::from_lattice(&[vec![-(u as i128), 1, 0], vec![-(v as i128), 0, 1]], pi)
    };
    let points = splitting::fp_points(&ring.form, pi);
    let mut out: Vec<(u32, u32, IdealHNF)> = Vec::new();
    if t == SplittingType::totally_split() {
        for &(u, v) in &points {
            out.push((1, 1, kernel_ideal(u, v)));
        }
    } else if t == SplittingType::partially_split() {
        let p1 = kernel_ideal(points[0].0, points[0].1);
        let p2 = colon_p(ring, &p1, p);
        out.push((1, 1, p1));
        out.push((1, 2, p2));
    } else if t == SplittingType::inert() {
        out.push((1, 3, IdealHNF::scalar(pi)));
    } else if t == SplittingType::totally_ramified() {
        out.push((3, 1, kernel_ideal(points[0].0, points[0].1)));
    } else {
        let a = kernel_ideal(points[0].0, points[0].1);
        let b = kernel_ideal(points[1].0, points[1].1);
        // pO = P²Q with P the ramified one
        if a.mul(&a, ring).mul(&b, ring) == IdealHNF::scalar(pi) {
            out.push((2, 1, a));
            out.push((1, 1, b));
        } else {
            out.push((2, 1, b));
            out.push((1, 1, a));
        }
    }
    let mut primes: Vec<PrimeIdeal> = out
        .into_iter()
        .map(|(e, f, hnf)| {
            let c = colon_p(ring, &hnf, p);
            let beta = c.rows.iter().copied().find(|r| r.iter().any(|x| x.rem_euclid(pi) != 0)).expect("pP⁻¹ ≠ pO");
            PrimeIdeal { p, e, f, hnf, beta }
        })
        .collect();
    primes.sort_by(|x, y| (x.norm(), &x.hnf).cmp(&(y.norm(), &y.hnf)));
    primes
}
