//! The cubic ring attached to a binary cubic form.
//!
//! For f = (a,b,c,d) the ring has ℤ-basis {1, ω, θ} with
//!
//! ```text
//! ω² = -bω + aθ,   ωθ = -ad - cω,   θ² = -bd - dω - cθ,
//! ```
//!
//! realised inside ℚ(α), f(α,1) = 0, by ω = aα and θ = aα² + bα.

use crate::dd::{self, CDd, Dd};
use crate::forms::BinaryCubicForm;
use crate::linalg;

/// Element coordinates in the basis {1, ω, θ}.
pub type Elt = [i64; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CubicRing {
    pub form: BinaryCubicForm,
}

impl CubicRing {
    pub fn new(form: BinaryCubicForm) -> Self {
        CubicRing { form }
    }

    /// Structure constants: `table()[i][j]` is e_i·e_j in the basis.
    pub fn table(&self) -> [[[i64; 3]; 3]; 3] {
        let BinaryCubicForm { a, b, c, d } = self.form;
        let ww = [0, -b, a];
        let wt = [-a * d, -c, 0];
        let tt = [-b * d, -d, -c];
        [
            [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
            [[0, 1, 0], ww, wt],
            [[0, 0, 1], wt, tt],
        ]
    }

    pub fn mul(&self, x: &Elt, y: &Elt) -> Elt {
        let BinaryCubicForm { a, b, c, d } = self.form;
        let (x0, x1, x2) = (x[0] as i128, x[1] as i128, x[2] as i128);
        let (y0, y1, y2) = (y[0] as i128, y[1] as i128, y[2] as i128);
        let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
        let ww = x1 * y1;
        let wt = x1 * y2 + x2 * y1;
        let tt = x2 * y2;
        let r0 = x0 * y0 - a * d * wt - b * d * tt;
        let r1 = x0 * y1 + x1 * y0 - b * ww - c * wt - d * tt;
        let r2 = x0 * y2 + x2 * y0 + a * ww - c * tt;
        [narrow(r0), narrow(r1), narrow(r2)]
    }

    pub fn mul_i128(&self, x: &[i128; 3], y: &[i128; 3]) -> [i128; 3] {
        let BinaryCubicForm { a, b, c, d } = self.form;
        let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
        let ww = x[1] * y[1];
        let wt = x[1] * y[2] + x[2] * y[1];
        let tt = x[2] * y[2];
        [
            x[0] * y[0] - a * d * wt - b * d * tt,
            x[0] * y[1] + x[1] * y[0] - b * ww - c * wt - d * tt,
            x[0] * y[2] + x[2] * y[0] + a * ww - c * tt,
        ]
    }

    pub fn mul_mod(&self, x: &[i64; 3], y: &[i64; 3], p: i64) -> [i64; 3] {
        let r = self.mul_i128(&[x[0] as i128, x[1] as i128, x[2] as i128], &[y[0] as i128, y[1] as i128, y[2] as i128]);
        let p = p as i128;
        [r[0].rem_euclid(p) as i64, r[1].rem_euclid(p) as i64, r[2].rem_euclid(p) as i64]
    }

    pub fn pow_mod(&self, x: &[i64; 3], mut e: u64, p: i64) -> [i64; 3] {
        let mut base = [x[0].rem_euclid(p), x[1].rem_euclid(p), x[2].rem_euclid(p)];
        let mut acc = [1 % p, 0, 0];
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod(&acc, &base, p);
            }
            base = self.mul_mod(&base, &base, p);
            e >>= 1;
        }
        acc
    }

    /// Matrix of multiplication by x: column j = x·e_j (as rows: `m[i][j]`).
    pub fn mul_matrix(&self, x: &[i128; 3]) -> [[i128; 3]; 3] {
        let mut m = [[0i128; 3]; 3];
        for j in 0..3 {
            let mut e = [0i128; 3];
            e[j] = 1;
            let col = self.mul_i128(x, &e);
            for i in 0..3 {
                m[i][j] = col[i];
            }
        }
        m
    }

    pub fn norm(&self, x: &Elt) -> i128 {
        let m = self.mul_matrix(&[x[0] as i128, x[1] as i128, x[2] as i128]);
        det3(&m)
    }

    pub fn trace(&self, x: &Elt) -> i128 {
        let m = self.mul_matrix(&[x[0] as i128, x[1] as i128, x[2] as i128]);
        m[0][0] + m[1][1] + m[2][2]
    }

    /// Discriminant of the ring: det of the trace form.
    pub fn discriminant(&self) -> i128 {
        let basis: [Elt; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let mut g = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = self.trace(&self.mul(&basis[i], &basis[j]));
            }
        }
        det3(&g)
    }

    /// Characteristic polynomial coefficients of multiplication by x:
    /// t³ - s1 t² + s2 t - s3, returned as (s1, s2, s3).
    pub fn char_poly(&self, x: &Elt) -> (i128, i128, i128) {
        let m = self.mul_matrix(&[x[0] as i128, x[1] as i128, x[2] as i128]);
        let s1 = m[0][0] + m[1][1] + m[2][2];
        let s2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2]
            - m[1][2] * m[2][1];
        (s1, s2, det3(&m))
    }

    /// Is x a multiple of n in the ring (all coordinates divisible)?
    pub fn divisible(x: &[i128; 3], n: i128) -> bool {
        x.iter().all(|v| v % n == 0)
    }

    /// p-maximality by the Pohst–Zassenhaus criterion: with I the p-radical
    /// of R, R is p-maximal iff {y ∈ R : yI ⊆ pI} = pR.
    pub fn is_maximal_at(&self, p: i64) -> bool {
        let rad = self.radical_mod(p);
        // I = pR + lifts(rad)
        let mut gens: Vec<Vec<i128>> = rad.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
        for i in 0..3 {
            let mut e = vec![0i128; 3];
            e[i] = p as i128;
            gens.push(e);
        }
        let basis = linalg::hnf(&gens, 3).expect("small lattice");
        debug_assert_eq!(basis.len(), 3);
        let b: [[i128; 3]; 3] = [
            [basis[0][0], basis[0][1], basis[0][2]],
            [basis[1][0], basis[1][1], basis[1][2]],
            [basis[2][0], basis[2][1], basis[2][2]],
        ];
        // rows: for each ring basis e_i, the 9 coordinates of e_i·b_j in the basis of I, mod p
        let mut rows = Vec::with_capacity(3);
        for i in 0..3 {
            let mut e = [0i128; 3];
            e[i] = 1;
            let mut row = Vec::with_capacity(9);
            for bj in &b {
                let prod = self.mul_i128(&e, bj);
                let coords = solve_in_basis(&b, &prod).expect("ideal is closed under multiplication");
                row.extend(coords.iter().map(|c| c.rem_euclid(p as i128) as i64));
            }
            rows.push(row);
        }
        linalg::rank_mod(&rows, p) == 3
    }

    /// Basis (over 𝔽_p) of the nilradical of R/pR: kernel of Frobenius^k with p^k ≥ 3.
    pub fn radical_mod(&self, p: i64) -> Vec<[i64; 3]> {
        let mut k = 1u32;
        while (p as u64).pow(k) < 3 {
            k += 1;
        }
        let e = (p as u64).pow(k);
        // Frobenius matrix: column j = e_j^{p^k}
        let mut m = vec![vec![0i64; 3]; 3];
        for j in 0..3 {
            let mut ej = [0i64; 3];
            ej[j] = 1;
            let img = self.pow_mod(&ej, e, p);
            for i in 0..3 {
                m[i][j] = img[i];
            }
        }
        linalg::kernel_mod(&m, 3, p).into_iter().map(|v| [v[0], v[1], v[2]]).collect()
    }

    /// Numerical embeddings of the basis element images (ω, θ) at each root of f(x,1).
    pub fn basis_embeddings(&self) -> Embeddings {
        Embeddings::new(&self.form)
    }
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("ring element coordinate overflow")
}

pub fn det3(m: &[[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Integer coordinates c with Σ c_j·rows_j = v, if they exist.
pub fn solve_in_basis(rows: &[[i128; 3]; 3], v: &[i128; 3]) -> Option<[i128; 3]> {
    // c · B = v  ⇔  Bᵀ cᵀ = vᵀ; Cramer's rule
    let bt = [
        [rows[0][0], rows[1][0], rows[2][0]],
        [rows[0][1], rows[1][1], rows[2][1]],
        [rows[0][2], rows[1][2], rows[2][2]],
    ];
    let d = det3(&bt);
    if d == 0 {
        return None;
    }
    let mut out = [0i128; 3];
    for k in 0..3 {
        let mut m = bt;
        for i in 0..3 {
            m[i][k] = v[i];
        }
        let n = det3(&m);
        if n % d != 0 {
            return None;
        }
        out[k] = n / d;
    }
    Some(out)
}

/// Real and complex embeddings of a cubic ring.
///
/// Places are ordered: real roots first (ascending), then one representative
/// of the complex pair (positive imaginary part).
#[derive(Clone, Debug)]
pub struct Embeddings {
    /// images of (1, ω, θ) at each place, as (re, im)
    pub basis: Vec<[(f64, f64); 3]>,
    precise: Vec<[CDd; 3]>,
    pub real_places: usize,
}

impl Embeddings {
    pub fn new(f: &BinaryCubicForm) -> Self {
        let roots = crate::forms::complex_roots(f);
        let mut basis = Vec::new();
        let mut precise = Vec::new();
        let mut real = 0;
        for &(re, im) in &roots {
            if im.abs() < 1e-300 {
                real += 1;
            }
            let alpha = dd::refine_root(f.coeffs(), (re, im));
            let (da, db) = (Dd::from_i64(f.a), Dd::from_i64(f.b));
            // ω = aα, θ = aα² + bα
            let w = alpha.scale(da);
            let t = (alpha * alpha).scale(da) + alpha.scale(db);
            let one = CDd::real(Dd::from_i64(1));
            precise.push([one, w, t]);
            basis.push([one.to_f64(), w.to_f64(), t.to_f64()]);
        }
        Embeddings { basis, precise, real_places: real }
    }

    pub fn places(&self) -> usize {
        self.basis.len()
    }

    /// Embedding of x at place i.
    pub fn eval(&self, x: &Elt, i: usize) -> (f64, f64) {
        let b = &self.precise[i];
        let mut acc = CDd::default();
        for k in 0..3 {
            acc = acc + b[k].scale(Dd::from_i64(x[k]));
        }
        acc.to_f64()
    }

    /// Upper bound on the absolute rounding error of `eval(x, i)`.
    pub fn eval_error(&self, x: &Elt, i: usize) -> f64 {
        let b = &self.basis[i];
        let mut s = 0.0;
        for k in 0..3 {
            s += (x[k] as f64).abs() * (b[k].0.abs() + b[k].1.abs());
        }
        s * 1e-26 + 1e-300
    }

    /// log|σ_i(x)| in double-double with a bound on the absolute error.
    pub fn log_abs_dd(&self, x: &Elt) -> (Vec<Dd>, f64) {
        let mut err = 0.0f64;
        let logs = (0..self.places())
            .map(|i| {
                let b = &self.precise[i];
                let mut acc = CDd::default();
                for k in 0..3 {
                    acc = acc + b[k].scale(Dd::from_i64(x[k]));
                }
                let n = acc.norm_sqr();
                let l = n.ln() * Dd::from_f64(0.5);
                err = err.max(self.eval_error(x, i) / n.hi.sqrt() + 1e-30 * (1.0 + l.hi.abs()));
                l
            })
            .collect();
        (logs, 1.01 * err)
    }

    /// log|σ_i(x)| for each place (complex places once, unweighted).
    pub fn log_abs(&self, x: &Elt) -> Vec<f64> {
        (0..self.places())
            .map(|i| {
                let (re, im) = self.eval(x, i);
                0.5 * (re * re + im * im).ln()
            })
            .collect()
    }
}
