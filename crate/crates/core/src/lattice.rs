//! LLL reduction and Fincke–Pohst enumeration for small positive definite
//! quadratic forms given by a floating point Gram matrix.

pub type Gram = [[f64; 3]; 3];

fn gram_of(u: &[[i64; 3]; 3], g: &Gram) -> Gram {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0.0;
            for k in 0..3 {
                for l in 0..3 {
                    s += u[i][k] as f64 * g[k][l] * u[j][l] as f64;
                }
            }
            out[i][j] = s;
        }
    }
    out
}

/// LLL (δ = 0.99) on the basis with Gram matrix `g`; returns the unimodular
/// change of basis U (new basis vector i = Σ_k U[i][k]·old_k).
pub fn lll(g: &Gram) -> [[i64; 3]; 3] {
    let mut u = [[1i64, 0, 0], [0, 1, 0], [0, 0, 1]];
    let mut k = 1;
    let mut iters = 0;
    while k < 3 && iters < 10_000 {
        iters += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso(&gram_of(&u, g));
            let q = mu[k][j].round();
            if q != 0.0 {
                let q = q as i64;
                for c in 0..3 {
                    u[k][c] -= q * u[j][c];
                }
            }
        }
        let (mu, bstar) = gso(&gram_of(&u, g));
        if bstar[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            k += 1;
        } else {
            u.swap(k, k - 1);
            k = if k > 1 { k - 1 } else { 1 };
        }
    }
    u
}

/// Gram–Schmidt coefficients μ and squared norms of b*.
fn gso(g: &Gram) -> ([[f64; 3]; 3], [f64; 3]) {
    let mut mu = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for i in 0..3 {
        for j in 0..i {
            let mut s = g[i][j];
            for k in 0..j {
                s -= mu[j][k] * mu[i][k] * b[k];
            }
            mu[i][j] = s / b[j];
        }
        let mut s = g[i][i];
        for k in 0..i {
            s -= mu[i][k] * mu[i][k] * b[k];
        }
        b[i] = s;
    }
    (mu, b)
}

/// All nonzero x ∈ ℤ³ with xᵀ G x ≤ bound, one of each pair ±x, passed to
/// `visit` until it returns false. Works on the given basis (reduce first for speed).
pub fn fincke_pohst<F: FnMut(&[i64; 3], f64) -> bool>(g: &Gram, bound: f64, mut visit: F) {
    // Cholesky-style decomposition: Q(x) = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)²
    let mut q = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            q[i][j] = g[i][j];
        }
    }
    for i in 0..3 {
        for j in i + 1..3 {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in i + 1..3 {
            for l in k..3 {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    if (0..3).any(|i| !(q[i][i] > 0.0)) {
        return;
    }
    let mut x = [0i64; 3];
    let mut t = [0.0f64; 3];
    let mut c = [0.0f64; 3];
    let mut ub = [0i64; 3];
    let mut i = 2usize;
    t[2] = bound;
    c[2] = 0.0;
    let init = |i: usize, t: &[f64; 3], c: &[f64; 3], x: &mut [i64; 3], ub: &mut [i64; 3]| {
        let z = (t[i] / q[i][i]).max(0.0).sqrt();
        ub[i] = (z - c[i]).floor() as i64;
        x[i] = (-z - c[i]).ceil() as i64 - 1;
    };
    init(i, &t, &c, &mut x, &mut ub);
    loop {
        x[i] += 1;
        if x[i] > ub[i] {
            if i == 2 {
                return;
            }
            i += 1;
            continue;
        }
        if i > 0 {
            let xi = x[i] as f64 + c[i];
            t[i - 1] = t[i] - q[i][i] * xi * xi;
            let mut s = 0.0;
            for j in i..3 {
                s += q[i - 1][j] * x[j] as f64;
            }
            c[i - 1] = s;
            i -= 1;
            init(i, &t, &c, &mut x, &mut ub);
            continue;
        }
        if x == [0, 0, 0] {
            // everything after is the negative of what came before
            return;
        }
        let xi = x[0] as f64 + c[0];
        let val = bound - (t[0] - q[0][0] * xi * xi);
        if !visit(&x, val) {
            return;
        }
    }
}

pub fn apply(u: &[[i64; 3]; 3], x: &[i64; 3]) -> [i64; 3] {
    // coordinates x in the reduced basis → coordinates in the old basis
    let mut out = [0i64; 3];
    for i in 0..3 {
        for c in 0..3 {
            out[c] += x[i] * u[i][c];
        }
    }
    out
}

pub fn reduced_gram(u: &[[i64; 3]; 3], g: &Gram) -> Gram {
    gram_of(u, g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(g: &Gram, x: &[i64; 3]) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += x[i] as f64 * g[i][j] * x[j] as f64;
            }
        }
        s
    }

    #[test]
    fn enumeration_matches_box_search() {
        let g: Gram = [[5.0, 2.0, 1.0], [2.0, 7.0, -3.0], [1.0, -3.0, 6.0]];
        let bound = 30.0;
        let mut found = Vec::new();
        fincke_pohst(&g, bound, |x, _| {
            found.push(*x);
            true
        });
        let mut brute = Vec::new();
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                for c in -6i64..=6 {
                    let x = [a, b, c];
                    if x != [0, 0, 0] && q(&g, &x) <= bound {
                        brute.push(x);
                    }
                }
            }
        }
        assert_eq!(found.len() * 2, brute.len());
        for x in &found {
            assert!(q(&g, x) <= bound + 1e-9);
        }
    }

    #[test]
    fn lll_shortens_skewed_basis() {
        // basis (1,0,0), (100,1,0), (357,41,1) of ℤ³ under the standard form
        let b = [[1.0, 0.0, 0.0], [100.0, 1.0, 0.0], [357.0, 41.0, 1.0]];
        let mut g = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = (0..3).map(|k| b[i][k] * b[j][k]).sum();
            }
        }
        let u = lll(&g);
        let r = reduced_gram(&u, &g);
        for i in 0..3 {
            assert!((r[i][i] - 1.0).abs() < 1e-9);
        }
    }
}
