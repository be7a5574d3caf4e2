//! Lattices of unit logarithm vectors (rank 1 or 2), grown one vector at a time.

use crate::linalg;

/// A lattice in ℝ^rank spanned by approximate vectors with absolute error
/// bounds. A vector is placed over the current basis only with a denominator
/// small enough that a chance match within the error is unlikely; anything
/// else is rejected as numerically unreliable.
#[derive(Clone, Debug)]
pub struct LogLattice {
    pub rank: usize,
    pub basis: Vec<Vec<f64>>,
    errors: Vec<f64>,
    first: Option<(Vec<f64>, f64)>,
}

const MAX_DENOM: i64 = 720;
/// Regulators of cubic fields exceed 0.28; anything much smaller is noise.
const MIN_COVOLUME: f64 = 0.05;
/// Tolerated chance of a spurious rational relation per inserted vector.
const FALSE_MATCH: f64 = 1e-4;

fn near(t: f64, tol: f64) -> bool {
    (t - t.round()).abs() <= tol + 1e-12 * t.abs().max(1.0)
}

/// Largest denominator q for which hitting `dims` coordinates within 4qδ of
/// integers by chance, summed over all q, stays below FALSE_MATCH.
fn max_denom(delta: f64, dims: i32) -> i64 {
    if delta <= 0.0 {
        return MAX_DENOM;
    }
    let q = if dims == 1 { (FALSE_MATCH / (4.0 * delta)).sqrt() } else { (3.0 * FALSE_MATCH / (64.0 * delta * delta)).cbrt() };
    (q.floor() as i64).min(MAX_DENOM)
}

/// Generator of bℤ + xℤ for b, x > 0, as (length, error, changed).
fn refine_line(b: f64, eb: f64, x: f64, ex: f64) -> Option<(f64, f64, bool)> {
    let r = x / b;
    let delta = (ex + r * eb) / b;
    for q in 1..=max_denom(delta, 1) {
        let t = r * q as f64;
        if !near(t, 4.0 * q as f64 * delta) || t.round() == 0.0 {
            continue;
        }
        let n = t.round() as i128;
        let g = linalg::xgcd(n, q as i128).0.abs();
        if g == q as i128 {
            // x already lies in bℤ; keep the sharper of the two if equal
            return (n == g && ex < eb).then_some((x, ex, false));
        }
        let (nb, e) = (b * g as f64 / q as f64, eb * g as f64 / q as f64);
        if nb < MIN_COVOLUME {
            return None;
        }
        // n = 1 means x itself generates
        return Some(if n == 1 && ex < e { (x, ex, true) } else { (nb, e, true) });
    }
    None
}

impl LogLattice {
    pub fn new(rank: usize) -> Self {
        LogLattice { rank, basis: Vec::new(), errors: Vec::new(), first: None }
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.rank
    }

    pub fn covolume(&self) -> Option<f64> {
        if !self.is_full() {
            return None;
        }
        Some(match self.rank {
            0 => 1.0,
            1 => self.basis[0][0].abs(),
            _ => (self.basis[0][0] * self.basis[1][1] - self.basis[0][1] * self.basis[1][0]).abs(),
        })
    }

    /// Add a vector known to within `err` in each coordinate; returns true
    /// if the lattice changed.
    pub fn add(&mut self, v: &[f64], err: f64) -> bool {
        let v = &v[..self.rank];
        let scale = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if scale < 1e-3 || err > 1e-3 * scale {
            return false;
        }
        match self.rank {
            0 => false,
            1 => self.add_rank1(v[0].abs(), err),
            _ => self.add_rank2(v, err),
        }
    }

    fn add_rank1(&mut self, x: f64, ex: f64) -> bool {
        if self.basis.is_empty() {
            self.basis.push(vec![x]);
            self.errors.push(ex);
            return true;
        }
        match refine_line(self.basis[0][0], self.errors[0], x, ex) {
            Some((b, e, changed)) => {
                self.basis[0][0] = b;
                self.errors[0] = e;
                changed
            }
            None => false,
        }
    }

    fn add_rank2(&mut self, v: &[f64], ev: f64) -> bool {
        if self.basis.is_empty() {
            let Some((f, ef)) = self.first.clone() else {
                self.first = Some((v.to_vec(), ev));
                return true;
            };
            let (nf, nv) = (f[0].hypot(f[1]), v[0].hypot(v[1]));
            let det = f[0] * v[1] - f[1] * v[0];
            if det.abs() <= 8.0 * (ef * nv + ev * nf) + 1e-12 * nf * nv {
                // parallel: work on the line through f
                let along = ((v[0] * f[0] + v[1] * f[1]) / nf).abs();
                return match refine_line(nf, ef, along, ev) {
                    Some((l, e, changed)) => {
                        self.first = Some((vec![f[0] * l / nf, f[1] * l / nf], e));
                        changed
                    }
                    None => false,
                };
            }
            if det.abs() < MIN_COVOLUME {
                return false;
            }
            self.basis = vec![f, v.to_vec()];
            self.errors = vec![ef, ev];
            self.reduce();
            return true;
        }
        let (b0, b1) = (&self.basis[0], &self.basis[1]);
        let det = b0[0] * b1[1] - b0[1] * b1[0];
        // v = x b0 + y b1
        let x = (v[0] * b1[1] - v[1] * b1[0]) / det;
        let y = (b0[0] * v[1] - b0[1] * v[0]) / det;
        let eb = self.errors[0].max(self.errors[1]);
        let len = b0[0].hypot(b0[1]) + b1[0].hypot(b1[1]);
        let delta = 2.0 * (ev + (x.abs() + y.abs()) * eb) * len / det.abs();
        if near(x, 4.0 * delta) && near(y, 4.0 * delta) {
            return false;
        }
        for q in 2..=max_denom(delta, 2) {
            let (qx, qy) = (x * q as f64, y * q as f64);
            let tol = 4.0 * q as f64 * delta;
            if near(qx, tol) && near(qy, tol) {
                let rows = vec![vec![q as i128, 0], vec![0, q as i128], vec![qx.round() as i128, qy.round() as i128]];
                let h = linalg::hnf(&rows, 2).expect("small lattice");
                let qf = q as f64;
                let new: Vec<Vec<f64>> = h
                    .iter()
                    .map(|r| (0..2).map(|k| (r[0] as f64 * b0[k] + r[1] as f64 * b1[k]) / qf).collect())
                    .collect();
                let errs: Vec<f64> = h
                    .iter()
                    .map(|r| ((r[0] as f64).abs() * self.errors[0] + (r[1] as f64).abs() * self.errors[1]) / qf)
                    .collect();
                let nd = (new[0][0] * new[1][1] - new[0][1] * new[1][0]).abs();
                if nd < MIN_COVOLUME {
                    return false;
                }
                self.basis = new;
                self.errors = errs;
                self.reduce();
                return true;
            }
        }
        false
    }

    /// Lagrange–Gauss reduction of a rank-2 basis.
    fn reduce(&mut self) {
        let dot = |a: &[f64], b: &[f64]| a[0] * b[0] + a[1] * b[1];
        for _ in 0..100 {
            if dot(&self.basis[0], &self.basis[0]) > dot(&self.basis[1], &self.basis[1]) {
                self.basis.swap(0, 1);
                self.errors.swap(0, 1);
            }
            let (a, b) = (self.basis[0].clone(), self.basis[1].clone());
            let m = (dot(&a, &b) / dot(&a, &a)).round();
            if m == 0.0 {
                break;
            }
            self.basis[1] = vec![b[0] - m * a[0], b[1] - m * a[1]];
            self.errors[1] += m.abs() * self.errors[0];
        }
    }
}
