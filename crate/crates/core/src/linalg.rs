//! Small dense linear algebra over ℤ, 𝔽_p and 𝔽_2.
//!
//! Matrices here are tiny (at most a few dozen columns), so everything is
//! row-based `Vec<Vec<_>>` with `i128` entries and checked arithmetic where
//! growth is possible.

use num_integer::Integer;

use crate::error::{Error, Result};

fn overflow() -> Error {
    Error::Overflow("integer matrix reduction")
}

/// Extended gcd on i128: returns (g, s, t) with g = s*a + t*b, g >= 0.
pub fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`
/// (each of length `n`). Returns the nonzero rows, upper triangular with
/// positive pivots and entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(rows: &[Vec<i128>], n: usize) -> Result<Vec<Vec<i128>>> {
    let mut basis: Vec<Option<Vec<i128>>> = vec![None; n];
    for r in rows {
        insert_row(&mut basis, r.clone(), None)?;
    }
    Ok(finish(basis))
}

/// HNF of a lattice known to contain `modulus`·ℤⁿ; entries stay below the modulus.
pub fn hnf_mod(rows: &[Vec<i128>], n: usize, modulus: i128) -> Result<Vec<Vec<i128>>> {
    assert!(modulus > 0);
    let mut basis: Vec<Option<Vec<i128>>> = vec![None; n];
    for i in 0..n {
        let mut e = vec![0i128; n];
        e[i] = modulus;
        insert_row(&mut basis, e, Some(modulus))?;
    }
    for r in rows {
        let v: Vec<i128> = r.iter().map(|x| x.rem_euclid(modulus)).collect();
        insert_row(&mut basis, v, Some(modulus))?;
    }
    Ok(finish(basis))
}

fn finish(basis: Vec<Option<Vec<i128>>>) -> Vec<Vec<i128>> {
    let mut out: Vec<Vec<i128>> = basis.into_iter().flatten().collect();
    // reduce entries above pivots
    for i in 0..out.len() {
        let piv = out[i].iter().position(|&x| x != 0).unwrap();
        let pv = out[i][piv];
        for j in 0..i {
            let q = out[j][piv].div_euclid(pv);
            if q != 0 {
                let (head, tail) = out.split_at_mut(i);
                for (x, y) in head[j].iter_mut().zip(tail[0].iter()) {
                    *x -= q * y;
                }
            }
        }
    }
    out
}

fn insert_row(basis: &mut [Option<Vec<i128>>], mut v: Vec<i128>, modulus: Option<i128>) -> Result<()> {
    let n = basis.len();
    let mut col = 0;
    while col < n {
        if v[col] == 0 {
            col += 1;
            continue;
        }
        match basis[col].take() {
            None => {
                if v[col] < 0 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
                if let Some(m) = modulus {
                    v.iter_mut().for_each(|x| *x = x.rem_euclid(m));
                    if v[col] == 0 {
                        v[col] = m;
                    }
                }
                basis[col] = Some(v);
                return Ok(());
            }
            Some(b) => {
                let (g, s, t) = xgcd(b[col], v[col]);
                let (bq, vq) = (b[col] / g, v[col] / g);
                let mut nb = vec![0i128; n];
                let mut nv = vec![0i128; n];
                for k in col..n {
                    nb[k] = s
                        .checked_mul(b[k])
                        .and_then(|x| t.checked_mul(v[k]).and_then(|y| x.checked_add(y)))
                        .ok_or_else(overflow)?;
                    nv[k] = vq
                        .checked_mul(b[k])
                        .and_then(|x| bq.checked_mul(v[k]).and_then(|y| x.checked_sub(y)))
                        .ok_or_else(overflow)?;
                }
                if let Some(m) = modulus {
                    for k in col..n {
                        nb[k] = nb[k].rem_euclid(m);
                        nv[k] = nv[k].rem_euclid(m);
                    }
                    if nb[col] == 0 {
                        nb[col] = m;
                    }
                }
                basis[col] = Some(nb);
                v = nv;
                col += 1;
            }
        }
    }
    Ok(())
}

/// Elementary divisors (d₁ | d₂ | …, all > 1 omitted when equal to 1) of
/// ℤⁿ / (row lattice). Zero divisors denote free factors.
pub fn smith_divisors(rows: &[Vec<i128>], n: usize) -> Result<Vec<i128>> {
    let h = hnf(rows, n)?;
    let mut m: Vec<Vec<i128>> = h;
    // pad to square with zero rows for free part
    let rank = m.len();
    let mut divs = diagonalize(&mut m, n)?;
    divs.extend(std::iter::repeat(0).take(n - rank));
    normalize_divisors(divs)
}

/// Same as [`smith_divisors`] for a full-rank lattice containing `modulus`·ℤⁿ.
pub fn smith_divisors_mod(rows: &[Vec<i128>], n: usize, modulus: i128) -> Result<Vec<i128>> {
    let mut m = hnf_mod(rows, n, modulus)?;
    let divs = diagonalize(&mut m, n)?;
    normalize_divisors(divs)
}

fn diagonalize(m: &mut Vec<Vec<i128>>, ncols: usize) -> Result<Vec<i128>> {
    let nrows = m.len();
    let k = nrows.min(ncols);
    for t in 0..k {
        loop {
            // find pivot: smallest nonzero |entry| in the remaining block
            let mut best: Option<(usize, usize, i128)> = None;
            for (i, row) in m.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 && best.map_or(true, |(_, _, b)| x.abs() < b) {
                        best = Some((i, j, x.abs()));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                return Ok((0..t).map(|i| m[i][i]).collect());
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t];
            let mut clean = true;
            for i in t + 1..nrows {
                let q = m[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..ncols {
                        m[i][j] = m[i][j].checked_sub(q.checked_mul(m[t][j]).ok_or_else(overflow)?).ok_or_else(overflow)?;
                    }
                }
                if m[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..ncols {
                let q = m[t][j].div_euclid(p);
                if q != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] = row[j].checked_sub(q.checked_mul(row[t]).ok_or_else(overflow)?).ok_or_else(overflow)?;
                    }
                }
                if m[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
    }
    Ok((0..k).map(|i| m[i][i]).collect())
}

fn normalize_divisors(divs: Vec<i128>) -> Result<Vec<i128>> {
    // turn a diagonal into the divisor chain via pairwise gcd/lcm
    let mut d: Vec<i128> = divs.into_iter().map(|x| x.abs()).collect();
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (d[i], d[j]);
            if a == 0 && b == 0 {
                continue;
            }
            let g = a.gcd(&b);
            let l = if a == 0 || b == 0 { 0 } else { (a / g).checked_mul(b).ok_or_else(overflow)? };
            d[i] = g;
            d[j] = l;
        }
    }
    Ok(d.into_iter().filter(|&x| x != 1).collect())
}

/// Determinant of a square i128 matrix by fraction-free elimination.
pub fn det(m: &[Vec<i128>]) -> Result<i128> {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r][k] != 0) else { return Ok(0) };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j]
                    .checked_mul(a[k][k])
                    .and_then(|x| a[i][k].checked_mul(a[k][j]).and_then(|y| x.checked_sub(y)))
                    .ok_or_else(overflow)?;
                a[i][j] = v / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Ok(sign * a[n - 1][n - 1])
}

// ---------------------------------------------------------------------------
// 𝔽_p

pub fn inv_mod(a: i64, p: i64) -> i64 {
    let (g, s, _) = xgcd(a.rem_euclid(p) as i128, p as i128);
    debug_assert_eq!(g, 1);
    (s.rem_euclid(p as i128)) as i64
}

/// Reduced row echelon form over 𝔽_p in place; returns pivot columns.
pub fn rref_mod(m: &mut [Vec<i64>], p: i64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c].rem_euclid(p) != 0) else { continue };
        m.swap(r, pr);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = (*x * inv).rem_euclid(p);
        }
        for i in 0..rows {
            if i != r {
                let f = m[i][c].rem_euclid(p);
                if f != 0 {
                    for j in 0..cols {
                        m[i][j] = (m[i][j] - f * m[r][j]).rem_euclid(p);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_mod(m: &[Vec<i64>], p: i64) -> usize {
    let mut a = m.to_vec();
    rref_mod(&mut a, p).len()
}

/// Basis of the right kernel {x : M x = 0} over 𝔽_p, M given as rows.
pub fn kernel_mod(m: &[Vec<i64>], ncols: usize, p: i64) -> Vec<Vec<i64>> {
    let mut a = m.to_vec();
    let pivots = rref_mod(&mut a, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0i64; ncols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (-a[i][f]).rem_euclid(p);
            }
            v
        })
        .collect()
}

// ---------------------------------------------------------------------------
// 𝔽_2 with bit-packed rows

/// Rank over 𝔽_2 of rows given as `u128` bitmasks (≤ 128 columns).
pub fn rank_f2(rows: &[u128]) -> usize {
    let mut basis: Vec<u128> = Vec::new();
    for &r in rows {
        let mut v = r;
        for &b in &basis {
            let hb = 127 - b.leading_zeros();
            if v >> hb & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Indices of a maximal 𝔽_2-independent subset of `rows`, greedy in order.
pub fn independent_subset_f2(rows: &[u128]) -> Vec<usize> {
    let mut basis: Vec<u128> = Vec::new();
    let mut out = Vec::new();
    for (i, &r) in rows.iter().enumerate() {
        let mut v = r;
        for &b in &basis {
            let hb = 127 - b.leading_zeros();
            if v >> hb & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
            out.push(i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_simple_lattice() {
        let h = hnf(&[vec![2, 4], vec![3, 1]], 2).unwrap();
        assert_eq!(det(&h).unwrap().abs(), 10);
        assert_eq!(h[0][0], 1);
    }

    #[test]
    fn hnf_mod_matches_plain() {
        let rows = vec![vec![6, 4, 2], vec![0, 3, 9], vec![5, 5, 5]];
        let d = det(&rows).unwrap().abs();
        assert_eq!(hnf(&rows, 3).unwrap(), hnf_mod(&rows, 3, d).unwrap());
    }

    #[test]
    fn smith_of_diagonal() {
        let rows = vec![vec![2, 0], vec![0, 4]];
        assert_eq!(smith_divisors(&rows, 2).unwrap(), vec![2, 4]);
        let rows = vec![vec![2, 0], vec![0, 3]];
        assert_eq!(smith_divisors(&rows, 2).unwrap(), vec![6]);
        let rows = vec![vec![2, 0, 0]];
        assert_eq!(smith_divisors(&rows, 3).unwrap(), vec![2, 0, 0]);
    }

    #[test]
    fn kernel_over_fp() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6]];
        let k = kernel_mod(&m, 3, 7);
        assert_eq!(k.len(), 2);
        for v in k {
            assert_eq!((v[0] + 2 * v[1] + 3 * v[2]) % 7, 0);
        }
    }

    #[test]
    fn f2_rank() {
        assert_eq!(rank_f2(&[0b011, 0b101, 0b110]), 2);
        assert_eq!(independent_subset_f2(&[0, 0b1, 0b1, 0b10]), vec![1, 3]);
    }
}
