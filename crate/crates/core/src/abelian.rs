//! Finite abelian groups: presentations ℤⁿ/L in Smith form, and invariants of
//! groups given by a multiplication table.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};
use crate::linalg;

fn overflow() -> Error {
    Error::Overflow("smith normal form")
}

/// ℤⁿ modulo a full-rank lattice, decomposed as ⊕ ℤ/dᵢ with d₁ | d₂ | ….
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithPresentation {
    pub divisors: Vec<i128>,
    /// x ↦ (x·V)ᵢ mod dᵢ; columns of V for the nontrivial divisors only
    pub v: Vec<Vec<i128>>,
    /// generator i as a vector of ℤⁿ
    pub gens: Vec<Vec<i128>>,
}

impl SmithPresentation {
    /// Quotient of ℤⁿ by the row lattice of `rows`. Fails if the lattice is
    /// not of full rank.
    pub fn new(rows: &[Vec<i128>], n: usize) -> Result<Self> {
        let h = linalg::hnf(rows, n)?;
        if h.len() < n {
            return Err(Error::Certification { disc: 0, reason: "relation lattice not of full rank".into() });
        }
        let mut a = h;
        let mut v = identity(n);
        let mut vinv = identity(n);
        for t in 0..n {
            loop {
                let mut best: Option<(usize, usize, i128)> = None;
                for (i, row) in a.iter().enumerate().skip(t) {
                    for (j, &x) in row.iter().enumerate().skip(t) {
                        if x != 0 && best.map_or(true, |(_, _, b)| x.abs() < b) {
                            best = Some((i, j, x.abs()));
                        }
                    }
                }
                let (pi, pj, _) = best.expect("full rank");
                a.swap(t, pi);
                if pj != t {
                    for row in a.iter_mut() {
                        row.swap(t, pj);
                    }
                    for row in v.iter_mut() {
                        row.swap(t, pj);
                    }
                    vinv.swap(t, pj);
                }
                let p = a[t][t];
                let mut clean = true;
                for i in t + 1..n {
                    let q = a[i][t].div_euclid(p);
                    if q != 0 {
                        for j in t..n {
                            a[i][j] = a[i][j].checked_sub(q.checked_mul(a[t][j]).ok_or_else(overflow)?).ok_or_else(overflow)?;
                        }
                    }
                    clean &= a[i][t] == 0;
                }
                for j in t + 1..n {
                    let q = a[t][j].div_euclid(p);
                    if q != 0 {
                        col_sub(&mut a, &mut v, &mut vinv, j, t, q)?;
                    }
                    clean &= a[t][j] == 0;
                }
                if clean {
                    break;
                }
            }
            if a[t][t] < 0 {
                a[t][t] = -a[t][t];
                for row in v.iter_mut() {
                    row[t] = -row[t];
                }
                for x in vinv[t].iter_mut() {
                    *x = -*x;
                }
            }
        }
        let mut d: Vec<i128> = (0..n).map(|i| a[i][i]).collect();
        // enforce the divisor chain with 2×2 moves on the diagonal
        for i in 0..n {
            for j in i + 1..n {
                if d[j] % d[i] == 0 {
                    continue;
                }
                let (g, s, t) = linalg::xgcd(d[i], d[j]);
                let x = t * d[j] / g;
                let y = s * d[i] / g;
                // new col i = col i + col j, new col j = −x col i + y col j
                for row in v.iter_mut() {
                    let (ci, cj) = (row[i], row[j]);
                    row[i] = ci.checked_add(cj).ok_or_else(overflow)?;
                    row[j] = y.checked_mul(cj).and_then(|u| x.checked_mul(ci).and_then(|w| u.checked_sub(w))).ok_or_else(overflow)?;
                }
                let (ri, rj) = (vinv[i].clone(), vinv[j].clone());
                for k in 0..n {
                    vinv[i][k] = y.checked_mul(ri[k]).and_then(|u| x.checked_mul(rj[k]).and_then(|w| u.checked_add(w))).ok_or_else(overflow)?;
                    vinv[j][k] = rj[k] - ri[k];
                }
                let l = d[i] / g * d[j];
                d[i] = g;
                d[j] = l;
                for row in v.iter_mut() {
                    row[i] = row[i].rem_euclid(d[i]);
                    row[j] = row[j].rem_euclid(d[j]);
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&i| d[i] != 1).collect();
        let mut order: Vec<usize> = keep.clone();
        order.sort_by_key(|&i| d[i]);
        let divisors: Vec<i128> = order.iter().map(|&i| d[i]).collect();
        let vcols: Vec<Vec<i128>> = order.iter().map(|&i| v.iter().map(|row| row[i].rem_euclid(d[i])).collect()).collect();
        let gens: Vec<Vec<i128>> = order.iter().map(|&i| vinv[i].clone()).collect();
        Ok(SmithPresentation { divisors, v: vcols, gens })
    }

    pub fn order(&self) -> i128 {
        self.divisors.iter().product()
    }

    /// Coordinates of x ∈ ℤⁿ with respect to the generators.
    pub fn dlog(&self, x: &[i128]) -> Vec<i128> {
        self.v
            .iter()
            .zip(&self.divisors)
            .map(|(col, &d)| {
                let mut s = 0i128;
                for (a, b) in x.iter().zip(col) {
                    s = (s + (a.rem_euclid(d)) * b).rem_euclid(d);
                }
                s
            })
            .collect()
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i128).collect()).collect()
}

/// col j −= q·col t on A and V; the inverse row operation on V⁻¹.
fn col_sub(a: &mut [Vec<i128>], v: &mut [Vec<i128>], vinv: &mut [Vec<i128>], j: usize, t: usize, q: i128) -> Result<()> {
    for row in a.iter_mut() {
        row[j] = row[j].checked_sub(q.checked_mul(row[t]).ok_or_else(overflow)?).ok_or_else(overflow)?;
    }
    for row in v.iter_mut() {
        row[j] = row[j].checked_sub(q.checked_mul(row[t]).ok_or_else(overflow)?).ok_or_else(overflow)?;
    }
    let rj = vinv[j].clone();
    for (x, y) in vinv[t].iter_mut().zip(rj) {
        *x = x.checked_add(q.checked_mul(y).ok_or_else(overflow)?).ok_or_else(overflow)?;
    }
    Ok(())
}

/// Invariant factors of a finite abelian group given by its element orders'
/// counting data: `count_dividing(k)` = #{g : g^k = 1}.
pub fn invariants_from_torsion_counts(order: u64, count_dividing: impl Fn(u64) -> u64) -> Vec<u64> {
    // per prime: number of cyclic factors of order ≥ p^i is log_p |G[p^i]| − log_p |G[p^{i−1}]|
    let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (p, e) in arith::factor(order) {
        let mut ranks = Vec::new();
        let mut prev = 0u32;
        for i in 1..=e {
            let c = count_dividing(p.pow(i));
            let lg = ilog(c, p);
            ranks.push(lg - prev);
            prev = lg;
        }
        // ranks[i-1] = #factors with exponent ≥ i
        let mut exps = Vec::new();
        for i in 0..ranks.len() {
            let ge = ranks[i];
            let gt = if i + 1 < ranks.len() { ranks[i + 1] } else { 0 };
            for _ in 0..(ge - gt) {
                exps.push(i as u32 + 1);
            }
        }
        primary.insert(p, exps);
    }
    let width = primary.values().map(|v| v.len()).max().unwrap_or(0);
    let mut divs = vec![1u64; width];
    for (p, mut exps) in primary {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (k, e) in exps.into_iter().enumerate() {
            divs[width - 1 - k] *= p.pow(e);
        }
    }
    divs.into_iter().filter(|&d| d > 1).collect()
}

fn ilog(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        assert!(n % p == 0, "group torsion count is not a prime power");
        n /= p;
        k += 1;
    }
    k
}

/// A finite abelian group given by a Cayley table on elements 0..n (0 = identity).
pub struct TableGroup {
    pub table: Vec<Vec<usize>>,
}

impl TableGroup {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn power(&self, g: usize, k: u64) -> usize {
        let mut acc = 0;
        for _ in 0..k {
            acc = self.table[acc][g];
        }
        acc
    }

    pub fn invariants(&self) -> Vec<u64> {
        let n = self.order() as u64;
        invariants_from_torsion_counts(n, |k| (0..self.order()).filter(|&g| self.power(g, k) == 0).count() as u64)
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut elems = vec![0usize];
        let mut i = 0;
        while i < elems.len() {
            let x = elems[i];
            for &g in gens {
                let y = self.table[x][g];
                if !inside[y] {
                    inside[y] = true;
                    elems.push(y);
                }
            }
            i += 1;
        }
        elems.sort_unstable();
        elems
    }

    /// The quotient by a subgroup.
    pub fn quotient(&self, sub: &[usize]) -> TableGroup {
        let n = self.order();
        let mut coset = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in 0..n {
            if coset[g] == usize::MAX {
                let id = reps.len();
                reps.push(g);
                for &h in sub {
                    coset[self.table[g][h]] = id;
                }
            }
        }
        let table = reps.iter().map(|&x| reps.iter().map(|&y| coset[self.table[x][y]]).collect()).collect();
        TableGroup { table }
    }
}

/// Group data as reported: invariant factors in increasing divisibility order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupData {
    pub elementary_divisors: Vec<u64>,
}

impl AbelianGroupData {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn order(&self) -> u64 {
        self.elementary_divisors.iter().product()
    }

    /// |G[2]|.
    pub fn two_torsion_card(&self) -> u64 {
        two_torsion_card(&self.elementary_divisors)
    }

    pub fn two_rank(&self) -> u32 {
        self.elementary_divisors.iter().filter(|d| *d % 2 == 0).count() as u32
    }
}

pub fn two_torsion_card(divisors: &[u64]) -> u64 {
    1u64 << divisors.iter().filter(|d| *d % 2 == 0).count()
}

/// Normalize a list of cyclic orders to the divisor chain.
pub fn normalize(orders: &[u64]) -> Vec<u64> {
    let mut d: Vec<u64> = orders.to_vec();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i] / g * d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d.into_iter().filter(|&x| x > 1).collect()
}
