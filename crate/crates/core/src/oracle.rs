//! Unconditional class group computation for small discriminants.
//!
//! Every class contains an integral ideal of norm at most the Minkowski
//! bound, so the classes are found by listing those ideals and sorting them
//! with an exact principality test. An ideal I of norm N is principal iff it
//! has an element of norm ±N. Multiplying by units moves the logarithmic
//! embedding of such an element into any fundamental domain of the unit
//! lattice, so it suffices to enumerate, in each of finitely many windows
//! covering that domain, the elements of I that are short for the form
//! Σ d_i e^{-2c_i} |σ_i(x)|².
//!
//! Far from the origin such elements are huge. Each window center c is
//! therefore paired with a reduced fractional ideal γ⁻¹O where log|σ(γ)| is
//! close to c; only the logarithms and signs of γ are kept, and the search
//! runs in γ⁻¹I near the origin. The unit lattice comes from an outward walk
//! over the trace zero hyperplane that stops once the walked region contains
//! a fundamental domain of the units found so far.

use std::collections::HashMap;

use crate::abelian::{AbelianGroupData, TableGroup};
use crate::arith;
use crate::error::{Error, Result};
use crate::ideals::{self, IdealHNF, PrimeIdeal};
use crate::lattice;
use crate::numfield::NumberField;
use crate::ring::Elt;
use crate::units::LogLattice;

pub const DEFAULT_THRESHOLD: u64 = 20_000;

/// Every point of a window lies within this sup-distance of its center.
const DELTA: f64 = 0.5;
const MAX_WALK: i64 = 2_000;

/// γ⁻¹O with the logarithms and signs of γ.
#[derive(Clone, Debug)]
struct State {
    ideal: IdealHNF,
    logs: Vec<f64>,
    signs: u128,
}

pub struct Oracle {
    field: NumberField,
    /// unit lattice basis as full log vectors (one entry per place)
    unit_basis: Vec<Vec<f64>>,
    /// echelon basis of the signs of units (−1 included)
    sign_echelon: Vec<u128>,
    windows: Vec<(Vec<f64>, State)>,
    primes: Vec<PrimeIdeal>,
    reps: Vec<IdealHNF>,
    /// N(I)·I⁻¹ for each representative
    conj: Vec<IdealHNF>,
    cl: TableGroup,
    narrow: TableGroup,
    cosets: Vec<u128>,
}

impl Oracle {
    pub fn new(field: NumberField, threshold: u64) -> Result<Oracle> {
        if field.disc.unsigned_abs() > threshold {
            return Err(Error::ResourceLimit { disc: field.disc, threshold: threshold as i64 });
        }
        let mut o = Oracle {
            field,
            unit_basis: Vec::new(),
            sign_echelon: Vec::new(),
            windows: Vec::new(),
            primes: Vec::new(),
            reps: Vec::new(),
            conj: Vec::new(),
            cl: TableGroup { table: vec![vec![0]] },
            narrow: TableGroup { table: vec![vec![0]] },
            cosets: vec![0],
        };
        o.walk_units()?;
        o.windows = o.window_states();
        o.find_classes()?;
        o.build_tables()?;
        Ok(o)
    }

    pub fn class_group(&self) -> AbelianGroupData {
        AbelianGroupData { elementary_divisors: self.cl.invariants() }
    }

    pub fn narrow_class_group(&self) -> AbelianGroupData {
        AbelianGroupData { elementary_divisors: self.narrow.invariants() }
    }

    /// Dimension over 𝔽₂ of the image of the units in the sign vectors.
    pub fn unit_sign_rank(&self) -> usize {
        self.sign_echelon.len()
    }

    /// Regulator of the unit lattice found by the walk.
    pub fn regulator(&self) -> f64 {
        let d = |v: &[f64]| -> Vec<f64> { (0..v.len()).map(|i| self.field.place_degree(i) * v[i]).collect() };
        match self.unit_basis.len() {
            1 => d(&self.unit_basis[0])[0].abs(),
            _ => {
                let (a, b) = (d(&self.unit_basis[0]), d(&self.unit_basis[1]));
                (a[0] * b[1] - a[1] * b[0]).abs()
            }
        }
    }

    /// Quotient by the classes of the primes above `s`.
    pub fn s_quotient(&self, s: &[u64], narrow: bool) -> Result<AbelianGroupData> {
        let mut gens = Vec::new();
        for &p in s {
            for q in ideals::primes_above(&self.field.ring, p) {
                let (l, signs) = self.classify(&q.hnf).ok_or_else(|| self.fail("prime above S has no class"))?;
                gens.push(if narrow { self.narrow_index(l, signs) } else { l });
            }
        }
        let g = if narrow { &self.narrow } else { &self.cl };
        let q = g.quotient(&g.subgroup(&gens));
        Ok(AbelianGroupData { elementary_divisors: q.invariants() })
    }

    fn fail(&self, reason: &str) -> Error {
        Error::Certification { disc: self.field.disc, reason: reason.to_string() }
    }

    /// Full log vector of a point given by its first `rank` coordinates
    /// (d_i·log|σ_i| for i < rank).
    fn full(&self, v: &[f64]) -> Vec<f64> {
        match self.field.unit_rank() {
            1 => vec![v[0], -v[0] / 2.0],
            _ => vec![v[0], v[1], -v[0] - v[1]],
        }
    }

    fn sup(v: &[f64]) -> f64 {
        v.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    fn combine(basis: &[Elt; 3], x: &[i64; 3]) -> Elt {
        let mut e = [0i64; 3];
        for k in 0..3 {
            for l in 0..3 {
                e[l] += x[k] * basis[k][l];
            }
        }
        e
    }

    /// Elements y of the numerator lattice of `ideal` with log|σ(y)| within
    /// DELTA of `center`, up to sign; `visit` returns true to stop.
    fn search<F: FnMut(&Elt) -> bool>(&self, ideal: &IdealHNF, center: &[f64], mut visit: F) -> bool {
        let weights: Vec<f64> = center.iter().map(|c| (-2.0 * c).exp()).collect();
        let (basis, g) = self.field.reduced_basis(ideal, &weights);
        let bound = 3.0 * (2.0 * DELTA).exp() * (1.0 + 1e-6);
        let mut stop = false;
        lattice::fincke_pohst(&g, bound, |x, _| {
            stop = visit(&Self::combine(&basis, x));
            !stop
        });
        stop
    }

    /// Center for the numerator lattice of γ⁻¹·I when looking for elements
    /// of I near `c` (shifted by log N(I)/3).
    fn local_center(c: &[f64], shift: f64, st: &State, den: i64) -> Vec<f64> {
        let ld = (den as f64).ln();
        c.iter().zip(&st.logs).map(|(ci, li)| ci + shift - li + ld).collect()
    }

    /// Move a state so that its logarithms sit near `c`.
    fn advance(&self, st: &State, c: &[f64]) -> State {
        let ring = &self.field.ring;
        let den = st.ideal.denominator;
        let center = Self::local_center(c, 0.0, st, den);
        let weights: Vec<f64> = center.iter().map(|x| (-2.0 * x).exp()).collect();
        let (basis, _) = self.field.reduced_basis(&st.ideal, &weights);
        let y = basis[0];
        // y' = N(y)/y
        let (s1, s2, n) = ring.char_poly(&y);
        let y2 = ring.mul(&y, &y);
        let yp: Elt = std::array::from_fn(|k| {
            let v = y2[k] as i128 - s1 * y[k] as i128 + if k == 0 { s2 } else { 0 };
            i64::try_from(v).expect("walk element fits")
        });
        let numer = IdealHNF { rows: st.ideal.rows, denominator: 1 }.mul(&IdealHNF::principal(ring, &yp), ring);
        let ideal = IdealHNF { rows: numer.rows, denominator: i64::try_from(n.abs()).expect("norm fits") }.normalize();
        let ly = self.field.logs(&y);
        let ld = (den as f64).ln();
        let logs = st.logs.iter().zip(&ly).map(|(a, b)| a + b - ld).collect();
        State { ideal, logs, signs: st.signs ^ self.field.sign_bits(&y) }
    }

    fn origin(&self) -> State {
        State { ideal: IdealHNF::unit(), logs: vec![0.0; self.field.places()], signs: 0 }
    }

    fn walk_units(&mut self) -> Result<()> {
        let rank = self.field.unit_rank();
        let r1 = self.field.r1();
        let mut lat = LogLattice::new(rank);
        let mut signs = vec![(1u128 << r1) - 1];
        // grid spacing in the free coordinates keeping every point within DELTA
        let step = if rank == 1 { 2.0 * DELTA } else { DELTA };
        let mut states: HashMap<(i64, i64), State> = HashMap::new();
        for k in 0..MAX_WALK {
            let mut ring: Vec<(i64, i64)> = Vec::new();
            if rank == 1 {
                ring.push((k, 0));
                if k > 0 {
                    ring.push((-k, 0));
                }
            } else {
                for i in -k..=k {
                    for j in -k..=k {
                        if i.abs().max(j.abs()) == k {
                            ring.push((i, j));
                        }
                    }
                }
            }
            for (i, j) in ring {
                let p: Vec<f64> = if rank == 1 { vec![i as f64 * step] } else { vec![i as f64 * step, j as f64 * step] };
                let c = self.full(&p);
                let st = if k == 0 {
                    self.origin()
                } else {
                    let back = |x: i64| if x.abs() == k { x - x.signum() } else { x };
                    let prev = &states[&(back(i), back(j))];
                    self.advance(prev, &c)
                };
                let den = st.ideal.denominator;
                let target = st.ideal.norm() as i128;
                let center = Self::local_center(&c, 0.0, &st, den);
                let ld = (den as f64).ln();
                self.search(&st.ideal, &center, |y| {
                    if self.field.norm(y).abs() == target {
                        let l = self.field.logs(y);
                        let v: Vec<f64> =
                            (0..rank).map(|t| self.field.place_degree(t) * (l[t] - ld + st.logs[t])).collect();
                        // each walk step adds a rounding error well below 1e-12
                        lat.add(&v, 1e-11 * (k as f64 + 1.0));
                        signs.push(self.field.sign_bits(y) ^ st.signs);
                    }
                    false
                });
                states.insert((i, j), st);
            }
            if lat.is_full() {
                let rho: f64 = lat.basis.iter().map(|b| Self::sup(b)).sum::<f64>() / 2.0;
                if (k as f64 + 0.5) * step >= rho {
                    self.unit_basis = lat.basis.iter().map(|b| self.full(b)).collect();
                    self.sign_echelon = echelon(&signs);
                    return Ok(());
                }
            }
        }
        Err(self.fail("unit walk did not close"))
    }

    /// Window centers covering a fundamental domain of the units, each with
    /// a state reached from a neighbouring window.
    fn window_states(&self) -> Vec<(Vec<f64>, State)> {
        let rank = self.unit_basis.len();
        let m: Vec<usize> =
            self.unit_basis.iter().map(|w| ((rank as f64 * Self::sup(w)) / (2.0 * DELTA)).ceil().max(1.0) as usize).collect();
        let places = self.field.places();
        let mut out: Vec<(Vec<f64>, State)> = Vec::new();
        let mut idx = vec![0usize; rank];
        loop {
            let mut c = vec![0.0; places];
            for j in 0..rank {
                let t = (idx[j] as f64 + 0.5) / m[j] as f64;
                for (ci, wi) in c.iter_mut().zip(&self.unit_basis[j]) {
                    *ci += t * wi;
                }
            }
            // neighbour: previous in the first coordinate, else in the second
            let prev = if idx[0] > 0 {
                out[out.len() - 1].1.clone()
            } else if rank == 2 && idx[1] > 0 {
                out[out.len() - m[0]].1.clone()
            } else {
                self.origin()
            };
            let st = self.advance(&prev, &c);
            out.push((c, st));
            let mut j = 0;
            loop {
                if j == rank {
                    return out;
                }
                idx[j] += 1;
                if idx[j] < m[j] {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
        }
    }

    /// Signs of a generator of the integral ideal, if it is principal.
    pub fn generator_signs(&self, ideal: &IdealHNF) -> Option<u128> {
        let shift = (ideal.norm() as f64).ln() / 3.0;
        let ring = &self.field.ring;
        for (c, st) in &self.windows {
            let k = st.ideal.mul(ideal, ring);
            let target = k.norm() as i128;
            let center = Self::local_center(c, shift, st, k.denominator);
            let mut found = None;
            let hit = self.search(&k, &center, |y| {
                if self.field.norm(y).abs() == target {
                    found = Some(self.field.sign_bits(y) ^ st.signs);
                    true
                } else {
                    false
                }
            });
            if hit {
                return found;
            }
        }
        None
    }

    /// Representative index l and the signs of β with I·N(I_l)·I_l⁻¹ = (β).
    fn classify(&self, ideal: &IdealHNF) -> Option<(usize, u128)> {
        for (l, c) in self.conj.iter().enumerate() {
            let prod = ideal.mul(c, &self.field.ring);
            if let Some(signs) = self.generator_signs(&prod) {
                return Some((l, signs));
            }
        }
        None
    }

    fn conjugate(&self, exps: &[u32]) -> IdealHNF {
        let ring = &self.field.ring;
        let mut acc = IdealHNF::unit();
        for (i, q) in self.primes.iter().enumerate() {
            // N(J)·J⁻¹ has exponent e_Q·m_p − k_Q at Q, m_p the p-part of N(J)
            let m_p: u32 = self.primes.iter().zip(exps).filter(|(r, _)| r.p == q.p).map(|(r, &k)| r.f * k).sum();
            let e = q.e * m_p - exps[i];
            if e > 0 {
                acc = acc.mul(&q.hnf.pow(e, ring), ring);
            }
        }
        acc
    }

    fn find_classes(&mut self) -> Result<()> {
        let bound = self.field.minkowski_bound().floor() as u64;
        for p in arith::primes_up_to(bound) {
            self.primes.extend(ideals::primes_above(&self.field.ring, p));
        }
        let mut list: Vec<(u64, Vec<u32>)> = Vec::new();
        let mut exps = vec![0u32; self.primes.len()];
        ideal_vectors(&self.primes, bound, 0, 1, &mut exps, &mut list);
        list.sort();
        self.reps.push(IdealHNF::unit());
        self.conj.push(IdealHNF::unit());
        let ring = self.field.ring.clone();
        for (norm, e) in list {
            if norm == 1 {
                continue;
            }
            let mut ideal = IdealHNF::unit();
            for (q, &k) in self.primes.iter().zip(&e) {
                if k > 0 {
                    ideal = ideal.mul(&q.hnf.pow(k, &ring), &ring);
                }
            }
            if self.classify(&ideal).is_none() {
                let c = self.conjugate(&e);
                self.reps.push(ideal);
                self.conj.push(c);
            }
        }
        Ok(())
    }

    fn reduce_signs(&self, mut s: u128) -> u128 {
        for &b in &self.sign_echelon {
            let top = 127 - b.leading_zeros();
            if (s >> top) & 1 == 1 {
                s ^= b;
            }
        }
        s
    }

    fn narrow_index(&self, class: usize, signs: u128) -> usize {
        let s = self.reduce_signs(signs);
        class * self.cosets.len() + self.cosets.iter().position(|&c| c == s).unwrap()
    }

    fn build_tables(&mut self) -> Result<()> {
        let r1 = self.field.r1();
        self.cosets = (0..1u128 << r1).filter(|&s| self.reduce_signs(s) == s).collect();
        let h = self.reps.len();
        let nv = self.cosets.len();
        let ring = self.field.ring.clone();
        let mut cl = vec![vec![0usize; h]; h];
        let mut narrow = vec![vec![0usize; h * nv]; h * nv];
        for j in 0..h {
            for k in j..h {
                let prod = self.reps[j].mul(&self.reps[k], &ring);
                let (l, sb) = self.classify(&prod).ok_or_else(|| self.fail("product of representatives has no class"))?;
                cl[j][k] = l;
                cl[k][j] = l;
                for (a, &sa) in self.cosets.iter().enumerate() {
                    for (b, &sbb) in self.cosets.iter().enumerate() {
                        let x = self.narrow_index(l, sa ^ sbb ^ sb);
                        narrow[j * nv + a][k * nv + b] = x;
                        narrow[k * nv + b][j * nv + a] = x;
                    }
                }
            }
        }
        self.cl = TableGroup { table: cl };
        self.narrow = TableGroup { table: narrow };
        Ok(())
    }
}

/// Exponent vectors of the integral ideals of norm ≤ bound.
fn ideal_vectors(primes: &[PrimeIdeal], bound: u64, i: usize, norm: u64, exps: &mut Vec<u32>, out: &mut Vec<(u64, Vec<u32>)>) {
    if i == primes.len() {
        out.push((norm, exps.clone()));
        return;
    }
    let q = primes[i].norm();
    let mut n = norm;
    let mut k = 0;
    loop {
        exps[i] = k;
        ideal_vectors(primes, bound, i + 1, n, exps, out);
        n *= q;
        if n > bound {
            break;
        }
        k += 1;
    }
    exps[i] = 0;
}

/// Echelon basis (distinct leading bits, descending) of the 𝔽₂-span.
fn echelon(vs: &[u128]) -> Vec<u128> {
    let mut by_top = [0u128; 128];
    for &v in vs {
        let mut x = v;
        while x != 0 {
            let top = (127 - x.leading_zeros()) as usize;
            if by_top[top] == 0 {
                by_top[top] = x;
                break;
            }
            x ^= by_top[top];
        }
    }
    by_top.iter().rev().copied().filter(|&b| b != 0).collect()
}

pub fn oracle_class_group(field: NumberField, threshold: u64) -> Result<AbelianGroupData> {
    Ok(Oracle::new(field, threshold)?.class_group())
}

pub fn oracle_narrow_class_group(field: NumberField, threshold: u64) -> Result<AbelianGroupData> {
    Ok(Oracle::new(field, threshold)?.narrow_class_group())
}
