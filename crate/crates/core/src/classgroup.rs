//! Class groups, narrow class groups, S-quotients and S-units of cubic fields
//! by relation collection over a factor base.
//!
//! Relations are valuation vectors of short elements found in factor base
//! ideals under randomly weighted T₂ forms. Each relation carries the signs of
//! its element at the real places, its quadratic characters at a few large
//! degree one primes (as bits) and its logarithmic embedding. The relation lattice
//! is kept in Hermite form; rows that vanish, and pairs of elements with equal
//! valuations, produce units. The class number is accepted once h·R agrees
//! with the truncated Euler product within a factor √2 and the Smith form has
//! been stable for a few rounds.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianGroupData, SmithPresentation};
use crate::arith;
use crate::dd::Dd;
use crate::error::{Error, Result};
use crate::ideals::{self, IdealHNF, PrimeIdeal};
use crate::lattice;
use crate::linalg;
use crate::numfield::NumberField;
use crate::ring::Elt;
use crate::units::LogLattice;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassGroupConfig {
    /// primes up to this bound enter the Euler product
    pub euler_bound: u64,
    /// rounds with unchanged Smith form required before accepting
    pub streak: u32,
    pub max_rounds: u32,
    /// quadratic characters used to certify 2-saturation
    pub characters: usize,
    pub seed: u64,
}

impl Default for ClassGroupConfig {
    fn default() -> Self {
        ClassGroupConfig { euler_bound: 10_000, streak: 2, max_rounds: 80, characters: 24, seed: 0x5eed }
    }
}

#[derive(Clone, Debug)]
struct Rel {
    v: Vec<i128>,
    bits: u128,
    logs: Vec<Dd>,
    err: f64,
}

impl Rel {
    fn combine(s: i128, x: &Rel, t: i128, y: &Rel) -> Result<Rel> {
        let mut v = Vec::with_capacity(x.v.len());
        for (a, b) in x.v.iter().zip(&y.v) {
            let e = s
                .checked_mul(*a)
                .and_then(|u| t.checked_mul(*b).and_then(|w| u.checked_add(w)))
                .ok_or(Error::Overflow("relation matrix"))?;
            v.push(e);
        }
        let mut bits = 0;
        if s & 1 == 1 {
            bits ^= x.bits;
        }
        if t & 1 == 1 {
            bits ^= y.bits;
        }
        let (ds, dt) = (Dd::from_i128(s), Dd::from_i128(t));
        let logs: Vec<Dd> = x.logs.iter().zip(&y.logs).map(|(&a, &b)| ds * a + dt * b).collect();
        let size = x.logs.iter().zip(&y.logs).fold(0.0f64, |m, (a, b)| m.max((s as f64 * a.hi).abs() + (t as f64 * b.hi).abs()));
        let err = (s as f64).abs() * x.err + (t as f64).abs() * y.err + 1e-31 * size;
        Ok(Rel { v, bits, logs, err })
    }
}

/// A unit known through its signs, characters and logarithms.
#[derive(Clone, Debug)]
pub struct UnitInfo<L = f64> {
    pub bits: u128,
    pub logs: Vec<L>,
}

/// Data for the S-units modulo squares.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SUnitData {
    pub rank: u32,
    pub mod_squares_dim: u32,
    /// signs at the real places of an 𝔽₂-basis of S-units modulo squares (−1 included)
    pub signature_matrix: Vec<Vec<bool>>,
}

impl SUnitData {
    /// The S-units realize every sign vector at the real places.
    pub fn all_signs(&self, r1: usize) -> bool {
        let rows: Vec<u128> =
            self.signature_matrix.iter().map(|r| r.iter().enumerate().fold(0u128, |a, (i, &b)| a | ((b as u128) << i))).collect();
        linalg::rank_f2(&rows) == r1
    }
}

/// Everything computed for one field.
pub struct ClassGroup {
    pub field: NumberField,
    pub factor_base: Vec<PrimeIdeal>,
    chain: Vec<u64>,
    rows: Vec<Rel>,
    pub units: Vec<UnitInfo>,
    pub regulator: f64,
    pub hr_estimate: f64,
    pub presentation: SmithPresentation,
    minus_one_bits: u128,
    pub rounds: u32,
}

/// One column per prime ideal; primes above `chain` come last, the first
/// element of `chain` at the very end.
fn factor_base(field: &NumberField, chain: &[u64]) -> Vec<PrimeIdeal> {
    let bound = field.minkowski_bound().max(1.0) as u64;
    let mut out = Vec::new();
    for p in arith::primes_up_to(bound) {
        if !chain.contains(&p) {
            out.extend(ideals::primes_above(&field.ring, p).into_iter().filter(|q| (p as f64).powi(q.f as i32) <= bound as f64));
        }
    }
    for &p in chain.iter().rev() {
        out.extend(ideals::primes_above(&field.ring, p));
    }
    out
}

impl ClassGroup {
    /// Compute the class group data; `chain` lists primes whose ideals must be
    /// in the factor base, such that each prefix of it is a usable S.
    pub fn compute(field: NumberField, chain: &[u64], cfg: &ClassGroupConfig) -> Result<ClassGroup> {
        Collector::new(field, chain, cfg).run()
    }

    pub fn disc(&self) -> i64 {
        self.field.disc
    }

    pub fn n(&self) -> usize {
        self.factor_base.len()
    }

    fn s_columns(&self, s: &[u64]) -> Vec<usize> {
        (0..self.n()).filter(|&j| s.contains(&self.factor_base[j].p)).collect()
    }

    pub fn class_group(&self) -> AbelianGroupData {
        to_data(&self.presentation)
    }

    /// Class group modulo the classes of primes above S.
    pub fn s_quotient(&self, s: &[u64], narrow: bool) -> Result<AbelianGroupData> {
        let n = self.n();
        let r1 = if narrow { self.field.r1() } else { 0 };
        let width = n + r1;
        let mut rows: Vec<Vec<i128>> = Vec::new();
        for rel in &self.rows {
            let mut r = rel.v.clone();
            for i in 0..r1 {
                r.push(((rel.bits >> i) & 1) as i128);
            }
            rows.push(r);
        }
        if narrow {
            let mut signs: Vec<u128> = self.units.iter().map(|u| u.bits).collect();
            signs.push(self.minus_one_bits);
            for b in signs {
                let mut r = vec![0i128; width];
                for i in 0..r1 {
                    r[n + i] = ((b >> i) & 1) as i128;
                }
                rows.push(r);
            }
            for i in 0..r1 {
                let mut r = vec![0i128; width];
                r[n + i] = 2;
                rows.push(r);
            }
        }
        for j in self.s_columns(s) {
            let mut r = vec![0i128; width];
            r[j] = 1;
            rows.push(r);
        }
        Ok(to_data(&SmithPresentation::new(&rows, width).map_err(|e| self.wrap(e))?))
    }

    pub fn narrow_class_group(&self) -> Result<AbelianGroupData> {
        self.s_quotient(&[], true)
    }

    fn wrap(&self, e: Error) -> Error {
        match e {
            Error::Certification { reason, .. } => Error::Certification { disc: self.disc(), reason },
            other => other,
        }
    }

    /// S-units modulo squares, certified through the quadratic characters.
    /// `s` must be a prefix of the chain the group was computed with.
    pub fn s_unit_data(&self, s: &[u64]) -> Result<SUnitData> {
        assert!(self.chain.starts_with(s) || s.is_empty(), "S must be a prefix of the factor base chain");
        let cols = self.s_columns(s);
        let first_s = cols.first().copied().unwrap_or(self.n());
        let mut elems: Vec<u128> = vec![self.minus_one_bits];
        elems.extend(self.units.iter().map(|u| u.bits));
        for rel in &self.rows {
            let pivot = rel.v.iter().position(|&x| x != 0).unwrap();
            if pivot >= first_s {
                elems.push(rel.bits);
            }
        }
        let expect = self.field.places() + cols.len();
        let idx = linalg::independent_subset_f2(&elems);
        if idx.len() != expect {
            return Err(Error::Saturation {
                disc: self.disc(),
                reason: format!("S-unit characters have rank {} instead of {expect}", idx.len()),
            });
        }
        let r1 = self.field.r1();
        let signature_matrix = idx.iter().map(|&i| (0..r1).map(|k| (elems[i] >> k) & 1 == 1).collect()).collect();
        Ok(SUnitData { rank: (expect - 1) as u32, mod_squares_dim: expect as u32, signature_matrix })
    }

    /// Sign vectors of an 𝔽₂-basis of the units modulo squares (−1 first).
    pub fn unit_signs(&self) -> Vec<Vec<bool>> {
        let mut elems = vec![self.minus_one_bits];
        elems.extend(self.units.iter().map(|u| u.bits));
        let r1 = self.field.r1();
        linalg::independent_subset_f2(&elems).into_iter().map(|i| (0..r1).map(|k| (elems[i] >> k) & 1 == 1).collect()).collect()
    }

    /// Class of ∏ P_j^{x_j} in terms of the generators of the class group.
    pub fn dlog(&self, exponents: &[i128]) -> Vec<i128> {
        self.presentation.dlog(exponents)
    }

    /// Integral ideals representing the generators.
    pub fn generator_ideals(&self) -> Vec<IdealHNF> {
        let hnf: Vec<Vec<i128>> = self.rows.iter().map(|r| r.v.clone()).collect();
        self.presentation
            .gens
            .iter()
            .map(|g| {
                // reduce into [0, pivot) so all exponents are nonnegative
                let mut x = g.clone();
                for row in &hnf {
                    let piv = row.iter().position(|&c| c != 0).unwrap();
                    let q = x[piv].div_euclid(row[piv]);
                    for (a, b) in x.iter_mut().zip(row) {
                        *a -= q * b;
                    }
                }
                let mut acc = IdealHNF::unit();
                for (j, &e) in x.iter().enumerate() {
                    if e > 0 {
                        acc = acc.mul(&self.factor_base[j].hnf.pow(e as u32, &self.field.ring), &self.field.ring);
                    }
                }
                acc
            })
            .collect()
    }
}

fn to_data(s: &SmithPresentation) -> AbelianGroupData {
    AbelianGroupData { elementary_divisors: s.divisors.iter().map(|&d| d as u64).collect() }
}

struct Collector<'a> {
    field: NumberField,
    cfg: &'a ClassGroupConfig,
    chain: Vec<u64>,
    fb: Vec<PrimeIdeal>,
    fb_primes: Vec<u64>,
    chars: Vec<(u64, u64, u64)>,
    basis: Vec<Option<Rel>>,
    seen: HashMap<Vec<i128>, (u128, Vec<Dd>, f64)>,
    units: Vec<UnitInfo>,
    /// log vectors of units with their error bounds, for the lattice
    unit_logs: Vec<(f64, Vec<f64>)>,
    lattice: LogLattice,
    lattice_stale: bool,
    rng: ChaCha8Rng,
}

impl<'a> Collector<'a> {
    fn new(field: NumberField, chain: &[u64], cfg: &'a ClassGroupConfig) -> Self {
        let fb = factor_base(&field, chain);
        let mut fb_primes: Vec<u64> = fb.iter().map(|q| q.p).collect();
        fb_primes.sort_unstable();
        fb_primes.dedup();
        let chars = field.linear_character_primes(1 << 30, cfg.characters);
        let f = field.form;
        let seed = cfg.seed ^ (f.a as u64).wrapping_mul(0x9e3779b97f4a7c15) ^ (f.b as u64).rotate_left(16) ^ (f.c as u64).rotate_left(32)
            ^ (f.d as u64).rotate_left(48);
        let n = fb.len();
        let rank = field.unit_rank();
        Collector {
            field,
            cfg,
            chain: chain.to_vec(),
            fb,
            fb_primes,
            chars,
            basis: vec![None; n],
            seen: HashMap::new(),
            units: Vec::new(),
            unit_logs: Vec::new(),
            lattice: LogLattice::new(rank),
            lattice_stale: false,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn payload_bits(&self, x: &Elt) -> u128 {
        let r1 = self.field.r1();
        let mut bits = self.field.sign_bits(x);
        for (k, pt) in self.chars.iter().enumerate() {
            if self.field.linear_character(x, pt) < 0 {
                bits |= 1 << (r1 + k);
            }
        }
        bits
    }

    /// Valuation vector over the factor base, if the element is smooth.
    fn valuations(&self, x: &Elt) -> Option<Vec<i128>> {
        let mut n = self.field.norm(x).unsigned_abs();
        if n == 0 {
            return None;
        }
        let mut v = vec![0i128; self.fb.len()];
        for &p in &self.fb_primes {
            let p128 = p as u128;
            if n % p128 != 0 {
                continue;
            }
            let mut e = 0u32;
            while n % p128 == 0 {
                n /= p128;
                e += 1;
            }
            let mut acc = 0u32;
            for (j, q) in self.fb.iter().enumerate() {
                if q.p == p {
                    let k = q.valuation(&self.field.ring, x);
                    v[j] = k as i128;
                    acc += k * q.f;
                }
            }
            // part of the valuation sits on a prime outside the factor base
            if acc != e {
                return None;
            }
        }
        (n == 1).then_some(v)
    }

    fn add_element(&mut self, x: &Elt) -> Result<()> {
        let Some(v) = self.valuations(x) else { return Ok(()) };
        let bits = self.payload_bits(x);
        let (logs, err) = self.field.logs_dd(x);
        if let Some((b0, l0, e0)) = self.seen.get(&v) {
            let ul: Vec<Dd> = logs.iter().zip(l0).map(|(&a, &b)| a - b).collect();
            let u = UnitInfo { bits: bits ^ b0, logs: ul };
            let e = err + e0;
            self.add_unit(u, e);
            return Ok(());
        }
        self.seen.insert(v.clone(), (bits, logs.clone(), err));
        let rel = Rel { v, bits, logs, err };
        self.insert(rel)
    }

    fn add_unit(&mut self, u: UnitInfo<Dd>, err: f64) {
        let rank = self.field.unit_rank();
        let lv: Vec<f64> = (0..rank).map(|i| self.field.place_degree(i) * u.logs[i].to_f64()).collect();
        let scale = lv.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        // rounding to f64 costs a few ulps
        let err = 2.0 * err + 1e-15 * scale;
        if scale > 1e-3 && err < 1e-3 * scale {
            self.unit_logs.push((err, lv));
            self.lattice_stale = true;
        }
        self.units.push(UnitInfo { bits: u.bits, logs: u.logs.iter().map(|l| l.to_f64()).collect() });
    }

    /// Rebuilds the unit lattice from the sharpest vectors first, so noisy
    /// ones are only ever placed against an accurate basis.
    fn refresh_lattice(&mut self) {
        if !self.lattice_stale {
            return;
        }
        self.unit_logs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut lat = LogLattice::new(self.field.unit_rank());
        for (err, lv) in &self.unit_logs {
            lat.add(lv, *err);
        }
        self.lattice = lat;
        self.lattice_stale = false;
    }

    /// Incremental Hermite insertion carrying the payloads.
    fn insert(&mut self, mut rel: Rel) -> Result<()> {
        let n = self.fb.len();
        let mut col = 0;
        while col < n {
            if rel.v[col] == 0 {
                col += 1;
                continue;
            }
            match self.basis[col].take() {
                None => {
                    if rel.v[col] < 0 {
                        rel = Rel::combine(-1, &rel, 0, &rel)?;
                    }
                    self.basis[col] = Some(rel);
                    self.reduce_above(col)?;
                    return Ok(());
                }
                Some(b) => {
                    let (g, s, t) = linalg::xgcd(b.v[col], rel.v[col]);
                    let (bq, vq) = (b.v[col] / g, rel.v[col] / g);
                    let nb = Rel::combine(s, &b, t, &rel)?;
                    let nv = Rel::combine(vq, &b, -bq, &rel)?;
                    let changed = nb.v[col] != b.v[col];
                    self.basis[col] = Some(nb);
                    if changed {
                        self.reduce_above(col)?;
                    }
                    rel = nv;
                    col += 1;
                }
            }
        }
        // reduced to zero: a unit
        // the error bound grows with the combination coefficients
        let err = rel.err;
        self.add_unit(UnitInfo { bits: rel.bits, logs: rel.logs }, err);
        Ok(())
    }

    /// Keep entries of earlier rows in column `col` within [0, pivot).
    fn reduce_above(&mut self, col: usize) -> Result<()> {
        let Some(piv_row) = self.basis[col].clone() else { return Ok(()) };
        let p = piv_row.v[col];
        for j in 0..col {
            if let Some(r) = &self.basis[j] {
                let q = r.v[col].div_euclid(p);
                if q != 0 {
                    let nr = Rel::combine(1, r, -q, &piv_row)?;
                    self.basis[j] = Some(nr);
                }
            }
        }
        Ok(())
    }

    fn full_rank(&self) -> bool {
        self.basis.iter().all(|b| b.is_some())
    }

    fn index(&self) -> Option<i128> {
        if !self.full_rank() {
            return None;
        }
        self.basis.iter().map(|b| b.as_ref().unwrap().v.iter().find(|&&x| x != 0).copied()).try_fold(1i128, |acc, p| p.map(|p| acc * p))
    }

    fn random_weights(&mut self, spread: f64) -> Vec<f64> {
        let k = self.field.places();
        let mut c: Vec<f64> = (0..k).map(|_| self.rng.gen_range(-spread..=spread)).collect();
        // balance so that Σ d_i c_i = 0
        let total: f64 = (0..k).map(|i| self.field.place_degree(i) * c[i]).sum();
        for x in c.iter_mut() {
            *x -= total / 3.0;
        }
        c.into_iter().map(|x| (2.0 * x).exp()).collect()
    }

    fn harvest(&mut self, ideal: &IdealHNF, weights: &[f64], count: usize) -> Result<()> {
        let (basis, rg) = self.field.reduced_basis(ideal, weights);
        let m = rg[0][0].min(rg[1][1]).min(rg[2][2]);
        let mut found: Vec<[i64; 3]> = Vec::new();
        lattice::fincke_pohst(&rg, 2.0 * m, |x, _| {
            found.push(*x);
            found.len() < count
        });
        for x in found {
            let mut e = [0i128; 3];
            for k in 0..3 {
                for l in 0..3 {
                    e[l] += x[k] as i128 * basis[k][l] as i128;
                }
            }
            // keeps the exact norm inside i128
            if e.iter().all(|c| c.abs() < 1 << 28) {
                self.add_element(&e.map(|c| c as i64))?;
            }
        }
        Ok(())
    }

    fn saturated(&self) -> bool {
        let minus_one = self.minus_one_bits();
        let mut elems = vec![minus_one];
        elems.extend(self.units.iter().map(|u| u.bits));
        if linalg::rank_f2(&elems) != self.field.places() {
            return false;
        }
        // every prefix of the chain
        let n = self.fb.len();
        let mut k = 0;
        for i in 0..=self.chain.len() {
            let s = &self.chain[..i];
            let cols = (0..n).filter(|&j| s.contains(&self.fb[j].p)).count();
            let first = n - cols;
            let mut e = elems.clone();
            for b in self.basis.iter().flatten() {
                if b.v.iter().position(|&x| x != 0).unwrap() >= first {
                    e.push(b.bits);
                }
            }
            if linalg::rank_f2(&e) != self.field.places() + cols {
                return false;
            }
            k += 1;
        }
        k > 0
    }

    fn minus_one_bits(&self) -> u128 {
        let r1 = self.field.r1();
        let mut bits = (1u128 << r1) - 1;
        for (k, &(p, _, _)) in self.chars.iter().enumerate() {
            if p % 4 == 3 {
                bits |= 1 << (r1 + k);
            }
        }
        bits
    }

    fn run(mut self) -> Result<ClassGroup> {
        let disc = self.field.disc;
        let est = self.field.hr_estimate(self.cfg.euler_bound);
        let mut last: Option<Vec<i128>> = None;
        let mut streak = 0;
        let one = IdealHNF::unit();
        let fb_ideals: Vec<IdealHNF> = self.fb.iter().map(|q| q.hnf.clone()).collect();
        for round in 0..self.cfg.max_rounds {
            let spread = (0.5 + 0.25 * round as f64).min(6.0);
            let w = self.random_weights(spread);
            self.harvest(&one, &w, 16)?;
            for ideal in &fb_ideals {
                let w = self.random_weights(spread);
                self.harvest(ideal, &w, 8)?;
            }
            // short elements of a prime above p are often multiples of p, which
            // need not be smooth; twisting by another prime avoids them
            for j in 0..fb_ideals.len() {
                if self.basis[j].is_some() {
                    continue;
                }
                for _ in 0..4 {
                    let k = self.rng.gen_range(0..fb_ideals.len());
                    let ideal = fb_ideals[j].mul(&fb_ideals[k], &self.field.ring);
                    let w = self.random_weights(spread);
                    self.harvest(&ideal, &w, 8)?;
                }
            }
            self.refresh_lattice();
            let Some(h) = self.index() else { continue };
            let Some(reg) = self.lattice.covolume() else { continue };
            let rows: Vec<Vec<i128>> = self.basis.iter().map(|b| b.as_ref().unwrap().v.clone()).collect();
            let pres = SmithPresentation::new(&rows, rows.len())?;
            if last.as_ref() == Some(&pres.divisors) {
                streak += 1;
            } else {
                streak = 0;
                last = Some(pres.divisors.clone());
            }
            let ratio = h as f64 * reg / est;
            let ok = ratio < std::f64::consts::SQRT_2 && ratio > std::f64::consts::FRAC_1_SQRT_2;
            if ok && streak >= self.cfg.streak && self.saturated() {
                let minus_one_bits = self.minus_one_bits();
                let rows: Vec<Rel> = self.basis.into_iter().map(|b| b.unwrap()).collect();
                return Ok(ClassGroup {
                    field: self.field,
                    factor_base: self.fb,
                    chain: self.chain,
                    rows,
                    units: self.units,
                    regulator: reg,
                    hr_estimate: est,
                    presentation: pres,
                    minus_one_bits,
                    rounds: round + 1,
                });
            }
        }
        self.refresh_lattice();
        let reason = match (self.index(), self.lattice.covolume()) {
            (Some(h), Some(r)) => format!("h·R = {} vs estimate {est:.4}", h as f64 * r),
            _ => "relation or unit lattice not of full rank".to_string(),
        };
        Err(Error::Certification { disc, reason })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::BinaryCubicForm;

    fn compute(v: [i64; 4]) -> ClassGroup {
        let f = BinaryCubicForm::from(v).reduce().unwrap();
        ClassGroup::compute(NumberField::new(f), &[2, 3], &ClassGroupConfig::default()).unwrap()
    }

    #[test]
    fn small_fields_have_trivial_class_group() {
        for v in [[1, 0, -1, -1], [1, -1, -3, 1]] {
            let g = compute(v);
            assert_eq!(g.class_group().elementary_divisors, Vec::<u64>::new());
        }
    }

    #[test]
    fn disc_minus_283_has_class_number_two() {
        let g = compute([1, 0, 4, -1]);
        assert_eq!(g.disc(), -283);
        assert_eq!(g.class_group().elementary_divisors, vec![2]);
        assert_eq!(g.narrow_class_group().unwrap().elementary_divisors, vec![2]);
    }

    #[test]
    fn regulator_of_disc_minus_23() {
        let g = compute([1, 0, -1, -1]);
        assert!((g.regulator - 0.2811995743).abs() < 1e-6, "{}", g.regulator);
    }

    #[test]
    fn s_unit_dimensions() {
        let g = compute([1, 0, -1, -1]);
        assert_eq!(g.s_unit_data(&[]).unwrap().mod_squares_dim, 2);
        assert_eq!(g.s_unit_data(&[2]).unwrap().mod_squares_dim, 3);
        let g = compute([1, -1, -3, 1]);
        assert_eq!(g.s_unit_data(&[]).unwrap().mod_squares_dim, 3);
    }
}
