//! Enumeration of cubic fields of bounded discriminant through reduced
//! maximal binary cubic forms.

use rayon::prelude::*;

use crate::arith;
use crate::field::{CubicFieldRecord, Signature, SignatureFilter};
use crate::forms::BinaryCubicForm;

/// Every cubic field with 0 < |disc| < `max_disc` matching `filter`, sorted by
/// (|disc|, form). Square discriminants are skipped unless `include_cyclic`.
pub fn enumerate(max_disc: i64, filter: SignatureFilter, include_cyclic: bool) -> Vec<CubicFieldRecord> {
    let forms = enumerate_forms(max_disc, filter, include_cyclic, 1.0);
    forms.into_iter().map(CubicFieldRecord::from_canonical_form).collect()
}

/// Canonical maximal irreducible forms; `slack` ≥ 1 inflates the search box.
pub fn enumerate_forms(max_disc: i64, filter: SignatureFilter, include_cyclic: bool, slack: f64) -> Vec<BinaryCubicForm> {
    if max_disc <= 1 {
        return vec![];
    }
    let mut jobs: Vec<(Signature, i64)> = Vec::new();
    if filter.accepts(Signature::TotallyReal) {
        let amax = (slack * 0.5444 * (max_disc as f64).powf(0.25)).floor() as i64 + 1;
        jobs.extend((1..=amax).map(|a| (Signature::TotallyReal, a)));
    }
    if filter.accepts(Signature::Complex) {
        let amax = (slack * (16.0 * max_disc as f64 / 27.0).powf(0.25)).floor() as i64 + 1;
        jobs.extend((1..=amax).map(|a| (Signature::Complex, a)));
    }
    let mut out: Vec<BinaryCubicForm> = jobs
        .par_iter()
        .flat_map_iter(|&(sig, a)| {
            let mut v = Vec::new();
            match sig {
                Signature::TotallyReal => shard_positive(a, max_disc, slack, include_cyclic, &mut v),
                Signature::Complex => shard_negative(a, max_disc, slack, &mut v),
            }
            v
        })
        .collect();
    out.sort_by_key(|f| (f.disc().abs(), *f));
    out
}

fn accept(f: &BinaryCubicForm, disc: i128, include_cyclic: bool) -> bool {
    if !include_cyclic && arith::is_square(disc) {
        return false;
    }
    if !f.is_canonical() || !f.is_irreducible() {
        return false;
    }
    is_maximal(f, disc)
}

/// Maximality only needs checking at primes whose square divides the discriminant.
pub fn is_maximal(f: &BinaryCubicForm, disc: i128) -> bool {
    let n = disc.unsigned_abs() as u64;
    arith::factor(n).into_iter().filter(|&(_, e)| e >= 2).all(|(p, _)| f.is_maximal_at(p as i64))
}

/// disc > 0: Hessian (P,Q,R) reduced, |Q| ≤ P ≤ R, 3·disc = 4PR − Q².
fn shard_positive(a: i64, x: i64, slack: f64, include_cyclic: bool, out: &mut Vec<BinaryCubicForm>) {
    let x4 = (x as f64).powf(0.25);
    let bmax = (slack * (1.5 * a as f64 + 3.0 * 2f64.sqrt() * x4)).ceil() as i64 + 1;
    let pmax = ((x as f64).sqrt() * slack).floor() as i64 + 1;
    for b in 0..=bmax {
        let b2 = b * b;
        // P = b² − 3ac ∈ [1, pmax]
        let clo = (b2 - pmax).div_euclid(3 * a) - 1;
        let chi = (b2 - 1).div_euclid(3 * a) + 1;
        for c in clo..=chi {
            let p = b2 - 3 * a * c;
            if p < 1 || p > pmax {
                continue;
            }
            // |Q| ≤ P with Q = bc − 9ad
            let dlo = (b * c - p).div_euclid(9 * a);
            let dhi = (b * c + p).div_euclid(9 * a) + 1;
            for d in dlo..=dhi {
                let q = b * c - 9 * a * d;
                if q.abs() > p {
                    continue;
                }
                let r = c * c - 3 * b * d;
                if r < p {
                    continue;
                }
                let disc3 = 4 * (p as i128) * (r as i128) - (q as i128) * (q as i128);
                let disc = disc3 / 3;
                if disc <= 0 || disc >= x as i128 {
                    continue;
                }
                let f = BinaryCubicForm::new(a, b, c, d);
                if accept(&f, disc, include_cyclic) {
                    out.push(f);
                }
            }
        }
    }
}

/// disc < 0: write the complex roots as β, β̄ and the real root as α. Reduction
/// gives |Re β| ≤ 1/2 ≤ … ≤ |β|, and |disc| = 4a⁴ (Im β)² |α − β|⁴.
fn shard_negative(a: i64, x: i64, slack: f64, out: &mut Vec<BinaryCubicForm>) {
    let xf = x as f64;
    let af = a as f64;
    let spread = (xf / 3.0).powf(0.25) / af * slack; // bound on |α − β|
    let alpha_max = 0.5 + spread;
    let im_max = (xf / (4.0 * af.powi(4))).powf(1.0 / 6.0) * slack;
    let bmax = (1.5 * af + af * spread).ceil() as i64 + 1;
    let clo = (af * (1.0 - alpha_max)).floor() as i64 - 1;
    let chi = (af * (alpha_max + 0.25 + im_max * im_max)).ceil() as i64 + 1;
    let a128 = a as i128;
    for b in 0..=bmax {
        let b128 = b as i128;
        for c in clo..=chi {
            let c128 = c as i128;
            // disc(d) = −27a²d² + (18abc − 4b³)d + (b²c² − 4ac³)
            let qa = 27 * a128 * a128;
            let qb = 18 * a128 * b128 * c128 - 4 * b128 * b128 * b128;
            let qc = b128 * b128 * c128 * c128 - 4 * a128 * c128 * c128 * c128;
            // disc(d) > −x  ⇔  qa d² − qb d − (qc + x) < 0
            let rad = (qb * qb + 4 * qa * (qc + x as i128)) as f64;
            if rad < 0.0 {
                continue;
            }
            let sq = rad.sqrt();
            let d1 = ((qb as f64 - sq) / (2.0 * qa as f64)).floor() as i64 - 1;
            let d2 = ((qb as f64 + sq) / (2.0 * qa as f64)).ceil() as i64 + 1;
            for d in d1..=d2 {
                let d128 = d as i128;
                let disc = -qa * d128 * d128 + qb * d128 + qc;
                if disc >= 0 || disc <= -(x as i128) {
                    continue;
                }
                let f = BinaryCubicForm::new(a, b, c, d);
                if accept(&f, disc, false) {
                    out.push(f);
                }
            }
        }
    }
}
