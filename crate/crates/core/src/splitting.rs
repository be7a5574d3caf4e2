//! Decomposition of rational primes in a cubic field.
//!
//! The type is read off the finite algebra 𝒪_K/p𝒪_K: its 𝔽_p-points (ring
//! homomorphisms to 𝔽_p) and its nilradical determine the splitting type.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::forms::BinaryCubicForm;
use crate::ring::CubicRing;

/// Multiset of (e, f) pairs, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SplittingType {
    pub parts: Vec<(u8, u8)>,
}

impl SplittingType {
    pub fn new(mut parts: Vec<(u8, u8)>) -> Self {
        parts.sort();
        debug_assert_eq!(parts.iter().map(|&(e, f)| e as u32 * f as u32).sum::<u32>(), 3);
        SplittingType { parts }
    }

    pub fn totally_split() -> Self {
        Self::new(vec![(1, 1); 3])
    }
    pub fn partially_split() -> Self {
        Self::new(vec![(1, 1), (1, 2)])
    }
    pub fn inert() -> Self {
        Self::new(vec![(1, 3)])
    }
    pub fn partially_ramified() -> Self {
        Self::new(vec![(1, 1), (2, 1)])
    }
    pub fn totally_ramified() -> Self {
        Self::new(vec![(3, 1)])
    }

    /// The five splitting types of a cubic field.
    pub fn all() -> [SplittingType; 5] {
        [
            Self::totally_split(),
            Self::partially_split(),
            Self::inert(),
            Self::partially_ramified(),
            Self::totally_ramified(),
        ]
    }

    /// Number of primes above p.
    pub fn r(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn is_ramified(&self) -> bool {
        self.parts.iter().any(|&(e, _)| e > 1)
    }

    /// Has a degree-one unramified component, i.e. a factor ℚ_p.
    pub fn has_qp_component(&self) -> bool {
        self.parts.contains(&(1, 1))
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|(e, g)| format!("{e}^{g}")).collect();
        write!(f, "{}", s.join("+"))
    }
}

impl FromStr for SplittingType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let mut parts = Vec::new();
        for tok in s.split('+') {
            let (e, f) = tok.split_once('^').ok_or_else(|| format!("bad part {tok:?}"))?;
            let e: u8 = e.parse().map_err(|_| format!("bad e in {tok:?}"))?;
            let f: u8 = f.parse().map_err(|_| format!("bad f in {tok:?}"))?;
            if e == 0 || f == 0 {
                return Err(format!("zero index in {tok:?}"));
            }
            parts.push((e, f));
        }
        if parts.iter().map(|&(e, f)| e as u32 * f as u32).sum::<u32>() != 3 {
            return Err(format!("degrees do not sum to 3 in {s:?}"));
        }
        Ok(SplittingType::new(parts))
    }
}

/// Number of ring homomorphisms 𝒪 → 𝔽_p, i.e. pairs (u, v) = images of (ω, θ)
/// satisfying the multiplication table.
pub fn count_fp_points(f: &BinaryCubicForm, p: i64) -> usize {
    fp_points(f, p).len()
}

pub fn fp_points(f: &BinaryCubicForm, p: i64) -> Vec<(i64, i64)> {
    let m = |x: i128| x.rem_euclid(p as i128) as i64;
    let (a, b, c, d) = (f.a as i128, f.b as i128, f.c as i128, f.d as i128);
    let ok = |u: i128, v: i128| {
        m(u * u + b * u - a * v) == 0 && m(u * v + a * d + c * u) == 0 && m(v * v + b * d + d * u + c * v) == 0
    };
    let mut out = Vec::new();
    let am = m(a);
    if am != 0 {
        let ainv = crate::linalg::inv_mod(am, p) as i128;
        for u in 0..p as i128 {
            let v = m((u * u + b * u) * ainv) as i128;
            if ok(u, v) {
                out.push((u as i64, v as i64));
            }
        }
    } else {
        let mut us = vec![0i128, m(-b) as i128];
        us.dedup();
        for u in us {
            for v in 0..p as i128 {
                if ok(u, v) {
                    out.push((u as i64, v as i64));
                }
            }
        }
    }
    out
}

/// Splitting type of p in the maximal ring attached to `f`.
pub fn splitting_type(f: &BinaryCubicForm, p: u64) -> SplittingType {
    let p = p as i64;
    let n1 = count_fp_points(f, p);
    let ramified = f.disc().rem_euclid(p as i128) == 0;
    match (ramified, n1) {
        (false, 3) => SplittingType::totally_split(),
        (false, 1) => SplittingType::partially_split(),
        (false, 0) => SplittingType::inert(),
        (true, 2) => SplittingType::partially_ramified(),
        (true, 1) => SplittingType::totally_ramified(),
        _ => {
            // only possible for a non-maximal ring; fall back on the radical
            let rad = CubicRing::new(*f).radical_mod(p).len();
            match rad {
                0 => SplittingType::inert(),
                1 => SplittingType::partially_ramified(),
                _ => SplittingType::totally_ramified(),
            }
        }
    }
}

pub fn nu_s(types: &[SplittingType]) -> u32 {
    types.iter().map(|t| t.r()).sum()
}
