//! Relaxed 2-Selmer groups and the 2-torsion of even K-groups.
//!
//! Sel₂^S(K) consists of α ∈ K^×/K^{×2} whose valuations are even at every prime
//! outside S_K. It sits in 0 → 𝒪^×_{K,S}/squares → Sel₂^S(K) → Cl(K)_S[2] → 0.

use serde::{Deserialize, Serialize};

use crate::abelian::AbelianGroupData;
use crate::classgroup::SUnitData;
use crate::error::{Error, Result};
use crate::field::Signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelmerRoute {
    Formula,
    ExactSequence,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerData {
    /// dimension over 𝔽₂
    pub dim: u32,
    pub route: SelmerRoute,
}

impl SelmerData {
    pub fn size(&self) -> u64 {
        1 << self.dim
    }
}

/// |Sel₂^S| = 2^{ν_S + places}·|Cl_S[2]|, with ν_S the number of primes above S.
pub fn selmer_size_formula(sig: Signature, nu: u32, cl_s: &AbelianGroupData) -> SelmerData {
    SelmerData { dim: nu + sig.places() + cl_s.two_rank(), route: SelmerRoute::Formula }
}

/// |Sel₂^S| from the exact sequence, using certified S-unit data.
pub fn selmer_size_exact_sequence(units: &SUnitData, cl_s: &AbelianGroupData) -> SelmerData {
    SelmerData { dim: units.mod_squares_dim + cl_s.two_rank(), route: SelmerRoute::ExactSequence }
}

/// 2-rank of K_{2n}(𝒪_K)[2].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KRank {
    pub n_mod_4: u32,
    pub rank: u32,
}

impl KRank {
    pub fn card(&self) -> u64 {
        1 << self.rank
    }
}

/// Rank of K_{2n}(𝒪_K)[2] for n > 0, from the class groups with S = {2}:
/// `r2` is the number of primes above 2, `cl2` and `cl2_plus` are Cl_{2} and
/// Cl⁺_{2}.
pub fn k_rank(sig: Signature, r2: u32, cl2: &AbelianGroupData, cl2_plus: &AbelianGroupData, n: u64) -> Result<KRank> {
    if n == 0 {
        return Err(Error::Config("K-group index must be positive".into()));
    }
    let n_mod_4 = (n % 4) as u32;
    let rank = match n_mod_4 {
        0 => cl2.two_rank() + r2 - 1,
        1 => cl2.two_rank() + sig.r1() + r2 - 1,
        _ => cl2_plus.two_rank() + r2 - 1,
    };
    Ok(KRank { n_mod_4, rank })
}
