//! Enumerated cubic fields and their stored data.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::forms::BinaryCubicForm;
use crate::splitting::{self, SplittingType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Signature {
    TotallyReal,
    Complex,
}

impl Signature {
    pub fn of_disc(disc: i64) -> Self {
        if disc > 0 {
            Signature::TotallyReal
        } else {
            Signature::Complex
        }
    }

    /// Number of real places.
    pub fn r1(self) -> u32 {
        match self {
            Signature::TotallyReal => 3,
            Signature::Complex => 1,
        }
    }

    /// Number of archimedean places.
    pub fn places(self) -> u32 {
        match self {
            Signature::TotallyReal => 3,
            Signature::Complex => 2,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signature::TotallyReal => "real",
            Signature::Complex => "complex",
        })
    }
}

impl FromStr for Signature {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "real" | "totally-real" => Ok(Signature::TotallyReal),
            "complex" => Ok(Signature::Complex),
            _ => Err(format!("unknown signature {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignatureFilter {
    #[serde(alias = "real")]
    TotallyReal,
    Complex,
    Both,
}

impl SignatureFilter {
    pub fn accepts(self, s: Signature) -> bool {
        match self {
            SignatureFilter::Both => true,
            SignatureFilter::TotallyReal => s == Signature::TotallyReal,
            SignatureFilter::Complex => s == Signature::Complex,
        }
    }
}

impl FromStr for SignatureFilter {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "real" | "totally-real" => Ok(SignatureFilter::TotallyReal),
            "complex" => Ok(SignatureFilter::Complex),
            "both" => Ok(SignatureFilter::Both),
            _ => Err(format!("unknown signature filter {s:?}")),
        }
    }
}

/// Class group invariants of one field for one set S.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSlots {
    pub s: Vec<u64>,
    pub cl: Vec<u64>,
    pub cl_plus: Vec<u64>,
    pub cl_s: Vec<u64>,
    pub cl_plus_s: Vec<u64>,
    /// signs at the real places of a basis of units modulo squares, one row per unit
    pub unit_signs: Vec<Vec<bool>>,
    /// dimension of the S-units modulo squares
    pub s_unit_rank2: u32,
    /// signs of S-units modulo squares realize every sign vector
    pub s_units_all_signs: bool,
}

/// State of the class group computation for a record.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Invariants {
    #[default]
    Pending,
    Computed(GroupSlots),
    /// relation collection or 2-saturation failed
    Failed(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicFieldRecord {
    pub form: BinaryCubicForm,
    pub disc: i64,
    pub signature: Signature,
    pub is_cyclic: bool,
    pub splitting: BTreeMap<u64, SplittingType>,
    pub invariants: Invariants,
}

impl CubicFieldRecord {
    pub fn from_canonical_form(form: BinaryCubicForm) -> Self {
        let disc = form.disc() as i64;
        CubicFieldRecord {
            form,
            disc,
            signature: Signature::of_disc(disc),
            is_cyclic: arith::is_square(disc as i128),
            splitting: BTreeMap::new(),
            invariants: Invariants::Pending,
        }
    }

    pub fn splitting_at(&self, p: u64) -> SplittingType {
        self.splitting.get(&p).cloned().unwrap_or_else(|| splitting::splitting_type(&self.form, p))
    }

    /// Store splitting types for the given primes.
    pub fn fill_splitting(&mut self, primes: &[u64]) {
        for &p in primes {
            let t = splitting::splitting_type(&self.form, p);
            self.splitting.insert(p, t);
        }
    }

    pub fn nu_s(&self, s: &[u64]) -> u32 {
        s.iter().map(|&p| self.splitting_at(p).r()).sum()
    }
}
