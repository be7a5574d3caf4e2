//! Per-field class group data for one set S.

use crate::abelian::AbelianGroupData;
use crate::classgroup::{ClassGroup, ClassGroupConfig};
use crate::error::{Error, Result};
use crate::field::{CubicFieldRecord, GroupSlots, Invariants};
use crate::numfield::NumberField;
use crate::oracle::Oracle;
use crate::selmer::{self, KRank, SelmerData};

pub fn group_slots(rec: &CubicFieldRecord, s: &[u64], cfg: &ClassGroupConfig) -> Result<GroupSlots> {
    let cg = ClassGroup::compute(NumberField::new(rec.form), s, cfg)?;
    let units = cg.s_unit_data(s)?;
    Ok(GroupSlots {
        s: s.to_vec(),
        cl: cg.class_group().elementary_divisors,
        cl_plus: cg.narrow_class_group()?.elementary_divisors,
        cl_s: cg.s_quotient(s, false)?.elementary_divisors,
        cl_plus_s: cg.s_quotient(s, true)?.elementary_divisors,
        unit_signs: cg.unit_signs(),
        s_unit_rank2: units.mod_squares_dim,
        s_units_all_signs: units.all_signs(rec.signature.r1() as usize),
    })
}

/// Fills splitting data at S and the class group slots; failures are kept on
/// the record, other errors propagate.
pub fn fill(rec: &mut CubicFieldRecord, s: &[u64], cfg: &ClassGroupConfig) -> Result<()> {
    rec.fill_splitting(s);
    rec.invariants = match group_slots(rec, s, cfg) {
        Ok(g) => Invariants::Computed(g),
        Err(e @ (Error::Certification { .. } | Error::Saturation { .. })) => Invariants::Failed(e.to_string()),
        Err(e) => return Err(e),
    };
    Ok(())
}

/// Compares the stored groups with the oracle. Returns false on disagreement.
pub fn agrees_with_oracle(rec: &CubicFieldRecord, g: &GroupSlots, threshold: u64) -> Result<bool> {
    let o = Oracle::new(NumberField::new(rec.form), threshold)?;
    Ok(o.class_group().elementary_divisors == g.cl
        && o.narrow_class_group().elementary_divisors == g.cl_plus
        && o.s_quotient(&g.s, false)?.elementary_divisors == g.cl_s
        && o.s_quotient(&g.s, true)?.elementary_divisors == g.cl_plus_s)
}

fn group(d: &[u64]) -> AbelianGroupData {
    AbelianGroupData { elementary_divisors: d.to_vec() }
}

/// Derived quantities of one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldStats {
    pub nu: u32,
    pub cl2: u64,
    pub cl_plus2: u64,
    pub cl_s2: u64,
    pub cl_plus_s2: u64,
    pub selmer: SelmerData,
    pub selmer_check: SelmerData,
    /// cards for n ≡ 0, 1, 2, 3 (mod 4), when S = {2}
    pub kgroups: Option<[KRank; 4]>,
    pub plus_s_trivial2: bool,
    pub plus_s_equals_s: bool,
    pub all_signs: bool,
}

pub fn field_stats(rec: &CubicFieldRecord, g: &GroupSlots) -> FieldStats {
    let sig = rec.signature;
    let nu = rec.nu_s(&g.s);
    let (cl_s, cl_plus_s) = (group(&g.cl_s), group(&g.cl_plus_s));
    let units = crate::classgroup::SUnitData {
        rank: g.s_unit_rank2.saturating_sub(1),
        mod_squares_dim: g.s_unit_rank2,
        signature_matrix: vec![],
    };
    let kgroups = (g.s == [2]).then(|| {
        [4u64, 1, 2, 3].map(|n| selmer::k_rank(sig, nu, &cl_s, &cl_plus_s, n).expect("n > 0"))
    });
    FieldStats {
        nu,
        cl2: group(&g.cl).two_torsion_card(),
        cl_plus2: group(&g.cl_plus).two_torsion_card(),
        cl_s2: cl_s.two_torsion_card(),
        cl_plus_s2: cl_plus_s.two_torsion_card(),
        selmer: selmer::selmer_size_formula(sig, nu, &cl_s),
        selmer_check: selmer::selmer_size_exact_sequence(&units, &cl_s),
        kgroups,
        plus_s_trivial2: cl_plus_s.two_torsion_card() == 1,
        plus_s_equals_s: cl_plus_s.order() == cl_s.order(),
        all_signs: g.s_units_all_signs,
    }
}
