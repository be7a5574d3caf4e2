//! Surveys: enumerate, compute invariants shard by shard, aggregate, compare.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cache;
use super::invariants::{self, FieldStats};
use crate::classgroup::ClassGroupConfig;
use crate::densities::{self, CountFamily, LocalConditionSet};
use crate::enumerate;
use crate::error::{Error, Result};
use crate::field::{CubicFieldRecord, Invariants, Signature, SignatureFilter};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Conditioning {
    None,
    /// local conditions in the form accepted by `LocalConditionSet::parse`
    Local { conditions: String },
    FixedNu { s: u32 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurveyConfig {
    /// fields with |disc| < x_max are enumerated
    pub x_max: i64,
    pub checkpoints: Vec<i64>,
    /// class groups are computed for |disc| < invariants_max
    pub invariants_max: i64,
    pub signature: SignatureFilter,
    pub s: Vec<u64>,
    pub conditioning: Conditioning,
    /// use narrow class groups in conditioned comparisons
    pub plus: bool,
    pub include_cyclic: bool,
    /// fields with |disc| ≤ this are rechecked with the oracle (0 disables)
    pub oracle_threshold: u64,
    pub parallelism: usize,
    pub shard_width: i64,
    pub cache: Option<PathBuf>,
    pub classgroup: ClassGroupConfig,
}

impl Default for SurveyConfig {
    fn default() -> Self {
        SurveyConfig {
            x_max: 1_000_000,
            checkpoints: vec![10_000, 100_000, 1_000_000],
            invariants_max: 100_000,
            signature: SignatureFilter::Both,
            s: vec![],
            conditioning: Conditioning::None,
            plus: false,
            include_cyclic: false,
            oracle_threshold: 0,
            parallelism: 1,
            shard_width: 5_000,
            cache: None,
            classgroup: ClassGroupConfig::default(),
        }
    }
}

impl SurveyConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: SurveyConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn local_conditions(&self) -> Result<Option<LocalConditionSet>> {
        match &self.conditioning {
            Conditioning::Local { conditions } => Ok(Some(LocalConditionSet::parse(conditions).map_err(Error::Config)?)),
            _ => Ok(None),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.x_max < 2 {
            return bad("x_max must be at least 2".into());
        }
        if self.checkpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("checkpoints must be strictly increasing".into());
        }
        if self.checkpoints.iter().any(|&x| x > self.x_max || x < 1) {
            return bad("checkpoints must lie in [1, x_max]".into());
        }
        if self.parallelism == 0 || self.shard_width <= 0 {
            return bad("parallelism and shard_width must be positive".into());
        }
        let distinct: BTreeSet<u64> = self.s.iter().copied().collect();
        if distinct.len() != self.s.len() || self.s.iter().any(|&p| !crate::arith::is_prime(p)) {
            return bad(format!("S must list distinct primes, got {:?}", self.s));
        }
        match &self.conditioning {
            Conditioning::None => {}
            Conditioning::Local { .. } => {
                let sigma = self.local_conditions()?.unwrap();
                if sigma.primes().into_iter().collect::<BTreeSet<_>>() != distinct {
                    return bad("local conditions must be given for exactly the primes of S".into());
                }
            }
            &Conditioning::FixedNu { s } => {
                let n = self.s.len() as u32;
                if s < n || s > 3 * n {
                    return Err(Error::NuRange { s: s as i64, lo: n as i64, hi: 3 * n as i64 });
                }
            }
        }
        Ok(())
    }

    fn checkpoints(&self) -> Vec<i64> {
        if self.checkpoints.is_empty() {
            vec![self.x_max]
        } else {
            self.checkpoints.clone()
        }
    }
}

fn tag(sig: Signature) -> &'static str {
    match sig {
        Signature::TotallyReal => "real",
        Signature::Complex => "complex",
    }
}

fn compute_shard(cfg: &SurveyConfig, forms: &[crate::BinaryCubicForm]) -> Result<Vec<CubicFieldRecord>> {
    forms
        .iter()
        .map(|&f| {
            let mut r = CubicFieldRecord::from_canonical_form(f);
            r.fill_splitting(&cfg.s);
            if r.disc.abs() < cfg.invariants_max {
                invariants::fill(&mut r, &cfg.s, &cfg.classgroup)?;
            }
            Ok(r)
        })
        .collect()
}

/// Loads a cached shard, completing records that are still pending but now
/// fall under `invariants_max`. Returns whether anything changed.
fn complete_shard(cfg: &SurveyConfig, recs: &mut [CubicFieldRecord]) -> Result<bool> {
    let mut changed = false;
    for r in recs.iter_mut() {
        if r.invariants == Invariants::Pending && r.disc.abs() < cfg.invariants_max {
            invariants::fill(r, &cfg.s, &cfg.classgroup)?;
            changed = true;
        }
    }
    Ok(changed)
}

/// Records for every field in the survey range, taking finished shards from
/// the cache and computing (and caching) the rest.
pub fn resume(cfg: &SurveyConfig) -> Result<Vec<CubicFieldRecord>> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| {
        let forms = enumerate::enumerate_forms(cfg.x_max, cfg.signature, cfg.include_cyclic, 1.0);
        let mut shards: BTreeMap<(&'static str, i64), Vec<crate::BinaryCubicForm>> = BTreeMap::new();
        for f in forms {
            let d = f.disc() as i64;
            let lo = d.abs() / cfg.shard_width * cfg.shard_width;
            shards.entry((tag(Signature::of_disc(d)), lo)).or_default().push(f);
        }
        if let Some(dir) = &cfg.cache {
            std::fs::create_dir_all(dir)?;
        }
        let shards: Vec<_> = shards.into_iter().collect();
        let done: Vec<Vec<CubicFieldRecord>> = shards
            .par_iter()
            .map(|((t, lo), forms)| {
                let path = cfg.cache.as_ref().map(|d| cache::shard_path(d, t, *lo, lo + cfg.shard_width));
                if let Some(p) = path.as_ref().filter(|p| p.exists()) {
                    // a shard cached under another x_max may hold more or fewer forms
                    let mut stored: BTreeMap<_, _> = cache::read(p, &cfg.s)?.into_iter().map(|r| (r.form, r)).collect();
                    let mut changed = false;
                    for f in forms {
                        if !stored.contains_key(f) {
                            stored.insert(*f, compute_shard(cfg, &[*f])?.remove(0));
                            changed = true;
                        }
                    }
                    let mut all: Vec<_> = stored.into_values().collect();
                    changed |= complete_shard(cfg, &mut all)?;
                    all.sort_by_key(|r| (r.disc.abs(), r.form));
                    if changed {
                        cache::write(p, &cfg.s, &all)?;
                    }
                    all.retain(|r| forms.contains(&r.form));
                    return Ok(all);
                }
                let recs = compute_shard(cfg, forms)?;
                if let Some(p) = &path {
                    cache::write(p, &cfg.s, &recs)?;
                }
                Ok(recs)
            })
            .collect::<Result<_>>()?;
        cache::merge(done)
    })
}

/// An exact value with its decimal rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Value {
    pub exact: String,
    pub decimal: String,
}

impl Value {
    pub fn of(x: &BigRational) -> Value {
        Value { exact: format!("{}/{}", x.numer(), x.denom()), decimal: densities::to_decimal(x, 12) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub quantity: String,
    pub prediction: String,
    pub empirical: Value,
    pub predicted: Value,
    pub deviation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Proportions {
    pub plus_s_trivial2: Value,
    pub plus_s_equals_s: Value,
    pub all_signs: Value,
    pub floor: Value,
    /// fields where (i) ⊆ (ii) ⊆ (iii) fails
    pub nesting_violations: u64,
    /// fields where Cl⁺_S = Cl_S and "all signs" disagree
    pub sign_mismatches: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub signature: String,
    pub fields: u64,
    pub predicted_fields: Option<String>,
    pub count_ratio: Option<String>,
    pub with_invariants: u64,
    pub excluded: u64,
    pub selmer_route_mismatches: u64,
    pub oracle_checked: u64,
    pub oracle_mismatches: u64,
    pub comparisons: Vec<Comparison>,
    pub proportions: Option<Proportions>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Checkpoint {
    pub x: i64,
    pub invariants: bool,
    pub sections: Vec<Section>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportConfig {
    pub x_max: i64,
    pub invariants_max: i64,
    pub signature: SignatureFilter,
    pub s: Vec<u64>,
    pub conditioning: Conditioning,
    pub plus: bool,
    pub include_cyclic: bool,
    pub oracle_threshold: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveyReport {
    pub schema: String,
    pub config: ReportConfig,
    pub checkpoints: Vec<Checkpoint>,
}

fn ratio(num: u128, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Accumulates exact integer sums for one signature below one checkpoint.
#[derive(Default)]
struct Sums {
    fields: u64,
    ok: u64,
    excluded: u64,
    selmer_mismatch: u64,
    oracle_checked: u64,
    oracle_mismatch: u64,
    cl2: u128,
    cl_plus2: u128,
    cl_s2: u128,
    cl_plus_s2: u128,
    two_nu: u128,
    two_nu_cl_s2: u128,
    two_nu_cl_plus_s2: u128,
    selmer: u128,
    k: [u128; 4],
    has_k: bool,
    prop: [u64; 3],
    nesting: u64,
    sign_mismatch: u64,
}

impl Sums {
    fn add(&mut self, st: &FieldStats, oracle: Option<bool>) {
        self.ok += 1;
        let two_nu = 1u128 << st.nu;
        self.cl2 += st.cl2 as u128;
        self.cl_plus2 += st.cl_plus2 as u128;
        self.cl_s2 += st.cl_s2 as u128;
        self.cl_plus_s2 += st.cl_plus_s2 as u128;
        self.two_nu += two_nu;
        self.two_nu_cl_s2 += two_nu * st.cl_s2 as u128;
        self.two_nu_cl_plus_s2 += two_nu * st.cl_plus_s2 as u128;
        self.selmer += st.selmer.size() as u128;
        if st.selmer.dim != st.selmer_check.dim {
            self.selmer_mismatch += 1;
        }
        if let Some(k) = &st.kgroups {
            self.has_k = true;
            for (acc, r) in self.k.iter_mut().zip(k) {
                *acc += r.card() as u128;
            }
        }
        let flags = [st.plus_s_trivial2, st.plus_s_equals_s, st.all_signs];
        for (c, &f) in self.prop.iter_mut().zip(&flags) {
            *c += f as u64;
        }
        if (flags[0] && !flags[1]) || (flags[1] && !flags[2]) {
            self.nesting += 1;
        }
        if flags[1] != flags[2] {
            self.sign_mismatch += 1;
        }
        if let Some(agrees) = oracle {
            self.oracle_checked += 1;
            self.oracle_mismatch += (!agrees) as u64;
        }
    }
}

fn compare(out: &mut Vec<Comparison>, quantity: &str, prediction: &str, sum: u128, n: u64, predicted: BigRational) {
    let emp = ratio(sum, n);
    let dev = &emp - &predicted;
    out.push(Comparison {
        quantity: quantity.into(),
        prediction: prediction.into(),
        empirical: Value::of(&emp),
        predicted: Value::of(&predicted),
        deviation: densities::to_decimal(&dev, 12),
    });
}

fn section(cfg: &SurveyConfig, sig: Signature, x: i64, with_inv: bool, sums: &Sums, sigma: &Option<LocalConditionSet>) -> Result<Section> {
    let s = &cfg.s;
    let n = sums.ok;
    let mut cmp = Vec::new();
    if with_inv && n > 0 {
        match &cfg.conditioning {
            Conditioning::None => {
                compare(&mut cmp, "cl2", "predict_cl_avg", sums.cl2, n, densities::predict_cl_avg(sig, false, &[]));
                compare(&mut cmp, "cl_plus2", "predict_cl_avg", sums.cl_plus2, n, densities::predict_cl_avg(sig, true, &[]));
                if !s.is_empty() {
                    compare(&mut cmp, "cl_s2", "predict_cl_avg", sums.cl_s2, n, densities::predict_cl_avg(sig, false, s));
                    compare(&mut cmp, "cl_plus_s2", "predict_cl_avg", sums.cl_plus_s2, n, densities::predict_cl_avg(sig, true, s));
                    compare(&mut cmp, "two_nu", "predict_2nu_avg", sums.two_nu, n, densities::predict_2nu_avg(s));
                }
                compare(&mut cmp, "two_nu_cl_s2", "predict_2nu_cl_avg", sums.two_nu_cl_s2, n, densities::predict_2nu_cl_avg(sig, false, s));
                compare(&mut cmp, "two_nu_cl_plus_s2", "predict_2nu_cl_avg", sums.two_nu_cl_plus_s2, n, densities::predict_2nu_cl_avg(sig, true, s));
                compare(&mut cmp, "selmer", "predict_selmer_avg", sums.selmer, n, densities::predict_selmer_avg(sig, s));
                if sums.has_k {
                    for k in 0..4u32 {
                        let name = format!("k_group_n{k}");
                        compare(&mut cmp, &name, "predict_kgroup_avg", sums.k[k as usize], n, densities::predict_kgroup_avg(sig, k));
                    }
                }
            }
            Conditioning::Local { .. } => {
                let sigma = sigma.as_ref().unwrap();
                let (sum, q) = if cfg.plus { (sums.cl_plus_s2, "cl_plus_s2") } else { (sums.cl_s2, "cl_s2") };
                match sigma.single_type_excess() {
                    Some(r) => compare(&mut cmp, q, "predict_cl_avg_conditioned", sum, n, densities::predict_cl_avg_conditioned(sig, cfg.plus, r)),
                    None => compare(&mut cmp, q, "predict_cl_avg_for", sum, n, densities::predict_cl_avg_for(sig, cfg.plus, sigma)),
                }
            }
            &Conditioning::FixedNu { s: nu } => {
                let (sum, q) = if cfg.plus { (sums.cl_plus_s2, "cl_plus_s2") } else { (sums.cl_s2, "cl_s2") };
                let r = nu - s.len() as u32;
                compare(&mut cmp, q, "predict_cl_avg_conditioned", sum, n, densities::predict_cl_avg_conditioned(sig, cfg.plus, r));
                let (sum, q) = if cfg.plus { (sums.two_nu_cl_plus_s2, "two_nu_cl_plus_s2") } else { (sums.two_nu_cl_s2, "two_nu_cl_s2") };
                compare(&mut cmp, q, "predict_fixed_nu", sum, n, densities::predict_fixed_nu(sig, cfg.plus, s.len() as u32, nu)?);
            }
        }
    }
    let proportions = (with_inv && n > 0 && sig == Signature::TotallyReal).then(|| Proportions {
        plus_s_trivial2: Value::of(&ratio(sums.prop[0] as u128, n)),
        plus_s_equals_s: Value::of(&ratio(sums.prop[1] as u128, n)),
        all_signs: Value::of(&ratio(sums.prop[2] as u128, n)),
        floor: Value::of(&densities::predict_cor13_bound(s)),
        nesting_violations: sums.nesting,
        sign_mismatches: sums.sign_mismatch,
    });
    let predicted = match &cfg.conditioning {
        Conditioning::FixedNu { .. } => None,
        _ => {
            let empty = LocalConditionSet::default();
            Some(densities::predict_field_count(CountFamily::Cubic(sig), x as f64, sigma.as_ref().unwrap_or(&empty))?)
        }
    };
    Ok(Section {
        signature: tag(sig).into(),
        fields: sums.fields,
        predicted_fields: predicted.map(|p| format!("{p:.3}")),
        count_ratio: predicted.map(|p| format!("{:.6}", sums.fields as f64 / p)),
        with_invariants: n,
        excluded: sums.excluded,
        selmer_route_mismatches: sums.selmer_mismatch,
        oracle_checked: sums.oracle_checked,
        oracle_mismatches: sums.oracle_mismatch,
        comparisons: cmp,
        proportions,
    })
}

fn selected(cfg: &SurveyConfig, r: &CubicFieldRecord, sigma: &Option<LocalConditionSet>) -> bool {
    match &cfg.conditioning {
        Conditioning::None => true,
        Conditioning::Local { .. } => densities::matches_condition(r, sigma.as_ref().unwrap()),
        &Conditioning::FixedNu { s } => r.nu_s(&cfg.s) == s,
    }
}

/// Aggregates records into a report. Invariant checkpoints are those with
/// x ≤ invariants_max.
pub fn aggregate(cfg: &SurveyConfig, records: &[CubicFieldRecord]) -> Result<SurveyReport> {
    cfg.validate()?;
    let sigma = cfg.local_conditions()?;
    let stats: Vec<Option<(FieldStats, Option<bool>)>> = records
        .par_iter()
        .map(|r| match &r.invariants {
            Invariants::Computed(g) => {
                let oracle = if r.disc.unsigned_abs() <= cfg.oracle_threshold {
                    Some(invariants::agrees_with_oracle(r, g, cfg.oracle_threshold)?)
                } else {
                    None
                };
                Ok(Some((invariants::field_stats(r, g), oracle)))
            }
            _ => Ok(None),
        })
        .collect::<Result<_>>()?;
    let sigs: Vec<Signature> =
        [Signature::TotallyReal, Signature::Complex].into_iter().filter(|&s| cfg.signature.accepts(s)).collect();
    let mut checkpoints = Vec::new();
    for x in cfg.checkpoints() {
        let with_inv = x <= cfg.invariants_max;
        let mut sections = Vec::new();
        for &sig in &sigs {
            let mut sums = Sums::default();
            for (r, st) in records.iter().zip(&stats) {
                if r.signature != sig || r.disc.abs() >= x || !selected(cfg, r, &sigma) {
                    continue;
                }
                sums.fields += 1;
                match (&r.invariants, st) {
                    (Invariants::Failed(_), _) => sums.excluded += 1,
                    (_, Some((st, oracle))) => sums.add(st, *oracle),
                    _ => {}
                }
            }
            sections.push(section(cfg, sig, x, with_inv, &sums, &sigma)?);
        }
        checkpoints.push(Checkpoint { x, invariants: with_inv, sections });
    }
    Ok(SurveyReport {
        schema: "cubicfields-report v1".into(),
        config: ReportConfig {
            x_max: cfg.x_max,
            invariants_max: cfg.invariants_max,
            signature: cfg.signature,
            s: cfg.s.clone(),
            conditioning: cfg.conditioning.clone(),
            plus: cfg.plus,
            include_cyclic: cfg.include_cyclic,
            oracle_threshold: cfg.oracle_threshold,
        },
        checkpoints,
    })
}

pub fn run_survey(cfg: &SurveyConfig) -> Result<SurveyReport> {
    let records = resume(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    pool.install(|| aggregate(cfg, &records))
}

/// The three proportions of totally real fields (Cl⁺_S[2] = 0, Cl⁺_S = Cl_S,
/// S-units of all signs) at the last invariant checkpoint.
pub fn proportion_predicates(cfg: &SurveyConfig) -> Result<Option<Proportions>> {
    let report = run_survey(cfg)?;
    Ok(report
        .checkpoints
        .iter()
        .rev()
        .find(|c| c.invariants)
        .and_then(|c| c.sections.iter().find(|s| s.signature == "real"))
        .and_then(|s| s.proportions.clone()))
}

impl SurveyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One row per comparison, proportion and count.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Config(e.to_string());
        w.write_record(["x", "signature", "quantity", "prediction", "empirical", "empirical_decimal", "predicted", "predicted_decimal", "deviation", "fields"])
            .map_err(csv_err)?;
        for c in &self.checkpoints {
            for s in &c.sections {
                let x = c.x.to_string();
                let fields = s.fields.to_string();
                if let (Some(p), Some(r)) = (&s.predicted_fields, &s.count_ratio) {
                    w.write_record([&x, &s.signature, "field_count", "predict_field_count", &fields, &fields, p, p, r, &fields]).map_err(csv_err)?;
                }
                for k in &s.comparisons {
                    w.write_record([
                        &x,
                        &s.signature,
                        &k.quantity,
                        &k.prediction,
                        &k.empirical.exact,
                        &k.empirical.decimal,
                        &k.predicted.exact,
                        &k.predicted.decimal,
                        &k.deviation,
                        &fields,
                    ])
                    .map_err(csv_err)?;
                }
                if let Some(p) = &s.proportions {
                    for (name, v) in [("plus_s_trivial2", &p.plus_s_trivial2), ("plus_s_equals_s", &p.plus_s_equals_s), ("all_signs", &p.all_signs)] {
                        w.write_record([&x, &s.signature, name, "predict_cor13_bound", &v.exact, &v.decimal, &p.floor.exact, &p.floor.decimal, "", &fields])
                            .map_err(csv_err)?;
                    }
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(x: i64) -> SurveyConfig {
        SurveyConfig { x_max: x, checkpoints: vec![x], invariants_max: x, shard_width: 500, ..Default::default() }
    }

    #[test]
    fn smallest_complex_fields() {
        let cfg = SurveyConfig { signature: SignatureFilter::Complex, checkpoints: vec![30, 50], ..small(50) };
        let recs = resume(&cfg).unwrap();
        assert_eq!(recs.iter().map(|r| r.disc).collect::<Vec<_>>(), vec![-23, -31, -44]);
        let rep = aggregate(&cfg, &recs).unwrap();
        assert_eq!(rep.checkpoints[0].sections[0].fields, 1);
        let sec = &rep.checkpoints[1].sections[0];
        assert_eq!(sec.fields, 3);
        assert_eq!(sec.comparisons[0].quantity, "cl2");
        assert_eq!(sec.comparisons[0].empirical.exact, "1/1");
    }

    #[test]
    fn config_validation() {
        assert!(SurveyConfig { checkpoints: vec![10, 5], ..small(100) }.validate().is_err());
        assert!(SurveyConfig { checkpoints: vec![1000], ..small(100) }.validate().is_err());
        assert!(SurveyConfig { s: vec![2, 2], ..small(100) }.validate().is_err());
        let local = Conditioning::Local { conditions: "3:1^3".into() };
        assert!(SurveyConfig { s: vec![2], conditioning: local, ..small(100) }.validate().is_err());
        assert!(matches!(
            SurveyConfig { s: vec![2], conditioning: Conditioning::FixedNu { s: 4 }, ..small(100) }.validate(),
            Err(Error::NuRange { .. })
        ));
        let cfg = SurveyConfig::from_toml("x_max = 3000\ncheckpoints = [1000, 3000]\ns = [2]\n[conditioning]\nkind = \"local\"\nconditions = \"2:1^3\"\n").unwrap();
        assert_eq!(cfg.s, vec![2]);
        assert!(SurveyConfig::from_toml("x_max = 10\nbogus = 1\n").is_err());
    }

    #[test]
    fn conditioned_survey_uses_matching_fields() {
        let cfg = SurveyConfig {
            s: vec![2],
            conditioning: Conditioning::Local { conditions: "2:1^1+1^1+1^1".into() },
            ..small(3000)
        };
        let recs = resume(&cfg).unwrap();
        let rep = aggregate(&cfg, &recs).unwrap();
        for sec in &rep.checkpoints[0].sections {
            let sig = if sec.signature == "real" { Signature::TotallyReal } else { Signature::Complex };
            let expect = recs.iter().filter(|r| r.signature == sig && r.splitting_at(2).r() == 3).count() as u64;
            assert_eq!(sec.fields, expect);
            assert_eq!(sec.comparisons[0].prediction, "predict_cl_avg_conditioned");
            let want = densities::predict_cl_avg_conditioned(sig, false, 2);
            assert_eq!(sec.comparisons[0].predicted, Value::of(&want));
        }
    }

    #[test]
    fn cache_resume_and_threads_give_identical_reports() {
        let dir = tempfile::tempdir().unwrap();
        let base = SurveyConfig { s: vec![2], checkpoints: vec![1500, 4000], ..small(4000) };
        let fresh = run_survey(&base).unwrap().to_json();
        let cached = SurveyConfig { cache: Some(dir.path().to_path_buf()), parallelism: 3, ..base.clone() };
        assert_eq!(run_survey(&cached).unwrap().to_json(), fresh);
        // drop every other shard, as after an interrupted run
        let mut files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        for f in files.iter().step_by(2) {
            std::fs::remove_file(f).unwrap();
        }
        assert_eq!(run_survey(&cached).unwrap().to_json(), fresh);
        assert_eq!(run_survey(&SurveyConfig { parallelism: 2, ..cached }).unwrap().to_json(), fresh);
    }
}
