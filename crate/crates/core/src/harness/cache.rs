//! Line-oriented record cache.
//!
//! A file starts with a header line naming the schema version and the set S.
//! Each further line is one record, tab-separated:
//!
//! ```text
//! form  disc  signature  cyclic  splitting  status  cl  cl+  cl_S  cl+_S  unit_signs  s_unit_dim  all_signs
//! ```
//!
//! `splitting` is `p:e^f+e^f;…`, group columns are elementary divisors joined
//! by `.`, unit signs are bit rows joined by `.`; `-` marks an empty list.
//! The status is `ok`, `pending`, or `failed:<reason>`; only `ok` lines carry
//! the group columns.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::field::{CubicFieldRecord, GroupSlots, Invariants};
use crate::forms::BinaryCubicForm;

pub const SCHEMA: &str = "cubicfields-cache v1";

pub fn header(s: &[u64]) -> String {
    format!("# {SCHEMA} s={}", join(s.iter(), ","))
}

fn join<T: ToString>(it: impl Iterator<Item = T>, sep: &str) -> String {
    let v: Vec<String> = it.map(|x| x.to_string()).collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(sep)
    }
}

fn bits(row: &[bool]) -> String {
    row.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

pub fn format_record(r: &CubicFieldRecord) -> String {
    let [a, b, c, d] = r.form.coeffs();
    let split = join(r.splitting.iter().map(|(p, t)| format!("{p}:{t}")), ";");
    let mut cols = vec![
        format!("{a},{b},{c},{d}"),
        r.disc.to_string(),
        r.signature.to_string(),
        (r.is_cyclic as u8).to_string(),
        split,
    ];
    match &r.invariants {
        Invariants::Pending => cols.push("pending".into()),
        Invariants::Failed(why) => cols.push(format!("failed:{}", why.replace(['\t', '\n', '\r'], " "))),
        Invariants::Computed(g) => {
            cols.push("ok".into());
            for grp in [&g.cl, &g.cl_plus, &g.cl_s, &g.cl_plus_s] {
                cols.push(join(grp.iter(), "."));
            }
            cols.push(join(g.unit_signs.iter().map(|r| bits(r)), "."));
            cols.push(g.s_unit_rank2.to_string());
            cols.push((g.s_units_all_signs as u8).to_string());
        }
    }
    cols.join("\t")
}

fn parse_list(s: &str) -> std::result::Result<Vec<u64>, String> {
    if s == "-" {
        return Ok(vec![]);
    }
    s.split('.').map(|x| x.parse().map_err(|_| format!("bad divisor {x:?}"))).collect()
}

fn parse_bits(s: &str) -> std::result::Result<Vec<Vec<bool>>, String> {
    if s == "-" {
        return Ok(vec![]);
    }
    s.split('.')
        .map(|row| {
            row.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(format!("bad bit {c:?}")),
                })
                .collect()
        })
        .collect()
}

fn parse_flag(s: &str) -> std::result::Result<bool, String> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(format!("bad flag {s:?}")),
    }
}

pub fn parse_record(line: &str, s: &[u64]) -> std::result::Result<CubicFieldRecord, String> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() < 6 {
        return Err(format!("expected at least 6 columns, found {}", cols.len()));
    }
    let coeffs: Vec<i64> = cols[0].split(',').map(|x| x.parse().map_err(|_| format!("bad coefficient {x:?}"))).collect::<std::result::Result<_, _>>()?;
    let [a, b, c, d]: [i64; 4] = coeffs.try_into().map_err(|_| "form needs 4 coefficients".to_string())?;
    let mut r = CubicFieldRecord::from_canonical_form(BinaryCubicForm::new(a, b, c, d));
    if cols[1] != r.disc.to_string() {
        return Err(format!("discriminant {} does not match form", cols[1]));
    }
    if cols[2] != r.signature.to_string() {
        return Err(format!("signature {} does not match form", cols[2]));
    }
    if parse_flag(cols[3])? != r.is_cyclic {
        return Err("cyclic flag does not match form".into());
    }
    if cols[4] != "-" {
        for item in cols[4].split(';') {
            let (p, t) = item.split_once(':').ok_or_else(|| format!("bad splitting {item:?}"))?;
            r.splitting.insert(p.parse().map_err(|_| format!("bad prime {p:?}"))?, t.parse()?);
        }
    }
    let status = cols[5];
    r.invariants = if status == "pending" {
        Invariants::Pending
    } else if let Some(why) = status.strip_prefix("failed:") {
        Invariants::Failed(why.to_string())
    } else if status == "ok" {
        if cols.len() != 13 {
            return Err(format!("expected 13 columns, found {}", cols.len()));
        }
        Invariants::Computed(GroupSlots {
            s: s.to_vec(),
            cl: parse_list(cols[6])?,
            cl_plus: parse_list(cols[7])?,
            cl_s: parse_list(cols[8])?,
            cl_plus_s: parse_list(cols[9])?,
            unit_signs: parse_bits(cols[10])?,
            s_unit_rank2: cols[11].parse().map_err(|_| format!("bad dimension {:?}", cols[11]))?,
            s_units_all_signs: parse_flag(cols[12])?,
        })
    } else {
        return Err(format!("unknown status {status:?}"));
    };
    if !matches!(r.invariants, Invariants::Computed(_)) && cols.len() != 6 {
        return Err(format!("expected 6 columns, found {}", cols.len()));
    }
    Ok(r)
}

/// Writes records atomically (temporary file, then rename).
pub fn write(path: &Path, s: &[u64], records: &[CubicFieldRecord]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = std::io::BufWriter::new(fs::File::create(&tmp)?);
        writeln!(w, "{}", header(s))?;
        for r in records {
            writeln!(w, "{}", format_record(r))?;
        }
        w.flush()?;
    }
    fs::rename(tmp, path)?;
    Ok(())
}

pub fn read(path: &Path, s: &[u64]) -> Result<Vec<CubicFieldRecord>> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut out = Vec::new();
    let mut lines = reader.lines();
    let first = lines.next().transpose()?.unwrap_or_default();
    if first != header(s) {
        return Err(Error::CorruptRecord { line: 1, reason: format!("header {first:?} does not match {:?}", header(s)) });
    }
    for (i, line) in lines.enumerate() {
        let line = line?;
        let rec = parse_record(&line, s).map_err(|reason| Error::CorruptRecord { line: i + 2, reason })?;
        out.push(rec);
    }
    Ok(out)
}

/// Merges record lists keyed by form; identical duplicates collapse, differing
/// ones are an error. Output is sorted by (|disc|, form).
pub fn merge(lists: impl IntoIterator<Item = Vec<CubicFieldRecord>>) -> Result<Vec<CubicFieldRecord>> {
    let mut by_key: BTreeMap<(i64, BinaryCubicForm), CubicFieldRecord> = BTreeMap::new();
    for list in lists {
        for r in list {
            let key = (r.disc.abs(), r.form);
            match by_key.get(&key) {
                Some(old) if old != &r => {
                    let [a, b, c, d] = r.form.coeffs();
                    return Err(Error::ConflictingRecord(format!("{a},{b},{c},{d}")));
                }
                Some(_) => {}
                None => {
                    by_key.insert(key, r);
                }
            }
        }
    }
    Ok(by_key.into_values().collect())
}

/// Shard files live in a directory, one per signature and discriminant range.
pub fn shard_path(dir: &Path, tag: &str, lo: i64, hi: i64) -> PathBuf {
    dir.join(format!("{tag}-{lo:012}-{hi:012}.cache"))
}
