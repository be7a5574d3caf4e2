use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use cubicfields::classgroup::{ClassGroup, ClassGroupConfig};
use cubicfields::densities::{self, CountFamily, LocalConditionSet};
use cubicfields::enumerate;
use cubicfields::harness::invariants;
use cubicfields::harness::survey::{self, SurveyConfig};
use cubicfields::numfield::NumberField;
use cubicfields::selmer;
use cubicfields::{BinaryCubicForm, CubicFieldRecord, Error, Signature, SignatureFilter};

#[derive(Parser)]
#[command(name = "cubicfields", version, about = "Cubic fields, 2-torsion in class groups, and predicted averages")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// List cubic fields with |disc| ≤ X
    Enumerate {
        #[arg(long)]
        max_disc: i64,
        #[arg(long, default_value = "both")]
        signature: SignatureFilter,
        #[arg(long)]
        include_cyclic: bool,
        /// print counts against the predicted leading term instead of fields
        #[arg(long)]
        counts: bool,
    },
    /// Class groups, S-quotients, Selmer sizes and K-group ranks
    Invariants {
        /// primes of S, comma separated
        #[arg(long, value_delimiter = ',')]
        s: Vec<u64>,
        #[arg(long)]
        narrow: bool,
        /// a single form a,b,c,d
        #[arg(long, conflicts_with = "max_disc")]
        form: Option<String>,
        #[arg(long)]
        max_disc: Option<i64>,
        #[arg(long, default_value = "both")]
        signature: SignatureFilter,
    },
    /// Run a survey described by a TOML file
    Survey {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Predicted averages
    Predict {
        #[arg(long)]
        theorem: Theorem,
        #[arg(long, value_delimiter = ',')]
        s: Vec<u64>,
        #[arg(long, default_value = "real")]
        signature: Signature,
        #[arg(long)]
        plus: bool,
        /// Σ(r_p − 1) for conditioned averages
        #[arg(long)]
        r: Option<u32>,
        /// local conditions such as "2:1^3;3:all"
        #[arg(long)]
        conditions: Option<String>,
        /// fixed value of ν_S
        #[arg(long)]
        nu: Option<u32>,
        #[arg(long)]
        n_mod_4: Option<u32>,
        /// discriminant bound for field counts
        #[arg(long)]
        x: Option<f64>,
    },
    /// Local masses at a prime
    Masses {
        #[arg(long)]
        p: u64,
    },
    /// Compare the main class group computation with the oracle
    VerifyOracle {
        #[arg(long)]
        max_disc: i64,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        s: Vec<u64>,
        #[arg(long, default_value = "both")]
        signature: SignatureFilter,
    },
    /// Predicted (and optionally empirical) averages of |K_{2n}(𝒪_K)[2]|
    Kgroups {
        #[arg(long)]
        n_mod_4: u32,
        #[arg(long)]
        max_disc: Option<i64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    #[value(name = "1.1")]
    T11,
    #[value(name = "1.2")]
    T12,
    #[value(name = "1.4")]
    T14,
    #[value(name = "1.5")]
    T15,
    #[value(name = "1.6")]
    T16,
    #[value(name = "3.2")]
    T32,
    #[value(name = "5.2")]
    T52,
    #[value(name = "5.4")]
    T54,
    #[value(name = "5.5")]
    T55,
    #[value(name = "cor1.3")]
    Cor13,
}

fn show(x: &BigRational) -> String {
    format!("{}/{}\t{}", x.numer(), x.denom(), densities::to_decimal(x, 12))
}

fn groups(d: &[u64]) -> String {
    if d.is_empty() {
        "[]".into()
    } else {
        format!("{d:?}")
    }
}

fn parse_form(s: &str) -> Result<BinaryCubicForm, Error> {
    let v: Vec<i64> = s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| Error::Config(format!("bad form {s:?}")))?;
    let v: [i64; 4] = v.try_into().map_err(|_| Error::Config("a form has 4 coefficients".into()))?;
    Ok(BinaryCubicForm::from(v))
}

fn records(max_disc: i64, signature: SignatureFilter, include_cyclic: bool) -> Vec<CubicFieldRecord> {
    enumerate::enumerate(max_disc + 1, signature, include_cyclic)
}

fn run(cli: Cli) -> Result<bool, Error> {
    let mut out = std::io::stdout().lock();
    match cli.cmd {
        Cmd::Enumerate { max_disc, signature, include_cyclic, counts } => {
            let recs = records(max_disc, signature, include_cyclic);
            if counts {
                for sig in [Signature::TotallyReal, Signature::Complex] {
                    if !signature.accepts(sig) {
                        continue;
                    }
                    let n = recs.iter().filter(|r| r.signature == sig).count();
                    let pred = densities::predict_field_count(CountFamily::Cubic(sig), max_disc as f64, &LocalConditionSet::default())?;
                    writeln!(out, "{sig}\t{n}\tpredicted {pred:.1}\tratio {:.6}", n as f64 / pred)?;
                }
            } else {
                for r in &recs {
                    writeln!(out, "{}\t{}\t{}{}", r.disc, r.form, r.signature, if r.is_cyclic { "\tcyclic" } else { "" })?;
                }
            }
        }
        Cmd::Invariants { s, narrow, form, max_disc, signature } => {
            let recs = match (form, max_disc) {
                (Some(f), _) => {
                    let f = parse_form(&f)?.reduce()?;
                    if !enumerate::is_maximal(&f, f.disc()) {
                        return Err(Error::Config(format!("{f} is not maximal")));
                    }
                    vec![CubicFieldRecord::from_canonical_form(f)]
                }
                (None, Some(x)) => records(x, signature, false),
                (None, None) => return Err(Error::Config("give --form or --max-disc".into())),
            };
            let mut chain = s.clone();
            if !chain.contains(&2) {
                chain.push(2);
            }
            let cfg = ClassGroupConfig::default();
            writeln!(out, "disc\tform\tcl\tcl_s\tnu\tselmer\tselmer_units\tk_ranks")?;
            for r in recs {
                let cg = match ClassGroup::compute(NumberField::new(r.form), &chain, &cfg) {
                    Ok(cg) => cg,
                    Err(e) => {
                        writeln!(out, "{}\t{}\tfailed: {e}", r.disc, r.form)?;
                        continue;
                    }
                };
                let cl = if narrow { cg.narrow_class_group()? } else { cg.class_group() };
                let cl_s = cg.s_quotient(&s, narrow)?;
                let plain_s = cg.s_quotient(&s, false)?;
                let nu = r.nu_s(&s);
                let sel = selmer::selmer_size_formula(r.signature, nu, &plain_s);
                let sel_units = match cg.s_unit_data(&s) {
                    Ok(u) => selmer::selmer_size_exact_sequence(&u, &plain_s).size().to_string(),
                    Err(e) => format!("failed: {e}"),
                };
                let (c2, c2p) = (cg.s_quotient(&[2], false)?, cg.s_quotient(&[2], true)?);
                let ranks: Vec<String> = [4u64, 1, 2, 3]
                    .iter()
                    .map(|&n| selmer::k_rank(r.signature, r.nu_s(&[2]), &c2, &c2p, n).expect("n > 0").rank.to_string())
                    .collect();
                writeln!(out, 
                    "{}\t{}\t{}\t{}\t{nu}\t{}\t{sel_units}\t{}",
                    r.disc,
                    r.form,
                    groups(&cl.elementary_divisors),
                    groups(&cl_s.elementary_divisors),
                    sel.size(),
                    ranks.join(",")
                )?;
            }
        }
        Cmd::Survey { config, format, out: dest } => {
            let cfg = SurveyConfig::from_toml(&std::fs::read_to_string(&config)?)?;
            let rep = survey::run_survey(&cfg)?;
            let text = match format {
                Format::Json => rep.to_json(),
                Format::Csv => rep.to_csv()?,
            };
            match dest {
                Some(p) => std::fs::write(p, text)?,
                None => write!(out, "{text}")?,
            }
        }
        Cmd::Predict { theorem, s, signature, plus, r, conditions, nu, n_mod_4, x } => {
            let sigma = conditions.as_deref().map(LocalConditionSet::parse).transpose().map_err(Error::Config)?;
            let value = match theorem {
                Theorem::T11 => densities::predict_cl_avg(signature, plus, &[]),
                Theorem::T12 => densities::predict_cl_avg(signature, plus, &s),
                Theorem::T14 => match (r, &sigma) {
                    (Some(r), _) => densities::predict_cl_avg_conditioned(signature, plus, r),
                    (None, Some(sigma)) => densities::predict_cl_avg_for(signature, plus, sigma),
                    (None, None) => return Err(Error::Config("1.4 needs --r or --conditions".into())),
                },
                Theorem::T15 => densities::predict_selmer_avg(signature, &s),
                Theorem::T16 => {
                    for n in n_mod_4.map(|n| vec![n]).unwrap_or_else(|| (0..4).collect()) {
                        writeln!(out, "n≡{n}\t{}", show(&densities::predict_kgroup_avg(signature, n)))?;
                    }
                    return Ok(true);
                }
                Theorem::T32 => {
                    let x = x.ok_or_else(|| Error::Config("3.2 needs --x".into()))?;
                    let c = densities::predict_field_count(CountFamily::Cubic(signature), x, &sigma.unwrap_or_default())?;
                    writeln!(out, "{c:.6}")?;
                    return Ok(true);
                }
                Theorem::T52 => densities::predict_2nu_avg(&s),
                Theorem::T54 => {
                    let nu = nu.ok_or_else(|| Error::Config("5.4 needs --nu".into()))?;
                    densities::predict_fixed_nu(signature, plus, s.len() as u32, nu)?
                }
                Theorem::T55 => densities::predict_2nu_cl_avg(signature, plus, &s),
                Theorem::Cor13 => densities::predict_cor13_bound(&s),
            };
            writeln!(out, "{}", show(&value))?;
        }
        Cmd::Masses { p } => {
            if !cubicfields::arith::is_prime(p) {
                return Err(Error::Config(format!("{p} is not prime")));
            }
            writeln!(out, "r\tclosed form\ttame enumeration")?;
            for r in 1..=3 {
                let tame = match densities::mass_tame_bruteforce(p, r) {
                    Ok(m) => show(&m),
                    Err(_) => "-".into(),
                };
                writeln!(out, "{r}\t{}\t{tame}", show(&densities::mass_sigma_r(p, r)))?;
            }
            writeln!(out, "total\t{}", show(&densities::total_mass(p)))?;
            writeln!(out, "tilde ratio\t{}", show(&densities::tilde_ratio_all(p)))?;
            for t in cubicfields::splitting::SplittingType::all() {
                writeln!(out, "{t}\t{}", show(&densities::descriptor_mass(p, &t.parts)))?;
            }
        }
        Cmd::VerifyOracle { max_disc, s, signature } => {
            let recs = records(max_disc, signature, false);
            let cfg = ClassGroupConfig::default();
            let start = Instant::now();
            let mut bad = 0;
            for r in &recs {
                let g = invariants::group_slots(r, &s, &cfg)?;
                if !invariants::agrees_with_oracle(r, &g, max_disc.unsigned_abs())? {
                    bad += 1;
                    writeln!(out, "mismatch\t{}\t{}", r.disc, r.form)?;
                }
            }
            writeln!(out, "fields {}\tmismatches {bad}\tseconds {:.1}", recs.len(), start.elapsed().as_secs_f64())?;
            return Ok(bad == 0);
        }
        Cmd::Kgroups { n_mod_4, max_disc } => {
            for sig in [Signature::TotallyReal, Signature::Complex] {
                let pred = densities::predict_kgroup_avg(sig, n_mod_4);
                write!(out, "{sig}\tpredicted {}", show(&pred))?;
                if let Some(x) = max_disc {
                    let cfg = SurveyConfig {
                        x_max: x + 1,
                        checkpoints: vec![x + 1],
                        invariants_max: x + 1,
                        signature: if sig == Signature::TotallyReal { SignatureFilter::TotallyReal } else { SignatureFilter::Complex },
                        s: vec![2],
                        ..Default::default()
                    };
                    let rep = survey::run_survey(&cfg)?;
                    let name = format!("k_group_n{}", n_mod_4 % 4);
                    let sec = &rep.checkpoints[0].sections[0];
                    if let Some(c) = sec.comparisons.iter().find(|c| c.quantity == name) {
                        write!(out, "\tempirical {}\t{}\tfields {}", c.empirical.exact, c.empirical.decimal, sec.with_invariants)?;
                    }
                }
                writeln!(out)?;
            }
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
