//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs as a plain binary so the lines always show.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use cubicfields::abelian::AbelianGroupData;
use cubicfields::classgroup::{ClassGroup, ClassGroupConfig};
use cubicfields::densities;
use cubicfields::enumerate;
use cubicfields::field::Invariants;
use cubicfields::harness::invariants;
use cubicfields::harness::survey::{self, Conditioning, SurveyConfig, SurveyReport};
use cubicfields::numfield::NumberField;
use cubicfields::oracle::Oracle;
use cubicfields::selmer;
use cubicfields::splitting::SplittingType;
use cubicfields::{BinaryCubicForm, CubicFieldRecord, Error, Signature, SignatureFilter};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn qi(n: i64) -> Q {
    q(n, 1)
}

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into() }
    }
}

// ---------------------------------------------------------------------------
// 1. masses

fn total_by_types(p: u64) -> Q {
    let mut sum = Q::zero();
    for r in 1..=3 {
        sum += densities::mass_sigma_r(p, r);
    }
    sum
}

fn c1() -> Outcome {
    let mut bad = Vec::new();
    for p in (2u64..=100).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)) {
        let pi = p as i64;
        let p3 = pi * pi * pi;
        if total_by_types(p) != Q::one() - q(1, p3) {
            bad.push(format!("Σμ at {p}"));
        }
        if densities::total_mass(p) != Q::one() - q(1, p3) {
            bad.push(format!("total at {p}"));
        }
        // tilde component sum over all splitting types
        let mut tilde = Q::zero();
        for t in all_types() {
            tilde += densities::tilde_mass(p, &t);
        }
        if tilde != q(5 * p3 - pi * pi + 4 * pi - 8, 8 * p3) {
            bad.push(format!("tilde sum at {p}"));
        }
        if densities::tilde_ratio_all(p) != q(5 * pi * pi + 4 * pi + 8, 8 * (pi * pi + pi + 1)) {
            bad.push(format!("tilde ratio at {p}"));
        }
    }
    Outcome::new(bad.is_empty(), if bad.is_empty() { "25 primes, exact".to_string() } else { bad.join(", ") })
}

fn all_types() -> Vec<SplittingType> {
    SplittingType::all().to_vec()
}

// ---------------------------------------------------------------------------
// 2. tame masses by brute force

/// Étale algebras of degree 3 over ℚ_p (p > 3) with r factors, listed field
/// by field: a field of degree n = e·f is tame, comes in gcd(e, p^f − 1)
/// classes, each with gcd(e, p^f − 1)·f automorphisms and discriminant
/// exponent f(e − 1). Mass is (1 − 1/p) Σ 1/(Disc·|Aut|).
fn tame_oracle(p: u64, r: u32) -> Q {
    let pi = BigInt::from(p);
    // one-factor fields of degree n = e·f
    let fields = |n: u32| -> Vec<(u32, u32, Q)> {
        let mut out = Vec::new();
        for e in 1..=n {
            if n % e != 0 {
                continue;
            }
            let f = n / e;
            let pf = pi.pow(f) - 1u32;
            let classes = BigInt::from(e).gcd(&pf);
            let disc = pi.pow(f * (e - 1));
            let aut_total = Q::from_integer(BigInt::from(f)) * Q::from_integer(classes.clone());
            let w = Q::from_integer(classes) / (aut_total * Q::from_integer(disc));
            out.push((e, f, w));
        }
        out
    };
    // ordered tuples of factor degrees summing to 3 with r parts, weight 1/r!
    let mut total = Q::zero();
    let mut comps: Vec<Vec<u32>> = Vec::new();
    fn compositions(left: u32, parts: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for d in 1..=left {
            cur.push(d);
            compositions(left - d, parts - 1, cur, out);
            cur.pop();
        }
    }
    compositions(3, r, &mut Vec::new(), &mut comps);
    let fact: i64 = (1..=r as i64).product();
    for c in comps {
        let mut prod_sets: Vec<Q> = vec![Q::one()];
        for &n in &c {
            let opts = fields(n);
            let mut next = Vec::new();
            for acc in &prod_sets {
                for (_, _, w) in &opts {
                    next.push(acc * w);
                }
            }
            prod_sets = next;
        }
        for w in prod_sets {
            total += w / qi(fact);
        }
    }
    total * (Q::one() - Q::new(BigInt::one(), pi))
}

fn c2() -> Outcome {
    let mut bad = Vec::new();
    for p in [5u64, 7, 11, 13] {
        for r in 1..=3 {
            match densities::mass_tame_bruteforce(p, r) {
                Ok(m) if m == tame_oracle(p, r) && m == densities::mass_sigma_r(p, r) => {}
                Ok(m) => bad.push(format!("p={p} r={r}: {m} vs {}", tame_oracle(p, r))),
                Err(e) => bad.push(format!("p={p} r={r}: {e}")),
            }
        }
    }
    Outcome::new(bad.is_empty(), if bad.is_empty() { "p ∈ {5,7,11,13}, r = 1..3".to_string() } else { bad.join("; ") })
}

// ---------------------------------------------------------------------------
// 3, 4. closed forms

fn c3() -> Outcome {
    use Signature::*;
    let got = [
        densities::predict_cl_avg(TotallyReal, false, &[]),
        densities::predict_cl_avg(Complex, false, &[]),
        densities::predict_cl_avg(TotallyReal, true, &[]),
        densities::predict_selmer_avg(TotallyReal, &[]),
        densities::predict_selmer_avg(Complex, &[]),
    ];
    let want = [q(5, 4), q(3, 2), qi(2), qi(10), qi(6)];
    let shown: Vec<String> = got.iter().map(|x| x.to_string()).collect();
    Outcome::new(got == want, shown.join(" "))
}

fn c4() -> Outcome {
    use Signature::*;
    let ladder = [
        densities::predict_2nu_cl_avg(TotallyReal, false, &[2]),
        densities::predict_2nu_cl_avg(Complex, false, &[2]),
        densities::predict_2nu_cl_avg(TotallyReal, true, &[2]),
    ];
    let table = [
        densities::predict_kgroup_avg(TotallyReal, 0),
        densities::predict_kgroup_avg(Complex, 0),
        densities::predict_kgroup_avg(TotallyReal, 1),
        densities::predict_kgroup_avg(Complex, 1),
        densities::predict_kgroup_avg(TotallyReal, 2),
        densities::predict_kgroup_avg(TotallyReal, 3),
        densities::predict_kgroup_avg(Complex, 2),
        densities::predict_kgroup_avg(Complex, 3),
    ];
    let ok = ladder == [q(59, 14), q(33, 7), q(40, 7)]
        && table == [q(59, 28), q(33, 14), q(118, 7), q(33, 7), q(20, 7), q(20, 7), q(33, 14), q(33, 14)];
    let shown: Vec<String> = ladder.iter().chain(&table).map(|x| x.to_string()).collect();
    Outcome::new(ok, shown.join(" "))
}

// ---------------------------------------------------------------------------
// 5. enumeration against monic polynomials

/// Integer cubic x³ + a x² + b x + c; returns its discriminant.
fn poly_disc(a: i128, b: i128, c: i128) -> i128 {
    a * a * b * b - 4 * b * b * b - 4 * a * a * a * c - 27 * c * c + 18 * a * b * c
}

fn has_integer_root(a: i64, b: i64, c: i64) -> bool {
    if c == 0 {
        return true;
    }
    let n = c.unsigned_abs() as i64;
    (1..=n).filter(|d| n % d == 0).any(|d| [d, -d].iter().any(|&x| x * x * x + a * x * x + b * x + c == 0))
}

fn small_prime_factors(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut p = 2u128;
    while p * p <= n {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Integer HNF (upper triangular) of row vectors in ℤ³; returns 3 rows.
fn hnf3(mut rows: Vec<[i128; 3]>) -> [[i128; 3]; 3] {
    let mut out = [[0i128; 3]; 3];
    for col in 0..3 {
        // gcd-combine all rows with nonzero entry in this column
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let (i, j) = (nz[0], nz[1]);
            let (x, y) = (rows[i][col], rows[j][col]);
            let k = x / y;
            let rj = rows[j];
            for t in 0..3 {
                rows[i][t] -= k * rj[t];
            }
            if rows[i][col] == 0 {
                continue;
            }
            if rows[i][col].abs() > rows[j][col].abs() {
                continue;
            }
            rows.swap(i, j);
        }
        let piv = (0..rows.len()).find(|&i| rows[i][col] != 0).expect("full rank");
        let mut r = rows.remove(piv);
        if r[col] < 0 {
            r = r.map(|x| -x);
        }
        out[col] = r;
    }
    for col in 0..3 {
        for up in 0..col {
            let k = out[up][col].div_euclid(out[col][col]);
            let rc = out[col];
            for t in 0..3 {
                out[up][t] -= k * rc[t];
            }
        }
    }
    out
}

/// Maximal order discriminant of ℚ[x]/(x³ + a x² + b x + c) by p-maximal
/// enlargement: for every p with p² dividing the running discriminant, look
/// for y = (Σ x_i ω_i)/p over the current basis ω with integral
/// characteristic polynomial.
fn field_disc(a: i64, b: i64, c: i64) -> i128 {
    let (a, b, c) = (a as i128, b as i128, c as i128);
    // multiplication by θ on the power basis (row vectors: coefficients of 1, θ, θ²)
    let m_theta = [[0, 1, 0], [0, 0, 1], [-c, -b, -a]];
    let mul = |x: &[[i128; 3]; 3], y: &[[i128; 3]; 3]| {
        let mut r = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    r[i][j] += x[i][k] * y[k][j];
                }
            }
        }
        r
    };
    let id = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    let powers = [id, m_theta, mul(&m_theta, &m_theta)];
    let mat_of = |v: &[i128; 3]| {
        let mut m = [[0i128; 3]; 3];
        for (j, p) in powers.iter().enumerate() {
            for r in 0..3 {
                for s in 0..3 {
                    m[r][s] += v[j] * p[r][s];
                }
            }
        }
        m
    };
    let integral = |v: &[i128; 3], d: i128| {
        let m = mat_of(v);
        let tr = m[0][0] + m[1][1] + m[2][2];
        if tr % d != 0 {
            return false;
        }
        let e2 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2]
            - m[1][2] * m[2][1];
        if e2 % (d * d) != 0 {
            return false;
        }
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        det % (d * d * d) == 0
    };
    let mut disc = poly_disc(a, b, c);
    // order basis: rows / den in the power basis
    let mut basis = id;
    let mut den = 1i128;
    for (p, _) in small_prime_factors(disc.unsigned_abs()) {
        let p = p as i128;
        'grow: while disc % (p * p) == 0 {
            let mut cands: Vec<[i128; 3]> = Vec::new();
            for x0 in 0..p {
                for x1 in 0..p {
                    cands.push([x0, x1, 1]);
                }
                cands.push([x0, 1, 0]);
            }
            cands.push([1, 0, 0]);
            for x in cands {
                let mut v = [0i128; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        v[j] += x[i] * basis[i][j];
                    }
                }
                if integral(&v, den * p) {
                    let mut rows: Vec<[i128; 3]> = basis.iter().map(|r| r.map(|t| t * p)).collect();
                    rows.push(v);
                    let mut h = hnf3(rows);
                    let mut nd = den * p;
                    let g = h.iter().flatten().fold(nd, |g, &t| g.gcd(&t));
                    if g > 1 {
                        h = h.map(|r| r.map(|t| t / g));
                        nd /= g;
                    }
                    basis = h;
                    den = nd;
                    disc /= p * p;
                    continue 'grow;
                }
            }
            break;
        }
    }
    disc
}

fn square_part(n: u128) -> u128 {
    small_prime_factors(n).iter().map(|&(p, k)| p.pow(k - k % 2)).product()
}

fn roots_mod(a: i64, b: i64, c: i64, p: i64) -> u8 {
    (0..p).filter(|x| (x * x % p * x + a * x % p * x + b * x + c).rem_euclid(p) == 0).count() as u8
}

/// Discriminants of all cubic fields with |d| ≤ x, from monic generators of
/// bounded T₂ (there is one with trace 0 or 1 and T₂ ≤ 1/3 + 2√x/3).
fn monic_oracle(x: i64) -> Vec<i64> {
    let t = 1.0 / 3.0 + 2.0 * (x as f64).sqrt() / 3.0;
    let bmax = t.floor() as i64;
    let cmax = (t / 3.0).powf(1.5).floor() as i64;
    let small_primes: Vec<i64> = (2..400).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect();
    // (d_K, root counts at primes ∤ poly disc, poly disc)
    let mut found: Vec<(i64, Vec<u8>, i128)> = Vec::new();
    for a in [0i64, -1] {
        for b in -bmax..=bmax {
            for c in -cmax..=cmax {
                if has_integer_root(a, b, c) {
                    continue;
                }
                let d = poly_disc(a as i128, b as i128, c as i128);
                if d.unsigned_abs() / square_part(d.unsigned_abs()) > x as u128 {
                    continue;
                }
                let dk = field_disc(a, b, c);
                if dk.abs() > x as i128 {
                    continue;
                }
                let roots = small_primes.iter().map(|&p| if d % p as i128 == 0 { u8::MAX } else { roots_mod(a, b, c, p) }).collect();
                found.push((dk as i64, roots, d));
            }
        }
    }
    // same field: same d_K and same root counts wherever both are defined
    let same = |u: &(i64, Vec<u8>, i128), v: &(i64, Vec<u8>, i128)| {
        u.0 == v.0 && u.1.iter().zip(&v.1).all(|(&s, &t)| s == u8::MAX || t == u8::MAX || s == t)
    };
    let mut reps: Vec<(i64, Vec<u8>, i128)> = Vec::new();
    for f in found {
        if let Some(r) = reps.iter_mut().find(|r| same(r, &f)) {
            // fill in primes the representative could not see
            for (s, &t) in r.1.iter_mut().zip(&f.1) {
                if *s == u8::MAX {
                    *s = t;
                }
            }
        } else {
            reps.push(f);
        }
    }
    let mut out: Vec<i64> = reps.into_iter().map(|r| r.0).collect();
    out.sort_unstable();
    out
}

const ZETA3: f64 = 1.2020569031595942;

fn c5() -> Outcome {
    let mut oracle = monic_oracle(3000);
    let mut ours: Vec<i64> = enumerate::enumerate(3001, SignatureFilter::Both, true).iter().map(|r| r.disc).collect();
    ours.sort_unstable();
    oracle.sort_unstable();
    let mut detail = format!("|d| ≤ 3000: {} fields, oracle {}", ours.len(), oracle.len());
    let mut ok = ours == oracle;
    if !ok {
        let count = |v: &[i64]| v.iter().fold(BTreeMap::<i64, i64>::new(), |mut m, &d| {
            *m.entry(d).or_default() += 1;
            m
        });
        let (mo, mt) = (count(&ours), count(&oracle));
        let keys: BTreeSet<i64> = mo.keys().chain(mt.keys()).copied().collect();
        let diff: Vec<String> = keys
            .into_iter()
            .filter(|d| mo.get(d) != mt.get(d))
            .map(|d| format!("{d}: {} vs {}", mo.get(&d).unwrap_or(&0), mt.get(&d).unwrap_or(&0)))
            .collect();
        detail += &format!(" (differ at {})", diff.join(", "));
    }
    let forms = enumerate::enumerate_forms(1_000_000, SignatureFilter::Both, true, 1.0);
    for (sig, m) in [(Signature::TotallyReal, 6.0), (Signature::Complex, 2.0)] {
        let ratios: Vec<f64> = [10_000i64, 100_000, 1_000_000]
            .iter()
            .map(|&x| {
                let n = forms.iter().filter(|f| Signature::of_disc(f.disc() as i64) == sig && (f.disc().abs() as i64) < x).count();
                n as f64 * 2.0 * m * ZETA3 / x as f64
            })
            .collect();
        ok &= ratios[2] > 0.5 && ratios[2] < 1.05 && ratios[0] < ratios[1] && ratios[1] < ratios[2];
        detail += &format!("; {sig} ratios {:.4} {:.4} {:.4}", ratios[0], ratios[1], ratios[2]);
    }
    Outcome::new(ok, detail)
}

// ---------------------------------------------------------------------------
// 6, 7. class groups against the oracle; Selmer routes

struct FieldCheck {
    disc: i64,
    failed: bool,
    oracle_ok: Option<bool>,
    selmer_ok: bool,
}

fn check_field(rec: &CubicFieldRecord, oracle_max: u64) -> FieldCheck {
    let cfg = ClassGroupConfig::default();
    let field = NumberField::new(rec.form);
    let mut rec = rec.clone();
    rec.fill_splitting(&[2, 3]);
    let cg = match ClassGroup::compute(field.clone(), &[2, 3], &cfg) {
        Ok(cg) => cg,
        Err(Error::Certification { .. } | Error::Saturation { .. }) => {
            return FieldCheck { disc: rec.disc, failed: true, oracle_ok: None, selmer_ok: true };
        }
        Err(e) => panic!("{}: {e}", rec.disc),
    };
    let mut selmer_ok = true;
    for s in [&[][..], &[2], &[2, 3]] {
        let Ok(cl_s) = cg.s_quotient(s, false) else {
            return FieldCheck { disc: rec.disc, failed: true, oracle_ok: None, selmer_ok: true };
        };
        let Ok(units) = cg.s_unit_data(s) else {
            return FieldCheck { disc: rec.disc, failed: true, oracle_ok: None, selmer_ok: true };
        };
        let a = selmer::selmer_size_formula(rec.signature, rec.nu_s(s), &cl_s);
        let b = selmer::selmer_size_exact_sequence(&units, &cl_s);
        selmer_ok &= a.dim == b.dim;
    }
    let oracle_ok = (rec.disc.unsigned_abs() <= oracle_max).then(|| {
        let o = Oracle::new(field, oracle_max).expect("oracle");
        let main: Vec<AbelianGroupData> = vec![
            cg.class_group(),
            cg.narrow_class_group().unwrap(),
            cg.s_quotient(&[2], false).unwrap(),
            cg.s_quotient(&[2], true).unwrap(),
            cg.s_quotient(&[2, 3], false).unwrap(),
            cg.s_quotient(&[2, 3], true).unwrap(),
        ];
        let theirs: Vec<AbelianGroupData> = vec![
            o.class_group(),
            o.narrow_class_group(),
            o.s_quotient(&[2], false).unwrap(),
            o.s_quotient(&[2], true).unwrap(),
            o.s_quotient(&[2, 3], false).unwrap(),
            o.s_quotient(&[2, 3], true).unwrap(),
        ];
        main == theirs
    });
    FieldCheck { disc: rec.disc, failed: false, oracle_ok, selmer_ok }
}

fn c6_c7() -> (Outcome, Outcome) {
    let t = Instant::now();
    let recs = enumerate::enumerate(100_001, SignatureFilter::Both, true);
    let checks: Vec<FieldCheck> = recs.par_iter().map(|r| check_field(r, 20_000)).collect();
    let secs = t.elapsed().as_secs_f64();
    let in6: Vec<&FieldCheck> = checks.iter().filter(|c| c.disc.unsigned_abs() <= 20_000).collect();
    let bad6: Vec<i64> = in6.iter().filter(|c| c.oracle_ok != Some(true)).map(|c| c.disc).collect();
    let o6 = Outcome::new(
        bad6.is_empty(),
        format!("{} fields, {} disagreements or failures {:?}", in6.len(), bad6.len(), &bad6[..bad6.len().min(10)]),
    );
    let failed = checks.iter().filter(|c| c.failed).count();
    let mism: Vec<i64> = checks.iter().filter(|c| !c.selmer_ok).map(|c| c.disc).collect();
    let frac = failed as f64 / checks.len() as f64;
    let o7 = Outcome::new(
        mism.is_empty() && frac < 1e-3,
        format!(
            "{} fields, {} route mismatches, {} saturation failures (fraction {:.2e}); {:.0} s with 6/7 together",
            checks.len(),
            mism.len(),
            failed,
            frac,
            secs
        ),
    );
    (o6, o7)
}

// ---------------------------------------------------------------------------
// 8-11. surveys

fn value(report: &SurveyReport, x: i64, sig: &str, quantity: &str) -> Q {
    let cp = report.checkpoints.iter().find(|c| c.x == x).expect("checkpoint");
    let sec = cp.sections.iter().find(|s| s.signature == sig).expect("section");
    let c = sec.comparisons.iter().find(|c| c.quantity == quantity).unwrap_or_else(|| panic!("{quantity} at {x}"));
    Q::from_str(&c.empirical.exact).expect("exact value")
}

/// Value at 10⁵ and whether the gap to the target shrank from 10⁴.
fn trend(report: &SurveyReport, sig: &str, quantity: &str, target: &Q) -> (Q, bool) {
    let lo = value(report, 10_000, sig, quantity);
    let hi = value(report, 100_000, sig, quantity);
    let closer = (target - &hi).abs() < (target - &lo).abs();
    (hi, closer)
}

fn show(x: &Q) -> String {
    densities::to_decimal(x, 4)
}

fn c8(main: &SurveyReport, inert: &SurveyReport, inert_plus: &SurveyReport) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let cases: [(&SurveyReport, &str, &str, Q, &str); 6] = [
        (main, "complex", "cl2", q(3, 2), "complex Cl[2]"),
        (main, "real", "cl2", q(5, 4), "real Cl[2]"),
        (main, "real", "cl_plus2", qi(2), "real Cl⁺[2]"),
        (inert, "complex", "cl_s2", q(3, 2), "2 inert complex"),
        (inert, "real", "cl_s2", q(5, 4), "2 inert real"),
        (inert_plus, "real", "cl_plus_s2", qi(2), "2 inert real narrow"),
    ];
    for (rep, sig, quantity, target, name) in cases {
        let (v, closer) = trend(rep, sig, quantity, &target);
        ok &= closer;
        parts.push(format!("{name} {} (limit {}{})", show(&v), show(&target), if closer { "" } else { ", gap grew" }));
    }
    let cx = value(main, 100_000, "complex", "cl2");
    ok &= cx > qi(1) && cx < q(3, 2);
    // the conditioned predictions are the values being approached
    ok &= densities::predict_cl_avg_conditioned(Signature::Complex, false, 0) == q(3, 2)
        && densities::predict_cl_avg_conditioned(Signature::TotallyReal, false, 0) == q(5, 4)
        && densities::predict_cl_avg_conditioned(Signature::TotallyReal, true, 0) == qi(2);
    Outcome::new(ok, parts.join("; "))
}

fn c9(main: &SurveyReport) -> Outcome {
    let cp = main.checkpoints.iter().find(|c| c.x == 100_000).expect("checkpoint");
    let sec = cp.sections.iter().find(|s| s.signature == "real").expect("real section");
    let Some(p) = &sec.proportions else { return Outcome::new(false, "no proportions") };
    let vals: Vec<Q> = [&p.plus_s_trivial2, &p.plus_s_equals_s, &p.all_signs].iter().map(|v| Q::from_str(&v.exact).unwrap()).collect();
    let ok = vals.iter().all(|v| *v >= q(3, 10)) && p.nesting_violations == 0;
    Outcome::new(
        ok,
        format!(
            "{} {} {} (floor 5/14), nesting violations {}",
            show(&vals[0]),
            show(&vals[1]),
            show(&vals[2]),
            p.nesting_violations
        ),
    )
}

fn c10(records: &[CubicFieldRecord]) -> Outcome {
    let cfg = ClassGroupConfig::default();
    let mut r = CubicFieldRecord::from_canonical_form(BinaryCubicForm::from([1, 0, -1, -1]).reduce().unwrap());
    r.fill_splitting(&[2]);
    let g = invariants::group_slots(&r, &[2], &cfg).expect("disc -23");
    let cards: Vec<u64> = invariants::field_stats(&r, &g).kgroups.expect("S = {2}").iter().map(|k| k.card()).collect();
    let mut ok = r.disc == -23 && cards == [1, 2, 1, 1];
    let mut checked = 0;
    let mut bad = 0;
    for rec in records {
        let Invariants::Computed(g) = &rec.invariants else { continue };
        let st = invariants::field_stats(rec, g);
        let k = st.kgroups.expect("S = {2}");
        checked += 1;
        let shift = k[1].rank as i64 - k[0].rank as i64;
        if shift != rec.signature.r1() as i64 {
            bad += 1;
        }
    }
    ok &= bad == 0 && checked > 0;
    Outcome::new(ok, format!("disc -23 cards {cards:?}; shift r1 on {checked} fields, {bad} violations"))
}

fn survey_cfg(x: i64, cache: Option<&Path>, parallelism: usize) -> SurveyConfig {
    SurveyConfig {
        x_max: x,
        checkpoints: [10_000.min(x), x].into_iter().collect::<BTreeSet<_>>().into_iter().collect(),
        invariants_max: x,
        s: vec![2],
        parallelism,
        shard_width: 5_000,
        cache: cache.map(Path::to_path_buf),
        ..Default::default()
    }
}

fn outputs(rep: &SurveyReport) -> (String, String) {
    (rep.to_json(), rep.to_csv().expect("csv"))
}

fn remove_some_shards(dir: &Path, every: usize) -> usize {
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    let mut n = 0;
    for f in files.iter().step_by(every) {
        std::fs::remove_file(f).unwrap();
        n += 1;
    }
    n
}

fn c11(main_cfg: &SurveyConfig, main: &SurveyReport) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    // small scale: fresh, threaded with cache, fully cached, interrupted then resumed
    let fresh = outputs(&survey::run_survey(&survey_cfg(10_000, None, 1)).unwrap());
    let dir = tempfile::tempdir().unwrap();
    let threaded = outputs(&survey::run_survey(&survey_cfg(10_000, Some(dir.path()), 4)).unwrap());
    let cached = outputs(&survey::run_survey(&survey_cfg(10_000, Some(dir.path()), 2)).unwrap());
    let dir2 = tempfile::tempdir().unwrap();
    survey::run_survey(&survey_cfg(5_000, Some(dir2.path()), 1)).unwrap();
    let resumed = outputs(&survey::run_survey(&survey_cfg(10_000, Some(dir2.path()), 3)).unwrap());
    for (name, o) in [("threads", &threaded), ("cache", &cached), ("resume", &resumed)] {
        let same = *o == fresh;
        ok &= same;
        notes.push(format!("10⁴ {name} {}", if same { "identical" } else { "DIFFERS" }));
    }
    // full scale: from cache with threads, then after deleting shards
    let reference = outputs(main);
    let mut cfg = main_cfg.clone();
    cfg.parallelism = 4;
    let again = outputs(&survey::run_survey(&cfg).unwrap());
    let removed = remove_some_shards(cfg.cache.as_ref().unwrap(), 7);
    let rebuilt = outputs(&survey::run_survey(&cfg).unwrap());
    for (name, o) in [("cached 4 threads", &again), ("shards deleted", &rebuilt)] {
        let same = *o == reference;
        ok &= same;
        notes.push(format!("10⁵ {name} {}", if same { "identical" } else { "DIFFERS" }));
    }
    notes.push(format!("{removed} shard files recomputed"));
    Outcome::new(ok, notes.join("; "))
}

// ---------------------------------------------------------------------------

/// Criterion numbers given on the command line select a subset; no numbers
/// runs everything.
fn main() -> ExitCode {
    let start = Instant::now();
    let only: BTreeSet<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let want = |n: u32| only.is_empty() || only.contains(&n);
    let mut results: BTreeMap<u32, Outcome> = BTreeMap::new();
    let mut record = |n: u32, name: &str, o: Outcome, t: Instant| {
        println!("{} {n:>2} {name}: {} [{:.1} s]", if o.ok { "PASS" } else { "FAIL" }, o.detail, t.elapsed().as_secs_f64());
        results.insert(n, o);
    };
    let simple: [(u32, &str, fn() -> Outcome); 5] = [
        (1, "mass identities", c1),
        (2, "tame masses by brute force", c2),
        (3, "degeneration at S = ∅", c3),
        (4, "ladder and K-group table", c4),
        (5, "enumeration", c5),
    ];
    for (n, name, f) in simple {
        if want(n) {
            let t = Instant::now();
            record(n, name, f(), t);
        }
    }
    if want(6) || want(7) {
        let t = Instant::now();
        let (o6, o7) = c6_c7();
        record(6, "class groups against the oracle", o6, t);
        record(7, "Selmer routes and saturation", o7, t);
    }

    if (8..=11).any(want) {
        let t = Instant::now();
        let cache = tempfile::tempdir().unwrap();
        let main_cfg = survey_cfg(100_000, Some(cache.path()), 1);
        let records = survey::resume(&main_cfg).expect("survey");
        let main = survey::aggregate(&main_cfg, &records).expect("aggregate");
        println!("     survey to 10⁵ with S = {{2}} [{:.1} s]", t.elapsed().as_secs_f64());
        if want(8) {
            let t = Instant::now();
            let conditioned = |plus: bool| {
                let cfg = SurveyConfig {
                    conditioning: Conditioning::Local { conditions: "2:1^3".into() },
                    plus,
                    ..main_cfg.clone()
                };
                survey::aggregate(&cfg, &records).expect("conditioned")
            };
            let (inert, inert_plus) = (conditioned(false), conditioned(true));
            record(8, "trends toward the predicted averages", c8(&main, &inert, &inert_plus), t);
        }
        if want(9) {
            let t = Instant::now();
            record(9, "totally real proportions", c9(&main), t);
        }
        if want(10) {
            let t = Instant::now();
            record(10, "K-group ranks", c10(&records), t);
        }
        if want(11) {
            let t = Instant::now();
            record(11, "determinism", c11(&main_cfg, &main), t);
        }
    }

    let failed = results.values().filter(|o| !o.ok).count();
    println!("{} of {} criteria pass ({:.0} s)", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
