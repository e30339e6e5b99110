//! Command-line front end for exact torus classification.
//!
//! Every verb reads JSON (inline or from a file), dispatches to the library,
//! and emits a machine-readable report to stdout (or `--out`) plus a short
//! human summary on stderr. Reports are deterministic apart from the
//! trailing wall-time field. Exit codes: 0 success, 2 input error,
//! 3 work-guard rejection.

use clap::{Parser, Subcommand};
use qtorus::alternating::{
    canonical_rep, conjecture_scan, d_group, orbit_enumeration, skew_normal_form,
    skew_normal_form_z, AltMat, DGroupMethod,
};
use qtorus::automorphism::{
    splitting_unchecked, verify_presentation, ScalarElt, SplittingMode, SplittingParams,
};
use qtorus::cohomology::h2_structure;
use qtorus::cyclic_ring::{canonical, prep_of, Modulus, PRep};
use qtorus::matrix::{lift_gl, sl_smith_normal_form, smith_normal_form, IntMat, SmithForm};
use qtorus::torus::{is_isomorphic, normal_form, tensor_decomposition, IsoWitness};
use qtorus::wire::{MatrixJson, PresentationJson};
use qtorus::{Error as LibError, DEFAULT_MAX_WORK};
use serde::Serialize;
use serde_json::{json, Value};
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "qtorus",
    about = "Exact classification of twisted group algebras of Z^n: normal forms, orbit \
             enumeration, stabilizer groups, and automorphism splittings",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Work-unit budget for brute-force scans (env QTORUS_MAX_WORK).
    #[arg(long, global = true)]
    max_work: Option<u64>,
    /// Worker threads for enumeration scans (deterministic reductions).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Two-sided diagonal normal form of a square matrix over Z/(m) or Z.
    Smith {
        /// Matrix as inline JSON {"n":..,"m":..,"rows":[[..]]} or @file.
        #[arg(long)]
        matrix: String,
        /// Use determinant-one transforms (adds the unit twist z).
        #[arg(long)]
        sl: bool,
    },
    /// Hyperbolic block normal form of an alternating matrix.
    Skewnf {
        #[arg(long)]
        matrix: String,
    },
    /// Canonical congruence-orbit representative (twist minimized).
    Canon {
        #[arg(long)]
        matrix: String,
    },
    /// Stabilizer determinant group of a block form N(chain).
    Dgroup {
        /// Comma-separated chain entries, e.g. 1,2.
        #[arg(long)]
        chain: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
    },
    /// Full orbit partition of the alternating matrices over Z/(m).
    Orbits {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
    },
    /// Scan all full chains and test whether stabilizer determinants fix h_s.
    Conjecture {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: u64,
    },
    /// Tensor normal form of a torus presentation.
    Classify {
        /// Presentation as inline JSON {"n":..,"m":..,"B":[[..]]} or @file.
        #[arg(long)]
        torus: String,
    },
    /// Graded isomorphism decision for two presentations.
    Iso {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Tensor factors of a presentation, with the transport witness.
    Decompose {
        #[arg(long)]
        torus: String,
    },
    /// Lift an invertible residue matrix with det = +-1 to GL_n(Z).
    Lift {
        #[arg(long)]
        matrix: String,
    },
    /// Check the generator relations of a candidate splitting section.
    VerifySplitting {
        /// Order of q.
        #[arg(long)]
        m: u64,
        /// sl2 or gl2.
        #[arg(long)]
        mode: String,
        #[arg(long, default_value = "1")]
        r0: String,
        #[arg(long, default_value = "1")]
        r1: String,
        #[arg(long, default_value = "1")]
        r2: String,
        /// Sign choice in s2 = +-s1 (sl2 mode): + or -.
        #[arg(long, default_value = "+")]
        sign: String,
        /// Raw s1, s2 instead of the constraint-derived values.
        #[arg(long)]
        s1: Option<String>,
        #[arg(long)]
        s2: Option<String>,
    },
    /// Factor orders of the degree-two cohomology of a sum of cyclic groups.
    H2 {
        /// Comma-separated summand orders (0 = infinite), e.g. 2,4.
        #[arg(long)]
        gamma: String,
        /// Order of the cyclic coefficient group (0 = infinite).
        #[arg(long)]
        z: u64,
    },
}

struct CliError {
    code: i32,
    msg: String,
}

impl CliError {
    fn input(msg: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            msg: msg.into(),
        }
    }
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> CliError {
        let code = match e {
            LibError::FeasibilityExceeded { .. } => 3,
            _ => 2,
        };
        CliError {
            code,
            msg: e.to_string(),
        }
    }
}

#[derive(Serialize)]
struct Provenance {
    version: &'static str,
    max_work: u64,
    threads: usize,
    conventions: Vec<&'static str>,
}

#[derive(Serialize)]
struct Report {
    schema: u32,
    verb: String,
    inputs: Value,
    result: Value,
    provenance: Provenance,
    /// Non-deterministic; everything above is byte-stable per invocation.
    wall_time_ms: u128,
}

fn main() {
    let cli = Cli::parse();
    let max_work = cli
        .max_work
        .or_else(|| {
            std::env::var("QTORUS_MAX_WORK")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(DEFAULT_MAX_WORK);
    let threads = cli.threads.unwrap_or(0);
    if threads > 0 {
        // Scans reduce with order-preserving collects, so the thread count
        // never changes a report.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let started = Instant::now();
    match run(&cli.cmd, max_work) {
        Ok((verb, inputs, result, summary)) => {
            let report = Report {
                schema: 1,
                verb,
                inputs,
                result,
                provenance: Provenance {
                    version: env!("CARGO_PKG_VERSION"),
                    max_work,
                    threads,
                    conventions: vec![
                        "block twist z canonicalized to the smallest residue of +-z D",
                        "bounds-only stabilizer groups canonicalize over the inner bound \
                         {z : z h_s = h_s}",
                    ],
                },
                wall_time_ms: started.elapsed().as_millis(),
            };
            let text = serde_json::to_string_pretty(&report).expect("report serialization");
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text + "\n") {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        std::process::exit(2);
                    }
                }
                None => println!("{text}"),
            }
            eprintln!("{summary}");
        }
        Err(e) => {
            eprintln!("error: {}", e.msg);
            std::process::exit(e.code);
        }
    }
}

type VerbOutput = (String, Value, Value, String);

fn run(cmd: &Cmd, max_work: u64) -> Result<VerbOutput, CliError> {
    match cmd {
        Cmd::Smith { matrix, sl } => {
            let mj = parse_matrix(matrix)?;
            let mat = mj.to_ring_mat()?;
            let form = if *sl {
                sl_smith_normal_form(&mat)?
            } else {
                smith_normal_form(&mat)?
            };
            let diag: Vec<i64> = form.diag.iter().map(|p| p.value()).collect();
            let summary = format!(
                "diagonal {:?}{} over {}",
                diag,
                if *sl {
                    format!(", z = {}", form.z.value())
                } else {
                    String::new()
                },
                mat.modulus()
            );
            Ok((
                if *sl { "smith-sl" } else { "smith" }.to_string(),
                json!({ "matrix": mj }),
                smith_value(&form, &mat),
                summary,
            ))
        }
        Cmd::Skewnf { matrix } => {
            let mj = parse_matrix(matrix)?;
            let alt = to_alt(&mj)?;
            let nf = if mj.m == 0 {
                skew_normal_form_z(&alt)?
            } else {
                skew_normal_form(&alt)?
            };
            let summary = format!("chain {:?}, z = {}", nf.chain_values(), nf.z.value());
            Ok((
                "skewnf".to_string(),
                json!({ "matrix": mj }),
                json!({
                    "s": nf.s,
                    "h": nf.chain_values(),
                    "z": nf.z.value(),
                    "transform": int_mat_value(&nf.g),
                    "normal": MatrixJson::from_ring_mat(
                        &nf.normal_matrix(alt.size(), alt.modulus()).to_ring_mat()
                    ),
                    "verified": nf.verify(&alt),
                }),
                summary,
            ))
        }
        Cmd::Canon { matrix } => {
            let mj = parse_matrix(matrix)?;
            let alt = to_alt(&mj)?;
            let nf = canonical_rep(&alt, max_work)?;
            let summary = format!(
                "canonical chain {:?}, z = {}",
                nf.chain_values(),
                nf.z.value()
            );
            Ok((
                "canon".to_string(),
                json!({ "matrix": mj }),
                json!({
                    "s": nf.s,
                    "h": nf.chain_values(),
                    "z": nf.z.value(),
                    "transform": int_mat_value(&nf.g),
                    "normal": MatrixJson::from_ring_mat(
                        &nf.normal_matrix(alt.size(), alt.modulus()).to_ring_mat()
                    ),
                    "verified": nf.verify(&alt),
                }),
                summary,
            ))
        }
        Cmd::Dgroup { chain, n, m } => {
            let modulus = Modulus::new(*m)?;
            let chain_vals = parse_i64_list(chain)?;
            let chain: Vec<PRep> = chain_vals
                .iter()
                .map(|&v| {
                    let (p, u) = prep_of(canonical(v, modulus));
                    if u != canonical(1, modulus) {
                        return Err(CliError::input(format!(
                            "chain entry {v} is not a canonical representative (use {})",
                            p.value()
                        )));
                    }
                    Ok(p)
                })
                .collect::<Result<_, _>>()?;
            let d = d_group(&chain, *n, modulus, max_work)?;
            let summary = format!("D = {:?} ({})", d.elements, method_name(d.method));
            Ok((
                "dgroup".to_string(),
                json!({ "chain": chain_vals, "n": n, "m": m }),
                json!({
                    "chain": d.chain.iter().map(|p| p.value()).collect::<Vec<_>>(),
                    "method": method_name(d.method),
                    "elements": d.elements,
                    "inner": d.inner,
                    "outer": d.outer,
                }),
                summary,
            ))
        }
        Cmd::Orbits { n, m } => {
            let modulus = Modulus::new(*m)?;
            let orbits = orbit_enumeration(*n, modulus, max_work)?;
            let entries: Vec<Value> = orbits
                .iter()
                .map(|o| {
                    json!({
                        "h": o.rep.chain_values(),
                        "z": o.rep.z.value(),
                        "size": o.size,
                    })
                })
                .collect();
            let total: usize = orbits.iter().map(|o| o.size).sum();
            let summary = format!("{} orbits covering {} matrices", orbits.len(), total);
            Ok((
                "orbits".to_string(),
                json!({ "n": n, "m": m }),
                json!({ "n": n, "m": m, "orbits": entries }),
                summary,
            ))
        }
        Cmd::Conjecture { n, m } => {
            let modulus = Modulus::new(*m)?;
            let entries = conjecture_scan(*n, modulus, max_work)?;
            let values: Vec<Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "chain": e.chain,
                        "holds": e.holds,
                        "equal_chain_case": e.equal_chain_case,
                        "method": method_name(e.method),
                        "D": e.d_elements,
                        "inner": e.inner,
                        "outer": e.outer,
                    })
                })
                .collect();
            let confirmed = entries.iter().filter(|e| e.holds == Some(true)).count();
            let summary = format!(
                "{} chains scanned, {} confirmed, {} undecided (evidence only, not proof)",
                entries.len(),
                confirmed,
                entries.iter().filter(|e| e.holds.is_none()).count()
            );
            Ok((
                "conjecture".to_string(),
                json!({ "n": n, "m": m }),
                json!({ "n": n, "m": m, "conjecture": values }),
                summary,
            ))
        }
        Cmd::Classify { torus } => {
            let pj = parse_presentation(torus)?;
            let t = pj.to_presentation()?;
            let nf = normal_form(&t, max_work)?;
            let summary = format!(
                "commutator order {}, {} hyperbolic factor(s), chain {:?}, z = {}, free rank {}",
                nf.commutator_order, nf.s, nf.chain, nf.z, nf.laurent_rank
            );
            Ok((
                "classify".to_string(),
                json!({ "torus": pj }),
                json!({
                    "generator_exponent": nf.generator_exponent,
                    "commutator_order": nf.commutator_order,
                    "s": nf.s,
                    "chain": nf.chain,
                    "z": nf.z,
                    "laurent_rank": nf.laurent_rank,
                    "normal": PresentationJson::from_presentation(&nf.normal),
                    "witness": witness_value(&nf.witness),
                    "witness_verified": nf.witness.verify(&t, &nf.normal),
                }),
                summary,
            ))
        }
        Cmd::Iso { a, b } => {
            let pa = parse_presentation(a)?;
            let pb = parse_presentation(b)?;
            let ta = pa.to_presentation()?;
            let tb = pb.to_presentation()?;
            let (iso, witness) = is_isomorphic(&ta, &tb, max_work)?;
            let verified = witness.as_ref().map(|w| w.verify(&ta, &tb));
            let summary = if iso {
                "graded isomorphic".to_string()
            } else {
                "not graded isomorphic".to_string()
            };
            Ok((
                "iso".to_string(),
                json!({ "a": pa, "b": pb }),
                json!({
                    "isomorphic": iso,
                    "witness": witness.as_ref().map(witness_value),
                    "witness_verified": verified,
                }),
                summary,
            ))
        }
        Cmd::Decompose { torus } => {
            let pj = parse_presentation(torus)?;
            let t = pj.to_presentation()?;
            let d = tensor_decomposition(&t, max_work)?;
            let factors: Vec<PresentationJson> = d
                .factors
                .iter()
                .map(PresentationJson::from_presentation)
                .collect();
            let summary = format!(
                "{} tensor factor(s), free rank {}",
                factors.len(),
                d.laurent_rank
            );
            Ok((
                "decompose".to_string(),
                json!({ "torus": pj }),
                json!({
                    "factors": factors,
                    "laurent_rank": d.laurent_rank,
                    "assembled": PresentationJson::from_presentation(&d.assembled),
                    "witness": witness_value(&d.witness),
                    "witness_verified": d.witness.verify(&t, &d.assembled),
                }),
                summary,
            ))
        }
        Cmd::Lift { matrix } => {
            let mj = parse_matrix(matrix)?;
            let mat = mj.to_ring_mat()?;
            let lifted = lift_gl(&mat)?;
            let summary = format!("lifted with determinant {}", lifted.det());
            Ok((
                "lift".to_string(),
                json!({ "matrix": mj }),
                json!({
                    "lifted": int_mat_value(&lifted),
                    "det": lifted.det().to_string(),
                }),
                summary,
            ))
        }
        Cmd::VerifySplitting {
            m,
            mode,
            r0,
            r1,
            r2,
            sign,
            s1,
            s2,
        } => {
            let mode_kind = match mode.as_str() {
                "sl2" => SplittingMode::Sl2,
                "gl2" => SplittingMode::Gl2,
                other => {
                    return Err(CliError::input(format!(
                        "unknown mode {other:?}; expected sl2 or gl2"
                    )))
                }
            };
            let sign_val = match sign.as_str() {
                "+" | "+1" => 1i64,
                "-" | "-1" => -1i64,
                other => {
                    return Err(CliError::input(format!(
                        "unknown sign {other:?}; expected + or -"
                    )))
                }
            };
            if *m == 0 {
                return Err(CliError::input("splitting verification needs m >= 1"));
            }
            let conductor = if m % 2 == 0 { *m } else { 2 * m };
            let r0_s = parse_scalar(r0, conductor, *m)?;
            let r1_s = parse_scalar(r1, conductor, *m)?;
            let r2_s = parse_scalar(r2, conductor, *m)?;
            let params = match (s1, s2) {
                (None, None) => match mode_kind {
                    SplittingMode::Sl2 => SplittingParams::sl2(*m, r1_s, r2_s, sign_val),
                    SplittingMode::Gl2 => SplittingParams::gl2(*m, r0_s, r1_s, r2_s),
                },
                (Some(s1), Some(s2)) => {
                    let s1_s = parse_scalar(s1, conductor, *m)?;
                    let s2_s = parse_scalar(s2, conductor, *m)?;
                    match mode_kind {
                        SplittingMode::Sl2 => SplittingParams::sl2_raw(r1_s, r2_s, s1_s, s2_s),
                        SplittingMode::Gl2 => SplittingParams::gl2_raw(r0_s, r1_s, r2_s, s1_s, s2_s),
                    }
                }
                _ => return Err(CliError::input("raw parameters need both --s1 and --s2")),
            };
            let constraint = params.check(*m).err().map(|e| e.to_string());
            let s = splitting_unchecked(*m, &params)?;
            let report = verify_presentation(&s);
            let relations: Vec<Value> = report
                .relations
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "pass": r.pass,
                        "residual": r.residual.as_ref().map(|a| {
                            a.hom_part().iter().map(|h| h.to_string()).collect::<Vec<_>>()
                        }),
                    })
                })
                .collect();
            let summary = if report.all_pass() {
                "all presentation relations pass".to_string()
            } else {
                format!(
                    "{} relation(s) fail",
                    report.relations.iter().filter(|r| !r.pass).count()
                )
            };
            Ok((
                "verify-splitting".to_string(),
                json!({
                    "m": m,
                    "mode": mode,
                    "params": {
                        "r0": params.r0.as_ref().map(|x| x.to_string()),
                        "r1": params.r1.to_string(),
                        "r2": params.r2.to_string(),
                        "s1": params.s1.to_string(),
                        "s2": params.s2.to_string(),
                    },
                }),
                json!({
                    "mode": mode,
                    "constraint_violation": constraint,
                    "relations": relations,
                    "all_pass": report.all_pass(),
                }),
                summary,
            ))
        }
        Cmd::H2 { gamma, z } => {
            let orders: Vec<u64> = parse_i64_list(gamma)?
                .into_iter()
                .map(|v| {
                    u64::try_from(v)
                        .map_err(|_| CliError::input("summand orders must be non-negative"))
                })
                .collect::<Result<_, _>>()?;
            let d = h2_structure(&orders, Modulus::new(*z)?);
            let summary = format!(
                "{} symmetric factor(s), {} alternating factor(s)",
                d.ext_factors.len(),
                d.alt_factors.len()
            );
            Ok((
                "h2".to_string(),
                json!({ "gamma": orders, "z": z }),
                json!({
                    "ext_factors": d.ext_factors,
                    "alt_factors": d.alt_factors,
                }),
                summary,
            ))
        }
    }
}

fn method_name(m: DGroupMethod) -> &'static str {
    match m {
        DGroupMethod::ClosedForm => "closed-form",
        DGroupMethod::BruteForce => "brute-force",
        DGroupMethod::BoundsOnly => "bounds-only",
    }
}

/// Inline JSON or `@path` / bare path to a JSON file.
fn read_payload(arg: &str) -> Result<String, CliError> {
    let trimmed = arg.trim();
    if trimmed.starts_with('{') {
        return Ok(trimmed.to_string());
    }
    let path = trimmed.strip_prefix('@').unwrap_or(trimmed);
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {path}: {e}")))
}

fn parse_matrix(arg: &str) -> Result<MatrixJson, CliError> {
    let text = read_payload(arg)?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::input(format!(
            "bad matrix JSON at {}:{}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn parse_presentation(arg: &str) -> Result<PresentationJson, CliError> {
    let text = read_payload(arg)?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::input(format!(
            "bad presentation JSON at {}:{}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn to_alt(mj: &MatrixJson) -> Result<AltMat, CliError> {
    let mat = mj.to_ring_mat()?;
    Ok(AltMat::from_ring_mat(&mat)?)
}

fn parse_i64_list(arg: &str) -> Result<Vec<i64>, CliError> {
    arg.split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| CliError::input(format!("bad integer {:?} in list", p.trim())))
        })
        .collect()
}

/// Scalar grammar: `*`-separated factors `q`, `q^k`, `zeta^k`, `-1`, `1`,
/// or symbol names with optional integer exponents. Unknown names become
/// free symbols. Errors carry the byte offset of the offending factor.
fn parse_scalar(text: &str, conductor: u64, q_order: u64) -> Result<ScalarElt, CliError> {
    let mut acc = ScalarElt::one(conductor);
    let mut offset = 0usize;
    for raw in text.split('*') {
        let tok = raw.trim();
        let tok_offset = offset + (raw.len() - raw.trim_start().len());
        offset += raw.len() + 1;
        if tok.is_empty() {
            return Err(CliError::input(format!(
                "empty factor at offset {tok_offset} in scalar {text:?}"
            )));
        }
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => {
                let exp: i64 = e.trim().parse().map_err(|_| {
                    CliError::input(format!(
                        "bad exponent {:?} at offset {tok_offset} in scalar {text:?}",
                        e.trim()
                    ))
                })?;
                (b.trim(), exp)
            }
            None => (tok, 1),
        };
        let factor = match base {
            "1" => ScalarElt::one(conductor),
            "-1" => ScalarElt::minus_one(conductor),
            "q" => ScalarElt::q(conductor, q_order),
            "zeta" => ScalarElt::root(conductor, 1),
            name if name.starts_with(|c: char| c.is_ascii_alphabetic())
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') =>
            {
                ScalarElt::symbol(conductor, name)
            }
            other => {
                return Err(CliError::input(format!(
                    "bad factor {other:?} at offset {tok_offset} in scalar {text:?}"
                )))
            }
        };
        acc = acc.mul(&factor.pow(exp));
    }
    Ok(acc)
}

fn smith_value(form: &SmithForm, input: &qtorus::matrix::RingMat) -> Value {
    json!({
        "diag": form.diag.iter().map(|p| p.value()).collect::<Vec<_>>(),
        "z": form.z.value(),
        "variant": match form.variant {
            qtorus::matrix::SnfVariant::Gl => "gl",
            qtorus::matrix::SnfVariant::Sl => "sl",
        },
        "g": MatrixJson::from_ring_mat(&form.g),
        "h": MatrixJson::from_ring_mat(&form.h),
        "verified": form.verify(input),
    })
}

fn int_mat_value(m: &IntMat) -> Value {
    // Integer transforms can outgrow i64; fall back to decimal strings.
    let rows = m.to_rows();
    let all_small = rows.iter().flatten().all(|v| i64::try_from(v).is_ok());
    if all_small {
        json!(rows
            .iter()
            .map(|r| r.iter().map(|v| i64::try_from(v).unwrap()).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    } else {
        json!(rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

fn witness_value(w: &IsoWitness) -> Value {
    let chi = &w.chi;
    let n = chi.size();
    json!({
        "phi": int_mat_value(&w.phi),
        "chi": {
            "diag": (0..n).map(|i| chi.diag_coeff(i)).collect::<Vec<_>>(),
            "pairs": (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .map(|(i, j)| json!([i, j, chi.pair_coeff(i, j)]))
                .collect::<Vec<_>>(),
            "linear": (0..n).map(|i| chi.linear_coeff(i)).collect::<Vec<_>>(),
        },
    })
}
