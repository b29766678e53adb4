//! charvar: exact resonance and characteristic-variety computations for
//! complex hyperplane arrangements.
//!
//! One subcommand per report. JSON reports are byte-deterministic: identical
//! inputs give identical bytes, with a sha-256 determinism hash embedded.
//! Text reports carry the same content plus wall-clock timing.
//!
//! Exit codes: 0 success, 2 validation error, 3 unsupported input for the
//! requested oracle, 4 exhaustive-search size bound exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use charvar_core::arrangement::{
    family, parse_defining_polynomial, Arrangement, Family, Triple,
};
use charvar_core::cert::{
    certify_sigma1_with_cap, recheck_certificate, NonvanishingCertificate, OracleMode,
    DEFAULT_PARTITION_CAP,
};
use charvar_core::chars::{component_cq, Character};
use charvar_core::lattice::{poincare_polynomial, poly_add_shifted, poly_to_string};
use charvar_core::os::{essential_resonance_exists, neighborly_partitions, SearchMode};
use charvar_core::{fox, CoreError};

#[derive(Parser)]
#[command(
    name = "charvar",
    version,
    about = "Exact resonance and characteristic varieties of hyperplane arrangements"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Flats, Poincaré polynomial, and the deletion-restriction identity.
    Lattice {
        #[command(flatten)]
        source: SourceArgs,
        /// Pivot hyperplane (label or index) for the triple identity.
        #[arg(long)]
        pivot: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Neighborly-partition search, local components, and the
    /// essential-resonance verdict.
    Resonance {
        #[command(flatten)]
        source: SourceArgs,
        /// Require a complete enumeration within this size cap (exit 4 when
        /// the input exceeds it). Without the flag the search may truncate.
        #[arg(long = "max-partition-size")]
        max_partition_size: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Certify the translated subtori C_q inside the first characteristic
    /// variety of the deleted monomial arrangement.
    Theorem {
        /// Order r >= 2 of the monomial family.
        #[arg(long)]
        r: u32,
        /// Certify a single q instead of every q = 1..r-1.
        #[arg(long)]
        q: Option<u32>,
        /// Backing for the corollary step: oracle | axiomatic.
        #[arg(long, default_value = "oracle")]
        oracle: String,
        /// Size cap stored into the resonance-exclusion step.
        #[arg(long = "max-partition-size", default_value_t = DEFAULT_PARTITION_CAP)]
        max_partition_size: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fox-calculus membership test of a character in Sigma_1.
    SigmaTest {
        #[command(flatten)]
        source: SourceArgs,
        /// Character JSON file ({"host": ..., "coords": [...]}).
        #[arg(long)]
        character: Option<PathBuf>,
        /// Test the generic point of the built-in component C_q
        /// (with the q below and the r of the arrangement source).
        #[arg(long)]
        cq: bool,
        /// q index for --cq.
        #[arg(long)]
        q: Option<u32>,
        /// Claimed lower bound: member iff dim H^1 >= m.
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Deconing pivot (label or index).
        #[arg(long, default_value = "0")]
        pivot: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct SourceArgs {
    /// Built-in family: monomial_full | monomial_deletion | boolean | braid.
    #[arg(long)]
    family: Option<String>,
    /// Parameter r of the monomial families.
    #[arg(long)]
    r: Option<u32>,
    /// Ambient dimension (boolean/braid families; polynomial override).
    #[arg(long)]
    dim: Option<usize>,
    /// Defining polynomial, e.g. "x1*x2*(x1^3-x2^3)".
    #[arg(long)]
    poly: Option<String>,
    /// Arrangement JSON file.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct CliError {
    code: u8,
    message: String,
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> CliError {
        let code = match &e {
            CoreError::Unsupported(_) => 3,
            CoreError::SizeBound(_) => 4,
            _ => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> CliError {
    CliError {
        code: 2,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    let started = Instant::now();
    match cmd {
        Cmd::Lattice {
            source,
            pivot,
            output,
        } => cmd_lattice(source, pivot, output, started),
        Cmd::Resonance {
            source,
            max_partition_size,
            output,
        } => cmd_resonance(source, max_partition_size, output, started),
        Cmd::Theorem {
            r,
            q,
            oracle,
            max_partition_size,
            output,
        } => cmd_theorem(r, q, &oracle, max_partition_size, output, started),
        Cmd::SigmaTest {
            source,
            character,
            cq,
            q,
            m,
            pivot,
            output,
        } => cmd_sigma_test(source, character, cq, q, m, &pivot, output, started),
    }
}

// ---------------------------------------------------------------------------
// input plumbing

fn load_arrangement(s: &SourceArgs) -> Result<Arrangement, CliError> {
    let chosen =
        s.family.is_some() as u8 + s.poly.is_some() as u8 + s.input.is_some() as u8;
    if chosen != 1 {
        return Err(invalid(
            "exactly one arrangement source is required: --family, --poly, or --input",
        ));
    }
    if let Some(name) = &s.family {
        let kind = match name.as_str() {
            "monomial_full" => Family::MonomialFull,
            "monomial_deletion" => Family::MonomialDeletion,
            "boolean" => Family::Boolean,
            "braid" => Family::Braid,
            other => {
                return Err(invalid(format!(
                    "unknown family {other:?}; use monomial_full, monomial_deletion, boolean, or braid"
                )))
            }
        };
        Ok(family(kind, s.r, s.dim)?)
    } else if let Some(poly) = &s.poly {
        Ok(parse_defining_polynomial(poly, s.dim)?)
    } else {
        let path = s.input.as_ref().expect("input source chosen");
        let text = fs::read_to_string(path)
            .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
        let raw: Arrangement = serde_json::from_str(&text)
            .map_err(|e| invalid(format!("invalid arrangement JSON: {e}")))?;
        // Rebuild through the validating constructor so a hand-edited file
        // cannot smuggle in duplicate or degenerate hyperplanes.
        Ok(Arrangement::new(
            raw.name.clone(),
            raw.ambient_dim,
            raw.conductor,
            raw.hyperplanes,
        )?)
    }
}

fn source_echo(s: &SourceArgs) -> Value {
    json!({
        "family": s.family,
        "r": s.r,
        "dim": s.dim,
        "poly": s.poly,
        "input": s.input.as_ref().map(|p| p.display().to_string()),
    })
}

fn resolve_pivot(a: &Arrangement, text: &str) -> Result<usize, CliError> {
    if let Ok(i) = text.parse::<usize>() {
        if i >= a.n() {
            return Err(invalid(format!(
                "pivot index {i} out of range for {} hyperplanes",
                a.n()
            )));
        }
        return Ok(i);
    }
    a.hyperplanes
        .iter()
        .position(|h| h.label == text)
        .ok_or_else(|| CliError::from(CoreError::UnknownLabel(text.to_string())))
}

fn arrangement_summary(a: &Arrangement) -> Value {
    json!({
        "name": a.name,
        "ambient_dim": a.ambient_dim,
        "n": a.n(),
        "central": a.is_central(),
        "labels": a.hyperplanes.iter().map(|h| h.label.clone()).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// report plumbing

fn emit(
    command: &str,
    inputs: Value,
    results: Value,
    text_lines: Vec<String>,
    output: &OutputArgs,
    started: Instant,
) -> Result<(), CliError> {
    let version = env!("CARGO_PKG_VERSION");
    let canonical = serde_json::to_string(&json!({
        "command": command,
        "inputs": inputs,
        "results": results,
        "version": version,
    }))
    .expect("serializable report");
    let hash = hex::encode(Sha256::digest(canonical.as_bytes()));

    let rendered = match output.format {
        Format::Json => {
            let report = json!({
                "version": version,
                "command": command,
                "inputs": inputs,
                "results": results,
                "determinism_hash": hash,
            });
            let mut s = serde_json::to_string_pretty(&report).expect("serializable report");
            s.push('\n');
            s
        }
        Format::Text => {
            let elapsed = started.elapsed();
            let mut s = format!("charvar {command} (v{version})\n");
            for line in &text_lines {
                s.push_str(line);
                s.push('\n');
            }
            s.push_str(&format!("determinism hash: {hash}\n"));
            s.push_str(&format!(
                "elapsed: {}.{:03} s\n",
                elapsed.as_secs(),
                elapsed.subsec_millis()
            ));
            s
        }
    };

    match &output.out {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

mod hex {
    pub fn encode(bytes: impl AsRef<[u8]>) -> String {
        bytes
            .as_ref()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// commands

fn cmd_lattice(
    source: SourceArgs,
    pivot: Option<String>,
    output: OutputArgs,
    started: Instant,
) -> Result<(), CliError> {
    let a = load_arrangement(&source)?;
    let poincare = poincare_polynomial(&a);
    let census: Vec<Value> = a
        .poset()
        .flats
        .iter()
        .map(|f| {
            json!({
                "hyperplanes": f
                    .hyperplane_indices
                    .iter()
                    .map(|&i| a.hyperplanes[i].label.clone())
                    .collect::<Vec<_>>(),
                "rank": f.rank,
                "mobius": f.mobius,
            })
        })
        .collect();
    let rank2: std::collections::BTreeMap<usize, usize> = a.poset().rank2_census();

    let mut text = vec![
        format!("arrangement: {} (n = {}, ambient dim {})", a.name, a.n(), a.ambient_dim),
        format!("poincare polynomial: {}", poly_to_string(&poincare)),
        format!("flats: {} of rank >= 1", census.len()),
        format!("rank-2 census (multiplicity: count): {rank2:?}"),
    ];

    let triple_json = match &pivot {
        Some(p) => {
            let idx = resolve_pivot(&a, p)?;
            let triple = Triple::build(&a, idx)?;
            let deleted = poincare_polynomial(&triple.deleted);
            let restricted = poincare_polynomial(&triple.restricted);
            let identity_holds = poly_add_shifted(&deleted, &restricted) == poincare;
            text.push(format!(
                "triple at {}: pi(deleted) = {}, pi(restricted) = {}, identity {}",
                a.hyperplanes[idx].label,
                poly_to_string(&deleted),
                poly_to_string(&restricted),
                if identity_holds { "holds" } else { "FAILS" },
            ));
            json!({
                "pivot": a.hyperplanes[idx].label,
                "deleted_poincare": deleted,
                "restricted_poincare": restricted,
                "identity_holds": identity_holds,
            })
        }
        None => Value::Null,
    };

    let results = json!({
        "arrangement": arrangement_summary(&a),
        "poincare": poincare,
        "euler_characteristic": charvar_core::lattice::euler_characteristic(&a),
        "flats": census,
        "rank2_census": rank2,
        "triple": triple_json,
    });
    let inputs = json!({ "source": source_echo(&source), "pivot": pivot });
    emit("lattice", inputs, results, text, &output, started)
}

fn cmd_resonance(
    source: SourceArgs,
    max_partition_size: Option<usize>,
    output: OutputArgs,
    started: Instant,
) -> Result<(), CliError> {
    let a = load_arrangement(&source)?;
    let cap = max_partition_size.unwrap_or(DEFAULT_PARTITION_CAP);
    // An explicit cap is a demand for completeness: propagate the size-bound
    // error (exit 4) instead of silently truncating.
    if max_partition_size.is_some() {
        neighborly_partitions(&a, SearchMode::Exhaustive, cap)?;
    }
    let verdict = essential_resonance_exists(&a, cap)?;

    let partitions_text = match &verdict.partitions {
        Some(search) => format!(
            "{} non-trivial neighborly partitions ({} quotient classes, complete: {})",
            search.partitions.len(),
            search.quotient_size,
            search.exhaustive
        ),
        None => "not searched (a census rule decided first)".into(),
    };
    let locals: Vec<Value> = verdict
        .local_components
        .iter()
        .map(|(flat, dim)| {
            json!({
                "flat": flat.iter().map(|&i| a.hyperplanes[i].label.clone()).collect::<Vec<_>>(),
                "dimension": dim,
            })
        })
        .collect();

    let text = vec![
        format!("arrangement: {} (n = {})", a.name, a.n()),
        format!(
            "essential resonance: {} [{}]",
            match verdict.outcome {
                charvar_core::os::ResonanceOutcome::Established => "established",
                charvar_core::os::ResonanceOutcome::Excluded => "excluded",
                charvar_core::os::ResonanceOutcome::Unresolved => "unresolved",
            },
            verdict.rule
        ),
        format!("detail: {}", verdict.detail),
        format!("local components: {}", locals.len()),
        format!("partitions: {partitions_text}"),
    ];

    let results = json!({
        "arrangement": arrangement_summary(&a),
        "verdict": {
            "outcome": verdict.outcome,
            "rule": verdict.rule,
            "detail": verdict.detail,
        },
        "local_components": locals,
        "partitions": verdict.partitions,
        "partition_cap": cap,
    });
    let inputs = json!({
        "source": source_echo(&source),
        "max_partition_size": max_partition_size,
    });
    emit("resonance", inputs, results, text, &output, started)
}

fn certificate_summary(cert: &NonvanishingCertificate) -> Value {
    let order = cert
        .derivation
        .iter()
        .find(|s| s.rule == "TRANSLATION_ORDER")
        .and_then(|s| s.inputs.get("order"))
        .cloned()
        .unwrap_or(Value::Null);
    let backing = cert
        .derivation
        .iter()
        .find(|s| s.rule == "COR_2_4")
        .and_then(|s| s.inputs.get("backing"))
        .cloned()
        .unwrap_or(Value::Null);
    json!({
        "q": cert.claim.q,
        "translation_order": order,
        "backing": backing,
        "fully_established": cert.is_fully_established(),
        "unverified_rules": cert.unverified_rules(),
    })
}

fn cmd_theorem(
    r: u32,
    q: Option<u32>,
    oracle: &str,
    cap: usize,
    output: OutputArgs,
    started: Instant,
) -> Result<(), CliError> {
    let mode: OracleMode = oracle.parse()?;
    if r < 2 {
        return Err(invalid("the monomial family needs r >= 2"));
    }
    let qs: Vec<u32> = match q {
        Some(q) => vec![q],
        None => (1..r).collect(),
    };

    let mut certificates = Vec::with_capacity(qs.len());
    for &q in &qs {
        let cert = certify_sigma1_with_cap(r, q, mode, cap)?;
        recheck_certificate(&cert)?;
        certificates.push(cert);
    }

    let translated = certificates
        .iter()
        .filter(|c| {
            let essential = c
                .derivation
                .iter()
                .any(|s| s.rule == "ESSENTIALITY" && s.verified);
            let order = c
                .derivation
                .iter()
                .find(|s| s.rule == "TRANSLATION_ORDER")
                .and_then(|s| s.inputs.get("order"))
                .and_then(Value::as_u64)
                .unwrap_or(1);
            essential && c.claim.subtorus.dimension() >= 1 && order >= 2
        })
        .count();

    let summaries: Vec<Value> = certificates.iter().map(certificate_summary).collect();
    let mut text = vec![
        format!(
            "theorem pipeline for the deleted monomial arrangement, r = {r} ({} certificate{})",
            certificates.len(),
            if certificates.len() == 1 { "" } else { "s" }
        ),
        format!("essential positive-dimensional translated tori: {translated}"),
    ];
    for (cert, summary) in certificates.iter().zip(&summaries) {
        text.push(format!(
            "q = {}: translation order {}, backing {}, {}",
            cert.claim.q,
            summary["translation_order"],
            summary["backing"],
            if cert.is_fully_established() {
                "fully established".to_string()
            } else {
                format!("UNVERIFIED steps: {:?}", cert.unverified_rules())
            }
        ));
    }
    text.push("recheck: all certificates replayed".into());

    let results = json!({
        "r": r,
        "oracle_mode": mode,
        "certificate_count": certificates.len(),
        "translated_tori_count": translated,
        "rechecked": true,
        "summaries": summaries,
        "certificates": certificates,
    });
    let inputs = json!({
        "r": r,
        "q": q,
        "oracle": oracle,
        "max_partition_size": cap,
    });
    emit("theorem", inputs, results, text, &output, started)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sigma_test(
    source: SourceArgs,
    character: Option<PathBuf>,
    cq: bool,
    q: Option<u32>,
    m: usize,
    pivot: &str,
    output: OutputArgs,
    started: Instant,
) -> Result<(), CliError> {
    let a = load_arrangement(&source)?;
    let t: Character = match (&character, cq) {
        (Some(_), true) | (None, false) => {
            return Err(invalid("provide exactly one of --character or --cq"))
        }
        (Some(path), false) => {
            let text = fs::read_to_string(path)
                .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| invalid(format!("invalid character JSON: {e}")))?
        }
        (None, true) => {
            let r = source
                .r
                .ok_or_else(|| invalid("--cq needs --r on the arrangement source"))?;
            let q = q.ok_or_else(|| invalid("--cq needs --q"))?;
            component_cq(r, q)?.generic_point()?
        }
    };
    let pivot_idx = resolve_pivot(&a, pivot)?;
    let membership = fox::sigma1_membership(&a, &t, m, pivot_idx)?;

    let text = vec![
        format!("arrangement: {} (n = {})", a.name, a.n()),
        format!("pivot: {}", a.hyperplanes[pivot_idx].label),
        format!(
            "member of Sigma_1 at depth m = {m}: {} [{}]",
            membership.member, membership.rule
        ),
        match membership.h1 {
            Some(h1) => format!("dim H^1 = {h1}"),
            None => "dim H^1 not computed".into(),
        },
        format!("convention: {}", membership.convention),
    ];

    let results = json!({
        "arrangement": arrangement_summary(&a),
        "character": t,
        "m": m,
        "pivot": a.hyperplanes[pivot_idx].label,
        "membership": membership,
    });
    let inputs = json!({
        "source": source_echo(&source),
        "character": character.as_ref().map(|p| p.display().to_string()),
        "cq": cq,
        "q": q,
        "m": m,
        "pivot": pivot,
    });
    emit("sigma-test", inputs, results, text, &output, started)
}
