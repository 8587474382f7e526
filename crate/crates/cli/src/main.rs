//! Command-line surface over the workbench: construct, convert, verify,
//! audit, bound, simulate, search, and self-check, all speaking the JSON
//! artifact formats defined by the core crate.
//!
//! Exit codes follow a strict contract: 0 for success, 1 for a negative
//! verdict (failed verification, an audit that finds leakage, a failed
//! check, an exhausted search, a mismatching session), 2 for usage and IO
//! errors. Every error prints as a single machine-parsable line on
//! standard error, `error[code]: detail`.
//!
//! Verbs that produce artifacts (`mmsp vandermonde`, `mmsp search`,
//! `convert *`) always emit pretty JSON to `--out`; verbs that produce
//! reports honor `--format {text,json}`. `--out -` streams to standard
//! output and `--in -` reads standard input.

use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use spirkit::audit::{audit_nss, audit_spir, check_rank_entropy, check_share_secrecy};
use spirkit::mmsp::{mds_equivalence, search_mmsp, vandermonde_mmsp};
use spirkit::simnet::{run_session, SessionOutcome, ValueSpec};
use spirkit::spir::{mmsp_to_spir, project, spir_to_nss};
use spirkit::{
    ratio_string, AccessStructure, AuditReport, Error, FieldModulus, LinearNss, Mmsp, PartySet,
    ProjectedLinearSpir, SessionConfig, DEFAULT_BUDGET,
};

/// Number of sampled input distributions for the entropy check; the exact
/// uniform-image half always runs.
const ENTROPY_TRIALS: u32 = 64;

#[derive(Parser)]
#[command(name = "spirkit", version, about = "Finite-field protocol workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Span program construction, search, and verification.
    #[command(subcommand)]
    Mmsp(MmspCmd),
    /// Conversions between the three protocol forms.
    #[command(subcommand)]
    Convert(ConvertCmd),
    /// Exhaustive security audits over all joint states.
    #[command(subcommand)]
    Audit(AuditCmd),
    /// Bounds implied by an access structure.
    #[command(subcommand)]
    Bound(BoundCmd),
    /// Run one deterministic retrieval session.
    Simulate(SimulateArgs),
    /// Consistency checks on a single artifact.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand)]
enum MmspCmd {
    /// Verify a program against an access structure.
    Verify {
        /// Program artifact; `-` reads standard input.
        #[arg(long = "in", value_name = "PATH")]
        input: String,
        /// Access structure artifact.
        #[arg(long, value_name = "PATH")]
        access: String,
        #[command(flatten)]
        output: ReportOut,
    },
    /// Construct the threshold program from polynomial evaluations.
    Vandermonde {
        /// Field size, a prime.
        #[arg(long)]
        q: u64,
        /// Number of parties.
        #[arg(long)]
        n: usize,
        /// Reconstruction threshold: any r parties recover the secret.
        #[arg(long)]
        r: usize,
        /// Privacy threshold: any t parties learn nothing.
        #[arg(long)]
        t: usize,
        #[command(flatten)]
        out: ArtifactOut,
    },
    /// Exhaustively search for a program realizing a structure.
    Search {
        /// Access structure artifact.
        #[arg(long, value_name = "PATH")]
        access: String,
        /// Field size, a prime.
        #[arg(long)]
        q: u64,
        /// Secret width in field symbols.
        #[arg(long, default_value_t = 1)]
        x: usize,
        /// Randomness width in field symbols.
        #[arg(long, default_value_t = 1)]
        y: usize,
        /// Largest row count to try; defaults to parties + 1.
        #[arg(long = "max-z", value_name = "Z")]
        max_z: Option<usize>,
        #[command(flatten)]
        budget: BudgetArg,
        #[command(flatten)]
        out: ArtifactOut,
    },
}

#[derive(Subcommand)]
enum ConvertCmd {
    /// Reinterpret a secret-sharing scheme as its span program.
    NssToMmsp {
        /// Scheme artifact (kind "nss"); `-` reads standard input.
        #[arg(long = "in", value_name = "PATH")]
        input: String,
        #[command(flatten)]
        out: ArtifactOut,
    },
    /// Split a span program into a retrieval protocol over f files.
    MmspToSpir {
        /// Program artifact; `-` reads standard input.
        #[arg(long = "in", value_name = "PATH")]
        input: String,
        /// Number of files; at least 2.
        #[arg(long)]
        f: usize,
        #[command(flatten)]
        out: ArtifactOut,
    },
    /// Collapse a retrieval protocol into a secret-sharing scheme.
    SpirToNss {
        /// Protocol artifact (kind "spir"); `-` reads standard input.
        #[arg(long = "in", value_name = "PATH")]
        input: String,
        #[command(flatten)]
        out: ArtifactOut,
    },
    /// Re-derive the canonical projected form of a retrieval protocol.
    Project {
        /// Protocol artifact (kind "spir"); `-` reads standard input.
        #[arg(long = "in", value_name = "PATH")]
        input: String,
        #[command(flatten)]
        out: ArtifactOut,
    },
}

#[derive(Subcommand)]
enum AuditCmd {
    /// Decoding error, file leakage, and index leakage of a retrieval
    /// protocol, by exact enumeration.
    Spir {
        /// Protocol artifact (kind "spir"); `-` reads standard input.
        #[arg(long = "in", value_name = "PATH")]
        input: String,
        /// Access structure artifact.
        #[arg(long, value_name = "PATH")]
        access: String,
        #[command(flatten)]
        budget: BudgetArg,
        #[command(flatten)]
        output: ReportOut,
    },
    /// Reconstruction error and forbidden-set secret leakage of a sharing
    /// scheme, by exact enumeration.
    Nss {
        /// Scheme artifact (kind "nss"); `-` reads standard input.
        #[arg(long = "in", value_name = "PATH")]
        input: String,
        /// Access structure artifact.
        #[arg(long, value_name = "PATH")]
        access: String,
        #[command(flatten)]
        budget: BudgetArg,
        #[command(flatten)]
        output: ReportOut,
    },
}

#[derive(Subcommand)]
enum BoundCmd {
    /// Span difference of the structure and the rate bound it implies.
    Delta {
        /// Access structure artifact.
        #[arg(long, value_name = "PATH")]
        access: String,
        #[command(flatten)]
        output: ReportOut,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Threshold verification coincides with the MDS row property.
    Theorem1 {
        /// Program artifact; `-` reads standard input. The check runs on
        /// the raw entry matrix with an identity position map.
        #[arg(long = "in", value_name = "PATH")]
        input: String,
        /// Reconstruction threshold; defaults to the artifact's width x+y.
        #[arg(long)]
        r: Option<usize>,
        /// Privacy threshold; defaults to the artifact's randomness width.
        #[arg(long)]
        t: Option<usize>,
        #[command(flatten)]
        output: ReportOut,
    },
    /// The two rejection formulations agree on every party subset.
    Lemma2 {
        /// Program artifact; `-` reads standard input.
        #[arg(long = "in", value_name = "PATH")]
        input: String,
        #[command(flatten)]
        output: ReportOut,
    },
    /// Every maximal forbidden set's shares are independent of the secret.
    Lemma3 {
        /// Program artifact; `-` reads standard input.
        #[arg(long = "in", value_name = "PATH")]
        input: String,
        /// Access structure artifact.
        #[arg(long, value_name = "PATH")]
        access: String,
        #[command(flatten)]
        budget: BudgetArg,
        #[command(flatten)]
        output: ReportOut,
    },
    /// Linear-image entropy equals the rank prediction.
    Prop2 {
        /// Program artifact; `-` reads standard input.
        #[arg(long = "in", value_name = "PATH")]
        input: String,
        #[command(flatten)]
        budget: BudgetArg,
        #[command(flatten)]
        output: ReportOut,
    },
}

#[derive(Args)]
struct SimulateArgs {
    /// Protocol artifact (kind "spir"); `-` reads standard input.
    #[arg(long = "in", value_name = "PATH")]
    input: String,
    /// Requested file index, 1-based.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Responding servers as a 1-based list, e.g. `2,3`; all when omitted.
    #[arg(long, value_name = "SET")]
    respond: Option<String>,
    /// Colluding servers whose view is recorded; none when omitted.
    #[arg(long, value_name = "SET")]
    collude: Option<String>,
    /// Session seed; fixed seed means fixed trace.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: ReportOut,
}

/// Destination of an artifact-producing verb; always pretty JSON.
#[derive(Args)]
struct ArtifactOut {
    /// Output path; `-` writes standard output.
    #[arg(long, default_value = "-", value_name = "PATH")]
    out: String,
}

/// Destination and rendering of a report-producing verb.
#[derive(Args)]
struct ReportOut {
    /// Output path; `-` writes standard output.
    #[arg(long, default_value = "-", value_name = "PATH")]
    out: String,
    /// Report rendering.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct BudgetArg {
    /// Cap on enumerated joint states.
    #[arg(long, env = "SPIRKIT_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Outcome of a successfully executed verb: the exit-code half that is not
/// an error. `Fail` is a negative verdict, exit code 1.
enum Verdict {
    Pass,
    Fail,
}

enum CliError {
    Core(Error),
    Io(io::Error),
    Json(serde_json::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "error[{}]: {}", e.code(), e),
            CliError::Io(e) => write!(f, "error[io]: {e}"),
            CliError::Json(e) => write!(f, "error[bad_json]: {e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Json(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(path)?
    };
    Ok(serde_json::from_str(&text)?)
}

fn write_line(path: &str, content: &str) -> Result<(), CliError> {
    if path == "-" {
        let mut stdout = io::stdout().lock();
        stdout.write_all(content.as_bytes())?;
        stdout.write_all(b"\n")?;
    } else {
        fs::write(path, format!("{content}\n"))?;
    }
    Ok(())
}

fn write_artifact<T: Serialize>(path: &str, artifact: &T) -> Result<(), CliError> {
    write_line(path, &serde_json::to_string_pretty(artifact)?)
}

fn write_report<T: Serialize>(
    output: &ReportOut,
    artifact: &T,
    text: &str,
) -> Result<(), CliError> {
    match output.format {
        Format::Json => write_artifact(&output.out, artifact),
        Format::Text => write_line(&output.out, text),
    }
}

/// Parses a 1-based comma-separated party list; optional surrounding
/// braces are allowed, so `{2,3}` and `2,3` name the same set.
fn parse_party_set(text: &str, n: usize) -> Result<PartySet, CliError> {
    let trimmed = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut indices = Vec::new();
    for piece in trimmed.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let index: usize = piece
            .parse()
            .map_err(|_| Error::MalformedPartySet { set: text.to_string() })?;
        indices.push(index);
    }
    indices.sort_unstable();
    indices.dedup();
    Ok(PartySet::from_indices(&indices, n)?)
}

fn report_text(report: &AuditReport) -> String {
    let mut line = format!(
        "secure={} alpha={} beta_bits={}",
        report.completely_secure(),
        ratio_string(report.alpha),
        report.beta_bits
    );
    if let Some(gamma) = report.gamma_bits {
        line.push_str(&format!(" gamma_bits={gamma}"));
    }
    if let Some(rate) = report.rate {
        line.push_str(&format!(" rate={}", ratio_string(rate)));
    }
    if let Some(rr) = report.randomness_rate {
        line.push_str(&format!(" randomness_rate={}", ratio_string(rr)));
    }
    line
}

fn party_list(sets: &[PartySet]) -> String {
    sets.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn dispatch(command: Command) -> Result<Verdict, CliError> {
    match command {
        Command::Mmsp(cmd) => run_mmsp(cmd),
        Command::Convert(cmd) => run_convert(cmd),
        Command::Audit(cmd) => run_audit(cmd),
        Command::Bound(cmd) => run_bound(cmd),
        Command::Simulate(args) => run_simulate(args),
        Command::Check(cmd) => run_check(cmd),
    }
}

fn run_mmsp(cmd: MmspCmd) -> Result<Verdict, CliError> {
    match cmd {
        MmspCmd::Verify { input, access, output } => {
            let program: Mmsp = read_json(&input)?;
            let structure: AccessStructure = read_json(&access)?;
            let verdict = program.verify(&structure)?;
            let text = if verdict.is_valid() {
                format!("valid rate={}", ratio_string(verdict.rate))
            } else {
                let mut failing = verdict.failing_authorized.clone();
                failing.extend_from_slice(&verdict.failing_forbidden);
                format!(
                    "invalid failing={} rate={}",
                    party_list(&failing),
                    ratio_string(verdict.rate)
                )
            };
            write_report(&output, &verdict, &text)?;
            Ok(if verdict.is_valid() { Verdict::Pass } else { Verdict::Fail })
        }
        MmspCmd::Vandermonde { q, n, r, t, out } => {
            let modulus = FieldModulus::new(q)?;
            let program = vandermonde_mmsp(modulus, n, r, t, None)?;
            write_artifact(&out.out, &program)?;
            Ok(Verdict::Pass)
        }
        MmspCmd::Search { access, q, x, y, max_z, budget, out } => {
            let structure: AccessStructure = read_json(&access)?;
            let modulus = FieldModulus::new(q)?;
            let max_z = max_z.unwrap_or(structure.parties() + 1);
            match search_mmsp(&structure, modulus, x, y, max_z, budget.budget)? {
                Some(program) => {
                    write_artifact(&out.out, &program)?;
                    Ok(Verdict::Pass)
                }
                None => {
                    eprintln!(
                        "no program over q={q} with x={x} y={y} realizes the structure within {max_z} rows"
                    );
                    Ok(Verdict::Fail)
                }
            }
        }
    }
}

fn run_convert(cmd: ConvertCmd) -> Result<Verdict, CliError> {
    match cmd {
        ConvertCmd::NssToMmsp { input, out } => {
            let scheme: LinearNss = read_json(&input)?;
            write_artifact(&out.out, &scheme.nss_to_mmsp())?;
        }
        ConvertCmd::MmspToSpir { input, f, out } => {
            let program: Mmsp = read_json(&input)?;
            write_artifact(&out.out, &mmsp_to_spir(&program, f)?)?;
        }
        ConvertCmd::SpirToNss { input, out } => {
            let protocol: ProjectedLinearSpir = read_json(&input)?;
            write_artifact(&out.out, &spir_to_nss(&protocol)?)?;
        }
        ConvertCmd::Project { input, out } => {
            let protocol: ProjectedLinearSpir = read_json(&input)?;
            write_artifact(&out.out, &project(&protocol)?)?;
        }
    }
    Ok(Verdict::Pass)
}

fn run_audit(cmd: AuditCmd) -> Result<Verdict, CliError> {
    let (report, output) = match cmd {
        AuditCmd::Spir { input, access, budget, output } => {
            let protocol: ProjectedLinearSpir = read_json(&input)?;
            let structure: AccessStructure = read_json(&access)?;
            (audit_spir(&protocol, &structure, budget.budget)?, output)
        }
        AuditCmd::Nss { input, access, budget, output } => {
            let scheme: LinearNss = read_json(&input)?;
            let structure: AccessStructure = read_json(&access)?;
            (audit_nss(&scheme, &structure, budget.budget)?, output)
        }
    };
    write_report(&output, &report, &report_text(&report))?;
    Ok(if report.completely_secure() { Verdict::Pass } else { Verdict::Fail })
}

fn run_bound(cmd: BoundCmd) -> Result<Verdict, CliError> {
    match cmd {
        BoundCmd::Delta { access, output } => {
            let structure: AccessStructure = read_json(&access)?;
            let delta = structure.delta()?;
            let bound = structure.rate_bound()?;
            let report = serde_json::json!({
                "delta": delta,
                "bound": ratio_string(bound),
            });
            write_report(&output, &report, &format!("delta={delta} bound={}", ratio_string(bound)))?;
            Ok(Verdict::Pass)
        }
    }
}

fn run_simulate(args: SimulateArgs) -> Result<Verdict, CliError> {
    let protocol: ProjectedLinearSpir = read_json(&args.input)?;
    let n = protocol.parties();
    let respond = match &args.respond {
        Some(text) => parse_party_set(text, n)?,
        None => PartySet::full(n)?,
    };
    let collude = match &args.collude {
        Some(text) => parse_party_set(text, n)?,
        None => PartySet::from_mask(0),
    };
    let config = SessionConfig {
        protocol,
        k: args.k,
        respond,
        collude,
        seed: args.seed,
        files: ValueSpec::Random,
        shared_seed: ValueSpec::Random,
        user_rand: ValueSpec::Random,
    };
    let trace = run_session(&config)?;
    let text = match &trace.outcome {
        SessionOutcome::Reconstructed { value } => {
            format!("outcome=reconstructed value={value:?}")
        }
        SessionOutcome::Unreachable => "outcome=unreachable".to_string(),
        SessionOutcome::Mismatch { got, expected } => {
            format!("outcome=mismatch got={got:?} expected={expected:?}")
        }
    };
    write_report(&args.output, &trace, &text)?;
    Ok(match trace.outcome {
        SessionOutcome::Mismatch { .. } => Verdict::Fail,
        _ => Verdict::Pass,
    })
}

fn run_check(cmd: CheckCmd) -> Result<Verdict, CliError> {
    match cmd {
        CheckCmd::Theorem1 { input, r, t, output } => {
            let program: Mmsp = read_json(&input)?;
            let r = r.unwrap_or(program.secret_width() + program.randomness_width());
            let t = t.unwrap_or(program.randomness_width());
            let (cond_a, cond_b) = mds_equivalence(program.matrix(), r, t)?;
            let agree = cond_a == cond_b;
            let report = serde_json::json!({
                "agree": agree,
                "cond_a": cond_a,
                "cond_b": cond_b,
            });
            write_report(
                &output,
                &report,
                &format!("agree={agree} cond_a={cond_a} cond_b={cond_b}"),
            )?;
            Ok(if agree { Verdict::Pass } else { Verdict::Fail })
        }
        CheckCmd::Lemma2 { input, output } => {
            let program: Mmsp = read_json(&input)?;
            let agree = program.rejection_forms_agree()?;
            let report = serde_json::json!({ "agree": agree });
            write_report(&output, &report, &format!("agree={agree}"))?;
            Ok(if agree { Verdict::Pass } else { Verdict::Fail })
        }
        CheckCmd::Lemma3 { input, access, budget, output } => {
            let program: Mmsp = read_json(&input)?;
            let structure: AccessStructure = read_json(&access)?;
            let witness = check_share_secrecy(&program, &structure, budget.budget)?;
            let report = serde_json::json!({
                "secure": witness.is_none(),
                "witness": witness.map(|w| w.to_indices()),
            });
            let text = match witness {
                None => "secure=true".to_string(),
                Some(w) => format!("secure=false witness={w}"),
            };
            write_report(&output, &report, &text)?;
            Ok(if witness.is_none() { Verdict::Pass } else { Verdict::Fail })
        }
        CheckCmd::Prop2 { input, budget, output } => {
            let program: Mmsp = read_json(&input)?;
            let holds = check_rank_entropy(program.matrix(), ENTROPY_TRIALS, budget.budget)?;
            let report = serde_json::json!({ "match": holds });
            write_report(&output, &report, &format!("match={holds}"))?;
            Ok(if holds { Verdict::Pass } else { Verdict::Fail })
        }
    }
}
