//! Command-line front end: instance files, subcommands and JSON reports.

mod instance;
mod selftest;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use instance::{canonical, FieldSpec, Instance, InstanceFile, ParseError, Parsed, Payload};

use crate::apps::{bl_membership_rank2, fmm_max_weight, fmp_lp_oracle, AppsError, BlVerdict};
use crate::degdet::{
    deg_subdet, hungarian_deg_det, symmetric_hungarian, verify_profile, DegDetError, DegreeProfile, ProfileInput, VerifyReport,
};
use crate::mvsp::{Solver, SolverKind, DEFAULT_SUBSPACE_CAP};
use crate::ratfunc::Degree;
use crate::scalar::{rng_from_seed, ExactRational};
use crate::symbolic::{delta_blowup_oracle, delta_ell_oracle, SymbolicError};

pub const THREADS_ENV: &str = "NCDEG_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    DegDet(#[from] DegDetError),
    #[error(transparent)]
    Apps(#[from] AppsError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("report: {0}")]
    Report(String),
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser, Debug)]
#[command(name = "ncdeg", version, about = "Noncommutative rank and Dieudonne-determinant degrees over finite fields")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Override the prime of the instance file.
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    /// Random trials for oracles and nonsingularity proofs.
    #[arg(long, global = true, default_value_t = 8)]
    pub trials: usize,
    #[arg(long, global = true, value_enum, default_value_t = SolverKind::Auto)]
    pub solver: SolverKind,
    /// Print the JSON report instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// nc-rank with a certified profile of the unweighted matrix.
    Ncrank { instance: String },
    /// deg Det over GF(p)(t).
    Degdet { instance: String },
    /// Delta_l for every l by the general algorithm over GF(p)(t).
    Subdet {
        instance: String,
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Delta_l for every l by the Hungarian method (constant coefficients).
    Hungarian {
        instance: String,
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Maximum-weight fractional matroid matching of a line collection.
    Fmm {
        instance: String,
        /// Also solve the LP directly and compare.
        #[arg(long)]
        lp: bool,
    },
    /// Rank-2 Brascamp-Lieb polytope membership.
    BlMember {
        instance: String,
        #[arg(long, default_value_t = DEFAULT_SUBSPACE_CAP)]
        cap: usize,
    },
    /// Randomized lower bounds on Delta_l from substitutions.
    Oracle {
        instance: String,
        #[arg(long)]
        ell: Option<usize>,
    },
    /// Re-check the certificates of a report against its instance.
    Verify { report: String, instance: String },
    /// Built-in checks on small known instances.
    Selftest,
    /// Canonical form of an instance file.
    Dump { instance: String },
}

/// Machine-readable output of every command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultReport {
    pub command: String,
    pub seed: u64,
    pub prime: Option<u64>,
    pub result: ReportBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReportBody {
    NcRank { rank: usize, profile: DegreeProfile },
    DegDet { value: Degree, profile: DegreeProfile },
    Profile { mode: ProfileMode, ell: Option<usize>, values: Vec<Degree>, profile: DegreeProfile },
    Fmm { max: ExactRational, per_ell: Vec<Option<ExactRational>>, lp: Option<ExactRational>, profile: DegreeProfile },
    Bl { verdict: BlVerdict },
    Oracle { blowup: Vec<Degree>, commutative: Vec<Degree> },
    Verify { report: VerifyReport },
    Selftest { checks: Vec<(String, bool)> },
    Dump { instance: InstanceFile },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileMode {
    Monomial,
    Symmetric,
    General,
}

impl ReportBody {
    /// Whether the reported quantity is minus infinity or infeasible.
    pub fn is_negative_result(&self) -> bool {
        match self {
            ReportBody::DegDet { value, .. } => !value.is_finite(),
            ReportBody::Profile { ell: Some(l), values, .. } => values.get(*l).is_some_and(|v| !v.is_finite()),
            ReportBody::Bl { verdict } => !verdict.member,
            _ => false,
        }
    }

    fn profile(&self) -> Option<(&DegreeProfile, ProfileMode)> {
        match self {
            ReportBody::NcRank { profile, .. } => Some((profile, ProfileMode::Monomial)),
            ReportBody::DegDet { profile, .. } => Some((profile, ProfileMode::General)),
            ReportBody::Profile { profile, mode, .. } => Some((profile, *mode)),
            ReportBody::Fmm { profile, .. } => Some((profile, ProfileMode::Symmetric)),
            _ => None,
        }
    }
}

fn solver(c: &Common) -> Solver {
    Solver::new(c.solver, c.seed)
}

fn load(path: &str, c: &Common) -> Result<Parsed, CliError> {
    Ok(InstanceFile::load(path)?.parse(c.prime)?)
}

fn check_ell(ell: Option<usize>, n: usize) -> Result<(), CliError> {
    match ell {
        Some(l) if l > n => Err(CliError::Usage(format!("--ell {l} exceeds the size {n}"))),
        _ => Ok(()),
    }
}

/// Runs one command and builds its report.
pub fn execute(command: &Command, c: &Common, echo: String) -> Result<ResultReport, CliError> {
    let mut rng = rng_from_seed(c.seed);
    let result = match command {
        Command::Ncrank { instance } => {
            let p = load(instance, c)?;
            let a = p.weighted()?;
            let unit = a.with_weights(vec![0; a.weights.len()]);
            let profile = hungarian_deg_det(&unit, &solver(c), &mut rng)?;
            ReportBody::NcRank { rank: profile.rank(), profile }
        }
        Command::Degdet { instance } => {
            let b = load(instance, c)?.rational()?;
            let profile = deg_subdet(&b, &solver(c), &mut rng)?;
            ReportBody::DegDet { value: profile.values[profile.n], profile }
        }
        Command::Subdet { instance, ell } => {
            let b = load(instance, c)?.rational()?;
            let profile = deg_subdet(&b, &solver(c), &mut rng)?;
            check_ell(*ell, profile.n)?;
            ReportBody::Profile { mode: ProfileMode::General, ell: *ell, values: profile.values.clone(), profile }
        }
        Command::Hungarian { instance, ell } => {
            let p = load(instance, c)?;
            let a = p.weighted()?;
            let (mode, profile) = if matches!(p.instance, Instance::Lines(_)) {
                (ProfileMode::Symmetric, symmetric_hungarian(&a, &solver(c), &mut rng)?)
            } else {
                (ProfileMode::Monomial, hungarian_deg_det(&a, &solver(c), &mut rng)?)
            };
            check_ell(*ell, profile.n)?;
            ReportBody::Profile { mode, ell: *ell, values: profile.values.clone(), profile }
        }
        Command::Fmm { instance, lp } => {
            let p = load(instance, c)?;
            let Instance::Lines(h) = &p.instance else {
                return Err(ParseError::WrongKind { kind: p.instance.kind(), why: "fmm needs a line collection" }.into());
            };
            let res = fmm_max_weight(p.field, h, &solver(c), &mut rng)?;
            let lp = if *lp { fmp_lp_oracle(p.field, h, None, DEFAULT_SUBSPACE_CAP)?.value } else { None };
            ReportBody::Fmm { max: res.max, per_ell: res.per_ell, lp, profile: res.profile }
        }
        Command::BlMember { instance, cap } => {
            let p = load(instance, c)?;
            let Instance::Bl(d) = &p.instance else {
                return Err(ParseError::WrongKind { kind: p.instance.kind(), why: "bl-member needs a bl datum" }.into());
            };
            ReportBody::Bl { verdict: bl_membership_rank2(p.field, d, *cap)? }
        }
        Command::Oracle { instance, ell } => {
            let a = load(instance, c)?.weighted()?;
            let n = a.n();
            check_ell(*ell, n)?;
            let levels: Vec<usize> = ell.map_or_else(|| (0..=n).collect(), |l| vec![l]);
            let mut up = Vec::new();
            let mut comm = Vec::new();
            for &l in &levels {
                up.push(delta_blowup_oracle(&a, l, c.trials, &mut rng)?);
                comm.push(delta_ell_oracle(&a, l, c.trials, &mut rng)?);
            }
            ReportBody::Oracle { blowup: up, commutative: comm }
        }
        Command::Verify { report, instance } => {
            let text = std::fs::read_to_string(report).map_err(|e| CliError::Report(format!("{report}: {e}")))?;
            let rep: ResultReport = serde_json::from_str(&text).map_err(|e| CliError::Report(e.to_string()))?;
            let c2 = Common { prime: rep.prime, ..c.clone() };
            let p = load(instance, &c2)?;
            ReportBody::Verify { report: verify_report(&rep, &p, c.trials, &mut rng)? }
        }
        Command::Selftest => ReportBody::Selftest { checks: selftest::run(c.seed) },
        Command::Dump { instance } => ReportBody::Dump { instance: canonical(&load(instance, c)?)? },
    };
    Ok(ResultReport { command: echo, seed: c.seed, prime: c.prime, result })
}

fn verify_report<R: rand::Rng + ?Sized>(
    rep: &ResultReport,
    p: &Parsed,
    trials: usize,
    rng: &mut R,
) -> Result<VerifyReport, CliError> {
    let mut issues = Vec::new();
    match &rep.result {
        ReportBody::Bl { verdict } => {
            let Instance::Bl(d) = &p.instance else {
                return Err(ParseError::WrongKind { kind: p.instance.kind(), why: "the report is a bl verdict" }.into());
            };
            let again = bl_membership_rank2(p.field, d, DEFAULT_SUBSPACE_CAP)?;
            if again.member != verdict.member {
                issues.push(format!("membership recomputes to {}", again.member));
            }
        }
        body => {
            let Some((profile, mode)) = body.profile() else {
                return Err(CliError::Report("the report carries no certificates".into()));
            };
            let vr = match mode {
                ProfileMode::General => {
                    let b = p.rational()?;
                    verify_profile(profile, ProfileInput::General(&b), trials, rng)
                }
                _ => {
                    let mut a = p.weighted()?;
                    if matches!(body, ReportBody::NcRank { .. }) {
                        a = a.with_weights(vec![0; a.weights.len()]);
                    }
                    verify_profile(profile, ProfileInput::Weighted(&a), trials, rng)
                }
            };
            issues.extend(vr.issues);
            let claimed = match body {
                ReportBody::NcRank { rank, .. } => {
                    (*rank != profile.rank()).then(|| format!("rank {rank} disagrees with the profile"))
                }
                ReportBody::DegDet { value, .. } => {
                    (*value != profile.values[profile.n]).then(|| format!("deg Det {value} disagrees with the profile"))
                }
                ReportBody::Profile { values, .. } => {
                    (*values != profile.values).then(|| "values disagree with the profile".into())
                }
                _ => None,
            };
            issues.extend(claimed);
        }
    }
    Ok(VerifyReport { ok: issues.is_empty(), issues })
}

fn fmt_values(values: &[Degree]) -> String {
    values.iter().enumerate().map(|(l, v)| format!("{l}:{v}")).collect::<Vec<_>>().join(", ")
}

fn fmt_profile(profile: &DegreeProfile) -> String {
    format!(
        "Delta = ({})\niterations {} (bound {}), guarantee {:?}",
        fmt_values(&profile.values),
        profile.iterations,
        profile.iteration_bound,
        profile.guarantee
    )
}

/// Human-readable rendering of a report.
pub fn render(rep: &ResultReport) -> String {
    match &rep.result {
        ReportBody::NcRank { rank, profile } => format!("nc-rank {rank}\n{}", fmt_profile(profile)),
        ReportBody::DegDet { value, profile } => format!("deg Det = {value}\n{}", fmt_profile(profile)),
        ReportBody::Profile { mode, ell, profile, .. } => {
            let head = ell.map(|l| format!("Delta_{l} = {}\n", profile.values[l])).unwrap_or_default();
            format!("{head}{} ({mode:?})", fmt_profile(profile))
        }
        ReportBody::Fmm { max, per_ell, lp, profile } => {
            let per: Vec<String> = per_ell
                .iter()
                .enumerate()
                .map(|(l, v)| format!("{l}:{}", v.as_ref().map_or("-inf".into(), |x| x.to_string())))
                .collect();
            let lp = lp.as_ref().map(|v| format!("\nLP optimum {v}")).unwrap_or_default();
            format!("max weight {max}\nper cardinality ({}){lp}\n{}", per.join(", "), fmt_profile(profile))
        }
        ReportBody::Bl { verdict } => {
            let cert =
                verdict.certificate.as_ref().map(|c| format!("\ncertificate {}", serde_json::to_string(c).unwrap_or_default()));
            format!("member {} ({} subspaces checked){}", verdict.member, verdict.checked, cert.unwrap_or_default())
        }
        ReportBody::Oracle { blowup, commutative } => {
            format!("blow-up lower bounds ({})\ncommutative delta ({})", fmt_values(blowup), fmt_values(commutative))
        }
        ReportBody::Verify { report } => {
            if report.ok {
                "verified".into()
            } else {
                format!("FAILED\n{}", report.issues.join("\n"))
            }
        }
        ReportBody::Selftest { checks } => {
            checks.iter().map(|(name, ok)| format!("{} {name}", if *ok { "PASS" } else { "FAIL" })).collect::<Vec<_>>().join("\n")
        }
        ReportBody::Dump { instance } => serde_json::to_string_pretty(instance).unwrap_or_default(),
    }
}

/// Exit code: 0 success, 2 for minus-infinity or infeasible results,
/// 1 for errors and failed checks.
pub fn exit_code(rep: &ResultReport) -> i32 {
    match &rep.result {
        ReportBody::Verify { report } if !report.ok => 1,
        ReportBody::Selftest { checks } if checks.iter().any(|c| !c.1) => 1,
        body if body.is_negative_result() => 2,
        _ => 0,
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        // fails only if a pool already exists, which then keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses `argv`, runs the command and prints the result.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    configure_threads();
    let echo = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect::<Vec<_>>().join(" ");
    match execute(&cli.command, &cli.common, echo) {
        Ok(rep) => {
            if cli.common.json {
                println!("{}", serde_json::to_string_pretty(&rep).expect("reports serialize"));
            } else {
                println!("{}", render(&rep));
            }
            exit_code(&rep)
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
