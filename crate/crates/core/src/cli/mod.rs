//! Command-line surface. Everything except process setup lives here so the
//! commands can be driven in-process.
//!
//! Exit codes: 0 success, 2 input or domain error, 3 resource refusal.

mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use sha2::{Digest, Sha256};

pub use report::{Report, Value};

use crate::chains::{eval_to_tolerance, parse_family_with, EvalBudget, FamilySpec};
use crate::density::{
    eval_density, matching_exact, matching_greedy, matching_upper_bound, profile_branching_with,
    BranchOptions, Probability,
};
use crate::error::{Error, Result};
use crate::exec::Deadline;
use crate::finitize::{check_gadget_probability, finitize, k3_gadget, FiniteCore, FinitizeConfig};
use crate::hypercore::{antichain_reduce, parse_with, to_text, Hypergraph, ParseOptions};
use crate::rational::parse_rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

pub const ENV_VERTEX_CAP: &str = "IDENSITY_VERTEX_CAP";
pub const ENV_TIME_CAP: &str = "IDENSITY_TIME_CAP";
pub const ENV_WORKERS: &str = "IDENSITY_WORKERS";

const DEFAULT_TOL: &str = "1/1000000000";

#[derive(Debug, Parser)]
#[command(name = "idensity", version, about = "Exact independence p-densities of hypergraphs")]
pub struct Cli {
    /// Structured JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Fractional digits in decimal renderings (round half to even).
    #[arg(long, global = true, default_value_t = 12)]
    pub digits: usize,
    /// Reject unknown directives in input files.
    #[arg(long, global = true)]
    pub strict_parse: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact id_p of a hypergraph file.
    Density {
        file: PathBuf,
        #[arg(long)]
        p: String,
        /// Also print the independent-set counts by size.
        #[arg(long)]
        profile: bool,
    },
    /// Matching sizes and the matching upper bound next to the exact density.
    Bounds {
        file: PathBuf,
        #[arg(long)]
        p: String,
    },
    /// Certified enclosure of a family's limit density.
    Family {
        file: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long, default_value = DEFAULT_TOL)]
        tol: String,
        /// Exit 3 when the budget runs out before the tolerance is met.
        #[arg(long)]
        strict: bool,
    },
    /// Finite hypergraph with the same density as a family.
    Finitize {
        file: PathBuf,
        #[arg(long)]
        p: String,
        #[arg(long, default_value = DEFAULT_TOL)]
        tol: String,
        #[arg(long)]
        core_horizon: Option<usize>,
        /// Use only the first N vertices of the core prefix.
        #[arg(long)]
        core_size: Option<usize>,
        #[arg(long, default_value_t = 3)]
        threshold: usize,
        /// The two probe horizons.
        #[arg(long, num_args = 2, value_names = ["N1", "N2"])]
        probe: Option<Vec<usize>>,
        #[arg(long, default_value_t = 4)]
        max_rounds: usize,
    },
    /// Replace singleton edges by triangles (density-preserving at p = 1/2).
    Gadget {
        file: PathBuf,
        #[arg(long)]
        p: Option<String>,
    },
    /// Remove every edge that contains another edge.
    Reduce { file: PathBuf },
}

/// Budgets and parse options, from the environment or explicitly.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub budget: EvalBudget,
    pub parse: ParseOptions,
    pub workers: Option<usize>,
}

impl Settings {
    pub fn from_env() -> Result<Self> {
        let mut s = Settings::default();
        if let Some(cap) = env_usize(ENV_VERTEX_CAP)? {
            s.budget.max_vertices = cap;
            s.parse.vertex_cap = cap;
        }
        if let Some(secs) = env_usize(ENV_TIME_CAP)? {
            s.budget.time_limit = Duration::from_secs(secs as u64);
        }
        s.workers = env_usize(ENV_WORKERS)?;
        if s.workers == Some(0) {
            return Err(Error::domain(format!("{ENV_WORKERS} must be positive")));
        }
        Ok(s)
    }

    fn branch(&self) -> BranchOptions {
        BranchOptions {
            exec: self.budget.exec,
            deadline: Deadline::after(self.budget.time_limit),
            ..BranchOptions::default()
        }
    }
}

fn env_usize(name: &str) -> Result<Option<usize>> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::domain(format!("{name}: expected a non-negative integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_resource() {
        EXIT_RESOURCE
    } else {
        EXIT_INPUT
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, settings: &Settings) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    match execute(&cli.command, &echo, cli.strict_parse, settings) {
        Ok((report, code)) => Outcome {
            stdout: if cli.json {
                report.to_json(cli.digits)
            } else {
                report.to_text(cli.digits)
            },
            stderr: String::new(),
            code,
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: exit_code(&e),
        },
    }
}

/// Runs one command; the exit code is non-zero only for `family --strict`.
pub fn execute(
    cmd: &Command,
    echo: &str,
    strict_parse: bool,
    settings: &Settings,
) -> Result<(Report, i32)> {
    let mut parse = settings.parse;
    parse.strict |= strict_parse;
    let mut report = Report::new(echo);
    let mut code = EXIT_OK;
    match cmd {
        Command::Density { file, p, profile } => {
            let (h, digest) = read_hypergraph(file, &parse)?;
            report.input_digest = Some(digest);
            let p = Probability::parse(p)?;
            cmd_density(&mut report, &h, &p, *profile, settings)?;
        }
        Command::Bounds { file, p } => {
            let (h, digest) = read_hypergraph(file, &parse)?;
            report.input_digest = Some(digest);
            cmd_bounds(&mut report, &h, &Probability::parse(p)?, settings)?;
        }
        Command::Family { file, p, tol, strict } => {
            let (f, digest) = read_family(file, &parse)?;
            report.input_digest = Some(digest);
            let converged =
                cmd_family(&mut report, &f, &Probability::parse(p)?, &parse_tol(tol)?, settings)?;
            if *strict && !converged {
                code = EXIT_RESOURCE;
            }
        }
        Command::Finitize {
            file,
            p,
            tol,
            core_horizon,
            core_size,
            threshold,
            probe,
            max_rounds,
        } => {
            let (f, digest) = read_family(file, &parse)?;
            report.input_digest = Some(digest);
            let cfg = FinitizeConfig {
                core_horizon: *core_horizon,
                core_size: *core_size,
                probes: probe.as_ref().map(|v| (v[0], v[1])),
                threshold: *threshold,
                max_rounds: (*max_rounds).max(1),
                budget: settings.budget.clone(),
                ..FinitizeConfig::default()
            };
            let p = Probability::parse(p)?;
            cmd_finitize(&mut report, &f, &p, &parse_tol(tol)?, &cfg, settings)?;
        }
        Command::Gadget { file, p } => {
            let (h, digest) = read_hypergraph(file, &parse)?;
            report.input_digest = Some(digest);
            if let Some(p) = p {
                check_gadget_probability(&Probability::parse(p)?)?;
            }
            cmd_gadget(&mut report, &h, settings)?;
        }
        Command::Reduce { file } => {
            let (h, digest) = read_hypergraph(file, &parse)?;
            report.input_digest = Some(digest);
            cmd_reduce(&mut report, &h, settings)?;
        }
    }
    Ok((report, code))
}

fn read_input(path: &Path) -> Result<(String, String)> {
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::Read::read_to_end(&mut std::io::stdin(), &mut buf)
            .map_err(|e| Error::domain(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read(path).map_err(|e| Error::domain(format!("{}: {e}", path.display())))?
    };
    let digest = format!("sha256:{}", hex::encode(Sha256::digest(&bytes)));
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::domain(format!("{}: not valid UTF-8", path.display())))?;
    Ok((text, digest))
}

fn read_hypergraph(path: &Path, opts: &ParseOptions) -> Result<(Hypergraph, String)> {
    let (text, digest) = read_input(path)?;
    Ok((parse_with(&text, opts)?, digest))
}

fn read_family(path: &Path, opts: &ParseOptions) -> Result<(FamilySpec, String)> {
    let (text, digest) = read_input(path)?;
    Ok((parse_family_with(&text, opts)?, digest))
}

fn parse_tol(text: &str) -> Result<BigRational> {
    let tol = parse_rational(text)?;
    if tol <= BigRational::from_integer(0.into()) {
        return Err(Error::domain("tolerance must be positive"));
    }
    Ok(tol)
}

fn unreduced(h: &Hypergraph, p: &Probability, settings: &Settings) -> Result<(Value, Vec<String>)> {
    let profile = profile_branching_with(h, &settings.branch())?;
    let (num, den) = profile.density_parts(p);
    let value = eval_density(&profile, p).into_inner();
    let counts = profile.counts().iter().map(|c| c.to_string()).collect();
    Ok((
        Value::Unreduced {
            value,
            num: num.to_string(),
            den: den.to_string(),
        },
        counts,
    ))
}

fn exact_density(h: &Hypergraph, p: &Probability, settings: &Settings) -> Result<BigRational> {
    Ok(eval_density(&profile_branching_with(h, &settings.branch())?, p).into_inner())
}

fn cmd_density(
    r: &mut Report,
    h: &Hypergraph,
    p: &Probability,
    profile: bool,
    settings: &Settings,
) -> Result<()> {
    let (value, counts) = unreduced(h, p, settings)?;
    r.push("vertices", Value::Int(h.num_vertices()))
        .push("edges", Value::Int(h.num_edges()))
        .push("p", Value::Exact(p.value().clone()))
        .push("density", value);
    if profile {
        r.push("profile", Value::Words(counts));
    }
    Ok(())
}

fn cmd_bounds(r: &mut Report, h: &Hypergraph, p: &Probability, settings: &Settings) -> Result<()> {
    let greedy = matching_greedy(h);
    let exact = match matching_exact(h) {
        Ok(m) => Some(m),
        Err(Error::Refused { .. }) => None,
        Err(e) => return Err(e),
    };
    let best = exact.as_ref().unwrap_or(&greedy);
    let bound = matching_upper_bound(h, p, best)?.into_inner();
    let density = exact_density(h, p, settings)?;
    r.push("vertices", Value::Int(h.num_vertices()))
        .push("edges", Value::Int(h.num_edges()))
        .push("rank", Value::Int(h.rank()))
        .push("p", Value::Exact(p.value().clone()))
        .push("matching_greedy", Value::Int(greedy.size()));
    match &exact {
        Some(m) => r.push("matching_exact", Value::Int(m.size())),
        None => r.push("matching_exact", Value::Text("refused".into())),
    };
    r.push("bound", Value::Exact(bound.clone()))
        .push("density", Value::Exact(density.clone()))
        .push("tight", Value::Bool(bound == density));
    Ok(())
}

fn cmd_family(
    r: &mut Report,
    f: &FamilySpec,
    p: &Probability,
    tol: &BigRational,
    settings: &Settings,
) -> Result<bool> {
    let e = eval_to_tolerance(f, p, tol, &settings.budget)?;
    r.push("family", Value::Text(f.name().into()))
        .push("p", Value::Exact(p.value().clone()))
        .push("tol", Value::Exact(tol.clone()))
        .push("lower", Value::Exact(e.lower.clone()))
        .push("upper", Value::Exact(e.upper.clone()))
        .push("width", Value::Exact(e.width()))
        .push("horizon", Value::Int(e.horizon));
    if !e.converged {
        r.flag("not-converged");
    }
    if e.upper_only {
        r.flag("upper-only");
    }
    Ok(e.converged)
}

fn cmd_finitize(
    r: &mut Report,
    f: &FamilySpec,
    p: &Probability,
    tol: &BigRational,
    cfg: &FinitizeConfig,
    settings: &Settings,
) -> Result<()> {
    let out = finitize(f, p, tol, cfg)?;
    let rep = &out.report;
    r.push("family", Value::Text(f.name().into()))
        .push("p", Value::Exact(p.value().clone()))
        .push("tol", Value::Exact(tol.clone()))
        .push("rounds", Value::Int(out.rounds))
        .push("core_horizon", Value::Int(rep.core_horizon))
        .push(
            "core_vertices",
            Value::Words(
                rep.core_vertices
                    .labels(&rep.core)
                    .into_iter()
                    .map(String::from)
                    .collect(),
            ),
        )
        .push(
            "probes",
            Value::Words(vec![rep.probes.0.to_string(), rep.probes.1.to_string()]),
        )
        .push("threshold", Value::Int(rep.threshold))
        .push(
            "heavy",
            Value::Lines(
                rep.heavy_sets
                    .iter()
                    .map(|a| {
                        format!(
                            "{{{}}} {} {}",
                            a.set.labels(&rep.core).join(" "),
                            a.evidence.0,
                            a.evidence.1
                        )
                    })
                    .collect(),
            ),
        );
    match &out.core {
        FiniteCore::ZeroDensity => {
            r.push("core", Value::Text("density 0 (empty set heavy)".into()));
            r.push("density", Value::Exact(out.verification.value.clone()));
        }
        FiniteCore::Core(h) => {
            let (value, _) = unreduced(h, p, settings)?;
            r.push("density", value);
            r.hypergraph = Some(to_text(h));
        }
    }
    let v = &out.verification;
    r.push("verdict", Value::Text(v.verdict.as_str().into()))
        .push("family_lower", Value::Exact(v.enclosure.lower.clone()))
        .push("family_upper", Value::Exact(v.enclosure.upper.clone()))
        .push("family_horizon", Value::Int(v.enclosure.horizon));
    if !v.enclosure.converged {
        r.flag("not-converged");
    }
    if v.enclosure.upper_only {
        r.flag("upper-only");
    }
    Ok(())
}

fn cmd_gadget(r: &mut Report, h: &Hypergraph, settings: &Settings) -> Result<()> {
    let g = k3_gadget(h)?;
    let half = Probability::half();
    let before = exact_density(h, &half, settings)?;
    let after = exact_density(&g, &half, settings)?;
    r.push("vertices_before", Value::Int(h.num_vertices()))
        .push("vertices_after", Value::Int(g.num_vertices()))
        .push("p", Value::Exact(half.value().clone()))
        .push("density_before", Value::Exact(before.clone()))
        .push("density_after", Value::Exact(after.clone()))
        .push("equal", Value::Bool(before == after));
    r.hypergraph = Some(to_text(&g));
    Ok(())
}

fn cmd_reduce(r: &mut Report, h: &Hypergraph, settings: &Settings) -> Result<()> {
    let a = antichain_reduce(h);
    let half = Probability::half();
    let before = exact_density(h, &half, settings)?;
    let after = exact_density(&a, &half, settings)?;
    r.push("edges_before", Value::Int(h.num_edges()))
        .push("edges_after", Value::Int(a.num_edges()))
        .push("p", Value::Exact(half.value().clone()))
        .push("density_before", Value::Exact(before.clone()))
        .push("density_after", Value::Exact(after.clone()))
        .push("unchanged", Value::Bool(before == after));
    r.hypergraph = Some(to_text(&a));
    Ok(())
}
