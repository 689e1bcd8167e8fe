//! Command-line front end.
//!
//! Every subcommand prints one JSON document on stdout. Exit codes: 0 when
//! all checks pass or the requested object was produced, 1 when a checked
//! property fails, 2 on usage or I/O errors. Diagnostics and timing go to
//! stderr.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::constructions::{Family, PairFile, PartitionPair};
use crate::error::Error;
use crate::genfun::{
    check_pair_identities, chi_probe, half_r1_in_c, square_identity_holds, ProbeOutcome, Recurrence,
};
use crate::lemmas::{separating_witness, verify_digit_lemma};
use crate::natset::{NatSet, TmClass};
use crate::repfn::rep_profile;
use crate::search::{brute_scan, scan_determinized, ShardSpec};
use crate::solver::solve_and_verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "reprlab",
    version,
    about = "Balanced partitions of [0, m] with shared elements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    #[value(name = "theorem11", alias = "adjacent")]
    Adjacent,
    #[value(name = "remark12", alias = "spread")]
    Spread,
    #[value(name = "theoremC", alias = "singleton")]
    Singleton,
    #[value(name = "dombi", alias = "disjoint")]
    Disjoint,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Adjacent => Family::Adjacent,
            FamilyArg::Spread => Family::Spread,
            FamilyArg::Singleton => Family::Singleton,
            FamilyArg::Disjoint => Family::Disjoint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Brute,
    Det,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WhichArg {
    /// Even-ones digit pattern.
    #[value(name = "3", alias = "even")]
    Even,
    /// Odd-ones digit pattern.
    #[value(name = "4", alias = "odd")]
    Odd,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a pair from one of the explicit families.
    Construct {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct the forced pair for m and a shared set, then verify it.
    Solve {
        #[arg(long)]
        m: usize,
        /// Comma-separated shared elements, e.g. 6,7 (empty for none).
        #[arg(long, default_value = "")]
        intersection: String,
        #[arg(long)]
        trace: bool,
    },
    /// Scan a range of m for balanced pairs with k shared elements.
    Search {
        #[arg(long)]
        m_min: usize,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long, default_value_t = 0)]
        shard_index: usize,
    },
    /// Compare the representation functions of a stored pair.
    Verify {
        #[arg(long)]
        pair: PathBuf,
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Check the generating-function identities of a stored pair.
    Gfcheck {
        #[arg(long)]
        pair: PathBuf,
    },
    /// Scan the digit-pattern lemmas up to a bound.
    Lemmas {
        #[arg(long, value_enum)]
        which: WhichArg,
        #[arg(long)]
        max: u64,
        #[arg(long)]
        include_boundary: bool,
    },
    /// Find n in (m, 2m) separating the truncated Thue–Morse halves.
    Witness {
        #[arg(long)]
        m: u64,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `argv` (including the program name), runs, prints, and returns
/// the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let result = execute(cli.command);
    log::info!("finished in {:.3?}", start.elapsed());
    match result {
        Ok((text, passed)) => {
            println!("{text}");
            if passed {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn load_pair(path: &Path) -> Result<PartitionPair, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let file: PairFile = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("malformed pair file {}: {e}", path.display())))?;
    Ok(PartitionPair::try_from(file)?)
}

fn parse_list(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|e| Failure::Usage(format!("bad integer {s:?}: {e}")))
        })
        .collect()
}

fn execute(command: Command) -> Result<(String, bool), Failure> {
    match command {
        Command::Construct { family, l, out } => {
            let pair = Family::from(family).build(l)?;
            let text = to_json(&pair);
            if let Some(path) = out {
                fs::write(&path, format!("{text}\n"))
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok((text, true))
        }
        Command::Solve {
            m,
            intersection,
            trace,
        } => {
            let elements = parse_list(&intersection)?;
            let shared = NatSet::with_bound(m, elements)?;
            let outcome = solve_and_verify(m, &shared, trace)?;
            Ok((to_json(&outcome), outcome.is_solved()))
        }
        Command::Search {
            m_min,
            m_max,
            k,
            mode,
            shards,
            shard_index,
        } => {
            if m_min > m_max {
                return Err(Failure::Usage(format!(
                    "--m-min {m_min} exceeds --m-max {m_max}"
                )));
            }
            let shard = ShardSpec::new(shards, shard_index)?;
            let cert = match mode {
                ModeArg::Brute => brute_scan(m_min, m_max, k, shard)?,
                ModeArg::Det => scan_determinized(m_min, m_max, k, shard)?,
            };
            let clean = cert.uniqueness.as_ref().is_none_or(|u| u.is_clean());
            Ok((to_json(&cert), clean))
        }
        Command::Verify { pair, n_max } => {
            let pair = load_pair(&pair)?;
            let n_max = n_max.unwrap_or(2 * pair.m());
            let pc = rep_profile(pair.c(), n_max);
            let pd = rep_profile(pair.d(), n_max);
            let divergence = pc.first_difference(&pd);
            let report = json!({
                "m": pair.m(),
                "intersection": pair.intersection(),
                "n_max": n_max,
                "balanced": divergence.is_none(),
                "first_divergence": divergence,
                "profile_C": pc,
                "profile_D": pd,
            });
            Ok((to_json(&report), divergence.is_none()))
        }
        Command::Gfcheck { pair } => {
            let pair = load_pair(&pair)?;
            gfcheck(&pair)
        }
        Command::Lemmas {
            which,
            max,
            include_boundary,
        } => {
            let class = match which {
                WhichArg::Even => TmClass::EvenOnes,
                WhichArg::Odd => TmClass::OddOnes,
            };
            let report = verify_digit_lemma(max, class, include_boundary)?;
            log::info!("lemma scan took {:.3?}", report.elapsed);
            Ok((to_json(&report), report.is_clean()))
        }
        Command::Witness { m } => match separating_witness(m) {
            Ok(w) => Ok((to_json(&w), true)),
            Err(Error::NoWitness { m }) => {
                eprintln!("no witness found for m = {m}");
                Ok((to_json(&json!({ "m": m, "witness": null })), false))
            }
            Err(e) => Err(e.into()),
        },
    }
}

#[derive(Serialize)]
struct ProbeSummary {
    recurrence: Recurrence,
    evaluated: Vec<usize>,
    failures: Vec<usize>,
}

fn gfcheck(pair: &PartitionPair) -> Result<(String, bool), Failure> {
    let identities = check_pair_identities(pair)?;
    let degree = 2 * pair.m();
    let square_c = square_identity_holds(pair.c(), degree)?;
    let square_d = square_identity_holds(pair.d(), degree)?;
    let mut passed = identities.all_hold() && square_c && square_d;

    let (probes, half_r1) = if pair.is_balanced() {
        let mut probes = Vec::new();
        for which in Recurrence::ALL {
            let mut evaluated = Vec::new();
            let mut failures = Vec::new();
            for k in (0..=degree).step_by(2) {
                match chi_probe(pair, which, k)? {
                    ProbeOutcome::NotApplicable => {}
                    ProbeOutcome::Holds => evaluated.push(k),
                    ProbeOutcome::Fails => {
                        evaluated.push(k);
                        failures.push(k);
                    }
                }
            }
            passed &= failures.is_empty();
            probes.push(ProbeSummary {
                recurrence: which,
                evaluated,
                failures,
            });
        }
        let half = half_r1_in_c(pair).ok();
        if half == Some(false) {
            passed = false;
        }
        (Some(probes), half)
    } else {
        (None, None)
    };

    let report = json!({
        "m": pair.m(),
        "intersection": pair.intersection(),
        "square_identity": { "C": square_c, "D": square_d },
        "identities": identities,
        "probes": probes,
        "half_r1_in_C": half_r1,
    });
    Ok((to_json(&report), passed))
}
