//! Command-line surface over the analysis library. All commands print
//! deterministic, machine-readable output; worker counts never change a byte
//! of it.
//!
//! Exit codes: 0 success, 1 failed verification, 2 validation error,
//! 3 not synchronizing / not primitive, 4 resource refusal (including an
//! exceeded depth cap).

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use synchrolab_core::{
    census, colorings_up_to_iso, digraph_census, digraph_series, exponent, iso_canonical_form,
    reset_threshold, verify_series, CensusOptions, Dfa, Digraph, DigraphCensusOptions,
    DigraphSeries, Error, ResetResult, SeriesName, Shard, Word,
};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;
const EXIT_REFUSED: u8 = 4;

#[derive(Parser)]
#[command(
    name = "synchrolab",
    version,
    about = "Exact reset thresholds of synchronizing automata and exponents of primitive digraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact reset threshold of a DFA file, with a shortest reset word.
    Rt {
        /// DFA file: first line `n k`, then n rows of k targets.
        dfa: PathBuf,
        /// Stop once the threshold is known to exceed this depth.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Claimed threshold and reset word of an automata series
    /// (c, w, e, h, dprime, ddouble, f, b, g).
    Series {
        name: String,
        n: usize,
        /// Check the claims against exact computation.
        #[arg(long)]
        verify: bool,
        /// Write the automaton to a DFA file.
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
    /// Exhaustive reset-threshold census over initially-connected automata,
    /// counted up to isomorphism. Output: TSV `threshold<TAB>count`.
    Census {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        letters: usize,
        /// Discard automata below this threshold.
        #[arg(long = "min-rt", value_name = "R")]
        min_rt: Option<usize>,
        /// Run only shard I of M (format `I/M`); shard outputs merge additively.
        #[arg(long, value_name = "I/M")]
        shard: Option<String>,
        /// Write the TSV here instead of stdout.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Worker threads (default: available parallelism, or SYNCHROLAB_JOBS).
        #[arg(long)]
        jobs: Option<usize>,
        /// Run even beyond the documented desk-scale sizes.
        #[arg(long)]
        force: bool,
    },
    /// Exponent of a primitive digraph file (first line `n`, then the 0/1
    /// incidence matrix).
    Exponent { digraph: PathBuf },
    /// Exhaustive exponent census over all digraphs on a vertex count,
    /// counted up to isomorphism. Output: TSV `exponent<TAB>count`.
    DigraphCensus {
        #[arg(long)]
        vertices: usize,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Colorings of a digraph with a given alphabet size, one canonical
    /// string per isomorphism class.
    Colorings {
        digraph: PathBuf,
        #[arg(long)]
        letters: usize,
    },
    /// Derived automaton whose letters act as the given words of the input
    /// automaton (e.g. --actions b,ab). Prints a DFA file.
    Derive {
        dfa: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        actions: Vec<String>,
    },
    /// Canonical string of a DFA under state and letter bijections.
    Canon { dfa: PathBuf },
    /// A digraph series member (w, d, v, r, g, gprime). Prints a digraph file.
    Digraph {
        name: String,
        n: usize,
        /// Write the digraph to a file instead of stdout.
        #[arg(long, value_name = "PATH")]
        emit: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Failure { code, message: message.to_string() }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::NotSynchronizing => EXIT_NEGATIVE,
            Error::TooLarge { .. } => EXIT_REFUSED,
            _ => EXIT_VALIDATION,
        };
        Failure::new(code, err)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("synchrolab: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content)
        .map_err(|e| Failure::new(EXIT_VALIDATION, format!("{}: {e}", path.display())))
}

fn resolve_jobs(flag: Option<usize>) -> usize {
    flag.or_else(|| {
            std::env::var("SYNCHROLAB_JOBS").ok().and_then(|v| v.parse().ok())
        })
        .filter(|&j| j > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()))
}

fn parse_shard(text: &str) -> Result<Shard, Failure> {
    let (index, count) = text
        .split_once('/')
        .ok_or_else(|| Failure::new(EXIT_VALIDATION, format!("invalid shard `{text}`: expected I/M")))?;
    let index: u32 = index
        .trim()
        .parse()
        .map_err(|_| Failure::new(EXIT_VALIDATION, format!("invalid shard index `{index}`")))?;
    let count: u32 = count
        .trim()
        .parse()
        .map_err(|_| Failure::new(EXIT_VALIDATION, format!("invalid shard count `{count}`")))?;
    Ok(Shard::new(index, count)?)
}

/// Desk-scale guard for the automata census; `--force` lifts it up to the
/// library limits.
fn census_within_desk_scale(states: usize, letters: usize) -> bool {
    match letters {
        0 => false,
        1 => states <= 12,
        2 => states <= 7,
        3 => states <= 5,
        _ => states <= 4,
    }
}

fn emit_table(out: Option<&Path>, table: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_file(path, table),
        None => {
            print!("{table}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Rt { dfa, cap } => {
            let dfa = Dfa::parse(&read_file(&dfa)?)?;
            match reset_threshold(&dfa, cap) {
                ResetResult::Reset { threshold, witness } => {
                    println!("{threshold}");
                    println!("{witness}");
                    Ok(())
                }
                ResetResult::NotSynchronizing => {
                    Err(Failure::new(EXIT_NEGATIVE, "automaton is not synchronizing"))
                }
                ResetResult::CapExceeded { cap } => Err(Failure::new(
                    EXIT_REFUSED,
                    format!("reset threshold exceeds the depth cap {cap}"),
                )),
            }
        }
        Command::Series { name, n, verify, emit } => {
            let name = SeriesName::from_str(&name)?;
            let claimed = synchrolab_core::claimed_threshold(name, n)?;
            let word = synchrolab_core::claimed_word(name, n)?;
            println!("{claimed}");
            println!("{word}");
            if let Some(path) = &emit {
                let dfa = synchrolab_core::build(name, n)?;
                write_file(path, &dfa.to_string())?;
            }
            if verify {
                let report = verify_series(name, n)?;
                let computed = report
                    .computed
                    .map_or_else(|| "-".to_string(), |t| t.to_string());
                let word_ok = if report.word_synchronizes { "OK" } else { "FAIL" };
                let minimal_ok = if report.word_minimal { "OK" } else { "FAIL" };
                println!(
                    "claimed {}, computed {computed}, word {word_ok}, minimal {minimal_ok}",
                    report.claimed
                );
                if !report.all_ok() {
                    return Err(Failure::new(EXIT_VERIFY_FAILED, "series verification failed"));
                }
            }
            Ok(())
        }
        Command::Census { states, letters, min_rt, shard, out, jobs, force } => {
            if !force && !census_within_desk_scale(states, letters) {
                return Err(Failure::new(
                    EXIT_REFUSED,
                    format!(
                        "census over {states} states x {letters} letters exceeds desk scale; \
                         pass --force to run anyway"
                    ),
                ));
            }
            let shard = match shard {
                Some(text) => parse_shard(&text)?,
                None => Shard::WHOLE,
            };
            let opts = CensusOptions {
                min_threshold: min_rt,
                shard,
                dedup_iso: true,
                jobs: resolve_jobs(jobs),
            };
            let hist = census(states, letters, &opts)?;
            emit_table(out.as_deref(), &hist.to_tsv("threshold"))
        }
        Command::Exponent { digraph } => {
            let d = Digraph::parse(&read_file(&digraph)?)?;
            match exponent(&d) {
                Some(e) => {
                    println!("{e}");
                    Ok(())
                }
                None => Err(Failure::new(EXIT_NEGATIVE, "digraph is not primitive")),
            }
        }
        Command::DigraphCensus { vertices, out, jobs } => {
            let opts = DigraphCensusOptions { jobs: resolve_jobs(jobs), ..Default::default() };
            let hist = digraph_census(vertices, &opts)?;
            emit_table(out.as_deref(), &hist.to_tsv("exponent"))
        }
        Command::Colorings { digraph, letters } => {
            let d = Digraph::parse(&read_file(&digraph)?)?;
            match colorings_up_to_iso(&d, letters) {
                Ok(classes) => {
                    for dfa in classes {
                        println!("{}", iso_canonical_form(&dfa)?);
                    }
                    Ok(())
                }
                // A vertex with more out-edges than letters admits no
                // coloring: empty output plus a diagnostic.
                Err(err @ Error::OutDegreeExceedsLetters { .. }) => {
                    eprintln!("synchrolab: no colorings: {err}");
                    Ok(())
                }
                Err(err) => Err(err.into()),
            }
        }
        Command::Derive { dfa, actions } => {
            let dfa = Dfa::parse(&read_file(&dfa)?)?;
            let words = actions
                .iter()
                .map(|w| Word::parse(w))
                .collect::<Result<Vec<_>, _>>()?;
            let derived = synchrolab_core::derive(&dfa, &words)?;
            print!("{derived}");
            Ok(())
        }
        Command::Canon { dfa } => {
            let dfa = Dfa::parse(&read_file(&dfa)?)?;
            println!("{}", iso_canonical_form(&dfa)?);
            Ok(())
        }
        Command::Digraph { name, n, emit } => {
            let name = DigraphSeries::from_str(&name)?;
            let d = digraph_series(name, n)?;
            match emit {
                Some(path) => write_file(&path, &d.to_string()),
                None => {
                    print!("{d}");
                    Ok(())
                }
            }
        }
    }
}
