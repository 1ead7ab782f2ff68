use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use slpgram::oracle::DEFAULT_LIMIT;
use slpgram::pipeline::{count_qgrams_corrupted, report_diff};
use slpgram::{build_balanced, build_pairs, count_qgrams, oracle_count, parse_slp, Rule, Slp};

/// Non-overlapping q-gram frequencies of grammar-compressed text.
#[derive(Parser)]
#[command(name = "slpgram", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    /// Recursive halving with shared subtrees.
    Balanced,
    /// Repeated replacement of the most frequent adjacent pair.
    Pairs,
}

#[derive(Subcommand)]
enum Command {
    /// Build an SLP from raw bytes.
    Build {
        /// Input file; standard input when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "balanced")]
        method: Method,
        /// Output file; standard output when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the non-overlapping frequency of every q-gram as TSV.
    Count {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        q: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare the grammar-based counts with counts on the expanded text.
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        q: u32,
        /// Largest text length that may be expanded.
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Perturb one weight of the grammar-based count.
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Print the rule count, root, text length and occurrence counts.
    Info {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the derived text.
    Decompress {
        #[arg(long)]
        input: Option<PathBuf>,
        /// Largest text length that may be written.
        #[arg(long, default_value_t = 1 << 30)]
        limit: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// How a command failed, mapped to the process exit code.
enum Failure {
    Input(anyhow::Error),
    Limit(anyhow::Error),
    Mismatch,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Input(e.into())
    }
}

fn input_name(input: &Option<PathBuf>) -> String {
    input
        .as_ref()
        .map_or_else(|| "<stdin>".to_string(), |p| p.display().to_string())
}

fn read_input(input: &Option<PathBuf>) -> Result<Vec<u8>, Failure> {
    let mut bytes = Vec::new();
    match input {
        Some(path) => {
            bytes = fs::read(path)
                .with_context(|| format!("cannot read {}", path.display()))
                .map_err(Failure::Input)?;
        }
        None => {
            io::stdin().read_to_end(&mut bytes)?;
        }
    }
    Ok(bytes)
}

fn read_slp(input: &Option<PathBuf>) -> Result<Slp, Failure> {
    let bytes = read_input(input)?;
    let slp = parse_slp(&bytes)
        .with_context(|| input_name(input))
        .map_err(Failure::Input)?;
    let unreachable = slp.unreachable();
    if !unreachable.is_empty() {
        eprintln!(
            "warning: {}: {} variable(s) unreachable from the root, first {}",
            input_name(input),
            unreachable.len(),
            unreachable[0]
        );
    }
    Ok(slp)
}

fn open_output(output: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match output {
        Some(path) => Box::new(BufWriter::new(
            fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))
                .map_err(Failure::Input)?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn library(e: slpgram::Error) -> Failure {
    match e {
        slpgram::Error::ExpansionLimit { .. } => Failure::Limit(e.into()),
        e => Failure::Input(e.into()),
    }
}

fn write_text(slp: &Slp, out: &mut dyn Write) -> io::Result<()> {
    let mut stack = vec![slp.root()];
    while let Some(v) = stack.pop() {
        match slp.rule(v) {
            Rule::Terminal(s) => {
                out.write_all(&[s.as_byte().expect("parsed terminals are bytes")])?
            }
            Rule::Pair(l, r) => {
                stack.push(r);
                stack.push(l);
            }
        }
    }
    Ok(())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Build {
            input,
            method,
            output,
        } => {
            let bytes = read_input(&input)?;
            let slp = match method {
                Method::Balanced => build_balanced(&bytes),
                Method::Pairs => build_pairs(&bytes),
            }
            .with_context(|| input_name(&input))
            .map_err(Failure::Input)?;
            let mut out = open_output(&output)?;
            out.write_all(slp.to_text().as_bytes())?;
            out.flush()?;
        }
        Command::Count { input, q, output } => {
            let slp = read_slp(&input)?;
            let report = count_qgrams(&slp, q as usize).map_err(library)?;
            let mut out = open_output(&output)?;
            out.write_all(report.to_tsv().as_bytes())?;
            out.flush()?;
        }
        Command::Verify {
            input,
            q,
            limit,
            output,
            corrupt,
        } => {
            let slp = read_slp(&input)?;
            let q = q as usize;
            let want = oracle_count(&slp, q, limit).map_err(library)?;
            let got = if corrupt {
                count_qgrams_corrupted(&slp, q)
            } else {
                count_qgrams(&slp, q)
            }
            .map_err(library)?;
            let mut out = open_output(&output)?;
            match report_diff(&got, &want, ("pipeline", "oracle")) {
                None => writeln!(out, "identical")?,
                Some(diff) => {
                    out.write_all(diff.as_bytes())?;
                    out.flush()?;
                    return Err(Failure::Mismatch);
                }
            }
            out.flush()?;
        }
        Command::Info { input, output } => {
            let slp = read_slp(&input)?;
            let meta = slpgram::compute_meta(&slp, 1).map_err(library)?;
            let vocc: Vec<u64> = (1..=slp.n())
                .map(|v| meta.vocc(v))
                .filter(|&c| c > 0)
                .collect();
            let mut out = open_output(&output)?;
            writeln!(
                out,
                "n={} root={} length={}",
                slp.n(),
                slp.root(),
                slp.text_len()
            )?;
            writeln!(
                out,
                "vocc min={} max={} unreachable={}",
                vocc.iter().min().copied().unwrap_or(0),
                vocc.iter().max().copied().unwrap_or(0),
                slp.n() - vocc.len()
            )?;
            out.flush()?;
        }
        Command::Decompress {
            input,
            limit,
            output,
        } => {
            let slp = read_slp(&input)?;
            let length = slp.text_len();
            if length > limit {
                return Err(library(slpgram::Error::ExpansionLimit { length, limit }));
            }
            let mut out = open_output(&output)?;
            write_text(&slp, &mut out)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Limit(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
