//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage and input errors (bad flags,
//! unreadable files, malformed bit or number lists), 2 when a library
//! operation rejects the request (malformed code file, infeasible
//! termination, no valid codeword).

pub mod sweep;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis;
use crate::channel::ChannelArg;
use crate::decoder::{decode_with, Algorithm, DecodeProblem, SymbolMap};
use crate::encoder::{StateSpaceEncoder, Termination};
use crate::error::Error;
use crate::exec::Execution;
use crate::gf2::{BitMatrix, BitVector};

pub use sweep::{ber_sweep, Decision, DecoderKind, SweepConfig, SweepRow, CSV_HEADER};

#[derive(Debug, Parser)]
#[command(
    name = "ssconv",
    version,
    about = "State-space convolutional code workbench"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the full state transition table.
    Table {
        #[arg(long)]
        code: PathBuf,
    },
    /// Encode a bit file.
    Encode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        initial_state: Option<String>,
        #[arg(long, default_value = "free")]
        terminate: String,
    },
    /// Decode a file of received reals.
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        received: PathBuf,
        #[arg(long, default_value = "identity")]
        map: String,
        #[arg(long)]
        initial_state: Option<String>,
        #[arg(long, default_value = "free")]
        terminate: String,
        #[arg(long, default_value = "bowyer")]
        algo: String,
    },
    /// Controllability, observability, zero-input cycles and steering.
    Analyze {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, num_args = 2, value_names = ["FROM", "TO"])]
        steer: Option<Vec<String>>,
        /// Also list the transient states feeding each cycle.
        #[arg(long)]
        orbits: bool,
    },
    /// Monte-Carlo BER sweep, CSV on stdout.
    Simulate {
        #[arg(long)]
        code: PathBuf,
        /// `bsc:P` or `awgn:DB`; the value is used when --grid is absent.
        #[arg(long)]
        channel: String,
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        frame_bits: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "hard")]
        decision: String,
        #[arg(long, default_value = "zero")]
        terminate: String,
        /// Send information bits uncoded and slice them directly.
        #[arg(long)]
        uncoded: bool,
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Domain(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (program name first) and runs the subcommand, writing
/// results to `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> CliResult<()> {
    match command {
        Command::Table { code } => table(&load_code(&code)?, out),
        Command::Encode {
            code,
            input,
            initial_state,
            terminate,
        } => {
            let enc = load_code(&code)?;
            let bits = usage(parse_bit_tokens(&read(&input)?))?;
            let x0 = initial(&enc, initial_state.as_deref())?;
            let termination: Termination = usage(terminate.parse())?;
            encode(&enc, &bits, &x0, termination, out)
        }
        Command::Decode {
            code,
            received,
            map,
            initial_state,
            terminate,
            algo,
        } => {
            let enc = load_code(&code)?;
            let values = parse_reals(&read(&received)?)?;
            let map: SymbolMap = usage(map.parse())?;
            let x0 = initial(&enc, initial_state.as_deref())?;
            let termination: Termination = usage(terminate.parse())?;
            let algo: Algorithm = usage(algo.parse())?;
            let problem = DecodeProblem::new(&enc, &values, map, x0, termination)?;
            decode(&enc, &problem, algo, out)
        }
        Command::Analyze {
            code,
            steer,
            orbits,
        } => {
            let enc = load_code(&code)?;
            let steer = match steer.as_deref() {
                Some([from, to]) => Some((state_arg(&enc, from)?, state_arg(&enc, to)?)),
                _ => None,
            };
            analyze(&enc, steer, orbits, out)
        }
        Command::Simulate {
            code,
            channel,
            grid,
            trials,
            frame_bits,
            seed,
            decision,
            terminate,
            uncoded,
            sequential,
        } => {
            let enc = load_code(&code)?;
            let channel: ChannelArg = usage(channel.parse())?;
            let mut cfg = SweepConfig::new(
                channel.kind,
                grid.unwrap_or_else(|| vec![channel.param]),
                trials,
                frame_bits,
                seed,
            );
            cfg.decision = usage(decision.parse())?;
            cfg.termination = usage(terminate.parse())?;
            if uncoded {
                cfg.decoder = DecoderKind::None;
            }
            if sequential {
                cfg.execution = Execution::Sequential;
            }
            let rows = ber_sweep(&enc, &cfg)?;
            emit(out, &format!("{CSV_HEADER}\n"))?;
            for row in rows {
                emit(out, &format!("{}\n", row.to_csv()))?;
            }
            Ok(())
        }
    }
}

fn usage<T>(r: crate::error::Result<T>) -> CliResult<T> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

fn emit(out: &mut dyn Write, s: &str) -> CliResult<()> {
    out.write_all(s.as_bytes())
        .map_err(|e| Failure::Usage(format!("write failed: {e}")))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_code(path: &Path) -> CliResult<StateSpaceEncoder> {
    let text = read(path)?;
    StateSpaceEncoder::parse_code_file(&text)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn state_arg(enc: &StateSpaceEncoder, s: &str) -> CliResult<BitVector> {
    let x: BitVector = usage(s.parse())?;
    if x.len() != enc.m() {
        return Err(Failure::Usage(format!(
            "state \"{s}\" must have {} bits",
            enc.m()
        )));
    }
    Ok(x)
}

fn initial(enc: &StateSpaceEncoder, arg: Option<&str>) -> CliResult<BitVector> {
    arg.map_or_else(|| Ok(enc.zero_state()), |s| state_arg(enc, s))
}

/// Whitespace-separated 0/1 tokens; a multi-character token such as `101`
/// contributes each of its bits in order.
pub fn parse_bit_tokens(text: &str) -> crate::error::Result<Vec<bool>> {
    text.split_whitespace()
        .map(|t| t.parse::<BitVector>().map(|v| v.iter().collect::<Vec<_>>()))
        .collect::<crate::error::Result<Vec<_>>>()
        .map(|v| v.concat())
}

fn parse_reals(text: &str) -> CliResult<Vec<f64>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Failure::Usage(format!("invalid received value \"{t}\"")))
        })
        .collect()
}

fn join_bits<'a>(blocks: impl IntoIterator<Item = &'a BitVector>) -> String {
    blocks
        .into_iter()
        .flat_map(|b| {
            b.iter()
                .map(|x| if x { "1" } else { "0" })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn table(enc: &StateSpaceEncoder, out: &mut dyn Write) -> CliResult<()> {
    let rows = enc.transition_table()?;
    let mut s = String::from("u state next output\n");
    for r in rows {
        s.push_str(&format!(
            "{} {} {} {}\n",
            r.u, r.current_state, r.next_state, r.output
        ));
    }
    emit(out, &s)
}

fn encode(
    enc: &StateSpaceEncoder,
    bits: &[bool],
    x0: &BitVector,
    termination: Termination,
    out: &mut dyn Write,
) -> CliResult<()> {
    if !bits.len().is_multiple_of(enc.k()) {
        return Err(Failure::Usage(format!(
            "input has {} bits, not a multiple of k = {}",
            bits.len(),
            enc.k()
        )));
    }
    let blocks = usage(BitVector::from_bits(bits.iter().copied()).chunks(enc.k()))?;
    let encoded = enc.encode(&blocks, x0, termination)?;
    emit(out, &format!("{}\n", join_bits(&encoded.codeword)))
}

fn decode(
    enc: &StateSpaceEncoder,
    problem: &DecodeProblem,
    algo: Algorithm,
    out: &mut dyn Write,
) -> CliResult<()> {
    let res = decode_with(enc, problem, algo)?;
    let states: Vec<String> = res.states.iter().map(ToString::to_string).collect();
    emit(
        out,
        &format!(
            "inputs: {}\ncodeword: {}\nstates: {}\ncost: {}\n",
            join_bits(&res.inputs),
            join_bits(&res.codeword),
            states.join(" "),
            res.total_cost
        ),
    )
}

fn indented(m: &BitMatrix) -> String {
    m.to_string().lines().map(|l| format!("  {l}\n")).collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn analyze(
    enc: &StateSpaceEncoder,
    steer: Option<(BitVector, BitVector)>,
    list_basins: bool,
    out: &mut dyn Write,
) -> CliResult<()> {
    let ctrb = analysis::controllability_report(enc)?;
    let obsv = analysis::observability_report(enc)?;
    let mut s = format!("dims: m={} k={} n={}\n", enc.m(), enc.k(), enc.n());
    s.push_str("controllability matrix:\n");
    s.push_str(&indented(&ctrb.matrix));
    s.push_str(&format!("controllability rank: {}\n", ctrb.rank));
    s.push_str(&format!("controllable: {}\n", yes_no(ctrb.controllable)));
    s.push_str("observability matrix:\n");
    s.push_str(&indented(&obsv.matrix));
    s.push_str(&format!("observability rank: {}\n", obsv.rank));
    s.push_str(&format!("observable: {}\n", yes_no(obsv.observable)));

    let basins = analysis::all_orbits(enc)?;
    s.push_str("zero-input cycles:\n");
    for b in &basins {
        let cycle: Vec<String> = b.cycle.iter().map(ToString::to_string).collect();
        s.push_str(&format!("  {{{}}}\n", cycle.join(" -> ")));
        if list_basins && !b.transient_states.is_empty() {
            let t: Vec<String> = b.transient_states.iter().map(ToString::to_string).collect();
            s.push_str(&format!("    transients: {}\n", t.join(" ")));
        }
    }

    if let Some((from, to)) = steer {
        let horizon = enc.m();
        match analysis::steer(enc, &from, &to, horizon)? {
            Some(inputs) => s.push_str(&format!(
                "steer {from} -> {to}: T={} inputs: {}\n",
                inputs.len(),
                join_bits(&inputs)
            )),
            None => s.push_str(&format!(
                "steer {from} -> {to}: unreachable within {horizon} steps\n"
            )),
        }
    }
    emit(out, &s)
}
