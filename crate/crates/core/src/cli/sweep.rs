//! Monte-Carlo bit-error-rate sweeps.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::channel::{harden, slice, ChannelKind, ChannelSpec, RngStream};
use crate::decoder::{DecodeProblem, Decoder};
use crate::encoder::{StateSpaceEncoder, Termination};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::gf2::BitVector;

pub const CSV_HEADER: &str = "param,trials,info_bits,bit_errors,ber,decoder,decision";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Decision {
    #[default]
    Hard,
    Soft,
}

impl FromStr for Decision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hard" => Ok(Self::Hard),
            "soft" => Ok(Self::Soft),
            other => Err(Error::InvalidParameter(format!(
                "unknown decision mode \"{other}\" (expected hard|soft)"
            ))),
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hard => "hard",
            Self::Soft => "soft",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Bowyer,
    Viterbi,
    /// Uncoded pass-through: information bits are sent and sliced directly.
    None,
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bowyer => "bowyer",
            Self::Viterbi => "viterbi",
            Self::None => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub channel: ChannelKind,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub frame_bits: usize,
    pub seed: u64,
    pub decision: Decision,
    pub decoder: DecoderKind,
    pub termination: Termination,
    pub execution: Execution,
}

impl SweepConfig {
    pub fn new(
        channel: ChannelKind,
        grid: Vec<f64>,
        trials: usize,
        frame_bits: usize,
        seed: u64,
    ) -> Self {
        Self {
            channel,
            grid,
            trials,
            frame_bits,
            seed,
            decision: Decision::Hard,
            decoder: DecoderKind::Bowyer,
            termination: Termination::Zero,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub trials: usize,
    pub info_bits: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub decoder: DecoderKind,
    pub decision: Decision,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.param,
            self.trials,
            self.info_bits,
            self.bit_errors,
            self.ber,
            self.decoder,
            self.decision
        )
    }
}

/// Runs `trials` frames per grid point. Trial `t` draws its information bits
/// and channel noise from stream `t` of `seed`, so results do not depend on
/// scheduling.
pub fn ber_sweep(enc: &StateSpaceEncoder, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if cfg.frame_bits == 0 || !cfg.frame_bits.is_multiple_of(enc.k()) {
        return Err(Error::InvalidParameter(format!(
            "frame length {} must be a positive multiple of k = {}",
            cfg.frame_bits,
            enc.k()
        )));
    }
    if cfg.grid.is_empty() {
        return Err(Error::InvalidParameter("grid must not be empty".into()));
    }
    let uncoded = cfg.decoder == DecoderKind::None;
    let rate = if uncoded { 1.0 } else { enc.rate() };
    let specs = cfg
        .grid
        .iter()
        .map(|&v| match cfg.channel {
            ChannelKind::Bsc => ChannelSpec::bsc(v),
            ChannelKind::Awgn => ChannelSpec::awgn(v, rate),
        })
        .collect::<Result<Vec<_>>>()?;
    let decoder = Decoder::new(enc)?;
    let decision = if uncoded {
        Decision::Hard
    } else {
        cfg.decision
    };

    specs
        .iter()
        .zip(&cfg.grid)
        .map(|(spec, &param)| {
            let errors = map_indexed(cfg.execution, cfg.trials, |t| {
                run_trial(enc, &decoder, cfg, spec, RngStream::new(cfg.seed, t as u64))
            })
            .into_iter()
            .sum::<Result<u64>>()?;
            let info_bits = (cfg.trials * cfg.frame_bits) as u64;
            Ok(SweepRow {
                param,
                trials: cfg.trials,
                info_bits,
                bit_errors: errors,
                ber: errors as f64 / info_bits as f64,
                decoder: cfg.decoder,
                decision,
            })
        })
        .collect()
}

fn run_trial(
    enc: &StateSpaceEncoder,
    decoder: &Decoder,
    cfg: &SweepConfig,
    spec: &ChannelSpec,
    stream: RngStream,
) -> Result<u64> {
    let mut rng = stream.rng();
    let info: Vec<bool> = (0..cfg.frame_bits).map(|_| rng.random_bool(0.5)).collect();
    let map = cfg.channel.symbol_map();

    if cfg.decoder == DecoderKind::None {
        let received = spec.transmit(&info, &mut rng)?;
        return Ok(info
            .iter()
            .zip(&received)
            .filter(|(&b, &r)| slice(r, map) != b)
            .count() as u64);
    }

    let blocks = BitVector::from_bits(info.iter().copied()).chunks(enc.k())?;
    let encoded = enc.encode(&blocks, &enc.zero_state(), cfg.termination)?;
    let coded: Vec<bool> = encoded
        .codeword
        .iter()
        .flat_map(|y| y.iter().collect::<Vec<_>>())
        .collect();
    let mut received = spec.transmit(&coded, &mut rng)?;
    if cfg.decision == Decision::Hard {
        received = harden(&received, map);
    }
    let problem = DecodeProblem::new(enc, &received, map, enc.zero_state(), cfg.termination)?;
    let decoded = match cfg.decoder {
        DecoderKind::Viterbi => decoder.viterbi_forward(&problem)?,
        _ => decoder.decode(&problem)?,
    };
    Ok(blocks
        .iter()
        .zip(&decoded.inputs)
        .map(|(u, v)| (u ^ v).count_ones() as u64)
        .sum())
}
