//! Seeded channel models: binary symmetric channel and AWGN over BPSK.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::decoder::SymbolMap;
use crate::error::{Error, Result};

/// Identifies an independent random sample sequence. The same
/// `(seed, stream_index)` always yields the same samples within a build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    Bsc,
    Awgn,
}

impl ChannelKind {
    /// Amplitudes the channel emits for code bits.
    pub fn symbol_map(&self) -> SymbolMap {
        match self {
            Self::Bsc => SymbolMap::identity(),
            Self::Awgn => SymbolMap::bpsk(),
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bsc => "bsc",
            Self::Awgn => "awgn",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    /// Crossover probability `p`, `0 <= p < 0.5`.
    Bsc { p: f64 },
    /// `Eb/N0` in dB per information bit, for a code of the given rate.
    Awgn { ebn0_db: f64, rate: f64 },
}

impl ChannelSpec {
    pub fn bsc(p: f64) -> Result<Self> {
        check_crossover(p)?;
        Ok(Self::Bsc { p })
    }

    pub fn awgn(ebn0_db: f64, rate: f64) -> Result<Self> {
        check_rate(rate)?;
        if !ebn0_db.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Eb/N0 must be finite, got {ebn0_db}"
            )));
        }
        Ok(Self::Awgn { ebn0_db, rate })
    }

    pub fn kind(&self) -> ChannelKind {
        match self {
            Self::Bsc { .. } => ChannelKind::Bsc,
            Self::Awgn { .. } => ChannelKind::Awgn,
        }
    }

    pub fn transmit<R: Rng + ?Sized>(&self, bits: &[bool], rng: &mut R) -> Result<Vec<f64>> {
        match *self {
            Self::Bsc { p } => transmit_bsc(bits, p, rng),
            Self::Awgn { ebn0_db, rate } => transmit_awgn(bits, ebn0_db, rate, rng),
        }
    }
}

/// A channel kind with one parameter, written `bsc:P` or `awgn:DB`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelArg {
    pub kind: ChannelKind,
    pub param: f64,
}

impl FromStr for ChannelArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, value) = s.split_once(':').ok_or_else(|| {
            Error::InvalidParameter(format!("expected bsc:P or awgn:DB, got \"{s}\""))
        })?;
        let kind = match kind {
            "bsc" => ChannelKind::Bsc,
            "awgn" => ChannelKind::Awgn,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown channel \"{other}\""
                )))
            }
        };
        let param = value.parse::<f64>().map_err(|_| {
            Error::InvalidParameter(format!("invalid channel parameter \"{value}\""))
        })?;
        Ok(Self { kind, param })
    }
}

fn check_crossover(p: f64) -> Result<()> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "crossover probability must satisfy 0 <= p < 0.5, got {p}"
        )));
    }
    Ok(())
}

fn check_rate(rate: f64) -> Result<()> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rate must be in (0, 1], got {rate}"
        )));
    }
    Ok(())
}

/// Flips each bit with probability `p`; emits 0.0 / 1.0.
pub fn transmit_bsc<R: Rng + ?Sized>(bits: &[bool], p: f64, rng: &mut R) -> Result<Vec<f64>> {
    check_crossover(p)?;
    Ok(bits
        .iter()
        .map(|&b| {
            let flipped = b ^ rng.random_bool(p);
            if flipped {
                1.0
            } else {
                0.0
            }
        })
        .collect())
}

/// Noise variance for BPSK at the given `Eb/N0` (dB) and code rate.
pub fn awgn_sigma2(ebn0_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))
}

/// Maps 0 → +1, 1 → −1 and adds Gaussian noise of variance
/// `1 / (2·rate·10^(ebn0_db/10))`.
pub fn transmit_awgn<R: Rng + ?Sized>(
    bits: &[bool],
    ebn0_db: f64,
    rate: f64,
    rng: &mut R,
) -> Result<Vec<f64>> {
    check_rate(rate)?;
    let sigma = awgn_sigma2(ebn0_db, rate).sqrt();
    let map = SymbolMap::bpsk();
    Ok(bits
        .iter()
        .map(|&b| {
            let noise: f64 = rng.sample(StandardNormal);
            map.level(b) + sigma * noise
        })
        .collect())
}

/// Snaps each value to the nearer symbol level; midpoints go to `zero_level`.
pub fn harden(received: &[f64], map: SymbolMap) -> Vec<f64> {
    received
        .iter()
        .map(|&r| {
            let d0 = (r - map.zero_level()).abs();
            let d1 = (r - map.one_level()).abs();
            if d1 < d0 {
                map.one_level()
            } else {
                map.zero_level()
            }
        })
        .collect()
}

/// Bit decision for a single received value: `true` when nearer `one_level`.
pub fn slice(r: f64, map: SymbolMap) -> bool {
    (r - map.one_level()).abs() < (r - map.zero_level()).abs()
}
