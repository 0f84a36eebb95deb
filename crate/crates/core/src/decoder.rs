//! Maximum-likelihood decoding over the encoder trellis.
//!
//! The primary decoder runs backward dynamic programming: starting from a
//! boundary value at stage `N`, it tabulates the cost-to-go `J[k][x]` and the
//! minimizing input `μ[k][x]` for every stage and state, then rolls forward
//! from `x0` following the policy. The stage cost is the squared Euclidean
//! distance between the mapped output block `C·x ⊕ D·u` and the received
//! block. A forward Viterbi pass and an exhaustive search are provided as
//! cross-checks.
//!
//! All three decoders share one tie rule: among equal-cost candidates the
//! input sequence that is smallest as a binary number wins, with `u[0]` the
//! most significant block.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::encoder::{StateSpaceEncoder, Termination, Trellis};
use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Largest `N·k` accepted by [`brute_force_ml`].
pub const BRUTE_FORCE_CAP_BITS: usize = 20;

/// Channel amplitude assigned to each code bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolMap {
    zero_level: f64,
    one_level: f64,
}

impl SymbolMap {
    pub fn new(zero_level: f64, one_level: f64) -> Result<Self> {
        if !zero_level.is_finite() || !one_level.is_finite() || zero_level == one_level {
            return Err(Error::InvalidParameter(format!(
                "symbol levels must be finite and distinct, got {zero_level} and {one_level}"
            )));
        }
        Ok(Self {
            zero_level,
            one_level,
        })
    }

    /// 0 → 0.0, 1 → 1.0: bits compared to received reals directly.
    pub const fn identity() -> Self {
        Self {
            zero_level: 0.0,
            one_level: 1.0,
        }
    }

    /// Antipodal signalling, 0 → +1.0, 1 → −1.0.
    pub const fn bpsk() -> Self {
        Self {
            zero_level: 1.0,
            one_level: -1.0,
        }
    }

    pub fn zero_level(&self) -> f64 {
        self.zero_level
    }

    pub fn one_level(&self) -> f64 {
        self.one_level
    }

    pub fn level(&self, bit: bool) -> f64 {
        if bit {
            self.one_level
        } else {
            self.zero_level
        }
    }
}

impl Default for SymbolMap {
    fn default() -> Self {
        Self::identity()
    }
}

impl FromStr for SymbolMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Self::identity()),
            "bpsk" => Ok(Self::bpsk()),
            other => Err(Error::InvalidParameter(format!(
                "unknown symbol map \"{other}\" (expected identity|bpsk)"
            ))),
        }
    }
}

/// A received sequence cut into `N` blocks of `n` reals, with the decoding
/// boundary conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeProblem {
    received: Vec<Vec<f64>>,
    map: SymbolMap,
    x0: BitVector,
    termination: Termination,
}

impl DecodeProblem {
    pub fn new(
        enc: &StateSpaceEncoder,
        received: &[f64],
        map: SymbolMap,
        x0: BitVector,
        termination: Termination,
    ) -> Result<Self> {
        let n = enc.n();
        if received.is_empty() || !received.len().is_multiple_of(n) {
            return Err(Error::InvalidParameter(format!(
                "received length {} is not a positive multiple of n = {n}",
                received.len()
            )));
        }
        if let Some(bad) = received.iter().find(|r| !r.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite received value {bad}"
            )));
        }
        enc.check_state(&x0)?;
        Ok(Self {
            received: received.chunks(n).map(<[f64]>::to_vec).collect(),
            map,
            x0,
            termination,
        })
    }

    /// Identity map, zero initial state, free end.
    pub fn with_defaults(enc: &StateSpaceEncoder, received: &[f64]) -> Result<Self> {
        Self::new(
            enc,
            received,
            SymbolMap::identity(),
            enc.zero_state(),
            Termination::Free,
        )
    }

    pub fn stages(&self) -> usize {
        self.received.len()
    }

    pub fn block(&self, k: usize) -> &[f64] {
        &self.received[k]
    }

    pub fn received(&self) -> &[Vec<f64>] {
        &self.received
    }

    pub fn map(&self) -> SymbolMap {
        self.map
    }

    pub fn x0(&self) -> &BitVector {
        &self.x0
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }
}

/// Cost-to-go and optimal policy for every stage and state.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueTable {
    k: usize,
    cost_to_go: Vec<Vec<f64>>,
    policy: Vec<Vec<usize>>,
}

impl ValueTable {
    pub fn stages(&self) -> usize {
        self.policy.len()
    }

    /// `J[stage][state]`, `stage` in `0..=N`. Infeasible entries are `+∞`.
    pub fn cost(&self, stage: usize, state: usize) -> f64 {
        self.cost_to_go[stage][state]
    }

    pub fn cost_row(&self, stage: usize) -> &[f64] {
        &self.cost_to_go[stage]
    }

    /// `μ[stage][state]` as an input index, `stage` in `0..N`.
    pub fn policy_index(&self, stage: usize, state: usize) -> usize {
        self.policy[stage][state]
    }

    pub fn policy(&self, stage: usize, state: usize) -> BitVector {
        BitVector::from_index(self.policy[stage][state] as u64, self.k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub inputs: Vec<BitVector>,
    /// `x0 … xN`.
    pub states: Vec<BitVector>,
    pub codeword: Vec<BitVector>,
    pub total_cost: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algorithm {
    #[default]
    Bowyer,
    Viterbi,
    Brute,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bowyer" => Ok(Self::Bowyer),
            "viterbi" => Ok(Self::Viterbi),
            "brute" => Ok(Self::Brute),
            other => Err(Error::InvalidParameter(format!(
                "unknown algorithm \"{other}\" (expected bowyer|viterbi|brute)"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bowyer => "bowyer",
            Self::Viterbi => "viterbi",
            Self::Brute => "brute",
        })
    }
}

/// Squared Euclidean distance between the mapped output `C·x ⊕ D·u` and `r`.
pub fn stage_cost(
    enc: &StateSpaceEncoder,
    x: &BitVector,
    u: &BitVector,
    r: &[f64],
    map: SymbolMap,
) -> Result<f64> {
    if r.len() != enc.n() {
        return Err(Error::DimensionMismatch {
            op: "stage_cost",
            expected: enc.n(),
            found: r.len(),
        });
    }
    let (_, y) = enc.step(x, u)?;
    Ok(block_distance(&y, r, map))
}

fn block_distance(y: &BitVector, r: &[f64], map: SymbolMap) -> f64 {
    y.iter().zip(r).fold(0.0, |acc, (bit, &ri)| {
        let d = map.level(bit) - ri;
        acc + d * d
    })
}

/// A trellis prepared once for decoding many problems with the same code.
#[derive(Debug, Clone)]
pub struct Decoder {
    trellis: Trellis,
}

impl Decoder {
    pub fn new(enc: &StateSpaceEncoder) -> Result<Self> {
        Ok(Self {
            trellis: Trellis::new(enc)?,
        })
    }

    pub fn trellis(&self) -> &Trellis {
        &self.trellis
    }

    fn check(&self, p: &DecodeProblem) -> Result<()> {
        if p.x0.len() != self.trellis.m() {
            return Err(Error::DimensionMismatch {
                op: "decode x0",
                expected: self.trellis.m(),
                found: p.x0.len(),
            });
        }
        if let Some(b) = p.received.iter().find(|b| b.len() != self.trellis.n()) {
            return Err(Error::DimensionMismatch {
                op: "decode block",
                expected: self.trellis.n(),
                found: b.len(),
            });
        }
        Ok(())
    }

    /// Stage cost of every branch `state * 2^k + input` for one received block.
    fn branch_costs(&self, r: &[f64], map: SymbolMap) -> Vec<f64> {
        let t = &self.trellis;
        (0..t.num_states())
            .flat_map(|s| (0..t.num_inputs()).map(move |u| (s, u)))
            .map(|(s, u)| block_distance(t.output(s, u), r, map))
            .collect()
    }

    fn boundary(&self, termination: Termination) -> Vec<f64> {
        let states = self.trellis.num_states();
        match termination {
            Termination::Free => vec![0.0; states],
            Termination::Zero => {
                let mut j = vec![f64::INFINITY; states];
                j[0] = 0.0;
                j
            }
        }
    }

    pub fn backward_pass(&self, p: &DecodeProblem) -> Result<ValueTable> {
        self.check(p)?;
        let t = &self.trellis;
        let (states, inputs, stages) = (t.num_states(), t.num_inputs(), p.stages());
        let mut cost_to_go = vec![Vec::new(); stages + 1];
        let mut policy = vec![Vec::new(); stages];
        cost_to_go[stages] = self.boundary(p.termination);
        for k in (0..stages).rev() {
            let costs = self.branch_costs(&p.received[k], p.map);
            let later = &cost_to_go[k + 1];
            let mut j = vec![f64::INFINITY; states];
            let mut mu = vec![0usize; states];
            for s in 0..states {
                for u in 0..inputs {
                    let value = costs[s * inputs + u] + later[t.next_state(s, u)];
                    // strict: the smallest input keeps ties
                    if value < j[s] {
                        j[s] = value;
                        mu[s] = u;
                    }
                }
            }
            cost_to_go[k] = j;
            policy[k] = mu;
        }
        Ok(ValueTable {
            k: t.k(),
            cost_to_go,
            policy,
        })
    }

    /// Backward pass, then forward roll-out of the policy from `x0`.
    pub fn decode(&self, p: &DecodeProblem) -> Result<DecodeResult> {
        let table = self.backward_pass(p)?;
        let x0 = p.x0.to_index() as usize;
        let total_cost = table.cost(0, x0);
        if !total_cost.is_finite() {
            return Err(Error::NoValidCodeword);
        }
        let mut path = Vec::with_capacity(p.stages());
        let mut s = x0;
        for k in 0..p.stages() {
            let u = table.policy_index(k, s);
            path.push(u);
            s = self.trellis.next_state(s, u);
        }
        Ok(self.result(x0, &path, total_cost))
    }

    /// Forward add-compare-select with survivor traceback.
    pub fn viterbi_forward(&self, p: &DecodeProblem) -> Result<DecodeResult> {
        self.check(p)?;
        let t = &self.trellis;
        let (states, inputs, stages) = (t.num_states(), t.num_inputs(), p.stages());
        let x0 = p.x0.to_index() as usize;
        let mut metric = vec![f64::INFINITY; states];
        metric[x0] = 0.0;
        // survivors[k][s] = (previous state, input) of the best path into s at stage k+1
        let mut survivors: Vec<Vec<(usize, usize)>> = Vec::with_capacity(stages);
        for k in 0..stages {
            let costs = self.branch_costs(&p.received[k], p.map);
            let mut next_metric = vec![f64::INFINITY; states];
            let mut surv = vec![(usize::MAX, 0usize); states];
            for s in 0..states {
                if metric[s] == f64::INFINITY {
                    continue;
                }
                for u in 0..inputs {
                    let to = t.next_state(s, u);
                    let value = metric[s] + costs[s * inputs + u];
                    let better = match value.partial_cmp(&next_metric[to]) {
                        Some(Ordering::Less) => true,
                        Some(Ordering::Equal) => {
                            let (ps, pu) = surv[to];
                            prefer_path(&survivors, k, (s, u), (ps, pu))
                        }
                        _ => false,
                    };
                    if better {
                        next_metric[to] = value;
                        surv[to] = (s, u);
                    }
                }
            }
            survivors.push(surv);
            metric = next_metric;
        }

        let end = match p.termination {
            Termination::Zero => 0,
            Termination::Free => {
                let best = metric.iter().copied().fold(f64::INFINITY, f64::min);
                let mut end = metric.iter().position(|&c| c == best).unwrap_or(0);
                for (s, &c) in metric.iter().enumerate().skip(end + 1) {
                    if c == best && stages > 0 && lex_less_at(&survivors, stages, s, end) {
                        end = s;
                    }
                }
                end
            }
        };
        let total_cost = metric[end];
        if !total_cost.is_finite() {
            return Err(Error::NoValidCodeword);
        }
        let mut path = vec![0usize; stages];
        let mut s = end;
        for k in (0..stages).rev() {
            let (prev, u) = survivors[k][s];
            path[k] = u;
            s = prev;
        }
        Ok(self.result(x0, &path, total_cost))
    }

    /// Exhaustive search over all `2^{N·k}` input sequences.
    pub fn brute_force_ml(&self, p: &DecodeProblem) -> Result<DecodeResult> {
        self.check(p)?;
        let t = &self.trellis;
        let (stages, k) = (p.stages(), t.k());
        let bits = stages * k;
        if bits > BRUTE_FORCE_CAP_BITS {
            return Err(Error::CapExceeded {
                bits,
                cap_bits: BRUTE_FORCE_CAP_BITS,
            });
        }
        let x0 = p.x0.to_index() as usize;
        let mask = (1usize << k) - 1;
        let mut best: Option<(f64, u64)> = None;
        let mut path = vec![0usize; stages];
        // ascending index = ascending binary order with u[0] most significant
        for seq in 0..1u64 << bits {
            for (i, u) in path.iter_mut().enumerate() {
                *u = (seq >> ((stages - 1 - i) * k)) as usize & mask;
            }
            let mut s = x0;
            let mut total = 0.0;
            for (i, &u) in path.iter().enumerate() {
                total += block_distance(t.output(s, u), &p.received[i], p.map);
                s = t.next_state(s, u);
            }
            if p.termination == Termination::Zero && s != 0 {
                continue;
            }
            if best.is_none_or(|(c, _)| total < c) {
                best = Some((total, seq));
            }
        }
        let (total_cost, seq) = best.ok_or(Error::NoValidCodeword)?;
        for (i, u) in path.iter_mut().enumerate() {
            *u = (seq >> ((stages - 1 - i) * k)) as usize & mask;
        }
        Ok(self.result(x0, &path, total_cost))
    }

    fn result(&self, x0: usize, path: &[usize], total_cost: f64) -> DecodeResult {
        let t = &self.trellis;
        let mut states = Vec::with_capacity(path.len() + 1);
        let mut inputs = Vec::with_capacity(path.len());
        let mut codeword = Vec::with_capacity(path.len());
        let mut s = x0;
        states.push(BitVector::from_index(s as u64, t.m()));
        for &u in path {
            inputs.push(BitVector::from_index(u as u64, t.k()));
            codeword.push(t.output(s, u).clone());
            s = t.next_state(s, u);
            states.push(BitVector::from_index(s as u64, t.m()));
        }
        DecodeResult {
            inputs,
            states,
            codeword,
            total_cost,
        }
    }
}

/// Whether the path `prefix(cand.0) + cand.1` is lexicographically smaller
/// than `prefix(held.0) + held.1`, where prefixes are the stage-`k` survivors.
fn prefer_path(
    survivors: &[Vec<(usize, usize)>],
    k: usize,
    cand: (usize, usize),
    held: (usize, usize),
) -> bool {
    if cand.0 == held.0 {
        cand.1 < held.1
    } else {
        lex_less_at(survivors, k, cand.0, held.0)
    }
}

/// Compares the survivor paths ending in states `a != b` at stage `k`. Both
/// start from the same state, so tracing back reaches a common ancestor; the
/// inputs leaving that ancestor are the first place the paths differ.
fn lex_less_at(
    survivors: &[Vec<(usize, usize)>],
    mut k: usize,
    mut a: usize,
    mut b: usize,
) -> bool {
    loop {
        debug_assert!(k > 0 && a != b);
        let (pa, ua) = survivors[k - 1][a];
        let (pb, ub) = survivors[k - 1][b];
        if pa == pb {
            return ua < ub;
        }
        a = pa;
        b = pb;
        k -= 1;
    }
}

pub fn backward_pass(enc: &StateSpaceEncoder, p: &DecodeProblem) -> Result<ValueTable> {
    Decoder::new(enc)?.backward_pass(p)
}

pub fn decode(enc: &StateSpaceEncoder, p: &DecodeProblem) -> Result<DecodeResult> {
    Decoder::new(enc)?.decode(p)
}

pub fn viterbi_forward(enc: &StateSpaceEncoder, p: &DecodeProblem) -> Result<DecodeResult> {
    Decoder::new(enc)?.viterbi_forward(p)
}

pub fn brute_force_ml(enc: &StateSpaceEncoder, p: &DecodeProblem) -> Result<DecodeResult> {
    Decoder::new(enc)?.brute_force_ml(p)
}

pub fn decode_with(
    enc: &StateSpaceEncoder,
    p: &DecodeProblem,
    algorithm: Algorithm,
) -> Result<DecodeResult> {
    let decoder = Decoder::new(enc)?;
    match algorithm {
        Algorithm::Bowyer => decoder.decode(p),
        Algorithm::Viterbi => decoder.viterbi_forward(p),
        Algorithm::Brute => decoder.brute_force_ml(p),
    }
}
