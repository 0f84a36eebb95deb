//! Control-theoretic analysis of an encoder: controllability and
//! observability rank tests, zero-input orbits, and steering input sequences.

use std::collections::HashMap;

use crate::encoder::{check_cap, StateSpaceEncoder};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControllabilityReport {
    /// `[B | AB | … | A^{m-1}B]`, `m × m·k`.
    pub matrix: BitMatrix,
    pub rank: usize,
    pub controllable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservabilityReport {
    /// `[C; CA; …; CA^{m-1}]`, `n·m × m`.
    pub matrix: BitMatrix,
    pub rank: usize,
    pub observable: bool,
}

/// Zero-input trajectory from `start`, split at the first repeated state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub start: BitVector,
    pub transient: Vec<BitVector>,
    pub cycle: Vec<BitVector>,
}

/// A zero-input cycle together with every state outside it that flows into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basin {
    pub cycle: Vec<BitVector>,
    pub transient_states: Vec<BitVector>,
}

pub fn controllability_report(enc: &StateSpaceEncoder) -> Result<ControllabilityReport> {
    let mut block = enc.b().clone();
    let mut matrix = block.clone();
    for _ in 1..enc.m() {
        block = enc.a().matmul(&block)?;
        matrix = matrix.hstack(&block)?;
    }
    let rank = matrix.rank();
    Ok(ControllabilityReport {
        controllable: rank == enc.m(),
        matrix,
        rank,
    })
}

pub fn observability_report(enc: &StateSpaceEncoder) -> Result<ObservabilityReport> {
    let mut block = enc.c().clone();
    let mut matrix = block.clone();
    for _ in 1..enc.m() {
        block = block.matmul(enc.a())?;
        matrix = matrix.vstack(&block)?;
    }
    let rank = matrix.rank();
    Ok(ObservabilityReport {
        observable: rank == enc.m(),
        matrix,
        rank,
    })
}

/// Iterates `x ← A·x` from `x0` until a state repeats. Stops early, with the
/// whole trajectory reported as transient and an empty cycle, only if
/// `max_steps` is smaller than the orbit length; `2^m` always suffices.
pub fn orbit(enc: &StateSpaceEncoder, x0: &BitVector, max_steps: usize) -> Result<Orbit> {
    enc.check_state(x0)?;
    let mut seen: HashMap<BitVector, usize> = HashMap::new();
    let mut path = Vec::new();
    let mut x = x0.clone();
    while path.len() <= max_steps {
        if let Some(&first) = seen.get(&x) {
            let cycle = path.split_off(first);
            return Ok(Orbit {
                start: x0.clone(),
                transient: path,
                cycle,
            });
        }
        seen.insert(x.clone(), path.len());
        path.push(x.clone());
        x = enc.a().matvec(&x)?;
    }
    Ok(Orbit {
        start: x0.clone(),
        transient: path,
        cycle: Vec::new(),
    })
}

/// Partitions all `2^m` states into zero-input basins. Cycles are listed in
/// order of their smallest-index state discovered, each rotated to begin at
/// the first state reached while scanning states in index order.
pub fn all_orbits(enc: &StateSpaceEncoder) -> Result<Vec<Basin>> {
    let m = enc.m();
    check_cap(m)?;
    let total = 1usize << m;
    let succ: Vec<usize> = (0..total)
        .map(|s| {
            enc.a()
                .matvec(&BitVector::from_index(s as u64, m))
                .map(|x| x.to_index() as usize)
        })
        .collect::<Result<_>>()?;

    // basin id per state, assigned by walking forward until a labelled state
    // or a fresh cycle is found.
    const UNSEEN: usize = usize::MAX;
    let mut label = vec![UNSEEN; total];
    let mut on_cycle = vec![false; total];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for s in 0..total {
        if label[s] != UNSEEN {
            continue;
        }
        let mut walk = Vec::new();
        let mut pos: HashMap<usize, usize> = HashMap::new();
        let mut x = s;
        let id = loop {
            if label[x] != UNSEEN {
                break label[x];
            }
            if let Some(&p) = pos.get(&x) {
                let cycle = walk[p..].to_vec();
                for &c in &cycle {
                    on_cycle[c] = true;
                }
                cycles.push(cycle);
                break cycles.len() - 1;
            }
            pos.insert(x, walk.len());
            walk.push(x);
            x = succ[x];
        };
        for w in walk {
            label[w] = id;
        }
    }

    let to_vec = |s: usize| BitVector::from_index(s as u64, m);
    Ok(cycles
        .iter()
        .enumerate()
        .map(|(id, cycle)| Basin {
            cycle: cycle.iter().map(|&s| to_vec(s)).collect(),
            transient_states: (0..total)
                .filter(|&s| label[s] == id && !on_cycle[s])
                .map(to_vec)
                .collect(),
        })
        .collect())
}

/// Shortest input sequence (length `1..=max_horizon`) driving `x_start` to
/// `x_end`, or `None` if no such sequence exists within the horizon.
///
/// For horizon `T` the reachable set is `A^T·x_start ⊕ [A^{T-1}B | … | AB | B]·u`,
/// so each `T` is one GF(2) linear solve with free inputs fixed to zero.
pub fn steer(
    enc: &StateSpaceEncoder,
    x_start: &BitVector,
    x_end: &BitVector,
    max_horizon: usize,
) -> Result<Option<Vec<BitVector>>> {
    enc.check_state(x_start)?;
    enc.check_state(x_end)?;
    if max_horizon == 0 {
        return Err(Error::InvalidParameter(
            "steering horizon must be at least 1".into(),
        ));
    }
    let k = enc.k();
    // Columns are built right to left: B, then AB prepended, and so on.
    let mut gain: Option<BitMatrix> = None;
    let mut power_b = enc.b().clone();
    let mut free_state = x_start.clone();
    for _ in 1..=max_horizon {
        gain = Some(match gain {
            None => power_b.clone(),
            Some(g) => {
                power_b = enc.a().matmul(&power_b)?;
                power_b.hstack(&g)?
            }
        });
        free_state = enc.a().matvec(&free_state)?;
        let rhs = &free_state ^ x_end;
        let g = gain.as_ref().expect("set above");
        if let Some(u) = g.solve(&rhs)? {
            return Ok(Some(u.chunks(k)?));
        }
    }
    Ok(None)
}
