//! Convolutional encoders in state-space form over GF(2):
//!
//! ```text
//! x[t+1] = A·x[t] ⊕ B·u[t]
//! y[t]   = C·x[t] ⊕ D·u[t]
//! ```
//!
//! with `m` state bits, `k` input bits and `n` output bits per stage.

use std::fmt;
use std::str::FromStr;

use crate::analysis;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Largest `log2` of any exhaustive enumeration (tables, orbits, trellises).
pub const ENUMERATION_CAP_BITS: usize = 20;

/// How a frame ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Termination {
    /// Final state is unconstrained.
    #[default]
    Free,
    /// Tail inputs steer the encoder back to the all-zero state.
    Zero,
}

impl FromStr for Termination {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "free" => Ok(Self::Free),
            "zero" => Ok(Self::Zero),
            other => Err(Error::InvalidParameter(format!(
                "unknown termination mode \"{other}\" (expected free|zero)"
            ))),
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Free => "free",
            Self::Zero => "zero",
        })
    }
}

/// The `(A, B, C, D)` realization of a convolutional encoder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpaceEncoder {
    a: BitMatrix,
    b: BitMatrix,
    c: BitMatrix,
    d: BitMatrix,
}

impl StateSpaceEncoder {
    pub fn new(a: BitMatrix, b: BitMatrix, c: BitMatrix, d: BitMatrix) -> Result<Self> {
        let m = a.rows();
        let k = b.cols();
        let n = c.rows();
        let expect = |what: &str, mat: &BitMatrix, rows: usize, cols: usize| {
            if mat.rows() == rows && mat.cols() == cols {
                Ok(())
            } else {
                Err(Error::InvalidDimensions(format!(
                    "{what} must be {rows}x{cols}, got {}x{}",
                    mat.rows(),
                    mat.cols()
                )))
            }
        };
        expect("A", &a, m, m)?;
        expect("B", &b, m, k)?;
        expect("C", &c, n, m)?;
        expect("D", &d, n, k)?;
        if k > n {
            return Err(Error::InvalidDimensions(format!(
                "rate k/n = {k}/{n} exceeds 1"
            )));
        }
        Ok(Self { a, b, c, d })
    }

    /// The rate-1/2 recursive systematic example encoder with
    /// `A = [[1,1],[1,0]]`, `B = [1,0]ᵀ`, `C = [[0,0],[1,0]]`, `D = [1,1]ᵀ`.
    pub fn rsc_example() -> Self {
        let mat = |rows: &[&[u8]]| BitMatrix::from_rows(rows).expect("static matrix");
        Self::new(
            mat(&[&[1, 1], &[1, 0]]),
            mat(&[&[1], &[0]]),
            mat(&[&[0, 0], &[1, 0]]),
            mat(&[&[1], &[1]]),
        )
        .expect("static encoder")
    }

    pub fn a(&self) -> &BitMatrix {
        &self.a
    }

    pub fn b(&self) -> &BitMatrix {
        &self.b
    }

    pub fn c(&self) -> &BitMatrix {
        &self.c
    }

    pub fn d(&self) -> &BitMatrix {
        &self.d
    }

    /// Number of state bits (memory cells).
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Input bits per stage.
    pub fn k(&self) -> usize {
        self.b.cols()
    }

    /// Output bits per stage.
    pub fn n(&self) -> usize {
        self.c.rows()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn zero_state(&self) -> BitVector {
        BitVector::zeros(self.m())
    }

    /// One stage of the encoder: returns `(next_state, output)`.
    pub fn step(&self, x: &BitVector, u: &BitVector) -> Result<(BitVector, BitVector)> {
        self.check_state(x)?;
        self.check_input(u)?;
        let next = &self.a.matvec(x)? ^ &self.b.matvec(u)?;
        let y = &self.c.matvec(x)? ^ &self.d.matvec(u)?;
        Ok((next, y))
    }

    /// Encodes `input` from `x0`. Under [`Termination::Zero`] the steering tail
    /// is appended to the codeword; no tail is needed when the frame already
    /// ends in the zero state.
    pub fn encode(
        &self,
        input: &[BitVector],
        x0: &BitVector,
        termination: Termination,
    ) -> Result<Encoded> {
        self.check_state(x0)?;
        let mut state = x0.clone();
        let mut codeword = Vec::with_capacity(input.len() + self.m());
        for u in input {
            let (next, y) = self.step(&state, u)?;
            codeword.push(y);
            state = next;
        }
        let mut tail = Vec::new();
        if termination == Termination::Zero && !state.is_zero() {
            let horizon = self.m();
            tail =
                analysis::steer(self, &state, &self.zero_state(), horizon)?.ok_or_else(|| {
                    Error::TerminationInfeasible {
                        from: state.to_string(),
                        horizon,
                    }
                })?;
            for u in &tail {
                let (next, y) = self.step(&state, u)?;
                codeword.push(y);
                state = next;
            }
        }
        Ok(Encoded {
            codeword,
            final_state: state,
            tail,
        })
    }

    /// Every `(state, input)` pair with its successor and output, ordered by
    /// state index then input index.
    pub fn transition_table(&self) -> Result<Vec<TransitionRow>> {
        check_cap(self.m() + self.k())?;
        let mut rows = Vec::with_capacity(1 << (self.m() + self.k()));
        for s in 0..1u64 << self.m() {
            let x = BitVector::from_index(s, self.m());
            for i in 0..1u64 << self.k() {
                let u = BitVector::from_index(i, self.k());
                let (next_state, output) = self.step(&x, &u)?;
                rows.push(TransitionRow {
                    u,
                    current_state: x.clone(),
                    next_state,
                    output,
                });
            }
        }
        Ok(rows)
    }

    pub fn check_state(&self, x: &BitVector) -> Result<()> {
        if x.len() != self.m() {
            return Err(Error::DimensionMismatch {
                op: "state",
                expected: self.m(),
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn check_input(&self, u: &BitVector) -> Result<()> {
        if u.len() != self.k() {
            return Err(Error::DimensionMismatch {
                op: "input",
                expected: self.k(),
                found: u.len(),
            });
        }
        Ok(())
    }

    /// Parses the line-oriented `.ssc` code format:
    ///
    /// ```text
    /// dims: m k n
    /// <m rows of A> <m rows of B> <n rows of C> <n rows of D>
    /// ```
    ///
    /// `#` starts a comment; blank lines are ignored.
    pub fn parse_code_file(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (header_line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `dims: m k n` header".into(),
        })?;
        let dims = header
            .strip_prefix("dims:")
            .ok_or_else(|| Error::Parse {
                line: header_line,
                msg: format!("expected `dims: m k n`, found \"{header}\""),
            })?
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>().map_err(|_| Error::Parse {
                    line: header_line,
                    msg: format!("invalid dimension \"{t}\""),
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        let &[m, k, n] = dims.as_slice() else {
            return Err(Error::Parse {
                line: header_line,
                msg: format!("expected three dimensions, found {}", dims.len()),
            });
        };
        if m == 0 || k == 0 || n == 0 {
            return Err(Error::Parse {
                line: header_line,
                msg: "dimensions must be at least 1".into(),
            });
        }

        let mut last_line = header_line;
        let mut read_matrix = |name: &str, rows: usize, cols: usize| -> Result<BitMatrix> {
            let mut out = Vec::with_capacity(rows);
            for r in 0..rows {
                let (line, text) = lines.next().ok_or_else(|| Error::Parse {
                    line: last_line + 1,
                    msg: format!("{name}: expected {rows} rows, found {r}"),
                })?;
                last_line = line;
                let bits = text
                    .split_whitespace()
                    .map(|t| match t {
                        "0" => Ok(0u8),
                        "1" => Ok(1u8),
                        other => Err(Error::Parse {
                            line,
                            msg: format!("{name}: non-binary entry \"{other}\""),
                        }),
                    })
                    .collect::<Result<Vec<u8>>>()?;
                if bits.len() != cols {
                    return Err(Error::Parse {
                        line,
                        msg: format!("{name}: expected {cols} entries, found {}", bits.len()),
                    });
                }
                out.push(bits);
            }
            BitMatrix::from_rows(&out)
        };
        let a = read_matrix("A", m, m)?;
        let b = read_matrix("B", m, k)?;
        let c = read_matrix("C", n, m)?;
        let d = read_matrix("D", n, k)?;
        if let Some((line, text)) = lines.next() {
            return Err(Error::Parse {
                line,
                msg: format!("unexpected trailing content \"{text}\""),
            });
        }
        Self::new(a, b, c, d).map_err(|e| Error::Parse {
            line: header_line,
            msg: e.to_string(),
        })
    }

    /// Renders the encoder in `.ssc` form; the output parses back to `self`.
    pub fn to_code_file(&self) -> String {
        let mut s = format!("dims: {} {} {}\n", self.m(), self.k(), self.n());
        for (name, mat) in [
            ("A", &self.a),
            ("B", &self.b),
            ("C", &self.c),
            ("D", &self.d),
        ] {
            s.push_str(&format!("# {name}\n{mat}\n"));
        }
        s
    }
}

pub(crate) fn check_cap(bits: usize) -> Result<()> {
    if bits > ENUMERATION_CAP_BITS {
        return Err(Error::CapExceeded {
            bits,
            cap_bits: ENUMERATION_CAP_BITS,
        });
    }
    Ok(())
}

/// Output of [`StateSpaceEncoder::encode`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Encoded {
    /// One output block per stage, tail included.
    pub codeword: Vec<BitVector>,
    pub final_state: BitVector,
    /// Steering inputs appended under zero termination.
    pub tail: Vec<BitVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionRow {
    pub u: BitVector,
    pub current_state: BitVector,
    pub next_state: BitVector,
    pub output: BitVector,
}

/// Flattened trellis: successor state and output block for every branch,
/// indexed by `state * 2^k + input`.
#[derive(Debug, Clone)]
pub struct Trellis {
    m: usize,
    k: usize,
    n: usize,
    next: Vec<usize>,
    outputs: Vec<BitVector>,
}

impl Trellis {
    pub fn new(enc: &StateSpaceEncoder) -> Result<Self> {
        let rows = enc.transition_table()?;
        Ok(Self {
            m: enc.m(),
            k: enc.k(),
            n: enc.n(),
            next: rows
                .iter()
                .map(|r| r.next_state.to_index() as usize)
                .collect(),
            outputs: rows.into_iter().map(|r| r.output).collect(),
        })
    }

    pub fn num_states(&self) -> usize {
        1 << self.m
    }

    pub fn num_inputs(&self) -> usize {
        1 << self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn next_state(&self, state: usize, input: usize) -> usize {
        self.next[state * self.num_inputs() + input]
    }

    pub fn output(&self, state: usize, input: usize) -> &BitVector {
        &self.outputs[state * self.num_inputs() + input]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    const EXAMPLE_SSC: &str = "\
# rate 1/2 recursive systematic example
dims: 2 1 2
1 1   # A
1 0
1     # B
0
0 0   # C
1 0
1     # D
1
";

    #[test]
    fn parses_example_file() {
        let enc = StateSpaceEncoder::parse_code_file(EXAMPLE_SSC).unwrap();
        assert_eq!((enc.m(), enc.k(), enc.n()), (2, 1, 2));
        assert_eq!(enc, StateSpaceEncoder::rsc_example());
        let again = StateSpaceEncoder::parse_code_file(&enc.to_code_file()).unwrap();
        assert_eq!(again, enc);
    }

    #[test]
    fn parses_degenerate_file() {
        let enc = StateSpaceEncoder::parse_code_file("dims: 1 1 1\n0\n0\n0\n0\n").unwrap();
        assert_eq!((enc.m(), enc.k(), enc.n()), (1, 1, 1));
    }

    #[test]
    fn parse_errors_name_the_line() {
        // Line 8 holds the second row of C.
        let text = EXAMPLE_SSC.replace("1 0\n1     # D", "1 2\n1     # D");
        match StateSpaceEncoder::parse_code_file(&text) {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 8);
                assert!(msg.contains("non-binary"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            StateSpaceEncoder::parse_code_file("dim 2 1 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            StateSpaceEncoder::parse_code_file("dims: 2 1 2\n1 1\n1 0\n1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            StateSpaceEncoder::parse_code_file("dims: 1 2 1\n0\n0 0\n0\n0 0\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn step_matches_table_rows() {
        let enc = StateSpaceEncoder::rsc_example();
        assert_eq!(enc.step(&v("00"), &v("1")).unwrap(), (v("10"), v("11")));
        assert_eq!(enc.step(&v("10"), &v("0")).unwrap(), (v("11"), v("01")));
        assert_eq!(enc.step(&v("00"), &v("0")).unwrap(), (v("00"), v("00")));
        assert!(enc.step(&v("0"), &v("0")).is_err());
        assert!(enc.step(&v("00"), &v("01")).is_err());
    }

    #[test]
    fn encode_free() {
        let enc = StateSpaceEncoder::rsc_example();
        let input = [v("1"), v("0"), v("1")];
        let out = enc.encode(&input, &v("00"), Termination::Free).unwrap();
        assert_eq!(out.codeword, vec![v("11"), v("01"), v("10")]);
        assert_eq!(out.final_state, v("11"));
        assert!(out.tail.is_empty());

        let empty = enc.encode(&[], &v("00"), Termination::Free).unwrap();
        assert!(empty.codeword.is_empty());
        assert_eq!(empty.final_state, v("00"));
    }

    #[test]
    fn encode_zero_appends_steering_tail() {
        let enc = StateSpaceEncoder::rsc_example();
        let out = enc.encode(&[v("1")], &v("00"), Termination::Zero).unwrap();
        // 00 -u=1-> 10 -u=1-> 01 -u=1-> 00
        assert_eq!(out.tail, vec![v("1"), v("1")]);
        assert_eq!(out.codeword, vec![v("11"), v("10"), v("11")]);
        assert_eq!(out.final_state, v("00"));
    }

    #[test]
    fn encode_zero_infeasible() {
        let zero = BitMatrix::zeros(2, 1).unwrap();
        let enc = StateSpaceEncoder::new(
            BitMatrix::identity(2).unwrap(),
            zero.clone(),
            BitMatrix::identity(2).unwrap(),
            zero,
        )
        .unwrap();
        assert!(matches!(
            enc.encode(&[v("1")], &v("10"), Termination::Zero),
            Err(Error::TerminationInfeasible { .. })
        ));
    }

    #[test]
    fn transition_table_shape_and_order() {
        let enc = StateSpaceEncoder::rsc_example();
        let rows = enc.transition_table().unwrap();
        assert_eq!(rows.len(), 8);
        let keys: Vec<(u64, u64)> = rows
            .iter()
            .map(|r| (r.current_state.to_index(), r.u.to_index()))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);

        let degenerate = StateSpaceEncoder::parse_code_file("dims: 1 1 1\n0\n0\n0\n1\n").unwrap();
        for r in degenerate.transition_table().unwrap() {
            assert!(r.next_state.is_zero());
            assert_eq!(r.output, r.u);
        }
    }

    #[test]
    fn rejects_inconsistent_dimensions() {
        let a = BitMatrix::identity(2).unwrap();
        let b = BitMatrix::zeros(3, 1).unwrap();
        let c = BitMatrix::zeros(2, 2).unwrap();
        let d = BitMatrix::zeros(2, 1).unwrap();
        assert!(StateSpaceEncoder::new(a.clone(), b, c.clone(), d.clone()).is_err());
        // k > n
        let b = BitMatrix::zeros(2, 3).unwrap();
        let d = BitMatrix::zeros(2, 3).unwrap();
        assert!(StateSpaceEncoder::new(a, b, c, d).is_err());
    }

    #[test]
    fn trellis_agrees_with_step() {
        let enc = StateSpaceEncoder::rsc_example();
        let t = Trellis::new(&enc).unwrap();
        for s in 0..t.num_states() {
            for u in 0..t.num_inputs() {
                let (next, y) = enc
                    .step(
                        &BitVector::from_index(s as u64, 2),
                        &BitVector::from_index(u as u64, 1),
                    )
                    .unwrap();
                assert_eq!(t.next_state(s, u), next.to_index() as usize);
                assert_eq!(t.output(s, u), &y);
            }
        }
    }
}
