//! Line-oriented circuit descriptions with oracle slots.
//!
//! ```text
//! qubits 2
//! # comment
//! h 0
//! oracle 1        # U on qubit 1
//! coracle_dg 0 1  # controlled U† (control 0, target 1)
//! cx 0 1
//! ```
//!
//! Qubit 0 is the most significant and carries the output bit.

use std::fmt;

use crate::error::{Error, Result};
use crate::gates;
use crate::mat::{ComplexMatrix, C64, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateKind {
    H,
    X,
    Z,
    S,
    Cx,
    Cz,
    Swap,
}

impl GateKind {
    fn arity(self) -> usize {
        match self {
            GateKind::H | GateKind::X | GateKind::Z | GateKind::S => 1,
            _ => 2,
        }
    }

    fn token(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
        }
    }

    fn matrix(self) -> ComplexMatrix {
        match self {
            GateKind::H => gates::hadamard(),
            GateKind::X => gates::pauli_x(),
            GateKind::Z => gates::pauli_z(),
            GateKind::S => gates::phase_s(),
            GateKind::Cx => gates::cnot(),
            GateKind::Cz => gates::controlled(&gates::pauli_z()),
            GateKind::Swap => gates::swap_registers(2),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Op {
    Gate { kind: GateKind, qubits: Vec<usize> },
    Oracle { control: Option<usize>, targets: Vec<usize>, dagger: bool },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    qubits: usize,
    ops: Vec<Op>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadCircuit(msg.into())
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Self { qubits, ops: Vec::new() }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn gate(mut self, kind: GateKind, qubits: &[usize]) -> Result<Self> {
        self.push(Op::Gate { kind, qubits: qubits.to_vec() })?;
        Ok(self)
    }

    pub fn oracle(mut self, control: Option<usize>, targets: &[usize], dagger: bool) -> Result<Self> {
        self.push(Op::Oracle { control, targets: targets.to_vec(), dagger })?;
        Ok(self)
    }

    fn push(&mut self, op: Op) -> Result<()> {
        let used: Vec<usize> = match &op {
            Op::Gate { kind, qubits } => {
                if qubits.len() != kind.arity() {
                    return Err(bad(format!("{} takes {} qubits", kind.token(), kind.arity())));
                }
                qubits.clone()
            }
            Op::Oracle { control, targets, .. } => {
                if targets.is_empty() {
                    return Err(bad("oracle slot without target qubits"));
                }
                if let Some(w) = self.oracle_width() {
                    if w != targets.len() {
                        return Err(bad("oracle slots disagree on width"));
                    }
                }
                control.iter().chain(targets).copied().collect()
            }
        };
        for (i, &q) in used.iter().enumerate() {
            if q >= self.qubits {
                return Err(bad(format!("qubit {q} out of range for {} qubits", self.qubits)));
            }
            if used[..i].contains(&q) {
                return Err(bad(format!("qubit {q} repeated in one operation")));
            }
        }
        self.ops.push(op);
        Ok(())
    }

    /// Number of oracle slots `Q`.
    pub fn query_count(&self) -> usize {
        self.ops.iter().filter(|o| matches!(o, Op::Oracle { .. })).count()
    }

    pub fn oracle_width(&self) -> Option<usize> {
        self.ops.iter().find_map(|o| match o {
            Op::Oracle { targets, .. } => Some(targets.len()),
            _ => None,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap_or_default();
            let nums = parts
                .map(|t| t.parse::<usize>().map_err(|_| bad(format!("line {}: bad index {t:?}", lineno + 1))))
                .collect::<Result<Vec<usize>>>()?;
            if head == "qubits" {
                if circuit.is_some() || nums.len() != 1 || nums[0] == 0 {
                    return Err(bad(format!("line {}: malformed qubits declaration", lineno + 1)));
                }
                circuit = Some(Circuit::new(nums[0]));
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| bad("the first statement must be `qubits N`"))?;
            let op = match head {
                "h" => Op::Gate { kind: GateKind::H, qubits: nums },
                "x" => Op::Gate { kind: GateKind::X, qubits: nums },
                "z" => Op::Gate { kind: GateKind::Z, qubits: nums },
                "s" => Op::Gate { kind: GateKind::S, qubits: nums },
                "cx" => Op::Gate { kind: GateKind::Cx, qubits: nums },
                "cz" => Op::Gate { kind: GateKind::Cz, qubits: nums },
                "swap" => Op::Gate { kind: GateKind::Swap, qubits: nums },
                "oracle" | "oracle_dg" => {
                    Op::Oracle { control: None, targets: nums, dagger: head == "oracle_dg" }
                }
                "coracle" | "coracle_dg" => {
                    let (c0, rest) = nums
                        .split_first()
                        .ok_or_else(|| bad(format!("line {}: controlled oracle needs a control", lineno + 1)))?;
                    Op::Oracle { control: Some(*c0), targets: rest.to_vec(), dagger: head == "coracle_dg" }
                }
                other => return Err(bad(format!("line {}: unknown token {other:?}", lineno + 1))),
            };
            c.push(op).map_err(|e| match e {
                Error::BadCircuit(m) => bad(format!("line {}: {m}", lineno + 1)),
                other => other,
            })?;
        }
        circuit.ok_or_else(|| bad("empty circuit"))
    }

    /// Full unitary with `oracle` placed in every slot.
    pub fn evaluate(&self, oracle: &ComplexMatrix) -> Result<ComplexMatrix> {
        if let Some(w) = self.oracle_width() {
            if oracle.dim() != 1 << w {
                return Err(Error::DimensionMismatch(format!(
                    "oracle of dimension {} in a {w}-qubit slot",
                    oracle.dim()
                )));
            }
        }
        let adj = oracle.adjoint();
        let mut u = ComplexMatrix::identity(1 << self.qubits);
        for op in &self.ops {
            let m = match op {
                Op::Gate { kind, qubits } => gates::embed(&kind.matrix(), qubits, self.qubits),
                Op::Oracle { control, targets, dagger } => {
                    let o = if *dagger { &adj } else { oracle };
                    match control {
                        None => gates::embed(o, targets, self.qubits),
                        Some(c) => {
                            let mut qs = vec![*c];
                            qs.extend(targets);
                            gates::embed(&gates::controlled(o), &qs, self.qubits)
                        }
                    }
                }
            };
            u = m.matmul(&u);
        }
        Ok(u)
    }

    /// Probability that qubit 0 reads 0 after running on `|0…0⟩`.
    pub fn zero_probability(&self, oracle: &ComplexMatrix) -> Result<f64> {
        let u = self.evaluate(oracle)?;
        let half = 1usize << (self.qubits - 1);
        Ok((0..half).map(|r| u[(r, 0)].norm_sqr()).sum())
    }

    /// Output state on `|0…0⟩`.
    pub fn run(&self, oracle: &ComplexMatrix) -> Result<Vec<C64>> {
        let u = self.evaluate(oracle)?;
        let mut v = vec![ZERO; u.dim()];
        for (r, z) in v.iter_mut().enumerate() {
            *z = u[(r, 0)];
        }
        Ok(v)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.qubits)?;
        let join = |v: &[usize]| v.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
        for op in &self.ops {
            match op {
                Op::Gate { kind, qubits } => writeln!(f, "{} {}", kind.token(), join(qubits))?,
                Op::Oracle { control: None, targets, dagger } => {
                    writeln!(f, "{} {}", if *dagger { "oracle_dg" } else { "oracle" }, join(targets))?
                }
                Op::Oracle { control: Some(c), targets, dagger } => writeln!(
                    f,
                    "{} {} {}",
                    if *dagger { "coracle_dg" } else { "coracle" },
                    c,
                    join(targets)
                )?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        let text = "qubits 2\n# test\nh 0\noracle 1\ncoracle_dg 0 1\ncx 0 1\n";
        let c = Circuit::parse(text).unwrap();
        assert_eq!(c.query_count(), 2);
        assert_eq!(Circuit::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Circuit::parse("h 0").is_err());
        assert!(Circuit::parse("qubits 1\ncx 0 1").is_err());
        assert!(Circuit::parse("qubits 2\noracle 0\noracle 0 1").is_err());
        assert!(Circuit::parse("qubits 2\nfoo 1").is_err());
        assert!(Circuit::parse("qubits 2\ncx 1 1").is_err());
    }

    #[test]
    fn hadamard_test_reads_real_part() {
        // P(0) = (1 + Re⟨0|U|0⟩)/2
        let c = Circuit::parse("qubits 2\nh 0\ncoracle 0 1\nh 0").unwrap();
        let theta: f64 = 0.8;
        let u = ComplexMatrix::from_diag(&[C64::from_polar(1.0, theta), C64::new(1.0, 0.0)]);
        let p = c.zero_probability(&u).unwrap();
        assert!((p - 0.5 * (1.0 + theta.cos())).abs() < 1e-12);
    }
}
