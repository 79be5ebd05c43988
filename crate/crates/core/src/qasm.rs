//! OpenQASM 2.0 output restricted to `x`, `h`, `z`, `ry` and `cx`, and a parser
//! for exactly that subset.
//!
//! Open-controlled gates are lowered before emission. In raw mode each IR gate
//! that needed lowering is first written as a comment, followed by the gates
//! it lowers to. Angles are printed with 17 significant digits.

use std::fmt::Write as _;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::lowering::lower_gate;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EmitOptions {
    /// Annotate each lowered IR gate with a comment.
    pub raw: bool,
}

fn angle(theta: f64) -> String {
    format!("{theta:.16e}")
}

fn write_basis_gate(out: &mut String, g: &Gate) {
    let t = g.target();
    let _ = match (g.kind(), g.control()) {
        (GateKind::PauliX, _) => writeln!(out, "x q[{t}];"),
        (GateKind::Hadamard, _) => writeln!(out, "h q[{t}];"),
        (GateKind::PauliZ, _) => writeln!(out, "z q[{t}];"),
        (GateKind::RotY, _) => writeln!(out, "ry({}) q[{t}];", angle(g.theta().unwrap_or(0.0))),
        (GateKind::ControlledNot, Some(c)) => writeln!(out, "cx q[{c}],q[{t}];"),
        (GateKind::OpenControlledNot, Some(c)) => {
            writeln!(out, "x q[{c}];\ncx q[{c}],q[{t}];\nx q[{c}];")
        }
        _ => unreachable!("lowered gate set"),
    };
}

fn ir_comment(g: &Gate) -> String {
    let c = g.control().unwrap_or(0);
    let t = g.target();
    match g.kind() {
        GateKind::OpenControlledHadamard => format!("// open-controlled h q[{c}],q[{t}];"),
        GateKind::OpenControlledRotY => {
            format!("// open-controlled ry({}) q[{c}],q[{t}];", angle(g.theta().unwrap_or(0.0)))
        }
        GateKind::OpenControlledNot => format!("// open-controlled x q[{c}],q[{t}];"),
        _ => format!("// {g}"),
    }
}

pub fn to_qasm(circuit: &Circuit, opts: EmitOptions) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    if !circuit.label().is_empty() {
        let _ = writeln!(out, "// {}", circuit.label().replace('\n', " "));
    }
    let _ = writeln!(out, "qreg q[{}];", circuit.n());
    for g in circuit.gates() {
        let lowered = lower_gate(g);
        let annotate = opts.raw
            && (lowered.len() > 1 || g.kind() == GateKind::OpenControlledNot);
        if annotate {
            out.push_str(&ir_comment(g));
            out.push('\n');
        }
        for l in &lowered {
            write_basis_gate(&mut out, l);
        }
    }
    out
}

/// Parses QASM in the subset [`to_qasm`] writes. Comments and blank lines are
/// skipped; every statement must sit on its own line.
pub fn parse_qasm(src: &str) -> Result<Circuit> {
    let mut n: Option<usize> = None;
    let mut label = String::new();
    let mut gates = Vec::new();
    let mut saw_header = false;

    for (idx, raw_line) in src.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse { line: line_no, message };
        let line = raw_line.trim();
        if let Some(comment) = line.strip_prefix("//") {
            if label.is_empty() && n.is_none() && saw_header {
                label = comment.trim().to_string();
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| err(format!("missing ';' in {line:?}")))?
            .trim();

        if !saw_header {
            if stmt != "OPENQASM 2.0" {
                return Err(err(format!("expected OPENQASM 2.0 header, found {stmt:?}")));
            }
            saw_header = true;
            continue;
        }
        if stmt.starts_with("include") {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qreg") {
            if n.is_some() {
                return Err(err("only one register is supported".into()));
            }
            let (name, size) = parse_operand(rest.trim()).map_err(err)?;
            if name != "q" {
                return Err(err(format!("register must be named q, got {name}")));
            }
            n = Some(size);
            continue;
        }

        let width = n.ok_or_else(|| err("gate before qreg".into()))?;
        let (head, operands) = stmt
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(format!("malformed statement {stmt:?}")))?;
        let qubits = operands
            .split(',')
            .map(|op| {
                let (name, index) = parse_operand(op.trim())?;
                if name != "q" {
                    return Err(format!("unknown register {name}"));
                }
                Ok(index)
            })
            .collect::<std::result::Result<Vec<_>, String>>()
            .map_err(err)?;
        let arity = |want: usize| {
            if qubits.len() == want {
                Ok(())
            } else {
                Err(err(format!("{head} takes {want} operand(s), got {}", qubits.len())))
            }
        };

        let gate = if let Some(arg) = head.strip_prefix("ry(").and_then(|s| s.strip_suffix(')')) {
            arity(1)?;
            let theta: f64 = arg.trim().parse().map_err(|_| err(format!("bad angle {arg:?}")))?;
            Gate::new(GateKind::RotY, qubits[0], None, Some(theta)).map_err(|e| err(e.to_string()))?
        } else {
            match head {
                "x" => {
                    arity(1)?;
                    Gate::x(qubits[0])
                }
                "h" => {
                    arity(1)?;
                    Gate::h(qubits[0])
                }
                "z" => {
                    arity(1)?;
                    Gate::z(qubits[0])
                }
                "cx" => {
                    arity(2)?;
                    Gate::new(GateKind::ControlledNot, qubits[1], Some(qubits[0]), None)
                        .map_err(|e| err(e.to_string()))?
                }
                other => return Err(err(format!("unsupported gate {other}"))),
            }
        };
        if gate.qubits().any(|q| q >= width) {
            return Err(err(format!("qubit index out of range for qreg q[{width}]")));
        }
        gates.push(gate);
    }

    let n = n.ok_or(Error::Parse { line: 0, message: "no qreg declaration".into() })?;
    Circuit::from_gates(n, label, gates)
}

/// Splits `name[index]`.
fn parse_operand(s: &str) -> std::result::Result<(&str, usize), String> {
    let (name, rest) = s.split_once('[').ok_or_else(|| format!("expected name[index], got {s:?}"))?;
    let index = rest
        .strip_suffix(']')
        .and_then(|i| i.trim().parse().ok())
        .ok_or_else(|| format!("bad index in {s:?}"))?;
    Ok((name.trim(), index))
}
