//! Rewrites of the open-controlled gates into CNOT plus single-qubit gates.
//!
//! With `c` the control and `t` the target, in application order:
//!
//! ```text
//! open-controlled H(c → t)      = X(c) RY(π/4)(t) CX(c,t) RY(−π/4)(t) X(c)
//! open-controlled RY(θ)(c → t)  = X(c) RY(θ/2)(t) CX(c,t) RY(−θ/2)(t) CX(c,t) X(c)
//! ```
//!
//! The first works because `RY(−π/4)·X·RY(π/4) = H` while `RY(−π/4)·RY(π/4) = I`;
//! the second because `X·RY(−θ/2)·X·RY(θ/2) = RY(θ)`. The `X(c)` pair turns the
//! closed control into an open one. Every other gate passes through unchanged.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::planner::BitPlan;
use crate::simulator::Statevector;
use crate::Result;

/// Entrywise tolerance used by [`verify_equivalence`].
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-12;

pub fn lower_gate(gate: &Gate) -> Vec<Gate> {
    match (gate.kind(), gate.control()) {
        (GateKind::OpenControlledHadamard, Some(c)) => {
            let t = gate.target();
            vec![Gate::x(c), Gate::ry(t, FRAC_PI_4), Gate::cx(c, t), Gate::ry(t, -FRAC_PI_4), Gate::x(c)]
        }
        (GateKind::OpenControlledRotY, Some(c)) => {
            let t = gate.target();
            let half = gate.theta().expect("rotation carries an angle") / 2.0;
            vec![
                Gate::x(c),
                Gate::ry(t, half),
                Gate::cx(c, t),
                Gate::ry(t, -half),
                Gate::cx(c, t),
                Gate::x(c),
            ]
        }
        _ => vec![*gate],
    }
}

pub fn lower_circuit(circuit: &Circuit) -> Circuit {
    let gates = circuit.gates().iter().flat_map(lower_gate).collect();
    let label = if circuit.label().is_empty() {
        "lowered".to_string()
    } else {
        format!("{} lowered", circuit.label())
    };
    Circuit::from_gates(circuit.n(), label, gates).expect("lowering keeps qubit indices")
}

/// Removes pairs of `X` on the same qubit with no gate touching that qubit in
/// between. CNOT counts are untouched.
pub fn cancel_adjacent_x(circuit: &Circuit) -> Circuit {
    let mut kept: Vec<Option<Gate>> = Vec::with_capacity(circuit.len());
    // Index in `kept` of the last surviving gate on each qubit.
    let mut last: Vec<Option<usize>> = vec![None; circuit.n()];
    for gate in circuit.gates() {
        if gate.kind() == GateKind::PauliX {
            let q = gate.target();
            if let Some(i) = last[q] {
                if matches!(kept[i], Some(g) if g.kind() == GateKind::PauliX) {
                    kept[i] = None;
                    last[q] = kept[..i].iter().rposition(|g| g.is_some_and(|g| g.qubits().any(|p| p == q)));
                    continue;
                }
            }
        }
        for q in gate.qubits() {
            last[q] = Some(kept.len());
        }
        kept.push(Some(*gate));
    }
    let gates = kept.into_iter().flatten().collect();
    Circuit::from_gates(circuit.n(), circuit.label(), gates).expect("subset of a valid circuit")
}

/// CNOTs in the lowered uniform circuit for `m`: zero for a power of two,
/// otherwise `(l_k − l_0) + 2(k − 1)`.
pub fn cnot_count(m: u64) -> Result<u64> {
    let plan = BitPlan::new(m, None)?;
    Ok(cnot_count_for(&plan))
}

pub fn cnot_count_for(plan: &BitPlan) -> u64 {
    if plan.is_power_of_two() {
        0
    } else {
        (plan.lk() - plan.l0() + 2 * (plan.k() - 1)) as u64
    }
}

/// Largest entrywise deviation between the unitaries of `gate` and of its
/// lowering, after removing the best global phase. Both unitaries are read off
/// by applying the gate sequences to each basis state of the one or two qubits
/// the gate touches.
pub fn equivalence_deviation(gate: &Gate) -> f64 {
    let qubits: Vec<usize> = gate.qubits().collect();
    let local = |g: &Gate| g.remap(|q| qubits.iter().position(|&p| p == q).expect("touched qubit"));
    let reference = unitary(qubits.len(), &[local(gate)]);
    let lowered: Vec<Gate> = lower_gate(gate).iter().map(local).collect();
    let candidate = unitary(qubits.len(), &lowered);

    let (pivot, _) = reference
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("non-empty matrix");
    let phase = candidate[pivot] / reference[pivot];
    reference
        .iter()
        .zip(&candidate)
        .map(|(r, c)| (c - phase * r).norm())
        .fold(0.0, f64::max)
}

/// True when the lowering of `gate` matches it up to global phase within
/// [`EQUIVALENCE_TOLERANCE`].
pub fn verify_equivalence(gate: &Gate) -> bool {
    equivalence_deviation(gate) < EQUIVALENCE_TOLERANCE
}

/// Column-major unitary of `gates` on `n` local qubits.
fn unitary(n: usize, gates: &[Gate]) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut out = Vec::with_capacity(dim * dim);
    for col in 0..dim {
        let mut sv = Statevector::basis(n, col);
        for g in gates {
            sv.apply(g).expect("local qubits in range");
        }
        out.extend_from_slice(sv.amplitudes());
    }
    out
}
