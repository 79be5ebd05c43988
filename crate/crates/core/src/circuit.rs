//! Gate vocabulary and the circuit container.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateKind {
    PauliX,
    Hadamard,
    RotY,
    PauliZ,
    /// Hadamard on the target when the control is `|0⟩`.
    OpenControlledHadamard,
    /// `R_Y(θ)` on the target when the control is `|0⟩`.
    OpenControlledRotY,
    ControlledNot,
    OpenControlledNot,
}

impl GateKind {
    pub const ALL: [GateKind; 8] = [
        GateKind::PauliX,
        GateKind::Hadamard,
        GateKind::RotY,
        GateKind::PauliZ,
        GateKind::OpenControlledHadamard,
        GateKind::OpenControlledRotY,
        GateKind::ControlledNot,
        GateKind::OpenControlledNot,
    ];

    pub fn is_controlled(self) -> bool {
        matches!(
            self,
            GateKind::OpenControlledHadamard
                | GateKind::OpenControlledRotY
                | GateKind::ControlledNot
                | GateKind::OpenControlledNot
        )
    }

    pub fn has_angle(self) -> bool {
        matches!(self, GateKind::RotY | GateKind::OpenControlledRotY)
    }

    pub fn is_cnot(self) -> bool {
        matches!(self, GateKind::ControlledNot | GateKind::OpenControlledNot)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::PauliX => "PauliX",
            GateKind::Hadamard => "Hadamard",
            GateKind::RotY => "RotY",
            GateKind::PauliZ => "PauliZ",
            GateKind::OpenControlledHadamard => "OpenControlledHadamard",
            GateKind::OpenControlledRotY => "OpenControlledRotY",
            GateKind::ControlledNot => "ControlledNot",
            GateKind::OpenControlledNot => "OpenControlledNot",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single instruction. Fields are validated on construction and on
/// deserialization, so a `Gate` always satisfies:
/// control present iff the kind is controlled, control ≠ target, and theta
/// present iff the kind carries an angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGate")]
pub struct Gate {
    kind: GateKind,
    target: usize,
    control: Option<usize>,
    theta: Option<f64>,
}

#[derive(Deserialize)]
struct RawGate {
    kind: GateKind,
    target: usize,
    #[serde(default)]
    control: Option<usize>,
    #[serde(default)]
    theta: Option<f64>,
}

impl TryFrom<RawGate> for Gate {
    type Error = Error;

    fn try_from(raw: RawGate) -> Result<Self> {
        Gate::new(raw.kind, raw.target, raw.control, raw.theta)
    }
}

impl Gate {
    pub fn new(
        kind: GateKind,
        target: usize,
        control: Option<usize>,
        theta: Option<f64>,
    ) -> Result<Self> {
        if kind.is_controlled() != control.is_some() {
            return Err(Error::invalid(format!("{kind}: control qubit mismatch")));
        }
        if control == Some(target) {
            return Err(Error::invalid(format!("{kind}: control equals target q{target}")));
        }
        if kind.has_angle() != theta.is_some() {
            return Err(Error::invalid(format!("{kind}: angle mismatch")));
        }
        if theta.is_some_and(|t| !t.is_finite()) {
            return Err(Error::invalid(format!("{kind}: non-finite angle")));
        }
        Ok(Self { kind, target, control, theta })
    }

    pub fn x(target: usize) -> Self {
        Self { kind: GateKind::PauliX, target, control: None, theta: None }
    }

    pub fn h(target: usize) -> Self {
        Self { kind: GateKind::Hadamard, target, control: None, theta: None }
    }

    pub fn z(target: usize) -> Self {
        Self { kind: GateKind::PauliZ, target, control: None, theta: None }
    }

    pub fn ry(target: usize, theta: f64) -> Self {
        Self { kind: GateKind::RotY, target, control: None, theta: Some(theta) }
    }

    /// # Panics
    /// If `control == target`. The same applies to the other two-qubit constructors.
    pub fn open_ch(control: usize, target: usize) -> Self {
        assert_ne!(control, target);
        Self { kind: GateKind::OpenControlledHadamard, target, control: Some(control), theta: None }
    }

    pub fn open_cry(control: usize, target: usize, theta: f64) -> Self {
        assert_ne!(control, target);
        Self {
            kind: GateKind::OpenControlledRotY,
            target,
            control: Some(control),
            theta: Some(theta),
        }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        assert_ne!(control, target);
        Self { kind: GateKind::ControlledNot, target, control: Some(control), theta: None }
    }

    pub fn open_cx(control: usize, target: usize) -> Self {
        assert_ne!(control, target);
        Self { kind: GateKind::OpenControlledNot, target, control: Some(control), theta: None }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn control(&self) -> Option<usize> {
        self.control
    }

    pub fn theta(&self) -> Option<f64> {
        self.theta
    }

    /// Same gate with its qubits renamed through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Self {
        Self { target: map(self.target), control: self.control.map(&map), ..*self }
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> {
        std::iter::once(self.target).chain(self.control)
    }

    fn max_qubit(&self) -> usize {
        self.control.map_or(self.target, |c| c.max(self.target))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if let Some(theta) = self.theta {
            write!(f, "({theta})")?;
        }
        if let Some(c) = self.control {
            write!(f, " q{c} ->")?;
        }
        write!(f, " q{}", self.target)
    }
}

/// Per-kind gate counts.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally(BTreeMap<GateKind, usize>);

impl Tally {
    pub fn get(&self, kind: GateKind) -> usize {
        self.0.get(&kind).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn cnots(&self) -> usize {
        self.get(GateKind::ControlledNot) + self.get(GateKind::OpenControlledNot)
    }

    pub fn iter(&self) -> impl Iterator<Item = (GateKind, usize)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }
}

impl FromIterator<(GateKind, usize)> for Tally {
    fn from_iter<I: IntoIterator<Item = (GateKind, usize)>>(iter: I) -> Self {
        let mut map = BTreeMap::new();
        for (kind, count) in iter {
            if count > 0 {
                *map.entry(kind).or_insert(0) += count;
            }
        }
        Tally(map)
    }
}

/// An ordered gate list on `n` qubits; gate 0 is applied first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCircuit")]
pub struct Circuit {
    n: usize,
    label: String,
    gates: Vec<Gate>,
}

#[derive(Deserialize)]
struct RawCircuit {
    n: usize,
    #[serde(default)]
    label: String,
    gates: Vec<Gate>,
}

impl TryFrom<RawCircuit> for Circuit {
    type Error = Error;

    fn try_from(raw: RawCircuit) -> Result<Self> {
        Circuit::from_gates(raw.n, raw.label, raw.gates)
    }
}

impl Circuit {
    pub fn new(n: usize, label: impl Into<String>) -> Self {
        Self { n, label: label.into(), gates: Vec::new() }
    }

    pub fn from_gates(n: usize, label: impl Into<String>, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n, label);
        c.gates.reserve(gates.len());
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if gate.max_qubit() >= self.n {
            return Err(Error::invalid(format!(
                "gate {gate} addresses a qubit outside a {}-qubit circuit",
                self.n
            )));
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Circuit made of the first `len` gates.
    pub fn prefix(&self, len: usize) -> Circuit {
        Self { n: self.n, label: self.label.clone(), gates: self.gates[..len].to_vec() }
    }

    /// Longest chain of gates linked through shared qubits. A gate sits one
    /// layer above the deepest layer reached on any qubit it touches.
    pub fn depth(&self) -> usize {
        let mut layer = vec![0usize; self.n];
        let mut depth = 0;
        for g in &self.gates {
            let next = g.qubits().map(|q| layer[q]).max().unwrap_or(0) + 1;
            for q in g.qubits() {
                layer[q] = next;
            }
            depth = depth.max(next);
        }
        depth
    }

    pub fn tally(&self) -> Tally {
        self.gates.iter().map(|g| (g.kind(), 1)).collect()
    }
}
