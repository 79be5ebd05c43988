//! Dense statevector engine.
//!
//! Gates are applied in place by pairing amplitudes whose indices differ only in
//! the target bit; controlled kinds skip pairs whose control bit does not match.
//! Above [`PARALLEL_MIN_QUBITS`] the pairs are split across rayon workers. Each
//! pair is updated independently by the same arithmetic, so the parallel result
//! is bitwise identical to the sequential one.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::{Error, Result};

pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Environment variable that overrides [`DEFAULT_QUBIT_CAP`] in [`Simulator::from_env`].
pub const QUBIT_CAP_ENV: &str = "USPREP_MAX_QUBITS";

/// Registers at least this wide are updated in parallel.
pub const PARALLEL_MIN_QUBITS: usize = 14;

type Matrix2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `n` qubits, subject to the default qubit cap.
    pub fn zero(n: usize) -> Result<Self> {
        Simulator::default().init_zero(n)
    }

    /// Wrap raw amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::invalid(format!(
                "amplitude count {} is not a power of two",
                amps.len()
            )));
        }
        let n = amps.len().trailing_zeros() as usize;
        Ok(Self { n, amps })
    }

    /// Computational basis state `|index⟩` on `n` qubits (no cap check).
    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Self { n, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|amp_j|²` for every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        for q in gate.qubits() {
            if q >= self.n {
                return Err(Error::invalid(format!(
                    "gate {gate} addresses q{q} on a {}-qubit state",
                    self.n
                )));
            }
        }
        let control = gate.control().map(|c| {
            let fire_on_one = matches!(gate.kind(), GateKind::ControlledNot);
            (c, fire_on_one)
        });
        let t = gate.target();
        match gate.kind() {
            GateKind::PauliX | GateKind::ControlledNot | GateKind::OpenControlledNot => {
                self.for_each_pair(t, control, std::mem::swap)
            }
            kind => {
                let u = single_qubit_matrix(kind, gate.theta());
                self.for_each_pair(t, control, |a0, a1| {
                    let (x, y) = (*a0, *a1);
                    *a0 = u[0][0] * x + u[0][1] * y;
                    *a1 = u[1][0] * x + u[1][1] * y;
                })
            }
        }
        Ok(())
    }

    /// Applies `op` to every `(amp[i], amp[i | 1<<target])` pair with target
    /// bit clear in `i`, restricted to pairs whose control bit equals the
    /// requested value.
    fn for_each_pair<F>(&mut self, target: usize, control: Option<(usize, bool)>, op: F)
    where
        F: Fn(&mut Complex64, &mut Complex64) + Sync,
    {
        let half = 1usize << target;
        let stride = half << 1;
        let ctrl = control.map(|(c, on)| (1usize << c, if on { 1usize << c } else { 0 }));

        let kernel = |chunk_idx: usize, chunk: &mut [Complex64]| {
            let base = chunk_idx * stride;
            let (lo, hi) = chunk.split_at_mut(half);
            match ctrl {
                // Control above the target: the whole chunk shares the bit.
                Some((mask, want)) if mask > half => {
                    if base & mask == want {
                        lo.iter_mut().zip(hi).for_each(|(a, b)| op(a, b));
                    }
                }
                Some((mask, want)) => {
                    for (off, (a, b)) in lo.iter_mut().zip(hi).enumerate() {
                        if off & mask == want {
                            op(a, b);
                        }
                    }
                }
                None => lo.iter_mut().zip(hi).for_each(|(a, b)| op(a, b)),
            }
        };

        if self.n >= PARALLEL_MIN_QUBITS {
            self.amps
                .par_chunks_mut(stride)
                .enumerate()
                .for_each(|(i, chunk)| kernel(i, chunk));
        } else {
            self.amps
                .chunks_mut(stride)
                .enumerate()
                .for_each(|(i, chunk)| kernel(i, chunk));
        }
    }
}

fn single_qubit_matrix(kind: GateKind, theta: Option<f64>) -> Matrix2 {
    let r = |x: f64| Complex64::new(x, 0.0);
    match kind {
        GateKind::Hadamard | GateKind::OpenControlledHadamard => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            [[r(s), r(s)], [r(s), r(-s)]]
        }
        GateKind::RotY | GateKind::OpenControlledRotY => {
            let half = theta.expect("rotation carries an angle") / 2.0;
            let (s, c) = half.sin_cos();
            [[r(c), r(-s)], [r(s), r(c)]]
        }
        GateKind::PauliZ => [[ONE, ZERO], [ZERO, r(-1.0)]],
        GateKind::PauliX | GateKind::ControlledNot | GateKind::OpenControlledNot => {
            [[ZERO, ONE], [ONE, ZERO]]
        }
    }
}

/// Simulation entry point carrying the register-width cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Simulator {
    qubit_cap: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Self { qubit_cap: DEFAULT_QUBIT_CAP }
    }
}

impl Simulator {
    pub fn with_cap(qubit_cap: usize) -> Self {
        Self { qubit_cap }
    }

    /// Reads the cap from `USPREP_MAX_QUBITS`, falling back to the default when
    /// unset. A value that is not a non-negative integer is an error.
    pub fn from_env() -> Result<Self> {
        match std::env::var(QUBIT_CAP_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(Self::with_cap)
                .map_err(|_| Error::invalid(format!("{QUBIT_CAP_ENV}={v:?} is not a qubit count"))),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn qubit_cap(&self) -> usize {
        self.qubit_cap
    }

    pub fn init_zero(&self, n: usize) -> Result<Statevector> {
        if n == 0 {
            return Err(Error::invalid("a statevector needs at least one qubit"));
        }
        if n > self.qubit_cap {
            return Err(Error::capacity(format!(
                "{n} qubits exceeds the simulator cap of {}",
                self.qubit_cap
            )));
        }
        Ok(Statevector::basis(n, 0))
    }

    /// Applies every gate of `circuit` in order, starting from `initial` or
    /// from `|0…0⟩`.
    pub fn run(&self, circuit: &Circuit, initial: Option<Statevector>) -> Result<Statevector> {
        let mut sv = match initial {
            Some(sv) => {
                if sv.n() != circuit.n() {
                    return Err(Error::invalid(format!(
                        "initial state has {} qubits, circuit has {}",
                        sv.n(),
                        circuit.n()
                    )));
                }
                if sv.n() > self.qubit_cap {
                    return Err(Error::capacity(format!(
                        "{} qubits exceeds the simulator cap of {}",
                        sv.n(),
                        self.qubit_cap
                    )));
                }
                sv
            }
            None => self.init_zero(circuit.n())?,
        };
        for gate in circuit.gates() {
            sv.apply(gate)?;
        }
        Ok(sv)
    }
}

/// [`Simulator::run`] with the default cap.
pub fn run(circuit: &Circuit, initial: Option<Statevector>) -> Result<Statevector> {
    Simulator::default().run(circuit, initial)
}
