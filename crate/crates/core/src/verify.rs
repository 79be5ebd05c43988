//! Simulator-backed checks of built circuits against their predicted states.

use rayon::prelude::*;
use serde::Serialize;

use crate::builder::{build_general, build_uniform};
use crate::circuit::Circuit;
use crate::planner::{predict_amplitudes, AmplitudeProfile, BitPlan, CoefficientPair};
use crate::simulator::{Simulator, Statevector};
use crate::Result;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verification {
    pub m: u64,
    /// `max_j |amp_j − predicted_j|`.
    pub max_deviation: f64,
    pub max_imaginary: f64,
    pub norm_error: f64,
    pub passed: bool,
}

/// Largest entrywise distance between `sv` and a real target vector.
pub fn max_deviation(sv: &Statevector, expected: &[f64]) -> f64 {
    sv.amplitudes()
        .iter()
        .zip(expected)
        .map(|(a, &e)| (a - e).norm())
        .fold(0.0, f64::max)
}

/// Runs `circuit` and compares the result with `profile`.
pub fn check_profile(
    sim: &Simulator,
    circuit: &Circuit,
    profile: &AmplitudeProfile,
    m: u64,
    tol: f64,
) -> Result<Verification> {
    let sv = sim.run(circuit, None)?;
    let expected = profile.to_dense(circuit.n());
    let max_deviation = max_deviation(&sv, &expected);
    let max_imaginary = sv.amplitudes().iter().map(|a| a.im.abs()).fold(0.0, f64::max);
    let norm_error = (sv.norm_sqr() - 1.0).abs();
    Ok(Verification { m, max_deviation, max_imaginary, norm_error, passed: max_deviation <= tol })
}

/// Builds the uniform circuit for `m`, simulates it and checks for `1/√m` on
/// `|0⟩ … |m−1⟩` and zero elsewhere.
pub fn verify_uniform(
    sim: &Simulator,
    m: u64,
    n_override: Option<usize>,
    tol: f64,
) -> Result<Verification> {
    let plan = BitPlan::new(m, n_override)?;
    let circuit = build_uniform(m, n_override)?;
    let profile = predict_amplitudes(&plan, None)?;
    check_profile(sim, &circuit, &profile, m, tol)
}

/// Same as [`verify_uniform`] for caller-chosen rotation angles; the target is
/// the block profile those angles imply.
pub fn verify_general(
    sim: &Simulator,
    m: u64,
    angles: &[f64],
    n_override: Option<usize>,
    tol: f64,
) -> Result<Verification> {
    let circuit = build_general(m, angles, n_override)?;
    let plan = BitPlan::new(m, n_override)?;
    let pairs: Vec<CoefficientPair> = angles.iter().map(|&t| CoefficientPair::from_angle(t)).collect();
    let profile = predict_amplitudes(&plan, Some(&pairs))?;
    check_profile(sim, &circuit, &profile, m, tol)
}

/// [`verify_uniform`] for every `m` in `lo..=hi`, in parallel, ordered by `m`.
pub fn verify_range(sim: &Simulator, lo: u64, hi: u64, tol: f64) -> Result<Vec<Verification>> {
    (lo..=hi)
        .into_par_iter()
        .map(|m| verify_uniform(sim, m, None, tol))
        .collect()
}
