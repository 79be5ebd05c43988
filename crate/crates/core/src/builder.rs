//! Circuit emission.
//!
//! For `M = Σ_{r=0}^{k} 2^{l_r}` that is not a power of two, the gates are, in order:
//!
//! 1. `X` on `q_{l_1}, …, q_{l_k}`;
//! 2. `H` on `q_0, …, q_{l_0−1}` (only when `l_0 > 0`);
//! 3. `R_Y(θ_0)` on `q_{l_1}`;
//! 4. open-controlled `H` from `q_{l_1}` onto `q_{l_0}, …, q_{l_1−1}`;
//! 5. for `r = 1..k−1`: open-controlled `R_Y(θ_r)` from `q_{l_r}` onto `q_{l_{r+1}}`,
//!    then open-controlled `H` from `q_{l_{r+1}}` onto `q_{l_r}, …, q_{l_{r+1}−1}`.
//!
//! Powers of two `2^r` get `r` Hadamards and nothing else. Fans of controlled
//! Hadamards are emitted one two-qubit gate per target, in ascending order.
//!
//! [`build_general`] keeps this skeleton but takes the `k` rotation angles from
//! the caller. An angle `θ` sends `|1⟩` to `a|0⟩ + b|1⟩` with `a = −sin(θ/2)`
//! and `b = cos(θ/2)`; for `a, b ≥ 0` that is `θ = −2·arccos(b)`, which is what
//! [`build_general_from_pairs`] uses.

use crate::circuit::{Circuit, Gate};
use crate::planner::{qubits_for, BitPlan, CoefficientPair};
use crate::{Error, Result};

/// Circuit preparing `(1/√m) Σ_{j<m} |j⟩` from `|0…0⟩`.
pub fn build_uniform(m: u64, n_override: Option<usize>) -> Result<Circuit> {
    let plan = BitPlan::new(m, n_override)?;
    Ok(emit(&plan, plan.thetas(), format!("uniform m={m}")))
}

/// Uniform skeleton with caller-chosen rotation angles `θ'_0, …, θ'_{k−1}`.
pub fn build_general(m: u64, angles: &[f64], n_override: Option<usize>) -> Result<Circuit> {
    let plan = BitPlan::new(m, n_override)?;
    if plan.is_power_of_two() {
        return Err(Error::invalid(format!("m = {m} is a power of two and has no rotation angles")));
    }
    if angles.len() != plan.k() {
        return Err(Error::invalid(format!(
            "m = {m} takes {} rotation angles, got {}",
            plan.k(),
            angles.len()
        )));
    }
    if let Some(bad) = angles.iter().find(|a| !a.is_finite()) {
        return Err(Error::invalid(format!("non-finite rotation angle {bad}")));
    }
    Ok(emit(&plan, angles, format!("general m={m}")))
}

/// [`build_general`] with the angles given as `(a_r, b_r)` pairs.
pub fn build_general_from_pairs(
    m: u64,
    pairs: &[CoefficientPair],
    n_override: Option<usize>,
) -> Result<Circuit> {
    let angles = pairs
        .iter()
        .map(|p| CoefficientPair::new(p.a, p.b).map(|p| p.angle()))
        .collect::<Result<Vec<_>>>()?;
    build_general(m, &angles, n_override)
}

/// Uniform superposition over `n_agents³` states used by Byzantine agreement,
/// laid out on `n_agents` qubits when that is wide enough.
pub fn build_qba(n_agents: u64) -> Result<Circuit> {
    build_qba_on(n_agents, None)
}

/// [`build_qba`] on an explicit register width.
pub fn build_qba_on(n_agents: u64, n_override: Option<usize>) -> Result<Circuit> {
    if n_agents < 2 {
        return Err(Error::invalid(format!("need at least 2 agents, got {n_agents}")));
    }
    let m = n_agents
        .checked_pow(3)
        .ok_or_else(|| Error::capacity(format!("{n_agents}³ does not fit in 64 bits")))?;
    let n = n_override.unwrap_or_else(|| {
        usize::try_from(n_agents).map_or(usize::MAX, |n| n.max(qubits_for(m)))
    });
    let c = build_uniform(m, Some(n))?;
    Ok(c.with_label(format!("QBA n={n_agents} m={m}")))
}

/// Gate counts after line 9 and after each loop iteration of the uniform
/// circuit: the prefix lengths at which the state has exactly two flat blocks.
/// Entry `r` (for `r = 0..k`) is `k + 1 + l_{r+1} + r`; the last entry is the
/// full circuit length `l_k + 2k`. Empty for powers of two.
pub fn loop_checkpoints(plan: &BitPlan) -> Vec<usize> {
    let k = plan.k();
    let l = plan.exponents();
    (0..k).map(|r| k + 1 + l[r + 1] + r).collect()
}

fn emit(plan: &BitPlan, thetas: &[f64], label: String) -> Circuit {
    let mut gates = Vec::new();
    let l = plan.exponents();

    if plan.is_power_of_two() {
        gates.extend((0..l[0]).map(Gate::h));
    } else {
        let k = plan.k();
        gates.extend(l[1..].iter().map(|&q| Gate::x(q)));
        gates.extend((0..l[0]).map(Gate::h));
        gates.push(Gate::ry(l[1], thetas[0]));
        gates.extend((l[0]..l[1]).map(|q| Gate::open_ch(l[1], q)));
        for r in 1..k {
            gates.push(Gate::open_cry(l[r], l[r + 1], thetas[r]));
            gates.extend((l[r]..l[r + 1]).map(|q| Gate::open_ch(l[r + 1], q)));
        }
    }

    Circuit::from_gates(plan.n(), label, gates).expect("plan width covers every emitted qubit")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind::*;

    fn theta(num: f64, den: f64) -> f64 {
        -2.0 * (num / den).sqrt().acos()
    }

    #[test]
    fn example_13_gate_list() {
        let c = build_uniform(13, None).unwrap();
        let expected = vec![
            Gate::x(2),
            Gate::x(3),
            Gate::ry(2, theta(1.0, 13.0)),
            Gate::open_ch(2, 0),
            Gate::open_ch(2, 1),
            Gate::open_cry(2, 3, theta(4.0, 12.0)),
            Gate::open_ch(3, 2),
        ];
        assert_eq!(c.n(), 4);
        assert_eq!(c.gates(), expected.as_slice());
        assert_eq!(c.label(), "uniform m=13");
    }

    #[test]
    fn example_13_depth_and_tally() {
        let c = build_uniform(13, None).unwrap();
        // Layers: X2=1 X3=1 RY2=2 CH(2,0)=3 CH(2,1)=4 CRY(2,3)=5 CH(3,2)=6.
        assert_eq!(c.depth(), 6);
        let t = c.tally();
        assert_eq!(t.get(PauliX), 2);
        assert_eq!(t.get(RotY), 1);
        assert_eq!(t.get(OpenControlledHadamard), 3);
        assert_eq!(t.get(OpenControlledRotY), 1);
        assert_eq!(t.get(Hadamard), 0);
        assert_eq!(t.total(), 7);
    }

    #[test]
    fn power_of_two_is_hadamards() {
        let c = build_uniform(8, None).unwrap();
        assert_eq!(c.gates(), &[Gate::h(0), Gate::h(1), Gate::h(2)]);
        assert_eq!(c.depth(), 1);
        let c = build_uniform(2, Some(5)).unwrap();
        assert_eq!(c.gates(), &[Gate::h(0)]);
        assert_eq!(c.n(), 5);
    }

    #[test]
    fn example_104_prefix_and_tally() {
        let c = build_uniform(104, None).unwrap();
        let head = &c.gates()[..6];
        assert_eq!(head[..5], [Gate::x(5), Gate::x(6), Gate::h(0), Gate::h(1), Gate::h(2)]);
        assert_eq!(head[5].kind(), RotY);
        assert_eq!(head[5].target(), 5);
        let t = c.tally();
        assert_eq!(
            t.iter().collect::<Vec<_>>(),
            vec![(PauliX, 2), (Hadamard, 3), (RotY, 1), (OpenControlledHadamard, 3), (OpenControlledRotY, 1)]
        );
    }

    #[test]
    fn general_replaces_angles_only() {
        let q = -std::f64::consts::FRAC_PI_2;
        let g = build_general(15, &[q, q, q], None).unwrap();
        let u = build_uniform(15, None).unwrap();
        assert_eq!(g.len(), u.len());
        for (a, b) in g.gates().iter().zip(u.gates()) {
            assert_eq!((a.kind(), a.target(), a.control()), (b.kind(), b.target(), b.control()));
            if a.kind().has_angle() {
                assert_eq!(a.theta(), Some(q));
            }
        }
    }

    #[test]
    fn general_errors() {
        assert!(build_general(15, &[0.0, 0.0], None).is_err());
        assert!(build_general(16, &[], None).is_err());
        assert!(build_general(15, &[0.0, f64::NAN, 0.0], None).is_err());
    }

    #[test]
    fn pairs_match_default_angles() {
        let plan = BitPlan::new(13, None).unwrap();
        let pairs = crate::planner::coefficients(&plan);
        let from_pairs = build_general_from_pairs(13, &pairs, None).unwrap();
        let uniform = build_uniform(13, None).unwrap();
        for (a, b) in from_pairs.gates().iter().zip(uniform.gates()) {
            match (a.theta(), b.theta()) {
                (Some(x), Some(y)) => assert!((x - y).abs() < 1e-14),
                (None, None) => assert_eq!(a, b),
                _ => panic!("skeleton mismatch"),
            }
        }
    }

    #[test]
    fn qba_20() {
        let c = build_qba(20).unwrap();
        assert_eq!(c.n(), 20);
        let t = c.tally();
        assert_eq!(t.get(PauliX), 5);
        assert_eq!(t.get(Hadamard), 6);
        assert_eq!(t.get(RotY), 1);
        assert_eq!(t.get(OpenControlledRotY), 4);
        assert_eq!(t.get(OpenControlledHadamard), 6);
        assert!(c.label().contains("QBA"));
    }

    #[test]
    fn qba_18_and_2() {
        let t = build_qba(18).unwrap().tally();
        assert_eq!(t.get(OpenControlledRotY), 4);
        assert_eq!(t.get(OpenControlledHadamard), 9);

        let c = build_qba(2).unwrap();
        assert_eq!(c.n(), 3);
        assert_eq!(c.gates(), &[Gate::h(0), Gate::h(1), Gate::h(2)]);
        assert!(build_qba(1).is_err());
        // 5³ = 125 needs 7 qubits, more than 5 agents.
        assert_eq!(build_qba(5).unwrap().n(), 7);
        assert_eq!(build_qba_on(20, Some(13)).unwrap().n(), 13);
    }

    #[test]
    fn checkpoints_end_at_full_length() {
        for m in 3..200u64 {
            let plan = BitPlan::new(m, None).unwrap();
            if plan.is_power_of_two() {
                assert!(loop_checkpoints(&plan).is_empty());
                continue;
            }
            let cps = loop_checkpoints(&plan);
            assert_eq!(cps.len(), plan.k());
            assert_eq!(*cps.last().unwrap(), build_uniform(m, None).unwrap().len());
        }
    }

    #[test]
    fn composition_matches_closed_form() {
        for m in 3..=4096u64 {
            let plan = BitPlan::new(m, None).unwrap();
            if plan.is_power_of_two() {
                continue;
            }
            let (k, l0, lk) = (plan.k(), plan.l0(), plan.lk());
            let t = build_uniform(m, None).unwrap().tally();
            assert_eq!(t.total(), lk + 2 * k, "m = {m}");
            assert_eq!(t.get(RotY), 1);
            assert_eq!(t.get(PauliX), k);
            assert_eq!(t.get(Hadamard), l0);
            assert_eq!(t.get(OpenControlledHadamard), lk - l0);
            assert_eq!(t.get(OpenControlledRotY), k - 1);
        }
    }
}
