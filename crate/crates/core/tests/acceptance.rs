//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each, and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};

use usprep::analytics::{qiskit_reference, Family};
use usprep::builder::{build_general, build_qba_on, build_uniform};
use usprep::circuit::{Circuit, GateKind};
use usprep::lowering::{cnot_count, equivalence_deviation, lower_circuit, verify_equivalence};
use usprep::simulator::{run, Statevector};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

/// Set-bit positions by repeated halving; kept separate from the planner.
fn exponents(m: u64) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut rest, mut pos) = (m, 0);
    while rest > 0 {
        if rest % 2 == 1 {
            out.push(pos);
        }
        rest /= 2;
        pos += 1;
    }
    out
}

fn simulate(c: &Circuit) -> Statevector {
    run(c, None).expect("within simulator cap")
}

/// Max distance between simulated amplitudes and a real target given per index.
fn deviation(sv: &Statevector, expected: impl Fn(usize) -> f64) -> f64 {
    sv.amplitudes()
        .iter()
        .enumerate()
        .map(|(j, a)| (a - Complex64::new(expected(j), 0.0)).norm())
        .fold(0.0, f64::max)
}

fn ac1_uniform_sweep() -> Outcome {
    let tol = 1e-12;
    let mut worst = 0.0f64;
    for m in 2..=4096u64 {
        let sv = simulate(&build_uniform(m, None).map_err(|e| e.to_string())?);
        let amp = 1.0 / (m as f64).sqrt();
        for (j, a) in sv.amplitudes().iter().enumerate() {
            let d = if (j as u64) < m { (a - amp).norm() } else { a.norm() };
            worst = worst.max(d);
            if d >= tol {
                return Err(format!("m={m} index {j}: amplitude {a} deviates by {d:e}"));
            }
        }
    }
    Ok(format!("4095 circuits, worst deviation {worst:.2e} < {tol:e}"))
}

fn ac2_golden_states() -> Outcome {
    let tol = 1e-12;
    let mut notes = Vec::new();
    for (m, n) in [(13u64, 4usize), (104, 7)] {
        let sv = simulate(&build_uniform(m, None).unwrap());
        if sv.n() != n {
            return Err(format!("m={m} used {} qubits, expected {n}", sv.n()));
        }
        let amp = 1.0 / (m as f64).sqrt();
        let d = deviation(&sv, |j| if (j as u64) < m { amp } else { 0.0 });
        if d >= tol {
            return Err(format!("m={m} deviation {d:e}"));
        }
        notes.push(format!("m={m}: {d:.1e}"));
    }
    Ok(notes.join(", "))
}

fn ac3_nonuniform_golden_states() -> Outcome {
    use std::f64::consts::{FRAC_PI_2, PI};
    let tol = 1e-12;
    let default = |m: u64| -> Vec<f64> {
        let l = exponents(m);
        let mut before = 0u64;
        (0..l.len() - 1)
            .map(|r| {
                let block = 1u64 << l[r];
                let theta = -2.0 * ((block as f64) / ((m - before) as f64)).sqrt().acos();
                before += block;
                theta
            })
            .collect()
    };

    // (a) all angles −π/2.
    let sv = simulate(&build_general(15, &[-FRAC_PI_2; 3], None).unwrap());
    let da = deviation(&sv, |j| match j {
        14 => 1.0 / 2f64.sqrt(),
        12 | 13 => 1.0 / 8f64.sqrt(),
        8..=11 => 1.0 / 32f64.sqrt(),
        0..=7 => 1.0 / 8.0,
        _ => 0.0,
    });

    // (b) m = 31 with θ_2 = 0.
    let mut angles = default(31);
    angles[2] = 0.0;
    let sv = simulate(&build_general(31, &angles, None).unwrap());
    let db = deviation(&sv, |j| match j {
        28..=30 => 1.0 / 31f64.sqrt(),
        24..=27 => (7.0f64 / 31.0).sqrt(),
        _ => 0.0,
    });

    // (c) m = 15 with θ_2 = −π.
    let mut angles = default(15);
    angles[2] = -PI;
    let sv = simulate(&build_general(15, &angles, None).unwrap());
    let dc = deviation(&sv, |j| match j {
        12..=14 => 1.0 / 15f64.sqrt(),
        0..=7 => 1.0 / 10f64.sqrt(),
        _ => 0.0,
    });

    let summary = format!("(a) {da:.1e}, (b) {db:.1e}, (c) {dc:.1e}");
    if da < tol && db < tol && dc < tol {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn ac4_count_formulas() -> Outcome {
    let mut checked = 0;
    for m in 3..=(1u64 << 15) {
        if m.is_power_of_two() {
            continue;
        }
        let l = exponents(m);
        let k = l.len() - 1;
        let (l0, lk) = (l[0], l[k]);
        let c = build_uniform(m, None).unwrap();
        let t = c.tally();
        let expected = [
            (GateKind::RotY, 1),
            (GateKind::PauliX, k),
            (GateKind::Hadamard, l0),
            (GateKind::OpenControlledHadamard, lk - l0),
            (GateKind::OpenControlledRotY, k - 1),
        ];
        for (kind, want) in expected {
            if t.get(kind) != want {
                return Err(format!("m={m}: {kind} count {} != {want}", t.get(kind)));
            }
        }
        if t.total() != lk + 2 * k {
            return Err(format!("m={m}: total {} != l_k+2k = {}", t.total(), lk + 2 * k));
        }
        let cnots = lower_circuit(&c).tally().cnots();
        let want = (lk - l0) + 2 * (k - 1);
        if cnots != want || cnot_count(m).unwrap() != want as u64 {
            return Err(format!("m={m}: lowered CNOTs {cnots} != {want}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} non-power-of-two m up to 2^15"))
}

fn ac5_table_reproduction() -> Outcome {
    let proposed = |f: Family, r: u64| match f {
        Family::PowMinusOne => 3 * r - 5,
        Family::PowPlusTwo => r - 1,
        Family::PowPlusOne => r,
        Family::PowMinusTwo => 3 * r - 8,
    };
    let reference = |f: Family, r: u64| match f {
        Family::PowMinusOne | Family::PowMinusTwo => (1 << r) - 2,
        Family::PowPlusTwo => (1 << r) + 2 * r - 2,
        Family::PowPlusOne => 2 * r,
    };
    let mut rows = 0;
    for f in Family::ALL {
        for &(r, m, table_proposed, table_reference) in f.table() {
            let measured = lower_circuit(&build_uniform(m, None).unwrap()).tally().cnots() as u64;
            let r64 = u64::from(r);
            if measured != table_proposed || proposed(f, r64) != table_proposed {
                return Err(format!("{f:?} r={r} m={m}: measured {measured}, table {table_proposed}"));
            }
            if qiskit_reference(m) != Some(table_reference) || reference(f, r64) != table_reference {
                return Err(format!("{f:?} r={r} m={m}: reference {:?}, table {table_reference}", qiskit_reference(m)));
            }
            rows += 1;
        }
    }
    for (m, want) in [(32767u64, 40u64), (32770, 14), (32769, 15), (32766, 37)] {
        let got = cnot_count(m).unwrap();
        if got != want {
            return Err(format!("m={m}: {got} != {want}"));
        }
    }
    Ok(format!("{rows} table rows, both columns"))
}

fn ac6_bounds() -> Outcome {
    for m in 2..=(1u64 << 15) {
        let total = build_uniform(m, None).unwrap().len() as f64;
        let lb = (m as f64).log2();
        let ub = 3.0 * ((m as f64 + 1.0).log2() - 1.0);
        if !(lb <= total && total <= ub) {
            return Err(format!("m={m}: {lb} <= {total} <= {ub} violated"));
        }
        let at_lb = total == lb;
        let at_ub = total == ub;
        if at_lb != m.is_power_of_two() {
            return Err(format!("m={m}: lower-bound equality {at_lb}"));
        }
        if at_ub != (m + 1).is_power_of_two() {
            return Err(format!("m={m}: upper-bound equality {at_ub}"));
        }
    }
    Ok("m in [2, 2^15], equalities exactly at 2^r and 2^r-1".into())
}

/// Scale so the first non-negligible amplitude is real and positive.
fn fix_phase(sv: &Statevector) -> Vec<Complex64> {
    let amps = sv.amplitudes();
    let pivot = amps.iter().find(|a| a.norm() > 1e-6).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let phase = pivot / pivot.norm();
    amps.iter().map(|a| a / phase).collect()
}

fn ac7_lowering_soundness() -> Outcome {
    let mut worst_gate = 0.0f64;
    let mut worst_state = 0.0f64;
    let mut gates = 0;
    for m in 2..=4096u64 {
        let c = build_uniform(m, None).unwrap();
        for g in c.gates().iter().filter(|g| g.kind().is_controlled()) {
            worst_gate = worst_gate.max(equivalence_deviation(g));
            if !verify_equivalence(g) {
                return Err(format!("m={m}: rewrite of {g} not equivalent"));
            }
            gates += 1;
        }
        let a = fix_phase(&simulate(&c));
        let b = fix_phase(&simulate(&lower_circuit(&c)));
        let d = a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        worst_state = worst_state.max(d);
        if d >= 1e-10 {
            return Err(format!("m={m}: lowered state deviates by {d:e}"));
        }
    }
    Ok(format!(
        "{gates} controlled gates (worst {worst_gate:.1e} < 1e-12), states worst {worst_state:.1e} < 1e-10"
    ))
}

fn ac8_qba() -> Outcome {
    let c20 = cnot_count(8000).unwrap();
    let c18 = cnot_count(5832).unwrap();
    if (c20, c18) != (14, 17) {
        return Err(format!("cnot_count(8000)={c20}, cnot_count(5832)={c18}"));
    }
    let c = build_qba_on(20, Some(13)).unwrap();
    let sv = simulate(&c);
    let amp = 1.0 / 8000f64.sqrt();
    let d = deviation(&sv, |j| if j < 8000 { amp } else { 0.0 });
    if d >= 1e-12 {
        return Err(format!("QBA n=20 on 13 qubits deviates by {d:e}"));
    }
    Ok(format!("CNOTs 14 and 17, uniform over 0..7999 within {d:.1e}"))
}

fn ac9_induction_invariant() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0009);
    let mut worst = 0.0f64;
    let mut prefixes = 0;
    let mut sampled = 0;
    while sampled < 50 {
        let m: u64 = rng.gen_range(3..=4096);
        if m.is_power_of_two() {
            continue;
        }
        sampled += 1;
        let l = exponents(m);
        let k = l.len() - 1;
        let sums: Vec<u64> = l.iter().scan(0, |s, &e| { *s += 1u64 << e; Some(*s) }).collect();
        let c = build_uniform(m, None).unwrap();

        // Loop iterations end right before each controlled rotation, and at the end.
        let mut cuts: Vec<usize> = c
            .gates()
            .iter()
            .enumerate()
            .filter(|(_, g)| g.kind() == GateKind::OpenControlledRotY)
            .map(|(i, _)| i)
            .collect();
        cuts.push(c.len());
        if cuts.len() != k {
            return Err(format!("m={m}: {} iteration boundaries, expected {k}", cuts.len()));
        }

        for (r, &cut) in cuts.iter().enumerate() {
            let sv = simulate(&c.prefix(cut));
            let top = m - sums[r];
            let next = m - sums[r + 1];
            let flat = ((m - sums[r]) as f64 / (m as f64 * (1u64 << l[r + 1]) as f64)).sqrt();
            let uniform = 1.0 / (m as f64).sqrt();
            let d = deviation(&sv, |j| {
                let j = j as u64;
                if j >= top && j < m {
                    uniform
                } else if j >= next && j < top {
                    flat
                } else {
                    0.0
                }
            });
            worst = worst.max(d);
            if d >= 1e-10 {
                return Err(format!("m={m} r={r}: prefix state deviates by {d:e}"));
            }
            prefixes += 1;
        }
    }
    Ok(format!("50 m values, {prefixes} iteration prefixes, worst {worst:.1e} < 1e-10"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 uniform-state oracle sweep", ac1_uniform_sweep),
        ("AC2 golden uniform states m=13, m=104", ac2_golden_states),
        ("AC3 golden nonuniform states", ac3_nonuniform_golden_states),
        ("AC4 gate and CNOT count formulas", ac4_count_formulas),
        ("AC5 CNOT comparison table", ac5_table_reproduction),
        ("AC6 gate-count bounds", ac6_bounds),
        ("AC7 lowering soundness", ac7_lowering_soundness),
        ("AC8 QBA counts and state", ac8_qba),
        ("AC9 loop induction invariant", ac9_induction_invariant),
    ];

    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check)
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
