//! Gate and CNOT accounting, closed-form predictions, bound curves, the
//! published CNOT comparison table, and sweep reports in CSV/JSON.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::builder::build_uniform;
use crate::circuit::GateKind;
use crate::lowering::{cnot_count_for, lower_circuit};
use crate::planner::BitPlan;
use crate::{Error, Result};

/// Version of the external transpiler the reference CNOT counts describe.
pub const QISKIT_REFERENCE_VERSION: &str = "0.43.1";

/// Family of `M` covered by one of the comparison subtables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// `2^r − 1`
    PowMinusOne,
    /// `2^r + 2`
    PowPlusTwo,
    /// `2^r + 1`
    PowPlusOne,
    /// `2^r − 2`
    PowMinusTwo,
}

/// One row of a comparison subtable: `(r, m, proposed CNOTs, reference CNOTs)`.
pub type TableRow = (u32, u64, u64, u64);

pub const TABLE_POW_MINUS_ONE: &[TableRow] = &[
    (2, 3, 1, 2), (3, 7, 4, 6), (4, 15, 7, 14), (5, 31, 10, 30), (6, 63, 13, 62),
    (7, 127, 16, 126), (8, 255, 19, 254), (9, 511, 22, 510), (10, 1023, 25, 1022),
    (11, 2047, 28, 2046), (12, 4095, 31, 4094), (13, 8191, 34, 8190),
    (14, 16383, 37, 16382), (15, 32767, 40, 32766),
];

pub const TABLE_POW_PLUS_TWO: &[TableRow] = &[
    (2, 6, 1, 6), (3, 10, 2, 12), (4, 18, 3, 22), (5, 34, 4, 40), (6, 66, 5, 74),
    (7, 130, 6, 140), (8, 258, 7, 270), (9, 514, 8, 528), (10, 1026, 9, 1042),
    (11, 2050, 10, 2068), (12, 4098, 11, 4118), (13, 8194, 12, 8216),
    (14, 16386, 13, 16410), (15, 32770, 14, 32796),
];

pub const TABLE_POW_PLUS_ONE: &[TableRow] = &[
    (3, 9, 3, 6), (4, 17, 4, 8), (5, 33, 5, 10), (6, 65, 6, 12), (7, 129, 7, 14),
    (8, 257, 8, 16), (9, 513, 9, 18), (10, 1025, 10, 20), (11, 2049, 11, 22),
    (12, 4097, 12, 24), (13, 8193, 13, 26), (14, 16385, 14, 28), (15, 32769, 15, 30),
];

pub const TABLE_POW_MINUS_TWO: &[TableRow] = &[
    (3, 6, 1, 6), (4, 14, 4, 14), (5, 30, 7, 30), (6, 62, 10, 62), (7, 126, 13, 126),
    (8, 254, 16, 254), (9, 510, 19, 510), (10, 1022, 22, 1022), (11, 2046, 25, 2046),
    (12, 4094, 28, 4094), (13, 8190, 31, 8190), (14, 16382, 34, 16382),
    (15, 32766, 37, 32766),
];

impl Family {
    pub const ALL: [Family; 4] =
        [Family::PowMinusOne, Family::PowPlusTwo, Family::PowPlusOne, Family::PowMinusTwo];

    pub fn table(self) -> &'static [TableRow] {
        match self {
            Family::PowMinusOne => TABLE_POW_MINUS_ONE,
            Family::PowPlusTwo => TABLE_POW_PLUS_TWO,
            Family::PowPlusOne => TABLE_POW_PLUS_ONE,
            Family::PowMinusTwo => TABLE_POW_MINUS_TWO,
        }
    }

    /// Smallest `r` listed for the family.
    pub fn min_r(self) -> u32 {
        match self {
            Family::PowMinusOne | Family::PowPlusTwo => 2,
            Family::PowPlusOne | Family::PowMinusTwo => 3,
        }
    }

    /// `m` for exponent `r`, if it fits.
    pub fn member(self, r: u32) -> Option<u64> {
        let p = 1u64.checked_shl(r).filter(|_| r < 64)?;
        match self {
            Family::PowMinusOne => Some(p - 1),
            Family::PowPlusTwo => p.checked_add(2),
            Family::PowPlusOne => p.checked_add(1),
            Family::PowMinusTwo => p.checked_sub(2),
        }
    }

    /// `r` such that `m` belongs to the family, within the tabulated range of `r`.
    pub fn exponent_of(self, m: u64) -> Option<u32> {
        let base = match self {
            Family::PowMinusOne => m.checked_add(1)?,
            Family::PowPlusTwo => m.checked_sub(2)?,
            Family::PowPlusOne => m.checked_sub(1)?,
            Family::PowMinusTwo => m.checked_add(2)?,
        };
        if !base.is_power_of_two() {
            return None;
        }
        let r = base.trailing_zeros();
        (r >= self.min_r()).then_some(r)
    }

    /// Closed-form CNOT count of the proposed circuit: `3r−5`, `r−1`, `r`, `3r−8`.
    pub fn proposed_cnots(self, r: u32) -> u64 {
        let r = u64::from(r);
        match self {
            Family::PowMinusOne => 3 * r - 5,
            Family::PowPlusTwo => r - 1,
            Family::PowPlusOne => r,
            Family::PowMinusTwo => 3 * r - 8,
        }
    }

    /// Reference transpiler CNOT trend: `2^r−2`, `2^r+2r−2`, `2r`, `2^r−2`.
    pub fn reference_cnots(self, r: u32) -> u64 {
        let p = 1u64 << r;
        let r = u64::from(r);
        match self {
            Family::PowMinusOne | Family::PowMinusTwo => p - 2,
            Family::PowPlusTwo => p + 2 * r - 2,
            Family::PowPlusOne => 2 * r,
        }
    }
}

/// Reference CNOT count for `m` when it belongs to a tabulated family.
/// `m = 6` sits in two families; both formulas give 6.
pub fn qiskit_reference(m: u64) -> Option<u64> {
    Family::ALL
        .iter()
        .find_map(|&f| f.exponent_of(m).map(|r| f.reference_cnots(r)))
}

/// `log₂ m`, the gate-count lower bound.
pub fn lower_bound(m: u64) -> f64 {
    (m as f64).log2()
}

/// `3(log₂(m+1) − 1)`, the gate-count upper bound.
pub fn upper_bound(m: u64) -> f64 {
    3.0 * ((m as f64 + 1.0).log2() - 1.0)
}

/// Predicted total gates: `l_k + 2k`, or `log₂ m` Hadamards for a power of two.
pub fn predicted_total(plan: &BitPlan) -> u64 {
    (plan.lk() + 2 * plan.k()) as u64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountReport {
    pub m: u64,
    pub k: u64,
    pub l0: u64,
    pub lk: u64,
    #[serde(rename = "total")]
    pub total_gates: u64,
    #[serde(rename = "cnot_pred")]
    pub cnot_predicted: u64,
    #[serde(rename = "cnot_meas")]
    pub cnot_measured: u64,
    #[serde(rename = "depth")]
    pub depth_measured: u64,
    #[serde(rename = "lb")]
    pub lower_bound: f64,
    #[serde(rename = "ub")]
    pub upper_bound: f64,
    #[serde(rename = "qiskit_ref")]
    pub qiskit_reference: Option<u64>,
    #[serde(rename = "pow2")]
    pub power_of_two: bool,
}

impl CountReport {
    /// `lower_bound ≤ total_gates ≤ upper_bound` and predicted CNOTs equal measured.
    pub fn is_consistent(&self) -> bool {
        let total = self.total_gates as f64;
        self.lower_bound <= total
            && total <= self.upper_bound + 1e-9
            && self.cnot_predicted == self.cnot_measured
    }
}

/// Builds and lowers the uniform circuit for `m` and records predicted and
/// measured counts side by side.
pub fn report(m: u64) -> Result<CountReport> {
    let plan = BitPlan::new(m, None)?;
    let circuit = build_uniform(m, None)?;
    let tally = circuit.tally();
    let lowered = lower_circuit(&circuit).tally();
    let total = tally.total() as u64;
    debug_assert_eq!(total, predicted_total(&plan));
    debug_assert_eq!(tally.get(GateKind::ControlledNot), 0);
    Ok(CountReport {
        m,
        k: plan.k() as u64,
        l0: plan.l0() as u64,
        lk: plan.lk() as u64,
        total_gates: total,
        cnot_predicted: cnot_count_for(&plan),
        cnot_measured: lowered.cnots() as u64,
        depth_measured: circuit.depth() as u64,
        lower_bound: lower_bound(m),
        upper_bound: upper_bound(m),
        qiskit_reference: qiskit_reference(m),
        power_of_two: plan.is_power_of_two(),
    })
}

/// One [`report`] per `m` in `lo..=hi`, computed in parallel, ordered by `m`.
pub fn sweep(lo: u64, hi: u64) -> Result<Vec<CountReport>> {
    if lo < 2 || lo > hi {
        return Err(Error::invalid(format!("invalid sweep range {lo}:{hi}")));
    }
    (lo..=hi).into_par_iter().map(report).collect()
}

/// Column order: m, k, l0, lk, total, cnot_pred, cnot_meas, depth, lb, ub,
/// qiskit_ref, pow2. Missing reference values are empty fields.
pub fn write_csv<W: Write>(reports: &[CountReport], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(r)?;
    }
    w.flush()
}

pub fn write_json<W: Write>(reports: &[CountReport], out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(out, reports)?;
    Ok(())
}
