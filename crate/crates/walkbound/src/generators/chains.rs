//! Two chains of identical components with maximum degree 3.
//!
//! `lrv_v_chain` strings 9-node gadgets together so that LRV-v returns to the
//! start once per newly reached gadget, roughly doubling the time each time.
//! `four_cycle_chain` strings 4-cycles together so that the walker bounces back
//! at every fresh cycle, giving quadratic cover time.

use super::{assemble, order_by, Family, GeneratedInstance, GeneratorError, Prediction, MAX_NODES};

/// Internal edges of one 9-node gadget, in local ids.
pub const LRV_GADGET_EDGES: [(u32, u32); 10] = [
    (5, 7),
    (2, 3),
    (0, 7),
    (4, 6),
    (3, 6),
    (2, 8),
    (0, 1),
    (2, 5),
    (3, 7),
    (4, 5),
];
/// Local id where the walker enters a gadget.
pub const LRV_GADGET_ENTRY: u32 = 0;
/// Local id bridged to the next gadget's entry.
pub const LRV_GADGET_EXIT: u32 = 4;
/// Preference among local roles, most preferred first.
const LRV_ROLE_ORDER: [u32; 9] = [2, 7, 3, 6, 1, 8, 0, 5, 4];

/// `k` gadgets in a row plus a final target node attached to the last exit.
pub fn lrv_v_chain(k: u64) -> Result<GeneratedInstance, GeneratorError> {
    if k < 1 {
        return Err(GeneratorError::Params("k must be at least 1".into()));
    }
    if 9 * k + 1 > MAX_NODES as u64 {
        return Err(GeneratorError::Params(format!("k = {k} is too large")));
    }
    let k32 = k as u32;
    let target = 9 * k32;
    let n = target as usize + 1;
    let mut edges = Vec::with_capacity(11 * k as usize);
    for i in 0..k32 {
        let o = 9 * i;
        edges.extend(LRV_GADGET_EDGES.iter().map(|&(u, v)| (o + u, o + v)));
        let next = if i + 1 < k32 {
            o + 9 + LRV_GADGET_ENTRY
        } else {
            target
        };
        edges.push((o + LRV_GADGET_EXIT, next));
    }
    let mut role_rank = [0u32; 9];
    for (r, &role) in LRV_ROLE_ORDER.iter().enumerate() {
        role_rank[role as usize] = r as u32;
    }
    let order = order_by(n, &edges, |_, w| {
        if w == target {
            (0, 0, 0)
        } else {
            (1, role_rank[(w % 9) as usize], w / 9)
        }
    });
    let predicted = (k >= 2).then(|| Prediction {
        formula: "return time after reaching gadget k-1: T_1 = 39, T_i = 2*T_(i-1) + 17".into(),
        value: lrv_chain_cycle_time(k - 1) as f64,
    });
    assemble(
        Family::LrvVChain,
        vec![("k".into(), k)],
        n,
        &edges,
        0,
        &order,
        predicted,
    )
}

/// Closed form of the cycle-time recurrence, `56 * 2^(i-1) - 17`.
pub(crate) fn lrv_chain_cycle_time(i: u64) -> u64 {
    56u64
        .saturating_mul(1u64.checked_shl((i - 1) as u32).unwrap_or(u64::MAX))
        .saturating_sub(17)
}

/// Which way the walker goes round a 4-cycle on first entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CycleEntry {
    /// Entry node prefers the exit side (a-b-c-d-a). Quadratic under LRV-e,
    /// LFV-v and LFV-e.
    #[default]
    Short,
    /// Entry node prefers the far side (a-d-c-b). Realizes the exhaustive
    /// worst case under LRV-e and LFV-e, `5k^2 + 7k - 1` for LRV-e, but lets
    /// LFV-v through in linear time.
    Long,
}

/// Component `i` occupies nodes `6i..6i+6` as (p, a, b, c, d, q): the 4-cycle
/// a-b-c-d, entry bridge p-a and exit bridge b-q, with q linked to the next p.
pub fn four_cycle_chain(k: u64) -> Result<GeneratedInstance, GeneratorError> {
    four_cycle_chain_with(k, CycleEntry::Short)
}

pub fn four_cycle_chain_with(
    k: u64,
    entry: CycleEntry,
) -> Result<GeneratedInstance, GeneratorError> {
    if k < 1 {
        return Err(GeneratorError::Params("k must be at least 1".into()));
    }
    if 6 * k > MAX_NODES as u64 {
        return Err(GeneratorError::Params(format!("k = {k} is too large")));
    }
    let k32 = k as u32;
    let n = 6 * k as usize;
    let mut edges = Vec::with_capacity(7 * k as usize);
    for i in 0..k32 {
        let [p, a, b, c, d, q] = [0, 1, 2, 3, 4, 5].map(|r| 6 * i + r);
        edges.extend([(p, a), (a, b), (b, c), (c, d), (d, a), (b, q)]);
        if i + 1 < k32 {
            edges.push((q, q + 1));
        }
    }
    let at_entry: &[i32] = match entry {
        CycleEntry::Short => &[0, 2, 4],
        CycleEntry::Long => &[0, 4, 2],
    };
    // Preferred neighbor roles per role; a neighbor in another component is
    // the previous q (for p) or the next p (for q).
    let order = order_by(n, &edges, |v, w| {
        let (i, r) = (v / 6, v % 6);
        let local = |x: u32| {
            if x / 6 == i {
                (x % 6) as i32
            } else if x < v {
                -1
            } else {
                6
            }
        };
        let pref: &[i32] = match r {
            0 => &[-1, 1],
            1 => at_entry,
            2 => &[1, 3, 5],
            3 => &[4, 2],
            4 => &[1, 3],
            _ => &[6, 2],
        };
        pref.iter()
            .position(|&x| x == local(w))
            .expect("neighbor has a role")
    });
    let (params, predicted) = match entry {
        CycleEntry::Short => (
            vec![("k".into(), k)],
            Prediction {
                formula: "lrv-e cover time = 5k^2 + 5k - 1".into(),
                value: (5 * k * k + 5 * k - 1) as f64,
            },
        ),
        CycleEntry::Long => (
            vec![("k".into(), k), ("long-entry".into(), 1)],
            Prediction {
                formula: "lrv-e cover time = 5k^2 + 7k - 1".into(),
                value: (5 * k * k + 7 * k - 1) as f64,
            },
        ),
    };
    assemble(
        Family::FourCycleChain,
        params,
        n,
        &edges,
        0,
        &order,
        Some(predicted),
    )
}
