//! Named bundles of checks. Each check yields a [`Verdict`]; a suite never
//! panics, it reports failures and errors as failed verdicts.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::caterpillar::{caterpillar_passes, fit_caterpillar_degrees};
use crate::analysis::chain_cycle_times;
use crate::analysis::fit::{fit_growth, GrowthModel};
use crate::analysis::invariants::{audit, check_latency, ratio_state_reached};
use crate::analysis::metrics::metrics;
use crate::generators::{
    flower_path, four_cycle_chain, four_cycle_chain_with, lrv_v_chain, random_bounded_degree,
    ratio_config, small_corpus, CaterpillarParams, CycleEntry, GeneratedInstance,
};
use crate::oracle::{reach, worst_case_cover};
use crate::walk::{Policy, TieBreaker, Walk};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub details: Value,
}

impl Verdict {
    fn new(name: impl Into<String>, pass: bool, details: Value) -> Self {
        Verdict {
            name: name.into(),
            pass,
            details,
        }
    }

    fn error(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Verdict::new(name, false, json!({ "error": err.to_string() }))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown suite `{0}`")]
pub struct UnknownSuite(pub String);

pub const SUITES: [&str; 10] = [
    "caterpillar",
    "growth",
    "doubling",
    "quadratic",
    "lemma",
    "delta-d",
    "ratio",
    "latency",
    "oracle-consistency",
    "conservation",
];

/// Runs one suite by name, or every suite for `all`.
pub fn run_suite(name: &str) -> Result<Vec<Verdict>, UnknownSuite> {
    Ok(match name {
        "caterpillar" => caterpillar_suite(),
        "growth" => growth_suite(),
        "doubling" => doubling_suite(),
        "quadratic" => quadratic_suite(),
        "lemma" => invariant_suite(Invariant::Lemma),
        "delta-d" => invariant_suite(Invariant::DeltaD),
        "ratio" => ratio_suite(),
        "latency" => latency_suite(),
        "oracle-consistency" => oracle_suite(),
        "conservation" => invariant_suite(Invariant::Conservation),
        "all" => SUITES
            .iter()
            .flat_map(|s| run_suite(s).expect("listed suites exist"))
            .collect(),
        _ => return Err(UnknownSuite(name.to_string())),
    })
}

const CAT_BUDGET: u64 = 50_000_000;

fn caterpillar_suite() -> Vec<Verdict> {
    let mut out = Vec::new();
    for (b, l) in [(4u64, 3u64), (6, 5)] {
        let c = 11;
        let name = format!("caterpillar-first-pass(b={b},c={c},l={l})");
        let p = CaterpillarParams { b, c, l };
        match caterpillar_passes(p, Some(1), CAT_BUDGET) {
            Ok(run) if !run.snapshots.is_empty() => {
                let got = &run.snapshots[0].freq;
                let want: Vec<u64> = (0..=l + 1)
                    .map(|i| match i {
                        0 => b + c + 1,
                        i if i == l + 1 => b + 2,
                        i if i % 2 == 1 => 1,
                        i => b - i + 2,
                    })
                    .collect();
                out.push(Verdict::new(
                    name,
                    *got == want,
                    json!({ "measured": got, "expected": want }),
                ));
            }
            Ok(_) => out.push(Verdict::new(
                name,
                false,
                json!({ "error": "first pass not reached" }),
            )),
            Err(e) => out.push(Verdict::error(name, e)),
        }
    }
    for (b, l) in [(4u64, 3u64), (6, 5), (8, 5)] {
        let name = format!("caterpillar-second-pass(b={b},c=11,l={l})");
        let p = CaterpillarParams { b, c: 11, l };
        match caterpillar_passes(p, Some(2), CAT_BUDGET) {
            Ok(run) if run.snapshots.len() >= 2 => {
                let f = &run.snapshots[1].freq;
                let odd_ok = (1..=l)
                    .step_by(2)
                    .all(|i| f[i as usize] == (b - i + 1) * (b - i + 3) + 2);
                let claim_ok = (1..=l - 2).all(|i| f[i as usize] > f[i as usize + 2]);
                out.push(Verdict::new(
                    name,
                    odd_ok && claim_ok,
                    json!({ "freq": f, "odd_formula": odd_ok, "parent_exceeds_grandchild": claim_ok }),
                ));
            }
            Ok(_) => out.push(Verdict::new(
                name,
                false,
                json!({ "error": "second pass not reached" }),
            )),
            Err(e) => out.push(Verdict::error(name, e)),
        }
    }
    out
}

fn growth_suite() -> Vec<Verdict> {
    let name = "caterpillar-last-node-degree(l=5,b=8,12,16)";
    let l = 5;
    match fit_caterpillar_degrees(l, 11, &[8, 12, 16], (l - 2) as usize, CAT_BUDGET, 0.4) {
        Ok(rep) => match rep.row(l + 1, l - 2) {
            Some(row) => {
                let pass = (row.slope - (l - 2) as f64).abs() <= 0.4;
                vec![Verdict::new(
                    name,
                    pass,
                    json!({ "slope": row.slope, "residual": row.residual, "freqs": row.freqs, "target": l - 2 }),
                )]
            }
            None => vec![Verdict::new(
                name,
                false,
                json!({ "error": "pass not reached", "passes": rep.passes }),
            )],
        },
        Err(e) => vec![Verdict::error(name, e)],
    }
}

fn doubling_suite() -> Vec<Verdict> {
    let name = "lrv-v-chain-doubling(k=3..10)";
    let inst = match lrv_v_chain(11) {
        Ok(i) => i,
        Err(e) => return vec![Verdict::error(name, e)],
    };
    match chain_cycle_times(&inst, 10_000_000) {
        Ok(times) => {
            let t: Vec<Option<u64>> = times[..10].to_vec();
            let ratios: Vec<Option<f64>> = (3..=10)
                .map(|k| match (t[k - 1], t[k - 2]) {
                    (Some(a), Some(b)) if b > 0 => Some(a as f64 / b as f64),
                    _ => None,
                })
                .collect();
            let pass = ratios
                .iter()
                .all(|r| r.is_some_and(|r| (1.8..=2.2).contains(&r)));
            vec![Verdict::new(
                name,
                pass,
                json!({ "cycle_times": t, "ratios_k3_to_k10": ratios }),
            )]
        }
        Err(e) => vec![Verdict::error(name, e)],
    }
}

/// Cover times of the bundled four-cycle chain for `ks` under `policy`.
pub fn four_cycle_points(ks: &[u64], policy: Policy) -> Result<Vec<(f64, f64)>, String> {
    let mut pts = Vec::new();
    for &k in ks {
        let inst = four_cycle_chain(k).map_err(|e| e.to_string())?;
        let mut w = Walk::new(&inst.graph, policy, inst.tiebreaker(), inst.start)
            .map_err(|e| e.to_string())?;
        let rep = w
            .run_until_covered(100_000_000)
            .map_err(|e| e.to_string())?;
        let c = rep.cover_time.ok_or_else(|| format!("k={k} not covered"))?;
        pts.push((inst.graph.node_count() as f64, c as f64));
    }
    Ok(pts)
}

fn quadratic_suite() -> Vec<Verdict> {
    let ks = [4, 8, 16, 32, 48];
    [(Policy::LrvE, 0.2), (Policy::LfvV, 0.25), (Policy::LfvE, 0.25)]
        .into_iter()
        .map(|(policy, tol)| {
            let name = format!("four-cycle-chain-quadratic({policy})");
            match four_cycle_points(&ks, policy).and_then(|p| fit_growth(&p, GrowthModel::Power).map_err(|e| e.to_string())) {
                Ok(fit) => Verdict::new(
                    name,
                    (fit.slope - 2.0).abs() <= tol,
                    json!({ "slope": fit.slope, "residual": fit.residual, "tolerance": tol, "points": fit.points }),
                ),
                Err(e) => Verdict::error(name, e),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Invariant {
    Lemma,
    DeltaD,
    Conservation,
}

/// 100 seeded random graphs with `n <= 30` and max degree `<= 4`.
pub fn random_corpus() -> Vec<GeneratedInstance> {
    (0..100u64)
        .map(|seed| {
            random_bounded_degree(2 + seed % 29, 2 + seed % 3, seed)
                .expect("parameters are feasible")
        })
        .collect()
}

/// Instances used by the invariant suites: the random corpus plus every
/// generator family at small parameters.
pub fn invariant_corpus() -> Vec<GeneratedInstance> {
    let mut c = random_corpus();
    c.extend(small_corpus());
    c
}

const AUDIT_CAP: u64 = 2_000_000;

fn invariant_suite(which: Invariant) -> Vec<Verdict> {
    let corpus = invariant_corpus();
    let policies: &[Policy] = match which {
        Invariant::Conservation => &Policy::ALL,
        _ => &[Policy::LfvV],
    };
    let (name, kind) = match which {
        Invariant::Lemma => ("frequency-lemma", "Lemma"),
        Invariant::DeltaD => ("delta-d-bound", "DeltaD"),
        Invariant::Conservation => ("conservation", "Conservation"),
    };
    let mut runs = 0u64;
    let mut checks = 0u64;
    let mut failures = Vec::new();
    for inst in &corpus {
        for &policy in policies {
            for tb in [
                inst.tiebreaker(),
                TieBreaker::seeded(inst.graph.node_count() as u64),
            ] {
                runs += 1;
                match audit(&inst.graph, policy, tb, inst.start, AUDIT_CAP) {
                    Ok(a) => {
                        checks += match which {
                            Invariant::Lemma => a.lemma_checks,
                            Invariant::DeltaD => a.bound_checks,
                            Invariant::Conservation => a.steps + 1,
                        };
                        for v in a.violations {
                            let tag = serde_json::to_value(&v)
                                .ok()
                                .and_then(|x| x.as_object().and_then(|o| o.keys().next().cloned()));
                            if tag.as_deref() == Some(kind) {
                                failures.push(json!({ "instance": inst.label(), "policy": policy, "violation": v.to_string() }));
                            }
                        }
                    }
                    Err(e) => {
                        failures.push(json!({ "instance": inst.label(), "error": e.to_string() }))
                    }
                }
            }
        }
    }
    vec![Verdict::new(
        name,
        failures.is_empty(),
        json!({ "runs": runs, "checks": checks, "failures": failures.iter().take(10).collect::<Vec<_>>() }),
    )]
}

fn ratio_suite() -> Vec<Verdict> {
    let mut out = Vec::new();
    for k in [1u64, 2, 4] {
        let name = format!("ratio(delta=3,k={k})");
        let inst = match ratio_config(3, k) {
            Ok(i) => i,
            Err(e) => {
                out.push(Verdict::error(name, e));
                continue;
            }
        };
        let g = &inst.graph;
        let mut w = match Walk::new(g, Policy::LfvV, inst.tiebreaker(), inst.start) {
            Ok(w) => w,
            Err(e) => {
                out.push(Verdict::error(name, e));
                continue;
            }
        };
        let mut hit = None;
        while w.state().t < 1_000_000 {
            if ratio_state_reached(g, w.state(), inst.start, k) {
                hit = Some(w.state().clone());
                break;
            }
            if let Err(e) = w.step() {
                out.push(Verdict::error(name.clone(), e));
                break;
            }
        }
        let Some(state) = hit else {
            out.push(Verdict::new(
                name,
                false,
                json!({ "error": "target state not reached" }),
            ));
            continue;
        };
        let nbrs: Vec<u64> = g
            .incidences(inst.start)
            .iter()
            .map(|i| state.node_freq[i.neighbor.index()])
            .collect();
        let min = nbrs.iter().copied().min().unwrap_or(0);
        let s_freq = state.node_freq[inst.start.index()];
        let ratio_exact = min > 0 && s_freq == 3 * min;
        let mut details = json!({ "t": state.t, "start_freq": s_freq, "neighbor_freqs": nbrs, "ratio": s_freq as f64 / min.max(1) as f64 });
        let mut pass = ratio_exact;
        if k == 1 {
            match reach(g, Policy::LfvV, inst.start, state.t, |s| {
                ratio_state_reached(g, s, inst.start, 1)
            }) {
                Ok(found) => {
                    details["oracle_reachable"] = json!(found.is_some());
                    pass &= found.is_some();
                }
                Err(e) => {
                    details["oracle_error"] = json!(e.to_string());
                    pass = false;
                }
            }
        }
        out.push(Verdict::new(name, pass, details));
    }
    out
}

fn latency_suite() -> Vec<Verdict> {
    let name = "lfv-e-latency(four-cycle-chain k=8)";
    let inst = match four_cycle_chain(8) {
        Ok(i) => i,
        Err(e) => return vec![Verdict::error(name, e)],
    };
    let g = &inst.graph;
    let run = || -> Result<Verdict, String> {
        let mut w = Walk::new(g, Policy::LfvE, inst.tiebreaker(), inst.start)
            .map_err(|e| e.to_string())?
            .recording();
        let rep = w.run_until_covered(10_000_000).map_err(|e| e.to_string())?;
        let c = rep.cover_time.ok_or("not covered")?;
        w.run_steps(7 * c).map_err(|e| e.to_string())?;
        let m = metrics(&w.trace(), g, None);
        let lat = m.latency.ok_or("latency window unavailable")?;
        let stats = g.stats();
        let check = check_latency(&lat, g.node_count(), stats.diameter, 16.0f64);
        Ok(Verdict::new(
            name,
            check.pass,
            json!({ "cover_time": c, "steps": m.steps, "window": m.window, "check": check }),
        ))
    };
    vec![run().unwrap_or_else(|e| Verdict::error(name, e))]
}

/// Generator instances with at most 12 nodes.
pub fn tiny_instances() -> Vec<GeneratedInstance> {
    let mut out = vec![lrv_v_chain(1).expect("k=1")];
    for k in 1..=2 {
        out.push(four_cycle_chain(k).expect("small chain"));
        out.push(four_cycle_chain_with(k, CycleEntry::Long).expect("small chain"));
    }
    for p in 0..=3 {
        out.push(flower_path(1, p).expect("small flower"));
    }
    out.push(flower_path(2, 0).expect("small flower"));
    for seed in 0..6 {
        out.push(random_bounded_degree(6 + seed % 7, 3, seed).expect("small random"));
    }
    out.retain(|i| i.graph.node_count() <= 12);
    out
}

const ORACLE_CAP: u64 = 10_000;

fn oracle_suite() -> Vec<Verdict> {
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for inst in tiny_instances() {
        for policy in Policy::ALL {
            let res = match worst_case_cover(&inst.graph, policy, inst.start, ORACLE_CAP) {
                Ok(r) => r,
                Err(e) => {
                    failures.push(json!({ "instance": inst.label(), "policy": policy, "error": e.to_string() }));
                    continue;
                }
            };
            let mut concrete = Vec::new();
            let mut tbs = vec![inst.tiebreaker(), TieBreaker::LowestIndex];
            tbs.extend((0..4).map(TieBreaker::seeded));
            for tb in tbs {
                let desc = tb.describe();
                match Walk::new(&inst.graph, policy, tb, inst.start).and_then(|mut w| w.run_until_covered(ORACLE_CAP)) {
                    Ok(rep) => {
                        let c = rep.cover_time.unwrap_or(ORACLE_CAP);
                        if c > res.max_cover_time {
                            failures.push(json!({ "instance": inst.label(), "policy": policy, "tiebreak": desc, "concrete": c, "oracle": res.max_cover_time }));
                        }
                        concrete.push(c);
                    }
                    Err(e) => failures.push(json!({ "instance": inst.label(), "policy": policy, "error": e.to_string() })),
                }
            }
            let replay = |w: &[crate::walk::Move]| {
                Walk::new(
                    &inst.graph,
                    policy,
                    TieBreaker::scripted(w.to_vec()),
                    inst.start,
                )
                .and_then(|mut walk| {
                    walk.run_until_covered(w.len() as u64)?;
                    Ok((walk.report(), walk.state().clone()))
                })
            };
            match (replay(&res.witness), replay(&res.witness)) {
                (Ok((a, sa)), Ok((b, sb))) => {
                    let expect = if res.lower_bound_only {
                        None
                    } else {
                        Some(res.max_cover_time)
                    };
                    if a.cover_time != expect
                        || a != b
                        || sa != sb
                        || a.steps != res.witness.len() as u64
                    {
                        failures.push(json!({ "instance": inst.label(), "policy": policy, "error": "witness replay differs" }));
                    }
                }
                (Err(e), _) | (_, Err(e)) => failures.push(
                    json!({ "instance": inst.label(), "policy": policy, "error": e.to_string() }),
                ),
            }
            rows.push(json!({
                "instance": inst.label(),
                "policy": policy,
                "oracle": res.max_cover_time,
                "lower_bound_only": res.lower_bound_only,
                "explored": res.nodes_explored,
                "concrete": concrete,
            }));
        }
    }
    let mut out = vec![Verdict::new(
        "oracle-consistency",
        failures.is_empty(),
        json!({ "failures": failures, "runs": rows }),
    )];
    out.push(long_entry_matches_oracle());
    out
}

/// The long-entry four-cycle chain realizes the exhaustive worst case exactly.
fn long_entry_matches_oracle() -> Verdict {
    let name = "four-cycle-chain-long-entry-equals-oracle(k=1,2)";
    let mut rows = Vec::new();
    let mut pass = true;
    for k in 1..=2 {
        let inst = match four_cycle_chain_with(k, CycleEntry::Long) {
            Ok(i) => i,
            Err(e) => return Verdict::error(name, e),
        };
        for policy in [Policy::LrvE, Policy::LfvE] {
            let oracle = worst_case_cover(&inst.graph, policy, inst.start, ORACLE_CAP);
            let bundled = Walk::new(&inst.graph, policy, inst.tiebreaker(), inst.start)
                .and_then(|mut w| w.run_until_covered(ORACLE_CAP));
            match (oracle, bundled) {
                (Ok(o), Ok(b)) => {
                    pass &= !o.lower_bound_only && b.cover_time == Some(o.max_cover_time);
                    rows.push(json!({ "k": k, "policy": policy, "oracle": o.max_cover_time, "bundled": b.cover_time }));
                }
                (Err(e), _) => return Verdict::error(name, e),
                (_, Err(e)) => return Verdict::error(name, e),
            }
        }
    }
    Verdict::new(name, pass, json!({ "runs": rows }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert_eq!(run_suite("nope"), Err(UnknownSuite("nope".into())));
    }

    #[test]
    fn tiny_instances_fit_the_oracle() {
        let t = tiny_instances();
        assert!(t.len() >= 10);
        assert!(t.iter().all(|i| i.graph.node_count() <= 12));
    }

    #[test]
    fn random_corpus_parameters() {
        let c = random_corpus();
        assert_eq!(c.len(), 100);
        assert!(c
            .iter()
            .all(|i| i.graph.node_count() <= 30 && i.graph.max_degree() <= 4));
    }
}
