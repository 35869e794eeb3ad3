//! End-to-end acceptance run: one line per criterion, nonzero exit on any
//! failure. Every expected value is computed here, independently of the
//! library's analysis code; the library is only used to build instances and
//! step walks.

use std::collections::VecDeque;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use walkbound::generators::{
    caterpillar, flower_path, four_cycle_chain, four_cycle_chain_with, lrv_v_chain,
    random_bounded_degree, ratio_config, small_corpus, CaterpillarParams, CycleEntry,
    GeneratedInstance,
};
use walkbound::oracle::{reach, worst_case_cover};
use walkbound::{Graph, NodeId, Policy, TieBreaker, Walk, WalkState};

type Outcome = Result<String, String>;

fn check(cond: bool, ok: String, bad: String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(bad)
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let e = start.elapsed();
    if e <= limit {
        Ok(())
    } else {
        Err(format!("took {e:?}, limit {limit:?}"))
    }
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn bundled(inst: &GeneratedInstance, policy: Policy) -> Walk<'_> {
    Walk::new(&inst.graph, policy, inst.tiebreaker(), inst.start).expect("generated start is valid")
}

/// Path frequencies just before each reversal of movement along the
/// caterpillar's central path (nodes `0..path_len`).
fn reversals(p: CaterpillarParams, count: usize) -> Vec<Vec<u64>> {
    let inst = caterpillar(p).unwrap();
    let path_len = (p.l + 2) as usize;
    let mut w = bundled(&inst, Policy::LfvV);
    let mut out = Vec::new();
    let mut last_path: Option<usize> = None;
    let mut dir: Option<bool> = None;
    while out.len() < count {
        let before = w.state().node_freq[..path_len].to_vec();
        let m = w.step().unwrap();
        let d = m.dest.index();
        if d >= path_len {
            continue;
        }
        if let Some(prev) = last_path {
            if prev != d {
                let up = d > prev;
                if dir.is_some_and(|x| x != up) {
                    out.push(before);
                }
                dir = Some(up);
            }
        }
        last_path = Some(d);
        assert!(w.state().t < 100_000_000, "budget");
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for (b, c, l) in [(4u64, 11u64, 3u64), (6, 11, 5)] {
        let got = &reversals(CaterpillarParams { b, c, l }, 1)[0];
        let mut want = vec![b + c + 1];
        for i in 1..=l {
            want.push(if i % 2 == 1 { 1 } else { b - i + 2 });
        }
        want.push(b + 2);
        if *got != want {
            return Err(format!("(b={b},l={l}) got {got:?}, want {want:?}"));
        }
        notes.push(format!("{got:?}"));
    }
    within(start, Duration::from_secs(1))?;
    Ok(notes.join(" "))
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for (b, l) in [(4u64, 3u64), (6, 5), (8, 5), (10, 7)] {
        let f = &reversals(CaterpillarParams { b, c: 11, l }, 2)[1];
        for i in (1..=l).step_by(2) {
            let want = (b - i + 1) * (b - i + 3) + 2;
            if f[i as usize] != want {
                return Err(format!(
                    "(b={b},l={l}) node {i}: {} != {want}",
                    f[i as usize]
                ));
            }
        }
        for i in 1..=l - 2 {
            if f[i as usize] <= f[i as usize + 2] {
                return Err(format!("(b={b},l={l}) freq({i}) <= freq({})", i + 2));
            }
        }
        notes.push(format!("b={b},l={l}:{f:?}"));
    }
    Ok(notes.join(" "))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let l = 5u64;
    let pts: Vec<(f64, f64)> = [8u64, 12, 16]
        .iter()
        .map(|&b| {
            let snaps = reversals(CaterpillarParams { b, c: 11, l }, (l - 2) as usize);
            (b as f64, snaps[(l - 3) as usize][(l + 1) as usize] as f64)
        })
        .collect();
    let s = slope(&pts);
    within(start, Duration::from_secs(60))?;
    check(
        (s - 3.0).abs() <= 0.4,
        format!("slope {s:.3} (target 3 +/- 0.4), points {pts:?}"),
        format!("slope {s:.3} outside 3 +/- 0.4, points {pts:?}"),
    )
}

/// For each component i in 1..k, time of the first return to the start after
/// the walker first enters component i; the last entry is for the target.
fn return_times(k: u64) -> Vec<u64> {
    let inst = lrv_v_chain(k).unwrap();
    let mut w = bundled(&inst, Policy::LrvV);
    let mut entered = vec![false; k as usize];
    let mut waiting: Vec<usize> = Vec::new();
    let mut times = vec![0u64; k as usize];
    let mut done = 0;
    while done < k as usize {
        let m = w.step().unwrap();
        let v = m.dest.0 as u64;
        let idx = if v == 9 * k {
            Some(k as usize - 1)
        } else if v % 9 == 0 && v > 0 {
            Some(v as usize / 9 - 1)
        } else {
            None
        };
        if let Some(i) = idx {
            if !entered[i] {
                entered[i] = true;
                waiting.push(i);
            }
        }
        if m.dest == inst.start {
            for i in waiting.drain(..) {
                times[i] = w.state().t;
                done += 1;
            }
        }
    }
    times
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let t = return_times(11);
    let ratios: Vec<f64> = (3..=10)
        .map(|k| t[k - 1] as f64 / t[k - 2] as f64)
        .collect();
    within(start, Duration::from_secs(60))?;
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    check(
        ratios.iter().all(|r| (1.8..=2.2).contains(r)),
        format!("ratios k=3..10 [{}]", shown.join(", ")),
        format!(
            "ratios outside [1.8, 2.2]: [{}] from {t:?}",
            shown.join(", ")
        ),
    )
}

fn quadratic(policy: Policy, tol: f64, exact: Option<fn(u64) -> u64>) -> Outcome {
    let mut pts = Vec::new();
    for k in [4u64, 8, 16, 32, 48] {
        let inst = four_cycle_chain(k).unwrap();
        let c = bundled(&inst, policy)
            .run_until_covered(100_000_000)
            .unwrap()
            .cover_time
            .ok_or("not covered")?;
        if let Some(f) = exact {
            if c != f(k) {
                return Err(format!("k={k}: cover {c} != closed form {}", f(k)));
            }
        }
        pts.push(((6 * k) as f64, c as f64));
    }
    let s = slope(&pts);
    check(
        (s - 2.0).abs() <= tol,
        format!("{policy} slope {s:.3}"),
        format!("{policy} slope {s:.3} outside 2 +/- {tol}"),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let r = quadratic(Policy::LrvE, 0.2, Some(|k| 5 * k * k + 5 * k - 1));
    within(start, Duration::from_secs(30))?;
    r
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let a = quadratic(Policy::LfvV, 0.25, None)?;
    let b = quadratic(Policy::LfvE, 0.25, None)?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("{a}, {b}"))
}

fn corpus() -> Vec<GeneratedInstance> {
    let mut c: Vec<GeneratedInstance> = (0..100u64)
        .map(|s| random_bounded_degree(2 + s % 29, 2 + s % 3, s).unwrap())
        .collect();
    assert!(c
        .iter()
        .all(|i| i.graph.node_count() <= 30 && i.graph.max_degree() <= 4));
    c.extend(small_corpus());
    c
}

fn tie_breakers(inst: &GeneratedInstance) -> Vec<TieBreaker> {
    vec![
        inst.tiebreaker(),
        TieBreaker::LowestIndex,
        TieBreaker::seeded(inst.graph.node_count() as u64),
    ]
}

fn lemma_ok(g: &Graph, s: &WalkState, start: NodeId) -> bool {
    let gs = s.node_freq[start.index()];
    let deg = g.degree(start) as u64;
    let fl = gs / deg;
    let nb: Vec<u64> = g
        .incidences(start)
        .iter()
        .map(|i| s.node_freq[i.neighbor.index()])
        .collect();
    nb.iter().all(|&f| f >= fl) && nb.iter().filter(|&&f| f > fl).count() as u64 >= gs % deg
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut steps = 0u64;
    for inst in corpus() {
        for tb in tie_breakers(&inst) {
            let mut w = Walk::new(&inst.graph, Policy::LfvV, tb, inst.start).unwrap();
            loop {
                steps += 1;
                if !lemma_ok(&inst.graph, w.state(), inst.start) {
                    return Err(format!("{} at t={}", inst.label(), w.state().t));
                }
                if w.is_covered() || w.state().t >= 2_000_000 {
                    break;
                }
                w.step().unwrap();
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{steps} states checked"))
}

fn eccentricity(g: &Graph, s: NodeId) -> u64 {
    let mut dist = vec![u64::MAX; g.node_count()];
    dist[s.index()] = 0;
    let mut q = VecDeque::from([s]);
    let mut far = 0;
    while let Some(v) = q.pop_front() {
        far = far.max(dist[v.index()]);
        for inc in g.incidences(v) {
            if dist[inc.neighbor.index()] == u64::MAX {
                dist[inc.neighbor.index()] = dist[v.index()] + 1;
                q.push_back(inc.neighbor);
            }
        }
    }
    far
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut steps = 0u64;
    for inst in corpus() {
        let g = &inst.graph;
        let d = g.nodes().map(|v| eccentricity(g, v)).max().unwrap();
        let delta = g.nodes().map(|v| g.degree(v) as u64).max().unwrap();
        let bound = delta.checked_pow(d as u32).unwrap_or(u64::MAX);
        for tb in tie_breakers(&inst) {
            let mut w = Walk::new(g, Policy::LfvV, tb, inst.start).unwrap();
            while !w.is_covered() && w.state().t < 2_000_000 {
                steps += 1;
                let max = *w.state().node_freq.iter().max().unwrap();
                if max > bound {
                    return Err(format!(
                        "{} at t={}: {max} > {bound}",
                        inst.label(),
                        w.state().t
                    ));
                }
                w.step().unwrap();
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{steps} pre-coverage states checked"))
}

fn ratio_hit(g: &Graph, s: &WalkState, start: NodeId, k: u64) -> bool {
    let delta = g.degree(start) as u64;
    s.node_freq[start.index()] == k * delta
        && g.incidences(start)
            .iter()
            .filter(|i| s.node_freq[i.neighbor.index()] == k)
            .count() as u64
            >= delta - 1
}

fn criterion_9() -> Outcome {
    let mut notes = Vec::new();
    for k in [1u64, 2, 4] {
        let inst = ratio_config(3, k).unwrap();
        let g = &inst.graph;
        let mut w = bundled(&inst, Policy::LfvV);
        while !ratio_hit(g, w.state(), inst.start, k) {
            if w.state().t > 1_000_000 {
                return Err(format!("k={k}: target state not reached"));
            }
            w.step().unwrap();
        }
        let s = w.state();
        let min = g
            .incidences(inst.start)
            .iter()
            .map(|i| s.node_freq[i.neighbor.index()])
            .min()
            .unwrap();
        if s.node_freq[inst.start.index()] != 3 * min {
            return Err(format!(
                "k={k}: ratio {} / {min} is not 3",
                s.node_freq[inst.start.index()]
            ));
        }
        notes.push(format!("k={k} at t={}", s.t));
        if k == 1 {
            let found = reach(g, Policy::LfvV, inst.start, s.t, |x| {
                ratio_hit(g, x, inst.start, 1)
            })
            .unwrap();
            let Some(moves) = found else {
                return Err("k=1: not reachable by exhaustive search".into());
            };
            notes.push(format!("search reaches k=1 in {} moves", moves.len()));
        }
    }
    Ok(notes.join(", "))
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let inst = four_cycle_chain(8).unwrap();
    let g = &inst.graph;
    let mut w = bundled(&inst, Policy::LfvE);
    let cover = w
        .run_until_covered(10_000_000)
        .unwrap()
        .cover_time
        .ok_or("not covered")?;
    let total = 8 * cover;
    let window = 4 * cover;
    let mut last: Vec<u64> = vec![u64::MAX; g.node_count()];
    last[inst.start.index()] = 0;
    // replay from scratch so every visit time is seen
    let mut w = bundled(&inst, Policy::LfvE);
    let mut worst = 0u64;
    for t in 1..=total {
        let m = w.step().unwrap();
        let v = m.dest.index();
        if t > total - window && last[v] != u64::MAX {
            worst = worst.max(t - last[v]);
        }
        last[v] = t;
    }
    for &l in &last {
        worst = worst.max(total - l);
    }
    let n = g.node_count() as u64;
    let d = g.nodes().map(|v| eccentricity(g, v)).max().unwrap();
    let ratio = worst as f64 / (n * d) as f64;
    within(start, Duration::from_secs(30))?;
    check(
        worst <= 16 * n * d,
        format!(
            "max latency {worst}, n*d = {}, ratio {ratio:.4} <= 16",
            n * d
        ),
        format!("max latency {worst} > 16 * {n} * {d}"),
    )
}

fn criterion_11() -> Outcome {
    let start = Instant::now();
    let mut instances = vec![lrv_v_chain(1).unwrap()];
    for k in 1..=2 {
        instances.push(four_cycle_chain(k).unwrap());
        instances.push(four_cycle_chain_with(k, CycleEntry::Long).unwrap());
    }
    for p in 0..=3 {
        instances.push(flower_path(1, p).unwrap());
    }
    instances.push(flower_path(2, 0).unwrap());
    for seed in 0..6 {
        instances.push(random_bounded_degree(6 + seed % 7, 3, seed).unwrap());
    }
    let cap = 10_000;
    let mut runs = 0;
    for inst in instances.iter().filter(|i| i.graph.node_count() <= 12) {
        for policy in Policy::ALL {
            let r = worst_case_cover(&inst.graph, policy, inst.start, cap).unwrap();
            let mut tbs = tie_breakers(inst);
            tbs.extend((0..4).map(TieBreaker::seeded));
            for tb in tbs {
                let c = Walk::new(&inst.graph, policy, tb, inst.start)
                    .unwrap()
                    .run_until_covered(cap)
                    .unwrap();
                runs += 1;
                if c.cover_time.unwrap_or(cap) > r.max_cover_time {
                    return Err(format!(
                        "{} {policy}: concrete {:?} > oracle {}",
                        inst.label(),
                        c.cover_time,
                        r.max_cover_time
                    ));
                }
            }
            let replay = || {
                let mut w = Walk::new(
                    &inst.graph,
                    policy,
                    TieBreaker::scripted(r.witness.clone()),
                    inst.start,
                )
                .unwrap();
                w.run_steps(r.witness.len() as u64).unwrap();
                (w.cover_time(), w.state().clone())
            };
            let (a, b) = (replay(), replay());
            let want = if r.lower_bound_only {
                None
            } else {
                Some(r.max_cover_time)
            };
            if a != b || a.0 != want {
                return Err(format!(
                    "{} {policy}: witness replay gives {:?}, oracle {want:?}",
                    inst.label(),
                    a.0
                ));
            }
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!(
        "{} instances, {runs} concrete runs",
        instances.len()
    ))
}

fn criterion_12() -> Outcome {
    let mut runs = 0;
    for inst in corpus() {
        for policy in Policy::ALL {
            for tb in tie_breakers(&inst) {
                let mut w = Walk::new(&inst.graph, policy, tb, inst.start).unwrap();
                runs += 1;
                loop {
                    let s = w.state();
                    if s.node_freq.iter().sum::<u64>() != s.t
                        || s.edge_freq.iter().sum::<u64>() != s.t
                    {
                        return Err(format!("{} {policy} at t={}", inst.label(), s.t));
                    }
                    if w.is_covered() || s.t >= 2_000_000 {
                        break;
                    }
                    w.step().unwrap();
                }
            }
        }
    }
    Ok(format!("{runs} runs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("caterpillar first-pass frequencies", criterion_1),
        (
            "caterpillar second-pass frequencies and ordering",
            criterion_2,
        ),
        ("caterpillar last-node degree", criterion_3),
        ("lrv-v chain doubling", criterion_4),
        ("lrv-e quadratic", criterion_5),
        ("lfv-v and lfv-e quadratic", criterion_6),
        ("frequency lemma", criterion_7),
        ("delta^d bound", criterion_8),
        ("ratio construction", criterion_9),
        ("lfv-e latency", criterion_10),
        ("oracle consistency", criterion_11),
        ("counter conservation", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, msg) = match f() {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!(
            "criterion {:>2} {tag} {name} ({:.2?}): {msg}",
            i + 1,
            start.elapsed()
        );
    }
    println!("acceptance: {} of 12 passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
