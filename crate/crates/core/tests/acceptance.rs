//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so each line is printed in
//! order; the process exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{random_instances, Instance, EXAMPLE_TEXT};
use vlg_core::ac::Automaton;
use vlg_core::gapgraph::{dual_list_bound, GraphBuilder};
use vlg_core::matcher::{range_list_bound, Matcher, MatcherState, Range, TracePoint};
use vlg_core::oracle;
use vlg_core::reporter::expand_combinations;
use vlg_core::{build_implicit_gap_graph, find_endpoints, report_chunked, report_on_the_fly, VlgPattern};

const SEED: u64 = 0x5eed_acce;
const INSTANCES: usize = 1000;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn running() -> VlgPattern {
    VlgPattern::parse("A.{6,7}CC.{2,6}GT").unwrap()
}

fn combo_pattern() -> VlgPattern {
    VlgPattern::parse("G.{0,3}C.{1,6}A.{2,7}T").unwrap()
}

fn example_endpoints() -> Outcome {
    let p = running();
    let mut ends = Vec::new();
    let mut best = Duration::MAX;
    for _ in 0..20 {
        let t = Instant::now();
        ends = find_endpoints(&p, EXAMPLE_TEXT);
        best = best.min(t.elapsed());
    }
    ensure(ends == [17, 28, 31], || format!("got {ends:?}"))?;
    ensure(best < Duration::from_millis(1), || format!("best run took {best:?}"))?;
    Ok(format!("ends {ends:?} in {best:?}"))
}

fn occurrence_count() -> Outcome {
    let s = Matcher::new(running()).run(EXAMPLE_TEXT, &mut vlg_core::matcher::NoProbe, |_| {});
    ensure(s.alpha() == 14, || format!("alpha = {}", s.alpha()))?;
    ensure(s.layer_occurrences == [5, 5, 4], || format!("per string {:?}", s.layer_occurrences))?;
    Ok(format!("alpha = 14, per string {:?}", s.layer_occurrences))
}

fn range_list_trace() -> Outcome {
    let m = Matcher::new(running());
    let mut seen: Vec<(TracePoint, Vec<Range>)> = Vec::new();
    let mut probe = |point: TracePoint, tau: usize, layer: usize, st: &MatcherState| {
        if tau != 26 || layer != 1 {
            return;
        }
        let shown = if point == TracePoint::AfterUpdate { 2 } else { 1 };
        seen.push((point, st.list(shown).unwrap().to_vec()));
    };
    m.run(EXAMPLE_TEXT, &mut probe, |_| {});
    let r = Range::new;
    let expected = vec![
        (TracePoint::BeforePurge, vec![r(17, 20), r(22, 23), r(25, 26)]),
        (TracePoint::AfterPurge, vec![r(25, 26)]),
        (TracePoint::AfterUpdate, vec![r(23, 33)]),
    ];
    ensure(seen == expected, || format!("trace {seen:?}"))?;
    Ok("L2 [17,20][22,23][25,26] -> [25,26]; L3 -> [23,33]".into())
}

fn combinations_at_17() -> Outcome {
    let p = combo_pattern();
    let expected: BTreeSet<Vec<usize>> = [[5, 6, 10, 17], [5, 6, 12, 17], [5, 8, 10, 17], [5, 8, 12, 17], [5, 9, 12, 17]]
        .iter()
        .map(|c| c.to_vec())
        .collect();
    let mut got = BTreeSet::new();
    report_on_the_fly(&p, EXAMPLE_TEXT, |c| {
        // The match spanning 5..17; another match starting at 4 also ends at 17.
        if c[0] == 5 && c[3] == 17 {
            got.insert(c.to_vec());
        }
    })
    .map_err(|e| e.to_string())?;
    ensure(got == expected, || format!("got {got:?}"))?;
    Ok(format!("{} combinations for the match at 5..17", got.len()))
}

fn oracle_equivalence(instances: &[Instance]) -> Outcome {
    let t = Instant::now();
    for (i, inst) in instances.iter().enumerate() {
        let p = &inst.pattern;
        let expected = oracle::brute_force_combinations(p, &inst.text).map_err(|e| e.to_string())?;
        let ends = oracle::brute_force_endpoints(p, &inst.text).map_err(|e| e.to_string())?;

        let got = find_endpoints(p, &inst.text);
        ensure(got == ends, || format!("instance {i}: endpoints {got:?} != {ends:?}"))?;

        let mut fly = Vec::new();
        report_on_the_fly(p, &inst.text, |c| fly.push(c.to_vec())).map_err(|e| e.to_string())?;
        let projected: Vec<usize> = fly.iter().map(|c| *c.last().unwrap()).collect::<BTreeSet<_>>().into_iter().collect();
        ensure(projected == ends, || format!("instance {i}: on-the-fly projection differs"))?;
        ensure(fly.len() == expected.len(), || format!("instance {i}: on-the-fly count"))?;
        ensure(fly.into_iter().collect::<BTreeSet<_>>() == expected, || {
            format!("instance {i}: on-the-fly set")
        })?;

        let mut chunked = Vec::new();
        report_chunked(p, &inst.text, None, |c| chunked.push(c.to_vec())).map_err(|e| e.to_string())?;
        ensure(chunked.len() == expected.len(), || format!("instance {i}: chunked count"))?;
        ensure(chunked.into_iter().collect::<BTreeSet<_>>() == expected, || format!("instance {i}: chunked set"))?;
    }
    let elapsed = t.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} instances in {elapsed:.2?}", instances.len()))
}

fn range_list_bounds(instances: &[Instance]) -> Outcome {
    let mut checks = 0usize;
    for (i, inst) in instances.iter().enumerate() {
        let p = &inst.pattern;
        let bounds: Vec<usize> = (1..p.k()).map(|l| range_list_bound(p, l).unwrap()).collect();
        let mut violation = None;
        let mut probe = |point: TracePoint, tau: usize, _: usize, st: &MatcherState| {
            if point != TracePoint::AfterUpdate || violation.is_some() {
                return;
            }
            for (list, &bound) in st.lists().iter().zip(&bounds) {
                checks += 1;
                if list.len() > bound {
                    violation = Some(format!("instance {i}, tau {tau}: |L| = {} > {bound}", list.len()));
                }
            }
        };
        Matcher::new(p.clone()).run(&inst.text, &mut probe, |_| {});
        if let Some(v) = violation {
            return Err(v);
        }
    }
    Ok(format!("{checks} list checks, no violations"))
}

fn dual_list_bounds(instances: &[Instance]) -> Outcome {
    let mut checks = 0usize;
    for (i, inst) in instances.iter().enumerate() {
        let p = &inst.pattern;
        let ac = Automaton::build(p.subpatterns()).unwrap();
        let mut b = GraphBuilder::new(p).map_err(|e| e.to_string())?;
        let mut violation = None;
        ac.stream(&inst.text, |ev| {
            b.process_event(ev, &mut |_, _| {});
            for layer in 1..p.k() {
                let lists = b.lists(layer).unwrap();
                let bound = dual_list_bound(p, layer).unwrap();
                checks += 1;
                if violation.is_none() && (lists.first_len() > bound || lists.last_len() > bound) {
                    violation = Some(format!(
                        "instance {i}, tau {}: sizes {}/{} > {bound}",
                        ev.position,
                        lists.first_len(),
                        lists.last_len()
                    ));
                }
            }
        });
        if let Some(v) = violation {
            return Err(v);
        }
    }
    Ok(format!("{checks} list checks, no violations"))
}

fn graph_structure(instances: &[Instance]) -> Outcome {
    let mut nodes = 0usize;
    for (i, inst) in instances.iter().enumerate() {
        let p = &inst.pattern;
        let g = build_implicit_gap_graph(p, &inst.text).map_err(|e| e.to_string())?;
        let relevant = oracle::brute_force_relevant(p, &inst.text).map_err(|e| e.to_string())?;
        let edges = oracle::implicit_edges(p, &inst.text).map_err(|e| e.to_string())?;
        for layer in 0..p.k() {
            let got: BTreeSet<usize> = g.nodes(layer).iter().map(|n| n.endpos).collect();
            ensure(got == relevant[layer], || format!("instance {i}: layer {layer} nodes differ"))?;
            for n in g.nodes(layer) {
                nodes += 1;
                ensure(n.out_degree() <= 2, || format!("instance {i}: out-degree {}", n.out_degree()))?;
                if layer == 0 {
                    continue;
                }
                let (first, last) = n.preds.unwrap();
                ensure(edges.get(&(layer, n.endpos)) == Some(&(first, last)), || {
                    format!("instance {i}: edges of ({layer}, {}) differ", n.endpos)
                })?;
                // Every relevant node between first and last is a predecessor.
                let gap = p.gaps()[layer - 1];
                let start = n.endpos + 1 - p.sublen(layer);
                for &x in relevant[layer - 1].range(first..=last) {
                    let ok = x + gap.lower < start && start <= x + gap.upper.unwrap() + 1;
                    ensure(ok, || format!("instance {i}: predecessors of ({layer}, {}) not contiguous", n.endpos))?;
                }
            }
        }
    }
    Ok(format!("{nodes} nodes, out-degree <= 2, predecessor runs contiguous"))
}

fn on_the_fly_space(instances: &[Instance]) -> Outcome {
    let mut worst = 0.0f64;
    for (i, inst) in instances.iter().enumerate() {
        let s = report_on_the_fly(&inst.pattern, &inst.text, |_| {}).map_err(|e| e.to_string())?;
        ensure(s.peak_live_nodes <= s.node_bound, || {
            format!("instance {i}: peak {} > bound {}", s.peak_live_nodes, s.node_bound)
        })?;
        worst = worst.max(s.peak_live_nodes as f64 / s.node_bound as f64);
    }
    Ok(format!("peak/bound at most {worst:.2}"))
}

fn chunked_dedup(instances: &[Instance]) -> Outcome {
    let mut total = 0usize;
    for (i, inst) in instances.iter().enumerate() {
        let p = &inst.pattern;
        let span = p.max_span().unwrap();
        let mut fly = BTreeSet::new();
        report_on_the_fly(p, &inst.text, |c| {
            fly.insert(c.to_vec());
        })
        .map_err(|e| e.to_string())?;
        for len in [span, span + 1, span + 3] {
            let mut seen = BTreeSet::new();
            let mut dup = None;
            report_chunked(p, &inst.text, Some(len), |c| {
                if !seen.insert(c.to_vec()) {
                    dup = Some(c.to_vec());
                }
            })
            .map_err(|e| e.to_string())?;
            ensure(dup.is_none(), || format!("instance {i}, len {len}: duplicate {dup:?}"))?;
            ensure(seen == fly, || format!("instance {i}, len {len}: set differs from on-the-fly"))?;
            total += seen.len();
        }
    }
    // The example text too, where combinations are plentiful.
    let p = combo_pattern();
    let g = build_implicit_gap_graph(&p, EXAMPLE_TEXT).unwrap();
    let mut all = BTreeSet::new();
    expand_combinations(&g, |c| {
        all.insert(c.to_vec());
    });
    let mut count = 0;
    let mut chunked = BTreeSet::new();
    report_chunked(&p, EXAMPLE_TEXT, Some(p.max_span().unwrap()), |c| {
        count += 1;
        chunked.insert(c.to_vec());
    })
    .map_err(|e| e.to_string())?;
    ensure(count == all.len() && chunked == all, || "example text: chunked output differs".into())?;
    Ok(format!("{total} combinations, each reported once"))
}

fn main() -> ExitCode {
    let instances = random_instances(SEED, INSTANCES);
    let criteria: Vec<Criterion> = vec![
        ("example end positions", Box::new(example_endpoints)),
        ("occurrence count", Box::new(occurrence_count)),
        ("range-list trace at 26", Box::new(range_list_trace)),
        ("combinations ending at 17", Box::new(combinations_at_17)),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&instances))),
        ("range-list size bound", Box::new(|| range_list_bounds(&instances))),
        ("dual-list size bound", Box::new(|| dual_list_bounds(&instances))),
        ("implicit graph structure", Box::new(|| graph_structure(&instances))),
        ("on-the-fly node bound", Box::new(|| on_the_fly_space(&instances))),
        ("chunked deduplication", Box::new(|| chunked_dedup(&instances))),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name}: {detail}", n + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {detail}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
