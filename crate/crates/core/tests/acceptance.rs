//! Acceptance criteria, one line each. Run with
//! `cargo test -p sweeplab --test acceptance`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sweeplab::bisect::{bisec_exact, bisect_by_bites, bisection_bound, symmetry_group, SymmetryGroup};
use sweeplab::cobordism::{
    cover_bound_data, cover_graph, lifted_bound, lifted_sweepout, stabilization_budget, token_game, Cover,
    IntersectionGraph, LabelledEdge, ReleasePolicy,
};
use sweeplab::folner::{
    check_quotient_monotone, profile_auto, profile_exact_with, AnalyticProfile, ExactOptions, Ratio,
};
use sweeplab::graph::{gradient_total, Graph, VertexFunction, VertexSet};
use sweeplab::groups::{
    catalog_actions, catalog_maps, make_family, pushforward, quotient_cosets, schreier_graph, CosetAction, Family,
    FamilyKind,
};
use sweeplab::sweepout::{
    approx, cutwidth_exact, folsw_bound, loglog_slope, subextensive_series, sweepout_recursive, SeriesOptions, Sweepout,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn setup(fam: &Family) -> (CosetAction, Graph, SymmetryGroup) {
    let action = make_family(fam).unwrap();
    let g = schreier_graph(&action);
    let q = symmetry_group(&action, 100_000, 0);
    (action, g, q)
}

fn anchored(budget: u64) -> ExactOptions {
    ExactOptions { budget, anchor: Some(0), within: None }
}

fn cycle_width() -> Outcome {
    for n in 3..=256 {
        let g = schreier_graph(&make_family(&Family::Cyclic(n)).unwrap());
        let s = Sweepout::new(&g, (0..n).collect()).unwrap();
        ensure(s.width_edge() == 2, || format!("natural sweepout of C{n} has width {}", s.width_edge()))?;
        if n <= 20 {
            let (w, _) = cutwidth_exact(&g).map_err(|e| e.to_string())?;
            ensure(w == 2, || format!("cutwidth of C{n} is {w}"))?;
        }
    }
    Ok("n = 3..256 natural width 2; exact cutwidth 2 for n ≤ 20".into())
}

fn quotient_monotone() -> Outcome {
    let pairs = catalog_maps(24);
    ensure(pairs.len() >= 10, || format!("only {} catalog pairs", pairs.len()))?;
    let mut rows = 0;
    for (fine, coarse) in &pairs {
        let map = quotient_cosets(&make_family(fine).unwrap(), &make_family(coarse).unwrap()).map_err(|e| e.to_string())?;
        let v_max = map.source().coset_count();
        let found = check_quotient_monotone(&map, v_max, &anchored(200_000_000))
            .map_err(|e| format!("{fine} → {coarse}: {e}"))?;
        rows += found.len();
    }
    Ok(format!("{} maps, {rows} (map, V) checks, all super-level scans succeeded", pairs.len()))
}

fn pushdown() -> Outcome {
    let pairs = catalog_maps(24);
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for (fine, coarse) in &pairs {
        let (src, tgt) = (make_family(fine).unwrap(), make_family(coarse).unwrap());
        let map = quotient_cosets(&src, &tgt).map_err(|e| e.to_string())?;
        let (gs, gt) = (schreier_graph(&src), schreier_graph(&tgt));
        let n = src.coset_count();
        for _ in 0..1000 {
            let density = rng.random_range(0.05..1.0);
            let f = VertexFunction(
                (0..n).map(|_| if rng.random_bool(density) { rng.random_range(-6..=6) } else { 0 }).collect(),
            );
            let up = gradient_total(&gs, &f).unwrap();
            let down = gradient_total(&gt, &pushforward(&map, &f).unwrap()).unwrap();
            ensure(down <= up, || format!("{fine} → {coarse}: {down} > {up} for {:?}", f.0))?;
        }
    }
    Ok(format!("{} maps × 1000 functions", pairs.len()))
}

fn bisection_bounds() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let families = catalog_actions(16);
    let mut checks = 0;
    for fam in &families {
        let (action, g, q) = setup(fam);
        let n = action.coset_count();
        if n < 4 {
            continue;
        }
        ensure(q.guarantees(), || format!("{fam}: symmetry group not exact and transitive"))?;
        let profile = profile_exact_with(&g, n, &anchored(100_000_000)).map_err(|e| e.to_string())?;
        let mut sets = vec![VertexSet::full(n)];
        while sets.len() < 201 {
            let k = rng.random_range(4..=n);
            let mut vs: Vec<usize> = (0..n).collect();
            vs.shuffle(&mut rng);
            sets.push(VertexSet::from_vertices(n, vs[..k].iter().copied()).unwrap());
        }
        for a in &sets {
            let bound = bisection_bound(&profile, a.len());
            let exact = bisec_exact(&g, a).map_err(|e| e.to_string())?;
            ensure(Ratio::from_integer(exact.cut_size() as u64) <= bound, || {
                format!("{fam}: Bisec = {} > {bound} on {:?}", exact.cut_size(), a.to_vec())
            })?;
            let bites = bisect_by_bites(&g, a, &profile, &q).map_err(|e| format!("{fam}: {e}"))?;
            ensure(bites.is_balanced() && bites.b1.union(&bites.b2) == *a, || format!("{fam}: bad split"))?;
            ensure(Ratio::from_integer(bites.cut_size() as u64) <= bound, || {
                format!("{fam}: bite bisection cut {} > {bound}", bites.cut_size())
            })?;
            checks += 1;
        }
    }
    Ok(format!("{} actions, {checks} sets", families.len()))
}

fn recursion_bound() -> Outcome {
    let mut instances: Vec<Family> = (4..=64).map(Family::Cyclic).collect();
    instances.extend((2..=8).map(|n| Family::Torus { dim: 2, n }));
    for fam in &instances {
        let (_, g, q) = setup(fam);
        let n = g.vertex_count();
        let need = 3 * n / 16;
        let profile = profile_auto(&g, n / 2, need, &anchored(200_000_000), 0).map_err(|e| e.to_string())?;
        ensure(profile.exact_through() >= need, || format!("{fam}: profile exact only through {}", profile.exact_through()))?;
        let rec = sweepout_recursive(&g, &VertexSet::full(n), &profile, &q).map_err(|e| format!("{fam}: {e}"))?;
        let w = rec.sweepout.width_edge();
        let bound = folsw_bound(&profile, n);
        ensure(BigRational::from_integer(BigInt::from(w)) <= bound, || {
            format!("{fam}: width {w} above series bound {}", approx(&bound))
        })?;
        if n <= 20 {
            let (oracle, _) = cutwidth_exact(&g).map_err(|e| e.to_string())?;
            ensure(oracle <= w, || format!("{fam}: oracle {oracle} above constructive {w}"))?;
        }
    }
    Ok(format!("{} instances, every assembly checked", instances.len()))
}

fn subextensive() -> Outcome {
    let opts = SeriesOptions::default();
    let mut notes = Vec::new();
    for (kind, params) in [
        (FamilyKind::Cyclic, vec![8, 16, 32, 64, 128, 256]),
        (FamilyKind::Torus(2), vec![4, 8, 12, 16, 20, 24]),
    ] {
        let rows = subextensive_series(kind, &params, &opts).map_err(|e| e.to_string())?;
        let ratios: Vec<f64> = rows.iter().map(|r| r.width_over_size).collect();
        let (first, last) = (ratios[0], ratios[ratios.len() - 1]);
        ensure(last <= 0.25 * first, || format!("{kind:?}: ratios {ratios:?}"))?;
        ensure(ratios.windows(2).all(|w| w[1] <= w[0]), || format!("{kind:?}: not non-increasing {ratios:?}"))?;
        let widths: Vec<usize> = rows.iter().map(|r| r.width_constructive).collect();
        notes.push(format!("{kind:?} widths {widths:?}"));
    }
    Ok(notes.join("; "))
}

fn labelled(red: usize, blue: usize, word: &[&str]) -> LabelledEdge {
    LabelledEdge { red, blue, word: word.iter().map(|s| s.to_string()).collect() }
}

/// Synthetic intersection graphs paired with the actions they are lifted to.
fn synthetic_covers() -> Vec<(String, IntersectionGraph, CosetAction)> {
    let mut out = Vec::new();
    let mut push = |name: &str, base: IntersectionGraph, fam: Family| {
        out.push((format!("{name} over {fam}"), base, make_family(&fam).unwrap()));
    };
    let single = IntersectionGraph::new(1, 1, vec![labelled(0, 0, &[])]).unwrap();
    let twisted = IntersectionGraph::new(1, 1, vec![labelled(0, 0, &[]), labelled(0, 0, &["a"])]).unwrap();
    let long = IntersectionGraph::new(
        2,
        2,
        vec![labelled(0, 0, &[]), labelled(0, 1, &["a", "a"]), labelled(1, 1, &["A"]), labelled(1, 0, &[])],
    )
    .unwrap();
    let grid = IntersectionGraph::new(2, 1, vec![labelled(0, 0, &["e0"]), labelled(1, 0, &["e1"]), labelled(0, 0, &[])])
        .unwrap();
    let mixed = IntersectionGraph::new(
        3,
        2,
        vec![
            labelled(0, 0, &[]),
            labelled(1, 0, &["e0", "e1"]),
            labelled(1, 1, &["E1"]),
            labelled(2, 1, &[]),
            labelled(2, 0, &["E0"]),
        ],
    )
    .unwrap();
    for n in [3, 5, 8, 10] {
        push("single", single.clone(), Family::Cyclic(n));
        push("twisted", twisted.clone(), Family::Cyclic(n));
    }
    for n in [3, 5, 9] {
        push("long", long.clone(), Family::Cyclic(n));
    }
    for n in [2, 3, 4] {
        push("grid", grid.clone(), Family::Torus { dim: 2, n });
        push("mixed", mixed.clone(), Family::Torus { dim: 2, n });
    }
    push("twisted", twisted, Family::Cyclic(1));
    out
}

fn coset_sweepouts(action: &CosetAction) -> Vec<Sweepout> {
    let g = schreier_graph(action);
    let n = g.vertex_count();
    let mut out = vec![Sweepout::new(&g, (0..n).collect()).unwrap()];
    if n <= 20 {
        out.push(cutwidth_exact(&g).unwrap().1);
    }
    out
}

fn lifted_widths() -> Outcome {
    let covers = synthetic_covers();
    let mut checked = 0;
    for (name, base, action) in &covers {
        let cover = cover_graph(base, action).map_err(|e| e.to_string())?;
        ensure(cover.graph.vertex_count() == base.vertex_count() * action.coset_count(), || format!("{name}: vertex count"))?;
        ensure(cover.graph.edge_count() == base.edges().len() * action.coset_count(), || format!("{name}: edge count"))?;
        for s in coset_sweepouts(action) {
            let w = s.width_vertex();
            let data = cover_bound_data(base, action, &cover, w);
            let lifted = lifted_sweepout(base, &cover, &s).map_err(|e| e.to_string())?;
            let bound = lifted_bound(&data, w);
            ensure(lifted.width_vertex() as u128 <= bound, || {
                format!("{name}: lifted width {} > {bound}", lifted.width_vertex())
            })?;
            if cover.graph.vertex_count() <= 20 {
                let (cw, _) = cutwidth_exact(&cover.graph).map_err(|e| e.to_string())?;
                ensure(cw as u128 <= bound, || format!("{name}: cover cutwidth {cw} > {bound}"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{} covers, {checked} lifted sweepouts", covers.len()))
}

fn play(cover: &Cover, s: &Sweepout) -> Result<(), String> {
    let k = cover.graph.max_degree().max(1);
    let w = s.width_vertex();
    let m = stabilization_budget(k, w).m;
    let trace = token_game(&cover.graph, &cover.blue, s, k, m, ReleasePolicy::LeavingBoundary).map_err(|e| e.to_string())?;
    ensure(trace.success(), || format!("ran out of tokens at step {:?}", trace.failed_at))?;
    let cap = (k * k * w) as u128;
    ensure(trace.max_attached <= cap, || format!("attached {} > k²w = {cap}", trace.max_attached))
}

fn tokens() -> Outcome {
    let covers = synthetic_covers();
    for (name, base, action) in &covers {
        let cover = cover_graph(base, action).map_err(|e| e.to_string())?;
        for s in coset_sweepouts(action) {
            let lifted = lifted_sweepout(base, &cover, &s).map_err(|e| e.to_string())?;
            play(&cover, &lifted).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for trial in 0..500 {
        let n = rng.random_range(2..=16);
        let blue: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let reds: Vec<usize> = (0..n).filter(|&v| !blue[v]).collect();
        let blues: Vec<usize> = (0..n).filter(|&v| blue[v]).collect();
        let mut edges = Vec::new();
        if !reds.is_empty() && !blues.is_empty() {
            for _ in 0..rng.random_range(0..=2 * n) {
                edges.push((*reds.choose(&mut rng).unwrap(), *blues.choose(&mut rng).unwrap()));
            }
        }
        let graph = Graph::new(n, edges).unwrap();
        let (_, oracle) = cutwidth_exact(&graph).map_err(|e| e.to_string())?;
        let cover = Cover { graph, blue, coset_count: 1 };
        play(&cover, &oracle).map_err(|e| format!("random trial {trial}: {e}"))?;
    }
    Ok(format!("{} covers and 500 random bipartite graphs", covers.len()))
}

fn brute_cutwidth(n: usize, edges: &[(usize, usize)]) -> usize {
    fn rec(order: &mut Vec<usize>, used: &mut [bool], edges: &[(usize, usize)], best: &mut usize) {
        let n = used.len();
        if order.len() == n {
            let mut pos = vec![0; n];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            let w = (1..n)
                .map(|j| edges.iter().filter(|&&(u, v)| u != v && (pos[u] < j) != (pos[v] < j)).count())
                .max()
                .unwrap_or(0);
            *best = (*best).min(w);
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                order.push(v);
                rec(order, used, edges, best);
                order.pop();
                used[v] = false;
            }
        }
    }
    let mut best = usize::MAX;
    rec(&mut Vec::new(), &mut vec![false; n], edges, &mut best);
    best
}

fn dp_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for trial in 0..200 {
        let n = rng.random_range(1..=8);
        let m = rng.random_range(0..=3 * n);
        let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.random_range(0..n), rng.random_range(0..n))).collect();
        let g = Graph::new(n, edges.clone()).unwrap();
        let (dp, s) = cutwidth_exact(&g).map_err(|e| e.to_string())?;
        let brute = brute_cutwidth(n, &edges);
        ensure(dp == brute && s.width_edge() == dp, || format!("trial {trial}: dp {dp}, brute force {brute}"))?;
    }
    Ok("200 random graphs with n ≤ 8".into())
}

fn decay_rate() -> Outcome {
    let p = AnalyticProfile { dim: 2 };
    let points: Vec<(f64, f64)> = (3..=12)
        .map(|k| {
            let size = 4usize.pow(k);
            (size as f64, approx(&folsw_bound(&p, size)) - 6.0)
        })
        .collect();
    let slope = loglog_slope(&points);
    ensure((slope - 0.5).abs() <= 0.1, || format!("slope {slope:.4}"))?;
    Ok(format!("slope {slope:.4} over sizes 4^3..4^12"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("cycle width", Duration::from_secs(5), cycle_width),
        ("quotient monotonicity", Duration::from_secs(120), quotient_monotone),
        ("pushdown", Duration::from_secs(30), pushdown),
        ("bisection bound", Duration::from_secs(300), bisection_bounds),
        ("recursive sweepout", Duration::from_secs(300), recursion_bound),
        ("subextensivity", Duration::from_secs(600), subextensive),
        ("lifted width", Duration::from_secs(120), lifted_widths),
        ("token game", Duration::from_secs(120), tokens),
        ("cutwidth oracle", Duration::from_secs(60), dp_oracle),
        ("decay rate", Duration::from_secs(1), decay_rate),
    ];
    let mut failures = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if elapsed <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; took longer than {limit:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {:>2} {status} {name} ({:.2?}): {detail}", i + 1, elapsed);
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
