//! Acceptance suite. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wlcovers_core::bundled::{experiment_base, two_triangle_base};
use wlcovers_core::counting::{check_counting_consistency, factorial, hall_count, lower_bound};
use wlcovers_core::cover::tree_canonical;
use wlcovers_core::dataset::{generate_graphcovers, CoverDataset, GenerateConfig};
use wlcovers_core::mp::{indistinguishability_report, FeatureSpec, MPModel, DEFAULT_SEED};
use wlcovers_core::refine::check_decomposition;
use wlcovers_core::{
    build_cover, color_refine, covering_degree, graphs_isomorphic, lift_check,
    rooted_tree_canonical, universal_cover_ball, validate_covering, wl_test, Graph, WlVerdict,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn full(base: &Graph, d: usize) -> Result<CoverDataset, String> {
    generate_graphcovers(base, d, &GenerateConfig::default()).map_err(err)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn dataset_cardinality() -> Outcome {
    let base = experiment_base();
    ensure(base.euler_characteristic() == -1, || {
        "base does not have χ = -1".into()
    })?;
    let mut detail = Vec::new();
    for (d, expected) in [(2, 3), (3, 7)] {
        let (ds, t) = timed(|| full(&base, d));
        let classes = ds?.representatives.len();
        ensure(classes == expected, || {
            format!("d = {d}: {classes} classes, expected {expected}")
        })?;
        ensure(t < Duration::from_secs(1), || format!("d = {d} took {t:?}"))?;
        detail.push(format!("d={d}: {classes} classes in {:.0?}", t));
    }
    Ok(detail.join(", "))
}

fn cover_sizes() -> Outcome {
    let base = experiment_base();
    ensure(base.vertex_count() == 9 && base.edge_count() == 10, || {
        "base is not 9/10".into()
    })?;
    let ds = full(&base, 5)?;
    let mut slowest = Duration::ZERO;
    for rep in &ds.representatives {
        let (cm, t) = timed(|| build_cover(&base, &rep.voltage));
        let cm = cm.map_err(err)?;
        slowest = slowest.max(t);
        let (v, e) = (cm.total.vertex_count(), cm.total.edge_count());
        ensure(v == 45 && e == 50, || {
            format!("class {}: {v} vertices, {e} edges", rep.label)
        })?;
        ensure(covering_degree(&cm).map_err(err)? == 5, || {
            "degree is not 5".into()
        })?;
    }
    ensure(slowest < Duration::from_secs(1), || {
        format!("slowest cover took {slowest:?}")
    })?;
    Ok(format!(
        "{} degree-5 covers, all 45 vertices / 50 edges, slowest build {:.0?}",
        ds.representatives.len(),
        slowest
    ))
}

fn wl_indistinguishability() -> Outcome {
    let base = experiment_base();
    let (res, t) = timed(|| -> Result<usize, String> {
        let mut pairs = 0;
        for d in [2, 3] {
            let ds = full(&base, d)?;
            let reps = &ds.representatives;
            for (i, a) in reps.iter().enumerate() {
                for b in &reps[i + 1..] {
                    ensure(
                        wl_test(a.graph(), b.graph()) == WlVerdict::Equivalent,
                        || format!("d = {d}: classes {} and {} distinguished", a.label, b.label),
                    )?;
                    ensure(
                        graphs_isomorphic(a.graph(), b.graph())
                            .map_err(err)?
                            .is_none(),
                        || format!("d = {d}: classes {} and {} isomorphic", a.label, b.label),
                    )?;
                    pairs += 1;
                }
            }
        }
        Ok(pairs)
    });
    let pairs = res?;
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(format!(
        "{pairs} pairs WL-equivalent and non-isomorphic in {t:.0?}"
    ))
}

fn hall_counts() -> Outcome {
    let (res, t) = timed(|| -> Result<(), String> {
        let n = |d, r| hall_count(d, r).map(|c| c.value).map_err(err);
        for r in 1..=6 {
            ensure(n(1, r)? == BigUint::from(1u32), || format!("N(1,{r}) != 1"))?;
        }
        for (d, r, v) in [(2, 2, 3u32), (3, 2, 13), (2, 3, 7)] {
            let got = n(d, r)?;
            ensure(got == BigUint::from(v), || {
                format!("N({d},{r}) = {got}, expected {v}")
            })?;
        }
        for d in 1..=4 {
            for r in 1..=3 {
                let brute = BigUint::from(transitive_tuples(d, r).len());
                let predicted = factorial(d - 1) * n(d, r)?;
                ensure(brute == predicted, || {
                    format!("d = {d}, r = {r}: {brute} transitive tuples, predicted {predicted}")
                })?;
            }
        }
        Ok(())
    });
    res?;
    ensure(t < Duration::from_secs(30), || format!("took {t:?}"))?;
    Ok(format!(
        "N(1,r)=1, N(2,2)=3, N(3,2)=13, N(2,3)=7, oracle agrees for d<=4, r<=3 ({t:.0?})"
    ))
}

fn counting_inequalities() -> Outcome {
    let base = experiment_base();
    let (res, t) = timed(|| -> Result<Vec<String>, String> {
        let mut lines = Vec::new();
        for (d, dc, n, c, bound) in [(2, 6u32, 3u32, 3u32, 1u32), (3, 21, 13, 7, 2)] {
            let report =
                check_counting_consistency(&base, d, &GenerateConfig::default()).map_err(err)?;
            ensure(report.passed(), || format!("d = {d}: {:?}", report.checks))?;
            let classes = BigUint::from(report.classes);
            ensure(classes == BigUint::from(c), || {
                format!("d = {d}: C = {classes}")
            })?;
            ensure(
                BigUint::from(d * report.classes) == BigUint::from(dc),
                || "d*C".into(),
            )?;
            ensure(report.subgroup_count == BigUint::from(n), || "N".into())?;
            let lb = lower_bound(d, 2).map_err(err)?;
            ensure(lb == BigUint::from(bound), || {
                format!("d = {d}: bound {lb}")
            })?;
            ensure(
                BigUint::from(dc) >= report.subgroup_count && classes >= lb,
                || format!("d = {d}: inequality fails"),
            )?;
            lines.push(format!("{dc}>={n}, {c}>={bound}"));
        }
        Ok(lines)
    });
    let lines = res?;
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    Ok(lines.join("; "))
}

fn property_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let start = Instant::now();

    let mut covers = 0;
    for _ in 0..10 {
        let rank = rng.random_range(1..=3);
        let base = random_rigid_base(&mut rng, 5..=10, rank);
        for _ in 0..20 {
            let d = rng.random_range(1..=6);
            let va = random_voltage(&mut rng, &base, d);
            let cm = build_cover(&base, &va).map_err(err)?;
            ensure(validate_covering(&cm).map_err(err)?.is_valid(), || {
                "invalid cover".into()
            })?;
            ensure(lift_check(&cm).passed(), || {
                format!("lift check failed: {va:?}")
            })?;
            ensure(cm.fibers().iter().all(|f| f.len() == d), || {
                "fiber sizes differ".into()
            })?;
            ensure(cm.total.vertex_count() == d * base.vertex_count(), || {
                "|V(H)|".into()
            })?;
            covers += 1;
        }
    }

    let mut equal_pairs = 0;
    for _ in 0..500 {
        let n = rng.random_range(1..=12);
        let g = random_tree(&mut rng, n);
        let h = if rng.random_bool(0.5) {
            g.relabel(&random_permutation(&mut rng, n))
        } else {
            random_tree(&mut rng, n)
        };
        let same = tree_canonical(&g).map_err(err)? == tree_canonical(&h).map_err(err)?;
        equal_pairs += same as usize;
        ensure(wl_test(&g, &h).is_equivalent() == same, || {
            format!("trees disagree: {:?} vs {:?}", g.edges(), h.edges())
        })?;
    }

    let mut rounds = 0;
    for _ in 0..50 {
        let n = rng.random_range(2..=10);
        let m = rng.random_range(0..=2 * n);
        let g = random_sparse_graph(&mut rng, n, m, 4);
        let trace = color_refine(&g, None).map_err(err)?;
        for (t, coloring) in trace.rounds().iter().enumerate() {
            let codes: Vec<String> = (0..n)
                .map(|v| rooted_tree_canonical(&universal_cover_ball(&g, v, t)))
                .collect();
            for u in 0..n {
                for v in 0..n {
                    ensure(
                        (coloring.get(u) == coloring.get(v)) == (codes[u] == codes[v]),
                        || format!("round {t}: vertices {u}, {v} of {:?}", g.edges()),
                    )?;
                }
            }
            rounds += 1;
        }
    }

    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!(
        "{covers} covers lift, 500 tree pairs ({equal_pairs} isomorphic), {rounds} ball rounds, {t:.0?}"
    ))
}

fn embedding_surrogate() -> Outcome {
    let (res, t) = timed(|| -> Result<String, String> {
        let config = GenerateConfig {
            max_classes: Some(3),
            ..Default::default()
        };
        let ds = generate_graphcovers(&experiment_base(), 5, &config).map_err(err)?;
        let graphs: Vec<Graph> = ds
            .representatives
            .iter()
            .map(|r| r.graph().clone())
            .collect();
        ensure(graphs.len() == 3, || format!("{} covers", graphs.len()))?;
        let mut parts = Vec::new();
        for (fs, expect) in [
            (FeatureSpec::Constant, true),
            (FeatureSpec::Degree, true),
            (FeatureSpec::OneHotId, false),
        ] {
            let model = MPModel::default_for(fs, &graphs[0], DEFAULT_SEED);
            let r = indistinguishability_report(&graphs, fs, &model, 1e-6).map_err(err)?;
            let max = r.distances.iter().flatten().cloned().fold(0.0, f64::max);
            ensure(r.indistinguishable == expect, || {
                format!("{fs:?}: max distance {max:e}")
            })?;
            parts.push(format!(
                "{fs:?} max {max:.1e} acc {:.2}",
                r.predicted_accuracy
            ));
        }
        Ok(parts.join(", "))
    });
    let detail = res?;
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(detail)
}

fn disconnected_case() -> Outcome {
    let (res, t) = timed(|| -> Result<(usize, usize), String> {
        let two = union_all(&[Graph::cycle(3), Graph::cycle(3)]);
        ensure(check_decomposition(&Graph::cycle(6), &two).passed(), || {
            "C6 vs 2C3".into()
        })?;

        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let bases = [experiment_base(), two_triangle_base()];
        let cover = |rng: &mut ChaCha8Rng, b: usize, d: usize| {
            build_cover(&bases[b], &random_voltage(rng, &bases[b], d)).map(|c| c.total)
        };
        let (mut positives, mut negatives) = (0, 0);
        for _ in 0..20 {
            // split a total degree per base into random parts on each side
            let mut left = Vec::new();
            let mut right = Vec::new();
            for b in 0..2 {
                let total = rng.random_range(1..=4);
                for side in [&mut left, &mut right] {
                    let mut rest = total;
                    while rest > 0 {
                        let d = rng.random_range(1..=rest);
                        side.push(cover(&mut rng, b, d).map_err(err)?);
                        rest -= d;
                    }
                }
            }
            let (g, h) = (union_all(&left), union_all(&right));
            ensure(check_decomposition(&g, &h).passed(), || {
                "union of covers rejected".into()
            })?;
            ensure(wl_test(&g, &h).is_equivalent(), || {
                "union of covers distinguished".into()
            })?;
            positives += 1;

            // same total order, but the per-base degrees are swapped
            let (p, q) = (rng.random_range(1..=3), rng.random_range(4..=6));
            let g = union_all(&[
                cover(&mut rng, 0, p).map_err(err)?,
                cover(&mut rng, 1, q).map_err(err)?,
            ]);
            let h = union_all(&[
                cover(&mut rng, 0, q).map_err(err)?,
                cover(&mut rng, 1, p).map_err(err)?,
            ]);
            ensure(g.vertex_count() == h.vertex_count(), || {
                "orders differ".into()
            })?;
            let report = check_decomposition(&g, &h);
            ensure(!report.passed(), || "order-mismatched pair accepted".into())?;
            ensure(!wl_test(&g, &h).is_equivalent(), || {
                "order-mismatched pair equivalent".into()
            })?;
            negatives += 1;
        }
        Ok((positives, negatives))
    });
    let (p, n) = res?;
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok(format!(
        "C6 vs 2C3 passes, {p} random unions pass, {n} mismatched fail ({t:.0?})"
    ))
}

fn growth_sanity() -> Outcome {
    let base = experiment_base();
    let (ds, t) = timed(|| full(&base, 4));
    let ds = ds?;
    ensure(t < Duration::from_secs(10), || format!("took {t:?}"))?;
    ensure(ds.stats.scanned == 576, || {
        format!("scanned {}", ds.stats.scanned)
    })?;
    let oracle = conjugacy_classes_of_transitive_tuples(4, 2);
    let classes = ds.representatives.len();
    ensure(classes == oracle, || {
        format!("{classes} classes, oracle {oracle}")
    })?;
    let predicted = factorial(3) * hall_count(4, 2).map_err(err)?.value;
    ensure(BigUint::from(ds.stats.connected) == predicted, || {
        format!(
            "{} connected tuples, predicted {predicted}",
            ds.stats.connected
        )
    })?;
    Ok(format!(
        "576 tuples in {t:.0?}, {classes} classes = oracle, {} connected = 3!*N(4,2)",
        ds.stats.connected
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("dataset cardinality", dataset_cardinality),
        ("cover sizes", cover_sizes),
        ("WL indistinguishability", wl_indistinguishability),
        ("Hall counts", hall_counts),
        ("counting inequalities", counting_inequalities),
        ("property suite", property_suite),
        ("embedding surrogate", embedding_surrogate),
        ("disconnected case", disconnected_case),
        ("growth sanity", growth_sanity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
