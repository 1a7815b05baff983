//! Acceptance gate: one test per numbered criterion, each printing a single
//! PASS/FAIL line with its runtime. A criterion fails if any sub-check or
//! its time budget fails; the assertion message lists every failed
//! sub-check.

use std::time::{Duration, Instant};

use metricfix_core::derived::{chain_metric, path_metric, reparametrize, path_length, path_length_sub};
use metricfix_core::games::{
    CertifyParams, CertifyCondition, DynamicsMetric, DEFAULT_TIE_TOL,
};
use metricfix_core::gen::{
    cloud_space, contraction_pair, contractive_instance, quadratic_game, random_path,
    random_subset, seeded_rng, table_game,
};
use metricfix_core::hausdorff::{hausdorff_distance, hausdorff_via_expansion};
use metricfix_core::setvalued::{
    compose, fixed_points_exhaustive, global_modulus, image_path_length, is_shrinking,
    local_certificate, periodic_point_search, pointwise_certificate, solve_fixed_point,
    NeighborhoodSpec, SolveOutcome,
};
use metricfix_core::space::{validate_metric, DEFAULT_PRODUCT_CAP};
use metricfix_core::{FiniteMetricSpace, MetricView, PointSet, SetValuedMap};

fn conclude(num: u32, name: &str, started: Instant, budget: Duration, mut failures: Vec<String>) {
    let elapsed = started.elapsed();
    if elapsed >= budget {
        failures.push(format!(
            "runtime {:.2?} exceeded the {:.0?} budget",
            elapsed, budget
        ));
    }
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "criterion {:>2}: {} - {} ({:.2?})",
        num, status, name, elapsed
    );
    assert!(
        failures.is_empty(),
        "criterion {} failed:\n  {}",
        num,
        failures.join("\n  ")
    );
}

fn all_nonempty_subsets(n: usize) -> Vec<PointSet> {
    (1u32..(1 << n))
        .map(|mask| {
            PointSet::new((0..n).filter(|i| mask & (1 << i) != 0), n).unwrap()
        })
        .collect()
}

#[test]
fn criterion_01_hausdorff_dual_formulation() {
    let started = Instant::now();
    let mut failures = Vec::new();
    // exhaustive over every subset pair of small spaces
    for n in 1..=6usize {
        for seed in 0..3u64 {
            let s = cloud_space(1000 + 10 * seed + n as u64, n, 2).unwrap();
            let m = MetricView::Base(&s);
            let subsets = all_nonempty_subsets(n);
            for a in &subsets {
                for b in &subsets {
                    let primal = hausdorff_distance(a, b, &m);
                    let dual = hausdorff_via_expansion(a, b, &m);
                    if primal != dual {
                        failures.push(format!(
                            "n={} seed={} subsets {:?}/{:?}: {:?} vs {:?}",
                            n, seed, a.members(), b.members(), primal, dual
                        ));
                    }
                }
            }
        }
    }
    // seeded random pairs on larger spaces
    let mut rng = seeded_rng(20_001);
    for trial in 0..1000u32 {
        let s = cloud_space(30_000 + (trial as u64 % 10), 30, 3).unwrap();
        let m = MetricView::Base(&s);
        let a = random_subset(&mut rng, 30);
        let b = random_subset(&mut rng, 30);
        let primal = hausdorff_distance(&a, &b, &m);
        let dual = hausdorff_via_expansion(&a, &b, &m);
        if primal != dual {
            failures.push(format!("trial {}: {:?} vs {:?}", trial, primal, dual));
        }
    }
    conclude(
        1,
        "Hausdorff sup-inf and expansion-radius routes agree exactly",
        started,
        Duration::from_secs(10),
        failures,
    );
}

#[test]
fn criterion_02_hausdorff_metric_axioms() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let tol = 1e-12;
    for seed in 0..3u64 {
        let s = cloud_space(500 + seed, 5, 2).unwrap();
        let m = MetricView::Base(&s);
        let subsets = all_nonempty_subsets(5);
        for a in &subsets {
            for b in &subsets {
                let h_ab = hausdorff_distance(a, b, &m).unwrap();
                let h_ba = hausdorff_distance(b, a, &m).unwrap();
                if h_ab != h_ba {
                    failures.push(format!("symmetry: {:?} {:?}", a.members(), b.members()));
                }
                let zero = h_ab == 0.0;
                if zero != (a == b) {
                    failures.push(format!(
                        "identity: H={} for {:?} {:?}",
                        h_ab, a.members(), b.members()
                    ));
                }
            }
        }
        for a in &subsets {
            for b in &subsets {
                let h_ab = hausdorff_distance(a, b, &m).unwrap();
                for c in &subsets {
                    let h_bc = hausdorff_distance(b, c, &m).unwrap();
                    let h_ac = hausdorff_distance(a, c, &m).unwrap();
                    if h_ac > h_ab + h_bc + tol {
                        failures.push(format!(
                            "triangle: {:?} {:?} {:?} excess {}",
                            a.members(), b.members(), c.members(),
                            h_ac - h_ab - h_bc
                        ));
                    }
                }
            }
        }
    }
    conclude(
        2,
        "Hausdorff distance satisfies the metric axioms on all 5-point subset triples",
        started,
        Duration::from_secs(60),
        failures,
    );
}

/// Scale at a distance quantile so graph density varies across seeds.
fn quantile_scale(s: &FiniteMetricSpace, q: f64) -> f64 {
    let n = s.len();
    let mut ds: Vec<f64> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .map(|(i, j)| s.dist(i, j))
        .collect();
    ds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let k = ((ds.len() - 1) as f64 * q).round() as usize;
    ds[k]
}

#[test]
fn criterion_03_chain_metric_dominates_and_validates() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let n = 5 + (seed as usize * 7) % 96;
        let s = cloud_space(40_000 + seed, n, 2).unwrap();
        let q = [0.25, 0.5, 0.75][(seed % 3) as usize];
        let r = quantile_scale(&s, q);
        if !(r > 0.0) {
            failures.push(format!("seed {}: degenerate scale", seed));
            continue;
        }
        let dc = chain_metric(&s, r).unwrap();
        for i in 0..n {
            for j in 0..n {
                let d = s.dist(i, j);
                match dc.lookup(i, j) {
                    Some(v) => {
                        if v < d {
                            failures.push(format!(
                                "seed {} ({},{}): chain {} below base {}",
                                seed, i, j, v, d
                            ));
                        }
                        if d < r && v != d {
                            failures.push(format!(
                                "seed {} ({},{}): short pair not preserved: {} vs {}",
                                seed, i, j, v, d
                            ));
                        }
                    }
                    None => {
                        if d < r {
                            failures.push(format!(
                                "seed {} ({},{}): short pair unreachable",
                                seed, i, j
                            ));
                        }
                    }
                }
            }
        }
        // the chain table restricted to each component is itself a metric
        let classes = metricfix_core::space::components_at_scale(&s, r).unwrap();
        for class in classes {
            if class.len() < 2 {
                continue;
            }
            let labels: Vec<String> = class.iter().map(|&i| format!("q{}", i)).collect();
            let table: Vec<Vec<f64>> = class
                .iter()
                .map(|&i| class.iter().map(|&j| dc.lookup(i, j).unwrap()).collect())
                .collect();
            let sub = FiniteMetricSpace::from_table(labels, table).unwrap();
            let report = validate_metric(&sub, 1e-9);
            if !report.passed {
                failures.push(format!(
                    "seed {}: component metric violations {:?}",
                    seed, report.violations
                ));
            }
        }
    }
    conclude(
        3,
        "chain metric dominates the base metric, preserves short pairs, and stays a metric per component",
        started,
        Duration::from_secs(30),
        failures,
    );
}

#[test]
fn criterion_04_chain_path_coincidence() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let n = 5 + (seed as usize * 5) % 56;
        let s = cloud_space(50_000 + seed, n, 2).unwrap();
        let q = [0.2, 0.4, 0.6, 0.8][(seed % 4) as usize];
        let r = quantile_scale(&s, q);
        if !(r > 0.0) {
            continue;
        }
        let dc = chain_metric(&s, r).unwrap();
        let dp = path_metric(&s, r).unwrap();
        for i in 0..n {
            for j in 0..n {
                if dc.lookup(i, j) != dp.lookup(i, j) {
                    failures.push(format!(
                        "seed {} ({},{}): {:?} vs {:?}",
                        seed, i, j, dc.lookup(i, j), dp.lookup(i, j)
                    ));
                }
            }
        }
    }
    conclude(
        4,
        "chain and path metrics at equal scales produce identical tables",
        started,
        Duration::from_secs(30),
        failures,
    );
}

#[test]
fn criterion_05_composition_modulus_bound() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..200u64 {
        let (space, f, g) = contraction_pair(60_000 + seed);
        let m = MetricView::Base(&space);
        let bf = global_modulus(&f, &m);
        let bg = global_modulus(&g, &m);
        if !bf.holds || !bg.holds {
            failures.push(format!("seed {}: generated pair is not contractive", seed));
            continue;
        }
        let h = compose(&f, &g).unwrap();
        let bh = global_modulus(&h, &m);
        if bh.modulus > bf.modulus * bg.modulus + 1e-9 {
            failures.push(format!(
                "seed {}: composed modulus {} exceeds {} * {} + 1e-9",
                seed, bh.modulus, bf.modulus, bg.modulus
            ));
        }
    }
    conclude(
        5,
        "composition modulus stays within the product of the factor moduli",
        started,
        Duration::from_secs(30),
        failures,
    );
}

#[test]
fn criterion_06_local_contraction_existence_and_convergence() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let inst = contractive_instance(70_000 + seed, seed % 2 == 1);
        let m = MetricView::Base(&inst.space);
        let n = inst.space.len();
        let (chainable, _) =
            metricfix_core::space::is_r_chainable(&inst.space, inst.chain_scale).unwrap();
        if !chainable {
            failures.push(format!("seed {}: instance not chainable", seed));
            continue;
        }
        let cert = local_certificate(&inst.map, &m, inst.chain_scale).unwrap();
        if !cert.holds || cert.modulus > 0.9 {
            failures.push(format!(
                "seed {}: local certificate modulus {} (holds={})",
                seed, cert.modulus, cert.holds
            ));
            continue;
        }
        let beta = cert.modulus;
        if fixed_points_exhaustive(&inst.map).is_empty() {
            failures.push(format!("seed {}: no fixed point", seed));
        }
        for x0 in 0..n {
            let trace = solve_fixed_point(&inst.map, &m, x0, n).unwrap();
            match trace.outcome {
                SolveOutcome::FixedPoint { .. } => {}
                other => {
                    failures.push(format!("seed {} start {}: {:?}", seed, x0, other));
                    continue;
                }
            }
            if trace.steps() > n {
                failures.push(format!(
                    "seed {} start {}: {} steps on {} points",
                    seed, x0, trace.steps(), n
                ));
            }
            for k in 0..trace.iterates.len() - 1 {
                let step = inst.space.dist(trace.iterates[k], trace.iterates[k + 1]);
                let gap_next = trace.gaps[k + 1].unwrap();
                if gap_next > beta * step + 1e-12 {
                    failures.push(format!(
                        "seed {} start {} step {}: gap {} > {} * {} + 1e-12",
                        seed, x0, k, gap_next, beta, step
                    ));
                }
            }
        }
    }
    conclude(
        6,
        "chainable spaces with local contractions have fixed points reached with contracting gaps",
        started,
        Duration::from_secs(60),
        failures,
    );
}

#[test]
fn criterion_07_periodic_point_for_the_cluster_swap() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let labels = (0..6).map(|i| format!("c{}", i)).collect();
    let coords: Vec<Vec<f64>> = [0.0, 1.0, 3.0, 10.0, 11.0, 13.0]
        .iter()
        .map(|&v| vec![v])
        .collect();
    let space = FiniteMetricSpace::from_coords(labels, &coords).unwrap();
    let swap = SetValuedMap::from_function(&[3, 3, 4, 0, 0, 1]).unwrap();
    if !fixed_points_exhaustive(&swap).is_empty() {
        failures.push("swap map unexpectedly has a fixed point".to_string());
    }
    match periodic_point_search(&swap, 4).unwrap() {
        Some(hit) => {
            if hit.period != 2 {
                failures.push(format!("found period {} instead of 2", hit.period));
            }
            let f2 = compose(&swap, &swap).unwrap();
            if !f2.image(hit.point).contains(hit.point) {
                failures.push(format!("reported point {} is not 2-periodic", hit.point));
            }
        }
        None => failures.push("no periodic point found up to period 4".to_string()),
    }
    let _ = &space;
    conclude(
        7,
        "the cluster swap has no fixed point but a period-2 point of the square",
        started,
        Duration::from_secs(1),
        failures,
    );
}

#[test]
fn criterion_08_image_path_length_bound() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..200u64 {
        let inst = contractive_instance(80_000 + seed, seed % 3 == 0);
        let m = MetricView::Base(&inst.space);
        let n = inst.space.len();
        let cert = pointwise_certificate(&inst.map, &m, NeighborhoodSpec::Knn(n - 1)).unwrap();
        if !cert.holds {
            failures.push(format!("seed {}: certificate does not hold", seed));
            continue;
        }
        let beta = cert.modulus;
        let p = random_path(90_000 + seed, n, 8).unwrap();
        let lp = path_length(&inst.space, &p);
        let lfp = image_path_length(&inst.map, &p, &m).unwrap();
        if lfp > beta * lp + 1e-9 {
            failures.push(format!(
                "seed {}: image length {} > {} * {} + 1e-9",
                seed, lfp, beta, lp
            ));
        }
    }
    conclude(
        8,
        "image paths are at most the certified modulus times as long",
        started,
        Duration::from_secs(30),
        failures,
    );
}

#[test]
fn criterion_09_shrinking_under_the_path_view() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..100u64 {
        let inst = contractive_instance(100_000 + seed, seed % 2 == 0);
        let base = MetricView::Base(&inst.space);
        let cert =
            pointwise_certificate(&inst.map, &base, NeighborhoodSpec::Radius(inst.chain_scale))
                .unwrap();
        if !cert.holds || !cert.isolated.is_empty() {
            failures.push(format!(
                "seed {}: pointwise certificate failed (holds={}, isolated={:?})",
                seed, cert.holds, cert.isolated
            ));
            continue;
        }
        let pm = path_metric(&inst.space, inst.chain_scale).unwrap();
        let shrink = is_shrinking(&inst.map, &MetricView::Derived(&pm));
        if !shrink.holds {
            failures.push(format!(
                "seed {}: not shrinking under the path view (modulus {})",
                seed, shrink.modulus
            ));
        }
        if !shrink.unevaluable.is_empty() {
            failures.push(format!(
                "seed {}: {} pairs unreachable at the chain scale",
                seed,
                shrink.unevaluable.len()
            ));
        }
    }
    conclude(
        9,
        "pointwise contractions shrink under the path metric at the chain scale",
        started,
        Duration::from_secs(60),
        failures,
    );
}

#[test]
fn criterion_10_quadratic_nash_regression() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let game = quadratic_game(0.25, 0.5, 0.05).unwrap();
    let nash = game.nash_enumerate(DEFAULT_TIE_TOL, DEFAULT_PRODUCT_CAP).unwrap();
    // the analytic fixed point 0.25/(1-0.5) lies on the grid at index 10
    if !nash.contains(&vec![10, 10]) {
        failures.push(format!("analytic profile (0.5, 0.5) missing from {:?}", nash));
    }
    if nash != vec![vec![10, 10]] {
        failures.push(format!(
            "equilibrium not unique: found {} profiles {:?}",
            nash.len(),
            nash
        ));
    }
    let mut non_converging = 0;
    let mut too_long = 0;
    for a in 0..21 {
        for b in 0..21 {
            let run = game
                .nash_via_dynamics(&[a, b], DEFAULT_TIE_TOL, 25, DynamicsMetric::Base,
                    DEFAULT_PRODUCT_CAP)
                .unwrap();
            match run.trace.outcome {
                SolveOutcome::FixedPoint { .. } => {
                    if run.trace.steps() > 25 {
                        too_long += 1;
                    }
                }
                _ => non_converging += 1,
            }
        }
    }
    if non_converging > 0 {
        failures.push(format!(
            "{} of 441 starts did not converge (greedy dynamics oscillates on tied responses)",
            non_converging
        ));
    }
    if too_long > 0 {
        failures.push(format!("{} traces exceeded 25 steps", too_long));
    }
    let report = game
        .certify_contractive(
            CertifyCondition::A,
            &CertifyParams {
                r: Some(0.1),
                ..CertifyParams::default()
            },
            DEFAULT_PRODUCT_CAP,
        )
        .unwrap();
    if !report.verdict {
        failures.push("condition (a) certificate does not hold".to_string());
    }
    if !(report.br_certificate.modulus <= 0.5 + 1e-9) {
        failures.push(format!(
            "product-space modulus {} exceeds 0.5 + 1e-9 (tied responses force ratio 1)",
            report.br_certificate.modulus
        ));
    }
    conclude(
        10,
        "quadratic game: unique on-grid equilibrium, convergent dynamics, certified condition (a)",
        started,
        Duration::from_secs(30),
        failures,
    );
}

#[test]
fn criterion_11_discoordination_negative_control() {
    let started = Instant::now();
    let mut failures = Vec::new();
    let labels: Vec<String> = vec!["0".into(), "1".into()];
    let coords = vec![vec![0.0], vec![1.0]];
    let s = FiniteMetricSpace::from_coords(labels, &coords).unwrap();
    let game = metricfix_core::games::Game::new(
        vec![s.clone(), s],
        metricfix_core::games::PayoffSource::Table(vec![
            vec![1.0, 0.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0, 0.0],
        ]),
        metricfix_core::space::Combiner::Max,
    )
    .unwrap();
    if !game.nash_enumerate(DEFAULT_TIE_TOL, DEFAULT_PRODUCT_CAP).unwrap().is_empty() {
        failures.push("nash_enumerate is nonempty".to_string());
    }
    if !game.nash_by_deviation(DEFAULT_TIE_TOL).unwrap().is_empty() {
        failures.push("deviation scan found an equilibrium".to_string());
    }
    let (prod, br) = game.best_response_map(DEFAULT_TIE_TOL, DEFAULT_PRODUCT_CAP).unwrap();
    let cert = global_modulus(&br, &MetricView::Base(&prod));
    if cert.modulus < 1.0 {
        failures.push(format!("BR modulus {} below 1", cert.modulus));
    }
    let conditions = [
        (CertifyCondition::A, CertifyParams { r: Some(1.5), ..CertifyParams::default() }),
        (
            CertifyCondition::B,
            CertifyParams {
                eps: Some(1.5),
                neighborhood: Some(NeighborhoodSpec::Knn(3)),
                ..CertifyParams::default()
            },
        ),
        (
            CertifyCondition::C,
            CertifyParams {
                r: Some(1.5),
                neighborhood: Some(NeighborhoodSpec::Knn(3)),
                ..CertifyParams::default()
            },
        ),
    ];
    for (cond, params) in conditions {
        let rep = game.certify_contractive(cond, &params, DEFAULT_PRODUCT_CAP).unwrap();
        if rep.verdict {
            failures.push(format!("condition {:?} unexpectedly holds", cond));
        }
    }
    let run = game
        .nash_via_dynamics(&[0, 0], DEFAULT_TIE_TOL, 50, DynamicsMetric::Base, DEFAULT_PRODUCT_CAP)
        .unwrap();
    if !matches!(run.trace.outcome, SolveOutcome::CycleDetected { .. }) {
        failures.push(format!("dynamics did not cycle: {:?}", run.trace.outcome));
    }
    conclude(
        11,
        "discoordination game: empty Nash set, modulus at least 1, cycling dynamics",
        started,
        Duration::from_secs(1),
        failures,
    );
}

#[test]
fn criterion_12_nash_oracle_equivalence() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..50u64 {
        let game = table_game(110_000 + seed, 20).unwrap();
        let via_br = game.nash_enumerate(DEFAULT_TIE_TOL, DEFAULT_PRODUCT_CAP).unwrap();
        let via_dev = game.nash_by_deviation(DEFAULT_TIE_TOL).unwrap();
        if via_br != via_dev {
            failures.push(format!(
                "seed {}: BR fixed points {:?} vs deviation scan {:?}",
                seed, via_br, via_dev
            ));
        }
    }
    conclude(
        12,
        "BR fixed points and the deviation scan find the same equilibria",
        started,
        Duration::from_secs(30),
        failures,
    );
}

#[test]
fn criterion_13_reparametrization_identity() {
    let started = Instant::now();
    let mut failures = Vec::new();
    for seed in 0..200u64 {
        let n = 6 + (seed as usize) % 20;
        let space = cloud_space(120_000 + seed, n, 2).unwrap();
        let p = random_path(130_000 + seed, n, 10).unwrap();
        let total = path_length(&space, &p);
        let rp = reparametrize(&space, &p).unwrap();
        if path_length(&space, &rp) != total {
            failures.push(format!("seed {}: total length changed", seed));
        }
        for (k, &t) in rp.params().iter().enumerate() {
            if k == 0 {
                continue;
            }
            let prefix = path_length_sub(&space, &rp, 0.0, t).unwrap();
            let expected = t * total;
            if (prefix - expected).abs() > 1e-12 * total {
                failures.push(format!(
                    "seed {} waypoint {}: prefix {} vs {} * {}",
                    seed, k, prefix, t, total
                ));
            }
        }
    }
    conclude(
        13,
        "arc-length reparametrization accrues length proportionally to the parameter",
        started,
        Duration::from_secs(5),
        failures,
    );
}
