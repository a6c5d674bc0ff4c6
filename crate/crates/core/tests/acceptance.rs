//! Acceptance checks, one line per criterion.
//!
//! Every criterion is evaluated independently; the test prints a PASS or
//! FAIL line for each and fails at the end if any criterion failed.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use itertools::Itertools;
use kast_core::corpus::{self, CorpusEntry};
use kast_core::geometric::{
    boundary_measurement_matrix, choose_gauge_ray, edge_vector, ensure_positions, gauge_ray, geometric_signature,
    signature_from_epsilon, verify_kasteleyn_geometric,
};
use kast_core::geometry::Point;
use kast_core::graph::{
    build_graph, enum_limit, enumerate_matchings, enumerate_perfect_orientations, orientation_for_base, positroid_of_graph,
    PerfectOrientation, PlanarBipartiteGraph,
};
use kast_core::io::NetworkDocument;
use kast_core::kasteleyn::{
    construct_signature, dimer_partition, kasteleyn_matrix, plucker_from_matrix, signature_gauge, transpose_dual,
};
use kast_core::kp::{
    self, candidate_times, find_normalization_time, kp_divisor, kp_divisor_via_geometric, ChartValue, SolitonData,
};
use kast_core::linalg::{det_bareiss, same_row_space, Matrix};
use kast_core::positroid::complement;
use kast_core::rational::{int, ratio, Rational};
use kast_core::relations::{delta, is_weak_kasteleyn, kasteleyn_system, weak_signature_from, weak_system, weak_system_solve};
use kast_core::weights::{apply_move, sample_positive_weights, weight_gauge, Move, Network};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus_entries() -> Vec<CorpusEntry> {
    corpus::default_corpus()
}

fn neg_one_pow(x: usize) -> Rational {
    if x % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

fn timed(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))
}

/// Unit-weight Kasteleyn minors against brute-force matching counts.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for e in corpus_entries() {
        let g = &e.network.graph;
        let sigma = construct_signature(g).map_err(|x| x.to_string())?;
        let km = kasteleyn_matrix(g, &sigma, &vec![int(1); g.edges().len()]).map_err(|x| x.to_string())?;
        let counts = enumerate_matchings(g, enum_limit()).map_err(|x| x.to_string())?;
        let mut sign = 0i8;
        for subset in (1..=g.n()).combinations(g.k()) {
            let m = km.minor(&subset).map_err(|x| x.to_string())?;
            let count = counts.get(&subset).map_or(0, Vec::len) as i64;
            let s = if m > int(0) { 1 } else if m < int(0) { -1 } else { 0 };
            ensure(m.clone() * int(s.into()) == int(count), || format!("{}: |Δ_{subset:?}| = {m}, matchings {count}", e.name))?;
            if s != 0 {
                ensure(sign == 0 || sign == s, || format!("{}: mixed minor signs", e.name))?;
                sign = s;
            }
            checked += 1;
        }
    }
    timed(Duration::from_secs(10), start)?;
    Ok(format!("{checked} minors over the corpus"))
}

fn flows_plucker(g: &PlanarBipartiteGraph, t: &[Rational]) -> Result<kast_core::kasteleyn::PluckerVector, String> {
    let gp = ensure_positions(g).map_err(|x| x.to_string())?;
    let base = positroid_of_graph(&gp, enum_limit()).map_err(|x| x.to_string())?.bases[0].clone();
    let o = orientation_for_base(&gp, &base).map_err(|x| x.to_string())?.ok_or("no orientation")?;
    let ray = choose_gauge_ray(&gp, &o).map_err(|x| x.to_string())?;
    let a = boundary_measurement_matrix(&gp, &o, &ray, t, enum_limit()).map_err(|x| x.to_string())?;
    Ok(plucker_from_matrix(&a))
}

/// Kasteleyn minors, dimer partition functions and flow measurements.
fn criterion_2() -> Outcome {
    let mut checked = 0;
    for e in corpus_entries() {
        let g = &e.network.graph;
        let sigma = construct_signature(g).map_err(|x| x.to_string())?;
        for seed in 0..20u64 {
            let t = sample_positive_weights(g, 1000 + seed);
            let k = kasteleyn_matrix(g, &sigma, &t).map_err(|x| x.to_string())?.plucker_vector();
            let d = dimer_partition(g, &t, enum_limit()).map_err(|x| x.to_string())?;
            let f = flows_plucker(g, &t)?;
            ensure(k.projectively_equal(&d), || format!("{} seed {seed}: Kasteleyn vs dimers", e.name))?;
            ensure(k.projectively_equal(&f), || format!("{} seed {seed}: Kasteleyn vs flows", e.name))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} weightings"))
}

fn ex1_samples() -> Vec<[Rational; 4]> {
    vec![
        [int(2), int(3), int(5), int(7)],
        [ratio(1, 2), ratio(4, 3), ratio(2, 7), int(3)],
        [int(1), int(1), int(1), int(1)],
        [ratio(5, 3), ratio(1, 9), int(4), ratio(7, 2)],
        [int(11), ratio(3, 8), ratio(9, 5), ratio(1, 6)],
    ]
}

/// Echelon forms of the Gr(2,6) example and its dual.
fn criterion_3() -> Outcome {
    for w in ex1_samples() {
        let [t11, t21, t53, t72] = w.clone();
        let net = corpus::example_one_network(w.clone());
        let doc = NetworkDocument::from_network(&net, Some(&corpus::example_one_signature(&net.graph)), None);
        let back = NetworkDocument::from_json(&doc.to_json()).map_err(|x| x.to_string())?;
        let net = back.network().map_err(|x| x.to_string())?;
        let sigma = back.signature_for(&net.graph).map_err(|x| x.to_string())?.ok_or("signature")?;
        let km = kasteleyn_matrix(&net.graph, &sigma, &net.weights).map_err(|x| x.to_string())?;
        let rref = km.rref_at_base(&[1, 4]).map_err(|x| x.to_string())?;
        let (o, z) = (int(1), int(0));
        let expected = Matrix::from_rows(vec![
            vec![o.clone(), &o / &t21, &t11 / &t21, z.clone(), z.clone(), -(&t11 * &t72) / &t21],
            vec![z.clone(), z.clone(), z.clone(), o.clone(), &o / &t53, z.clone()],
        ]);
        ensure(rref == expected, || format!("RREF at {w:?} differs"))?;

        let added = apply_move(&net, &Move::BoundaryAdd).map_err(|x| x.to_string())?;
        let s2 = construct_signature(&added.graph).map_err(|x| x.to_string())?;
        let dual = transpose_dual(&added, &s2).map_err(|x| x.to_string())?;
        let drref = dual.kasteleyn.rref_at_base(&[1, 2, 3, 4]).map_err(|x| x.to_string())?;
        let expected_dual = Matrix::from_rows(vec![
            vec![o.clone(), z.clone(), z.clone(), z.clone(), z.clone(), -(&t21 / (&t11 * &t72))],
            vec![z.clone(), o.clone(), z.clone(), z.clone(), z.clone(), &o / (&t11 * &t72)],
            vec![z.clone(), z.clone(), o.clone(), z.clone(), z.clone(), -(&o / &t72)],
            vec![z.clone(), z.clone(), z.clone(), o.clone(), t53.clone(), z.clone()],
        ]);
        ensure(drref == expected_dual, || format!("dual RREF at {w:?} differs"))?;

        let dk = transpose_dual(&net, &sigma).map_err(|x| x.to_string())?.kasteleyn;
        for subset in (1..=6).combinations(2) {
            let a = km.minor(&subset).map_err(|x| x.to_string())?;
            let b = dk.minor(&complement(&subset, 6)).map_err(|x| x.to_string())?;
            ensure(a == b, || format!("Δ_{subset:?} = {a} but dual minor {b}"))?;
        }
    }
    Ok("5 weight tuples".into())
}

fn unit_vec(n: usize, j: usize) -> Vec<Rational> {
    (1..=n).map(|i| int((i == j) as i64)).collect()
}

/// Boundary-value solutions, kernel and the weak system of the example.
fn criterion_4() -> Outcome {
    for w in ex1_samples() {
        let [t11, t21, t53, t72] = w.clone();
        let net = corpus::example_one_network(w.clone());
        let g = &net.graph;
        let sigma = corpus::example_one_signature(g);
        let sys = kasteleyn_system(g, &sigma, &net.weights).map_err(|x| x.to_string())?;
        let sol = sys.solve_canonical(&[1, 4]).map_err(|x| x.to_string())?;
        let col = |j: usize| sol.row(sys.internal + j - 1).to_vec();
        let expected_b1 = vec![int(0), -(int(1) / &t21), -(&t11 / &t21), int(0), int(0), (&t11 * &t72) / &t21];
        ensure(col(1) == expected_b1, || "v_b1 differs".into())?;
        let a = kasteleyn_matrix(g, &sigma, &net.weights).map_err(|x| x.to_string())?.rref_at_base(&[1, 4]).map_err(|x| x.to_string())?;
        let b4: Vec<Rational> = unit_vec(6, 4).iter().zip(a.row(1)).map(|(x, y)| x - y).collect();
        ensure(col(4) == b4, || "v_b4 differs from E_4 − A[2]".into())?;

        let kb = sys.kernel_basis().map_err(|x| x.to_string())?;
        let (o, z) = (int(1), int(0));
        let expected_kernel = Matrix::from_rows(vec![
            vec![o.clone(), z.clone(), z.clone(), z.clone(), z.clone(), &t21 / (&t11 * &t72)],
            vec![z.clone(), o.clone(), z.clone(), z.clone(), z.clone(), &o / (&t11 * &t72)],
            vec![z.clone(), z.clone(), o.clone(), z.clone(), z.clone(), &o / &t72],
            vec![z.clone(), z.clone(), z.clone(), o.clone(), -t53.clone(), z.clone()],
        ]);
        ensure(same_row_space(&kb, &expected_kernel), || "kernel differs".into())?;
        ensure(a.mul(&kb.transpose()).map_err(|x| x.to_string())?.is_zero(), || "A·Ā°ᵀ ≠ 0".into())?;

        let tilde = apply_move(&net, &Move::BoundaryAdd).map_err(|x| x.to_string())?;
        let st = weak_signature_from(g, &sigma, &tilde.graph);
        ensure(is_weak_kasteleyn(&tilde.graph, &st), || "weak signature".into())?;
        let weak_a = weak_system_solve(&tilde.graph, &st, &tilde.weights).map_err(|x| x.to_string())?;
        ensure(same_row_space(&weak_a, &a), || "weak A differs".into())?;
        let ws = weak_system(&tilde.graph, &st, &tilde.weights).map_err(|x| x.to_string())?;
        let rows: Vec<usize> = (0..sys.matrix.nrows()).collect();
        for base in (1..=6).combinations(2) {
            let cols: Vec<usize> = (0..sys.internal).chain(base.iter().map(|i| sys.internal + i - 1)).collect();
            let k_minor = det_bareiss(&sys.matrix.transpose().select(&cols, &rows));
            ensure(k_minor == neg_one_pow(delta(&base)) * ws.minor_without(&base), || format!("sign formula at {base:?}"))?;
        }
    }
    Ok("5 weight tuples, all 2-subsets".into())
}

/// Up to three perfect orientations with distinct source sets.
fn some_orientations(g: &PlanarBipartiteGraph) -> Result<Vec<PerfectOrientation>, String> {
    let all = enumerate_perfect_orientations(g, enum_limit()).map_err(|x| x.to_string())?;
    let distinct: Vec<PerfectOrientation> = all.into_iter().unique_by(|o| o.sources.clone()).collect();
    let m = distinct.len();
    let picks: Vec<usize> = [0, m / 2, m - 1].into_iter().unique().collect();
    Ok(picks.into_iter().map(|i| distinct[i].clone()).collect())
}

/// The first three valid gauge-ray directions among small slopes.
fn some_rays(g: &PlanarBipartiteGraph, o: &PerfectOrientation) -> Vec<kast_core::geometric::GaugeRay> {
    let mut out = Vec::new();
    for b in 1..60i64 {
        for a in [1i64, 2, -1, 3, -2] {
            if num_integer::gcd(a, b) != 1 {
                continue;
            }
            if let Ok(r) = gauge_ray(g, o, Point::new(int(a), int(-b))) {
                out.push(r);
                if out.len() == 3 {
                    return out;
                }
            }
        }
    }
    out
}

/// Geometric signatures against Kasteleyn signatures, on the black-boundary
/// form of every corpus graph.
fn criterion_5() -> Outcome {
    let mut checked = 0;
    for e in corpus_entries() {
        let net = corpus::with_black_boundary(&e.network);
        let g = ensure_positions(&net.graph).map_err(|x| x.to_string())?;
        let sigma = construct_signature(&g).map_err(|x| x.to_string())?;
        for o in some_orientations(&g)? {
            let rays = some_rays(&g, &o);
            ensure(rays.len() == 3, || format!("{}: only {} rays", e.name, rays.len()))?;
            for ray in rays {
                let eps = geometric_signature(&g, &o, &ray).map_err(|x| x.to_string())?;
                let report = verify_kasteleyn_geometric(&g, &sigma, &eps);
                ensure(report.equivalent, || format!("{}: sources {:?} ray {:?}", e.name, o.sources, ray.direction))?;
                checked += 1;
            }
        }
    }
    let g = corpus::example_one_graph();
    let o = orientation_for_base(&g, &[3, 5]).map_err(|x| x.to_string())?.ok_or("orientation")?;
    let ray = choose_gauge_ray(&g, &o).map_err(|x| x.to_string())?;
    let eps = geometric_signature(&g, &o, &ray).map_err(|x| x.to_string())?;
    let expected = [("e11", 0), ("e12", 0), ("e01", 0), ("e20", 1), ("e32", 0), ("e26", 1), ("e34", 1), ("e53", 1)];
    for (id, x) in expected {
        ensure(eps[g.edge_index(id).ok_or("edge")?] == x, || format!("ε({id})"))?;
    }
    let w = corpus::example_one_default_weights();
    let [t11, t21, t53, t72] = w.clone();
    let net = corpus::example_one_network(w);
    let a = boundary_measurement_matrix(&g, &o, &ray, &net.weights, enum_limit()).map_err(|x| x.to_string())?;
    let (o1, z) = (int(1), int(0));
    let expected_a = Matrix::from_rows(vec![
        vec![&t21 / &t11, &o1 / &t11, o1.clone(), z.clone(), z.clone(), -t72.clone()],
        vec![z.clone(), z.clone(), z.clone(), t53.clone(), o1.clone(), z.clone()],
    ]);
    ensure(a == expected_a, || "source vectors differ".into())?;
    Ok(format!("{checked} orientation/ray pairs"))
}

/// Kasteleyn boundary-value solutions against flow edge vectors.
fn criterion_6() -> Outcome {
    let mut checked = 0;
    for e in corpus_entries() {
        let net = corpus::with_black_boundary(&e.network);
        let g = ensure_positions(&net.graph).map_err(|x| x.to_string())?;
        let t = &net.weights;
        let bases = positroid_of_graph(&g, enum_limit()).map_err(|x| x.to_string())?.bases;
        for base in bases {
            let o = orientation_for_base(&g, &base).map_err(|x| x.to_string())?.ok_or("orientation")?;
            let ray = choose_gauge_ray(&g, &o).map_err(|x| x.to_string())?;
            let eps = geometric_signature(&g, &o, &ray).map_err(|x| x.to_string())?;
            let sigma = signature_from_epsilon(&eps);
            let sys = kasteleyn_system(&g, &sigma, t).map_err(|x| x.to_string())?;
            let sol = sys.solve_canonical(&base).map_err(|x| x.to_string())?;
            for (row, &b) in sys.unknowns.iter().enumerate() {
                let flow = edge_vector(&g, &o, &ray, t, b, enum_limit()).map_err(|x| x.to_string())?;
                let is_source = g.boundary_label(b).is_some_and(|j| base.contains(&j));
                let expected: Vec<Rational> = if is_source { flow.iter().map(|x| -x.clone()).collect() } else { flow };
                ensure(sol.row(row) == expected.as_slice(), || format!("{}: base {base:?} vertex {}", e.name, g.vertex(b).id))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} bases"))
}

/// A black-boundary network whose internal vertices have degree at most
/// three.
fn kp_network(e: &CorpusEntry, seed: u64) -> Network {
    let net = corpus::with_black_boundary(&e.network);
    let t = sample_positive_weights(&net.graph, seed);
    Network::new(net.graph, t).expect("positive weights")
}

fn random_phases(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let mut p: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        p.sort_by(|a, b| a.total_cmp(b));
        if p.windows(2).all(|w| w[1] - w[0] > 1e-3) {
            return p;
        }
    }
}

fn white_gammas(d: &kp::KpDivisor) -> Vec<(String, usize, f64)> {
    d.white_points
        .iter()
        .map(|w| {
            let g = match w.gamma {
                ChartValue::Finite(x) => x,
                ChartValue::Infinity => f64::INFINITY,
            };
            (w.vertex.clone(), w.oval, g)
        })
        .collect()
}

/// KP orthogonality, Sato roots, divisor counts and pipeline agreement.
fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut datasets = 0;
    for e in corpus_entries() {
        for i in 0..10u64 {
            let net = kp_network(&e, 500 + i);
            let sigma = construct_signature(&net.graph).map_err(|x| x.to_string())?;
            let phases = random_phases(&mut rng, net.graph.n());
            let ctx = || format!("{} dataset {i}", e.name);
            let data = SolitonData::from_network(phases.clone(), &net).map_err(|x| format!("{}: {x}", ctx()))?;
            for _ in 0..20 {
                let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let w = kp::wave_values(&data, &x).map_err(|err| format!("{}: {err}", ctx()))?;
                ensure(w.orthogonality < 1e-9, || format!("{}: orthogonality {:e}", ctx(), w.orthogonality))?;
                ensure(w.dressing.max_imaginary < 1e-8, || format!("{}: complex roots {:e}", ctx(), w.dressing.max_imaginary))?;
                let (lo, hi) = (phases[0] - 1e-8, phases[phases.len() - 1] + 1e-8);
                ensure(w.dressing.sato_roots.iter().all(|r| (lo..=hi).contains(r)), || format!("{}: root outside the phases", ctx()))?;
            }
            let x0 = find_normalization_time(&data, &net, &sigma).map_err(|x| format!("{}: {x}", ctx()))?;
            let d = kp_divisor(&data, &net, &sigma, &x0.times).map_err(|x| format!("{}: {x}", ctx()))?;
            let geo = kp_divisor_via_geometric(&data, &net, &x0.times).map_err(|x| format!("{}: geometric {x}", ctx()))?;
            let (a, b) = (white_gammas(&d), white_gammas(&geo));
            ensure(a.len() == b.len(), || format!("{}: point counts differ", ctx()))?;
            for (p, q) in a.iter().zip(&b) {
                ensure(p.0 == q.0 && p.1 == q.1 && (p.2 - q.2).abs() < 1e-10, || format!("{}: {p:?} vs {q:?}", ctx()))?;
            }
            datasets += 1;
        }
    }
    timed(Duration::from_secs(60), start)?;
    Ok(format!("{datasets} datasets"))
}

/// The three divisor configurations of the trivalent Gr(2,6) example.
fn criterion_8() -> Outcome {
    let net = corpus::example_one_network(corpus::example_one_default_weights());
    let g = &net.graph;
    let sigma = corpus::example_one_signature(g);
    let arc = &g.faces().arc_face;
    // Ovals named by the boundary arcs they contain.
    let (o2, o3, o4) = (arc[0], arc[1], arc[2]);
    let data = SolitonData::from_network(vec![-2.0, -1.0, -0.3, 0.4, 1.1, 2.0], &net).map_err(|x| x.to_string())?;
    let cases: [(&[usize], [usize; 2]); 3] = [(&[1], [o3, o4]), (&[2], [o2, o4]), (&[3, 5], [o2, o3])];
    let mut found = Vec::new();
    for (intervals, expected) in cases {
        let hit = candidate_times(6).into_iter().find_map(|x0| {
            let d = kp_divisor(&data, &net, &sigma, &x0).ok()?;
            let free = d.sato_points.iter().find(|s| s.interval != 4)?;
            intervals.contains(&free.interval).then_some(d)
        });
        let d = hit.ok_or_else(|| format!("no normalization time puts the free Sato root in {intervals:?}"))?;
        let ovals: Vec<usize> = d.white_points.iter().map(|w| w.oval).collect();
        ensure(ovals == expected, || format!("intervals {intervals:?}: ovals {ovals:?}, expected {expected:?}"))?;
        found.push(format!("{:?}", d.normalization_time));
    }
    Ok(format!("cases realized at x0 = {}", found.join(", ")))
}

/// Peak amplitude of the one-soliton solution.
fn criterion_9() -> Outcome {
    let data = SolitonData::new(vec![-1.0, 1.0], Matrix::from_rows(vec![vec![1.0, 1.0]])).map_err(|x| x.to_string())?;
    let pts: Vec<[f64; 3]> = (-5000..=5000).map(|i| [i as f64 * 1e-3, 0.0, 0.0]).collect();
    let u = kp::evaluate_soliton(&data, &pts, &[]).map_err(|x| x.to_string())?;
    let peak = u.iter().map(|s| s.u).fold(f64::NEG_INFINITY, f64::max);
    ensure((peak - 2.0).abs() <= 1e-6, || format!("peak {peak}"))?;
    Ok(format!("peak {peak}"))
}

/// Renames every internal vertex and reverses their order in the list.
fn relabeled(g: &PlanarBipartiteGraph) -> PlanarBipartiteGraph {
    let mut spec = g.to_spec();
    let rename: BTreeMap<String, String> = g
        .vertices()
        .iter()
        .enumerate()
        .filter(|(v, _)| !g.is_boundary(*v))
        .map(|(_, x)| (x.id.clone(), format!("r{}", x.id)))
        .collect();
    let map = |id: &String| rename.get(id).cloned().unwrap_or_else(|| id.clone());
    for v in &mut spec.vertices {
        v.id = map(&v.id);
    }
    let (mut internal, boundary): (Vec<_>, Vec<_>) = spec.vertices.into_iter().partition(|v| rename.values().any(|r| *r == v.id));
    internal.reverse();
    spec.vertices = internal.into_iter().chain(boundary).collect();
    for e in &mut spec.edges {
        e.ends = [map(&e.ends[0]), map(&e.ends[1])];
    }
    if let Some(rot) = spec.rotation.take() {
        spec.rotation = Some(rot.into_iter().map(|(k, v)| (map(&k), v)).collect());
    }
    build_graph(&spec).expect("relabeling keeps the graph valid")
}

/// Divisor invariance under gauges and relabeling.
fn criterion_10() -> Outcome {
    let mut checked = 0;
    let mut entries = vec![corpus::reference_networks().into_iter().find(|e| e.name == "gr26").ok_or("gr26")?];
    entries.extend(corpus::random_networks(corpus::DEFAULT_SEED, 3, corpus::RandomLimits::default()));
    for e in entries {
        let net = corpus::with_black_boundary(&e.network);
        let g = &net.graph;
        let sigma = construct_signature(g).map_err(|x| x.to_string())?;
        let phases: Vec<f64> = (0..g.n()).map(|j| -2.5 + 5.0 * j as f64 / (g.n() - 1) as f64 + 0.1 * (j as f64).sin()).collect();
        let data = SolitonData::from_network(phases, &net).map_err(|x| x.to_string())?;
        let x0 = find_normalization_time(&data, &net, &sigma).map_err(|x| x.to_string())?.times;
        let base = kp_divisor(&data, &net, &sigma, &x0).map_err(|x| x.to_string())?.canonical();
        let internal: Vec<usize> = (0..g.vertices().len()).filter(|&v| !g.is_boundary(v)).collect();

        let mut t = net.weights.clone();
        for (i, &v) in internal.iter().enumerate() {
            t = weight_gauge(g, &t, v, &ratio(2 + i as i64, 3)).map_err(|x| x.to_string())?;
        }
        let gauged = Network::new(g.clone(), t).map_err(|x| x.to_string())?;
        let d = kp_divisor(&data, &gauged, &sigma, &x0).map_err(|x| x.to_string())?.canonical();
        ensure(d == base, || format!("{}: weight gauge changed the divisor", e.name))?;

        let alpha: Vec<i8> = (0..g.vertices().len()).map(|v| if !g.is_boundary(v) && v % 3 != 1 { -1 } else { 1 }).collect();
        let s2 = signature_gauge(g, &sigma, &alpha).map_err(|x| x.to_string())?;
        let d = kp_divisor(&data, &net, &s2, &x0).map_err(|x| x.to_string())?.canonical();
        ensure(d == base, || format!("{}: signature gauge changed the divisor", e.name))?;

        let rg = relabeled(g);
        let rnet = Network::new(rg.clone(), net.weights.clone()).map_err(|x| x.to_string())?;
        let rsigma = construct_signature(&rg).map_err(|x| x.to_string())?;
        let mut d = kp_divisor(&data, &rnet, &rsigma, &x0).map_err(|x| x.to_string())?.canonical();
        d.1.sort();
        ensure(d == base, || format!("{}: relabeling changed the divisor", e.name))?;
        checked += 1;
    }
    Ok(format!("{checked} networks"))
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("matching counts equal unit-weight Kasteleyn minors", criterion_1),
        ("Kasteleyn, dimer and flow Plücker vectors agree", criterion_2),
        ("Gr(2,6) and Gr(4,6) echelon forms and dual minors", criterion_3),
        ("systems of relations reproduce the worked example", criterion_4),
        ("geometric signatures are Kasteleyn up to gauge", criterion_5),
        ("boundary-value solutions equal flow edge vectors", criterion_6),
        ("KP orthogonality, Sato roots and divisor counts", criterion_7),
        ("three divisor configurations of the trivalent example", criterion_8),
        ("one-soliton amplitude", criterion_9),
        ("divisor invariance under gauges and relabeling", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2}: PASS  {name} ({detail}; {took:.2?})", i + 1),
            Err(why) => {
                println!("criterion {:>2}: FAIL  {name} ({why}; {took:.2?})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
