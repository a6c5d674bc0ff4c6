//! Subcommand implementations.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use kast_core::corpus::{self, CorpusEntry};
use kast_core::geometric::{boundary_measurement_matrix, choose_gauge_ray, edge_vector, ensure_positions, geometric_signature, verify_kasteleyn_geometric};
use kast_core::graph::{enum_limit, enumerate_matchings, orientation_for_base, positroid_of_graph, FaceKind, PerfectOrientation, PlanarBipartiteGraph};
use kast_core::io::{NetworkDocument, SolitonDocument};
use kast_core::kasteleyn::{dimer_partition, kasteleyn_matrix, le_graph_signature, plucker_from_matrix, signatures_equivalent, transpose_dual, validate_signature};
use kast_core::kp::{self, SolitonData};
use kast_core::linalg::Matrix;
use kast_core::positroid::{graph_to_permutation, le_graph, LeDiagram};
use kast_core::rational::{format, int, Rational};
use kast_core::relations::{kasteleyn_system, lam_solve_canonical, weak_signature, weak_system, weak_system_solve};
use kast_core::weights::{apply_move, face_weights_from_edge_weights, infinite_face_weight, Move, Network};
use serde::Serialize;
use serde_json::json;

use crate::input::{emit, emit_table, load_network, read_text, required_base, signature, Loaded};
use crate::{CliError, Command, Common, CorpusAction, GeomAction, KpAction, RelationAction, SignAction};

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate(c) => validate(&c),
        Command::Faces(c) => faces(&c),
        Command::Matchings(c) => matchings(&c),
        Command::Positroid(c) => positroid(&c),
        Command::Perm(c) => perm(&c),
        Command::Legraph { rows, n, common } => legraph(&common, &rows, n),
        Command::Sign { action, common } => sign(&common, action),
        Command::Kmatrix(c) => kmatrix(&c),
        Command::Minors(c) => minors(&c),
        Command::Rrep(c) => rrep(&c),
        Command::Dual(c) => dual(&c),
        Command::Relations { action, common } => relations(&common, action),
        Command::Geom { action, common } => geom(&common, action),
        Command::Moves { mv, common } => moves(&common, &mv),
        Command::Kp { action, soliton, common } => kp_command(&common, action, &soliton),
        Command::Corpus { action, seed, count, common } => corpus_command(&common, action, seed, count),
    }
}

fn strings(m: &Matrix<Rational>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(format).collect()).collect()
}

fn vector(v: &[Rational]) -> Vec<String> {
    v.iter().map(format).collect()
}

fn edge_map<T: Clone>(g: &PlanarBipartiteGraph, values: &[T]) -> BTreeMap<String, T> {
    g.edges().iter().zip(values).map(|(e, v)| (e.id.clone(), v.clone())).collect()
}

fn validate(c: &Common) -> Result<(), CliError> {
    let l = load_network(c)?;
    let g = &l.network.graph;
    let report = g.reducedness();
    emit(
        c,
        &json!({
            "valid": true,
            "k": g.k(),
            "n": g.n(),
            "boundary_color": g.boundary_color(),
            "vertices": g.vertices().len(),
            "edges": g.edges().len(),
            "faces": g.faces().faces.len(),
            "reduced_checks_pass": report.passes(),
            "reducedness": report,
        }),
    )
}

fn faces(c: &Common) -> Result<(), CliError> {
    let l = load_network(c)?;
    let g = &l.network.graph;
    let fw = face_weights_from_edge_weights(g, &l.network.weights);
    let out: Vec<_> = g
        .faces()
        .faces
        .iter()
        .map(|f| {
            let weight = if f.kind == FaceKind::Infinite { infinite_face_weight(&fw) } else { fw[f.id - 1].clone() };
            json!({
                "id": f.id,
                "infinite": f.kind == FaceKind::Infinite,
                "edges": f.darts.iter().map(|d| g.edge(d.edge).id.clone()).collect::<Vec<_>>(),
                "boundary_labels": f.boundary_labels,
                "edge_count": f.edge_count,
                "weight": format(&weight),
            })
        })
        .collect();
    emit(c, &out)
}

fn matchings(c: &Common) -> Result<(), CliError> {
    let l = load_network(c)?;
    let g = &l.network.graph;
    let all = enumerate_matchings(g, enum_limit())?;
    let groups: Vec<_> = all
        .iter()
        .map(|(b, ms)| {
            json!({
                "boundary": b,
                "matchings": ms.iter().map(|m| m.edges.iter().map(|&e| g.edge(e).id.clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let count: usize = all.values().map(Vec::len).sum();
    emit(c, &json!({ "count": count, "groups": groups }))
}

fn positroid(c: &Common) -> Result<(), CliError> {
    let l = load_network(c)?;
    let p = positroid_of_graph(&l.network.graph, enum_limit())?;
    emit(
        c,
        &json!({
            "k": p.k,
            "n": p.n,
            "lex_min_base": p.lex_min_base(),
            "irreducible": p.is_irreducible(),
            "bases": p.bases,
        }),
    )
}

fn perm(c: &Common) -> Result<(), CliError> {
    let l = load_network(c)?;
    let p = graph_to_permutation(&l.network.graph)?;
    emit(
        c,
        &json!({
            "images": p.images,
            "loops": p.loops,
            "k": p.k(),
            "excedances": p.excedance_set(),
        }),
    )
}

fn legraph(c: &Common, rows: &str, n: usize) -> Result<(), CliError> {
    let parsed: Vec<Vec<u8>> = rows
        .split('/')
        .map(|r| {
            r.chars()
                .map(|ch| match ch {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(CliError::Usage(format!("Le-diagram entries are 0 or 1, got `{other}`"))),
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let l = LeDiagram { k: parsed.len(), n, rows: parsed };
    let g = le_graph(&l, false)?;
    let sigma = le_graph_signature(&g)?;
    let doc = NetworkDocument::from_network(&Network::unit(g), Some(&sigma), Some(&format!("Le-diagram {rows}")));
    emit(c, &doc)
}

fn sign(c: &Common, action: SignAction) -> Result<(), CliError> {
    let l = load_network(c)?;
    let g = &l.network.graph;
    match action {
        SignAction::Construct => {
            let s = kast_core::kasteleyn::construct_signature(g)?;
            emit(c, &json!({ "signature": edge_map(g, &s) }))
        }
        SignAction::Validate => {
            let s = signature(c, &l)?;
            let checks = validate_signature(g, &s);
            let ok = checks.iter().all(|f| f.passes);
            emit(c, &json!({ "kasteleyn": ok, "faces": checks }))
        }
        SignAction::GaugeCompare => {
            let stored = l
                .document
                .as_ref()
                .map(|d| d.signature_for(g))
                .transpose()?
                .flatten()
                .ok_or_else(|| CliError::Usage("gauge-compare needs a document signature".into()))?;
            let built = kast_core::kasteleyn::construct_signature(g)?;
            let witness = signatures_equivalent(g, &stored, &built);
            let gauge = witness.map(|a| {
                g.vertices()
                    .iter()
                    .zip(a)
                    .map(|(v, x)| (v.id.clone(), x))
                    .collect::<BTreeMap<_, _>>()
            });
            emit(c, &json!({ "equivalent": gauge.is_some(), "gauge": gauge }))
        }
    }
}

fn kmatrix(c: &Common) -> Result<(), CliError> {
    let l = load_network(c)?;
    let g = &l.network.graph;
    let s = signature(c, &l)?;
    let km = kasteleyn_matrix(g, &s, &l.network.weights)?;
    let ids = |vs: &[usize]| vs.iter().map(|&v| g.vertex(v).id.clone()).collect::<Vec<_>>();
    emit(
        c,
        &json!({
            "rows": ids(&km.rows),
            "cols": ids(&km.cols),
            "entries": strings(&km.matrix),
        }),
    )
}

#[derive(Serialize)]
struct MinorTable {
    k: usize,
    n: usize,
    minors: Vec<MinorRow>,
}

#[derive(Serialize)]
struct MinorRow {
    subset: Vec<usize>,
    value: String,
}

fn minors(c: &Common) -> Result<(), CliError> {
    let l = load_network(c)?;
    let g = &l.network.graph;
    let s = signature(c, &l)?;
    let p = kasteleyn_matrix(g, &s, &l.network.weights)?.plucker_vector();
    let rows: Vec<MinorRow> = p
        .entries
        .iter()
        .filter(|(_, v)| **v != int(0))
        .map(|(i, v)| MinorRow {
            subset: i.clone(),
            value: format(v),
        })
        .collect();
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| vec![r.subset.iter().map(usize::to_string).collect::<Vec<_>>().join(" "), r.value.clone()])
        .collect();
    emit_table(c, &MinorTable { k: p.k, n: p.n, minors: rows }, &["subset", "value"], &csv_rows)
}

fn rrep(c: &Common) -> Result<(), CliError> {
    let l = load_network(c)?;
    let g = &l.network.graph;
    let s = signature(c, &l)?;
    let km = kasteleyn_matrix(g, &s, &l.network.weights)?;
    let (base, a) = match crate::input::base(c, g)? {
        Some(b) => {
            let a = km.rref_at_base(&b)?;
            (Some(b), a)
        }
        None => (None, km.representative_matrix()?),
    };
    emit(c, &json!({ "base": base, "matrix": strings(&a) }))
}

fn dual(c: &Common) -> Result<(), CliError> {
    let l = load_network(c)?;
    let s = signature(c, &l)?;
    let d = transpose_dual(&l.network, &s)?;
    let plucker: BTreeMap<String, String> = d
        .plucker
        .entries
        .iter()
        .map(|(i, v)| (i.iter().map(usize::to_string).collect::<Vec<_>>().join(","), format(v)))
        .collect();
    let doc = NetworkDocument::from_network(&d.network, Some(&s), Some(&format!("dual of {}", l.name)));
    emit(c, &json!({ "network": doc, "plucker": plucker }))
}

fn orientation(g: &PlanarBipartiteGraph, base: &[usize]) -> Result<PerfectOrientation, CliError> {
    orientation_for_base(g, base)?.ok_or_else(|| CliError::Core(kast_core::error::GraphError::NotPerfectlyOrientable.into()))
}

fn relations(c: &Common, action: RelationAction) -> Result<(), CliError> {
    let l = load_network(c)?;
    let g = &l.network.graph;
    let t = &l.network.weights;
    match action {
        RelationAction::Solve => {
            let s = signature(c, &l)?;
            let base = required_base(c, g)?;
            let sys = kasteleyn_system(g, &s, t)?;
            let sol = sys.solve_canonical(&base)?;
            let values: BTreeMap<String, Vec<String>> =
                sys.unknowns.iter().enumerate().map(|(r, &v)| (g.vertex(v).id.clone(), vector(sol.row(r)))).collect();
            emit(c, &json!({ "base": base, "values": values }))
        }
        RelationAction::Kernel => {
            let s = signature(c, &l)?;
            let sys = kasteleyn_system(g, &s, t)?;
            emit(c, &json!({ "kernel": strings(&sys.kernel_basis()?) }))
        }
        RelationAction::Export => {
            let s = signature(c, &l)?;
            let sys = kasteleyn_system(g, &s, t)?;
            emit(c, &sys.export(g))
        }
        RelationAction::Lam => {
            let gp = ensure_positions(g)?;
            let base = required_base(c, &gp)?;
            let o = orientation(&gp, &base)?;
            let ray = choose_gauge_ray(&gp, &o)?;
            let eps = geometric_signature(&gp, &o, &ray)?;
            let z = lam_solve_canonical(&gp, &o, &eps, t)?;
            let edges: BTreeMap<String, serde_json::Value> = gp
                .edges()
                .iter()
                .enumerate()
                .map(|(e, edge)| {
                    (
                        edge.id.clone(),
                        json!({
                            "black": vector(&z.black[e]),
                            "white": vector(&z.white[e]),
                            "epsilon": z.epsilon[e],
                        }),
                    )
                })
                .collect();
            emit(c, &json!({ "base": base, "edges": edges }))
        }
        RelationAction::Weak => {
            let (wg, wt, note) = if g.boundary_color() == kast_core::graph::Color::White {
                (g.clone(), t.clone(), None)
            } else {
                let moved = corpus::with_black_boundary(&l.network);
                let added = apply_move(&moved, &Move::BoundaryAdd)?;
                (added.graph, added.weights, Some("boundary edges added"))
            };
            let s = weak_signature(&wg)?;
            let sys = weak_system(&wg, &s, &wt)?;
            let a = weak_system_solve(&wg, &s, &wt)?;
            emit(
                c,
                &json!({
                    "note": note,
                    "relations": sys.relations.iter().map(|&v| wg.vertex(v).id.clone()).collect::<Vec<_>>(),
                    "unknowns": sys.unknowns.iter().map(|&v| wg.vertex(v).id.clone()).collect::<Vec<_>>(),
                    "matrix": strings(&sys.matrix),
                    "boundary_matrix": strings(&a),
                }),
            )
        }
    }
}

fn geom(c: &Common, action: GeomAction) -> Result<(), CliError> {
    let l = load_network(c)?;
    let g = ensure_positions(&l.network.graph)?;
    let t = &l.network.weights;
    let base = match crate::input::base(c, &g)? {
        Some(b) => b,
        None => positroid_of_graph(&g, enum_limit())?
            .lex_min_base()
            .ok_or_else(|| CliError::Usage("the positroid has no base".into()))?
            .to_vec(),
    };
    let o = orientation(&g, &base)?;
    let ray = choose_gauge_ray(&g, &o)?;
    let eps = geometric_signature(&g, &o, &ray)?;
    match action {
        GeomAction::Signature => emit(
            c,
            &json!({
                "sources": o.sources,
                "ray": [format(&ray.direction.x), format(&ray.direction.y)],
                "epsilon": edge_map(&g, &eps),
            }),
        ),
        GeomAction::EdgeVectors => {
            let mut vectors = BTreeMap::new();
            for b in g.vertices_of_color(kast_core::graph::Color::Black) {
                vectors.insert(g.vertex(b).id.clone(), vector(&edge_vector(&g, &o, &ray, t, b, enum_limit())?));
            }
            let a = boundary_measurement_matrix(&g, &o, &ray, t, enum_limit())?;
            emit(c, &json!({ "sources": o.sources, "edge_vectors": vectors, "matrix": strings(&a) }))
        }
        GeomAction::Verify => {
            let loaded = Loaded {
                network: Network::new(g.clone(), t.clone())?,
                document: l.document.clone(),
                name: l.name.clone(),
            };
            let s = signature(c, &loaded)?;
            let failing = validate_signature(&g, &s).iter().filter(|f| !f.passes).count();
            if failing > 0 {
                return Err(kast_core::error::KasteleynError::NotKasteleyn(failing).into());
            }
            let report = verify_kasteleyn_geometric(&g, &s, &eps);
            let a = boundary_measurement_matrix(&g, &o, &ray, t, enum_limit())?;
            let flows = plucker_from_matrix(&a);
            let kast = kasteleyn_matrix(&g, &s, t)?.plucker_vector();
            let dimers = dimer_partition(&g, t, enum_limit())?;
            let plucker_agree = flows.projectively_equal(&kast) && dimers.projectively_equal(&kast);
            if !report.equivalent || !plucker_agree {
                return Err(CliError::Invariant(format!(
                    "geometric signature equivalent: {}, Plücker vectors agree: {plucker_agree}",
                    report.equivalent
                )));
            }
            let gauge = report.gauge.as_ref().map(|a| {
                g.vertices().iter().zip(a).map(|(v, x)| (v.id.clone(), *x)).collect::<BTreeMap<_, _>>()
            });
            emit(
                c,
                &json!({
                    "sources": o.sources,
                    "equivalent": report.equivalent,
                    "gauge": gauge,
                    "faces": report.faces,
                    "plucker_agree": plucker_agree,
                }),
            )
        }
    }
}

fn moves(c: &Common, mv: &str) -> Result<(), CliError> {
    let l = load_network(c)?;
    let m: Move = serde_json::from_str(mv).map_err(|e| CliError::Usage(format!("bad move: {e}")))?;
    let out = apply_move(&l.network, &m)?;
    let s = kast_core::kasteleyn::construct_signature(&out.graph)?;
    emit(c, &NetworkDocument::from_network(&out, Some(&s), Some(&format!("{} after {mv}", l.name))))
}

/// Soliton data with the network it came from, if any.
struct Soliton {
    doc: SolitonDocument,
    data: SolitonData,
    network: Option<(Network, Vec<i8>)>,
}

fn load_soliton(c: &Common, path: &Path) -> Result<Soliton, CliError> {
    let doc = SolitonDocument::from_json(&read_text(path)?)?;
    let net_doc = match (&doc.network, &doc.network_path) {
        (Some(d), _) => Some(d.clone()),
        (None, Some(p)) => {
            let full = path.parent().unwrap_or(Path::new(".")).join(p);
            Some(NetworkDocument::from_json(&read_text(&full)?)?)
        }
        (None, None) => None,
    };
    let network = match net_doc {
        Some(d) => {
            let loaded = Loaded {
                network: d.network()?,
                document: Some(d),
                name: path.display().to_string(),
            };
            let black = corpus::with_black_boundary(&loaded.network);
            let s = if loaded.network.graph.boundary_color() == kast_core::graph::Color::Black {
                signature(c, &loaded)?
            } else {
                kast_core::kasteleyn::construct_signature(&black.graph)?
            };
            Some((black, s))
        }
        None => None,
    };
    let data = match (doc.inline_matrix(), &network) {
        (Some(a), _) => SolitonData::new(doc.phases.clone(), a)?,
        (None, Some((net, _))) => SolitonData::from_network(doc.phases.clone(), net)?,
        (None, None) => return Err(CliError::Usage("soliton document needs a network or a matrix".into())),
    };
    Ok(Soliton { doc, data, network })
}

#[derive(Serialize)]
struct DivisorOutput {
    #[serde(flatten)]
    divisor: kp::KpDivisor,
    normalization_scan: Option<kp::NormalizationTime>,
}

fn kp_command(c: &Common, action: KpAction, path: &Path) -> Result<(), CliError> {
    let s = load_soliton(c, path)?;
    let times = s.doc.times.clone().unwrap_or_else(|| vec![0.0, 0.0, 0.0]);
    match action {
        KpAction::Field => {
            let grid = s.doc.grid.ok_or_else(|| CliError::Usage("soliton document has no grid".into()))?;
            let samples = kp::evaluate_soliton(&s.data, &grid.points(), &s.doc.higher_times)?;
            let rows: Vec<Vec<String>> = samples
                .iter()
                .map(|p| [p.x, p.y, p.t, p.u].iter().map(|v| v.to_string()).collect())
                .collect();
            emit_table(c, &samples, &["x", "y", "t", "u"], &rows)
        }
        KpAction::Dressing => {
            let w = kp::wave_values(&s.data, &times)?;
            emit(c, &w)
        }
        KpAction::Curve => {
            let (net, _) = s.network.as_ref().ok_or_else(|| CliError::Usage("the curve needs a network".into()))?;
            emit(c, &kp::build_spectral_curve(&net.graph)?)
        }
        KpAction::Divisor | KpAction::DivisorGeo => {
            let (net, sigma) = s.network.as_ref().ok_or_else(|| CliError::Usage("the divisor needs a network".into()))?;
            let (x0, scan) = match &s.doc.normalization_time {
                Some(x) => (x.clone(), None),
                None => {
                    let found = kp::find_normalization_time(&s.data, net, sigma)?;
                    (found.times.clone(), Some(found))
                }
            };
            let divisor = if action == KpAction::Divisor {
                kp::kp_divisor(&s.data, net, sigma, &x0)?
            } else {
                kp::kp_divisor_via_geometric(&s.data, net, &x0)?
            };
            emit(c, &DivisorOutput { divisor, normalization_scan: scan })
        }
    }
}

/// Quick structural checks of one corpus entry.
fn check_entry(entry: &CorpusEntry) -> Result<serde_json::Value, CliError> {
    let net = &entry.network;
    let g = &net.graph;
    let s = kast_core::kasteleyn::construct_signature(g)?;
    let unit = kasteleyn_matrix(g, &s, &vec![int(1); g.edges().len()])?.plucker_vector();
    let counts = enumerate_matchings(g, enum_limit())?;
    let matching_count_ok = unit.entries.iter().all(|(i, v)| {
        let count = counts.get(i).map_or(0, Vec::len);
        let c = int(count as i64);
        *v == c || -v.clone() == c
    }) && unit.shares_one_sign();
    let weighted = kasteleyn_matrix(g, &s, &net.weights)?.plucker_vector();
    let dimers = dimer_partition(g, &net.weights, enum_limit())?;
    let plucker_ok = weighted.projectively_equal(&dimers);
    if !matching_count_ok || !plucker_ok {
        return Err(CliError::Invariant(format!(
            "{}: matching count {matching_count_ok}, Plücker {plucker_ok}",
            entry.name
        )));
    }
    Ok(json!({
        "name": entry.name,
        "matching_counts": matching_count_ok,
        "plucker_vs_dimers": plucker_ok,
    }))
}

fn corpus_command(c: &Common, action: CorpusAction, seed: u64, count: usize) -> Result<(), CliError> {
    let mut entries = corpus::reference_networks();
    entries.extend(corpus::random_networks(seed, count, corpus::RandomLimits::default()));
    match action {
        CorpusAction::List => emit(c, &entries.iter().map(CorpusEntry::summary).collect::<Vec<_>>()),
        CorpusAction::Check => {
            let reports = entries.iter().map(check_entry).collect::<Result<Vec<_>, _>>()?;
            emit(c, &reports)
        }
        CorpusAction::Generate => {
            let dir = c.out.as_ref().ok_or_else(|| CliError::Usage("corpus generate needs --out DIR".into()))?;
            fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
            for e in &entries {
                let s = if e.name == "gr26" {
                    corpus::example_one_signature(&e.network.graph)
                } else {
                    corpus::signature_of(&e.network)
                };
                let doc = NetworkDocument::from_network(&e.network, Some(&s), Some(&e.description));
                let file = dir.join(format!("{}.json", e.name));
                fs::write(&file, doc.to_json()).map_err(|err| CliError::Usage(format!("cannot write {}: {err}", file.display())))?;
            }
            let index: Vec<_> = entries.iter().map(CorpusEntry::summary).collect();
            let mut text = serde_json::to_string_pretty(&index).expect("outputs serialize");
            text.push('\n');
            let file = dir.join("index.json");
            fs::write(&file, text).map_err(|err| CliError::Usage(format!("cannot write {}: {err}", file.display())))
        }
    }
}
