//! Reading networks, bases and signatures from the command line, and
//! writing results.

use std::fs;
use std::path::Path;

use kast_core::corpus;
use kast_core::graph::PlanarBipartiteGraph;
use kast_core::io::NetworkDocument;
use kast_core::kasteleyn::construct_signature;
use kast_core::weights::{sample_positive_weights, Network};
use serde::Serialize;

use crate::{CliError, Common, Format, SignatureSource};

/// A network with the document it came from, if any.
pub struct Loaded {
    pub network: Network,
    pub document: Option<NetworkDocument>,
    pub name: String,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Loads `--network` or `--corpus` and applies `--weights`.
pub fn load_network(c: &Common) -> Result<Loaded, CliError> {
    let (net, document, name) = match (&c.network, &c.corpus) {
        (Some(path), None) => {
            let doc = NetworkDocument::from_json(&read_text(path)?)?;
            let g = doc.graph()?;
            let t = if c.weights == "document" {
                doc.weights(&g)?
            } else {
                vec![kast_core::rational::int(1); g.edges().len()]
            };
            (Network::new(g, t)?, Some(doc), path.display().to_string())
        }
        (None, Some(name)) => {
            let entry = corpus::default_corpus()
                .into_iter()
                .find(|e| &e.name == name)
                .ok_or_else(|| CliError::Usage(format!("no corpus network named `{name}`")))?;
            (entry.network, None, entry.name)
        }
        (Some(_), Some(_)) => return Err(CliError::Usage("give either --network or --corpus".into())),
        (None, None) => return Err(CliError::Usage("a network is required (--network PATH or --corpus NAME)".into())),
    };
    let network = match c.weights.as_str() {
        "document" => net,
        "unit" => Network::unit(net.graph),
        other => match other.strip_prefix("seed:").map(str::parse::<u64>) {
            Some(Ok(seed)) => {
                let t = sample_positive_weights(&net.graph, seed);
                Network::new(net.graph, t)?
            }
            _ => return Err(CliError::Usage(format!("--weights expects unit, document or seed:N, got `{other}`"))),
        },
    };
    Ok(Loaded { network, document, name })
}

/// The signature selected by `--signature`.
pub fn signature(c: &Common, loaded: &Loaded) -> Result<Vec<i8>, CliError> {
    let g = &loaded.network.graph;
    let stored = match &loaded.document {
        Some(doc) => doc.signature_for(g)?,
        None => None,
    };
    match (c.signature, stored) {
        (Some(SignatureSource::Document), None) => Err(CliError::Usage("the network document carries no signature".into())),
        (Some(SignatureSource::Document) | None, Some(s)) => Ok(s),
        _ => Ok(construct_signature(g)?),
    }
}

/// Parses `--base`, checking the labels against `n`.
pub fn base(c: &Common, g: &PlanarBipartiteGraph) -> Result<Option<Vec<usize>>, CliError> {
    let Some(text) = &c.base else { return Ok(None) };
    let mut out = Vec::new();
    for part in text.split(',') {
        let i: usize = part
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad base label `{part}`")))?;
        if i == 0 || i > g.n() {
            return Err(CliError::Usage(format!("base label {i} outside 1..={}", g.n())));
        }
        out.push(i);
    }
    out.sort_unstable();
    out.dedup();
    if out.len() != g.k() {
        return Err(CliError::Usage(format!("base needs {} distinct labels", g.k())));
    }
    Ok(Some(out))
}

/// Requires `--base`.
pub fn required_base(c: &Common, g: &PlanarBipartiteGraph) -> Result<Vec<usize>, CliError> {
    base(c, g)?.ok_or_else(|| CliError::Usage("--base is required".into()))
}

fn write(c: &Common, text: &str) -> Result<(), CliError> {
    match &c.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Writes `value` as pretty JSON.
pub fn emit<T: Serialize>(c: &Common, value: &T) -> Result<(), CliError> {
    if c.format == Format::Csv {
        return Err(CliError::Usage("this command has no CSV output".into()));
    }
    let mut text = serde_json::to_string_pretty(value).expect("outputs serialize");
    text.push('\n');
    write(c, &text)
}

/// Writes JSON or, with `--format csv`, the given table.
pub fn emit_table<T: Serialize>(c: &Common, value: &T, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    match c.format {
        Format::Json => emit(c, value),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).expect("in-memory write");
            for r in rows {
                w.write_record(r).expect("in-memory write");
            }
            let bytes = w.into_inner().expect("in-memory write");
            write(c, &String::from_utf8(bytes).expect("utf-8"))
        }
    }
}
