//! Report rendering and batch runs.
//!
//! Single analyses render to JSON, DOT or a Markdown table row. Batch
//! commands produce a [`RunManifest`], whose JSON form is byte-stable: maps
//! are ordered and nothing time-dependent is recorded.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::catalog::{classify_zonotopes, ZonotopeClass};
use crate::delone::{admissible_families, slice_census, sweep, CrossFamily, D4Report, SlicingConfig, SliceCensus};
use crate::error::{DeloneError, OracleError};
use crate::oracle::{crosscheck, k33_generators, oracle_belts, oracle_facets};
use crate::venkov::{analyze, ZonotopeAnalysis};
use crate::zonograph::{enumerate_candidate_graphs, reducibility, ZonotopeGraph};

pub fn facet_label(index: usize) -> String {
    format!("F{}", index + 1)
}

pub fn belt_label(index: usize) -> String {
    format!("f{}", index + 1)
}

/// The analysis of one zonotope graph as a JSON object with keys `graph`,
/// `facets`, `belts`, `venkov`, `projections`, `cycle_dim`, `gain_rank`,
/// `half_belt_rank` and `pass`.
pub fn analysis_json(a: &ZonotopeAnalysis) -> Value {
    let index: BTreeMap<_, _> = a.facets.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let facets: Vec<Value> = a
        .facets
        .iter()
        .enumerate()
        .map(|(i, f)| json!({ "id": facet_label(i), "parts": [f.first, f.second] }))
        .collect();
    let belts: Vec<Value> = a
        .belts
        .iter()
        .enumerate()
        .map(|(i, b)| {
            json!({
                "id": belt_label(i),
                "parts": b.parts,
                "primitive": b.primitive,
                "facets": b.facets.iter().map(|f| facet_label(index[f])).collect::<Vec<_>>(),
            })
        })
        .collect();
    let edges: Vec<Value> = a
        .venkov
        .edges
        .iter()
        .map(|e| json!({ "belt": belt_label(e.belt), "ends": [facet_label(e.tail), facet_label(e.head)] }))
        .collect();
    let projections: Vec<Value> = a
        .report
        .projections
        .iter()
        .map(|p| {
            json!({
                "zone": p.zone,
                "kind": p.kind.name(),
                "survivors": p.survivors.iter().map(|&v| facet_label(v)).collect::<Vec<_>>(),
                "subgraph_edges": p.subgraph_edges,
                "basis_size": p.basis_size,
            })
        })
        .collect();
    json!({
        "graph": a.graph.to_string(),
        "facets": facets,
        "belts": belts,
        "venkov": { "V": a.venkov.vertex_count(), "E": a.venkov.edge_count(), "edges": edges },
        "projections": projections,
        "cycle_dim": a.report.cycle_dim,
        "gain_rank": a.report.gain_rank,
        "half_belt_rank": a.report.half_belt_rank,
        "pass": a.report.pass,
    })
}

/// The primitive Venkov graph in Graphviz syntax: vertices `F1`, `F2`, ...
/// and edges labeled by belt.
pub fn analysis_dot(a: &ZonotopeAnalysis) -> String {
    a.venkov.to_dot("venkov", facet_label, |e| belt_label(e.belt))
}

pub const MARKDOWN_HEADER: &str = "| # | Graph | Facets or special properties | Primitive Venkov graph |\n|---|---|---|---|\n";

fn facet_list(a: &ZonotopeAnalysis) -> String {
    a.facets.iter().enumerate().map(|(i, f)| format!("{}: {}", facet_label(i), f)).collect::<Vec<_>>().join("; ")
}

fn venkov_cell(a: &ZonotopeAnalysis) -> String {
    let r = &a.report;
    format!(
        "{} vertices, {} edges; cycle_dim {}, gain rank {}, {}",
        a.venkov.vertex_count(),
        a.venkov.edge_count(),
        r.cycle_dim,
        r.gain_rank,
        if r.pass { "pass" } else { "FAIL" }
    )
}

/// One table row: number, graph, facet list, Venkov graph summary.
pub fn markdown_row(number: usize, a: &ZonotopeAnalysis, properties: Option<&str>) -> String {
    let props = properties.map_or_else(|| facet_list(a), str::to_string);
    format!("| {} | {} | {} | {} |\n", number, a.graph, props, venkov_cell(a))
}

pub fn analysis_markdown(a: &ZonotopeAnalysis) -> String {
    let mut out = String::from(MARKDOWN_HEADER);
    out.push_str(&markdown_row(1, a, None));
    out
}

fn class_properties(c: &ZonotopeClass) -> Option<String> {
    if c.factors.iter().all(|f| f == "segment") {
        Some(format!("{}-dimensional cube", c.factors.len()))
    } else if c.is_reducible() {
        Some(format!("direct sum of {}", c.factors.join(" and ")))
    } else if c.zhitomirskii {
        Some("all belts primitive (Zhitomirskii case)".to_string())
    } else {
        None
    }
}

/// The table of zonotope classes, reducible rows first, then by facet count.
pub fn classes_markdown(classes: &[ZonotopeClass]) -> String {
    let mut out = String::from(
        "Zonotope classes of connected five-vertex graphs. \
         Vertex labels may differ from other tabulations by a graph relabeling.\n\n",
    );
    out.push_str(MARKDOWN_HEADER);
    for (i, c) in classes.iter().enumerate() {
        let a = analyze(&c.representative);
        out.push_str(&markdown_row(i + 1, &a, class_properties(c).as_deref()));
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Case {
    pub name: String,
    pub pass: bool,
    pub report: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The outcome of one batch command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input_digest: String,
    pub cases: Vec<Case>,
    pub summary: Value,
    pub verdict: Verdict,
}

impl RunManifest {
    /// The verdict is a pass when every case passes and `summary_ok` holds.
    pub fn new(command: &str, input: &[u8], cases: Vec<Case>, summary: Value, summary_ok: bool) -> Self {
        let pass = summary_ok && cases.iter().all(|c| c.pass);
        RunManifest {
            command: command.to_string(),
            input_digest: sha256_hex(input),
            cases,
            summary,
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
        }
    }

    pub fn pass(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report serializes")
}

/// The K3,3 case: facet count and belt sizes of its cographic zonotope.
pub fn k33_case() -> Result<Case, OracleError> {
    let gens = k33_generators();
    let facets = oracle_facets(&gens)?;
    let belts = oracle_belts(&gens)?;
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for b in &belts {
        *sizes.entry(b.size).or_insert(0) += 1;
    }
    let zhitomirskii = belts.iter().all(|b| b.size == 6);
    Ok(Case {
        name: "K3,3".to_string(),
        pass: zhitomirskii,
        report: json!({
            "facets": 2 * facets.len(),
            "facet_pairs": facets.len(),
            "belts": belts.len(),
            "belt_sizes": sizes,
            "zhitomirskii": zhitomirskii,
            "note": if zhitomirskii { "all belts size 6; Zhitomirskii" } else { "non-primitive belts present" },
        }),
    })
}

/// All connected five-vertex graphs, their zonotope classes, and K3,3.
pub struct ZonotopeSweep {
    pub graphs: Vec<ZonotopeGraph>,
    pub classes: Vec<ZonotopeClass>,
    pub manifest: RunManifest,
}

pub fn zonotope_sweep() -> Result<ZonotopeSweep, OracleError> {
    let graphs = enumerate_candidate_graphs();
    let analyses: Vec<ZonotopeAnalysis> = graphs.par_iter().map(analyze).collect();
    let classes = classify_zonotopes(&graphs);
    let class_of = |g: &ZonotopeGraph| classes.iter().position(|c| c.members.contains(g)).expect("classified");
    let mut cases: Vec<Case> = analyses
        .iter()
        .map(|a| {
            let blocks: Vec<String> = reducibility(&a.graph).iter().map(|b| b.as_graph().to_string()).collect();
            Case {
                name: a.graph.to_string(),
                pass: a.report.pass,
                report: json!({
                    "class": class_of(&a.graph) + 1,
                    "facets": a.facets.len(),
                    "belts": a.belts.len(),
                    "primitive_belts": a.belts.iter().filter(|b| b.primitive).count(),
                    "blocks": blocks,
                    "venkov": { "V": a.venkov.vertex_count(), "E": a.venkov.edge_count() },
                    "cycle_dim": a.report.cycle_dim,
                    "gain_rank": a.report.gain_rank,
                    "pass": a.report.pass,
                }),
            }
        })
        .collect();
    cases.push(k33_case()?);
    let class_rows: Vec<Value> = classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "row": i + 1,
                "representative": c.representative.to_string(),
                "members": c.members.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "facets": c.facets,
                "belts": c.belts,
                "primitive_belts": c.primitive_belts,
                "factors": c.factors,
                "reducible": c.is_reducible(),
                "zhitomirskii": c.zhitomirskii,
                "description": c.description(),
                "cycle_dim": c.report.cycle_dim,
                "gain_rank": c.report.gain_rank,
                "pass": c.report.pass,
            })
        })
        .collect();
    let trees: Vec<&ZonotopeGraph> = graphs.iter().filter(|g| g.edge_count() == 4).collect();
    let trees_to_cube = trees.iter().all(|t| classes[class_of(t)].factors == ["segment"; 4]);
    let summary = json!({
        "graphs": graphs.len(),
        "classes": classes.len(),
        "reducible_classes": classes.iter().filter(|c| c.is_reducible()).count(),
        "zhitomirskii_classes": classes.iter().filter(|c| c.zhitomirskii).count(),
        "trees": trees.len(),
        "trees_to_cube": trees_to_cube,
        "class_rows": class_rows,
    });
    let manifest = RunManifest::new("sweep", b"sweep", cases, summary, trees_to_cube);
    Ok(ZonotopeSweep { graphs, classes, manifest })
}

/// Graph-versus-oracle comparison on every connected five-vertex graph.
pub fn crosscheck_manifest() -> Result<RunManifest, OracleError> {
    let checks = enumerate_candidate_graphs().par_iter().map(crosscheck).collect::<Result<Vec<_>, _>>()?;
    let cases: Vec<Case> =
        checks.iter().map(|c| Case { name: c.graph.to_string(), pass: c.pass(), report: to_value(c) }).collect();
    let summary = json!({
        "graphs": checks.len(),
        "facet_bijections": checks.iter().filter(|c| c.facet_bijection).count(),
        "belt_bijections": checks.iter().filter(|c| c.belt_bijection).count(),
        "size_law": checks.iter().filter(|c| c.size_law).count(),
    });
    Ok(RunManifest::new("oracle-crosscheck", b"oracle-crosscheck", cases, summary, true))
}

/// Slice census of each family's representative under its first one, two
/// and three admissible directions, with the Euler characteristic of the
/// new interior faces (it must be 1 for a subdivided 4-ball).
pub fn census_table() -> Result<(Value, bool), DeloneError> {
    let mut rows = Vec::new();
    let mut reference: BTreeMap<usize, SliceCensus> = BTreeMap::new();
    let mut ok = true;
    for f in CrossFamily::ALL {
        let directions = admissible_families(f).len();
        for k in 1..=3 {
            let chosen: Vec<usize> = (0..k).collect();
            let c = slice_census(f, &chosen)?;
            let euler = euler_characteristic(&c);
            let consistent = reference.entry(k).or_insert_with(|| c.clone()) == &c;
            ok &= consistent && euler == 1;
            rows.push(json!({
                "family": f.name(),
                "directions": directions,
                "cuts": k,
                "census": c,
                "interior_euler_characteristic": euler,
                "same_as_F1": consistent,
            }));
        }
    }
    Ok((Value::Array(rows), ok))
}

fn euler_characteristic(c: &SliceCensus) -> i64 {
    let count = |x: usize| i64::try_from(x).expect("small count");
    let polygons: usize = c.new_polygons.values().sum();
    let cells: usize = c.new_cells.values().sum();
    -count(c.new_edges) + count(polygons) - count(cells) + count(c.pieces)
}

fn d4_case(r: &D4Report) -> Case {
    Case { name: r.config.to_string(), pass: r.pass, report: to_value(r) }
}

/// Runs the gain-cycle check on `configs`. `input` is digested as the
/// command's input (the config file, or the command line for a full sweep).
pub fn d4_manifest(configs: &[SlicingConfig], input: &[u8]) -> Result<RunManifest, DeloneError> {
    let (reports, summary) = sweep(configs)?;
    let (census, census_ok) = census_table()?;
    let ok = census_ok && summary.pass();
    let summary = json!({
        "sweep": summary,
        "census": census,
        "triangulations": reports.iter().filter(|r| r.all_triangles).count(),
    });
    let cases = reports.iter().map(d4_case).collect();
    Ok(RunManifest::new("d4", input, cases, summary, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zonograph::house_graph;

    #[test]
    fn house_json_schema() {
        let v = analysis_json(&analyze(&house_graph()));
        for key in ["graph", "facets", "belts", "venkov", "projections", "cycle_dim", "gain_rank", "pass"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["venkov"]["V"], 10);
        assert_eq!(v["venkov"]["E"], 30);
        assert_eq!(v["cycle_dim"], 21);
        assert_eq!(v["pass"], true);
        assert_eq!(v["facets"][0]["parts"], json!([[1], [2, 3, 4, 5]]));
    }

    #[test]
    fn house_markdown_row() {
        let md = analysis_markdown(&analyze(&house_graph()));
        assert!(md.starts_with(MARKDOWN_HEADER));
        assert!(md.contains("F1: {1} and {2,3,4,5}; F2: {1,2} and {3,4,5}; F3: {1,5} and {2,3,4}"));
        assert!(md.contains("F10: {1,3,4,5} and {2} |"));
    }

    #[test]
    fn dot_has_one_node_per_facet_pair() {
        let dot = analysis_dot(&analyze(&house_graph()));
        let nodes = dot.lines().filter(|l| l.trim_end().ends_with("\";") && !l.contains("--")).count();
        assert_eq!(nodes, 10);
        assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 30);
    }

    #[test]
    fn manifest_verdict_and_digest() {
        let ok = Case { name: "a".into(), pass: true, report: json!({}) };
        let bad = Case { name: "b".into(), pass: false, report: json!({}) };
        let m = RunManifest::new("x", b"abc", vec![ok.clone()], json!({}), true);
        assert!(m.pass());
        assert_eq!(m.input_digest, "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
        assert!(!RunManifest::new("x", b"abc", vec![ok.clone(), bad], json!({}), true).pass());
        assert!(!RunManifest::new("x", b"abc", vec![ok], json!({}), false).pass());
    }

    #[test]
    fn census_euler_characteristics() {
        let (rows, ok) = census_table().unwrap();
        assert!(ok);
        assert_eq!(rows.as_array().unwrap().len(), 9);
    }
}
