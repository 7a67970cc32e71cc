//! File formats: edge lists, ground-truth partitions, correspondence files.
//!
//! Edge list: one edge per line, whitespace-separated `src dst [weight]`,
//! `#` starts a comment. Partition: `node cluster` per line. Correspondence:
//! tab-separated node labels, one tuple per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use gwlearn::tasks::Partition;
use gwlearn::{CorrespondenceSet, DirectedPolicy, Edge, MeasureGraph};

pub fn read_edges(path: &Path) -> Result<Vec<Edge>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading edge list {}", path.display()))?;
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            [src, dst] => edges.push(Edge::new(*src, *dst)),
            [src, dst, w] => {
                let weight: f64 = w.parse().with_context(|| {
                    format!("{}:{}: bad weight {w:?}", path.display(), lineno + 1)
                })?;
                edges.push(Edge::weighted(*src, *dst, weight));
            }
            _ => bail!(
                "{}:{}: expected `src dst [weight]`, got {raw:?}",
                path.display(),
                lineno + 1
            ),
        }
    }
    Ok(edges)
}

pub fn load_graph(path: &Path, policy: DirectedPolicy, a: f64, b: f64) -> Result<MeasureGraph> {
    let edges = read_edges(path)?;
    MeasureGraph::from_edges(&edges, policy, a, b)
        .with_context(|| format!("building graph from {}", path.display()))
}

/// Serialize a graph as an edge list. Symmetric graphs emit each undirected
/// edge once (upper triangle); anything else emits every stored entry.
/// Unit weights are omitted so binary graphs round-trip to two columns.
pub fn edge_list_text(g: &MeasureGraph) -> String {
    let mut out = String::new();
    let symmetric = g.adjacency().is_symmetric(0.0);
    for (r, c, w) in g.adjacency().triplets() {
        if symmetric && r > c {
            continue;
        }
        if w == 1.0 {
            let _ = writeln!(out, "{}\t{}", g.label(r), g.label(c));
        } else {
            let _ = writeln!(out, "{}\t{}\t{}", g.label(r), g.label(c), w);
        }
    }
    out
}

/// Ground-truth partition file: `node cluster` per line. Cluster tokens may
/// be arbitrary strings; they are densified in first-appearance order.
pub fn read_partition_assignment(path: &Path) -> Result<BTreeMap<String, usize>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading partition file {}", path.display()))?;
    let mut clusters: BTreeMap<String, usize> = BTreeMap::new();
    let mut ids: Vec<String> = Vec::new();
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [node, cluster] = fields.as_slice() else {
            bail!("{}:{}: expected `node cluster`", path.display(), lineno + 1);
        };
        let id = *clusters.entry((*cluster).into()).or_insert_with(|| {
            ids.push((*cluster).into());
            ids.len() - 1
        });
        if out.insert((*node).into(), id).is_some() {
            bail!("{}:{}: node {node:?} assigned twice", path.display(), lineno + 1);
        }
    }
    Ok(out)
}

pub fn partition_text(p: &Partition) -> String {
    let mut out = String::new();
    for (label, cluster) in p.assignment() {
        let _ = writeln!(out, "{label}\t{cluster}");
    }
    out
}

pub fn read_correspondences(path: &Path) -> Result<CorrespondenceSet> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading correspondence file {}", path.display()))?;
    let mut tuples = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        tuples.push(line.split_whitespace().map(String::from).collect());
    }
    CorrespondenceSet::from_tuples(tuples).context("correspondence tuples must share one arity")
}

pub fn correspondence_text(s: &CorrespondenceSet) -> String {
    let mut out = String::new();
    for tuple in s.iter() {
        let _ = writeln!(out, "{}", tuple.join("\t"));
    }
    out
}

/// Build a partition object for a graph from a label→cluster map (used to
/// evaluate AMI against file-based ground truth).
pub fn partition_from_map(
    g: &MeasureGraph,
    map: &BTreeMap<String, usize>,
) -> Result<Partition> {
    let mut assignment = Vec::with_capacity(g.num_nodes());
    let k = map.values().copied().max().map_or(0, |m| m + 1);
    for label in g.labels() {
        match map.get(label) {
            Some(&c) => assignment.push(c),
            None => bail!("ground truth does not cover node {label:?}"),
        }
    }
    Partition::from_index_assignment(g, &assignment, k.max(1))
        .context("assembling ground-truth partition")
}
