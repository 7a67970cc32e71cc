//! Evaluation metrics for matching (node correctness and its multi-graph
//! generalizations, edge correctness) and partitioning (adjusted mutual
//! information).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{GwError, Result};
use crate::graph::MeasureGraph;
use crate::math;
use crate::tasks::{CorrespondenceSet, Partition};

/// Scalar results of one experiment run, plus an instance descriptor.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MetricReport {
    pub instance: String,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub ami: Option<f64>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub nc: Option<f64>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub nc_at_1: Option<f64>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub nc_at_all: Option<f64>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub edge_correctness: Option<f64>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub wall_time_seconds: Option<f64>,
}

/// Node correctness: the percentage of found pairs present in the truth.
pub fn node_correctness(found: &CorrespondenceSet, truth: &CorrespondenceSet) -> Result<f64> {
    if found.is_empty() {
        return Err(GwError::EmptyCorrespondence);
    }
    let truth_set: BTreeSet<&[String]> = truth.iter().map(|t| t.as_slice()).collect();
    let hits = found.iter().filter(|t| truth_set.contains(t.as_slice())).count();
    Ok(100.0 * hits as f64 / found.len() as f64)
}

/// NC@1 and NC@all over M-tuples, judged against label identity: a pair
/// inside a tuple is correct when its two labels are equal. NC@1 counts
/// tuples with at least one correct pair, NC@all tuples whose pairs are all
/// correct.
pub fn nc_multi(found: &CorrespondenceSet) -> Result<(f64, f64)> {
    if found.is_empty() {
        return Err(GwError::EmptyCorrespondence);
    }
    let arity = found.arity().ok_or(GwError::MixedArity)?;
    if arity < 2 {
        return Err(GwError::MixedArity);
    }
    let mut at_1 = 0usize;
    let mut at_all = 0usize;
    for tuple in found.iter() {
        let mut any = false;
        let mut all = true;
        for i in 0..arity {
            for j in (i + 1)..arity {
                if tuple[i] == tuple[j] {
                    any = true;
                } else {
                    all = false;
                }
            }
        }
        at_1 += any as usize;
        at_all += all as usize;
    }
    let denom = found.len() as f64;
    Ok((100.0 * at_1 as f64 / denom, 100.0 * at_all as f64 / denom))
}

/// Percentage of source edges whose mapped endpoints are adjacent in the
/// target. `mapping` must cover every source node.
pub fn edge_correctness(
    gs: &MeasureGraph,
    gt: &MeasureGraph,
    mapping: &CorrespondenceSet,
) -> Result<f64> {
    let mut map: BTreeMap<&str, &str> = BTreeMap::new();
    for t in mapping.iter() {
        if t.len() != 2 {
            return Err(GwError::MixedArity);
        }
        map.insert(&t[0], &t[1]);
    }
    let mut target_of = Vec::with_capacity(gs.num_nodes());
    for l in gs.labels() {
        let mapped = map.get(l.as_str()).ok_or_else(|| GwError::UncoveredSourceNode(l.clone()))?;
        let idx = gt
            .index_of(mapped)
            .ok_or_else(|| GwError::UnknownLabel((*mapped).into()))?;
        target_of.push(idx);
    }
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (r, c, _) in gs.adjacency().triplets() {
        edges.insert((r.min(c), r.max(c)));
    }
    if edges.is_empty() {
        return Err(GwError::EmptyEdgeList);
    }
    let preserved = edges
        .iter()
        .filter(|&&(i, j)| {
            let (u, v) = (target_of[i], target_of[j]);
            gt.adjacency().get(u, v) != 0.0 || gt.adjacency().get(v, u) != 0.0
        })
        .count();
    Ok(100.0 * preserved as f64 / edges.len() as f64)
}

/// Adjusted mutual information between two partitions of the same node set,
/// with the hypergeometric (permutation-model) expected-MI correction and
/// the arithmetic-mean normalizer:
///
/// ```text
/// AMI = (MI − E[MI]) / (mean(H1, H2) − E[MI])
/// ```
///
/// A vanishing denominator yields 1 for identical partitions and 0 otherwise.
pub fn adjusted_mutual_information(p1: &Partition, p2: &Partition) -> Result<f64> {
    let a1 = p1.assignment();
    let a2 = p2.assignment();
    if a1.len() != a2.len() || a1.keys().zip(a2.keys()).any(|(x, y)| x != y) {
        return Err(GwError::NodeSetMismatch);
    }
    let n = a1.len();

    // contingency over dense cluster ids
    let mut cont: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut rows: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cols: BTreeMap<usize, usize> = BTreeMap::new();
    for (label, &c1) in a1 {
        let c2 = a2[label];
        *cont.entry((c1, c2)).or_insert(0) += 1;
        *rows.entry(c1).or_insert(0) += 1;
        *cols.entry(c2).or_insert(0) += 1;
    }
    let nf = n as f64;
    let entropy = |counts: &BTreeMap<usize, usize>| -> f64 {
        counts
            .values()
            .map(|&c| {
                let p = c as f64 / nf;
                -p * math::ln(p)
            })
            .sum()
    };
    let h1 = entropy(&rows);
    let h2 = entropy(&cols);
    let mi: f64 = cont
        .iter()
        .map(|(&(i, j), &nij)| {
            let pij = nij as f64 / nf;
            pij * math::ln(nf * nij as f64 / (rows[&i] as f64 * cols[&j] as f64))
        })
        .sum();

    // E[MI] under the permutation model.
    let lf: Vec<f64> = {
        // ln(k!) table via lgamma
        (0..=n).map(|k| math::lgamma(k as f64 + 1.0)).collect()
    };
    let mut emi = 0.0;
    for &ai in rows.values() {
        for &bj in cols.values() {
            let lo = 1.max((ai + bj).saturating_sub(n));
            let hi = ai.min(bj);
            for nij in lo..=hi {
                let t1 = nij as f64 / nf * math::ln(nf * nij as f64 / (ai as f64 * bj as f64));
                let t2 = lf[ai] + lf[bj] + lf[n - ai] + lf[n - bj]
                    - lf[n]
                    - lf[nij]
                    - lf[ai - nij]
                    - lf[bj - nij]
                    - lf[n + nij - ai - bj];
                emi += t1 * math::exp(t2);
            }
        }
    }

    let denom = 0.5 * (h1 + h2) - emi;
    if math::abs(denom) < 1e-15 {
        return Ok(if same_clusters(p1, p2) { 1.0 } else { 0.0 });
    }
    Ok(((mi - emi) / denom).clamp(-1.0, 1.0))
}

/// True when both partitions induce the same family of node sets.
fn same_clusters(p1: &Partition, p2: &Partition) -> bool {
    fn family(p: &Partition) -> BTreeSet<Vec<&str>> {
        let mut clusters: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for (label, &c) in p.assignment() {
            clusters.entry(c).or_default().push(label);
        }
        clusters.into_values().collect()
    }
    family(p1) == family(p2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{DirectedPolicy, Edge};
    use crate::tasks::CorrespondenceSet;
    use alloc::vec;

    fn pairs(ps: &[(&str, &str)]) -> CorrespondenceSet {
        CorrespondenceSet::from_tuples(
            ps.iter().map(|(a, b)| vec![(*a).into(), (*b).into()]).collect(),
        )
        .unwrap()
    }

    fn line_graph(n: usize) -> MeasureGraph {
        let edges: Vec<Edge> = (0..n - 1)
            .map(|i| Edge::new(alloc::format!("{i}"), alloc::format!("{}", i + 1)))
            .collect();
        MeasureGraph::from_edges(&edges, DirectedPolicy::Symmetrize, 0.0, 1.0).unwrap()
    }

    fn partition_of(g: &MeasureGraph, assign: &[usize], k: usize) -> Partition {
        Partition::from_index_assignment(g, assign, k).unwrap()
    }

    #[test]
    fn node_correctness_examples() {
        let truth = pairs(&[("a", "a"), ("b", "b"), ("c", "c")]);
        assert_eq!(node_correctness(&truth, &truth).unwrap(), 100.0);
        let disjoint = pairs(&[("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(node_correctness(&disjoint, &truth).unwrap(), 0.0);
        let half = pairs(&[
            ("a", "a"),
            ("b", "b"),
            ("c", "c"),
            ("d", "x"),
            ("e", "x"),
            ("f", "x"),
        ]);
        let truth6 = pairs(&[
            ("a", "a"),
            ("b", "b"),
            ("c", "c"),
            ("d", "d"),
            ("e", "e"),
            ("f", "f"),
        ]);
        assert_eq!(node_correctness(&half, &truth6).unwrap(), 50.0);
        assert_eq!(
            node_correctness(&CorrespondenceSet::default(), &truth).unwrap_err(),
            GwError::EmptyCorrespondence
        );
    }

    #[test]
    fn nc_multi_examples() {
        let all = CorrespondenceSet::from_tuples(vec![
            vec!["a".into(), "a".into(), "a".into()],
            vec!["b".into(), "b".into(), "b".into()],
        ])
        .unwrap();
        assert_eq!(nc_multi(&all).unwrap(), (100.0, 100.0));

        // one correct pair, not all pairs
        let partial =
            CorrespondenceSet::from_tuples(vec![vec!["a".into(), "a".into(), "b".into()]])
                .unwrap();
        assert_eq!(nc_multi(&partial).unwrap(), (100.0, 0.0));

        // 10 tuples: 6 with some correct pair, of which 3 fully correct
        let mut tuples = Vec::new();
        for i in 0..3 {
            tuples.push(vec![alloc::format!("f{i}"); 3]);
        }
        for i in 0..3 {
            tuples.push(vec![alloc::format!("p{i}"), alloc::format!("p{i}"), "zz".into()]);
        }
        for i in 0..4 {
            tuples.push(vec![
                alloc::format!("w{i}"),
                alloc::format!("x{i}"),
                alloc::format!("y{i}"),
            ]);
        }
        let set = CorrespondenceSet::from_tuples(tuples).unwrap();
        assert_eq!(nc_multi(&set).unwrap(), (60.0, 30.0));
    }

    #[test]
    fn ami_identical_is_one() {
        let g = line_graph(6);
        let p = partition_of(&g, &[0, 0, 0, 1, 1, 1], 2);
        assert!((adjusted_mutual_information(&p, &p).unwrap() - 1.0).abs() < 1e-12);
        // and is invariant to relabeling the clusters
        let q = partition_of(&g, &[1, 1, 1, 0, 0, 0], 2);
        assert!((adjusted_mutual_information(&p, &q).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ami_against_single_cluster_is_zero() {
        let g = line_graph(6);
        let p = partition_of(&g, &[0, 0, 0, 1, 1, 1], 2);
        let one = partition_of(&g, &[0; 6], 1);
        assert!(adjusted_mutual_information(&p, &one).unwrap().abs() < 1e-12);
        // both trivial: identical by convention
        assert!((adjusted_mutual_information(&one, &one).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ami_contingency_2112_frozen_value() {
        // contingency [[2,1],[1,2]] on 6 nodes; the hypergeometric-corrected
        // closed form evaluates to -1/9.
        let g = line_graph(6);
        let p = partition_of(&g, &[0, 0, 0, 1, 1, 1], 2);
        let q = partition_of(&g, &[0, 0, 1, 0, 1, 1], 2);
        let ami = adjusted_mutual_information(&p, &q).unwrap();
        assert!((ami - (-1.0 / 9.0)).abs() < 1e-9, "{ami}");
    }

    #[test]
    fn ami_rejects_node_set_mismatch() {
        let g = line_graph(6);
        let h = line_graph(5);
        let p = partition_of(&g, &[0, 0, 0, 1, 1, 1], 2);
        let q = partition_of(&h, &[0, 0, 1, 1, 1], 2);
        assert_eq!(adjusted_mutual_information(&p, &q).unwrap_err(), GwError::NodeSetMismatch);
    }

    #[test]
    fn edge_correctness_examples() {
        let g = line_graph(4);
        let identity = pairs(&[("0", "0"), ("1", "1"), ("2", "2"), ("3", "3")]);
        assert_eq!(edge_correctness(&g, &g, &identity).unwrap(), 100.0);

        // edgeless target preserves nothing
        let labels: Vec<String> = (0..4).map(|i| alloc::format!("{i}")).collect();
        let edgeless = MeasureGraph::from_parts(
            labels,
            crate::sparse::CsrMatrix::empty(4, 4),
            vec![0.25; 4],
        )
        .unwrap();
        assert_eq!(edge_correctness(&g, &edgeless, &identity).unwrap(), 0.0);

        // 3 of 4 cycle edges survive when the target lacks one of them
        let cycle_edges = [
            Edge::new("0", "1"),
            Edge::new("1", "2"),
            Edge::new("2", "3"),
            Edge::new("3", "0"),
        ];
        let cycle =
            MeasureGraph::from_edges(&cycle_edges, DirectedPolicy::Symmetrize, 0.0, 1.0).unwrap();
        let broken = [Edge::new("0", "1"), Edge::new("1", "2"), Edge::new("2", "3")];
        let target =
            MeasureGraph::from_edges(&broken, DirectedPolicy::Symmetrize, 0.0, 1.0).unwrap();
        assert_eq!(edge_correctness(&cycle, &target, &identity).unwrap(), 75.0);

        let reversed = pairs(&[("0", "3"), ("1", "2"), ("2", "1"), ("3", "0")]);
        assert_eq!(edge_correctness(&g, &g, &reversed).unwrap(), 100.0);

        let partial = pairs(&[("0", "0"), ("1", "1")]);
        assert!(matches!(
            edge_correctness(&g, &g, &partial),
            Err(GwError::UncoveredSourceNode(_))
        ));
    }
}
