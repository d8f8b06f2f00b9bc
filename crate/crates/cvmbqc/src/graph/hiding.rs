//! Edge hiding: disconnector nodes that make links tunable at prep time.
//!
//! A direct phase coupling between two cluster nodes is either present or
//! absent in the graph description. Replacing the edge `u — w` by a two-hop
//! path `u — d — w` through a fresh node `d` moves that choice into the
//! *state* prepared at `d`: a momentum-squeezed `d` relays the coupling
//! almost perfectly, while a position-squeezed `d` pins its position near
//! zero so both new couplings act on (nearly) nothing and the link
//! effectively vanishes. Since prepared states are invisible to anyone who
//! only sees the graph and the measurement stream, the presence of the link
//! becomes hidden information, quantified by the surviving mutual
//! information between the two sides.

use crate::error::{Error, Result};
use crate::graph::graph::{Edge, ModeGraph, NodePrep};

/// Replaces the edge `u — w` by `u — d — w` through a fresh node `d`.
///
/// The new node carries `prep` as an explicit preparation override and is
/// appended to the outputs (it is never measured; analyses trace it out).
/// Both new edges inherit the original edge's sign. Returns the extended
/// graph and the id of `d`.
pub fn insert_disconnector(
    graph: &ModeGraph,
    u: usize,
    w: usize,
    prep: NodePrep,
) -> Result<(ModeGraph, usize)> {
    graph.validate()?;
    let pos = graph
        .edges
        .iter()
        .position(|e| *e == Edge::new(u, w, 1) || *e == Edge::new(u, w, -1))
        .ok_or_else(|| Error::InvalidGraph(format!("no edge between {u} and {w}")))?;
    if graph.successor(u) == Some(w) || graph.successor(w) == Some(u) {
        return Err(Error::InvalidGraph(format!(
            "edge {u} — {w} carries logical flow and cannot be hidden"
        )));
    }
    let mut g = graph.clone();
    let sign = g.edges.remove(pos).sign;
    let d = g.n_nodes;
    g.n_nodes += 1;
    if !g.names.is_empty() {
        g.names.push(format!("{}~{}", g.name(u), g.name(w)));
    }
    g.edges.push(Edge::new(u, d, sign));
    g.edges.push(Edge::new(d, w, sign));
    g.outputs.push(d);
    g.preps.insert(d, prep);
    g.validate()?;
    Ok((g, d))
}

/// A logical pattern disguised inside a larger host graph.
///
/// The host's full edge set is entangled as-is; the nodes of the logical
/// pattern sit at `embedding[i]` and keep their roles, while every other
/// host node becomes a disconnector whose prepared state decides — invisibly
/// — whether its incident couplings take effect. `corrections` records, per
/// disconnector, the kept neighbors (with coupling signs) whose momentum
/// frames must absorb the disconnector's sampled position offset.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct HiddenGraphSpec {
    /// Ready-to-run graph: host edges, logical roles at the embedded nodes,
    /// disconnectors appended to the outputs with explicit preparations.
    pub graph: ModeGraph,
    /// Logical node `i` sits at host node `embedding[i]`.
    pub embedding: Vec<usize>,
    /// Host nodes acting as disconnectors, ascending.
    pub disconnectors: Vec<usize>,
    /// Disconnector → list of `(kept neighbor, coupling sign)` pairs whose
    /// momentum displacement must be corrected by the sampled offset.
    pub corrections: std::collections::BTreeMap<usize, Vec<(usize, i8)>>,
}

/// Embeds `logical` into `host` at the declared node positions and turns
/// every unused host node into a disconnector.
///
/// The embedding must be exact on edges: kept host nodes are coupled (with
/// the same sign) precisely where the logical pattern says so. Host edges
/// touching a disconnector are left in place — at run time the disconnector's
/// position-pinned preparation nullifies them up to known momentum
/// corrections on its neighbors.
pub fn hide_graph(
    logical: &ModeGraph,
    host: &ModeGraph,
    embedding: &[usize],
    disconnector_omega: f64,
) -> Result<HiddenGraphSpec> {
    logical.validate()?;
    host.validate()?;
    if embedding.len() != logical.n_nodes {
        return Err(Error::NoEmbedding(format!(
            "embedding lists {} nodes, logical graph has {}",
            embedding.len(),
            logical.n_nodes
        )));
    }
    let mut seen = vec![false; host.n_nodes];
    for &h in embedding {
        if h >= host.n_nodes {
            return Err(Error::NoEmbedding(format!(
                "embedded node {h} outside host of {} nodes",
                host.n_nodes
            )));
        }
        if seen[h] {
            return Err(Error::NoEmbedding(format!("host node {h} used twice")));
        }
        seen[h] = true;
    }
    // Induced-subgraph check: kept host nodes must be coupled exactly as the
    // logical pattern prescribes, signs included.
    for i in 0..logical.n_nodes {
        for j in (i + 1)..logical.n_nodes {
            let logical_edge = logical
                .edges
                .iter()
                .find(|e| e.touches(i) && e.touches(j))
                .map(|e| e.sign);
            let host_edge = host
                .edges
                .iter()
                .find(|e| e.touches(embedding[i]) && e.touches(embedding[j]))
                .map(|e| e.sign);
            if logical_edge != host_edge {
                return Err(Error::NoEmbedding(format!(
                    "logical pair {i} — {j} maps to host pair {} — {}: \
                     coupling {logical_edge:?} vs {host_edge:?}",
                    embedding[i], embedding[j]
                )));
            }
        }
    }

    let disconnectors: Vec<usize> = (0..host.n_nodes).filter(|h| !seen[*h]).collect();
    let mut corrections = std::collections::BTreeMap::new();
    for &d in &disconnectors {
        let mut touched: Vec<(usize, i8)> = host
            .edges
            .iter()
            .filter(|e| e.touches(d))
            .filter_map(|e| {
                let other = if e.a == d { e.b } else { e.a };
                // Couplings between two disconnectors never reach a kept
                // node; they contribute only an overall phase.
                seen[other].then_some((other, e.sign))
            })
            .collect();
        touched.sort_unstable();
        corrections.insert(d, touched);
    }

    let mut g = ModeGraph {
        n_nodes: host.n_nodes,
        names: host.names.clone(),
        edges: host.edges.clone(),
        inputs: logical.inputs.iter().map(|&i| embedding[i]).collect(),
        outputs: logical.outputs.iter().map(|&i| embedding[i]).collect(),
        order: logical.order.iter().map(|&i| embedding[i]).collect(),
        successors: logical
            .successors
            .iter()
            .map(|(&a, &b)| (embedding[a], embedding[b]))
            .collect(),
        preps: logical
            .preps
            .iter()
            .map(|(&n, &p)| (embedding[n], p))
            .collect(),
    };
    for &d in &disconnectors {
        g.outputs.push(d);
        g.preps.insert(d, NodePrep::Position { omega: disconnector_omega });
    }
    g.validate()?;
    Ok(HiddenGraphSpec { graph: g, embedding: embedding.to_vec(), disconnectors, corrections })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::brickwork::two_wire_brickwork;

    #[test]
    fn disconnector_splits_the_edge() {
        let (g, wires) = two_wire_brickwork(3, &[(1, 1)]).unwrap();
        let (u, w) = (wires[0][1], wires[1][1]);
        let (g2, d) = insert_disconnector(&g, u, w, NodePrep::Position { omega: 0.3 }).unwrap();
        assert_eq!(g2.n_nodes, g.n_nodes + 1);
        assert!(!g2.edges.contains(&Edge::new(u, w, 1)));
        assert!(g2.edges.contains(&Edge::new(u, d, 1)));
        assert!(g2.edges.contains(&Edge::new(d, w, 1)));
        assert!(g2.outputs.contains(&d));
        assert_eq!(g2.preps.get(&d), Some(&NodePrep::Position { omega: 0.3 }));
        assert_eq!(g2.name(d), "A1~B1");
    }

    #[test]
    fn missing_edges_and_wire_links_are_rejected() {
        let (g, wires) = two_wire_brickwork(3, &[(1, 1)]).unwrap();
        let prep = NodePrep::Momentum { omega: 0.5 };
        assert!(insert_disconnector(&g, wires[0][0], wires[1][2], prep).is_err());
        assert!(insert_disconnector(&g, wires[0][0], wires[0][1], prep).is_err());
    }

    fn bare_pair(coupled: bool) -> ModeGraph {
        ModeGraph {
            n_nodes: 2,
            names: vec!["m0".into(), "m1".into()],
            edges: if coupled { vec![Edge::new(0, 1, 1)] } else { vec![] },
            inputs: vec![],
            outputs: vec![0, 1],
            order: vec![],
            successors: Default::default(),
            preps: Default::default(),
        }
    }

    #[test]
    fn identity_embedding_needs_no_disconnectors() {
        let (g, _) = two_wire_brickwork(3, &[(1, 1)]).unwrap();
        let embedding: Vec<usize> = (0..g.n_nodes).collect();
        let spec = hide_graph(&g, &g, &embedding, 0.1).unwrap();
        assert!(spec.disconnectors.is_empty());
        assert!(spec.corrections.is_empty());
        assert_eq!(spec.graph.order, g.order);
        assert_eq!(spec.graph.outputs, g.outputs);
        assert_eq!(spec.graph.edges, g.edges);
    }

    #[test]
    fn path_middle_becomes_a_disconnector_with_corrections_on_both_sides() {
        use crate::graph::brickwork::single_wire;
        let host = single_wire(3).unwrap();
        let spec = hide_graph(&bare_pair(false), &host, &[0, 2], 0.1).unwrap();
        assert_eq!(spec.disconnectors, vec![1]);
        assert_eq!(spec.corrections[&1], vec![(0, 1), (2, 1)]);
        assert_eq!(spec.graph.edges.len(), 2);
        assert!(spec.graph.outputs.contains(&1));
        assert_eq!(spec.graph.preps.get(&1), Some(&NodePrep::Position { omega: 0.1 }));
        assert!(spec.graph.order.is_empty());
    }

    #[test]
    fn pinning_a_disconnector_detaches_its_couplings() {
        use crate::graph::brickwork::single_wire;
        use crate::graph::state::gaussian_graph_state;
        let host = single_wire(3).unwrap();
        let logical = bare_pair(false);
        let reference = gaussian_graph_state(&logical, 0.5).unwrap();
        let mut last = -1.0;
        for omega_q in [1.0, 0.4, 0.1] {
            let spec = hide_graph(&logical, &host, &[0, 2], omega_q).unwrap();
            let st = gaussian_graph_state(&spec.graph, 0.5).unwrap();
            let kept = st.reduced(&[0, 2]).unwrap();
            let f = kept.fidelity(&reference).unwrap();
            assert!(f > last, "overlap {f} did not improve on {last} at width {omega_q}");
            last = f;
        }
        // the narrower the pinning, the closer the kept modes are to a state
        // where the hidden couplings simply never happened
        assert!(1.0 - last < 0.05, "residual infidelity {}", 1.0 - last);
    }

    #[test]
    fn imperfect_embeddings_are_refused() {
        use crate::error::Error;
        use crate::graph::brickwork::single_wire;
        let host = single_wire(3).unwrap();
        // wants a coupling the images do not have
        let e = hide_graph(&bare_pair(true), &host, &[0, 2], 0.1);
        assert!(matches!(e, Err(Error::NoEmbedding(_))));
        // images are coupled although the logical nodes are not
        let e = hide_graph(&bare_pair(false), &host, &[0, 1], 0.1);
        assert!(matches!(e, Err(Error::NoEmbedding(_))));
        // one host node claimed twice
        let e = hide_graph(&bare_pair(false), &host, &[2, 2], 0.1);
        assert!(matches!(e, Err(Error::NoEmbedding(_))));
    }
}
