//! Building the entangled resource state a graph describes.
//!
//! Every node is prepared as a squeezed vacuum — momentum-squeezed by
//! default, or per its explicit preparation override — and every edge then
//! applies one signed phase coupling. All couplings are diagonal in the
//! position basis and commute, so the edge order never matters; a property
//! test pins that down.

use crate::algebra::Atom;
use crate::backend::fock::{FockSim, FockState};
use crate::backend::gaussian::GaussianState;
use crate::error::Result;
use crate::graph::graph::{ModeGraph, NodePrep};

/// The preparation for `node`: its override if present, else a
/// momentum-squeezed vacuum of width `default_omega`.
pub fn node_prep(graph: &ModeGraph, node: usize, default_omega: f64) -> NodePrep {
    graph
        .preps
        .get(&node)
        .copied()
        .unwrap_or(NodePrep::Momentum { omega: default_omega })
}

/// Builds the full resource state on the covariance backend, one mode per
/// node in id order.
pub fn gaussian_graph_state(graph: &ModeGraph, default_omega: f64) -> Result<GaussianState> {
    graph.validate()?;
    let mut state = GaussianState::vacuum(0);
    for node in 0..graph.n_nodes {
        append_prepared_gaussian(&mut state, node_prep(graph, node, default_omega))?;
    }
    for e in &graph.edges {
        state.apply_atom(&Atom::Cz { i: e.a, j: e.b, sign: e.sign })?;
    }
    Ok(state)
}

/// Appends one mode in the given preparation to a covariance-backend state.
pub fn append_prepared_gaussian(state: &mut GaussianState, prep: NodePrep) -> Result<()> {
    match prep {
        NodePrep::Momentum { omega } => state.append_squeezed(omega),
        NodePrep::Position { omega } => {
            let mode = state.n_modes();
            state.append_squeezed(omega)?;
            state.apply_atom(&Atom::Fourier { mode, k: 1 })
        }
    }
}

/// Builds the full resource state on the amplitude backend, one mode per
/// node in id order. Exponential in the node count — keep graphs small.
pub fn fock_graph_state(sim: &FockSim, graph: &ModeGraph, default_omega: f64) -> Result<FockState> {
    graph.validate()?;
    let mut state = sim.vacuum(0);
    for node in 0..graph.n_nodes {
        state = attach_prepared_fock(sim, &state, node_prep(graph, node, default_omega))?;
    }
    for e in &graph.edges {
        sim.apply_atom(&mut state, &Atom::Cz { i: e.a, j: e.b, sign: e.sign })?;
    }
    Ok(state)
}

/// Appends one mode in the given preparation to an amplitude-backend state.
pub fn attach_prepared_fock(sim: &FockSim, state: &FockState, prep: NodePrep) -> Result<FockState> {
    match prep {
        NodePrep::Momentum { omega } => sim.attach_squeezed(state, omega),
        NodePrep::Position { omega } => {
            let mode = state.n_modes();
            let mut out = sim.attach_squeezed(state, omega)?;
            sim.apply_atom(&mut out, &Atom::Fourier { mode, k: 1 })?;
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::Quadrature;
    use crate::graph::brickwork::two_wire_brickwork;
    use crate::graph::graph::Edge;

    #[test]
    fn preparation_variances_match_their_kind() {
        let mut g = two_wire_brickwork(2, &[]).unwrap().0;
        g.edges.clear();
        g.inputs.clear();
        g.order.clear();
        g.successors.clear();
        g.outputs = vec![0, 1, 2, 3];
        g.preps.insert(1, NodePrep::Position { omega: 0.3 });
        let st = gaussian_graph_state(&g, 0.5).unwrap();
        // default momentum-squeezed node
        assert!((st.variance_of(0, Quadrature::P) - 0.125).abs() < 1e-12);
        assert!((st.variance_of(0, Quadrature::Q) - 2.0).abs() < 1e-12);
        // position-squeezed override
        assert!((st.variance_of(1, Quadrature::Q) - 0.045).abs() < 1e-12);
    }

    #[test]
    fn edge_order_never_matters() {
        let (g, _) = two_wire_brickwork(3, &[(1, 1), (2, -1)]).unwrap();
        let mut shuffled = g.clone();
        shuffled.edges.reverse();
        shuffled.edges.swap(1, 4);
        let a = gaussian_graph_state(&g, 0.4).unwrap();
        let b = gaussian_graph_state(&shuffled, 0.4).unwrap();
        assert!((a.cov() - b.cov()).abs().max() < 1e-9);
        assert!((a.mean() - b.mean()).abs().max() < 1e-9);
    }

    #[test]
    fn couplings_spread_position_noise() {
        let mut g = two_wire_brickwork(2, &[]).unwrap().0;
        g.edges = vec![Edge::new(0, 1, 1)];
        g.inputs.clear();
        g.order.clear();
        g.successors.clear();
        g.outputs = vec![0, 1, 2, 3];
        let st = gaussian_graph_state(&g, 0.5).unwrap();
        // coupled pair: p picks up the partner's broad q
        assert!((st.variance_of(0, Quadrature::P) - (0.125 + 2.0)).abs() < 1e-9);
        // untouched pair keeps the bare squeezing
        assert!((st.variance_of(2, Quadrature::P) - 0.125).abs() < 1e-12);
    }

    #[test]
    fn backends_agree_on_a_small_graph_state() {
        let (g, _) = two_wire_brickwork(2, &[(1, 1)]).unwrap();
        let gauss = gaussian_graph_state(&g, 0.6).unwrap();
        let sim = FockSim::new(24);
        let fock = fock_graph_state(&sim, &g, 0.6).unwrap();
        for m in 0..4 {
            for quad in [Quadrature::Q, Quadrature::P] {
                let gv = gauss.variance_of(m, quad);
                let fv = sim.variance_quadrature(&fock, m, quad).unwrap();
                assert!(
                    (gv - fv).abs() < 0.01 * gv.max(1.0),
                    "mode {m} {quad:?}: covariance {gv} vs amplitude {fv}"
                );
            }
        }
    }
}
