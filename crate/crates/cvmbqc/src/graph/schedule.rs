//! Execution schedules: when to attach, couple, and measure each mode.
//!
//! A schedule linearizes a graph into backend operations. The
//! [`just_in_time`] planner attaches each mode as late as possible — right
//! before the first measurement that needs it — so the number of modes held
//! at once is set by the graph's frontier width rather than its total size.
//! The [`all_upfront`] planner attaches everything first; it exists as the
//! baseline the just-in-time variant is measured against.

use crate::error::{Error, Result};
use crate::graph::graph::ModeGraph;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// One schedule operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    /// Attach the node's mode to the live state.
    Prep {
        /// Node to attach.
        node: usize,
    },
    /// Apply the signed coupling between two live nodes.
    Couple {
        /// First endpoint.
        a: usize,
        /// Second endpoint.
        b: usize,
        /// Coupling sign.
        sign: i8,
    },
    /// Measure a live node (removing it).
    Measure {
        /// Node to measure.
        node: usize,
    },
}

/// A full run plan with its resource profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Schedule {
    /// Operations in execution order.
    pub steps: Vec<Step>,
    /// Largest number of modes live at any point.
    pub peak_live: usize,
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} steps, peak {} live modes", self.steps.len(), self.peak_live)?;
        for s in &self.steps {
            match s {
                Step::Prep { node } => writeln!(f, "  prep    {node}")?,
                Step::Couple { a, b, sign } => {
                    writeln!(f, "  couple  {a},{b} ({})", if *sign > 0 { "+" } else { "-" })?
                }
                Step::Measure { node } => writeln!(f, "  measure {node}")?,
            }
        }
        Ok(())
    }
}

/// Plans a run that attaches every mode up front.
pub fn all_upfront(graph: &ModeGraph) -> Result<Schedule> {
    graph.validate()?;
    let mut steps = Vec::new();
    for node in 0..graph.n_nodes {
        steps.push(Step::Prep { node });
    }
    for e in &graph.edges {
        steps.push(Step::Couple { a: e.a, b: e.b, sign: e.sign });
    }
    for &node in &graph.order {
        steps.push(Step::Measure { node });
    }
    Ok(Schedule { steps, peak_live: graph.n_nodes })
}

/// Plans a run that attaches each mode just before it is first needed.
///
/// Before node `j` is measured every neighbor of `j` must be live and every
/// coupling incident to `j` applied, so the planner attaches exactly those
/// neighbors and applies exactly those couplings, then measures. Couplings
/// between two never-measured (output) nodes are applied at the end.
pub fn just_in_time(graph: &ModeGraph) -> Result<Schedule> {
    graph.validate()?;
    let mut steps = Vec::new();
    let mut live: BTreeSet<usize> = BTreeSet::new();
    let mut prepped: BTreeSet<usize> = BTreeSet::new();
    let mut coupled: BTreeSet<usize> = BTreeSet::new(); // indices into graph.edges
    let mut peak = 0usize;

    let prep = |node: usize,
                    steps: &mut Vec<Step>,
                    live: &mut BTreeSet<usize>,
                    prepped: &mut BTreeSet<usize>,
                    peak: &mut usize| {
        if prepped.insert(node) {
            live.insert(node);
            steps.push(Step::Prep { node });
            *peak = (*peak).max(live.len());
        }
    };

    for &j in &graph.order {
        prep(j, &mut steps, &mut live, &mut prepped, &mut peak);
        let mut incident: Vec<usize> = (0..graph.edges.len())
            .filter(|&k| graph.edges[k].touches(j) && !coupled.contains(&k))
            .collect();
        incident.sort_by_key(|&k| graph.edges[k].other(j));
        for k in &incident {
            let other = graph.edges[*k].other(j).expect("incident edge");
            prep(other, &mut steps, &mut live, &mut prepped, &mut peak);
        }
        for k in incident {
            let e = graph.edges[k];
            coupled.insert(k);
            steps.push(Step::Couple { a: e.a, b: e.b, sign: e.sign });
        }
        steps.push(Step::Measure { node: j });
        live.remove(&j);
    }
    for node in graph.outputs.iter().copied() {
        prep(node, &mut steps, &mut live, &mut prepped, &mut peak);
    }
    for (k, e) in graph.edges.iter().enumerate() {
        if !coupled.contains(&k) {
            steps.push(Step::Couple { a: e.a, b: e.b, sign: e.sign });
        }
    }
    let schedule = Schedule { steps, peak_live: peak };
    verify(graph, &schedule)?;
    Ok(schedule)
}

/// Replays a schedule against its graph and checks that it is executable:
/// each node attached exactly once and before use, each coupling applied
/// exactly once while both ends are live, measurements in graph order, and
/// outputs never measured.
pub fn verify(graph: &ModeGraph, schedule: &Schedule) -> Result<()> {
    let mut live: BTreeSet<usize> = BTreeSet::new();
    let mut prepped: BTreeSet<usize> = BTreeSet::new();
    let mut done_edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut measured: Vec<usize> = Vec::new();
    let fail = |msg: String| Err(Error::InvalidGraph(format!("schedule invalid: {msg}")));
    for step in &schedule.steps {
        match *step {
            Step::Prep { node } => {
                if node >= graph.n_nodes {
                    return fail(format!("prep of node {node} out of range"));
                }
                if !prepped.insert(node) {
                    return fail(format!("node {node} attached twice"));
                }
                live.insert(node);
            }
            Step::Couple { a, b, sign } => {
                if !live.contains(&a) || !live.contains(&b) {
                    return fail(format!("coupling ({a}, {b}) with a dead endpoint"));
                }
                let key = (a.min(b), a.max(b));
                let edge = graph
                    .edges
                    .iter()
                    .find(|e| (e.a.min(e.b), e.a.max(e.b)) == key && e.sign == sign);
                if edge.is_none() {
                    return fail(format!("coupling ({a}, {b}, {sign}) is not a graph edge"));
                }
                if !done_edges.insert(key) {
                    return fail(format!("edge ({a}, {b}) applied twice"));
                }
            }
            Step::Measure { node } => {
                if !live.contains(&node) {
                    return fail(format!("measurement of dead node {node}"));
                }
                for (nb, _) in graph.neighbors(node) {
                    let key = (node.min(nb), node.max(nb));
                    if !done_edges.contains(&key) {
                        return fail(format!(
                            "node {node} measured before its coupling to {nb}"
                        ));
                    }
                }
                live.remove(&node);
                measured.push(node);
            }
        }
    }
    if measured != graph.order {
        return fail("measurements deviate from the graph order".into());
    }
    if done_edges.len() != graph.edges.len() {
        return fail("not every edge was applied".into());
    }
    let live_now: BTreeSet<usize> = graph.outputs.iter().copied().collect();
    if live != live_now {
        return fail("nodes left live are not exactly the outputs".into());
    }
    Ok(())
}
