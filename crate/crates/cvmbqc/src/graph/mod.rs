//! Cluster layouts: graphs, measurement programs, schedules, and gadgets.
//!
//! A computation is described by a [`ModeGraph`] (nodes, signed couplings,
//! inputs/outputs, measurement order, wire successors, preparation
//! overrides) plus a [`Program`] assigning a measurement to every
//! non-output node. [`Schedule`]s turn a graph into an executable step
//! sequence — either preparing everything upfront or just in time, which
//! keeps only a frontier of modes alive. The gadget modules rewrite graphs:
//! [`hair::implant_hair`] disguises a position readout as a momentum chain,
//! and [`hiding::insert_disconnector`] makes an edge's presence a property
//! of a prepared state rather than of the public layout.

pub mod brickwork;
#[allow(clippy::module_inception)]
pub mod graph;
pub mod hair;
pub mod hiding;
pub mod schedule;
pub mod state;

pub use brickwork::{
    brick_slots, brick_target_word, brick_word, brickwork_program, recentered_slot, single_wire,
    two_wire_brickwork, wire_program, BrickTarget,
};
pub use graph::{Edge, ModeGraph, NodeMeasurement, NodePrep, Program};
pub use hair::{implant_hair, implant_hairs};
pub use hiding::{hide_graph, insert_disconnector, HiddenGraphSpec};
pub use schedule::{all_upfront, just_in_time, verify, Schedule, Step};
pub use state::{fock_graph_state, gaussian_graph_state};
