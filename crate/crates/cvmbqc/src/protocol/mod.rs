//! Delegated measurement-based runs with a blinded client.
//!
//! The protocol splits a one-way computation between a client, who owns the
//! program and all randomness, and a server, who owns the quantum hardware
//! (here: the number-basis simulator). Per node the client hands over a
//! squeezed ancilla twisted by a private polynomial prerotation; per
//! readout it sends an instruction polynomial that folds together the
//! program slot, the accumulated correction frame, the prerotation unwind,
//! and a fresh uniform shift. The server faithfully executes and reports
//! raw outcomes; the client strips its shifts back out. What the server
//! sees — states, instructions, outcomes — is independent of the program
//! in the wide-randomization limit, which the statistical experiments
//! quantify at finite widths.
//!
//! Module map:
//!
//! * [`frame`] — the client's private correction-frame ledger;
//! * [`message`] — the three message kinds, transcripts, order checking;
//! * [`client`] / [`server`] — the two state machines;
//! * [`run`] — full runs, twin (blind vs. open replay) runs, configs.

pub mod client;
pub mod frame;
pub mod message;
pub mod run;
pub mod server;

pub use client::{Client, Preparation, Secrets};
pub use frame::{Frame, FrameLedger};
pub use message::{Message, Transcript};
pub use run::{
    run_delegated, run_delegated_with_plan, run_twin, RunConfig, RunOutcome, TwinReport,
};
pub use server::{observable_distribution, Readout, Server};
