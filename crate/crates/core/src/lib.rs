//! Belief-propagation matching decoders on the QEC decoding graph.
//!
//! For a graphlike CSS code, every syndrome defines a small complete graph
//! over its flagged checks plus one private boundary node per check. This
//! crate runs sum-product belief propagation directly on that decoding
//! graph, where every variable is a candidate matching edge and every check
//! enforces an exactly-one constraint, and extracts corrections by
//! marginalization, by forced convergence, or by an exact minimum-weight
//! perfect matching fallback.
//!
//! The message-passing core is generic over the floating-point scalar (see
//! [`Real`]); `f64` aliases for the main entry points live at the crate
//! root. The [`harness`] module adds a deterministic, counter-seeded Monte
//! Carlo engine for code-capacity threshold experiments on the unrotated
//! surface code.

pub mod bits;
pub mod code;
pub mod decoders;
pub mod decoding_graph;
pub mod error;
pub mod factor_graph;
pub mod harness;
pub mod inference;
pub mod matching;
pub mod noise;
pub mod real;

pub use code::{build_surface_code, CodeSpec, ErrorPattern, Pauli, Syndrome};
pub use decoders::{decode, iteration_count, DecodeOutcome, DecoderVariant, Schedule, WeightRule};
pub use decoding_graph::{build_decoding_graph, precompute_metric, Candidate, MetricTable};
pub use error::{Error, Result};
pub use harness::{estimate_threshold, run_trial, sweep, CodeTables, SweepResult};
pub use noise::PriorMode;
pub use real::Real;

/// Decoder configuration at the default (double) precision.
pub type DecoderConfig64 = decoders::DecoderConfig<f64>;
/// Decoder configuration at single precision.
pub type DecoderConfig32 = decoders::DecoderConfig<f32>;
/// Decoding graph at the default (double) precision.
pub type DecodingGraph64 = decoding_graph::DecodingGraph<f64>;
/// Decoding graph at single precision.
pub type DecodingGraph32 = decoding_graph::DecodingGraph<f32>;
/// Sweep plan at the default (double) precision.
pub type SweepPlan64 = harness::SweepPlan<f64>;
