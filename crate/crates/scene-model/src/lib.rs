//! Scene model for the driving decision engine.
//!
//! This crate turns annotated driving scenarios into the ground facts the
//! rule catalog reasons over:
//!
//! - [`parse_scenario`] reads the `.scn` format — frames of observations
//!   with closed vocabularies for classes, intents, lights, and signs;
//! - [`compile_frame`] emits one frame's deterministic fact set, including
//!   the derived `traffic_light(flashing_red, t)` fact;
//! - [`validate_frame`] reports every frame-invariant violation;
//! - [`register_scene_builtins`] exposes [`path_intersects`] and the
//!   [`BrakingModel`] stopping distance to rules as host predicates.
//!
//! Scenarios and frames are immutable after parse and every operation here
//! is pure, so frames can be compiled and validated concurrently.

mod builtins;
mod compile;
mod flashing;
mod geometry;
mod parse;
mod types;
mod validate;

pub use builtins::register_scene_builtins;
pub use compile::{compile_frame, fact_schema, num_term, FACT_SCHEMA};
pub use flashing::{detect_flashing, FLASHING_MIN_CHANGES, FLASHING_WINDOW};
pub use geometry::{path_intersects, segments_intersect};
pub use parse::parse_scenario;
pub use validate::validate_frame;
pub use types::{
    BrakingModel, Frame, Intent, IntersectionKind, IntersectionObs, IntersectionPosition, LaneId,
    LaneRef, LightState, LocationClass, ObjClass, ObjectObs, Path, SceneError, Scenario,
    SensorReading, SensorSide, Signaling, TrafficSign,
};
