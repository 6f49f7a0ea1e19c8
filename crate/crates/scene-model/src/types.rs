//! Scene data model: scenarios, frames, observed objects, paths, and the
//! braking model.

use std::fmt;

use thiserror::Error;

/// Errors from scenario parsing and validation-at-parse.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SceneError {
    #[error(transparent)]
    Parse(#[from] logic_core::ParseError),
    /// Structural or vocabulary problem, with the 1-based source line.
    #[error("scenario error at line {line}: {message}")]
    Invalid { line: usize, message: String },
    /// Compilation asked for a frame the scenario doesn't have.
    #[error("no frame with timestamp {t}")]
    UnknownTimestamp { t: u64 },
}

impl SceneError {
    pub fn invalid(line: usize, message: impl Into<String>) -> SceneError {
        SceneError::Invalid { line, message: message.into() }
    }
}

macro_rules! closed_vocab {
    ($(#[$doc:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }

            /// Parses a vocabulary symbol; `None` for anything outside the
            /// closed set.
            pub fn from_symbol(s: &str) -> Option<$name> {
                match s {
                    $($text => Some($name::$variant),)+
                    _ => None,
                }
            }

            /// Comma-separated vocabulary, for diagnostics.
            pub fn vocabulary() -> String {
                [$($text),+].join(", ")
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

closed_vocab!(
    /// Navigation intent, one per frame.
    Intent {
        ContinueInLane => "continue_in_lane",
        StayInLeftmostLane => "stay_in_leftmost_lane",
        MergeIntoLeftLane => "merge_into_left_lane",
        MergeIntoRightLane => "merge_into_right_lane",
        EnterRightLane => "enter_right_lane",
        EnterLeftLane => "enter_left_lane",
        StopAtDestination => "stop_at_destination",
    }
);

closed_vocab!(
    /// Observed object class.
    ObjClass {
        Car => "car",
        Truck => "truck",
        Bus => "bus",
        Pedestrian => "pedestrian",
        Cyclist => "cyclist",
        Bicycle => "bicycle",
        Bike => "bike",
        Motorcycle => "motorcycle",
        TrafficCone => "traffic_cone",
        Debris => "debris",
        Animal => "animal",
        Barrier => "barrier",
    }
);

closed_vocab!(
    /// Environment class of the surroundings.
    LocationClass {
        City => "city",
        Road => "road",
        Residential => "residential",
        Campus => "campus",
    }
);

closed_vocab!(
    /// Current traffic-light state as observed (flashing is derived from
    /// history, never observed directly).
    LightState {
        None => "none",
        Red => "red",
        Yellow => "yellow",
        Green => "green",
    }
);

closed_vocab!(
    /// Intersection topology.
    IntersectionKind {
        FourWay => "four_way",
        TJunctionMajor => "t_junction_major",
        TJunctionMinor => "t_junction_minor",
    }
);

closed_vocab!(
    /// Whether the intersection is signal-controlled.
    Signaling {
        Signalized => "signalized",
        Unsignalized => "unsignalized",
    }
);

closed_vocab!(
    /// Ego position relative to the intersection.
    IntersectionPosition {
        Approaching => "approaching",
        At => "at",
    }
);

closed_vocab!(
    /// Proximity sensor placement.
    SensorSide {
        Left => "left",
        Right => "right",
        Front => "front",
        Rear => "rear",
    }
);

/// A lane identifier: an opaque symbol or a number, as written in the
/// scenario. Ordering comes from the frame's `lanes` sequence, never from
/// the id itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LaneId {
    Sym(String),
    Num(i64),
}

impl fmt::Display for LaneId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaneId::Sym(s) => f.write_str(s),
            LaneId::Num(n) => write!(f, "{n}"),
        }
    }
}

/// An object's lane: one of the frame's lanes, or off the road entirely.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LaneRef {
    Lane(LaneId),
    Offroad,
}

impl fmt::Display for LaneRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaneRef::Lane(id) => id.fmt(f),
            LaneRef::Offroad => f.write_str("offroad"),
        }
    }
}

/// Road sign relevant to the decision rules.
#[derive(Debug, Clone, PartialEq)]
pub enum TrafficSign {
    Stop,
    Yield,
    Merge,
    SpeedLimit(f64),
}

impl fmt::Display for TrafficSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrafficSign::Stop => f.write_str("stop"),
            TrafficSign::Yield => f.write_str("yield"),
            TrafficSign::Merge => f.write_str("merge"),
            TrafficSign::SpeedLimit(v) => write!(f, "speed_limit({v})"),
        }
    }
}

/// A predicted trajectory: ordered (x, y) points in the ego-centered frame,
/// x lateral, y longitudinal, meters. At least two points, consecutive
/// points distinct, all coordinates finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    points: Vec<(f64, f64)>,
}

impl Path {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Path, String> {
        if points.len() < 2 {
            return Err(format!("a path needs at least 2 points, got {}", points.len()));
        }
        for (x, y) in &points {
            if !x.is_finite() || !y.is_finite() {
                return Err(format!("non-finite path coordinate ({x}, {y})"));
            }
        }
        for pair in points.windows(2) {
            if pair[0] == pair[1] {
                return Err(format!(
                    "consecutive duplicate path point ({}, {})",
                    pair[0].0, pair[0].1
                ));
            }
        }
        Ok(Path { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn segments(&self) -> impl Iterator<Item = ((f64, f64), (f64, f64))> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }
}

/// One observed object in a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectObs {
    pub id: String,
    pub class: ObjClass,
    pub lane: LaneRef,
    /// Signed: positive = ahead of ego, negative = behind.
    pub distance_ahead: f64,
    /// Signed: positive = receding, negative = closing.
    pub rel_speed: f64,
    pub pred_path: Option<Path>,
}

/// Intersection context for a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionObs {
    pub kind: IntersectionKind,
    pub signaling: Signaling,
    pub position: IntersectionPosition,
    /// 1 = arrived earliest; meaningful only when unsignalized.
    pub arrival_rank: Option<u32>,
}

/// A proximity sensor reading.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorReading {
    pub side: SensorSide,
    pub distance: f64,
}

/// One instant of the world as the ego vehicle sees it.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub timestamp: u64,
    pub ego_speed: f64,
    pub ego_lane: LaneId,
    /// Leftmost first; "left of lane L" means the predecessor here.
    pub lanes: Vec<LaneId>,
    pub posted_speed_limit: Option<f64>,
    pub location_class: Option<LocationClass>,
    pub objects: Vec<ObjectObs>,
    pub traffic_light: LightState,
    pub traffic_signs: Vec<TrafficSign>,
    pub intersection: Option<IntersectionObs>,
    pub sensors: Vec<SensorReading>,
    pub ego_pred_path: Option<Path>,
    pub intent: Intent,
}

/// Reaction-plus-kinematic braking model used for stopping distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrakingModel {
    /// Seconds between perception and braking onset.
    pub reaction_time: f64,
    /// Constant deceleration while braking, m/s².
    pub decel: f64,
}

impl Default for BrakingModel {
    fn default() -> BrakingModel {
        BrakingModel { reaction_time: 1.0, decel: 6.0 }
    }
}

impl BrakingModel {
    pub fn new(reaction_time: f64, decel: f64) -> Result<BrakingModel, String> {
        if !reaction_time.is_finite() || reaction_time < 0.0 {
            return Err(format!("reaction time must be finite and non-negative, got {reaction_time}"));
        }
        if !decel.is_finite() || decel <= 0.0 {
            return Err(format!("deceleration must be finite and positive, got {decel}"));
        }
        Ok(BrakingModel { reaction_time, decel })
    }

    /// Distance covered from perceiving an obstacle to standstill:
    /// `v·t_r + v² / (2a)`.
    pub fn stopping_distance(&self, speed: f64) -> Result<f64, String> {
        if !speed.is_finite() || speed < 0.0 {
            return Err(format!("speed must be finite and non-negative, got {speed}"));
        }
        Ok(speed * self.reaction_time + speed * speed / (2.0 * self.decel))
    }
}

/// A named sequence of frames with contiguous timestamps, plus the braking
/// constants in force for the file.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub frames: Vec<Frame>,
    pub braking: BrakingModel,
}

impl Scenario {
    pub fn frame(&self, t: u64) -> Option<&Frame> {
        self.frames.iter().find(|f| f.timestamp == t)
    }

    /// Traffic-light history ending at `t`, oldest first, at most `window`
    /// entries. Frames before the scenario start simply don't exist, so the
    /// slice may be shorter than the window.
    pub fn light_history(&self, t: u64, window: usize) -> Vec<LightState> {
        let mut out: Vec<LightState> = self
            .frames
            .iter()
            .filter(|f| f.timestamp <= t)
            .map(|f| f.traffic_light)
            .collect();
        if out.len() > window {
            out.drain(..out.len() - window);
        }
        out
    }
}
