//! Scenario file parsing.
//!
//! A `.scn` file uses ordinary clause syntax: optional header directives
//! (`#scenario(name).`, `#reaction_time(R).`, `#decel(A).`), then ground
//! facts grouped per frame, each group introduced by `frame(T).`. Every fact
//! carries its frame's timestamp as the final argument, matching the fact
//! schema the compiler emits, so a scenario file reads exactly like the fact
//! set it produces.

use logic_core::{parse_program, Item, Rule, Term};

use crate::types::{
    BrakingModel, Frame, Intent, IntersectionKind, IntersectionObs, IntersectionPosition, LaneId,
    LaneRef, LightState, LocationClass, ObjClass, ObjectObs, Path, SceneError, Scenario,
    SensorReading, SensorSide, Signaling, TrafficSign,
};

/// Default scenario name when the file carries no `#scenario(...)` directive.
const DEFAULT_NAME: &str = "scenario";

/// Parses and vocabulary-checks a scenario file.
///
/// Structural problems — unknown predicates, symbols outside a closed
/// vocabulary, missing mandatory frame facts, non-contiguous timestamps —
/// are errors carrying the offending line. Semantic frame invariants are
/// *not* checked here; see [`crate::validate_frame`].
pub fn parse_scenario(text: &str) -> Result<Scenario, SceneError> {
    let items = parse_program(text)?;

    let mut name = DEFAULT_NAME.to_string();
    let mut reaction_time = BrakingModel::default().reaction_time;
    let mut decel = BrakingModel::default().decel;
    let mut braking_line = 0;

    let mut frames: Vec<Frame> = Vec::new();
    let mut current: Option<FrameBuilder> = None;

    for item in items {
        match item {
            Item::Directive(d) => {
                if current.is_some() || !frames.is_empty() {
                    return Err(SceneError::invalid(
                        d.line,
                        format!("directive #{} must appear before the first frame", d.name),
                    ));
                }
                match (d.name.as_str(), d.args.as_slice()) {
                    ("scenario", [Term::Sym(s)]) => name = s.clone(),
                    ("reaction_time", [t]) => {
                        reaction_time = number(t).ok_or_else(|| {
                            SceneError::invalid(d.line, "#reaction_time takes one number")
                        })?;
                        braking_line = d.line;
                    }
                    ("decel", [t]) => {
                        decel = number(t).ok_or_else(|| {
                            SceneError::invalid(d.line, "#decel takes one number")
                        })?;
                        braking_line = d.line;
                    }
                    _ => {
                        return Err(SceneError::invalid(
                            d.line,
                            format!(
                                "unknown directive #{}/{} (expected scenario/1, \
                                 reaction_time/1, or decel/1)",
                                d.name,
                                d.args.len()
                            ),
                        ));
                    }
                }
            }
            Item::Clause(rule) => {
                let line = rule.line;
                let atom = fact_atom(&rule)?;
                if atom.name == "frame" {
                    if atom.args.len() != 1 {
                        return Err(SceneError::invalid(line, "frame takes one timestamp"));
                    }
                    let t = timestamp(&atom.args[0])
                        .ok_or_else(|| SceneError::invalid(line, "frame timestamp must be a non-negative integer"))?;
                    if let Some(prev) = current.take() {
                        let expected = prev.timestamp + 1;
                        frames.push(prev.finish()?);
                        if t != expected {
                            return Err(SceneError::invalid(
                                line,
                                format!(
                                    "non-contiguous frame timestamps: frame {t} follows frame {}",
                                    expected - 1
                                ),
                            ));
                        }
                    }
                    current = Some(FrameBuilder::new(t, line));
                } else {
                    let frame = current.as_mut().ok_or_else(|| {
                        SceneError::invalid(
                            line,
                            format!("fact {}/{} before any frame(T) marker", atom.name, atom.args.len()),
                        )
                    })?;
                    frame.add_fact(&atom.name, &atom.args, line)?;
                }
            }
        }
    }

    if let Some(last) = current.take() {
        frames.push(last.finish()?);
    }
    if frames.is_empty() {
        return Err(SceneError::invalid(0, "scenario declares no frames"));
    }

    let braking = BrakingModel::new(reaction_time, decel)
        .map_err(|msg| SceneError::invalid(braking_line, msg))?;
    Ok(Scenario { name, frames, braking })
}

/// Extracts the head atom of a clause, rejecting anything that isn't a
/// ground fact.
fn fact_atom(rule: &Rule) -> Result<logic_core::Atom, SceneError> {
    let head = rule.head.clone().ok_or_else(|| {
        SceneError::invalid(rule.line, "scenario files contain only facts, not constraints")
    })?;
    if !rule.body.is_empty() {
        return Err(SceneError::invalid(
            rule.line,
            format!("scenario files contain only facts; {} has a rule body", head.name),
        ));
    }
    if head.args.iter().any(|a| !a.is_ground()) {
        return Err(SceneError::invalid(
            rule.line,
            format!("scenario fact {} must be ground", head.name),
        ));
    }
    Ok(head)
}

fn number(t: &Term) -> Option<f64> {
    match t {
        Term::Int(i) => Some(*i as f64),
        Term::Float(f) => Some(f.0),
        _ => None,
    }
}

fn timestamp(t: &Term) -> Option<u64> {
    match t {
        Term::Int(i) if *i >= 0 => Some(*i as u64),
        _ => None,
    }
}

fn lane_id(t: &Term) -> Option<LaneId> {
    match t {
        Term::Sym(s) => Some(LaneId::Sym(s.clone())),
        Term::Int(i) => Some(LaneId::Num(*i)),
        _ => None,
    }
}

fn path_from_term(t: &Term, line: usize) -> Result<Path, SceneError> {
    let items = t
        .as_list()
        .ok_or_else(|| SceneError::invalid(line, "a path must be a list of p(X, Y) points"))?;
    let mut points = Vec::with_capacity(items.len());
    for item in items {
        match item {
            Term::Compound(name, args) if name == "p" && args.len() == 2 => {
                let x = number(&args[0]);
                let y = number(&args[1]);
                match (x, y) {
                    (Some(x), Some(y)) => points.push((x, y)),
                    _ => {
                        return Err(SceneError::invalid(
                            line,
                            format!("path point {item} must have numeric coordinates"),
                        ))
                    }
                }
            }
            other => {
                return Err(SceneError::invalid(
                    line,
                    format!("path element {other} is not a p(X, Y) point"),
                ))
            }
        }
    }
    Path::new(points).map_err(|msg| SceneError::invalid(line, msg))
}

/// Accumulates one frame's facts in any order, then checks mandatory fields.
struct FrameBuilder {
    timestamp: u64,
    marker_line: usize,
    ego_speed: Option<f64>,
    ego_lane: Option<LaneId>,
    lanes: Option<Vec<LaneId>>,
    posted_speed_limit: Option<f64>,
    location_class: Option<LocationClass>,
    objects: Vec<ObjectBuilder>,
    traffic_light: Option<LightState>,
    traffic_signs: Vec<TrafficSign>,
    intersection: Option<(IntersectionKind, Signaling, IntersectionPosition)>,
    arrival_rank: Option<(u32, usize)>,
    sensors: Vec<SensorReading>,
    ego_pred_path: Option<Path>,
    intent: Option<Intent>,
}

struct ObjectBuilder {
    id: String,
    first_line: usize,
    class: Option<ObjClass>,
    lane: Option<LaneRef>,
    distance_ahead: Option<f64>,
    rel_speed: Option<f64>,
    pred_path: Option<Path>,
}

impl FrameBuilder {
    fn new(timestamp: u64, marker_line: usize) -> FrameBuilder {
        FrameBuilder {
            timestamp,
            marker_line,
            ego_speed: None,
            ego_lane: None,
            lanes: None,
            posted_speed_limit: None,
            location_class: None,
            objects: Vec::new(),
            traffic_light: None,
            traffic_signs: Vec::new(),
            intersection: None,
            arrival_rank: None,
            sensors: Vec::new(),
            ego_pred_path: None,
            intent: None,
        }
    }

    fn object(&mut self, id: &Term, line: usize) -> Result<&mut ObjectBuilder, SceneError> {
        let id = match id {
            Term::Sym(s) => s.clone(),
            other => {
                return Err(SceneError::invalid(line, format!("object id {other} must be a symbol")))
            }
        };
        if let Some(idx) = self.objects.iter().position(|o| o.id == id) {
            return Ok(&mut self.objects[idx]);
        }
        self.objects.push(ObjectBuilder {
            id,
            first_line: line,
            class: None,
            lane: None,
            distance_ahead: None,
            rel_speed: None,
            pred_path: None,
        });
        Ok(self.objects.last_mut().unwrap())
    }

    /// Checks the fact's trailing timestamp against this frame.
    fn check_t(&self, args: &[Term], line: usize) -> Result<(), SceneError> {
        match args.last().and_then(timestamp) {
            Some(t) if t == self.timestamp => Ok(()),
            Some(t) => Err(SceneError::invalid(
                line,
                format!("fact timestamp {t} does not match current frame {}", self.timestamp),
            )),
            None => Err(SceneError::invalid(
                line,
                format!("fact must end with the frame timestamp {}", self.timestamp),
            )),
        }
    }

    fn set_once<T>(slot: &mut Option<T>, value: T, what: &str, t: u64, line: usize) -> Result<(), SceneError> {
        if slot.is_some() {
            return Err(SceneError::invalid(line, format!("duplicate {what} for frame {t}")));
        }
        *slot = Some(value);
        Ok(())
    }

    fn add_fact(&mut self, nm: &str, args: &[Term], line: usize) -> Result<(), SceneError> {
        let t = self.timestamp;
        let vocab_err = |line: usize, sym: &Term, what: &str, vocab: String| {
            SceneError::invalid(line, format!("unknown {what} symbol {sym} (expected one of: {vocab})"))
        };
        match (nm, args.len()) {
            ("self_speed", 2) => {
                self.check_t(args, line)?;
                let v = number(&args[0])
                    .ok_or_else(|| SceneError::invalid(line, "self_speed takes a number"))?;
                Self::set_once(&mut self.ego_speed, v, "self_speed", t, line)
            }
            ("self_lane", 2) => {
                self.check_t(args, line)?;
                let l = lane_id(&args[0])
                    .ok_or_else(|| SceneError::invalid(line, "self_lane takes a lane id"))?;
                Self::set_once(&mut self.ego_lane, l, "self_lane", t, line)
            }
            ("lanes", 2) => {
                self.check_t(args, line)?;
                let items = args[0]
                    .as_list()
                    .ok_or_else(|| SceneError::invalid(line, "lanes takes a list of lane ids"))?;
                let mut lanes = Vec::with_capacity(items.len());
                for item in &items {
                    lanes.push(lane_id(item).ok_or_else(|| {
                        SceneError::invalid(line, format!("{item} is not a lane id"))
                    })?);
                }
                Self::set_once(&mut self.lanes, lanes, "lanes", t, line)
            }
            ("speed_limit", 2) => {
                self.check_t(args, line)?;
                let v = number(&args[0])
                    .ok_or_else(|| SceneError::invalid(line, "speed_limit takes a number"))?;
                Self::set_once(&mut self.posted_speed_limit, v, "speed_limit", t, line)
            }
            ("location", 2) => {
                self.check_t(args, line)?;
                let c = match &args[0] {
                    Term::Sym(s) => LocationClass::from_symbol(s),
                    _ => None,
                }
                .ok_or_else(|| vocab_err(line, &args[0], "location", LocationClass::vocabulary()))?;
                Self::set_once(&mut self.location_class, c, "location", t, line)
            }
            ("obj", 2) => {
                self.check_t(args, line)?;
                self.object(&args[0], line)?;
                Ok(())
            }
            ("class", 3) => {
                self.check_t(args, line)?;
                let c = match &args[1] {
                    Term::Sym(s) => ObjClass::from_symbol(s),
                    _ => None,
                }
                .ok_or_else(|| vocab_err(line, &args[1], "object class", ObjClass::vocabulary()))?;
                let obj = self.object(&args[0], line)?;
                Self::set_once(&mut obj.class, c, "class", t, line)
            }
            ("obj_lane", 3) => {
                self.check_t(args, line)?;
                let lane = match &args[1] {
                    Term::Sym(s) if s == "offroad" => Some(LaneRef::Offroad),
                    other => lane_id(other).map(LaneRef::Lane),
                }
                .ok_or_else(|| SceneError::invalid(line, "obj_lane takes a lane id or offroad"))?;
                let obj = self.object(&args[0], line)?;
                Self::set_once(&mut obj.lane, lane, "obj_lane", t, line)
            }
            ("obj_distance", 3) => {
                self.check_t(args, line)?;
                let v = number(&args[1])
                    .ok_or_else(|| SceneError::invalid(line, "obj_distance takes a number"))?;
                let obj = self.object(&args[0], line)?;
                Self::set_once(&mut obj.distance_ahead, v, "obj_distance", t, line)
            }
            ("obj_rel_speed", 3) => {
                self.check_t(args, line)?;
                let v = number(&args[1])
                    .ok_or_else(|| SceneError::invalid(line, "obj_rel_speed takes a number"))?;
                let obj = self.object(&args[0], line)?;
                Self::set_once(&mut obj.rel_speed, v, "obj_rel_speed", t, line)
            }
            ("obj_pred_path", 3) => {
                self.check_t(args, line)?;
                let path = path_from_term(&args[1], line)?;
                let obj = self.object(&args[0], line)?;
                Self::set_once(&mut obj.pred_path, path, "obj_pred_path", t, line)
            }
            ("self_pred_path", 2) => {
                self.check_t(args, line)?;
                let path = path_from_term(&args[0], line)?;
                Self::set_once(&mut self.ego_pred_path, path, "self_pred_path", t, line)
            }
            ("traffic_light", 2) => {
                self.check_t(args, line)?;
                let s = match &args[0] {
                    Term::Sym(s) => LightState::from_symbol(s),
                    _ => None,
                }
                .ok_or_else(|| vocab_err(line, &args[0], "traffic light", LightState::vocabulary()))?;
                Self::set_once(&mut self.traffic_light, s, "traffic_light", t, line)
            }
            ("traffic_sign", 2) => {
                self.check_t(args, line)?;
                let sign = match &args[0] {
                    Term::Sym(s) if s == "stop" => Some(TrafficSign::Stop),
                    Term::Sym(s) if s == "yield" => Some(TrafficSign::Yield),
                    Term::Sym(s) if s == "merge" => Some(TrafficSign::Merge),
                    Term::Compound(name, sargs) if name == "speed_limit" && sargs.len() == 1 => {
                        number(&sargs[0]).map(TrafficSign::SpeedLimit)
                    }
                    _ => None,
                }
                .ok_or_else(|| {
                    vocab_err(
                        line,
                        &args[0],
                        "traffic sign",
                        "stop, yield, merge, speed_limit(V)".to_string(),
                    )
                })?;
                self.traffic_signs.push(sign);
                Ok(())
            }
            ("intersection", 4) => {
                self.check_t(args, line)?;
                let kind = match &args[0] {
                    Term::Sym(s) => IntersectionKind::from_symbol(s),
                    _ => None,
                }
                .ok_or_else(|| {
                    vocab_err(line, &args[0], "intersection kind", IntersectionKind::vocabulary())
                })?;
                let signaling = match &args[1] {
                    Term::Sym(s) => Signaling::from_symbol(s),
                    _ => None,
                }
                .ok_or_else(|| vocab_err(line, &args[1], "signaling", Signaling::vocabulary()))?;
                let position = match &args[2] {
                    Term::Sym(s) => IntersectionPosition::from_symbol(s),
                    _ => None,
                }
                .ok_or_else(|| {
                    vocab_err(line, &args[2], "intersection position", IntersectionPosition::vocabulary())
                })?;
                Self::set_once(&mut self.intersection, (kind, signaling, position), "intersection", t, line)
            }
            ("arrival_rank", 2) => {
                self.check_t(args, line)?;
                let rank = match &args[0] {
                    Term::Int(i) if *i >= 0 && *i <= u32::MAX as i64 => Some(*i as u32),
                    _ => None,
                }
                .ok_or_else(|| SceneError::invalid(line, "arrival_rank takes a non-negative integer"))?;
                Self::set_once(&mut self.arrival_rank, (rank, line), "arrival_rank", t, line)
            }
            ("sensor", 3) => {
                self.check_t(args, line)?;
                let side = match &args[0] {
                    Term::Sym(s) => SensorSide::from_symbol(s),
                    _ => None,
                }
                .ok_or_else(|| vocab_err(line, &args[0], "sensor side", SensorSide::vocabulary()))?;
                let distance = number(&args[1])
                    .ok_or_else(|| SceneError::invalid(line, "sensor distance must be a number"))?;
                self.sensors.push(SensorReading { side, distance });
                Ok(())
            }
            ("intent", 2) => {
                self.check_t(args, line)?;
                let i = match &args[0] {
                    Term::Sym(s) => Intent::from_symbol(s),
                    _ => None,
                }
                .ok_or_else(|| vocab_err(line, &args[0], "intent", Intent::vocabulary()))?;
                Self::set_once(&mut self.intent, i, "intent", t, line)
            }
            (other, arity) => Err(SceneError::invalid(
                line,
                format!("unknown scenario predicate {other}/{arity}"),
            )),
        }
    }

    fn finish(self) -> Result<Frame, SceneError> {
        let t = self.timestamp;
        let missing = |what: &str| {
            SceneError::invalid(
                self.marker_line,
                format!("frame {t} is missing mandatory fact {what}"),
            )
        };
        let ego_speed = self.ego_speed.ok_or_else(|| missing("self_speed/2"))?;
        let ego_lane = self.ego_lane.ok_or_else(|| missing("self_lane/2"))?;
        let lanes = self.lanes.ok_or_else(|| missing("lanes/2"))?;
        let intent = self.intent.ok_or_else(|| missing("intent/2"))?;

        let mut objects = Vec::with_capacity(self.objects.len());
        for ob in self.objects {
            let oid = ob.id.clone();
            let incomplete = |what: &str| {
                SceneError::invalid(
                    ob.first_line,
                    format!("object {oid} in frame {t} has no {what}"),
                )
            };
            objects.push(ObjectObs {
                class: ob.class.ok_or_else(|| incomplete("class"))?,
                lane: ob.lane.ok_or_else(|| incomplete("obj_lane"))?,
                distance_ahead: ob.distance_ahead.ok_or_else(|| incomplete("obj_distance"))?,
                rel_speed: ob.rel_speed.unwrap_or(0.0),
                pred_path: ob.pred_path,
                id: ob.id,
            });
        }

        let intersection = match (self.intersection, self.arrival_rank) {
            (Some((kind, signaling, position)), rank) => Some(IntersectionObs {
                kind,
                signaling,
                position,
                arrival_rank: rank.map(|(r, _)| r),
            }),
            (None, Some((_, rank_line))) => {
                return Err(SceneError::invalid(
                    rank_line,
                    format!("arrival_rank in frame {t} without an intersection"),
                ))
            }
            (None, None) => None,
        };

        Ok(Frame {
            timestamp: t,
            ego_speed,
            ego_lane,
            lanes,
            posted_speed_limit: self.posted_speed_limit,
            location_class: self.location_class,
            objects,
            traffic_light: self.traffic_light.unwrap_or(LightState::None),
            traffic_signs: self.traffic_signs,
            intersection,
            sensors: self.sensors,
            ego_pred_path: self.ego_pred_path,
            intent,
        })
    }
}
