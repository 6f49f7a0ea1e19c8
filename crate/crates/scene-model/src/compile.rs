//! Frame-to-facts compilation.
//!
//! `compile_frame` turns one frame of a scenario into the ground fact set
//! the rulebase consumes. The emission is total and deterministic: the same
//! frame always yields the same facts in the same order, grouped by
//! predicate in the fixed schema order below.

use logic_core::{Atom, PredKey, Term};

use crate::flashing::{detect_flashing, FLASHING_WINDOW};
use crate::types::{LaneId, LaneRef, LightState, Path, SceneError, Scenario, TrafficSign};

/// Every predicate `compile_frame` can emit, in emission order. The final
/// argument of each is the frame timestamp.
pub const FACT_SCHEMA: &[(&str, usize)] = &[
    ("self_speed", 2),
    ("self_lane", 2),
    ("lanes", 2),
    ("speed_limit", 2),
    ("location", 2),
    ("obj", 2),
    ("class", 3),
    ("obj_lane", 3),
    ("obj_distance", 3),
    ("obj_rel_speed", 3),
    ("obj_pred_path", 3),
    ("self_pred_path", 2),
    ("traffic_light", 2),
    ("traffic_sign", 2),
    ("intersection", 4),
    ("arrival_rank", 2),
    ("sensor", 3),
    ("intent", 2),
];

/// The emitted-fact schema as predicate keys, for rulebase lints.
pub fn fact_schema() -> Vec<PredKey> {
    FACT_SCHEMA
        .iter()
        .map(|(name, arity)| PredKey { name: (*name).to_string(), arity: *arity })
        .collect()
}

/// Renders a number as a term, keeping integral values integral so facts
/// read the way scenario files write them.
pub fn num_term(v: f64) -> Term {
    if v.fract() == 0.0 && v.abs() < 2f64.powi(53) {
        Term::Int(v as i64)
    } else {
        Term::float(v)
    }
}

fn lane_term(lane: &LaneId) -> Term {
    match lane {
        LaneId::Sym(s) => Term::sym(s.clone()),
        LaneId::Num(n) => Term::Int(*n),
    }
}

fn lane_ref_term(lane: &LaneRef) -> Term {
    match lane {
        LaneRef::Lane(id) => lane_term(id),
        LaneRef::Offroad => Term::sym("offroad"),
    }
}

fn path_term(path: &Path) -> Term {
    Term::list(
        path.points()
            .iter()
            .map(|(x, y)| Term::compound("p", vec![num_term(*x), num_term(*y)]))
            .collect(),
    )
}

fn sign_term(sign: &TrafficSign) -> Term {
    match sign {
        TrafficSign::Stop => Term::sym("stop"),
        TrafficSign::Yield => Term::sym("yield"),
        TrafficSign::Merge => Term::sym("merge"),
        TrafficSign::SpeedLimit(v) => Term::compound("speed_limit", vec![num_term(*v)]),
    }
}

/// Compiles the frame at timestamp `t` into ground facts.
///
/// Also derives `traffic_light(flashing_red, t)` when the trailing light
/// history (up to [`FLASHING_WINDOW`] frames ending at `t`) alternates
/// between red and none often enough.
pub fn compile_frame(scenario: &Scenario, t: u64) -> Result<Vec<Atom>, SceneError> {
    let frame = scenario
        .frame(t)
        .ok_or(SceneError::UnknownTimestamp { t })?;
    let ts = Term::Int(t as i64);
    let mut facts = Vec::new();
    let mut emit = |name: &str, mut args: Vec<Term>| {
        args.push(ts.clone());
        facts.push(Atom::new(name, args));
    };

    emit("self_speed", vec![num_term(frame.ego_speed)]);
    emit("self_lane", vec![lane_term(&frame.ego_lane)]);
    emit("lanes", vec![Term::list(frame.lanes.iter().map(lane_term).collect())]);
    if let Some(limit) = frame.posted_speed_limit {
        emit("speed_limit", vec![num_term(limit)]);
    }
    if let Some(loc) = frame.location_class {
        emit("location", vec![Term::sym(loc.as_str())]);
    }
    for ob in &frame.objects {
        emit("obj", vec![Term::sym(ob.id.clone())]);
    }
    for ob in &frame.objects {
        emit("class", vec![Term::sym(ob.id.clone()), Term::sym(ob.class.as_str())]);
    }
    for ob in &frame.objects {
        emit("obj_lane", vec![Term::sym(ob.id.clone()), lane_ref_term(&ob.lane)]);
    }
    for ob in &frame.objects {
        emit("obj_distance", vec![Term::sym(ob.id.clone()), num_term(ob.distance_ahead)]);
    }
    for ob in &frame.objects {
        emit("obj_rel_speed", vec![Term::sym(ob.id.clone()), num_term(ob.rel_speed)]);
    }
    for ob in &frame.objects {
        if let Some(path) = &ob.pred_path {
            emit("obj_pred_path", vec![Term::sym(ob.id.clone()), path_term(path)]);
        }
    }
    if let Some(path) = &frame.ego_pred_path {
        emit("self_pred_path", vec![path_term(path)]);
    }
    if frame.traffic_light != LightState::None {
        emit("traffic_light", vec![Term::sym(frame.traffic_light.as_str())]);
    }
    if detect_flashing(&scenario.light_history(t, FLASHING_WINDOW)) {
        emit("traffic_light", vec![Term::sym("flashing_red")]);
    }
    for sign in &frame.traffic_signs {
        emit("traffic_sign", vec![sign_term(sign)]);
    }
    if let Some(ix) = &frame.intersection {
        emit(
            "intersection",
            vec![
                Term::sym(ix.kind.as_str()),
                Term::sym(ix.signaling.as_str()),
                Term::sym(ix.position.as_str()),
            ],
        );
        if let Some(rank) = ix.arrival_rank {
            emit("arrival_rank", vec![Term::Int(rank as i64)]);
        }
    }
    for sensor in &frame.sensors {
        emit("sensor", vec![Term::sym(sensor.side.as_str()), num_term(sensor.distance)]);
    }
    emit("intent", vec![Term::sym(frame.intent.as_str())]);

    Ok(facts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_scenario;

    fn frame0(extra: &str) -> Scenario {
        let src = format!(
            "frame(0).\nself_speed(5, 0).\nself_lane(1, 0).\nlanes([1, 2, 3], 0).\n\
             intent(continue_in_lane, 0).\n{extra}"
        );
        parse_scenario(&src).unwrap()
    }

    fn rendered(scenario: &Scenario, t: u64) -> Vec<String> {
        compile_frame(scenario, t).unwrap().iter().map(|a| a.to_string()).collect()
    }

    #[test]
    fn minimal_frame_facts() {
        let facts = rendered(&frame0(""), 0);
        assert_eq!(
            facts,
            vec![
                "self_speed(5, 0)",
                "self_lane(1, 0)",
                "lanes([1, 2, 3], 0)",
                "intent(continue_in_lane, 0)",
            ]
        );
    }

    #[test]
    fn full_frame_emits_schema_order() {
        let s = frame0(
            "speed_limit(13.4, 0).\nlocation(city, 0).\n\
             obj(o1, 0).\nclass(o1, car, 0).\nobj_lane(o1, 2, 0).\nobj_distance(o1, 12.5, 0).\n\
             obj_pred_path(o1, [p(0, 12.5), p(0, 30)], 0).\n\
             self_pred_path([p(0, 0), p(0, 20)], 0).\n\
             traffic_light(green, 0).\ntraffic_sign(stop, 0).\n\
             intersection(four_way, unsignalized, approaching, 0).\narrival_rank(2, 0).\n\
             sensor(left, 0.4, 0).\n",
        );
        let facts = rendered(&s, 0);
        assert_eq!(
            facts,
            vec![
                "self_speed(5, 0)",
                "self_lane(1, 0)",
                "lanes([1, 2, 3], 0)",
                "speed_limit(13.4, 0)",
                "location(city, 0)",
                "obj(o1, 0)",
                "class(o1, car, 0)",
                "obj_lane(o1, 2, 0)",
                "obj_distance(o1, 12.5, 0)",
                "obj_rel_speed(o1, 0, 0)",
                "obj_pred_path(o1, [p(0, 12.5), p(0, 30)], 0)",
                "self_pred_path([p(0, 0), p(0, 20)], 0)",
                "traffic_light(green, 0)",
                "traffic_sign(stop, 0)",
                "intersection(four_way, unsignalized, approaching, 0)",
                "arrival_rank(2, 0)",
                "sensor(left, 0.4, 0)",
                "intent(continue_in_lane, 0)",
            ]
        );
    }

    #[test]
    fn compile_is_deterministic() {
        let s = frame0("location(road, 0).\nsensor(right, 1.5, 0).\n");
        let a = rendered(&s, 0);
        for _ in 0..5 {
            assert_eq!(rendered(&s, 0), a);
        }
    }

    #[test]
    fn unknown_timestamp_is_an_error() {
        let s = frame0("");
        assert_eq!(compile_frame(&s, 7).unwrap_err(), SceneError::UnknownTimestamp { t: 7 });
    }

    #[test]
    fn flashing_red_derived_from_history() {
        let mut src = String::new();
        let lights = ["red", "none", "red", "none", "red"];
        for (t, light) in lights.iter().enumerate() {
            src.push_str(&format!(
                "frame({t}).\nself_speed(5, {t}).\nself_lane(1, {t}).\nlanes([1], {t}).\n\
                 intent(continue_in_lane, {t}).\ntraffic_light({light}, {t}).\n"
            ));
        }
        let s = parse_scenario(&src).unwrap();
        let f4 = rendered(&s, 4);
        assert!(f4.contains(&"traffic_light(red, 4)".to_string()));
        assert!(f4.contains(&"traffic_light(flashing_red, 4)".to_string()));
        // Too little history at t = 2: only two alternations so far.
        let f2 = rendered(&s, 2);
        assert!(!f2.iter().any(|f| f.contains("flashing_red")));
        // The `none` frame emits no observed light but still derives flashing
        // once enough alternations accumulated.
        let f3 = rendered(&s, 3);
        assert!(!f3.iter().any(|f| f == "traffic_light(none, 3)"));
    }

    #[test]
    fn every_emitted_predicate_is_in_the_schema() {
        let s = frame0(
            "speed_limit(10, 0).\nlocation(campus, 0).\nobj(a, 0).\nclass(a, bus, 0).\n\
             obj_lane(a, 1, 0).\nobj_distance(a, 3, 0).\nself_pred_path([p(0,0), p(1,1)], 0).\n\
             traffic_light(red, 0).\ntraffic_sign(yield, 0).\n\
             intersection(four_way, signalized, at, 0).\nsensor(rear, 9, 0).\n",
        );
        let schema = fact_schema();
        for fact in compile_frame(&s, 0).unwrap() {
            assert!(schema.contains(&fact.key()), "{} not in schema", fact.key());
        }
    }
}
