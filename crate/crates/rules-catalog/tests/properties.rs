//! Property-level invariants of the decision layer: safety under obstacles,
//! red-light behavior, mitigation monotonicity, determinism, and thread
//! safety.

use proptest::prelude::*;
use rules_catalog::{decide, decide_all, effective_speed_limit, Action, Rulebase};
use scene_model::{parse_scenario, LocationClass, Scenario};

fn scenario(text: &str) -> Scenario {
    parse_scenario(text).expect("generated scenario must parse")
}

fn obstacle_scenario(speed: f64, distance: f64) -> String {
    format!(
        "frame(0).\nself_speed({speed:?}, 0).\nself_lane(1, 0).\nlanes([1], 0).\n\
         obj(car_ahead, 0).\nclass(car_ahead, car, 0).\nobj_lane(car_ahead, 1, 0).\n\
         obj_distance(car_ahead, {distance:?}, 0).\nintent(continue_in_lane, 0).\n"
    )
}

proptest! {
    /// An automobile ahead in the ego lane inside stopping distance always
    /// brakes the frame — never accelerate, never cruise.
    #[test]
    fn obstacle_within_stopping_distance_brakes(
        speed in 1.0f64..35.0,
        frac in 0.01f64..0.99,
    ) {
        let stopping = speed * 1.0 + speed * speed / (2.0 * 6.0);
        let distance = frac * stopping;
        let rb = Rulebase::shipped().unwrap();
        let d = decide(&rb, &scenario(&obstacle_scenario(speed, distance)), 0).unwrap();
        prop_assert_eq!(d.action, Action::Brake);
        prop_assert!(!d.suggested_actions().contains(&Action::Accelerate)
            || distance > 10.0,
            "accelerate suggested with the lane blocked at {distance}");
    }

    /// A red light at an intersection in play never yields accelerate, and
    /// always puts braking on the table.
    #[test]
    fn red_light_never_accelerates(
        speed in 0.0f64..40.0,
        at in proptest::bool::ANY,
        kind in prop_oneof![
            Just("four_way"),
            Just("t_junction_major"),
            Just("t_junction_minor"),
        ],
    ) {
        let position = if at { "at" } else { "approaching" };
        let src = format!(
            "frame(0).\nself_speed({speed:?}, 0).\nself_lane(1, 0).\nlanes([1], 0).\n\
             traffic_light(red, 0).\nintersection({kind}, signalized, {position}, 0).\n\
             intent(continue_in_lane, 0).\n"
        );
        let rb = Rulebase::shipped().unwrap();
        let d = decide(&rb, &scenario(&src), 0).unwrap();
        prop_assert_ne!(d.action, Action::Accelerate);
        prop_assert!(d.suggested_actions().contains(&Action::Brake));
        prop_assert!(!d.suggested_actions().contains(&Action::Accelerate));
    }

    /// The effective limit never exceeds either the posted value or the
    /// reasonable value for the surroundings.
    #[test]
    fn mitigated_limit_is_monotone(
        posted in 0.5f64..80.0,
        loc in prop_oneof![
            Just(LocationClass::City),
            Just(LocationClass::Road),
            Just(LocationClass::Residential),
            Just(LocationClass::Campus),
        ],
    ) {
        let reasonable = match loc {
            LocationClass::City => 15.6,
            LocationClass::Road => 29.0,
            LocationClass::Residential => 13.4,
            LocationClass::Campus => 8.9,
        };
        let rb = Rulebase::shipped().unwrap();
        let limit = effective_speed_limit(&rb, loc, posted).unwrap()
            .expect("shipped catalog marks nothing abnormal");
        prop_assert!(limit <= posted);
        prop_assert!(limit <= reasonable);
        prop_assert_eq!(limit, posted.min(reasonable));
    }
}

const MERGE_TRACE: &str = "\
#scenario(city_merge).
frame(0).
self_speed(12, 0).
self_lane(2, 0).
lanes([1, 2], 0).
location(city, 0).
speed_limit(15.6, 0).
obj(car_left, 0).
class(car_left, car, 0).
obj_lane(car_left, 1, 0).
obj_distance(car_left, 4, 0).
intent(merge_into_left_lane, 0).
frame(1).
self_speed(10, 1).
self_lane(2, 1).
lanes([1, 2], 1).
location(city, 1).
speed_limit(15.6, 1).
obj(car_left, 1).
class(car_left, car, 1).
obj_lane(car_left, 1, 1).
obj_distance(car_left, 14, 1).
intent(merge_into_left_lane, 1).
";

fn full_trace(rb: &Rulebase, s: &Scenario) -> String {
    decide_all(rb, s)
        .unwrap()
        .iter()
        .map(|d| {
            format!(
                "t={} action={} suggested={:?}\n{}",
                d.timestamp,
                d.action,
                d.suggested_actions(),
                d.render_justification(None)
            )
        })
        .collect()
}

#[test]
fn traces_are_byte_identical_across_runs() {
    let s = scenario(MERGE_TRACE);
    let first = {
        let rb = Rulebase::shipped().unwrap();
        full_trace(&rb, &s)
    };
    for _ in 0..9 {
        // A fresh rulebase each run: nothing may depend on load-time state.
        let rb = Rulebase::shipped().unwrap();
        assert_eq!(full_trace(&rb, &s), first);
    }
    assert!(first.contains("change_lane_left"));
}

#[test]
fn concurrent_decisions_match_sequential_ones() {
    let rb = Rulebase::shipped().unwrap();
    let s = scenario(MERGE_TRACE);
    let sequential: Vec<String> = s
        .frames
        .iter()
        .map(|f| {
            let d = decide(&rb, &s, f.timestamp).unwrap();
            format!("{}|{}", d.action, d.render_justification(None))
        })
        .collect();

    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..4)
            .map(|_| {
                scope.spawn(|| {
                    s.frames
                        .iter()
                        .map(|f| {
                            let d = decide(&rb, &s, f.timestamp).unwrap();
                            format!("{}|{}", d.action, d.render_justification(None))
                        })
                        .collect::<Vec<String>>()
                })
            })
            .collect();
        for handle in handles {
            assert_eq!(handle.join().unwrap(), sequential);
        }
    });
}
