//! Frame invariant checking.

use std::collections::HashSet;

use crate::types::{Frame, LaneRef, Signaling};

fn lanes_listing(frame: &Frame) -> String {
    let ids: Vec<String> = frame.lanes.iter().map(|l| l.to_string()).collect();
    format!("[{}]", ids.join(","))
}

/// Checks every frame invariant and returns one diagnostic per violation —
/// all of them, not just the first. An empty result means the frame is ok.
///
/// Signed object distances and signed relative speeds are legal and produce
/// no diagnostics.
pub fn validate_frame(frame: &Frame) -> Vec<String> {
    let mut out = Vec::new();
    let t = frame.timestamp;

    if !frame.ego_speed.is_finite() || frame.ego_speed < 0.0 {
        out.push(format!("ego speed {} in frame {t} must be a non-negative number", frame.ego_speed));
    }
    if frame.lanes.is_empty() {
        out.push(format!("frame {t} declares no lanes"));
    }
    let mut seen_lanes = HashSet::new();
    for lane in &frame.lanes {
        if !seen_lanes.insert(lane) {
            out.push(format!("lane {lane} declared twice in frame {t}"));
        }
    }
    if !frame.lanes.contains(&frame.ego_lane) {
        out.push(format!("ego lane {} not in declared lanes {}", frame.ego_lane, lanes_listing(frame)));
    }
    if let Some(limit) = frame.posted_speed_limit {
        if !limit.is_finite() || limit < 0.0 {
            out.push(format!("posted speed limit {limit} in frame {t} must be a non-negative number"));
        }
    }

    let mut seen_objects = HashSet::new();
    for ob in &frame.objects {
        if !seen_objects.insert(&ob.id) {
            out.push(format!("duplicate object id {} in frame {t}", ob.id));
        }
        if let LaneRef::Lane(lane) = &ob.lane {
            if !frame.lanes.contains(lane) {
                out.push(format!(
                    "object {} lane {lane} not in declared lanes {}",
                    ob.id,
                    lanes_listing(frame)
                ));
            }
        }
        if !ob.distance_ahead.is_finite() {
            out.push(format!("object {} distance must be finite", ob.id));
        }
        if !ob.rel_speed.is_finite() {
            out.push(format!("object {} relative speed must be finite", ob.id));
        }
    }

    if let Some(ix) = &frame.intersection {
        if let Some(rank) = ix.arrival_rank {
            if ix.signaling == Signaling::Signalized {
                out.push(format!("arrival_rank {rank} at a signalized intersection in frame {t}"));
            }
            if rank < 1 {
                out.push(format!("arrival_rank must be at least 1, got {rank} in frame {t}"));
            }
        }
    }

    for sensor in &frame.sensors {
        if !sensor.distance.is_finite() || sensor.distance < 0.0 {
            out.push(format!(
                "sensor {} distance {} in frame {t} must be a non-negative number",
                sensor.side, sensor.distance
            ));
        }
    }

    out
}
