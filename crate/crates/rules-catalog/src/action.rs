//! The action vocabulary and arbitration policy.

use std::fmt;

use scene_model::Intent;

/// The closed set of driving actions a decision can pick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Accelerate,
    Brake,
    Cruise,
    ChangeLaneLeft,
    ChangeLaneRight,
    TurnLeft,
    TurnRight,
}

impl Action {
    /// Vocabulary order; also the query order in `decide`.
    pub const ALL: &'static [Action] = &[
        Action::Accelerate,
        Action::Brake,
        Action::Cruise,
        Action::ChangeLaneLeft,
        Action::ChangeLaneRight,
        Action::TurnLeft,
        Action::TurnRight,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Action::Accelerate => "accelerate",
            Action::Brake => "brake",
            Action::Cruise => "cruise",
            Action::ChangeLaneLeft => "change_lane_left",
            Action::ChangeLaneRight => "change_lane_right",
            Action::TurnLeft => "turn_left",
            Action::TurnRight => "turn_right",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Action> {
        Action::ALL.iter().copied().find(|a| a.as_str() == s)
    }

    /// Arbitration priority: turns > change left > change right > brake >
    /// accelerate > cruise. The two turns share a rank; they are intent-gated
    /// and never legitimately co-occur.
    fn priority(&self) -> u8 {
        match self {
            Action::TurnLeft | Action::TurnRight => 5,
            Action::ChangeLaneLeft => 4,
            Action::ChangeLaneRight => 3,
            Action::Brake => 2,
            Action::Accelerate => 1,
            Action::Cruise => 0,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Picks the highest-priority suggested action; an empty set falls back to
/// cruise. A turn-vs-turn tie (which a healthy rulebase never produces) is
/// broken by the navigation intent, then by vocabulary order.
pub fn arbitrate(suggested: &[Action], intent: Intent) -> Action {
    let mut best: Option<Action> = None;
    for &candidate in suggested {
        best = Some(match best {
            None => candidate,
            Some(current) if beats(candidate, current, intent) => candidate,
            Some(current) => current,
        });
    }
    best.unwrap_or(Action::Cruise)
}

fn beats(challenger: Action, incumbent: Action, intent: Intent) -> bool {
    if challenger.priority() != incumbent.priority() {
        return challenger.priority() > incumbent.priority();
    }
    if challenger == incumbent {
        return false;
    }
    // Only the two turns share a priority rank.
    match intent {
        Intent::EnterLeftLane => challenger == Action::TurnLeft,
        Intent::EnterRightLane => challenger == Action::TurnRight,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lane_change_beats_brake() {
        assert_eq!(
            arbitrate(&[Action::Brake, Action::ChangeLaneLeft], Intent::MergeIntoLeftLane),
            Action::ChangeLaneLeft
        );
    }

    #[test]
    fn singleton_and_empty_sets() {
        assert_eq!(arbitrate(&[Action::Brake], Intent::ContinueInLane), Action::Brake);
        assert_eq!(arbitrate(&[], Intent::ContinueInLane), Action::Cruise);
    }

    #[test]
    fn full_priority_chain() {
        let all = [
            Action::Cruise,
            Action::Accelerate,
            Action::Brake,
            Action::ChangeLaneRight,
            Action::ChangeLaneLeft,
            Action::TurnRight,
        ];
        assert_eq!(arbitrate(&all, Intent::EnterRightLane), Action::TurnRight);
        assert_eq!(arbitrate(&all[..5], Intent::ContinueInLane), Action::ChangeLaneLeft);
        assert_eq!(arbitrate(&all[..4], Intent::ContinueInLane), Action::ChangeLaneRight);
        assert_eq!(arbitrate(&all[..3], Intent::ContinueInLane), Action::Brake);
        assert_eq!(arbitrate(&all[..2], Intent::ContinueInLane), Action::Accelerate);
    }

    #[test]
    fn turn_tie_broken_by_intent_then_vocabulary() {
        let both = [Action::TurnLeft, Action::TurnRight];
        assert_eq!(arbitrate(&both, Intent::EnterRightLane), Action::TurnRight);
        assert_eq!(arbitrate(&both, Intent::EnterLeftLane), Action::TurnLeft);
        assert_eq!(arbitrate(&both, Intent::ContinueInLane), Action::TurnLeft);
    }

    #[test]
    fn vocabulary_roundtrip() {
        for &a in Action::ALL {
            assert_eq!(Action::from_symbol(a.as_str()), Some(a));
        }
        assert_eq!(Action::from_symbol("warp"), None);
    }
}
