//! Flashing-light recognition over a short history window.

use crate::types::LightState;

/// History window length, frames.
pub const FLASHING_WINDOW: usize = 8;

/// Minimum alternating red/none transitions for a flashing verdict.
pub const FLASHING_MIN_CHANGES: usize = 4;

/// Whether a trailing history of traffic-light states (oldest first, at most
/// [`FLASHING_WINDOW`] entries) shows a flashing red: at least
/// [`FLASHING_MIN_CHANGES`] adjacent state changes, every one of them
/// between `red` and `none`.
pub fn detect_flashing(history: &[LightState]) -> bool {
    let window = if history.len() > FLASHING_WINDOW {
        &history[history.len() - FLASHING_WINDOW..]
    } else {
        history
    };
    let changes = window
        .windows(2)
        .filter(|pair| {
            matches!(
                (pair[0], pair[1]),
                (LightState::Red, LightState::None) | (LightState::None, LightState::Red)
            )
        })
        .count();
    changes >= FLASHING_MIN_CHANGES
}
