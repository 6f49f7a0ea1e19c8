//! Differential check of the exact segment-intersection predicate against a
//! dense-sampling oracle.
//!
//! The oracle knows nothing about intersection math: it samples both paths
//! at 1 cm resolution and asks whether any two sampled points come within
//! 1 mm. Sampling leaves a blind band around true contact — two crossing
//! segments can have their nearest samples up to one full step apart — so
//! the two implementations must agree everywhere outside that band, and any
//! disagreement inside it is accepted as sampling noise.

use logic_core::fixpoint::SplitMix64;
use scene_model::{path_intersects, Path};

const STEP: f64 = 0.01; // 1 cm sampling resolution
const CONTACT: f64 = 0.001; // 1 mm contact threshold
/// Nearest samples to a true crossing sit within STEP/2 on each path, so
/// their mutual distance is at most STEP (plus float dust). Outside this
/// band the oracle verdict is definitive.
const BAND: f64 = STEP * 1.1;

fn sample(path: &Path) -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for (a, b) in path.segments() {
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        let steps = (len / STEP).ceil() as usize;
        for i in 0..steps {
            let f = i as f64 / steps as f64;
            pts.push((a.0 + f * (b.0 - a.0), a.1 + f * (b.1 - a.1)));
        }
    }
    let last = *path.points().last().unwrap();
    pts.push(last);
    pts
}

/// Minimum distance between two sampled point sets, computed with a uniform
/// grid so a thousand cases stay fast. Exact for distances below `BAND`;
/// larger distances are reported as `f64::INFINITY`, which is all the
/// comparison needs.
fn min_sampled_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    use std::collections::HashMap;
    let cell = BAND.max(STEP);
    let key = |p: (f64, f64)| ((p.0 / cell).floor() as i64, (p.1 / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<(f64, f64)>> = HashMap::new();
    for &p in a {
        grid.entry(key(p)).or_default().push(p);
    }
    let mut best = f64::INFINITY;
    for &q in b {
        let (kx, ky) = key(q);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(cellmates) = grid.get(&(kx + dx, ky + dy)) {
                    for &p in cellmates {
                        let d = ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
                        best = best.min(d);
                    }
                }
            }
        }
    }
    best
}

fn oracle_verdict(a: &Path, b: &Path) -> (bool, f64) {
    let dist = min_sampled_distance(&sample(a), &sample(b));
    (dist < CONTACT, dist)
}

fn random_path(rng: &mut SplitMix64) -> Path {
    let f = |rng: &mut SplitMix64| (rng.next_u64() % 1_200) as f64 / 100.0 - 6.0;
    loop {
        let n = 2 + (rng.next_u64() % 3) as usize;
        let pts: Vec<(f64, f64)> = (0..n).map(|_| (f(rng), f(rng))).collect();
        if let Ok(p) = Path::new(pts) {
            return p;
        }
    }
}

#[test]
fn exact_predicate_agrees_with_dense_sampling_on_1000_pairs() {
    let mut rng = SplitMix64::new(0xD1CE);
    let mut crossings = 0;
    let mut definitively_apart = 0;
    for case in 0..1000 {
        let a = random_path(&mut rng);
        let b = random_path(&mut rng);
        let exact = path_intersects(&a, &b);
        let (sampled, dist) = oracle_verdict(&a, &b);
        if exact {
            crossings += 1;
        }
        if exact != sampled {
            assert!(
                dist <= BAND,
                "case {case}: exact={exact} but sampled distance {dist} is outside the \
                 tolerance band\n  a = {:?}\n  b = {:?}",
                a.points(),
                b.points()
            );
        }
        if dist > BAND {
            definitively_apart += 1;
            assert!(
                !exact,
                "case {case}: paths {:?} and {:?} never come within {BAND} m of each other, \
                 yet path_intersects claims contact",
                a.points(),
                b.points()
            );
        }
    }
    // The generator must actually exercise both outcomes for the comparison
    // to mean anything.
    assert!(crossings > 100, "only {crossings} crossing pairs in 1000");
    assert!(definitively_apart > 100, "only {definitively_apart} clearly separate pairs in 1000");
}

#[test]
fn constructed_crossings_are_always_detected() {
    let mut rng = SplitMix64::new(0xBEEF);
    for _ in 0..200 {
        let a = random_path(&mut rng);
        // Pick an interior point of a's first segment and force b through it
        // on a transversal heading.
        let ((x1, y1), (x2, y2)) = a.segments().next().unwrap();
        let f = 0.25 + (rng.next_u64() % 51) as f64 / 100.0;
        let hit = (x1 + f * (x2 - x1), y1 + f * (y2 - y1));
        let b = Path::new(vec![
            (hit.0 - (y2 - y1), hit.1 + (x2 - x1)),
            (hit.0 + (y2 - y1), hit.1 - (x2 - x1)),
        ])
        .unwrap();
        assert!(path_intersects(&a, &b), "missed forced crossing at {hit:?}");
        let (_, dist) = oracle_verdict(&a, &b);
        assert!(dist <= BAND, "oracle should see the crossing inside the band, got {dist}");
    }
}

#[test]
fn translated_far_apart_never_intersects() {
    let mut rng = SplitMix64::new(0xFADE);
    for _ in 0..200 {
        let a = random_path(&mut rng);
        let b = Path::new(a.points().iter().map(|(x, y)| (x + 100.0, *y)).collect()).unwrap();
        assert!(!path_intersects(&a, &b));
        let (sampled, _) = oracle_verdict(&a, &b);
        assert!(!sampled);
    }
}
