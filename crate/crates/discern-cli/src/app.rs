//! Command implementations, decoupled from process exit handling.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rules_catalog::{
    decide, decide_all, load_rulebase, CatalogError, DecideError, LintMode, Rulebase,
    CATALOG_SOURCES,
};
use scene_model::{parse_scenario, validate_frame, Scenario};

use crate::record::{BenchReport, BenchRow, DecisionRecord, ScenarioLatencies};

/// Command failure, classified by exit code.
#[derive(Debug)]
pub enum AppError {
    /// Unreadable input, scenario/rulebase parse failure, or lint failure.
    Parse(String),
    /// The combined rulebase is not stratified.
    Stratify(String),
    /// The engine faulted while deciding.
    Runtime(String),
    /// A latency budget assertion failed.
    Budget(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Parse(_) => 1,
            AppError::Stratify(_) => 2,
            AppError::Runtime(_) => 3,
            AppError::Budget(_) => 4,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Parse(m)
            | AppError::Stratify(m)
            | AppError::Runtime(m)
            | AppError::Budget(m) => f.write_str(m),
        }
    }
}

fn catalog_error(e: CatalogError) -> AppError {
    match e {
        CatalogError::Stratify(_) => AppError::Stratify(e.to_string()),
        CatalogError::Parse { .. } | CatalogError::Lint { .. } => AppError::Parse(e.to_string()),
    }
}

fn decide_error(e: DecideError) -> AppError {
    match e {
        DecideError::Scene(_) => AppError::Parse(e.to_string()),
        DecideError::Engine { .. } => AppError::Runtime(e.to_string()),
    }
}

/// Reads and parses a scenario; frame-invariant violations are warnings on
/// standard error, never output.
fn load_scenario(path: &Path) -> Result<Scenario, AppError> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::Parse(format!("{}: {e}", path.display())))?;
    let scenario = parse_scenario(&text)
        .map_err(|e| AppError::Parse(format!("{}: {e}", path.display())))?;
    for frame in &scenario.frames {
        for warning in validate_frame(frame) {
            eprintln!("warning: {}: frame {}: {warning}", path.display(), frame.timestamp);
        }
    }
    Ok(scenario)
}

fn shipped_rulebase() -> Result<Rulebase, AppError> {
    Rulebase::shipped().map_err(catalog_error)
}

fn print_record(record: &DecisionRecord, json: bool) {
    if json {
        println!("{}", record.to_json_line());
    } else {
        print!("{}", record.to_text());
    }
}

pub fn cmd_decide(file: &Path, t: u64, explain: bool, json: bool) -> Result<(), AppError> {
    let scenario = load_scenario(file)?;
    let rulebase = shipped_rulebase()?;
    let decision = decide(&rulebase, &scenario, t).map_err(decide_error)?;
    print_record(&DecisionRecord::new(&scenario.name, &decision, explain), json);
    Ok(())
}

pub fn cmd_run(file: &Path, explain: bool, json: bool) -> Result<(), AppError> {
    let scenario = load_scenario(file)?;
    let rulebase = shipped_rulebase()?;
    let decisions = decide_all(&rulebase, &scenario).map_err(decide_error)?;
    for decision in &decisions {
        print_record(&DecisionRecord::new(&scenario.name, decision, explain), json);
    }
    Ok(())
}

pub fn cmd_bench(
    dir: &Path,
    reps: u32,
    assert_avg_ms: Option<f64>,
    assert_max_ms: Option<f64>,
    json: bool,
) -> Result<(), AppError> {
    if reps == 0 {
        return Err(AppError::Parse("--reps must be at least 1".into()));
    }
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| AppError::Parse(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "scn"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(AppError::Parse(format!(
            "no .scn scenarios under {}",
            dir.display()
        )));
    }

    let rulebase = shipped_rulebase()?;
    let mut env_samples: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut env_frames: BTreeMap<String, usize> = BTreeMap::new();
    let mut scenarios = Vec::new();
    let mut all_samples: Vec<f64> = Vec::new();

    for path in &paths {
        let scenario = load_scenario(path)?;
        let mut per_frame: Vec<Vec<f64>> = vec![Vec::new(); scenario.frames.len()];
        let mut baseline: Option<Vec<String>> = None;
        for _ in 0..reps {
            let decisions = decide_all(&rulebase, &scenario).map_err(decide_error)?;
            let actions: Vec<String> =
                decisions.iter().map(|d| d.action.to_string()).collect();
            match &baseline {
                None => baseline = Some(actions),
                Some(expected) => {
                    if *expected != actions {
                        return Err(AppError::Runtime(format!(
                            "nondeterministic decisions while benchmarking {}",
                            scenario.name
                        )));
                    }
                }
            }
            for (slot, decision) in per_frame.iter_mut().zip(&decisions) {
                slot.push(decision.latency_ms());
            }
        }
        for (frame, samples) in scenario.frames.iter().zip(&per_frame) {
            let env = frame
                .location_class
                .map(|c| c.to_string())
                .unwrap_or_else(|| "unspecified".to_string());
            *env_frames.entry(env.clone()).or_default() += 1;
            env_samples.entry(env).or_default().extend_from_slice(samples);
            all_samples.extend_from_slice(samples);
        }
        scenarios.push(ScenarioLatencies {
            scenario: scenario.name.clone(),
            frame_latencies_ms: per_frame.iter().map(|s| mean(s)).collect(),
        });
    }

    let mut rows: Vec<BenchRow> = env_samples
        .iter()
        .map(|(env, samples)| BenchRow {
            environment: env.clone(),
            frames: env_frames[env],
            avg_ms: mean(samples),
            max_ms: max(samples),
        })
        .collect();
    // Vocabulary order (the order the location classes are declared in),
    // with any unspecified row last.
    rows.sort_by_key(|row| environment_rank(&row.environment));
    rows.push(BenchRow {
        environment: "overall".to_string(),
        frames: env_frames.values().sum(),
        avg_ms: mean(&all_samples),
        max_ms: max(&all_samples),
    });

    let report = BenchReport { reps, rows, scenarios };
    if json {
        println!("{}", serde_json::to_string(&report).expect("report serializes"));
    } else {
        print!("{}", report.to_text());
    }

    for row in &report.rows {
        if let Some(budget) = assert_avg_ms {
            if row.avg_ms > budget {
                return Err(AppError::Budget(format!(
                    "{} average {:.2} ms exceeds the {budget} ms budget",
                    row.environment, row.avg_ms
                )));
            }
        }
        if let Some(budget) = assert_max_ms {
            if row.max_ms > budget {
                return Err(AppError::Budget(format!(
                    "{} max {:.2} ms exceeds the {budget} ms budget",
                    row.environment, row.max_ms
                )));
            }
        }
    }
    Ok(())
}

fn environment_rank(env: &str) -> usize {
    scene_model::LocationClass::ALL
        .iter()
        .position(|c| c.as_str() == env)
        .unwrap_or(usize::MAX)
}

fn mean(samples: &[f64]) -> f64 {
    if samples.is_empty() {
        return 0.0;
    }
    samples.iter().sum::<f64>() / samples.len() as f64
}

fn max(samples: &[f64]) -> f64 {
    samples.iter().copied().fold(0.0, f64::max)
}

pub fn cmd_check(files: &[PathBuf], strict: bool) -> Result<(), AppError> {
    let mut overlays = Vec::new();
    for path in files {
        let text = fs::read_to_string(path)
            .map_err(|e| AppError::Parse(format!("{}: {e}", path.display())))?;
        overlays.push((path.display().to_string(), text));
    }
    let mode = if strict { LintMode::Strict } else { LintMode::Warn };
    let rulebase = load_rulebase(&overlays, mode).map_err(catalog_error)?;
    for warning in rulebase.lint_warnings() {
        eprintln!("warning: {warning}");
    }

    let program = rulebase.program();
    println!(
        "rulebase ok: {} rules ({} constraints) across {} sources, {} strata",
        program.rules().len(),
        program.constraint_indices().len(),
        CATALOG_SOURCES.len() + overlays.len(),
        rulebase.strata().count,
    );
    let texts: Vec<&str> = CATALOG_SOURCES
        .iter()
        .map(|(_, text)| *text)
        .chain(overlays.iter().map(|(_, text)| text.as_str()))
        .collect();
    println!("coverage tags: {}", coverage_tags(&texts).join(" "));
    Ok(())
}

/// Rule-group tags: `% [TAG]` comment markers in the rule sources, sorted
/// and de-duplicated.
fn coverage_tags(sources: &[&str]) -> Vec<String> {
    let mut tags = std::collections::BTreeSet::new();
    for source in sources {
        for line in source.lines() {
            let Some(rest) = line.trim_start().strip_prefix("% [") else { continue };
            let Some(end) = rest.find(']') else { continue };
            let tag = &rest[..end];
            let well_formed = !tag.is_empty()
                && tag
                    .chars()
                    .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit() || c == '-');
            if well_formed {
                tags.insert(tag.to_string());
            }
        }
    }
    tags.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coverage_tags_cover_the_catalog_groups() {
        let texts: Vec<&str> = CATALOG_SOURCES.iter().map(|(_, t)| *t).collect();
        let tags = coverage_tags(&texts);
        for expected in ["CLL-192", "BR-195", "BR-196", "MIT-SPEED", "TR-EXC", "SUGGEST"] {
            assert!(tags.iter().any(|t| t == expected), "missing tag {expected} in {tags:?}");
        }
    }

    #[test]
    fn malformed_tags_are_ignored()  {
        let tags = coverage_tags(&["% [ok-not-upper]\n% [GOOD-1]\n%[NOSPACE]\nx :- y. % [TRAIL]"]);
        assert_eq!(tags, vec!["GOOD-1".to_string()]);
    }

    #[test]
    fn environment_ranks_follow_the_vocabulary() {
        assert!(environment_rank("city") < environment_rank("road"));
        assert!(environment_rank("road") < environment_rank("residential"));
        assert!(environment_rank("residential") < environment_rank("campus"));
        assert!(environment_rank("campus") < environment_rank("unspecified"));
    }
}
