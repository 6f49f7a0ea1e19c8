//! Scene-specific builtins for the logic engine: geometry and the braking
//! model, exposed to rules as host predicates.

use std::sync::Arc;

use logic_core::{unify, Builtin, BuiltinRegistry, EngineError, Substitution, Term};

use crate::compile::num_term;
use crate::geometry::path_intersects;
use crate::types::{BrakingModel, Path};

fn term_to_path(builtin: &str, t: &Term) -> Result<Path, EngineError> {
    let misuse = |msg: String| EngineError::Builtin { builtin: builtin.to_string(), message: msg };
    let items = t
        .as_list()
        .ok_or_else(|| misuse(format!("{t} is not a path (expected a list of p(X, Y) points)")))?;
    let mut points = Vec::with_capacity(items.len());
    for item in items {
        match &item {
            Term::Compound(name, args) if name == "p" && args.len() == 2 => {
                match (numeric(&args[0]), numeric(&args[1])) {
                    (Some(x), Some(y)) => points.push((x, y)),
                    _ => return Err(misuse(format!("path point {item} has non-numeric coordinates"))),
                }
            }
            other => return Err(misuse(format!("path element {other} is not a p(X, Y) point"))),
        }
    }
    Path::new(points).map_err(misuse)
}

fn numeric(t: &Term) -> Option<f64> {
    match t {
        Term::Int(i) => Some(*i as f64),
        Term::Float(f) => Some(f.0),
        _ => None,
    }
}

/// `path_intersects`/2: succeeds when the two ground path arguments touch or
/// cross anywhere, endpoints included.
struct PathIntersects;

impl Builtin for PathIntersects {
    fn name(&self) -> &str {
        "path_intersects"
    }

    fn arity(&self) -> usize {
        2
    }

    fn eval(&self, args: &[Term], subst: &Substitution) -> Result<Vec<Substitution>, EngineError> {
        let a = term_to_path(self.name(), &args[0])?;
        let b = term_to_path(self.name(), &args[1])?;
        Ok(if path_intersects(&a, &b) { vec![subst.clone()] } else { vec![] })
    }
}

/// `stopping_distance`/2: binds the second argument to the distance the ego
/// vehicle needs to come to a rest from the speed in the first.
struct StoppingDistance {
    model: BrakingModel,
}

impl Builtin for StoppingDistance {
    fn name(&self) -> &str {
        "stopping_distance"
    }

    fn arity(&self) -> usize {
        2
    }

    fn eval(&self, args: &[Term], subst: &Substitution) -> Result<Vec<Substitution>, EngineError> {
        let speed = numeric(&args[0]).ok_or_else(|| EngineError::Builtin {
            builtin: self.name().to_string(),
            message: format!("speed argument {} is not a number", args[0]),
        })?;
        let d = self.model.stopping_distance(speed).map_err(|message| EngineError::Builtin {
            builtin: self.name().to_string(),
            message,
        })?;
        Ok(match unify(&num_term(d), &args[1], subst) {
            Some(s) => vec![s],
            None => vec![],
        })
    }
}

/// Registers the scene builtins — `path_intersects/2` and
/// `stopping_distance/2` — alongside whatever the registry already holds.
/// The braking model is captured per registration so different scenarios can
/// run with different constants concurrently.
pub fn register_scene_builtins(registry: &mut BuiltinRegistry, braking: BrakingModel) {
    registry.register(Arc::new(PathIntersects));
    registry.register(Arc::new(StoppingDistance { model: braking }));
}
