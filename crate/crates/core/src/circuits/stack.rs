//! Stack circuits: one chain of areas `S_1, S_2, …` per bracket pair, with a
//! directed fiber each way between neighbours. An opener moves the pointer
//! one area up, a closer one area down. `S_1` is the ground area, so the
//! pointer sits at `S_{depth+1}`.

use serde::{Deserialize, Serialize};

use super::CircuitError;
use crate::automaton::BracketPair;
use crate::neural::{
    build_brain, build_projection_map, project_star, AreaParams, AreaSpec, Assembly, Brain, FiberSpec, InhibitionState,
    ProjectionConfig,
};
use crate::scalar::Weight;

pub const DEFAULT_MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StackCircuit {
    pub pair: BracketPair,
    pub prefix: String,
    pub max_depth: usize,
    depth: usize,
    allocated: usize,
}

pub fn build_sc(pair: BracketPair, prefix: impl Into<String>, max_depth: usize) -> StackCircuit {
    StackCircuit { pair, prefix: prefix.into(), max_depth, depth: 0, allocated: 1 }
}

impl StackCircuit {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn area(&self, index: usize) -> String {
        format!("{}{}", self.prefix, index)
    }

    /// Area under the pointer.
    pub fn pointer(&self) -> String {
        self.area(self.depth + 1)
    }

    /// Areas created so far, `S_1` first.
    pub fn areas(&self) -> Vec<String> {
        (1..=self.allocated).map(|i| self.area(i)).collect()
    }

    /// Fibers between the allocated neighbours, both directions.
    pub fn fibers(&self) -> Vec<FiberSpec> {
        (1..self.allocated)
            .flat_map(|i| [FiberSpec::directed(self.area(i), self.area(i + 1)), FiberSpec::directed(self.area(i + 1), self.area(i))])
            .collect()
    }

    /// Read one bracket and return the new depth.
    pub fn step(&mut self, symbol: &str) -> Result<usize, CircuitError> {
        if symbol == self.pair.open {
            if self.depth == self.max_depth {
                return Err(CircuitError::DepthExceeded(self.max_depth));
            }
            self.depth += 1;
            self.allocated = self.allocated.max(self.depth + 1);
        } else if symbol == self.pair.close {
            if self.depth == 0 {
                return Err(CircuitError::Underflow);
            }
            self.depth -= 1;
        } else {
            return Err(CircuitError::UnknownSymbol(symbol.to_string()));
        }
        Ok(self.depth)
    }
}

pub fn sc_step(sc: &mut StackCircuit, symbol: &str) -> Result<usize, CircuitError> {
    sc.step(symbol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScStep {
    pub symbol: String,
    pub depth: usize,
    /// Area that received the projection (openers only).
    pub area: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScRun {
    pub accepted: bool,
    pub steps: Vec<ScStep>,
    /// Index of a closer read at depth zero.
    pub underflow_at: Option<usize>,
}

/// Drive a stack circuit over `input` on a fresh brain. Each opener projects
/// the bracket's word assembly, together with the assembly under the
/// pointer, into the next area up.
pub fn run_sc_neural<T: Weight, S: AsRef<str>>(
    pair: &BracketPair,
    input: &[S],
    params: AreaParams,
    cfg: &ProjectionConfig,
    seed: u64,
    max_depth: usize,
) -> Result<(ScRun, Brain<T>), CircuitError> {
    let mut sc = build_sc(pair.clone(), "S", max_depth);
    let lex = AreaSpec::lexicon("Lex", [pair.open.clone(), pair.close.clone()], params);
    let mut brain: Brain<T> = build_brain(&[lex, AreaSpec::normal(sc.area(1), params)], &[FiberSpec::undirected("Lex", sc.area(1))], seed)?;
    let lex_id = brain.area_id("Lex")?;
    let mut stored: Vec<Assembly> = vec![Assembly::empty()];
    let mut steps = Vec::new();
    for (i, s) in input.iter().enumerate() {
        let s = s.as_ref();
        let below = sc.pointer();
        let depth = match sc.step(s) {
            Ok(d) => d,
            Err(CircuitError::Underflow) => {
                return Ok((ScRun { accepted: false, steps, underflow_at: Some(i) }, brain));
            }
            Err(e) => return Err(e),
        };
        if s != pair.open {
            stored.truncate(depth + 1);
            steps.push(ScStep { symbol: s.to_string(), depth, area: None });
            continue;
        }
        let target = sc.pointer();
        if !brain.has_area(&target) {
            brain.add_area(AreaSpec::normal(target.clone(), params))?;
            brain.add_fiber(&FiberSpec::undirected("Lex", target.clone()))?;
            brain.add_fiber(&FiberSpec::directed(below.clone(), target.clone()))?;
            brain.add_fiber(&FiberSpec::directed(target.clone(), below.clone()))?;
        }
        let (t, b) = (brain.area_id(&target)?, brain.area_id(&below)?);
        let below_assembly = stored[depth - 1].clone();
        brain.reset_activity();
        if !below_assembly.is_empty() {
            brain.set_winners(b, below_assembly);
            brain.set_active(b, true);
        }
        brain.activate_word(lex_id, s)?;
        let mut inh = InhibitionState::new();
        inh.set_area(t, true);
        inh.set_fiber(brain.fiber_between("Lex", &target)?, true);
        inh.set_fiber(brain.fiber_between(&below, &target)?, true);
        let map = build_projection_map(&brain, &inh);
        let out = project_star(&mut brain, &map, &inh, cfg)?;
        stored.truncate(depth);
        stored.push(out.winners.get(&t).cloned().unwrap_or_default());
        steps.push(ScStep { symbol: s.to_string(), depth, area: Some(target) });
    }
    Ok((ScRun { accepted: sc.depth() == 0, steps, underflow_at: None }, brain))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &str) -> Result<StackCircuit, CircuitError> {
        let mut sc = build_sc(BracketPair::new("(", ")"), "S", DEFAULT_MAX_DEPTH);
        for c in s.chars() {
            sc.step(&c.to_string())?;
        }
        Ok(sc)
    }

    #[test]
    fn depth_tracks_prefix() {
        let sc = run("((()").unwrap();
        assert_eq!(sc.depth(), 2);
        assert_eq!(sc.pointer(), "S3");
        assert_eq!(sc.areas(), ["S1", "S2", "S3", "S4"]);
        assert_eq!(run("()(())").unwrap().depth(), 0);
        assert!(matches!(run(")"), Err(CircuitError::Underflow)));
        assert_eq!(sc.fibers().len(), 6);
    }

    #[test]
    fn depth_limit_is_resource_error() {
        let mut sc = build_sc(BracketPair::new("(", ")"), "S", 2);
        sc.step("(").unwrap();
        sc.step("(").unwrap();
        assert!(matches!(sc.step("("), Err(CircuitError::DepthExceeded(2))));
        assert!(matches!(sc.step("x"), Err(CircuitError::UnknownSymbol(_))));
    }

    #[test]
    fn neural_run_uses_distinct_consecutive_areas() {
        let params = AreaParams::new(1_000, 20, 0.05, 0.2).unwrap();
        let input: Vec<String> = "(()(()))".chars().map(String::from).collect();
        let (r, brain) =
            run_sc_neural::<f32, _>(&BracketPair::new("(", ")"), &input, params, &ProjectionConfig::default(), 3, 8).unwrap();
        assert!(r.accepted);
        let areas: Vec<_> = r.steps.iter().filter_map(|s| s.area.clone()).collect();
        assert_eq!(areas, ["S2", "S3", "S3", "S4"]);
        assert!(brain.has_area("S4") && !brain.has_area("S5"));
        let (r, _) =
            run_sc_neural::<f32, _>(&BracketPair::new("(", ")"), &["(", ")", ")"], params, &ProjectionConfig::default(), 3, 8).unwrap();
        assert_eq!(r.underflow_at, Some(2));
    }
}
