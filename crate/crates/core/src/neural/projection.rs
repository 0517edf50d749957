use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{AreaId, Assembly, Brain, InhibitionState, NeuralError, ProjectionMap};
use crate::scalar::Weight;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionConfig {
    /// Upper bound on rounds per Projection*.
    pub rounds: usize,
    /// Stop early once every target keeps at least this fraction of its
    /// previous-round winners. `None` always runs `rounds` rounds.
    pub stop_overlap: Option<f64>,
    /// Whether a target that fired in the previous round also receives its
    /// own recurrent input.
    pub recurrent: bool,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        ProjectionConfig { rounds: 10, stop_overlap: None, recurrent: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionOutcome {
    /// Final winners of every target area.
    pub winners: BTreeMap<AreaId, Assembly>,
    pub rounds: usize,
}

/// Indices of the `k` largest inputs, ties broken by lower index. An input
/// vector with no positive entry yields an empty assembly.
pub fn select_winners<T: Weight>(inputs: &[T], k: usize) -> Assembly {
    if k == 0 || !inputs.iter().any(|x| *x > T::zero()) {
        return Assembly::empty();
    }
    let k = k.min(inputs.len());
    let mut idx: Vec<u32> = (0..inputs.len() as u32).collect();
    let cmp = |a: &u32, b: &u32| {
        inputs[*b as usize]
            .partial_cmp(&inputs[*a as usize])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(b))
    };
    if k < idx.len() {
        idx.select_nth_unstable_by(k - 1, cmp);
        idx.truncate(k);
    }
    Assembly::new(idx)
}

/// All `A -> B` such that `A` fired in the last step, `B` is a disinhibited
/// non-explicit area and the fiber carrying `A -> B` is disinhibited.
pub fn build_projection_map<T: Weight>(brain: &Brain<T>, inhibition: &InhibitionState) -> ProjectionMap {
    let mut map = ProjectionMap::new();
    for a in brain.active_areas().collect::<Vec<_>>() {
        for (fiber, b) in brain.outgoing(a) {
            if inhibition.fiber_disinhibited(fiber) && inhibition.area_disinhibited(b) && !brain.area(b).explicit {
                map.insert(a, b);
            }
        }
    }
    map
}

/// Hebbian step: `w_ij *= 1 + β` for `i` in `fired_prev[from]`, `j` in
/// `fired_next[to]`, along each listed path. β is the target area's.
pub fn update_weights<T: Weight>(
    brain: &mut Brain<T>,
    paths: &[(AreaId, AreaId)],
    fired_prev: &BTreeMap<AreaId, Assembly>,
    fired_next: &BTreeMap<AreaId, Assembly>,
) {
    for &(from, to) in paths {
        let (Some(pre), Some(post)) = (fired_prev.get(&from), fired_next.get(&to)) else { continue };
        if pre.is_empty() || post.is_empty() || brain.area(to).explicit {
            continue;
        }
        let params = brain.area(to).params;
        if params.beta == 0.0 {
            continue;
        }
        let Some(m) = brain.matrix_for(from, to) else { continue };
        let mut mask = vec![false; params.n];
        for &j in post.neurons() {
            mask[j as usize] = true;
        }
        let factor = T::one() + T::from_f64_lossy(params.beta);
        brain.matrix_mut(m).potentiate(pre.neurons(), &mask, factor);
    }
}

/// Execute every projection of `map` at once for up to `cfg.rounds` rounds.
///
/// Each round computes all target inputs from the same snapshot of the
/// previous round's firing, caps every target, then applies plasticity.
/// Sources that are not targets keep firing their assembly throughout.
/// Afterwards only the targets count as having fired in the last step.
pub fn project_star<T: Weight>(
    brain: &mut Brain<T>,
    map: &ProjectionMap,
    inhibition: &InhibitionState,
    cfg: &ProjectionConfig,
) -> Result<ProjectionOutcome, NeuralError> {
    if map.is_empty() {
        return Ok(ProjectionOutcome { winners: BTreeMap::new(), rounds: 0 });
    }
    for (from, to) in map.pairs() {
        let fiber = brain.direction(from, to);
        let ok = fiber.is_some_and(|f| inhibition.fiber_disinhibited(f)) && inhibition.area_disinhibited(to);
        if !ok {
            return Err(NeuralError::InhibitedProjection(
                brain.area_name(from).to_string(),
                brain.area_name(to).to_string(),
            ));
        }
        if brain.winners(from).is_empty() {
            return Err(NeuralError::SilentSource(brain.area_name(from).to_string()));
        }
    }

    let sources = map.sources();
    let targets = map.targets();
    let sustained: BTreeSet<AreaId> = sources.difference(&targets).copied().collect();

    let mut prev: BTreeMap<AreaId, Assembly> = BTreeMap::new();
    for &a in sources.iter().chain(targets.iter()) {
        if brain.is_active(a) {
            prev.insert(a, brain.winners(a).clone());
        }
    }

    let mut paths: Vec<(AreaId, AreaId)> = map.pairs().collect();
    for (from, to) in map.pairs() {
        let f = brain.direction(from, to).map(|f| brain.fiber(f));
        let undirected = f.is_some_and(|f| !f.directed);
        if undirected && sustained.contains(&from) && !brain.area(from).explicit {
            paths.push((to, from));
        }
    }
    if cfg.recurrent {
        paths.extend(targets.iter().map(|&t| (t, t)));
    }

    let mut rounds = 0;
    for round in 0..cfg.rounds.max(1) {
        let mut next: BTreeMap<AreaId, Assembly> = BTreeMap::new();
        for &t in &targets {
            let mut firing: Vec<(AreaId, Assembly)> = map
                .sources_of(t)
                .into_iter()
                .filter_map(|s| prev.get(&s).map(|a| (s, a.clone())))
                .collect();
            if cfg.recurrent {
                if let Some(own) = prev.get(&t) {
                    firing.push((t, own.clone()));
                }
            }
            let inputs = brain.inputs_from(t, &firing)?;
            next.insert(t, select_winners(&inputs, brain.area(t).params.k));
        }
        for &s in &sustained {
            if let Some(a) = prev.get(&s) {
                next.insert(s, a.clone());
            }
        }
        update_weights(brain, &paths, &prev, &next);
        rounds = round + 1;

        let settled = round > 0
            && cfg.stop_overlap.is_some_and(|stop| targets.iter().all(|t| {
                let k = brain.area(*t).params.k;
                match (prev.get(t), next.get(t)) {
                    (Some(a), Some(b)) => a.overlap_fraction(b, k) >= stop,
                    (None, Some(b)) => b.is_empty(),
                    _ => true,
                }
            }));
        prev = next;
        if settled {
            break;
        }
    }

    let mut winners = BTreeMap::new();
    for id in 0..brain.areas.len() {
        brain.active[id] = false;
    }
    for &t in &targets {
        let w = prev.remove(&t).unwrap_or_default();
        brain.active[t.0 as usize] = !w.is_empty();
        if !w.is_empty() {
            brain.set_winners(t, w.clone());
        }
        winners.insert(t, w);
    }
    Ok(ProjectionOutcome { winners, rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neural::{build_brain, AreaParams, AreaSpec, FiberSpec};

    #[test]
    fn select_argmax() {
        assert_eq!(select_winners(&[0.5f64, 0.2, 0.9], 1).neurons(), &[2]);
    }

    #[test]
    fn select_ties_lowest_index() {
        assert_eq!(select_winners(&[1.0f64, 1.0, 1.0], 2).neurons(), &[0, 1]);
    }

    #[test]
    fn select_silent_on_zero_drive() {
        assert!(select_winners(&[0.0f32; 5], 3).is_empty());
    }

    #[test]
    fn select_pads_with_lowest_zero_inputs() {
        let a = select_winners(&[0.0f64, 0.0, 3.0, 0.0], 2);
        assert_eq!(a.neurons(), &[0, 2]);
    }

    fn small() -> Brain<f64> {
        let p = AreaParams::new(200, 10, 0.1, 0.1).unwrap();
        let areas = [
            AreaSpec::lexicon("Lex", ["w0", "w1"], p),
            AreaSpec::normal("A", p),
            AreaSpec::normal("B", p),
        ];
        let fibers = [FiberSpec::undirected("Lex", "A"), FiberSpec::directed("A", "B")];
        build_brain(&areas, &fibers, 11).unwrap()
    }

    #[test]
    fn everything_inhibited_gives_empty_map() {
        let mut b = small();
        let lex = b.area_id("Lex").unwrap();
        b.activate_word(lex, "w0").unwrap();
        assert!(build_projection_map(&b, &InhibitionState::new()).is_empty());
    }

    #[test]
    fn directed_fiber_has_no_reverse() {
        let mut b = small();
        let (a, bb) = (b.area_id("A").unwrap(), b.area_id("B").unwrap());
        b.set_winners(bb, Assembly::new((0..10).collect()));
        b.set_active(bb, true);
        let mut inh = InhibitionState::new();
        inh.set_area(a, true);
        inh.set_area(bb, true);
        inh.set_fiber(b.direction(a, bb).unwrap(), true);
        assert!(build_projection_map(&b, &inh).is_empty());
    }

    #[test]
    fn empty_map_changes_nothing() {
        let mut b = small();
        let out = project_star(&mut b, &ProjectionMap::new(), &InhibitionState::new(), &ProjectionConfig::default()).unwrap();
        assert!(out.winners.is_empty());
        assert_eq!(out.rounds, 0);
    }

    #[test]
    fn inhibited_map_entry_is_rejected() {
        let mut b = small();
        let (lex, a) = (b.area_id("Lex").unwrap(), b.area_id("A").unwrap());
        b.activate_word(lex, "w0").unwrap();
        let mut map = ProjectionMap::new();
        map.insert(lex, a);
        let err = project_star(&mut b, &map, &InhibitionState::new(), &ProjectionConfig::default()).unwrap_err();
        assert!(matches!(err, NeuralError::InhibitedProjection(..)));
    }

    #[test]
    fn pre_fired_post_silent_leaves_weight() {
        let mut b = small();
        let (lex, a) = (b.area_id("Lex").unwrap(), b.area_id("A").unwrap());
        let m = b.matrix_for(lex, a).unwrap();
        let row: Vec<_> = b.matrix_mut(m).row(0).to_vec();
        let prev = BTreeMap::from([(lex, Assembly::new(vec![0]))]);
        let next = BTreeMap::from([(a, Assembly::empty())]);
        update_weights(&mut b, &[(lex, a)], &prev, &next);
        assert_eq!(b.matrix_mut(m).row(0), &row[..]);
    }
}
