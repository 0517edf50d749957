use std::collections::HashMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::synapse::{matrix_seed, SynapseMatrix};
use super::{AreaId, AreaParams, Assembly, FiberId, NeuralError};
use crate::scalar::Weight;

/// Declaration of one area for [`build_brain`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaSpec {
    pub name: String,
    pub params: AreaParams,
    /// Explicit (lexicon) area: fixed word assemblies, no plasticity inside.
    pub explicit: bool,
    pub words: Vec<String>,
}

impl AreaSpec {
    pub fn normal(name: impl Into<String>, params: AreaParams) -> Self {
        AreaSpec { name: name.into(), params, explicit: false, words: Vec::new() }
    }

    /// Lexicon area sized to hold one disjoint block of `k` neurons per word.
    pub fn lexicon<S: Into<String>>(name: impl Into<String>, words: impl IntoIterator<Item = S>, params: AreaParams) -> Self {
        let words: Vec<String> = words.into_iter().map(Into::into).collect();
        let n = (words.len() * params.k).max(2 * params.k);
        AreaSpec {
            name: name.into(),
            params: AreaParams { n, ..params },
            explicit: true,
            words,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberSpec {
    pub from: String,
    pub to: String,
    pub directed: bool,
}

impl FiberSpec {
    pub fn undirected(a: impl Into<String>, b: impl Into<String>) -> Self {
        FiberSpec { from: a.into(), to: b.into(), directed: false }
    }

    pub fn directed(from: impl Into<String>, to: impl Into<String>) -> Self {
        FiberSpec { from: from.into(), to: to.into(), directed: true }
    }
}

#[derive(Debug, Clone)]
pub struct Area<T> {
    pub id: AreaId,
    pub name: String,
    pub params: AreaParams,
    pub explicit: bool,
    pub(crate) recurrent: Option<SynapseMatrix<T>>,
    pub(crate) winners: Assembly,
    pub(crate) fixed: HashMap<String, Range<u32>>,
    pub(crate) word_order: Vec<String>,
}

impl<T> Area<T> {
    pub fn winners(&self) -> &Assembly {
        &self.winners
    }

    pub fn fixed_assembly(&self, word: &str) -> Option<Assembly> {
        self.fixed.get(word).map(|r| Assembly::new(r.clone().collect()))
    }

    pub fn words(&self) -> &[String] {
        &self.word_order
    }
}

#[derive(Debug, Clone)]
pub struct Fiber<T> {
    pub id: FiberId,
    pub from: AreaId,
    pub to: AreaId,
    pub directed: bool,
    pub(crate) forward: SynapseMatrix<T>,
    pub(crate) backward: Option<SynapseMatrix<T>>,
}

/// One synapse matrix inside the brain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixRef {
    Recurrent(AreaId),
    Forward(FiberId),
    Backward(FiberId),
}

/// The whole mutable simulation state.
#[derive(Debug, Clone)]
pub struct Brain<T> {
    pub(crate) seed: u64,
    pub(crate) areas: Vec<Area<T>>,
    names: HashMap<String, AreaId>,
    pub(crate) fibers: Vec<Fiber<T>>,
    // Ordered direction (from, to) -> fiber carrying it.
    directions: HashMap<(AreaId, AreaId), FiberId>,
    // Areas whose assembly fired in the most recent step.
    pub(crate) active: Vec<bool>,
}

pub fn build_brain<T: Weight>(areas: &[AreaSpec], fibers: &[FiberSpec], seed: u64) -> Result<Brain<T>, NeuralError> {
    let mut brain = Brain::new(seed);
    for a in areas {
        brain.add_area(a.clone())?;
    }
    for f in fibers {
        brain.add_fiber(f)?;
    }
    Ok(brain)
}

impl<T: Weight> Brain<T> {
    pub fn new(seed: u64) -> Self {
        Brain {
            seed,
            areas: Vec::new(),
            names: HashMap::new(),
            fibers: Vec::new(),
            directions: HashMap::new(),
            active: Vec::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn add_area(&mut self, spec: AreaSpec) -> Result<AreaId, NeuralError> {
        spec.params.validate()?;
        if self.names.contains_key(&spec.name) {
            return Err(NeuralError::DuplicateArea(spec.name));
        }
        let id = AreaId(self.areas.len() as u32);
        let mut fixed = HashMap::new();
        if spec.explicit {
            let k = spec.params.k as u32;
            if spec.words.len() * spec.params.k > spec.params.n {
                return Err(NeuralError::InvalidParams(format!(
                    "explicit area `{}` needs {} neurons for {} words",
                    spec.name,
                    spec.words.len() * spec.params.k,
                    spec.words.len()
                )));
            }
            for (i, w) in spec.words.iter().enumerate() {
                let start = i as u32 * k;
                if fixed.insert(w.clone(), start..start + k).is_some() {
                    return Err(NeuralError::InvalidParams(format!("word `{w}` listed twice in `{}`", spec.name)));
                }
            }
        }
        let recurrent = (!spec.explicit).then(|| {
            SynapseMatrix::new(
                spec.params.n,
                spec.params.n,
                spec.params.p,
                matrix_seed(self.seed, &["rec", &spec.name]),
                true,
            )
        });
        self.names.insert(spec.name.clone(), id);
        self.areas.push(Area {
            id,
            name: spec.name,
            params: spec.params,
            explicit: spec.explicit,
            recurrent,
            winners: Assembly::empty(),
            fixed,
            word_order: spec.words,
        });
        self.active.push(false);
        Ok(id)
    }

    pub fn add_fiber(&mut self, spec: &FiberSpec) -> Result<FiberId, NeuralError> {
        let from = self.area_id(&spec.from)?;
        let to = self.area_id(&spec.to)?;
        let clash = self.directions.contains_key(&(from, to)) || (!spec.directed && self.directions.contains_key(&(to, from)));
        if clash || from == to {
            return Err(NeuralError::DuplicateFiber(spec.from.clone(), spec.to.clone()));
        }
        let id = FiberId(self.fibers.len() as u32);
        let (nf, nt) = (self.areas[from.0 as usize].params.n, self.areas[to.0 as usize].params.n);
        let p = self.fiber_p(from, to);
        let forward = SynapseMatrix::new(nf, nt, p, matrix_seed(self.seed, &["fib", &spec.from, &spec.to]), false);
        let backward = (!spec.directed)
            .then(|| SynapseMatrix::new(nt, nf, p, matrix_seed(self.seed, &["fib", &spec.to, &spec.from]), false));
        self.directions.insert((from, to), id);
        if !spec.directed {
            self.directions.insert((to, from), id);
        }
        self.fibers.push(Fiber { id, from, to, directed: spec.directed, forward, backward });
        Ok(id)
    }

    // Connection probability of the non-explicit endpoint (target first).
    fn fiber_p(&self, from: AreaId, to: AreaId) -> f64 {
        let t = &self.areas[to.0 as usize];
        if !t.explicit {
            t.params.p
        } else {
            self.areas[from.0 as usize].params.p
        }
    }

    pub fn area_id(&self, name: &str) -> Result<AreaId, NeuralError> {
        self.names.get(name).copied().ok_or_else(|| NeuralError::UnknownArea(name.to_string()))
    }

    pub fn has_area(&self, name: &str) -> bool {
        self.names.contains_key(name)
    }

    pub fn area(&self, id: AreaId) -> &Area<T> {
        &self.areas[id.0 as usize]
    }

    pub fn area_name(&self, id: AreaId) -> &str {
        &self.areas[id.0 as usize].name
    }

    pub fn areas(&self) -> &[Area<T>] {
        &self.areas
    }

    pub fn fibers(&self) -> &[Fiber<T>] {
        &self.fibers
    }

    pub fn fiber(&self, id: FiberId) -> &Fiber<T> {
        &self.fibers[id.0 as usize]
    }

    /// The fiber that carries projections `from -> to`, if any.
    pub fn direction(&self, from: AreaId, to: AreaId) -> Option<FiberId> {
        self.directions.get(&(from, to)).copied()
    }

    /// Fiber named by an unordered/ordered pair as written in a rule: the
    /// exact direction if one exists, otherwise the reverse of an undirected fiber.
    pub fn fiber_between(&self, a: &str, b: &str) -> Result<FiberId, NeuralError> {
        let (ia, ib) = (self.area_id(a)?, self.area_id(b)?);
        self.direction(ia, ib)
            .or_else(|| self.direction(ib, ia).filter(|f| !self.fibers[f.0 as usize].directed))
            .ok_or_else(|| NeuralError::UnknownFiber(a.to_string(), b.to_string()))
    }

    /// Out-going projection directions of `a`: (fiber, to-area).
    pub fn outgoing(&self, a: AreaId) -> impl Iterator<Item = (FiberId, AreaId)> + '_ {
        self.fibers.iter().filter_map(move |f| {
            if f.from == a {
                Some((f.id, f.to))
            } else if f.to == a && !f.directed {
                Some((f.id, f.from))
            } else {
                None
            }
        })
    }

    pub fn matrix_for(&self, from: AreaId, to: AreaId) -> Option<MatrixRef> {
        if from == to {
            return self.areas[from.0 as usize].recurrent.as_ref().map(|_| MatrixRef::Recurrent(from));
        }
        let f = self.direction(from, to)?;
        let fiber = &self.fibers[f.0 as usize];
        Some(if fiber.from == from { MatrixRef::Forward(f) } else { MatrixRef::Backward(f) })
    }

    pub fn matrix_mut(&mut self, m: MatrixRef) -> &mut SynapseMatrix<T> {
        match m {
            MatrixRef::Recurrent(a) => self.areas[a.0 as usize].recurrent.as_mut().expect("explicit areas have no recurrence"),
            MatrixRef::Forward(f) => &mut self.fibers[f.0 as usize].forward,
            MatrixRef::Backward(f) => self.fibers[f.0 as usize].backward.as_mut().expect("directed fibers have no backward matrix"),
        }
    }

    pub fn matrix(&self, m: MatrixRef) -> &SynapseMatrix<T> {
        match m {
            MatrixRef::Recurrent(a) => self.areas[a.0 as usize].recurrent.as_ref().expect("explicit areas have no recurrence"),
            MatrixRef::Forward(f) => &self.fibers[f.0 as usize].forward,
            MatrixRef::Backward(f) => self.fibers[f.0 as usize].backward.as_ref().expect("directed fibers have no backward matrix"),
        }
    }

    /// Every matrix in a fixed order: recurrent by area id, then fibers forward/backward.
    pub fn all_matrices(&self) -> Vec<MatrixRef> {
        let mut v: Vec<MatrixRef> = self
            .areas
            .iter()
            .filter(|a| a.recurrent.is_some())
            .map(|a| MatrixRef::Recurrent(a.id))
            .collect();
        for f in &self.fibers {
            v.push(MatrixRef::Forward(f.id));
            if f.backward.is_some() {
                v.push(MatrixRef::Backward(f.id));
            }
        }
        v
    }

    pub fn winners(&self, a: AreaId) -> &Assembly {
        &self.areas[a.0 as usize].winners
    }

    pub fn set_winners(&mut self, a: AreaId, assembly: Assembly) {
        self.areas[a.0 as usize].winners = assembly;
    }

    pub fn is_active(&self, a: AreaId) -> bool {
        self.active[a.0 as usize] && !self.areas[a.0 as usize].winners.is_empty()
    }

    pub fn set_active(&mut self, a: AreaId, active: bool) {
        self.active[a.0 as usize] = active;
    }

    pub fn active_areas(&self) -> impl Iterator<Item = AreaId> + '_ {
        self.areas.iter().map(|a| a.id).filter(|a| self.is_active(*a))
    }

    /// Fire the fixed assembly of `word` in explicit area `lex`, replacing any
    /// previous word.
    pub fn activate_word(&mut self, lex: AreaId, word: &str) -> Result<(), NeuralError> {
        let area = &self.areas[lex.0 as usize];
        if !area.explicit {
            return Err(NeuralError::NotExplicit(area.name.clone()));
        }
        let asm = area.fixed_assembly(word).ok_or_else(|| NeuralError::UnknownWord(word.to_string()))?;
        self.areas[lex.0 as usize].winners = asm;
        self.active[lex.0 as usize] = true;
        Ok(())
    }

    /// Silence every area and clear recorded assemblies. Weights are kept.
    pub fn reset_activity(&mut self) {
        for a in &mut self.areas {
            a.winners = Assembly::empty();
        }
        self.active.iter_mut().for_each(|x| *x = false);
    }

    /// Synaptic input into `target` from the current winners of `sources`
    /// (and the target's own winners through recurrent synapses when it fired
    /// in the last step and `recurrent` is set).
    pub fn compute_inputs(&mut self, target: AreaId, sources: &[AreaId], recurrent: bool) -> Result<Vec<T>, NeuralError> {
        let mut firing = Vec::with_capacity(sources.len() + 1);
        for &s in sources {
            if self.winners(s).is_empty() {
                return Err(NeuralError::SilentSource(self.area_name(s).to_string()));
            }
            firing.push((s, self.winners(s).clone()));
        }
        if recurrent && self.is_active(target) && !sources.contains(&target) {
            firing.push((target, self.winners(target).clone()));
        }
        self.inputs_from(target, &firing)
    }

    pub(crate) fn inputs_from(&mut self, target: AreaId, firing: &[(AreaId, Assembly)]) -> Result<Vec<T>, NeuralError> {
        let n = self.areas[target.0 as usize].params.n;
        let mut out = vec![T::zero(); n];
        for (src, asm) in firing {
            let m = self
                .matrix_for(*src, target)
                .ok_or_else(|| NeuralError::UnknownFiber(self.area_name(*src).to_string(), self.area_name(target).to_string()))?;
            self.matrix_mut(m).accumulate(asm.neurons(), &mut out);
        }
        Ok(out)
    }

    /// Read-only recall: fire `assembly` in `source` and return the cap in
    /// `target` after `rounds` rounds (later rounds add the target's own
    /// recurrent feedback when `recurrent` is set). No weights change and no
    /// recorded winners are touched.
    pub fn recall(
        &mut self,
        source: AreaId,
        assembly: &Assembly,
        target: AreaId,
        rounds: usize,
        recurrent: bool,
    ) -> Result<Assembly, NeuralError> {
        let k = self.areas[target.0 as usize].params.k;
        let mut current = Assembly::empty();
        for _ in 0..rounds.max(1) {
            let mut firing = vec![(source, assembly.clone())];
            if recurrent && !current.is_empty() && !self.areas[target.0 as usize].explicit {
                firing.push((target, current.clone()));
            }
            let inputs = self.inputs_from(target, &firing)?;
            let next = super::select_winners(&inputs, k);
            if next == current {
                break;
            }
            current = next;
        }
        Ok(current)
    }

    /// Current weight of synapse `i -> j` in matrix `m`, if it exists.
    pub fn weight(&mut self, m: MatrixRef, i: usize, j: u32) -> Option<T> {
        let row = self.matrix_mut(m).row(i);
        row.binary_search_by_key(&j, |s| s.target).ok().map(|ix| row[ix].weight)
    }
}
