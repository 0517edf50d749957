//! Recurrent circuits: a closure `(A_1 … A_k)*` gets two banks of copies
//! `A_i^1`, `A_i^2` joined end to end by directed fibers into one ring.
//! The first iteration uses the base areas, later iterations alternate
//! between the banks.

use serde::{Deserialize, Serialize};

use super::CircuitError;
use crate::engine::{Action, Rule};
use crate::neural::FiberSpec;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrentCircuit {
    pub base: Vec<String>,
    /// Area that follows the closure, if any.
    pub follower: Option<String>,
    pub lex: String,
}

/// Build the circuit for closure areas `base` followed by `follower`.
pub fn build_rc(base: &[String], follower: Option<&str>, lex: &str) -> Result<RecurrentCircuit, CircuitError> {
    if base.is_empty() {
        return Err(CircuitError::EmptyClosure);
    }
    for (i, a) in base.iter().enumerate() {
        if base[..i].contains(a) || a == lex || follower == Some(a.as_str()) {
            return Err(CircuitError::RepeatedArea(a.clone()));
        }
    }
    Ok(RecurrentCircuit { base: base.to_vec(), follower: follower.map(String::from), lex: lex.to_string() })
}

/// Bank used by the `occurrence`-th iteration: `None` for the first
/// (base areas), then 1, 2, 1, 2, …
pub fn rc_bank(occurrence: usize) -> Option<u8> {
    match occurrence {
        0 | 1 => None,
        m => Some(if m % 2 == 0 { 1 } else { 2 }),
    }
}

impl RecurrentCircuit {
    pub fn k(&self) -> usize {
        self.base.len()
    }

    pub fn copy(&self, slot: usize, bank: u8) -> String {
        format!("{}^{}", self.base[slot], bank)
    }

    /// `A_1^1 … A_k^1, A_1^2 … A_k^2`.
    pub fn copies(&self) -> Vec<String> {
        [1, 2].iter().flat_map(|&b| (0..self.k()).map(move |i| (i, b))).map(|(i, b)| self.copy(i, b)).collect()
    }

    /// Base area of a copy name, if it is one of this circuit's copies.
    pub fn base_of(&self, area: &str) -> Option<(usize, u8)> {
        (0..self.k()).flat_map(|i| [(i, 1u8), (i, 2u8)]).find(|&(i, b)| self.copy(i, b) == area)
    }

    /// Area that receives slot `slot` of iteration `occurrence` (1-based).
    pub fn route(&self, occurrence: usize, slot: usize) -> String {
        match rc_bank(occurrence) {
            None => self.base[slot].clone(),
            Some(b) => self.copy(slot, b),
        }
    }

    /// The copy preceding `A_i^j` on the ring.
    fn ring_prev(&self, slot: usize, bank: u8) -> String {
        if slot == 0 {
            self.copy(self.k() - 1, 3 - bank)
        } else {
            self.copy(slot - 1, bank)
        }
    }

    /// Ring fibers in ring order, one outgoing and one incoming per copy.
    pub fn ring_fibers(&self) -> Vec<FiberSpec> {
        let k = self.k();
        let mut out = Vec::new();
        for bank in [1u8, 2] {
            for i in 0..k {
                let next = if i + 1 < k { self.copy(i + 1, bank) } else { self.copy(0, 3 - bank) };
                out.push(FiberSpec::directed(self.copy(i, bank), next));
            }
        }
        out
    }

    /// All fibers the circuit adds: Lex to every copy, the ring, the entry
    /// `A_k -> A_1^1` and the exits `A_k^j - B`.
    pub fn fibers(&self) -> Vec<FiberSpec> {
        let mut out: Vec<FiberSpec> = self.copies().into_iter().map(|c| FiberSpec::undirected(self.lex.clone(), c)).collect();
        out.extend(self.ring_fibers());
        let last = self.k() - 1;
        out.push(FiberSpec::directed(self.base[last].clone(), self.copy(0, 1)));
        if let Some(b) = &self.follower {
            for bank in [1, 2] {
                out.push(FiberSpec::undirected(self.copy(last, bank), b.clone()));
            }
        }
        out
    }

    /// Rules applied when a word lands in the last base area: open every
    /// copy and the entry fiber.
    pub fn arming_rules(&self) -> Vec<Rule> {
        let mut out: Vec<Rule> = self.copies().into_iter().map(Rule::disinhibit_area).collect();
        out.push(Rule::disinhibit_fiber(self.base[self.k() - 1].clone(), self.copy(0, 1)));
        out
    }

    /// Action for a word routed to `A_slot^bank`. `entry` marks the first
    /// step into the ring (`A_1^1` right after the base iteration), which
    /// also shuts the base exit.
    pub fn copy_action(&self, slot: usize, bank: u8, entry: bool) -> Action {
        let here = self.copy(slot, bank);
        let prev = self.ring_prev(slot, bank);
        let pre = vec![Rule::disinhibit_fiber(self.lex.clone(), here.clone()), Rule::disinhibit_fiber(prev.clone(), here.clone())];
        let mut post = vec![Rule::inhibit_fiber(self.lex.clone(), here.clone()), Rule::inhibit_fiber(prev, here.clone())];
        let last = self.k() - 1;
        if entry {
            let ak = self.base[last].clone();
            post.push(Rule::inhibit_area(ak.clone()));
            post.push(Rule::inhibit_fiber(ak.clone(), here.clone()));
            if let Some(b) = &self.follower {
                post.push(Rule::inhibit_fiber(ak, b.clone()));
            }
        }
        if slot == last {
            if let Some(b) = &self.follower {
                post.push(Rule::disinhibit_fiber(here, b.clone()));
                post.push(Rule::inhibit_fiber(self.copy(last, 3 - bank), b.clone()));
            }
        }
        Action::new(pre, post)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj() -> RecurrentCircuit {
        build_rc(&["Adj".to_string()], Some("Noun"), "Lex").unwrap()
    }

    fn rules(src: &[&str]) -> Vec<Rule> {
        src.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn single_area_closure_matches_worked_actions() {
        let rc = adj();
        assert_eq!(rc.copies(), ["Adj^1", "Adj^2"]);
        let second = rc.copy_action(0, 1, true);
        assert_eq!(second.pre, rules(&["disinhibit(Lex,Adj^1)", "disinhibit(Adj^2,Adj^1)"]));
        assert_eq!(
            second.post,
            rules(&[
                "inhibit(Lex,Adj^1)",
                "inhibit(Adj^2,Adj^1)",
                "inhibit(Adj)",
                "inhibit(Adj,Adj^1)",
                "inhibit(Adj,Noun)",
                "disinhibit(Adj^1,Noun)",
                "inhibit(Adj^2,Noun)"
            ])
        );
        let third = rc.copy_action(0, 2, false);
        assert_eq!(third.pre, rules(&["disinhibit(Lex,Adj^2)", "disinhibit(Adj^1,Adj^2)"]));
        assert_eq!(
            third.post,
            rules(&["inhibit(Lex,Adj^2)", "inhibit(Adj^1,Adj^2)", "disinhibit(Adj^2,Noun)", "inhibit(Adj^1,Noun)"])
        );
        let fourth = rc.copy_action(0, 1, false);
        assert_eq!(fourth.pre, rules(&["disinhibit(Lex,Adj^1)", "disinhibit(Adj^2,Adj^1)"]));
        assert_eq!(
            fourth.post,
            rules(&["inhibit(Lex,Adj^1)", "inhibit(Adj^2,Adj^1)", "disinhibit(Adj^1,Noun)", "inhibit(Adj^2,Noun)"])
        );
    }

    #[test]
    fn routing_alternates_banks() {
        let rc = adj();
        let areas: Vec<_> = (1..=6).map(|m| rc.route(m, 0)).collect();
        assert_eq!(areas, ["Adj", "Adj^1", "Adj^2", "Adj^1", "Adj^2", "Adj^1"]);
        assert_eq!((rc_bank(1), rc_bank(5), rc_bank(6)), (None, Some(2), Some(1)));
    }

    #[test]
    fn two_area_ring() {
        let rc = build_rc(&["Prep".into(), "PObj".into()], None, "Lex").unwrap();
        assert_eq!(rc.copies().len(), 4);
        let ring: Vec<_> = rc.ring_fibers().into_iter().map(|f| (f.from, f.to)).collect();
        let expect = [("Prep^1", "PObj^1"), ("PObj^1", "Prep^2"), ("Prep^2", "PObj^2"), ("PObj^2", "Prep^1")];
        assert_eq!(ring, expect.map(|(a, b)| (a.to_string(), b.to_string())));
        let fibers = rc.fibers();
        assert!(fibers.iter().any(|f| f.directed && f.from == "PObj" && f.to == "Prep^1"));
        // no follower: no exit rules, ring rules still present
        let last = rc.copy_action(1, 2, false);
        assert_eq!(last.pre, rules(&["disinhibit(Lex,PObj^2)", "disinhibit(Prep^2,PObj^2)"]));
        assert_eq!(last.post.len(), 2);
        let entry = rc.copy_action(0, 1, true);
        assert_eq!(entry.pre[1], "disinhibit(PObj^2,Prep^1)".parse().unwrap());
    }

    #[test]
    fn ring_is_single_cycle() {
        for k in 1..5 {
            let base: Vec<String> = (0..k).map(|i| format!("A{i}")).collect();
            let rc = build_rc(&base, None, "Lex").unwrap();
            let ring = rc.ring_fibers();
            assert_eq!(ring.len(), 2 * k);
            let mut at = rc.copy(0, 1);
            for _ in 0..2 * k {
                at = ring.iter().find(|f| f.from == at).unwrap().to.clone();
            }
            assert_eq!(at, rc.copy(0, 1));
            for c in rc.copies() {
                assert_eq!(ring.iter().filter(|f| f.to == c).count(), 1);
            }
        }
    }

    #[test]
    fn bad_closures() {
        assert!(matches!(build_rc(&[], None, "Lex"), Err(CircuitError::EmptyClosure)));
        assert!(build_rc(&["A".into(), "A".into()], None, "Lex").is_err());
    }
}
