use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::neural::Assembly;

/// What happened for one word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub index: usize,
    pub word: String,
    pub pos: String,
    /// Circuit copy the word was routed to, if any.
    pub routed: Option<String>,
    pub pre: Vec<String>,
    /// Projection map as `(from, [to, ...])`.
    pub map: Vec<(String, Vec<String>)>,
    pub rounds: usize,
    /// Area the word's assembly was projected into.
    pub landing: Option<String>,
    /// Final winners of every target area.
    pub winners: BTreeMap<String, Assembly>,
    pub post: Vec<String>,
}

impl StepRecord {
    /// Sources projecting into `area`, excluding `lex`.
    pub fn sources_into(&self, area: &str, lex: &str) -> Vec<&str> {
        self.map
            .iter()
            .filter(|(from, to)| from != lex && to.iter().any(|t| t == area))
            .map(|(from, _)| from.as_str())
            .collect()
    }

    /// The map in `{Lex:[Adj^1], Adj:[Adj^1]}` form.
    pub fn map_string(&self) -> String {
        let entries: Vec<String> = self.map.iter().map(|(f, t)| format!("{f}:[{}]", t.join(", "))).collect();
        format!("{{{}}}", entries.join(", "))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParseTrace {
    pub sentence: Vec<String>,
    pub steps: Vec<StepRecord>,
    pub final_areas: Vec<String>,
    pub final_fibers: Vec<(String, String)>,
}

impl ParseTrace {
    /// One JSON object per line: each step, then the final inhibition state.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&serde_json::to_string(s).expect("step serializes"));
            out.push('\n');
        }
        let tail = serde_json::json!({
            "sentence": self.sentence,
            "disinhibited_areas": self.final_areas,
            "disinhibited_fibers": self.final_fibers,
        });
        out.push_str(&tail.to_string());
        out.push('\n');
        out
    }

    /// Assembly the word at `index` left in its landing area.
    pub fn assembly_of(&self, index: usize) -> Option<&Assembly> {
        let s = self.steps.get(index)?;
        s.winners.get(s.landing.as_ref()?)
    }
}
