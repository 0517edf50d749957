use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::parser::CompiledGrammar;
use super::trace::ParseTrace;
use super::{EngineError, ParserOptions};
use crate::neural::{Assembly, Brain};
use crate::scalar::Weight;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    pub index: usize,
    pub word: String,
    pub area: String,
    pub assembly: Assembly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub parent: usize,
    pub child: usize,
    /// Area that projected into `target_area` when the later word was read.
    pub source_area: String,
    pub target_area: String,
    /// Fraction of `k` recovered when re-firing the source assembly.
    pub overlap: f64,
    pub confirmed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParseTree {
    pub nodes: Vec<TreeNode>,
    pub edges: Vec<TreeEdge>,
    pub root: Option<usize>,
}

impl ParseTree {
    pub fn node_by_word(&self, word: &str) -> Option<&TreeNode> {
        self.nodes.iter().find(|n| n.word == word)
    }

    pub fn children(&self, node: usize) -> Vec<usize> {
        self.edges.iter().filter(|e| e.parent == node).map(|e| e.child).collect()
    }

    pub fn confirmed_fraction(&self) -> f64 {
        if self.edges.is_empty() {
            return 1.0;
        }
        self.edges.iter().filter(|e| e.confirmed).count() as f64 / self.edges.len() as f64
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph parse {\n  node [shape=box];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let shape = if self.root == Some(i) { ", style=bold" } else { "" };
            let _ = writeln!(s, "  n{} [label=\"{}\\n{}\"{}];", n.index, escape(&n.word), escape(&n.area), shape);
        }
        for e in &self.edges {
            let style = if e.confirmed { "" } else { ", style=dashed" };
            let _ = writeln!(
                s,
                "  n{} -> n{} [label=\"{:.2}\"{}];",
                self.nodes[e.parent].index, self.nodes[e.child].index, e.overlap, style
            );
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Build the tree from a completed trace. Each word is linked to the
/// earlier words whose areas projected into its landing area; each link is
/// then checked by re-firing the earlier assembly along the same fiber.
pub fn readout<T: Weight>(
    brain: &mut Brain<T>,
    g: &CompiledGrammar,
    trace: &ParseTrace,
    opts: &ParserOptions,
) -> Result<ParseTree, EngineError> {
    let mut tree = ParseTree::default();
    for s in &trace.steps {
        let (Some(area), Some(asm)) = (s.landing.clone(), trace.assembly_of(s.index)) else { continue };
        tree.nodes.push(TreeNode { index: s.index, word: s.word.clone(), area, assembly: asm.clone() });
    }
    let node_of = |index: usize| tree.nodes.iter().position(|n| n.index == index);

    // (earlier node, later node, source area, target area)
    let mut links = Vec::new();
    for (b, s) in trace.steps.iter().enumerate() {
        let Some(target) = &s.landing else { continue };
        for src in s.sources_into(target, &g.grammar.lex) {
            let Some(a) = trace.steps[..b].iter().rposition(|p| p.landing.as_deref() == Some(src)) else { continue };
            if let (Some(na), Some(nb)) = (node_of(a), node_of(b)) {
                links.push((na, nb, src.to_string(), target.clone()));
            }
        }
    }

    tree.root = g.grammar.root.iter().find_map(|r| tree.nodes.iter().rposition(|n| g.base_area(&n.area) == r));
    let Some(root) = tree.root else { return Ok(tree) };

    let mut depth = vec![usize::MAX; tree.nodes.len()];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for (a, b, _, _) in &links {
            let v = if *a == u { *b } else if *b == u { *a } else { continue };
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }

    for (a, b, src, target) in links {
        let (s_id, t_id) = (brain.area_id(&src)?, brain.area_id(&target)?);
        let k = brain.area(t_id).params.k;
        let recalled = brain.recall(s_id, &tree.nodes[a].assembly, t_id, opts.recall_rounds, opts.projection.recurrent)?;
        let overlap = recalled.overlap_fraction(&tree.nodes[b].assembly, k);
        let (parent, child) = if depth[a] <= depth[b] { (a, b) } else { (b, a) };
        tree.edges.push(TreeEdge {
            parent,
            child,
            source_area: src,
            target_area: target,
            overlap,
            confirmed: overlap >= opts.confirm_threshold,
        });
    }
    Ok(tree)
}
