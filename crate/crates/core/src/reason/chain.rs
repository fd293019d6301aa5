use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{ReasonError, Result};
use crate::model::{Formula, RuleKind};
use crate::semantics::Model;

/// What an edge does for its source node: a plain antecedent is classified,
/// a possibility is described by its further consequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Classification,
    Description,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Classification => "classification",
            Role::Description => "description",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub label: String,
    pub kind: RuleKind,
    pub from: Formula,
    pub to: Formula,
    pub role: Role,
    /// The rule was applied inside a possibility: `poss(p)` and `p -> q`
    /// give `poss(q)`, and `p => poss(q)` gives `poss(q)` by S5.
    pub lifted: bool,
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{} {}] {}",
            self.from,
            self.label,
            self.role.as_str(),
            self.to
        )
    }
}

/// Nodes are canonical formulas, edges are strict rules and satisfied modal
/// rules. Built once per knowledge-base revision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationGraph {
    revision: u64,
    nodes: BTreeSet<Formula>,
    edges: BTreeMap<Formula, Vec<Edge>>,
    /// Modal rules left out because they fail the modal check.
    excluded: Vec<String>,
}

/// A maximal acyclic walk through the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationPath {
    pub edges: Vec<Edge>,
}

impl DerivationPath {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Nodes in order, each with whether it is a modal (possibility) node.
    pub fn nodes(&self) -> Vec<(&Formula, bool)> {
        let mut out = Vec::with_capacity(self.edges.len() + 1);
        if let Some(first) = self.edges.first() {
            out.push((&first.from, is_modal(&first.from)));
        }
        out.extend(self.edges.iter().map(|e| (&e.to, is_modal(&e.to))));
        out
    }

    pub fn end(&self) -> Option<&Formula> {
        self.edges.last().map(|e| &e.to)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.edges.iter().map(|e| e.label.as_str()).collect()
    }
}

impl fmt::Display for DerivationPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(first) = self.edges.first() else {
            return Ok(());
        };
        write!(f, "{}", first.from)?;
        for e in &self.edges {
            write!(f, " ={}=> {}", e.label, e.to)?;
        }
        Ok(())
    }
}

fn is_modal(f: &Formula) -> bool {
    matches!(f, Formula::Possibly(_) | Formula::Necessarily(_))
}

fn role_of(from: &Formula) -> Role {
    if is_modal(from) {
        Role::Description
    } else {
        Role::Classification
    }
}

impl ImplicationGraph {
    pub fn build(model: &Model<'_>) -> Result<Self> {
        let kb = model.kb();
        let report = model.check_modal_rules()?;
        let mut excluded = Vec::new();
        // (label, kind, canonical antecedent, canonical consequent)
        let mut rules = Vec::new();
        for rule in kb.rules() {
            match rule.kind {
                RuleKind::Defeasible => continue,
                RuleKind::Modal if !report.entry(&rule.label).is_some_and(|e| e.satisfied) => {
                    excluded.push(rule.label.clone());
                    continue;
                }
                _ => {}
            }
            rules.push((
                rule.label.clone(),
                rule.kind,
                rule.antecedent.canonical(),
                rule.consequent.canonical(),
            ));
        }

        let mut graph = ImplicationGraph {
            revision: kb.revision(),
            nodes: BTreeSet::new(),
            edges: BTreeMap::new(),
            excluded,
        };
        for (label, kind, ant, cons) in &rules {
            graph.add(Edge {
                label: label.clone(),
                kind: *kind,
                from: ant.clone(),
                to: cons.clone(),
                role: role_of(ant),
                lifted: false,
            });
        }
        // Lift rules into possibility nodes until no new node appears.
        let mut pending: Vec<Formula> = graph
            .nodes
            .iter()
            .filter(|n| is_modal(n))
            .cloned()
            .collect();
        let mut seen: BTreeSet<Formula> = pending.iter().cloned().collect();
        while let Some(node) = pending.pop() {
            let Formula::Possibly(inner) = &node else {
                continue;
            };
            for (label, kind, ant, cons) in &rules {
                if ant != inner.as_ref() {
                    continue;
                }
                let to = match kind {
                    RuleKind::Strict => Formula::possibly(cons.clone()),
                    _ => cons.clone(),
                };
                if seen.insert(to.clone()) {
                    pending.push(to.clone());
                }
                graph.add(Edge {
                    label: label.clone(),
                    kind: *kind,
                    from: node.clone(),
                    to,
                    role: Role::Description,
                    lifted: true,
                });
            }
        }
        for out in graph.edges.values_mut() {
            out.sort_by(|a, b| a.label.cmp(&b.label).then_with(|| a.to.cmp(&b.to)));
            out.dedup();
        }
        Ok(graph)
    }

    fn add(&mut self, edge: Edge) {
        self.nodes.insert(edge.from.clone());
        self.nodes.insert(edge.to.clone());
        self.edges.entry(edge.from.clone()).or_default().push(edge);
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Formula> {
        self.nodes.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values().flatten()
    }

    pub fn excluded(&self) -> &[String] {
        &self.excluded
    }

    pub fn outgoing(&self, node: &Formula) -> &[Edge] {
        self.edges.get(node).map_or(&[], Vec::as_slice)
    }

    /// All maximal acyclic paths from `start`, matched by canonical form.
    /// Paths come out in label order.
    pub fn paths(&self, start: &Formula) -> Result<Vec<DerivationPath>> {
        let start = start.canonical();
        if !self.nodes.contains(&start) {
            return Err(ReasonError::UnknownStartPattern(start.to_string()));
        }
        let mut out = Vec::new();
        let mut visited = vec![start.clone()];
        let mut stack = Vec::new();
        self.walk(&start, &mut visited, &mut stack, &mut out);
        Ok(out)
    }

    fn walk<'g>(
        &'g self,
        node: &Formula,
        visited: &mut Vec<Formula>,
        stack: &mut Vec<&'g Edge>,
        out: &mut Vec<DerivationPath>,
    ) {
        let mut extended = false;
        for edge in self.outgoing(node) {
            if visited.contains(&edge.to) {
                continue;
            }
            extended = true;
            visited.push(edge.to.clone());
            stack.push(edge);
            self.walk(&edge.to, visited, stack, out);
            stack.pop();
            visited.pop();
        }
        if !extended && !stack.is_empty() {
            out.push(DerivationPath {
                edges: stack.iter().map(|e| (*e).clone()).collect(),
            });
        }
    }
}

/// Builds the implication graph and returns every maximal path from `start`.
pub fn chain(model: &Model<'_>, start: &Formula) -> Result<Vec<DerivationPath>> {
    ImplicationGraph::build(model)?.paths(start)
}
