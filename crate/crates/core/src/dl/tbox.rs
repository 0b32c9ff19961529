//! Terminologies: atomic concept and role hierarchies plus named definitions.
//!
//! File format, one statement per line, `#` starts a comment:
//!
//! ```text
//! concept <name>
//! role <name>
//! <child> sub <parent>
//! role <child> sub <parent>
//! define <name> = <expr>
//! ```
//!
//! Names in `sub` statements are declared implicitly, in order of appearance.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::ast::{ConceptExpr, RoleExpr};
use super::parser::{is_valid_name, parse_expr_at, RESERVED};
use crate::error::{Error, ParseError, Result};

/// A name hierarchy (concepts or roles) in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Hierarchy {
    names: Vec<String>,
    index: HashMap<String, usize>,
    parents: Vec<Vec<usize>>,
    inclusions: Vec<(String, String)>,
}

impl Hierarchy {
    fn declare(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.parents.push(Vec::new());
        i
    }

    fn include(&mut self, child: &str, parent: &str) {
        let c = self.declare(child);
        let p = self.declare(parent);
        if !self.parents[c].contains(&p) {
            self.parents[c].push(p);
            self.inclusions
                .push((child.to_string(), parent.to_string()));
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn inclusions(&self) -> &[(String, String)] {
        &self.inclusions
    }

    /// Direct parents by declaration index.
    pub fn parents_of(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    /// Indices of `i` and every ancestor, ascending.
    pub fn ancestors_or_self(&self, i: usize) -> Vec<usize> {
        let mut seen = vec![false; self.names.len()];
        let mut queue = VecDeque::from([i]);
        seen[i] = true;
        while let Some(n) = queue.pop_front() {
            for &p in &self.parents[n] {
                if !seen[p] {
                    seen[p] = true;
                    queue.push_back(p);
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(k, &s)| s.then_some(k))
            .collect()
    }

    /// Whether `child ⊑ parent` follows from the declared inclusions.
    pub fn is_below(&self, child: usize, parent: usize) -> bool {
        self.ancestors_or_self(child).contains(&parent)
    }

    /// A member of some cycle, if the inclusions are not acyclic.
    pub fn find_cycle(&self) -> Option<&str> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.names.len()];
        for start in 0..self.names.len() {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state[start] = 1;
            while let Some(&mut (node, ref mut next)) = stack.last_mut() {
                if let Some(&p) = self.parents[node].get(*next) {
                    *next += 1;
                    match state[p] {
                        0 => {
                            state[p] = 1;
                            stack.push((p, 0));
                        }
                        1 => return Some(&self.names[p]),
                        _ => {}
                    }
                } else {
                    state[node] = 2;
                    stack.pop();
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TBox {
    concepts: Hierarchy,
    roles: Hierarchy,
    definitions: Vec<(String, ConceptExpr)>,
    definition_index: HashMap<String, usize>,
}

fn check_name(name: &str, line: usize) -> Result<()> {
    if !is_valid_name(name) || RESERVED.contains(&name) {
        return Err(Error::Syntax(ParseError {
            line,
            column: 1,
            message: format!("invalid name `{name}`"),
        }));
    }
    Ok(())
}

impl TBox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn concepts(&self) -> &Hierarchy {
        &self.concepts
    }

    pub fn roles(&self) -> &Hierarchy {
        &self.roles
    }

    pub fn atomic_concepts(&self) -> &[String] {
        self.concepts.names()
    }

    pub fn atomic_roles(&self) -> &[String] {
        self.roles.names()
    }

    pub fn concept_inclusions(&self) -> &[(String, String)] {
        self.concepts.inclusions()
    }

    pub fn role_inclusions(&self) -> &[(String, String)] {
        self.roles.inclusions()
    }

    pub fn definitions(&self) -> &[(String, ConceptExpr)] {
        &self.definitions
    }

    pub fn definition(&self, name: &str) -> Option<&ConceptExpr> {
        self.definition_index
            .get(name)
            .map(|&i| &self.definitions[i].1)
    }

    pub fn is_atomic(&self, name: &str) -> bool {
        self.concepts.contains(name)
    }

    /// Atomic concepts followed by defined names, in declaration order.
    pub fn concept_names(&self) -> Vec<String> {
        self.concepts
            .names()
            .iter()
            .chain(self.definitions.iter().map(|(n, _)| n))
            .cloned()
            .collect()
    }

    pub fn add_concept(&mut self, name: &str) -> Result<()> {
        if self.definition_index.contains_key(name) {
            return Err(Error::DefinitionClash(name.to_string()));
        }
        self.concepts.declare(name);
        Ok(())
    }

    pub fn add_role(&mut self, name: &str) {
        self.roles.declare(name);
    }

    /// Records `child ⊑ parent`; rejects the edge if it closes a cycle.
    pub fn add_inclusion(&mut self, child: &str, parent: &str) -> Result<()> {
        for n in [child, parent] {
            if self.definition_index.contains_key(n) {
                return Err(Error::DefinitionClash(n.to_string()));
            }
        }
        self.concepts.include(child, parent);
        if let Some(member) = self.concepts.find_cycle() {
            return Err(Error::ConceptCycle(member.to_string()));
        }
        Ok(())
    }

    pub fn add_role_inclusion(&mut self, child: &str, parent: &str) -> Result<()> {
        self.roles.include(child, parent);
        if let Some(member) = self.roles.find_cycle() {
            return Err(Error::RoleCycle(member.to_string()));
        }
        Ok(())
    }

    /// Adds `name ≡ expr`. Every name in `expr` must already be declared.
    pub fn define(&mut self, name: &str, expr: ConceptExpr) -> Result<()> {
        if self.concepts.contains(name) {
            return Err(Error::DefinitionClash(name.to_string()));
        }
        if self.definition_index.contains_key(name) {
            return Err(Error::DuplicateDefinition(name.to_string()));
        }
        self.check_declared(&expr)?;
        self.definition_index
            .insert(name.to_string(), self.definitions.len());
        self.definitions.push((name.to_string(), expr));
        Ok(())
    }

    /// Fails with the first name in `expr` this terminology does not know.
    pub fn check_declared(&self, expr: &ConceptExpr) -> Result<()> {
        let mut names = BTreeSet::new();
        expr.concept_names(&mut names);
        if let Some(n) = names
            .iter()
            .find(|n| !self.concepts.contains(n) && !self.definition_index.contains_key(*n))
        {
            return Err(Error::Undeclared(n.clone()));
        }
        let mut roles = BTreeSet::new();
        expr.role_names(&mut roles);
        if let Some(r) = roles.iter().find(|r| !self.roles.contains(r)) {
            return Err(Error::UndeclaredRole(r.clone()));
        }
        Ok(())
    }

    /// Replaces defined names by their definitions, recursively.
    pub fn unfold(&self, expr: &ConceptExpr) -> Result<ConceptExpr> {
        Ok(match expr {
            ConceptExpr::Atomic(n) => match self.definition(n) {
                Some(def) => self.unfold(def)?,
                None if self.concepts.contains(n) => expr.clone(),
                None => return Err(Error::Undeclared(n.clone())),
            },
            ConceptExpr::Top | ConceptExpr::Bottom => expr.clone(),
            ConceptExpr::Not(e) => ConceptExpr::not(self.unfold(e)?),
            ConceptExpr::And(a, b) => ConceptExpr::and(self.unfold(a)?, self.unfold(b)?),
            ConceptExpr::Or(a, b) => ConceptExpr::or(self.unfold(a)?, self.unfold(b)?),
            ConceptExpr::All(r, c) => ConceptExpr::all(self.check_role(r)?, self.unfold(c)?),
            ConceptExpr::Some(r, c) => ConceptExpr::some(self.check_role(r)?, self.unfold(c)?),
        })
    }

    fn check_role(&self, r: &RoleExpr) -> Result<RoleExpr> {
        let mut names = BTreeSet::new();
        r.names(&mut names);
        match names.into_iter().find(|n| !self.roles.contains(n)) {
            Some(n) => Err(Error::UndeclaredRole(n)),
            None => Ok(r.clone()),
        }
    }

    pub fn parse(text: &str) -> Result<TBox> {
        parse_tbox(text)
    }
}

pub fn parse_tbox(text: &str) -> Result<TBox> {
    let mut tbox = TBox::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let syntax = |message: String| {
            Error::Syntax(ParseError {
                line: line_no,
                column: 1,
                message,
            })
        };

        if let Some(rest) = trimmed
            .strip_prefix("define")
            .filter(|r| r.starts_with(char::is_whitespace))
        {
            let (name, body) = rest
                .split_once('=')
                .ok_or_else(|| syntax("expected `define <name> = <expr>`".to_string()))?;
            let name = name.trim();
            check_name(name, line_no)?;
            let offset = raw.find('=').map_or(1, |i| i + 2);
            let expr = parse_expr_at(body, line_no, offset)?;
            tbox.define(name, expr)?;
            continue;
        }

        let words: Vec<&str> = trimmed.split_whitespace().collect();
        match words.as_slice() {
            ["concept", name] => {
                check_name(name, line_no)?;
                tbox.add_concept(name)?;
            }
            ["role", name] => {
                check_name(name, line_no)?;
                tbox.add_role(name);
            }
            ["role", child, "sub", parent] => {
                check_name(child, line_no)?;
                check_name(parent, line_no)?;
                tbox.add_role_inclusion(child, parent)?;
            }
            [child, "sub", parent] => {
                check_name(child, line_no)?;
                check_name(parent, line_no)?;
                tbox.add_inclusion(child, parent)?;
            }
            _ => return Err(syntax(format!("unrecognized statement `{trimmed}`"))),
        }
    }
    Ok(tbox)
}
