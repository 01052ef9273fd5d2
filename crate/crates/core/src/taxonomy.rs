//! Semantic annotation taxonomies as navigable label trees.
//!
//! Each prefix (`ctx`, `role`, ...) owns a small forest. Coded nodes are
//! usable as annotation labels; descriptive nodes (context umbrella groups,
//! "Beginning"/"End", domanial realms, method specializations) only structure
//! the tree.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const RESERVED_PREFIXES: [&str; 8] =
    ["ctx", "anim", "metatype", "role", "regfunc", "confunc", "governance", "consequence"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaxonomyNode {
    pub prefix: String,
    /// Short label. Descriptive nodes get a slug that is not annotatable.
    pub code: String,
    pub name: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub description: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
    pub annotatable: bool,
    pub builtin: bool,
    #[serde(skip)]
    id: usize,
    #[serde(skip)]
    parent: Option<usize>,
    #[serde(skip)]
    children: Vec<usize>,
}

impl TaxonomyNode {
    pub fn label(&self) -> String {
        format!("{}:{}", self.prefix, self.code)
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn has_parent(&self) -> bool {
        self.parent.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaxonomyError {
    #[error("unknown taxonomy prefix `{0}`")]
    UnknownPrefix(String),
    #[error("unknown label `{prefix}:{label}`{}", suggestion_text(.suggestion))]
    UnknownLabel { prefix: String, label: String, suggestion: Option<String> },
    #[error("`{prefix}:{code}` is defined more than once")]
    DuplicateCode { prefix: String, code: String },
    #[error("cycle through `{prefix}:{code}`")]
    CycleDetected { prefix: String, code: String },
    #[error("`{prefix}:{code}` is a built-in node and cannot be redefined")]
    ReservedPrefixModification { prefix: String, code: String },
    #[error("parent `{parent}` of `{prefix}:{code}` does not exist")]
    UnknownParent { prefix: String, code: String, parent: String },
    #[error("taxonomy file: {0}")]
    Format(String),
}

fn suggestion_text(s: &Option<String>) -> String {
    match s {
        Some(s) => format!(" (did you mean `{s}`?)"),
        None => String::new(),
    }
}

#[derive(Debug, Clone, Default)]
pub struct TaxonomyRegistry {
    nodes: Vec<TaxonomyNode>,
    index: HashMap<(String, String), usize>,
    aliases: HashMap<(String, String), usize>,
}

/// One entry of a user taxonomy file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDef {
    pub prefix: String,
    pub code: String,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub parent: Option<String>,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub aliases: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaxonomyFile {
    #[serde(default)]
    node: Vec<NodeDef>,
}

pub fn load_builtin() -> TaxonomyRegistry {
    TaxonomyRegistry::builtin()
}

// (code, name, description, annotatable, children)
struct Spec(&'static str, &'static str, &'static str, bool, &'static [Spec]);

const fn c(code: &'static str, name: &'static str, desc: &'static str, kids: &'static [Spec]) -> Spec {
    Spec(code, name, desc, true, kids)
}

const fn u(code: &'static str, name: &'static str, desc: &'static str) -> Spec {
    Spec(code, name, desc, false, &[])
}

const fn group(code: &'static str, name: &'static str, kids: &'static [Spec]) -> Spec {
    Spec(code, name, "", false, kids)
}

const CTX: &[Spec] = &[
    group("substantive", "Substantive Context", &[
        c("tmp", "Temporal", "Conditions/Constraints associated with time - the when", &[
            c("tim", "Point in time", "References to specific points in time", &[
                u("tim-beginning", "Beginning", "e.g. \"from 1st January\""),
                u("tim-end", "End", "e.g. \"until 31st January\""),
            ]),
            c("tfr", "Time frame", "References to time frames", &[]),
            c("frq", "Frequency", "References to frequencies", &[]),
        ]),
        c("spt", "Spatial", "Conditions/Constraints associated with spatial representations - the where", &[
            c("loc", "Location", "References to specific locations", &[
                u("loc-beginning", "Beginning", ""),
                u("loc-end", "End", ""),
            ]),
            c("dir", "Direction", "References to directions, inclusion of intermediary locations", &[]),
            c("pth", "Path", "References to pathways", &[]),
        ]),
        c("dom", "Domanial", "Conditions/Constraints applying to a specified activity, topical or existential realm", &[
            u("dom-activity", "Activity realm", "e.g. \"during decision-making\""),
            u("dom-topical", "Topical realm", "e.g. \"for drinking water\""),
            u("dom-existential", "Existential realm", "e.g. \"during childhood\""),
        ]),
    ]),
    group("procedural", "Procedural Context", &[
        c("ord", "Order", "Conditions/Constraints associated with explicit or implied execution order", &[]),
        c("met", "Method", "Conditions/Constraints associated with means or method by which an action is performed", &[
            u("met-means", "Means", "Action as method"),
            u("met-instrument", "Instrument", "Artifact as method"),
        ]),
    ]),
    group("aspirational", "Aspirational Context", &[
        c("pur", "Purpose/Function", "Conditions/Constraints describing the purpose or intent of an aim or constitutive function", &[]),
    ]),
    group("situational", "Situational Context", &[
        c("ste", "State", "References to a specific environmental state", &[]),
        c("evt", "Event", "Conditions/Constraints referencing specific events", &[]),
    ]),
];

const ANIM: &[Spec] = &[
    c("animate", "Animate", "Living entities", &[]),
    c("inanimate", "Inanimate", "Non-living entities, both real and mental constructs", &[]),
];

const METATYPE: &[Spec] = &[
    c("abstract", "Abstract", "Abstract entities", &[]),
    c("concrete", "Concrete", "Concrete entities", &[]),
];

const ROLE: &[Spec] = &[
    c("originator", "Originator/Causer/Agent", "Entity from which action originates", &[]),
    c("recipient", "Recipient", "recipient of an artifact/sanction", &[]),
    c("possessor", "Possessor", "owner of an object/entity", &[]),
    c("experiencer", "Experiencer", "observer of action", &[]),
    c("beneficiary", "Beneficiary", "beneficiary of action; may not necessarily be action/artifact recipient", &[]),
    c("position", "Position", "organisation or institutional role assumed by involved actor", &[]),
];

const REGFUNC: &[Spec] = &[
    c("compliance-action", "Compliance action", "action reflecting compliance behavior", &[
        c("comply", "Comply", "action reflecting compliance", &[]),
        c("violate", "Violate", "action reflecting violation", &[]),
    ]),
    c("monitor", "Monitor", "action reflecting the institutional function of monitoring", &[
        c("detect-compliance", "Detect compliance", "action reflecting the detection of compliance", &[]),
        c("detect-violation", "Detect violation", "action reflecting the detection of violation", &[]),
    ]),
    c("enforce", "Enforce", "action reflecting enforcement acts", &[
        c("reward", "Reward", "action reflecting rewarding behaviour", &[]),
        c("sanction", "Sanction", "action reflecting sanctioning behaviour", &[]),
    ]),
    c("enforcement-response", "Enforcement response", "action reflecting responses to enforcement outcomes", &[
        c("accept", "Accept", "action reflecting acceptance of enforcement outcome", &[]),
        c("reject", "Reject", "action reflecting rejection of enforcement outcome", &[
            c("appeal", "Appeal", "action reflecting appeal against enforcement outcome", &[]),
        ]),
    ]),
];

const CONFUNC: &[Spec] = &[
    c("entity", "Entity", "constituted entity established, modified or referenced by the policy", &[
        c("definition", "Definition", "definition of constituted entities", &[]),
        c("composition", "Composition", "organizational relationships in the form of compositions", &[]),
        c("organization", "Organization", "hierarchical relationships", &[]),
        c("entity-lifecycle", "Lifecycle", "initiation and termination of entity lifecycles", &[]),
        c("conferral", "Conferral", "the explicit conferral of status", &[]),
    ]),
    c("policy", "Policy", "the policy or document itself", &[
        c("policy-lifecycle", "Lifecycle", "policy lifecycle, e.g. date of enactment", &[]),
        c("relationship", "Relationship", "relationship to other policy", &[]),
        c("intent", "Intent", "purpose or intent underlying a policy", &[]),
        c("information", "Information", "supplementary information about the document", &[]),
    ]),
];

const GOVERNANCE: &[Spec] = &[
    c("monitored", "Monitored", "statement whose compliance is monitored", &[]),
    c("consequential", "Consequential", "statement applying consequences", &[]),
    c("monitoring", "Monitoring", "statement describing monitoring", &[]),
];

const CONSEQUENCE: &[Spec] = &[
    c("existential", "Existential", "consequence that terminates or establishes an entity", &[]),
    c("non-existential", "Non-existential", "consequence that leaves entities in place", &[]),
];

const ROLE_ALIASES: &[(&str, &str)] = &[("causer", "originator"), ("agent", "originator")];

impl TaxonomyRegistry {
    pub fn builtin() -> Self {
        let mut reg = TaxonomyRegistry::default();
        for (prefix, specs) in [
            ("ctx", CTX),
            ("anim", ANIM),
            ("metatype", METATYPE),
            ("role", ROLE),
            ("regfunc", REGFUNC),
            ("confunc", CONFUNC),
            ("governance", GOVERNANCE),
            ("consequence", CONSEQUENCE),
        ] {
            for s in specs {
                reg.insert_spec(prefix, s, None);
            }
        }
        for (alias, code) in ROLE_ALIASES {
            let id = reg.index[&("role".to_string(), code.to_string())];
            reg.nodes[id].aliases.push(alias.to_string());
            reg.aliases.insert(("role".into(), alias.to_string()), id);
        }
        reg
    }

    fn insert_spec(&mut self, prefix: &str, s: &Spec, parent: Option<usize>) {
        let Spec(code, name, desc, annotatable, kids) = s;
        let id = self.push(TaxonomyNode {
            prefix: prefix.to_string(),
            code: code.to_string(),
            name: name.to_string(),
            description: desc.to_string(),
            aliases: Vec::new(),
            annotatable: *annotatable,
            builtin: true,
            id: 0,
            parent,
            children: Vec::new(),
        });
        for k in kids.iter() {
            self.insert_spec(prefix, k, Some(id));
        }
    }

    fn push(&mut self, mut node: TaxonomyNode) -> usize {
        let id = self.nodes.len();
        node.id = id;
        if let Some(p) = node.parent {
            self.nodes[p].children.push(id);
        }
        self.index.insert((node.prefix.clone(), node.code.clone()), id);
        self.nodes.push(node);
        id
    }

    pub fn nodes(&self) -> impl Iterator<Item = &TaxonomyNode> {
        self.nodes.iter()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn prefixes(&self) -> BTreeSet<&str> {
        self.nodes.iter().map(|n| n.prefix.as_str()).collect()
    }

    pub fn has_prefix(&self, prefix: &str) -> bool {
        self.nodes.iter().any(|n| n.prefix == prefix)
    }

    /// Any node by exact code, annotatable or not.
    pub fn get(&self, prefix: &str, code: &str) -> Option<&TaxonomyNode> {
        self.index.get(&(prefix.to_string(), code.to_string())).map(|&i| &self.nodes[i])
    }

    /// Resolves an annotation label (code or alias) to its node.
    pub fn resolve(&self, prefix: &str, label: &str) -> Result<&TaxonomyNode, TaxonomyError> {
        if !self.has_prefix(prefix) {
            return Err(TaxonomyError::UnknownPrefix(prefix.to_string()));
        }
        let key = (prefix.to_string(), label.to_string());
        let hit = self.index.get(&key).or_else(|| self.aliases.get(&key)).map(|&i| &self.nodes[i]);
        match hit {
            Some(n) if n.annotatable => Ok(n),
            _ => Err(TaxonomyError::UnknownLabel {
                prefix: prefix.to_string(),
                label: label.to_string(),
                suggestion: self.suggest(prefix, label),
            }),
        }
    }

    /// Closest annotatable label of the prefix by edit similarity.
    pub fn suggest(&self, prefix: &str, label: &str) -> Option<String> {
        let lower = label.to_lowercase();
        self.nodes
            .iter()
            .filter(|n| n.prefix == prefix && n.annotatable)
            .flat_map(|n| std::iter::once(&n.code).chain(&n.aliases).map(move |l| (l, n)))
            .map(|(l, n)| (strsim::jaro_winkler(&lower, l), n))
            .filter(|(score, _)| *score >= 0.7)
            .max_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, n)| n.code.clone())
    }

    pub fn parent(&self, node: &TaxonomyNode) -> Option<&TaxonomyNode> {
        node.parent.map(|p| &self.nodes[p])
    }

    pub fn children(&self, node: &TaxonomyNode) -> Vec<&TaxonomyNode> {
        node.children.iter().map(|&i| &self.nodes[i]).collect()
    }

    /// Whether the node has annotatable descendants, i.e. a more specific
    /// label exists.
    pub fn has_specific_children(&self, node: &TaxonomyNode) -> bool {
        node.children.iter().any(|&i| {
            let n = &self.nodes[i];
            n.annotatable || self.has_specific_children(n)
        })
    }

    /// Path from the root down to `node`, inclusive.
    pub fn ancestors(&self, node: &TaxonomyNode) -> Vec<&TaxonomyNode> {
        let mut path = vec![&self.nodes[node.id]];
        let mut cur = self.nodes[node.id].parent;
        while let Some(p) = cur {
            if path.len() > self.nodes.len() {
                break;
            }
            path.push(&self.nodes[p]);
            cur = self.nodes[p].parent;
        }
        path.reverse();
        path
    }

    pub fn roots(&self, prefix: &str) -> Vec<&TaxonomyNode> {
        self.nodes.iter().filter(|n| n.prefix == prefix && n.parent.is_none()).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children.len()).sum()
    }

    /// Adds the nodes of a TOML taxonomy file, returning a new registry.
    pub fn merge_user_taxonomy(&self, toml_text: &str) -> Result<Self, TaxonomyError> {
        let file: TaxonomyFile = toml::from_str(toml_text).map_err(|e| TaxonomyError::Format(e.to_string()))?;
        self.merge_nodes(&file.node)
    }

    pub fn merge_file(&self, path: &Path) -> Result<Self, TaxonomyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| TaxonomyError::Format(format!("{}: {e}", path.display())))?;
        self.merge_user_taxonomy(&text)
    }

    pub fn merge_nodes(&self, defs: &[NodeDef]) -> Result<Self, TaxonomyError> {
        let mut pending: HashMap<(String, String), &NodeDef> = HashMap::new();
        for d in defs {
            let key = (d.prefix.clone(), d.code.clone());
            if let Some(&id) = self.index.get(&key).or_else(|| self.aliases.get(&key)) {
                return Err(if self.nodes[id].builtin {
                    TaxonomyError::ReservedPrefixModification { prefix: d.prefix.clone(), code: d.code.clone() }
                } else {
                    TaxonomyError::DuplicateCode { prefix: d.prefix.clone(), code: d.code.clone() }
                });
            }
            if pending.insert(key, d).is_some() {
                return Err(TaxonomyError::DuplicateCode { prefix: d.prefix.clone(), code: d.code.clone() });
            }
        }
        for d in defs {
            if let Some(p) = &d.parent {
                let key = (d.prefix.clone(), p.clone());
                if !self.index.contains_key(&key) && !pending.contains_key(&key) {
                    return Err(TaxonomyError::UnknownParent {
                        prefix: d.prefix.clone(),
                        code: d.code.clone(),
                        parent: p.clone(),
                    });
                }
            }
        }
        // New nodes may only hang off each other or existing nodes; a cycle
        // therefore lies entirely within the file.
        for d in defs {
            let mut seen = BTreeSet::new();
            let mut cur = Some(d);
            while let Some(n) = cur {
                if !seen.insert(n.code.as_str()) {
                    return Err(TaxonomyError::CycleDetected { prefix: d.prefix.clone(), code: d.code.clone() });
                }
                cur = n.parent.as_ref().and_then(|p| pending.get(&(d.prefix.clone(), p.clone())).copied());
            }
        }

        let mut reg = self.clone();
        let mut remaining: Vec<&NodeDef> = defs.iter().collect();
        while !remaining.is_empty() {
            let before = remaining.len();
            remaining.retain(|d| {
                let parent = match &d.parent {
                    None => None,
                    Some(p) => match reg.index.get(&(d.prefix.clone(), p.clone())) {
                        Some(&i) => Some(i),
                        None => return true,
                    },
                };
                let id = reg.push(TaxonomyNode {
                    prefix: d.prefix.clone(),
                    code: d.code.clone(),
                    name: d.name.clone().unwrap_or_else(|| d.code.clone()),
                    description: d.description.clone().unwrap_or_default(),
                    aliases: d.aliases.clone(),
                    annotatable: true,
                    builtin: false,
                    id: 0,
                    parent,
                    children: Vec::new(),
                });
                for a in &d.aliases {
                    reg.aliases.insert((d.prefix.clone(), a.clone()), id);
                }
                false
            });
            if remaining.len() == before {
                let d = remaining[0];
                return Err(TaxonomyError::CycleDetected { prefix: d.prefix.clone(), code: d.code.clone() });
            }
        }
        Ok(reg)
    }
}

impl fmt::Display for TaxonomyRegistry {
    /// Indented outline of every prefix.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn walk(reg: &TaxonomyRegistry, n: &TaxonomyNode, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let mark = if n.annotatable { n.code.as_str() } else { "-" };
            writeln!(f, "{:indent$}{} ({mark})", "", n.name, indent = depth * 2 + 2)?;
            for c in reg.children(n) {
                walk(reg, c, depth + 1, f)?;
            }
            Ok(())
        }
        let mut prefixes: Vec<&str> = Vec::new();
        for n in &self.nodes {
            if !prefixes.contains(&n.prefix.as_str()) {
                prefixes.push(&n.prefix);
            }
        }
        for p in prefixes {
            writeln!(f, "{p}")?;
            for r in self.roots(p) {
                walk(self, r, 0, f)?;
            }
        }
        Ok(())
    }
}
