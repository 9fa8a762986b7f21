//! Tactical profiles: what each operation of a tool accepts, in the
//! vocabulary of the tactical decision tree, and their differences.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

macro_rules! vocab {
    ($(#[$m:meta])* $name:ident { $($v:ident = $s:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $s)] $v),+
        }

        impl $name {
            pub fn name(self) -> &'static str {
                match self {
                    $($name::$v => $s),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

vocab!(
    /// Operations a tool may expose. `map` covers the whole map family.
    ProfileOp {
        Pivot = "pivot",
        Refine = "refine",
        Group = "group",
        Rank = "rank",
        Correlate = "correlate",
        Map = "map",
        Unite = "unite",
        Intersect = "intersect",
        Diff = "diff",
    }
);
vocab!(Cardinality { OneToOne = "one-to-one", OneToMany = "one-to-many", ManyToMany = "many-to-many" });
vocab!(DataType { Data = "data", Metadata = "metadata" });
vocab!(RelationType { Schema = "schema", Computed = "computed" });
vocab!(RelationStructure { Single = "single", PathAny = "path-any", PathFixed = "path-fixed" });
vocab!(MatchType { Exact = "exact", Approximate = "approximate" });
vocab!(MappingKind { Aggregation = "aggregation", Combination = "combination", Transformation = "transformation" });
vocab!(Attribute {
    Cardinality = "cardinality",
    DataType = "data-type",
    RelationType = "relation-type",
    RelationStructure = "relation-structure",
    MatchType = "match-type",
    MappingKinds = "mapping-kinds",
});

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct OperationProfile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cardinality: Option<Cardinality>,
    #[serde(default)]
    pub data_type: BTreeSet<DataType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation_type: Option<BTreeSet<RelationType>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation_structure: Option<RelationStructure>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub match_type: Option<BTreeSet<MatchType>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mapping_kinds: Option<BTreeSet<MappingKind>>,
}

fn set_text<T: fmt::Display>(s: &BTreeSet<T>) -> String {
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

impl OperationProfile {
    /// The attribute as report text, `-` when not stated.
    pub fn value(&self, a: Attribute) -> String {
        let dash = || "-".to_string();
        match a {
            Attribute::Cardinality => self.cardinality.map_or_else(dash, |c| c.to_string()),
            Attribute::DataType => set_text(&self.data_type),
            Attribute::RelationType => self.relation_type.as_ref().map_or_else(dash, set_text),
            Attribute::RelationStructure => self.relation_structure.map_or_else(dash, |r| r.to_string()),
            Attribute::MatchType => self.match_type.as_ref().map_or_else(dash, set_text),
            Attribute::MappingKinds => self.mapping_kinds.as_ref().map_or_else(dash, set_text),
        }
    }
}

/// Attributes in report order.
const ATTRIBUTES: [Attribute; 6] = [
    Attribute::Cardinality,
    Attribute::DataType,
    Attribute::RelationType,
    Attribute::RelationStructure,
    Attribute::MatchType,
    Attribute::MappingKinds,
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TacticalProfile {
    pub tool: String,
    #[serde(default)]
    pub operations: BTreeMap<ProfileOp, OperationProfile>,
}

impl TacticalProfile {
    pub fn parse(text: &str) -> Result<TacticalProfile> {
        let p: TacticalProfile = toml::from_str(text).map_err(|e| Error::Profile(e.to_string()))?;
        p.validate()?;
        Ok(p)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("profiles always serialize")
    }

    fn validate(&self) -> Result<()> {
        if self.tool.trim().is_empty() {
            return Err(Error::Profile("tool name is empty".into()));
        }
        for (op, p) in &self.operations {
            if p.match_type.is_some() && *op != ProfileOp::Refine {
                return Err(Error::Profile(format!("{op}: match-type only applies to refine")));
            }
            if p.mapping_kinds.is_some() && *op != ProfileOp::Map {
                return Err(Error::Profile(format!("{op}: mapping-kinds only applies to map")));
            }
            let relational = matches!(op, ProfileOp::Pivot | ProfileOp::Refine | ProfileOp::Group | ProfileOp::Correlate);
            if !relational && (p.relation_type.is_some() || p.relation_structure.is_some()) {
                return Err(Error::Profile(format!("{op} takes no relation argument")));
            }
        }
        Ok(())
    }

    pub fn supports_metadata(&self) -> bool {
        self.operations.values().any(|p| p.data_type.contains(&DataType::Metadata))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Finding {
    OperationsOnlyIn { tool: String, operations: Vec<ProfileOp> },
    AttributeDiffers { operation: ProfileOp, attribute: Attribute, a: String, b: String },
    /// One tool accepts metadata somewhere, the other nowhere.
    MetadataSupport { supported: String, unsupported: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileReport {
    pub a: String,
    pub b: String,
    pub findings: Vec<Finding>,
}

impl ProfileReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

/// Operations present on one side only, attribute differences on shared
/// operations, and metadata support. When metadata support differs, the
/// data-type differences it explains are folded into that one finding.
pub fn compare_profiles(a: &TacticalProfile, b: &TacticalProfile) -> ProfileReport {
    let mut findings = Vec::new();
    for (x, y) in [(a, b), (b, a)] {
        let only: Vec<ProfileOp> = x.operations.keys().filter(|op| !y.operations.contains_key(op)).copied().collect();
        if !only.is_empty() {
            findings.push(Finding::OperationsOnlyIn { tool: x.tool.clone(), operations: only });
        }
    }
    let metadata_split = a.supports_metadata() != b.supports_metadata();
    for (op, pa) in &a.operations {
        let Some(pb) = b.operations.get(op) else { continue };
        for attr in ATTRIBUTES {
            if attr == Attribute::DataType && metadata_split {
                continue;
            }
            let (va, vb) = (pa.value(attr), pb.value(attr));
            if va != vb {
                findings.push(Finding::AttributeDiffers { operation: *op, attribute: attr, a: va, b: vb });
            }
        }
    }
    if metadata_split {
        let (yes, no) = if a.supports_metadata() { (a, b) } else { (b, a) };
        findings.push(Finding::MetadataSupport { supported: yes.tool.clone(), unsupported: no.tool.clone() });
    }
    ProfileReport { a: a.tool.clone(), b: b.tool.clone(), findings }
}

impl fmt::Display for ProfileReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.findings.len();
        writeln!(f, "{} vs {}: {n} finding{}", self.a, self.b, if n == 1 { "" } else { "s" })?;
        for x in &self.findings {
            match x {
                Finding::OperationsOnlyIn { tool, operations } => {
                    let ops: Vec<&str> = operations.iter().map(|o| o.name()).collect();
                    writeln!(f, "- operations only in {tool}: {}", ops.join(", "))?
                }
                Finding::AttributeDiffers { operation, attribute, a, b } => {
                    writeln!(f, "- {operation} {attribute}: {} {a}, {} {b}", self.a, self.b)?
                }
                Finding::MetadataSupport { supported, unsupported } => {
                    writeln!(f, "- metadata: {supported} accepts metadata, {unsupported} does not")?
                }
            }
        }
        Ok(())
    }
}
