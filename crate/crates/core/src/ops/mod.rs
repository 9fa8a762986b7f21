//! The exploration operators. Each is a pure function from sets (plus
//! arguments) to a fresh set.

mod expr;
mod hmap;
mod navigate;
mod order;
mod predicate;
mod setops;
mod vmap;

use serde::Serialize;

pub use expr::{BinOp, Scope, Value, ValueExpr};
pub use hmap::{ahmap, chmap, default_level, thmap, Aggregation, Combine, Selector};
pub use navigate::{correlate, group, pivot, refine, ungrouped_item, CorrelateOptions, GroupOptions};
pub use order::{rank, slice, MissingScore};
pub use predicate::{tokens, FilterPredicate, Operand, PathPattern};
pub use setops::{diff, intersect, unite};
pub use vmap::{avmap, cvmap, tvmap, EdgeCombine, EdgeFold};

use crate::error::Result;
use crate::model::ExplorationSet;

/// Applies two independent expressions to the same input.
pub fn branch<F, G>(input: &ExplorationSet, f: F, g: G) -> Result<(ExplorationSet, ExplorationSet)>
where
    F: FnOnce(&ExplorationSet) -> Result<ExplorationSet>,
    G: FnOnce(&ExplorationSet) -> Result<ExplorationSet>,
{
    Ok((f(input)?, g(input)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    Pivot,
    Refine,
    Group,
    Rank,
    Slice,
    Correlate,
    Thmap,
    Ahmap,
    Chmap,
    Tvmap,
    Avmap,
    Cvmap,
    Unite,
    Intersect,
    Diff,
    Branch,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    /// `relpath`, `predicate`, `int`, `bool`, `expr`, `name` or `set`
    pub kind: &'static str,
    pub required: bool,
    /// Accepted as `name=value`.
    pub keyword: bool,
    pub doc: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct OperatorSpec {
    pub name: &'static str,
    pub inputs: usize,
    pub params: Vec<ParamSpec>,
    pub doc: &'static str,
}

const fn p(name: &'static str, kind: &'static str, required: bool, keyword: bool, doc: &'static str) -> ParamSpec {
    ParamSpec { name, kind, required, keyword, doc }
}

impl Operator {
    pub const ALL: [Operator; 16] = [
        Operator::Pivot,
        Operator::Refine,
        Operator::Group,
        Operator::Rank,
        Operator::Slice,
        Operator::Correlate,
        Operator::Thmap,
        Operator::Ahmap,
        Operator::Chmap,
        Operator::Tvmap,
        Operator::Avmap,
        Operator::Cvmap,
        Operator::Unite,
        Operator::Intersect,
        Operator::Diff,
        Operator::Branch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::Pivot => "pivot",
            Operator::Refine => "refine",
            Operator::Group => "group",
            Operator::Rank => "rank",
            Operator::Slice => "slice",
            Operator::Correlate => "correlate",
            Operator::Thmap => "thmap",
            Operator::Ahmap => "ahmap",
            Operator::Chmap => "chmap",
            Operator::Tvmap => "tvmap",
            Operator::Avmap => "avmap",
            Operator::Cvmap => "cvmap",
            Operator::Unite => "unite",
            Operator::Intersect => "intersect",
            Operator::Diff => "diff",
            Operator::Branch => "branch",
        }
    }

    /// Case-insensitive lookup; `union` and `map` are accepted aliases.
    pub fn from_name(s: &str) -> Option<Operator> {
        let lower = s.to_ascii_lowercase();
        let canon = match lower.as_str() {
            "union" => "unite",
            "map" => "ahmap",
            other => other,
        };
        Operator::ALL.into_iter().find(|o| o.name() == canon)
    }

    /// Number of leading set-valued arguments (the receiver counts as one).
    pub fn set_inputs(self) -> usize {
        match self {
            Operator::Correlate | Operator::Unite | Operator::Intersect | Operator::Diff => 2,
            Operator::Branch => 3,
            _ => 1,
        }
    }

    pub fn spec(self) -> OperatorSpec {
        let (params, doc) = match self {
            Operator::Pivot => (vec![p("relation", "relpath", true, false, "relation path to follow")], "map leaves to related items"),
            Operator::Refine => (
                vec![p("filters", "predicate", false, false, "one predicate per level from level 2; none keeps everything")],
                "keep paths matching a level-wise pattern; `!` back-propagates",
            ),
            Operator::Group => (
                vec![
                    p("relation", "relpath", true, false, "grouping relation"),
                    p("level", "int", false, true, "level of the grouped node (default: leaf)"),
                    p("keep_ungrouped", "bool", false, true, "collect nodes without a group"),
                ],
                "insert grouping items as new parents",
            ),
            Operator::Rank => (
                vec![
                    p("level", "int", true, false, "level whose items are scored"),
                    p("score", "expr", true, false, "score expression over %item"),
                    p("missing", "name", false, true, "last | error"),
                ],
                "stable descending sort of a level",
            ),
            Operator::Slice => (
                vec![p("from", "int", true, false, "first kept index"), p("to", "int", true, false, "last kept index")],
                "keep a range of level-2 children",
            ),
            Operator::Correlate => (
                vec![
                    p("pattern", "predicate", false, false, "path pattern from level 2"),
                    p("maxLength", "int", false, true, "maximum edges (default 4)"),
                    p("undirected", "bool", false, true, "also walk edges backwards"),
                ],
                "connecting paths between two sets",
            ),
            Operator::Thmap => (
                vec![p("level", "int", false, false, "mapped level (default depth-1)"), p("f", "expr", true, true, "mapping over %item")],
                "transform the children of each node at a level",
            ),
            Operator::Ahmap => (
                vec![p("level", "int", false, false, "aggregated level (default depth-1)"), p("f", "name", true, true, "count | sum | mean | min | max")],
                "fold the children of each node at a level",
            ),
            Operator::Chmap => (
                vec![
                    p("level", "int", false, false, "combined level (default depth-1)"),
                    p("f", "name", true, true, "product | sum | concat | difference | ratio"),
                    p("select", "expr", false, true, "all | distinct | positions(i, ...)"),
                    p("n", "int", false, true, "tuple size for all/distinct (default 2)"),
                ],
                "combine tuples of children",
            ),
            Operator::Tvmap => (vec![p("f", "expr", true, true, "mapping applied to every node of a path")], "map every edge of every path"),
            Operator::Avmap => (vec![p("f", "name", true, true, "compose | length")], "fold the edges of each path"),
            Operator::Cvmap => (vec![p("f", "name", true, true, "endpoints | length | trace")], "combine the edges of each path"),
            Operator::Unite => (vec![], "path-set union"),
            Operator::Intersect => (vec![], "path-set intersection"),
            Operator::Diff => (vec![], "path-set difference"),
            Operator::Branch => (vec![], "evaluate two expressions over the same input (`irs`)"),
        };
        let mut params = params;
        if self != Operator::Branch {
            params.push(p("as", "relpath", false, true, "register a depth-3 result as a computed relation"));
        }
        OperatorSpec { name: self.name(), inputs: self.set_inputs(), params, doc }
    }
}

/// Signatures of every operator, for clients that build argument forms.
pub fn manifest() -> Vec<OperatorSpec> {
    Operator::ALL.iter().map(|o| o.spec()).collect()
}
