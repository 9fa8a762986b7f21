//! The small publications dataset used throughout the operator examples.

use crate::model::Dataset;

use super::triples::load_triples;

/// Four publications, three authors, three affiliations (f3 has no author).
pub const PUBLICATIONS_TSV: &str = "\
# publications, authors and affiliations
p1\t:Author\ta1
p2\t:Author\ta1
p3\t:Author\ta2
p2\t:Author\ta2
p3\t:Author\ta3
p4\t:Author\ta3
a1\t:Affiliation\tf1
a2\t:Affiliation\tf1
a3\t:Affiliation\tf2
f3\t:label\t\"f3\"
";

pub fn publications() -> Dataset {
    load_triples(PUBLICATIONS_TSV).expect("fixture parses")
}
