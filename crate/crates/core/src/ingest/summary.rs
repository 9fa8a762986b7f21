use std::collections::HashSet;

use serde::Serialize;

use crate::model::{Dataset, ExplorationSet, Item, Provenance, RelationSource};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationSummary {
    pub id: String,
    pub provenance: Provenance,
    pub pairs: usize,
    pub domain: usize,
    pub image: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemaSummary {
    pub items: usize,
    pub entities: usize,
    pub literals: usize,
    pub relations: Vec<RelationSummary>,
}

pub fn schema_summary(d: &Dataset) -> SchemaSummary {
    let entities = d.entities().count();
    let relations = d
        .all_relations()
        .into_iter()
        .map(|r| RelationSummary {
            id: r.id().to_string(),
            provenance: r.provenance().clone(),
            pairs: r.len(),
            domain: r.domain().collect::<HashSet<_>>().len(),
            image: r.image().collect::<HashSet<_>>().len(),
        })
        .collect();
    SchemaSummary { items: d.item_count(), entities, literals: d.item_count() - entities, relations }
}

impl SchemaSummary {
    pub fn is_empty(&self) -> bool {
        self.relations.is_empty() && self.items == 0
    }

    /// The summary as a dataset of its own: one entity per relation with
    /// `:pairs`, `:domainSize` and `:imageSize` counts, so the operators can
    /// run over the schema.
    pub fn to_dataset(&self) -> Dataset {
        let mut d = Dataset::new();
        for r in &self.relations {
            let e = Item::entity(r.id.clone());
            d.insert(":pairs", e.clone(), Item::int(r.pairs as i64));
            d.insert(":domainSize", e.clone(), Item::int(r.domain as i64));
            d.insert(":imageSize", e.clone(), Item::int(r.image as i64));
            let kind = match &r.provenance {
                Provenance::Schema => "schema",
                Provenance::Computed => "computed",
                Provenance::InverseOf(_) => "inverse",
            };
            d.insert(":provenance", e, Item::string(kind));
        }
        d
    }

    /// Flat set of relation ids, each carrying its pair count as a child.
    pub fn to_set(&self) -> ExplorationSet {
        ExplorationSet::from_paths(
            self.relations.iter().map(|r| vec![Item::entity(r.id.clone()), Item::int(r.pairs as i64)]),
        )
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "{} items ({} entities, {} literals), {} relations\n",
            self.items,
            self.entities,
            self.literals,
            self.relations.len()
        );
        for r in &self.relations {
            s.push_str(&format!(
                "  {}  pairs={} domain={} image={}\n",
                r.id, r.pairs, r.domain, r.image
            ));
        }
        s
    }
}
