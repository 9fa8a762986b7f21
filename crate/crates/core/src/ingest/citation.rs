//! Synthetic citation corpus: publications, authors and venues linked by
//! `:cite`, `:year`, `:type` and `:isContextFor`/`:isHeldBy` chains.
//!
//! Generation is deterministic for a seed. The designated paper `p` gets
//! planted self-citations and same-venue citations; the expected answers
//! are computed from the generator's own tables, not through the operators.

use std::collections::{BTreeSet, HashSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Dataset, Item};

pub const MIN_SCALE: usize = 50;
pub const MAX_SCALE: usize = 5000;
pub const PAPER: &str = "p";

const VENUES: [&str; 8] = ["ISWC", "ESWC", "WWW", "KCAP", "JWS", "TKDE", "SIGIR", "CIKM"];
const WORDS: [&str; 16] = [
    "Linked", "Data", "Ontology", "Reasoning", "Query", "Graph", "Search", "Exploration",
    "Faceted", "Retrieval", "Knowledge", "Embedding", "Networks", "Scalable", "Efficient", "Provenance",
];
const FIRST: [&str; 10] = ["Ana", "Bruno", "Carla", "Davi", "Elisa", "Fabio", "Gina", "Hugo", "Iris", "Joao"];
const LAST: [&str; 10] = ["Silva", "Souza", "Costa", "Lima", "Rocha", "Alves", "Pires", "Melo", "Dias", "Nunes"];

/// Answers the case-study questions should produce for paper `p`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundTruth {
    /// Number of papers `p` cites.
    pub citations: usize,
    /// Mean of the distinct publication years of the cited papers.
    pub citation_year_mean: f64,
    /// Cited papers sharing at least one author with `p`.
    pub self_citations: usize,
    /// Cited papers with an author among `p`'s authors or their co-authors.
    pub group_citations: usize,
    /// Cited papers published at `p`'s venue.
    pub same_venue_citations: usize,
    pub publications: usize,
}

#[derive(Debug, Clone)]
pub struct CitationFixture {
    pub dataset: Dataset,
    pub paper: Item,
    pub truth: GroundTruth,
}

struct Paper {
    id: String,
    year: i64,
    venue: usize,
    authors: Vec<usize>,
    title: String,
    cites: Vec<usize>,
}

pub fn build_citation_fixture(seed: u64, scale: usize) -> Result<CitationFixture> {
    if !(MIN_SCALE..=MAX_SCALE).contains(&scale) {
        return Err(Error::Scale(scale));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_authors = (scale / 3).max(12);
    let author_names: Vec<String> = (0..n_authors)
        .map(|j| format!("{} {} {}", FIRST[j % FIRST.len()], LAST[(j / FIRST.len()) % LAST.len()], j))
        .collect();
    let own: Vec<usize> = vec![0, 1, 2];

    let mut papers: Vec<Paper> = Vec::with_capacity(scale);
    for i in 0..scale {
        let id = if i == 0 { PAPER.to_string() } else { format!("pub{i:04}") };
        let (year, venue) = if i == 0 { (2019, 0) } else { (2000 + rng.random_range(0..20), rng.random_range(0..VENUES.len())) };
        let mut authors: Vec<usize> = if i == 0 {
            own.clone()
        } else {
            let k = rng.random_range(1..=3);
            let mut pool: Vec<usize> = (0..n_authors).collect();
            pool.shuffle(&mut rng);
            pool.truncate(k);
            pool
        };
        // every tenth paper gets one of p's authors so self-citation is possible
        if i > 0 && i % 10 == 0 {
            let a = own[(i / 10) % own.len()];
            if !authors.contains(&a) {
                authors.push(a);
            }
        }
        let mut words: Vec<&str> = (0..rng.random_range(3..6)).map(|_| *WORDS.choose(&mut rng).unwrap()).collect();
        if i == 0 || rng.random_bool(0.3) {
            let at = rng.random_range(0..=words.len());
            words.insert(at, "Web");
            words.insert(at, "Semantic");
        }
        papers.push(Paper { id, year, venue, authors, title: words.join(" "), cites: Vec::new() });
    }

    // background citations, skewed towards low ids so some papers are popular
    for i in 1..scale {
        let k = rng.random_range(0..=6);
        let mut cited = BTreeSet::new();
        for _ in 0..k {
            let u: f64 = rng.random();
            let j = 1 + ((u * u) * (scale - 1) as f64) as usize;
            if j != i && j < scale {
                cited.insert(j);
            }
        }
        papers[i].cites = cited.into_iter().collect();
    }

    // citations of p: planted self-citations, same-venue picks, random rest
    let own_set: HashSet<usize> = own.iter().copied().collect();
    let by_own: Vec<usize> =
        (1..scale).filter(|&i| papers[i].authors.iter().any(|a| own_set.contains(a))).collect();
    let at_venue: Vec<usize> = (1..scale).filter(|&i| papers[i].venue == papers[0].venue).collect();
    let mut p_cites = BTreeSet::new();
    for &i in by_own.choose_multiple(&mut rng, 3) {
        p_cites.insert(i);
    }
    for &i in at_venue.choose_multiple(&mut rng, 3) {
        p_cites.insert(i);
    }
    while p_cites.len() < 15.min(scale - 1) {
        p_cites.insert(rng.random_range(1..scale));
    }
    papers[0].cites = p_cites.into_iter().collect();

    let dataset = to_dataset(&papers, &author_names);
    let truth = ground_truth(&papers);
    Ok(CitationFixture { dataset, paper: Item::entity(PAPER), truth })
}

fn author_id(j: usize) -> String {
    format!("auth{j:04}")
}

fn to_dataset(papers: &[Paper], author_names: &[String]) -> Dataset {
    let mut d = Dataset::new();
    let publication = Item::entity("Publication");
    let author = Item::entity("Author");
    let venue = Item::entity("Venue");
    let venues: Vec<Item> = VENUES.iter().map(|v| Item::entity(*v).with_label(*v)).collect();
    for v in &venues {
        d.add_item(v.clone());
        d.insert(":type", v.clone(), venue.clone());
    }
    let authors: Vec<Item> = author_names
        .iter()
        .enumerate()
        .map(|(j, name)| Item::entity(author_id(j)).with_label(name.as_str()))
        .collect();
    for a in &authors {
        d.add_item(a.clone());
        d.insert(":type", a.clone(), author.clone());
    }
    let items: Vec<Item> =
        papers.iter().map(|p| Item::entity(p.id.as_str()).with_label(p.title.as_str())).collect();
    let mut ctx = 0usize;
    for (i, p) in papers.iter().enumerate() {
        let it = d.add_item(items[i].clone());
        d.insert(":type", it.clone(), publication.clone());
        d.insert(":year", it.clone(), Item::int(p.year));
        let holders = p.authors.iter().map(|&a| authors[a].clone()).chain([venues[p.venue].clone()]);
        for h in holders {
            let c = Item::entity(format!("ctx{ctx:05}"));
            ctx += 1;
            d.insert(":isContextFor", it.clone(), c.clone());
            d.insert(":isHeldBy", c, h);
        }
    }
    for (i, p) in papers.iter().enumerate() {
        for &j in &p.cites {
            d.insert(":cite", items[i].clone(), items[j].clone());
        }
    }
    d
}

fn ground_truth(papers: &[Paper]) -> GroundTruth {
    let p = &papers[0];
    let own: HashSet<usize> = p.authors.iter().copied().collect();
    let years: BTreeSet<i64> = p.cites.iter().map(|&c| papers[c].year).collect();
    let mean = years.iter().sum::<i64>() as f64 / years.len() as f64;
    let coauthors: HashSet<usize> = papers
        .iter()
        .filter(|q| q.authors.iter().any(|a| own.contains(a)))
        .flat_map(|q| q.authors.iter().copied())
        .collect();
    let count = |f: &dyn Fn(&Paper) -> bool| p.cites.iter().filter(|&&c| f(&papers[c])).count();
    GroundTruth {
        citations: p.cites.len(),
        citation_year_mean: mean,
        self_citations: count(&|q| q.authors.iter().any(|a| own.contains(a))),
        group_citations: count(&|q| q.authors.iter().any(|a| coauthors.contains(a))),
        same_venue_citations: count(&|q| q.venue == p.venue),
        publications: papers.len(),
    }
}
