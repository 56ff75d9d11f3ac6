//! Resource accounting for block-encoding constructions.

use std::collections::BTreeMap;
use std::ops::Add;

/// Which formula produced a count, with the constants this implementation chose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaNote {
    pub construction: String,
    pub expression: String,
    pub constants: String,
}

/// Queries to named base oracles and samples of named state sources.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryLedger {
    pub base_queries: BTreeMap<String, u64>,
    pub samples: BTreeMap<String, u64>,
    pub formula_notes: Vec<FormulaNote>,
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// One query to the named oracle.
    pub fn base(name: &str) -> Self {
        let mut l = Self::new();
        l.base_queries.insert(name.to_string(), 1);
        l
    }

    pub fn add_queries(&mut self, name: &str, count: u64) {
        let e = self.base_queries.entry(name.to_string()).or_insert(0);
        *e = e.saturating_add(count);
    }

    pub fn add_samples(&mut self, name: &str, count: u64) {
        let e = self.samples.entry(name.to_string()).or_insert(0);
        *e = e.saturating_add(count);
    }

    pub fn note(&mut self, construction: &str, expression: &str, constants: &str) {
        self.formula_notes.push(FormulaNote {
            construction: construction.to_string(),
            expression: expression.to_string(),
            constants: constants.to_string(),
        });
    }

    /// Counts for `k` uses of whatever this ledger describes.
    pub fn times(&self, k: u64) -> Self {
        let mul = |m: &BTreeMap<String, u64>| {
            m.iter().map(|(n, c)| (n.clone(), c.saturating_mul(k))).collect()
        };
        Self {
            base_queries: mul(&self.base_queries),
            samples: mul(&self.samples),
            formula_notes: self.formula_notes.clone(),
        }
    }

    pub fn total_queries(&self) -> u64 {
        self.base_queries.values().fold(0, |a, &b| a.saturating_add(b))
    }

    pub fn total_samples(&self) -> u64 {
        self.samples.values().fold(0, |a, &b| a.saturating_add(b))
    }

    /// Same counts, ignoring the notes.
    pub fn same_counts(&self, other: &Self) -> bool {
        self.base_queries == other.base_queries && self.samples == other.samples
    }
}

impl Add for &QueryLedger {
    type Output = QueryLedger;

    fn add(self, other: &QueryLedger) -> QueryLedger {
        let mut out = self.clone();
        for (n, &c) in &other.base_queries {
            out.add_queries(n, c);
        }
        for (n, &c) in &other.samples {
            out.add_samples(n, c);
        }
        for note in &other.formula_notes {
            if !out.formula_notes.contains(note) {
                out.formula_notes.push(note.clone());
            }
        }
        out
    }
}
