//! Published enhancement tables and their recomputation.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use tribracket_core::{module_enhancement, Polynomial};

use crate::atlas::{variants, Atlas, AtlasError};
use crate::format::builtin_module;

pub struct TableSpec {
    pub id: &'static str,
    /// Builtin module name.
    pub module: &'static str,
    pub rows: &'static [(&'static str, &'static [&'static str])],
    /// Diagrams in the same family that the table leaves out.
    pub unlisted: &'static [&'static str],
}

/// Table names that are not atlas names.
const ALIASES: [(&str, &str); 1] = [("L62", "L6a2")];

pub const TABLES: [TableSpec; 4] = [
    TableSpec {
        id: "V1",
        module: "v1",
        rows: &[
            ("2u^9+6u^27", &["L2a1", "L4a1", "L5a1", "L6a2", "L7a4", "L7a6"]),
            ("2u^9+4u^27+2u^81", &["L7a2", "L7a3", "L7n1", "L7n2"]),
            ("8u^27", &["L6a1", "L6a3", "L7a1", "L7a5"]),
            ("8u^27+8u^81", &["L6a5"]),
            ("2u^9+6u^27+8u^81", &["L6n1", "L7a7"]),
            ("2u^9+14u^81", &["L6a4"]),
        ],
        unlisted: &[],
    },
    TableSpec {
        id: "V2",
        module: "v2",
        rows: &[
            ("6u^9+2u^27", &["L2a1", "L62", "L7a6"]),
            ("2u^9+6u^27", &["L4a1", "L5a1", "L7a2", "L7a3", "L7a4", "L7n1", "L7n2"]),
            ("4u^9+4u^27", &["L6a3", "L7a5"]),
            ("8u^27", &["L6a1", "L7a1"]),
            ("2u^9+6u^27+8u^81", &["L6a4"]),
            ("6u^9+8u^27+2u^81", &["L6a5"]),
            ("8u^9+6u^27+2u^81", &["L6n1", "L7a7"]),
        ],
        unlisted: &[],
    },
    TableSpec {
        id: "V3",
        module: "v3",
        rows: &[
            ("2u^128+4u^256+2u^512", &["L2a1", "L6a2", "L6a3", "L7a5", "L7a6"]),
            ("2u^256+6u^512", &["L4a1", "L6a1", "L7a2", "L7n1"]),
            ("8u^512", &["L5a1", "L7a1", "L7a3", "L7a4", "L7n2"]),
            ("2u^256+6u^1024+6u^2048+2u^4096", &["L6a5", "L6n1", "L7a7"]),
            ("2u^1024+6u^2048+8u^4096", &["L6a4"]),
        ],
        unlisted: &[],
    },
    TableSpec {
        id: "four-element",
        module: "x4",
        rows: &[
            (
                "16u^9",
                &[
                    "4_1", "5_1", "5_2", "6_2", "6_3", "7_1", "7_2", "7_3", "7_5", "7_6", "8_1", "8_2", "8_3", "8_4",
                    "8_6", "8_7", "8_8", "8_9", "8_12", "8_13", "8_14", "8_16", "8_17",
                ],
            ),
            ("8u^9+8u^27", &["3_1", "6_1", "7_4", "7_7", "8_5", "8_10", "8_11", "8_15", "8_19", "8_20", "8_21"]),
            ("8u^9+8u^81", &["8_18"]),
            ("16u^9+16u^27", &["L2a1", "L6a2", "L7a6"]),
            ("32u^27", &["L6a3", "L7a5"]),
            ("16u^9+32u^27+16u^81", &["L7a3", "L7n1", "L7n2"]),
            ("16u^9+48u^27", &["L4a1", "L5a1", "L7a4"]),
            ("32u^9+32u^81", &["L6n1", "L7a7"]),
            ("32u^27+32u^81", &["L6a5"]),
            ("64u^27", &["L6a1", "L7a1"]),
            ("32u^9+224u^81", &["L6a4"]),
        ],
        unlisted: &["L7a2"],
    },
];

pub fn table_spec(id: &str) -> Option<&'static TableSpec> {
    let key = id.to_ascii_lowercase();
    let key = match key.as_str() {
        "x4" | "four" | "4" => "four-element",
        k => k,
    };
    TABLES.iter().find(|t| t.id.to_ascii_lowercase() == key)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "variant", rename_all = "kebab-case")]
pub enum Status {
    Match,
    /// Matched after mirroring and/or reversing components.
    Variant(String),
    Mismatch,
}

#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    /// Name as it appears in the table.
    pub printed: String,
    pub name: String,
    pub alias: bool,
    #[serde(serialize_with = "as_string")]
    pub expected: Polynomial,
    #[serde(serialize_with = "as_string")]
    pub computed: Polynomial,
    #[serde(flatten)]
    pub status: Status,
}

#[derive(Debug, Clone, Serialize)]
pub struct Unlisted {
    pub name: String,
    #[serde(serialize_with = "as_string")]
    pub computed: Polynomial,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub table: String,
    pub cells: Vec<Cell>,
    pub unlisted: Vec<Unlisted>,
}

fn as_string<S: serde::Serializer>(p: &Polynomial, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl TableReport {
    pub fn all_match(&self) -> bool {
        self.cells.iter().all(|c| c.status != Status::Mismatch)
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| c.status == Status::Mismatch)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(s, "table {}", self.table).unwrap();
        for c in &self.cells {
            let name = if c.alias { format!("{} (read as {})", c.printed, c.name) } else { c.name.clone() };
            let status = match &c.status {
                Status::Match => "match".to_string(),
                Status::Variant(v) => format!("match via {v}"),
                Status::Mismatch => "MISMATCH".to_string(),
            };
            writeln!(s, "  {name:<20} expected {:<32} computed {:<32} {status}", c.expected, c.computed).unwrap();
        }
        for u in &self.unlisted {
            writeln!(s, "  {:<20} not listed in the table; computed {}", u.name, u.computed).unwrap();
        }
        let bad = self.mismatches().count();
        writeln!(s, "  {} of {} cells match", self.cells.len() - bad, self.cells.len()).unwrap();
        s
    }
}

/// Recomputes every cell. A cell whose stored diagram disagrees is retried
/// on its mirror and component reversals.
pub fn reproduce(spec: &TableSpec, atlas: &Atlas) -> Result<TableReport, AtlasError> {
    let module = builtin_module(spec.module).expect("table module is builtin");
    let mut jobs = Vec::new();
    for (value, names) in spec.rows {
        let expected: Polynomial = value.parse().expect("table value parses");
        for &printed in *names {
            let (name, alias) = match ALIASES.iter().find(|(a, _)| *a == printed) {
                Some((_, real)) => (*real, true),
                None => (printed, false),
            };
            jobs.push((printed, name, alias, expected.clone(), atlas.resolve(name)?));
        }
    }
    let cells = jobs
        .into_par_iter()
        .map(|(printed, name, alias, expected, d)| {
            let computed = module_enhancement(&module, &d).polynomial();
            let status = if computed == expected {
                Status::Match
            } else {
                variants(&d)
                    .into_iter()
                    .skip(1)
                    .find(|(_, v)| module_enhancement(&module, v).polynomial() == expected)
                    .map_or(Status::Mismatch, |(label, _)| Status::Variant(label))
            };
            Cell { printed: printed.to_string(), name: name.to_string(), alias, expected, computed, status }
        })
        .collect();
    let unlisted = spec
        .unlisted
        .iter()
        .map(|&name| {
            let d = atlas.resolve(name)?;
            Ok(Unlisted { name: name.to_string(), computed: module_enhancement(&module, &d).polynomial() })
        })
        .collect::<Result<_, AtlasError>>()?;
    Ok(TableReport { table: spec.id.to_string(), cells, unlisted })
}
