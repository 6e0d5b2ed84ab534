//! Named diagrams: prime knots through 8 crossings and prime links through
//! 7 crossings, one `NAME: PD` entry per line.

use std::collections::HashMap;
use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;
use tribracket_core::{parse_pd, Diagram, DiagramError, PdCode, PdError};

const BUILTIN: &str = include_str!("../data/atlas.txt");

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error("unknown diagram {name:?}{}", suggest(.suggestions))]
    Unknown { name: String, suggestions: Vec<String> },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("line {line}: {name}: {source}")]
    Pd { line: usize, name: String, source: PdError },
    #[error("line {line}: {name}: {source}")]
    Diagram { line: usize, name: String, source: DiagramError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn suggest(s: &[String]) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!("; did you mean {}?", s.join(", "))
    }
}

#[derive(Debug, Clone)]
pub struct AtlasEntry {
    pub name: String,
    pub pd: PdCode,
    pub components: usize,
    diagram: Diagram,
}

impl AtlasEntry {
    pub fn crossings(&self) -> usize {
        self.pd.num_crossings()
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn is_knot(&self) -> bool {
        self.components == 1
    }
}

/// Component-count filter for [`Atlas::list_entries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Components {
    #[default]
    Any,
    Exactly(usize),
    AtLeast(usize),
}

impl Components {
    fn accepts(self, k: usize) -> bool {
        match self {
            Components::Any => true,
            Components::Exactly(n) => k == n,
            Components::AtLeast(n) => k >= n,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Atlas {
    entries: Vec<AtlasEntry>,
    index: HashMap<String, usize>,
}

impl Atlas {
    pub fn builtin() -> &'static Atlas {
        static ATLAS: OnceLock<Atlas> = OnceLock::new();
        ATLAS.get_or_init(|| Atlas::parse(BUILTIN).expect("embedded atlas is valid"))
    }

    pub fn load(path: &Path) -> Result<Atlas, AtlasError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| AtlasError::Io { path: path.display().to_string(), source })?;
        Atlas::parse(&text)
    }

    /// Reads `NAME: PD` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Atlas, AtlasError> {
        let mut entries = Vec::new();
        let mut index = HashMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((name, pd_text)) = body.split_once(':') else {
                return Err(AtlasError::Line { line, message: "expected 'NAME: PD'".into() });
            };
            let name = name.trim().to_string();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(AtlasError::Line { line, message: format!("bad name {name:?}") });
            }
            let pd = parse_pd(pd_text).map_err(|source| AtlasError::Pd { line, name: name.clone(), source })?;
            let diagram =
                Diagram::new(pd.clone()).map_err(|source| AtlasError::Diagram { line, name: name.clone(), source })?;
            let components = diagram.num_components();
            if let Some(expected) = family_components(&name) {
                if !expected.accepts(components) {
                    return Err(AtlasError::Line {
                        line,
                        message: format!("{name} has {components} components, which does not fit its name"),
                    });
                }
            }
            if index.insert(name.clone(), entries.len()).is_some() {
                return Err(AtlasError::Line { line, message: format!("duplicate name {name}") });
            }
            entries.push(AtlasEntry { name, pd, components, diagram });
        }
        Ok(Atlas { entries, index })
    }

    pub fn entries(&self) -> &[AtlasEntry] {
        &self.entries
    }

    pub fn load_entry(&self, name: &str) -> Result<&AtlasEntry, AtlasError> {
        self.index
            .get(name)
            .map(|&i| &self.entries[i])
            .ok_or_else(|| AtlasError::Unknown { name: name.to_string(), suggestions: self.near_matches(name) })
    }

    /// Names in atlas order.
    pub fn list_entries(&self, max_crossings: Option<usize>, components: Components) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| max_crossings.is_none_or(|m| e.crossings() <= m) && components.accepts(e.components))
            .map(|e| e.name.as_str())
            .collect()
    }

    /// A diagram by atlas name, or an unknot/unlink spelled `U(k)`, `Uk` or `0_1`.
    pub fn resolve(&self, name: &str) -> Result<Diagram, AtlasError> {
        if let Some(k) = unlink_size(name) {
            let pd = PdCode::unlink(k).map_err(|source| AtlasError::Pd { line: 0, name: name.into(), source })?;
            return Diagram::new(pd).map_err(|source| AtlasError::Diagram { line: 0, name: name.into(), source });
        }
        self.load_entry(name).map(|e| e.diagram.clone())
    }

    fn near_matches(&self, name: &str) -> Vec<String> {
        let lower = name.to_ascii_lowercase();
        let mut scored: Vec<(usize, &str)> = self
            .entries
            .iter()
            .map(|e| (levenshtein(&lower, &e.name.to_ascii_lowercase()), e.name.as_str()))
            .filter(|&(d, _)| d <= 2)
            .collect();
        scored.sort();
        scored.into_iter().take(5).map(|(_, n)| n.to_string()).collect()
    }
}

fn unlink_size(name: &str) -> Option<usize> {
    let n = name.trim();
    if n == "0_1" {
        return Some(1);
    }
    let rest = n.strip_prefix('U').or_else(|| n.strip_prefix('u'))?;
    let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
    inner.parse().ok().filter(|&k| k > 0)
}

/// Knot names look like `8_21`, link names like `L6a4`.
fn family_components(name: &str) -> Option<Components> {
    if let Some((c, i)) = name.split_once('_') {
        if c.parse::<usize>().is_ok() && i.parse::<usize>().is_ok() {
            return Some(Components::Exactly(1));
        }
    }
    name.strip_prefix('L').map(|_| Components::AtLeast(2))
}

fn levenshtein(a: &str, b: &str) -> usize {
    let b: Vec<char> = b.chars().collect();
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.chars().enumerate() {
        let mut cur = vec![i + 1; b.len() + 1];
        for (j, &cb) in b.iter().enumerate() {
            cur[j + 1] = (prev[j] + usize::from(ca != cb)).min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        prev = cur;
    }
    prev[b.len()]
}

/// The diagram, its mirror, and every combination with reversed components,
/// each with a short label such as `mirror+reverse{2}`.
pub fn variants(d: &Diagram) -> Vec<(String, Diagram)> {
    let k = d.num_components();
    let mut out = Vec::new();
    for mirror in [false, true] {
        let base = if mirror { d.mirror() } else { d.clone() };
        for mask in 0..1usize << k {
            if d.num_crossings() == 0 && mask != 0 {
                continue;
            }
            let flags: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
            let v = if mask == 0 { base.clone() } else { base.reverse_components(&flags).expect("flag count") };
            let reversed: Vec<String> = (0..k).filter(|&i| flags[i]).map(|i| (i + 1).to_string()).collect();
            let label = match (mirror, reversed.is_empty()) {
                (false, true) => "original".to_string(),
                (true, true) => "mirror".to_string(),
                (false, false) => format!("reverse{{{}}}", reversed.join(",")),
                (true, false) => format!("mirror+reverse{{{}}}", reversed.join(",")),
            };
            out.push((label, v));
        }
    }
    out
}
