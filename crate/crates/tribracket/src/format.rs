//! Text and JSON formats for tribrackets, modules and invariant records.
//!
//! A tensor is written as nested brackets, matrix index first:
//! `[[[1,2],[2,1]],[[2,1],[1,2]]]`. Commas, semicolons and whitespace all
//! separate entries, `#` starts a comment, and a bare list of `n^3` numbers
//! is accepted as the flattened form. Tribracket entries are 1-based; module
//! coefficients are residues.
//!
//! A module file (`.tbm`) holds `key: value` fields, where a value may run
//! over several lines:
//!
//! ```text
//! modulus: 3
//! base: x2
//! x: [[[2,2],[2,1]],[[1,2],[2,2]]]
//! y: [[[1,2],[2,2]],[[2,2],[2,1]]]
//! ```
//!
//! `base` is a builtin name or an inline tensor and may be omitted when the
//! caller supplies the tribracket. Either file may instead be a JSON document
//! (see [`TribracketJson`] and [`ModuleJson`]).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use tribracket_core::{Cube, Enhancement, ModuleError, Polynomial, Tribracket, XModule};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("tensor is not cubic: {0}")]
    Shape(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("module file: {0}")]
    Field(String),
    #[error("unknown builtin {name:?}; expected one of {known}")]
    UnknownBuiltin { name: String, known: String },
    #[error("module does not fit its base: {0}")]
    Module(ModuleError),
}

/// Parses nested-bracket or flat tensor text into a cube of raw values.
pub fn parse_tensor(text: &str) -> Result<Cube<u64>, FormatError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    p.skip();
    let value = if p.peek() == Some(b'[') {
        let v = p.list()?;
        p.skip();
        if p.pos < p.bytes.len() {
            return Err(p.error("trailing input after tensor"));
        }
        v
    } else {
        let mut items = Vec::new();
        while p.pos < p.bytes.len() {
            items.push(Node::Num(p.number()?));
            p.skip();
        }
        Node::List(items)
    };
    cube_from_node(value)
}

enum Node {
    Num(u64),
    List(Vec<Node>),
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> FormatError {
        FormatError::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip(&mut self) {
        while let Some(b) = self.peek() {
            if b == b'#' {
                while self.peek().is_some_and(|b| b != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() || b == b',' || b == b';' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self) -> Result<u64, FormatError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| FormatError::Syntax { offset: start, message: "number too large".into() })
    }

    fn list(&mut self) -> Result<Node, FormatError> {
        self.pos += 1;
        let mut items = Vec::new();
        loop {
            self.skip();
            match self.peek() {
                Some(b']') => {
                    self.pos += 1;
                    return Ok(Node::List(items));
                }
                Some(b'[') => items.push(self.list()?),
                Some(_) => items.push(Node::Num(self.number()?)),
                None => return Err(self.error("unclosed '['")),
            }
        }
    }
}

fn cube_from_node(node: Node) -> Result<Cube<u64>, FormatError> {
    let Node::List(top) = node else {
        return Err(FormatError::Shape("expected a list".into()));
    };
    if top.iter().all(|n| matches!(n, Node::Num(_))) {
        let flat: Vec<u64> = top.into_iter().map(|n| if let Node::Num(v) = n { v } else { 0 }).collect();
        let n = (flat.len() as f64).cbrt().round() as usize;
        if n == 0 || n * n * n != flat.len() {
            return Err(FormatError::Shape(format!("{} entries is not a cube number", flat.len())));
        }
        return Ok(Cube::from_flat(n, flat).unwrap());
    }
    let n = top.len();
    let mut flat = Vec::with_capacity(n * n * n);
    for (a, mat) in top.into_iter().enumerate() {
        let Node::List(rows) = mat else {
            return Err(FormatError::Shape(format!("matrix {} is a number", a + 1)));
        };
        if rows.len() != n {
            return Err(FormatError::Shape(format!("matrix {} has {} rows, expected {n}", a + 1, rows.len())));
        }
        for (b, row) in rows.into_iter().enumerate() {
            let Node::List(cols) = row else {
                return Err(FormatError::Shape(format!("row {} of matrix {} is a number", b + 1, a + 1)));
            };
            if cols.len() != n {
                return Err(FormatError::Shape(format!(
                    "row {} of matrix {} has {} entries, expected {n}",
                    b + 1,
                    a + 1,
                    cols.len()
                )));
            }
            for v in cols {
                match v {
                    Node::Num(v) => flat.push(v),
                    Node::List(_) => return Err(FormatError::Shape("nesting deeper than three levels".into())),
                }
            }
        }
    }
    Ok(Cube::from_flat(n, flat).unwrap())
}

/// Nested-bracket text of a cube, on one line.
pub fn tensor_text<T: std::fmt::Display + Copy>(c: &Cube<T>) -> String {
    let nested = c.to_nested();
    let row = |r: &Vec<T>| format!("[{}]", r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
    let mat = |m: &Vec<Vec<T>>| format!("[{}]", m.iter().map(row).collect::<Vec<_>>().join(","));
    format!("[{}]", nested.iter().map(mat).collect::<Vec<_>>().join(","))
}

/// Splits semantic failures (axioms) from input failures (syntax, shape).
#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Input(#[from] FormatError),
    #[error("{0}")]
    Invalid(String),
}

/// 1-based tensor read without checking the axioms, so that validation can
/// report a witness.
pub fn parse_tribracket_table(text: &str) -> Result<Cube<usize>, FormatError> {
    let trimmed = strip_comments(text);
    let cube = if trimmed.trim_start().starts_with('{') {
        let j: TribracketJson = serde_json::from_str(&trimmed)?;
        nested_to_cube(&j.tribracket)?
    } else {
        parse_tensor(text)?
    };
    let n = cube.size();
    let mut out = Vec::with_capacity(n * n * n);
    for (i, &v) in cube.as_flat().iter().enumerate() {
        if v == 0 || v > n as u64 {
            let (a, b, c) = cube.coords(i);
            return Err(FormatError::Shape(format!(
                "entry at ({},{},{}) is {v}, outside 1..={n}",
                a + 1,
                b + 1,
                c + 1
            )));
        }
        out.push(v as usize - 1);
    }
    Ok(Cube::from_flat(n, out).unwrap())
}

/// Parses a tribracket from tensor text or JSON and checks the axioms.
pub fn parse_tribracket(text: &str) -> Result<Tribracket, LoadError> {
    let table = parse_tribracket_table(text)?;
    Tribracket::new(table).map_err(|e| LoadError::Invalid(e.to_string()))
}

fn strip_comments(text: &str) -> String {
    text.lines().map(|l| l.split('#').next().unwrap_or("")).collect::<Vec<_>>().join("\n")
}

fn nested_to_cube<T: Copy + Into<u64>>(v: &[Vec<Vec<T>>]) -> Result<Cube<u64>, FormatError> {
    let n = v.len();
    let mut flat = Vec::with_capacity(n * n * n);
    for m in v {
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(FormatError::Shape(format!("expected {n}x{n}x{n}")));
        }
        flat.extend(m.iter().flatten().map(|&x| x.into()));
    }
    Cube::from_flat(n, flat).ok_or_else(|| FormatError::Shape("empty tensor".into()))
}

/// Raw fields of a module file before they are checked against a base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleFile {
    pub modulus: u64,
    pub base: Option<Cube<usize>>,
    pub x: Cube<u64>,
    pub y: Cube<u64>,
}

impl ModuleFile {
    /// Builds the module over `base` (or the file's own base), checking the
    /// identities.
    pub fn into_module(self, base: Option<&Tribracket>) -> Result<XModule, LoadError> {
        let t = match (&self.base, base) {
            (_, Some(t)) => t.clone(),
            (Some(c), None) => {
                Tribracket::new(c.clone()).map_err(|e| LoadError::Invalid(format!("module base: {e}")))?
            }
            (None, None) => return Err(FormatError::Field("no base tribracket given".into()).into()),
        };
        if let (Some(own), Some(given)) = (&self.base, base) {
            if own != given.table() {
                return Err(FormatError::Field("module base differs from the given tribracket".into()).into());
            }
        }
        XModule::new(t, self.modulus, self.x, self.y).map_err(|e| match e {
            ModuleError::Shape { .. } | ModuleError::Ring(_) => LoadError::Input(FormatError::Module(e)),
            other => LoadError::Invalid(other.to_string()),
        })
    }
}

pub fn parse_module_file(text: &str) -> Result<ModuleFile, FormatError> {
    let clean = strip_comments(text);
    if clean.trim_start().starts_with('{') {
        let j: ModuleJson = serde_json::from_str(&clean)?;
        let base = match j.base {
            None => None,
            Some(BaseJson::Name(n)) => Some(builtin_tribracket(&n)?.table().clone()),
            Some(BaseJson::Tensor(t)) => Some(parse_tribracket_table(&serde_json::to_string(&t)?)?),
        };
        return Ok(ModuleFile { modulus: j.modulus, base, x: nested_to_cube(&j.x)?, y: nested_to_cube(&j.y)? });
    }
    let mut fields: BTreeMap<String, String> = BTreeMap::new();
    let mut current: Option<String> = None;
    for line in clean.lines() {
        let key = line.split_once(':').map(|(k, v)| (k.trim().to_ascii_lowercase(), v));
        match key {
            Some((k, v)) if !line.starts_with(char::is_whitespace) && k.chars().all(|c| c.is_ascii_alphabetic()) => {
                if fields.insert(k.clone(), v.to_string()).is_some() {
                    return Err(FormatError::Field(format!("duplicate field {k:?}")));
                }
                current = Some(k);
            }
            _ if line.trim().is_empty() => {}
            _ => match &current {
                Some(k) => {
                    let f = fields.get_mut(k).unwrap();
                    f.push('\n');
                    f.push_str(line);
                }
                None => return Err(FormatError::Field(format!("expected 'key: value', found {:?}", line.trim()))),
            },
        }
    }
    for k in fields.keys() {
        if !["modulus", "base", "x", "y"].contains(&k.as_str()) {
            return Err(FormatError::Field(format!("unknown field {k:?}")));
        }
    }
    let get = |k: &str| fields.get(k).ok_or_else(|| FormatError::Field(format!("missing field {k:?}")));
    let modulus = get("modulus")?
        .trim()
        .parse()
        .map_err(|_| FormatError::Field(format!("bad modulus {:?}", fields["modulus"].trim())))?;
    let base = match fields.get("base").map(|s| s.trim()) {
        None => None,
        Some(s) if s.starts_with('[') || s.starts_with(|c: char| c.is_ascii_digit()) => {
            Some(parse_tribracket_table(s)?)
        }
        Some(name) => Some(builtin_tribracket(name)?.table().clone()),
    };
    Ok(ModuleFile { modulus, base, x: parse_tensor(get("x")?)?, y: parse_tensor(get("y")?)? })
}

/// Module file text in the `key: value` form.
pub fn module_text(v: &XModule) -> String {
    let base = builtin_name_of(v.base()).map(str::to_string).unwrap_or_else(|| v.base().to_string());
    format!(
        "modulus: {}\nbase: {}\nx: {}\ny: {}\n",
        v.modulus(),
        base,
        tensor_text(v.x_tensor()),
        tensor_text(v.y_tensor())
    )
}

const BUILTIN_TRIBRACKETS: [(&str, &str); 3] = [
    ("x2", include_str!("../data/x2.tb")),
    ("x3", include_str!("../data/x3.tb")),
    ("x4", include_str!("../data/x4.tb")),
];

const BUILTIN_MODULES: [(&str, &str); 5] = [
    ("v", include_str!("../data/v.tbm")),
    ("v1", include_str!("../data/v1.tbm")),
    ("v2", include_str!("../data/v2.tbm")),
    ("v3", include_str!("../data/v3.tbm")),
    ("x4", include_str!("../data/x4.tbm")),
];

pub fn builtin_tribracket(name: &str) -> Result<Tribracket, FormatError> {
    let key = name.trim().to_ascii_lowercase();
    let text = BUILTIN_TRIBRACKETS.iter().find(|(n, _)| *n == key).map(|(_, t)| *t).ok_or_else(|| {
        FormatError::UnknownBuiltin { name: name.to_string(), known: BUILTIN_TRIBRACKETS.map(|(n, _)| n).join(", ") }
    })?;
    Ok(parse_tribracket(text).expect("builtin tribracket"))
}

pub fn builtin_module(name: &str) -> Result<XModule, FormatError> {
    let key = name.trim().to_ascii_lowercase();
    let text = BUILTIN_MODULES.iter().find(|(n, _)| *n == key).map(|(_, t)| *t).ok_or_else(|| {
        FormatError::UnknownBuiltin { name: name.to_string(), known: BUILTIN_MODULES.map(|(n, _)| n).join(", ") }
    })?;
    Ok(parse_module_file(text)
        .and_then(|f| f.into_module(None).map_err(|e| FormatError::Field(e.to_string())))
        .expect("builtin module"))
}

pub fn builtin_name_of(t: &Tribracket) -> Option<&'static str> {
    BUILTIN_TRIBRACKETS.iter().map(|(n, _)| *n).find(|n| builtin_tribracket(n).is_ok_and(|b| &b == t))
}

pub fn read_text(path: &Path) -> Result<String, FormatError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|source| FormatError::Io { path: "<stdin>".into(), source })?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.display().to_string(), source })
}

/// Tribracket given as a builtin name or a path.
pub fn load_tribracket(source: &str) -> Result<Tribracket, LoadError> {
    if let Ok(t) = builtin_tribracket(source) {
        return Ok(t);
    }
    parse_tribracket(&read_text(Path::new(source))?)
}

/// Unchecked module fields from a builtin name or a path.
pub fn load_module_file(source: &str) -> Result<ModuleFile, FormatError> {
    match builtin_module(source) {
        Ok(m) => Ok(ModuleFile {
            modulus: m.modulus(),
            base: Some(m.base().table().clone()),
            x: m.x_tensor().clone(),
            y: m.y_tensor().clone(),
        }),
        Err(_) => parse_module_file(&read_text(Path::new(source))?),
    }
}

/// Module given as a builtin name or a path.
pub fn load_module(source: &str, base: Option<&Tribracket>) -> Result<XModule, LoadError> {
    load_module_file(source)?.into_module(base)
}

/// Unchecked 1-based table from a builtin name or a path.
pub fn load_tribracket_table(source: &str) -> Result<Cube<usize>, FormatError> {
    match builtin_tribracket(source) {
        Ok(t) => Ok(t.table().clone()),
        Err(_) => parse_tribracket_table(&read_text(Path::new(source))?),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TribracketJson {
    /// 1-based nested tensor.
    pub tribracket: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseJson {
    Name(String),
    Tensor(Vec<Vec<Vec<u64>>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub modulus: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseJson>,
    pub x: Vec<Vec<Vec<u64>>>,
    pub y: Vec<Vec<Vec<u64>>>,
}

impl ModuleJson {
    pub fn of(v: &XModule) -> Self {
        ModuleJson {
            modulus: v.modulus(),
            base: Some(BaseJson::Tensor(one_based(v.base()))),
            x: v.x_tensor().to_nested(),
            y: v.y_tensor().to_nested(),
        }
    }
}

pub fn one_based(t: &Tribracket) -> Vec<Vec<Vec<u64>>> {
    t.table().map(|&v| v as u64 + 1).to_nested()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultisetEntry {
    pub kernel: u128,
    pub count: u64,
}

/// One invariant computation, as emitted by `invariant --format json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRecord {
    pub diagram: String,
    pub pd: String,
    pub tribracket: Vec<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleJson>,
    pub count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiset: Option<Vec<MultisetEntry>>,
}

impl InvariantRecord {
    pub fn polynomial(&self) -> Option<Polynomial> {
        self.polynomial.as_deref().and_then(|p| p.parse().ok())
    }
}

pub fn multiset_entries(e: &Enhancement) -> Vec<MultisetEntry> {
    e.multiset().into_iter().map(|(kernel, count)| MultisetEntry { kernel, count }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_and_flat_forms_agree() {
        let a = parse_tensor("[[[1,2],[2,1]],[[2,1],[1,2]]]").unwrap();
        let b = parse_tensor("# comment\n1 2 2 1\n2 1 1 2\n").unwrap();
        let c = parse_tensor("[ [ [1 2]; [2 1] ] [ [2 1] [1 2] ] ]").unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(tensor_text(&a), "[[[1,2],[2,1]],[[2,1],[1,2]]]");
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(parse_tensor("[[[1,2],[2,1]],[[2,1]]]"), Err(FormatError::Shape(_))));
        assert!(matches!(parse_tensor("1 2 3"), Err(FormatError::Shape(_))));
        assert!(matches!(parse_tensor("[[[1,2]"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_tensor("[[[1,x]]]"), Err(FormatError::Syntax { .. })));
        assert!(matches!(parse_tribracket_table("[[[1,3],[2,1]],[[2,1],[1,2]]]"), Err(FormatError::Shape(_))));
    }

    #[test]
    fn builtins_load() {
        for (n, size) in [("x2", 2), ("x3", 3), ("x4", 4)] {
            assert_eq!(builtin_tribracket(n).unwrap().size(), size);
        }
        for n in ["v", "v1", "v2", "v3", "x4"] {
            let m = builtin_module(n).unwrap();
            assert_eq!(load_module(n, None).unwrap(), m);
        }
        assert_eq!(builtin_module("v3").unwrap().modulus(), 8);
        assert!(builtin_module("v9").is_err());
    }

    #[test]
    fn module_text_round_trips() {
        for n in ["v", "v3", "x4"] {
            let m = builtin_module(n).unwrap();
            let back = parse_module_file(&module_text(&m)).unwrap().into_module(None).unwrap();
            assert_eq!(back, m);
            let json = serde_json::to_string(&ModuleJson::of(&m)).unwrap();
            let back = parse_module_file(&json).unwrap().into_module(None).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn multiline_fields_and_errors() {
        let text = "modulus: 3\nx: [[[2,2],[2,1]],\n    [[1,2],[2,2]]]\ny:\n  [[[1,2],[2,2]],[[2,2],[2,1]]]\n";
        let f = parse_module_file(text).unwrap();
        assert!(f.base.is_none());
        let m = f.clone().into_module(Some(&builtin_tribracket("x2").unwrap())).unwrap();
        assert_eq!(m, builtin_module("v").unwrap());
        assert!(matches!(f.into_module(None), Err(LoadError::Input(_))));
        assert!(parse_module_file("modulus: 3\nz: 1\n").is_err());
        let bad = text.replacen("[[[2,2]", "[[[1,2]", 1);
        let f = parse_module_file(&bad).unwrap();
        assert!(matches!(f.into_module(Some(&builtin_tribracket("x2").unwrap())), Err(LoadError::Invalid(_))));
    }

    #[test]
    fn invariant_record_round_trips() {
        let r = InvariantRecord {
            diagram: "3_1".into(),
            pd: "X(1,4,2,5)".into(),
            tribracket: one_based(&builtin_tribracket("x2").unwrap()),
            module: Some(ModuleJson::of(&builtin_module("v").unwrap())),
            count: 4,
            polynomial: Some("4u^27".into()),
            multiset: Some(vec![MultisetEntry { kernel: 27, count: 4 }]),
        };
        let s = serde_json::to_string_pretty(&r).unwrap();
        assert_eq!(serde_json::from_str::<InvariantRecord>(&s).unwrap(), r);
        assert_eq!(r.polynomial().unwrap().to_string(), "4u^27");
    }
}
