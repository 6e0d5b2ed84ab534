//! Planar diagram codes.
//!
//! Each crossing lists four arc labels counterclockwise starting from the
//! incoming under-strand, so the under-strand always runs from position 0 to
//! position 2. The over-strand runs 3 -> 1 at a positive crossing and 1 -> 3
//! at a negative one.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use thiserror::Error;

/// A position at a crossing: `(crossing, 0..4)`.
pub type Slot = (usize, u8);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PdError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("crossing {index} has {found} labels, expected 4")]
    MalformedCrossing { index: usize, found: usize },
    #[error("arc label {label} appears {count} times, expected exactly 2")]
    LabelCount { label: u32, count: usize },
    #[error("no crossings; write U(k) for a k-component unlink")]
    Empty,
    #[error("U(k) cannot be combined with crossings")]
    MixedUnlink,
    #[error("U(k) needs k >= 1")]
    ZeroUnlink,
}

/// A validated PD code, or a crossingless unlink of `free_loops` components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PdCode {
    crossings: Vec<[u32; 4]>,
    free_loops: usize,
}

impl PdCode {
    pub fn new(crossings: Vec<[u32; 4]>) -> Result<Self, PdError> {
        if crossings.is_empty() {
            return Err(PdError::Empty);
        }
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for t in &crossings {
            for &l in t {
                *counts.entry(l).or_insert(0) += 1;
            }
        }
        if let Some((&label, &count)) = counts.iter().find(|(_, &c)| c != 2) {
            return Err(PdError::LabelCount { label, count });
        }
        Ok(PdCode { crossings, free_loops: 0 })
    }

    /// The crossingless diagram of the `k`-component unlink.
    pub fn unlink(k: usize) -> Result<Self, PdError> {
        if k == 0 {
            return Err(PdError::ZeroUnlink);
        }
        Ok(PdCode { crossings: Vec::new(), free_loops: k })
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    /// Components of a crossingless unlink; zero whenever there are crossings.
    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    pub fn label(&self, (x, p): Slot) -> u32 {
        self.crossings[x][p as usize]
    }

    /// Arc labels in increasing order; `1..=k` for `U(k)`.
    pub fn labels(&self) -> Vec<u32> {
        if self.crossings.is_empty() {
            return (1..=self.free_loops as u32).collect();
        }
        let mut l: Vec<u32> = self.crossings.iter().flatten().copied().collect();
        l.sort_unstable();
        l.dedup();
        l
    }

    /// For every slot, the other slot carrying the same label.
    pub(crate) fn partners(&self) -> Vec<[Slot; 4]> {
        let mut first: BTreeMap<u32, Slot> = BTreeMap::new();
        let mut out = vec![[(0usize, 0u8); 4]; self.crossings.len()];
        for (x, t) in self.crossings.iter().enumerate() {
            for (p, &l) in t.iter().enumerate() {
                let here = (x, p as u8);
                if let Some(there) = first.remove(&l) {
                    out[x][p] = there;
                    out[there.0][there.1 as usize] = here;
                } else {
                    first.insert(l, here);
                }
            }
        }
        out
    }

    pub fn num_components(&self) -> usize {
        if self.crossings.is_empty() {
            self.free_loops
        } else {
            self.orient().components.len()
        }
    }

    /// Derives strand directions. The under-strand fixes the direction of any
    /// component that passes under somewhere; a component that only passes
    /// over falls back to label succession.
    pub(crate) fn orient(&self) -> Orientation {
        let partners = self.partners();
        let n = self.crossings.len();
        let mut visited = vec![[false; 4]; n];
        let mut over_in = vec![3u8; n];
        let mut components: Vec<Vec<Slot>> = Vec::new();
        for x in 0..n {
            for p in [0u8, 1] {
                if visited[x][p as usize] {
                    continue;
                }
                // Walk entering at (x, p), leaving by the opposite slot.
                let mut entries = Vec::new();
                let mut cur = (x, p);
                while !visited[cur.0][cur.1 as usize] {
                    let exit = (cur.0, (cur.1 + 2) % 4);
                    visited[cur.0][cur.1 as usize] = true;
                    visited[exit.0][exit.1 as usize] = true;
                    entries.push(cur);
                    cur = partners[exit.0][exit.1 as usize];
                }
                let forward = match entries.iter().find(|s| s.1 % 2 == 0) {
                    Some(s) => s.1 == 0,
                    None => self.succession_forward(&entries),
                };
                let mut ins: Vec<Slot> =
                    if forward { entries } else { entries.iter().rev().map(|&(y, q)| (y, (q + 2) % 4)).collect() };
                for &(y, q) in &ins {
                    if q % 2 == 1 {
                        over_in[y] = q;
                    }
                }
                let start = (0..ins.len()).min_by_key(|&i| ins[i]).expect("nonempty");
                ins.rotate_left(start);
                components.push(ins);
            }
        }
        components.sort_by_key(|c| c[0]);
        Orientation { over_in, components }
    }

    /// Direction of an all-over component, entered as `entries` (odd slots).
    /// Labels are expected to increase along the orientation, wrapping once.
    fn succession_forward(&self, entries: &[Slot]) -> bool {
        let &(x, p) = entries.iter().min().expect("nonempty");
        let labels: Vec<u32> = entries.iter().map(|&s| self.label(s)).collect();
        let lowest = *labels.iter().min().expect("nonempty");
        // Entering at p means the arc at p is incoming, the one at p+2 outgoing.
        let (l, j) = (self.label((x, p)), self.label((x, (p + 2) % 4)));
        if entries.len() <= 2 {
            l == lowest
        } else {
            j == l.wrapping_add(1) || l > j.saturating_add(1)
        }
    }
}

/// Strand directions derived from a PD code.
#[derive(Debug, Clone)]
pub(crate) struct Orientation {
    /// Slot where the over-strand enters each crossing: 3 or 1.
    pub over_in: Vec<u8>,
    /// Per component, the slots where it enters crossings in travel order.
    /// Components are sorted by, and start at, their smallest entry slot.
    pub components: Vec<Vec<Slot>>,
}

impl fmt::Display for PdCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.crossings.is_empty() {
            return write!(f, "U({})", self.free_loops);
        }
        for (i, [a, b, c, d]) in self.crossings.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "X({a},{b},{c},{d})")?;
        }
        Ok(())
    }
}

/// Parses `X(1,4,2,5) X(3,6,4,1) ...`, optionally wrapped in `PD[...]`, with
/// `X[...]` brackets also accepted; `U(k)` is the `k`-component unlink.
/// A bare nested list `[[1,4,2,5],[3,6,4,1],...]` is read as crossings too.
pub fn parse_pd(text: &str) -> Result<PdCode, PdError> {
    let mut s = text.trim();
    let mut base = text.len() - text.trim_start().len();
    for (open, close) in [("PD[", ']'), ("PD(", ')')] {
        if let Some(inner) = s.strip_prefix(open) {
            s = inner
                .strip_suffix(close)
                .ok_or(PdError::Syntax { offset: base + s.len(), message: "unterminated PD wrapper".into() })?;
            base += open.len();
        }
    }
    if s.starts_with("[[") || s.starts_with("[ [") {
        return parse_nested(s, base);
    }
    let bytes = s.as_bytes();
    let mut i = 0;
    let mut crossings = Vec::new();
    let mut unlink = None;
    while i < bytes.len() {
        let ch = bytes[i];
        if ch.is_ascii_whitespace() || ch == b',' {
            i += 1;
            continue;
        }
        let kind = ch;
        if kind != b'X' && kind != b'U' {
            return Err(PdError::Syntax { offset: base + i, message: "expected X(...) or U(k)".into() });
        }
        i += 1;
        let close = match bytes.get(i) {
            Some(b'(') => b')',
            Some(b'[') => b']',
            _ => return Err(PdError::Syntax { offset: base + i, message: "expected ( or [".into() }),
        };
        let start = i + 1;
        let end = s[start..]
            .bytes()
            .position(|b| b == close)
            .map(|k| start + k)
            .ok_or(PdError::Syntax { offset: base + i, message: "unclosed bracket".into() })?;
        let nums = parse_numbers(&s[start..end], base + start)?;
        if kind == b'U' {
            if nums.len() != 1 || unlink.is_some() {
                return Err(PdError::Syntax { offset: base + start, message: "U takes exactly one count".into() });
            }
            unlink = Some(nums[0] as usize);
        } else {
            let idx = crossings.len();
            let t: [u32; 4] =
                nums.try_into().map_err(|v: Vec<u32>| PdError::MalformedCrossing { index: idx, found: v.len() })?;
            crossings.push(t);
        }
        i = end + 1;
    }
    match unlink {
        Some(_) if !crossings.is_empty() => Err(PdError::MixedUnlink),
        Some(k) => PdCode::unlink(k),
        None => PdCode::new(crossings),
    }
}

fn parse_numbers(s: &str, offset: usize) -> Result<Vec<u32>, PdError> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in s.split(',') {
        let t = part.trim();
        if t.is_empty() {
            if s.trim().is_empty() {
                break;
            }
            return Err(PdError::Syntax { offset: offset + pos, message: "empty label".into() });
        }
        out.push(
            t.parse()
                .map_err(|_| PdError::Syntax { offset: offset + pos, message: alloc::format!("bad label {t:?}") })?,
        );
        pos += part.len() + 1;
    }
    Ok(out)
}

fn parse_nested(s: &str, base: usize) -> Result<PdCode, PdError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.trim_end().strip_suffix(']'))
        .ok_or(PdError::Syntax { offset: base, message: "unbalanced brackets".into() })?;
    let mut crossings = Vec::new();
    let mut rest = inner;
    let mut off = base + 1;
    loop {
        let trimmed = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',');
        off += rest.len() - trimmed.len();
        rest = trimmed;
        if rest.is_empty() {
            break;
        }
        let body = rest.strip_prefix('[').ok_or(PdError::Syntax { offset: off, message: "expected [".into() })?;
        let end = body.find(']').ok_or(PdError::Syntax { offset: off, message: "unclosed [".into() })?;
        let nums = parse_numbers(&body[..end], off + 1)?;
        let idx = crossings.len();
        let t: [u32; 4] =
            nums.try_into().map_err(|v: Vec<u32>| PdError::MalformedCrossing { index: idx, found: v.len() })?;
        crossings.push(t);
        off += end + 2;
        rest = &body[end + 1..];
    }
    PdCode::new(crossings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    const TREFOIL: &str = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";

    #[test]
    fn trefoil_parses() {
        let pd = parse_pd(TREFOIL).unwrap();
        assert_eq!(pd.num_crossings(), 3);
        assert_eq!(pd.num_components(), 1);
        assert_eq!(pd.to_string(), TREFOIL);
    }

    #[test]
    fn alternative_syntaxes() {
        let a = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        let b = parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]").unwrap();
        assert_eq!(a, parse_pd(TREFOIL).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn unlinks() {
        let u = parse_pd("U(1)").unwrap();
        assert_eq!((u.num_crossings(), u.num_components()), (0, 1));
        assert_eq!(parse_pd("U[3]").unwrap().num_components(), 3);
        assert_eq!(parse_pd("U(0)"), Err(PdError::ZeroUnlink));
        assert_eq!(parse_pd("U(1) X(1,2,2,1)"), Err(PdError::MixedUnlink));
    }

    #[test]
    fn malformed() {
        assert_eq!(parse_pd("X(1,2,3)"), Err(PdError::MalformedCrossing { index: 0, found: 3 }));
        assert_eq!(parse_pd("X(1,2,3,4)"), Err(PdError::LabelCount { label: 1, count: 1 }));
        assert_eq!(parse_pd(""), Err(PdError::Empty));
        assert!(matches!(parse_pd("Y(1,2,3,4)"), Err(PdError::Syntax { .. })));
        assert!(matches!(parse_pd("X(1,2,a,4)"), Err(PdError::Syntax { .. })));
    }

    #[test]
    fn hopf_link_has_two_components() {
        let pd = parse_pd("X(4,1,3,2) X(2,3,1,4)").unwrap();
        assert_eq!(pd.num_components(), 2);
        let o = pd.orient();
        // Both crossings of this diagram share a sign.
        assert_eq!(o.over_in[0], o.over_in[1]);
    }

    #[test]
    fn all_over_component_uses_label_succession() {
        // Two-crossing unlink: arcs 5 and 6 pass over twice, so the
        // component is entered at its lowest crossing on its lowest label.
        let pd = parse_pd("X(1,5,2,6) X(2,6,1,5)").unwrap();
        let o = pd.orient();
        let comp = o.components.iter().find(|c| c.iter().all(|s| s.1 % 2 == 1)).unwrap();
        assert_eq!(pd.label(comp[0]), 5);
    }
}
