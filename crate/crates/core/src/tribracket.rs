//! Horizontal tribrackets on `{1..n}`.
//!
//! Elements are stored 0-based; every `Display` impl and every witness shown
//! to a user is 1-based so it reads like the usual tensor notation, where the
//! entry in matrix `a`, row `b`, column `c` is `[a,b,c]`.

use alloc::vec::Vec;
use core::fmt;
use thiserror::Error;

use crate::ring::{self, RingError};
use crate::tensor::Cube;

/// Which argument of `[a,b,c]` fails to be recoverable from the other three.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invertibility {
    /// `a` from `(b, c, d)`.
    Left,
    /// `b` from `(a, c, d)`.
    Center,
    /// `c` from `(a, b, d)`.
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TribracketError {
    #[error("malformed tensor: {0}")]
    Malformed(MalformedTensor),
    /// Axiom (i). `fixed` holds the two fixed arguments (0-based) in their
    /// natural order and `args` the two distinct free arguments that collide.
    #[error("axiom (i) fails: {kind:?} invertibility, fixed {} and {}, arguments {} and {} both give {}",
        fixed.0 + 1, fixed.1 + 1, args.0 + 1, args.1 + 1, value + 1)]
    NotInvertible { kind: Invertibility, fixed: (usize, usize), args: (usize, usize), value: usize },
    #[error("axiom (ii) fails at (a,b,c,d) = ({}, {}, {}, {})", .0[0] + 1, .0[1] + 1, .0[2] + 1, .0[3] + 1)]
    Axiom2([usize; 4]),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MalformedTensor {
    Shape { expected: usize, found: usize },
    Entry { position: (usize, usize, usize), value: usize },
    Empty,
}

impl fmt::Display for MalformedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MalformedTensor::Shape { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            MalformedTensor::Entry { position: (a, b, c), value } => {
                write!(f, "entry {value} at ({}, {}, {}) is out of range", a + 1, b + 1, c + 1)
            }
            MalformedTensor::Empty => write!(f, "a tribracket needs at least one element"),
        }
    }
}

/// A tribracket on `{0..n}` with precomputed inverse tables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tribracket {
    table: Cube<usize>,
    solve_left: Cube<usize>,
    solve_center: Cube<usize>,
    solve_right: Cube<usize>,
}

impl Tribracket {
    /// Validates both axioms and builds the operation.
    pub fn new(table: Cube<usize>) -> Result<Self, TribracketError> {
        validate_tribracket(&table)?;
        Ok(Self::from_valid(table))
    }

    /// Builds from a flat, row-major list of 1-based entries.
    pub fn from_one_based(size: usize, entries: &[usize]) -> Result<Self, TribracketError> {
        let expected = size * size * size;
        if entries.len() != expected {
            return Err(TribracketError::Malformed(MalformedTensor::Shape { expected, found: entries.len() }));
        }
        let mut zero = Vec::with_capacity(expected);
        for (i, &v) in entries.iter().enumerate() {
            if v == 0 || v > size {
                let n = size;
                return Err(TribracketError::Malformed(MalformedTensor::Entry {
                    position: (i / (n * n), (i / n) % n, i % n),
                    value: v,
                }));
            }
            zero.push(v - 1);
        }
        Self::new(Cube::from_flat(size, zero).expect("length checked"))
    }

    pub(crate) fn from_valid(table: Cube<usize>) -> Self {
        let n = table.size();
        let mut solve_left = Cube::filled(n, 0);
        let mut solve_center = Cube::filled(n, 0);
        let mut solve_right = Cube::filled(n, 0);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let d = table.get(a, b, c);
                    solve_left.set(b, c, d, a);
                    solve_center.set(a, c, d, b);
                    solve_right.set(a, b, d, c);
                }
            }
        }
        Tribracket { table, solve_left, solve_center, solve_right }
    }

    /// The Alexander tribracket `[a,b,c] = -xy a + x b + y c` on `Z_N`;
    /// residue `r` is element `r` (shown as `r + 1`).
    pub fn alexander(modulus: u64, x: u64, y: u64) -> Result<Self, TribracketError> {
        ring::check_modulus(modulus)?;
        for v in [x, y] {
            if !ring::is_unit(v % modulus, modulus)? {
                return Err(RingError::NotUnit { value: v, modulus }.into());
            }
        }
        let n = modulus as usize;
        let (x, y) = (x % modulus, y % modulus);
        let xy = x * y % modulus;
        let table = Cube::from_fn(n, |a, b, c| {
            let v = (modulus - xy) * a as u64 + x * b as u64 + y * c as u64;
            (v % modulus) as usize
        });
        Ok(Self::from_valid(table))
    }

    /// The Dehn tribracket `[a,b,c] = b a^{-1} c` of a group.
    pub fn dehn(group: &Group) -> Self {
        let n = group.order();
        let table = Cube::from_fn(n, |a, b, c| group.mul(group.mul(b, group.inverse(a)), c));
        Self::from_valid(table)
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.table.size()
    }

    /// `[a,b,c]`, 0-based.
    #[inline]
    pub fn op(&self, a: usize, b: usize, c: usize) -> usize {
        self.table.get(a, b, c)
    }

    /// The unique `a` with `[a,b,c] = d`.
    #[inline]
    pub fn solve_left(&self, b: usize, c: usize, d: usize) -> usize {
        self.solve_left.get(b, c, d)
    }

    /// The unique `b` with `[a,b,c] = d`.
    #[inline]
    pub fn solve_center(&self, a: usize, c: usize, d: usize) -> usize {
        self.solve_center.get(a, c, d)
    }

    /// The unique `c` with `[a,b,c] = d`.
    #[inline]
    pub fn solve_right(&self, a: usize, b: usize, d: usize) -> usize {
        self.solve_right.get(a, b, d)
    }

    pub fn table(&self) -> &Cube<usize> {
        &self.table
    }

    /// Entries as 1-based nested `matrix -> row -> column` lists.
    pub fn to_one_based(&self) -> Vec<Vec<Vec<usize>>> {
        self.table.map(|&v| v + 1).to_nested()
    }
}

impl fmt::Debug for Tribracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tribracket({})", self)
    }
}

/// Bracket notation, 1-based: `[[[1,2],[2,1]],[[2,1],[1,2]]]`.
impl fmt::Display for Tribracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_nested(f, &self.to_one_based())
    }
}

pub(crate) fn write_nested<T: fmt::Display>(f: &mut fmt::Formatter<'_>, m: &[Vec<Vec<T>>]) -> fmt::Result {
    write!(f, "[")?;
    for (i, mat) in m.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "[")?;
        for (j, row) in mat.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")?;
    }
    write!(f, "]")
}

/// Checks every entry is in range, the three invertibility families of axiom
/// (i), and axiom (ii) over all `n^4` quadruples. Reports the first failure.
pub fn validate_tribracket(t: &Cube<usize>) -> Result<(), TribracketError> {
    let n = t.size();
    if n == 0 {
        return Err(TribracketError::Malformed(MalformedTensor::Empty));
    }
    for (i, &v) in t.as_flat().iter().enumerate() {
        if v >= n {
            return Err(TribracketError::Malformed(MalformedTensor::Entry { position: t.coords(i), value: v + 1 }));
        }
    }
    check_invertibility(t)?;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if !axiom2_holds(|p, q, r| Some(t.get(p, q, r)), a, b, c, d).unwrap_or(true) {
                        return Err(TribracketError::Axiom2([a, b, c, d]));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_invertibility(t: &Cube<usize>) -> Result<(), TribracketError> {
    let n = t.size();
    let families: [(Invertibility, fn(usize, usize, usize) -> (usize, usize, usize)); 3] = [
        (Invertibility::Right, |p, q, free| (p, q, free)),
        (Invertibility::Center, |p, q, free| (p, free, q)),
        (Invertibility::Left, |p, q, free| (free, p, q)),
    ];
    for (kind, place) in families {
        for p in 0..n {
            for q in 0..n {
                let mut seen: Vec<Option<usize>> = alloc::vec![None; n];
                for free in 0..n {
                    let (a, b, c) = place(p, q, free);
                    let v = t.get(a, b, c);
                    if let Some(prev) = seen[v] {
                        return Err(TribracketError::NotInvertible {
                            kind,
                            fixed: (p, q),
                            args: (prev, free),
                            value: v,
                        });
                    }
                    seen[v] = Some(free);
                }
            }
        }
    }
    Ok(())
}

/// Axiom (ii) for one quadruple on a possibly partial table; `None` when some
/// needed entry is not known yet.
#[inline]
pub(crate) fn axiom2_holds(
    t: impl Fn(usize, usize, usize) -> Option<usize>,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> Option<bool> {
    let abc = t(a, b, c)?;
    let abd = t(a, b, d)?;
    let acd = t(a, c, d)?;
    let first = t(b, abc, abd)?;
    let second = t(c, abc, acd)?;
    if first != second {
        return Some(false);
    }
    let third = t(d, abd, acd)?;
    Some(first == third)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group table must be {expected} entries, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("group table entry {value} is out of range")]
    OutOfRange { value: usize },
    #[error("not associative at ({}, {}, {})", .0 + 1, .1 + 1, .2 + 1)]
    NotAssociative(usize, usize, usize),
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {} has no inverse", .0 + 1)]
    NoInverse(usize),
    #[error("a group needs at least one element")]
    Empty,
}

/// A finite group given by its multiplication table on `{0..n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
}

impl Group {
    /// `table[g * n + h] = g h`, 0-based.
    pub fn new(order: usize, table: Vec<usize>) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::Empty);
        }
        if table.len() != order * order {
            return Err(GroupError::Shape { expected: order * order, found: table.len() });
        }
        if let Some(&value) = table.iter().find(|&&v| v >= order) {
            return Err(GroupError::OutOfRange { value });
        }
        let mul = |g: usize, h: usize| table[g * order + h];
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let identity =
            (0..order).find(|&e| (0..order).all(|g| mul(e, g) == g && mul(g, e) == g)).ok_or(GroupError::NoIdentity)?;
        let mut inverses = Vec::with_capacity(order);
        for g in 0..order {
            let inv =
                (0..order).find(|&h| mul(g, h) == identity && mul(h, g) == identity).ok_or(GroupError::NoInverse(g))?;
            inverses.push(inv);
        }
        Ok(Group { order, table, identity, inverses })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        Self::new(n, table).expect("cyclic group table is valid")
    }

    /// The symmetric group on `k` letters, permutations in lexicographic order,
    /// with `(g h)(i) = g(h(i))`.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &[usize]| perms.iter().position(|q| q.as_slice() == p).expect("closed under composition");
        let n = perms.len();
        let mut table = Vec::with_capacity(n * n);
        for g in &perms {
            for h in &perms {
                let gh: Vec<usize> = (0..k).map(|i| g[h[i]]).collect();
                table.push(index(&gh));
            }
        }
        Self::new(n, table).expect("permutation table is valid")
    }

    /// Direct product; `(g, h)` is element `g * |H| + h`.
    pub fn product(g: &Group, h: &Group) -> Self {
        let (m, n) = (g.order, h.order);
        let mut table = Vec::with_capacity(m * n * m * n);
        for x in 0..m * n {
            for y in 0..m * n {
                table.push(g.mul(x / n, y / n) * n + h.mul(x % n, y % n));
            }
        }
        Self::new(m * n, table).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    #[inline]
    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..self.order).all(|h| self.mul(g, h) == self.mul(h, g)))
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut alloc::vec![false; k], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) const THREE_ELEMENT: [usize; 27] = [
        1, 3, 2, 2, 1, 3, 3, 2, 1, //
        2, 1, 3, 3, 2, 1, 1, 3, 2, //
        3, 2, 1, 1, 3, 2, 2, 1, 3,
    ];

    #[test]
    fn three_element_example_is_valid() {
        let t = Tribracket::from_one_based(3, &THREE_ELEMENT).unwrap();
        // [2,[1,2,3],[1,2,1]] = [2,3,2] = 3
        assert_eq!(t.op(0, 1, 2), 2);
        assert_eq!(t.op(0, 1, 0), 1);
        assert_eq!(t.op(1, 2, 1), 2);
        assert_eq!(t.op(2, 2, 2), 2);
    }

    #[test]
    fn repeated_row_value_breaks_axiom_one() {
        let mut bad = THREE_ELEMENT;
        bad[1] = 1; // matrix 1, row 1 becomes [1, 1, 2]
        let err = Tribracket::from_one_based(3, &bad).unwrap_err();
        assert_eq!(
            err,
            TribracketError::NotInvertible { kind: Invertibility::Right, fixed: (0, 0), args: (0, 1), value: 0 }
        );
    }

    #[test]
    fn latin_but_not_axiom_two() {
        // a + b + c mod 3 is a Latin cube; axiom (ii) needs the coefficient of a to be -1.
        let cube = Cube::from_fn(3, |a, b, c| (a + b + c) % 3);
        assert!(matches!(validate_tribracket(&cube), Err(TribracketError::Axiom2(_))));
    }

    #[test]
    fn out_of_range_entry_is_malformed() {
        let err = Tribracket::from_one_based(2, &[1, 2, 2, 1, 2, 1, 1, 3]).unwrap_err();
        assert!(matches!(err, TribracketError::Malformed(MalformedTensor::Entry { value: 3, .. })));
        let err = Tribracket::from_one_based(2, &[1, 2, 2]).unwrap_err();
        assert!(matches!(err, TribracketError::Malformed(MalformedTensor::Shape { .. })));
    }

    #[test]
    fn alexander_examples() {
        let t = Tribracket::alexander(3, 1, 2).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(t.op(a, b, c), (a + b + 2 * c) % 3);
                }
            }
        }
        validate_tribracket(t.table()).unwrap();
        for n in 2..9u64 {
            let t = Tribracket::alexander(n, 1, 1).unwrap();
            for a in 0..n as usize {
                assert_eq!(t.op(a, a, a), a);
            }
        }
        assert!(Tribracket::alexander(8, 2, 1).is_err());
        assert!(Tribracket::alexander(1, 1, 1).is_err());
    }

    #[test]
    fn dehn_of_cyclic_is_alexander_one_one() {
        for n in 1..7 {
            let d = Tribracket::dehn(&Group::cyclic(n));
            if n >= 2 {
                assert_eq!(d, Tribracket::alexander(n as u64, 1, 1).unwrap());
            } else {
                assert_eq!(d.size(), 1);
                assert_eq!(d.op(0, 0, 0), 0);
            }
        }
    }

    #[test]
    fn groups_validate() {
        let s3 = Group::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(Group::new(2, vec![0, 1, 1, 1]), Err(GroupError::NoInverse(1)));
        assert_eq!(Group::new(2, vec![1, 0, 0, 0]).unwrap_err(), GroupError::NotAssociative(0, 0, 1));
        assert_eq!(Group::new(2, vec![0, 2, 1, 0]), Err(GroupError::OutOfRange { value: 2 }));
    }
}
