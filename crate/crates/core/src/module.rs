//! Tribracket modules: unit coefficients `x_{a,b,c}`, `y_{a,b,c}` in `Z_N`
//! satisfying the four families of module identities over every quadruple.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;
use thiserror::Error;

use crate::ring::{self, RingError};
use crate::tensor::Cube;
use crate::tribracket::{write_nested, Tribracket};

/// Which coefficient tensor an entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coefficient {
    X,
    Y,
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coefficient::X => "x",
            Coefficient::Y => "y",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("coefficient tensors must have {expected} entries each, found {found}")]
    Shape { expected: usize, found: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("{tensor}_({},{},{}) = {value} is not a unit", .position.0 + 1, .position.1 + 1, .position.2 + 1)]
    NotUnit { tensor: Coefficient, position: (usize, usize, usize), value: u64 },
    #[error("family {family}, equality {equality} fails at (a,b,c,d) = ({}, {}, {}, {})",
        .quad[0] + 1, .quad[1] + 1, .quad[2] + 1, .quad[3] + 1)]
    Equation { family: u8, equality: u8, quad: [usize; 4] },
}

/// A module over a tribracket with coefficients in `Z_N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XModule {
    base: Tribracket,
    modulus: u64,
    x: Cube<u64>,
    y: Cube<u64>,
}

impl XModule {
    pub fn new(base: Tribracket, modulus: u64, x: Cube<u64>, y: Cube<u64>) -> Result<Self, ModuleError> {
        validate_module(&base, &x, &y, modulus)?;
        Ok(XModule { base, modulus, x, y })
    }

    /// Flat row-major coefficient lists; residues are taken as written.
    pub fn from_flat(base: Tribracket, modulus: u64, x: &[u64], y: &[u64]) -> Result<Self, ModuleError> {
        let n = base.size();
        let expected = n * n * n;
        for t in [x, y] {
            if t.len() != expected {
                return Err(ModuleError::Shape { expected, found: t.len() });
            }
        }
        let x = Cube::from_flat(n, x.to_vec()).expect("length checked");
        let y = Cube::from_flat(n, y.to_vec()).expect("length checked");
        Self::new(base, modulus, x, y)
    }

    pub fn base(&self) -> &Tribracket {
        &self.base
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn x(&self, a: usize, b: usize, c: usize) -> u64 {
        self.x.get(a, b, c)
    }

    #[inline]
    pub fn y(&self, a: usize, b: usize, c: usize) -> u64 {
        self.y.get(a, b, c)
    }

    pub fn x_tensor(&self) -> &Cube<u64> {
        &self.x
    }

    pub fn y_tensor(&self) -> &Cube<u64> {
        &self.y
    }

    /// `x` entries followed by `y` entries; the key the search sorts by.
    pub fn flattened(&self) -> Vec<u64> {
        self.x.as_flat().iter().chain(self.y.as_flat()).copied().collect()
    }

    /// True when neither tensor depends on its indices.
    pub fn is_constant(&self) -> bool {
        let same = |t: &Cube<u64>| t.as_flat().windows(2).all(|w| w[0] == w[1]);
        same(&self.x) && same(&self.y)
    }
}

impl fmt::Display for XModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{} x = ", self.modulus)?;
        write_nested(f, &self.x.to_nested())?;
        write!(f, " y = ")?;
        write_nested(f, &self.y.to_nested())
    }
}

/// Both tensors filled with the constants `x` and `y`.
pub fn constant_module(base: &Tribracket, x: u64, y: u64, modulus: u64) -> Result<XModule, ModuleError> {
    ring::check_modulus(modulus)?;
    let n = base.size();
    XModule::new(base.clone(), modulus, Cube::filled(n, x), Cube::filled(n, y))
}

/// Checks range and unit-ness of every entry, then every compiled identity in
/// quadruple order. Reports the first failure.
pub fn validate_module(base: &Tribracket, x: &Cube<u64>, y: &Cube<u64>, modulus: u64) -> Result<(), ModuleError> {
    ring::check_modulus(modulus)?;
    let n = base.size();
    for t in [x, y] {
        if t.size() != n {
            return Err(ModuleError::Shape { expected: n * n * n, found: t.as_flat().len() });
        }
    }
    for (tensor, t) in [(Coefficient::X, x), (Coefficient::Y, y)] {
        for (i, &v) in t.as_flat().iter().enumerate() {
            if v >= modulus {
                return Err(RingError::OutOfRange { value: v, modulus }.into());
            }
            if ring::gcd(v, modulus) != 1 {
                return Err(ModuleError::NotUnit { tensor, position: t.coords(i), value: v });
            }
        }
    }
    let values: Vec<u64> = x.as_flat().iter().chain(y.as_flat()).copied().collect();
    for con in compile_constraints(base) {
        if !con.holds(&values, modulus) {
            return Err(ModuleError::Equation { family: con.family, equality: con.equality, quad: con.quad });
        }
    }
    Ok(())
}

/// A product of one to three coefficient variables with sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Monomial {
    negative: bool,
    len: u8,
    vars: [u32; 3],
}

impl Monomial {
    fn new(negative: bool, vars: &[u32]) -> Self {
        let mut v = [0; 3];
        v[..vars.len()].copy_from_slice(vars);
        Monomial { negative, len: vars.len() as u8, vars: v }
    }

    fn vars(&self) -> &[u32] {
        &self.vars[..self.len as usize]
    }
}

/// One scalar identity `lhs == rhs` tagged with where it came from.
#[derive(Debug, Clone)]
struct Constraint {
    lhs: Vec<Monomial>,
    rhs: Vec<Monomial>,
    family: u8,
    equality: u8,
    quad: [usize; 4],
}

impl Constraint {
    fn vars(&self) -> impl Iterator<Item = u32> + '_ {
        self.lhs.iter().chain(&self.rhs).flat_map(|m| m.vars().iter().copied())
    }

    fn holds(&self, values: &[u64], modulus: u64) -> bool {
        let eval = |side: &[Monomial]| -> i128 {
            let m = modulus as i128;
            let mut acc = 0i128;
            for mono in side {
                let mut p = 1i128;
                for &v in mono.vars() {
                    p = p * values[v as usize] as i128 % m;
                }
                acc += if mono.negative { -p } else { p };
            }
            acc.rem_euclid(m)
        };
        eval(&self.lhs) == eval(&self.rhs)
    }
}

/// All eight identities for every quadruple, in lexicographic quadruple order
/// then family order. Variable `i < n^3` is `x` at flat index `i`; the `y`
/// entries follow.
fn compile_constraints(base: &Tribracket) -> Vec<Constraint> {
    let n = base.size();
    let cells = n * n * n;
    let t = base.table();
    let xv = |a: usize, b: usize, c: usize| t.index(a, b, c) as u32;
    let yv = |a: usize, b: usize, c: usize| (cells + t.index(a, b, c)) as u32;
    let pos = |vars: &[u32]| Monomial::new(false, vars);
    let neg = |vars: &[u32]| Monomial::new(true, vars);
    let mut out = Vec::with_capacity(8 * cells * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let (abc, abd, acd) = (base.op(a, b, c), base.op(a, b, d), base.op(a, c, d));
                    let (xb, yb) = (xv(b, abc, abd), yv(b, abc, abd));
                    let (xc, yc) = (xv(c, abc, acd), yv(c, abc, acd));
                    let (xd, yd) = (xv(d, abd, acd), yv(d, abd, acd));
                    let (x_abc, y_abc) = (xv(a, b, c), yv(a, b, c));
                    let (x_abd, y_abd) = (xv(a, b, d), yv(a, b, d));
                    let (x_acd, y_acd) = (xv(a, c, d), yv(a, c, d));
                    let families: [[Vec<Monomial>; 3]; 4] = [
                        [
                            vec![pos(&[xc, x_abc])],
                            vec![pos(&[xd, x_abd])],
                            vec![pos(&[xb, x_abc]), pos(&[yb, x_abd]), neg(&[xb, yb])],
                        ],
                        [
                            vec![pos(&[yc, y_acd])],
                            vec![pos(&[yb, y_abd])],
                            vec![pos(&[xd, y_abd]), pos(&[yd, y_acd]), neg(&[xd, yd])],
                        ],
                        [
                            vec![pos(&[xb, y_abc])],
                            vec![pos(&[yd, x_acd])],
                            vec![pos(&[xc, y_abc]), pos(&[yc, x_acd]), neg(&[xc, yc])],
                        ],
                        [
                            vec![pos(&[xc, x_abc, y_abc]), pos(&[yc, x_acd, y_acd])],
                            vec![pos(&[xb, x_abc, y_abc]), pos(&[yb, x_abd, y_abd])],
                            vec![pos(&[xd, x_abd, y_abd]), pos(&[yd, x_acd, y_acd])],
                        ],
                    ];
                    for (f, [e0, e1, e2]) in families.into_iter().enumerate() {
                        let family = f as u8 + 1;
                        let quad = [a, b, c, d];
                        out.push(Constraint { lhs: e0, rhs: e1.clone(), family, equality: 1, quad });
                        out.push(Constraint { lhs: e1, rhs: e2, family, equality: 2, quad });
                    }
                }
            }
        }
    }
    out
}

/// Backtracking search for modules over a fixed tribracket and modulus.
///
/// Constraints are compiled once. Variables are visited in a greedy
/// order that completes as many constraints as early as possible, and each
/// constraint is checked at the step that assigns its last variable.
#[derive(Debug, Clone)]
pub struct ModuleSearch {
    base: Tribracket,
    modulus: u64,
    pins: Vec<Option<u64>>,
}

impl ModuleSearch {
    pub fn new(base: &Tribracket, modulus: u64) -> Result<Self, ModuleError> {
        ring::check_modulus(modulus)?;
        let n = base.size();
        Ok(ModuleSearch { base: base.clone(), modulus, pins: vec![None; 2 * n * n * n] })
    }

    /// Fixes one entry (0-based position). A non-unit pin yields no modules.
    pub fn pin(mut self, tensor: Coefficient, a: usize, b: usize, c: usize, value: u64) -> Self {
        let n = self.base.size();
        let offset = match tensor {
            Coefficient::X => 0,
            Coefficient::Y => n * n * n,
        };
        self.pins[offset + self.base.table().index(a, b, c)] = Some(value);
        self
    }

    /// Fixes every entry of both tensors to the given constants.
    pub fn pin_constant(mut self, x: u64, y: u64) -> Self {
        let half = self.pins.len() / 2;
        for (i, p) in self.pins.iter_mut().enumerate() {
            *p = Some(if i < half { x } else { y });
        }
        self
    }

    /// Visits modules in search order (deterministic, not sorted).
    pub fn for_each<B>(&self, mut visit: impl FnMut(XModule) -> ControlFlow<B>) -> ControlFlow<B> {
        let n = self.base.size();
        let cells = n * n * n;
        let nvars = 2 * cells;
        let constraints = compile_constraints(&self.base);
        let order = variable_order(nvars, &constraints);
        let mut rank = vec![0usize; nvars];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); nvars];
        for (ci, con) in constraints.iter().enumerate() {
            let last = con.vars().map(|v| rank[v as usize]).max().expect("constraints have variables");
            checks[last].push(ci);
        }
        let units = ring::units(self.modulus);
        let domains: Vec<Vec<u64>> = order
            .iter()
            .map(|&v| match self.pins[v] {
                Some(p) if p < self.modulus && ring::gcd(p, self.modulus) == 1 => vec![p],
                Some(_) => Vec::new(),
                None => units.clone(),
            })
            .collect();
        let mut values = vec![0u64; nvars];
        let ctx =
            Ctx { order: &order, checks: &checks, constraints: &constraints, domains: &domains, modulus: self.modulus };
        ctx.run(0, &mut values, &mut |vals: &[u64]| {
            let x = Cube::from_flat(n, vals[..cells].to_vec()).expect("size");
            let y = Cube::from_flat(n, vals[cells..].to_vec()).expect("size");
            visit(XModule { base: self.base.clone(), modulus: self.modulus, x, y })
        })
    }

    /// Every module, sorted lexicographically on the flattened `(x, y)` pair.
    pub fn collect_sorted(&self) -> Vec<XModule> {
        let mut all = Vec::new();
        let _ = self.for_each(|m| {
            all.push(m);
            ControlFlow::<()>::Continue(())
        });
        all.sort_by_cached_key(XModule::flattened);
        all
    }
}

struct Ctx<'a> {
    order: &'a [usize],
    checks: &'a [Vec<usize>],
    constraints: &'a [Constraint],
    domains: &'a [Vec<u64>],
    modulus: u64,
}

impl Ctx<'_> {
    fn run<B>(
        &self,
        step: usize,
        values: &mut [u64],
        emit: &mut impl FnMut(&[u64]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        if step == self.order.len() {
            return emit(values);
        }
        let var = self.order[step];
        for &v in &self.domains[step] {
            values[var] = v;
            if self.checks[step].iter().all(|&ci| self.constraints[ci].holds(values, self.modulus)) {
                self.run(step + 1, values, emit)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Greedy ordering: next is the variable that completes the most constraints,
/// then the one that brings the most constraints within one variable of
/// completion, then the lowest index.
fn variable_order(nvars: usize, constraints: &[Constraint]) -> Vec<usize> {
    let con_vars: Vec<Vec<usize>> = constraints
        .iter()
        .map(|c| {
            let mut v: Vec<usize> = c.vars().map(|v| v as usize).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let mut var_cons: Vec<Vec<usize>> = vec![Vec::new(); nvars];
    for (ci, vars) in con_vars.iter().enumerate() {
        for &v in vars {
            var_cons[v].push(ci);
        }
    }
    let mut remaining: Vec<usize> = con_vars.iter().map(Vec::len).collect();
    let mut placed = vec![false; nvars];
    let mut order = Vec::with_capacity(nvars);
    for _ in 0..nvars {
        let best = (0..nvars)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let completes = var_cons[v].iter().filter(|&&c| remaining[c] == 1).count();
                let nearly = var_cons[v].iter().filter(|&&c| remaining[c] == 2).count();
                (completes, nearly, core::cmp::Reverse(v))
            })
            .expect("unplaced variable left");
        placed[best] = true;
        order.push(best);
        for &c in &var_cons[best] {
            remaining[c] -= 1;
        }
    }
    order
}

/// Every module over `(base, Z_N)` in lexicographic order of the flattened
/// `(x, y)` pair, truncated to `limit` when given.
pub fn search_modules(base: &Tribracket, modulus: u64, limit: Option<usize>) -> Result<Vec<XModule>, ModuleError> {
    let mut all = ModuleSearch::new(base, modulus)?.collect_sorted();
    if let Some(k) = limit {
        all.truncate(k);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x2() -> Tribracket {
        Tribracket::from_one_based(2, &[1, 2, 2, 1, 2, 1, 1, 2]).unwrap()
    }

    fn v() -> XModule {
        XModule::from_flat(x2(), 3, &[2, 2, 2, 1, 1, 2, 2, 2], &[1, 2, 2, 2, 2, 2, 2, 1]).unwrap()
    }

    #[test]
    fn example_module_validates() {
        let m = v();
        assert!(!m.is_constant());
        assert_eq!(m.x(1, 1, 1), 2);
    }

    #[test]
    fn z8_module_validates() {
        XModule::from_flat(x2(), 8, &[1, 3, 1, 7, 7, 1, 3, 1], &[1, 5, 1, 1, 1, 1, 5, 1]).unwrap();
    }

    #[test]
    fn non_unit_is_reported_first() {
        let err = XModule::from_flat(x2(), 8, &[1, 3, 1, 7, 7, 1, 3, 2], &[1; 8]).unwrap_err();
        assert_eq!(err, ModuleError::NotUnit { tensor: Coefficient::X, position: (1, 1, 1), value: 2 });
    }

    #[test]
    fn flipped_entry_breaks_an_identity() {
        let err = XModule::from_flat(x2(), 3, &[1, 2, 2, 1, 1, 2, 2, 2], &[1, 2, 2, 2, 2, 2, 2, 1]).unwrap_err();
        assert!(matches!(err, ModuleError::Equation { .. }), "{err}");
    }

    #[test]
    fn constants() {
        let m = constant_module(&x2(), 1, 2, 3).unwrap();
        assert!(m.is_constant());
        assert!(constant_module(&x2(), 3, 1, 6).is_err());
    }

    #[test]
    fn search_over_z2_is_all_ones() {
        let all = search_modules(&x2(), 2, None).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].flattened().iter().all(|&v| v == 1));
    }

    #[test]
    fn search_finds_example_and_is_sorted() {
        let all = search_modules(&x2(), 3, None).unwrap();
        assert!(all.contains(&v()));
        for w in all.windows(2) {
            assert!(w[0].flattened() < w[1].flattened());
        }
        let first_two = search_modules(&x2(), 3, Some(2)).unwrap();
        assert_eq!(first_two[..], all[..2]);
    }

    #[test]
    fn pinned_constant_search() {
        let found = ModuleSearch::new(&x2(), 3).unwrap().pin_constant(2, 1).collect_sorted();
        assert_eq!(found, [constant_module(&x2(), 2, 1, 3).unwrap()]);
        assert!(ModuleSearch::new(&x2(), 6).unwrap().pin_constant(2, 1).collect_sorted().is_empty());
    }
}
