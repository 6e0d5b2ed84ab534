//! Region colorings, the counting invariant and its module enhancement.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;
use thiserror::Error;

use crate::diagram::{Diagram, Roles};
use crate::linalg::{Count, ModMatrix};
use crate::module::XModule;
use crate::polynomial::Polynomial;
use crate::ring::{self, RingError};
use crate::tribracket::{Tribracket, TribracketError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Tribracket(#[from] TribracketError),
    #[error("coloring has {found} regions, diagram has {expected}")]
    RegionCount { expected: usize, found: usize },
    #[error("coloring breaks the relation at crossing {crossing}")]
    NotAColoring { crossing: usize },
}

/// Element (0-based) assigned to each region.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coloring(pub Vec<usize>);

impl Coloring {
    pub fn color(&self, region: usize) -> usize {
        self.0[region]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Whether every crossing relation `[f(a),f(b),f(c)] = f(d)` holds.
    pub fn check(&self, t: &Tribracket, d: &Diagram) -> Result<(), InvariantError> {
        if self.0.len() != d.num_regions() {
            return Err(InvariantError::RegionCount { expected: d.num_regions(), found: self.0.len() });
        }
        for (x, r) in d.roles().iter().enumerate() {
            let f = |i: usize| self.0[i];
            if f(r.a) >= t.size() || f(r.b) >= t.size() || f(r.c) >= t.size() || t.op(f(r.a), f(r.b), f(r.c)) != f(r.d)
            {
                return Err(InvariantError::NotAColoring { crossing: x });
            }
        }
        Ok(())
    }
}

/// All colorings, in lexicographic order of the region assignment.
pub fn enumerate_colorings(t: &Tribracket, d: &Diagram) -> Vec<Coloring> {
    let mut out = Vec::new();
    let _ = for_each_coloring(t, d, |f| {
        out.push(Coloring(f.to_vec()));
        ControlFlow::<()>::Continue(())
    });
    out.sort_unstable();
    out
}

pub fn counting_invariant(t: &Tribracket, d: &Diagram) -> u64 {
    let mut count = 0u64;
    let _ = for_each_coloring(t, d, |_| {
        count += 1;
        ControlFlow::<()>::Continue(())
    });
    count
}

/// Visits colorings in search order: regions are branched in breadth-first
/// order from region 0, and any crossing whose unknown role is a single
/// region in a single slot has it filled in before branching again.
pub fn for_each_coloring<B>(
    t: &Tribracket,
    d: &Diagram,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let order = bfs_order(d);
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); d.num_regions()];
    for (x, r) in d.roles().iter().enumerate() {
        for reg in r.as_array() {
            if !touching[reg].contains(&x) {
                touching[reg].push(x);
            }
        }
    }
    let mut search =
        ColoringSearch { t, roles: d.roles(), touching, order, colors: vec![None; d.num_regions()], trail: Vec::new() };
    search.run(0, &mut visit)
}

struct ColoringSearch<'a> {
    t: &'a Tribracket,
    roles: &'a [Roles],
    touching: Vec<Vec<usize>>,
    order: Vec<usize>,
    colors: Vec<Option<usize>>,
    trail: Vec<usize>,
}

impl ColoringSearch<'_> {
    fn run<B>(&mut self, step: usize, visit: &mut impl FnMut(&[usize]) -> ControlFlow<B>) -> ControlFlow<B> {
        let Some(pos) = (step..self.order.len()).find(|&i| self.colors[self.order[i]].is_none()) else {
            let full: Vec<usize> = self.colors.iter().map(|c| c.expect("all assigned")).collect();
            return visit(&full);
        };
        let region = self.order[pos];
        for v in 0..self.t.size() {
            let mark = self.trail.len();
            if self.assign(region, v) {
                self.run(pos + 1, visit)?;
            }
            while self.trail.len() > mark {
                let r = self.trail.pop().expect("trail");
                self.colors[r] = None;
            }
        }
        ControlFlow::Continue(())
    }

    /// Assigns and propagates; false on contradiction.
    fn assign(&mut self, region: usize, v: usize) -> bool {
        self.colors[region] = Some(v);
        self.trail.push(region);
        let mut queue = VecDeque::from([region]);
        while let Some(r) = queue.pop_front() {
            for i in 0..self.touching[r].len() {
                let x = self.touching[r][i];
                match self.settle(x) {
                    Settle::Conflict => return false,
                    Settle::Derived(reg, val) => {
                        self.colors[reg] = Some(val);
                        self.trail.push(reg);
                        queue.push_back(reg);
                    }
                    Settle::Nothing => {}
                }
            }
        }
        true
    }

    fn settle(&self, x: usize) -> Settle {
        let r = self.roles[x];
        let slots = r.as_array();
        let vals = slots.map(|s| self.colors[s]);
        let unknown: Vec<usize> = (0..4).filter(|&i| vals[i].is_none()).collect();
        match unknown.as_slice() {
            [] => {
                let [a, b, c, d] = vals.map(|v| v.expect("known"));
                if self.t.op(a, b, c) == d {
                    Settle::Nothing
                } else {
                    Settle::Conflict
                }
            }
            &[i] => {
                let k = |j: usize| vals[j].expect("known");
                let v = match i {
                    0 => self.t.solve_left(k(1), k(2), k(3)),
                    1 => self.t.solve_center(k(0), k(2), k(3)),
                    2 => self.t.solve_right(k(0), k(1), k(3)),
                    _ => self.t.op(k(0), k(1), k(2)),
                };
                Settle::Derived(slots[i], v)
            }
            _ => Settle::Nothing,
        }
    }
}

enum Settle {
    Nothing,
    Conflict,
    Derived(usize, usize),
}

/// Regions in breadth-first order from region 0, two regions being adjacent
/// when they meet at a crossing. Unreached regions follow in index order.
fn bfs_order(d: &Diagram) -> Vec<usize> {
    let n = d.num_regions();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for r in d.roles() {
        let s = r.as_array();
        for &p in &s {
            for &q in &s {
                if p != q && !adj[p].contains(&q) {
                    adj[p].push(q);
                }
            }
        }
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(r) = queue.pop_front() {
            order.push(r);
            for &s in &adj[r] {
                if !seen[s] {
                    seen[s] = true;
                    queue.push_back(s);
                }
            }
        }
    }
    order
}

/// One relation `-xy a + x b + y c - d = 0` per crossing over the region
/// variables, with coefficients of coincident regions summed.
fn relation_matrix(d: &Diagram, modulus: u64, coeffs: impl Fn(usize) -> (u64, u64)) -> ModMatrix {
    let mut m = ModMatrix::zeros(modulus, d.num_crossings(), d.num_regions()).expect("modulus checked");
    for (x, r) in d.roles().iter().enumerate() {
        let (cx, cy) = coeffs(x);
        let xy = (cx as u128 * cy as u128 % modulus as u128) as u64;
        m.add_to(x, r.a, -(xy as i64));
        m.add_to(x, r.b, cx as i64);
        m.add_to(x, r.c, cy as i64);
        m.add_to(x, r.d, -1);
    }
    m
}

fn check_units(modulus: u64, x: u64, y: u64) -> Result<(), RingError> {
    ring::check_modulus(modulus)?;
    for v in [x, y] {
        if !ring::is_unit(v % modulus, modulus)? {
            return Err(RingError::NotUnit { value: v, modulus });
        }
    }
    Ok(())
}

/// Counting invariant of the Alexander tribracket on `Z_N`, as the size of
/// the solution space of the crossing relations.
pub fn alexander_counting(modulus: u64, x: u64, y: u64, d: &Diagram) -> Result<Count, InvariantError> {
    check_units(modulus, x, y)?;
    let (x, y) = (x % modulus, y % modulus);
    Ok(relation_matrix(d, modulus, |_| (x, y)).kernel_size())
}

/// The coefficient matrix of the sticker relations for one coloring: a row
/// per crossing and a column per region.
pub fn sticker_matrix(v: &XModule, d: &Diagram, f: &Coloring) -> Result<ModMatrix, InvariantError> {
    f.check(v.base(), d)?;
    let roles = d.roles();
    Ok(relation_matrix(d, v.modulus(), |x| {
        let r = roles[x];
        let (a, b, c) = (f.color(r.a), f.color(r.b), f.color(r.c));
        (v.x(a, b, c), v.y(a, b, c))
    }))
}

/// Kernel sizes of the sticker matrices over all colorings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enhancement {
    /// One entry per coloring, in the order of [`enumerate_colorings`].
    pub kernel_sizes: Vec<Count>,
}

impl Enhancement {
    pub fn multiset(&self) -> BTreeMap<Count, u64> {
        let mut m = BTreeMap::new();
        for &k in &self.kernel_sizes {
            *m.entry(k).or_insert(0) += 1;
        }
        m
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::from_exponents(self.kernel_sizes.iter().copied())
    }

    /// Number of colorings, the value at `u = 1`.
    pub fn total(&self) -> u64 {
        self.kernel_sizes.len() as u64
    }
}

pub fn module_enhancement(v: &XModule, d: &Diagram) -> Enhancement {
    let kernel_sizes = enumerate_colorings(v.base(), d)
        .iter()
        .map(|f| sticker_matrix(v, d, f).expect("enumerated colorings are valid").kernel_size())
        .collect();
    Enhancement { kernel_sizes }
}

/// For every coloring by the Alexander tribracket on `Z_N`, the minimal
/// number of generators of the submodule of `Z_N` spanned by its colors:
/// 0 when every region is 0, otherwise 1 since `Z_N` is cyclic.
pub fn alexander_image_enhancement(modulus: u64, x: u64, y: u64, d: &Diagram) -> Result<Vec<u32>, InvariantError> {
    check_units(modulus, x, y)?;
    let t = Tribracket::alexander(modulus, x, y)?;
    Ok(enumerate_colorings(&t, d).iter().map(|f| u32::from(f.as_slice().iter().any(|&c| c != 0))).collect())
}
