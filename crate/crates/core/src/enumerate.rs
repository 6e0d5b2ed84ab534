//! Exhaustive enumeration of tribrackets of a given size.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::tensor::Cube;
use crate::tribracket::{axiom2_holds, Tribracket};

/// Every tribracket on `n` elements, in lexicographic order of the flattened
/// tensor. Practical for `n <= 4`.
pub fn enumerate_tribrackets(n: usize) -> Vec<Tribracket> {
    let mut out = Vec::new();
    let _ = for_each_tribracket(n, |t| {
        out.push(t.clone());
        ControlFlow::<()>::Continue(())
    });
    out
}

/// Visits tribrackets in the same order as [`enumerate_tribrackets`]; the
/// visitor can stop the search early.
pub fn for_each_tribracket<B>(n: usize, mut visit: impl FnMut(&Tribracket) -> ControlFlow<B>) -> ControlFlow<B> {
    if n == 0 {
        return ControlFlow::Continue(());
    }
    let mut search = Search {
        n,
        cells: vec![None; n * n * n],
        row_used: vec![0u32; n * n],
        col_used: vec![0u32; n * n],
        pillar_used: vec![0u32; n * n],
    };
    search.run(0, &mut visit)
}

struct Search {
    n: usize,
    cells: Vec<Option<usize>>,
    // Bitmasks of values already used along each line of the cube:
    // row (a,b) varies c, col (a,c) varies b, pillar (b,c) varies a.
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    pillar_used: Vec<u32>,
}

impl Search {
    fn run<B>(&mut self, pos: usize, visit: &mut impl FnMut(&Tribracket) -> ControlFlow<B>) -> ControlFlow<B> {
        let n = self.n;
        if pos == n * n * n {
            let table =
                Cube::from_flat(n, self.cells.iter().map(|c| c.expect("complete")).collect()).expect("full cube");
            return visit(&Tribracket::from_valid(table));
        }
        let (a, b, c) = (pos / (n * n), (pos / n) % n, pos % n);
        let used = self.row_used[a * n + b] | self.col_used[a * n + c] | self.pillar_used[b * n + c];
        for v in 0..n {
            if used & (1 << v) != 0 {
                continue;
            }
            self.assign(a, b, c, Some(v));
            if self.consistent(a) {
                self.run(pos + 1, visit)?;
            }
            self.assign(a, b, c, None);
        }
        ControlFlow::Continue(())
    }

    fn assign(&mut self, a: usize, b: usize, c: usize, v: Option<usize>) {
        let n = self.n;
        let i = (a * n + b) * n + c;
        let bit = match (self.cells[i], v) {
            (None, Some(v)) => 1u32 << v,
            (Some(old), None) => 1u32 << old,
            _ => unreachable!("assign toggles a cell"),
        };
        self.cells[i] = v;
        self.row_used[a * n + b] ^= bit;
        self.col_used[a * n + c] ^= bit;
        self.pillar_used[b * n + c] ^= bit;
    }

    /// Axiom (ii) on every quadruple whose entries are all known. Matrices
    /// beyond `upto` are still empty, so quadruples with a larger first
    /// argument cannot be decided yet.
    fn consistent(&self, upto: usize) -> bool {
        let n = self.n;
        let t = |p: usize, q: usize, r: usize| self.cells[(p * n + q) * n + r];
        for a in 0..=upto {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        if axiom2_holds(t, a, b, c, d) == Some(false) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}
