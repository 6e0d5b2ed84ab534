//! Exact linear algebra over `Z_N` for arbitrary `N >= 2`.
//!
//! Two independent routes count the solutions of a homogeneous system:
//! the Howell form computed directly over `Z_N`, and the Smith normal form
//! of the integer lift of the matrix. Over a prime modulus the Howell form
//! is the reduced row echelon form.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ring::{self, RingError};

/// Cardinality of a solution set. Kernel sizes of invariant-sized systems are
/// small, but `N^cols` style intermediate values are never formed.
pub type Count = u128;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelBackend {
    #[default]
    Howell,
    Smith,
}

impl ModMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Result<Self, RingError> {
        ring::check_modulus(modulus)?;
        Ok(ModMatrix { modulus, rows, cols, entries: vec![0; rows * cols] })
    }

    pub fn identity(modulus: u64, k: usize) -> Result<Self, RingError> {
        let mut m = Self::zeros(modulus, k, k)?;
        for i in 0..k {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    /// Builds a matrix from signed integer rows, reducing every entry into `[0, N)`.
    /// All rows must have `cols` entries.
    pub fn from_rows<R: AsRef<[i64]>>(modulus: u64, cols: usize, rows: &[R]) -> Result<Self, RingError> {
        let mut m = Self::zeros(modulus, rows.len(), cols)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "row {i} has {} entries, expected {cols}", row.len());
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, ring::reduce(v as i128, modulus));
            }
        }
        Ok(m)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    /// Sets an entry; `v` is reduced mod `N`.
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.cols + j] = v % self.modulus;
    }

    /// Adds a signed value to an entry, keeping it normalized.
    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        let cur = self.get(i, j) as i128;
        self.entries[i * self.cols + j] = ring::reduce(cur + v as i128, self.modulus);
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Canonical row form with the same row space.
    ///
    /// Returns the Howell form: nonzero rows with strictly increasing pivot
    /// columns, each pivot a divisor of `N`, entries above a pivot reduced
    /// below it. Zero rows pad the result back to the input row count.
    pub fn row_reduce(&self) -> ModMatrix {
        let basis = howell_rows(self);
        let rows = basis.len().max(self.rows);
        let mut out = ModMatrix { modulus: self.modulus, rows, cols: self.cols, entries: vec![0; rows * self.cols] };
        for (i, r) in basis.iter().enumerate() {
            out.entries[i * self.cols..(i + 1) * self.cols].copy_from_slice(r);
        }
        out
    }

    /// Number of vectors `v` in `(Z_N)^cols` with `A v = 0`.
    pub fn kernel_size(&self) -> Count {
        self.kernel_size_with(KernelBackend::Howell)
    }

    pub fn kernel_size_with(&self, backend: KernelBackend) -> Count {
        match backend {
            KernelBackend::Howell => kernel_size_howell(self),
            KernelBackend::Smith => kernel_size_smith(self),
        }
    }

    /// Dimension of the kernel over the field `Z_p`.
    pub fn kernel_rank(&self) -> Result<usize, LinalgError> {
        if !ring::is_prime(self.modulus) {
            return Err(LinalgError::CompositeModulus(self.modulus));
        }
        Ok(self.cols - howell_rows(self).len())
    }

    /// The row space contains `v` (decided by back-substitution against the Howell form).
    pub fn row_space_contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.cols);
        let n = self.modulus;
        let mut rest: Vec<u64> = v.iter().map(|&e| e % n).collect();
        for r in howell_rows(self) {
            let Some(p) = r.iter().position(|&e| e != 0) else {
                continue;
            };
            let pivot = r[p];
            if !rest[p].is_multiple_of(pivot) {
                return false;
            }
            let q = rest[p] / pivot;
            for (j, e) in r.iter().enumerate() {
                rest[j] = sub_mod(rest[j], mul_mod(q, *e, n), n);
            }
        }
        rest.iter().all(|&e| e == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("kernel rank needs a prime modulus, got {0}")]
    CompositeModulus(u64),
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModMatrix(mod {}, {}x{}) {:?}", self.modulus, self.rows, self.cols, self.to_rows())
    }
}

impl fmt::Display for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row = self.row(i);
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn sub_mod(a: u64, b: u64, n: u64) -> u64 {
    (a + n - b % n) % n
}

/// `(s*r + t*q)` computed entrywise mod `n` with signed coefficients.
fn combine(s: i128, r: &[u64], t: i128, q: &[u64], n: u64) -> Vec<u64> {
    r.iter().zip(q).map(|(&a, &b)| ring::reduce(s * a as i128 + t * b as i128, n)).collect()
}

/// Nonzero rows of the Howell form.
fn howell_rows(a: &ModMatrix) -> Vec<Vec<u64>> {
    let n = a.modulus;
    let cols = a.cols;
    let mut rows: Vec<Vec<u64>> = a.to_rows().into_iter().filter(|r| r.iter().any(|&e| e != 0)).collect();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows.len() {
            break;
        }
        // Collect the gcd of column c (rows r..) into row r.
        for i in r + 1..rows.len() {
            let (x, y) = (rows[r][c], rows[i][c]);
            if y == 0 {
                continue;
            }
            let (g, s, t) = ring::ext_gcd(x as i128, y as i128);
            let (u, v) = (-(y as i128) / g, x as i128 / g);
            let top = combine(s, &rows[r], t, &rows[i], n);
            let bottom = combine(u, &rows[r], v, &rows[i], n);
            rows[r] = top;
            rows[i] = bottom;
        }
        if rows[r][c] == 0 {
            continue;
        }
        let unit = ring::normalizing_unit(rows[r][c], n);
        for e in rows[r].iter_mut() {
            *e = mul_mod(*e, unit, n);
        }
        let pivot = rows[r][c];
        for i in 0..r {
            let q = rows[i][c] / pivot;
            if q != 0 {
                let pr = rows[r].clone();
                for (e, p) in rows[i].iter_mut().zip(&pr) {
                    *e = sub_mod(*e, mul_mod(q, *p, n), n);
                }
            }
        }
        // The annihilator multiple of the pivot row vanishes in column c but
        // may carry information for later columns.
        let ann: Vec<u64> = rows[r].iter().map(|&e| mul_mod(e, n / pivot, n)).collect();
        if ann.iter().any(|&e| e != 0) {
            rows.push(ann);
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

fn kernel_size_howell(a: &ModMatrix) -> Count {
    let n = a.modulus as Count;
    let basis = howell_rows(a);
    let mut count: Count = 1;
    for _ in 0..a.cols - basis.len() {
        count = count.checked_mul(n).expect("kernel size overflows u128");
    }
    for r in &basis {
        let pivot = *r.iter().find(|&&e| e != 0).expect("Howell rows are nonzero");
        count = count.checked_mul(pivot as Count).expect("kernel size overflows u128");
    }
    count
}

/// Diagonal of the Smith normal form of the integer matrix `m`
/// (nonzero elementary divisors only, in order).
pub fn smith_diagonal(m: &[Vec<i128>], cols: usize) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let rows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry in the trailing block becomes the pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        let p = a[t][t];
        for i in t + 1..rows {
            let q = a[i][t].div_euclid(p);
            if q != 0 {
                for j in t..cols {
                    a[i][j] = checked_sub_mul(a[i][j], q, a[t][j]);
                }
            }
            clean &= a[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = a[t][j].div_euclid(p);
            if q != 0 {
                for row in a.iter_mut().skip(t) {
                    row[j] = checked_sub_mul(row[j], q, row[t]);
                }
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // Divisibility of the trailing block.
        let mut bad = None;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if a[i][j] % p != 0 {
                    bad = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = bad {
            for j in t..cols {
                a[t][j] = a[t][j].checked_add(a[i][j]).expect("Smith normal form overflow");
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

fn checked_sub_mul(x: i128, q: i128, y: i128) -> i128 {
    q.checked_mul(y).and_then(|qy| x.checked_sub(qy)).expect("Smith normal form overflow")
}

fn kernel_size_smith(a: &ModMatrix) -> Count {
    let n = a.modulus;
    let lift: Vec<Vec<i128>> = a.to_rows().into_iter().map(|r| r.into_iter().map(|e| e as i128).collect()).collect();
    let diag = smith_diagonal(&lift, a.cols);
    let mut count: Count = 1;
    for _ in 0..a.cols - diag.len() {
        count = count.checked_mul(n as Count).expect("kernel size overflows u128");
    }
    for d in diag {
        let g = ring::gcd((d % n as i128) as u64, n);
        count = count.checked_mul(g as Count).expect("kernel size overflows u128");
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(n: u64, cols: usize, rows: &[&[i64]]) -> ModMatrix {
        ModMatrix::from_rows(n, cols, rows).unwrap()
    }

    #[test]
    fn trefoil_alexander_reduction() {
        let a = m(3, 5, &[&[1, 1, 2, 0, 2], &[1, 0, 1, 2, 2], &[1, 2, 0, 1, 2]]);
        // The second input row is already [1,0,1,2,2], so the first reduced
        // row keeps a 1 in column 3.
        let expected = m(3, 5, &[&[1, 0, 1, 2, 2], &[0, 1, 1, 1, 0], &[0, 0, 0, 0, 0]]);
        assert_eq!(a.row_reduce(), expected);
        assert!(!a.row_reduce().row_space_contains(&[1, 0, 0, 2, 2]));
        assert_eq!(a.kernel_size(), 27);
        assert_eq!(a.kernel_rank(), Ok(3));
    }

    #[test]
    fn sticker_system_from_trefoil_example() {
        let a = m(3, 5, &[&[1, 1, 2, 2, 0], &[0, 1, 2, 1, 2], &[2, 1, 2, 0, 1]]);
        assert_eq!(a.kernel_size(), 27);
        assert_eq!(a.kernel_size_with(KernelBackend::Smith), 27);
    }

    #[test]
    fn identity_and_zero() {
        for n in [2, 3, 6, 8] {
            let id = ModMatrix::identity(n, 4).unwrap();
            assert_eq!(id.row_reduce(), id);
            assert_eq!(id.kernel_size(), 1);
            let z = ModMatrix::zeros(n, 2, 5).unwrap();
            assert_eq!(z.row_reduce(), z);
            assert_eq!(z.kernel_size(), (n as u128).pow(5));
        }
        assert_eq!(ModMatrix::identity(5, 3).unwrap().kernel_rank(), Ok(0));
        assert_eq!(ModMatrix::zeros(7, 2, 5).unwrap().kernel_rank(), Ok(5));
    }

    #[test]
    fn empty_system() {
        let a = ModMatrix::zeros(3, 0, 4).unwrap();
        assert_eq!(a.kernel_size(), 81);
        assert_eq!(a.kernel_size_with(KernelBackend::Smith), 81);
    }

    #[test]
    fn composite_rank_rejected() {
        let a = ModMatrix::identity(8, 2).unwrap();
        assert_eq!(a.kernel_rank(), Err(LinalgError::CompositeModulus(8)));
    }

    #[test]
    fn howell_needs_annihilator_rows() {
        // Over Z_4 the row [2, 1] generates [0, 2] as well; kernel has 4 elements.
        let a = m(4, 2, &[&[2, 1]]);
        let h = a.row_reduce();
        assert_eq!(h.rows(), 2);
        assert!(h.row_space_contains(&[0, 2]));
        assert!(!h.row_space_contains(&[0, 1]));
        assert_eq!(a.kernel_size(), 4);
        assert_eq!(a.kernel_size_with(KernelBackend::Smith), 4);
    }

    #[test]
    fn non_power_kernel_sizes_mod_8() {
        // (4,0,2,2) has additive order 4 next to a unimodular row: 8^4/32.
        let a = m(8, 4, &[&[5, 7, 3, 1], &[1, 7, 1, 7]]);
        assert_eq!(a.kernel_size(), 128);
        assert_eq!(a.kernel_size_with(KernelBackend::Smith), 128);
    }

    #[test]
    fn smith_diagonal_small() {
        let d = smith_diagonal(&[alloc::vec![2, 4, 4], alloc::vec![-6, 6, 12], alloc::vec![10, -4, -16]], 3);
        assert_eq!(d, alloc::vec![2, 6, 12]);
    }
}
