use alloc::vec::Vec;

/// An `n x n x n` array indexed `(matrix, row, column)`, stored flat in
/// row-major order. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube<T> {
    size: usize,
    data: Vec<T>,
}

impl<T: Copy> Cube<T> {
    pub fn filled(size: usize, value: T) -> Self {
        Cube { size, data: alloc::vec![value; size * size * size] }
    }

    /// `None` unless `data.len() == size^3`.
    pub fn from_flat(size: usize, data: Vec<T>) -> Option<Self> {
        (data.len() == size * size * size).then_some(Cube { size, data })
    }

    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(size * size * size);
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    data.push(f(a, b, c));
                }
            }
        }
        Cube { size, data }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn index(&self, a: usize, b: usize, c: usize) -> usize {
        (a * self.size + b) * self.size + c
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> T {
        self.data[self.index(a, b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: T) {
        let i = self.index(a, b, c);
        self.data[i] = v;
    }

    pub fn as_flat(&self) -> &[T] {
        &self.data
    }

    /// Nested `matrix -> row -> column` representation.
    pub fn to_nested(&self) -> Vec<Vec<Vec<T>>> {
        let n = self.size;
        (0..n).map(|a| (0..n).map(|b| (0..n).map(|c| self.get(a, b, c)).collect()).collect()).collect()
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(&T) -> U) -> Cube<U> {
        Cube { size: self.size, data: self.data.iter().map(f).collect() }
    }

    /// Inverse of [`Cube::index`].
    pub fn coords(&self, i: usize) -> (usize, usize, usize) {
        let n = self.size;
        (i / (n * n), (i / n) % n, i % n)
    }
}
