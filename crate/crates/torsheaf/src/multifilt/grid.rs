//! Dense per-cone tables over compressed breakpoint grids.
//!
//! A table stores, for each axis, the sorted coordinates at which the value
//! may change, and one palette id per grid cell. The value at a class `mu`
//! is the cell whose lower corner is the largest breakpoint `<= mu` on every
//! axis; below the first breakpoint of any axis the value is zero.

use std::collections::HashMap;

use num_rational::BigRational;

use super::subspace::Subspace;

pub type Sub = Subspace<BigRational>;

pub(crate) const ZERO: u32 = 0;
pub(crate) const FULL: u32 = 1;

/// Interned subspaces with cached lattice operations.
#[derive(Clone, Debug)]
pub(crate) struct Palette {
    items: Vec<Sub>,
    index: HashMap<Sub, u32>,
    meets: HashMap<(u32, u32), u32>,
    joins: HashMap<(u32, u32), u32>,
}

impl Palette {
    pub fn new(rank: usize) -> Self {
        let mut p = Palette {
            items: Vec::new(),
            index: HashMap::new(),
            meets: HashMap::new(),
            joins: HashMap::new(),
        };
        p.intern(Sub::zero(rank));
        p.intern(Sub::full(rank));
        p
    }

    pub fn intern(&mut self, s: Sub) -> u32 {
        if let Some(&id) = self.index.get(&s) {
            return id;
        }
        let id = self.items.len() as u32;
        self.items.push(s.clone());
        self.index.insert(s, id);
        id
    }

    pub fn get(&self, id: u32) -> &Sub {
        &self.items[id as usize]
    }

    pub fn items(&self) -> &[Sub] {
        &self.items
    }

    pub fn dim(&self, id: u32) -> usize {
        self.items[id as usize].dim()
    }

    pub fn meet(&mut self, a: u32, b: u32) -> u32 {
        if a == b || b == FULL {
            return a;
        }
        if a == FULL {
            return b;
        }
        if a == ZERO || b == ZERO {
            return ZERO;
        }
        let key = (a.min(b), a.max(b));
        if let Some(&m) = self.meets.get(&key) {
            return m;
        }
        let s = self.get(a).meet(self.get(b));
        let id = self.intern(s);
        self.meets.insert(key, id);
        id
    }

    pub fn join(&mut self, a: u32, b: u32) -> u32 {
        if a == b || b == ZERO {
            return a;
        }
        if a == ZERO {
            return b;
        }
        if a == FULL || b == FULL {
            return FULL;
        }
        let key = (a.min(b), a.max(b));
        if let Some(&m) = self.joins.get(&key) {
            return m;
        }
        let s = self.get(a).join(self.get(b));
        let id = self.intern(s);
        self.joins.insert(key, id);
        id
    }

    /// `b ⊆ a`.
    pub fn contains(&mut self, a: u32, b: u32) -> bool {
        self.meet(a, b) == b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Table {
    pub axes: Vec<Vec<i64>>,
    pub cells: Vec<u32>,
}

/// Row-major enumeration of all multi-indices below `dims`.
pub(crate) fn indices(dims: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = dims.iter().product();
    let mut out = Vec::with_capacity(total);
    if total == 0 {
        return out;
    }
    let mut idx = vec![0usize; dims.len()];
    loop {
        out.push(idx.clone());
        let mut axis = dims.len();
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < dims[axis] {
                break;
            }
            idx[axis] = 0;
        }
    }
}

pub(crate) fn merge_axes(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let mut v: Vec<i64> = x.iter().chain(y).copied().collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect()
}

impl Table {
    /// The table of the zero cone: a single full cell.
    pub fn point(value: u32) -> Self {
        Table { axes: Vec::new(), cells: vec![value] }
    }

    pub fn dims(&self) -> Vec<usize> {
        self.axes.iter().map(Vec::len).collect()
    }

    pub fn strides(&self) -> Vec<usize> {
        let dims = self.dims();
        let mut s = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * dims[i + 1];
        }
        s
    }

    pub fn offset(&self, idx: &[usize]) -> usize {
        idx.iter().zip(self.strides()).map(|(i, s)| i * s).sum()
    }

    pub fn get(&self, idx: &[usize]) -> u32 {
        self.cells[self.offset(idx)]
    }

    /// Cell index holding `mu`, or `None` below the grid.
    pub fn locate(&self, mu: &[i64]) -> Option<Vec<usize>> {
        self.axes
            .iter()
            .zip(mu)
            .map(|(ax, x)| ax.partition_point(|b| b <= x).checked_sub(1))
            .collect()
    }

    pub fn value_at(&self, mu: &[i64]) -> u32 {
        match self.locate(mu) {
            Some(idx) => self.get(&idx),
            None => ZERO,
        }
    }

    /// Value at the grid cell one step below `idx` along `axis`.
    pub fn below(&self, idx: &[usize], axis: usize) -> u32 {
        if idx[axis] == 0 {
            return ZERO;
        }
        let mut j = idx.to_vec();
        j[axis] -= 1;
        self.get(&j)
    }

    /// The same function sampled on a finer grid.
    pub fn resample(&self, axes: &[Vec<i64>]) -> Table {
        let maps: Vec<Vec<Option<usize>>> = axes
            .iter()
            .zip(&self.axes)
            .map(|(new, old)| new.iter().map(|x| old.partition_point(|b| b <= x).checked_sub(1)).collect())
            .collect();
        let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
        let cells = indices(&dims)
            .into_iter()
            .map(|idx| {
                let old: Option<Vec<usize>> = idx.iter().zip(&maps).map(|(i, m)| m[*i]).collect();
                old.map_or(ZERO, |o| self.get(&o))
            })
            .collect();
        Table { axes: axes.to_vec(), cells }
    }

    /// Adds breakpoints so that every cell lies on one side of each cut.
    pub fn refined(&self, cuts: &[Vec<i64>]) -> Table {
        let axes = merge_axes(&self.axes, cuts);
        if axes == self.axes {
            return self.clone();
        }
        self.resample(&axes)
    }

    fn slice_equal(&self, axis: usize, j: usize, k: usize) -> bool {
        let dims = self.dims();
        let strides = self.strides();
        let mut sub_dims = dims.clone();
        sub_dims[axis] = 1;
        indices(&sub_dims).into_iter().all(|idx| {
            let base: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
            self.cells[base + j * strides[axis]] == self.cells[base + k * strides[axis]]
        })
    }

    fn slice_zero(&self, axis: usize, j: usize) -> bool {
        let dims = self.dims();
        let strides = self.strides();
        let mut sub_dims = dims.clone();
        sub_dims[axis] = 1;
        indices(&sub_dims).into_iter().all(|idx| {
            let base: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
            self.cells[base + j * strides[axis]] == ZERO
        })
    }

    fn remove(&mut self, axis: usize, j: usize) {
        let dims = self.dims();
        let cells = indices(&dims)
            .into_iter()
            .zip(self.cells.iter())
            .filter(|(idx, _)| idx[axis] != j)
            .map(|(_, c)| *c)
            .collect();
        self.cells = cells;
        self.axes[axis].remove(j);
    }

    /// Drops every breakpoint that does not change the function; the result
    /// is the unique minimal grid, so equal functions get equal tables.
    pub fn compact(&mut self) {
        if self.axes.is_empty() {
            return;
        }
        if self.cells.iter().all(|c| *c == ZERO) {
            for ax in self.axes.iter_mut() {
                ax.clear();
            }
            self.cells.clear();
            return;
        }
        for axis in 0..self.axes.len() {
            let mut j = self.axes[axis].len();
            while j > 1 {
                j -= 1;
                if self.slice_equal(axis, j, j - 1) {
                    self.remove(axis, j);
                }
            }
            while self.axes[axis].len() > 1 && self.slice_zero(axis, 0) {
                self.remove(axis, 0);
            }
        }
    }

    pub fn map_cells(&self, mut f: impl FnMut(u32) -> u32) -> Table {
        Table { axes: self.axes.clone(), cells: self.cells.iter().map(|c| f(*c)).collect() }
    }

    /// Lower corners of every cell.
    pub fn corner(&self, idx: &[usize]) -> Vec<i64> {
        idx.iter().zip(&self.axes).map(|(i, ax)| ax[*i]).collect()
    }

    /// Length of a cell along each axis; `None` for the unbounded last cell.
    pub fn widths(&self, idx: &[usize]) -> Vec<Option<i64>> {
        idx.iter()
            .zip(&self.axes)
            .map(|(i, ax)| ax.get(i + 1).map(|next| next - ax[*i]))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_are_row_major() {
        assert_eq!(indices(&[2, 2]), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(indices(&[]), vec![Vec::<usize>::new()]);
        assert!(indices(&[0, 3]).is_empty());
    }

    #[test]
    fn compaction_is_canonical() {
        // f(x, y) = 1 for x >= 0 and y >= 2, else 0, written on a redundant grid.
        let t = Table {
            axes: vec![vec![-3, 0, 5], vec![1, 2, 7]],
            cells: vec![ZERO, ZERO, ZERO, ZERO, FULL, FULL, ZERO, FULL, FULL],
        };
        let mut c = t.clone();
        c.compact();
        assert_eq!(c.axes, vec![vec![0], vec![2]]);
        assert_eq!(c.cells, vec![FULL]);
        for x in -5..8 {
            for y in -1..9 {
                assert_eq!(c.value_at(&[x, y]), t.value_at(&[x, y]));
            }
        }
    }

    #[test]
    fn resample_preserves_values() {
        let t = Table { axes: vec![vec![0, 3]], cells: vec![2, FULL] };
        let r = t.refined(&[vec![-1, 1, 3, 9]]);
        assert_eq!(r.axes, vec![vec![-1, 0, 1, 3, 9]]);
        for x in -3..12 {
            assert_eq!(r.value_at(&[x]), t.value_at(&[x]));
        }
    }
}
