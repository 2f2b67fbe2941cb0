//! Subspaces of `K^r` in reduced row-echelon form.

use crate::error::{Error, Result};
use crate::scalar::Field;

/// A subspace of `K^rank`, stored by its unique reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<T> {
    rank: usize,
    rows: Vec<Vec<T>>,
}

impl<T: Field> Subspace<T> {
    pub fn zero(rank: usize) -> Self {
        Subspace { rank, rows: Vec::new() }
    }

    pub fn full(rank: usize) -> Self {
        let rows = (0..rank)
            .map(|i| (0..rank).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect();
        Subspace { rank, rows }
    }

    /// The span of `vectors`.
    pub fn span(rank: usize, vectors: Vec<Vec<T>>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != rank) {
            return Err(Error::Shape(format!("vectors must have length {rank}")));
        }
        Ok(Subspace { rank, rows: rref(vectors, rank) })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.rank
    }

    pub fn contains_vector(&self, v: &[T]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        rref(rows, self.rank).len() == self.dim()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> bool {
        other.rows.iter().all(|v| self.contains_vector(v))
    }

    pub fn join(&self, other: &Self) -> Self {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Subspace { rank: self.rank, rows: rref(rows, self.rank) }
    }

    /// Vectors pairing to zero with every row, under the standard dot product.
    pub fn annihilator(&self) -> Self {
        let pivots: Vec<usize> = self.rows.iter().map(|r| leading(r).expect("nonzero row")).collect();
        let mut basis = Vec::new();
        for free in (0..self.rank).filter(|c| !pivots.contains(c)) {
            let mut v = vec![T::zero(); self.rank];
            v[free] = T::one();
            for (row, &p) in self.rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            basis.push(v);
        }
        Subspace { rank: self.rank, rows: rref(basis, self.rank) }
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.annihilator().join(&other.annihilator()).annihilator()
    }

    /// Echelon rows of `self` that successively enlarge the span of `base`.
    pub fn complementary_rows(&self, base: &Self) -> Vec<Vec<T>> {
        let mut acc = base.clone();
        let mut out = Vec::new();
        for row in &self.rows {
            if !acc.contains_vector(row) {
                acc = acc.join(&Subspace { rank: self.rank, rows: vec![row.clone()] });
                out.push(row.clone());
            }
        }
        out
    }
}

fn leading<T: Field>(row: &[T]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

fn rref<T: Field>(mut rows: Vec<Vec<T>>, rank: usize) -> Vec<Vec<T>> {
    let mut pivot_row = 0;
    for col in 0..rank {
        let Some(sel) = (pivot_row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, sel);
        let inv = T::one() / rows[pivot_row][col].clone();
        for x in rows[pivot_row].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != pivot_row && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in 0..rank {
                    let delta = factor.clone() * rows[pivot_row][j].clone();
                    rows[i][j] = rows[i][j].clone() - delta;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    debug_assert!(rows.iter().all(|r| leading(r).map_or(false, |c| r[c].is_one())));
    rows
}
