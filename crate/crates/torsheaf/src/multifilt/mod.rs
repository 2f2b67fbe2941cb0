//! Equivariant torsion-free sheaves as families of multifiltrations.
//!
//! Every cone of the fan carries a monotone map from weight classes to
//! subspaces of `Q^rank`. Internally each cone stores a compacted table over
//! its breakpoint grid (see [`grid`]); the public encoding is the jump list,
//! i.e. the cells whose value is not the join of their predecessors.

mod elementary;
mod grid;
mod json;
pub mod subspace;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fan::{Cone, Fan};

pub use elementary::{
    delta, elementary_check, factorize, recompose, Delta, ElementaryCheck, ElementaryInjection, NotElementary,
};
pub use grid::Sub;
pub(crate) use grid::{indices, merge_axes, Palette, Table, FULL, ZERO};
pub use json::{big_json, multifiltration_from_json, multifiltration_to_json, subspace_from_json, subspace_to_json};
pub(crate) use json::{as_i64, as_usize, field, int_list, line_pair};

/// Jumps of one cone: lower corners and the subspaces that appear there.
pub type Jumps = Vec<(Vec<i64>, Sub)>;

#[derive(Clone, Debug)]
pub struct Multifiltration {
    fan: Fan,
    rank: usize,
    pal: Palette,
    tables: BTreeMap<Cone, Table>,
}

/// A failed axiom, located as precisely as the check allows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    ZeroConeNotFull,
    /// The values of the cone never reach the whole space.
    NotFull { cone: Cone },
    NotMonotone { cone: Cone, class: Vec<i64>, axis: usize },
    /// The deep value of `cone` along the ray missing from `facet` is not the facet value.
    Facet { cone: Cone, facet: Cone, class: Vec<i64> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroConeNotFull => write!(f, "zero cone is not the full space"),
            Violation::NotFull { cone } => write!(f, "cone {cone}: values never reach the full space"),
            Violation::NotMonotone { cone, class, axis } => {
                write!(f, "cone {cone}: not monotone at class {class:?} along axis {axis}")
            }
            Violation::Facet { cone, facet, class } => {
                write!(f, "cone {cone}, facet {facet}: incompatible at facet class {class:?}")
            }
        }
    }
}

fn empty_table(d: usize) -> Table {
    Table { axes: vec![Vec::new(); d], cells: Vec::new() }
}

impl Multifiltration {
    /// Builds the family from per-cone jump lists. Missing cones are zero
    /// everywhere, except the zero cone which defaults to the full space.
    pub fn from_jumps(fan: Fan, rank: usize, cones: Vec<(Cone, Jumps)>) -> Result<Self> {
        let mut pal = Palette::new(rank);
        let mut given: BTreeMap<Cone, Jumps> = BTreeMap::new();
        for (cone, jumps) in cones {
            if !fan.is_cone(&cone) {
                return Err(Error::Shape(format!("{cone} is not a cone of P^{}", fan.n())));
            }
            if given.insert(cone.clone(), jumps).is_some() {
                return Err(Error::Parse(format!("cone {cone} listed twice")));
            }
        }
        let mut tables = BTreeMap::new();
        for cone in fan.all_cones() {
            let table = match given.remove(&cone) {
                None if cone.dim() == 0 => Table::point(FULL),
                None => empty_table(cone.dim()),
                Some(jumps) => table_from_jumps(&mut pal, rank, cone.dim(), jumps)?,
            };
            tables.insert(cone, table);
        }
        Ok(Multifiltration { fan, rank, pal, tables })
    }

    /// The reflexive family determined by one filtration per ray: the value
    /// on a cone is the intersection of the ray values at its coordinates.
    pub fn from_ray_filtrations(fan: Fan, rank: usize, rays: Vec<Jumps>) -> Result<Self> {
        if rays.len() != fan.ray_count() {
            return Err(Error::Shape(format!("{} ray filtrations for {} rays", rays.len(), fan.ray_count())));
        }
        let cones = rays.into_iter().enumerate().map(|(r, j)| (Cone::new([r]), j)).collect();
        Ok(Multifiltration::from_jumps(fan, rank, cones)?.reflexive_hull())
    }

    pub fn fan(&self) -> Fan {
        self.fan
    }

    pub fn n(&self) -> usize {
        self.fan.n()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub(crate) fn parts(&self) -> (&Palette, &BTreeMap<Cone, Table>) {
        (&self.pal, &self.tables)
    }

    pub(crate) fn from_parts(fan: Fan, rank: usize, pal: Palette, tables: BTreeMap<Cone, Table>) -> Self {
        Multifiltration { fan, rank, pal, tables }
    }

    fn check_class(&self, cone: &Cone, mu: &[i64]) -> Result<()> {
        if !self.fan.is_cone(cone) {
            return Err(Error::Shape(format!("{cone} is not a cone of P^{}", self.n())));
        }
        if mu.len() != cone.dim() {
            return Err(Error::Shape(format!("class of length {} on cone {cone}", mu.len())));
        }
        Ok(())
    }

    pub fn evaluate(&self, cone: &Cone, mu: &[i64]) -> Result<Sub> {
        self.check_class(cone, mu)?;
        Ok(self.pal.get(self.tables[cone].value_at(mu)).clone())
    }

    pub fn dim_at(&self, cone: &Cone, mu: &[i64]) -> Result<usize> {
        self.check_class(cone, mu)?;
        Ok(self.pal.dim(self.tables[cone].value_at(mu)))
    }

    /// The jump-list encoding: for each nonzero cone, the lower corners where
    /// the value exceeds the join of the values just below, sorted.
    pub fn jumps(&self) -> Vec<(Cone, Jumps)> {
        let mut pal = self.pal.clone();
        self.tables
            .iter()
            .filter(|(c, _)| c.dim() > 0)
            .map(|(cone, t)| {
                let mut out = Vec::new();
                for idx in indices(&t.dims()) {
                    let v = t.get(&idx);
                    let below = (0..idx.len()).fold(ZERO, |acc, i| {
                        let b = t.below(&idx, i);
                        pal.join(acc, b)
                    });
                    if v != below {
                        out.push((t.corner(&idx), pal.get(v).clone()));
                    }
                }
                (cone.clone(), out)
            })
            .collect()
    }

    /// All breakpoints of the cone's table, per axis.
    pub fn breakpoints(&self, cone: &Cone) -> Vec<Vec<i64>> {
        self.tables[cone].axes.clone()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut pal = self.pal.clone();
        for (cone, t) in &self.tables {
            if cone.dim() == 0 {
                if t.cells != [FULL] {
                    out.push(Violation::ZeroConeNotFull);
                }
                continue;
            }
            if t.cells.last() != Some(&FULL) {
                out.push(Violation::NotFull { cone: cone.clone() });
            }
            'mono: for idx in indices(&t.dims()) {
                let v = t.get(&idx);
                for axis in 0..idx.len() {
                    if !pal.contains(v, t.below(&idx, axis)) {
                        out.push(Violation::NotMonotone { cone: cone.clone(), class: t.corner(&idx), axis });
                        break 'mono;
                    }
                }
            }
            for &ray in cone.rays() {
                let facet = cone.without_ray(ray);
                let deep = last_slice(t, cone.position(ray).expect("ray of cone"));
                if let Some(class) = first_difference(&deep, &self.tables[&facet]) {
                    out.push(Violation::Facet { cone: cone.clone(), facet, class });
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::Invalid(v.to_string())),
        }
    }

    /// The family whose value on each cone is the intersection of the ray
    /// values at the cone's coordinates.
    pub fn reflexive_hull(&self) -> Multifiltration {
        let mut pal = self.pal.clone();
        let mut tables = BTreeMap::new();
        for cone in self.fan.all_cones() {
            if cone.dim() <= 1 {
                tables.insert(cone.clone(), self.tables[&cone].clone());
                continue;
            }
            let rays: Vec<&Table> = cone.rays().iter().map(|r| &self.tables[&Cone::new([*r])]).collect();
            let axes: Vec<Vec<i64>> = rays.iter().map(|t| t.axes[0].clone()).collect();
            let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
            let cells = indices(&dims)
                .into_iter()
                .map(|idx| idx.iter().zip(&rays).fold(FULL, |acc, (i, t)| pal.meet(acc, t.cells[*i])))
                .collect();
            let mut t = Table { axes, cells };
            t.compact();
            tables.insert(cone, t);
        }
        Multifiltration { fan: self.fan, rank: self.rank, pal, tables }
    }

    pub fn is_reflexive(&self) -> bool {
        self.reflexive_hull() == *self
    }

    /// Tensor product with the invariant line bundle of ray degrees `d`:
    /// the new value at class `mu` is the old value at `mu + d`.
    pub fn twist(&self, d: &[i64]) -> Result<Multifiltration> {
        if d.len() != self.fan.ray_count() {
            return Err(Error::Shape(format!("{} shifts for {} rays", d.len(), self.fan.ray_count())));
        }
        let tables = self
            .tables
            .iter()
            .map(|(cone, t)| {
                let axes = t
                    .axes
                    .iter()
                    .zip(cone.rays())
                    .map(|(ax, r)| ax.iter().map(|x| x - d[*r]).collect())
                    .collect();
                (cone.clone(), Table { axes, cells: t.cells.clone() })
            })
            .collect();
        Ok(Multifiltration { fan: self.fan, rank: self.rank, pal: self.pal.clone(), tables })
    }

    /// Values of `other` expressed in this family's palette.
    pub(crate) fn import(&self, other: &Multifiltration) -> Result<(Palette, BTreeMap<Cone, Table>)> {
        if self.fan != other.fan || self.rank != other.rank {
            return Err(Error::Shape("multifiltrations over different fans or ranks".into()));
        }
        let mut pal = self.pal.clone();
        let map: Vec<u32> = other.pal.items().iter().map(|s| pal.intern(s.clone())).collect();
        let tables = other
            .tables
            .iter()
            .map(|(c, t)| (c.clone(), t.map_cells(|id| map[id as usize])))
            .collect();
        Ok((pal, tables))
    }

    /// Pointwise inclusion `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Multifiltration) -> Result<bool> {
        let (mut pal, theirs) = self.import(other)?;
        for (cone, t) in &self.tables {
            let u = &theirs[cone];
            let axes = merge_axes(&t.axes, &u.axes);
            let (a, b) = (t.resample(&axes), u.resample(&axes));
            if a.cells.iter().zip(&b.cells).any(|(x, y)| !pal.contains(*y, *x)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl PartialEq for Multifiltration {
    fn eq(&self, other: &Self) -> bool {
        if self.fan != other.fan || self.rank != other.rank {
            return false;
        }
        self.tables.iter().all(|(cone, t)| {
            let u = &other.tables[cone];
            t.axes == u.axes
                && t.cells.iter().zip(&u.cells).all(|(a, b)| self.pal.get(*a) == other.pal.get(*b))
        })
    }
}

impl Eq for Multifiltration {}

fn table_from_jumps(pal: &mut Palette, rank: usize, d: usize, jumps: Jumps) -> Result<Table> {
    if d == 0 {
        let v = jumps.into_iter().try_fold(ZERO, |acc, (c, s)| {
            check_jump(rank, 0, &c, &s)?;
            let id = pal.intern(s);
            Ok::<_, Error>(pal.join(acc, id))
        })?;
        return Ok(Table::point(v));
    }
    let mut axes = vec![Vec::new(); d];
    for (c, s) in &jumps {
        check_jump(rank, d, c, s)?;
        for (ax, x) in axes.iter_mut().zip(c) {
            ax.push(*x);
        }
    }
    for ax in axes.iter_mut() {
        ax.sort_unstable();
        ax.dedup();
    }
    let mut t = Table { cells: vec![ZERO; axes.iter().map(Vec::len).product()], axes };
    for (c, s) in jumps {
        let id = pal.intern(s);
        let off = t.offset(&t.locate(&c).expect("corner on grid"));
        t.cells[off] = pal.join(t.cells[off], id);
    }
    // Row-major order visits every predecessor first.
    for idx in indices(&t.dims()) {
        let off = t.offset(&idx);
        let mut v = t.cells[off];
        for axis in 0..d {
            v = pal.join(v, t.below(&idx, axis));
        }
        t.cells[off] = v;
    }
    t.compact();
    Ok(t)
}

fn check_jump(rank: usize, d: usize, coords: &[i64], s: &Sub) -> Result<()> {
    if coords.len() != d {
        return Err(Error::Shape(format!("jump coordinates {coords:?} on a cone of dimension {d}")));
    }
    if s.rank() != rank {
        return Err(Error::Shape(format!("subspace of K^{} in a rank {rank} family", s.rank())));
    }
    Ok(())
}

/// The values of `t` far out along `axis`, as a table over the other axes.
pub(crate) fn last_slice(t: &Table, axis: usize) -> Table {
    let mut axes = t.axes.clone();
    axes.remove(axis);
    let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
    let cells = match t.axes[axis].len() {
        0 => vec![ZERO; dims.iter().product()],
        len => indices(&dims)
            .into_iter()
            .map(|mut idx| {
                idx.insert(axis, len - 1);
                t.get(&idx)
            })
            .collect(),
    };
    Table { axes, cells }
}

/// The first class (on the merged grid) where two tables over one palette differ.
pub(crate) fn first_difference(a: &Table, b: &Table) -> Option<Vec<i64>> {
    if a == b {
        return None;
    }
    let axes = merge_axes(&a.axes, &b.axes);
    let (x, y) = (a.resample(&axes), b.resample(&axes));
    let dims: Vec<usize> = axes.iter().map(Vec::len).collect();
    indices(&dims)
        .into_iter()
        .zip(x.cells.iter().zip(&y.cells))
        .find(|(_, (p, q))| p != q)
        .map(|(idx, _)| x.corner(&idx))
}
