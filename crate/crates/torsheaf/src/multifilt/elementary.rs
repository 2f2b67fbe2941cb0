//! Elementary injections: checking, applying, the δ-invariant and the
//! factorization of an arbitrary inclusion into elementary steps.

use std::collections::BTreeMap;

use super::{indices, merge_axes, Multifiltration, Palette, Sub, Table};
use crate::error::{Error, Result};
use crate::fan::Cone;

/// δ-invariant of an inclusion; `None` stands for an infinite slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta(pub Vec<Option<u64>>);

impl Delta {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|d| *d == Some(0))
    }

    /// Smallest `k` (1-based) with `δ_k != 0`.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|d| *d != Some(0)).map(|i| i + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryInjection {
    pub k0: usize,
    pub sigma0: Cone,
    pub m0: Vec<i64>,
    /// The value `E^{σ0}_{m0}`, a hyperplane of `F^{σ0}_{m0}`.
    pub dropped: Sub,
    /// `m_ρ` per ray; undefined for the ray outside a top-dimensional `σ0`.
    pub m_rho: Vec<Option<i64>>,
    /// `<m_σ, u_σ>` for every coface of `σ0`.
    pub m_sigma: BTreeMap<Cone, i64>,
    pub m_big_sigma: i64,
    pub saturated: bool,
}

impl ElementaryInjection {
    /// Codimension of the support of the quotient, and its weight.
    pub fn quotient_dims(&self) -> (usize, i64) {
        (self.k0, self.m_big_sigma)
    }
}

/// The first clause of the definition that fails, with a location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotElementary {
    pub clause: &'static str,
    pub detail: String,
}

pub type ElementaryCheck = std::result::Result<ElementaryInjection, NotElementary>;

fn not_elementary(clause: &'static str, detail: String) -> ElementaryCheck {
    Err(NotElementary { clause, detail })
}

/// `E` and `F` over one palette, each cone resampled on the merged grid.
struct Aligned {
    pal: Palette,
    e: BTreeMap<Cone, Table>,
    f: BTreeMap<Cone, Table>,
}

impl Aligned {
    fn new(e: &Multifiltration, f: &Multifiltration) -> Result<Self> {
        let (mut pal, e_tables) = f.import(e)?;
        let mut ea = BTreeMap::new();
        let mut fa = BTreeMap::new();
        for (cone, ft) in f.parts().1 {
            let et = &e_tables[cone];
            let axes = merge_axes(&et.axes, &ft.axes);
            let (et, ft) = (et.resample(&axes), ft.resample(&axes));
            for (i, (x, y)) in et.cells.iter().zip(&ft.cells).enumerate() {
                if !pal.contains(*y, *x) {
                    let idx = indices(&et.dims()).swap_remove(i);
                    return Err(Error::Containment(format!("cone {cone}, class {:?}", et.corner(&idx))));
                }
            }
            ea.insert(cone.clone(), et);
            fa.insert(cone.clone(), ft);
        }
        Ok(Aligned { pal, e: ea, f: fa })
    }

    fn differs(&self, cone: &Cone) -> bool {
        self.e[cone].cells != self.f[cone].cells
    }

    /// Differing cones of least dimension, lexicographically.
    fn lowest_differing(&self) -> Vec<Cone> {
        let diff: Vec<&Cone> = self.e.keys().filter(|c| self.differs(c)).collect();
        let Some(k0) = diff.iter().map(|c| c.dim()).min() else {
            return Vec::new();
        };
        diff.into_iter().filter(|c| c.dim() == k0).cloned().collect()
    }
}

fn cuts_for(sigma: &Cone, sigma0: &Cone, on_sigma0: impl Fn(usize) -> Vec<i64>, other: impl Fn(usize) -> Vec<i64>) -> Vec<Vec<i64>> {
    sigma
        .rays()
        .iter()
        .map(|r| match sigma0.position(*r) {
            Some(i) => on_sigma0(i),
            None => other(*r),
        })
        .collect()
}

/// Whether the class lies below `m0` on the axes of `sigma0`.
fn below_m0(sigma: &Cone, sigma0: &Cone, corner: &[i64], m0: &[i64]) -> bool {
    sigma
        .rays()
        .iter()
        .zip(corner)
        .all(|(r, x)| sigma0.position(*r).map_or(true, |i| *x <= m0[i]))
}

pub fn delta(e: &Multifiltration, f: &Multifiltration) -> Result<Delta> {
    let al = Aligned::new(e, f)?;
    let n = f.n();
    let local = |cone: &Cone| -> Option<u64> {
        let (et, ft) = (&al.e[cone], &al.f[cone]);
        let mut total = 0u64;
        for (i, idx) in indices(&et.dims()).into_iter().enumerate() {
            let gap = (al.pal.dim(ft.cells[i]) - al.pal.dim(et.cells[i])) as u64;
            if gap == 0 {
                continue;
            }
            let mut volume = gap;
            for w in et.widths(&idx) {
                volume *= w? as u64;
            }
            total += volume;
        }
        Some(total)
    };
    let mut out = Vec::with_capacity(n);
    let mut star: Vec<(Cone, u64)> = Vec::new();
    for k in 1..=n {
        let candidates: Vec<Cone> = f
            .fan()
            .cones(k)?
            .into_iter()
            .filter(|c| {
                k == 1 || c.rays().iter().all(|r| star.iter().any(|(t, d)| *t == c.without_ray(*r) && *d == 0))
            })
            .collect();
        if candidates.is_empty() {
            out.resize(n, None);
            break;
        }
        star.clear();
        let mut sum = 0u64;
        for c in candidates {
            let d = local(&c)
                .ok_or_else(|| Error::Invalid(format!("cone {c} differs on an unbounded set of classes")))?;
            sum += d;
            star.push((c, d));
        }
        out.push(Some(sum));
    }
    Ok(Delta(out))
}

pub fn elementary_check(e: &Multifiltration, f: &Multifiltration) -> Result<ElementaryCheck> {
    let mut al = Aligned::new(e, f)?;
    let lowest = al.lowest_differing();
    let Some(sigma0) = lowest.first().cloned() else {
        return Ok(not_elementary("(ii)_e", "the inclusion is an equality".into()));
    };
    if lowest.len() > 1 {
        return Ok(not_elementary("(ii)_e", format!("cones {} and {} both differ", lowest[0], lowest[1])));
    }
    let k0 = sigma0.dim();
    let (et, ft) = (&al.e[&sigma0], &al.f[&sigma0]);
    let diff: Vec<Vec<usize>> = indices(&et.dims())
        .into_iter()
        .enumerate()
        .filter(|(i, _)| et.cells[*i] != ft.cells[*i])
        .map(|(_, idx)| idx)
        .collect();
    let unit = |idx: &Vec<usize>| et.widths(idx).iter().all(|w| *w == Some(1));
    if diff.len() != 1 || !unit(&diff[0]) {
        return Ok(not_elementary("(ii)_e", format!("more than one class of {sigma0} differs")));
    }
    let m0 = et.corner(&diff[0]);
    let (e0, f0) = (et.get(&diff[0]), ft.get(&diff[0]));
    if al.pal.dim(f0) != al.pal.dim(e0) + 1 {
        return Ok(not_elementary("(ii)_e", format!("dimension drops by more than one at {m0:?}")));
    }

    for cone in f.fan().all_cones() {
        if cone.dim() <= k0 {
            continue;
        }
        if !sigma0.is_face_of(&cone) {
            if al.differs(&cone) {
                return Ok(not_elementary("(iii)_e", format!("cone {cone} differs but does not contain {sigma0}")));
            }
            continue;
        }
        let cuts = cuts_for(&cone, &sigma0, |i| vec![m0[i] + 1], |_| Vec::new());
        let (et, ft) = (al.e[&cone].refined(&cuts), al.f[&cone].refined(&cuts));
        for (i, idx) in indices(&et.dims()).into_iter().enumerate() {
            let corner = et.corner(&idx);
            let expected = if below_m0(&cone, &sigma0, &corner, &m0) {
                al.pal.meet(ft.cells[i], e0)
            } else {
                ft.cells[i]
            };
            if et.cells[i] != expected {
                return Ok(not_elementary("(iii)_e", format!("cone {cone}, class {corner:?}")));
            }
        }
    }

    // Scan each ray direction leaving σ0 for the first class where the drop is visible.
    let n = f.n();
    let base: i64 = m0.iter().sum();
    let mut a: BTreeMap<usize, i64> = BTreeMap::new();
    if k0 < n {
        for rho in (0..=n).filter(|r| !sigma0.contains_ray(*r)) {
            let tau = sigma0.with_ray(rho);
            let pos = tau.position(rho).expect("added ray");
            let (et, ft) = (&al.e[&tau], &al.f[&tau]);
            let mut class: Vec<i64> = m0.clone();
            class.insert(pos, 0);
            let found = et.axes[pos].iter().find(|x| {
                class[pos] = **x;
                et.value_at(&class) != ft.value_at(&class)
            });
            match found {
                Some(x) => {
                    a.insert(rho, *x);
                }
                None => {
                    return Ok(not_elementary("(iii)_e", format!("the drop never reaches cone {tau}")));
                }
            }
        }
    }
    let m_rho: Vec<Option<i64>> = (0..=n)
        .map(|r| match sigma0.position(r) {
            Some(i) => Some(m0[i]),
            None => a.get(&r).copied(),
        })
        .collect();
    let m_big_sigma = m_rho.iter().flatten().sum();

    let mut m_sigma = BTreeMap::new();
    let mut saturated = true;
    for cone in f.fan().cofaces(&sigma0) {
        let ms = base + cone.rays().iter().filter_map(|r| a.get(r)).sum::<i64>();
        m_sigma.insert(cone.clone(), ms);
        if !saturated {
            continue;
        }
        let cuts = cuts_for(&cone, &sigma0, |i| vec![m0[i], m0[i] + 1], |r| vec![a[&r]]);
        let (et, ft) = (al.e[&cone].refined(&cuts), al.f[&cone].refined(&cuts));
        for (i, idx) in indices(&et.dims()).into_iter().enumerate() {
            let corner = et.corner(&idx);
            let inside = cone.rays().iter().zip(&corner).all(|(r, x)| match sigma0.position(*r) {
                Some(j) => *x == m0[j],
                None => *x >= a[r],
            });
            if (et.cells[i] != ft.cells[i]) != inside {
                saturated = false;
                break;
            }
        }
    }

    Ok(Ok(ElementaryInjection {
        k0,
        sigma0,
        m0,
        dropped: al.pal.get(e0).clone(),
        m_rho,
        m_sigma,
        m_big_sigma,
        saturated,
    }))
}

impl Multifiltration {
    /// Meets every value with `target` on the cofaces of `sigma0`, at the
    /// classes lying below `m0` on the coordinates of `sigma0`.
    pub fn intersect_region(&self, sigma0: &Cone, m0: &[i64], target: &Sub) -> Result<Multifiltration> {
        if !self.fan().is_cone(sigma0) || m0.len() != sigma0.dim() {
            return Err(Error::Shape(format!("class {m0:?} on cone {sigma0}")));
        }
        if target.rank() != self.rank() {
            return Err(Error::Shape("target subspace has the wrong rank".into()));
        }
        let (pal, tables) = self.parts();
        let mut pal = pal.clone();
        let mut tables = tables.clone();
        let t = pal.intern(target.clone());
        for cone in self.fan().cofaces(sigma0) {
            let cuts = cuts_for(&cone, sigma0, |i| vec![m0[i] + 1], |_| Vec::new());
            let mut table = tables[&cone].refined(&cuts);
            for (i, idx) in indices(&table.dims()).into_iter().enumerate() {
                if below_m0(&cone, sigma0, &table.corner(&idx), m0) {
                    table.cells[i] = pal.meet(table.cells[i], t);
                }
            }
            table.compact();
            tables.insert(cone, table);
        }
        Ok(Multifiltration::from_parts(self.fan(), self.rank(), pal, tables))
    }

    /// Replaces `F^{σ0}_{m0}` by the hyperplane `target` and propagates the
    /// change to the cofaces; the inclusion of the result is elementary.
    pub fn apply_elementary(&self, sigma0: &Cone, m0: &[i64], target: &Sub) -> Result<Multifiltration> {
        if sigma0.dim() == 0 || !self.fan().is_cone(sigma0) {
            return Err(Error::Parameter(format!("{sigma0} cannot carry a drop")));
        }
        let current = self.evaluate(sigma0, m0)?;
        if !current.contains(target) || target.dim() + 1 != current.dim() {
            return Err(Error::Parameter(format!(
                "target is not a hyperplane of the value at {sigma0}, {m0:?}"
            )));
        }
        for i in 0..m0.len() {
            let mut below = m0.to_vec();
            below[i] -= 1;
            if !target.contains(&self.evaluate(sigma0, &below)?) {
                return Err(Error::Minimality(format!("value at {below:?} on {sigma0} is not inside the target")));
            }
        }
        self.intersect_region(sigma0, m0, target)
    }

    /// Classes where some hyperplane can be dropped without breaking
    /// monotonicity, with the join `J` of the values just below and the
    /// current value `V`; any hyperplane between `J` and `V` is legal.
    pub fn drop_sites(&self) -> Vec<(Cone, Vec<i64>, Sub, Sub)> {
        let (pal, tables) = self.parts();
        let mut pal = pal.clone();
        let mut out = Vec::new();
        for (cone, t) in tables {
            for idx in indices(&t.dims()) {
                let v = t.get(&idx);
                let corner = t.corner(&idx);
                let mut j = super::ZERO;
                for axis in 0..idx.len() {
                    let mut c = corner.clone();
                    c[axis] -= 1;
                    let b = t.value_at(&c);
                    j = pal.join(j, b);
                }
                if pal.dim(j) < pal.dim(v) {
                    out.push((cone.clone(), corner, pal.get(j).clone(), pal.get(v).clone()));
                }
            }
        }
        out
    }
}

/// Splits `E ⊆ F` into elementary steps, starting at `F`: each step drops one
/// dimension at the lowest-dimensional differing cone (lexicographically
/// first) and its lexicographically first differing class.
pub fn factorize(e: &Multifiltration, f: &Multifiltration) -> Result<Vec<ElementaryInjection>> {
    let mut current = f.clone();
    let mut steps = Vec::new();
    loop {
        let al = Aligned::new(e, &current)?;
        let Some(sigma0) = al.lowest_differing().into_iter().next() else {
            return Ok(steps);
        };
        let (et, ft) = (&al.e[&sigma0], &al.f[&sigma0]);
        let i = (0..et.cells.len()).find(|i| et.cells[*i] != ft.cells[*i]).expect("differing cone");
        let idx = indices(&et.dims()).swap_remove(i);
        let m0 = et.corner(&idx);
        let (ev, fv) = (al.pal.get(et.cells[i]), al.pal.get(ft.cells[i]));
        let extra = fv.dim() - ev.dim() - 1;
        let mut rows = ev.rows().to_vec();
        rows.extend(fv.complementary_rows(ev).into_iter().take(extra));
        let target = Sub::span(f.rank(), rows)?;
        let next = current.apply_elementary(&sigma0, &m0, &target)?;
        match elementary_check(&next, &current)? {
            Ok(step) => steps.push(step),
            Err(ne) => {
                return Err(Error::Consistency(format!(
                    "step at {sigma0}, {m0:?} is not elementary: {} {}",
                    ne.clause, ne.detail
                )))
            }
        }
        current = next;
    }
}

/// Applies the recorded drops to `F`, in order.
pub fn recompose(f: &Multifiltration, steps: &[ElementaryInjection]) -> Result<Multifiltration> {
    steps
        .iter()
        .try_fold(f.clone(), |acc, s| acc.apply_elementary(&s.sigma0, &s.m0, &s.dropped))
}
