//! The fan of projective n-space.
//!
//! Rays are indexed `0..=n` with `u_0 = -(e_1 + ... + e_n)` and `u_i = e_i`.
//! Every proper subset of the rays spans a smooth cone, so the pairing
//! coordinates `<m, u_rho>` for `rho` in a cone give a complete invariant of
//! the class of `m` modulo the cone's orthogonal.

use itertools::Itertools;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    n: usize,
}

/// A cone of the fan, stored as its sorted ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    rays: Vec<usize>,
}

impl Cone {
    pub fn new(rays: impl IntoIterator<Item = usize>) -> Self {
        let mut rays: Vec<usize> = rays.into_iter().collect();
        rays.sort_unstable();
        rays.dedup();
        Cone { rays }
    }

    pub fn zero() -> Self {
        Cone { rays: Vec::new() }
    }

    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    pub fn dim(&self) -> usize {
        self.rays.len()
    }

    pub fn contains_ray(&self, ray: usize) -> bool {
        self.rays.binary_search(&ray).is_ok()
    }

    /// Axis index of `ray` inside this cone's class coordinates.
    pub fn position(&self, ray: usize) -> Option<usize> {
        self.rays.binary_search(&ray).ok()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.rays.iter().all(|r| other.contains_ray(*r))
    }

    pub fn with_ray(&self, ray: usize) -> Cone {
        Cone::new(self.rays.iter().copied().chain(std::iter::once(ray)))
    }

    pub fn without_ray(&self, ray: usize) -> Cone {
        Cone::new(self.rays.iter().copied().filter(|r| *r != ray))
    }

    /// Componentwise order on class coordinates.
    pub fn le(&self, m: &[i64], m_prime: &[i64]) -> Result<bool> {
        if m.len() != self.dim() || m_prime.len() != self.dim() {
            return Err(Error::Shape(format!(
                "cone of dimension {} compared classes of lengths {} and {}",
                self.dim(),
                m.len(),
                m_prime.len()
            )));
        }
        Ok(m.iter().zip(m_prime).all(|(a, b)| a <= b))
    }
}

impl std::fmt::Display for Cone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.rays.iter().join(","))
    }
}

impl Fan {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Range("projective dimension must be at least 1".into()));
        }
        Ok(Fan { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ray_count(&self) -> usize {
        self.n + 1
    }

    pub fn ray_vector(&self, ray: usize) -> Result<Vec<i64>> {
        self.check_ray(ray)?;
        Ok(if ray == 0 {
            vec![-1; self.n]
        } else {
            let mut v = vec![0; self.n];
            v[ray - 1] = 1;
            v
        })
    }

    fn check_ray(&self, ray: usize) -> Result<()> {
        if ray > self.n {
            return Err(Error::Range(format!("ray {ray} on P^{}", self.n)));
        }
        Ok(())
    }

    pub fn is_cone(&self, cone: &Cone) -> bool {
        cone.dim() <= self.n && cone.rays().iter().all(|r| *r <= self.n)
    }

    /// All cones of dimension `k`, in lexicographic order.
    pub fn cones(&self, k: usize) -> Result<Vec<Cone>> {
        if k > self.n {
            return Err(Error::Range(format!("cone dimension {k} on P^{}", self.n)));
        }
        Ok((0..=self.n).combinations(k).map(Cone::new).collect())
    }

    /// Every cone of the fan, by dimension and then lexicographically.
    pub fn all_cones(&self) -> Vec<Cone> {
        (0..=self.n)
            .flat_map(|k| (0..=self.n).combinations(k).map(Cone::new))
            .collect()
    }

    pub fn codim(&self, cone: &Cone) -> usize {
        self.n - cone.dim()
    }

    pub fn pairing(&self, m: &[i64], ray: usize) -> Result<i64> {
        self.check_ray(ray)?;
        if m.len() != self.n {
            return Err(Error::Shape(format!("weight of length {} on P^{}", m.len(), self.n)));
        }
        Ok(if ray == 0 { -m.iter().sum::<i64>() } else { m[ray - 1] })
    }

    pub fn u_sigma(&self, cone: &Cone) -> Result<Vec<i64>> {
        let mut u = vec![0; self.n];
        for &r in cone.rays() {
            for (acc, x) in u.iter_mut().zip(self.ray_vector(r)?) {
                *acc += x;
            }
        }
        Ok(u)
    }

    pub fn weight_class(&self, cone: &Cone, m: &[i64]) -> Result<Vec<i64>> {
        cone.rays().iter().map(|&r| self.pairing(m, r)).collect()
    }

    /// Cones containing `cone` (itself included), grouped by dimension.
    pub fn cofaces(&self, cone: &Cone) -> Vec<Cone> {
        let rest: Vec<usize> = (0..=self.n).filter(|r| !cone.contains_ray(*r)).collect();
        let mut out = Vec::new();
        for extra in 0..=(self.n - cone.dim().min(self.n)) {
            for add in rest.iter().copied().combinations(extra) {
                out.push(Cone::new(cone.rays().iter().copied().chain(add)));
            }
        }
        out
    }
}
