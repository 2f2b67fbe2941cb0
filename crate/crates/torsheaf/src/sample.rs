//! Seeded random instances for sweeps and property checks.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::multifilt::{Multifiltration, Sub};
use crate::reflexive_r2::{Line2, R2Filtration};

pub use rand::SeedableRng;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small lines of `Q^2`, pairwise distinct.
fn line_pool() -> Vec<Line2> {
    let mut out = vec![Line2::new(0, 1).expect("nonzero")];
    for p in 1..=3 {
        for q in -3..=3 {
            let l = Line2::new(p, q).expect("nonzero");
            if !out.contains(&l) {
                out.push(l);
            }
        }
    }
    out
}

pub fn random_line(rng: &mut SampleRng) -> Line2 {
    *line_pool().choose(rng).expect("nonempty pool")
}

/// `b`-normalized data with `c_ρ` uniform in `0..=max_c`. With `distinct`
/// every ray gets its own line, otherwise lines are drawn from three
/// choices so that coincidences are common.
pub fn random_reflexive(rng: &mut SampleRng, n: usize, max_c: i64, distinct: bool) -> Result<R2Filtration> {
    let cs: Vec<i64> = (0..=n).map(|_| rng.gen_range(0..=max_c)).collect();
    let lines: Vec<Line2> = if distinct {
        let mut pool = line_pool();
        pool.shuffle(rng);
        if pool.len() < n + 1 {
            return Err(Error::Range(format!("no {} distinct small lines", n + 1)));
        }
        pool.truncate(n + 1);
        pool
    } else {
        let few = [Line2::new(1, 0)?, Line2::new(0, 1)?, Line2::new(1, 1)?];
        (0..=n).map(|_| *few.choose(rng).expect("nonempty")).collect()
    };
    R2Filtration::from_c_lines(n, &cs, &lines)
}

/// One legal drop on a cone whose dimension is in `dims`, or `None` when
/// there is no such site.
pub fn random_drop(rng: &mut SampleRng, e: &Multifiltration, dims: &[usize]) -> Result<Option<Multifiltration>> {
    let sites: Vec<_> = e.drop_sites().into_iter().filter(|(c, ..)| dims.contains(&c.dim())).collect();
    let Some((cone, m0, j, v)) = sites.choose(rng) else {
        return Ok(None);
    };
    let target = if j.dim() + 1 == v.dim() {
        j.clone()
    } else if e.rank() == 2 {
        random_line(rng).to_subspace()
    } else {
        let mut rows = j.rows().to_vec();
        rows.extend(v.complementary_rows(j).into_iter().take(v.dim() - 1 - j.dim()));
        Sub::span(e.rank(), rows)?
    };
    Ok(Some(e.apply_elementary(cone, m0, &target)?))
}

/// Up to `len` random drops on cones with dimension in `dims`, starting at
/// `f`. Stops early when no site is left.
pub fn random_drops(rng: &mut SampleRng, f: &Multifiltration, len: usize, dims: &[usize]) -> Result<Multifiltration> {
    let mut cur = f.clone();
    for _ in 0..len {
        match random_drop(rng, &cur, dims)? {
            Some(next) => cur = next,
            None => break,
        }
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic_and_valid() {
        let mut a = rng(7);
        let mut b = rng(7);
        for _ in 0..20 {
            let fa = random_reflexive(&mut a, 4, 5, true).unwrap();
            let fb = random_reflexive(&mut b, 4, 5, true).unwrap();
            assert_eq!(fa, fb);
            let lines: Vec<_> = fa.rays().iter().filter_map(|r| r.line).collect();
            let distinct: std::collections::BTreeSet<_> = lines.iter().collect();
            assert_eq!(lines.len(), distinct.len());
            let f = fa.to_multifiltration();
            let e = random_drops(&mut a, &f, 4, &[2, 3, 4]).unwrap();
            assert_eq!(e, random_drops(&mut b, &f, 4, &[2, 3, 4]).unwrap());
            assert!(e.is_valid());
            assert!(e.is_contained_in(&f).unwrap());
            assert_eq!(e.reflexive_hull(), f);
        }
    }
}
