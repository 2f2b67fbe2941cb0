use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use torsheaf::chern_engine::{chern_general, log_ratio_saturated, ratio_saturated};
use torsheaf::doc::SheafDocument;
use torsheaf::multifilt::{delta, factorize, multifiltration_from_json, multifiltration_to_json, recompose, Multifiltration};
use torsheaf::obstruct::torsion_profile;
use torsheaf::reflexive_r2::{Line2, Normalization, R2Filtration, RayData};
use torsheaf::sample::{random_drops, random_reflexive, rng};
use torsheaf::{Cone, Fan, TruncIntPoly, TruncRatPoly};

fn int_poly(n: usize, c: &[i64]) -> TruncIntPoly {
    TruncIntPoly::truncated(n, c.iter().map(|x| BigInt::from(*x)).collect())
}

fn unit_poly(n: usize, c: &[i64]) -> TruncIntPoly {
    let mut v = vec![1];
    v.extend_from_slice(&c[..n]);
    int_poly(n, &v)
}

fn rat_poly(n: usize, c: &[(i64, i64)]) -> TruncRatPoly {
    let coeffs = c[..=n].iter().map(|(p, q)| BigRational::new(BigInt::from(*p), BigInt::from(*q))).collect();
    TruncRatPoly::truncated(n, coeffs)
}

/// Reflexive rank-2 data with arbitrary endpoints and distinct lines.
fn reflexive_strategy() -> impl Strategy<Value = R2Filtration> {
    (3usize..=5).prop_flat_map(|n| {
        prop::collection::vec((-4i64..=4, 0i64..=5), n + 1).prop_map(move |ab| {
            let rays = ab
                .iter()
                .enumerate()
                .map(|(i, (a, c))| RayData { a: *a, b: a + c, line: Some(Line2::new(1, i as i64).unwrap()) })
                .collect();
            R2Filtration::new(Fan::new(n).unwrap(), rays).unwrap()
        })
    })
}

/// A random torsion-free sheaf below a random reflexive one.
fn dropped(seed: u64, n: usize, dims_from: usize) -> (Multifiltration, Multifiltration) {
    let mut r = rng(seed);
    let f = random_reflexive(&mut r, n, 4, seed % 2 == 0).unwrap().to_multifiltration();
    let dims: Vec<usize> = (dims_from..=n).collect();
    let e = random_drops(&mut r, &f, 1 + (seed % 5) as usize, &dims).unwrap();
    (e, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weight_class_ignores_the_orthogonal_part(
        n in 2usize..=5,
        rays in prop::collection::btree_set(0usize..=5, 1..=4),
        m in prop::collection::vec(-9i64..=9, 5),
        v in prop::collection::vec(-9i64..=9, 5),
    ) {
        let fan = Fan::new(n).unwrap();
        let cone = Cone::new(rays.into_iter().filter(|r| *r <= n).take(n));
        let (m, mut v) = (m[..n].to_vec(), v[..n].to_vec());
        // Zero the coordinates of σ, then fix Σ v = 0 if ray 0 is in σ.
        for r in cone.rays().iter().filter(|r| **r > 0) {
            v[r - 1] = 0;
        }
        if cone.contains_ray(0) {
            let free: Vec<usize> = (1..=n).filter(|r| !cone.contains_ray(*r)).collect();
            match free.first() {
                Some(&f) => {
                    let s: i64 = v.iter().sum();
                    v[f - 1] -= s;
                }
                None => v.iter_mut().for_each(|x| *x = 0),
            }
        }
        let shifted: Vec<i64> = m.iter().zip(&v).map(|(a, b)| a + b).collect();
        prop_assert_eq!(fan.weight_class(&cone, &m).unwrap(), fan.weight_class(&cone, &shifted).unwrap());
    }

    #[test]
    fn coface_counts_and_alternating_sum(n in 1usize..=6, pick in prop::collection::btree_set(0usize..=6, 0..=6)) {
        let fan = Fan::new(n).unwrap();
        let cone = Cone::new(pick.into_iter().filter(|r| *r <= n).take(n));
        let d = cone.dim();
        let cofaces = fan.cofaces(&cone);
        let expected: u64 = (d..=n).map(|i| binom(n + 1 - d, i - d)).sum();
        prop_assert_eq!(cofaces.len() as u64, expected);
        let alternating: i64 = cofaces.iter().map(|c| if fan.codim(c) % 2 == 0 { 1 } else { -1 }).sum();
        prop_assert_eq!(alternating, 1);
    }

    #[test]
    fn ring_axioms(
        n in 0usize..=6,
        a in prop::collection::vec(-50i64..=50, 7),
        b in prop::collection::vec(-50i64..=50, 7),
        c in prop::collection::vec(-50i64..=50, 7),
    ) {
        let (a, b, c) = (int_poly(n, &a[..=n]), int_poly(n, &b[..=n]), int_poly(n, &c[..=n]));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn log_and_exp_are_inverse(n in 1usize..=6, c in prop::collection::vec((-20i64..=20, 1i64..=6), 7)) {
        let mut c = c;
        c[0] = (1, 1);
        let p = rat_poly(n, &c);
        let log = p.log().unwrap();
        prop_assert_eq!(log.exp().unwrap(), p.clone());
        c[0] = (0, 1);
        let q = rat_poly(n, &c);
        prop_assert_eq!(q.exp().unwrap().log().unwrap(), q);
        prop_assert_eq!(p.inverse().unwrap().log().unwrap(), log.neg());
    }

    #[test]
    fn integer_units_invert(n in 1usize..=6, c in prop::collection::vec(-30i64..=30, 6)) {
        let p = unit_poly(n, &c);
        prop_assert!(p.mul(&p.inverse().unwrap()).unwrap().is_one());
    }

    #[test]
    fn reflexive_chern_formulas_agree(f in reflexive_strategy()) {
        let total = f.chern_total();
        prop_assert_eq!(&total, &chern_general(&f.to_multifiltration()).unwrap());
        for k in 3..=f.n() {
            prop_assert_eq!(total.coeff(k), f.chern_k_general(k).unwrap());
        }
        let b = f.normalize(Normalization::BZero);
        for k in 0..=f.n() {
            prop_assert_eq!(b.chern_total().coeff(k), b.elementary_symmetric(k));
        }
        prop_assert_eq!(f.is_locally_free(), f.elementary_symmetric(3).is_zero());
    }

    #[test]
    fn discriminant_slope_and_stability(f in reflexive_strategy()) {
        let d = f.discriminant();
        prop_assert_eq!(&d, &f.normalize(Normalization::AZero).discriminant());
        prop_assert_eq!(&d, &f.normalize(Normalization::BZero).discriminant());
        let c1 = f.chern_total().coeff(1);
        prop_assert_eq!(f.slope(), BigRational::new(c1, BigInt::from(2)));
        if f.stability().is_semistable() {
            prop_assert!(d >= BigInt::zero());
        }
        prop_assert_eq!(f.stability(), f.normalize(Normalization::AZero).stability());
    }

    #[test]
    fn saturated_ratio_logs(k0 in 1usize..=6, n in 1usize..=6, m in -6i64..=6) {
        prop_assume!(k0 <= n);
        let m = BigInt::from(m);
        let ratio = ratio_saturated(k0, &m, n).unwrap();
        prop_assert_eq!(log_ratio_saturated(k0, &m, n).exp().unwrap(), ratio.to_rational());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hull_evaluation_and_delta(seed in 0u64..10_000, n in 3usize..=4) {
        let (e, f) = dropped(seed, n, 2);
        let hull = e.reflexive_hull();
        prop_assert_eq!(&hull, &f);
        prop_assert_eq!(hull.reflexive_hull(), hull.clone());
        prop_assert!(e.is_contained_in(&hull).unwrap());
        prop_assert_eq!(delta(&e, &f).unwrap().is_zero(), e == f);
        prop_assert!(delta(&f, &f).unwrap().is_zero());
        // Monotone along every axis, sampled around the breakpoints.
        for cone in f.fan().all_cones().into_iter().filter(|c| c.dim() > 0) {
            for point in grid_points(&e.breakpoints(&cone)).iter().take(40) {
                let here = e.evaluate(&cone, point).unwrap();
                for axis in 0..point.len() {
                    let mut up = point.clone();
                    up[axis] += 1;
                    prop_assert!(e.evaluate(&cone, &up).unwrap().contains(&here));
                }
            }
        }
    }

    #[test]
    fn factorization_recomposes(seed in 0u64..10_000, n in 3usize..=5) {
        let (e, f) = dropped(seed, n, 2);
        let steps = factorize(&e, &f).unwrap();
        prop_assert_eq!(recompose(&f, &steps).unwrap(), e.clone());
        prop_assert!(steps.windows(2).all(|w| w[0].k0 <= w[1].k0));
        prop_assert_eq!(steps.is_empty(), e == f);
    }

    #[test]
    fn profile_survives_twists(seed in 0u64..10_000, shift in prop::collection::vec(-3i64..=3, 5)) {
        let (e, f) = dropped(seed, 4, 2);
        prop_assume!(e != f);
        let twisted = e.twist(&shift).unwrap();
        let (a, b) = (torsion_profile(&e).unwrap(), torsion_profile(&twisted).unwrap());
        prop_assert_eq!((a.q, a.p), (b.q, b.p));
    }

    #[test]
    fn documents_round_trip(seed in 0u64..10_000) {
        let (e, _) = dropped(seed, 3, 2);
        let v = serde_json::Value::Object(multifiltration_to_json(&e));
        prop_assert_eq!(multifiltration_from_json(&v).unwrap(), e.clone());
        let text = SheafDocument::multifiltration(e).with_label(format!("seed {seed}")).to_canonical_string();
        prop_assert_eq!(SheafDocument::parse(&text).unwrap().to_canonical_string(), text);
    }
}

/// Every class whose coordinates are breakpoints, or one below the first.
fn grid_points(axes: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        let mut values = axis.clone();
        values.insert(0, axis.first().map_or(0, |x| x - 1));
        out = out
            .into_iter()
            .flat_map(|p| values.iter().map(move |v| [p.clone(), vec![*v]].concat()))
            .collect();
    }
    out
}

fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

#[test]
fn units_have_one_constant_term() {
    assert!(TruncIntPoly::one(3).coeff(0).is_one());
}
