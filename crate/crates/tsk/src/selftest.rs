//! Randomized cross-checks behind the hidden `selftest` command.

use rand::Rng;
use serde_json::{json, Map, Value};

use torsheaf::chern_engine::chern_general;
use torsheaf::multifilt::{factorize, recompose};
use torsheaf::obstruct::{leading_log_check, obstruction_verdict, Verdict};
use torsheaf::reflexive_r2::discriminant;
use torsheaf::sample::{random_drops, random_reflexive, rng};
use torsheaf::Error;

use crate::Outcome;

#[derive(Default)]
struct Tally {
    run: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.run += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn to_json(&self) -> Value {
        json!({"run": self.run, "failures": self.failures.len(), "first_failure": self.failures.first()})
    }
}

pub fn run(seed: u64, count: usize) -> Result<Outcome, Error> {
    let mut r = rng(seed);
    let mut chern = Tally::default();
    let mut factor = Tally::default();
    let mut bg = Tally::default();
    let mut obstruct = Tally::default();
    for i in 0..count {
        let n = r.gen_range(3..=5);
        let f = random_reflexive(&mut r, n, 6, true)?;
        let fm = f.to_multifiltration();
        let general = chern_general(&fm)?;
        let agree = general == f.chern_total() && f.chern_symmetric().map_or(true, |s| s == general);
        chern.check(agree, || format!("instance {i}: {:?}", f.c_values()));
        if f.stability().is_semistable() {
            let delta = discriminant(&general);
            bg.check(delta >= 0.into(), || format!("instance {i}: Δ = {delta}"));
        }

        let len = r.gen_range(1..=6);
        let e = random_drops(&mut r, &fm, len, &[2, 3, 4, 5])?;
        let steps = factorize(&e, &fm)?;
        let monotone = steps.windows(2).all(|w| w[0].k0 <= w[1].k0);
        factor.check(recompose(&fm, &steps)? == e && monotone, || format!("instance {i}: {} steps", steps.len()));

        let dims: &[usize] = if r.gen_bool(0.5) { &[2, 4, 5] } else { &[4, 5] };
        let e = random_drops(&mut r, &fm, len, dims)?;
        if e != fm {
            let report = obstruction_verdict(&e);
            let ok = match &report {
                Ok(rep) => {
                    leading_log_check(&e)?
                        && match &rep.verdict {
                            Verdict::NotSmoothable { value, .. } => value != &0.into(),
                            Verdict::Inconclusive { .. } => true,
                        }
                }
                Err(Error::Consistency(_)) => false,
                Err(other) => return Err(other.clone()),
            };
            obstruct.check(ok, || format!("instance {i}: {report:?}"));
        }
    }
    let mut checks = Map::new();
    let all = [("chern", &chern), ("factorize", &factor), ("bogomolov_gieseker", &bg), ("obstruction", &obstruct)];
    let failed = all.iter().any(|(_, t)| !t.failures.is_empty());
    for (name, t) in all {
        checks.insert(name.into(), t.to_json());
    }
    Ok(Outcome { code: if failed { 3 } else { 0 }, payload: json!({"seed": seed, "count": count, "checks": checks}) })
}
