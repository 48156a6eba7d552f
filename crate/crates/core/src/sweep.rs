//! Exhaustive verification of the multinorm comparison over small groups.
//!
//! Every abelian group up to a given order is taken with every ordered pair of
//! subgroups `(N₁, N₂)` meeting trivially. Each such tower is certified for the
//! family of all cyclic subgroups and for a number of seeded random families.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::abgroup::{Elem, FinAbGroup, Subgroup};
use crate::error::{Error, Result};
use crate::obstruction::{AbelianTower, Theorem1Certificate};

/// Subgroup pairs are tracked as bitmasks over element indices.
pub const MAX_SWEEP_ORDER: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub max_order: u64,
    /// Random families per tower, in addition to the all-cyclic family.
    pub families: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_order: 32,
            families: 25,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepFailure {
    pub group: FinAbGroup,
    pub n1: Vec<Elem>,
    pub n2: Vec<Elem>,
    /// 0 is the all-cyclic family, `k ≥ 1` the `k`-th random one.
    pub family: usize,
    pub checks: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub groups: usize,
    pub towers: usize,
    pub certificates: usize,
    /// Certificates whose `Sha(E)` is nontrivial.
    pub nontrivial: usize,
    pub failures: Vec<SweepFailure>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Order checks tying the certificate to the exact sequence
/// `1 → Sha_∩ → Sha(L₁) × Sha(L₂) → Coker(T) → 1`.
pub fn exact_sequence_failures(cert: &Theorem1Certificate) -> Vec<&'static str> {
    let mut out = Vec::new();
    let both = cert.sha_1.order() * cert.sha_2.order();
    let se = cert.sha_e.order();
    if &both % &se != num_bigint::BigUint::from(0u32) {
        out.push("intersection_order_integral");
        return out;
    }
    let intersection = &both / &se;
    if intersection.clone() * cert.coker_t.order() != both {
        out.push("exact_sequence_orders");
    }
    if intersection != cert.image_t_order {
        out.push("intersection_is_image_of_t");
    }
    out
}

struct GroupJob {
    group: FinAbGroup,
    subgroups: Vec<Subgroup>,
    masks: Vec<u64>,
    cyclic: Vec<Vec<Elem>>,
}

impl GroupJob {
    fn new(group: FinAbGroup) -> Result<Self> {
        let subgroups = group.all_subgroups(MAX_SWEEP_ORDER)?;
        let masks = subgroups
            .iter()
            .map(|s| {
                s.elements()
                    .iter()
                    .fold(0u64, |m, x| m | 1 << group.element_index(x))
            })
            .collect();
        let cyclic = subgroups
            .iter()
            .filter(|s| s.is_cyclic() && !s.is_trivial())
            .map(|s| s.generators().to_vec())
            .collect();
        Ok(GroupJob {
            group,
            subgroups,
            masks,
            cyclic,
        })
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.subgroups.len();
        (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.masks[i] & self.masks[j] == 1)
            .collect()
    }

    fn random_family(&self, rng: &mut ChaCha8Rng) -> Vec<Vec<Elem>> {
        let k = rng.gen_range(1..=4);
        (0..k)
            .map(|_| {
                let s = &self.subgroups[rng.gen_range(0..self.subgroups.len())];
                s.generators().to_vec()
            })
            .collect()
    }
}

struct TowerOutcome {
    certificates: usize,
    nontrivial: usize,
    failures: Vec<SweepFailure>,
}

/// Additional per-certificate checks, called with the tower, the family index
/// (0 for the all-cyclic family), the family and its certificate. Returned
/// strings are recorded as failures.
pub type ExtraCheck<'a> =
    dyn Fn(&AbelianTower, usize, &[Vec<Elem>], &Theorem1Certificate) -> Vec<String> + Sync + 'a;

fn run_tower(
    job: &GroupJob,
    (i, j): (usize, usize),
    config: &SweepConfig,
    stream: u64,
    extra: &ExtraCheck<'_>,
) -> Result<TowerOutcome> {
    let n1 = job.subgroups[i].clone();
    let n2 = job.subgroups[j].clone();
    let failure = |family: usize, checks: Vec<String>| SweepFailure {
        group: job.group.clone(),
        n1: n1.generators().to_vec(),
        n2: n2.generators().to_vec(),
        family,
        checks,
    };
    let tower = AbelianTower::new(&job.group, n1.clone(), n2.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(stream);
    let mut out = TowerOutcome {
        certificates: 0,
        nontrivial: 0,
        failures: Vec::new(),
    };
    for family in 0..=config.families {
        let places = if family == 0 {
            job.cyclic.clone()
        } else {
            job.random_family(&mut rng)
        };
        let cert = match tower.certify(&places) {
            Ok(c) => c,
            Err(e) => {
                out.failures.push(failure(family, vec![e.to_string()]));
                continue;
            }
        };
        out.certificates += 1;
        if !cert.sha_e.is_trivial() {
            out.nontrivial += 1;
        }
        let mut checks: Vec<String> = cert.failures.iter().map(|s| s.to_string()).collect();
        checks.extend(exact_sequence_failures(&cert).iter().map(|s| s.to_string()));
        checks.extend(extra(&tower, family, &places, &cert));
        if !checks.is_empty() {
            out.failures.push(failure(family, checks));
        }
    }
    Ok(out)
}

/// Runs the sweep; towers are processed in parallel and merged in a fixed
/// order, so the report depends only on the configuration.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    run_sweep_with(config, &|_, _, _, _| Vec::new())
}

/// [`run_sweep`] with extra checks run on every certificate.
pub fn run_sweep_with(config: &SweepConfig, extra: &ExtraCheck<'_>) -> Result<SweepReport> {
    if config.max_order > MAX_SWEEP_ORDER {
        return Err(Error::SizeLimit(format!(
            "sweeps are limited to order {MAX_SWEEP_ORDER}"
        )));
    }
    let mut report = SweepReport::default();
    let mut stream = 0u64;
    for group in FinAbGroup::all_up_to_order(config.max_order) {
        let job = GroupJob::new(group)?;
        let pairs = job.pairs();
        let outcomes: Vec<Result<TowerOutcome>> = pairs
            .par_iter()
            .enumerate()
            .map(|(k, &pair)| run_tower(&job, pair, config, stream + k as u64, extra))
            .collect();
        stream += pairs.len() as u64;
        report.groups += 1;
        report.towers += pairs.len();
        for o in outcomes {
            let o = o?;
            report.certificates += o.certificates;
            report.nontrivial += o.nontrivial;
            report.failures.extend(o.failures);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sweep_is_clean_and_deterministic() {
        let config = SweepConfig {
            max_order: 8,
            families: 3,
            seed: 7,
        };
        let a = run_sweep(&config).unwrap();
        assert!(a.passed(), "{:?}", a.failures);
        assert!(a.nontrivial > 0);
        assert_eq!(a, run_sweep(&config).unwrap());
    }

    #[test]
    fn extra_checks_are_reported() {
        let config = SweepConfig {
            max_order: 4,
            families: 1,
            seed: 0,
        };
        let r = run_sweep_with(&config, &|t, _, _, _| {
            if t.ge().is_trivial() {
                Vec::new()
            } else {
                vec!["nontrivial_intersection".into()]
            }
        })
        .unwrap();
        assert!(!r.passed());
        assert!(r
            .failures
            .iter()
            .all(|f| f.checks == ["nontrivial_intersection"]));
    }

    #[test]
    fn rejects_large_orders() {
        let config = SweepConfig {
            max_order: 128,
            ..SweepConfig::default()
        };
        assert!(run_sweep(&config).is_err());
    }
}
