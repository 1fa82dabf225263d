//! Seeded random instances with sizes `{1/alpha, 1}`.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{Instance, Job};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub jobs: usize,
    pub machines: usize,
    /// At least 1.
    pub alpha: Rational,
    /// At most two allowed machines per job.
    pub gb: bool,
    /// Skip forcing a big job into the instance.
    pub allow_no_big: bool,
}

impl GenConfig {
    pub fn new(seed: u64, jobs: usize, machines: usize, alpha: Rational) -> Self {
        GenConfig {
            seed,
            jobs,
            machines,
            alpha,
            gb: false,
            allow_no_big: false,
        }
    }

    pub fn gb(mut self, gb: bool) -> Self {
        self.gb = gb;
        self
    }

    pub fn allow_no_big(mut self, allow: bool) -> Self {
        self.allow_no_big = allow;
        self
    }
}

/// Same config, same instance.
pub fn generate(config: &GenConfig) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let m = config.machines.max(1);
    let max_allowed = if config.gb { m.min(2) } else { m };
    let mut big: Vec<bool> = (0..config.jobs).map(|_| rng.gen_bool(0.5)).collect();
    if !config.allow_no_big && config.jobs > 0 && !big.iter().any(|&b| b) {
        let j = rng.gen_range(0..config.jobs);
        big[j] = true;
    }
    let small = Rational::from(1) / config.alpha;
    let jobs = big
        .into_iter()
        .map(|b| {
            let count = rng.gen_range(1..=max_allowed);
            let allowed = sample(&mut rng, m, count).into_vec();
            Job::new(if b { Rational::from(1) } else { small }, allowed)
        })
        .collect();
    Instance::new(m, jobs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::print_instance;
    use crate::rational::ratio;

    #[test]
    fn deterministic() {
        let c = GenConfig::new(7, 10, 4, ratio(5, 2));
        assert_eq!(print_instance(&generate(&c)), print_instance(&generate(&c)));
        let other = GenConfig::new(8, 10, 4, ratio(5, 2));
        assert_ne!(generate(&c), generate(&other));
    }

    #[test]
    fn shapes() {
        for seed in 0..200 {
            let inst = generate(&GenConfig::new(seed, 6, 4, ratio(3, 2)).gb(true));
            inst.validate().unwrap();
            assert!(inst.is_graph_balancing());
            assert!(inst.jobs.iter().any(|j| j.size == Rational::from(1)));
            for j in &inst.jobs {
                assert!(j.size == Rational::from(1) || j.size == ratio(2, 3));
            }
        }
    }

    #[test]
    fn all_small_only_on_request() {
        let found = (0..200).any(|seed| {
            let inst = generate(&GenConfig::new(seed, 2, 2, ratio(3, 1)).allow_no_big(true));
            inst.jobs.iter().all(|j| j.size == ratio(1, 3))
        });
        assert!(found);
    }
}
