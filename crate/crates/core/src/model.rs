//! Instances, schedules and the size transformations shared by every solver.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Job {
    pub size: Rational,
    /// Allowed machines, ascending and deduplicated.
    pub allowed: Vec<usize>,
}

impl Job {
    pub fn new(size: Rational, allowed: impl IntoIterator<Item = usize>) -> Self {
        let allowed: BTreeSet<usize> = allowed.into_iter().collect();
        Job {
            size,
            allowed: allowed.into_iter().collect(),
        }
    }

    pub fn allows(&self, machine: usize) -> bool {
        self.allowed.binary_search(&machine).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    pub machine_count: usize,
    pub jobs: Vec<Job>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("no machines")]
    NoMachines,
    #[error("empty allowed set (job {job})")]
    EmptyAllowedSet { job: usize },
    #[error("machine {machine} out of range (job {job})")]
    MachineOutOfRange { job: usize, machine: usize },
    #[error("non-positive size (job {job})")]
    NonPositiveSize { job: usize },
    #[error("more than two size values")]
    TooManySizes,
}

impl Instance {
    pub fn new(machine_count: usize, jobs: Vec<Job>) -> Self {
        Instance {
            machine_count,
            jobs,
        }
    }

    /// Checks every instance invariant and reports the first one broken.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if self.machine_count == 0 {
            return Err(Violation::NoMachines);
        }
        for (j, job) in self.jobs.iter().enumerate() {
            if job.allowed.is_empty() {
                return Err(Violation::EmptyAllowedSet { job: j });
            }
            if let Some(&machine) = job.allowed.iter().find(|&&i| i >= self.machine_count) {
                return Err(Violation::MachineOutOfRange { job: j, machine });
            }
            if job.size <= Rational::zero() {
                return Err(Violation::NonPositiveSize { job: j });
            }
        }
        if self.distinct_sizes().len() > 2 {
            return Err(Violation::TooManySizes);
        }
        Ok(())
    }

    pub fn job_count(&self) -> usize {
        self.jobs.len()
    }

    /// Distinct job sizes, ascending.
    pub fn distinct_sizes(&self) -> Vec<Rational> {
        let set: BTreeSet<Rational> = self.jobs.iter().map(|j| j.size).collect();
        set.into_iter().collect()
    }

    /// Largest job size, or zero for an empty instance.
    pub fn big_size(&self) -> Rational {
        self.jobs
            .iter()
            .map(|j| j.size)
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn small_size(&self) -> Rational {
        self.jobs
            .iter()
            .map(|j| j.size)
            .min()
            .unwrap_or_else(Rational::zero)
    }

    /// A job is big when the instance has two sizes and it carries the larger.
    pub fn is_big(&self, job: usize) -> bool {
        let size = self.jobs[job].size;
        size == self.big_size() && size != self.small_size()
    }

    pub fn total_size(&self) -> Rational {
        self.jobs.iter().map(|j| j.size).sum()
    }

    pub fn is_graph_balancing(&self) -> bool {
        self.jobs.iter().all(|j| j.allowed.len() <= 2)
    }

    /// Same allowed sets, sizes mapped through `f`.
    pub fn map_sizes(&self, mut f: impl FnMut(Rational) -> Rational) -> Instance {
        Instance {
            machine_count: self.machine_count,
            jobs: self
                .jobs
                .iter()
                .map(|j| Job {
                    size: f(j.size),
                    allowed: j.allowed.clone(),
                })
                .collect(),
        }
    }

    pub fn loads(&self, schedule: &Schedule) -> Result<Vec<Rational>> {
        schedule.check(self)?;
        let mut loads = vec![Rational::zero(); self.machine_count];
        for (job, &machine) in self.jobs.iter().zip(&schedule.assignment) {
            loads[machine] += job.size;
        }
        Ok(loads)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Schedule {
    /// `assignment[j]` is the machine running job `j`.
    pub assignment: Vec<usize>,
}

impl Schedule {
    pub fn new(assignment: Vec<usize>) -> Self {
        Schedule { assignment }
    }

    pub fn check(&self, instance: &Instance) -> Result<()> {
        if self.assignment.len() != instance.jobs.len() {
            return Err(Error::ScheduleLength {
                expected: instance.jobs.len(),
                got: self.assignment.len(),
            });
        }
        for (j, (&machine, job)) in self.assignment.iter().zip(&instance.jobs).enumerate() {
            if !job.allows(machine) {
                return Err(Error::NotAllowed { job: j, machine });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, m) in self.assignment.iter().enumerate() {
            writeln!(f, "assign {j} {m}")?;
        }
        Ok(())
    }
}

/// Maximum machine load. Empty machines contribute zero.
pub fn makespan(instance: &Instance, schedule: &Schedule) -> Result<Rational> {
    Ok(instance
        .loads(schedule)?
        .into_iter()
        .max()
        .unwrap_or_else(Rational::zero))
}

/// Divides all sizes by the big size. Returns the normalized instance and
/// `alpha = big / small`, which is 1 for single-sized instances.
pub fn normalize(instance: &Instance) -> Result<(Instance, Rational)> {
    instance.validate()?;
    if instance.jobs.is_empty() {
        return Ok((instance.clone(), Rational::one()));
    }
    let big = instance.big_size();
    let alpha = big / instance.small_size();
    Ok((instance.map_sizes(|s| s / big), alpha))
}

/// Instance with integer sizes in `{1, k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledInstance {
    pub base: Instance,
    pub k: i64,
    /// Multiplying a scaled size by this recovers the source size.
    pub scale_factor: Rational,
}

impl ScaledInstance {
    pub fn size(&self, job: usize) -> i64 {
        *self.base.jobs[job].size.numer() as i64
    }

    /// Size-`k` jobs are big only when `k > 1`; at `k = 1` every job is small.
    pub fn is_big(&self, job: usize) -> bool {
        self.k > 1 && self.size(job) == self.k
    }

    pub fn big_jobs(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.base.jobs.len()).filter(move |&j| self.is_big(j))
    }

    pub fn max_size(&self) -> i64 {
        (0..self.base.jobs.len())
            .map(|j| self.size(j))
            .max()
            .unwrap_or(0)
    }

    pub fn total_size(&self) -> i64 {
        (0..self.base.jobs.len()).map(|j| self.size(j)).sum()
    }
}

/// Rescales a two-valued instance whose big size is an integer multiple `k`
/// of its small size to sizes `{1, k}`.
pub fn scale_to_integer(instance: &Instance) -> Result<ScaledInstance> {
    instance.validate()?;
    if instance.jobs.is_empty() {
        return Ok(ScaledInstance {
            base: instance.clone(),
            k: 1,
            scale_factor: Rational::one(),
        });
    }
    let small = instance.small_size();
    let k = instance.big_size() / small;
    if !k.is_integer() {
        return Err(Error::NonIntegerRatio {
            small: rational::to_fraction_string(&small),
        });
    }
    Ok(ScaledInstance {
        base: instance.map_sizes(|s| s / small),
        k: k.to_integer() as i64,
        scale_factor: small,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn inst(m: usize, jobs: &[(Rational, &[usize])]) -> Instance {
        Instance::new(
            m,
            jobs.iter()
                .map(|(s, a)| Job::new(*s, a.iter().copied()))
                .collect(),
        )
    }

    #[test]
    fn validate_examples() {
        assert_eq!(inst(1, &[(int(1), &[0])]).validate(), Ok(()));
        let empty = inst(1, &[(int(1), &[])]);
        assert_eq!(empty.validate(), Err(Violation::EmptyAllowedSet { job: 0 }));
        assert!(empty
            .validate()
            .unwrap_err()
            .to_string()
            .starts_with("empty allowed set"));
        let three = inst(1, &[(int(1), &[0]), (int(2), &[0]), (int(3), &[0])]);
        assert_eq!(
            three.validate().unwrap_err().to_string(),
            "more than two size values"
        );
        assert_eq!(
            inst(2, &[(int(1), &[2])]).validate(),
            Err(Violation::MachineOutOfRange { job: 0, machine: 2 })
        );
        assert_eq!(
            inst(2, &[(int(0), &[0])]).validate(),
            Err(Violation::NonPositiveSize { job: 0 })
        );
    }

    #[test]
    fn makespan_examples() {
        let a = inst(2, &[(int(1), &[0, 1]), (int(1), &[0, 1])]);
        assert_eq!(makespan(&a, &Schedule::new(vec![0, 0])).unwrap(), int(2));
        let b = inst(2, &[(int(2), &[0, 1]), (int(1), &[0, 1])]);
        assert_eq!(makespan(&b, &Schedule::new(vec![0, 1])).unwrap(), int(2));
        let c = inst(3, &[]);
        assert_eq!(makespan(&c, &Schedule::new(vec![])).unwrap(), int(0));
    }

    #[test]
    fn makespan_rejects_disallowed_machine() {
        let a = inst(2, &[(int(1), &[0])]);
        assert_eq!(
            makespan(&a, &Schedule::new(vec![1])),
            Err(Error::NotAllowed { job: 0, machine: 1 })
        );
    }

    #[test]
    fn normalize_examples() {
        let (n, alpha) = normalize(&inst(1, &[(int(3), &[0]), (int(6), &[0])])).unwrap();
        assert_eq!(alpha, int(2));
        assert_eq!(n.distinct_sizes(), vec![ratio(1, 2), int(1)]);

        let (n, alpha) = normalize(&inst(1, &[(int(2), &[0]), (int(5), &[0])])).unwrap();
        assert_eq!(alpha, ratio(5, 2));
        assert_eq!(n.distinct_sizes(), vec![ratio(2, 5), int(1)]);

        let (n, alpha) = normalize(&inst(1, &[(int(4), &[0])])).unwrap();
        assert_eq!(alpha, int(1));
        assert_eq!(n.distinct_sizes(), vec![int(1)]);
    }

    #[test]
    fn scale_examples() {
        let s = scale_to_integer(&inst(1, &[(ratio(1, 3), &[0]), (int(1), &[0])])).unwrap();
        assert_eq!(s.k, 3);
        assert_eq!(s.scale_factor, ratio(1, 3));
        assert_eq!(s.base.distinct_sizes(), vec![int(1), int(3)]);
        assert!(s.is_big(1) && !s.is_big(0));

        let s = scale_to_integer(&inst(1, &[(int(1), &[0])])).unwrap();
        assert_eq!((s.k, s.scale_factor), (1, int(1)));
        assert!(!s.is_big(0));

        let err = scale_to_integer(&inst(1, &[(ratio(2, 5), &[0]), (int(1), &[0])])).unwrap_err();
        assert!(err.to_string().starts_with("non-integer ratio"));
    }

    #[test]
    fn rescaling_recovers_sizes() {
        let src = inst(
            2,
            &[(ratio(1, 4), &[0]), (int(1), &[1]), (ratio(1, 4), &[0, 1])],
        );
        let s = scale_to_integer(&src).unwrap();
        let back = s.base.map_sizes(|x| x * s.scale_factor);
        assert_eq!(back, src);
    }
}
