use num_traits::{One, Zero};

use crate::error::{invariant, Result};
use crate::model::Instance;
use crate::rational::Rational;

/// Per-job split over machines. Only positive fractions are stored, keyed by
/// ascending machine index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalAssignment {
    parts: Vec<Vec<(usize, Rational)>>,
}

impl FractionalAssignment {
    pub fn from_parts(mut parts: Vec<Vec<(usize, Rational)>>) -> Self {
        for p in &mut parts {
            p.retain(|(_, x)| *x > Rational::zero());
            p.sort_by_key(|&(i, _)| i);
        }
        FractionalAssignment { parts }
    }

    pub fn job_count(&self) -> usize {
        self.parts.len()
    }

    pub fn job(&self, job: usize) -> &[(usize, Rational)] {
        &self.parts[job]
    }

    pub fn fraction(&self, job: usize, machine: usize) -> Rational {
        self.parts[job]
            .iter()
            .find(|&&(i, _)| i == machine)
            .map(|&(_, x)| x)
            .unwrap_or_else(Rational::zero)
    }

    /// The machine when `job` sits entirely on one machine.
    pub fn integral_machine(&self, job: usize) -> Option<usize> {
        match self.parts[job].as_slice() {
            [(i, x)] if x.is_one() => Some(*i),
            _ => None,
        }
    }

    pub fn fractional_jobs(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.parts.len()).filter(move |&j| self.integral_machine(j).is_none())
    }

    pub fn is_integral(&self) -> bool {
        self.fractional_jobs().next().is_none()
    }

    pub fn machine_loads(&self, instance: &Instance) -> Vec<Rational> {
        let mut loads = vec![Rational::zero(); instance.machine_count];
        for (job, parts) in instance.jobs.iter().zip(&self.parts) {
            for &(i, x) in parts {
                loads[i] += job.size * x;
            }
        }
        loads
    }

    pub fn max_load(&self, instance: &Instance) -> Rational {
        self.machine_loads(instance)
            .into_iter()
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Every job sums to exactly one over its allowed machines.
    pub fn check_complete(&self, instance: &Instance) -> Result<()> {
        invariant(self.parts.len() == instance.jobs.len(), || {
            "assignment job count differs from instance".into()
        })?;
        for (j, (job, parts)) in instance.jobs.iter().zip(&self.parts).enumerate() {
            let total: Rational = parts.iter().map(|&(_, x)| x).sum();
            invariant(total.is_one(), || {
                format!("job {j} fractions sum to {total}")
            })?;
            for &(i, x) in parts {
                invariant(job.allows(i), || {
                    format!("job {j} placed on disallowed machine {i}")
                })?;
                invariant(x <= Rational::one(), || {
                    format!("job {j} fraction {x} above one")
                })?;
            }
        }
        Ok(())
    }
}
