//! Arbitrary two sizes via the unit-fraction reductions.
//!
//! With sizes `{1/alpha, 1}` the small size is rounded to `1/ceil(alpha)`
//! (instance I1) and to `1/floor(alpha)` (instance I2). Both are `{1, k}`
//! instances; their schedules are evaluated under the original sizes and the
//! best one, together with the forest-rounding baseline, is returned.

use num_traits::{One, Zero};

use crate::bounds::{Family, GuaranteeReport, Regime};
use crate::error::{invariant, Result};
use crate::lenstra::lenstra_solve;
use crate::model::{makespan, normalize, scale_to_integer, Instance, Schedule};
use crate::rational::{ceil, floor, int, ratio, Rational};
use crate::unitk::{solve_unit_k, Rounded};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reduction {
    /// Small size `1/ceil(alpha)`.
    I1,
    /// Small size `1/floor(alpha)`.
    I2,
}

impl Reduction {
    pub fn name(&self) -> &'static str {
        match self {
            Reduction::I1 => "I1",
            Reduction::I2 => "I2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub which: Reduction,
    /// Normalized, with the small size replaced.
    pub instance: Instance,
    /// `ceil(alpha)/alpha` for I1, `floor(alpha)/alpha` for I2.
    pub factor: Rational,
}

/// Replaces the small size of a normalized instance (`alpha > 1`).
pub fn build_reduced(normalized: &Instance, which: Reduction) -> ReducedInstance {
    let alpha = Rational::one() / normalized.small_size();
    let denom = match which {
        Reduction::I1 => ceil(&alpha),
        Reduction::I2 => floor(&alpha),
    };
    let small = ratio(1, denom);
    let instance = normalized.map_sizes(|s| if s.is_one() { s } else { small });
    ReducedInstance {
        which,
        instance,
        factor: int(denom) / alpha,
    }
}

/// Evaluates a reduced-instance schedule under the original sizes.
pub fn lift(
    schedule: &Schedule,
    reduced: &ReducedInstance,
    original: &Instance,
) -> Result<(Schedule, Rational)> {
    schedule.check(&reduced.instance)?;
    let span = makespan(original, schedule)?;
    Ok((schedule.clone(), span))
}

/// Per-machine bound on lifted loads. A machine that ends up with a big job
/// held at least `min_big` of big fractions in the relaxation, so its load in
/// normalized units is at most `1 + (T* - min_big) * factor`. When the
/// reduction makes both sizes equal there is no big class and lifting can
/// only shrink loads, so every machine stays within `T*`.
pub(crate) fn check_lift_bound(
    normalized: &Instance,
    reduced: &ReducedInstance,
    schedule: &Schedule,
    estimate: Rational,
    min_big: Rational,
) -> Result<()> {
    let loads = normalized.loads(schedule)?;
    if reduced.instance.distinct_sizes().len() < 2 {
        for (i, l) in loads.iter().enumerate() {
            invariant(*l <= estimate, || {
                format!(
                    "{} lifted load {l} on machine {i} exceeds T* = {estimate}",
                    reduced.which.name()
                )
            })?;
        }
        return Ok(());
    }
    let cap = Rational::one() + (estimate - min_big) * reduced.factor;
    let mut has_big = vec![false; normalized.machine_count];
    for (j, &m) in schedule.assignment.iter().enumerate() {
        if normalized.is_big(j) {
            has_big[m] = true;
        }
    }
    for (i, l) in loads.iter().enumerate() {
        if has_big[i] {
            invariant(*l <= cap, || {
                format!(
                    "{} lifted load {l} on machine {i} exceeds 1 + (T* - {min_big}) * {}",
                    reduced.which.name(),
                    reduced.factor
                )
            })?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub name: &'static str,
    /// Original-units makespan, `None` when the branch produced nothing.
    pub makespan: Option<Rational>,
}

#[derive(Debug, Clone)]
pub struct TwoValuedRun {
    pub schedule: Schedule,
    pub makespan: Rational,
    pub chosen: &'static str,
    pub branches: Vec<Branch>,
    pub report: GuaranteeReport,
    /// Fractional optimum of the transportation relaxation, original units.
    pub lower_bound: Rational,
}

/// Collects branch results and keeps the first minimum.
#[derive(Debug, Default)]
pub(crate) struct Race {
    entries: Vec<(&'static str, Option<(Schedule, Rational)>)>,
    /// Some throttled relaxation was infeasible, so every schedule stacks two
    /// big jobs somewhere.
    pub stacked: bool,
}

impl Race {
    pub fn enter(&mut self, name: &'static str, result: Option<(Schedule, Rational)>) {
        self.entries.push((name, result));
    }

    pub fn finish(
        self,
        original: &Instance,
        lower_bound: Rational,
        mut report: GuaranteeReport,
    ) -> Result<TwoValuedRun> {
        let branches = self
            .entries
            .iter()
            .map(|(name, r)| Branch {
                name,
                makespan: r.as_ref().map(|(_, m)| *m),
            })
            .collect();
        let mut best: Option<(&'static str, Schedule, Rational)> = None;
        for (name, r) in self.entries {
            if let Some((s, m)) = r {
                if best.as_ref().is_none_or(|(_, _, b)| m < *b) {
                    best = Some((name, s, m));
                }
            }
        }
        let (chosen, schedule, span) =
            best.ok_or_else(|| crate::Error::Invariant("no branch produced a schedule".into()))?;
        schedule.check(original)?;
        let two_big = original.big_size() * int(2);
        let regime = if span < two_big {
            Regime::BelowTwoBig
        } else if self.stacked || lower_bound >= two_big {
            Regime::AtLeastTwoBig
        } else {
            Regime::Unknown
        };
        report.set_regime(regime);
        Ok(TwoValuedRun {
            schedule,
            makespan: span,
            chosen,
            branches,
            report,
            lower_bound,
        })
    }
}

/// Best of the I1 and I2 reductions and the forest-rounding baseline.
pub fn solve_two_valued(instance: &Instance) -> Result<TwoValuedRun> {
    let base = lenstra_solve(instance)?;
    let mut race = Race::default();
    let (normalized, alpha) = normalize(instance)?;

    if instance.jobs.is_empty() || alpha.is_one() {
        let scaled = scale_to_integer(&normalized)?;
        let unit = solve_unit_k(&scaled)?
            .solved()
            .map(|r| makespan(instance, &r.schedule).map(|m| (r.schedule, m)))
            .transpose()?;
        race.enter("unit", unit);
    } else {
        let reductions: &[Reduction] = if alpha.is_integer() {
            &[Reduction::I2]
        } else {
            &[Reduction::I1, Reduction::I2]
        };
        for &which in reductions {
            let reduced = build_reduced(&normalized, which);
            let scaled = scale_to_integer(&reduced.instance)?;
            let result = match solve_unit_k(&scaled)? {
                Rounded::Solved(run) => {
                    let estimate = Rational::from(run.estimate as i128) * scaled.scale_factor;
                    check_lift_bound(
                        &normalized,
                        &reduced,
                        &run.schedule,
                        estimate,
                        scaled.scale_factor,
                    )?;
                    Some(lift(&run.schedule, &reduced, instance)?)
                }
                Rounded::NeedsFallback => {
                    race.stacked = true;
                    None
                }
            };
            race.enter(which.name(), result);
        }
    }
    race.enter("lenstra", Some((base.schedule.clone(), base.makespan)));

    let report = GuaranteeReport::new(Family::General, alpha);
    let lower = if instance.jobs.is_empty() {
        Rational::zero()
    } else {
        base.fractional_optimum
    };
    race.finish(instance, lower, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;

    fn normalized(alpha: Rational, jobs: &[(bool, &[usize])], m: usize) -> Instance {
        Instance::new(
            m,
            jobs.iter()
                .map(|&(big, a)| {
                    Job::new(
                        if big { int(1) } else { Rational::one() / alpha },
                        a.iter().copied(),
                    )
                })
                .collect(),
        )
    }

    #[test]
    fn reduced_sizes_and_factors() {
        let inst = normalized(ratio(5, 2), &[(true, &[0]), (false, &[0])], 1);
        let r1 = build_reduced(&inst, Reduction::I1);
        assert_eq!(r1.instance.distinct_sizes(), vec![ratio(1, 3), int(1)]);
        assert_eq!(r1.factor, ratio(6, 5));
        let r2 = build_reduced(&inst, Reduction::I2);
        assert_eq!(r2.instance.distinct_sizes(), vec![ratio(1, 2), int(1)]);
        assert_eq!(r2.factor, ratio(4, 5));
        assert!(r1.instance.small_size() <= inst.small_size());
        assert!(inst.small_size() <= r2.instance.small_size());

        let inst = normalized(int(3), &[(true, &[0]), (false, &[0])], 1);
        let r2 = build_reduced(&inst, Reduction::I2);
        assert_eq!(r2.instance, inst);
        assert_eq!(r2.factor, int(1));

        let inst = normalized(ratio(8, 5), &[(true, &[0]), (false, &[0])], 1);
        let r1 = build_reduced(&inst, Reduction::I1);
        assert_eq!(
            (r1.instance.small_size(), r1.factor),
            (ratio(1, 2), ratio(5, 4))
        );
        let r2 = build_reduced(&inst, Reduction::I2);
        assert_eq!((r2.instance.small_size(), r2.factor), (int(1), ratio(5, 8)));
    }

    #[test]
    fn lift_substitutes_original_sizes() {
        let inst = normalized(
            ratio(5, 2),
            &[(false, &[0]), (false, &[0]), (true, &[1])],
            2,
        );
        let r1 = build_reduced(&inst, Reduction::I1);
        let s = Schedule::new(vec![0, 0, 1]);
        assert_eq!(makespan(&r1.instance, &s).unwrap(), int(1));
        let loads = inst.loads(&s).unwrap();
        assert_eq!(loads[0], ratio(4, 5));
        assert_eq!(lift(&s, &r1, &inst).unwrap().1, int(1));

        let bigs = normalized(
            ratio(5, 2),
            &[(true, &[0]), (true, &[0, 1]), (false, &[1])],
            2,
        );
        let r2 = build_reduced(&bigs, Reduction::I2);
        let s = Schedule::new(vec![0, 0, 1]);
        assert_eq!(lift(&s, &r2, &bigs).unwrap().1, int(2));
    }

    #[test]
    fn integer_alpha_skips_i1() {
        let inst = Instance::new(
            2,
            vec![
                Job::new(int(2), [0, 1]),
                Job::new(int(1), [0]),
                Job::new(int(1), [0, 1]),
            ],
        );
        let run = solve_two_valued(&inst).unwrap();
        let names: Vec<_> = run.branches.iter().map(|b| b.name).collect();
        assert_eq!(names, vec!["I2", "lenstra"]);
        assert_eq!(run.makespan, int(2));
        assert_eq!(run.report.certified, ratio(3, 2));
    }

    #[test]
    fn best_branch_is_the_minimum() {
        let inst = normalized(
            ratio(5, 2),
            &[
                (true, &[0, 1]),
                (true, &[1, 2]),
                (false, &[0]),
                (false, &[0, 2]),
                (false, &[2]),
            ],
            3,
        );
        let run = solve_two_valued(&inst).unwrap();
        for b in &run.branches {
            if let Some(m) = b.makespan {
                assert!(run.makespan <= m);
            }
        }
        assert_eq!(makespan(&inst, &run.schedule).unwrap(), run.makespan);
    }

    #[test]
    fn single_size_is_exact() {
        let inst = Instance::new(2, (0..5).map(|_| Job::new(int(4), [0, 1])).collect());
        let run = solve_two_valued(&inst).unwrap();
        assert_eq!(run.makespan, int(12));
        assert_eq!(run.report.certified, int(1));
    }
}
