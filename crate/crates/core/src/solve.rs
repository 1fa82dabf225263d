//! Mode dispatch shared by the command-line tool and the browser demo.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::bounds::GuaranteeReport;
use crate::error::{Error, Result};
use crate::graph_balancing::{gb_solve_two_valued, GbInstance};
use crate::lenstra::lenstra_solve;
use crate::model::{makespan, scale_to_integer, Instance, Schedule};
use crate::oracle::{brute_force_opt, verdict, Verdict};
use crate::rational::{ratio, Rational};
use crate::two_valued::{solve_two_valued, Branch, TwoValuedRun};
use crate::unitk::solve_unit_k;

/// Wall clock that reads zero where the platform has no clock.
#[derive(Debug, Clone, Copy)]
struct Instant(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Instant {
    fn now() -> Self {
        Instant(
            #[cfg(not(target_arch = "wasm32"))]
            std::time::Instant::now(),
        )
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed();
        #[cfg(target_arch = "wasm32")]
        Duration::ZERO
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Auto,
    UnitK,
    Lenstra,
    Gb,
    TwoValued,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Auto,
        Mode::UnitK,
        Mode::Lenstra,
        Mode::Gb,
        Mode::TwoValued,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Auto => "auto",
            Mode::UnitK => "unitk",
            Mode::Lenstra => "lenstra",
            Mode::Gb => "gb",
            Mode::TwoValued => "two-valued",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode `{s}`"))
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    /// Mode actually run; `auto` resolves to `gb` or `two-valued`.
    pub mode: Mode,
    pub branches: Vec<Branch>,
    pub chosen: &'static str,
    pub schedule: Schedule,
    pub makespan: Rational,
    pub certified: Rational,
    pub guarantee: Option<GuaranteeReport>,
    /// Fractional lower bound on the optimum, original units.
    pub lower_bound: Rational,
    pub oracle: Option<Verdict>,
    pub wall_time: Duration,
}

impl RunReport {
    fn from_run(mode: Mode, run: TwoValuedRun, started: Instant) -> Self {
        RunReport {
            mode,
            branches: run.branches,
            chosen: run.chosen,
            schedule: run.schedule,
            makespan: run.makespan,
            certified: run.report.certified,
            guarantee: Some(run.report),
            lower_bound: run.lower_bound,
            oracle: None,
            wall_time: started.elapsed(),
        }
    }

    /// Attaches the exact optimum and the ratio against it.
    pub fn with_oracle(mut self, instance: &Instance, budget: u64) -> Result<Self> {
        let opt = brute_force_opt(instance, budget)?.opt_makespan;
        self.oracle = Some(verdict(self.makespan, opt, self.certified));
        Ok(self)
    }
}

/// Best of the unit-k rounding and the forest baseline on a `{s, ks}`
/// instance. Certified at `2 - 1/k`.
fn solve_unit_k_mode(instance: &Instance, started: Instant) -> Result<RunReport> {
    let scaled = scale_to_integer(instance)?;
    let base = lenstra_solve(instance)?;
    let unit = solve_unit_k(&scaled)?.solved();
    let mut branches = Vec::new();
    let mut best = (base.schedule.clone(), base.makespan, "lenstra");
    if let Some(run) = unit {
        let span = makespan(instance, &run.schedule)?;
        branches.push(Branch {
            name: "unit-k",
            makespan: Some(span),
        });
        if span <= best.1 {
            best = (run.schedule, span, "unit-k");
        }
    } else {
        branches.push(Branch {
            name: "unit-k",
            makespan: None,
        });
    }
    branches.push(Branch {
        name: "lenstra",
        makespan: Some(base.makespan),
    });
    let k = scaled.k as i128;
    let certified = if k == 1 {
        ratio(1, 1)
    } else {
        ratio(2 * k - 1, k)
    };
    Ok(RunReport {
        mode: Mode::UnitK,
        branches,
        chosen: best.2,
        schedule: best.0,
        makespan: best.1,
        certified,
        guarantee: None,
        lower_bound: base.fractional_optimum,
        oracle: None,
        wall_time: started.elapsed(),
    })
}

/// Forest rounding alone: fractional optimum plus one big job, certified at
/// `(T + b) / T` for fractional optimum `T`.
fn solve_lenstra_mode(instance: &Instance, started: Instant) -> Result<RunReport> {
    let base = lenstra_solve(instance)?;
    let bound = if base.fractional_optimum == Rational::from(0) {
        Rational::from(1)
    } else {
        (base.fractional_optimum + instance.big_size()) / base.fractional_optimum
    };
    let certified = bound.min(Rational::from(2));
    Ok(RunReport {
        mode: Mode::Lenstra,
        branches: vec![Branch {
            name: "lenstra",
            makespan: Some(base.makespan),
        }],
        chosen: "lenstra",
        makespan: base.makespan,
        schedule: base.schedule,
        certified,
        guarantee: None,
        lower_bound: base.fractional_optimum,
        oracle: None,
        wall_time: started.elapsed(),
    })
}

/// Runs `mode` on a validated instance.
pub fn run(instance: &Instance, mode: Mode) -> Result<RunReport> {
    instance.validate()?;
    let started = Instant::now();
    match mode {
        Mode::Auto if instance.is_graph_balancing() => run(instance, Mode::Gb),
        Mode::Auto => run(instance, Mode::TwoValued),
        Mode::UnitK => solve_unit_k_mode(instance, started),
        Mode::Lenstra => solve_lenstra_mode(instance, started),
        Mode::Gb => {
            let gb = GbInstance::new(instance.clone())?;
            Ok(RunReport::from_run(
                Mode::Gb,
                gb_solve_two_valued(&gb)?,
                started,
            ))
        }
        Mode::TwoValued => Ok(RunReport::from_run(
            Mode::TwoValued,
            solve_two_valued(instance)?,
            started,
        )),
    }
}

pub fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Invalid(_)
            | Error::Parse { .. }
            | Error::NonIntegerRatio { .. }
            | Error::NotGraphBalancing { .. }
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;
    use crate::rational::int;

    fn two_machines() -> Instance {
        Instance::new(
            2,
            vec![
                Job::new(int(2), [0, 1]),
                Job::new(int(1), [0]),
                Job::new(int(2), [0, 1]),
                Job::new(int(1), [1]),
            ],
        )
    }

    #[test]
    fn modes_parse() {
        for m in Mode::ALL {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert!("fast".parse::<Mode>().is_err());
    }

    #[test]
    fn auto_resolves_by_allowed_sets() {
        assert_eq!(run(&two_machines(), Mode::Auto).unwrap().mode, Mode::Gb);
        let wide = Instance::new(3, vec![Job::new(int(1), [0, 1, 2])]);
        assert_eq!(run(&wide, Mode::Auto).unwrap().mode, Mode::TwoValued);
    }

    #[test]
    fn one_job() {
        let inst = Instance::new(3, vec![Job::new(ratio(5, 2), [1, 2])]);
        let r = run(&inst, Mode::Auto).unwrap();
        assert_eq!(r.makespan, ratio(5, 2));
        assert_eq!(r.schedule.assignment.len(), 1);
    }

    #[test]
    fn unit_k_certifies_two_minus_one_over_k() {
        let r = run(&two_machines(), Mode::UnitK).unwrap();
        assert_eq!(r.certified, ratio(3, 2));
        assert_eq!(r.makespan, int(3));
        let r = r.with_oracle(&two_machines(), 1000).unwrap();
        assert!(r.oracle.unwrap().passed());
    }

    #[test]
    fn chosen_is_minimum() {
        for mode in Mode::ALL {
            let r = run(&two_machines(), mode).unwrap();
            let min = r.branches.iter().filter_map(|b| b.makespan).min().unwrap();
            assert_eq!(min, r.makespan, "{mode}");
        }
    }

    #[test]
    fn gb_rejects_wide_jobs() {
        let wide = Instance::new(3, vec![Job::new(int(1), [0, 1, 2])]);
        let e = run(&wide, Mode::Gb).unwrap_err();
        assert!(is_input_error(&e));
    }
}
