//! Exact optima for desk-sized instances.
//!
//! Two enumerators: a depth-first search that prunes on the incumbent and a
//! plain odometer over every job-to-machine choice. They share nothing but
//! the integer scaling of sizes.

use crate::error::{Error, Result};
use crate::model::{makespan, Instance, Schedule};
use crate::rational::{common_denominator, Rational};

/// Default node limit, also used by the command-line tool.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub opt_makespan: Rational,
    pub witness: Schedule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass { ratio: Rational, opt: Rational },
    Fail { ratio: Rational, opt: Rational },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn ratio(&self) -> Rational {
        match self {
            Verdict::Pass { ratio, .. } | Verdict::Fail { ratio, .. } => *ratio,
        }
    }
}

struct Scaled {
    unit: i128,
    sizes: Vec<i128>,
    big: Vec<bool>,
}

fn integer_sizes(instance: &Instance) -> Result<Scaled> {
    instance.validate()?;
    let unit = common_denominator(instance.jobs.iter().map(|j| &j.size));
    let sizes = instance
        .jobs
        .iter()
        .map(|j| (j.size * Rational::from(unit)).to_integer())
        .collect();
    let big = (0..instance.jobs.len())
        .map(|j| instance.is_big(j))
        .collect();
    Ok(Scaled { unit, sizes, big })
}

struct Search<'a> {
    instance: &'a Instance,
    sizes: &'a [i128],
    big: &'a [bool],
    order: Vec<usize>,
    one_big_per_machine: bool,
    loads: Vec<i128>,
    bigs: Vec<u8>,
    current: Vec<usize>,
    best: Option<(i128, Vec<usize>)>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, depth: usize, max_load: i128) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        if let Some((best, _)) = &self.best {
            if max_load >= *best {
                return Ok(());
            }
        }
        if depth == self.order.len() {
            self.best = Some((max_load, self.current.clone()));
            return Ok(());
        }
        let j = self.order[depth];
        let mut machines = self.instance.jobs[j].allowed.clone();
        machines.sort_by_key(|&i| (self.loads[i], i));
        for i in machines {
            if self.one_big_per_machine && self.big[j] && self.bigs[i] > 0 {
                continue;
            }
            self.loads[i] += self.sizes[j];
            self.bigs[i] += u8::from(self.big[j]);
            self.current[j] = i;
            let result = self.run(depth + 1, max_load.max(self.loads[i]));
            self.loads[i] -= self.sizes[j];
            self.bigs[i] -= u8::from(self.big[j]);
            result?;
        }
        Ok(())
    }
}

fn search(
    instance: &Instance,
    budget: u64,
    one_big_per_machine: bool,
) -> Result<Option<OracleResult>> {
    let scaled = integer_sizes(instance)?;
    let n = instance.jobs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| {
        (
            std::cmp::Reverse(scaled.sizes[j]),
            instance.jobs[j].allowed.len(),
            j,
        )
    });
    let mut s = Search {
        instance,
        sizes: &scaled.sizes,
        big: &scaled.big,
        order,
        one_big_per_machine,
        loads: vec![0; instance.machine_count],
        bigs: vec![0; instance.machine_count],
        current: vec![0; n],
        best: None,
        nodes: 0,
        budget,
    };
    s.run(0, 0)?;
    Ok(s.best.map(|(span, assignment)| OracleResult {
        opt_makespan: Rational::new(span, scaled.unit),
        witness: Schedule::new(assignment),
    }))
}

/// Exact optimum by pruned depth-first search.
pub fn brute_force_opt(instance: &Instance, budget: u64) -> Result<OracleResult> {
    search(instance, budget, false)?
        .ok_or_else(|| Error::Invariant("valid instance without a schedule".into()))
}

/// Best schedule with at most one big job per machine, `None` if there is
/// none.
pub fn restricted_opt(instance: &Instance, budget: u64) -> Result<Option<OracleResult>> {
    search(instance, budget, true)
}

/// Exact optimum by visiting every assignment, no pruning. `budget` limits
/// the number of complete assignments.
pub fn exhaustive_opt(instance: &Instance, budget: u64) -> Result<OracleResult> {
    let scaled = integer_sizes(instance)?;
    let n = instance.jobs.len();
    let mut digits = vec![0usize; n];
    let mut best: Option<(i128, Vec<usize>)> = None;
    let mut visited = 0u64;
    loop {
        visited += 1;
        if visited > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let mut loads = vec![0i128; instance.machine_count];
        for (j, &d) in digits.iter().enumerate() {
            loads[instance.jobs[j].allowed[d]] += scaled.sizes[j];
        }
        let span = loads.into_iter().max().unwrap_or(0);
        if best.as_ref().is_none_or(|(b, _)| span < *b) {
            let assignment = digits
                .iter()
                .enumerate()
                .map(|(j, &d)| instance.jobs[j].allowed[d])
                .collect();
            best = Some((span, assignment));
        }
        let mut pos = 0;
        loop {
            if pos == n {
                let (span, assignment) = best.expect("at least one assignment visited");
                return Ok(OracleResult {
                    opt_makespan: Rational::new(span, scaled.unit),
                    witness: Schedule::new(assignment),
                });
            }
            digits[pos] += 1;
            if digits[pos] < instance.jobs[pos].allowed.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Passes iff `makespan(schedule) <= bound * OPT`.
pub fn verify_ratio(
    instance: &Instance,
    schedule: &Schedule,
    bound: Rational,
    budget: u64,
) -> Result<Verdict> {
    let span = makespan(instance, schedule)?;
    let opt = brute_force_opt(instance, budget)?.opt_makespan;
    Ok(verdict(span, opt, bound))
}

/// Compares a makespan against a known optimum.
pub fn verdict(span: Rational, opt: Rational, bound: Rational) -> Verdict {
    let ratio = if opt == Rational::from(0) {
        Rational::from(1)
    } else {
        span / opt
    };
    if span <= bound * opt {
        Verdict::Pass { ratio, opt }
    } else {
        Verdict::Fail { ratio, opt }
    }
}
