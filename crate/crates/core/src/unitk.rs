//! Rounding for `{1, k}` instances: match every big job to a machine that
//! holds a fraction of it, leave small jobs where the flow put them.

use std::collections::BTreeMap;

use crate::error::{invariant, Error, Result};
use crate::flow::{extract_assignment, min_feasible_t};
use crate::fractional::FractionalAssignment;
use crate::matching::max_matching;
use crate::model::{makespan, ScaledInstance, Schedule};
use crate::rational::Rational;

/// Result of a rounding pipeline that relies on the throttled relaxation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rounded<T> {
    Solved(T),
    /// The relaxation is infeasible: every schedule puts two big jobs on one
    /// machine, so the optimum is at least twice the big size.
    NeedsFallback,
}

impl<T> Rounded<T> {
    pub fn solved(self) -> Option<T> {
        match self {
            Rounded::Solved(t) => Some(t),
            Rounded::NeedsFallback => None,
        }
    }
}

/// Bipartite graph between big jobs and the machines holding part of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigJobGraph {
    pub jobs: Vec<usize>,
    /// Machines with nonzero big fraction, ascending.
    pub machines: Vec<usize>,
    /// `adj[p]` lists machines adjacent to `jobs[p]`, ascending.
    pub adj: Vec<Vec<usize>>,
}

impl BigJobGraph {
    pub fn new(scaled: &ScaledInstance, x: &FractionalAssignment) -> Self {
        let jobs: Vec<usize> = scaled.big_jobs().collect();
        let adj: Vec<Vec<usize>> = jobs
            .iter()
            .map(|&j| x.job(j).iter().map(|&(i, _)| i).collect())
            .collect();
        let mut machines: Vec<usize> = adj.iter().flatten().copied().collect();
        machines.sort_unstable();
        machines.dedup();
        BigJobGraph {
            jobs,
            machines,
            adj,
        }
    }
}

/// Assigns each big job to a distinct machine carrying a fraction of it.
///
/// Hall's condition holds for every flow extraction (each job sums to one,
/// each machine to at most one), so an unmatched job means a bug upstream.
pub fn match_big_jobs(
    scaled: &ScaledInstance,
    x: &FractionalAssignment,
) -> Result<BTreeMap<usize, usize>> {
    let graph = BigJobGraph::new(scaled, x);
    let matched = max_matching(scaled.base.machine_count, &graph.adj);
    let mut out = BTreeMap::new();
    for (&job, m) in graph.jobs.iter().zip(matched) {
        let machine = m.ok_or_else(|| {
            Error::Invariant(format!("Hall matching left big job {job} unmatched"))
        })?;
        out.insert(job, machine);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct UnitKRun {
    pub schedule: Schedule,
    /// Minimum feasible estimate, in scaled units.
    pub estimate: i64,
    pub assignment: FractionalAssignment,
    pub big_matching: BTreeMap<usize, usize>,
    /// Makespan in scaled units.
    pub makespan: Rational,
}

/// Flow relaxation, extraction and Hall matching, with every structural
/// guarantee checked on the way out.
pub fn solve_unit_k(scaled: &ScaledInstance) -> Result<Rounded<UnitKRun>> {
    let Some(probe) = min_feasible_t(scaled) else {
        return Ok(Rounded::NeedsFallback);
    };
    probe.flow.check(&probe.network)?;
    let x = extract_assignment(&probe.network, &probe.flow, scaled)?;
    let big_matching = match_big_jobs(scaled, &x)?;

    let mut assignment = Vec::with_capacity(scaled.base.jobs.len());
    for j in 0..scaled.base.jobs.len() {
        let machine = if scaled.is_big(j) {
            big_matching[&j]
        } else {
            x.integral_machine(j)
                .ok_or_else(|| Error::Invariant(format!("small job {j} is split")))?
        };
        assignment.push(machine);
    }
    let schedule = Schedule::new(assignment);
    let loads = scaled.base.loads(&schedule)?;

    let mut bigs = vec![0usize; scaled.base.machine_count];
    for &m in big_matching.values() {
        bigs[m] += 1;
    }
    invariant(bigs.iter().all(|&c| c <= 1), || {
        "machine with two big jobs".into()
    })?;
    for (&j, &m) in &big_matching {
        invariant(x.fraction(j, m) > Rational::from(0), || {
            format!("big job {j} matched to machine {m} without support")
        })?;
    }
    let cap = Rational::from((probe.estimate + scaled.k - 1) as i128);
    for (i, l) in loads.iter().enumerate() {
        invariant(*l <= cap, || {
            format!("machine {i} load {l} exceeds T* + k - 1 = {cap}")
        })?;
    }

    let span = makespan(&scaled.base, &schedule)?;
    Ok(Rounded::Solved(UnitKRun {
        schedule,
        estimate: probe.estimate,
        assignment: x,
        big_matching,
        makespan: span,
    }))
}
