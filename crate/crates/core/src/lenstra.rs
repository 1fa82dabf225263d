//! Classical fractional assignment plus forest rounding.
//!
//! The fractional side is a transportation problem (job supply `p_j`, arcs to
//! allowed machines, machine capacity `T`) solved as an exact max flow. After
//! cycle canceling the support of the fractional jobs is a forest, and
//! rounding every fractional job to a child machine adds at most one job per
//! machine. That bounds the makespan by `T + b`.

use num_traits::Zero;

use crate::error::{invariant, Error, Result};
use crate::fractional::FractionalAssignment;
use crate::maxflow::Dinic;
use crate::model::{makespan, Instance, Schedule};
use crate::rational::{common_denominator, Rational};

/// Fractional assignment with every machine load at most `t`, if one exists.
pub fn fractional_assign_plain(instance: &Instance, t: Rational) -> Option<FractionalAssignment> {
    let n = instance.jobs.len();
    let m = instance.machine_count;
    let scale = common_denominator(instance.jobs.iter().map(|j| &j.size).chain([&t]));
    let units = |r: Rational| -> i64 { (r * scale).to_integer() as i64 };

    // source, jobs, machines, sink
    let sink = 1 + n + m;
    let mut dinic = Dinic::new(n + m + 2);
    let mut demand = 0;
    for (j, job) in instance.jobs.iter().enumerate() {
        dinic.add_arc(0, 1 + j, units(job.size));
        demand += units(job.size);
    }
    let mut job_arcs = Vec::new();
    for (j, job) in instance.jobs.iter().enumerate() {
        for &i in &job.allowed {
            job_arcs.push((j, i, dinic.add_arc(1 + j, 1 + n + i, units(job.size))));
        }
    }
    for i in 0..m {
        dinic.add_arc(1 + n + i, sink, units(t));
    }
    if dinic.max_flow(0, sink) != demand {
        return None;
    }
    let mut parts = vec![Vec::new(); n];
    for (j, i, arc) in job_arcs {
        let f = dinic.flow(arc);
        if f > 0 {
            parts[j].push((
                i,
                Rational::new(f as i128, units(instance.jobs[j].size) as i128),
            ));
        }
    }
    Some(FractionalAssignment::from_parts(parts))
}

/// Support graph of the fractional jobs. Jobs are nodes `0..n`, machines are
/// nodes `n..n+m`.
#[derive(Debug, Clone)]
pub struct SupportForest {
    jobs: usize,
    adj: Vec<Vec<usize>>,
}

impl SupportForest {
    pub fn new(instance: &Instance, x: &FractionalAssignment) -> Self {
        let n = instance.jobs.len();
        let mut adj = vec![Vec::new(); n + instance.machine_count];
        for j in x.fractional_jobs() {
            for &(i, _) in x.job(j) {
                adj[j].push(n + i);
                adj[n + i].push(j);
            }
        }
        SupportForest { jobs: n, adj }
    }

    fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.jobs).flat_map(move |j| self.adj[j].iter().map(move |&v| (j, v)))
    }

    /// Some cycle as an alternating node sequence starting at a job; the
    /// closing edge runs from the last node back to the first.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let mut forest: Vec<Vec<usize>> = vec![Vec::new(); self.adj.len()];
        for (u, v) in self.edges() {
            if let Some(path) = tree_path(&forest, v, u) {
                return Some(path);
            }
            forest[u].push(v);
            forest[v].push(u);
        }
        None
    }

    pub fn is_forest(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Each fractional job paired with the machine it rounds to: root every
    /// tree at its lowest machine, send each job to its lowest child machine.
    /// A machine has one parent job, so it receives at most one job.
    pub fn child_assignment(&self) -> Result<Vec<(usize, usize)>> {
        if !self.is_forest() {
            return Err(Error::CyclicSupport);
        }
        let n = self.jobs;
        let mut visited = vec![false; self.adj.len()];
        let mut out = Vec::new();
        for root in n..self.adj.len() {
            if visited[root] || self.adj[root].is_empty() {
                continue;
            }
            visited[root] = true;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                let mut kids: Vec<usize> = self.adj[v]
                    .iter()
                    .copied()
                    .filter(|&w| !visited[w])
                    .collect();
                kids.sort_unstable();
                if v < n {
                    let machine = *kids.first().ok_or_else(|| {
                        Error::Invariant(format!("fractional job {v} has no child machine"))
                    })?;
                    out.push((v, machine - n));
                }
                for &w in kids.iter().rev() {
                    visited[w] = true;
                    stack.push(w);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

fn tree_path(forest: &[Vec<usize>], from: usize, to: usize) -> Option<Vec<usize>> {
    let mut prev = vec![usize::MAX; forest.len()];
    prev[from] = from;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = vec![to];
            let mut cur = to;
            while cur != from {
                cur = prev[cur];
                path.push(cur);
            }
            return Some(path);
        }
        for &w in &forest[v] {
            if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Shifts load around support cycles until the fractional support is a
/// forest. Job totals and machine loads are left unchanged.
pub fn cancel_cycles(instance: &Instance, x: &FractionalAssignment) -> FractionalAssignment {
    let n = instance.jobs.len();
    let mut frac: Vec<Vec<(usize, Rational)>> =
        (0..x.job_count()).map(|j| x.job(j).to_vec()).collect();
    loop {
        let current = FractionalAssignment::from_parts(frac.clone());
        let Some(cycle) = SupportForest::new(instance, &current).find_cycle() else {
            return current;
        };
        // Edge t joins cycle[t] and cycle[t+1]; even edges gain, odd edges lose
        // the same amount of load.
        let len = cycle.len();
        let edge = |t: usize| {
            let (a, b) = (cycle[t], cycle[(t + 1) % len]);
            if a < n {
                (a, b - n)
            } else {
                (b, a - n)
            }
        };
        let get = |frac: &Vec<Vec<(usize, Rational)>>, j: usize, i: usize| {
            frac[j]
                .iter()
                .find(|p| p.0 == i)
                .map(|p| p.1)
                .unwrap_or_else(Rational::zero)
        };
        let step = (1..len)
            .step_by(2)
            .map(|t| {
                let (j, i) = edge(t);
                instance.jobs[j].size * get(&frac, j, i)
            })
            .min()
            .expect("cycle has at least four edges");
        for t in 0..len {
            let (j, i) = edge(t);
            let delta = step / instance.jobs[j].size;
            let entry = frac[j]
                .iter_mut()
                .find(|p| p.0 == i)
                .expect("cycle edge in support");
            if t % 2 == 0 {
                entry.1 += delta;
            } else {
                entry.1 -= delta;
            }
        }
    }
}

/// Rounds an assignment whose fractional support is a forest.
pub fn round_forest(instance: &Instance, x: &FractionalAssignment) -> Result<Schedule> {
    let forest = SupportForest::new(instance, x);
    let rounded = forest.child_assignment()?;
    let mut assignment = vec![usize::MAX; instance.jobs.len()];
    for j in 0..instance.jobs.len() {
        if let Some(i) = x.integral_machine(j) {
            assignment[j] = i;
        }
    }
    for &(j, i) in &rounded {
        assignment[j] = i;
    }
    let schedule = Schedule::new(assignment);
    schedule.check(instance)?;

    let mut received = vec![0usize; instance.machine_count];
    for &(j, i) in &rounded {
        invariant(x.fraction(j, i) > Rational::zero(), || {
            format!("job {j} rounded outside its support")
        })?;
        received[i] += 1;
    }
    invariant(received.iter().all(|&c| c <= 1), || {
        "machine received two rounded jobs".into()
    })?;
    let before = x.machine_loads(instance);
    let after = instance.loads(&schedule)?;
    let b = instance.big_size();
    for (i, (l0, l1)) in before.iter().zip(&after).enumerate() {
        invariant(*l1 <= *l0 + b, || {
            format!("rounding raised machine {i} from {l0} to {l1}, more than {b}")
        })?;
    }
    Ok(schedule)
}

/// Every achievable machine load at least the largest job: `a*b + c*s` over
/// the available job counts, ascending.
pub fn candidate_loads(instance: &Instance) -> Vec<Rational> {
    let sizes = instance.distinct_sizes();
    let count = |s: &Rational| instance.jobs.iter().filter(|j| j.size == *s).count() as i128;
    let floor = instance.big_size();
    let mut grid = Vec::new();
    match sizes.as_slice() {
        [] => grid.push(Rational::zero()),
        [v] => grid.extend((1..=count(v)).map(|a| *v * a)),
        [s, b, ..] => {
            for a in 0..=count(b) {
                for c in 0..=count(s) {
                    grid.push(*b * a + *s * c);
                }
            }
        }
    }
    grid.retain(|t| *t >= floor);
    grid.sort_unstable();
    grid.dedup();
    grid
}

#[derive(Debug, Clone)]
pub struct LenstraRun {
    pub schedule: Schedule,
    pub makespan: Rational,
    /// Smallest feasible candidate load; a lower bound on the optimum.
    pub fractional_optimum: Rational,
    /// Assignment after cycle canceling.
    pub fractional: FractionalAssignment,
}

/// Minimum feasible fractional load on the candidate grid.
pub fn min_fractional(instance: &Instance) -> (Rational, FractionalAssignment) {
    let grid = candidate_loads(instance);
    let (mut lo, mut hi) = (0, grid.len() - 1);
    let mut best =
        fractional_assign_plain(instance, grid[hi]).expect("total size is always feasible");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match fractional_assign_plain(instance, grid[mid]) {
            Some(x) => {
                hi = mid;
                best = x;
            }
            None => lo = mid + 1,
        }
    }
    (grid[hi], best)
}

pub fn lenstra_solve(instance: &Instance) -> Result<LenstraRun> {
    instance.validate()?;
    let (t, x) = min_fractional(instance);
    x.check_complete(instance)?;
    let loads_before = x.machine_loads(instance);
    let canceled = cancel_cycles(instance, &x);
    canceled.check_complete(instance)?;
    let loads_after = canceled.machine_loads(instance);
    invariant(
        loads_after.iter().zip(&loads_before).all(|(a, b)| a <= b),
        || "cycle canceling raised a machine load".into(),
    )?;
    invariant(SupportForest::new(instance, &canceled).is_forest(), || {
        "support still cyclic after canceling".into()
    })?;
    let schedule = round_forest(instance, &canceled)?;
    let span = makespan(instance, &schedule)?;
    invariant(span <= t + instance.big_size(), || {
        format!("makespan {span} exceeds fractional optimum {t} plus big size")
    })?;
    Ok(LenstraRun {
        schedule,
        makespan: span,
        fractional_optimum: t,
        fractional: canceled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;
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
    fn plain_assignment_examples() {
        let one = inst(1, &[(int(1), &[0])]);
        let x = fractional_assign_plain(&one, int(1)).unwrap();
        assert_eq!(x.integral_machine(0), Some(0));

        let stacked = inst(1, &[(int(1), &[0]), (int(1), &[0])]);
        assert!(fractional_assign_plain(&stacked, int(1)).is_none());

        let spread = inst(2, &[(int(1), &[0, 1]), (int(1), &[0, 1])]);
        let x = fractional_assign_plain(&spread, int(1)).unwrap();
        assert!(x.machine_loads(&spread).iter().all(|l| *l <= int(1)));
        x.check_complete(&spread).unwrap();
    }

    #[test]
    fn integral_assignment_is_untouched() {
        let a = inst(2, &[(int(1), &[0, 1]), (int(2), &[1])]);
        let x = FractionalAssignment::from_parts(vec![vec![(0, int(1))], vec![(1, int(1))]]);
        assert_eq!(cancel_cycles(&a, &x), x);
        assert_eq!(round_forest(&a, &x).unwrap().assignment, vec![0, 1]);
    }

    #[test]
    fn four_cycle_is_broken() {
        let a = inst(2, &[(int(1), &[0, 1]), (int(1), &[0, 1])]);
        let h = ratio(1, 2);
        let x = FractionalAssignment::from_parts(vec![vec![(0, h), (1, h)], vec![(0, h), (1, h)]]);
        assert!(!SupportForest::new(&a, &x).is_forest());
        let y = cancel_cycles(&a, &x);
        assert!(SupportForest::new(&a, &y).is_forest());
        assert!(y.integral_machine(0).is_some() || y.integral_machine(1).is_some());
        assert_eq!(y.machine_loads(&a), x.machine_loads(&a));
        assert!(matches!(round_forest(&a, &x), Err(Error::CyclicSupport)));
    }

    #[test]
    fn unequal_sizes_keep_loads() {
        let a = inst(2, &[(int(1), &[0, 1]), (int(3), &[0, 1])]);
        let x = FractionalAssignment::from_parts(vec![
            vec![(0, ratio(1, 2)), (1, ratio(1, 2))],
            vec![(0, ratio(1, 3)), (1, ratio(2, 3))],
        ]);
        let y = cancel_cycles(&a, &x);
        assert_eq!(y.machine_loads(&a), x.machine_loads(&a));
        y.check_complete(&a).unwrap();
        assert!(SupportForest::new(&a, &y).is_forest());
    }

    #[test]
    fn single_split_job_rounds_to_one_side() {
        let a = inst(2, &[(int(2), &[0, 1])]);
        let h = ratio(1, 2);
        let x = FractionalAssignment::from_parts(vec![vec![(0, h), (1, h)]]);
        let s = round_forest(&a, &x).unwrap();
        let loads = a.loads(&s).unwrap();
        let grew = loads
            .iter()
            .zip(x.machine_loads(&a))
            .filter(|(l, f)| **l > *f)
            .count();
        assert_eq!(grew, 1);
        assert!(loads.contains(&int(2)));
    }

    #[test]
    fn stacked_big_jobs() {
        let a = inst(1, &[(int(1), &[0]), (int(1), &[0])]);
        let run = lenstra_solve(&a).unwrap();
        assert_eq!(run.makespan, int(2));
        assert_eq!(run.fractional_optimum, int(2));
    }

    #[test]
    fn candidate_grid_covers_loads() {
        let a = inst(
            2,
            &[(int(1), &[0]), (ratio(1, 3), &[0]), (ratio(1, 3), &[1])],
        );
        let g = candidate_loads(&a);
        assert_eq!(g, vec![int(1), ratio(4, 3), ratio(5, 3)]);
    }
}
