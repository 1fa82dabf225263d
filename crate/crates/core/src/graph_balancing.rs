//! Graph balancing: every job may run on at most two machines.
//!
//! For sizes `{1, k}` the flow extraction leaves each big job either with a
//! majority machine or split exactly in half. Majority jobs go to their
//! majority machine. Half-split jobs form a multigraph on the machines with
//! maximum degree two, i.e. paths and cycles, and orienting it gives every
//! machine at most one of them.

use num_traits::{One, Zero};

use crate::bounds::{Family, GuaranteeReport};
use crate::error::{invariant, Error, Result};
use crate::flow::{extract_assignment, min_feasible_t};
use crate::fractional::FractionalAssignment;
use crate::lenstra::{cancel_cycles, lenstra_solve, min_fractional};
use crate::matching::max_matching;
use crate::model::{makespan, normalize, scale_to_integer, Instance, ScaledInstance, Schedule};
use crate::rational::{int, ratio, Rational};
use crate::two_valued::{build_reduced, check_lift_bound, lift, Race, Reduction, TwoValuedRun};
use crate::unitk::Rounded;

/// An instance whose allowed sets all have one or two machines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GbInstance(Instance);

impl GbInstance {
    pub fn new(instance: Instance) -> Result<Self> {
        instance.validate()?;
        if let Some((job, j)) = instance
            .jobs
            .iter()
            .enumerate()
            .find(|(_, j)| j.allowed.len() > 2)
        {
            return Err(Error::NotGraphBalancing {
                job,
                allowed: j.allowed.len(),
            });
        }
        Ok(GbInstance(instance))
    }

    pub fn instance(&self) -> &Instance {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HalfEdge {
    pub job: usize,
    pub ends: (usize, usize),
}

/// Machines as vertices, half-split big jobs as edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfEdgeGraph {
    pub vertex_count: usize,
    pub edges: Vec<HalfEdge>,
}

impl HalfEdgeGraph {
    pub fn new(vertex_count: usize, edges: Vec<HalfEdge>) -> Result<Self> {
        let g = HalfEdgeGraph {
            vertex_count,
            edges,
        };
        let deg = g.degrees();
        if let Some((vertex, &degree)) = deg.iter().enumerate().find(|(_, &d)| d > 2) {
            return Err(Error::DegreeTooHigh { vertex, degree });
        }
        Ok(g)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            deg[e.ends.0] += 1;
            deg[e.ends.1] += 1;
        }
        deg
    }

    fn incident(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (idx, e) in self.edges.iter().enumerate() {
            inc[e.ends.0].push(idx);
            inc[e.ends.1].push(idx);
        }
        inc
    }
}

/// Head vertex of every edge, no vertex heading two edges. Paths are walked
/// from their lowest-index endpoint and cycles from their lowest vertex, each
/// edge pointing away from where the walk came from.
pub fn orient_components(graph: &HalfEdgeGraph) -> Result<Vec<usize>> {
    let deg = graph.degrees();
    if let Some((vertex, &degree)) = deg.iter().enumerate().find(|(_, &d)| d > 2) {
        return Err(Error::DegreeTooHigh { vertex, degree });
    }
    let inc = graph.incident();
    let mut head = vec![usize::MAX; graph.edges.len()];
    let walk = |start: usize, head: &mut Vec<usize>| {
        let mut cur = start;
        while let Some(&e) = inc[cur].iter().find(|&&e| head[e] == usize::MAX) {
            let (a, b) = graph.edges[e].ends;
            let next = if a == cur { b } else { a };
            head[e] = next;
            cur = next;
        }
    };
    for v in (0..graph.vertex_count).filter(|&v| deg[v] == 1) {
        walk(v, &mut head);
    }
    for v in 0..graph.vertex_count {
        walk(v, &mut head);
    }
    let mut headed = vec![0usize; graph.vertex_count];
    for &h in &head {
        headed[h] += 1;
    }
    invariant(headed.iter().all(|&c| c <= 1), || {
        "orientation gave a vertex two edges".into()
    })?;
    Ok(head)
}

#[derive(Debug, Clone)]
pub struct GbUnitKRun {
    pub schedule: Schedule,
    pub estimate: i64,
    pub assignment: FractionalAssignment,
    pub half_edges: HalfEdgeGraph,
    pub heads: Vec<usize>,
    pub makespan: Rational,
}

/// Majority rounding plus path/cycle orientation for `{1, k}` instances.
pub fn gb_solve_unit_k(scaled: &ScaledInstance) -> Result<Rounded<GbUnitKRun>> {
    GbInstance::new(scaled.base.clone())?;
    let Some(probe) = min_feasible_t(scaled) else {
        return Ok(Rounded::NeedsFallback);
    };
    probe.flow.check(&probe.network)?;
    let x = extract_assignment(&probe.network, &probe.flow, scaled)?;
    let half = ratio(1, 2);

    let mut assignment = vec![usize::MAX; scaled.base.jobs.len()];
    let mut edges = Vec::new();
    for j in 0..scaled.base.jobs.len() {
        let parts = x.job(j);
        if !scaled.is_big(j) {
            assignment[j] = x
                .integral_machine(j)
                .ok_or_else(|| Error::Invariant(format!("small job {j} is split")))?;
            continue;
        }
        match parts {
            [(i, _)] => assignment[j] = *i,
            [(a, fa), (b, fb)] if *fa == half && *fb == half => edges.push(HalfEdge {
                job: j,
                ends: (*a, *b),
            }),
            [(a, fa), (b, _)] => assignment[j] = if *fa > half { *a } else { *b },
            _ => {
                return Err(Error::Invariant(format!(
                    "big job {j} spread over {} machines",
                    parts.len()
                )))
            }
        }
    }
    let graph = HalfEdgeGraph::new(scaled.base.machine_count, edges)
        .map_err(|e| Error::Invariant(format!("half-edge graph: {e}")))?;
    let heads = orient_components(&graph)?;
    for (e, &h) in graph.edges.iter().zip(&heads) {
        assignment[e.job] = h;
    }
    let schedule = Schedule::new(assignment);
    let loads = scaled.base.loads(&schedule)?;

    let mut bigs = vec![0usize; scaled.base.machine_count];
    for j in scaled.big_jobs() {
        bigs[schedule.assignment[j]] += 1;
    }
    invariant(bigs.iter().all(|&c| c <= 1), || {
        "machine with two big jobs".into()
    })?;
    let before = x.machine_loads(&scaled.base);
    let slack = ratio(scaled.k as i128, 2);
    for (i, (l0, l1)) in before.iter().zip(&loads).enumerate() {
        invariant(*l1 <= *l0 + slack, || {
            format!("rounding raised machine {i} from {l0} to {l1}, more than k/2")
        })?;
    }
    let span = makespan(&scaled.base, &schedule)?;
    invariant(
        span <= Rational::from(probe.estimate as i128) + slack,
        || format!("makespan {span} exceeds T* + k/2"),
    )?;
    Ok(Rounded::Solved(GbUnitKRun {
        schedule,
        estimate: probe.estimate,
        assignment: x,
        half_edges: graph,
        heads,
        makespan: span,
    }))
}

/// One job per machine via bipartite matching, when every job fits.
pub fn gb_perfect_matching_opt1(instance: &GbInstance) -> Option<Schedule> {
    let inst = instance.instance();
    let adj: Vec<Vec<usize>> = inst.jobs.iter().map(|j| j.allowed.clone()).collect();
    let matched = max_matching(inst.machine_count, &adj);
    matched
        .into_iter()
        .collect::<Option<Vec<usize>>>()
        .map(Schedule::new)
}

/// Rounds a canceled fractional assignment whose fractional jobs are edges of
/// a forest on the machines: each tree is rooted at its lowest machine and
/// every edge goes to its child endpoint.
pub fn gb_forest_round(instance: &GbInstance, x: &FractionalAssignment) -> Result<Schedule> {
    let inst = instance.instance();
    let m = inst.machine_count;
    let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m];
    let mut assignment = vec![usize::MAX; inst.jobs.len()];
    let mut parent: Vec<usize> = (0..m).collect();
    fn root(p: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while p[r] != r {
            r = p[r];
        }
        p[v] = r;
        r
    }
    for j in 0..inst.jobs.len() {
        match x.job(j) {
            [(i, f)] if f.is_one() => assignment[j] = *i,
            [(a, _), (b, _)] => {
                let (ra, rb) = (root(&mut parent, *a), root(&mut parent, *b));
                if ra == rb {
                    return Err(Error::CyclicSupport);
                }
                parent[ra] = rb;
                inc[*a].push((j, *b));
                inc[*b].push((j, *a));
            }
            parts => {
                return Err(Error::Invariant(format!(
                    "job {j} has {} support machines",
                    parts.len()
                )))
            }
        }
    }
    let mut seen = vec![false; m];
    for r in 0..m {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut stack = vec![r];
        while let Some(v) = stack.pop() {
            for &(j, w) in &inc[v] {
                if !seen[w] {
                    seen[w] = true;
                    assignment[j] = w;
                    stack.push(w);
                }
            }
        }
    }
    let schedule = Schedule::new(assignment);
    schedule.check(inst)?;
    Ok(schedule)
}

/// Best of the applicable branches for two-valued graph balancing.
///
/// `alpha >= 2`: both reductions through [`gb_solve_unit_k`] and the forest
/// baseline. `alpha < 2`: one-job-per-machine matching, the baseline, the
/// canceled fractional solution rounded by [`gb_forest_round`], and I1.
pub fn gb_solve_two_valued(instance: &GbInstance) -> Result<TwoValuedRun> {
    let inst = instance.instance();
    let base = lenstra_solve(inst)?;
    let (normalized, alpha) = normalize(inst)?;
    let mut race = Race::default();

    let reduction = |which: Reduction, race: &mut Race| -> Result<()> {
        let reduced = build_reduced(&normalized, which);
        let scaled = scale_to_integer(&reduced.instance)?;
        let result = match gb_solve_unit_k(&scaled)? {
            Rounded::Solved(run) => {
                let estimate = Rational::from(run.estimate as i128) * scaled.scale_factor;
                check_lift_bound(&normalized, &reduced, &run.schedule, estimate, ratio(1, 2))?;
                Some(lift(&run.schedule, &reduced, inst)?)
            }
            Rounded::NeedsFallback => {
                race.stacked = true;
                None
            }
        };
        race.enter(which.name(), result);
        Ok(())
    };

    if inst.jobs.is_empty() || alpha.is_one() {
        let scaled = scale_to_integer(&normalized)?;
        let unit = gb_solve_unit_k(&scaled)?
            .solved()
            .map(|r| makespan(inst, &r.schedule).map(|m| (r.schedule, m)))
            .transpose()?;
        race.enter("unit", unit);
    } else if alpha >= int(2) {
        if !alpha.is_integer() {
            reduction(Reduction::I1, &mut race)?;
        }
        reduction(Reduction::I2, &mut race)?;
    } else {
        let matched = gb_perfect_matching_opt1(instance)
            .map(|s| makespan(inst, &s).map(|m| (s, m)))
            .transpose()?;
        race.enter("matching", matched);
        let (_, fractional) = min_fractional(inst);
        let canceled = cancel_cycles(inst, &fractional);
        let forest = gb_forest_round(instance, &canceled)?;
        let span = makespan(inst, &forest)?;
        race.enter("forest", Some((forest, span)));
        reduction(Reduction::I1, &mut race)?;
    }
    race.enter("lenstra", Some((base.schedule.clone(), base.makespan)));

    let lower = if inst.jobs.is_empty() {
        Rational::zero()
    } else {
        base.fractional_optimum
    };
    race.finish(
        inst,
        lower,
        GuaranteeReport::new(Family::GraphBalancing, alpha),
    )
}
