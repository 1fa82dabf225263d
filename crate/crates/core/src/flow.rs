//! Layered network for `{1, k}` instances.
//!
//! `source -> job -> (throttle ->) machine -> sink`. Big jobs reach their
//! machines through a per-machine throttle node whose outgoing arc has
//! capacity `k`, so a machine never carries more than one big job's worth of
//! big fractions. Small jobs connect straight to machines.

use num_traits::Zero;

use crate::error::{invariant, Error, Result};
use crate::fractional::FractionalAssignment;
use crate::maxflow::Dinic;
use crate::model::ScaledInstance;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    Source { job: usize },
    BigToThrottle { job: usize, machine: usize },
    SmallToMachine { job: usize, machine: usize },
    ThrottleToMachine { machine: usize },
    MachineToSink { machine: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub cap: i64,
    pub kind: ArcKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    pub jobs: usize,
    pub machines: usize,
    pub k: i64,
    pub estimate: i64,
    pub demand: i64,
    pub arcs: Vec<Arc>,
}

impl FlowNetwork {
    pub fn node_count(&self) -> usize {
        2 + self.jobs + 2 * self.machines
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        1 + self.jobs + 2 * self.machines
    }

    pub fn job_node(&self, job: usize) -> usize {
        1 + job
    }

    pub fn throttle_node(&self, machine: usize) -> usize {
        1 + self.jobs + machine
    }

    pub fn machine_node(&self, machine: usize) -> usize {
        1 + self.jobs + self.machines + machine
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSolution {
    /// Flow per arc, indexed like `FlowNetwork::arcs`.
    pub flows: Vec<i64>,
    pub value: i64,
}

impl FlowSolution {
    /// Capacity and conservation on every arc and internal node.
    pub fn check(&self, network: &FlowNetwork) -> Result<()> {
        let mut balance = vec![0i64; network.node_count()];
        for (a, &f) in network.arcs.iter().zip(&self.flows) {
            invariant((0..=a.cap).contains(&f), || {
                format!("flow {f} outside [0, {}] on {:?}", a.cap, a.kind)
            })?;
            balance[a.from] -= f;
            balance[a.to] += f;
        }
        let (s, t) = (network.source(), network.sink());
        for (v, &b) in balance.iter().enumerate() {
            if v != s && v != t {
                invariant(b == 0, || format!("node {v} imbalance {b}"))?;
            }
        }
        invariant(
            balance[t] == self.value && balance[s] == -self.value,
            || "flow value mismatch".into(),
        )
    }
}

/// Builds the network for estimate `estimate` (the sink-side capacity).
pub fn build_network(scaled: &ScaledInstance, estimate: i64) -> FlowNetwork {
    let inst = &scaled.base;
    let mut net = FlowNetwork {
        jobs: inst.jobs.len(),
        machines: inst.machine_count,
        k: scaled.k,
        estimate,
        demand: scaled.total_size(),
        arcs: Vec::new(),
    };
    let mut arcs = Vec::new();
    for j in 0..net.jobs {
        arcs.push(Arc {
            from: net.source(),
            to: net.job_node(j),
            cap: scaled.size(j),
            kind: ArcKind::Source { job: j },
        });
    }
    for (j, job) in inst.jobs.iter().enumerate() {
        for &i in &job.allowed {
            arcs.push(if scaled.is_big(j) {
                Arc {
                    from: net.job_node(j),
                    to: net.throttle_node(i),
                    cap: scaled.k,
                    kind: ArcKind::BigToThrottle { job: j, machine: i },
                }
            } else {
                Arc {
                    from: net.job_node(j),
                    to: net.machine_node(i),
                    cap: 1,
                    kind: ArcKind::SmallToMachine { job: j, machine: i },
                }
            });
        }
    }
    for i in 0..net.machines {
        arcs.push(Arc {
            from: net.throttle_node(i),
            to: net.machine_node(i),
            cap: scaled.k,
            kind: ArcKind::ThrottleToMachine { machine: i },
        });
    }
    for i in 0..net.machines {
        arcs.push(Arc {
            from: net.machine_node(i),
            to: net.sink(),
            cap: estimate,
            kind: ArcKind::MachineToSink { machine: i },
        });
    }
    net.arcs = arcs;
    net
}

/// Maximum flow with integral arc flows.
pub fn max_flow_integral(network: &FlowNetwork) -> FlowSolution {
    let mut dinic = Dinic::new(network.node_count());
    for a in &network.arcs {
        dinic.add_arc(a.from, a.to, a.cap);
    }
    let value = dinic.max_flow(network.source(), network.sink());
    FlowSolution {
        flows: dinic.flows(),
        value,
    }
}

/// The smallest feasible estimate together with its network and flow.
#[derive(Debug, Clone)]
pub struct Probe {
    pub estimate: i64,
    pub network: FlowNetwork,
    pub flow: FlowSolution,
}

fn probe(scaled: &ScaledInstance, estimate: i64) -> Option<Probe> {
    let network = build_network(scaled, estimate);
    let flow = max_flow_integral(&network);
    (flow.value == network.demand).then_some(Probe {
        estimate,
        network,
        flow,
    })
}

/// Binary search over integer estimates in `[max size, total size]`.
///
/// `None` means no estimate routes every job, i.e. every schedule stacks two
/// big jobs on some machine.
pub fn min_feasible_t(scaled: &ScaledInstance) -> Option<Probe> {
    let (mut lo, mut hi) = (scaled.max_size(), scaled.total_size());
    let mut best = probe(scaled, hi)?;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match probe(scaled, mid) {
            Some(p) => {
                hi = mid;
                best = p;
            }
            None => lo = mid + 1,
        }
    }
    Some(best)
}

/// Reads the fractional assignment off a demand-meeting flow.
///
/// Flow leaving a throttle node is shared among the big jobs feeding it in
/// proportion to their inflow.
pub fn extract_assignment(
    network: &FlowNetwork,
    flow: &FlowSolution,
    scaled: &ScaledInstance,
) -> Result<FractionalAssignment> {
    if flow.value != network.demand {
        return Err(Error::DemandNotMet {
            value: flow.value,
            demand: network.demand,
        });
    }
    let mut throttle_in = vec![0i64; network.machines];
    let mut throttle_out = vec![0i64; network.machines];
    for (a, &f) in network.arcs.iter().zip(&flow.flows) {
        match a.kind {
            ArcKind::BigToThrottle { machine, .. } => throttle_in[machine] += f,
            ArcKind::ThrottleToMachine { machine } => throttle_out[machine] += f,
            _ => {}
        }
    }
    let mut parts = vec![Vec::new(); network.jobs];
    for (a, &f) in network.arcs.iter().zip(&flow.flows) {
        if f == 0 {
            continue;
        }
        let (job, machine, reaching) = match a.kind {
            ArcKind::SmallToMachine { job, machine } => (job, machine, Rational::from(f as i128)),
            ArcKind::BigToThrottle { job, machine } => {
                let share = Rational::new(
                    f as i128 * throttle_out[machine] as i128,
                    throttle_in[machine] as i128,
                );
                (job, machine, share)
            }
            _ => continue,
        };
        parts[job].push((machine, reaching / scaled.size(job) as i128));
    }
    let assignment = FractionalAssignment::from_parts(parts);
    check_unit_k_assignment(scaled, &assignment)?;
    Ok(assignment)
}

/// Structural facts every flow extraction satisfies: small jobs integral, big
/// fractions positive multiples of `1/k`, at most one unit of big fraction per
/// machine.
pub fn check_unit_k_assignment(scaled: &ScaledInstance, x: &FractionalAssignment) -> Result<()> {
    x.check_complete(&scaled.base)?;
    let k = scaled.k as i128;
    let mut big_per_machine = vec![Rational::zero(); scaled.base.machine_count];
    for j in 0..x.job_count() {
        if scaled.is_big(j) {
            for &(i, f) in x.job(j) {
                let units = f * k;
                invariant(units.is_integer() && units >= Rational::from(1), || {
                    format!("big job {j} has fraction {f} on machine {i}, not a multiple of 1/{k}")
                })?;
                big_per_machine[i] += f;
            }
        } else {
            invariant(x.integral_machine(j).is_some(), || {
                format!("small job {j} is split")
            })?;
        }
    }
    for (i, b) in big_per_machine.iter().enumerate() {
        invariant(*b <= Rational::from(1), || {
            format!("machine {i} holds {b} of big jobs")
        })?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Instance, Job};
    use crate::rational::int;

    fn scaled(m: usize, k: i128, jobs: &[(i128, &[usize])]) -> ScaledInstance {
        let base = Instance::new(
            m,
            jobs.iter()
                .map(|&(s, a)| Job::new(int(s), a.iter().copied()))
                .collect(),
        );
        ScaledInstance {
            base,
            k: k as i64,
            scale_factor: int(1),
        }
    }

    #[test]
    fn four_jobs_two_machines_have_ten_nodes() {
        let s = scaled(2, 2, &[(2, &[0, 1]), (2, &[1]), (1, &[0]), (1, &[0, 1])]);
        let net = build_network(&s, 3);
        assert_eq!(net.node_count(), 10);
        assert_eq!(net.demand, 6);
    }

    #[test]
    fn smallest_network() {
        let s = scaled(1, 1, &[(1, &[0])]);
        let net = build_network(&s, 1);
        assert_eq!(net.node_count(), 5);
        let caps: Vec<_> = net.arcs.iter().map(|a| (a.kind, a.cap)).collect();
        assert!(caps.contains(&(ArcKind::Source { job: 0 }, 1)));
        assert!(caps.contains(&(ArcKind::SmallToMachine { job: 0, machine: 0 }, 1)));
        assert!(caps.contains(&(ArcKind::MachineToSink { machine: 0 }, 1)));
        let flow = max_flow_integral(&net);
        assert_eq!(flow.value, 1);
        flow.check(&net).unwrap();
    }

    #[test]
    fn big_job_arcs_go_through_throttles() {
        let s = scaled(2, 2, &[(2, &[0, 1]), (1, &[0])]);
        let net = build_network(&s, 2);
        let caps: Vec<_> = net.arcs.iter().map(|a| (a.kind, a.cap)).collect();
        for i in 0..2 {
            assert!(caps.contains(&(ArcKind::BigToThrottle { job: 0, machine: i }, 2)));
            assert!(caps.contains(&(ArcKind::ThrottleToMachine { machine: i }, 2)));
            assert!(caps.contains(&(ArcKind::MachineToSink { machine: i }, 2)));
        }
        for a in &net.arcs {
            if a.from == net.job_node(0) {
                assert!(matches!(a.kind, ArcKind::BigToThrottle { .. }));
            }
            if a.from == net.job_node(1) {
                assert!(matches!(a.kind, ArcKind::SmallToMachine { .. }));
            }
        }
    }

    #[test]
    fn throttle_caps_big_inflow() {
        let s = scaled(2, 2, &[(2, &[0]), (2, &[0]), (1, &[1])]);
        for t in 0..=10 {
            let net = build_network(&s, t);
            let flow = max_flow_integral(&net);
            let big: i64 = net
                .arcs
                .iter()
                .zip(&flow.flows)
                .filter(|(a, _)| matches!(a.kind, ArcKind::BigToThrottle { .. }))
                .map(|(_, f)| f)
                .sum();
            assert!(big <= 2);
            assert!(flow.value < net.demand);
        }
        assert!(min_feasible_t(&s).is_none());
    }

    #[test]
    fn min_t_examples() {
        let s = scaled(1, 3, &[(3, &[0])]);
        assert_eq!(min_feasible_t(&s).unwrap().estimate, 3);

        // Big job on {0,1} plus two small jobs pinned to 0. Brute force over the
        // two placements of the big job: on 0 gives 4, on 1 gives max(2, 2) = 2.
        let s = scaled(2, 2, &[(2, &[0, 1]), (1, &[0]), (1, &[0])]);
        assert_eq!(min_feasible_t(&s).unwrap().estimate, 2);
    }

    #[test]
    fn feasibility_is_monotone() {
        let s = scaled(
            3,
            3,
            &[
                (3, &[0, 1]),
                (3, &[1, 2]),
                (1, &[0]),
                (1, &[2]),
                (1, &[1, 2]),
            ],
        );
        let feasible: Vec<bool> = (0..=s.total_size())
            .map(|t| {
                let net = build_network(&s, t);
                max_flow_integral(&net).value == net.demand
            })
            .collect();
        let first = feasible.iter().position(|&f| f).unwrap();
        assert!(feasible[first..].iter().all(|&f| f));
        assert_eq!(min_feasible_t(&s).unwrap().estimate, first as i64);
    }

    #[test]
    fn extraction_splits_proportionally() {
        let s = scaled(2, 3, &[(3, &[0, 1]), (1, &[0])]);
        let net = build_network(&s, 10);
        let mut flows = vec![0; net.arcs.len()];
        for (idx, a) in net.arcs.iter().enumerate() {
            flows[idx] = match a.kind {
                ArcKind::Source { job } => s.size(job),
                ArcKind::BigToThrottle { machine: 0, .. } => 2,
                ArcKind::BigToThrottle { machine: 1, .. } => 1,
                ArcKind::ThrottleToMachine { machine: 0 } => 2,
                ArcKind::ThrottleToMachine { machine: 1 } => 1,
                ArcKind::SmallToMachine { .. } => 1,
                ArcKind::MachineToSink { machine: 0 } => 3,
                ArcKind::MachineToSink { machine: 1 } => 1,
                _ => 0,
            };
        }
        let flow = FlowSolution { flows, value: 4 };
        flow.check(&net).unwrap();
        let x = extract_assignment(&net, &flow, &s).unwrap();
        assert_eq!(
            x.job(0),
            &[(0, Rational::new(2, 3)), (1, Rational::new(1, 3))]
        );
        assert_eq!(x.integral_machine(1), Some(0));
    }

    #[test]
    fn extraction_half_split() {
        let s = scaled(2, 2, &[(2, &[0, 1])]);
        let net = build_network(&s, 1);
        let flow = max_flow_integral(&net);
        assert_eq!(flow.value, 2);
        let x = extract_assignment(&net, &flow, &s).unwrap();
        assert_eq!(
            x.job(0),
            &[(0, Rational::new(1, 2)), (1, Rational::new(1, 2))]
        );
    }

    #[test]
    fn extraction_rejects_short_flow() {
        let s = scaled(1, 2, &[(2, &[0]), (2, &[0])]);
        let net = build_network(&s, 4);
        let flow = max_flow_integral(&net);
        assert!(matches!(
            extract_assignment(&net, &flow, &s),
            Err(Error::DemandNotMet {
                value: 2,
                demand: 4
            })
        ));
    }
}
