use proptest::prelude::*;

use twoval::format::{parse_instance, print_instance};
use twoval::gen::{generate, GenConfig};
use twoval::lenstra::{cancel_cycles, min_fractional, round_forest, SupportForest};
use twoval::oracle::{brute_force_opt, DEFAULT_BUDGET};
use twoval::rational::ratio;
use twoval::solve::{run, Mode};
use twoval::{makespan, normalize, Instance, Job, Rational, Schedule};

fn alpha() -> impl Strategy<Value = Rational> {
    (1i128..=6, 1i128..=4).prop_map(|(p, q)| ratio(p + q, q))
}

fn instance(max_jobs: usize, gb: bool) -> impl Strategy<Value = Instance> {
    (any::<u64>(), 1..=max_jobs, 1usize..=4, alpha())
        .prop_map(move |(seed, n, m, a)| generate(&GenConfig::new(seed, n, m, a).gb(gb)))
}

fn scale(inst: &Instance, c: Rational) -> Instance {
    inst.map_sizes(|s| s * c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn round_trip(inst in instance(12, false)) {
        let text = print_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(print_instance(&back), text);
    }

    #[test]
    fn makespan_scales(inst in instance(8, false), p in 1i128..20, q in 1i128..20) {
        let c = ratio(p, q);
        let s = Schedule::new(inst.jobs.iter().map(|j| j.allowed[0]).collect());
        prop_assert_eq!(makespan(&scale(&inst, c), &s).unwrap(), makespan(&inst, &s).unwrap() * c);
        let (n1, a1) = normalize(&inst).unwrap();
        let (n2, a2) = normalize(&scale(&inst, c)).unwrap();
        prop_assert_eq!(n1, n2);
        prop_assert_eq!(a1, a2);
    }

    #[test]
    fn solvers_scale_with_sizes(inst in instance(8, false), p in 1i128..9, q in 1i128..9) {
        let c = ratio(p, q);
        let a = run(&inst, Mode::TwoValued).unwrap();
        let b = run(&scale(&inst, c), Mode::TwoValued).unwrap();
        prop_assert_eq!(a.makespan * c, b.makespan);
        prop_assert_eq!(a.certified, b.certified);
    }

    #[test]
    fn optimum_ignores_job_order(inst in instance(7, false), rot in 0usize..7) {
        let mut jobs = inst.jobs.clone();
        let r = rot % jobs.len();
        jobs.rotate_left(r);
        let rotated = Instance::new(inst.machine_count, jobs);
        prop_assert_eq!(
            brute_force_opt(&inst, DEFAULT_BUDGET).unwrap().opt_makespan,
            brute_force_opt(&rotated, DEFAULT_BUDGET).unwrap().opt_makespan
        );
    }

    #[test]
    fn solvers_never_beat_the_optimum(inst in instance(8, false)) {
        let opt = brute_force_opt(&inst, DEFAULT_BUDGET).unwrap().opt_makespan;
        for mode in [Mode::Auto, Mode::Lenstra, Mode::TwoValued] {
            let r = run(&inst, mode).unwrap();
            r.schedule.check(&inst).unwrap();
            prop_assert!(opt <= r.makespan);
            prop_assert!(r.lower_bound <= opt);
            prop_assert!(r.makespan <= r.certified * opt);
        }
    }

    #[test]
    fn gb_runs_stay_within_certified(inst in instance(8, true)) {
        let opt = brute_force_opt(&inst, DEFAULT_BUDGET).unwrap().opt_makespan;
        let r = run(&inst, Mode::Gb).unwrap();
        prop_assert!(r.makespan <= r.certified * opt);
        prop_assert!(r.certified <= ratio(413, 250));
    }

    #[test]
    fn cycle_canceling_keeps_loads(inst in instance(12, false)) {
        let (t, x) = min_fractional(&inst);
        let y = cancel_cycles(&inst, &x);
        y.check_complete(&inst).unwrap();
        prop_assert!(SupportForest::new(&inst, &y).is_forest());
        for (a, b) in y.machine_loads(&inst).iter().zip(x.machine_loads(&inst)) {
            prop_assert!(*a <= b);
        }
        let s = round_forest(&inst, &y).unwrap();
        prop_assert!(makespan(&inst, &s).unwrap() <= t + inst.big_size());
    }

    #[test]
    fn single_machine_is_total(n in 1usize..10, size in 1i128..7) {
        let inst = Instance::new(1, (0..n).map(|_| Job::new(ratio(size, 3), [0])).collect());
        let r = run(&inst, Mode::Auto).unwrap();
        prop_assert_eq!(r.makespan, inst.total_size());
    }
}
