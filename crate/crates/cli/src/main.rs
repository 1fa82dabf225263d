//! `twoval`: solve, generate, verify and bound two-valued scheduling
//! instances.
//!
//! Exit codes: 0 success or pass, 1 verification failure or internal error,
//! 2 input error, 3 oracle budget exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use twoval::bounds::{scan_max, BoundTable, Family, GuaranteeReport};
use twoval::format::{parse_instance, print_instance};
use twoval::gen::{generate, GenConfig};
use twoval::oracle::{Verdict, DEFAULT_BUDGET};
use twoval::rational::{decimal, parse as parse_rational, to_fraction_string};
use twoval::solve::{is_input_error, run, Mode, RunReport};
use twoval::{Error, Instance, Rational};

#[derive(Parser)]
#[command(
    name = "twoval",
    version,
    about = "Two-valued makespan scheduling with assignment constraints"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print the schedule.
    Solve {
        path: PathBuf,
        /// auto, unitk, lenstra, gb or two-valued.
        #[arg(long, default_value = "auto")]
        mode: Mode,
        /// Also compute the exact optimum.
        #[arg(long)]
        oracle: bool,
        #[arg(long, env = "TWOVAL_ORACLE_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Print a seeded random instance with sizes {1/alpha, 1}.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: usize,
        #[arg(long)]
        machines: usize,
        #[arg(long, value_parser = rational_arg)]
        alpha: Rational,
        /// At most two allowed machines per job.
        #[arg(long)]
        gb: bool,
        /// Allow instances without any big job.
        #[arg(long)]
        allow_no_big: bool,
    },
    /// Solve, then compare the makespan against bound times the optimum.
    Verify {
        path: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        bound: Rational,
        #[arg(long, default_value = "auto")]
        mode: Mode,
        #[arg(long, env = "TWOVAL_ORACLE_BUDGET", default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Print the guarantee expressions for one alpha.
    Bound {
        #[arg(long, value_parser = rational_arg)]
        alpha: Rational,
        #[arg(long)]
        gb: bool,
        /// Also scan the rational grid for the worst alpha.
        #[arg(long)]
        scan: bool,
        /// Largest denominator on the scan grid.
        #[arg(long, default_value_t = 1000)]
        max_den: i128,
    },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational of the form num/den"))
}

enum Failure {
    Input(String),
    Verify,
    Budget(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verify | Failure::Internal(_) => 1,
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            ref e if is_input_error(e) => Failure::Input(e.to_string()),
            e => Failure::Internal(e.to_string()),
        }
    }
}

fn r(x: &Rational) -> String {
    format!("{} ({})", to_fraction_string(x), decimal(x))
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn report_text(report: &RunReport) -> String {
    let mut out = String::new();
    writeln!(out, "mode {}", report.mode).unwrap();
    out.push_str(&report.schedule.to_string());
    writeln!(out, "makespan {}", r(&report.makespan)).unwrap();
    writeln!(out, "certified {}", r(&report.certified)).unwrap();
    writeln!(out, "chosen {}", report.chosen).unwrap();
    for b in &report.branches {
        match &b.makespan {
            Some(m) => writeln!(out, "branch {} {}", b.name, r(m)).unwrap(),
            None => writeln!(out, "branch {} none", b.name).unwrap(),
        }
    }
    writeln!(out, "lower_bound {}", r(&report.lower_bound)).unwrap();
    if let Some(g) = &report.guarantee {
        writeln!(out, "alpha {}", r(&g.alpha)).unwrap();
        writeln!(out, "regime {}", g.regime.as_str()).unwrap();
        if let Some(note) = g.nonconstructive_note {
            writeln!(
                out,
                "note optimum estimate within {} (not constructive)",
                r(&note)
            )
            .unwrap();
        }
    }
    if let Some(v) = &report.oracle {
        let (Verdict::Pass { opt, ratio } | Verdict::Fail { opt, ratio }) = v;
        writeln!(out, "opt {}", r(opt)).unwrap();
        writeln!(out, "ratio {}", r(ratio)).unwrap();
    }
    writeln!(
        out,
        "wall_time_ms {:.3}",
        report.wall_time.as_secs_f64() * 1e3
    )
    .unwrap();
    out
}

fn bound_text(
    family: Family,
    alpha: Rational,
    scan: bool,
    max_den: i128,
) -> Result<String, Failure> {
    let one = Rational::from(1);
    match family {
        Family::General if alpha <= one => {
            return Err(Failure::Input("alpha must be greater than 1".into()))
        }
        Family::GraphBalancing if alpha < Rational::from(2) => {
            return Err(Failure::Input("alpha must be at least 2 with --gb".into()))
        }
        _ => {}
    }
    let t = BoundTable::new(family, alpha);
    let g = GuaranteeReport::new(family, alpha);
    let mut out = String::new();
    writeln!(out, "alpha {}", r(&t.alpha)).unwrap();
    writeln!(out, "f1 {}", r(&t.f1)).unwrap();
    writeln!(out, "f2 {}", r(&t.f2)).unwrap();
    writeln!(out, "expr1 {}", r(&t.expr1)).unwrap();
    writeln!(out, "expr2 {}", r(&t.expr2)).unwrap();
    writeln!(out, "min {}", r(&t.min)).unwrap();
    writeln!(out, "interval ({}, {})", t.interval, t.interval + 1).unwrap();
    writeln!(out, "worst_alpha {}", r(&t.worst_alpha)).unwrap();
    writeln!(out, "worst_expr1 {}", r(&t.worst_expr1)).unwrap();
    writeln!(out, "worst_expr2 {}", r(&t.worst_expr2)).unwrap();
    if let Some(note) = g.nonconstructive_note {
        writeln!(
            out,
            "note optimum estimate within {} (not constructive)",
            r(&note)
        )
        .unwrap();
    }
    if scan {
        let (lo, hi) = match family {
            Family::General => (1, 5),
            Family::GraphBalancing => (2, 10),
        };
        let (arg, max) = scan_max(family, lo, hi, max_den);
        writeln!(out, "scan ({lo}, {hi}] max_den {max_den}").unwrap();
        writeln!(out, "scan_max {} at alpha {}", r(&max), r(&arg)).unwrap();
    }
    Ok(out)
}

fn execute(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Solve {
            path,
            mode,
            oracle,
            budget,
        } => {
            let inst = load(&path)?;
            let mut report = run(&inst, mode)?;
            if oracle {
                report = report.with_oracle(&inst, budget)?;
            }
            Ok(report_text(&report))
        }
        Command::Gen {
            seed,
            jobs,
            machines,
            alpha,
            gb,
            allow_no_big,
        } => {
            if jobs == 0 || machines == 0 {
                return Err(Failure::Input(
                    "jobs and machines must be at least 1".into(),
                ));
            }
            if alpha < Rational::from(1) {
                return Err(Failure::Input("alpha must be at least 1".into()));
            }
            let config = GenConfig::new(seed, jobs, machines, alpha)
                .gb(gb)
                .allow_no_big(allow_no_big);
            Ok(print_instance(&generate(&config)))
        }
        Command::Verify {
            path,
            bound,
            mode,
            budget,
        } => {
            let inst = load(&path)?;
            let report = run(&inst, mode)?;
            let verdict = twoval::oracle::verify_ratio(&inst, &report.schedule, bound, budget)?;
            let (Verdict::Pass { opt, ratio } | Verdict::Fail { opt, ratio }) = verdict;
            let text = format!(
                "opt {}\nmakespan {}\nratio {}\nbound {}\nverdict {}\n",
                r(&opt),
                r(&report.makespan),
                r(&ratio),
                r(&bound),
                if verdict.passed() { "pass" } else { "fail" }
            );
            if verdict.passed() {
                Ok(text)
            } else {
                print!("{text}");
                Err(Failure::Verify)
            }
        }
        Command::Bound {
            alpha,
            gb,
            scan,
            max_den,
        } => {
            let family = if gb {
                Family::GraphBalancing
            } else {
                Family::General
            };
            bound_text(family, alpha, scan, max_den)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::Verify => {}
                Failure::Input(m) => eprintln!("error: {m}"),
                Failure::Budget(m) => eprintln!("budget exceeded: {m}"),
                Failure::Internal(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
