//! Line-based instance files.
//!
//! ```text
//! # comment
//! machines 2
//! jobs 2
//! job 0 1/1 0 1
//! job 1 1/3 1
//! ```

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::model::{Instance, Job};
use crate::rational::{parse as parse_rational, to_fraction_string};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn header(line: Option<(usize, &str)>, key: &str, last: usize) -> Result<usize> {
    let (no, text) = line.ok_or_else(|| err(last + 1, format!("missing `{key}` header")))?;
    let mut words = text.split_whitespace();
    if words.next() != Some(key) {
        return Err(err(no, format!("expected `{key} <count>`")));
    }
    let value = words
        .next()
        .and_then(|w| w.parse::<usize>().ok())
        .ok_or_else(|| err(no, format!("`{key}` needs a non-negative integer")))?;
    if words.next().is_some() {
        return Err(err(no, format!("trailing text after `{key}`")));
    }
    Ok(value)
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let total = text.lines().count();
    let machines = header(lines.next(), "machines", total)?;
    let n = header(lines.next(), "jobs", total)?;
    let mut jobs = Vec::with_capacity(n);
    for expected in 0..n {
        let (no, line) = lines.next().ok_or_else(|| {
            err(
                total + 1,
                format!("expected {n} job lines, found {expected}"),
            )
        })?;
        let mut words = line.split_whitespace();
        if words.next() != Some("job") {
            return Err(err(no, "expected `job <id> <size> <machines...>`"));
        }
        let id = words
            .next()
            .and_then(|w| w.parse::<usize>().ok())
            .ok_or_else(|| err(no, "bad job id"))?;
        if id != expected {
            return Err(err(
                no,
                format!("job id {id} out of order, expected {expected}"),
            ));
        }
        let size_text = words.next().ok_or_else(|| err(no, "missing size"))?;
        let size = parse_rational(size_text)
            .ok_or_else(|| err(no, format!("bad size `{size_text}`, expected num/den")))?;
        let allowed = words
            .map(|w| {
                w.parse::<usize>()
                    .map_err(|_| err(no, format!("bad machine index `{w}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        jobs.push(Job::new(size, allowed));
    }
    if let Some((no, _)) = lines.next() {
        return Err(err(no, "unexpected line after the last job"));
    }
    let instance = Instance::new(machines, jobs);
    instance.validate()?;
    Ok(instance)
}

/// Canonical file text; sizes always as `num/den`.
pub fn print_instance(instance: &Instance) -> String {
    let mut out = String::new();
    writeln!(out, "machines {}", instance.machine_count).unwrap();
    writeln!(out, "jobs {}", instance.jobs.len()).unwrap();
    for (id, job) in instance.jobs.iter().enumerate() {
        write!(out, "job {id} {}", to_fraction_string(&job.size)).unwrap();
        for m in &job.allowed {
            write!(out, " {m}").unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Violation;
    use crate::rational::{int, ratio};

    #[test]
    fn parses_with_comments() {
        let text = "# two machines\nmachines 2\n\njobs 2\njob 0 1 0 1\n# small\njob 1 1/3 1\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.machine_count, 2);
        assert_eq!(inst.jobs[0], Job::new(int(1), [0, 1]));
        assert_eq!(inst.jobs[1], Job::new(ratio(1, 3), [1]));
        assert_eq!(
            print_instance(&inst),
            "machines 2\njobs 2\njob 0 1/1 0 1\njob 1 1/3 1\n"
        );
    }

    #[test]
    fn canonical_round_trip() {
        let text = "machines 3\njobs 3\njob 0 5/2 0 2\njob 1 1/2 1\njob 2 5/2 0 1 2\n";
        assert_eq!(print_instance(&parse_instance(text).unwrap()), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("machines 2\njobs 1\njob 0 0.5 0\n", 3),
            ("machines 2\njobs 1\njob 1 1/2 0\n", 3),
            ("machines 2\n\njob 0 1/2 0\n", 3),
            ("machines 2\njobs 2\njob 0 1/2 0\n", 4),
            ("machines x\n", 1),
            ("machines 2\njobs 1\njob 0 1/0 0\n", 3),
            ("machines 2\njobs 1\njob 0 1/2 0\njob 1 1/2 0\n", 4),
        ];
        for (text, line) in cases {
            match parse_instance(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn validation_errors_pass_through() {
        let text = "machines 2\njobs 1\njob 0 1/2\n";
        assert_eq!(
            parse_instance(text),
            Err(Error::Invalid(Violation::EmptyAllowedSet { job: 0 }))
        );
        let text = "machines 2\njobs 3\njob 0 1 0\njob 1 2 0\njob 2 3 1\n";
        assert_eq!(
            parse_instance(text),
            Err(Error::Invalid(Violation::TooManySizes))
        );
    }
}
