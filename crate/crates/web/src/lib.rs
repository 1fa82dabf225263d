//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export returns JSON text. The plain functions in [`api`] carry the
//! logic so they can be tested natively.

use wasm_bindgen::prelude::*;

pub mod api {
    use serde::Serialize;

    use twoval::bounds::{gb_min_expression, min_expression, BoundTable, Family};
    use twoval::format::{parse_instance, print_instance};
    use twoval::gen::{generate, GenConfig};
    use twoval::rational::{parse, to_f64, to_fraction_string};
    use twoval::solve::{run, Mode};
    use twoval::Rational;

    #[derive(Serialize)]
    pub struct CurvePoint {
        pub alpha: f64,
        pub bound: f64,
    }

    #[derive(Serialize)]
    pub struct BoundReport {
        pub alpha: String,
        pub f1: String,
        pub f2: String,
        pub expr1: String,
        pub expr2: String,
        pub min: String,
        pub min_value: f64,
        pub worst_alpha: f64,
        pub worst_value: f64,
    }

    #[derive(Serialize)]
    pub struct BranchReport {
        pub name: String,
        pub makespan: Option<String>,
    }

    #[derive(Serialize)]
    pub struct SolveReport {
        pub mode: String,
        pub machines: usize,
        pub assignment: Vec<usize>,
        pub sizes: Vec<f64>,
        pub big: Vec<bool>,
        pub loads: Vec<f64>,
        pub makespan: String,
        pub makespan_value: f64,
        pub certified: String,
        pub chosen: String,
        pub branches: Vec<BranchReport>,
    }

    fn family(gb: bool) -> Family {
        if gb {
            Family::GraphBalancing
        } else {
            Family::General
        }
    }

    fn rational(text: &str) -> Result<Rational, String> {
        parse(text).ok_or_else(|| format!("`{text}` is not num/den"))
    }

    fn json<T: Serialize>(value: &T) -> String {
        serde_json::to_string(value).expect("report serializes")
    }

    /// Min-expression sampled at `p/q` for `q = den` over `(lo, hi]`.
    pub fn bound_curve(gb: bool, lo: u32, hi: u32, den: u32) -> Result<String, String> {
        let (lo, hi, den) = (lo as i128, hi as i128, den.max(1) as i128);
        let floor = if gb { 2 } else { 1 };
        if lo < floor || hi <= lo {
            return Err(format!("need {floor} <= lo < hi"));
        }
        let eval = if gb {
            gb_min_expression
        } else {
            min_expression
        };
        let points: Vec<CurvePoint> = (lo * den + 1..=hi * den)
            .map(|p| {
                let a = Rational::new(p, den);
                CurvePoint {
                    alpha: to_f64(&a),
                    bound: to_f64(&eval(a)),
                }
            })
            .collect();
        Ok(json(&points))
    }

    pub fn bound_at(alpha: &str, gb: bool) -> Result<String, String> {
        let a = rational(alpha)?;
        let floor = if gb {
            Rational::from(2)
        } else {
            Rational::new(1, 1)
        };
        if a < floor || (!gb && a == floor) {
            return Err(if gb {
                "alpha must be at least 2".into()
            } else {
                "alpha must exceed 1".into()
            });
        }
        let t = BoundTable::new(family(gb), a);
        let worst = if gb {
            gb_min_expression(t.worst_alpha)
        } else {
            min_expression(t.worst_alpha)
        };
        Ok(json(&BoundReport {
            alpha: to_fraction_string(&t.alpha),
            f1: to_fraction_string(&t.f1),
            f2: to_fraction_string(&t.f2),
            expr1: to_fraction_string(&t.expr1),
            expr2: to_fraction_string(&t.expr2),
            min: to_fraction_string(&t.min),
            min_value: to_f64(&t.min),
            worst_alpha: to_f64(&t.worst_alpha),
            worst_value: to_f64(&worst),
        }))
    }

    /// Instance file text.
    pub fn generate_instance(
        seed: u64,
        jobs: usize,
        machines: usize,
        alpha: &str,
        gb: bool,
    ) -> Result<String, String> {
        let a = rational(alpha)?;
        if a < Rational::from(1) || jobs == 0 || machines == 0 {
            return Err("need alpha >= 1 and at least one job and machine".into());
        }
        Ok(print_instance(&generate(
            &GenConfig::new(seed, jobs, machines, a).gb(gb),
        )))
    }

    pub fn solve_instance(text: &str, mode: &str) -> Result<String, String> {
        let inst = parse_instance(text).map_err(|e| e.to_string())?;
        let mode: Mode = mode.parse()?;
        let r = run(&inst, mode).map_err(|e| e.to_string())?;
        let loads = inst.loads(&r.schedule).map_err(|e| e.to_string())?;
        Ok(json(&SolveReport {
            mode: r.mode.to_string(),
            machines: inst.machine_count,
            assignment: r.schedule.assignment.clone(),
            sizes: inst.jobs.iter().map(|j| to_f64(&j.size)).collect(),
            big: (0..inst.jobs.len()).map(|j| inst.is_big(j)).collect(),
            loads: loads.iter().map(to_f64).collect(),
            makespan: to_fraction_string(&r.makespan),
            makespan_value: to_f64(&r.makespan),
            certified: to_fraction_string(&r.certified),
            chosen: r.chosen.to_string(),
            branches: r
                .branches
                .iter()
                .map(|b| BranchReport {
                    name: b.name.to_string(),
                    makespan: b.makespan.as_ref().map(to_fraction_string),
                })
                .collect(),
        }))
    }
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn bound_curve(gb: bool, lo: u32, hi: u32, den: u32) -> Result<String, JsValue> {
    js(api::bound_curve(gb, lo, hi, den))
}

#[wasm_bindgen]
pub fn bound_at(alpha: &str, gb: bool) -> Result<String, JsValue> {
    js(api::bound_at(alpha, gb))
}

#[wasm_bindgen]
pub fn generate_instance(
    seed: u32,
    jobs: u32,
    machines: u32,
    alpha: &str,
    gb: bool,
) -> Result<String, JsValue> {
    js(api::generate_instance(
        seed as u64,
        jobs as usize,
        machines as usize,
        alpha,
        gb,
    ))
}

#[wasm_bindgen]
pub fn solve_instance(text: &str, mode: &str) -> Result<String, JsValue> {
    js(api::solve_instance(text, mode))
}
