use serde_json::Value;
use twoval_web::api::{bound_at, bound_curve, generate_instance, solve_instance};

fn parse(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn curve_peaks_below_the_general_bound() {
    let v = parse(&bound_curve(false, 1, 5, 200).unwrap());
    let points = v.as_array().unwrap();
    assert_eq!(points.len(), 800);
    let max = points
        .iter()
        .map(|p| p["bound"].as_f64().unwrap())
        .fold(0.0, f64::max);
    assert!(max > 1.88 && max < 1.883, "{max}");
    assert!(bound_curve(true, 1, 3, 10).is_err());
}

#[test]
fn bound_at_matches_hand_values() {
    let v = parse(&bound_at("5/2", false).unwrap());
    assert_eq!(v["expr1"], "9/5");
    assert_eq!(v["expr2"], "7/4");
    assert_eq!(v["min"], "7/4");
    let v = parse(&bound_at("3", true).unwrap());
    assert_eq!(v["min"], "3/2");
    assert!(bound_at("3/2", true).is_err());
    assert!(bound_at("x", false).is_err());
}

#[test]
fn generate_then_solve() {
    let text = generate_instance(5, 8, 3, "5/2", true).unwrap();
    let v = parse(&solve_instance(&text, "auto").unwrap());
    assert_eq!(v["mode"], "gb");
    let loads: Vec<f64> = v["loads"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_f64().unwrap())
        .collect();
    let max = loads.iter().cloned().fold(0.0, f64::max);
    assert!((max - v["makespan_value"].as_f64().unwrap()).abs() < 1e-12);
    assert_eq!(v["assignment"].as_array().unwrap().len(), 8);
    assert!(solve_instance(&text, "fast").is_err());
    assert!(solve_instance("machines 0\n", "auto").is_err());
}
