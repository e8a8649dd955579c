//! Golden-file regression: field-wise comparison of report JSON trees with
//! per-field tolerances.

use std::collections::BTreeMap;

use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoldenVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone)]
pub struct GoldenDiff {
    /// JSON-pointer-ish path of the field.
    pub path: String,
    pub expected: String,
    pub actual: String,
    /// Within tolerance but not identical.
    pub drift: bool,
}

#[derive(Debug, Clone)]
pub struct GoldenReport {
    pub verdict: GoldenVerdict,
    pub diffs: Vec<GoldenDiff>,
}

/// Look up the most specific tolerance for a path: exact path first, then
/// the longest prefix, then the default.
fn tolerance_for(path: &str, tolerances: &BTreeMap<String, f64>, default: f64) -> f64 {
    if let Some(t) = tolerances.get(path) {
        return *t;
    }
    let mut best: Option<(usize, f64)> = None;
    for (k, v) in tolerances {
        if path.starts_with(k.as_str()) && best.map(|(l, _)| k.len() > l).unwrap_or(true) {
            best = Some((k.len(), *v));
        }
    }
    best.map(|(_, v)| v).unwrap_or(default)
}

fn walk(
    path: &str,
    actual: &Value,
    golden: &Value,
    tolerances: &BTreeMap<String, f64>,
    default_tol: f64,
    diffs: &mut Vec<GoldenDiff>,
) {
    match (actual, golden) {
        (Value::Number(a), Value::Number(g)) => {
            let (a, g) = (a.as_f64().unwrap_or(f64::NAN), g.as_f64().unwrap_or(f64::NAN));
            let tol = tolerance_for(path, tolerances, default_tol);
            let scale = g.abs().max(1.0);
            let diff = (a - g).abs();
            if diff > tol * scale {
                diffs.push(GoldenDiff {
                    path: path.to_string(),
                    expected: format!("{g}"),
                    actual: format!("{a}"),
                    drift: false,
                });
            } else if diff > 0.0 {
                diffs.push(GoldenDiff {
                    path: path.to_string(),
                    expected: format!("{g}"),
                    actual: format!("{a}"),
                    drift: true,
                });
            }
        }
        (Value::Object(a), Value::Object(g)) => {
            for (k, gv) in g {
                match a.get(k) {
                    Some(av) => walk(
                        &format!("{path}/{k}"),
                        av,
                        gv,
                        tolerances,
                        default_tol,
                        diffs,
                    ),
                    None => diffs.push(GoldenDiff {
                        path: format!("{path}/{k}"),
                        expected: gv.to_string(),
                        actual: "<missing>".into(),
                        drift: false,
                    }),
                }
            }
            for k in a.keys() {
                if !g.contains_key(k) {
                    diffs.push(GoldenDiff {
                        path: format!("{path}/{k}"),
                        expected: "<absent in golden>".into(),
                        actual: a[k].to_string(),
                        drift: false,
                    });
                }
            }
        }
        (Value::Array(a), Value::Array(g)) => {
            if a.len() != g.len() {
                diffs.push(GoldenDiff {
                    path: path.to_string(),
                    expected: format!("array of {}", g.len()),
                    actual: format!("array of {}", a.len()),
                    drift: false,
                });
                return;
            }
            for (i, (av, gv)) in a.iter().zip(g).enumerate() {
                walk(
                    &format!("{path}/{i}"),
                    av,
                    gv,
                    tolerances,
                    default_tol,
                    diffs,
                );
            }
        }
        _ => {
            if actual != golden {
                diffs.push(GoldenDiff {
                    path: path.to_string(),
                    expected: golden.to_string(),
                    actual: actual.to_string(),
                    drift: false,
                });
            }
        }
    }
}

/// Compare a report (as JSON) against the golden JSON.  `default_tol` is the
/// relative tolerance for numbers without a specific entry.
pub fn compare_golden(
    actual: &Value,
    golden: &Value,
    tolerances: &BTreeMap<String, f64>,
    default_tol: f64,
) -> GoldenReport {
    let mut diffs = Vec::new();
    walk("", actual, golden, tolerances, default_tol, &mut diffs);
    let verdict = if diffs.iter().any(|d| !d.drift) {
        GoldenVerdict::Fail
    } else {
        GoldenVerdict::Pass
    };
    GoldenReport { verdict, diffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn identical_reports_pass() {
        let v = json!({"a": 1.0, "b": {"c": [1, 2, 3]}});
        let r = compare_golden(&v, &v, &BTreeMap::new(), 1e-12);
        assert_eq!(r.verdict, GoldenVerdict::Pass);
        assert!(r.diffs.is_empty());
    }

    #[test]
    fn perturbation_beyond_tolerance_fails_naming_the_field() {
        let a = json!({"x": {"y": 1.001}});
        let g = json!({"x": {"y": 1.0}});
        let r = compare_golden(&a, &g, &BTreeMap::new(), 1e-6);
        assert_eq!(r.verdict, GoldenVerdict::Fail);
        assert_eq!(r.diffs.len(), 1);
        assert_eq!(r.diffs[0].path, "/x/y");
    }

    #[test]
    fn drift_within_tolerance_passes_with_note() {
        let a = json!({"x": 1.0000001});
        let g = json!({"x": 1.0});
        let mut tols = BTreeMap::new();
        tols.insert("/x".to_string(), 1e-3);
        let r = compare_golden(&a, &g, &tols, 1e-12);
        assert_eq!(r.verdict, GoldenVerdict::Pass);
        assert_eq!(r.diffs.len(), 1);
        assert!(r.diffs[0].drift);
    }
}
