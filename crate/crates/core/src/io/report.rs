//! Named residuals with tolerances, printable as text or JSON.

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub max: f64,
    pub mean: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// From a list of nonnegative residuals; NaN counts as infinite.
    pub fn from_values(name: &str, values: &[f64], tolerance: f64) -> Check {
        let clean: Vec<f64> = values
            .iter()
            .map(|v| if v.is_nan() { f64::INFINITY } else { v.abs() })
            .collect();
        let max = clean.iter().copied().fold(0.0, f64::max);
        let mean = if clean.is_empty() {
            0.0
        } else {
            clean.iter().sum::<f64>() / clean.len() as f64
        };
        Check {
            name: name.to_string(),
            max,
            mean,
            tolerance,
            pass: max <= tolerance,
        }
    }

    pub fn single(name: &str, value: f64, tolerance: f64) -> Check {
        Check::from_values(name, &[value], tolerance)
    }

    /// A check that passes when `value` exceeds `bound` (margins, separations).
    pub fn at_least(name: &str, value: f64, bound: f64) -> Check {
        Check {
            name: name.to_string(),
            max: value,
            mean: value,
            tolerance: bound,
            pass: value > bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantReport {
    pub suite: String,
    pub parameters: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl InvariantReport {
    pub fn new(suite: &str) -> Self {
        InvariantReport {
            suite: suite.to_string(),
            parameters: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("suite {}\n", self.suite);
        for (k, v) in &self.parameters {
            s.push_str(&format!("  {k} = {v}\n"));
        }
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            s.push_str(&format!(
                "  [{}] {:<width$}  max {:.3e}  mean {:.3e}  tol {:.1e}\n",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.max,
                c.mean,
                c.tolerance
            ));
        }
        s.push_str(if self.pass() {
            "result: pass\n"
        } else {
            "result: FAIL\n"
        });
        s
    }

    /// JSON with non-finite numbers written as strings.
    pub fn to_json(&self) -> String {
        let num = |x: f64| {
            if x.is_finite() {
                serde_json::json!(x)
            } else {
                serde_json::json!(x.to_string())
            }
        };
        let checks: Vec<_> = self
            .checks
            .iter()
            .map(|c| {
                serde_json::json!({
                    "name": c.name, "max": num(c.max), "mean": num(c.mean),
                    "tolerance": num(c.tolerance), "pass": c.pass,
                })
            })
            .collect();
        let params: serde_json::Map<String, serde_json::Value> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let v = serde_json::json!({ "suite": self.suite, "parameters": params, "checks": checks, "pass": self.pass() });
        serde_json::to_string_pretty(&v).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_within_tolerance() {
        let mut r = InvariantReport::new("demo").param("lambda", 0.5);
        r.push(Check::from_values("a", &[1e-12, 3e-12], 1e-10));
        assert!(r.pass());
        r.push(Check::from_values("b", &[f64::NAN], 1.0));
        assert!(!r.pass());
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"][1]["max"], "inf");
        assert_eq!(v["pass"], false);
        assert!(r.to_text().contains("FAIL"));
    }
}
