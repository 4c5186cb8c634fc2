//! Command reports: plain text for people, a fixed JSON schema for scripts.

use serde::Serialize;
use serde_json::{Map, Value};

/// How a command ended, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// A verification did not hold (exit code 1).
    Failed,
}

/// JSON keys: `command`, `inputs`, `results`, `residual_order`,
/// `deviations`. Object keys are sorted, so output is byte-stable.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub residual_order: Option<String>,
    pub deviations: Vec<String>,
    #[serde(skip)]
    lines: Vec<String>,
    #[serde(skip)]
    pub outcome: Outcome,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            results: Map::new(),
            residual_order: None,
            deviations: Vec::new(),
            lines: Vec::new(),
            outcome: Outcome::Ok,
        }
    }

    pub fn input(&mut self, key: &str, v: impl Into<Value>) {
        self.inputs.insert(key.to_string(), v.into());
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.to_string(), v.into());
    }

    /// A line of the text report.
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Records an interpretation or substitution, echoed in both formats.
    pub fn deviation(&mut self, s: impl Into<String>) {
        let s = s.into();
        self.lines.push(format!("note: {s}"));
        self.deviations.push(s);
    }

    pub fn fail(&mut self) {
        self.outcome = Outcome::Failed;
    }

    pub fn text(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// `x` with 15 significant digits.
pub fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-5..15).contains(&mag) {
        format!("{:.*}", (14 - mag).max(0) as usize, x)
    } else {
        format!("{x:.14e}")
    }
}

/// `re ± im·i` with 15 significant digits per part.
pub fn complex15(re: f64, im: f64) -> String {
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{} {sign} {}i", sig15(re), sig15(im.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(sig15(1.1104197465122865), "1.11041974651229");
        assert_eq!(sig15(85.33333333333328), "85.3333333333333");
        assert_eq!(sig15(0.0), "0");
        assert_eq!(sig15(1e50), "1.00000000000000e50");
        assert_eq!(complex15(0.5, -2.0), "0.500000000000000 - 2.00000000000000i");
    }

    #[test]
    fn json_schema_keys() {
        let mut r = Report::new("eta");
        r.input("spec", "1^4 5^4");
        r.result("level", 20);
        r.deviation("read as Δ");
        let v: Value = serde_json::from_str(&r.json()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["command", "deviations", "inputs", "residual_order", "results"]);
        assert!(r.text().contains("note: read as Δ"));
    }
}
