//! Report documents printed by the subcommands, as aligned text or JSON.

use hopf_core::{AxiomReport, Tolerance};
use serde_json::{json, Map, Value};

pub struct Doc {
    command: &'static str,
    input: String,
    tolerance: Tolerance,
    info: Map<String, Value>,
    report: AxiomReport,
}

impl Doc {
    pub fn new(command: &'static str, input: &str, tolerance: Tolerance) -> Self {
        Self {
            command,
            input: input.to_string(),
            tolerance,
            info: Map::new(),
            report: AxiomReport::new(),
        }
    }

    pub fn info(&mut self, key: &str, value: Value) {
        self.info.insert(key.to_string(), value);
    }

    pub fn merge(&mut self, prefix: &str, r: AxiomReport) {
        self.report.merge(prefix, r);
    }

    pub fn push(&mut self, check: &str, residual: f64, pass: bool) {
        self.report.push(check, residual, pass);
    }

    pub fn passed(&self) -> bool {
        self.report.overall
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            self.render_json()
        } else {
            self.render_text()
        }
    }

    fn render_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert("input".into(), json!(self.input));
        obj.insert(
            "tolerance".into(),
            json!({"abs": self.tolerance.abs, "rel": self.tolerance.rel}),
        );
        for (k, v) in &self.info {
            obj.insert(k.clone(), v.clone());
        }
        obj.insert("report".into(), serde_json::to_value(&self.report).expect("report serializes"));
        hopf_core::io::to_json_string(&Value::Object(obj))
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("hopf {} {}\n", self.command, self.input));
        out.push_str(&format!(
            "tolerance: abs {:e}, rel {:e}\n",
            self.tolerance.abs, self.tolerance.rel
        ));
        for (k, v) in &self.info {
            out.push_str(&format!("{k}: {}\n", text_value(v)));
        }
        let width = self.report.entries.iter().map(|e| e.check.len()).max().unwrap_or(0);
        for e in &self.report.entries {
            out.push_str(&format!(
                "{:<width$}  {:>12.3e}  {}\n",
                e.check,
                e.residual,
                if e.pass { "pass" } else { "FAIL" }
            ));
        }
        out.push_str(if self.report.overall { "overall: pass\n" } else { "overall: FAIL\n" });
        out
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(Value::is_object) => items
            .iter()
            .map(|item| format!("\n  {}", text_value(item)))
            .collect(),
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| format!("{k}={}", text_value(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}
