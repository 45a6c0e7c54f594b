use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

/// Everything needed to rerun a command and compare its verdicts.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub seed: u64,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Value,
    /// Excluded when comparing replays.
    pub wall_time_ms: u128,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, seed: u64) -> Self {
        RunReport { command: command.into(), inputs, seed, verdicts: vec![], witnesses: Value::Null, wall_time_ms: 0 }
    }

    pub fn verdict(&mut self, name: &str, holds: bool, detail: impl Into<String>) {
        self.verdicts.push(Verdict { name: name.into(), holds, detail: detail.into() });
    }

    pub fn witness(&mut self, key: &str, v: Value) {
        if !self.witnesses.is_object() {
            self.witnesses = Value::Object(Default::default());
        }
        self.witnesses[key] = v;
    }

    pub fn all_hold(&self) -> bool {
        self.verdicts.iter().all(|v| v.holds)
    }

    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.command);
        for v in &self.verdicts {
            let mark = if v.holds { "ok  " } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {}: {}\n", v.name, v.detail));
        }
        out
    }
}
