use serde_json::{json, Map, Value};

/// One answer, renderable as text or as a single-line JSON object whose
/// leading keys are always `query`, `result`, `kind`, `trace`, `revision`.
#[derive(Debug, Clone)]
pub struct Report {
    pub query: String,
    pub result: Value,
    pub kind: String,
    pub trace: Vec<String>,
    pub revision: u64,
    pub extra: Vec<(&'static str, Value)>,
    pub text: String,
    /// False for a negative or blocked answer; drives `--strict-exit`.
    pub positive: bool,
}

impl Report {
    pub fn new(query: impl Into<String>, kind: impl Into<String>, revision: u64) -> Self {
        Report {
            query: query.into(),
            result: Value::Null,
            kind: kind.into(),
            trace: Vec::new(),
            revision,
            extra: Vec::new(),
            text: String::new(),
            positive: true,
        }
    }

    pub fn answer(mut self, result: bool) -> Self {
        self.result = Value::Bool(result);
        self.positive = result;
        self
    }

    pub fn result(mut self, result: Value) -> Self {
        self.result = result;
        self
    }

    pub fn trace(mut self, trace: Vec<String>) -> Self {
        self.trace = trace;
        self
    }

    pub fn with(mut self, key: &'static str, value: Value) -> Self {
        self.extra.push((key, value));
        self
    }

    pub fn text(mut self, text: impl Into<String>) -> Self {
        self.text = text.into();
        self
    }

    pub fn to_json(&self) -> String {
        let mut map = Map::new();
        map.insert("query".into(), json!(self.query));
        map.insert("result".into(), self.result.clone());
        map.insert("kind".into(), json!(self.kind));
        map.insert("trace".into(), json!(self.trace));
        map.insert("revision".into(), json!(self.revision));
        for (k, v) in &self.extra {
            map.insert((*k).into(), v.clone());
        }
        Value::Object(map).to_string()
    }

    /// Text output: the answer line(s), then the trace indented.
    pub fn to_text(&self) -> String {
        let mut out = self.text.clone();
        if !out.is_empty() && !out.ends_with('\n') {
            out.push('\n');
        }
        for step in &self.trace {
            out.push_str("  ");
            out.push_str(step);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_key_order() {
        let r = Report::new("q", "not_entailed", 1)
            .answer(false)
            .with("extra", json!(1));
        assert_eq!(
            r.to_json(),
            r#"{"query":"q","result":false,"kind":"not_entailed","trace":[],"revision":1,"extra":1}"#
        );
    }

    #[test]
    fn text_indents_trace() {
        let r = Report::new("q", "k", 1)
            .text("BLOCKED")
            .trace(vec!["a".into(), "b".into()]);
        assert_eq!(r.to_text(), "BLOCKED\n  a\n  b\n");
    }
}
