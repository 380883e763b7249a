//! Report envelope and deterministic JSON output.

use std::io;

use serde_json::ser::Formatter;
use serde_json::{Map, Value};

/// `{"command", "result", "violations", "tolerances_used"}`; object keys come
/// out sorted because `serde_json::Map` is a `BTreeMap`.
pub struct Report {
    pub command: &'static str,
    pub result: Value,
    pub violations: Vec<Value>,
    pub tolerances: Map<String, Value>,
}

impl Report {
    pub fn new(command: &'static str, result: Value) -> Self {
        Self { command, result, violations: Vec::new(), tolerances: Map::new() }
    }

    pub fn tol(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_owned(), Value::from(value));
        self
    }

    pub fn violations(mut self, v: Vec<Value>) -> Self {
        self.violations = v;
        self
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), Value::from(self.command));
        m.insert("result".into(), self.result.clone());
        m.insert("violations".into(), Value::Array(self.violations.clone()));
        m.insert("tolerances_used".into(), Value::Object(self.tolerances.clone()));
        Value::Object(m)
    }

    /// One line of JSON with a trailing newline.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17);
        serde::Serialize::serialize(&self.to_value(), &mut ser).expect("writing to a Vec cannot fail");
        out.push(b'\n');
        out
    }
}

/// Compact layout; floats with 17 significant digits, enough to round-trip
/// any `f64`.
struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }
}
