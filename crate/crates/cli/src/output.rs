use serde::Serialize;

use crate::Failure;

pub fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn table(
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<String, Failure> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let err = |e: csv::Error| Failure::Numeric(e.to_string());
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::Numeric(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::Numeric(e.to_string()))
}

/// `field,value` rows for the top-level fields of a report; nested values
/// are written as compact JSON.
pub fn fields<T: Serialize>(value: &T) -> Result<String, Failure> {
    let v = serde_json::to_value(value).map_err(|e| Failure::Numeric(e.to_string()))?;
    let serde_json::Value::Object(map) = v else {
        return Err(Failure::Numeric("report is not an object".into()));
    };
    let rows = map.into_iter().map(|(k, v)| {
        let cell = match v {
            serde_json::Value::Null => String::new(),
            serde_json::Value::Bool(b) => b.to_string(),
            serde_json::Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), num),
            serde_json::Value::String(s) => s,
            other => other.to_string(),
        };
        vec![k, cell]
    });
    table(&["field", "value"], rows)
}
