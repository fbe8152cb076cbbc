use serde_json::Value as Json;

/// A command result: the JSON document plus a flat table for csv/markdown.
pub struct Report {
    pub doc: Json,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Replaces the generic markdown table when set.
    pub markdown: Option<String>,
}

impl Report {
    pub fn new(doc: Json, headers: &[&str], rows: Vec<Vec<String>>) -> Self {
        Report {
            doc,
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows,
            markdown: None,
        }
    }

    /// One row of `key, value` pairs from a flat object.
    pub fn key_value(doc: Json) -> Self {
        let rows = doc
            .as_object()
            .map(|m| m.iter().map(|(k, v)| vec![k.clone(), cell(v)]).collect())
            .unwrap_or_default();
        Report::new(doc, &["key", "value"], rows)
    }
}

/// Scalars print bare; everything else as compact JSON.
pub fn cell(v: &Json) -> String {
    match v {
        Json::String(s) => s.clone(),
        Json::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn json(r: &Report) -> String {
    let mut s = serde_json::to_string_pretty(&r.doc).expect("plain data");
    s.push('\n');
    s
}

pub fn csv(r: &Report) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&r.headers).expect("in-memory write");
    for row in &r.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

pub fn markdown_table(headers: &[String], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    let line = |cells: Vec<String>| format!("| {} |\n", cells.join(" | "));
    out.push_str(&line(headers.iter().map(|h| md_escape(h)).collect()));
    out.push_str(&line(headers.iter().map(|_| "---".to_string()).collect()));
    for row in rows {
        out.push_str(&line(row.iter().map(|c| md_escape(c)).collect()));
    }
    out
}

pub fn markdown(r: &Report) -> String {
    r.markdown
        .clone()
        .unwrap_or_else(|| markdown_table(&r.headers, &r.rows))
}
