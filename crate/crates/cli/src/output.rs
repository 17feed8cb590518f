//! Output formatting: long-format tables `(x, series, value)` and scalar
//! reports, as CSV (default) or JSON. All numbers print with 12 significant
//! digits so identical configurations produce byte-identical files.

use std::io::Write;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub struct Row {
    pub x: f64,
    pub series: String,
    pub value: f64,
}

pub struct Table {
    pub meta: String,
    pub rows: Vec<Row>,
}

pub struct Report {
    pub meta: String,
    pub items: Vec<(String, f64)>,
}

pub fn fmt_g(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn write_table(w: &mut impl Write, format: Format, table: &Table) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "# {}", table.meta)?;
            writeln!(w, "x,series,value")?;
            for r in &table.rows {
                writeln!(w, "{},{},{}", fmt_g(r.x), r.series, fmt_g(r.value))?;
            }
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "x": r.x,
                        "series": r.series,
                        "value": r.value,
                    })
                })
                .collect();
            let doc = serde_json::json!({ "meta": table.meta, "rows": rows });
            writeln!(w, "{}", serde_json::to_string_pretty(&doc).unwrap())?;
        }
    }
    Ok(())
}

pub fn write_report(w: &mut impl Write, format: Format, report: &Report) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "# {}", report.meta)?;
            writeln!(w, "quantity,value")?;
            for (k, v) in &report.items {
                writeln!(w, "{},{}", k, fmt_g(*v))?;
            }
        }
        Format::Json => {
            let items: Vec<serde_json::Value> = report
                .items
                .iter()
                .map(|(k, v)| serde_json::json!({ "quantity": k, "value": v }))
                .collect();
            let doc = serde_json::json!({ "meta": report.meta, "values": items });
            writeln!(w, "{}", serde_json::to_string_pretty(&doc).unwrap())?;
        }
    }
    Ok(())
}
