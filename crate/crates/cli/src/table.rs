//! Plain string tables and their three output formats.
//!
//! Every cell is a string so integers of any size stay exact in all formats.

use std::fmt::Write as _;

use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
    Markdown,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub title: Option<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            title: None,
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        let row: Vec<String> = row.into_iter().map(|c| c.to_string()).collect();
        assert_eq!(row.len(), self.headers.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// Cells of the column with this header.
    pub fn column(&self, header: &str) -> Option<Vec<&str>> {
        let idx = self.headers.iter().position(|h| h == header)?;
        Some(self.rows.iter().map(|r| r[idx].as_str()).collect())
    }
}

/// One or more tables emitted together.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub tables: Vec<Table>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Self { tables: vec![table] }
    }
}

impl Report {
    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
            ReportFormat::Markdown => self.to_markdown(),
        }
    }

    /// Tables separated by a blank line; a title becomes a leading `# ` line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (idx, table) in self.tables.iter().enumerate() {
            if idx > 0 {
                out.push('\n');
            }
            if let Some(title) = &table.title {
                writeln!(out, "# {title}").unwrap();
            }
            let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
            writer.write_record(&table.headers).expect("in-memory write");
            for row in &table.rows {
                writer.write_record(row).expect("in-memory write");
            }
            out.push_str(&String::from_utf8(writer.into_inner().expect("flush")).expect("utf-8 input"));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, csv::Error> {
        let mut tables = Vec::new();
        for chunk in text.split("\n\n").filter(|c| !c.trim().is_empty()) {
            let (title, body) = match chunk.strip_prefix("# ") {
                Some(rest) => {
                    let (title, body) = rest.split_once('\n').unwrap_or((rest, ""));
                    (Some(title.to_string()), body)
                }
                None => (None, chunk),
            };
            let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
            let headers = reader.headers()?.iter().map(str::to_string).collect();
            let rows = reader
                .records()
                .map(|r| r.map(|rec| rec.iter().map(str::to_string).collect()))
                .collect::<Result<_, _>>()?;
            tables.push(Table { title, headers, rows });
        }
        Ok(Self { tables })
    }

    pub fn to_json(&self) -> String {
        let tables: Vec<Value> = self
            .tables
            .iter()
            .map(|t| json!({ "title": t.title, "headers": t.headers, "rows": t.rows }))
            .collect();
        let mut text = serde_json::to_string_pretty(&json!({ "tables": tables })).expect("json");
        text.push('\n');
        text
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        for (idx, table) in self.tables.iter().enumerate() {
            if idx > 0 {
                out.push('\n');
            }
            if let Some(title) = &table.title {
                writeln!(out, "### {title}\n").unwrap();
            }
            let line = |cells: &[String]| {
                let escaped: Vec<String> = cells.iter().map(|c| c.replace('|', "\\|")).collect();
                format!("| {} |", escaped.join(" | "))
            };
            writeln!(out, "{}", line(&table.headers)).unwrap();
            writeln!(out, "|{}", "---|".repeat(table.headers.len())).unwrap();
            for row in &table.rows {
                writeln!(out, "{}", line(row)).unwrap();
            }
        }
        out
    }
}
