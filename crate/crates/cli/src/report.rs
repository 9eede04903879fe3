//! Self-describing CSV reports.

use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: String,
    pub seed: Option<u64>,
    pub paper_bound: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub footer: Vec<(String, String)>,
}

impl Report {
    pub fn new(config: String, seed: Option<u64>, paper_bound: impl Into<String>, columns: &[&'static str]) -> Self {
        Self { config, seed, paper_bound: paper_bound.into(), columns: columns.to_vec(), rows: Vec::new(), footer: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn footer(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.footer.push((key.into(), value.into()));
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# config: {}", self.config).unwrap();
        match self.seed {
            Some(s) => writeln!(out, "# seed: {s}").unwrap(),
            None => writeln!(out, "# seed: none").unwrap(),
        }
        writeln!(out, "# paper_bound: {}", self.paper_bound).unwrap();
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for r in &self.rows {
            writeln!(out, "{}", r.join(",")).unwrap();
        }
        for (k, v) in &self.footer {
            writeln!(out, "# {k}: {v}").unwrap();
        }
        out
    }

    /// Writes to `path`, or to stdout when `path` is `None`.
    pub fn emit(&self, path: Option<&Path>) -> std::io::Result<()> {
        match path {
            Some(p) => std::fs::write(p, self.render()),
            None => {
                print!("{}", self.render());
                Ok(())
            }
        }
    }
}

pub fn num(v: f64) -> String {
    format!("{v:e}")
}
