use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRow {
    pub name: String,
    /// `key=value` pairs joined by `;`
    pub parameters: String,
    pub value: f64,
}

/// Named scalar results of a diagnostics run, in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticsReport {
    pub rows: Vec<DiagnosticRow>,
}

impl DiagnosticsReport {
    pub fn push(&mut self, name: &str, parameters: &[(&str, String)], value: f64) {
        let parameters = parameters.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";");
        self.rows.push(DiagnosticRow { name: name.to_string(), parameters, value });
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("diagnostic,parameters,value\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},\"{}\",{:e}", r.name, r.parameters.replace('"', "\"\""), r.value);
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(self.csv().as_bytes())?;
        Ok(())
    }

    pub fn table(&self) -> String {
        let w_name = self.rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max("diagnostic".len());
        let w_par = self.rows.iter().map(|r| r.parameters.len()).max().unwrap_or(0).max("parameters".len());
        let mut s = format!("{:<w_name$}  {:<w_par$}  value\n", "diagnostic", "parameters");
        for r in &self.rows {
            let _ = writeln!(s, "{:<w_name$}  {:<w_par$}  {:.6e}", r.name, r.parameters, r.value);
        }
        s
    }
}
