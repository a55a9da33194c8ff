use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// 17 significant digits, scientific.
pub fn f(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with a `#` header comment carrying the config hash.
pub struct Csv {
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row width");
        self.rows.push(cells);
    }

    pub fn render(&self, name: &str, config_hash: &str) -> String {
        let mut s = format!("# wermerlab {name} config_hash={config_hash}\n{}\n", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

/// One asserted bound. `measured` and `bound` are preformatted.
#[derive(Debug, Clone)]
pub struct Check {
    pub invariant: String,
    pub module: &'static str,
    pub location: String,
    pub measured: String,
    pub bound: String,
    pub pass: bool,
}

impl Check {
    pub fn new(invariant: &str, module: &'static str, location: String, measured: String, bound: String, pass: bool) -> Self {
        Self { invariant: invariant.into(), module, location, measured, bound, pass }
    }

    /// Single-line `key=value` failure record.
    pub fn record(&self) -> String {
        let clean = |s: &str| s.replace(char::is_whitespace, "_");
        format!(
            "invariant={} module={} location={} measured={} bound={}",
            clean(&self.invariant),
            self.module,
            clean(&self.location),
            clean(&self.measured),
            clean(&self.bound)
        )
    }
}

/// Where artifacts go, plus the hash stamped on each of them.
pub struct Sink {
    pub dir: PathBuf,
    pub config_hash: String,
    pub written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: &Path, config_hash: String) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self { dir: dir.to_path_buf(), config_hash, written: Vec::new() })
    }

    pub fn csv(&mut self, name: &str, table: &Csv) -> Result<()> {
        let text = table.render(name, &self.config_hash);
        self.bytes(&format!("{name}.csv"), text.as_bytes())
    }

    pub fn bytes(&mut self, file: &str, data: &[u8]) -> Result<()> {
        let path = self.dir.join(file);
        std::fs::write(&path, data).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }

    pub fn checks(&mut self, name: &str, checks: &[Check]) -> Result<()> {
        let mut t = Csv::new(&["invariant", "module", "location", "measured", "bound", "status"]);
        for c in checks {
            t.row(vec![
                c.invariant.clone(),
                c.module.to_string(),
                c.location.replace(',', ";"),
                c.measured.clone(),
                c.bound.clone(),
                if c.pass { "pass" } else { "fail" }.to_string(),
            ]);
        }
        self.csv(&format!("{name}_checks"), &t)
    }
}
