//! CSV input and output.
//!
//! Outputs start with `# key=value` comment lines echoing the resolved
//! configuration, followed by a header row. Floats use the shortest
//! representation that round-trips exactly; infinities print as `inf`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Comment lines plus a table, written to `path` or standard output.
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(comments: Vec<String>, header: &[&str]) -> Self {
        Table {
            comments,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write_to(&self, path: Option<&Path>) -> CliResult<()> {
        match path {
            Some(p) => {
                let file = File::create(p).map_err(|e| io_error(p, e))?;
                self.write(BufWriter::new(file)).map_err(|e| io_error(p, e))
            }
            None => self
                .write(io::stdout().lock())
                .map_err(|e| io_error(Path::new("<stdout>"), e)),
        }
    }

    fn write<W: Write>(&self, mut w: W) -> io::Result<()> {
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        let mut csv = csv::WriterBuilder::new().from_writer(&mut w);
        csv.write_record(&self.header)?;
        for row in &self.rows {
            csv.write_record(row)?;
        }
        csv.flush()?;
        drop(csv);
        w.flush()
    }
}

pub fn io_error(path: &Path, source: io::Error) -> CliError {
    CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// `<out><suffix>`, e.g. `fit.csv` becomes `fit.csv.cond.csv`.
pub fn sidecar(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

/// A numeric CSV file: optional header row, `#` comments, no ragged rows.
#[derive(Debug)]
pub struct NumericTable {
    pub header: Option<Vec<String>>,
    /// 1-based source line of every row.
    pub lines: Vec<u64>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_numeric(path: &Path) -> CliResult<NumericTable> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    let parse_error = |line: u64, message: String| CliError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };

    let mut table = NumericTable {
        header: None,
        lines: Vec::new(),
        rows: Vec::new(),
    };
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            match e.into_kind() {
                csv::ErrorKind::Io(source) => io_error(path, source),
                csv::ErrorKind::UnequalLengths {
                    expected_len, len, ..
                } => parse_error(line, format!("expected {expected_len} fields, found {len}")),
                kind => parse_error(line, format!("{kind:?}")),
            }
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => {
                table.lines.push(line);
                table.rows.push(row);
            }
            Err(_) if table.rows.is_empty() && table.header.is_none() => {
                table.header = Some(record.iter().map(str::to_string).collect());
            }
            Err(_) => {
                let bad = record
                    .iter()
                    .find(|f| f.parse::<f64>().is_err())
                    .unwrap_or_default();
                return Err(parse_error(line, format!("`{bad}` is not a number")));
            }
        }
    }
    Ok(table)
}
