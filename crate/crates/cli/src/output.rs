use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;

use crate::input::CliError;

/// Where a report goes: stdout, or a file created up front so that an
/// unwritable path fails before any work is done.
pub struct Sink {
    label: PathBuf,
    inner: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Sink {
                label: PathBuf::from("<stdout>"),
                inner: Box::new(BufWriter::new(io::stdout().lock())),
            }),
            Some(p) => {
                let f = File::create(p).map_err(|e| CliError::io(p, e))?;
                Ok(Sink {
                    label: p.to_path_buf(),
                    inner: Box::new(BufWriter::new(f)),
                })
            }
        }
    }

    pub fn line(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.inner, "{s}").map_err(|e| CliError::io(&self.label, e))
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.inner.flush().map_err(|e| CliError::io(&self.label, e))
    }
}

/// Converts to a `serde_json::Value`; object keys come out sorted because
/// the map type is a `BTreeMap`.
pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize to JSON")
}

/// Adds the schema tag and, on request, a timestamp, then pretty-prints.
pub fn render_document(mut doc: Value, timestamps: bool) -> String {
    if let Value::Object(map) = &mut doc {
        map.insert("schema".into(), Value::from("1"));
        if timestamps {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
            map.insert("generated_at_unix".into(), Value::from(secs));
        }
    }
    serde_json::to_string_pretty(&doc).expect("values always print")
}
