use serde::Serialize;
use serde_json::Value;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;
use wgroups::suite::Status;

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNDECIDED: u8 = 3;
pub const EXIT_ERROR: u8 = 4;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Compute(String),
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn compute(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    /// Acceptance criteria the report bears on, as `criterion:N`.
    pub provenance: Vec<String>,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value, status: Status) -> Self {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            inputs,
            results,
            provenance: Vec::new(),
            status,
        }
    }

    pub fn criteria(mut self, ids: &[u8]) -> Self {
        self.provenance = ids.iter().map(|i| format!("criterion:{i}")).collect();
        self
    }
}

pub fn status_of(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

pub struct Sink {
    out: Box<dyn Write>,
    worst: Status,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self, CliError> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
                CliError::Io {
                    path: p.to_path_buf(),
                    source,
                }
            })?)),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Sink {
            out,
            worst: Status::Pass,
        })
    }

    pub fn emit(&mut self, r: &Report) -> Result<(), CliError> {
        self.worst = match (self.worst, r.status) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Undecided, _) | (_, Status::Undecided) => Status::Undecided,
            _ => Status::Pass,
        };
        let line = serde_json::to_string(r).map_err(compute)?;
        writeln!(self.out, "{line}")
            .and_then(|_| self.out.flush())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<output>"),
                source,
            })
    }

    pub fn exit_code(&self) -> u8 {
        match self.worst {
            Status::Pass => 0,
            Status::Fail => EXIT_FAIL,
            Status::Undecided => EXIT_UNDECIDED,
        }
    }
}
