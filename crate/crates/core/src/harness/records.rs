//! Run records and the records file format.
//!
//! A records file starts with a header line
//! `{"format":"swarmcov-records","version":1}` followed by one JSON object
//! per line, fields in declaration order of [`RunRecord`].

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::gridmap::Coord;

pub const RECORDS_FORMAT: &str = "swarmcov-records";
pub const RECORDS_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

/// Persisted outcome of one seeded GA run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub map_id: String,
    pub uavs: usize,
    pub population_size: usize,
    pub generations: usize,
    pub run_index: usize,
    pub seed: u64,
    pub covered: bool,
    pub best_fitness: u32,
    pub best_epochs: Option<u32>,
    pub wall_time_seconds: f64,
    #[serde(default)]
    pub generations_executed: usize,
    #[serde(default)]
    pub genotype: Vec<f64>,
    #[serde(default)]
    pub paths: Vec<Vec<Coord>>,
}

/// Identity of a run within a grid; used to skip runs when resuming.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecordKey {
    pub map_id: String,
    pub uavs: usize,
    pub population_size: usize,
    pub generations: usize,
    pub run_index: usize,
    pub seed: u64,
}

impl RunRecord {
    pub fn key(&self) -> RecordKey {
        RecordKey {
            map_id: self.map_id.clone(),
            uavs: self.uavs,
            population_size: self.population_size,
            generations: self.generations,
            run_index: self.run_index,
            seed: self.seed,
        }
    }
}

/// Destination for completed records.
pub trait RecordSink {
    fn append(&mut self, record: &RunRecord) -> io::Result<()>;
}

impl RecordSink for Vec<RunRecord> {
    fn append(&mut self, record: &RunRecord) -> io::Result<()> {
        self.push(record.clone());
        Ok(())
    }
}

/// Writes the records file format, flushing after every record so an
/// interrupted grid leaves a readable prefix.
pub struct RecordWriter<W: Write> {
    out: W,
}

impl<W: Write> RecordWriter<W> {
    /// Starts a new file, writing the header line.
    pub fn create(mut out: W) -> io::Result<Self> {
        let header = Header {
            format: RECORDS_FORMAT.into(),
            version: RECORDS_VERSION,
        };
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(Self { out })
    }

    /// Continues a file whose header has already been written.
    pub fn append_to(out: W) -> Self {
        Self { out }
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> RecordSink for RecordWriter<W> {
    fn append(&mut self, record: &RunRecord) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, record)?;
        self.out.write_all(b"\n")?;
        self.out.flush()
    }
}

/// Parses a records stream. A truncated final line (from an interrupted
/// write) is an error like any other malformed line.
pub fn read_records(input: impl BufRead) -> Result<Vec<RunRecord>, HarnessError> {
    let mut lines = input.lines().enumerate();
    let header_line = loop {
        match lines.next() {
            None => return Err(HarnessError::EmptyRecords),
            Some((_, line)) => {
                let line = line?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
        }
    };
    let header: Header =
        serde_json::from_str(&header_line).map_err(|e| HarnessError::BadRecord {
            line: 1,
            message: format!("bad header: {e}"),
        })?;
    if header.format != RECORDS_FORMAT || header.version != RECORDS_VERSION {
        return Err(HarnessError::BadRecord {
            line: 1,
            message: format!(
                "unsupported records format {} v{} (expected {RECORDS_FORMAT} v{RECORDS_VERSION})",
                header.format, header.version
            ),
        });
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| HarnessError::BadRecord {
            line: i + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

pub fn read_records_file(path: impl AsRef<Path>) -> Result<Vec<RunRecord>, HarnessError> {
    read_records(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(i: usize) -> RunRecord {
        RunRecord {
            map_id: "map1".into(),
            uavs: 2,
            population_size: 100,
            generations: 10,
            run_index: i,
            seed: 12345 + i as u64,
            covered: i.is_multiple_of(2),
            best_fitness: if i.is_multiple_of(2) { 24 } else { 50 },
            best_epochs: (i.is_multiple_of(2)).then_some(24),
            wall_time_seconds: 0.25,
            generations_executed: 10,
            genotype: vec![0.1, 0.30000000000000004, 1.0],
            paths: vec![vec![Coord::new(0, 0), Coord::new(0, 1)]],
        }
    }

    #[test]
    fn round_trip_through_file_format() {
        let mut w = RecordWriter::create(Vec::new()).unwrap();
        for i in 0..3 {
            w.append(&record(i)).unwrap();
        }
        let bytes = w.into_inner();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert!(text.starts_with("{\"format\":\"swarmcov-records\",\"version\":1}\n"));
        let second = text.lines().nth(1).unwrap();
        assert!(second.starts_with("{\"map_id\":\"map1\",\"uavs\":2,\"population_size\":100,"));
        assert!(second.contains("\"paths\":[[[0,0],[0,1]]]"));
        let back = read_records(&bytes[..]).unwrap();
        assert_eq!(back, (0..3).map(record).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_bad_files() {
        assert!(matches!(
            read_records(&b""[..]),
            Err(HarnessError::EmptyRecords)
        ));
        assert!(matches!(
            read_records(&b"{\"format\":\"other\",\"version\":1}\n"[..]),
            Err(HarnessError::BadRecord { line: 1, .. })
        ));
        let truncated = b"{\"format\":\"swarmcov-records\",\"version\":1}\n{\"map_id\":\"ma";
        assert!(matches!(
            read_records(&truncated[..]),
            Err(HarnessError::BadRecord { line: 2, .. })
        ));
        let header_only = b"{\"format\":\"swarmcov-records\",\"version\":1}\n";
        assert_eq!(read_records(&header_only[..]).unwrap(), vec![]);
    }
}
