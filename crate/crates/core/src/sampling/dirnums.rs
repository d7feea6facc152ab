//! Sobol' direction numbers in the Joe-Kuo text layout.
//!
//! The file starts with one header line, followed by one record per
//! dimension `d s a m_1 ... m_s`: the dimension index (starting at 2), the
//! degree `s` of the primitive polynomial, the polynomial's interior
//! coefficients packed into the integer `a`, and the `s` initial direction
//! integers. Dimension 1 is the van der Corput sequence and has no record.

use std::io::BufRead;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Environment variable consulted when no explicit direction-number path is given.
pub const DIRNUMS_ENV: &str = "MEANDIM_DIRNUMS";

/// The first 1024 dimensions of the Joe-Kuo `new-joe-kuo-6` table.
const EMBEDDED: &str = include_str!("../../data/new-joe-kuo-6.1024.txt");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionRecord {
    pub dim: usize,
    pub degree: u32,
    pub coefficients: u32,
    pub initial: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionNumbers {
    records: Vec<DirectionRecord>,
}

impl DirectionNumbers {
    /// Parses and validates a Joe-Kuo direction-number stream.
    pub fn load<R: BufRead>(source: R) -> Result<Self> {
        let mut lines = source.lines().enumerate();
        match lines.next() {
            None => {
                return Err(Error::Parse {
                    line: 1,
                    message: "empty stream, expected a header line".into(),
                })
            }
            Some((_, header)) => {
                header.map_err(|e| Error::Parse {
                    line: 1,
                    message: e.to_string(),
                })?;
            }
        }

        let mut records: Vec<DirectionRecord> = Vec::new();
        for (index, line) in lines {
            let line_no = index + 1;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                message: e.to_string(),
            })?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let record = parse_record(&fields, line_no)?;
            let expected = records.last().map_or(2, |r| r.dim + 1);
            if record.dim != expected {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!(
                        "records must be sorted and contiguous: expected dimension {expected}, found {}",
                        record.dim
                    ),
                });
            }
            validate(&record)?;
            records.push(record);
        }
        if records.is_empty() {
            return Err(Error::Parse {
                line: 2,
                message: "no direction-number records after the header".into(),
            });
        }
        Ok(DirectionNumbers { records })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::load(std::io::BufReader::new(file))
    }

    /// The built-in table (1024 dimensions), parsed once.
    pub fn embedded() -> &'static DirectionNumbers {
        static TABLE: OnceLock<DirectionNumbers> = OnceLock::new();
        TABLE.get_or_init(|| {
            DirectionNumbers::load(EMBEDDED.as_bytes()).expect("embedded direction numbers are valid")
        })
    }

    /// Loads from `path` if given, else from `$MEANDIM_DIRNUMS` if set, else
    /// returns the embedded table.
    pub fn resolve(path: Option<&Path>) -> Result<DirectionNumbers> {
        if let Some(p) = path {
            return Self::from_path(p);
        }
        match std::env::var_os(DIRNUMS_ENV) {
            Some(p) if !p.is_empty() => Self::from_path(Path::new(&p)),
            _ => Ok(Self::embedded().clone()),
        }
    }

    /// Highest dimension these numbers support (dimension 1 needs no record).
    pub fn max_dim(&self) -> usize {
        self.records.len() + 1
    }

    pub fn records(&self) -> &[DirectionRecord] {
        &self.records
    }

    /// Record for dimension `dim` (2-based, as in the file).
    pub fn record(&self, dim: usize) -> Option<&DirectionRecord> {
        dim.checked_sub(2).and_then(|i| self.records.get(i))
    }
}

fn parse_record(fields: &[&str], line: usize) -> Result<DirectionRecord> {
    let num = |i: usize, name: &str| -> Result<u64> {
        let raw = fields.get(i).ok_or_else(|| Error::Parse {
            line,
            message: format!("missing field `{name}`"),
        })?;
        raw.parse::<u64>().map_err(|_| Error::Parse {
            line,
            message: format!("field `{name}` is not a non-negative integer: {raw:?}"),
        })
    };
    let dim = num(0, "d")? as usize;
    let degree = num(1, "s")?;
    if degree == 0 || degree > 31 {
        return Err(Error::Parse {
            line,
            message: format!("polynomial degree {degree} outside 1..=31"),
        });
    }
    let coefficients = num(2, "a")?;
    if fields.len() != 3 + degree as usize {
        return Err(Error::Parse {
            line,
            message: format!(
                "expected {} initial direction numbers, found {}",
                degree,
                fields.len().saturating_sub(3)
            ),
        });
    }
    let initial = (0..degree as usize)
        .map(|k| num(3 + k, "m_i"))
        .collect::<Result<Vec<u64>>>()?;
    if coefficients >= 1 << (degree - 1) || initial.iter().any(|&m| m > u32::MAX as u64) {
        return Err(Error::Parse {
            line,
            message: "value out of range for a 32-bit record".into(),
        });
    }
    Ok(DirectionRecord {
        dim,
        degree: degree as u32,
        coefficients: coefficients as u32,
        initial: initial.into_iter().map(|m| m as u32).collect(),
    })
}

fn validate(record: &DirectionRecord) -> Result<()> {
    for (k, &m) in record.initial.iter().enumerate() {
        let i = k + 1;
        if m % 2 == 0 {
            return Err(Error::Validation {
                dim: record.dim,
                message: format!("m_{i} = {m} is even"),
            });
        }
        if (m as u64) >= 1u64 << i {
            return Err(Error::Validation {
                dim: record.dim,
                message: format!("m_{i} = {m} is not below 2^{i}"),
            });
        }
    }
    Ok(())
}

/// The 32 direction integers `v_1..v_32` (as left-aligned `u32`) for a
/// 1-based dimension.
pub(crate) fn direction_integers(numbers: &DirectionNumbers, dim: usize) -> [u32; 32] {
    let mut v = [0u32; 32];
    if dim == 1 {
        for (k, slot) in v.iter_mut().enumerate() {
            *slot = 1u32 << (31 - k);
        }
        return v;
    }
    let rec = numbers.record(dim).expect("dimension checked by caller");
    let s = rec.degree as usize;
    for k in 0..s.min(32) {
        v[k] = rec.initial[k] << (31 - k);
    }
    for k in s..32 {
        let mut next = v[k - s] ^ (v[k - s] >> s);
        for j in 1..s {
            if (rec.coefficients >> (s - 1 - j)) & 1 == 1 {
                next ^= v[k - j];
            }
        }
        v[k] = next;
    }
    v
}
