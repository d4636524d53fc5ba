//! File formats: FJLM point-set containers, FJL1 transform containers,
//! CSV interop, and the JSON plan sidecar.
//!
//! FJLM (point sets / dense matrices), little-endian throughout:
//!
//! ```text
//! offset  size  field
//! 0       4     magic "FJLM"
//! 4       4     u32 rows
//! 8       4     u32 cols
//! 12      4     u32 flags (reserved, write 0)
//! 16      8*r*c f64 entries, column-major
//! ```
//!
//! FJL1 (transforms): transforms are pure functions of their sampling seed
//! and dimensions, so the container stores exactly those plus the RNG scheme
//! version, and loading re-samples bit-identically:
//!
//! ```text
//! offset  size  field
//! 0       4     magic "FJL1"
//! 4       4     u32 container version (1)
//! 8       4     u32 rng scheme version
//! 12      4     u32 kind (0 composed, 1 dense, 2 fjlt)
//! 16      8     u64 seed
//! 24      8     u64 input dimension N
//! 32      8     u64 output dimension m
//! 40      8     u64 intermediate dimension n (composed; else = N)
//! 48      16    fjlt only: u64 planned p, f64 bits c_q
//! ```
//!
//! A JSON sidecar of the [`DimensionPlan`] travels next to FJL1 files for
//! human-readable reproduction.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::mat::DenseMatrix;
use crate::rng::RNG_SCHEME_VERSION;
use crate::transform::{
    sample_dense_baseline, ComposedTransform, DimensionPlan, Embedding, FjltTransform,
};

const MATRIX_MAGIC: &[u8; 4] = b"FJLM";
const TRANSFORM_MAGIC: &[u8; 4] = b"FJL1";
const CONTAINER_VERSION: u32 = 1;

/// Writes a matrix as an FJLM file.
pub fn write_matrix(path: &Path, m: &DenseMatrix, flags: u32) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MATRIX_MAGIC)?;
    let rows = u32::try_from(m.rows())
        .map_err(|_| Error::Format("row count exceeds u32".into()))?;
    let cols = u32::try_from(m.cols())
        .map_err(|_| Error::Format("column count exceeds u32".into()))?;
    w.write_all(&rows.to_le_bytes())?;
    w.write_all(&cols.to_le_bytes())?;
    w.write_all(&flags.to_le_bytes())?;
    for v in m.data() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an FJLM file.
pub fn read_matrix(path: &Path) -> Result<(DenseMatrix, u32)> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MATRIX_MAGIC {
        return Err(Error::Format(format!(
            "{} is not an FJLM file (bad magic)",
            path.display()
        )));
    }
    let rows = read_u32(&mut r)? as usize;
    let cols = read_u32(&mut r)? as usize;
    let flags = read_u32(&mut r)?;
    if rows == 0 || cols == 0 {
        return Err(Error::Format("FJLM dimensions must be nonzero".into()));
    }
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::Format("FJLM dimensions overflow".into()))?;
    let mut data = vec![0.0f64; count];
    let mut buf = [0u8; 8];
    for v in &mut data {
        r.read_exact(&mut buf)?;
        *v = f64::from_le_bytes(buf);
    }
    Ok((DenseMatrix::from_vec(rows, cols, data)?, flags))
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

/// What an FJL1 container holds: enough to re-sample the transform exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum TransformRecord {
    Composed {
        n_input: usize,
        m: usize,
        n: usize,
        seed: u64,
    },
    Dense {
        n_input: usize,
        m: usize,
        seed: u64,
    },
    Fjlt {
        n_input: usize,
        m: usize,
        p_points: u64,
        c_q: f64,
        seed: u64,
    },
}

impl TransformRecord {
    fn kind_tag(&self) -> u32 {
        match self {
            TransformRecord::Composed { .. } => 0,
            TransformRecord::Dense { .. } => 1,
            TransformRecord::Fjlt { .. } => 2,
        }
    }

    /// Re-samples the recorded transform; identical record, identical
    /// transform.
    pub fn instantiate(&self) -> Result<Box<dyn Embedding>> {
        match *self {
            TransformRecord::Composed { n_input, m, n, seed } => Ok(Box::new(
                ComposedTransform::from_dims(n_input, m, n, seed)?,
            )),
            TransformRecord::Dense { n_input, m, seed } => {
                Ok(Box::new(sample_dense_baseline(m, n_input, seed)))
            }
            TransformRecord::Fjlt {
                n_input,
                m,
                p_points,
                c_q,
                seed,
            } => Ok(Box::new(FjltTransform::from_dims(
                p_points, n_input, m, c_q, seed,
            )?)),
        }
    }
}

/// Writes an FJL1 transform container.
pub fn write_transform(path: &Path, record: &TransformRecord) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(TRANSFORM_MAGIC)?;
    w.write_all(&CONTAINER_VERSION.to_le_bytes())?;
    w.write_all(&RNG_SCHEME_VERSION.to_le_bytes())?;
    w.write_all(&record.kind_tag().to_le_bytes())?;
    match *record {
        TransformRecord::Composed { n_input, m, n, seed } => {
            w.write_all(&seed.to_le_bytes())?;
            w.write_all(&(n_input as u64).to_le_bytes())?;
            w.write_all(&(m as u64).to_le_bytes())?;
            w.write_all(&(n as u64).to_le_bytes())?;
        }
        TransformRecord::Dense { n_input, m, seed } => {
            w.write_all(&seed.to_le_bytes())?;
            w.write_all(&(n_input as u64).to_le_bytes())?;
            w.write_all(&(m as u64).to_le_bytes())?;
            w.write_all(&(n_input as u64).to_le_bytes())?;
        }
        TransformRecord::Fjlt {
            n_input,
            m,
            p_points,
            c_q,
            seed,
        } => {
            w.write_all(&seed.to_le_bytes())?;
            w.write_all(&(n_input as u64).to_le_bytes())?;
            w.write_all(&(m as u64).to_le_bytes())?;
            w.write_all(&(n_input as u64).to_le_bytes())?;
            w.write_all(&p_points.to_le_bytes())?;
            w.write_all(&c_q.to_bits().to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads an FJL1 transform container.
pub fn read_transform(path: &Path) -> Result<TransformRecord> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != TRANSFORM_MAGIC {
        return Err(Error::Format(format!(
            "{} is not an FJL1 file (bad magic)",
            path.display()
        )));
    }
    let version = read_u32(&mut r)?;
    if version != CONTAINER_VERSION {
        return Err(Error::Format(format!(
            "unsupported FJL1 container version {version}"
        )));
    }
    let scheme = read_u32(&mut r)?;
    if scheme != RNG_SCHEME_VERSION {
        return Err(Error::Format(format!(
            "transform was sampled under RNG scheme {scheme}, this build implements {RNG_SCHEME_VERSION}"
        )));
    }
    let kind = read_u32(&mut r)?;
    let seed = read_u64(&mut r)?;
    let n_input = read_u64(&mut r)? as usize;
    let m = read_u64(&mut r)? as usize;
    let n = read_u64(&mut r)? as usize;
    match kind {
        0 => Ok(TransformRecord::Composed { n_input, m, n, seed }),
        1 => Ok(TransformRecord::Dense { n_input, m, seed }),
        2 => {
            let p_points = read_u64(&mut r)?;
            let c_q = f64::from_bits(read_u64(&mut r)?);
            Ok(TransformRecord::Fjlt {
                n_input,
                m,
                p_points,
                c_q,
                seed,
            })
        }
        other => Err(Error::Format(format!("unknown transform kind tag {other}"))),
    }
}

/// Writes the plan sidecar as pretty JSON.
pub fn write_plan_json(path: &Path, plan: &DimensionPlan) -> Result<()> {
    let json = serde_json::to_string_pretty(plan)
        .map_err(|e| Error::Format(format!("plan serialization failed: {e}")))?;
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(json.as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_plan_json(path: &Path) -> Result<DimensionPlan> {
    let mut buf = String::new();
    BufReader::new(File::open(path)?).read_to_string(&mut buf)?;
    serde_json::from_str(&buf).map_err(|e| Error::Format(format!("bad plan sidecar: {e}")))
}

/// CSV export: one line per matrix row, comma-separated, full f64 precision.
pub fn write_matrix_csv(path: &Path, m: &DenseMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for i in 0..m.rows() {
        let mut line = String::new();
        for j in 0..m.cols() {
            if j > 0 {
                line.push(',');
            }
            // {:?} prints the shortest representation that round-trips
            line.push_str(&format!("{:?}", m.get(i, j)));
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// CSV import; every line must carry the same number of comma-separated
/// numeric fields.
pub fn read_matrix_csv(path: &Path) -> Result<DenseMatrix> {
    let mut buf = String::new();
    BufReader::new(File::open(path)?).read_to_string(&mut buf)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in buf.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        let fields = parsed.map_err(|e| {
            Error::Format(format!("line {}: unparsable field ({e})", lineno + 1))
        })?;
        if let Some(first) = rows.first() {
            if fields.len() != first.len() {
                return Err(Error::Format(format!(
                    "line {}: expected {} fields, got {}",
                    lineno + 1,
                    first.len(),
                    fields.len()
                )));
            }
        }
        rows.push(fields);
    }
    if rows.is_empty() {
        return Err(Error::Format("CSV contains no data rows".into()));
    }
    let (r, c) = (rows.len(), rows[0].len());
    Ok(DenseMatrix::from_fn(r, c, |i, j| rows[i][j]))
}
