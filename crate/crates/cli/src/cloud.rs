//! Point-cloud generation and serialization.
//!
//! Generation chunks the sampler index range across worker threads;
//! because samplers are index-addressable, the output is byte-identical
//! for any thread count.

use anyhow::{anyhow, bail, Result};
use crossmap_core::cube_gauss::{interior_point, BoundaryPolicy};

use crate::sampler::Sampler;
use crate::target::Target;

use std::io::Write;
use std::str::FromStr;

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Header row plus one comma-separated row per point, 17 significant
    /// digits, LF line endings.
    Csv,
    /// One JSON array per line.
    Jsonl,
    /// Magic `CMAP`, version u32 = 1, ambient-dim u32, count u64, then
    /// little-endian f64 rows.
    Bin,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            "bin" => Ok(Format::Bin),
            other => bail!("unknown format `{other}` (expected csv, jsonl, or bin)"),
        }
    }
}

/// Generated points with their provenance.
#[derive(Debug, Clone)]
pub struct PointCloud {
    /// Target descriptor string.
    pub target: String,
    /// Sampler descriptor string.
    pub sampler: String,
    /// Point count.
    pub count: usize,
    /// Ambient dimension of each row.
    pub dim_out: usize,
    /// Row-major coordinates, `count * dim_out` values.
    pub rows: Vec<f64>,
}

impl PointCloud {
    /// Borrow one row.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.dim_out..(i + 1) * self.dim_out]
    }
}

/// Maps `count` sampler points onto the target using up to `threads`
/// workers. Output order equals sampler index order regardless of the
/// thread count.
pub fn generate(
    target: &Target,
    sampler: &Sampler,
    count: usize,
    policy: BoundaryPolicy,
    threads: usize,
) -> Result<PointCloud> {
    if sampler.dim() != target.cube_dim() {
        bail!(
            "sampler dimension {} does not match target dimension {}",
            sampler.dim(),
            target.cube_dim()
        );
    }
    if count == 0 {
        bail!("nothing to generate (count = 0)");
    }
    let dim_out = target.ambient_dim();
    let mut rows = vec![0.0f64; count * dim_out];
    let threads = threads.clamp(1, count);
    let rows_per_chunk = count.div_ceil(threads);
    let failure = std::sync::Mutex::new(None::<anyhow::Error>);
    std::thread::scope(|scope| {
        for (chunk_index, chunk) in rows.chunks_mut(rows_per_chunk * dim_out).enumerate() {
            let failure = &failure;
            scope.spawn(move || {
                let start = chunk_index * rows_per_chunk;
                for (offset, row) in chunk.chunks_mut(dim_out).enumerate() {
                    let result = interior_point(&sampler.point(start + offset), policy)
                        .map_err(anyhow::Error::from)
                        .and_then(|x| target.map_row(&x));
                    match result {
                        Ok(values) => row.copy_from_slice(&values),
                        Err(e) => {
                            *failure.lock().unwrap() = Some(e);
                            return;
                        }
                    }
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(anyhow!(e));
    }
    Ok(PointCloud {
        target: target.name(),
        sampler: sampler.name(),
        count,
        dim_out,
        rows,
    })
}

/// Serializes a cloud in the requested format.
pub fn write_cloud<W: Write>(out: &mut W, cloud: &PointCloud, format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let header: Vec<String> = (0..cloud.dim_out).map(|i| format!("x{i}")).collect();
            out.write_all(header.join(",").as_bytes())?;
            out.write_all(b"\n")?;
            for i in 0..cloud.count {
                let row: Vec<String> = cloud.row(i).iter().map(|v| format!("{v:.16e}")).collect();
                out.write_all(row.join(",").as_bytes())?;
                out.write_all(b"\n")?;
            }
        }
        Format::Jsonl => {
            for i in 0..cloud.count {
                serde_json::to_writer(&mut *out, &cloud.row(i))?;
                out.write_all(b"\n")?;
            }
        }
        Format::Bin => {
            out.write_all(b"CMAP")?;
            out.write_all(&1u32.to_le_bytes())?;
            out.write_all(&(cloud.dim_out as u32).to_le_bytes())?;
            out.write_all(&(cloud.count as u64).to_le_bytes())?;
            for value in &cloud.rows {
                out.write_all(&value.to_le_bytes())?;
            }
        }
    }
    Ok(())
}

/// Serializes polylines (used by the grid command): CSV gets `line` and
/// `vertex` index columns before the coordinates; JSONL one array of
/// vertices per line.
pub fn write_polylines<W: Write>(
    out: &mut W,
    polylines: &[Vec<Vec<f64>>],
    dim_out: usize,
    format: Format,
) -> Result<()> {
    match format {
        Format::Csv => {
            let mut header = vec!["line".to_string(), "vertex".to_string()];
            header.extend((0..dim_out).map(|i| format!("x{i}")));
            out.write_all(header.join(",").as_bytes())?;
            out.write_all(b"\n")?;
            for (line_index, line) in polylines.iter().enumerate() {
                for (vertex_index, vertex) in line.iter().enumerate() {
                    let mut row = vec![line_index.to_string(), vertex_index.to_string()];
                    row.extend(vertex.iter().map(|v| format!("{v:.16e}")));
                    out.write_all(row.join(",").as_bytes())?;
                    out.write_all(b"\n")?;
                }
            }
        }
        Format::Jsonl => {
            for line in polylines {
                serde_json::to_writer(&mut *out, line)?;
                out.write_all(b"\n")?;
            }
        }
        Format::Bin => bail!("polyline output supports csv and jsonl only"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cloud() -> PointCloud {
        let target = Target::parse("sphere:2").unwrap();
        let sampler = Sampler::parse("random", 2, 7).unwrap();
        generate(&target, &sampler, 16, BoundaryPolicy::Reject, 2).unwrap()
    }

    #[test]
    fn generation_is_thread_count_invariant() {
        let target = Target::parse("ball:3").unwrap();
        let sampler = Sampler::parse("random", 3, 99).unwrap();
        let one = generate(&target, &sampler, 101, BoundaryPolicy::Reject, 1).unwrap();
        let eight = generate(&target, &sampler, 101, BoundaryPolicy::Reject, 8).unwrap();
        assert_eq!(one.rows, eight.rows);
    }

    #[test]
    fn csv_shape_and_precision() {
        let cloud = small_cloud();
        let mut buffer = Vec::new();
        write_cloud(&mut buffer, &cloud, Format::Csv).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[0], "x0,x1,x2");
        // 17 significant digits reproduce the exact double.
        let first: f64 = lines[1].split(',').next().unwrap().parse().unwrap();
        assert_eq!(first, cloud.row(0)[0]);
        assert!(!text.contains('\r'));
    }

    #[test]
    fn jsonl_round_trips() {
        let cloud = small_cloud();
        let mut buffer = Vec::new();
        write_cloud(&mut buffer, &cloud, Format::Jsonl).unwrap();
        for (i, line) in String::from_utf8(buffer).unwrap().lines().enumerate() {
            let row: Vec<f64> = serde_json::from_str(line).unwrap();
            assert_eq!(row, cloud.row(i));
        }
    }

    #[test]
    fn binary_layout() {
        let cloud = small_cloud();
        let mut buffer = Vec::new();
        write_cloud(&mut buffer, &cloud, Format::Bin).unwrap();
        assert_eq!(&buffer[0..4], b"CMAP");
        assert_eq!(u32::from_le_bytes(buffer[4..8].try_into().unwrap()), 1);
        assert_eq!(u32::from_le_bytes(buffer[8..12].try_into().unwrap()), 3);
        assert_eq!(u64::from_le_bytes(buffer[12..20].try_into().unwrap()), 16);
        assert_eq!(buffer.len(), 20 + 16 * 3 * 8);
        let first = f64::from_le_bytes(buffer[20..28].try_into().unwrap());
        assert_eq!(first, cloud.row(0)[0]);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let target = Target::parse("sphere:2").unwrap();
        let sampler = Sampler::parse("random", 3, 0).unwrap();
        assert!(generate(&target, &sampler, 4, BoundaryPolicy::Reject, 1).is_err());
    }
}
