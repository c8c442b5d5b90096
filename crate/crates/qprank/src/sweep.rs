//! Phase-grid sweeps: evolve every `(theta1, theta2)` cell of an
//! endpoint-exclusive grid over `[0, 2pi)^2`, attach the metric bundle, and
//! persist the result as a CSV plus a key/value metadata sidecar.

use std::f64::consts::TAU;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::google::{classical_pagerank, GoogleMatrix, RankVector, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::graph::DirectedGraph;
use crate::metrics;
use crate::walk::{evolve, PhaseSchedule, Scheme};

pub const SCHEMA_VERSION: u32 = 1;

/// `resolution` points per axis at `theta = 2 pi g / resolution`,
/// `g = 0 .. resolution-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    resolution: usize,
}

impl GridSpec {
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Parameter(format!(
                "grid resolution must be at least 2, got {resolution}"
            )));
        }
        Ok(Self { resolution })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn theta(&self, index: usize) -> f64 {
        TAU * index as f64 / self.resolution as f64
    }

    pub fn cell_count(&self) -> usize {
        self.resolution * self.resolution
    }
}

/// Metric bundle for one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRecord {
    pub theta1: f64,
    pub theta2: f64,
    pub rank: RankVector,
    pub fidelity_vs_classical: f64,
    pub variance: f64,
    pub coherence: f64,
    pub entanglement: f64,
    pub beta: f64,
    pub r2: f64,
}

/// A full grid of cell records in row-major (theta1-major) order, together
/// with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub n: usize,
    pub edge_hash: String,
    pub scheme: Scheme,
    pub grid: GridSpec,
    pub steps: usize,
    pub window: usize,
    pub alpha: f64,
    pub cells: Vec<CellRecord>,
}

impl SweepResult {
    /// Row-major cell index for grid coordinates `(g1, g2)`.
    pub fn cell_index(&self, g1: usize, g2: usize) -> usize {
        g1 * self.grid.resolution() + g2
    }
}

/// Evolve every grid cell under `scheme` and collect the metric bundle.
/// Cells run in parallel on the current rayon pool; the output order is
/// row-major regardless of execution order.
pub fn run_sweep(
    graph: &DirectedGraph,
    scheme: Scheme,
    grid: GridSpec,
    steps: usize,
    window: usize,
    alpha: f64,
) -> Result<SweepResult> {
    let matrix = GoogleMatrix::new(graph, alpha)?;
    let classical = classical_pagerank(&matrix, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    let resolution = grid.resolution();

    let cells: Vec<CellRecord> = (0..grid.cell_count())
        .into_par_iter()
        .map(|idx| {
            let theta1 = grid.theta(idx / resolution);
            let theta2 = grid.theta(idx % resolution);
            compute_cell(&matrix, &classical, scheme, theta1, theta2, steps, window).map_err(
                |e| Error::Cell { theta1, theta2, source: Box::new(e) },
            )
        })
        .collect::<Result<_>>()?;

    Ok(SweepResult {
        n: graph.n(),
        edge_hash: graph.edge_hash(),
        scheme,
        grid,
        steps,
        window,
        alpha,
        cells,
    })
}

fn compute_cell(
    matrix: &GoogleMatrix,
    classical: &RankVector,
    scheme: Scheme,
    theta1: f64,
    theta2: f64,
    steps: usize,
    window: usize,
) -> Result<CellRecord> {
    let sched = PhaseSchedule::for_scheme(scheme, theta1, theta2)?;
    let run = evolve(matrix, &sched, steps, window)?;
    let fidelity_vs_classical = metrics::fidelity(&run.rank, classical)?;
    let variance = metrics::variance(&run.rank);
    let fit = metrics::beta_fit(&run.rank)?;
    Ok(CellRecord {
        theta1,
        theta2,
        rank: run.rank,
        fidelity_vs_classical,
        variance,
        coherence: run.coherence,
        entanglement: run.entanglement,
        beta: fit.beta,
        r2: fit.r2,
    })
}

/// Format a float with 17 significant digits, enough to reparse the exact
/// same value.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Path of the metadata sidecar belonging to a sweep CSV.
pub fn metadata_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".meta");
    PathBuf::from(os)
}

/// Header of the sweep CSV (and of the machine-readable `rank` output).
pub fn csv_header(n: usize) -> String {
    let mut header =
        String::from("theta1,theta2,fidelity,variance,coherence,entanglement,beta,r2");
    for i in 0..n {
        header.push_str(&format!(",p{i}"));
    }
    header
}

/// One cell as a CSV row matching [`csv_header`].
pub fn csv_row(cell: &CellRecord) -> String {
    let mut row = vec![
        fmt_float(cell.theta1),
        fmt_float(cell.theta2),
        fmt_float(cell.fidelity_vs_classical),
        fmt_float(cell.variance),
        fmt_float(cell.coherence),
        fmt_float(cell.entanglement),
        fmt_float(cell.beta),
        fmt_float(cell.r2),
    ];
    row.extend(cell.rank.probs().iter().map(|&p| fmt_float(p)));
    row.join(",")
}

/// Write the cell grid as CSV and the run parameters as a `key: value`
/// sidecar next to it.
pub fn write_sweep(result: &SweepResult, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    writeln!(out, "{}", csv_header(result.n))?;
    for cell in &result.cells {
        writeln!(out, "{}", csv_row(cell))?;
    }
    out.flush()?;

    let meta = format!(
        "schema: {}\nn: {}\nedge_hash: {}\nscheme: {}\ngrid: {}\nsteps: {}\nwindow: {}\nalpha: {}\n",
        SCHEMA_VERSION,
        result.n,
        result.edge_hash,
        result.scheme,
        result.grid.resolution(),
        result.steps,
        result.window,
        fmt_float(result.alpha),
    );
    fs::write(metadata_path(path), meta)?;
    Ok(())
}

fn meta_value<'a>(lines: &'a [(String, String)], key: &str) -> Result<&'a str> {
    lines
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| Error::Schema(format!("metadata key `{key}` missing")))
}

/// Load a sweep written by [`write_sweep`], validating the schema version,
/// the header, the cell count and the grid positions.
pub fn read_sweep(path: &Path) -> Result<SweepResult> {
    let meta_path = metadata_path(path);
    let meta_text = fs::read_to_string(&meta_path).map_err(|e| {
        Error::Schema(format!("cannot read metadata {}: {e}", meta_path.display()))
    })?;
    let mut pairs = Vec::new();
    for line in meta_text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| Error::Schema(format!("bad metadata line `{line}`")))?;
        pairs.push((key.trim().to_string(), value.trim().to_string()));
    }
    let parse_usize = |key: &str| -> Result<usize> {
        meta_value(&pairs, key)?
            .parse()
            .map_err(|_| Error::Schema(format!("metadata key `{key}` is not an integer")))
    };
    let schema: u32 = meta_value(&pairs, "schema")?
        .parse()
        .map_err(|_| Error::Schema("metadata key `schema` is not an integer".into()))?;
    if schema != SCHEMA_VERSION {
        return Err(Error::Schema(format!(
            "unsupported schema version {schema} (expected {SCHEMA_VERSION})"
        )));
    }
    let n = parse_usize("n")?;
    let edge_hash = meta_value(&pairs, "edge_hash")?.to_string();
    let scheme: Scheme = meta_value(&pairs, "scheme")?.parse()?;
    let grid = GridSpec::new(parse_usize("grid")?)?;
    let steps = parse_usize("steps")?;
    let window = parse_usize("window")?;
    let alpha: f64 = meta_value(&pairs, "alpha")?
        .parse()
        .map_err(|_| Error::Schema("metadata key `alpha` is not a number".into()))?;

    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Schema("sweep file is empty".into()))?;
    if header != csv_header(n) {
        return Err(Error::Schema(format!("unexpected header `{header}`")));
    }
    let resolution = grid.resolution();
    let mut cells = Vec::with_capacity(grid.cell_count());
    for (row_idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 + n {
            return Err(Error::Schema(format!(
                "row {}: expected {} fields, found {}",
                row_idx + 2,
                8 + n,
                fields.len()
            )));
        }
        let mut values = Vec::with_capacity(fields.len());
        for f in &fields {
            values.push(f.parse::<f64>().map_err(|_| {
                Error::Schema(format!("row {}: bad float `{f}`", row_idx + 2))
            })?);
        }
        if row_idx >= grid.cell_count() {
            return Err(Error::Schema(format!(
                "too many rows (expected {})",
                grid.cell_count()
            )));
        }
        let expect_t1 = grid.theta(row_idx / resolution);
        let expect_t2 = grid.theta(row_idx % resolution);
        if (values[0] - expect_t1).abs() > 1e-12 || (values[1] - expect_t2).abs() > 1e-12 {
            return Err(Error::Schema(format!(
                "row {}: thetas do not match the row-major grid",
                row_idx + 2
            )));
        }
        cells.push(CellRecord {
            theta1: values[0],
            theta2: values[1],
            fidelity_vs_classical: values[2],
            variance: values[3],
            coherence: values[4],
            entanglement: values[5],
            beta: values[6],
            r2: values[7],
            rank: RankVector::new(values[8..].to_vec())?,
        });
    }
    if cells.len() != grid.cell_count() {
        return Err(Error::Schema(format!(
            "expected {} rows, found {} (truncated file?)",
            grid.cell_count(),
            cells.len()
        )));
    }
    Ok(SweepResult { n, edge_hash, scheme, grid, steps, window, alpha, cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn small_sweep() -> SweepResult {
        let g = DirectedGraph::generate_scale_free(8, 2, 3).unwrap();
        run_sweep(&g, Scheme::Standard, GridSpec::new(2).unwrap(), 30, 10, 0.85).unwrap()
    }

    #[test]
    fn grid_spec_enumerates_cells() {
        let grid = GridSpec::new(2).unwrap();
        assert_eq!(grid.cell_count(), 4);
        assert_eq!(grid.theta(0), 0.0);
        assert!((grid.theta(1) - PI).abs() < 1e-15);
        assert!(GridSpec::new(1).is_err());
    }

    #[test]
    fn sweep_cells_are_row_major() {
        let result = small_sweep();
        assert_eq!(result.cells.len(), 4);
        let grid = result.grid;
        for g1 in 0..2 {
            for g2 in 0..2 {
                let cell = &result.cells[result.cell_index(g1, g2)];
                assert_eq!(cell.theta1, grid.theta(g1));
                assert_eq!(cell.theta2, grid.theta(g2));
            }
        }
    }

    #[test]
    fn sweep_zero_cell_matches_row_sum_rank() {
        let g = DirectedGraph::generate_scale_free(8, 2, 3).unwrap();
        let result =
            run_sweep(&g, Scheme::Standard, GridSpec::new(2).unwrap(), 30, 10, 0.85).unwrap();
        let gm = GoogleMatrix::new(&g, 0.85).unwrap();
        let zero = &result.cells[0];
        for i in 0..g.n() {
            let row_sum: f64 = (0..g.n()).map(|j| gm.get(i, j)).sum();
            assert!((zero.rank.probs()[i] - row_sum / g.n() as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_fidelity_is_bounded() {
        for cell in &small_sweep().cells {
            assert!((0.0..=1.0).contains(&cell.fidelity_vs_classical));
        }
    }

    #[test]
    fn conjugate_cells_match_on_even_grid() {
        let g = DirectedGraph::generate_scale_free(8, 2, 5).unwrap();
        let result =
            run_sweep(&g, Scheme::Standard, GridSpec::new(4).unwrap(), 40, 10, 0.85).unwrap();
        let res = result.grid.resolution();
        for g1 in 0..res {
            for g2 in 0..res {
                let a = &result.cells[result.cell_index(g1, g2)];
                let b = &result.cells[result.cell_index((res - g1) % res, (res - g2) % res)];
                assert!((a.fidelity_vs_classical - b.fidelity_vs_classical).abs() < 1e-9);
                assert!((a.coherence - b.coherence).abs() < 1e-9);
                for (x, y) in a.rank.probs().iter().zip(b.rank.probs()) {
                    assert!((x - y).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn sweep_rejects_general_four() {
        let g = DirectedGraph::generate_scale_free(6, 2, 1).unwrap();
        let err = run_sweep(&g, Scheme::GeneralFour, GridSpec::new(2).unwrap(), 10, 5, 0.85)
            .unwrap_err();
        assert!(matches!(err, Error::Cell { .. }), "{err:?}");
    }

    #[test]
    fn round_trip_preserves_everything() {
        let result = small_sweep();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        write_sweep(&result, &path).unwrap();
        let loaded = read_sweep(&path).unwrap();
        assert_eq!(loaded, result);
    }

    #[test]
    fn truncated_file_is_a_schema_error() {
        let result = small_sweep();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        write_sweep(&result, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let truncated: Vec<&str> = text.lines().take(3).collect();
        fs::write(&path, truncated.join("\n")).unwrap();
        assert!(matches!(read_sweep(&path), Err(Error::Schema(_))));
    }

    #[test]
    fn missing_sidecar_is_a_schema_error() {
        let result = small_sweep();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        write_sweep(&result, &path).unwrap();
        fs::remove_file(metadata_path(&path)).unwrap();
        assert!(matches!(read_sweep(&path), Err(Error::Schema(_))));
    }

    #[test]
    fn schema_version_mismatch_is_rejected() {
        let result = small_sweep();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sweep.csv");
        write_sweep(&result, &path).unwrap();
        let meta = fs::read_to_string(metadata_path(&path)).unwrap();
        fs::write(metadata_path(&path), meta.replace("schema: 1", "schema: 99")).unwrap();
        assert!(matches!(read_sweep(&path), Err(Error::Schema(_))));
    }

    #[test]
    fn rewriting_is_byte_identical() {
        let result = small_sweep();
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        write_sweep(&result, &a).unwrap();
        write_sweep(&small_sweep(), &b).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.0, 1.0 / 3.0, PI, 1e-17, 123456.789, 5.0e-324] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x, "{x}");
        }
    }
}
