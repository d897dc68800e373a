//! CSV output for threshold sweeps.

use std::io::Write;

use crate::io::IoError;

/// One sweep measurement, aggregated over all features of the run.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub tau: f64,
    pub segments: usize,
    pub vertices: usize,
    pub area: f64,
    pub hausdorff: f64,
}

/// Writes `tau,segments,vertices,area,hausdorff` rows. Numbers use their
/// shortest round-trip decimal form with a `.` decimal point.
pub fn write_sweep_csv(rows: &[SweepRow], sink: &mut dyn Write) -> Result<(), IoError> {
    writeln!(sink, "tau,segments,vertices,area,hausdorff")?;
    for row in rows {
        writeln!(
            sink,
            "{},{},{},{},{}",
            row.tau, row.segments, row.vertices, row.area, row.hausdorff
        )?;
    }
    Ok(())
}
