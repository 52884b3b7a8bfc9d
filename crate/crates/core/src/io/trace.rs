//! Path traces as CSV for plotting iterates in the `(ξ, η)` plane.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;
use crate::linalg::SymMatrix;
use crate::sdp::{path_projection, Phase, SdpResult, SdpTraceRow};

pub const TRACE_HEADER: &str = "phase,iter,xi,eta,alpha,trCdX,trCX,residual,invnorm";

/// Reference point and freedom direction used to compute `ξ`.
#[derive(Debug, Clone)]
pub struct Projection {
    pub x_ref: SymMatrix,
    /// `None` when there is no freedom direction; `ξ` is then written as 0.
    pub u_xi: Option<SymMatrix>,
    pub objective: SymMatrix,
}

impl Projection {
    fn coords(&self, x: &SymMatrix) -> (f64, f64) {
        match &self.u_xi {
            Some(u) => path_projection(x, &self.x_ref, u, &self.objective),
            None => (0.0, self.objective.dot(x)),
        }
    }
}

/// Writes one row per trace entry. Minimization steps followed by centering
/// produce a `step` row (the point reached by the step) before the `cnt` row.
pub fn write_trace_csv<W: Write>(
    result: &SdpResult,
    projection: &Projection,
    out: &mut W,
) -> Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for row in &result.trace {
        if let Some(s) = &row.stepped {
            write_row(out, "step", row, &s.x, s.residual, s.inv_norm, projection)?;
        }
        write_row(
            out,
            row.phase.label(),
            row,
            &row.x,
            row.residual,
            row.inv_norm,
            projection,
        )?;
    }
    Ok(())
}

fn write_row<W: Write>(
    out: &mut W,
    phase: &str,
    row: &SdpTraceRow,
    x: &SymMatrix,
    residual: f64,
    invnorm: f64,
    projection: &Projection,
) -> Result<()> {
    let (xi, eta) = projection.coords(x);
    let trcdx = if row.phase == Phase::Ini {
        0.0
    } else {
        row.trcdx
    };
    writeln!(
        out,
        "{phase},{},{xi:e},{eta:e},{:e},{trcdx:e},{eta:e},{residual:e},{invnorm:e}",
        row.iter, row.alpha,
    )?;
    Ok(())
}

pub fn emit_trace_csv(result: &SdpResult, projection: &Projection, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_trace_csv(result, projection, &mut out)?;
    out.flush()?;
    Ok(())
}
