//! Matrix CSV: a header row of column coordinates, then one row per step.
//!
//! Numbers use shortest round-trip formatting (plain notation for moderate
//! magnitudes, exponent notation otherwise) so files are byte-stable and
//! parse back to the same `f64`. Absent values are empty cells.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::trajectory::{Trajectory, TrajectorySample};
use crate::walk::{ProbabilityGrid, SpacetimeRecord};

/// Renders rows of optional values under a header of coordinates.
pub fn write_matrix<'a, I>(columns: &[f64], rows: I) -> String
where
    I: IntoIterator<Item = &'a [Option<f64>]>,
{
    let mut out = String::new();
    push_row(&mut out, columns.iter().map(|c| Some(*c)));
    for row in rows {
        push_row(&mut out, row.iter().copied());
    }
    out
}

/// Renders a probability grid with integer site labels `−h..=h`.
pub fn write_grid(grid: &ProbabilityGrid) -> String {
    let columns: Vec<f64> = (0..grid.width()).map(|c| grid.site(c) as f64).collect();
    let mut out = String::new();
    push_row(&mut out, columns.iter().map(|c| Some(*c)));
    for row in grid.iter_rows() {
        push_row(&mut out, row.iter().map(|v| Some(*v)));
    }
    out
}

fn push_row(out: &mut String, values: impl Iterator<Item = Option<f64>>) {
    for (i, v) in values.enumerate() {
        if i > 0 {
            out.push(',');
        }
        if let Some(v) = v {
            push_number(out, v);
        }
    }
    out.push('\n');
}

/// Appends the shortest decimal that parses back to `v`.
pub fn push_number(out: &mut String, v: f64) {
    let magnitude = v.abs();
    let result = if magnitude == 0.0 || (1e-5..1e16).contains(&magnitude) {
        write!(out, "{v}")
    } else {
        write!(out, "{v:e}")
    };
    result.expect("writing to a String cannot fail");
}

/// Parsed matrix CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub columns: Vec<f64>,
    pub rows: Vec<Vec<Option<f64>>>,
}

fn parse_cell(cell: &str, line: usize) -> Result<Option<f64>> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<f64>()
        .map(Some)
        .map_err(|_| Error::Parse { line, message: format!("not a number: {cell:?}") })
}

pub fn read_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, message: "empty file".into() })?;
    let columns = header
        .split(',')
        .map(|c| parse_cell(c, 1)?.ok_or(Error::Parse { line: 1, message: "empty header cell".into() }))
        .collect::<Result<Vec<f64>>>()?;
    let mut rows = Vec::new();
    for (line, content) in lines {
        if content.is_empty() {
            continue;
        }
        let row = content
            .split(',')
            .map(|c| parse_cell(c, line))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != columns.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} cells, found {}", columns.len(), row.len()),
            });
        }
        rows.push(row);
    }
    Ok(Matrix { columns, rows })
}

/// Reads a grid written by [`write_grid`]; the header must be `−h, …, h`.
pub fn read_grid(text: &str) -> Result<ProbabilityGrid> {
    let matrix = read_matrix(text)?;
    let half_width = matrix.columns.len() / 2;
    let expected = (0..matrix.columns.len()).map(|c| c as f64 - half_width as f64);
    if matrix.columns.len() % 2 == 0 || !matrix.columns.iter().copied().eq(expected) {
        return Err(Error::Parse {
            line: 1,
            message: "header must list consecutive sites from -h to h".into(),
        });
    }
    let mut rows = Vec::with_capacity(matrix.rows.len());
    for (i, row) in matrix.rows.into_iter().enumerate() {
        let row: Option<Vec<f64>> = row.into_iter().collect();
        rows.push(row.ok_or(Error::Parse { line: i + 2, message: "empty cell in probability row".into() })?);
    }
    ProbabilityGrid::from_rows(half_width, rows)
}

/// Rebuilds a record from the P, P^R and P^L files of one run.
pub fn read_record(total: &str, right: &str, left: &str) -> Result<SpacetimeRecord> {
    let record = SpacetimeRecord {
        total: read_grid(total)?,
        right: read_grid(right)?,
        left: read_grid(left)?,
    };
    let shape = |g: &ProbabilityGrid| (g.half_width(), g.rows());
    if shape(&record.right) != shape(&record.total) || shape(&record.left) != shape(&record.total) {
        return Err(Error::InvalidConfig("P, P^R and P^L files differ in shape".into()));
    }
    Ok(record)
}

pub fn write_trajectory(trajectory: &Trajectory) -> String {
    let mut out = String::from("tau,x_plus,x_minus\n");
    for s in &trajectory.samples {
        push_number(&mut out, s.tau);
        out.push(',');
        push_number(&mut out, s.x_plus);
        out.push(',');
        push_number(&mut out, s.x_minus);
        out.push('\n');
    }
    out
}

pub fn read_trajectory(text: &str) -> Result<Trajectory> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, header)) if header.trim() == "tau,x_plus,x_minus" => {}
        _ => {
            return Err(Error::Parse { line: 1, message: "expected header tau,x_plus,x_minus".into() });
        }
    }
    let mut samples = Vec::new();
    for (line, content) in lines {
        if content.is_empty() {
            continue;
        }
        let cells = content
            .split(',')
            .map(|c| parse_cell(c, line)?.ok_or(Error::Parse { line, message: "empty cell".into() }))
            .collect::<Result<Vec<f64>>>()?;
        let [tau, x_plus, x_minus] = cells[..] else {
            return Err(Error::Parse { line, message: format!("expected 3 cells, found {}", cells.len()) });
        };
        samples.push(TrajectorySample { tau, x_plus, x_minus });
    }
    Ok(Trajectory { samples })
}
