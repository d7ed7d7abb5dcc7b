//! Plain (P2) grayscale heatmaps: dark means high probability.

use std::fmt::Write as _;

const MAX_GRAY: u32 = 255;
// Keeps lines under the 70 characters the format recommends.
const VALUES_PER_LINE: usize = 17;

/// `255 − round(255·v/max)` per cell; absent cells and an all-zero field are white.
pub fn write_pgm<'a, I>(width: usize, rows: I) -> String
where
    I: IntoIterator<Item = &'a [Option<f64>]>,
    I::IntoIter: Clone,
{
    let rows = rows.into_iter();
    let max = rows.clone().flatten().flatten().copied().fold(0.0, f64::max);
    let height = rows.clone().count();
    let mut out = format!("P2\n{width} {height}\n{MAX_GRAY}\n");
    for row in rows {
        assert_eq!(row.len(), width, "ragged heatmap row");
        for chunk in row.chunks(VALUES_PER_LINE) {
            let line: Vec<String> = chunk.iter().map(|v| gray(*v, max).to_string()).collect();
            writeln!(out, "{}", line.join(" ")).expect("writing to a String cannot fail");
        }
    }
    out
}

fn gray(value: Option<f64>, max: f64) -> u32 {
    match value {
        Some(v) if max > 0.0 => {
            let level = (MAX_GRAY as f64 * (v / max).clamp(0.0, 1.0)).round() as u32;
            MAX_GRAY - level
        }
        _ => MAX_GRAY,
    }
}
