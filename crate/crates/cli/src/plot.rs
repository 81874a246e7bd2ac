//! Gnuplot script generation for CSV outputs.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// `s*` against `λ` on log-log axes with a `λ^{-1/2}` guide.
    AlphaScan,
    /// Step plot of a density profile.
    Density,
    /// `C` against the scan parameter.
    ObsScan,
}

impl PlotKind {
    fn expected_header(self) -> &'static [&'static str] {
        match self {
            PlotKind::AlphaScan => &["lambda", "s_star", "status", "bound_at_s_star", "truncation_margin"],
            PlotKind::Density => &["s", "f_n"],
            PlotKind::ObsScan => &["param", "lambda_min", "C"],
        }
    }
}

fn read_header(csv: &Path) -> Result<Vec<String>, CliError> {
    let text = fs::read_to_string(csv).map_err(|e| CliError::Io(format!("{}: {e}", csv.display())))?;
    let first = text.lines().next().unwrap_or("").trim();
    if first.is_empty() {
        return Err(CliError::Format(format!("{}: empty CSV", csv.display())));
    }
    Ok(first.split(',').map(|c| c.trim().to_string()).collect())
}

/// Writes `<csv stem>.gp` next to the CSV. The script names the CSV by
/// file name only, so the bundle can be moved as a whole.
pub fn emit_plot_script(csv: &Path, kind: PlotKind) -> Result<PathBuf, CliError> {
    let header = read_header(csv)?;
    let expected = kind.expected_header();
    if header.len() < expected.len() || header[0] != expected[0] || header[1] != expected[1] {
        return Err(CliError::Format(format!(
            "{}: header {:?} does not start with {:?}",
            csv.display(),
            header,
            expected
        )));
    }
    let name = csv
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| CliError::Format(format!("{}: not a file path", csv.display())))?;
    let stem = name.strip_suffix(".csv").unwrap_or(name);
    let mut s = String::new();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set key top right").unwrap();
    writeln!(s, "set terminal pngcairo size 900,600").unwrap();
    writeln!(s, "set output '{stem}.png'").unwrap();
    match kind {
        PlotKind::AlphaScan => {
            writeln!(s, "set logscale xy").unwrap();
            writeln!(s, "set xlabel 'lambda'").unwrap();
            writeln!(s, "set ylabel 's*'").unwrap();
            writeln!(s, "stats '{name}' using 1:2 nooutput").unwrap();
            writeln!(s, "c = STATS_max_y * sqrt(STATS_min_x)").unwrap();
            writeln!(
                s,
                "plot '{name}' using 1:2 skip 1 with linespoints title 's*(lambda)', \\\n     c / sqrt(x) with lines dashtype 2 title 'lambda^(-1/2)'"
            )
            .unwrap();
        }
        PlotKind::Density => {
            writeln!(s, "set xlabel 's'").unwrap();
            writeln!(s, "set ylabel 'f_n(s)'").unwrap();
            writeln!(s, "set yrange [-0.05:1.05]").unwrap();
            writeln!(s, "plot '{name}' using 1:2 skip 1 with steps title 'f_n'").unwrap();
        }
        PlotKind::ObsScan => {
            writeln!(s, "set logscale y").unwrap();
            writeln!(s, "set xlabel '{}'", header[0]).unwrap();
            writeln!(s, "set ylabel 'C'").unwrap();
            writeln!(s, "plot '{name}' using 1:3 skip 1 with linespoints title 'C = 1/lambda_min'").unwrap();
        }
    }
    let out = csv.with_file_name(format!("{stem}.gp"));
    fs::write(&out, s).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    Ok(out)
}
