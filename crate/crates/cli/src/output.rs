//! CSV, JSON, and gnuplot-script emission.
//!
//! CSV files are byte-stable for a fixed configuration: floats are printed
//! with 17 significant digits in scientific notation, rows end in a single
//! LF, and row order is fixed by the sweep itself.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use dephase_core::{CurvePoint, GridRow, ReducedTrajectoryPoint};

/// 17 significant digits, scientific notation.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct OutputPaths {
    pub grid_csv: PathBuf,
    pub curves_csv: PathBuf,
    pub meta_json: PathBuf,
    pub plot_script: PathBuf,
    pub png: PathBuf,
}

impl OutputPaths {
    pub fn new(prefix: &Path) -> Self {
        let p = prefix.to_string_lossy();
        OutputPaths {
            grid_csv: PathBuf::from(format!("{p}.csv")),
            curves_csv: PathBuf::from(format!("{p}_curves.csv")),
            meta_json: PathBuf::from(format!("{p}_meta.json")),
            plot_script: PathBuf::from(format!("{p}.gp")),
            png: PathBuf::from(format!("{p}.png")),
        }
    }
}

pub fn write_grid_csv(path: &Path, rows: &[GridRow]) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(b"theta,tau,s_value,e_value,s_threshold,e_threshold,verdict,label\n")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            fmt_float(r.theta),
            fmt_float(r.tau),
            fmt_float(r.s_value),
            fmt_float(r.e_value),
            fmt_float(r.s_threshold),
            fmt_float(r.e_threshold),
            r.verdict.code(),
            r.verdict.label()
        )?;
    }
    w.flush()
}

pub fn write_curves_csv(
    path: &Path,
    points: &[CurvePoint],
    with_dec: bool,
    with_sd: bool,
) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let mut header = vec!["theta"];
    if with_dec {
        header.push("tau_dec");
    }
    if with_sd {
        header.push("tau_sd");
    }
    writeln!(w, "{}", header.join(","))?;
    for p in points {
        let mut fields = vec![fmt_float(p.theta)];
        if with_dec {
            fields.push(fmt_float(p.tau_dec));
        }
        if with_sd {
            fields.push(p.tau_sd.map(fmt_float).unwrap_or_default());
        }
        writeln!(w, "{}", fields.join(","))?;
    }
    w.flush()
}

pub fn write_trajectory_csv(
    path: &Path,
    rows: &[(f64, ReducedTrajectoryPoint)],
) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(b"theta,tau,concurrence,decoherence_mag\n")?;
    for (theta, p) in rows {
        writeln!(
            w,
            "{},{},{},{}",
            fmt_float(*theta),
            fmt_float(p.tau),
            fmt_float(p.concurrence),
            fmt_float(p.decoherence_mag)
        )?;
    }
    w.flush()
}

pub fn write_meta_json(path: &Path, meta: &serde_json::Value) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{}", serde_json::to_string_pretty(meta)?)?;
    w.flush()
}

/// Gnuplot script rendering the red/blue/white diagram with optional
/// overlay curves. Points are drawn with a palette rather than an image map
/// so the script works for any grid shape.
pub fn write_phase_plot_script(
    paths: &OutputPaths,
    title: &str,
    with_dec: bool,
    with_sd: bool,
) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(&paths.plot_script)?);
    let csv = paths.grid_csv.file_name().unwrap().to_string_lossy();
    let curves = paths.curves_csv.file_name().unwrap().to_string_lossy();
    let png = paths.png.file_name().unwrap().to_string_lossy();
    writeln!(w, "# Temperature-time diagram: run with `gnuplot {}`", paths.plot_script.file_name().unwrap().to_string_lossy())?;
    writeln!(w, "set datafile separator ','")?;
    writeln!(w, "set term pngcairo size 960,720")?;
    writeln!(w, "set output '{png}'")?;
    writeln!(w, "set title '{title}'")?;
    writeln!(w, "set xlabel 'theta = k_B T / (hbar omega_c)'")?;
    writeln!(w, "set ylabel 'tau = omega_c t'")?;
    writeln!(
        w,
        "# verdict palette: separable 0 blue, entangled 1 red, undetermined 2 white"
    )?;
    writeln!(
        w,
        "set palette defined (0 'blue', 1 'red', 2 'white')"
    )?;
    writeln!(w, "set cbrange [0:2]")?;
    writeln!(w, "unset colorbox")?;
    let mut plots = vec![format!(
        "'{csv}' every ::1 using 1:2:7 with points pt 5 ps 0.7 palette notitle"
    )];
    if with_dec {
        plots.push(format!(
            "'{curves}' every ::1 using 1:2 with lines lc 'black' dt 2 lw 2 title 'decoherence time'"
        ));
    }
    if with_sd {
        let col = if with_dec { 3 } else { 2 };
        plots.push(format!(
            "'{curves}' every ::1 using 1:{col} with lines lc 'black' lw 2 title 'sudden death'"
        ));
    }
    writeln!(w, "plot {}", plots.join(", \\\n     "))?;
    w.flush()
}

pub fn write_curves_plot_script(paths: &OutputPaths, title: &str) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(&paths.plot_script)?);
    let curves = paths.curves_csv.file_name().unwrap().to_string_lossy();
    let png = paths.png.file_name().unwrap().to_string_lossy();
    writeln!(w, "set datafile separator ','")?;
    writeln!(w, "set term pngcairo size 960,720")?;
    writeln!(w, "set output '{png}'")?;
    writeln!(w, "set title '{title}'")?;
    writeln!(w, "set xlabel 'theta'")?;
    writeln!(w, "set ylabel 'tau'")?;
    writeln!(
        w,
        "plot '{curves}' every ::1 using 1:2 with lines dt 2 lw 2 title 'decoherence time', \\"
    )?;
    writeln!(
        w,
        "     '{curves}' every ::1 using 1:3 with lines lw 2 title 'sudden death'"
    )?;
    w.flush()
}

pub fn write_concurrence_plot_script(paths: &OutputPaths, title: &str) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(&paths.plot_script)?);
    let csv = paths.grid_csv.file_name().unwrap().to_string_lossy();
    let png = paths.png.file_name().unwrap().to_string_lossy();
    writeln!(w, "set datafile separator ','")?;
    writeln!(w, "set term pngcairo size 960,720")?;
    writeln!(w, "set output '{png}'")?;
    writeln!(w, "set title '{title}'")?;
    writeln!(w, "set xlabel 'tau = omega_c t'")?;
    writeln!(w, "set ylabel 'concurrence'")?;
    writeln!(w, "# one line per temperature in the file")?;
    writeln!(
        w,
        "plot for [th in system(\"awk -F, 'NR>1 {{print $1}}' {csv} | sort -u\")] \\"
    )?;
    writeln!(
        w,
        "     '{csv}' every ::1 using (strcol(1) eq th ? $2 : NaN):3 with lines title 'theta='.th"
    )?;
    w.flush()
}
