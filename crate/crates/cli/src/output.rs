//! CSV, summary and plot-script emission.
//!
//! Numbers are written as `{:.16e}` (17 significant digits), which
//! round-trips every `f64` exactly; lines end in `\n`.

use std::fmt::Write as _;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use fibrefilm_core::pde::{DiagnosticSample, SimObserver};
use fibrefilm_core::{FilmProfile, PeriodicGrid};

use crate::error::{io_at, CliError, Result};

pub const SNAPSHOT_HEADER: &str = "xi,v";
pub const DIAGNOSTICS_HEADER: &str = "t,mass,energy,modified_energy,dissipation,min_v,max_v,newton_iters,v2_ft,F_end";
pub const BRANCH_HEADER: &str = "param_name,param_value,V,K,M,min_v,max_v,residual_norm";

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `snap_t<time>.csv`, with the time to 6 decimals.
pub fn snapshot_name(t: f64) -> String {
    format!("snap_t{t:.6}.csv")
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(io_at(path))
}

/// Two-column CSV of a nodal field.
pub fn field_csv(header: &str, grid: &PeriodicGrid, values: &[f64]) -> String {
    let mut s = String::with_capacity(48 * values.len());
    s.push_str(header);
    s.push('\n');
    for (x, v) in grid.nodes().zip(values) {
        let _ = writeln!(s, "{},{}", num(x), num(*v));
    }
    s
}

/// `xi,v` CSV preceded by a `# length = L` comment, since the abscissae alone
/// fix `L/N` but not always `L` itself.
pub fn profile_csv(profile: &FilmProfile) -> String {
    let g = profile.grid();
    format!("# length = {}\n{}", num(g.length()), field_csv(SNAPSHOT_HEADER, g, profile.values()))
}

pub fn write_profile(path: &Path, profile: &FilmProfile) -> Result<()> {
    write_file(path, &profile_csv(profile))
}

/// Reads an `xi,v` CSV back into a profile. Without a `# length` comment the
/// period is recovered as a length whose nodes reproduce the stored abscissae.
pub fn read_profile(path: &Path) -> Result<FilmProfile> {
    let text = fs::read_to_string(path).map_err(io_at(path))?;
    parse_profile(&text).map_err(|(line, message)| CliError::Parse { path: path.to_path_buf(), line, message })
}

pub fn parse_profile(text: &str) -> std::result::Result<FilmProfile, (usize, String)> {
    let mut lines = text.lines().enumerate().peekable();
    let mut length = None;
    while let Some((i, l)) = lines.next_if(|(_, l)| l.starts_with('#')) {
        if let Some((k, v)) = l[1..].split_once('=') {
            if k.trim() == "length" {
                length = Some(v.trim().parse::<f64>().map_err(|_| (i + 1, format!("bad length `{}`", v.trim())))?);
            }
        }
    }
    match lines.next() {
        Some((_, h)) if h.trim() == SNAPSHOT_HEADER => {}
        Some((i, _)) => return Err((i + 1, format!("expected header `{SNAPSHOT_HEADER}`"))),
        None => return Err((1, format!("expected header `{SNAPSHOT_HEADER}`"))),
    }
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    let mut first = 0;
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if first == 0 {
            first = i + 1;
        }
        let mut it = line.split(',');
        let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
            return Err((i + 1, "expected two columns".into()));
        };
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| (i + 1, format!("not a number: `{s}`")));
        xs.push(parse(a)?);
        vs.push(parse(b)?);
    }
    let n = xs.len();
    if n < 2 {
        return Err((first.max(1), "need at least two rows".into()));
    }
    let matches = |g: &PeriodicGrid| g.nodes().zip(&xs).all(|(a, b)| a.to_bits() == b.to_bits());
    let bad_grid = || (first, "abscissae are not a uniform periodic grid starting at 0".to_string());
    let grid = match length {
        Some(l) => PeriodicGrid::new(l, n).ok().filter(matches).ok_or_else(bad_grid)?,
        None => {
            let guess = (xs[1] - xs[0]) * n as f64;
            (0..=16)
                .flat_map(|k| [k as i64, -(k as i64)])
                .filter_map(|k| PeriodicGrid::new(f64::from_bits((guess.to_bits() as i64 + k) as u64), n).ok())
                .find(matches)
                .ok_or_else(bad_grid)?
        }
    };
    FilmProfile::new(grid, vs).map_err(|e| (first, e.to_string()))
}

/// Ordered `key = value` headline numbers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub entries: Vec<(String, String)>,
}

impl Summary {
    pub fn put(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn num(&mut self, key: &str, value: f64) {
        self.put(key, num(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key)?.parse().ok()
    }

    pub fn render(&self) -> String {
        self.entries.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .filter_map(|l| l.split_once(" = "))
            .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
            .collect();
        Self { entries }
    }
}

/// Exclusive claim on an output directory; released on drop.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    lock: PathBuf,
}

impl OutputDir {
    pub fn claim(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).map_err(io_at(root))?;
        let lock = root.join(".lock");
        match OpenOptions::new().write(true).create_new(true).open(&lock) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(Self { root: root.to_path_buf(), lock })
            }
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => Err(CliError::Locked(root.to_path_buf())),
            Err(e) => Err(CliError::Io { path: lock, source: e }),
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}

impl Drop for OutputDir {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.lock);
    }
}

/// Streams diagnostics rows and snapshot files while a simulation runs.
pub struct SimWriter<'a> {
    dir: &'a OutputDir,
    diagnostics: Option<BufWriter<File>>,
    pub snapshots: Vec<String>,
    pub error: Option<CliError>,
}

impl<'a> SimWriter<'a> {
    pub fn new(dir: &'a OutputDir) -> Result<Self> {
        let path = dir.path("diagnostics.csv");
        let mut w = BufWriter::new(File::create(&path).map_err(io_at(&path))?);
        writeln!(w, "{DIAGNOSTICS_HEADER}").map_err(io_at(&path))?;
        Ok(Self { dir, diagnostics: Some(w), snapshots: Vec::new(), error: None })
    }

    pub fn finish(mut self) -> Result<Vec<String>> {
        if let Some(mut w) = self.diagnostics.take() {
            w.flush().map_err(io_at(self.dir.path("diagnostics.csv")))?;
        }
        match self.error.take() {
            Some(e) => Err(e),
            None => Ok(std::mem::take(&mut self.snapshots)),
        }
    }

    fn keep(&mut self, r: Result<()>) {
        if let (Err(e), None) = (r, &self.error) {
            self.error = Some(e);
        }
    }
}

pub fn diagnostics_row(s: &DiagnosticSample) -> String {
    let r = &s.report;
        let opt = |x: Option<f64>| x.map(num).unwrap_or_else(|| "nan".into());
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        num(s.t),
        num(r.mass),
        num(r.energy),
        opt(r.modified_energy),
        num(r.dissipation),
        num(r.min_v),
        num(r.max_v),
        s.newton_iters,
        opt(s.v2_ft),
        opt(s.frame.map(|f| f.1))
    )
}

impl SimObserver for SimWriter<'_> {
    fn sample(&mut self, s: &DiagnosticSample) {
        let path = self.dir.path("diagnostics.csv");
        let r = match self.diagnostics.as_mut() {
            Some(w) => writeln!(w, "{}", diagnostics_row(s)).map_err(io_at(path)),
            None => Ok(()),
        };
        self.keep(r);
    }

    fn snapshot(&mut self, t: f64, profile: &FilmProfile) {
        let name = snapshot_name(t);
        let r = write_profile(&self.dir.path(&name), profile);
        self.snapshots.push(name);
        self.keep(r);
    }
}

/// Gnuplot script drawing the listed panels; data files are referenced by relative path.
pub struct PlotScript {
    text: String,
    panels: usize,
}

impl PlotScript {
    pub fn new(title: &str, panels: usize) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "# {title}");
        let _ = writeln!(text, "set datafile separator ','");
        let _ = writeln!(text, "set key autotitle columnhead");
        let _ = writeln!(text, "set terminal pngcairo size {},480", 640 * panels.max(1));
        let _ = writeln!(text, "set output 'plot.png'");
        if panels > 1 {
            let _ = writeln!(text, "set multiplot layout 1,{panels}");
        }
        Self { text, panels }
    }

    pub fn comment(mut self, line: &str) -> Self {
        let _ = writeln!(self.text, "# {line}");
        self
    }

    /// One panel: `(file, x column, y column, title)` curves.
    pub fn panel(mut self, xlabel: &str, ylabel: &str, curves: &[(&str, usize, usize, &str)]) -> Self {
        let _ = writeln!(self.text, "set xlabel '{xlabel}'\nset ylabel '{ylabel}'");
        let parts: Vec<String> = curves
            .iter()
            .map(|(f, x, y, t)| format!("'{f}' using {x}:{y} with lines title '{t}'"))
            .collect();
        let _ = writeln!(self.text, "plot {}", parts.join(", \\\n     "));
        self
    }

    pub fn render(mut self) -> String {
        if self.panels > 1 {
            self.text.push_str("unset multiplot\n");
        }
        self.text
    }
}
