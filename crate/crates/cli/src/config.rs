//! Flat `key = value` run configuration.
//!
//! Keys carry a dotted section prefix (`model.sigma = 0.01`), `#` starts a
//! comment, and every key is optional with the defaults below. Parsing
//! collects every problem, each tagged with its source line, before
//! reporting.
//!
//! | key | default |
//! |---|---|
//! | `command` | — (must match the CLI command when given) |
//! | `model.sigma`, `model.r0` | `0.01`, `0.2` |
//! | `model.A`, `model.m` | `0`, `3` |
//! | `model.gravity` | `false` |
//! | `model.speed` | `0`; a number or `wave` (speed of the solved travelling wave) |
//! | `model.eps_reg` | `0` |
//! | `grid.length` | `period` (the branch period) or a number |
//! | `grid.nodes` | `256` |
//! | `time.dt`, `time.t_end` | `1e-3`, `1` |
//! | `time.dt_min`, `time.dt_max` | `1e-12`, `0.1` |
//! | `time.newton_tol`, `time.newton_max_iter` | `1e-10`, `50` |
//! | `time.jacobian` | `analytic` or `fd` |
//! | `output.snapshot_every`, `output.diagnostics_every` | `0`, `0` |
//! | `branch.lambda`, `branch.c0` | `-0.5`, `0.5` |
//! | `branch.lambda_star` | unset; selects the touch-down branch and overrides both above |
//! | `ic.kind` | `minimizer`, `constant`, `settled`, `perturbed_wave` or `file` |
//! | `ic.value`, `ic.frequency`, `ic.file` | `1`, `1`, unset |
//! | `ic.settle_time` | `20` |
//! | `tw.length`, `tw.mass` | grid length, guess mass |
//! | `tw.guess` | `minimizer`, `evolved` or `file` |
//! | `tw.guess_file` | unset |
//! | `tw.tol`, `tw.max_iter` | `1e-10`, `50` |
//! | `tw.settle_time`, `tw.gravity_time` | `20`, `5` |
//! | `tw.mass_step`, `tw.length_step` | `1`, `0.1` |
//! | `continue.parameter`, `continue.target`, `continue.step` | `L`, unset, `0.1` |
//! | `analysis.plateau_slope`, `analysis.minimizers` | `0.05`, `false` |

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use fibrefilm_core::pde::{JacobianMode, SimConfig};
use fibrefilm_core::travelling_wave::{Parameter, TwConfig};
use fibrefilm_core::ModelParams;

use crate::error::{ConfigError, ConfigErrors};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Minimize,
    Period,
    Travelwave,
    Continue,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Minimize => "minimize",
            Command::Period => "period",
            Command::Travelwave => "travelwave",
            Command::Continue => "continue",
            Command::Verify => "verify",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "simulate" => Command::Simulate,
            "minimize" => Command::Minimize,
            "period" => Command::Period,
            "travelwave" => Command::Travelwave,
            "continue" => Command::Continue,
            "verify" => Command::Verify,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Length {
    /// One period of the configured minimizer branch.
    Period,
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrameSpeed {
    Value(f64),
    /// Speed of the travelling wave described by the `tw.*` keys.
    Wave,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BranchSpec {
    Explicit { lambda: f64, c0: f64 },
    Touchdown { lambda_star: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum IcKind {
    Constant(f64),
    Minimizer,
    /// Minimizer evolved without gravity for `settle_time`.
    Settled { settle_time: f64 },
    /// Travelling wave plus a mass-preserving sine perturbation.
    PerturbedWave { frequency: u32 },
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum GuessMode {
    Minimizer,
    /// Settle the branch without gravity, switch gravity on, then continue in `M` and `L`.
    Evolved,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwSpec {
    pub length: Option<f64>,
    pub mass: Option<f64>,
    pub guess: GuessMode,
    pub solver: TwConfig,
    pub settle_time: f64,
    pub gravity_time: f64,
    pub mass_step: f64,
    pub length_step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinueSpec {
    pub parameter: Parameter,
    pub target: Option<f64>,
    pub step: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisSpec {
    pub plateau_slope: f64,
    pub minimizers: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Option<Command>,
    /// `model.speed` is resolved separately through [`RunConfig::frame_speed`].
    pub model: ModelParams,
    pub frame_speed: FrameSpeed,
    pub length: Length,
    pub nodes: usize,
    pub sim: SimConfig,
    pub branch: BranchSpec,
    pub ic: IcKind,
    pub tw: TwSpec,
    pub cont: ContinueSpec,
    pub analysis: AnalysisSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            model: ModelParams::new(0.01, 0.2),
            frame_speed: FrameSpeed::Value(0.0),
            length: Length::Period,
            nodes: 256,
            sim: SimConfig::default(),
            branch: BranchSpec::Explicit { lambda: -0.5, c0: 0.5 },
            ic: IcKind::Minimizer,
            tw: TwSpec {
                length: None,
                mass: None,
                guess: GuessMode::Minimizer,
                solver: TwConfig::default(),
                settle_time: 20.0,
                gravity_time: 5.0,
                mass_step: 1.0,
                length_step: 0.1,
            },
            cont: ContinueSpec { parameter: Parameter::Length, target: None, step: 0.1 },
            analysis: AnalysisSpec { plateau_slope: 0.05, minimizers: false },
        }
    }
}

/// Where a setting came from, for error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Override(String),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Override(s) => write!(f, "override `{s}`"),
        }
    }
}

const KEYS: &[&str] = &[
    "command",
    "model.sigma",
    "model.r0",
    "model.A",
    "model.m",
    "model.gravity",
    "model.speed",
    "model.eps_reg",
    "grid.length",
    "grid.nodes",
    "time.dt",
    "time.t_end",
    "time.dt_min",
    "time.dt_max",
    "time.newton_tol",
    "time.newton_max_iter",
    "time.jacobian",
    "output.snapshot_every",
    "output.diagnostics_every",
    "branch.lambda",
    "branch.c0",
    "branch.lambda_star",
    "ic.kind",
    "ic.value",
    "ic.frequency",
    "ic.file",
    "ic.settle_time",
    "tw.length",
    "tw.mass",
    "tw.guess",
    "tw.guess_file",
    "tw.tol",
    "tw.max_iter",
    "tw.settle_time",
    "tw.gravity_time",
    "tw.mass_step",
    "tw.length_step",
    "continue.parameter",
    "continue.target",
    "continue.step",
    "analysis.plateau_slope",
    "analysis.minimizers",
];

struct Entries {
    map: BTreeMap<String, (String, Origin)>,
    errors: Vec<ConfigError>,
}

impl Entries {
    fn err(&mut self, origin: &Origin, msg: impl Into<String>) {
        let line = match origin {
            Origin::Line(n) => *n,
            Origin::Override(_) => usize::MAX,
        };
        self.errors.push(ConfigError { line, origin: origin.to_string(), message: msg.into() });
    }

    fn insert(&mut self, key: &str, value: &str, origin: Origin, replace: bool) {
        if !KEYS.contains(&key) {
            self.err(&origin, format!("unknown key `{key}`"));
            return;
        }
        if value.is_empty() {
            self.err(&origin, format!("`{key}` has an empty value"));
            return;
        }
        if !replace {
            if let Some((_, first)) = self.map.get(key) {
                let first = first.clone();
                self.err(&origin, format!("duplicate key `{key}` (first set at {first})"));
                return;
            }
        }
        self.map.insert(key.to_string(), (value.to_string(), origin));
    }

    fn origin(&self, key: &str) -> Origin {
        self.map.get(key).map(|(_, o)| o.clone()).unwrap_or(Origin::Line(0))
    }

    fn raw(&self, key: &str) -> Option<(String, Origin)> {
        self.map.get(key).cloned()
    }

    fn f64(&mut self, key: &str, default: f64) -> f64 {
        self.opt_f64(key).unwrap_or(default)
    }

    fn opt_f64(&mut self, key: &str) -> Option<f64> {
        let (v, origin) = self.raw(key)?;
        match v.parse::<f64>() {
            Ok(x) if x.is_finite() => Some(x),
            _ => {
                self.err(&origin, format!("`{key}` expects a finite number, got `{v}`"));
                None
            }
        }
    }

    fn usize(&mut self, key: &str, default: usize) -> usize {
        let Some((v, origin)) = self.raw(key) else { return default };
        v.parse::<usize>().unwrap_or_else(|_| {
            self.err(&origin, format!("`{key}` expects a non-negative integer, got `{v}`"));
            default
        })
    }

    fn bool(&mut self, key: &str, default: bool) -> bool {
        let Some((v, origin)) = self.raw(key) else { return default };
        match v.as_str() {
            "true" => true,
            "false" => false,
            _ => {
                self.err(&origin, format!("`{key}` expects true or false, got `{v}`"));
                default
            }
        }
    }

    fn path(&mut self, key: &str, base: &Path) -> Option<PathBuf> {
        let (v, origin) = self.raw(key)?;
        let p = base.join(&v);
        if !p.is_file() {
            self.err(&origin, format!("`{key}`: file `{}` does not exist", p.display()));
        }
        Some(p)
    }

    fn check(&mut self, ok: bool, key: &str, msg: impl Into<String>) {
        if !ok {
            let o = self.origin(key);
            self.err(&o, msg);
        }
    }
}

fn split_line(line: &str) -> Option<Result<(&str, &str), ()>> {
    let body = line.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return None;
    }
    Some(match body.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim(), v.trim())),
        _ => Err(()),
    })
}

/// Parses `text`, resolving relative file paths against the working directory.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigErrors> {
    parse_config_with(text, &[], Path::new("."))
}

/// Parses `text`, then applies `key=value` overrides; relative paths resolve against `base`.
pub fn parse_config_with(text: &str, overrides: &[String], base: &Path) -> Result<RunConfig, ConfigErrors> {
    let mut e = Entries { map: BTreeMap::new(), errors: Vec::new() };
    for (i, line) in text.lines().enumerate() {
        match split_line(line) {
            None => {}
            Some(Ok((k, v))) => e.insert(k, v, Origin::Line(i + 1), false),
            Some(Err(())) => e.err(&Origin::Line(i + 1), format!("expected `key = value`, got `{}`", line.trim())),
        }
    }
    for o in overrides {
        match split_line(o) {
            Some(Ok((k, v))) => e.insert(k, v, Origin::Override(o.clone()), true),
            _ => e.err(&Origin::Override(o.clone()), "expected `key=value`"),
        }
    }
    let cfg = build(&mut e, base);
    if e.errors.is_empty() {
        Ok(cfg)
    } else {
        e.errors.sort_by_key(|x| x.line);
        Err(ConfigErrors(e.errors))
    }
}

fn build(e: &mut Entries, base: &Path) -> RunConfig {
    let d = RunConfig::default();
    let mut cfg = d.clone();

    if let Some((v, origin)) = e.raw("command") {
        cfg.command = Command::parse(&v);
        if cfg.command.is_none() {
            e.err(&origin, format!("unknown command `{v}`"));
        }
    }

    let mut m = d.model;
    m.sigma = e.f64("model.sigma", m.sigma);
    m.r0 = e.f64("model.r0", m.r0);
    m.a = e.f64("model.A", m.a);
    m.m = e.f64("model.m", m.m);
    m = m.with_gravity(e.bool("model.gravity", false));
    m.eps_reg = e.f64("model.eps_reg", m.eps_reg);
    cfg.frame_speed = match e.raw("model.speed") {
        Some((v, _)) if v == "wave" => FrameSpeed::Wave,
        Some(_) => FrameSpeed::Value(e.f64("model.speed", 0.0)),
        None => FrameSpeed::Value(0.0),
    };
    cfg.model = m;
    e.check(m.sigma > 0.0, "model.sigma", format!("model.sigma must be > 0, got {}", m.sigma));
    e.check(m.r0 > 0.0, "model.r0", format!("model.r0 must be > 0, got {}", m.r0));
    e.check(m.a >= 0.0, "model.A", format!("model.A must be >= 0, got {}", m.a));
    e.check(
        !(m.a > 0.0 && m.m <= 2.0),
        "model.m",
        format!("model.m = {} with model.A = {}: the stabilized energy and its existence theory require m > 2", m.m, m.a),
    );
    e.check(m.m > 0.0, "model.m", format!("model.m must be > 0, got {}", m.m));
    e.check(m.eps_reg >= 0.0, "model.eps_reg", "model.eps_reg must be >= 0");

    cfg.length = match e.raw("grid.length") {
        Some((v, _)) if v == "period" => Length::Period,
        Some(_) => Length::Value(e.f64("grid.length", 1.0)),
        None => Length::Period,
    };
    if let Length::Value(l) = cfg.length {
        e.check(l > 0.0, "grid.length", format!("grid.length must be > 0, got {l}"));
    }
    cfg.nodes = e.usize("grid.nodes", d.nodes);
    e.check(cfg.nodes >= 16, "grid.nodes", format!("grid.nodes must be >= 16, got {}", cfg.nodes));

    let s = &mut cfg.sim;
    s.dt = e.f64("time.dt", s.dt);
    s.t_end = e.f64("time.t_end", s.t_end);
    s.dt_min = e.f64("time.dt_min", s.dt_min);
    s.dt_max = e.f64("time.dt_max", s.dt_max);
    s.newton_tol = e.f64("time.newton_tol", s.newton_tol);
    s.newton_max_iter = e.usize("time.newton_max_iter", s.newton_max_iter);
    s.snapshot_every = e.f64("output.snapshot_every", s.snapshot_every);
    s.diagnostics_every = e.f64("output.diagnostics_every", s.diagnostics_every);
    if let Some((v, origin)) = e.raw("time.jacobian") {
        match v.as_str() {
            "analytic" => s.jacobian = JacobianMode::Analytic,
            "fd" => s.jacobian = JacobianMode::FiniteDifference,
            _ => e.err(&origin, format!("time.jacobian must be `analytic` or `fd`, got `{v}`")),
        }
    }
    let s = cfg.sim;
    e.check(s.dt > 0.0 && s.dt_min > 0.0 && s.dt_max > 0.0, "time.dt", "time steps must be > 0");
    e.check(s.dt_min <= s.dt && s.dt <= s.dt_max, "time.dt", "need time.dt_min <= time.dt <= time.dt_max");
    e.check(s.t_end >= 0.0, "time.t_end", "time.t_end must be >= 0");
    e.check(s.newton_tol > 0.0, "time.newton_tol", "time.newton_tol must be > 0");
    e.check(s.newton_max_iter > 0, "time.newton_max_iter", "time.newton_max_iter must be > 0");
    e.check(s.snapshot_every >= 0.0, "output.snapshot_every", "output.snapshot_every must be >= 0");
    e.check(s.diagnostics_every >= 0.0, "output.diagnostics_every", "output.diagnostics_every must be >= 0");

    cfg.branch = match e.opt_f64("branch.lambda_star") {
        Some(ls) => {
            e.check(ls < 0.0, "branch.lambda_star", "branch.lambda_star must be < 0");
            BranchSpec::Touchdown { lambda_star: ls }
        }
        None => {
            let lambda = e.f64("branch.lambda", -0.5);
            let c0 = e.f64("branch.c0", 0.5);
            e.check(lambda < 0.0, "branch.lambda", format!("branch.lambda must be < 0, got {lambda}"));
            e.check(c0 > 0.0, "branch.c0", format!("branch.c0 must be > 0, got {c0}"));
            BranchSpec::Explicit { lambda, c0 }
        }
    };

    let kind = e.raw("ic.kind");
    cfg.ic = match kind.as_ref().map(|(v, o)| (v.as_str(), o)) {
        None | Some(("minimizer", _)) => IcKind::Minimizer,
        Some(("constant", _)) => {
            let c = e.f64("ic.value", 1.0);
            e.check(c > m.r0, "ic.value", format!("ic.value must exceed model.r0, got {c}"));
            IcKind::Constant(c)
        }
        Some(("settled", _)) => {
            let t = e.f64("ic.settle_time", 20.0);
            e.check(t >= 0.0, "ic.settle_time", "ic.settle_time must be >= 0");
            IcKind::Settled { settle_time: t }
        }
        Some(("perturbed_wave", _)) => {
            let f = e.usize("ic.frequency", 1);
            e.check(f >= 1, "ic.frequency", "ic.frequency must be >= 1");
            IcKind::PerturbedWave { frequency: f as u32 }
        }
        Some(("file", o)) => {
            let o = o.clone();
            match e.path("ic.file", base) {
                Some(p) => IcKind::File(p),
                None => {
                    e.err(&o, "ic.kind = file needs ic.file");
                    IcKind::Minimizer
                }
            }
        }
        Some((other, o)) => {
            let (other, o) = (other.to_string(), o.clone());
            e.err(&o, format!("unknown ic.kind `{other}`"));
            IcKind::Minimizer
        }
    };

    let tw = &mut cfg.tw;
    tw.length = e.opt_f64("tw.length");
    tw.mass = e.opt_f64("tw.mass");
    tw.solver.tol = e.f64("tw.tol", tw.solver.tol);
    tw.solver.max_iter = e.usize("tw.max_iter", tw.solver.max_iter);
    tw.settle_time = e.f64("tw.settle_time", tw.settle_time);
    tw.gravity_time = e.f64("tw.gravity_time", tw.gravity_time);
    tw.mass_step = e.f64("tw.mass_step", tw.mass_step);
    tw.length_step = e.f64("tw.length_step", tw.length_step);
    tw.guess = match e.raw("tw.guess") {
        None => GuessMode::Minimizer,
        Some((v, o)) => match v.as_str() {
            "minimizer" => GuessMode::Minimizer,
            "evolved" => GuessMode::Evolved,
            "file" => match e.path("tw.guess_file", base) {
                Some(p) => GuessMode::File(p),
                None => {
                    e.err(&o, "tw.guess = file needs tw.guess_file");
                    GuessMode::Minimizer
                }
            },
            _ => {
                e.err(&o, format!("tw.guess must be minimizer, evolved or file, got `{v}`"));
                GuessMode::Minimizer
            }
        },
    };
    let tw = cfg.tw.clone();
    e.check(tw.length.is_none_or(|l| l > 0.0), "tw.length", "tw.length must be > 0");
    e.check(tw.mass.is_none_or(|x| x > 0.0), "tw.mass", "tw.mass must be > 0");
    e.check(tw.solver.tol > 0.0 && tw.solver.max_iter > 0, "tw.tol", "tw.tol and tw.max_iter must be > 0");
    e.check(tw.settle_time >= 0.0 && tw.gravity_time >= 0.0, "tw.settle_time", "evolution times must be >= 0");
    e.check(tw.mass_step > 0.0 && tw.length_step > 0.0, "tw.mass_step", "continuation steps must be > 0");

    if let Some((v, o)) = e.raw("continue.parameter") {
        cfg.cont.parameter = match v.as_str() {
            "L" => Parameter::Length,
            "M" => Parameter::Mass,
            _ => {
                e.err(&o, format!("continue.parameter must be L or M, got `{v}`"));
                Parameter::Length
            }
        };
    }
    cfg.cont.target = e.opt_f64("continue.target");
    cfg.cont.step = e.f64("continue.step", cfg.cont.step);
    e.check(cfg.cont.step > 0.0, "continue.step", "continue.step must be > 0");
    e.check(cfg.cont.target.is_none_or(|t| t > 0.0), "continue.target", "continue.target must be > 0");

    cfg.analysis.plateau_slope = e.f64("analysis.plateau_slope", cfg.analysis.plateau_slope);
    cfg.analysis.minimizers = e.bool("analysis.minimizers", false);
    e.check(cfg.analysis.plateau_slope > 0.0, "analysis.plateau_slope", "analysis.plateau_slope must be > 0");
    cfg
}

impl RunConfig {
    /// Command-specific requirements that the flat key checks cannot see.
    pub fn check_for(&self, command: Command) -> Result<(), ConfigErrors> {
        let mut errs = Vec::new();
        let mut fail = |msg: String| errs.push(ConfigError { line: 0, origin: "config".into(), message: msg });
        if let Some(c) = self.command {
            if c != command {
                fail(format!("config is for `{}` but `{}` was requested", c.name(), command.name()));
            }
        }
        let needs_wave = matches!(command, Command::Travelwave | Command::Continue | Command::Verify)
            || matches!(self.ic, IcKind::PerturbedWave { .. })
            || self.frame_speed == FrameSpeed::Wave;
        if needs_wave && self.nodes < 32 {
            fail(format!("travelling waves need grid.nodes >= 32, got {}", self.nodes));
        }
        if needs_wave && !self.model.has_gravity() {
            fail("travelling waves need model.gravity = true".into());
        }
        if command == Command::Continue && self.cont.target.is_none() {
            fail("continue needs continue.target".into());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(ConfigErrors(errs))
        }
    }
}
