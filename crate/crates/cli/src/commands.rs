//! Command pipelines. Each `*_run` function returns structured results; [`run`]
//! executes one command and writes its artifacts.

use fibrefilm_core::functionals::{self, GravityFrame};
use fibrefilm_core::minimizers::{self, MinimizerBranch};
use fibrefilm_core::pde::{self, InitialCondition, PerturbedWave, SimConfig, SimObserver, SimOutcome};
use fibrefilm_core::travelling_wave::{self, Branch, Parameter, SpeedReport, TwSolution};
use fibrefilm_core::{FilmProfile, ModelParams, PeriodicGrid, PressureField};

use crate::analysis::{self, Plateau};
use crate::config::{BranchSpec, Command, FrameSpeed, GuessMode, IcKind, Length, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{self, num, OutputDir, PlotScript, SimWriter, Summary};

/// Step settings of the gravity-free settling run (`ic.kind = settled`, evolved guesses).
pub fn settle_config(t_end: f64, newton_tol: f64) -> SimConfig {
    SimConfig { dt: 1e-3, dt_max: 0.05, dt_min: 1e-10, t_end, newton_tol, diagnostics_every: 1.0, ..Default::default() }
}

/// Step settings of the lab-frame gravity run inside the evolved guess.
pub fn gravity_config(t_end: f64, newton_tol: f64) -> SimConfig {
    SimConfig { dt: 1e-4, dt_max: 0.01, dt_min: 1e-12, t_end, newton_tol, diagnostics_every: 0.02, ..Default::default() }
}

/// Model parameters with the frame speed zeroed.
fn lab(cfg: &RunConfig) -> ModelParams {
    cfg.model.with_speed(0.0)
}

pub fn branch(cfg: &RunConfig) -> Result<MinimizerBranch> {
    let p = lab(cfg);
    Ok(match cfg.branch {
        BranchSpec::Explicit { lambda, c0 } => MinimizerBranch::new(lambda, c0, &p)?,
        BranchSpec::Touchdown { lambda_star } => {
            MinimizerBranch::touchdown(minimizers::c0_from_lambda_star(lambda_star, &p)?, &p)?
        }
    })
}

fn branch_period(b: &MinimizerBranch) -> f64 {
    b.tau.unwrap_or_else(|| minimizers::harmonic_period(b.lambda))
}

pub fn grid(cfg: &RunConfig) -> Result<PeriodicGrid> {
    let length = match cfg.length {
        Length::Value(l) => l,
        Length::Period => branch_period(&branch(cfg)?),
    };
    Ok(PeriodicGrid::new(length, cfg.nodes)?)
}

#[derive(Debug, Clone)]
pub struct PeriodRun {
    pub branch: MinimizerBranch,
    pub tau: f64,
}

pub fn period_run(cfg: &RunConfig) -> Result<PeriodRun> {
    let b = branch(cfg)?;
    let tau = b.tau.ok_or_else(|| CliError::Failed("branch is constant: turning points coincide".into()))?;
    Ok(PeriodRun { branch: b, tau })
}

#[derive(Debug, Clone)]
pub struct MinimizeRun {
    pub branch: MinimizerBranch,
    pub profile: FilmProfile,
    pub lambda: PressureField,
    pub energy: f64,
    pub mass: f64,
}

pub fn minimize_run(cfg: &RunConfig) -> Result<MinimizeRun> {
    let b = branch(cfg)?;
    let p = lab(cfg);
    let profile = minimizers::minimizer_profile_on(&b, grid(cfg)?)?;
    Ok(MinimizeRun {
        lambda: minimizers::lagrange_multiplier_field(&profile, &p)?,
        energy: functionals::energy(&profile, &p)?,
        mass: functionals::mass(&profile),
        profile,
        branch: b,
    })
}

/// The configured minimizer evolved without gravity for `t_end`.
pub fn settle(cfg: &RunConfig, grid: PeriodicGrid, t_end: f64) -> Result<SimOutcome> {
    let p = lab(cfg).with_gravity(false);
    let ic = minimizer_ic(cfg, grid)?;
    Ok(pde::simulate(ic, &p, &settle_config(t_end, cfg.sim.newton_tol), &mut ())?)
}

fn minimizer_ic(cfg: &RunConfig, grid: PeriodicGrid) -> Result<FilmProfile> {
    let b = branch(cfg)?;
    let kind = InitialCondition::Minimizer { lambda: b.lambda, c0: b.c0 };
    Ok(pde::make_initial(&kind, &lab(cfg), grid)?)
}

/// Intermediate states of the evolved travelling-wave guess.
#[derive(Debug, Clone)]
pub struct EvolvedWave {
    pub settled: FilmProfile,
    /// Lab-frame gravity run from the settled state.
    pub lab: SimOutcome,
    /// Newton polish of the lab-frame end state at its own `(L, M)`.
    pub polished: TwSolution,
    pub mass_leg: Option<Branch>,
    pub length_leg: Option<Branch>,
}

impl EvolvedWave {
    pub fn solution(&self) -> &TwSolution {
        self.length_leg.as_ref().or(self.mass_leg.as_ref()).map(|b| b.last()).unwrap_or(&self.polished)
    }
}

pub fn evolved_wave(cfg: &RunConfig) -> Result<EvolvedWave> {
    let g = grid(cfg)?;
    let tol = cfg.sim.newton_tol;
    let settled = settle(cfg, g, cfg.tw.settle_time)?.state.profile;
    let pg = lab(cfg).with_gravity(true);
    let lab_run = pde::simulate(settled.clone(), &pg, &gravity_config(cfg.tw.gravity_time, tol), &mut ())?;
    let end = &lab_run.state.profile;
    let start = end.rotated(end.argmin());
    let m = functionals::mass(&start);
    let v0 = travelling_wave::speed_estimate(&start, &pg);
    let polished = travelling_wave::solve_tw(&start, m, v0, &pg, &cfg.tw.solver)?;
    let leg = |from: &TwSolution, parameter: Parameter, target: Option<f64>, step: f64| -> Result<Option<Branch>> {
        let Some(target) = target else { return Ok(None) };
        let b = travelling_wave::continue_branch(from, parameter, target, step, &pg, &cfg.tw.solver)?;
        match &b.stopped {
            Some(why) => Err(CliError::Failed(format!("continuation in {} stopped: {why}", parameter.name()))),
            None => Ok(Some(b)),
        }
    };
    let mass_leg = leg(&polished, Parameter::Mass, cfg.tw.mass, cfg.tw.mass_step)?;
    let from = mass_leg.as_ref().map(|b| b.last()).unwrap_or(&polished).clone();
    let length_leg = leg(&from, Parameter::Length, cfg.tw.length, cfg.tw.length_step)?;
    Ok(EvolvedWave { settled, lab: lab_run, polished, mass_leg, length_leg })
}

#[derive(Debug, Clone)]
pub struct WaveRun {
    pub solution: TwSolution,
    pub report: SpeedReport,
    /// `|K + ν|/|ν|` with `ν` from the periodicity condition at the solver speed.
    pub k_nu_gap: f64,
    pub evolved: Option<EvolvedWave>,
}

pub fn wave_run(cfg: &RunConfig) -> Result<WaveRun> {
    let p = lab(cfg).with_gravity(true);
    let (solution, evolved) = match &cfg.tw.guess {
        GuessMode::Evolved => {
            let ev = evolved_wave(cfg)?;
            (ev.solution().clone(), Some(ev))
        }
        GuessMode::Minimizer => {
            let b = branch(cfg)?;
            let length = match cfg.tw.length {
                Some(l) => l,
                None => grid(cfg)?.length(),
            };
            let base = minimizers::minimizer_profile_on(&b, PeriodicGrid::new(length, cfg.nodes)?)?;
            let mass = cfg.tw.mass.unwrap_or_else(|| functionals::mass(&base));
            let guess = travelling_wave::minimizer_guess(b.lambda, b.c0, length, cfg.nodes, mass, &p)?;
            let v0 = travelling_wave::speed_estimate(&guess, &p);
            (travelling_wave::solve_tw(&guess, mass, v0, &p, &cfg.tw.solver)?, None)
        }
        GuessMode::File(path) => {
            let mut guess = output::read_profile(path)?;
            if let Some(l) = cfg.tw.length {
                guess = guess.stretched(l)?;
            }
            let mass = cfg.tw.mass.unwrap_or_else(|| functionals::mass(&guess));
            let v0 = travelling_wave::speed_estimate(&guess, &p);
            (travelling_wave::solve_tw(&guess, mass, v0, &p, &cfg.tw.solver)?, None)
        }
    };
    let report = travelling_wave::verify_speed_formula(&solution, &p);
    let nu = functionals::nu_for_periodicity(&solution.profile, solution.speed, &p)?;
    let k_nu_gap = (solution.flux_constant + nu).abs() / nu.abs();
    Ok(WaveRun { solution, report, k_nu_gap, evolved })
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub params: ModelParams,
    pub initial: FilmProfile,
    pub outcome: SimOutcome,
    pub wave: Option<WaveRun>,
    pub perturbation: Option<PerturbedWave>,
    /// `λ(ξ)` of the final state and its plateaus (gravity-free runs only).
    pub lambda: Option<PressureField>,
    pub plateaus: Vec<Plateau>,
    /// Touch-down minimizers at the plateau levels (when requested).
    pub plateau_minimizers: Vec<(f64, FilmProfile)>,
}

pub fn simulation_run(cfg: &RunConfig, observer: &mut dyn SimObserver) -> Result<SimulationRun> {
    let needs_wave = cfg.frame_speed == FrameSpeed::Wave || matches!(cfg.ic, IcKind::PerturbedWave { .. });
    let wave = if needs_wave { Some(wave_run(cfg)?) } else { None };
    let speed = match cfg.frame_speed {
        FrameSpeed::Value(v) => v,
        FrameSpeed::Wave => wave.as_ref().map(|w| w.solution.speed).unwrap_or(0.0),
    };
    let params = cfg.model.with_speed(speed);
    let mut perturbation = None;
    let initial = match &cfg.ic {
        IcKind::Constant(c) => FilmProfile::constant(grid(cfg)?, *c)?,
        IcKind::Minimizer => minimizer_ic(cfg, grid(cfg)?)?,
        IcKind::Settled { settle_time } => settle(cfg, grid(cfg)?, *settle_time)?.state.profile,
        IcKind::PerturbedWave { frequency } => {
            let base = &wave.as_ref().expect("wave solved above").solution.profile;
            let pw = pde::perturbed_wave(base, *frequency)?;
            let p = pw.profile.clone();
            perturbation = Some(pw);
            p
        }
        IcKind::File(path) => {
            let read = output::read_profile(path)?;
            let g = match cfg.length {
                Length::Value(l) => PeriodicGrid::new(l, cfg.nodes)?,
                Length::Period => PeriodicGrid::new(read.grid().length(), cfg.nodes)?,
            };
            pde::make_initial(&InitialCondition::Values(read.into_values()), &params, g)?
        }
    };
    let outcome = pde::simulate(initial.clone(), &params, &cfg.sim, observer)?;
    let (mut lambda, mut plateaus, mut plateau_minimizers) = (None, Vec::new(), Vec::new());
    if !params.has_gravity() {
        let field = minimizers::lagrange_multiplier_field(&outcome.state.profile, &params)?;
        plateaus = analysis::plateaus(&field, cfg.analysis.plateau_slope);
        if cfg.analysis.minimizers {
            for pl in plateaus.iter().filter(|p| p.fraction >= 0.05) {
                let built = minimizers::c0_from_lambda_star(pl.mean, &params)
                    .and_then(|c0| MinimizerBranch::touchdown(c0, &params))
                    .and_then(|b| minimizers::minimizer_profile(&b, cfg.nodes));
                if let Ok(prof) = built {
                    plateau_minimizers.push((pl.mean, prof));
                }
            }
        }
        lambda = Some(field);
    }
    Ok(SimulationRun { params, initial, outcome, wave, perturbation, lambda, plateaus, plateau_minimizers })
}

pub fn continue_run(cfg: &RunConfig) -> Result<(WaveRun, Branch)> {
    let w = wave_run(cfg)?;
    let target = cfg.cont.target.ok_or_else(|| CliError::Failed("continue needs continue.target".into()))?;
    let p = lab(cfg).with_gravity(true);
    let b = travelling_wave::continue_branch(&w.solution, cfg.cont.parameter, target, cfg.cont.step, &p, &cfg.tw.solver)?;
    Ok((w, b))
}

#[derive(Debug, Clone)]
pub struct VerifyRun {
    pub wave: WaveRun,
    /// Max-norm drift of the wave after 100 implicit steps (`Δt = 10⁻³`) in its own frame.
    pub steady_drift: f64,
    pub min_above_r0: bool,
}

pub fn verify_run(cfg: &RunConfig) -> Result<VerifyRun> {
    let wave = wave_run(cfg)?;
    let s = &wave.solution;
    let p = lab(cfg).with_gravity(true).with_speed(s.speed);
    let sim = SimConfig { dt: 1e-3, dt_max: 1e-3, t_end: 0.1, newton_tol: 1e-12, ..Default::default() };
    let out = pde::simulate(s.profile.clone(), &p, &sim, &mut ())?;
    let steady_drift = out
        .state
        .profile
        .values()
        .iter()
        .zip(s.profile.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let min_above_r0 = s.profile.min() > p.r0;
    Ok(VerifyRun { wave, steady_drift, min_above_r0 })
}

fn put_model(s: &mut Summary, p: &ModelParams) {
    s.num("sigma", p.sigma);
    s.num("r0", p.r0);
    s.num("A", p.a);
    s.num("m", p.m);
    s.num("mu", p.mu);
    s.num("eps_reg", p.eps_reg);
}

fn put_wave(out: &mut Summary, w: &WaveRun, prefix: &str) {
    let mut s = Summary::default();
    let sol = &w.solution;
    s.num("L", sol.profile.grid().length());
    s.put("nodes", sol.profile.values().len());
    s.num("M", sol.mass);
    s.num("V", sol.speed);
    s.num("K", sol.flux_constant);
    s.num("residual_norm", sol.residual_norm);
    s.put("newton_iters", sol.newton_iters);
    s.num("min_v", sol.profile.min());
    s.num("max_v", sol.profile.max());
    if let Some(vf) = w.report.speed_formula {
        s.num("V_formula", vf);
    }
    if let Some(g) = w.report.speed_rel_gap {
        s.num("V_formula_rel_gap", g);
    }
    if let Some(nu) = w.report.nu_formula {
        s.num("nu_formula", nu);
    }
    s.num("K_nu_rel_gap", w.k_nu_gap);
    if let Some(d) = &w.report.degenerate {
        s.put("formula_degenerate", d);
    }
    if let Some(ev) = &w.evolved {
        s.num("evolved_lab_peak_speed", ev.lab.peaks.speed(0.25).unwrap_or(f64::NAN));
        s.num("evolved_polished_V", ev.polished.speed);
        s.num("evolved_polished_M", ev.polished.mass);
    }
    for (k, v) in s.entries {
        out.put(&format!("{prefix}{k}"), v);
    }
}

fn branch_rows(b: &Branch) -> String {
    let mut out = String::from(output::BRANCH_HEADER);
    out.push('\n');
    for pt in &b.points {
        let s = &pt.solution;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            b.parameter.name(),
            num(pt.value),
            num(s.speed),
            num(s.flux_constant),
            num(s.mass),
            num(s.profile.min()),
            num(s.profile.max()),
            num(s.residual_norm)
        ));
    }
    out
}

/// Runs `command` and writes its artifacts into `dir`. Failures still leave a
/// `summary.txt` with `status = failed` next to whatever was streamed.
pub fn run(command: Command, cfg: &RunConfig, dir: &OutputDir) -> Result<Summary> {
    cfg.check_for(command)?;
    let mut s = Summary::default();
    s.put("command", command.name());
    let result = run_inner(command, cfg, dir, &mut s);
    match &result {
        Ok(()) => s.put("status", "ok"),
        Err(e) => {
            s.put("status", "failed");
            s.put("error", e.to_string().replace('\n', "; "));
        }
    }
    output::write_file(&dir.path("summary.txt"), &s.render())?;
    result.map(|()| s)
}

fn run_inner(command: Command, cfg: &RunConfig, dir: &OutputDir, s: &mut Summary) -> Result<()> {
    put_model(s, &cfg.model);
    match command {
        Command::Period => {
            let r = period_run(cfg)?;
            let b = &r.branch;
            s.num("lambda", b.lambda);
            s.num("c0", b.c0);
            s.num("tau", r.tau);
            s.num("v1", b.v1_star);
            s.num("v2", b.v2_star);
            s.put("touchdown", b.touchdown);
            s.num("harmonic_period", minimizers::harmonic_period(b.lambda));
            let prof = minimizers::minimizer_profile(b, cfg.nodes)?;
            output::write_profile(&dir.path("profile.csv"), &prof)?;
            let plot = PlotScript::new("minimizer over one period", 1)
                .panel("xi", "v", &[("profile.csv", 1, 2, "v_min")])
                .render();
            output::write_file(&dir.path("plot.gp"), &plot)?;
        }
        Command::Minimize => {
            let r = minimize_run(cfg)?;
            let b = &r.branch;
            s.num("lambda", b.lambda);
            s.num("c0", b.c0);
            s.num("tau", branch_period(b));
            s.num("L", r.profile.grid().length());
            s.num("v1", b.v1_star);
            s.num("v2", b.v2_star);
            s.put("touchdown", b.touchdown);
            s.num("mass", r.mass);
            s.num("energy", r.energy);
            let lam = r.lambda.values();
            s.num("lambda_mean", lam.iter().sum::<f64>() / lam.len() as f64);
            s.num("lambda_max_dev", lam.iter().fold(0.0f64, |m, x| m.max((x - b.lambda).abs())));
            output::write_profile(&dir.path("profile.csv"), &r.profile)?;
            output::write_file(&dir.path("lambda.csv"), &output::field_csv("xi,lambda", r.lambda.grid(), lam))?;
            let plot = PlotScript::new("energy minimizer and its multiplier field", 2)
                .panel("xi", "v", &[("profile.csv", 1, 2, "v_min")])
                .panel("xi", "lambda", &[("lambda.csv", 1, 2, "lambda")])
                .render();
            output::write_file(&dir.path("plot.gp"), &plot)?;
        }
        Command::Simulate => simulate_artifacts(cfg, dir, s)?,
        Command::Travelwave => {
            let w = wave_run(cfg)?;
            put_wave(s, &w, "");
            output::write_profile(&dir.path("wave.csv"), &w.solution.profile)?;
            if let Some(ev) = &w.evolved {
                output::write_profile(&dir.path("evolved_settled.csv"), &ev.settled)?;
                output::write_profile(&dir.path("evolved_lab.csv"), &ev.lab.state.profile)?;
            }
            let plot = PlotScript::new("travelling wave", 1).panel("xi", "v", &[("wave.csv", 1, 2, "v_min")]).render();
            output::write_file(&dir.path("plot.gp"), &plot)?;
        }
        Command::Continue => {
            let (w, b) = continue_run(cfg)?;
            put_wave(s, &w, "");
            s.put("parameter", b.parameter.name());
            s.put("points", b.points.len());
            s.num("final_value", b.points.last().map(|p| p.value).unwrap_or(f64::NAN));
            s.num("final_V", b.last().speed);
            if let Some(why) = &b.stopped {
                s.put("stopped", why);
            }
            output::write_file(&dir.path("branch.csv"), &branch_rows(&b))?;
            for (i, pt) in b.points.iter().enumerate() {
                output::write_profile(&dir.path(&format!("branch_{i:04}.csv")), &pt.solution.profile)?;
            }
            let plot = PlotScript::new("wave speed along the branch", 1)
                .panel(b.parameter.name(), "V", &[("branch.csv", 2, 3, "V")])
                .render();
            output::write_file(&dir.path("plot.gp"), &plot)?;
            if b.stopped.is_some() {
                return Err(CliError::Failed("continuation stopped before the target".into()));
            }
        }
        Command::Verify => {
            let r = verify_run(cfg)?;
            put_wave(s, &r.wave, "");
            s.num("steady_drift_100_steps", r.steady_drift);
            s.put("min_above_r0", r.min_above_r0);
            output::write_profile(&dir.path("wave.csv"), &r.wave.solution.profile)?;
        }
    }
    Ok(())
}

fn simulate_artifacts(cfg: &RunConfig, dir: &OutputDir, s: &mut Summary) -> Result<()> {
    let mut writer = SimWriter::new(dir)?;
    let run = simulation_run(cfg, &mut writer);
    let snaps = writer.finish()?;
    let run = run?;
    let o = &run.outcome;
    let g = *o.state.profile.grid();
    s.num("L", g.length());
    s.put("nodes", g.len());
    s.num("V_frame", run.params.speed);
    s.num("t_end", o.state.t);
    s.put("accepted_steps", o.stats.accepted);
    s.put("rejected_steps", o.stats.rejected);
    s.num("mass_initial", o.stats.initial_mass);
    s.num("max_mass_drift", o.stats.max_mass_drift);
    s.num("max_energy_increase", o.stats.max_energy_increase);
    if let Some(x) = o.stats.max_modified_energy_increase {
        s.num("max_modified_energy_increase", x);
    }
    if let Some(last) = o.series.last() {
        s.num("energy_final", last.report.energy);
        s.num("min_v_final", last.report.min_v);
        s.num("max_v_final", last.report.max_v);
    }
    let fin = &o.state.profile;
    let local_minima: Vec<String> = {
        let v = fin.values();
        let n = v.len();
        let mut idx: Vec<usize> = (0..n).filter(|&i| v[i] < v[(i + 1) % n] && v[i] <= v[(i + n - 1) % n]).collect();
        idx.sort_by(|a, b| v[*a].total_cmp(&v[*b]));
        idx.iter().take(4).map(|&i| format!("{:.4}", g.node(i))).collect()
    };
    s.put("lowest_minima_at", local_minima.join(" "));
    if run.params.has_gravity() && run.params.speed == 0.0 {
        s.num("peak_speed", o.peaks.speed(0.25).unwrap_or(f64::NAN));
    }
    if let Some(w) = &run.wave {
        put_wave(s, w, "wave_");
    }
    if let Some(pw) = &run.perturbation {
        s.num("perturbation_epsilon", pw.epsilon);
        s.num("perturbation_mass_defect", pw.mass_defect);
    }
    for (k, p) in run.plateaus.iter().take(4).enumerate() {
        s.num(&format!("plateau_{k}_lambda"), p.mean);
        s.num(&format!("plateau_{k}_fraction"), p.fraction);
        s.num(&format!("plateau_{k}_start"), p.start);
    }
    if let Some(l) = &run.lambda {
        output::write_file(&dir.path("lambda_final.csv"), &output::field_csv("xi,lambda", &g, l.values()))?;
    }
    for (k, (lam, prof)) in run.plateau_minimizers.iter().enumerate() {
        s.num(&format!("minimizer_{k}_lambda"), *lam);
        output::write_profile(&dir.path(&format!("minimizer_{k}.csv")), prof)?;
    }
    if run.params.has_gravity() {
        let frame = GravityFrame::periodic(fin, run.params.speed, &run.params)?;
        output::write_file(&dir.path("F_final.csv"), &output::field_csv("xi,F", &g, &frame.f))?;
    }

    let first = snaps.first().cloned().unwrap_or_default();
    let last = snaps.last().cloned().unwrap_or_default();
    let profiles = [(first.as_str(), 1, 2, "initial"), (last.as_str(), 1, 2, "final")];
    let plot = if run.params.has_gravity() {
        PlotScript::new("film profiles, modified energy and the potential rate", 3)
            .comment("data are unscaled; multiply column 4 by a small constant (e.g. 5e-5) to overlay it with column 9")
            .panel("xi", "v", &profiles)
            .panel("t", "modified energy", &[("diagnostics.csv", 1, 4, "modified energy")])
            .panel("t", "int v^2 F_t", &[("diagnostics.csv", 1, 9, "v2 F_t")])
            .render()
    } else {
        let names: Vec<(String, String)> = (0..run.plateau_minimizers.len())
            .map(|k| (format!("minimizer_{k}.csv"), format!("minimizer at plateau {k}")))
            .collect();
        let mut curves = profiles.to_vec();
        curves.extend(names.iter().map(|(f, t)| (f.as_str(), 1, 2, t.as_str())));
        PlotScript::new("film profiles, energy history and multiplier field", 3)
            .panel("xi", "v", &curves)
            .panel("t", "energy", &[("diagnostics.csv", 1, 3, "energy")])
            .panel("xi", "lambda", &[("lambda_final.csv", 1, 2, "lambda")])
            .render()
    };
    output::write_file(&dir.path("plot.gp"), &plot)?;
    Ok(())
}
