use std::io::Write;
use std::path::{Path, PathBuf};

use fracjet::dynamics::{integrate, DynamicsError, GaugeChoice, PhaseState, Trajectory};
use fracjet::kernel::oracle::kernel_by_quadrature;
use fracjet::kernel::{
    discretize_action, gaussian_kernel_eval, stationary_phase_check, KernelError, PathGrid,
};
use fracjet::{analyze, AnalysisReport};
use num_complex::Complex64;

use crate::model::{ModelError, ModelFile};
use crate::report::{json_report, text_report, Derived};

pub const EXIT_PARSE: u8 = 1;
pub const EXIT_ANALYSIS: u8 = 2;
pub const EXIT_DYNAMICS: u8 = 3;
pub const EXIT_KERNEL: u8 = 4;
pub const EXIT_SELFTEST: u8 = 5;

/// Largest slice count for which the quadrature oracle is run.
pub const ORACLE_MAX_SLICES: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::new(EXIT_PARSE, e.to_string())
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        CliError::new(EXIT_DYNAMICS, e.to_string())
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        CliError::new(EXIT_KERNEL, e.to_string())
    }
}

fn io(e: std::io::Error) -> CliError {
    CliError::new(EXIT_PARSE, format!("i/o error: {e}"))
}

pub fn load_and_analyze(path: &Path) -> Result<(ModelFile, AnalysisReport), CliError> {
    let file = ModelFile::load(path)?;
    let model = file.model()?;
    let report = analyze(&model).map_err(|e| CliError::new(EXIT_ANALYSIS, e.to_string()))?;
    Ok((file, report))
}

pub fn cmd_analyze(
    model: &Path,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (file, report) = load_and_analyze(model)?;
    let derived = Derived::new(&report);
    out.write_all(text_report(&file, &report, &derived).as_bytes())
        .map_err(io)?;
    if let Some(path) = out_path {
        let json = serde_json::to_string_pretty(&json_report(&file, &report, &derived))
            .expect("report serializes");
        std::fs::write(path, json + "\n").map_err(io)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulateConfig {
    pub init: String,
    pub dt: f64,
    pub t_end: f64,
    pub gauge: String,
    pub csv: Option<PathBuf>,
}

/// Fixed six-decimal rendering without a negative zero.
pub fn fixed6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn run(
    report: &AnalysisReport,
    init: &str,
    gauge: &str,
    dt: f64,
    t_end: f64,
) -> Result<Trajectory, CliError> {
    let init = PhaseState::parse(init, report.n())?;
    let gauge = GaugeChoice::from_name(gauge, report.singular_idx())?;
    Ok(integrate(report, &gauge, &init, dt, t_end)?)
}

pub fn cmd_simulate(
    model: &Path,
    cfg: &SimulateConfig,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let (_, report) = load_and_analyze(model)?;
    let traj = run(&report, &cfg.init, &cfg.gauge, cfg.dt, cfg.t_end)?;
    if let Some(path) = &cfg.csv {
        std::fs::write(path, traj.to_csv()).map_err(io)?;
    }
    let last = traj.last();
    writeln!(out, "t_end = {}", last.t).map_err(io)?;
    writeln!(out, "steps = {}", traj.samples.len() - 1).map_err(io)?;
    writeln!(out, "S = {}", fixed6(last.action)).map_err(io)?;
    writeln!(out, "max constraint residual = {:.3e}", traj.max_residual()).map_err(io)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelConfig {
    pub slices: usize,
    pub t_end: f64,
    /// Defaults to unit velocity on the first regular coordinate.
    pub init: Option<String>,
    /// Defaults to the first regular coordinate.
    pub coords: Option<Vec<u32>>,
    pub dt: f64,
    pub hbar: f64,
}

fn verdict(ok: bool, bound: &str) -> String {
    if ok {
        bound.to_string()
    } else {
        format!("NOT {bound}")
    }
}

fn complex(z: Complex64) -> String {
    format!(
        "{:.9e} {} {:.9e}i",
        z.re,
        if z.im < 0.0 { "-" } else { "+" },
        z.im.abs()
    )
}

pub fn cmd_kernel(model: &Path, cfg: &KernelConfig, out: &mut dyn Write) -> Result<(), CliError> {
    let (_, report) = load_and_analyze(model)?;
    let first = *report.regular_idx().first().ok_or_else(|| {
        CliError::new(
            EXIT_KERNEL,
            "unsupported kernel: model has no regular coordinate",
        )
    })?;
    let coords = cfg.coords.clone().unwrap_or_else(|| vec![first]);
    let init = cfg.init.clone().unwrap_or_else(|| format!("v{first}=1"));
    if cfg.slices == 0 {
        return Err(KernelError::GridError("at least one slice is required".into()).into());
    }
    let traj = run(&report, &init, "zero", cfg.dt, cfg.t_end)?;
    let grid = PathGrid::from_trajectory(&traj, cfg.t_end, cfg.slices, coords.clone())?;
    let action = discretize_action(&report, &grid)?;
    let qam = action.quadratic_form(&grid)?;
    let coord_list: Vec<String> = coords.iter().map(|c| format!("v{c}")).collect();
    writeln!(
        out,
        "grid: {} slices on [0, {}], coordinates {}, {} interior nodes",
        cfg.slices,
        cfg.t_end,
        coord_list.join(", "),
        grid.interior_len()
    )
    .map_err(io)?;
    writeln!(out, "discrete action S = {:.9}", action.value(&grid)).map_err(io)?;
    let grad = stationary_phase_check(&action, &grid);
    writeln!(
        out,
        "stationary-phase max |∇S| = {grad:.3e} ({})",
        verdict(grad < 1e-6, "< 1e-6")
    )
    .map_err(io)?;
    let gauss = gaussian_kernel_eval(&qam, cfg.hbar)?;
    writeln!(out, "gaussian kernel = {}", complex(gauss)).map_err(io)?;
    if cfg.slices <= ORACLE_MAX_SLICES {
        let quad = kernel_by_quadrature(&action, &grid, cfg.hbar)?;
        let rel = (gauss - quad).norm() / gauss.norm();
        writeln!(out, "quadrature kernel = {}", complex(quad)).map_err(io)?;
        writeln!(
            out,
            "gaussian vs quadrature rel err = {rel:.3e} ({})",
            verdict(rel <= 1e-6, "≤ 1e-6")
        )
        .map_err(io)?;
    }
    Ok(())
}

pub fn cmd_selftest(out: &mut dyn Write) -> Result<(), CliError> {
    let checks = crate::selftest::all_checks();
    for c in &checks {
        writeln!(out, "{c}").map_err(io)?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::new(
            EXIT_SELFTEST,
            format!("{failed} check(s) failed"),
        ));
    }
    Ok(())
}
