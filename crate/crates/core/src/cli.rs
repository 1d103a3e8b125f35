//! The `semistiff` command line.
//!
//! Exit codes: 0 success, 1 a validation check failed, 2 a numerical
//! method failed, 64 bad usage, 74 I/O failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::annulus::{dirichlet_energy, hopf_constant_check, AnnulusGrid};
use crate::bifurcate::{
    boundary_cover_check, branch_csv, branch_switch, continue_branch, newton_solve, nonsymmetry_metric,
    random_perturbation, state_mesh, trivial_noise_floor,
};
use crate::error::{Error, Result};
use crate::holo::{build_solution, make_zero_set, validate_solution};
use crate::lift::{
    conformality_residual, export_mesh, lift_catenoid_type, lift_helicoid_type, plane_symmetry_check,
    CatenoidHeight, HelicoidHeight, MeshFormat,
};
use crate::radial::{
    comparison_gap, hopf_constant, minimality_test, radial_energy, steklov_compatibility, threshold_table, Kind,
    RadialSolution,
};
use crate::spectrum::{
    bifurcation_instant, kernel_report, mu2_positive_check, radial_spectrum, stable_unstable_root, transversality,
};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "SEMISTIFF_OUT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "semistiff", version, about = "Semi-stiff harmonic maps on annuli and the minimal surfaces they lift to")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output directory (default: $SEMISTIFF_OUT, else the current directory)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print a JSON summary instead of a text line
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

/// Parameter grid `NRxNT`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridDims(pub usize, pub usize);

impl FromStr for GridDims {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected NRxNT, got {s:?}"))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("{v:?}: {e}"));
        Ok(GridDims(parse(a)?, parse(b)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Cat,
    Hel,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Cat => Kind::Catenoidal,
            KindArg::Hel => Kind::Helicoidal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Obj,
    Ply,
}

impl From<FormatArg> for MeshFormat {
    fn from(f: FormatArg) -> MeshFormat {
        match f {
            FormatArg::Obj => MeshFormat::Obj,
            FormatArg::Ply => MeshFormat::Ply,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Radial,
    Holo,
    Spectrum,
    Lift,
    Bifurcate,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Branch CSV and the first and last surfaces of the p = 2 branch
    BifurcationP2,
    /// Uniqueness thresholds rho'_p
    Thresholds,
    /// mu_1(t) along a ladder of t for p = 1, 2, 3
    Mu1Ladder,
    /// Catenoidal vs helicoidal energies against rho
    Energies,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Radial solutions u = f(r) e^{i p theta} with |u| = 1 on both circles:
    /// closed-form and quadrature energy, Hopf constant z^2 H_u, and the
    /// comparison with the degree-1 solution
    Radial(RadialArgs),
    /// Holomorphic minimizers z^q prod |x_i| f_{x_i}(z) of outer degree p
    /// and inner degree q < 0, validated by degree, zero count, energy
    /// pi (p + |q|) and Hopf constant 0
    Holo(HoloArgs),
    /// Radii rho'_p, roots of (p-1) rho^p + p rho^{p-1} - 1, below which
    /// u_p has larger energy than u_1 plus 2 pi (p - 1)
    Thresholds(ThresholdArgs),
    /// Eigenvalues of -w'' - 2p^2/cosh^2(pr) w on [-t, t] (Dirichlet), the
    /// radial part of the Jacobi operator of the p-covered catenoid
    Spectrum(SpectrumArgs),
    /// Instants t_k with mu_1(t_k) = -k^2, transversality of lambda_2 at
    /// t_1 and simplicity of the kernel
    Instants(InstantArgs),
    /// Non-rotational minimal surfaces bifurcating from the p-covered
    /// catenoid at t_1: Newton on H(X_t + u N_t) = 0 and continuation
    Bifurcate(BifurcateArgs),
    /// Lift a radial solution to the minimal surface (u, h) with
    /// H_u + (d_z h)^2 = 0 and export the mesh
    Lift(LiftArgs),
    /// Run a suite of invariant checks
    Verify(VerifyArgs),
    /// Regenerate a data set
    Repro(ReproArgs),
}

#[derive(Debug, Args)]
struct RadialArgs {
    #[arg(long)]
    p: i32,
    #[arg(long)]
    rho: f64,
    #[arg(long, value_enum, default_value_t = KindArg::Cat)]
    kind: KindArg,
    #[arg(long, default_value = "401x256")]
    grid: GridDims,
}

#[derive(Debug, Args)]
struct HoloArgs {
    #[arg(long)]
    p: i32,
    #[arg(long, allow_hyphen_values = true)]
    q: i32,
    #[arg(long)]
    rho: f64,
    #[arg(long, default_value_t = 1e-14)]
    eps: f64,
    #[arg(long, default_value = "201x256")]
    grid: GridDims,
    /// Zero seeds `re,im;re,im;...` (default: equally spaced)
    #[arg(long, allow_hyphen_values = true)]
    seeds: Option<String>,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    #[arg(long, default_value_t = 8)]
    pmax: i32,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    p: i32,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 2001)]
    n_grid: usize,
    /// Also list mu_j + n^2 for |n| <= n_max
    #[arg(long)]
    n_max: Option<u32>,
}

#[derive(Debug, Args)]
struct InstantArgs {
    #[arg(long)]
    p: i32,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Debug, Args)]
struct BifurcateArgs {
    #[arg(long, default_value_t = 2)]
    p: i32,
    #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
    amp: f64,
    #[arg(long, default_value_t = 10)]
    steps: usize,
    #[arg(long, default_value = "65x64")]
    grid: GridDims,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = FormatArg::Obj)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct LiftArgs {
    #[arg(long)]
    p: i32,
    #[arg(long)]
    rho: f64,
    #[arg(long, value_enum, default_value_t = KindArg::Cat)]
    kind: KindArg,
    #[arg(long, default_value = "81x128")]
    grid: GridDims,
    #[arg(long, value_enum, default_value_t = FormatArg::Obj)]
    format: FormatArg,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
}

#[derive(Debug, Args)]
struct ReproArgs {
    #[arg(long, value_enum)]
    figure: Figure,
}

/// Resolved settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub out_dir: PathBuf,
    pub json: bool,
    pub seed: u64,
}

impl RunConfig {
    fn from_common(c: &Common) -> Self {
        let out_dir = c
            .out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        Self {
            out_dir,
            json: c.json,
            seed: c.seed,
        }
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out_dir)?;
        let path = self.out_dir.join(name);
        fs::write(&path, contents)?;
        Ok(path)
    }

    fn path(&self, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.out_dir)?;
        Ok(self.out_dir.join(name))
    }
}

/// Result of one command: a one-line summary, named values, artifacts,
/// and whether every check passed.
#[derive(Debug, Default)]
struct Outcome {
    summary: String,
    values: serde_json::Map<String, Value>,
    artifacts: Vec<PathBuf>,
    failed: Vec<String>,
}

impl Outcome {
    fn value(&mut self, key: &str, v: impl Into<Value>) {
        self.values.insert(key.to_string(), v.into());
    }

    fn check(&mut self, name: &str, ok: bool) {
        if !ok {
            self.failed.push(name.to_string());
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::InvalidParameter(_) | Error::OutOfDomain { .. } | Error::NoInstant { .. } => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = RunConfig::from_common(&cli.common);
    let name = command_name(&cli.command);
    match run(&cli.command, &cfg) {
        Ok(out) => {
            let status = if out.failed.is_empty() { "ok" } else { "fail" };
            if cfg.json {
                let v = json!({
                    "command": name,
                    "status": status,
                    "failed": out.failed,
                    "values": out.values,
                    "artifacts": out.artifacts,
                });
                println!("{v}");
            } else if out.failed.is_empty() {
                println!("{name}: {}", out.summary);
            } else {
                println!("{name}: FAIL [{}] {}", out.failed.join(", "), out.summary);
            }
            if out.failed.is_empty() {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }
        Err(e) => {
            if cfg.json {
                println!("{}", json!({"command": name, "status": "error", "error": e.to_string()}));
            } else {
                eprintln!("{name}: error: {e}");
            }
            exit_code(&e)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Radial(_) => "radial",
        Command::Holo(_) => "holo",
        Command::Thresholds(_) => "thresholds",
        Command::Spectrum(_) => "spectrum",
        Command::Instants(_) => "instants",
        Command::Bifurcate(_) => "bifurcate",
        Command::Lift(_) => "lift",
        Command::Verify(_) => "verify",
        Command::Repro(_) => "repro",
    }
}

fn run(c: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match c {
        Command::Radial(a) => run_radial(a, cfg),
        Command::Holo(a) => run_holo(a, cfg),
        Command::Thresholds(a) => run_thresholds(a.pmax, cfg),
        Command::Spectrum(a) => run_spectrum(a, cfg),
        Command::Instants(a) => run_instants(a, cfg),
        Command::Bifurcate(a) => run_bifurcate(a, cfg),
        Command::Lift(a) => run_lift(a, cfg),
        Command::Verify(a) => run_verify(a, cfg),
        Command::Repro(a) => run_repro(a.figure, cfg),
    }
}

fn annulus_grid(rho: f64, g: GridDims) -> Result<AnnulusGrid> {
    AnnulusGrid::new(rho, g.0, g.1)
}

fn run_radial(a: &RadialArgs, cfg: &RunConfig) -> Result<Outcome> {
    let kind: Kind = a.kind.into();
    let sol = RadialSolution::new(a.p, a.rho, kind)?;
    let grid = annulus_grid(a.rho, a.grid)?;
    let field = sol.field();
    let exact = radial_energy(a.p, a.rho, kind)?;
    let quad = dirichlet_energy(&field, &grid);
    let hopf = hopf_constant_check(&field, &grid);
    let c = hopf_constant(a.p, a.rho, kind);
    let mut out = Outcome::default();
    let rel = (quad - exact).abs() / exact;
    out.check("energy", rel < 1e-6);
    out.check("hopf_c", (hopf.c_estimate - c).abs() < 1e-6);
    out.check("hopf_imag", hopf.max_imag_part < 1e-8);
    let mut csv = String::from("quantity,value\n");
    csv.push_str(&format!("energy_closed_form,{exact:.15e}\nenergy_quadrature,{quad:.15e}\nhopf_c,{c:.15e}\nhopf_c_estimate,{:.15e}\n", hopf.c_estimate));
    if a.p >= 2 && kind == Kind::Catenoidal {
        let gap = comparison_gap(a.p, a.rho)?;
        csv.push_str(&format!("comparison_gap,{gap:.15e}\nminimality,{:?}\n", minimality_test(a.p, a.rho)?));
        out.value("comparison_gap", gap);
    }
    let stem = format!("radial_{}_p{}_rho{}", kind, a.p, a.rho);
    out.artifacts.push(cfg.write(&format!("{stem}.csv"), &csv)?);
    out.artifacts.push(cfg.write(&format!("{stem}.json"), &field.to_json()?)?);
    out.value("energy", exact);
    out.value("energy_quadrature", quad);
    out.value("hopf_c", c);
    out.summary = format!("E = {exact:.12} (quadrature rel. err {rel:.1e}), c = {c:.12}");
    Ok(out)
}

fn parse_seeds(s: &str) -> Result<Vec<C64>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (re, im) = p
                .split_once(',')
                .ok_or_else(|| Error::InvalidParameter(format!("seed {p:?} is not re,im")))?;
            let f = |v: &str| v.trim().parse::<f64>().map_err(|e| Error::InvalidParameter(format!("{v:?}: {e}")));
            Ok(C64::new(f(re)?, f(im)?))
        })
        .collect()
}

fn run_holo(a: &HoloArgs, cfg: &RunConfig) -> Result<Outcome> {
    let seeds = a.seeds.as_deref().map(parse_seeds).transpose()?.unwrap_or_default();
    let zs = make_zero_set(a.p, a.q, a.rho, &seeds)?;
    let sol = build_solution(zs, a.eps)?;
    let grid = annulus_grid(a.rho, a.grid)?;
    let report = validate_solution(&sol, &grid);
    let mut out = Outcome::default();
    for c in &report.checks {
        out.check(&c.name, c.pass);
        out.value(&c.name, c.value);
    }
    let stem = format!("holo_p{}_q{}_rho{}", a.p, a.q, a.rho);
    out.artifacts.push(cfg.write(&format!("{stem}.csv"), &report.to_csv()?)?);
    out.artifacts.push(cfg.write(&format!("{stem}_zeros.json"), &sol.zero_set().to_json()?)?);
    out.summary = format!(
        "{} zeros, truncation order {}, {}/{} checks pass",
        sol.zero_set().zeros().len(),
        sol.truncation_order(),
        report.checks.iter().filter(|c| c.pass).count(),
        report.checks.len()
    );
    Ok(out)
}

fn run_thresholds(pmax: i32, cfg: &RunConfig) -> Result<Outcome> {
    let table = threshold_table(pmax)?;
    let mut out = Outcome::default();
    let values: Vec<f64> = table
        .lines()
        .skip(1)
        .filter_map(|l| l.split(',').nth(1)?.parse().ok())
        .collect();
    out.check("monotone", values.windows(2).all(|w| w[0] < w[1]));
    out.value("rho_prime", values.clone());
    out.artifacts.push(cfg.write("thresholds.csv", &table)?);
    if !cfg.json {
        print!("{table}");
    }
    out.summary = format!("rho'_2..rho'_{pmax} written, rho'_2 = {:.12}", values.first().copied().unwrap_or(f64::NAN));
    Ok(out)
}

fn run_spectrum(a: &SpectrumArgs, cfg: &RunConfig) -> Result<Outcome> {
    let s = radial_spectrum(a.p, a.t, a.k, a.n_grid)?;
    let mut out = Outcome::default();
    let stem = format!("spectrum_p{}_t{}", a.p, a.t);
    out.artifacts.push(cfg.write(&format!("{stem}.csv"), &s.to_csv())?);
    if let Some(n_max) = a.n_max {
        let mut csv = String::from("lambda,radial_index,n\n");
        for e in s.full(n_max) {
            csv.push_str(&format!("{:.15e},{},{}\n", e.lambda, e.radial_index, e.n));
        }
        out.artifacts.push(cfg.write(&format!("{stem}_full.csv"), &csv)?);
    }
    out.value("mu", s.mus.clone());
    out.value("refinement_estimate", s.refinement_estimate);
    out.summary = format!("mu_1 = {:.12}, refinement estimate {:.1e}", s.mus[0], s.refinement_estimate);
    Ok(out)
}

fn run_instants(a: &InstantArgs, cfg: &RunConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    if a.p < 1 {
        return Err(Error::InvalidParameter(format!("p = {} must be >= 1", a.p)));
    }
    let mut csv = String::from("k,t_k,p_t_k\n");
    let mut ts = Vec::new();
    for k in 0..a.p {
        let t = bifurcation_instant(a.p, k, a.tol)?;
        csv.push_str(&format!("{k},{t:.15e},{:.15e}\n", a.p as f64 * t));
        ts.push(t);
    }
    out.check("t0", (a.p as f64 * ts[0] - stable_unstable_root()).abs() < 1e-5);
    if a.p >= 2 {
        let t1 = ts[1];
        let d = transversality(a.p, t1, 1e-3);
        let mu2 = mu2_positive_check(a.p, t1)?;
        let kernel = kernel_report(a.p, t1, 1e-6)?;
        out.check("transversality", d.is_ok());
        out.check("mu2_positive", mu2);
        out.check("symmetric_kernel_simple", kernel.symmetric_dimension == 1);
        if let Ok(d) = d {
            out.value("dlambda2_dt", d);
        }
        out.value("kernel_dimension", kernel.dimension);
        for k in 2..a.p {
            let rep = kernel_report(a.p, ts[k as usize], 1e-6)?;
            out.value(&format!("kernel_dimension_t{k}"), rep.dimension);
            out.value(&format!("symmetric_kernel_dimension_t{k}"), rep.symmetric_dimension);
        }
    }
    out.value("t", ts.clone());
    out.artifacts.push(cfg.write(&format!("instants_p{}.csv", a.p), &csv)?);
    out.summary = format!("p t_0 = {:.10}{}", a.p as f64 * ts[0], ts.get(1).map(|t| format!(", t_1 = {t:.10}")).unwrap_or_default());
    Ok(out)
}

fn run_bifurcate(a: &BifurcateArgs, cfg: &RunConfig) -> Result<Outcome> {
    let start = branch_switch(a.p, a.amp, a.tol, a.grid.0, a.grid.1)?;
    let mut states = vec![start.clone()];
    if a.steps > 0 && a.amp != 0.0 {
        states.extend(continue_branch(&start, a.steps, a.amp.abs(), a.tol)?);
    }
    let mut out = Outcome::default();
    let floor = trivial_noise_floor(a.p, start.t, a.grid.0, a.grid.1)?;
    let ns = nonsymmetry_metric(&start);
    let cover = boundary_cover_check(&start);
    out.check("residual", start.residual_norm < a.tol);
    if a.amp != 0.0 {
        out.check("nonsymmetry", ns.variance > 10.0 * floor);
        out.check("both_signs", ns.both_signs());
    }
    out.check("boundary_cover", cover.pass);
    out.artifacts.push(cfg.write(&format!("branch_p{}.csv", a.p), &branch_csv(&states))?);
    let last = states.last().expect("at least the start state");
    let fmt: MeshFormat = a.format.into();
    let path = cfg.path(&format!("bifurcated_p{}.{}", a.p, fmt.extension()))?;
    export_mesh(&state_mesh(last)?, fmt, &path)?;
    out.artifacts.push(path);
    out.value("t", start.t);
    out.value("amplitude", start.amplitude);
    out.value("residual", start.residual_norm);
    out.value("nonsymmetry", ns.variance);
    out.value("noise_floor", floor);
    out.summary = format!(
        "{} states, t = {:.10}, |H| = {:.1e}, nonsymmetry {:.3e} (floor {:.1e})",
        states.len(),
        start.t,
        start.residual_norm,
        ns.variance,
        floor
    );
    Ok(out)
}

fn run_lift(a: &LiftArgs, cfg: &RunConfig) -> Result<Outcome> {
    let kind: Kind = a.kind.into();
    let grid = annulus_grid(a.rho, a.grid)?;
    let field = RadialSolution::new(a.p, a.rho, kind)?.field();
    let c = hopf_constant(a.p, a.rho, kind);
    let mut out = Outcome::default();
    let (mesh, residual) = match kind {
        Kind::Catenoidal => (lift_catenoid_type(&field, &grid)?, conformality_residual(&field, &CatenoidHeight(c), &grid)),
        Kind::Helicoidal => (lift_helicoid_type(&field, &grid)?, conformality_residual(&field, &HelicoidHeight(c), &grid)),
    };
    out.check("conformality", residual < 1e-6);
    if kind == Kind::Catenoidal {
        let sym = plane_symmetry_check(&mesh, c.abs().sqrt() * a.rho.ln());
        out.check("plane_symmetry", sym < mesh.resolution());
        out.value("plane_symmetry", sym);
    }
    let fmt: MeshFormat = a.format.into();
    let path = cfg.path(&format!("lift_{}_p{}_rho{}.{}", kind, a.p, a.rho, fmt.extension()))?;
    export_mesh(&mesh, fmt, &path)?;
    out.artifacts.push(path);
    out.value("conformality_residual", residual);
    out.value("c", c);
    out.summary = format!("{} vertices, conformality residual {residual:.1e}", mesh.vertices.len());
    Ok(out)
}

fn run_verify(a: &VerifyArgs, cfg: &RunConfig) -> Result<Outcome> {
    let mut out = Outcome::default();
    let all = a.suite == Suite::All;
    let rho = a.rho;
    let mut checks: Vec<(String, bool)> = Vec::new();
    if all || a.suite == Suite::Radial {
        let grid = AnnulusGrid::new(rho, 401, 256)?;
        for p in 1..=3 {
            for kind in [Kind::Catenoidal, Kind::Helicoidal] {
                let f = RadialSolution::new(p, rho, kind)?.field();
                let e = radial_energy(p, rho, kind)?;
                checks.push((format!("radial_energy_{kind}_p{p}"), ((dirichlet_energy(&f, &grid) - e) / e).abs() < 1e-6));
                let h = hopf_constant_check(&f, &grid);
                checks.push((
                    format!("radial_hopf_{kind}_p{p}"),
                    h.max_imag_part < 1e-8 && (h.c_estimate - hopf_constant(p, rho, kind)).abs() < 1e-6,
                ));
            }
        }
        let sg = AnnulusGrid::new(rho, 11, 128)?;
        for p in 1..=3 {
            for q in 1..=3 {
                for alpha in [C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 1.0)] {
                    let v = steklov_compatibility(p, q, alpha, rho, &sg)?;
                    let on = p == q && alpha.im == 0.0;
                    checks.push((format!("steklov_p{p}_q{q}_a{alpha}"), if on { v < 1e-8 } else { v > 1e-2 }));
                }
            }
        }
    }
    if all || a.suite == Suite::Holo {
        let grid = AnnulusGrid::new(rho, 201, 256)?;
        for (p, q) in [(1, -1), (2, -1), (2, -2)] {
            let sol = build_solution(make_zero_set(p, q, rho, &[])?, 1e-14)?;
            checks.push((format!("holo_p{p}_q{q}"), validate_solution(&sol, &grid).all_pass()));
        }
    }
    if all || a.suite == Suite::Spectrum {
        for p in 1..=3 {
            let t0 = bifurcation_instant(p, 0, 1e-10)?;
            checks.push((format!("t0_p{p}"), (p as f64 * t0 - stable_unstable_root()).abs() < 1e-5));
        }
        let t1 = bifurcation_instant(2, 1, 1e-10)?;
        checks.push(("transversality_p2".into(), transversality(2, t1, 1e-3).is_ok()));
        checks.push(("mu2_positive_p2".into(), mu2_positive_check(2, t1)?));
        checks.push(("no_t1_for_p1".into(), bifurcation_instant(1, 1, 1e-8).is_err()));
    }
    if all || a.suite == Suite::Lift {
        let grid = AnnulusGrid::new(rho, 81, 128)?;
        for kind in [Kind::Catenoidal, Kind::Helicoidal] {
            let f = RadialSolution::new(1, rho, kind)?.field();
            let c = hopf_constant(1, rho, kind);
            let r = match kind {
                Kind::Catenoidal => conformality_residual(&f, &CatenoidHeight(c), &grid),
                Kind::Helicoidal => conformality_residual(&f, &HelicoidHeight(c), &grid),
            };
            checks.push((format!("conformality_{kind}"), r < 1e-6));
        }
    }
    if all || a.suite == Suite::Bifurcate {
        let (n_r, nt) = (33, 32);
        let st = branch_switch(2, 1e-2, 1e-10, n_r, nt)?;
        let floor = trivial_noise_floor(2, st.t, n_r, nt)?;
        let ns = nonsymmetry_metric(&st);
        checks.push(("branch_residual".into(), st.residual_norm < 1e-6));
        checks.push(("branch_nonsymmetry".into(), ns.variance > 10.0 * floor && ns.both_signs()));
        checks.push(("branch_cover".into(), boundary_cover_check(&st).pass));
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let t0 = stable_unstable_root();
        let mut collapsed = true;
        for t in [0.5 * t0, 2.0 * t0] {
            for _ in 0..3 {
                let g = random_perturbation(1, t, 17, 16, 1e-3, &mut rng)?;
                collapsed &= newton_solve(&g, 1e-12, 20).map(|u| u.l2_norm() < 1e-8).unwrap_or(false);
            }
        }
        checks.push(("p1_collapses_to_catenoid".into(), collapsed));
    }
    let mut csv = String::from("check,pass\n");
    for (name, ok) in &checks {
        csv.push_str(&format!("{name},{ok}\n"));
        out.check(name, *ok);
        out.value(name, *ok);
    }
    out.artifacts.push(cfg.write(&format!("verify_{:?}.csv", a.suite).to_lowercase(), &csv)?);
    out.summary = format!("{}/{} checks pass", checks.iter().filter(|c| c.1).count(), checks.len());
    Ok(out)
}

fn run_repro(fig: Figure, cfg: &RunConfig) -> Result<Outcome> {
    match fig {
        Figure::Thresholds => run_thresholds(8, cfg),
        Figure::BifurcationP2 => {
            let (n_r, nt) = (65, 64);
            let start = branch_switch(2, 1e-2, 1e-10, n_r, nt)?;
            let mut states = vec![start.clone()];
            states.extend(continue_branch(&start, 10, 1e-2, 1e-10)?);
            let mut out = Outcome::default();
            out.artifacts.push(cfg.write("bifurcation_p2_branch.csv", &branch_csv(&states))?);
            for (label, st) in [("first", &states[0]), ("last", states.last().expect("nonempty"))] {
                let path = cfg.path(&format!("bifurcation_p2_{label}.obj"))?;
                export_mesh(&state_mesh(st)?, MeshFormat::Obj, &path)?;
                out.artifacts.push(path);
            }
            let floor = trivial_noise_floor(2, start.t, n_r, nt)?;
            out.check("residual", states.iter().all(|s| s.residual_norm < 1e-6));
            out.check("nonsymmetry", states.iter().all(|s| nonsymmetry_metric(s).variance > 10.0 * floor));
            out.summary = format!("{} branch states, t from {:.8} to {:.8}", states.len(), start.t, states.last().map(|s| s.t).unwrap_or(start.t));
            Ok(out)
        }
        Figure::Mu1Ladder => {
            let mut csv = String::from("p,t,mu1\n");
            let mut out = Outcome::default();
            for p in 1..=3 {
                let mut prev = f64::INFINITY;
                let mut monotone = true;
                for k in 0..20 {
                    let t = (0.2 + 7.8 * k as f64 / 19.0) / p as f64;
                    let mu = radial_spectrum(p, t, 1, 2001)?.mus[0];
                    monotone &= mu < prev;
                    prev = mu;
                    csv.push_str(&format!("{p},{t:.10},{mu:.12e}\n"));
                }
                out.check(&format!("monotone_p{p}"), monotone);
            }
            out.artifacts.push(cfg.write("mu1_ladder.csv", &csv)?);
            out.summary = "mu_1(t) ladder for p = 1, 2, 3".into();
            Ok(out)
        }
        Figure::Energies => {
            let mut csv = String::from("p,rho,energy_cat,energy_hel,comparison_gap\n");
            for p in 1..=4 {
                for k in 1..40 {
                    let rho = k as f64 / 40.0;
                    csv.push_str(&format!(
                        "{p},{rho},{:.12e},{:.12e},{:.12e}\n",
                        radial_energy(p, rho, Kind::Catenoidal)?,
                        radial_energy(p, rho, Kind::Helicoidal)?,
                        comparison_gap(p, rho)?
                    ));
                }
            }
            let mut out = Outcome::default();
            out.artifacts.push(cfg.write("energies.csv", &csv)?);
            out.summary = "radial energies for p = 1..4".into();
            Ok(out)
        }
    }
}

/// Writes `contents` below `dir`, creating it if needed.
pub fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}
