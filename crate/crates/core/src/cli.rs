//! The `fracdg` command line: `run`, `convergence`, `weights-audit`, `properties` and `oracle`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 solver abort, 3 configuration error, 4 audit failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::study::{convergence_study, oracle_values};
use crate::audit::{
    admissibility, comparison_defect, conservation_drift, flux_lattice, monitored_run, weight_lemmas, weight_oracle_table,
    with_shifted_range, AuditLine, ENTROPY_TOL,
};
use crate::config::{LoadedConfig, RunConfig};
use crate::error::Error;
use crate::flux::{ConvectiveFlux, DdgFluxParams};
use crate::quadrature::GaussLegendre;
use crate::solver::explicit::DiffusionForm;
use crate::solver::grid::Boundary;
use crate::solver::run::{run, Scheme, SchemeKind, Snapshot};

pub const EXIT_IO: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;
pub const EXIT_AUDIT: i32 = 4;

/// Relative tolerance of closed-form weights against the quadrature oracle.
pub const WEIGHT_ORACLE_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "fracdg", version, about = "DG solvers for convection-diffusion with a fractional Laplacian")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; overrides `[output] dir` (default `out`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `[output] seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Advance one configuration to `final_time`; writes snapshots, the ledger and entropy rows.
    Run(CommonArgs),
    /// Grid-refinement study over `[grid] grids`.
    Convergence(CommonArgs),
    /// Closed-form cell weights against the quadrature oracle.
    WeightsAudit(CommonArgs),
    /// Weight, flux, admissibility, conservation, comparison, monitor and entropy audits.
    Properties(CommonArgs),
    /// Fourier solution of a linear problem at the cell centres of `[grid] inv_dx`.
    Oracle(CommonArgs),
}

/// A failed command with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) => EXIT_CONFIG,
            Error::Io(_) => EXIT_IO,
            _ => EXIT_SOLVER,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

struct Context {
    cfg: RunConfig,
    sha256: String,
    seed: u64,
    out: PathBuf,
    command: &'static str,
}

impl Context {
    fn new(args: &CommonArgs, command: &'static str) -> std::result::Result<Self, Failure> {
        if !args.config.exists() {
            return Err(Failure::new(EXIT_CONFIG, format!("config file {} not found", args.config.display())));
        }
        let loaded = LoadedConfig::load(&args.config)?;
        let seed = args.seed.unwrap_or(loaded.config.output.seed);
        let out = args.out.clone().or_else(|| loaded.config.output.dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
        std::fs::create_dir_all(&out)?;
        Ok(Context { cfg: loaded.config, sha256: loaded.sha256, seed, out, command })
    }

    /// CSV writer whose first line records the command, config hash and seed.
    fn csv(&self, name: &str, extra: &[(&str, String)]) -> std::result::Result<csv::Writer<BufWriter<File>>, Failure> {
        let mut f = BufWriter::new(File::create(self.out.join(name))?);
        write!(f, "# fracdg {} config_sha256={} seed={}", self.command, self.sha256, self.seed)?;
        for (k, v) in extra {
            write!(f, " {k}={v}")?;
        }
        writeln!(f)?;
        Ok(csv::Writer::from_writer(f))
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

fn write_snapshot(ctx: &Context, name: &str, snap: &Snapshot, grid: &crate::solver::grid::Grid) -> CmdResult {
    let k = snap.state.degree;
    let mut w = ctx.csv(name, &[("t", snap.t.to_string())])?;
    let mut header = vec!["x_center".to_string()];
    if k == 0 {
        header.push("u".into());
    } else {
        header.extend((0..=k).map(|p| format!("mode_{p}")));
    }
    w.write_record(&header)?;
    for i in 0..grid.cells {
        let mut row = vec![grid.center(i).to_string()];
        row.extend(snap.state.cell(i).iter().map(|c| c.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    if k > 0 {
        let nodes = GaussLegendre::new(k + 1);
        let mut w = ctx.csv(&name.replace(".csv", "_nodes.csv"), &[("t", snap.t.to_string())])?;
        w.write_record(["x", "u"])?;
        for i in 0..grid.cells {
            for xi in &nodes.nodes {
                let x = grid.center(i) + 0.5 * grid.dx * xi;
                w.write_record([x.to_string(), snap.state.eval_ref(i, *xi).to_string()])?;
            }
        }
        w.flush()?;
    }
    Ok(())
}

fn cmd_run(ctx: &Context) -> CmdResult {
    let problem = ctx.cfg.problem()?;
    let grid = ctx.cfg.grid(&problem, ctx.cfg.grid.inv_dx)?;
    let opts = ctx.cfg.run_options()?;
    let tr = run(&problem, &grid, &opts)?;
    for (j, s) in tr.snapshots.iter().enumerate() {
        write_snapshot(ctx, &format!("snapshot_{j:03}.csv"), s, &grid)?;
    }
    let last = Snapshot { t: tr.t_final, state: tr.final_state.clone() };
    write_snapshot(ctx, "final.csv", &last, &grid)?;

    let mut w = ctx.csv("ledger.csv", &[("dt", tr.dt.to_string()), ("scheme", tr.scheme.to_string())])?;
    w.write_record(["step", "t", "mass", "linf", "bv", "l1_time_increment", "min_entropy_residual"])?;
    for r in &tr.ledger {
        w.write_record([
            r.step.to_string(),
            r.t.to_string(),
            r.mass.to_string(),
            r.linf.to_string(),
            r.bv.to_string(),
            r.l1_time_increment.to_string(),
            if r.min_entropy_residual.is_nan() { String::new() } else { r.min_entropy_residual.to_string() },
        ])?;
    }
    w.flush()?;
    if !tr.entropy.is_empty() {
        let mut w = ctx.csv("entropy.csv", &[])?;
        w.write_record(["step", "k_level", "worst_cell", "residual"])?;
        for r in &tr.entropy {
            w.write_record([r.step.to_string(), r.k_level.to_string(), r.worst_cell.to_string(), r.residual.to_string()])?;
        }
        w.flush()?;
    }
    eprintln!("{}: {} steps of dt = {:e} to t = {}", tr.scheme, tr.steps, tr.dt, tr.t_final);
    if tr.mass_change != 0.0 {
        eprintln!("mass change {:e}", tr.mass_change);
    }
    if let Some(l) = tr.c12_lipschitz {
        eprintln!("sampled Lipschitz constant of c12: {l}");
    }
    Ok(())
}

fn cmd_convergence(ctx: &Context) -> CmdResult {
    let problem = ctx.cfg.problem()?;
    let grids = if ctx.cfg.grid.grids.is_empty() { vec![ctx.cfg.grid.inv_dx] } else { ctx.cfg.grid.grids.clone() };
    let setup = ctx.cfg.study_setup(&problem);
    let rep = convergence_study(&problem, &grids, &setup)?;
    let mut w = ctx.csv("convergence.csv", &[("comparison", format!("\"{}\"", rep.comparison))])?;
    w.write_record(["dx", "E1", "R1", "alpha1", "E2", "R2", "alpha2", "reference", "scheme", "flux", "lambda", "b", "T"])?;
    for r in &rep.rows {
        w.write_record([
            r.dx.to_string(),
            r.e1.to_string(),
            r.r1.to_string(),
            opt(r.alpha1),
            r.e2.to_string(),
            r.r2.to_string(),
            opt(r.alpha2),
            rep.reference.clone(),
            rep.scheme.clone(),
            rep.flux.clone(),
            rep.lambda.to_string(),
            rep.b.to_string(),
            rep.final_time.to_string(),
        ])?;
    }
    w.flush()?;
    for r in &rep.rows {
        eprintln!("dx = {:<8} E1 = {:.4e} alpha1 = {:>6}", r.dx, r.e1, r.alpha1.map_or("-".into(), |a| format!("{a:.2}")));
    }
    Ok(())
}

fn cmd_weights_audit(ctx: &Context) -> CmdResult {
    let problem = ctx.cfg.problem()?;
    let dx = 1.0 / ctx.cfg.grid.inv_dx as f64;
    let table = weight_oracle_table(problem.lambda(), dx, ctx.cfg.output.audit_offsets)?;
    let mut w = ctx.csv("weights_audit.csv", &[("lambda", problem.lambda().to_string()), ("dx", dx.to_string())])?;
    w.write_record(["offset", "G_d", "oracle_value", "abs_err", "rel_err"])?;
    for (d, g, o, a, r) in &table {
        w.write_record([d.to_string(), g.to_string(), o.to_string(), a.to_string(), r.to_string()])?;
    }
    w.flush()?;
    let worst = table.iter().map(|t| t.4).fold(0.0, f64::max);
    eprintln!("largest relative error {worst:e} over {} offsets", table.len());
    if worst > WEIGHT_ORACLE_TOL {
        return Err(Failure::new(EXIT_AUDIT, format!("weights audit failed: relative error {worst:e} > {WEIGHT_ORACLE_TOL:e}")));
    }
    Ok(())
}

/// Audits of a configuration, in a fixed order.
pub fn property_audits(cfg: &RunConfig, seed: u64) -> crate::Result<Vec<AuditLine>> {
    let problem = cfg.problem()?;
    let inv_dx = cfg.grid.inv_dx;
    let mut lines = Vec::new();

    let weight_names = ["weights_row_sum", "weights_symmetry", "weights_nonnegative", "weights_diagonal", "weights_oracle"];
    if problem.b() == 0.0 {
        lines.extend(weight_names.iter().map(|n| AuditLine::skipped(*n)));
    } else {
        let l = weight_lemmas(problem.lambda(), inv_dx)?;
        let table = weight_oracle_table(problem.lambda(), 1.0 / inv_dx as f64, cfg.output.audit_offsets)?;
        let worst = table.iter().map(|t| t.4).fold(0.0, f64::max);
        lines.push(AuditLine::at_most(weight_names[0], l.row_sum, 1e-12));
        lines.push(AuditLine::at_most(weight_names[1], l.asymmetry, 0.0));
        lines.push(AuditLine::at_most(weight_names[2], l.negative_off_diagonal, 0.0));
        lines.push(AuditLine::at_most(weight_names[3], l.diagonal, 1e-10));
        lines.push(AuditLine::at_most(weight_names[4], worst, WEIGHT_ORACLE_TOL));
    }

    let flux = ConvectiveFlux::for_problem(cfg.scheme.flux, &problem)?;
    let (lo, hi) = problem.derived.state_range;
    lines.push(AuditLine::at_most("flux_monotonicity", flux_lattice(&flux, lo, hi, 200), 1e-8));

    if cfg.scheme.kind == SchemeKind::LdgK0 {
        lines.push(AuditLine::skipped("ddg_admissibility"));
    } else {
        let params = match cfg.ddg_params()? {
            Some(p) => p,
            None => DdgFluxParams::defaults(cfg.scheme.degree)?,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = admissibility(&params, &problem, cfg.output.admissibility_samples, &mut rng)?;
        lines.push(AuditLine::at_least("ddg_admissibility", alpha, 0.0));
    }

    let form = if cfg.scheme.kind == SchemeKind::LdgK0 { DiffusionForm::Ldg } else { DiffusionForm::Ddg };
    let scheme = if cfg.scheme.kind == SchemeKind::LdgK0 { Scheme::ldg_k0() } else { Scheme::ddg_k0() };
    let grid = cfg.grid(&problem, inv_dx)?;
    let periodic = grid.clone().with_boundary(Boundary::Periodic);
    lines.push(AuditLine::at_most("conservation", conservation_drift(&problem, &periodic, form, 200)?, 1e-12));
    let shifted = with_shifted_range(&problem, 0.1)?;
    lines.push(AuditLine::at_most("comparison", comparison_defect(&shifted, &grid, form, 0.1, 200)?, 0.0));
    let m = monitored_run(&problem, &grid, scheme, 200)?;
    lines.push(AuditLine::at_most("stability_monitors", m.monitor_violations as f64, 0.0));
    lines.push(AuditLine::at_most("cell_entropy", -m.entropy_slack, ENTROPY_TOL));
    Ok(lines)
}

fn cmd_properties(ctx: &Context) -> CmdResult {
    let lines = property_audits(&ctx.cfg, ctx.seed)?;
    let mut w = ctx.csv("properties.csv", &[])?;
    w.write_record(["audit", "value", "relation", "threshold", "status"])?;
    for l in &lines {
        let status = match l.passed {
            None => "n/a",
            Some(true) => "pass",
            Some(false) => "fail",
        };
        let (relation, threshold) = match l.passed {
            None => (String::new(), String::new()),
            Some(_) => (l.relation.symbol().to_string(), l.threshold.to_string()),
        };
        w.write_record([l.name.clone(), opt(l.value), relation, threshold, status.to_string()])?;
        eprintln!("{:<22} {:>6}", l.name, status);
    }
    w.flush()?;
    let failed: Vec<&str> = lines.iter().filter(|l| l.failed()).map(|l| l.name.as_str()).collect();
    if !failed.is_empty() {
        return Err(Failure::new(EXIT_AUDIT, format!("audit failed: {}", failed.join(", "))));
    }
    Ok(())
}

fn cmd_oracle(ctx: &Context) -> CmdResult {
    let problem = ctx.cfg.problem()?;
    let grid = ctx.cfg.grid(&problem, ctx.cfg.grid.inv_dx)?;
    let cfg = ctx.cfg.spectral(&problem);
    let mut times = ctx.cfg.grid.snapshot_times.clone();
    times.push(ctx.cfg.grid.final_time);
    times.sort_by(f64::total_cmp);
    times.dedup();
    let x = grid.centers();
    let mut w = ctx.csv("oracle.csv", &[("half_period", cfg.half_period.to_string()), ("modes", cfg.modes.to_string())])?;
    w.write_record(["t", "x", "u"])?;
    for t in times {
        let u = oracle_values(&problem, &cfg, t, &x).map_err(|e| match e {
            Error::Analysis(m) => Failure::new(EXIT_CONFIG, m),
            other => other.into(),
        })?;
        for (xi, ui) in x.iter().zip(&u) {
            w.write_record([t.to_string(), xi.to_string(), ui.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("FRACDG_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("FRACDG_THREADS ignored: {e}");
        }
    }
}

/// Runs one parsed command and returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    configure_threads();
    let (args, name, f): (&CommonArgs, &'static str, fn(&Context) -> CmdResult) = match &cli.command {
        Command::Run(a) => (a, "run", cmd_run),
        Command::Convergence(a) => (a, "convergence", cmd_convergence),
        Command::WeightsAudit(a) => (a, "weights-audit", cmd_weights_audit),
        Command::Properties(a) => (a, "properties", cmd_properties),
        Command::Oracle(a) => (a, "oracle", cmd_oracle),
    };
    match Context::new(args, name).and_then(|ctx| f(&ctx)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fracdg {name}: {}", e.message);
            e.code
        }
    }
}

/// Parses `args` (including the program name) and executes; usage errors exit with 3.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            code
        }
    }
}

