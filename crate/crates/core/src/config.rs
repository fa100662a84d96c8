//! TOML run configuration with `[problem]`, `[scheme]`, `[grid]` and `[output]` sections.
//!
//! ```toml
//! [problem]
//! example = "ex1"
//! lambda = 0.5
//! b = 1.0
//!
//! [scheme]
//! kind = "ddg_k0"
//! flux = "eo"
//!
//! [grid]
//! inv_dx = 80
//! final_time = 0.15
//!
//! [output]
//! seed = 7
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::study::{linear_symbol, ReferenceMode, StudySetup};
use crate::error::{Error, Result};
use crate::flux::{DdgFluxParams, FluxKind};
use crate::poly::PiecewisePolynomial;
use crate::problem::{Example, InitialDatum, Problem, ProblemSpec};
use crate::solver::grid::{Boundary, Grid};
use crate::solver::run::{RunOptions, Scheme, SchemeKind};
use crate::spectral::SpectralConfig;

/// `{ breakpoints = [...], pieces = [[c0, c1, ...], ...] }`, ascending powers per piece.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecewiseTable {
    #[serde(default)]
    pub breakpoints: Vec<f64>,
    pub pieces: Vec<Vec<f64>>,
}

impl PiecewiseTable {
    fn build(&self, what: &str) -> Result<PiecewisePolynomial> {
        PiecewisePolynomial::from_tables(self.breakpoints.clone(), self.pieces.clone())
            .map_err(|e| Error::Config(format!("{what}: {e}")))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub example: Option<Example>,
    pub f: Option<PiecewiseTable>,
    pub a: Option<PiecewiseTable>,
    pub u0: Option<PiecewiseTable>,
    /// Gaussian datum `exp(-(x/w)^2)` in place of `u0`.
    pub gaussian_width: Option<f64>,
    pub lambda: Option<f64>,
    pub b: Option<f64>,
    pub linear_speed: Option<f64>,
    pub half_width: Option<f64>,
    pub state_range: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    #[serde(default = "default_kind")]
    pub kind: SchemeKind,
    #[serde(default)]
    pub degree: usize,
    #[serde(default)]
    pub flux: FluxKind,
    pub beta0: Option<f64>,
    pub beta1: Option<f64>,
    pub safety: Option<f64>,
    pub dt: Option<f64>,
    #[serde(default)]
    pub tail_correction: bool,
}

fn default_kind() -> SchemeKind {
    SchemeKind::DdgK0
}

impl Default for SchemeSection {
    fn default() -> Self {
        SchemeSection {
            kind: SchemeKind::DdgK0,
            degree: 0,
            flux: FluxKind::Eo,
            beta0: None,
            beta1: None,
            safety: None,
            dt: None,
            tail_correction: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    Oracle,
    FineGrid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default = "default_inv_dx")]
    pub inv_dx: usize,
    /// `1/Δx` for convergence studies, each twice the previous.
    #[serde(default)]
    pub grids: Vec<usize>,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default = "default_final_time")]
    pub final_time: f64,
    #[serde(default)]
    pub snapshot_times: Vec<f64>,
    /// Defaults to the oracle for linear problems and the fine grid otherwise.
    pub reference: Option<ReferenceKind>,
    #[serde(default = "default_reference_inv_dx")]
    pub reference_inv_dx: usize,
    pub oracle_half_period: Option<f64>,
    pub oracle_modes: Option<usize>,
    pub compare_refine: Option<usize>,
}

fn default_inv_dx() -> usize {
    80
}

fn default_final_time() -> f64 {
    0.15
}

fn default_reference_inv_dx() -> usize {
    320
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection {
            inv_dx: default_inv_dx(),
            grids: Vec::new(),
            boundary: Boundary::Zero,
            final_time: default_final_time(),
            snapshot_times: Vec::new(),
            reference: None,
            reference_inv_dx: default_reference_inv_dx(),
            oracle_half_period: None,
            oracle_modes: None,
            compare_refine: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    /// Entropy audit of `k = 0` runs.
    #[serde(default = "yes")]
    pub entropy: bool,
    /// Largest offset listed by `weights-audit`.
    #[serde(default = "default_offsets")]
    pub audit_offsets: usize,
    /// Random states drawn by the admissibility audit.
    #[serde(default = "default_samples")]
    pub admissibility_samples: usize,
}

fn yes() -> bool {
    true
}

fn default_offsets() -> usize {
    20
}

fn default_samples() -> usize {
    300
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: None,
            seed: 0,
            entropy: true,
            audit_offsets: default_offsets(),
            admissibility_samples: default_samples(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub problem: ProblemSection,
    #[serde(default)]
    pub scheme: SchemeSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub output: OutputSection,
}

/// A parsed configuration together with the SHA-256 of its source text.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub sha256: String,
}

impl LoadedConfig {
    pub fn from_str(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(LoadedConfig { config, sha256: hex(&Sha256::digest(text.as_bytes())) })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let s = &self.scheme;
        self.scheme().validate().map_err(|e| Error::Config(e.to_string()))?;
        if s.beta0.is_some_and(|b| !b.is_finite()) || s.beta1.is_some_and(|b| !b.is_finite()) {
            return Err(Error::Config("beta parameters must be finite".into()));
        }
        if s.safety.is_some_and(|x| !(x > 0.0)) {
            return Err(Error::Config("safety must be positive".into()));
        }
        let g = &self.grid;
        if g.inv_dx == 0 || g.grids.contains(&0) {
            return Err(Error::Config("1/dx must be positive".into()));
        }
        if let Some(w) = g.grids.windows(2).find(|w| w[1] != 2 * w[0]) {
            return Err(Error::Config(format!("grids 1/{} and 1/{} are not related by halving", w[0], w[1])));
        }
        if !(g.final_time >= 0.0 && g.final_time.is_finite()) {
            return Err(Error::Config(format!("final_time = {} must be finite and nonnegative", g.final_time)));
        }
        if g.snapshot_times.iter().any(|t| !(*t >= 0.0 && *t <= g.final_time)) {
            return Err(Error::Config("snapshot times must lie in [0, final_time]".into()));
        }
        self.problem()?;
        Ok(())
    }

    pub fn scheme(&self) -> Scheme {
        Scheme { kind: self.scheme.kind, degree: self.scheme.degree }
    }

    pub fn problem(&self) -> Result<Problem> {
        let p = &self.problem;
        let mut spec = match p.example {
            Some(ex) => ProblemSpec::builtin(ex),
            None => {
                let (Some(f), Some(a)) = (&p.f, &p.a) else {
                    return Err(Error::Config("[problem] needs `example` or inline `f` and `a` tables".into()));
                };
                if p.u0.is_none() && p.gaussian_width.is_none() {
                    return Err(Error::Config("[problem] needs `u0` or `gaussian_width`".into()));
                }
                ProblemSpec {
                    name: "inline".into(),
                    f: f.build("f")?,
                    a: a.build("a")?,
                    u0: InitialDatum::Gaussian { width: 1.0 },
                    lambda: 0.5,
                    b: 0.0,
                    linear_speed: None,
                    half_width: 1.0,
                    state_range: None,
                }
            }
        };
        if p.example.is_some() {
            if let Some(f) = &p.f {
                spec.f = f.build("f")?;
            }
            if let Some(a) = &p.a {
                spec.a = a.build("a")?;
            }
        }
        if let Some(u0) = &p.u0 {
            spec.u0 = InitialDatum::Piecewise(u0.build("u0")?);
        } else if let Some(w) = p.gaussian_width {
            spec.u0 = InitialDatum::Gaussian { width: w };
        }
        spec.lambda = p.lambda.unwrap_or(spec.lambda);
        spec.b = p.b.unwrap_or(spec.b);
        spec.half_width = p.half_width.unwrap_or(spec.half_width);
        if p.linear_speed.is_some() {
            spec.linear_speed = p.linear_speed;
        }
        spec.state_range = p.state_range.map(|[lo, hi]| (lo, hi));
        Problem::new(spec).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn grid(&self, problem: &Problem, inv_dx: usize) -> Result<Grid> {
        Ok(Grid::symmetric(problem.spec.half_width, inv_dx)
            .map_err(|e| Error::Config(e.to_string()))?
            .with_boundary(self.grid.boundary))
    }

    pub fn ddg_params(&self) -> Result<Option<DdgFluxParams>> {
        let s = &self.scheme;
        if s.beta0.is_none() && s.beta1.is_none() {
            return Ok(None);
        }
        let mut p = DdgFluxParams::defaults(s.degree)?;
        p.beta0 = s.beta0.unwrap_or(p.beta0);
        p.beta1 = s.beta1.unwrap_or(p.beta1);
        Ok(Some(p))
    }

    pub fn run_options(&self) -> Result<RunOptions> {
        let s = &self.scheme;
        let mut o = RunOptions::new(self.scheme(), self.grid.final_time)
            .with_flux(s.flux)
            .with_snapshots(self.grid.snapshot_times.clone());
        o.safety = s.safety;
        o.dt = s.dt;
        o.ddg_params = self.ddg_params()?;
        o.tail_correction = s.tail_correction;
        if self.output.entropy {
            o.entropy_levels = None;
        }
        Ok(o)
    }

    pub fn reference(&self, problem: &Problem) -> ReferenceMode {
        let kind = self.grid.reference.unwrap_or(if linear_symbol(problem).is_ok() {
            ReferenceKind::Oracle
        } else {
            ReferenceKind::FineGrid
        });
        match kind {
            ReferenceKind::FineGrid => ReferenceMode::FineGrid { inv_dx: self.grid.reference_inv_dx },
            ReferenceKind::Oracle => {
                let ReferenceMode::Oracle(mut cfg) = ReferenceMode::oracle_for(problem, self.grid.boundary) else {
                    unreachable!("oracle_for returns an oracle")
                };
                cfg.half_period = self.grid.oracle_half_period.unwrap_or(cfg.half_period);
                cfg.modes = self.grid.oracle_modes.unwrap_or(cfg.modes);
                ReferenceMode::Oracle(cfg)
            }
        }
    }

    pub fn spectral(&self, problem: &Problem) -> SpectralConfig {
        match self.reference(problem) {
            ReferenceMode::Oracle(c) => c,
            ReferenceMode::FineGrid { .. } => match ReferenceMode::oracle_for(problem, self.grid.boundary) {
                ReferenceMode::Oracle(c) => c,
                ReferenceMode::FineGrid { .. } => SpectralConfig::default(),
            },
        }
    }

    pub fn study_setup(&self, problem: &Problem) -> StudySetup {
        let mut s = StudySetup::new(self.scheme(), self.scheme.flux, self.grid.final_time, self.reference(problem))
            .with_boundary(self.grid.boundary);
        s.safety = self.scheme.safety;
        s.compare_refine = self.grid.compare_refine;
        s
    }
}
