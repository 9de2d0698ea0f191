//! Suite configuration, check-group dispatch and report emission shared by the
//! command-line front end and the C interface.

use std::io::Write;
use std::path::Path;

use nalgebra::{Matrix3, Rotation3, Unit};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contraction::{self, LimitTolerance};
use crate::error::{Error, Result};
use crate::ncpoly::Truncation;
use crate::replab::{self, GradientMode, SpinRep, StepSchedule, TestFunction, Vec3};
use crate::report::CheckReport;
use crate::{hopf, multiplier, nogo};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    Hopf,
    Cocycle,
    Nogo,
    Rep,
    Contract,
    Appendix,
}

impl Group {
    pub fn all() -> Vec<Group> {
        vec![Group::Hopf, Group::Cocycle, Group::Nogo, Group::Rep, Group::Contract, Group::Appendix]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HopfConfig {
    pub order: u32,
    pub degree: u32,
    pub dual_order: u32,
}

impl Default for HopfConfig {
    fn default() -> Self {
        Self { order: 2, degree: 6, dual_order: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MultiplierConfig {
    pub order: u32,
    pub degree: u32,
    /// (N, D) policies at which both cocycle conventions are tried.
    pub cocycle: Vec<(u32, u32)>,
}

impl Default for MultiplierConfig {
    fn default() -> Self {
        Self { order: 2, degree: 6, cocycle: vec![(1, 4), (2, 5)] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NogoConfig {
    pub max_degree: u32,
    /// Also run the report-only grade-1 quantum relation at degree 2.
    pub quantum: bool,
}

impl Default for NogoConfig {
    fn default() -> Self {
        Self { max_degree: 4, quantum: false }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RepConfig {
    /// (M, k) pairs.
    pub params: Vec<(f64, f64)>,
    pub spins: Vec<f64>,
    pub samples: usize,
    pub fd_step: Option<f64>,
    pub massless_k: f64,
    pub dispersion: (f64, f64),
    pub compose_ks: Vec<f64>,
    pub compose_classical_k: f64,
    pub compose_tol: f64,
}

impl Default for RepConfig {
    fn default() -> Self {
        Self {
            params: vec![(1.0, 2.0), (1.0, 10.0), (0.5, 1.0)],
            spins: vec![0.0, 1.0],
            samples: 100,
            fd_step: None,
            massless_k: 2.0,
            dispersion: (1.0, 2.0),
            compose_ks: vec![1e1, 1e2, 1e3, 1e4, 1e5],
            compose_classical_k: 1e8,
            compose_tol: 1e-7,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContractConfig {
    #[serde(rename = "M")]
    pub mass: f64,
    pub k: f64,
    pub v: [f64; 3],
    /// Rotation R as axis and angle.
    pub axis: [f64; 3],
    pub angle: f64,
    pub q: [f64; 3],
    pub c_grid: String,
    pub classical_mass: f64,
    pub family_k: Vec<f64>,
    pub family_c_grid: String,
    pub deltas: Vec<f64>,
    pub complex_mass: bool,
    pub final_relative: f64,
    pub order: (f64, f64),
}

impl Default for ContractConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            k: -1.0,
            v: [0.1, 0.0, 0.0],
            axis: [0.0, 0.0, 1.0],
            angle: 0.0,
            q: [1.0, 0.0, 0.0],
            c_grid: "1e2:1e6:9".into(),
            classical_mass: 1.0,
            family_k: vec![2.0, -1.0],
            family_c_grid: "1e1:1e5:5".into(),
            deltas: vec![0.0, 1e-9, 1e-6, 1e-3, 1.0, 1e3],
            complex_mass: false,
            final_relative: 1e-5,
            order: (0.8, 2.2),
        }
    }
}

impl ContractConfig {
    pub fn rotation(&self) -> Result<Matrix3<f64>> {
        rotation(self.axis, self.angle)
    }

    pub fn tolerance(&self) -> LimitTolerance {
        LimitTolerance { final_relative: self.final_relative, order: self.order, ..LimitTolerance::default() }
    }
}

pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Matrix3<f64>> {
    if angle == 0.0 {
        return Ok(Matrix3::identity());
    }
    let a = Vec3::from(axis);
    if a.norm() == 0.0 {
        return Err(Error::Usage("rotation axis must be nonzero".into()));
    }
    Ok(*Rotation3::from_axis_angle(&Unit::new_normalize(a), angle).matrix())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AppendixConfig {
    pub samples: usize,
    pub ode_tol: f64,
    pub quad_tol: f64,
}

impl Default for AppendixConfig {
    fn default() -> Self {
        Self { samples: 20, ode_tol: 1e-8, quad_tol: 1e-10 }
    }
}

/// Everything a run depends on; a run is reproducible from this and the seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub groups: Vec<Group>,
    pub seed: u64,
    pub hopf: HopfConfig,
    pub multiplier: MultiplierConfig,
    pub nogo: NogoConfig,
    pub rep: RepConfig,
    pub contract: ContractConfig,
    pub appendix: AppendixConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            groups: Group::all(),
            seed: 7,
            hopf: HopfConfig::default(),
            multiplier: MultiplierConfig::default(),
            nogo: NogoConfig::default(),
            rep: RepConfig::default(),
            contract: ContractConfig::default(),
            appendix: AppendixConfig::default(),
        }
    }
}

impl SuiteConfig {
    pub fn from_toml(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serde(e.to_string()))
    }
}

pub fn verify_hopf(c: &HopfConfig) -> Result<Vec<CheckReport>> {
    let mut out = hopf::hopf_suite(Truncation::new(c.order, c.degree), c.dual_order)?;
    out.push(hopf::boost_coproduct_report(c.dual_order.min(2))?);
    Ok(out)
}

pub fn verify_unitarity(c: &MultiplierConfig) -> Result<Vec<CheckReport>> {
    let t = Truncation::new(c.order, c.degree);
    let mut out = multiplier::unitarity_check(t)?;
    out.push(multiplier::counit_check(t)?);
    out.push(multiplier::equivalence_check(t)?);
    out.push(multiplier::classical_limit_check(t)?);
    out.push(multiplier::missing_i_probe(t)?);
    Ok(out)
}

pub fn verify_tau(c: &MultiplierConfig) -> Result<Vec<CheckReport>> {
    multiplier::tau_commutator_check(Truncation::new(c.order, c.degree))
}

pub fn verify_cocycle(c: &MultiplierConfig) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for &(n, d) in &c.cocycle {
        out.extend(multiplier::cocycle_convention_report(Truncation::new(n, d))?);
    }
    Ok(out)
}

pub fn run_nogo(c: &NogoConfig) -> Result<Vec<CheckReport>> {
    let mut out: Vec<CheckReport> = (1..=c.max_degree).into_par_iter().map(nogo::coboundary_check).collect::<Result<_>>()?;
    out.push(nogo::positive_control_check(2)?);
    if c.quantum {
        out.push(nogo::quantum_obstruction(1, 2)?);
    }
    Ok(out)
}

pub fn rep_commutators(c: &RepConfig, seed: u64) -> Result<Vec<CheckReport>> {
    let mode = c.fd_step.map_or(GradientMode::Exact, GradientMode::FiniteDifference);
    let mut jobs = Vec::new();
    for &(m, k) in &c.params {
        for &s in &c.spins {
            jobs.push((m, k, s));
        }
    }
    let mut out: Vec<CheckReport> = jobs
        .par_iter()
        .map(|&(m, k, s)| replab::check_algebra(m, k, &SpinRep::from_spin(s)?, c.samples, seed, mode))
        .collect::<Result<_>>()?;
    out.push(replab::massless_sector_check(c.massless_k, &SpinRep::new(0), c.samples, seed)?);
    Ok(out)
}

pub fn rep_dispersion(c: &RepConfig, seed: u64) -> Result<Vec<CheckReport>> {
    replab::dispersion_check(c.dispersion.0, c.dispersion.1, c.samples, seed)
}

pub fn rep_extract(c: &RepConfig, seed: u64) -> Result<Vec<CheckReport>> {
    let (m, k) = c.params.first().copied().unwrap_or((1.0, 2.0));
    let s = SpinRep::from_spin(c.spins.last().copied().unwrap_or(1.0))?;
    let g = replab::build_generators(m, k, &s)?;
    let f = TestFunction::random(s.dim(), seed);
    let pts = [Vec3::new(0.1, -0.2, 0.3), Vec3::new(0.5, 0.2, -0.4), Vec3::new(-0.3, 0.6, 0.1)];
    Ok(vec![replab::extract_generators(&g, &f, &pts, StepSchedule::default())?])
}

pub fn rep_compose(c: &RepConfig, seed: u64) -> Result<Vec<CheckReport>> {
    let m = c.params.first().map_or(1.0, |p| p.0);
    let s = SpinRep::from_spin(c.spins.last().copied().unwrap_or(1.0))?;
    replab::composition_check(m, &s, &c.compose_ks, c.compose_classical_k, seed, c.compose_tol)
}

pub fn contract_multiplier(c: &ContractConfig) -> Result<Vec<CheckReport>> {
    let grid = contraction::parse_grid(&c.c_grid)?;
    let r = c.rotation()?;
    let v = Vec3::from(c.v);
    let mut out = vec![
        contraction::multiplier_limit_check(c.mass, c.k, &v, &r, &grid, c.tolerance())?.report,
        contraction::classical_multiplier_check(c.classical_mass, &v, &r, &grid, c.tolerance())?.report,
        contraction::mass_schedule_check(c.mass, c.k, &grid)?,
    ];
    let k_pos = c.k.abs();
    out.push(contraction::sign_tension_report(c.mass, k_pos, &v, *grid.last().unwrap(), c.complex_mass));
    Ok(out)
}

pub fn contract_rep(c: &ContractConfig) -> Result<Vec<CheckReport>> {
    let grid = contraction::parse_grid(&c.c_grid)?;
    Ok(vec![contraction::rep_limit_check(c.mass, c.k, &Vec3::from(c.q), &grid, c.tolerance())?.report])
}

pub fn contract_appendix(c: &AppendixConfig, seed: u64) -> Result<Vec<CheckReport>> {
    let samples = contraction::appendix_samples(c.samples, seed);
    Ok(vec![contraction::appendix_checks(&samples, c.ode_tol, c.quad_tol)?.param("seed", seed)])
}

pub fn contract_family(c: &ContractConfig) -> Result<Vec<CheckReport>> {
    let grid = contraction::parse_grid(&c.family_c_grid)?;
    c.family_k.iter().map(|&k| contraction::general_family_scan(c.mass, k, &grid, &c.deltas)).collect()
}

pub fn run_group(g: Group, cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let cat = |parts: Vec<Result<Vec<CheckReport>>>| -> Result<Vec<CheckReport>> {
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    };
    match g {
        Group::Hopf => verify_hopf(&cfg.hopf),
        Group::Cocycle => cat(vec![verify_unitarity(&cfg.multiplier), verify_tau(&cfg.multiplier), verify_cocycle(&cfg.multiplier)]),
        Group::Nogo => run_nogo(&cfg.nogo),
        Group::Rep => cat(vec![
            rep_commutators(&cfg.rep, cfg.seed),
            rep_dispersion(&cfg.rep, cfg.seed),
            rep_extract(&cfg.rep, cfg.seed),
            rep_compose(&cfg.rep, cfg.seed),
        ]),
        Group::Contract => cat(vec![contract_multiplier(&cfg.contract), contract_rep(&cfg.contract), contract_family(&cfg.contract)]),
        Group::Appendix => contract_appendix(&cfg.appendix, cfg.seed),
    }
}

/// Runs the enabled groups concurrently and concatenates their reports in
/// the configured group order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<CheckReport>> {
    let parts: Vec<Result<Vec<CheckReport>>> = cfg.groups.par_iter().map(|g| run_group(*g, cfg)).collect();
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

/// 0 if no check failed, 1 otherwise; report-only checks never count.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().any(CheckReport::failed) {
        1
    } else {
        0
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub const CSV_COLUMNS: [&str; 5] = ["check_id", "status", "residual", "params", "artifacts"];

pub fn render(reports: &[CheckReport], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports).map_err(|e| Error::Serde(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Serde(e.to_string());
            w.write_record(CSV_COLUMNS).map_err(io)?;
            for r in reports {
                let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let artifacts = r.artifacts.as_ref().map_or(String::new(), |a| a.to_string());
                w.write_record([r.check_id.as_str(), r.status.as_str(), r.residual.as_str(), &params.join(";"), &artifacts]).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Serde(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Serde(e.to_string()))
        }
    }
}

/// Writes to `out`, or stdout when `None`.
pub fn emit(reports: &[CheckReport], format: Format, out: Option<&Path>) -> Result<()> {
    let text = render(reports, format)?;
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses a JSON report list back.
pub fn parse_reports(json: &str) -> Result<Vec<CheckReport>> {
    serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
}

/// Re-verifies a `nogo.coboundary` report by replaying its witness against a
/// freshly assembled system.
pub fn replay_nogo_report(r: &CheckReport) -> Result<bool> {
    let d: u32 = r
        .params
        .get("D")
        .ok_or_else(|| Error::Parse("report has no D parameter".into()))?
        .parse()
        .map_err(|_| Error::Parse("D is not an integer".into()))?;
    let w = r
        .artifacts
        .as_ref()
        .and_then(|a| a.get("witness"))
        .ok_or_else(|| Error::Parse("report carries no witness".into()))?;
    let w: nogo::Witness = serde_json::from_value(w.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    nogo::CoboundaryProblem::classical(d, nogo::Source::Bargmann)?.replay(&w)
}
