use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;

use aj_core::abeljacobi::{recheck_report, select_centers, verify_surjectivity, ConstructConfig, ReportJson};
use aj_core::curve::PointJson;
use aj_core::flow::{solve_flow, verify_flow, FlowProblem, FlowProblemJson, FlowSolutionJson, ResidualJson};
use aj_core::forms::omega_space;
use aj_core::points::{SelectionConfig, SelectionJson};
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Pretty JSON to `out` (written to a temporary file, then renamed into
/// place) or to stdout.
pub fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => {
            let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating file in {}", dir.display()))?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

pub fn construct(cfg: &RunConfig, out: Option<&Path>) -> Result<Verdict> {
    cfg.validate()?;
    let curve = cfg.curve()?;
    let targets = cfg.targets()?;
    let config = ConstructConfig {
        point_bound: cfg.bound,
        selection: SelectionConfig::default(),
        seed: cfg.seed,
    };
    let report = verify_surjectivity(&curve, &targets, &config).context("construction failed")?;
    emit(&report.to_json(&curve), out)?;
    Ok(Verdict::from_bool(report.all_pass()))
}

pub fn verify(report: &ReportJson, out: Option<&Path>) -> Result<Verdict> {
    let outcome = recheck_report(report).context("cannot recompute report")?;
    emit(&outcome, out)?;
    Ok(Verdict::from_bool(outcome.all_pass))
}

#[derive(Debug, Serialize)]
struct FlowRun {
    problem: FlowProblemJson,
    solution: FlowSolutionJson,
    residual: ResidualJson,
    vanishes: bool,
}

pub fn flow(problem: &FlowProblemJson, out: Option<&Path>) -> Result<Verdict> {
    let p = FlowProblem::from_json(problem).context("invalid flow problem")?;
    let sol = solve_flow(&p)?;
    let res = verify_flow(&p, &sol)?;
    let vanishes = res.vanishes();
    emit(
        &FlowRun {
            problem: problem.clone(),
            solution: sol.to_json(),
            residual: res.to_json(),
            vanishes,
        },
        out,
    )?;
    Ok(Verdict::from_bool(vanishes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormsRequest {
    pub vars: usize,
    pub order: usize,
    pub degree: usize,
}

#[derive(Debug, Serialize)]
struct FormsInfo {
    vars: usize,
    order: usize,
    degree: usize,
    dim_total: usize,
    dim_closed: usize,
    dim_exact: usize,
    basis: Vec<String>,
}

pub fn forms_info(req: FormsRequest, out: Option<&Path>) -> Result<Verdict> {
    if req.vars < 1 || req.order < 1 {
        bail!("need --vars >= 1 and --order >= 1");
    }
    let space = omega_space(req.vars, req.order, req.degree)?;
    let dims = space.report();
    let basis = (0..space.dim()).map(|i| space.basis_form(i).to_string()).collect();
    emit(
        &FormsInfo {
            vars: req.vars,
            order: req.order,
            degree: req.degree,
            dim_total: dims.dim_total,
            dim_closed: dims.dim_closed,
            dim_exact: dims.dim_exact,
            basis,
        },
        out,
    )?;
    Ok(Verdict::Pass)
}

#[derive(Debug, Serialize)]
struct PointsRun {
    config: RunConfig,
    candidates: Vec<PointJson>,
    selection: SelectionJson<PointJson>,
}

pub fn points(cfg: &RunConfig, out: Option<&Path>) -> Result<Verdict> {
    cfg.validate()?;
    let curve = cfg.curve()?;
    let g = curve.genus();
    let required: BTreeSet<usize> = match &cfg.required {
        Some(rows) => rows.iter().copied().collect(),
        None => (0..g).collect(),
    };
    let config = ConstructConfig {
        point_bound: cfg.bound,
        selection: SelectionConfig::default(),
        seed: cfg.seed,
    };
    let selection = select_centers(&curve, &required, &config).context("point selection failed")?;
    let candidates = curve.find_rational_points(cfg.bound).iter().map(PointJson::from).collect();
    emit(
        &PointsRun {
            config: cfg.clone(),
            candidates,
            selection: selection.to_json(|p| PointJson::from(p)),
        },
        out,
    )?;
    Ok(Verdict::Pass)
}
