use std::time::Instant;

use rayon::prelude::*;

use crate::condest::{compute_k_m, compute_l_m, dkk_witness_lb, log_growth_fit, Mode, ProjNormResult};
use crate::dkk::REGULARITY_B_MAX;
use crate::error::{Error, Result};
use crate::greedy::{
    almost_greedy_ratio_smallcase, fundamental_phi, partial_sum_constant, qg_ratio_estimate, superdemocracy_ratio,
    SMALLCASE_DIM_CAP,
};
use crate::normer::Normer;
use crate::seqspace::{check_lrp, check_urp, dini_constant, lemma7_holds};

use super::config::{ExperimentConfig, Target};
use super::report::{ConstantsReport, Metadata, On, Row, WitnessDigest, WitnessKind, RECHECK_RTOL, SCHEMA_VERSION};
use super::verify::verify_suites;

pub const DEFAULT_M_MAX: usize = 8;
pub const DEFAULT_HORIZON: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Norm,
    Constants,
    Greedy,
    Weights,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Constants => "constants",
            Command::Greedy => "greedy",
            Command::Weights => "weights",
            Command::Verify => "verify",
        }
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, u64)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, start.elapsed().as_millis() as u64))
}

fn proj_row(key: String, r: &ProjNormResult, on: On, ms: u64) -> Row {
    let digest = r.witness.as_ref().map(|w| WitnessDigest::projection(on, w));
    Row { runtime_ms: ms, ..Row::with_witness(key, r.value, r.exact, digest) }
}

fn now_secs() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Run `cmd` on `cfg` and collect its rows.
pub fn run_command(cmd: Command, cfg: &ExperimentConfig) -> Result<ConstantsReport> {
    let (rows, violations) = match cmd {
        Command::Norm => (cmd_norm(cfg)?, 0),
        Command::Constants => (cmd_constants(cfg)?, 0),
        Command::Greedy => (cmd_greedy(cfg)?, 0),
        Command::Weights => (cmd_weights(cfg)?, 0),
        Command::Verify => cmd_verify(cfg)?,
    };
    Ok(ConstantsReport {
        schema_version: SCHEMA_VERSION,
        metadata: Metadata {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command: cmd.name().into(),
            seed: cfg.run.seed,
            config: cfg.clone(),
            timestamp: now_secs(),
        },
        rows,
        violations,
    })
}

pub fn cmd_norm(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let spec = cfg.norm.as_ref().ok_or_else(|| Error::Config("norm needs a [norm] table with vectors".into()))?;
    let target = cfg.target()?;
    let normer = target.normer();
    spec.vectors
        .iter()
        .enumerate()
        .map(|(i, f)| {
            if let Some(cap) = normer.max_dim() {
                if f.len() > cap {
                    return Err(Error::Domain(format!("vector {i} has {} entries, {} covers {cap}", f.len(), normer.label())));
                }
            }
            let (v, ms) = timed(|| Ok(normer.norm(f)))?;
            Ok(Row { runtime_ms: ms, ..Row::exact(format!("norm[{i}]"), v) })
        })
        .collect()
}

pub fn cmd_constants(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let seed = cfg.seed()?;
    let basis = cfg.basis()?;
    let budget = cfg.budget();
    let mode: Mode = cfg.run.mode.into();
    let m_max = cfg.run.m_max.unwrap_or(DEFAULT_M_MAX);
    let ms: Vec<usize> = (cfg.run.m_min..=m_max).collect();

    let per_m: Vec<Result<(Row, Row)>> = ms
        .par_iter()
        .map(|&m| {
            let s = seed.wrapping_add(m as u64);
            let (l, t1) = timed(|| compute_l_m(&basis, m, mode, &budget, s))?;
            let dim = cfg.run.dim.unwrap_or(m).max(m);
            let (k, t2) = timed(|| compute_k_m(&basis, m, dim, &budget, s))?;
            Ok((proj_row(format!("L[{m}]"), &l, On::Basis, t1), proj_row(format!("k[{m}]"), &k, On::Basis, t2)))
        })
        .collect();
    let mut rows = Vec::new();
    let mut l_points = Vec::new();
    for (m, r) in ms.iter().zip(per_m) {
        let (l, k) = r?;
        l_points.push((*m, l.value));
        rows.push(l);
        rows.push(k);
    }

    let mut points = l_points;
    if let Some(y) = cfg.dkk()? {
        let r_max = cfg.run.r_max.unwrap_or(y.partition().len());
        if r_max > y.partition().len() {
            return Err(Error::Domain(format!(
                "r_max = {r_max} outside the configured partition range [1, {}]",
                y.partition().len()
            )));
        }
        let per_r: Vec<Result<Row>> = (1..=r_max)
            .into_par_iter()
            .map(|r| {
                let s = seed.wrapping_add(1 << 32).wrapping_add(r as u64);
                let (lb, t) = timed(|| dkk_witness_lb(&y, r, cfg.run.inner_dim_cap, &budget, cfg.run.trials, s))?;
                Ok(proj_row(format!("dkk_lb[{r}]"), &lb, On::Target, t))
            })
            .collect();
        points = Vec::new();
        for (r, row) in (1..=r_max).zip(per_r) {
            let row = row?;
            let m_r = y.partition().m_r(r);
            points.push((m_r, row.value));
            rows.push(Row::exact(format!("M[{r}]"), m_r as f64));
            rows.push(row);
        }
    }
    if points.len() >= 3 {
        let fit = log_growth_fit(&points, cfg.run.fit_exponent)?;
        rows.push(Row::exact("fit.slope", fit.slope));
        rows.push(Row::exact("fit.intercept", fit.intercept));
        rows.push(Row::exact("fit.residual", fit.residual));
    }
    Ok(rows)
}

fn greedy_dim(cfg: &ExperimentConfig, target: &Target) -> usize {
    cfg.run.dim.unwrap_or(match target {
        Target::Dkk(y) => y.dim(),
        Target::Basis(_) => 16,
    })
}

pub fn cmd_greedy(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let seed = cfg.seed()?;
    let target = cfg.target()?;
    let normer = target.normer();
    let budget = cfg.budget();
    let dim = greedy_dim(cfg, &target);
    let trials = cfg.run.trials;
    let mut rows = Vec::new();

    let (qg, t) = timed(|| qg_ratio_estimate(normer, dim, trials, seed))?;
    let digest = |w: &Option<crate::condest::Witness>| w.as_ref().map(|w| WitnessDigest::projection(On::Target, w));
    rows.push(Row { runtime_ms: t, ..Row::with_witness("qg.residual", qg.residual_ratio, false, digest(&qg.residual_witness)) });
    rows.push(Row::with_witness("qg.projection", qg.projection_ratio, false, digest(&qg.projection_witness)));

    let (cb, t) = timed(|| partial_sum_constant(normer, dim, trials.min(256), &budget, seed.wrapping_add(1)))?;
    rows.push(Row { runtime_ms: t, ..Row::with_witness("cb", cb.value, false, digest(&cb.witness)) });

    let m_max = cfg.run.m_max.unwrap_or(DEFAULT_M_MAX).min(dim);
    let mode: Mode = cfg.run.mode.into();
    for m in cfg.run.m_min..=m_max {
        let s = seed.wrapping_add(2 + m as u64);
        let (phi, t) = timed(|| fundamental_phi(normer, m, dim, mode, &budget, s))?;
        let mut f = vec![0.0; dim];
        for &j in &phi.set {
            f[j] = 1.0;
        }
        let d = (!phi.exact).then(|| WitnessDigest::norm(On::Target, &f));
        rows.push(Row { runtime_ms: t, ..Row::with_witness(format!("phi[{m}]"), phi.value, phi.exact, d) });
        if let Some((lo, hi)) = phi.bounds {
            rows.push(Row::exact(format!("phi_lower[{m}]"), lo));
            rows.push(Row::exact(format!("phi_upper[{m}]"), hi));
        }
        let (dem, t) = timed(|| superdemocracy_ratio(normer, m, dim, trials, s))?;
        let d = (!dem.exact).then(|| WitnessDigest::norm_ratio(On::Target, &dem.max_vector, &dem.min_vector));
        rows.push(Row { runtime_ms: t, ..Row::with_witness(format!("democracy[{m}]"), dem.ratio, dem.exact, d) });
    }
    if dim <= SMALLCASE_DIM_CAP {
        let (ag, t) = timed(|| almost_greedy_ratio_smallcase(normer, dim, trials, seed.wrapping_add(3)))?;
        let d = WitnessDigest { on: On::Target, kind: WitnessKind::AlmostGreedy, f: ag.f, set: ag.greedy_set, g: Vec::new() };
        rows.push(Row { runtime_ms: t, ..Row::with_witness("almost_greedy", ag.ratio, false, Some(d)) });
    }
    if let Target::Dkk(y) = &target {
        if let Some(q) = y.lemma_constants(y.dim()).qg_without_cb {
            rows.push(Row::exact("qg.bound_without_cb", q));
        }
    }
    Ok(rows)
}

fn verdict_value(b: Option<usize>) -> f64 {
    b.map_or(0.0, |b| b as f64)
}

pub fn cmd_weights(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    let dkk = cfg.dkk()?;
    if let Some(space) = &cfg.space {
        if space.is_subsymmetric() {
            let horizon = cfg.run.horizon.unwrap_or(DEFAULT_HORIZON);
            let lam = space.lambda_table(REGULARITY_B_MAX * horizon + 1);
            let at = |m: usize| lam[m];
            rows.push(Row::exact("lrp.b", verdict_value(check_lrp(at, REGULARITY_B_MAX, horizon).witness)));
            rows.push(Row::exact("urp.b", verdict_value(check_urp(at, REGULARITY_B_MAX, horizon).witness)));
            rows.push(Row::exact("dini", dini_constant(at, horizon)));
            rows.push(Row::exact("lemma7", if lemma7_holds(&lam, horizon.min(2000)) { 1.0 } else { 0.0 }));
        }
    }
    if let Some(y) = dkk {
        let p = y.partition();
        rows.push(Row::exact("c_sigma", p.c_sigma()));
        if let Some(a) = p.condition_a() {
            rows.push(Row::exact("condition_a", a));
        }
        rows.push(Row::exact("condition_b", p.condition_b()));
        let c = y.lemma_constants(cfg.run.horizon.unwrap_or(y.dim()));
        rows.push(Row::exact("c1", c.c1));
        rows.push(Row::exact("c2", c.c2));
        rows.push(Row::exact("c3", c.c3));
        rows.push(Row::exact("c4", c.c4));
        rows.push(Row::exact("case.lrp_urp", (c.case == "lrp_urp") as u8 as f64));
        rows.push(Row::exact("case.l1", (c.case == "l1") as u8 as f64));
        if let Some(v) = c.c_a {
            rows.push(Row::exact("c_a", v));
        }
        rows.push(Row::exact("embedding_lower", c.embedding_lower));
        if let Some(v) = c.embedding_upper {
            rows.push(Row::exact("embedding_upper", v));
        }
        if let Some(v) = c.qg_without_cb {
            rows.push(Row::exact("qg_without_cb", v));
        }
    }
    if rows.is_empty() {
        return Err(Error::Config("weights needs a subsymmetric [space] or a [partition]".into()));
    }
    Ok(rows)
}

/// Rows `<suite>.violations`, `<suite>.trials` and `<suite>.worst_slack`, plus the total.
pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<(Vec<Row>, u64)> {
    let seed = cfg.seed()?;
    let y = cfg.dkk()?.ok_or_else(|| Error::Config("verify needs a [partition]".into()))?;
    let suites = verify_suites(&y, cfg.run.trials, seed, &cfg.budget())?;
    let mut rows = Vec::new();
    let mut total = 0u64;
    for s in suites {
        total += s.violations as u64;
        rows.push(Row { runtime_ms: s.runtime_ms, ..Row::exact(format!("{}.violations", s.name), s.violations as f64) });
        rows.push(Row::exact(format!("{}.trials", s.name), s.trials as f64));
        rows.push(Row::exact(format!("{}.worst_slack", s.name), s.worst_slack));
    }
    Ok((rows, total))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecheckLine {
    pub key: String,
    pub reported: f64,
    pub recomputed: f64,
    pub ok: bool,
}

/// Re-evaluate every witness in `rows` against the normers of `cfg`.
pub fn recheck(rows: &[Row], cfg: &ExperimentConfig) -> Result<Vec<RecheckLine>> {
    let basis = cfg.basis()?;
    let target = cfg.target()?;
    let mut out = Vec::new();
    for row in rows {
        let Some(w) = &row.witness else { continue };
        let digest = WitnessDigest::decode(w)?;
        let normer: &dyn Normer = match digest.on {
            On::Basis => &basis,
            On::Target => target.normer(),
        };
        if let Some(cap) = normer.max_dim() {
            if digest.f.len() > cap {
                return Err(Error::Domain(format!("witness for {} exceeds {} coefficients", row.key, cap)));
            }
        }
        let recomputed = digest.evaluate(normer);
        let ok = (recomputed - row.value).abs() <= RECHECK_RTOL * row.value.abs().max(1.0);
        out.push(RecheckLine { key: row.key.clone(), reported: row.value, recomputed, ok });
    }
    Ok(out)
}
