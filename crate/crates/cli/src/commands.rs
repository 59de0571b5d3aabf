use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};
use weighted_radius::ensemble::EnsembleKind;
use weighted_radius::io::{matrix_from_json, MatrixJson};
use weighted_radius::linalg::Tolerances;
use weighted_radius::radius::{a_numerical_radius, numerical_range_cloud, weighted_radius};
use weighted_radius::spectral::{a_spectral_radius, distance_to_scalars, numerical_index, Subalgebra};
use weighted_radius::suite::{
    failure_count, kappa_ratio_search, report_to_json, run_suite, tightness_search, SuiteConfig, SuiteEnsemble,
};
use weighted_radius::weighted::make_weight;
use weighted_radius::{Matrix, Weight, WeightPair};

use crate::config::{self, RunConfig};
use crate::failure::{Failure, EXIT_CHAIN_FAILURE};

const DEFAULT_SEARCH_BUDGET: usize = 200;
const DEFAULT_REPORT: &str = "suite-report.json";

fn read_matrix(path: &Path) -> Result<Matrix<f64>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    matrix_from_json(&text).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn tolerances(cfg: &RunConfig) -> Tolerances<f64> {
    let base = Tolerances::default();
    match cfg.tol {
        Some(tol) => base.with_chain_tol(tol),
        None => base,
    }
}

fn read_weight(cfg: &RunConfig) -> Result<Weight<f64>, Failure> {
    let a = read_matrix(cfg.require_weight()?)?;
    Ok(make_weight(&a, tolerances(cfg))?)
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::config(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json(cfg: &RunConfig, value: &Value) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("json value serializes");
    text.push('\n');
    emit(cfg, &text)
}

const INF: &str = "inf";

pub fn compute(cfg: &RunConfig) -> Result<u8, Failure> {
    let w = read_weight(cfg)?;
    let x = read_matrix(cfg.require_matrix()?)?;
    let defect = w.membership_defect(&x)?;
    let member = w.is_member(&x)?;
    let (t, s) = (cfg.t.unwrap_or(config::DEFAULT_T), cfg.s.unwrap_or(config::DEFAULT_S));
    let p = WeightPair::new(t, s)?;

    let mut report = json!({
        "dim": w.dim(),
        "weight_rank": w.rank(),
        "t": t,
        "s": s,
        "membership": { "member": member, "defect": defect },
    });
    let fields = if member {
        let norm = w.seminorm_of_member(&x)?;
        let v = a_numerical_radius(&w, &x)?;
        let vp = weighted_radius(&w, &x, p)?;
        let r = a_spectral_radius(&w, &x)?;
        let d = distance_to_scalars(&w, &x)?;
        let shift = &x - &Matrix::identity(w.dim()).scale(d.zeta_star);
        let d_err = a_numerical_radius(&w, &shift)?.certified_error;
        json!({
            "seminorm": { "value": norm, "certified_error": w.tolerances().eig_tol * norm },
            "adjoint": MatrixJson::from(&w.adjoint(&x)?),
            "numerical_radius": {
                "value": v.value, "theta_star": v.theta_star, "certified_error": v.certified_error
            },
            "weighted_radius": {
                "value": vp.value, "theta_star": vp.theta_star, "certified_error": vp.certified_error
            },
            "spectral_radius": {
                "value": r.r_eig, "r_limit": r.r_limit, "certified_error": (r.r_eig - r.r_limit).abs()
            },
            "distance_to_scalars": {
                "value": d.value,
                "zeta_star": [d.zeta_star.re, d.zeta_star.im],
                "iterations": d.iterations,
                "certified_error": d_err
            },
        })
    } else {
        let inf = json!({ "value": INF, "certified_error": 0.0 });
        json!({
            "seminorm": inf,
            "adjoint": Value::Null,
            "numerical_radius": inf,
            "weighted_radius": inf,
            "spectral_radius": inf,
            "distance_to_scalars": inf,
        })
    };
    if let (Value::Object(r), Value::Object(f)) = (&mut report, fields) {
        r.extend(f);
    }
    emit_json(cfg, &report)?;
    Ok(0)
}

pub fn range(cfg: &RunConfig) -> Result<u8, Failure> {
    let w = read_weight(cfg)?;
    let x = read_matrix(cfg.require_matrix()?)?;
    let cloud = numerical_range_cloud(
        &w,
        &x,
        cfg.n_random.unwrap_or(config::DEFAULT_N_RANDOM),
        cfg.n_boundary.unwrap_or(config::DEFAULT_N_BOUNDARY),
        cfg.seed(),
    )?;
    emit(cfg, &cloud.to_csv())?;
    let line = format!("radius_estimate = {:e}", cloud.radius_estimate);
    if cfg.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(0)
}

pub fn verify(cfg: &RunConfig) -> Result<u8, Failure> {
    let mut suite = SuiteConfig::new(cfg.trials.unwrap_or(config::DEFAULT_TRIALS), cfg.seed());
    if let Some(h) = cfg.heavy_trials {
        suite.heavy_trials = h;
    }
    if let Some(c) = &cfg.checkers {
        suite.checkers = c.clone();
    }
    if let Some(e) = &cfg.ensembles {
        suite.ensembles = e.clone();
    }
    if let Some(tol) = cfg.tol {
        suite.chain_tol = tol;
    }
    let report = run_suite(&suite)?;
    let mut text = report_to_json(&report);
    text.push('\n');
    let out = cfg.out.clone().unwrap_or_else(|| DEFAULT_REPORT.into());
    std::fs::write(&out, text).map_err(|e| Failure::config(format!("{}: {e}", out.display())))?;

    println!(
        "{:<10} {:>7} {:>6} {:>9} {:>12} {:>12}",
        "checker", "trials", "skips", "failures", "min_slack", "median_slack"
    );
    let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"));
    for (id, r) in &report {
        println!(
            "{:<10} {:>7} {:>6} {:>9} {:>12} {:>12}",
            id,
            r.trials,
            r.skips,
            r.failures.len(),
            fmt(r.min_slack),
            fmt(r.median_slack)
        );
    }
    let failures = failure_count(&report);
    println!("report: {}", out.display());
    if failures > 0 {
        println!("{failures} chain failure(s)");
        return Ok(EXIT_CHAIN_FAILURE);
    }
    Ok(0)
}

pub fn index(cfg: &RunConfig) -> Result<u8, Failure> {
    let w = read_weight(cfg)?;
    let sub = match &cfg.subalgebra {
        Some(name) => Some(Subalgebra::parse(name).ok_or_else(|| Failure::config(format!("unknown subalgebra `{name}`")))?),
        None => None,
    };
    let est = numerical_index(&w, sub, cfg.budget.unwrap_or(config::DEFAULT_BUDGET), cfg.seed())?;
    let mut value = serde_json::to_value(&est).expect("estimate serializes");
    if let Value::Object(map) = &mut value {
        map.insert("subalgebra".into(), json!(sub.unwrap_or(Subalgebra::Full).name()));
    }
    emit_json(cfg, &value)?;
    Ok(0)
}

fn parse_kind(cfg: &RunConfig, default: EnsembleKind) -> Result<EnsembleKind, Failure> {
    match &cfg.kind {
        Some(name) => EnsembleKind::parse(name).ok_or_else(|| Failure::config(format!("unknown ensemble kind `{name}`"))),
        None => Ok(default),
    }
}

pub fn tightness(cfg: &RunConfig) -> Result<u8, Failure> {
    let checker = cfg
        .checker
        .as_deref()
        .ok_or_else(|| Failure::config("--checker is required"))?;
    let kind = parse_kind(cfg, EnsembleKind::GeneralMember)?;
    let dim = cfg.dim.unwrap_or(3);
    let ens = SuiteEnsemble {
        kind,
        dim,
        rank: cfg.rank.unwrap_or(dim),
    };
    let res = tightness_search(
        checker,
        cfg.pair.unwrap_or(0),
        ens,
        cfg.budget.unwrap_or(DEFAULT_SEARCH_BUDGET),
        cfg.seed(),
    )?;
    emit_json(cfg, &serde_json::to_value(&res).expect("result serializes"))?;
    Ok(0)
}

pub fn kappa(cfg: &RunConfig) -> Result<u8, Failure> {
    let w = read_weight(cfg)?;
    let diagonal = match parse_kind(cfg, EnsembleKind::ASelfAdjoint)? {
        EnsembleKind::ASelfAdjoint => false,
        EnsembleKind::CommutativeDiagonal => true,
        other => {
            return Err(Failure::config(format!(
                "kappa search runs on a-self-adjoint or commutative-diagonal, not {}",
                other.name()
            )))
        }
    };
    let res = kappa_ratio_search(&w, diagonal, cfg.budget.unwrap_or(DEFAULT_SEARCH_BUDGET), cfg.seed())?;
    emit_json(cfg, &serde_json::to_value(&res).expect("result serializes"))?;
    Ok(0)
}
