//! Subcommand implementations.

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::Context;
use serde::Serialize;

use lagsurf::{
    catalog, hs_residual_suite, lagrangian_residual, nonexistence_certificate, r2k_invariant,
    self_similar_residual, ImmersionSpec, ResidualReport, SolitonParams,
};

use crate::config::{CheckConfig, Projection, SceneConfig};
use crate::mesh;

/// Documented pass thresholds for the verification checks.
pub mod thresholds {
    pub const LAGRANGIAN: f64 = 1e-9;
    pub const SELF_SIMILAR: f64 = 1e-8;
    pub const HAMILTONIAN_STATIONARY: f64 = 1e-4;
    pub const R2K: f64 = 1e-8;
    pub const CONSTRAINTS: f64 = 1e-8;
}

pub fn cmd_catalog(json: bool) -> anyhow::Result<ExitCode> {
    #[derive(Serialize)]
    struct Entry<'a> {
        name: &'a str,
        params: Vec<(&'a str, f64)>,
        description: &'a str,
    }
    let entries: Vec<Entry> = catalog()
        .iter()
        .map(|e| Entry {
            name: e.name,
            params: e.params.to_vec(),
            description: e.description,
        })
        .collect();
    if json {
        println!("{}", serde_json::to_string_pretty(&entries)?);
    } else {
        for e in &entries {
            let params = if e.params.is_empty() {
                String::new()
            } else {
                let inner: Vec<String> = e
                    .params
                    .iter()
                    .map(|(n, d)| format!("{n}={d}"))
                    .collect();
                format!("({})", inner.join(", "))
            };
            println!("{}{}\n    {}", e.name, params, e.description);
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct CheckResult {
    check: String,
    threshold: f64,
    pass: bool,
    report: ResidualReport,
}

#[derive(Serialize)]
struct VerifyReport {
    surface: String,
    args: Vec<f64>,
    pass: bool,
    checks: Vec<CheckResult>,
}

fn run_check(
    spec: &ImmersionSpec,
    grid: &lagsurf::GridSpec,
    check: &CheckConfig,
) -> anyhow::Result<CheckResult> {
    let (name, threshold, report) = match check {
        CheckConfig::Lagrangian => (
            "lagrangian".to_string(),
            thresholds::LAGRANGIAN,
            lagrangian_residual(spec, grid)?,
        ),
        CheckConfig::SelfSimilar { lambda } => (
            format!("self_similar(lambda={lambda})"),
            thresholds::SELF_SIMILAR,
            self_similar_residual(spec, &SolitonParams::new(*lambda)?, grid)?,
        ),
        CheckConfig::HamiltonianStationary => (
            "hamiltonian_stationary".to_string(),
            thresholds::HAMILTONIAN_STATIONARY,
            hs_residual_suite(spec, grid)?,
        ),
        CheckConfig::R2k => (
            "r2K".to_string(),
            thresholds::R2K,
            r2k_invariant(spec, grid.n_s.max(16))?,
        ),
        CheckConfig::Constraints => (
            "constraints".to_string(),
            thresholds::CONSTRAINTS,
            spec.constraint_residual(grid.n_s.max(64))?,
        ),
    };
    Ok(CheckResult {
        check: name,
        pass: report.max_abs < threshold,
        threshold,
        report,
    })
}

pub fn cmd_verify(config_path: &Path, json: bool) -> anyhow::Result<ExitCode> {
    let cfg = SceneConfig::load(config_path)?;
    if cfg.checks.is_empty() {
        anyhow::bail!("config lists no checks");
    }
    let spec = cfg.build_surface()?;
    let grid = cfg.grid_for(&spec);
    let mut checks = Vec::new();
    for check in &cfg.checks {
        checks.push(run_check(&spec, &grid, check)?);
    }
    let pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        surface: cfg.surface.name.clone(),
        args: cfg.surface.args.clone(),
        pass,
        checks,
    };
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        for c in &report.checks {
            println!(
                "{:<40} max {:>12.4e}  mean {:>12.4e}  threshold {:>8.1e}  {}",
                c.check,
                c.report.max_abs,
                c.report.mean_abs,
                c.threshold,
                if c.pass { "PASS" } else { "FAIL" }
            );
        }
        println!("overall: {}", if pass { "PASS" } else { "FAIL" });
    }
    if let Some(out) = &cfg.output {
        write_outputs(&cfg, &spec, out, &report)?;
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn write_outputs(
    cfg: &SceneConfig,
    spec: &ImmersionSpec,
    out: &crate::config::OutputConfig,
    report: &VerifyReport,
) -> anyhow::Result<()> {
    let base = out.path.clone().unwrap_or_else(|| "lagsurf_out".into());
    let grid = cfg.grid_for(spec);
    for format in &out.formats {
        match format.as_str() {
            "json" => {
                let path = std::path::PathBuf::from(format!("{base}.json"));
                atomic_write(&path, serde_json::to_string_pretty(report)?.as_bytes())?;
            }
            "csv" => {
                let path = std::path::PathBuf::from(format!("{base}.csv"));
                let mut text = String::from("s,t,re_z1,im_z1,re_z2,im_z2\n");
                for &s in &grid.s_nodes() {
                    for &t in &grid.t_nodes(spec.periodic_t()) {
                        let p = spec.position(s, t)?;
                        text.push_str(&format!(
                            "{},{},{},{},{},{}\n",
                            fmt(s),
                            fmt(t),
                            fmt(p.z1.re),
                            fmt(p.z1.im),
                            fmt(p.z2.re),
                            fmt(p.z2.im)
                        ));
                    }
                }
                atomic_write(&path, text.as_bytes())?;
            }
            "obj" => {
                let path = std::path::PathBuf::from(format!("{base}.obj"));
                mesh::write_obj(spec, &grid, out.projection, true, &path)?;
            }
            other => anyhow::bail!("unknown output format '{other}'"),
        }
    }
    Ok(())
}

/// 17 significant digits: round-trip exact for f64.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn atomic_write(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)
            .with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn cmd_profile(
    c: Option<f64>,
    pq: Option<&[u32]>,
    out: &Path,
    periods: u32,
    samples: usize,
) -> anyhow::Result<ExitCode> {
    let table = match (c, pq) {
        (Some(c), None) => {
            let regime = lagsurf::classify_regime(c);
            if regime != lagsurf::Regime::BoundedClosedFamily {
                anyhow::bail!(
                    "C = {c} is outside the closed-curve regime (classify_regime: {regime:?}); \
                     profiles with |C| <= 2 spiral or degenerate and are not exported"
                );
            }
            lagsurf::profile_table(c, periods, samples)?
        }
        (None, Some(pq)) => {
            let (p, q) = (pq[0], pq[1]);
            let profile = lagsurf::build_closed_hs_curve(p, q, samples)?;
            // Export exactly q periods of the closed curve.
            lagsurf::profile_table(profile.c_flux, q, samples)?
        }
        _ => anyhow::bail!("exactly one of --C or --pq is required"),
    };
    let mut text = String::from("s,r,alpha,phi,gamma_re,gamma_im,first_integral\n");
    for row in &table.rows {
        let [s, r, alpha, phi, e] = *row;
        let gamma_re = r * phi.cos();
        let gamma_im = r * phi.sin();
        text.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt(s),
            fmt(r),
            fmt(alpha),
            fmt(phi),
            fmt(gamma_re),
            fmt(gamma_im),
            fmt(e)
        ));
    }
    atomic_write(out, text.as_bytes())?;
    println!(
        "wrote {} rows at C = {:.12} to {}",
        table.rows.len(),
        table.c_flux,
        out.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_mesh(config_path: &Path, out_override: Option<&Path>) -> anyhow::Result<ExitCode> {
    let cfg = SceneConfig::load(config_path)?;
    let spec = cfg.build_surface()?;
    let grid = cfg.grid_for(&spec);
    let projection = cfg
        .output
        .as_ref()
        .map(|o| o.projection)
        .unwrap_or(Projection::Re1Im1Re2);
    let path = match out_override {
        Some(p) => p.to_path_buf(),
        None => {
            let base = cfg
                .output
                .as_ref()
                .and_then(|o| o.path.clone())
                .unwrap_or_else(|| "lagsurf_mesh".into());
            std::path::PathBuf::from(format!("{base}.obj"))
        }
    };
    let stats = mesh::write_obj(&spec, &grid, projection, true, &path)?;
    println!(
        "wrote {} vertices, {} triangles, {} leaf polylines to {}",
        stats.vertices,
        stats.triangles,
        stats.circle_polylines,
        path.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn cmd_certify() -> anyhow::Result<ExitCode> {
    let start = std::time::Instant::now();
    let report = nonexistence_certificate();
    let elapsed = start.elapsed();
    println!("roots of E(0, Y):            Y+ = {:.12}, Y- = {:.12}", report.y_roots.0, report.y_roots.1);
    println!(
        "E at roots:                  {:.3e}, {:.3e}",
        report.e_at_roots.0, report.e_at_roots.1
    );
    println!(
        "dE/dY at roots (simplicity): {:.6}, {:.6}",
        report.de_dy_at_roots.0, report.de_dy_at_roots.1
    );
    println!(
        "F at roots:                  {:.6}, {:.6} (expected magnitudes {:.6}, {:.6})",
        report.f_at_roots.0,
        report.f_at_roots.1,
        report.f_expected_magnitudes.0,
        report.f_expected_magnitudes.1
    );
    println!(
        "reduced-system minima:       {} and {} (both nonzero for all real w)",
        report.endgame_minima.0, report.endgame_minima.1
    );
    println!(
        "quaternion sweep over {} seeded samples: max closed-form error {:.3e} (u), {:.3e} (v); \
         factorization {:.3e}; v = -u i {:.3e}",
        report.quaternions.n,
        report.quaternions.max_u_err,
        report.quaternions.max_v_err,
        report.quaternions.max_factorization_err,
        report.quaternions.max_v_is_minus_ui_err
    );
    println!("elapsed: {:.1} ms", elapsed.as_secs_f64() * 1e3);
    println!("certificate: {}", if report.pass { "PASS" } else { "FAIL" });
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
