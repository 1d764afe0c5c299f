//! Subcommand implementations: each computes via the core crate and
//! emits artifacts into the output directory.

use std::path::{Path, PathBuf};

use escape_lab_core::curvature::{minimal_dimension_search, ricci_at, scan_positivity};
use escape_lab_core::escape::{estimate_escape_rate, orbit_diagnostics, poly_lower_bound};
use escape_lab_core::geodesic::{loop_table, minimal_loop, MinimalLoop, RevolutionProfile};
use escape_lab_core::grid::grid_oracle;
use escape_lab_core::numeric::log_grid;
use escape_lab_core::warp::{validate_boundary, WarpingFunction};
use escape_lab_core::Error;

use crate::artifact::{fmt_f64, write_report, Meta, Table};
use crate::config::RunConfig;
use crate::CliError;

type CmdResult = Result<Vec<PathBuf>, CliError>;

fn check_boundary(cfg: &RunConfig) -> Result<(), CliError> {
    let report = validate_boundary(&cfg.spec, 1e-9);
    if report.is_empty() {
        Ok(())
    } else {
        Err(Error::BoundaryViolation(report.violations).into())
    }
}

pub fn cmd_curvature(cfg: &RunConfig, meta: &Meta) -> CmdResult {
    check_boundary(cfg)?;
    let c = &cfg.curvature;
    let mut table = Table::new(vec!["r", "ric_H", "ric_U", "ric_X"]);
    for &r in &log_grid(c.r_min, c.r_max, c.points) {
        let rep = ricci_at(&cfg.spec, r)?;
        table.push(vec![fmt_f64(r), fmt_f64(rep.ric_h), fmt_f64(rep.ric_u), fmt_f64(rep.ric_x)]);
    }
    let csv = table.write(&cfg.out_dir, "curvature", cfg.format, meta)?;

    let scan = scan_positivity(&cfg.spec, c.r_min, c.r_max, c.points)?;
    let p_star = match c.p_max {
        Some(p_max) => {
            minimal_dimension_search(&cfg.spec.f, &cfg.spec.h, c.r_min, c.r_max, c.points, p_max)?
        }
        None => None,
    };
    let body = serde_json::json!({
        "scan": serde_json::to_value(&scan).expect("scan serialization"),
        "p_star": p_star,
        "p_max_searched": c.p_max,
    });
    let report = write_report(&cfg.out_dir, "positivity", meta, body)?;
    Ok(vec![csv, report])
}

fn compute_table(cfg: &RunConfig) -> Result<Vec<MinimalLoop>, CliError> {
    let rows = loop_table(&cfg.spec, &cfg.ladder, &cfg.search);
    let mut out = rows
        .into_iter()
        .map(|row| row.result)
        .collect::<Result<Vec<_>, _>>()?;
    out.sort_by_key(|m| m.l);
    Ok(out)
}

fn loop_rows(table: &[MinimalLoop]) -> Table {
    let mut t = Table::new(vec!["l", "length", "max_radius", "ratio", "b", "k"]);
    for m in table {
        t.push(vec![
            m.l.to_string(),
            fmt_f64(m.length),
            fmt_f64(m.max_radius),
            fmt_f64(m.ratio()),
            m.b.map(fmt_f64).unwrap_or_default(),
            m.k.map(|k| k.to_string()).unwrap_or_default(),
        ]);
    }
    t
}

pub fn cmd_loop(cfg: &RunConfig, meta: &Meta) -> CmdResult {
    let table = compute_table(cfg)?;
    let path = loop_rows(&table).write(&cfg.out_dir, "loops", cfg.format, meta)?;
    Ok(vec![path])
}

/// Reads a loop table back from a `loops.csv` artifact.
pub fn read_loop_table(path: &Path) -> Result<Vec<MinimalLoop>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read table {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('l') {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 6 {
            return Err(Error::Parse(format!("table row needs 6 columns: {line:?}")).into());
        }
        let num = |i: usize| -> Result<f64, CliError> {
            cells[i]
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {:?} in {line:?}", cells[i])).into())
        };
        rows.push(MinimalLoop {
            l: cells[0]
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad winding {:?}", cells[0])))?,
            length: num(1)?,
            max_radius: num(2)?,
            b: if cells[4].is_empty() { None } else { Some(num(4)?) },
            k: if cells[5].is_empty() {
                None
            } else {
                Some(cells[5].parse::<u64>().map_err(|_| Error::Parse(format!("bad k {:?}", cells[5])))?)
            },
            delta_phi: None,
            candidates_examined: 0,
            tie: false,
        });
    }
    rows.sort_by_key(|m| m.l);
    Ok(rows)
}

pub fn cmd_escape(cfg: &RunConfig, meta: &Meta, table_path: Option<&Path>) -> CmdResult {
    let table = match table_path {
        Some(p) => read_loop_table(p)?,
        None => compute_table(cfg)?,
    };
    emit_escape(cfg, meta, &table)
}

fn emit_escape(cfg: &RunConfig, meta: &Meta, table: &[MinimalLoop]) -> CmdResult {
    let estimate = estimate_escape_rate(table, cfg.escape.tail_fraction)?;
    let diag = orbit_diagnostics(table, cfg.escape.epsilon)?;

    let bounds = match &cfg.spec.h {
        WarpingFunction::PolyDecay { alpha } => {
            Some(serde_json::to_value(poly_lower_bound(*alpha)?).expect("bounds serialization"))
        }
        _ => None,
    };
    let body = serde_json::json!({
        "estimate": serde_json::to_value(estimate).expect("estimate serialization"),
        "bounds": bounds,
        "epsilon": cfg.escape.epsilon,
        "tail_fraction": cfg.escape.tail_fraction,
    });
    let report = write_report(&cfg.out_dir, "escape", meta, body)?;

    let mut d_table = Table::new(vec!["R", "D", "s", "R_over_s"]);
    for ((&(r, d), &(_, s)), &(_, ratio)) in
        diag.d_curve.iter().zip(&diag.s_curve).zip(&diag.ratio_r_over_s)
    {
        d_table.push(vec![fmt_f64(r), fmt_f64(d), fmt_f64(s), fmt_f64(ratio)]);
    }
    let diag_path = d_table.write(&cfg.out_dir, "diagnostics", cfg.format, meta)?;

    let mut t_table = Table::new(vec!["l", "ratio2l", "flag19"]);
    for a in &diag.almost_translation {
        t_table.push(vec![a.l.to_string(), fmt_f64(a.ratio), a.flag.to_string()]);
    }
    let trans_path = t_table.write(&cfg.out_dir, "translation", cfg.format, meta)?;

    Ok(vec![report, diag_path, trans_path])
}

pub fn cmd_oracle(cfg: &RunConfig, meta: &Meta) -> CmdResult {
    let l = cfg.oracle.l;
    let m = minimal_loop(&cfg.spec, l, &cfg.search)?;
    let profile = RevolutionProfile::from_spec(&cfg.spec)?;
    let t_extent = match cfg.oracle.t_extent {
        Some(t) => t,
        None => {
            // corridor just above the expected excursion; profiles that
            // collapse at a finite radius must stay inside their domain
            let auto = 1.5 * m.max_radius + 0.2;
            match cfg.spec.h.domain_end() {
                Some(end) => auto.min(0.95 * end),
                None => auto,
            }
        }
    };
    let res = cfg.oracle.resolution;
    let g = grid_oracle(&profile, l, t_extent, res, res)?;
    let rel_error = (g.length - m.length) / m.length;
    let body = serde_json::json!({
        "l": l,
        "resolution": res,
        "t_extent": t_extent,
        "clairaut": serde_json::to_value(m).expect("loop serialization"),
        "grid": serde_json::to_value(g).expect("grid serialization"),
        "rel_error": rel_error,
    });
    let report = write_report(&cfg.out_dir, "oracle", meta, body)?;
    Ok(vec![report])
}

pub fn cmd_all(cfg: &RunConfig, meta: &Meta) -> CmdResult {
    let mut paths = cmd_curvature(cfg, meta)?;
    // the loop table is computed once and shared with the escape stage
    let table = compute_table(cfg)?;
    paths.push(loop_rows(&table).write(&cfg.out_dir, "loops", cfg.format, meta)?);
    paths.extend(emit_escape(cfg, meta, &table)?);
    paths.extend(cmd_oracle(cfg, meta)?);
    Ok(paths)
}
