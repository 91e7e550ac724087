//! Implementations of the five subcommands.
//!
//! Each command resolves its parameters (flag > config > default), runs the
//! computation, and writes `report.json` plus CSV tables into the output
//! directory. Identical parameters and seed produce byte-identical files.

use num_complex::Complex64;
use serde_json::json;
use std::path::Path;

use atomkit::decomp::{synthesize, Decomposition, Element};
use atomkit::diagnostics::{boundedly_complete_curve, shrinking_curve, TailCurve, UnitVectorSystem};
use atomkit::disc::DiscDecomposition;
use atomkit::error::{Error, Result};
use atomkit::expdecomp::{self, ExpDecomposition};
use atomkit::extend::ExtensionBackend;
use atomkit::gabor::{summability_certificate, GaborDecomposition, GaborSystem};
use atomkit::grid::GridFunction;
use atomkit::perturb::{
    contraction_estimate, dual_gap_thresholds, transfer_residual, PerturbedAtoms, PerturbedDuals,
};
use atomkit::probes;
use atomkit::report::{fmt_f64, write_csv_table, Report};

use crate::config::Config;
use crate::{DiagnoseArgs, DiscArgs, ExpArgs, GaborArgs, PerturbArgs};

fn parse_backend(name: &str) -> Result<ExtensionBackend> {
    match name {
        "caller-global" => Ok(ExtensionBackend::CallerGlobal),
        "reflection" => Ok(ExtensionBackend::Reflection { order: 8 }),
        other => Err(Error::rejected(format!(
            "unknown backend {other:?}; expected caller-global or reflection"
        ))),
    }
}

pub fn expdecomp(out: &Path, seed: u64, cfg: &Config, args: &ExpArgs) -> Result<()> {
    let m = args.m.or(cfg.expdecomp.m).unwrap_or(1.0);
    let grid_n = args.grid_n.or(cfg.expdecomp.grid_n).unwrap_or(1024);
    let j_max = args.j_max.or(cfg.expdecomp.j_max).unwrap_or(64);
    let plateau = args
        .plateau_fraction
        .or(cfg.expdecomp.plateau_fraction)
        .unwrap_or(expdecomp::DEFAULT_PLATEAU_FRACTION);
    let probe_name = args
        .probe
        .clone()
        .or_else(|| cfg.expdecomp.probe.clone())
        .unwrap_or_else(|| "smooth".to_string());
    let backend_name = args
        .backend
        .clone()
        .or_else(|| cfg.expdecomp.backend.clone())
        .unwrap_or_else(|| "caller-global".to_string());
    let remove = args.remove.or(cfg.expdecomp.remove);
    let backend = parse_backend(&backend_name)?;

    let d = ExpDecomposition::new(m, 1, grid_n, j_max, plateau, backend)?;
    let f = match probe_name.as_str() {
        "smooth" => probes::exp_smooth_probe(m, grid_n)?,
        "trig" => probes::exp_trig_probe(m, grid_n, 8, seed)?,
        other => return Err(Error::rejected(format!("unknown probe {other:?}"))),
    };
    // the reflection backend analyzes samples given on K only
    let f_in = match backend {
        ExtensionBackend::CallerGlobal => f.clone(),
        ExtensionBackend::Reflection { .. } => {
            GridFunction::from_fn_1d(m, grid_n / 2, None, |x| {
                // resample the probe on K
                let idx = ((x + 2.0 * m) / (4.0 * m) * grid_n as f64).round() as usize;
                f.samples[idx.min(grid_n - 1)]
            })?
        }
    };
    let hf = d.extend(&f_in)?;
    let coeffs = expdecomp::fourier_coeffs(&hf, j_max)?;

    let mut report = Report::new(
        "expdecomp",
        seed,
        json!({
            "m": m, "grid_n": grid_n, "j_max": j_max, "plateau_fraction": plateau,
            "probe": probe_name, "backend": backend_name, "remove": remove,
        }),
    );

    {
        let mut buf = Vec::new();
        coeffs
            .write_csv(&mut buf)
            .map_err(|e| Error::rejected(format!("io error: {e}")))?;
        atomkit::report::write_text(
            &out.join("coefficients.csv"),
            std::str::from_utf8(&buf).expect("utf8"),
        )?;
    }

    let decay = expdecomp::decay_report(&coeffs, 6)?;
    write_csv_table(
        &out.join("decay.csv"),
        &["m", "weighted_sup"],
        &decay
            .rows
            .iter()
            .map(|r| vec![r.m.to_string(), fmt_f64(r.weighted_sup)])
            .collect::<Vec<_>>(),
    )?;
    report.add_result("decay_slope", decay.fitted_slope)?;
    report.add_result("decay_fit_range", decay.fit_range)?;

    // residuals of the partial sums against the periodized extension
    let mut residual_rows = Vec::new();
    let mut last_residuals = Vec::new();
    for shell in [j_max / 2, j_max] {
        let upto = d.positions_up_to_shell(shell);
        let rec = synthesize(&d, &coeffs.values, upto)?;
        let mut res = hf.clone();
        res.scaled_add(Complex64::new(-1.0, 0.0), &rec);
        for n in 0..=3usize {
            let q = d.seminorms().eval(n, &res)?;
            residual_rows.push(vec![n.to_string(), upto.to_string(), fmt_f64(q)]);
            if shell == j_max {
                last_residuals.push(q);
            }
        }
    }
    write_csv_table(&out.join("residuals.csv"), &["n", "upto", "residual"], &residual_rows)?;
    report.add_result("residuals_full_truncation", &last_residuals)?;
    report.add_result("atom_count", d.atom_count())?;

    if let Some(j0) = remove {
        let removed = expdecomp::remove_atom(&d, [j0, 0])?;
        report.add_gate("removal_margin", true, "margin above 1e-6");
        let corrected = removed.coefficients(&f)?;
        let rec = synthesize(&removed, &corrected, corrected.len())?;
        let mut res = hf.clone();
        res.scaled_add(Complex64::new(-1.0, 0.0), &rec);
        let q2 = d.seminorms().eval(2, &res)?;
        report.add_result("removal_residual_q2", q2)?;
        // change of the dual at reference index 5 under the correction
        let base_coeffs = d.coefficients(&f)?;
        let j0_pos = d.indices().iter().position(|&j| j == [j0, 0]).expect("validated");
        if let Some(p5) = d.indices().iter().position(|&j| j == [5, 0]) {
            // positions after removal shift down by one past j0
            let new_pos = if p5 < j0_pos { p5 } else { p5 - 1 };
            let change = (corrected[new_pos] - base_coeffs[p5]).norm();
            report.add_result("dual_change_at_5", change)?;
        }
    }

    report.write_json(&out.join("report.json"))
}

pub fn gabor(out: &Path, seed: u64, cfg: &Config, args: &GaborArgs) -> Result<()> {
    let l = args.l.or(cfg.gabor.l).unwrap_or(64);
    let a = args.a.or(cfg.gabor.a).unwrap_or(4);
    let b = args.b.or(cfg.gabor.b).unwrap_or(4);
    let n_probes = args.probes.or(cfg.gabor.probes).unwrap_or(50);
    let order = args.order.or(cfg.gabor.order).unwrap_or(2);

    let sys = GaborSystem::new(l, a, b)?;
    let (lo, hi) = sys.frame_bounds()?;
    let d = GaborDecomposition::new(sys)?;

    let mut report = Report::new(
        "gabor",
        seed,
        json!({"l": l, "a": a, "b": b, "probes": n_probes, "order": order}),
    );
    report.add_gate("frame_lower_bound", true, format!("A = {lo}"));
    report.add_result("frame_bounds", (lo, hi))?;

    let mut worst = 0.0f64;
    for i in 0..n_probes {
        let f = probes::gabor_random_probe(l, seed.wrapping_add(i as u64))?;
        let coeffs = d.coefficients(&f)?;
        let rec = synthesize(&d, &coeffs, coeffs.len())?;
        worst = worst.max(rec.sub(&f).norm_sup());
    }
    report.add_result("max_reconstruction_error", worst)?;

    let window_probe = d.system.shift_modulate(0, 0, &d.system.window);
    let cert = summability_certificate(&d, &window_probe, order)?;
    write_csv_table(
        &out.join("shells.csv"),
        &["shell", "partial_sum"],
        &cert
            .shells
            .iter()
            .map(|(s, v)| vec![s.to_string(), fmt_f64(*v)])
            .collect::<Vec<_>>(),
    )?;
    report.add_result("summability_total", cert.total)?;
    report.add_result("summability_bound", cert.bound)?;
    report.add_result("summability_weight_orders", (cert.n, cert.big_n))?;

    report.write_json(&out.join("report.json"))
}

pub fn disc(out: &Path, seed: u64, cfg: &Config, args: &DiscArgs) -> Result<()> {
    let depth = args.depth.or(cfg.disc.depth).unwrap_or(6);
    let degree = args.degree.or(cfg.disc.degree).unwrap_or(32);
    let orders = args
        .orders
        .clone()
        .or_else(|| cfg.disc.orders.clone())
        .unwrap_or_else(|| vec![1, 2, 3]);

    let d = DiscDecomposition::new(depth, degree)?;
    let mut report = Report::new(
        "disc",
        seed,
        json!({"depth": depth, "degree": degree, "orders": orders}),
    );
    report.add_gate(
        "condition",
        true,
        format!("condition {} within ceiling", fmt_f64(d.condition)),
    );
    report.add_result("condition", d.condition)?;
    report.add_result("total_area", d.partition.total_area())?;
    report.add_result("cell_count", d.atom_count())?;

    write_csv_table(
        &out.join("cells.csv"),
        &["j", "r_lo", "r_hi", "theta_lo", "theta_hi", "area", "centroid_re", "centroid_im"],
        &d.partition
            .cells
            .iter()
            .enumerate()
            .map(|(j, c)| {
                vec![
                    j.to_string(),
                    fmt_f64(c.r_lo),
                    fmt_f64(c.r_hi),
                    fmt_f64(c.theta_lo),
                    fmt_f64(c.theta_hi),
                    fmt_f64(c.area),
                    fmt_f64(c.centroid.re),
                    fmt_f64(c.centroid.im),
                ]
            })
            .collect::<Vec<_>>(),
    )?;

    let f = probes::disc_geometric_probe(degree)?;
    let coeffs = d.coefficients(&f)?;
    let rec = synthesize(&d, &coeffs, coeffs.len())?;
    let mut res = f.clone();
    res.scaled_add(Complex64::new(-1.0, 0.0), &rec);
    let mut rows = Vec::new();
    let mut residuals = Vec::new();
    for &n in &orders {
        let q = d.seminorm(n, &res)?;
        rows.push(vec![n.to_string(), fmt_f64(q)]);
        residuals.push(q);
    }
    write_csv_table(&out.join("residuals.csv"), &["n", "residual"], &rows)?;
    report.add_result("residuals", &residuals)?;

    report.write_json(&out.join("report.json"))
}

pub fn perturb(out: &Path, seed: u64, cfg: &Config, args: &PerturbArgs) -> Result<()> {
    let mode = args
        .mode
        .clone()
        .or_else(|| cfg.perturb.mode.clone())
        .unwrap_or_else(|| "atoms".to_string());
    let scale = args.scale.or(cfg.perturb.scale).unwrap_or(1e-3);
    let budget = args
        .contraction_budget
        .or(cfg.perturb.contraction_budget)
        .unwrap_or(atomkit::perturb::DEFAULT_CONTRACTION);
    let tol = args
        .series_tol
        .or(cfg.perturb.series_tol)
        .unwrap_or(atomkit::perturb::DEFAULT_SERIES_TOL);

    let d = ExpDecomposition::new(
        1.0,
        1,
        1024,
        64,
        expdecomp::DEFAULT_PLATEAU_FRACTION,
        ExtensionBackend::CallerGlobal,
    )?;
    let f = probes::exp_smooth_probe(1.0, 1024)?;
    let probe_set = vec![
        f.clone(),
        probes::exp_trig_probe(1.0, 1024, 6, seed.wrapping_add(1))?,
        probes::exp_trig_probe(1.0, 1024, 6, seed.wrapping_add(2))?,
    ];

    let mut report = Report::new(
        "perturb",
        seed,
        json!({"mode": mode, "scale": scale, "contraction_budget": budget, "series_tol": tol}),
    );

    let thresholds = dual_gap_thresholds(&d, 8)?;
    write_csv_table(
        &out.join("thresholds.csv"),
        &["j", "p_j_atom", "p_1_atom", "threshold"],
        &thresholds
            .iter()
            .map(|r| {
                vec![
                    r.j.to_string(),
                    fmt_f64(r.p_j_atom),
                    fmt_f64(r.p_1_atom),
                    fmt_f64(r.threshold),
                ]
            })
            .collect::<Vec<_>>(),
    )?;

    match mode.as_str() {
        "atoms" => {
            let new_atoms: Vec<GridFunction> = (0..d.atom_count())
                .map(|pos| {
                    let mut atom = d.atom(pos);
                    let noise = probes::exp_trig_probe(
                        1.0,
                        1024,
                        4,
                        seed.wrapping_mul(1_000_003).wrapping_add(pos as u64),
                    )?;
                    atom.scaled_add(Complex64::new(scale, 0.0), &noise);
                    Ok(atom)
                })
                .collect::<Result<_>>()?;
            let p = PerturbedAtoms::new(&d, new_atoms, budget, tol)?;
            let c = contraction_estimate(
                &|x: &GridFunction| p.difference_apply(x),
                &probe_set,
                |g| d.seminorm(1, g),
            )?;
            if c > budget {
                return Err(Error::gate(format!(
                    "certified contraction {c:.3e} exceeds the series budget {budget}"
                )));
            }
            report.add_result("contraction_certified", c)?;
            report.add_result("series_terms", p.series_terms())?;
            let residual = transfer_residual(&p, &f, 1)?;
            report.add_result("transfer_residual_q1", residual)?;
        }
        "duals" => {
            let count = thresholds.len();
            let deltas: Vec<f64> = thresholds.iter().map(|r| 0.5 * r.threshold).collect();
            let noise: Vec<Box<dyn Fn(&GridFunction) -> Complex64 + Sync>> = (0..d.atom_count())
                .map(|pos| {
                    let delta = if pos < count { deltas[pos] } else { 0.0 };
                    let idx = 256 + 17 * pos % 512;
                    Box::new(move |g: &GridFunction| g.samples[idx] * delta)
                        as Box<dyn Fn(&GridFunction) -> Complex64 + Sync>
                })
                .collect();
            let p = PerturbedDuals::new(&d, noise, budget, tol)?;
            let c = contraction_estimate(
                &|x: &GridFunction| p.noise_apply(x),
                &probe_set,
                |g| d.seminorm(1, g),
            )?;
            if c > budget {
                return Err(Error::gate(format!(
                    "certified contraction {c:.3e} exceeds the series budget {budget}"
                )));
            }
            report.add_result("contraction_certified", c)?;
            let residual = transfer_residual(&p, &f, 1)?;
            report.add_result("transfer_residual_q1", residual)?;
        }
        other => return Err(Error::rejected(format!("unknown mode {other:?}"))),
    }

    report.write_json(&out.join("report.json"))
}

fn curve_rows(curve: &TailCurve) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (i, v) in curve.values.iter().enumerate() {
        let t = curve.truncations.get(i).copied().unwrap_or(0);
        rows.push(vec![t.to_string(), fmt_f64(*v)]);
    }
    rows
}

pub fn diagnose(out: &Path, seed: u64, cfg: &Config, args: &DiagnoseArgs) -> Result<()> {
    let space = args
        .space
        .clone()
        .or_else(|| cfg.diagnose.space.clone())
        .unwrap_or_else(|| "exp".to_string());
    let order = args.order.or(cfg.diagnose.order).unwrap_or(1);

    let mut report = Report::new("diagnose", seed, json!({"space": space, "order": order}));

    let (shrink, blocks) = match space.as_str() {
        "exp" => {
            let d = ExpDecomposition::new(
                1.0,
                1,
                1024,
                64,
                expdecomp::DEFAULT_PLATEAU_FRACTION,
                ExtensionBackend::CallerGlobal,
            )?;
            let f = probes::exp_smooth_probe(1.0, 1024)?;
            let truncations: Vec<usize> =
                [8, 16, 32, 64].iter().map(|&s| d.positions_up_to_shell(s)).collect();
            let functionals: Vec<Box<dyn Fn(&GridFunction) -> Complex64>> = [256usize, 512, 640]
                .iter()
                .map(|&i| {
                    Box::new(move |g: &GridFunction| g.samples[i])
                        as Box<dyn Fn(&GridFunction) -> Complex64>
                })
                .collect();
            let shrink = shrinking_curve(&d, &[f.clone()], &functionals, &truncations)?;
            let coeffs = d.coefficients(&f)?;
            let blocks = boundedly_complete_curve(&d, &coeffs, order, &truncations)?;
            (shrink, blocks)
        }
        "gabor" => {
            let sys = GaborSystem::new(64, 4, 4)?;
            let d = GaborDecomposition::new(sys)?;
            // a time-frequency shifted window: its lattice coefficients
            // decay away from the shift, so the block curve is informative
            let f = d.system.shift_modulate(4, 8, &d.system.window);
            let truncations = vec![16usize, 64, 128, 256];
            let functionals: Vec<Box<dyn Fn(&GridFunction) -> Complex64>> = [0usize, 7, 31]
                .iter()
                .map(|&i| {
                    Box::new(move |g: &GridFunction| g.samples[i])
                        as Box<dyn Fn(&GridFunction) -> Complex64>
                })
                .collect();
            let shrink = shrinking_curve(&d, &[f.clone()], &functionals, &truncations)?;
            let coeffs = d.coefficients(&f)?;
            let blocks = boundedly_complete_curve(&d, &coeffs, order, &truncations)?;
            (shrink, blocks)
        }
        "disc" => {
            let d = DiscDecomposition::new(3, 16)?;
            let f = probes::disc_geometric_probe(16)?;
            // annulus-aligned truncations: blocks are whole annuli
            let truncations = vec![8usize, 24, 56, d.atom_count()];
            let points = [Complex64::new(0.3, 0.0), Complex64::new(0.0, 0.5)];
            let functionals: Vec<Box<dyn Fn(&atomkit::disc::TaylorRep) -> Complex64>> = points
                .iter()
                .map(|&z| {
                    Box::new(move |g: &atomkit::disc::TaylorRep| g.eval(z))
                        as Box<dyn Fn(&atomkit::disc::TaylorRep) -> Complex64>
                })
                .collect();
            let shrink = shrinking_curve(&d, &[f.clone()], &functionals, &truncations)?;
            let coeffs = d.coefficients(&f)?;
            let blocks = boundedly_complete_curve(&d, &coeffs, order, &truncations)?;
            (shrink, blocks)
        }
        "counterexample" => {
            let sys = UnitVectorSystem::new(256)?;
            let f = sys.harmonic_element();
            let phi = sys.summation_functional();
            let truncations = vec![8usize, 16, 32, 64];
            let shrink = shrinking_curve(&sys, &[f.clone()], &[phi], &truncations)?;
            let coeffs = sys.coefficients(&f)?;
            let blocks = boundedly_complete_curve(&sys, &coeffs, order, &truncations)?;
            (shrink, blocks)
        }
        other => return Err(Error::rejected(format!("unknown space {other:?}"))),
    };

    write_csv_table(&out.join("shrinking_curve.csv"), &["truncation", "sup"], &curve_rows(&shrink))?;
    write_csv_table(&out.join("block_curve.csv"), &["truncation", "block_seminorm"], &curve_rows(&blocks))?;
    report.add_result("shrinking_decrease_factor", shrink.decrease_factor)?;
    report.add_result("shrinking_verdict", shrink.verdict)?;
    report.add_result("block_decrease_factor", blocks.decrease_factor)?;
    report.add_result("block_verdict", blocks.verdict)?;

    report.write_json(&out.join("report.json"))
}
