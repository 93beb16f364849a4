//! The four `polwire` subcommands, callable without a process boundary.

use std::io::Write;
use std::path::{Path, PathBuf};

use polariton_core::model::{sample_realization, CavityGeometry};
use polariton_core::spectrum::{
    bright_mode_table, diagonalize, effective_group_velocity, ordered_dispersion, DEFAULT_BRIGHT_THRESHOLD,
};

use crate::config::{Format, RunConfig};
use crate::ensemble::{persist, run_ensemble, Axis, EnsembleResult, SweepPlan};
use crate::error::{Result, WireError};
use crate::output::{
    bright_csv, csv_bytes, number, dispersion_csv, dispersion_json, profile_csv, profile_file, series_csv,
    series_json, write_bytes, write_json,
};
use crate::pipeline::{run_realization, RealizationRun};
use crate::report::{GapField, TheoryReport};

/// Command-line values that take precedence over the configuration file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub realizations: Option<usize>,
    pub threads: Option<usize>,
    pub fit_window_fs: Option<f64>,
    pub format: Option<Format>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut RunConfig) -> Result<()> {
        if let Some(out) = &self.out {
            cfg.output.directory = out.clone();
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(w) = self.fit_window_fs {
            cfg.run.fit_window_fs = w;
        }
        if let Some(f) = self.format {
            cfg.output.formats = vec![f];
        }
        if let Some(n) = self.realizations {
            if n == 0 {
                return Err(WireError::config("--realizations", "must be at least 1"));
            }
            if let Some(s) = &mut cfg.sweep {
                s.n_realizations = n;
            }
        }
        if self.threads == Some(0) {
            return Err(WireError::config("--threads", "must be at least 1"));
        }
        cfg.validate()
    }
}

fn wants(cfg: &RunConfig, f: Format) -> bool {
    cfg.output.formats.contains(&f)
}

fn say(out: &mut dyn Write, line: std::fmt::Arguments) -> Result<()> {
    writeln!(out, "{line}").map_err(|e| WireError::io("<stdout>", e))
}

/// Ordered dispersion table plus the cavity's energy range.
pub fn dispersion(cfg: &RunConfig, out: &mut dyn Write) -> Result<()> {
    let wire = cfg.model().wire();
    let g: &CavityGeometry = &wire.geometry;
    let table = effective_group_velocity(ordered_dispersion(g, &wire.matter));
    let (lo, hi) = (g.cutoff_energy(), g.max_mode_energy());
    say(out, format_args!("cavity cutoff energy ħω₀: {lo:.2} eV"))?;
    say(out, format_args!("maximum mode energy (m_x = ±{}): {hi:.2} eV", g.m_max))?;
    say(out, format_args!("mode energy span: {:.2} eV", hi - lo))?;
    let dir = &cfg.output.directory;
    if wants(cfg, Format::Csv) {
        emit(out, &dir.join("dispersion.csv"), &dispersion_csv(&table))?;
    }
    if wants(cfg, Format::Json) {
        let path = dir.join("dispersion.json");
        write_json(&path, &dispersion_json(&table))?;
        say(out, format_args!("wrote {}", path.display()))?;
    }
    Ok(())
}

fn emit(out: &mut dyn Write, path: &Path, bytes: &[u8]) -> Result<()> {
    write_bytes(path, bytes)?;
    say(out, format_args!("wrote {}", path.display()))
}

/// One realization with the configured seed: observables, profiles and report.
pub fn propagate(cfg: &RunConfig, out: &mut dyn Write) -> Result<RealizationRun> {
    let sampling = cfg.sampling()?;
    let run = run_realization(&cfg.model(), &sampling, cfg.seed)?;
    let report = TheoryReport::from_run(&run, sampling.fit_window_fs);
    let dir = &cfg.output.directory;
    if wants(cfg, Format::Csv) {
        emit(out, &dir.join("observables.csv"), &series_csv(&run.series))?;
        for (t, p) in &run.series.profiles {
            emit(out, &dir.join(profile_file(*t)), &profile_csv(p))?;
        }
    }
    if wants(cfg, Format::Json) {
        write_json(&dir.join("observables.json"), &series_json(&run.series))?;
    }
    let path = dir.join("report.json");
    write_json(&path, &report)?;
    say(out, format_args!("wrote {}", path.display()))?;
    match run.fit {
        Some(f) => say(
            out,
            format_args!(
                "v0 fit {:.3} nm/fs (R² {:.4}), predicted {:.3} nm/fs",
                f.v0, f.r_squared, run.v0_pred
            ),
        )?,
        None => say(out, format_args!("too few samples for a ballistic fit; predicted v0 {:.3} nm/fs", run.v0_pred))?,
    }
    Ok(run)
}

/// Sweep plan described by the `sweep` section of `cfg`.
pub fn plan(cfg: &RunConfig) -> Result<SweepPlan> {
    let s = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| WireError::config("sweep", "this command needs a `sweep` section"))?;
    Ok(SweepPlan {
        base: cfg.model(),
        sampling: cfg.sampling()?,
        axis: s.axis,
        values: s.values.clone(),
        n_realizations: s.n_realizations,
        base_seed: cfg.seed,
    })
}

/// Runs the configured sweep and persists the ensemble.
pub fn sweep(cfg: &RunConfig, threads: Option<usize>, out: &mut dyn Write) -> Result<EnsembleResult> {
    let plan = plan(cfg)?;
    let result = run_ensemble(&plan, threads)?;
    let dir = &cfg.output.directory;
    persist(&result, dir)?;
    say(out, format_args!("wrote {}", dir.join(crate::ensemble::MANIFEST).display()))?;

    let name = plan.axis.name();
    let header = [
        name,
        "v0_fit_nmfs",
        "v0_fit_se_nmfs",
        "v0_pred_nmfs",
        "max_RMSD_nm",
        "chi_final",
        "t_chi95_fs",
    ];
    let col = |f: &dyn Fn(&crate::ensemble::PointSummary) -> f64| -> Vec<f64> {
        result.points.iter().map(|p| f(&p.summary)).collect()
    };
    let cols = [
        col(&|s| s.value),
        col(&|s| s.v0_fit.map_or(f64::NAN, |v| v.mean)),
        col(&|s| s.v0_fit.map_or(f64::NAN, |v| v.se)),
        col(&|s| s.v0_pred.mean),
        col(&|s| s.max_rmsd),
        col(&|s| s.chi_final),
        col(&|s| s.t_chi95_fs.unwrap_or(f64::NAN)),
    ];
    if wants(cfg, Format::Csv) {
        emit(out, &dir.join("summary.csv"), &csv_bytes(&header, &cols.iter().collect::<Vec<_>>()))?;
    }
    let reports: Vec<serde_json::Value> = result
        .points
        .iter()
        .map(|p| {
            serde_json::json!({
                name: p.summary.value,
                "report": TheoryReport::from_point(&p.summary, plan.sampling.fit_window_fs),
            })
        })
        .collect();
    let path = dir.join("report.json");
    write_json(&path, &reports)?;
    say(out, format_args!("wrote {}", path.display()))?;
    for p in &result.points {
        let s = &p.summary;
        say(
            out,
            format_args!(
                "{name} = {}: v0 fit {} nm/fs, predicted {:.3} nm/fs, max RMSD {:.1} nm",
                s.value,
                s.v0_fit.map_or("n/a".to_owned(), |v| format!("{:.3} ± {:.3}", v.mean, v.se)),
                s.v0_pred.mean,
                s.max_rmsd
            ),
        )?;
    }
    Ok(result)
}

/// Bright-mode tables, polariton gap and Rabi period across disorder levels.
///
/// Uses the `sweep` section when its axis is `sigma_M_eV`; otherwise the
/// configured σ_M alone, with a single realization.
pub fn signatures(cfg: &RunConfig, threads: Option<usize>, out: &mut dyn Write) -> Result<EnsembleResult> {
    let plan = match &cfg.sweep {
        Some(s) if s.axis == Axis::SigmaM => plan(cfg)?,
        Some(s) => {
            return Err(WireError::config(
                "sweep.axis",
                format!("signatures sweeps sigma_M_eV, not {}", s.axis.name()),
            ))
        }
        None => SweepPlan {
            base: cfg.model(),
            sampling: cfg.sampling()?,
            axis: Axis::SigmaM,
            values: vec![cfg.matter.sigma_m_ev],
            n_realizations: 1,
            base_seed: cfg.seed,
        },
    };
    let result = run_ensemble(&plan, threads)?;
    let dir = &cfg.output.directory;
    let rabi = cfg.matter.omega_r_ev;

    let mut rows = csv::Writer::from_writer(Vec::new());
    let record = |w: &mut csv::Writer<Vec<u8>>, fields: Vec<String>| {
        w.write_record(fields).expect("in-memory write")
    };
    record(
        &mut rows,
        ["sigma_M_eV", "sigma_M_over_Omega_R", "gap_eV", "resolved", "realizations", "rabi_period_fs"]
            .map(str::to_owned)
            .to_vec(),
    );
    let mut reports = Vec::new();
    for p in &result.points {
        let s = &p.summary;
        let model = plan.point(s.index);
        let wire = model.wire();
        let real = sample_realization(&wire.matter, plan.seed(s.index, 0))?;
        let spectrum = diagonalize(&wire.hamiltonian(&real)?)?;
        let bright = bright_mode_table(&spectrum, DEFAULT_BRIGHT_THRESHOLD);
        emit(out, &dir.join(format!("bright_modes_{:03}.csv", s.index)), &bright_csv(&bright))?;

        let gap = GapField::from(s.gap.value());
        record(
            &mut rows,
            vec![
                number(s.value),
                number(s.value / rabi),
                match gap {
                    GapField::Energy(g) => number(g),
                    GapField::Marker(_) => "unresolved".to_owned(),
                },
                s.gap.resolved.to_string(),
                s.gap.total.to_string(),
                s.rabi_period_fs.map_or(String::new(), |t| number(t)),
            ],
        );
        say(
            out,
            format_args!(
                "σ_M/Ω_R = {:.3}: gap {}, Rabi period {}",
                s.value / rabi,
                match gap {
                    GapField::Energy(g) => format!("{g:.4} eV"),
                    GapField::Marker(_) => "unresolved".to_owned(),
                },
                s.rabi_period_fs.map_or("none".to_owned(), |t| format!("{t:.2} fs"))
            ),
        )?;
        reports.push(serde_json::json!({
            "sigma_M_eV": s.value,
            "report": TheoryReport::from_point(s, plan.sampling.fit_window_fs),
        }));
    }
    emit(out, &dir.join("gaps.csv"), &rows.into_inner().expect("in-memory flush"))?;
    let path = dir.join("signatures.json");
    write_json(&path, &reports)?;
    say(out, format_args!("wrote {}", path.display()))?;
    Ok(result)
}
