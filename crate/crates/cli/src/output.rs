//! Rendering of scenario results and the file writer.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use crate::config::Format;
use crate::error::CliError;
use crate::scenario::{grid_header, jsd_table, ContrastRun, DesignRun, JsdRun, SpectrumRun, SpontRun, StateRun, StimSweepRun};
use braggsim_core::SweepResult;

/// Data files of one subcommand, in write order.
#[derive(Debug, Default)]
pub struct Bundle {
    pub files: Vec<(String, String)>,
    /// One-line summaries for the terminal.
    pub lines: Vec<String>,
}

impl Bundle {
    fn table(&mut self, stem: &str, table: &SweepResult, format: Format) {
        match format {
            Format::Csv => self.files.push((format!("{stem}.csv"), table.to_csv())),
            Format::Json => self.files.push((format!("{stem}.json"), table.to_json())),
        }
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) {
        let text = serde_json::to_string_pretty(value).expect("summary serializes") + "\n";
        self.files.push((name.to_string(), text));
    }

    /// Prefixes every file with `dir/`, for the combined report.
    pub fn nest(mut self, dir: &str) -> Bundle {
        for (name, _) in &mut self.files {
            *name = format!("{dir}/{name}");
        }
        self
    }

    pub fn extend(&mut self, other: Bundle) {
        self.files.extend(other.files);
        self.lines.extend(other.lines);
    }
}

pub fn spectrum(run: &SpectrumRun, format: Format) -> Bundle {
    let mut b = Bundle::default();
    b.table("spectrum", &run.table, format);
    b.json("stopband.json", &run.stopband);
    b.lines.push(match &run.stopband {
        Some(s) => format!(
            "stopband centre {:.3} nm, rejection {:.2} dB, >10 dB width {:.3} nm",
            s.center_wavelength * 1e9,
            s.rejection_db_at_center,
            s.bandwidth_at_10db * 1e9
        ),
        None => "no stopband in the configured range".into(),
    });
    b
}

pub fn design(run: &DesignRun) -> Bundle {
    let mut b = Bundle::default();
    b.json("design.json", run);
    b.lines.push(format!("N={}", run.n_periods));
    b
}

pub fn stim_sweep(run: &StimSweepRun, format: Format) -> Bundle {
    let mut b = Bundle::default();
    b.table("stim_sweep", &run.table, format);
    b.json("dip.json", &run.summary);
    let s = &run.summary;
    b.lines.push(format!(
        "dip at {:.3} nm ({:+.3} nm from stopband centre), depth {:.2} dB below off-band median {:.3e} /s/mW²",
        s.dip.center_wavelength * 1e9,
        s.center_offset_nm,
        s.dip.depth_db,
        s.dip.off_band_median_per_mw2
    ));
    b
}

pub fn spont_rate(run: &SpontRun) -> Bundle {
    let mut b = Bundle::default();
    b.json("spont_rate.json", run);
    b.lines.push(format!(
        "pump {:.3} nm: P_spont {:.4e} W, {:.4e} pairs/s ({:.4e} per mW²)",
        run.pump_wavelength * 1e9,
        run.spontaneous.power,
        run.spontaneous.rate,
        run.rate_per_mw2
    ));
    b
}

pub fn contrast(run: &ContrastRun, format: Format) -> Bundle {
    let mut b = Bundle::default();
    for (db, s) in &run.sweeps {
        b.table(&format!("contrast_sweep_{db}db"), &s.sweep, format);
        b.lines.push(format!(
            "{db} dB target: log-log slope {}",
            s.slope.map_or("undefined (fewer than two points)".into(), |v| format!("{v:.4}"))
        ));
    }
    b.json("contrast_summary.json", &run.reference);
    b.lines.push(format!(
        "at Δn = {:e}: pair rates {:?} /s, relative spread {:.2}%",
        run.reference.delta_n,
        run.reference.pair_rate_per_s.iter().map(|v| format!("{v:.4e}")).collect::<Vec<_>>(),
        100.0 * run.reference.relative_spread
    ));
    b
}

fn state_files(b: &mut Bundle, stem: &str, run: &StateRun, format: Format) {
    let table = jsd_table(&run.state);
    let header = json!({
        "signal_grid": grid_header(&run.state.signal_grid),
        "idler_grid": grid_header(&run.state.idler_grid),
        "beta_sq": run.state.beta_sq,
        "purity": run.schmidt.purity,
        "summary": run.summary,
    });
    match format {
        Format::Csv => {
            b.files.push((format!("{stem}.csv"), table.to_csv()));
            b.json(&format!("{stem}.json"), &header);
        }
        Format::Json => {
            let mut doc = header;
            doc["jsd"] = serde_json::from_str(&table.to_json()).expect("table json parses");
            b.json(&format!("{stem}.json"), &doc);
        }
    }
    b.lines.push(format!(
        "{}: |β|² = {:.4e}, purity {:.4}, principal-axis ratio {:.3}{}",
        run.summary.source,
        run.summary.beta_sq,
        run.summary.purity,
        run.summary.principal_axis_ratio,
        run.summary.jsd_widths.map_or(String::new(), |w| format!(", sum/difference width ratio {:.4}", w.ratio()))
    ));
}

pub fn jsd(run: &JsdRun, format: Format) -> Bundle {
    let mut b = Bundle::default();
    if let Some(s) = &run.bragg {
        state_files(&mut b, "jsd_bragg", s, format);
    }
    if let Some(s) = &run.ring {
        state_files(&mut b, "jsd_ring", s, format);
    }
    if let Some(c) = &run.consistency {
        b.json("consistency.json", c);
        b.lines.push(format!(
            "stimulated estimate {:.4e} /s vs state {:.4e} /s (ratio {:.3})",
            c.stimulated_rate_per_s, c.state_rate_per_s, c.ratio
        ));
    }
    b
}

/// Writes the bundle under `dir`, refusing to replace files unless `force`.
pub fn write(dir: &Path, bundle: &Bundle, force: bool) -> Result<Vec<PathBuf>, CliError> {
    let targets: Vec<PathBuf> = bundle.files.iter().map(|(n, _)| dir.join(n)).collect();
    if !force {
        if let Some(p) = targets.iter().find(|p| p.exists()) {
            return Err(CliError::Io(format!("{} exists; pass --force to overwrite", p.display())));
        }
    }
    for (path, (_, text)) in targets.iter().zip(&bundle.files) {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| CliError::Io(format!("cannot create {}: {e}", parent.display())))?;
        }
        fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(targets)
}
