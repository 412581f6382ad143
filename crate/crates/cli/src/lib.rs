//! Batch front end: reads one TOML run configuration, dispatches the
//! experiment and writes `report.txt`, `data.csv` and `meta`.

pub mod catalog;
pub mod config;
pub mod experiments;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use catalog::list_experiments;
pub use config::{Experiment, RunConfig};

/// Environment variable overriding the configured output directory.
pub const OUT_DIR_ENV: &str = "MAJORANA_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "out";

#[derive(Debug)]
pub struct Outcome {
    pub exit_code: i32,
    pub out_dir: Option<PathBuf>,
    pub message: String,
}

impl Outcome {
    fn config_error(message: String) -> Self {
        Outcome {
            exit_code: 2,
            out_dir: None,
            message,
        }
    }
}

/// Defaults made explicit, as echoed into `meta`.
pub fn resolve(cfg: &RunConfig, out_dir: &Path) -> RunConfig {
    let mut r = cfg.clone();
    r.output_dir = Some(out_dir.to_string_lossy().into_owned());
    r.params.cluster_tol = Some(cfg.cluster_tol());
    match cfg.experiment {
        Experiment::ZeroModeKernel | Experiment::Locality => r.params.kernel_tol = Some(cfg.kernel_tol()),
        Experiment::ZeroModeSeries => {
            r.params.gauge = Some(cfg.gauge().map(|g| g.to_string()).unwrap_or_default());
        }
        _ => {}
    }
    r
}

/// Runs the configuration at `path`. `out_override` takes precedence over
/// both the environment variable and the config's `output_dir`.
pub fn run_file(path: &Path, out_override: Option<&Path>) -> Outcome {
    let start = Instant::now();
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return Outcome::config_error(format!("config: cannot read {}: {e}", path.display())),
    };
    let cfg: RunConfig = match text.parse() {
        Ok(c) => c,
        Err(e) => return Outcome::config_error(e.to_string()),
    };
    let out_dir = out_override
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .or_else(|| cfg.output_dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    if let Err(e) = fs::create_dir_all(&out_dir) {
        return Outcome::config_error(format!("config: cannot create {}: {e}", out_dir.display()));
    }

    let (exit_code, report, csv, message) = match experiments::run(&cfg) {
        Ok(a) => {
            let code = a.exit_code();
            let msg = a
                .findings
                .iter()
                .map(|f| f.message.clone())
                .collect::<Vec<_>>()
                .join("; ");
            (code, a.report, Some(a.csv), msg)
        }
        Err(e) => {
            let code = experiments::error_exit_code(&e);
            (code, format!("experiment: {}\nerror: {e}\n", cfg.experiment), None, e.to_string())
        }
    };
    let meta = format!(
        "# majorana {}\n# wall_time_s = {:.3}\n# exit_code = {exit_code}\n{}",
        env!("CARGO_PKG_VERSION"),
        start.elapsed().as_secs_f64(),
        resolve(&cfg, &out_dir).to_toml()
    );
    let write = |name: &str, body: &str| fs::write(out_dir.join(name), body);
    let written = write("report.txt", &report)
        .and_then(|_| match &csv {
            Some(c) => write("data.csv", c),
            None => {
                let stale = out_dir.join("data.csv");
                if stale.exists() {
                    fs::remove_file(stale)
                } else {
                    Ok(())
                }
            }
        })
        .and_then(|_| write("meta", &meta));
    if let Err(e) = written {
        return Outcome {
            exit_code: 4,
            out_dir: Some(out_dir),
            message: format!("cannot write outputs: {e}"),
        };
    }
    Outcome {
        exit_code,
        out_dir: Some(out_dir),
        message,
    }
}
