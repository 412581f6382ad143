use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use majorana_cli::catalog::CATALOG;
use majorana_cli::{list_experiments, run_file, RunConfig, OUT_DIR_ENV};

const SMALL_SPECTRUM: &str = r#"
experiment = "spectrum"

[model]
n = 3
kappa = 0.5
interaction = "c1c2c3c4"
g = 0.1
"#;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against a golden file; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden {name} differs");
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, body).unwrap();
    path
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_majorana"))
}

#[test]
fn list_output_golden() {
    check_golden("list.txt", &list_experiments());
}

#[test]
fn csv_headers_golden() {
    let table: String = CATALOG
        .iter()
        .map(|i| format!("{}: {}\n", i.experiment, i.csv_header))
        .collect();
    check_golden("csv_headers.txt", &table);
}

#[test]
fn small_spectrum_golden() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_SPECTRUM);
    let out = run_file(&cfg, Some(&tmp.path().join("out")));
    assert_eq!(out.exit_code, 0, "{}", out.message);
    let csv = fs::read_to_string(tmp.path().join("out/data.csv")).unwrap();
    check_golden("spectrum_n3.csv", &csv);
}

#[test]
fn every_csv_starts_with_catalogued_header() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let tmp = tempfile::tempdir().unwrap();
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let cfg: RunConfig = fs::read_to_string(&path).unwrap().parse().unwrap();
        if cfg.experiment == majorana_cli::Experiment::LadderIndex {
            continue;
        }
        let out_dir = tmp.path().join(path.file_stem().unwrap());
        let out = run_file(&path, Some(&out_dir));
        assert_eq!(out.exit_code, 0, "{}: {}", path.display(), out.message);
        let csv = fs::read_to_string(out_dir.join("data.csv")).unwrap();
        let header = majorana_cli::catalog::info(cfg.experiment).csv_header;
        assert_eq!(csv.lines().next(), Some(header), "{}", path.display());
        seen += 1;
    }
    assert!(seen >= 7);
}

#[test]
fn config_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        SMALL_SPECTRUM.replace("kappa = 0.5", "kapa = 0.5"),
        format!("{SMALL_SPECTRUM}unknown_key = 1\n"),
        SMALL_SPECTRUM.replace("kappa = 0.5", "kappa = 1.0"),
        SMALL_SPECTRUM.replace("\"spectrum\"", "\"spectra\""),
        "experiment = \"gap-sweep\"\n[model]\nn = 3\nkappa = 0.5\n".to_string(),
        "not toml at all [".to_string(),
    ];
    for body in &cases {
        let cfg = write_config(tmp.path(), body);
        let status = binary()
            .args(["run", cfg.to_str().unwrap(), "--out"])
            .arg(tmp.path().join("out"))
            .output()
            .unwrap();
        assert_eq!(status.status.code(), Some(2), "config:\n{body}");
    }
    let missing = binary().args(["run", "/nonexistent/run.toml"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn kernel_on_ladder_is_a_config_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let body = "experiment = \"zero-mode-kernel\"\n[model]\nn = 2\nlegs = 2\nkappa = 0.5\n";
    let cfg = write_config(tmp.path(), body);
    let out = run_file(&cfg, Some(&tmp.path().join("out")));
    assert_eq!(out.exit_code, 2, "{}", out.message);
    let report = fs::read_to_string(tmp.path().join("out/report.txt")).unwrap();
    assert!(report.contains("error:"));
    assert!(!tmp.path().join("out/data.csv").exists());
}

#[test]
fn environment_overrides_config_output_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let configured = tmp.path().join("configured");
    let from_env = tmp.path().join("from_env");
    let body = format!("output_dir = {:?}\n{SMALL_SPECTRUM}", configured.to_str().unwrap());
    let cfg = write_config(tmp.path(), &body);

    let run = binary()
        .args(["run", cfg.to_str().unwrap()])
        .env(OUT_DIR_ENV, &from_env)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(from_env.join("report.txt").exists());
    assert!(!configured.exists());

    let flag = tmp.path().join("flag");
    let run = binary()
        .args(["run", cfg.to_str().unwrap(), "--out"])
        .arg(&flag)
        .env(OUT_DIR_ENV, &from_env)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(flag.join("data.csv").exists());

    let run = binary()
        .args(["run", cfg.to_str().unwrap()])
        .env_remove(OUT_DIR_ENV)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    assert!(configured.join("meta").exists());
}

#[test]
fn meta_reparses_to_resolved_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg_path = write_config(tmp.path(), SMALL_SPECTRUM);
    let out_dir = tmp.path().join("out");
    assert_eq!(run_file(&cfg_path, Some(&out_dir)).exit_code, 0);
    let meta = fs::read_to_string(out_dir.join("meta")).unwrap();
    assert!(meta.starts_with("# majorana "));
    assert!(meta.contains("# exit_code = 0"));
    let parsed: RunConfig = meta.parse().unwrap();
    let original: RunConfig = SMALL_SPECTRUM.parse().unwrap();
    assert_eq!(parsed, majorana_cli::resolve(&original, &out_dir));

    // rerunning the echoed config reproduces the data
    let again = tmp.path().join("again.toml");
    fs::write(&again, &meta).unwrap();
    let out2 = tmp.path().join("out2");
    assert_eq!(run_file(&again, Some(&out2)).exit_code, 0);
    assert_eq!(
        fs::read(out_dir.join("data.csv")).unwrap(),
        fs::read(out2.join("data.csv")).unwrap()
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let body = r#"
experiment = "gap-sweep"
[model]
n = 4
kappa = 0.5
interaction = "c1c2c3c4"
[params]
g_grid = [-0.1, 0.0, 0.1, 0.2]
"#;
    let cfg = write_config(tmp.path(), body);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert_eq!(run_file(&cfg, Some(&a)).exit_code, 0);
    assert_eq!(run_file(&cfg, Some(&b)).exit_code, 0);
    for name in ["data.csv", "report.txt"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
}

#[test]
fn list_subcommand_prints_catalog() {
    let out = binary().arg("list").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), list_experiments());
}
