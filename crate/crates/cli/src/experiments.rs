//! Experiment dispatch. Each experiment returns a human report, CSV rows
//! and any contract findings; nothing here touches the filesystem.

use std::fmt::Write as _;

use majorana_core::edge_index::{index_is_constant, ladder_sweep};
use majorana_core::model::{self, ModelSpec};
use majorana_core::spectral::{doubled_eta_check, gap_sweep, spectrum, tilde_check};
use majorana_core::zero_modes::{
    coefficient_table, kernel_solve, localization_profile, series_residual_scaling, series_solve,
};
use majorana_core::{commutator, MajoranaError, MajoranaOperator};

use crate::catalog;
use crate::config::{Experiment, ModeSource, RunConfig};

/// Maximal pair splitting accepted as exact pairing.
pub const PAIRING_TOL: f64 = 1e-10;
/// `‖[V, γ_0]‖` at or below this counts as solvable.
pub const SOLVABLE_TOL: f64 = 1e-12;
pub const KERNEL_MATRIX_TOL: f64 = 1e-12;
pub const KERNEL_RESIDUAL_TOL: f64 = 1e-10;
pub const TILDE_ANTICOMMUTATOR_TOL: f64 = 1e-12;
pub const TILDE_MATRIX_TOL: f64 = 1e-10;
pub const ETA_SPECTRUM_TOL: f64 = 1e-10;
pub const ETA_LOWER_BOUND_TOL: f64 = 1e-10;
/// Allowed shortfall of the fitted residual slope below `k + 1`.
pub const SLOPE_SLACK: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Contract,
    Internal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Finding {
    pub severity: Severity,
    pub message: String,
}

#[derive(Clone, Debug, Default)]
pub struct Artifacts {
    pub report: String,
    pub csv: String,
    pub findings: Vec<Finding>,
}

impl Artifacts {
    fn new(cfg: &RunConfig) -> Self {
        let mut a = Artifacts::default();
        let m = &cfg.model;
        let _ = writeln!(a.report, "experiment: {}", cfg.experiment);
        let _ = writeln!(
            a.report,
            "model: N={} legs={} kappa={} g={} interaction={}",
            m.n,
            m.legs,
            m.kappa,
            m.g,
            model_interaction_name(cfg)
        );
        a.csv.push_str(catalog::info(cfg.experiment).csv_header);
        a.csv.push('\n');
        a
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.report.push_str(text.as_ref());
        self.report.push('\n');
    }

    fn row(&mut self, fields: &[String]) {
        self.csv.push_str(&fields.join(","));
        self.csv.push('\n');
    }

    fn check(&mut self, ok: bool, severity: Severity, message: impl Into<String>) {
        if !ok {
            self.findings.push(Finding {
                severity,
                message: message.into(),
            });
        }
    }

    /// Exit code implied by the findings.
    pub fn exit_code(&self) -> i32 {
        match self.findings.iter().map(|f| f.severity).max() {
            None => 0,
            Some(Severity::Contract) => 3,
            Some(Severity::Internal) => 4,
        }
    }
}

fn model_interaction_name(cfg: &RunConfig) -> &'static str {
    cfg.model_spec().map(|s| s.interaction.name()).unwrap_or("?")
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Exit code for a library error.
pub fn error_exit_code(e: &MajoranaError) -> i32 {
    match e {
        MajoranaError::Parse(_)
        | MajoranaError::InvalidSpec(_)
        | MajoranaError::Dimension { .. }
        | MajoranaError::Domain { .. } => 2,
        MajoranaError::KernelTooSmall { .. } | MajoranaError::NotQuadratic { .. } => 4,
        _ => 3,
    }
}

pub fn run(cfg: &RunConfig) -> Result<Artifacts, MajoranaError> {
    let spec = cfg
        .model_spec()
        .map_err(|e| MajoranaError::InvalidSpec(e.0))?;
    let mut a = Artifacts::new(cfg);
    match cfg.experiment {
        Experiment::Spectrum => run_spectrum(cfg, &spec, &mut a)?,
        Experiment::GapSweep => run_gap_sweep(cfg, &spec, &mut a)?,
        Experiment::ZeroModeSeries => run_series(cfg, &spec, &mut a)?,
        Experiment::ZeroModeKernel => run_kernel(cfg, &spec, &mut a)?,
        Experiment::Locality => run_locality(cfg, &spec, &mut a)?,
        Experiment::LadderIndex => run_ladder(cfg, &spec, &mut a)?,
        Experiment::CheckSolvable => run_check_solvable(&spec, &mut a)?,
        Experiment::TildeCheck => run_tilde(&spec, &mut a)?,
    }
    if a.findings.is_empty() {
        a.line("status: ok");
    } else {
        for f in a.findings.clone() {
            a.line(format!("violation ({:?}): {}", f.severity, f.message));
        }
    }
    Ok(a)
}

fn run_spectrum(cfg: &RunConfig, spec: &ModelSpec, a: &mut Artifacts) -> Result<(), MajoranaError> {
    let h = model::build_hamiltonian(spec)?;
    let rep = spectrum(&h, spec.mode_count(), cfg.cluster_tol())?;
    for (k, cluster) in rep.clusters.iter().enumerate() {
        for i in cluster.start..cluster.start + cluster.len {
            a.row(&[i.to_string(), num(rep.eigenvalues[i]), k.to_string()]);
        }
    }
    a.line(format!("levels: {}", rep.eigenvalues.len()));
    a.line(format!("clusters: {}", rep.clusters.len()));
    a.line(format!("ground energy: {}", rep.ground_energy()));
    a.line(format!("ground degeneracy: {}", rep.ground_cluster_size()));
    a.line(format!("gap: {}", rep.gap().map(|g| g.to_string()).unwrap_or_else(|| "none".into())));
    let split = rep.max_pair_splitting();
    a.line(format!("max pair splitting: {split:e}"));
    a.line(format!("parity-balanced clusters: {}", rep.parity_balanced()));
    a.check(
        rep.is_paired(PAIRING_TOL),
        Severity::Contract,
        format!("spectral pairing broken (max pair splitting {split:e}, tolerance {PAIRING_TOL:e})"),
    );
    Ok(())
}

fn run_gap_sweep(cfg: &RunConfig, spec: &ModelSpec, a: &mut Artifacts) -> Result<(), MajoranaError> {
    let grid = cfg.params.g_grid.clone().unwrap_or_default();
    let rep = gap_sweep(spec, &grid, cfg.cluster_tol())?;
    for p in &rep.points {
        a.row(&[num(p.g), num(p.splitting), num(p.gap), num(p.ground_energy)]);
    }
    a.line(format!("points: {}", rep.points.len()));
    a.line(format!("interaction norm: {}", rep.interaction_norm));
    a.line(format!(
        "empirical g_max: {}",
        rep.empirical_g_max.map(|g| g.to_string()).unwrap_or_else(|| "none".into())
    ));
    for f in &rep.flags {
        a.line(format!("flag: {f}"));
    }
    for p in &rep.points {
        a.check(
            p.gap.is_finite() && p.gap > 0.0,
            Severity::Contract,
            format!("gap closed at g = {}", p.g),
        );
        a.check(
            p.splitting < PAIRING_TOL,
            Severity::Contract,
            format!("ground splitting {:e} at g = {}", p.splitting, p.g),
        );
    }
    a.check(
        rep.lipschitz_violations.is_empty(),
        Severity::Contract,
        format!("gap continuity bound violated between grid points {:?}", rep.lipschitz_violations),
    );
    Ok(())
}

fn push_operator(a: &mut Artifacts, component: &str, op: &MajoranaOperator) {
    for row in coefficient_table(op) {
        a.row(&[component.to_string(), row.sites, num(row.re), num(row.im)]);
    }
}

fn run_series(cfg: &RunConfig, spec: &ModelSpec, a: &mut Artifacts) -> Result<(), MajoranaError> {
    let order = cfg.params.order.unwrap_or(1);
    let gauge = cfg.gauge().map_err(|e| MajoranaError::InvalidSpec(e.0))?;
    let sol = series_solve(spec, order, gauge)?;
    for (n, g) in sol.gamma.iter().enumerate() {
        push_operator(a, &format!("gamma_{n}"), g);
    }
    if let Some(orders) = &sol.kappa_orders {
        for (j, o) in orders.iter().enumerate() {
            push_operator(a, &format!("gamma_1^({j})"), o);
        }
    }
    a.line(format!("order: {order}"));
    a.line(format!("gauge: {}", sol.gauge));
    for (n, r) in sol.residuals.iter().enumerate() {
        a.line(format!("residual order {n}: {r:e}"));
    }
    for (n, p) in sol.free_parameters.iter().enumerate() {
        a.line(format!("free parameters order {}: {p}", n + 1));
    }
    if let Some(c) = sol.lambda_correction_norm {
        a.line(format!("correction to truncated kappa series: {c:e}"));
    }
    if let Some(r) = sol.kappa2_obstruction {
        a.line(format!("kappa^2 equation inconsistent for this lambda (residual {r:e})"));
    }
    if let Some(grid) = &cfg.params.g_grid {
        let scaling = series_residual_scaling(spec, &sol, grid)?;
        for (g, r) in &scaling.points {
            a.line(format!("truncation residual g={g}: {r:e}"));
        }
        match scaling.slope {
            Some(s) => {
                a.line(format!("log-log slope: {s}"));
                let need = order as f64 + 1.0 - SLOPE_SLACK;
                a.check(
                    s >= need,
                    Severity::Contract,
                    format!("residual slope {s} below {need}"),
                );
            }
            None => a.line("log-log slope: none (residual vanishes)"),
        }
    }
    Ok(())
}

fn run_kernel(cfg: &RunConfig, spec: &ModelSpec, a: &mut Artifacts) -> Result<(), MajoranaError> {
    let rep = kernel_solve(spec, cfg.kernel_tol())?;
    for row in coefficient_table(&rep.gamma) {
        a.row(&[row.sites, num(row.re), num(row.im)]);
    }
    a.line(format!("basis size: {}", rep.basis_size()));
    a.line(format!("matrix antisymmetry defect: {:e}", rep.matrix_defect));
    a.line(format!("kernel dimension: {}", rep.kernel_dim));
    a.line(format!("trivial product in kernel: {}", rep.trivial_in_kernel));
    a.line(format!("trivial residual: {:e}", rep.trivial_residual));
    a.line(format!("edge weight (sites <= 4): {}", rep.edge_weight));
    a.line(format!("residual symbolic: {:e}", rep.residual_symbolic));
    a.line(format!("residual fock: {:e}", rep.residual_fock));
    a.line(format!("kernel consistency: {:e}", rep.kernel_consistency));
    if let Some(rate) = rep.profile.rate {
        a.line(format!("localization rate: {rate}"));
    }
    a.check(
        rep.trivial_in_kernel,
        Severity::Internal,
        "full product c1...c(2N-1) not in kernel",
    );
    a.check(
        rep.kernel_dim % 2 == 0,
        Severity::Internal,
        format!("odd kernel dimension {}", rep.kernel_dim),
    );
    a.check(
        rep.matrix_defect <= KERNEL_MATRIX_TOL,
        Severity::Contract,
        format!("kernel matrix not imaginary antisymmetric ({:e})", rep.matrix_defect),
    );
    a.check(
        rep.residual_symbolic <= KERNEL_RESIDUAL_TOL && rep.residual_fock <= KERNEL_RESIDUAL_TOL,
        Severity::Contract,
        "selected mode does not commute with H",
    );
    let bound = rep.basis_size() as f64 * rep.kernel_tol * rep.h_norm;
    a.check(
        rep.kernel_consistency <= bound,
        Severity::Contract,
        format!("kernel vectors leave commutator residual {:e} > {bound:e}", rep.kernel_consistency),
    );
    Ok(())
}

fn run_locality(cfg: &RunConfig, spec: &ModelSpec, a: &mut Artifacts) -> Result<(), MajoranaError> {
    let source = cfg.params.mode.unwrap_or(if spec.g == 0.0 {
        ModeSource::Exact
    } else {
        ModeSource::Kernel
    });
    let gamma = match source {
        ModeSource::Exact => model::build_gamma0_normalized(spec)?,
        ModeSource::Kernel => kernel_solve(spec, cfg.kernel_tol())?.gamma,
    };
    let p = localization_profile(&gamma, spec)?;
    for &(m, w) in &p.cell_weights {
        let tail = if m == 1 {
            gamma.coefficient_norm()
        } else {
            p.residuals[m - 2].1
        };
        a.row(&[m.to_string(), num(w), num(tail)]);
    }
    a.line(format!("mode: {source:?}"));
    a.line(format!("rate (per cell): {}", opt_num(p.rate)));
    a.line(format!("fit r^2: {}", opt_num(p.rate_r2)));
    a.line(format!("tail rate: {}", opt_num(p.tail_rate)));
    a.line(format!("log|kappa|: {}", num(spec.kappa.abs().ln())));
    a.line(format!("strictly decreasing: {}", p.is_strictly_decreasing()));
    a.check(
        p.residuals.windows(2).all(|w| w[1].1 <= w[0].1),
        Severity::Contract,
        "truncation residuals increase along the chain",
    );
    Ok(())
}

fn run_ladder(cfg: &RunConfig, spec: &ModelSpec, a: &mut Artifacts) -> Result<(), MajoranaError> {
    let grid = cfg.params.g_grid.clone().unwrap_or_else(|| vec![spec.g]);
    let reports = ladder_sweep(spec, &grid, cfg.cluster_tol())?;
    for r in &reports {
        a.row(&[
            num(r.g),
            r.degeneracy.to_string(),
            r.n_left.to_string(),
            r.index.to_string(),
            num(r.ground_energy),
            opt_num(r.gap),
            opt_num(r.doublet_splitting),
        ]);
    }
    a.line(format!("legs: {}", spec.legs));
    for r in &reports {
        a.line(format!(
            "g={}: D={} n_L={} n_R={} index={}",
            r.g, r.degeneracy, r.n_left, r.n_right, r.index
        ));
        for f in &r.flags {
            a.line(format!("flag g={}: {f}", r.g));
        }
        a.check(
            r.right_mode_legs.len() == spec.legs,
            Severity::Internal,
            format!("right-edge modes fail on some legs at g = {}", r.g),
        );
    }
    a.line("index (empirical, for this coupling family): constant over grid = ".to_string()
        + &index_is_constant(&reports).to_string());
    a.check(
        index_is_constant(&reports),
        Severity::Contract,
        "Z2 index changes across the coupling grid",
    );
    Ok(())
}

fn run_check_solvable(spec: &ModelSpec, a: &mut Artifacts) -> Result<(), MajoranaError> {
    let v = model::build_interaction(spec)?;
    let gamma0 = model::build_gamma0(spec)?;
    let h0 = model::build_ladder_h0(spec)?;
    let c = commutator(&v, &gamma0);
    for row in coefficient_table(&c) {
        a.row(&[row.sites, num(row.re), num(row.im)]);
    }
    if c.is_zero() {
        a.line("‖[V,γ₀]‖ = 0");
    } else {
        a.line(format!("‖[V,γ₀]‖ = {}", c.coefficient_norm()));
    }
    a.line(format!("‖[H₀,γ₀]‖ = {}", commutator(&h0, &gamma0).coefficient_norm()));
    a.line(format!(
        "solvable: {}",
        if c.coefficient_norm() <= SOLVABLE_TOL { "yes" } else { "no" }
    ));
    Ok(())
}

fn run_tilde(spec: &ModelSpec, a: &mut Artifacts) -> Result<(), MajoranaError> {
    let t = tilde_check(spec)?;
    let e = doubled_eta_check(spec)?;
    let rows: [(&str, f64); 15] = [
        ("square_defect", t.square_defect),
        ("edge_anticommutator_defect", t.edge_anticommutator_defect),
        ("mutual_anticommutator_defect", t.mutual_anticommutator_defect),
        ("gram_defect", t.gram_defect),
        ("symbolic_defect", t.symbolic_defect),
        ("matrix_defect", t.matrix_defect),
        ("edge_decoupling_defect", t.edge_decoupling_defect),
        ("single_particle_gap", e.single_particle_gap),
        ("rotation_defect", e.rotation_defect),
        ("canonical_defect", e.canonical_defect),
        ("operator_identity_defect", e.operator_identity_defect),
        ("spectrum_defect", e.spectrum_defect),
        ("half_scale_spectrum_defect", e.half_scale_spectrum_defect),
        ("lower_bound_min_eig", e.lower_bound_min_eig),
        ("doubled_ground_energy", e.doubled_ground_energy),
    ];
    for (k, v) in rows {
        a.row(&[k.to_string(), num(v)]);
        a.line(format!("{k}: {v:e}"));
    }
    for (j, n) in t.frame.normalizations.iter().enumerate() {
        a.line(format!("normalization N_{}: {n}", 2 * j + 3));
    }
    let anti = t
        .square_defect
        .max(t.edge_anticommutator_defect)
        .max(t.mutual_anticommutator_defect)
        .max(t.gram_defect);
    a.check(
        anti <= TILDE_ANTICOMMUTATOR_TOL,
        Severity::Contract,
        format!("tilde anticommutators off by {anti:e}"),
    );
    a.check(
        t.matrix_defect <= TILDE_MATRIX_TOL && t.symbolic_defect <= TILDE_MATRIX_TOL,
        Severity::Contract,
        "rebuilt H_0 differs from the original",
    );
    a.check(
        e.spectrum_defect <= ETA_SPECTRUM_TOL && e.operator_identity_defect <= ETA_SPECTRUM_TOL,
        Severity::Contract,
        "doubled-system spectrum does not match the eta construction",
    );
    a.check(
        e.lower_bound_min_eig >= -ETA_LOWER_BOUND_TOL,
        Severity::Contract,
        format!("operator lower bound fails (min eig {:e})", e.lower_bound_min_eig),
    );
    Ok(())
}
