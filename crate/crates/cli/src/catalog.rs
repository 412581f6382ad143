//! Static description of every experiment: config keys and output schema.

use crate::config::Experiment;

pub struct ExperimentInfo {
    pub experiment: Experiment,
    pub summary: &'static str,
    pub required: &'static [&'static str],
    pub optional: &'static [&'static str],
    pub csv_header: &'static str,
}

const MODEL_OPTIONAL: &[&str] = &[
    "model.legs",
    "model.leg_kappas",
    "model.g",
    "model.interaction",
    "model.terms",
    "model.coupling",
    "model.pairs",
];

pub const CATALOG: [ExperimentInfo; 8] = [
    ExperimentInfo {
        experiment: Experiment::Spectrum,
        summary: "full spectrum of H_0 + gV with degeneracy clusters and parity pairing",
        required: &["model.n", "model.kappa"],
        optional: &["params.cluster_tol"],
        csv_header: "index,energy,cluster",
    },
    ExperimentInfo {
        experiment: Experiment::GapSweep,
        summary: "ground splitting and gap over a coupling grid, continuity and empirical g_max",
        required: &["model.n", "model.kappa", "params.g_grid"],
        optional: &["params.cluster_tol"],
        csv_header: "g,splitting,gap,ground_energy",
    },
    ExperimentInfo {
        experiment: Experiment::ZeroModeSeries,
        summary: "perturbative edge-mode series [H_0, g_n] = -[V, g_(n-1)] on a chain",
        required: &["model.n", "model.kappa", "params.order"],
        optional: &["params.gauge", "params.g_grid"],
        csv_header: "component,sites,re_coeff,im_coeff",
    },
    ExperimentInfo {
        experiment: Experiment::ZeroModeKernel,
        summary: "kernel of the adjoint action on odd Hermitian monomials, edge-selected mode",
        required: &["model.n", "model.kappa"],
        optional: &["params.kernel_tol"],
        csv_header: "sites,re_coeff,im_coeff",
    },
    ExperimentInfo {
        experiment: Experiment::Locality,
        summary: "truncation residuals and decay rate of an edge mode",
        required: &["model.n", "model.kappa"],
        optional: &["params.mode", "params.kernel_tol"],
        csv_header: "m,cell_weight,tail_residual",
    },
    ExperimentInfo {
        experiment: Experiment::LadderIndex,
        summary: "ladder ground degeneracy, inferred left mode count and Z2 index",
        required: &["model.n", "model.kappa", "model.legs"],
        optional: &["params.g_grid", "params.cluster_tol"],
        csv_header: "g,degeneracy,n_left,index,ground_energy,gap,doublet_splitting",
    },
    ExperimentInfo {
        experiment: Experiment::CheckSolvable,
        summary: "exact commutator [V, gamma_0] for the chosen interaction",
        required: &["model.n", "model.kappa", "model.interaction"],
        optional: &[],
        csv_header: "sites,re_coeff,im_coeff",
    },
    ExperimentInfo {
        experiment: Experiment::TildeCheck,
        summary: "edge-separating variables, bulk quadratic form and doubled-system checks",
        required: &["model.n", "model.kappa"],
        optional: &[],
        csv_header: "quantity,value",
    },
];

pub fn info(experiment: Experiment) -> &'static ExperimentInfo {
    CATALOG
        .iter()
        .find(|i| i.experiment == experiment)
        .expect("every experiment is catalogued")
}

/// Text printed by `list`.
pub fn list_experiments() -> String {
    let mut out = String::new();
    for info in &CATALOG {
        out.push_str(info.experiment.name());
        out.push('\n');
        out.push_str(&format!("  {}\n", info.summary));
        out.push_str(&format!("  required: experiment, {}\n", info.required.join(", ")));
        let mut optional: Vec<&str> = vec!["output_dir"];
        optional.extend(MODEL_OPTIONAL.iter().filter(|k| !info.required.contains(k)));
        optional.extend(info.optional.iter());
        out.push_str(&format!("  optional: {}\n", optional.join(", ")));
        out.push_str(&format!("  data.csv: {}\n", info.csv_header));
    }
    out.push_str("outputs: report.txt, data.csv, meta\n");
    out.push_str("exit codes: 0 ok, 2 config error, 3 numerical contract violated, 4 internal inconsistency\n");
    out
}
