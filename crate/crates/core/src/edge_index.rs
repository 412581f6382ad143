//! Ladder experiments: ground degeneracy, inferred left zero-mode count and
//! its parity (Z₂ index).

use rayon::prelude::*;

use crate::algebra::{commutator, MajoranaOperator};
use crate::error::{MajoranaError, Result};
use crate::model::{self, ModelSpec};
use crate::spectral::{spectrum, SpectrumReport};

#[derive(Clone, Debug, PartialEq)]
pub struct LadderReport {
    pub legs: usize,
    pub g: f64,
    /// Ground-cluster degeneracy `D`.
    pub degeneracy: usize,
    /// `n_L = 2 log₂ D - L`.
    pub n_left: usize,
    pub n_right: usize,
    /// `n_L mod 2`.
    pub index: usize,
    /// Legs whose right-edge generator commutes exactly with `H`.
    pub right_mode_legs: Vec<usize>,
    pub ground_energy: f64,
    pub ground_splitting: f64,
    /// `E(first excited cluster) - E(ground)`.
    pub gap: Option<f64>,
    /// For two legs: separation between the two lowest doublets.
    pub doublet_splitting: Option<f64>,
    /// Largest power of two dividing every level multiplicity.
    pub level_multiplicity_power: usize,
    pub flags: Vec<String>,
}

/// Legs `j` with `[H, c_{2N,j}] = 0` exactly.
pub fn verify_right_modes(spec: &ModelSpec) -> Result<Vec<usize>> {
    let h = model::build_hamiltonian(spec)?;
    Ok(verify_right_modes_of(&h, spec))
}

/// Same check for an arbitrary operator laid out on the ladder of `spec`.
pub fn verify_right_modes_of(h: &MajoranaOperator, spec: &ModelSpec) -> Vec<usize> {
    (1..=spec.legs)
        .filter(|&j| {
            commutator(h, &MajoranaOperator::generator(spec.right_edge_site(j))).is_zero()
        })
        .collect()
}

pub fn ladder_experiment(spec: &ModelSpec, cluster_tol: f64) -> Result<LadderReport> {
    spec.validate()?;
    let h = model::build_hamiltonian(spec)?;
    if model::build_interaction(spec)?.parity() == crate::algebra::Parity::Odd {
        return Err(MajoranaError::InvalidSpec("ladder interaction must be even".into()));
    }
    let rep = spectrum(&h, spec.mode_count(), cluster_tol)?;
    let right_mode_legs = verify_right_modes_of(&h, spec);
    summarize(spec, &rep, right_mode_legs)
}

fn summarize(spec: &ModelSpec, rep: &SpectrumReport, right_mode_legs: Vec<usize>) -> Result<LadderReport> {
    let legs = spec.legs;
    let degeneracy = rep.ground_cluster_size();
    if !degeneracy.is_power_of_two() {
        return Err(MajoranaError::AmbiguousClustering {
            reason: format!(
                "ground cluster of {degeneracy} states at g = {} is not a power of two (spread {:e}, next gap {:?}, tolerance {:e})",
                spec.g,
                rep.ground_splitting(),
                rep.gap(),
                rep.cluster_tol
            ),
        });
    }
    let log_d = degeneracy.trailing_zeros() as usize;
    let mut flags = Vec::new();
    let n_right = legs;
    if right_mode_legs.len() != legs {
        flags.push(format!(
            "right-edge generators commute on legs {right_mode_legs:?} only"
        ));
    }
    let n_left = if 2 * log_d >= legs {
        2 * log_d - legs
    } else {
        flags.push(format!("2 log2 D = {} below the {legs} right modes", 2 * log_d));
        0
    };
    let doublet_splitting = (legs == 2 && degeneracy == 2)
        .then(|| rep.clusters.get(1).filter(|c| c.len == 2).map(|c| c.min - rep.ground_energy()))
        .flatten();
    let level_multiplicity_power = rep
        .clusters
        .iter()
        .map(|c| c.len.trailing_zeros() as usize)
        .min()
        .unwrap_or(0);
    Ok(LadderReport {
        legs,
        g: spec.g,
        degeneracy,
        n_left,
        n_right,
        index: n_left % 2,
        right_mode_legs,
        ground_energy: rep.ground_energy(),
        ground_splitting: rep.ground_splitting(),
        gap: rep.gap(),
        doublet_splitting,
        level_multiplicity_power,
        flags,
    })
}

/// Runs [`ladder_experiment`] at each coupling of `g_grid`.
pub fn ladder_sweep(spec: &ModelSpec, g_grid: &[f64], cluster_tol: f64) -> Result<Vec<LadderReport>> {
    g_grid
        .par_iter()
        .map(|&g| ladder_experiment(&spec.clone().with_g(g), cluster_tol))
        .collect()
}

/// Whether every report in a sweep carries the same index.
pub fn index_is_constant(reports: &[LadderReport]) -> bool {
    reports.windows(2).all(|w| w[0].index == w[1].index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::InteractionSpec;
    use crate::spectral::DEFAULT_CLUSTER_TOL;

    fn ladder(legs: usize, g: f64) -> ModelSpec {
        ModelSpec::ladder(3, legs, 0.5).with_interaction(InteractionSpec::InterchainEdge { pairs: None }, g)
    }

    #[test]
    fn uncoupled_legs() {
        let chain = ladder_experiment(&ModelSpec::chain(3, 0.5), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!((chain.degeneracy, chain.n_left, chain.index), (2, 1, 1));
        for legs in 2..=3 {
            let rep = ladder_experiment(&ladder(legs, 0.0), DEFAULT_CLUSTER_TOL).unwrap();
            assert_eq!(rep.degeneracy, 1 << legs);
            assert_eq!(rep.n_left, legs);
            assert!(rep.level_multiplicity_power >= legs);
        }
    }

    #[test]
    fn two_legs_lift_left_modes() {
        let rep = ladder_experiment(&ladder(2, 0.2), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(rep.degeneracy, 2);
        assert_eq!(rep.index, 0);
        assert!((rep.doublet_splitting.unwrap() - 0.4).abs() < 1e-9);
        assert_eq!(rep.right_mode_legs, vec![1, 2]);
    }

    #[test]
    fn three_legs_keep_one_mode() {
        let rep = ladder_experiment(&ladder(3, 0.2), DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(rep.degeneracy, 4);
        assert_eq!(rep.index, 1);
    }

    #[test]
    fn negative_control() {
        let spec = ladder(2, 0.2);
        let mut h = model::build_hamiltonian(&spec).unwrap();
        h += &MajoranaOperator::product_of(&[5, 6], crate::algebra::Complex::new(0.0, 1.0));
        assert_eq!(verify_right_modes_of(&h, &spec), vec![2]);
    }

    #[test]
    fn single_leg_is_the_chain_statement() {
        let spec = ModelSpec::chain(4, 0.5);
        assert_eq!(verify_right_modes(&spec).unwrap(), vec![1]);
    }
}
