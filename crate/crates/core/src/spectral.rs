//! Exact spectra, degeneracy clustering, gap sweeps, and the free-fermion
//! machinery for quadratic Majorana Hamiltonians.

use rayon::prelude::*;

use crate::algebra::{Complex, MajoranaOperator, Parity, SiteSet};
use crate::error::{MajoranaError, Result};
use crate::fock::FockRepresentation;
use crate::linalg::{eigh, eigvalsh, max_abs, max_abs_diff, CMatrix};
use crate::model::{self, ModelSpec};

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-9;

/// Eigenvalues below this magnitude are treated as exact zeros of a quadratic form.
pub const QUADRATIC_ZERO_TOL: f64 = 1e-12;

/// Maximal run of eigenvalues whose consecutive gaps are below the cluster tolerance.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub start: usize,
    pub len: usize,
    pub min: f64,
    pub max: f64,
    /// Parity multiset `(#even, #odd)`, when the operator has definite parity.
    pub parity: Option<(usize, usize)>,
}

impl Cluster {
    pub fn splitting(&self) -> f64 {
        self.max - self.min
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    /// Parity `±1` of each eigenvalue's sector, when the operator is even.
    pub parity_expectations: Option<Vec<f64>>,
    pub cluster_tol: f64,
}

impl SpectrumReport {
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn ground_cluster(&self) -> &Cluster {
        &self.clusters[0]
    }

    pub fn ground_cluster_size(&self) -> usize {
        self.clusters[0].len
    }

    /// Spread of the ground cluster.
    pub fn ground_splitting(&self) -> f64 {
        self.clusters[0].splitting()
    }

    /// `E(first level above the ground cluster) - E(ground)`.
    pub fn gap(&self) -> Option<f64> {
        self.clusters
            .get(1)
            .map(|c| c.min - self.eigenvalues[0])
    }

    /// Largest `E_{2k+1} - E_{2k}` over consecutive pairs.
    pub fn max_pair_splitting(&self) -> f64 {
        self.eigenvalues
            .chunks(2)
            .filter(|p| p.len() == 2)
            .map(|p| p[1] - p[0])
            .fold(0.0, f64::max)
    }

    /// Every cluster holds as many even as odd states.
    pub fn parity_balanced(&self) -> bool {
        self.clusters
            .iter()
            .all(|c| matches!(c.parity, Some((e, o)) if e == o))
    }

    /// Exact opposite-parity pairing of the whole spectrum within `tol`.
    pub fn is_paired(&self, tol: f64) -> bool {
        self.eigenvalues.len().is_multiple_of(2) && self.max_pair_splitting() < tol && self.parity_balanced()
    }
}

/// Groups ascending eigenvalues into maximal runs with consecutive gaps `< tol`.
pub fn cluster_eigenvalues(values: &[f64], tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] >= tol {
            out.push((start, k - start));
            start = k;
        }
    }
    out
}

/// Full dense spectrum of a Hermitian operator on `modes` complex fermions.
pub fn spectrum(op: &MajoranaOperator, modes: usize, cluster_tol: f64) -> Result<SpectrumReport> {
    let defect = op.hermiticity_defect();
    if defect > 1e-12 * op.max_abs_coefficient().max(1.0) {
        return Err(MajoranaError::NotHermitian {
            module: "spectral",
            defect,
        });
    }
    let fock = FockRepresentation::new(modes)?;
    let h = fock.compile(op)?;
    spectrum_of_matrix(&h, &fock, op.parity() == Parity::Even, cluster_tol)
}

fn spectrum_of_matrix(
    h: &CMatrix,
    fock: &FockRepresentation,
    even: bool,
    cluster_tol: f64,
) -> Result<SpectrumReport> {
    // an even operator is block diagonal in the parity sectors
    let (values, labels): (Vec<f64>, Option<Vec<f64>>) = if even {
        let dim = fock.dim();
        let mut levels: Vec<(f64, f64)> = Vec::with_capacity(dim);
        for (sign, odd) in [(1.0, 0u32), (-1.0, 1u32)] {
            let idx: Vec<usize> = (0..dim).filter(|s| s.count_ones() % 2 == odd).collect();
            let block = CMatrix::from_fn(idx.len(), idx.len(), |r, c| h[(idx[r], idx[c])]);
            levels.extend(eigvalsh(&block).into_iter().map(|e| (e, sign)));
        }
        levels.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(b.1.partial_cmp(&a.1).unwrap()));
        let (v, l) = levels.into_iter().unzip();
        (v, Some(l))
    } else {
        (eigvalsh(h), None)
    };
    let clusters = cluster_eigenvalues(&values, cluster_tol)
        .into_iter()
        .map(|(start, len)| Cluster {
            start,
            len,
            min: values[start],
            max: values[start + len - 1],
            parity: labels.as_ref().map(|l| {
                let e = l[start..start + len].iter().filter(|&&x| x > 0.0).count();
                (e, len - e)
            }),
        })
        .collect();
    Ok(SpectrumReport {
        eigenvalues: values,
        clusters,
        parity_expectations: labels,
        cluster_tol,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub g: f64,
    pub splitting: f64,
    pub gap: f64,
    pub ground_energy: f64,
    pub ground_cluster_size: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport {
    pub points: Vec<SweepPoint>,
    /// Spectral norm of the interaction `V`.
    pub interaction_norm: f64,
    /// Indices `k` where `|Δ(g_{k+1}) - Δ(g_k)| > 4 ‖V‖ |g_{k+1} - g_k|`.
    pub lipschitz_violations: Vec<usize>,
    /// Human-readable notes on clustering ambiguity.
    pub flags: Vec<String>,
    /// Largest `|g|` such that every grid point with smaller `|g|` has `Δ > Δ(g≈0)/2`.
    pub empirical_g_max: Option<f64>,
}

/// Factor applied to the Weyl bound `‖V‖ |Δg|` in the continuity check.
pub const LIPSCHITZ_SAFETY: f64 = 4.0;

/// Ground splitting and gap of `H_0 + g V` over a grid of couplings.
pub fn gap_sweep(spec: &ModelSpec, g_grid: &[f64], cluster_tol: f64) -> Result<SweepReport> {
    spec.validate()?;
    let h0 = model::build_ladder_h0(spec)?;
    let v = model::build_interaction(spec)?;
    let modes = spec.mode_count();
    let fock = FockRepresentation::new(modes)?;
    let h0m = fock.compile(&h0)?;
    let vm = fock.compile(&v)?;
    let even = h0.parity() == Parity::Even && v.parity() == Parity::Even;
    let interaction_norm = crate::linalg::spectral_norm(&vm);

    let reports: Vec<Result<SpectrumReport>> = g_grid
        .par_iter()
        .map(|&g| {
            let h = &h0m + &vm * Complex::new(g, 0.0);
            spectrum_of_matrix(&h, &fock, even, cluster_tol)
        })
        .collect();

    let mut points = Vec::with_capacity(g_grid.len());
    let mut flags = Vec::new();
    for (&g, rep) in g_grid.iter().zip(reports) {
        let rep = rep?;
        let gap = rep.gap().unwrap_or(f64::NAN);
        if rep.ground_cluster_size() != 2 {
            flags.push(format!(
                "g = {g}: ground cluster has {} states, expected 2",
                rep.ground_cluster_size()
            ));
        }
        if gap.is_finite() && gap < 10.0 * cluster_tol {
            flags.push(format!("g = {g}: gap {gap:e} within 10x cluster tolerance"));
        }
        points.push(SweepPoint {
            g,
            splitting: rep.ground_splitting(),
            gap,
            ground_energy: rep.ground_energy(),
            ground_cluster_size: rep.ground_cluster_size(),
        });
    }

    let lipschitz_violations = points
        .windows(2)
        .enumerate()
        .filter(|(_, w)| {
            let bound = LIPSCHITZ_SAFETY * interaction_norm * (w[1].g - w[0].g).abs();
            (w[1].gap - w[0].gap).abs() > bound + 1e-12
        })
        .map(|(k, _)| k)
        .collect();

    let empirical_g_max = empirical_g_max(&points);
    Ok(SweepReport {
        points,
        interaction_norm,
        lipschitz_violations,
        flags,
        empirical_g_max,
    })
}

fn empirical_g_max(points: &[SweepPoint]) -> Option<f64> {
    let origin = points
        .iter()
        .min_by(|a, b| a.g.abs().partial_cmp(&b.g.abs()).unwrap())?;
    let threshold = origin.gap / 2.0;
    let mut sorted: Vec<&SweepPoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.g.abs().partial_cmp(&b.g.abs()).unwrap());
    let mut best = None;
    for p in sorted {
        if p.gap > threshold {
            best = Some(p.g.abs());
        } else {
            break;
        }
    }
    best
}

/// Pure-imaginary antisymmetric coefficient matrix `A` of
/// `H = Σ_{ij} c_i A_ij c_j`, with its spectral decomposition.
#[derive(Clone, Debug)]
pub struct QuadraticForm {
    pub matrix: CMatrix,
    /// Ascending eigenvalues of `A`.
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
    pub p_plus: CMatrix,
    pub p_minus: CMatrix,
    /// `P_+ - P_-`.
    pub sign: CMatrix,
    /// `|A|`.
    pub abs: CMatrix,
    /// Smallest positive eigenvalue of `A`.
    pub single_particle_gap: f64,
    /// Eigenvalues of `A` with magnitude below [`QUADRATIC_ZERO_TOL`].
    pub zero_modes: usize,
}

impl QuadraticForm {
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        let (eigenvalues, eigenvectors) = eigh(&matrix);
        let mut p_plus = CMatrix::zeros(n, n);
        let mut p_minus = CMatrix::zeros(n, n);
        let mut abs = CMatrix::zeros(n, n);
        let mut zero_modes = 0;
        let mut gap = f64::INFINITY;
        for (k, &lam) in eigenvalues.iter().enumerate() {
            let v = eigenvectors.column(k);
            let proj = v * v.adjoint();
            abs += &proj * Complex::new(lam.abs(), 0.0);
            if lam.abs() < QUADRATIC_ZERO_TOL {
                zero_modes += 1;
            } else if lam > 0.0 {
                p_plus += &proj;
                gap = gap.min(lam);
            } else {
                p_minus += &proj;
            }
        }
        if !gap.is_finite() {
            return Err(MajoranaError::Gapless);
        }
        let sign = &p_plus - &p_minus;
        Ok(QuadraticForm {
            matrix,
            eigenvalues,
            eigenvectors,
            p_plus,
            p_minus,
            sign,
            abs,
            single_particle_gap: gap,
            zero_modes,
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max(|A^T + A|, |conj(A) + A|)`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let t = max_abs(&(self.matrix.transpose() + &self.matrix));
        let c = max_abs(&(self.matrix.map(|z| z.conj()) + &self.matrix));
        t.max(c)
    }

    /// Largest `|λ_k + λ_{n-1-k}|`: eigenvalues pair as `±`.
    pub fn pairing_defect(&self) -> f64 {
        let n = self.eigenvalues.len();
        (0..n)
            .map(|k| (self.eigenvalues[k] + self.eigenvalues[n - 1 - k]).abs())
            .fold(0.0, f64::max)
    }

    /// Many-body spectrum `Σ_k 2 ε_k s_k`, `s_k = ±1`, over the nonnegative
    /// half `ε_k` of the eigenvalues of `A`; ascending.
    pub fn free_fermion_spectrum(&self) -> Result<Vec<f64>> {
        let n = self.dim();
        if !n.is_multiple_of(2) {
            return Err(MajoranaError::Domain {
                module: "spectral",
                reason: format!("free-fermion reconstruction needs an even generator count, got {n}"),
            });
        }
        let m = n / 2;
        let eps: Vec<f64> = self.eigenvalues[m..].iter().map(|e| e.max(0.0)).collect();
        let mut energies: Vec<f64> = (0..(1usize << m))
            .map(|occ| {
                eps.iter()
                    .enumerate()
                    .map(|(k, &e)| if occ >> k & 1 == 1 { 2.0 * e } else { -2.0 * e })
                    .sum()
            })
            .collect();
        energies.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(energies)
    }
}

/// Extracts `A` from a quadratic operator on generators `1..=generators`
/// (coefficient `h` of `c_i c_j`, `i<j`, becomes `A_ij = h/2 = -A_ji`).
pub fn quadratic_form_from(op: &MajoranaOperator, generators: usize) -> Result<QuadraticForm> {
    if op.is_zero() {
        return Err(MajoranaError::Gapless);
    }
    let mut a = CMatrix::zeros(generators, generators);
    for (s, c) in op.terms() {
        if s.len() != 2 || s.max_site() > generators {
            return Err(MajoranaError::NotQuadratic {
                monomial: MajoranaOperator::monomial(s, c).to_string(),
            });
        }
        let v = s.to_vec();
        let (i, j) = (v[0] - 1, v[1] - 1);
        a[(i, j)] += c * 0.5;
        a[(j, i)] -= c * 0.5;
    }
    QuadraticForm::from_matrix(a)
}

/// `Σ_ij A_ij c_{σ(i)} c_{σ(j)}` for a generator relabelling `σ`.
pub fn quadratic_operator(a: &CMatrix, label: impl Fn(usize) -> usize) -> MajoranaOperator {
    let mut op = MajoranaOperator::zero();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if i != j && a[(i, j)] != Complex::new(0.0, 0.0) {
                op += &MajoranaOperator::product_of(&[label(i), label(j)], a[(i, j)]);
            }
        }
    }
    op
}

/// Real linear combination `Σ_k w_k c_{label(k)}`.
pub fn linear_operator(weights: &[Complex], label: impl Fn(usize) -> usize) -> MajoranaOperator {
    MajoranaOperator::from_terms(
        weights
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != Complex::new(0.0, 0.0))
            .map(|(k, w)| (SiteSet::single(label(k)), *w)),
    )
}

/// Edge-separating change of variables on the odd generators of a chain:
/// `γ̂_0` and `c̃_{2ℓ+1}`, `ℓ = 1..N-1`, each a real combination of
/// `c_1, c_3, ..., c_{2N-1}`.
#[derive(Clone, Debug)]
pub struct TildeFrame {
    pub n: usize,
    pub kappa: f64,
    /// Coefficients of `γ̂_0` over `c_{2m-1}`, `m = 1..N`.
    pub gamma_hat: Vec<f64>,
    /// `c_tilde[ℓ-1]` holds the coefficients of `c̃_{2ℓ+1}` over `c_{2m-1}`.
    pub c_tilde: Vec<Vec<f64>>,
    /// `normalizations[ℓ-1] = 𝒩_{2ℓ+1}`.
    pub normalizations: Vec<f64>,
}

fn geometric_partial(kappa: f64, l: usize) -> f64 {
    (0..l).map(|m| kappa.powi(2 * m as i32)).sum()
}

/// Builds the frame for a chain; rejects `κ = 0`, where `𝒩` diverges.
pub fn tilde_frame(spec: &ModelSpec) -> Result<TildeFrame> {
    spec.validate()?;
    if spec.legs != 1 {
        return Err(MajoranaError::InvalidSpec("tilde frame is defined for a single chain".into()));
    }
    let (n, kappa) = (spec.n, spec.kappa);
    if kappa == 0.0 {
        return Err(MajoranaError::Domain {
            module: "spectral",
            reason: "tilde frame requires 0 < |κ| < 1 (𝒩 has κ^ℓ denominators)".into(),
        });
    }
    let norm = model::gamma0_normalization(n, kappa);
    let gamma_hat = (0..n).map(|m| kappa.powi(m as i32) * norm).collect();
    let mut c_tilde = Vec::with_capacity(n - 1);
    let mut normalizations = Vec::with_capacity(n - 1);
    for l in 1..n {
        let s = geometric_partial(kappa, l);
        let mut raw = vec![0.0; n];
        for (m, slot) in raw.iter_mut().enumerate().take(l) {
            *slot = kappa.powi(m as i32);
        }
        raw[l] = -s / kappa.powi(l as i32);
        let nrm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        c_tilde.push(raw.iter().map(|x| x / nrm).collect());
        normalizations.push(nrm);
    }
    Ok(TildeFrame {
        n,
        kappa,
        gamma_hat,
        c_tilde,
        normalizations,
    })
}

impl TildeFrame {
    fn odd_combination(weights: &[f64]) -> MajoranaOperator {
        MajoranaOperator::from_terms(
            weights
                .iter()
                .enumerate()
                .filter(|(_, w)| **w != 0.0)
                .map(|(m, w)| (SiteSet::single(2 * m + 1), Complex::new(*w, 0.0))),
        )
    }

    pub fn gamma_hat_operator(&self) -> MajoranaOperator {
        Self::odd_combination(&self.gamma_hat)
    }

    /// `c̃_{2ℓ+1}` in raw generators, `1 <= ℓ <= N-1`.
    pub fn c_tilde_operator(&self, l: usize) -> MajoranaOperator {
        Self::odd_combination(&self.c_tilde[l - 1])
    }

    /// Raw expression of tilde variable `c̃_i`, `2 <= i <= 2N-1`
    /// (`c̃_{2ℓ} = c_{2ℓ}`).
    pub fn tilde_variable(&self, i: usize) -> MajoranaOperator {
        if i.is_multiple_of(2) {
            MajoranaOperator::generator(i)
        } else {
            self.c_tilde_operator((i - 1) / 2)
        }
    }

    /// Complete family `γ̂_0, c̃_3, ..., c̃_{2N-1}, c_2, c_4, ..., c_{2N}`.
    pub fn complete_family(&self) -> Vec<MajoranaOperator> {
        let mut fam = vec![self.gamma_hat_operator()];
        fam.extend((1..self.n).map(|l| self.c_tilde_operator(l)));
        fam.extend((1..=self.n).map(|l| MajoranaOperator::generator(2 * l)));
        fam
    }

    /// `max |{x_a, x_b} - 2 δ_ab|` over the complete family, including any
    /// non-scalar residue of the anticommutators.
    pub fn gram_defect(&self) -> f64 {
        let fam = self.complete_family();
        let mut worst: f64 = 0.0;
        for (a, x) in fam.iter().enumerate() {
            for (b, y) in fam.iter().enumerate().skip(a) {
                let mut anti = crate::algebra::anticommutator(x, y);
                if a == b {
                    anti.add_term(SiteSet::empty(), Complex::new(-2.0, 0.0));
                }
                worst = worst.max(anti.max_abs_coefficient());
            }
        }
        worst
    }

    /// `H_0` as printed in tilde variables, on abstract generators where
    /// abstract index `k` stands for `c̃_{k+1}` (`k = 1..2N-2`).
    pub fn h0_in_tilde_variables(&self) -> MajoranaOperator {
        let (n, kappa) = (self.n, self.kappa);
        let i = Complex::new(0.0, 1.0);
        let abstract_of = |tilde: usize| tilde - 1;
        let mut h = MajoranaOperator::product_of(
            &[abstract_of(3), abstract_of(2)],
            i * kappa * self.normalizations[0],
        );
        for l in 2..n {
            let w = kappa.powi(l as i32) / geometric_partial(kappa, l);
            let up = self.normalizations[l - 1];
            let down = self.normalizations[l - 2];
            h += &MajoranaOperator::product_of(
                &[abstract_of(2 * l + 1), abstract_of(2 * l)],
                i * w * up,
            );
            h += &MajoranaOperator::product_of(
                &[abstract_of(2 * l - 1), abstract_of(2 * l)],
                -i * w * down,
            );
        }
        h
    }

    /// Tilde-variable `H_0` re-expanded in raw generators.
    pub fn h0_rebuilt(&self) -> MajoranaOperator {
        self.h0_in_tilde_variables()
            .substitute(|k| self.tilde_variable(k + 1))
    }

    /// The bulk quadratic form `Ã` over `c̃_2, ..., c̃_{2N-1}`.
    pub fn quadratic_form(&self) -> Result<QuadraticForm> {
        quadratic_form_from(&self.h0_in_tilde_variables(), 2 * self.n - 2)
    }
}

/// Numerical checks of the tilde-variable rewrite of `H_0`.
#[derive(Clone, Debug)]
pub struct TildeReport {
    pub frame: TildeFrame,
    /// `max_ℓ |c̃_{2ℓ+1}² - 1|`.
    pub square_defect: f64,
    /// `max_ℓ |{γ_0, c̃_{2ℓ+1}}|`.
    pub edge_anticommutator_defect: f64,
    /// `max_{ℓ≠ℓ'} |{c̃_{2ℓ+1}, c̃_{2ℓ'+1}}|`.
    pub mutual_anticommutator_defect: f64,
    pub gram_defect: f64,
    /// Coefficient-level difference between rebuilt and original `H_0`.
    pub symbolic_defect: f64,
    /// Entrywise Fock-matrix difference between rebuilt and original `H_0`.
    pub matrix_defect: f64,
    /// `max(|[H̃_0, γ̂_0]|, |[H̃_0, c_{2N}]|)` for the rebuilt Hamiltonian.
    pub edge_decoupling_defect: f64,
}

pub fn tilde_check(spec: &ModelSpec) -> Result<TildeReport> {
    let frame = tilde_frame(spec)?;
    let h0 = model::build_h0(spec)?;
    let gamma0 = model::build_gamma0(spec)?;
    let one = MajoranaOperator::identity();
    let mut square_defect: f64 = 0.0;
    let mut edge_defect: f64 = 0.0;
    let mut mutual_defect: f64 = 0.0;
    for l in 1..spec.n {
        let ct = frame.c_tilde_operator(l);
        square_defect = square_defect.max((&(&ct * &ct) - &one).max_abs_coefficient());
        edge_defect = edge_defect
            .max(crate::algebra::anticommutator(&gamma0, &ct).max_abs_coefficient());
        for lp in (l + 1)..spec.n {
            let other = frame.c_tilde_operator(lp);
            mutual_defect = mutual_defect
                .max(crate::algebra::anticommutator(&ct, &other).max_abs_coefficient());
        }
    }
    let rebuilt = frame.h0_rebuilt();
    let symbolic_defect = (&rebuilt - &h0).max_abs_coefficient();
    let fock = FockRepresentation::new(spec.n)?;
    let matrix_defect = max_abs_diff(&fock.compile(&rebuilt)?, &fock.compile(&h0)?);

    // [H_0, γ̂_0] and [H_0, c_2N] vanish iff H_0 is free of both edge variables
    let edge_decoupling_defect = crate::algebra::commutator(&rebuilt, &frame.gamma_hat_operator())
        .max_abs_coefficient()
        .max(
            crate::algebra::commutator(&rebuilt, &MajoranaOperator::generator(2 * spec.n))
                .max_abs_coefficient(),
        );
    Ok(TildeReport {
        gram_defect: frame.gram_defect(),
        frame,
        square_defect,
        edge_anticommutator_defect: edge_defect,
        mutual_anticommutator_defect: mutual_defect,
        symbolic_defect,
        matrix_defect,
        edge_decoupling_defect,
    })
}

/// Doubled-system construction `H̃ = c̃Ãc̃ - d̃Ãd̃` and its `η` fermions.
#[derive(Clone, Debug)]
pub struct EtaReport {
    pub bulk_generators: usize,
    pub single_particle_gap: f64,
    /// `max |Û† diag(Ã, -Ã) Û - [[0, i|Ã|], [-i|Ã|, 0]]|`.
    pub rotation_defect: f64,
    /// `max |{η_i, η_j†} - δ_ij|` and `max |{η_i, η_j}|`.
    pub canonical_defect: f64,
    /// `max |H̃ - (4 η†|Ã|η - 2 Tr|Ã|)|` entrywise on Fock space.
    pub operator_identity_defect: f64,
    /// Largest difference of ground-shifted spectra of `H̃` and `4 η†|Ã|η`.
    pub spectrum_defect: f64,
    /// Same comparison against `2 η†|Ã|η`; nonzero whenever `Ã ≠ 0`.
    pub half_scale_spectrum_defect: f64,
    /// `min eig(H̃ - E_0 - ΔE_0 N̂)`.
    pub lower_bound_min_eig: f64,
    pub doubled_ground_energy: f64,
}

/// Builds the doubled Hamiltonian from the chain's bulk form `Ã`.
pub fn doubled_eta_check(spec: &ModelSpec) -> Result<EtaReport> {
    let q = tilde_frame(spec)?.quadratic_form()?;
    eta_check_from_form(&q)
}

/// Doubled-system check for an arbitrary gapped quadratic form without zero modes.
pub fn eta_check_from_form(q: &QuadraticForm) -> Result<EtaReport> {
    let n = q.dim();
    if q.zero_modes > 0 {
        return Err(MajoranaError::Domain {
            module: "spectral",
            reason: format!("η construction needs Ã without zero modes, found {}", q.zero_modes),
        });
    }
    let i = Complex::new(0.0, 1.0);
    let one = Complex::new(1.0, 0.0);
    let zero = Complex::new(0.0, 0.0);
    let a = &q.matrix;

    // generators 1..n are c̃, n+1..2n are d̃
    let c_label = |k: usize| k + 1;
    let d_label = |k: usize| n + k + 1;
    let h_doubled = &quadratic_operator(a, c_label) - &quadratic_operator(a, d_label);

    let is = &q.sign * i;
    let r = 1.0 / 2f64.sqrt();
    let u = CMatrix::from_fn(2 * n, 2 * n, |row, col| {
        let (br, bc) = (row / n, col / n);
        let (ir, ic) = (row % n, col % n);
        let v = if br == bc {
            if ir == ic { one } else { zero }
        } else {
            is[(ir, ic)]
        };
        v * r
    });
    let mut block = CMatrix::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(a);
    block.view_mut((n, n), (n, n)).copy_from(&(-a));
    let mut target = CMatrix::zeros(2 * n, 2 * n);
    target.view_mut((0, n), (n, n)).copy_from(&(&q.abs * i));
    target.view_mut((n, 0), (n, n)).copy_from(&(&q.abs * -i));
    let rotation_defect = max_abs_diff(&(u.adjoint() * &block * &u), &target);

    let ud = u.adjoint();
    let row_op = |row: usize| {
        let w: Vec<Complex> = (0..2 * n).map(|col| ud[(row, col)]).collect();
        linear_operator(&w, |k| k + 1)
    };
    let etas: Vec<MajoranaOperator> = (0..n)
        .map(|k| (&row_op(k) + &row_op(n + k).scale(i)).scale_real(0.5))
        .collect();
    let eta_dag: Vec<MajoranaOperator> = etas.iter().map(|e| e.dagger()).collect();

    let mut canonical_defect: f64 = 0.0;
    for j in 0..n {
        for k in 0..n {
            let mut x = crate::algebra::anticommutator(&etas[j], &eta_dag[k]);
            if j == k {
                x.add_term(SiteSet::empty(), -one);
            }
            canonical_defect = canonical_defect.max(x.max_abs_coefficient());
            let y = crate::algebra::anticommutator(&etas[j], &etas[k]);
            canonical_defect = canonical_defect.max(y.max_abs_coefficient());
        }
    }

    let mut energy = MajoranaOperator::zero();
    let mut number = MajoranaOperator::zero();
    for j in 0..n {
        number += &(&eta_dag[j] * &etas[j]);
        for k in 0..n {
            let w = q.abs[(j, k)];
            if w.norm() > 0.0 {
                energy += &(&eta_dag[j] * &etas[k]).scale(w);
            }
        }
    }

    let fock = FockRepresentation::new(n)?;
    let hm = fock.compile(&h_doubled)?;
    let em = fock.compile(&energy)?;
    let nm = fock.compile(&number)?;
    let dim = fock.dim();
    let ident = CMatrix::identity(dim, dim);
    let trace_abs = q.abs.trace();
    let predicted = &em * Complex::new(4.0, 0.0) - &ident * (trace_abs * 2.0);
    let operator_identity_defect = max_abs_diff(&hm, &predicted);

    let shifted = |v: Vec<f64>| {
        let base = v[0];
        v.into_iter().map(|x| x - base).collect::<Vec<_>>()
    };
    let h_spec = eigvalsh(&hm);
    let ground = h_spec[0];
    let h_shift = shifted(h_spec);
    let compare = |scale: f64| {
        let s = shifted(eigvalsh(&(&em * Complex::new(scale, 0.0))));
        h_shift
            .iter()
            .zip(&s)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let spectrum_defect = compare(4.0);
    let half_scale_spectrum_defect = compare(2.0);

    let bound = &hm - &ident * Complex::new(ground, 0.0) - &nm * Complex::new(q.single_particle_gap, 0.0);
    let lower_bound_min_eig = eigvalsh(&bound)[0];

    Ok(EtaReport {
        bulk_generators: n,
        single_particle_gap: q.single_particle_gap,
        rotation_defect,
        canonical_defect,
        operator_identity_defect,
        spectrum_defect,
        half_scale_spectrum_defect,
        lower_bound_min_eig,
        doubled_ground_energy: ground,
    })
}
