//! Edge zero modes: the perturbative series `[H_0, γ_n] = -[V, γ_{n-1}]`,
//! the kernel of the adjoint action on odd Hermitian monomials, and
//! localization profiles.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::algebra::{commutator, Complex, HermitianBasisElement, MajoranaOperator, Parity, SiteSet};
use crate::error::{MajoranaError, Result};
use crate::fock::FockRepresentation;
use crate::linalg::{matrix_commutator, real_null_space, spectral_norm, CMatrix, CVector};
use crate::model::{self, InteractionSpec, ModelSpec};

/// Least-squares residual above which an order is declared obstructed.
pub const OBSTRUCTION_TOL: f64 = 1e-8;
pub const DEFAULT_KERNEL_TOL: f64 = 1e-10;
/// Relative singular-value cutoff of the series pseudo-inverse.
pub const SERIES_RCOND: f64 = 1e-10;
/// Coefficients at or below this magnitude are dropped from solver output.
pub const COEFFICIENT_FLOOR: f64 = 1e-14;
/// Sites counted as the left edge when ranking kernel vectors.
pub const EDGE_SITES: usize = 4;
/// Largest odd-generator count the kernel method accepts (basis 2^10).
pub const MAX_KERNEL_GENERATORS: usize = 11;
/// Largest degree block the series solver will factorize.
pub const MAX_SERIES_BLOCK: usize = 6000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gauge {
    MinNorm,
    /// The displayed first-order family with free parameter `λ`.
    PaperLambda(f64),
}

impl std::fmt::Display for Gauge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Gauge::MinNorm => write!(f, "min_norm"),
            Gauge::PaperLambda(l) => write!(f, "paper_lambda({l})"),
        }
    }
}

impl std::str::FromStr for Gauge {
    type Err = MajoranaError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "min_norm" {
            return Ok(Gauge::MinNorm);
        }
        s.strip_prefix("paper_lambda(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|v| v.is_finite())
            .map(Gauge::PaperLambda)
            .ok_or_else(|| MajoranaError::Parse(format!("unknown gauge {s:?}")))
    }
}

fn ci(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn mono(sites: &[usize], c: Complex) -> MajoranaOperator {
    MajoranaOperator::product_of(sites, c)
}

/// `γ_1^{(0)} = -i c_2 c_3 c_5`.
pub fn kappa_series_gamma1_k0() -> MajoranaOperator {
    mono(&[2, 3, 5], ci(0.0, -1.0))
}

/// `γ_1^{(1)}(λ) = -i c_3c_4c_5 - i c_2c_3c_7 - iλ c_1c_3c_4 - i(1-λ) c_1c_2c_5`.
pub fn kappa_series_gamma1_k1(lambda: f64) -> MajoranaOperator {
    &(&(&mono(&[3, 4, 5], ci(0.0, -1.0)) + &mono(&[2, 3, 7], ci(0.0, -1.0)))
        + &mono(&[1, 3, 4], ci(0.0, -lambda)))
        + &mono(&[1, 2, 5], ci(0.0, lambda - 1.0))
}

/// `γ_1^{(2)}` for `λ = 0`.
pub fn kappa_series_gamma1_k2() -> MajoranaOperator {
    MajoranaOperator::from_terms([
        (SiteSet::from_bits(0b10_1010), ci(0.0, 2.0 / 3.0)),
        (SiteSet::from_bits(0b101_0010), ci(0.0, 1.0 / 3.0)),
        (SiteSet::from_bits(0b100_1100), ci(0.0, -2.0 / 3.0)),
        (SiteSet::from_bits(0b11_0100), ci(0.0, 1.0 / 3.0)),
        (SiteSet::from_bits(0b100_0011), ci(0.0, -1.0)),
        (SiteSet::from_bits(0b1_0000_0110), ci(0.0, -1.0)),
    ])
}

/// Matrix of `ad_H` on the monomials of one degree over sites `1..=sites`.
struct DegreeBlock {
    basis: Vec<SiteSet>,
    index: BTreeMap<SiteSet, usize>,
    svd: nalgebra::linalg::SVD<Complex, nalgebra::Dyn, nalgebra::Dyn>,
    cutoff: f64,
}

fn subsets_of_size(sites: usize, degree: usize) -> Vec<SiteSet> {
    let mut out = Vec::new();
    fn rec(start: usize, sites: usize, left: usize, acc: u64, out: &mut Vec<SiteSet>) {
        if left == 0 {
            out.push(SiteSet::from_bits(acc));
            return;
        }
        for s in start..=sites {
            if sites - s + 1 < left {
                break;
            }
            rec(s + 1, sites, left - 1, acc | 1 << (s - 1), out);
        }
    }
    rec(1, sites, degree, 0, &mut out);
    out.sort();
    out
}

/// Column-parallel assembly of `(coefficient_a([H, op(b)]))_{a,b}`.
fn adjoint_matrix<F>(h: &MajoranaOperator, basis: &[SiteSet], index: &BTreeMap<SiteSet, usize>, column: F) -> CMatrix
where
    F: Fn(SiteSet) -> MajoranaOperator + Sync,
{
    let cols: Vec<Vec<(usize, Complex)>> = basis
        .par_iter()
        .map(|&b| {
            commutator(h, &column(b))
                .terms()
                .map(|(s, c)| (*index.get(&s).expect("adjoint action left the basis"), c))
                .collect()
        })
        .collect();
    let d = basis.len();
    let mut m = CMatrix::zeros(d, d);
    for (j, col) in cols.into_iter().enumerate() {
        for (i, c) in col {
            m[(i, j)] += c;
        }
    }
    m
}

impl DegreeBlock {
    fn new(h: &MajoranaOperator, sites: usize, degree: usize) -> Result<Self> {
        let basis = subsets_of_size(sites, degree);
        if basis.len() > MAX_SERIES_BLOCK {
            return Err(MajoranaError::Domain {
                module: "zero_modes",
                reason: format!(
                    "degree-{degree} block on {sites} sites has {} monomials (limit {MAX_SERIES_BLOCK})",
                    basis.len()
                ),
            });
        }
        let index: BTreeMap<SiteSet, usize> = basis.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        let m = adjoint_matrix(h, &basis, &index, |b| MajoranaOperator::monomial(b, ci(1.0, 0.0)));
        let svd = m.svd(true, true);
        let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
        Ok(DegreeBlock {
            basis,
            index,
            svd,
            cutoff: SERIES_RCOND * smax.max(f64::MIN_POSITIVE),
        })
    }

    fn nullity(&self) -> usize {
        self.svd.singular_values.iter().filter(|&&s| s <= self.cutoff).count()
    }

    fn solve(&self, rhs: &MajoranaOperator) -> MajoranaOperator {
        let mut b = CVector::zeros(self.basis.len());
        for (s, c) in rhs.terms() {
            b[self.index[&s]] = c;
        }
        let x = self.svd.solve(&b, self.cutoff).expect("svd factors computed");
        MajoranaOperator::from_terms(
            self.basis
                .iter()
                .zip(x.iter())
                .filter(|(_, c)| c.norm() > COEFFICIENT_FLOOR)
                .map(|(&s, &c)| (s, c)),
        )
    }
}

/// Min-norm solver for `[H, X] = R` on a fixed site range, caching one
/// factorization per degree.
struct AdjointSolver<'a> {
    h: &'a MajoranaOperator,
    sites: usize,
    blocks: BTreeMap<usize, DegreeBlock>,
}

impl<'a> AdjointSolver<'a> {
    fn new(h: &'a MajoranaOperator, sites: usize) -> Self {
        AdjointSolver {
            h,
            sites,
            blocks: BTreeMap::new(),
        }
    }

    /// Returns `(X, total nullity of the blocks used)`.
    fn solve(&mut self, rhs: &MajoranaOperator) -> Result<(MajoranaOperator, usize)> {
        if rhs.max_site() > self.sites {
            return Err(MajoranaError::Domain {
                module: "zero_modes",
                reason: format!("right-hand side reaches site {} beyond {}", rhs.max_site(), self.sites),
            });
        }
        let mut degrees: Vec<usize> = rhs.terms().map(|(s, _)| s.len()).collect();
        degrees.dedup();
        degrees.sort_unstable();
        degrees.dedup();
        let mut x = MajoranaOperator::zero();
        let mut nullity = 0;
        for d in degrees {
            if !self.blocks.contains_key(&d) {
                self.blocks.insert(d, DegreeBlock::new(self.h, self.sites, d)?);
            }
            let block = &self.blocks[&d];
            x += &block.solve(&rhs.degree_part(d));
            nullity += block.nullity();
        }
        Ok((x, nullity))
    }
}

fn largest_term(op: &MajoranaOperator) -> String {
    op.terms()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .map(|(s, c)| MajoranaOperator::monomial(s, c).to_string())
        .unwrap_or_else(|| "0".into())
}

#[derive(Clone, Debug)]
pub struct SeriesSolution {
    pub order: usize,
    /// `γ_0, ..., γ_k`.
    pub gamma: Vec<MajoranaOperator>,
    /// `residuals[0] = ‖[H_0, γ_0]‖`, `residuals[n] = ‖[H_0, γ_n] + [V, γ_{n-1}]‖`.
    pub residuals: Vec<f64>,
    pub gauge: Gauge,
    /// Per order `n >= 1`: dimension of the homogeneous solution space in the
    /// degree blocks that were solved (free gauge parameters).
    pub free_parameters: Vec<usize>,
    /// `γ_1^{(0)}, γ_1^{(1)}` and, when its equation is solvable, `γ_1^{(2)}`
    /// under the lambda gauge.
    pub kappa_orders: Option<Vec<MajoranaOperator>>,
    /// Least-squares residual of the `κ^2` equation when it has no solution.
    pub kappa2_obstruction: Option<f64>,
    /// Norm of the exact-solution correction added to the truncated κ series.
    pub lambda_correction_norm: Option<f64>,
}

impl SeriesSolution {
    /// `Σ_n g^n γ_n`.
    pub fn resummed(&self, g: f64) -> MajoranaOperator {
        let mut out = MajoranaOperator::zero();
        let mut w = 1.0;
        for gn in &self.gamma {
            out += &gn.scale_real(w);
            w *= g;
        }
        out
    }
}

/// Solves the zero-mode recursion to order `k` on a chain.
pub fn series_solve(spec: &ModelSpec, k: usize, gauge: Gauge) -> Result<SeriesSolution> {
    spec.validate()?;
    if spec.legs != 1 {
        return Err(MajoranaError::InvalidSpec("series solver is defined for a single chain".into()));
    }
    let h0 = model::build_h0(spec)?;
    let v = model::build_interaction(spec)?;
    if v.parity() != Parity::Even && !v.is_zero() {
        return Err(MajoranaError::InvalidSpec("interaction must be even".into()));
    }
    if let Gauge::PaperLambda(_) = gauge {
        if spec.interaction != InteractionSpec::C1C2C3C4 || spec.n < 5 {
            return Err(MajoranaError::InvalidSpec(
                "paper_lambda gauge needs V = c1c2c3c4 on a chain with N >= 5".into(),
            ));
        }
    }
    let sites = 2 * spec.n;
    let gamma0 = model::build_gamma0(spec)?;
    let mut solver = AdjointSolver::new(&h0, sites);
    let mut gamma = vec![gamma0.clone()];
    let mut residuals = vec![commutator(&h0, &gamma0).coefficient_norm()];
    let mut free_parameters = Vec::new();
    let mut kappa_orders = None;
    let mut lambda_correction_norm = None;
    let mut kappa2_obstruction = None;

    for n in 1..=k {
        let rhs = -&commutator(&v, &gamma[n - 1]);
        let (gn, nullity) = match (gauge, n) {
            (Gauge::PaperLambda(lambda), 1) => {
                let (orders, obstruction) = lambda_kappa_orders(spec, lambda)?;
                kappa2_obstruction = obstruction;
                let mut candidate = MajoranaOperator::zero();
                let mut w = 1.0;
                for o in &orders {
                    candidate += &o.scale_real(w);
                    w *= spec.kappa;
                }
                let defect = &rhs - &commutator(&h0, &candidate);
                let (x, nullity) = solver.solve(&defect)?;
                lambda_correction_norm = Some(x.coefficient_norm());
                kappa_orders = Some(orders);
                (&candidate + &x, nullity)
            }
            _ => solver.solve(&rhs)?,
        };
        let res = &commutator(&h0, &gn) - &rhs;
        let r = res.coefficient_norm();
        if r > OBSTRUCTION_TOL {
            return Err(MajoranaError::Obstruction {
                order: n,
                residual: r,
                tolerance: OBSTRUCTION_TOL,
                component: largest_term(&res),
            });
        }
        residuals.push(r);
        free_parameters.push(nullity);
        gamma.push(gn);
    }
    Ok(SeriesSolution {
        order: k,
        gamma,
        residuals,
        gauge,
        free_parameters,
        kappa_orders,
        kappa2_obstruction,
        lambda_correction_norm,
    })
}

/// `γ_1^{(0)}, γ_1^{(1)}(λ)` and `γ_1^{(2)}`: the displayed one at `λ = 0`,
/// otherwise the min-norm solution of `[H_{0,0}, X] = -[H_{0,1}, γ_1^{(1)}]`
/// if that equation is consistent. An inconsistent equation is returned as
/// its residual instead of a third order.
fn lambda_kappa_orders(spec: &ModelSpec, lambda: f64) -> Result<(Vec<MajoranaOperator>, Option<f64>)> {
    let k0 = kappa_series_gamma1_k0();
    let k1 = kappa_series_gamma1_k1(lambda);
    if lambda == 0.0 {
        return Ok((vec![k0, k1, kappa_series_gamma1_k2()], None));
    }
    let (h01, h00) = model::chain_h0_split(spec.n, 0);
    let rhs = -&commutator(&h01, &k1);
    let mut solver = AdjointSolver::new(&h00, 2 * spec.n);
    let (x, _) = solver.solve(&rhs)?;
    let res = (&commutator(&h00, &x) - &rhs).coefficient_norm();
    if res > OBSTRUCTION_TOL {
        Ok((vec![k0, k1], Some(res)))
    } else {
        Ok((vec![k0, k1, x], None))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingReport {
    /// `(g, ‖[H_0 + gV, Σ g^n γ_n]‖)`.
    pub points: Vec<(f64, f64)>,
    /// Log-log slope over points with nonzero residual.
    pub slope: Option<f64>,
}

pub fn series_residual_scaling(spec: &ModelSpec, solution: &SeriesSolution, g_grid: &[f64]) -> Result<ScalingReport> {
    let h0 = model::build_h0(spec)?;
    let v = model::build_interaction(spec)?;
    let points: Vec<(f64, f64)> = g_grid
        .iter()
        .map(|&g| {
            let h = &h0 + &v.scale_real(g);
            (g, commutator(&h, &solution.resummed(g)).coefficient_norm())
        })
        .collect();
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(g, r)| *g != 0.0 && *r > 1e-14)
        .map(|(g, r)| (g.abs().ln(), r.ln()))
        .collect();
    let slope = (usable.len() >= 2).then(|| linear_fit(&usable).0);
    Ok(ScalingReport { points, slope })
}

/// Least-squares `(slope, intercept, r²)` of `y` against `x`.
pub fn linear_fit(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r2)
}

/// Truncation residuals of an operator along a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalizationProfile {
    /// `(m, ‖γ - Π_{≥2m-1} γ‖)` for `m = 2..=N`, coefficient norm.
    pub residuals: Vec<(usize, f64)>,
    /// Same residuals in operator norm, when the chain is small enough.
    pub operator_residuals: Option<Vec<(usize, f64)>>,
    /// `(m, w_m)`: coefficient mass on terms whose rightmost site lies in cell `m`
    /// (sites `2m-1, 2m`), `m = 1..=N`.
    pub cell_weights: Vec<(usize, f64)>,
    /// Fitted `log w_m` slope per cell.
    pub rate: Option<f64>,
    pub rate_r2: Option<f64>,
    /// Fitted `log r_m` slope.
    pub tail_rate: Option<f64>,
}

/// Largest chain for which operator-norm residuals are also computed.
pub const PROFILE_OPERATOR_NORM_MAX_N: usize = 8;
/// Residuals and weights at or below this value are excluded from fits.
pub const PROFILE_FIT_FLOOR: f64 = 1e-13;

pub fn localization_profile(gamma: &MajoranaOperator, spec: &ModelSpec) -> Result<LocalizationProfile> {
    let n = spec.n;
    if gamma.max_site() > 2 * n * spec.legs {
        return Err(MajoranaError::Dimension {
            max_site: gamma.max_site(),
            modes: n * spec.legs,
        });
    }
    let residuals: Vec<(usize, f64)> = (2..=n)
        .map(|m| (m, (gamma - &gamma.truncate_support(2 * m - 1)).coefficient_norm()))
        .collect();
    let operator_residuals = if n <= PROFILE_OPERATOR_NORM_MAX_N && spec.legs == 1 {
        let fock = FockRepresentation::new(n)?;
        let mut out = Vec::new();
        for m in 2..=n {
            out.push((m, fock.operator_norm(&(gamma - &gamma.truncate_support(2 * m - 1)))?));
        }
        Some(out)
    } else {
        None
    };
    let mut mass = vec![0.0; n + 1];
    for (s, c) in gamma.terms() {
        let top = s.max_site();
        if top > 0 {
            let cell = top.div_ceil(2).min(n);
            mass[cell] += c.norm_sqr();
        }
    }
    let cell_weights: Vec<(usize, f64)> = (1..=n).map(|m| (m, mass[m].sqrt())).collect();
    let fit = |pts: Vec<(f64, f64)>| (pts.len() >= 2).then(|| linear_fit(&pts));
    let cell_fit = fit(cell_weights
        .iter()
        .filter(|(_, w)| *w > PROFILE_FIT_FLOOR)
        .map(|&(m, w)| (m as f64, w.ln()))
        .collect());
    let tail_fit = fit(residuals
        .iter()
        .filter(|(_, r)| *r > PROFILE_FIT_FLOOR)
        .map(|&(m, r)| (m as f64, r.ln()))
        .collect());
    Ok(LocalizationProfile {
        residuals,
        operator_residuals,
        cell_weights,
        rate: cell_fit.map(|f| f.0),
        rate_r2: cell_fit.map(|f| f.2),
        tail_rate: tail_fit.map(|f| f.0),
    })
}

impl LocalizationProfile {
    pub fn is_strictly_decreasing(&self) -> bool {
        self.residuals.windows(2).all(|w| w[1].1 < w[0].1)
    }
}

#[derive(Clone, Debug)]
pub struct KernelReport {
    /// Odd subsets of `{1, ..., 2N-1}` in canonical order.
    pub basis: Vec<HermitianBasisElement>,
    /// `max(|M^T + M|, |conj(M) + M|)`.
    pub matrix_defect: f64,
    pub kernel_dim: usize,
    /// Real coefficient vectors over `basis`, one per column.
    pub kernel_basis: DMatrix<f64>,
    /// Index of the full product `c_1 ⋯ c_{2N-1}` in `basis`.
    pub trivial_index: usize,
    /// `max |M t|` for the trivial vector `t`.
    pub trivial_residual: f64,
    pub trivial_in_kernel: bool,
    /// `max_v ‖[H, op(v)]‖` over the kernel basis.
    pub kernel_consistency: f64,
    pub h_norm: f64,
    pub kernel_tol: f64,
    /// Selected mode, unit coefficient norm.
    pub gamma: MajoranaOperator,
    pub gamma_coefficients: Vec<f64>,
    /// Coefficient mass fraction of `γ` on monomials within sites `1..=4`.
    pub edge_weight: f64,
    /// Overlap of `γ` with the trivial vector.
    pub trivial_overlap: f64,
    /// `‖[H, γ]‖` from the symbolic commutator (coefficient norm).
    pub residual_symbolic: f64,
    /// `‖H γ - γ H‖` from separately compiled Fock matrices (operator norm).
    pub residual_fock: f64,
    pub profile: LocalizationProfile,
}

impl KernelReport {
    pub fn basis_size(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of `b ↦ [H, C_b]` on odd Hermitian monomials, and the most
/// edge-localized kernel mode orthogonal to the full product.
pub fn kernel_solve(spec: &ModelSpec, kernel_tol: f64) -> Result<KernelReport> {
    spec.validate()?;
    if spec.legs != 1 {
        return Err(MajoranaError::InvalidSpec("kernel method is defined for a single chain".into()));
    }
    let h = model::build_hamiltonian(spec)?;
    let generators = 2 * spec.n - 1;
    if h.max_site() > generators {
        return Err(MajoranaError::Domain {
            module: "zero_modes",
            reason: format!("H reaches site {} but must stay within 1..={generators}", h.max_site()),
        });
    }
    if generators > MAX_KERNEL_GENERATORS {
        return Err(MajoranaError::Domain {
            module: "zero_modes",
            reason: format!("kernel method limited to N <= {}", MAX_KERNEL_GENERATORS.div_ceil(2)),
        });
    }
    let basis = HermitianBasisElement::enumerate(generators);
    let sites: Vec<SiteSet> = basis.iter().map(|b| b.sites()).collect();
    let index: BTreeMap<SiteSet, usize> = sites.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let raw = adjoint_matrix(&h, &sites, &index, |s| {
        HermitianBasisElement::new(s).expect("odd").to_operator()
    });
    // project rows onto C_a: multiply by conj(phase_a)
    let m = CMatrix::from_fn(raw.nrows(), raw.ncols(), |i, j| basis[i].phase().conj() * raw[(i, j)]);
    let d = basis.len();
    let matrix_defect = {
        let t = crate::linalg::max_abs(&(m.transpose() + &m));
        let c = crate::linalg::max_abs(&(m.map(|z| z.conj()) + &m));
        t.max(c)
    };
    let b = m.map(|z| z.im);

    let trivial = SiteSet::from_bits((1u64 << generators) - 1);
    let trivial_index = index[&trivial];
    let trivial_residual = (0..d).map(|i| m[(i, trivial_index)].norm()).fold(0.0, f64::max);

    let (_, kernel) = real_null_space(&b, kernel_tol);
    let kernel_dim = kernel.ncols();
    if kernel_dim < 2 {
        return Err(MajoranaError::KernelTooSmall { dim: kernel_dim });
    }
    let trivial_in_kernel = {
        let proj: f64 = (0..kernel_dim).map(|c| kernel[(trivial_index, c)].powi(2)).sum();
        (1.0 - proj).abs() < 1e-10
    };

    let to_operator = |v: &[f64]| {
        MajoranaOperator::from_hermitian_coefficients(
            sites
                .iter()
                .zip(v)
                .filter(|(_, c)| c.abs() > 0.0)
                .map(|(&s, &c)| (s, ci(c, 0.0))),
        )
    };
    let fock = FockRepresentation::new(spec.n)?;
    let hm = fock.compile(&h)?;
    let h_norm = spectral_norm(&hm);
    let kernel_consistency = (0..kernel_dim)
        .map(|c| {
            let v: Vec<f64> = kernel.column(c).iter().copied().collect();
            commutator(&h, &to_operator(&v)).coefficient_norm()
        })
        .fold(0.0, f64::max);

    // remove the trivial direction, then re-orthonormalize
    let mut projected = kernel.clone();
    let overlaps: Vec<f64> = (0..kernel_dim).map(|c| kernel[(trivial_index, c)]).collect();
    for (c, o) in overlaps.iter().enumerate() {
        projected[(trivial_index, c)] -= o;
    }
    let svd = projected.svd(true, false);
    let u = svd.u.expect("u requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > 0.5)
        .collect();
    if keep.is_empty() {
        return Err(MajoranaError::KernelTooSmall { dim: kernel_dim });
    }
    let mut reduced = DMatrix::<f64>::zeros(d, keep.len());
    for (c, &k) in keep.iter().enumerate() {
        reduced.set_column(c, &u.column(k));
    }
    let weights = DVector::from_iterator(
        d,
        sites.iter().map(|s| if s.max_site() <= EDGE_SITES { 1.0 } else { 0.0 }),
    );
    let weighted = DMatrix::from_fn(d, keep.len(), |i, j| weights[i] * reduced[(i, j)]);
    let gram = reduced.transpose() * weighted;
    let eig = SymmetricEigen::new(gram);
    let top = (0..eig.eigenvalues.len())
        .max_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap().then(b.cmp(&a)))
        .expect("nonempty");
    let mut v: Vec<f64> = (&reduced * eig.eigenvectors.column(top)).iter().copied().collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let pivot = v.iter().copied().find(|x| x.abs() > 1e-8).unwrap_or(1.0);
    let sign = pivot.signum() / norm;
    for x in &mut v {
        *x *= sign;
        if x.abs() <= COEFFICIENT_FLOOR {
            *x = 0.0;
        }
    }
    let edge_weight = v
        .iter()
        .zip(&sites)
        .filter(|(_, s)| s.max_site() <= EDGE_SITES)
        .map(|(x, _)| x * x)
        .sum::<f64>()
        / v.iter().map(|x| x * x).sum::<f64>();
    let trivial_overlap = v[trivial_index].abs();
    let gamma = {
        let g = to_operator(&v);
        (&g + &g.dagger()).scale_real(0.5)
    };
    let residual_symbolic = commutator(&h, &gamma).coefficient_norm();
    let gm = fock.compile(&gamma)?;
    let residual_fock = spectral_norm(&matrix_commutator(&hm, &gm));
    let profile = localization_profile(&gamma, spec)?;
    Ok(KernelReport {
        basis,
        matrix_defect,
        kernel_dim,
        kernel_basis: kernel,
        trivial_index,
        trivial_residual,
        trivial_in_kernel,
        kernel_consistency,
        h_norm,
        kernel_tol,
        gamma,
        gamma_coefficients: v,
        edge_weight,
        trivial_overlap,
        residual_symbolic,
        residual_fock,
        profile,
    })
}

/// Row of a coefficient table: space-separated sites and the coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientRow {
    pub sites: String,
    pub re: f64,
    pub im: f64,
}

/// Terms of `op` in canonical order.
pub fn coefficient_table(op: &MajoranaOperator) -> Vec<CoefficientRow> {
    op.terms()
        .map(|(s, c)| CoefficientRow {
            sites: s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
            re: c.re,
            im: c.im,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1234(n: usize, kappa: f64) -> ModelSpec {
        ModelSpec::chain(n, kappa).with_interaction(InteractionSpec::C1C2C3C4, 0.0)
    }

    #[test]
    fn gauge_parsing() {
        assert_eq!("min_norm".parse::<Gauge>().unwrap(), Gauge::MinNorm);
        assert_eq!("paper_lambda(0.5)".parse::<Gauge>().unwrap(), Gauge::PaperLambda(0.5));
        assert!("paper_lambda(x)".parse::<Gauge>().is_err());
        assert_eq!(Gauge::PaperLambda(1.0).to_string().parse::<Gauge>().unwrap(), Gauge::PaperLambda(1.0));
    }

    #[test]
    fn subsets_enumeration() {
        let s = subsets_of_size(5, 3);
        assert_eq!(s.len(), 10);
        assert_eq!(s[0].to_vec(), vec![1, 2, 3]);
        assert!(s.iter().all(|x| x.len() == 3 && x.max_site() <= 5));
    }

    #[test]
    fn first_order_min_norm_solves_recursion() {
        let spec = c1234(5, 0.3);
        let sol = series_solve(&spec, 2, Gauge::MinNorm).unwrap();
        assert_eq!(sol.gamma[0], model::build_gamma0(&spec).unwrap());
        for (n, r) in sol.residuals.iter().enumerate() {
            assert!(*r < 1e-10, "order {n}: {r}");
        }
        for g in &sol.gamma {
            assert_eq!(g.parity(), Parity::Odd);
        }
    }

    #[test]
    fn lambda_gauge_contains_kappa_orders() {
        let spec = c1234(6, 0.3);
        let sol = series_solve(&spec, 1, Gauge::PaperLambda(0.0)).unwrap();
        let orders = sol.kappa_orders.as_ref().unwrap();
        assert_eq!(orders[0], kappa_series_gamma1_k0());
        assert_eq!(orders[2], kappa_series_gamma1_k2());
        assert!(sol.residuals[1] < 1e-10);
        let (h01, _) = model::chain_h0_split(6, 0);
        let kappa: f64 = 0.3;
        let candidate = &(&orders[0] + &orders[1].scale_real(kappa)) + &orders[2].scale_real(kappa * kappa);
        let defect = &commutator(&model::build_h0(&spec).unwrap(), &candidate)
            + &commutator(&model::build_interaction(&spec).unwrap(), &sol.gamma[0]);
        // orders κ^0..κ^2 cancel, leaving κ^3 [H_{0,1}, γ_1^{(2)}]
        let expected = commutator(&h01, &orders[2]).scale_real(kappa.powi(3));
        assert!((&defect - &expected).max_abs_coefficient() < 1e-15);
    }

    #[test]
    fn lambda_gauge_rejected_for_other_interactions() {
        let spec = ModelSpec::chain(5, 0.3).with_interaction(InteractionSpec::BTriple, 0.0);
        assert!(matches!(
            series_solve(&spec, 1, Gauge::PaperLambda(0.0)),
            Err(MajoranaError::InvalidSpec(_))
        ));
    }

    #[test]
    fn zeroth_order_scaling_is_linear() {
        let spec = c1234(4, 0.5);
        let sol = series_solve(&spec, 0, Gauge::MinNorm).unwrap();
        let v = model::build_interaction(&spec).unwrap();
        let base = commutator(&v, &sol.gamma[0]).coefficient_norm();
        let rep = series_residual_scaling(&spec, &sol, &[0.01, 0.1]).unwrap();
        for (g, r) in &rep.points {
            assert!((r - g * base).abs() < 1e-14);
        }
        assert!((rep.slope.unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn solvable_family_has_vanishing_residual() {
        let spec = ModelSpec::chain(5, 0.4).with_interaction(InteractionSpec::BTriple, 0.0);
        let sol = series_solve(&spec, 0, Gauge::MinNorm).unwrap();
        let rep = series_residual_scaling(&spec, &sol, &[0.05, 0.1, 0.2]).unwrap();
        assert!(rep.points.iter().all(|p| p.1 < 1e-12));
        assert!(rep.slope.is_none());
    }

    #[test]
    fn profile_of_single_site() {
        let spec = ModelSpec::chain(4, 0.5);
        let p = localization_profile(&MajoranaOperator::generator(1), &spec).unwrap();
        assert!(p.residuals.iter().all(|(_, r)| *r == 0.0));
        assert!(p.rate.is_none());
    }

    #[test]
    fn profile_of_exact_mode() {
        let spec = ModelSpec::chain(6, 0.5);
        let p = localization_profile(&model::build_gamma0_normalized(&spec).unwrap(), &spec).unwrap();
        assert!((p.rate.unwrap() - 0.5f64.ln()).abs() < 1e-12);
        assert!(p.is_strictly_decreasing());
        let ops = p.operator_residuals.unwrap();
        for ((_, a), (_, b)) in p.residuals.iter().zip(&ops) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn kernel_rediscovers_exact_mode() {
        let spec = c1234(3, 0.5);
        let rep = kernel_solve(&spec, DEFAULT_KERNEL_TOL).unwrap();
        assert_eq!(rep.basis_size(), 16);
        assert!(rep.matrix_defect < 1e-12);
        assert!(rep.trivial_in_kernel);
        assert_eq!(rep.kernel_dim % 2, 0);
        let expected = model::build_gamma0_normalized(&spec).unwrap();
        assert!((&rep.gamma - &expected).max_abs_coefficient() < 1e-10, "{}", rep.gamma);
    }

    #[test]
    fn coefficient_rows() {
        let rows = coefficient_table(&kappa_series_gamma1_k0());
        assert_eq!(rows, vec![CoefficientRow { sites: "2 3 5".into(), re: 0.0, im: -1.0 }]);
    }
}
