//! Dense Fock-space representation of Majorana operators.
//!
//! Generators are paired into complex modes, `c_{2m-1} = a_m + a_m†` and
//! `c_{2m} = -i (a_m - a_m†)`, with the Jordan–Wigner string over modes
//! `1..m`. Basis state `s` has mode `m` occupied when bit `m-1` of `s` is set.

use crate::algebra::{Complex, MajoranaOperator, SiteSet};
use crate::error::{MajoranaError, Result};
use crate::linalg::{spectral_norm, CMatrix};

/// Upper bound on compiled mode count (dimension 2^14).
pub const MAX_MODES: usize = 14;

/// Compiler for operators on `modes` complex fermions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockRepresentation {
    modes: usize,
}

impl FockRepresentation {
    pub fn new(modes: usize) -> Result<Self> {
        if modes == 0 || modes > MAX_MODES {
            return Err(MajoranaError::Domain {
                module: "fock_rep",
                reason: format!("mode count {modes} outside 1..={MAX_MODES}"),
            });
        }
        Ok(FockRepresentation { modes })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn dim(&self) -> usize {
        1 << self.modes
    }

    /// Action of the monomial on basis state `state`: `(target, phase)`.
    pub fn apply_monomial(&self, sites: SiteSet, state: usize) -> (usize, Complex) {
        let mut s = state;
        let mut phase = Complex::new(1.0, 0.0);
        let ordered: Vec<usize> = sites.iter().collect();
        // rightmost generator acts first
        for &k in ordered.iter().rev() {
            let bit = (k - 1) / 2;
            if (s & ((1usize << bit) - 1)).count_ones() % 2 == 1 {
                phase = -phase;
            }
            let occupied = s & (1 << bit) != 0;
            if k % 2 == 0 {
                // Y: |0> -> i|1>, |1> -> -i|0>
                phase *= if occupied {
                    Complex::new(0.0, -1.0)
                } else {
                    Complex::new(0.0, 1.0)
                };
            }
            s ^= 1 << bit;
        }
        (s, phase)
    }

    /// Matrix of `op`; errors if `op` touches a generator beyond `2M`.
    pub fn compile(&self, op: &MajoranaOperator) -> Result<CMatrix> {
        if op.max_site() > 2 * self.modes {
            return Err(MajoranaError::Dimension {
                max_site: op.max_site(),
                modes: self.modes,
            });
        }
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (sites, coeff) in op.terms() {
            for s in 0..dim {
                let (t, phase) = self.apply_monomial(sites, s);
                m[(t, s)] += coeff * phase;
            }
        }
        Ok(m)
    }

    /// Matrix of the single generator `c_site`.
    pub fn generator(&self, site: usize) -> Result<CMatrix> {
        self.compile(&MajoranaOperator::generator(site))
    }

    /// Diagonal `(-1)^{occupation}` fermion-parity operator.
    pub fn parity_operator(&self) -> CMatrix {
        let dim = self.dim();
        CMatrix::from_fn(dim, dim, |r, c| {
            if r != c {
                Complex::new(0.0, 0.0)
            } else if r.count_ones() % 2 == 0 {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(-1.0, 0.0)
            }
        })
    }

    /// Spectral norm of the compiled operator.
    pub fn operator_norm(&self, op: &MajoranaOperator) -> Result<f64> {
        Ok(spectral_norm(&self.compile(op)?))
    }
}

/// Compiles `op` on `modes` complex fermions.
pub fn compile(op: &MajoranaOperator, modes: usize) -> Result<CMatrix> {
    FockRepresentation::new(modes)?.compile(op)
}

pub fn operator_norm(op: &MajoranaOperator, modes: usize) -> Result<f64> {
    FockRepresentation::new(modes)?.operator_norm(op)
}

pub fn parity_operator(modes: usize) -> Result<CMatrix> {
    Ok(FockRepresentation::new(modes)?.parity_operator())
}

/// `Tr(A) / 2^M`.
pub fn normalized_trace(m: &CMatrix) -> Complex {
    m.trace() / Complex::new(m.nrows() as f64, 0.0)
}
