//! Hamiltonians and named operator families of the interacting Majorana chain
//! and its ladders, built symbolically from a [`ModelSpec`].
//!
//! Ladder sites are indexed leg-major: site `m` of leg `j` is the global
//! generator `(j - 1) * 2N + m`.

use crate::algebra::{Complex, MajoranaOperator, SiteSet};
use crate::error::{MajoranaError, Result};

/// Quartic interaction term `strength * c_i c_j c_k c_l` with `i < j < k < l`
/// in global site indices.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticTerm {
    pub sites: [usize; 4],
    pub strength: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InteractionSpec {
    /// No interaction; `g` is ignored.
    None,
    /// Explicit list of quartic terms.
    Explicit(Vec<QuarticTerm>),
    /// `coupling * Σ_ℓ c_{2ℓ} c_{2ℓ+2} c_{2ℓ+4} c_{2ℓ+6}` on every leg.
    EvenSitesOnly { coupling: f64 },
    /// `Σ_ℓ b_ℓ c_{2ℓ} c_{2ℓ+2} c_{2ℓ+4}` on every leg.
    BTriple,
    /// `Σ_ℓ [b_ℓ b_{ℓ+1} c_{2ℓ} c_{2ℓ+2} + h.c.]` on every leg.
    BPairHc,
    /// `Σ_(j,j') i γ̂_{0,j} γ̂_{0,j'}` over leg pairs; `None` pairs consecutive
    /// legs (1,2), (3,4), ...
    InterchainEdge { pairs: Option<Vec<(usize, usize)>> },
    /// The single term `c_1 c_2 c_3 c_4` on every leg.
    C1C2C3C4,
}

impl InteractionSpec {
    pub fn name(&self) -> &'static str {
        match self {
            InteractionSpec::None => "none",
            InteractionSpec::Explicit(_) => "explicit",
            InteractionSpec::EvenSitesOnly { .. } => "even_sites_only",
            InteractionSpec::BTriple => "b_triple",
            InteractionSpec::BPairHc => "b_pair_hc",
            InteractionSpec::InterchainEdge { .. } => "interchain_edge",
            InteractionSpec::C1C2C3C4 => "c1c2c3c4",
        }
    }
}

/// Geometry, couplings and interaction of a chain (`legs == 1`) or ladder.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    /// Fermion sites per leg; each leg carries `2N` Majoranas.
    pub n: usize,
    pub legs: usize,
    pub kappa: f64,
    /// Optional per-leg κ overriding `kappa`.
    pub leg_kappas: Option<Vec<f64>>,
    pub g: f64,
    pub interaction: InteractionSpec,
}

impl ModelSpec {
    pub fn chain(n: usize, kappa: f64) -> Self {
        ModelSpec {
            n,
            legs: 1,
            kappa,
            leg_kappas: None,
            g: 0.0,
            interaction: InteractionSpec::None,
        }
    }

    pub fn ladder(n: usize, legs: usize, kappa: f64) -> Self {
        ModelSpec {
            legs,
            ..Self::chain(n, kappa)
        }
    }

    pub fn with_interaction(mut self, interaction: InteractionSpec, g: f64) -> Self {
        self.interaction = interaction;
        self.g = g;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    /// Complex fermion modes of the full system, `L * N`.
    pub fn mode_count(&self) -> usize {
        self.legs * self.n
    }

    /// Majorana generators of the full system, `2 L N`.
    pub fn site_count(&self) -> usize {
        2 * self.mode_count()
    }

    /// Global index of site `m` (1-based) on leg `leg` (1-based).
    pub fn site(&self, m: usize, leg: usize) -> usize {
        (leg - 1) * 2 * self.n + m
    }

    pub fn leg_offset(&self, leg: usize) -> usize {
        (leg - 1) * 2 * self.n
    }

    pub fn kappa_of(&self, leg: usize) -> f64 {
        self.leg_kappas
            .as_ref()
            .and_then(|k| k.get(leg - 1).copied())
            .unwrap_or(self.kappa)
    }

    /// Global index of the right-edge generator `c_{2N}` of `leg`.
    pub fn right_edge_site(&self, leg: usize) -> usize {
        self.site(2 * self.n, leg)
    }

    pub fn is_right_edge(&self, site: usize) -> bool {
        site.is_multiple_of(2 * self.n)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(MajoranaError::InvalidSpec(msg));
        if self.n < 2 {
            return bad(format!("N = {} but at least 2 sites per leg are required", self.n));
        }
        if self.legs < 1 {
            return bad("legs must be at least 1".into());
        }
        if self.site_count() > crate::algebra::MAX_SITES {
            return bad(format!(
                "2·L·N = {} exceeds the {} representable sites",
                self.site_count(),
                crate::algebra::MAX_SITES
            ));
        }
        if !self.g.is_finite() {
            return bad("g must be finite".into());
        }
        if let Some(ks) = &self.leg_kappas {
            if ks.len() != self.legs {
                return bad(format!("{} per-leg κ values for {} legs", ks.len(), self.legs));
            }
        }
        for leg in 1..=self.legs {
            let k = self.kappa_of(leg);
            if !(k.is_finite() && k.abs() < 1.0) {
                return bad(format!("|κ| < 1 violated on leg {leg}: κ = {k}"));
            }
        }
        match &self.interaction {
            InteractionSpec::Explicit(terms) => {
                for t in terms {
                    let s = t.sites;
                    if !(s[0] < s[1] && s[1] < s[2] && s[2] < s[3]) {
                        return bad(format!("quartic term {s:?} must satisfy i<j<k<l"));
                    }
                    if s[0] < 1 || s[3] > self.site_count() {
                        return bad(format!(
                            "quartic term {s:?} outside sites 1..={}",
                            self.site_count()
                        ));
                    }
                    if let Some(&edge) = s.iter().find(|&&x| self.is_right_edge(x)) {
                        return bad(format!(
                            "interaction must not contain right-edge site {edge} (c_2N of its leg)"
                        ));
                    }
                    if !t.strength.is_finite() {
                        return bad(format!("quartic term {s:?} has non-finite strength"));
                    }
                }
            }
            InteractionSpec::EvenSitesOnly { coupling } if !coupling.is_finite() => {
                return bad("even_sites_only coupling must be finite".into());
            }
            InteractionSpec::C1C2C3C4 if self.n < 3 => {
                return bad("c1c2c3c4 needs N >= 3 so that c_4 is not the right edge".into());
            }
            InteractionSpec::InterchainEdge { pairs } => {
                if self.legs < 2 {
                    return bad("interchain_edge requires at least 2 legs".into());
                }
                if let Some(pairs) = pairs {
                    for &(a, b) in pairs {
                        if a == b || a < 1 || b < 1 || a > self.legs || b > self.legs {
                            return bad(format!("invalid leg pair ({a}, {b})"));
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

const I: Complex = Complex { re: 0.0, im: 1.0 };

fn pair(a: usize, b: usize, coeff: Complex) -> MajoranaOperator {
    MajoranaOperator::product_of(&[a, b], coeff)
}

/// `iκ Σ_{ℓ=1}^{N-1} c_{2ℓ-1} c_{2ℓ} + i Σ_{ℓ=1}^{N-1} c_{2ℓ} c_{2ℓ+1}` shifted by `offset`.
pub fn chain_h0(n: usize, kappa: f64, offset: usize) -> MajoranaOperator {
    let (h01, h00) = chain_h0_split(n, offset);
    &h01.scale_real(kappa) + &h00
}

/// κ-graded pieces `(H_{0,1}, H_{0,0})` with `H_0 = κ H_{0,1} + H_{0,0}`.
pub fn chain_h0_split(n: usize, offset: usize) -> (MajoranaOperator, MajoranaOperator) {
    let mut h01 = MajoranaOperator::zero();
    let mut h00 = MajoranaOperator::zero();
    for l in 1..n {
        h01 += &pair(offset + 2 * l - 1, offset + 2 * l, I);
        h00 += &pair(offset + 2 * l, offset + 2 * l + 1, I);
    }
    (h01, h00)
}

/// `γ_0 = Σ_{ℓ=1}^{N} κ^{ℓ-1} c_{2ℓ-1}`.
pub fn chain_gamma0(n: usize, kappa: f64, offset: usize) -> MajoranaOperator {
    let mut op = MajoranaOperator::zero();
    let mut w = 1.0;
    for l in 1..=n {
        op.add_term(SiteSet::single(offset + 2 * l - 1), re(w));
        w *= kappa;
    }
    op
}

/// `sqrt((1 - κ²) / (1 - κ^{2N}))`, the factor making `γ̂_0² = 1`.
pub fn gamma0_normalization(n: usize, kappa: f64) -> f64 {
    // Σ_{ℓ<N} κ^{2ℓ} evaluated directly; equals (1-κ^{2N})/(1-κ²) for κ ≠ 0
    let sum: f64 = (0..n).map(|l| kappa.powi(2 * l as i32)).sum();
    1.0 / sum.sqrt()
}

pub fn chain_gamma0_normalized(n: usize, kappa: f64, offset: usize) -> MajoranaOperator {
    chain_gamma0(n, kappa, offset).scale_real(gamma0_normalization(n, kappa))
}

/// `b_ℓ = κ c_{2ℓ-1} - c_{2ℓ+1}`.
pub fn chain_b(ell: usize, kappa: f64, offset: usize) -> MajoranaOperator {
    let mut op = MajoranaOperator::zero();
    op.add_term(SiteSet::single(offset + 2 * ell - 1), re(kappa));
    op.add_term(SiteSet::single(offset + 2 * ell + 1), re(-1.0));
    op
}

/// Chain Hamiltonian `H_0`; requires a single leg.
pub fn build_h0(spec: &ModelSpec) -> Result<MajoranaOperator> {
    spec.validate()?;
    if spec.legs != 1 {
        return Err(MajoranaError::InvalidSpec(format!(
            "build_h0 expects a single chain, got {} legs",
            spec.legs
        )));
    }
    Ok(chain_h0(spec.n, spec.kappa_of(1), 0))
}

/// Sum of independent copies of `H_0`, one per leg.
pub fn build_ladder_h0(spec: &ModelSpec) -> Result<MajoranaOperator> {
    spec.validate()?;
    let mut h = MajoranaOperator::zero();
    for leg in 1..=spec.legs {
        h += &chain_h0(spec.n, spec.kappa_of(leg), spec.leg_offset(leg));
    }
    Ok(h)
}

/// Left edge mode `γ_0` of leg 1.
pub fn build_gamma0(spec: &ModelSpec) -> Result<MajoranaOperator> {
    build_gamma0_leg(spec, 1)
}

pub fn build_gamma0_leg(spec: &ModelSpec, leg: usize) -> Result<MajoranaOperator> {
    spec.validate()?;
    check_leg(spec, leg)?;
    Ok(chain_gamma0(spec.n, spec.kappa_of(leg), spec.leg_offset(leg)))
}

pub fn build_gamma0_normalized(spec: &ModelSpec) -> Result<MajoranaOperator> {
    build_gamma0_normalized_leg(spec, 1)
}

pub fn build_gamma0_normalized_leg(spec: &ModelSpec, leg: usize) -> Result<MajoranaOperator> {
    spec.validate()?;
    check_leg(spec, leg)?;
    let k = spec.kappa_of(leg);
    Ok(chain_gamma0_normalized(spec.n, k, spec.leg_offset(leg)))
}

/// `b_ℓ` on leg 1, defined for `1 <= ℓ <= N - 1`.
pub fn build_b(ell: usize, spec: &ModelSpec) -> Result<MajoranaOperator> {
    spec.validate()?;
    if ell < 1 || ell >= spec.n {
        return Err(MajoranaError::InvalidSpec(format!(
            "b_ℓ needs 1 <= ℓ <= N-1, got ℓ = {ell}"
        )));
    }
    Ok(chain_b(ell, spec.kappa_of(1), 0))
}

fn check_leg(spec: &ModelSpec, leg: usize) -> Result<()> {
    if leg < 1 || leg > spec.legs {
        return Err(MajoranaError::InvalidSpec(format!(
            "leg {leg} outside 1..={}",
            spec.legs
        )));
    }
    Ok(())
}

fn per_leg<F>(spec: &ModelSpec, mut f: F) -> MajoranaOperator
where
    F: FnMut(usize, f64, usize) -> MajoranaOperator,
{
    let mut out = MajoranaOperator::zero();
    for leg in 1..=spec.legs {
        out += &f(spec.n, spec.kappa_of(leg), spec.leg_offset(leg));
    }
    out
}

/// `Σ_ℓ b_ℓ c_{2ℓ} c_{2ℓ+2} c_{2ℓ+4}` for `ℓ = 1..=N-3` (keeps clear of `c_{2N}`).
pub fn chain_b_triple(n: usize, kappa: f64, offset: usize) -> MajoranaOperator {
    let mut v = MajoranaOperator::zero();
    for l in 1..n.saturating_sub(2) {
        let evens = MajoranaOperator::product_of(
            &[offset + 2 * l, offset + 2 * l + 2, offset + 2 * l + 4],
            re(1.0),
        );
        v += &(&chain_b(l, kappa, offset) * &evens);
    }
    v
}

/// `Σ_ℓ [b_ℓ b_{ℓ+1} c_{2ℓ} c_{2ℓ+2} + h.c.]` for `ℓ = 1..=N-2`.
pub fn chain_b_pair_hc(n: usize, kappa: f64, offset: usize) -> MajoranaOperator {
    let mut v = MajoranaOperator::zero();
    for l in 1..n.saturating_sub(1) {
        let x = &(&chain_b(l, kappa, offset) * &chain_b(l + 1, kappa, offset))
            * &MajoranaOperator::product_of(&[offset + 2 * l, offset + 2 * l + 2], re(1.0));
        v += &x;
        v += &x.dagger();
    }
    v
}

/// `coupling * Σ_ℓ c_{2ℓ} c_{2ℓ+2} c_{2ℓ+4} c_{2ℓ+6}` with every site `<= 2N - 2`.
pub fn chain_even_sites_only(n: usize, coupling: f64, offset: usize) -> MajoranaOperator {
    let mut v = MajoranaOperator::zero();
    let mut l = 1;
    while 2 * l + 6 < 2 * n {
        v += &MajoranaOperator::product_of(
            &[
                offset + 2 * l,
                offset + 2 * l + 2,
                offset + 2 * l + 4,
                offset + 2 * l + 6,
            ],
            re(coupling),
        );
        l += 1;
    }
    v
}

/// Leg pairs coupled by the interchain family.
pub fn interchain_pairs(spec: &ModelSpec) -> Vec<(usize, usize)> {
    match &spec.interaction {
        InteractionSpec::InterchainEdge { pairs: Some(p) } => p.clone(),
        _ => (1..spec.legs).step_by(2).map(|j| (j, j + 1)).collect(),
    }
}

/// Interaction `V` (without the coupling `g`).
pub fn build_interaction(spec: &ModelSpec) -> Result<MajoranaOperator> {
    spec.validate()?;
    let v = match &spec.interaction {
        InteractionSpec::None => MajoranaOperator::zero(),
        InteractionSpec::Explicit(terms) => {
            let mut v = MajoranaOperator::zero();
            for t in terms {
                v += &MajoranaOperator::product_of(&t.sites, re(t.strength));
            }
            v
        }
        InteractionSpec::EvenSitesOnly { coupling } => {
            per_leg(spec, |n, _, off| chain_even_sites_only(n, *coupling, off))
        }
        InteractionSpec::BTriple => per_leg(spec, chain_b_triple),
        InteractionSpec::BPairHc => per_leg(spec, chain_b_pair_hc),
        InteractionSpec::C1C2C3C4 => per_leg(spec, |_, _, off| {
            MajoranaOperator::product_of(&[off + 1, off + 2, off + 3, off + 4], re(1.0))
        }),
        InteractionSpec::InterchainEdge { .. } => {
            let mut v = MajoranaOperator::zero();
            for (a, b) in interchain_pairs(spec) {
                let ga = build_gamma0_normalized_leg(spec, a)?;
                let gb = build_gamma0_normalized_leg(spec, b)?;
                v += &(&ga * &gb).scale(I);
            }
            v
        }
    };
    for (s, _) in v.terms() {
        if let Some(edge) = s.iter().find(|&x| spec.is_right_edge(x)) {
            return Err(MajoranaError::InvalidSpec(format!(
                "interaction touches right-edge site {edge}"
            )));
        }
    }
    Ok(v)
}

/// `H_g = Σ_legs H_0 + g V`.
pub fn build_hamiltonian(spec: &ModelSpec) -> Result<MajoranaOperator> {
    let h0 = build_ladder_h0(spec)?;
    let v = build_interaction(spec)?;
    Ok(&h0 + &v.scale_real(spec.g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{anticommutator, commutator, Parity};

    fn parse(s: &str) -> MajoranaOperator {
        s.parse().unwrap()
    }

    #[test]
    fn h0_small_instance() {
        let h = build_h0(&ModelSpec::chain(2, 0.5)).unwrap();
        assert_eq!(h, parse("(0.0+0.5i) * c[1]c[2] + (0.0+1.0i) * c[2]c[3]"));
        let h = build_h0(&ModelSpec::chain(2, 0.0)).unwrap();
        assert_eq!(h, parse("(0.0+1.0i) * c[2]c[3]"));
    }

    #[test]
    fn h0_commutes_with_edge_modes() {
        let spec = ModelSpec::chain(5, 0.3);
        let h = build_h0(&spec).unwrap();
        let g0 = build_gamma0(&spec).unwrap();
        assert!(commutator(&h, &g0).max_abs_coefficient() < 1e-12);
        assert!(commutator(&h, &MajoranaOperator::generator(10)).is_zero());
        assert!(h.is_hermitian(0.0));
        assert_eq!(h.parity(), Parity::Even);
    }

    #[test]
    fn gamma0_values() {
        let g = build_gamma0(&ModelSpec::chain(3, 0.5)).unwrap();
        assert_eq!(g, parse("(1.0+0.0i) * c[1] + (0.5+0.0i) * c[3] + (0.25+0.0i) * c[5]"));
        assert_eq!(chain_gamma0(1, 0.5, 0), MajoranaOperator::generator(1));
        let gh = build_gamma0_normalized(&ModelSpec::chain(4, 0.7)).unwrap();
        let sq = &gh * &gh;
        assert!((&sq - &MajoranaOperator::identity()).max_abs_coefficient() < 1e-12);
    }

    #[test]
    fn normalization_matches_closed_form() {
        for &k in &[0.1, 0.5, -0.7, 0.95] {
            let closed = ((1.0 - k * k) / (1.0 - f64::powi(k, 8))).sqrt();
            assert!((gamma0_normalization(4, k) - closed).abs() < 1e-14);
        }
        assert_eq!(gamma0_normalization(4, 0.0), 1.0);
    }

    #[test]
    fn b_operator() {
        let spec = ModelSpec::chain(4, 0.5);
        assert_eq!(build_b(1, &spec).unwrap(), parse("(0.5+0.0i) * c[1] + (-1.0+0.0i) * c[3]"));
        let spec0 = ModelSpec::chain(4, 0.0);
        assert_eq!(build_b(2, &spec0).unwrap(), parse("(-1.0+0.0i) * c[5]"));
        assert!(build_b(4, &spec).is_err());
        let g0 = build_gamma0(&spec).unwrap();
        for l in 1..4 {
            let b = build_b(l, &spec).unwrap();
            assert!(anticommutator(&b, &g0).max_abs_coefficient() < 1e-12);
            let local = &MajoranaOperator::generator(2 * l - 1)
                + &MajoranaOperator::generator(2 * l + 1).scale_real(0.5);
            assert!(anticommutator(&b, &local).max_abs_coefficient() < 1e-12);
        }
    }

    #[test]
    fn b_pair_expansion_matches_closed_form() {
        let k = 0.5;
        let spec = ModelSpec::chain(3, k).with_interaction(InteractionSpec::BPairHc, 1.0);
        let v = build_interaction(&spec).unwrap();
        let expected = &(&(&MajoranaOperator::product_of(&[1, 3], re(k * k))
            + &MajoranaOperator::product_of(&[1, 5], re(-k)))
            + &MajoranaOperator::product_of(&[3, 5], re(1.0)))
            * &MajoranaOperator::product_of(&[2, 4], re(2.0));
        assert!((&v - &expected).max_abs_coefficient() < 1e-15);
    }

    #[test]
    fn single_quartic_term() {
        let spec = ModelSpec::chain(4, 0.5).with_interaction(InteractionSpec::C1C2C3C4, 0.1);
        assert_eq!(
            build_interaction(&spec).unwrap(),
            parse("(1.0+0.0i) * c[1]c[2]c[3]c[4]")
        );
        let bad = ModelSpec::chain(2, 0.5).with_interaction(InteractionSpec::C1C2C3C4, 0.1);
        assert!(build_interaction(&bad).is_err());
    }

    #[test]
    fn ladder_indexing() {
        let spec = ModelSpec::ladder(2, 2, 0.5);
        let h = build_ladder_h0(&spec).unwrap();
        assert_eq!(
            h,
            parse(
                "(0.0+0.5i) * c[1]c[2] + (0.0+1.0i) * c[2]c[3] + (0.0+0.5i) * c[5]c[6] + (0.0+1.0i) * c[6]c[7]"
            )
        );
        assert_eq!(build_ladder_h0(&ModelSpec::chain(3, 0.4)).unwrap(), chain_h0(3, 0.4, 0));
        for leg in 1..=2 {
            let edge = MajoranaOperator::generator(spec.right_edge_site(leg));
            assert!(commutator(&h, &edge).is_zero());
        }
        assert!(build_h0(&spec).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(ModelSpec::chain(3, 1.0).validate().is_err());
        assert!(ModelSpec::chain(1, 0.5).validate().is_err());
        assert!(ModelSpec::chain(3, 0.5)
            .with_interaction(InteractionSpec::InterchainEdge { pairs: None }, 0.1)
            .validate()
            .is_err());
        let touching = ModelSpec::chain(3, 0.5).with_interaction(
            InteractionSpec::Explicit(vec![QuarticTerm { sites: [1, 2, 3, 6], strength: 1.0 }]),
            0.1,
        );
        let err = touching.validate().unwrap_err();
        assert!(err.to_string().contains("right-edge"));
        let unsorted = ModelSpec::chain(3, 0.5).with_interaction(
            InteractionSpec::Explicit(vec![QuarticTerm { sites: [2, 1, 3, 4], strength: 1.0 }]),
            0.1,
        );
        assert!(unsorted.validate().is_err());
    }

    #[test]
    fn interchain_pairing_defaults() {
        let spec = ModelSpec::ladder(3, 3, 0.5)
            .with_interaction(InteractionSpec::InterchainEdge { pairs: None }, 0.2);
        assert_eq!(interchain_pairs(&spec), vec![(1, 2)]);
        let spec4 = ModelSpec::ladder(3, 4, 0.5)
            .with_interaction(InteractionSpec::InterchainEdge { pairs: None }, 0.2);
        assert_eq!(interchain_pairs(&spec4), vec![(1, 2), (3, 4)]);
        let v = build_interaction(&spec).unwrap();
        assert!(v.is_hermitian(1e-15));
        assert_eq!(v.parity(), Parity::Even);
    }

    #[test]
    fn solvable_families_commute_with_gamma0() {
        for n in 3..=8 {
            for &k in &[0.2, -0.6, 0.9] {
                let base = ModelSpec::chain(n, k);
                let g0 = build_gamma0(&base).unwrap();
                for inter in [
                    InteractionSpec::EvenSitesOnly { coupling: 0.7 },
                    InteractionSpec::BTriple,
                    InteractionSpec::BPairHc,
                ] {
                    let v = build_interaction(&base.clone().with_interaction(inter, 1.0)).unwrap();
                    assert!(v.is_hermitian(1e-15));
                    assert_eq!(v.parity(), Parity::Even);
                    assert!(commutator(&v, &g0).max_abs_coefficient() < 1e-12);
                }
            }
        }
    }
}
