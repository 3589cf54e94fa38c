//! Saturation spaces of phase polynomials on S².
//!
//! Starting from the span H₁ of the interaction potentials, each step
//! adjoins the squared-gradient forms g(∇φᵢ, ∇φⱼ) of all basis pairs and
//! re-echelonizes, producing the non-decreasing chain H₁ ⊂ H₂ ⊂ … . Cross
//! pairs are legitimate generators by polarization,
//! g(∇φᵢ,∇φⱼ) = ¼ [g(∇(φᵢ+φⱼ))² − g(∇(φᵢ−φⱼ))²], so every computed space is
//! contained in the abstract saturation space of the same level.
//!
//! The chain is degree-filtered: generators above the configured degree cap
//! are dropped, which makes each level a finite, exactly-computed
//! under-approximation. Membership queries return exact certificates, and
//! every echelon basis vector carries provenance (which carried vector or
//! which generator pair produced it), which is what makes the synthesis-plan
//! compiler deterministic.

mod plan;

pub use plan::{synthesis_plan, PlanNode, SynthesisPlan};

use crate::poly::{grad_inner, int, Monomial, Rational, SpherePolynomial};
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

#[derive(Debug, thiserror::Error)]
pub enum SaturationError {
    #[error("initial space needs at least one nonzero generator")]
    AllZeroGenerators,
    #[error("saturation chain must have at least one level (requested {0})")]
    EmptyChain(u32),
    #[error("degree cap {cap} is below the degree {max_degree} already present in the space")]
    CapBelowBasis { cap: u32, max_degree: u32 },
    #[error("polynomial is not a member of the space; residual after elimination: {residual}")]
    NotInSpace { residual: SpherePolynomial },
    #[error("P_n ⊂ H_n verification is defined for n ≥ 2 (requested {0})")]
    VerifyBelowTwo(u32),
    #[error("pulse leaves require exactly three seed potentials, found {0}")]
    SeedCount(usize),
}

/// How an echelon basis vector of a saturation space was generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Generator {
    /// Seed potential W_i (level-1 spaces only).
    Seed(usize),
    /// Basis vector of the previous level, carried over.
    Carried(usize),
    /// grad_inner of previous-level basis vectors i and j, with i ≤ j.
    Pair(usize, usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Seed(i) => write!(f, "seed[{i}]"),
            Generator::Carried(i) => write!(f, "carried[{i}]"),
            Generator::Pair(i, j) => write!(f, "grad({i},{j})"),
        }
    }
}

/// Exact linear combination of generators.
pub type Provenance = Vec<(Generator, Rational)>;

/// A finite-dimensional space of phase polynomials in reduced echelon form.
///
/// Pivot monomials are strictly increasing in the graded-lex order; every
/// pivot appears in exactly one basis vector, with coefficient one.
#[derive(Debug, Clone)]
pub struct PhaseSubspace {
    basis: Vec<SpherePolynomial>,
    pivots: Vec<Monomial>,
    provenance: Vec<Provenance>,
    level: u32,
    degree_cap: u32,
    dropped_generators: usize,
}

impl PhaseSubspace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn basis(&self) -> &[SpherePolynomial] {
        &self.basis
    }

    pub fn pivots(&self) -> &[Monomial] {
        &self.pivots
    }

    pub fn provenance(&self) -> &[Provenance] {
        &self.provenance
    }

    /// Number of candidate generators dropped by the degree filter in the
    /// step that produced this space.
    pub fn dropped_generators(&self) -> usize {
        self.dropped_generators
    }

    fn max_degree(&self) -> u32 {
        self.basis
            .iter()
            .map(SpherePolynomial::degree)
            .max()
            .unwrap_or(0)
    }
}

/// Constructive witness that a polynomial lies in a space: recombining the
/// indexed basis vectors with these coefficients reproduces it exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub coefficients: Vec<(usize, Rational)>,
}

impl MembershipCertificate {
    pub fn recombine(&self, space: &PhaseSubspace) -> SpherePolynomial {
        let mut acc = SpherePolynomial::zero();
        for (index, coeff) in &self.coefficients {
            acc = &acc + &space.basis[*index].scale(coeff);
        }
        acc
    }
}

/// Outcome of a membership query.
#[derive(Debug, Clone)]
pub enum Membership {
    Member(MembershipCertificate),
    NotMember { residual: SpherePolynomial },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }

    pub fn certificate(self) -> Option<MembershipCertificate> {
        match self {
            Membership::Member(cert) => Some(cert),
            Membership::NotMember { .. } => None,
        }
    }
}

// Reduced echelonization with provenance tracking. Rows are normalized to a
// unit pivot coefficient and every pivot is eliminated from all other rows.
fn echelonize(rows: Vec<(SpherePolynomial, Provenance)>) -> PhaseSubspaceParts {
    let mut kept: Vec<(Monomial, SpherePolynomial, Provenance)> = Vec::new();

    for (mut poly, mut prov) in rows {
        // Eliminate existing pivots from the incoming row.
        for (pivot, basis_poly, basis_prov) in &kept {
            let coeff = poly.coeff(pivot);
            if !coeff.is_zero() {
                poly = &poly - &basis_poly.scale(&coeff);
                prov = prov_sub_scaled(&prov, basis_prov, &coeff);
            }
        }
        let Some(pivot) = poly.leading_monomial() else {
            continue; // linearly dependent
        };
        // Normalize to a unit pivot.
        let lead = poly.coeff(&pivot);
        let inv = int(1) / lead;
        poly = poly.scale(&inv);
        prov = prov_scale(&prov, &inv);
        // Back-substitute into the rows already kept.
        for (_, basis_poly, basis_prov) in kept.iter_mut() {
            let coeff = basis_poly.coeff(&pivot);
            if !coeff.is_zero() {
                *basis_poly = &*basis_poly - &poly.scale(&coeff);
                *basis_prov = prov_sub_scaled(basis_prov, &prov, &coeff);
            }
        }
        kept.push((pivot, poly, prov));
    }

    kept.sort_by_key(|a| a.0);
    let mut parts = PhaseSubspaceParts::default();
    for (pivot, poly, prov) in kept {
        parts.pivots.push(pivot);
        parts.basis.push(poly);
        parts.provenance.push(prov);
    }
    parts
}

#[derive(Default)]
struct PhaseSubspaceParts {
    basis: Vec<SpherePolynomial>,
    pivots: Vec<Monomial>,
    provenance: Vec<Provenance>,
}

fn prov_scale(prov: &Provenance, factor: &Rational) -> Provenance {
    prov.iter()
        .map(|(g, c)| (*g, c.clone() * factor.clone()))
        .collect()
}

fn prov_sub_scaled(prov: &Provenance, other: &Provenance, factor: &Rational) -> Provenance {
    let mut acc: BTreeMap<Generator, Rational> = prov.iter().cloned().collect();
    for (g, c) in other {
        let entry = acc.entry(*g).or_insert_with(Rational::zero);
        *entry -= c.clone() * factor.clone();
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// Echelonized span of the seed potentials; level 1.
pub fn initial_space(seeds: &[SpherePolynomial]) -> Result<PhaseSubspace, SaturationError> {
    let rows: Vec<(SpherePolynomial, Provenance)> = seeds
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(i, w)| (w.clone(), vec![(Generator::Seed(i), int(1))]))
        .collect();
    if rows.is_empty() {
        return Err(SaturationError::AllZeroGenerators);
    }
    let cap = rows.iter().map(|(p, _)| p.degree()).max().unwrap_or(0);
    let parts = echelonize(rows);
    Ok(PhaseSubspace {
        basis: parts.basis,
        pivots: parts.pivots,
        provenance: parts.provenance,
        level: 1,
        degree_cap: cap,
        dropped_generators: 0,
    })
}

/// One saturation step: adjoin g(∇bᵢ, ∇bⱼ) for all basis pairs i ≤ j,
/// keep generators of degree ≤ `degree_cap`, and re-echelonize.
pub fn saturate_step(
    space: &PhaseSubspace,
    degree_cap: u32,
) -> Result<PhaseSubspace, SaturationError> {
    let max_degree = space.max_degree();
    if degree_cap < max_degree {
        return Err(SaturationError::CapBelowBasis {
            cap: degree_cap,
            max_degree,
        });
    }

    let mut rows: Vec<(SpherePolynomial, Provenance)> = Vec::new();
    for (k, b) in space.basis.iter().enumerate() {
        rows.push((b.clone(), vec![(Generator::Carried(k), int(1))]));
    }
    let mut dropped = 0usize;
    for i in 0..space.basis.len() {
        for j in i..space.basis.len() {
            let g = grad_inner(&space.basis[i], &space.basis[j]);
            if g.is_zero() {
                continue;
            }
            if g.degree() > degree_cap {
                dropped += 1;
                continue;
            }
            rows.push((g, vec![(Generator::Pair(i, j), int(1))]));
        }
    }

    let parts = echelonize(rows);
    Ok(PhaseSubspace {
        basis: parts.basis,
        pivots: parts.pivots,
        provenance: parts.provenance,
        level: space.level + 1,
        degree_cap,
        dropped_generators: dropped,
    })
}

/// The chain H₁ … H_n with a common degree cap applied at every step.
pub fn saturate(
    seeds: &[SpherePolynomial],
    levels: u32,
    degree_cap: u32,
) -> Result<Vec<PhaseSubspace>, SaturationError> {
    if levels < 1 {
        return Err(SaturationError::EmptyChain(levels));
    }
    let mut chain = vec![initial_space(seeds)?];
    for _ in 1..levels {
        let next = saturate_step(chain.last().unwrap(), degree_cap)?;
        chain.push(next);
    }
    Ok(chain)
}

/// Membership with an exact certificate (or the nonzero residual left after
/// eliminating every pivot, for diagnostics).
pub fn membership(p: &SpherePolynomial, space: &PhaseSubspace) -> Membership {
    let mut residual = p.clone();
    let mut coefficients = Vec::new();
    for (k, (pivot, basis)) in space.pivots.iter().zip(&space.basis).enumerate() {
        let c = residual.coeff(pivot);
        if !c.is_zero() {
            residual = &residual - &basis.scale(&c);
            coefficients.push((k, c));
        }
    }
    if residual.is_zero() {
        Membership::Member(MembershipCertificate { coefficients })
    } else {
        Membership::NotMember { residual }
    }
}

/// Outcome of certifying every canonical monomial of degree ≤ n in H_n.
#[derive(Debug)]
pub struct PnReport {
    pub n: u32,
    pub chain_dimensions: Vec<usize>,
    pub certified: Vec<(Monomial, MembershipCertificate)>,
    pub failures: Vec<Monomial>,
    pub elapsed_ms: u128,
}

impl PnReport {
    pub fn all_certified(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Certifies the polynomial inclusion P_n ⊂ H_n at degree cap n: every
/// canonical monomial of degree ≤ n must produce an exact membership
/// certificate in the level-n space of the coordinate chain.
pub fn verify_pn_subset(n: u32) -> Result<PnReport, SaturationError> {
    if n < 2 {
        return Err(SaturationError::VerifyBelowTwo(n));
    }
    let start = Instant::now();
    let seeds = [
        SpherePolynomial::x(),
        SpherePolynomial::y(),
        SpherePolynomial::z(),
    ];
    let chain = saturate(&seeds, n, n)?;
    let top = chain.last().unwrap();

    let mut certified = Vec::new();
    let mut failures = Vec::new();
    for m in Monomial::all_of_degree_at_most(n) {
        let p = SpherePolynomial::monomial(m.a, m.b, m.c);
        match membership(&p, top) {
            Membership::Member(cert) => {
                debug_assert_eq!(cert.recombine(top), p);
                certified.push((m, cert));
            }
            Membership::NotMember { .. } => failures.push(m),
        }
    }
    Ok(PnReport {
        n,
        chain_dimensions: chain.iter().map(PhaseSubspace::dimension).collect(),
        certified,
        failures,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

// Expands a certificate over the provenance of `space`, splitting it into
// the carried/seed linear part and the accumulated pair coefficients.
fn expand_certificate(
    cert: &MembershipCertificate,
    space: &PhaseSubspace,
) -> (BTreeMap<Generator, Rational>, BTreeMap<(usize, usize), Rational>) {
    let mut linear: BTreeMap<Generator, Rational> = BTreeMap::new();
    let mut pairs: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for (index, mu) in &cert.coefficients {
        for (generator, lambda) in &space.provenance[*index] {
            let contribution = mu.clone() * lambda.clone();
            match generator {
                Generator::Pair(i, j) => {
                    let entry = pairs.entry((*i, *j)).or_insert_with(Rational::zero);
                    *entry += contribution;
                }
                carried_or_seed => {
                    let entry = linear
                        .entry(*carried_or_seed)
                        .or_insert_with(Rational::zero);
                    *entry += contribution;
                }
            }
        }
    }
    linear.retain(|_, c| !c.is_zero());
    pairs.retain(|_, c| !c.is_zero());
    (linear, pairs)
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_negative() {
        -1
    } else {
        1
    }
}
