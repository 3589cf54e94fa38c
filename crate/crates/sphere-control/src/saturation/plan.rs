//! Synthesis plans: compiled schedules that realize a phase factor e^{ip}.
//!
//! A plan for a target p in H_n is a sequence of nodes executed in order:
//!
//! * `Pulse(u)`: a strong-pulse segment (duration δ, controls u/δ), whose
//!   δ → 0 limit multiplies the state by e^{−i(u₁x + u₂y + u₃z)};
//! * `Phase(φ₀, child)`: realizes the already-realizable part e^{iφ₀}
//!   through the child plan;
//! * `Conjugate(φ, α, sign, child)`: a conjugated free-drift block
//!   e^{∓icφ} e^{∓iδH₀} e^{±icφ} with c = (α/δ)^{1/2}, whose limit
//!   multiplies by e^{i·sign·α·g(∇φ,∇φ)}. The child plan realizes the kick
//!   phase φ itself, used when kicks are synthesized rather than idealized.
//!
//! The compiler is deterministic: it expresses the target over the echelon
//! basis of the top space, then rewrites each pair generator recorded in the
//! basis provenance through polarization, recursing on the previous level
//! for φ₀ and for every kick phase.

use super::{
    expand_certificate, membership, sign_of, Generator, Membership, PhaseSubspace,
    SaturationError,
};
use crate::poly::{grad_inner, rat, Rational, SpherePolynomial};
use num_traits::{Signed, Zero};
use std::fmt;

/// One executable step of a synthesis plan.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanNode {
    /// Strong-pulse leaf; realizes e^{−i(u·W)} in the δ → 0 limit.
    Pulse { u: [Rational; 3] },
    /// Realizes e^{iφ} through the child plan.
    Phase {
        phi: SpherePolynomial,
        child: Box<SynthesisPlan>,
    },
    /// Conjugated drift block; realizes e^{i·sign·weight·g(∇φ,∇φ)}.
    /// `sign == -1` encodes a negative coefficient (realized with the
    /// opposite inner drift direction). `weight` is strictly positive.
    Conjugate {
        phi: SpherePolynomial,
        weight: Rational,
        sign: i8,
        child: Box<SynthesisPlan>,
    },
}

/// A compiled schedule realizing e^{i·target} in the small-δ limit.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisPlan {
    pub target: SpherePolynomial,
    pub nodes: Vec<PlanNode>,
}

impl SynthesisPlan {
    /// Re-accumulates φ₀ + Σ sign·α·g(∇φ,∇φ) − (u·W) over the node list;
    /// for a sound plan this reproduces the target exactly, recursively.
    pub fn accumulated_phase(&self) -> SpherePolynomial {
        let mut acc = SpherePolynomial::zero();
        for node in &self.nodes {
            match node {
                PlanNode::Pulse { u } => {
                    let w = [
                        SpherePolynomial::x(),
                        SpherePolynomial::y(),
                        SpherePolynomial::z(),
                    ];
                    for (coeff, var) in u.iter().zip(w) {
                        acc = &acc - &var.scale(coeff);
                    }
                }
                PlanNode::Phase { phi, .. } => {
                    acc = &acc + phi;
                }
                PlanNode::Conjugate {
                    phi, weight, sign, ..
                } => {
                    let mut alpha = weight.clone();
                    if *sign < 0 {
                        alpha = -alpha;
                    }
                    acc = &acc + &grad_inner(phi, phi).scale(&alpha);
                }
            }
        }
        acc
    }

    /// Checks the recursive soundness contract: accumulation reproduces the
    /// target at every level of the tree.
    pub fn is_sound(&self) -> bool {
        if self.accumulated_phase() != self.target {
            return false;
        }
        self.nodes.iter().all(|node| match node {
            PlanNode::Pulse { .. } => true,
            PlanNode::Phase { phi, child } | PlanNode::Conjugate { phi, child, .. } => {
                child.target == *phi && child.is_sound()
            }
        })
    }

    /// Maximal nesting depth (a single pulse counts as depth one).
    pub fn depth(&self) -> u32 {
        1 + self
            .nodes
            .iter()
            .map(|node| match node {
                PlanNode::Pulse { .. } => 0,
                PlanNode::Phase { child, .. } | PlanNode::Conjugate { child, .. } => child.depth(),
            })
            .max()
            .unwrap_or(0)
    }

    /// Number of conjugate blocks at the top level.
    pub fn conjugate_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|node| matches!(node, PlanNode::Conjugate { .. }))
            .count()
    }
}

/// Compiles a synthesis plan for `p` through a saturation chain whose top
/// space contains it.
pub fn synthesis_plan(
    p: &SpherePolynomial,
    chain: &[PhaseSubspace],
) -> Result<SynthesisPlan, SaturationError> {
    let Some(top) = chain.last() else {
        return Err(SaturationError::EmptyChain(0));
    };
    let cert = match membership(p, top) {
        Membership::Member(cert) => cert,
        Membership::NotMember { residual } => {
            return Err(SaturationError::NotInSpace { residual })
        }
    };

    if chain.len() == 1 {
        // Leaf level: p lies in the seed span; emit one strong pulse.
        let (linear, pairs) = expand_certificate(&cert, top);
        debug_assert!(pairs.is_empty(), "level-1 provenance cannot contain pairs");
        let mut u = [Rational::zero(), Rational::zero(), Rational::zero()];
        for (generator, coeff) in linear {
            let Generator::Seed(i) = generator else {
                unreachable!("level-1 provenance is seed-only");
            };
            if i >= 3 {
                return Err(SaturationError::SeedCount(i + 1));
            }
            // The pulse limit carries e^{−i u·W}, so realizing +p needs −u.
            u[i] = -coeff;
        }
        return Ok(SynthesisPlan {
            target: p.clone(),
            nodes: vec![PlanNode::Pulse { u }],
        });
    }

    let previous = &chain[chain.len() - 2];
    let lower_chain = &chain[..chain.len() - 1];
    let (linear, pairs) = expand_certificate(&cert, top);

    // Carried part: a polynomial in the previous space.
    let mut phi0 = SpherePolynomial::zero();
    for (generator, coeff) in linear {
        let Generator::Carried(k) = generator else {
            unreachable!("deep levels carry only Carried/Pair provenance");
        };
        phi0 = &phi0 + &previous.basis()[k].scale(&coeff);
    }

    let mut nodes = Vec::new();
    if !phi0.is_zero() {
        let child = synthesis_plan(&phi0, lower_chain)?;
        nodes.push(PlanNode::Phase {
            phi: phi0,
            child: Box::new(child),
        });
    }

    // Pair part: diagonal generators stay as they are, cross generators are
    // rewritten through polarization into two squared-gradient terms.
    let mut conjugates: Vec<(SpherePolynomial, Rational)> = Vec::new();
    for ((i, j), coeff) in pairs {
        if i == j {
            conjugates.push((previous.basis()[i].clone(), coeff));
        } else {
            let sum = &previous.basis()[i] + &previous.basis()[j];
            let difference = &previous.basis()[i] - &previous.basis()[j];
            let quarter = coeff.clone() * rat(1, 4);
            conjugates.push((sum, quarter.clone()));
            conjugates.push((difference, -quarter));
        }
    }
    for (phi, alpha) in conjugates {
        if alpha.is_zero() || phi.is_zero() {
            continue;
        }
        let child = synthesis_plan(&phi, lower_chain)?;
        nodes.push(PlanNode::Conjugate {
            phi,
            weight: alpha.abs(),
            sign: sign_of(&alpha),
            child: Box::new(child),
        });
    }

    Ok(SynthesisPlan {
        target: p.clone(),
        nodes,
    })
}

// ---------------------------------------------------------------------------
// Structured text serialization
// ---------------------------------------------------------------------------

fn write_rational(r: &Rational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for SynthesisPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

impl SynthesisPlan {
    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        let pad = "  ".repeat(depth);
        writeln!(f, "{pad}plan {{")?;
        writeln!(f, "{pad}  target: {}", self.target)?;
        for node in &self.nodes {
            match node {
                PlanNode::Pulse { u } => {
                    writeln!(
                        f,
                        "{pad}  pulse {{ u: ({}, {}, {}) }}",
                        write_rational(&u[0]),
                        write_rational(&u[1]),
                        write_rational(&u[2]),
                    )?;
                }
                PlanNode::Phase { phi, child } => {
                    writeln!(f, "{pad}  phase {{")?;
                    writeln!(f, "{pad}    phi: {phi}")?;
                    child.write_indented(f, depth + 2)?;
                    writeln!(f, "{pad}  }}")?;
                }
                PlanNode::Conjugate {
                    phi,
                    weight,
                    sign,
                    child,
                } => {
                    writeln!(f, "{pad}  conjugate {{")?;
                    writeln!(f, "{pad}    phi: {phi}")?;
                    writeln!(f, "{pad}    weight: {}", write_rational(weight))?;
                    writeln!(f, "{pad}    sign: {}", if *sign < 0 { "-" } else { "+" })?;
                    child.write_indented(f, depth + 2)?;
                    writeln!(f, "{pad}  }}")?;
                }
            }
        }
        writeln!(f, "{pad}}}")
    }

    /// Parses the structured text form produced by `Display`.
    pub fn parse(text: &str) -> Result<SynthesisPlan, PlanParseError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .peekable();
        let plan = parse_plan(&mut lines)?;
        if lines.next().is_some() {
            return Err(PlanParseError::TrailingContent);
        }
        Ok(plan)
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum PlanParseError {
    #[error("expected {expected:?}, found {found:?}")]
    Expected { expected: String, found: String },
    #[error("unexpected end of plan text")]
    UnexpectedEnd,
    #[error("bad polynomial: {0}")]
    BadPolynomial(String),
    #[error("bad rational: {0}")]
    BadRational(String),
    #[error("content after closing brace")]
    TrailingContent,
}

fn next_line<'a, I: Iterator<Item = &'a str>>(
    lines: &mut std::iter::Peekable<I>,
) -> Result<&'a str, PlanParseError> {
    lines.next().ok_or(PlanParseError::UnexpectedEnd)
}

fn expect_prefix<'a>(line: &'a str, prefix: &str) -> Result<&'a str, PlanParseError> {
    line.strip_prefix(prefix)
        .ok_or_else(|| PlanParseError::Expected {
            expected: prefix.to_string(),
            found: line.to_string(),
        })
        .map(str::trim)
}

fn parse_rational_text(text: &str) -> Result<Rational, PlanParseError> {
    let text = text.trim();
    let (numer_text, denom_text) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let numer: num_bigint::BigInt = numer_text
        .parse()
        .map_err(|_| PlanParseError::BadRational(text.to_string()))?;
    match denom_text {
        None => Ok(Rational::from(numer)),
        Some(d) => {
            let denom: num_bigint::BigInt = d
                .parse()
                .map_err(|_| PlanParseError::BadRational(text.to_string()))?;
            if denom.is_zero() {
                return Err(PlanParseError::BadRational(text.to_string()));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

fn parse_poly_text(text: &str) -> Result<SpherePolynomial, PlanParseError> {
    text.parse()
        .map_err(|e| PlanParseError::BadPolynomial(format!("{text:?}: {e}")))
}

fn parse_plan<'a, I: Iterator<Item = &'a str>>(
    lines: &mut std::iter::Peekable<I>,
) -> Result<SynthesisPlan, PlanParseError> {
    let header = next_line(lines)?;
    expect_prefix(header, "plan {")?;
    let target_line = next_line(lines)?;
    let target = parse_poly_text(expect_prefix(target_line, "target:")?)?;

    let mut nodes = Vec::new();
    loop {
        let line = next_line(lines)?;
        if line == "}" {
            break;
        }
        if let Ok(rest) = expect_prefix(line, "pulse {") {
            let body = rest
                .strip_suffix('}')
                .ok_or_else(|| PlanParseError::Expected {
                    expected: "pulse { u: (...) }".into(),
                    found: line.into(),
                })?
                .trim();
            let tuple = expect_prefix(body, "u:")?;
            let tuple = tuple
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| PlanParseError::Expected {
                    expected: "(a, b, c)".into(),
                    found: body.into(),
                })?;
            let parts: Vec<&str> = tuple.split(',').collect();
            if parts.len() != 3 {
                return Err(PlanParseError::Expected {
                    expected: "three components".into(),
                    found: tuple.into(),
                });
            }
            let u = [
                parse_rational_text(parts[0])?,
                parse_rational_text(parts[1])?,
                parse_rational_text(parts[2])?,
            ];
            nodes.push(PlanNode::Pulse { u });
        } else if line == "phase {" {
            let phi_line = next_line(lines)?;
            let phi = parse_poly_text(expect_prefix(phi_line, "phi:")?)?;
            let child = parse_plan(lines)?;
            let close = next_line(lines)?;
            expect_prefix(close, "}")?;
            nodes.push(PlanNode::Phase {
                phi,
                child: Box::new(child),
            });
        } else if line == "conjugate {" {
            let phi_line = next_line(lines)?;
            let phi = parse_poly_text(expect_prefix(phi_line, "phi:")?)?;
            let weight_line = next_line(lines)?;
            let weight = parse_rational_text(expect_prefix(weight_line, "weight:")?)?;
            let sign_line = next_line(lines)?;
            let sign = match expect_prefix(sign_line, "sign:")? {
                "+" => 1i8,
                "-" => -1i8,
                other => {
                    return Err(PlanParseError::Expected {
                        expected: "+ or -".into(),
                        found: other.into(),
                    })
                }
            };
            let child = parse_plan(lines)?;
            let close = next_line(lines)?;
            expect_prefix(close, "}")?;
            nodes.push(PlanNode::Conjugate {
                phi,
                weight,
                sign,
                child: Box::new(child),
            });
        } else {
            return Err(PlanParseError::Expected {
                expected: "pulse/phase/conjugate/}".into(),
                found: line.into(),
            });
        }
    }

    Ok(SynthesisPlan { target, nodes })
}
