//! Exact rational polynomial algebra on the unit sphere.
//!
//! Polynomials in x, y, z are identified as functions on
//! S² = {x² + y² + z² = 1}, i.e. they live in the quotient ring
//! ℚ\[x,y,z\]/(x²+y²+z²−1). Every value is kept in a canonical normal form in
//! which z never appears with exponent above one: z² is rewritten to
//! 1 − x² − y² whenever it occurs (the rewrite induced by ordering z
//! heaviest). Two polynomials are equal as functions on the sphere exactly
//! when their canonical term maps coincide, so equality is structural.
//!
//! Coefficients are arbitrary-precision rationals throughout; floating
//! point enters only at the [`SpherePolynomial::evaluate`] boundary.

mod calculus;
mod moments;
pub(crate) mod raw;
mod text;

pub use calculus::{
    ad2_h0, ad3_h0, grad_inner, laplace_beltrami, phase_conjugation_term, tangential_gradient,
    TangentField,
};
pub use moments::{integral_over_sphere, monomial_moment};
pub use text::ParseError;

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational scalar; always stored in lowest terms with a
/// positive denominator (both guaranteed by the underlying representation).
pub type Rational = num_rational::BigRational;

/// Shorthand for the rational n/d.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

thread_local! {
    // Negative-control hook: when set, the sphere rewrite is deliberately
    // wrong (z² ↦ 1 − x² + y²) so that the identity suites must fail.
    static CORRUPT_REWRITE: Cell<bool> = const { Cell::new(false) };
}

/// Corrupts the quotient-ring rewrite rule for the current thread.
///
/// This exists solely as a negative control for the verification suites
/// (`verify-lemma --mutate`): with the rule corrupted, the exact identity
/// checks are expected to fail, which demonstrates that they are able to
/// fail. Never enable this outside a self-test.
#[doc(hidden)]
pub fn set_corrupt_rewrite(on: bool) {
    CORRUPT_REWRITE.with(|flag| flag.set(on));
}

fn rewrite_y_sign() -> i64 {
    if CORRUPT_REWRITE.with(Cell::get) {
        1
    } else {
        -1
    }
}

/// Axis of ℝ³, used to address variables and partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// A canonical monomial x^a y^b z^c with c ∈ {0, 1}.
///
/// Ordered graded-lexicographically with x > y > z: total degree first,
/// then exponent of x, then of y.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl Monomial {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        debug_assert!(c <= 1, "canonical monomials carry z-exponent 0 or 1");
        Monomial { a, b, c }
    }

    pub fn degree(&self) -> u32 {
        self.a + self.b + self.c
    }

    /// All canonical monomials of total degree ≤ `max_degree`, ascending.
    pub fn all_of_degree_at_most(max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for a in 0..=max_degree {
            for b in 0..=(max_degree - a) {
                for c in 0..=1u32.min(max_degree - a - b) {
                    out.push(Monomial { a, b, c });
                }
            }
        }
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.a.cmp(&other.a))
            .then(self.b.cmp(&other.b))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Error at the floating-point evaluation boundary.
#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("evaluation point is off the sphere: |p|^2 - 1 = {excess:e} exceeds 1e-12")]
    OffSphere { excess: f64 },
}

/// A real polynomial on S² in canonical quotient-ring form.
///
/// The term map never stores zero coefficients and every key is canonical,
/// so `==` decides equality of the underlying functions on the sphere.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpherePolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl SpherePolynomial {
    pub fn zero() -> Self {
        SpherePolynomial::default()
    }

    pub fn one() -> Self {
        SpherePolynomial::constant(int(1))
    }

    pub fn constant(value: Rational) -> Self {
        let mut p = SpherePolynomial::zero();
        p.add_raw_term(0, 0, 0, value);
        p
    }

    pub fn var(axis: Axis) -> Self {
        let (a, b, c) = match axis {
            Axis::X => (1, 0, 0),
            Axis::Y => (0, 1, 0),
            Axis::Z => (0, 0, 1),
        };
        SpherePolynomial::from_raw_terms([((a, b, c), int(1))])
    }

    pub fn x() -> Self {
        SpherePolynomial::var(Axis::X)
    }

    pub fn y() -> Self {
        SpherePolynomial::var(Axis::Y)
    }

    pub fn z() -> Self {
        SpherePolynomial::var(Axis::Z)
    }

    /// Canonicalizes an arbitrary polynomial given as raw (a, b, c) terms.
    ///
    /// This is reduction modulo the ideal (x²+y²+z²−1): z-exponents of two or
    /// more are eliminated through z² ↦ 1 − x² − y².
    pub fn from_raw_terms<I>(raw: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32, u32), Rational)>,
    {
        let mut p = SpherePolynomial::zero();
        for ((a, b, c), coeff) in raw {
            p.add_raw_term(a, b, c, coeff);
        }
        p
    }

    /// A single canonicalized monomial x^a y^b z^c.
    pub fn monomial(a: u32, b: u32, c: u32) -> Self {
        SpherePolynomial::from_raw_terms([((a, b, c), int(1))])
    }

    // Adds coeff · x^a y^b z^c, expanding z^(2k+r) = (1 − x² − y²)^k z^r.
    fn add_raw_term(&mut self, a: u32, b: u32, c: u32, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let k = c / 2;
        let r = c % 2;
        if k == 0 {
            self.accumulate(Monomial::new(a, b, r), coeff);
            return;
        }
        let y_sign = rewrite_y_sign();
        // (1 − x² + s·y²)^k = Σ_{i+j≤k} k!/(i! j! (k−i−j)!) (−1)^i s^j x^(2i) y^(2j)
        for i in 0..=k {
            for j in 0..=(k - i) {
                let m = multinomial(k, i, j);
                let mut sign = BigInt::one();
                if i % 2 == 1 {
                    sign = -sign;
                }
                if j % 2 == 1 && y_sign < 0 {
                    sign = -sign;
                }
                let term = coeff.clone() * Rational::from(m * sign);
                self.accumulate(Monomial::new(a + 2 * i, b + 2 * j, r), term);
            }
        }
    }

    fn accumulate(&mut self, m: Monomial, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Maximal total degree over stored terms; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Coefficient of a canonical monomial (zero if absent).
    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Term iterator in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading (largest) canonical monomial, if any.
    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return SpherePolynomial::zero();
        }
        let mut out = SpherePolynomial::zero();
        for (m, c) in &self.terms {
            out.terms.insert(*m, c.clone() * factor.clone());
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = SpherePolynomial::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Partial derivative ∂/∂axis of the canonical representative.
    ///
    /// Differentiation is representative-dependent in the quotient ring; the
    /// sphere operators built on top of it (tangential gradient, the
    /// Laplace–Beltrami operator) are representative-independent, which the
    /// property suite checks explicitly.
    pub fn partial(&self, axis: Axis) -> Self {
        let mut out = SpherePolynomial::zero();
        for (m, coeff) in &self.terms {
            let (e, da, db, dc) = match axis {
                Axis::X => (m.a, 1, 0, 0),
                Axis::Y => (m.b, 0, 1, 0),
                Axis::Z => (m.c, 0, 0, 1),
            };
            if e == 0 {
                continue;
            }
            out.accumulate(
                Monomial::new(m.a - da, m.b - db, m.c - dc),
                coeff.clone() * int(e as i64),
            );
        }
        out
    }

    /// Numeric evaluation of the canonical form at a unit vector.
    ///
    /// Rejects points whose squared norm deviates from one by more than
    /// 1e−12; off-sphere values of the canonical representative are not
    /// meaningful for the quotient element.
    pub fn evaluate(&self, point: [f64; 3]) -> Result<f64, EvalError> {
        let norm2 = point[0] * point[0] + point[1] * point[1] + point[2] * point[2];
        let excess = (norm2 - 1.0).abs();
        if excess > 1e-12 {
            return Err(EvalError::OffSphere { excess });
        }
        Ok(self.evaluate_unchecked(point))
    }

    /// Numeric evaluation without the sphere check (grid code guarantees
    /// its points by construction).
    pub fn evaluate_unchecked(&self, point: [f64; 3]) -> f64 {
        let [x, y, z] = point;
        let mut acc = 0.0;
        for (m, coeff) in &self.terms {
            let mut v = rational_to_f64(coeff);
            v *= x.powi(m.a as i32);
            v *= y.powi(m.b as i32);
            if m.c == 1 {
                v *= z;
            }
            acc += v;
        }
        acc
    }

    /// Exact evaluation at a rational point.
    ///
    /// Only meaningful as a quotient-ring operation when the point satisfies
    /// x² + y² + z² = 1; the rational-point oracles construct such points by
    /// stereographic parametrization.
    pub fn evaluate_rational(&self, point: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (m, coeff) in &self.terms {
            let mut v = coeff.clone();
            for _ in 0..m.a {
                v *= point[0].clone();
            }
            for _ in 0..m.b {
                v *= point[1].clone();
            }
            for _ in 0..m.c {
                v *= point[2].clone();
            }
            acc += v;
        }
        acc
    }

    /// Coefficient of x, y, z for a polynomial that is (at most) linear
    /// homogeneous; `None` if other monomials are present.
    pub fn as_linear(&self) -> Option<[Rational; 3]> {
        let mut out = [Rational::zero(), Rational::zero(), Rational::zero()];
        for (m, coeff) in &self.terms {
            match (m.a, m.b, m.c) {
                (1, 0, 0) => out[0] = coeff.clone(),
                (0, 1, 0) => out[1] = coeff.clone(),
                (0, 0, 1) => out[2] = coeff.clone(),
                _ => return None,
            }
        }
        Some(out)
    }
}

/// Converts an exact rational to the nearest f64 (used only at numeric
/// boundaries).
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    let mut numer = r.numer().clone();
    let mut denom = r.denom().clone();
    // Shift both parts down together when either would overflow f64 on its
    // own; the ratio survives to full double precision.
    let bits = numer.bits().max(denom.bits());
    if bits > 960 {
        let shift = bits - 960;
        numer >>= shift;
        denom >>= shift;
        if denom.is_zero() {
            // The true magnitude exceeds f64 range.
            return if r.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
    }
    numer.to_f64().unwrap_or(f64::NAN) / denom.to_f64().unwrap_or(f64::NAN)
}

fn multinomial(k: u32, i: u32, j: u32) -> BigInt {
    // k! / (i! j! (k-i-j)!)
    let mut num = BigInt::one();
    for v in 1..=k as u64 {
        num *= v;
    }
    let mut den = BigInt::one();
    for v in 1..=i as u64 {
        den *= v;
    }
    for v in 1..=j as u64 {
        den *= v;
    }
    for v in 1..=(k - i - j) as u64 {
        den *= v;
    }
    num / den
}

impl Add for &SpherePolynomial {
    type Output = SpherePolynomial;
    fn add(self, rhs: &SpherePolynomial) -> SpherePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(*m, c.clone());
        }
        out
    }
}

impl Sub for &SpherePolynomial {
    type Output = SpherePolynomial;
    fn sub(self, rhs: &SpherePolynomial) -> SpherePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(*m, -c.clone());
        }
        out
    }
}

impl Neg for &SpherePolynomial {
    type Output = SpherePolynomial;
    fn neg(self) -> SpherePolynomial {
        self.scale(&int(-1))
    }
}

impl Mul for &SpherePolynomial {
    type Output = SpherePolynomial;
    fn mul(self, rhs: &SpherePolynomial) -> SpherePolynomial {
        let mut out = SpherePolynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_raw_term(
                    m1.a + m2.a,
                    m1.b + m2.b,
                    m1.c + m2.c,
                    c1.clone() * c2.clone(),
                );
            }
        }
        out
    }
}

/// A random rational point exactly on S², by stereographic projection of a
/// rational plane point. Used by the exact-evaluation oracles.
pub fn rational_sphere_point(u: &Rational, v: &Rational) -> [Rational; 3] {
    let one = Rational::one();
    let s = u.clone() * u.clone() + v.clone() * v.clone();
    let denom = s.clone() + one.clone();
    [
        int(2) * u.clone() / denom.clone(),
        int(2) * v.clone() / denom.clone(),
        (s - one) / denom,
    ]
}
