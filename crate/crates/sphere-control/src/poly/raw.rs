//! Unreduced three-variable polynomials.
//!
//! Only used to exercise representative independence: the sphere operators
//! are defined through partial derivatives of *some* representative, and the
//! property suites recompute them here on deliberately dirty representatives
//! (canonical + relation·q) before reducing, to confirm the canonical-route
//! results.

use super::{Rational, SpherePolynomial};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct RawPoly {
    pub terms: BTreeMap<(u32, u32, u32), Rational>,
}

impl RawPoly {
    pub fn zero() -> Self {
        RawPoly::default()
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32, u32), Rational)>,
    {
        let mut out = RawPoly::zero();
        for (m, c) in terms {
            out.accumulate(m, c);
        }
        out
    }

    pub fn from_canonical(p: &SpherePolynomial) -> Self {
        RawPoly::from_terms(p.terms().map(|(m, c)| ((m.a, m.b, m.c), c.clone())))
    }

    /// x² + y² + z² − 1.
    pub fn sphere_relation() -> Self {
        RawPoly::from_terms([
            ((2, 0, 0), super::int(1)),
            ((0, 2, 0), super::int(1)),
            ((0, 0, 2), super::int(1)),
            ((0, 0, 0), super::int(-1)),
        ])
    }

    pub fn accumulate(&mut self, m: (u32, u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &RawPoly) -> RawPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.accumulate(*m, c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &RawPoly) -> RawPoly {
        let mut out = RawPoly::zero();
        for ((a1, b1, c1), k1) in &self.terms {
            for ((a2, b2, c2), k2) in &rhs.terms {
                out.accumulate((a1 + a2, b1 + b2, c1 + c2), k1.clone() * k2.clone());
            }
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> RawPoly {
        let mut out = RawPoly::zero();
        for (m, c) in &self.terms {
            out.accumulate(*m, c.clone() * factor.clone());
        }
        out
    }

    /// Partial derivative along axis 0, 1 or 2.
    pub fn partial(&self, axis: usize) -> RawPoly {
        let mut out = RawPoly::zero();
        for ((a, b, c), k) in &self.terms {
            let exps = [*a, *b, *c];
            if exps[axis] == 0 {
                continue;
            }
            let mut lowered = exps;
            lowered[axis] -= 1;
            out.accumulate(
                (lowered[0], lowered[1], lowered[2]),
                k.clone() * super::int(exps[axis] as i64),
            );
        }
        out
    }

    pub fn reduce(&self) -> SpherePolynomial {
        SpherePolynomial::from_raw_terms(self.terms.iter().map(|(m, c)| (*m, c.clone())))
    }

    /// Tangential gradient computed entirely on this representative,
    /// reduced only at the very end.
    pub fn tangential_gradient_reduced(&self) -> [SpherePolynomial; 3] {
        let vars = [
            RawPoly::from_terms([((1, 0, 0), super::int(1))]),
            RawPoly::from_terms([((0, 1, 0), super::int(1))]),
            RawPoly::from_terms([((0, 0, 1), super::int(1))]),
        ];
        let partials = [self.partial(0), self.partial(1), self.partial(2)];
        let mut radial = RawPoly::zero();
        for (var, dp) in vars.iter().zip(&partials) {
            radial = radial.add(&var.mul(dp));
        }
        let mut out = Vec::with_capacity(3);
        for i in 0..3 {
            let proj = partials[i].add(&vars[i].mul(&radial).scale(&super::int(-1)));
            out.push(proj.reduce());
        }
        out.try_into().unwrap()
    }

    /// Laplace–Beltrami through the homogeneous split of this
    /// representative, reduced only at the very end.
    pub fn laplace_beltrami_reduced(&self) -> SpherePolynomial {
        let mut buckets: BTreeMap<u32, RawPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            buckets
                .entry(m.0 + m.1 + m.2)
                .or_insert_with(RawPoly::zero)
                .accumulate(*m, c.clone());
        }
        let mut acc = RawPoly::zero();
        for (n, component) in buckets {
            let mut ambient = RawPoly::zero();
            for axis in 0..3 {
                ambient = ambient.add(&component.partial(axis).partial(axis));
            }
            acc = acc.add(&ambient);
            acc = acc.add(&component.scale(&super::int(-(n as i64) * (n as i64 + 1))));
        }
        acc.reduce()
    }
}
