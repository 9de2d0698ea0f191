//! Coefficients polynomial in the formal symbols `L` (= 1/k) and `M`.

use std::collections::BTreeMap;
use std::fmt;

use super::exact::ExactComplex;

/// Finite sum of `coeff * L^lam * M^m`, keyed by `(lam, m)`.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GradedScalar {
    terms: BTreeMap<(u32, u32), ExactComplex>,
}

impl GradedScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ExactComplex::one())
    }

    pub fn constant(c: ExactComplex) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: ExactComplex, lam: u32, m: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((lam, m), c);
        }
        Self { terms }
    }

    /// `L`, i.e. 1/k.
    pub fn lambda() -> Self {
        Self::monomial(ExactComplex::one(), 1, 0)
    }

    pub fn mass() -> Self {
        Self::monomial(ExactComplex::one(), 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExactComplex)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, lam: u32, m: u32) -> ExactComplex {
        self.terms.get(&(lam, m)).cloned().unwrap_or_default()
    }

    pub fn min_lambda(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).min()
    }

    pub fn max_lambda(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn add_term(&mut self, lam: u32, m: u32, c: &ExactComplex) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((lam, m)).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(lam, m));
        }
    }

    pub fn add_assign(&mut self, other: &GradedScalar) {
        for (&(l, m), c) in &other.terms {
            self.add_term(l, m, c);
        }
    }

    pub fn sub_assign(&mut self, other: &GradedScalar) {
        for (&(l, m), c) in &other.terms {
            self.add_term(l, m, &-c);
        }
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }

    pub fn scale(&self, s: &ExactComplex) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, c)| (*k, c * s)).collect() }
    }

    /// Multiply by `L^dl M^dm`.
    pub fn shift(&self, dl: u32, dm: u32) -> Self {
        Self { terms: self.terms.iter().map(|(&(l, m), c)| ((l + dl, m + dm), c.clone())).collect() }
    }

    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (*k, c.conj())).collect() }
    }

    /// Drop all terms with `L`-power above `n`.
    pub fn truncate(&self, n: u32) -> Self {
        Self { terms: self.terms.iter().filter(|(k, _)| k.0 <= n).map(|(k, c)| (*k, c.clone())).collect() }
    }

    /// Only the terms of the given `L`-power.
    pub fn lambda_part(&self, lam: u32) -> Self {
        Self { terms: self.terms.iter().filter(|(k, _)| k.0 == lam).map(|(k, c)| (*k, c.clone())).collect() }
    }

    /// Product with every `L`-power above `n` discarded.
    pub fn mul_trunc(&self, other: &GradedScalar, n: u32) -> GradedScalar {
        let mut out = GradedScalar::zero();
        for (&(l1, m1), c1) in &self.terms {
            if l1 > n {
                continue;
            }
            for (&(l2, m2), c2) in &other.terms {
                if l1 + l2 > n {
                    continue;
                }
                out.add_term(l1 + l2, m1 + m2, &(c1 * c2));
            }
        }
        out
    }
}

impl fmt::Display for GradedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(l, m), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            match l {
                0 => {}
                1 => write!(f, "*L")?,
                _ => write!(f, "*L^{l}")?,
            }
            match m {
                0 => {}
                1 => write!(f, "*M")?,
                _ => write!(f, "*M^{m}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GradedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Product with truncation order `n`.
pub fn graded_mul(a: &GradedScalar, b: &GradedScalar, n: u32) -> GradedScalar {
    a.mul_trunc(b, n)
}
