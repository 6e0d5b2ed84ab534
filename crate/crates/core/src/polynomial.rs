//! Enhancement polynomials `sum c_i u^{e_i}` with natural coefficients.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;
use thiserror::Error;

use crate::linalg::Count;

/// A polynomial in `u` with positive integer coefficients, kept as a map
/// from exponent to coefficient. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Count, u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse polynomial term {0:?}")]
pub struct ParsePolynomialError(pub String);

impl Polynomial {
    pub fn new() -> Self {
        Self::default()
    }

    /// One term per occurrence: the multiset `{e_1, e_2, ...}` becomes
    /// `sum u^{e_i}`.
    pub fn from_exponents<I: IntoIterator<Item = Count>>(exponents: I) -> Self {
        let mut p = Self::new();
        for e in exponents {
            p.add_term(e, 1);
        }
        p
    }

    pub fn add_term(&mut self, exponent: Count, coefficient: u64) {
        if coefficient == 0 {
            return;
        }
        *self.terms.entry(exponent).or_insert(0) += coefficient;
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Count, u64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coefficient(&self, exponent: Count) -> u64 {
        self.terms.get(&exponent).copied().unwrap_or(0)
    }

    /// Value at `u = 1`.
    pub fn total(&self) -> u64 {
        self.terms.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            match (c, e) {
                (c, 0) => write!(f, "{c}")?,
                (1, 1) => write!(f, "u")?,
                (c, 1) => write!(f, "{c}u")?,
                (1, e) => write!(f, "u^{e}")?,
                (c, e) => write!(f, "{c}u^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Polynomial {
    type Err = ParsePolynomialError;

    /// Accepts the canonical form plus whitespace, `*`, braces around the
    /// exponent (`u^{27}`) and terms in any order.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace() && !matches!(c, '*' | '{' | '}')).collect();
        let mut p = Polynomial::new();
        if cleaned == "0" {
            return Ok(p);
        }
        if cleaned.is_empty() {
            return Err(ParsePolynomialError(String::from(s)));
        }
        for term in cleaned.split('+') {
            let bad = || ParsePolynomialError(String::from(term));
            let (coef, exp) = match term.split_once('u') {
                None => (term, "0"),
                Some((c, rest)) => {
                    let exp = match rest.strip_prefix('^') {
                        Some(e) => e,
                        None if rest.is_empty() => "1",
                        None => return Err(bad()),
                    };
                    (c, exp)
                }
            };
            let coef: u64 = if coef.is_empty() { 1 } else { coef.parse().map_err(|_| bad())? };
            let exp: Count = exp.parse().map_err(|_| bad())?;
            if coef == 0 {
                return Err(bad());
            }
            p.add_term(exp, coef);
        }
        Ok(p)
    }
}
