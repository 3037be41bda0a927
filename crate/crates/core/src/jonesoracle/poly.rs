use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    A,
    Q,
}

impl Var {
    fn symbol(self) -> &'static str {
        match self {
            Var::A => "A",
            Var::Q => "q",
        }
    }
}

/// Integer Laurent polynomial in one variable. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    var: Var,
    coeffs: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero(var: Var) -> Self {
        LaurentPoly {
            var,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(var: Var) -> Self {
        Self::monomial(var, 0, 1)
    }

    pub fn monomial(var: Var, exp: i32, coeff: i64) -> Self {
        let mut p = Self::zero(var);
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms(var: Var, terms: impl IntoIterator<Item = (i32, i64)>) -> Self {
        let mut p = Self::zero(var);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.coeffs.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: i32) -> Self {
        self.map_exponents(self.var, |e| e + k)
    }

    pub fn scale(&self, s: i64) -> Self {
        LaurentPoly::from_terms(self.var, self.terms().map(|(e, c)| (e, c * s)))
    }

    /// Substitutes `var -> var^-1`.
    pub fn invert_variable(&self) -> Self {
        self.map_exponents(self.var, |e| -e)
    }

    /// Rewrites every exponent with `f`, tagging the result with `var`.
    pub fn map_exponents(&self, var: Var, f: impl Fn(i32) -> i32) -> Self {
        LaurentPoly::from_terms(var, self.terms().map(|(e, c)| (f(e), c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = LaurentPoly::one(self.var);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        assert_eq!(self.var, divisor.var, "variable mismatch");
        let (dlo, dhi) = (divisor.min_exp()?, divisor.max_exp()?);
        let lead = divisor.coeff(dhi);
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero(self.var);
        while let Some(hi) = rem.max_exp() {
            let lo = rem.min_exp().expect("nonempty");
            if hi - lo < dhi - dlo {
                return None;
            }
            let c = rem.coeff(hi);
            if c % lead != 0 {
                return None;
            }
            let term = LaurentPoly::monomial(self.var, hi - dhi, c / lead);
            rem = &rem - &(&term * divisor);
            quot = &quot + &term;
        }
        Some(quot)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.var, rhs.var, "variable mismatch");
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.var, rhs.var, "variable mismatch");
        let mut out = LaurentPoly::zero(self.var);
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    /// Highest-degree-last, e.g. `q^2 + q^6 - q^8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let x = self.var.symbol();
        for (k, (e, c)) in self.terms().enumerate() {
            let mag = c.unsigned_abs();
            match (k, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "{x}")?,
                (1, m) => write!(f, "{m}{x}")?,
                (e, 1) => write!(f, "{x}^{e}")?,
                (e, m) => write!(f, "{m}{x}^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(Var::Q, terms.iter().copied())
    }

    #[test]
    fn arithmetic_and_display() {
        let a = q(&[(1, 1), (-1, 1)]);
        assert_eq!((&a * &a).to_string(), "q^-2 + 2 + q^2");
        assert_eq!((&a - &a).to_string(), "0");
        assert_eq!(q(&[(2, 1), (6, 1), (8, -1)]).to_string(), "q^2 + q^6 - q^8");
        assert_eq!(a.pow(3).eval_at_one(), 8);
        assert_eq!(q(&[(1, -3)]).to_string(), "-3q");
    }

    #[test]
    fn exact_division() {
        let a = q(&[(1, 1), (-1, 1)]);
        let b = q(&[(3, 2), (0, -1), (-5, 7)]);
        assert_eq!((&a * &b).div_exact(&a), Some(b.clone()));
        assert_eq!(b.div_exact(&a), None);
        assert_eq!(a.shift(-4).invert_variable(), q(&[(3, 1), (5, 1)]));
    }
}
