use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::scalar::{exact, Exact, Scalar};

/// Polynomial in one variable with exact coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<Exact>);

impl Poly {
    pub fn new(mut coeffs: Vec<Exact>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    /// From `(numerator, denominator)` pairs, lowest degree first.
    pub fn from_ratios(coeffs: &[(i64, i64)]) -> Self {
        Poly::new(coeffs.iter().map(|&(p, q)| exact(p, q)).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn coeffs(&self) -> &[Exact] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> Exact {
        self.0.get(k).cloned().unwrap_or_else(Exact::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval<T: Scalar>(&self, x: &T) -> T {
        self.0.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + T::from_exact(c))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        Poly::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Exact::one()))
    }

    pub fn scale(&self, c: &Exact) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// Unique polynomial of degree < `points.len()` through the given points
    /// (Newton divided differences, expanded to monomials).
    pub fn interpolate(points: &[(Exact, Exact)]) -> Poly {
        let xs: Vec<Exact> = points.iter().map(|(x, _)| x.clone()).collect();
        let mut dd: Vec<Exact> = points.iter().map(|(_, y)| y.clone()).collect();
        for level in 1..dd.len() {
            for i in (level..dd.len()).rev() {
                dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (xs[i].clone() - xs[i - level].clone());
            }
        }
        // Horner on the Newton form: p = dd0 + (x - x0)(dd1 + (x - x1)(...)).
        let mut acc = Poly::zero();
        for i in (0..dd.len()).rev() {
            let shifted = acc.times_linear(&xs[i]);
            acc = shifted.add(&Poly::new(vec![dd[i].clone()]));
        }
        acc
    }

    /// `self · (x - root)`
    fn times_linear(&self, root: &Exact) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Exact::zero(); self.0.len() + 1];
        for (k, c) in self.0.iter().enumerate() {
            out[k + 1] += c.clone();
            out[k] -= c.clone() * root.clone();
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    /// Highest degree first in the variable `n`, e.g. `72n^3 - 12n^2 + n - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            let a = c.abs();
            let body = if a.is_integer() { a.numer().to_string() } else { format!("({}/{})", a.numer(), a.denom()) };
            match k {
                0 => f.write_str(&body)?,
                _ => {
                    if !a.is_one() {
                        f.write_str(&body)?;
                    }
                    f.write_str("n")?;
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}
