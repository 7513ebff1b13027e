//! Homogeneous rational functions on the projective plane.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::IntegralError;
use crate::exactnum::Scalar;
use crate::projcore::ExtValue;

/// A ratio of two homogeneous polynomials of equal degree in `(z, w, t)`,
/// i.e. a rational function on the projective plane.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HomRational {
    /// Numerator.
    pub num: Poly,
    /// Denominator.
    pub den: Poly,
}

impl HomRational {
    /// Build `num/den`, checking homogeneity and equal degrees.
    pub fn new(num: Poly, den: Poly) -> Result<HomRational, IntegralError> {
        if den.is_zero() {
            return Err(IntegralError::ZeroDenominator);
        }
        match (num.homogeneous_degree(), den.homogeneous_degree()) {
            (Some(a), Some(b)) if a == b => Ok(HomRational { num, den }),
            _ if num.is_zero() && den.homogeneous_degree().is_some() => Ok(HomRational { num, den }),
            _ => Err(IntegralError::NotHomogeneous),
        }
    }

    /// The common homogeneous degree of numerator and denominator.
    pub fn degree(&self) -> u32 {
        self.den.homogeneous_degree().unwrap_or(0)
    }

    /// Projective value `(num : den)` at `x`; `None` when both vanish.
    pub fn eval(&self, x: &[Scalar; 3]) -> Option<ExtValue> {
        let n = self.num.eval(x);
        let d = self.den.eval(x);
        if n.is_zero() && d.is_zero() {
            None
        } else {
            Some(ExtValue(n, d))
        }
    }

    /// Equality of rational functions by cross-multiplication.
    pub fn same_function(&self, o: &HomRational) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    /// If `self = k·o` for a constant `k`, return `k`.
    pub fn constant_ratio(&self, o: &HomRational) -> Option<Scalar> {
        // k = (num·o.den)/(o.num·den); read off one coefficient and confirm.
        let lhs = &self.num * &o.den;
        let rhs = &o.num * &self.den;
        let (e, c) = rhs.terms().next()?;
        let k = lhs.coeff(e) / c.clone();
        (lhs == rhs.scale(&k)).then_some(k)
    }

    /// Pull back by a linear change of variables (see [`Poly::linear_change`]).
    pub fn linear_change(&self, m: &[[Scalar; 3]; 3]) -> HomRational {
        HomRational { num: self.num.linear_change(m), den: self.den.linear_change(m) }
    }

    /// Substitute homogeneous linear or higher forms for the variables.
    pub fn substitute(&self, s: &[Poly; 3]) -> HomRational {
        HomRational { num: self.num.substitute(s), den: self.den.substitute(s) }
    }

    /// Permute variables (see [`Poly::permute`]).
    pub fn permute(&self, perm: [usize; 3]) -> HomRational {
        HomRational { num: self.num.permute(perm), den: self.den.permute(perm) }
    }
}

impl fmt::Display for HomRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

/// A rational function stored as a product of powers of polynomial
/// factors. The catalog integrals are kept in this form so that roots of
/// them (fractional exponents) can be formed for Hessian computations.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactoredRational {
    /// `(factor, exponent)` pairs; exponents are nonzero.
    pub factors: Vec<(Poly, i64)>,
}

impl FactoredRational {
    /// Build from factor–exponent pairs, dropping zero exponents.
    pub fn new(factors: Vec<(Poly, i64)>) -> FactoredRational {
        FactoredRational { factors: factors.into_iter().filter(|(_, e)| *e != 0).collect() }
    }

    /// Expand into numerator and denominator.
    pub fn expand(&self) -> Result<HomRational, IntegralError> {
        let mut num = Poly::one();
        let mut den = Poly::one();
        for (p, e) in &self.factors {
            if *e > 0 {
                num = &num * &p.pow(*e as u32);
            } else {
                den = &den * &p.pow((-e) as u32);
            }
        }
        HomRational::new(num, den)
    }

    /// The same factors with the third variable set to one.
    pub fn dehomogenize(&self) -> FactoredRational {
        FactoredRational { factors: self.factors.iter().map(|(p, e)| (p.dehomogenize(), *e)).collect() }
            .drop_constants()
    }

    fn drop_constants(self) -> FactoredRational {
        FactoredRational {
            factors: self.factors.into_iter().filter(|(p, _)| p.total_degree() != Some(0)).collect(),
        }
    }
}

impl fmt::Display for FactoredRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                f.write_str(" · ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p})^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneity_is_checked() {
        let q = Poly::from_int_terms(&[([0, 1, 1], 1), ([2, 0, 0], -1)]);
        assert!(HomRational::new(q.clone(), Poly::t().pow(2)).is_ok());
        assert_eq!(HomRational::new(q.clone(), Poly::t()).unwrap_err(), IntegralError::NotHomogeneous);
        assert_eq!(HomRational::new(q, Poly::zero()).unwrap_err(), IntegralError::ZeroDenominator);
    }

    #[test]
    fn constant_ratio_detects_multiples() {
        let q = Poly::from_int_terms(&[([0, 1, 1], 1), ([2, 0, 0], -1)]);
        let a = HomRational::new(q.scale(&Scalar::int(3)), Poly::t().pow(2)).unwrap();
        let b = HomRational::new(q.clone(), Poly::t().pow(2)).unwrap();
        assert_eq!(a.constant_ratio(&b), Some(Scalar::int(3)));
        let c = HomRational::new(q, Poly::w().pow(2)).unwrap();
        assert_eq!(a.constant_ratio(&c), None);
    }
}
