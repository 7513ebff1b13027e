//! High-precision approximate numbers used where exact arithmetic is
//! impossible (real powers with fractional exponents).

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode};

use super::scalar::{Rational, Scalar};
use super::NumError;

/// Default working precision in bits.
pub const DEFAULT_PRECISION_BITS: usize = 128;

/// Environment variable overriding [`DEFAULT_PRECISION_BITS`].
pub const PRECISION_ENV: &str = "BILLIARD_PRECISION_BITS";

/// Default relative comparison tolerance for approximate values.
pub const DEFAULT_EPSILON: f64 = 1e-30;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision: `BILLIARD_PRECISION_BITS` if set to a valid integer
/// ≥ 64, else [`DEFAULT_PRECISION_BITS`].
pub fn precision_bits() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&p| p >= 64)
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

/// Convert an exact rational to a binary float at `prec` bits.
pub fn float_from_rational(r: &Rational, prec: usize) -> BigFloat {
    let wide = prec + 64;
    let (n, d) = with_consts(|cc| {
        let n = BigFloat::parse(&r.numer().to_string(), astro_float::Radix::Dec, wide, RM, cc);
        let d = BigFloat::parse(&r.denom().to_string(), astro_float::Radix::Dec, wide, RM, cc);
        (n, d)
    });
    let mut q = n.div(&d, wide, RM);
    q.set_precision(prec, RM).expect("precision change");
    q
}

/// Natural logarithm of a positive float.
pub fn ln(x: &BigFloat, prec: usize) -> BigFloat {
    with_consts(|cc| x.ln(prec, RM, cc))
}

/// Exponential.
pub fn exp(x: &BigFloat, prec: usize) -> BigFloat {
    with_consts(|cc| x.exp(prec, RM, cc))
}

/// `x^y` for positive `x`.
pub fn powf(x: &BigFloat, y: &BigFloat, prec: usize) -> BigFloat {
    with_consts(|cc| x.pow(y, prec, RM, cc))
}

/// Float addition at `prec` bits.
pub fn fadd(a: &BigFloat, b: &BigFloat, prec: usize) -> BigFloat {
    a.add(b, prec, RM)
}
/// Float subtraction at `prec` bits.
pub fn fsub(a: &BigFloat, b: &BigFloat, prec: usize) -> BigFloat {
    a.sub(b, prec, RM)
}
/// Float multiplication at `prec` bits.
pub fn fmul(a: &BigFloat, b: &BigFloat, prec: usize) -> BigFloat {
    a.mul(b, prec, RM)
}
/// Float division at `prec` bits.
pub fn fdiv(a: &BigFloat, b: &BigFloat, prec: usize) -> BigFloat {
    a.div(b, prec, RM)
}

/// Relative difference `|a − b| / max(|a|, |b|)` (0 when both vanish).
pub fn rel_diff(a: &BigFloat, b: &BigFloat, prec: usize) -> BigFloat {
    let diff = fsub(a, b, prec).abs();
    let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
    if scale.is_zero() {
        BigFloat::from_i32(0, prec)
    } else {
        fdiv(&diff, &scale, prec)
    }
}

/// Lossy conversion to `f64` for reporting.
pub fn to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

/// A real binary float carrying its working precision, with arithmetic
/// operators so numeric formulas read like their exact counterparts.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    /// Wrap a float at the given precision.
    pub fn new(v: BigFloat, prec: usize) -> Real {
        Real { v, prec }
    }

    /// An exact rational, rounded to `prec` bits.
    pub fn from_rational(r: &Rational, prec: usize) -> Real {
        Real::new(float_from_rational(r, prec), prec)
    }

    /// A small integer.
    pub fn int(n: i64, prec: usize) -> Real {
        Real::new(BigFloat::from_i64(n, prec), prec)
    }

    /// The real value of an exact scalar; `NotReal` for non-real or
    /// non-rational-real quadratic values with an imaginary part.
    pub fn from_scalar(s: &Scalar, prec: usize) -> Result<Real, NumError> {
        let a = Approx::from_scalar(s, prec);
        if !a.im().is_zero() {
            return Err(NumError::NotReal);
        }
        Ok(Real::new(a.re().clone(), prec))
    }

    /// The underlying float.
    pub fn float(&self) -> &BigFloat {
        &self.v
    }

    /// Working precision in bits.
    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Absolute value.
    pub fn abs(&self) -> Real {
        Real::new(self.v.abs(), self.prec)
    }

    /// True iff exactly zero.
    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    /// True iff strictly negative.
    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    /// Natural logarithm (positive input).
    pub fn ln(&self) -> Real {
        Real::new(ln(&self.v, self.prec), self.prec)
    }

    /// `self^y` for positive `self`.
    pub fn powf(&self, y: &Real) -> Real {
        Real::new(powf(&self.v, &y.v, self.prec), self.prec)
    }

    /// `self^n` for a non-negative integer `n`.
    pub fn powi(&self, n: usize) -> Real {
        Real::new(self.v.powi(n, self.prec, RM), self.prec)
    }

    /// Relative difference, see [`rel_diff`].
    pub fn rel_diff(&self, o: &Real) -> Real {
        Real::new(rel_diff(&self.v, &o.v, self.prec), self.prec)
    }

    /// Lossy conversion for reporting.
    pub fn to_f64(&self) -> f64 {
        to_f64(&self.v)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&decimal(&self.v))
    }
}

/// Render a float as a plain decimal (`-0.125`, `1.6`, `4`) when its decimal
/// exponent lies in `[-6, 20]`, and as `d.ddde±k` otherwise.
pub fn decimal(x: &BigFloat) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let text = x.to_string();
    let Some((mantissa, exp)) = text.split_once('e') else { return text };
    let Ok(exp) = exp.parse::<i64>() else { return text };
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits = format!("{int_part}{frac_part}");
    let digits = digits.trim_end_matches('0');
    if digits.is_empty() {
        return "0".into();
    }
    // Value is 0.d₁d₂… × 10^(point) with `point` digits before the decimal point.
    let point = exp + int_part.len() as i64;
    if !(-6..=21).contains(&point) {
        let (head, tail) = digits.split_at(1);
        let tail = if tail.is_empty() { String::new() } else { format!(".{tail}") };
        return format!("{sign}{head}{tail}e{}", point - 1);
    }
    let body = if point <= 0 {
        format!("0.{}{digits}", "0".repeat((-point) as usize))
    } else if point as usize >= digits.len() {
        format!("{digits}{}", "0".repeat(point as usize - digits.len()))
    } else {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    };
    format!("{sign}{body}")
}

macro_rules! real_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, o: &Real) -> Real {
                let p = self.prec.max(o.prec);
                Real::new($f(&self.v, &o.v, p), p)
            }
        }
        impl std::ops::$tr<Real> for Real {
            type Output = Real;
            fn $m(self, o: Real) -> Real {
                (&self).$m(&o)
            }
        }
    };
}
real_op!(Add, add, fadd);
real_op!(Sub, sub, fsub);
real_op!(Mul, mul, fmul);
real_op!(Div, div, fdiv);

impl std::ops::Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::new(self.v.neg(), self.prec)
    }
}

/// A complex number with real and imaginary parts stored as binary floats of
/// a fixed precision.
#[derive(Clone, Debug)]
pub struct Approx {
    re: BigFloat,
    im: BigFloat,
    prec: usize,
}

impl PartialEq for Approx {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

impl Approx {
    /// Build from real and imaginary parts.
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        Approx { re, im, prec }
    }

    /// Real part.
    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    /// Imaginary part.
    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    /// Precision in bits.
    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Approximate an exact scalar (approximate inputs are re-rounded).
    pub fn from_scalar(s: &Scalar, prec: usize) -> Approx {
        let zero = BigFloat::from_i32(0, prec);
        match s {
            Scalar::Rational(r) => Approx::new(float_from_rational(r, prec), zero, prec),
            Scalar::Quad(q) => {
                let a = float_from_rational(q.a(), prec);
                let b = float_from_rational(q.b(), prec);
                let d = float_from_rational(&Rational::from_integer(q.d().clone()), prec);
                if d.is_negative() {
                    let root = d.abs().sqrt(prec, RM);
                    Approx::new(a, fmul(&b, &root, prec), prec)
                } else {
                    let root = d.sqrt(prec, RM);
                    Approx::new(fadd(&a, &fmul(&b, &root, prec), prec), zero, prec)
                }
            }
            Scalar::Approx(a) => a.clone(),
        }
    }

    /// True iff both parts are exactly zero.
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Sum.
    pub fn add(&self, o: &Approx) -> Approx {
        let p = self.prec.max(o.prec);
        Approx::new(fadd(&self.re, &o.re, p), fadd(&self.im, &o.im, p), p)
    }

    /// Difference.
    pub fn sub(&self, o: &Approx) -> Approx {
        let p = self.prec.max(o.prec);
        Approx::new(fsub(&self.re, &o.re, p), fsub(&self.im, &o.im, p), p)
    }

    /// Product.
    pub fn mul(&self, o: &Approx) -> Approx {
        let p = self.prec.max(o.prec);
        let re = fsub(&fmul(&self.re, &o.re, p), &fmul(&self.im, &o.im, p), p);
        let im = fadd(&fmul(&self.re, &o.im, p), &fmul(&self.im, &o.re, p), p);
        Approx::new(re, im, p)
    }

    /// Negation.
    pub fn neg(&self) -> Approx {
        Approx::new(self.re.neg(), self.im.neg(), self.prec)
    }

    /// Reciprocal.
    pub fn inv(&self) -> Result<Approx, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        let p = self.prec;
        let n = fadd(&fmul(&self.re, &self.re, p), &fmul(&self.im, &self.im, p), p);
        Ok(Approx::new(fdiv(&self.re, &n, p), fdiv(&self.im, &n, p).neg(), p))
    }

    /// Modulus.
    pub fn abs(&self) -> BigFloat {
        let p = self.prec;
        fadd(&fmul(&self.re, &self.re, p), &fmul(&self.im, &self.im, p), p).sqrt(p, RM)
    }

    /// `|self − other| ≤ eps · max(|self|, |other|, tiny)`.
    pub fn approx_eq(&self, other: &Approx, eps: f64) -> bool {
        let p = self.prec.max(other.prec);
        let d = self.sub(other).abs();
        let s = {
            let a = self.abs();
            let b = other.abs();
            if a > b { a } else { b }
        };
        let tol = fmul(&BigFloat::from_f64(eps, p), &s, p);
        d <= tol || d.is_zero()
    }

    /// Lossy `(re, im)` as `f64`.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            f.write_str(&decimal(&self.re))
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(f, "{}{}{}i", decimal(&self.re), sign, decimal(&self.im.abs()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        let show = |n: i64, d: i64| decimal(&float_from_rational(&Rational::new(n.into(), d.into()), 64));
        assert_eq!(show(4, 1), "4");
        assert_eq!(show(8, 5), "1.6");
        assert_eq!(show(-1, 8), "-0.125");
        assert_eq!(show(1200, 1), "1200");
        assert_eq!(show(0, 1), "0");
        assert!(show(1, 3).starts_with("0.3333333333"));
    }

    #[test]
    fn quadratic_promotion() {
        let x = Scalar::sqrt_int(2).to_approx(128);
        let y = &x * &x;
        let two = Scalar::int(2).to_approx(128);
        let (Scalar::Approx(y), Scalar::Approx(two)) = (y, two) else { unreachable!() };
        assert!(y.approx_eq(&two, DEFAULT_EPSILON));
    }

    #[test]
    fn imaginary_promotion() {
        let e = Approx::from_scalar(&Scalar::eisenstein_unit(), 128);
        let cube = e.mul(&e).mul(&e);
        assert!(cube.approx_eq(&Approx::from_scalar(&Scalar::one(), 128), DEFAULT_EPSILON));
    }

    #[test]
    fn fractional_power() {
        let p = 128;
        let x = float_from_rational(&Rational::new(27.into(), 8.into()), p);
        let y = powf(&x, &float_from_rational(&Rational::new(1.into(), 3.into()), p), p);
        let want = float_from_rational(&Rational::new(3.into(), 2.into()), p);
        assert!(to_f64(&rel_diff(&y, &want, p)) < 1e-35);
    }
}
