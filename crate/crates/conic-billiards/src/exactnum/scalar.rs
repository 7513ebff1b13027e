//! The exact scalar type: rationals, elements of one quadratic field
//! ℚ(√d), and an explicitly separated high-precision approximate variant.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::approx::Approx;
use super::NumError;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Element `a + b√d` of a quadratic field with `b ≠ 0` and `d` square-free,
/// `d ∉ {0, 1}`.
///
/// Values with `b = 0` never exist as a `Quad`: they collapse to
/// [`Scalar::Rational`], which is how "quad values with b = 0 compare equal to
/// the corresponding rational" is realised.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quad {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl Quad {
    /// Rational part `a`.
    pub fn a(&self) -> &Rational {
        &self.a
    }
    /// Irrational coefficient `b`.
    pub fn b(&self) -> &Rational {
        &self.b
    }
    /// Square-free radicand `d`.
    pub fn d(&self) -> &BigInt {
        &self.d
    }
}

/// A field element: exact rational, exact quadratic irrational, or an
/// approximate complex number.
///
/// Exact and approximate values never mix: any binary operation combining
/// them fails with [`NumError::MixedField`]. Promotion to the approximate
/// variant is explicit via [`Scalar::to_approx`].
///
/// The arithmetic operators (`+`, `-`, `*`, `/`) panic where the checked
/// methods return an error, in the same way integer division by zero panics;
/// use [`scalar_arith`] or the `checked_*` methods when operands may come
/// from different fields.
#[derive(Clone, Debug)]
pub enum Scalar {
    /// An element of ℚ in lowest terms with positive denominator.
    Rational(Rational),
    /// An element of ℚ(√d) \ ℚ.
    Quad(Quad),
    /// A high-precision complex approximation.
    Approx(Approx),
}

/// Selector for [`scalar_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    /// Addition.
    Add,
    /// Subtraction.
    Sub,
    /// Multiplication.
    Mul,
    /// Division.
    Div,
}

/// Apply one field operation, reporting division by zero and field mismatches
/// as errors.
///
/// ```
/// use conic_billiards::exactnum::{scalar_arith, ArithOp, Scalar};
/// let s = scalar_arith(&Scalar::ratio(1, 2), &Scalar::ratio(1, 3), ArithOp::Add).unwrap();
/// assert_eq!(s, Scalar::ratio(5, 6));
/// ```
pub fn scalar_arith(a: &Scalar, b: &Scalar, op: ArithOp) -> Result<Scalar, NumError> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    /// The rational `n/d`.
    ///
    /// # Panics
    /// If `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Scalar {
        Scalar::Rational(rat(n, d))
    }

    /// The integer `n`.
    pub fn int(n: i64) -> Scalar {
        Scalar::Rational(Rational::from_integer(BigInt::from(n)))
    }

    /// Zero.
    pub fn zero() -> Scalar {
        Scalar::int(0)
    }

    /// One.
    pub fn one() -> Scalar {
        Scalar::int(1)
    }

    /// Wrap a rational.
    pub fn from_rational(r: Rational) -> Scalar {
        Scalar::Rational(r)
    }

    /// Build `a + b√d`, normalising `d` to its square-free part (absorbing the
    /// square factor into `b`) and collapsing to a rational when possible.
    ///
    /// # Errors
    /// [`NumError::NotRepresentable`] if `d = 0`.
    pub fn quad(a: Rational, b: Rational, d: BigInt) -> Result<Scalar, NumError> {
        if d.is_zero() {
            return Err(NumError::NotRepresentable("radicand 0".into()));
        }
        let (s, sf) = square_free_decompose(&d);
        let b = b * Rational::from_integer(s);
        Ok(Self::quad_raw(a, b, sf))
    }

    /// `a + b√d` for already square-free `d`.
    fn quad_raw(a: Rational, b: Rational, d: BigInt) -> Scalar {
        if b.is_zero() || d.is_one() {
            Scalar::Rational(a + b)
        } else {
            Scalar::Quad(Quad { a, b, d })
        }
    }

    /// The generator `√d` of ℚ(√d) (a rational when `d` is a perfect square).
    pub fn sqrt_int(d: i64) -> Scalar {
        Scalar::sqrt_rational(&Rational::from_integer(BigInt::from(d)))
            .expect("square root of an integer is representable")
    }

    /// The imaginary unit `i = √−1`.
    pub fn i() -> Scalar {
        Scalar::sqrt_int(-1)
    }

    /// `ε = (−1 + √−3)/2 = e^{2πi/3}`.
    pub fn eisenstein_unit() -> Scalar {
        Scalar::quad_raw(rat(-1, 2), rat(1, 2), BigInt::from(-3))
    }

    /// The principal square root of a rational: `√(n/m) = s√d / m` where
    /// `n·m = s²d` with `d` square-free. Returns a rational when `n/m` is a
    /// perfect square.
    pub fn sqrt_rational(r: &Rational) -> Result<Scalar, NumError> {
        if r.is_zero() {
            return Ok(Scalar::zero());
        }
        let nm = r.numer() * r.denom();
        let (s, d) = square_free_decompose(&nm);
        let b = Rational::new(s, r.denom().clone());
        Ok(Self::quad_raw(Rational::zero(), b, d))
    }

    /// A square root inside the field of `self` (or ℚ(√r) for rational `r`).
    ///
    /// For a rational argument this is [`Scalar::sqrt_rational`]. For
    /// `x = a + b√d` it returns `p + q√d` with `(p + q√d)² = x` when such an
    /// element exists, and `None` otherwise.
    pub fn sqrt_in_field(&self) -> Result<Option<Scalar>, NumError> {
        match self {
            Scalar::Rational(r) => Scalar::sqrt_rational(r).map(Some),
            Scalar::Approx(_) => Err(NumError::ApproxNotSupported),
            Scalar::Quad(q) => {
                // p² + q²d = a, 2pq = b; the norm a² − b²d must be a square n².
                let norm = &q.a * &q.a - &q.b * &q.b * Rational::from_integer(q.d.clone());
                let Some(n) = rational_sqrt_exact(&norm) else {
                    return Ok(None);
                };
                let two = rat(2, 1);
                for cand in [(&q.a + &n) / &two, (&q.a - &n) / &two] {
                    if cand.is_zero() {
                        continue;
                    }
                    if let Some(p) = rational_sqrt_exact(&cand) {
                        let qq = &q.b / (&two * &p);
                        let root = Self::quad_raw(p, qq, q.d.clone());
                        if &(&root * &root) == self {
                            return Ok(Some(root));
                        }
                    }
                }
                Ok(None)
            }
        }
    }

    /// True for the rational and quadratic variants.
    pub fn is_exact(&self) -> bool {
        !matches!(self, Scalar::Approx(_))
    }

    /// True iff the value is a rational.
    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    /// The rational value, if the scalar is rational.
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }

    /// The radicand of the quadratic field this value lives in, if any.
    pub fn radicand(&self) -> Option<&BigInt> {
        match self {
            Scalar::Quad(q) => Some(&q.d),
            _ => None,
        }
    }

    /// Exact zero test (approximate values test for exact zero bits).
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Quad(_) => false,
            Scalar::Approx(a) => a.is_zero(),
        }
    }

    /// Exact test for one.
    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    /// Galois conjugation `a + b√d ↦ a − b√d`; rationals are fixed.
    ///
    /// ```
    /// use conic_billiards::exactnum::Scalar;
    /// let e = Scalar::eisenstein_unit();
    /// assert_eq!(&e * &e.conjugate().unwrap(), Scalar::one());
    /// ```
    pub fn conjugate(&self) -> Result<Scalar, NumError> {
        match self {
            Scalar::Rational(_) => Ok(self.clone()),
            Scalar::Quad(q) => Ok(Scalar::Quad(Quad {
                a: q.a.clone(),
                b: -q.b.clone(),
                d: q.d.clone(),
            })),
            Scalar::Approx(_) => Err(NumError::ApproxNotSupported),
        }
    }

    /// The field norm `a² − b²d` (the square for rationals).
    pub fn norm(&self) -> Result<Rational, NumError> {
        match self {
            Scalar::Rational(r) => Ok(r * r),
            Scalar::Quad(q) => Ok(&q.a * &q.a - &q.b * &q.b * Rational::from_integer(q.d.clone())),
            Scalar::Approx(_) => Err(NumError::ApproxNotSupported),
        }
    }

    /// Sign of a real exact number. Elements of imaginary quadratic fields
    /// have no order and yield [`NumError::NotReal`].
    pub fn signum(&self) -> Result<i32, NumError> {
        match self {
            Scalar::Rational(r) => Ok(sign_of(r)),
            Scalar::Quad(q) => {
                if q.d.is_negative() {
                    return Err(NumError::NotReal);
                }
                let sa = sign_of(&q.a);
                let sb = sign_of(&q.b);
                if sa == 0 || sa == sb {
                    return Ok(if sa == 0 { sb } else { sa });
                }
                // Opposite signs: compare a² with b²d.
                let lhs = &q.a * &q.a;
                let rhs = &q.b * &q.b * Rational::from_integer(q.d.clone());
                Ok(match lhs.cmp(&rhs) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => 0,
                })
            }
            Scalar::Approx(_) => Err(NumError::ApproxNotSupported),
        }
    }

    /// Exact comparison of two real numbers.
    pub fn cmp_real(&self, other: &Scalar) -> Result<Ordering, NumError> {
        let s = self.checked_sub(other)?.signum()?;
        Ok(s.cmp(&0))
    }

    /// Multiplicative inverse.
    pub fn checked_inv(&self) -> Result<Scalar, NumError> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    Err(NumError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Quad(q) => {
                let n = self.norm()?;
                Ok(Self::quad_raw(&q.a / &n, -(&q.b / &n), q.d.clone()))
            }
            Scalar::Approx(a) => a.inv().map(Scalar::Approx),
        }
    }

    /// Checked addition.
    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar, NumError> {
        self.lin(o, true)
    }

    /// Checked subtraction.
    pub fn checked_sub(&self, o: &Scalar) -> Result<Scalar, NumError> {
        self.lin(o, false)
    }

    fn lin(&self, o: &Scalar, add: bool) -> Result<Scalar, NumError> {
        let f = |x: &Rational, y: &Rational| if add { x + y } else { x - y };
        match (self, o) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(f(x, y))),
            (Scalar::Quad(x), Scalar::Rational(y)) => {
                Ok(Self::quad_raw(f(&x.a, y), x.b.clone(), x.d.clone()))
            }
            (Scalar::Rational(x), Scalar::Quad(y)) => Ok(Self::quad_raw(
                f(x, &y.a),
                if add { y.b.clone() } else { -y.b.clone() },
                y.d.clone(),
            )),
            (Scalar::Quad(x), Scalar::Quad(y)) => {
                same_field(&x.d, &y.d)?;
                Ok(Self::quad_raw(f(&x.a, &y.a), f(&x.b, &y.b), x.d.clone()))
            }
            (Scalar::Approx(x), Scalar::Approx(y)) => Ok(Scalar::Approx(if add {
                x.add(y)
            } else {
                x.sub(y)
            })),
            _ => Err(mixed(self, o)),
        }
    }

    /// Checked multiplication.
    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar, NumError> {
        match (self, o) {
            (Scalar::Rational(x), Scalar::Rational(y)) => Ok(Scalar::Rational(x * y)),
            (Scalar::Quad(x), Scalar::Rational(y)) | (Scalar::Rational(y), Scalar::Quad(x)) => {
                Ok(Self::quad_raw(&x.a * y, &x.b * y, x.d.clone()))
            }
            (Scalar::Quad(x), Scalar::Quad(y)) => {
                same_field(&x.d, &y.d)?;
                let d = Rational::from_integer(x.d.clone());
                let a = &x.a * &y.a + &x.b * &y.b * d;
                let b = &x.a * &y.b + &y.a * &x.b;
                Ok(Self::quad_raw(a, b, x.d.clone()))
            }
            (Scalar::Approx(x), Scalar::Approx(y)) => Ok(Scalar::Approx(x.mul(y))),
            _ => Err(mixed(self, o)),
        }
    }

    /// Checked division.
    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar, NumError> {
        if self.is_exact() != o.is_exact() {
            return Err(mixed(self, o));
        }
        self.checked_mul(&o.checked_inv()?)
    }

    /// Integer power (negative exponents invert).
    pub fn pow(&self, e: i64) -> Scalar {
        if e < 0 {
            return self.pow(-e).checked_inv().expect("power of zero with negative exponent");
        }
        let mut base = self.clone();
        let mut acc = Scalar::one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Explicit one-way promotion to the approximate variant at `prec` bits.
    pub fn to_approx(&self, prec: usize) -> Scalar {
        Scalar::Approx(Approx::from_scalar(self, prec))
    }

    /// Approximate value as `f64` pair `(re, im)`; convenience for display and
    /// SVG output only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        match self {
            Scalar::Rational(r) => (r.to_f64().unwrap_or(f64::NAN), 0.0),
            Scalar::Quad(q) => {
                let a = q.a.to_f64().unwrap_or(f64::NAN);
                let b = q.b.to_f64().unwrap_or(f64::NAN);
                let d = q.d.to_f64().unwrap_or(f64::NAN);
                if d >= 0.0 {
                    (a + b * d.sqrt(), 0.0)
                } else {
                    (a, b * (-d).sqrt())
                }
            }
            Scalar::Approx(x) => x.to_f64_pair(),
        }
    }

    /// Decimal rendering at `prec` bits (used by `--approx` output).
    pub fn to_decimal_string(&self, prec: usize) -> String {
        match self {
            Scalar::Approx(a) => a.to_string(),
            _ => Approx::from_scalar(self, prec).to_string(),
        }
    }
}

fn same_field(d1: &BigInt, d2: &BigInt) -> Result<(), NumError> {
    if d1 == d2 {
        Ok(())
    } else {
        Err(NumError::MixedField {
            left: format!("Q(sqrt({d1}))"),
            right: format!("Q(sqrt({d2}))"),
        })
    }
}

fn field_name(s: &Scalar) -> String {
    match s {
        Scalar::Rational(_) => "Q".into(),
        Scalar::Quad(q) => format!("Q(sqrt({}))", q.d),
        Scalar::Approx(_) => "approx".into(),
    }
}

fn mixed(a: &Scalar, b: &Scalar) -> NumError {
    NumError::MixedField {
        left: field_name(a),
        right: field_name(b),
    }
}

fn sign_of(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rational_sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(r.numer())?;
    let d = int_sqrt_exact(r.denom())?;
    Some(Rational::new(n, d))
}

/// Exact square root of a non-negative integer, if it is a perfect square.
pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Trial-division bound used by [`square_free_decompose`].
const TRIAL_BOUND: u64 = 1 << 16;

/// Write `n = s²·d` with `d` square-free (sign carried by `d`).
///
/// Square factors are removed by trial division up to 2¹⁶ followed by a
/// perfect-square test on the cofactor, which is exact whenever the cofactor
/// is below 2⁴⁸. Larger cofactors are kept as they are; the returned `d` then
/// still generates the right field but may carry an undetected square factor.
pub fn square_free_decompose(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "square-free part of zero");
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut s = BigInt::one();
    let mut d = BigInt::one();
    let mut p: u64 = 2;
    while p <= TRIAL_BOUND {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            s *= bp.pow(e / 2);
            if e % 2 == 1 {
                d *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(r) = int_sqrt_exact(&m) {
        s *= r;
    } else {
        d *= m;
    }
    (s, d * sign)
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rational(x), Scalar::Rational(y)) => x == y,
            (Scalar::Quad(x), Scalar::Quad(y)) => x == y,
            (Scalar::Approx(x), Scalar::Approx(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Scalar::Rational(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Scalar::Quad(q) => {
                1u8.hash(state);
                q.hash(state);
            }
            Scalar::Approx(a) => {
                2u8.hash(state);
                a.to_string().hash(state);
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::Rational(Rational::from_integer(n))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("scalar {}: {e}", stringify!($m)),
                }
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r.clone()),
            Scalar::Quad(q) => Scalar::Quad(Quad {
                a: -q.a.clone(),
                b: -q.b.clone(),
                d: q.d.clone(),
            }),
            Scalar::Approx(a) => Scalar::Approx(a.neg()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    /// Rationals print as `p` or `p/q`; quadratic irrationals as
    /// `a+b*sqrt(d)` (omitting zero or unit parts).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", fmt_rational(r)),
            Scalar::Quad(q) => {
                let root = format!("sqrt({})", q.d);
                let babs = q.b.abs();
                let bpart = if babs.is_one() {
                    root
                } else {
                    format!("{}*{root}", fmt_rational(&babs))
                };
                let neg = q.b.is_negative();
                if q.a.is_zero() {
                    write!(f, "{}{bpart}", if neg { "-" } else { "" })
                } else {
                    write!(f, "{}{}{bpart}", fmt_rational(&q.a), if neg { "-" } else { "+" })
                }
            }
            Scalar::Approx(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = NumError;

    /// Parse an integer `n`, a fraction `p/q`, or a finite decimal `x.y`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_rational(s).map(Scalar::Rational)
    }
}

/// Parse `n`, `p/q`, or a finite decimal such as `-1.25` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, NumError> {
    let s = s.trim();
    let bad = || NumError::Parse(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{ip}{fp}");
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = BigInt::from(10).pow(fp.len() as u32);
        return Ok(Rational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Render a rational as `p` or `p/q`.
pub fn rational_to_string(r: &Rational) -> String {
    fmt_rational(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_addition() {
        assert_eq!(Scalar::ratio(1, 2) + Scalar::ratio(1, 3), Scalar::ratio(5, 6));
    }

    #[test]
    fn eisenstein_norm_and_minimal_polynomial() {
        let w = Scalar::quad(rat(1, 2), rat(1, 2), BigInt::from(-3)).unwrap();
        let wb = w.conjugate().unwrap();
        assert_eq!(&w * &wb, Scalar::one());
        let e = Scalar::eisenstein_unit();
        assert_eq!(&e * &e + &e + Scalar::one(), Scalar::zero());
    }

    #[test]
    fn conjugation_examples() {
        let z = Scalar::int(2) + Scalar::int(3) * Scalar::i();
        assert_eq!(z.conjugate().unwrap(), Scalar::int(2) - Scalar::int(3) * Scalar::i());
        assert_eq!(Scalar::ratio(5, 7).conjugate().unwrap(), Scalar::ratio(5, 7));
        let e = Scalar::eisenstein_unit();
        assert_eq!(&e * &e.conjugate().unwrap(), Scalar::one());
    }

    #[test]
    fn collapse_to_rational() {
        let r = Scalar::sqrt_int(2) * Scalar::sqrt_int(2);
        assert!(r.is_rational());
        assert_eq!(r, Scalar::int(2));
        assert_eq!(Scalar::sqrt_int(12).to_string(), "2*sqrt(3)");
        assert_eq!(Scalar::sqrt_int(9), Scalar::int(3));
    }

    #[test]
    fn division_by_zero_and_mixing_are_errors() {
        assert_eq!(
            Scalar::one().checked_div(&Scalar::zero()),
            Err(NumError::DivisionByZero)
        );
        let e = Scalar::sqrt_int(2).checked_add(&Scalar::sqrt_int(3));
        assert!(matches!(e, Err(NumError::MixedField { .. })));
        let e = Scalar::one().checked_add(&Scalar::one().to_approx(128));
        assert!(matches!(e, Err(NumError::MixedField { .. })));
    }

    #[test]
    fn real_quadratic_sign() {
        let x = Scalar::int(3) - Scalar::int(2) * Scalar::sqrt_int(2); // 3 − 2.83 > 0
        assert_eq!(x.signum().unwrap(), 1);
        let y = Scalar::int(1) - Scalar::sqrt_int(2);
        assert_eq!(y.signum().unwrap(), -1);
        assert_eq!(Scalar::i().signum(), Err(NumError::NotReal));
    }

    #[test]
    fn square_roots_inside_the_field() {
        let x = Scalar::int(3) + Scalar::int(2) * Scalar::sqrt_int(2); // (1+√2)²
        let r = x.sqrt_in_field().unwrap().unwrap();
        assert_eq!(&r * &r, x);
        assert_eq!(Scalar::sqrt_int(2).sqrt_in_field().unwrap(), None);
        let c = Scalar::sqrt_rational(&rat(-3, 4)).unwrap();
        assert_eq!(&c * &c, Scalar::ratio(-3, 4));
    }

    #[test]
    fn square_free_parts() {
        assert_eq!(
            square_free_decompose(&BigInt::from(-72)),
            (BigInt::from(6), BigInt::from(-2))
        );
        let big = BigInt::from(1_000_003u64) * BigInt::from(1_000_003u64) * BigInt::from(5);
        assert_eq!(square_free_decompose(&big), (BigInt::from(1_000_003u64), BigInt::from(5)));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("13/6".parse::<Scalar>().unwrap(), Scalar::ratio(13, 6));
        assert_eq!("-1.25".parse::<Scalar>().unwrap(), Scalar::ratio(-5, 4));
        assert_eq!(Scalar::eisenstein_unit().to_string(), "-1/2+1/2*sqrt(-3)");
        assert!("x".parse::<Scalar>().is_err());
    }
}
