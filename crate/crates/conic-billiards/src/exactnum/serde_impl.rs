//! JSON encoding of scalars with string-encoded integers (no 64-bit
//! truncation): `{"num": "..", "den": ".."}` for rationals,
//! `{"a": r, "b": r, "d": ".."}` for `a + b√d`, and `{"re": "..", "im": ".."}`
//! for approximate values (decimal strings, read back at the working
//! precision). On input a rational may also be written as a plain string
//! such as `"-3/4"`.

use astro_float::BigFloat;
use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::approx::{float_from_rational, precision_bits, Approx};
use super::scalar::{parse_rational, Rational, Scalar};

#[derive(Serialize, Deserialize)]
struct RatRepr {
    num: String,
    den: String,
}

impl RatRepr {
    fn from_rational(r: &Rational) -> Self {
        RatRepr { num: r.numer().to_string(), den: r.denom().to_string() }
    }
    fn to_rational(&self) -> Result<Rational, String> {
        let n: BigInt = self.num.parse().map_err(|_| format!("bad numerator {}", self.num))?;
        let d: BigInt = self.den.parse().map_err(|_| format!("bad denominator {}", self.den))?;
        if d == BigInt::from(0) {
            return Err("zero denominator".into());
        }
        Ok(Rational::new(n, d))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Rat(RatRepr),
    Quad { a: RatRepr, b: RatRepr, d: String },
    Approx { re: String, im: String },
    Text(String),
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            Scalar::Rational(r) => Repr::Rat(RatRepr::from_rational(r)),
            Scalar::Quad(q) => Repr::Quad {
                a: RatRepr::from_rational(q.a()),
                b: RatRepr::from_rational(q.b()),
                d: q.d().to_string(),
            },
            Scalar::Approx(a) => Repr::Approx { re: a.re().to_string(), im: a.im().to_string() },
        };
        repr.serialize(s)
    }
}

fn parse_float(text: &str, prec: usize) -> Result<BigFloat, String> {
    // Decimal text is converted through an exact rational to avoid parser
    // rounding surprises on exponent notation.
    let (mantissa, exp) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().map_err(|_| format!("bad exponent in {text}"))?),
        None => (text, 0),
    };
    let r = parse_rational(mantissa).map_err(|e| e.to_string())?;
    let ten = Rational::from_integer(BigInt::from(10));
    let scale = if exp >= 0 {
        num_traits::pow(ten, exp as usize)
    } else {
        num_traits::pow(ten, (-exp) as usize).recip()
    };
    Ok(float_from_rational(&(r * scale), prec))
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match Repr::deserialize(d)? {
            Repr::Rat(r) => r.to_rational().map(Scalar::Rational).map_err(D::Error::custom),
            Repr::Quad { a, b, d } => {
                let a = a.to_rational().map_err(D::Error::custom)?;
                let b = b.to_rational().map_err(D::Error::custom)?;
                let d: BigInt = d.parse().map_err(|_| D::Error::custom("bad radicand"))?;
                Scalar::quad(a, b, d).map_err(D::Error::custom)
            }
            Repr::Text(t) => parse_rational(&t).map(Scalar::Rational).map_err(D::Error::custom),
            Repr::Approx { re, im } => {
                let p = precision_bits();
                let re = parse_float(&re, p).map_err(D::Error::custom)?;
                let im = parse_float(&im, p).map_err(D::Error::custom)?;
                Ok(Scalar::Approx(Approx::new(re, im, p)))
            }
        }
    }
}
