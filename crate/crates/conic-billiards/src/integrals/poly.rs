//! Sparse exact polynomials in three variables and dense univariate
//! polynomials and rational functions over [`Scalar`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exactnum::{NumError, Rational, Scalar};

/// Exponent triple of a monomial `z^a w^b t^c`.
pub type Exponent = [u32; 3];

/// Default variable names used when printing a [`Poly`].
pub const ZWT: [&str; 3] = ["z", "w", "t"];

/// A sparse polynomial in three variables (by default named `z, w, t`) with
/// exact coefficients. No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Exponent, Scalar>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero() -> Poly {
        Poly::default()
    }

    /// A constant.
    pub fn constant(c: Scalar) -> Poly {
        Poly::monomial([0, 0, 0], c)
    }

    /// The constant one.
    pub fn one() -> Poly {
        Poly::constant(Scalar::one())
    }

    /// `c · z^e₀ w^e₁ t^e₂`.
    pub fn monomial(e: Exponent, c: Scalar) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// The variable with index `i` (0 = z, 1 = w, 2 = t).
    pub fn var(i: usize) -> Poly {
        let mut e = [0; 3];
        e[i] = 1;
        Poly::monomial(e, Scalar::one())
    }

    /// The variable `z`.
    pub fn z() -> Poly {
        Poly::var(0)
    }

    /// The variable `w`.
    pub fn w() -> Poly {
        Poly::var(1)
    }

    /// The variable `t`.
    pub fn t() -> Poly {
        Poly::var(2)
    }

    /// Build from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I: IntoIterator<Item = (Exponent, Scalar)>>(it: I) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in it {
            p.add_term(e, &c);
        }
        p
    }

    /// Build from integer-coefficient terms (convenience for literals).
    pub fn from_int_terms(terms: &[(Exponent, i64)]) -> Poly {
        Poly::from_terms(terms.iter().map(|&(e, c)| (e, Scalar::int(c))))
    }

    fn add_term(&mut self, e: Exponent, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate over `(exponent, coefficient)` in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True if the polynomial has no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a monomial (zero when absent).
    pub fn coeff(&self, e: &Exponent) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Total degree (`None` for zero).
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e[0] + e[1] + e[2]).max()
    }

    /// Degree in variable `i` (`None` for zero).
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Lowest exponent of variable `i` over all terms (`None` for zero).
    pub fn min_degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).min()
    }

    /// `Some(d)` iff every term has total degree `d`.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e[0] + e[1] + e[2]);
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiply by the monomial `z^e₀ w^e₁ t^e₂`.
    pub fn shift(&self, e: Exponent) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| ([k[0] + e[0], k[1] + e[1], k[2] + e[2]], v.clone()))
                .collect(),
        }
    }

    /// Non-negative integer power.
    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn deriv(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = *e;
            f[i] -= 1;
            out.add_term(f, &(c * &Scalar::int(e[i] as i64)));
        }
        out
    }

    /// Evaluate at a point.
    pub fn eval(&self, x: &[Scalar; 3]) -> Scalar {
        self.try_eval(x).unwrap_or_else(|e| panic!("polynomial evaluation: {e}"))
    }

    /// Evaluate at a point, reporting field mismatches.
    pub fn try_eval(&self, x: &[Scalar; 3]) -> Result<Scalar, NumError> {
        let mut powers: [Vec<Scalar>; 3] = Default::default();
        for (i, pw) in powers.iter_mut().enumerate() {
            let max = self.degree_in(i).unwrap_or(0) as usize;
            pw.push(Scalar::one());
            for k in 1..=max {
                let next = pw[k - 1].checked_mul(&x[i])?;
                pw.push(next);
            }
        }
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let m = c
                .checked_mul(&powers[0][e[0] as usize])?
                .checked_mul(&powers[1][e[1] as usize])?
                .checked_mul(&powers[2][e[2] as usize])?;
            acc = acc.checked_add(&m)?;
        }
        Ok(acc)
    }

    /// Substitute polynomials for the three variables.
    pub fn substitute(&self, s: &[Poly; 3]) -> Poly {
        let mut powers: [Vec<Poly>; 3] = Default::default();
        for (i, pw) in powers.iter_mut().enumerate() {
            let max = self.degree_in(i).unwrap_or(0) as usize;
            pw.push(Poly::one());
            for k in 1..=max {
                let next = &pw[k - 1] * &s[i];
                pw.push(next);
            }
        }
        let mut acc = Poly::zero();
        for (e, c) in &self.terms {
            let m = (&(&powers[0][e[0] as usize] * &powers[1][e[1] as usize])
                * &powers[2][e[2] as usize])
                .scale(c);
            acc = &acc + &m;
        }
        acc
    }

    /// Substitute univariate polynomials for the three variables.
    pub fn substitute_uni(&self, s: &[UniPoly; 3]) -> UniPoly {
        let mut powers: [Vec<UniPoly>; 3] = Default::default();
        for (i, pw) in powers.iter_mut().enumerate() {
            let max = self.degree_in(i).unwrap_or(0) as usize;
            pw.push(UniPoly::one());
            for k in 1..=max {
                let next = &pw[k - 1] * &s[i];
                pw.push(next);
            }
        }
        let mut acc = UniPoly::zero();
        for (e, c) in &self.terms {
            let m = (&(&powers[0][e[0] as usize] * &powers[1][e[1] as usize])
                * &powers[2][e[2] as usize])
                .scale(c);
            acc = &acc + &m;
        }
        acc
    }

    /// Linear change of variables `x ↦ M·x`: variable `i` is replaced by
    /// `Σ_j M[i][j] x_j`. This is the pull-back `P ∘ M`.
    pub fn linear_change(&self, m: &[[Scalar; 3]; 3]) -> Poly {
        let forms: [Poly; 3] = std::array::from_fn(|i| {
            Poly::from_terms((0..3).map(|j| {
                let mut e = [0; 3];
                e[j] = 1;
                (e, m[i][j].clone())
            }))
        });
        self.substitute(&forms)
    }

    /// Permute variables: the result's variable `perm[i]` takes the role of
    /// this polynomial's variable `i`.
    pub fn permute(&self, perm: [usize; 3]) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = [0; 3];
                    for i in 0..3 {
                        f[perm[i]] = e[i];
                    }
                    (f, c.clone())
                })
                .collect(),
        }
    }

    /// Homogenise with respect to the third variable to degree `deg`:
    /// each term `z^a w^b t^c` is multiplied by `t^(deg − a − b − c)`.
    ///
    /// # Panics
    /// If some term already exceeds `deg`.
    pub fn homogenize(&self, deg: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let s = e[0] + e[1] + e[2];
                    assert!(s <= deg, "term degree {s} exceeds homogenisation degree {deg}");
                    ([e[0], e[1], e[2] + deg - s], c.clone())
                })
                .collect(),
        }
    }

    /// Set the third variable to one (dehomogenise to the chart `t = 1`).
    pub fn dehomogenize(&self) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(e, c)| ([e[0], e[1], 0], c.clone())))
    }

    /// True when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(Scalar::is_rational)
    }

    /// Exact division by a nonzero constant.
    pub fn div_scalar(&self, c: &Scalar) -> Poly {
        self.scale(&c.checked_inv().expect("division of a polynomial by zero"))
    }

    /// Render with custom variable names.
    pub fn to_string_with(&self, names: [&str; 3]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // Print highest total degree first for readability.
        let mut keys: Vec<&Exponent> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da = a[0] + a[1] + a[2];
            let db = b[0] + b[1] + b[2];
            db.cmp(&da).then(b.cmp(a))
        });
        for (k, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let mono: Vec<String> = (0..3)
                .filter(|&i| e[i] > 0)
                .map(|i| if e[i] == 1 { names[i].to_string() } else { format!("{}^{}", names[i], e[i]) })
                .collect();
            let mono = mono.join("*");
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if c.is_rational() => (true, rest.to_string()),
                _ => (false, if c.is_rational() { cs.clone() } else { format!("({cs})") }),
            };
            let term = if mono.is_empty() {
                body
            } else if body == "1" {
                mono
            } else {
                format!("{body}*{mono}")
            };
            if k == 0 {
                out.push_str(if neg { "-" } else { "" });
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(ZWT))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c);
        }
        r
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, &-c);
        }
        r
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], &(c1 * c2));
            }
        }
        r
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add<$t> for $t {
            type Output = $t;
            fn add(self, o: $t) -> $t {
                &self + &o
            }
        }
        impl Sub<$t> for $t {
            type Output = $t;
            fn sub(self, o: $t) -> $t {
                &self - &o
            }
        }
        impl Mul<$t> for $t {
            type Output = $t;
            fn mul(self, o: $t) -> $t {
                &self * &o
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }
    };
}

owned_ops!(Poly);
owned_ops!(UniPoly);

#[derive(Serialize, Deserialize)]
struct TermRepr {
    e: Exponent,
    coef: Scalar,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(e, c)| TermRepr { e: *e, coef: c.clone() })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<TermRepr>::deserialize(d)?;
        Ok(Poly::from_terms(v.into_iter().map(|t| (t.e, t.coef))))
    }
}

/// A dense univariate polynomial (coefficients from low to high degree, no
/// trailing zeros).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    c: Vec<Scalar>,
}

impl UniPoly {
    /// Build from coefficients `c[0] + c[1] x + …`.
    pub fn new(c: Vec<Scalar>) -> UniPoly {
        let mut p = UniPoly { c };
        p.trim();
        p
    }

    /// Build from integer coefficients.
    pub fn from_ints(c: &[i64]) -> UniPoly {
        UniPoly::new(c.iter().map(|&x| Scalar::int(x)).collect())
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(Scalar::is_zero) {
            self.c.pop();
        }
    }

    /// Zero.
    pub fn zero() -> UniPoly {
        UniPoly { c: vec![] }
    }

    /// One.
    pub fn one() -> UniPoly {
        UniPoly::constant(Scalar::one())
    }

    /// A constant.
    pub fn constant(c: Scalar) -> UniPoly {
        UniPoly::new(vec![c])
    }

    /// The monomial `x^k`.
    pub fn monomial(k: usize) -> UniPoly {
        let mut c = vec![Scalar::zero(); k + 1];
        c[k] = Scalar::one();
        UniPoly::new(c)
    }

    /// The variable `x`.
    pub fn x() -> UniPoly {
        UniPoly::new(vec![Scalar::zero(), Scalar::one()])
    }

    /// `a x + b`.
    pub fn linear(a: Scalar, b: Scalar) -> UniPoly {
        UniPoly::new(vec![b, a])
    }

    /// Coefficients from low to high degree.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Scalar {
        self.c.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Degree (`None` for zero).
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// True for zero.
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Leading coefficient (zero for the zero polynomial).
    pub fn lead(&self) -> Scalar {
        self.c.last().cloned().unwrap_or_else(Scalar::zero)
    }

    /// Multiply by a scalar.
    pub fn scale(&self, s: &Scalar) -> UniPoly {
        UniPoly::new(self.c.iter().map(|x| x * s).collect())
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().checked_inv().expect("nonzero lead"))
    }

    /// Non-negative integer power.
    pub fn pow(&self, n: u32) -> UniPoly {
        let mut acc = UniPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate at `x` (Horner).
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Evaluate, reporting field mismatches.
    pub fn try_eval(&self, x: &Scalar) -> Result<Scalar, NumError> {
        let mut acc = Scalar::zero();
        for c in self.c.iter().rev() {
            acc = acc.checked_mul(x)?.checked_add(c)?;
        }
        Ok(acc)
    }

    /// Homogeneous evaluation of the degree-`n` binary form
    /// `Σ c_k X^k Y^(n−k)` at `(X, Y)`.
    pub fn eval_homogeneous(&self, n: usize, x: &Scalar, y: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for k in 0..=n {
            let c = self.coeff(k);
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(&(&c * &x.pow(k as i64)) * &y.pow((n - k) as i64));
        }
        acc
    }

    /// Derivative.
    pub fn deriv(&self) -> UniPoly {
        UniPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::int(k as i64))
                .collect(),
        )
    }

    /// Composition `self(g(x))`.
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.c.iter().rev() {
            acc = &(&acc * g) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Quotient and remainder.
    ///
    /// # Panics
    /// If `d` is zero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("polynomial division by zero");
        let inv = d.lead().checked_inv().expect("nonzero lead");
        let mut r = self.c.clone();
        let n = self.c.len();
        if n <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Scalar::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let coef = &r[k + dd] * &inv;
            if coef.is_zero() {
                continue;
            }
            for j in 0..=dd {
                r[k + j] = &r[k + j] - &(&coef * &d.c[j]);
            }
            q[k] = coef;
        }
        (UniPoly::new(q), UniPoly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free decomposition `f = lc · Π a_i^i` (Yun's algorithm); returns
    /// the non-constant `(a_i, i)`.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.deriv();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let c = df.div_rem(&a0).0;
        let mut d = &c - &b.deriv();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let nb = b.div_rem(&a).0;
            let nc = d.div_rem(&a).0;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            b = nb;
            d = &nc - &b.deriv();
            i += 1;
        }
        out
    }

    /// All roots with multiplicity, provided they lie in ℚ or in a single
    /// quadratic field compatible with the coefficients.
    ///
    /// Supported: linear and quadratic square-free parts over any exact field,
    /// and higher-degree parts with rational coefficients whose irreducible
    /// factors beyond rational roots have degree ≤ 2.
    pub fn roots(&self) -> Result<Vec<(Scalar, usize)>, NumError> {
        if self.is_zero() {
            return Err(NumError::NotRepresentable("roots of the zero polynomial".into()));
        }
        let mut out = Vec::new();
        let zeros = self.c.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            out.push((Scalar::zero(), zeros));
        }
        let rest = UniPoly::new(self.c[zeros..].to_vec());
        for (f, m) in rest.squarefree_decomposition() {
            for r in f.roots_squarefree()? {
                out.push((r, m));
            }
        }
        Ok(out)
    }

    fn roots_squarefree(&self) -> Result<Vec<Scalar>, NumError> {
        match self.degree() {
            None | Some(0) => Ok(vec![]),
            Some(1) => Ok(vec![(-&self.c[0]).checked_div(&self.c[1])?]),
            Some(2) => quadratic_roots(&self.c[2], &self.c[1], &self.c[0]),
            Some(n) => {
                if !self.c.iter().all(Scalar::is_rational) {
                    return Err(NumError::NotRepresentable(format!(
                        "degree-{n} factor with irrational coefficients"
                    )));
                }
                let mut roots = rational_roots(self)?;
                let mut rest = self.clone();
                for r in &roots {
                    rest = rest.div_rem(&UniPoly::linear(Scalar::one(), -r)).0;
                }
                match rest.degree() {
                    Some(d) if d > 2 => Err(NumError::NotRepresentable(format!(
                        "irreducible factor of degree {d}"
                    ))),
                    _ => {
                        roots.extend(rest.roots_squarefree()?);
                        Ok(roots)
                    }
                }
            }
        }
    }

    /// True when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.c.iter().all(Scalar::is_rational)
    }

    /// Render with a variable name.
    pub fn to_string_var(&self, var: &str) -> String {
        let mut p = Poly::zero();
        for (k, c) in self.c.iter().enumerate() {
            p = &p + &Poly::monomial([k as u32, 0, 0], c.clone());
        }
        p.to_string_with([var, "_", "_"])
    }
}

/// Roots of `a x² + b x + c` in the field generated by the coefficients and
/// the square root of the discriminant.
pub fn quadratic_roots(a: &Scalar, b: &Scalar, c: &Scalar) -> Result<Vec<Scalar>, NumError> {
    let disc = b.checked_mul(b)?.checked_sub(&Scalar::int(4).checked_mul(a)?.checked_mul(c)?)?;
    let s = disc
        .sqrt_in_field()?
        .ok_or_else(|| NumError::NotRepresentable(format!("square root of {disc}")))?;
    let two_a = Scalar::int(2).checked_mul(a)?;
    let mb = -b;
    let r1 = mb.checked_add(&s)?.checked_div(&two_a)?;
    let r2 = mb.checked_sub(&s)?.checked_div(&two_a)?;
    Ok(vec![r1, r2])
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, NumError> {
    let n = n.abs();
    let v = n
        .to_u64()
        .filter(|&v| v <= DIVISOR_LIMIT)
        .ok_or_else(|| NumError::NotRepresentable("coefficients too large for rational-root search".into()))?;
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= v {
        if v % k == 0 {
            out.push(BigInt::from(k));
            if k * k != v {
                out.push(BigInt::from(v / k));
            }
        }
        k += 1;
    }
    Ok(out)
}

fn rational_roots(p: &UniPoly) -> Result<Vec<Scalar>, NumError> {
    // Clear denominators to integer coefficients.
    let mut l = BigInt::one();
    for c in &p.c {
        let r = c.as_rational().expect("rational coefficients");
        l = l.lcm(r.denom());
    }
    let ints: Vec<BigInt> = p
        .c
        .iter()
        .map(|c| (c.as_rational().unwrap() * Rational::from_integer(l.clone())).to_integer())
        .collect();
    let a0 = &ints[0];
    let an = ints.last().unwrap();
    if a0.is_zero() {
        return Err(NumError::NotRepresentable("zero root not stripped".into()));
    }
    let mut roots = Vec::new();
    for pnum in divisors(a0)? {
        for q in divisors(an)? {
            for sign in [1, -1] {
                let cand = Scalar::from_rational(Rational::new(&pnum * sign, q.clone()));
                if p.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    Ok(roots)
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        UniPoly::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut r = vec![Scalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] = &r[i + j] + &(a * b);
            }
        }
        UniPoly::new(r)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.c.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

/// A univariate rational function `num / den` (not necessarily reduced).
///
/// Derived equality is structural; use [`RatFn::same_function`] to compare
/// values.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFn {
    /// Numerator.
    pub num: UniPoly,
    /// Denominator (nonzero).
    pub den: UniPoly,
}

impl RatFn {
    /// Build `num / den`.
    ///
    /// # Panics
    /// If `den` is zero.
    pub fn new(num: UniPoly, den: UniPoly) -> RatFn {
        assert!(!den.is_zero(), "rational function with zero denominator");
        RatFn { num, den }
    }

    /// A polynomial viewed as a rational function.
    pub fn poly(p: UniPoly) -> RatFn {
        RatFn::new(p, UniPoly::one())
    }

    /// Value at `x`, `None` at a pole.
    pub fn eval(&self, x: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Equality of rational functions by cross-multiplication.
    pub fn same_function(&self, o: &RatFn) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    /// `F ∘ m` for the Möbius map `m = [[a, b], [c, d]]` acting by
    /// `x ↦ (a x + b)/(c x + d)`.
    pub fn compose_mobius(&self, m: &[[Scalar; 2]; 2]) -> RatFn {
        let n = self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0));
        let x = UniPoly::linear(m[0][0].clone(), m[0][1].clone());
        let y = UniPoly::linear(m[1][0].clone(), m[1][1].clone());
        let hom = |p: &UniPoly| {
            let mut acc = UniPoly::zero();
            for k in 0..=n {
                let c = p.coeff(k);
                if c.is_zero() {
                    continue;
                }
                acc = &acc + &(&x.pow(k as u32) * &y.pow((n - k) as u32)).scale(&c);
            }
            acc
        };
        RatFn::new(hom(&self.num), hom(&self.den))
    }

    /// Render as `(num)/(den)` in the given variable.
    pub fn to_string_var(&self, var: &str) -> String {
        if self.den == UniPoly::one() {
            self.num.to_string_var(var)
        } else {
            format!("({})/({})", self.num.to_string_var(var), self.den.to_string_var(var))
        }
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("z"))
    }
}
