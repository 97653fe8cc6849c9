//! Exact rationals, evaluation points and univariate interpolation.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{precondition, Error, Result};
use crate::vertex::Mutation;

/// An exact rational number in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `numer / denom`, rejecting a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Scalar(&self.0 / &rhs.0))
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut acc = BigRational::one();
        let mut base = self.0.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(Scalar(acc))
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// A rational with numerator and denominator uniform in `[1, bounds]`.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R, bounds: u32) -> Self {
        let p = rng.random_range(1..=bounds as i64);
        let q = rng.random_range(1..=bounds as i64);
        Scalar(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            None => Ok(Scalar(BigRational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?))),
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar(BigRational::new(p, q)))
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p/q\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
                v.parse().map_err(|e: Error| E::custom(e))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::from_int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
                Ok(Scalar(BigRational::from_integer(BigInt::from(v))))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign_tr:ident, $assign_method:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$method(rhs.0))
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar(self.0.$method(&rhs.0))
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar((&self.0).$method(rhs.0))
            }
        }
        impl $tr<i64> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: i64) -> Scalar {
                self.$method(Scalar::from_int(rhs))
            }
        }
        impl $tr<i64> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: i64) -> Scalar {
                self.$method(Scalar::from_int(rhs))
            }
        }
        impl $tr<Scalar> for i64 {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar::from_int(self).$method(rhs)
            }
        }
        impl $tr<&Scalar> for i64 {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar::from_int(self).$method(rhs)
            }
        }
        impl $assign_tr<&Scalar> for Scalar {
            fn $assign_method(&mut self, rhs: &Scalar) {
                self.0.$assign_method(&rhs.0);
            }
        }
        impl $assign_tr<Scalar> for Scalar {
            fn $assign_method(&mut self, rhs: Scalar) {
                self.0.$assign_method(rhs.0);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a Scalar> for Scalar {
    fn product<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

/// Boundary type of the model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    I,
    II,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::I => "I",
            Kind::II => "II",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(Kind::I),
            "II" | "2" => Ok(Kind::II),
            _ => Err(Error::Parse(s.to_string())),
        }
    }
}

/// A full evaluation point.
///
/// `alpha` and `gamma` are indexed `0..=m`; index 0 is the type I boundary
/// pair `(α₀, γ₀)`. For type II points `u` and `w` are present with
/// `t = -u²` and `z_j = w_j²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamPoint {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub t: Scalar,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Scalar>,
    pub z: Vec<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<Scalar>>,
    pub alpha: Vec<Scalar>,
    pub gamma: Vec<Scalar>,
    /// Deliberate weight corruption used by the mutation harness.
    #[serde(skip)]
    pub mutation: Option<Mutation>,
}

impl ParamPoint {
    pub fn type_one(t: Scalar, z: Vec<Scalar>, alpha: Vec<Scalar>, gamma: Vec<Scalar>) -> Result<Self> {
        let p = ParamPoint {
            m: alpha.len().saturating_sub(1),
            n: z.len(),
            t,
            u: None,
            z,
            w: None,
            alpha,
            gamma,
            mutation: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn type_two(u: Scalar, w: Vec<Scalar>, alpha: Vec<Scalar>, gamma: Vec<Scalar>) -> Result<Self> {
        let p = ParamPoint {
            m: alpha.len().saturating_sub(1),
            n: w.len(),
            t: -u.square(),
            z: w.iter().map(Scalar::square).collect(),
            u: Some(u),
            w: Some(w),
            alpha,
            gamma,
            mutation: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Zero site parameters on `m` sites.
    pub fn zeros(m: usize) -> Vec<Scalar> {
        vec![Scalar::zero(); m + 1]
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha.len() != self.m + 1 || self.gamma.len() != self.m + 1 {
            return precondition(format!("alpha and gamma must have length M+1 = {}", self.m + 1));
        }
        if self.z.len() != self.n {
            return precondition(format!("expected {} spectral parameters, got {}", self.n, self.z.len()));
        }
        if self.z.iter().any(Scalar::is_zero) {
            return precondition("spectral parameters must be nonzero");
        }
        match (&self.u, &self.w) {
            (None, None) => {}
            (Some(u), Some(w)) => {
                if u.is_zero() {
                    return precondition("u must be nonzero");
                }
                if -u.square() != self.t {
                    return precondition("t must equal -u^2");
                }
                if w.len() != self.n {
                    return precondition("w must have one entry per spectral parameter");
                }
                if w.iter().zip(&self.z).any(|(w, z)| &w.square() != z) {
                    return precondition("z_j must equal w_j^2");
                }
            }
            _ => return precondition("u and w must be given together"),
        }
        Ok(())
    }

    pub fn has_kind(&self, kind: Kind) -> bool {
        match kind {
            Kind::I => true,
            Kind::II => self.u.is_some() && self.w.is_some(),
        }
    }

    pub fn require(&self, kind: Kind) -> Result<()> {
        if self.has_kind(kind) {
            Ok(())
        } else {
            precondition("type II evaluation requires u and w")
        }
    }

    /// The spectral arguments the kind's double-row operators take: `z` for
    /// type I, `w` for type II.
    pub fn spectral(&self, kind: Kind) -> Result<&[Scalar]> {
        match kind {
            Kind::I => Ok(&self.z),
            Kind::II => self.w.as_deref().ok_or_else(|| Error::Precondition("type II evaluation requires w".into())),
        }
    }

    pub fn u(&self) -> Result<&Scalar> {
        self.u.as_ref().ok_or_else(|| Error::Precondition("type II evaluation requires u".into()))
    }

    /// Replace the spectral parameters, given in the kind's own variable.
    pub fn with_spectral(&self, kind: Kind, values: Vec<Scalar>) -> ParamPoint {
        let mut p = self.clone();
        p.n = values.len();
        match kind {
            Kind::I => {
                p.z = values;
                p.w = None;
                p.u = None;
            }
            Kind::II => {
                p.z = values.iter().map(Scalar::square).collect();
                p.w = Some(values);
            }
        }
        p
    }

    /// Keep the first `m` sites and the first `n` spectral parameters.
    pub fn truncated(&self, m: usize, n: usize) -> ParamPoint {
        let mut p = self.clone();
        p.m = m;
        p.n = n;
        p.alpha.truncate(m + 1);
        p.gamma.truncate(m + 1);
        p.z.truncate(n);
        if let Some(w) = p.w.as_mut() {
            w.truncate(n);
        }
        p
    }

    pub fn with_gamma(&self, j: usize, value: Scalar) -> ParamPoint {
        let mut p = self.clone();
        p.gamma[j] = value;
        p
    }

    pub fn with_mutation(&self, mutation: Option<Mutation>) -> ParamPoint {
        let mut p = self.clone();
        p.mutation = mutation;
        p
    }
}

const RETRY_BUDGET: usize = 1000;

/// The standard non-degeneracy conditions on `t` and the spectral set.
pub fn spectral_nondegenerate(t: &Scalar, z: &[Scalar]) -> bool {
    let one = Scalar::one();
    if t.is_zero() || t.abs() == one {
        return false;
    }
    for (j, a) in z.iter().enumerate() {
        if a.is_zero() || a.abs() == one {
            return false;
        }
        let ainv = a.inv().expect("nonzero");
        for (k, b) in z.iter().enumerate() {
            let binv = b.inv().expect("nonzero");
            if j != k && (a == b || &ainv == b) {
                return false;
            }
            let minus_one = -Scalar::one();
            if t * a * b == minus_one || t * a * &binv == minus_one {
                return false;
            }
        }
    }
    true
}

/// Draw a non-degenerate evaluation point; deterministic in `seed`.
pub fn sample_param_point(seed: u64, m: usize, n: usize, mode: Kind, bounds: u32) -> Result<ParamPoint> {
    if m < 1 {
        return precondition("M must be at least 1");
    }
    if bounds < 2 {
        return precondition("bounds must be at least 2");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RETRY_BUDGET {
        let alpha: Vec<Scalar> = (0..=m).map(|_| Scalar::sample(&mut rng, bounds)).collect();
        let gamma: Vec<Scalar> = (0..=m).map(|_| Scalar::sample(&mut rng, bounds)).collect();
        let point = match mode {
            Kind::I => {
                let t = Scalar::sample(&mut rng, bounds);
                let z: Vec<Scalar> = (0..n).map(|_| Scalar::sample(&mut rng, bounds)).collect();
                ParamPoint { m, n, t, u: None, z, w: None, alpha, gamma, mutation: None }
            }
            Kind::II => {
                let u = Scalar::sample(&mut rng, bounds);
                let w: Vec<Scalar> = (0..n).map(|_| Scalar::sample(&mut rng, bounds)).collect();
                ParamPoint {
                    m,
                    n,
                    t: -u.square(),
                    z: w.iter().map(Scalar::square).collect(),
                    u: Some(u),
                    w: Some(w),
                    alpha,
                    gamma,
                    mutation: None,
                }
            }
        };
        if spectral_nondegenerate(&point.t, &point.z) {
            return Ok(point);
        }
    }
    Err(Error::RetryBudget(RETRY_BUDGET))
}

/// Coefficients (lowest degree first) of the unique polynomial of degree
/// below `samples.len()` through the given points.
pub fn interpolate_univariate(samples: &[(Scalar, Scalar)]) -> Result<Vec<Scalar>> {
    if samples.is_empty() {
        return precondition("interpolation needs at least one sample");
    }
    for (i, (x, _)) in samples.iter().enumerate() {
        if samples[..i].iter().any(|(y, _)| y == x) {
            return Err(Error::DuplicateAbscissa(x.to_string()));
        }
    }
    // Newton divided differences, then expand the Newton basis.
    let n = samples.len();
    let xs: Vec<&Scalar> = samples.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<Scalar> = samples.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            dd[i] = num.checked_div(&(xs[i] - xs[i - level]))?;
        }
    }
    let mut coeffs = vec![Scalar::zero(); n];
    for i in (0..n).rev() {
        // coeffs <- coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![Scalar::zero(); n];
        for k in 0..n {
            if coeffs[k].is_zero() {
                continue;
            }
            if k + 1 < n {
                next[k + 1] += &coeffs[k];
            }
            next[k] -= &coeffs[k] * xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(Scalar::is_zero) {
        coeffs.pop();
    }
    if coeffs.len() == 1 && coeffs[0].is_zero() {
        coeffs.clear();
    }
    Ok(coeffs)
}

/// Horner evaluation of a coefficient list.
pub fn eval_poly(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
}

/// Degree of a trimmed coefficient list; `None` for the zero polynomial.
pub fn degree(coeffs: &[Scalar]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}
