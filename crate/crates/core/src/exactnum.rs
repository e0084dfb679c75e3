//! Exact arithmetic in the real quadratic field Q(sqrt 2).
//!
//! Every point, value and distance handled by this crate is a [`QuadExt`]
//! `a + b*sqrt2` with arbitrary-precision rational `a` and `b`. Because
//! `sqrt2` is irrational the representation is unique, so equality is
//! componentwise and the rational/irrational class of a value is read off
//! the `b` component.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form (positive denominator,
/// coprime parts).
pub type Rational = BigRational;

/// Builds the rational `num / den`.
///
/// Panics when `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Class of a real number: the corpus maps dispatch on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassTag {
    RationalPoint,
    IrrationalPoint,
}

impl ClassTag {
    pub const BOTH: [ClassTag; 2] = [ClassTag::RationalPoint, ClassTag::IrrationalPoint];

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::RationalPoint => "rational",
            ClassTag::IrrationalPoint => "irrational",
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The field operations exposed through [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact number `a + b*sqrt2`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadExt { a, b }
    }

    pub fn zero() -> Self {
        QuadExt::default()
    }

    pub fn one() -> Self {
        QuadExt::from_int(1)
    }

    pub fn sqrt2() -> Self {
        QuadExt::new(Rational::zero(), Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        QuadExt::new(Rational::from_integer(BigInt::from(n)), Rational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        QuadExt::new(rat(num, den), Rational::zero())
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt2_part(&self) -> &Rational {
        &self.b
    }

    /// The value as a plain rational, if it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn class(&self) -> ClassTag {
        class_of(self)
    }

    /// Exact sign: compares `a^2` with `2 b^2` when `a` and `b` disagree.
    pub fn signum(&self) -> Ordering {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (x, y) if x == y => x,
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let two_b2 = &self.b * &self.b * Rational::from_integer(BigInt::from(2));
                // a^2 == 2 b^2 is impossible for nonzero rationals
                if a2 > two_b2 {
                    sa
                } else {
                    sa.reverse()
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> QuadExt {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Algebraic conjugate `a - b*sqrt2`.
    pub fn conjugate(&self) -> QuadExt {
        QuadExt::new(self.a.clone(), -&self.b)
    }

    /// Field norm `a^2 - 2 b^2`, nonzero for every nonzero value.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(2))
    }

    pub fn recip(&self) -> Result<QuadExt> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        let c = self.conjugate();
        Ok(QuadExt::new(&c.a / &n, &c.b / &n))
    }

    pub fn checked_div(&self, rhs: &QuadExt) -> Result<QuadExt> {
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, k: &Rational) -> QuadExt {
        QuadExt::new(&self.a * k, &self.b * k)
    }

    pub fn half(&self) -> QuadExt {
        self.scale(&rat(1, 2))
    }

    pub fn midpoint(&self, other: &QuadExt) -> QuadExt {
        (self + other).half()
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        let fa = self.a.floor().to_integer();
        let fb = floor_sqrt2_multiple(&self.b);
        // fractional parts sum to something in [0, 2)
        let candidate = &fa + &fb + BigInt::one();
        if QuadExt::from(candidate.clone()) <= *self {
            candidate
        } else {
            fa + fb
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2
    }

    /// Decimal rendering truncated toward the nearest value with `digits`
    /// fractional digits (round half away from zero), trailing zeros trimmed.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = self.scale(&Rational::from_integer(scale.clone()));
        let rounded = if scaled.is_negative() {
            -((-&scaled) + QuadExt::from_ratio(1, 2)).floor()
        } else {
            (scaled + QuadExt::from_ratio(1, 2)).floor()
        };
        let negative = rounded.is_negative();
        let magnitude = rounded.abs();
        let int_part = &magnitude / &scale;
        let frac_part = &magnitude % &scale;
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 && !frac_part.is_zero() {
            let frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
            out.push('.');
            out.push_str(frac.trim_end_matches('0'));
        }
        out
    }
}

fn sign_of(r: &Rational) -> Ordering {
    if r.is_positive() {
        Ordering::Greater
    } else if r.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

/// floor(b * sqrt2) using floor(sqrt(t)) = isqrt(floor(t)) for t >= 0.
fn floor_sqrt2_multiple(b: &Rational) -> BigInt {
    if b.is_zero() {
        return BigInt::zero();
    }
    let two_b2 = b * b * Rational::from_integer(BigInt::from(2));
    let root = two_b2.floor().to_integer().sqrt();
    if b.is_positive() {
        root
    } else {
        // |b| sqrt2 is irrational, so its ceiling is floor + 1
        -(root + BigInt::one())
    }
}

/// Exact field operation on two values.
pub fn arith(op: ArithOp, x: &QuadExt, y: &QuadExt) -> Result<QuadExt> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
    })
}

pub fn compare(x: &QuadExt, y: &QuadExt) -> Ordering {
    x.cmp(y)
}

/// The metric `|x - y|` of the real line.
pub fn dist(x: &QuadExt, y: &QuadExt) -> QuadExt {
    (x - y).abs()
}

pub fn class_of(x: &QuadExt) -> ClassTag {
    if x.b.is_zero() {
        ClassTag::RationalPoint
    } else {
        ClassTag::IrrationalPoint
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for QuadExt {
    fn from(a: Rational) -> Self {
        QuadExt::new(a, Rational::zero())
    }
}

impl From<&Rational> for QuadExt {
    fn from(a: &Rational) -> Self {
        QuadExt::new(a.clone(), Rational::zero())
    }
}

impl From<BigInt> for QuadExt {
    fn from(n: BigInt) -> Self {
        QuadExt::from(Rational::from_integer(n))
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::from_int(n)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, |$l:ident, $r:ident| $body:expr) => {
        impl<'a, 'b> $trait<&'b QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &'b QuadExt) -> QuadExt {
                let ($l, $r) = (self, rhs);
                $body
            }
        }
        impl $trait<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $trait<&'b QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &'b QuadExt) -> QuadExt {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<QuadExt> for &'a QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| QuadExt::new(&x.a + &y.a, &x.b + &y.b));
forward_binop!(Sub, sub, |x, y| QuadExt::new(&x.a - &y.a, &x.b - &y.b));
forward_binop!(Mul, mul, |x, y| {
    let two = Rational::from_integer(BigInt::from(2));
    QuadExt::new(&x.a * &y.a + &x.b * &y.b * two, &x.a * &y.b + &x.b * &y.a)
});

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a, -self.b)
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-&self.a, -&self.b)
    }
}

/// Writes a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational, f: &mut impl fmt::Write) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_string(r: &Rational) -> String {
    let mut s = String::new();
    let _ = fmt_rational(r, &mut s);
    s
}

fn fmt_sqrt2_term(b: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if b.is_one() {
        f.write_str("sqrt2")
    } else {
        fmt_rational(b, f)?;
        f.write_str("*sqrt2")
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return fmt_rational(&self.a, f);
        }
        if self.a.is_zero() {
            if self.b.is_negative() {
                f.write_str("-")?;
            }
            return fmt_sqrt2_term(&self.b.abs(), f);
        }
        fmt_rational(&self.a, f)?;
        f.write_str(if self.b.is_negative() { " - " } else { " + " })?;
        fmt_sqrt2_term(&self.b.abs(), f)
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadExt({self})")
    }
}

/// Failure to read the textual form of a [`QuadExt`]; `offset` is a byte
/// offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} (at offset {offset})")]
pub struct NumberSyntaxError {
    pub offset: usize,
    pub message: String,
}

fn syntax(offset: usize, message: impl Into<String>) -> NumberSyntaxError {
    NumberSyntaxError {
        offset,
        message: message.into(),
    }
}

/// Reads `p`, `p/q`, `p/q + r/s*sqrt2`, `sqrt2`, `-r/s*sqrt2`, ... Any sum of
/// signed rational and sqrt2 terms is accepted.
pub fn parse_quad(input: &str) -> std::result::Result<QuadExt, NumberSyntaxError> {
    let bytes = input.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let mut total = QuadExt::zero();
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            if first {
                return Err(syntax(pos, "expected a number"));
            }
            break;
        }
        let mut negative = false;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            negative = bytes[pos] == b'-';
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            return Err(syntax(pos, "expected `+` or `-` between terms"));
        }
        let term_start = pos;
        let coef = if bytes[pos..].starts_with(b"sqrt2") {
            None
        } else {
            Some(read_rational(bytes, &mut pos)?)
        };
        skip_ws(&mut pos);
        let mut is_surd = false;
        if bytes.get(pos) == Some(&b'*') {
            pos += 1;
            skip_ws(&mut pos);
            if !bytes[pos..].starts_with(b"sqrt2") {
                return Err(syntax(pos, "expected `sqrt2` after `*`"));
            }
        }
        if bytes[pos..].starts_with(b"sqrt2") {
            pos += 5;
            is_surd = true;
        }
        if coef.is_none() && !is_surd {
            return Err(syntax(term_start, "expected a number"));
        }
        let mut c = coef.unwrap_or_else(Rational::one);
        if negative {
            c = -c;
        }
        total = if is_surd {
            total + QuadExt::new(Rational::zero(), c)
        } else {
            total + QuadExt::from(c)
        };
        first = false;
    }
    Ok(total)
}

fn read_integer(bytes: &[u8], pos: &mut usize) -> std::result::Result<BigInt, NumberSyntaxError> {
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(syntax(start, "expected digits"));
    }
    let digits = std::str::from_utf8(&bytes[start..*pos]).expect("ascii digits");
    Ok(digits.parse::<BigInt>().expect("digit string"))
}

fn read_rational(bytes: &[u8], pos: &mut usize) -> std::result::Result<Rational, NumberSyntaxError> {
    let num = read_integer(bytes, pos)?;
    let mut look = *pos;
    while look < bytes.len() && bytes[look] == b' ' {
        look += 1;
    }
    if bytes.get(look) == Some(&b'/') {
        *pos = look + 1;
        while *pos < bytes.len() && bytes[*pos] == b' ' {
            *pos += 1;
        }
        let den_at = *pos;
        let den = read_integer(bytes, pos)?;
        if den.is_zero() {
            return Err(syntax(den_at, "zero denominator"));
        }
        Ok(Rational::new(num, den))
    } else {
        Ok(Rational::from_integer(num))
    }
}

/// Reads a plain rational `p` or `p/q` with optional sign.
pub fn parse_rational(input: &str) -> std::result::Result<Rational, NumberSyntaxError> {
    let q = parse_quad(input)?;
    match q.as_rational() {
        Some(r) => Ok(r.clone()),
        None => Err(syntax(0, "expected a rational number, found a sqrt2 term")),
    }
}

impl FromStr for QuadExt {
    type Err = NumberSyntaxError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse_quad(s)
    }
}

impl Serialize for QuadExt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QuadExt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> QuadExt {
        s.parse().unwrap()
    }

    #[test]
    fn conjugate_cancellation() {
        assert_eq!(q("1 + sqrt2") + q("2 - sqrt2"), QuadExt::from_int(3));
        assert_eq!(QuadExt::sqrt2() * QuadExt::sqrt2(), QuadExt::from_int(2));
    }

    #[test]
    fn division_rationalizes() {
        let r = arith(ArithOp::Div, &QuadExt::one(), &q("1 + sqrt2")).unwrap();
        assert_eq!(r, q("-1 + sqrt2"));
        // independent expansion: (-1 + s)(1 + s) = -1 - s + s + 2 = 1
        assert_eq!(&r * &q("1 + sqrt2"), QuadExt::one());
        assert_eq!(
            arith(ArithOp::Div, &QuadExt::one(), &QuadExt::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn ordering_examples() {
        assert_eq!(compare(&q("3/2"), &QuadExt::sqrt2()), Ordering::Greater);
        assert_eq!(compare(&q("1 + sqrt2"), &q("5/2")), Ordering::Less);
        assert_eq!(compare(&q("7/5"), &QuadExt::sqrt2()), Ordering::Less);
        assert_eq!(compare(&q("1/3 + 2*sqrt2"), &q("1/3 + 2*sqrt2")), Ordering::Equal);
        assert!(q("-3 + 2*sqrt2").is_negative());
        assert!(q("3 - 2*sqrt2").is_positive());
    }

    #[test]
    fn distances() {
        assert_eq!(dist(&q("6"), &q("8")), QuadExt::from_int(2));
        assert_eq!(dist(&QuadExt::zero(), &QuadExt::sqrt2()), QuadExt::sqrt2());
        assert!(dist(&q("sqrt2"), &q("sqrt2")).is_zero());
    }

    #[test]
    fn classes() {
        assert_eq!(class_of(&q("5")), ClassTag::RationalPoint);
        assert_eq!(class_of(&QuadExt::sqrt2()), ClassTag::IrrationalPoint);
        assert_eq!(class_of(&(q("3 + sqrt2") - QuadExt::sqrt2())), ClassTag::RationalPoint);
    }

    #[test]
    fn text_form() {
        for s in ["0", "-7", "3/4", "sqrt2", "-sqrt2", "1/2*sqrt2", "5/3 - 2/7*sqrt2", "-1 + sqrt2"] {
            assert_eq!(q(s).to_string(), s);
        }
        assert_eq!(q("1/2 +1/2 * sqrt2"), QuadExt::new(rat(1, 2), rat(1, 2)));
        assert_eq!(q("6/4"), QuadExt::from_ratio(3, 2));
        assert!("1/0".parse::<QuadExt>().is_err());
        assert!("".parse::<QuadExt>().is_err());
        assert!("2 3".parse::<QuadExt>().is_err());
        assert!("x".parse::<QuadExt>().is_err());
        assert!(parse_rational("sqrt2").is_err());
    }

    #[test]
    fn floor_and_decimal() {
        assert_eq!(QuadExt::sqrt2().floor(), BigInt::from(1));
        assert_eq!((-QuadExt::sqrt2()).floor(), BigInt::from(-2));
        assert_eq!(q("10 - 7*sqrt2").floor(), BigInt::from(0));
        assert_eq!(q("-3/2").floor(), BigInt::from(-2));
        assert_eq!(q("-3/2").ceil(), BigInt::from(-1));
        assert_eq!(QuadExt::sqrt2().to_decimal_string(6), "1.414214");
        assert_eq!(q("5").to_decimal_string(6), "5");
        assert_eq!(q("-1/4").to_decimal_string(6), "-0.25");
        assert_eq!(q("1/3").to_decimal_string(3), "0.333");
    }
}
