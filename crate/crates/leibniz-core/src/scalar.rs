//! Exact Gaussian-rational scalars: `a + b*i` with `a`, `b` reduced rationals.
//!
//! This is the ground field for every computation in the crate. All
//! arithmetic is exact; equality is decidable and canonical because
//! `Ratio<BigInt>` keeps numerator/denominator reduced with positive
//! denominator.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::Error;

pub type Rat = Ratio<BigInt>;

/// Gaussian rational `re + im*i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    pub re: Rat,
    pub im: Rat,
}

impl Scalar {
    pub fn new(re: Rat, im: Rat) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar { re: Rat::zero(), im: Rat::zero() }
    }

    pub fn one() -> Self {
        Scalar { re: Rat::one(), im: Rat::zero() }
    }

    pub fn i() -> Self {
        Scalar { re: Rat::zero(), im: Rat::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: Rat::from_integer(BigInt::from(n)), im: Rat::zero() }
    }

    /// `p/q` as a real scalar. Panics if `q == 0`.
    pub fn from_frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar { re: Rat::new(BigInt::from(p), BigInt::from(q)), im: Rat::zero() }
    }

    pub fn from_rat(re: Rat) -> Self {
        Scalar { re, im: Rat::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// Squared modulus `re^2 + im^2` (a nonnegative rational).
    pub fn norm(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Exact square root in Q(i), if one exists.
    ///
    /// Solves `(x + yi)^2 = re + im*i`: requires `re^2 + im^2` to be a
    /// rational square and then `(re + sqrt(norm))/2` to be one as well.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.im.is_zero() {
            if self.re.is_positive() {
                if let Some(x) = rat_sqrt(&self.re) {
                    return Some(Scalar::from_rat(x));
                }
                return None;
            }
            // re < 0: root is purely imaginary.
            return rat_sqrt(&(-self.re.clone())).map(|y| Scalar::new(Rat::zero(), y));
        }
        let n = rat_sqrt(&self.norm())?;
        let two = Rat::from_integer(BigInt::from(2));
        let xx = (&self.re + &n) / &two;
        let x = rat_sqrt(&xx)?;
        if x.is_zero() {
            return None;
        }
        let y = &self.im / &(&x * &two);
        Some(Scalar::new(x, y))
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// Max of numerator/denominator magnitudes over both components;
    /// the "height" used by the bounded search.
    pub fn height(&self) -> BigInt {
        let mut h = BigInt::zero();
        for r in [&self.re, &self.im] {
            for part in [r.numer().abs(), r.denom().abs()] {
                if part > h {
                    h = part;
                }
            }
        }
        h
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt(r.numer())?;
    let d = int_sqrt(r.denom())?;
    Some(Rat::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &(&s * &s) == n {
        Some(s)
    } else {
        None
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl<'a> Add<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        (&self).mul(&rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = (&*self).mul(rhs);
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        (&self).mul(&inv)
    }
}

impl<'a> Div<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self.mul(&inv)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical text form; reparses to an equal value under the scalar grammar.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rat(&self.re));
        }
        let im_mag = self.im.abs();
        let im_part = if im_mag.is_one() && !self.re.is_zero() {
            // "1+i" / "1-i"; a leading bare "-i" is not in the grammar,
            // so pure imaginaries keep the explicit "1".
            String::new()
        } else {
            fmt_rat(&im_mag)
        };
        if self.re.is_zero() {
            if self.im.is_positive() {
                if self.im.is_one() {
                    return write!(f, "i");
                }
                return write!(f, "{}i", im_part);
            }
            return write!(f, "-{}i", im_part);
        }
        let sign = if self.im.is_positive() { '+' } else { '-' };
        write!(f, "{}{}{}i", fmt_rat(&self.re), sign, im_part)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parser for the scalar grammar:
///
/// ```text
/// scalar := real | imag | real sign imag
/// real   := rat
/// imag   := [rat] "i"
/// rat    := ["-"] int ["/" posint]
/// sign   := "+" | "-"
/// ```
struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { bytes: s.as_bytes(), pos: 0 }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn parse_int(&mut self) -> Result<BigInt, Error> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Parse(format!("expected digits at offset {}", start)));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn parse_rat(&mut self) -> Result<Rat, Error> {
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let mut num = self.parse_int()?;
        if neg {
            num = -num;
        }
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let den = self.parse_int()?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(Rat::new(num, den))
        } else {
            Ok(Rat::from_integer(num))
        }
    }

    fn parse_scalar(&mut self) -> Result<Scalar, Error> {
        // Bare "i" first: imag with rat omitted.
        if self.peek() == Some(b'i') {
            self.eat();
            return Ok(Scalar::i());
        }
        let first = self.parse_rat()?;
        if self.peek() == Some(b'i') {
            self.eat();
            return Ok(Scalar::new(Rat::zero(), first));
        }
        match self.peek() {
            None => Ok(Scalar::from_rat(first)),
            Some(sign @ (b'+' | b'-')) => {
                self.eat();
                let im = if self.peek() == Some(b'i') {
                    Rat::one()
                } else {
                    let r = self.parse_rat()?;
                    if self.peek() != Some(b'i') {
                        return Err(Error::Parse("expected 'i' after imaginary part".into()));
                    }
                    r
                };
                if self.eat() != Some(b'i') {
                    return Err(Error::Parse("expected 'i'".into()));
                }
                let im = if sign == b'-' { -im } else { im };
                Ok(Scalar::new(first, im))
            }
            Some(c) => Err(Error::Parse(format!("unexpected character '{}'", c as char))),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut p = Parser::new(s);
        let v = p.parse_scalar()?;
        if p.pos != p.bytes.len() {
            return Err(Error::Parse(format!("trailing input at offset {}", p.pos)));
        }
        Ok(v)
    }
}

/// Parse a scalar from the text grammar.
pub fn parse_scalar(text: &str) -> Result<Scalar, Error> {
    text.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        parse_scalar(t).unwrap()
    }

    #[test]
    fn grammar_cases() {
        assert_eq!(s("3/4-2i"), Scalar::new(Rat::new(3.into(), 4.into()), Rat::from_integer((-2).into())));
        assert_eq!(s("0"), Scalar::zero());
        assert_eq!(s("1"), Scalar::one());
        assert_eq!(s("-2/3"), Scalar::from_frac(-2, 3));
        assert_eq!(s("i"), Scalar::i());
        assert_eq!(s("1/2-3i"), Scalar::new(Rat::new(1.into(), 2.into()), Rat::from_integer((-3).into())));
        assert_eq!(s("1+i"), Scalar::new(Rat::one(), Rat::one()));
        assert_eq!(s("-1i"), Scalar::new(Rat::zero(), Rat::from_integer((-1).into())));
    }

    #[test]
    fn round_trip_examples() {
        for t in ["1/2+1/3i", "0", "3/4-2i", "i", "-2/3", "7", "-1i", "2-i"] {
            let v = s(t);
            let back = parse_scalar(&v.to_string()).unwrap();
            assert_eq!(v, back, "round trip through {:?}", v.to_string());
        }
        assert_eq!(s("1/2+1/3i").to_string(), "1/2+1/3i");
    }

    #[test]
    fn rejects_malformed() {
        for t in ["", "1/0", "--1", "1+", "x", "1 + 2i", "-i", "2i3", "1//2"] {
            assert!(parse_scalar(t).is_err(), "should reject {:?}", t);
        }
    }

    #[test]
    fn arithmetic_exact() {
        let a = s("3/7+2/5i");
        let b = s("-1/3+4i");
        let sum = &a + &b;
        assert_eq!(&sum - &b, a);
        let prod = &a * &b;
        assert_eq!(&prod / &b, a);
        assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn sqrt_cases() {
        assert_eq!(s("9").sqrt(), Some(s("3")));
        assert_eq!(s("-1").sqrt(), Some(s("i")));
        assert_eq!(s("1/4").sqrt(), Some(s("1/2")));
        assert_eq!(s("2").sqrt(), None);
        // (1+i)^2 = 2i
        assert_eq!(s("2i").sqrt(), Some(s("1+i")));
        let z = s("3-4i"); // (2-i)^2
        let r = z.sqrt().unwrap();
        assert_eq!(&r * &r, z);
    }
}
