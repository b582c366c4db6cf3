//! Exact scalars: arbitrary-precision rationals or residues modulo a prime.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Prime field, rejecting composite or tiny moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::zero()),
            Field::Prime(p) => Scalar::Fp(Residue { value: 0, modulus: p }),
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp(Residue {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            }),
        }
    }

    /// Maps `num/den` into this field; fails when `den` vanishes.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {num}/{den}")));
        }
        match self {
            Field::Rational => Ok(Scalar::Q(BigRational::new(num.clone(), den.clone()))),
            Field::Prime(p) => {
                let n = reduce_bigint(num, p);
                let d = reduce_bigint(den, p);
                if d == 0 {
                    return Err(Error::NotInvertibleMod { value: den.to_string(), modulus: p });
                }
                Ok(Scalar::Fp(Residue { value: mul_mod(n, inv_mod(d, p), p), modulus: p }))
            }
        }
    }

    /// Parses `[+-]int[/positive int]`.
    pub fn parse(self, text: &str) -> Result<Scalar> {
        let (num, den) = parse_ratio(text)?;
        self.from_ratio(&num, &den)
    }

    pub fn contains(self, s: &Scalar) -> bool {
        s.field() == self
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        let Some(p) = s.strip_prefix("Fp:") else {
            return Err(Error::Parse(format!("unknown field `{s}` (expected `Q` or `Fp:<prime>`)")));
        };
        let p: u64 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime modulus in `{s}`")))?;
        Field::prime(p)
    }
}

fn parse_ratio(text: &str) -> Result<(BigInt, BigInt)> {
    let bad = || Error::Parse(format!("malformed scalar `{text}`"));
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (t, None),
    };
    let digits = |s: &str, signed: bool| {
        let body = if signed { s.strip_prefix(['+', '-']).unwrap_or(s) } else { s };
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(num, true) {
        return Err(bad());
    }
    let num: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
    let den: BigInt = match den {
        Some(d) => {
            if !digits(d, false) {
                return Err(bad());
            }
            d.parse().map_err(|_| bad())?
        }
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{text}`")));
    }
    Ok((num, den))
}

/// A residue class modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    pub value: u64,
    pub modulus: u64,
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp(Residue),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp(r) => Field::Prime(r.modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp(r) => r.value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp(r) => r.value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp(r) => Scalar::Fp(Residue { value: inv_mod(r.value, r.modulus), modulus: r.modulus }),
        })
    }

    /// Image under ℚ → 𝔽ₚ; `None` when a denominator is divisible by `p`.
    pub fn reduce_mod(&self, p: u64) -> Option<Scalar> {
        match self {
            Scalar::Q(q) => {
                let d = reduce_bigint(q.denom(), p);
                if d == 0 {
                    return None;
                }
                let n = reduce_bigint(q.numer(), p);
                Some(Scalar::Fp(Residue { value: mul_mod(n, inv_mod(d, p), p), modulus: p }))
            }
            Scalar::Fp(r) if r.modulus == p => Some(self.clone()),
            Scalar::Fp(_) => None,
        }
    }

    /// Numerator and (positive) denominator; residues report denominator 1.
    pub fn as_ratio(&self) -> (BigInt, BigInt) {
        match self {
            Scalar::Q(q) => (q.numer().clone(), q.denom().clone()),
            Scalar::Fp(r) => (BigInt::from(r.value), BigInt::one()),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Q(_) => None,
            Scalar::Fp(r) => i64::try_from(r.value).ok(),
        }
    }

    fn mismatch(a: &Scalar, b: &Scalar) -> ! {
        panic!("field mismatch: {} vs {}", a.field(), b.field())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp(r) => write!(f, "{}", r.value),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp(a), Scalar::Fp(b)) if a.modulus == b.modulus => {
                Scalar::Fp(Residue { value: add_mod(a.value, b.value, a.modulus), modulus: a.modulus })
            }
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp(a), Scalar::Fp(b)) if a.modulus == b.modulus => Scalar::Fp(Residue {
                value: add_mod(a.value, a.modulus - b.value, a.modulus),
                modulus: a.modulus,
            }),
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp(a), Scalar::Fp(b)) if a.modulus == b.modulus => {
                Scalar::Fp(Residue { value: mul_mod(a.value, b.value, a.modulus), modulus: a.modulus })
            }
            _ => Scalar::mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp(a) => Scalar::Fp(Residue {
                value: if a.value == 0 { 0 } else { a.modulus - a.value },
                modulus: a.modulus,
            }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a += b,
            _ => *self = &*self + rhs,
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        match (&mut *self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => *a -= b,
            _ => *self = &*self - rhs,
        }
    }
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub(crate) fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.abs().to_u64().expect("residue fits in u64")
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_grammar() {
        let q = Field::Rational;
        assert_eq!(q.parse("3/2").unwrap().to_string(), "3/2");
        assert_eq!(q.parse("-4/6").unwrap().to_string(), "-2/3");
        assert_eq!(q.parse("+7").unwrap().to_string(), "7");
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("1/-2").is_err());
        assert!(q.parse("x").is_err());
        assert!(q.parse("").is_err());
        assert!(q.parse("1.5").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let half = f.parse("1/2").unwrap();
        assert_eq!(&half * &f.from_i64(2), f.one());
        assert_eq!(f.parse("-1").unwrap(), f.from_i64(6));
        assert!(f.parse("1/7").is_err());
        assert_eq!(f.from_i64(3).inv().unwrap(), f.from_i64(5));
    }

    #[test]
    fn field_strings() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("Fp:1009".parse::<Field>().unwrap(), Field::Prime(1009));
        assert!("Fp:1007".parse::<Field>().is_err());
        assert_eq!(Field::Prime(1009).to_string(), "Fp:1009");
    }

    #[test]
    fn reduction_mod_p() {
        let q = Field::Rational.parse("5/3").unwrap();
        assert_eq!(q.reduce_mod(7).unwrap(), Field::Prime(7).parse("5/3").unwrap());
        assert!(q.reduce_mod(3).is_none());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics_in_arithmetic() {
        let _ = &Field::Rational.one() + &Field::Prime(5).one();
    }

    #[test]
    fn primality() {
        assert!(is_prime(1009));
        assert!(!is_prime(1007));
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(1));
    }
}
