//! Exact arithmetic in the field ℚ(i, √2).
//!
//! An element is stored as `a + b·i + c·√2 + d·i√2` with four reduced
//! arbitrary-precision rationals, so equality is component-wise.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
}

fn rat(n: i64, m: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(m))
}

impl Scalar {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Self { a, b, c, d }
    }

    /// Builds `a + b·i + c·√2 + d·i√2` from small rationals given as `(num, den)`.
    pub fn from_ratios(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> Self {
        Self::new(rat(a.0, a.1), rat(b.0, b.1), rat(c.0, c.1), rat(d.0, d.1))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(n, 1)
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::new(rat(num, den), BigRational::zero(), BigRational::zero(), BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::from_ratios((0, 1), (1, 1), (0, 1), (0, 1))
    }

    pub fn sqrt2() -> Self {
        Self::from_ratios((0, 1), (0, 1), (1, 1), (0, 1))
    }

    /// `1/√2 = √2/2`, the normalization that appears throughout the rotated bases.
    pub fn inv_sqrt2() -> Self {
        Self::from_ratios((0, 1), (0, 1), (1, 2), (0, 1))
    }

    pub fn i_sqrt2() -> Self {
        Self::from_ratios((0, 1), (0, 1), (0, 1), (1, 1))
    }

    pub fn components(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// True when the imaginary components `b` and `d` both vanish.
    pub fn is_real(&self) -> bool {
        self.b.is_zero() && self.d.is_zero()
    }

    /// i-conjugation: `b → −b`, `d → −d`.
    pub fn conj_i(&self) -> Self {
        Self::new(self.a.clone(), -&self.b, self.c.clone(), -&self.d)
    }

    /// √2-conjugation: `c → −c`, `d → −d`.
    fn conj_sqrt2(&self) -> Self {
        Self::new(self.a.clone(), self.b.clone(), -&self.c, -&self.d)
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::new(&self.a * q, &self.b * q, &self.c * q, &self.d * q)
    }

    /// Multiplicative inverse.
    ///
    /// `x · conj_i(x)` lies in ℚ(√2); multiplying that by its √2-conjugate
    /// lands in ℚ, which is then inverted directly.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let xi = self.conj_i();
        let n1 = self * &xi;
        let n1s = n1.conj_sqrt2();
        let n2 = &n1 * &n1s;
        debug_assert!(n2.b.is_zero() && n2.c.is_zero() && n2.d.is_zero());
        let q = n2.a.recip();
        Ok((&xi * &n1s).scale(&q))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    /// The four components rendered as canonical `p/q` strings.
    pub fn to_strings(&self) -> [String; 4] {
        [rat_string(&self.a), rat_string(&self.b), rat_string(&self.c), rat_string(&self.d)]
    }

    pub fn from_strings(parts: &[&str]) -> Result<Self> {
        if parts.len() != 4 {
            return Err(Error::Parse(format!("scalar needs 4 components, got {}", parts.len())));
        }
        let mut out = Vec::with_capacity(4);
        for p in parts {
            out.push(parse_canonical_rational(p)?);
        }
        let d = out.pop().unwrap();
        let c = out.pop().unwrap();
        let b = out.pop().unwrap();
        let a = out.pop().unwrap();
        Ok(Self::new(a, b, c, d))
    }

    /// Real and imaginary parts as `f64`.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let s2 = std::f64::consts::SQRT_2;
        let f = |q: &BigRational| -> f64 {
            use num_traits::ToPrimitive;
            q.to_f64().unwrap_or(f64::NAN)
        };
        (f(&self.a) + s2 * f(&self.c), f(&self.b) + s2 * f(&self.d))
    }
}

fn rat_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_canonical_rational(s: &str) -> Result<BigRational> {
    let q = BigRational::from_str(s).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
    if q.denom().is_negative() || rat_string(&q) != s {
        return Err(Error::Parse(format!("rational {s:?} is not in lowest terms")));
    }
    Ok(q)
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            (&self.a, ""),
            (&self.b, "i"),
            (&self.c, "√2"),
            (&self.d, "i√2"),
        ];
        let mut first = true;
        for (q, unit) in parts {
            if q.is_zero() {
                continue;
            }
            let neg = q.is_negative();
            let mag = q.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            if unit.is_empty() || !mag.is_one() {
                write!(f, "{}", rat_string(&mag))?;
            }
            write!(f, "{unit}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts: Vec<String> = Vec::deserialize(deserializer)?;
        let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
        Scalar::from_strings(&refs).map_err(D::Error::custom)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.a + &o.a, &self.b + &o.b, &self.c + &o.c, &self.d + &o.d)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        // i² = −1, (√2)² = 2, (i√2)² = −2
        let two = BigRational::from_integer(BigInt::from(2));
        let a = &self.a * &o.a - &self.b * &o.b + &two * (&self.c * &o.c - &self.d * &o.d);
        let b = &self.a * &o.b + &self.b * &o.a + &two * (&self.c * &o.d + &self.d * &o.c);
        let c = &self.a * &o.c + &self.c * &o.a - &self.b * &o.d - &self.d * &o.b;
        let d = &self.a * &o.d + &self.d * &o.a + &self.b * &o.c + &self.c * &o.b;
        Scalar::new(a, b, c, d)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        self.a += &o.a;
        self.b += &o.b;
        self.c += &o.c;
        self.d += &o.d;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self += &o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        self.a -= &o.a;
        self.b -= &o.b;
        self.c -= &o.c;
        self.d -= &o.d;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}
