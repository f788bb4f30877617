use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use qd::Quad;
use serde::{Deserialize, Serialize};

/// Arithmetic mode of a scalar or matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        })
    }
}

/// Field element usable as a matrix entry.
///
/// Operands of different scalar types never meet: every generic routine is
/// instantiated for exactly one `Scalar`, so exact and float values cannot be
/// mixed inside a computation. [`crate::DynMatrix`] carries the runtime tag
/// and rejects mixed operands.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn conj(&self) -> Self;
    /// Exact zero test. Float scalars compare against `0.0`; thresholds are
    /// applied by the callers that need them.
    fn is_zero(&self) -> bool;
    /// Modulus as an `f64`, used for pivot selection and residual reports.
    fn magnitude(&self) -> f64;
    /// Unit roundoff of the arithmetic, `0.0` for exact scalars.
    fn epsilon() -> f64;
    fn to_complex64(&self) -> Complex64;

    /// Human-readable form used by matrix printing.
    fn render(&self) -> String {
        self.to_complex64().to_string()
    }

    fn is_exact() -> bool {
        Self::MODE == Mode::Exact
    }
}

/// Gaussian rational: a complex number whose real and imaginary parts are
/// arbitrary-precision rationals, always kept in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gaussian(Complex<BigRational>);

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian(Complex::new(re, im))
    }

    pub fn real(re: BigRational) -> Self {
        Gaussian(Complex::new(re, BigRational::zero()))
    }

    /// `numer / denom` as a real Gaussian rational. Panics if `denom == 0`.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::real(BigRational::new(numer.into(), denom.into()))
    }

    pub fn re(&self) -> &BigRational {
        &self.0.re
    }

    pub fn im(&self) -> &BigRational {
        &self.0.im
    }

    pub fn is_real(&self) -> bool {
        self.0.im.is_zero()
    }

    /// Exact value of a finite double. Returns `None` for NaN and infinities.
    pub fn from_f64(re: f64, im: f64) -> Option<Self> {
        Some(Self::new(
            BigRational::from_float(re)?,
            BigRational::from_float(im)?,
        ))
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denominator_lcm(&self) -> BigInt {
        num_integer::Integer::lcm(self.0.re.denom(), self.0.im.denom())
    }
}

impl fmt::Debug for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `p/q`, `p/q+r/si`, `r/si`; integers print without a denominator.
impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = (&self.0.re, &self.0.im);
        if im.is_zero() {
            return write!(f, "{re}");
        }
        if re.is_zero() {
            return write!(f, "{im}i");
        }
        let sign = if im.is_negative() { '-' } else { '+' };
        write!(f, "{re}{sign}{}i", im.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid exact scalar {0:?}")]
pub struct ParseScalarError(pub String);

fn parse_unsigned_rational(s: &str) -> Option<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) {
        return None;
    }
    let numer: BigInt = num.parse().ok()?;
    let denom: BigInt = match den {
        Some(d) if digits(d) => d.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return None;
    }
    Some(BigRational::new(numer, denom))
}

fn parse_signed_rational(s: &str) -> Option<BigRational> {
    match s.as_bytes().first()? {
        b'-' => parse_unsigned_rational(&s[1..]).map(|r| -r),
        b'+' => parse_unsigned_rational(&s[1..]),
        _ => parse_unsigned_rational(s),
    }
}

/// Accepts `[+-]?\d+(/\d+)?`, optionally followed by an imaginary part
/// `[+-](\d+(/\d+)?)?i`, or a pure imaginary `[+-]?(\d+(/\d+)?)?i`.
impl FromStr for Gaussian {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix('i') else {
            return parse_signed_rational(&t).map(Self::real).ok_or_else(err);
        };
        // Split at the last sign that is not the leading one.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (re_part, im_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let re = if re_part.is_empty() {
            BigRational::zero()
        } else {
            parse_signed_rational(re_part).ok_or_else(err)?
        };
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_signed_rational(other).ok_or_else(err)?,
        };
        Ok(Self::new(re, im))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Gaussian {
            type Output = Gaussian;
            fn $method(self, rhs: Gaussian) -> Gaussian {
                Gaussian($trait::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: Gaussian) -> Gaussian {
        let (a, b) = (self.0, rhs.0);
        match (a.im.is_zero(), b.im.is_zero()) {
            (true, true) => Gaussian::real(a.re * b.re),
            (false, true) => Gaussian::new(a.re * &b.re, a.im * b.re),
            (true, false) => Gaussian::new(&a.re * b.re, a.re * b.im),
            (false, false) => Gaussian(a * b),
        }
    }
}

impl Div for Gaussian {
    type Output = Gaussian;
    fn div(self, rhs: Gaussian) -> Gaussian {
        let (a, b) = (self.0, rhs.0);
        if !b.im.is_zero() {
            return Gaussian(a / b);
        }
        if a.im.is_zero() {
            Gaussian::real(a.re / b.re)
        } else {
            Gaussian::new(a.re / &b.re, a.im / b.re)
        }
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian(-self.0)
    }
}

impl From<i64> for Gaussian {
    fn from(v: i64) -> Self {
        Self::real(BigRational::from_integer(v.into()))
    }
}

impl Scalar for Gaussian {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        Gaussian(Complex::new(BigRational::zero(), BigRational::zero()))
    }

    fn one() -> Self {
        Gaussian(Complex::new(BigRational::one(), BigRational::zero()))
    }

    fn from_i64(v: i64) -> Self {
        v.into()
    }

    fn conj(&self) -> Self {
        Gaussian(self.0.conj())
    }

    fn is_zero(&self) -> bool {
        self.0.re.is_zero() && self.0.im.is_zero()
    }

    fn magnitude(&self) -> f64 {
        self.to_complex64().norm()
    }

    fn epsilon() -> f64 {
        0.0
    }

    fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.0.re.to_f64().unwrap_or(f64::NAN),
            self.0.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn render(&self) -> String {
        self.to_string()
    }
}

impl Scalar for Complex64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn epsilon() -> f64 {
        f64::EPSILON
    }

    fn to_complex64(&self) -> Complex64 {
        *self
    }
}

/// Complex double-double (about 106 significand bits). Used internally to
/// evaluate λ-shifted resolvents whose condition number approaches `1/ε`.
pub type ComplexDD = Complex<Quad>;

impl Scalar for ComplexDD {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Complex::new(Quad::from(0.0), Quad::from(0.0))
    }

    fn one() -> Self {
        Complex::new(Quad::from(1.0), Quad::from(0.0))
    }

    fn from_i64(v: i64) -> Self {
        Complex::new(Quad::from(v as f64), Quad::from(0.0))
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn is_zero(&self) -> bool {
        self.re == Quad::from(0.0) && self.im == Quad::from(0.0)
    }

    fn magnitude(&self) -> f64 {
        self.to_complex64().norm()
    }

    fn epsilon() -> f64 {
        Quad::EPSILON.0
    }

    fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

pub(crate) fn complex64_to_dd(z: &Complex64) -> ComplexDD {
    Complex::new(Quad::from(z.re), Quad::from(z.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Gaussian {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(g("-24/756").to_string(), "-2/63");
        assert_eq!(g("+3").to_string(), "3");
        assert_eq!(g("1/2+3/4i").to_string(), "1/2+3/4i");
        assert_eq!(g("1/2 - 3/4 i").to_string(), "1/2-3/4i");
        assert_eq!(g("-i").to_string(), "-1i");
        assert_eq!(g("5i").to_string(), "5i");
        assert_eq!(g("0/7").to_string(), "0");
        for bad in ["", "1/0", "1.5", "abc", "1/2/3", "--1", "1+2"] {
            assert!(bad.parse::<Gaussian>().is_err(), "{bad}");
        }
    }

    #[test]
    fn exact_field_ops_are_reduced() {
        let a = g("2/4");
        assert_eq!(a.re().denom(), &BigInt::from(2));
        let b = g("1/3+1i");
        let q = a.clone() / b.clone();
        assert_eq!(q.clone() * b, a);
        assert!(!q.re().denom().is_negative());
    }

    #[test]
    fn conjugation_negates_imaginary_part() {
        assert_eq!(g("1-2/3i").conj(), g("1+2/3i"));
        assert_eq!(g("i").conj(), g("-i"));
    }

    #[test]
    fn from_f64_is_exact() {
        let z = Gaussian::from_f64(0.1, -2.5).unwrap();
        assert_eq!(z.re().to_f64().unwrap(), 0.1);
        assert_eq!(z.im(), &BigRational::new((-5).into(), 2.into()));
        assert!(Gaussian::from_f64(f64::NAN, 0.0).is_none());
    }

    #[test]
    fn double_double_carries_extra_precision() {
        let tiny = ComplexDD::new(Quad::from(1e-20), Quad::from(0.0));
        let s = <ComplexDD as Scalar>::one() + tiny;
        assert!(!Scalar::is_zero(&(s - <ComplexDD as Scalar>::one())));
        assert!(ComplexDD::epsilon() < 1e-30);
        let three = <ComplexDD as Scalar>::from_i64(3);
        let third = <ComplexDD as Scalar>::one() / three;
        let back = third * three - <ComplexDD as Scalar>::one();
        assert!(back.to_complex64().norm() < 1e-30);
    }
}
