//! Exact arithmetic: arbitrary-precision rationals, the combinatorial
//! primitives shared by every other module, and values of the form q/pi^2.
//!
//! Everything here is exact; the only place decimal approximation enters is
//! the asymptotic comparison of [`delta_asymptotic`], which uses fixed-point
//! big integers with 50 significant digits.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use thiserror::Error;

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("binomial: negative upper index {0}")]
    NegativeBinomialIndex(i64),
    #[error("delta(m) requires m >= 1, got {0}")]
    FamilyIndexOutOfRange(u64),
    #[error("double factorial ratio defined only for arguments >= -1, got {0}")]
    DoubleFactorialOutOfRange(i64),
}

/// Shorthand constructor from machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Render as `num/den` (or just `num` when den == 1).
pub fn rational_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `num/den` or a plain integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rational::from_integer(n))
        }
    }
}

/// n!! : product of integers of the same parity as n, down to 1 or 2.
/// 0!! = 1 (empty product).
pub fn double_factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k >= 2 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// a!!/b!! as an exact rational, with the convention (-1)!! = 1.
/// Only this helper accepts -1; `double_factorial` itself is for n >= 0.
pub fn double_factorial_ratio(a: i64, b: i64) -> Result<Rational, ExactError> {
    let df = |n: i64| -> Result<BigInt, ExactError> {
        match n {
            -1 => Ok(BigInt::one()),
            n if n >= 0 => Ok(double_factorial(n as u64)),
            n => Err(ExactError::DoubleFactorialOutOfRange(n)),
        }
    };
    Ok(Rational::new(df(a)?, df(b)?))
}

/// n! as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Binomial coefficient with the zero convention: C(n, k) = 0 for k < 0 or
/// k > n. Negative n is rejected.
pub fn binomial(n: i64, k: i64) -> Result<BigInt, ExactError> {
    if n < 0 {
        return Err(ExactError::NegativeBinomialIndex(n));
    }
    Ok(binomial_unchecked(n as u64, k))
}

/// Same as [`binomial`] for a known-nonnegative upper index.
pub fn binomial_unchecked(n: u64, k: i64) -> BigInt {
    if k < 0 || (k as u64) > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Diffusion rate delta(m) = (2m)!!/(2m+1)!! for the family with 4m convex
/// obstacle corners. m = 0 is rejected: there is no such obstacle family.
pub fn delta_closed_form(m: u64) -> Result<Rational, ExactError> {
    if m == 0 {
        return Err(ExactError::FamilyIndexOutOfRange(0));
    }
    Ok(Rational::new(
        double_factorial(2 * m),
        double_factorial(2 * m + 1),
    ))
}

/// Number of significant decimal digits carried by the asymptotic comparison.
pub const ASYMPTOTIC_DIGITS: u32 = 50;

/// Guard digits used internally so truncation never contaminates the
/// reported 50 digits.
const GUARD_DIGITS: u32 = 20;

/// Exact closed form next to its leading asymptotic term sqrt(pi)/(2 sqrt(m)),
/// with the relative deviation |delta(m) * 2 sqrt(m)/sqrt(pi) - 1|.
#[derive(Debug, Clone)]
pub struct AsymptoticReport {
    pub m: u64,
    pub delta: Rational,
    /// sqrt(pi)/(2 sqrt(m)) rounded to [`ASYMPTOTIC_DIGITS`] digits.
    pub asymptotic: Rational,
    /// |delta(m) * 2 sqrt(m)/sqrt(pi) - 1| rounded to the same precision.
    pub deviation: Rational,
}

pub fn delta_asymptotic(m: u64) -> Result<AsymptoticReport, ExactError> {
    let delta = delta_closed_form(m)?;
    let deviation = asymptotic_deviation(&delta, m);
    let asymptotic = sqrt_pi_over_2_sqrt_m(m);
    Ok(AsymptoticReport {
        m,
        delta,
        asymptotic,
        deviation,
    })
}

/// Deviation |q * 2 sqrt(m) / sqrt(pi) - 1| of an approximation q of delta(m),
/// computed in fixed point with ASYMPTOTIC_DIGITS significant digits.
pub fn asymptotic_deviation(delta: &Rational, m: u64) -> Rational {
    let p = ASYMPTOTIC_DIGITS + GUARD_DIGITS;
    let scale = pow10(p);
    // v^2 = 4 m num^2 / (den^2 pi); compute floor(v^2 * 10^(2p)), take isqrt.
    let pi_sc = pi_scaled(p); // floor(pi * 10^p)
    let num2 = delta.numer() * delta.numer();
    let den2 = delta.denom() * delta.denom();
    let v2_scaled = BigInt::from(4u32) * m * num2 * &scale * &scale * &scale / (den2 * pi_sc);
    let v_scaled = v2_scaled.sqrt(); // ~ v * 10^p
    let dev_scaled = (v_scaled - &scale).abs();
    round_scaled(dev_scaled, p, ASYMPTOTIC_DIGITS)
}

/// sqrt(pi)/(2 sqrt(m)) to ASYMPTOTIC_DIGITS digits, as a rational with a
/// power-of-ten denominator.
pub fn sqrt_pi_over_2_sqrt_m(m: u64) -> Rational {
    let p = ASYMPTOTIC_DIGITS + GUARD_DIGITS;
    let scale = pow10(p);
    let pi_sc = pi_scaled(p);
    // a^2 = pi / (4m): floor(a^2 * 10^(2p)) = pi_sc * 10^p / (4m)
    let a2_scaled = pi_sc * &scale / (BigInt::from(4u32) * m);
    let a_scaled = a2_scaled.sqrt();
    round_scaled(a_scaled, p, ASYMPTOTIC_DIGITS)
}

fn pow10(p: u32) -> BigInt {
    BigInt::from(10u32).pow(p)
}

/// Drop guard digits and return value/10^digits as a rational.
fn round_scaled(value: BigInt, from_digits: u32, to_digits: u32) -> Rational {
    let down = pow10(from_digits - to_digits);
    Rational::new(value / down, pow10(to_digits))
}

/// floor(pi * 10^digits), via Machin's formula with exact integer series.
///
/// Each arctan term is truncated toward zero, so the accumulated error is
/// bounded by the number of series terms; the extra internal digits absorb it.
pub fn pi_scaled(digits: u32) -> BigInt {
    let extra = 10;
    let scale = pow10(digits + extra);
    let pi = BigInt::from(16u32) * atan_inv_scaled(5, &scale)
        - BigInt::from(4u32) * atan_inv_scaled(239, &scale);
    pi / pow10(extra)
}

/// floor-ish of atan(1/x) * scale via the alternating Taylor series.
fn atan_inv_scaled(x: u64, scale: &BigInt) -> BigInt {
    let xx = BigInt::from(x) * x;
    let mut term = scale / x;
    let mut total = term.clone();
    let mut k: u64 = 1;
    while !term.is_zero() {
        term = term / &xx;
        if term.is_zero() {
            break;
        }
        let contrib = &term / (2 * k + 1);
        if k % 2 == 1 {
            total -= contrib;
        } else {
            total += contrib;
        }
        k += 1;
    }
    total
}

/// A value of the form q / pi^2 with q exact rational. All Siegel-Veech
/// constants handled in this crate have this shape, so pi^2 is never
/// approximated numerically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SVValue {
    pi2_coeff: Rational,
}

impl SVValue {
    pub fn new(pi2_coeff: Rational) -> Self {
        SVValue { pi2_coeff }
    }

    pub fn zero() -> Self {
        SVValue {
            pi2_coeff: Rational::zero(),
        }
    }

    /// The rational q in q/pi^2.
    pub fn pi2_coeff(&self) -> &Rational {
        &self.pi2_coeff
    }

    /// Multiply by pi^2/3: exact, returns the rational q/3.
    pub fn times_pi2_over_3(&self) -> Rational {
        &self.pi2_coeff / rat_int(3)
    }

    pub fn scale(&self, factor: &Rational) -> SVValue {
        SVValue {
            pi2_coeff: &self.pi2_coeff * factor,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.pi2_coeff.is_zero()
    }
}

impl Add for SVValue {
    type Output = SVValue;
    fn add(self, rhs: SVValue) -> SVValue {
        SVValue {
            pi2_coeff: self.pi2_coeff + rhs.pi2_coeff,
        }
    }
}

impl AddAssign for SVValue {
    fn add_assign(&mut self, rhs: SVValue) {
        self.pi2_coeff += rhs.pi2_coeff;
    }
}

impl Sub for SVValue {
    type Output = SVValue;
    fn sub(self, rhs: SVValue) -> SVValue {
        SVValue {
            pi2_coeff: self.pi2_coeff - rhs.pi2_coeff,
        }
    }
}

impl Neg for SVValue {
    type Output = SVValue;
    fn neg(self) -> SVValue {
        SVValue {
            pi2_coeff: -self.pi2_coeff,
        }
    }
}

impl Mul<Rational> for SVValue {
    type Output = SVValue;
    fn mul(self, rhs: Rational) -> SVValue {
        SVValue {
            pi2_coeff: self.pi2_coeff * rhs,
        }
    }
}

impl fmt::Display for SVValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/pi^2", rational_string(&self.pi2_coeff))
    }
}

/// Convenience: deviation as an f64 for logging (never used in assertions).
pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}
