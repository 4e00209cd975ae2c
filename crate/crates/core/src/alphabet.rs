//! Exact rotation angles and the digit alphabet they generate.
//!
//! An [`Angle`] is a signed rational fraction of a full turn, `θ = ±2π·q/p`,
//! kept in lowest terms. The digit alphabet is `{0} ∪ {e^{ikθ}}`; a
//! [`Digit`] stores only the exponent `k` (reduced modulo the order of
//! `e^{iθ}`), so every sequence rule is checked with integer arithmetic and
//! floating point only appears in [`digit_value`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A rotation angle `sign · 2π · numerator / denominator` with
/// `numerator / denominator ≤ 1/2`.
///
/// The zero angle and the half turn are always stored with a positive sign,
/// since `−π` and `π` describe the same rotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Angle {
    numerator: u64,
    denominator: u64,
    sign: Sign,
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Angle {
    /// Builds `θ = sign · 2π · q / p`, reducing the fraction.
    pub fn from_fraction(q: u64, p: u64, sign: Sign) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidDenominator);
        }
        let g = gcd(q, p);
        let (numerator, denominator) = if q == 0 { (0, 1) } else { (q / g, p / g) };
        if 2 * numerator > denominator {
            return Err(Error::AngleOutOfRange {
                numerator,
                denominator,
            });
        }
        let sign = if numerator == 0 || 2 * numerator == denominator {
            Sign::Plus
        } else {
            sign
        };
        Ok(Angle {
            numerator,
            denominator,
            sign,
        })
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Order of `e^{iθ}` in the circle group, i.e. the size of the unit part
    /// of the alphabet.
    pub fn order(&self) -> u64 {
        if self.numerator == 0 {
            1
        } else {
            self.denominator
        }
    }

    pub fn radians(&self) -> f64 {
        self.sign.as_i64() as f64 * 2.0 * PI * self.numerator as f64 / self.denominator as f64
    }

    /// `e^{iθ}`, exact for orders 1, 2 and 4.
    pub fn unit(&self) -> Complex64 {
        digit_value(Digit::Unit(1 % self.order() as u32), *self)
    }

    /// Every unit digit `e^{ikθ}` for `k = 0..order`, in exponent order.
    pub fn units(&self) -> impl Iterator<Item = Digit> {
        (0..self.order() as u32).map(Digit::Unit)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.sign {
            Sign::Plus => "",
            Sign::Minus => "-",
        };
        write!(f, "{sign}{}/{}", self.numerator, self.denominator)
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// Parses `"±q/p"`, e.g. `"-1/4"` for `θ = −π/2`. A bare integer `q`
    /// is read as `q/1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            line: 1,
            message: format!("angle '{s}': {msg}"),
        };
        let t = s.trim();
        let (sign, rest) = match t.as_bytes().first() {
            Some(b'-') => (Sign::Minus, &t[1..]),
            Some(b'+') => (Sign::Plus, &t[1..]),
            _ => (Sign::Plus, t),
        };
        let (q, p) = match rest.split_once('/') {
            Some((q, p)) => (q.trim(), p.trim()),
            None => (rest.trim(), "1"),
        };
        let q: u64 = q.parse().map_err(|_| bad("numerator is not a non-negative integer"))?;
        let p: u64 = p.parse().map_err(|_| bad("denominator is not a positive integer"))?;
        Angle::from_fraction(q, p, sign)
    }
}

/// A digit of `Δ_θ`: zero, or `e^{ikθ}` stored as its exponent `k`.
///
/// The derived order (`Zero < Unit(0) < Unit(1) < …`) is the enumeration
/// order used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Digit {
    Zero,
    Unit(u32),
}

impl Digit {
    /// `e^{ikθ}` with `k` reduced modulo the angle's order.
    pub fn unit(k: i64, angle: Angle) -> Digit {
        Digit::Unit(k.rem_euclid(angle.order() as i64) as u32)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Digit::Zero)
    }
}

/// Multiplies `d` by `e^{i·steps·θ}`.
pub fn rotate(d: Digit, steps: i64, angle: Angle) -> Digit {
    match d {
        Digit::Zero => Digit::Zero,
        Digit::Unit(k) => Digit::unit(k as i64 + steps, angle),
    }
}

/// Complex value of a digit. Quarter-turn multiples come out exact.
pub fn digit_value(d: Digit, angle: Angle) -> Complex64 {
    let k = match d {
        Digit::Zero => return Complex64::new(0.0, 0.0),
        Digit::Unit(k) => k as u64,
    };
    // e^{ikθ} is the turn fraction (k·q mod p)/p, signed.
    let p = angle.denominator;
    let r = (k % p) * angle.numerator % p;
    let g = gcd(r, p);
    let (num, den) = if r == 0 { (0, 1) } else { (r / g, p / g) };
    let s = angle.sign.as_i64() as f64;
    match (num, den) {
        (0, 1) => Complex64::new(1.0, 0.0),
        (1, 2) => Complex64::new(-1.0, 0.0),
        (1, 4) => Complex64::new(0.0, s),
        (3, 4) => Complex64::new(0.0, -s),
        _ => {
            // Fold into (−1/2, 1/2] of a turn before converting.
            let signed = if 2 * num > den {
                num as f64 - den as f64
            } else {
                num as f64
            };
            Complex64::from_polar(1.0, s * 2.0 * PI * signed / den as f64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angle(s: &str) -> Angle {
        s.parse().unwrap()
    }

    #[test]
    fn quarter_turn_clockwise() {
        let a = Angle::from_fraction(1, 4, Sign::Minus).unwrap();
        assert_eq!((a.numerator(), a.denominator(), a.sign()), (1, 4, Sign::Minus));
        assert!((a.radians() + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_angle_has_order_one() {
        let a = Angle::from_fraction(0, 1, Sign::Plus).unwrap();
        assert_eq!(a.order(), 1);
        assert_eq!(Angle::from_fraction(0, 7, Sign::Minus).unwrap(), a);
    }

    #[test]
    fn fraction_is_reduced() {
        let a = Angle::from_fraction(2, 6, Sign::Plus).unwrap();
        assert_eq!((a.numerator(), a.denominator(), a.order()), (1, 3, 3));
    }

    #[test]
    fn rejects_bad_fractions() {
        assert!(matches!(
            Angle::from_fraction(1, 0, Sign::Plus),
            Err(Error::InvalidDenominator)
        ));
        assert!(matches!(
            Angle::from_fraction(2, 3, Sign::Plus),
            Err(Error::AngleOutOfRange { .. })
        ));
        // 3/6 reduces to 1/2, which is allowed.
        assert_eq!(Angle::from_fraction(3, 6, Sign::Minus).unwrap(), angle("1/2"));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(angle("-1/4").to_string(), "-1/4");
        assert_eq!(angle("+2/8").to_string(), "1/4");
        assert_eq!(angle("0").to_string(), "0/1");
        assert!("1/x".parse::<Angle>().is_err());
        assert!("-/4".parse::<Angle>().is_err());
    }

    #[test]
    fn rotate_examples() {
        let a = angle("1/4");
        assert_eq!(rotate(Digit::Unit(0), 1, a), Digit::Unit(1));
        assert_eq!(rotate(Digit::Zero, 5, a), Digit::Zero);
        assert_eq!(rotate(Digit::Unit(3), 1, a), Digit::Unit(0));
        assert_eq!(rotate(Digit::Unit(0), -1, a), Digit::Unit(3));
    }

    #[test]
    fn digit_values() {
        let a = angle("1/4");
        assert_eq!(digit_value(Digit::Unit(2), a), Complex64::new(-1.0, 0.0));
        assert_eq!(digit_value(Digit::Unit(1), a), Complex64::new(0.0, 1.0));
        assert_eq!(digit_value(Digit::Unit(1), angle("-1/4")), Complex64::new(0.0, -1.0));
        assert_eq!(digit_value(Digit::Zero, a), Complex64::new(0.0, 0.0));

        let v = digit_value(Digit::Unit(1), angle("1/3"));
        assert!((v.re + 0.5).abs() < 1e-15);
        assert!((v.im - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quarter_turns_inside_larger_orders_are_exact() {
        // e^{2iθ} for θ = 2π/8 is exactly i.
        assert_eq!(digit_value(Digit::Unit(2), angle("1/8")), Complex64::new(0.0, 1.0));
        assert_eq!(digit_value(Digit::Unit(3), angle("1/6")), Complex64::new(-1.0, 0.0));
    }
}
