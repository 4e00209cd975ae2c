//! Revolving representations of Gaussian integers in base `1 + i`.
//!
//! A word `(δ₀, …, δₙ)` over `{0, 1, −i, −1, i}` whose nonzero digits cycle
//! `1 → −i → −1 → i → 1` (the GRC with `θ = −π/2`) represents
//! `Σ_k δ_{n−k} (1 + i)^k`, most significant digit first. Everything here
//! is integer arithmetic.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use crate::alphabet::{Angle, Digit, Sign};
use crate::error::{Error, Result};
use crate::sequences::{enumerate, validate, Condition, FirstDigitPolicy, RevolvingSequence};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct GaussianInt {
    pub x: i64,
    pub y: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { x: 0, y: 0 };
    pub const BASE: GaussianInt = GaussianInt { x: 1, y: 1 };

    pub fn new(x: i64, y: i64) -> Self {
        GaussianInt { x, y }
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;

    fn add(self, o: GaussianInt) -> GaussianInt {
        GaussianInt::new(self.x + o.x, self.y + o.y)
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;

    fn mul(self, o: GaussianInt) -> GaussianInt {
        GaussianInt::new(self.x * o.x - self.y * o.y, self.x * o.y + self.y * o.x)
    }
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.x, self.y)
    }
}

impl FromStr for GaussianInt {
    type Err = Error;

    /// Parses `"x,y"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 1,
            message: format!("'{s}' is not a Gaussian integer of the form x,y"),
        };
        let (x, y) = s.split_once(',').ok_or_else(bad)?;
        Ok(GaussianInt::new(
            x.trim().parse().map_err(|_| bad())?,
            y.trim().parse().map_err(|_| bad())?,
        ))
    }
}

/// The clockwise quarter turn `θ = −π/2`.
pub fn revolving_angle() -> Angle {
    Angle::from_fraction(1, 4, Sign::Minus).expect("quarter turn")
}

/// `e^{−ikπ/2} = (−i)^k` as a Gaussian integer.
fn unit_value(d: Digit) -> GaussianInt {
    match d {
        Digit::Zero => GaussianInt::ZERO,
        Digit::Unit(k) => match k % 4 {
            0 => GaussianInt::new(1, 0),
            1 => GaussianInt::new(0, -1),
            2 => GaussianInt::new(-1, 0),
            _ => GaussianInt::new(0, 1),
        },
    }
}

fn horner(digits: &[Digit]) -> GaussianInt {
    digits
        .iter()
        .fold(GaussianInt::ZERO, |acc, &d| acc * GaussianInt::BASE + unit_value(d))
}

pub fn decode(s: &RevolvingSequence) -> Result<GaussianInt> {
    decode_with_policy(s, FirstDigitPolicy::Free)
}

pub fn decode_with_policy(s: &RevolvingSequence, policy: FirstDigitPolicy) -> Result<GaussianInt> {
    if s.angle() != revolving_angle() {
        return Err(Error::InvalidSequence(format!(
            "revolving representations use theta = -1/4, not {}",
            s.angle()
        )));
    }
    if !validate(s, Condition::Grc, policy) {
        return Err(Error::InvalidSequence(format!(
            "{s} does not follow the cycle 1 -> -i -> -1 -> i"
        )));
    }
    Ok(horner(s.digits()))
}

/// Shortest revolving word for `z`, searching lengths `0..=max_len` in
/// enumeration order.
pub fn encode(z: GaussianInt, max_len: usize, policy: FirstDigitPolicy) -> Result<RevolvingSequence> {
    let angle = revolving_angle();
    for len in 0..=max_len {
        let mut words = enumerate(Condition::Grc, angle, len, policy)?;
        while let Some(w) = words.next_word() {
            if horner(w) == z {
                return RevolvingSequence::new(angle, w.to_vec());
            }
        }
    }
    Err(Error::NotFound {
        value: z.to_string(),
        max_len,
    })
}
