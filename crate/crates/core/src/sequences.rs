//! Finite revolving sequences.
//!
//! A word is a finite list of digits read with 1-based positions; anything
//! past the end is taken to be zero. Three conditions constrain how the
//! nonzero digits may follow one another:
//!
//! * GRC: each nonzero digit is the previous nonzero digit times `e^{iθ}`.
//! * SRC: the previous nonzero digit at position `j` is multiplied by
//!   `e^{+iθ}` when `j` is odd and by `e^{−iθ}` when `j` is even.
//! * TRC: each nonzero digit either repeats the previous nonzero digit or
//!   advances it by `e^{iθ}`.
//!
//! The first nonzero digit is unconstrained under [`FirstDigitPolicy::Free`]
//! and must be `1` under [`FirstDigitPolicy::MustBeOne`].

use std::fmt;
use std::str::FromStr;

use crate::alphabet::{rotate, Angle, Digit};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    Grc,
    Src,
    Trc,
}

impl Condition {
    pub fn name(&self) -> &'static str {
        match self {
            Condition::Grc => "grc",
            Condition::Src => "src",
            Condition::Trc => "trc",
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "grc" => Ok(Condition::Grc),
            "src" => Ok(Condition::Src),
            "trc" => Ok(Condition::Trc),
            _ => Err(Error::InvalidParameter(format!("unknown condition '{s}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FirstDigitPolicy {
    #[default]
    Free,
    MustBeOne,
}

impl FirstDigitPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            FirstDigitPolicy::Free => "free",
            FirstDigitPolicy::MustBeOne => "one",
        }
    }
}

impl FromStr for FirstDigitPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "free" => Ok(FirstDigitPolicy::Free),
            "one" | "must-be-one" => Ok(FirstDigitPolicy::MustBeOne),
            _ => Err(Error::InvalidParameter(format!("unknown policy '{s}'"))),
        }
    }
}

/// A finite digit word over `Δ_θ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RevolvingSequence {
    angle: Angle,
    digits: Vec<Digit>,
}

impl RevolvingSequence {
    pub fn new(angle: Angle, digits: Vec<Digit>) -> Result<Self> {
        let order = angle.order();
        if let Some(bad) = digits
            .iter()
            .find(|d| matches!(d, Digit::Unit(k) if u64::from(*k) >= order))
        {
            return Err(Error::InvalidSequence(format!(
                "digit {bad:?} is not reduced modulo the order {order} of angle {angle}"
            )));
        }
        Ok(RevolvingSequence { angle, digits })
    }

    pub fn zeros(angle: Angle, len: usize) -> Self {
        RevolvingSequence {
            angle,
            digits: vec![Digit::Zero; len],
        }
    }

    /// Parses the comma-separated exponent form, `z` marking a zero digit:
    /// `"0,z,1,1"` is `(1, 0, e^{iθ}, e^{iθ})`. The empty string is the
    /// empty word. Exponents are reduced modulo the angle's order.
    pub fn parse(text: &str, angle: Angle) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(RevolvingSequence::zeros(angle, 0));
        }
        let digits = text
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                if tok.eq_ignore_ascii_case("z") {
                    Ok(Digit::Zero)
                } else {
                    tok.parse::<i64>()
                        .map(|k| Digit::unit(k, angle))
                        .map_err(|_| Error::Parse {
                            line: 1,
                            message: format!("bad digit '{tok}' (expected an exponent or 'z')"),
                        })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RevolvingSequence { angle, digits })
    }

    pub fn angle(&self) -> Angle {
        self.angle
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at 1-based position `n`; positions past the end read as zero.
    pub fn digit(&self, n: usize) -> Digit {
        assert!(n >= 1, "positions are 1-based");
        self.digits.get(n - 1).copied().unwrap_or(Digit::Zero)
    }

    /// Every digit multiplied by `e^{i·steps·θ}`.
    pub fn rotated(&self, steps: i64) -> Self {
        RevolvingSequence {
            angle: self.angle,
            digits: self
                .digits
                .iter()
                .map(|&d| rotate(d, steps, self.angle))
                .collect(),
        }
    }

    /// The word with `count` zero digits appended.
    pub fn padded(&self, count: usize) -> Self {
        let mut digits = self.digits.clone();
        digits.extend(std::iter::repeat_n(Digit::Zero, count));
        RevolvingSequence {
            angle: self.angle,
            digits,
        }
    }
}

impl fmt::Display for RevolvingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_digits(&self.digits, f)
    }
}

fn format_digits(digits: &[Digit], f: &mut impl fmt::Write) -> fmt::Result {
    for (i, d) in digits.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        match d {
            Digit::Zero => f.write_char('z')?,
            Digit::Unit(k) => write!(f, "{k}")?,
        }
    }
    Ok(())
}

/// Smallest 1-based position holding a nonzero digit.
pub fn first_nonzero_index(s: &RevolvingSequence) -> Option<usize> {
    s.digits.iter().position(|d| !d.is_zero()).map(|i| i + 1)
}

/// Largest 1-based position `j ≤ k` holding a nonzero digit.
pub fn last_nonzero_up_to(s: &RevolvingSequence, k: usize) -> Result<Option<usize>> {
    if k == 0 || k > s.len() {
        return Err(Error::IndexOutOfRange {
            index: k,
            len: s.len(),
        });
    }
    Ok(s.digits[..k].iter().rposition(|d| !d.is_zero()).map(|i| i + 1))
}

/// Binary static sequence: `bits[n]` is set when the digit at `n` is nonzero
/// and the next nonzero digit of the word equals it. A digit with no nonzero
/// digit after it inside the word gets a zero bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bss {
    bits: Vec<bool>,
}

impl Bss {
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl fmt::Display for Bss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn compute_bss(s: &RevolvingSequence) -> Bss {
    Bss {
        bits: bss_bits(&s.digits),
    }
}

pub(crate) fn bss_bits(digits: &[Digit]) -> Vec<bool> {
    let mut bits = vec![false; digits.len()];
    let mut next_nonzero = None;
    for (i, &d) in digits.iter().enumerate().rev() {
        if !d.is_zero() {
            bits[i] = next_nonzero == Some(d);
            next_nonzero = Some(d);
        }
    }
    bits
}

/// Nonzero digits permitted at the next position, in ascending order.
#[derive(Clone, Copy, Debug)]
enum Choices {
    /// `Unit(0) .. Unit(n)`.
    All(u32),
    One(Digit),
    Two(Digit, Digit),
}

impl Choices {
    fn contains(self, d: Digit) -> bool {
        match self {
            Choices::All(n) => matches!(d, Digit::Unit(k) if k < n),
            Choices::One(a) => a == d,
            Choices::Two(a, b) => a == d || b == d,
        }
    }

    /// Smallest permitted digit strictly greater than `current`.
    fn after(self, current: Digit) -> Option<Digit> {
        match self {
            Choices::All(n) => match current {
                Digit::Zero => Some(Digit::Unit(0)),
                Digit::Unit(k) if k + 1 < n => Some(Digit::Unit(k + 1)),
                Digit::Unit(_) => None,
            },
            Choices::One(a) => (a > current).then_some(a),
            Choices::Two(a, b) => [a, b].into_iter().find(|&x| x > current),
        }
    }
}

/// Last nonzero digit seen so far, with its 1-based position.
type Last = Option<(usize, Digit)>;

fn choices(condition: Condition, policy: FirstDigitPolicy, angle: Angle, last: Last) -> Choices {
    let Some((pos, prev)) = last else {
        return match policy {
            FirstDigitPolicy::Free => Choices::All(angle.order() as u32),
            FirstDigitPolicy::MustBeOne => Choices::One(Digit::Unit(0)),
        };
    };
    match condition {
        Condition::Grc => Choices::One(rotate(prev, 1, angle)),
        Condition::Src => {
            let step = if pos % 2 == 1 { 1 } else { -1 };
            Choices::One(rotate(prev, step, angle))
        }
        Condition::Trc => {
            let next = rotate(prev, 1, angle);
            match prev.cmp(&next) {
                std::cmp::Ordering::Less => Choices::Two(prev, next),
                std::cmp::Ordering::Greater => Choices::Two(next, prev),
                std::cmp::Ordering::Equal => Choices::One(prev),
            }
        }
    }
}

pub fn validate(s: &RevolvingSequence, condition: Condition, policy: FirstDigitPolicy) -> bool {
    validate_digits(&s.digits, s.angle, condition, policy)
}

pub(crate) fn validate_digits(
    digits: &[Digit],
    angle: Angle,
    condition: Condition,
    policy: FirstDigitPolicy,
) -> bool {
    let mut last: Last = None;
    for (i, &d) in digits.iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        if !choices(condition, policy, angle, last).contains(d) {
            return false;
        }
        last = Some((i + 1, d));
    }
    true
}

/// Length caps for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_len_trc: usize,
    pub max_len_grc_src: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_len_trc: 16,
            max_len_grc_src: 24,
        }
    }
}

impl EnumerationBudget {
    pub fn check(&self, condition: Condition, len: usize) -> Result<()> {
        let cap = match condition {
            Condition::Trc => self.max_len_trc,
            Condition::Grc | Condition::Src => self.max_len_grc_src,
        };
        if len > cap {
            return Err(Error::BudgetExceeded(format!(
                "{condition} words of length {len} exceed the enumeration cap of {cap}"
            )));
        }
        Ok(())
    }
}

/// Every valid word of a fixed length, in lexicographic order
/// (`Zero < Unit(0) < Unit(1) < …`, first position most significant).
///
/// Use [`Enumeration::next_word`] to walk the words without allocating;
/// the `Iterator` impl yields owned [`RevolvingSequence`]s.
#[derive(Clone, Debug)]
pub struct Enumeration {
    condition: Condition,
    policy: FirstDigitPolicy,
    angle: Angle,
    digits: Vec<Digit>,
    // last[i]: last nonzero digit within the first i positions.
    last: Vec<Last>,
    started: bool,
    done: bool,
}

impl Enumeration {
    fn new(condition: Condition, angle: Angle, len: usize, policy: FirstDigitPolicy) -> Self {
        Enumeration {
            condition,
            policy,
            angle,
            digits: vec![Digit::Zero; len],
            last: vec![None; len + 1],
            started: false,
            done: false,
        }
    }

    pub fn next_word(&mut self) -> Option<&[Digit]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.digits);
        }
        let n = self.digits.len();
        for pos in (0..n).rev() {
            let ch = choices(self.condition, self.policy, self.angle, self.last[pos]);
            if let Some(d) = ch.after(self.digits[pos]) {
                self.digits[pos] = d;
                self.last[pos + 1] = Some((pos + 1, d));
                for j in pos + 1..n {
                    self.digits[j] = Digit::Zero;
                    self.last[j + 1] = self.last[pos + 1];
                }
                return Some(&self.digits);
            }
        }
        self.done = true;
        None
    }
}

impl Iterator for Enumeration {
    type Item = RevolvingSequence;

    fn next(&mut self) -> Option<RevolvingSequence> {
        let angle = self.angle;
        self.next_word().map(|w| RevolvingSequence {
            angle,
            digits: w.to_vec(),
        })
    }
}

pub fn enumerate(
    condition: Condition,
    angle: Angle,
    len: usize,
    policy: FirstDigitPolicy,
) -> Result<Enumeration> {
    enumerate_with_budget(condition, angle, len, policy, EnumerationBudget::default())
}

pub fn enumerate_with_budget(
    condition: Condition,
    angle: Angle,
    len: usize,
    policy: FirstDigitPolicy,
    budget: EnumerationBudget,
) -> Result<Enumeration> {
    budget.check(condition, len)?;
    Ok(Enumeration::new(condition, angle, len, policy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angle(s: &str) -> Angle {
        s.parse().unwrap()
    }

    fn word(s: &str, a: &str) -> RevolvingSequence {
        RevolvingSequence::parse(s, angle(a)).unwrap()
    }

    #[test]
    fn first_nonzero() {
        assert_eq!(first_nonzero_index(&word("z,z,0,1", "1/4")), Some(3));
        assert_eq!(first_nonzero_index(&word("z,z,z", "1/4")), None);
        assert_eq!(first_nonzero_index(&word("0", "1/4")), Some(1));
    }

    #[test]
    fn last_nonzero() {
        let w = word("0,z,1,z", "1/4");
        assert_eq!(last_nonzero_up_to(&w, 4).unwrap(), Some(3));
        assert_eq!(last_nonzero_up_to(&w, 2).unwrap(), Some(1));
        assert_eq!(last_nonzero_up_to(&word("z,z", "1/4"), 2).unwrap(), None);
        assert!(matches!(
            last_nonzero_up_to(&w, 5),
            Err(Error::IndexOutOfRange { index: 5, len: 4 })
        ));
        assert!(last_nonzero_up_to(&w, 0).is_err());
    }

    #[test]
    fn ternary_example_validates() {
        // 1, 0, 1, i, i, −1 at θ = π/2
        let w = word("0,z,0,1,1,2", "1/4");
        assert!(validate(&w, Condition::Trc, FirstDigitPolicy::MustBeOne));
        assert!(!validate(&w, Condition::Grc, FirstDigitPolicy::MustBeOne));
    }

    #[test]
    fn grc_examples() {
        let p = FirstDigitPolicy::Free;
        assert!(validate(&word("0,z,1,2", "1/4"), Condition::Grc, p));
        assert!(!validate(&word("0,0", "1/4"), Condition::Grc, p));
    }

    #[test]
    fn src_parity_rule() {
        // 1, 0, i, 1: the digit at position 4 should be −1 (j₀ = 3 is odd).
        let p = FirstDigitPolicy::Free;
        assert!(!validate(&word("0,z,1,0", "1/4"), Condition::Src, p));
        assert!(validate(&word("0,z,1,2", "1/4"), Condition::Src, p));
        // j₀ = 2 is even, so the step goes backwards.
        assert!(validate(&word("z,0,3", "1/4"), Condition::Src, p));
        assert!(!validate(&word("z,0,1", "1/4"), Condition::Src, p));
    }

    #[test]
    fn policy_constrains_first_digit() {
        let w = word("z,1,2", "1/4");
        assert!(validate(&w, Condition::Grc, FirstDigitPolicy::Free));
        assert!(!validate(&w, Condition::Grc, FirstDigitPolicy::MustBeOne));
    }

    #[test]
    fn bss_examples() {
        assert_eq!(compute_bss(&word("0,z,0,1,1,2", "1/4")).to_string(), "100100");
        assert_eq!(compute_bss(&word("z,z,z", "1/4")).to_string(), "000");
        assert_eq!(compute_bss(&word("0,0", "1/4")).to_string(), "10");
        assert_eq!(compute_bss(&word("", "1/4")).to_string(), "");
    }

    #[test]
    fn enumerate_trc_small() {
        let words: Vec<String> = enumerate(Condition::Trc, angle("1/3"), 2, FirstDigitPolicy::MustBeOne)
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, ["z,z", "z,0", "0,z", "0,0", "0,1"]);
    }

    #[test]
    fn enumerate_grc_counts_and_empty_word() {
        let n = enumerate(Condition::Grc, angle("1/4"), 3, FirstDigitPolicy::MustBeOne)
            .unwrap()
            .count();
        assert_eq!(n, 8);
        let empty: Vec<_> = enumerate(Condition::Grc, angle("1/4"), 0, FirstDigitPolicy::Free)
            .unwrap()
            .collect();
        assert_eq!(empty.len(), 1);
        assert!(empty[0].is_empty());
    }

    #[test]
    fn enumerate_free_grc_order() {
        let words: Vec<String> = enumerate(Condition::Grc, angle("1/2"), 2, FirstDigitPolicy::Free)
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, ["z,z", "z,0", "z,1", "0,z", "0,1", "1,z", "1,0"]);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            enumerate(Condition::Trc, angle("1/3"), 17, FirstDigitPolicy::MustBeOne),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(enumerate(Condition::Grc, angle("1/4"), 24, FirstDigitPolicy::MustBeOne).is_ok());
        let tight = EnumerationBudget {
            max_len_trc: 2,
            max_len_grc_src: 2,
        };
        assert!(enumerate_with_budget(Condition::Src, angle("1/4"), 3, FirstDigitPolicy::Free, tight).is_err());
    }

    #[test]
    fn zero_angle_grc_is_constant_tail() {
        let a = angle("0/1");
        assert!(validate(&word("z,0,0,z,0", "0"), Condition::Grc, FirstDigitPolicy::Free));
        let n = enumerate(Condition::Trc, a, 4, FirstDigitPolicy::MustBeOne).unwrap().count();
        assert_eq!(n, 16);
    }

    #[test]
    fn parse_rejects_garbage_and_reduces() {
        assert!(RevolvingSequence::parse("0,q", angle("1/4")).is_err());
        assert_eq!(word("5,-1", "1/4").to_string(), "1,3");
        assert!(RevolvingSequence::new(angle("1/4"), vec![Digit::Unit(4)]).is_err());
    }
}
