//! Truncated series over revolving sequences and the point clouds they
//! generate.
//!
//! Three series shapes are supported:
//!
//! * GRC: `Σ δ_n α^n`
//! * SRC: `Σ δ_n Π_{j≤n} η_j` with `η_j = α` for odd `j` and `conj(α)` for even `j`
//! * TRC: `Σ δ_n α^n (β/α)^{b_n}` where `b` is the binary static sequence
//!
//! With [`Start::Zero`] word position `m` carries exponent (or product
//! length) `m − 1`; with [`Start::One`] it carries `m`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::alphabet::{digit_value, Angle, Digit};
use crate::error::{Error, Result};
use crate::io::format_complex;
use crate::sequences::{bss_bits, enumerate, Condition, FirstDigitPolicy, RevolvingSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Start {
    Zero,
    One,
}

/// Parameters shared by every family: the contraction `α`, the optional
/// `β` of the ternary families, and the rotation angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyParams {
    pub alpha: Complex64,
    pub beta: Option<Complex64>,
    pub angle: Angle,
}

impl FamilyParams {
    pub fn new(alpha: Complex64, beta: Option<Complex64>, angle: Angle) -> Result<Self> {
        if !(alpha.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "|alpha| = {} must be below 1",
                alpha.norm()
            )));
        }
        if let Some(b) = beta {
            if !(b.norm() < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "|beta| = {} must be below 1",
                    b.norm()
                )));
            }
        }
        Ok(FamilyParams { alpha, beta, angle })
    }

    pub fn with_alpha(&self, alpha: Complex64) -> Result<Self> {
        FamilyParams::new(alpha, self.beta, self.angle)
    }

    pub(crate) fn describe(&self, out: &mut Vec<(String, String)>) {
        out.push(("alpha".into(), format_complex(self.alpha)));
        if let Some(b) = self.beta {
            out.push(("beta".into(), format_complex(b)));
        }
        out.push(("theta".into(), self.angle.to_string()));
    }
}

/// The ten sequence-side set families.
///
/// `X*` and `T*` sums start at `n = 1`, `H*` sums at `n = 0`; the `*1` /
/// `*Sub1` variants force the first nonzero digit to be `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    X1,
    X,
    H1,
    H,
    X2Sub1,
    X2,
    H2Sub1,
    H2,
    T1,
    T,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::X1,
        Family::X,
        Family::H1,
        Family::H,
        Family::X2Sub1,
        Family::X2,
        Family::H2Sub1,
        Family::H2,
        Family::T1,
        Family::T,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Family::X1 => "x1",
            Family::X => "x",
            Family::H1 => "h1",
            Family::H => "h",
            Family::X2Sub1 => "x2sub1",
            Family::X2 => "x2",
            Family::H2Sub1 => "h2sub1",
            Family::H2 => "h2",
            Family::T1 => "t1",
            Family::T => "t",
        }
    }

    pub fn condition(&self) -> Condition {
        match self {
            Family::X1 | Family::X | Family::H1 | Family::H => Condition::Grc,
            Family::X2Sub1 | Family::X2 | Family::H2Sub1 | Family::H2 => Condition::Src,
            Family::T1 | Family::T => Condition::Trc,
        }
    }

    pub fn policy(&self) -> FirstDigitPolicy {
        match self {
            Family::X1 | Family::H1 | Family::X2Sub1 | Family::H2Sub1 | Family::T1 => {
                FirstDigitPolicy::MustBeOne
            }
            _ => FirstDigitPolicy::Free,
        }
    }

    pub fn start(&self) -> Start {
        match self {
            Family::H1 | Family::H | Family::H2Sub1 | Family::H2 => Start::Zero,
            _ => Start::One,
        }
    }

    pub fn needs_beta(&self) -> bool {
        matches!(self, Family::T1 | Family::T)
    }

    /// The first-digit-one counterpart of a free family, and vice versa.
    pub fn normalized(&self) -> Family {
        match self {
            Family::X => Family::X1,
            Family::H => Family::H1,
            Family::X2 => Family::X2Sub1,
            Family::H2 => Family::H2Sub1,
            Family::T => Family::T1,
            f => *f,
        }
    }

    pub fn free(&self) -> Family {
        match self {
            Family::X1 => Family::X,
            Family::H1 => Family::H,
            Family::X2Sub1 => Family::X2,
            Family::H2Sub1 => Family::H2,
            Family::T1 => Family::T,
            f => *f,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name() == lower)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family '{s}'")))
    }
}

/// Ordered key/value description of how a cloud was produced.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CloudMeta {
    entries: Vec<(String, String)>,
}

impl CloudMeta {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `key`, replacing an earlier value in place.
    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) {
        let key = key.into();
        let value = value.into();
        match self.entries.iter_mut().find(|(k, _)| *k == key) {
            Some(entry) => entry.1 = value,
            None => self.entries.push((key, value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}

/// A finite, ordered list of points together with its provenance.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Complex64>,
    pub meta: CloudMeta,
}

impl PointCloud {
    pub fn new(points: Vec<Complex64>, meta: CloudMeta) -> Self {
        PointCloud { points, meta }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Every point multiplied by `factor`; metadata is kept.
    pub fn scaled(&self, factor: Complex64) -> PointCloud {
        PointCloud {
            points: self.points.iter().map(|&z| z * factor).collect(),
            meta: self.meta.clone(),
        }
    }
}

pub(crate) fn unit_table(angle: Angle) -> Vec<Complex64> {
    angle.units().map(|d| digit_value(d, angle)).collect()
}

#[inline]
fn value_of(d: Digit, table: &[Complex64]) -> Option<Complex64> {
    match d {
        Digit::Zero => None,
        Digit::Unit(k) => Some(table[k as usize]),
    }
}

fn first_power(alpha: Complex64, start: Start) -> Complex64 {
    match start {
        Start::Zero => Complex64::new(1.0, 0.0),
        Start::One => alpha,
    }
}

fn grc_sum(digits: &[Digit], table: &[Complex64], alpha: Complex64, start: Start) -> Complex64 {
    let mut power = first_power(alpha, start);
    let mut sum = Complex64::new(0.0, 0.0);
    for &d in digits {
        if let Some(v) = value_of(d, table) {
            sum += v * power;
        }
        power *= alpha;
    }
    sum
}

fn src_sum(digits: &[Digit], table: &[Complex64], alpha: Complex64, start: Start) -> Complex64 {
    let conj = alpha.conj();
    // η_j for the next factor to multiply in; j starts at 1.
    let mut j = 1usize;
    let mut product = Complex64::new(1.0, 0.0);
    if start == Start::One {
        product = alpha;
        j = 2;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for &d in digits {
        if let Some(v) = value_of(d, table) {
            sum += v * product;
        }
        product *= if j % 2 == 1 { alpha } else { conj };
        j += 1;
    }
    sum
}

fn trc_sum(
    digits: &[Digit],
    table: &[Complex64],
    alpha: Complex64,
    beta: Complex64,
    bits: &[bool],
) -> Complex64 {
    // previous = α^{n−1}, so a static term is δ_n α^{n−1} β.
    let mut previous = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for (&d, &b) in digits.iter().zip(bits) {
        let power = previous * alpha;
        if let Some(v) = value_of(d, table) {
            sum += if b { v * previous * beta } else { v * power };
        }
        previous = power;
    }
    sum
}

pub fn eval_grc_series(s: &RevolvingSequence, alpha: Complex64, start: Start) -> Complex64 {
    grc_sum(s.digits(), &unit_table(s.angle()), alpha, start)
}

pub fn eval_src_series(s: &RevolvingSequence, alpha: Complex64, start: Start) -> Complex64 {
    src_sum(s.digits(), &unit_table(s.angle()), alpha, start)
}

pub fn eval_trc_series(s: &RevolvingSequence, alpha: Complex64, beta: Complex64) -> Result<Complex64> {
    if alpha == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateParameter(
            "alpha = 0 leaves beta/alpha undefined".into(),
        ));
    }
    let bits = bss_bits(s.digits());
    Ok(trc_sum(s.digits(), &unit_table(s.angle()), alpha, beta, &bits))
}

/// Evaluates one word with the series that belongs to `family`.
pub fn eval_family(family: Family, params: &FamilyParams, s: &RevolvingSequence) -> Result<Complex64> {
    match family.condition() {
        Condition::Grc => Ok(eval_grc_series(s, params.alpha, family.start())),
        Condition::Src => Ok(eval_src_series(s, params.alpha, family.start())),
        Condition::Trc => {
            let beta = params
                .beta
                .ok_or_else(|| Error::MissingBeta(family.to_string()))?;
            eval_trc_series(s, params.alpha, beta)
        }
    }
}

/// Evaluates the family's series over every valid word of length `depth`,
/// in enumeration order.
pub fn make_cloud(family: Family, params: &FamilyParams, depth: usize) -> Result<PointCloud> {
    let condition = family.condition();
    let mut words = enumerate(condition, params.angle, depth, family.policy())?;
    let beta = match (family.needs_beta(), params.beta) {
        (true, None) => return Err(Error::MissingBeta(family.to_string())),
        (true, Some(b)) => {
            if params.alpha == Complex64::new(0.0, 0.0) {
                return Err(Error::DegenerateParameter(
                    "alpha = 0 leaves beta/alpha undefined".into(),
                ));
            }
            b
        }
        (false, _) => Complex64::new(0.0, 0.0),
    };
    let table = unit_table(params.angle);
    let alpha = params.alpha;
    let start = family.start();

    let mut points = Vec::new();
    let mut bits = vec![false; depth];
    while let Some(w) = words.next_word() {
        let z = match condition {
            Condition::Grc => grc_sum(w, &table, alpha, start),
            Condition::Src => src_sum(w, &table, alpha, start),
            Condition::Trc => {
                fill_bss(w, &mut bits);
                trc_sum(w, &table, alpha, beta, &bits)
            }
        };
        points.push(z);
    }

    let mut meta = CloudMeta::new();
    meta.insert("source", "sequence");
    meta.insert("family", family.name());
    let mut described = Vec::new();
    params.describe(&mut described);
    for (k, v) in described {
        if k != "beta" || family.needs_beta() {
            meta.insert(k, v);
        }
    }
    meta.insert("depth", depth.to_string());
    Ok(PointCloud::new(points, meta))
}

fn fill_bss(digits: &[Digit], bits: &mut [bool]) {
    let mut next_nonzero = None;
    for (i, &d) in digits.iter().enumerate().rev() {
        bits[i] = false;
        if !d.is_zero() {
            bits[i] = next_nonzero == Some(d);
            next_nonzero = Some(d);
        }
    }
}
