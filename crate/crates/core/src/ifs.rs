//! Similarity maps `z ↦ a·z + c` and `z ↦ a·conj(z) + c`, iterated function
//! systems built from them, and three ways of approximating an attractor:
//! depth-n orbits, fixed points of compositions, and the chaos game.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::Angle;
use crate::error::{Error, Result};
use crate::io::format_complex;
use crate::series::{CloudMeta, Family, FamilyParams, PointCloud};

/// Default cap on the number of points an orbit or Williams cloud may hold.
pub const DEFAULT_MAX_POINTS: usize = 1_594_323; // 3^13

/// Fixed points closer than this are treated as the same point.
pub const WILLIAMS_DEDUP_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineConjMap {
    pub a: Complex64,
    pub c: Complex64,
    pub conj: bool,
}

impl AffineConjMap {
    pub fn linear(a: Complex64, c: Complex64) -> Self {
        AffineConjMap { a, c, conj: false }
    }

    pub fn conjugate(a: Complex64, c: Complex64) -> Self {
        AffineConjMap { a, c, conj: true }
    }

    pub fn is_contraction(&self) -> bool {
        self.a.norm() < 1.0
    }
}

pub fn apply(m: &AffineConjMap, z: Complex64) -> Complex64 {
    let arg = if m.conj { z.conj() } else { z };
    m.a * arg + m.c
}

/// `z ↦ outer(inner(z))`.
pub fn compose(outer: &AffineConjMap, inner: &AffineConjMap) -> AffineConjMap {
    let twist = |w: Complex64| if outer.conj { w.conj() } else { w };
    AffineConjMap {
        a: outer.a * twist(inner.a),
        c: outer.a * twist(inner.c) + outer.c,
        conj: outer.conj ^ inner.conj,
    }
}

pub fn fixed_point(m: &AffineConjMap) -> Result<Complex64> {
    if !m.is_contraction() {
        return Err(Error::NoUniqueFixedPoint(m.a.norm()));
    }
    if !m.conj {
        return Ok(m.c / (Complex64::new(1.0, 0.0) - m.a));
    }
    // z = a·conj(z) + c as a real 2×2 system in (x, y):
    //   (1 − p)x − q y = r
    //   −q x + (1 + p)y = s
    let (p, q) = (m.a.re, m.a.im);
    let (r, s) = (m.c.re, m.c.im);
    let det = 1.0 - p * p - q * q;
    let x = ((1.0 + p) * r + q * s) / det;
    let y = (q * r + (1.0 - p) * s) / det;
    Ok(Complex64::new(x, y))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ifs {
    maps: Vec<AffineConjMap>,
    label: String,
}

impl Ifs {
    pub fn new(maps: Vec<AffineConjMap>, label: impl Into<String>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidParameter("an IFS needs at least one map".into()));
        }
        if let Some(m) = maps.iter().find(|m| !m.is_contraction()) {
            return Err(Error::InvalidParameter(format!(
                "map with |a| = {} is not a contraction",
                m.a.norm()
            )));
        }
        Ok(Ifs {
            maps,
            label: label.into(),
        })
    }

    pub fn maps(&self) -> &[AffineConjMap] {
        &self.maps
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The system whose attractor a first-digit-one family parametrizes:
    ///
    /// * `x1`: `αz`, `αe^{iθ}z + α`
    /// * `h1`: `αz`, `αe^{iθ}z + 1`
    /// * `x2sub1`: `α·conj(z)`, `αe^{iθ}·conj(z) + α`
    /// * `h2sub1`: `α·conj(z)`, `αe^{iθ}·conj(z) + 1`
    /// * `t1`: `αz`, `αe^{iθ}z + α`, `αz + β`
    ///
    /// Free families are unions of rotated copies and have no system of
    /// their own.
    pub fn for_family(family: Family, params: &FamilyParams) -> Result<Ifs> {
        let alpha = params.alpha;
        let rot = alpha * params.angle.unit();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let maps = match family {
            Family::X1 => vec![AffineConjMap::linear(alpha, zero), AffineConjMap::linear(rot, alpha)],
            Family::H1 => vec![AffineConjMap::linear(alpha, zero), AffineConjMap::linear(rot, one)],
            Family::X2Sub1 => vec![
                AffineConjMap::conjugate(alpha, zero),
                AffineConjMap::conjugate(rot, alpha),
            ],
            Family::H2Sub1 => vec![
                AffineConjMap::conjugate(alpha, zero),
                AffineConjMap::conjugate(rot, one),
            ],
            Family::T1 => {
                let beta = params
                    .beta
                    .ok_or_else(|| Error::MissingBeta(family.to_string()))?;
                vec![
                    AffineConjMap::linear(alpha, zero),
                    AffineConjMap::linear(rot, alpha),
                    AffineConjMap::linear(alpha, beta),
                ]
            }
            free => {
                return Err(Error::InvalidParameter(format!(
                    "family {free} is a union of rotated copies of {} and has no IFS of its own",
                    free.normalized()
                )))
            }
        };
        Ifs::new(maps, family.name())
    }

    /// Parses one map per line as `a_re,a_im,c_re,c_im,conj` where `conj`
    /// is `0`/`1` or `false`/`true`. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str, label: impl Into<String>) -> Result<Ifs> {
        let mut maps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| Error::Parse { line: i + 1, message };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 5 {
                return Err(bad(format!("expected 5 fields, found {}", fields.len())));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| bad(format!("'{s}' is not a number")))
            };
            let conj = match fields[4] {
                "0" | "false" => false,
                "1" | "true" => true,
                other => return Err(bad(format!("'{other}' is not a conjugation flag"))),
            };
            maps.push(AffineConjMap {
                a: Complex64::new(num(fields[0])?, num(fields[1])?),
                c: Complex64::new(num(fields[2])?, num(fields[3])?),
                conj,
            });
        }
        Ifs::new(maps, label)
    }
}

/// The five named dragons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    Levy,
    Tiling,
    Heighway,
    Twindragon,
    Terdragon,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::Levy,
        Preset::Tiling,
        Preset::Heighway,
        Preset::Twindragon,
        Preset::Terdragon,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Levy => "levy",
            Preset::Tiling => "tiling",
            Preset::Heighway => "heighway",
            Preset::Twindragon => "twindragon",
            Preset::Terdragon => "terdragon",
        }
    }

    /// The first-digit-one family whose closure is this dragon.
    pub fn family(&self) -> Family {
        match self {
            Preset::Levy | Preset::Tiling => Family::X1,
            Preset::Heighway | Preset::Twindragon => Family::H1,
            Preset::Terdragon => Family::T1,
        }
    }

    pub fn params(&self) -> FamilyParams {
        let sqrt3_6 = 3f64.sqrt() / 6.0;
        let (alpha, beta, angle) = match self {
            Preset::Levy => (Complex64::new(0.5, -0.5), None, "1/4"),
            Preset::Tiling => (Complex64::new(0.5, -0.5), None, "-1/4"),
            Preset::Heighway => (Complex64::new(0.5, 0.5), None, "1/4"),
            Preset::Twindragon => (Complex64::new(0.5, 0.5), None, "1/2"),
            Preset::Terdragon => {
                let alpha = Complex64::new(0.5, -sqrt3_6);
                (alpha, Some(alpha.conj()), "1/3")
            }
        };
        let angle: Angle = angle.parse().expect("preset angle literal");
        FamilyParams::new(alpha, beta, angle).expect("preset parameters contract")
    }

    pub fn ifs(&self) -> Ifs {
        let ifs = Ifs::for_family(self.family(), &self.params()).expect("preset IFS");
        Ifs {
            label: self.name().to_string(),
            ..ifs
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == lower)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

pub fn preset(name: &str) -> Result<Ifs> {
    Ok(name.parse::<Preset>()?.ifs())
}

fn ifs_meta(f: &Ifs, method: &str) -> CloudMeta {
    let mut meta = CloudMeta::new();
    meta.insert("source", "ifs");
    meta.insert("ifs", f.label());
    meta.insert("method", method);
    meta.insert("maps", f.maps.len().to_string());
    meta
}

fn check_points(what: &str, count: Option<usize>, max_points: usize) -> Result<usize> {
    match count {
        Some(n) if n <= max_points => Ok(n),
        _ => Err(Error::BudgetExceeded(format!(
            "{what} needs more than the allowed {max_points} points"
        ))),
    }
}

/// `(ψ_{i₁} ∘ … ∘ ψ_{iₙ})(seed)` for every address, `i₁` most significant.
pub fn orbit_depth(f: &Ifs, seed: Complex64, depth: usize) -> Result<PointCloud> {
    orbit_depth_bounded(f, seed, depth, DEFAULT_MAX_POINTS)
}

pub fn orbit_depth_bounded(
    f: &Ifs,
    seed: Complex64,
    depth: usize,
    max_points: usize,
) -> Result<PointCloud> {
    let m = f.maps.len();
    let depth_u32 = u32::try_from(depth).ok();
    check_points(
        "orbit",
        depth_u32.and_then(|d| m.checked_pow(d)),
        max_points,
    )?;
    let mut level = vec![seed];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * m);
        for map in &f.maps {
            next.extend(level.iter().map(|&z| apply(map, z)));
        }
        level = next;
    }
    let mut meta = ifs_meta(f, "orbit");
    meta.insert("seed", format_complex(seed));
    meta.insert("depth", depth.to_string());
    Ok(PointCloud::new(level, meta))
}

/// Fixed points of every composition of length `1..=depth`, shortest first,
/// with near-duplicates (within [`WILLIAMS_DEDUP_TOL`]) dropped.
pub fn williams_cloud(f: &Ifs, depth: usize) -> Result<PointCloud> {
    williams_cloud_bounded(f, depth, DEFAULT_MAX_POINTS)
}

pub fn williams_cloud_bounded(f: &Ifs, depth: usize, max_points: usize) -> Result<PointCloud> {
    let m = f.maps.len();
    let total = (1..=depth).try_fold(0usize, |acc, k| {
        let k = u32::try_from(k).ok()?;
        acc.checked_add(m.checked_pow(k)?)
    });
    check_points("Williams cloud", total, max_points)?;

    let mut dedup = PointSet::new(WILLIAMS_DEDUP_TOL);
    let mut points = Vec::new();
    let mut level: Vec<AffineConjMap> = Vec::new();
    for k in 1..=depth {
        level = if k == 1 {
            f.maps.clone()
        } else {
            let mut next = Vec::with_capacity(level.len() * m);
            for outer in &f.maps {
                next.extend(level.iter().map(|inner| compose(outer, inner)));
            }
            next
        };
        for map in &level {
            let z = fixed_point(map)?;
            if dedup.insert(z) {
                points.push(z);
            }
        }
    }
    let mut meta = ifs_meta(f, "williams");
    meta.insert("depth", depth.to_string());
    Ok(PointCloud::new(points, meta))
}

/// Grid-hashed set that rejects points within `tol` of one already stored.
struct PointSet {
    tol: f64,
    cells: HashMap<(i64, i64), Vec<Complex64>>,
}

impl PointSet {
    fn new(tol: f64) -> Self {
        PointSet {
            tol,
            cells: HashMap::new(),
        }
    }

    fn cell(&self, z: Complex64) -> (i64, i64) {
        ((z.re / self.tol).floor() as i64, (z.im / self.tol).floor() as i64)
    }

    fn insert(&mut self, z: Complex64) -> bool {
        let (cx, cy) = self.cell(z);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = self.cells.get(&(cx + dx, cy + dy)) {
                    if bucket.iter().any(|&w| (w - z).norm() <= self.tol) {
                        return false;
                    }
                }
            }
        }
        self.cells.entry((cx, cy)).or_default().push(z);
        true
    }
}

/// Random iteration from 0 with uniformly chosen maps, dropping the first
/// `burn_in` iterates.
pub fn chaos_game(f: &Ifs, iterations: usize, rng_seed: u64, burn_in: usize) -> Result<PointCloud> {
    if iterations <= burn_in {
        return Err(Error::InvalidParameter(format!(
            "iterations ({iterations}) must exceed burn-in ({burn_in})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut z = Complex64::new(0.0, 0.0);
    let mut points = Vec::with_capacity(iterations - burn_in);
    for t in 0..iterations {
        let i = rng.gen_range(0..f.maps.len());
        z = apply(&f.maps[i], z);
        if t >= burn_in {
            points.push(z);
        }
    }
    let mut meta = ifs_meta(f, "chaos");
    meta.insert("iterations", iterations.to_string());
    meta.insert("burn_in", burn_in.to_string());
    meta.insert("rng_seed", rng_seed.to_string());
    Ok(PointCloud::new(points, meta))
}
