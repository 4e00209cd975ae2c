//! Finite-depth checks of the set identities, each producing a
//! [`VerifyReport`].
//!
//! Two clouds are compared as sets through the Hausdorff distance, since
//! the two sides of an identity enumerate points in different orders and
//! with different multiplicities.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::alphabet::{digit_value, Angle, Digit};
use crate::error::{Error, Result};
use crate::ifs::{apply, orbit_depth, williams_cloud, Ifs};
use crate::io::format_f64;
use crate::sequences::{enumerate, validate_digits, Condition, FirstDigitPolicy};
use crate::series::{make_cloud, Family, FamilyParams, PointCloud};

/// Tolerance for checks that rest on an exact bijection between words.
pub const EXACT_TOL: f64 = 1e-10;

/// Largest word length `count_check` will brute-force.
pub const COUNT_CHECK_MAX_LEN: usize = 10;

/// Largest search space (`(order + 1)^n` words) `count_check` will scan.
pub const COUNT_CHECK_MAX_WORDS: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub check_name: String,
    pub depth: usize,
    pub max_mismatch: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub counts: Vec<(String, usize)>,
    pub params: Vec<(String, String)>,
    /// Intermediate quantities (directed distances, ratios, bounds).
    pub details: Vec<(String, String)>,
}

impl VerifyReport {
    fn new(check_name: &str, depth: usize, max_mismatch: f64, tolerance: f64) -> Self {
        VerifyReport {
            check_name: check_name.to_string(),
            depth,
            max_mismatch,
            tolerance,
            pass: max_mismatch <= tolerance,
            counts: Vec::new(),
            params: Vec::new(),
            details: Vec::new(),
        }
    }

    fn count(mut self, name: impl Into<String>, n: usize) -> Self {
        self.counts.push((name.into(), n));
        self
    }

    fn param(mut self, name: impl Into<String>, v: impl Into<String>) -> Self {
        self.params.push((name.into(), v.into()));
        self
    }

    fn family_params(mut self, family: Option<Family>, p: &FamilyParams) -> Self {
        if let Some(f) = family {
            self.params.push(("family".into(), f.name().into()));
        }
        p.describe(&mut self.params);
        self
    }

    fn detail(mut self, name: impl Into<String>, v: f64) -> Self {
        self.details.push((name.into(), format_f64(v)));
        self
    }

    /// Line-oriented `key=value` text with a fixed key order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "check={}", self.check_name);
        let _ = writeln!(s, "pass={}", self.pass);
        let _ = writeln!(s, "depth={}", self.depth);
        let _ = writeln!(s, "max_mismatch={}", format_f64(self.max_mismatch));
        let _ = writeln!(s, "tolerance={}", format_f64(self.tolerance));
        for (k, v) in &self.params {
            let _ = writeln!(s, "param.{k}={v}");
        }
        for (k, v) in &self.counts {
            let _ = writeln!(s, "count.{k}={v}");
        }
        for (k, v) in &self.details {
            let _ = writeln!(s, "detail.{k}={v}");
        }
        s
    }
}

/// `sup_{a∈A} inf_{b∈B} |a − b|`.
pub fn directed_hausdorff(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCloud);
    }
    let worst_sq = a
        .par_chunks(512)
        .map(|chunk| {
            let mut local = 0.0f64;
            for &p in chunk {
                let mut best = f64::INFINITY;
                for &q in b {
                    let d = (p - q).norm_sqr();
                    if d < best {
                        best = d;
                        // p cannot raise the running maximum any more.
                        if best <= local {
                            break;
                        }
                    }
                }
                local = local.max(best);
            }
            local
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst_sq.sqrt())
}

/// Symmetric Hausdorff distance between two point sets, brute force.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    hausdorff_points(&a.points, &b.points)
}

pub fn hausdorff_points(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Images of `cloud` under every map of `ifs`, map-major.
fn image_union(ifs: &Ifs, cloud: &[Complex64]) -> Vec<Complex64> {
    ifs.maps()
        .iter()
        .flat_map(|m| cloud.iter().map(move |&z| apply(m, z)))
        .collect()
}

/// Compares the depth-`n` cloud of a first-digit-one family with the union
/// of its IFS images of the depth-`n − 1` cloud.
pub fn check_set_equation(
    family: Family,
    params: &FamilyParams,
    depth: usize,
    tol: f64,
) -> Result<VerifyReport> {
    if depth == 0 {
        return Err(Error::InvalidParameter("set-equation check needs depth >= 1".into()));
    }
    let ifs = Ifs::for_family(family, params)?;
    let current = make_cloud(family, params, depth)?;
    let previous = make_cloud(family, params, depth - 1)?;
    let union = image_union(&ifs, &previous.points);

    let forward = directed_hausdorff(&current.points, &union)?;
    let backward = directed_hausdorff(&union, &current.points)?;
    Ok(VerifyReport::new("set-equation", depth, forward.max(backward), tol)
        .family_params(Some(family), params)
        .count("cloud", current.len())
        .count("previous", previous.len())
        .count("union", union.len())
        .detail("cloud_to_union", forward)
        .detail("union_to_cloud", backward))
}

/// `H1 = X1/α` (pointwise, same enumeration order) and
/// `H2sub1(α) = X2sub1(conj α)/conj α` (as sets).
pub fn check_scaling(params: &FamilyParams, depth: usize, tol: f64) -> Result<VerifyReport> {
    let alpha = params.alpha;
    if alpha == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateParameter("scaling by 1/alpha needs alpha != 0".into()));
    }
    let h1 = make_cloud(Family::H1, params, depth)?;
    let x1 = make_cloud(Family::X1, params, depth)?.scaled(alpha.inv());
    debug_assert_eq!(h1.len(), x1.len());
    let pointwise = h1
        .points
        .iter()
        .zip(&x1.points)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);

    let conj = params.with_alpha(alpha.conj())?;
    let h2 = make_cloud(Family::H2Sub1, params, depth)?;
    let x2 = make_cloud(Family::X2Sub1, &conj, depth)?.scaled(alpha.conj().inv());
    let set = hausdorff(&h2, &x2)?;

    Ok(VerifyReport::new("scaling", depth, pointwise.max(set), tol)
        .family_params(None, params)
        .count("h1", h1.len())
        .count("x1", x1.len())
        .count("h2sub1", h2.len())
        .count("x2sub1_conj", x2.len())
        .detail("h1_vs_x1_over_alpha_pointwise", pointwise)
        .detail("h2sub1_vs_x2sub1_conj_set", set))
}

/// A free family against the union of the rotated copies
/// `e^{ilθ}·F1`, `l = 0..order`, of its first-digit-one counterpart.
pub fn check_rotation_union(
    family: Family,
    params: &FamilyParams,
    depth: usize,
    tol: f64,
) -> Result<VerifyReport> {
    if family.policy() != FirstDigitPolicy::Free {
        return Err(Error::InvalidParameter(format!(
            "rotation-union check takes a free family, not {family}"
        )));
    }
    let free = make_cloud(family, params, depth)?;
    let base = make_cloud(family.normalized(), params, depth)?;
    let angle = params.angle;
    let union: Vec<Complex64> = angle
        .units()
        .flat_map(|d| {
            let r = digit_value(d, angle);
            base.points.iter().map(move |&z| r * z)
        })
        .collect();
    let mismatch = hausdorff_points(&free.points, &union)?;
    Ok(VerifyReport::new("rotation-union", depth, mismatch, tol)
        .family_params(Some(family), params)
        .param("order", angle.order().to_string())
        .count("free", free.len())
        .count("base", base.len())
        .count("union", union.len()))
}

/// Ratios of successive distances `d_k = d_H(C_{n_k}, C_{n_{k+1}})`; passes
/// when every ratio is at most `|α| + 0.1`.
pub fn check_convergence(
    family: Family,
    params: &FamilyParams,
    depths: &[usize],
) -> Result<VerifyReport> {
    if depths.len() < 3 {
        return Err(Error::InvalidParameter(
            "convergence check needs at least three depths".into(),
        ));
    }
    if depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("depths must be strictly increasing".into()));
    }
    let clouds = depths
        .iter()
        .map(|&n| make_cloud(family, params, n))
        .collect::<Result<Vec<_>>>()?;
    let distances = clouds
        .windows(2)
        .map(|w| hausdorff(&w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = distances
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (a, b) if a > 0.0 => b / a,
            (_, 0.0) => 0.0,
            _ => f64::INFINITY,
        })
        .collect();
    let worst = ratios.iter().copied().fold(0.0, f64::max);
    let tol = params.alpha.norm() + 0.1;

    let mut report = VerifyReport::new("convergence", *depths.last().unwrap(), worst, tol)
        .family_params(Some(family), params)
        .param(
            "depths",
            depths.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","),
        );
    for (&n, cloud) in depths.iter().zip(&clouds) {
        report = report.count(format!("depth_{n}"), cloud.len());
    }
    for (w, d) in depths.windows(2).zip(&distances) {
        report = report.detail(format!("distance_{}_{}", w[0], w[1]), *d);
    }
    for (i, r) in ratios.iter().enumerate() {
        report = report.detail(format!("ratio_{i}"), *r);
    }
    Ok(report)
}

/// Default tolerance for comparing a depth-`n` sequence cloud with a
/// depth-`m` orbit: `C·(|α|^n + |α|^m)/(1 − |α|)` with
/// `C = 2·max(1, |β/α|)`.
pub fn tail_bound(params: &FamilyParams, seq_depth: usize, ifs_depth: usize) -> f64 {
    let r = params.alpha.norm();
    let ratio = match params.beta {
        Some(b) if r > 0.0 => b.norm() / r,
        _ => 1.0,
    };
    let c = 2.0 * ratio.max(1.0);
    c * (r.powi(seq_depth as i32) + r.powi(ifs_depth as i32)) / (1.0 - r)
}

/// Sequence cloud and Williams cloud, each against the depth-`m` orbit of 0
/// under the family's IFS.
pub fn check_cross_representation(
    family: Family,
    params: &FamilyParams,
    seq_depth: usize,
    ifs_depth: usize,
    tol: f64,
) -> Result<VerifyReport> {
    let ifs = Ifs::for_family(family, params)?;
    let seq = make_cloud(family, params, seq_depth)?;
    let orbit = orbit_depth(&ifs, Complex64::new(0.0, 0.0), ifs_depth)?;
    let seq_vs_orbit = hausdorff(&seq, &orbit)?;

    let mut report_counts = vec![("sequence".to_string(), seq.len()), ("orbit".to_string(), orbit.len())];
    let mut mismatch = seq_vs_orbit;
    let mut williams_vs_orbit = None;
    if ifs_depth > 0 {
        let williams = williams_cloud(&ifs, ifs_depth)?;
        let d = hausdorff(&williams, &orbit)?;
        report_counts.push(("williams".to_string(), williams.len()));
        mismatch = mismatch.max(d);
        williams_vs_orbit = Some(d);
    }

    let mut report = VerifyReport::new("cross-representation", seq_depth, mismatch, tol)
        .family_params(Some(family), params)
        .param("ifs_depth", ifs_depth.to_string());
    report.counts = report_counts;
    report = report.detail("sequence_vs_orbit", seq_vs_orbit);
    if let Some(d) = williams_vs_orbit {
        report = report.detail("williams_vs_orbit", d);
    }
    Ok(report.detail("tail_bound", tail_bound(params, seq_depth, ifs_depth)))
}

/// Closed-form size of the first-digit-one word sets, where one is known:
/// `2^n` for GRC and SRC, `(3^n + 1)/2` for TRC with order at least 2.
pub fn closed_form_count(condition: Condition, angle: Angle, len: usize) -> u64 {
    let n = len as u32;
    match condition {
        Condition::Trc if angle.order() >= 2 => (3u64.pow(n) + 1) / 2,
        _ => 2u64.pow(n),
    }
}

/// Counts words of length `len` accepted by the validator by scanning all of
/// `Δ_θ^len`. Independent of the enumerator.
pub fn brute_force_count(
    condition: Condition,
    angle: Angle,
    len: usize,
    policy: FirstDigitPolicy,
) -> Result<u64> {
    let alphabet: Vec<Digit> = std::iter::once(Digit::Zero).chain(angle.units()).collect();
    let space = (alphabet.len() as u64).checked_pow(len as u32);
    if len > COUNT_CHECK_MAX_LEN || space.is_none_or(|s| s > COUNT_CHECK_MAX_WORDS) {
        return Err(Error::BudgetExceeded(format!(
            "brute force over {}^{len} words is too large",
            alphabet.len()
        )));
    }
    let mut index = vec![0usize; len];
    let mut word = vec![Digit::Zero; len];
    let mut count = 0;
    loop {
        if validate_digits(&word, angle, condition, policy) {
            count += 1;
        }
        // odometer increment
        let mut pos = len;
        loop {
            if pos == 0 {
                return Ok(count);
            }
            pos -= 1;
            index[pos] += 1;
            if index[pos] < alphabet.len() {
                word[pos] = alphabet[index[pos]];
                break;
            }
            index[pos] = 0;
            word[pos] = alphabet[0];
        }
    }
}

/// Enumerator cardinality against the brute-force filter at each length.
pub fn count_check(
    condition: Condition,
    angle: Angle,
    policy: FirstDigitPolicy,
    lengths: &[usize],
) -> Result<VerifyReport> {
    let mut worst = 0.0f64;
    let mut counts = Vec::new();
    let mut details = Vec::new();
    for &n in lengths {
        let enumerated = enumerate(condition, angle, n, policy)?.count() as u64;
        let brute = brute_force_count(condition, angle, n, policy)?;
        worst = worst.max((enumerated as f64 - brute as f64).abs());
        counts.push((format!("enumerated_{n}"), enumerated as usize));
        counts.push((format!("brute_force_{n}"), brute as usize));
        if policy == FirstDigitPolicy::MustBeOne {
            let closed = closed_form_count(condition, angle, n);
            details.push((format!("closed_form_{n}"), closed.to_string()));
            details.push((format!("closed_form_{n}_matches"), (closed == brute).to_string()));
        }
    }
    let mut report = VerifyReport::new("count", lengths.iter().copied().max().unwrap_or(0), worst, 0.0)
        .param("condition", condition.name())
        .param("theta", angle.to_string())
        .param("policy", policy.name())
        .param(
            "lengths",
            lengths.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","),
        );
    report.counts = counts;
    report.details = details;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ifs::Preset;
    use crate::series::CloudMeta;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cloud(points: &[Complex64]) -> PointCloud {
        PointCloud::new(points.to_vec(), CloudMeta::new())
    }

    #[test]
    fn hausdorff_examples() {
        let a = cloud(&[c(0.0, 0.0), c(1.0, 0.0), c(0.3, 0.7)]);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        assert_eq!(hausdorff(&cloud(&[c(0.0, 0.0)]), &cloud(&[c(3.0, 4.0)])).unwrap(), 5.0);
        assert_eq!(hausdorff(&cloud(&[c(0.0, 0.0), c(1.0, 0.0)]), &cloud(&[c(0.0, 0.0)])).unwrap(), 1.0);
        assert!(matches!(hausdorff(&cloud(&[]), &a), Err(Error::EmptyCloud)));
    }

    #[test]
    fn set_equation_levy_depth_one() {
        let p = Preset::Levy.params();
        let r = check_set_equation(Family::X1, &p, 1, EXACT_TOL).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_mismatch, 0.0);
        assert!(check_set_equation(Family::X1, &p, 0, EXACT_TOL).is_err());
        assert!(check_set_equation(Family::X, &p, 3, EXACT_TOL).is_err());
    }

    #[test]
    fn scaling_at_depth_zero() {
        let r = check_scaling(&Preset::Heighway.params(), 0, 1e-12).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_mismatch, 0.0);
    }

    #[test]
    fn rotation_union_rejects_normalized_family() {
        assert!(check_rotation_union(Family::X1, &Preset::Levy.params(), 3, EXACT_TOL).is_err());
    }

    #[test]
    fn rotation_union_with_order_one() {
        let p = FamilyParams::new(c(0.4, 0.2), None, "0/1".parse().unwrap()).unwrap();
        let r = check_rotation_union(Family::X, &p, 5, EXACT_TOL).unwrap();
        assert!(r.pass);
        assert_eq!(r.counts[1].1, r.counts[2].1);
    }

    #[test]
    fn convergence_argument_checks() {
        let p = Preset::Levy.params();
        assert!(check_convergence(Family::X1, &p, &[4, 5]).is_err());
        assert!(check_convergence(Family::X1, &p, &[4, 6, 5]).is_err());
    }

    #[test]
    fn cross_representation_at_depth_zero() {
        let r = check_cross_representation(Family::X1, &Preset::Levy.params(), 0, 0, 1e-12).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_mismatch, 0.0);
    }

    #[test]
    fn count_examples() {
        let quarter: Angle = "1/4".parse().unwrap();
        let third: Angle = "1/3".parse().unwrap();
        let r = count_check(Condition::Grc, quarter, FirstDigitPolicy::MustBeOne, &[3]).unwrap();
        assert!(r.pass);
        assert_eq!(r.counts, vec![("enumerated_3".into(), 8), ("brute_force_3".into(), 8)]);
        let r = count_check(Condition::Trc, third, FirstDigitPolicy::MustBeOne, &[2]).unwrap();
        assert_eq!(r.counts, vec![("enumerated_2".into(), 5), ("brute_force_2".into(), 5)]);
        for cond in [Condition::Grc, Condition::Src, Condition::Trc] {
            let r = count_check(cond, third, FirstDigitPolicy::Free, &[0]).unwrap();
            assert_eq!(r.counts, vec![("enumerated_0".into(), 1), ("brute_force_0".into(), 1)]);
        }
        assert!(count_check(Condition::Grc, quarter, FirstDigitPolicy::Free, &[11]).is_err());
    }

    #[test]
    fn report_text_is_stable() {
        let quarter: Angle = "1/4".parse().unwrap();
        let r = count_check(Condition::Grc, quarter, FirstDigitPolicy::MustBeOne, &[1, 2]).unwrap();
        let golden = "\
check=count
pass=true
depth=2
max_mismatch=0
tolerance=0
param.condition=grc
param.theta=1/4
param.policy=one
param.lengths=1,2
count.enumerated_1=2
count.brute_force_1=2
count.enumerated_2=4
count.brute_force_2=4
detail.closed_form_1=2
detail.closed_form_1_matches=true
detail.closed_form_2=4
detail.closed_form_2_matches=true
";
        assert_eq!(r.to_text(), golden);
    }
}
