//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use revolving::ifs::{apply, Ifs};
use revolving::revrep::{decode, encode};
use revolving::verify::{
    check_convergence, check_cross_representation, check_rotation_union, check_scaling,
    check_set_equation, closed_form_count, count_check, hausdorff_points, EXACT_TOL,
};
use revolving::{
    compute_bss, make_cloud, Angle, Condition, Family, FamilyParams, FirstDigitPolicy,
    GaussianInt, Preset, RevolvingSequence,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        summary: summary.into(),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn angle(s: &str) -> Angle {
    s.parse().unwrap()
}

fn terdragon() -> FamilyParams {
    let alpha = Complex64::new(0.5, -3f64.sqrt() / 6.0);
    FamilyParams::new(alpha, Some(alpha.conj()), angle("1/3")).unwrap()
}

/// T1 words by scanning every word in {z,0,1,2}^n; points by explicit powers.
fn brute_t1_cloud(p: &FamilyParams, n: usize) -> Vec<Complex64> {
    let beta = p.beta.unwrap();
    let units: Vec<Complex64> = (0..3)
        .map(|k| Complex64::from_polar(1.0, k as f64 * p.angle.radians()))
        .collect();
    let mut out = Vec::new();
    for code in 0..4usize.pow(n as u32) {
        // digit 0 is z, digit k+1 is e^{ikθ}
        let word: Vec<usize> = (0..n).map(|i| code / 4usize.pow((n - 1 - i) as u32) % 4).collect();
        let nonzero: Vec<usize> = word.iter().filter(|&&d| d > 0).map(|d| d - 1).collect();
        if nonzero.first().is_some_and(|&k| k != 0) {
            continue;
        }
        if nonzero.windows(2).any(|w| (w[1] + 3 - w[0]) % 3 > 1) {
            continue;
        }
        let mut z = Complex64::new(0.0, 0.0);
        for (i, &d) in word.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let stays = word[i + 1..].iter().find(|&&e| e > 0) == Some(&d);
            let m = (i + 1) as i32;
            z += units[d - 1]
                * if stays {
                    p.alpha.powi(m - 1) * beta
                } else {
                    p.alpha.powi(m)
                };
        }
        out.push(z);
    }
    out
}

fn criterion_1() -> Outcome {
    let p = terdragon();
    let ifs = Ifs::for_family(Family::T1, &p).unwrap();
    let mut oracle_notes = Vec::new();
    let mut oracle_ok = true;
    for n in 1..=4 {
        let brute = brute_t1_cloud(&p, n);
        let cloud = make_cloud(Family::T1, &p, n).unwrap();
        let same_cloud = brute.len() == cloud.len()
            && hausdorff_points(&brute, &cloud.points).unwrap() <= 1e-12;
        let prev = brute_t1_cloud(&p, n - 1);
        let union: Vec<Complex64> = ifs
            .maps()
            .iter()
            .flat_map(|m| prev.iter().map(move |&z| apply(m, z)))
            .collect();
        let brute_mismatch = hausdorff_points(&brute, &union).unwrap();
        let report = check_set_equation(Family::T1, &p, n, EXACT_TOL).unwrap();
        let agree = (report.max_mismatch - brute_mismatch).abs() <= 1e-12;
        oracle_ok &= same_cloud && agree;
        oracle_notes.push(format!("d{n}={brute_mismatch:.3e}"));
    }
    let (report, elapsed) = timed(|| check_set_equation(Family::T1, &p, 6, EXACT_TOL).unwrap());
    let fast = elapsed < Duration::from_secs(5);
    outcome(
        oracle_ok && report.pass && fast,
        format!(
            "T1 terdragon depth 6 max_mismatch={:.3e} (tol 1e-10, cloud_to_union={:.3e}, union_to_cloud={:.3e}) in {:.2?}; oracle agrees={} [{}]",
            report.max_mismatch,
            detail(&report.details, "cloud_to_union"),
            detail(&report.details, "union_to_cloud"),
            elapsed,
            oracle_ok,
            oracle_notes.join(" ")
        ),
    )
}

fn detail(details: &[(String, String)], key: &str) -> f64 {
    details
        .iter()
        .find(|(k, _)| k == key)
        .and_then(|(_, v)| v.parse().ok())
        .unwrap_or(f64::NAN)
}

fn criterion_2() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for preset in [Preset::Levy, Preset::Tiling] {
        let (report, elapsed) =
            timed(|| check_set_equation(Family::X1, &preset.params(), 10, EXACT_TOL).unwrap());
        pass &= report.pass && elapsed < Duration::from_secs(2);
        parts.push(format!("{preset} {:.3e} in {:.2?}", report.max_mismatch, elapsed));
    }
    outcome(pass, format!("X1 depth 10: {}", parts.join(", ")))
}

fn criterion_3() -> Outcome {
    let report = check_scaling(&Preset::Heighway.params(), 10, 1e-12).unwrap();
    let pointwise = detail(&report.details, "h1_vs_x1_over_alpha_pointwise");
    outcome(
        pointwise <= 1e-12,
        format!("heighway H1 vs X1/alpha depth 10 pointwise {pointwise:.3e} (tol 1e-12)"),
    )
}

fn criterion_4() -> Outcome {
    let alpha = Complex64::new(0.5, 3f64.sqrt() / 6.0);
    let p = FamilyParams::new(alpha, None, angle("1/12")).unwrap();
    let report = check_scaling(&p, 8, 1e-12).unwrap();
    let set = detail(&report.details, "h2sub1_vs_x2sub1_conj_set");
    outcome(
        set <= 1e-12,
        format!("H2sub1(alpha) vs X2sub1(conj alpha)/conj alpha depth 8 set {set:.3e} (tol 1e-12)"),
    )
}

fn criterion_5() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for preset in [Preset::Levy, Preset::Twindragon] {
        for fam in [Family::X, Family::H] {
            let r = check_rotation_union(fam, &preset.params(), 8, EXACT_TOL).unwrap();
            pass &= r.pass;
            parts.push(format!("{preset}/{fam} {:.3e}", r.max_mismatch));
        }
    }
    outcome(pass, format!("depth 8 (tol 1e-10): {}", parts.join(", ")))
}

fn criterion_6() -> Outcome {
    let cases = [
        (Preset::Levy, Family::X1, Preset::Levy.params(), 12, 0.02),
        (Preset::Terdragon, Family::T1, terdragon(), 8, 0.05),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (preset, fam, p, depth, tol) in cases {
        let r = check_cross_representation(fam, &p, depth, depth, tol).unwrap();
        let seq = detail(&r.details, "sequence_vs_orbit");
        let williams = detail(&r.details, "williams_vs_orbit");
        pass &= seq <= tol && williams <= tol;
        parts.push(format!(
            "{preset} {depth}/{depth} sequence {seq:.4} williams {williams:.4} (tol {tol})"
        ));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_7() -> Outcome {
    let depths: Vec<usize> = (4..=10).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for preset in Preset::ALL {
        let p = preset.params();
        let r = check_convergence(preset.family(), &p, &depths).unwrap();
        pass &= r.pass;
        parts.push(format!("{preset} {:.3}<={:.3}", r.max_mismatch, r.tolerance));
    }
    outcome(pass, format!("worst ratio per preset, depths 4..10: {}", parts.join(", ")))
}

fn criterion_8() -> Outcome {
    let lengths: Vec<usize> = (0..=10).collect();
    let cases = [
        (Condition::Grc, angle("1/4")),
        (Condition::Src, angle("1/4")),
        (Condition::Trc, angle("1/3")),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (cond, th) in cases {
        let r = count_check(cond, th, FirstDigitPolicy::MustBeOne, &lengths).unwrap();
        let brute = |n: usize| {
            r.counts
                .iter()
                .find(|(k, _)| *k == format!("brute_force_{n}"))
                .map(|(_, v)| *v as u64)
                .unwrap()
        };
        let formula = |n: usize| match cond {
            Condition::Trc => (3u64.pow(n as u32) + 1) / 2,
            _ => 1u64 << n,
        };
        let formulas_ok = lengths
            .iter()
            .all(|&n| brute(n) == formula(n) && closed_form_count(cond, th, n) == formula(n));
        pass &= r.pass && formulas_ok;
        parts.push(format!(
            "{} n<=10 enumerated=brute {} closed form {} (n=10: {})",
            cond.name(),
            r.pass,
            formulas_ok,
            brute(10)
        ));
    }
    outcome(pass, parts.join(", "))
}

fn criterion_9() -> Outcome {
    // (1, 0, 1, i, i, -1) with theta = pi/2 in exponent form
    let s = RevolvingSequence::parse("0,z,0,1,1,2", angle("1/4")).unwrap();
    let bss = compute_bss(&s).to_string();
    outcome(bss == "100100", format!("bss = {bss} (want 100100)"))
}

fn criterion_10() -> Outcome {
    let (failures, elapsed) = timed(|| {
        let mut failures = Vec::new();
        for x in -5..=5 {
            for y in -5..=5 {
                let z = GaussianInt::new(x, y);
                let ok = encode(z, 12, FirstDigitPolicy::Free)
                    .and_then(|w| decode(&w))
                    .is_ok_and(|back| back == z);
                if !ok {
                    failures.push(z.to_string());
                }
            }
        }
        failures
    });
    outcome(
        failures.is_empty() && elapsed < Duration::from_secs(30),
        format!("121 values, {} failed, in {:.2?}", failures.len(), elapsed),
    )
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cloud.csv");
    let csv_s = csv.to_str().unwrap();
    let bin = env!("CARGO_BIN_EXE_revolving");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap().stdout;

    let cloud_args = ["cloud", "--preset", "terdragon", "--depth", "8"];
    let verify_args = ["verify", "scaling", "--preset", "heighway", "--depth", "8"];
    std::fs::write(&csv, run(&cloud_args)).unwrap();
    let render_args = ["render", "--input", csv_s, "--width", "200", "--height", "150", "--mode", "log-density"];

    let mut parts = Vec::new();
    let mut pass = true;
    for (name, args) in [
        ("cloud", &cloud_args[..]),
        ("verify", &verify_args[..]),
        ("render", &render_args[..]),
    ] {
        let (a, b) = (run(args), run(args));
        let same = !a.is_empty() && a == b;
        pass &= same;
        parts.push(format!("{name} {} bytes identical={same}", a.len()));
    }
    outcome(pass, parts.join(", "))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("set equation, terdragon T1", criterion_1),
        ("set equation, levy and tiling X1", criterion_2),
        ("H1 = X1/alpha scaling", criterion_3),
        ("H2sub1 conjugate scaling", criterion_4),
        ("rotation unions", criterion_5),
        ("sequence vs IFS clouds", criterion_6),
        ("convergence ratios", criterion_7),
        ("enumeration counts", criterion_8),
        ("binary static sequence example", criterion_9),
        ("revrep round trip", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}: {name}: {}", i + 1, o.summary);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
