//! Command-line driver.
//!
//! Exit codes: 0 on success (or a passing verification), 1 when a
//! verification fails, 2 for usage, parse and I/O errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::alphabet::Angle;
use crate::error::{Error, Result};
use crate::ifs::{chaos_game, orbit_depth, williams_cloud, Ifs, Preset};
use crate::io::{format_complex, parse_complex, read_csv, render, write_csv, RenderMode, Viewport};
use crate::revrep::{decode_with_policy, encode, revolving_angle, GaussianInt};
use crate::sequences::{enumerate, Condition, FirstDigitPolicy, RevolvingSequence};
use crate::series::{eval_family, make_cloud, Family, FamilyParams};
use crate::verify::{
    check_convergence, check_cross_representation, check_rotation_union, check_scaling,
    check_set_equation, count_check, tail_bound, VerifyReport, EXACT_TOL,
};

const THETA_HELP: &str = "rotation angle as a signed fraction of a full turn: q/p means theta = 2*pi*q/p (e.g. -1/4 is -pi/2)";

#[derive(Parser, Debug)]
#[command(
    name = "revolving",
    version,
    about = "Revolving-sequence parametrizations of dragon fractals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every valid digit word of a given length, one per line.
    Enumerate {
        #[arg(long)]
        condition: Condition,
        #[arg(long, allow_hyphen_values = true, help = THETA_HELP)]
        theta: Angle,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value = "free")]
        policy: FirstDigitPolicy,
    },
    /// Evaluate one digit word with a family's series.
    Evaluate {
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated exponents, `z` for a zero digit.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Write the depth-n point cloud of a family as CSV.
    Cloud {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Approximate an IFS attractor.
    Attract {
        #[arg(long, conflicts_with = "ifs", required_unless_present = "ifs")]
        preset: Option<Preset>,
        /// File with one map per line: a_re,a_im,c_re,c_im,conj
        #[arg(long)]
        ifs: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "orbit")]
        method: Method,
        #[arg(long, default_value_t = 10)]
        depth: usize,
        #[arg(long, default_value_t = 100_000)]
        iterations: usize,
        #[arg(long, default_value_t = 100)]
        burn_in: usize,
        /// Random seed for the chaos game.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one finite-depth identity check and print its report.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long)]
        tol: Option<f64>,
        /// Comma-separated depths for the convergence check.
        #[arg(long, value_delimiter = ',', default_value = "4,5,6,7,8,9,10")]
        depths: Vec<usize>,
        /// Orbit depth for the cross-representation check (defaults to --depth).
        #[arg(long)]
        ifs_depth: Option<usize>,
        /// Condition for the count check.
        #[arg(long, default_value = "grc")]
        condition: Condition,
        /// Comma-separated word lengths for the count check.
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4,5,6")]
        lengths: Vec<usize>,
        #[arg(long, default_value = "one")]
        policy: FirstDigitPolicy,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rasterize a CSV point cloud to a plain PGM image.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 512)]
        height: usize,
        /// min_re,max_re,min_im,max_im (defaults to the padded bounding box)
        #[arg(long, allow_hyphen_values = true, value_parser = parse_viewport_arg)]
        viewport: Option<[f64; 4]>,
        #[arg(long, default_value = "binary")]
        mode: RenderMode,
    },
    /// Revolving representations of Gaussian integers in base 1+i.
    Revrep {
        #[command(subcommand)]
        command: RevrepCommand,
    },
}

#[derive(Subcommand, Debug)]
enum RevrepCommand {
    /// Shortest revolving word for x,y.
    Encode {
        #[arg(allow_hyphen_values = true)]
        z: GaussianInt,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value = "free")]
        policy: FirstDigitPolicy,
    },
    /// Gaussian integer of a word written in exponents of e^{-i pi/2}.
    Decode {
        #[arg(allow_hyphen_values = true)]
        word: String,
        #[arg(long, default_value = "free")]
        policy: FirstDigitPolicy,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Orbit,
    Chaos,
    Williams,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Check {
    SetEquation,
    Scaling,
    RotationUnion,
    Convergence,
    CrossRepresentation,
    Count,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Take family and parameters from a named dragon; explicit flags override.
    #[arg(long)]
    preset: Option<Preset>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_arg)]
    alpha: Option<Complex64>,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_arg)]
    beta: Option<Complex64>,
    #[arg(long, allow_hyphen_values = true, help = THETA_HELP)]
    theta: Option<Angle>,
}

fn parse_viewport_arg(s: &str) -> std::result::Result<[f64; 4], String> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("'{v}': {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 4 comma-separated numbers, got {}", v.len()))
}

fn parse_complex_arg(s: &str) -> std::result::Result<Complex64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

impl FamilyArgs {
    fn resolve(&self) -> Result<(Family, FamilyParams)> {
        let base = self.preset.map(|p| (p.family(), p.params()));
        let missing = |what: &str| Error::InvalidParameter(format!("--{what} is required without --preset"));
        let family = match (self.family, base) {
            (Some(f), _) => f,
            (None, Some((f, _))) => f,
            (None, None) => return Err(missing("family")),
        };
        let alpha = self
            .alpha
            .or(base.map(|(_, p)| p.alpha))
            .ok_or_else(|| missing("alpha"))?;
        let beta = self.beta.or(base.and_then(|(_, p)| p.beta));
        let angle = self
            .theta
            .or(base.map(|(_, p)| p.angle))
            .ok_or_else(|| missing("theta"))?;
        Ok((family, FamilyParams::new(alpha, beta, angle)?))
    }
}

enum Outcome {
    Done,
    Verified(bool),
}

fn open_output<'a>(path: &Option<PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<Outcome> {
    match cli.command {
        Command::Enumerate {
            condition,
            theta,
            length,
            policy,
        } => {
            let mut words = enumerate(condition, theta, length, policy)?;
            let mut out = BufWriter::new(stdout);
            while let Some(w) = words.next_word() {
                let s = RevolvingSequence::new(theta, w.to_vec())?;
                writeln!(out, "{s}")?;
            }
            out.flush()?;
        }
        Command::Evaluate { family, word } => {
            let (family, params) = family.resolve()?;
            let s = RevolvingSequence::parse(&word, params.angle)?;
            let z = eval_family(family, &params, &s)?;
            writeln!(stdout, "{}", format_complex(z))?;
        }
        Command::Cloud { family, depth, out } => {
            let (family, params) = family.resolve()?;
            let cloud = make_cloud(family, &params, depth)?;
            write_csv(&cloud, open_output(&out, stdout)?)?;
        }
        Command::Attract {
            preset,
            ifs,
            method,
            depth,
            iterations,
            burn_in,
            seed,
            out,
        } => {
            let system = match (preset, ifs) {
                (Some(p), _) => p.ifs(),
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(&path)?;
                    Ifs::parse(&text, path.display().to_string())?
                }
                (None, None) => {
                    return Err(Error::InvalidParameter("give --preset or --ifs".into()));
                }
            };
            let cloud = match method {
                Method::Orbit => orbit_depth(&system, Complex64::new(0.0, 0.0), depth)?,
                Method::Williams => williams_cloud(&system, depth)?,
                Method::Chaos => chaos_game(&system, iterations, seed, burn_in)?,
            };
            write_csv(&cloud, open_output(&out, stdout)?)?;
        }
        Command::Verify {
            check,
            family,
            depth,
            tol,
            depths,
            ifs_depth,
            condition,
            lengths,
            policy,
            out,
        } => {
            let report = run_check(check, &family, depth, tol, &depths, ifs_depth, condition, &lengths, policy)?;
            let mut sink = open_output(&out, stdout)?;
            sink.write_all(report.to_text().as_bytes())?;
            sink.flush()?;
            return Ok(Outcome::Verified(report.pass));
        }
        Command::Render {
            input,
            out,
            width,
            height,
            viewport,
            mode,
        } => {
            let cloud = read_csv(BufReader::new(File::open(&input)?))?;
            let view = match viewport {
                Some(v) => Viewport::new(v[0], v[1], v[2], v[3], width, height)?,
                None => Viewport::fit(&cloud, width, height)?,
            };
            let image = render(&cloud, &view, mode);
            image.write_pgm(open_output(&out, stdout)?)?;
        }
        Command::Revrep { command } => match command {
            RevrepCommand::Encode { z, max_len, policy } => {
                let word = encode(z, max_len, policy)?;
                writeln!(stdout, "{word}")?;
            }
            RevrepCommand::Decode { word, policy } => {
                let s = RevolvingSequence::parse(&word, revolving_angle())?;
                writeln!(stdout, "{}", decode_with_policy(&s, policy)?)?;
            }
        },
    }
    Ok(Outcome::Done)
}

#[allow(clippy::too_many_arguments)]
fn run_check(
    check: Check,
    family: &FamilyArgs,
    depth: usize,
    tol: Option<f64>,
    depths: &[usize],
    ifs_depth: Option<usize>,
    condition: Condition,
    lengths: &[usize],
    policy: FirstDigitPolicy,
) -> Result<VerifyReport> {
    if let Check::Count = check {
        let angle = family
            .theta
            .or(family.preset.map(|p| p.params().angle))
            .ok_or_else(|| Error::InvalidParameter("--theta is required".into()))?;
        return count_check(condition, angle, policy, lengths);
    }
    let (fam, params) = family.resolve()?;
    let exact = tol.unwrap_or(EXACT_TOL);
    match check {
        Check::SetEquation => check_set_equation(fam, &params, depth, exact),
        Check::Scaling => check_scaling(&params, depth, exact),
        Check::RotationUnion => check_rotation_union(fam.free(), &params, depth, exact),
        Check::Convergence => check_convergence(fam, &params, depths),
        Check::CrossRepresentation => {
            let m = ifs_depth.unwrap_or(depth);
            let tol = tol.unwrap_or_else(|| tail_bound(&params, depth, m));
            check_cross_representation(fam, &params, depth, m, tol)
        }
        Check::Count => unreachable!("handled above"),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(cli, stdout) {
        Ok(Outcome::Done) | Ok(Outcome::Verified(true)) => 0,
        Ok(Outcome::Verified(false)) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}
