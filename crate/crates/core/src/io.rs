//! Point-cloud CSV files and plain PGM rasters.
//!
//! CSV layout: `# key=value` header lines carrying the cloud metadata (plus
//! a `count` entry), then one `re,im` line per point. Numbers are written
//! with 17 significant digits in the style of C's `%.17g`, which is enough
//! for every `f64` to read back bit-exactly.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{CloudMeta, PointCloud};

/// `%.17g`: 17 significant digits, trailing zeros dropped, fixed notation
/// for decimal exponents in `-5..17`. Both zeros print as `0`.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };

    if (-5..17).contains(&exp) {
        let body = if exp < 0 {
            format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
        } else {
            let point = exp as usize + 1;
            if digits.len() <= point {
                format!("{digits}{}", "0".repeat(point - digits.len()))
            } else {
                format!("{}.{}", &digits[..point], &digits[point..])
            }
        };
        format!("{sign}{body}")
    } else {
        let (lead, rest) = digits.split_at(1);
        let frac = if rest.is_empty() {
            String::new()
        } else {
            format!(".{rest}")
        };
        let esign = if exp < 0 { '-' } else { '+' };
        format!("{sign}{lead}{frac}e{esign}{:02}", exp.abs())
    }
}

pub fn format_complex(z: Complex64) -> String {
    format!("{},{}", format_f64(z.re), format_f64(z.im))
}

/// Parses `"re,im"`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse {
        line: 1,
        message: format!("'{s}' is not a complex number of the form re,im"),
    };
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

pub fn write_csv<W: Write>(cloud: &PointCloud, mut out: W) -> Result<()> {
    for (k, v) in cloud.meta.entries() {
        if k != "count" {
            writeln!(out, "# {k}={v}")?;
        }
    }
    writeln!(out, "# count={}", cloud.points.len())?;
    for &z in &cloud.points {
        writeln!(out, "{}", format_complex(z))?;
    }
    out.flush()?;
    Ok(())
}

pub fn csv_string(cloud: &PointCloud) -> String {
    let mut buf = Vec::new();
    write_csv(cloud, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is ASCII")
}

pub fn read_csv<R: BufRead>(input: R) -> Result<PointCloud> {
    let mut meta = CloudMeta::new();
    let mut points = Vec::new();
    let mut declared = None;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(header) = text.strip_prefix('#') {
            if let Some((k, v)) = header.trim().split_once('=') {
                let (k, v) = (k.trim(), v.trim());
                if k == "count" {
                    declared = Some(v.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("bad count '{v}'"),
                    })?);
                } else {
                    meta.insert(k, v);
                }
            }
            continue;
        }
        let z = parse_complex(text).map_err(|_| Error::Parse {
            line: lineno,
            message: format!("expected 're,im', found '{text}'"),
        })?;
        points.push(z);
    }
    if let Some(n) = declared {
        if n != points.len() {
            return Err(Error::Parse {
                line: 0,
                message: format!("header declares {n} points but {} were read", points.len()),
            });
        }
    }
    Ok(PointCloud::new(points, meta))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Viewport {
    pub min_re: f64,
    pub max_re: f64,
    pub min_im: f64,
    pub max_im: f64,
    pub width: usize,
    pub height: usize,
}

impl Viewport {
    pub fn new(
        min_re: f64,
        max_re: f64,
        min_im: f64,
        max_im: f64,
        width: usize,
        height: usize,
    ) -> Result<Self> {
        if !(max_re > min_re) || !(max_im > min_im) {
            return Err(Error::DegenerateViewport(format!(
                "need min < max on both axes, got re [{min_re}, {max_re}] im [{min_im}, {max_im}]"
            )));
        }
        if width == 0 || height == 0 {
            return Err(Error::DegenerateViewport(format!(
                "{width}x{height} has no pixels"
            )));
        }
        Ok(Viewport {
            min_re,
            max_re,
            min_im,
            max_im,
            width,
            height,
        })
    }

    /// Bounding box of the cloud grown by 5% of its extent on each side.
    /// An axis with zero extent gets a half-width of 1.
    pub fn fit(cloud: &PointCloud, width: usize, height: usize) -> Result<Self> {
        let first = cloud.points.first().ok_or(Error::EmptyCloud)?;
        let (mut lo_re, mut hi_re, mut lo_im, mut hi_im) = (first.re, first.re, first.im, first.im);
        for z in &cloud.points {
            lo_re = lo_re.min(z.re);
            hi_re = hi_re.max(z.re);
            lo_im = lo_im.min(z.im);
            hi_im = hi_im.max(z.im);
        }
        let pad = |lo: f64, hi: f64| {
            let extent = hi - lo;
            if extent > 0.0 {
                (lo - 0.05 * extent, hi + 0.05 * extent)
            } else {
                (lo - 1.0, hi + 1.0)
            }
        };
        let (min_re, max_re) = pad(lo_re, hi_re);
        let (min_im, max_im) = pad(lo_im, hi_im);
        Viewport::new(min_re, max_re, min_im, max_im, width, height)
    }

    /// Pixel `(column, row)` containing `z`; row 0 is the top (largest
    /// imaginary part). Points outside the viewport map to `None`.
    pub fn pixel(&self, z: Complex64) -> Option<(usize, usize)> {
        if !(z.re >= self.min_re && z.re <= self.max_re && z.im >= self.min_im && z.im <= self.max_im) {
            return None;
        }
        let fx = (z.re - self.min_re) / (self.max_re - self.min_re) * self.width as f64;
        let fy = (self.max_im - z.im) / (self.max_im - self.min_im) * self.height as f64;
        let col = (fx.floor() as usize).min(self.width - 1);
        let row = (fy.floor() as usize).min(self.height - 1);
        Some((col, row))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenderMode {
    Binary,
    LogDensity,
}

impl std::str::FromStr for RenderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(RenderMode::Binary),
            "log-density" | "log_density" => Ok(RenderMode::LogDensity),
            _ => Err(Error::InvalidParameter(format!("unknown render mode '{s}'"))),
        }
    }
}

/// 8-bit grayscale raster, row-major from the top row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn get(&self, col: usize, row: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    /// Plain (`P2`) PGM with maxval 255. Lines are kept within 70
    /// characters and every raster row starts on a new line.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "P2")?;
        writeln!(out, "{} {}", self.width, self.height)?;
        writeln!(out, "255")?;
        for row in self.pixels.chunks(self.width) {
            let mut line = String::new();
            for v in row {
                let token = v.to_string();
                if !line.is_empty() && line.len() + 1 + token.len() > 70 {
                    writeln!(out, "{line}")?;
                    line.clear();
                }
                if !line.is_empty() {
                    line.push(' ');
                }
                line.push_str(&token);
            }
            writeln!(out, "{line}")?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_pgm(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_pgm(&mut buf).expect("writing to memory");
        buf
    }
}

pub fn render(cloud: &PointCloud, viewport: &Viewport, mode: RenderMode) -> GrayImage {
    let mut counts = vec![0u64; viewport.width * viewport.height];
    for &z in &cloud.points {
        if let Some((col, row)) = viewport.pixel(z) {
            counts[row * viewport.width + col] += 1;
        }
    }
    let max = counts.iter().copied().max().unwrap_or(0);
    let pixels = counts
        .iter()
        .map(|&n| match mode {
            RenderMode::Binary => {
                if n > 0 {
                    255
                } else {
                    0
                }
            }
            RenderMode::LogDensity => {
                if n == 0 {
                    0
                } else {
                    let scale = (n as f64).ln_1p() / (max as f64).ln_1p();
                    (255.0 * scale).round() as u8
                }
            }
        })
        .collect();
    GrayImage {
        width: viewport.width,
        height: viewport.height,
        pixels,
    }
}
