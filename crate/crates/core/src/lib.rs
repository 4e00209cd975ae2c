//! Revolving sequences and the self-similar dragons they parametrize.
//!
//! Digit words over `{0} ∪ {e^{ikθ}}` that obey a revolving condition are
//! summed against powers of a contraction `α` to produce points of the
//! Lévy, Tiling, Heighway, Twin- and Terdragon attractors. The same
//! attractors are generated from their iterated function systems, and the
//! [`verify`] module compares the two sides at finite depth.
//!
//! Module map:
//!
//! * [`alphabet`]: exact angles and digits
//! * [`sequences`]: GRC / SRC / TRC validation, binary static sequences, enumeration
//! * [`series`]: series evaluation and point clouds per family
//! * [`ifs`]: conjugate-affine maps, presets, orbit / Williams / chaos-game clouds
//! * [`verify`]: Hausdorff distance and identity checks
//! * [`revrep`]: base `1 + i` revolving representations of Gaussian integers
//! * [`io`]: CSV and PGM files
//! * [`cli`]: the `revolving` command

pub mod alphabet;
pub mod cli;
pub mod error;
pub mod ifs;
pub mod io;
pub mod revrep;
pub mod sequences;
pub mod series;
pub mod verify;

pub use alphabet::{digit_value, rotate, Angle, Digit, Sign};
pub use error::{Error, Result};
pub use ifs::{AffineConjMap, Ifs, Preset};
pub use revrep::GaussianInt;
pub use sequences::{compute_bss, validate, Bss, Condition, FirstDigitPolicy, RevolvingSequence};
pub use series::{make_cloud, CloudMeta, Family, FamilyParams, PointCloud, Start};
pub use verify::VerifyReport;
