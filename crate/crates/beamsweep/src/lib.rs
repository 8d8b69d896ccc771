//! Beam-misalignment analytics for 3GPP NR analog beamforming.
//!
//! The crate models SSB-based wide-beam sweeping (process P1) under the
//! CEPT-harmonized TDD frame structures and derives the long-term
//! misalignment metrics of a BS/UE beam pair:
//!
//! - [`tdd`] — harmonized TDD slot patterns, slot roles and DL-symbol
//!   accounting per numerology;
//! - [`ssb`] — SSB start-symbol sets for cases D/F/G, their intersection
//!   with the TDD DL grid, and the burst-segment/gap decomposition;
//! - [`sweep`] — total sweep time for a requested number of SSBs, both as
//!   a closed form over burst segments and as a brute-force symbol walk,
//!   plus the resulting sweep periodicity;
//! - [`model`] — Poisson misalignment rates, expected misalignment
//!   durations, time fractions, episode weights and average beamforming
//!   gain including SSB overhead;
//! - [`sim`] — seeded Monte-Carlo cross-checks for the analytical chain.
//!
//! All schedule arithmetic is carried out in integer symbol counts at the
//! scenario numerology; milliseconds only appear at presentation
//! boundaries, so equal schedules compare bit-exactly.

pub mod model;
pub mod sim;
pub mod ssb;
pub mod sweep;
pub mod tdd;

use thiserror::Error;

/// Errors reported by schedule construction and the analytical model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Numerology index outside the supported FR2-oriented range.
    #[error("numerology index {0} outside supported range 1..=6")]
    NumerologyRange(u8),
    /// Special-slot symbol split does not fill the 14-symbol slot.
    #[error("special slot split {dl}:{gp}:{ul} must sum to 14 symbols")]
    SpecialSplit { dl: u8, gp: u8, ul: u8 },
    /// SS burst set periodicity outside the standardized set.
    #[error("SS burst set periodicity {0} ms is not one of 5, 10, 20, 40, 80, 160")]
    BurstPeriodicity(u32),
    /// A sweep needs at least one SSB.
    #[error("requested SSB count must be at least 1")]
    EmptySweepRequest,
    /// No SSB start symbol survived the slot filter.
    #[error("no SSB start symbols survive the slot filter")]
    EmptyGrid,
    /// SSBs per slot limited by the candidate start-symbol sets.
    #[error("SSBs per slot must be 1 or 2, got {0}")]
    SsbPerSlot(u8),
    /// The segment closed form assumes every SSB slot is filled alike.
    #[error("closed-form sweep time requires a grid with uniform per-slot occupancy")]
    NonUniformGrid,
    /// Distances must be positive to define a deployment density.
    #[error("inter-site distance must be positive, got {0}")]
    NonPositiveIsd(f64),
    /// Densities must be positive.
    #[error("deployment density must be positive, got {0}")]
    NonPositiveDensity(f64),
    /// Fractions feeding the inclusion-exclusion total must be in [0, 1].
    #[error("misalignment fraction {0} outside [0, 1]")]
    FractionRange(f64),
    /// Episode weights are undefined when neither side ever misaligns.
    #[error("both sides report zero misalignment; episode weights are undefined")]
    NoMisalignment,
    /// Beam counts of zero leave no direction to sweep.
    #[error("beam counts must be at least 1")]
    ZeroBeams,
    /// The beam-combination product must stay addressable.
    #[error("beam-count product {bs} x {ue} overflows the request size")]
    BeamProductOverflow { bs: u32, ue: u32 },
    /// Speeds below zero have no mobility interpretation.
    #[error("UE speed must be non-negative, got {0}")]
    NegativeSpeed(f64),
}
