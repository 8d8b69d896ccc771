//! Long-term beam-misalignment analytics.
//!
//! Misalignment events at the BS and UE are independent Poisson
//! processes whose rates grow with beam count, UE speed and deployment
//! density. Each event persists until the next full beam sweep
//! completes plus a processing delay. From the sweep timing this module
//! derives, in closed form:
//!
//! - per-side misalignment rates and expected misalignment durations;
//! - per-side time fractions (Little's law) and the inclusion-exclusion
//!   total fraction;
//! - normalized episode weights (BS-only, UE-only, overlapping) and the
//!   weighted overall episode duration;
//! - the SSB overhead ratio and the average beamforming gain under a
//!   sectored main-lobe/side-lobe antenna model.

use crate::ssb::{SlotFilter, SpecialAdmission, SsbCase, SsbGrid, SSB_SYMBOLS};
use crate::sweep::{self, SweepRequest, SweepTiming};
use crate::tdd::{Numerology, TddPattern};
use crate::Error;
use std::f64::consts::PI;

/// SS burst window duration in ms (5 ms half-frame).
pub const BURST_WINDOW_MS: f64 = crate::ssb::BURST_WINDOW_MS as f64;

/// Mapping from inter-site distance to BS density (per m^2).
///
/// The published relation is `lambda = 4 / (pi * d_isd)`; taken
/// literally it dominates every absolute rate below. A dimensionally
/// strict `4 / (pi * d_isd^2)` variant is kept selectable for
/// experiments where the density unit matters more than matching the
/// published curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DensityLaw {
    /// `lambda = 4 / (pi * d_isd)`.
    #[default]
    InverseIsd,
    /// `lambda = 4 / (pi * d_isd^2)`.
    InverseIsdSquared,
}

/// Convert an inter-site distance in metres to a BS density.
pub fn density_from_isd(d_isd_m: f64, law: DensityLaw) -> Result<f64, Error> {
    if !d_isd_m.is_finite() || d_isd_m <= 0.0 {
        return Err(Error::NonPositiveIsd(d_isd_m));
    }
    Ok(match law {
        DensityLaw::InverseIsd => 4.0 / (PI * d_isd_m),
        DensityLaw::InverseIsdSquared => 4.0 / (PI * d_isd_m * d_isd_m),
    })
}

/// Deployment density given directly or through an inter-site distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Deployment {
    Isd { meters: f64, law: DensityLaw },
    Density { per_m2: f64 },
}

impl Deployment {
    pub fn isd(meters: f64) -> Self {
        Deployment::Isd {
            meters,
            law: DensityLaw::default(),
        }
    }

    pub fn density(self) -> Result<f64, Error> {
        match self {
            Deployment::Isd { meters, law } => density_from_isd(meters, law),
            Deployment::Density { per_m2 } => {
                if per_m2 > 0.0 {
                    Ok(per_m2)
                } else {
                    Err(Error::NonPositiveDensity(per_m2))
                }
            }
        }
    }
}

/// Full parameter bundle for one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub deployment: Deployment,
    pub speed_mps: f64,
    pub n_beam_bs: u32,
    pub n_beam_ue: u32,
    pub tau_ss_ms: u32,
    pub t_proc_ms: f64,
    pub case: SsbCase,
    pub pattern: TddPattern,
    pub filter: SlotFilter,
    pub admission: SpecialAdmission,
    pub ssb_per_slot: u8,
}

impl Default for Scenario {
    /// Baseline evaluation point: case D under pattern (a), DL-only
    /// slots, 4 UE beams, 20 ms burst periodicity, 1 ms processing
    /// time, 100 m inter-site distance, 2 m/s UE speed, 16 BS beams.
    fn default() -> Self {
        Self {
            deployment: Deployment::isd(100.0),
            speed_mps: 2.0,
            n_beam_bs: 16,
            n_beam_ue: 4,
            tau_ss_ms: 20,
            t_proc_ms: 1.0,
            case: SsbCase::D,
            pattern: TddPattern::a(),
            filter: SlotFilter::DlOnly,
            admission: SpecialAdmission::ByRole,
            ssb_per_slot: 2,
        }
    }
}

impl Scenario {
    /// Requested SSBs per sweep: every BS/UE beam combination.
    /// Saturates on overflow; sweep construction rejects such requests.
    pub fn n_ssb_req(&self) -> u32 {
        self.n_beam_bs.saturating_mul(self.n_beam_ue)
    }

    /// Build the effective SSB grid for this scenario.
    pub fn grid(&self) -> Result<SsbGrid, Error> {
        SsbGrid::effective_with(
            self.case,
            self.pattern,
            self.filter,
            self.admission,
            self.ssb_per_slot,
        )
    }

    /// Sweep timing for this scenario via the segment closed form.
    pub fn timing(&self) -> Result<SweepTiming, Error> {
        let grid = self.grid()?;
        let req = SweepRequest::from_beam_counts(&grid, self.n_beam_bs, self.n_beam_ue, self.tau_ss_ms)?;
        sweep::closed_form(&req)
    }
}

/// Misalignment rate in events per second.
///
/// `beta = n_beam * sqrt(lambda) * v / pi`, the exponent coefficient of
/// the Poisson misalignment probability.
pub fn misalignment_rate(n_beam: u32, lambda_per_m2: f64, speed_mps: f64) -> f64 {
    f64::from(n_beam) * lambda_per_m2.sqrt() * speed_mps / PI
}

/// Probability that a side leaves its serving main lobe within an
/// observation window of `tau_s` seconds: `1 - exp(-beta * tau)`.
pub fn misalignment_prob(beta_per_s: f64, tau_s: f64) -> f64 {
    1.0 - (-beta_per_s * tau_s).exp()
}

/// Expected wait until the next sweep starts, with the event uniform
/// over one sweep period.
pub fn expected_t_next_ms(tau_sweep_ms: f64) -> f64 {
    tau_sweep_ms / 2.0
}

/// Expected tail of the final sweep cycle: with probability
/// `1 - 1/n_sweep_sets` the remaining transmissions fill a whole burst
/// window, otherwise only the residual span.
pub fn expected_t_last_ms(n_sweep_sets: u32, t_ss_ms: f64, t_sweep_r_ms: f64) -> f64 {
    let inv = 1.0 / f64::from(n_sweep_sets);
    (1.0 - inv) * t_ss_ms + inv * t_sweep_r_ms
}

/// Expected misalignment duration: wait for the next sweep, the final
/// cycle tail, and the measurement/reporting delay. Identical for both
/// sides under symmetric beam management.
pub fn expected_t_m_ms(timing: &SweepTiming, t_proc_ms: f64) -> f64 {
    expected_t_next_ms(f64::from(timing.tau_sweep_ms()))
        + expected_t_last_ms(timing.n_sweep_sets(), BURST_WINDOW_MS, timing.t_sweep_r_ms())
        + t_proc_ms
}

/// Expected duration of an overlapping misalignment episode.
///
/// Second-moment expansion `E[T_bs] + E[T_ue^2] / (2 E[T_bs])` with the
/// durations uniform on `[0, 2 mean]`, so `E[T_ue^2] = (4/3) mean^2`.
/// For equal sides this reduces to `5/3` of the single-side duration.
pub fn overlap_duration_ms(e_t_bs_ms: f64, e_t_ue_ms: f64) -> f64 {
    e_t_bs_ms + (2.0 / 3.0) * e_t_ue_ms * e_t_ue_ms / e_t_bs_ms
}

/// Little's-law misalignment fraction: events/s times expected episode
/// duration. Values above 1 signal that the model's single-outstanding-
/// event assumption broke down; they are returned unclamped.
pub fn gamma_fraction(beta_per_s: f64, e_t_m_ms: f64) -> f64 {
    beta_per_s * e_t_m_ms / 1e3
}

/// Fraction of time at least one side is misaligned, by inclusion-
/// exclusion over independent sides. Inputs must be valid fractions.
pub fn gamma_total(gamma_bs: f64, gamma_ue: f64) -> Result<f64, Error> {
    for g in [gamma_bs, gamma_ue] {
        if !(0.0..=1.0).contains(&g) {
            return Err(Error::FractionRange(g));
        }
    }
    Ok(gamma_bs + gamma_ue - gamma_bs * gamma_ue)
}

/// Normalized probabilities that a misaligned interval is BS-only,
/// UE-only, or overlapping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodeWeights {
    pub bs_only: f64,
    pub ue_only: f64,
    pub both: f64,
}

impl EpisodeWeights {
    pub const ZERO: Self = Self {
        bs_only: 0.0,
        ue_only: 0.0,
        both: 0.0,
    };

    pub fn sum(&self) -> f64 {
        self.bs_only + self.ue_only + self.both
    }
}

/// Episode weights from the per-side fractions; undefined when neither
/// side ever misaligns.
pub fn episode_weights(gamma_bs: f64, gamma_ue: f64) -> Result<EpisodeWeights, Error> {
    let total = gamma_total(gamma_bs, gamma_ue)?;
    if total == 0.0 {
        return Err(Error::NoMisalignment);
    }
    Ok(EpisodeWeights {
        bs_only: gamma_bs * (1.0 - gamma_ue) / total,
        ue_only: gamma_ue * (1.0 - gamma_bs) / total,
        both: gamma_bs * gamma_ue / total,
    })
}

/// Overall misalignment duration: episode-weighted average of the
/// single-side and overlapping durations.
pub fn overall_duration_ms(weights: &EpisodeWeights, e_t_bs_ms: f64, e_t_ue_ms: f64, e_t_bu_ms: f64) -> f64 {
    weights.bs_only * e_t_bs_ms + weights.ue_only * e_t_ue_ms + weights.both * e_t_bu_ms
}

/// SSB overhead: DL symbols spent on SSBs over the DL symbols available
/// in one sweep period. The special slot's DL portion counts toward the
/// denominator only when special slots may carry SSBs.
pub fn ssb_overhead(
    n_ssb_req: u32,
    tau_sweep_ms: u32,
    pattern: TddPattern,
    num: Numerology,
    include_special_dl: bool,
) -> f64 {
    if n_ssb_req == 0 {
        return 0.0;
    }
    let window_slots = u64::from(tau_sweep_ms) * u64::from(num.slots_per_ms());
    let dl_symbols = pattern.dl_symbols_in_span(num, window_slots, include_special_dl);
    f64::from(n_ssb_req * SSB_SYMBOLS) / dl_symbols as f64
}

/// Average beamforming gain for given (already valid) misalignment
/// fractions: each side contributes its main-lobe gain `n_beam` while
/// aligned and side-lobe gain `1/n_beam` otherwise, scaled by the SSB
/// overhead.
pub fn gain_from_fractions(gamma_bs: f64, gamma_ue: f64, n_beam_bs: u32, n_beam_ue: u32, eta_overhead: f64) -> f64 {
    let side = |gamma: f64, n: u32| -> f64 {
        let n = f64::from(n);
        (1.0 - gamma) * n + gamma / n
    };
    (1.0 - eta_overhead) * side(gamma_bs, n_beam_bs) * side(gamma_ue, n_beam_ue)
}

/// Per-side misalignment summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideMetrics {
    /// Misalignment events per second.
    pub beta_per_s: f64,
    /// Expected misalignment duration in ms.
    pub e_t_m_ms: f64,
    /// Little's-law time fraction, unclamped.
    pub gamma: f64,
}

/// Every derived metric for one scenario.
///
/// `gamma` values are reported raw; when a side exceeds 1 the scenario
/// is flagged invalid and the composed quantities (total fraction,
/// weights, gain) use the saturated fraction `min(gamma, 1)` so they
/// remain interpretable as time shares.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MisalignmentReport {
    pub timing: SweepTiming,
    pub bs: SideMetrics,
    pub ue: SideMetrics,
    /// Expected overlapping-episode duration in ms.
    pub e_t_overlap_ms: f64,
    /// Fraction of time at least one side is misaligned.
    pub gamma_total: f64,
    pub weights: EpisodeWeights,
    /// Overall episode duration in ms (0 when nothing ever misaligns).
    pub overall_duration_ms: f64,
    /// SSB overhead ratio in [0, 1).
    pub eta_overhead: f64,
    /// Average beamforming gain, linear.
    pub avg_gain: f64,
    /// False when a per-side fraction exceeded 1.
    pub model_valid: bool,
}

/// Run the full analytic chain for a scenario: grid, sweep timing,
/// rates, durations, fractions, weights, overhead and average gain.
pub fn evaluate(scenario: &Scenario) -> Result<MisalignmentReport, Error> {
    if scenario.speed_mps < 0.0 {
        return Err(Error::NegativeSpeed(scenario.speed_mps));
    }
    let grid = scenario.grid()?;
    let req = SweepRequest::from_beam_counts(
        &grid,
        scenario.n_beam_bs,
        scenario.n_beam_ue,
        scenario.tau_ss_ms,
    )?;
    let timing = sweep::closed_form(&req)?;
    let lambda = scenario.deployment.density()?;

    let e_t_m = expected_t_m_ms(&timing, scenario.t_proc_ms);
    let beta_bs = misalignment_rate(scenario.n_beam_bs, lambda, scenario.speed_mps);
    let beta_ue = misalignment_rate(scenario.n_beam_ue, lambda, scenario.speed_mps);
    let gamma_bs = gamma_fraction(beta_bs, e_t_m);
    let gamma_ue = gamma_fraction(beta_ue, e_t_m);
    let model_valid = gamma_bs <= 1.0 && gamma_ue <= 1.0;

    // Saturated fractions keep the composed metrics physical once the
    // single-event assumption breaks.
    let gb = gamma_bs.min(1.0);
    let gu = gamma_ue.min(1.0);
    let total = gamma_total(gb, gu).expect("saturated fractions are in range");
    let weights = match episode_weights(gb, gu) {
        Ok(w) => w,
        Err(Error::NoMisalignment) => EpisodeWeights::ZERO,
        Err(e) => return Err(e),
    };
    let e_t_overlap = overlap_duration_ms(e_t_m, e_t_m);
    let overall = overall_duration_ms(&weights, e_t_m, e_t_m, e_t_overlap);
    let eta = ssb_overhead(
        scenario.n_ssb_req(),
        timing.tau_sweep_ms(),
        scenario.pattern,
        grid.numerology(),
        scenario.filter == SlotFilter::DlAndSpecial,
    );
    let avg_gain = gain_from_fractions(gb, gu, scenario.n_beam_bs, scenario.n_beam_ue, eta);

    Ok(MisalignmentReport {
        timing,
        bs: SideMetrics {
            beta_per_s: beta_bs,
            e_t_m_ms: e_t_m,
            gamma: gamma_bs,
        },
        ue: SideMetrics {
            beta_per_s: beta_ue,
            e_t_m_ms: e_t_m,
            gamma: gamma_ue,
        },
        e_t_overlap_ms: e_t_overlap,
        gamma_total: total,
        weights,
        overall_duration_ms: overall,
        eta_overhead: eta,
        avg_gain,
        model_valid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn density_inverse_square_values() {
        let l = density_from_isd(100.0, DensityLaw::InverseIsdSquared).unwrap();
        close(l, 1.273_239_5e-4, 1e-9);
        let l = density_from_isd(200.0, DensityLaw::InverseIsdSquared).unwrap();
        close(l, 3.183_098_9e-5, 1e-10);
    }

    #[test]
    fn density_inverse_value() {
        let l = density_from_isd(100.0, DensityLaw::InverseIsd).unwrap();
        close(l, 1.273_239_5e-2, 1e-7);
    }

    #[test]
    fn density_scaling_with_distance() {
        // Doubling the distance halves sqrt(lambda) under the squared
        // law and divides it by sqrt(2) under the published one.
        let sq = |d: f64| density_from_isd(d, DensityLaw::InverseIsdSquared).unwrap().sqrt();
        close(sq(200.0), sq(100.0) / 2.0, 1e-12);
        let lin = |d: f64| density_from_isd(d, DensityLaw::InverseIsd).unwrap().sqrt();
        close(lin(200.0), lin(100.0) / 2.0_f64.sqrt(), 1e-12);
    }

    #[test]
    fn density_rejects_non_positive() {
        assert!(density_from_isd(0.0, DensityLaw::InverseIsd).is_err());
        assert!(density_from_isd(-5.0, DensityLaw::InverseIsdSquared).is_err());
        assert!(Deployment::Density { per_m2: 0.0 }.density().is_err());
    }

    #[test]
    fn rate_reference_value() {
        close(misalignment_rate(4, 1.273_239_5e-4, 2.0), 0.028_73, 1e-5);
    }

    #[test]
    fn rate_linearities() {
        let lambda = 7.3e-5;
        close(
            misalignment_rate(8, lambda, 3.0),
            2.0 * misalignment_rate(4, lambda, 3.0),
            1e-15,
        );
        close(
            misalignment_rate(4, lambda, 6.0),
            2.0 * misalignment_rate(4, lambda, 3.0),
            1e-15,
        );
        assert_eq!(misalignment_rate(4, lambda, 0.0), 0.0);
    }

    #[test]
    fn probability_examples() {
        close(misalignment_prob(0.028_73, 0.020), 5.744e-4, 5e-7);
        assert_eq!(misalignment_prob(0.5, 0.0), 0.0);
        // Monotone in the observation window.
        let mut prev = 0.0;
        for tau in [0.1, 0.5, 1.0, 5.0, 50.0] {
            let p = misalignment_prob(0.3, tau);
            assert!(p > prev && p < 1.0);
            prev = p;
        }
    }

    #[test]
    fn expected_waits() {
        assert_eq!(expected_t_next_ms(20.0), 10.0);
        assert_eq!(expected_t_next_ms(40.0), 20.0);
        assert_eq!(expected_t_last_ms(1, 5.0, 1.0), 1.0);
        close(expected_t_last_ms(2, 5.0, 0.013_392_857), 2.506_696_4, 1e-6);
        // Large set counts push the tail toward the full window.
        close(expected_t_last_ms(1_000_000, 5.0, 0.5), 5.0, 1e-4);
    }

    #[test]
    fn expected_duration_from_real_timings() {
        use crate::ssb::{SlotFilter, SsbCase, SsbGrid};
        use crate::tdd::TddPattern;

        let grid = SsbGrid::effective(SsbCase::F, TddPattern::a(), SlotFilter::DlOnly).unwrap();
        let t64 = sweep::closed_form(&SweepRequest::new(&grid, 64, 20).unwrap()).unwrap();
        assert_eq!(expected_t_m_ms(&t64, 1.0), 12.0);

        let t65 = sweep::closed_form(&SweepRequest::new(&grid, 65, 20).unwrap()).unwrap();
        close(expected_t_m_ms(&t65, 1.0), 23.506_7, 1e-4);
        // Lower bound: half the sweep period plus processing.
        assert!(expected_t_m_ms(&t65, 1.0) >= 20.0 + 1.0);
    }

    #[test]
    fn overlap_duration_factor() {
        assert_eq!(overlap_duration_ms(12.0, 12.0), 20.0);
        close(overlap_duration_ms(10.0, 1e-9), 10.0, 1e-9);
        // 5/3 of the common duration whenever the sides are equal.
        for t in [1.0, 12.0, 85.5] {
            close(overlap_duration_ms(t, t), 5.0 * t / 3.0, 1e-12);
        }
    }

    #[test]
    fn gamma_fraction_values() {
        close(gamma_fraction(0.028_73, 12.0), 3.447_6e-4, 1e-7);
        assert_eq!(gamma_fraction(0.0, 55.0), 0.0);
        // Breakdown values pass through unclamped.
        assert_eq!(gamma_fraction(100.0, 20.0), 2.0);
    }

    #[test]
    fn gamma_total_identities() {
        assert_eq!(gamma_total(0.5, 0.5).unwrap(), 0.75);
        assert_eq!(gamma_total(0.0, 0.3).unwrap(), 0.3);
        assert_eq!(gamma_total(1.0, 0.77).unwrap(), 1.0);
        assert_eq!(gamma_total(1.2, 0.1).unwrap_err(), Error::FractionRange(1.2));
    }

    #[test]
    fn weights_examples() {
        let w = episode_weights(0.5, 0.5).unwrap();
        close(w.bs_only, 1.0 / 3.0, 1e-12);
        close(w.ue_only, 1.0 / 3.0, 1e-12);
        close(w.both, 1.0 / 3.0, 1e-12);

        let w = episode_weights(0.2, 0.0).unwrap();
        assert_eq!((w.bs_only, w.ue_only, w.both), (1.0, 0.0, 0.0));

        assert_eq!(episode_weights(0.0, 0.0).unwrap_err(), Error::NoMisalignment);
    }

    #[test]
    fn weights_sum_to_one() {
        for (gb, gu) in [(0.1, 0.9), (0.33, 0.44), (0.999, 0.001), (1.0, 1.0)] {
            let w = episode_weights(gb, gu).unwrap();
            close(w.sum(), 1.0, 1e-12);
        }
    }

    #[test]
    fn overall_duration_examples() {
        let thirds = EpisodeWeights {
            bs_only: 1.0 / 3.0,
            ue_only: 1.0 / 3.0,
            both: 1.0 / 3.0,
        };
        close(overall_duration_ms(&thirds, 12.0, 12.0, 20.0), 44.0 / 3.0, 1e-12);
        let bs_only = EpisodeWeights {
            bs_only: 1.0,
            ue_only: 0.0,
            both: 0.0,
        };
        assert_eq!(overall_duration_ms(&bs_only, 7.0, 9.0, 11.0), 7.0);
        // Convex combination stays within the durations' range.
        let g = overall_duration_ms(&thirds, 12.0, 12.0, 20.0);
        assert!((12.0..=20.0).contains(&g));
    }

    #[test]
    fn overhead_reference_value() {
        let num = Numerology::new(5).unwrap();
        let eta = ssb_overhead(64, 20, TddPattern::a(), num, false);
        close(eta, 256.0 / 7056.0, 1e-12);
        assert_eq!(ssb_overhead(0, 20, TddPattern::a(), num, false), 0.0);
        // Linear numerator.
        let eta2 = ssb_overhead(128, 20, TddPattern::a(), num, false);
        close(eta2, 2.0 * eta, 1e-12);
    }

    #[test]
    fn overhead_special_slot_denominator() {
        let num = Numerology::new(3).unwrap();
        let dl_only = ssb_overhead(64, 20, TddPattern::a(), num, false);
        let with_special = ssb_overhead(64, 20, TddPattern::a(), num, true);
        // A larger denominator shrinks the ratio.
        assert!(with_special < dl_only);
        close(dl_only, 256.0 / (8.0 * 210.0), 1e-12);
        close(with_special, 256.0 / (8.0 * 220.0), 1e-12);
    }

    #[test]
    fn gain_examples() {
        assert_eq!(gain_from_fractions(0.0, 0.0, 64, 4, 0.0), 256.0);
        close(gain_from_fractions(0.1, 0.1, 4, 4, 0.0), 13.140_625, 1e-12);
        let g = gain_from_fractions(1.0, 1.0, 8, 4, 0.25);
        close(g, 0.75 / 32.0, 1e-15);
    }

    #[test]
    fn evaluate_baseline_scenario() {
        let report = evaluate(&Scenario::default()).unwrap();
        assert!(report.model_valid);
        assert!(report.bs.gamma > report.ue.gamma);
        assert!(report.gamma_total >= report.bs.gamma.max(report.ue.gamma));
        assert!(report.gamma_total <= report.bs.gamma + report.ue.gamma);
        close(report.weights.sum(), 1.0, 1e-12);
        assert!(report.avg_gain > 0.0 && report.avg_gain.is_finite());
        assert!(report.eta_overhead > 0.0 && report.eta_overhead < 1.0);
        // Both sides share the same expected episode duration.
        assert_eq!(report.bs.e_t_m_ms, report.ue.e_t_m_ms);
        close(
            report.e_t_overlap_ms,
            5.0 * report.bs.e_t_m_ms / 3.0,
            1e-12,
        );
    }

    #[test]
    fn evaluate_stationary_ue() {
        let scenario = Scenario {
            speed_mps: 0.0,
            ..Scenario::default()
        };
        let report = evaluate(&scenario).unwrap();
        assert_eq!(report.bs.gamma, 0.0);
        assert_eq!(report.ue.gamma, 0.0);
        assert_eq!(report.gamma_total, 0.0);
        assert_eq!(report.weights, EpisodeWeights::ZERO);
        assert_eq!(report.overall_duration_ms, 0.0);
        close(
            report.avg_gain,
            (1.0 - report.eta_overhead) * 64.0,
            1e-12,
        );
    }

    #[test]
    fn evaluate_flags_breakdown_but_stays_physical() {
        // Very fast UE with many beams saturates both fractions.
        let scenario = Scenario {
            speed_mps: 8.0,
            n_beam_bs: 128,
            ..Scenario::default()
        };
        let report = evaluate(&scenario).unwrap();
        assert!(!report.model_valid);
        assert!(report.bs.gamma > 1.0);
        assert!(report.gamma_total <= 1.0);
        assert!(report.avg_gain > 0.0);
        close(report.weights.sum(), 1.0, 1e-12);
    }

    #[test]
    fn evaluate_rejects_negative_speed() {
        let scenario = Scenario {
            speed_mps: -1.0,
            ..Scenario::default()
        };
        assert!(evaluate(&scenario).is_err());
    }

    #[test]
    fn report_finite_over_sweep_ranges() {
        for n_bs in [1u32, 2, 8, 32, 96, 128] {
            for v in [0.5, 1.0, 2.0, 4.0, 8.0] {
                let scenario = Scenario {
                    n_beam_bs: n_bs,
                    speed_mps: v,
                    ..Scenario::default()
                };
                let report = evaluate(&scenario).unwrap();
                for value in [
                    report.bs.beta_per_s,
                    report.bs.gamma,
                    report.ue.gamma,
                    report.gamma_total,
                    report.overall_duration_ms,
                    report.eta_overhead,
                    report.avg_gain,
                ] {
                    assert!(value.is_finite(), "n_bs={n_bs} v={v}");
                }
            }
        }
    }
}
