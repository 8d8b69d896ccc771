//! Subcommand implementations. Each emits CSV (or a text report for
//! `validate`) with deterministic row order and formatting.

use crate::output::{fmt_sig, to_db};
use crate::validate;
use beamsweep::model::{self, Deployment, Scenario};
use beamsweep::sim::{self, SimConfig, SimEstimate};
use beamsweep::ssb::{SlotFilter, SsbCase, SsbGrid};
use beamsweep::sweep::{self, SweepRequest, ALLOWED_TAU_SS_MS};
use beamsweep::tdd::{PatternVariant, TddPattern};
use std::io::Write;

pub type CsvSink<'a> = &'a mut csv::Writer<Box<dyn Write>>;

fn pattern_label(p: TddPattern) -> &'static str {
    match p.variant() {
        PatternVariant::A => "a",
        PatternVariant::B => "b",
    }
}

fn filter_label(f: SlotFilter) -> &'static str {
    match f {
        SlotFilter::DlOnly => "dl",
        SlotFilter::DlAndSpecial => "dl+s",
    }
}

/// Effective SSB counts for every case, pattern and filter.
pub fn cmd_table1(w: CsvSink) -> Result<(), String> {
    w.write_record(["case", "pattern", "l_eff_dl", "l_eff_dl_special"])
        .map_err(|e| e.to_string())?;
    for case in SsbCase::ALL {
        for pattern in [TddPattern::a(), TddPattern::b()] {
            let dl = SsbGrid::effective(case, pattern, SlotFilter::DlOnly)
                .map_err(|e| e.to_string())?;
            let both = SsbGrid::effective(case, pattern, SlotFilter::DlAndSpecial)
                .map_err(|e| e.to_string())?;
            w.write_record([
                case.label(),
                pattern_label(pattern),
                &dl.l_eff().to_string(),
                &both.l_eff().to_string(),
            ])
            .map_err(|e| e.to_string())?;
        }
    }
    w.flush().map_err(|e| e.to_string())
}

/// Sweep duration against the requested SSB count.
pub fn cmd_sweep_curve(
    scenario: &Scenario,
    n_req_min: u32,
    n_req_max: u32,
    all_configs: bool,
    w: CsvSink,
) -> Result<(), String> {
    if n_req_min == 0 || n_req_min > n_req_max {
        return Err("n-req range must satisfy 1 <= min <= max".to_string());
    }
    w.write_record([
        "case",
        "pattern",
        "filter",
        "n_req",
        "t_sweep_ms",
        "tau_sweep_ms",
        "n_sweep_sets",
    ])
    .map_err(|e| e.to_string())?;

    let configs = if all_configs {
        validate::all_configurations()
    } else {
        vec![(scenario.case, scenario.pattern, scenario.filter)]
    };
    for (case, pattern, filter) in configs {
        let grid = SsbGrid::effective(case, pattern, filter).map_err(|e| e.to_string())?;
        for n_req in n_req_min..=n_req_max {
            let req = SweepRequest::new(&grid, n_req, scenario.tau_ss_ms).map_err(|e| e.to_string())?;
            let timing = sweep::closed_form(&req).map_err(|e| e.to_string())?;
            w.write_record([
                case.label(),
                pattern_label(pattern),
                filter_label(filter),
                &n_req.to_string(),
                &fmt_sig(timing.t_sweep_ms()),
                &timing.tau_sweep_ms().to_string(),
                &timing.n_sweep_sets().to_string(),
            ])
            .map_err(|e| e.to_string())?;
        }
    }
    w.flush().map_err(|e| e.to_string())
}

/// Scenario field a metric curve sweeps over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricAxis {
    NBs,
    NUe,
    Speed,
    Isd,
    TauSs,
}

impl MetricAxis {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "nbs" => Ok(Self::NBs),
            "nue" => Ok(Self::NUe),
            "speed" => Ok(Self::Speed),
            "isd" => Ok(Self::Isd),
            "tau-ss" => Ok(Self::TauSs),
            _ => Err(format!(
                "unknown axis `{s}` (expected nbs, nue, speed, isd or tau-ss)"
            )),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::NBs => "nbs",
            Self::NUe => "nue",
            Self::Speed => "speed",
            Self::Isd => "isd",
            Self::TauSs => "tau-ss",
        }
    }

    fn apply(self, base: &Scenario, value: f64) -> Result<Scenario, String> {
        let mut s = *base;
        let as_count = |v: f64| -> Result<u32, String> {
            if v >= 1.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as u32)
            } else {
                Err(format!("axis value {v} is not a positive integer"))
            }
        };
        match self {
            Self::NBs => s.n_beam_bs = as_count(value)?,
            Self::NUe => s.n_beam_ue = as_count(value)?,
            Self::Speed => s.speed_mps = value,
            Self::Isd => {
                let law = match base.deployment {
                    Deployment::Isd { law, .. } => law,
                    Deployment::Density { .. } => Default::default(),
                };
                s.deployment = Deployment::Isd { meters: value, law };
            }
            Self::TauSs => {
                let tau = as_count(value)?;
                if !ALLOWED_TAU_SS_MS.contains(&tau) {
                    return Err(format!("tau-ss {tau} not in {ALLOWED_TAU_SS_MS:?}"));
                }
                s.tau_ss_ms = tau;
            }
        }
        Ok(s)
    }
}

pub fn parse_values(s: &str) -> Result<Vec<f64>, String> {
    let values: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| format!("invalid axis values `{s}`: {e}"))?;
    if values.is_empty() {
        return Err("axis values must be non-empty".to_string());
    }
    Ok(values)
}

/// One row per axis value: misalignment fractions, overall duration,
/// overhead and average gain. Serves the duration, fraction and gain
/// curves alike.
pub fn cmd_metric_curve(
    scenario: &Scenario,
    axis: MetricAxis,
    values: &[f64],
    gain_in_db: bool,
    w: CsvSink,
) -> Result<(), String> {
    w.write_record([
        "axis",
        "value",
        "overall_duration_ms",
        "gamma_bs",
        "gamma_ue",
        "gamma_total",
        "eta_oh",
        if gain_in_db { "e_gain_db" } else { "e_gain" },
        "valid",
    ])
    .map_err(|e| e.to_string())?;

    for &value in values {
        let point = axis.apply(scenario, value)?;
        let report = model::evaluate(&point).map_err(|e| e.to_string())?;
        let gain = if gain_in_db {
            to_db(report.avg_gain)
        } else {
            report.avg_gain
        };
        w.write_record([
            axis.label(),
            &fmt_sig(value),
            &fmt_sig(report.overall_duration_ms),
            &fmt_sig(report.bs.gamma),
            &fmt_sig(report.ue.gamma),
            &fmt_sig(report.gamma_total),
            &fmt_sig(report.eta_overhead),
            &fmt_sig(gain),
            if report.model_valid { "true" } else { "false" },
        ])
        .map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

/// Start symbols and burst segmentation of the scenario's grid.
pub fn cmd_grid_dump(scenario: &Scenario, w: CsvSink) -> Result<(), String> {
    let grid = scenario.grid().map_err(|e| e.to_string())?;
    w.write_record(["record", "index", "start_symbol", "slot", "capacity", "gap_slots"])
        .map_err(|e| e.to_string())?;
    for (i, &start) in grid.start_symbols().iter().enumerate() {
        w.write_record([
            "ssb",
            &i.to_string(),
            &start.to_string(),
            &(start / 14).to_string(),
            "",
            "",
        ])
        .map_err(|e| e.to_string())?;
    }
    for (i, seg) in grid.segments().iter().enumerate() {
        w.write_record([
            "segment",
            &i.to_string(),
            "",
            &seg.first_slot.to_string(),
            &seg.capacity.to_string(),
            &seg.gap_slots.to_string(),
        ])
        .map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| e.to_string())
}

/// Closed form against the symbol walk over every configuration.
/// Returns false (and prints the first diff) on any mismatch.
pub fn cmd_validate(n_req_max: u32, out: &mut dyn Write) -> Result<bool, String> {
    if n_req_max == 0 {
        return Err("n-req-max must be at least 1".to_string());
    }
    match validate::check_equivalence(n_req_max) {
        Ok(checks) => {
            writeln!(
                out,
                "ok: {checks} allocations across {} configurations match exactly",
                validate::all_configurations().len()
            )
            .map_err(|e| e.to_string())?;
            Ok(true)
        }
        Err(mismatch) => {
            writeln!(out, "MISMATCH: {mismatch}").map_err(|e| e.to_string())?;
            Ok(false)
        }
    }
}

fn simulate_row(
    w: CsvSink,
    metric: &str,
    analytic: f64,
    est: &SimEstimate,
) -> Result<f64, String> {
    let z = est.z_score(analytic);
    w.write_record([
        metric,
        &fmt_sig(analytic),
        &fmt_sig(est.mean),
        &fmt_sig(est.standard_error),
        &fmt_sig(z),
        &est.seed.to_string(),
    ])
    .map_err(|e| e.to_string())?;
    Ok(z)
}

/// Analytic-versus-simulated comparison table. Returns false when any
/// |z| exceeds `z_max`. Without an explicit horizon the run is sized
/// for roughly ten thousand events.
pub fn cmd_simulate(
    scenario: &Scenario,
    horizon_s: Option<f64>,
    replications: u32,
    seed: u64,
    z_max: f64,
    w: CsvSink,
) -> Result<bool, String> {
    let report = model::evaluate(scenario).map_err(|e| e.to_string())?;
    let cfg = match horizon_s {
        Some(h) => SimConfig::new(*scenario, h, seed, replications),
        None => SimConfig::sized_for_events(*scenario, 1e4, seed, replications)
            .map_err(|e| e.to_string())?,
    };
    let fractions = sim::simulate_fractions(&cfg).map_err(|e| e.to_string())?;
    let gain = sim::simulate_gain(&cfg).map_err(|e| e.to_string())?;
    let t_m = sim::estimate_t_m(scenario, 200_000, seed).map_err(|e| e.to_string())?;

    w.write_record(["metric", "analytic", "simulated", "stderr", "z_score", "seed"])
        .map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for (metric, analytic, est) in [
        ("gamma_bs", report.bs.gamma, &fractions.gamma_bs),
        ("gamma_ue", report.ue.gamma, &fractions.gamma_ue),
        ("gamma_total", report.gamma_total, &fractions.gamma_total),
        (
            "overall_duration_ms",
            report.overall_duration_ms,
            &fractions.overall_duration_ms,
        ),
        ("e_t_m_ms", report.bs.e_t_m_ms, &t_m),
        ("avg_gain", report.avg_gain, &gain),
    ] {
        let z = simulate_row(w, metric, analytic, est)?;
        worst = worst.max(z.abs());
    }
    w.flush().map_err(|e| e.to_string())?;
    Ok(worst <= z_max)
}
