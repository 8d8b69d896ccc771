//! Scenario assembly from defaults, a key-value config file and flags.
//!
//! Precedence is flags over config file over built-in defaults. The
//! inter-site distance and the direct density are alternatives; the
//! pair is taken wholesale from the highest layer that sets either.

use beamsweep::model::{DensityLaw, Deployment, Scenario};
use beamsweep::ssb::{SlotFilter, SpecialAdmission, SsbCase};
use beamsweep::tdd::{PatternVariant, SpecialSplit, TddPattern};
use clap::Args;
use std::fs;
use std::path::Path;

pub fn parse_case(s: &str) -> Result<SsbCase, String> {
    match s.to_ascii_uppercase().as_str() {
        "D" => Ok(SsbCase::D),
        "F" => Ok(SsbCase::F),
        "G" => Ok(SsbCase::G),
        _ => Err(format!("unknown case `{s}` (expected D, F or G)")),
    }
}

pub fn parse_variant(s: &str) -> Result<PatternVariant, String> {
    match s.to_ascii_lowercase().as_str() {
        "a" => Ok(PatternVariant::A),
        "b" => Ok(PatternVariant::B),
        _ => Err(format!("unknown pattern `{s}` (expected a or b)")),
    }
}

pub fn parse_filter(s: &str) -> Result<SlotFilter, String> {
    match s.to_ascii_lowercase().as_str() {
        "dl" => Ok(SlotFilter::DlOnly),
        "dl+s" => Ok(SlotFilter::DlAndSpecial),
        _ => Err(format!("unknown slot filter `{s}` (expected dl or dl+s)")),
    }
}

pub fn parse_density_law(s: &str) -> Result<DensityLaw, String> {
    match s.to_ascii_lowercase().as_str() {
        "linear" => Ok(DensityLaw::InverseIsd),
        "inverse-square" => Ok(DensityLaw::InverseIsdSquared),
        _ => Err(format!(
            "unknown density law `{s}` (expected linear or inverse-square)"
        )),
    }
}

pub fn parse_admission(s: &str) -> Result<SpecialAdmission, String> {
    match s.to_ascii_lowercase().as_str() {
        "role" => Ok(SpecialAdmission::ByRole),
        "symbols" => Ok(SpecialAdmission::WithinDlSymbols),
        _ => Err(format!(
            "unknown special-slot admission `{s}` (expected role or symbols)"
        )),
    }
}

pub fn parse_split(s: &str) -> Result<(u8, u8, u8), String> {
    let parts: Vec<&str> = s.split([',', ':']).collect();
    if parts.len() != 3 {
        return Err(format!("special split `{s}` must be dl,gp,ul"));
    }
    let mut v = [0u8; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("invalid symbol count `{part}` in special split"))?;
    }
    Ok((v[0], v[1], v[2]))
}

/// Scenario flags shared by every subcommand.
#[derive(Args, Debug, Clone, Default)]
pub struct ScenarioFlags {
    /// SSB case: D (120 kHz), F (480 kHz) or G (960 kHz)
    #[arg(long, global = true, value_parser = parse_case)]
    pub case: Option<SsbCase>,
    /// TDD pattern: a (2.5 ms period) or b (5 ms period)
    #[arg(long, global = true, value_parser = parse_variant)]
    pub pattern: Option<PatternVariant>,
    /// Slots that may carry SSBs: dl or dl+s
    #[arg(long, global = true, value_parser = parse_filter)]
    pub filter: Option<SlotFilter>,
    /// Inter-site distance in metres
    #[arg(long, global = true, conflicts_with = "density")]
    pub isd: Option<f64>,
    /// BS density per square metre (alternative to --isd)
    #[arg(long, global = true)]
    pub density: Option<f64>,
    /// ISD-to-density mapping: linear (4/(pi d)) or inverse-square (4/(pi d^2))
    #[arg(long = "density-law", global = true, value_parser = parse_density_law)]
    pub density_law: Option<DensityLaw>,
    /// UE speed in m/s
    #[arg(long = "speed", global = true)]
    pub speed: Option<f64>,
    /// BS beam count
    #[arg(long, global = true)]
    pub nbs: Option<u32>,
    /// UE beam count
    #[arg(long, global = true)]
    pub nue: Option<u32>,
    /// SS burst set periodicity in ms (5, 10, 20, 40, 80 or 160)
    #[arg(long = "tau-ss", global = true)]
    pub tau_ss: Option<u32>,
    /// Measurement and reporting delay in ms
    #[arg(long = "tproc", global = true)]
    pub tproc: Option<f64>,
    /// SSBs per slot (1 or 2)
    #[arg(long = "ssb-per-slot", global = true)]
    pub ssb_per_slot: Option<u8>,
    /// Special-slot symbol split for pattern b, e.g. 6,4,4 or 4,6,4
    #[arg(long = "special-split", global = true, value_parser = parse_split)]
    pub special_split: Option<(u8, u8, u8)>,
    /// Special-slot SSB admission: role or symbols
    #[arg(long, global = true, value_parser = parse_admission)]
    pub admission: Option<SpecialAdmission>,
}

/// Partially specified scenario; layers merge by precedence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScenarioOverrides {
    pub case: Option<SsbCase>,
    pub pattern: Option<PatternVariant>,
    pub filter: Option<SlotFilter>,
    pub isd: Option<f64>,
    pub density: Option<f64>,
    pub density_law: Option<DensityLaw>,
    pub speed: Option<f64>,
    pub nbs: Option<u32>,
    pub nue: Option<u32>,
    pub tau_ss: Option<u32>,
    pub tproc: Option<f64>,
    pub ssb_per_slot: Option<u8>,
    pub special_split: Option<(u8, u8, u8)>,
    pub admission: Option<SpecialAdmission>,
    pub seed: Option<u64>,
}

impl From<&ScenarioFlags> for ScenarioOverrides {
    fn from(f: &ScenarioFlags) -> Self {
        Self {
            case: f.case,
            pattern: f.pattern,
            filter: f.filter,
            isd: f.isd,
            density: f.density,
            density_law: f.density_law,
            speed: f.speed,
            nbs: f.nbs,
            nue: f.nue,
            tau_ss: f.tau_ss,
            tproc: f.tproc,
            ssb_per_slot: f.ssb_per_slot,
            special_split: f.special_split,
            admission: f.admission,
            seed: None,
        }
    }
}

impl ScenarioOverrides {
    /// Parse a flat `key = value` file; `#` starts a comment.
    pub fn from_config_file(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let mut out = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let ctx = |e: String| format!("line {}: {e}", lineno + 1);
            let num = |v: &str| -> Result<f64, String> {
                v.parse().map_err(|_| format!("line {}: invalid number `{v}`", lineno + 1))
            };
            match key {
                "case" => out.case = Some(parse_case(value).map_err(ctx)?),
                "pattern" => out.pattern = Some(parse_variant(value).map_err(ctx)?),
                "filter" => out.filter = Some(parse_filter(value).map_err(ctx)?),
                "isd" => out.isd = Some(num(value)?),
                "density" => out.density = Some(num(value)?),
                "density-law" => out.density_law = Some(parse_density_law(value).map_err(ctx)?),
                "speed" => out.speed = Some(num(value)?),
                "nbs" => out.nbs = Some(num(value)? as u32),
                "nue" => out.nue = Some(num(value)? as u32),
                "tau-ss" => out.tau_ss = Some(num(value)? as u32),
                "tproc" => out.tproc = Some(num(value)?),
                "ssb-per-slot" => out.ssb_per_slot = Some(num(value)? as u8),
                "special-split" => out.special_split = Some(parse_split(value).map_err(ctx)?),
                "admission" => out.admission = Some(parse_admission(value).map_err(ctx)?),
                "seed" => {
                    out.seed =
                        Some(value.parse().map_err(|_| format!("line {}: invalid seed `{value}`", lineno + 1))?)
                }
                _ => return Err(format!("line {}: unknown key `{key}`", lineno + 1)),
            }
        }
        if out.isd.is_some() && out.density.is_some() {
            return Err("config sets both isd and density; pick one".to_string());
        }
        Ok(out)
    }

    /// Overlay `self` on top of `base`; `self` wins field by field, and
    /// the (isd, density) pair moves as a unit.
    pub fn merged_over(mut self, base: Self) -> Self {
        if self.isd.is_none() && self.density.is_none() {
            self.isd = base.isd;
            self.density = base.density;
        }
        Self {
            case: self.case.or(base.case),
            pattern: self.pattern.or(base.pattern),
            filter: self.filter.or(base.filter),
            isd: self.isd,
            density: self.density,
            density_law: self.density_law.or(base.density_law),
            speed: self.speed.or(base.speed),
            nbs: self.nbs.or(base.nbs),
            nue: self.nue.or(base.nue),
            tau_ss: self.tau_ss.or(base.tau_ss),
            tproc: self.tproc.or(base.tproc),
            ssb_per_slot: self.ssb_per_slot.or(base.ssb_per_slot),
            special_split: self.special_split.or(base.special_split),
            admission: self.admission.or(base.admission),
            seed: self.seed.or(base.seed),
        }
    }

    /// Materialize the scenario, filling unset fields from the baseline
    /// defaults.
    pub fn build_scenario(&self) -> Result<Scenario, String> {
        let defaults = Scenario::default();
        let law = self.density_law.unwrap_or_default();
        let deployment = match (self.isd, self.density) {
            (Some(_), Some(_)) => return Err("both isd and density set; pick one".to_string()),
            (None, Some(per_m2)) => Deployment::Density { per_m2 },
            (Some(meters), None) => Deployment::Isd { meters, law },
            (None, None) => Deployment::Isd { meters: 100.0, law },
        };
        let variant = self.pattern.unwrap_or(PatternVariant::A);
        let pattern = match variant {
            PatternVariant::A => {
                if let Some(split) = self.special_split {
                    if split != (10, 2, 2) {
                        return Err("pattern a fixes the special split at 10,2,2".to_string());
                    }
                }
                TddPattern::a()
            }
            PatternVariant::B => match self.special_split {
                None => TddPattern::b(),
                Some((dl, gp, ul)) => TddPattern::b_with_split(
                    SpecialSplit::new(dl, gp, ul).map_err(|e| e.to_string())?,
                ),
            },
        };
        Ok(Scenario {
            deployment,
            speed_mps: self.speed.unwrap_or(defaults.speed_mps),
            n_beam_bs: self.nbs.unwrap_or(defaults.n_beam_bs),
            n_beam_ue: self.nue.unwrap_or(defaults.n_beam_ue),
            tau_ss_ms: self.tau_ss.unwrap_or(defaults.tau_ss_ms),
            t_proc_ms: self.tproc.unwrap_or(defaults.t_proc_ms),
            case: self.case.unwrap_or(defaults.case),
            pattern,
            filter: self.filter.unwrap_or(defaults.filter),
            admission: self.admission.unwrap_or(defaults.admission),
            ssb_per_slot: self.ssb_per_slot.unwrap_or(defaults.ssb_per_slot),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(42)
    }
}
